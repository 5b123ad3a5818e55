//! Folded Reed–Solomon codes.
//!
//! A message polynomial `f` of degree `< rn` is evaluated on `1, γ, …, γ^{n-1}`
//! and the evaluations are bundled `m` at a time, giving `N = n / m` symbols
//! over `F_q^m`. Distances are normalized Hamming distances over symbols.

use std::fmt;
use std::io::{BufRead, Write};
use std::sync::Arc;

use num_traits::{One, Zero};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gf::{primitive_element, Field, Fp, PrimeField};
use crate::linalg::{solve_augmented, Matrix};
use crate::poly::Polynomial;
use crate::Rational;

/// An element of `(F_q^m)^N`, stored symbol-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FoldedWord {
    m: usize,
    data: Vec<Fp>,
}

impl FoldedWord {
    pub fn new(m: usize, data: Vec<Fp>) -> Result<Self> {
        if m == 0 || data.len() % m != 0 {
            return Err(Error::ShapeMismatch(format!(
                "{} entries cannot be folded into symbols of size {m}",
                data.len()
            )));
        }
        Ok(FoldedWord { m, data })
    }

    pub fn zeros(m: usize, blocks: usize) -> Self {
        FoldedWord {
            m,
            data: vec![Fp::ZERO; m * blocks],
        }
    }

    pub fn from_symbols(symbols: Vec<Vec<Fp>>) -> Result<Self> {
        let m = symbols.first().map_or(0, Vec::len);
        if symbols.iter().any(|s| s.len() != m) {
            return Err(Error::ShapeMismatch("symbols of unequal length".into()));
        }
        FoldedWord::new(m, symbols.concat())
    }

    /// Folding parameter `m`.
    #[inline]
    pub fn fold(&self) -> usize {
        self.m
    }

    /// Number of symbols `N`.
    #[inline]
    pub fn blocks(&self) -> usize {
        self.data.len() / self.m
    }

    #[inline]
    pub fn symbol(&self, i: usize) -> &[Fp] {
        &self.data[i * self.m..(i + 1) * self.m]
    }

    pub fn symbols(&self) -> impl Iterator<Item = &[Fp]> {
        self.data.chunks(self.m)
    }

    /// The unfolded evaluation vector of length `n`.
    pub fn entries(&self) -> &[Fp] {
        &self.data
    }

    pub fn same_shape(&self, other: &FoldedWord) -> bool {
        self.m == other.m && self.data.len() == other.data.len()
    }

    fn check_shape(&self, other: &FoldedWord) -> Result<()> {
        if self.same_shape(other) {
            Ok(())
        } else {
            Err(Error::ShapeMismatch(format!(
                "{}x{} vs {}x{}",
                self.blocks(),
                self.m,
                other.blocks(),
                other.m
            )))
        }
    }

    pub fn add(&self, field: &PrimeField, other: &FoldedWord) -> FoldedWord {
        debug_assert!(self.same_shape(other));
        FoldedWord {
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| field.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, field: &PrimeField, other: &FoldedWord) -> FoldedWord {
        debug_assert!(self.same_shape(other));
        FoldedWord {
            m: self.m,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| field.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, field: &PrimeField, c: Fp) -> FoldedWord {
        FoldedWord {
            m: self.m,
            data: self.data.iter().map(|&a| field.mul(a, c)).collect(),
        }
    }

    /// `self + c * other`, in place.
    pub fn add_scaled(&mut self, field: &PrimeField, c: Fp, other: &FoldedWord) {
        debug_assert!(self.same_shape(other));
        if c == Fp::ZERO {
            return;
        }
        for (a, &b) in self.data.iter_mut().zip(&other.data) {
            *a = field.add(*a, field.mul(c, b));
        }
    }

    /// Number of symbol positions where the two words differ.
    pub fn disagreements(&self, other: &FoldedWord) -> Result<usize> {
        self.check_shape(other)?;
        Ok(self
            .symbols()
            .zip(other.symbols())
            .filter(|(a, b)| a != b)
            .count())
    }

    /// Compact single-line serialization: symbols separated by `;`, entries
    /// by `,`.
    pub fn canonical_string(&self) -> String {
        let mut out = String::with_capacity(self.data.len() * 3);
        for (i, s) in self.symbols().enumerate() {
            if i > 0 {
                out.push(';');
            }
            for (j, v) in s.iter().enumerate() {
                if j > 0 {
                    out.push(',');
                }
                out.push_str(&v.to_string());
            }
        }
        out
    }
}

impl fmt::Display for FoldedWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_string())
    }
}

/// Normalized symbol Hamming distance.
pub fn folded_distance(u: &FoldedWord, v: &FoldedWord) -> Result<Rational> {
    let d = u.disagreements(v)?;
    Ok(Rational::new(d as i64, u.blocks() as i64))
}

/// Whether `distance(u, v) < radius`, computed without building a rational.
pub fn within_radius(u: &FoldedWord, v: &FoldedWord, radius: &Rational) -> Result<bool> {
    let d = u.disagreements(v)? as i128;
    let blocks = u.blocks() as i128;
    // d / N < a / b  <=>  d * b < a * N  (b > 0 after normalization)
    Ok(d * (*radius.denom() as i128) < (*radius.numer() as i128) * blocks)
}

/// Parameters of an `m`-folded Reed–Solomon code.
#[derive(Clone, Debug)]
pub struct FrsParams {
    field: PrimeField,
    n: usize,
    m: usize,
    rn: usize,
    gamma: Fp,
    points: Arc<Vec<Fp>>,
}

/// Plain-data view of [`FrsParams`] for reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ParamsRecord {
    pub q: u64,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "N")]
    pub blocks: usize,
    pub rn: usize,
    pub gamma: u32,
}

impl FrsParams {
    /// Code over `F_q` with unfolded length `n`, folding `m` and message
    /// degree bound `rn`; `γ` is the smallest primitive element.
    pub fn new(q: u64, n: usize, m: usize, rn: usize) -> Result<Self> {
        let field = PrimeField::new(q)?;
        let gamma = primitive_element(q)?;
        FrsParams::with_gamma(field, n, m, rn, gamma)
    }

    pub fn with_gamma(field: PrimeField, n: usize, m: usize, rn: usize, gamma: Fp) -> Result<Self> {
        if m == 0 || n == 0 || n % m != 0 {
            return Err(Error::BadParams(format!("m={m} must divide n={n}")));
        }
        if field.modulus() <= n as u64 {
            return Err(Error::BadParams(format!(
                "field size {} must exceed n={n}",
                field.modulus()
            )));
        }
        if rn == 0 || rn >= n {
            return Err(Error::BadParams(format!("degree bound {rn} must lie in [1, {n})")));
        }
        let order = field.multiplicative_order(gamma)?;
        if order < n as u64 {
            return Err(Error::OrderTooSmall {
                order,
                needed: n as u64,
            });
        }
        let points = Polynomial::monomial(1).eval_geometric(&field, gamma, n)?;
        Ok(FrsParams {
            field,
            n,
            m,
            rn,
            gamma,
            points: Arc::new(points),
        })
    }

    /// Same code with a field that counts its operations.
    pub fn with_op_counter(&self) -> Self {
        FrsParams {
            field: self.field.with_op_counter(),
            ..self.clone()
        }
    }

    pub fn field(&self) -> &PrimeField {
        &self.field
    }
    pub fn q(&self) -> u64 {
        self.field.modulus()
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn m(&self) -> usize {
        self.m
    }
    /// Block length `N = n / m`.
    pub fn blocks(&self) -> usize {
        self.n / self.m
    }
    /// Degree bound `Rn` (message length).
    pub fn rn(&self) -> usize {
        self.rn
    }
    pub fn gamma(&self) -> Fp {
        self.gamma
    }
    pub fn rate(&self) -> Rational {
        Rational::new(self.rn as i64, self.n as i64)
    }
    /// Evaluation points `γ^0 … γ^{n-1}`.
    pub fn points(&self) -> &[Fp] {
        &self.points
    }

    /// The distance used when pruning: `1 - R`.
    pub fn designed_distance(&self) -> Rational {
        Rational::one() - self.rate()
    }

    pub fn record(&self) -> ParamsRecord {
        ParamsRecord {
            q: self.q(),
            n: self.n,
            m: self.m,
            blocks: self.blocks(),
            rn: self.rn,
            gamma: self.gamma.value(),
        }
    }

    /// Radius `s/(s+1) · (1 - mR/(m-s+1))` for this code.
    pub fn radius(&self, s: usize) -> Result<Rational> {
        decoding_radius(s, self.m, self.rate())
    }

    pub fn check_word(&self, w: &FoldedWord) -> Result<()> {
        if w.fold() != self.m || w.blocks() != self.blocks() {
            return Err(Error::ShapeMismatch(format!(
                "word is {}x{}, code expects {}x{}",
                w.blocks(),
                w.fold(),
                self.blocks(),
                self.m
            )));
        }
        Ok(())
    }

    /// Codewords of the monomials `1, X, …, X^{rn-1}`.
    pub fn monomial_codewords(&self) -> Vec<FoldedWord> {
        (0..self.rn)
            .map(|d| encode(self, &Polynomial::monomial(d)).expect("degree below bound"))
            .collect()
    }

    /// Recovers the message of a codeword, or `None` when `w` is not a
    /// codeword.
    pub fn message_of(&self, w: &FoldedWord) -> Option<Polynomial> {
        if self.check_word(w).is_err() {
            return None;
        }
        let field = &self.field;
        // Vandermonde system on the first rn evaluation points
        let mut rows = Vec::with_capacity(self.rn);
        for t in 0..self.rn {
            let x = self.points[t];
            let mut row = Vec::with_capacity(self.rn + 1);
            let mut p = Fp::ONE;
            for _ in 0..self.rn {
                row.push(p);
                p = field.mul(p, x);
            }
            row.push(w.entries()[t]);
            rows.push(row);
        }
        let sol = solve_augmented(field, &Matrix::from_rows(self.rn + 1, rows))?;
        let f = Polynomial::new(sol.particular);
        (encode(self, &f).ok()? == *w).then_some(f)
    }

    pub fn is_codeword(&self, w: &FoldedWord) -> bool {
        self.message_of(w).is_some()
    }

    /// Uniformly random message polynomial of degree `< rn`.
    pub fn random_message<R: Rng>(&self, rng: &mut R) -> Polynomial {
        let q = self.q();
        Polynomial::new((0..self.rn).map(|_| self.field.elem(rng.gen_range(0..q))).collect())
    }
}

/// Encodes `f`: symbol `i`, row `j` holds `f(γ^{im+j})`.
pub fn encode(params: &FrsParams, f: &Polynomial) -> Result<FoldedWord> {
    if let Some(d) = f.degree() {
        if d >= params.rn {
            return Err(Error::DegreeTooHigh {
                degree: d,
                bound: params.rn,
            });
        }
    }
    let data = params.points.iter().map(|&x| f.eval(&params.field, x)).collect();
    FoldedWord::new(params.m, data)
}

/// Replaces exactly `e` uniformly chosen symbols of `c` by uniformly random
/// different symbols.
pub fn corrupt(field: &PrimeField, c: &FoldedWord, e: usize, seed: u64) -> Result<FoldedWord> {
    let blocks = c.blocks();
    if e > blocks {
        return Err(Error::TooManyErrors { errors: e, len: blocks });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = c.clone();
    let m = c.fold();
    let q = field.modulus();
    for pos in sample(&mut rng, blocks, e).iter() {
        let original = c.symbol(pos).to_vec();
        let replacement = loop {
            let cand: Vec<Fp> = (0..m).map(|_| field.elem(rng.gen_range(0..q))).collect();
            if cand != original {
                break cand;
            }
        };
        out.data[pos * m..(pos + 1) * m].copy_from_slice(&replacement);
    }
    Ok(out)
}

/// `s/(s+1) · (1 - mR/(m-s+1))`, exactly.
pub fn decoding_radius(s: usize, m: usize, rate: Rational) -> Result<Rational> {
    if s == 0 || s > m {
        return Err(Error::BadParams(format!("need 1 <= s <= m, got s={s}, m={m}")));
    }
    if rate <= Rational::zero() || rate >= Rational::one() {
        return Err(Error::BadParams(format!("rate {rate} outside (0, 1)")));
    }
    let s = s as i64;
    let m = m as i64;
    Ok(Rational::new(s, s + 1) * (Rational::one() - Rational::from(m) * rate / Rational::from(m - s + 1)))
}

/// Writes the word file format: `q n m N` then `N` lines of `m` integers.
pub fn write_word<W: Write>(out: &mut W, q: u64, w: &FoldedWord) -> Result<()> {
    writeln!(out, "{} {} {} {}", q, w.entries().len(), w.fold(), w.blocks())?;
    for s in w.symbols() {
        let line: Vec<String> = s.iter().map(Fp::to_string).collect();
        writeln!(out, "{}", line.join(" "))?;
    }
    Ok(())
}

pub fn word_to_string(q: u64, w: &FoldedWord) -> String {
    let mut buf = Vec::new();
    write_word(&mut buf, q, w).expect("writing to memory");
    String::from_utf8(buf).expect("ascii")
}

/// Parses one word block from a line source; returns `(q, word)`.
pub fn read_word_lines<I>(lines: &mut I) -> Result<(u64, FoldedWord)>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    let header = next_nonempty(lines)?.ok_or_else(|| Error::Parse("missing word header".into()))?;
    let nums = parse_u64s(&header)?;
    let [q, n, m, blocks] = nums[..] else {
        return Err(Error::Parse(format!("word header needs `q n m N`, got `{header}`")));
    };
    if m == 0 || n != m * blocks {
        return Err(Error::Parse(format!("inconsistent header `{header}`")));
    }
    let field = PrimeField::new(q)?;
    let mut data = Vec::with_capacity(n as usize);
    for i in 0..blocks {
        let line = next_nonempty(lines)?
            .ok_or_else(|| Error::Parse(format!("missing symbol line {i}")))?;
        let vals = parse_u64s(&line)?;
        if vals.len() as u64 != m {
            return Err(Error::Parse(format!("symbol line {i} has {} values, expected {m}", vals.len())));
        }
        for v in vals {
            if v >= q {
                return Err(Error::Parse(format!("value {v} not reduced mod {q}")));
            }
            data.push(field.elem(v));
        }
    }
    Ok((q, FoldedWord::new(m as usize, data)?))
}

pub fn read_word<R: BufRead>(input: R) -> Result<(u64, FoldedWord)> {
    read_word_lines(&mut input.lines())
}

pub(crate) fn next_nonempty<I>(lines: &mut I) -> Result<Option<String>>
where
    I: Iterator<Item = std::io::Result<String>>,
{
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            return Ok(Some(line));
        }
    }
    Ok(None)
}

pub(crate) fn parse_u64s(line: &str) -> Result<Vec<u64>> {
    line.split_whitespace()
        .map(|t| t.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer `{t}`"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn small() -> FrsParams {
        FrsParams::new(17, 8, 2, 2).unwrap()
    }

    fn w(f: &PrimeField, m: usize, vals: &[u64]) -> FoldedWord {
        FoldedWord::new(m, vals.iter().map(|&v| f.elem(v)).collect()).unwrap()
    }

    #[test]
    fn encode_example() {
        let p = small();
        assert_eq!(p.gamma().value(), 3);
        let c = encode(&p, &Polynomial::monomial(1)).unwrap();
        // powers of 3 mod 17: 1 3 9 10 13 5 15 11
        assert_eq!(c, w(p.field(), 2, &[1, 3, 9, 10, 13, 5, 15, 11]));
        let zero = encode(&p, &Polynomial::zero()).unwrap();
        assert_eq!(zero, FoldedWord::zeros(2, 4));
        let c7 = encode(&p, &Polynomial::constant(p.field().elem(7))).unwrap();
        assert!(c7.entries().iter().all(|v| v.value() == 7));
        assert!(matches!(
            encode(&p, &Polynomial::monomial(2)),
            Err(Error::DegreeTooHigh { degree: 2, bound: 2 })
        ));
    }

    #[test]
    fn distance_examples() {
        let p = small();
        let f = p.field();
        let u = encode(&p, &Polynomial::monomial(1)).unwrap();
        assert_eq!(folded_distance(&u, &u).unwrap(), Rational::zero());
        let mut v = u.clone();
        v.data[5] = f.add(v.data[5], Fp::ONE);
        assert_eq!(folded_distance(&u, &v).unwrap(), Rational::new(1, 4));
        let other = FoldedWord::zeros(4, 2);
        assert!(matches!(folded_distance(&u, &other), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn distinct_codewords_with_rn_2_m_2_never_agree() {
        // f - g has < 2 roots, each agreeing column would need 2
        let p = small();
        let words: Vec<FoldedWord> = (0..17u64)
            .flat_map(|a| (0..17u64).map(move |b| (a, b)))
            .map(|(a, b)| encode(&p, &Polynomial::from_u64s(p.field(), &[a, b])).unwrap())
            .collect();
        for (i, u) in words.iter().enumerate().step_by(7) {
            for v in words.iter().skip(i + 1) {
                assert_eq!(folded_distance(u, v).unwrap(), Rational::one());
            }
        }
    }

    #[test]
    fn corrupt_examples() {
        let p = FrsParams::new(31, 24, 2, 4).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let c = encode(&p, &p.random_message(&mut rng)).unwrap();
        assert_eq!(corrupt(p.field(), &c, 0, 9).unwrap(), c);
        let all = corrupt(p.field(), &c, 12, 9).unwrap();
        assert_eq!(folded_distance(&c, &all).unwrap(), Rational::one());
        let three = corrupt(p.field(), &c, 3, 9).unwrap();
        assert_eq!(folded_distance(&c, &three).unwrap(), Rational::new(1, 4));
        assert_eq!(three, corrupt(p.field(), &c, 3, 9).unwrap());
        assert!(matches!(corrupt(p.field(), &c, 13, 9), Err(Error::TooManyErrors { .. })));
    }

    #[test]
    fn radius_examples() {
        let r = Rational::new(1, 4);
        assert_eq!(decoding_radius(1, 4, r).unwrap(), (Rational::one() - r) / 2);
        assert_eq!(decoding_radius(2, 4, r).unwrap(), Rational::new(4, 9));
        assert!(matches!(decoding_radius(5, 4, r), Err(Error::BadParams(_))));
        // s = 1/eps, m = s^2 reaches 1 - R - eps
        for s in 1..=8usize {
            let eps = Rational::new(1, s as i64);
            for (a, b) in [(1, 10), (1, 4), (1, 2), (3, 4)] {
                let rate = Rational::new(a, b);
                let rad = decoding_radius(s, s * s, rate).unwrap();
                assert!(rad >= Rational::one() - rate - eps, "s={s} R={rate}");
            }
        }
    }

    #[test]
    fn word_file_round_trip_is_bit_exact() {
        let p = small();
        let c = encode(&p, &Polynomial::monomial(1)).unwrap();
        let text = word_to_string(17, &c);
        assert_eq!(text, "17 8 2 4\n1 3\n9 10\n13 5\n15 11\n");
        let (q, back) = read_word(text.as_bytes()).unwrap();
        assert_eq!((q, back), (17, c));
        assert!(read_word("17 8 2 4\n1 3\n".as_bytes()).is_err());
        assert!(read_word("17 8 2 4\n1 3\n9 10\n13 5\n15 17\n".as_bytes()).is_err());
    }

    #[test]
    fn message_recovery() {
        let p = FrsParams::new(31, 15, 3, 3).unwrap();
        let f = Polynomial::from_u64s(p.field(), &[4, 0, 9]);
        let c = encode(&p, &f).unwrap();
        assert_eq!(p.message_of(&c), Some(f));
        let bad = corrupt(p.field(), &c, 1, 3).unwrap();
        assert!(!p.is_codeword(&bad));
    }

    #[test]
    fn param_validation() {
        assert!(FrsParams::new(17, 9, 2, 2).is_err());
        assert!(FrsParams::new(17, 18, 2, 2).is_err());
        assert!(FrsParams::new(17, 8, 2, 8).is_err());
        assert!(FrsParams::new(16, 8, 2, 2).is_err());
    }

    proptest! {
        #[test]
        fn encoding_is_linear(a in 0u64..31, b in 0u64..31,
                              fc in proptest::collection::vec(0u64..31, 0..4),
                              gc in proptest::collection::vec(0u64..31, 0..4)) {
            let p = FrsParams::new(31, 24, 3, 4).unwrap();
            let field = p.field();
            let (a, b) = (field.elem(a), field.elem(b));
            let fp = Polynomial::from_u64s(field, &fc);
            let gp = Polynomial::from_u64s(field, &gc);
            let lhs = encode(&p, &fp.scale(field, a).add(field, &gp.scale(field, b))).unwrap();
            let rhs = encode(&p, &fp).unwrap().scale(field, a).add(field, &encode(&p, &gp).unwrap().scale(field, b));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn distinct_codewords_agree_rarely(fc in proptest::collection::vec(0u64..31, 4), gc in proptest::collection::vec(0u64..31, 4)) {
            let p = FrsParams::new(31, 24, 3, 4).unwrap();
            let u = encode(&p, &Polynomial::from_u64s(p.field(), &fc)).unwrap();
            let v = encode(&p, &Polynomial::from_u64s(p.field(), &gc)).unwrap();
            prop_assume!(u != v);
            let agree = p.blocks() - u.disagreements(&v).unwrap();
            prop_assert!(agree <= (p.rn() - 1) / p.m());
        }

        #[test]
        fn corruption_distance_is_exact(e in 0usize..=8, seed in any::<u64>()) {
            let p = FrsParams::new(17, 16, 2, 3).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let c = encode(&p, &p.random_message(&mut rng)).unwrap();
            let g = corrupt(p.field(), &c, e, seed).unwrap();
            prop_assert_eq!(folded_distance(&c, &g).unwrap(), Rational::new(e as i64, 8));
        }
    }
}
