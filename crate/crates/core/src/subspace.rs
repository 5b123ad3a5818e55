//! Affine subspaces of `(F_q^m)^N`.
//!
//! An [`AffineSubspace`] is held in basis form `h0 + Σ αᵢ hᵢ`. Subsets of a
//! fixed ambient subspace that arise while pruning (conditioning on a
//! coordinate, intersecting) are held as [`Restriction`]s: a system of linear
//! equations in the ambient coordinates `α`, kept in reduced row echelon
//! form. Because RREF is unique for a given row space, two restrictions of
//! the same ambient are equal as sets exactly when their systems are equal,
//! which is what [`Restriction::canonical_key`] exposes.
//!
//! The empty set is never a `Restriction`; operations that may produce it
//! return `Option`.

use std::io::{BufRead, Write};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frs::{next_nonempty, parse_u64s, read_word_lines, write_word, FoldedWord};
use crate::gf::{Field, Fp, PrimeField};
use crate::linalg::{rank, rref, solution_from_rref, Matrix};

/// Default cap on the number of points [`AffineSubspace::enumerate`] will
/// produce.
pub const DEFAULT_ENUMERATION_BUDGET: u64 = 1_000_000;

/// `{h0 + Σ αᵢ hᵢ : α ∈ F_q^k}` with linearly independent directions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AffineSubspace {
    point: FoldedWord,
    directions: Vec<FoldedWord>,
}

impl AffineSubspace {
    pub fn new(field: &PrimeField, point: FoldedWord, directions: Vec<FoldedWord>) -> Result<Self> {
        if directions.iter().any(|d| !d.same_shape(&point)) {
            return Err(Error::ShapeMismatch("directions differ in shape from the base point".into()));
        }
        if !directions.is_empty() {
            let n = point.entries().len();
            let m = Matrix::from_rows(n, directions.iter().map(|d| d.entries().to_vec()).collect());
            if rank(field, &m) != directions.len() {
                return Err(Error::BadParams("directions are linearly dependent".into()));
            }
        }
        Ok(AffineSubspace { point, directions })
    }

    /// The zero-dimensional space `{w}`.
    pub fn singleton(w: FoldedWord) -> Self {
        AffineSubspace {
            point: w,
            directions: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    pub fn base_point(&self) -> &FoldedWord {
        &self.point
    }

    pub fn directions(&self) -> &[FoldedWord] {
        &self.directions
    }

    /// The point with coordinates `alpha`.
    pub fn at(&self, field: &PrimeField, alpha: &[Fp]) -> FoldedWord {
        assert_eq!(alpha.len(), self.dim());
        let mut w = self.point.clone();
        for (&a, d) in alpha.iter().zip(&self.directions) {
            w.add_scaled(field, a, d);
        }
        w
    }

    /// Coordinates of `w` in this space, if it is a member.
    pub fn coordinates(&self, field: &PrimeField, w: &FoldedWord) -> Option<Vec<Fp>> {
        if !w.same_shape(&self.point) {
            return None;
        }
        let k = self.dim();
        let diff = w.sub(field, &self.point);
        let rows = (0..diff.entries().len())
            .map(|t| {
                let mut row: Vec<Fp> = self.directions.iter().map(|d| d.entries()[t]).collect();
                row.push(diff.entries()[t]);
                row
            })
            .collect();
        let mut sys = Matrix::from_rows(k + 1, rows);
        let pivots = rref(field, &mut sys);
        solution_from_rref(field, &sys, &pivots, k).map(|s| s.particular)
    }

    pub fn contains(&self, field: &PrimeField, w: &FoldedWord) -> bool {
        self.coordinates(field, w).is_some()
    }

    /// Number of points `q^k`, saturating.
    pub fn size(&self, q: u64) -> u128 {
        (q as u128).saturating_pow(self.dim() as u32)
    }

    /// Every point, in lexicographic order of coordinates.
    pub fn enumerate(&self, field: &PrimeField, budget: u64) -> Result<Vec<FoldedWord>> {
        let q = field.modulus();
        let size = self.size(q);
        if size > budget as u128 {
            return Err(Error::BudgetExceeded {
                needed: format!("{q}^{}", self.dim()),
                budget,
            });
        }
        let k = self.dim();
        let mut alpha = vec![Fp::ZERO; k];
        let mut out = Vec::with_capacity(size as usize);
        loop {
            out.push(self.at(field, &alpha));
            // odometer, last coordinate fastest
            let mut pos = k;
            loop {
                if pos == 0 {
                    return Ok(out);
                }
                pos -= 1;
                let next = alpha[pos].value() as u64 + 1;
                if next < q {
                    alpha[pos] = field.elem(next);
                    break;
                }
                alpha[pos] = Fp::ZERO;
            }
        }
    }

    /// Bytes that are equal for two spaces exactly when they are the same
    /// set: the RREF of the directions followed by the base point reduced
    /// against it.
    pub fn canonical_key(&self, field: &PrimeField) -> Vec<u8> {
        let n = self.point.entries().len();
        let mut dirs = Matrix::from_rows(n, self.directions.iter().map(|d| d.entries().to_vec()).collect());
        let pivots = rref(field, &mut dirs);
        let mut p = self.point.entries().to_vec();
        for (r, &c) in pivots.iter().enumerate() {
            let a = p[c];
            if a != Fp::ZERO {
                for (x, &y) in p.iter_mut().zip(dirs.row(r)) {
                    *x = field.sub(*x, field.mul(a, y));
                }
            }
        }
        let mut key = Vec::with_capacity(8 + 4 * (dirs.as_slice().len() + n));
        key.extend_from_slice(&(self.point.fold() as u32).to_le_bytes());
        key.extend_from_slice(&(pivots.len() as u32).to_le_bytes());
        for v in dirs.as_slice().iter().chain(&p) {
            key.extend_from_slice(&v.value().to_le_bytes());
        }
        key
    }

    /// `{h ∈ self : h(i) = g(i)}`, or `None` when empty.
    pub fn condition(self: &Arc<Self>, field: &PrimeField, g: &FoldedWord, i: usize) -> Option<Restriction> {
        Restriction::whole(Arc::clone(self)).condition(field, g, i)
    }
}

/// A nonempty subset of an ambient [`AffineSubspace`], held as RREF
/// equations `C α = b` with rows `[C | b]`.
#[derive(Clone, Debug)]
pub struct Restriction {
    ambient: Arc<AffineSubspace>,
    system: Matrix<Fp>,
    pivots: Vec<usize>,
}

impl PartialEq for Restriction {
    fn eq(&self, other: &Self) -> bool {
        same_ambient(&self.ambient, &other.ambient) && self.system == other.system
    }
}

impl Eq for Restriction {}

fn same_ambient(a: &Arc<AffineSubspace>, b: &Arc<AffineSubspace>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl Restriction {
    /// The whole ambient space (no equations).
    pub fn whole(ambient: Arc<AffineSubspace>) -> Self {
        let cols = ambient.dim() + 1;
        Restriction {
            ambient,
            system: Matrix::empty(cols),
            pivots: Vec::new(),
        }
    }

    fn from_rows(ambient: Arc<AffineSubspace>, field: &PrimeField, mut rows: Matrix<Fp>) -> Option<Self> {
        let k = ambient.dim();
        let pivots = rref(field, &mut rows);
        if pivots.last() == Some(&k) {
            return None;
        }
        Some(Restriction {
            ambient,
            system: rows,
            pivots,
        })
    }

    pub fn ambient(&self) -> &Arc<AffineSubspace> {
        &self.ambient
    }

    pub fn dim(&self) -> usize {
        self.ambient.dim() - self.pivots.len()
    }

    /// The RREF equation system `[C | b]`.
    pub fn system(&self) -> &Matrix<Fp> {
        &self.system
    }

    /// Adds the `m` equations `h(i) = g(i)`.
    pub fn condition(&self, field: &PrimeField, g: &FoldedWord, i: usize) -> Option<Restriction> {
        let amb = &self.ambient;
        let k = amb.dim();
        let mut rows = self.system.clone();
        let base = amb.point.symbol(i);
        let target = g.symbol(i);
        let mut row = vec![Fp::ZERO; k + 1];
        for j in 0..base.len() {
            for (slot, d) in row.iter_mut().zip(&amb.directions) {
                *slot = d.symbol(i)[j];
            }
            row[k] = field.sub(target[j], base[j]);
            if row.iter().any(|&v| v != Fp::ZERO) {
                rows.push_row(&row);
            }
        }
        Restriction::from_rows(Arc::clone(amb), field, rows)
    }

    /// Exact set intersection.
    pub fn intersect(&self, field: &PrimeField, other: &Restriction) -> Result<Option<Restriction>> {
        if !same_ambient(&self.ambient, &other.ambient) {
            return Err(Error::AmbientMismatch);
        }
        if self.system.rows() == 0 {
            return Ok(Some(other.clone()));
        }
        if other.system.rows() == 0 || self.system == other.system {
            return Ok(Some(self.clone()));
        }
        let rows = self.system.stack(&other.system);
        Ok(Restriction::from_rows(Arc::clone(&self.ambient), field, rows))
    }

    /// Serialized RREF system: equal keys exactly when the sets are equal
    /// (for restrictions of the same ambient).
    pub fn canonical_key(&self) -> Vec<u8> {
        let mut key = Vec::with_capacity(8 + 4 * self.system.as_slice().len());
        key.extend_from_slice(&(self.ambient.dim() as u32).to_le_bytes());
        key.extend_from_slice(&(self.system.rows() as u32).to_le_bytes());
        for v in self.system.as_slice() {
            key.extend_from_slice(&v.value().to_le_bytes());
        }
        key
    }

    /// Extracts a basis for this set.
    pub fn to_subspace(&self, field: &PrimeField) -> AffineSubspace {
        let k = self.ambient.dim();
        let sol = solution_from_rref(field, &self.system, &self.pivots, k)
            .expect("restrictions are consistent by construction");
        let point = self.ambient.at(field, &sol.particular);
        let directions = sol
            .homogeneous
            .iter()
            .map(|v| {
                let mut d = FoldedWord::zeros(point.fold(), point.blocks());
                for (&c, h) in v.iter().zip(&self.ambient.directions) {
                    d.add_scaled(field, c, h);
                }
                d
            })
            .collect();
        AffineSubspace { point, directions }
    }

    pub fn contains(&self, field: &PrimeField, w: &FoldedWord) -> bool {
        let Some(alpha) = self.ambient.coordinates(field, w) else {
            return false;
        };
        let k = self.ambient.dim();
        (0..self.system.rows()).all(|r| {
            let row = self.system.row(r);
            let lhs = row[..k]
                .iter()
                .zip(&alpha)
                .fold(Fp::ZERO, |acc, (&c, &a)| field.add(acc, field.mul(c, a)));
            lhs == row[k]
        })
    }
}

/// Writes `q k`, then the base point and each direction as word blocks.
pub fn write_subspace<W: Write>(out: &mut W, q: u64, h: &AffineSubspace) -> Result<()> {
    writeln!(out, "{} {}", q, h.dim())?;
    write_word(out, q, &h.point)?;
    for d in &h.directions {
        write_word(out, q, d)?;
    }
    Ok(())
}

pub fn read_subspace<R: BufRead>(input: R) -> Result<(u64, AffineSubspace)> {
    let mut lines = input.lines();
    let header = next_nonempty(&mut lines)?.ok_or_else(|| Error::Parse("missing subspace header".into()))?;
    let [q, k] = parse_u64s(&header)?[..] else {
        return Err(Error::Parse(format!("subspace header needs `q k`, got `{header}`")));
    };
    let field = PrimeField::new(q)?;
    let mut words = Vec::with_capacity(k as usize + 1);
    for _ in 0..=k {
        let (wq, w) = read_word_lines(&mut lines)?;
        if wq != q {
            return Err(Error::Parse(format!("word block over q={wq} in a subspace over q={q}")));
        }
        words.push(w);
    }
    let point = words.remove(0);
    Ok((q, AffineSubspace::new(&field, point, words)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn f5() -> PrimeField {
        PrimeField::new(5).unwrap()
    }

    fn word(f: &PrimeField, m: usize, vals: &[u64]) -> FoldedWord {
        FoldedWord::new(m, vals.iter().map(|&v| f.elem(v)).collect()).unwrap()
    }

    fn random_word<R: Rng>(f: &PrimeField, rng: &mut R, m: usize, blocks: usize) -> FoldedWord {
        let q = f.modulus();
        FoldedWord::new(m, (0..m * blocks).map(|_| f.elem(rng.gen_range(0..q))).collect()).unwrap()
    }

    fn random_space<R: Rng>(f: &PrimeField, rng: &mut R, k: usize, m: usize, blocks: usize) -> AffineSubspace {
        loop {
            let p = random_word(f, rng, m, blocks);
            let dirs = (0..k).map(|_| random_word(f, rng, m, blocks)).collect();
            if let Ok(h) = AffineSubspace::new(f, p, dirs) {
                return h;
            }
        }
    }

    fn point_set(f: &PrimeField, r: Option<&Restriction>) -> BTreeSet<FoldedWord> {
        r.map(|r| r.to_subspace(f).enumerate(f, 100_000).unwrap().into_iter().collect())
            .unwrap_or_default()
    }

    #[test]
    fn condition_examples() {
        let f = f5();
        // line: h0 = 0, h1 nonzero at column 0 and zero at column 1
        let h0 = word(&f, 2, &[0, 0, 1, 2]);
        let h1 = word(&f, 2, &[1, 3, 0, 0]);
        let line = Arc::new(AffineSubspace::new(&f, h0, vec![h1]).unwrap());
        let g = word(&f, 2, &[2, 1, 1, 2]);
        let c0 = line.condition(&f, &g, 0);
        // 2 = a, 1 = 3a -> a = 2 gives 6 = 1 mod 5: consistent
        assert_eq!(c0.as_ref().map(Restriction::dim), Some(0));
        let c1 = line.condition(&f, &g, 1).unwrap();
        assert_eq!(c1.dim(), 1);
        assert_eq!(c1, Restriction::whole(Arc::clone(&line)));
        let g_off = word(&f, 2, &[2, 1, 1, 3]);
        assert!(line.condition(&f, &g_off, 1).is_none());
    }

    #[test]
    fn condition_matches_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [5u64, 7] {
            let f = PrimeField::new(q).unwrap();
            for _ in 0..40 {
                let blocks = rng.gen_range(2..5);
                let m = rng.gen_range(1..3);
                let k = rng.gen_range(0..=(m * blocks).min(3));
                let h = Arc::new(random_space(&f, &mut rng, k, m, blocks));
                // received words drawn from h half of the time, so conditions are often consistent
                let g = if rng.gen_bool(0.5) {
                    let alpha: Vec<Fp> = (0..k).map(|_| f.elem(rng.gen_range(0..q))).collect();
                    let mut w = h.at(&f, &alpha);
                    let noise = random_word(&f, &mut rng, m, blocks);
                    let i = rng.gen_range(0..blocks);
                    w.add_scaled(&f, Fp::ONE, &FoldedWord::new(m, {
                        let mut v = vec![Fp::ZERO; m * blocks];
                        v[i * m..(i + 1) * m].copy_from_slice(noise.symbol(i));
                        v
                    }).unwrap());
                    w
                } else {
                    random_word(&f, &mut rng, m, blocks)
                };
                let all = h.enumerate(&f, 100_000).unwrap();
                for i in 0..blocks {
                    let got = point_set(&f, h.condition(&f, &g, i).as_ref());
                    let expect: BTreeSet<_> = all.iter().filter(|w| w.symbol(i) == g.symbol(i)).cloned().collect();
                    assert_eq!(got, expect);
                    if let Some(r) = h.condition(&f, &g, i) {
                        assert!(r.dim() <= k && r.dim() + m >= k);
                    }
                }
            }
        }
    }

    #[test]
    fn intersect_matches_enumeration_and_keys_are_canonical() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let f = f5();
        for _ in 0..60 {
            let k = rng.gen_range(1..=3);
            let blocks = 4;
            let h = Arc::new(random_space(&f, &mut rng, k, 1, blocks));
            let alpha: Vec<Fp> = (0..k).map(|_| f.elem(rng.gen_range(0..5))).collect();
            let near = h.at(&f, &alpha);
            let g1 = random_word(&f, &mut rng, 1, blocks);
            let pick = |g: &FoldedWord, i: usize| {
                let mut w = g.clone();
                if i % 2 == 0 {
                    w = near.clone();
                }
                w
            };
            let a = h.condition(&f, &pick(&g1, 0), rng.gen_range(0..blocks));
            let b = h.condition(&f, &pick(&g1, rng.gen_range(0..2)), rng.gen_range(0..blocks));
            let (Some(a), Some(b)) = (a, b) else { continue };
            let inter = a.intersect(&f, &b).unwrap();
            let sa = point_set(&f, Some(&a));
            let sb = point_set(&f, Some(&b));
            let expect: BTreeSet<_> = sa.intersection(&sb).cloned().collect();
            assert_eq!(point_set(&f, inter.as_ref()), expect);
            if let Some(i) = &inter {
                assert!(i.dim() <= a.dim().min(b.dim()));
            }
            // key equality iff set equality
            assert_eq!(a.canonical_key() == b.canonical_key(), sa == sb);
            assert_eq!(a.canonical_key(), a.clone().canonical_key());
        }
    }

    #[test]
    fn intersect_examples() {
        let f = f5();
        // plane in F_5^3 (m=1, N=3) spanned by e1, e2 around 0
        let zero = word(&f, 1, &[0, 0, 0]);
        let plane = Arc::new(
            AffineSubspace::new(&f, zero, vec![word(&f, 1, &[1, 0, 0]), word(&f, 1, &[0, 1, 0])]).unwrap(),
        );
        let whole = Restriction::whole(Arc::clone(&plane));
        assert_eq!(whole.intersect(&f, &whole).unwrap(), Some(whole.clone()));
        // x = 1 and x = 2 are parallel lines
        let x1 = plane.condition(&f, &word(&f, 1, &[1, 0, 0]), 0).unwrap();
        let x2 = plane.condition(&f, &word(&f, 1, &[2, 0, 0]), 0).unwrap();
        assert_eq!(x1.dim(), 1);
        assert!(x1.intersect(&f, &x2).unwrap().is_none());
        // x = 1 meets y = 3 in the single point (1, 3, 0)
        let y3 = plane.condition(&f, &word(&f, 1, &[0, 3, 0]), 1).unwrap();
        let meet = x1.intersect(&f, &y3).unwrap().unwrap();
        let expect: BTreeSet<_> = point_set(&f, Some(&x1)).intersection(&point_set(&f, Some(&y3))).cloned().collect();
        assert_eq!(expect.len(), 1);
        assert_eq!(point_set(&f, Some(&meet)), expect);
        // different ambient
        let other = Arc::new(AffineSubspace::singleton(word(&f, 1, &[1, 1, 1])));
        assert!(matches!(x1.intersect(&f, &Restriction::whole(other)), Err(Error::AmbientMismatch)));
    }

    #[test]
    fn keys_from_two_descriptions_agree() {
        let f = f5();
        let zero = word(&f, 1, &[0, 0, 0]);
        let plane = Arc::new(
            AffineSubspace::new(&f, zero, vec![word(&f, 1, &[1, 0, 0]), word(&f, 1, &[0, 1, 0])]).unwrap(),
        );
        // the point (1, 3, 0): x=1 then y=3, versus y=3 then x=1 via different generators
        let a = plane
            .condition(&f, &word(&f, 1, &[1, 0, 0]), 0)
            .unwrap()
            .condition(&f, &word(&f, 1, &[0, 3, 0]), 1)
            .unwrap();
        let b = plane
            .condition(&f, &word(&f, 1, &[0, 3, 0]), 1)
            .unwrap()
            .condition(&f, &word(&f, 1, &[1, 4, 4]), 0)
            .unwrap();
        assert_eq!(point_set(&f, Some(&a)), point_set(&f, Some(&b)));
        assert_eq!(a.canonical_key(), b.canonical_key());
        let c = plane
            .condition(&f, &word(&f, 1, &[1, 0, 0]), 0)
            .unwrap()
            .condition(&f, &word(&f, 1, &[0, 4, 0]), 1)
            .unwrap();
        assert_ne!(a.canonical_key(), c.canonical_key());
    }

    #[test]
    fn enumerate_counts_and_budget() {
        let f = f5();
        let p = AffineSubspace::singleton(word(&f, 1, &[1, 2]));
        assert_eq!(p.enumerate(&f, 10).unwrap().len(), 1);
        let plane = AffineSubspace::new(&f, word(&f, 1, &[1, 2]), vec![word(&f, 1, &[1, 0]), word(&f, 1, &[0, 1])]).unwrap();
        assert_eq!(plane.enumerate(&f, 100).unwrap().len(), 25);
        let f17 = PrimeField::new(17).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random_space(&f17, &mut rng, 4, 1, 6);
        assert!(matches!(h.enumerate(&f17, 10_000), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn space_keys_ignore_basis_choice() {
        let f = f5();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..30 {
            let h = random_space(&f, &mut rng, 2, 2, 3);
            // another base point and a mixed basis for the same set
            let alpha: Vec<Fp> = (0..2).map(|_| f.elem(rng.gen_range(0..5))).collect();
            let d = h.directions();
            let mixed = vec![d[0].add(&f, &d[1]), d[1].scale(&f, f.elem(3))];
            let same = AffineSubspace::new(&f, h.at(&f, &alpha), mixed).unwrap();
            assert_eq!(h.canonical_key(&f), same.canonical_key(&f));
            let shifted = AffineSubspace::new(&f, h.base_point().add(&f, &random_word(&f, &mut rng, 2, 3)), d.to_vec()).unwrap();
            let sets_equal = point_set_of(&f, &h) == point_set_of(&f, &shifted);
            assert_eq!(h.canonical_key(&f) == shifted.canonical_key(&f), sets_equal);
        }
    }

    fn point_set_of(f: &PrimeField, h: &AffineSubspace) -> BTreeSet<FoldedWord> {
        h.enumerate(f, 100_000).unwrap().into_iter().collect()
    }

    #[test]
    fn dependent_directions_rejected() {
        let f = f5();
        let d = word(&f, 1, &[1, 2]);
        assert!(AffineSubspace::new(&f, word(&f, 1, &[0, 0]), vec![d.clone(), d.scale(&f, f.elem(3))]).is_err());
    }

    #[test]
    fn subspace_file_round_trip() {
        let f = f5();
        let h = AffineSubspace::new(&f, word(&f, 2, &[1, 2, 3, 4]), vec![word(&f, 2, &[0, 1, 0, 1])]).unwrap();
        let mut buf = Vec::new();
        write_subspace(&mut buf, 5, &h).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "5 1\n5 4 2 2\n1 2\n3 4\n5 4 2 2\n0 1\n0 1\n");
        assert_eq!(read_subspace(&buf[..]).unwrap(), (5, h));
    }
}
