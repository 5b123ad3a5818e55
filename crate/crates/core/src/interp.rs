//! Linear-algebraic interpolation: finds an affine subspace of the code of
//! dimension at most `s - 1` that contains every codeword within
//! `decoding_radius(s, m, R)` of the received word.
//!
//! The interpolant is `Q(X, Y_1..Y_s) = A_0(X) + Σ A_i(X) Y_i` with
//! `deg A_i ≤ D` and `deg A_0 ≤ D + Rn - 1`, vanishing on every length-`s`
//! window inside every received symbol. Any close message `f` then satisfies
//! `A_0(X) + Σ A_i(X) f(γ^{i-1} X) ≡ 0`, a linear system in the coefficients
//! of `f` whose solution space has dimension at most `s - 1`.

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frs::{encode, FoldedWord, FrsParams};
use crate::gf::{Field, Fp};
use crate::linalg::{nullspace_of_rref, rank, rref, solve_augmented, Matrix};
use crate::poly::Polynomial;
use crate::subspace::AffineSubspace;
use crate::Rational;

/// Interpolation order `s` and degree budget `D`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct InterpConfig {
    pub s: usize,
    pub d: usize,
}

impl InterpConfig {
    /// Smallest `D` for which the unknowns outnumber the vanishing
    /// constraints, after checking that the radius argument closes.
    pub fn new(params: &FrsParams, s: usize) -> Result<Self> {
        let m = params.m();
        if s == 0 || s > m {
            return Err(Error::BadParams(format!("need 1 <= s <= m, got s={s}, m={m}")));
        }
        let constraints = (params.blocks() * (m - s + 1)) as i64;
        let rn = params.rn() as i64;
        let s_i = s as i64;
        let numer = constraints - rn - s_i + 1;
        let d = if numer <= 0 { 0 } else { (numer + s_i) / (s_i + 1) } as usize;
        let cfg = InterpConfig { s, d };
        debug_assert!(cfg.unknowns(params) > constraints as usize);
        let radius = params.radius(s)?;
        let lhs = (Rational::one() - radius) * Rational::from(constraints);
        let rhs = Rational::from((d + params.rn()) as i64 - 1);
        if lhs <= rhs {
            return Err(Error::ParamsInfeasible(format!(
                "(1 - {radius}) * {constraints} = {lhs} does not exceed D + Rn - 1 = {rhs}"
            )));
        }
        Ok(cfg)
    }

    pub fn unknowns(&self, params: &FrsParams) -> usize {
        self.s * (self.d + 1) + self.d + params.rn()
    }
}

/// Computes the container subspace for `g`.
pub fn find_container(params: &FrsParams, g: &FoldedWord, s: usize) -> Result<AffineSubspace> {
    params.check_word(g)?;
    let cfg = InterpConfig::new(params, s)?;
    let field = params.field();
    let (m, d, rn) = (params.m(), cfg.d, params.rn());
    let a0_len = d + rn;
    let unknowns = cfg.unknowns(params);

    let mut system = Matrix::filled(0, unknowns, Fp::ZERO);
    let mut row = vec![Fp::ZERO; unknowns];
    let mut powers = vec![Fp::ZERO; a0_len];
    for b in 0..params.blocks() {
        let sym = g.symbol(b);
        for j in 0..=(m - s) {
            let x = params.points()[b * m + j];
            let mut p = Fp::ONE;
            for slot in powers.iter_mut() {
                *slot = p;
                p = field.mul(p, x);
            }
            row[..a0_len].copy_from_slice(&powers);
            for i in 0..s {
                let y = sym[j + i];
                let off = a0_len + i * (d + 1);
                for t in 0..=d {
                    row[off + t] = field.mul(y, powers[t]);
                }
            }
            system.push_row(&row);
        }
    }
    let pivots = rref(field, &mut system);
    let kernel = nullspace_of_rref(field, &system, &pivots);
    if kernel.is_empty() {
        return Err(Error::DegenerateSystem("no nonzero interpolant".into()));
    }
    let zero_word = || AffineSubspace::singleton(FoldedWord::zeros(m, params.blocks()));
    // An interpolant with A_1..A_s all zero is a nonzero A_0 vanishing on all
    // window points; no close codeword can exist then, and any point is a
    // valid container for the empty list.
    let Some(q) = kernel.iter().find(|v| v[a0_len..].iter().any(|&c| c != Fp::ZERO)) else {
        return Ok(zero_word());
    };
    let a0 = &q[..a0_len];
    let a = |i: usize, t: usize| q[a0_len + i * (d + 1) + t];

    // γ^{(i-1)c} for i in 1..=s, c < rn
    let gamma = params.gamma();
    let shift: Vec<Vec<Fp>> = (0..s)
        .map(|i| {
            let step = field.pow(gamma, i as u64);
            let mut acc = Fp::ONE;
            (0..rn)
                .map(|_| {
                    let v = acc;
                    acc = field.mul(acc, step);
                    v
                })
                .collect()
        })
        .collect();

    let mut fsys = Matrix::filled(0, rn + 1, Fp::ZERO);
    let mut frow = vec![Fp::ZERO; rn + 1];
    for t in 0..(d + rn) {
        for c in 0..rn {
            let mut acc = Fp::ZERO;
            if t >= c && t - c <= d {
                for i in 0..s {
                    acc = field.add(acc, field.mul(a(i, t - c), shift[i][c]));
                }
            }
            frow[c] = acc;
        }
        frow[rn] = field.neg(a0[t]);
        fsys.push_row(&frow);
    }
    let Some(sol) = solve_augmented(field, &fsys) else {
        return Ok(zero_word());
    };
    if sol.homogeneous.len() > s - 1 {
        return Err(Error::DegenerateSystem(format!(
            "message solution space has dimension {} > s - 1 = {}",
            sol.homogeneous.len(),
            s - 1
        )));
    }
    let point = encode(params, &Polynomial::new(sol.particular))?;
    let directions = sol
        .homogeneous
        .into_iter()
        .map(|v| encode(params, &Polynomial::new(v)))
        .collect::<Result<Vec<_>>>()?;
    AffineSubspace::new(field, point, directions)
}

/// A `k`-dimensional affine subspace of the code containing the affine span
/// of `list`, padded with random codeword directions.
pub fn harness_container(params: &FrsParams, list: &[FoldedWord], k: usize, seed: u64) -> Result<AffineSubspace> {
    let field = params.field();
    if k > params.rn() {
        return Err(Error::BadParams(format!("code dimension {} is below {k}", params.rn())));
    }
    for w in list {
        params.check_word(w)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let base = match list.first() {
        Some(w) => w.clone(),
        None => encode(params, &params.random_message(&mut rng))?,
    };
    let n = params.n();
    let independent = |dirs: &[FoldedWord]| {
        let m = Matrix::from_rows(n, dirs.iter().map(|d| d.entries().to_vec()).collect());
        rank(field, &m) == dirs.len()
    };
    let mut dirs: Vec<FoldedWord> = Vec::new();
    for w in list.iter().skip(1) {
        dirs.push(w.sub(field, &base));
        if !independent(&dirs) {
            dirs.pop();
        }
    }
    if dirs.len() > k {
        return Err(Error::DimensionTooSmall {
            span: dirs.len(),
            requested: k,
        });
    }
    while dirs.len() < k {
        dirs.push(encode(params, &params.random_message(&mut rng))?);
        if !independent(&dirs) {
            dirs.pop();
        }
    }
    AffineSubspace::new(field, base, dirs)
}
