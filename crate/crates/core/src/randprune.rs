//! Randomized pruning for folded Reed–Solomon codes.
//!
//! [`rand_prune_once`] conditions the subspace on a coordinate drawn with
//! probability proportional to `s·dim(H_i) + 1` (never on coordinates that
//! leave the dimension unchanged) and recurses. Any codeword within
//! `decoding_radius(s, m, R)` is returned with probability at least
//! `1/(sk + 1)`; [`rand_decode`] repeats it enough times to recover the whole
//! list with probability `1 - β`. [`krsw_prune`] is the uniform-coordinate
//! baseline.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frs::{within_radius, FoldedWord, FrsParams};
use crate::gf::PrimeField;
use crate::subspace::{AffineSubspace, Restriction};
use crate::Rational;

/// 64-bit mix of several integers into one seed (splitmix64 finalizer
/// applied along the sequence).
pub fn mix_seed(parts: &[u64]) -> u64 {
    fn splitmix(mut z: u64) -> u64 {
        z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
    parts.iter().fold(0x6A09_E667_F3BC_C908, |acc, &p| splitmix(acc ^ splitmix(p)))
}

/// Sizes of `S_r = {i : H_i nonempty, dim H_i = r}` and the sampling
/// weights derived from them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionProfile {
    pub k: usize,
    pub s: usize,
    /// `|S_r|` for `r = 0..=k`.
    pub sizes: Vec<u64>,
    /// `|S_r|·(sr + 1)`, and `0` at `r = k`.
    pub weights: Vec<u64>,
    pub total: u64,
    /// Coordinates where `H_i` is empty.
    pub empty: u64,
}

impl DimensionProfile {
    pub fn from_sizes(sizes: Vec<u64>, s: usize, empty: u64) -> Self {
        let k = sizes.len().saturating_sub(1);
        let weights: Vec<u64> = sizes
            .iter()
            .enumerate()
            .map(|(r, &c)| if r == k { 0 } else { c * (s as u64 * r as u64 + 1) })
            .collect();
        let total = weights.iter().sum();
        DimensionProfile {
            k,
            s,
            sizes,
            weights,
            total,
            empty,
        }
    }

    /// `Σ_r r·|S_r|`, the total dimension over all coordinates.
    pub fn dimension_sum(&self) -> u64 {
        self.sizes.iter().enumerate().map(|(r, &c)| r as u64 * c).sum()
    }

    /// `k · mR/(m-k+1) · N`, which equals `k·Rn/(m-k+1)`.
    pub fn dimension_bound(&self, params: &FrsParams) -> Option<Rational> {
        let m = params.m();
        (self.k <= m).then(|| Rational::new((self.k * params.rn()) as i64, (m - self.k + 1) as i64))
    }

    pub fn satisfies_dimension_bound(&self, params: &FrsParams) -> bool {
        self.dimension_bound(params)
            .is_some_and(|b| Rational::from(self.dimension_sum() as i64) <= b)
    }
}

fn check_orders(params: &FrsParams, k: usize, s: usize) -> Result<()> {
    if k > s || s > params.m() || s == 0 {
        return Err(Error::BadParams(format!(
            "need k <= s <= m with s >= 1, got k={k}, s={s}, m={}",
            params.m()
        )));
    }
    Ok(())
}

fn conditioned(field: &PrimeField, g: &FoldedWord, h: &Arc<AffineSubspace>) -> Vec<Option<Restriction>> {
    (0..g.blocks()).map(|i| h.condition(field, g, i)).collect()
}

fn profile_of(restrictions: &[Option<Restriction>], k: usize, s: usize) -> DimensionProfile {
    let mut sizes = vec![0u64; k + 1];
    let mut empty = 0;
    for r in restrictions {
        match r {
            Some(r) => sizes[r.dim()] += 1,
            None => empty += 1,
        }
    }
    DimensionProfile::from_sizes(sizes, s, empty)
}

pub fn dimension_profile(params: &FrsParams, g: &FoldedWord, h: &AffineSubspace, s: usize) -> Result<DimensionProfile> {
    params.check_word(g)?;
    check_orders(params, h.dim(), s)?;
    let h = Arc::new(h.clone());
    Ok(profile_of(&conditioned(params.field(), g, &h), h.dim(), s))
}

/// One run with a seeded generator; `None` is FAIL.
pub fn rand_prune_once(
    params: &FrsParams,
    g: &FoldedWord,
    h: &AffineSubspace,
    s: usize,
    seed: u64,
) -> Result<Option<FoldedWord>> {
    rand_prune_with_rng(params, g, h, s, &mut ChaCha8Rng::seed_from_u64(seed))
}

pub fn rand_prune_with_rng<R: Rng>(
    params: &FrsParams,
    g: &FoldedWord,
    h: &AffineSubspace,
    s: usize,
    rng: &mut R,
) -> Result<Option<FoldedWord>> {
    params.check_word(g)?;
    check_orders(params, h.dim(), s)?;
    let radius = params.radius(s)?;
    let field = params.field();
    let mut current = Arc::new(h.clone());
    loop {
        let k = current.dim();
        if k == 0 {
            let point = current.base_point();
            return Ok(within_radius(point, g, &radius)?.then(|| point.clone()));
        }
        let restrictions = conditioned(field, g, &current);
        let profile = profile_of(&restrictions, k, s);
        if profile.total == 0 {
            return Ok(None);
        }
        let mut x = rng.gen_range(0..profile.total);
        let level = profile
            .weights
            .iter()
            .position(|&w| {
                if x < w {
                    true
                } else {
                    x -= w;
                    false
                }
            })
            .expect("draw below total weight");
        let pick = rng.gen_range(0..profile.sizes[level]);
        let chosen = restrictions
            .iter()
            .flatten()
            .filter(|r| r.dim() == level)
            .nth(pick as usize)
            .expect("S_r has the counted size");
        current = Arc::new(chosen.to_subspace(field));
    }
}

/// `⌈(s(s-1)+1)·ln(s/β)⌉`, at least 1.
pub fn repeat_count(s: usize, beta: Rational) -> Result<usize> {
    if beta <= Rational::from(0) || beta >= Rational::from(1) {
        return Err(Error::BadParams(format!("beta {beta} outside (0, 1)")));
    }
    let beta = *beta.numer() as f64 / *beta.denom() as f64;
    let t = ((s * (s - 1) + 1) as f64 * (s as f64 / beta).ln()).ceil();
    Ok((t as usize).max(1))
}

/// Union of [`repeat_count`] independent runs, trial `j` seeded with
/// `mix_seed([seed, j])`. Sorted, deduplicated.
pub fn rand_decode(
    params: &FrsParams,
    g: &FoldedWord,
    h: &AffineSubspace,
    s: usize,
    beta: Rational,
    seed: u64,
) -> Result<Vec<FoldedWord>> {
    check_orders(params, h.dim(), s)?;
    let t = repeat_count(s, beta)?;
    let mut found = BTreeSet::new();
    for j in 0..t as u64 {
        if let Some(w) = rand_prune_once(params, g, h, s, mix_seed(&[seed, j]))? {
            found.insert(w);
        }
    }
    Ok(found.into_iter().collect())
}

/// Uniform-coordinate pruning: condition on random coordinates until the
/// dimension reaches zero or `4k` draws are spent, then check the radius
/// `Δ - ε`.
pub fn krsw_prune(
    field: &PrimeField,
    g: &FoldedWord,
    h: &AffineSubspace,
    eps: Rational,
    delta: Rational,
    seed: u64,
) -> Result<Option<FoldedWord>> {
    if eps <= Rational::from(0) || eps >= delta {
        return Err(Error::BadEpsilon {
            eps: eps.to_string(),
            delta: delta.to_string(),
        });
    }
    if !h.base_point().same_shape(g) {
        return Err(Error::ShapeMismatch("received word and subspace differ in shape".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = Arc::new(h.clone());
    let budget = 4 * h.dim();
    let mut draws = 0;
    while current.dim() > 0 && draws < budget {
        draws += 1;
        let i = rng.gen_range(0..g.blocks());
        match current.condition(field, g, i) {
            Some(r) => current = Arc::new(r.to_subspace(field)),
            None => return Ok(None),
        }
    }
    if current.dim() > 0 {
        return Ok(None);
    }
    let point = current.base_point();
    Ok(within_radius(point, g, &(delta - eps))?.then(|| point.clone()))
}
