//! Deterministic pruning of an affine subspace of a linear code of distance
//! `Δ`: returns every point of the subspace within `Δ - ε` of the received
//! word, with no randomness.
//!
//! Each call conditions the subspace on every coordinate, recurses on the
//! spaces that are popular among the lower-dimensional restrictions, and then
//! walks down a hierarchy of expanders: level `r` labels every edge `(u, v)`
//! of an expander on level `r + 1` with `H_u ∩ H_v`, keeps edges whose label
//! has dimension at most `r`, and recurses on popular labels again.
//! Popularity thresholds follow `p_{k-1} = ε`, `p_r = p_{r+1}² / 32`.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::expander::{build_expander, EdgeSource, ExpanderOptions};
use crate::frs::{within_radius, FoldedWord};
use crate::gf::PrimeField;
use crate::subspace::{AffineSubspace, Restriction};
use crate::{BigRational, Rational};

#[derive(Clone, Debug)]
pub struct DetPruneConfig {
    /// Divisor in `p_r = p_{r+1}² / popularity_divisor`.
    pub popularity_divisor: u32,
    /// Divisor in the expander target `λ = p_{r+1} / lambda_divisor`.
    pub lambda_divisor: u32,
    /// Use this expander target at every level instead of
    /// `p_{r+1} / lambda_divisor`. Completeness is only guaranteed without it.
    pub fixed_lambda: Option<f64>,
    pub expander: ExpanderOptions,
}

impl Default for DetPruneConfig {
    fn default() -> Self {
        DetPruneConfig {
            popularity_divisor: 32,
            lambda_divisor: 24,
            fixed_lambda: None,
            expander: ExpanderOptions::default(),
        }
    }
}

/// Work counters for one top-level call.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DetPruneStats {
    /// Recursive invocations, including the top-level one.
    pub calls: u64,
    /// Invocations skipped because the same subspace was already pruned.
    pub revisits: u64,
    /// Zero-dimensional distance checks.
    pub base_checks: u64,
    pub conditioned: u64,
    /// Expander edges labelled, counted with multiplicity.
    pub edges: u64,
    /// Distinct intersections actually computed.
    pub intersections: u64,
    pub popular: u64,
    pub complete_graphs: u64,
    pub sparse_graphs: u64,
    pub largest_level: u64,
}

/// `[p_0, …, p_{k-1}]` with `p_{k-1} = ε` and `p_r = p_{r+1}² / divisor`.
pub fn popularity_thresholds(eps: &Rational, k: usize, divisor: u32) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); k];
    if k == 0 {
        return out;
    }
    out[k - 1] = BigRational::new(BigInt::from(*eps.numer()), BigInt::from(*eps.denom()));
    let div = BigRational::from_integer(BigInt::from(divisor));
    for r in (0..k - 1).rev() {
        out[r] = &out[r + 1] * &out[r + 1] / &div;
    }
    out
}

/// Keys occurring at least `p · len` times, in order of first appearance.
pub fn heavy_hitters<K: Eq + Hash + Clone>(stream: &[K], p: &BigRational) -> Vec<K> {
    let weighted: Vec<(K, u64)> = stream.iter().map(|k| (k.clone(), 1)).collect();
    heavy_hitters_weighted(&weighted, p)
}

/// [`heavy_hitters`] over a stream where each item carries a multiplicity.
///
/// One Misra–Gries pass with `⌈2/p⌉` counters finds a candidate superset;
/// an exact counting pass over the candidates then keeps the true ones.
pub fn heavy_hitters_weighted<K: Eq + Hash + Clone>(stream: &[(K, u64)], p: &BigRational) -> Vec<K> {
    assert!(p > &BigRational::zero() && p <= &BigRational::from_integer(1.into()), "p must lie in (0, 1]");
    let total: u64 = stream.iter().map(|(_, w)| w).sum();
    if total == 0 {
        return Vec::new();
    }
    let capacity = (BigInt::from(2) * p.denom() + p.numer() - 1u8) / p.numer();
    let capacity = capacity.to_usize().unwrap_or(usize::MAX);

    let mut counters: HashMap<K, u64> = HashMap::new();
    for (key, w) in stream {
        let mut w = *w;
        if w == 0 {
            continue;
        }
        if let Some(c) = counters.get_mut(key) {
            *c += w;
            continue;
        }
        if counters.len() >= capacity {
            let min = counters.values().copied().min().unwrap_or(0);
            let dec = min.min(w);
            counters.retain(|_, c| {
                *c -= dec;
                *c > 0
            });
            w -= dec;
        }
        if w > 0 {
            counters.insert(key.clone(), w);
        }
    }

    let mut exact: HashMap<&K, u64> = counters.keys().map(|k| (k, 0)).collect();
    let mut order: Vec<&K> = Vec::new();
    for (key, w) in stream {
        if let Some(c) = exact.get_mut(key) {
            if *c == 0 && *w > 0 {
                order.push(key);
            }
            *c += w;
        }
    }
    let (num, den) = (p.numer(), p.denom());
    let total = BigInt::from(total);
    order
        .into_iter()
        .filter(|k| BigInt::from(exact[k]) * den >= num * &total)
        .cloned()
        .collect()
}

/// Every point of `h` strictly within `Δ - ε` of `g`, sorted.
pub fn det_prune(
    field: &PrimeField,
    g: &FoldedWord,
    eps: Rational,
    h: &AffineSubspace,
    delta: Rational,
) -> Result<Vec<FoldedWord>> {
    det_prune_with(field, g, eps, h, delta, &DetPruneConfig::default()).map(|(list, _)| list)
}

pub fn det_prune_with(
    field: &PrimeField,
    g: &FoldedWord,
    eps: Rational,
    h: &AffineSubspace,
    delta: Rational,
    cfg: &DetPruneConfig,
) -> Result<(Vec<FoldedWord>, DetPruneStats)> {
    if eps <= Rational::zero() || eps >= delta {
        return Err(Error::BadEpsilon {
            eps: eps.to_string(),
            delta: delta.to_string(),
        });
    }
    if !h.base_point().same_shape(g) {
        return Err(Error::ShapeMismatch("received word and subspace differ in shape".into()));
    }
    let mut pruner = Pruner {
        field,
        g,
        eps,
        radius: delta - eps,
        cfg,
        stats: DetPruneStats::default(),
        found: BTreeSet::new(),
        visited: HashSet::new(),
    };
    pruner.run(Arc::new(h.clone()))?;
    Ok((pruner.found.into_iter().collect(), pruner.stats))
}

const EMPTY: u32 = u32::MAX;

/// Restrictions of one ambient, deduplicated by canonical key.
struct Labels {
    ids: HashMap<Vec<u8>, u32>,
    spaces: Vec<Restriction>,
    meets: HashMap<(u32, u32), u32>,
}

impl Labels {
    fn new() -> Self {
        Labels {
            ids: HashMap::new(),
            spaces: Vec::new(),
            meets: HashMap::new(),
        }
    }

    fn intern(&mut self, r: Option<Restriction>) -> u32 {
        let Some(r) = r else { return EMPTY };
        let next = self.spaces.len() as u32;
        let id = *self.ids.entry(r.canonical_key()).or_insert(next);
        if id == next {
            self.spaces.push(r);
        }
        id
    }

    /// `dim`, with the empty set below every level.
    fn within(&self, id: u32, r: usize) -> bool {
        id == EMPTY || self.spaces[id as usize].dim() <= r
    }

    fn meet(&mut self, field: &PrimeField, a: u32, b: u32, stats: &mut DetPruneStats) -> Result<u32> {
        if a == EMPTY || b == EMPTY {
            return Ok(EMPTY);
        }
        if a == b {
            return Ok(a);
        }
        let key = (a.min(b), a.max(b));
        if let Some(&id) = self.meets.get(&key) {
            return Ok(id);
        }
        stats.intersections += 1;
        let r = self.spaces[a as usize].intersect(field, &self.spaces[b as usize])?;
        let id = self.intern(r);
        self.meets.insert(key, id);
        Ok(id)
    }
}

struct Pruner<'a> {
    field: &'a PrimeField,
    g: &'a FoldedWord,
    eps: Rational,
    radius: Rational,
    cfg: &'a DetPruneConfig,
    stats: DetPruneStats,
    found: BTreeSet<FoldedWord>,
    visited: HashSet<Vec<u8>>,
}

impl Pruner<'_> {
    fn run(&mut self, h: Arc<AffineSubspace>) -> Result<()> {
        self.stats.calls += 1;
        if !self.visited.insert(h.canonical_key(self.field)) {
            self.stats.revisits += 1;
            return Ok(());
        }
        let k = h.dim();
        if k == 0 {
            self.stats.base_checks += 1;
            if within_radius(h.base_point(), self.g, &self.radius)? {
                self.found.insert(h.base_point().clone());
            }
            return Ok(());
        }

        let mut labels = Labels::new();
        let mut level: Vec<(u32, u64)> = Vec::new();
        for i in 0..self.g.blocks() {
            self.stats.conditioned += 1;
            let id = labels.intern(h.condition(self.field, self.g, i));
            if labels.within(id, k - 1) {
                level.push((id, 1));
            }
        }
        let p = popularity_thresholds(&self.eps, k, self.cfg.popularity_divisor);
        self.recurse_on_popular(&labels, &level, &p[k - 1])?;

        for r in (0..k.saturating_sub(1)).rev() {
            let lambda = self.cfg.fixed_lambda.unwrap_or_else(|| {
                (&p[r + 1] / BigRational::from_integer(self.cfg.lambda_divisor.into()))
                .to_f64()
                .unwrap_or(0.0)
                    .clamp(f64::MIN_POSITIVE, 0.999)
            });
            level = self.edge_level(&mut labels, &level, lambda, r)?;
            self.recurse_on_popular(&labels, &level, &p[r])?;
        }
        Ok(())
    }

    /// Labels of the expander edges over `prev` whose intersection has
    /// dimension at most `r`.
    fn edge_level(&mut self, labels: &mut Labels, prev: &[(u32, u64)], lambda: f64, r: usize) -> Result<Vec<(u32, u64)>> {
        let vertices: u64 = prev.iter().map(|(_, w)| w).sum();
        let graph = build_expander(vertices as usize, lambda, &self.cfg.expander);
        let mut next: Vec<(u32, u64)> = Vec::new();
        if let EdgeSource::Complete = graph.source() {
            // Every ordered pair of distinct vertices: count by label class.
            self.stats.complete_graphs += 1;
            self.stats.edges += vertices * vertices.saturating_sub(1);
            let mut classes: Vec<(u32, u64)> = Vec::new();
            let mut slot: HashMap<u32, usize> = HashMap::new();
            for &(id, w) in prev {
                let s = *slot.entry(id).or_insert_with(|| {
                    classes.push((id, 0));
                    classes.len() - 1
                });
                classes[s].1 += w;
            }
            for &(a, ca) in &classes {
                for &(b, cb) in &classes {
                    let pairs = if a == b { ca * (ca - 1) } else { ca * cb };
                    if pairs == 0 {
                        continue;
                    }
                    let id = labels.meet(self.field, a, b, &mut self.stats)?;
                    if labels.within(id, r) {
                        next.push((id, pairs));
                    }
                }
            }
        } else {
            self.stats.sparse_graphs += 1;
            let flat: Vec<u32> = prev.iter().flat_map(|&(id, w)| std::iter::repeat(id).take(w as usize)).collect();
            for e in graph.edges() {
                self.stats.edges += 1;
                // padding edges carry the empty set
                let id = if e.dummy {
                    EMPTY
                } else {
                    labels.meet(self.field, flat[e.from], flat[e.to], &mut self.stats)?
                };
                if labels.within(id, r) {
                    next.push((id, 1));
                }
            }
        }
        let size: u64 = next.iter().map(|(_, w)| w).sum();
        self.stats.largest_level = self.stats.largest_level.max(size);
        Ok(next)
    }

    fn recurse_on_popular(&mut self, labels: &Labels, level: &[(u32, u64)], p: &BigRational) -> Result<()> {
        let half = p / BigRational::from_integer(2.into());
        for id in heavy_hitters_weighted(level, &half) {
            if id == EMPTY {
                continue;
            }
            self.stats.popular += 1;
            let sub = labels.spaces[id as usize].to_subspace(self.field);
            self.run(Arc::new(sub))?;
        }
        Ok(())
    }
}
