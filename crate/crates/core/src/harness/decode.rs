use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::Serialize;

use crate::detprune::{det_prune_with, DetPruneConfig, DetPruneStats};
use crate::error::{Error, Result};
use crate::frs::{within_radius, FoldedWord, FrsParams, ParamsRecord};
use crate::gf::PrimeField;
use crate::interp::{find_container, harness_container};
use crate::randprune::{dimension_profile, krsw_prune, mix_seed, rand_decode, rand_prune_once, repeat_count, DimensionProfile};
use crate::subspace::AffineSubspace;
use crate::Rational;

use super::{brute_force_list, message_space_size, oracle_budget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Det,
    Rand,
    Krsw,
    Brute,
}

impl FromStr for Algo {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "det" => Ok(Algo::Det),
            "rand" => Ok(Algo::Rand),
            "krsw" => Ok(Algo::Krsw),
            "brute" => Ok(Algo::Brute),
            _ => Err(Error::Parse(format!("unknown algorithm `{s}`"))),
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algo::Det => "det",
            Algo::Rand => "rand",
            Algo::Krsw => "krsw",
            Algo::Brute => "brute",
        })
    }
}

/// Replace interpolation by a `k`-dimensional container around known
/// codewords.
#[derive(Clone, Debug)]
pub struct Isolation {
    pub list: Vec<FoldedWord>,
    pub k: usize,
}

#[derive(Clone, Debug)]
pub struct DecodeOptions {
    /// Interpolation order; defaults to `min(2, m)`.
    pub s: Option<usize>,
    /// Gap below `Δ = 1 - R` for `det` and `krsw`; defaults to
    /// `Δ - decoding_radius(s, m, R)`.
    pub eps: Option<Rational>,
    pub beta: Rational,
    pub seed: u64,
    pub oracle: bool,
    pub count_ops: bool,
    pub timing: bool,
    pub budget: u64,
    pub isolation: Option<Isolation>,
    /// Known error count, copied into the report.
    pub errors: Option<usize>,
    pub det: DetPruneConfig,
}

impl Default for DecodeOptions {
    fn default() -> Self {
        DecodeOptions {
            s: None,
            eps: None,
            beta: Rational::new(1, 10),
            seed: 0,
            oracle: false,
            count_ops: false,
            timing: false,
            budget: oracle_budget(),
            isolation: None,
            errors: None,
            det: DetPruneConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DecodeReport {
    pub params: ParamsRecord,
    pub algo: Algo,
    pub s: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    pub radius: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub errors: Option<usize>,
    pub seed: u64,
    pub container_dim: usize,
    /// Pruner invocations (repeats for the randomized pruners).
    pub trials: usize,
    pub output: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub agreement: Option<bool>,
    /// Every output is a codeword strictly within the radius.
    pub verified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub field_ops: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub profile: Option<DimensionProfile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub det_stats: Option<DetPruneStats>,
    #[serde(skip)]
    pub list: Vec<FoldedWord>,
}

impl DecodeReport {
    pub fn contains(&self, w: &FoldedWord) -> bool {
        self.list.contains(w)
    }
}

/// `(radius, ε)` used by `algo`: `Δ - ε` with `Δ = 1 - R` for the
/// distance-based pruners, `decoding_radius(s, m, R)` otherwise.
pub(crate) fn radius_for(params: &FrsParams, algo: Algo, s: usize, eps: Option<Rational>) -> Result<(Rational, Option<Rational>)> {
    let natural = params.radius(s)?;
    let delta = params.designed_distance();
    match (algo, eps) {
        (Algo::Det | Algo::Krsw, None) => Ok((natural, Some(delta - natural))),
        (_, Some(e)) => Ok((delta - e, Some(e))),
        (_, None) => Ok((natural, None)),
    }
}

/// Number of independent KRSW runs: `⌈ln(s/β) / ε^k⌉`, capped at 10⁵.
pub(crate) fn krsw_repeats(s: usize, beta: Rational, eps: Rational, k: usize) -> usize {
    let b = *beta.numer() as f64 / *beta.denom() as f64;
    let e = *eps.numer() as f64 / *eps.denom() as f64;
    let t = ((s as f64 / b).ln().max(1.0) / e.powi(k as i32)).ceil();
    (t as usize).clamp(1, 100_000)
}

/// Runs a single pruning attempt of `algo` over `h`; deterministic pruners
/// return their full list.
#[allow(clippy::too_many_arguments)]
pub fn prune_once(
    params: &FrsParams,
    g: &FoldedWord,
    h: &AffineSubspace,
    algo: Algo,
    s: usize,
    eps: Option<Rational>,
    seed: u64,
    det: &DetPruneConfig,
) -> Result<Vec<FoldedWord>> {
    let (radius, eps) = radius_for(params, algo, s, eps)?;
    let delta = params.designed_distance();
    let field = params.field();
    Ok(match algo {
        Algo::Det => det_prune_with(field, g, eps.expect("set for det"), h, delta, det)?.0,
        Algo::Rand => rand_prune_once(params, g, h, s, seed)?.into_iter().collect(),
        Algo::Krsw => krsw_prune(field, g, h, eps.expect("set for krsw"), delta, seed)?.into_iter().collect(),
        Algo::Brute => enumerate_within(field, g, h, &radius, oracle_budget())?,
    })
}

fn enumerate_within(field: &PrimeField, g: &FoldedWord, h: &AffineSubspace, radius: &Rational, budget: u64) -> Result<Vec<FoldedWord>> {
    let mut out = Vec::new();
    for w in h.enumerate(field, budget)? {
        if within_radius(&w, g, radius)? {
            out.push(w);
        }
    }
    out.sort();
    Ok(out)
}

/// Container (interpolation or isolation) followed by the chosen pruner.
pub fn decode_end_to_end(params: &FrsParams, g: &FoldedWord, algo: Algo, opts: &DecodeOptions) -> Result<DecodeReport> {
    params.check_word(g)?;
    let start = Instant::now();
    let counted = if opts.count_ops { params.with_op_counter() } else { params.clone() };
    let params = &counted;
    let field = params.field();
    let s = opts.s.unwrap_or(params.m().min(2));
    let (radius, eps) = radius_for(params, algo, s, opts.eps)?;
    let delta = params.designed_distance();

    let h = match &opts.isolation {
        Some(iso) => harness_container(params, &iso.list, iso.k, opts.seed)?,
        None if algo == Algo::Brute => AffineSubspace::singleton(g.clone()),
        None => find_container(params, g, s)?,
    };

    let mut det_stats = None;
    let mut profile = None;
    let mut trials = 1;
    let list = match algo {
        Algo::Brute => brute_force_list(params, g, &radius, opts.budget)?,
        Algo::Det => {
            let (list, stats) = det_prune_with(field, g, eps.expect("set for det"), &h, delta, &opts.det)?;
            det_stats = Some(stats);
            list
        }
        Algo::Rand => {
            profile = dimension_profile(params, g, &h, s).ok();
            trials = repeat_count(s, opts.beta)?;
            rand_decode(params, g, &h, s, opts.beta, opts.seed)?
        }
        Algo::Krsw => {
            let eps = eps.expect("set for krsw");
            trials = krsw_repeats(s, opts.beta, eps, h.dim());
            let mut found = std::collections::BTreeSet::new();
            for j in 0..trials as u64 {
                if let Some(w) = krsw_prune(field, g, &h, eps, delta, mix_seed(&[opts.seed, j]))? {
                    found.insert(w);
                }
            }
            found.into_iter().collect()
        }
    };
    let field_ops = field.op_count();
    let wall_ms = opts.timing.then(|| start.elapsed().as_secs_f64() * 1e3);

    let verified = list
        .iter()
        .all(|w| params.is_codeword(w) && within_radius(w, g, &radius).unwrap_or(false));
    let oracle_list = if opts.oracle && message_space_size(params) <= opts.budget as u128 {
        Some(brute_force_list(params, g, &radius, opts.budget)?)
    } else {
        None
    };
    let agreement = oracle_list.as_ref().map(|o| *o == list);

    Ok(DecodeReport {
        params: params.record(),
        algo,
        s,
        eps: eps.map(|e| e.to_string()),
        beta: matches!(algo, Algo::Rand | Algo::Krsw).then(|| opts.beta.to_string()),
        radius: radius.to_string(),
        errors: opts.errors,
        seed: opts.seed,
        container_dim: h.dim(),
        trials,
        output: list.iter().map(FoldedWord::canonical_string).collect(),
        oracle: oracle_list.map(|o| o.iter().map(FoldedWord::canonical_string).collect()),
        agreement,
        verified,
        field_ops,
        wall_ms,
        profile,
        det_stats,
        list,
    })
}
