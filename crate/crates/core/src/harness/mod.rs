//! Brute-force oracles, planted test instances, end-to-end decoding and the
//! experiment runner.

mod decode;
mod experiment;

pub use decode::{decode_end_to_end, prune_once, Algo, DecodeOptions, DecodeReport, Isolation};
pub use experiment::{
    bench_config, parse_config, run_config, run_experiment, ErrorSpec, ExperimentConfig, ExperimentKind, Grid,
    GridCell,
};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::frs::{corrupt, encode, within_radius, FoldedWord, FrsParams};
use crate::gf::Fp;
use crate::Rational;

/// Default cap on `q^{Rn}` for brute-force enumeration.
pub const DEFAULT_ORACLE_BUDGET: u64 = 1_000_000;

/// The enumeration budget, overridden by the `FRS_BUDGET` environment
/// variable when it holds an integer.
pub fn oracle_budget() -> u64 {
    std::env::var("FRS_BUDGET")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_ORACLE_BUDGET)
}

/// Number of messages, `q^{Rn}`, saturating.
pub fn message_space_size(params: &FrsParams) -> u128 {
    (params.q() as u128).saturating_pow(params.rn() as u32)
}

/// Every codeword strictly within `radius` of `g`, by enumerating all
/// messages. Sorted.
pub fn brute_force_list(params: &FrsParams, g: &FoldedWord, radius: &Rational, budget: u64) -> Result<Vec<FoldedWord>> {
    params.check_word(g)?;
    if message_space_size(params) > budget as u128 {
        return Err(Error::BudgetExceeded {
            needed: format!("{}^{}", params.q(), params.rn()),
            budget,
        });
    }
    if *radius <= Rational::from(0) {
        return Ok(Vec::new());
    }
    let field = params.field();
    let q = params.q();
    let basis = params.monomial_codewords();
    let rn = params.rn();
    let mut digits = vec![0u64; rn];
    let mut c = FoldedWord::zeros(params.m(), params.blocks());
    let mut out = Vec::new();
    loop {
        if within_radius(&c, g, radius)? {
            out.push(c.clone());
        }
        // odometer over messages, updating the codeword by linearity
        let mut pos = 0;
        loop {
            if pos == rn {
                out.sort();
                return Ok(out);
            }
            c.add_scaled(field, Fp::ONE, &basis[pos]);
            digits[pos] += 1;
            if digits[pos] < q {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Largest error count `e` with `e/N` strictly below `radius`.
pub fn max_errors_below(radius: &Rational, blocks: usize) -> usize {
    (0..=blocks)
        .rev()
        .find(|&e| Rational::new(e as i64, blocks as i64) < *radius)
        .unwrap_or(0)
}

/// A received word built from known codewords.
#[derive(Clone, Debug)]
pub struct PlantedInstance {
    pub codewords: Vec<FoldedWord>,
    pub g: FoldedWord,
    pub errors: usize,
}

impl PlantedInstance {
    pub fn transmitted(&self) -> &FoldedWord {
        &self.codewords[0]
    }
}

/// `planted` random codewords interleaved block by block (block `i` comes
/// from codeword `i mod planted`), then `errors` further blocks replaced by
/// different random values.
pub fn plant(params: &FrsParams, planted: usize, errors: usize, seed: u64) -> Result<PlantedInstance> {
    if planted == 0 {
        return Err(Error::BadParams("need at least one planted codeword".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let codewords = (0..planted)
        .map(|_| encode(params, &params.random_message(&mut rng)))
        .collect::<Result<Vec<_>>>()?;
    let symbols = (0..params.blocks())
        .map(|i| codewords[i % planted].symbol(i).to_vec())
        .collect();
    let mixed = FoldedWord::from_symbols(symbols)?;
    let g = corrupt(params.field(), &mixed, errors, seed ^ 0x5EED)?;
    Ok(PlantedInstance { codewords, g, errors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frs::folded_distance;
    use crate::subspace::AffineSubspace;

    #[test]
    fn oracle_examples() {
        let p = FrsParams::new(17, 8, 2, 3).unwrap();
        let inst = plant(&p, 1, 0, 4).unwrap();
        let c = inst.transmitted().clone();
        let half = p.designed_distance() / 2;
        assert_eq!(brute_force_list(&p, &c, &half, 10_000).unwrap(), vec![c.clone()]);
        assert!(brute_force_list(&p, &c, &Rational::from(0), 10_000).unwrap().is_empty());
        assert!(matches!(brute_force_list(&p, &c, &half, 100), Err(Error::BudgetExceeded { .. })));
    }

    #[test]
    fn oracle_matches_direct_enumeration() {
        let p = FrsParams::new(13, 12, 3, 2).unwrap();
        let inst = plant(&p, 2, 1, 9).unwrap();
        let radius = Rational::new(3, 4);
        let basis = p.monomial_codewords();
        let code = AffineSubspace::new(p.field(), FoldedWord::zeros(3, 4), basis).unwrap();
        let mut expect: Vec<FoldedWord> = code
            .enumerate(p.field(), 1_000)
            .unwrap()
            .into_iter()
            .filter(|w| folded_distance(w, &inst.g).unwrap() < radius)
            .collect();
        expect.sort();
        assert_eq!(brute_force_list(&p, &inst.g, &radius, 1_000).unwrap(), expect);
    }

    #[test]
    fn planting_interleaves_and_corrupts() {
        let p = FrsParams::new(61, 54, 9, 6).unwrap();
        let inst = plant(&p, 2, 0, 1).unwrap();
        assert_eq!(inst.g.disagreements(&inst.codewords[0]).unwrap(), 3);
        assert_eq!(inst.g.disagreements(&inst.codewords[1]).unwrap(), 3);
        let noisy = plant(&p, 1, 2, 1).unwrap();
        assert_eq!(noisy.g.disagreements(noisy.transmitted()).unwrap(), 2);
    }

    #[test]
    fn error_count_below_radius() {
        assert_eq!(max_errors_below(&Rational::new(9, 14), 6), 3);
        assert_eq!(max_errors_below(&Rational::new(1, 2), 6), 2);
        assert_eq!(max_errors_below(&Rational::new(0, 1), 6), 0);
    }
}
