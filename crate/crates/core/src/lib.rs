//! List decoding of folded Reed–Solomon codes up to capacity.
//!
//! Decoding runs in two stages. Linear-algebraic interpolation
//! ([`interp`]) produces a low-dimensional affine subspace of the code that
//! contains every codeword close to the received word. A pruner then
//! extracts the actual list from that subspace: either the deterministic
//! expander-based pruner ([`detprune`]) or the randomized
//! dimension-weighted pruner ([`randprune`]). [`harness`] ties the stages
//! together with brute-force oracles and a reproducible experiment runner.

pub mod detprune;
pub mod error;
pub mod expander;
pub mod frs;
pub mod gf;
pub mod harness;
pub mod interp;
pub mod linalg;
pub mod poly;
pub mod randprune;
pub mod subspace;

pub use detprune::det_prune;
pub use error::{Error, Result};
pub use expander::{build_expander, ExpanderGraph};
pub use frs::{FoldedWord, FrsParams};
pub use gf::{Field, Fp, PrimeField};
pub use harness::{brute_force_list, decode_end_to_end, Algo, DecodeOptions, DecodeReport};
pub use interp::find_container;
pub use poly::Polynomial;
pub use randprune::{rand_decode, rand_prune_once};
pub use subspace::{AffineSubspace, Restriction};

/// Exact rational used for radii, rates and distances.
pub type Rational = num_rational::Ratio<i64>;
/// Arbitrary-precision rational used for popularity thresholds.
pub type BigRational = num_rational::BigRational;
/// The rationals as a [`Field`], for exact elimination outside prime fields.
pub type RationalField = gf::ExactField<Rational>;
/// Matrices over the code's prime field.
pub type FpMatrix = linalg::Matrix<Fp>;
