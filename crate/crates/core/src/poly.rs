//! Dense univariate polynomials over a prime field.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::{Field, Fp, PrimeField};

/// Coefficients low-degree first, trailing zeros stripped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    coeffs: Vec<Fp>,
}

impl Polynomial {
    pub fn new(mut coeffs: Vec<Fp>) -> Self {
        while coeffs.last() == Some(&Fp::ZERO) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn zero() -> Self {
        Polynomial { coeffs: Vec::new() }
    }

    pub fn constant(c: Fp) -> Self {
        Polynomial::new(vec![c])
    }

    /// The monomial `X^d`.
    pub fn monomial(d: usize) -> Self {
        let mut coeffs = vec![Fp::ZERO; d + 1];
        coeffs[d] = Fp::ONE;
        Polynomial { coeffs }
    }

    pub fn from_u64s(field: &PrimeField, coeffs: &[u64]) -> Self {
        Polynomial::new(coeffs.iter().map(|&c| field.elem(c)).collect())
    }

    pub fn coeffs(&self) -> &[Fp] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Coefficient vector padded with zeros to `len` entries.
    pub fn padded(&self, len: usize) -> Vec<Fp> {
        let mut v = self.coeffs.clone();
        v.resize(len.max(v.len()), Fp::ZERO);
        v
    }

    /// Horner evaluation.
    pub fn eval(&self, field: &PrimeField, x: Fp) -> Fp {
        self.coeffs
            .iter()
            .rev()
            .fold(Fp::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
    }

    /// `[f(1), f(γ), …, f(γ^{n-1})]`.
    pub fn eval_geometric(&self, field: &PrimeField, gamma: Fp, n: usize) -> Result<Vec<Fp>> {
        let order = field.multiplicative_order(gamma)?;
        if order < n as u64 {
            return Err(Error::OrderTooSmall {
                order,
                needed: n as u64,
            });
        }
        let mut x = Fp::ONE;
        let mut out = Vec::with_capacity(n);
        for _ in 0..n {
            out.push(self.eval(field, x));
            x = field.mul(x, gamma);
        }
        Ok(out)
    }

    pub fn add(&self, field: &PrimeField, other: &Polynomial) -> Polynomial {
        let len = self.coeffs.len().max(other.coeffs.len());
        let a = self.padded(len);
        let b = other.padded(len);
        Polynomial::new(a.iter().zip(&b).map(|(&x, &y)| field.add(x, y)).collect())
    }

    pub fn scale(&self, field: &PrimeField, c: Fp) -> Polynomial {
        Polynomial::new(self.coeffs.iter().map(|&x| field.mul(x, c)).collect())
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        for (i, c) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Whitespace-separated decimal coefficients, low-degree first. Values are
/// kept as written; reduce with [`Polynomial::from_u64s`] if needed.
pub fn parse_coefficients(text: &str) -> Result<Vec<u64>> {
    text.split_whitespace()
        .map(|tok| {
            u64::from_str(tok).map_err(|_| Error::Parse(format!("bad coefficient `{tok}`")))
        })
        .collect()
}
