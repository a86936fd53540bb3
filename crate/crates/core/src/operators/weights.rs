//! Pointwise weights of the modified operators.
//!
//! Every Durrmeyer-type operator here has the shape
//! `(n-1) sum_k w_k(x) int p_{n,k}(t) f(t) dt` with
//! `w_k(x) = sum_r c_r(x, n) p_{m, k-r}(x)` for a base degree `m` and shifts
//! `r` in `0..=2`. [`ShiftedWeights`] holds that `(m, c_0, c_1, c_2)` data.

use crate::basis::{eval_basis, BasisRow};
use crate::error::{Error, Result};
use crate::operators::{OperatorKind, SequenceSpec};
use crate::sum::compensated;

/// Weight coefficients `c_r(x, n)` multiplying `p_{m, k-r}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftedWeights {
    pub base_degree: u64,
    pub coeffs: Vec<f64>,
}

impl ShiftedWeights {
    pub fn max_shift(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// `sum_r |c_r|`, the amplification of any per-term error.
    pub fn abs_sum(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// `w_k` from a precomputed row of `p_{m, .}(x)`.
    pub fn weight_from_row(&self, row: &BasisRow, k: usize) -> f64 {
        compensated(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(r, c)| c * row.at(k as i64 - r as i64)),
        )
    }

    /// `w_k` from isolated log-gamma basis evaluations.
    pub fn weight(&self, k: u64, x: f64) -> Result<f64> {
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (r, c) in self.coeffs.iter().enumerate() {
            let p = if k >= r as u64 { eval_basis(self.base_degree, k - r as u64, x)? } else { 0.0 };
            terms.push(c * p);
        }
        Ok(compensated(terms))
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// Weight data of a Durrmeyer-type operator at `(n, x)`.
pub fn shifted_weights(kind: &OperatorKind, n: u64, x: f64) -> Result<ShiftedWeights> {
    check_x(x)?;
    let (base_degree, coeffs) = match kind {
        OperatorKind::Baskakov => {
            return Err(Error::Domain("the Baskakov operator has no Durrmeyer weights".into()))
        }
        OperatorKind::BaskakovDurrmeyer => (n, vec![1.0]),
        OperatorKind::Mod1(spec) => {
            let (a0, a1) = spec.resolve_f64(n)?;
            (n + 1, vec![a0 + a1 * x, a0 - a1 * (1.0 + x)])
        }
        OperatorKind::SplitA(spec) => {
            let (_, a1) = spec.resolve_f64(n)?;
            (n + 1, vec![-a1 * x, a1])
        }
        OperatorKind::SplitB(spec) => {
            let (a0, a1) = spec.resolve_f64(n)?;
            (n + 1, vec![-a0, a1 * x - a0])
        }
        OperatorKind::Mod2 => (n + 2, mod2_coefficients(n, x).to_vec()),
    };
    Ok(ShiftedWeights { base_degree, coeffs })
}

/// Second-order coefficients with the fixed sequences
/// `a = 3/2, b = 2 - n, c = -n, d = 2n`, in the expanded form
/// `(3/2 + 2x - n x(1+x), 2n x(1+x), -1/2 - 2x - n x(1+x))`.
pub fn mod2_coefficients(n: u64, x: f64) -> [f64; 3] {
    let nx1 = n as f64 * x * (1.0 + x);
    [1.5 + 2.0 * x - nx1, 2.0 * nx1, -0.5 - 2.0 * x - nx1]
}

/// General second-order coefficients for arbitrary sequences `a, b, c, d`:
/// `a + b x + c x^2`, `d x (1+x)`, `a - b(1+x) + c(1+x)^2`.
pub fn mod2_general_coefficients(a: f64, b: f64, c: f64, d: f64, x: f64) -> [f64; 3] {
    let xp1 = 1.0 + x;
    [a + b * x + c * x * x, d * x * xp1, a - b * xp1 + c * xp1 * xp1]
}

/// `p^1_{n,k}(x) = a(x,n) p_{n+1,k}(x) + b(x,n) p_{n+1,k-1}(x)`.
pub fn mod1_weight(spec: &SequenceSpec, n: u64, k: u64, x: f64) -> Result<f64> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be >= 1, got {n}")));
    }
    shifted_weights(&OperatorKind::Mod1(spec.clone()), n, x)?.weight(k, x)
}

/// `p^2_{n,k}(x)` for the fixed second-order sequences.
pub fn mod2_weight(n: u64, k: u64, x: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Domain(format!("n must be >= 3, got {n}")));
    }
    shifted_weights(&OperatorKind::Mod2, n, x)?.weight(k, x)
}

/// Second-order weight with caller-chosen sequences (e.g. the classical
/// `a = 1, b = 2, c = 1, d = -2`).
pub fn mod2_weight_with(a: f64, b: f64, c: f64, d: f64, n: u64, k: u64, x: f64) -> Result<f64> {
    check_x(x)?;
    ShiftedWeights { base_degree: n + 2, coeffs: mod2_general_coefficients(a, b, c, d, x).to_vec() }
        .weight(k, x)
}

/// Weights `(wA, wB)` of the split operators with `-wA - wB = p^1_{n,k}`.
pub fn split_weights(spec: &SequenceSpec, n: u64, k: u64, x: f64) -> Result<(f64, f64)> {
    if n < 1 {
        return Err(Error::Domain(format!("n must be >= 1, got {n}")));
    }
    let wa = shifted_weights(&OperatorKind::SplitA(spec.clone()), n, x)?.weight(k, x)?;
    let wb = shifted_weights(&OperatorKind::SplitB(spec.clone()), n, x)?.weight(k, x)?;
    Ok((wa, wb))
}
