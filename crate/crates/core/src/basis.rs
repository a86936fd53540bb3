//! Baskakov basis functions `p_{n,k}(x) = C(n+k-1, k) x^k / (1+x)^(n+k)`.
//!
//! For fixed `n` and `x` the basis is the negative-binomial mass function in
//! `k` with success ratio `x/(1+x)`, so every row sums to one. Rows are
//! truncated at an index `K` past which the remaining mass is bounded by a
//! geometric series.

use crate::error::{Error, Result};
use crate::sum::compensated;

/// Truncated row `p_{n,0}(x), ..., p_{n,K}(x)` with a certified bound on the
/// discarded mass `sum_{k>K} p_{n,k}(x)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisRow {
    pub n: u64,
    pub x: f64,
    pub values: Vec<f64>,
    pub tail_bound: f64,
}

impl BasisRow {
    /// Truncation index `K` (the last stored `k`).
    pub fn truncation(&self) -> usize {
        self.values.len() - 1
    }

    /// `p_{n,k}(x)` with `k` allowed to be negative or past `K` (both read as 0).
    pub fn at(&self, k: i64) -> f64 {
        if k < 0 {
            return 0.0;
        }
        self.values.get(k as usize).copied().unwrap_or(0.0)
    }

    /// Ascending-k compensated sum of the stored values.
    pub fn sum(&self) -> f64 {
        compensated(self.values.iter().copied())
    }
}

fn check_domain(n: u64, x: f64) -> Result<()> {
    if n < 1 {
        return Err(Error::Domain(format!("basis degree n must be >= 1, got {n}")));
    }
    if !(x >= 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("basis point x must be finite and >= 0, got {x}")));
    }
    Ok(())
}

/// `ln p_{n,k}(x)` for `x > 0`, via log-gamma.
pub(crate) fn ln_basis(n: u64, k: u64, x: f64) -> f64 {
    let (nf, kf) = (n as f64, k as f64);
    let ln_binom = libm::lgamma(nf + kf) - libm::lgamma(kf + 1.0) - libm::lgamma(nf);
    ln_binom + kf * x.ln() - (nf + kf) * x.ln_1p()
}

/// Direct product form for moderate arguments; `None` when any factor
/// leaves the normal range.
fn direct_basis(n: u64, k: u64, x: f64) -> Option<f64> {
    if n + k > 1024 {
        return None;
    }
    let small = k.min(n - 1);
    let binom = (1..=small).fold(1.0, |acc, i| acc * (n + k - i) as f64 / (small + 1 - i) as f64);
    let power = x.powi(k as i32);
    let decay = (1.0 + x).powi(-((n + k) as i32));
    let value = binom * power * decay;
    (binom.is_finite() && power.is_normal() && decay.is_normal() && value.is_normal()).then_some(value)
}

/// Single basis value `p_{n,k}(x)`: a direct product when it stays in range,
/// log-gamma otherwise.
pub fn eval_basis(n: u64, k: u64, x: f64) -> Result<f64> {
    check_domain(n, x)?;
    if x == 0.0 {
        return Ok(if k == 0 { 1.0 } else { 0.0 });
    }
    Ok(direct_basis(n, k, x).unwrap_or_else(|| ln_basis(n, k, x).exp()))
}

/// Ratio `p_{n,k+1}(x) / p_{n,k}(x)`.
#[inline]
pub(crate) fn step_ratio(n: u64, k: u64, x: f64) -> f64 {
    ((n + k) as f64 / (k + 1) as f64) * (x / (1.0 + x))
}

/// Geometric tail ratio `q`, the midpoint between `x/(1+x)` and 1.
#[inline]
pub(crate) fn tail_ratio(x: f64) -> f64 {
    0.5 * (1.0 + x / (1.0 + x))
}

/// Most probable index of the row, `floor((n-1) x)`.
fn mode(n: u64, x: f64) -> u64 {
    ((n.saturating_sub(1)) as f64 * x).floor() as u64
}

/// Smallest `K` such that `sum_{k>K} p_{n,k}(x) <= tol`, certified by the
/// geometric bound `p_{n,K} q / (1 - q)` once the step ratio has dropped
/// below `q`.
pub fn truncation_index(n: u64, x: f64, tol: f64) -> Result<usize> {
    weighted_truncation_index(n, x, tol, |_| 1.0)
}

/// Like [`truncation_index`] but for the weighted tail
/// `sum_{k>K} p_{n,k}(x) g(k)`.
///
/// `growth` must be positive and nondecreasing with `g(k+1)/g(k)`
/// nonincreasing (true for constants and for products of `(k + i)`), so that
/// the combined step ratio stays below `q` once it first gets there.
pub fn weighted_truncation_index<G>(n: u64, x: f64, tol: f64, growth: G) -> Result<usize>
where
    G: Fn(u64) -> f64,
{
    check_domain(n, x)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    if x == 0.0 {
        return Ok(0);
    }
    let q = tail_ratio(x);
    let r = x / (1.0 + x);
    // rho_k <= q  <=>  k >= (n r - q) / (q - r)
    let analytic_start = ((n as f64 * r - q) / (q - r)).ceil().max(0.0) as u64;
    let mut k = analytic_start;
    while step_ratio(n, k, x) * growth(k + 1) / growth(k) > q {
        k += 1;
    }
    let mut ln_p = ln_basis(n, k, x);
    let bound_factor = q / (1.0 - q);
    loop {
        let term = ln_p.exp() * growth(k);
        if term * bound_factor <= tol {
            break;
        }
        ln_p += step_ratio(n, k, x).ln();
        k += 1;
    }
    let floor = (n as f64 * x).ceil() as u64;
    Ok(k.max(floor) as usize)
}

/// Basis row truncated so that the discarded mass is at most `tol`.
pub fn basis_row(n: u64, x: f64, tol: f64) -> Result<BasisRow> {
    check_domain(n, x)?;
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::Domain(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    if x == 0.0 {
        return Ok(BasisRow { n, x, values: vec![1.0], tail_bound: 0.0 });
    }
    let k = truncation_index(n, x, tol)?;
    basis_row_to(n, x, k)
}

/// Basis row with a caller-chosen truncation index `K`.
///
/// Values are generated by the ratio recurrence, seeded at the mode with a
/// log-gamma evaluation and run outward in both directions, so neither end of
/// the row over- or underflows prematurely. The tail bound is the geometric
/// one when it applies at `K`, and 1 otherwise.
pub fn basis_row_to(n: u64, x: f64, last: usize) -> Result<BasisRow> {
    check_domain(n, x)?;
    if x == 0.0 {
        let mut values = vec![0.0; last + 1];
        values[0] = 1.0;
        return Ok(BasisRow { n, x, values, tail_bound: 0.0 });
    }
    let mut values = vec![0.0; last + 1];
    let seed = (mode(n, x) as usize).min(last);
    values[seed] = eval_basis(n, seed as u64, x)?;
    for k in seed..last {
        values[k + 1] = values[k] * step_ratio(n, k as u64, x);
    }
    for k in (0..seed).rev() {
        values[k] = values[k + 1] / step_ratio(n, k as u64, x);
    }
    let q = tail_ratio(x);
    let tail_bound = if step_ratio(n, last as u64, x) <= q {
        (values[last] * q / (1.0 - q)).min(1.0)
    } else {
        1.0
    };
    Ok(BasisRow { n, x, values, tail_bound })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        if a == b {
            0.0
        } else {
            (a - b).abs() / a.abs().max(b.abs())
        }
    }

    #[test]
    fn eval_basis_examples() {
        assert_eq!(eval_basis(3, 0, 1.0).unwrap(), 0.125);
        assert!(rel(eval_basis(2, 1, 1.0).unwrap(), 0.25) < 1e-15);
        // 10 * 0.25 / 1.5^6 = 2.5 * 64 / 729 = 160 / 729
        let expected = 160.0 / 729.0;
        assert!(rel(eval_basis(4, 2, 0.5).unwrap(), expected) < 1e-14);
        assert!(rel(expected, 0.219_478_737_997_256_53) < 1e-15);
        assert!(rel(eval_basis(4, 2, 0.5).unwrap(), 0.219_478_737_997_256_53) < 1e-14);
    }

    #[test]
    fn eval_basis_at_origin_is_point_mass() {
        assert_eq!(eval_basis(7, 0, 0.0).unwrap(), 1.0);
        assert_eq!(eval_basis(7, 3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn eval_basis_rejects_bad_domain() {
        assert!(matches!(eval_basis(0, 1, 1.0), Err(Error::Domain(_))));
        assert!(matches!(eval_basis(3, 1, -0.5), Err(Error::Domain(_))));
        assert!(matches!(eval_basis(3, 1, f64::NAN), Err(Error::Domain(_))));
    }

    #[test]
    fn eval_basis_large_arguments_do_not_overflow() {
        let v = eval_basis(5000, 10_000, 2.0).unwrap();
        assert!(v.is_finite() && v > 0.0);
    }

    #[test]
    fn row_at_origin() {
        let row = basis_row(5, 0.0, 1e-12).unwrap();
        assert_eq!(row.values, vec![1.0]);
        assert_eq!(row.truncation(), 0);
        assert_eq!(row.tail_bound, 0.0);
    }

    #[test]
    fn row_normalization_and_cross_check() {
        let row = basis_row(10, 1.0, 1e-12).unwrap();
        assert!((row.sum() - 1.0).abs() <= 1e-12);
        assert!(row.tail_bound <= 1e-12);
        for (k, &v) in row.values.iter().enumerate() {
            let direct = eval_basis(10, k as u64, 1.0).unwrap();
            assert!(rel(v, direct) < 1e-13, "k={k}: {v} vs {direct}");
        }
    }

    #[test]
    fn row_survives_underflow_of_first_entry() {
        // (1+x)^-n underflows here; the mode-seeded recurrence must not.
        let row = basis_row(800, 2.0, 1e-14).unwrap();
        assert!((row.sum() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn truncation_small_x() {
        let k = truncation_index(5, 1e-8, 1e-10).unwrap();
        assert!(k <= 3, "K = {k}");
    }

    #[test]
    fn truncation_past_mode() {
        let k = truncation_index(100, 1.0, 1e-12).unwrap();
        assert!(k >= 100);
    }

    #[test]
    fn truncation_tail_is_certified_by_oversummation() {
        for &(n, x, tol) in &[(3u64, 0.5, 1e-6), (10, 1.0, 1e-12), (40, 2.0, 1e-10), (7, 0.1, 1e-14)] {
            let k = truncation_index(n, x, tol).unwrap();
            let extra = k + 10 * ((k as f64).sqrt().ceil() as usize) + 10;
            let tail = compensated(
                (k + 1..=extra).map(|j| eval_basis(n, j as u64, x).unwrap()),
            );
            assert!(tail <= tol, "n={n} x={x}: tail {tail} > {tol}");
        }
    }

    #[test]
    fn first_order_collapse_identity() {
        for n in [1u64, 2, 5, 13, 40] {
            for &x in &[0.1, 0.5, 1.0, 2.5] {
                for k in 0..60u64 {
                    let a = (1.0 + x) * eval_basis(n + 1, k, x).unwrap();
                    let b = if k > 0 { x * eval_basis(n + 1, k - 1, x).unwrap() } else { 0.0 };
                    let rhs = eval_basis(n, k, x).unwrap();
                    assert!((a - b - rhs).abs() <= 1e-13 * (a + b), "n={n} k={k} x={x}");
                }
            }
        }
    }

    #[test]
    fn second_order_collapse_identity() {
        for n in [1u64, 3, 10, 30] {
            for &x in &[0.2, 1.0, 2.0] {
                for k in 0..60u64 {
                    let p = |j: i64| if j < 0 { 0.0 } else { eval_basis(n + 2, j as u64, x).unwrap() };
                    let k = k as i64;
                    let terms = [(1.0 + x).powi(2) * p(k), -2.0 * x * (1.0 + x) * p(k - 1), x * x * p(k - 2)];
                    let lhs = compensated(terms);
                    let scale: f64 = terms.iter().map(|t| t.abs()).sum();
                    let rhs = eval_basis(n, k as u64, x).unwrap();
                    assert!((lhs - rhs).abs() <= 1e-13 * scale, "n={n} k={k} x={x}: {lhs} vs {rhs}");
                }
            }
        }
    }
}
