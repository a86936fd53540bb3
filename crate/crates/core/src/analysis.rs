//! Convergence-order estimation and Voronovskaja-type asymptotics.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::{exact_central_moment, from_f64, int, to_f64, BigRat};
use crate::operators::{Evaluator, OperatorKind, SequenceSpec, TestFunction};

/// Closed interval `[a, b]` inside `[0, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub a: f64,
    pub b: f64,
}

impl Interval {
    pub fn new(a: f64, b: f64) -> Result<Self> {
        if !(a >= 0.0 && b >= a && b.is_finite()) {
            return Err(Error::Domain(format!("interval [{a}, {b}] must satisfy 0 <= a <= b < inf")));
        }
        Ok(Self { a, b })
    }

    /// `points` equally spaced nodes including both ends.
    pub fn grid(&self, points: usize) -> Result<Vec<f64>> {
        if points < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 points, got {points}")));
        }
        let (span, last) = (self.b - self.a, (points - 1) as f64);
        Ok((0..points)
            .map(|i| if i + 1 == points { self.b } else { self.a + span * i as f64 / last })
            .collect())
    }
}

impl Default for Interval {
    fn default() -> Self {
        Self { a: 0.0, b: 2.0 }
    }
}

/// `max_x |Op_n f(x) - f(x)|` over a uniform grid.
pub fn sup_error(
    evaluator: &Evaluator,
    kind: &OperatorKind,
    n: u64,
    f: &TestFunction,
    interval: Interval,
    grid_points: usize,
    tol: f64,
) -> Result<f64> {
    let xs = interval.grid(grid_points)?;
    let values = evaluator.apply_many(kind, n, f, &xs, tol)?;
    Ok(xs
        .iter()
        .zip(values)
        .map(|(&x, v)| (v - f.eval(x)).abs())
        .fold(0.0, f64::max))
}

/// Least-squares slope of `ln error` against `ln n`, with `r^2`.
pub fn fit_order(n_list: &[u64], errors: &[f64]) -> Result<(f64, f64)> {
    if n_list.len() != errors.len() {
        return Err(Error::Domain("n_list and errors differ in length".into()));
    }
    if n_list.len() < 3 {
        return Err(Error::Domain(format!("need at least 3 points to fit, got {}", n_list.len())));
    }
    if let Some(i) = errors.iter().position(|&e| !(e > 0.0) || !e.is_finite()) {
        return Err(Error::ZeroError(i));
    }
    let xs: Vec<f64> = n_list.iter().map(|&n| (n as f64).ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let len = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / len;
    let my = ys.iter().sum::<f64>() / len;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Domain("n_list must contain distinct values".into()));
    }
    let slope = sxy / sxx;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy / (sxx * syy)).min(1.0) };
    Ok((slope, r_squared))
}

/// Sup errors over `n_list` with the fitted order.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub kind: String,
    pub function: String,
    pub interval: Interval,
    pub grid_points: usize,
    pub n_list: Vec<u64>,
    pub sup_errors: Vec<f64>,
    pub slope: f64,
    pub r_squared: f64,
}

fn check_n_list(n_list: &[u64]) -> Result<()> {
    if n_list.len() < 3 || n_list.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain(format!(
            "n list must be strictly increasing with at least 3 entries, got {n_list:?}"
        )));
    }
    Ok(())
}

pub fn convergence_study(
    evaluator: &Evaluator,
    kind: &OperatorKind,
    f: &TestFunction,
    interval: Interval,
    grid_points: usize,
    n_list: &[u64],
    tol: f64,
) -> Result<ConvergenceReport> {
    check_n_list(n_list)?;
    let sup_errors = n_list
        .iter()
        .map(|&n| sup_error(evaluator, kind, n, f, interval, grid_points, tol))
        .collect::<Result<Vec<_>>>()?;
    let (slope, r_squared) = fit_order(n_list, &sup_errors)?;
    Ok(ConvergenceReport {
        kind: kind.label().to_string(),
        function: f.id.clone(),
        interval,
        grid_points,
        n_list: n_list.to_vec(),
        sup_errors,
        slope,
        r_squared,
    })
}

/// `lim n (V_{n,1} f - f)(x)` for sequence limits `l`, `m`.
pub fn voronovskaja_limit_mod1(l: f64, m: f64, f: &TestFunction, x: f64) -> Result<f64> {
    let d1 = f.derivative(1, x)?;
    let d2 = f.derivative(2, x)?;
    let first = (1.0 + 2.0 * x) * (3.0 * l - 2.0 * m);
    let second = l * (3.0 + 16.0 * x + 16.0 * x * x) + m * (-2.0 - 10.0 * x - 10.0 * x * x);
    Ok(first * d1 + 0.5 * d2 * second)
}

/// Sample sizes at which `n^2 mu_j` is evaluated for the second-order limits.
pub const MOD2_LIMIT_NS: [u64; 3] = [1_000, 10_000, 100_000];

/// Polynomial extrapolation to `h = 1/n -> 0` through all given points.
fn extrapolate_to_infinity(ns: &[u64], values: &[BigRat]) -> BigRat {
    let hs: Vec<BigRat> = ns.iter().map(|&n| BigRat::new(1.into(), n.into())).collect();
    let mut total = BigRat::zero();
    for (i, v) in values.iter().enumerate() {
        let mut weight = BigRat::from_integer(1.into());
        for (j, hj) in hs.iter().enumerate() {
            if i != j {
                weight *= hj / (hj - &hs[i]);
            }
        }
        total += weight * v;
    }
    total
}

/// `n^p mu_order(n, x)` from the exact oracle.
fn scaled_central(kind: &OperatorKind, n: u64, x: &BigRat, order: usize, power: u32) -> Result<BigRat> {
    let scale = num_traits::pow(int(n as i64), power as usize);
    Ok(exact_central_moment(kind, n, x, order)? * scale)
}

/// `lim n^2 mu_j(n, x)` for `j = 2, 3, 4` of the second-order operator,
/// extrapolated exactly from the oracle at [`MOD2_LIMIT_NS`].
pub fn mod2_limit_coefficients(x: f64) -> Result<[f64; 3]> {
    let xr = from_f64(x)?;
    let mut out = [0.0; 3];
    for (slot, order) in out.iter_mut().zip(2..=4usize) {
        let values = MOD2_LIMIT_NS
            .iter()
            .map(|&n| scaled_central(&OperatorKind::Mod2, n, &xr, order, 2))
            .collect::<Result<Vec<_>>>()?;
        *slot = to_f64(&extrapolate_to_infinity(&MOD2_LIMIT_NS, &values));
    }
    Ok(out)
}

/// `lim n^2 (V_{n,2} f - f)(x) = sum_{j=2..4} f^(j)(x)/j! lim n^2 mu_j`,
/// with the moment limits taken from [`mod2_limit_coefficients`].
pub fn voronovskaja_limit_mod2_derived(f: &TestFunction, x: f64) -> Result<f64> {
    let derivatives = [f.derivative(2, x)?, f.derivative(3, x)?, f.derivative(4, x)?];
    let coefficients = mod2_limit_coefficients(x)?;
    let factorials = [2.0, 6.0, 24.0];
    Ok((0..3).map(|i| coefficients[i] * derivatives[i] / factorials[i]).sum())
}

/// Scaled residuals `n^p (Op_n f - f)(x)` against the asymptotic limit.
#[derive(Debug, Clone, PartialEq)]
pub struct VoronovskajaReport {
    pub order: u32,
    pub x: f64,
    pub n_list: Vec<u64>,
    pub scaled_residuals: Vec<f64>,
    pub limit_value: f64,
    pub abs_gaps: Vec<f64>,
}

impl VoronovskajaReport {
    /// Final gap below half the first one and, for limits above 0.1 in
    /// magnitude, below 15% of the limit.
    pub fn gaps_shrink(&self) -> bool {
        let (Some(first), Some(last)) = (self.abs_gaps.first(), self.abs_gaps.last()) else {
            return false;
        };
        let halved = *last < 0.5 * first;
        let relative = self.limit_value.abs() <= 0.1 || *last < 0.15 * self.limit_value.abs();
        halved && relative
    }
}

fn sequence_limits(spec: &SequenceSpec) -> Result<(f64, f64)> {
    let (l, m) = spec.limits()?;
    Ok((to_f64(&l), to_f64(&m)))
}

pub fn voronovskaja_residuals(
    evaluator: &Evaluator,
    order: u32,
    kind: &OperatorKind,
    f: &TestFunction,
    x: f64,
    n_list: &[u64],
    tol: f64,
) -> Result<VoronovskajaReport> {
    let limit_value = match (order, kind) {
        (1, OperatorKind::Mod1(spec)) => {
            let (l, m) = sequence_limits(spec)?;
            voronovskaja_limit_mod1(l, m, f, x)?
        }
        (1, OperatorKind::BaskakovDurrmeyer) => voronovskaja_limit_mod1(1.0, 1.0, f, x)?,
        (2, OperatorKind::Mod2) => voronovskaja_limit_mod2_derived(f, x)?,
        _ => {
            return Err(Error::Domain(format!(
                "no order-{order} asymptotic limit for {}",
                kind.label()
            )))
        }
    };
    let fx = f.eval(x);
    let scaled_residuals = n_list
        .iter()
        .map(|&n| {
            let value = evaluator.apply(kind, n, f, x, tol)?;
            Ok((n as f64).powi(order as i32) * (value - fx))
        })
        .collect::<Result<Vec<_>>>()?;
    let abs_gaps = scaled_residuals.iter().map(|r| (r - limit_value).abs()).collect();
    Ok(VoronovskajaReport { order, x, n_list: n_list.to_vec(), scaled_residuals, limit_value, abs_gaps })
}

/// Power `p` with `n^p mu_order` bounded and generically nonzero in the limit.
///
/// First-order kinds: `ceil(order / 2)`. Second-order: `2` for orders 2 to 4,
/// `3` for orders 5 and 6.
pub fn scaling_power(kind: &OperatorKind, order: usize) -> Result<u32> {
    match kind {
        OperatorKind::Mod2 => match order {
            1..=4 => Ok(2),
            5 | 6 => Ok(3),
            _ => Err(Error::OutOfRange(format!("central order {order} exceeds 6"))),
        },
        OperatorKind::Baskakov => Err(Error::Domain("scaling is defined for Durrmeyer-type kinds".into())),
        _ if order <= 4 => Ok(order.div_ceil(2) as u32),
        _ => Err(Error::OutOfRange(format!("central order {order} exceeds 4"))),
    }
}

/// `n^p mu_order(n, x)` for each `n`, with `p` from [`scaling_power`].
pub fn central_moment_scaling(kind: &OperatorKind, x: &BigRat, order: usize, n_list: &[u64]) -> Result<Vec<f64>> {
    let power = scaling_power(kind, order)?;
    n_list
        .iter()
        .map(|&n| scaled_central(kind, n, x, order, power).map(|v| to_f64(&v)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::operators::corpus;

    #[test]
    fn grid_endpoints() {
        let g = Interval::default().grid(41).unwrap();
        assert_eq!(g.len(), 41);
        assert_eq!(g[0], 0.0);
        assert_eq!(g[40], 2.0);
        assert!(Interval::new(2.0, 1.0).is_err());
        assert!(Interval::default().grid(1).is_err());
    }

    #[test]
    fn fit_is_exact_on_power_laws() {
        let ns = [16u64, 32, 64, 128, 256];
        for p in [0.5, 1.0, 2.0, 3.0] {
            let errs: Vec<f64> = ns.iter().map(|&n| 3.7 * (n as f64).powf(-p)).collect();
            let (slope, r2) = fit_order(&ns, &errs).unwrap();
            assert!((slope + p).abs() < 1e-10, "{slope}");
            assert!((r2 - 1.0).abs() < 1e-12);
        }
        assert!(matches!(fit_order(&ns, &[1.0, 0.5, 0.0, 0.1, 0.1]), Err(Error::ZeroError(2))));
        assert!(fit_order(&ns[..2], &[1.0, 0.5]).is_err());
    }

    #[test]
    fn sup_error_examples() {
        let ev = Evaluator::new();
        let one = corpus::monomial(0);
        let e = sup_error(&ev, &OperatorKind::Mod2, 20, &one, Interval::default(), 41, 1e-10).unwrap();
        assert!(e <= 1e-10);
        let t = corpus::monomial(1);
        let e = sup_error(&ev, &OperatorKind::Mod2, 20, &t, Interval::default(), 41, 1e-10).unwrap();
        assert!(e <= 1e-9, "{e}");
        let e = sup_error(&ev, &OperatorKind::BaskakovDurrmeyer, 10, &t, Interval::default(), 41, 1e-10).unwrap();
        assert!((e - 0.625).abs() < 1e-9, "{e}");
    }

    #[test]
    fn first_order_limit_examples() {
        let v = voronovskaja_limit_mod1(1.0, 1.0, &corpus::expneg(), 1.0).unwrap();
        assert!((v - 3.5 * (-1f64).exp()).abs() < 1e-12);
        let lin = corpus::monomial(1);
        for x in [0.0, 0.4, 1.3] {
            let v = voronovskaja_limit_mod1(0.75, 0.75, &lin, x).unwrap();
            assert!((v - 0.75 * (1.0 + 2.0 * x)).abs() < 1e-12);
        }
        assert_eq!(voronovskaja_limit_mod1(2.0, 3.0, &corpus::monomial(2), 0.0).unwrap(), 0.0);
        let bare = TestFunction::new("bare", |t| t).bounded(1.0);
        assert!(matches!(voronovskaja_limit_mod1(1.0, 1.0, &bare, 1.0), Err(Error::MissingDerivatives(_, 1))));
    }

    fn closed_mod2_coefficients(x: f64) -> [f64; 3] {
        let xx = x * (1.0 + x);
        [-(3.0 + 16.0 * x + 16.0 * x * x), -12.0 * xx * (1.0 + 2.0 * x), -12.0 * xx * xx]
    }

    #[test]
    fn second_order_limit_coefficients() {
        for x in [0.0, 0.25, 1.0, 2.0] {
            let derived = mod2_limit_coefficients(x).unwrap();
            let closed = closed_mod2_coefficients(x);
            for (d, c) in derived.iter().zip(closed) {
                // Three-point extrapolation leaves an O(1e-9) remainder.
                assert!((d - c).abs() <= 1e-7 * c.abs().max(1.0), "x={x}: {d} vs {c}");
            }
        }
    }

    #[test]
    fn second_order_limit_examples() {
        assert_eq!(voronovskaja_limit_mod2_derived(&corpus::monomial(1), 0.7).unwrap(), 0.0);
        let v = voronovskaja_limit_mod2_derived(&corpus::monomial(2), 1.0).unwrap();
        assert!((v + 35.0).abs() < 1e-7, "{v}");
        let f = corpus::inv1p();
        let v = voronovskaja_limit_mod2_derived(&f, 0.0).unwrap();
        assert!((v + 1.5 * f.derivative(2, 0.0).unwrap()).abs() < 1e-7);
    }

    #[test]
    fn scaling_examples() {
        let classical = OperatorKind::Mod1(SequenceSpec::classical());
        // n mu_2 = n (2 (n + 3) x (1 + x) + 2) / ((n - 2)(n - 3)) -> 2 x (1 + x).
        let v = central_moment_scaling(&classical, &int(1), 2, &[10_000]).unwrap()[0];
        assert!((v - 4.0).abs() < 4e-3, "{v}");
        let v = central_moment_scaling(&classical, &int(0), 4, &[100, 1000]).unwrap();
        assert!(v[1].abs() < v[0].abs());
        let v = central_moment_scaling(&OperatorKind::Mod2, &int(1), 2, &[10_000]).unwrap()[0];
        assert!((v + 35.0).abs() < 0.35, "{v}");
        assert_eq!(scaling_power(&OperatorKind::Mod2, 5).unwrap(), 3);
        assert_eq!(scaling_power(&classical, 3).unwrap(), 2);
        assert!(central_moment_scaling(&classical, &rat(1, 2), 5, &[100]).is_err());
    }

    #[test]
    fn constant_residuals_vanish() {
        let ev = Evaluator::new();
        let one = corpus::monomial(0);
        let spec = SequenceSpec::constant(rat(3, 4), rat(1, 2)).unwrap();
        let r = voronovskaja_residuals(&ev, 1, &OperatorKind::Mod1(spec), &one, 0.8, &[50, 100, 200], 1e-12).unwrap();
        for (res, n) in r.scaled_residuals.iter().zip([50.0, 100.0, 200.0]) {
            assert!(res.abs() <= 1e-8 * n);
        }
        assert!(voronovskaja_residuals(&ev, 2, &OperatorKind::BaskakovDurrmeyer, &one, 0.8, &[50], 1e-12).is_err());
    }
}
