use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rayon::prelude::*;

use crate::basis::{basis_row, basis_row_to, weighted_truncation_index};
use crate::error::{Error, Result};
use crate::exact::to_f64;
use crate::operators::weights::{shifted_weights, ShiftedWeights};
use crate::operators::{OperatorKind, TestFunction};
use crate::quad::{durrmeyer_coefficient, QuadConfig};
use crate::sum::compensated;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct CacheKey {
    n: u64,
    function: String,
    abs_tol: u64,
    rel_tol: u64,
    max_depth: u32,
}

/// How `I_{n,k}(f)` is obtained for a given function.
enum Coefficients {
    /// Quadrature, cached per `(n, f, quadrature config)`.
    Quadrature(Arc<Vec<f64>>),
    /// Closed-form kernel for polynomials: `sum_j c_j M_j(k, n)`.
    Polynomial { n: u64, coeffs: Vec<f64> },
}

impl Coefficients {
    fn get(&self, k: usize) -> f64 {
        match self {
            Coefficients::Quadrature(values) => values[k],
            Coefficients::Polynomial { n, coeffs } => polynomial_coefficient(*n, k as u64, coeffs),
        }
    }
}

/// `sum_j c_j prod_{i=1..j} (k+i)/(n-i-1)` in floating point.
fn polynomial_coefficient(n: u64, k: u64, coeffs: &[f64]) -> f64 {
    let mut kernel = 1.0;
    let mut terms = Vec::with_capacity(coeffs.len());
    for (j, c) in coeffs.iter().enumerate() {
        if j > 0 {
            kernel *= (k + j as u64) as f64 / (n - j as u64 - 1) as f64;
        }
        terms.push(c * kernel);
    }
    compensated(terms)
}

/// Applies operators to functions, caching Durrmeyer coefficients so that
/// sweeps over many `x` at the same `(n, f)` integrate each `I_{n,k}` once.
///
/// The cache is keyed by function id; ids are assumed to name a single
/// function for the lifetime of an evaluator.
#[derive(Debug, Default)]
pub struct Evaluator {
    cache: RwLock<HashMap<CacheKey, Arc<Vec<f64>>>>,
}

/// Quadrature configuration used for an operator tolerance `tol`.
pub fn quad_config_for(tol: f64) -> QuadConfig {
    let t = (tol * 1e-3).clamp(1e-14, 1e-12);
    QuadConfig { abs_tol: t, rel_tol: t, max_depth: 40 }
}

/// Plan for one evaluation: weights and the truncation index of the k-sum.
struct Plan {
    weights: ShiftedWeights,
    last: usize,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of cached coefficient vectors (one per `(n, f, config)`).
    pub fn cached_series(&self) -> usize {
        self.cache.read().expect("cache poisoned").len()
    }

    fn quadrature_coefficients(
        &self,
        n: u64,
        f: &TestFunction,
        upto: usize,
        cfg: &QuadConfig,
    ) -> Result<Arc<Vec<f64>>> {
        let key = CacheKey {
            n,
            function: f.id.clone(),
            abs_tol: cfg.abs_tol.to_bits(),
            rel_tol: cfg.rel_tol.to_bits(),
            max_depth: cfg.max_depth,
        };
        let have = {
            let cache = self.cache.read().expect("cache poisoned");
            match cache.get(&key) {
                Some(v) if v.len() > upto => return Ok(v.clone()),
                Some(v) => v.len(),
                None => 0,
            }
        };
        let fresh: Vec<f64> = (have..=upto)
            .into_par_iter()
            .map(|k| {
                let r = durrmeyer_coefficient(n, k as u64, f, cfg)?;
                if !r.converged {
                    return Err(Error::NonConvergence(format!(
                        "I_(n={n},k={k})({}) error estimate {:e} after {} panels",
                        f.id, r.error_estimate, r.panels
                    )));
                }
                Ok(r.value)
            })
            .collect::<Result<_>>()?;
        let mut cache = self.cache.write().expect("cache poisoned");
        let entry = cache.entry(key).or_default();
        if entry.len() <= upto {
            // Every I_k depends only on (n, k, f, cfg), so merging is idempotent.
            let mut merged = entry.as_ref().clone();
            merged.extend_from_slice(&fresh[merged.len() - have..]);
            *entry = Arc::new(merged);
        }
        Ok(entry.clone())
    }

    /// Truncation plan for a Durrmeyer-type operator at `x`.
    fn plan(&self, kind: &OperatorKind, n: u64, f: &TestFunction, x: f64, tol: f64) -> Result<Plan> {
        let weights = shifted_weights(kind, n, x)?;
        let shift = weights.max_shift() as u64;
        let budget = (0.5 * tol / weights.abs_sum().max(1.0)).min(0.5);
        let m = weights.base_degree;
        let j = match (f.sup_bound, f.polynomial_coefficients()) {
            (_, Some(coeffs)) => {
                let degree = f.degree().unwrap_or(0);
                // With n >= degree + 2 every kernel denominator factor is >= 1,
                // so |I_k| <= sum_j |c_j| prod_{i<=degree} (k+i).
                let scale: f64 = coeffs.iter().map(|c| to_f64(c).abs()).sum::<f64>().max(1e-300);
                weighted_truncation_index(m, x, budget, |j| {
                    let k = j + shift;
                    scale * (1..=degree as u64).map(|i| (k + i) as f64).product::<f64>()
                })?
            }
            (Some(sup), None) => weighted_truncation_index(m, x, budget, |_| sup.max(1e-300))?,
            (None, None) => return Err(Error::UnboundedFunction(f.id.clone())),
        };
        Ok(Plan { weights, last: j + shift as usize })
    }

    fn coefficients(
        &self,
        n: u64,
        f: &TestFunction,
        upto: usize,
        tol: f64,
    ) -> Result<Coefficients> {
        if let Some(coeffs) = f.polynomial_coefficients() {
            let degree = f.degree().unwrap_or(0);
            if n <= degree as u64 + 1 {
                return Err(Error::DivergentMoment { n, degree });
            }
            let coeffs = coeffs[..=degree].iter().map(to_f64).collect();
            return Ok(Coefficients::Polynomial { n, coeffs });
        }
        if !f.is_bounded() {
            return Err(Error::UnboundedFunction(f.id.clone()));
        }
        let cfg = quad_config_for(tol);
        Ok(Coefficients::Quadrature(self.quadrature_coefficients(n, f, upto, &cfg)?))
    }

    fn check(kind: &OperatorKind, n: u64, x: f64, tol: f64) -> Result<()> {
        if !(tol > 0.0) {
            return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
        }
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::Domain(format!("x must be finite and >= 0, got {x}")));
        }
        let min_n = if matches!(kind, OperatorKind::Baskakov) { 1 } else { 3 };
        if n < min_n {
            return Err(Error::Domain(format!("{} needs n >= {min_n}, got {n}", kind.label())));
        }
        Ok(())
    }

    fn apply_baskakov(&self, n: u64, f: &TestFunction, x: f64, tol: f64) -> Result<f64> {
        let row = if let Some(coeffs) = f.polynomial_coefficients() {
            let degree = f.degree().unwrap_or(0) as i32;
            let abs: f64 = coeffs.iter().map(|c| to_f64(c).abs()).sum::<f64>().max(1e-300);
            let nf = n as f64;
            let last = weighted_truncation_index(n, x, (0.5 * tol).min(0.5), |k| {
                abs * ((k + 1) as f64 / nf).powi(degree)
            })?;
            basis_row_to(n, x, last)?
        } else if let Some(sup) = f.sup_bound {
            basis_row(n, x, (0.5 * tol / sup.max(1.0)).min(0.5))?
        } else {
            return Err(Error::UnboundedFunction(f.id.clone()));
        };
        let nf = n as f64;
        Ok(compensated(row.values.iter().enumerate().map(|(k, p)| p * f.eval(k as f64 / nf))))
    }

    /// `Operator(f)(x)` to within roughly `tol` absolute.
    pub fn apply(&self, kind: &OperatorKind, n: u64, f: &TestFunction, x: f64, tol: f64) -> Result<f64> {
        Self::check(kind, n, x, tol)?;
        if matches!(kind, OperatorKind::Baskakov) {
            return self.apply_baskakov(n, f, x, tol);
        }
        let plan = self.plan(kind, n, f, x, tol)?;
        let coefficients = self.coefficients(n, f, plan.last, tol)?;
        Ok(self.sum_plan(&plan, &coefficients, x))
    }

    fn sum_plan(&self, plan: &Plan, coefficients: &Coefficients, x: f64) -> f64 {
        let row = basis_row_to(plan.weights.base_degree, x, plan.last).expect("validated point");
        compensated(
            (0..=plan.last).map(|k| plan.weights.weight_from_row(&row, k) * coefficients.get(k)),
        )
    }

    /// `Operator(f)(x)` for every `x` in `xs`, sharing coefficient work.
    pub fn apply_many(
        &self,
        kind: &OperatorKind,
        n: u64,
        f: &TestFunction,
        xs: &[f64],
        tol: f64,
    ) -> Result<Vec<f64>> {
        for &x in xs {
            Self::check(kind, n, x, tol)?;
        }
        if matches!(kind, OperatorKind::Baskakov) {
            return xs.par_iter().map(|&x| self.apply_baskakov(n, f, x, tol)).collect();
        }
        let plans: Vec<Plan> = xs
            .iter()
            .map(|&x| self.plan(kind, n, f, x, tol))
            .collect::<Result<_>>()?;
        let upto = plans.iter().map(|p| p.last).max().unwrap_or(0);
        let coefficients = self.coefficients(n, f, upto, tol)?;
        Ok(plans
            .par_iter()
            .zip(xs.par_iter())
            .map(|(plan, &x)| self.sum_plan(plan, &coefficients, x))
            .collect())
    }
}

/// One-shot evaluation with a fresh [`Evaluator`].
pub fn apply(kind: &OperatorKind, n: u64, f: &TestFunction, x: f64, tol: f64) -> Result<f64> {
    Evaluator::new().apply(kind, n, f, x, tol)
}
