use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::exact::{to_f64, BigRat};

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Highest derivative order a [`TestFunction`] can carry.
pub const MAX_DERIVATIVE: usize = 4;

/// A named target function on `[0, inf)`.
///
/// Bounded functions carry a bound on their sup norm, which the operator
/// evaluator uses to budget truncation error. Polynomials carry exact
/// coefficients so that Durrmeyer-type operators can route them through the
/// exact moment kernel instead of quadrature.
#[derive(Clone)]
pub struct TestFunction {
    pub id: String,
    eval: RealFn,
    pub sup_bound: Option<f64>,
    derivatives: [Option<RealFn>; MAX_DERIVATIVE],
    pub limit_at_infinity: Option<f64>,
    polynomial: Option<Vec<BigRat>>,
}

impl fmt::Debug for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TestFunction")
            .field("id", &self.id)
            .field("sup_bound", &self.sup_bound)
            .field("derivatives", &self.derivative_orders())
            .field("polynomial", &self.polynomial.is_some())
            .finish()
    }
}

impl TestFunction {
    pub fn new<F>(id: impl Into<String>, eval: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        Self {
            id: id.into(),
            eval: Arc::new(eval),
            sup_bound: None,
            derivatives: [None, None, None, None],
            limit_at_infinity: None,
            polynomial: None,
        }
    }

    /// Marks the function bounded with `sup |f| <= sup`.
    pub fn bounded(mut self, sup: f64) -> Self {
        self.sup_bound = Some(sup);
        self
    }

    pub fn with_limit(mut self, limit: f64) -> Self {
        self.limit_at_infinity = Some(limit);
        self
    }

    /// Registers the derivative of the given order (1-based).
    pub fn with_derivative<F>(mut self, order: usize, d: F) -> Self
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        assert!((1..=MAX_DERIVATIVE).contains(&order), "derivative order {order} out of range");
        self.derivatives[order - 1] = Some(Arc::new(d));
        self
    }

    /// Polynomial `sum_j coeffs[j] t^j` with all derivatives registered.
    pub fn polynomial(id: impl Into<String>, coeffs: Vec<BigRat>) -> Self {
        let float: Arc<Vec<f64>> = Arc::new(coeffs.iter().map(to_f64).collect());
        let horner = |c: Arc<Vec<f64>>| move |t: f64| c.iter().rev().fold(0.0, |acc, &ci| acc * t + ci);
        let mut f = Self::new(id, horner(float.clone()));
        if coeffs.len() <= 1 {
            f.sup_bound = Some(float.first().map_or(0.0, |c| c.abs()));
            f.limit_at_infinity = Some(float.first().copied().unwrap_or(0.0));
        }
        let mut current = float.as_ref().clone();
        for order in 1..=MAX_DERIVATIVE {
            current = current
                .iter()
                .enumerate()
                .skip(1)
                .map(|(p, c)| p as f64 * c)
                .collect();
            f.derivatives[order - 1] = Some(Arc::new(horner(Arc::new(current.clone()))));
        }
        f.polynomial = Some(coeffs);
        f
    }

    /// `alpha f + beta g`, with derivatives, bounds and polynomial data combined
    /// where both sides provide them.
    pub fn linear_combination(alpha: f64, f: &TestFunction, beta: f64, g: &TestFunction) -> Self {
        let (fe, ge) = (f.eval.clone(), g.eval.clone());
        let mut h = Self::new(format!("{alpha}*{}+{beta}*{}", f.id, g.id), move |t| {
            alpha * fe(t) + beta * ge(t)
        });
        h.sup_bound = match (f.sup_bound, g.sup_bound) {
            (Some(a), Some(b)) => Some(alpha.abs() * a + beta.abs() * b),
            _ => None,
        };
        h.limit_at_infinity = match (f.limit_at_infinity, g.limit_at_infinity) {
            (Some(a), Some(b)) => Some(alpha * a + beta * b),
            _ => None,
        };
        for i in 0..MAX_DERIVATIVE {
            if let (Some(df), Some(dg)) = (f.derivatives[i].clone(), g.derivatives[i].clone()) {
                h.derivatives[i] = Some(Arc::new(move |t| alpha * df(t) + beta * dg(t)));
            }
        }
        if let (Some(pf), Some(pg)) = (&f.polynomial, &g.polynomial) {
            let (a, b) = (
                crate::exact::from_f64(alpha).expect("finite"),
                crate::exact::from_f64(beta).expect("finite"),
            );
            let len = pf.len().max(pg.len());
            let zero = BigRat::from_integer(0.into());
            let coeffs = (0..len)
                .map(|i| &a * pf.get(i).unwrap_or(&zero) + &b * pg.get(i).unwrap_or(&zero))
                .collect();
            h.polynomial = Some(coeffs);
        }
        h
    }

    #[inline]
    pub fn eval(&self, t: f64) -> f64 {
        (self.eval)(t)
    }

    pub fn is_bounded(&self) -> bool {
        self.sup_bound.is_some()
    }

    pub fn polynomial_coefficients(&self) -> Option<&[BigRat]> {
        self.polynomial.as_deref()
    }

    /// Degree of a polynomial function (trailing zero coefficients ignored).
    pub fn degree(&self) -> Option<usize> {
        self.polynomial.as_ref().map(|c| {
            c.iter()
                .rposition(|ci| ci != &BigRat::from_integer(0.into()))
                .unwrap_or(0)
        })
    }

    pub fn derivative_orders(&self) -> Vec<usize> {
        (1..=MAX_DERIVATIVE).filter(|&o| self.derivatives[o - 1].is_some()).collect()
    }

    /// Value of the registered derivative of `order` (0 gives `f` itself).
    pub fn derivative(&self, order: usize, t: f64) -> Result<f64> {
        if order == 0 {
            return Ok(self.eval(t));
        }
        self.derivatives
            .get(order - 1)
            .and_then(|d| d.as_ref())
            .map(|d| d(t))
            .ok_or_else(|| Error::MissingDerivatives(self.id.clone(), order))
    }
}

/// Registered functions used throughout the analysis and CLI.
pub mod corpus {
    use super::*;
    use crate::exact::int;

    pub fn expneg() -> TestFunction {
        TestFunction::new("expneg", |t: f64| (-t).exp())
            .bounded(1.0)
            .with_limit(0.0)
            .with_derivative(1, |t: f64| -(-t).exp())
            .with_derivative(2, |t: f64| (-t).exp())
            .with_derivative(3, |t: f64| -(-t).exp())
            .with_derivative(4, |t: f64| (-t).exp())
    }

    pub fn inv1p() -> TestFunction {
        TestFunction::new("inv1p", |t: f64| 1.0 / (1.0 + t))
            .bounded(1.0)
            .with_limit(0.0)
            .with_derivative(1, |t: f64| -1.0 / (1.0 + t).powi(2))
            .with_derivative(2, |t: f64| 2.0 / (1.0 + t).powi(3))
            .with_derivative(3, |t: f64| -6.0 / (1.0 + t).powi(4))
            .with_derivative(4, |t: f64| 24.0 / (1.0 + t).powi(5))
    }

    pub fn ratio() -> TestFunction {
        TestFunction::new("ratio", |t: f64| t / (1.0 + t))
            .bounded(1.0)
            .with_limit(1.0)
            .with_derivative(1, |t: f64| 1.0 / (1.0 + t).powi(2))
            .with_derivative(2, |t: f64| -2.0 / (1.0 + t).powi(3))
            .with_derivative(3, |t: f64| 6.0 / (1.0 + t).powi(4))
            .with_derivative(4, |t: f64| -24.0 / (1.0 + t).powi(5))
    }

    pub fn dampedsin() -> TestFunction {
        TestFunction::new("dampedsin", |t: f64| (-t).exp() * t.sin())
            .bounded(1.0)
            .with_limit(0.0)
            .with_derivative(1, |t: f64| (-t).exp() * (t.cos() - t.sin()))
            .with_derivative(2, |t: f64| -2.0 * (-t).exp() * t.cos())
            .with_derivative(3, |t: f64| 2.0 * (-t).exp() * (t.cos() + t.sin()))
            .with_derivative(4, |t: f64| -4.0 * (-t).exp() * t.sin())
    }

    /// `t^j`.
    pub fn monomial(j: usize) -> TestFunction {
        let mut coeffs = vec![int(0); j + 1];
        coeffs[j] = int(1);
        TestFunction::polynomial(format!("t{j}"), coeffs)
    }

    /// The four bounded smooth functions of the default study corpus.
    pub fn bounded_corpus() -> Vec<TestFunction> {
        vec![expneg(), inv1p(), ratio(), dampedsin()]
    }

    pub const NAMES: &[&str] = &["expneg", "inv1p", "ratio", "dampedsin", "t0", "t1", "t2", "t3", "t4"];

    pub fn by_name(name: &str) -> Option<TestFunction> {
        match name {
            "expneg" => Some(expneg()),
            "inv1p" => Some(inv1p()),
            "ratio" => Some(ratio()),
            "dampedsin" => Some(dampedsin()),
            _ => {
                let j: usize = name.strip_prefix('t')?.parse().ok()?;
                (j <= 4).then(|| monomial(j))
            }
        }
    }
}
