//! Exact rational moments of every operator in the crate.
//!
//! The building block is the factorial moment of the Baskakov weights,
//! `sum_k p_{m,k}(x) k(k-1)...(k-s+1) = m(m+1)...(m+s-1) x^s`. Ordinary power
//! sums follow by a Stirling-number change of basis, and the Durrmeyer
//! kernel `(n-1) int p_{n,k}(t) t^j dt` is a polynomial in `k`, so each
//! operator moment contracts to a finite combination of power sums.
//!
//! None of this uses the closed-form moment tables in
//! [`crate::moments_paper`]; those are checked against this module.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::operators::OperatorKind;

pub type BigRat = BigRational;

/// Largest power of `k` served by [`power_sum`].
pub const MAX_POWER: usize = 8;
/// Largest moment order served by [`exact_moment`].
pub const MAX_MOMENT: usize = 6;

pub fn rat(p: i64, q: i64) -> BigRat {
    BigRat::new(BigInt::from(p), BigInt::from(q))
}

pub fn int(p: i64) -> BigRat {
    BigRat::from_integer(BigInt::from(p))
}

/// Nearest `f64` to an exact rational (via `num-rational`'s conversion).
pub fn to_f64(value: &BigRat) -> f64 {
    value.to_f64().unwrap_or(f64::NAN)
}

/// Exact rational image of a finite `f64`.
pub fn from_f64(value: f64) -> Result<BigRat> {
    BigRat::from_float(value).ok_or_else(|| Error::Domain(format!("{value} is not finite")))
}

/// `p/q` with no spaces; integers print without denominator.
pub fn format_rat(value: &BigRat) -> String {
    if value.is_integer() {
        value.numer().to_string()
    } else {
        format!("{}/{}", value.numer(), value.denom())
    }
}

/// Stirling number of the second kind `S(s, i)`.
pub fn stirling2(s: usize, i: usize) -> u64 {
    let mut table = vec![vec![0u64; s + 1]; s + 1];
    table[0][0] = 1;
    for row in 1..=s {
        for col in 1..=row {
            table[row][col] = col as u64 * table[row - 1][col] + table[row - 1][col - 1];
        }
    }
    if i > s {
        0
    } else {
        table[s][i]
    }
}

fn binomial(n: usize, k: usize) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

fn check_point(x: &BigRat) -> Result<()> {
    if x.is_negative() {
        return Err(Error::Domain(format!("x must be >= 0, got {}", format_rat(x))));
    }
    Ok(())
}

/// `sum_k p_{m,k}(x) k^(s falling) = m^(s rising) x^s`.
pub fn falling_factorial_sum(m: u64, s: usize, x: &BigRat) -> Result<BigRat> {
    if s > MAX_POWER {
        return Err(Error::OutOfRange(format!("power {s} exceeds {MAX_POWER}")));
    }
    check_point(x)?;
    let rising: BigInt = (0..s as u64).map(|i| BigInt::from(m + i)).product();
    Ok(BigRat::from_integer(rising) * num_traits::pow(x.clone(), s))
}

/// A power-sum query `sum_k p_{m,k-r}(x) k^s`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumQuery {
    pub m: u64,
    pub shift: u64,
    pub power: usize,
    pub x: BigRat,
}

/// `sum_k p_{m,k-r}(x) k^s`, exactly.
///
/// Reindexing `j = k - r` turns the sum into `sum_j p_{m,j}(x) (j + r)^s`;
/// the binomial expansion of `(j + r)^s` and the Stirling conversion
/// `j^i = sum_l S(i,l) j^(l falling)` reduce it to factorial moments.
pub fn power_sum(q: &PowerSumQuery) -> Result<BigRat> {
    if q.shift > 2 {
        return Err(Error::OutOfRange(format!("basis shift {} exceeds 2", q.shift)));
    }
    if q.power > MAX_POWER {
        return Err(Error::OutOfRange(format!("power {} exceeds {MAX_POWER}", q.power)));
    }
    check_point(&q.x)?;
    let factorial_moments: Vec<BigRat> = (0..=q.power)
        .map(|l| falling_factorial_sum(q.m, l, &q.x))
        .collect::<Result<_>>()?;
    let mut total = BigRat::zero();
    for i in 0..=q.power {
        let ordinary: BigRat = (0..=i)
            .map(|l| BigRat::from_integer(BigInt::from(stirling2(i, l))) * &factorial_moments[l])
            .sum();
        let coeff = binomial(q.power, i) * num_traits::pow(BigInt::from(q.shift), q.power - i);
        total += BigRat::from_integer(coeff) * ordinary;
    }
    Ok(total)
}

/// Durrmeyer moment kernel `(n-1) int_0^inf p_{n,k}(t) t^j dt
/// = prod_{i=1..j} (k+i) / prod_{i=2..j+1} (n-i)`.
pub fn moment_kernel(n: u64, k: u64, j: usize) -> Result<BigRat> {
    if n <= j as u64 + 1 {
        return Err(Error::DivergentMoment { n, degree: j });
    }
    let num: BigInt = (1..=j as u64).map(|i| BigInt::from(k + i)).product();
    let den: BigInt = (2..=j as u64 + 1).map(|i| BigInt::from(n - i)).product();
    Ok(BigRat::new(num, den))
}

/// Coefficients of `prod_{i=1..j} (k + i)` as a polynomial in `k`, lowest
/// power first (elementary symmetric functions of `{1, ..., j}`).
pub fn kernel_polynomial(j: usize) -> Vec<BigInt> {
    let mut coeffs = vec![BigInt::one()];
    for i in 1..=j {
        let mut next = vec![BigInt::zero(); coeffs.len() + 1];
        for (p, c) in coeffs.iter().enumerate() {
            next[p] += c * BigInt::from(i);
            next[p + 1] += c;
        }
        coeffs = next;
    }
    coeffs
}

/// One term `c(x, n) * p_{m, k - shift}(x)` of an operator's weight.
#[derive(Debug, Clone)]
pub(crate) struct WeightTerm {
    pub m: u64,
    pub shift: u64,
    pub coeff: BigRat,
}

/// Exact weight decomposition of a Durrmeyer-type operator at `(n, x)`.
pub(crate) fn weight_terms(kind: &OperatorKind, n: u64, x: &BigRat) -> Result<Vec<WeightTerm>> {
    let one = BigRat::one();
    let term = |m, shift, coeff| WeightTerm { m, shift, coeff };
    Ok(match kind {
        OperatorKind::Baskakov => {
            return Err(Error::Domain("the Baskakov operator has no Durrmeyer weights".into()))
        }
        OperatorKind::BaskakovDurrmeyer => vec![term(n, 0, one)],
        OperatorKind::Mod1(spec) => {
            let (a0, a1) = spec.resolve(n)?;
            let a = &a0 + &a1 * x;
            let b = &a0 - &a1 * (&one + x);
            vec![term(n + 1, 0, a), term(n + 1, 1, b)]
        }
        OperatorKind::SplitA(spec) => {
            let (_, a1) = spec.resolve(n)?;
            vec![term(n + 1, 0, -(&a1 * x)), term(n + 1, 1, a1)]
        }
        OperatorKind::SplitB(spec) => {
            let (a0, a1) = spec.resolve(n)?;
            vec![term(n + 1, 0, -a0.clone()), term(n + 1, 1, &a1 * x - a0)]
        }
        OperatorKind::Mod2 => {
            // a = 3/2, b = 2 - n, c = -n, d = 2n
            let nn = int(n as i64);
            let a = rat(3, 2);
            let b = int(2) - &nn;
            let c = -nn.clone();
            let xp1 = &one + x;
            let lead = &a + &b * x + &c * x * x;
            let mid = int(2) * &nn * x * &xp1;
            let trail = &a - &b * &xp1 + &c * &xp1 * &xp1;
            vec![term(n + 2, 0, lead), term(n + 2, 1, mid), term(n + 2, 2, trail)]
        }
    })
}

/// Exact `Operator(t^j; x)`.
pub fn exact_moment(kind: &OperatorKind, n: u64, x: &BigRat, j: usize) -> Result<BigRat> {
    if j > MAX_MOMENT {
        return Err(Error::OutOfRange(format!("moment order {j} exceeds {MAX_MOMENT}")));
    }
    check_point(x)?;
    if let OperatorKind::Baskakov = kind {
        let q = PowerSumQuery { m: n, shift: 0, power: j, x: x.clone() };
        let scale = num_traits::pow(BigInt::from(n), j);
        return Ok(power_sum(&q)? / BigRat::from_integer(scale));
    }
    if n <= j as u64 + 1 {
        return Err(Error::DivergentMoment { n, degree: j });
    }
    let kernel = kernel_polynomial(j);
    let denom: BigInt = (2..=j as u64 + 1).map(|i| BigInt::from(n - i)).product();
    let mut total = BigRat::zero();
    for term in weight_terms(kind, n, x)? {
        let mut contracted = BigRat::zero();
        for (s, c) in kernel.iter().enumerate() {
            let q = PowerSumQuery { m: term.m, shift: term.shift, power: s, x: x.clone() };
            contracted += BigRat::from_integer(c.clone()) * power_sum(&q)?;
        }
        total += term.coeff * contracted;
    }
    Ok(total / BigRat::from_integer(denom))
}

/// Exact central moment `Operator((t - x)^order; x)` by binomial expansion.
pub fn exact_central_moment(kind: &OperatorKind, n: u64, x: &BigRat, order: usize) -> Result<BigRat> {
    let mut total = BigRat::zero();
    let minus_x = -x.clone();
    for i in 0..=order {
        let coeff = BigRat::from_integer(binomial(order, i)) * num_traits::pow(minus_x.clone(), order - i);
        total += coeff * exact_moment(kind, n, x, i)?;
    }
    Ok(total)
}
