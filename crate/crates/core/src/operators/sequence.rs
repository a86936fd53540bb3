use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{format_rat, to_f64, BigRat};

/// `(p0 + p1 n) / (q0 + q1 n)` with rational coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    pub p0: BigRat,
    pub p1: BigRat,
    pub q0: BigRat,
    pub q1: BigRat,
}

impl RationalFn {
    pub fn new(p0: BigRat, p1: BigRat, q0: BigRat, q1: BigRat) -> Result<Self> {
        let f = Self { p0, p1, q0, q1 };
        if f.q0.is_zero() && f.q1.is_zero() {
            return Err(Error::UnsupportedSequence(format!("{f}: denominator is identically zero")));
        }
        if !f.q1.is_zero() {
            let root = -(&f.q0) / &f.q1;
            if root.is_integer() && root >= BigRat::from_integer(BigInt::from(4)) {
                return Err(Error::UnsupportedSequence(format!("{f}: denominator vanishes at n = {root}")));
            }
        }
        Ok(f)
    }

    pub fn constant(c: BigRat) -> Self {
        Self { p0: c, p1: BigRat::zero(), q0: BigRat::one(), q1: BigRat::zero() }
    }

    pub fn is_constant(&self) -> bool {
        self.q1.is_zero() && self.p1.is_zero() || &self.p0 * &self.q1 == &self.p1 * &self.q0
    }

    pub fn eval(&self, n: u64) -> Result<BigRat> {
        let nn = BigRat::from_integer(BigInt::from(n));
        let den = &self.q0 + &self.q1 * &nn;
        if den.is_zero() {
            return Err(Error::UnsupportedSequence(format!("{self}: denominator vanishes at n = {n}")));
        }
        Ok((&self.p0 + &self.p1 * nn) / den)
    }

    pub fn eval_f64(&self, n: u64) -> Result<f64> {
        self.eval(n).map(|v| to_f64(&v))
    }

    /// Limit as `n -> inf`; an error if the sequence diverges.
    pub fn limit(&self) -> Result<BigRat> {
        if !self.q1.is_zero() {
            Ok(&self.p1 / &self.q1)
        } else if self.p1.is_zero() {
            Ok(&self.p0 / &self.q0)
        } else {
            Err(Error::UnsupportedSequence(format!("{self} diverges as n grows")))
        }
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.p1.is_zero() && self.q1.is_zero() && !self.q0.is_zero() {
            write!(f, "{}", format_rat(&(&self.p0 / &self.q0)))
        } else {
            write!(
                f,
                "({} + {} n)/({} + {} n)",
                format_rat(&self.p0),
                format_rat(&self.p1),
                format_rat(&self.q0),
                format_rat(&self.q1)
            )
        }
    }
}

/// The pair `a0(n), a1(n)` that shapes the first-order modified weights.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SequenceSpec {
    pub a0: RationalFn,
    pub a1: RationalFn,
}

impl SequenceSpec {
    /// Validated pair: `2 a0(n) - a1(n) = 1` must hold identically in `n`.
    pub fn new(a0: RationalFn, a1: RationalFn) -> Result<Self> {
        let spec = Self { a0, a1 };
        if !spec.satisfies_relation() {
            return Err(Error::SequenceRelation(format!("a0 = {}, a1 = {}", spec.a0, spec.a1)));
        }
        Ok(spec)
    }

    /// Pair accepted without the normalization check (exploratory use).
    pub fn unchecked(a0: RationalFn, a1: RationalFn) -> Self {
        Self { a0, a1 }
    }

    pub fn constant(a0: BigRat, a1: BigRat) -> Result<Self> {
        Self::new(RationalFn::constant(a0), RationalFn::constant(a1))
    }

    /// `a0 = a1 = 1`, which collapses to the Baskakov-Durrmeyer operator.
    pub fn classical() -> Self {
        Self::unchecked(RationalFn::constant(BigRat::one()), RationalFn::constant(BigRat::one()))
    }

    /// Checks `2 (p0 + p1 n)(s0 + s1 n) - (r0 + r1 n)(q0 + q1 n) - (q0 + q1 n)(s0 + s1 n) == 0`
    /// coefficient by coefficient, where `a0 = p/q` and `a1 = r/s`.
    pub fn satisfies_relation(&self) -> bool {
        let (p0, p1, q0, q1) = (&self.a0.p0, &self.a0.p1, &self.a0.q0, &self.a0.q1);
        let (r0, r1, s0, s1) = (&self.a1.p0, &self.a1.p1, &self.a1.q0, &self.a1.q1);
        let two = BigRat::from_integer(BigInt::from(2));
        let c0 = &two * p0 * s0 - r0 * q0 - q0 * s0;
        let c1 = &two * (p0 * s1 + p1 * s0) - (r0 * q1 + r1 * q0) - (q0 * s1 + q1 * s0);
        let c2 = &two * p1 * s1 - r1 * q1 - q1 * s1;
        c0.is_zero() && c1.is_zero() && c2.is_zero()
    }

    pub fn resolve(&self, n: u64) -> Result<(BigRat, BigRat)> {
        Ok((self.a0.eval(n)?, self.a1.eval(n)?))
    }

    pub fn resolve_f64(&self, n: u64) -> Result<(f64, f64)> {
        let (a0, a1) = self.resolve(n)?;
        Ok((to_f64(&a0), to_f64(&a1)))
    }

    /// `(l, m) = (lim a0(n), lim a1(n))`.
    pub fn limits(&self) -> Result<(BigRat, BigRat)> {
        Ok((self.a0.limit()?, self.a1.limit()?))
    }

    /// Whether `a1(n) < 0` (`a` coefficient can go negative) for this `n`.
    pub fn a1_negative(&self, n: u64) -> Result<bool> {
        Ok(self.a1.eval(n)?.is_negative())
    }
}

impl fmt::Display for SequenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a0={};a1={}", self.a0, self.a1)
    }
}
