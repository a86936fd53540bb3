//! Closed-form moment formulas of the modified operators, transcribed as
//! tables and evaluated in exact arithmetic.
//!
//! Every formula has the shape
//! `sum(outside) + sum(inside) / prod_i (n - d_i)` where each term is
//! `s(a0, a1) * P(n) * prod Q_l(x)` with small integer polynomials `P`, `Q_l`.
//! Keeping one table row per printed monomial makes transcription slips show
//! up as localized mismatches against the oracle in [`crate::exact`].

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{exact_central_moment, exact_moment, format_rat, int, BigRat};
use crate::operators::{OperatorKind, SequenceSpec};

/// Sequence factor of a term.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Seq {
    Unit,
    A0,
    A1,
    A1Sq,
}

#[derive(Debug)]
struct Term {
    seq: Seq,
    /// Ascending coefficients of a polynomial in `n`.
    n: &'static [i64],
    /// Product of polynomials in `x`, each with ascending coefficients.
    x: &'static [&'static [i64]],
}

#[derive(Debug)]
struct Formula {
    outside: &'static [Term],
    /// Offsets `d` of the denominator factors `(n - d)`.
    denom: &'static [i64],
    inside: &'static [Term],
}

const fn t(seq: Seq, n: &'static [i64], x: &'static [&'static [i64]]) -> Term {
    Term { seq, n, x }
}

use Seq::{A0, A1, A1Sq, Unit};

const X1: &[i64] = &[0, 1];
const X2: &[i64] = &[0, 0, 1];
const X3: &[i64] = &[0, 0, 0, 1];
const X4: &[i64] = &[0, 0, 0, 0, 1];
const X5: &[i64] = &[0, 0, 0, 0, 0, 1];
const X6: &[i64] = &[0, 0, 0, 0, 0, 0, 1];
const ONE_MINUS_X: &[i64] = &[1, -1];

const NONE: &[Term] = &[];

const MOD1_MOMENTS: [Formula; 5] = [
    Formula { outside: &[t(A0, &[2], &[]), t(A1, &[-1], &[])], denom: &[], inside: NONE },
    Formula {
        outside: &[t(A0, &[2], &[X1]), t(A1, &[-1], &[X1])],
        denom: &[2],
        inside: &[t(A0, &[3], &[&[1, 2]]), t(A1, &[-2], &[&[1, 2]])],
    },
    Formula {
        outside: &[t(A0, &[2], &[X2]), t(A1, &[-1], &[X2])],
        denom: &[2, 3],
        inside: &[
            t(A0, &[1], &[&[8, 10, -8]]),
            t(A1, &[1], &[&[-6, -10, 2]]),
            t(A0, &[0, 1], &[&[0, 10, 16]]),
            t(A1, &[0, -1], &[&[0, 6, 10]]),
        ],
    },
    Formula {
        outside: &[t(A0, &[2], &[X3]), t(A1, &[-1], &[X3])],
        denom: &[2, 3, 4],
        inside: &[
            t(A0, &[1], &[&[30, 54, 42, 60]]),
            t(A1, &[1], &[&[-24, -54, -42, -36]]),
            t(A0, &[0, 1], &[&[0, 54, 63, -30]]),
            t(A1, &[0, 1], &[&[0, -36, -54, 6]]),
            t(A0, &[0, 0, 1], &[&[0, 0, 21, 30]]),
            t(A1, &[0, 0, 1], &[&[0, 0, -12, -18]]),
        ],
    },
    Formula {
        outside: &[t(A0, &[2], &[X4]), t(A1, &[-1], &[X4])],
        denom: &[2, 3, 4, 5],
        inside: &[
            t(A0, &[1], &[&[144, 336, 382, 216, -192]]),
            t(A1, &[1], &[&[-120, -336, -382, -214, 72]]),
            t(A0, &[0, 1], &[&[0, 336, 573, 396, 408]]),
            t(A1, &[0, 1], &[&[0, -240, -501, -361, -248]]),
            t(A0, &[0, 0, 1], &[&[0, 0, 191, 216, -72]]),
            t(A1, &[0, 0, 1], &[&[0, 0, -119, -167, 12]]),
            t(A0, &[0, 0, 0, 1], &[&[0, 0, 0, 36, 48]]),
            t(A1, &[0, 0, 0, 1], &[&[0, 0, 0, -20, -28]]),
        ],
    },
];

const MOD1_CENTRAL_1: Formula = Formula {
    outside: NONE,
    denom: &[2],
    inside: &[t(A0, &[3], &[&[1, 2]]), t(A1, &[-2], &[&[1, 2]])],
};

const MOD1_CENTRAL_2: Formula = Formula {
    outside: NONE,
    denom: &[2, 3],
    inside: &[
        t(A0, &[1], &[&[-1, -8, -8]]),
        t(A1, &[1], &[&[0, 2], &[1, 1]]),
        t(A0, &[0, 1], &[&[3, 16, 16]]),
        t(A1, &[0, 1], &[&[-2, -10, -10]]),
    ],
};

const MOD1_CENTRAL_4: Formula = Formula {
    outside: NONE,
    denom: &[2, 3, 4, 5],
    inside: &[
        t(A0, &[1], &[&[144, 936, 2422, 2976, 1488]]),
        t(A1, &[1], &[&[-120, -816, -2182, -2734, -1368]]),
        t(A0, &[0, 1], &[&[0, 216, 1005, 1584, 792]]),
        t(A1, &[0, 1], &[&[0, -144, -681, -1077, -540]]),
        t(A0, &[0, 0, 1], &[&[0, 0, 23, 48, 24]]),
        t(A1, &[0, 0, 1], &[&[0, 0, -11, -23, -12]]),
    ],
};

// The t^5 line is printed without a sign before its x^4 group; it is read as `+`.
const MOD2_MOMENTS: [Formula; 7] = [
    Formula { outside: &[t(Unit, &[1], &[])], denom: &[], inside: NONE },
    Formula { outside: &[t(Unit, &[1], &[X1])], denom: &[], inside: NONE },
    Formula {
        outside: &[t(Unit, &[1], &[X2])],
        denom: &[2, 3],
        inside: &[t(Unit, &[1], &[&[-3, -16, -16]])],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4],
        inside: &[
            t(Unit, &[-48, -46, -9, 1], &[X3]),
            t(Unit, &[-132, -84], &[X2]),
            t(Unit, &[-114, -21], &[X1]),
            t(Unit, &[-21], &[]),
        ],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4, 5],
        inside: &[
            t(Unit, &[-264, -334, -133, -14, 1], &[X4]),
            t(Unit, &[-1008, -1032, -264], &[X3]),
            t(Unit, &[-1428, -1014, -78], &[X2]),
            t(Unit, &[-864, -240], &[X1]),
            t(Unit, &[-144], &[]),
        ],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4, 5, 6],
        inside: &[
            t(Unit, &[-1680, -2516, -1360, -305, -20, 1], &[X5]),
            t(Unit, &[-8160, -10640, -4560, -640], &[X4]),
            t(Unit, &[-15840, -16860, -4890, -210], &[X3]),
            t(Unit, &[-15300, -11550, -1350], &[X2]),
            t(Unit, &[-7200, -2400], &[X1]),
            t(Unit, &[-1080], &[]),
        ],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4, 5, 6, 7],
        inside: &[
            t(Unit, &[-12240, -20628, -13436, -4185, -605, -27, 1], &[X6]),
            t(Unit, &[-72000, -109680, -61320, -14880, -1320], &[X5]),
            t(Unit, &[-176760, -235050, -105375, -16950, -465], &[X4]),
            t(Unit, &[-231840, -252960, -78840, -5160], &[X3]),
            t(Unit, &[-171000, -134100, -18900], &[X2]),
            t(Unit, &[-66240, -24480], &[X1]),
            t(Unit, &[-9000], &[]),
        ],
    },
];

// Order 6 has a blank fourth denominator factor, read as (n - 5) by pattern,
// and no sign before its n^2 group, read as `+`.
const MOD2_CENTRAL: [Formula; 6] = [
    Formula { outside: NONE, denom: &[], inside: NONE },
    Formula { outside: NONE, denom: &[2, 3], inside: &[t(Unit, &[1], &[&[-3, -16, -16]])] },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4],
        inside: &[
            t(Unit, &[0, 1], &[&[0, -12, -36, -24]]),
            t(Unit, &[1], &[&[-21, -150, -324, -216]]),
        ],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4, 5],
        inside: &[
            t(Unit, &[0, 0, 1], &[&[0, 0, -12, -24, -12]]),
            t(Unit, &[0, 1], &[&[0, -156, -816, -1320, -660]]),
            t(Unit, &[1], &[&[-144, -1284, -4068, -5568, -2784]]),
        ],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4, 5, 6],
        inside: &[
            t(Unit, &[0, 0, 1], &[&[0, 0, -360, -1440, -1800, -720]]),
            t(Unit, &[0, 1], &[&[0, -1680, -12120, -31680, -35400, -14160]]),
            t(Unit, &[1], &[&[-1080, -11520, -47520, -96480, -97200, -38880]]),
        ],
    },
    Formula {
        outside: NONE,
        denom: &[2, 3, 4, 5, 6, 7],
        inside: &[
            t(Unit, &[0, 0, 0, 1], &[&[0, 0, 0, -240, -720, -720, -240]]),
            t(Unit, &[0, 0, 1], &[&[0, 0, -6660, -39960, -86580, -79920, -26640]]),
            t(Unit, &[0, 1], &[&[0, -18000, -163620, -584040, -1024020, -878400, -292800]]),
            t(Unit, &[1], &[&[-9000, -111600, -564120, -1506960, -2258280, -1805760, -601920]]),
        ],
    },
];

// A(t^2) carries an `a1 (2 a1 n + 6 a1)` group inside the `a1 (1 - x)` factor,
// which makes it quadratic in a1; it is kept as printed.
const SPLIT_A: [Formula; 3] = [
    Formula { outside: &[t(A1, &[1], &[ONE_MINUS_X])], denom: &[], inside: NONE },
    Formula {
        outside: &[t(A1, &[1], &[ONE_MINUS_X, X1])],
        denom: &[2],
        inside: &[t(A1, &[1], &[ONE_MINUS_X, &[1, 3]]), t(A1, &[1], &[])],
    },
    Formula {
        outside: &[t(A1, &[1], &[ONE_MINUS_X, X2])],
        denom: &[2, 3],
        inside: &[
            t(A1, &[-4, 8], &[ONE_MINUS_X, X2]),
            t(A1, &[4, 4], &[ONE_MINUS_X, X1]),
            t(A1Sq, &[6, 2], &[ONE_MINUS_X]),
        ],
    },
];

// The `(a1 x - 2 a0)` prefactor is split into its a1 and a0 parts.
const SPLIT_B: [Formula; 3] = [
    Formula { outside: &[t(A1, &[1], &[X1]), t(A0, &[-2], &[])], denom: &[], inside: NONE },
    Formula {
        outside: &[t(A1, &[1], &[X1, X1]), t(A0, &[-2], &[X1])],
        denom: &[2],
        inside: &[
            t(A1, &[1], &[X1, &[0, 3]]),
            t(A0, &[-2], &[&[0, 3]]),
            t(A1, &[2], &[X1]),
            t(A0, &[-3], &[]),
        ],
    },
    Formula {
        outside: &[t(A1, &[1], &[X1, X2]), t(A0, &[-2], &[X2])],
        denom: &[2, 3],
        inside: &[
            t(A1, &[-4, 8], &[X1, X2]),
            t(A0, &[8, -16], &[X2]),
            t(A1, &[0, 6], &[X1]),
            t(A0, &[0, -10], &[X1]),
            t(A1, &[9], &[]),
            t(A0, &[-10], &[X1]),
            t(A1, &[3], &[]),
            t(A0, &[-8], &[]),
        ],
    },
];

fn poly(coeffs: &[i64], at: &BigRat) -> BigRat {
    coeffs.iter().rev().fold(BigRat::zero(), |acc, &c| acc * at + int(c))
}

impl Formula {
    fn eval(&self, n: u64, x: &BigRat, a0: &BigRat, a1: &BigRat) -> Result<BigRat> {
        let nn = int(n as i64);
        let term = |t: &Term| {
            let s = match t.seq {
                Unit => BigRat::one(),
                A0 => a0.clone(),
                A1 => a1.clone(),
                A1Sq => a1 * a1,
            };
            t.x.iter().fold(s * poly(t.n, &nn), |acc, q| acc * poly(q, x))
        };
        let outside: BigRat = self.outside.iter().map(term).sum();
        if self.inside.is_empty() {
            return Ok(outside);
        }
        let mut denom = BigRat::one();
        for &d in self.denom {
            if n as i64 <= d {
                return Err(Error::Domain(format!("formula needs n > {d}, got {n}")));
            }
            denom *= int(n as i64 - d);
        }
        let inside: BigRat = self.inside.iter().map(term).sum();
        Ok(outside + inside / denom)
    }
}

fn check_x(x: &BigRat) -> Result<()> {
    if x.is_negative() {
        return Err(Error::Domain(format!("x must be >= 0, got {}", format_rat(x))));
    }
    Ok(())
}

fn out_of_range(what: &str, j: usize) -> Error {
    Error::OutOfRange(format!("no closed-form {what} of degree {j}"))
}

/// First-order modified operator on `t^j`, `j <= 4`.
pub fn mod1_moment_paper(spec: &SequenceSpec, n: u64, x: &BigRat, j: usize) -> Result<BigRat> {
    check_x(x)?;
    let formula = MOD1_MOMENTS.get(j).ok_or_else(|| out_of_range("moment", j))?;
    let (a0, a1) = spec.resolve(n)?;
    formula.eval(n, x, &a0, &a1)
}

/// First-order modified operator on `(t - x)^order` for orders 1, 2 and 4.
pub fn mod1_central_paper(spec: &SequenceSpec, n: u64, x: &BigRat, order: usize) -> Result<BigRat> {
    check_x(x)?;
    let formula = match order {
        1 => &MOD1_CENTRAL_1,
        2 => &MOD1_CENTRAL_2,
        4 => &MOD1_CENTRAL_4,
        _ => return Err(out_of_range("central moment", order)),
    };
    let (a0, a1) = spec.resolve(n)?;
    formula.eval(n, x, &a0, &a1)
}

/// Limits of `n` times the first, second and fourth central moments, for
/// sequence limits `l = lim a0`, `m = lim a1`.
pub fn corollary_limits(l: f64, m: f64, x: f64) -> (f64, f64, f64) {
    let lim1 = (1.0 + 2.0 * x) * (3.0 * l - 2.0 * m);
    let lim2 = l * (3.0 + 16.0 * x + 16.0 * x * x) - m * (2.0 + 10.0 * x + 10.0 * x * x);
    let x2 = x * x;
    let lim4 = l * x2 * (23.0 + 48.0 * x + 24.0 * x2) - m * x2 * (11.0 + 23.0 * x + 12.0 * x2);
    (lim1, lim2, lim4)
}

/// Second-order modified operator on `t^j`, `j <= 6`.
pub fn mod2_moment_paper(n: u64, x: &BigRat, j: usize) -> Result<BigRat> {
    check_x(x)?;
    let formula = MOD2_MOMENTS.get(j).ok_or_else(|| out_of_range("moment", j))?;
    formula.eval(n, x, &BigRat::zero(), &BigRat::zero())
}

/// Second-order modified operator on `(t - x)^order`, `1 <= order <= 6`.
pub fn mod2_central_paper(n: u64, x: &BigRat, order: usize) -> Result<BigRat> {
    check_x(x)?;
    let formula = order
        .checked_sub(1)
        .and_then(|i| MOD2_CENTRAL.get(i))
        .ok_or_else(|| out_of_range("central moment", order))?;
    formula.eval(n, x, &BigRat::zero(), &BigRat::zero())
}

/// Coefficients `c_i` of `sum_i c_i (n+1)(n+2)...(n+i) x^i` for the printed
/// sums `sum_k p_{n+1,k-r}(x) k^s`, indexed `[r][s - 1]`.
const POWER_SUMS: [[&[i64]; 4]; 2] = [
    [&[0, 1], &[0, 1, 1], &[0, 1, 3, 1], &[0, 1, 7, 6, 1]],
    [&[1, 1], &[1, 3, 1], &[1, 7, 6, 1], &[1, 15, 24, 10, 1]],
];

/// Printed closed form of `sum_k p_{n+1,k-r}(x) k^s` for `r <= 1`, `1 <= s <= 4`.
pub fn power_sum_paper(n: u64, shift: u64, s: usize, x: &BigRat) -> Result<BigRat> {
    check_x(x)?;
    let coeffs = POWER_SUMS
        .get(shift as usize)
        .and_then(|row| s.checked_sub(1).and_then(|i| row.get(i)))
        .ok_or_else(|| Error::OutOfRange(format!("no closed-form power sum for shift {shift}, power {s}")))?;
    let mut rising = BigRat::one();
    let mut power = BigRat::one();
    let mut total = BigRat::zero();
    for (i, &c) in coeffs.iter().enumerate() {
        if i > 0 {
            rising *= int((n + i as u64) as i64);
            power *= x;
        }
        total += int(c) * &rising * &power;
    }
    Ok(total)
}

/// Which half of the first-order decomposition `V = -A - B`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitPart {
    A,
    B,
}

/// `A(t^j)` or `B(t^j)` for `j <= 2`.
pub fn split_moments_paper(
    spec: &SequenceSpec,
    n: u64,
    x: &BigRat,
    j: usize,
    which: SplitPart,
) -> Result<BigRat> {
    check_x(x)?;
    let table = match which {
        SplitPart::A => &SPLIT_A,
        SplitPart::B => &SPLIT_B,
    };
    let formula = table.get(j).ok_or_else(|| out_of_range("split moment", j))?;
    let (a0, a1) = spec.resolve(n)?;
    formula.eval(n, x, &a0, &a1)
}

/// Sign pattern of the sequences at a fixed `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositivityCase {
    Case1,
    Case2,
    Case3,
    Case4,
    Case5,
    Case6,
    Case7,
    /// `2 a0 - a1 != 1`.
    Violates,
}

impl PositivityCase {
    /// Positivity as asserted for the case; `None` when no claim is made.
    pub fn paper_claims_positive(self) -> Option<bool> {
        use PositivityCase::*;
        match self {
            Case1 | Case2 | Case3 | Case4 => Some(true),
            Case5 | Case6 => Some(false),
            Case7 | Violates => None,
        }
    }
}

impl fmt::Display for PositivityCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use PositivityCase::*;
        let s = match self {
            Case1 => "case1",
            Case2 => "case2",
            Case3 => "case3",
            Case4 => "case4",
            Case5 => "case5",
            Case6 => "case6",
            Case7 => "case7",
            Violates => "violates",
        };
        f.write_str(s)
    }
}

/// Case of `(a0(n), a1(n))`, tested with equalities first and then the
/// open ranges.
pub fn classify_case(spec: &SequenceSpec, n: u64) -> Result<PositivityCase> {
    let (a0, a1) = spec.resolve(n)?;
    let one = BigRat::one();
    if int(2) * &a0 - &a1 != one {
        return Ok(PositivityCase::Violates);
    }
    let minus_one = -one.clone();
    let case = if a0 == one {
        PositivityCase::Case1
    } else if a1.is_zero() {
        PositivityCase::Case2
    } else if a1 > one {
        PositivityCase::Case3
    } else if a1 > BigRat::zero() {
        PositivityCase::Case4
    } else if a1 == minus_one {
        PositivityCase::Case5
    } else if a1 < minus_one {
        PositivityCase::Case6
    } else {
        PositivityCase::Case7
    };
    Ok(case)
}

/// One constant-sequence representative per case, in case order.
pub fn case_exemplars() -> Vec<(PositivityCase, SequenceSpec)> {
    use crate::exact::rat;
    use PositivityCase::*;
    let table = [
        (Case1, (1, 1), (1, 1)),
        (Case2, (1, 2), (0, 1)),
        (Case3, (2, 1), (3, 1)),
        (Case4, (3, 4), (1, 2)),
        (Case5, (0, 1), (-1, 1)),
        (Case6, (-1, 2), (-2, 1)),
        (Case7, (1, 4), (-1, 2)),
    ];
    table
        .into_iter()
        .map(|(case, a0, a1)| {
            let spec = SequenceSpec::constant(rat(a0.0, a0.1), rat(a1.0, a1.1))
                .expect("exemplars satisfy the normalization");
            (case, spec)
        })
        .collect()
}

/// One printed formula set against the exact oracle.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentComparison {
    pub kind: String,
    pub n: u64,
    pub x: BigRat,
    pub j: usize,
    pub central: bool,
    pub paper_value: BigRat,
    pub oracle_value: BigRat,
    pub matches: bool,
    /// `paper_value - oracle_value`.
    pub discrepancy: BigRat,
}

impl MomentComparison {
    fn new(kind: &OperatorKind, n: u64, x: &BigRat, j: usize, central: bool, paper: BigRat, oracle: BigRat) -> Self {
        let discrepancy = &paper - &oracle;
        Self {
            kind: kind.label().to_string(),
            n,
            x: x.clone(),
            j,
            central,
            matches: discrepancy.is_zero(),
            paper_value: paper,
            oracle_value: oracle,
            discrepancy,
        }
    }
}

/// Degrees with a printed formula for `kind`.
pub fn paper_degrees(kind: &OperatorKind, central: bool) -> Vec<usize> {
    match (kind, central) {
        (OperatorKind::Mod1(_) | OperatorKind::BaskakovDurrmeyer, false) => (0..=4).collect(),
        (OperatorKind::Mod1(_) | OperatorKind::BaskakovDurrmeyer, true) => vec![1, 2, 4],
        (OperatorKind::Mod2, false) => (0..=6).collect(),
        (OperatorKind::Mod2, true) => (1..=6).collect(),
        (OperatorKind::SplitA(_) | OperatorKind::SplitB(_), false) => (0..=2).collect(),
        _ => Vec::new(),
    }
}

/// Printed value for `kind` at degree `j`. The Durrmeyer operator is the
/// first-order family with `a0 = a1 = 1`.
pub fn paper_value(kind: &OperatorKind, n: u64, x: &BigRat, j: usize, central: bool) -> Result<BigRat> {
    match (kind, central) {
        (OperatorKind::BaskakovDurrmeyer, false) => mod1_moment_paper(&SequenceSpec::classical(), n, x, j),
        (OperatorKind::BaskakovDurrmeyer, true) => mod1_central_paper(&SequenceSpec::classical(), n, x, j),
        (OperatorKind::Mod1(s), false) => mod1_moment_paper(s, n, x, j),
        (OperatorKind::Mod1(s), true) => mod1_central_paper(s, n, x, j),
        (OperatorKind::Mod2, false) => mod2_moment_paper(n, x, j),
        (OperatorKind::Mod2, true) => mod2_central_paper(n, x, j),
        (OperatorKind::SplitA(s), false) => split_moments_paper(s, n, x, j, SplitPart::A),
        (OperatorKind::SplitB(s), false) => split_moments_paper(s, n, x, j, SplitPart::B),
        _ => Err(Error::OutOfRange(format!(
            "no closed-form {} for {}",
            if central { "central moments" } else { "moments" },
            kind.label()
        ))),
    }
}

/// Printed value against oracle for every printed degree `<= max_degree`.
pub fn compare_moments(
    kind: &OperatorKind,
    n: u64,
    x: &BigRat,
    max_degree: usize,
    central: bool,
) -> Result<Vec<MomentComparison>> {
    paper_degrees(kind, central)
        .into_iter()
        .filter(|&j| j <= max_degree)
        .map(|j| {
            let paper = paper_value(kind, n, x, j, central)?;
            let oracle = if central {
                exact_central_moment(kind, n, x, j)?
            } else {
                exact_moment(kind, n, x, j)?
            };
            Ok(MomentComparison::new(kind, n, x, j, central, paper, oracle))
        })
        .collect()
}
