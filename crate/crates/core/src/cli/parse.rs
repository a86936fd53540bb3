//! Text parsers for flag values.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::analysis::Interval;
use crate::error::{Error, Result};
use crate::exact::BigRat;
use crate::operators::RationalFn;

fn parse_int(token: &str) -> Result<BigInt> {
    token.trim().parse::<BigInt>().map_err(|_| Error::Parse(token.to_string()))
}

/// `INT`, `INT/INT`, or a plain decimal such as `0.25` (read exactly).
pub fn parse_rational(text: &str) -> Result<BigRat> {
    let t = text.trim();
    if let Some((p, q)) = t.split_once('/') {
        let q = parse_int(q)?;
        if q.is_zero() {
            return Err(Error::Parse(text.to_string()));
        }
        return Ok(BigRat::new(parse_int(p)?, q));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        if frac.is_empty() || !frac.bytes().all(|b| b.is_ascii_digit()) {
            return Err(Error::Parse(text.to_string()));
        }
        let negative = whole.starts_with('-');
        let whole = if whole.is_empty() || whole == "-" || whole == "+" { BigInt::zero() } else { parse_int(whole)? };
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let frac = BigRat::new(parse_int(frac)?, scale);
        let whole = BigRat::from_integer(whole);
        return Ok(if negative { whole - frac } else { whole + frac });
    }
    Ok(BigRat::from_integer(parse_int(t)?))
}

/// `INT`, `INT/INT` or `ratfn:p0,p1/q0,q1` for `(p0 + p1 n)/(q0 + q1 n)`.
pub fn parse_sequence(expr: &str) -> Result<RationalFn> {
    let Some(body) = expr.trim().strip_prefix("ratfn:") else {
        let value = parse_rational(expr)?;
        if expr.contains('.') {
            return Err(Error::Parse(expr.to_string()));
        }
        return Ok(RationalFn::constant(value));
    };
    let (num, den) = body.split_once('/').ok_or_else(|| Error::Parse(expr.to_string()))?;
    let pair = |part: &str| -> Result<(BigRat, BigRat)> {
        let (a, b) = part.split_once(',').ok_or_else(|| Error::Parse(part.to_string()))?;
        Ok((BigRat::from_integer(parse_int(a)?), BigRat::from_integer(parse_int(b)?)))
    };
    let (p0, p1) = pair(num)?;
    let (q0, q1) = pair(den)?;
    RationalFn::new(p0, p1, q0, q1)
}

/// Comma-separated positive integers.
pub fn parse_n_list(text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|tok| match tok.trim().parse::<u64>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::Parse(tok.to_string())),
        })
        .collect()
}

/// `a:b`.
pub fn parse_interval(text: &str) -> Result<Interval> {
    let (a, b) = text.split_once(':').ok_or_else(|| Error::Parse(text.to_string()))?;
    let a: f64 = a.trim().parse().map_err(|_| Error::Parse(a.to_string()))?;
    let b: f64 = b.trim().parse().map_err(|_| Error::Parse(b.to_string()))?;
    Interval::new(a, b)
}
