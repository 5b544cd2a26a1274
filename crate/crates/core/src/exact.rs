//! Exact arithmetic helpers behind every inequality verdict.
//!
//! All growth inequalities the library checks reduce to comparisons of
//! integer powers of set sizes and rational parameters. These helpers do the
//! reductions in arbitrary precision (`BigInt` / `BigRational`) so a verdict
//! never depends on i128 overflow or float rounding. Floats appear only in
//! report fields.

use crate::error::{Error, Result};
use crate::Rat;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, ToPrimitive, Zero};

/// Widen a machine rational to arbitrary precision.
pub fn big(r: &Rat) -> BigRational {
    BigRational::new(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

/// Arbitrary-precision rational from an integer count.
pub fn big_int(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// `r^e` in arbitrary precision.
pub fn pow(r: &BigRational, e: u32) -> BigRational {
    BigRational::new(r.numer().pow(e), r.denom().pow(e))
}

/// Largest integer `t >= 0` with `t^n <= r`, for rational `r >= 0`
/// (the floor of the real n-th root).
pub fn floor_root(r: &BigRational, n: u32) -> BigInt {
    assert!(n >= 1 && !r.is_negative());
    // first guess from integer division, then exact fixup both ways
    let mut t = (r.numer() / r.denom()).nth_root(n);
    let fits = |t: &BigInt| pow(&BigRational::from_integer(t.clone()), n) <= *r;
    while !fits(&t) {
        t -= 1;
    }
    loop {
        let next = &t + 1;
        if fits(&next) {
            t = next;
        } else {
            break;
        }
    }
    t
}

/// Smallest integer `t >= 0` with `t^n >= r`, for rational `r >= 0`
/// (the ceiling of the real n-th root).
pub fn ceil_root(r: &BigRational, n: u32) -> BigInt {
    let t = floor_root(r, n);
    if pow(&BigRational::from_integer(t.clone()), n) == *r {
        t
    } else {
        t + 1
    }
}

/// Smallest positive multiple of `m` whose square is at least `r`.
pub fn ceil_sqrt_multiple(r: &BigRational, m: u64) -> Result<u64> {
    let m_big = BigInt::from(m);
    // smallest t with (t*m)^2 >= r
    let scaled = r / BigRational::from_integer(&m_big * &m_big);
    let t = ceil_root(&scaled, 2).max(BigInt::one());
    (&t * &m_big)
        .to_u64()
        .ok_or_else(|| Error::InvalidParameter("required modulus exceeds u64".into()))
}

/// Lossy float rendering of an exact rational, for reports only.
pub fn rat_to_f64(r: &Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub fn big_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

/// Parses an exact rational from decimal ("2", "2.5", "-0.125") or
/// fraction ("5/2") notation. Used for user-supplied parameters that feed
/// exact verdicts, where a float would make boundary cases rounding-dependent.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let s = s.trim();
    let bad = |msg: &str| Error::InvalidParameter(format!("cannot parse '{s}' as a rational: {msg}"));
    if s.is_empty() {
        return Err(bad("empty"));
    }
    if let Some((n, d)) = s.split_once('/') {
        let num: i128 = n.trim().parse().map_err(|_| bad("bad numerator"))?;
        let den: i128 = d.trim().parse().map_err(|_| bad("bad denominator"))?;
        if den == 0 {
            return Err(bad("zero denominator"));
        }
        return Ok(Rat::new(num, den));
    }
    let (sign, rest) = match s.strip_prefix('-') {
        Some(r) => (-1i128, r),
        None => (1i128, s.strip_prefix('+').unwrap_or(s)),
    };
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((i, f)) => (i, f),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(bad("no digits"));
    }
    let digits_ok = |d: &str| d.chars().all(|c| c.is_ascii_digit());
    if !digits_ok(int_part) || !digits_ok(frac_part) {
        return Err(bad("non-digit characters"));
    }
    let mut num: i128 = if int_part.is_empty() {
        0
    } else {
        int_part.parse().map_err(|_| bad("integer part too large"))?
    };
    let mut den: i128 = 1;
    for c in frac_part.chars() {
        num = num
            .checked_mul(10)
            .and_then(|n| n.checked_add((c as u8 - b'0') as i128))
            .ok_or_else(|| bad("too many digits"))?;
        den = den.checked_mul(10).ok_or_else(|| bad("too many digits"))?;
    }
    Ok(Rat::new(sign * num, den))
}

/// Exact rational as serialized in machine-readable reports.
#[derive(Clone, Debug, serde::Serialize)]
pub struct RatRepr {
    pub num: i64,
    pub den: i64,
    pub float: f64,
}

impl RatRepr {
    pub fn of(r: &Rat) -> Self {
        let num = i64::try_from(*r.numer()).expect("report rational numerator exceeds i64");
        let den = i64::try_from(*r.denom()).expect("report rational denominator exceeds i64");
        RatRepr { num, den, float: rat_to_f64(r) }
    }

    /// Same view for a big rational; report-scale values always fit i64.
    pub fn of_big(r: &BigRational) -> Self {
        let num = r.numer().to_i64().expect("report rational numerator exceeds i64");
        let den = r.denom().to_i64().expect("report rational denominator exceeds i64");
        RatRepr { num, den, float: big_to_f64(r) }
    }
}

/// True when `r` is zero.
pub fn is_zero_big(r: &BigRational) -> bool {
    r.is_zero()
}
