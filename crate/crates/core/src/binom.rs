//! Generalized binomial coefficients and their inverses.
//!
//! `binom(x, k)` is the falling-factorial form `x(x-1)...(x-k+1)/k!`, defined
//! for any scalar `x`. It is generic over the scalar so the same formula
//! serves exact rationals (verdict paths) and floats (reports and the
//! numeric inverse).

use crate::error::{Error, Result};
use num::traits::{FromPrimitive, Num};

/// `x (x-1) ... (x-k+1) / k!` for any scalar supporting ring ops.
///
/// For integer `x` with `0 <= x < k` some factor vanishes, so the result is
/// exactly zero, matching the combinatorial convention.
pub fn binom<T>(x: T, k: u32) -> T
where
    T: Clone + Num + FromPrimitive,
{
    let mut prod = T::one();
    for i in 0..k {
        prod = prod * (x.clone() - T::from_u32(i).unwrap());
    }
    let mut fact = T::one();
    for i in 1..=k {
        fact = fact * T::from_u32(i).unwrap();
    }
    prod / fact
}

/// Exact integer binomial `C(n, k)`, `None` on negative `n` or i128 overflow.
pub fn binom_i128(n: i128, k: u32) -> Option<i128> {
    if n < 0 {
        return None;
    }
    if (k as i128) > n {
        return Some(0);
    }
    // res after step i equals C(n-k+i, i), so every division is exact
    let mut res: i128 = 1;
    for i in 1..=k as i128 {
        res = res.checked_mul(n - k as i128 + i)? / i;
    }
    Some(res)
}

/// Solves `binom(x + h - 1, h) = r` for real `x >= 1` by bisection, to
/// relative accuracy 1e-12. Requires `r >= 1` and `h >= 1`.
pub fn invert_binom(r: f64, h: u32) -> Result<f64> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be >= 1".into()));
    }
    if !r.is_finite() || r < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "invert_binom needs r >= 1, got {r}"
        )));
    }
    let g = |x: f64| binom(x + h as f64 - 1.0, h);
    // g(1) = 1 <= r; double until the bracket contains r
    let mut lo = 1.0f64;
    let mut hi = 2.0f64;
    while g(hi) < r {
        hi *= 2.0;
        if hi > 1e200 {
            return Err(Error::InvalidParameter("invert_binom target too large".into()));
        }
    }
    for _ in 0..200 {
        if (hi - lo) <= 1e-12 * lo.max(1.0) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if g(mid) < r {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Exact inverse on integers: the `x >= 1` with `C(x + h - 1, h) = n`,
/// if one exists.
pub fn invert_binom_exact(n: u64, h: u32) -> Option<u64> {
    if h == 0 || n == 0 {
        return None;
    }
    let val = |x: u64| binom_i128(x as i128 + h as i128 - 1, h);
    let (mut lo, mut hi) = (1u64, 2u64);
    // treat overflow as "larger than n"
    while val(hi).is_some_and(|v| v < n as i128) {
        lo = hi;
        hi = hi.checked_mul(2)?;
    }
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        match val(mid) {
            Some(v) if v < n as i128 => lo = mid + 1,
            _ => hi = mid,
        }
    }
    (val(lo) == Some(n as i128)).then_some(lo)
}
