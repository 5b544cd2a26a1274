//! Exact verdicts for the classical sumset growth inequalities.
//!
//! Every check is decided in exact integer arithmetic after clearing roots
//! and denominators; the float `bound` and `slack` fields are for display
//! only. The one genuinely real-valued bound (the simplex bound at a
//! non-integral inversion point) is evaluated in floats with a 1e-9 relative
//! tolerance granted in favor of the bound.

use crate::binom::{binom, binom_i128, invert_binom, invert_binom_exact};
use crate::error::{Error, Result};
use crate::exact;
use crate::set::{profile, PointSet, SumsetProfile};
use num::bigint::BigInt;

/// Relative tolerance for the float fallback path of real-valued bounds.
pub const REAL_BOUND_REL_TOL: f64 = 1e-9;

/// A bound value: exact when the check ran on the integer path.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(tag = "kind", content = "value")]
pub enum BoundValue {
    Exact(i128),
    Real(f64),
}

impl BoundValue {
    pub fn as_f64(&self) -> f64 {
        match *self {
            BoundValue::Exact(v) => v as f64,
            BoundValue::Real(v) => v,
        }
    }
}

/// One inequality verdict.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundCheck {
    /// Which inequality, e.g. `doubling_power_h3`.
    pub name: String,
    /// The size being bounded.
    pub measured: u64,
    pub bound: BoundValue,
    pub holds: bool,
    /// `(bound - measured) / bound`, display only.
    pub slack: f64,
}

impl BoundCheck {
    fn new(name: String, measured: u64, bound: BoundValue, holds: bool) -> Self {
        let b = bound.as_f64();
        let slack = if b > 0.0 { (b - measured as f64) / b } else { 0.0 };
        BoundCheck { name, measured, bound, holds, slack }
    }
}

/// All inequality verdicts for one set.
#[derive(Clone, Debug, serde::Serialize)]
pub struct BoundReport {
    /// `|A|, |2A|, ..., |HA|`.
    pub sizes: Vec<u64>,
    /// Real inversion point: `binom(x+1, 2) = |2A|`.
    pub x: f64,
    /// Integer inversion point when `|2A|` is exactly binomial.
    pub x_exact: Option<u64>,
    pub checks: Vec<BoundCheck>,
    pub all_hold: bool,
}

fn big(n: u64) -> BigInt {
    BigInt::from(n)
}

/// `|hA| <= K^h |A|`, i.e. `|hA| |A|^{h-1} <= |2A|^h`, decided exactly.
fn doubling_power_check(sizes: &[u64], h: u32) -> BoundCheck {
    let a = sizes[0];
    let two = sizes[1];
    let ha = sizes[h as usize - 1];
    let holds = big(ha) * big(a).pow(h - 1) <= big(two).pow(h);
    let k = two as f64 / a as f64;
    BoundCheck::new(
        format!("doubling_power_h{h}"),
        ha,
        BoundValue::Real(k.powi(h as i32) * a as f64),
        holds,
    )
}

/// `|(h+1)A| <= |hA|^{(h+1)/h}`, i.e. `|(h+1)A|^h <= |hA|^{h+1}`, exact.
fn step_power_check(sizes: &[u64], h: u32) -> BoundCheck {
    let ha = sizes[h as usize - 1];
    let next = sizes[h as usize];
    let holds = big(next).pow(h) <= big(ha).pow(h + 1);
    BoundCheck::new(
        format!("step_power_h{h}"),
        next,
        BoundValue::Real((ha as f64).powf((h as f64 + 1.0) / h as f64)),
        holds,
    )
}

/// Simplex step: with `x` solving `binom(x+h-1, h) = |hA|`, checks
/// `|(h+1)A| <= binom(x+h, h+1)`. Integer path when `x` is integral.
fn simplex_step_check(sizes: &[u64], h: u32) -> BoundCheck {
    let ha = sizes[h as usize - 1];
    let next = sizes[h as usize];
    let name = format!("simplex_step_h{h}");
    if let Some(j) = invert_binom_exact(ha, h) {
        // x = j is exact; the bound is an exact integer
        let bound = binom_i128(j as i128 + h as i128, h + 1)
            .expect("simplex bound fits i128 at realizable sizes");
        return BoundCheck::new(name, next, BoundValue::Exact(bound), (next as i128) <= bound);
    }
    let x = invert_binom(ha as f64, h).expect("sizes are >= 1");
    let bound = binom(x + h as f64, h + 1);
    let holds = (next as f64) <= bound * (1.0 + REAL_BOUND_REL_TOL);
    BoundCheck::new(name, next, BoundValue::Real(bound), holds)
}

/// Refined pair bound `|3A| <= (sqrt(2)/3)|2A|^{3/2} + 2|2A|`, exact.
fn refined_pair_check(sizes: &[u64]) -> BoundCheck {
    let (two, three) = (sizes[1], sizes[2]);
    let holds = if three <= 2 * two {
        true
    } else {
        let rem = (three - 2 * two) as u128;
        (3 * rem).pow(2) <= 2 * (two as u128).pow(3)
    };
    let bound = (2.0f64).sqrt() / 3.0 * (two as f64).powf(1.5) + 2.0 * two as f64;
    BoundCheck::new("refined_pair".into(), three, BoundValue::Real(bound), holds)
}

/// Runs every applicable growth inequality on `|A|, ..., |max_h A|`.
pub fn bound_suite(a: &PointSet, max_h: u32) -> Result<BoundReport> {
    if max_h < 2 {
        return Err(Error::InvalidParameter("bound_suite needs max_h >= 2".into()));
    }
    let prof = profile(a, max_h)?;
    bound_suite_from_sizes(&prof.sizes)
}

/// Same as [`bound_suite`] but on an existing size profile.
pub fn bound_suite_from_sizes(sizes: &[u64]) -> Result<BoundReport> {
    if sizes.len() < 2 {
        return Err(Error::InvalidParameter("need sizes up to |2A| at least".into()));
    }
    let max_h = sizes.len() as u32;
    let mut checks = Vec::new();
    for h in 2..=max_h {
        checks.push(doubling_power_check(sizes, h));
    }
    for h in 2..max_h {
        checks.push(step_power_check(sizes, h));
        checks.push(simplex_step_check(sizes, h));
    }
    if max_h >= 3 {
        checks.push(refined_pair_check(sizes));
    }
    let all_hold = checks.iter().all(|c| c.holds);
    Ok(BoundReport {
        sizes: sizes.to_vec(),
        x: invert_binom(sizes[1] as f64, 2)?,
        x_exact: invert_binom_exact(sizes[1], 2),
        checks,
        all_hold,
    })
}

/// Growth ratios `rho_h = |(h+1)A| / |hA|^{(h+1)/h}` for `h = 2..H-1`;
/// always in `(0, 1]` (display companion to the exact `step_power` checks).
pub fn rho_ratios(sizes: &[u64]) -> Vec<f64> {
    let mut out = Vec::new();
    for h in 2..sizes.len() {
        let ha = sizes[h - 1] as f64;
        let next = sizes[h] as f64;
        out.push(next / ha.powf((h as f64 + 1.0) / h as f64));
    }
    out
}

/// Doubling ratio and the informative growth ratios `alpha_2..alpha_H`
/// (dropping the constant `alpha_1 = 1`), for report assembly.
pub fn exact_ratios(prof: &SumsetProfile) -> (exact::RatRepr, Vec<exact::RatRepr>) {
    (
        exact::RatRepr::of(&prof.doubling),
        prof.alpha.iter().skip(1).map(exact::RatRepr::of).collect(),
    )
}
