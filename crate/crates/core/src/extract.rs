//! Constructive extraction of structured subsets.
//!
//! Three pipelines, all exact in their verdicts:
//!
//! - [`plunnecke_large_subset`]: given a removal budget `delta`, find a large
//!   `X ⊆ A` whose translate union `X + hA` is as small as possible; the
//!   classical bound `|X+hA| ≤ (K^h/δ^{h-1})|A|` is asserted for the exact
//!   strategy and reported for the greedy one.
//! - [`inverse_extract`]: when `(h+1)A` is within a factor `M` of its maximal
//!   size relative to `hA` (or to the doubling constant), the complement
//!   `Y = A∖X` of the slow-growth part must itself be large, bounded, and of
//!   near-maximal `(h+1)`-fold growth. The report evaluates each conclusion.
//! - [`stability_analyze`]: when `|3A|` is close to the simplex ceiling
//!   determined by `|2A|`, locate a nearly dissociated `Y ⊆ A` inside the
//!   predicted size window.
//!
//! Subset searches are exhaustive (with pruning) below a configurable size
//! cap and greedy above it; greedy results are deterministic via lex
//! tie-breaking but carry no guarantee.

use crate::binom::{binom, binom_i128, invert_binom, invert_binom_exact};
use crate::bounds::bound_suite_from_sizes;
use crate::error::{Error, Result};
use crate::exact::{self, RatRepr};
use crate::multiset::triangle_list;
use crate::set::{iterated_sumset, profile, PointSet};
use crate::Rat;
use num::rational::BigRational;
use num::{One, ToPrimitive};
use std::collections::HashMap;

/// Subset-search strategy shared by the extraction operations.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    Exact,
    Greedy,
}

/// Default exhaustive-search cap for [`plunnecke_large_subset`] and
/// [`inverse_extract`] (subset scans with pruning stay in the seconds range).
pub const DEFAULT_SUBSET_CAP: usize = 20;
/// Default exhaustive-search cap for [`stability_analyze`].
pub const DEFAULT_STABILITY_CAP: usize = 18;

/// The subset of `a` selected by ascending indices.
pub fn take_subset(a: &PointSet, indices: &[u32]) -> Result<PointSet> {
    let idx: Vec<usize> = indices.iter().map(|&i| i as usize).collect();
    a.subset_by_indices(&idx)
}

// ---------------------------------------------------------------------------
// minimal |X + hA| search
// ---------------------------------------------------------------------------

struct SearchOutcome {
    kept: Vec<u32>,
    value: u64,
}

/// Per-element dense id lists: entry `i` holds the ids of `a_i + hA`, where
/// ids index the union `A + hA`.
fn translate_lists(a: &PointSet, ha: &PointSet) -> (Vec<Vec<u32>>, usize) {
    let d = a.dim();
    let moduli = a.group().moduli().to_vec();
    let mut ids: HashMap<Vec<i64>, u32> = HashMap::new();
    let mut lists = Vec::with_capacity(a.len());
    for i in 0..a.len() {
        let ri = a.row(i);
        let mut list = Vec::with_capacity(ha.len());
        for s in ha.iter() {
            let mut v = vec![0i64; d];
            for c in 0..d {
                let m = moduli[c];
                let w = ri[c] + s[c];
                v[c] = if m != 0 { w.rem_euclid(m) } else { w };
            }
            let next = ids.len() as u32;
            list.push(*ids.entry(v).or_insert(next));
        }
        lists.push(list);
    }
    (lists, ids.len())
}

/// For equal-cardinality index sets encoded as bit masks, the set containing
/// the lowest differing index is the lexicographically smaller one.
fn lex_smaller_mask(m1: u64, m2: u64) -> bool {
    let d = m1 ^ m2;
    if d == 0 {
        return false;
    }
    m1 & (d & d.wrapping_neg()) != 0
}

struct DfsState {
    counts: Vec<u32>,
    covered: u64,
    removed_mask: u64,
    removed_count: usize,
    best_value: u64,
    best_size: usize,
    best_kept: u64,
    n: usize,
    full_mask: u64,
    /// `|hA|`: no nonempty X can cover fewer points, so reaching it prunes.
    floor_value: u64,
    max_removed: usize,
}

impl DfsState {
    fn consider(&mut self) {
        let size = self.n - self.removed_count;
        let kept = self.full_mask & !self.removed_mask;
        let better = self.covered < self.best_value
            || (self.covered == self.best_value && size > self.best_size)
            || (self.covered == self.best_value
                && size == self.best_size
                && lex_smaller_mask(kept, self.best_kept));
        if better {
            self.best_value = self.covered;
            self.best_size = size;
            self.best_kept = kept;
        }
    }

    /// Visits every removal set with indices >= `start` within the budget.
    fn dfs(&mut self, lists: &[Vec<u32>], start: usize) {
        self.consider();
        if self.covered == self.floor_value || self.removed_count == self.max_removed {
            return;
        }
        for i in start..self.n {
            self.removed_mask |= 1u64 << i;
            self.removed_count += 1;
            for &raw in &lists[i] {
                let id = raw as usize;
                self.counts[id] -= 1;
                if self.counts[id] == 0 {
                    self.covered -= 1;
                }
            }
            self.dfs(lists, i + 1);
            for &raw in &lists[i] {
                let id = raw as usize;
                if self.counts[id] == 0 {
                    self.covered += 1;
                }
                self.counts[id] += 1;
            }
            self.removed_count -= 1;
            self.removed_mask &= !(1u64 << i);
        }
    }
}

fn exact_min_union(
    lists: &[Vec<u32>],
    universe: usize,
    floor_value: u64,
    min_size: usize,
) -> SearchOutcome {
    let n = lists.len();
    let mut counts = vec![0u32; universe];
    for l in lists {
        for &id in l {
            counts[id as usize] += 1;
        }
    }
    let full_mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    let mut st = DfsState {
        counts,
        covered: universe as u64,
        removed_mask: 0,
        removed_count: 0,
        best_value: u64::MAX,
        best_size: 0,
        best_kept: 0,
        n,
        full_mask,
        floor_value,
        max_removed: n - min_size,
    };
    st.dfs(lists, 0);
    let kept = (0..n as u32).filter(|&i| st.best_kept >> i & 1 == 1).collect();
    SearchOutcome { kept, value: st.best_value }
}

/// Repeatedly removes the element whose removal shrinks the union the most
/// (ties: lex-largest element), keeping the best admissible state seen.
fn greedy_min_union(
    lists: &[Vec<u32>],
    universe: usize,
    floor_value: u64,
    min_size: usize,
) -> SearchOutcome {
    let n = lists.len();
    let mut counts = vec![0u32; universe];
    for l in lists {
        for &id in l {
            counts[id as usize] += 1;
        }
    }
    let mut covered = universe as u64;
    let mut kept = vec![true; n];
    let mut cur_size = n;
    let mut best_value = covered;
    let mut best_kept = kept.clone();
    while cur_size > min_size && covered > floor_value {
        let mut choice: Option<(usize, u64)> = None;
        for (i, l) in lists.iter().enumerate() {
            if !kept[i] {
                continue;
            }
            let gain = l.iter().filter(|&&id| counts[id as usize] == 1).count() as u64;
            let better = match choice {
                None => true,
                Some((bi, bg)) => gain > bg || (gain == bg && i > bi),
            };
            if better {
                choice = Some((i, gain));
            }
        }
        let (i, _) = choice.expect("kept set is nonempty");
        kept[i] = false;
        cur_size -= 1;
        for &id in &lists[i] {
            counts[id as usize] -= 1;
            if counts[id as usize] == 0 {
                covered -= 1;
            }
        }
        // ties between sizes prefer the larger X, so only strict improvements
        // displace the incumbent
        if covered < best_value {
            best_value = covered;
            best_kept = kept.clone();
        }
    }
    let kept = (0..n as u32).filter(|&i| best_kept[i as usize]).collect();
    SearchOutcome { kept, value: best_value }
}

fn min_union_search(
    a: &PointSet,
    h: u32,
    min_size: usize,
    strategy: Strategy,
    max_exact: usize,
) -> Result<SearchOutcome> {
    let ha = iterated_sumset(a, h)?;
    let (lists, universe) = translate_lists(a, &ha);
    let floor_value = ha.len() as u64;
    match strategy {
        Strategy::Exact => {
            let cap = max_exact.min(64);
            if a.len() > cap {
                return Err(Error::ExhaustiveCap { size: a.len(), cap });
            }
            Ok(exact_min_union(&lists, universe, floor_value, min_size))
        }
        Strategy::Greedy => Ok(greedy_min_union(&lists, universe, floor_value, min_size)),
    }
}

// ---------------------------------------------------------------------------
// large subset with controlled growth
// ---------------------------------------------------------------------------

/// Outcome of the large-subset search at removal budget `delta`.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PlunneckeResult {
    pub h: u32,
    pub delta: RatRepr,
    /// `K = |2A|/|A|`.
    pub doubling: RatRepr,
    /// `ceil((1 - delta) |A|)`.
    pub min_x_size: u64,
    #[serde(skip)]
    pub x_indices: Vec<u32>,
    pub x: Vec<Vec<i64>>,
    pub x_size: u64,
    /// `|X + hA|`.
    pub sum_size: u64,
    /// `(K^h / delta^{h-1}) |A|`.
    pub bound: RatRepr,
    pub bound_holds: bool,
    pub strategy: Strategy,
}

/// Finds `X ⊆ A` with `|X| ≥ (1-delta)|A|` minimizing `|X + hA|` (exact
/// strategy: global minimum with deterministic tie-breaks; greedy: local
/// descent). The exact strategy's result always satisfies the
/// `(K^h/δ^{h-1})|A|` bound, and this is asserted.
pub fn plunnecke_large_subset(
    a: &PointSet,
    h: u32,
    delta: Rat,
    strategy: Strategy,
    max_exact: usize,
) -> Result<PlunneckeResult> {
    if h < 2 {
        return Err(Error::InvalidParameter("h must be >= 2".into()));
    }
    if delta <= Rat::from_integer(0) || delta >= Rat::one() {
        return Err(Error::InvalidParameter(format!(
            "delta must lie strictly between 0 and 1, got {delta}"
        )));
    }
    let n = a.len() as u64;
    let removed_cap = (exact::big(&delta) * exact::big_int(n))
        .floor()
        .to_integer()
        .to_u64()
        .expect("delta < 1 keeps the removal budget below |A|");
    let min_size = (n - removed_cap) as usize;
    let outcome = min_union_search(a, h, min_size, strategy, max_exact)?;

    let two = iterated_sumset(a, 2)?.len() as u64;
    let doubling = Rat::new(two as i128, n as i128);
    let bound = exact::pow(&exact::big(&doubling), h) * exact::big_int(n)
        / exact::pow(&exact::big(&delta), h - 1);
    let bound_holds = exact::big_int(outcome.value) <= bound;
    if strategy == Strategy::Exact {
        assert!(
            bound_holds,
            "exact large-subset search must satisfy the growth bound"
        );
    }
    let x: Vec<Vec<i64>> = outcome.kept.iter().map(|&i| a.row(i as usize).to_vec()).collect();
    Ok(PlunneckeResult {
        h,
        delta: RatRepr::of(&delta),
        doubling: RatRepr::of(&doubling),
        min_x_size: min_size as u64,
        x_size: outcome.kept.len() as u64,
        x_indices: outcome.kept,
        x,
        sum_size: outcome.value,
        bound: RatRepr::of_big(&bound),
        bound_holds,
        strategy,
    })
}

// ---------------------------------------------------------------------------
// inverse extraction
// ---------------------------------------------------------------------------

/// Which hypothesis shape drives the extraction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum InverseVariant {
    /// Tripling vs doubling at h = 2.
    H2,
    /// `(h+1)`-fold growth vs `alpha = |hA|/|A|`.
    GeneralAlpha,
    /// `(h+1)`-fold growth vs the doubling constant.
    GeneralK,
}

impl InverseVariant {
    pub fn name(self) -> &'static str {
        match self {
            InverseVariant::H2 => "h2",
            InverseVariant::GeneralAlpha => "general-alpha",
            InverseVariant::GeneralK => "general-K",
        }
    }
}

/// Full record of one inverse-extraction run. Produced even when the
/// hypotheses fail (`hypothesis_holds = false`); the subset search runs
/// whenever the derived removal fraction satisfies `delta < 1`.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ExtractionReport {
    pub variant: &'static str,
    pub h: u32,
    #[serde(rename = "M")]
    pub m: RatRepr,
    /// `|A|, |2A|, ..., |(h+1)A|`.
    pub sizes: Vec<u64>,
    /// The derived removal fraction (float rendering; may exceed 1).
    pub delta: f64,
    /// True when `delta < 1`, i.e. the subset search could run.
    pub searched: bool,
    pub hypothesis_holds: bool,
    pub reason: Option<String>,
    /// `floor(delta |A|)`, the removal budget (0 when not searched).
    pub removed_cap: u64,
    pub min_x_size: u64,
    pub strategy: Strategy,
    #[serde(skip)]
    pub x_indices: Vec<u32>,
    #[serde(skip)]
    pub y_indices: Vec<u32>,
    pub x: Vec<Vec<i64>>,
    pub y: Vec<Vec<i64>>,
    pub x_size: u64,
    /// `|X + hA|`.
    pub x_sum_size: u64,
    /// `|X + hA|` within half the hypothesis threshold (exact check).
    pub x_bound_holds: bool,
    pub y_size: u64,
    /// `|(h+1)Y|` (0 when `Y` is empty).
    pub y_sum_size: u64,
    /// `|Y|` inside the predicted window.
    pub conclusion1_holds: bool,
    /// `(h+1)`-fold growth of `Y` within the predicted factor of maximal.
    pub conclusion2_holds: bool,
}

/// Runs the inverse pipeline: derive `delta` from `M`, split `A` into the
/// slow-growth part `X` (via [`plunnecke_large_subset`]'s search at level
/// `h`) and its complement `Y`, and evaluate the predicted size window and
/// growth lower bound for `Y` exactly.
pub fn inverse_extract(
    a: &PointSet,
    h: u32,
    m: Rat,
    variant: InverseVariant,
    strategy: Strategy,
    max_exact: usize,
) -> Result<ExtractionReport> {
    if h < 2 {
        return Err(Error::InvalidParameter("h must be >= 2".into()));
    }
    if variant == InverseVariant::H2 && h != 2 {
        return Err(Error::InvalidParameter("variant h2 requires h = 2".into()));
    }
    if m <= Rat::from_integer(0) {
        return Err(Error::InvalidParameter("M must be positive".into()));
    }
    let prof = profile(a, h + 1)?;
    let sizes = prof.sizes.clone();
    let n = sizes[0];
    let s2 = sizes[1];
    let sh = sizes[h as usize - 1];
    let sh1 = sizes[h as usize];

    let mb = exact::big(&m);
    let two_m = &mb * exact::big_int(2);

    // Exact reductions (roots cleared). `cap_pow = (delta |A|)^cap_deg`, so
    // one rational both bounds the removal budget and caps |Y|.
    let (growth_ok, range_ok, cap_pow, cap_deg) = match variant {
        InverseVariant::GeneralAlpha => {
            let growth = exact::pow(&(&mb * exact::big_int(sh1)), h)
                >= exact::pow(&exact::big_int(sh), h + 1);
            let two_m_h = &two_m * exact::big_int(h as u64);
            let cap_pow = exact::pow(&two_m_h, h * (h - 1)) * exact::big_int(sh);
            let range = cap_pow < exact::pow(&exact::big_int(n), h);
            (growth, range, cap_pow, h)
        }
        InverseVariant::H2 | InverseVariant::GeneralK => {
            let growth = exact::pow(&(&mb * exact::big_int(sh1)), 2)
                >= exact::pow(&exact::big_int(s2), h + 1);
            let cap_pow = exact::pow(&two_m, 2) * exact::pow(&exact::big_int(s2), h - 1);
            let range = cap_pow < exact::pow(&exact::big_int(n), 2 * (h - 1));
            (growth, range, cap_pow, 2 * (h - 1))
        }
    };
    let delta = exact::big_to_f64(&cap_pow).powf(1.0 / cap_deg as f64) / n as f64;

    let m_at_least_one = m >= Rat::one();
    let hypothesis_holds = m_at_least_one && growth_ok && range_ok;
    let reason = if hypothesis_holds {
        None
    } else {
        let mut parts = Vec::new();
        if !m_at_least_one {
            parts.push("M < 1");
        }
        if !growth_ok {
            parts.push("(h+1)-fold growth below the hypothesis threshold");
        }
        if !range_ok {
            parts.push("M out of range (delta >= 1)");
        }
        Some(parts.join("; "))
    };

    let mut report = ExtractionReport {
        variant: variant.name(),
        h,
        m: RatRepr::of(&m),
        sizes,
        delta,
        searched: range_ok,
        hypothesis_holds,
        reason,
        removed_cap: 0,
        min_x_size: 0,
        strategy,
        x_indices: Vec::new(),
        y_indices: Vec::new(),
        x: Vec::new(),
        y: Vec::new(),
        x_size: 0,
        x_sum_size: 0,
        x_bound_holds: false,
        y_size: 0,
        y_sum_size: 0,
        conclusion1_holds: false,
        conclusion2_holds: false,
    };
    if !range_ok {
        return Ok(report);
    }

    let removed_cap = exact::floor_root(&cap_pow, cap_deg)
        .to_u64()
        .expect("removal budget below |A|");
    let min_size = (n - removed_cap) as usize;
    let outcome = min_union_search(a, h, min_size, strategy, max_exact)?;
    let v = outcome.value;

    // |X + hA| <= (half the hypothesis threshold), exactly:
    // alpha: (2M |X+hA|)^h <= |hA|^{h+1};  K: (2M |X+hA|)^2 <= |2A|^{h+1}
    let x_bound_holds = match variant {
        InverseVariant::GeneralAlpha => {
            exact::pow(&(&two_m * exact::big_int(v)), h) <= exact::pow(&exact::big_int(sh), h + 1)
        }
        _ => {
            exact::pow(&(&two_m * exact::big_int(v)), 2) <= exact::pow(&exact::big_int(s2), h + 1)
        }
    };

    let y_indices: Vec<u32> =
        (0..n as u32).filter(|i| outcome.kept.binary_search(i).is_err()).collect();
    let y_size = y_indices.len() as u64;
    let y_sum_size = if y_indices.is_empty() {
        0
    } else {
        let y_set = take_subset(a, &y_indices)?;
        iterated_sumset(&y_set, h + 1)?.len() as u64
    };

    let ybig = exact::big_int(y_size);
    let (c1, c2) = if y_size == 0 {
        (false, false)
    } else {
        match variant {
            InverseVariant::GeneralAlpha => {
                let lower = exact::big_int(sh) <= &two_m * exact::pow(&ybig, h);
                let upper = exact::pow(&ybig, h) < cap_pow;
                let factor = exact::pow(&two_m, h * h)
                    * BigRational::from_integer(num::bigint::BigInt::from(h).pow(h * h - 1));
                let growth = factor * exact::big_int(y_sum_size) >= exact::pow(&ybig, h + 1);
                (lower && upper, growth)
            }
            _ => {
                let lower = exact::pow(&exact::big_int(s2), h + 1)
                    <= exact::pow(&two_m, 2) * exact::pow(&ybig, 2 * (h + 1));
                let upper = exact::pow(&ybig, 2 * (h - 1)) < cap_pow;
                let growth = exact::pow(&two_m, 4) * exact::big_int(y_sum_size)
                    >= exact::pow(&ybig, h + 1);
                (lower && upper, growth)
            }
        }
    };

    if strategy == Strategy::Exact && hypothesis_holds {
        assert!(
            x_bound_holds && c1 && c2,
            "hypotheses hold, so the exact search must realize both conclusions"
        );
    }

    report.removed_cap = removed_cap;
    report.min_x_size = min_size as u64;
    report.x = outcome.kept.iter().map(|&i| a.row(i as usize).to_vec()).collect();
    report.y = y_indices.iter().map(|&i| a.row(i as usize).to_vec()).collect();
    report.x_size = outcome.kept.len() as u64;
    report.x_indices = outcome.kept;
    report.x_sum_size = v;
    report.x_bound_holds = x_bound_holds;
    report.y_size = y_size;
    report.y_indices = y_indices;
    report.y_sum_size = y_sum_size;
    report.conclusion1_holds = c1;
    report.conclusion2_holds = c2;
    Ok(report)
}

// ---------------------------------------------------------------------------
// stability analysis
// ---------------------------------------------------------------------------

/// Record of one stability run: how close `|3A|` sits to its simplex ceiling
/// and the best nearly-dissociated witness found in the predicted window.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityReport {
    /// `|A|, |2A|, |3A|`.
    pub sizes: [u64; 3],
    /// Real solution of `|2A| = C(x+1, 2)`.
    pub x: f64,
    pub x_exact: Option<u64>,
    /// `1 - |3A| / C(x+2, 3)`, clamped into `[0, 1]`.
    pub delta: f64,
    pub delta_exact: Option<RatRepr>,
    /// Raw value when a tiny negative was clamped to 0.
    pub delta_clamped_from: Option<f64>,
    /// `delta < 1/1152`, the regime where the guarantee applies.
    pub delta_within_theorem: bool,
    /// Candidate sizes: `ceil((1-6√δ)x) .. floor((1+9√δ)(x+1))` ∩ `[1, |A|]`.
    pub window: [u64; 2],
    pub size_window_holds: bool,
    /// `|3Y| ≥ (1 - 50√δ) C(|Y|+2, 3)`, decided exactly when δ is exact.
    pub triple_bound_holds: bool,
    pub strategy: Strategy,
    #[serde(skip)]
    pub y_indices: Vec<u32>,
    pub y: Vec<Vec<i64>>,
    pub y_size: u64,
    /// `|3Y|`.
    pub y_triple_size: u64,
    /// `C(|Y|+2, 3)`.
    pub y_capacity: u64,
    pub y_ratio: f64,
    pub y_dissociated: bool,
    /// `|3Y|` respects the simplex ceiling computed from `|2Y|`.
    pub y_simplex_consistent: bool,
}

/// Exact cross-multiplied comparison of `a1/b1` vs `a2/b2`.
fn ratio_cmp(a1: u64, b1: u64, a2: u64, b2: u64) -> std::cmp::Ordering {
    (a1 as u128 * b2 as u128).cmp(&(a2 as u128 * b1 as u128))
}

fn triple_capacity(size: u64) -> u64 {
    binom_i128(size as i128 + 2, 3).expect("window sizes stay small") as u64
}

/// Search state shared by both stability strategies: best
/// (ratio, size, lex) triple over candidate index sets.
struct BestWitness {
    indices: Vec<u32>,
    triple_size: u64,
    capacity: u64,
}

impl BestWitness {
    fn offer(&mut self, indices: &[u32], triple_size: u64, capacity: u64) {
        use std::cmp::Ordering;
        let better = match ratio_cmp(triple_size, capacity, self.triple_size, self.capacity) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match indices.len().cmp(&(self.indices.len())) {
                Ordering::Greater => true,
                Ordering::Less => false,
                Ordering::Equal => indices < self.indices.as_slice(),
            },
        };
        if better {
            self.indices = indices.to_vec();
            self.triple_size = triple_size;
            self.capacity = capacity;
        }
    }
}

fn eval_triple(a: &PointSet, indices: &[u32]) -> Result<u64> {
    let y = take_subset(a, indices)?;
    Ok(iterated_sumset(&y, 3)?.len() as u64)
}

fn stability_exact_search(a: &PointSet, lo: u64, hi: u64) -> Result<BestWitness> {
    let n = a.len();
    let mut best = BestWitness { indices: Vec::new(), triple_size: 0, capacity: 1 };
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as u64;
        if size < lo || size > hi {
            continue;
        }
        let indices: Vec<u32> = (0..n as u32).filter(|&i| mask >> i & 1 == 1).collect();
        let t = eval_triple(a, &indices)?;
        best.offer(&indices, t, triple_capacity(size));
    }
    Ok(best)
}

/// Grows `Y` one vertex at a time, preferring the vertex completing the most
/// triangles with the current `Y` (then most triangles overall, then lowest
/// index), evaluating every size inside the window.
fn stability_greedy_search(a: &PointSet, lo: u64, hi: u64) -> Result<BestWitness> {
    let n = a.len();
    let tris = triangle_list(a)?;
    let mut tri_degree = vec![0u64; n];
    for t in &tris {
        for &v in t {
            tri_degree[v as usize] += 1;
        }
    }
    let mut chosen = vec![false; n];
    let mut picked: Vec<u32> = Vec::new();
    let mut best = BestWitness { indices: Vec::new(), triple_size: 0, capacity: 1 };
    for _ in 0..hi.min(n as u64) {
        let mut cand: Option<(u64, u64, u32)> = None; // (with_current, overall, index)
        for v in 0..n as u32 {
            if chosen[v as usize] {
                continue;
            }
            let with_current = tris
                .iter()
                .filter(|t| {
                    t.contains(&v)
                        && t.iter().filter(|&&w| w != v).all(|&w| chosen[w as usize])
                })
                .count() as u64;
            let score = (with_current, tri_degree[v as usize], v);
            let better = match cand {
                None => true,
                Some((bw, bd, bv)) => {
                    score.0 > bw || (score.0 == bw && (score.1 > bd || (score.1 == bd && v < bv)))
                }
            };
            if better {
                cand = Some(score);
            }
        }
        let (_, _, v) = cand.expect("not all vertices chosen yet");
        chosen[v as usize] = true;
        let pos = picked.binary_search(&v).unwrap_err();
        picked.insert(pos, v);
        let size = picked.len() as u64;
        if size >= lo && size <= hi {
            let t = eval_triple(a, &picked)?;
            best.offer(&picked, t, triple_capacity(size));
        }
    }
    Ok(best)
}

/// Measures how close `|3A|` is to the ceiling `C(x+2,3)` fixed by `|2A|`,
/// and searches the predicted size window for the most nearly dissociated
/// subset `Y`. The theorem's guarantee only applies for `delta < 1/1152` and
/// large `A`; the report states the measured facts either way.
pub fn stability_analyze(a: &PointSet, strategy: Strategy, max_exact: usize) -> Result<StabilityReport> {
    let prof = profile(a, 3)?;
    let n = prof.sizes[0];
    let s2 = prof.sizes[1];
    let s3 = prof.sizes[2];

    let x_exact = invert_binom_exact(s2, 2);
    let x = match x_exact {
        Some(j) => j as f64,
        None => invert_binom(s2 as f64, 2)?,
    };

    let mut delta_exact = None;
    let mut delta_clamped_from = None;
    let exact_delta_rat = x_exact.and_then(|j| {
        let denom = binom_i128(j as i128 + 2, 3)?;
        let num = denom - s3 as i128;
        assert!(num >= 0, "|3A| cannot exceed its simplex ceiling");
        Some(Rat::new(num, denom))
    });
    let delta = match &exact_delta_rat {
        Some(q) => {
            delta_exact = Some(RatRepr::of(q));
            exact::rat_to_f64(q)
        }
        None => {
            let ceiling = binom(x + 2.0, 3);
            let raw = 1.0 - s3 as f64 / ceiling;
            if raw < 0.0 {
                delta_clamped_from = Some(raw);
                0.0
            } else {
                raw
            }
        }
    };
    let delta_within_theorem = match &exact_delta_rat {
        Some(q) => *q < Rat::new(1, 1152),
        None => delta < 1.0 / 1152.0,
    };

    // closed integer window, with float slack on the open real bounds
    let sd = delta.sqrt();
    let lo_real = (1.0 - 6.0 * sd) * x;
    let hi_real = (1.0 + 9.0 * sd) * (x + 1.0);
    let lo = ((lo_real - 1e-9).ceil().max(1.0)) as u64;
    let hi = ((hi_real + 1e-9).floor() as u64).min(n);
    assert!(lo <= hi, "stability window is never empty after clamping");

    let best = match strategy {
        Strategy::Exact => {
            let cap = max_exact.min(31);
            if a.len() > cap {
                return Err(Error::ExhaustiveCap { size: a.len(), cap });
            }
            stability_exact_search(a, lo, hi)?
        }
        Strategy::Greedy => stability_greedy_search(a, lo, hi)?,
    };

    let y_size = best.indices.len() as u64;
    let y_triple = best.triple_size;
    let y_cap = best.capacity;
    let size_window_holds = y_size >= lo && y_size <= hi;

    // |3Y| >= (1 - 50 sqrt(delta)) C(|Y|+2, 3): squared remainder form when
    // delta is exact, float with tolerance otherwise
    let triple_bound_holds = if y_triple >= y_cap {
        true
    } else {
        match &exact_delta_rat {
            Some(q) => {
                let rem = exact::big_int(y_cap - y_triple);
                let cap_big = exact::big_int(y_cap);
                exact::pow(&rem, 2)
                    <= exact::big(q) * exact::big_int(2500) * exact::pow(&cap_big, 2)
            }
            None => y_triple as f64 >= (1.0 - 50.0 * sd) * y_cap as f64 - 1e-9 * y_cap as f64,
        }
    };

    let y_set = take_subset(a, &best.indices)?;
    let y2 = iterated_sumset(&y_set, 2)?.len() as u64;
    let y_report = bound_suite_from_sizes(&[y_size, y2, y_triple])?;
    let y_simplex_consistent = y_report
        .checks
        .iter()
        .find(|c| c.name == "simplex_step_h2")
        .map(|c| c.holds)
        .expect("three sizes always produce the h=2 simplex check");

    Ok(StabilityReport {
        sizes: [n, s2, s3],
        x,
        x_exact,
        delta,
        delta_exact,
        delta_clamped_from,
        delta_within_theorem,
        window: [lo, hi],
        size_window_holds,
        triple_bound_holds,
        strategy,
        y: best.indices.iter().map(|&i| a.row(i as usize).to_vec()).collect(),
        y_size,
        y_triple_size: y_triple,
        y_capacity: y_cap,
        y_ratio: y_triple as f64 / y_cap as f64,
        y_dissociated: y_triple == y_cap,
        y_simplex_consistent,
        y_indices: best.indices,
    })
}
