//! Exact engine for iterated sumsets in finitely generated commutative groups.
//!
//! The library computes h-fold sumsets `hA` of finite point sets in groups of
//! the form `Z^k x Z/n1 x ... x Z/nj`, together with everything needed to
//! study how fast they grow:
//!
//! - growth profiles (`|A|, |2A|, ..., |HA|`), doubling ratios, and the
//!   h-dissociated predicate ([`set`]);
//! - canonical multiset embeddings of `hA` and their shadows, which tie
//!   sumset growth to Kruskal–Katona-style shadow bounds ([`multiset`]);
//! - exact verdicts for the classical growth inequalities (Plünnecke, Ruzsa,
//!   Macaulay-type bounds, the refined pair bound) ([`bounds`]);
//! - the extremal families that show those bounds are sharp ([`construct`]);
//! - constructive extraction of large well-behaved subsets: Plünnecke-type
//!   subset selection, the inverse theorems for near-maximal growth, and the
//!   stability analysis around the dissociated extremizers ([`extract`]).
//!
//! Every inequality verdict is computed in exact integer/rational arithmetic;
//! floats appear only in reports and in the one numeric root-finder
//! ([`binom::invert_binom`]), never in a pass/fail decision.

pub mod binom;
pub mod bounds;
pub mod construct;
pub mod error;
pub mod exact;
pub mod extract;
pub mod group;
pub mod io;
pub mod multiset;
pub mod sample;
pub mod set;

pub use error::{Error, Result};
pub use group::{Element, GroupSpec};
pub use set::{PointSet, SumsetProfile};

/// Exact rational scalar used for doubling ratios, growth ratios, and all
/// user-supplied real parameters that feed exact verdicts.
pub type Rat = num::rational::Ratio<i128>;

/// Convenience constructor for [`Rat`].
pub fn rat(num: i128, den: i128) -> Rat {
    Rat::new(num, den)
}
