//! Deterministic random sampling used by fuzzing and test corpora.
//!
//! Two generators, both pinned for reproducibility:
//! - [`splitmix64`] / [`derive_seed`]: stateless per-index streams, used
//!   where membership of each candidate must be decidable independently
//!   (and in parallel) from `(seed, index)`;
//! - ChaCha8 seeded from a single `u64`, used for corpus sampling.

use crate::error::Result;
use crate::group::{Element, GroupSpec};
use crate::set::PointSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Standard splitmix64 finalizer: a fixed bijective mixer on 64 bits.
pub fn splitmix64(state: u64) -> u64 {
    let mut z = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Independent 64-bit stream value for `(seed, index)`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ splitmix64(index.wrapping_add(0xA076_1D64_78BD_642F)))
}

/// Samples a random point set: size uniform in `1..=max_size`, infinite
/// coordinates uniform in `[0, window]`, finite ones uniform in the group.
/// Duplicates collapse, so the realized size may be smaller but never zero.
pub fn random_point_set(
    group: &GroupSpec,
    max_size: usize,
    window: i64,
    seed: u64,
) -> Result<PointSet> {
    assert!(max_size >= 1 && window >= 0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let size = rng.random_range(1..=max_size);
    let mut elems = Vec::with_capacity(size);
    for _ in 0..size {
        let coords = group
            .moduli()
            .iter()
            .map(|&m| {
                if m == 0 {
                    rng.random_range(0..=window)
                } else {
                    rng.random_range(0..m)
                }
            })
            .collect();
        elems.push(Element::from_coords(coords));
    }
    PointSet::from_elements(group.clone(), &elems)
}
