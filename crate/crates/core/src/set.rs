//! Finite point sets and the iterated-sumset engine.
//!
//! A [`PointSet`] stores canonical coordinate vectors in one flat buffer,
//! sorted lexicographically and deduplicated, so equality, iteration order,
//! and tie-breaking are deterministic everywhere.
//!
//! Sumsets are computed by repeated pairwise sumsets with deduplication
//! (never by enumerating h-tuples). Each pairwise pass picks a membership
//! store for the target bounding box: a bitmap when the box is small, a hash
//! set of packed codes when it fits 128 bits, and a tree of raw vectors as a
//! last resort. Packed codes are mixed-radix, most significant coordinate
//! first, so code order equals lexicographic order.

use crate::binom::binom_i128;
use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec, MAX_COORD};
use crate::Rat;
use std::collections::{BTreeSet, HashSet};

/// Boxes with at most this many cells use a bitmap store (2^26 bits = 8 MiB).
const BITMAP_VOLUME_CAP: u128 = 1 << 26;

/// A finite nonempty set of group elements in canonical sorted form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointSet {
    group: GroupSpec,
    /// `dim * len` coordinates, row-major, rows sorted lex and distinct.
    flat: Vec<i64>,
}

impl PointSet {
    /// Builds a set from arbitrary elements: canonicalizes, sorts,
    /// deduplicates. Errors on empty input or dimension mismatch.
    pub fn from_elements(group: GroupSpec, elems: &[Element]) -> Result<Self> {
        Ok(Self::from_elements_counting(group, elems)?.0)
    }

    /// Like [`PointSet::from_elements`] but also reports how many duplicates
    /// were merged away (after canonicalization).
    pub fn from_elements_counting(group: GroupSpec, elems: &[Element]) -> Result<(Self, usize)> {
        if elems.is_empty() {
            return Err(Error::EmptySet);
        }
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(elems.len());
        for e in elems {
            let mut coords = e.coords().to_vec();
            group.canonicalize_in_place(&mut coords)?;
            rows.push(coords);
        }
        rows.sort_unstable();
        let before = rows.len();
        rows.dedup();
        let dups = before - rows.len();
        let mut flat = Vec::with_capacity(rows.len() * group.dim());
        for r in &rows {
            flat.extend_from_slice(r);
        }
        Ok((PointSet { group, flat }, dups))
    }

    /// Builds a 1-dimensional integer set.
    pub fn from_ints(values: &[i64]) -> Result<Self> {
        let elems: Vec<Element> = values.iter().map(|&v| Element::scalar(v)).collect();
        PointSet::from_elements(GroupSpec::free(1)?, &elems)
    }

    /// Internal constructor for rows already canonical, sorted, distinct.
    pub(crate) fn from_sorted_rows(group: GroupSpec, flat: Vec<i64>) -> Self {
        debug_assert!(!flat.is_empty() && flat.len().is_multiple_of(group.dim()));
        PointSet { group, flat }
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn dim(&self) -> usize {
        self.group.dim()
    }

    pub fn len(&self) -> usize {
        self.flat.len() / self.group.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.flat.is_empty()
    }

    /// Rows in lexicographic order.
    pub fn iter(&self) -> std::slice::ChunksExact<'_, i64> {
        self.flat.chunks_exact(self.group.dim())
    }

    /// The `i`-th row in lexicographic order.
    pub fn row(&self, i: usize) -> &[i64] {
        let d = self.group.dim();
        &self.flat[i * d..(i + 1) * d]
    }

    /// Owned elements in lexicographic order.
    pub fn elements(&self) -> Vec<Element> {
        self.iter().map(|r| Element::from_coords(r.to_vec())).collect()
    }

    /// Membership test for a canonical coordinate vector (binary search).
    pub fn contains(&self, coords: &[i64]) -> bool {
        self.index_of(coords).is_some()
    }

    /// Position of a canonical coordinate vector, if present.
    pub fn index_of(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.group.dim() {
            return None;
        }
        let n = self.len();
        let (mut lo, mut hi) = (0usize, n);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.row(mid).cmp(coords) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return Some(mid),
            }
        }
        None
    }

    /// Subset given by strictly increasing row indices. Must be nonempty.
    pub fn subset_by_indices(&self, indices: &[usize]) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptySet);
        }
        let d = self.group.dim();
        let mut flat = Vec::with_capacity(indices.len() * d);
        let mut prev: Option<usize> = None;
        for &i in indices {
            if i >= self.len() || prev.is_some_and(|p| p >= i) {
                return Err(Error::InvalidParameter(
                    "subset indices must be strictly increasing and in range".into(),
                ));
            }
            prev = Some(i);
            flat.extend_from_slice(self.row(i));
        }
        Ok(PointSet { group: self.group.clone(), flat })
    }

    /// Set union (same group required).
    pub fn union(&self, other: &PointSet) -> Result<Self> {
        check_same_group(self, other)?;
        let mut rows: Vec<&[i64]> = self.iter().chain(other.iter()).collect();
        rows.sort_unstable();
        rows.dedup();
        let mut flat = Vec::with_capacity(rows.len() * self.dim());
        for r in rows {
            flat.extend_from_slice(r);
        }
        Ok(PointSet { group: self.group.clone(), flat })
    }

    /// Per-coordinate min and max over all rows.
    pub fn coord_bounds(&self) -> (Vec<i64>, Vec<i64>) {
        let d = self.group.dim();
        let mut lo = self.row(0).to_vec();
        let mut hi = self.row(0).to_vec();
        for r in self.iter() {
            for i in 0..d {
                lo[i] = lo[i].min(r[i]);
                hi[i] = hi[i].max(r[i]);
            }
        }
        (lo, hi)
    }

    fn check_coords_bounded(&self) -> Result<()> {
        if self.flat.iter().any(|&c| c.abs() > MAX_COORD) {
            return Err(Error::Overflow(
                "coordinates too large for safe addition".into(),
            ));
        }
        Ok(())
    }
}

fn check_same_group(a: &PointSet, b: &PointSet) -> Result<()> {
    if a.group != b.group {
        return Err(Error::GroupMismatch {
            left: a.group.to_string(),
            right: b.group.to_string(),
        });
    }
    Ok(())
}

/// Mixed-radix packer for a coordinate box; code order = lex order.
struct BoxCoder {
    lo: Vec<i64>,
    width: Vec<u128>,
    stride: Vec<u128>,
    volume: u128,
}

impl BoxCoder {
    /// Coder for the box guaranteed to contain `a + b` in canonical form.
    fn for_sum(a: &PointSet, b: &PointSet) -> Option<BoxCoder> {
        let d = a.dim();
        let (alo, ahi) = a.coord_bounds();
        let (blo, bhi) = b.coord_bounds();
        let mut lo = vec![0i64; d];
        let mut width = vec![0u128; d];
        for i in 0..d {
            let m = a.group.moduli()[i];
            if m != 0 {
                lo[i] = 0;
                width[i] = m as u128;
            } else {
                lo[i] = alo[i] + blo[i];
                let hi = ahi[i] + bhi[i];
                // the span can exceed i64 even though both ends fit
                width[i] = (hi as i128 - lo[i] as i128) as u128 + 1;
            }
        }
        let mut stride = vec![1u128; d];
        let mut volume: u128 = 1;
        for i in (0..d).rev() {
            stride[i] = volume;
            volume = volume.checked_mul(width[i])?;
        }
        Some(BoxCoder { lo, width, stride, volume })
    }

    #[inline]
    fn encode(&self, coords: &[i64]) -> u128 {
        let mut code = 0u128;
        for (i, &c) in coords.iter().enumerate() {
            code += (c - self.lo[i]) as u128 * self.stride[i];
        }
        code
    }

    fn decode(&self, mut code: u128, out: &mut Vec<i64>) {
        for i in 0..self.lo.len() {
            let q = code / self.stride[i];
            code %= self.stride[i];
            debug_assert!(q < self.width[i]);
            out.push(self.lo[i] + q as i64);
        }
    }
}

/// Pairwise sumset `A + B` with deduplication.
pub fn sumset(a: &PointSet, b: &PointSet) -> Result<PointSet> {
    check_same_group(a, b)?;
    a.check_coords_bounded()?;
    b.check_coords_bounded()?;
    let d = a.dim();
    let moduli = a.group.moduli().to_vec();
    let mut scratch = vec![0i64; d];

    match BoxCoder::for_sum(a, b) {
        Some(coder) if coder.volume <= BITMAP_VOLUME_CAP => {
            let words = (coder.volume as usize).div_ceil(64);
            let mut bits = vec![0u64; words];
            for ra in a.iter() {
                for rb in b.iter() {
                    add_rows(ra, rb, &moduli, &mut scratch);
                    let code = coder.encode(&scratch) as usize;
                    bits[code / 64] |= 1u64 << (code % 64);
                }
            }
            let mut flat = Vec::new();
            for (w, &word) in bits.iter().enumerate() {
                let mut word = word;
                while word != 0 {
                    let tz = word.trailing_zeros() as usize;
                    word &= word - 1;
                    coder.decode((w * 64 + tz) as u128, &mut flat);
                }
            }
            Ok(PointSet::from_sorted_rows(a.group.clone(), flat))
        }
        Some(coder) => {
            let mut codes: HashSet<u128> = HashSet::with_capacity(a.len().max(b.len()) * 2);
            for ra in a.iter() {
                for rb in b.iter() {
                    add_rows(ra, rb, &moduli, &mut scratch);
                    codes.insert(coder.encode(&scratch));
                }
            }
            let mut codes: Vec<u128> = codes.into_iter().collect();
            codes.sort_unstable();
            let mut flat = Vec::with_capacity(codes.len() * d);
            for c in codes {
                coder.decode(c, &mut flat);
            }
            Ok(PointSet::from_sorted_rows(a.group.clone(), flat))
        }
        None => {
            // Box too large to pack; keep raw rows in a tree (already sorted).
            let mut rows: BTreeSet<Vec<i64>> = BTreeSet::new();
            for ra in a.iter() {
                for rb in b.iter() {
                    add_rows(ra, rb, &moduli, &mut scratch);
                    rows.insert(scratch.clone());
                }
            }
            let mut flat = Vec::with_capacity(rows.len() * d);
            for r in rows {
                flat.extend_from_slice(&r);
            }
            Ok(PointSet::from_sorted_rows(a.group.clone(), flat))
        }
    }
}

#[inline]
fn add_rows(a: &[i64], b: &[i64], moduli: &[i64], out: &mut [i64]) {
    for i in 0..a.len() {
        let mut s = a[i] + b[i];
        let m = moduli[i];
        // both inputs canonical, so s < 2m and one subtraction suffices
        if m != 0 && s >= m {
            s -= m;
        }
        out[i] = s;
    }
}

/// Translate of a set: `x + A` in canonical form.
pub fn translate(a: &PointSet, x: &Element) -> Result<PointSet> {
    let single = PointSet::from_elements(a.group().clone(), std::slice::from_ref(x))?;
    sumset(&single, a)
}

/// The h-fold sumset `hA` (`h >= 1`).
pub fn iterated_sumset(a: &PointSet, h: u32) -> Result<PointSet> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be >= 1".into()));
    }
    let mut cur = a.clone();
    for _ in 1..h {
        cur = sumset(&cur, a)?;
    }
    Ok(cur)
}

/// Growth profile of a set: `|A|, |2A|, ..., |HA|` with exact ratios.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SumsetProfile {
    /// `sizes[i] = |(i+1)A|`.
    pub sizes: Vec<u64>,
    /// Doubling ratio `|2A| / |A|`.
    #[serde(skip)]
    pub doubling: Rat,
    /// Growth ratios `alpha[i] = |(i+1)A| / |A|` (so `alpha[0] = 1`).
    #[serde(skip)]
    pub alpha: Vec<Rat>,
}

/// Computes the growth profile up to `max_h >= 2`.
///
/// Panics (never returns) if the computed sizes violate the two structural
/// facts every commutative group obeys: monotone growth and the simplex
/// ceiling `|hA| <= C(|A|+h-1, h)` — either would be an engine bug.
pub fn profile(a: &PointSet, max_h: u32) -> Result<SumsetProfile> {
    if max_h < 2 {
        return Err(Error::InvalidParameter("profile needs max_h >= 2".into()));
    }
    let mut sizes: Vec<u64> = vec![a.len() as u64];
    let mut cur = a.clone();
    for h in 2..=max_h {
        cur = sumset(&cur, a)?;
        let n = cur.len() as u64;
        let prev = *sizes.last().unwrap();
        assert!(n >= prev, "sumset sizes must be monotone: |{h}A| = {n} < {prev}");
        if let Some(cap) = binom_i128(a.len() as i128 + h as i128 - 1, h) {
            assert!(
                (n as i128) <= cap,
                "|{h}A| = {n} exceeds the simplex ceiling {cap}"
            );
        }
        sizes.push(n);
    }
    let a1 = sizes[0] as i128;
    let doubling = Rat::new(sizes[1] as i128, a1);
    let alpha = sizes.iter().map(|&s| Rat::new(s as i128, a1)).collect();
    Ok(SumsetProfile { sizes, doubling, alpha })
}

/// True iff `|hA|` attains the simplex ceiling `C(|A|+h-1, h)`, i.e. all
/// h-fold sums with repetition are pairwise distinct.
pub fn is_dissociated(a: &PointSet, h: u32) -> Result<bool> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be >= 1".into()));
    }
    let ha = iterated_sumset(a, h)?;
    match binom_i128(a.len() as i128 + h as i128 - 1, h) {
        Some(cap) => Ok(ha.len() as i128 == cap),
        // ceiling exceeds i128, far beyond any realizable set size
        None => Ok(false),
    }
}
