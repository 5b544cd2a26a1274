//! Canonical multiset embeddings of iterated sumsets and their shadows.
//!
//! Every sum `s` in `hA` is represented by the lexicographically smallest
//! multiset of `h` elements of `A` (equivalently, the lex-smallest
//! nondecreasing tuple) that adds up to `s`. The family of those
//! representatives is the canonical embedding of `hA` into the h-multisets
//! of `A`; its lower shadow (delete one entry in every possible way) equals
//! the canonical embedding of `(h-1)A`, which is the engine behind the
//! Macaulay-type growth bounds.
//!
//! Multisets are stored as nondecreasing index vectors into the sorted
//! ground set, so index order and element order coincide, and the family
//! order (lex on sorted tuples) is exactly the order used for shadows and
//! tie-breaking.

use crate::error::{Error, Result};
use crate::group::Element;
use crate::set::{iterated_sumset, PointSet};
use std::collections::BTreeSet;

/// A family of k-multisets over one ground set, sorted and deduplicated.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultisetFamily {
    ground: PointSet,
    arity: u32,
    /// Each row: `arity` nondecreasing indices into `ground`; rows sorted lex.
    members: Vec<Vec<u32>>,
}

impl MultisetFamily {
    /// Validates rows (length, range, monotonicity), sorts, deduplicates.
    pub fn new(ground: PointSet, arity: u32, mut members: Vec<Vec<u32>>) -> Result<Self> {
        if arity == 0 {
            return Err(Error::InvalidParameter("multiset arity must be >= 1".into()));
        }
        let n = ground.len() as u32;
        for row in &members {
            if row.len() != arity as usize {
                return Err(Error::InvalidParameter(format!(
                    "multiset has {} entries, expected {arity}",
                    row.len()
                )));
            }
            if row.iter().any(|&i| i >= n) {
                return Err(Error::InvalidParameter("multiset entry out of range".into()));
            }
            if row.windows(2).any(|w| w[0] > w[1]) {
                return Err(Error::InvalidParameter(
                    "multiset entries must be nondecreasing".into(),
                ));
            }
        }
        members.sort_unstable();
        members.dedup();
        Ok(MultisetFamily { ground, arity, members })
    }

    pub fn ground(&self) -> &PointSet {
        &self.ground
    }

    pub fn arity(&self) -> u32 {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Rows in lexicographic order.
    pub fn members(&self) -> &[Vec<u32>] {
        &self.members
    }

    /// The entries of one member as owned elements.
    pub fn member_elements(&self, i: usize) -> Vec<Element> {
        self.members[i]
            .iter()
            .map(|&j| Element::from_coords(self.ground.row(j as usize).to_vec()))
            .collect()
    }

    /// One member as display text: all coordinates of all entries,
    /// space-separated in order.
    pub fn member_line(&self, i: usize) -> String {
        let mut out = String::new();
        for (pos, &j) in self.members[i].iter().enumerate() {
            for (c, v) in self.ground.row(j as usize).iter().enumerate() {
                if pos > 0 || c > 0 {
                    out.push(' ');
                }
                out.push_str(&v.to_string());
            }
        }
        out
    }

    /// Lower shadow: every way of deleting one entry from every member,
    /// deduplicated. Requires arity >= 2.
    pub fn shadow(&self) -> Result<MultisetFamily> {
        if self.arity < 2 {
            return Err(Error::InvalidParameter(
                "shadow needs multisets of arity >= 2".into(),
            ));
        }
        let mut rows: Vec<Vec<u32>> = Vec::with_capacity(self.members.len() * self.arity as usize);
        for m in &self.members {
            for j in 0..m.len() {
                // deleting any copy of a repeated entry gives the same multiset
                if j == 0 || m[j] != m[j - 1] {
                    let mut r = Vec::with_capacity(m.len() - 1);
                    r.extend_from_slice(&m[..j]);
                    r.extend_from_slice(&m[j + 1..]);
                    rows.push(r);
                }
            }
        }
        rows.sort_unstable();
        rows.dedup();
        Ok(MultisetFamily {
            ground: self.ground.clone(),
            arity: self.arity - 1,
            members: rows,
        })
    }
}

/// Canonical form of `s - partial` in the group of `a`.
fn sub_canonical(a: &PointSet, s: &[i64], partial: &[i64], out: &mut [i64]) {
    let moduli = a.group().moduli();
    for i in 0..s.len() {
        let m = moduli[i];
        let v = s[i] - partial[i];
        out[i] = if m != 0 { v.rem_euclid(m) } else { v };
    }
}

/// Lex-smallest nondecreasing index tuple summing to `s`, if any.
fn lexmin_row(a: &PointSet, s: &[i64], h: u32) -> Option<Vec<u32>> {
    let d = a.dim();
    let moduli = a.group().moduli().to_vec();
    let mut prefix: Vec<u32> = Vec::with_capacity(h as usize);
    let mut partial = vec![0i64; d];
    let mut target = vec![0i64; d];

    #[allow(clippy::too_many_arguments)] // recursion state, not an API
    fn rec(
        a: &PointSet,
        s: &[i64],
        moduli: &[i64],
        remaining: u32,
        start: u32,
        partial: &mut Vec<i64>,
        target: &mut Vec<i64>,
        prefix: &mut Vec<u32>,
    ) -> bool {
        if remaining == 1 {
            // the last entry is forced: it must equal s minus the prefix sum
            sub_canonical(a, s, partial, target);
            if let Some(j) = a.index_of(target) {
                if j as u32 >= start {
                    prefix.push(j as u32);
                    return true;
                }
            }
            return false;
        }
        for i in start..a.len() as u32 {
            let row = a.row(i as usize);
            let saved: Vec<i64> = partial.clone();
            for c in 0..row.len() {
                let m = moduli[c];
                let v = partial[c] + row[c];
                partial[c] = if m != 0 { v.rem_euclid(m) } else { v };
            }
            prefix.push(i);
            if rec(a, s, moduli, remaining - 1, i, partial, target, prefix) {
                return true;
            }
            prefix.pop();
            *partial = saved;
        }
        false
    }

    rec(a, s, &moduli, h, 0, &mut partial, &mut target, &mut prefix).then_some(prefix)
}

/// Canonical embedding of `hA`: for every sum in `hA`, its lex-smallest
/// h-multiset of elements of `A`. The family size always equals `|hA|`.
pub fn lexmin_embedding(a: &PointSet, h: u32) -> Result<MultisetFamily> {
    if h == 0 {
        return Err(Error::InvalidParameter("h must be >= 1".into()));
    }
    let ha = iterated_sumset(a, h)?;
    let mut members: Vec<Vec<u32>> = Vec::with_capacity(ha.len());
    for s in ha.iter() {
        let row = lexmin_row(a, s, h)
            .expect("every sum in hA has at least one representing multiset");
        members.push(row);
    }
    let fam = MultisetFamily::new(a.clone(), h, members)?;
    debug_assert_eq!(fam.len(), ha.len(), "representatives must be distinct");
    Ok(fam)
}

/// Result of checking the shadow identity for one set and arity.
#[derive(Clone, Debug, serde::Serialize)]
pub struct ShadowCheck {
    /// `|lexmin_embedding(A, h)| = |hA|`.
    pub upper_size: u64,
    /// `|lexmin_embedding(A, h-1)| = |(h-1)A|`.
    pub lower_size: u64,
    /// Size of the shadow of the upper family.
    pub shadow_size: u64,
    /// Shadow of the upper family equals the lower family exactly.
    pub holds: bool,
}

/// Checks that the shadow of the canonical embedding of `hA` equals the
/// canonical embedding of `(h-1)A` (requires `h >= 2`).
pub fn verify_shadow_identity(a: &PointSet, h: u32) -> Result<ShadowCheck> {
    if h < 2 {
        return Err(Error::InvalidParameter("shadow identity needs h >= 2".into()));
    }
    let upper = lexmin_embedding(a, h)?;
    let lower = lexmin_embedding(a, h - 1)?;
    let shadow = upper.shadow()?;
    Ok(ShadowCheck {
        upper_size: upper.len() as u64,
        lower_size: lower.len() as u64,
        shadow_size: shadow.len() as u64,
        holds: shadow == lower,
    })
}

/// Lex-min tuple embeddings of `3A` and `2A` and the projection facts
/// relating them.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TupleEmbedding {
    /// `|3A|` (one triple per sum).
    pub triple_count: u64,
    /// `|2A|` (one pair per sum).
    pub pair_count: u64,
    /// Sizes of the three coordinate projections of the triple set.
    pub projection_sizes: [u64; 3],
    /// All three projections land inside the pair set.
    pub projections_contained: bool,
    /// `|3A|^2 <= |p12| * |p13| * |p23|` (Loomis–Whitney on the embedding).
    pub lw_holds: bool,
}

fn lexmin_pairs(a: &PointSet) -> Result<Vec<[u32; 2]>> {
    let two = iterated_sumset(a, 2)?;
    let d = a.dim();
    let mut target = vec![0i64; d];
    let mut out = Vec::with_capacity(two.len());
    'sums: for s in two.iter() {
        for i in 0..a.len() {
            sub_canonical(a, s, a.row(i), &mut target);
            if let Some(j) = a.index_of(&target) {
                if j >= i {
                    out.push([i as u32, j as u32]);
                    continue 'sums;
                }
            }
        }
        unreachable!("every sum in 2A has a representing pair");
    }
    Ok(out)
}

fn lexmin_triples(a: &PointSet) -> Result<Vec<[u32; 3]>> {
    let three = iterated_sumset(a, 3)?;
    let d = a.dim();
    let moduli = a.group().moduli().to_vec();
    let mut partial = vec![0i64; d];
    let mut target = vec![0i64; d];
    let mut out = Vec::with_capacity(three.len());
    'sums: for s in three.iter() {
        // lex-min triples are nondecreasing, so j from i and k from j suffice
        for i in 0..a.len() {
            let ri = a.row(i);
            for j in i..a.len() {
                let rj = a.row(j);
                for c in 0..d {
                    let m = moduli[c];
                    let v = ri[c] + rj[c];
                    partial[c] = if m != 0 { v.rem_euclid(m) } else { v };
                }
                sub_canonical(a, s, &partial, &mut target);
                if let Some(k) = a.index_of(&target) {
                    if k >= j {
                        out.push([i as u32, j as u32, k as u32]);
                        continue 'sums;
                    }
                }
            }
        }
        unreachable!("every sum in 3A has a representing triple");
    }
    Ok(out)
}

/// Builds the lex-min tuple embeddings of `3A` and `2A`, projects the triple
/// set onto its three coordinate pairs, and checks that each projection lies
/// in the pair set and that the Loomis–Whitney inequality holds.
pub fn tuple_embedding_projections(a: &PointSet) -> Result<TupleEmbedding> {
    let triples = lexmin_triples(a)?;
    let pairs = lexmin_pairs(a)?;
    let pair_set: BTreeSet<[u32; 2]> = pairs.iter().copied().collect();
    let mut proj: [BTreeSet<[u32; 2]>; 3] = Default::default();
    for &[x, y, z] in &triples {
        proj[0].insert([x, y]);
        proj[1].insert([x, z]);
        proj[2].insert([y, z]);
    }
    let projections_contained = proj.iter().all(|p| p.is_subset(&pair_set));
    let sizes = [proj[0].len() as u64, proj[1].len() as u64, proj[2].len() as u64];
    let lhs = (triples.len() as u128).pow(2);
    let rhs = sizes.iter().map(|&s| s as u128).product::<u128>();
    Ok(TupleEmbedding {
        triple_count: triples.len() as u64,
        pair_count: pairs.len() as u64,
        projection_sizes: sizes,
        projections_contained,
        lw_holds: lhs <= rhs,
    })
}

/// Triangle statistics of the pair graph of `A`, with the exact checks that
/// relate distinct triples to triangles and bound `|3A|` by `|2A|`.
#[derive(Clone, Debug, serde::Serialize)]
pub struct TriangleStats {
    /// Edges of the graph on `A` drawn from distinct-entry lex-min pairs.
    pub edge_count: u64,
    /// Triangles in that graph.
    pub triangle_count: u64,
    /// Lex-min triples with all entries distinct.
    pub distinct_triple_count: u64,
    /// Lex-min pairs with distinct entries (equals `edge_count`).
    pub distinct_pair_count: u64,
    /// Every all-distinct triple spans a triangle: count comparison.
    pub triples_within_triangles: bool,
    /// Triples with a repeated entry number at most `2 |2A|`.
    pub repeats_within_pairs: bool,
    /// `|3A| <= (sqrt(2)/3) |2A|^{3/2} + 2 |2A|`, decided exactly.
    pub pair_bound_holds: bool,
}

/// Exact check of `s <= (sqrt(2)/3) c^{3/2} + 2c` for integer counts:
/// trivially true when `s <= 2c`, else square the remainder.
fn pair_bound_exact(s: u64, c: u64) -> bool {
    if s <= 2 * c {
        return true;
    }
    let rem = (s - 2 * c) as u128;
    (3 * rem).pow(2) <= 2 * (c as u128).pow(3)
}

/// All triangles of the distinct-entry pair graph of `A`, each as an
/// increasing index triple `u < v < w`, in lexicographic order.
pub fn triangle_list(a: &PointSet) -> Result<Vec<[u32; 3]>> {
    let pairs = lexmin_pairs(a)?;
    let n = a.len();
    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    for &[x, y] in &pairs {
        if x != y {
            adj[x as usize].push(y);
            adj[y as usize].push(x);
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    let mut out = Vec::new();
    for &[u, v] in &pairs {
        if u == v {
            continue;
        }
        let (lo, hi) = (u.min(v), u.max(v));
        let (li, lj) = (&adj[lo as usize], &adj[hi as usize]);
        let (mut p, mut q) = (0usize, 0usize);
        while p < li.len() && q < lj.len() {
            match li[p].cmp(&lj[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    if li[p] > hi {
                        out.push([lo, hi, li[p]]);
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
    }
    out.sort_unstable();
    Ok(out)
}

pub fn triangle_stats(a: &PointSet) -> Result<TriangleStats> {
    let triples = lexmin_triples(a)?;
    let pairs = lexmin_pairs(a)?;
    let n = a.len();

    let mut adj: Vec<Vec<u32>> = vec![Vec::new(); n];
    let mut edge_count = 0u64;
    for &[x, y] in &pairs {
        if x != y {
            adj[x as usize].push(y);
            adj[y as usize].push(x);
            edge_count += 1;
        }
    }
    for l in &mut adj {
        l.sort_unstable();
    }

    // each triangle u < v < w is counted once, at its edge (u, v)
    let mut triangle_count = 0u64;
    for &[u, v] in &pairs {
        if u == v {
            continue;
        }
        let (li, lj) = (&adj[u as usize], &adj[v as usize]);
        let (mut p, mut q) = (0usize, 0usize);
        while p < li.len() && q < lj.len() {
            match li[p].cmp(&lj[q]) {
                std::cmp::Ordering::Less => p += 1,
                std::cmp::Ordering::Greater => q += 1,
                std::cmp::Ordering::Equal => {
                    if li[p] > v {
                        triangle_count += 1;
                    }
                    p += 1;
                    q += 1;
                }
            }
        }
    }

    let distinct_triple_count =
        triples.iter().filter(|t| t[0] != t[1] && t[1] != t[2]).count() as u64;
    let s = triples.len() as u64;
    let c = pairs.len() as u64;
    Ok(TriangleStats {
        edge_count,
        triangle_count,
        distinct_triple_count,
        distinct_pair_count: edge_count,
        triples_within_triangles: distinct_triple_count <= triangle_count,
        repeats_within_pairs: s - distinct_triple_count <= 2 * c,
        pair_bound_holds: pair_bound_exact(s, c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> PointSet {
        PointSet::from_ints(v).unwrap()
    }

    #[test]
    fn lexmin_prefers_small_entries() {
        let fam = lexmin_embedding(&ints(&[0, 1, 2]), 2).unwrap();
        // sums 0..4: {0,0},{0,1},{0,2} (beats {1,1}), {1,2}, {2,2}
        assert_eq!(
            fam.members(),
            &[vec![0, 0], vec![0, 1], vec![0, 2], vec![1, 2], vec![2, 2]]
        );
    }

    #[test]
    fn lexmin_of_maximal_set_is_every_multiset() {
        let fam = lexmin_embedding(&ints(&[1, 3, 9]), 3).unwrap();
        assert_eq!(fam.len(), 10); // C(3+3-1, 3)
        assert_eq!(fam.members()[0], vec![0, 0, 0]);
        assert_eq!(fam.members()[9], vec![2, 2, 2]);
    }

    #[test]
    fn lexmin_arity_one_is_identity() {
        let fam = lexmin_embedding(&ints(&[4, 7]), 1).unwrap();
        assert_eq!(fam.members(), &[vec![0], vec![1]]);
        assert!(lexmin_embedding(&ints(&[1]), 0).is_err());
    }

    #[test]
    fn shadow_examples() {
        let g = ints(&[1, 2, 3]);
        let one = MultisetFamily::new(g.clone(), 3, vec![vec![0, 0, 0]]).unwrap();
        assert_eq!(one.shadow().unwrap().members(), &[vec![0, 0]]);

        let mixed = MultisetFamily::new(g.clone(), 3, vec![vec![0, 1, 2]]).unwrap();
        assert_eq!(
            mixed.shadow().unwrap().members(),
            &[vec![0, 1], vec![0, 2], vec![1, 2]]
        );

        let two = ints(&[5, 6]);
        let all3: Vec<Vec<u32>> = vec![vec![0, 0, 0], vec![0, 0, 1], vec![0, 1, 1], vec![1, 1, 1]];
        let fam = MultisetFamily::new(two, 3, all3).unwrap();
        assert_eq!(
            fam.shadow().unwrap().members(),
            &[vec![0, 0], vec![0, 1], vec![1, 1]]
        );

        let flat = MultisetFamily::new(g, 1, vec![vec![0]]).unwrap();
        assert!(flat.shadow().is_err());
    }

    #[test]
    fn family_validation() {
        let g = ints(&[1, 2]);
        assert!(MultisetFamily::new(g.clone(), 2, vec![vec![1, 0]]).is_err());
        assert!(MultisetFamily::new(g.clone(), 2, vec![vec![0, 2]]).is_err());
        assert!(MultisetFamily::new(g.clone(), 2, vec![vec![0]]).is_err());
        let f = MultisetFamily::new(g, 2, vec![vec![0, 1], vec![0, 1]]).unwrap();
        assert_eq!(f.len(), 1);
    }

    #[test]
    fn shadow_identity_examples() {
        let c = verify_shadow_identity(&ints(&[0, 1, 2]), 3).unwrap();
        assert!(c.holds);
        assert_eq!((c.upper_size, c.lower_size, c.shadow_size), (7, 5, 5));

        let c = verify_shadow_identity(&ints(&[1, 3, 9]), 3).unwrap();
        assert!(c.holds);
        assert_eq!((c.upper_size, c.lower_size), (10, 6));

        let g = crate::group::GroupSpec::new(vec![5]).unwrap();
        let full = PointSet::from_elements(g, &[0, 1, 2, 3, 4].map(Element::scalar)).unwrap();
        let c = verify_shadow_identity(&full, 3).unwrap();
        assert!(c.holds);
        assert_eq!((c.upper_size, c.lower_size), (5, 5));

        assert!(verify_shadow_identity(&ints(&[0, 1]), 1).is_err());
    }

    #[test]
    fn tuple_embedding_examples() {
        let r = tuple_embedding_projections(&ints(&[0, 1])).unwrap();
        assert_eq!((r.triple_count, r.pair_count), (4, 3));
        assert!(r.projections_contained && r.lw_holds);
        assert_eq!(r.projection_sizes, [3, 3, 3]);

        let r = tuple_embedding_projections(&ints(&[1, 3, 9])).unwrap();
        assert_eq!((r.triple_count, r.pair_count), (10, 6));
        assert!(r.projections_contained && r.lw_holds);
        assert!(r.projection_sizes.iter().all(|&s| s <= 6));
        assert!(100 <= r.projection_sizes.iter().map(|&s| s as u128).product::<u128>());

        let r = tuple_embedding_projections(&ints(&[7])).unwrap();
        assert_eq!((r.triple_count, r.pair_count), (1, 1));
        assert!(r.projections_contained && r.lw_holds);
    }

    #[test]
    fn triangle_examples() {
        let t = triangle_stats(&ints(&[1, 3, 9])).unwrap();
        assert_eq!((t.edge_count, t.triangle_count), (3, 1));
        assert_eq!(t.distinct_triple_count, 1);
        assert!(t.triples_within_triangles && t.repeats_within_pairs && t.pair_bound_holds);

        let t = triangle_stats(&ints(&[0, 1])).unwrap();
        assert_eq!((t.edge_count, t.triangle_count), (1, 0));
        assert_eq!(t.distinct_triple_count, 0);
        assert!(t.triples_within_triangles);

        let t = triangle_stats(&ints(&[5])).unwrap();
        assert_eq!((t.edge_count, t.triangle_count, t.distinct_triple_count), (0, 0, 0));
    }

    #[test]
    fn triangle_list_matches_counts() {
        let t = triangle_list(&ints(&[1, 3, 9])).unwrap();
        assert_eq!(t, vec![[0, 1, 2]]);
        for v in [
            vec![0i64, 1, 2, 3],
            vec![1, 3, 9, 27],
            vec![0, 1, 4, 9, 16],
            vec![0, 2, 3, 7, 11, 20],
        ] {
            let a = ints(&v);
            let list = triangle_list(&a).unwrap();
            let stats = triangle_stats(&a).unwrap();
            assert_eq!(list.len() as u64, stats.triangle_count);
            assert!(list.windows(2).all(|w| w[0] < w[1]), "sorted and distinct");
            assert!(list.iter().all(|t| t[0] < t[1] && t[1] < t[2]));
        }
    }

    #[test]
    fn pair_bound_nontrivial_branch() {
        // maximal growth: |3A| = 220 > 2 * 55, so the squared branch decides
        let v: Vec<i64> = (0..10).map(|i| 3i64.pow(i)).collect();
        let t = triangle_stats(&ints(&v)).unwrap();
        assert!(t.pair_bound_holds);
        assert!(pair_bound_exact(220, 55));
        // and the bound is tight enough to fail for impossible counts
        assert!(!pair_bound_exact(1000, 55));
    }

    // The family order (lex on sorted index tuples) must coincide with the
    // decreasing-lex order on multiplicity vectors; verified exhaustively
    // for small ground sets and arities.
    #[test]
    fn order_agrees_with_multiplicity_vectors() {
        fn all_multisets(n: u32, k: u32) -> Vec<Vec<u32>> {
            let mut out = Vec::new();
            let mut cur = Vec::new();
            fn rec(n: u32, k: u32, start: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
                if cur.len() == k as usize {
                    out.push(cur.clone());
                    return;
                }
                for i in start..n {
                    cur.push(i);
                    rec(n, k, i, cur, out);
                    cur.pop();
                }
            }
            rec(n, k, 0, &mut cur, &mut out);
            out
        }
        for n in 1..=4u32 {
            for k in 1..=4u32 {
                let sets = all_multisets(n, k);
                let mult = |m: &[u32]| {
                    let mut v = vec![0u32; n as usize];
                    for &i in m {
                        v[i as usize] += 1;
                    }
                    v
                };
                for a in &sets {
                    for b in &sets {
                        assert_eq!(a.cmp(b), mult(b).cmp(&mult(a)), "n={n} k={k}");
                    }
                }
            }
        }
    }
}
