//! Property tests for the sumset engine against brute-force oracles.

use proptest::prelude::*;
use sumsets::group::{Element, GroupSpec};
use sumsets::set::{is_dissociated, iterated_sumset, profile, sumset, PointSet};
use std::collections::BTreeSet;

/// Brute force: enumerate all h-tuples and collect canonical sums.
fn brute_iterated(a: &PointSet, h: u32) -> BTreeSet<Vec<i64>> {
    let g = a.group().clone();
    let elems = a.elements();
    let mut sums: BTreeSet<Vec<i64>> = BTreeSet::new();
    let mut stack: Vec<Element> = Vec::new();
    fn rec(
        g: &GroupSpec,
        elems: &[Element],
        h: u32,
        acc: Option<Element>,
        stack: &mut Vec<Element>,
        sums: &mut BTreeSet<Vec<i64>>,
    ) {
        if h == 0 {
            sums.insert(acc.expect("h >= 1").coords().to_vec());
            return;
        }
        for e in elems {
            let next = match &acc {
                None => e.clone(),
                Some(s) => g.add_canonical(s, e).unwrap(),
            };
            stack.push(e.clone());
            rec(g, elems, h - 1, Some(next), stack, sums);
            stack.pop();
        }
    }
    rec(&g, &elems, h, None, &mut stack, &mut sums);
    sums
}

fn small_group() -> impl Strategy<Value = GroupSpec> {
    prop_oneof![
        Just(GroupSpec::free(1).unwrap()),
        Just(GroupSpec::free(2).unwrap()),
        Just(GroupSpec::new(vec![12]).unwrap()),
        Just(GroupSpec::new(vec![0, 7]).unwrap()),
        Just(GroupSpec::new(vec![5, 9]).unwrap()),
    ]
}

fn set_in(g: GroupSpec, raw: Vec<i64>) -> PointSet {
    let elems: Vec<Element> = raw
        .chunks(g.dim())
        .filter(|c| c.len() == g.dim())
        .map(|c| Element::from_coords(c.to_vec()))
        .collect();
    let elems = if elems.is_empty() {
        vec![Element::from_coords(vec![0; g.dim()])]
    } else {
        elems
    };
    PointSet::from_elements(g, &elems).unwrap()
}

fn small_set() -> impl Strategy<Value = PointSet> {
    (small_group(), prop::collection::vec(-20i64..20, 1..8))
        .prop_map(|(g, raw)| set_in(g, raw))
}

fn set_pair() -> impl Strategy<Value = (PointSet, PointSet)> {
    (
        small_group(),
        prop::collection::vec(-20i64..20, 1..8),
        prop::collection::vec(-20i64..20, 1..8),
    )
        .prop_map(|(g, ra, rb)| (set_in(g.clone(), ra), set_in(g, rb)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn iterated_sumset_matches_brute_force(a in small_set(), h in 1u32..=4) {
        let fast = iterated_sumset(&a, h).unwrap();
        let slow = brute_iterated(&a, h);
        let fast_rows: BTreeSet<Vec<i64>> = fast.iter().map(|r| r.to_vec()).collect();
        prop_assert_eq!(fast_rows, slow);
    }

    #[test]
    fn sumset_commutes_and_sandwiches((a, b) in set_pair()) {
        let ab = sumset(&a, &b).unwrap();
        let ba = sumset(&b, &a).unwrap();
        prop_assert_eq!(&ab, &ba);
        // |A+B| >= max(|A|,|B|) holds in any group via translation
        prop_assert!(ab.len() >= a.len().max(b.len()));
        prop_assert!(ab.len() <= a.len() * b.len());
    }

    #[test]
    fn profile_sizes_are_monotone_in_torsion_free(xs in prop::collection::vec(-30i64..30, 1..7)) {
        let a = PointSet::from_ints(&xs).unwrap();
        let prof = profile(&a, 4).unwrap();
        // in Z, |hA| is nondecreasing in h
        for w in prof.sizes.windows(2) {
            prop_assert!(w[0] <= w[1]);
        }
        // Cauchy–Davenport style floor in Z: |hA| >= h(|A|-1) + 1
        for (i, &s) in prof.sizes.iter().enumerate() {
            let h = i as u64 + 1;
            prop_assert!(s > h * (a.len() as u64 - 1));
        }
    }

    #[test]
    fn doubling_sandwich(xs in prop::collection::vec(-40i64..40, 1..9)) {
        let a = PointSet::from_ints(&xs).unwrap();
        let two = iterated_sumset(&a, 2).unwrap();
        let n = a.len() as u64;
        prop_assert!(two.len() as u64 >= 2 * n - 1);
        prop_assert!(two.len() as u64 <= n * (n + 1) / 2);
    }
}

/// Exhaustive check on every A ⊆ {0..12} with |A| <= 4: h-dissociated
/// implies (h-1)-dissociated, and dissociation matches the tuple count.
#[test]
fn dissociated_chain_exhaustive() {
    let universe: Vec<i64> = (0..=12).collect();
    let n = universe.len();
    for mask in 1u32..(1 << n) {
        if mask.count_ones() > 4 {
            continue;
        }
        let vals: Vec<i64> = (0..n).filter(|&i| mask >> i & 1 == 1).map(|i| universe[i]).collect();
        let a = PointSet::from_ints(&vals).unwrap();
        let mut prev = true;
        for h in 2..=4u32 {
            let dis = is_dissociated(&a, h).unwrap();
            if dis {
                // h-dissociated forces every lower level to be dissociated
                assert!(prev, "set {vals:?} dissociated at h={h} but not below");
            }
            prev = dis;
        }
    }
}

#[test]
fn geometric_progressions_are_fully_dissociated() {
    for n in 1..=6u32 {
        let vals: Vec<i64> = (0..n).map(|i| 4i64.pow(i)).collect();
        let a = PointSet::from_ints(&vals).unwrap();
        for h in 1..=3u32 {
            assert!(is_dissociated(&a, h).unwrap());
        }
    }
}
