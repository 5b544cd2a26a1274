//! Acceptance gate: ten end-to-end criteria covering exact growth profiles,
//! the shadow identity, the extremal constructions, subset extraction, the
//! stability pipeline, and sweep determinism.
//!
//! Each test prints one `acceptance: criterion N (...): PASS` line on
//! success (visible with `--nocapture`); an assertion failure marks the
//! criterion as failed.

use std::time::Instant;
use sumsets::binom::{binom, binom_i128, invert_binom, invert_binom_exact};
use sumsets::bounds::{bound_suite, bound_suite_from_sizes};
use sumsets::construct::{
    gap_progression, gen_geometric, gen_higher, gen_random, gen_ruzsa, RealizedParams,
};
use sumsets::extract::{
    inverse_extract, plunnecke_large_subset, stability_analyze, InverseVariant, StabilityReport,
    Strategy,
};
use sumsets::multiset::{triangle_stats, tuple_embedding_projections, verify_shadow_identity};
use sumsets::sample::{derive_seed, random_point_set};
use sumsets::set::{is_dissociated, iterated_sumset, profile};
use sumsets::{rat, Element, GroupSpec, PointSet, Rat};

/// The subset of `{0, ..., width-1}` picked out by the bits of `mask`.
fn mask_set(mask: u32, width: u32) -> PointSet {
    let vals: Vec<i64> =
        (0..width).filter(|i| mask >> i & 1 == 1).map(|i| i as i64).collect();
    PointSet::from_ints(&vals).unwrap()
}

/// 500 seeded random sets cycling through Z, Z^2, and (Z/16)^2; shared by
/// criteria 3 and 4.
fn corpus() -> Vec<PointSet> {
    let groups = [
        GroupSpec::new(vec![0]).unwrap(),
        GroupSpec::free(2).unwrap(),
        GroupSpec::torus(16, 2).unwrap(),
    ];
    let windows = [40i64, 12, 0];
    (0..500u64)
        .map(|i| {
            let g = (i % 3) as usize;
            random_point_set(&groups[g], 8, windows[g], derive_seed(0xACCE97, i)).unwrap()
        })
        .collect()
}

#[test]
fn criterion_01_dissociated_exactness() {
    let t = Instant::now();
    let c = gen_geometric(10, 3).unwrap();
    let prof = profile(&c.set, 3).unwrap();
    assert_eq!(prof.sizes, vec![10, 55, 220]);
    assert!(is_dissociated(&c.set, 3).unwrap());
    assert!(t.elapsed().as_secs_f64() < 1.0, "took {:?}", t.elapsed());
    println!("acceptance: criterion 1 (dissociated exactness of the geometric progression): PASS");
}

#[test]
fn criterion_02_simplex_bound_and_equality_characterization() {
    let t = Instant::now();
    let mut sets = 0u32;
    for mask in 1u32..1 << 13 {
        let s = mask.count_ones();
        if s > 4 {
            continue;
        }
        let a = mask_set(mask, 13);
        let rep = bound_suite(&a, 3).unwrap();
        assert!(rep.all_hold, "bound violated on mask {mask:#015b}");
        let three = iterated_sumset(&a, 3).unwrap().len() as i128;
        let ceiling = binom_i128(s as i128 + 2, 3).unwrap();
        assert!(three <= ceiling);
        assert_eq!(
            three == ceiling,
            is_dissociated(&a, 3).unwrap(),
            "equality characterization failed on mask {mask:#015b}"
        );
        sets += 1;
    }
    assert_eq!(sets, 1092);
    assert!(t.elapsed().as_secs_f64() < 60.0, "took {:?}", t.elapsed());
    println!(
        "acceptance: criterion 2 (triple-sumset bound + equality iff 3-dissociated, {sets} sets): PASS"
    );
}

#[test]
fn criterion_03_shadow_identity_on_corpus() {
    let t = Instant::now();
    for (i, a) in corpus().iter().enumerate() {
        for h in 2..=4 {
            let c = verify_shadow_identity(a, h).unwrap();
            assert!(c.holds, "shadow identity failed: set {i}, h = {h}");
        }
    }
    assert!(t.elapsed().as_secs_f64() < 120.0, "took {:?}", t.elapsed());
    println!(
        "acceptance: criterion 3 (shadow identity, h in 2..=4, 500 random sets across 3 groups): PASS"
    );
}

#[test]
fn criterion_04_projections_and_triangles_on_corpus() {
    for (i, a) in corpus().iter().enumerate() {
        let te = tuple_embedding_projections(a).unwrap();
        assert!(te.projections_contained, "projection containment failed: set {i}");
        assert!(te.lw_holds, "Loomis-Whitney failed: set {i}");
        let ts = triangle_stats(a).unwrap();
        assert!(ts.triples_within_triangles, "triangle coverage failed: set {i}");
        assert!(ts.repeats_within_pairs, "repeat bound failed: set {i}");
        assert!(ts.pair_bound_holds, "pair-power bound failed: set {i}");
    }
    println!(
        "acceptance: criterion 4 (triple projections + triangle statistics on the same corpus): PASS"
    );
}

#[test]
fn criterion_05_construction_exactness() {
    let t = Instant::now();

    let p = gap_progression(2, 2).unwrap();
    assert_eq!(profile(&p, 3).unwrap().sizes, vec![4, 9, 16]);

    let r = gen_ruzsa(2, rat(8, 1)).unwrap();
    assert_eq!(r.set.len(), 26);
    assert!(iterated_sumset(&r.set, 3).unwrap().len() >= 512);

    for (m, p, k, seed) in [(2u64, rat(1, 1), rat(8, 1), 123u64), (3, rat(1, 2), rat(8, 1), 7)] {
        let c = gen_random(m, p, k, seed).unwrap();
        let n = match c.params {
            RealizedParams::Random { n, .. } => n,
            _ => unreachable!(),
        };
        assert_eq!(iterated_sumset(&c.set, 3).unwrap().len() as u64, n * n * n);
    }

    let hc = gen_higher(3, 2, rat(4, 1)).unwrap();
    assert_eq!(iterated_sumset(&hc.set, 4).unwrap().len(), 256);

    assert!(t.elapsed().as_secs_f64() < 60.0, "took {:?}", t.elapsed());
    println!("acceptance: criterion 5 (construction exactness: gap, ruzsa, random, higher): PASS");
}

#[test]
fn criterion_06_inverse_constructive_check() {
    let t = Instant::now();
    let mut sets = 0u64;
    let mut grid_points = 0u64;
    let mut applicable = 0u64;
    // Any admissible M needs M >= 1 (hypothesis) and 4 M^2 |2A| < |A|^2
    // (removal fraction below 1). In Z, |2A| >= 2|A| - 1, so with |A| <= 6
    // the second condition already fails at M = 1 and the admissible range
    // is empty; the grid below exercises the full classification machinery
    // and counts how many points ever satisfy the hypotheses.
    let m_grid: [Rat; 5] = [rat(1, 5), rat(2, 5), rat(3, 5), rat(4, 5), rat(1, 1)];
    for mask in 1u32..1 << 11 {
        if mask.count_ones() > 6 {
            continue;
        }
        let a = mask_set(mask, 11);
        let n = a.len() as i128;
        let s2 = iterated_sumset(&a, 2).unwrap().len() as i128;
        assert!(
            4 * s2 > n * n,
            "admissible M-range unexpectedly nonempty on mask {mask:#013b}"
        );
        for m in m_grid {
            let r = inverse_extract(&a, 2, m, InverseVariant::H2, Strategy::Exact, 20).unwrap();
            grid_points += 1;
            let (p, q) = (*m.numer(), *m.denom());
            let searched_expected = 4 * p * p * s2 < n * n * q * q;
            assert_eq!(r.searched, searched_expected, "mask {mask:#013b}, M = {m}");
            if r.hypothesis_holds {
                applicable += 1;
                assert!(
                    r.x_bound_holds && r.conclusion1_holds && r.conclusion2_holds,
                    "conclusions failed under the hypotheses: mask {mask:#013b}, M = {m}"
                );
            }
        }
        sets += 1;
    }
    assert_eq!(sets, 1485);
    assert_eq!(grid_points, 5 * sets);
    assert_eq!(applicable, 0);
    assert!(t.elapsed().as_secs_f64() < 600.0, "took {:?}", t.elapsed());
    println!(
        "acceptance: criterion 6 (inverse extraction over {sets} sets x 5-point M-grid; \
         applicable points: {applicable} — the hypotheses need far larger |A| than this \
         exhaustive scale, so the guarantee is vacuously satisfied and the \
         classification + search machinery is what the grid verifies): PASS"
    );
}

#[test]
fn criterion_07_plunnecke_large_subset() {
    let g = GroupSpec::new(vec![0]).unwrap();
    let deltas = [rat(3, 10), rat(1, 2), rat(7, 10)];
    for i in 0..200u64 {
        let a = random_point_set(&g, 10, 50, derive_seed(0x9EED, i)).unwrap();
        let n = a.len() as i128;
        let prof = profile(&a, 3).unwrap();
        let k = Rat::new(prof.sizes[1] as i128, n);
        for delta in deltas {
            for h in [2u32, 3] {
                let r = plunnecke_large_subset(&a, h, delta, Strategy::Exact, 20).unwrap();
                assert!(
                    Rat::from_integer(r.x_size as i128)
                        >= (rat(1, 1) - delta) * Rat::from_integer(n),
                    "|X| too small: set {i}, delta {delta}, h {h}"
                );
                let bound = k.pow(h as i32) / delta.pow(h as i32 - 1) * Rat::from_integer(n);
                assert!(
                    Rat::from_integer(r.sum_size as i128) <= bound,
                    "|X + hA| above the bound: set {i}, delta {delta}, h {h}"
                );
                assert!(r.bound_holds);
            }
        }
    }
    println!(
        "acceptance: criterion 7 (large-subset bound on 200 random sets x 3 deltas x 2 arities): PASS"
    );
}

#[test]
fn criterion_08_binomial_round_trip() {
    for i in 0..10_000u32 {
        let x = 1.0 + (1_000_000.0 - 1.0) * f64::from(i) / 9_999.0;
        let y = invert_binom(binom(x + 1.0, 2), 2).unwrap();
        assert!((y - x).abs() <= 1e-9 * x, "x = {x}, y = {y}");
    }
    println!("acceptance: criterion 8 (binomial inversion round-trip on 10^4 grid points): PASS");
}

fn check_stability_consistency(a: &PointSet, r: &StabilityReport, case: usize) {
    let prof = profile(a, 3).unwrap();
    assert_eq!(r.sizes.to_vec(), prof.sizes, "case {case}");
    let x = invert_binom(r.sizes[1] as f64, 2).unwrap();
    assert!((r.x - x).abs() <= 1e-9 * x, "case {case}");
    assert_eq!(r.x_exact, invert_binom_exact(r.sizes[1], 2), "case {case}");
    assert!((0.0..=1.0).contains(&r.delta), "case {case}");
    if let Some(de) = &r.delta_exact {
        assert!((de.float - r.delta).abs() < 1e-12, "case {case}");
    }
    if r.delta_clamped_from.is_some() {
        assert_eq!(r.delta, 0.0, "case {case}");
    }
    assert!(
        1 <= r.window[0] && r.window[0] <= r.window[1] && r.window[1] <= r.sizes[0],
        "case {case}: window {:?}",
        r.window
    );

    // rebuild Y from its reported rows and recompute everything about it
    let elems: Vec<Element> =
        r.y.iter().map(|row| Element::from_coords(row.clone())).collect();
    let y = PointSet::from_elements(a.group().clone(), &elems).unwrap();
    assert_eq!(y.len() as u64, r.y_size, "case {case}");
    let y2 = iterated_sumset(&y, 2).unwrap().len() as u64;
    let y3 = iterated_sumset(&y, 3).unwrap().len() as u64;
    assert_eq!(y3, r.y_triple_size, "case {case}");
    assert_eq!(
        r.y_capacity,
        binom_i128(r.y_size as i128 + 2, 3).unwrap() as u64,
        "case {case}"
    );
    assert!(
        (r.y_ratio - r.y_triple_size as f64 / r.y_capacity as f64).abs() < 1e-12,
        "case {case}"
    );
    assert_eq!(r.y_dissociated, r.y_triple_size == r.y_capacity, "case {case}");
    assert_eq!(
        r.size_window_holds,
        r.y_size >= r.window[0] && r.y_size <= r.window[1],
        "case {case}"
    );
    let suite = bound_suite_from_sizes(&[r.y_size, y2, y3]).unwrap();
    let simplex = suite.checks.iter().find(|c| c.name == "simplex_step_h2").unwrap();
    assert_eq!(r.y_simplex_consistent, simplex.holds, "case {case}");
}

#[test]
fn criterion_09_stability_pipeline() {
    // exact equality case: delta = 0 and Y = A attaining the ceiling
    let a = gen_geometric(10, 3).unwrap().set;
    let r = stability_analyze(&a, Strategy::Exact, 18).unwrap();
    assert_eq!(r.sizes, [10, 55, 220]);
    assert_eq!(r.x_exact, Some(10));
    assert_eq!(r.delta, 0.0);
    let de = r.delta_exact.clone().unwrap();
    assert_eq!((de.num, de.den), (0, 1));
    assert!(r.delta_within_theorem);
    assert_eq!(r.window, [10, 10]);
    assert_eq!(r.y_size, 10);
    let expected_rows: Vec<Vec<i64>> = a.iter().map(|row| row.to_vec()).collect();
    assert_eq!(r.y, expected_rows, "Y must be A itself");
    assert_eq!((r.y_triple_size, r.y_capacity), (220, 220));
    assert!(r.y_dissociated && r.size_window_holds);
    assert!(r.triple_bound_holds && r.y_simplex_consistent);
    check_stability_consistency(&a, &r, 0);

    // perturbed sets: every field populated and internally consistent
    let g = GroupSpec::new(vec![0]).unwrap();
    let mut cases = vec![
        PointSet::from_ints(&[1, 3, 9, 27, 81, 243, 729, 2187, 6561, 2]).unwrap(),
        PointSet::from_ints(&[0, 1, 2, 4, 8, 16, 32, 64, 128, 5]).unwrap(),
    ];
    for i in 0..30u64 {
        cases.push(random_point_set(&g, 12, 60, derive_seed(0x57AB, i)).unwrap());
    }
    for (ci, a) in cases.iter().enumerate() {
        let r = stability_analyze(a, Strategy::Exact, 18).unwrap();
        check_stability_consistency(a, &r, ci + 1);
    }
    println!(
        "acceptance: criterion 9 (stability pipeline; the asymptotic regime is not \
         desk-verifiable, so acceptance is property-based as stated: the exact delta = 0 \
         equality case plus full internal consistency on 32 perturbed sets): PASS"
    );
}

#[test]
fn criterion_10_sweep_sharpness_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let mk = |name: &str| {
        format!(
            "family = ruzsa\noutput = {name}\nzip = true\nm = [2, 3, 4, 5, 6]\nKparam = [4, 9, 16, 25, 36]\n"
        )
    };
    std::fs::write(dir.path().join("a.cfg"), mk("runa")).unwrap();
    std::fs::write(dir.path().join("b.cfg"), mk("runb")).unwrap();
    for cfg in ["a.cfg", "b.cfg"] {
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_sumsets"))
            .args(["sweep", "-c", cfg])
            .current_dir(dir.path())
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }

    let csv_a = std::fs::read(dir.path().join("runa.csv")).unwrap();
    let csv_b = std::fs::read(dir.path().join("runb.csv")).unwrap();
    assert_eq!(csv_a, csv_b, "CSV bytes must be identical across runs");

    let parse = |name: &str| -> Vec<serde_json::Value> {
        std::fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .map(|l| {
                let mut v: serde_json::Value = serde_json::from_str(l).unwrap();
                v.as_object_mut().unwrap().remove("wall_time_ms").expect("wall time present");
                v
            })
            .collect()
    };
    let ra = parse("runa.jsonl");
    let rb = parse("runb.jsonl");
    assert_eq!(ra, rb, "JSON records must be identical up to wall time");
    assert_eq!(ra.len(), 5);
    for r in &ra {
        let rho = r["rho"][0].as_f64().unwrap();
        assert!(rho > 0.0 && rho <= 1.0 + 1e-12, "rho_2 = {rho}");
        let s = r["sizes"].as_array().unwrap();
        let (s2, s3) = (s[1].as_u64().unwrap() as u128, s[2].as_u64().unwrap() as u128);
        assert!(s3 * s3 <= s2 * s2 * s2, "rho_2 <= 1 must hold exactly");
        assert_eq!(r["bounds_ok"], true);
    }
    println!(
        "acceptance: criterion 10 (ruzsa sweep m in 2..=6: rho_2 in (0,1] on every record, \
         byte-identical CSV and wall-time-free JSON equality across two runs): PASS"
    );
}
