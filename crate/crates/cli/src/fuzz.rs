//! Randomized property fuzzing: every check is a proved theorem, so a single
//! violation is an implementation-bug signal and exits with code 1 after
//! greedily minimizing the witness set.

use crate::thread_pool;
use anyhow::{bail, Context};
use rayon::prelude::*;
use sumsets::bounds::bound_suite;
use sumsets::io::format_points;
use sumsets::multiset::{triangle_stats, tuple_embedding_projections, verify_shadow_identity};
use sumsets::sample::{derive_seed, random_point_set};
use sumsets::{GroupSpec, PointSet};

/// Parses a group description: whitespace-separated moduli, `0` meaning an
/// infinite coordinate (so `"0"` is the integers, `"16 16"` a 16x16 torus).
pub fn parse_group(desc: &str) -> anyhow::Result<GroupSpec> {
    let moduli: Vec<i64> = desc
        .split_whitespace()
        .map(|t| t.parse::<i64>().with_context(|| format!("bad modulus '{t}'")))
        .collect::<anyhow::Result<_>>()?;
    if moduli.is_empty() {
        bail!("group description is empty; pass moduli like \"0\" or \"16 16\"");
    }
    Ok(GroupSpec::new(moduli)?)
}

/// Runs every theorem-backed check on one set. Returns the name of the first
/// failing check, or `None` when all hold.
fn first_violation(a: &PointSet, max_h: u32) -> sumsets::Result<Option<String>> {
    let report = bound_suite(a, max_h)?;
    for c in &report.checks {
        if !c.holds {
            return Ok(Some(format!("bound {}", c.name)));
        }
    }
    for h in 2..=max_h.min(3) {
        if !verify_shadow_identity(a, h)?.holds {
            return Ok(Some(format!("shadow_identity_h{h}")));
        }
    }
    let te = tuple_embedding_projections(a)?;
    if !te.projections_contained {
        return Ok(Some("triple_projections_contained".into()));
    }
    if !te.lw_holds {
        return Ok(Some("triple_loomis_whitney".into()));
    }
    let ts = triangle_stats(a)?;
    if !ts.triples_within_triangles {
        return Ok(Some("triples_within_triangles".into()));
    }
    if !ts.repeats_within_pairs {
        return Ok(Some("repeats_within_pairs".into()));
    }
    if !ts.pair_bound_holds {
        return Ok(Some("triangle_pair_bound".into()));
    }
    Ok(None)
}

/// Shrinks a violating set by repeatedly dropping the first element whose
/// removal preserves the violation. Deterministic; never empties the set.
fn minimize_witness_by<F>(mut a: PointSet, check: F) -> sumsets::Result<(PointSet, String)>
where
    F: Fn(&PointSet) -> sumsets::Result<Option<String>>,
{
    let mut what = check(&a)?.expect("minimizer called on a non-violating set");
    'shrink: while a.len() > 1 {
        for drop in 0..a.len() {
            let kept: Vec<usize> = (0..a.len()).filter(|&i| i != drop).collect();
            let candidate = a.subset_by_indices(&kept)?;
            if let Some(v) = check(&candidate)? {
                a = candidate;
                what = v;
                continue 'shrink;
            }
        }
        break;
    }
    Ok((a, what))
}

/// Runs `trials` independent property checks on random sets in `group`.
/// Returns the process exit code: 0 when every check holds, 1 otherwise.
pub fn cmd_fuzz(
    group_desc: &str,
    trials: u64,
    size_max: usize,
    window: i64,
    seed: u64,
    max_h: u32,
    threads: Option<usize>,
) -> anyhow::Result<i32> {
    if trials < 1 {
        bail!("trials must be >= 1");
    }
    if size_max < 1 {
        bail!("size-max must be >= 1");
    }
    if window < 0 {
        bail!("window must be >= 0");
    }
    if max_h < 2 {
        bail!("max-h must be >= 2");
    }
    let group = parse_group(group_desc)?;
    let pool = thread_pool(threads)?;
    let failures: Vec<(u64, PointSet)> = pool.install(|| {
        (0..trials)
            .into_par_iter()
            .filter_map(|i| {
                let a = match random_point_set(&group, size_max, window, derive_seed(seed, i)) {
                    Ok(a) => a,
                    Err(_) => return None, // group/window combinations are pre-validated
                };
                match first_violation(&a, max_h) {
                    Ok(None) => None,
                    Ok(Some(_)) => Some((i, a)),
                    Err(_) => Some((i, a)), // engine error on a valid set is itself a bug
                }
            })
            .collect()
    });
    if let Some((trial, set)) = failures.into_iter().next() {
        let (witness, what) = minimize_witness_by(set, |s| first_violation(s, max_h))?;
        eprintln!("violation of {what} at trial {trial} (seed {seed}); minimized witness:");
        eprint!("{}", format_points(&witness));
        return Ok(1);
    }
    println!(
        "fuzz: {trials} trials in {group}, size <= {size_max}, window {window}, seed {seed}: all checks hold"
    );
    Ok(0)
}
