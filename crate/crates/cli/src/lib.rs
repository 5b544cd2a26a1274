//! Implementation of the `sumsets` command-line harness.
//!
//! The binary in `main.rs` parses arguments and maps the outcome of these
//! functions onto exit codes: `0` success, `1` a checked inequality was
//! reported violated (a bug signal, since every check is a theorem), `2`
//! usage or input errors.

pub mod fuzz;
pub mod sweep;

use anyhow::{bail, Context};
use std::path::{Path, PathBuf};
use sumsets::binom::binom_i128;
use sumsets::bounds::{bound_suite, exact_ratios, rho_ratios};
use sumsets::construct::{self, Construction};
use sumsets::exact::{parse_rat, RatRepr};
use sumsets::extract::{
    inverse_extract, stability_analyze, InverseVariant, Strategy, DEFAULT_STABILITY_CAP,
    DEFAULT_SUBSET_CAP,
};
use sumsets::io::{load_points, save_points, LoadOutcome};
use sumsets::multiset::{lexmin_embedding, verify_shadow_identity};
use sumsets::set::{is_dissociated, iterated_sumset, profile, PointSet};
use sumsets::Rat;

/// Environment variable that sets the default worker count for sweeps and
/// fuzzing (overridden by an explicit `threads` config key or flag).
pub const THREADS_ENV: &str = "SUMSETS_THREADS";

pub fn default_threads() -> Option<usize> {
    std::env::var(THREADS_ENV).ok().and_then(|v| v.parse().ok())
}

/// Builds a rayon pool with the requested (or environment-default) width.
pub fn thread_pool(threads: Option<usize>) -> anyhow::Result<rayon::ThreadPool> {
    let n = threads.or_else(default_threads).unwrap_or(0); // 0 = rayon default
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .context("building worker pool")
}

fn load(path: &Path) -> anyhow::Result<LoadOutcome> {
    let out = load_points(path).with_context(|| format!("reading {}", path.display()))?;
    if out.merged > 0 || out.reduced > 0 {
        eprintln!(
            "warning: {}: {} non-canonical rows reduced, {} duplicate rows merged",
            path.display(),
            out.reduced,
            out.merged
        );
    }
    Ok(out)
}

fn print_json<T: serde::Serialize>(value: &T) -> anyhow::Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

/// Parameters for `gen`, one optional slot per family knob.
#[derive(Clone, Debug, Default)]
pub struct GenParams {
    pub n: Option<u32>,
    pub base: Option<i64>,
    pub m: Option<u64>,
    pub kparam: Option<Rat>,
    pub p: Option<Rat>,
    pub seed: Option<u64>,
    pub k: Option<u64>,
    pub d: Option<u32>,
    pub h: Option<u32>,
    pub alpha: Option<Rat>,
}

fn require<T: Copy>(v: Option<T>, flag: &str, family: &str) -> anyhow::Result<T> {
    v.with_context(|| format!("family '{family}' requires {flag}"))
}

/// Builds the requested construction from CLI-style parameters.
pub fn build_construction(family: &str, p: &GenParams) -> anyhow::Result<Construction> {
    let c = match family {
        "geometric" => construct::gen_geometric(
            require(p.n, "--n", family)?,
            p.base.unwrap_or(3),
        )?,
        "ruzsa" => construct::gen_ruzsa(
            require(p.m, "--m", family)?,
            require(p.kparam, "--K", family)?,
        )?,
        "random" => construct::gen_random(
            require(p.m, "--m", family)?,
            require(p.p, "--p", family)?,
            require(p.kparam, "--K", family)?,
            p.seed.unwrap_or(0),
        )?,
        "gap" => construct::gen_gap(
            require(p.k, "--k", family)?,
            require(p.d, "--d", family)?,
            require(p.kparam, "--K", family)?,
        )?,
        "higher" => construct::gen_higher(
            require(p.h, "--h", family)?,
            require(p.m, "--m", family)?,
            require(p.alpha, "--alpha", family)?,
        )?,
        other => bail!("unknown family '{other}'"),
    };
    Ok(c)
}

/// `gen`: build a construction, write the `.pts` file and a JSON sidecar
/// (`<out>.json`) with every realized parameter.
pub fn cmd_gen(family: &str, params: &GenParams, out: &Path) -> anyhow::Result<i32> {
    let c = build_construction(family, params)?;
    save_points(&c.set, out).with_context(|| format!("writing {}", out.display()))?;
    let sidecar = sidecar_path(out);
    std::fs::write(&sidecar, serde_json::to_string_pretty(&c.params)?)
        .with_context(|| format!("writing {}", sidecar.display()))?;
    println!(
        "wrote {} ({} points in {}) and {}",
        out.display(),
        c.set.len(),
        c.set.group(),
        sidecar.display()
    );
    Ok(0)
}

pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".json");
    out.with_file_name(name)
}

// ---------------------------------------------------------------------------
// stats / check
// ---------------------------------------------------------------------------

#[derive(Debug, serde::Serialize)]
struct StatsReport {
    group: String,
    sizes: Vec<u64>,
    doubling: RatRepr,
    alpha: Vec<RatRepr>,
    rho: Vec<f64>,
}

/// `stats`: growth profile and ratios.
pub fn cmd_stats(input: &Path, max_h: u32, json: bool) -> anyhow::Result<i32> {
    let a = load(input)?.set;
    let prof = profile(&a, max_h)?;
    let (doubling, alpha) = exact_ratios(&prof);
    let report = StatsReport {
        group: a.group().to_string(),
        sizes: prof.sizes.clone(),
        doubling,
        alpha,
        rho: rho_ratios(&prof.sizes),
    };
    if json {
        print_json(&report)?;
    } else {
        println!("group: {}", report.group);
        for (i, s) in report.sizes.iter().enumerate() {
            println!("|{}A| = {s}", i + 1);
        }
        println!(
            "K = |2A|/|A| = {}/{} = {:.6}",
            report.doubling.num, report.doubling.den, report.doubling.float
        );
        for (i, r) in report.rho.iter().enumerate() {
            println!("rho_{} = {r:.6}", i + 2);
        }
    }
    Ok(0)
}

/// `check`: run every growth inequality; exit 1 with the witness on any
/// violation (which would indicate a bug, not new mathematics).
pub fn cmd_check(input: &Path, max_h: u32, json: bool) -> anyhow::Result<i32> {
    let a = load(input)?.set;
    let report = bound_suite(&a, max_h)?;
    if json {
        print_json(&report)?;
    } else {
        for c in &report.checks {
            println!(
                "{}: measured {} vs bound {:.4} -> {}",
                c.name,
                c.measured,
                c.bound.as_f64(),
                if c.holds { "ok" } else { "VIOLATED" }
            );
        }
    }
    if report.all_hold {
        Ok(0)
    } else {
        eprintln!("bound violation on input set (this is a bug): {}", render_set(&a));
        Ok(1)
    }
}

fn render_set(a: &PointSet) -> String {
    let rows: Vec<String> = a
        .iter()
        .map(|r| {
            r.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
        })
        .collect();
    format!("#group {:?} [{}]", a.group().moduli(), rows.join("; "))
}

// ---------------------------------------------------------------------------
// embed / dissoc
// ---------------------------------------------------------------------------

#[derive(Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
struct EmbedSummary {
    h: u32,
    /// `[|S|, |C|, |shadow of S|]` for `S = hA`, `C = (h-1)A` embeddings.
    sizes: [u64; 3],
    shadow_identity: bool,
}

/// `embed`: print the canonical multiset family of `hA`, the one of
/// `(h-1)A`, and the lower shadow, then a JSON summary (or only the summary
/// with `--json`).
pub fn cmd_embed(input: &Path, h: u32, json: bool) -> anyhow::Result<i32> {
    let a = load(input)?.set;
    let check = verify_shadow_identity(&a, h)?;
    if !json {
        let upper = lexmin_embedding(&a, h)?;
        let lower = lexmin_embedding(&a, h - 1)?;
        let shadow = upper.shadow()?;
        println!("# S = embedding of {h}A ({} members)", upper.len());
        for i in 0..upper.len() {
            println!("{}", upper.member_line(i));
        }
        println!("# C = embedding of {}A ({} members)", h - 1, lower.len());
        for i in 0..lower.len() {
            println!("{}", lower.member_line(i));
        }
        println!("# shadow of S ({} members)", shadow.len());
        for i in 0..shadow.len() {
            println!("{}", shadow.member_line(i));
        }
    }
    let summary = EmbedSummary {
        h,
        sizes: [check.upper_size, check.lower_size, check.shadow_size],
        shadow_identity: check.holds,
    };
    print_json(&summary)?;
    // the identity is a theorem; failing it is an implementation bug
    Ok(if check.holds { 0 } else { 1 })
}

#[derive(Debug, serde::Serialize)]
#[serde(rename_all = "camelCase")]
struct DissocReport {
    h: u32,
    size: u64,
    sumset_size: u64,
    ceiling: u64,
    dissociated: bool,
}

/// `dissoc`: compare `|hA|` against the full-simplex ceiling.
pub fn cmd_dissoc(input: &Path, h: u32, json: bool) -> anyhow::Result<i32> {
    let a = load(input)?.set;
    let dissociated = is_dissociated(&a, h)?;
    let ha = iterated_sumset(&a, h)?;
    let ceiling = binom_i128(a.len() as i128 + h as i128 - 1, h)
        .map(|c| c as u64)
        .unwrap_or(u64::MAX);
    let report = DissocReport {
        h,
        size: a.len() as u64,
        sumset_size: ha.len() as u64,
        ceiling,
        dissociated,
    };
    if json {
        print_json(&report)?;
    } else {
        println!(
            "|{h}A| = {} of {} possible: {}",
            report.sumset_size,
            report.ceiling,
            if dissociated { "dissociated" } else { "not dissociated" }
        );
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// extract / stability / plunnecke split
// ---------------------------------------------------------------------------

pub fn parse_variant(s: &str) -> anyhow::Result<InverseVariant> {
    Ok(match s {
        "h2" => InverseVariant::H2,
        "alpha" => InverseVariant::GeneralAlpha,
        "K" => InverseVariant::GeneralK,
        other => bail!("unknown variant '{other}' (expected h2 | alpha | K)"),
    })
}

pub fn parse_strategy(s: &str) -> anyhow::Result<Strategy> {
    Ok(match s {
        "exact" => Strategy::Exact,
        "greedy" => Strategy::Greedy,
        other => bail!("unknown strategy '{other}' (expected exact | greedy)"),
    })
}

/// `extract`: run the inverse pipeline and print the report.
pub fn cmd_extract(
    input: &Path,
    h: u32,
    m: &str,
    variant: &str,
    strategy: &str,
    max_exact: Option<usize>,
    json: bool,
) -> anyhow::Result<i32> {
    let a = load(input)?.set;
    let m = parse_rat(m)?;
    let variant = parse_variant(variant)?;
    let strategy = parse_strategy(strategy)?;
    let cap = max_exact.unwrap_or(DEFAULT_SUBSET_CAP);
    let report = inverse_extract(&a, h, m, variant, strategy, cap)?;
    if json {
        print_json(&report)?;
    } else {
        println!(
            "variant {} at M = {}/{}: delta = {:.6}",
            report.variant, report.m.num, report.m.den, report.delta
        );
        match (&report.reason, report.searched) {
            (None, _) => println!("hypotheses hold"),
            (Some(r), true) => println!("not applicable ({r}); split still computed"),
            (Some(r), false) => println!("not applicable ({r}); no split possible"),
        }
        if report.searched {
            println!(
                "|X| = {} (min {}), |X+{h}A| = {} (bounded: {})",
                report.x_size, report.min_x_size, report.x_sum_size, report.x_bound_holds
            );
            println!(
                "|Y| = {}, |{}Y| = {}, conclusion1 = {}, conclusion2 = {}",
                report.y_size,
                h + 1,
                report.y_sum_size,
                report.conclusion1_holds,
                report.conclusion2_holds
            );
        }
    }
    Ok(0)
}

/// `stability`: how close `|3A|` is to the simplex ceiling, and the best
/// nearly dissociated witness in the predicted window.
pub fn cmd_stability(
    input: &Path,
    strategy: &str,
    max_exact: Option<usize>,
    json: bool,
) -> anyhow::Result<i32> {
    let a = load(input)?.set;
    let strategy = parse_strategy(strategy)?;
    let cap = max_exact.unwrap_or(DEFAULT_STABILITY_CAP);
    let report = stability_analyze(&a, strategy, cap)?;
    if json {
        print_json(&report)?;
    } else {
        println!(
            "sizes {:?}, x = {:.4}, delta = {:.6} ({})",
            report.sizes,
            report.x,
            report.delta,
            if report.delta_within_theorem {
                "within the stability regime"
            } else {
                "outside the stability regime"
            }
        );
        println!(
            "window [{}, {}]: best |Y| = {} with |3Y| = {} of {} ({}ratio {:.4})",
            report.window[0],
            report.window[1],
            report.y_size,
            report.y_triple_size,
            report.y_capacity,
            if report.y_dissociated { "dissociated, " } else { "" },
            report.y_ratio
        );
        println!(
            "size window holds: {}, triple bound holds: {}",
            report.size_window_holds, report.triple_bound_holds
        );
    }
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sidecar_names_append_json() {
        assert_eq!(sidecar_path(Path::new("out.pts")), PathBuf::from("out.pts.json"));
        assert_eq!(
            sidecar_path(Path::new("dir/a.pts")),
            PathBuf::from("dir/a.pts.json")
        );
    }

    #[test]
    fn variant_and_strategy_names() {
        assert!(parse_variant("h2").is_ok());
        assert!(parse_variant("alpha").is_ok());
        assert!(parse_variant("K").is_ok());
        assert!(parse_variant("k").is_err());
        assert!(parse_strategy("exact").is_ok());
        assert!(parse_strategy("greedy").is_ok());
        assert!(parse_strategy("brute").is_err());
    }

    #[test]
    fn gen_requires_family_parameters() {
        let err = build_construction("ruzsa", &GenParams::default()).unwrap_err();
        assert!(err.to_string().contains("--m"));
        let err = build_construction("nope", &GenParams::default()).unwrap_err();
        assert!(err.to_string().contains("unknown family"));
    }
}
