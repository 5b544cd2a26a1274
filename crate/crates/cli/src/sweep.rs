//! Parameter sweeps: flat `key = value` config, cross-product or zipped
//! grids, parallel evaluation, and deterministic CSV + JSON-lines output.
//!
//! Determinism contract: the CSV is byte-identical across runs of the same
//! config; the JSON-lines records are too except for the `wall_time_ms`
//! field, which is the only timing-dependent value emitted.

use crate::{build_construction, thread_pool, GenParams};
use anyhow::{bail, Context};
use rayon::prelude::*;
use std::path::{Path, PathBuf};
use sumsets::bounds::{bound_suite_from_sizes, rho_ratios};
use sumsets::construct::RealizedParams;
use sumsets::exact::{parse_rat, RatRepr};
use sumsets::set::profile;

/// Parsed sweep configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub family: String,
    pub max_h: u32,
    /// Output stem: records go to `<output>.csv` and `<output>.jsonl`.
    pub output: PathBuf,
    /// Zip equal-length lists positionally instead of crossing them.
    pub zip: bool,
    pub threads: Option<usize>,
    /// Parameter name -> list of values (scalars are single-element lists).
    pub params: Vec<(String, Vec<String>)>,
}

/// Parameter columns per family, in CSV order. `Kparam` is the growth-target
/// parameter (the CLI spells it `--K`).
pub fn param_order(family: &str) -> anyhow::Result<&'static [&'static str]> {
    Ok(match family {
        "geometric" => &["n", "base"],
        "ruzsa" => &["m", "Kparam"],
        "random" => &["m", "p", "Kparam", "seed"],
        "gap" => &["k", "d", "Kparam"],
        "higher" => &["h", "m", "alpha"],
        other => bail!("unknown family '{other}'"),
    })
}

fn parse_value(raw: &str) -> Vec<String> {
    let raw = raw.trim();
    if let Some(inner) = raw.strip_prefix('[').and_then(|r| r.strip_suffix(']')) {
        inner
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::to_string)
            .collect()
    } else {
        vec![raw.to_string()]
    }
}

/// Parses the flat `key = value` config format. Lines starting with `#` and
/// blank lines are ignored; list values sit in brackets.
pub fn parse_config(text: &str) -> anyhow::Result<SweepConfig> {
    let mut family = None;
    let mut max_h = 3u32;
    let mut output = None;
    let mut zip = false;
    let mut threads = None;
    let mut params: Vec<(String, Vec<String>)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .with_context(|| format!("line {line}: expected `key = value`"))?;
        let key = key.trim();
        let values = parse_value(value);
        let scalar = || -> anyhow::Result<&str> {
            if let Some(inner) = values.first().filter(|_| values.len() == 1) {
                Ok(inner)
            } else {
                bail!("line {line}: key '{key}' takes a single value")
            }
        };
        match key {
            "family" => family = Some(scalar()?.to_string()),
            "max_h" => max_h = scalar()?.parse().with_context(|| format!("line {line}: bad max_h"))?,
            "output" => output = Some(PathBuf::from(scalar()?)),
            "zip" => zip = scalar()?.parse().with_context(|| format!("line {line}: bad zip flag"))?,
            "threads" => {
                threads = Some(scalar()?.parse().with_context(|| format!("line {line}: bad threads"))?)
            }
            _ => {
                if params.iter().any(|(k, _)| k == key) {
                    bail!("line {line}: duplicate key '{key}'");
                }
                params.push((key.to_string(), values));
            }
        }
    }
    let family = family.context("config is missing `family`")?;
    let output = output.context("config is missing `output`")?;
    if max_h < 2 {
        bail!("max_h must be >= 2");
    }
    let order = param_order(&family)?;
    for (k, _) in &params {
        if !order.contains(&k.as_str()) {
            bail!("parameter '{k}' is not used by family '{family}' (expected any of {order:?})");
        }
    }
    Ok(SweepConfig { family, max_h, output, zip, threads, params })
}

fn param_list<'a>(cfg: &'a SweepConfig, name: &str) -> &'a [String] {
    cfg.params
        .iter()
        .find(|(k, _)| k == name)
        .map(|(_, v)| v.as_slice())
        .unwrap_or(&[])
}

/// Config keys that name family parameters, in CSV column order. A key set
/// to an empty list still counts as present (it empties the grid but keeps
/// its CSV column).
fn present_params(cfg: &SweepConfig) -> anyhow::Result<Vec<&'static str>> {
    Ok(param_order(&cfg.family)?
        .iter()
        .copied()
        .filter(|n| cfg.params.iter().any(|(k, _)| k == n))
        .collect())
}

/// Expands the grid: one `Vec<(name, value)>` per point, in deterministic
/// order (first parameter varies slowest; zip mode pairs lists positionally).
pub fn expand_grid(cfg: &SweepConfig) -> anyhow::Result<Vec<Vec<(String, String)>>> {
    let present = present_params(cfg)?;
    let lists: Vec<&[String]> = present.iter().map(|n| param_list(cfg, n)).collect();
    if lists.is_empty() || lists.iter().any(|l| l.is_empty()) {
        return Ok(Vec::new());
    }
    if cfg.zip {
        let width = lists.iter().map(|l| l.len()).max().unwrap();
        for (name, l) in present.iter().zip(&lists) {
            if l.len() != 1 && l.len() != width {
                bail!(
                    "zip mode needs equal-length lists (or scalars): '{name}' has {} of {width}",
                    l.len()
                );
            }
        }
        let mut points = Vec::with_capacity(width);
        for i in 0..width {
            points.push(
                present
                    .iter()
                    .zip(&lists)
                    .map(|(n, l)| (n.to_string(), l[if l.len() == 1 { 0 } else { i }].clone()))
                    .collect(),
            );
        }
        return Ok(points);
    }
    let total: usize = lists.iter().map(|l| l.len()).product();
    let mut points = Vec::with_capacity(total);
    let mut idx = vec![0usize; lists.len()];
    loop {
        points.push(
            present
                .iter()
                .zip(&lists)
                .zip(&idx)
                .map(|((n, l), &i)| (n.to_string(), l[i].clone()))
                .collect(),
        );
        // odometer: last position varies fastest
        let mut pos = lists.len();
        loop {
            if pos == 0 {
                return Ok(points);
            }
            pos -= 1;
            idx[pos] += 1;
            if idx[pos] < lists[pos].len() {
                break;
            }
            idx[pos] = 0;
        }
    }
}

fn gen_params_from(point: &[(String, String)]) -> anyhow::Result<GenParams> {
    let mut g = GenParams::default();
    for (k, v) in point {
        let ctx = || format!("parameter {k} = {v}");
        match k.as_str() {
            "n" => g.n = Some(v.parse().with_context(ctx)?),
            "base" => g.base = Some(v.parse().with_context(ctx)?),
            "m" => g.m = Some(v.parse().with_context(ctx)?),
            "Kparam" => g.kparam = Some(parse_rat(v).with_context(ctx)?),
            "p" => g.p = Some(parse_rat(v).with_context(ctx)?),
            "seed" => g.seed = Some(v.parse().with_context(ctx)?),
            "k" => g.k = Some(v.parse().with_context(ctx)?),
            "d" => g.d = Some(v.parse().with_context(ctx)?),
            "h" => g.h = Some(v.parse().with_context(ctx)?),
            "alpha" => g.alpha = Some(parse_rat(v).with_context(ctx)?),
            other => bail!("unknown parameter '{other}'"),
        }
    }
    Ok(g)
}

/// One evaluated grid point.
#[derive(Debug, serde::Serialize)]
pub struct RunRecord {
    pub index: usize,
    pub family: String,
    /// Realized construction parameters (includes derived quantities).
    pub params: RealizedParams,
    pub sizes: Vec<u64>,
    pub doubling: RatRepr,
    /// `alpha_h = |hA| / |A|` for `h = 2..=max_h`.
    pub alpha: Vec<RatRepr>,
    /// `rho_h = |(h+1)A| / |hA|^{(h+1)/h}` for `h = 2..max_h`; always in (0,1].
    pub rho: Vec<f64>,
    pub bounds_ok: bool,
    /// Timing only; excluded from the determinism contract.
    pub wall_time_ms: f64,
}

fn evaluate_point(
    index: usize,
    family: &str,
    point: &[(String, String)],
    max_h: u32,
) -> anyhow::Result<Result<RunRecord, String>> {
    let started = std::time::Instant::now();
    let gp = gen_params_from(point)?; // malformed numbers are config errors
    let c = match build_construction(family, &gp) {
        Ok(c) => c,
        // a grid point violating family preconditions is skipped, not fatal
        Err(e) => return Ok(Err(format!("{e:#}"))),
    };
    let prof = profile(&c.set, max_h)?;
    let report = bound_suite_from_sizes(&prof.sizes)?;
    let (doubling, alpha) = sumsets::bounds::exact_ratios(&prof);
    Ok(Ok(RunRecord {
        index,
        family: family.to_string(),
        params: c.params,
        sizes: prof.sizes.clone(),
        doubling,
        alpha,
        rho: rho_ratios(&prof.sizes),
        bounds_ok: report.all_hold,
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    }))
}

fn csv_headers(cfg: &SweepConfig, present: &[String]) -> Vec<String> {
    let mut headers = vec!["family".to_string()];
    headers.extend(present.iter().cloned());
    for h in 1..=cfg.max_h {
        headers.push(match h {
            1 => "|A|".to_string(),
            _ => format!("|{h}A|"),
        });
    }
    headers.push("K".to_string());
    for h in 2..=cfg.max_h {
        headers.push(format!("alpha_{h}"));
    }
    for h in 2..cfg.max_h {
        headers.push(format!("rho_{h}"));
    }
    headers.push("bounds_ok".to_string());
    headers
}

fn csv_row(point: &[(String, String)], present: &[String], r: &RunRecord) -> Vec<String> {
    let mut row = vec![r.family.clone()];
    for name in present {
        let v = point
            .iter()
            .find(|(k, _)| k == name)
            .map(|(_, v)| v.clone())
            .unwrap_or_default();
        row.push(v);
    }
    for s in &r.sizes {
        row.push(s.to_string());
    }
    row.push(r.doubling.float.to_string());
    for a in &r.alpha {
        row.push(a.float.to_string());
    }
    for rho in &r.rho {
        row.push(rho.to_string());
    }
    row.push(r.bounds_ok.to_string());
    row
}

/// Runs a sweep config file end to end. Returns the process exit code.
pub fn cmd_sweep(config_path: &Path) -> anyhow::Result<i32> {
    let text = std::fs::read_to_string(config_path)
        .with_context(|| format!("reading {}", config_path.display()))?;
    let cfg = parse_config(&text)?;
    let points = expand_grid(&cfg)?;

    let pool = thread_pool(cfg.threads)?;
    let evaluated: Vec<anyhow::Result<Result<RunRecord, String>>> = pool.install(|| {
        points
            .par_iter()
            .enumerate()
            .map(|(i, p)| evaluate_point(i, &cfg.family, p, cfg.max_h))
            .collect()
    });

    let mut records: Vec<(usize, RunRecord)> = Vec::new();
    let mut skipped = 0usize;
    for (i, ev) in evaluated.into_iter().enumerate() {
        match ev? {
            Ok(r) => records.push((i, r)),
            Err(reason) => {
                skipped += 1;
                eprintln!("skipping grid point {i}: {reason}");
            }
        }
    }
    records.sort_by_key(|(i, _)| *i); // parallelism never reorders output

    if let Some(dir) = cfg.output.parent() {
        if !dir.as_os_str().is_empty() {
            std::fs::create_dir_all(dir)
                .with_context(|| format!("creating {}", dir.display()))?;
        }
    }
    let csv_path = cfg.output.with_extension("csv");
    let jsonl_path = cfg.output.with_extension("jsonl");

    let present: Vec<String> =
        present_params(&cfg)?.iter().map(|n| n.to_string()).collect();
    let mut w = csv::Writer::from_path(&csv_path)
        .with_context(|| format!("writing {}", csv_path.display()))?;
    w.write_record(csv_headers(&cfg, &present))?;
    for (i, r) in &records {
        w.write_record(csv_row(&points[*i], &present, r))?;
    }
    w.flush()?;

    let mut jsonl = String::new();
    for (_, r) in &records {
        jsonl.push_str(&serde_json::to_string(r)?);
        jsonl.push('\n');
    }
    std::fs::write(&jsonl_path, jsonl)
        .with_context(|| format!("writing {}", jsonl_path.display()))?;

    println!(
        "{} records ({} skipped) -> {}, {}",
        records.len(),
        skipped,
        csv_path.display(),
        jsonl_path.display()
    );
    Ok(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_scalars_lists_and_comments() {
        let cfg = parse_config(
            "# a sweep\nfamily = ruzsa\nm = [2, 3]\nKparam = 8\noutput = out/r\nmax_h = 4\n",
        )
        .unwrap();
        assert_eq!(cfg.family, "ruzsa");
        assert_eq!(cfg.max_h, 4);
        assert!(!cfg.zip);
        assert_eq!(
            cfg.params,
            vec![
                ("m".to_string(), vec!["2".to_string(), "3".to_string()]),
                ("Kparam".to_string(), vec!["8".to_string()]),
            ]
        );
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(parse_config("family = ruzsa\n").is_err()); // no output
        assert!(parse_config("output = o\nm = 2\n").is_err()); // no family
        assert!(parse_config("family = ruzsa\noutput = o\nwat = 3\n").is_err());
        assert!(parse_config("family = ruzsa\noutput = o\nm = 2\nm = 3\n").is_err());
        assert!(parse_config("family = ruzsa\noutput = o\nfamily_is mistyped\n").is_err());
        assert!(parse_config("family = nope\noutput = o\n").is_err());
    }

    #[test]
    fn cross_product_orders_first_param_slowest() {
        let cfg = parse_config(
            "family = ruzsa\noutput = o\nm = [2, 3]\nKparam = [8, 9, 10]\n",
        )
        .unwrap();
        let grid = expand_grid(&cfg).unwrap();
        assert_eq!(grid.len(), 6);
        let view: Vec<(String, String)> =
            grid.iter().map(|p| (p[0].1.clone(), p[1].1.clone())).collect();
        assert_eq!(view[0], ("2".to_string(), "8".to_string()));
        assert_eq!(view[1], ("2".to_string(), "9".to_string()));
        assert_eq!(view[3], ("3".to_string(), "8".to_string()));
    }

    #[test]
    fn zip_mode_pairs_lists_and_broadcasts_scalars() {
        let cfg = parse_config(
            "family = ruzsa\noutput = o\nzip = true\nm = [2, 3, 4]\nKparam = [4, 9, 16]\n",
        )
        .unwrap();
        let grid = expand_grid(&cfg).unwrap();
        assert_eq!(grid.len(), 3);
        assert_eq!(grid[1][0].1, "3");
        assert_eq!(grid[1][1].1, "9");

        let cfg = parse_config(
            "family = random\noutput = o\nzip = true\nm = 2\np = 0.5\nKparam = 8\nseed = [1, 2]\n",
        )
        .unwrap();
        let grid = expand_grid(&cfg).unwrap();
        assert_eq!(grid.len(), 2);
        assert_eq!(grid[0].len(), 4);

        let bad = parse_config(
            "family = ruzsa\noutput = o\nzip = true\nm = [2, 3]\nKparam = [4, 9, 16]\n",
        )
        .unwrap();
        assert!(expand_grid(&bad).is_err());
    }

    #[test]
    fn empty_list_empties_the_grid() {
        let cfg = parse_config("family = ruzsa\noutput = o\nm = []\nKparam = 8\n").unwrap();
        assert_eq!(expand_grid(&cfg).unwrap().len(), 0);
    }

    #[test]
    fn grid_points_become_gen_params() {
        let p = vec![
            ("m".to_string(), "2".to_string()),
            ("Kparam".to_string(), "8".to_string()),
        ];
        let g = gen_params_from(&p).unwrap();
        assert_eq!(g.m, Some(2));
        assert_eq!(g.kparam, Some(sumsets::rat(8, 1)));
        assert!(gen_params_from(&[("m".to_string(), "x".to_string())]).is_err());
    }
}
