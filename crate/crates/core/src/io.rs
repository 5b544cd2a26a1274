//! Plain-text point-set files (`.pts`).
//!
//! Format: the first non-blank line is the group directive
//! `#group n1 n2 ... nd` (0 marks a free coordinate); every following
//! non-blank line that does not start with `#` holds one element as `d`
//! whitespace-separated integers. Coordinates are reduced into canonical
//! range on load and duplicate rows are merged; the merge count is reported
//! so callers can warn about lossy inputs.

use crate::error::{Error, Result};
use crate::group::{Element, GroupSpec};
use crate::set::PointSet;
use std::fmt::Write as _;
use std::path::Path;

/// A parsed `.pts` file: the canonical set plus lossiness counters.
#[derive(Clone, Debug)]
pub struct LoadOutcome {
    pub set: PointSet,
    /// Rows that collided with an earlier row after canonical reduction.
    pub merged: usize,
    /// Rows whose coordinates needed reduction into canonical range.
    pub reduced: usize,
}

/// Parses `.pts` text. Errors carry 1-based line numbers.
pub fn parse_points(text: &str) -> Result<LoadOutcome> {
    let mut group: Option<GroupSpec> = None;
    let mut elems: Vec<Element> = Vec::new();
    let mut reduced = 0usize;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() {
            continue;
        }
        if group.is_none() {
            let moduli = trimmed.strip_prefix("#group").ok_or_else(|| Error::Parse {
                line,
                msg: "expected a `#group n1 ... nd` directive before any data".into(),
            })?;
            let parsed: std::result::Result<Vec<i64>, _> =
                moduli.split_whitespace().map(str::parse).collect();
            let moduli = parsed.map_err(|e| Error::Parse {
                line,
                msg: format!("bad group directive: {e}"),
            })?;
            group = Some(GroupSpec::new(moduli).map_err(|e| Error::Parse {
                line,
                msg: format!("bad group directive: {e}"),
            })?);
            continue;
        }
        if trimmed.starts_with('#') {
            continue;
        }
        let g = group.as_ref().expect("directive parsed first");
        let parsed: std::result::Result<Vec<i64>, _> =
            trimmed.split_whitespace().map(str::parse).collect();
        let coords = parsed.map_err(|e| Error::Parse {
            line,
            msg: format!("bad coordinate: {e}"),
        })?;
        if coords.len() != g.dim() {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} coordinates, got {}", g.dim(), coords.len()),
            });
        }
        if !g.is_canonical(&coords) {
            reduced += 1;
        }
        elems.push(Element::from_coords(coords));
    }
    let group = group.ok_or_else(|| Error::Parse {
        line: text.lines().count() + 1,
        msg: "missing `#group` directive".into(),
    })?;
    let (set, merged) = PointSet::from_elements_counting(group, &elems)?;
    Ok(LoadOutcome { set, merged, reduced })
}

/// Renders a set in `.pts` form (always canonical, so it reloads losslessly).
pub fn format_points(set: &PointSet) -> String {
    let mut out = String::new();
    out.push_str("#group");
    for m in set.group().moduli() {
        let _ = write!(out, " {m}");
    }
    out.push('\n');
    for row in set.iter() {
        let mut first = true;
        for c in row {
            if !first {
                out.push(' ');
            }
            let _ = write!(out, "{c}");
            first = false;
        }
        out.push('\n');
    }
    out
}

/// Loads a `.pts` file from disk.
pub fn load_points(path: &Path) -> Result<LoadOutcome> {
    parse_points(&std::fs::read_to_string(path)?)
}

/// Writes a set to disk in `.pts` form.
pub fn save_points(set: &PointSet, path: &Path) -> Result<()> {
    std::fs::write(path, format_points(set))?;
    Ok(())
}
