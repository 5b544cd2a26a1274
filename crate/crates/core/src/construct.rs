//! Extremal families: sets whose growth profiles sit on (or near) the
//! boundaries of the growth inequalities.
//!
//! - [`gen_geometric`]: geometric progressions, fully dissociated at every
//!   arity — the equality case of the simplex bounds.
//! - [`gen_ruzsa`]: a small cube plus three long axis splines in `Z^3` —
//!   small doubling, huge tripling.
//! - [`gen_random`]: a random dense subset of a subgroup plus three full
//!   coordinate lines in `(Z/n)^3` — the randomized sharpness witness.
//! - [`gen_gap`]: the cube construction with the progression replaced by a
//!   gapped digit set, giving intermediate growth at every level.
//! - [`gen_higher`]: the (h+1)-dimensional torus version whose (h+1)-fold
//!   sumset is the whole group, used for the arity-h inequalities.
//!
//! Every generator returns the realized parameters alongside the set so
//! sweeps and sidecar files record exactly what was built.

use crate::error::{Error, Result};
use crate::exact::{self, RatRepr};
use crate::group::{Element, GroupSpec, MAX_COORD};
use crate::sample::derive_seed;
use crate::set::PointSet;
use crate::Rat;
use num::bigint::BigInt;
use num::rational::BigRational;
use num::ToPrimitive;

/// Hard cap on generated set / membership-universe sizes, to keep absurd
/// parameter combinations from allocating without bound.
const MAX_GENERATED: u128 = 2_000_000;

/// A generated set together with the parameters actually realized.
#[derive(Clone, Debug)]
pub struct Construction {
    pub set: PointSet,
    pub params: RealizedParams,
}

/// Realized generator parameters, serialized as the sidecar record.
#[derive(Clone, Debug, serde::Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum RealizedParams {
    Geometric { n: u32, base: i64, size: u64 },
    Ruzsa {
        m: u64,
        kparam: RatRepr,
        spline_target: f64,
        spline_len: u64,
        size: u64,
    },
    Random {
        m: u64,
        p: RatRepr,
        kparam: RatRepr,
        seed: u64,
        n: u64,
        dense_size: u64,
        size: u64,
    },
    Gap {
        k: u64,
        d: u32,
        kparam: RatRepr,
        base: u64,
        progression_size: u64,
        /// `|P+P| = (2k-1)^d` for the bare progression.
        progression_doubling: u64,
        spline_len: u64,
        size: u64,
    },
    Higher {
        h: u32,
        m: u64,
        alpha: RatRepr,
        n: u64,
        size: u64,
    },
}

impl RealizedParams {
    pub fn family(&self) -> &'static str {
        match self {
            RealizedParams::Geometric { .. } => "geometric",
            RealizedParams::Ruzsa { .. } => "ruzsa",
            RealizedParams::Random { .. } => "random",
            RealizedParams::Gap { .. } => "gap",
            RealizedParams::Higher { .. } => "higher",
        }
    }
}

fn check_positive_rat(name: &str, r: &Rat) -> Result<()> {
    if *r.numer() <= 0 {
        return Err(Error::InvalidParameter(format!("{name} must be positive, got {r}")));
    }
    Ok(())
}

fn big_u(n: u64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Geometric progression `{base^0, ..., base^{n-1}}` in `Z`; dissociated at
/// every arity when `base >= 3`... the canonical equality case.
pub fn gen_geometric(n: u32, base: i64) -> Result<Construction> {
    if n < 1 {
        return Err(Error::InvalidParameter("geometric: n must be >= 1".into()));
    }
    if base < 3 {
        return Err(Error::InvalidParameter(
            "geometric: base must be >= 3 (smaller bases collide at arity 2)".into(),
        ));
    }
    let mut vals = Vec::with_capacity(n as usize);
    let mut v: i64 = 1;
    for i in 0..n {
        vals.push(v);
        if i + 1 < n {
            v = v
                .checked_mul(base)
                .filter(|&w| w <= MAX_COORD)
                .ok_or_else(|| Error::Overflow(format!("geometric: base^{} exceeds i64 range", i + 1)))?;
        }
    }
    let set = PointSet::from_ints(&vals)?;
    let size = set.len() as u64;
    Ok(Construction {
        set,
        params: RealizedParams::Geometric { n, base, size },
    })
}

/// Cube `[0,m)^3` plus three axis splines of length `L = ceil(sqrt(K m^3))`
/// in `Z^3`. Requires `m <= K <= m^3`.
pub fn gen_ruzsa(m: u64, kparam: Rat) -> Result<Construction> {
    if m < 1 {
        return Err(Error::InvalidParameter("ruzsa: m must be >= 1".into()));
    }
    check_positive_rat("ruzsa: K", &kparam)?;
    let kb = exact::big(&kparam);
    let m3 = big_u(m).pow(3);
    if kb < big_u(m) || kb > m3 {
        return Err(Error::InvalidParameter(format!(
            "ruzsa: K must satisfy m <= K <= m^3, got K = {kparam}, m = {m}"
        )));
    }
    let target = &kb * &m3;
    // K >= m makes L >= m^2, so the splines always extend past the cube edge
    let spline_len = exact::ceil_root(&target, 2)
        .to_u64()
        .ok_or_else(|| Error::Overflow("ruzsa: spline length exceeds u64".into()))?;
    if spline_len as u128 > MAX_COORD as u128 || (m as u128).pow(3) + 3 * spline_len as u128 > MAX_GENERATED {
        return Err(Error::InvalidParameter("ruzsa: parameters too large".into()));
    }
    let g = GroupSpec::free(3)?;
    let mut elems = Vec::new();
    for x in 0..m as i64 {
        for y in 0..m as i64 {
            for z in 0..m as i64 {
                elems.push(Element::from_coords(vec![x, y, z]));
            }
        }
    }
    for t in 0..spline_len as i64 {
        elems.push(Element::from_coords(vec![t, 0, 0]));
        elems.push(Element::from_coords(vec![0, t, 0]));
        elems.push(Element::from_coords(vec![0, 0, t]));
    }
    let set = PointSet::from_elements(g, &elems)?;
    let size = set.len() as u64;
    Ok(Construction {
        set,
        params: RealizedParams::Ruzsa {
            m,
            kparam: RatRepr::of(&kparam),
            spline_target: exact::big_to_f64(&target).sqrt(),
            spline_len,
            size,
        },
    })
}

/// Random dense piece inside the subgroup `{0, n/m, 2n/m, ...}^3` of
/// `(Z/n)^3` plus the three full coordinate lines, where `n` is the least
/// multiple of `m` with `n^2 >= p K m^3`. Requires `0 < p <= 1` and
/// `m/p <= K <= p m^3`.
///
/// Membership of each subgroup point is decided by a pinned stateless rule:
/// include index `i` iff `splitmix(seed, i) < floor(p * 2^64)`, so realized
/// sets are reproducible and each decision is independent of the others.
pub fn gen_random(m: u64, p: Rat, kparam: Rat, seed: u64) -> Result<Construction> {
    if m < 1 {
        return Err(Error::InvalidParameter("random: m must be >= 1".into()));
    }
    check_positive_rat("random: p", &p)?;
    check_positive_rat("random: K", &kparam)?;
    let pb = exact::big(&p);
    if pb > big_u(1) {
        return Err(Error::InvalidParameter("random: p must be in (0, 1]".into()));
    }
    let kb = exact::big(&kparam);
    let m3 = big_u(m).pow(3);
    if kb < big_u(m) / &pb || kb > &pb * &m3 {
        return Err(Error::InvalidParameter(format!(
            "random: K must satisfy m/p <= K <= p m^3, got K = {kparam}, m = {m}, p = {p}"
        )));
    }
    let n = exact::ceil_sqrt_multiple(&(&pb * &kb * &m3), m)?;
    if n < 2 || n as u128 > MAX_COORD as u128 {
        return Err(Error::InvalidParameter(format!("random: modulus n = {n} out of range")));
    }
    if (m as u128).pow(3) + 3 * n as u128 > MAX_GENERATED {
        return Err(Error::InvalidParameter("random: parameters too large".into()));
    }
    let g = GroupSpec::torus(n as i64, 3)?;
    let q = (n / m) as i64;

    // exact inclusion threshold floor(p * 2^64); p = 1 accepts everything
    let threshold: u128 = ((BigInt::from(*p.numer()) << 64u32) / BigInt::from(*p.denom()))
        .to_u128()
        .expect("p <= 1 keeps the threshold within 2^64");
    let mut elems = Vec::new();
    let mut dense = 0u64;
    for a0 in 0..m {
        for a1 in 0..m {
            for a2 in 0..m {
                let idx = (a0 * m + a1) * m + a2;
                if (derive_seed(seed, idx) as u128) < threshold {
                    dense += 1;
                    elems.push(Element::from_coords(vec![
                        a0 as i64 * q,
                        a1 as i64 * q,
                        a2 as i64 * q,
                    ]));
                }
            }
        }
    }
    for t in 0..n as i64 {
        elems.push(Element::from_coords(vec![t, 0, 0]));
        elems.push(Element::from_coords(vec![0, t, 0]));
        elems.push(Element::from_coords(vec![0, 0, t]));
    }
    let set = PointSet::from_elements(g, &elems)?;
    let size = set.len() as u64;
    Ok(Construction {
        set,
        params: RealizedParams::Random {
            m,
            p: RatRepr::of(&p),
            kparam: RatRepr::of(&kparam),
            seed,
            n,
            dense_size: dense,
            size,
        },
    })
}

/// The gapped digit progression `P = { sum x_i (3k)^i : 0 <= x_i < k }`
/// with `d` digits: `|hP| = (hk - h + 1)^d` exactly for all `h`.
pub fn gap_progression(k: u64, d: u32) -> Result<PointSet> {
    if k < 1 || d < 1 {
        return Err(Error::InvalidParameter("gap: need k >= 1 and d >= 1".into()));
    }
    let base = 3 * k;
    let count = (k as u128).pow(d);
    if count > MAX_GENERATED {
        return Err(Error::InvalidParameter("gap: k^d too large".into()));
    }
    // largest element is (k-1) * ((3k)^d - 1) / (3k - 1) < (3k)^d
    let mut top: i64 = 1;
    for _ in 0..d {
        top = top
            .checked_mul(base as i64)
            .filter(|&v| v <= MAX_COORD / 3)
            .ok_or_else(|| Error::Overflow("gap: (3k)^d exceeds coordinate range".into()))?;
    }
    let mut vals = Vec::with_capacity(count as usize);
    let mut digits = vec![0u64; d as usize];
    loop {
        let mut v: i64 = 0;
        let mut place: i64 = 1;
        for &x in &digits {
            v += x as i64 * place;
            place *= base as i64;
        }
        vals.push(v);
        // odometer over digit vectors
        let mut pos = 0usize;
        loop {
            if pos == d as usize {
                return PointSet::from_ints(&vals);
            }
            digits[pos] += 1;
            if digits[pos] < k {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
}

/// Cube `P^3` of the gapped progression plus three axis splines of length
/// `L = ceil(sqrt(K k^{3d}))` in `Z^3`. Requires `k^d <= K <= k^{3d}`.
pub fn gen_gap(k: u64, d: u32, kparam: Rat) -> Result<Construction> {
    check_positive_rat("gap: K", &kparam)?;
    let p = gap_progression(k, d)?;
    let psize = p.len() as u64;
    let kb = exact::big(&kparam);
    let cube = big_u(psize).pow(3);
    if kb < big_u(psize) || kb > cube {
        return Err(Error::InvalidParameter(format!(
            "gap: K must satisfy k^d <= K <= k^(3d), got K = {kparam}, k^d = {psize}"
        )));
    }
    let target = &kb * &cube;
    let spline_len = exact::ceil_root(&target, 2)
        .to_u64()
        .ok_or_else(|| Error::Overflow("gap: spline length exceeds u64".into()))?;
    if spline_len as u128 > MAX_COORD as u128
        || (psize as u128).pow(3) + 3 * spline_len as u128 > MAX_GENERATED
    {
        return Err(Error::InvalidParameter("gap: parameters too large".into()));
    }
    let g = GroupSpec::free(3)?;
    let mut elems = Vec::new();
    for x in p.iter() {
        for y in p.iter() {
            for z in p.iter() {
                elems.push(Element::from_coords(vec![x[0], y[0], z[0]]));
            }
        }
    }
    for t in 0..spline_len as i64 {
        elems.push(Element::from_coords(vec![t, 0, 0]));
        elems.push(Element::from_coords(vec![0, t, 0]));
        elems.push(Element::from_coords(vec![0, 0, t]));
    }
    let set = PointSet::from_elements(g, &elems)?;
    let size = set.len() as u64;
    let progression_doubling = crate::set::iterated_sumset(&p, 2)?.len() as u64;
    Ok(Construction {
        set,
        params: RealizedParams::Gap {
            k,
            d,
            kparam: RatRepr::of(&kparam),
            base: 3 * k,
            progression_size: psize,
            // |P+P| = (2k-1)^d exactly; recorded so sweeps can audit it
            progression_doubling,
            spline_len,
            size,
        },
    })
}

/// Subgroup `(n/m) * [0,m)^{h+1}` of `(Z/n)^{h+1}` plus all `h+1` coordinate
/// lines, where `n^h = alpha m^{h+1}` exactly (errors unless that root is an
/// integer multiple of `m`). Requires `m^{h-1} <= alpha <= m^{h^2-1}`.
pub fn gen_higher(h: u32, m: u64, alpha: Rat) -> Result<Construction> {
    if h < 2 {
        return Err(Error::InvalidParameter("higher: h must be >= 2".into()));
    }
    if m < 1 {
        return Err(Error::InvalidParameter("higher: m must be >= 1".into()));
    }
    check_positive_rat("higher: alpha", &alpha)?;
    let ab = exact::big(&alpha);
    let lo = exact::pow(&big_u(m), h - 1);
    let hi = exact::pow(&big_u(m), h * h - 1);
    if ab < lo || ab > hi {
        return Err(Error::InvalidParameter(format!(
            "higher: alpha must satisfy m^(h-1) <= alpha <= m^(h^2-1), got alpha = {alpha}"
        )));
    }
    let v = &ab * exact::pow(&big_u(m), h + 1); // = n^h, must be a perfect h-th power
    if !v.is_integer() {
        return Err(Error::InvalidParameter(format!(
            "higher: alpha * m^(h+1) = {v} is not an integer"
        )));
    }
    let root = exact::floor_root(&v, h);
    if exact::pow(&BigRational::from_integer(root.clone()), h) != v {
        return Err(Error::InvalidParameter(format!(
            "higher: alpha * m^(h+1) = {v} is not a perfect {h}-th power"
        )));
    }
    let n = root
        .to_u64()
        .ok_or_else(|| Error::Overflow("higher: modulus exceeds u64".into()))?;
    if n < 2 || n % m != 0 {
        return Err(Error::InvalidParameter(format!(
            "higher: required modulus n = {n} must be >= 2 and a multiple of m = {m}"
        )));
    }
    let dim = (h + 1) as usize;
    let points = (m as u128).checked_pow(h + 1).unwrap_or(u128::MAX);
    if n as u128 > MAX_COORD as u128 || points + dim as u128 * n as u128 > MAX_GENERATED {
        return Err(Error::InvalidParameter("higher: parameters too large".into()));
    }
    let g = GroupSpec::torus(n as i64, dim)?;
    let q = (n / m) as i64;
    let mut elems = Vec::new();
    let mut digits = vec![0u64; dim];
    'outer: loop {
        elems.push(Element::from_coords(
            digits.iter().map(|&x| x as i64 * q).collect(),
        ));
        let mut pos = 0usize;
        loop {
            if pos == dim {
                break 'outer;
            }
            digits[pos] += 1;
            if digits[pos] < m {
                break;
            }
            digits[pos] = 0;
            pos += 1;
        }
    }
    for i in 0..dim {
        for t in 0..n as i64 {
            let mut c = vec![0i64; dim];
            c[i] = t;
            elems.push(Element::from_coords(c));
        }
    }
    let set = PointSet::from_elements(g, &elems)?;
    let size = set.len() as u64;
    Ok(Construction {
        set,
        params: RealizedParams::Higher {
            h,
            m,
            alpha: RatRepr::of(&alpha),
            n,
            size,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::set::{is_dissociated, iterated_sumset, profile};

    fn r(n: i128, d: i128) -> Rat {
        Rat::new(n, d)
    }

    #[test]
    fn geometric_is_fully_dissociated() {
        let c = gen_geometric(10, 3).unwrap();
        let p = profile(&c.set, 3).unwrap();
        assert_eq!(p.sizes, vec![10, 55, 220]);
        assert!(is_dissociated(&c.set, 3).unwrap());
        assert_eq!(gen_geometric(1, 3).unwrap().set.len(), 1);
        assert!(gen_geometric(0, 3).is_err());
        assert!(gen_geometric(5, 2).is_err());
        assert!(gen_geometric(41, 3).is_err()); // 3^40 overflows the safe range
    }

    #[test]
    fn ruzsa_small_doubling_large_tripling() {
        let c = gen_ruzsa(2, r(8, 1)).unwrap();
        match c.params {
            RealizedParams::Ruzsa { spline_len, size, .. } => {
                assert_eq!(spline_len, 8);
                assert_eq!(size, 26);
            }
            _ => unreachable!(),
        }
        let p = profile(&c.set, 3).unwrap();
        // frozen from independent tuple enumeration
        assert_eq!(p.sizes, vec![26, 222, 932]);
        assert!(p.sizes[2] >= 512); // >= L^3
    }

    #[test]
    fn ruzsa_degenerate_and_invalid() {
        let c = gen_ruzsa(1, r(1, 1)).unwrap();
        assert_eq!(c.set.len(), 1);
        assert!(gen_ruzsa(2, r(1, 1)).is_err()); // K < m
        assert!(gen_ruzsa(2, r(9, 1)).is_err()); // K > m^3
        assert!(gen_ruzsa(0, r(1, 1)).is_err());
    }

    #[test]
    fn random_full_density_matches_higher_at_arity_two() {
        let a = gen_random(2, r(1, 1), r(8, 1), 123).unwrap();
        match a.params {
            RealizedParams::Random { n, dense_size, size, .. } => {
                assert_eq!(n, 8);
                assert_eq!(dense_size, 8);
                assert_eq!(size, 26);
            }
            _ => unreachable!(),
        }
        let b = gen_higher(2, 2, r(8, 1)).unwrap();
        assert_eq!(a.set, b.set);
        // three full lines alone already sum to the whole group
        assert_eq!(iterated_sumset(&a.set, 3).unwrap().len(), 512);
    }

    #[test]
    fn random_is_deterministic_and_stays_in_subgroup() {
        let p = r(1, 2);
        let k = r(8, 1);
        let a = gen_random(3, p, k, 5).unwrap();
        let b = gen_random(3, p, k, 5).unwrap();
        assert_eq!(a.set, b.set);
        let (n, q) = match a.params {
            RealizedParams::Random { n, .. } => (n, n / 3),
            _ => unreachable!(),
        };
        assert_eq!(n, 12); // least multiple of 3 with n^2 >= 108
        for row in a.set.iter() {
            let on_line = row.iter().filter(|&&c| c != 0).count() <= 1;
            let in_subgroup = row.iter().all(|&c| c % q as i64 == 0);
            assert!(on_line || in_subgroup);
        }
        // third sumset covers the whole torus regardless of the dense piece
        assert_eq!(iterated_sumset(&a.set, 3).unwrap().len() as u64, n * n * n);
        // different seeds realize different dense pieces (with these params)
        let c = gen_random(3, p, k, 6).unwrap();
        assert_ne!(a.set, c.set);
    }

    #[test]
    fn random_rejects_bad_parameters() {
        assert!(gen_random(2, r(3, 2), r(8, 1), 1).is_err()); // p > 1
        assert!(gen_random(2, r(1, 2), r(2, 1), 1).is_err()); // K < m/p
        assert!(gen_random(2, r(1, 2), r(5, 1), 1).is_err()); // K > p m^3
    }

    #[test]
    fn gap_progression_growth_is_exact() {
        let p = gap_progression(2, 2).unwrap();
        assert_eq!(p.elements().iter().map(|e| e.coords()[0]).collect::<Vec<_>>(), vec![0, 1, 6, 7]);
        let prof = profile(&p, 3).unwrap();
        assert_eq!(prof.sizes, vec![4, 9, 16]);

        // |hP| = (hk - h + 1)^d across a small grid
        for k in 1..=4u64 {
            for d in 1..=3u32 {
                let p = gap_progression(k, d).unwrap();
                for h in 1..=3u32 {
                    let expect = (h as u64 * k - h as u64 + 1).pow(d);
                    let got = iterated_sumset(&p, h).unwrap().len() as u64;
                    assert_eq!(got, expect, "k={k} d={d} h={h}");
                }
            }
        }
    }

    #[test]
    fn gap_cube_with_splines() {
        let c = gen_gap(2, 2, r(4, 1)).unwrap();
        match c.params {
            RealizedParams::Gap { spline_len, progression_size, size, .. } => {
                assert_eq!(progression_size, 4);
                assert_eq!(spline_len, 16); // ceil(sqrt(4 * 64))
                assert_eq!(size, 100); // 64 cube points + 3 * 12 new spline points
            }
            _ => unreachable!(),
        }
        assert!(gen_gap(2, 2, r(3, 1)).is_err()); // K < k^d
        assert!(gen_gap(2, 2, r(65, 1)).is_err()); // K > k^3d
    }

    #[test]
    fn higher_torus_reaches_full_group() {
        let c = gen_higher(3, 2, r(4, 1)).unwrap();
        match c.params {
            RealizedParams::Higher { n, size, .. } => {
                assert_eq!(n, 4);
                assert_eq!(size, 24);
            }
            _ => unreachable!(),
        }
        assert_eq!(iterated_sumset(&c.set, 4).unwrap().len(), 256);
    }

    #[test]
    fn higher_rejects_non_power_and_degenerate() {
        assert!(gen_higher(3, 2, r(5, 1)).is_err()); // 5*16 = 80 is not a cube
        assert!(gen_higher(1, 2, r(2, 1)).is_err()); // h < 2
        assert!(gen_higher(2, 1, r(1, 1)).is_err()); // n = 1 is degenerate
        assert!(gen_higher(2, 2, r(1, 1)).is_err()); // alpha < m^(h-1)
        assert!(gen_higher(2, 2, r(64, 1)).is_err()); // alpha > m^(h^2-1)
    }

    // Sums of h distinct coordinate lines fill their coordinate box: checked
    // by direct enumeration for the h = 3 witness.
    #[test]
    fn higher_lines_fill_boxes() {
        let c = gen_higher(3, 2, r(4, 1)).unwrap();
        let n = 4i64;
        // Y alone: the four coordinate lines
        let g = c.set.group().clone();
        let mut lines = Vec::new();
        for i in 0..4usize {
            for t in 0..n {
                let mut v = vec![0i64; 4];
                v[i] = t;
                lines.push(Element::from_coords(v));
            }
        }
        let y = PointSet::from_elements(g, &lines).unwrap();
        let y3 = iterated_sumset(&y, 3).unwrap();
        for (i, j, k) in [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)] {
            for a in 0..n {
                for b in 0..n {
                    for cc in 0..n {
                        let mut v = vec![0i64; 4];
                        v[i] = a;
                        v[j] = b;
                        v[k] = cc;
                        assert!(y3.contains(&v), "missing {:?}", v);
                    }
                }
            }
        }
    }

    #[test]
    fn sidecars_tag_their_family() {
        let c = gen_geometric(3, 3).unwrap();
        assert_eq!(c.params.family(), "geometric");
        let js = serde_json::to_value(&c.params).unwrap();
        assert_eq!(js["family"], "geometric");
        assert_eq!(js["n"], 3);
    }
}
