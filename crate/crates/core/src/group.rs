//! Groups of the form `Z^k x Z/n1 x ... x Z/nj` and their elements.
//!
//! A group is described by one modulus per coordinate: `0` means a copy of
//! `Z`, and `n >= 2` means `Z/nZ`. Elements are coordinate vectors stored in
//! canonical form: finite coordinates reduced into `[0, n)`, infinite ones
//! arbitrary `i64`. All set machinery downstream assumes canonical storage,
//! so the canonical form is established at every entry point.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::fmt;

/// Largest magnitude allowed for a coordinate entering an addition.
/// Two operands below this bound cannot overflow `i64` when added.
pub const MAX_COORD: i64 = i64::MAX / 2;

/// A finitely generated commutative group, one modulus per coordinate
/// (`0` = infinite cyclic, `n >= 2` = order-`n` cyclic).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct GroupSpec {
    moduli: Vec<i64>,
}

impl GroupSpec {
    /// Validates and builds a group. Moduli must be `0` or `>= 2`, and at
    /// least one coordinate is required.
    pub fn new(moduli: Vec<i64>) -> Result<Self> {
        if moduli.is_empty() {
            return Err(Error::InvalidParameter(
                "group needs at least one coordinate".into(),
            ));
        }
        for &m in &moduli {
            if m != 0 && m < 2 {
                return Err(Error::InvalidParameter(format!(
                    "modulus {m} is not 0 (infinite) or >= 2"
                )));
            }
        }
        Ok(GroupSpec { moduli })
    }

    /// The free abelian group `Z^d`.
    pub fn free(d: usize) -> Result<Self> {
        GroupSpec::new(vec![0; d])
    }

    /// The torus `(Z/nZ)^d`.
    pub fn torus(n: i64, d: usize) -> Result<Self> {
        GroupSpec::new(vec![n; d])
    }

    /// Number of coordinates.
    pub fn dim(&self) -> usize {
        self.moduli.len()
    }

    /// Per-coordinate moduli (`0` = infinite).
    pub fn moduli(&self) -> &[i64] {
        &self.moduli
    }

    /// True when every coordinate is finite.
    pub fn is_finite(&self) -> bool {
        self.moduli.iter().all(|&m| m != 0)
    }

    /// Group order when finite.
    pub fn order(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        let mut o: u128 = 1;
        for &m in &self.moduli {
            o = o.checked_mul(m as u128)?;
        }
        Some(o)
    }

    fn check_dim(&self, coords: &[i64]) -> Result<()> {
        if coords.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: coords.len(),
            });
        }
        Ok(())
    }

    /// Reduces a coordinate vector into canonical form in place:
    /// finite coordinates into `[0, n)`, infinite ones untouched.
    pub fn canonicalize_in_place(&self, coords: &mut [i64]) -> Result<()> {
        self.check_dim(coords)?;
        for (c, &m) in coords.iter_mut().zip(&self.moduli) {
            if m != 0 {
                *c = c.rem_euclid(m);
            }
        }
        Ok(())
    }

    /// Canonical form of an element given by arbitrary representatives.
    pub fn canonicalize(&self, elem: &Element) -> Result<Element> {
        let mut coords = elem.coords.clone();
        self.canonicalize_in_place(&mut coords)?;
        Ok(Element::from_coords(coords))
    }

    /// True when `coords` is already in canonical form for this group.
    pub fn is_canonical(&self, coords: &[i64]) -> bool {
        coords.len() == self.dim()
            && coords
                .iter()
                .zip(&self.moduli)
                .all(|(&c, &m)| m == 0 || (0..m).contains(&c))
    }

    /// Componentwise sum reduced to canonical form. Errors on dimension
    /// mismatch or (for infinite coordinates) on `i64` overflow.
    pub fn add_canonical(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check_dim(&x.coords)?;
        self.check_dim(&y.coords)?;
        let mut out = Vec::with_capacity(self.dim());
        for i in 0..self.dim() {
            let m = self.moduli[i];
            let s = x.coords[i]
                .checked_add(y.coords[i])
                .ok_or_else(|| Error::Overflow("coordinate sum exceeds i64".into()))?;
            out.push(if m != 0 { s.rem_euclid(m) } else { s });
        }
        Ok(Element::from_coords(out))
    }

    /// Coordinatewise lexicographic comparison of canonical representatives.
    /// This is the total order used for all deterministic tie-breaking.
    pub fn lex_compare(&self, x: &Element, y: &Element) -> Result<Ordering> {
        self.check_dim(&x.coords)?;
        self.check_dim(&y.coords)?;
        let a = self.canonicalize(x)?;
        let b = self.canonicalize(y)?;
        Ok(a.coords.cmp(&b.coords))
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &m) in self.moduli.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            if m == 0 {
                write!(f, "Z")?;
            } else {
                write!(f, "Z/{m}")?;
            }
        }
        Ok(())
    }
}

/// One group element: a coordinate vector. The derived `Ord` is the
/// lexicographic order on coordinates, which matches the group order for
/// canonical vectors of equal dimension.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct Element {
    coords: Vec<i64>,
}

impl Element {
    pub fn from_coords(coords: Vec<i64>) -> Self {
        Element { coords }
    }

    /// 1-dimensional element, the common case for integer sets.
    pub fn scalar(c: i64) -> Self {
        Element { coords: vec![c] }
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}
