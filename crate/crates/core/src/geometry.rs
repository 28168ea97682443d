//! Points, norms, spheres and bisectors in F_q^d.

use std::f64::consts::TAU;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::pointset::PointSet;
use crate::{DEFAULT_CAP, MAX_CAP};

/// Ambient space F_q^d. Points are addressed by a flat index in `0..q^d`:
/// coordinate j contributes `code * q^j`.
#[derive(Debug, Clone)]
pub struct Space {
    field: Arc<FieldSpec>,
    dim: usize,
    size: u64,
    cap: u64,
}

impl PartialEq for Space {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && *self.field == *other.field
    }
}

impl Eq for Space {}

impl Space {
    pub fn new(field: Arc<FieldSpec>, dim: usize) -> Result<Self> {
        Self::with_cap(field, dim, DEFAULT_CAP)
    }

    pub fn with_cap(field: Arc<FieldSpec>, dim: usize, cap: u64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::ZeroDimension);
        }
        if cap > MAX_CAP {
            return Err(Error::InvalidParam(format!("cap {cap} exceeds the maximum {MAX_CAP}")));
        }
        let size = (field.order() as u128).checked_pow(dim as u32).unwrap_or(u128::MAX);
        if size > cap as u128 {
            return Err(Error::SizeCapExceeded { size, cap });
        }
        Ok(Space { field, dim, size: size as u64, cap })
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn field_arc(&self) -> &Arc<FieldSpec> {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of points, q^d.
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn cap(&self) -> u64 {
        self.cap
    }

    pub fn index_of(&self, x: &Point) -> Result<u64> {
        self.check_dim(x)?;
        let q = self.field.order() as u64;
        Ok(x.coords.iter().rev().fold(0u64, |acc, c| acc * q + c.code() as u64))
    }

    pub fn point(&self, index: u64) -> Point {
        assert!(index < self.size, "point index {index} out of range");
        let mut codes = vec![0u32; self.dim];
        self.decode_into(index, &mut codes);
        Point { coords: codes.into_iter().map(FieldElement::from_code_unchecked).collect() }
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        (0..self.size).map(|i| self.point(i))
    }

    pub(crate) fn decode_into(&self, mut index: u64, out: &mut [u32]) {
        let q = self.field.order() as u64;
        for c in out.iter_mut() {
            *c = (index % q) as u32;
            index /= q;
        }
    }

    pub(crate) fn encode_codes(&self, codes: &[u32]) -> u64 {
        let q = self.field.order() as u64;
        codes.iter().rev().fold(0u64, |acc, &c| acc * q + c as u64)
    }

    pub(crate) fn check_dim(&self, x: &Point) -> Result<()> {
        if x.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: x.dim() });
        }
        Ok(())
    }

    /// Point from raw element codes, range-checked.
    pub fn point_from_codes(&self, codes: &[u64]) -> Result<Point> {
        if codes.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, got: codes.len() });
        }
        let coords = codes.iter().map(|&c| self.field.element(c)).collect::<Result<_>>()?;
        Ok(Point { coords })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Point {
    coords: Vec<FieldElement>,
}

impl Point {
    pub fn new(coords: Vec<FieldElement>) -> Self {
        Point { coords }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[FieldElement] {
        &self.coords
    }

    pub(crate) fn codes(&self) -> Vec<u32> {
        self.coords.iter().map(|c| c.code()).collect()
    }
}

fn check_same_dim(x: &Point, y: &Point) -> Result<()> {
    if x.dim() != y.dim() {
        return Err(Error::DimensionMismatch { expected: x.dim(), got: y.dim() });
    }
    Ok(())
}

pub fn add_points(f: &FieldSpec, x: &Point, y: &Point) -> Result<Point> {
    check_same_dim(x, y)?;
    Ok(Point::new(x.coords.iter().zip(&y.coords).map(|(&a, &b)| f.add(a, b)).collect()))
}

pub fn sub_points(f: &FieldSpec, x: &Point, y: &Point) -> Result<Point> {
    check_same_dim(x, y)?;
    Ok(Point::new(x.coords.iter().zip(&y.coords).map(|(&a, &b)| f.sub(a, b)).collect()))
}

pub fn scale_point(f: &FieldSpec, s: FieldElement, x: &Point) -> Point {
    Point::new(x.coords.iter().map(|&a| f.mul(s, a)).collect())
}

pub fn dot(f: &FieldSpec, x: &Point, y: &Point) -> Result<FieldElement> {
    check_same_dim(x, y)?;
    Ok(x.coords
        .iter()
        .zip(&y.coords)
        .fold(FieldElement::ZERO, |acc, (&a, &b)| f.add(acc, f.mul(a, b))))
}

/// ||x|| = sum of squared coordinates, in F_q.
pub fn norm(f: &FieldSpec, x: &Point) -> FieldElement {
    x.coords.iter().fold(FieldElement::ZERO, |acc, &c| f.add(acc, f.mul(c, c)))
}

pub fn distance(f: &FieldSpec, x: &Point, y: &Point) -> Result<FieldElement> {
    Ok(norm(f, &sub_points(f, x, y)?))
}

/// The level set {v : ||v|| = t}.
pub fn sphere(space: &Space, t: FieldElement) -> Result<PointSet> {
    let f = space.field();
    f.element(t.code() as u64)?;
    let kernel = DistanceKernel::new(f);
    let zero = vec![0u32; space.dim()];
    let members: Vec<u64> = (0..space.size())
        .into_par_iter()
        .map_init(
            || vec![0u32; space.dim()],
            |buf, idx| {
                space.decode_into(idx, buf);
                (kernel.distance(buf, &zero) == t.code()).then_some(idx)
            },
        )
        .flatten()
        .collect();
    PointSet::from_sorted_unique(space.clone(), members, format!("sphere:{}", t.code()))
}

/// #{y in F_q^d : ||x - y|| = ||z - y||}, by exhaustive enumeration of pins.
pub fn bisector_count(space: &Space, x: &Point, z: &Point) -> Result<u64> {
    space.check_dim(x)?;
    space.check_dim(z)?;
    let kernel = DistanceKernel::new(space.field());
    let (xc, zc) = (x.codes(), z.codes());
    let mut y = vec![0u32; space.dim()];
    let mut count = 0u64;
    for idx in 0..space.size() {
        space.decode_into(idx, &mut y);
        if kernel.distance(&xc, &y) == kernel.distance(&zc, &y) {
            count += 1;
        }
    }
    Ok(count)
}

/// Same count via the linear equation 2(z - x).y = ||z|| - ||x||: a nonzero
/// linear form has q^(d-1) solutions. Needs no enumeration.
pub fn bisector_count_closed_form(f: &FieldSpec, x: &Point, z: &Point) -> Result<u128> {
    let diff = sub_points(f, z, x)?;
    let two = f.from_int(2);
    let coeffs = scale_point(f, two, &diff);
    let rhs = f.sub(norm(f, z), norm(f, x));
    let q = f.order() as u128;
    let d = x.dim() as u32;
    if coeffs.coords().iter().all(|&c| c == FieldElement::ZERO) {
        // 2 is invertible in odd characteristic, so this means x == z and rhs == 0.
        Ok(if rhs == FieldElement::ZERO { q.pow(d) } else { 0 })
    } else {
        Ok(q.pow(d - 1))
    }
}

/// Unit-modulus value of an additive character.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharacterValue {
    pub re: f64,
    pub im: f64,
}

impl CharacterValue {
    pub fn modulus_defect(self) -> f64 {
        (self.re * self.re + self.im * self.im - 1.0).abs()
    }
}

/// The canonical additive character u -> exp(2 pi i Tr(u) / p).
pub fn additive_character(f: &FieldSpec, u: FieldElement) -> CharacterValue {
    let tr = f.trace(u).code() as f64;
    let angle = TAU * tr / f.characteristic() as f64;
    CharacterValue { re: angle.cos(), im: angle.sin() }
}

pub fn character_table(f: &FieldSpec) -> Vec<CharacterValue> {
    f.elements().map(|u| additive_character(f, u)).collect()
}

/// Absolute tolerance on the deviation of a character-sum count from an integer.
pub const CHARSUM_ROUNDING_TOLERANCE: f64 = 0.25;

/// Evaluates q^-1 sum_y sum_s chi(s(||x-y|| - ||z-y||)) in double precision.
pub fn bisector_count_charsum(space: &Space, x: &Point, z: &Point) -> Result<f64> {
    let table = character_table(space.field());
    bisector_count_charsum_with(space, &table, x, z)
}

/// As [`bisector_count_charsum`], reusing a precomputed character table.
pub fn bisector_count_charsum_with(
    space: &Space,
    chars: &[CharacterValue],
    x: &Point,
    z: &Point,
) -> Result<f64> {
    space.check_dim(x)?;
    space.check_dim(z)?;
    let f = space.field();
    let q = f.order();
    assert_eq!(chars.len(), q as usize, "character table has the wrong length");
    let kernel = DistanceKernel::new(f);
    let (xc, zc) = (x.codes(), z.codes());
    let mut y = vec![0u32; space.dim()];
    let (mut re, mut im) = (0.0f64, 0.0f64);
    for idx in 0..space.size() {
        space.decode_into(idx, &mut y);
        let u = f.sub_code(kernel.distance(&xc, &y), kernel.distance(&zc, &y));
        for s in 0..q {
            let chi = chars[f.mul_code(s, u) as usize];
            re += chi.re;
            im += chi.im;
        }
    }
    let n = space.size() as f64;
    if im.abs() > 1e-6 * n {
        return Err(Error::ResidualTooLarge {
            residual: im.abs(),
            tolerance: 1e-6 * n,
            context: "imaginary part of bisector character sum".into(),
        });
    }
    let value = re / q as f64;
    let residual = (value - value.round()).abs();
    if residual >= CHARSUM_ROUNDING_TOLERANCE {
        return Err(Error::ResidualTooLarge {
            residual,
            tolerance: CHARSUM_ROUNDING_TOLERANCE,
            context: "bisector character sum is not near an integer".into(),
        });
    }
    Ok(value)
}

/// Hot-path evaluator of ||x - y|| on raw coordinate codes.
pub(crate) struct DistanceKernel<'a> {
    field: &'a FieldSpec,
    q: usize,
    /// (a - b)^2 indexed by a * q + b.
    sqdiff: Option<Vec<u32>>,
}

const SQDIFF_TABLE_MAX: u32 = 1 << 10;

impl<'a> DistanceKernel<'a> {
    pub(crate) fn new(field: &'a FieldSpec) -> Self {
        let q = field.order();
        let sqdiff = (q <= SQDIFF_TABLE_MAX).then(|| {
            let mut t = Vec::with_capacity((q * q) as usize);
            for a in 0..q {
                for b in 0..q {
                    let diff = field.sub_code(a, b);
                    t.push(field.mul_code(diff, diff));
                }
            }
            t
        });
        DistanceKernel { field, q: q as usize, sqdiff }
    }

    #[inline]
    pub(crate) fn distance(&self, x: &[u32], y: &[u32]) -> u32 {
        debug_assert_eq!(x.len(), y.len());
        let f = self.field;
        match (&self.sqdiff, f.is_prime_field()) {
            (Some(t), true) => {
                let s: u64 = x
                    .iter()
                    .zip(y)
                    .map(|(&a, &b)| t[a as usize * self.q + b as usize] as u64)
                    .sum();
                (s % f.characteristic() as u64) as u32
            }
            (Some(t), false) => x
                .iter()
                .zip(y)
                .fold(0, |acc, (&a, &b)| f.add_code(acc, t[a as usize * self.q + b as usize])),
            (None, true) => {
                let p = f.characteristic() as u64;
                let s: u64 = x
                    .iter()
                    .zip(y)
                    .map(|(&a, &b)| {
                        let diff = f.sub_code(a, b) as u64;
                        diff * diff % p
                    })
                    .sum();
                (s % p) as u32
            }
            (None, false) => x.iter().zip(y).fold(0, |acc, (&a, &b)| {
                let diff = f.sub_code(a, b);
                f.add_code(acc, f.mul_code(diff, diff))
            }),
        }
    }
}
