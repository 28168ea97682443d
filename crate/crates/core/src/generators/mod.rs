//! Deterministic construction of point sets from a [`SetSpec`].

mod permutation;
mod spec;

use std::sync::Arc;

pub use permutation::{FeistelPermutation, PERMUTATION_ID};
pub use spec::SetSpec;

use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::geometry::{sphere, Space};
use crate::pointset::PointSet;

/// Identity of the pseudorandom algorithm behind `random:` specs; embedded in
/// reports so that runs can be replayed elsewhere.
pub const GENERATOR_ID: &str = PERMUTATION_ID;

/// Builds the point set described by `spec` inside F_q^d. The result's
/// descriptor is the canonical rendering of `spec`.
pub fn generate(field: &Arc<FieldSpec>, dim: usize, spec: &SetSpec) -> Result<PointSet> {
    let space = Space::new(field.clone(), dim)?;
    generate_in(&space, spec)
}

pub fn generate_in(space: &Space, spec: &SetSpec) -> Result<PointSet> {
    Ok(build(space, spec)?.with_descriptor(spec.render()))
}

fn check_vector(space: &Space, v: &[u64]) -> Result<Vec<u32>> {
    if v.len() != space.dim() {
        return Err(Error::DimensionMismatch { expected: space.dim(), got: v.len() });
    }
    v.iter().map(|&c| space.field().element(c).map(|e| e.code())).collect()
}

fn build(space: &Space, spec: &SetSpec) -> Result<PointSet> {
    let f = space.field();
    let d = space.dim();
    match spec {
        SetSpec::Full => Ok(PointSet::full(space.clone())),
        SetSpec::Random { size, seed } => {
            if *size > space.size() {
                return Err(Error::SizeExceedsSpace { requested: *size, available: space.size() });
            }
            if *size == 0 {
                return Ok(PointSet::empty(space.clone()));
            }
            let perm = FeistelPermutation::new(space.size(), *seed);
            PointSet::from_indices(space.clone(), (0..*size).map(|i| perm.apply(i)))
        }
        SetSpec::Sphere { t } => sphere(space, f.element(*t)?),
        SetSpec::Line { origin, direction } => {
            let origin = check_vector(space, origin)?;
            let direction = check_vector(space, direction)?;
            if direction.iter().all(|&c| c == 0) {
                return Err(Error::InvalidParam("line direction must be nonzero".into()));
            }
            let mut point = vec![0u32; d];
            let indices: Vec<u64> = (0..f.order())
                .map(|s| {
                    for ((out, &o), &v) in point.iter_mut().zip(&origin).zip(&direction) {
                        *out = f.add_code(o, f.mul_code(s, v));
                    }
                    space.encode_codes(&point)
                })
                .collect();
            PointSet::from_indices(space.clone(), indices)
        }
        SetSpec::Subspace { basis } => {
            let basis = basis.iter().map(|v| check_vector(space, v)).collect::<Result<Vec<_>>>()?;
            let q = f.order() as u128;
            let combos = q.checked_pow(basis.len() as u32).unwrap_or(u128::MAX);
            if combos > space.cap() as u128 {
                return Err(Error::SizeCapExceeded { size: combos, cap: space.cap() });
            }
            let mut coeffs = vec![0u32; basis.len()];
            let mut point = vec![0u32; d];
            let mut indices = Vec::with_capacity(combos as usize);
            for combo in 0..combos as u64 {
                let mut c = combo;
                for slot in coeffs.iter_mut() {
                    *slot = (c % q as u64) as u32;
                    c /= q as u64;
                }
                point.iter_mut().for_each(|x| *x = 0);
                for (&s, v) in coeffs.iter().zip(&basis) {
                    for (out, &vj) in point.iter_mut().zip(v) {
                        *out = f.add_code(*out, f.mul_code(s, vj));
                    }
                }
                indices.push(space.encode_codes(&point));
            }
            PointSet::from_indices(space.clone(), indices)
        }
        SetSpec::Union(children) => {
            let mut indices = Vec::new();
            for child in children {
                indices.extend_from_slice(build(space, child)?.members());
            }
            PointSet::from_indices(space.clone(), indices)
        }
        SetSpec::Product(children) => {
            let total: usize = children.iter().map(|(_, k)| k).sum();
            if total != d {
                return Err(Error::DimensionMismatch { expected: d, got: total });
            }
            // Flat indices concatenate: the first factor owns the low digits.
            let mut indices: Vec<u64> = vec![0];
            let mut offset = 1u64;
            for (child, k) in children {
                let sub = Space::with_cap(space.field_arc().clone(), *k, space.cap())?;
                let part = build(&sub, child)?;
                indices = indices
                    .iter()
                    .flat_map(|&lo| part.members().iter().map(move |&hi| lo + hi * offset))
                    .collect();
                offset *= sub.size();
            }
            PointSet::from_indices(space.clone(), indices)
        }
        SetSpec::File(path) => PointSet::load(space.clone(), path),
    }
}
