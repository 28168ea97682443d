//! Pinned counting functions, distance sets, and full-space second-moment sweeps.

mod dft;
mod naive;

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElement;
use crate::geometry::{DistanceKernel, Point};
use crate::pointset::PointSet;

/// The histogram t -> #{x in E : ||x - y|| = t} for one pin y.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PinProfile {
    pin: Point,
    counts: Vec<u64>,
    support_size: usize,
    second_moment: u64,
}

impl PinProfile {
    fn from_counts(pin: Point, counts: Vec<u64>, set_size: usize) -> Self {
        let mass: u64 = counts.iter().sum();
        assert_eq!(mass, set_size as u64, "pin profile lost mass");
        let support_size = counts.iter().filter(|&&c| c > 0).count();
        let second_moment = counts.iter().map(|&c| c * c).sum();
        assert!(second_moment >= mass, "second moment below the set size");
        PinProfile { pin, counts, support_size, second_moment }
    }

    pub fn pin(&self) -> &Point {
        &self.pin
    }

    /// Counts indexed by the element code of t.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// |Delta_y(E)|.
    pub fn support_size(&self) -> usize {
        self.support_size
    }

    /// sum_t nu_y(t)^2.
    pub fn second_moment(&self) -> u64 {
        self.second_moment
    }

    pub fn support(&self) -> BTreeSet<FieldElement> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(t, _)| FieldElement::from_code_unchecked(t as u32))
            .collect()
    }
}

pub fn pin_profile(set: &PointSet, pin: &Point) -> Result<PinProfile> {
    let space = set.space();
    space.check_dim(pin)?;
    let kernel = DistanceKernel::new(space.field());
    let y = pin.codes();
    let mut counts = vec![0u64; space.field().order() as usize];
    for x in set.member_codes().chunks_exact(space.dim()) {
        counts[kernel.distance(x, &y) as usize] += 1;
    }
    Ok(PinProfile::from_counts(pin.clone(), counts, set.len()))
}

/// Delta_y(E) = { ||x - y|| : x in E }.
pub fn pinned_distance_set(set: &PointSet, pin: &Point) -> Result<BTreeSet<FieldElement>> {
    Ok(pin_profile(set, pin)?.support())
}

/// Delta(E) = { ||x - y|| : x, y in E }.
pub fn distance_set(set: &PointSet) -> BTreeSet<FieldElement> {
    let space = set.space();
    let d = space.dim();
    let kernel = DistanceKernel::new(space.field());
    let codes = set.member_codes();
    let q = space.field().order() as usize;
    let mut seen = vec![false; q];
    let mut found = 0usize;
    'outer: for (i, x) in codes.chunks_exact(d).enumerate() {
        // Distances are symmetric, so pairs (x, y) with y after x suffice.
        for y in codes.chunks_exact(d).skip(i) {
            let t = kernel.distance(x, y) as usize;
            if !seen[t] {
                seen[t] = true;
                found += 1;
                if found == q {
                    break 'outer;
                }
            }
        }
    }
    seen.iter()
        .enumerate()
        .filter(|(_, &s)| s)
        .map(|(t, _)| FieldElement::from_code_unchecked(t as u32))
        .collect()
}

/// Ordered pairs (x, z) in E x E with ||x - y|| = ||z - y||, split into the
/// diagonal (x = z) and off-diagonal parts. Enumerates all |E|^2 pairs.
pub fn equidistant_pairs(set: &PointSet, pin: &Point) -> Result<(u64, u64)> {
    let space = set.space();
    space.check_dim(pin)?;
    let kernel = DistanceKernel::new(space.field());
    let y = pin.codes();
    let codes = set.member_codes();
    let d = space.dim();
    let (mut diagonal, mut off) = (0u64, 0u64);
    for (i, x) in codes.chunks_exact(d).enumerate() {
        for (j, z) in codes.chunks_exact(d).enumerate() {
            if kernel.distance(x, &y) == kernel.distance(z, &y) {
                if i == j {
                    diagonal += 1;
                } else {
                    off += 1;
                }
            }
        }
    }
    Ok((diagonal, off))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    /// Per-pin histogram accumulation.
    #[default]
    Naive,
    /// Cyclic cross-correlation with sphere indicators via FFT; prime fields only.
    Dft,
}

impl fmt::Display for Backend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Backend::Naive => "naive",
            Backend::Dft => "dft",
        })
    }
}

impl FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "naive" => Ok(Backend::Naive),
            "dft" => Ok(Backend::Dft),
            other => Err(Error::InvalidParam(format!("unknown backend `{other}` (naive|dft)"))),
        }
    }
}

/// Per-pin second moments and pinned distance counts over all of F_q^d,
/// indexed by flat pin index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SweepResult {
    second_moments: Vec<u64>,
    pinned_counts: Vec<u32>,
    set_size: u64,
}

impl SweepResult {
    pub(crate) fn new(second_moments: Vec<u64>, pinned_counts: Vec<u32>, set_size: u64) -> Self {
        assert_eq!(second_moments.len(), pinned_counts.len());
        SweepResult { second_moments, pinned_counts, set_size }
    }

    pub fn second_moments(&self) -> &[u64] {
        &self.second_moments
    }

    /// |Delta_y(E)| per pin.
    pub fn pinned_counts(&self) -> &[u32] {
        &self.pinned_counts
    }

    pub fn set_size(&self) -> u64 {
        self.set_size
    }

    pub fn len(&self) -> usize {
        self.second_moments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.second_moments.is_empty()
    }

    pub fn total(&self) -> u128 {
        self.second_moments.iter().map(|&m| m as u128).sum()
    }
}

pub fn sweep_second_moments(set: &PointSet, backend: Backend) -> Result<SweepResult> {
    match backend {
        Backend::Naive => Ok(naive::sweep(set)),
        Backend::Dft => dft::sweep(set),
    }
}

/// sum over all pins y of sum_t nu_y(t)^2, i.e. q^d times the pin average.
pub fn total_second_moment(set: &PointSet) -> Result<u128> {
    Ok(sweep_second_moments(set, Backend::Naive)?.total())
}

/// q^(d-1) (n^2 + (q-1) n): the scaled right-hand side of the average identity.
pub fn second_moment_identity_rhs(q: u64, d: usize, n: u64) -> Result<u128> {
    let overflow = || Error::IntegerOverflow("second-moment identity");
    let q = q as u128;
    let n = n as u128;
    let scale = q.checked_pow(d as u32 - 1).ok_or_else(overflow)?;
    let inner = n
        .checked_mul(n)
        .and_then(|n2| n2.checked_add((q - 1).checked_mul(n)?))
        .ok_or_else(overflow)?;
    scale.checked_mul(inner).ok_or_else(overflow)
}
