//! Subsets of F_q^d with O(1) membership, and the plain-text point-set format.
//!
//! File format: the first non-comment line is `p k d`, each further line is
//! one point as `d` whitespace-separated element codes. Lines starting with
//! `#` are ignored.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::{Point, Space};

#[derive(Debug, Clone, PartialEq, Eq)]
struct Bitset {
    words: Vec<u64>,
}

impl Bitset {
    fn new(bits: u64) -> Self {
        Bitset { words: vec![0; bits.div_ceil(64) as usize] }
    }

    #[inline]
    fn contains(&self, bit: u64) -> bool {
        self.words[(bit / 64) as usize] & (1u64 << (bit % 64)) != 0
    }

    /// Returns true when the bit was newly set.
    #[inline]
    fn insert(&mut self, bit: u64) -> bool {
        let word = &mut self.words[(bit / 64) as usize];
        let mask = 1u64 << (bit % 64);
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    #[cfg(test)]
    fn count(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }
}

/// A subset E of F_q^d: a membership bitmap over flat indices plus the
/// ascending list of member indices.
#[derive(Debug, Clone)]
pub struct PointSet {
    space: Space,
    bits: Bitset,
    members: Vec<u64>,
    descriptor: String,
}

impl PartialEq for PointSet {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.members == other.members
    }
}

impl Eq for PointSet {}

impl PointSet {
    pub fn empty(space: Space) -> Self {
        let bits = Bitset::new(space.size());
        PointSet { space, bits, members: Vec::new(), descriptor: "empty".into() }
    }

    pub fn full(space: Space) -> Self {
        let members: Vec<u64> = (0..space.size()).collect();
        Self::from_sorted_unique(space, members, "full".into()).expect("full space indices are valid")
    }

    /// Builds a set from arbitrary flat indices; duplicates are merged.
    pub fn from_indices(space: Space, indices: impl IntoIterator<Item = u64>) -> Result<Self> {
        let mut bits = Bitset::new(space.size());
        let mut members = Vec::new();
        for idx in indices {
            if idx >= space.size() {
                return Err(Error::InvalidParam(format!(
                    "point index {idx} outside a space of {} points",
                    space.size()
                )));
            }
            if bits.insert(idx) {
                members.push(idx);
            }
        }
        members.sort_unstable();
        Ok(PointSet { space, bits, members, descriptor: "explicit".into() })
    }

    pub fn from_points<'a>(space: Space, points: impl IntoIterator<Item = &'a Point>) -> Result<Self> {
        let indices = points.into_iter().map(|x| space.index_of(x)).collect::<Result<Vec<_>>>()?;
        Self::from_indices(space, indices)
    }

    pub(crate) fn from_sorted_unique(space: Space, members: Vec<u64>, descriptor: String) -> Result<Self> {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let mut bits = Bitset::new(space.size());
        for &idx in &members {
            if idx >= space.size() {
                return Err(Error::InvalidParam(format!("point index {idx} out of range")));
            }
            bits.insert(idx);
        }
        Ok(PointSet { space, bits, members, descriptor })
    }

    pub fn with_descriptor(mut self, descriptor: impl Into<String>) -> Self {
        self.descriptor = descriptor.into();
        self
    }

    /// Textual description of how the set was built (a rendered set spec).
    pub fn descriptor(&self) -> &str {
        &self.descriptor
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains_index(&self, idx: u64) -> bool {
        idx < self.space.size() && self.bits.contains(idx)
    }

    pub fn contains(&self, x: &Point) -> bool {
        self.space.index_of(x).map(|i| self.contains_index(i)).unwrap_or(false)
    }

    /// Member flat indices in ascending order.
    pub fn members(&self) -> &[u64] {
        &self.members
    }

    pub fn points(&self) -> impl Iterator<Item = Point> + '_ {
        self.members.iter().map(|&i| self.space.point(i))
    }

    /// Member coordinates as one flat `len * d` buffer of element codes.
    pub(crate) fn member_codes(&self) -> Vec<u32> {
        let d = self.space.dim();
        let mut out = vec![0u32; self.members.len() * d];
        for (chunk, &idx) in out.chunks_exact_mut(d).zip(&self.members) {
            self.space.decode_into(idx, chunk);
        }
        out
    }

    pub fn union(&self, other: &PointSet) -> Result<PointSet> {
        self.check_same_space(other)?;
        let merged = self.members.iter().chain(&other.members).copied();
        Ok(Self::from_indices(self.space.clone(), merged)?
            .with_descriptor(format!("union:({}),({})", self.descriptor, other.descriptor)))
    }

    pub fn with_index(&self, idx: u64) -> Result<PointSet> {
        Self::from_indices(self.space.clone(), self.members.iter().copied().chain([idx]))
    }

    pub(crate) fn check_same_space(&self, other: &PointSet) -> Result<()> {
        if self.space != other.space {
            return Err(Error::DimensionMismatch {
                expected: self.space.dim(),
                got: other.space.dim(),
            });
        }
        Ok(())
    }

    #[cfg(test)]
    pub(crate) fn bitmap_count(&self) -> u64 {
        self.bits.count()
    }

    pub fn to_file_text(&self) -> String {
        let f = self.space.field();
        let mut out = format!("{} {} {}\n", f.characteristic(), f.degree(), self.space.dim());
        let d = self.space.dim();
        for chunk in self.member_codes().chunks_exact(d) {
            let line: Vec<String> = chunk.iter().map(|c| c.to_string()).collect();
            writeln!(out, "{}", line.join(" ")).unwrap();
        }
        out
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_text())
            .map_err(|e| Error::Io { path: path.to_path_buf(), message: e.to_string() })
    }

    /// Reads a point-set file into `space`; the header must match the space.
    pub fn load(space: Space, path: &Path) -> Result<PointSet> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io { path: path.to_path_buf(), message: e.to_string() })?;
        Self::parse_file_text(space, &text, path)
    }

    pub fn parse_file_text(space: Space, text: &str, path: &Path) -> Result<PointSet> {
        let err = |line: usize, message: String| Error::FileFormat {
            path: path.to_path_buf(),
            line,
            message,
        };
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
        let (hline, header) = lines.next().ok_or_else(|| err(1, "missing `p k d` header".into()))?;
        let fields: Vec<u64> = header
            .split_whitespace()
            .map(|t| t.parse::<u64>().map_err(|_| err(hline, format!("bad header token `{t}`"))))
            .collect::<Result<_>>()?;
        let f = space.field();
        let expected = [f.characteristic() as u64, f.degree() as u64, space.dim() as u64];
        if fields.len() != 3 {
            return Err(err(hline, format!("header needs 3 integers, found {}", fields.len())));
        }
        if fields[..] != expected[..] {
            return Err(err(
                hline,
                format!(
                    "header {} {} {} does not match the requested space {} {} {}",
                    fields[0], fields[1], fields[2], expected[0], expected[1], expected[2]
                ),
            ));
        }
        let mut indices = Vec::new();
        let mut codes = Vec::with_capacity(space.dim());
        for (n, line) in lines {
            codes.clear();
            for tok in line.split_whitespace() {
                let c = tok.parse::<u64>().map_err(|_| err(n, format!("bad element code `{tok}`")))?;
                if c >= f.order() as u64 {
                    return Err(err(n, format!("element code {c} is not below q = {}", f.order())));
                }
                codes.push(c as u32);
            }
            if codes.len() != space.dim() {
                return Err(err(n, format!("expected {} coordinates, found {}", space.dim(), codes.len())));
            }
            indices.push(space.encode_codes(&codes));
        }
        Self::from_indices(space, indices)
    }
}
