//! Exact verifiers for the second-moment identity, the good-pin bound, and the
//! pinned-distance lower bounds. All rational thresholds are cross-multiplied
//! into integers; floating point appears only in the character-sum check.

pub mod rational;
pub mod report;

use std::collections::BTreeSet;

use num_rational::Ratio;
use rayon::prelude::*;

pub use rational::RationalParam;
pub use report::{FieldParams, VerificationReport, Witness, WitnessValue, REPORT_SCHEMA};

use crate::error::{Error, Result};
use crate::field::{FieldElement, FieldSpec};
use crate::geometry::{
    bisector_count, bisector_count_charsum_with, bisector_count_closed_form, character_table,
    Point, Space,
};
use crate::pinned::{
    distance_set, pin_profile, second_moment_identity_rhs, sweep_second_moments, Backend,
    SweepResult,
};
use crate::pointset::PointSet;

fn overflow(what: &'static str) -> Error {
    Error::IntegerOverflow(what)
}

/// |E|^2 / sum_t nu_y(t)^2, which never exceeds |Delta_y(E)|.
pub fn cs_lower_bound(set: &PointSet, pin: &Point) -> Result<Ratio<u128>> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    let profile = pin_profile(set, pin)?;
    let n = set.len() as u128;
    let bound = Ratio::new(n * n, profile.second_moment() as u128);
    assert!(
        bound <= Ratio::from_integer(profile.support_size() as u128),
        "Cauchy-Schwarz bound exceeded the pinned distance count"
    );
    Ok(bound)
}

/// A point set together with its full-space sweep, so that several checks can
/// share one sweep.
pub struct PinAnalysis<'a> {
    set: &'a PointSet,
    sweep: SweepResult,
}

impl<'a> PinAnalysis<'a> {
    pub fn new(set: &'a PointSet, backend: Backend) -> Result<Self> {
        Ok(PinAnalysis { set, sweep: sweep_second_moments(set, backend)? })
    }

    pub fn from_sweep(set: &'a PointSet, sweep: SweepResult) -> Self {
        assert_eq!(sweep.len() as u64, set.space().size(), "sweep does not cover the space");
        PinAnalysis { set, sweep }
    }

    pub fn sweep(&self) -> &SweepResult {
        &self.sweep
    }

    fn q(&self) -> u128 {
        self.set.space().field().order() as u128
    }

    fn n(&self) -> u128 {
        self.set.len() as u128
    }

    fn report(&self, check: &str, a: Option<RationalParam>) -> VerificationReport {
        let mut r = VerificationReport::new(
            check,
            FieldParams::from(self.set.space()),
            self.set.descriptor(),
            a,
        );
        match self.set.len() {
            0 => r.warn("empty set: the check holds vacuously"),
            1 => r.warn("singleton set: the check holds trivially"),
            _ => {}
        }
        r
    }

    /// num * (n^2 + (q-1) n): a pin is good iff den * q * m(y) is at most this.
    fn good_threshold(&self, a: RationalParam) -> Result<u128> {
        let (q, n) = (self.q(), self.n());
        n.checked_mul(n)
            .and_then(|n2| n2.checked_add((q - 1) * n))
            .and_then(|s| s.checked_mul(a.num() as u128))
            .ok_or_else(|| overflow("good-pin threshold"))
    }

    fn pin_lhs(&self, a: RationalParam, moment: u64) -> Result<u128> {
        (a.den() as u128 * self.q())
            .checked_mul(moment as u128)
            .ok_or_else(|| overflow("good-pin comparison"))
    }

    /// Flat indices of Y = { y : sum_t nu_y(t)^2 <= (a/q) |E|^2 + (a(q-1)/q) |E| }.
    pub fn good_pins(&self, a: RationalParam) -> Result<Vec<u64>> {
        let threshold = self.good_threshold(a)?;
        let mut out = Vec::new();
        for (y, &m) in self.sweep.second_moments().iter().enumerate() {
            if self.pin_lhs(a, m)? <= threshold {
                out.push(y as u64);
            }
        }
        Ok(out)
    }

    pub fn good_pin_set(&self, a: RationalParam) -> Result<PointSet> {
        let pins = self.good_pins(a)?;
        let space = self.set.space().clone();
        PointSet::from_sorted_unique(space, pins, format!("good-pins[a={a}]"))
    }

    /// Records num*|Y| >= (num - den)*q^d and returns whether it holds.
    fn size_bound(&self, r: &mut VerificationReport, a: RationalParam, good: u64) -> bool {
        let total = self.set.space().size() as u128;
        let lhs = a.num() as u128 * good as u128;
        let rhs = (a.num() - a.den()) as u128 * total;
        r.integer("space_size", total)
            .integer("good_pins", good)
            .integer("size_bound_lhs", lhs)
            .integer("size_bound_rhs", rhs);
        lhs >= rhs
    }

    /// Pinned lower bound on Y: 2 num |Delta_y(E)| >= den min(q, |E|).
    pub fn main_theorem(&self, a: RationalParam) -> Result<VerificationReport> {
        let mut r = self.report("main_theorem", Some(a));
        let good = self.good_pins(a)?;
        if !self.size_bound(&mut r, a, good.len() as u64) {
            r.fail_on("size_bound_lhs");
        }
        let (q, n) = (self.q(), self.n());
        let target = a.den() as u128 * q.min(n);
        let counts = self.sweep.pinned_counts();
        let mut failures = 0u64;
        let mut min_count = u32::MAX;
        for &y in &good {
            let c = counts[y as usize];
            min_count = min_count.min(c);
            if 2 * a.num() as u128 * (c as u128) < target {
                failures += 1;
                r.fail_at(y);
            }
        }
        r.integer("set_size", n)
            .integer("min_pinned_count_over_good_pins", if good.is_empty() { 0 } else { min_count })
            .rational("pinned_bound", q.min(n) * a.den() as u128, 2 * a.num() as u128)
            .integer("failing_pins", failures);
        // Informational: min{q/(2a), q|E|/(2a(q-1))}, stronger than the checked bound.
        let two_a = Ratio::new(2 * a.num() as u128, a.den() as u128);
        let first = Ratio::from_integer(q) / two_a;
        let second = Ratio::new(q * n, q - 1) / two_a;
        let strong = first.min(second);
        r.rational("intermediate_bound", *strong.numer(), *strong.denom());
        Ok(r)
    }

    /// For |E| >= q and y in Y: 2 num |Delta(E u {y})| >= den q, via the
    /// containment Delta_y(E) in Delta(E u {y}).
    pub fn corollary(&self, a: RationalParam) -> Result<VerificationReport> {
        let (q, n) = (self.q(), self.n());
        if n < q {
            return Err(Error::HypothesisNotMet(format!("|E| = {n} is smaller than q = {q}")));
        }
        let mut r = self.report("corollary", Some(a));
        let good = self.good_pins(a)?;
        if !self.size_bound(&mut r, a, good.len() as u64) {
            r.fail_on("size_bound_lhs");
        }
        let base: BTreeSet<FieldElement> = distance_set(self.set);
        let space = self.set.space();
        let counts = self.sweep.pinned_counts();
        let outcomes: Vec<(u64, usize, bool)> = good
            .par_iter()
            .map(|&y| -> Result<(u64, usize, bool)> {
                let pin = space.point(y);
                let pinned = pin_profile(self.set, &pin)?.support();
                let mut augmented = base.clone();
                augmented.extend(pinned.iter().copied());
                augmented.insert(FieldElement::ZERO);
                let contained = pinned.is_subset(&augmented)
                    && pinned.len() == counts[y as usize] as usize
                    && augmented.len() >= pinned.len();
                Ok((y, augmented.len(), contained))
            })
            .collect::<Result<_>>()?;
        let mut failures = 0u64;
        let mut min_size = usize::MAX;
        for (y, size, contained) in outcomes {
            min_size = min_size.min(size);
            if !contained || 2 * a.num() as u128 * (size as u128) < a.den() as u128 * q {
                failures += 1;
                r.fail_at(y);
            }
        }
        r.integer("set_size", n)
            .integer("distance_set_size", base.len() as u64)
            .integer("min_augmented_distance_count", if min_size == usize::MAX { 0 } else { min_size as u64 })
            .rational("corollary_bound", q * a.den() as u128, 2 * a.num() as u128)
            .integer("failing_pins", failures);
        Ok(r)
    }

    /// Replays the averaging argument behind the good-pin bound in scaled
    /// integers.
    pub fn pigeonhole_audit(&self, a: RationalParam) -> Result<VerificationReport> {
        let mut r = self.report("pigeonhole_audit", Some(a));
        let space = self.set.space();
        let (q, n) = (self.q(), self.n());
        let total_pins = space.size() as u128;

        // Average identity scaled by q^(d+1).
        let total = self.sweep.total();
        let lhs = total.checked_mul(q).ok_or_else(|| overflow("scaled average"))?;
        let rhs = second_moment_identity_rhs(q as u64, space.dim(), n as u64)?
            .checked_mul(q)
            .ok_or_else(|| overflow("scaled average"))?;
        r.integer("average_lhs_scaled", lhs).integer("average_rhs_scaled", rhs);
        if lhs != rhs {
            r.fail_on("average_lhs_scaled");
        }

        // Complement = strict threshold exceeders; second moment >= |E| everywhere.
        let threshold = self.good_threshold(a)?;
        let good = self.good_pins(a)?;
        let mut is_good = vec![false; space.size() as usize];
        for &y in &good {
            is_good[y as usize] = true;
        }
        let mut complement = 0u128;
        let mut complement_sum = 0u128;
        let mut good_sum = 0u128;
        for (y, &m) in self.sweep.second_moments().iter().enumerate() {
            let exceeds = self.pin_lhs(a, m)? > threshold;
            if exceeds == is_good[y] {
                r.fail_at(y as u64);
            }
            if (m as u128) < n {
                r.fail_at(y as u64);
            }
            if exceeds {
                complement += 1;
                complement_sum += m as u128;
            } else {
                good_sum += m as u128;
            }
        }
        r.integer("complement_pins", complement);
        if good.len() as u128 + complement != total_pins {
            r.fail_on("complement_pins");
        }
        // Lower estimate: sum >= |Y||E| + sum over the complement, and the
        // complement sum strictly exceeds (q^d - |Y|) * threshold / (den q).
        let lower = good.len() as u128 * n + complement_sum;
        r.integer("averaging_lower_estimate", lower);
        if total < lower || good_sum < good.len() as u128 * n {
            r.fail_on("averaging_lower_estimate");
        }
        if complement > 0 {
            let scaled = complement_sum
                .checked_mul(a.den() as u128 * q)
                .ok_or_else(|| overflow("complement sum"))?;
            let bound = complement.checked_mul(threshold).ok_or_else(|| overflow("complement bound"))?;
            r.integer("complement_sum_scaled", scaled).integer("complement_threshold_scaled", bound);
            if scaled <= bound {
                r.fail_on("complement_sum_scaled");
            }
        }
        if !self.size_bound(&mut r, a, good.len() as u64) {
            r.fail_on("size_bound_lhs");
        }
        Ok(r)
    }

    /// sum_t nu_y(t)^2 * |Delta_y(E)| >= |E|^2 at every pin.
    pub fn pin_form(&self) -> VerificationReport {
        let mut r = self.report("pin_form", None);
        let n = self.n();
        let mut equality = 0u64;
        for (y, (&m, &c)) in self
            .sweep
            .second_moments()
            .iter()
            .zip(self.sweep.pinned_counts())
            .enumerate()
        {
            let lhs = m as u128 * c as u128;
            if lhs < n * n {
                r.fail_at(y as u64);
            } else if lhs == n * n {
                equality += 1;
            }
        }
        r.integer("set_size", n).integer("pins", self.sweep.len() as u64).integer("equality_pins", equality);
        r
    }

    /// Scaled average identity: sum over pins of the second moment equals
    /// q^(d-1) (|E|^2 + (q-1)|E|).
    pub fn second_moment_identity(&self) -> Result<VerificationReport> {
        let mut r = self.report("second_moment_identity", None);
        let space = self.set.space();
        let total = self.sweep.total();
        let rhs = second_moment_identity_rhs(self.q() as u64, space.dim(), self.n() as u64)?;
        r.integer("total_second_moment", total).integer("identity_rhs", rhs);
        if total != rhs {
            r.fail_on("total_second_moment");
        }
        Ok(r)
    }
}

pub fn good_pin_set(set: &PointSet, a: RationalParam) -> Result<PointSet> {
    PinAnalysis::new(set, Backend::Naive)?.good_pin_set(a)
}

pub fn main_theorem_check(set: &PointSet, a: RationalParam) -> Result<VerificationReport> {
    PinAnalysis::new(set, Backend::Naive)?.main_theorem(a)
}

pub fn corollary_check(set: &PointSet, a: RationalParam) -> Result<VerificationReport> {
    let q = set.space().field().order() as usize;
    if set.len() < q {
        return Err(Error::HypothesisNotMet(format!("|E| = {} is smaller than q = {q}", set.len())));
    }
    PinAnalysis::new(set, Backend::Naive)?.corollary(a)
}

pub fn pigeonhole_audit(set: &PointSet, a: RationalParam) -> Result<VerificationReport> {
    PinAnalysis::new(set, Backend::Naive)?.pigeonhole_audit(a)
}

/// Exhaustive field-axiom check over all elements.
pub fn field_axioms_check(field: &FieldSpec) -> VerificationReport {
    let params = FieldParams { p: field.characteristic(), k: field.degree(), d: 0 };
    let mut r = VerificationReport::new("field_axioms", params, "all-elements", None);
    let q = field.order() as u64;
    let mut violations = 0u64;
    let elems: Vec<FieldElement> = field.elements().collect();
    for &a in &elems {
        let mut bad = field.add(a, FieldElement::ZERO) != a
            || field.mul(a, FieldElement::ONE) != a
            || field.add(a, field.neg(a)) != FieldElement::ZERO
            || field.sub(a, a) != FieldElement::ZERO;
        if a != FieldElement::ZERO {
            bad |= field.inv(a).map(|b| field.mul(a, b)) != Ok(FieldElement::ONE);
            bad |= field.pow(a, q - 1) != FieldElement::ONE;
        }
        let digits = field.digits(a);
        bad |= field.from_digits(&digits) != Ok(a);
        bad |= field.trace(a).code() >= field.characteristic();
        for &b in &elems {
            bad |= field.add(a, b) != field.add(b, a) || field.mul(a, b) != field.mul(b, a);
            bad |= field.trace(field.add(a, b)) != field.add(field.trace(a), field.trace(b));
            for &c in &elems {
                bad |= field.add(field.add(a, b), c) != field.add(a, field.add(b, c));
                bad |= field.mul(field.mul(a, b), c) != field.mul(a, field.mul(b, c));
                bad |= field.mul(a, field.add(b, c)) != field.add(field.mul(a, b), field.mul(a, c));
            }
        }
        if bad {
            violations += 1;
            r.fail_at(a.code() as u64);
        }
    }
    r.integer("order", q).integer("elements_violating", violations);
    r
}

/// Which point pairs a bisector check visits.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairSelection {
    /// Every unordered pair x != z plus every diagonal pair.
    Exhaustive,
    /// Up to this many pairs, spread deterministically over the space.
    Sampled(usize),
}

/// Checks that each bisector has q^(d-1) pins, by enumeration, by the linear
/// closed form, and by the character sum.
pub fn bisector_check(space: &Space, pairs: PairSelection) -> Result<VerificationReport> {
    let f = space.field();
    let params = FieldParams::from(space);
    let mut r = VerificationReport::new("bisector", params, "all-pairs", None);
    if let PairSelection::Sampled(k) = pairs {
        r.set_spec = format!("sampled-pairs:{k}");
    }
    let n = space.size();
    let q = f.order() as u64;
    let hyperplane = q.pow(space.dim() as u32 - 1);
    let chars = character_table(f);

    let pair_list: Vec<(u64, u64)> = match pairs {
        PairSelection::Exhaustive => (0..n).flat_map(|x| (x..n).map(move |z| (x, z))).collect(),
        PairSelection::Sampled(k) => {
            let all = n as u128 * (n as u128 + 1) / 2;
            let step = (all / k.max(1) as u128).max(1);
            let mut out = Vec::new();
            let mut rank = 0u128;
            while rank < all && out.len() < k {
                out.push(unrank_pair(rank, n));
                rank += step;
            }
            out
        }
    };

    let results: Vec<(u64, bool, f64)> = pair_list
        .par_iter()
        .map(|&(xi, zi)| -> Result<(u64, bool, f64)> {
            let (x, z) = (space.point(xi), space.point(zi));
            let expected = if xi == zi { n } else { hyperplane };
            let direct = bisector_count(space, &x, &z)?;
            let closed = bisector_count_closed_form(f, &x, &z)?;
            let charsum = bisector_count_charsum_with(space, &chars, &x, &z)?;
            let dev = (charsum - expected as f64).abs();
            Ok((xi, direct == expected && closed == expected as u128, dev))
        })
        .collect::<Result<_>>()?;

    let mut max_dev = 0.0f64;
    let mut bad = 0u64;
    for (xi, exact_ok, dev) in results {
        max_dev = max_dev.max(dev);
        if !exact_ok || dev > 1e-6 {
            bad += 1;
            r.fail_at(xi);
        }
    }
    r.integer("pairs_checked", pair_list.len() as u64)
        .integer("hyperplane_size", hyperplane)
        .integer("failing_pairs", bad)
        .real("charsum_max_abs_deviation", max_dev);
    Ok(r)
}

/// Inverse of the row-major enumeration of pairs x <= z.
fn unrank_pair(mut rank: u128, n: u64) -> (u64, u64) {
    let mut x = 0u64;
    loop {
        let row = (n - x) as u128;
        if rank < row {
            return (x, x + rank as u64);
        }
        rank -= row;
        x += 1;
    }
}
