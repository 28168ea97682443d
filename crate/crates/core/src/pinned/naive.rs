use rayon::prelude::*;

use super::SweepResult;
use crate::geometry::DistanceKernel;
use crate::pointset::PointSet;

/// Pins are independent; each worker keeps one histogram and resets only the
/// slots it touched.
pub(super) fn sweep(set: &PointSet) -> SweepResult {
    let space = set.space();
    let d = space.dim();
    let q = space.field().order() as usize;
    let kernel = DistanceKernel::new(space.field());
    let codes = set.member_codes();

    let (second_moments, pinned_counts): (Vec<u64>, Vec<u32>) = (0..space.size())
        .into_par_iter()
        .map_init(
            || (vec![0u32; q], Vec::<u32>::new(), vec![0u32; d]),
            |(counts, touched, pin), y| {
                space.decode_into(y, pin);
                let mut moment = 0u64;
                for x in codes.chunks_exact(d) {
                    let t = kernel.distance(x, pin);
                    let c = &mut counts[t as usize];
                    if *c == 0 {
                        touched.push(t);
                    }
                    // (c + 1)^2 - c^2
                    moment += 2 * *c as u64 + 1;
                    *c += 1;
                }
                let support = touched.len() as u32;
                for &t in touched.iter() {
                    counts[t as usize] = 0;
                }
                touched.clear();
                (moment, support)
            },
        )
        .unzip();
    SweepResult::new(second_moments, pinned_counts, set.len() as u64)
}
