//! Correlation backend: nu_y(t) = sum_x 1_E(x) 1_{S_t}(x - y) is the cyclic
//! cross-correlation of the set indicator with the sphere indicator over the
//! group (Z/p)^d, computed per t with d-dimensional length-p transforms.

use std::sync::Arc;

use rayon::prelude::*;
use rustfft::num_complex::Complex;
use rustfft::{Fft, FftPlanner};

use super::SweepResult;
use crate::error::{Error, Result};
use crate::geometry::DistanceKernel;
use crate::pointset::PointSet;

/// True correlation values are integers; anything farther than this from the
/// nearest integer means the transform went wrong.
pub(crate) const ROUNDING_TOLERANCE: f64 = 0.25;

struct NdFft {
    q: usize,
    dim: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl NdFft {
    fn new(q: usize, dim: usize) -> Self {
        let mut planner = FftPlanner::new();
        NdFft { q, dim, forward: planner.plan_fft_forward(q), inverse: planner.plan_fft_inverse(q) }
    }

    fn forward(&self, data: &mut [Complex<f64>], scratch: &mut Vec<Complex<f64>>) {
        self.run(&self.forward, data, scratch);
    }

    /// Unnormalized inverse.
    fn inverse(&self, data: &mut [Complex<f64>], scratch: &mut Vec<Complex<f64>>) {
        self.run(&self.inverse, data, scratch);
    }

    fn run(&self, fft: &Arc<dyn Fft<f64>>, data: &mut [Complex<f64>], scratch: &mut Vec<Complex<f64>>) {
        let q = self.q;
        let n = data.len();
        // Axis 0 has stride 1: lines are already contiguous.
        fft.process(data);
        let mut stride = q;
        for _ in 1..self.dim {
            let block = stride * q;
            scratch.resize(n, Complex::default());
            // Gather every line along this axis into contiguous runs of length q.
            let mut line = 0;
            for base in (0..n).step_by(block) {
                for inner in 0..stride {
                    let dst = &mut scratch[line * q..(line + 1) * q];
                    for (m, slot) in dst.iter_mut().enumerate() {
                        *slot = data[base + m * stride + inner];
                    }
                    line += 1;
                }
            }
            fft.process(&mut scratch[..n]);
            let mut line = 0;
            for base in (0..n).step_by(block) {
                for inner in 0..stride {
                    let src = &scratch[line * q..(line + 1) * q];
                    for (m, v) in src.iter().enumerate() {
                        data[base + m * stride + inner] = *v;
                    }
                    line += 1;
                }
            }
            stride = block;
        }
    }
}

struct Partial {
    moments: Vec<u64>,
    support: Vec<u32>,
    mass: Vec<u64>,
}

impl Partial {
    fn new(n: usize) -> Self {
        Partial { moments: vec![0; n], support: vec![0; n], mass: vec![0; n] }
    }

    fn merge(mut self, other: Partial) -> Partial {
        for (a, b) in self.moments.iter_mut().zip(other.moments) {
            *a += b;
        }
        for (a, b) in self.support.iter_mut().zip(other.support) {
            *a += b;
        }
        for (a, b) in self.mass.iter_mut().zip(other.mass) {
            *a += b;
        }
        self
    }
}

pub(super) fn sweep(set: &PointSet) -> Result<SweepResult> {
    let space = set.space();
    let field = space.field();
    if !field.is_prime_field() {
        return Err(Error::BackendUnsupported {
            backend: "dft",
            reason: format!(
                "element codes of F_{}^{} do not form the cyclic group Z/q; use the naive backend",
                field.characteristic(),
                field.degree()
            ),
        });
    }
    let q = field.order() as usize;
    let d = space.dim();
    let n = space.size() as usize;
    let plan = NdFft::new(q, d);

    let mut scratch = Vec::new();
    let mut set_hat = vec![Complex::default(); n];
    for &idx in set.members() {
        set_hat[idx as usize] = Complex::new(1.0, 0.0);
    }
    plan.forward(&mut set_hat, &mut scratch);

    // Norm of every flat index, grouped into spheres.
    let kernel = DistanceKernel::new(field);
    let zero = vec![0u32; d];
    let norms: Vec<u32> = (0..n as u64)
        .into_par_iter()
        .map_init(
            || vec![0u32; d],
            |buf, idx| {
                space.decode_into(idx, buf);
                kernel.distance(buf, &zero)
            },
        )
        .collect();
    let mut spheres: Vec<Vec<usize>> = vec![Vec::new(); q];
    for (idx, &t) in norms.iter().enumerate() {
        spheres[t as usize].push(idx);
    }

    let scale = 1.0 / n as f64;
    let partial = spheres
        .par_iter()
        .try_fold(
            || (Partial::new(n), vec![Complex::default(); n], Vec::new()),
            |(mut acc, mut buf, mut scratch), sphere| {
                if sphere.is_empty() || set.is_empty() {
                    return Ok((acc, buf, scratch));
                }
                buf.iter_mut().for_each(|v| *v = Complex::default());
                for &idx in sphere {
                    buf[idx] = Complex::new(1.0, 0.0);
                }
                plan.forward(&mut buf, &mut scratch);
                for (v, e) in buf.iter_mut().zip(&set_hat) {
                    *v = e * v.conj();
                }
                plan.inverse(&mut buf, &mut scratch);
                for (y, v) in buf.iter().enumerate() {
                    let re = v.re * scale;
                    let im = v.im * scale;
                    let rounded = re.round();
                    let residual = (re - rounded).abs().max(im.abs());
                    if residual >= ROUNDING_TOLERANCE || rounded < 0.0 {
                        return Err(Error::ResidualTooLarge {
                            residual,
                            tolerance: ROUNDING_TOLERANCE,
                            context: format!("correlation entry at pin {y}"),
                        });
                    }
                    let c = rounded as u64;
                    acc.moments[y] += c * c;
                    acc.support[y] += (c > 0) as u32;
                    acc.mass[y] += c;
                }
                Ok((acc, buf, scratch))
            },
        )
        .map(|r| r.map(|(acc, _, _)| acc))
        .try_reduce(|| Partial::new(n), |a, b| Ok(a.merge(b)))?;

    let expected = set.len() as u64;
    if let Some(y) = partial.mass.iter().position(|&m| m != expected) {
        return Err(Error::ResidualTooLarge {
            residual: (partial.mass[y] as f64 - expected as f64).abs(),
            tolerance: 0.0,
            context: format!("correlation counts at pin {y} do not sum to |E|"),
        });
    }
    Ok(SweepResult::new(partial.moments, partial.support, expected))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Direct O(n^2) d-dimensional DFT.
    fn dft_direct(data: &[Complex<f64>], q: usize, d: usize) -> Vec<Complex<f64>> {
        let n = data.len();
        let digits = |mut i: usize| -> Vec<usize> {
            (0..d).map(|_| { let r = i % q; i /= q; r }).collect()
        };
        (0..n)
            .map(|k| {
                let kd = digits(k);
                data.iter().enumerate().fold(Complex::default(), |acc, (x, v)| {
                    let xd = digits(x);
                    let phase: usize = kd.iter().zip(&xd).map(|(a, b)| a * b).sum::<usize>() % q;
                    let angle = -std::f64::consts::TAU * phase as f64 / q as f64;
                    acc + v * Complex::from_polar(1.0, angle)
                })
            })
            .collect()
    }

    #[test]
    fn nd_transform_matches_direct_dft() {
        for (q, d) in [(3usize, 2usize), (5, 3), (7, 1), (4, 2)] {
            let n = q.pow(d as u32);
            let data: Vec<Complex<f64>> = (0..n)
                .map(|i| Complex::new(((i * 37) % 11) as f64, ((i * 5) % 3) as f64))
                .collect();
            let expected = dft_direct(&data, q, d);
            let mut got = data.clone();
            NdFft::new(q, d).forward(&mut got, &mut Vec::new());
            for (a, b) in got.iter().zip(&expected) {
                assert!((a - b).norm() < 1e-9, "q={q} d={d}");
            }
        }
    }
}
