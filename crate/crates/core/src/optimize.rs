//! Seeded multi-start Nelder–Mead maximization.
//!
//! Shared by the CHSH settings search, the accessible-information search and
//! the multiparty settings search. Everything is deterministic for a fixed
//! seed: starts are drawn from a ChaCha stream and evaluated sequentially.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Single-simplex Nelder–Mead with dimension-adaptive coefficients
/// (Gao & Han), which behaves better than the classic 1/2/0.5/0.5 set in
/// 8–20 dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMead {
    pub max_iter: usize,
    /// Converged once every vertex lies within this distance of the best one.
    pub diameter_tol: f64,
    pub initial_step: f64,
}

impl Default for NelderMead {
    fn default() -> Self {
        Self {
            max_iter: 500,
            diameter_tol: 1e-9,
            initial_step: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimum {
    pub point: Vec<f64>,
    pub value: f64,
}

impl NelderMead {
    /// Maximizes `f` starting from `x0`.
    pub fn maximize<F: Fn(&[f64]) -> f64>(&self, f: &F, x0: &[f64]) -> Optimum {
        let n = x0.len();
        assert!(n >= 1, "need at least one parameter");
        let nf = n as f64;
        let (reflect, expand) = (1.0, 1.0 + 2.0 / nf);
        let contract = (0.75 - 1.0 / (2.0 * nf)).max(0.25);
        let shrink = (1.0 - 1.0 / nf).max(0.5);

        // minimize g = -f
        let g = |x: &[f64]| {
            let v = -f(x);
            if v.is_nan() {
                f64::INFINITY
            } else {
                v
            }
        };
        let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
        simplex.push((x0.to_vec(), g(x0)));
        for i in 0..n {
            let mut x = x0.to_vec();
            x[i] += self.initial_step;
            let v = g(&x);
            simplex.push((x, v));
        }

        for _ in 0..self.max_iter {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let best = &simplex[0].0;
            let diameter = simplex[1..]
                .iter()
                .map(|(x, _)| distance(x, best))
                .fold(0.0, f64::max);
            if diameter < self.diameter_tol {
                break;
            }

            let mut centroid = vec![0.0; n];
            for (x, _) in &simplex[..n] {
                for (c, xi) in centroid.iter_mut().zip(x) {
                    *c += xi / nf;
                }
            }
            let worst = simplex[n].clone();
            let along = |t: f64| -> Vec<f64> {
                centroid
                    .iter()
                    .zip(&worst.0)
                    .map(|(c, w)| c + t * (c - w))
                    .collect()
            };

            let xr = along(reflect);
            let fr = g(&xr);
            if fr < simplex[0].1 {
                let xe = along(expand);
                let fe = g(&xe);
                simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
                continue;
            }
            if fr < simplex[n - 1].1 {
                simplex[n] = (xr, fr);
                continue;
            }
            let (xc, fc) = if fr < worst.1 {
                let xc = along(reflect * contract);
                let fc = g(&xc);
                (xc, fc)
            } else {
                let xc = along(-contract);
                let fc = g(&xc);
                (xc, fc)
            };
            if fc < worst.1.min(fr) {
                simplex[n] = (xc, fc);
                continue;
            }
            let anchor = simplex[0].0.clone();
            for (x, v) in simplex.iter_mut().skip(1) {
                for (xi, ai) in x.iter_mut().zip(&anchor) {
                    *xi = ai + shrink * (*xi - ai);
                }
                *v = g(x);
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let (point, v) = simplex.swap_remove(0);
        Optimum { point, value: -v }
    }
}

fn distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Multi-start driver: runs [`NelderMead`] from `starts` seeded random
/// points, then restarts from the incumbent `polish_rounds` times with a
/// shrinking initial simplex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultiStart {
    pub starts: usize,
    pub polish_rounds: usize,
    pub local: NelderMead,
}

impl Default for MultiStart {
    fn default() -> Self {
        Self {
            starts: 16,
            polish_rounds: 4,
            local: NelderMead::default(),
        }
    }
}

impl MultiStart {
    /// `sample` draws one starting point from the seeded stream.
    pub fn maximize<F, S>(&self, f: &F, seed: u64, mut sample: S) -> Optimum
    where
        F: Fn(&[f64]) -> f64,
        S: FnMut(&mut ChaCha8Rng) -> Vec<f64>,
    {
        assert!(self.starts >= 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut best: Option<Optimum> = None;
        for _ in 0..self.starts {
            let x0 = sample(&mut rng);
            let candidate = self.local.maximize(f, &x0);
            if best.as_ref().is_none_or(|b| candidate.value > b.value) {
                best = Some(candidate);
            }
        }
        let mut best = best.expect("at least one start");
        let mut step = self.local.initial_step;
        for _ in 0..self.polish_rounds {
            step *= 0.25;
            let local = NelderMead {
                initial_step: step,
                ..self.local
            };
            let candidate = local.maximize(f, &best.point);
            if candidate.value >= best.value {
                best = candidate;
            }
        }
        best
    }
}

/// Uniform angles in `[0, 2π)`, handy as a start sampler.
pub fn uniform_angles(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    (0..dim)
        .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
        .collect()
}

/// Unit vector from polar/azimuthal angles.
pub fn unit_vector(theta: f64, phi: f64) -> [f64; 3] {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}
