//! Maximal correlation straight from its definition: alternate between the
//! best score on `X` for a fixed score on `Y` and vice versa. Shares no code
//! with the singular-value route so the two can check each other.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dist::{JointDist2, MASS_TOL};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BruteForceConfig {
    pub restarts: usize,
    pub iters: usize,
    pub seed: u64,
}

impl Default for BruteForceConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            iters: 200,
            seed: 0,
        }
    }
}

/// Centers `f` under `weights` and scales it to unit variance. Returns false
/// when `f` is constant on the support.
fn standardize(f: &mut [f64], weights: &[f64]) -> bool {
    let mean: f64 = f.iter().zip(weights).map(|(v, w)| v * w).sum();
    f.iter_mut().for_each(|v| *v -= mean);
    let var: f64 = f.iter().zip(weights).map(|(v, w)| v * v * w).sum();
    if var <= 1e-300 {
        return false;
    }
    let s = var.sqrt();
    f.iter_mut().for_each(|v| *v /= s);
    true
}

/// Best correlation of `f(X)` and `g(Y)` over real scores, by alternating
/// conditional expectations `f ∝ E[g(Y)|X]`, `g ∝ E[f(X)|Y]` from random starts.
pub fn maxcorr_bruteforce(d: &JointDist2, restarts: usize, iters: usize, seed: u64) -> f64 {
    let (px, py) = (d.marginal_x(), d.marginal_y());
    let xs: Vec<usize> = (0..d.nx()).filter(|&x| px[x] > MASS_TOL).collect();
    let ys: Vec<usize> = (0..d.ny()).filter(|&y| py[y] > MASS_TOL).collect();
    if xs.len() < 2 || ys.len() < 2 {
        return 0.0;
    }
    let wx: Vec<f64> = xs.iter().map(|&x| px[x]).collect();
    let wy: Vec<f64> = ys.iter().map(|&y| py[y]).collect();
    let joint = |i: usize, j: usize| d.p(xs[i], ys[j]);

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = 0.0f64;
    for _ in 0..restarts.max(1) {
        let mut g: Vec<f64> = (0..ys.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if !standardize(&mut g, &wy) {
            continue;
        }
        let mut f = vec![0.0; xs.len()];
        let mut corr = f64::NEG_INFINITY;
        for _ in 0..iters {
            for (i, fi) in f.iter_mut().enumerate() {
                *fi = (0..ys.len()).map(|j| joint(i, j) * g[j]).sum::<f64>() / wx[i];
            }
            if !standardize(&mut f, &wx) {
                break;
            }
            for (j, gj) in g.iter_mut().enumerate() {
                *gj = (0..xs.len()).map(|i| joint(i, j) * f[i]).sum::<f64>() / wy[j];
            }
            if !standardize(&mut g, &wy) {
                break;
            }
            let next: f64 = (0..xs.len())
                .flat_map(|i| (0..ys.len()).map(move |j| (i, j)))
                .map(|(i, j)| joint(i, j) * f[i] * g[j])
                .sum();
            let improved = next - corr;
            corr = next;
            if improved.abs() < 1e-12 {
                break;
            }
        }
        if corr.is_finite() {
            best = best.max(corr.abs());
        }
    }
    best.min(1.0)
}
