//! Penalized multi-start simplex search over channels `K[w | x, y]`.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use super::nelder_mead::{self, Options};
use crate::corr::second_singular_value_fast;
use crate::dist::MASS_TOL;

/// Objective and constraint of one channel on a fixed pair distribution.
pub(crate) struct Evaluator {
    pxy: Vec<f64>,
    nx: usize,
    ny: usize,
    pub nw: usize,
    joint: Vec<f64>,
    pw: Vec<f64>,
    slice: Vec<f64>,
    pub evals: usize,
}

impl Evaluator {
    pub fn new(pxy: &[f64], nx: usize, ny: usize, nw: usize) -> Self {
        let n = nx * ny;
        Self {
            pxy: pxy.to_vec(),
            nx,
            ny,
            nw,
            joint: vec![0.0; n * nw],
            pw: vec![0.0; nw],
            slice: vec![0.0; n],
            evals: 0,
        }
    }

    pub fn inputs(&self) -> usize {
        self.nx * self.ny
    }

    /// `(I(X,Y;W) in bits, ρ_m(X;Y|W))` for a row-stochastic kernel of width `nw`.
    pub fn eval(&mut self, kernel: &[f64]) -> (f64, f64) {
        self.evals += 1;
        let (n, nw) = (self.inputs(), self.nw);
        self.pw.iter_mut().for_each(|v| *v = 0.0);
        for xy in 0..n {
            for w in 0..nw {
                let j = self.pxy[xy] * kernel[xy * nw + w];
                self.joint[xy * nw + w] = j;
                self.pw[w] += j;
            }
        }
        let mut mi = 0.0;
        for xy in 0..n {
            for w in 0..nw {
                let j = self.joint[xy * nw + w];
                if j > 0.0 {
                    mi += j * (j / (self.pxy[xy] * self.pw[w])).log2();
                }
            }
        }
        let mut rho = 0.0f64;
        for w in 0..nw {
            if self.pw[w] <= MASS_TOL {
                continue;
            }
            for xy in 0..n {
                self.slice[xy] = self.joint[xy * nw + w];
            }
            let s = if self.nx == 2 && self.ny == 2 {
                binary_second_singular_value(&self.slice)
            } else {
                second_singular_value_fast(&self.slice, self.nx, self.ny)
            };
            rho = rho.max(s);
        }
        (mi.max(0.0), rho)
    }
}

fn binary_second_singular_value(m: &[f64]) -> f64 {
    let total = m[0] + m[1] + m[2] + m[3];
    let cutoff = MASS_TOL * total;
    let (r0, r1) = (m[0] + m[1], m[2] + m[3]);
    let (c0, c1) = (m[0] + m[2], m[1] + m[3]);
    if r0 <= cutoff || r1 <= cutoff || c0 <= cutoff || c1 <= cutoff {
        return 0.0;
    }
    let fro = m[0] * m[0] / (r0 * c0)
        + m[1] * m[1] / (r0 * c1)
        + m[2] * m[2] / (r1 * c0)
        + m[3] * m[3] / (r1 * c1);
    (fro - 1.0).max(0.0).sqrt().min(1.0)
}

/// A channel with its objective and constraint value.
#[derive(Debug, Clone)]
pub(crate) struct Candidate {
    pub kernel: Vec<f64>,
    pub value: f64,
    pub rho: f64,
}

/// Row-wise softmax of `logits` (width `m`) padded with zeros to width `nw`.
fn kernel_from_logits(logits: &[f64], m: usize, nw: usize, out: &mut [f64]) {
    for (row, out_row) in logits.chunks(m).zip(out.chunks_mut(nw)) {
        let top = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let mut total = 0.0;
        for (o, &z) in out_row.iter_mut().zip(row) {
            *o = (z - top).exp();
            total += *o;
        }
        for o in out_row[..m].iter_mut() {
            *o /= total;
        }
        for o in out_row[m..].iter_mut() {
            *o = 0.0;
        }
    }
}

/// Logits reproducing `kernel` restricted to its first `m` outputs.
pub(crate) fn logits_from_kernel(kernel: &[f64], nw: usize, m: usize) -> Vec<f64> {
    kernel
        .chunks(nw)
        .flat_map(|row| row[..m].iter().map(|&k| k.max(1e-12).ln()))
        .collect()
}

/// Number of outputs actually used by a kernel (highest nonzero column + 1).
pub(crate) fn used_outputs(kernel: &[f64], nw: usize) -> usize {
    (0..nw)
        .rev()
        .find(|&w| kernel.chunks(nw).any(|row| row[w] > 0.0))
        .map_or(1, |w| w + 1)
}

pub(crate) struct SearchParams {
    pub beta: f64,
    pub penalty_weight: f64,
    pub constraint_tol: f64,
}

impl SearchParams {
    fn feasible(&self, rho: f64) -> bool {
        rho <= self.beta + self.constraint_tol
    }
}

/// One local descent: simplex search on the penalized objective with the
/// penalty weight raised until the constraint holds, then a feasibility
/// repair by mixing toward `W = (X, Y)`.
pub(crate) fn local_descent(
    ev: &mut Evaluator,
    params: &SearchParams,
    start_logits: Vec<f64>,
    m: usize,
    budget: usize,
) -> Option<Candidate> {
    let (n, nw) = (ev.inputs(), ev.nw);
    let mut kernel = vec![0.0; n * nw];
    let mut x = start_logits;
    let stages = 6;
    let mut weight = params.penalty_weight;
    let mut spent = 0;
    for stage in 0..stages {
        let stage_budget = (budget.saturating_sub(spent)) / (stages - stage);
        if stage_budget < 2 * x.len() + 2 {
            break;
        }
        let opts = Options {
            step: if stage == 0 { 1.0 } else { 0.3 },
            max_evals: stage_budget,
            ftol: 1e-13,
            xtol: 1e-7,
        };
        let beta = params.beta;
        let mut objective = |z: &[f64]| {
            kernel_from_logits(z, m, nw, &mut kernel);
            let (mi, rho) = ev.eval(&kernel);
            let excess = (rho - beta).max(0.0);
            mi + weight * excess * excess
        };
        let found = nelder_mead::minimize(&mut objective, &x, &opts);
        spent += found.evals;
        x = found.x;
        kernel_from_logits(&x, m, nw, &mut kernel);
        let (_, rho) = ev.eval(&kernel);
        if stage > 0 && rho <= params.beta + 0.5 * params.constraint_tol {
            break;
        }
        weight *= 100.0;
    }
    kernel_from_logits(&x, m, nw, &mut kernel);
    repair(ev, params, kernel)
}

/// Makes `kernel` feasible by the smallest mixture weight toward the identity
/// channel found by bisection.
pub(crate) fn repair(
    ev: &mut Evaluator,
    params: &SearchParams,
    kernel: Vec<f64>,
) -> Option<Candidate> {
    let (value, rho) = ev.eval(&kernel);
    if params.feasible(rho) {
        return Some(Candidate { kernel, value, rho });
    }
    let (n, nw) = (ev.inputs(), ev.nw);
    if nw < n {
        return None;
    }
    let mix = |t: f64| -> Vec<f64> {
        let mut k: Vec<f64> = kernel.iter().map(|v| (1.0 - t) * v).collect();
        for xy in 0..n {
            k[xy * nw + xy] += t;
        }
        k
    };
    let (mut lo, mut hi) = (0.0, 1.0);
    let mut best = mix(1.0);
    for _ in 0..40 {
        let mid = 0.5 * (lo + hi);
        let k = mix(mid);
        let (_, r) = ev.eval(&k);
        if params.feasible(r) {
            hi = mid;
            best = k;
        } else {
            lo = mid;
        }
    }
    let (value, rho) = ev.eval(&best);
    params.feasible(rho).then_some(Candidate {
        kernel: best,
        value,
        rho,
    })
}

/// Output counts tried by successive random restarts.
fn restart_width(r: usize, nw: usize) -> usize {
    let pattern = [2, nw, 3, nw];
    pattern[r % pattern.len()].clamp(1, nw)
}

/// Multi-start search. `warm` kernels seed extra descents before the random ones.
pub(crate) fn multistart(
    ev: &mut Evaluator,
    params: &SearchParams,
    warm: &[Vec<f64>],
    restarts: usize,
    max_evals: usize,
    rng: &mut ChaCha8Rng,
) -> Option<Candidate> {
    let nw = ev.nw;
    let n = ev.inputs();
    let runs = warm.len() + restarts;
    if runs == 0 {
        return None;
    }
    let per_run = max_evals / runs;
    let mut best: Option<Candidate> = None;
    let consider = |c: Option<Candidate>, best: &mut Option<Candidate>| {
        if let Some(c) = c {
            if best.as_ref().map_or(true, |b| c.value < b.value) {
                *best = Some(c);
            }
        }
    };
    for k in warm {
        let m = used_outputs(k, nw).max(2).min(nw);
        let logits = logits_from_kernel(k, nw, m);
        let c = local_descent(ev, params, logits, m, per_run);
        consider(c, &mut best);
    }
    for r in 0..restarts {
        let m = restart_width(r, nw);
        let logits: Vec<f64> = (0..n * m).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let c = local_descent(ev, params, logits, m, per_run);
        consider(c, &mut best);
    }
    best
}
