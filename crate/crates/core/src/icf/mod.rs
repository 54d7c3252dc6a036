//! The information-correlation function
//! `C_β(X;Y) = inf { I(X,Y;W) : ρ_m(X;Y|W) ≤ β }` on finite pairs, its endpoints
//! (Wyner and Gács–Körner common information) and the closed-form upper bound
//! for the doubly symmetric binary source.
//!
//! The infimum is estimated by a penalized multi-start simplex search over
//! channels with `|W| = |X||Y|` outputs, seeded with deterministic structural
//! channels. Every reported value is attained by a returned feasible witness,
//! so it is an upper bound on the true infimum.

mod nelder_mead;
mod search;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corr::{common_part, cond_maxcorr, maxcorr_svd};
use crate::dist::{Channel, JointDist2};
use crate::error::{Error, Result};
use crate::info::{entropy, h2, h4, mi_xy_w};
use search::{Candidate, Evaluator, SearchParams};

/// Settings of the channel search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    /// Objective evaluations allowed per β.
    pub max_evals: usize,
    pub penalty_weight: f64,
    pub constraint_tol: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 16,
            max_evals: 200_000,
            penalty_weight: 100.0,
            constraint_tol: 1e-6,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.max_evals == 0 {
            return Err(Error::OutOfRange(
                "restarts and max_evals must be positive".into(),
            ));
        }
        if !(self.penalty_weight > 0.0 && self.constraint_tol > 0.0) {
            return Err(Error::OutOfRange(
                "penalty_weight and constraint_tol must be positive".into(),
            ));
        }
        Ok(())
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }
}

/// One evaluated point of the function.
#[derive(Debug, Clone, PartialEq)]
pub struct IcfPoint {
    pub beta: f64,
    /// `I(X,Y;W)` of the witness, in bits.
    pub value: f64,
    pub witness: Channel,
    /// `ρ_m(X;Y|W) − β` of the witness (at most the constraint tolerance).
    pub constraint_residual: f64,
}

/// Function values on an increasing β grid.
#[derive(Debug, Clone, PartialEq)]
pub struct BetaCurve {
    pub points: Vec<IcfPoint>,
    /// Per-point optimizer values before the monotone post-pass.
    pub raw_values: Vec<f64>,
}

impl BetaCurve {
    pub fn betas(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.beta).collect()
    }

    pub fn values(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.value).collect()
    }
}

/// `(I(X,Y;W), ρ_m(X;Y|W))` for a given channel.
pub fn icf_evaluate(d: &JointDist2, channel: &Channel) -> Result<(f64, f64)> {
    let joint = d.attach_channel(channel)?;
    Ok((mi_xy_w(d, channel)?, cond_maxcorr(&joint)))
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("beta={beta} not in [0,1]")))
    }
}

/// Estimates `C_β(X;Y)` in bits.
pub fn icf_minimize(d: &JointDist2, beta: f64, cfg: &OptimizerConfig) -> Result<IcfPoint> {
    icf_minimize_from(d, beta, cfg, None)
}

/// Like [`icf_minimize`], additionally trying `warm` (a channel on the same
/// inputs) as a candidate and as a descent start.
pub fn icf_minimize_from(
    d: &JointDist2,
    beta: f64,
    cfg: &OptimizerConfig,
    warm: Option<&Channel>,
) -> Result<IcfPoint> {
    cfg.validate()?;
    check_beta(beta)?;
    let (nx, ny) = (d.nx(), d.ny());
    let n = nx * ny;
    let rho_m = maxcorr_svd(d);
    if beta >= rho_m - 1e-9 {
        return Ok(IcfPoint {
            beta,
            value: 0.0,
            witness: Channel::constant(nx, ny, n),
            constraint_residual: rho_m - beta,
        });
    }
    if let Some(w) = warm {
        if w.input_size_x() != nx || w.input_size_y() != ny || w.output_size() > n {
            return Err(Error::ShapeMismatch(
                "warm-start channel does not fit".into(),
            ));
        }
    }

    let canon = Canonical::of(d);
    let mut ev = Evaluator::new(&canon.pmf, canon.nx, canon.ny, n);
    let params = SearchParams {
        beta,
        penalty_weight: cfg.penalty_weight,
        constraint_tol: cfg.constraint_tol,
    };
    let mut best: Option<Candidate> = None;
    let consider = |c: Candidate, best: &mut Option<Candidate>| {
        if params_feasible(&params, c.rho) && best.as_ref().map_or(true, |b| c.value < b.value) {
            *best = Some(c);
        }
    };

    let warm_canon = warm.map(|w| canon.forward(&w.padded(n)));
    let mut structural = structural_channels(&canon.dist());
    if let Some(w) = &warm_canon {
        structural.push(w.clone());
    }
    for ch in &structural {
        if ev.evals >= cfg.max_evals {
            break;
        }
        let (value, rho) = ev.eval(ch.kernel());
        consider(
            Candidate {
                kernel: ch.kernel().to_vec(),
                value,
                rho,
            },
            &mut best,
        );
    }
    if let Some(c) = dsbs_ansatz_sweep(&mut ev, &canon, &params, cfg.max_evals) {
        consider(c, &mut best);
    }

    let remaining = cfg.max_evals.saturating_sub(ev.evals);
    if remaining > 0 {
        let mut seeds: Vec<Vec<f64>> = Vec::new();
        if let Some(b) = &best {
            seeds.push(b.kernel.clone());
        }
        if let Some(w) = &warm_canon {
            seeds.push(w.kernel().to_vec());
        }
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        if let Some(c) =
            search::multistart(&mut ev, &params, &seeds, cfg.restarts, remaining, &mut rng)
        {
            consider(c, &mut best);
        }
    }

    let Some(found) = best else {
        return Err(Error::OptimizerBudgetExceeded {
            beta,
            max_evals: cfg.max_evals,
        });
    };
    let canon_channel = Channel::new(canon.nx, canon.ny, n, found.kernel)?;
    let witness = canon.back(&canon_channel);
    let (value, rho) = icf_evaluate(d, &witness)?;
    if rho > beta + cfg.constraint_tol {
        // The canonical form differs from `d` by rounding only; fall back to W = (X, Y).
        let witness = Channel::identity(nx, ny);
        let (value, rho) = icf_evaluate(d, &witness)?;
        return Ok(IcfPoint {
            beta,
            value,
            witness,
            constraint_residual: rho - beta,
        });
    }
    Ok(IcfPoint {
        beta,
        value,
        witness,
        constraint_residual: rho - beta,
    })
}

fn params_feasible(params: &SearchParams, rho: f64) -> bool {
    rho <= params.beta + params.constraint_tol
}

/// Deterministic channels that are often optimal or at least feasible:
/// constant, the common part, `W = X`, `W = Y` and `W = (X, Y)`.
fn structural_channels(d: &JointDist2) -> Vec<Channel> {
    let (nx, ny) = (d.nx(), d.ny());
    let n = nx * ny;
    let (comp_x, comp_y, _) = common_part(d);
    let gk = Channel::deterministic(nx, ny, n, |x, y| comp_x[x].or(comp_y[y]).unwrap_or(0));
    vec![
        Channel::constant(nx, ny, n),
        gk,
        Channel::deterministic(nx, ny, n, |x, _| x),
        Channel::deterministic(nx, ny, n, |_, y| y),
        Channel::identity(nx, ny),
    ]
}

/// For symmetric binary inputs, sweeps the two-slice family
/// `P_{XY|W=0} = [[a, p0/2], [p0/2, b]]`, `P_{XY|W=1} = [[b, p0/2], [p0/2, a]]`
/// with `W ~ Bern(½)` and `a + b = 1 − p0` over `a` on a `1e-4` grid.
fn dsbs_ansatz_sweep(
    ev: &mut Evaluator,
    canon: &Canonical,
    params: &SearchParams,
    max_evals: usize,
) -> Option<Candidate> {
    if canon.nx != 2 || canon.ny != 2 {
        return None;
    }
    let p = &canon.pmf;
    if (p[0] - p[3]).abs() > 1e-12 || (p[1] - p[2]).abs() > 1e-12 || p[0] < p[1] {
        return None;
    }
    let p0 = p[1] + p[2];
    let same = 1.0 - p0;
    let nw = ev.nw;
    let mut best: Option<Candidate> = None;
    let steps = (0.5 * same / 1e-4).floor() as usize;
    for k in 0..=steps {
        if ev.evals >= max_evals {
            break;
        }
        let a = 0.5 * same + k as f64 * 1e-4;
        let b = (same - a).max(0.0);
        let slice0 = [a, 0.5 * p0, 0.5 * p0, b];
        let mut kernel = vec![0.0; 4 * nw];
        for xy in 0..4 {
            let k0 = if p[xy] > 0.0 {
                (0.5 * slice0[xy] / p[xy]).clamp(0.0, 1.0)
            } else {
                0.5
            };
            kernel[xy * nw] = k0;
            kernel[xy * nw + 1] = 1.0 - k0;
        }
        let (value, rho) = ev.eval(&kernel);
        if params_feasible(params, rho) && best.as_ref().map_or(true, |c| value < c.value) {
            best = Some(Candidate { kernel, value, rho });
        }
    }
    best
}

/// `d` with rows and columns reordered (and possibly swapped) into a canonical
/// order and masses snapped to a dyadic grid, so relabelings of one
/// distribution give the optimizer bit-identical problems.
struct Canonical {
    nx: usize,
    ny: usize,
    pmf: Vec<f64>,
    /// Whether the canonical form is `(Y, X)` rather than `(X, Y)`.
    transposed: bool,
    row_perm: Vec<usize>,
    col_perm: Vec<usize>,
    inv_row: Vec<usize>,
    inv_col: Vec<usize>,
}

const SNAP: f64 = 17_592_186_044_416.0; // 2^44

impl Canonical {
    fn of(d: &JointDist2) -> Self {
        let snapped: Vec<f64> = d.pmf().iter().map(|p| (p * SNAP).round() / SNAP).collect();
        let transposed_pmf = || {
            let (nx, ny) = (d.nx(), d.ny());
            (0..ny * nx)
                .map(|k| snapped[(k % nx) * ny + k / nx])
                .collect::<Vec<f64>>()
        };
        // Wide orientation (nx ≤ ny); square inputs try both.
        let orientations: Vec<bool> = match d.nx().cmp(&d.ny()) {
            std::cmp::Ordering::Less => vec![false],
            std::cmp::Ordering::Equal => vec![false, true],
            std::cmp::Ordering::Greater => vec![true],
        };
        let identity = |k: usize| (0..k).collect::<Vec<_>>();
        let greater = |a: &[f64], b: &[f64]| {
            a.iter()
                .zip(b)
                .map(|(a, b)| a.total_cmp(b))
                .find(|o| o.is_ne())
                == Some(std::cmp::Ordering::Greater)
        };
        let mut best: Option<(bool, Vec<f64>, Vec<usize>, Vec<usize>)> = None;
        for transposed in orientations {
            let (nx, ny) = if transposed {
                (d.ny(), d.nx())
            } else {
                (d.nx(), d.ny())
            };
            let base = if transposed {
                transposed_pmf()
            } else {
                snapped.clone()
            };
            let (mut row_perm, mut col_perm) = (identity(nx), identity(ny));
            let mut best_key = base.clone();
            if nx <= 4 && ny <= 4 {
                for rp in permutations(nx) {
                    for cp in permutations(ny) {
                        let k = reorder(&base, ny, &rp, &cp);
                        if greater(&k, &best_key) {
                            best_key = k;
                            row_perm = rp.clone();
                            col_perm = cp.clone();
                        }
                    }
                }
            }
            if best.as_ref().map_or(true, |b| greater(&best_key, &b.1)) {
                best = Some((transposed, best_key, row_perm, col_perm));
            }
        }
        let (transposed, mut pmf, row_perm, col_perm) = best.expect("at least one orientation");
        let total: f64 = pmf.iter().sum();
        pmf.iter_mut().for_each(|p| *p /= total);
        let invert = |perm: &[usize]| {
            let mut inv = vec![0; perm.len()];
            for (i, &p) in perm.iter().enumerate() {
                inv[p] = i;
            }
            inv
        };
        Self {
            nx: row_perm.len(),
            ny: col_perm.len(),
            transposed,
            inv_row: invert(&row_perm),
            inv_col: invert(&col_perm),
            pmf,
            row_perm,
            col_perm,
        }
    }

    /// A channel on the inputs of `d` as a channel on the canonical inputs.
    fn forward(&self, ch: &Channel) -> Channel {
        let ch = if self.transposed {
            ch.transposed_inputs()
        } else {
            ch.clone()
        };
        ch.permuted_inputs(&self.row_perm, &self.col_perm)
    }

    /// Inverse of [`Canonical::forward`].
    fn back(&self, ch: &Channel) -> Channel {
        let ch = ch.permuted_inputs(&self.inv_row, &self.inv_col);
        if self.transposed {
            ch.transposed_inputs()
        } else {
            ch
        }
    }

    fn dist(&self) -> JointDist2 {
        JointDist2::new(
            crate::dist::Alphabet::indexed(self.nx),
            crate::dist::Alphabet::indexed(self.ny),
            self.pmf.clone(),
        )
        .expect("canonical pmf is a valid distribution")
    }
}

fn reorder(pmf: &[f64], ny: usize, rows: &[usize], cols: &[usize]) -> Vec<f64> {
    rows.iter()
        .flat_map(|&x| cols.iter().map(move |&y| pmf[x * ny + y]))
        .collect()
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn extend(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        for i in 0..n {
            if !prefix.contains(&i) {
                prefix.push(i);
                extend(prefix, n, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::with_capacity(n), n, &mut out);
    out
}

/// Estimates on a sorted β grid, warm-starting each point from the previous
/// witness. Values are made non-increasing by carrying forward earlier
/// witnesses, which stay feasible for larger β.
pub fn icf_curve(d: &JointDist2, betas: &[f64], cfg: &OptimizerConfig) -> Result<BetaCurve> {
    for b in betas {
        check_beta(*b)?;
    }
    if betas.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::OutOfRange("beta grid must be sorted".into()));
    }
    let mut points: Vec<IcfPoint> = Vec::with_capacity(betas.len());
    let mut raw_values = Vec::with_capacity(betas.len());
    for (i, &beta) in betas.iter().enumerate() {
        let point_cfg = cfg.with_seed(cfg.seed ^ i as u64);
        let warm = points.last().map(|p| p.witness.clone());
        let mut point = icf_minimize_from(d, beta, &point_cfg, warm.as_ref())?;
        raw_values.push(point.value);
        if let Some(prev) = points.last() {
            if prev.value < point.value {
                let (_, rho) = icf_evaluate(d, &prev.witness)?;
                point = IcfPoint {
                    beta,
                    value: prev.value,
                    witness: prev.witness.clone(),
                    constraint_residual: rho - beta,
                };
            }
        }
        points.push(point);
    }
    Ok(BetaCurve { points, raw_values })
}

/// Wyner common information `C_0(X;Y)` in bits.
pub fn wyner_common_info(d: &JointDist2, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(icf_minimize(d, 0.0, cfg)?.value)
}

/// Left-limit estimates of `C_β` as `β → 1` next to the Gács–Körner value.
#[derive(Debug, Clone, PartialEq)]
pub struct GkEndpointCheck {
    /// `(β, estimate)` for `β = 0.9, 0.99, 0.999`.
    pub approach: Vec<(f64, f64)>,
    pub icf_left_limit_estimate: f64,
    pub gk: f64,
}

pub fn gk_endpoint_check(d: &JointDist2, cfg: &OptimizerConfig) -> Result<GkEndpointCheck> {
    let mut approach = Vec::new();
    for eps in [0.1, 0.01, 0.001] {
        let beta = 1.0 - eps;
        approach.push((beta, icf_minimize(d, beta, cfg)?.value));
    }
    let icf_left_limit_estimate = approach.last().map(|a| a.1).unwrap_or(0.0);
    Ok(GkEndpointCheck {
        approach,
        icf_left_limit_estimate,
        gk: crate::corr::gk_common_info(d),
    })
}

fn dsbs_args(p0: f64, beta: f64) -> Result<Option<(f64, f64)>> {
    if !(0.0..=0.5).contains(&p0) {
        return Err(Error::OutOfRange(format!("p0={p0} not in [0,1/2]")));
    }
    check_beta(beta)?;
    if beta >= 1.0 - 2.0 * p0 {
        return Ok(None);
    }
    let s = ((1.0 - 2.0 * p0 - beta) / (1.0 - beta)).sqrt();
    Ok(Some((0.5 * (1.0 - p0 + s), 0.5 * (1.0 - p0 - s))))
}

/// Closed-form upper bound on `C_β` of the doubly symmetric binary source with
/// crossover `p0`, in bits.
pub fn dsbs_icf_upper(p0: f64, beta: f64) -> Result<f64> {
    match dsbs_args(p0, beta)? {
        None => Ok(0.0),
        Some((a, b)) => Ok((1.0 + h2(p0)? - h4(a, b, p0 / 2.0, p0 / 2.0)?).max(0.0)),
    }
}

/// The two-slice channel attaining [`dsbs_icf_upper`]; `None` when the bound is 0.
pub fn dsbs_witness(p0: f64, beta: f64) -> Result<Option<Channel>> {
    let Some((a, b)) = dsbs_args(p0, beta)? else {
        return Ok(None);
    };
    let p = [(1.0 - p0) / 2.0, p0 / 2.0, p0 / 2.0, (1.0 - p0) / 2.0];
    let slice0 = [a, p0 / 2.0, p0 / 2.0, b];
    let mut kernel = Vec::with_capacity(8);
    for xy in 0..4 {
        let k0 = if p[xy] > 0.0 {
            (0.5 * slice0[xy] / p[xy]).clamp(0.0, 1.0)
        } else {
            0.5
        };
        kernel.extend([k0, 1.0 - k0]);
    }
    Channel::new(2, 2, 2, kernel).map(Some)
}

/// Product-witness construction on two independent pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductWitness {
    /// `I(X²,Y²;W₁W₂)` of the product channel on the product pair.
    pub value: f64,
    /// Objectives of the two single-pair witnesses.
    pub component_values: [f64; 2],
    /// `ρ_m(X²;Y²|W₁W₂)`.
    pub rho_w: f64,
    pub component_rhos: [f64; 2],
    pub witness: Channel,
}

impl ProductWitness {
    pub fn sum(&self) -> f64 {
        self.component_values[0] + self.component_values[1]
    }
}

/// Upper bound on `C_β` of `(X1,X2; Y1,Y2)` from the product of per-pair witnesses.
pub fn icf_additivity_upper(
    d1: &JointDist2,
    d2: &JointDist2,
    beta: f64,
    cfg: &OptimizerConfig,
) -> Result<ProductWitness> {
    let p1 = icf_minimize(d1, beta, cfg)?;
    let p2 = icf_minimize(d2, beta, &cfg.with_seed(cfg.seed ^ 1))?;
    let witness = p1.witness.product(&p2.witness);
    let product = d1.product_pair(d2);
    let (value, rho_w) = icf_evaluate(&product, &witness)?;
    Ok(ProductWitness {
        value,
        component_values: [p1.value, p2.value],
        rho_w,
        component_rhos: [p1.constraint_residual + beta, p2.constraint_residual + beta],
        witness,
    })
}

/// `H(X, Y)` in bits, the objective of `W = (X, Y)`.
pub fn identity_objective(d: &JointDist2) -> f64 {
    entropy(d.pmf())
}
