//! Feasibility tests for non-interactive simulation of a target pair `(U, V)`
//! from i.i.d. copies of a source pair `(X, Y)`: three outer bounds (maximal
//! correlation, mutual information, information-correlation function) and a
//! single-letter inner bound by local binary channels.

use rayon::prelude::*;

use crate::corr::maxcorr_svd;
use crate::dist::{make_binary, Channel, JointDist2, ProductChannelPair};
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::icf::{icf_curve, OptimizerConfig};
use crate::info::mutual_information;

/// Tolerance on margins of the exact outer checks.
pub const CHECK_TOL: f64 = 1e-9;
/// Allowed excess of the target's ICF estimate over the source's.
pub const ICF_SLACK: f64 = 0.02;
/// Matching tolerance of the inner search.
pub const INNER_TOL: f64 = 1e-3;

// Keeps ties at exactly INNER_TOL from depending on the last bit of q.
const ROUNDING: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OuterCheck {
    pub pass: bool,
    /// Source value minus target value.
    pub margin: f64,
}

impl OuterCheck {
    fn from_margin(margin: f64) -> Self {
        Self {
            pass: margin >= -CHECK_TOL,
            margin,
        }
    }
}

/// `ρ_m(U;V) ≤ ρ_m(X;Y)`.
pub fn mc_outer_check(src: &JointDist2, tgt: &JointDist2) -> OuterCheck {
    OuterCheck::from_margin(maxcorr_svd(src) - maxcorr_svd(tgt))
}

/// `I(U;V) ≤ I(X;Y)` in bits.
pub fn mi_outer_check(src: &JointDist2, tgt: &JointDist2) -> OuterCheck {
    OuterCheck::from_margin(mutual_information(src) - mutual_information(tgt))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IcfCheck {
    pub pass: bool,
    /// Smallest `C_β(src) − C_β(tgt)` over the grid, in bits.
    pub worst_margin: f64,
    pub worst_beta: f64,
    /// `C_β(tgt) = 0` wherever `C_β(src) = 0`, i.e. `ρ_m(tgt) ≤ ρ_m(src)`.
    pub zero_set_ok: bool,
}

/// Default β grid of the ICF comparison.
pub fn default_betas() -> Vec<f64> {
    Grid::new(0.0, 0.05, 1.0).expect("static grid").points()
}

/// Compares two ICF curves sampled on the same β grid.
///
/// Both curves are optimizer estimates, so a point fails only when the target
/// exceeds the source by more than [`ICF_SLACK`]. The zero sets are known
/// exactly (`C_β = 0` iff `β ≥ ρ_m`) and are compared without slack.
pub fn compare_icf_curves(
    betas: &[f64],
    src_values: &[f64],
    src_maxcorr: f64,
    tgt_values: &[f64],
    tgt_maxcorr: f64,
) -> IcfCheck {
    let mut worst_margin = f64::INFINITY;
    let mut worst_beta = betas.first().copied().unwrap_or(0.0);
    for ((&beta, s), t) in betas.iter().zip(src_values).zip(tgt_values) {
        let margin = s - t;
        if margin < worst_margin {
            worst_margin = margin;
            worst_beta = beta;
        }
    }
    let zero_set_ok = tgt_maxcorr <= src_maxcorr + CHECK_TOL;
    IcfCheck {
        pass: zero_set_ok && worst_margin >= -ICF_SLACK,
        worst_margin,
        worst_beta,
        zero_set_ok,
    }
}

/// `C_β(U;V) ≤ C_β(X;Y)` on a β grid.
pub fn icf_outer_check(
    src: &JointDist2,
    tgt: &JointDist2,
    betas: &[f64],
    cfg: &OptimizerConfig,
) -> Result<IcfCheck> {
    let s = icf_curve(src, betas, cfg)?;
    let t = icf_curve(tgt, betas, cfg)?;
    Ok(compare_icf_curves(
        betas,
        &s.values(),
        maxcorr_svd(src),
        &t.values(),
        maxcorr_svd(tgt),
    ))
}

fn check_binary(d: &JointDist2) -> Result<()> {
    if d.nx() == 2 && d.ny() == 2 {
        Ok(())
    } else {
        Err(Error::NotBinary)
    }
}

/// Binary local channel with `P(out = 0 | in = i) = zero_prob[i]`.
fn binary_channel(zero_prob: [f64; 2]) -> Channel {
    let kernel = zero_prob.iter().flat_map(|&a| [a, 1.0 - a]).collect();
    Channel::new(2, 1, 2, kernel).expect("probabilities in [0,1]")
}

/// Binary channels `P(out=0|in=0), P(out=0|in=1)` meeting `P(out=0) = target`
/// exactly, with the first parameter on a grid of step `step`.
fn marginal_matching_channels(p_in0: f64, target: f64, step: f64) -> Vec<[f64; 2]> {
    if p_in0 <= 1e-12 || p_in0 >= 1.0 - 1e-12 {
        return vec![[target, target]];
    }
    let n = (1.0 / step).round() as usize;
    (0..=n)
        .filter_map(|k| {
            let a0 = (k as f64 * step).min(1.0);
            let a1 = (target - a0 * p_in0) / (1.0 - p_in0);
            (-1e-12..=1.0 + 1e-12)
                .contains(&a1)
                .then_some([a0, a1.clamp(0.0, 1.0)])
        })
        .collect()
}

fn simulated_q(src: &JointDist2, a: &[f64; 2], g: &[f64; 2]) -> f64 {
    let mut q = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            q += src.p(x, y) * a[x] * g[y];
        }
    }
    q
}

#[allow(clippy::type_complexity)]
fn local_channel_grid(
    src: &JointDist2,
    (pu0, pv0): (f64, f64),
    grid_step: f64,
) -> Result<(Vec<[f64; 2]>, Vec<[f64; 2]>)> {
    check_binary(src)?;
    if !((0.0..=1.0).contains(&pu0) && (0.0..=1.0).contains(&pv0)) {
        return Err(Error::OutOfRange(format!(
            "target marginals ({pu0}, {pv0}) not in [0,1]"
        )));
    }
    if !(grid_step > 0.0 && grid_step <= 1.0) {
        return Err(Error::OutOfRange(format!(
            "grid step {grid_step} not in (0,1]"
        )));
    }
    Ok((
        marginal_matching_channels(src.marginal_x()[0], pu0, grid_step),
        marginal_matching_channels(src.marginal_y()[0], pv0, grid_step),
    ))
}

/// Every `P_{UV}(0,0)` reachable by binary local channels with the given
/// target marginals, sorted. Channel parameters lie on a grid of `grid_step`.
pub fn inner_reachable_q(
    src: &JointDist2,
    target_marginals: (f64, f64),
    grid_step: f64,
) -> Result<Vec<f64>> {
    let (us, vs) = local_channel_grid(src, target_marginals, grid_step)?;
    let mut qs: Vec<f64> = us
        .iter()
        .flat_map(|a| vs.iter().map(move |g| simulated_q(src, a, g)))
        .collect();
    qs.sort_by(f64::total_cmp);
    Ok(qs)
}

#[derive(Debug, Clone, PartialEq)]
pub enum InnerVerdict {
    Yes(ProductChannelPair),
    No,
    /// The search applies to binary pairs only.
    Unknown,
}

impl InnerVerdict {
    pub fn is_yes(&self) -> bool {
        matches!(self, InnerVerdict::Yes(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            InnerVerdict::Yes(_) => "yes",
            InnerVerdict::No => "no",
            InnerVerdict::Unknown => "unknown",
        }
    }
}

/// Searches binary local channels simulating a binary target with marginals
/// `(pu0, pv0)` and `P_{UV}(0,0) = q`, up to [`INNER_TOL`].
pub fn inner_search_binary(
    src: &JointDist2,
    target_marginals: (f64, f64),
    q: f64,
    grid_step: f64,
) -> Result<InnerVerdict> {
    let (us, vs) = local_channel_grid(src, target_marginals, grid_step)?;
    let mut best: Option<(f64, [f64; 2], [f64; 2])> = None;
    for a in &us {
        for g in &vs {
            let gap = (simulated_q(src, a, g) - q).abs();
            if best.map_or(true, |b| gap < b.0) {
                best = Some((gap, *a, *g));
            }
        }
    }
    match best {
        Some((gap, a, g)) if gap <= INNER_TOL + ROUNDING => Ok(InnerVerdict::Yes(
            ProductChannelPair::new(binary_channel(a), binary_channel(g))?,
        )),
        _ => Ok(InnerVerdict::No),
    }
}

/// All four bounds for one source/target pair.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundVerdict {
    pub mc_outer: OuterCheck,
    pub mi_outer: OuterCheck,
    pub icf_outer: IcfCheck,
    pub inner_achievable: InnerVerdict,
}

pub fn evaluate_bounds(
    src: &JointDist2,
    tgt: &JointDist2,
    betas: &[f64],
    cfg: &OptimizerConfig,
    inner_step: f64,
) -> Result<BoundVerdict> {
    let inner_achievable = if check_binary(src).is_ok() && check_binary(tgt).is_ok() {
        let (pu, pv) = (tgt.marginal_x(), tgt.marginal_y());
        inner_search_binary(src, (pu[0], pv[0]), tgt.p(0, 0), inner_step)?
    } else {
        InnerVerdict::Unknown
    };
    Ok(BoundVerdict {
        mc_outer: mc_outer_check(src, tgt),
        mi_outer: mi_outer_check(src, tgt),
        icf_outer: icf_outer_check(src, tgt, betas, cfg)?,
        inner_achievable,
    })
}

/// Source `P_X(0) = P_Y(0) = ¼`, `P_XY(0,0) = p`.
pub fn fig1_source(p: f64) -> Result<JointDist2> {
    make_binary(0.25, 0.25, p)
}

/// Target `P_U(0) = P_V(0) = ½`, `P_UV(0,0) = q`.
pub fn fig1_target(q: f64) -> Result<JointDist2> {
    make_binary(0.5, 0.5, q)
}

/// Settings of the binary source/target sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Fig1Config {
    /// q resolution of the maximal-correlation, mutual-information and inner sets.
    pub q_step: f64,
    /// Coarse q resolution of the ICF set before endpoint refinement.
    pub icf_q_step: f64,
    /// Endpoint refinement stops at this q width.
    pub icf_refine_tol: f64,
    pub betas: Vec<f64>,
    pub inner_step: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for Fig1Config {
    fn default() -> Self {
        Self {
            q_step: 1e-3,
            icf_q_step: 0.02,
            icf_refine_tol: 1e-3,
            betas: default_betas(),
            inner_step: 1e-3,
            optimizer: OptimizerConfig::default(),
        }
    }
}

/// q-intervals of one source passing each bound; `None` when no q passes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Fig1Row {
    pub p: f64,
    pub inner: Option<(f64, f64)>,
    pub icf: Option<(f64, f64)>,
    pub mc: Option<(f64, f64)>,
    pub mi: Option<(f64, f64)>,
}

pub const FIG1_COLUMNS: [&str; 9] = [
    "p",
    "q_inner_lo",
    "q_inner_hi",
    "q_icf_lo",
    "q_icf_hi",
    "q_mc_lo",
    "q_mc_hi",
    "q_mi_lo",
    "q_mi_hi",
];

impl Fig1Row {
    /// Values in [`FIG1_COLUMNS`] order; empty intervals give NaN.
    pub fn fields(&self) -> [f64; 9] {
        let lo_hi = |i: Option<(f64, f64)>| i.unwrap_or((f64::NAN, f64::NAN));
        let (a, b) = lo_hi(self.inner);
        let (c, d) = lo_hi(self.icf);
        let (e, f) = lo_hi(self.mc);
        let (g, h) = lo_hi(self.mi);
        [self.p, a, b, c, d, e, f, g, h]
    }
}

fn hull(qs: impl Iterator<Item = f64>) -> Option<(f64, f64)> {
    qs.fold(None, |acc, q| match acc {
        None => Some((q, q)),
        Some((lo, hi)) => Some((f64::min(lo, q), f64::max(hi, q))),
    })
}

/// Symmetric q grid on `[0, ½]` through `¼` with the given spacing.
fn centered_grid(step: f64) -> Vec<f64> {
    let k = (0.25 / step + 1e-9).floor() as usize;
    let mut qs = vec![0.0];
    qs.extend(
        (0..=k)
            .rev()
            .map(|i| 0.25 - i as f64 * step)
            .filter(|&q| q > 0.0),
    );
    qs.extend((1..=k).map(|i| 0.25 + i as f64 * step).filter(|&q| q < 0.5));
    qs.push(0.5);
    qs.dedup();
    qs
}

struct TargetCurve {
    values: Vec<f64>,
    maxcorr: f64,
}

fn target_curve(q: f64, cfg: &Fig1Config) -> Result<TargetCurve> {
    let tgt = fig1_target(q)?;
    Ok(TargetCurve {
        values: icf_curve(&tgt, &cfg.betas, &cfg.optimizer)?.values(),
        maxcorr: maxcorr_svd(&tgt),
    })
}

/// One row per source parameter `p ∈ [0, ¼]`.
pub fn fig1_rows(p_grid: &[f64], cfg: &Fig1Config) -> Result<Vec<Fig1Row>> {
    if let Some(p) = p_grid.iter().find(|p| !(0.0..=0.25).contains(*p)) {
        return Err(Error::OutOfRange(format!("p={p} not in [0,1/4]")));
    }
    for (name, v) in [
        ("q_step", cfg.q_step),
        ("icf_q_step", cfg.icf_q_step),
        ("icf_refine_tol", cfg.icf_refine_tol),
    ] {
        if !(v > 0.0 && v <= 0.25) {
            return Err(Error::OutOfRange(format!("{name}={v} not in (0,1/4]")));
        }
    }
    let coarse = centered_grid(cfg.icf_q_step);
    let coarse_curves: Vec<TargetCurve> = coarse
        .par_iter()
        .map(|&q| target_curve(q, cfg))
        .collect::<Result<_>>()?;
    p_grid
        .par_iter()
        .map(|&p| fig1_row(p, cfg, &coarse, &coarse_curves))
        .collect()
}

fn fig1_row(
    p: f64,
    cfg: &Fig1Config,
    coarse: &[f64],
    coarse_curves: &[TargetCurve],
) -> Result<Fig1Row> {
    let src = fig1_source(p)?;
    let src_rho = maxcorr_svd(&src);
    let src_curve = icf_curve(&src, &cfg.betas, &cfg.optimizer)?.values();
    let passes = |t: &TargetCurve| {
        compare_icf_curves(&cfg.betas, &src_curve, src_rho, &t.values, t.maxcorr).pass
    };

    let q_grid = centered_grid(cfg.q_step);
    let targets: Vec<JointDist2> = q_grid
        .iter()
        .map(|&q| fig1_target(q))
        .collect::<Result<_>>()?;
    let mc = hull(
        q_grid
            .iter()
            .zip(&targets)
            .filter(|(_, t)| mc_outer_check(&src, t).pass)
            .map(|(q, _)| *q),
    );
    let mi = hull(
        q_grid
            .iter()
            .zip(&targets)
            .filter(|(_, t)| mi_outer_check(&src, t).pass)
            .map(|(q, _)| *q),
    );
    let reachable = inner_reachable_q(&src, (0.5, 0.5), cfg.inner_step)?;
    let inner = hull(q_grid.iter().copied().filter(|&q| {
        let i = reachable.partition_point(|&r| r < q);
        let near = |j: usize| {
            reachable
                .get(j)
                .is_some_and(|r| (r - q).abs() <= INNER_TOL + ROUNDING)
        };
        near(i) || (i > 0 && near(i - 1))
    }));

    // Walk outward from q = ¼ (independent target, always passing) on the
    // coarse grid, then bisect each boundary.
    let center = coarse
        .iter()
        .position(|&q| q == 0.25)
        .expect("grid contains 1/4");
    let refine = |inside: f64, outside: f64| -> Result<f64> {
        let (mut inside, mut outside) = (inside, outside);
        while (inside - outside).abs() > cfg.icf_refine_tol {
            let mid = 0.5 * (inside + outside);
            if passes(&target_curve(mid, cfg)?) {
                inside = mid;
            } else {
                outside = mid;
            }
        }
        Ok(inside)
    };
    let mut lo = coarse[center];
    for i in (0..center).rev() {
        if passes(&coarse_curves[i]) {
            lo = coarse[i];
        } else {
            lo = refine(lo, coarse[i])?;
            break;
        }
    }
    let mut hi = coarse[center];
    for i in center + 1..coarse.len() {
        if passes(&coarse_curves[i]) {
            hi = coarse[i];
        } else {
            hi = refine(hi, coarse[i])?;
            break;
        }
    }
    Ok(Fig1Row {
        p,
        inner,
        icf: Some((lo, hi)),
        mc,
        mi,
    })
}
