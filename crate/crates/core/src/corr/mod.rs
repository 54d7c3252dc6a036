//! Pearson correlation, correlation ratio and maximal correlation, in their
//! unconditional, event-conditional and conditional forms.
//!
//! Conditional moments are exact sums over the pmf. Conditioning events of mass
//! at most [`MASS_TOL`] contribute nothing to expectations.

mod bruteforce;
mod gk;
mod svd;

pub use bruteforce::{maxcorr_bruteforce, BruteForceConfig};
pub use gk::{common_part, gk_common_info};
pub use svd::{
    cond_maxcorr, maxcorr_binary_formula, maxcorr_svd, q_matrix, second_singular_value_fast,
    QMatrix,
};

use crate::dist::{JointDist2, JointDist3, MASS_TOL};
use crate::error::Result;

/// Variances at or below this are treated as zero.
pub const VAR_TOL: f64 = 1e-14;

/// All correlation measures of one (possibly conditional) pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationReport {
    pub pearson: f64,
    pub theta_xy: f64,
    pub theta_yx: f64,
    pub maxcorr: f64,
}

impl CorrelationReport {
    /// `|ρ| ≤ θ ≤ ρ_m ≤ 1` for both correlation ratios, within `tol`.
    pub fn is_ordered(&self, tol: f64) -> bool {
        let rho = self.pearson.abs();
        rho <= self.theta_xy + tol
            && rho <= self.theta_yx + tol
            && self.theta_xy <= self.maxcorr + tol
            && self.theta_yx <= self.maxcorr + tol
            && self.maxcorr <= 1.0 + tol
    }
}

/// `E[var(X|U)]`, `E[var(Y|U)]` and `E[cov(X,Y|U)]` using the alphabet labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConditionalMoments {
    pub e_var_x: f64,
    pub e_var_y: f64,
    pub e_cov: f64,
}

impl ConditionalMoments {
    pub fn of(d: &JointDist3) -> Self {
        let (lx, ly) = (d.alphabet_x().labels(), d.alphabet_y().labels());
        let mut out = ConditionalMoments {
            e_var_x: 0.0,
            e_var_y: 0.0,
            e_cov: 0.0,
        };
        for (u, pu) in d.marginal_u().into_iter().enumerate() {
            if pu <= MASS_TOL {
                continue;
            }
            let (mut mx, mut my) = (0.0, 0.0);
            for x in 0..d.nx() {
                for y in 0..d.ny() {
                    let p = d.p(x, y, u) / pu;
                    mx += p * lx[x];
                    my += p * ly[y];
                }
            }
            let (mut vx, mut vy, mut cxy) = (0.0, 0.0, 0.0);
            for x in 0..d.nx() {
                for y in 0..d.ny() {
                    let p = d.p(x, y, u) / pu;
                    let (dx, dy) = (lx[x] - mx, ly[y] - my);
                    vx += p * dx * dx;
                    vy += p * dy * dy;
                    cxy += p * dx * dy;
                }
            }
            out.e_var_x += pu * vx;
            out.e_var_y += pu * vy;
            out.e_cov += pu * cxy;
        }
        out
    }
}

/// `E[var(X | Y, U)]`: the minimum mean square error of estimating `X` from `(Y, U)`.
pub fn mmse(d: &JointDist3) -> f64 {
    let lx = d.alphabet_x().labels();
    let mut acc = 0.0;
    for y in 0..d.ny() {
        for u in 0..d.nu() {
            let m: f64 = (0..d.nx()).map(|x| d.p(x, y, u)).sum();
            if m <= MASS_TOL {
                continue;
            }
            let mean: f64 = (0..d.nx()).map(|x| d.p(x, y, u) * lx[x]).sum::<f64>() / m;
            let var: f64 = (0..d.nx())
                .map(|x| d.p(x, y, u) * (lx[x] - mean).powi(2))
                .sum::<f64>()
                / m;
            acc += m * var;
        }
    }
    acc
}

/// The same error through `E[var(X|U)] (1 - θ²(X;Y|U))`.
pub fn mmse_via_corr_ratio(d: &JointDist3) -> f64 {
    let theta = cond_corr_ratio(d);
    ConditionalMoments::of(d).e_var_x * (1.0 - theta * theta)
}

/// Pearson correlation of the labels; 0 when either variance vanishes.
pub fn pearson(d: &JointDist2) -> f64 {
    let m = ConditionalMoments::of(&d.with_degenerate_u());
    if m.e_var_x <= VAR_TOL || m.e_var_y <= VAR_TOL {
        return 0.0;
    }
    (m.e_cov / (m.e_var_x.sqrt() * m.e_var_y.sqrt())).clamp(-1.0, 1.0)
}

/// Conditional Pearson correlation `E[cov(X,Y|U)] / sqrt(E[var(X|U)] E[var(Y|U)])`.
pub fn cond_pearson(d: &JointDist3) -> f64 {
    let m = ConditionalMoments::of(d);
    if m.e_var_x * m.e_var_y <= VAR_TOL {
        return 0.0;
    }
    (m.e_cov / (m.e_var_x.sqrt() * m.e_var_y.sqrt())).clamp(-1.0, 1.0)
}

/// Correlation ratio `θ(X;Y)` of `X` on `Y`.
pub fn corr_ratio(d: &JointDist2) -> f64 {
    cond_corr_ratio(&d.with_degenerate_u())
}

/// `E[var(E[X|Y,U] | U)]`, summed as centred squares so that independence
/// gives zero rather than rounding noise.
fn explained_variance(d: &JointDist3) -> f64 {
    let lx = d.alphabet_x().labels();
    let mut acc = 0.0;
    for (u, pu) in d.marginal_u().into_iter().enumerate() {
        if pu <= MASS_TOL {
            continue;
        }
        let mean_u: f64 = (0..d.nx())
            .map(|x| lx[x] * (0..d.ny()).map(|y| d.p(x, y, u)).sum::<f64>())
            .sum::<f64>()
            / pu;
        for y in 0..d.ny() {
            let m: f64 = (0..d.nx()).map(|x| d.p(x, y, u)).sum();
            if m <= MASS_TOL {
                continue;
            }
            let mean: f64 = (0..d.nx()).map(|x| d.p(x, y, u) * lx[x]).sum::<f64>() / m;
            acc += m * (mean - mean_u).powi(2);
        }
    }
    acc
}

/// Conditional correlation ratio `θ(X;Y|U) = sqrt(E[var(E[X|Y,U]|U)] / E[var(X|U)])`.
pub fn cond_corr_ratio(d: &JointDist3) -> f64 {
    let e_var_x = ConditionalMoments::of(d).e_var_x;
    if e_var_x <= VAR_TOL {
        return 0.0;
    }
    (explained_variance(d) / e_var_x).sqrt().min(1.0)
}

/// Measures of an unconditional pair.
pub fn report(d: &JointDist2) -> CorrelationReport {
    CorrelationReport {
        pearson: pearson(d),
        theta_xy: corr_ratio(d),
        theta_yx: corr_ratio(&d.transpose()),
        maxcorr: maxcorr_svd(d),
    }
}

/// Conditional measures given `U`.
pub fn cond_report(d: &JointDist3) -> CorrelationReport {
    CorrelationReport {
        pearson: cond_pearson(d),
        theta_xy: cond_corr_ratio(d),
        theta_yx: cond_corr_ratio(&d.transpose_xy()),
        maxcorr: cond_maxcorr(d),
    }
}

/// Measures of `P_{X,Y|U=u}`.
pub fn event_conditional(d: &JointDist3, u: usize) -> Result<CorrelationReport> {
    Ok(report(&d.condition_on_u(u)?))
}
