//! Closed forms for jointly Gaussian pairs and the entropy-based lower bound on
//! the information-correlation function of continuous pairs.
//!
//! Entropic values default to nats here, matching the `2πe` expressions.

use std::f64::consts::{E, PI};

use crate::error::{Error, Result};
use crate::info::Unit;

/// Jointly Gaussian pair with correlation coefficient `rho0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPair {
    rho0: f64,
}

impl GaussianPair {
    pub fn new(rho0: f64) -> Result<Self> {
        if !(-1.0..=1.0).contains(&rho0) {
            return Err(Error::OutOfRange(format!(
                "correlation coefficient {rho0} not in [-1,1]"
            )));
        }
        Ok(Self { rho0 })
    }

    pub fn rho0(&self) -> f64 {
        self.rho0
    }
}

/// For Gaussian pairs every correlation measure equals `|rho0|`.
pub fn gaussian_maxcorr(g: &GaussianPair) -> f64 {
    g.rho0.abs()
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::OutOfRange(format!("beta={beta} not in [0,1]")))
    }
}

/// `log((1+t)/(1-t))` in nats.
fn log_odds(t: f64) -> f64 {
    ((1.0 + t) / (1.0 - t)).ln()
}

/// `½ log⁺[((1+β₀)/(1-β₀)) / ((1+β)/(1-β))]` with `β₀ = |rho0|`. Infinite when
/// `β₀ = 1` and `β < 1`.
pub fn gaussian_icf(g: &GaussianPair, beta: f64, unit: Unit) -> Result<f64> {
    check_beta(beta)?;
    let b0 = g.rho0.abs();
    if beta >= 1.0 || beta >= b0 {
        return Ok(0.0);
    }
    if b0 >= 1.0 {
        return Ok(f64::INFINITY);
    }
    let nats = 0.5 * (log_odds(b0) - log_odds(beta));
    Ok(unit.from_nats(nats.max(0.0)))
}

/// Differential entropy (nats) of a bivariate Gaussian with unit variances and
/// correlation `rho0`.
pub fn standard_gaussian_joint_entropy(rho0: f64) -> f64 {
    (2.0 * PI * E).ln() + 0.5 * (1.0 - rho0 * rho0).ln()
}

/// Lower bound (nats) `h(X,Y) - ½ log[(2πe(1-β₀))² (1+β)/(1-β)]` for a continuous
/// pair with joint differential entropy `h_joint` and correlation coefficient
/// `rho0`, floored at 0; zero once `beta ≥ |rho0|`.
pub fn continuous_icf_lower(h_joint: f64, rho0: f64, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    let b0 = rho0.abs();
    if b0 > 1.0 {
        return Err(Error::OutOfRange(format!(
            "correlation coefficient {rho0} not in [-1,1]"
        )));
    }
    if beta >= b0 {
        return Ok(0.0);
    }
    let scale = 2.0 * PI * E * (1.0 - b0);
    let bound = h_joint - scale.ln() - 0.5 * log_odds(beta);
    Ok(bound.max(0.0))
}
