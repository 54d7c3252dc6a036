//! Correlation measures, common information and the information-correlation
//! function for finite joint distributions, plus non-interactive simulation
//! feasibility tests built on them.

pub mod corr;
pub mod dist;
pub mod error;
pub mod gaussian;
pub mod grid;
pub mod icf;
pub mod info;
pub mod io;
pub mod nisim;

pub use corr::{
    cond_corr_ratio, cond_maxcorr, cond_pearson, cond_report, corr_ratio, gk_common_info,
    maxcorr_binary_formula, maxcorr_bruteforce, maxcorr_svd, mmse, pearson, q_matrix, report,
    CorrelationReport,
};
pub use dist::{
    make_binary, make_dsbs, Alphabet, Channel, JointDist2, JointDist3, ProductChannelPair,
};
pub use error::{Error, Result};
pub use gaussian::{continuous_icf_lower, gaussian_icf, gaussian_maxcorr, GaussianPair};
pub use grid::Grid;
pub use icf::{
    dsbs_icf_upper, icf_additivity_upper, icf_curve, icf_evaluate, icf_minimize, wyner_common_info,
    BetaCurve, IcfPoint, OptimizerConfig,
};
pub use info::{entropy, h2, h4, mutual_information, Unit};
pub use nisim::{
    fig1_rows, icf_outer_check, inner_search_binary, mc_outer_check, mi_outer_check, BoundVerdict,
    Fig1Config, Fig1Row, InnerVerdict,
};
