mod common;

use common::*;
use corrlab::nisim::{evaluate_bounds, fig1_source, fig1_target, Fig1Config, INNER_TOL};
use corrlab::*;

fn quick() -> OptimizerConfig {
    OptimizerConfig {
        restarts: 4,
        max_evals: 40_000,
        ..OptimizerConfig::default()
    }
}

fn coarse_config() -> Fig1Config {
    Fig1Config {
        q_step: 0.01,
        icf_q_step: 0.05,
        icf_refine_tol: 0.01,
        betas: Grid::new(0.0, 0.1, 1.0).unwrap().points(),
        inner_step: 0.01,
        optimizer: quick(),
    }
}

fn within(interval: Option<(f64, f64)>, point: f64, tol: f64) -> bool {
    interval.is_some_and(|(lo, hi)| (lo - point).abs() <= tol && (hi - point).abs() <= tol)
}

#[test]
fn independent_source_only_reaches_independent_targets() {
    let rows = fig1_rows(&[1.0 / 16.0], &Fig1Config::default()).unwrap();
    let row = rows[0];
    assert!(within(row.mc, 0.25, 1e-12), "{row:?}");
    assert!(within(row.mi, 0.25, 1e-12), "{row:?}");
    assert!(within(row.icf, 0.25, 1e-3), "{row:?}");
    assert!(within(row.inner, 0.25, INNER_TOL + 1e-12), "{row:?}");
}

#[test]
fn a_source_simulates_itself() {
    let mut r = rng(41);
    let betas = Grid::new(0.0, 0.1, 1.0).unwrap().points();
    for src in [
        fig1_source(0.1).unwrap(),
        make_dsbs(0.2).unwrap(),
        random_pair(&mut r, 2, 2),
    ] {
        let v = evaluate_bounds(&src, &src, &betas, &quick(), 1e-3).unwrap();
        assert!(
            v.mc_outer.pass && v.mi_outer.pass && v.icf_outer.pass,
            "{v:?}"
        );
        assert!(v.inner_achievable.is_yes());
        if let InnerVerdict::Yes(w) = &v.inner_achievable {
            let sim = w.simulate(&src).unwrap();
            assert!((sim.p(0, 0) - src.p(0, 0)).abs() <= INNER_TOL);
        }
    }
}

#[test]
fn independent_source_cannot_reach_a_correlated_target() {
    let src = make_binary(0.5, 0.5, 0.25).unwrap();
    let tgt = make_dsbs(0.3).unwrap();
    assert!(!mc_outer_check(&src, &tgt).pass);
    assert!(!mi_outer_check(&src, &tgt).pass);
    let check = icf_outer_check(&src, &tgt, &[0.0, 0.2], &quick()).unwrap();
    assert!(!check.pass && !check.zero_set_ok);
    assert_eq!(
        inner_search_binary(&src, (0.5, 0.5), tgt.p(0, 0), 1e-2).unwrap(),
        InnerVerdict::No
    );
}

#[test]
fn verdicts_agree_on_mirrored_targets() {
    let src = fig1_source(0.15).unwrap();
    for k in 0..=25 {
        let q = 0.01 * k as f64;
        let (a, b) = (fig1_target(q).unwrap(), fig1_target(0.5 - q).unwrap());
        assert_eq!(
            mc_outer_check(&src, &a).pass,
            mc_outer_check(&src, &b).pass,
            "{q}"
        );
        assert_eq!(
            mi_outer_check(&src, &a).pass,
            mi_outer_check(&src, &b).pass,
            "{q}"
        );
        let ia = inner_search_binary(&src, (0.5, 0.5), q, 1e-2)
            .unwrap()
            .is_yes();
        let ib = inner_search_binary(&src, (0.5, 0.5), 0.5 - q, 1e-2)
            .unwrap()
            .is_yes();
        assert_eq!(ia, ib, "{q}");
    }
}

#[test]
fn coarse_table_is_symmetric_and_nested() {
    let cfg = coarse_config();
    let rows = fig1_rows(&[0.0, 0.1, 0.2, 0.25], &cfg).unwrap();
    let tol = cfg.q_step + 1e-9;
    for row in &rows {
        for (lo, hi) in [row.inner, row.icf, row.mc, row.mi].into_iter().flatten() {
            assert!((lo - (0.5 - hi)).abs() <= tol, "{row:?}");
        }
        let (inner, icf, mc) = (row.inner.unwrap(), row.icf.unwrap(), row.mc.unwrap());
        assert!(inner.0 >= icf.0 - tol && inner.1 <= icf.1 + tol, "{row:?}");
        assert!(icf.0 >= mc.0 - tol && icf.1 <= mc.1 + tol, "{row:?}");
    }
    // p = ¼ makes X = Y, which can reach every target.
    let last = rows.last().unwrap();
    assert!(within(last.mc.map(|(lo, _)| (lo, lo)), 0.0, 1e-12) && last.mc.unwrap().1 == 0.5);
    // Fields flatten the intervals in column order.
    let f = rows[1].fields();
    assert_eq!(f[0], 0.1);
    assert_eq!((f[5], f[6]), rows[1].mc.unwrap());
}

#[test]
fn bad_inputs() {
    assert!(fig1_rows(&[0.3], &coarse_config()).is_err());
    let wide = random_pair(&mut rng(42), 2, 3);
    assert!(inner_search_binary(&wide, (0.5, 0.5), 0.25, 1e-2).is_err());
    let v = evaluate_bounds(&wide, &wide, &[0.0, 0.5], &quick(), 1e-2).unwrap();
    assert_eq!(v.inner_achievable, InnerVerdict::Unknown);
}
