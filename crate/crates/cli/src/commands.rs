use std::fmt::Write as _;
use std::path::Path;

use corrlab::corr::{event_conditional, mmse};
use corrlab::gaussian::standard_gaussian_joint_entropy;
use corrlab::icf::{dsbs_icf_upper, icf_curve};
use corrlab::io::{channel_to_json, fmt_num, parse_dist, parse_pair, DistFile};
use corrlab::nisim::{evaluate_bounds, fig1_rows, Fig1Config, InnerVerdict, FIG1_COLUMNS};
use corrlab::{
    cond_report, continuous_icf_lower, gaussian_icf, gk_common_info, maxcorr_bruteforce,
    mutual_information, report, Error, GaussianPair, OptimizerConfig, Result,
};

use crate::{Cli, Command, CorrArgs, GaussianArgs, IcfArgs, NisimArgs, OptimizerArgs};

pub fn run(cli: &Cli) -> Result<()> {
    let text = match &cli.command {
        Command::Corr(a) => corr(a)?,
        Command::Icf(a) => icf(a, cli.verbose)?,
        Command::Gaussian(a) => gaussian(a)?,
        Command::Nisim(a) => nisim(a, cli.verbose)?,
    };
    match &cli.output {
        Some(path) => std::fs::write(path, text)
            .map_err(|e| Error::OutOfRange(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))
}

fn provenance(command: &str, fields: &[(&str, String)]) -> String {
    let mut line = format!("# corrlab {} {command}", env!("CARGO_PKG_VERSION"));
    for (k, v) in fields {
        let _ = write!(line, " {k}={v}");
    }
    line.push('\n');
    line
}

fn row(fields: &[String]) -> String {
    let mut line = fields.join("\t");
    line.push('\n');
    line
}

fn optimizer_config(a: &OptimizerArgs) -> Result<OptimizerConfig> {
    let cfg = OptimizerConfig {
        restarts: a.restarts,
        max_evals: a.max_evals,
        penalty_weight: a.penalty,
        constraint_tol: a.tol,
        seed: a.seed,
    };
    cfg.validate()?;
    Ok(cfg)
}

fn optimizer_fields(cfg: &OptimizerConfig) -> Vec<(&'static str, String)> {
    vec![
        ("seed", cfg.seed.to_string()),
        ("restarts", cfg.restarts.to_string()),
        ("max_evals", cfg.max_evals.to_string()),
        ("penalty", fmt_num(cfg.penalty_weight)),
        ("tol", fmt_num(cfg.constraint_tol)),
    ]
}

fn corr(a: &CorrArgs) -> Result<String> {
    let mut out = row(&["measure".into(), "value".into()]);
    let mut line = |name: &str, v: f64| out.push_str(&row(&[name.into(), fmt_num(v)]));
    match parse_dist(&read(&a.input)?)? {
        DistFile::Pair(d) => {
            let r = report(&d);
            line("pearson", r.pearson);
            line("theta_xy", r.theta_xy);
            line("theta_yx", r.theta_yx);
            line("maxcorr_svd", r.maxcorr);
            if a.verify {
                line(
                    "maxcorr_bruteforce",
                    maxcorr_bruteforce(&d, a.restarts, a.iters, a.seed),
                );
            }
            line("gk_common_info_bits", gk_common_info(&d));
            line("mutual_information_bits", mutual_information(&d));
        }
        DistFile::Triple(t) => {
            let r = cond_report(&t);
            line("cond_pearson", r.pearson);
            line("cond_theta_xy", r.theta_xy);
            line("cond_theta_yx", r.theta_yx);
            line("cond_maxcorr", r.maxcorr);
            if a.verify {
                let brute = t
                    .supported_slices()
                    .iter()
                    .map(|(_, _, s)| maxcorr_bruteforce(s, a.restarts, a.iters, a.seed))
                    .fold(0.0, f64::max);
                line("cond_maxcorr_bruteforce", brute);
            }
            line("mmse", mmse(&t));
            out.push('\n');
            out.push_str(&row(&[
                "u".into(),
                "mass".into(),
                "pearson".into(),
                "theta_xy".into(),
                "theta_yx".into(),
                "maxcorr".into(),
            ]));
            let pu = t.marginal_u();
            for (u, &mass) in pu.iter().enumerate() {
                let r = event_conditional(&t, u).ok();
                let mut fields = vec![fmt_num(t.alphabet_u().label(u)), fmt_num(mass)];
                fields.extend(
                    [
                        r.map(|r| r.pearson),
                        r.map(|r| r.theta_xy),
                        r.map(|r| r.theta_yx),
                        r.map(|r| r.maxcorr),
                    ]
                    .map(|v| fmt_num(v.unwrap_or(f64::NAN))),
                );
                out.push_str(&row(&fields));
            }
        }
    }
    Ok(out)
}

fn icf(a: &IcfArgs, verbose: bool) -> Result<String> {
    let d = parse_pair(&read(&a.input)?)?;
    let cfg = optimizer_config(&a.opt)?;
    let betas = a.beta_grid.points();
    let mut fields = vec![
        ("input", a.input.display().to_string()),
        ("beta_grid", a.beta_grid.to_string()),
    ];
    fields.extend(optimizer_fields(&cfg));
    let mut out = provenance("icf", &fields);
    let mut header: Vec<String> = [
        "beta",
        "value_bits",
        "raw_value_bits",
        "constraint_residual",
        "witness",
    ]
    .map(String::from)
    .to_vec();
    if a.dsbs.is_some() {
        header.push("dsbs_upper_bits".into());
    }
    out.push_str(&row(&header));
    if verbose {
        eprintln!("optimizing {} grid points", betas.len());
    }
    let curve = icf_curve(&d, &betas, &cfg)?;
    if let Some(dir) = &a.witness_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Error::OutOfRange(format!("cannot create {}: {e}", dir.display())))?;
    }
    for (i, (p, raw)) in curve.points.iter().zip(&curve.raw_values).enumerate() {
        let witness = match &a.witness_dir {
            Some(dir) => {
                let name = format!("witness_{i:03}.json");
                let path = dir.join(&name);
                std::fs::write(&path, channel_to_json(&p.witness)).map_err(|e| {
                    Error::OutOfRange(format!("cannot write {}: {e}", path.display()))
                })?;
                name
            }
            None => "-".into(),
        };
        let mut fields = vec![
            fmt_num(p.beta),
            fmt_num(p.value),
            fmt_num(*raw),
            fmt_num(p.constraint_residual),
            witness,
        ];
        if let Some(p0) = a.dsbs {
            fields.push(fmt_num(dsbs_icf_upper(p0, p.beta)?));
        }
        out.push_str(&row(&fields));
    }
    Ok(out)
}

fn gaussian(a: &GaussianArgs) -> Result<String> {
    let g = GaussianPair::new(a.rho0)?;
    let mut out = provenance(
        "gaussian",
        &[
            ("rho0", fmt_num(a.rho0)),
            ("beta_grid", a.beta_grid.to_string()),
            ("unit", a.unit.to_string()),
        ],
    );
    let unit = a.unit.name();
    let mut header = vec!["beta".to_string(), format!("icf_{unit}")];
    if a.lower_bound {
        header.push(format!("lower_bound_{unit}"));
    }
    out.push_str(&row(&header));
    let h = a
        .h_joint
        .unwrap_or_else(|| standard_gaussian_joint_entropy(a.rho0));
    for beta in a.beta_grid.points() {
        let mut fields = vec![fmt_num(beta), fmt_num(gaussian_icf(&g, beta, a.unit)?)];
        if a.lower_bound {
            fields.push(fmt_num(
                a.unit.from_nats(continuous_icf_lower(h, a.rho0, beta)?),
            ));
        }
        out.push_str(&row(&fields));
    }
    Ok(out)
}

fn verdict(pass: bool) -> String {
    if pass { "pass" } else { "fail" }.into()
}

fn nisim(a: &NisimArgs, verbose: bool) -> Result<String> {
    let cfg = optimizer_config(&a.opt)?;
    let betas = a.beta_grid.points();
    if let Some(p_grid) = &a.fig1 {
        let fig = Fig1Config {
            q_step: a.q_step,
            icf_q_step: a.icf_q_step,
            icf_refine_tol: a.q_step,
            betas,
            inner_step: a.inner_step,
            optimizer: cfg,
        };
        let mut fields = vec![
            ("p_grid", p_grid.to_string()),
            ("q_step", fmt_num(a.q_step)),
            ("icf_q_step", fmt_num(a.icf_q_step)),
            ("inner_step", fmt_num(a.inner_step)),
            ("beta_grid", a.beta_grid.to_string()),
        ];
        fields.extend(optimizer_fields(&cfg));
        let mut out = provenance("nisim-fig1", &fields);
        out.push_str(&row(&FIG1_COLUMNS.map(String::from)));
        let ps = p_grid.points();
        if verbose {
            eprintln!("computing {} rows", ps.len());
        }
        for r in fig1_rows(&ps, &fig)? {
            out.push_str(&row(&r.fields().map(fmt_num)));
        }
        return Ok(out);
    }
    let (Some(src), Some(tgt)) = (&a.src, &a.tgt) else {
        return Err(Error::Parse(
            "nisim needs --src and --tgt, or --fig1".into(),
        ));
    };
    let src_d = parse_pair(&read(src)?)?;
    let tgt_d = parse_pair(&read(tgt)?)?;
    let mut fields = vec![
        ("src", src.display().to_string()),
        ("tgt", tgt.display().to_string()),
        ("beta_grid", a.beta_grid.to_string()),
    ];
    fields.extend(optimizer_fields(&cfg));
    let mut out = provenance("nisim", &fields);
    let v = evaluate_bounds(&src_d, &tgt_d, &betas, &cfg, a.inner_step)?;
    out.push_str(&row(
        &["bound", "verdict", "margin", "detail"].map(String::from)
    ));
    out.push_str(&row(&[
        "mc_outer".into(),
        verdict(v.mc_outer.pass),
        fmt_num(v.mc_outer.margin),
        "-".into(),
    ]));
    out.push_str(&row(&[
        "mi_outer".into(),
        verdict(v.mi_outer.pass),
        fmt_num(v.mi_outer.margin),
        "-".into(),
    ]));
    out.push_str(&row(&[
        "icf_outer".into(),
        verdict(v.icf_outer.pass),
        fmt_num(v.icf_outer.worst_margin),
        format!(
            "worst_beta={};zero_set={}",
            fmt_num(v.icf_outer.worst_beta),
            if v.icf_outer.zero_set_ok {
                "ok"
            } else {
                "violated"
            }
        ),
    ]));
    let detail = match &v.inner_achievable {
        InnerVerdict::Yes(w) => format!(
            "u_given_x0={};u_given_x1={};v_given_y0={};v_given_y1={}",
            fmt_num(w.chan_u_given_x.prob(0, 0, 0)),
            fmt_num(w.chan_u_given_x.prob(1, 0, 0)),
            fmt_num(w.chan_v_given_y.prob(0, 0, 0)),
            fmt_num(w.chan_v_given_y.prob(1, 0, 0)),
        ),
        _ => "-".into(),
    };
    out.push_str(&row(&[
        "inner_achievable".into(),
        v.inner_achievable.label().into(),
        "-".into(),
        detail,
    ]));
    Ok(out)
}
