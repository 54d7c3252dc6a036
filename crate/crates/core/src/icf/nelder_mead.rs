//! Unconstrained Nelder–Mead simplex search with dimension-adaptive coefficients.

#[derive(Debug, Clone)]
pub(crate) struct Minimum {
    pub x: Vec<f64>,
    pub evals: usize,
}

pub(crate) struct Options {
    /// Edge length of the initial simplex.
    pub step: f64,
    pub max_evals: usize,
    /// Stop when the spread of simplex values falls below this.
    pub ftol: f64,
    /// ... and the simplex diameter below this.
    pub xtol: f64,
}

pub(crate) fn minimize(f: &mut impl FnMut(&[f64]) -> f64, x0: &[f64], opts: &Options) -> Minimum {
    let n = x0.len();
    let nf = n as f64;
    let (alpha, gamma) = (1.0, 1.0 + 2.0 / nf);
    let (rho, sigma) = (0.75 - 1.0 / (2.0 * nf), 1.0 - 1.0 / nf.max(2.0));

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = eval(x0, &mut evals);
    simplex.push((x0.to_vec(), f0));
    for i in 0..n {
        let mut x = x0.to_vec();
        x[i] += opts.step;
        let fx = eval(&x, &mut evals);
        simplex.push((x, fx));
    }

    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    while evals < opts.max_evals {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread.abs() <= opts.ftol {
            let diam = simplex[1..]
                .iter()
                .map(|(x, _)| {
                    x.iter()
                        .zip(&simplex[0].0)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .fold(0.0, f64::max);
            if diam <= opts.xtol {
                break;
            }
        }
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for (x, _) in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(x) {
                *c += v / nf;
            }
        }
        let worst = simplex[n].clone();
        let along = |t: f64, out: &mut Vec<f64>| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(&worst.0) {
                *o = c + t * (c - w);
            }
        };
        along(alpha, &mut trial);
        let fr = eval(&trial, &mut evals);
        if fr < simplex[0].1 {
            let reflected = trial.clone();
            along(alpha * gamma, &mut trial);
            let fe = eval(&trial, &mut evals);
            simplex[n] = if fe < fr {
                (trial.clone(), fe)
            } else {
                (reflected, fr)
            };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (trial.clone(), fr);
            continue;
        }
        let (t, reference) = if fr < worst.1 {
            (alpha * rho, fr)
        } else {
            (-rho, worst.1)
        };
        along(t, &mut trial);
        let fc = eval(&trial, &mut evals);
        if fc <= reference {
            simplex[n] = (trial.clone(), fc);
            continue;
        }
        let best = simplex[0].0.clone();
        for (x, fx) in simplex.iter_mut().skip(1) {
            for (v, b) in x.iter_mut().zip(&best) {
                *v = b + sigma * (*v - b);
            }
            *fx = eval(x, &mut evals);
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    let (x, _) = simplex.swap_remove(0);
    Minimum { x, evals }
}
