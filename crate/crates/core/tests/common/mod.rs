//! Shared builders and reference computations for the integration tests.
#![allow(dead_code)]

use corrlab::{Alphabet, JointDist2, JointDist3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Full-support pmf with exponential weights (flat Dirichlet).
pub fn random_pmf(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..n)
        .map(|_| -(1.0 - rng.gen::<f64>()).ln() + 1e-3)
        .collect();
    let total: f64 = w.iter().sum();
    w.into_iter().map(|v| v / total).collect()
}

/// Distinct real labels.
pub fn random_labels(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut labels: Vec<f64> = Vec::with_capacity(n);
    while labels.len() < n {
        let v: f64 = rng.gen_range(-3.0..3.0);
        if labels.iter().all(|l| (l - v).abs() > 1e-3) {
            labels.push(v);
        }
    }
    labels
}

pub fn random_pair(rng: &mut ChaCha8Rng, nx: usize, ny: usize) -> JointDist2 {
    let ax = Alphabet::new(random_labels(rng, nx)).unwrap();
    let ay = Alphabet::new(random_labels(rng, ny)).unwrap();
    JointDist2::new(ax, ay, random_pmf(rng, nx * ny)).unwrap()
}

pub fn random_triple(rng: &mut ChaCha8Rng, nx: usize, ny: usize, nu: usize) -> JointDist3 {
    let ax = Alphabet::new(random_labels(rng, nx)).unwrap();
    let ay = Alphabet::new(random_labels(rng, ny)).unwrap();
    let au = Alphabet::indexed(nu);
    JointDist3::new(ax, ay, au, random_pmf(rng, nx * ny * nu)).unwrap()
}

/// Joint pmf of several finite variables, row-major in variable order.
#[derive(Debug, Clone)]
pub struct Table {
    pub sizes: Vec<usize>,
    pub labels: Vec<Vec<f64>>,
    pub pmf: Vec<f64>,
}

impl Table {
    pub fn new(sizes: Vec<usize>, labels: Vec<Vec<f64>>, pmf: Vec<f64>) -> Self {
        assert_eq!(sizes.iter().product::<usize>(), pmf.len());
        Self { sizes, labels, pmf }
    }

    pub fn random(rng: &mut ChaCha8Rng, sizes: &[usize]) -> Self {
        let labels = sizes.iter().map(|&n| random_labels(rng, n)).collect();
        let n = sizes.iter().product();
        Self::new(sizes.to_vec(), labels, random_pmf(rng, n))
    }

    fn digits(&self, mut flat: usize) -> Vec<usize> {
        let mut d = vec![0; self.sizes.len()];
        for (i, &s) in self.sizes.iter().enumerate().rev() {
            d[i] = flat % s;
            flat /= s;
        }
        d
    }

    fn group_index(&self, digits: &[usize], vars: &[usize]) -> usize {
        vars.iter()
            .fold(0, |acc, &v| acc * self.sizes[v] + digits[v])
    }

    fn group_alphabet(&self, vars: &[usize]) -> Alphabet {
        match vars {
            [v] => Alphabet::new(self.labels[*v].clone()).unwrap(),
            _ => Alphabet::indexed(vars.iter().map(|&v| self.sizes[v]).product()),
        }
    }

    /// `(A, B, C)` with each a tuple of variables; a single variable keeps its
    /// labels, tuples are labelled `0..n`. Unlisted variables are summed out.
    pub fn view3(&self, a: &[usize], b: &[usize], c: &[usize]) -> JointDist3 {
        let (ax, ay, au) = (
            self.group_alphabet(a),
            self.group_alphabet(b),
            self.group_alphabet(c),
        );
        let (nx, ny, nu) = (ax.len(), ay.len(), au.len());
        let mut pmf = vec![0.0; nx * ny * nu];
        for (flat, &p) in self.pmf.iter().enumerate() {
            let d = self.digits(flat);
            let (x, y, u) = (
                self.group_index(&d, a),
                self.group_index(&d, b),
                self.group_index(&d, c),
            );
            pmf[(x * ny + y) * nu + u] += p;
        }
        JointDist3::new(ax, ay, au, pmf).unwrap()
    }

    pub fn view2(&self, a: &[usize], b: &[usize]) -> JointDist2 {
        self.view3(a, b, &[]).marginal_xy()
    }
}

/// Row-stochastic matrix `rows × cols`.
pub fn random_kernel(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> Vec<Vec<f64>> {
    (0..rows).map(|_| random_pmf(rng, cols)).collect()
}

/// `(X, Y, Z, U)` with `X → (Z, U) → Y`. With `same_law`, `P_{Y|Z,U} = P_{X|Z,U}`
/// and `Y` shares the labels of `X`, so `(X,Z,U)` and `(Y,Z,U)` are equal in law.
pub fn markov_table(
    rng: &mut ChaCha8Rng,
    nx: usize,
    ny: usize,
    nz: usize,
    nu: usize,
    same_law: bool,
) -> Table {
    let pzu = random_pmf(rng, nz * nu);
    let kx = random_kernel(rng, nz * nu, nx);
    let ny = if same_law { nx } else { ny };
    let ky = if same_law {
        kx.clone()
    } else {
        random_kernel(rng, nz * nu, ny)
    };
    let lx = random_labels(rng, nx);
    let ly = if same_law {
        lx.clone()
    } else {
        random_labels(rng, ny)
    };
    let lz = random_labels(rng, nz);
    let lu = random_labels(rng, nu);
    let mut pmf = vec![0.0; nx * ny * nz * nu];
    for x in 0..nx {
        for y in 0..ny {
            for z in 0..nz {
                for u in 0..nu {
                    let zu = z * nu + u;
                    pmf[((x * ny + y) * nz + z) * nu + u] = pzu[zu] * kx[zu][x] * ky[zu][y];
                }
            }
        }
    }
    Table::new(vec![nx, ny, nz, nu], vec![lx, ly, lz, lu], pmf)
}

/// Binary no-signaling box `P(u, v | x, y)` as `[x][y][u][v]`: a random convex
/// combination of the 16 local deterministic boxes and the 8 PR boxes.
pub fn random_box(rng: &mut ChaCha8Rng) -> [[[[f64; 2]; 2]; 2]; 2] {
    let weights = random_pmf(rng, 24);
    let mut boxed = [[[[0.0; 2]; 2]; 2]; 2];
    for (k, w) in weights.iter().enumerate() {
        for x in 0..2 {
            for y in 0..2 {
                if k < 16 {
                    let (a0, a1, b0, b1) = (k & 1, (k >> 1) & 1, (k >> 2) & 1, (k >> 3) & 1);
                    let u = a0 ^ (a1 & x);
                    let v = b0 ^ (b1 & y);
                    boxed[x][y][u][v] += w;
                } else {
                    let j = k - 16;
                    let (al, be, ga) = (j & 1, (j >> 1) & 1, (j >> 2) & 1);
                    let parity = (x & y) ^ (al & x) ^ (be & y) ^ ga;
                    for u in 0..2 {
                        boxed[x][y][u][u ^ parity] += 0.5 * w;
                    }
                }
            }
        }
    }
    boxed
}

/// `(U, X, V, Y)` from a prior on `(X, Y)` and a box.
pub fn box_table(pxy: &JointDist2, b: &[[[[f64; 2]; 2]; 2]; 2]) -> Table {
    let mut pmf = vec![0.0; 16];
    for u in 0..2 {
        for x in 0..2 {
            for v in 0..2 {
                for y in 0..2 {
                    pmf[((u * 2 + x) * 2 + v) * 2 + y] = pxy.p(x, y) * b[x][y][u][v];
                }
            }
        }
    }
    Table::new(vec![2, 2, 2, 2], vec![vec![0.0, 1.0]; 4], pmf)
}

/// `(X,Y) | U=0 ~ (W,Z)` and `(X,Y) | U=1 ~ (Z,W)` with `P_U` uniform, where
/// `var W = a`, `var Z = b`, `corr(W,Z) = eta`, and `W = ±√a`, `Z = ±√b`.
pub fn swap_construction(a: f64, b: f64, eta: f64) -> JointDist3 {
    let (sa, sb) = (a.sqrt(), b.sqrt());
    let labels = vec![-sb, -sa, sa, sb];
    let idx = |v: f64| labels.iter().position(|&l| l == v).unwrap();
    let same = (1.0 + eta) / 4.0;
    let diff = (1.0 - eta) / 4.0;
    let mut slices = vec![vec![vec![0.0; 4]; 4]; 2];
    for (sw, sz) in [(1.0, 1.0), (-1.0, -1.0), (1.0, -1.0), (-1.0, 1.0)] {
        let m = if sw == sz { same } else { diff };
        slices[0][idx(sw * sa)][idx(sz * sb)] += 0.5 * m;
        slices[1][idx(sz * sb)][idx(sw * sa)] += 0.5 * m;
    }
    let alpha = Alphabet::new(labels.clone()).unwrap();
    JointDist3::from_u_slices(alpha.clone(), alpha, Alphabet::indexed(2), &slices).unwrap()
}

/// Conditional maximal correlation from its variational definition: the
/// largest `E[cov(f(X,U), g(Y,U) | U)] / sqrt(E var f · E var g)` reached by
/// alternating conditional expectations from random starts.
pub fn cond_maxcorr_by_alternation(
    d: &JointDist3,
    restarts: usize,
    iters: usize,
    seed: u64,
) -> f64 {
    let (nx, ny, nu) = (d.nx(), d.ny(), d.nu());
    let mut r = rng(seed);
    let px_u = |x: usize, u: usize| (0..ny).map(|y| d.p(x, y, u)).sum::<f64>();
    let py_u = |y: usize, u: usize| (0..nx).map(|x| d.p(x, y, u)).sum::<f64>();
    // Centres a function of (·, U) within each u and scales to unit E var.
    let standardize = |f: &mut Vec<f64>, n: usize, w: &dyn Fn(usize, usize) -> f64| {
        for u in 0..nu {
            let m: f64 = (0..n).map(|i| w(i, u)).sum();
            if m <= 1e-15 {
                continue;
            }
            let mean = (0..n).map(|i| w(i, u) * f[i * nu + u]).sum::<f64>() / m;
            for i in 0..n {
                f[i * nu + u] -= mean;
            }
        }
        let var: f64 = (0..n)
            .flat_map(|i| (0..nu).map(move |u| (i, u)))
            .map(|(i, u)| w(i, u) * f[i * nu + u].powi(2))
            .sum();
        if var > 1e-300 {
            f.iter_mut().for_each(|v| *v /= var.sqrt());
        }
        var
    };
    let mut best = 0.0f64;
    for _ in 0..restarts {
        let mut f: Vec<f64> = (0..nx * nu).map(|_| r.gen_range(-1.0..1.0)).collect();
        let mut g = vec![0.0; ny * nu];
        standardize(&mut f, nx, &px_u);
        let mut last = -1.0;
        for _ in 0..iters {
            for y in 0..ny {
                for u in 0..nu {
                    let m = py_u(y, u);
                    g[y * nu + u] = if m > 1e-15 {
                        (0..nx).map(|x| d.p(x, y, u) * f[x * nu + u]).sum::<f64>() / m
                    } else {
                        0.0
                    };
                }
            }
            standardize(&mut g, ny, &py_u);
            for x in 0..nx {
                for u in 0..nu {
                    let m = px_u(x, u);
                    f[x * nu + u] = if m > 1e-15 {
                        (0..ny).map(|y| d.p(x, y, u) * g[y * nu + u]).sum::<f64>() / m
                    } else {
                        0.0
                    };
                }
            }
            standardize(&mut f, nx, &px_u);
            let corr: f64 = (0..nx)
                .flat_map(|x| (0..ny).map(move |y| (x, y)))
                .flat_map(|(x, y)| (0..nu).map(move |u| (x, y, u)))
                .map(|(x, y, u)| d.p(x, y, u) * f[x * nu + u] * g[y * nu + u])
                .sum();
            if (corr - last).abs() < 1e-15 {
                last = corr;
                break;
            }
            last = corr;
        }
        best = best.max(last);
    }
    best.min(1.0)
}

/// Box `P(u|x) P(v|y)` built from two independent local channels.
pub fn product_box(rng: &mut ChaCha8Rng) -> [[[[f64; 2]; 2]; 2]; 2] {
    let (ku, kv) = (random_kernel(rng, 2, 2), random_kernel(rng, 2, 2));
    let mut b = [[[[0.0; 2]; 2]; 2]; 2];
    for x in 0..2 {
        for y in 0..2 {
            for u in 0..2 {
                for v in 0..2 {
                    b[x][y][u][v] = ku[x][u] * kv[y][v];
                }
            }
        }
    }
    b
}
