use nalgebra::{DMatrix, SymmetricEigen};

use crate::dist::{JointDist2, JointDist3, MASS_TOL};
use crate::error::{Error, Result};

/// Normalized joint matrix `Q(x,y) = P(x,y) / sqrt(P(x) P(y))` on the symbols of
/// positive marginal mass.
#[derive(Debug, Clone, PartialEq)]
pub struct QMatrix {
    /// Original `X` indices of the kept rows.
    pub rows: Vec<usize>,
    /// Original `Y` indices of the kept columns.
    pub cols: Vec<usize>,
    pub entries: DMatrix<f64>,
}

impl QMatrix {
    /// Singular values clamped to `[0, 1]`, in decreasing order.
    pub fn singular_values(&self) -> Vec<f64> {
        let mut sv: Vec<f64> = self
            .entries
            .clone()
            .singular_values()
            .iter()
            .map(|s| s.clamp(0.0, 1.0))
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }
}

pub fn q_matrix(d: &JointDist2) -> Result<QMatrix> {
    let (px, py) = (d.marginal_x(), d.marginal_y());
    let rows: Vec<usize> = (0..d.nx()).filter(|&x| px[x] > MASS_TOL).collect();
    let cols: Vec<usize> = (0..d.ny()).filter(|&y| py[y] > MASS_TOL).collect();
    if rows.is_empty() || cols.is_empty() {
        return Err(Error::DegenerateSupport);
    }
    let entries = DMatrix::from_fn(rows.len(), cols.len(), |i, j| {
        let (x, y) = (rows[i], cols[j]);
        d.p(x, y) / (px[x] * py[y]).sqrt()
    });
    Ok(QMatrix {
        rows,
        cols,
        entries,
    })
}

/// Maximal correlation as the second singular value of the Q matrix.
pub fn maxcorr_svd(d: &JointDist2) -> f64 {
    let Ok(q) = q_matrix(d) else {
        return 0.0;
    };
    if q.rows.len() < 2 || q.cols.len() < 2 {
        return 0.0;
    }
    q.singular_values()[1]
}

/// `sqrt(Σ P²(x,y) / (P(x) P(y)) - 1)` for binary pairs.
pub fn maxcorr_binary_formula(d: &JointDist2) -> Result<f64> {
    if d.nx() != 2 || d.ny() != 2 {
        return Err(Error::NotBinary);
    }
    let (px, py) = (d.marginal_x(), d.marginal_y());
    if px.iter().chain(py.iter()).any(|&m| m <= MASS_TOL) {
        return Err(Error::NotBinary);
    }
    let mut sum = 0.0;
    for x in 0..2 {
        for y in 0..2 {
            sum += d.p(x, y).powi(2) / (px[x] * py[y]);
        }
    }
    Ok((sum - 1.0).max(0.0).sqrt().min(1.0))
}

/// `ρ_m(X;Y|U)` for discrete `U`: the largest slice maximal correlation over
/// `u` with positive mass.
pub fn cond_maxcorr(d: &JointDist3) -> f64 {
    d.supported_slices()
        .iter()
        .map(|(_, _, slice)| maxcorr_svd(slice))
        .fold(0.0, f64::max)
}

/// Second singular value of the Q matrix of an unnormalized `nx × ny` slice
/// (row-major masses). Used in the optimizer's inner loop: rank-2 cases use the
/// Frobenius identity `σ₂² = ‖Q‖² − 1`, larger ones the deflated Gram matrix.
pub fn second_singular_value_fast(masses: &[f64], nx: usize, ny: usize) -> f64 {
    let total: f64 = masses.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    let cutoff = MASS_TOL * total;
    let mut px = vec![0.0; nx];
    let mut py = vec![0.0; ny];
    for x in 0..nx {
        for y in 0..ny {
            let m = masses[x * ny + y];
            px[x] += m;
            py[y] += m;
        }
    }
    let rows: Vec<usize> = (0..nx).filter(|&x| px[x] > cutoff).collect();
    let cols: Vec<usize> = (0..ny).filter(|&y| py[y] > cutoff).collect();
    let (kr, kc) = (rows.len(), cols.len());
    if kr < 2 || kc < 2 {
        return 0.0;
    }
    let q = |i: usize, j: usize| {
        let (x, y) = (rows[i], cols[j]);
        masses[x * ny + y] / (px[x] * py[y]).sqrt()
    };
    if kr.min(kc) == 2 {
        let mut fro = 0.0;
        for i in 0..kr {
            for j in 0..kc {
                fro += q(i, j).powi(2);
            }
        }
        return (fro - 1.0).max(0.0).sqrt().min(1.0);
    }
    // Gram matrix on the column side minus the top singular direction sqrt(P_Y).
    let qm = DMatrix::from_fn(kr, kc, q);
    let mut gram = qm.transpose() * &qm;
    let v: Vec<f64> = cols.iter().map(|&y| (py[y] / total).sqrt()).collect();
    for i in 0..kc {
        for j in 0..kc {
            gram[(i, j)] -= v[i] * v[j];
        }
    }
    let eig = SymmetricEigen::new(gram);
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    top.max(0.0).sqrt().min(1.0)
}
