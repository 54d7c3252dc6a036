//! Finite joint distributions, channels and the canonical distribution families.
//!
//! Everything here is immutable after construction. Constructors validate the
//! probability masses (tolerance [`MASS_TOL`]) and re-normalize inputs that are
//! within tolerance so downstream identities hold to machine precision.

use crate::error::{Error, Result};

/// Absolute tolerance on probability masses (negativity and normalization).
pub const MASS_TOL: f64 = 1e-12;

/// Ordered set of real-valued symbols.
#[derive(Debug, Clone, PartialEq)]
pub struct Alphabet {
    labels: Vec<f64>,
}

impl Alphabet {
    pub fn new(labels: Vec<f64>) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidAlphabet("empty alphabet".into()));
        }
        if let Some(bad) = labels.iter().find(|l| !l.is_finite()) {
            return Err(Error::InvalidAlphabet(format!("non-finite label {bad}")));
        }
        for (i, a) in labels.iter().enumerate() {
            if labels[i + 1..].contains(a) {
                return Err(Error::InvalidAlphabet(format!("duplicate label {a}")));
            }
        }
        Ok(Self { labels })
    }

    /// Labels `0, 1, ..., n-1`.
    pub fn indexed(n: usize) -> Self {
        assert!(n > 0, "alphabet size must be positive");
        Self {
            labels: (0..n).map(|i| i as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[f64] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> f64 {
        self.labels[i]
    }

    fn permuted(&self, perm: &[usize]) -> Self {
        Self {
            labels: perm.iter().map(|&i| self.labels[i]).collect(),
        }
    }
}

/// Checks nonnegativity and normalization, returning the total mass.
pub fn check_masses(masses: &[f64]) -> Result<f64> {
    let mut total = 0.0;
    for (index, &value) in masses.iter().enumerate() {
        if !value.is_finite() {
            return Err(Error::NotNormalized { total: f64::NAN });
        }
        if value < -MASS_TOL {
            return Err(Error::NegativeMass { index, value });
        }
        total += value;
    }
    if (total - 1.0).abs() > MASS_TOL {
        return Err(Error::NotNormalized { total });
    }
    Ok(total)
}

fn normalized(mut masses: Vec<f64>) -> Result<Vec<f64>> {
    check_masses(&masses)?;
    for m in masses.iter_mut() {
        if *m < 0.0 {
            *m = 0.0;
        }
    }
    let total: f64 = masses.iter().sum();
    masses.iter_mut().for_each(|m| *m /= total);
    Ok(masses)
}

fn flatten_rows(rows: &[Vec<f64>], ny: usize) -> Result<Vec<f64>> {
    let mut flat = Vec::with_capacity(rows.len() * ny);
    for (x, row) in rows.iter().enumerate() {
        if row.len() != ny {
            return Err(Error::ShapeMismatch(format!(
                "row {x} has {} entries, expected {ny}",
                row.len()
            )));
        }
        flat.extend_from_slice(row);
    }
    Ok(flat)
}

/// Joint pmf `p[x][y]` over `X × Y`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist2 {
    alphabet_x: Alphabet,
    alphabet_y: Alphabet,
    pmf: Vec<f64>,
}

impl JointDist2 {
    pub fn new(alphabet_x: Alphabet, alphabet_y: Alphabet, pmf: Vec<f64>) -> Result<Self> {
        let (nx, ny) = (alphabet_x.len(), alphabet_y.len());
        if pmf.len() != nx * ny {
            return Err(Error::ShapeMismatch(format!(
                "pmf has {} entries, alphabets are {nx}x{ny}",
                pmf.len()
            )));
        }
        Ok(Self {
            alphabet_x,
            alphabet_y,
            pmf: normalized(pmf)?,
        })
    }

    pub fn from_labeled_rows(
        alphabet_x: Alphabet,
        alphabet_y: Alphabet,
        rows: &[Vec<f64>],
    ) -> Result<Self> {
        if rows.len() != alphabet_x.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} rows for an X alphabet of size {}",
                rows.len(),
                alphabet_x.len()
            )));
        }
        let flat = flatten_rows(rows, alphabet_y.len())?;
        Self::new(alphabet_x, alphabet_y, flat)
    }

    /// Rows of the pmf with default labels `0..n`.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let nx = rows.len();
        let ny = rows.first().map(Vec::len).unwrap_or(0);
        if nx == 0 || ny == 0 {
            return Err(Error::ShapeMismatch("empty pmf".into()));
        }
        Self::from_labeled_rows(Alphabet::indexed(nx), Alphabet::indexed(ny), rows)
    }

    pub fn validate(&self) -> Result<()> {
        if self.pmf.len() != self.nx() * self.ny() {
            return Err(Error::ShapeMismatch(
                "pmf size does not match alphabets".into(),
            ));
        }
        check_masses(&self.pmf).map(|_| ())
    }

    pub fn nx(&self) -> usize {
        self.alphabet_x.len()
    }

    pub fn ny(&self) -> usize {
        self.alphabet_y.len()
    }

    pub fn alphabet_x(&self) -> &Alphabet {
        &self.alphabet_x
    }

    pub fn alphabet_y(&self) -> &Alphabet {
        &self.alphabet_y
    }

    #[inline]
    pub fn p(&self, x: usize, y: usize) -> f64 {
        self.pmf[x * self.ny() + y]
    }

    /// Row-major masses.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.pmf.chunks(self.ny()).map(<[f64]>::to_vec).collect()
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.pmf.chunks(self.ny()).map(|r| r.iter().sum()).collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        let ny = self.ny();
        let mut m = vec![0.0; ny];
        for row in self.pmf.chunks(ny) {
            for (acc, v) in m.iter_mut().zip(row) {
                *acc += v;
            }
        }
        m
    }

    /// The pair `(Y, X)`.
    pub fn transpose(&self) -> Self {
        let (nx, ny) = (self.nx(), self.ny());
        let mut pmf = vec![0.0; nx * ny];
        for x in 0..nx {
            for y in 0..ny {
                pmf[y * nx + x] = self.p(x, y);
            }
        }
        Self {
            alphabet_x: self.alphabet_y.clone(),
            alphabet_y: self.alphabet_x.clone(),
            pmf,
        }
    }

    /// Reorders symbols: new row `i` is old row `row_perm[i]`, likewise columns.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Self {
        let ny = col_perm.len();
        let mut pmf = Vec::with_capacity(self.pmf.len());
        for &x in row_perm {
            for &y in col_perm {
                pmf.push(self.p(x, y));
            }
        }
        debug_assert_eq!(pmf.len(), row_perm.len() * ny);
        Self {
            alphabet_x: self.alphabet_x.permuted(row_perm),
            alphabet_y: self.alphabet_y.permuted(col_perm),
            pmf,
        }
    }

    /// Replaces the labels, keeping the masses.
    pub fn relabeled(&self, alphabet_x: Alphabet, alphabet_y: Alphabet) -> Result<Self> {
        if alphabet_x.len() != self.nx() || alphabet_y.len() != self.ny() {
            return Err(Error::ShapeMismatch(
                "relabeling changes alphabet sizes".into(),
            ));
        }
        Ok(Self {
            alphabet_x,
            alphabet_y,
            pmf: self.pmf.clone(),
        })
    }

    /// Joint law of `((X1,X2),(Y1,Y2))` for independent pairs. Pair symbols are
    /// ordered lexicographically and labeled `0..n`.
    pub fn product_pair(&self, other: &JointDist2) -> JointDist2 {
        let (nx1, ny1, nx2, ny2) = (self.nx(), self.ny(), other.nx(), other.ny());
        let (nx, ny) = (nx1 * nx2, ny1 * ny2);
        let mut pmf = vec![0.0; nx * ny];
        for x1 in 0..nx1 {
            for x2 in 0..nx2 {
                for y1 in 0..ny1 {
                    for y2 in 0..ny2 {
                        pmf[(x1 * nx2 + x2) * ny + y1 * ny2 + y2] =
                            self.p(x1, y1) * other.p(x2, y2);
                    }
                }
            }
        }
        JointDist2 {
            alphabet_x: Alphabet::indexed(nx),
            alphabet_y: Alphabet::indexed(ny),
            pmf,
        }
    }

    /// Joint law of `(X, Y, W)` with `W` drawn from `channel` given `(X, Y)`.
    pub fn attach_channel(&self, channel: &Channel) -> Result<JointDist3> {
        if channel.input_size_x() != self.nx() || channel.input_size_y() != self.ny() {
            return Err(Error::ShapeMismatch(format!(
                "channel inputs {}x{} do not match distribution {}x{}",
                channel.input_size_x(),
                channel.input_size_y(),
                self.nx(),
                self.ny()
            )));
        }
        let nw = channel.output_size();
        let mut pmf = Vec::with_capacity(self.pmf.len() * nw);
        for (xy, &p) in self.pmf.iter().enumerate() {
            pmf.extend(channel.row(xy).iter().map(|k| p * k));
        }
        Ok(JointDist3 {
            alphabet_x: self.alphabet_x.clone(),
            alphabet_y: self.alphabet_y.clone(),
            alphabet_u: Alphabet::indexed(nw),
            pmf,
        })
    }

    /// `P_XY · P_U` with `U` independent of the pair.
    pub fn with_independent_u(&self, pu: &[f64]) -> Result<JointDist3> {
        let pu = normalized(pu.to_vec())?;
        let nu = pu.len();
        let mut pmf = Vec::with_capacity(self.pmf.len() * nu);
        for &p in &self.pmf {
            pmf.extend(pu.iter().map(|q| p * q));
        }
        Ok(JointDist3 {
            alphabet_x: self.alphabet_x.clone(),
            alphabet_y: self.alphabet_y.clone(),
            alphabet_u: Alphabet::indexed(nu),
            pmf,
        })
    }

    /// The same pair viewed as a tensor with a degenerate `U`.
    pub fn with_degenerate_u(&self) -> JointDist3 {
        JointDist3 {
            alphabet_x: self.alphabet_x.clone(),
            alphabet_y: self.alphabet_y.clone(),
            alphabet_u: Alphabet::indexed(1),
            pmf: self.pmf.clone(),
        }
    }
}

/// Joint pmf `p[x][y][u]` over `X × Y × U`.
#[derive(Debug, Clone, PartialEq)]
pub struct JointDist3 {
    alphabet_x: Alphabet,
    alphabet_y: Alphabet,
    alphabet_u: Alphabet,
    pmf: Vec<f64>,
}

impl JointDist3 {
    /// `pmf` is flat with index `(x * ny + y) * nu + u`.
    pub fn new(
        alphabet_x: Alphabet,
        alphabet_y: Alphabet,
        alphabet_u: Alphabet,
        pmf: Vec<f64>,
    ) -> Result<Self> {
        let n = alphabet_x.len() * alphabet_y.len() * alphabet_u.len();
        if pmf.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "pmf has {} entries, expected {n}",
                pmf.len()
            )));
        }
        Ok(Self {
            alphabet_x,
            alphabet_y,
            alphabet_u,
            pmf: normalized(pmf)?,
        })
    }

    /// Builds the tensor from one `X × Y` matrix of joint masses per `u`.
    pub fn from_u_slices(
        alphabet_x: Alphabet,
        alphabet_y: Alphabet,
        alphabet_u: Alphabet,
        slices: &[Vec<Vec<f64>>],
    ) -> Result<Self> {
        let (nx, ny, nu) = (alphabet_x.len(), alphabet_y.len(), alphabet_u.len());
        if slices.len() != nu {
            return Err(Error::ShapeMismatch(format!(
                "{} slices for a U alphabet of size {nu}",
                slices.len()
            )));
        }
        let mut pmf = vec![0.0; nx * ny * nu];
        for (u, slice) in slices.iter().enumerate() {
            if slice.len() != nx {
                return Err(Error::ShapeMismatch(format!(
                    "slice {u} has {} rows",
                    slice.len()
                )));
            }
            let flat = flatten_rows(slice, ny)?;
            for (xy, v) in flat.into_iter().enumerate() {
                pmf[xy * nu + u] = v;
            }
        }
        Self::new(alphabet_x, alphabet_y, alphabet_u, pmf)
    }

    /// Stacks `P_{X,Y|U=u} = parts[u]` with `P_U = weights`.
    pub fn mixture(weights: &[f64], parts: &[JointDist2]) -> Result<Self> {
        if weights.len() != parts.len() || parts.is_empty() {
            return Err(Error::ShapeMismatch(
                "one weight per component required".into(),
            ));
        }
        let (ax, ay) = (parts[0].alphabet_x.clone(), parts[0].alphabet_y.clone());
        if parts
            .iter()
            .any(|p| p.alphabet_x != ax || p.alphabet_y != ay)
        {
            return Err(Error::ShapeMismatch(
                "mixture components differ in alphabets".into(),
            ));
        }
        let weights = normalized(weights.to_vec())?;
        let nu = parts.len();
        let mut pmf = vec![0.0; ax.len() * ay.len() * nu];
        for (u, (w, part)) in weights.iter().zip(parts).enumerate() {
            for (xy, p) in part.pmf.iter().enumerate() {
                pmf[xy * nu + u] = w * p;
            }
        }
        Ok(Self {
            alphabet_x: ax,
            alphabet_y: ay,
            alphabet_u: Alphabet::indexed(nu),
            pmf,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.pmf.len() != self.nx() * self.ny() * self.nu() {
            return Err(Error::ShapeMismatch(
                "pmf size does not match alphabets".into(),
            ));
        }
        check_masses(&self.pmf).map(|_| ())
    }

    pub fn nx(&self) -> usize {
        self.alphabet_x.len()
    }

    pub fn ny(&self) -> usize {
        self.alphabet_y.len()
    }

    pub fn nu(&self) -> usize {
        self.alphabet_u.len()
    }

    pub fn alphabet_x(&self) -> &Alphabet {
        &self.alphabet_x
    }

    pub fn alphabet_y(&self) -> &Alphabet {
        &self.alphabet_y
    }

    pub fn alphabet_u(&self) -> &Alphabet {
        &self.alphabet_u
    }

    #[inline]
    pub fn p(&self, x: usize, y: usize, u: usize) -> f64 {
        self.pmf[(x * self.ny() + y) * self.nu() + u]
    }

    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn marginal_u(&self) -> Vec<f64> {
        let nu = self.nu();
        let mut m = vec![0.0; nu];
        for chunk in self.pmf.chunks(nu) {
            for (acc, v) in m.iter_mut().zip(chunk) {
                *acc += v;
            }
        }
        m
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        self.marginal_xy().marginal_x()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        self.marginal_xy().marginal_y()
    }

    /// Sums out `U`.
    pub fn marginal_xy(&self) -> JointDist2 {
        JointDist2 {
            alphabet_x: self.alphabet_x.clone(),
            alphabet_y: self.alphabet_y.clone(),
            pmf: self.pmf.chunks(self.nu()).map(|c| c.iter().sum()).collect(),
        }
    }

    /// `P_{X,Y|U=u}`.
    pub fn condition_on_u(&self, u: usize) -> Result<JointDist2> {
        if u >= self.nu() {
            return Err(Error::OutOfRange(format!(
                "u={u} outside alphabet of size {}",
                self.nu()
            )));
        }
        let mass = self.marginal_u()[u];
        if mass <= MASS_TOL {
            return Err(Error::ZeroConditioningMass { index: u, mass });
        }
        Ok(self.slice_unchecked(u, mass))
    }

    fn slice_unchecked(&self, u: usize, mass: f64) -> JointDist2 {
        let nu = self.nu();
        JointDist2 {
            alphabet_x: self.alphabet_x.clone(),
            alphabet_y: self.alphabet_y.clone(),
            pmf: self.pmf.chunks(nu).map(|c| c[u] / mass).collect(),
        }
    }

    /// `(u, P_U(u), P_{X,Y|U=u})` for every `u` with `P_U(u) > MASS_TOL`.
    pub fn supported_slices(&self) -> Vec<(usize, f64, JointDist2)> {
        self.marginal_u()
            .into_iter()
            .enumerate()
            .filter(|&(_, m)| m > MASS_TOL)
            .map(|(u, m)| (u, m, self.slice_unchecked(u, m)))
            .collect()
    }

    /// Swaps the roles of `X` and `Y`.
    pub fn transpose_xy(&self) -> Self {
        let (nx, ny, nu) = (self.nx(), self.ny(), self.nu());
        let mut pmf = vec![0.0; self.pmf.len()];
        for x in 0..nx {
            for y in 0..ny {
                for u in 0..nu {
                    pmf[(y * nx + x) * nu + u] = self.p(x, y, u);
                }
            }
        }
        Self {
            alphabet_x: self.alphabet_y.clone(),
            alphabet_y: self.alphabet_x.clone(),
            alphabet_u: self.alphabet_u.clone(),
            pmf,
        }
    }
}

/// Conditional pmf `K[w | x, y]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Channel {
    input_size_x: usize,
    input_size_y: usize,
    output_size: usize,
    kernel: Vec<f64>,
}

impl Channel {
    /// `kernel` is flat with index `(x * ny + y) * nw + w`.
    pub fn new(
        input_size_x: usize,
        input_size_y: usize,
        output_size: usize,
        kernel: Vec<f64>,
    ) -> Result<Self> {
        if input_size_x == 0 || input_size_y == 0 || output_size == 0 {
            return Err(Error::ShapeMismatch(
                "channel sizes must be positive".into(),
            ));
        }
        if kernel.len() != input_size_x * input_size_y * output_size {
            return Err(Error::ShapeMismatch(format!(
                "kernel has {} entries, expected {}",
                kernel.len(),
                input_size_x * input_size_y * output_size
            )));
        }
        let mut rows = Vec::with_capacity(kernel.len());
        for row in kernel.chunks(output_size) {
            rows.extend(normalized(row.to_vec())?);
        }
        Ok(Self {
            input_size_x,
            input_size_y,
            output_size,
            kernel: rows,
        })
    }

    /// Builds from the nested `[x][y][w]` layout of the file format.
    pub fn from_nested(kernel: &[Vec<Vec<f64>>]) -> Result<Self> {
        let nx = kernel.len();
        let ny = kernel.first().map(Vec::len).unwrap_or(0);
        let nw = kernel
            .first()
            .and_then(|r| r.first())
            .map(Vec::len)
            .unwrap_or(0);
        let mut flat = Vec::with_capacity(nx * ny * nw);
        for (x, row) in kernel.iter().enumerate() {
            if row.len() != ny {
                return Err(Error::ShapeMismatch(format!(
                    "kernel row {x} has {} inputs",
                    row.len()
                )));
            }
            for dist in row {
                if dist.len() != nw {
                    return Err(Error::ShapeMismatch(
                        "ragged kernel output dimension".into(),
                    ));
                }
                flat.extend_from_slice(dist);
            }
        }
        Self::new(nx, ny, nw, flat)
    }

    /// Nested `[x][y][w]` layout.
    pub fn to_nested(&self) -> Vec<Vec<Vec<f64>>> {
        (0..self.input_size_x)
            .map(|x| {
                (0..self.input_size_y)
                    .map(|y| self.row(x * self.input_size_y + y).to_vec())
                    .collect()
            })
            .collect()
    }

    /// Deterministic channel `w = f(x, y)`.
    pub fn deterministic(
        input_size_x: usize,
        input_size_y: usize,
        output_size: usize,
        f: impl Fn(usize, usize) -> usize,
    ) -> Self {
        let mut kernel = vec![0.0; input_size_x * input_size_y * output_size];
        for x in 0..input_size_x {
            for y in 0..input_size_y {
                let w = f(x, y);
                assert!(w < output_size, "deterministic channel output out of range");
                kernel[(x * input_size_y + y) * output_size + w] = 1.0;
            }
        }
        Self {
            input_size_x,
            input_size_y,
            output_size,
            kernel,
        }
    }

    /// Every input mapped to output 0.
    pub fn constant(input_size_x: usize, input_size_y: usize, output_size: usize) -> Self {
        Self::deterministic(input_size_x, input_size_y, output_size, |_, _| 0)
    }

    /// `W = (X, Y)`, with `w = x * ny + y`.
    pub fn identity(input_size_x: usize, input_size_y: usize) -> Self {
        Self::deterministic(
            input_size_x,
            input_size_y,
            input_size_x * input_size_y,
            |x, y| x * input_size_y + y,
        )
    }

    pub fn input_size_x(&self) -> usize {
        self.input_size_x
    }

    pub fn input_size_y(&self) -> usize {
        self.input_size_y
    }

    pub fn output_size(&self) -> usize {
        self.output_size
    }

    #[inline]
    pub fn prob(&self, x: usize, y: usize, w: usize) -> f64 {
        self.kernel[(x * self.input_size_y + y) * self.output_size + w]
    }

    /// `K[· | xy]` for the flattened input index `xy = x * ny + y`.
    #[inline]
    pub fn row(&self, xy: usize) -> &[f64] {
        &self.kernel[xy * self.output_size..(xy + 1) * self.output_size]
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    /// Channel of independent components acting on `((x1,x2),(y1,y2))`, output
    /// `(w1, w2)` flattened as `w1 * nw2 + w2`. Input ordering matches
    /// [`JointDist2::product_pair`].
    pub fn product(&self, other: &Channel) -> Channel {
        let (nx1, ny1, nw1) = (self.input_size_x, self.input_size_y, self.output_size);
        let (nx2, ny2, nw2) = (other.input_size_x, other.input_size_y, other.output_size);
        let (nx, ny, nw) = (nx1 * nx2, ny1 * ny2, nw1 * nw2);
        let mut kernel = vec![0.0; nx * ny * nw];
        for x1 in 0..nx1 {
            for x2 in 0..nx2 {
                for y1 in 0..ny1 {
                    for y2 in 0..ny2 {
                        let xy = (x1 * nx2 + x2) * ny + y1 * ny2 + y2;
                        for w1 in 0..nw1 {
                            for w2 in 0..nw2 {
                                kernel[xy * nw + w1 * nw2 + w2] =
                                    self.prob(x1, y1, w1) * other.prob(x2, y2, w2);
                            }
                        }
                    }
                }
            }
        }
        Channel {
            input_size_x: nx,
            input_size_y: ny,
            output_size: nw,
            kernel,
        }
    }

    /// Re-indexes inputs: new input `(i, j)` behaves like old input `(row_perm[i], col_perm[j])`.
    pub fn permuted_inputs(&self, row_perm: &[usize], col_perm: &[usize]) -> Channel {
        let mut kernel = Vec::with_capacity(self.kernel.len());
        for &x in row_perm {
            for &y in col_perm {
                kernel.extend_from_slice(self.row(x * self.input_size_y + y));
            }
        }
        Channel {
            input_size_x: row_perm.len(),
            input_size_y: col_perm.len(),
            output_size: self.output_size,
            kernel,
        }
    }

    /// Swaps the two inputs: new input `(y, x)` behaves like old input `(x, y)`.
    pub fn transposed_inputs(&self) -> Channel {
        let mut kernel = Vec::with_capacity(self.kernel.len());
        for y in 0..self.input_size_y {
            for x in 0..self.input_size_x {
                kernel.extend_from_slice(self.row(x * self.input_size_y + y));
            }
        }
        Channel {
            input_size_x: self.input_size_y,
            input_size_y: self.input_size_x,
            output_size: self.output_size,
            kernel,
        }
    }

    /// Pads the output alphabet with never-used symbols.
    pub fn padded(&self, output_size: usize) -> Channel {
        assert!(output_size >= self.output_size);
        let mut kernel = Vec::with_capacity(self.input_size_x * self.input_size_y * output_size);
        for row in self.kernel.chunks(self.output_size) {
            kernel.extend_from_slice(row);
            kernel.extend(std::iter::repeat(0.0).take(output_size - self.output_size));
        }
        Channel {
            input_size_x: self.input_size_x,
            input_size_y: self.input_size_y,
            output_size,
            kernel,
        }
    }

    /// Merges output `b` into output `a`, dropping `b`.
    pub fn merge_outputs(&self, a: usize, b: usize) -> Channel {
        assert!(a != b && a < self.output_size && b < self.output_size);
        let nw = self.output_size - 1;
        let mut kernel = Vec::with_capacity(self.input_size_x * self.input_size_y * nw);
        for row in self.kernel.chunks(self.output_size) {
            for (w, &k) in row.iter().enumerate() {
                if w == b {
                    continue;
                }
                kernel.push(if w == a { k + row[b] } else { k });
            }
        }
        Channel {
            input_size_x: self.input_size_x,
            input_size_y: self.input_size_y,
            output_size: nw,
            kernel,
        }
    }
}

/// Local processing `(P_{U|X}, P_{V|Y})` of a non-interactive simulation. Each
/// component is a [`Channel`] whose second input has size 1.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductChannelPair {
    pub chan_u_given_x: Channel,
    pub chan_v_given_y: Channel,
}

impl ProductChannelPair {
    pub fn new(chan_u_given_x: Channel, chan_v_given_y: Channel) -> Result<Self> {
        if chan_u_given_x.input_size_y() != 1 || chan_v_given_y.input_size_y() != 1 {
            return Err(Error::ShapeMismatch(
                "local channels take a single input".into(),
            ));
        }
        Ok(Self {
            chan_u_given_x,
            chan_v_given_y,
        })
    }

    /// Joint law of `(U, V)` under `P_{U|X} P_{XY} P_{V|Y}`.
    pub fn simulate(&self, source: &JointDist2) -> Result<JointDist2> {
        let (cu, cv) = (&self.chan_u_given_x, &self.chan_v_given_y);
        if cu.input_size_x() != source.nx() || cv.input_size_x() != source.ny() {
            return Err(Error::ShapeMismatch(
                "local channels do not match the source".into(),
            ));
        }
        let (nu, nv) = (cu.output_size(), cv.output_size());
        let mut pmf = vec![0.0; nu * nv];
        for x in 0..source.nx() {
            for y in 0..source.ny() {
                let p = source.p(x, y);
                if p == 0.0 {
                    continue;
                }
                for u in 0..nu {
                    let pu = p * cu.prob(x, 0, u);
                    for v in 0..nv {
                        pmf[u * nv + v] += pu * cv.prob(y, 0, v);
                    }
                }
            }
        }
        JointDist2::new(Alphabet::indexed(nu), Alphabet::indexed(nv), pmf)
    }
}

/// Doubly symmetric binary source with crossover probability `p0`.
pub fn make_dsbs(p0: f64) -> Result<JointDist2> {
    if !(0.0..=1.0).contains(&p0) {
        return Err(Error::OutOfRange(format!(
            "crossover probability {p0} not in [0,1]"
        )));
    }
    let (same, cross) = ((1.0 - p0) / 2.0, p0 / 2.0);
    JointDist2::new(
        Alphabet::indexed(2),
        Alphabet::indexed(2),
        vec![same, cross, cross, same],
    )
}

/// Binary pair fixed by `(P_X(0), P_Y(0), P_XY(0,0))`.
pub fn make_binary(px0: f64, py0: f64, p00: f64) -> Result<JointDist2> {
    let cells = [p00, px0 - p00, py0 - p00, 1.0 - px0 - py0 + p00];
    if let Some(c) = cells.iter().find(|&&c| c < -MASS_TOL || !c.is_finite()) {
        return Err(Error::Infeasible(format!(
            "(px0={px0}, py0={py0}, p00={p00}) implies cell mass {c}"
        )));
    }
    JointDist2::new(
        Alphabet::indexed(2),
        Alphabet::indexed(2),
        cells.iter().map(|c| c.max(0.0)).collect(),
    )
}
