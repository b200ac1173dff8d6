//! Even trigonometric polynomials and the symbol calculus of the DCT-III
//! algebra.
//!
//! A [`CosPoly`] stores plain cosine coefficients, `f(x) = sum_j c_j cos(j x)`
//! in one dimension and `f(x, y) = sum c_{j1,j2} cos(j1 x) cos(j2 y)` in two.
//! A [`Symbol`] adds a non-negative point mass at the zero frequency, which is
//! how rank-one Strang corrections are carried through coarsening.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Uniform samples of `[0, pi]` used for sup/inf estimates in one dimension.
pub const SUP_SAMPLES: usize = 4096;

/// Coarse tensor sample per dimension for 2D extrema, refined locally.
const SUP_SAMPLES_2D: usize = 513;

/// Samples used to certify positivity of a factored cofactor.
const PSI_POSITIVITY_SAMPLES: usize = 2048;

/// Even cosine polynomial in one or two variables.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CosPoly<T> {
    dim: usize,
    shape: [usize; 2],
    coeffs: Vec<T>,
}

impl<T: Scalar> CosPoly<T> {
    /// One-dimensional polynomial from `c_0, c_1, ...`.
    pub fn new(coeffs: Vec<T>) -> Self {
        let coeffs = if coeffs.is_empty() { vec![T::zero()] } else { coeffs };
        let n = coeffs.len();
        Self {
            dim: 1,
            shape: [n, 1],
            coeffs,
        }
        .normalized()
    }

    /// Two-dimensional polynomial from a row-major `rows x cols` grid, where
    /// entry `(j1, j2)` multiplies `cos(j1 x) cos(j2 y)`.
    pub fn from_grid(rows: usize, cols: usize, coeffs: Vec<T>) -> Result<Self> {
        if rows == 0 || cols == 0 || coeffs.len() != rows * cols {
            return Err(Error::SizeMismatch {
                expected: rows * cols,
                found: coeffs.len(),
            });
        }
        Ok(Self {
            dim: 2,
            shape: [rows, cols],
            coeffs,
        }
        .normalized())
    }

    /// Two-dimensional polynomial from nested rows.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::usage("ragged coefficient grid"));
        }
        let n = rows.len();
        Self::from_grid(n, cols, rows.into_iter().flatten().collect())
    }

    pub fn constant(dim: usize, c: T) -> Self {
        Self {
            dim,
            shape: [1, 1],
            coeffs: vec![c],
        }
    }

    pub fn zero(dim: usize) -> Self {
        Self::constant(dim, T::zero())
    }

    pub fn one(dim: usize) -> Self {
        Self::constant(dim, T::one())
    }

    /// Embeds a 1D polynomial as a function of `x` (`axis = 0`) or `y` (`axis = 1`).
    pub fn lift(p: &CosPoly<T>, axis: usize) -> Self {
        assert_eq!(p.dim, 1, "lift expects a one-dimensional polynomial");
        let n = p.coeffs.len();
        let shape = if axis == 0 { [n, 1] } else { [1, n] };
        Self {
            dim: 2,
            shape,
            coeffs: p.coeffs.clone(),
        }
    }

    /// `p(x) + p(y)`.
    pub fn separable_sum(p: &CosPoly<T>) -> Self {
        Self::lift(p, 0).add(&Self::lift(p, 1))
    }

    /// `p(x) q(y)`: the outer product of the coefficient vectors.
    pub fn tensor_product(px: &CosPoly<T>, py: &CosPoly<T>) -> Self {
        assert!(px.dim == 1 && py.dim == 1);
        let (n1, n2) = (px.coeffs.len(), py.coeffs.len());
        let mut coeffs = Vec::with_capacity(n1 * n2);
        for &a in &px.coeffs {
            coeffs.extend(py.coeffs.iter().map(|&b| a * b));
        }
        Self {
            dim: 2,
            shape: [n1, n2],
            coeffs,
        }
        .normalized()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of stored coefficients per dimension (`[k + 1, 1]` in 1D).
    pub fn shape(&self) -> [usize; 2] {
        self.shape
    }

    /// Degree per dimension; the second entry is 0 in 1D.
    pub fn degree(&self) -> [usize; 2] {
        [self.shape[0] - 1, self.shape[1] - 1]
    }

    /// Largest per-dimension degree.
    pub fn max_degree(&self) -> usize {
        self.degree()[0].max(self.degree()[1])
    }

    /// Row-major coefficients.
    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeff(&self, j1: usize, j2: usize) -> T {
        if j1 < self.shape[0] && j2 < self.shape[1] {
            self.coeffs[j1 * self.shape[1] + j2]
        } else {
            T::zero()
        }
    }

    /// Coefficients as nested rows (a single row in 1D).
    pub fn to_rows(&self) -> Vec<Vec<T>> {
        if self.dim == 1 {
            vec![self.coeffs.clone()]
        } else {
            self.coeffs.chunks(self.shape[1]).map(<[T]>::to_vec).collect()
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Sum of absolute coefficients, an upper bound for `sup |f|`.
    pub fn l1_norm(&self) -> T {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    /// Evaluates the cosine sum at a point with one coordinate per dimension.
    pub fn eval(&self, x: &[T]) -> Result<T> {
        if x.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: x.len(),
            });
        }
        Ok(match self.dim {
            1 => self.eval1(x[0]),
            _ => self.eval2(x[0], x[1]),
        })
    }

    /// Evaluates a 1D polynomial.
    pub fn eval1(&self, x: T) -> T {
        debug_assert_eq!(self.dim, 1);
        self.coeffs
            .iter()
            .enumerate()
            .map(|(j, &c)| c * (T::from_usize_lossy(j) * x).cos())
            .sum()
    }

    /// Evaluates a 2D polynomial.
    pub fn eval2(&self, x: T, y: T) -> T {
        debug_assert_eq!(self.dim, 2);
        let cy: Vec<T> = (0..self.shape[1])
            .map(|j| (T::from_usize_lossy(j) * y).cos())
            .collect();
        self.coeffs
            .chunks(self.shape[1])
            .enumerate()
            .map(|(j1, row)| {
                let inner: T = row.iter().zip(&cy).map(|(&c, &v)| c * v).sum();
                inner * (T::from_usize_lossy(j1) * x).cos()
            })
            .sum()
    }

    /// Value at the origin, `sum c_j`.
    pub fn at_origin(&self) -> T {
        self.coeffs.iter().copied().sum()
    }

    /// Product via `cos a cos b = (cos(a + b) + cos(a - b)) / 2` in each dimension.
    ///
    /// Panics when the dimensions differ; see [`multiply`] for the checked form.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "multiplying polynomials of different dimension");
        let shape = [
            self.shape[0] + other.shape[0] - 1,
            self.shape[1] + other.shape[1] - 1,
        ];
        let mut out = vec![T::zero(); shape[0] * shape[1]];
        let half = T::lit(0.5);
        let weight = if self.dim == 1 { half } else { half * half };
        for a1 in 0..self.shape[0] {
            for a2 in 0..self.shape[1] {
                let ca = self.coeff(a1, a2);
                if ca.is_zero() {
                    continue;
                }
                for b1 in 0..other.shape[0] {
                    for b2 in 0..other.shape[1] {
                        let cb = other.coeff(b1, b2);
                        if cb.is_zero() {
                            continue;
                        }
                        let w = ca * cb * weight;
                        let rows = [a1 + b1, a1.abs_diff(b1)];
                        if self.dim == 1 {
                            for r in rows {
                                out[r] = out[r] + w;
                            }
                        } else {
                            let cols = [a2 + b2, a2.abs_diff(b2)];
                            for r in rows {
                                for c in cols {
                                    out[r * shape[1] + c] = out[r * shape[1] + c] + w;
                                }
                            }
                        }
                    }
                }
            }
        }
        Self {
            dim: self.dim,
            shape,
            coeffs: out,
        }
        .normalized()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "adding polynomials of different dimension");
        let shape = [
            self.shape[0].max(other.shape[0]),
            self.shape[1].max(other.shape[1]),
        ];
        let mut coeffs = Vec::with_capacity(shape[0] * shape[1]);
        for j1 in 0..shape[0] {
            for j2 in 0..shape[1] {
                coeffs.push(self.coeff(j1, j2) + other.coeff(j1, j2));
            }
        }
        Self {
            dim: self.dim,
            shape,
            coeffs,
        }
        .normalized()
    }

    pub fn scale(&self, s: T) -> Self {
        Self {
            dim: self.dim,
            shape: self.shape,
            coeffs: self.coeffs.iter().map(|&c| c * s).collect(),
        }
        .normalized()
    }

    pub fn pow(&self, r: u32) -> Self {
        (0..r).fold(Self::one(self.dim), |acc, _| acc.mul(self))
    }

    /// Keeps the even-indexed coefficients: `g_l = h_{2l}` (per dimension).
    pub fn even_part(&self) -> Self {
        let shape = [self.shape[0].div_ceil(2), self.shape[1].div_ceil(2)];
        let mut coeffs = Vec::with_capacity(shape[0] * shape[1]);
        for l1 in 0..shape[0] {
            for l2 in 0..shape[1] {
                coeffs.push(self.coeff(2 * l1, 2 * l2));
            }
        }
        Self {
            dim: self.dim,
            shape,
            coeffs,
        }
        .normalized()
    }

    /// Minimum and maximum over `[0, pi]` (tensor domain in 2D).
    ///
    /// 1D uses [`SUP_SAMPLES`] uniform samples with endpoints included. 2D
    /// uses a coarse tensor sample followed by two local zoom passes around
    /// the best candidates.
    pub fn extrema(&self) -> (T, T) {
        if self.dim == 1 {
            let n = SUP_SAMPLES;
            let h = T::PI() / T::from_usize_lossy(n - 1);
            let mut lo = T::infinity();
            let mut hi = T::neg_infinity();
            for i in 0..n {
                let v = self.eval1(T::from_usize_lossy(i) * h);
                lo = lo.min(v);
                hi = hi.max(v);
            }
            (lo, hi)
        } else {
            self.extrema_2d()
        }
    }

    fn extrema_2d(&self) -> (T, T) {
        let n = SUP_SAMPLES_2D;
        let h = T::PI() / T::from_usize_lossy(n - 1);
        let xs: Vec<T> = (0..n).map(|i| T::from_usize_lossy(i) * h).collect();
        let cx = cos_table(self.shape[0], &xs);
        let cy = cos_table(self.shape[1], &xs);
        // w[j1][i2] = sum_j2 c[j1][j2] cos(j2 y_i2)
        let mut w = vec![T::zero(); self.shape[0] * n];
        for j1 in 0..self.shape[0] {
            for j2 in 0..self.shape[1] {
                let c = self.coeff(j1, j2);
                if c.is_zero() {
                    continue;
                }
                let row = &mut w[j1 * n..(j1 + 1) * n];
                for (acc, &v) in row.iter_mut().zip(&cy[j2 * n..(j2 + 1) * n]) {
                    *acc = *acc + c * v;
                }
            }
        }
        let mut lo = (T::infinity(), T::zero(), T::zero());
        let mut hi = (T::neg_infinity(), T::zero(), T::zero());
        let mut row = vec![T::zero(); n];
        for i1 in 0..n {
            row.iter_mut().for_each(|v| *v = T::zero());
            for j1 in 0..self.shape[0] {
                let c = cx[j1 * n + i1];
                for (acc, &v) in row.iter_mut().zip(&w[j1 * n..(j1 + 1) * n]) {
                    *acc = *acc + c * v;
                }
            }
            for (i2, &v) in row.iter().enumerate() {
                if v < lo.0 {
                    lo = (v, xs[i1], xs[i2]);
                }
                if v > hi.0 {
                    hi = (v, xs[i1], xs[i2]);
                }
            }
        }
        let lo = self.zoom(lo, h, |a, b| a < b);
        let hi = self.zoom(hi, h, |a, b| a > b);
        (lo, hi)
    }

    fn zoom(&self, start: (T, T, T), h: T, better: impl Fn(T, T) -> bool) -> T {
        let (mut best, mut bx, mut by) = start;
        let mut radius = h;
        let k = 16usize;
        for _ in 0..3 {
            let step = radius * T::lit(2.0) / T::from_usize_lossy(k);
            let (cx, cy) = (bx, by);
            for a in 0..=k {
                for b in 0..=k {
                    let x = (cx - radius + T::from_usize_lossy(a) * step)
                        .max(T::zero())
                        .min(T::PI());
                    let y = (cy - radius + T::from_usize_lossy(b) * step)
                        .max(T::zero())
                        .min(T::PI());
                    let v = self.eval2(x, y);
                    if better(v, best) {
                        best = v;
                        bx = x;
                        by = y;
                    }
                }
            }
            radius = step;
        }
        best
    }

    /// Drops trailing all-zero rows and columns.
    fn normalized(mut self) -> Self {
        let scale = self
            .coeffs
            .iter()
            .fold(T::zero(), |m, c| m.max(c.abs()));
        let negligible = |c: T| c.abs() <= scale * T::epsilon();
        // trailing rows
        while self.shape[0] > 1 {
            let r = self.shape[0] - 1;
            let row = &self.coeffs[r * self.shape[1]..];
            if row.iter().all(|&c| negligible(c)) {
                self.coeffs.truncate(r * self.shape[1]);
                self.shape[0] -= 1;
            } else {
                break;
            }
        }
        // trailing columns
        while self.shape[1] > 1 {
            let c = self.shape[1] - 1;
            let col_zero = (0..self.shape[0]).all(|r| negligible(self.coeffs[r * self.shape[1] + c]));
            if !col_zero {
                break;
            }
            let cols = self.shape[1];
            self.coeffs = self
                .coeffs
                .chunks(cols)
                .flat_map(|row| row[..cols - 1].to_vec())
                .collect();
            self.shape[1] -= 1;
        }
        self
    }
}

fn cos_table<T: Scalar>(n: usize, xs: &[T]) -> Vec<T> {
    let mut out = Vec::with_capacity(n * xs.len());
    for j in 0..n {
        let jj = T::from_usize_lossy(j);
        out.extend(xs.iter().map(|&x| (jj * x).cos()));
    }
    out
}

/// Checked product of two cosine polynomials.
pub fn multiply<T: Scalar>(a: &CosPoly<T>, b: &CosPoly<T>) -> Result<CosPoly<T>> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            found: b.dim,
        });
    }
    Ok(a.mul(b))
}

/// `1 + cos x` (and `(1 + cos x)(1 + cos y)` in 2D).
pub fn half_angle_weight<T: Scalar>(dim: usize) -> CosPoly<T> {
    let phi = CosPoly::new(vec![T::one(), T::one()]);
    if dim == 1 {
        phi
    } else {
        CosPoly::tensor_product(&phi, &phi)
    }
}

/// Generating function of a DCT-III matrix, with an optional point mass at
/// the zero frequency.
///
/// The eigenvalue at grid frequency `x_j` is `poly(x_j) + mass * [x_j = 0]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Symbol<T> {
    pub poly: CosPoly<T>,
    pub mass: T,
}

impl<T: Scalar> Symbol<T> {
    pub fn new(poly: CosPoly<T>, mass: T) -> Result<Self> {
        if !(mass >= T::zero()) {
            return Err(Error::usage(format!("symbol mass must be non-negative, got {mass}")));
        }
        Ok(Self { poly, mass })
    }

    pub fn from_poly(poly: CosPoly<T>) -> Self {
        Self {
            poly,
            mass: T::zero(),
        }
    }

    pub fn dim(&self) -> usize {
        self.poly.dim()
    }

    /// Evaluates the polynomial part; the mass is a spectral correction only.
    pub fn eval(&self, x: &[T]) -> Result<T> {
        self.poly.eval(x)
    }

    /// Eigenvalue carried by the zero frequency: `poly(0) + mass`.
    pub fn origin_value(&self) -> T {
        self.poly.at_origin() + self.mass
    }
}

/// Location of a symbol zero; interior locations are not supported.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroLocation {
    Origin,
    Pi,
}

impl std::fmt::Display for ZeroLocation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ZeroLocation::Origin => write!(f, "0"),
            ZeroLocation::Pi => write!(f, "pi"),
        }
    }
}

impl std::str::FromStr for ZeroLocation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "0" | "origin" | "zero" => Ok(ZeroLocation::Origin),
            "pi" | "π" => Ok(ZeroLocation::Pi),
            other => Err(Error::usage(format!(
                "unsupported zero location {other:?}; expected 0 or pi"
            ))),
        }
    }
}

/// A zero of a generating function: its location (shared by every
/// dimension in 2D) and its even order `2q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZeroInfo {
    pub location: ZeroLocation,
    pub order: u32,
}

impl ZeroInfo {
    pub fn new(location: ZeroLocation, order: u32) -> Result<Self> {
        if order == 0 || order % 2 != 0 {
            return Err(Error::usage(format!(
                "zero order must be a positive even integer, got {order}"
            )));
        }
        Ok(Self { location, order })
    }

    /// Builds a zero from a numeric location, accepting only `0` and `pi`.
    pub fn at(x: f64, order: u32) -> Result<Self> {
        let location = if x.abs() < 1e-12 {
            ZeroLocation::Origin
        } else if (x - std::f64::consts::PI).abs() < 1e-12 {
            ZeroLocation::Pi
        } else {
            return Err(Error::usage(format!(
                "zero at {x} is not supported; only 0 and pi are"
            )));
        };
        Self::new(location, order)
    }

    /// Half the order.
    pub fn q(&self) -> u32 {
        self.order / 2
    }
}

/// Where the zero of the coarse symbol sits, and with which order.
pub fn project_zero(z: ZeroInfo) -> ZeroInfo {
    match z.location {
        ZeroLocation::Origin => z,
        ZeroLocation::Pi => ZeroInfo {
            location: ZeroLocation::Origin,
            order: z.order + 2,
        },
    }
}

/// Coarse symbol of `P A P^T` for `A = C(f)` and `P = T C(p)`.
///
/// The polynomial part is the even-indexed coefficient grid of
/// `(1 + cos x) f p^2` (times `(1 + cos y)` in 2D). The zero-frequency
/// eigenvalue is `(f(0) + c_f)(p(0) + c_p)^2`; whatever the polynomial part
/// does not account for becomes the coarse mass.
pub fn galerkin_symbol<T: Scalar>(f: &Symbol<T>, p: &Symbol<T>) -> Result<Symbol<T>> {
    if f.dim() != p.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: p.dim(),
        });
    }
    if p.poly.is_zero() {
        return Err(Error::usage("projector polynomial is identically zero"));
    }
    let h = half_angle_weight(f.dim())
        .mul(&f.poly)
        .mul(&p.poly)
        .mul(&p.poly);
    let coarse = h.even_part();
    let pv = p.origin_value();
    let total = f.origin_value() * pv * pv;
    let residual = total - coarse.at_origin();
    let scale = total.abs().max(h.l1_norm());
    let mass = if residual >= T::zero() {
        residual
    } else if -residual <= T::zero_tol() * scale {
        T::zero()
    } else {
        return Err(Error::Consistency(format!(
            "negative coarse mass {residual} (scale {scale})"
        )));
    };
    Ok(Symbol { poly: coarse, mass })
}

/// One step of the cofactor recursion:
/// `psi' = 2^{-q} * even_part((1 + cos x) p psi)`.
pub fn psi_step<T: Scalar>(psi: &CosPoly<T>, q: u32, p: &CosPoly<T>) -> CosPoly<T> {
    assert!(psi.dim() == 1 && p.dim() == 1, "psi recursion is one-dimensional");
    let g = half_angle_weight(1).mul(p).mul(psi).even_part();
    g.scale(T::lit(0.5).powi(q as i32))
}

/// Which combination of the univariate factors forms a 2D projector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectorForm {
    /// `p(x) p(y)`: vanishes on the whole mirror lines.
    Product,
    /// `p(x) + p(y)`: vanishes only where both factors do.
    Sum,
}

impl ProjectorForm {
    /// Form used unless overridden: product for zeros at the origin (it
    /// vanishes at all three mirror points), sum for zeros at pi (a single
    /// zero at the origin that one Strang correction can lift).
    pub fn default_for(location: ZeroLocation) -> Self {
        match location {
            ZeroLocation::Origin => ProjectorForm::Product,
            ZeroLocation::Pi => ProjectorForm::Sum,
        }
    }
}

/// Projector symbol for a zero `z`, vanishing with order `2r` at the
/// mirror point `pi - z.location`.
///
/// For a zero at the origin `p = (2 + 2 cos x)^r`; for a zero at pi
/// `p = (2 - 2 cos x)^r`, which is singular on the grid and therefore
/// carries its own Strang mass `p(pi/m)`.
pub fn projector_poly<T: Scalar>(z: ZeroInfo, r: u32, m: usize, dim: usize) -> Result<Symbol<T>> {
    projector_poly_with(z, r, m, dim, ProjectorForm::default_for(z.location))
}

/// [`projector_poly`] with an explicit 2D combination rule.
pub fn projector_poly_with<T: Scalar>(
    z: ZeroInfo,
    r: u32,
    m: usize,
    dim: usize,
    form: ProjectorForm,
) -> Result<Symbol<T>> {
    if r < 1 {
        return Err(Error::usage("projector order r must be at least 1"));
    }
    if !(dim == 1 || dim == 2) {
        return Err(Error::usage(format!("unsupported dimension {dim}")));
    }
    let two = T::lit(2.0);
    let base = match z.location {
        ZeroLocation::Origin => CosPoly::new(vec![two, two]),
        ZeroLocation::Pi => CosPoly::new(vec![two, -two]),
    };
    let p1 = base.pow(r);
    let poly = match (dim, form) {
        (1, _) => p1,
        (_, ProjectorForm::Product) => CosPoly::tensor_product(&p1, &p1),
        (_, ProjectorForm::Sum) => CosPoly::separable_sum(&p1),
    };
    match z.location {
        ZeroLocation::Origin => Ok(Symbol::from_poly(poly)),
        ZeroLocation::Pi => {
            if dim == 2 && form == ProjectorForm::Product {
                return Err(Error::usage(
                    "a product projector for a zero at pi vanishes on whole grid lines",
                ));
            }
            let mass = strang_mass(&poly, m)?;
            Symbol::new(poly, mass)
        }
    }
}

/// `f` at the first nonzero grid frequency, `(pi/m)` or `(pi/m, 0)`.
fn strang_mass<T: Scalar>(f: &CosPoly<T>, m: usize) -> Result<T> {
    if m < 2 {
        return Err(Error::usage("Strang correction needs m >= 2"));
    }
    let x = T::PI() / T::from_usize_lossy(m);
    Ok(if f.dim() == 1 {
        f.eval1(x)
    } else {
        f.eval2(x, T::zero())
    })
}

/// Rank-one Strang correction of a symbol vanishing at the origin: the
/// mass is `f(pi/m)`.
pub fn strang_correct<T: Scalar>(f: &CosPoly<T>, m: usize) -> Result<Symbol<T>> {
    let f0 = f.at_origin();
    if f0.abs() > T::zero_tol() * f.l1_norm().max(T::one()) {
        return Err(Error::usage(format!(
            "Strang correction refused: f(0) = {f0} is not zero"
        )));
    }
    let mass = strang_mass(f, m)?;
    if !(mass > T::zero()) {
        return Err(Error::Consistency(format!(
            "Strang mass f(pi/{m}) = {mass} is not positive"
        )));
    }
    Symbol::new(f.clone(), mass)
}

/// Factors `f = (1 - cos x)^q psi` and returns the positive cofactor `psi`.
pub fn extract_psi<T: Scalar>(f: &CosPoly<T>, q: u32) -> Result<CosPoly<T>> {
    extract_psi_at(
        f,
        ZeroInfo {
            location: ZeroLocation::Origin,
            order: 2 * q,
        },
    )
}

/// Factors `f = (1 -/+ cos x)^q psi` for a zero at the origin / at pi.
///
/// Division runs on the algebraic polynomial in `t = cos x`; the remainder
/// must vanish up to rounding and `psi` must be strictly positive.
pub fn extract_psi_at<T: Scalar>(f: &CosPoly<T>, zero: ZeroInfo) -> Result<CosPoly<T>> {
    if f.dim() != 1 {
        return Err(Error::usage("cofactor extraction is one-dimensional"));
    }
    let q = zero.q();
    let root = match zero.location {
        ZeroLocation::Origin => T::one(),
        ZeroLocation::Pi => -T::one(),
    };
    let scale = f.l1_norm();
    let mut a = chebyshev_to_monomial(f.coeffs());
    for step in 0..q {
        if a.len() < 2 {
            return Err(Error::Factorization(format!(
                "degree exhausted after {step} of {q} divisions"
            )));
        }
        let (quot, rem) = synthetic_division(&a, root);
        if rem.abs() > T::division_tol() * scale {
            return Err(Error::Factorization(format!(
                "remainder {rem} after division {} of {q}: zero order is lower than {}",
                step + 1,
                zero.order
            )));
        }
        // (t - 1) = -(1 - t); (t + 1) = (1 + t)
        a = if root > T::zero() {
            quot.into_iter().map(|c| -c).collect()
        } else {
            quot
        };
    }
    let psi = CosPoly::new(monomial_to_chebyshev(&a));
    let n = PSI_POSITIVITY_SAMPLES;
    let h = T::PI() / T::from_usize_lossy(n - 1);
    let floor = T::zero_tol() * psi.l1_norm();
    for i in 0..n {
        let v = psi.eval1(T::from_usize_lossy(i) * h);
        if !(v > floor) {
            return Err(Error::Factorization(format!(
                "cofactor is not positive (value {v} at sample {i}); zero order exceeds {}",
                zero.order
            )));
        }
    }
    Ok(psi)
}

/// Divides `a(t)` (monomial coefficients, low to high) by `(t - root)`.
fn synthetic_division<T: Scalar>(a: &[T], root: T) -> (Vec<T>, T) {
    let n = a.len() - 1;
    let mut b = vec![T::zero(); n];
    b[n - 1] = a[n];
    for k in (1..n).rev() {
        b[k - 1] = a[k] + root * b[k];
    }
    let rem = a[0] + root * b[0];
    (b, rem)
}

fn chebyshev_basis<T: Scalar>(n: usize) -> Vec<Vec<T>> {
    let mut basis: Vec<Vec<T>> = Vec::with_capacity(n);
    for j in 0..n {
        let tj = match j {
            0 => vec![T::one()],
            1 => vec![T::zero(), T::one()],
            _ => {
                let mut next = vec![T::zero(); j + 1];
                for (k, &c) in basis[j - 1].iter().enumerate() {
                    next[k + 1] = next[k + 1] + T::lit(2.0) * c;
                }
                for (k, &c) in basis[j - 2].iter().enumerate() {
                    next[k] = next[k] - c;
                }
                next
            }
        };
        basis.push(tj);
    }
    basis
}

fn chebyshev_to_monomial<T: Scalar>(c: &[T]) -> Vec<T> {
    let basis = chebyshev_basis::<T>(c.len());
    let mut out = vec![T::zero(); c.len()];
    for (cj, tj) in c.iter().zip(&basis) {
        for (o, &t) in out.iter_mut().zip(tj) {
            *o = *o + *cj * t;
        }
    }
    out
}

fn monomial_to_chebyshev<T: Scalar>(a: &[T]) -> Vec<T> {
    let basis = chebyshev_basis::<T>(a.len());
    let mut rest = a.to_vec();
    let mut out = vec![T::zero(); a.len()];
    for k in (0..a.len()).rev() {
        let lead = basis[k][k];
        let c = rest[k] / lead;
        out[k] = c;
        for (r, &t) in rest.iter_mut().zip(&basis[k]) {
            *r = *r - c * t;
        }
    }
    out
}

/// `max(sup poly, poly(0) + mass)`; an upper bound for every grid eigenvalue.
pub fn sup_norm<T: Scalar>(f: &Symbol<T>) -> T {
    let (_, hi) = f.poly.extrema();
    hi.max(f.origin_value())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(c: &[f64]) -> CosPoly<f64> {
        CosPoly::new(c.to_vec())
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn eval_examples() {
        assert_eq!(p(&[2.0, -2.0]).eval(&[0.0]).unwrap(), 0.0);
        assert!((p(&[2.0, -2.0]).eval(&[PI]).unwrap() - 4.0).abs() < 1e-15);
        assert!((p(&[5.0, -4.0, -1.0]).eval(&[PI / 2.0]).unwrap() - 6.0).abs() < 1e-14);
        assert!(matches!(
            p(&[1.0]).eval(&[0.0, 0.0]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn multiply_examples() {
        assert!(close(p(&[0.0, 1.0]).mul(&p(&[0.0, 1.0])).coeffs(), &[0.5, 0.0, 0.5], 0.0));
        assert!(close(p(&[2.0, -2.0]).mul(&p(&[2.0, 2.0])).coeffs(), &[2.0, 0.0, -2.0], 0.0));
        let q = p(&[1.0, 3.0, -0.5]);
        assert_eq!(p(&[1.0]).mul(&q), q);
        let two_d = CosPoly::<f64>::one(2);
        assert!(multiply(&q, &two_d).is_err());
    }

    #[test]
    fn zero_polynomial_normalizes_to_single_coefficient() {
        let z = p(&[0.0, 0.0, 0.0]);
        assert_eq!(z.coeffs(), &[0.0]);
        assert_eq!(p(&[]).coeffs(), &[0.0]);
        assert_eq!(p(&[1.0, 2.0, 0.0]).degree(), [1, 0]);
    }

    #[test]
    fn galerkin_examples() {
        let f = Symbol::from_poly(p(&[2.0, -2.0]));
        let proj = Symbol::from_poly(p(&[2.0, 2.0]));
        let g = galerkin_symbol(&f, &proj).unwrap();
        assert!(close(g.poly.coeffs(), &[5.0, -4.0, -1.0], 1e-14));
        assert_eq!(g.mass, 0.0);

        let one = Symbol::from_poly(p(&[1.0]));
        let g = galerkin_symbol(&one, &one).unwrap();
        assert!(close(g.poly.coeffs(), &[1.0], 1e-15));
        assert_eq!(g.mass, 0.0);

        let c = 0.37;
        let f = Symbol::new(p(&[2.0, -2.0]), c).unwrap();
        let g = galerkin_symbol(&f, &proj).unwrap();
        assert!(close(g.poly.coeffs(), &[5.0, -4.0, -1.0], 1e-14));
        assert!((g.mass - 16.0 * c).abs() < 1e-12 * 16.0 * c);
    }

    #[test]
    fn galerkin_rejects_zero_projector_and_dimension_mismatch() {
        let f = Symbol::from_poly(p(&[2.0, -2.0]));
        assert!(galerkin_symbol(&f, &Symbol::from_poly(p(&[0.0]))).is_err());
        let f2 = Symbol::from_poly(CosPoly::<f64>::one(2));
        assert!(matches!(
            galerkin_symbol(&f, &f2),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn psi_step_examples() {
        let one_plus_cos = p(&[1.0, 1.0]);
        let a = psi_step(&p(&[2.0]), 1, &one_plus_cos);
        assert!(close(a.coeffs(), &[1.5, 0.5], 1e-15));
        let b = psi_step(&a, 1, &one_plus_cos);
        assert!(close(b.coeffs(), &[11.0 / 8.0, 5.0 / 8.0], 1e-15));
        let fixed = p(&[4.0 / 3.0, 2.0 / 3.0]);
        let c = psi_step(&fixed, 1, &one_plus_cos);
        assert!(close(c.coeffs(), fixed.coeffs(), 1e-15));
    }

    #[test]
    fn project_zero_examples() {
        let z = |loc, o| ZeroInfo::new(loc, o).unwrap();
        assert_eq!(project_zero(z(ZeroLocation::Origin, 2)), z(ZeroLocation::Origin, 2));
        assert_eq!(project_zero(z(ZeroLocation::Pi, 2)), z(ZeroLocation::Origin, 4));
        assert_eq!(project_zero(z(ZeroLocation::Origin, 6)), z(ZeroLocation::Origin, 6));
        assert!(ZeroInfo::at(1.0, 2).is_err());
        assert!(ZeroInfo::new(ZeroLocation::Origin, 3).is_err());
        assert!(ZeroInfo::new(ZeroLocation::Origin, 0).is_err());
        assert_eq!(ZeroInfo::at(PI, 2).unwrap().location, ZeroLocation::Pi);
        assert!("1.5".parse::<ZeroLocation>().is_err());
    }

    #[test]
    fn projector_examples() {
        let origin = ZeroInfo::new(ZeroLocation::Origin, 2).unwrap();
        let pi = ZeroInfo::new(ZeroLocation::Pi, 2).unwrap();
        let s: Symbol<f64> = projector_poly(origin, 1, 16, 1).unwrap();
        assert!(close(s.poly.coeffs(), &[2.0, 2.0], 0.0));
        assert_eq!(s.mass, 0.0);
        let s: Symbol<f64> = projector_poly(pi, 1, 16, 1).unwrap();
        assert!(close(s.poly.coeffs(), &[2.0, -2.0], 0.0));
        assert!((s.mass - (2.0 - 2.0 * (PI / 16.0).cos())).abs() < 1e-15);
        let s: Symbol<f64> = projector_poly(origin, 2, 16, 1).unwrap();
        assert!(close(s.poly.coeffs(), &[6.0, 8.0, 2.0], 1e-15));
        assert!(projector_poly::<f64>(origin, 0, 16, 1).is_err());
    }

    #[test]
    fn projector_2d_forms() {
        let origin = ZeroInfo::new(ZeroLocation::Origin, 2).unwrap();
        let pi = ZeroInfo::new(ZeroLocation::Pi, 2).unwrap();
        let prod: Symbol<f64> = projector_poly(origin, 1, 16, 2).unwrap();
        assert_eq!(prod.poly.to_rows(), vec![vec![4.0, 4.0], vec![4.0, 4.0]]);
        let sum: Symbol<f64> = projector_poly(pi, 1, 16, 2).unwrap();
        assert_eq!(sum.poly.to_rows(), vec![vec![4.0, -2.0], vec![-2.0, 0.0]]);
        assert!((sum.mass - (2.0 - 2.0 * (PI / 16.0).cos())).abs() < 1e-15);
        assert!(projector_poly_with::<f64>(pi, 1, 16, 2, ProjectorForm::Product).is_err());
    }

    #[test]
    fn strang_examples() {
        let s = strang_correct(&p(&[2.0, -2.0]), 4).unwrap();
        assert!((s.mass - 0.585_786_437_626_905).abs() < 1e-12);
        let s = strang_correct(&p(&[2.0, -2.0]), 512).unwrap();
        assert_eq!(s.mass, 2.0 - 2.0 * (PI / 512.0).cos());
        let s = strang_correct(&p(&[6.0, -8.0, 2.0]), 8).unwrap();
        let expect = (2.0 - 2.0 * (PI / 8.0).cos()).powi(2);
        assert!((s.mass - expect).abs() < 1e-14);
        assert!(strang_correct(&p(&[2.0, 2.0]), 8).is_err());
    }

    #[test]
    fn extract_psi_examples() {
        assert!(close(extract_psi(&p(&[2.0, -2.0]), 1).unwrap().coeffs(), &[2.0], 1e-14));
        assert!(close(
            extract_psi(&p(&[5.0, -4.0, -1.0]), 1).unwrap().coeffs(),
            &[6.0, 2.0],
            1e-13
        ));
        assert!(close(extract_psi(&p(&[6.0, -8.0, 2.0]), 2).unwrap().coeffs(), &[4.0], 1e-13));
        let at_pi = ZeroInfo::new(ZeroLocation::Pi, 2).unwrap();
        assert!(close(extract_psi_at(&p(&[2.0, 2.0]), at_pi).unwrap().coeffs(), &[2.0], 1e-14));
    }

    #[test]
    fn extract_psi_detects_wrong_order() {
        // order 4 declared as order 2: cofactor vanishes at the origin
        assert!(matches!(
            extract_psi(&p(&[6.0, -8.0, 2.0]), 1),
            Err(Error::Factorization(_))
        ));
        // order 2 declared as order 4: nonzero remainder
        assert!(matches!(
            extract_psi(&p(&[2.0, -2.0]), 2),
            Err(Error::Factorization(_))
        ));
        // no zero at all
        assert!(extract_psi(&p(&[3.0, 1.0]), 1).is_err());
    }

    #[test]
    fn sup_norm_examples() {
        assert!((sup_norm(&Symbol::from_poly(p(&[2.0, -2.0]))) - 4.0).abs() < 1e-12);
        assert!((sup_norm(&Symbol::from_poly(p(&[5.0, -4.0, -1.0]))) - 8.0).abs() < 1e-12);
        assert_eq!(sup_norm(&Symbol::new(p(&[2.0, -2.0]), 10.0).unwrap()), 10.0);
    }

    #[test]
    fn sup_norm_2d_interior_maximum() {
        // max of sin^2 x sin^2 y is 1 at (pi/2, pi/2), off the coarse sample grid
        let s2 = p(&[0.5, 0.0, -0.5]);
        let f = CosPoly::tensor_product(&s2, &s2);
        let (lo, hi) = f.extrema();
        assert!((hi - 1.0).abs() < 1e-9, "hi = {hi}");
        assert!(lo.abs() < 1e-12);
    }

    #[test]
    fn tensor_and_sum_evaluate_pointwise() {
        let a = p(&[1.0, 2.0, 0.5]);
        let b = p(&[0.0, -1.0]);
        let t = CosPoly::tensor_product(&a, &b);
        let s = CosPoly::separable_sum(&a);
        for &(x, y) in &[(0.3, 1.1), (2.0, 0.0), (PI, 0.7)] {
            assert!((t.eval2(x, y) - a.eval1(x) * b.eval1(y)).abs() < 1e-13);
            assert!((s.eval2(x, y) - a.eval1(x) - a.eval1(y)).abs() < 1e-13);
        }
    }

    #[test]
    fn works_in_single_precision() {
        let f = Symbol::from_poly(CosPoly::new(vec![2.0f32, -2.0]));
        let proj = Symbol::from_poly(CosPoly::new(vec![2.0f32, 2.0]));
        let g = galerkin_symbol(&f, &proj).unwrap();
        assert_eq!(g.poly.coeffs(), &[5.0f32, -4.0, -1.0]);
        let psi = extract_psi(&g.poly, 1).unwrap();
        assert!((psi.coeffs()[0] - 6.0).abs() < 1e-4);
    }
}
