//! Level operators `A = C_m(f)` of the DCT-III algebra.
//!
//! A 1D operator is a symmetric band matrix of Toeplitz-plus-Hankel type.
//! Writing `f = a_0 + 2 sum_j a_j cos(jx)`, the 1-based entries are
//!
//! ```text
//! C[i, l] = a_{|i-l|} + a_{i+l-1} + a_{2m-i-l+1}
//! ```
//!
//! A 2D symbol `sum c_{j1,j2} cos(j1 x) cos(j2 y)` is regrouped as
//! `sum_j1 cos(j1 x) g_j1(y)` and applied as the Kronecker sum
//! `sum_j1 C(cos(j1 .)) (x) C(g_j1)` on row-major data (x is the slow index).
//! The point mass enters as the rank-one term `mass * e e^T / n`.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::symbol::{CosPoly, Symbol};
use crate::transform::{dct3_apply, dct3_apply_transpose, FrequencyGrid, TensorDct3};

/// Default cap on the number of unknowns of a dense materialization.
pub const DENSE_CAP: usize = 4096;

/// Band storage of a 1D algebra matrix: row `i` holds columns
/// `i-k ..= i+k`, entries outside `0..m` are stored as zero.
#[derive(Clone, Debug, PartialEq)]
pub struct Banded<T> {
    m: usize,
    k: usize,
    entries: Vec<T>,
}

impl<T: Scalar> Banded<T> {
    /// Builds `C_m(f)` for the 1D cosine coefficients `c` (trailing zeros
    /// allowed). Requires `deg f < m`.
    pub fn from_cosine(m: usize, c: &[T]) -> Result<Self> {
        let k = c
            .iter()
            .rposition(|x| !x.is_zero())
            .unwrap_or(0);
        if m == 0 || k >= m {
            return Err(Error::usage(format!(
                "symbol degree {k} must be below the matrix size {m}"
            )));
        }
        let half = T::lit(0.5);
        let a = |t: usize| -> T {
            match t {
                0 => c[0],
                t if t <= k => c[t] * half,
                _ => T::zero(),
            }
        };
        let w = 2 * k + 1;
        let mut entries = vec![T::zero(); m * w];
        for i in 0..m {
            let lo = i.saturating_sub(k);
            let hi = (i + k).min(m - 1);
            for l in lo..=hi {
                // 0-based form of the 1-based entry formula
                let v = a(i.abs_diff(l)) + a(i + l + 1) + a(2 * m - i - l - 1);
                entries[i * w + (l + k - i)] = v;
            }
        }
        Ok(Self { m, k, entries })
    }

    pub fn size(&self) -> usize {
        self.m
    }

    /// Half bandwidth `k`; the full bandwidth is `2k + 1`.
    pub fn half_bandwidth(&self) -> usize {
        self.k
    }

    pub fn get(&self, i: usize, l: usize) -> T {
        if i.abs_diff(l) > self.k {
            return T::zero();
        }
        self.entries[i * (2 * self.k + 1) + (l + self.k - i)]
    }

    fn row_range(&self, i: usize) -> (usize, usize) {
        (i.saturating_sub(self.k), (i + self.k).min(self.m - 1))
    }

    /// `out = C v` for one contiguous vector.
    pub fn apply(&self, v: &[T], out: &mut [T]) {
        let w = 2 * self.k + 1;
        for (i, o) in out.iter_mut().enumerate().take(self.m) {
            let (lo, hi) = self.row_range(i);
            let row = &self.entries[i * w + (lo + self.k - i)..i * w + (hi + self.k - i) + 1];
            *o = row.iter().zip(&v[lo..=hi]).map(|(&a, &b)| a * b).sum();
        }
    }

    /// `out += C V` where `V` and `out` are row-major with `stride` columns
    /// and `C` acts on the row index.
    fn accumulate_rows(&self, v: &[T], stride: usize, out: &mut [T]) {
        let w = 2 * self.k + 1;
        for i in 0..self.m {
            let (lo, hi) = self.row_range(i);
            let out_row = &mut out[i * stride..(i + 1) * stride];
            for l in lo..=hi {
                let a = self.entries[i * w + (l + self.k - i)];
                if a.is_zero() {
                    continue;
                }
                for (o, &x) in out_row.iter_mut().zip(&v[l * stride..(l + 1) * stride]) {
                    *o = *o + a * x;
                }
            }
        }
    }

    /// Number of stored in-range entries, i.e. multiply-adds per product.
    pub fn nnz(&self) -> usize {
        (0..self.m)
            .map(|i| {
                let (lo, hi) = self.row_range(i);
                hi - lo + 1
            })
            .sum()
    }

    pub fn to_dense(&self) -> DenseMatrix<T> {
        let mut d = DenseMatrix::zeros(self.m, self.m);
        for i in 0..self.m {
            let (lo, hi) = self.row_range(i);
            for l in lo..=hi {
                d[(i, l)] = self.get(i, l);
            }
        }
        d
    }
}

/// One separable piece `C(cos(j1 x)) (x) C(g_j1(y))` of a 2D operator.
#[derive(Clone, Debug, PartialEq)]
struct Term<T> {
    x: Banded<T>,
    y: Banded<T>,
}

/// `C_m(f) + mass * e e^T / n` in one or two dimensions (square grids).
#[derive(Clone, Debug, PartialEq)]
pub struct Dct3Operator<T> {
    m: usize,
    dim: usize,
    symbol: Symbol<T>,
    band: Option<Banded<T>>,
    terms: Vec<Term<T>>,
}

impl<T: Scalar> Dct3Operator<T> {
    /// `m` is the size per dimension.
    pub fn from_symbol(m: usize, symbol: Symbol<T>) -> Result<Self> {
        if m < 2 {
            return Err(Error::usage(format!("operator size must be at least 2, got {m}")));
        }
        let deg = symbol.poly.degree();
        match symbol.dim() {
            1 => {
                let band = Banded::from_cosine(m, symbol.poly.coeffs())?;
                Ok(Self {
                    m,
                    dim: 1,
                    symbol,
                    band: Some(band),
                    terms: Vec::new(),
                })
            }
            2 => {
                if deg[0] >= m || deg[1] >= m {
                    return Err(Error::usage(format!(
                        "symbol degree {deg:?} must be below the grid size {m}"
                    )));
                }
                let rows = symbol.poly.to_rows();
                let mut terms = Vec::new();
                for (j1, g) in rows.iter().enumerate() {
                    if g.iter().all(|c| c.is_zero()) {
                        continue;
                    }
                    let mut unit = vec![T::zero(); j1 + 1];
                    unit[j1] = T::one();
                    terms.push(Term {
                        x: Banded::from_cosine(m, &unit)?,
                        y: Banded::from_cosine(m, g)?,
                    });
                }
                Ok(Self {
                    m,
                    dim: 2,
                    symbol,
                    band: None,
                    terms,
                })
            }
            d => Err(Error::usage(format!("unsupported dimension {d}"))),
        }
    }

    /// Size per dimension.
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Number of unknowns, `m^dim`.
    pub fn len(&self) -> usize {
        self.m.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn symbol(&self) -> &Symbol<T> {
        &self.symbol
    }

    pub fn mass(&self) -> T {
        self.symbol.mass
    }

    /// Bandwidth `2k + 1` per dimension.
    pub fn bandwidth(&self) -> Vec<usize> {
        self.symbol
            .poly
            .degree()
            .iter()
            .take(self.dim)
            .map(|k| 2 * k + 1)
            .collect()
    }

    fn check_len(&self, found: usize) -> Result<()> {
        if found != self.len() {
            return Err(Error::SizeMismatch {
                expected: self.len(),
                found,
            });
        }
        Ok(())
    }

    /// `out = A v` without allocating; lengths are debug-checked only.
    pub fn matvec_into(&self, v: &[T], out: &mut [T], scratch: &mut Vec<T>) {
        let n = self.len();
        debug_assert_eq!(v.len(), n);
        debug_assert_eq!(out.len(), n);
        match &self.band {
            Some(b) => b.apply(v, out),
            None => {
                out.iter_mut().for_each(|o| *o = T::zero());
                scratch.resize(n, T::zero());
                let m = self.m;
                for term in &self.terms {
                    for r in 0..m {
                        term.y.apply(&v[r * m..(r + 1) * m], &mut scratch[r * m..(r + 1) * m]);
                    }
                    term.x.accumulate_rows(scratch, m, out);
                }
            }
        }
        let mass = self.symbol.mass;
        if !mass.is_zero() {
            let shift = mass * v.iter().copied().sum::<T>() / T::from_usize_lossy(n);
            out.iter_mut().for_each(|o| *o = *o + shift);
        }
    }

    pub fn matvec(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_len(v.len())?;
        let mut out = vec![T::zero(); v.len()];
        self.matvec_into(v, &mut out, &mut Vec::new());
        Ok(out)
    }

    /// Multiply-adds performed by one [`matvec`](Self::matvec).
    pub fn matvec_flops(&self) -> usize {
        let mass = if self.symbol.mass.is_zero() { 0 } else { 2 * self.len() };
        let band = match &self.band {
            Some(b) => b.nnz(),
            None => self
                .terms
                .iter()
                .map(|t| self.m * t.y.nnz() + self.m * t.x.nnz())
                .sum(),
        };
        band + mass
    }

    /// Eigenvalues in transform order: `f(x_j) + mass [j = 0]` in 1D and the
    /// row-major tensor grid `f(x_a, x_b)` in 2D.
    pub fn eigenvalues(&self) -> Vec<T> {
        let grid = FrequencyGrid::<T>::new(self.m);
        let pts = grid.points();
        let mut out: Vec<T> = match self.dim {
            1 => pts.iter().map(|&x| self.symbol.poly.eval1(x)).collect(),
            _ => pts
                .iter()
                .flat_map(|&x| pts.iter().map(move |&y| (x, y)))
                .map(|(x, y)| self.symbol.poly.eval2(x, y))
                .collect(),
        };
        out[0] = out[0] + self.symbol.mass;
        out
    }

    /// `Q diag(lambda) Q^T v` through the transform; an oracle for
    /// [`matvec`](Self::matvec).
    pub fn matvec_spectral(&self, v: &[T]) -> Result<Vec<T>> {
        self.check_len(v.len())?;
        let lambda = self.eigenvalues();
        if self.dim == 1 {
            let mut w = dct3_apply_transpose(self.m, v)?;
            w.iter_mut().zip(&lambda).for_each(|(x, &l)| *x = *x * l);
            dct3_apply(self.m, &w)
        } else {
            let t = TensorDct3::new(self.m, self.m);
            let mut w = v.to_vec();
            t.apply_in_place(&mut w, true);
            w.iter_mut().zip(&lambda).for_each(|(x, &l)| *x = *x * l);
            t.apply_in_place(&mut w, false);
            Ok(w)
        }
    }

    /// Full matrix, refused above `cap` unknowns.
    pub fn materialize_dense(&self, cap: usize) -> Result<DenseMatrix<T>> {
        let n = self.len();
        if n > cap {
            return Err(Error::DenseCap { requested: n, cap });
        }
        let mut d = match &self.band {
            Some(b) => b.to_dense(),
            None => {
                let m = self.m;
                let mut d = DenseMatrix::zeros(n, n);
                for term in &self.terms {
                    let (ax, by) = (term.x.to_dense(), term.y.to_dense());
                    for a in 0..m {
                        for b in 0..m {
                            let s = ax[(a, b)];
                            if s.is_zero() {
                                continue;
                            }
                            for c in 0..m {
                                for e in 0..m {
                                    d[(a * m + c, b * m + e)] = d[(a * m + c, b * m + e)] + s * by[(c, e)];
                                }
                            }
                        }
                    }
                }
                d
            }
        };
        let w = self.symbol.mass / T::from_usize_lossy(n);
        if !w.is_zero() {
            for i in 0..n {
                for j in 0..n {
                    d[(i, j)] = d[(i, j)] + w;
                }
            }
        }
        Ok(d)
    }
}

/// Exact solver `A^{-1} b = Q diag(1/lambda) Q^T b` using the fast transform.
#[derive(Clone, Debug)]
pub struct SpectralSolver<T: Scalar> {
    dim: usize,
    transform: TensorDct3<T>,
    inverse: Vec<T>,
}

impl<T: Scalar> SpectralSolver<T> {
    pub fn new(a: &Dct3Operator<T>) -> Result<Self> {
        let lambda = a.eigenvalues();
        if let Some((j, &l)) = lambda.iter().enumerate().find(|(_, &l)| !(l > T::zero()))
        {
            return Err(Error::NotPositiveDefinite {
                row: j,
                pivot: l.to_f64_lossy(),
            });
        }
        let (m1, m2) = if a.dim() == 1 { (1, a.m()) } else { (a.m(), a.m()) };
        Ok(Self {
            dim: a.dim(),
            transform: TensorDct3::new(m1, m2),
            inverse: lambda.iter().map(|&l| T::one() / l).collect(),
        })
    }

    /// `b <- A^{-1} b`. A 1D problem is the `1 x m` tensor case.
    pub fn solve_in_place(&self, b: &mut [T]) {
        self.transform.apply_in_place(b, true);
        b.iter_mut().zip(&self.inverse).for_each(|(x, &s)| *x = *x * s);
        self.transform.apply_in_place(b, false);
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// The identity operator of size `m` in `dim` dimensions.
pub fn identity<T: Scalar>(m: usize, dim: usize) -> Result<Dct3Operator<T>> {
    Dct3Operator::from_symbol(m, Symbol::from_poly(CosPoly::constant(dim, T::one())))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn op(m: usize, c: &[f64], mass: f64) -> Dct3Operator<f64> {
        Dct3Operator::from_symbol(m, Symbol::new(CosPoly::new(c.to_vec()), mass).unwrap()).unwrap()
    }

    fn dense_rows(a: &Dct3Operator<f64>) -> Vec<Vec<f64>> {
        let d = a.materialize_dense(DENSE_CAP).unwrap();
        (0..d.rows()).map(|i| d.row(i).to_vec()).collect()
    }

    fn assert_rows(got: Vec<Vec<f64>>, want: &[&[f64]]) {
        for (g, w) in got.iter().zip(want) {
            for (x, y) in g.iter().zip(w.iter()) {
                assert!((x - y).abs() < 1e-14, "{got:?}");
            }
        }
    }

    #[test]
    fn small_neumann_matrices() {
        assert_rows(dense_rows(&op(2, &[2.0, -2.0], 0.0)), &[&[1.0, -1.0], &[-1.0, 1.0]]);
        assert_rows(
            dense_rows(&op(3, &[2.0, -2.0], 0.0)),
            &[&[1.0, -1.0, 0.0], &[-1.0, 2.0, -1.0], &[0.0, -1.0, 1.0]],
        );
        assert_rows(
            dense_rows(&op(3, &[1.0], 0.0)),
            &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0]],
        );
        let ev = op(3, &[2.0, -2.0], 0.0).eigenvalues();
        for (x, y) in ev.iter().zip([0.0, 1.0, 3.0]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn degree_must_be_below_size() {
        let s = Symbol::from_poly(CosPoly::new(vec![1.0, 0.0, 1.0]));
        assert!(matches!(Dct3Operator::from_symbol(2, s), Err(Error::Usage(_))));
    }

    #[test]
    fn matvec_examples() {
        let a = op(3, &[2.0, -2.0], 0.0);
        assert!(a.matvec(&[1.0; 3]).unwrap().iter().all(|x| x.abs() < 1e-15));
        let b = op(2, &[2.0, -2.0], 1.0);
        let y = b.matvec(&[1.0, 0.0]).unwrap();
        assert!((y[0] - 1.5).abs() < 1e-15 && (y[1] + 0.5).abs() < 1e-15);
        let id = identity::<f64>(5, 1).unwrap();
        assert_eq!(id.matvec(&[1.0, 2.0, 3.0, 4.0, 5.0]).unwrap(), vec![1.0, 2.0, 3.0, 4.0, 5.0]);
        assert!(a.matvec(&[1.0; 4]).is_err());
    }

    #[test]
    fn eigenvalue_examples() {
        let ev = op(4, &[2.0, -2.0], 0.0).eigenvalues();
        let r2 = 2f64.sqrt();
        for (x, y) in ev.iter().zip([0.0, 2.0 - r2, 2.0, 2.0 + r2]) {
            assert!((x - y).abs() < 1e-14);
        }
        let ev = op(4, &[2.0, -2.0], 0.7).eigenvalues();
        assert!((ev[0] - 0.7).abs() < 1e-15 && (ev[2] - 2.0).abs() < 1e-14);
    }

    #[test]
    fn spectral_and_banded_agree() {
        let a = op(16, &[3.0, -1.0, 0.5, 0.25], 0.3);
        let v: Vec<f64> = (0..16).map(|i| ((i * 7) % 5) as f64 - 1.7).collect();
        let x = a.matvec(&v).unwrap();
        let y = a.matvec_spectral(&v).unwrap();
        for (p, q) in x.iter().zip(&y) {
            assert!((p - q).abs() < 1e-12);
        }
        let e = a.matvec_spectral(&[1.0; 16]).unwrap();
        let expect = 3.0 - 1.0 + 0.5 + 0.25 + 0.3;
        assert!(e.iter().all(|x| (x - expect).abs() < 1e-12));
    }

    #[test]
    fn two_dimensional_matches_spectral_and_dense() {
        let poly = CosPoly::from_rows(vec![vec![4.0, -1.0, 0.3], vec![-1.0, 0.2, 0.0]]).unwrap();
        let a = Dct3Operator::from_symbol(6, Symbol::new(poly, 0.4).unwrap()).unwrap();
        let v: Vec<f64> = (0..36).map(|i| ((i * 11) % 7) as f64 * 0.3 - 1.0).collect();
        let x = a.matvec(&v).unwrap();
        let y = a.matvec_spectral(&v).unwrap();
        let z = a.materialize_dense(DENSE_CAP).unwrap().matvec(&v);
        for i in 0..36 {
            assert!((x[i] - y[i]).abs() < 1e-12);
            assert!((x[i] - z[i]).abs() < 1e-12);
        }
    }

    #[test]
    fn spectral_solver_inverts() {
        for (m, dim) in [(16usize, 1usize), (8, 2)] {
            let poly = if dim == 1 {
                CosPoly::new(vec![2.0, -2.0])
            } else {
                CosPoly::from_rows(vec![vec![4.0, -2.0], vec![-2.0, 0.0]]).unwrap()
            };
            let a = Dct3Operator::from_symbol(m, Symbol::new(poly, 0.1).unwrap()).unwrap();
            let s = SpectralSolver::new(&a).unwrap();
            let n = a.len();
            let b: Vec<f64> = (0..n).map(|i| (i as f64).sin()).collect();
            let mut x = b.clone();
            s.solve_in_place(&mut x);
            let r = a.matvec(&x).unwrap();
            for (p, q) in r.iter().zip(&b) {
                assert!((p - q).abs() < 1e-10);
            }
        }
        assert!(SpectralSolver::new(&op(8, &[2.0, -2.0], 0.0)).is_err());
    }

    #[test]
    fn dense_cap_enforced() {
        assert!(matches!(
            op(64, &[1.0], 0.0).materialize_dense(32),
            Err(Error::DenseCap { requested: 64, cap: 32 })
        ));
    }

    #[test]
    fn flops_linear_in_size() {
        let f1 = op(256, &[2.0, -2.0], 0.1).matvec_flops();
        let f2 = op(512, &[2.0, -2.0], 0.1).matvec_flops();
        assert!((f2 as f64 / f1 as f64 - 2.0).abs() < 0.01);
    }
}
