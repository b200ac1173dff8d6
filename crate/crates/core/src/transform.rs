//! The orthogonal DCT-III eigenvector basis `Q_m` of the cosine algebra.
//!
//! Column `j` (0-based) of `Q_m` is the unit eigenvector for frequency
//! `x_j = j pi / m`:
//!
//! ```text
//! Q[i, j] = sqrt((2 - delta_{j,0}) / m) * cos(j (i + 1/2) pi / m)
//! ```
//!
//! so `Q_m` applied to a vector is a scaled DCT-III and `Q_m^T` a scaled
//! DCT-II. Column 0 is `e / sqrt(m)`.

use std::sync::Arc;

use rustdct::{DctPlanner, TransformType2And3};

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Grid frequencies `x_j = j pi / m`, `j = 0..m`.
#[derive(Clone, Debug, PartialEq)]
pub struct FrequencyGrid<T> {
    m: usize,
    points: Vec<T>,
}

impl<T: Scalar> FrequencyGrid<T> {
    pub fn new(m: usize) -> Self {
        let h = T::PI() / T::from_usize_lossy(m);
        Self {
            m,
            points: (0..m).map(|j| T::from_usize_lossy(j) * h).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }
}

/// Normalization of column `j`.
fn column_scale<T: Scalar>(m: usize, j: usize) -> T {
    let mm = T::from_usize_lossy(m);
    if j == 0 {
        (T::one() / mm).sqrt()
    } else {
        (T::lit(2.0) / mm).sqrt()
    }
}

/// Entry `Q[i, j]`, with the angle reduced exactly in integer arithmetic.
pub fn dct3_entry<T: Scalar>(m: usize, i: usize, j: usize) -> T {
    // angle = j (2i + 1) pi / (2m), reduced modulo 2 pi = 4m units
    let units = (j * (2 * i + 1)) % (4 * m);
    let angle = T::PI() * T::from_usize_lossy(units) / T::from_usize_lossy(2 * m);
    column_scale::<T>(m, j) * angle.cos()
}

/// Dense `Q_m`.
pub fn dct3_matrix<T: Scalar>(m: usize) -> DenseMatrix<T> {
    let mut q = DenseMatrix::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            q[(i, j)] = dct3_entry(m, i, j);
        }
    }
    q
}

/// `Q_m v` by the dense `O(m^2)` definition.
pub fn dct3_apply<T: Scalar>(m: usize, v: &[T]) -> Result<Vec<T>> {
    check_len(m, v.len())?;
    Ok((0..m)
        .map(|i| (0..m).map(|j| dct3_entry::<T>(m, i, j) * v[j]).sum())
        .collect())
}

/// `Q_m^T v` by the dense `O(m^2)` definition.
pub fn dct3_apply_transpose<T: Scalar>(m: usize, v: &[T]) -> Result<Vec<T>> {
    check_len(m, v.len())?;
    Ok((0..m)
        .map(|j| (0..m).map(|i| dct3_entry::<T>(m, i, j) * v[i]).sum())
        .collect())
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(Error::SizeMismatch { expected, found });
    }
    Ok(())
}

/// Planned fast transform for one size (`O(m log m)` per application).
#[derive(Clone)]
pub struct Dct3<T: Scalar> {
    m: usize,
    plan: Arc<dyn TransformType2And3<T>>,
    scales: Vec<T>,
}

impl<T: Scalar> std::fmt::Debug for Dct3<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dct3").field("m", &self.m).finish()
    }
}

impl<T: Scalar> Dct3<T> {
    pub fn new(m: usize) -> Self {
        let mut planner = DctPlanner::new();
        let plan = planner.plan_dct2(m);
        let scales = (0..m).map(|j| column_scale(m, j)).collect();
        Self { m, plan, scales }
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// In place `buf <- Q_m buf`.
    pub fn apply_in_place(&self, buf: &mut [T]) {
        debug_assert_eq!(buf.len(), self.m);
        // the unnormalized DCT-III halves the constant term
        buf[0] = buf[0] * self.scales[0] * T::lit(2.0);
        for (b, &s) in buf.iter_mut().zip(&self.scales).skip(1) {
            *b = *b * s;
        }
        self.plan.process_dct3(buf);
    }

    /// In place `buf <- Q_m^T buf`.
    pub fn apply_transpose_in_place(&self, buf: &mut [T]) {
        debug_assert_eq!(buf.len(), self.m);
        self.plan.process_dct2(buf);
        for (b, &s) in buf.iter_mut().zip(&self.scales) {
            *b = *b * s;
        }
    }

    pub fn apply(&self, v: &[T]) -> Result<Vec<T>> {
        check_len(self.m, v.len())?;
        let mut out = v.to_vec();
        self.apply_in_place(&mut out);
        Ok(out)
    }

    pub fn apply_transpose(&self, v: &[T]) -> Result<Vec<T>> {
        check_len(self.m, v.len())?;
        let mut out = v.to_vec();
        self.apply_transpose_in_place(&mut out);
        Ok(out)
    }
}

/// `Q_{m1} (x) Q_{m2}` acting on row-major `m1 x m2` data.
#[derive(Clone, Debug)]
pub struct TensorDct3<T: Scalar> {
    rows: Dct3<T>,
    cols: Dct3<T>,
}

impl<T: Scalar> TensorDct3<T> {
    pub fn new(m1: usize, m2: usize) -> Self {
        Self {
            rows: Dct3::new(m1),
            cols: Dct3::new(m2),
        }
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.rows.len(), self.cols.len())
    }

    /// `V <- Q_{m1} V Q_{m2}^T` (or the transposed action) in place.
    pub fn apply_in_place(&self, v: &mut [T], transpose: bool) {
        let (m1, m2) = self.sizes();
        debug_assert_eq!(v.len(), m1 * m2);
        for row in v.chunks_mut(m2) {
            if transpose {
                self.cols.apply_transpose_in_place(row);
            } else {
                self.cols.apply_in_place(row);
            }
        }
        let mut column = vec![T::zero(); m1];
        for c in 0..m2 {
            for (r, slot) in column.iter_mut().enumerate() {
                *slot = v[r * m2 + c];
            }
            if transpose {
                self.rows.apply_transpose_in_place(&mut column);
            } else {
                self.rows.apply_in_place(&mut column);
            }
            for (r, &x) in column.iter().enumerate() {
                v[r * m2 + c] = x;
            }
        }
    }
}

/// Applies `Q_{m1}` along columns and `Q_{m2}` along rows of a row-major
/// `m1 x m2` array (`Q_{m1}^T`, `Q_{m2}^T` when `transpose`).
pub fn tensor_apply<T: Scalar>(m1: usize, m2: usize, v: &[T], transpose: bool) -> Result<Vec<T>> {
    check_len(m1 * m2, v.len())?;
    let mut out = v.to_vec();
    TensorDct3::new(m1, m2).apply_in_place(&mut out, transpose);
    Ok(out)
}
