//! Cutting operator, projectors `P = T C(p)` and symbolic coarse operators.

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::operator::Dct3Operator;
use crate::scalar::Scalar;
use crate::symbol::{galerkin_symbol, Symbol};

fn even_size(n: usize) -> Result<()> {
    if n == 0 || n % 2 != 0 {
        return Err(Error::usage(format!("cutting needs an even size, got {n}")));
    }
    Ok(())
}

/// `(T v)_i = (v_{2i} + v_{2i+1}) / sqrt(2)` in 1D; in 2D the tensor
/// action `T (x) T` averages each `2 x 2` block with weight `1/2`.
pub fn cut<T: Scalar>(v: &[T], m: usize, dim: usize) -> Result<Vec<T>> {
    even_size(m)?;
    check(v.len(), m.pow(dim as u32))?;
    let mut out = vec![T::zero(); (m / 2).pow(dim as u32)];
    cut_into(v, m, dim, &mut out);
    Ok(out)
}

/// `T^T w`: scatters each coarse value onto its fine pair (block).
pub fn cut_transpose<T: Scalar>(w: &[T], m: usize, dim: usize) -> Result<Vec<T>> {
    even_size(m)?;
    check(w.len(), (m / 2).pow(dim as u32))?;
    let mut out = vec![T::zero(); m.pow(dim as u32)];
    cut_transpose_into(w, m, dim, &mut out);
    Ok(out)
}

fn check(found: usize, expected: usize) -> Result<()> {
    if found != expected {
        return Err(Error::SizeMismatch { expected, found });
    }
    Ok(())
}

pub(crate) fn cut_into<T: Scalar>(v: &[T], m: usize, dim: usize, out: &mut [T]) {
    let h = m / 2;
    if dim == 1 {
        let w = T::FRAC_1_SQRT_2();
        for (i, o) in out.iter_mut().enumerate() {
            *o = (v[2 * i] + v[2 * i + 1]) * w;
        }
    } else {
        let w = T::lit(0.5);
        for i in 0..h {
            let (r0, r1) = (&v[2 * i * m..(2 * i + 1) * m], &v[(2 * i + 1) * m..(2 * i + 2) * m]);
            for j in 0..h {
                out[i * h + j] = (r0[2 * j] + r0[2 * j + 1] + r1[2 * j] + r1[2 * j + 1]) * w;
            }
        }
    }
}

pub(crate) fn cut_transpose_into<T: Scalar>(w: &[T], m: usize, dim: usize, out: &mut [T]) {
    let h = m / 2;
    if dim == 1 {
        let s = T::FRAC_1_SQRT_2();
        for (i, &x) in w.iter().enumerate() {
            out[2 * i] = x * s;
            out[2 * i + 1] = x * s;
        }
    } else {
        let s = T::lit(0.5);
        for i in 0..h {
            for j in 0..h {
                let x = w[i * h + j] * s;
                for r in [2 * i, 2 * i + 1] {
                    out[r * m + 2 * j] = x;
                    out[r * m + 2 * j + 1] = x;
                }
            }
        }
    }
}

/// Dense cutting matrix of size `(m/2)^dim x m^dim`.
pub fn cut_matrix<T: Scalar>(m: usize, dim: usize) -> Result<DenseMatrix<T>> {
    even_size(m)?;
    let n = m.pow(dim as u32);
    let cols: Vec<Vec<T>> = (0..n)
        .map(|j| {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            cut(&e, m, dim)
        })
        .collect::<Result<_>>()?;
    Ok(DenseMatrix::from_columns((m / 2).pow(dim as u32), &cols))
}

/// Restriction `P = T C_m(p)` from size `m` to `m/2` (per dimension).
#[derive(Clone, Debug)]
pub struct Projector<T> {
    m: usize,
    p: Symbol<T>,
    cp: Dct3Operator<T>,
}

impl<T: Scalar> Projector<T> {
    /// Builds the projector and checks that it has full rank, i.e. that
    /// `p` does not vanish on both members of any aliased frequency pair.
    pub fn new(m: usize, p: Symbol<T>) -> Result<Self> {
        even_size(m)?;
        let cp = Dct3Operator::from_symbol(m, p.clone())?;
        let lambda = cp.eigenvalues();
        let scale = lambda.iter().fold(T::zero(), |s, &l| s.max(l.abs()));
        let tol = T::zero_tol() * scale;
        let h = m / 2;
        // fine frequency j (< m/2) aliases with m - j; coarse 0 sees only fine 0
        let partners = |k: usize| -> Vec<usize> {
            if k == 0 {
                vec![0]
            } else {
                vec![k, m - k]
            }
        };
        let ok = match p.dim() {
            1 => (0..h).all(|k| partners(k).iter().any(|&j| lambda[j].abs() > tol)),
            _ => (0..h).all(|k1| {
                (0..h).all(|k2| {
                    partners(k1)
                        .iter()
                        .any(|&a| partners(k2).iter().any(|&b| lambda[a * m + b].abs() > tol))
                })
            }),
        };
        if !ok {
            return Err(Error::usage(
                "projector is rank deficient: p vanishes on an aliased frequency pair",
            ));
        }
        Ok(Self { m, p, cp })
    }

    pub fn fine_size(&self) -> usize {
        self.m
    }

    pub fn coarse_size(&self) -> usize {
        self.m / 2
    }

    pub fn dim(&self) -> usize {
        self.p.dim()
    }

    pub fn symbol(&self) -> &Symbol<T> {
        &self.p
    }

    pub fn operator(&self) -> &Dct3Operator<T> {
        &self.cp
    }

    /// `P v = T C(p) v`.
    pub fn restrict(&self, v: &[T]) -> Result<Vec<T>> {
        let mut out = vec![T::zero(); self.cp.len() >> self.dim()];
        let mut fine = vec![T::zero(); self.cp.len()];
        check(v.len(), self.cp.len())?;
        self.restrict_into(v, &mut out, &mut fine, &mut Vec::new());
        Ok(out)
    }

    /// `P^T w = C(p) T^T w`.
    pub fn prolong(&self, w: &[T]) -> Result<Vec<T>> {
        check(w.len(), self.cp.len() >> self.dim())?;
        let mut out = vec![T::zero(); self.cp.len()];
        let mut fine = vec![T::zero(); self.cp.len()];
        self.prolong_into(w, &mut out, &mut fine, &mut Vec::new());
        Ok(out)
    }

    pub(crate) fn restrict_into(&self, v: &[T], out: &mut [T], fine: &mut [T], scratch: &mut Vec<T>) {
        self.cp.matvec_into(v, fine, scratch);
        cut_into(fine, self.m, self.dim(), out);
    }

    pub(crate) fn prolong_into(&self, w: &[T], out: &mut [T], fine: &mut [T], scratch: &mut Vec<T>) {
        cut_transpose_into(w, self.m, self.dim(), fine);
        self.cp.matvec_into(fine, out, scratch);
    }

    /// Dense `P` for oracles.
    pub fn to_dense(&self, cap: usize) -> Result<DenseMatrix<T>> {
        Ok(cut_matrix::<T>(self.m, self.dim())?.matmul(&self.cp.materialize_dense(cap)?))
    }
}

/// `P A P^T` formed from symbols alone.
pub fn coarse_operator<T: Scalar>(a: &Dct3Operator<T>, p: &Projector<T>) -> Result<Dct3Operator<T>> {
    if a.m() != p.fine_size() || a.dim() != p.dim() {
        return Err(Error::SizeMismatch {
            expected: a.m(),
            found: p.fine_size(),
        });
    }
    let sym = galerkin_symbol(a.symbol(), p.symbol())?;
    Dct3Operator::from_symbol(p.coarse_size(), sym)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense::dot;
    use crate::operator::DENSE_CAP;
    use crate::symbol::{strang_correct, CosPoly};

    #[test]
    fn cut_examples() {
        let c = cut(&[1.0f64; 8], 8, 1).unwrap();
        assert!(c.iter().all(|x| (x - 2f64.sqrt()).abs() < 1e-15));
        let e1 = cut(&[1.0, 0.0, 0.0, 0.0], 4, 1).unwrap();
        assert!((e1[0] - 0.5f64.sqrt()).abs() < 1e-15 && e1[1] == 0.0);
        let w: Vec<f64> = vec![0.3, -1.2, 2.0];
        let back = cut(&cut_transpose(&w, 6, 1).unwrap(), 6, 1).unwrap();
        for (a, b) in back.iter().zip(&w) {
            assert!((a - b).abs() < 1e-15);
        }
        assert!(cut(&[1.0f64; 5], 5, 1).is_err());
    }

    #[test]
    fn cut_2d_is_tensor_product() {
        let t1: DenseMatrix<f64> = cut_matrix(4, 1).unwrap();
        let t2: DenseMatrix<f64> = cut_matrix(4, 2).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                for c in 0..4 {
                    for d in 0..4 {
                        let k = t1[(a, c)] * t1[(b, d)];
                        assert!((t2[(a * 2 + b, c * 4 + d)] - k).abs() < 1e-15);
                    }
                }
            }
        }
    }

    #[test]
    fn restrict_examples() {
        let id = Projector::new(8, Symbol::from_poly(CosPoly::new(vec![1.0]))).unwrap();
        let v: Vec<f64> = (0..8).map(|i| i as f64).collect();
        assert_eq!(id.restrict(&v).unwrap(), cut(&v, 8, 1).unwrap());
        let p = Projector::new(8, Symbol::from_poly(CosPoly::new(vec![2.0, 2.0]))).unwrap();
        let r = p.restrict(&[1.0; 8]).unwrap();
        assert!(r.iter().all(|x| (x - 4.0 * 2f64.sqrt()).abs() < 1e-13));
    }

    #[test]
    fn adjointness() {
        let p = Projector::new(32, Symbol::from_poly(CosPoly::new(vec![6.0, 8.0, 2.0]))).unwrap();
        let v: Vec<f64> = (0..32).map(|i| ((i * 13) % 9) as f64 - 4.0).collect();
        let w: Vec<f64> = (0..16).map(|i| ((i * 5) % 7) as f64 - 3.0).collect();
        let lhs = dot(&p.restrict(&v).unwrap(), &w);
        let rhs = dot(&v, &p.prolong(&w).unwrap());
        assert!((lhs - rhs).abs() < 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn coarse_operator_matches_dense_triple_product() {
        let f = strang_correct(&CosPoly::new(vec![2.0f64, -2.0]), 16).unwrap();
        let a = Dct3Operator::from_symbol(16, f.clone()).unwrap();
        let p = Projector::new(16, Symbol::from_poly(CosPoly::new(vec![2.0, 2.0]))).unwrap();
        let c = coarse_operator(&a, &p).unwrap();
        assert_eq!(c.symbol().poly.coeffs(), &[5.0, -4.0, -1.0]);
        assert!((c.mass() - 16.0 * f.mass).abs() < 1e-13);
        let pd = p.to_dense(DENSE_CAP).unwrap();
        let dense = pd.matmul(&a.materialize_dense(DENSE_CAP).unwrap()).matmul(&pd.transpose());
        assert!(dense.max_abs_diff(&c.materialize_dense(DENSE_CAP).unwrap()) < 1e-12);
    }

    #[test]
    fn rank_deficient_projector_rejected() {
        // 2 - 2 cos x vanishes at frequency 0, whose coarse image has no partner
        assert!(Projector::new(8, Symbol::from_poly(CosPoly::new(vec![2.0, -2.0]))).is_err());
    }
}
