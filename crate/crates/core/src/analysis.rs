//! Convergence diagnostics: smoothing and approximation constants, the
//! level-wise `delta` quantities with the resulting contraction bound, the
//! measured A-norm contraction of a cycle, and a dense check of the cutting
//! identity `T Q_m = Q_{m/2} [Phi, Theta Pi]`.

use serde::Serialize;

use crate::coarsening::{coarse_operator, cut_matrix};
use crate::dense::{power_iteration, Cholesky, DenseMatrix};
use crate::error::{Error, Result};
use crate::operator::Dct3Operator;
use crate::scalar::Scalar;
use crate::solver::{apply_cycle, Hierarchy, LevelData};
use crate::symbol::{extract_psi_at, psi_step, sup_norm, CosPoly, Symbol, ZeroInfo, ZeroLocation};
use crate::transform::dct3_matrix;

/// Default dense cap of [`measured_contraction`] for 1D hierarchies.
pub const MEASURE_CAP_1D: usize = 256;

/// Default dense cap of [`measured_contraction`] for 2D hierarchies.
pub const MEASURE_CAP_2D: usize = 32 * 32;

/// Upper bounds `(alpha, beta)` of the pre- and post-smoothing properties of
/// one Richardson step with weight `omega`:
///
/// `alpha = omega * min(2, (2 - omega ||f||) / (1 - omega ||f||)^2)` and
/// `beta = omega * (2 - omega ||f||)`.
pub fn smoothing_constants<T: Scalar>(f: &Symbol<T>, omega: T) -> Result<(T, T)> {
    let norm = sup_norm(f);
    let t = omega * norm;
    let two = T::lit(2.0);
    if !(omega > T::zero()) || t > two * (T::one() + T::zero_tol()) {
        return Err(Error::usage(format!(
            "smoothing weight {omega} outside (0, 2/||f||] with ||f|| = {norm}"
        )));
    }
    let slack = (two - t).max(T::zero());
    let d = (T::one() - t) * (T::one() - t);
    let alpha = if d <= T::zero_tol() {
        omega * two
    } else {
        omega * two.min(slack / d)
    };
    Ok((alpha, omega * slack))
}

/// `(min psi, max psi)` over 4096 samples of `[0, pi]`.
pub fn psi_range<T: Scalar>(psi: &CosPoly<T>) -> Result<(T, T)> {
    if psi.dim() != 1 {
        return Err(Error::usage("cofactor analysis is one-dimensional"));
    }
    let (lo, hi) = psi.extrema();
    if !(lo > T::zero()) {
        return Err(Error::Factorization(format!("cofactor is not positive (min {lo})")));
    }
    Ok((lo, hi))
}

/// `M_psi / m_psi^2`.
pub fn gamma_star<T: Scalar>(psi: &CosPoly<T>) -> Result<T> {
    let (lo, hi) = psi_range(psi)?;
    Ok(hi / (lo * lo))
}

/// `mu_inf(psi) = M_psi / m_psi`.
pub fn mu_inf<T: Scalar>(psi: &CosPoly<T>) -> Result<T> {
    let (lo, hi) = psi_range(psi)?;
    Ok(hi / lo)
}

/// Cofactor of `f` for a zero of the given kind; the symbol itself when
/// there is no zero.
pub fn cofactor<T: Scalar>(f: &CosPoly<T>, zero: Option<ZeroInfo>) -> Result<CosPoly<T>> {
    match zero {
        Some(z) => extract_psi_at(f, z),
        None if f.dim() == 1 => Ok(f.clone()),
        None => Err(Error::usage("cofactor analysis is one-dimensional")),
    }
}

/// Approximation constant `gamma* = M_psi / m_psi^2` for `f = (1 - cos x)^q psi`.
/// `q = 0` takes `psi = f`.
pub fn approx_constant<T: Scalar>(f: &Symbol<T>, q: u32) -> Result<T> {
    let zero = if q == 0 {
        None
    } else {
        Some(ZeroInfo::new(ZeroLocation::Origin, 2 * q)?)
    };
    gamma_star(&cofactor(&f.poly, zero)?)
}

/// `levels + 1` cofactors `psi_0, psi_1, ...` of the recursion driven by
/// [`psi_step`] with a fixed projector polynomial `p`.
pub fn psi_chain<T: Scalar>(psi0: &CosPoly<T>, q: u32, p: &CosPoly<T>, levels: usize) -> Vec<CosPoly<T>> {
    let mut out = Vec::with_capacity(levels + 1);
    out.push(psi0.clone());
    for _ in 0..levels {
        let next = psi_step(out.last().expect("chain is non-empty"), q, p);
        out.push(next);
    }
    out
}

/// Which smoothing steps enter the `delta` bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Accounting {
    /// Only the step after the coarse correction (`delta_pre = 0`).
    PostOnly,
    /// Both steps.
    #[default]
    Both,
}

impl std::str::FromStr for Accounting {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "post" | "post_only" | "post-only" => Ok(Accounting::PostOnly),
            "both" => Ok(Accounting::Both),
            other => Err(Error::usage(format!("unknown accounting {other:?}; expected post or both"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelTheory {
    pub level: usize,
    pub m: usize,
    pub omega_pre: f64,
    pub omega_post: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma_star: f64,
    pub mu_inf: f64,
    pub psi_max: f64,
    pub psi_min: f64,
    pub psi: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TheoryReport {
    pub accounting: Accounting,
    pub levels: Vec<LevelTheory>,
    pub delta_pre: f64,
    pub delta_post: f64,
    /// `sqrt((1 - delta_post) / (1 + delta_pre))`.
    pub bound: f64,
    /// Whether the increments of `mu_inf` along the levels are non-increasing
    /// in magnitude.
    pub mu_increments_nonincreasing: bool,
    pub measured: Option<f64>,
}

fn level_theory<T: Scalar>(s: usize, level: &LevelData<T>) -> Result<LevelTheory> {
    let f = level.symbol();
    let psi = cofactor(&f.poly, level.zero)?;
    let (lo, hi) = psi_range(&psi)?;
    let (alpha, _) = smoothing_constants(f, level.omega_pre)?;
    let (_, beta) = smoothing_constants(f, level.omega_post)?;
    Ok(LevelTheory {
        level: s,
        m: level.m,
        omega_pre: level.omega_pre.to_f64_lossy(),
        omega_post: level.omega_post.to_f64_lossy(),
        alpha: alpha.to_f64_lossy(),
        beta: beta.to_f64_lossy(),
        gamma_star: (hi / (lo * lo)).to_f64_lossy(),
        mu_inf: (hi / lo).to_f64_lossy(),
        psi_max: hi.to_f64_lossy(),
        psi_min: lo.to_f64_lossy(),
        psi: psi.coeffs().iter().map(|c| c.to_f64_lossy()).collect(),
    })
}

/// Constants of every level that has a coarse correction and the resulting
/// bound on the A-norm contraction of one cycle.
pub fn levelwise_delta<T: Scalar>(h: &Hierarchy<T>, accounting: Accounting) -> Result<TheoryReport> {
    if h.dim() != 1 {
        return Err(Error::usage("level-wise theory constants are computed for 1D hierarchies"));
    }
    let corrected = h.depth() - 1;
    if corrected == 0 {
        return Err(Error::usage(
            "a single-level hierarchy has no coarse correction; at least two levels are needed",
        ));
    }
    let levels = h.levels[..corrected]
        .iter()
        .enumerate()
        .map(|(s, l)| level_theory(s, l).map_err(|e| e.at_level(s)))
        .collect::<Result<Vec<_>>>()?;
    let min_ratio = |f: fn(&LevelTheory) -> f64| {
        levels
            .iter()
            .map(|l| f(l) / l.gamma_star)
            .fold(f64::INFINITY, f64::min)
    };
    let delta_post = min_ratio(|l| l.beta);
    let delta_pre = match accounting {
        Accounting::PostOnly => 0.0,
        Accounting::Both => min_ratio(|l| l.alpha),
    };
    let bound = ((1.0 - delta_post).max(0.0) / (1.0 + delta_pre)).sqrt();
    if !(bound < 1.0) {
        return Err(Error::Consistency(format!(
            "no contraction bound under {accounting:?} accounting: delta_pre = {delta_pre}, delta_post = {delta_post}"
        )));
    }
    // the finest level of a pi-zero chain has its own cofactor and is left out
    let start = usize::from(matches!(
        h.finest().zero,
        Some(ZeroInfo {
            location: ZeroLocation::Pi,
            ..
        })
    ));
    let mus: Vec<f64> = levels.iter().skip(start).map(|l| l.mu_inf).collect();
    let steps: Vec<f64> = mus.windows(2).map(|w| (w[1] - w[0]).abs()).collect();
    let mu_increments_nonincreasing = steps
        .windows(2)
        .all(|w| w[1] <= w[0] + 1e-9 * mus.iter().fold(1.0, |a: f64, &b| a.max(b)));
    Ok(TheoryReport {
        accounting,
        levels,
        delta_pre,
        delta_post,
        bound,
        mu_increments_nonincreasing,
        measured: None,
    })
}

/// Dense orthogonal transform of the level: `Q_m` or `Q_m (x) Q_m`.
fn dense_transform<T: Scalar>(m: usize, dim: usize) -> DenseMatrix<T> {
    let q = dct3_matrix::<T>(m);
    if dim == 1 {
        return q;
    }
    let n = m * m;
    let mut out = DenseMatrix::zeros(n, n);
    for i1 in 0..m {
        for i2 in 0..m {
            for j1 in 0..m {
                let a = q[(i1, j1)];
                for j2 in 0..m {
                    out[(i1 * m + i2, j1 * m + j2)] = a * q[(i2, j2)];
                }
            }
        }
    }
    out
}

/// `Q diag(g(lambda)) Q^T` for the operator's eigenvalues.
pub fn spectral_function<T: Scalar>(a: &Dct3Operator<T>, g: impl Fn(T) -> T, cap: usize) -> Result<DenseMatrix<T>> {
    let n = a.len();
    if n > cap {
        return Err(Error::DenseCap { requested: n, cap });
    }
    let q = dense_transform::<T>(a.m(), a.dim());
    let mut scaled = q.clone();
    for (j, &l) in a.eigenvalues().iter().enumerate() {
        let gl = g(l);
        for i in 0..n {
            scaled[(i, j)] = scaled[(i, j)] * gl;
        }
    }
    Ok(scaled.matmul(&q.transpose()))
}

/// Dense error propagation matrix of one cycle (`b = 0`).
pub fn cycle_matrix<T: Scalar>(h: &Hierarchy<T>, cap: usize) -> Result<DenseMatrix<T>> {
    let n = h.finest().operator.len();
    if n > cap {
        return Err(Error::DenseCap { requested: n, cap });
    }
    let zero = vec![T::zero(); n];
    let mut cols = Vec::with_capacity(n);
    let mut e = vec![T::zero(); n];
    for j in 0..n {
        e[j] = T::one();
        cols.push(apply_cycle(h, &e, &zero)?);
        e[j] = T::zero();
    }
    Ok(DenseMatrix::from_columns(n, &cols))
}

/// A-norm of the cycle's error propagation, `||A^{1/2} E A^{-1/2}||_2`.
pub fn measured_contraction<T: Scalar>(h: &Hierarchy<T>, cap: usize) -> Result<f64> {
    let a = &h.finest().operator;
    let e = cycle_matrix(h, cap)?;
    let sqrt_a = spectral_function(a, |l| l.sqrt(), cap)?;
    let inv_sqrt_a = spectral_function(a, |l| T::one() / l.sqrt(), cap)?;
    let b = sqrt_a.matmul(&e).matmul(&inv_sqrt_a);
    let btb = b.transpose().matmul(&b).symmetrized();
    let lambda = power_iteration(&btb, T::lit(1e-8), 100_000);
    Ok(lambda.max(T::zero()).sqrt().to_f64_lossy())
}

/// `I - omega A` on a level, densely.
pub fn smoother_matrix<T: Scalar>(a: &Dct3Operator<T>, omega: T, cap: usize) -> Result<DenseMatrix<T>> {
    let ad = a.materialize_dense(cap)?;
    Ok(DenseMatrix::identity(a.len()).sub(&ad.scale(omega)))
}

/// Exact coarse correction `I - P^T (P A P^T)^{-1} P A` of level `s`, densely.
pub fn coarse_correction_matrix<T: Scalar>(h: &Hierarchy<T>, s: usize, cap: usize) -> Result<DenseMatrix<T>> {
    let level = h
        .levels
        .get(s)
        .ok_or_else(|| Error::usage(format!("level {s} does not exist")))?;
    let proj = level
        .projector
        .as_ref()
        .ok_or_else(|| Error::usage(format!("level {s} has no coarse correction")))?;
    let a = level.operator.materialize_dense(cap)?;
    let p = proj.to_dense(cap)?;
    let coarse = coarse_operator(&level.operator, proj)?.materialize_dense(cap)?;
    let inv = Cholesky::factor(&coarse)?.inverse();
    let correction = p.transpose().matmul(&inv).matmul(&p).matmul(&a);
    Ok(DenseMatrix::identity(a.rows()).sub(&correction))
}

/// Resolved block form of `Q_{m/2}^T T Q_m = [Phi, Theta Pi]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CuttingIdentity {
    pub m: usize,
    /// `cos(x_j / 2)`, `x_j = j pi / m`, for `j < m/2`.
    pub phi: Vec<f64>,
    /// `sin(x_k / 2)` indexed by the coarse frequency `k`.
    pub theta: Vec<f64>,
    /// Coarse frequency (1-based) hit by each column of the second block.
    pub permutation: Vec<usize>,
    /// Sign of each column of the second block; `0` for the null column.
    pub signs: Vec<i8>,
    /// `max |T Q_m - Q_{m/2} [Phi, Theta Pi]|`.
    pub residual: f64,
}

/// Matches every column of `Q_{m/2}^T T Q_m` to a single coarse frequency
/// and measures how well the resulting block form reproduces `T Q_m`.
pub fn verify_cutting_identity(m: usize) -> Result<CuttingIdentity> {
    if m < 2 || m % 2 != 0 || m > 512 {
        return Err(Error::usage(format!("cutting identity needs an even m in [2, 512], got {m}")));
    }
    let h = m / 2;
    let q = dct3_matrix::<f64>(m);
    let qc = dct3_matrix::<f64>(h);
    let tq = cut_matrix::<f64>(m, 1)?.matmul(&q);
    let blocks = qc.transpose().matmul(&tq);
    let x = |j: usize| j as f64 * std::f64::consts::PI / m as f64;
    let phi: Vec<f64> = (0..h).map(|j| (x(j) / 2.0).cos()).collect();
    let theta: Vec<f64> = (0..h).map(|k| (x(k) / 2.0).sin()).collect();
    let structural = |msg: String| Error::Consistency(format!("no consistent permutation for m = {m}: {msg}"));
    let mut permutation = Vec::with_capacity(h);
    let mut signs = Vec::with_capacity(h);
    let mut used = vec![false; h];
    let mut null_column = None;
    for i in 0..h {
        let col = blocks.column(h + i);
        let (k, v) = col
            .iter()
            .enumerate()
            .fold((0, 0.0f64), |best, (k, &v)| if v.abs() > best.1.abs() { (k, v) } else { best });
        if v.abs() <= 1e-12 {
            if null_column.replace(i).is_some() {
                return Err(structural("more than one null column".into()));
            }
            permutation.push(0);
            signs.push(0);
            continue;
        }
        if col.iter().enumerate().any(|(r, &c)| r != k && c.abs() > 1e-10) {
            return Err(structural(format!("column {} mixes coarse frequencies", h + i)));
        }
        if used[k] {
            return Err(structural(format!("coarse frequency {k} is hit twice")));
        }
        used[k] = true;
        permutation.push(k);
        signs.push(if v > 0.0 { 1 } else { -1 });
    }
    // the null column carries the coarse frequency whose weight sin(0) vanishes
    if let Some(i) = null_column {
        let free: Vec<usize> = (0..h).filter(|&k| !used[k]).collect();
        if free.len() != 1 || theta[free[0]].abs() > 1e-12 {
            return Err(structural("null column does not match a vanishing weight".into()));
        }
        permutation[i] = free[0];
    }
    let mut model = DenseMatrix::<f64>::zeros(h, m);
    for j in 0..h {
        model[(j, j)] = phi[j];
    }
    for i in 0..h {
        let k = permutation[i];
        model[(k, h + i)] = f64::from(signs[i]) * theta[k];
    }
    let residual = qc.matmul(&model).max_abs_diff(&tq);
    Ok(CuttingIdentity {
        m,
        phi,
        theta,
        permutation: permutation.into_iter().map(|k| k + 1).collect(),
        signs,
        residual,
    })
}
