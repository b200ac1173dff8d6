//! Hierarchy setup, Richardson smoothing, two-grid and V-cycle iterations.

use std::time::Instant;

use log::{debug, info};
use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::coarsening::{coarse_operator, Projector};
use crate::dense::{norm2, Cholesky};
use crate::error::{Error, Result};
use crate::operator::{Dct3Operator, SpectralSolver, DENSE_CAP};
use crate::scalar::Scalar;
use crate::symbol::{
    extract_psi_at, project_zero, projector_poly_with, strang_correct, sup_norm, ProjectorForm,
    Symbol, ZeroInfo, ZeroLocation,
};

/// Coarsening stops once the size per dimension is at most this.
pub const COARSEST_SIZE: usize = 16;

/// Smallest accepted finest size per dimension.
pub const MIN_FINEST_SIZE: usize = 16;

/// Largest coarsest system factorized densely; above it the exact coarse
/// solve goes through the transform.
pub const DIRECT_CAP: usize = 1024;

/// Projector order `r` per level.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ProjectorOrder {
    /// `r_s = order_s / 2`, the smallest order satisfying the V-cycle
    /// conditions for the current zero.
    Auto,
    /// The same `r` at every level.
    Fixed(u32),
}

impl ProjectorOrder {
    fn at(&self, zero: ZeroInfo) -> u32 {
        match *self {
            ProjectorOrder::Auto => zero.q(),
            ProjectorOrder::Fixed(r) => r,
        }
    }
}

impl std::fmt::Display for ProjectorOrder {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ProjectorOrder::Auto => write!(f, "auto"),
            ProjectorOrder::Fixed(r) => write!(f, "{r}"),
        }
    }
}

impl std::str::FromStr for ProjectorOrder {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("auto") {
            return Ok(ProjectorOrder::Auto);
        }
        match s.parse::<u32>() {
            Ok(r) if r >= 1 => Ok(ProjectorOrder::Fixed(r)),
            _ => Err(Error::usage(format!("projector order must be a positive integer or auto, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Tgm,
    Vcycle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Tgm => write!(f, "tgm"),
            Method::Vcycle => write!(f, "vcycle"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "tgm" | "twogrid" | "two-grid" => Ok(Method::Tgm),
            "vcycle" | "v-cycle" | "mgm" | "multigrid" => Ok(Method::Vcycle),
            other => Err(Error::usage(format!("unknown method {other:?}; expected tgm or vcycle"))),
        }
    }
}

/// Richardson weights as multiples of `1 / ||f_s||_inf`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SmootherWeights {
    pub pre: f64,
    pub post: f64,
}

impl Default for SmootherWeights {
    /// One step of weight `1/||f||` before the coarse correction and one of
    /// weight `2/||f||` after it.
    fn default() -> Self {
        Self { pre: 1.0, post: 2.0 }
    }
}

/// Setup parameters of [`build_hierarchy`].
#[derive(Clone, Debug, PartialEq)]
pub struct SetupOptions {
    pub method: Method,
    pub order: ProjectorOrder,
    /// 2D combination of the univariate projector factors; `None` picks
    /// [`ProjectorForm::default_for`] the zero location of each level.
    pub form: Option<ProjectorForm>,
    pub weights: SmootherWeights,
    pub coarsest: usize,
    pub direct_cap: usize,
}

impl SetupOptions {
    pub fn new(method: Method) -> Self {
        Self {
            method,
            order: ProjectorOrder::Auto,
            form: None,
            weights: SmootherWeights::default(),
            coarsest: COARSEST_SIZE,
            direct_cap: DIRECT_CAP,
        }
    }

    pub fn with_order(mut self, order: ProjectorOrder) -> Self {
        self.order = order;
        self
    }

    pub fn with_weights(mut self, weights: SmootherWeights) -> Self {
        self.weights = weights;
        self
    }
}

/// One level of the hierarchy; `projector` maps this level to the next.
#[derive(Clone, Debug)]
pub struct LevelData<T> {
    pub m: usize,
    pub operator: Dct3Operator<T>,
    pub projector: Option<Projector<T>>,
    pub projector_order: Option<u32>,
    pub omega_pre: T,
    pub omega_post: T,
    /// Zero of this level's symbol; `None` for a nonsingular hierarchy.
    pub zero: Option<ZeroInfo>,
}

impl<T: Scalar> LevelData<T> {
    pub fn symbol(&self) -> &Symbol<T> {
        self.operator.symbol()
    }
}

/// Exact solver used at the coarsest level.
#[derive(Clone, Debug)]
pub enum CoarseSolver<T: Scalar> {
    Dense(Cholesky<T>),
    Spectral(SpectralSolver<T>),
}

impl<T: Scalar> CoarseSolver<T> {
    pub fn new(a: &Dct3Operator<T>, direct_cap: usize) -> Result<Self> {
        if a.len() <= direct_cap {
            Ok(CoarseSolver::Dense(Cholesky::factor(&a.materialize_dense(DENSE_CAP)?)?))
        } else {
            Ok(CoarseSolver::Spectral(SpectralSolver::new(a)?))
        }
    }

    pub fn solve_in_place(&self, b: &mut [T]) {
        match self {
            CoarseSolver::Dense(c) => c.solve_in_place(b),
            CoarseSolver::Spectral(s) => s.solve_in_place(b),
        }
    }
}

/// Product of the setup phase, finest level first.
#[derive(Clone, Debug)]
pub struct Hierarchy<T: Scalar> {
    pub levels: Vec<LevelData<T>>,
    pub coarse: CoarseSolver<T>,
    pub method: Method,
}

impl<T: Scalar> Hierarchy<T> {
    pub fn dim(&self) -> usize {
        self.levels[0].operator.dim()
    }

    pub fn finest(&self) -> &LevelData<T> {
        &self.levels[0]
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.m).collect()
    }

    pub fn level_summary(&self) -> Vec<LevelSummary> {
        self.levels
            .iter()
            .map(|l| LevelSummary {
                m: l.m,
                coeffs: rows_f64(&l.symbol().poly.to_rows()),
                mass: l.symbol().mass.to_f64_lossy(),
                omega_pre: l.omega_pre.to_f64_lossy(),
                omega_post: l.omega_post.to_f64_lossy(),
                zero: l.zero,
                projector_order: l.projector_order,
                projector: l.projector.as_ref().map(|p| rows_f64(&p.symbol().poly.to_rows())),
                projector_mass: l.projector.as_ref().map(|p| p.symbol().mass.to_f64_lossy()),
            })
            .collect()
    }
}

fn rows_f64<T: Scalar>(rows: &[Vec<T>]) -> Vec<Vec<f64>> {
    rows.iter()
        .map(|r| r.iter().map(|x| x.to_f64_lossy()).collect())
        .collect()
}

fn is_power_of_two(m: usize) -> bool {
    m >= 1 && m & (m - 1) == 0
}

/// Checks that the declared zero matches `f0` and that `f0` is nonnegative.
fn validate_generator<T: Scalar>(f0: &Symbol<T>, zero: ZeroInfo, dim: usize) -> Result<()> {
    if f0.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: f0.dim(),
        });
    }
    let (lo, hi) = f0.poly.extrema();
    let scale = hi.abs().max(lo.abs()).max(T::one());
    if lo < -T::zero_tol() * scale * T::lit(1e3) {
        return Err(Error::usage(format!("generating function is negative (min {lo})")));
    }
    if dim == 1 {
        extract_psi_at(&f0.poly, zero).map(|_| ())
    } else {
        let x = match zero.location {
            ZeroLocation::Origin => T::zero(),
            ZeroLocation::Pi => T::PI(),
        };
        let v = f0.poly.eval2(x, x);
        if v.abs() > T::zero_tol() * scale {
            return Err(Error::usage(format!(
                "generating function does not vanish at the declared zero ({v})"
            )));
        }
        Ok(())
    }
}

/// Builds the level chain for `f0` with the declared zero on an
/// `m0`-per-dimension grid.
///
/// A zero at the origin is lifted by the Strang correction. Two-grid setups
/// stop after one coarsening; V-cycle setups halve until the size is at most
/// `opts.coarsest`.
pub fn build_hierarchy<T: Scalar>(
    f0: &Symbol<T>,
    zero: ZeroInfo,
    m0: usize,
    dim: usize,
    opts: &SetupOptions,
) -> Result<Hierarchy<T>> {
    if !(dim == 1 || dim == 2) {
        return Err(Error::usage(format!("dimension must be 1 or 2, got {dim}")));
    }
    check_size(m0)?;
    validate_generator(f0, zero, dim)?;
    let symbol = match zero.location {
        ZeroLocation::Origin if f0.mass.is_zero() => strang_correct(&f0.poly, m0)?,
        _ => f0.clone(),
    };
    assemble(symbol, Some(zero), m0, opts)
}

/// Hierarchy for a symbol that is positive everywhere. Projectors take the
/// form used for a zero at the origin, with `r = 1` under
/// [`ProjectorOrder::Auto`].
pub fn build_hierarchy_nonsingular<T: Scalar>(
    f0: &Symbol<T>,
    m0: usize,
    opts: &SetupOptions,
) -> Result<Hierarchy<T>> {
    check_size(m0)?;
    assemble(f0.clone(), None, m0, opts)
}

fn check_size(m0: usize) -> Result<()> {
    if !is_power_of_two(m0) || m0 < MIN_FINEST_SIZE {
        return Err(Error::usage(format!(
            "size must be a power of two and at least {MIN_FINEST_SIZE}, got {m0}"
        )));
    }
    Ok(())
}

fn assemble<T: Scalar>(
    mut symbol: Symbol<T>,
    mut zero: Option<ZeroInfo>,
    m0: usize,
    opts: &SetupOptions,
) -> Result<Hierarchy<T>> {
    let dim = symbol.dim();
    let mut m = m0;
    let mut levels: Vec<LevelData<T>> = Vec::new();
    loop {
        let s = levels.len();
        let operator = Dct3Operator::from_symbol(m, symbol.clone()).map_err(|e| e.at_level(s))?;
        let min_eig = operator
            .eigenvalues()
            .into_iter()
            .fold(T::infinity(), |a, b| a.min(b));
        if !(min_eig > T::zero()) {
            return Err(Error::NotPositiveDefinite {
                row: 0,
                pivot: min_eig.to_f64_lossy(),
            }
            .at_level(s));
        }
        let norm = sup_norm(&symbol);
        let omega_pre = T::lit(opts.weights.pre) / norm;
        let omega_post = T::lit(opts.weights.post) / norm;
        let last = match opts.method {
            Method::Tgm => s == 1,
            Method::Vcycle => m <= opts.coarsest,
        };
        debug!("level {s}: m = {m}, symbol {:?}, mass {}", symbol.poly.to_rows(), symbol.mass);
        if last {
            let coarse = CoarseSolver::new(&operator, opts.direct_cap).map_err(|e| e.at_level(s))?;
            levels.push(LevelData {
                m,
                operator,
                projector: None,
                projector_order: None,
                omega_pre,
                omega_post,
                zero,
            });
            info!("hierarchy with {} levels, sizes {m0}..{m}", levels.len());
            return Ok(Hierarchy {
                levels,
                coarse,
                method: opts.method,
            });
        }
        let target = zero.unwrap_or(ZeroInfo {
            location: ZeroLocation::Origin,
            order: 2,
        });
        let r = opts.order.at(target);
        let form = opts.form.unwrap_or(ProjectorForm::default_for(target.location));
        let p = projector_poly_with(target, r, m, dim, form).map_err(|e| e.at_level(s))?;
        let projector = Projector::new(m, p).map_err(|e| e.at_level(s))?;
        let next = coarse_operator(&operator, &projector).map_err(|e| e.at_level(s))?;
        symbol = next.symbol().clone();
        levels.push(LevelData {
            m,
            operator,
            projector: Some(projector),
            projector_order: Some(r),
            omega_pre,
            omega_post,
            zero,
        });
        zero = zero.map(project_zero);
        m /= 2;
    }
}

/// `nu` Richardson steps `x <- x + omega (b - A x)`.
pub fn richardson<T: Scalar>(a: &Dct3Operator<T>, x: &mut [T], b: &[T], omega: T, nu: usize) -> Result<()> {
    if x.len() != a.len() || b.len() != a.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            found: x.len().min(b.len()),
        });
    }
    let mut ax = vec![T::zero(); a.len()];
    let mut scratch = Vec::new();
    for _ in 0..nu {
        a.matvec_into(x, &mut ax, &mut scratch);
        for ((xi, &bi), &ai) in x.iter_mut().zip(b).zip(&ax) {
            *xi = *xi + omega * (bi - ai);
        }
    }
    Ok(())
}

/// Per-solve options.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iters: usize,
    pub nu_pre: usize,
    pub nu_post: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            tol: 1e-7,
            max_iters: 1000,
            nu_pre: 1,
            nu_post: 1,
        }
    }
}

impl SolveOptions {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::usage(format!("tolerance must be positive, got {}", self.tol)));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LevelSummary {
    pub m: usize,
    pub coeffs: Vec<Vec<f64>>,
    pub mass: f64,
    pub omega_pre: f64,
    pub omega_post: f64,
    pub zero: Option<ZeroInfo>,
    pub projector_order: Option<u32>,
    pub projector: Option<Vec<Vec<f64>>>,
    pub projector_mass: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolveReport {
    pub method: Method,
    pub dim: usize,
    pub sizes: Vec<usize>,
    pub iterations: usize,
    pub converged: bool,
    pub final_relative_residual: f64,
    pub residual_history: Vec<f64>,
    pub levels: Vec<LevelSummary>,
    pub elapsed_ms: f64,
}

/// Work vectors of one level.
struct Work<T> {
    x: Vec<T>,
    b: Vec<T>,
    r: Vec<T>,
    t: Vec<T>,
}

impl<T: Scalar> Work<T> {
    fn new(n: usize) -> Self {
        Self {
            x: vec![T::zero(); n],
            b: vec![T::zero(); n],
            r: vec![T::zero(); n],
            t: vec![T::zero(); n],
        }
    }
}

/// Cycle engine over `levels[..=last]` with an exact solve at `last`.
struct Cycle<'a, T: Scalar> {
    levels: &'a [LevelData<T>],
    coarse: &'a CoarseSolver<T>,
    nu_pre: usize,
    nu_post: usize,
    work: Vec<Work<T>>,
    scratch: Vec<T>,
}

impl<'a, T: Scalar> Cycle<'a, T> {
    fn new(levels: &'a [LevelData<T>], coarse: &'a CoarseSolver<T>, opts: &SolveOptions) -> Self {
        Self {
            levels,
            coarse,
            nu_pre: opts.nu_pre,
            nu_post: opts.nu_post,
            work: levels.iter().map(|l| Work::new(l.operator.len())).collect(),
            scratch: Vec::new(),
        }
    }

    fn smooth(a: &Dct3Operator<T>, w: &mut Work<T>, omega: T, nu: usize, scratch: &mut Vec<T>) {
        for _ in 0..nu {
            a.matvec_into(&w.x, &mut w.r, scratch);
            for ((x, &b), &ax) in w.x.iter_mut().zip(&w.b).zip(&w.r) {
                *x = *x + omega * (b - ax);
            }
        }
    }

    /// One cycle on level `s` acting on `work[s].x` with right-hand side `work[s].b`.
    fn run(&mut self, s: usize) {
        let last = self.levels.len() - 1;
        if s == last {
            let w = &mut self.work[s];
            w.x.copy_from_slice(&w.b);
            self.coarse.solve_in_place(&mut w.x);
            return;
        }
        let lvl = &self.levels[s];
        let a = &lvl.operator;
        let p = lvl.projector.as_ref().expect("non-coarsest level has a projector");
        {
            let (fine, coarse) = self.work.split_at_mut(s + 1);
            let w = &mut fine[s];
            Self::smooth(a, w, lvl.omega_pre, self.nu_pre, &mut self.scratch);
            a.matvec_into(&w.x, &mut w.r, &mut self.scratch);
            for (r, &b) in w.r.iter_mut().zip(&w.b) {
                *r = b - *r;
            }
            let c = &mut coarse[0];
            p.restrict_into(&w.r, &mut c.b, &mut w.t, &mut self.scratch);
            c.x.iter_mut().for_each(|x| *x = T::zero());
        }
        self.run(s + 1);
        {
            let (fine, coarse) = self.work.split_at_mut(s + 1);
            let w = &mut fine[s];
            p.prolong_into(&coarse[0].x, &mut w.r, &mut w.t, &mut self.scratch);
            for (x, &e) in w.x.iter_mut().zip(&w.r) {
                *x = *x + e;
            }
            Self::smooth(a, w, lvl.omega_post, self.nu_post, &mut self.scratch);
        }
    }
}

fn iterate<T: Scalar>(
    h: &Hierarchy<T>,
    levels: &[LevelData<T>],
    coarse: &CoarseSolver<T>,
    b: &[T],
    x0: Option<&[T]>,
    opts: &SolveOptions,
) -> Result<(Vec<T>, SolveReport)> {
    opts.validate()?;
    let a = &levels[0].operator;
    if b.len() != a.len() {
        return Err(Error::SizeMismatch {
            expected: a.len(),
            found: b.len(),
        });
    }
    let start = Instant::now();
    let mut cycle = Cycle::new(levels, coarse, opts);
    cycle.work[0].b.copy_from_slice(b);
    if let Some(x0) = x0 {
        cycle.work[0].x.copy_from_slice(x0);
    }
    let bnorm = norm2(b);
    let mut history = Vec::new();
    let mut residual = vec![T::zero(); b.len()];
    let mut scratch = Vec::new();
    let rel_residual = |x: &[T], residual: &mut Vec<T>, scratch: &mut Vec<T>| -> f64 {
        a.matvec_into(x, residual, scratch);
        let r: T = residual
            .iter()
            .zip(b)
            .map(|(&ax, &bi)| (bi - ax) * (bi - ax))
            .sum::<T>()
            .sqrt();
        (r / bnorm).to_f64_lossy()
    };
    let mut converged = bnorm.is_zero();
    let mut current = if converged { 0.0 } else { rel_residual(&cycle.work[0].x, &mut residual, &mut scratch) };
    if !converged && current <= opts.tol {
        converged = true;
    }
    while !converged && history.len() < opts.max_iters {
        cycle.run(0);
        current = rel_residual(&cycle.work[0].x, &mut residual, &mut scratch);
        history.push(current);
        debug!("iteration {}: relative residual {current:e}", history.len());
        if current <= opts.tol {
            converged = true;
        } else if !current.is_finite() {
            break;
        }
    }
    let report = SolveReport {
        method: h.method,
        dim: h.dim(),
        sizes: levels.iter().map(|l| l.m).collect(),
        iterations: history.len(),
        converged,
        final_relative_residual: current,
        residual_history: history,
        levels: h.level_summary().into_iter().take(levels.len()).collect(),
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let x = std::mem::take(&mut cycle.work[0].x);
    Ok((x, report))
}

/// Two-grid iteration: the coarse problem on level 1 is solved exactly.
pub fn tgm_solve<T: Scalar>(h: &Hierarchy<T>, b: &[T], opts: &SolveOptions) -> Result<(Vec<T>, SolveReport)> {
    if h.depth() < 2 {
        return Err(Error::usage("a two-grid solve needs at least two levels"));
    }
    let mut report;
    let x;
    if h.depth() == 2 {
        (x, report) = iterate(h, &h.levels, &h.coarse, b, None, opts)?;
    } else {
        let coarse = CoarseSolver::new(&h.levels[1].operator, DIRECT_CAP).map_err(|e| e.at_level(1))?;
        (x, report) = iterate(h, &h.levels[..2], &coarse, b, None, opts)?;
    }
    report.method = Method::Tgm;
    Ok((x, report))
}

/// V-cycle iteration over the whole hierarchy.
pub fn vcycle_solve<T: Scalar>(h: &Hierarchy<T>, b: &[T], opts: &SolveOptions) -> Result<(Vec<T>, SolveReport)> {
    let (x, mut report) = iterate(h, &h.levels, &h.coarse, b, None, opts)?;
    report.method = Method::Vcycle;
    Ok((x, report))
}

/// Runs the method the hierarchy was built for.
pub fn solve<T: Scalar>(h: &Hierarchy<T>, b: &[T], opts: &SolveOptions) -> Result<(Vec<T>, SolveReport)> {
    match h.method {
        Method::Tgm => tgm_solve(h, b, opts),
        Method::Vcycle => vcycle_solve(h, b, opts),
    }
}

/// Applies one cycle to `x` for the right-hand side `b` (for diagnostics).
pub fn apply_cycle<T: Scalar>(h: &Hierarchy<T>, x: &[T], b: &[T]) -> Result<Vec<T>> {
    let opts = SolveOptions {
        max_iters: 1,
        tol: f64::MIN_POSITIVE,
        ..SolveOptions::default()
    };
    let n = h.finest().operator.len();
    if x.len() != n || b.len() != n {
        return Err(Error::SizeMismatch {
            expected: n,
            found: x.len().min(b.len()),
        });
    }
    let mut cycle = Cycle::new(&h.levels, &h.coarse, &opts);
    cycle.work[0].x.copy_from_slice(x);
    cycle.work[0].b.copy_from_slice(b);
    cycle.run(0);
    Ok(std::mem::take(&mut cycle.work[0].x))
}

/// How the right-hand side `b = A u` is generated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RhsMode {
    /// `u` uniform on `[0, 1)` from a seeded ChaCha8 stream.
    RandomSolution,
    /// `u = e`.
    OnesSolution,
    /// `u_k = (k + 1) / n` over the flattened index.
    Ramp,
    Zero,
}

impl std::fmt::Display for RhsMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            RhsMode::RandomSolution => "random",
            RhsMode::OnesSolution => "ones",
            RhsMode::Ramp => "ramp",
            RhsMode::Zero => "zero",
        })
    }
}

impl std::str::FromStr for RhsMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "random" | "random_solution" => Ok(RhsMode::RandomSolution),
            "ones" | "ones_solution" => Ok(RhsMode::OnesSolution),
            "ramp" => Ok(RhsMode::Ramp),
            "zero" => Ok(RhsMode::Zero),
            other => Err(Error::usage(format!(
                "unknown rhs mode {other:?}; expected random, ones, ramp or zero"
            ))),
        }
    }
}

/// The exact solution `u` behind [`make_rhs`].
pub fn make_solution<T: Scalar>(n: usize, mode: RhsMode, seed: u64) -> Vec<T> {
    match mode {
        RhsMode::RandomSolution => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            (0..n).map(|_| T::lit(rng.random::<f64>())).collect()
        }
        RhsMode::OnesSolution => vec![T::one(); n],
        RhsMode::Ramp => {
            let nn = T::from_usize_lossy(n);
            (1..=n).map(|k| T::from_usize_lossy(k) / nn).collect()
        }
        RhsMode::Zero => vec![T::zero(); n],
    }
}

/// `b = A u` on the finest level.
pub fn make_rhs<T: Scalar>(h: &Hierarchy<T>, mode: RhsMode, seed: u64) -> Vec<T> {
    let a = &h.finest().operator;
    let u = make_solution(a.len(), mode, seed);
    a.matvec(&u).expect("solution has the operator size")
}
