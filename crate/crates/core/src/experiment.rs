//! A fully specified solver run: generating function, grid sizes, method
//! and stopping rule. Shared by the table harness and the command line.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::solver::{
    build_hierarchy, make_rhs, solve, Hierarchy, Method, ProjectorOrder, RhsMode, SetupOptions, SolveOptions,
    SolveReport, MIN_FINEST_SIZE,
};
use crate::symbol::{CosPoly, Symbol, ZeroInfo, ZeroLocation};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentSpec {
    pub dim: usize,
    pub q: u32,
    pub r: ProjectorOrder,
    pub zero: ZeroLocation,
    pub sizes: Vec<usize>,
    pub method: Method,
    pub tol: f64,
    pub max_iters: usize,
    pub seed: u64,
    pub rhs: RhsMode,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            dim: 1,
            q: 1,
            r: ProjectorOrder::Auto,
            zero: ZeroLocation::Origin,
            sizes: vec![512],
            method: Method::Vcycle,
            tol: 1e-7,
            max_iters: 1000,
            seed: 42,
            rhs: RhsMode::Ramp,
        }
    }
}

/// `[2 - 2cos x]^q` for a zero at the origin and `[2 + 2cos x]^q` for a
/// zero at pi, summed over the coordinates in 2D.
pub fn generator<T: Scalar>(zero: ZeroLocation, q: u32, dim: usize) -> Result<Symbol<T>> {
    if q < 1 {
        return Err(Error::usage("q must be at least 1"));
    }
    let two = T::lit(2.0);
    let base = match zero {
        ZeroLocation::Origin => CosPoly::new(vec![two, -two]),
        ZeroLocation::Pi => CosPoly::new(vec![two, two]),
    };
    let f = base.pow(q);
    Ok(Symbol::from_poly(match dim {
        1 => f,
        2 => CosPoly::separable_sum(&f),
        d => return Err(Error::usage(format!("dimension must be 1 or 2, got {d}"))),
    }))
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.dim == 1 || self.dim == 2) {
            return Err(Error::usage(format!("dimension must be 1 or 2, got {}", self.dim)));
        }
        if self.q < 1 {
            return Err(Error::usage("q must be at least 1"));
        }
        if self.sizes.is_empty() {
            return Err(Error::usage("at least one size is required"));
        }
        for &m in &self.sizes {
            if m < MIN_FINEST_SIZE || m & (m - 1) != 0 {
                return Err(Error::usage(format!(
                    "size {m} is not a power of two of at least {MIN_FINEST_SIZE}"
                )));
            }
        }
        if !(self.tol > 0.0) {
            return Err(Error::usage("tolerance must be positive"));
        }
        Ok(())
    }

    pub fn zero_info(&self) -> Result<ZeroInfo> {
        ZeroInfo::new(self.zero, 2 * self.q)
    }

    pub fn solve_options(&self) -> SolveOptions {
        SolveOptions {
            tol: self.tol,
            max_iters: self.max_iters,
            ..SolveOptions::default()
        }
    }

    pub fn hierarchy<T: Scalar>(&self, m: usize) -> Result<Hierarchy<T>> {
        self.validate()?;
        let f0 = generator(self.zero, self.q, self.dim)?;
        let opts = SetupOptions::new(self.method).with_order(self.r);
        build_hierarchy(&f0, self.zero_info()?, m, self.dim, &opts)
    }

    /// Builds the hierarchy for `m` and solves from a zero initial guess.
    pub fn run<T: Scalar>(&self, m: usize) -> Result<SolveReport> {
        let h = self.hierarchy::<T>(m)?;
        let b = make_rhs(&h, self.rhs, self.seed);
        let (_, report) = solve(&h, &b, &self.solve_options())?;
        Ok(report)
    }
}
