//! Multigrid solvers for linear systems in the DCT-III matrix algebra.
//!
//! Matrices `C_m(f)` are generated by even trigonometric polynomials `f`
//! (the symbol) and diagonalized by the orthogonal cosine transform `Q_m`.
//! Coarse operators are formed symbolically, so setup and every cycle cost
//! `O(m)` per level for banded symbols.
//!
//! Everything numeric is generic over [`Scalar`] (`f32` or `f64`); the
//! `*64` aliases below fix the scalar to `f64`.
//!
//! ```
//! use dctmg::{build_hierarchy, make_rhs, solve, CosPoly, Method, RhsMode, SetupOptions, SolveOptions, Symbol64,
//!     ZeroInfo, ZeroLocation};
//!
//! let f = Symbol64::from_poly(CosPoly::new(vec![2.0, -2.0]));
//! let zero = ZeroInfo::new(ZeroLocation::Origin, 2).unwrap();
//! let h = build_hierarchy(&f, zero, 256, 1, &SetupOptions::new(Method::Vcycle)).unwrap();
//! let b = make_rhs(&h, RhsMode::Ramp, 42);
//! let (_, report) = solve(&h, &b, &SolveOptions::default()).unwrap();
//! assert!(report.converged && report.iterations <= 10);
//! ```

pub mod analysis;
pub mod coarsening;
pub mod dense;
pub mod error;
pub mod experiment;
pub mod operator;
pub mod scalar;
pub mod solver;
pub mod symbol;
pub mod tables;
pub mod transform;

pub use analysis::{
    levelwise_delta, measured_contraction, smoothing_constants, verify_cutting_identity, Accounting, CuttingIdentity,
    TheoryReport,
};
pub use coarsening::{coarse_operator, cut, cut_transpose, Projector};
pub use dense::DenseMatrix;
pub use error::{Error, Result};
pub use experiment::{generator, ExperimentSpec};
pub use operator::{Banded, Dct3Operator, SpectralSolver};
pub use scalar::Scalar;
pub use solver::{
    apply_cycle, build_hierarchy, build_hierarchy_nonsingular, make_rhs, solve, tgm_solve, vcycle_solve, Hierarchy,
    Method, ProjectorOrder, RhsMode, SetupOptions, SmootherWeights, SolveOptions, SolveReport,
};
pub use symbol::{
    extract_psi, galerkin_symbol, projector_poly, strang_correct, CosPoly, ProjectorForm, Symbol, ZeroInfo,
    ZeroLocation,
};
pub use transform::{Dct3, FrequencyGrid};

pub type CosPoly64 = CosPoly<f64>;
pub type Symbol64 = Symbol<f64>;
pub type Dct3Operator64 = Dct3Operator<f64>;
pub type Projector64 = Projector<f64>;
pub type Hierarchy64 = Hierarchy<f64>;
pub type Dct3_64 = Dct3<f64>;
