//! Dense reference checks of the coarse correction and the cycles.

use dctmg::analysis::coarse_correction_matrix;
use dctmg::dense::{dot, power_iteration, Cholesky};
use dctmg::operator::DENSE_CAP;
use dctmg::solver::LevelData;
use dctmg::{
    apply_cycle, build_hierarchy, generator, make_rhs, solve, DenseMatrix, Hierarchy, Method, ProjectorOrder,
    RhsMode, SetupOptions, SmootherWeights, SolveOptions, ZeroInfo, ZeroLocation,
};

fn hierarchy(zero: ZeroLocation, q: u32, m: usize, dim: usize, method: Method, r: ProjectorOrder) -> Hierarchy<f64> {
    let f = generator::<f64>(zero, q, dim).unwrap();
    let z = ZeroInfo::new(zero, 2 * q).unwrap();
    build_hierarchy(&f, z, m, dim, &SetupOptions::new(method).with_order(r)).unwrap()
}

fn configurations() -> Vec<(ZeroLocation, u32, ProjectorOrder)> {
    vec![
        (ZeroLocation::Origin, 1, ProjectorOrder::Fixed(1)),
        (ZeroLocation::Origin, 2, ProjectorOrder::Fixed(1)),
        (ZeroLocation::Origin, 2, ProjectorOrder::Fixed(2)),
        (ZeroLocation::Origin, 3, ProjectorOrder::Fixed(3)),
        (ZeroLocation::Pi, 1, ProjectorOrder::Auto),
    ]
}

fn dense_a(level: &LevelData<f64>) -> DenseMatrix<f64> {
    level.operator.materialize_dense(DENSE_CAP).unwrap()
}

#[test]
fn coarse_correction_is_an_a_orthogonal_projector() {
    for (zero, q, r) in configurations() {
        for m in [16, 32] {
            let h = hierarchy(zero, q, m, 1, Method::Tgm, r);
            let a = dense_a(h.finest());
            let w = coarse_correction_matrix(&h, 0, DENSE_CAP).unwrap();
            assert!(w.matmul(&w).max_abs_diff(&w) <= 1e-9, "W^2 = W for {zero} q={q} m={m}");
            let aw = a.matmul(&w);
            let wtaw = w.transpose().matmul(&aw);
            assert!(aw.max_abs_diff(&wtaw) <= 1e-9 * a.max_abs(), "AW = W^T A W for {zero} q={q} m={m}");
            // positive semidefinite: a small shift makes it factorizable
            let shifted = wtaw.symmetrized().add(&DenseMatrix::identity(m).scale(1e-9 * a.max_abs()));
            assert!(Cholesky::factor(&shifted).is_ok());
        }
    }
}

#[test]
fn coarse_correction_in_two_dimensions() {
    let h = hierarchy(ZeroLocation::Origin, 1, 16, 2, Method::Tgm, ProjectorOrder::Fixed(1));
    let w = coarse_correction_matrix(&h, 0, DENSE_CAP).unwrap();
    assert!(w.matmul(&w).max_abs_diff(&w) <= 1e-9);
}

#[test]
fn projectors_have_full_rank() {
    for (zero, q, r) in configurations() {
        for m in [16, 32, 64] {
            let h = hierarchy(zero, q, m, 1, Method::Vcycle, r);
            for level in h.levels.iter().filter(|l| l.projector.is_some()) {
                let p = level.projector.as_ref().unwrap().to_dense(DENSE_CAP).unwrap();
                let ppt = p.matmul(&p.transpose()).symmetrized();
                let inv = Cholesky::factor(&ppt).expect("P P^T is positive definite").inverse();
                let sigma_min_sq = 1.0 / power_iteration(&inv.symmetrized(), 1e-10, 100_000);
                let sigma_max_sq = power_iteration(&ppt, 1e-10, 100_000);
                assert!(
                    sigma_min_sq > 1e-8 * sigma_max_sq,
                    "{zero} q={q} m={} smallest singular value^2 {sigma_min_sq:e}",
                    level.m
                );
            }
        }
    }
}

/// Error A-norm per iteration, tracked against a dense exact solution.
fn error_norms(h: &Hierarchy<f64>, iters: usize) -> Vec<f64> {
    let a = dense_a(h.finest());
    let b = make_rhs(h, RhsMode::RandomSolution, 7);
    let exact = Cholesky::factor(&a).unwrap().solve(&b);
    let mut x = vec![0.0; b.len()];
    let mut out = Vec::new();
    for _ in 0..=iters {
        let e: Vec<f64> = x.iter().zip(&exact).map(|(u, v)| u - v).collect();
        out.push(dot(&e, &a.matvec(&e)).sqrt());
        x = apply_cycle(h, &x, &b).unwrap();
    }
    out
}

#[test]
fn iterations_never_increase_the_a_norm_error() {
    for (zero, q, r) in configurations() {
        for method in [Method::Tgm, Method::Vcycle] {
            for m in [16, 32, 64] {
                let h = hierarchy(zero, q, m, 1, method, r);
                let norms = error_norms(&h, 12);
                for w in norms.windows(2) {
                    assert!(w[1] <= w[0] * (1.0 + 1e-10) + 1e-13, "{zero} q={q} {method} m={m}: {norms:?}");
                }
            }
        }
    }
    let h2 = hierarchy(ZeroLocation::Origin, 1, 16, 2, Method::Vcycle, ProjectorOrder::Fixed(1));
    let norms = error_norms(&h2, 8);
    assert!(norms.windows(2).all(|w| w[1] <= w[0] * (1.0 + 1e-10)));
}

#[test]
fn exact_coarse_correction_leaves_no_coarse_residual() {
    for (zero, q, r) in configurations() {
        let f = generator::<f64>(zero, q, 1).unwrap();
        let z = ZeroInfo::new(zero, 2 * q).unwrap();
        let opts = SetupOptions::new(Method::Tgm)
            .with_order(r)
            .with_weights(SmootherWeights { pre: 0.0, post: 0.0 });
        let h = build_hierarchy(&f, z, 32, 1, &opts).unwrap();
        let b = make_rhs(&h, RhsMode::RandomSolution, 3);
        let x0: Vec<f64> = (0..32).map(|i| (i as f64 * 0.37).sin()).collect();
        let x = apply_cycle(&h, &x0, &b).unwrap();
        let ax = h.finest().operator.matvec(&x).unwrap();
        let r: Vec<f64> = b.iter().zip(&ax).map(|(u, v)| u - v).collect();
        let pr = h.finest().projector.as_ref().unwrap().restrict(&r).unwrap();
        let scale = b.iter().fold(0.0f64, |s, v| s.max(v.abs()));
        assert!(pr.iter().all(|v| v.abs() <= 1e-10 * scale), "{zero} q={q}: {pr:?}");
    }
}

#[test]
fn solves_are_deterministic() {
    for (dim, zero) in [(1, ZeroLocation::Origin), (2, ZeroLocation::Pi)] {
        let h = hierarchy(zero, 1, 64, dim, Method::Vcycle, ProjectorOrder::Auto);
        let b = make_rhs(&h, RhsMode::RandomSolution, 42);
        let (x1, r1) = solve(&h, &b, &SolveOptions::default()).unwrap();
        let (x2, r2) = solve(&h, &b, &SolveOptions::default()).unwrap();
        assert_eq!(x1, x2);
        assert_eq!(r1.residual_history, r2.residual_history);
        assert_eq!(make_rhs(&h, RhsMode::RandomSolution, 42), b);
    }
}

#[test]
fn single_precision_hierarchy_converges() {
    let f = generator::<f32>(ZeroLocation::Origin, 1, 1).unwrap();
    let z = ZeroInfo::new(ZeroLocation::Origin, 2).unwrap();
    let h = build_hierarchy(&f, z, 256, 1, &SetupOptions::new(Method::Vcycle)).unwrap();
    // a smooth right-hand side hits the single precision rounding floor near 1e-4
    let b = make_rhs(&h, RhsMode::RandomSolution, 42);
    let opts = SolveOptions {
        tol: 1e-5,
        ..SolveOptions::default()
    };
    let (_, rep) = solve(&h, &b, &opts).unwrap();
    assert!(rep.converged && rep.iterations <= 10, "{} iterations", rep.iterations);
}
