//! Property tests over random symbols, checked against independent dense or
//! pointwise oracles computed here.

use std::f64::consts::PI;

use dctmg::coarsening::{coarse_operator, Projector};
use dctmg::operator::{Dct3Operator, DENSE_CAP};
use dctmg::symbol::{
    extract_psi, extract_psi_at, galerkin_symbol, multiply, project_zero, projector_poly, psi_step, CosPoly, Symbol,
    ZeroInfo, ZeroLocation,
};
use dctmg::transform::dct3_matrix;
use dctmg::DenseMatrix;
use proptest::prelude::*;

fn coeffs(max_degree: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-1.0f64..1.0, 1..=max_degree + 1)
}

/// Strictly positive cosine polynomial: a dominant constant plus small terms.
fn positive(max_degree: usize) -> impl Strategy<Value = CosPoly<f64>> {
    (2.0f64..3.0, prop::collection::vec(-0.4f64..0.4, 0..=max_degree)).prop_map(|(c0, rest)| {
        let mut c = vec![c0];
        c.extend(rest);
        CosPoly::new(c)
    })
}

fn eval_direct(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().map(|(j, &cj)| cj * (j as f64 * x).cos()).sum()
}

fn scale_of(p: &CosPoly<f64>) -> f64 {
    p.coeffs().iter().map(|c| c.abs()).sum::<f64>().max(1.0)
}

/// `Q diag(lambda) Q^T` with the eigenvalues sampled directly from the
/// coefficients on `x_j = j pi / m`.
fn spectral_oracle(m: usize, c: &[f64], mass: f64) -> DenseMatrix<f64> {
    let q = dct3_matrix::<f64>(m);
    let mut scaled = q.clone();
    for j in 0..m {
        let lambda = eval_direct(c, j as f64 * PI / m as f64) + if j == 0 { mass } else { 0.0 };
        for i in 0..m {
            scaled[(i, j)] *= lambda;
        }
    }
    scaled.matmul(&q.transpose())
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn galerkin_pointwise_law(f in coeffs(4), p in coeffs(4)) {
        let (f, p) = (CosPoly::new(f), CosPoly::new(p));
        prop_assume!(!p.is_zero());
        let fp2 = |x: f64| f.eval1(x) * p.eval1(x).powi(2);
        let g = galerkin_symbol(&Symbol::from_poly(f.clone()), &Symbol::from_poly(p.clone()));
        // a negative coarse mass is reported as an error; the polynomial law is what is tested here
        let poly = match g {
            Ok(s) => s.poly,
            Err(_) => {
                let h = CosPoly::new(vec![1.0, 1.0]).mul(&f).mul(&p).mul(&p);
                h.even_part()
            }
        };
        let scale = scale_of(&f) * scale_of(&p).powi(2);
        for k in 0..128 {
            let y = k as f64 * PI / 127.0;
            let want = (y / 4.0).cos().powi(2) * fp2(y / 2.0)
                + ((PI - y / 2.0) / 2.0).cos().powi(2) * fp2(PI - y / 2.0);
            prop_assert!((poly.eval1(y) - want).abs() <= 1e-10 * scale, "y = {y}");
        }
    }

    #[test]
    fn mass_recursion(psi in positive(2), mass in 0.01f64..2.0, r in 1u32..3) {
        let f = CosPoly::new(vec![2.0, -2.0]).mul(&psi);
        let p = CosPoly::new(vec![2.0, 2.0]).pow(r);
        let coarse = galerkin_symbol(&Symbol::new(f, mass).unwrap(), &Symbol::from_poly(p.clone())).unwrap();
        let want = mass * p.eval1(0.0).powi(2);
        prop_assert!((coarse.mass - want).abs() <= 1e-12 * want);
    }

    #[test]
    fn zero_tracking(psi in positive(2), case in 0usize..4) {
        let (loc, order) = [
            (ZeroLocation::Origin, 2),
            (ZeroLocation::Origin, 4),
            (ZeroLocation::Origin, 6),
            (ZeroLocation::Pi, 2),
        ][case];
        let z = ZeroInfo::new(loc, order).unwrap();
        let base = match loc {
            ZeroLocation::Origin => CosPoly::new(vec![1.0, -1.0]),
            ZeroLocation::Pi => CosPoly::new(vec![1.0, 1.0]),
        };
        let f = base.pow(z.q()).mul(&psi);
        let p = projector_poly::<f64>(z, z.q(), 32, 1).unwrap();
        let coarse = galerkin_symbol(&Symbol::from_poly(f), &p).unwrap();
        prop_assert!(extract_psi_at(&coarse.poly, project_zero(z)).is_ok());
    }

    #[test]
    fn psi_recursion_matches_galerkin(psi in positive(2), q in 1u32..4) {
        let f = CosPoly::new(vec![1.0, -1.0]).pow(q).mul(&psi);
        let p = CosPoly::new(vec![2.0, 2.0]).pow(q);
        let coarse = galerkin_symbol(&Symbol::from_poly(f), &Symbol::from_poly(p)).unwrap();
        let from_galerkin = extract_psi(&coarse.poly, q).unwrap();
        let stepped = psi_step(&psi, q, &CosPoly::new(vec![1.0, 1.0]).pow(q));
        let scale = 4f64.powi(q as i32);
        for k in 0..64 {
            let x = k as f64 * PI / 63.0;
            let (a, b) = (from_galerkin.eval1(x), scale * stepped.eval1(x));
            prop_assert!((a - b).abs() <= 1e-10 * b.abs().max(1.0));
        }
    }

    #[test]
    fn multiply_is_pointwise(a in coeffs(4), b in coeffs(4), xs in prop::collection::vec(0.0f64..PI, 64)) {
        let prod = multiply(&CosPoly::new(a.clone()), &CosPoly::new(b.clone())).unwrap();
        for x in xs {
            let want = eval_direct(&a, x) * eval_direct(&b, x);
            let scale = a.iter().map(|c| c.abs()).sum::<f64>() * b.iter().map(|c| c.abs()).sum::<f64>();
            prop_assert!((prod.eval1(x) - want).abs() <= 1e-12 * scale.max(1.0));
        }
    }

    #[test]
    fn transform_diagonalizes_banded(c in coeffs(4), mass in prop_oneof![Just(0.0), Just(0.3)], k in 3u32..6) {
        let m = 1usize << k;
        let op = Dct3Operator::from_symbol(m, Symbol::new(CosPoly::new(c.clone()), mass).unwrap()).unwrap();
        let dense = op.materialize_dense(DENSE_CAP).unwrap();
        prop_assert!(dense.max_abs_diff(&spectral_oracle(m, &c, mass)) <= 1e-10 * (1.0 + c.iter().map(|x| x.abs()).sum::<f64>()));
    }

    #[test]
    fn banded_and_spectral_matvec_agree(
        c in coeffs(4),
        mass in prop_oneof![Just(0.0), Just(0.3)],
        k in 2u32..7,
        seed in any::<u64>(),
    ) {
        let m = 1usize << k;
        let c: Vec<f64> = c.into_iter().take(m).collect();
        let op = Dct3Operator::from_symbol(m, Symbol::new(CosPoly::new(c), mass).unwrap()).unwrap();
        let v: Vec<f64> = (0..m).map(|i| (((seed >> (i % 60)) & 0xff) as f64 / 128.0) - 1.0).collect();
        let a = op.matvec(&v).unwrap();
        let b = op.matvec_spectral(&v).unwrap();
        let vn = v.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
        for (x, y) in a.iter().zip(&b) {
            prop_assert!((x - y).abs() <= 1e-10 * vn);
        }
    }

    #[test]
    fn nonnegative_symbols_give_psd_matrices(g in coeffs(2), mass in 0.0f64..1.0, k in 3u32..7) {
        let g = CosPoly::new(g);
        let f = Symbol::new(g.mul(&g), mass).unwrap();
        let op = Dct3Operator::from_symbol(1 << k, f).unwrap();
        let dense = op.materialize_dense(DENSE_CAP).unwrap();
        prop_assert!(dense.max_abs_diff(&dense.transpose()) <= 1e-14 * (1.0 + dense.max_abs()));
        let sup = op.eigenvalues().iter().fold(0.0f64, |a, &b| a.max(b.abs()));
        let lo = op.eigenvalues().iter().fold(f64::INFINITY, |a, &b| a.min(b));
        prop_assert!(lo >= -1e-12 * sup.max(1.0));
    }

    #[test]
    fn galerkin_matches_dense_triple_product(
        c in coeffs(3),
        mass in prop_oneof![Just(0.0), Just(0.3)],
        p in positive(2),
        k in 3u32..7,
    ) {
        let m = 1usize << k;
        let a = Dct3Operator::from_symbol(m, Symbol::new(CosPoly::new(c), mass).unwrap()).unwrap();
        let proj = Projector::new(m, Symbol::from_poly(p)).unwrap();
        // random symbols may be indefinite; the polynomial identity is what matters
        if let Ok(coarse) = coarse_operator(&a, &proj) {
            let pd = proj.to_dense(DENSE_CAP).unwrap();
            let dense = pd.matmul(&a.materialize_dense(DENSE_CAP).unwrap()).matmul(&pd.transpose());
            let scale = 1.0 + dense.max_abs();
            prop_assert!(dense.max_abs_diff(&coarse.materialize_dense(DENSE_CAP).unwrap()) <= 1e-10 * scale);
        }
    }
}

#[test]
fn psi_chain_limit_for_q1() {
    let p = CosPoly::new(vec![1.0, 1.0]);
    let mut psi = CosPoly::new(vec![2.0f64]);
    let mut mus = Vec::new();
    for _ in 0..=20 {
        let (lo, hi) = psi.extrema();
        mus.push(hi / lo);
        psi = psi_step(&psi, 1, &p);
    }
    assert!(mus.windows(2).all(|w| w[1] >= w[0]));
    assert!((mus[20] - 3.0).abs() < 1e-6);
    let c = psi.coeffs();
    assert!((c[0] - 4.0 / 3.0).abs() < 1e-10 && (c[1] - 2.0 / 3.0).abs() < 1e-10);
}
