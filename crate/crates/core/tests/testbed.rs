use exprk::integrator::SemilinearProblem;
use exprk::rational::{int, rat};
use exprk::testbed::{discrete_l2, exact, heat_problem, source, stability_bound_check, Grid1D};
use exprk::LinearOperator;
use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn source_matches_the_manufactured_solution() {
    assert_eq!(source(0.0, 0.0), 1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..20 {
        let (x, t): (f64, f64) = (rng.gen(), rng.gen());
        let u = x * (1.0 - x) * t.exp();
        let u_t = u;
        let u_xx = -2.0 * t.exp();
        let residual = u_t - u_xx - 1.0 / (1.0 + u * u) - source(x, t);
        assert!(residual.abs() <= 1e-13, "x={x} t={t}: {residual:e}");
    }
}

#[test]
fn laplacian_is_exact_on_quadratics() {
    let grid = Grid1D::new(200).unwrap();
    let q = grid.points().map(|x| exact(x, 0.0));
    let aq = grid.laplacian().apply(&q);
    for v in aq.iter() {
        assert!((v + 2.0).abs() <= 1e-8, "{v}");
    }
}

fn ode_residual(pb: &SemilinearProblem, t: f64) -> f64 {
    let u = (pb.exact.as_ref().unwrap())(t);
    let du = u.clone();
    (du - pb.rhs(t, &u)).amax()
}

#[test]
fn second_difference_of_the_profile_is_exact_in_rationals() {
    let n = 200i128;
    let q = |i: i128| rat(i * (n + 1 - i), (n + 1) * (n + 1));
    for i in 1..=n {
        let left = if i > 1 { q(i - 1) } else { int(0) };
        let right = if i < n { q(i + 1) } else { int(0) };
        let lap = (left - q(i) * int(2) + right) * int((n + 1) * (n + 1));
        assert_eq!(lap, int(-2));
    }
}

#[test]
fn exact_solution_solves_the_semidiscrete_system() {
    let hp = heat_problem(200).unwrap();
    let norm_a = 4.0 / (hp.grid.dx() * hp.grid.dx());
    for t in [0.0, 0.25, 0.5, 0.8, 1.0] {
        let r = ode_residual(&hp.problem, t);
        let u_max = (hp.problem.exact.as_ref().unwrap())(t).amax();
        let roundoff = 4.0 * f64::EPSILON * norm_a * u_max;
        assert!(r <= roundoff, "t={t}: {r:e} > {roundoff:e}");
    }
    let coarse = heat_problem(10).unwrap();
    for t in [0.0, 0.5, 1.0] {
        assert!(ode_residual(&coarse.problem, t) <= 1e-12);
    }
}

#[test]
fn initial_value_and_stiffness() {
    let hp = heat_problem(200).unwrap();
    let pb = &hp.problem;
    assert_eq!(&(pb.exact.as_ref().unwrap())(0.0), &pb.u0);
    assert!((hp.grid.dx() - 1.0 / 201.0).abs() < 1e-18);
    let a = pb.a.to_dense();
    assert!(a.norm() >= 1e5);
    let (eigs, _) = pb.a.symmetric_eigen().unwrap();
    assert!(eigs.iter().all(|&l| l < 0.0));
}

#[test]
fn discrete_norm_examples() {
    let hp = heat_problem(200).unwrap();
    let e = (hp.problem.exact.as_ref().unwrap())(0.7);
    assert_eq!(hp.discrete_l2_error(&e, 0.7).unwrap(), 0.0);
    let eps = 1e-3;
    let shifted = e.add_scalar(eps);
    let err = hp.discrete_l2_error(&shifted, 0.7).unwrap();
    assert!((err - eps * (200.0f64 / 201.0).sqrt()).abs() <= 1e-15);
    assert_eq!(discrete_l2(&DVector::from_element(4, 2.0), 0.25), 2.0);
}

#[test]
fn stability_sweep() {
    let hp = heat_problem(200).unwrap();
    for h in [1e-3f64, 1e-2, 1e-1] {
        let n = (1.0 / h + 1e-9).floor() as usize;
        let v = stability_bound_check(&hp.problem.a, h, n).unwrap();
        assert!(v <= 1.0 + 1e-12, "h={h}: {v}");
        assert!(v > 0.5);
    }
    assert_eq!(stability_bound_check(&LinearOperator::Zero(5), 0.1, 10).unwrap(), 0.0);
}

#[test]
fn scalar_stability_closed_form() {
    for (lambda, h, n) in [(3.0, 0.1, 10usize), (1e4, 1e-2, 100), (0.5, 0.2, 5)] {
        let a = LinearOperator::dense(DMatrix::from_element(1, 1, -lambda)).unwrap();
        let x: f64 = h * lambda;
        let closed = x * (-x).exp() * (1.0 - (-(n as f64) * x).exp()) / (1.0 - (-x).exp());
        let v = stability_bound_check(&a, h, n).unwrap();
        assert!((v - closed).abs() <= 1e-13 * closed.max(1.0));
        assert!(v <= 1.0);
    }
}
