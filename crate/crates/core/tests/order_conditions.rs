use exprk::order_conditions::{
    check, condition_residual, max_residuals, scalar_zero_order, structured_probes, Mode, Probe, ProbeSet,
    CONDITION_ORDER, DEFAULT_TOLERANCE,
};
use exprk::phi::phi_matrix;
use exprk::rational::{int, rat, Rational};
use exprk::tableau::{baseline_tableaux, classical_limit, exp_euler, exprk2, exprk5s8};
use exprk::{ExpRkTableau, PhiCombo};
use nalgebra::DMatrix;

fn perturbed(delta: Rational) -> ExpRkTableau {
    let t = exprk5s8();
    let b8 = t.b(8) + PhiCombo::term(delta, 4, int(1));
    t.with_weight(8, b8).unwrap()
}

fn probes() -> ProbeSet {
    ProbeSet::random(3, 50, 42).unwrap()
}

#[test]
fn exprk5s8_verdict() {
    let report = check(&exprk5s8(), DEFAULT_TOLERANCE, &probes()).unwrap();
    assert_eq!(report.strong_order, 4);
    assert!(report.weakened_order5);
    for id in 1..=7 {
        assert!(report.row(id, Mode::Strong).unwrap().pass);
    }
    assert!((9..=16).any(|id| !report.row(id, Mode::Strong).unwrap().pass));
    assert!(report.row(8, Mode::Weakened).unwrap().residual <= 1e-12);
}

#[test]
fn single_condition_examples() {
    let t = exprk5s8();
    let set = probes();
    let r1 = max_of(&t, &set, 1, Mode::Strong);
    assert!(r1 <= 1e-11, "{r1:e}");
    let r15 = max_of(&t, &set, 15, Mode::Weakened);
    assert!(r15 <= 1e-11, "{r15:e}");
    let r9w = max_of(&t, &set, 9, Mode::Weakened);
    assert!(r9w <= 1e-11, "{r9w:e}");
    assert!(condition_residual(17, &t, &set.probes[0], Mode::Strong).is_err());
    assert!(condition_residual(0, &t, &set.probes[0], Mode::Strong).is_err());
}

fn max_of(t: &ExpRkTableau, set: &ProbeSet, id: u32, mode: Mode) -> f64 {
    set.probes.iter().map(|p| condition_residual(id, t, p, mode).unwrap()).fold(0.0, f64::max)
}

#[test]
fn condition_nine_fails_strongly_above_1e_3() {
    let t = exprk5s8();
    let random = max_of(&t, &probes(), 9, Mode::Strong);
    let structured = max_of(&t, &ProbeSet::structured(42), 9, Mode::Strong);
    let worst = random.max(structured);
    assert!(worst > 1e-4, "{worst:e}");
    assert!(worst > 1e-3, "largest strong residual of condition 9 is {worst:e}");
}

#[test]
fn perturbed_weight_fails_condition_four() {
    let t = perturbed(rat(1, 1000));
    let report = check(&t, DEFAULT_TOLERANCE, &probes()).unwrap();
    let row = report.row(4, Mode::Strong).unwrap();
    assert!(!row.pass);
    let mut all = probes().probes;
    all.extend(ProbeSet::structured(42).probes);
    // psi_4 picks up b_8 c_8^3 / 3! with c_8 = 1
    let expected = all.iter().map(|p| 1e-3 / 6.0 * phi_matrix(4, &p.z).unwrap().amax()).fold(0.0, f64::max);
    assert!((row.residual - expected).abs() <= 1e-9 * expected, "{} vs {expected}", row.residual);
    assert!(!report.weakened_order5);
    assert!(report.strong_order < 4);
}

#[test]
fn exponential_euler_fails_condition_one() {
    let report = check(&exp_euler(), DEFAULT_TOLERANCE, &probes()).unwrap();
    assert!(!report.row(1, Mode::Strong).unwrap().pass);
    assert!(!report.weakened_order5);
    let report = check(&exprk2(), DEFAULT_TOLERANCE, &probes()).unwrap();
    assert_eq!(report.strong_order, 2);
    assert!(!report.row(2, Mode::Strong).unwrap().pass);
}

#[test]
fn structured_probe_layout() {
    let pairs = structured_probes();
    let (z, j) = &pairs[0];
    assert_eq!(z, &DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![-1.0, 1.0])));
    assert_eq!(j, &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]));
    let (_, j3) = pairs.iter().find(|(z, _)| z.nrows() == 3).unwrap();
    assert_eq!(j3 * j3 * j3, DMatrix::identity(3, 3));
    assert_ne!(j3, &DMatrix::identity(3, 3));
    // condition 3 vanishes whenever psi_{2,i} does for every stage
    for p in ProbeSet::structured(1).probes.iter() {
        assert!(condition_residual(3, &exprk5s8(), p, Mode::Strong).unwrap() <= 1e-12);
    }
}

#[test]
fn mode_monotonicity() {
    let mut tableaux = baseline_tableaux();
    tableaux.push(perturbed(rat(1, 1000)));
    let set = probes();
    for t in &tableaux {
        let report = check(t, DEFAULT_TOLERANCE, &set).unwrap();
        let strong_all = (1..=16).all(|id| report.row(id, Mode::Strong).unwrap().pass);
        if strong_all {
            assert!((1..=16).all(|id| report.row(id, Mode::Weakened).unwrap().pass));
        }
        for id in 1..=16 {
            let s = report.row(id, Mode::Strong).unwrap();
            let w = report.row(id, Mode::Weakened).unwrap();
            assert!(!s.pass || w.pass, "{} id={id}", t.name());
        }
    }
}

#[test]
fn residuals_are_linear_in_a_weight_coefficient() {
    let set = probes();
    let one = max_residuals(&perturbed(rat(1, 1000)), &set.probes).unwrap();
    let two = max_residuals(&perturbed(rat(2, 1000)), &set.probes).unwrap();
    for id in [1usize, 2, 4, 8] {
        let (a, b) = (one[0][id - 1], two[0][id - 1]);
        if id == 8 {
            // condition 8 is already violated by the unperturbed method
            continue;
        }
        assert!((b / a - 2.0).abs() <= 1e-6, "id={id}: {a:e} {b:e}");
    }
    // at a single probe the signed change is linear even where the base residual is not zero
    let p: &Probe = &set.probes[3];
    let base = exprk5s8();
    for id in [1u32, 2, 4, 8] {
        let r0 = condition_residual(id, &base, p, Mode::Weakened).unwrap();
        let r1 = condition_residual(id, &perturbed(rat(1, 1000)), p, Mode::Weakened).unwrap();
        let r2 = condition_residual(id, &perturbed(rat(2, 1000)), p, Mode::Weakened).unwrap();
        assert!(r0 <= 1e-12);
        assert!((r2 / r1 - 2.0).abs() <= 1e-6, "id={id}: {r1:e} {r2:e}");
    }
}

#[test]
fn verdicts_do_not_depend_on_probe_count() {
    let mut tableaux = baseline_tableaux();
    tableaux.push(perturbed(rat(1, 1000)));
    for t in &tableaux {
        let small = check(t, DEFAULT_TOLERANCE, &ProbeSet::random(3, 20, 5).unwrap()).unwrap();
        let large = check(t, DEFAULT_TOLERANCE, &ProbeSet::random(3, 200, 6).unwrap()).unwrap();
        let verdicts = |r: &exprk::order_conditions::ConditionReport| r.rows.iter().map(|x| x.pass).collect::<Vec<_>>();
        assert_eq!(verdicts(&small), verdicts(&large), "{}", t.name());
        assert_eq!(small.strong_order, large.strong_order);
    }
}

#[test]
fn scalar_zero_agrees_with_classical_order() {
    let mut tableaux = baseline_tableaux();
    tableaux.push(perturbed(rat(1, 1000)));
    for t in &tableaux {
        let classical = classical_limit(t).order().min(5);
        assert_eq!(scalar_zero_order(t).unwrap(), classical, "{}", t.name());
    }
    let o = CONDITION_ORDER;
    assert_eq!(o.iter().filter(|&&k| k == 5).count(), 9);
}

#[test]
fn report_serialization() {
    let report = check(&exprk5s8(), DEFAULT_TOLERANCE, &probes()).unwrap();
    let csv = report.to_csv();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("id,mode,residual,pass"));
    assert_eq!(lines.count(), 32);
    let table = report.to_table();
    assert!(table.contains("expRK5s8"));
}
