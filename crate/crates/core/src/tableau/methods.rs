use std::collections::BTreeMap;

use crate::rational::{int, rat, Rational};

use super::{ExpRkTableau, PhiCombo};

fn p(alpha: Rational, j: u32, scale: Rational) -> PhiCombo {
    PhiCombo::term(alpha, j, scale)
}

/// Exponential Euler: `u_{n+1} = u_n + h phi_1(hA) F(u_n)`.
pub fn exp_euler() -> ExpRkTableau {
    ExpRkTableau::new("expEuler", vec![int(0)], BTreeMap::new(), BTreeMap::new())
        .expect("exponential Euler tableau is well formed")
}

/// Two-stage second-order method with `c_2 = 1/2` and `b_2 = 2 phi_2`.
pub fn exprk2() -> ExpRkTableau {
    let mut b = BTreeMap::new();
    b.insert(2, p(int(2), 2, int(1)));
    ExpRkTableau::new("expRK2s2", vec![int(0), rat(1, 2)], BTreeMap::new(), b)
        .expect("two-stage tableau is well formed")
}

pub fn baseline_tableaux() -> Vec<ExpRkTableau> {
    vec![exp_euler(), exprk2()]
}

/// Weights `b_6, b_7, b_8` (all other `b_i = 0`) solving the three bushy
/// conditions `sum b_i c_i^{k-1}/(k-1)! = phi_k`, `k = 2, 3, 4`, for
/// distinct positive nodes. Each weight is a combination of unscaled
/// `phi_2, phi_3, phi_4`.
pub fn weights_for_nodes(c6: Rational, c7: Rational, c8: Rational) -> [PhiCombo; 3] {
    let one = int(1);
    let combo = |k4: Rational, k3: Rational, k2: Rational, den: Rational| {
        p(k2 / den, 2, one) + p(k3 / den, 3, one) + p(k4 / den, 4, one)
    };
    let b6 = combo(int(6), -int(2) * (c7 + c8), c7 * c8, c6 * (c6 - c7) * (c6 - c8));
    let b7 = combo(-int(6), int(2) * (c6 + c8), -c6 * c8, c7 * (c6 - c7) * (c7 - c8));
    let b8 = combo(int(6), -int(2) * (c6 + c7), c6 * c7, c8 * (c6 - c8) * (c7 - c8));
    [b6, b7, b8]
}

/// The eight-stage fifth-order method `expRK5s8`, with the free parameters
/// `a_42 = a_84 = 0`. The auxiliary combinations used to state `a_7*` and
/// `a_8*` are expanded so that every entry is a flat phi-combination.
pub fn exprk5s8() -> ExpRkTableau {
    let c = vec![int(0), rat(1, 2), rat(1, 2), rat(1, 4), rat(1, 2), rat(1, 5), rat(2, 3), int(1)];
    // phi_{j,i} = phi_j(c_i z)
    let ph = |j: u32, i: usize| p(int(1), j, c[i - 1]);

    let a64 = rat(8, 25) * ph(2, 6) - rat(32, 125) * ph(3, 6);
    let bar = rat(5, 32) * &a64 - rat(1, 28) * ph(2, 6) + rat(36, 175) * ph(2, 7) - rat(48, 25) * ph(3, 7)
        + rat(6, 175) * ph(4, 6)
        + rat(192, 35) * ph(4, 7)
        + int(6) * ph(4, 8);

    let mut a = BTreeMap::new();
    a.insert((3, 2), rat(1, 2) * ph(2, 3));
    a.insert((4, 3), rat(1, 8) * ph(2, 4));
    a.insert((5, 3), rat(-1, 2) * ph(2, 5) + int(2) * ph(3, 5));
    a.insert((5, 4), int(2) * ph(2, 5) - int(4) * ph(3, 5));
    a.insert((6, 4), a64.clone());
    a.insert((6, 5), rat(2, 25) * ph(2, 6) - rat(1, 2) * &a64);
    a.insert((7, 4), rat(-125, 162) * &a64);
    a.insert((7, 5), rat(125, 1944) * &a64 - rat(16, 27) * ph(2, 7) + rat(320, 81) * ph(3, 7));
    a.insert((7, 6), rat(3125, 3888) * &a64 + rat(100, 27) * ph(2, 7) - rat(800, 81) * ph(3, 7));
    a.insert((8, 5), rat(208, 3) * ph(3, 8) - rat(16, 3) * ph(2, 8) - int(40) * &bar);
    a.insert((8, 6), rat(-250, 3) * ph(3, 8) + rat(250, 21) * ph(2, 8) + rat(250, 7) * &bar);
    a.insert((8, 7), int(-27) * ph(3, 8) + rat(27, 14) * ph(2, 8) + rat(135, 7) * &bar);

    let one = int(1);
    let mut b = BTreeMap::new();
    b.insert(6, p(rat(125, 14), 2, one) + p(rat(-625, 14), 3, one) + p(rat(1125, 14), 4, one));
    b.insert(7, p(rat(-27, 14), 2, one) + p(rat(162, 7), 3, one) + p(rat(-405, 7), 4, one));
    b.insert(8, p(rat(1, 2), 2, one) + p(rat(-13, 2), 3, one) + p(rat(45, 2), 4, one));

    ExpRkTableau::new("expRK5s8", c, a, b).expect("expRK5s8 tableau is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tableau::{eval_combo, psi_stage_combo, psi_weight, AtZero, PhiTerm, ScalarPhi};
    use num_traits::Zero;

    #[test]
    fn b8_terms() {
        let t = exprk5s8();
        let expected = vec![
            PhiTerm { alpha: rat(1, 2), j: 2, scale: int(1) },
            PhiTerm { alpha: rat(-13, 2), j: 3, scale: int(1) },
            PhiTerm { alpha: rat(45, 2), j: 4, scale: int(1) },
        ];
        assert_eq!(t.b(8).terms(), expected.as_slice());
    }

    #[test]
    fn node_relation() {
        let t = exprk5s8();
        let (c6, c7) = (t.c(6), t.c(7));
        assert_eq!(int(10) * c6 * c7, int(5) * (c6 + c7) - int(3));
    }

    #[test]
    fn generic_weights_reproduce_shipped_ones() {
        let t = exprk5s8();
        let [b6, b7, b8] = weights_for_nodes(rat(1, 5), rat(2, 3), int(1));
        assert_eq!(b6, t.b(6));
        assert_eq!(b7, t.b(7));
        assert_eq!(b8, t.b(8));
        assert_eq!(
            b6.terms(),
            &[
                PhiTerm { alpha: rat(125, 14), j: 2, scale: int(1) },
                PhiTerm { alpha: rat(-625, 14), j: 3, scale: int(1) },
                PhiTerm { alpha: rat(1125, 14), j: 4, scale: int(1) },
            ]
        );
    }

    #[test]
    fn b6_at_zero() {
        assert_eq!(exprk5s8().b(6).at_zero(), rat(125, 336));
    }

    #[test]
    fn psi5_vanishes_at_zero_exactly() {
        assert!(psi_weight(5, &exprk5s8(), &AtZero).unwrap().is_zero());
    }

    #[test]
    fn construction_identities_are_exact() {
        let t = exprk5s8();
        for i in [6, 7, 8] {
            assert!(psi_stage_combo(2, i, &t).unwrap().is_zero(), "psi_2,{i}");
            assert!(psi_stage_combo(3, i, &t).unwrap().is_zero(), "psi_3,{i}");
        }
        for (j, i) in [(2, 3), (2, 4), (2, 5), (3, 5)] {
            assert!(psi_stage_combo(j, i, &t).unwrap().is_zero(), "psi_{j},{i}");
        }
        let lhs = t.b(6).at_zero() * t.a(6, 4) + t.b(7).at_zero() * t.a(7, 4) + t.b(8).at_zero() * t.a(8, 4);
        assert!(lhs.is_zero());
        let cond9 = t.b(6).at_zero() * psi_stage_combo(4, 6, &t).unwrap()
            + t.b(7).at_zero() * psi_stage_combo(4, 7, &t).unwrap()
            + t.b(8).at_zero() * psi_stage_combo(4, 8, &t).unwrap();
        assert!(cond9.is_zero());
    }

    #[test]
    fn exprk2_condition_one() {
        let t = exprk2();
        for &z in &[-3.0, -0.2, 0.0, 0.9] {
            let lhs = eval_combo(&t.b(2), &ScalarPhi(z)).unwrap() * 0.5;
            assert!((lhs - crate::phi::phi(2, z)).abs() < 1e-15);
        }
    }

    #[test]
    fn exp_euler_shape() {
        let t = exp_euler();
        assert_eq!(t.stages(), 1);
        assert_eq!(t.a_entries().count(), 0);
        assert_eq!(t.b_entries().count(), 0);
    }
}
