use num_traits::{One, Zero};

use crate::rational::{int, rat, Rational};

use super::ExpRkTableau;

/// A classical explicit Runge-Kutta tableau in exact arithmetic (0-based,
/// full first column).
#[derive(Debug, Clone, PartialEq)]
pub struct ButcherTableau {
    pub c: Vec<Rational>,
    pub a: Vec<Vec<Rational>>,
    pub b: Vec<Rational>,
}

/// The classical method obtained by setting `A = 0`, i.e. evaluating every
/// coefficient at `z = 0`. The first column and `b_1` are restored from the
/// phi_1 terms: `a_i1 = c_i - sum_j a_ij(0)`, `b_1 = 1 - sum_i b_i(0)`.
pub fn classical_limit(t: &ExpRkTableau) -> ButcherTableau {
    let s = t.stages();
    let mut a = vec![vec![Rational::zero(); s]; s];
    let mut b = vec![Rational::zero(); s];
    for i in 2..=s {
        for j in 2..i {
            a[i - 1][j - 1] = t.a(i, j).at_zero();
        }
        let rest: Rational = a[i - 1][1..].iter().sum();
        a[i - 1][0] = t.c(i) - rest;
        b[i - 1] = t.b(i).at_zero();
    }
    let rest: Rational = b[1..].iter().sum();
    b[0] = Rational::one() - rest;
    ButcherTableau { c: t.nodes().to_vec(), a, b }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalCondition {
    pub order: u32,
    pub label: &'static str,
    /// `sum - 1/gamma`
    pub residual: Rational,
}

impl ButcherTableau {
    pub fn stages(&self) -> usize {
        self.c.len()
    }

    fn mv(&self, v: &[Rational]) -> Vec<Rational> {
        self.a.iter().map(|row| row.iter().zip(v).map(|(x, y)| x * y).sum()).collect()
    }

    fn weigh(&self, v: &[Rational]) -> Rational {
        self.b.iter().zip(v).map(|(x, y)| x * y).sum()
    }

    /// Highest `p <= 5` with all classical conditions of order `<= p` exact.
    pub fn order(&self) -> u32 {
        let res = classical_order_residuals(self);
        let mut p = 0;
        for q in 1..=5 {
            if res.iter().filter(|r| r.order == q).all(|r| r.residual.is_zero()) {
                p = q;
            } else {
                break;
            }
        }
        p
    }
}

fn had(u: &[Rational], v: &[Rational]) -> Vec<Rational> {
    u.iter().zip(v).map(|(x, y)| x * y).collect()
}

/// The 17 classical order conditions up to order five (one per rooted
/// tree), assuming the row-sum convention `c = A 1`.
pub fn classical_order_residuals(bt: &ButcherTableau) -> Vec<ClassicalCondition> {
    let ones = vec![int(1); bt.stages()];
    let c = bt.c.clone();
    let c2 = had(&c, &c);
    let c3 = had(&c2, &c);
    let c4 = had(&c3, &c);
    let ac = bt.mv(&c);
    let ac2 = bt.mv(&c2);
    let ac3 = bt.mv(&c3);
    let aac = bt.mv(&ac);
    let aac2 = bt.mv(&ac2);
    let aaac = bt.mv(&aac);
    let a_cac = bt.mv(&had(&c, &ac));

    let rows: Vec<(u32, &'static str, Vec<Rational>, Rational)> = vec![
        (1, "b", ones, int(1)),
        (2, "b c", c.clone(), rat(1, 2)),
        (3, "b c^2", c2.clone(), rat(1, 3)),
        (3, "b A c", ac.clone(), rat(1, 6)),
        (4, "b c^3", c3.clone(), rat(1, 4)),
        (4, "b (c . A c)", had(&c, &ac), rat(1, 8)),
        (4, "b A c^2", ac2.clone(), rat(1, 12)),
        (4, "b A A c", aac.clone(), rat(1, 24)),
        (5, "b c^4", c4, rat(1, 5)),
        (5, "b (c^2 . A c)", had(&c2, &ac), rat(1, 10)),
        (5, "b (A c)^2", had(&ac, &ac), rat(1, 20)),
        (5, "b (c . A c^2)", had(&c, &ac2), rat(1, 15)),
        (5, "b (c . A A c)", had(&c, &aac), rat(1, 30)),
        (5, "b A c^3", ac3, rat(1, 20)),
        (5, "b A (c . A c)", a_cac, rat(1, 40)),
        (5, "b A A c^2", aac2, rat(1, 60)),
        (5, "b A A A c", aaac, rat(1, 120)),
    ];
    rows.into_iter()
        .map(|(order, label, v, target)| ClassicalCondition { order, label, residual: bt.weigh(&v) - target })
        .collect()
}
