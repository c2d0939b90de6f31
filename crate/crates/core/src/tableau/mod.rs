//! Exponential Runge-Kutta tableaux whose coefficients are linear
//! combinations of scaled phi functions.

mod classical;
mod combo;
mod eval;
mod format;
mod methods;

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::error::{ExpRkError, Result};
use crate::rational::{factorial, pow, Rational};

pub use classical::{classical_limit, classical_order_residuals, ButcherTableau, ClassicalCondition};
pub use combo::{PhiCombo, PhiTerm};
pub use eval::{eval_combo, AtZero, MatrixPhi, PhiEvaluator, ScalarPhi};
pub use methods::{baseline_tableaux, exp_euler, exprk2, exprk5s8, weights_for_nodes};

/// An explicit exponential Runge-Kutta method in the reformulated form
///
/// ```text
/// U_i     = u + c_i h phi_1(c_i hA) F(u) + h sum_{j=2}^{i-1} a_ij(hA) D_j
/// u_{n+1} = u + h phi_1(hA) F(u) + h sum_{i=2}^{s} b_i(hA) D_i
/// D_i     = g(U_i) - g(u)
/// ```
///
/// Stages are 1-based; stage 1 has `c_1 = 0` and no stored coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpRkTableau {
    name: String,
    c: Vec<Rational>,
    a: BTreeMap<(usize, usize), PhiCombo>,
    b: BTreeMap<usize, PhiCombo>,
}

impl ExpRkTableau {
    pub fn new(
        name: impl Into<String>,
        c: Vec<Rational>,
        a: BTreeMap<(usize, usize), PhiCombo>,
        b: BTreeMap<usize, PhiCombo>,
    ) -> Result<Self> {
        let s = c.len();
        let invalid = |m: String| Err(ExpRkError::InvalidArgument(m));
        if s == 0 {
            return invalid("tableau needs at least one stage".into());
        }
        if !c[0].is_zero() {
            return invalid("c_1 must be 0".into());
        }
        if s >= 2 && c[1].is_zero() {
            return invalid("c_2 must be nonzero".into());
        }
        if let Some(ci) = c.iter().find(|ci| **ci < Rational::zero() || **ci > Rational::one()) {
            return invalid(format!("node {ci} outside [0, 1]"));
        }
        let allowed: BTreeSet<Rational> = c.iter().copied().chain(std::iter::once(Rational::one())).collect();
        let check_combo = |f: &PhiCombo, what: &str| -> Result<()> {
            for t in f.terms() {
                if t.j == 0 {
                    return Err(ExpRkError::InvalidArgument(format!("{what}: phi index must be >= 1")));
                }
                if !allowed.contains(&t.scale) || t.scale.is_zero() {
                    return Err(ExpRkError::InvalidArgument(format!("{what}: scale {} is not a node", t.scale)));
                }
            }
            Ok(())
        };
        for (&(i, j), f) in &a {
            if !(2 <= j && j < i && i <= s) {
                return invalid(format!("a_({i},{j}) is not strictly lower triangular in stages 2..={s}"));
            }
            check_combo(f, &format!("a_({i},{j})"))?;
        }
        for (&i, f) in &b {
            if !(2..=s).contains(&i) {
                return Err(ExpRkError::IndexOutOfRange { index: i, max: s });
            }
            check_combo(f, &format!("b_{i}"))?;
        }
        let a = a.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        let b = b.into_iter().filter(|(_, f)| !f.is_zero()).collect();
        Ok(Self { name: name.into(), c, a, b })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stages(&self) -> usize {
        self.c.len()
    }

    /// Node `c_i`, 1-based.
    pub fn c(&self, i: usize) -> Rational {
        self.c[i - 1]
    }

    pub fn nodes(&self) -> &[Rational] {
        &self.c
    }

    /// `a_ij`, 1-based; zero when not stored.
    pub fn a(&self, i: usize, j: usize) -> PhiCombo {
        self.a.get(&(i, j)).cloned().unwrap_or_default()
    }

    /// `b_i`, 1-based; zero when not stored.
    pub fn b(&self, i: usize) -> PhiCombo {
        self.b.get(&i).cloned().unwrap_or_default()
    }

    pub fn a_entries(&self) -> impl Iterator<Item = (&(usize, usize), &PhiCombo)> {
        self.a.iter()
    }

    pub fn b_entries(&self) -> impl Iterator<Item = (&usize, &PhiCombo)> {
        self.b.iter()
    }

    pub fn max_phi_index(&self) -> u32 {
        self.a.values().chain(self.b.values()).flat_map(|f| f.terms()).map(|t| t.j).max().unwrap_or(1)
    }

    /// Every distinct scale appearing in a coefficient, plus the nonzero nodes and 1.
    pub fn scales(&self) -> BTreeSet<Rational> {
        self.a
            .values()
            .chain(self.b.values())
            .flat_map(|f| f.terms().iter().map(|t| t.scale))
            .chain(self.c.iter().copied().filter(|c| !c.is_zero()))
            .chain(std::iter::once(Rational::one()))
            .collect()
    }

    /// Replaces `b_i`; used to build perturbed variants in studies.
    pub fn with_weight(&self, i: usize, f: PhiCombo) -> Result<Self> {
        let mut b = self.b.clone();
        b.insert(i, f);
        Self::new(format!("{}*", self.name), self.c.clone(), self.a.clone(), b)
    }
}

fn check_psi_index(j: u32) -> Result<()> {
    if j < 2 {
        return Err(ExpRkError::InvalidArgument(format!("psi index must be >= 2, got {j}")));
    }
    Ok(())
}

/// `psi_j(Z) = sum_{i=2}^s b_i(Z) c_i^{j-1}/(j-1)! - phi_j(Z)`.
pub fn psi_weight<E: PhiEvaluator>(j: u32, t: &ExpRkTableau, ev: &E) -> Result<E::Value> {
    check_psi_index(j)?;
    let mut acc = ev.zero();
    for (&i, bi) in t.b_entries() {
        let w = pow(&t.c(i), j - 1) / factorial(j - 1);
        let v = eval_combo(bi, ev)?;
        ev.axpy(&mut acc, w, &v);
    }
    let p = ev.phi(j, Rational::one())?;
    ev.axpy(&mut acc, -Rational::one(), &p);
    Ok(acc)
}

/// `psi_{j,i}(Z) = sum_{k=2}^{i-1} a_ik(Z) c_k^{j-1}/(j-1)! - c_i^j phi_j(c_i Z)`.
pub fn psi_stage<E: PhiEvaluator>(j: u32, i: usize, t: &ExpRkTableau, ev: &E) -> Result<E::Value> {
    check_psi_index(j)?;
    let s = t.stages();
    if i < 2 || i > s {
        return Err(ExpRkError::IndexOutOfRange { index: i, max: s });
    }
    let mut acc = ev.zero();
    for k in 2..i {
        let aik = t.a(i, k);
        if aik.is_zero() {
            continue;
        }
        let w = pow(&t.c(k), j - 1) / factorial(j - 1);
        let v = eval_combo(&aik, ev)?;
        ev.axpy(&mut acc, w, &v);
    }
    let ci = t.c(i);
    if !ci.is_zero() {
        let p = ev.phi(j, ci)?;
        ev.axpy(&mut acc, -pow(&ci, j), &p);
    }
    Ok(acc)
}

/// Symbolic `psi_{j,i}` as a flat combination.
pub fn psi_stage_combo(j: u32, i: usize, t: &ExpRkTableau) -> Result<PhiCombo> {
    check_psi_index(j)?;
    let s = t.stages();
    if i < 2 || i > s {
        return Err(ExpRkError::IndexOutOfRange { index: i, max: s });
    }
    let mut acc = PhiCombo::zero();
    for k in 2..i {
        acc = acc + (pow(&t.c(k), j - 1) / factorial(j - 1)) * t.a(i, k);
    }
    let ci = t.c(i);
    if !ci.is_zero() {
        acc = acc - PhiCombo::term(pow(&ci, j), j, ci);
    }
    Ok(acc)
}
