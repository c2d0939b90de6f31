//! Fixed-step driver for the reformulated explicit exponential Runge-Kutta
//! scheme, applied to `u' = A u + g(t, u)`.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use nalgebra::{DMatrix, DVector};
use num_traits::{One, Zero};

use crate::error::{ExpRkError, Result};
use crate::operator::LinearOperator;
use crate::phi::{PhiCache, PhiRequest};
use crate::rational::{to_f64, Rational};
use crate::tableau::{eval_combo, ExpRkTableau};

pub type Nonlinearity = Arc<dyn Fn(f64, &DVector<f64>) -> DVector<f64> + Send + Sync>;
pub type ExactSolution = Arc<dyn Fn(f64) -> DVector<f64> + Send + Sync>;

/// `u' = A u + g(t, u)`, `u(t0) = u0`, on `[t0, t_end]`.
#[derive(Clone)]
pub struct SemilinearProblem {
    pub name: String,
    pub a: LinearOperator,
    pub g: Nonlinearity,
    pub u0: DVector<f64>,
    pub t0: f64,
    pub t_end: f64,
    pub exact: Option<ExactSolution>,
}

impl fmt::Debug for SemilinearProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SemilinearProblem")
            .field("name", &self.name)
            .field("dim", &self.a.dim())
            .field("t0", &self.t0)
            .field("t_end", &self.t_end)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl SemilinearProblem {
    pub fn new(
        name: impl Into<String>,
        a: LinearOperator,
        g: Nonlinearity,
        u0: DVector<f64>,
        t0: f64,
        t_end: f64,
    ) -> Result<Self> {
        if u0.len() != a.dim() {
            return Err(ExpRkError::DimensionMismatch { expected: a.dim(), found: u0.len() });
        }
        if !(t0 < t_end) {
            return Err(ExpRkError::InvalidArgument(format!("need t0 < T, got {t0} >= {t_end}")));
        }
        Ok(Self { name: name.into(), a, g, u0, t0, t_end, exact: None })
    }

    pub fn with_exact(mut self, exact: ExactSolution) -> Self {
        self.exact = Some(exact);
        self
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    /// `F(t, u) = A u + g(t, u)`
    pub fn rhs(&self, t: f64, u: &DVector<f64>) -> DVector<f64> {
        self.a.apply(u) + (self.g)(t, u)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepRecord {
    pub t: f64,
    pub u: DVector<f64>,
    /// Internal stages `U_2..U_s`, only filled by [`step_verbose`].
    pub stages: Option<Vec<DVector<f64>>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Record {
    Final,
    Trajectory,
}

/// Every `(j, scale)` a tableau needs: the coefficient terms, `phi_1` at each
/// nonzero node, and `phi_1` at scale 1.
pub fn required_requests(t: &ExpRkTableau) -> BTreeSet<PhiRequest> {
    let mut set: BTreeSet<PhiRequest> = t
        .a_entries()
        .map(|(_, f)| f)
        .chain(t.b_entries().map(|(_, f)| f))
        .flat_map(|f| f.terms().iter().map(|term| PhiRequest::new(term.j, term.scale)))
        .collect();
    for (i, c) in t.nodes().iter().enumerate() {
        if i >= 1 && !c.is_zero() {
            set.insert(PhiRequest::new(1, *c));
        }
    }
    set.insert(PhiRequest::new(1, Rational::one()));
    set
}

/// Coefficient matrices of one method for a fixed `(A, h)`, assembled from a
/// [`PhiCache`]. Assembly only forms linear combinations of cached matrices.
#[derive(Debug, Clone)]
pub struct StepOperators {
    h: f64,
    nodes: Vec<f64>,
    /// `c_i phi_1(c_i hA)` for stages 2..=s (index i-2)
    stage_phi1: Vec<DMatrix<f64>>,
    /// `(i, j, a_ij(hA))`, nonzero entries only
    a: Vec<(usize, usize, DMatrix<f64>)>,
    /// `(i, b_i(hA))`
    b: Vec<(usize, DMatrix<f64>)>,
    phi1: DMatrix<f64>,
    stages: usize,
}

impl StepOperators {
    pub fn assemble(t: &ExpRkTableau, cache: &PhiCache) -> Result<Self> {
        let s = t.stages();
        let mut stage_phi1 = Vec::with_capacity(s.saturating_sub(1));
        for i in 2..=s {
            let c = t.c(i);
            stage_phi1.push(cache.get(1, c)? * to_f64(&c));
        }
        let a = t
            .a_entries()
            .map(|(&(i, j), f)| Ok((i, j, eval_combo(f, cache)?)))
            .collect::<Result<Vec<_>>>()?;
        let b = t.b_entries().map(|(&i, f)| Ok((i, eval_combo(f, cache)?))).collect::<Result<Vec<_>>>()?;
        Ok(Self {
            h: cache.h(),
            nodes: t.nodes().iter().map(to_f64).collect(),
            stage_phi1,
            a,
            b,
            phi1: cache.get(1, Rational::one())?.clone(),
            stages: s,
        })
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    fn advance(
        &self,
        pb: &SemilinearProblem,
        tn: f64,
        un: &DVector<f64>,
        keep_stages: bool,
    ) -> Result<(DVector<f64>, Option<Vec<DVector<f64>>>)> {
        let h = self.h;
        let s = self.stages;
        let g_n = (pb.g)(tn, un);
        let f_n = pb.a.apply(un) + &g_n;
        // d[i] = D_{n,i+2}
        let mut d: Vec<DVector<f64>> = Vec::with_capacity(s.saturating_sub(1));
        let mut kept = keep_stages.then(Vec::new);
        for i in 2..=s {
            let mut stage = un + (&self.stage_phi1[i - 2] * &f_n) * h;
            for (_, j, aij) in self.a.iter().filter(|(row, _, _)| *row == i) {
                stage.gemv(h, aij, &d[j - 2], 1.0);
            }
            if stage.iter().any(|x| !x.is_finite()) {
                return Err(ExpRkError::NonFinite(format!("stage {i}")));
            }
            d.push((pb.g)(tn + self.nodes[i - 1] * h, &stage) - &g_n);
            if let Some(k) = kept.as_mut() {
                k.push(stage);
            }
        }
        let mut next = un + (&self.phi1 * &f_n) * h;
        for (i, bi) in &self.b {
            next.gemv(h, bi, &d[i - 2], 1.0);
        }
        if next.iter().any(|x| !x.is_finite()) {
            return Err(ExpRkError::NonFinite("solution".into()));
        }
        Ok((next, kept))
    }
}

fn check_cache(pb: &SemilinearProblem, cache: &PhiCache, h: f64) -> Result<()> {
    if !cache.matches(&pb.a, h) {
        return Err(ExpRkError::CacheMismatch);
    }
    Ok(())
}

/// One step from `(tn, un)` with the step size the cache was built for.
pub fn step(
    pb: &SemilinearProblem,
    t: &ExpRkTableau,
    cache: &PhiCache,
    tn: f64,
    un: &DVector<f64>,
) -> Result<DVector<f64>> {
    check_cache(pb, cache, cache.h())?;
    if un.len() != pb.dim() {
        return Err(ExpRkError::DimensionMismatch { expected: pb.dim(), found: un.len() });
    }
    let ops = StepOperators::assemble(t, cache)?;
    Ok(ops.advance(pb, tn, un, false)?.0)
}

/// Like [`step`], also returning the internal stages `U_2..U_s`.
pub fn step_verbose(
    pb: &SemilinearProblem,
    t: &ExpRkTableau,
    cache: &PhiCache,
    tn: f64,
    un: &DVector<f64>,
) -> Result<StepRecord> {
    check_cache(pb, cache, cache.h())?;
    let ops = StepOperators::assemble(t, cache)?;
    let (u, stages) = ops.advance(pb, tn, un, true)?;
    Ok(StepRecord { t: tn + cache.h(), u, stages })
}

/// Integrates with `n_steps` constant steps `h = (T - t0)/n_steps`. The phi
/// matrices are computed once up front.
pub fn integrate(
    pb: &SemilinearProblem,
    t: &ExpRkTableau,
    n_steps: usize,
    record: Record,
) -> Result<Vec<StepRecord>> {
    if n_steps == 0 {
        return Err(ExpRkError::InvalidArgument("n_steps must be >= 1".into()));
    }
    let h = (pb.t_end - pb.t0) / n_steps as f64;
    let cache = PhiCache::build(&pb.a, h, &required_requests(t))?;
    integrate_with_cache(pb, t, &cache, n_steps, record)
}

/// [`integrate`] with a caller-supplied cache for `(pb.a, h)`.
pub fn integrate_with_cache(
    pb: &SemilinearProblem,
    t: &ExpRkTableau,
    cache: &PhiCache,
    n_steps: usize,
    record: Record,
) -> Result<Vec<StepRecord>> {
    let h = (pb.t_end - pb.t0) / n_steps as f64;
    check_cache(pb, cache, h)?;
    let ops = StepOperators::assemble(t, cache)?;
    let mut u = pb.u0.clone();
    let mut out = Vec::new();
    if record == Record::Trajectory {
        out.push(StepRecord { t: pb.t0, u: u.clone(), stages: None });
    }
    for n in 0..n_steps {
        let tn = pb.t0 + n as f64 * h;
        u = match ops.advance(pb, tn, &u, false) {
            Ok((next, _)) => next,
            Err(ExpRkError::NonFinite(_)) => return Err(ExpRkError::BlowUp { step: n }),
            Err(e) => return Err(e),
        };
        let t_next = if n + 1 == n_steps { pb.t_end } else { pb.t0 + (n + 1) as f64 * h };
        if record == Record::Trajectory {
            out.push(StepRecord { t: t_next, u: u.clone(), stages: None });
        }
    }
    if record == Record::Final {
        out.push(StepRecord { t: pb.t_end, u, stages: None });
    }
    Ok(out)
}

/// Final state only.
pub fn solve(pb: &SemilinearProblem, t: &ExpRkTableau, n_steps: usize) -> Result<DVector<f64>> {
    let mut rec = integrate(pb, t, n_steps, Record::Final)?;
    Ok(rec.pop().expect("final record").u)
}
