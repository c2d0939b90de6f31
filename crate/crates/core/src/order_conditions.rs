//! Numerical verification of the sixteen stiff order conditions (up to
//! order five) for explicit exponential Runge-Kutta methods.
//!
//! Each condition is an identity in arbitrary square matrices `Z, J, K, L`
//! and a bilinear map `B`. It is checked by evaluating its left-hand side
//! minus right-hand side on probe matrices and taking the max-abs entry.
//! Passing on every probe is the verdict; a finite probe set can only
//! refute an identity, not prove it.

use std::fmt;

use nalgebra::DMatrix;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{ExpRkError, Result};
use crate::rational::{to_f64, Rational};
use crate::tableau::{eval_combo, psi_stage, psi_weight, AtZero, ExpRkTableau, MatrixPhi};

pub const DEFAULT_TOLERANCE: f64 = 1e-9;
pub const DEFAULT_DIM: usize = 3;
pub const DEFAULT_PROBES: usize = 50;

/// Order each condition belongs to, indexed by `id - 1`.
pub const CONDITION_ORDER: [u32; 16] = [2, 3, 3, 4, 4, 4, 4, 5, 5, 5, 5, 5, 5, 5, 5, 5];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    Strong,
    /// Condition 8 at `Z = 0`; conditions 9-16 with the scalars `b_i(0)`
    /// in place of `b_i(Z)`.
    Weakened,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Strong => "strong",
            Mode::Weakened => "weakened",
        })
    }
}

/// A bilinear map `B(u, v)_r = sum_{p,q} T[r][p][q] u_p v_q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bilinear {
    dim: usize,
    /// row-major `T[r][p][q]`
    coeffs: Vec<f64>,
}

impl Bilinear {
    pub fn new(dim: usize, coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.len() != dim * dim * dim {
            return Err(ExpRkError::DimensionMismatch { expected: dim * dim * dim, found: coeffs.len() });
        }
        Ok(Self { dim, coeffs })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Applies `B` to matching columns of `u` and `v`.
    pub fn apply_columns(&self, u: &DMatrix<f64>, v: &DMatrix<f64>) -> DMatrix<f64> {
        let d = self.dim;
        DMatrix::from_fn(d, u.ncols(), |r, col| {
            let mut acc = 0.0;
            for p in 0..d {
                for q in 0..d {
                    acc += self.coeffs[(r * d + p) * d + q] * u[(p, col)] * v[(q, col)];
                }
            }
            acc
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Probe {
    pub z: DMatrix<f64>,
    pub j: DMatrix<f64>,
    pub k: DMatrix<f64>,
    pub l: DMatrix<f64>,
    pub b: Bilinear,
}

impl Probe {
    pub fn new(z: DMatrix<f64>, j: DMatrix<f64>, k: DMatrix<f64>, l: DMatrix<f64>, b: Bilinear) -> Result<Self> {
        let d = z.nrows();
        for m in [&z, &j, &k, &l] {
            if m.nrows() != d || m.ncols() != d {
                return Err(ExpRkError::DimensionMismatch { expected: d, found: m.ncols().max(m.nrows()) });
            }
            if m.iter().any(|x| !x.is_finite()) {
                return Err(ExpRkError::NonFinite("probe matrix".into()));
            }
        }
        if b.dim() != d {
            return Err(ExpRkError::DimensionMismatch { expected: d, found: b.dim() });
        }
        Ok(Self { z, j, k, l, b })
    }

    pub fn dim(&self) -> usize {
        self.z.nrows()
    }

    /// Entries i.i.d. uniform on `[-1, 1]`.
    pub fn random<R: Rng>(dim: usize, rng: &mut R) -> Self {
        let mut m = || DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..=1.0));
        let (z, j, k, l) = (m(), m(), m(), m());
        let b = Bilinear { dim, coeffs: (0..dim * dim * dim).map(|_| rng.gen_range(-1.0..=1.0)).collect() };
        Self { z, j, k, l, b }
    }

    /// `Z = 0` as a 1x1 matrix with unit `J, K, L, B`: reduces every
    /// condition to its classical (non-stiff) form.
    pub fn scalar_zero() -> Self {
        let one = DMatrix::from_element(1, 1, 1.0);
        Self {
            z: DMatrix::zeros(1, 1),
            j: one.clone(),
            k: one.clone(),
            l: one,
            b: Bilinear { dim: 1, coeffs: vec![1.0] },
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProbeSet {
    pub seed: u64,
    pub probes: Vec<Probe>,
}

impl ProbeSet {
    pub fn random(dim: usize, count: usize, seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(ExpRkError::InvalidArgument(format!("probe dimension must be >= 2, got {dim}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Ok(Self { seed, probes: (0..count).map(|_| Probe::random(dim, &mut rng)).collect() })
    }

    /// The structured `(Z, J)` families, with `K = L = J` and a seeded
    /// random `B` of matching dimension.
    pub fn structured(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let probes = structured_probes()
            .into_iter()
            .map(|(z, j)| {
                let d = z.nrows();
                let b = Bilinear { dim: d, coeffs: (0..d * d * d).map(|_| rng.gen_range(-1.0..=1.0)).collect() };
                Probe { z, k: j.clone(), l: j.clone(), j, b }
            })
            .collect();
        Self { seed, probes }
    }

    pub fn len(&self) -> usize {
        self.probes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probes.is_empty()
    }
}

/// `(Z, J)` pairs that separate the arguments of the phi functions:
/// `Z = diag(l, m)` with the swap `J`, then `Z = diag(l, m, n)` with the
/// cyclic permutation `J` (`J^3 = I`). The first pair is `diag(-1, 1)`.
pub fn structured_probes() -> Vec<(DMatrix<f64>, DMatrix<f64>)> {
    const GRID: [f64; 4] = [-10.0, -1.0, 0.0, 1.0];
    let swap = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let cyclic = DMatrix::from_row_slice(3, 3, &[0.0, 1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0]);
    let diag = |v: &[f64]| DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(v));

    let mut out = vec![(diag(&[-1.0, 1.0]), swap.clone())];
    for &l in &GRID {
        for &m in &GRID {
            if (l, m) != (-1.0, 1.0) {
                out.push((diag(&[l, m]), swap.clone()));
            }
        }
    }
    for &l in &GRID {
        for &m in &GRID {
            for &n in &GRID {
                out.push((diag(&[l, m, n]), cyclic.clone()));
            }
        }
    }
    out
}

/// Coefficient matrices of one tableau at one probe, shared by all sixteen
/// residuals.
struct ProbeContext<'a> {
    t: &'a ExpRkTableau,
    probe: &'a Probe,
    c: Vec<f64>,
    /// b_i(Z), index i-2
    b: Vec<DMatrix<f64>>,
    b0: Vec<f64>,
    /// a_ij(Z) as (i, j, matrix)
    a: Vec<(usize, usize, DMatrix<f64>)>,
    /// psi_{j,i}(Z) for j = 2, 3, 4 (outer index j-2), inner index i-2
    psi: [Vec<DMatrix<f64>>; 3],
    /// psi_j(Z) for j = 2..=5, index j-2
    psi_weight: Vec<DMatrix<f64>>,
    psi5_zero: Rational,
}

impl<'a> ProbeContext<'a> {
    fn new(t: &'a ExpRkTableau, probe: &'a Probe) -> Result<Self> {
        let s = t.stages();
        let ev = MatrixPhi::new(&probe.z, t.scales(), 5)?;
        let b = (2..=s).map(|i| eval_combo(&t.b(i), &ev)).collect::<Result<Vec<_>>>()?;
        let b0 = (2..=s).map(|i| to_f64(&t.b(i).at_zero())).collect();
        let a = t.a_entries().map(|(&(i, j), f)| Ok((i, j, eval_combo(f, &ev)?))).collect::<Result<Vec<_>>>()?;
        let psi_row = |jj: u32| (2..=s).map(|i| psi_stage(jj, i, t, &ev)).collect::<Result<Vec<_>>>();
        let psi = [psi_row(2)?, psi_row(3)?, psi_row(4)?];
        let psi_weight = (2..=5).map(|j| psi_weight(j, t, &ev)).collect::<Result<Vec<_>>>()?;
        let psi5_zero = psi_weight_zero(5, t)?;
        Ok(Self { t, probe, c: t.nodes().iter().map(to_f64).collect(), b, b0, a, psi, psi_weight, psi5_zero })
    }

    fn dim(&self) -> usize {
        self.probe.dim()
    }

    fn zero(&self) -> DMatrix<f64> {
        DMatrix::zeros(self.dim(), self.dim())
    }

    fn psi(&self, j: usize, i: usize) -> &DMatrix<f64> {
        &self.psi[j - 2][i - 2]
    }

    /// `sum_{j<i} a_ij(Z) * inner(j)`
    fn row_sum<F: Fn(usize) -> DMatrix<f64>>(&self, i: usize, inner: F) -> DMatrix<f64> {
        let mut acc = self.zero();
        for (_, j, aij) in self.a.iter().filter(|(row, _, _)| *row == i) {
            acc += aij * inner(*j);
        }
        acc
    }

    /// `sum_i W_i * term(i)` with `W_i = b_i(Z)` or `b_i(0) I`.
    fn outer<F: Fn(usize) -> DMatrix<f64>>(&self, scalar_weights: bool, term: F) -> DMatrix<f64> {
        let mut acc = self.zero();
        for i in 2..=self.t.stages() {
            if self.t.b(i).is_zero() {
                continue;
            }
            let v = term(i);
            if scalar_weights {
                acc += v * self.b0[i - 2];
            } else {
                acc += &self.b[i - 2] * v;
            }
        }
        acc
    }

    fn residual(&self, id: u32, mode: Mode) -> Result<f64> {
        let p = self.probe;
        let (jm, km, lm) = (&p.j, &p.k, &p.l);
        let c = &self.c;
        let weak = mode == Mode::Weakened && id >= 9;
        let jpsi2 = |j: usize| jm * self.psi(2, j);
        let m = match id {
            1 => self.psi_weight[0].clone(),
            2 => self.psi_weight[1].clone(),
            3 => self.outer(false, |i| jm * self.psi(2, i)),
            4 => self.psi_weight[2].clone(),
            5 => self.outer(false, |i| jm * self.psi(3, i)),
            6 => self.outer(false, |i| jm * self.row_sum(i, jpsi2)),
            7 => self.outer(false, |i| km * self.psi(2, i) * c[i - 1]),
            8 => match mode {
                Mode::Strong => self.psi_weight[3].clone(),
                Mode::Weakened => return Ok(to_f64(&self.psi5_zero).abs()),
            },
            9 => self.outer(weak, |i| jm * self.psi(4, i)),
            10 => self.outer(weak, |i| jm * self.row_sum(i, |j| jm * self.psi(3, j))),
            11 => self.outer(weak, |i| jm * self.row_sum(i, |j| jm * self.row_sum(j, jpsi2))),
            12 => self.outer(weak, |i| jm * self.row_sum(i, |j| km * self.psi(2, j) * c[j - 1])),
            13 => self.outer(weak, |i| km * self.psi(3, i) * c[i - 1]),
            14 => self.outer(weak, |i| km * self.row_sum(i, jpsi2) * c[i - 1]),
            15 => self.outer(weak, |i| p.b.apply_columns(self.psi(2, i), self.psi(2, i))),
            16 => self.outer(weak, |i| lm * self.psi(2, i) * (c[i - 1] * c[i - 1])),
            other => return Err(ExpRkError::UnknownCondition(other)),
        };
        Ok(m.amax())
    }
}

fn psi_weight_zero(j: u32, t: &ExpRkTableau) -> Result<Rational> {
    psi_weight(j, t, &AtZero)
}

/// Residual of condition `id` (1..=16) at one probe.
pub fn condition_residual(id: u32, t: &ExpRkTableau, probe: &Probe, mode: Mode) -> Result<f64> {
    if !(1..=16).contains(&id) {
        return Err(ExpRkError::UnknownCondition(id));
    }
    ProbeContext::new(t, probe)?.residual(id, mode)
}

/// Max residual of every condition in both modes over a set of probes,
/// indexed `[mode][id - 1]` with strong first.
pub fn max_residuals<'p, I>(t: &ExpRkTableau, probes: I) -> Result<[[f64; 16]; 2]>
where
    I: IntoIterator<Item = &'p Probe>,
{
    let mut out = [[0.0f64; 16]; 2];
    for probe in probes {
        let ctx = ProbeContext::new(t, probe)?;
        for (m, mode) in [Mode::Strong, Mode::Weakened].into_iter().enumerate() {
            for id in 1..=16u32 {
                let r = ctx.residual(id, mode)?;
                let slot = &mut out[m][id as usize - 1];
                *slot = slot.max(r);
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionRow {
    pub id: u32,
    pub order: u32,
    pub mode: Mode,
    pub residual: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub method: String,
    pub tolerance: f64,
    pub probe_count: usize,
    pub rows: Vec<ConditionRow>,
    /// Highest `p` such that every strong condition of order `<= p` passes;
    /// 1 when condition 1 already fails.
    pub strong_order: u32,
    /// Strong conditions 1-7 and weakened conditions 8-16 all pass.
    pub weakened_order5: bool,
}

impl ConditionReport {
    pub fn row(&self, id: u32, mode: Mode) -> Option<&ConditionRow> {
        self.rows.iter().find(|r| r.id == id && r.mode == mode)
    }

    /// `id,mode,residual,pass` rows with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("id,mode,residual,pass\n");
        for r in &self.rows {
            s.push_str(&format!("{},{},{:e},{}\n", r.id, r.mode, r.residual, r.pass));
        }
        s
    }

    pub fn to_table(&self) -> String {
        let mut s = format!(
            "order conditions for {} ({} probes, tolerance {:e})\n",
            self.method, self.probe_count, self.tolerance
        );
        s.push_str(" id  order  strong residual     weakened residual\n");
        for id in 1..=16 {
            let st = self.row(id, Mode::Strong).expect("strong row");
            let wk = self.row(id, Mode::Weakened).expect("weakened row");
            let mark = |p: bool| if p { "ok  " } else { "FAIL" };
            s.push_str(&format!(
                "{:>3}  {:>5}  {:<10.3e} {}   {:<10.3e} {}\n",
                id,
                st.order,
                st.residual,
                mark(st.pass),
                wk.residual,
                mark(wk.pass)
            ));
        }
        s.push_str(&format!("strong order: {}\n", self.strong_order));
        s.push_str(&format!(
            "weakened order 5: {}\n",
            if self.weakened_order5 { "pass" } else { "fail" }
        ));
        s
    }
}

/// Runs all sixteen conditions in both modes over `probes` and the
/// structured families.
pub fn check(t: &ExpRkTableau, tolerance: f64, probes: &ProbeSet) -> Result<ConditionReport> {
    if !(tolerance > 0.0) {
        return Err(ExpRkError::InvalidArgument(format!("tolerance must be positive, got {tolerance}")));
    }
    let structured = ProbeSet::structured(probes.seed);
    let all = probes.probes.iter().chain(structured.probes.iter());
    let max = max_residuals(t, all)?;
    Ok(report_from(t.name(), tolerance, probes.len() + structured.len(), max))
}

fn report_from(method: &str, tolerance: f64, probe_count: usize, max: [[f64; 16]; 2]) -> ConditionReport {
    let mut rows = Vec::with_capacity(32);
    for (m, mode) in [Mode::Strong, Mode::Weakened].into_iter().enumerate() {
        for id in 1..=16u32 {
            let residual = max[m][id as usize - 1];
            rows.push(ConditionRow {
                id,
                order: CONDITION_ORDER[id as usize - 1],
                mode,
                residual,
                pass: residual <= tolerance,
            });
        }
    }
    let strong_pass = |id: u32| max[0][id as usize - 1] <= tolerance;
    let mut strong_order = 1;
    for p in 2..=5 {
        if (1..=16u32).filter(|&id| CONDITION_ORDER[id as usize - 1] <= p).all(strong_pass) {
            strong_order = p;
        } else {
            break;
        }
    }
    let weakened_order5 = (1..=7).all(strong_pass) && (8..=16).all(|id| max[1][id as usize - 1] <= tolerance);
    ConditionReport { method: method.to_string(), tolerance, probe_count, rows, strong_order, weakened_order5 }
}

/// Exact residual of every condition at scalar `Z = 0` (with `J = K = L = 1`
/// and `B(u, v) = uv`), computed in rationals. Index `id - 1`.
pub fn scalar_zero_residuals(t: &ExpRkTableau) -> Result<[Rational; 16]> {
    let s = t.stages();
    let c = t.nodes();
    let b0: Vec<Rational> = (2..=s).map(|i| t.b(i).at_zero()).collect();
    let a0 = |i: usize, j: usize| t.a(i, j).at_zero();
    let psi = |j: u32, i: usize| psi_stage(j, i, t, &AtZero);
    let mut psi_tab = vec![vec![Rational::zero(); s + 1]; 5];
    for j in 2..=4u32 {
        for i in 2..=s {
            psi_tab[j as usize][i] = psi(j, i)?;
        }
    }
    let p = |j: u32, i: usize| psi_tab[j as usize][i];
    let row = |i: usize, f: &dyn Fn(usize) -> Rational| -> Rational { (2..i).map(|j| a0(i, j) * f(j)).sum() };
    let outer = |f: &dyn Fn(usize) -> Rational| -> Rational { (2..=s).map(|i| b0[i - 2] * f(i)).sum() };
    let ci = |i: usize| c[i - 1];

    let psi_w = |j: u32| psi_weight(j, t, &AtZero);
    let inner2 = |j: usize| row(j, &|k| p(2, k));
    Ok([
        psi_w(2)?,
        psi_w(3)?,
        outer(&|i| p(2, i)),
        psi_w(4)?,
        outer(&|i| p(3, i)),
        outer(&|i| row(i, &|j| p(2, j))),
        outer(&|i| ci(i) * p(2, i)),
        psi_w(5)?,
        outer(&|i| p(4, i)),
        outer(&|i| row(i, &|j| p(3, j))),
        outer(&|i| row(i, &inner2)),
        outer(&|i| row(i, &|j| ci(j) * p(2, j))),
        outer(&|i| ci(i) * p(3, i)),
        outer(&|i| ci(i) * row(i, &|j| p(2, j))),
        outer(&|i| p(2, i) * p(2, i)),
        outer(&|i| ci(i) * ci(i) * p(2, i)),
    ])
}

/// Highest `p` such that every condition of order `<= p` vanishes exactly
/// at scalar `Z = 0`; 1 when condition 1 fails.
pub fn scalar_zero_order(t: &ExpRkTableau) -> Result<u32> {
    let res = scalar_zero_residuals(t)?;
    let mut order = 1;
    for p in 2..=5 {
        if (0..16).filter(|&k| CONDITION_ORDER[k] <= p).all(|k| res[k].is_zero()) {
            order = p;
        } else {
            break;
        }
    }
    Ok(order)
}
