//! Convergence studies: error versus step count, least-squares order fit,
//! and the CSV exchange format.

use std::fmt::Write as _;

use crate::error::{ExpRkError, Result};
use crate::integrator::solve;
use crate::tableau::ExpRkTableau;
use crate::testbed::HeatProblem;

pub const DEFAULT_FLOOR: f64 = 1e-11;
pub const DEFAULT_STEPS: [usize; 7] = [8, 16, 32, 64, 128, 256, 512];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n_steps: usize,
    pub h: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceReport {
    pub method: String,
    pub problem: String,
    pub floor: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log error` against `log h` over the rows above
    /// the floor; `None` with fewer than two such rows.
    pub fitted_slope: Option<f64>,
}

impl ConvergenceReport {
    pub fn from_rows(method: &str, problem: &str, floor: f64, mut rows: Vec<ConvergenceRow>) -> Self {
        rows.sort_by_key(|r| r.n_steps);
        let fitted_slope = fit_slope(&rows, floor);
        Self { method: method.into(), problem: problem.into(), floor, rows, fitted_slope }
    }

    /// Rows left out of the fit because their error is at or below the floor.
    pub fn excluded(&self) -> impl Iterator<Item = &ConvergenceRow> {
        self.rows.iter().filter(move |r| !(r.error > self.floor))
    }

    /// `n_steps,h,error` with shortest round-trip float formatting.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("n_steps,h,error\n");
        for r in &self.rows {
            let _ = writeln!(s, "{},{:?},{:?}", r.n_steps, r.h, r.error);
        }
        s
    }
}

/// Least-squares slope of `log(error)` on `log(h)` over rows with
/// `error > floor`.
pub fn fit_slope(rows: &[ConvergenceRow], floor: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> =
        rows.iter().filter(|r| r.error > floor && r.h > 0.0).map(|r| (r.h.ln(), r.error.ln())).collect();
    if pts.len() < 2 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    if sxx == 0.0 {
        return None;
    }
    Some(sxy / sxx)
}

pub fn parse_csv(text: &str) -> Result<Vec<ConvergenceRow>> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header.trim() == "n_steps,h,error" => {}
        _ => return Err(ExpRkError::Parse { line: 1, message: "expected header `n_steps,h,error`".into() }),
    }
    let mut rows = Vec::new();
    for (k, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |m: &str| ExpRkError::Parse { line: k + 1, message: m.to_string() };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 3 {
            return Err(bad("expected three fields"));
        }
        rows.push(ConvergenceRow {
            n_steps: fields[0].trim().parse().map_err(|_| bad("bad n_steps"))?,
            h: fields[1].trim().parse().map_err(|_| bad("bad h"))?,
            error: fields[2].trim().parse().map_err(|_| bad("bad error"))?,
        });
    }
    Ok(rows)
}

/// Integrates `problem` once per step count (concurrently) and measures the
/// discrete L2 error at the final time.
pub fn run(
    method: &ExpRkTableau,
    problem: &HeatProblem,
    steps: &[usize],
    floor: f64,
) -> Result<ConvergenceReport> {
    if steps.is_empty() || steps.contains(&0) {
        return Err(ExpRkError::InvalidArgument("step counts must be >= 1".into()));
    }
    if steps.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ExpRkError::InvalidArgument("step counts must be strictly increasing".into()));
    }
    let pb = &problem.problem;
    let results: Vec<Result<ConvergenceRow>> = std::thread::scope(|scope| {
        let handles: Vec<_> = steps
            .iter()
            .map(|&n| {
                scope.spawn(move || {
                    let u = solve(pb, method, n)?;
                    Ok(ConvergenceRow {
                        n_steps: n,
                        h: (pb.t_end - pb.t0) / n as f64,
                        error: problem.discrete_l2_error(&u, pb.t_end)?,
                    })
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("convergence worker panicked")).collect()
    });
    let rows = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport::from_rows(method.name(), &pb.name, floor, rows))
}
