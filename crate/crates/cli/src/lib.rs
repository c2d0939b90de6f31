//! Command implementations behind the `exprk` binary. Each command returns
//! its text output and an exit code so it can be driven from tests.

use std::fs;
use std::path::{Path, PathBuf};

use exprk::convergence::{self, ConvergenceReport};
use exprk::integrator::{required_requests, step_verbose};
use exprk::order_conditions::{check, ProbeSet, DEFAULT_DIM};
use exprk::phi::phi;
use exprk::rational::to_f64;
use exprk::tableau::{baseline_tableaux, exprk5s8};
use exprk::testbed::{discrete_l2, heat_problem, HeatProblem};
use exprk::{ExpRkError, ExpRkTableau, PhiCache};

pub const EXIT_OK: u8 = 0;
pub const EXIT_VERDICT: u8 = 1;
pub const EXIT_USAGE: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] ExpRkError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub code: u8,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, code: EXIT_OK }
    }
}

pub fn shipped_methods() -> Vec<ExpRkTableau> {
    let mut all = vec![exprk5s8()];
    all.extend(baseline_tableaux());
    all
}

/// A shipped method by name (case-insensitive), otherwise a tableau file.
pub fn resolve_method(name: &str) -> CliResult<ExpRkTableau> {
    if let Some(t) = shipped_methods().into_iter().find(|t| t.name().eq_ignore_ascii_case(name)) {
        return Ok(t);
    }
    let path = Path::new(name);
    if !path.exists() {
        let names: Vec<String> = shipped_methods().iter().map(|t| t.name().to_string()).collect();
        return Err(CliError::Usage(format!(
            "unknown method `{name}` (expected one of {} or a tableau file)",
            names.join(", ")
        )));
    }
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    Ok(ExpRkTableau::from_text(&text)?)
}

/// `heat<N>` for the heat test problem on `N` interior points.
pub fn resolve_problem(name: &str) -> CliResult<HeatProblem> {
    let n = name
        .strip_prefix("heat")
        .and_then(|n| n.parse::<usize>().ok())
        .ok_or_else(|| CliError::Usage(format!("unknown problem `{name}` (expected heat<N>, e.g. heat200)")))?;
    Ok(heat_problem(n)?)
}

/// Comma-separated step counts; `a..b` expands to the doublings of `a` up to `b`.
pub fn parse_steps(s: &str) -> std::result::Result<Vec<usize>, String> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.parse().map_err(|_| format!("bad step count `{lo}`"))?;
            let hi: usize = hi.parse().map_err(|_| format!("bad step count `{hi}`"))?;
            if lo == 0 || hi < lo {
                return Err(format!("bad range `{part}`"));
            }
            let mut n = lo;
            while n <= hi {
                out.push(n);
                n *= 2;
            }
        } else {
            out.push(part.parse().map_err(|_| format!("bad step count `{part}`"))?);
        }
    }
    if out.is_empty() {
        return Err("no step counts given".into());
    }
    Ok(out)
}

/// A parsed `--steps` value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepList(pub Vec<usize>);

impl std::str::FromStr for StepList {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        parse_steps(s).map(StepList)
    }
}

pub fn converge(method: &str, problem: &str, steps: &[usize], floor: f64, out: Option<&Path>) -> CliResult<Output> {
    let t = resolve_method(method)?;
    let hp = resolve_problem(problem)?;
    if !(floor >= 0.0) {
        return Err(CliError::Usage(format!("floor must be >= 0, got {floor}")));
    }
    let report = convergence::run(&t, &hp, steps, floor)?;
    let mut text = summarize(&report);
    match out {
        Some(path) => {
            fs::write(path, report.to_csv()).map_err(|source| CliError::Io { path: path.into(), source })?;
            text.push_str(&format!("wrote {}\n", path.display()));
        }
        None => text.push_str(&report.to_csv()),
    }
    Ok(Output::ok(text))
}

fn summarize(report: &ConvergenceReport) -> String {
    let mut s = format!("{} on {}\n", report.method, report.problem);
    s.push_str("  n_steps            h        error\n");
    for r in &report.rows {
        let flag = if r.error > report.floor { "" } else { "  (below floor, excluded)" };
        s.push_str(&format!("{:>9} {:>12.4e} {:>12.4e}{flag}\n", r.n_steps, r.h, r.error));
    }
    match report.fitted_slope {
        Some(p) => s.push_str(&format!("slope {p:.4}\n")),
        None => s.push_str(&format!("slope undefined (fewer than two rows above floor {:e})\n", report.floor)),
    }
    s
}

/// Prints the report and its machine rows. With `assert_order = Some(5)`
/// the exit code is nonzero iff the weakened-order-5 verdict fails; lower
/// asserted orders compare against the strong order.
pub fn check_order(
    method: &str,
    seed: u64,
    tol: f64,
    probes: usize,
    assert_order: Option<u32>,
) -> CliResult<Output> {
    if !(tol > 0.0) {
        return Err(CliError::Usage(format!("tolerance must be > 0, got {tol}")));
    }
    let t = resolve_method(method)?;
    let set = ProbeSet::random(DEFAULT_DIM, probes, seed)?;
    let report = check(&t, tol, &set)?;
    let mut text = report.to_table();
    text.push('\n');
    text.push_str(&report.to_csv());
    let code = match assert_order {
        None => EXIT_OK,
        Some(p) if !(1..=5).contains(&p) => {
            return Err(CliError::Usage(format!("asserted order must be in 1..=5, got {p}")));
        }
        Some(5) => {
            if report.weakened_order5 {
                EXIT_OK
            } else {
                EXIT_VERDICT
            }
        }
        Some(p) => {
            if report.strong_order >= p {
                EXIT_OK
            } else {
                EXIT_VERDICT
            }
        }
    };
    if let Some(p) = assert_order {
        text.push_str(&format!("asserted order {p}: {}\n", if code == EXIT_OK { "holds" } else { "violated" }));
    }
    Ok(Output { text, code })
}

/// Shortest representation that parses back to the same `f64`.
pub fn phi_value(j: u32, z: f64) -> String {
    format!("{}", phi(j, z))
}

/// One step from the initial value, printing every internal stage against the
/// exact solution at the stage time.
pub fn step_demo(method: &str, problem: &str, n_steps: usize) -> CliResult<Output> {
    if n_steps == 0 {
        return Err(CliError::Usage("steps must be >= 1".into()));
    }
    let t = resolve_method(method)?;
    let hp = resolve_problem(problem)?;
    let pb = &hp.problem;
    let h = (pb.t_end - pb.t0) / n_steps as f64;
    let cache = PhiCache::build(&pb.a, h, &required_requests(&t))?;
    let rec = step_verbose(pb, &t, &cache, pb.t0, &pb.u0)?;
    let exact = pb.exact.as_ref().expect("heat problems carry their exact solution");
    let dx = hp.grid.dx();
    let mut s = format!("{} on {}, h = {h:e}, {} phi matrices\n", t.name(), pb.name, cache.len());
    s.push_str(" stage       c      |U_i|   |U_i - u(t0 + c_i h)|\n");
    let stages = rec.stages.unwrap_or_default();
    for (k, u) in stages.iter().enumerate() {
        let i = k + 2;
        let ci = to_f64(&t.c(i));
        let err = discrete_l2(&(u - exact(pb.t0 + ci * h)), dx);
        s.push_str(&format!("{i:>6} {:>7} {:>10.6e} {err:>12.4e}\n", t.c(i).to_string(), discrete_l2(u, dx)));
    }
    let err = discrete_l2(&(&rec.u - exact(rec.t)), dx);
    s.push_str(&format!("u_1 at t = {}: |u_1| = {:.6e}, error {err:.4e}\n", rec.t, discrete_l2(&rec.u, dx)));
    Ok(Output::ok(s))
}
