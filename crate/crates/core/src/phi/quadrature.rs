//! Independent evaluation of `phi_j` from its integral definition, used as an
//! oracle for the series/recurrence evaluator.

use crate::error::{ExpRkError, Result};

use super::scalar::inv_factorial;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
// Gauss weights at XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_INTERVALS: usize = 2000;

fn kronrod<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let fc = f(mid);
    let mut k = WGK[7] * fc;
    let mut g = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let s = f(mid - dx) + f(mid + dx);
        k += WGK[i] * s;
        if i % 2 == 1 {
            g += WG[i / 2] * s;
        }
    }
    (k * half, ((k - g) * half).abs())
}

/// Globally adaptive Gauss-Kronrod (7/15) integration of `f` over `[a, b]`
/// to an absolute tolerance. The interval with the largest error estimate is
/// bisected until the summed estimate meets the tolerance.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tolerance: f64) -> Result<f64> {
    // (a, b, value, error)
    let (v, e) = kronrod(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    loop {
        let total_err: f64 = pieces.iter().map(|p| p.3).sum();
        if total_err <= tolerance {
            return Ok(pieces.iter().map(|p| p.2).sum());
        }
        if pieces.len() >= MAX_INTERVALS {
            return Err(ExpRkError::Quadrature { tolerance, estimate: total_err });
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .unwrap_or(0);
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (vl, el) = kronrod(&f, lo, mid);
        let (vr, er) = kronrod(&f, mid, hi);
        pieces.push((lo, mid, vl, el));
        pieces.push((mid, hi, vr, er));
    }
}

/// `phi_j(z) = int_0^1 e^{(1-t)z} t^{j-1}/(j-1)! dt` by adaptive quadrature.
pub fn phi_quadrature(j: u32, z: f64, tolerance: f64) -> Result<f64> {
    if j == 0 {
        return Err(ExpRkError::InvalidArgument("quadrature oracle needs j >= 1".into()));
    }
    let w = inv_factorial(j - 1);
    integrate(|t| ((1.0 - t) * z).exp() * t.powi(j as i32 - 1) * w, 0.0, 1.0, tolerance)
}
