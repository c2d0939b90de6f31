use nalgebra::DMatrix;

use crate::error::{ExpRkError, Result};

use super::scalar::inv_factorial;

const PADE13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];
const THETA13: f64 = 5.371920351148152;

/// Largest 1-norm the truncated Taylor series of the phi functions is applied to.
const PHI_TAYLOR_NORM: f64 = 0.5;
const PHI_TAYLOR_TERMS: usize = 18;

fn check_square(m: &DMatrix<f64>) -> Result<()> {
    if !m.is_square() {
        return Err(ExpRkError::DimensionMismatch { expected: m.nrows(), found: m.ncols() });
    }
    if m.iter().any(|x| !x.is_finite()) {
        return Err(ExpRkError::NonFinite("matrix argument".into()));
    }
    Ok(())
}

pub(crate) fn norm1(m: &DMatrix<f64>) -> f64 {
    m.column_iter().map(|c| c.iter().map(|x| x.abs()).sum::<f64>()).fold(0.0, f64::max)
}

/// Number of halvings that bring `norm` below `theta`.
fn squarings(norm: f64, theta: f64) -> u32 {
    if norm <= theta {
        0
    } else {
        (norm / theta).log2().ceil() as u32
    }
}

/// Matrix exponential by scaling and squaring with the [13/13] Padé approximant.
pub fn matrix_exp(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square(m)?;
    let n = m.nrows();
    if n == 0 {
        return Ok(m.clone());
    }
    let s = squarings(norm1(m), THETA13);
    let a = m / 2f64.powi(s as i32);
    let b = &PADE13;
    let ident = DMatrix::<f64>::identity(n, n);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let u_inner = &a6 * (&a6 * b[13] + &a4 * b[11] + &a2 * b[9]) + &a6 * b[7] + &a4 * b[5] + &a2 * b[3] + &ident * b[1];
    let u = &a * u_inner;
    let v = &a6 * (&a6 * b[12] + &a4 * b[10] + &a2 * b[8]) + &a6 * b[6] + &a4 * b[4] + &a2 * b[2] + &ident * b[0];

    let p = &v + &u;
    let q = &v - &u;
    let mut r = q
        .lu()
        .solve(&p)
        .ok_or_else(|| ExpRkError::NonFinite("singular Padé denominator".into()))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

/// `phi_0(m), ..., phi_jmax(m)` computed together.
///
/// This is the exponential of the block upper-triangular matrix
/// `[[m, I, 0, ..], [0, 0, I, ..], .., [0, .., 0]]` of size `n(jmax+1)`,
/// whose first block row is `[phi_0(m), phi_1(m), .., phi_jmax(m)]`, evaluated
/// without forming that matrix: the block-Toeplitz structure reduces the
/// squaring phase to the doubling relations
///
/// ```text
/// phi_0(2x) = phi_0(x)^2
/// phi_k(2x) = 2^-k (phi_0(x) phi_k(x) + sum_{l=1..k} phi_l(x) / (k-l)!)
/// ```
///
/// and the scaled argument is handled by a truncated Taylor series. No
/// inverse of `m` is formed, so singular arguments are fine.
pub fn phi_matrices(jmax: u32, m: &DMatrix<f64>) -> Result<Vec<DMatrix<f64>>> {
    check_square(m)?;
    let n = m.nrows();
    let jmax = jmax as usize;
    let s = squarings(norm1(m), PHI_TAYLOR_NORM);
    let x = m / 2f64.powi(s as i32);

    // powers[p] = x^p
    let mut powers = Vec::with_capacity(PHI_TAYLOR_TERMS);
    powers.push(DMatrix::<f64>::identity(n, n));
    for p in 1..PHI_TAYLOR_TERMS {
        let next = &powers[p - 1] * &x;
        powers.push(next);
    }
    let mut phis: Vec<DMatrix<f64>> = (0..=jmax)
        .map(|k| {
            let mut acc = DMatrix::<f64>::zeros(n, n);
            for (p, xp) in powers.iter().enumerate().rev() {
                acc += xp * inv_factorial((p + k) as u32);
            }
            acc
        })
        .collect();

    for _ in 0..s {
        let e = phis[0].clone();
        let mut next = Vec::with_capacity(jmax + 1);
        next.push(&e * &e);
        for k in 1..=jmax {
            let mut acc = &e * &phis[k];
            for l in 1..=k {
                acc += &phis[l] * inv_factorial((k - l) as u32);
            }
            acc /= 2f64.powi(k as i32);
            next.push(acc);
        }
        phis = next;
    }
    Ok(phis)
}

/// `phi_j(m)` for `j >= 1`.
pub fn phi_matrix(j: u32, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    if j == 0 {
        return matrix_exp(m);
    }
    let mut all = phi_matrices(j, m)?;
    Ok(all.swap_remove(j as usize))
}

/// `phi_j(m)` read off the exponential of the explicit `n(j+1)` block
/// embedding. Costs a dense exponential of the embedded matrix; intended as a
/// cross-check for small `m`.
pub fn phi_matrix_by_embedding(j: u32, m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    check_square(m)?;
    let n = m.nrows();
    let j = j as usize;
    let size = n * (j + 1);
    let mut w = DMatrix::<f64>::zeros(size, size);
    w.view_mut((0, 0), (n, n)).copy_from(m);
    for block in 0..j {
        for i in 0..n {
            w[(block * n + i, (block + 1) * n + i)] = 1.0;
        }
    }
    let e = matrix_exp(&w)?;
    Ok(e.view((0, j * n), (n, n)).into_owned())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phi::scalar::phi;
    use approx::assert_relative_eq;
    use nalgebra::DVector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_symmetric(n: usize, scale: f64, seed: u64) -> DMatrix<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0) * scale);
        (&a + a.transpose()) * 0.5
    }

    fn spectral(j: u32, m: &DMatrix<f64>) -> DMatrix<f64> {
        let eig = m.clone().symmetric_eigen();
        let d = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&l| phi(j, l)));
        &eig.eigenvectors * DMatrix::from_diagonal(&d) * eig.eigenvectors.transpose()
    }

    fn max_abs(m: &DMatrix<f64>) -> f64 {
        m.iter().fold(0.0, |a, x| a.max(x.abs()))
    }

    #[test]
    fn exp_of_zero_is_identity() {
        let z = DMatrix::<f64>::zeros(4, 4);
        assert_eq!(matrix_exp(&z).unwrap(), DMatrix::identity(4, 4));
    }

    #[test]
    fn exp_diagonal() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![1.0, -1.0]));
        let e = matrix_exp(&m).unwrap();
        assert_relative_eq!(e[(0, 0)], std::f64::consts::E, max_relative = 1e-15);
        assert_relative_eq!(e[(1, 1)], (-1.0f64).exp(), max_relative = 1e-15);
        assert_eq!(e[(0, 1)], 0.0);
    }

    #[test]
    fn exp_matches_spectral() {
        for seed in 0..5 {
            let m = random_symmetric(5, 3.0, seed);
            let e = matrix_exp(&m).unwrap();
            let o = spectral(0, &m);
            assert!(max_abs(&(&e - &o)) <= 1e-12 * max_abs(&o));
        }
    }

    #[test]
    fn exp_rejects_bad_input() {
        let mut m = DMatrix::<f64>::zeros(2, 2);
        m[(0, 1)] = f64::NAN;
        assert!(matches!(matrix_exp(&m), Err(ExpRkError::NonFinite(_))));
        let r = DMatrix::<f64>::zeros(2, 3);
        assert!(matches!(matrix_exp(&r), Err(ExpRkError::DimensionMismatch { .. })));
    }

    #[test]
    fn phi_matrix_small_cases() {
        let z = DMatrix::<f64>::zeros(3, 3);
        assert_eq!(phi_matrix(1, &z).unwrap(), DMatrix::identity(3, 3));
        let one = DMatrix::from_element(1, 1, 1.0);
        assert_relative_eq!(phi_matrix(2, &one).unwrap()[(0, 0)], std::f64::consts::E - 2.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_matrix_matches_spectral_and_embedding() {
        for seed in 0..4 {
            let m = random_symmetric(6, 4.0, 100 + seed);
            for j in 1..=4 {
                let p = phi_matrix(j, &m).unwrap();
                let o = spectral(j, &m);
                assert!(max_abs(&(&p - &o)) <= 1e-11, "j={j}");
                let emb = phi_matrix_by_embedding(j, &m).unwrap();
                assert!(max_abs(&(&p - &emb)) <= 1e-11, "j={j}");
            }
        }
    }

    #[test]
    fn phi_matrix_singular_argument() {
        // nilpotent: phi_1(N) = I + N/2
        let mut nmat = DMatrix::<f64>::zeros(2, 2);
        nmat[(0, 1)] = 3.0;
        let p = phi_matrix(1, &nmat).unwrap();
        assert_relative_eq!(p[(0, 1)], 1.5, epsilon = 1e-15);
        assert_relative_eq!(p[(0, 0)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn phi_matrix_stiff_negative_definite() {
        let m = random_symmetric(8, 1.0, 7) - DMatrix::identity(8, 8) * 2.0e4;
        for j in 1..=4 {
            let p = phi_matrix(j, &m).unwrap();
            let o = spectral(j, &m);
            assert!(max_abs(&(&p - &o)) <= 1e-12 * max_abs(&o), "j={j}");
        }
    }
}
