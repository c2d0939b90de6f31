use num_complex::Complex64;

/// Below this modulus the Taylor series is used instead of the recurrence.
pub const TAYLOR_THRESHOLD: f64 = 1.0;
const TAYLOR_TERMS: usize = 25;

/// Arguments accepted by [`phi`]: real or complex scalars.
pub trait PhiArg: Copy + std::ops::Add<Output = Self> + std::ops::Mul<Output = Self> {
    fn exp(self) -> Self;
    fn modulus(self) -> f64;
    fn real(x: f64) -> Self;
    fn sub_real(self, x: f64) -> Self;
    fn div(self, other: Self) -> Self;
}

impl PhiArg for f64 {
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
    fn real(x: f64) -> Self {
        x
    }
    fn sub_real(self, x: f64) -> Self {
        self - x
    }
    fn div(self, other: Self) -> Self {
        self / other
    }
}

impl PhiArg for Complex64 {
    fn exp(self) -> Self {
        Complex64::exp(self)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
    fn real(x: f64) -> Self {
        Complex64::new(x, 0.0)
    }
    fn sub_real(self, x: f64) -> Self {
        self - x
    }
    fn div(self, other: Self) -> Self {
        self / other
    }
}

/// `1/k!` as a float.
pub fn inv_factorial(k: u32) -> f64 {
    1.0 / (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

/// Evaluates `phi_j(z)`.
///
/// For `|z| < 1` the series `sum_m z^m / (m+j)!` is summed (25 terms, Horner),
/// which avoids the cancellation in `(e^z - 1)/z`. Otherwise the upward
/// recurrence `phi_{k+1}(z) = (phi_k(z) - 1/k!) / z` is run from `e^z`.
pub fn phi<T: PhiArg>(j: u32, z: T) -> T {
    if z.modulus() < TAYLOR_THRESHOLD {
        phi_taylor(j, z)
    } else {
        phi_recurrence(j, z)
    }
}

pub(crate) fn phi_taylor<T: PhiArg>(j: u32, z: T) -> T {
    let mut acc = T::real(inv_factorial(j + TAYLOR_TERMS as u32 - 1));
    for m in (0..TAYLOR_TERMS - 1).rev() {
        acc = acc * z + T::real(inv_factorial(j + m as u32));
    }
    acc
}

pub(crate) fn phi_recurrence<T: PhiArg>(j: u32, z: T) -> T {
    let mut value = z.exp();
    for k in 0..j {
        value = value.sub_real(inv_factorial(k)).div(z);
    }
    value
}

/// `phi_0(z), ..., phi_jmax(z)` in one pass.
pub fn phi_all(jmax: u32, z: f64) -> Vec<f64> {
    (0..=jmax).map(|j| phi(j, z)).collect()
}
