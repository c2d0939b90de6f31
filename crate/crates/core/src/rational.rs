//! Exact rational arithmetic for tableau coefficients.

use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};

pub type Rational = Ratio<i128>;

pub fn rat(numer: i128, denom: i128) -> Rational {
    Ratio::new(numer, denom)
}

pub fn int(n: i128) -> Rational {
    Ratio::from_integer(n)
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u32) -> Rational {
    (1..=n as i128).fold(Rational::one(), |acc, k| acc * int(k))
}

/// `r^n` for non-negative `n`.
pub fn pow(r: &Rational, n: u32) -> Rational {
    (0..n).fold(Rational::one(), |acc, _| acc * *r)
}

/// Parses `p`, `p/q`, or a signed variant thereof.
pub fn parse(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: i128 = n.trim().parse().ok()?;
            let d: i128 = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Ratio::new(n, d))
            }
        }
        None => s.parse::<i128>().ok().map(int),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(parse("3"), Some(int(3)));
        assert_eq!(parse("-32/125"), Some(rat(-32, 125)));
        assert_eq!(parse(" 4/8 "), Some(rat(1, 2)));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }

    #[test]
    fn factorials() {
        assert_eq!(factorial(0), int(1));
        assert_eq!(factorial(5), int(120));
        assert_eq!(pow(&rat(1, 2), 3), rat(1, 8));
    }
}
