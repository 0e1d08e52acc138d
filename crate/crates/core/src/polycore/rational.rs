//! Exact rational helpers on top of `num_rational::BigRational`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// Arbitrary-precision rational, always kept in lowest terms with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Least common multiple of the denominators of `coeffs`.
pub fn denominator_lcm<'a>(coeffs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    coeffs
        .into_iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()))
}

/// Gcd of the numerators of `coeffs` (zero for an empty sequence).
pub fn numerator_gcd<'a>(coeffs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    coeffs
        .into_iter()
        .fold(BigInt::zero(), |acc, c| acc.gcd(c.numer()))
}

/// Nearest integer, ties away from zero.
pub fn round(q: &Rational) -> BigInt {
    q.round().to_integer()
}

/// Lossy conversion for cosmetic output only.
pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => {
            // scale both down so the quotient fits
            let shift = q.numer().bits().max(q.denom().bits()).saturating_sub(1000);
            let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
            let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
            if d == 0.0 {
                if q.is_negative() {
                    f64::NEG_INFINITY
                } else {
                    f64::INFINITY
                }
            } else {
                n / d
            }
        }
    }
}

/// Closest rational to a finite float with denominator a power of two up to 2^20.
pub fn from_f64_coarse(x: f64) -> Rational {
    let scale = 1i64 << 20;
    let n = (x * scale as f64).round() as i64;
    rat(n, scale)
}

/// Exact square root of a non-negative rational, if it is a perfect square.
pub fn sqrt_exact(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let d = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&d * &d) == q.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let q = rat(6, -4);
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
        assert_eq!(rat(0, 7), Rational::zero());
        assert_eq!(rat(0, 7).denom(), &BigInt::one());
    }

    #[test]
    fn perfect_squares() {
        assert_eq!(sqrt_exact(&rat(625, 64)), Some(rat(25, 8)));
        assert_eq!(sqrt_exact(&rat(2, 1)), None);
        assert_eq!(sqrt_exact(&rat(-4, 1)), None);
    }

    #[test]
    fn lcm_and_gcd() {
        let cs = [rat(1, 4), rat(5, 6), int(3)];
        assert_eq!(denominator_lcm(&cs), BigInt::from(12));
        let cs = [int(6), int(-9), int(15)];
        assert_eq!(numerator_gcd(&cs), BigInt::from(3));
    }
}
