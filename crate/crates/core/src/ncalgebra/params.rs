use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::AlgebraError;

/// Podleś's original sphere parameter `c ∈ [0, ∞]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PodlesC {
    Finite(BigRational),
    Infinity,
}

/// `s = 2√c / (1 + √(1 + 4c))`, the inverse of `c = (s⁻¹ − s)⁻²` on
/// `[0, 1]`; `c = ∞` gives `s = 1`.
pub fn param_c_to_s(c: &PodlesC) -> Result<f64, AlgebraError> {
    match c {
        PodlesC::Infinity => Ok(1.0),
        PodlesC::Finite(c) if c.is_negative() => Err(AlgebraError::InvalidParameter(format!(
            "c = {c} is negative"
        ))),
        PodlesC::Finite(c) => {
            let c = c.to_f64().unwrap_or(f64::INFINITY);
            if c.is_infinite() {
                return Ok(1.0);
            }
            Ok(2.0 * c.sqrt() / (1.0 + (1.0 + 4.0 * c).sqrt()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn c(n: i64, d: i64) -> PodlesC {
        PodlesC::Finite(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    /// Independent direction: `c = (1/s − s)^-2`.
    fn s_to_c(s: f64) -> f64 {
        (1.0 / s - s).powi(-2)
    }

    #[test]
    fn endpoints_and_known_value() {
        assert_eq!(param_c_to_s(&c(0, 1)).unwrap(), 0.0);
        assert_eq!(param_c_to_s(&PodlesC::Infinity).unwrap(), 1.0);
        assert!((param_c_to_s(&c(4, 9)).unwrap() - 0.5).abs() < 1e-15);
        assert!(param_c_to_s(&c(-1, 3)).is_err());
    }

    #[test]
    fn inverts_the_reparametrization() {
        for (n, d) in [(1, 100), (1, 7), (1, 1), (5, 2), (1000, 1)] {
            let s = param_c_to_s(&c(n, d)).unwrap();
            assert!((0.0..1.0).contains(&s));
            let back = s_to_c(s);
            let exact = n as f64 / d as f64;
            assert!((back - exact).abs() <= 1e-9 * exact.max(1.0), "{n}/{d}: {back}");
        }
    }
}
