use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// A Laurent polynomial `Σ c_n q^n` with rational coefficients.
///
/// Zero coefficients are never stored, so structural equality is equality
/// of polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Coefficient {
    terms: BTreeMap<i32, BigRational>,
}

impl Coefficient {
    pub fn zero() -> Self {
        Coefficient::default()
    }

    pub fn one() -> Self {
        Coefficient::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        Coefficient::monomial(c, 0)
    }

    pub fn integer(n: i64) -> Self {
        Coefficient::constant(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Coefficient::constant(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    /// `c · q^exp`
    pub fn monomial(c: BigRational, exp: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exp, c);
        }
        Coefficient { terms }
    }

    /// `q^exp`
    pub fn q_pow(exp: i32) -> Self {
        Coefficient::monomial(BigRational::one(), exp)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(One::is_one)
    }

    /// Exponent/coefficient pairs in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigRational)> + '_ {
        self.terms.iter().map(|(&e, c)| (e, c))
    }

    /// `Some((c, n))` when the polynomial is the single term `c q^n`.
    pub fn as_monomial(&self) -> Option<(&BigRational, i32)> {
        match self.terms.len() {
            1 => self.terms.iter().next().map(|(&e, c)| (c, e)),
            _ => None,
        }
    }

    /// Multiplicative inverse, defined only for single terms.
    pub fn inverse(&self) -> Option<Coefficient> {
        let (c, e) = self.as_monomial()?;
        Some(Coefficient::monomial(c.recip(), -e))
    }

    /// The substitution `q ↦ q^k`.
    pub fn substitute_power(&self, k: i32) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(&e, c)| (e * k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Coefficient {
        if c.is_zero() {
            return Coefficient::zero();
        }
        Coefficient {
            terms: self.terms.iter().map(|(&e, v)| (e, v * c)).collect(),
        }
    }

    /// Value at a real `q`.
    pub fn eval(&self, q: f64) -> f64 {
        self.terms
            .iter()
            .map(|(&e, c)| c.to_f64().unwrap_or(f64::NAN) * q.powi(e))
            .sum()
    }

    /// Exact value at a rational `q != 0`.
    pub fn eval_exact(&self, q: &BigRational) -> BigRational {
        self.terms
            .iter()
            .map(|(&e, c)| c * rational_pow(q, e))
            .fold(BigRational::zero(), |a, b| a + b)
    }

    fn add_term(&mut self, exp: i32, c: BigRational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigRational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }
}

pub(crate) fn rational_pow(q: &BigRational, e: i32) -> BigRational {
    let base = if e < 0 { q.recip() } else { q.clone() };
    num_traits::pow(base, e.unsigned_abs() as usize)
}

impl AddAssign<&Coefficient> for Coefficient {
    fn add_assign(&mut self, rhs: &Coefficient) {
        for (&e, c) in &rhs.terms {
            self.add_term(e, c.clone());
        }
    }
}

impl Add for &Coefficient {
    type Output = Coefficient;

    fn add(self, rhs: &Coefficient) -> Coefficient {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Coefficient {
    type Output = Coefficient;

    fn sub(self, rhs: &Coefficient) -> Coefficient {
        self + &(-rhs)
    }
}

impl Neg for &Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        Coefficient {
            terms: self.terms.iter().map(|(&e, c)| (e, -c)).collect(),
        }
    }
}

impl Neg for Coefficient {
    type Output = Coefficient;

    fn neg(self) -> Coefficient {
        -&self
    }
}

impl Mul for &Coefficient {
    type Output = Coefficient;

    fn mul(self, rhs: &Coefficient) -> Coefficient {
        let mut out = Coefficient::zero();
        for (&e1, c1) in &self.terms {
            for (&e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, c1 * c2);
            }
        }
        out
    }
}

fn write_rational(f: &mut fmt::Formatter<'_>, c: &BigRational) -> fmt::Result {
    if c.is_integer() {
        write!(f, "{}", c.numer())
    } else {
        write!(f, "({}/{})", c.numer(), c.denom())
    }
}

/// Writes `|c| q^e` without its sign; `show_one` controls whether a bare
/// unit is printed.
pub(crate) fn write_unsigned_term(
    f: &mut fmt::Formatter<'_>,
    c: &BigRational,
    e: i32,
    show_one: bool,
) -> fmt::Result {
    let c = c.abs();
    let unit = c.is_one();
    if !unit || (e == 0 && show_one) {
        write_rational(f, &c)?;
        if e != 0 {
            f.write_str(" ")?;
        }
    }
    match e {
        0 => Ok(()),
        1 => f.write_str("q"),
        _ => write!(f, "q^{e}"),
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let many = self.terms.len() > 1;
        if many {
            f.write_str("(")?;
        }
        for (i, (&e, c)) in self.terms.iter().rev().enumerate() {
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_unsigned_term(f, c, e, true)?;
        }
        if many {
            f.write_str(")")?;
        }
        Ok(())
    }
}
