use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;

use super::{Coefficient, Element, Presentation, Word};

/// A random element: up to `max_terms` words of length at most
/// `max_degree`, with coefficients `(a/b) q^e` for small `a`, `b`, `e`.
pub fn random_element<R: Rng + ?Sized>(
    p: &Presentation,
    rng: &mut R,
    max_degree: usize,
    max_terms: usize,
) -> Element {
    let n = p.generators().len() as u8;
    let mut x = Element::zero();
    for _ in 0..rng.gen_range(1..=max_terms) {
        let len = rng.gen_range(0..=max_degree);
        let word = Word((0..len).map(|_| rng.gen_range(0..n)).collect());
        x.add_term(word, random_coefficient(rng));
    }
    x
}

pub fn random_coefficient<R: Rng + ?Sized>(rng: &mut R) -> Coefficient {
    let mut num: i64 = rng.gen_range(-3..=3);
    if num == 0 {
        num = 1;
    }
    let den: i64 = rng.gen_range(1..=2);
    Coefficient::monomial(
        BigRational::new(BigInt::from(num), BigInt::from(den)),
        rng.gen_range(-2..=2),
    )
}
