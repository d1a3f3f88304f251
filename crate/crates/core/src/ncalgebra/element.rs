use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use super::Coefficient;

/// A word in the generators of a presentation, stored as generator indices.
///
/// Words are ordered degree-lexicographically, with generator precedence
/// given by index. This is the monomial order every rewrite rule decreases.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<u8>);

impl Word {
    pub fn unit() -> Self {
        Word(Vec::new())
    }

    pub fn letter(g: u8) -> Self {
        Word(vec![g])
    }

    pub fn is_unit(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.0.len() + other.0.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Position of the leftmost occurrence of `pattern` as a factor.
    pub fn find(&self, pattern: &Word) -> Option<usize> {
        let p = pattern.0.as_slice();
        if p.is_empty() || p.len() > self.0.len() {
            return None;
        }
        self.0.windows(p.len()).position(|w| w == p)
    }

    /// Number of occurrences of the letter `g`.
    pub fn count(&self, g: u8) -> usize {
        self.0.iter().filter(|&&x| x == g).count()
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite linear combination of words with Laurent-polynomial
/// coefficients, i.e. an element of the free algebra over `Q[q, q^-1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Element {
    terms: BTreeMap<Word, Coefficient>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn one() -> Self {
        Element::term(Word::unit(), Coefficient::one())
    }

    pub fn term(word: Word, coeff: Coefficient) -> Self {
        let mut e = Element::zero();
        e.add_term(word, coeff);
        e
    }

    pub fn word(word: Word) -> Self {
        Element::term(word, Coefficient::one())
    }

    pub fn generator(g: u8) -> Self {
        Element::word(Word::letter(g))
    }

    pub fn scalar(c: Coefficient) -> Self {
        Element::term(Word::unit(), c)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &Coefficient)> + '_ {
        self.terms.iter()
    }

    pub fn coefficient(&self, w: &Word) -> Option<&Coefficient> {
        self.terms.get(w)
    }

    pub fn leading(&self) -> Option<(&Word, &Coefficient)> {
        self.terms.iter().next_back()
    }

    pub fn degree(&self) -> usize {
        self.terms.keys().map(Word::len).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, word: Word, coeff: Coefficient) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.get_mut(&word) {
            Some(c) => {
                *c += &coeff;
                if c.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, coeff);
            }
        }
    }

    pub fn scale(&self, c: &Coefficient) -> Element {
        let mut out = Element::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&Coefficient) -> Coefficient) -> Element {
        let mut out = Element::zero();
        for (w, v) in &self.terms {
            out.add_term(w.clone(), f(v));
        }
        out
    }

    pub fn pow(&self, n: u32) -> Element {
        (0..n).fold(Element::one(), |acc, _| &acc * self)
    }

    pub(crate) fn into_terms(self) -> BTreeMap<Word, Coefficient> {
        self.terms
    }

    pub(crate) fn from_terms(terms: BTreeMap<Word, Coefficient>) -> Self {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        Element { terms }
    }
}

impl Add for &Element {
    type Output = Element;

    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Element {
    type Output = Element;

    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c);
        }
        out
    }
}

impl Neg for &Element {
    type Output = Element;

    fn neg(self) -> Element {
        self.map_coefficients(|c| -c)
    }
}

impl Mul for &Element {
    type Output = Element;

    fn mul(self, rhs: &Element) -> Element {
        let mut out = Element::zero();
        for (w1, c1) in &self.terms {
            for (w2, c2) in &rhs.terms {
                out.add_term(w1.concat(w2), c1 * c2);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Element {
            type Output = Element;
            fn $m(self, rhs: Element) -> Element {
                (&self).$m(&rhs)
            }
        }
    )*};
}

forward_owned!(Add::add, Sub::sub, Mul::mul);

impl Neg for Element {
    type Output = Element;

    fn neg(self) -> Element {
        -&self
    }
}
