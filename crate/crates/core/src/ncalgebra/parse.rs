//! Expression grammar for algebra elements.
//!
//! ```text
//! expr    := ['+' | '-'] term (('+' | '-') term)*
//! term    := factor factor*                  (juxtaposition)
//! factor  := primary ['^' ['-'] digits]
//! primary := digits ['/' digits] | 'q' | generator star* | '(' expr ')'
//! star    := '\'' | '*'
//! ```
//!
//! Generators are single letters; `K L'` and `KL'` both denote `K·L*`.
//! Negative powers are accepted only for single-term scalars such as `q^-4`.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{AlgebraError, Coefficient, Element, Presentation};

pub(crate) fn parse_element(text: &str, p: &Presentation) -> Result<Element, AlgebraError> {
    let mut parser = Parser {
        chars: text.chars().collect(),
        pos: 0,
        presentation: p,
    };
    let e = parser.expr()?;
    parser.skip_ws();
    if parser.pos < parser.chars.len() {
        return Err(parser.error(format!("unexpected `{}`", parser.chars[parser.pos])));
    }
    Ok(e)
}

struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    presentation: &'a Presentation,
}

impl Parser<'_> {
    fn error(&self, message: impl Into<String>) -> AlgebraError {
        AlgebraError::Parse {
            position: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.chars.get(self.pos).is_some_and(|c| c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<Element, AlgebraError> {
        let mut negate = false;
        match self.peek() {
            Some('-') => {
                negate = true;
                self.pos += 1;
            }
            Some('+') => self.pos += 1,
            _ => {}
        }
        let first = self.term()?;
        let mut acc = if negate { -first } else { first };
        loop {
            match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some('-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Element, AlgebraError> {
        let mut acc = self.factor()?;
        while let Some(c) = self.peek() {
            if c == '(' || c.is_ascii_alphanumeric() {
                acc = &acc * &self.factor()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Element, AlgebraError> {
        let base = self.primary()?;
        if self.peek() != Some('^') {
            return Ok(base);
        }
        self.pos += 1;
        let negative = if self.peek() == Some('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let start = self.pos;
        let digits = self.digits();
        let exp: u32 = digits
            .parse()
            .map_err(|_| AlgebraError::Parse {
                position: start,
                message: "expected an integer exponent".into(),
            })?;
        if !negative {
            return Ok(base.pow(exp));
        }
        let inverse = (base.len() == 1)
            .then(|| base.leading())
            .flatten()
            .filter(|(w, _)| w.is_unit())
            .and_then(|(_, c)| c.inverse())
            .ok_or_else(|| self.error("negative powers need a single-term scalar base"))?;
        Ok(Element::scalar(inverse).pow(exp))
    }

    fn digits(&mut self) -> String {
        self.skip_ws();
        let start = self.pos;
        while self.chars.get(self.pos).is_some_and(char::is_ascii_digit) {
            self.pos += 1;
        }
        self.chars[start..self.pos].iter().collect()
    }

    fn primary(&mut self) -> Result<Element, AlgebraError> {
        match self.peek() {
            Some('(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(')') {
                    return Err(self.error("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num: BigInt = self.digits().parse().expect("digits");
                let mut value = BigRational::from_integer(num);
                if self.peek() == Some('/') {
                    self.pos += 1;
                    let den_text = self.digits();
                    let den: BigInt = den_text
                        .parse()
                        .map_err(|_| self.error("expected a denominator"))?;
                    if den == BigInt::from(0) {
                        return Err(self.error("zero denominator"));
                    }
                    value /= BigRational::from_integer(den);
                }
                Ok(Element::scalar(Coefficient::constant(value)))
            }
            Some('q') => {
                self.pos += 1;
                Ok(Element::scalar(Coefficient::q_pow(1)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                self.pos += 1;
                let mut g = self
                    .presentation
                    .generator_index(&c.to_string())
                    .ok_or_else(|| AlgebraError::Parse {
                        position: self.pos - 1,
                        message: format!(
                            "`{c}` is not a generator of {}",
                            self.presentation.name()
                        ),
                    })?;
                while matches!(self.chars.get(self.pos), Some('\'') | Some('*')) {
                    self.pos += 1;
                    g = self.presentation.star_of(g);
                }
                Ok(Element::generator(g))
            }
            Some(c) => Err(self.error(format!("unexpected `{c}`"))),
            None => Err(self.error("unexpected end of input")),
        }
    }
}
