use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::coeff::write_unsigned_term;
use super::parse::parse_element;
use super::{AlgebraError, Element, Word};

/// Rewriting steps allowed in a single normal-form computation.
pub const STEP_BUDGET: usize = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    /// Index of the adjoint generator; equal to the own index when
    /// self-adjoint.
    pub star: u8,
}

/// An oriented relation `lhs → rhs` with `lhs` above every word of `rhs`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rule {
    pub label: String,
    pub lhs: Word,
    pub rhs: Element,
}

/// Which built-in algebra a presentation describes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraKind {
    /// Podleś sphere `O(S²_{q,s})`, generators `K = K*`, `L`, `L*`.
    Sphere { s: BigRational },
    /// Quantum disc `O(D_q)`, generators `x`, `x*`.
    Disc,
    /// Quantum real projective plane, generators `P = P*`, `R`, `R*`, `T`, `T*`.
    Rp2,
    /// `O(SU_{q²}(2)) / <b − b*>`, generators `a`, `a*`, `b = b*`.
    Suq2ModB,
}

/// A *-algebra given by generators, an involution on them and a
/// terminating rewrite system over Laurent-polynomial coefficients in `q`.
#[derive(Debug, Clone, PartialEq)]
pub struct Presentation {
    name: String,
    kind: AlgebraKind,
    generators: Vec<Generator>,
    rules: Vec<Rule>,
}

impl Presentation {
    /// Looks up a built-in presentation. `sphere` accepts a parameter
    /// `s ∈ [0, 1]` (default 1); the others take none.
    pub fn builtin(name: &str, s: Option<&BigRational>) -> Result<Presentation, AlgebraError> {
        if name != "sphere" && s.is_some() {
            return Err(AlgebraError::InvalidParameter(format!(
                "`{name}` takes no parameter s"
            )));
        }
        match name {
            "sphere" => Presentation::sphere(s.cloned().unwrap_or_else(BigRational::one)),
            "disc" => Ok(Presentation::disc()),
            "rp2" => Ok(Presentation::rp2()),
            "suq2_mod_b" => Ok(Presentation::suq2_mod_b()),
            _ => Err(AlgebraError::UnknownAlgebra(name.to_string())),
        }
    }

    /// Podleś sphere relations `K = K*`, `LK = q²KL`,
    /// `L*L + K² = (1−s²)K + s²`, `LL* + q⁴K² = (1−s²)q²K + s²`, with
    /// generator precedence `K < L < L*`.
    pub fn sphere(s: BigRational) -> Result<Presentation, AlgebraError> {
        if s.is_negative() || s > BigRational::one() {
            return Err(AlgebraError::InvalidParameter(format!(
                "s = {s} is outside [0, 1]"
            )));
        }
        let s2 = &s * &s;
        let t = BigRational::one() - &s2;
        let name = if s.is_one() {
            "sphere".to_string()
        } else {
            format!("sphere(s={s})")
        };
        let mut b = Builder::new(
            &name,
            AlgebraKind::Sphere { s: s.clone() },
            &[("K", "K"), ("L", "L'"), ("L'", "L")],
        );
        b.rule("LK = q^2 KL", "L K", "q^2 K L");
        b.rule("L*K = q^-2 KL*", "L' K", "q^-2 K L'");
        b.rule(
            "L*L + K^2 = (1-s^2)K + s^2",
            "L' L",
            &format!("-K^2 + {} K + {}", rat(&t), rat(&s2)),
        );
        b.rule(
            "LL* + q^4 K^2 = (1-s^2)q^2 K + s^2",
            "L L'",
            &format!("-q^4 K^2 + {} q^2 K + {}", rat(&t), rat(&s2)),
        );
        Ok(b.finish())
    }

    /// `x*x − q xx* = 1 − q`.
    pub fn disc() -> Presentation {
        let mut b = Builder::new("disc", AlgebraKind::Disc, &[("x", "x'"), ("x'", "x")]);
        b.rule("x*x - q xx* = 1 - q", "x' x", "q x x' + 1 - q");
        b.finish()
    }

    /// The fixed-point algebra of the antipodal action, generated by
    /// `P = K²`, `R = L²`, `T = KL`.
    ///
    /// Generator precedence is `P < R < R* < T < T*`, which makes the
    /// irreducible words exactly `P^k R^l`, `P^k R*^l`, `P^k R^l T` and
    /// `P^k R*^l T*`. Rules marked `*` are adjoints of listed relations.
    pub fn rp2() -> Presentation {
        let mut b = Builder::new(
            "rp2",
            AlgebraKind::Rp2,
            &[("P", "P"), ("R", "R'"), ("R'", "R"), ("T", "T'"), ("T'", "T")],
        );
        b.rule("RP = q^8 PR", "R P", "q^8 P R");
        b.rule("(RP = q^8 PR)*", "R' P", "q^-8 P R'");
        b.rule("PT = q^-4 TP", "T P", "q^4 P T");
        b.rule("(PT = q^-4 TP)*", "T' P", "q^-4 P T'");
        b.rule("RT = q^4 TR", "T R", "q^-4 R T");
        b.rule("(RT = q^4 TR)*", "T' R'", "q^4 R' T'");
        b.rule("T^2 = q^2 PR", "T T", "q^2 P R");
        b.rule("(T^2 = q^2 PR)*", "T' T'", "q^-6 P R'");
        b.rule("RT* = q^2 T(-q^4 P + 1)", "R T'", "-q^10 P T + q^2 T");
        b.rule("(RT* = q^2 T(-q^4 P + 1))*", "T R'", "-q^6 P T' + q^2 T'");
        b.rule("R*T = q^-2 T*(-P + 1)", "R' T", "-q^-6 P T' + q^-2 T'");
        b.rule("(R*T = q^-2 T*(-P + 1))*", "T' R", "-q^-2 P T + q^-2 T");
        b.rule(
            "RR* = q^12 P^2 - q^4(1 + q^4)P + 1",
            "R R'",
            "q^12 P^2 - (q^4 + q^8) P + 1",
        );
        b.rule(
            "R*R = q^-4 P^2 - (1 + q^-4)P + 1",
            "R' R",
            "q^-4 P^2 - (1 + q^-4) P + 1",
        );
        b.rule("TT* = -q^4 P^2 + P", "T T'", "-q^4 P^2 + P");
        b.rule("T*T = q^-4(P - P^2)", "T' T", "q^-4 P - q^-4 P^2");
        b.finish()
    }

    /// `O(SU_ν(2))` at `ν = q²` with `α = a`, `γ = q⁻²b*`, modulo `b = b*`:
    /// `ab = q²ba`, `a*a + q⁻⁴b² = 1`, `aa* + b² = 1`, precedence `a < a* < b`.
    ///
    /// With this precedence both quadratic relations have leading word `b²`;
    /// their difference gives the rule for `a*a`.
    pub fn suq2_mod_b() -> Presentation {
        let mut b = Builder::new(
            "suq2_mod_b",
            AlgebraKind::Suq2ModB,
            &[("a", "a'"), ("a'", "a"), ("b", "b")],
        );
        b.rule("ab = q^2 ba", "b a", "q^-2 a b");
        b.rule("(ab = q^2 ba)*", "b a'", "q^2 a' b");
        b.rule("aa* + b^2 = 1", "b b", "1 - a a'");
        b.rule(
            "a*a + q^-4 b^2 = 1",
            "a' a",
            "q^-4 a a' + 1 - q^-4",
        );
        b.finish()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kind(&self) -> &AlgebraKind {
        &self.kind
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn generator_index(&self, name: &str) -> Option<u8> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .map(|i| i as u8)
    }

    /// Panics on an unknown name; for use with literal generator names.
    pub fn gen(&self, name: &str) -> Element {
        let g = self
            .generator_index(name)
            .unwrap_or_else(|| panic!("{} has no generator {name}", self.name));
        Element::generator(g)
    }

    pub fn star_of(&self, g: u8) -> u8 {
        self.generators[g as usize].star
    }

    pub fn is_self_adjoint(&self, g: u8) -> bool {
        self.star_of(g) == g
    }

    /// Parses an expression over this presentation's generators.
    pub fn parse(&self, text: &str) -> Result<Element, AlgebraError> {
        parse_element(text, self)
    }

    /// Checks that every letter of `x` is a generator of this presentation.
    pub fn check(&self, x: &Element) -> Result<(), AlgebraError> {
        let n = self.generators.len();
        for (w, _) in x.terms() {
            if let Some(&g) = w.letters().iter().find(|&&g| g as usize >= n) {
                return Err(AlgebraError::GeneratorMismatch {
                    algebra: self.name.clone(),
                    index: g,
                });
            }
        }
        Ok(())
    }

    /// Product in the free algebra, after checking both factors.
    pub fn product(&self, x: &Element, y: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        self.check(y)?;
        Ok(x * y)
    }

    /// The conjugate-linear anti-involution; coefficients are real, so it
    /// reverses words and stars letters.
    pub fn star(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (w, c) in x.terms() {
            let letters = w.letters().iter().rev().map(|&g| self.star_of(g)).collect();
            out.add_term(Word(letters), c.clone());
        }
        out
    }

    /// The first rule whose left side occurs in `w`, and where.
    pub fn find_redex(&self, w: &Word) -> Option<(usize, &Rule)> {
        self.rules
            .iter()
            .filter_map(|r| w.find(&r.lhs).map(|pos| (pos, r)))
            .min_by_key(|(pos, _)| *pos)
    }

    pub fn is_normal_word(&self, w: &Word) -> bool {
        self.find_redex(w).is_none()
    }

    pub fn is_normal(&self, x: &Element) -> bool {
        x.terms().all(|(w, _)| self.is_normal_word(w))
    }

    /// Rewrites `x` until no rule applies.
    ///
    /// Pending terms are processed from the largest word down. Every rule
    /// strictly decreases words in the degree-lexicographic order, so a word
    /// that has been popped can never be produced again and its coefficient
    /// is final when it is reached.
    pub fn normal_form(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.check(x)?;
        let mut pending = x.clone().into_terms();
        let mut done = BTreeMap::new();
        let mut steps = 0usize;
        while let Some((w, c)) = pending.pop_last() {
            let Some((pos, rule)) = self.find_redex(&w) else {
                done.insert(w, c);
                continue;
            };
            steps += 1;
            if steps > STEP_BUDGET {
                return Err(AlgebraError::StepBudgetExceeded {
                    algebra: self.name.clone(),
                    steps: STEP_BUDGET,
                });
            }
            let letters = w.letters();
            let (prefix, suffix) = (&letters[..pos], &letters[pos + rule.lhs.len()..]);
            for (rw, rc) in rule.rhs.terms() {
                let mut nw = Vec::with_capacity(prefix.len() + rw.len() + suffix.len());
                nw.extend_from_slice(prefix);
                nw.extend_from_slice(rw.letters());
                nw.extend_from_slice(suffix);
                let nc = &c * rc;
                let word = Word(nw);
                match pending.get_mut(&word) {
                    Some(existing) => {
                        *existing += &nc;
                        if existing.is_zero() {
                            pending.remove(&word);
                        }
                    }
                    None => {
                        pending.insert(word, nc);
                    }
                }
            }
        }
        Ok(Element::from_terms(done))
    }

    pub fn render_word(&self, w: &Word) -> String {
        if w.is_unit() {
            return "1".to_string();
        }
        let mut out = String::new();
        let letters = w.letters();
        let mut i = 0;
        while i < letters.len() {
            let g = letters[i];
            let run = letters[i..].iter().take_while(|&&x| x == g).count();
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(&self.generators[g as usize].name);
            if run > 1 {
                let _ = write!(out, "^{run}");
            }
            i += run;
        }
        out
    }

    /// Human-readable form, largest monomial first; accepted back by
    /// [`Presentation::parse`].
    pub fn render(&self, x: &Element) -> String {
        Rendered { p: self, x }.to_string()
    }
}

struct Rendered<'a> {
    p: &'a Presentation,
    x: &'a Element,
}

impl fmt::Display for Rendered<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.x.is_zero() {
            return f.write_str("0");
        }
        for (i, (w, c)) in self.x.terms().rev().enumerate() {
            let (negative, single) = match c.as_monomial() {
                Some((r, e)) => (r.is_negative(), Some((r, e))),
                None => (false, None),
            };
            match (i, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let word = (!w.is_unit()).then(|| self.p.render_word(w));
            match single {
                Some((r, e)) => {
                    let trivial = r.abs().is_one() && e == 0;
                    write_unsigned_term(f, r, e, word.is_none())?;
                    if let Some(word) = word {
                        if !trivial {
                            f.write_str(" ")?;
                        }
                        f.write_str(&word)?;
                    }
                }
                None => {
                    write!(f, "{c}")?;
                    if let Some(word) = word {
                        write!(f, " {word}")?;
                    }
                }
            }
        }
        Ok(())
    }
}

fn rat(r: &BigRational) -> String {
    format!("({}/{})", r.numer(), r.denom())
}

struct Builder {
    p: Presentation,
}

impl Builder {
    fn new(name: &str, kind: AlgebraKind, gens: &[(&str, &str)]) -> Self {
        let generators = gens
            .iter()
            .map(|(n, s)| Generator {
                name: n.to_string(),
                star: gens.iter().position(|(m, _)| m == s).expect("star partner") as u8,
            })
            .collect();
        Builder {
            p: Presentation {
                name: name.to_string(),
                kind,
                generators,
                rules: Vec::new(),
            },
        }
    }

    fn rule(&mut self, label: &str, lhs: &str, rhs: &str) {
        let lhs = self.p.parse(lhs).expect("rule lhs");
        let (word, coeff) = lhs.leading().expect("nonzero lhs");
        assert!(lhs.len() == 1 && coeff.is_one(), "rule lhs must be a word");
        let word = word.clone();
        let rhs = self.p.parse(rhs).expect("rule rhs");
        assert!(
            rhs.terms().all(|(w, _)| *w < word),
            "rule `{label}` is not decreasing"
        );
        self.p.rules.push(Rule {
            label: label.to_string(),
            lhs: word,
            rhs,
        });
    }

    fn finish(self) -> Presentation {
        self.p
    }
}

/// Parses `"1/2"`, `"3"` or `"0.5"`-free rational text.
pub fn parse_rational(text: &str) -> Result<BigRational, AlgebraError> {
    let bad = || AlgebraError::InvalidParameter(format!("`{text}` is not a rational number"));
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (text.trim(), "1"),
    };
    let num: BigInt = num.parse().map_err(|_| bad())?;
    let den: BigInt = den.parse().map_err(|_| bad())?;
    if den.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn nf(p: &Presentation, s: &str) -> Element {
        p.normal_form(&p.parse(s).unwrap()).unwrap()
    }

    #[test]
    fn sphere_examples() {
        let sp = Presentation::sphere(BigRational::one()).unwrap();
        assert_eq!(nf(&sp, "L K"), sp.parse("q^2 K L").unwrap());
        assert_eq!(nf(&sp, "L' L"), sp.parse("1 - K^2").unwrap());
        assert_eq!(nf(&sp, "L L'"), sp.parse("1 - q^4 K^2").unwrap());
        assert_eq!(nf(&sp, "1"), Element::one());
        // K* is K.
        assert_eq!(sp.parse("K'").unwrap(), sp.gen("K"));
    }

    #[test]
    fn sphere_at_general_s() {
        let half = BigRational::new(1.into(), 2.into());
        let sp = Presentation::sphere(half).unwrap();
        assert_eq!(nf(&sp, "L' L"), sp.parse("-K^2 + (3/4) K + 1/4").unwrap());
        assert!(Presentation::sphere(BigRational::from_integer(2.into())).is_err());
        assert!(Presentation::sphere(BigRational::from_integer((-1).into())).is_err());
    }

    #[test]
    fn rp2_examples() {
        let rp = Presentation::rp2();
        assert_eq!(nf(&rp, "T T"), rp.parse("q^2 P R").unwrap());
        assert_eq!(nf(&rp, "T*T"), rp.parse("q^-4 P - q^-4 P^2").unwrap());
        assert_eq!(nf(&rp, "R' T"), nf(&rp, "q^-2 T'(1 - P)"));
        assert_eq!(nf(&rp, "R' T"), rp.parse("q^-2 T' - q^-6 P T'").unwrap());
    }

    #[test]
    fn disc_example() {
        let d = Presentation::disc();
        assert_eq!(nf(&d, "x' x"), d.parse("q x x' + 1 - q").unwrap());
    }

    #[test]
    fn rules_decrease() {
        for p in [
            Presentation::sphere(BigRational::one()).unwrap(),
            Presentation::disc(),
            Presentation::rp2(),
            Presentation::suq2_mod_b(),
        ] {
            for r in p.rules() {
                assert!(r.rhs.terms().all(|(w, _)| *w < r.lhs), "{}", r.label);
            }
        }
    }

    #[test]
    fn involution_reverses_and_stars() {
        let sp = Presentation::sphere(BigRational::one()).unwrap();
        let kl = sp.parse("K L").unwrap();
        assert_eq!(sp.star(&kl), sp.parse("L' K").unwrap());
        assert_eq!(sp.star(&sp.star(&kl)), kl);
    }

    #[test]
    fn rendering_round_trips() {
        let rp = Presentation::rp2();
        for s in [
            "q^2 P R",
            "-(3/2) q^-4 P^2 R' T' + (q^2 - q^6) T - 1",
            "0",
            "q",
            "2 R R",
        ] {
            let x = rp.parse(s).unwrap();
            assert_eq!(rp.parse(&rp.render(&x)).unwrap(), x, "{}", rp.render(&x));
        }
        assert_eq!(rp.render(&rp.parse("q^2 P R").unwrap()), "q^2 P R");
        assert_eq!(rp.render(&rp.parse("-T T'").unwrap()), "-T T'");
    }

    #[test]
    fn parse_errors() {
        let rp = Presentation::rp2();
        assert!(matches!(rp.parse("K"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(rp.parse("P^-1"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(rp.parse("(P"), Err(AlgebraError::Parse { .. })));
        assert!(matches!(rp.parse("2*P"), Err(AlgebraError::Parse { .. })));
        assert!(rp.parse("(3/2)q^-4").is_ok());
    }

    #[test]
    fn generator_mismatch() {
        let disc = Presentation::disc();
        let rp = Presentation::rp2();
        let t = rp.gen("T'");
        assert!(matches!(
            disc.normal_form(&t),
            Err(AlgebraError::GeneratorMismatch { .. })
        ));
    }

    #[test]
    fn builtin_lookup() {
        assert!(Presentation::builtin("sphere", None).is_ok());
        assert!(Presentation::builtin("torus", None).is_err());
        let half = BigRational::new(1.into(), 2.into());
        assert!(Presentation::builtin("disc", Some(&half)).is_err());
        assert_eq!(parse_rational("3/6").unwrap(), half);
        assert!(parse_rational("1/0").is_err());
    }
}
