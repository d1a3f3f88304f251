use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use super::{AlgebraError, Element, Presentation};

/// An algebra map between presentations, fixed by the images of the
/// generators and an optional coefficient substitution `q ↦ q^k`.
#[derive(Debug, Clone)]
pub struct GeneratorMap {
    name: String,
    source: Arc<Presentation>,
    target: Arc<Presentation>,
    images: Vec<Element>,
    q_power: i32,
    star_compatible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationResidue {
    pub relation: String,
    pub residue: String,
    pub zero: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MorphismReport {
    pub morphism: String,
    pub source: String,
    pub target: String,
    pub relations: Vec<RelationResidue>,
    pub valid: bool,
}

pub const BUILTIN_MAPS: [&str; 5] = ["F", "r1", "r2", "rp2-inclusion", "disc-embedding"];

impl GeneratorMap {
    /// Builds a map from images given as expressions in the target.
    ///
    /// A generator whose image is not listed receives the adjoint of its
    /// partner's image when `star_compatible` is set; otherwise every
    /// generator must be listed.
    pub fn new(
        name: &str,
        source: Arc<Presentation>,
        target: Arc<Presentation>,
        images: &[(&str, &str)],
        q_power: i32,
        star_compatible: bool,
    ) -> Result<GeneratorMap, AlgebraError> {
        let n = source.generators().len();
        let mut slots: Vec<Option<Element>> = vec![None; n];
        for (g, expr) in images {
            let idx = source
                .generator_index(g)
                .ok_or_else(|| AlgebraError::UndefinedGenerator((*g).to_string()))?;
            slots[idx as usize] = Some(target.parse(expr)?);
        }
        for i in 0..n {
            if slots[i].is_some() {
                continue;
            }
            let partner = source.star_of(i as u8) as usize;
            match (&slots[partner], star_compatible) {
                (Some(img), true) => slots[i] = Some(target.star(img)),
                _ => {
                    return Err(AlgebraError::UndefinedGenerator(
                        source.generators()[i].name.clone(),
                    ))
                }
            }
        }
        Ok(GeneratorMap {
            name: name.to_string(),
            source,
            target,
            images: slots.into_iter().map(Option::unwrap).collect(),
            q_power,
            star_compatible,
        })
    }

    /// The maps used throughout: `F`, `r1`, `r2`, `rp2-inclusion` and
    /// `disc-embedding`.
    pub fn builtin(name: &str) -> Result<GeneratorMap, AlgebraError> {
        let sphere = Arc::new(Presentation::sphere(BigRational::one())?);
        match name {
            // K ↦ q⁻²b, L ↦ a.
            "F" => GeneratorMap::new(
                "F",
                sphere,
                Arc::new(Presentation::suq2_mod_b()),
                &[("K", "q^-2 b"), ("L", "a")],
                1,
                true,
            ),
            // Reflection in the equatorial plane.
            "r1" => GeneratorMap::new(
                "r1",
                sphere.clone(),
                sphere,
                &[("K", "-K"), ("L", "L")],
                1,
                true,
            ),
            // Antipodal map.
            "r2" => GeneratorMap::new(
                "r2",
                sphere.clone(),
                sphere,
                &[("K", "-K"), ("L", "-L")],
                1,
                true,
            ),
            "rp2-inclusion" => GeneratorMap::new(
                "rp2-inclusion",
                Arc::new(Presentation::rp2()),
                sphere,
                &[("P", "K^2"), ("R", "L^2"), ("T", "K L")],
                1,
                true,
            ),
            // O(D_{q^4}) onto the r1-fixed subalgebra. With the relation
            // written as x*x − q xx* = 1 − q the generator goes to L*.
            "disc-embedding" => GeneratorMap::new(
                "disc-embedding",
                Arc::new(Presentation::disc()),
                sphere,
                &[("x", "L'")],
                4,
                true,
            ),
            _ => Err(AlgebraError::UnknownMorphism(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn source(&self) -> &Arc<Presentation> {
        &self.source
    }

    pub fn target(&self) -> &Arc<Presentation> {
        &self.target
    }

    pub fn q_power(&self) -> i32 {
        self.q_power
    }

    pub fn is_star_compatible(&self) -> bool {
        self.star_compatible
    }

    pub fn image(&self, g: u8) -> &Element {
        &self.images[g as usize]
    }

    /// Image of `x` before normalization in the target.
    pub fn apply_raw(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.source.check(x)?;
        let mut out = Element::zero();
        for (w, c) in x.terms() {
            let image = w
                .letters()
                .iter()
                .fold(Element::one(), |acc, &g| &acc * &self.images[g as usize]);
            out = &out + &image.scale(&c.substitute_power(self.q_power));
        }
        Ok(out)
    }

    /// Image of `x`, in normal form.
    pub fn apply(&self, x: &Element) -> Result<Element, AlgebraError> {
        self.target.normal_form(&self.apply_raw(x)?)
    }

    /// Pushes every source rule through the map and normalizes the
    /// difference of the two sides in the target.
    pub fn verify(&self) -> Result<MorphismReport, AlgebraError> {
        let mut relations = Vec::new();
        for rule in self.source.rules() {
            let lhs = self.apply_raw(&Element::word(rule.lhs.clone()))?;
            let rhs = self.apply_raw(&rule.rhs)?;
            let residue = self.target.normal_form(&(&lhs - &rhs))?;
            relations.push(RelationResidue {
                relation: rule.label.clone(),
                zero: residue.is_zero(),
                residue: self.target.render(&residue),
            });
        }
        if self.star_compatible {
            for (i, g) in self.source.generators().iter().enumerate() {
                let partner = g.star as usize;
                if partner < i {
                    continue;
                }
                let image = &self.images[i];
                let expected = self.target.star(&self.images[partner]);
                let residue = self.target.normal_form(&(image - &expected))?;
                relations.push(RelationResidue {
                    relation: format!("{} = ({})*", g.name, self.source.generators()[partner].name),
                    zero: residue.is_zero(),
                    residue: self.target.render(&residue),
                });
            }
        }
        Ok(MorphismReport {
            morphism: self.name.clone(),
            source: self.source.name().to_string(),
            target: self.target.name().to_string(),
            valid: relations.iter().all(|r| r.zero),
            relations,
        })
    }

    /// `self ∘ first`.
    pub fn after(&self, first: &GeneratorMap) -> Result<GeneratorMap, AlgebraError> {
        if first.target.as_ref() != self.source.as_ref() {
            return Err(AlgebraError::NotComposable {
                first: first.name.clone(),
                second: self.name.clone(),
            });
        }
        let images = first
            .images
            .iter()
            .map(|img| self.apply(img))
            .collect::<Result<_, _>>()?;
        Ok(GeneratorMap {
            name: format!("{}∘{}", self.name, first.name),
            source: first.source.clone(),
            target: self.target.clone(),
            images,
            q_power: self.q_power * first.q_power,
            star_compatible: self.star_compatible && first.star_compatible,
        })
    }

    /// True when source and target agree and every generator is fixed.
    pub fn is_identity(&self) -> bool {
        self.source.as_ref() == self.target.as_ref()
            && self.q_power == 1
            && self
                .images
                .iter()
                .enumerate()
                .all(|(i, img)| *img == Element::generator(i as u8))
    }

    /// Whether `x` is fixed by this endomorphism.
    pub fn is_fixed(&self, x: &Element) -> Result<bool, AlgebraError> {
        if self.source.as_ref() != self.target.as_ref() {
            return Err(AlgebraError::NotEndomorphism(self.name.clone()));
        }
        let moved = self.apply_raw(x)?;
        Ok(self.target.normal_form(&(&moved - x))?.is_zero())
    }
}
