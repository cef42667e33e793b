//! Finitely presented pro-p-groups, index-p subgroups named by characters,
//! and the Reidemeister-Schreier route from a presentation to the T-group of
//! the corresponding degree-p situation.

mod builders;
mod parse;
mod schreier;

pub use builders::{
    one_relator_presentation, family_presentation, omega_presentation, FamilyPresentation,
};
pub use parse::{parse_document, parse_word, Document};
pub use schreier::{schreier_tgroup, zp2_lift_exists, TQuotientResult};

use crate::class2::Word;
use crate::error::{Error, Result};
use crate::fpmod::Prime;

/// A pro-p-group given by named generators and relator words. Relators are
/// stored as written; normalization happens at evaluation.
#[derive(Debug, Clone)]
pub struct ProPPresentation {
    p: Prime,
    generators: Vec<String>,
    relators: Vec<Word>,
}

impl ProPPresentation {
    pub fn new(p: Prime, generators: Vec<String>, relators: Vec<Word>) -> Result<Self> {
        let mut seen = std::collections::BTreeSet::new();
        for name in &generators {
            if name.is_empty() {
                return Err(Error::ParameterRange("empty generator name".into()));
            }
            if !seen.insert(name.clone()) {
                return Err(Error::ParameterRange(format!(
                    "duplicate generator name `{name}`"
                )));
            }
        }
        for (i, r) in relators.iter().enumerate() {
            if let Some(max) = r.max_index() {
                if max >= generators.len() {
                    return Err(Error::ParameterRange(format!(
                        "relator {i} references generator index {max}, presentation has {}",
                        generators.len()
                    )));
                }
            }
        }
        Ok(ProPPresentation { p, generators, relators })
    }

    /// Free pro-p-group: n generators, no relators.
    pub fn free(p: Prime, rank: usize) -> Self {
        let generators = (0..rank).map(|i| format!("x{}", i + 1)).collect();
        ProPPresentation { p, generators, relators: Vec::new() }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn generator_names(&self) -> &[String] {
        &self.generators
    }

    pub fn generator_index(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g == name)
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    /// The same presentation with extra relators appended.
    pub fn with_extra_relators(&self, extra: &[Word]) -> Result<Self> {
        let mut relators = self.relators.clone();
        relators.extend_from_slice(extra);
        ProPPresentation::new(self.p, self.generators.clone(), relators)
    }

    /// Integer exponent-sum vector of each relator.
    pub fn relator_exponent_sums(&self) -> Vec<Vec<i64>> {
        self.relators
            .iter()
            .map(|r| r.exponent_sums(self.generators.len()))
            .collect()
    }

    fn word_to_text(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|l| {
                let name = &self.generators[l.index];
                if l.exponent == 1 {
                    name.clone()
                } else {
                    format!("{name}^{}", l.exponent)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Render to the line-oriented text format understood by the parser.
    pub fn to_text(
        &self,
        chi: Option<&Character>,
        action: Option<&crate::class2::GeneratorAction>,
    ) -> String {
        let mut out = String::new();
        out.push_str(&format!("p {}\n", self.p));
        out.push_str(&format!("gens {}\n", self.generators.join(" ")));
        for r in &self.relators {
            out.push_str(&format!("rel {}\n", self.word_to_text(r)));
        }
        if let Some(chi) = chi {
            let parts: Vec<String> = self
                .generators
                .iter()
                .enumerate()
                .map(|(i, g)| format!("{g}={}", chi.value(i)))
                .collect();
            out.push_str(&format!("chi {}\n", parts.join(" ")));
        }
        if let Some(action) = action {
            for (i, g) in self.generators.iter().enumerate() {
                out.push_str(&format!("map {g} {}\n", self.word_to_text(action.image(i))));
            }
        }
        out
    }
}

/// An F_p-valued character on the generators, not identically zero. Its
/// kernel names the index-p subgroup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Character {
    p: Prime,
    values: Vec<u64>,
}

impl Character {
    pub fn new(p: Prime, values: Vec<i64>) -> Result<Self> {
        let values: Vec<u64> = values.iter().map(|&v| p.reduce(v)).collect();
        if values.iter().all(|&v| v == 0) {
            return Err(Error::ZeroCharacter);
        }
        Ok(Character { p, values })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn value(&self, generator: usize) -> u64 {
        self.values[generator]
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    /// chi applied to a word: the mod-p pairing with its exponent sums.
    pub fn of_word(&self, w: &Word) -> u64 {
        let mut acc: i64 = 0;
        let p = self.p.get() as i64;
        for l in w.letters() {
            acc = (acc + (l.exponent.rem_euclid(p)) * self.values[l.index] as i64) % p;
        }
        acc.rem_euclid(p) as u64
    }

    /// First generator with nonzero value.
    pub fn designated_generator(&self) -> usize {
        self.values
            .iter()
            .position(|&v| v != 0)
            .expect("character is nonzero by construction")
    }

    /// Rescale by a unit so the designated generator has value 1.
    pub fn rescaled(&self) -> Character {
        let s = self.designated_generator();
        let inv = self.p.inv(self.values[s]);
        Character {
            p: self.p,
            values: self.values.iter().map(|&v| self.p.mul(v, inv)).collect(),
        }
    }

    pub fn scaled(&self, c: u64) -> Result<Character> {
        Character::new(
            self.p,
            self.values
                .iter()
                .map(|&v| self.p.mul(v, c) as i64)
                .collect(),
        )
    }

    /// chi must vanish on every relator to define a character of the
    /// presented group.
    pub fn validate_on(&self, pres: &ProPPresentation) -> Result<()> {
        if self.len() != pres.num_generators() {
            return Err(Error::DimensionMismatch(format!(
                "character on {} generators against presentation with {}",
                self.len(),
                pres.num_generators()
            )));
        }
        for (i, r) in pres.relators().iter().enumerate() {
            let v = self.of_word(r);
            if v != 0 {
                return Err(Error::CharacterNotOnGroup { index: i, value: v });
            }
        }
        Ok(())
    }
}
