//! Builders for the named presentations: the nilpotent seed group on p
//! cyclically commuting generators, the one-relator family, and the
//! semidirect-product family with its index-p subgroup.

use crate::class2::{ClassTwoGroup, GeneratorAction, Word};
use crate::error::{Error, Result};
use crate::fpmod::Prime;

use super::{Character, ProPPresentation};

/// The seed group: generators g_0..g_(p-1) with [g_i, g_(i+1)] equal to a
/// common central element h = [g_0, g_1] and all other pairs commuting,
/// carrying the index-shift action sigma(g_i) = g_(i-1). Requires p > 3.
pub fn omega_presentation(p: Prime) -> Result<(ProPPresentation, GeneratorAction)> {
    p.require_greater_than_3()?;
    let d = p.get() as usize;
    let generators: Vec<String> = (0..d).map(|i| format!("g{i}")).collect();
    let gen = |i: usize| Word::generator(i % d);
    let h = Word::commutator(&gen(0), &gen(1));

    let mut relators = Vec::new();
    // [g_i, g_(i+1)] = h for i = 1..p-1 (i = 0 is the definition of h)
    for i in 1..d {
        relators.push(Word::commutator(&gen(i), &gen(i + 1)).concat(&h.inverse()));
    }
    // non-adjacent pairs commute (adjacency is cyclic)
    for i in 0..d {
        for j in (i + 1)..d {
            if (j - i) % d != 1 && (d + i - j) % d != 1 {
                relators.push(Word::commutator(&gen(i), &gen(j)));
            }
        }
    }
    // h is central
    for k in 0..d {
        relators.push(Word::commutator(&h, &gen(k)));
    }

    let pres = ProPPresentation::new(p, generators, relators)?;
    let group = ClassTwoGroup::new(p, d)?;
    let images = (0..d).map(|i| Word::generator((i + d - 1) % d)).collect();
    let action = GeneratorAction::new(&group, images)?;
    Ok((pres, action))
}

/// One-relator presentation on generators x1, x2 and x3..x_(2+extra):
/// x1^q f[x1,x2] prod_J [x_i, x_j] prod_K [x1^p, x_k], with the character
/// sending x1 to 1 and everything else to 0.
///
/// J and K reference the extra generators by their 1-based generator number
/// (so values in 3..=2+extra); which indices are allowed beyond that is not
/// constrained.
pub fn one_relator_presentation(
    p: Prime,
    q: u64,
    f: usize,
    j_pairs: &[(usize, usize)],
    k_set: &[usize],
    extra: usize,
) -> Result<(ProPPresentation, Character)> {
    p.require_odd()?;
    let pv = p.get();
    if f < 2 || f > pv as usize - 1 {
        return Err(Error::ParameterRange(format!(
            "f must satisfy 2 <= f <= p-1, got f = {f} at p = {pv}"
        )));
    }
    if !q.is_multiple_of(pv * pv) {
        return Err(Error::ParameterRange(format!(
            "q must be divisible by p^2 = {}, got q = {q}",
            pv * pv
        )));
    }
    let n = 2 + extra;
    let check_index = |label: &str, i: usize| -> Result<()> {
        if i < 3 || i > n {
            return Err(Error::ParameterRange(format!(
                "{label} index {i} outside the extra-generator range 3..={n}"
            )));
        }
        Ok(())
    };
    for &(a, b) in j_pairs {
        check_index("J", a)?;
        check_index("J", b)?;
    }
    for &k in k_set {
        check_index("K", k)?;
    }

    let generators: Vec<String> = (1..=n).map(|i| format!("x{i}")).collect();
    let gen = |i: usize| Word::generator(i - 1); // 1-based to 0-based
    let mut relator = Word::empty();
    relator.push(0, q as i64);
    relator = relator.concat(&Word::iterated_commutator(f, &gen(1), &gen(2)));
    for &(a, b) in j_pairs {
        relator = relator.concat(&Word::commutator(&gen(a), &gen(b)));
    }
    let x1_p = Word::from_letters(vec![(0, pv as i64)]);
    for &k in k_set {
        relator = relator.concat(&Word::commutator(&x1_p, &gen(k)));
    }

    let pres = ProPPresentation::new(p, generators, vec![relator])?;
    let mut chi = vec![0i64; n];
    chi[0] = 1;
    Ok((pres, Character::new(p, chi)?))
}

/// The semidirect-product family member and its index-p subgroup.
#[derive(Debug, Clone)]
pub struct FamilyPresentation {
    /// Gamma = (Omega * Sigma) x| Z_p on the seed generators, Sigma's
    /// generators and the acting generator s.
    pub gamma: ProPPresentation,
    /// chi(s) = 1, everything else 0; its kernel is Delta.
    pub chi: Character,
    /// Delta = (Omega * Sigma) x Z_p presented directly: disjoint union of
    /// the two presentations plus a central generator z.
    pub delta: ProPPresentation,
    /// Conjugation by s on Delta: g_i -> g_(i-1), Sigma generators and z
    /// fixed.
    pub delta_action: GeneratorAction,
}

/// Assemble the family member for a given Sigma (any presentation over the
/// same p with trivial action). Requires p > 3.
pub fn family_presentation(p: Prime, sigma_pres: &ProPPresentation) -> Result<FamilyPresentation> {
    p.require_greater_than_3()?;
    if sigma_pres.p() != p {
        return Err(Error::ParameterRange(format!(
            "Sigma presentation is over p = {}, expected {}",
            sigma_pres.p(),
            p
        )));
    }
    let (omega, _) = omega_presentation(p)?;
    let d = omega.num_generators();
    let m = sigma_pres.num_generators();

    let mut names: Vec<String> = omega.generator_names().to_vec();
    for name in sigma_pres.generator_names() {
        names.push(name.clone());
    }

    // Gamma: omega gens, sigma gens, s
    let mut gamma_names = names.clone();
    gamma_names.push("s".into());
    let shift = |w: &Word, offset: usize| -> Word {
        Word::from_letters(
            w.letters()
                .iter()
                .map(|l| (l.index + offset, l.exponent))
                .collect(),
        )
    };
    let mut gamma_rels: Vec<Word> = omega.relators().to_vec();
    for r in sigma_pres.relators() {
        gamma_rels.push(shift(r, d));
    }
    let s = Word::generator(d + m);
    for i in 0..d {
        // s g_i s^-1 g_(i-1)^-1
        let conj = s
            .concat(&Word::generator(i))
            .concat(&s.inverse())
            .concat(&Word::generator((i + d - 1) % d).inverse());
        gamma_rels.push(conj);
    }
    for j in 0..m {
        gamma_rels.push(Word::commutator(&s, &Word::generator(d + j)));
    }
    let gamma = ProPPresentation::new(p, gamma_names, gamma_rels)?;
    let mut chi_values = vec![0i64; d + m + 1];
    chi_values[d + m] = 1;
    let chi = Character::new(p, chi_values)?;

    // Delta: omega gens, sigma gens, central z
    let mut delta_names = names;
    delta_names.push("z".into());
    let mut delta_rels: Vec<Word> = omega.relators().to_vec();
    for r in sigma_pres.relators() {
        delta_rels.push(shift(r, d));
    }
    let z = Word::generator(d + m);
    for i in 0..(d + m) {
        delta_rels.push(Word::commutator(&z, &Word::generator(i)));
    }
    let delta = ProPPresentation::new(p, delta_names, delta_rels)?;

    let group = ClassTwoGroup::new(p, d + m + 1)?;
    let mut images: Vec<Word> = (0..d).map(|i| Word::generator((i + d - 1) % d)).collect();
    for j in 0..m {
        images.push(Word::generator(d + j));
    }
    images.push(z);
    let delta_action = GeneratorAction::new(&group, images)?;

    Ok(FamilyPresentation { gamma, chi, delta, delta_action })
}
