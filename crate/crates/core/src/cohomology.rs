//! H^1 and decomposable-H^2 Jordan types of presented pro-p-groups carrying
//! a C_p-action.
//!
//! H^1 is the dual of Gamma/Phi(Gamma): the quotient of F_p^d by the span of
//! the relators' mod-p exponent vectors. The decomposable part of H^2 is
//! computed through the class-2 quotient: for a minimal presentation the
//! relators land in the central subgroup of W_d, and the F_p C-module closure
//! of their coordinate span is the relation subgroup's image R V^(3)/V^(3),
//! whose dual has the same Jordan type by self-duality of cyclic modules.

use crate::class2::{induced_central_action, ClassTwoGroup, GeneratorAction, Word};
use crate::error::{Error, Result};
use crate::fpmod::{
    jordan_type, rref, submodule_type, FpMatrix, FpVector, JordanType, NilpotentAction, Prime,
    Subspace,
};
use crate::presentation::ProPPresentation;

/// H^1 and decomposable-H^2 types of one group, over a fixed prime.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyProfile {
    pub p: Prime,
    pub h1: JordanType,
    pub h2dec: JordanType,
}

impl CohomologyProfile {
    /// Profile of the trivial group.
    pub fn trivial(p: Prime) -> Self {
        CohomologyProfile { p, h1: JordanType::empty(), h2dec: JordanType::empty() }
    }

    /// Profile of a rank-1 procyclic group with trivial action.
    pub fn procyclic(p: Prime) -> Self {
        CohomologyProfile {
            p,
            h1: JordanType::from_pairs(&[(1, 1)]),
            h2dec: JordanType::empty(),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "h1": self.h1.to_json(),
            "h2dec": self.h2dec.to_json(),
        })
    }
}

fn exponent_matrix(group: &ClassTwoGroup, act: &GeneratorAction) -> Result<FpMatrix> {
    let p = group.p();
    let d = group.rank();
    let mut m = FpMatrix::zero(p, d, d);
    for j in 0..d {
        let e = group.evaluate(act.image(j))?;
        for i in 0..d {
            m[(i, j)] = e.a()[i] % p.get();
        }
    }
    Ok(m)
}

/// Mod-p exponent vectors of the relators.
fn relator_linear_parts(pres: &ProPPresentation) -> Vec<FpVector> {
    let p = pres.p();
    pres.relator_exponent_sums()
        .iter()
        .map(|sums| sums.iter().map(|&s| p.reduce(s)).collect())
        .collect()
}

/// Jordan type of H^1 = dual of Gamma/Phi(Gamma) with the induced action:
/// the quotient of F_p^d by the relators' linear parts. The compatibility
/// check here is the linear one: the action must map the span of linear
/// parts into itself.
pub fn h1_type(pres: &ProPPresentation, act: &GeneratorAction) -> Result<JordanType> {
    let p = pres.p();
    let d = pres.num_generators();
    let group = ClassTwoGroup::new(p, d)?;
    let s = exponent_matrix(&group, act)?;
    let linear_parts = relator_linear_parts(pres);
    let span = Subspace::from_spanning(p, d, linear_parts.clone());
    for (i, v) in linear_parts.iter().enumerate() {
        if !span.contains(&s.mul_vec(v)) {
            return Err(Error::IncompatibleAction(format!(
                "the action moves the linear part of relator {i} outside the relator span"
            )));
        }
    }

    // induced action on the quotient: coordinates on the non-pivot columns
    let (rows, pivots) = rref(p, span.basis().to_vec());
    let free: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
    let reduce_to_free = |v: &FpVector| -> FpVector {
        let mut w = v.clone();
        for (r, &c) in pivots.iter().enumerate() {
            let f = w[c];
            if f != 0 {
                for j in 0..d {
                    w[j] = p.sub(w[j], p.mul(f, rows[r][j]));
                }
            }
        }
        free.iter().map(|&j| w[j]).collect()
    };
    let k = free.len();
    let mut induced = FpMatrix::zero(p, k, k);
    for (col, &j) in free.iter().enumerate() {
        let mut e = vec![0u64; d];
        e[j] = 1;
        let image = reduce_to_free(&s.mul_vec(&e));
        for row in 0..k {
            induced[(row, col)] = image[row];
        }
    }
    let a = induced.sub(&FpMatrix::identity(p, k));
    let action = NilpotentAction::new(p, a)
        .map_err(|_| Error::IncompatibleAction("induced map on H^1 is not unipotent".into()))?;
    // H^1 is the dual of the quotient; self-duality makes this a no-op
    Ok(jordan_type(&action).dual())
}

/// Central coordinates of every relator in W_d. Errors with `NotMinimal`,
/// naming the offending relator, when some relator has a nonzero mod-p
/// linear part; minimality is enforced, not repaired.
fn relator_central_coords(
    group: &ClassTwoGroup,
    pres: &ProPPresentation,
) -> Result<Vec<FpVector>> {
    let mut coords = Vec::with_capacity(pres.relators().len());
    for (i, r) in pres.relators().iter().enumerate() {
        let x = group.evaluate(r)?;
        match group.central_coords(&x) {
            Ok(c) => coords.push(c),
            Err(Error::NotCentral { .. }) => {
                let p = pres.p();
                let vector: FpVector =
                    r.exponent_sums(pres.num_generators())
                        .iter()
                        .map(|&s| p.reduce(s))
                        .collect();
                return Err(Error::NotMinimal { index: i, vector });
            }
            Err(e) => return Err(e),
        }
    }
    Ok(coords)
}

/// Jordan type of the decomposable part of H^2 for a minimal presentation:
/// the module closure of the relators' central coordinates under the induced
/// central action. Validates that the action maps every relator into the
/// relation subgroup's class-2 image.
pub fn h2dec_type(pres: &ProPPresentation, act: &GeneratorAction) -> Result<JordanType> {
    h2dec_data(pres, act).map(|(_, _, t)| t)
}

/// As `h2dec_type`, but also returns the relator coordinates and the induced
/// central action so that callers can embed re-verifiable data in witnesses.
pub fn h2dec_data(
    pres: &ProPPresentation,
    act: &GeneratorAction,
) -> Result<(Vec<FpVector>, NilpotentAction, JordanType)> {
    h2dec_data_with_sign(pres, act, crate::class2::WedgeSign::Standard)
}

/// `h2dec_data` with an explicit wedge-sign convention. The returned Jordan
/// type must not depend on the convention; exposing the choice lets tests
/// assert that instead of assuming it.
pub fn h2dec_data_with_sign(
    pres: &ProPPresentation,
    act: &GeneratorAction,
    sign: crate::class2::WedgeSign,
) -> Result<(Vec<FpVector>, NilpotentAction, JordanType)> {
    let p = pres.p();
    let group = ClassTwoGroup::with_sign(p, pres.num_generators(), sign)?;
    let act = &GeneratorAction::new(&group, act.images().to_vec())?;
    let coords = relator_central_coords(&group, pres)?;
    let span = Subspace::from_spanning(p, group.central_dim(), coords.clone());
    for (i, r) in pres.relators().iter().enumerate() {
        let image = group.evaluate(&act.substitute(r))?;
        let c = group.central_coords(&image).map_err(|_| {
            Error::IncompatibleAction(format!(
                "the action sends relator {i} to a non-central element"
            ))
        })?;
        if !span.contains(&c) {
            return Err(Error::IncompatibleAction(format!(
                "the action sends relator {i} outside the relation subgroup"
            )));
        }
    }
    let action = induced_central_action(&group, act)?;
    // the closure is the class-2 image of the relation subgroup; its dual is
    // the decomposable H^2, and cyclic modules are self-dual
    let jt = submodule_type(&action, &coords)?.dual();
    Ok((coords, action, jt))
}

/// Full H^2 is intentionally not computed.
pub fn h2_full_type(_pres: &ProPPresentation, _act: &GeneratorAction) -> Result<JordanType> {
    Err(Error::Unsupported(
        "full H^2 needs a p-cover algorithm; only the decomposable part is available".into(),
    ))
}

/// Both cohomology types of one presented group.
pub fn profile(pres: &ProPPresentation, act: &GeneratorAction) -> Result<CohomologyProfile> {
    Ok(CohomologyProfile {
        p: pres.p(),
        h1: h1_type(pres, act)?,
        h2dec: h2dec_type(pres, act)?,
    })
}

/// How two profiles combine.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProductKind {
    /// Free product: both degrees add.
    FreeProduct,
    /// Direct product with a rank-1 procyclic factor carrying the trivial
    /// action: H^1 gains a trivial line, H^2 gains a copy of H^1.
    DirectWithProcyclic,
}

pub fn product_profile(
    a: &CohomologyProfile,
    b: &CohomologyProfile,
    kind: ProductKind,
) -> Result<CohomologyProfile> {
    if a.p != b.p {
        return Err(Error::ParameterRange(format!(
            "profiles over different primes {} and {}",
            a.p, b.p
        )));
    }
    match kind {
        ProductKind::FreeProduct => Ok(CohomologyProfile {
            p: a.p,
            h1: a.h1.direct_sum(&b.h1),
            h2dec: a.h2dec.direct_sum(&b.h2dec),
        }),
        ProductKind::DirectWithProcyclic => {
            if *b != CohomologyProfile::procyclic(a.p) {
                return Err(Error::ParameterRange(
                    "second factor must be the rank-1 procyclic profile".into(),
                ));
            }
            Ok(CohomologyProfile {
                p: a.p,
                h1: a.h1.direct_sum(&b.h1),
                h2dec: a.h2dec.direct_sum(&a.h1),
            })
        }
    }
}

/// Adding relators that are trivial in the class-2 quotient must leave the
/// decomposable H^2 type unchanged; any difference is a library defect.
/// Errors if an extra relator is not class-2 trivial.
pub fn v3_invariance_check(
    pres: &ProPPresentation,
    act: &GeneratorAction,
    extra_relators: &[Word],
) -> Result<bool> {
    let group = ClassTwoGroup::new(pres.p(), pres.num_generators())?;
    for (i, w) in extra_relators.iter().enumerate() {
        if group.evaluate(w)? != group.identity() {
            return Err(Error::ExtraRelatorNotInV3 { index: i });
        }
    }
    let base = h2dec_type(pres, act)?;
    let extended = pres.with_extra_relators(extra_relators)?;
    let ext = h2dec_type(&extended, act)?;
    Ok(base == ext)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class2::WedgeSign;
    use crate::presentation::{family_presentation, omega_presentation};

    fn prime(p: u64) -> Prime {
        Prime::new(p).unwrap()
    }

    fn omega_profile(pv: u64) -> CohomologyProfile {
        let p = prime(pv);
        let (pres, act) = omega_presentation(p).unwrap();
        profile(&pres, &act).unwrap()
    }

    #[test]
    fn omega_h1_is_one_free_block() {
        let prof = omega_profile(5);
        assert_eq!(prof.h1, JordanType::from_pairs(&[(5, 1)]));
    }

    #[test]
    fn omega_h2dec_small_primes() {
        assert_eq!(
            omega_profile(5).h2dec,
            JordanType::from_pairs(&[(4, 1), (5, 1)])
        );
        assert_eq!(
            omega_profile(7).h2dec,
            JordanType::from_pairs(&[(6, 1), (7, 2)])
        );
    }

    #[test]
    fn trivial_group_profile_is_empty() {
        let p = prime(5);
        let pres = ProPPresentation::new(p, vec![], vec![]).unwrap();
        let group = ClassTwoGroup::new(p, 0).unwrap();
        let act = GeneratorAction::trivial(&group);
        let prof = profile(&pres, &act).unwrap();
        assert_eq!(prof, CohomologyProfile::trivial(p));
    }

    #[test]
    fn free_groups_have_no_relations() {
        let p = prime(5);
        let pres = ProPPresentation::free(p, 3);
        let group = ClassTwoGroup::new(p, 3).unwrap();
        let act = GeneratorAction::trivial(&group);
        assert_eq!(h2dec_type(&pres, &act).unwrap(), JordanType::empty());
        assert_eq!(h1_type(&pres, &act).unwrap(), JordanType::from_pairs(&[(1, 3)]));
    }

    #[test]
    fn family_delta_h1() {
        let p = prime(5);
        let trivial = ProPPresentation::new(p, vec![], vec![]).unwrap();
        let fam = family_presentation(p, &trivial).unwrap();
        assert_eq!(
            h1_type(&fam.delta, &fam.delta_action).unwrap(),
            JordanType::from_pairs(&[(1, 1), (5, 1)])
        );
    }

    #[test]
    fn non_minimal_presentation_is_named() {
        let p = prime(5);
        let pres = ProPPresentation::new(
            p,
            vec!["x".into(), "y".into()],
            vec![
                Word::commutator(&Word::generator(0), &Word::generator(1)),
                Word::from_letters(vec![(1, 2)]),
            ],
        )
        .unwrap();
        let group = ClassTwoGroup::new(p, 2).unwrap();
        let act = GeneratorAction::trivial(&group);
        match h2dec_type(&pres, &act) {
            Err(Error::NotMinimal { index, vector }) => {
                assert_eq!(index, 1);
                assert_eq!(vector, vec![0, 2]);
            }
            other => panic!("expected NotMinimal, got {other:?}"),
        }
    }

    #[test]
    fn full_h2_is_refused() {
        let p = prime(5);
        let pres = ProPPresentation::free(p, 2);
        let group = ClassTwoGroup::new(p, 2).unwrap();
        let act = GeneratorAction::trivial(&group);
        assert!(matches!(
            h2_full_type(&pres, &act),
            Err(Error::Unsupported(_))
        ));
    }

    #[test]
    fn product_profile_rules() {
        let p = prime(5);
        let omega = omega_profile(5);
        // free product with the trivial profile is the identity
        let same =
            product_profile(&omega, &CohomologyProfile::trivial(p), ProductKind::FreeProduct)
                .unwrap();
        assert_eq!(same, omega);
        // empty + empty = empty
        let e = CohomologyProfile::trivial(p);
        let ee = product_profile(&e, &e, ProductKind::FreeProduct).unwrap();
        assert_eq!(ee, e);
        // direct product with procyclic: h2dec gains a copy of h1
        let prod =
            product_profile(&omega, &CohomologyProfile::procyclic(p), ProductKind::DirectWithProcyclic)
                .unwrap();
        assert_eq!(prod.h1, JordanType::from_pairs(&[(1, 1), (5, 1)]));
        assert_eq!(prod.h2dec, JordanType::from_pairs(&[(4, 1), (5, 2)]));
        // wrong second factor is refused
        assert!(product_profile(&omega, &omega, ProductKind::DirectWithProcyclic).is_err());
        // p mismatch
        let other = CohomologyProfile::trivial(prime(7));
        assert!(product_profile(&omega, &other, ProductKind::FreeProduct).is_err());
    }

    #[test]
    fn family_delta_agrees_with_product_formula() {
        let p = prime(5);
        for sigma_rank in [0usize, 1] {
            let sigma = if sigma_rank == 0 {
                ProPPresentation::new(p, vec![], vec![]).unwrap()
            } else {
                ProPPresentation::free(p, sigma_rank)
            };
            let fam = family_presentation(p, &sigma).unwrap();
            let direct = profile(&fam.delta, &fam.delta_action).unwrap();

            let omega = omega_profile(5);
            let sigma_profile = CohomologyProfile {
                p,
                h1: if sigma_rank == 0 {
                    JordanType::empty()
                } else {
                    JordanType::from_pairs(&[(1, sigma_rank)])
                },
                h2dec: JordanType::empty(),
            };
            let free = product_profile(&omega, &sigma_profile, ProductKind::FreeProduct).unwrap();
            let predicted = product_profile(
                &free,
                &CohomologyProfile::procyclic(p),
                ProductKind::DirectWithProcyclic,
            )
            .unwrap();
            assert_eq!(direct, predicted, "sigma rank {sigma_rank}");
        }
    }

    #[test]
    fn v3_invariance_examples() {
        let p = prime(5);
        let (pres, act) = omega_presentation(p).unwrap();
        assert!(v3_invariance_check(&pres, &act, &[]).unwrap());
        // a weight-4 commutator is trivial in W_d
        let extra =
            Word::iterated_commutator(3, &Word::generator(0), &Word::generator(1));
        assert!(v3_invariance_check(&pres, &act, &[extra]).unwrap());
        // a plain commutator is not class-2 trivial
        let bad = Word::commutator(&Word::generator(0), &Word::generator(2));
        assert!(matches!(
            v3_invariance_check(&pres, &act, &[bad]),
            Err(Error::ExtraRelatorNotInV3 { index: 0 })
        ));
    }

    #[test]
    fn wedge_sign_convention_does_not_change_types() {
        let p = prime(5);
        let (pres, act) = omega_presentation(p).unwrap();
        let (_, _, flipped) =
            h2dec_data_with_sign(&pres, &act, WedgeSign::Flipped).unwrap();
        assert_eq!(flipped, h2dec_type(&pres, &act).unwrap());
        assert_eq!(flipped, JordanType::from_pairs(&[(4, 1), (5, 1)]));
    }

    #[test]
    fn h2dec_dimension_bound() {
        let p = prime(5);
        let (pres, act) = omega_presentation(p).unwrap();
        let d = pres.num_generators();
        let t = h2dec_type(&pres, &act).unwrap();
        assert!(t.total_dim() <= d + d * (d - 1) / 2);
    }
}
