//! Obstruction criteria assembled into decision procedures with auditable
//! witnesses.
//!
//! Every detector is sound-only: a positive verdict carries enough data to
//! re-verify each membership and equality offline, while `NoWitnessFound`
//! is never a certificate that the group is an absolute Galois group.

use crate::class2::Word;
use crate::cohomology::{
    h2dec_data, product_profile, profile, CohomologyProfile, ProductKind,
};
use crate::error::{Error, Result};
use crate::fpmod::{
    fixed_subspace, jordan_type, power_image, submodule_type, FpMatrix, FpVector, JordanType,
    NilpotentAction, Prime, Subspace,
};
use crate::presentation::{
    family_presentation, omega_presentation, schreier_tgroup, zp2_lift_exists, Character,
    ProPPresentation,
};
use crate::tgroup::{galois_realizable, invariants_from_data, TGroupData, TInvariants};

/// Which criterion produced a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Theorem1Case1,
    Theorem1Case2,
    Theorem1Case3,
    TGroup,
    H2Dec,
    Family,
}

impl Rule {
    pub fn id(self) -> &'static str {
        match self {
            Rule::Theorem1Case1 => "thm1.1",
            Rule::Theorem1Case2 => "thm1.2",
            Rule::Theorem1Case3 => "thm1.3",
            Rule::TGroup => "tgroup",
            Rule::H2Dec => "h2dec",
            Rule::Family => "family",
        }
    }
}

/// Self-contained data backing a positive verdict.
#[derive(Debug, Clone)]
pub enum Witness {
    IteratedCommutator {
        p: u64,
        e: usize,
        action: FpMatrix,
        tau_image: FpVector,
        commutator_image: FpVector,
        next_commutator_image: FpVector,
        deep_image_basis: Vec<FpVector>,
    },
    IndependentLines {
        p: u64,
        action: FpMatrix,
        tau_images: [FpVector; 2],
        lines: [FpVector; 2],
        deep_image_basis: Vec<FpVector>,
    },
    DeepPower {
        p: u64,
        action: FpMatrix,
        sigma_p: FpVector,
        square_image_basis: Vec<FpVector>,
    },
    UnrealizableInvariants {
        p: u64,
        action: FpMatrix,
        sigma_p: FpVector,
        invariants: TInvariants,
    },
    ForbiddenSummand {
        p: u64,
        h2dec: JordanType,
        has_zp2: bool,
        flag_size: usize,
    },
    FamilySummand {
        p: u64,
        h2dec_direct: JordanType,
        h2dec_product: JordanType,
        central_action: FpMatrix,
        relator_coords: Vec<FpVector>,
        has_zp2: bool,
        flag_size: usize,
        note: String,
    },
}

/// Detection outcome: a rule with witness data, or no witness found. The
/// latter says nothing about whether the group is an absolute Galois group.
#[derive(Debug, Clone)]
pub enum Verdict {
    NotAbsoluteGalois { rule: Rule, witness: Witness },
    NoWitnessFound { rule: Rule },
}

impl Verdict {
    pub fn is_flagged(&self) -> bool {
        matches!(self, Verdict::NotAbsoluteGalois { .. })
    }

    pub fn rule(&self) -> Rule {
        match self {
            Verdict::NotAbsoluteGalois { rule, .. } => *rule,
            Verdict::NoWitnessFound { rule } => *rule,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Verdict::NoWitnessFound { rule } => serde_json::json!({
                "verdict": "no_witness",
                "rule": rule.id(),
            }),
            Verdict::NotAbsoluteGalois { rule, witness } => serde_json::json!({
                "verdict": "not_absolute_galois",
                "rule": rule.id(),
                "witness": witness.to_json(),
            }),
        }
    }
}

impl Witness {
    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Witness::IteratedCommutator {
                p,
                e,
                action,
                tau_image,
                commutator_image,
                next_commutator_image,
                deep_image_basis,
            } => serde_json::json!({
                "p": p,
                "e": e,
                "action": action.to_json(),
                "tau_image": tau_image,
                "commutator_image": commutator_image,
                "next_commutator_image": next_commutator_image,
                "deep_image_basis": deep_image_basis,
            }),
            Witness::IndependentLines { p, action, tau_images, lines, deep_image_basis } => {
                serde_json::json!({
                    "p": p,
                    "action": action.to_json(),
                    "tau_images": tau_images,
                    "lines": lines,
                    "deep_image_basis": deep_image_basis,
                })
            }
            Witness::DeepPower { p, action, sigma_p, square_image_basis } => {
                serde_json::json!({
                    "p": p,
                    "action": action.to_json(),
                    "sigma_p": sigma_p,
                    "square_image_basis": square_image_basis,
                })
            }
            Witness::UnrealizableInvariants { p, action, sigma_p, invariants } => {
                serde_json::json!({
                    "p": p,
                    "action": action.to_json(),
                    "sigma_p": sigma_p,
                    "invariants": invariants.to_json(),
                })
            }
            Witness::ForbiddenSummand { p, h2dec, has_zp2, flag_size } => serde_json::json!({
                "p": p,
                "h2dec": h2dec.to_json(),
                "has_zp2": has_zp2,
                "flag_size": flag_size,
            }),
            Witness::FamilySummand {
                p,
                h2dec_direct,
                h2dec_product,
                central_action,
                relator_coords,
                has_zp2,
                flag_size,
                note,
            } => serde_json::json!({
                "p": p,
                "h2dec_direct": h2dec_direct.to_json(),
                "h2dec_product": h2dec_product.to_json(),
                "central_action": central_action.to_json(),
                "relator_coords": relator_coords,
                "has_zp2": has_zp2,
                "flag_size": flag_size,
                "note": note,
            }),
        }
    }
}

fn require_odd(p: Prime) -> Result<()> {
    p.require_odd().map(|_| ())
}

fn check_sigma_tau(
    pres: &ProPPresentation,
    chi: &Character,
    sigma: &Word,
    taus: &[&Word],
) -> Result<()> {
    chi.validate_on(pres)?;
    if chi.of_word(sigma) == 0 {
        return Err(Error::ParameterRange(
            "sigma must lie outside the subgroup: chi(sigma) must be nonzero".into(),
        ));
    }
    for (i, tau) in taus.iter().enumerate() {
        if chi.of_word(tau) != 0 {
            return Err(Error::ParameterRange(format!(
                "tau{} must lie inside the subgroup: chi(tau) must be zero",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Iterated-commutator criterion: flags when the e-fold commutator image
/// A^e tau survives outside the image of A^(p-1) while the (e+1)-fold image
/// vanishes. The range is 2 <= e <= p-2, extended to e = 1 when the
/// character lifts mod p^2.
pub fn theorem1_case1(
    pres: &ProPPresentation,
    chi: &Character,
    sigma: &Word,
    tau: &Word,
    e: usize,
) -> Result<Verdict> {
    require_odd(pres.p())?;
    check_sigma_tau(pres, chi, sigma, &[tau])?;
    let pv = pres.p().get() as usize;
    if e == 1 {
        if !zp2_lift_exists(pres, chi)? {
            return Err(Error::ParameterRange(
                "e = 1 requires a Z/p^2 quotient: the character does not lift".into(),
            ));
        }
    } else if e < 2 || e > pv.saturating_sub(2) {
        return Err(Error::ParameterRange(format!(
            "e must satisfy 2 <= e <= p-2 (or e = 1 with a Z/p^2 lift), got e = {e} at p = {pv}"
        )));
    }

    let result = schreier_tgroup(pres, chi)?;
    let action = result.data().action();
    let v = result.rewrite(tau)?;
    let a_e = action.matrix().pow(e as u64).mul_vec(&v);
    let a_e1 = action.apply(&a_e);
    let deep = power_image(action, pv - 1);
    let flagged = !deep.contains(&a_e) && a_e1.iter().all(|&x| x == 0);
    if flagged {
        Ok(Verdict::NotAbsoluteGalois {
            rule: Rule::Theorem1Case1,
            witness: Witness::IteratedCommutator {
                p: pres.p().get(),
                e,
                action: action.matrix().clone(),
                tau_image: v,
                commutator_image: a_e,
                next_commutator_image: a_e1,
                deep_image_basis: deep.basis().to_vec(),
            },
        })
    } else {
        Ok(Verdict::NoWitnessFound { rule: Rule::Theorem1Case1 })
    }
}

/// Independent-lines criterion: two commutator images that both die at the
/// second step, both avoid the deep image, and span different lines.
pub fn theorem1_case2(
    pres: &ProPPresentation,
    chi: &Character,
    sigma: &Word,
    tau1: &Word,
    tau2: &Word,
) -> Result<Verdict> {
    require_odd(pres.p())?;
    check_sigma_tau(pres, chi, sigma, &[tau1, tau2])?;
    let pv = pres.p().get() as usize;
    let result = schreier_tgroup(pres, chi)?;
    let action = result.data().action();
    let v1 = result.rewrite(tau1)?;
    let v2 = result.rewrite(tau2)?;
    let l1 = action.apply(&v1);
    let l2 = action.apply(&v2);
    let deep = power_image(action, pv - 1);
    let n = action.dim();
    let conditions = |l: &FpVector| -> bool {
        !deep.contains(l) && action.apply(l).iter().all(|&x| x == 0)
    };
    let lines_differ = Subspace::from_spanning(pres.p(), n, vec![l1.clone()])
        != Subspace::from_spanning(pres.p(), n, vec![l2.clone()]);
    if conditions(&l1) && conditions(&l2) && lines_differ {
        Ok(Verdict::NotAbsoluteGalois {
            rule: Rule::Theorem1Case2,
            witness: Witness::IndependentLines {
                p: pres.p().get(),
                action: action.matrix().clone(),
                tau_images: [v1, v2],
                lines: [l1, l2],
                deep_image_basis: deep.basis().to_vec(),
            },
        })
    } else {
        Ok(Verdict::NoWitnessFound { rule: Rule::Theorem1Case2 })
    }
}

/// Deep-power criterion: flags when sigma^p lands in the image of A^2,
/// forcing u >= 3.
pub fn theorem1_case3(
    pres: &ProPPresentation,
    chi: &Character,
    sigma: &Word,
) -> Result<Verdict> {
    require_odd(pres.p())?;
    check_sigma_tau(pres, chi, sigma, &[])?;
    let result = schreier_tgroup(pres, chi)?;
    let action = result.data().action();
    let square = power_image(action, 2);
    if square.contains(result.data().sigma_p()) {
        Ok(Verdict::NotAbsoluteGalois {
            rule: Rule::Theorem1Case3,
            witness: Witness::DeepPower {
                p: pres.p().get(),
                action: action.matrix().clone(),
                sigma_p: result.data().sigma_p().to_vec(),
                square_image_basis: square.basis().to_vec(),
            },
        })
    } else {
        Ok(Verdict::NoWitnessFound { rule: Rule::Theorem1Case3 })
    }
}

/// Full T-group screen: flags whenever the invariants of the index-p
/// quotient module violate the realizability profile.
///
/// Soundness chain: an unrealizable profile differs from every free-group
/// profile, so a flagged group is not free pro-p; a nonfree absolute Galois
/// group forces the base field away from characteristic p and makes it
/// contain a p-th root of unity, which is exactly the hypothesis under
/// which the realizability profile is complete.
pub fn tgroup_detect(pres: &ProPPresentation, chi: &Character) -> Result<Verdict> {
    require_odd(pres.p())?;
    chi.validate_on(pres)?;
    let result = schreier_tgroup(pres, chi)?;
    let inv = result.invariants();
    if !galois_realizable(&inv) {
        Ok(Verdict::NotAbsoluteGalois {
            rule: Rule::TGroup,
            witness: Witness::UnrealizableInvariants {
                p: pres.p().get(),
                action: result.data().action().matrix().clone(),
                sigma_p: result.data().sigma_p().to_vec(),
                invariants: inv,
            },
        })
    } else {
        Ok(Verdict::NoWitnessFound { rule: Rule::TGroup })
    }
}

fn forbidden_summand(h2dec: &JordanType, p: Prime, has_zp2: bool) -> Option<usize> {
    let pv = p.get() as usize;
    for i in 3..pv {
        if h2dec.multiplicity(i) > 0 {
            return Some(i);
        }
    }
    if has_zp2 && h2dec.multiplicity(2) > 0 {
        return Some(2);
    }
    None
}

/// Summand screen on a decomposable-H^2 type: cyclic summands of dimension
/// 3..p-1 always flag; dimension 2 flags as well when a Z/p^2 quotient
/// exists. Sizes 1 and p never flag. Requires p > 3.
pub fn h2dec_detect(h2dec: &JordanType, p: Prime, has_zp2: bool) -> Result<Verdict> {
    p.require_greater_than_3()?;
    match forbidden_summand(h2dec, p, has_zp2) {
        Some(flag_size) => Ok(Verdict::NotAbsoluteGalois {
            rule: Rule::H2Dec,
            witness: Witness::ForbiddenSummand {
                p: p.get(),
                h2dec: h2dec.clone(),
                has_zp2,
                flag_size,
            },
        }),
        None => Ok(Verdict::NoWitnessFound { rule: Rule::H2Dec }),
    }
}

/// Detector for the whole semidirect-product family: assembles the index-p
/// subgroup, computes its decomposable H^2 both directly and through the
/// product formula (they must agree), and screens for a forbidden summand.
/// A flag covers every quotient of the ambient group by a kernel inside the
/// third p-central term of the subgroup, since such quotients share the
/// decomposable H^2.
pub fn family_detect(p: Prime, sigma_pres: &ProPPresentation) -> Result<Verdict> {
    p.require_greater_than_3()?;
    let fam = family_presentation(p, sigma_pres)?;
    let (coords, central_action, direct_h2) = h2dec_data(&fam.delta, &fam.delta_action)?;
    let direct_h1 = crate::cohomology::h1_type(&fam.delta, &fam.delta_action)?;
    let direct = CohomologyProfile { p, h1: direct_h1, h2dec: direct_h2 };

    let (omega_pres, omega_act) = omega_presentation(p)?;
    let omega = profile(&omega_pres, &omega_act)?;
    let group = crate::class2::ClassTwoGroup::new(p, sigma_pres.num_generators().max(1))?;
    let sigma_profile = if sigma_pres.num_generators() == 0 {
        CohomologyProfile::trivial(p)
    } else {
        let trivial = crate::class2::GeneratorAction::trivial(&group);
        profile(sigma_pres, &trivial)?
    };
    let free = product_profile(&omega, &sigma_profile, ProductKind::FreeProduct)?;
    let predicted =
        product_profile(&free, &CohomologyProfile::procyclic(p), ProductKind::DirectWithProcyclic)?;
    assert_eq!(
        direct, predicted,
        "direct and product-formula cohomology disagree: library defect"
    );

    let has_zp2 = zp2_lift_exists(&fam.gamma, &fam.chi)?;
    match forbidden_summand(&direct.h2dec, p, has_zp2) {
        Some(flag_size) => Ok(Verdict::NotAbsoluteGalois {
            rule: Rule::Family,
            witness: Witness::FamilySummand {
                p: p.get(),
                h2dec_direct: direct.h2dec.clone(),
                h2dec_product: predicted.h2dec.clone(),
                central_action: central_action.matrix().clone(),
                relator_coords: coords,
                has_zp2,
                flag_size,
                note: "the verdict extends to every quotient by a normal subgroup contained \
                       in the third p-central term of the index-p subgroup, which leaves the \
                       decomposable H^2 unchanged"
                    .into(),
            },
        }),
        None => Ok(Verdict::NoWitnessFound { rule: Rule::Family }),
    }
}

/// Independent re-verification of a positive verdict: every membership and
/// equality in the witness record is recomputed from the embedded matrices.
pub fn verify_witness(verdict: &Verdict) -> std::result::Result<(), String> {
    let Verdict::NotAbsoluteGalois { witness, .. } = verdict else {
        return Ok(());
    };
    let fail = |msg: &str| Err(msg.to_string());
    match witness {
        Witness::IteratedCommutator {
            p,
            e,
            action,
            tau_image,
            commutator_image,
            next_commutator_image,
            deep_image_basis,
        } => {
            let prime = Prime::new(*p).map_err(|e| e.to_string())?;
            let act =
                NilpotentAction::new(prime, action.clone()).map_err(|e| e.to_string())?;
            let pv = *p as usize;
            if *e == 0 || *e > pv - 2 {
                return fail("e outside 1..=p-2");
            }
            let a_e = act.matrix().pow(*e as u64).mul_vec(tau_image);
            if a_e != *commutator_image {
                return fail("A^e tau does not match the recorded commutator image");
            }
            let a_e1 = act.apply(&a_e);
            if a_e1 != *next_commutator_image {
                return fail("A^(e+1) tau does not match the record");
            }
            if !a_e1.iter().all(|&x| x == 0) {
                return fail("A^(e+1) tau is nonzero");
            }
            let deep = power_image(&act, pv - 1);
            if deep.basis() != &deep_image_basis[..] {
                return fail("recorded deep image basis is not the echelon basis of Im A^(p-1)");
            }
            if deep.contains(&a_e) {
                return fail("A^e tau lies inside Im A^(p-1)");
            }
            Ok(())
        }
        Witness::IndependentLines { p, action, tau_images, lines, deep_image_basis } => {
            let prime = Prime::new(*p).map_err(|e| e.to_string())?;
            let act =
                NilpotentAction::new(prime, action.clone()).map_err(|e| e.to_string())?;
            let pv = *p as usize;
            let deep = power_image(&act, pv - 1);
            if deep.basis() != &deep_image_basis[..] {
                return fail("recorded deep image basis mismatch");
            }
            for (v, l) in tau_images.iter().zip(lines.iter()) {
                if act.apply(v) != *l {
                    return fail("recorded line is not A tau");
                }
                if deep.contains(l) {
                    return fail("line lies inside Im A^(p-1)");
                }
                if !act.apply(l).iter().all(|&x| x == 0) {
                    return fail("A^2 tau is nonzero");
                }
            }
            let n = act.dim();
            let s1 = Subspace::from_spanning(prime, n, vec![lines[0].clone()]);
            let s2 = Subspace::from_spanning(prime, n, vec![lines[1].clone()]);
            if s1 == s2 {
                return fail("the two lines coincide");
            }
            Ok(())
        }
        Witness::DeepPower { p, action, sigma_p, square_image_basis } => {
            let prime = Prime::new(*p).map_err(|e| e.to_string())?;
            let act =
                NilpotentAction::new(prime, action.clone()).map_err(|e| e.to_string())?;
            if !fixed_subspace(&act).contains(sigma_p) {
                return fail("sigma^p is not fixed by the action");
            }
            let square = power_image(&act, 2);
            if square.basis() != &square_image_basis[..] {
                return fail("recorded Im A^2 basis mismatch");
            }
            if !square.contains(sigma_p) {
                return fail("sigma^p does not lie in Im A^2");
            }
            Ok(())
        }
        Witness::UnrealizableInvariants { p, action, sigma_p, invariants } => {
            let prime = Prime::new(*p).map_err(|e| e.to_string())?;
            let act =
                NilpotentAction::new(prime, action.clone()).map_err(|e| e.to_string())?;
            let data =
                TGroupData::new(prime, act, sigma_p.clone()).map_err(|e| e.to_string())?;
            let recomputed = invariants_from_data(&data);
            if recomputed != *invariants {
                return fail("invariants do not recompute from (action, sigma^p)");
            }
            if galois_realizable(&recomputed) {
                return fail("invariants are realizable, nothing to flag");
            }
            Ok(())
        }
        Witness::ForbiddenSummand { p, h2dec, has_zp2, flag_size } => {
            let prime = Prime::new(*p).map_err(|e| e.to_string())?;
            if prime.get() <= 3 {
                return fail("summand screen requires p > 3");
            }
            if h2dec.multiplicity(*flag_size) == 0 {
                return fail("flagged block size is absent from the type");
            }
            let pv = *p as usize;
            let in_range =
                (3..pv).contains(flag_size) || (*flag_size == 2 && *has_zp2);
            if !in_range {
                return fail("flagged block size is not in the forbidden range");
            }
            Ok(())
        }
        Witness::FamilySummand {
            p,
            h2dec_direct,
            h2dec_product,
            central_action,
            relator_coords,
            has_zp2,
            flag_size,
            ..
        } => {
            let prime = Prime::new(*p).map_err(|e| e.to_string())?;
            if h2dec_direct != h2dec_product {
                return fail("direct and product-formula types disagree");
            }
            let act = NilpotentAction::new(prime, central_action.clone())
                .map_err(|e| e.to_string())?;
            let closure = submodule_type(&act, relator_coords).map_err(|e| e.to_string())?;
            if closure != *h2dec_direct {
                return fail("relator coordinates do not regenerate the recorded type");
            }
            let full = jordan_type(&act);
            for (&size, &mult) in closure.blocks() {
                if full.multiplicity(size) < mult && size > full.total_dim() {
                    return fail("closure type inconsistent with ambient action");
                }
            }
            let pv = *p as usize;
            if h2dec_direct.multiplicity(*flag_size) == 0 {
                return fail("flagged block size is absent");
            }
            if !((3..pv).contains(flag_size) || (*flag_size == 2 && *has_zp2)) {
                return fail("flagged block size is not in the forbidden range");
            }
            Ok(())
        }
    }
}
