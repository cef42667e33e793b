//! Randomized property campaigns: module decompositions against their
//! presentations, group laws in the class-2 quotient, and rewriting
//! robustness. All randomness is seeded for reproducibility.

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use progal::class2::{ClassTwoGroup, Word};
use progal::fpmod::{
    adapted_basis, jordan_type, power_image, present_normal_form, submodule_type, FpMatrix,
    FpVector, JordanType, ModulePresentation, NilpotentAction, Prime,
};

/// Random nilpotent action with A^p = 0: a random block layout with sizes
/// at most p, conjugated by a random invertible matrix.
fn random_nilpotent(rng: &mut StdRng, p: Prime, n: usize) -> NilpotentAction {
    let pv = p.get();
    let max_block = (pv as usize).min(n);
    let mut layout = Vec::new();
    let mut left = n;
    while left > 0 {
        let size = rng.random_range(1..=max_block.min(left));
        layout.push(size);
        left -= size;
    }
    let shift = progal::fpmod::block_shift_matrix(p, &layout);
    let conj = loop {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = rng.random_range(0..pv);
            }
        }
        if m.try_inverse().is_some() {
            break m;
        }
    };
    let a = conj.mul(&shift).mul(&conj.inverse());
    NilpotentAction::new(p, a).expect("conjugate of a block shift is nilpotent")
}

#[test]
fn presentation_normal_form_round_trips_random_modules() {
    let mut rng = StdRng::seed_from_u64(20260810);
    for pv in [3u64, 5] {
        let p = Prime::new(pv).unwrap();
        for _ in 0..50 {
            let n = rng.random_range(1..=5);
            let action = random_nilpotent(&mut rng, p, n);
            let mp = ModulePresentation::from_action(&action);
            let (jt, map) = present_normal_form(&mp);
            assert_eq!(jt, jordan_type(&action));
            assert_eq!(map.dim(), n);
        }
    }
}

#[test]
fn rank_data_matches_block_structure() {
    let mut rng = StdRng::seed_from_u64(7);
    for pv in [3u64, 5] {
        let p = Prime::new(pv).unwrap();
        for _ in 0..30 {
            let n = rng.random_range(1..=6);
            let action = random_nilpotent(&mut rng, p, n);
            let t = jordan_type(&action);
            assert_eq!(t.total_dim(), n);
            for k in 0..=(pv as usize) {
                let expected: usize = t
                    .blocks()
                    .iter()
                    .filter(|(&i, _)| i > k)
                    .map(|(&i, &m)| (i - k) * m)
                    .sum();
                assert_eq!(action.matrix().pow(k as u64).rank(), expected);
            }
            // images are nested
            for k in 0..pv as usize {
                assert!(power_image(&action, k)
                    .contains_subspace(&power_image(&action, k + 1)));
            }
            // the adapted basis conjugates the action to block shift form
            let ab = adapted_basis(&action);
            let conj = ab.change.mul(action.matrix()).mul(&ab.change.inverse());
            assert_eq!(conj, ab.jordan_matrix(p));
            let mut from_layout = JordanType::empty();
            for &s in &ab.layout {
                from_layout.add_blocks(s, 1);
            }
            assert_eq!(from_layout, t);
            // the closure of the full basis is the whole module
            let full: Vec<FpVector> = FpMatrix::identity(p, n).rows_vec();
            assert_eq!(submodule_type(&action, &full).unwrap(), t);
        }
    }
}

fn arb_element(p: u64, d: usize) -> impl Strategy<Value = (Vec<u64>, Vec<u64>)> {
    let wedges = d * (d - 1) / 2;
    (
        proptest::collection::vec(0..p * p, d),
        proptest::collection::vec(0..p, wedges),
    )
}

fn build(group: &ClassTwoGroup, (a, b): &(Vec<u64>, Vec<u64>)) -> progal::class2::ClassTwoElement {
    // assemble from generators and wedge basis elements so only public API
    // is exercised
    let mut acc = group.identity();
    for (i, &ai) in a.iter().enumerate() {
        acc = group
            .multiply(&acc, &group.power(&group.generator(i), ai as i64).unwrap())
            .unwrap();
    }
    let d = group.rank();
    for i in 0..d {
        for j in (i + 1)..d {
            let bij = b[group.wedge_index(i, j)];
            if bij > 0 {
                let c = group
                    .commutator(&group.generator(i), &group.generator(j))
                    .unwrap();
                acc = group.multiply(&acc, &group.power(&c, bij as i64).unwrap()).unwrap();
            }
        }
    }
    acc
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn class2_group_laws((a, b, c) in (arb_element(3, 3), arb_element(3, 3), arb_element(3, 3))) {
        let g = ClassTwoGroup::new(Prime::new(3).unwrap(), 3).unwrap();
        let (x, y, z) = (build(&g, &a), build(&g, &b), build(&g, &c));
        prop_assert_eq!(
            g.multiply(&g.multiply(&x, &y).unwrap(), &z).unwrap(),
            g.multiply(&x, &g.multiply(&y, &z).unwrap()).unwrap()
        );
        prop_assert_eq!(g.multiply(&x, &g.inverse(&x).unwrap()).unwrap(), g.identity());
        prop_assert_eq!(g.power(&x, 9).unwrap(), g.identity());
    }

    #[test]
    fn jordan_direct_sum_commutes(
        a in proptest::collection::btree_map(1usize..6, 1usize..4, 0..4),
        b in proptest::collection::btree_map(1usize..6, 1usize..4, 0..4),
    ) {
        let ta = JordanType::from_pairs(&a.iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>());
        let tb = JordanType::from_pairs(&b.iter().map(|(&k, &v)| (k, v)).collect::<Vec<_>>());
        prop_assert_eq!(ta.direct_sum(&tb), tb.direct_sum(&ta));
        prop_assert_eq!(ta.direct_sum(&tb).total_dim(), ta.total_dim() + tb.total_dim());
        prop_assert_eq!(ta.dual(), ta);
    }
}

#[test]
fn evaluate_is_multiplicative_on_random_words() {
    let mut rng = StdRng::seed_from_u64(99);
    let g = ClassTwoGroup::new(Prime::new(5).unwrap(), 4).unwrap();
    for _ in 0..100 {
        let mut letters1 = Vec::new();
        let mut letters2 = Vec::new();
        for _ in 0..rng.random_range(1..6) {
            letters1.push((rng.random_range(0..4), rng.random_range(-7..8)));
        }
        for _ in 0..rng.random_range(1..6) {
            letters2.push((rng.random_range(0..4), rng.random_range(-7..8)));
        }
        let w1 = Word::from_letters(letters1);
        let w2 = Word::from_letters(letters2);
        let lhs = g.evaluate(&w1.concat(&w2)).unwrap();
        let rhs = g
            .multiply(&g.evaluate(&w1).unwrap(), &g.evaluate(&w2).unwrap())
            .unwrap();
        assert_eq!(lhs, rhs);
        // normalization does not change the value
        assert_eq!(g.evaluate(&w1.normalize()).unwrap(), g.evaluate(&w1).unwrap());
    }
}

#[test]
fn rewriting_is_stable_under_generator_relabeling() {
    // the subgroup module cannot depend on which generator anchors the
    // transversal, so permuting generators (and the character with them)
    // must reproduce the invariants; words built from commutators and p-th
    // powers vanish under every character, so any nonzero character is
    // admissible
    use progal::presentation::{schreier_tgroup, Character, ProPPresentation};
    let mut rng = StdRng::seed_from_u64(31337);
    for pv in [3u64, 5] {
        let p = Prime::new(pv).unwrap();
        for _ in 0..15 {
            let d = rng.random_range(2..=3usize);
            let names: Vec<String> = (0..d).map(|i| format!("x{i}")).collect();
            let mut relators = Vec::new();
            for _ in 0..rng.random_range(1..=2usize) {
                let mut w = Word::commutator(
                    &Word::generator(rng.random_range(0..d)),
                    &Word::generator(rng.random_range(0..d)),
                );
                if rng.random_bool(0.6) {
                    w = w.concat(&Word::from_letters(vec![(
                        rng.random_range(0..d),
                        (pv * rng.random_range(1..=pv)) as i64,
                    )]));
                }
                if rng.random_bool(0.4) {
                    w = Word::commutator(&Word::generator(rng.random_range(0..d)), &w);
                }
                relators.push(w);
            }
            let chi_values: Vec<i64> = loop {
                let v: Vec<i64> =
                    (0..d).map(|_| rng.random_range(0..pv as i64)).collect();
                if v.iter().any(|&x| x != 0) {
                    break v;
                }
            };
            let pres = ProPPresentation::new(p, names.clone(), relators.clone()).unwrap();
            let chi = Character::new(p, chi_values.clone()).unwrap();
            let base = schreier_tgroup(&pres, &chi).unwrap().invariants();

            // a random permutation of the generators
            let mut perm: Vec<usize> = (0..d).collect();
            for i in (1..d).rev() {
                perm.swap(i, rng.random_range(0..=i));
            }
            let permuted_rels: Vec<Word> = relators
                .iter()
                .map(|w| {
                    Word::from_letters(
                        w.letters().iter().map(|l| (perm[l.index], l.exponent)).collect(),
                    )
                })
                .collect();
            let mut permuted_chi = vec![0i64; d];
            for (i, &v) in chi_values.iter().enumerate() {
                permuted_chi[perm[i]] = v;
            }
            let pres2 = ProPPresentation::new(p, names, permuted_rels).unwrap();
            let chi2 = Character::new(p, permuted_chi).unwrap();
            let permuted = schreier_tgroup(&pres2, &chi2).unwrap().invariants();
            assert_eq!(base, permuted, "p = {pv}, perm = {perm:?}");
        }
    }
}

#[test]
fn central_elements_commute_with_everything() {
    let mut rng = StdRng::seed_from_u64(4242);
    let g = ClassTwoGroup::new(Prime::new(5).unwrap(), 3).unwrap();
    for _ in 0..100 {
        // a central element: p-th powers and wedges only
        let a: Vec<u64> = (0..3).map(|_| 5 * rng.random_range(0..5)).collect();
        let b: Vec<u64> = (0..3).map(|_| rng.random_range(0..5)).collect();
        let central = build(&g, &(a, b));
        assert!(g.is_central(&central).unwrap());
        let x = build(
            &g,
            &(
                (0..3).map(|_| rng.random_range(0..25)).collect(),
                (0..3).map(|_| rng.random_range(0..5)).collect(),
            ),
        );
        assert_eq!(
            g.multiply(&central, &x).unwrap(),
            g.multiply(&x, &central).unwrap()
        );
        // conjugation fixes central elements
        let conj = g
            .multiply(&g.multiply(&x, &central).unwrap(), &g.inverse(&x).unwrap())
            .unwrap();
        assert_eq!(conj, central);
    }
}
