//! Modules over F_p[C_p] through the nilpotent operator t = sigma - 1.
//!
//! A module for a cyclic group C of order p acting on F_p^n is carried by the
//! matrix of sigma - 1, which is automatically nilpotent of degree at most p
//! since (sigma - 1)^p = sigma^p - 1 = 0 in characteristic p. The isomorphism
//! class of the module is its Jordan type: the multiset of cyclic block sizes,
//! each between 1 and p (size p blocks are the free summands).

use std::collections::BTreeMap;

use super::matrix::{column_space, kernel, FpMatrix, FpVector, Prime, Subspace};
use crate::error::{Error, Result};

/// The action of sigma - 1 on an n-dimensional F_p-module.
/// Validated nilpotent on construction: A^p = 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NilpotentAction {
    p: Prime,
    matrix: FpMatrix,
}

impl NilpotentAction {
    pub fn new(p: Prime, matrix: FpMatrix) -> Result<Self> {
        if matrix.nrows != matrix.ncols {
            return Err(Error::DimensionMismatch(format!(
                "action matrix must be square, got {}x{}",
                matrix.nrows, matrix.ncols
            )));
        }
        if !matrix.pow(p.get()).is_zero() {
            return Err(Error::NotNilpotent { p: p.get() });
        }
        Ok(NilpotentAction { p, matrix })
    }

    pub fn zero(p: Prime, dim: usize) -> Self {
        NilpotentAction { p, matrix: FpMatrix::zero(p, dim, dim) }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows
    }

    pub fn matrix(&self) -> &FpMatrix {
        &self.matrix
    }

    /// Matrix of sigma itself, i.e. I + A.
    pub fn sigma_matrix(&self) -> FpMatrix {
        self.matrix.add(&FpMatrix::identity(self.p, self.dim()))
    }

    pub fn apply(&self, v: &[u64]) -> FpVector {
        self.matrix.mul_vec(v)
    }
}

/// Multiset of cyclic block sizes with multiplicities. Zero multiplicities
/// are never stored, so equality is structural.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct JordanType {
    blocks: BTreeMap<usize, usize>,
}

impl JordanType {
    pub fn empty() -> Self {
        JordanType::default()
    }

    pub fn from_pairs(pairs: &[(usize, usize)]) -> Self {
        let mut t = JordanType::empty();
        for &(size, mult) in pairs {
            t.add_blocks(size, mult);
        }
        t
    }

    pub fn add_blocks(&mut self, size: usize, mult: usize) {
        assert!(size >= 1, "block size must be at least 1");
        if mult > 0 {
            *self.blocks.entry(size).or_insert(0) += mult;
        }
    }

    pub fn multiplicity(&self, size: usize) -> usize {
        self.blocks.get(&size).copied().unwrap_or(0)
    }

    pub fn blocks(&self) -> &BTreeMap<usize, usize> {
        &self.blocks
    }

    /// Block sizes repeated by multiplicity, in decreasing order.
    pub fn sizes_desc(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (&size, &mult) in self.blocks.iter().rev() {
            out.extend(std::iter::repeat_n(size, mult));
        }
        out
    }

    pub fn total_dim(&self) -> usize {
        self.blocks.iter().map(|(&s, &m)| s * m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Pointwise multiplicity addition.
    pub fn direct_sum(&self, other: &JordanType) -> JordanType {
        let mut out = self.clone();
        for (&s, &m) in &other.blocks {
            out.add_blocks(s, m);
        }
        out
    }

    /// Cyclic F_p C-modules are self-dual, so dualizing is the identity.
    /// Kept as a named operation so call sites mirror the dualities they
    /// implement.
    pub fn dual(&self) -> JordanType {
        self.clone()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Object(
            self.blocks
                .iter()
                .map(|(&s, &m)| (s.to_string(), serde_json::json!(m)))
                .collect(),
        )
    }
}

impl std::fmt::Display for JordanType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.blocks.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .blocks
            .iter()
            .rev()
            .map(|(s, m)| if *m == 1 { format!("M{s}") } else { format!("{m} M{s}") })
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Block multiplicities from rank data:
/// m_i = rank(A^{i-1}) - 2 rank(A^i) + rank(A^{i+1}).
pub fn jordan_type(action: &NilpotentAction) -> JordanType {
    let p = action.p().get() as usize;
    let n = action.dim();
    let mut ranks = Vec::with_capacity(p + 2);
    let mut power = FpMatrix::identity(action.p(), n);
    ranks.push(power.rank());
    for _ in 0..=p {
        power = power.mul(action.matrix());
        ranks.push(power.rank());
    }
    let mut t = JordanType::empty();
    for i in 1..=p {
        let m = ranks[i - 1] + ranks[i + 1];
        let twice = 2 * ranks[i];
        assert!(m >= twice, "rank sequence is not convex");
        t.add_blocks(i, m - twice);
    }
    assert_eq!(t.total_dim(), n, "block sizes do not account for the dimension");
    t
}

/// Column space of A^k. k = 0 gives the full space, k >= nilpotency degree
/// gives the zero space.
pub fn power_image(action: &NilpotentAction, k: usize) -> Subspace {
    column_space(&action.matrix().pow(k as u64))
}

/// Kernel of A: the fixed subspace of sigma.
pub fn fixed_subspace(action: &NilpotentAction) -> Subspace {
    kernel(action.matrix())
}

/// Membership of a vector in a subspace.
pub fn membership(v: &[u64], s: &Subspace) -> Result<bool> {
    if v.len() != s.ambient_dim {
        return Err(Error::DimensionMismatch(format!(
            "vector of length {} against subspace of ambient dimension {}",
            v.len(),
            s.ambient_dim
        )));
    }
    Ok(s.contains(v))
}

/// A change of basis bringing a nilpotent action to Jordan form, plus the
/// resulting block layout.
#[derive(Debug, Clone)]
pub struct AdaptedBasis {
    /// P with P A P^{-1} in Jordan form (blocks of decreasing size, each a
    /// subdiagonal shift).
    pub change: FpMatrix,
    /// Block sizes in decreasing order.
    pub layout: Vec<usize>,
}

impl AdaptedBasis {
    /// The Jordan-form matrix this layout describes: for each block of size k
    /// the basis vectors are v, Av, ..., A^{k-1}v, so the action is the
    /// subdiagonal shift on each block.
    pub fn jordan_matrix(&self, p: Prime) -> FpMatrix {
        block_shift_matrix(p, &self.layout)
    }
}

pub fn block_shift_matrix(p: Prime, layout: &[usize]) -> FpMatrix {
    let n: usize = layout.iter().sum();
    let mut m = FpMatrix::zero(p, n, n);
    let mut offset = 0;
    for &k in layout {
        for i in 0..k.saturating_sub(1) {
            m[(offset + i + 1, offset + i)] = 1;
        }
        offset += k;
    }
    m
}

/// Jordan basis of a nilpotent action by chain construction: for each block
/// of size k a chain top v is chosen with A^{k-1} v != 0, extending
/// ker A^{k-1} + A (higher chains) inside ker A^k.
pub fn adapted_basis(action: &NilpotentAction) -> AdaptedBasis {
    let p = action.p();
    let n = action.dim();
    let max_k = p.get() as usize;

    let mut kernels = Vec::with_capacity(max_k + 1);
    let mut power = FpMatrix::identity(p, n);
    kernels.push(kernel(&power)); // ker A^0 = 0
    for _ in 0..max_k {
        power = power.mul(action.matrix());
        kernels.push(kernel(&power));
    }

    // chains: (top vector, block size), largest blocks first
    let mut chains: Vec<(FpVector, usize)> = Vec::new();
    for k in (1..=max_k).rev() {
        // span to extend: ker A^{k-1} plus the depth shifted images of longer chains
        let mut spanning: Vec<FpVector> = kernels[k - 1].basis().to_vec();
        for (top, size) in &chains {
            debug_assert!(*size > k);
            let mut v = top.clone();
            for _ in 0..(size - k) {
                v = action.apply(&v);
            }
            spanning.push(v);
        }
        let mut blocked = Subspace::from_spanning(p, n, spanning);
        for cand in kernels[k].basis() {
            if !blocked.contains(cand) {
                chains.push((cand.clone(), k));
                blocked = blocked.sum(&Subspace::from_spanning(p, n, vec![cand.clone()]));
            }
        }
    }

    let mut columns: Vec<FpVector> = Vec::with_capacity(n);
    let mut layout = Vec::with_capacity(chains.len());
    for (top, size) in &chains {
        layout.push(*size);
        let mut v = top.clone();
        for _ in 0..*size {
            columns.push(v.clone());
            v = action.apply(&v);
        }
    }
    assert_eq!(columns.len(), n, "chain basis does not span");

    let mut cols_matrix = FpMatrix::zero(p, n, n);
    for (j, col) in columns.iter().enumerate() {
        for i in 0..n {
            cols_matrix[(i, j)] = col[i];
        }
    }
    let change = cols_matrix.inverse();
    AdaptedBasis { change, layout }
}

/// Jordan type of the smallest A-stable subspace containing the generators,
/// with the restricted action.
pub fn submodule_type(action: &NilpotentAction, generators: &[FpVector]) -> Result<JordanType> {
    Ok(jordan_type(&restricted_action(action, generators)?.0))
}

/// The A-stable closure of the generators, returned as the restricted action
/// together with the echelon basis of the closure (rows, in ambient
/// coordinates).
pub fn restricted_action(
    action: &NilpotentAction,
    generators: &[FpVector],
) -> Result<(NilpotentAction, Subspace)> {
    let p = action.p();
    let n = action.dim();
    for g in generators {
        if g.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "generator of length {} in module of dimension {n}",
                g.len()
            )));
        }
    }
    let mut span = Subspace::from_spanning(p, n, generators.to_vec());
    loop {
        let images: Vec<FpVector> = span.basis().iter().map(|v| action.apply(v)).collect();
        let bigger = span.sum(&Subspace::from_spanning(p, n, images));
        if bigger.dim() == span.dim() {
            break;
        }
        span = bigger;
    }
    let k = span.dim();
    let mut restricted = FpMatrix::zero(p, k, k);
    for (j, b) in span.basis().iter().enumerate() {
        let (residue, coeffs) = span.reduce(&action.apply(b));
        assert!(residue.iter().all(|&x| x == 0), "closure is not stable");
        for i in 0..k {
            restricted[(i, j)] = coeffs[i];
        }
    }
    Ok((NilpotentAction { p, matrix: restricted }, span))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    /// 5x5 cyclic permutation matrix P: e_i -> e_{i+1 mod 5}.
    fn cyclic_shift(p: Prime, n: usize) -> FpMatrix {
        let mut m = FpMatrix::zero(p, n, n);
        for i in 0..n {
            m[((i + 1) % n, i)] = 1;
        }
        m
    }

    /// Exterior square of a matrix on basis e_i ^ e_j, i < j.
    fn exterior_square(m: &FpMatrix) -> FpMatrix {
        let n = m.nrows;
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let p = m.p;
        let mut out = FpMatrix::zero(p, pairs.len(), pairs.len());
        for (col, &(i, j)) in pairs.iter().enumerate() {
            // image of e_i ^ e_j = (M e_i) ^ (M e_j)
            for (row, &(a, b)) in pairs.iter().enumerate() {
                let term = p.sub(
                    p.mul(m[(a, i)], m[(b, j)]),
                    p.mul(m[(b, i)], m[(a, j)]),
                );
                out[(row, col)] = term;
            }
        }
        out
    }

    #[test]
    fn zero_action_is_all_ones() {
        let p = p5();
        let a = NilpotentAction::zero(p, 3);
        assert_eq!(jordan_type(&a), JordanType::from_pairs(&[(1, 3)]));
    }

    #[test]
    fn regular_representation_is_one_free_block() {
        let p = p5();
        let shift = cyclic_shift(p, 5);
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 5))).unwrap();
        assert_eq!(jordan_type(&a), JordanType::from_pairs(&[(5, 1)]));
    }

    #[test]
    fn exterior_square_of_regular_rep() {
        let p = p5();
        let shift = exterior_square(&cyclic_shift(p, 5));
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 10))).unwrap();
        assert_eq!(jordan_type(&a), JordanType::from_pairs(&[(5, 2)]));
    }

    #[test]
    fn non_nilpotent_rejected() {
        let p = p5();
        let m = FpMatrix::identity(p, 2);
        assert!(NilpotentAction::new(p, m).is_err());
    }

    #[test]
    fn power_image_chain() {
        let p = p5();
        let shift = cyclic_shift(p, 5);
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 5))).unwrap();
        assert_eq!(power_image(&a, 0), Subspace::full(p, 5));
        assert_eq!(power_image(&a, 4).dim(), 1);
        assert_eq!(power_image(&a, 5).dim(), 0);
        // image of A^4 is the fixed space for a single free block
        assert_eq!(power_image(&a, 4), fixed_subspace(&a));
        // nesting
        for i in 0..5 {
            for j in i..=5 {
                assert!(power_image(&a, i).contains_subspace(&power_image(&a, j)));
            }
        }
    }

    #[test]
    fn fixed_subspace_examples() {
        let p = p5();
        assert_eq!(fixed_subspace(&NilpotentAction::zero(p, 3)), Subspace::full(p, 3));
        let shift = cyclic_shift(p, 5);
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 5))).unwrap();
        let fixed = fixed_subspace(&a);
        assert_eq!(fixed.dim(), 1);
        // spanned by the all-ones direction
        assert!(fixed.contains(&[1, 1, 1, 1, 1]));
        // one block of size 2 has a 1-dimensional fixed space
        let b = NilpotentAction::new(p, FpMatrix::from_rows(p, &[vec![0, 0], vec![1, 0]])).unwrap();
        assert_eq!(fixed_subspace(&b).dim(), 1);
    }

    #[test]
    fn membership_checks() {
        let p = p5();
        let s = Subspace::from_spanning(p, 3, vec![vec![1, 0, 2]]);
        assert!(membership(&[0, 0, 0], &s).unwrap());
        assert!(membership(&[2, 0, 4], &s).unwrap());
        assert!(!membership(&[1, 1, 0], &s).unwrap());
        assert!(membership(&[1, 0], &s).is_err());
    }

    #[test]
    fn adapted_basis_trivial_cases() {
        let p = p5();
        let zero = NilpotentAction::zero(p, 3);
        let ab = adapted_basis(&zero);
        assert_eq!(ab.layout, vec![1, 1, 1]);
        assert_eq!(ab.change, FpMatrix::identity(p, 3));

        let single = NilpotentAction::new(p, block_shift_matrix(p, &[3])).unwrap();
        let ab = adapted_basis(&single);
        assert_eq!(ab.layout, vec![3]);
        let conj = ab.change.mul(single.matrix()).mul(&ab.change.inverse());
        assert_eq!(conj, ab.jordan_matrix(p));
    }

    #[test]
    fn adapted_basis_conjugates_to_jordan_form() {
        let p = p5();
        let shift = cyclic_shift(p, 5);
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 5))).unwrap();
        let ab = adapted_basis(&a);
        assert_eq!(ab.layout, vec![5]);
        let conj = ab.change.mul(a.matrix()).mul(&ab.change.inverse());
        assert_eq!(conj, ab.jordan_matrix(p));
    }

    #[test]
    fn direct_sum_and_dual() {
        let empty = JordanType::empty();
        let x = JordanType::from_pairs(&[(4, 1)]);
        let y = JordanType::from_pairs(&[(5, 1)]);
        assert_eq!(empty.direct_sum(&x), x);
        assert_eq!(x.direct_sum(&y), JordanType::from_pairs(&[(4, 1), (5, 1)]));
        assert_eq!(x.direct_sum(&y), y.direct_sum(&x));
        for t in [&empty, &x, &y] {
            assert_eq!(&t.dual(), t);
        }
    }

    #[test]
    fn submodule_type_examples() {
        let p = p5();
        let shift = cyclic_shift(p, 5);
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 5))).unwrap();
        assert_eq!(submodule_type(&a, &[]).unwrap(), JordanType::empty());
        let full: Vec<FpVector> = FpMatrix::identity(p, 5).rows_vec();
        assert_eq!(submodule_type(&a, &full).unwrap(), jordan_type(&a));
    }

    #[test]
    fn omega_relator_span_in_exterior_square() {
        // Generators: the nine commutator-shaped relator images of the
        // cyclically presented group on five generators, inside the exterior
        // square of the regular representation.
        let p = p5();
        let d = 5usize;
        let pairs: Vec<(usize, usize)> =
            (0..d).flat_map(|i| (i + 1..d).map(move |j| (i, j))).collect();
        let widx = |mut i: usize, mut j: usize| -> (usize, u64) {
            let mut sign = 1u64;
            if i > j {
                std::mem::swap(&mut i, &mut j);
                sign = 4; // -1 mod 5
            }
            (pairs.iter().position(|&q| q == (i, j)).unwrap(), sign)
        };
        let shift = exterior_square(&cyclic_shift(p, d));
        let a = NilpotentAction::new(p, shift.sub(&FpMatrix::identity(p, 10))).unwrap();
        let mut gens: Vec<FpVector> = Vec::new();
        for i in 1..d {
            let mut v = vec![0u64; 10];
            let (k1, s1) = widx(i, (i + 1) % d);
            v[k1] = s1;
            let (k0, _) = widx(0, 1);
            v[k0] = p.sub(v[k0], 1);
            gens.push(v);
        }
        for &(i, j) in &pairs {
            if (j - i) % d != 1 && (d + i - j) % d != 1 {
                let mut v = vec![0u64; 10];
                v[widx(i, j).0] = 1;
                gens.push(v);
            }
        }
        assert_eq!(gens.len(), 9);
        assert_eq!(
            submodule_type(&a, &gens).unwrap(),
            JordanType::from_pairs(&[(4, 1), (5, 1)])
        );
    }

    #[test]
    fn rank_formula_invariant() {
        // rank(A^k) = sum_{i>k} (i-k) m_i for a few explicit layouts
        let p = p5();
        for layout in [vec![5usize], vec![3, 2], vec![2, 2, 1], vec![4, 1]] {
            let a = NilpotentAction::new(p, block_shift_matrix(p, &layout)).unwrap();
            let t = jordan_type(&a);
            for k in 0..=5usize {
                let expected: usize = t
                    .blocks()
                    .iter()
                    .filter(|(&i, _)| i > k)
                    .map(|(&i, &m)| (i - k) * m)
                    .sum();
                assert_eq!(a.matrix().pow(k as u64).rank(), expected);
            }
        }
    }
}
