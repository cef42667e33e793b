//! Modules presented over the local ring R_p = F_p[t]/(t^p).
//!
//! F_p[C_p] is isomorphic to R_p via t = sigma - 1, and R_p is an Artinian
//! principal ideal ring whose ideals are (t^k). A presentation matrix over
//! R_p can therefore be diagonalized by row and column operations, pivoting
//! on entries of minimal t-valuation: every such entry is a unit times a
//! power of t and divides the rest of its row and column.
#![allow(clippy::needless_range_loop)]

use super::jordan::{block_shift_matrix, JordanType, NilpotentAction};
use super::matrix::{FpVector, Prime};

/// Polynomial in t of degree < p, i.e. an element of R_p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RPoly {
    p: Prime,
    coeffs: Vec<u64>, // length p, coeffs[k] multiplies t^k
}

impl RPoly {
    pub fn zero(p: Prime) -> Self {
        RPoly { p, coeffs: vec![0; p.get() as usize] }
    }

    pub fn one(p: Prime) -> Self {
        Self::t_power(p, 0)
    }

    pub fn constant(p: Prime, c: i64) -> Self {
        let mut out = Self::zero(p);
        out.coeffs[0] = p.reduce(c);
        out
    }

    /// t^k, or zero when k >= p.
    pub fn t_power(p: Prime, k: usize) -> Self {
        let mut out = Self::zero(p);
        if k < p.get() as usize {
            out.coeffs[k] = 1;
        }
        out
    }

    pub fn from_coeffs(p: Prime, coeffs: &[i64]) -> Self {
        assert!(coeffs.len() <= p.get() as usize, "degree must be below p");
        let mut out = Self::zero(p);
        for (k, &c) in coeffs.iter().enumerate() {
            out.coeffs[k] = p.reduce(c);
        }
        out
    }

    /// (1 + t)^k reduced mod t^p: the image of sigma^k.
    pub fn sigma_power(p: Prime, k: u64) -> Self {
        let mut acc = Self::one(p);
        let base = Self::from_coeffs(p, &[1, 1]);
        for _ in 0..(k % (p.get() * p.get())) {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn coeff(&self, k: usize) -> u64 {
        self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Index of the lowest nonzero coefficient; None for the zero element.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    /// Units of R_p are exactly the polynomials with nonzero constant term.
    pub fn is_unit(&self) -> bool {
        self.coeffs[0] != 0
    }

    pub fn add(&self, other: &RPoly) -> RPoly {
        let mut out = self.clone();
        for (a, &b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a = self.p.add(*a, b);
        }
        out
    }

    pub fn sub(&self, other: &RPoly) -> RPoly {
        let mut out = self.clone();
        for (a, &b) in out.coeffs.iter_mut().zip(&other.coeffs) {
            *a = self.p.sub(*a, b);
        }
        out
    }

    pub fn neg(&self) -> RPoly {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a = self.p.neg(*a);
        }
        out
    }

    pub fn scale(&self, c: u64) -> RPoly {
        let mut out = self.clone();
        for a in out.coeffs.iter_mut() {
            *a = self.p.mul(*a, c);
        }
        out
    }

    pub fn mul(&self, other: &RPoly) -> RPoly {
        let p = self.p;
        let n = p.get() as usize;
        let mut out = Self::zero(p);
        for i in 0..n {
            if self.coeffs[i] == 0 {
                continue;
            }
            for j in 0..n - i {
                out.coeffs[i + j] =
                    p.add(out.coeffs[i + j], p.mul(self.coeffs[i], other.coeffs[j]));
            }
        }
        out
    }

    /// Inverse of a unit, solved coefficient by coefficient.
    pub fn unit_inverse(&self) -> RPoly {
        assert!(self.is_unit(), "inverse of a non-unit in R_p");
        let p = self.p;
        let n = p.get() as usize;
        let c0_inv = p.inv(self.coeffs[0]);
        let mut g = Self::zero(p);
        g.coeffs[0] = c0_inv;
        for k in 1..n {
            let mut acc = 0u64;
            for i in 1..=k {
                acc = p.add(acc, p.mul(self.coeffs[i], g.coeffs[k - i]));
            }
            g.coeffs[k] = p.neg(p.mul(c0_inv, acc));
        }
        g
    }

    /// Exact division by t^k; requires valuation >= k.
    pub fn shift_down(&self, k: usize) -> RPoly {
        assert!(self.valuation().is_none_or(|v| v >= k), "inexact division by t^{k}");
        let n = self.p.get() as usize;
        let mut out = Self::zero(self.p);
        for i in k..n {
            out.coeffs[i - k] = self.coeffs[i];
        }
        out
    }
}

/// A module over R_p given by a free rank and a list of relation vectors.
#[derive(Debug, Clone)]
pub struct ModulePresentation {
    pub p: Prime,
    pub rank: usize,
    pub relations: Vec<Vec<RPoly>>,
}

impl ModulePresentation {
    pub fn new(p: Prime, rank: usize, relations: Vec<Vec<RPoly>>) -> Self {
        for rel in &relations {
            assert_eq!(rel.len(), rank, "relation vector has wrong length");
        }
        ModulePresentation { p, rank, relations }
    }

    /// The presentation of a concrete module with a given sigma - 1 action:
    /// one generator per basis vector e_i, one relation t e_i - A e_i.
    pub fn from_action(action: &NilpotentAction) -> Self {
        let p = action.p();
        let n = action.dim();
        let mut relations = Vec::with_capacity(n);
        for i in 0..n {
            let mut basis = vec![0u64; n];
            basis[i] = 1;
            let image = action.apply(&basis);
            let mut rel = vec![RPoly::zero(p); n];
            for j in 0..n {
                let mut entry = RPoly::constant(p, -(image[j] as i64));
                if j == i {
                    entry = entry.add(&RPoly::t_power(p, 1));
                }
                rel[j] = entry;
            }
            relations.push(rel);
        }
        ModulePresentation::new(p, n, relations)
    }
}

/// Expresses classes of the quotient module in adapted (Jordan) coordinates.
///
/// The diagonalization produces new generators f with e = U f; an element
/// written as c over the original generators has f-coordinates U^T c, and the
/// adapted coordinates are the truncated coefficient vectors of the surviving
/// cyclic blocks, largest blocks first.
#[derive(Debug, Clone)]
pub struct QuotientMap {
    p: Prime,
    rank: usize,
    u: Vec<Vec<RPoly>>,
    /// (column in the diagonalized presentation, block size), sorted by
    /// decreasing size then by column index.
    blocks: Vec<(usize, usize)>,
}

impl QuotientMap {
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn layout(&self) -> Vec<usize> {
        self.blocks.iter().map(|&(_, s)| s).collect()
    }

    pub fn dim(&self) -> usize {
        self.blocks.iter().map(|&(_, s)| s).sum()
    }

    /// The sigma - 1 action on the quotient in adapted coordinates.
    pub fn action(&self) -> NilpotentAction {
        NilpotentAction::new(self.p, block_shift_matrix(self.p, &self.layout()))
            .expect("block shift is nilpotent")
    }

    /// Adapted coordinates of the class of an element written over the
    /// original generators.
    pub fn apply(&self, element: &[RPoly]) -> FpVector {
        assert_eq!(element.len(), self.rank, "element has wrong rank");
        let mut out = Vec::with_capacity(self.dim());
        for &(col, size) in &self.blocks {
            // f-coordinate at col: sum_j element[j] * U[j][col]
            let mut f = RPoly::zero(self.p);
            for (j, c) in element.iter().enumerate() {
                f = f.add(&c.mul(&self.u[j][col]));
            }
            out.extend_from_slice(&f.coeffs()[..size]);
        }
        out
    }

    /// Adapted coordinates of the class of a single original generator.
    pub fn apply_generator(&self, index: usize) -> FpVector {
        let mut e = vec![RPoly::zero(self.p); self.rank];
        e[index] = RPoly::one(self.p);
        self.apply(&e)
    }
}

/// Diagonalize the relation matrix over R_p and read off the Jordan type of
/// the quotient: a pivot t^k contributes a cyclic block of size k (nothing
/// when the pivot is a unit), and every pivotless column contributes a free
/// block of size p.
pub fn present_normal_form(mp: &ModulePresentation) -> (JordanType, QuotientMap) {
    let p = mp.p;
    let r = mp.rank;
    let m = mp.relations.len();
    let mut mat: Vec<Vec<RPoly>> = mp.relations.clone();
    let mut u: Vec<Vec<RPoly>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| if i == j { RPoly::one(p) } else { RPoly::zero(p) })
                .collect()
        })
        .collect();

    let mut pivot_vals: Vec<usize> = Vec::new();
    let mut pos = 0usize;
    while pos < m && pos < r {
        // minimal-valuation entry in the remaining submatrix, ties broken by
        // lowest (row, column)
        let mut best: Option<(usize, usize, usize)> = None; // (val, row, col)
        for i in pos..m {
            for j in pos..r {
                if let Some(v) = mat[i][j].valuation() {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((val, pi, pj)) = best else { break };

        mat.swap(pos, pi);
        if pj != pos {
            for row in mat.iter_mut() {
                row.swap(pos, pj);
            }
            for row in u.iter_mut() {
                row.swap(pos, pj);
            }
        }

        // normalize the pivot to exactly t^val
        let unit = mat[pos][pos].shift_down(val);
        let unit_inv = unit.unit_inverse();
        for j in pos..r {
            mat[pos][j] = mat[pos][j].mul(&unit_inv);
        }

        // clear the pivot column with row operations
        for i in 0..m {
            if i != pos && !mat[i][pos].is_zero() {
                let q = mat[i][pos].shift_down(val);
                for j in 0..r {
                    let delta = q.mul(&mat[pos][j]);
                    mat[i][j] = mat[i][j].sub(&delta);
                }
            }
        }

        // clear the pivot row with column operations, tracked in U
        for j in 0..r {
            if j != pos && !mat[pos][j].is_zero() {
                let q = mat[pos][j].shift_down(val);
                for i in 0..m {
                    let delta = q.mul(&mat[i][pos]);
                    mat[i][j] = mat[i][j].sub(&delta);
                }
                for row in u.iter_mut() {
                    let delta = q.mul(&row[pos]);
                    row[j] = row[j].sub(&delta);
                }
            }
        }

        pivot_vals.push(val);
        pos += 1;
    }

    let pfull = p.get() as usize;
    let mut blocks: Vec<(usize, usize)> = Vec::new();
    for (col, &val) in pivot_vals.iter().enumerate() {
        if val > 0 {
            blocks.push((col, val));
        }
    }
    for col in pivot_vals.len()..r {
        blocks.push((col, pfull));
    }
    blocks.sort_by(|a, b| b.1.cmp(&a.1).then(a.0.cmp(&b.0)));

    let mut jt = JordanType::empty();
    for &(_, size) in &blocks {
        jt.add_blocks(size, 1);
    }
    (jt, QuotientMap { p, rank: r, u, blocks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fpmod::jordan::jordan_type;

    fn p5() -> Prime {
        Prime::new(5).unwrap()
    }

    #[test]
    fn rpoly_arithmetic() {
        let p = p5();
        let f = RPoly::from_coeffs(p, &[1, 1]); // 1 + t
        let g = f.unit_inverse();
        assert_eq!(f.mul(&g), RPoly::one(p));
        assert_eq!(RPoly::t_power(p, 2).valuation(), Some(2));
        assert!(RPoly::zero(p).valuation().is_none());
        assert!(f.is_unit());
        assert!(!RPoly::t_power(p, 1).is_unit());
        // t^3 * t^2 = 0 mod t^5
        assert!(RPoly::t_power(p, 3).mul(&RPoly::t_power(p, 2)).is_zero());
        assert_eq!(RPoly::sigma_power(p, 0), RPoly::one(p));
    }

    #[test]
    fn single_t_relation_gives_trivial_block() {
        let p = p5();
        let mp = ModulePresentation::new(p, 1, vec![vec![RPoly::t_power(p, 1)]]);
        let (jt, _) = present_normal_form(&mp);
        assert_eq!(jt, JordanType::from_pairs(&[(1, 1)]));
    }

    #[test]
    fn unit_relation_kills_the_module() {
        let p = p5();
        let mp =
            ModulePresentation::new(p, 1, vec![vec![RPoly::from_coeffs(p, &[1, 1])]]);
        let (jt, map) = present_normal_form(&mp);
        assert_eq!(jt, JordanType::empty());
        assert_eq!(map.dim(), 0);
    }

    #[test]
    fn t_squared_plus_free_column() {
        let p = p5();
        let mp = ModulePresentation::new(
            p,
            2,
            vec![vec![RPoly::t_power(p, 2), RPoly::zero(p)]],
        );
        let (jt, map) = present_normal_form(&mp);
        // cokernel of t^2 on one generator is 2-dimensional, the other
        // generator stays free: dimensions 2 + 5 = 7
        assert_eq!(jt, JordanType::from_pairs(&[(2, 1), (5, 1)]));
        assert_eq!(map.dim(), 7);
    }

    #[test]
    fn no_relations_gives_free_module() {
        let p = p5();
        let mp = ModulePresentation::new(p, 3, vec![]);
        let (jt, _) = present_normal_form(&mp);
        assert_eq!(jt, JordanType::from_pairs(&[(5, 3)]));
    }

    #[test]
    fn quotient_map_intertwines_t_action() {
        let p = p5();
        let mp = ModulePresentation::new(
            p,
            3,
            vec![
                vec![RPoly::t_power(p, 2), RPoly::t_power(p, 1), RPoly::zero(p)],
                vec![RPoly::zero(p), RPoly::t_power(p, 3), RPoly::constant(p, 2)],
            ],
        );
        let (_, map) = present_normal_form(&mp);
        let action = map.action();
        // multiplication by t commutes with the quotient map
        let elems = [
            vec![RPoly::one(p), RPoly::zero(p), RPoly::zero(p)],
            vec![RPoly::from_coeffs(p, &[1, 2]), RPoly::t_power(p, 1), RPoly::constant(p, 3)],
            vec![RPoly::zero(p), RPoly::one(p), RPoly::from_coeffs(p, &[0, 0, 4])],
        ];
        let t = RPoly::t_power(p, 1);
        for e in &elems {
            let te: Vec<RPoly> = e.iter().map(|c| c.mul(&t)).collect();
            assert_eq!(map.apply(&te), action.apply(&map.apply(e)));
        }
    }

    #[test]
    fn agrees_with_jordan_type_on_encoded_actions() {
        let p = p5();
        for layout in [vec![5usize], vec![3, 1], vec![2, 2], vec![4, 2, 1]] {
            let a = NilpotentAction::new(
                p,
                crate::fpmod::jordan::block_shift_matrix(p, &layout),
            )
            .unwrap();
            let mp = ModulePresentation::from_action(&a);
            let (jt, map) = present_normal_form(&mp);
            assert_eq!(jt, jordan_type(&a));
            assert_eq!(map.dim(), a.dim());
        }
    }
}
