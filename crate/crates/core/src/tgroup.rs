//! T-groups: pro-p-groups with a maximal closed subgroup N that is abelian of
//! exponent dividing p.
//!
//! Such a group is determined up to isomorphism by the pair (N, sigma^p): the
//! F_p C-module structure of N together with the class of sigma^p inside the
//! fixed subspace N^C, for any sigma outside N. The invariants are the block
//! multiplicities t_1..t_p (with a correction in the abelian exponent-p case)
//! and the depth u at which p-th powers sit in the lower central series.
//!
//! `ExplicitTGroup` realizes the extension concretely on pairs (n, k) and
//! recovers the invariants by brute-force enumeration; it exists to validate
//! the formula path, not to be fast.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{Error, Result};
use crate::fpmod::{
    block_shift_matrix, fixed_subspace, jordan_type, power_image, FpMatrix, FpVector,
    NilpotentAction, Prime,
};

/// (p, module with its sigma - 1 action, class of sigma^p). The distinguished
/// vector must be fixed by sigma since sigma commutes with its own power.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TGroupData {
    p: Prime,
    action: NilpotentAction,
    sigma_p: FpVector,
}

impl TGroupData {
    pub fn new(p: Prime, action: NilpotentAction, sigma_p: FpVector) -> Result<Self> {
        if action.p() != p {
            return Err(Error::DimensionMismatch("action has a different prime".into()));
        }
        if sigma_p.len() != action.dim() {
            return Err(Error::DimensionMismatch(format!(
                "sigma^p vector of length {} in module of dimension {}",
                sigma_p.len(),
                action.dim()
            )));
        }
        let sigma_p: FpVector = sigma_p.iter().map(|&x| x % p.get()).collect();
        if !fixed_subspace(&action).contains(&sigma_p) {
            return Err(Error::ParameterRange(
                "sigma^p must lie in the fixed subspace of the action".into(),
            ));
        }
        Ok(TGroupData { p, action, sigma_p })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn action(&self) -> &NilpotentAction {
        &self.action
    }

    pub fn sigma_p(&self) -> &[u64] {
        &self.sigma_p
    }

    pub fn dim(&self) -> usize {
        self.action.dim()
    }
}

/// Invariants (t_1..t_p, u) of a T-group. Zero multiplicities are not stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TInvariants {
    p: Prime,
    t: BTreeMap<usize, usize>,
    u: usize,
}

impl TInvariants {
    pub fn new(p: Prime, t: &[(usize, usize)], u: usize) -> Self {
        let pp = p.get() as usize;
        assert!((1..=pp).contains(&u), "u must lie in [1, p]");
        let mut map = BTreeMap::new();
        for &(i, m) in t {
            assert!((1..=pp).contains(&i), "t index must lie in [1, p]");
            if m > 0 {
                *map.entry(i).or_insert(0) += m;
            }
        }
        TInvariants { p, t: map, u }
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn t(&self, i: usize) -> usize {
        self.t.get(&i).copied().unwrap_or(0)
    }

    pub fn t_map(&self) -> &BTreeMap<usize, usize> {
        &self.t
    }

    pub fn u(&self) -> usize {
        self.u
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t": self.t.iter().map(|(k, v)| (k.to_string(), serde_json::json!(v)))
                .collect::<serde_json::Map<_, _>>(),
            "u": self.u,
        })
    }
}

/// Invariants from (N, sigma^p):
/// t_i is the block multiplicity m_i for i >= 2; t_1 is m_1, plus one exactly
/// when the group is abelian of exponent p (zero action and trivial sigma^p);
/// u is the largest i <= p with sigma^p inside the image of A^(i-1).
pub fn invariants_from_data(data: &TGroupData) -> TInvariants {
    let p = data.p();
    let pp = p.get() as usize;
    let jt = jordan_type(data.action());
    let abelian_exponent_p =
        data.action().matrix().is_zero() && data.sigma_p().iter().all(|&x| x == 0);
    let mut t: Vec<(usize, usize)> = Vec::new();
    for (&size, &mult) in jt.blocks() {
        t.push((size, mult));
    }
    if abelian_exponent_p {
        t.push((1, 1));
    }
    let mut u = 1;
    for i in 1..=pp {
        if power_image(data.action(), i - 1).contains(data.sigma_p()) {
            u = i;
        } else {
            break;
        }
    }
    TInvariants::new(p, &t, u)
}

/// The two admissibility conditions: if u < p then t_u >= 1, and if u = p
/// with t_i = 0 for all 2 <= i <= p then t_1 >= 1.
pub fn admissible(inv: &TInvariants) -> bool {
    let pp = inv.p().get() as usize;
    if inv.u() < pp && inv.t(inv.u()) == 0 {
        return false;
    }
    if inv.u() == pp && (2..=pp).all(|i| inv.t(i) == 0) && inv.t(1) == 0 {
        return false;
    }
    true
}

/// Canonical model with the given invariants.
///
/// For u < p one block of size u is distinguished and sigma^p is the
/// (sigma-1)^(u-1)-image of its generator; for u = p sigma^p vanishes and,
/// in the abelian exponent-p case, one copy of M_1 is absorbed by the
/// quotient generator.
pub fn canonical(inv: &TInvariants) -> Result<TGroupData> {
    if !admissible(inv) {
        return Err(Error::NotAdmissible(format!(
            "u = {} with t_u = {} and t = {:?}",
            inv.u(),
            inv.t(inv.u()),
            inv.t_map()
        )));
    }
    let p = inv.p();
    let pp = p.get() as usize;
    let exceptional = inv.u() == pp && (2..=pp).all(|i| inv.t(i) == 0);
    let mut layout: Vec<usize> = Vec::new();
    for i in (1..=pp).rev() {
        let mut mult = inv.t(i);
        if i == 1 && exceptional {
            mult -= 1;
        }
        layout.extend(std::iter::repeat_n(i, mult));
    }
    let action = NilpotentAction::new(p, block_shift_matrix(p, &layout))?;
    let n = action.dim();
    let mut sigma_p = vec![0u64; n];
    if inv.u() < pp {
        // first block of size u is the distinguished factor
        let mut offset = 0;
        let mut placed = false;
        for &size in &layout {
            if size == inv.u() {
                sigma_p[offset + inv.u() - 1] = 1;
                placed = true;
                break;
            }
            offset += size;
        }
        assert!(placed, "admissible invariants must provide a block of size u");
    }
    TGroupData::new(p, action, sigma_p)
}

/// T-groups are classified by their invariants.
pub fn isomorphic(a: &TGroupData, b: &TGroupData) -> bool {
    invariants_from_data(a) == invariants_from_data(b)
}

/// Whether a T-group with these invariants occurs as T_{E/F} for a cyclic
/// degree-p extension with char F = p or a p-th root of unity in F.
/// For p = 2 every T-group does; for odd p the conditions are u in {1, 2},
/// t_2 = u - 1, and t_i = 0 for 3 <= i < p.
pub fn galois_realizable(inv: &TInvariants) -> bool {
    let pp = inv.p().get() as usize;
    if pp == 2 {
        return true;
    }
    (inv.u() == 1 || inv.u() == 2)
        && inv.t(2) == inv.u() - 1
        && (3..pp).all(|i| inv.t(i) == 0)
}

/// Element of an explicit T-group: a module vector and a residue mod p.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TElement {
    pub vector: FpVector,
    pub power: u64,
}

/// Default enumeration bound for the brute-force oracle: p^6 elements.
pub fn default_oracle_bound(p: Prime) -> u128 {
    (p.get() as u128).pow(6)
}

/// Concrete realization of the extension 1 -> N -> T -> C_p -> 1 with
/// multiplication (n, k)(n', k') = (n + sigma^k n' + carry(k, k') sigma^p,
/// k + k' mod p), where the carry is 1 exactly when k + k' >= p.
#[derive(Debug, Clone)]
pub struct ExplicitTGroup {
    data: TGroupData,
    sigma_pows: Vec<FpMatrix>,
}

impl ExplicitTGroup {
    pub fn new(data: &TGroupData) -> Self {
        let p = data.p();
        let mut sigma_pows = Vec::with_capacity(p.get() as usize);
        let sigma = data.action().sigma_matrix();
        let mut acc = FpMatrix::identity(p, data.dim());
        for _ in 0..p.get() {
            sigma_pows.push(acc.clone());
            acc = acc.mul(&sigma);
        }
        ExplicitTGroup { data: data.clone(), sigma_pows }
    }

    pub fn data(&self) -> &TGroupData {
        &self.data
    }

    pub fn p(&self) -> Prime {
        self.data.p()
    }

    pub fn order(&self) -> u128 {
        (self.p().get() as u128).pow(self.data.dim() as u32 + 1)
    }

    pub fn identity(&self) -> TElement {
        TElement { vector: vec![0; self.data.dim()], power: 0 }
    }

    pub fn multiply(&self, x: &TElement, y: &TElement) -> TElement {
        let p = self.p().get();
        let shifted = self.sigma_pows[x.power as usize].mul_vec(&y.vector);
        let carry = x.power + y.power >= p;
        let vector: FpVector = x
            .vector
            .iter()
            .zip(&shifted)
            .enumerate()
            .map(|(i, (&a, &b))| {
                let c = if carry { self.data.sigma_p()[i] } else { 0 };
                (a + b + c) % p
            })
            .collect();
        TElement { vector, power: (x.power + y.power) % p }
    }

    pub fn inverse(&self, x: &TElement) -> TElement {
        let p = self.p().get();
        let l = (p - x.power) % p;
        let carry = x.power != 0;
        let adjusted: FpVector = x
            .vector
            .iter()
            .enumerate()
            .map(|(i, &a)| {
                let c = if carry { self.data.sigma_p()[i] } else { 0 };
                (2 * p - a - c) % p
            })
            .collect();
        let vector = self.sigma_pows[l as usize].mul_vec(&adjusted);
        TElement { vector, power: l }
    }

    pub fn pth_power(&self, x: &TElement) -> TElement {
        let mut acc = self.identity();
        for _ in 0..self.p().get() {
            acc = self.multiply(&acc, x);
        }
        acc
    }

    pub fn commutator(&self, x: &TElement, y: &TElement) -> TElement {
        let a = self.multiply(x, y);
        let b = self.multiply(&self.inverse(x), &self.inverse(y));
        self.multiply(&a, &b)
    }

    pub fn encode(&self, x: &TElement) -> u64 {
        let p = self.p().get();
        let mut code = x.power;
        for &v in x.vector.iter().rev() {
            code = code * p + v;
        }
        code
    }

    pub fn decode(&self, mut code: u64) -> TElement {
        let p = self.p().get();
        let n = self.data.dim();
        // encoding order: vector[0] is the least significant digit,
        // the power residue the most significant
        let mut vector = Vec::with_capacity(n);
        for _ in 0..n {
            vector.push(code % p);
            code /= p;
        }
        TElement { vector, power: code % p }
    }

    pub fn elements(&self) -> Vec<TElement> {
        let p = self.p().get();
        let n = self.data.dim();
        let mut out = Vec::with_capacity(self.order() as usize);
        let total = p.pow(n as u32);
        for k in 0..p {
            for idx in 0..total {
                let mut v = Vec::with_capacity(n);
                let mut rest = idx;
                for _ in 0..n {
                    v.push(rest % p);
                    rest /= p;
                }
                out.push(TElement { vector: v, power: k });
            }
        }
        out
    }

    /// Module basis vectors and a lift of sigma: a generating set.
    pub fn generators(&self) -> Vec<TElement> {
        let n = self.data.dim();
        let mut gens = Vec::with_capacity(n + 1);
        for i in 0..n {
            let mut v = vec![0; n];
            v[i] = 1;
            gens.push(TElement { vector: v, power: 0 });
        }
        gens.push(TElement { vector: vec![0; n], power: 1 });
        gens
    }

    /// Closure of a seed set under products, inverses and (optionally)
    /// conjugation by the group generators. Deterministic: sets are ordered
    /// by element code.
    fn closure(&self, seeds: &[TElement], normal: bool) -> BTreeSet<u64> {
        let mut set: BTreeSet<u64> = BTreeSet::new();
        set.insert(self.encode(&self.identity()));
        let mut seed_elems: Vec<TElement> = seeds.to_vec();
        seed_elems.extend(seeds.iter().map(|s| self.inverse(s)));
        let gens = self.generators();
        let mut frontier: Vec<TElement> = vec![self.identity()];
        while let Some(x) = frontier.pop() {
            for s in &seed_elems {
                let y = self.multiply(&x, s);
                if set.insert(self.encode(&y)) {
                    frontier.push(y);
                }
            }
            if normal {
                for g in &gens {
                    let y = self.multiply(&self.multiply(g, &x), &self.inverse(g));
                    if set.insert(self.encode(&y)) {
                        frontier.push(y);
                    }
                }
            }
        }
        set
    }

    /// Lower central series T_(1) .. T_(p+1) as element-code sets, computed
    /// by commutator closure: T_(i+1) is the normal closure of the
    /// commutators [g, h] over generators g and all h in T_(i).
    pub fn lower_central_series(&self) -> Vec<BTreeSet<u64>> {
        let pp = self.p().get() as usize;
        let all: BTreeSet<u64> = self.elements().iter().map(|x| self.encode(x)).collect();
        let gens = self.generators();
        let mut series = vec![all];
        for _ in 1..=pp {
            let prev = series.last().unwrap();
            let mut seeds = Vec::new();
            for code in prev {
                let h = self.decode(*code);
                for g in &gens {
                    seeds.push(self.commutator(g, &h));
                }
            }
            series.push(self.closure(&seeds, true));
        }
        series
    }

    /// Elements commuting with every generator (hence with everything).
    pub fn center(&self) -> BTreeSet<u64> {
        let gens = self.generators();
        self.elements()
            .iter()
            .filter(|x| {
                gens.iter()
                    .all(|g| self.multiply(x, g) == self.multiply(g, x))
            })
            .map(|x| self.encode(x))
            .collect()
    }

    /// The set of p-th powers (not yet a subgroup).
    pub fn pth_power_set(&self) -> BTreeSet<u64> {
        self.elements()
            .iter()
            .map(|x| self.encode(&self.pth_power(x)))
            .collect()
    }

    /// Subgroup generated by all p-th powers.
    pub fn pth_power_subgroup(&self) -> BTreeSet<u64> {
        let seeds: Vec<TElement> =
            self.pth_power_set().iter().map(|&c| self.decode(c)).collect();
        self.closure(&seeds, false)
    }

    pub fn is_abelian(&self) -> bool {
        let gens = self.generators();
        gens.iter().all(|x| {
            gens.iter()
                .all(|y| self.multiply(x, y) == self.multiply(y, x))
        })
    }

    pub fn has_exponent_p(&self) -> bool {
        let id = self.identity();
        self.elements().iter().all(|x| self.pth_power(x) == id)
    }

    pub fn oracle_invariants(&self) -> Result<TInvariants> {
        self.oracle_invariants_bounded(default_oracle_bound(self.p()))
    }

    /// Invariants computed literally from the definitions by enumeration.
    pub fn oracle_invariants_bounded(&self, bound: u128) -> Result<TInvariants> {
        if self.order() > bound {
            return Err(Error::SizeBound {
                order: self.order() as u64,
                bound: bound as u64,
            });
        }
        let p = self.p().get();
        let pp = p as usize;
        let center = self.center();
        let id = self.identity();
        let center_p: BTreeSet<u64> = center
            .iter()
            .filter(|&&c| self.pth_power(&self.decode(c)) == id)
            .copied()
            .collect();
        let series = self.lower_central_series();

        let log_p = |n: usize| -> usize {
            let mut k = 0;
            let mut m = n as u64;
            while m > 1 {
                assert!(m.is_multiple_of(p), "subquotient size is not a power of p");
                m /= p;
                k += 1;
            }
            k
        };

        let mut t: Vec<(usize, usize)> = Vec::new();
        let z_cap_t2 = center.intersection(&series[1]).count();
        t.push((1, log_p(center_p.len()) - log_p(z_cap_t2)));
        for i in 2..=pp {
            let a = center.intersection(&series[i - 1]).count();
            let b = center.intersection(&series[i]).count();
            t.push((i, log_p(a) - log_p(b)));
        }

        let powers = self.pth_power_set();
        let mut u = 1;
        for i in 1..=pp {
            if powers.is_subset(&series[i - 1]) {
                u = i;
            } else {
                break;
            }
        }
        Ok(TInvariants::new(self.p(), &t, u))
    }
}
