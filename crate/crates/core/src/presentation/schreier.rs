//! Reidemeister-Schreier rewriting from a presented group to the module of
//! its index-p subgroup.
//!
//! With the character rescaled so a designated generator s has value 1, the
//! transversal is {s^0, ..., s^(p-1)} and the Schreier generators are
//! gamma(s^i, x) = s^i x s^(-((i + chi(x)) mod p)). The gamma(s^i, s) with
//! i < p-1 are freely trivial and are eliminated; gamma(s^(p-1), s) = s^p
//! carries its own module generator z with the structural relation t z = 0
//! (conjugation by s fixes s^p on the nose). Every other generator x
//! contributes one module generator, with gamma(s^i, x) = sigma^i gamma(1, x)
//! = (1+t)^i over R_p. Conjugating a subgroup word by s shifts the starting
//! coset, so the sigma-translates of a rewritten relator are module
//! multiples: one module relation per relator.

use crate::class2::Word;
use crate::error::{Error, Result};
use crate::fpmod::{
    fixed_subspace, ModulePresentation, FpVector, Prime, QuotientMap, RPoly,
};
use crate::tgroup::{invariants_from_data, TGroupData, TInvariants};

use super::{Character, ProPPresentation};

/// Scanning state shared by the construction and by later word rewrites.
#[derive(Debug, Clone)]
struct Rewriter {
    p: Prime,
    chi: Vec<u64>,
    designated: usize,
    /// generator index -> module column; None for the designated generator
    columns: Vec<Option<usize>>,
    z_column: usize,
    rank: usize,
    sigma_pows: Vec<RPoly>,
}

impl Rewriter {
    fn new(p: Prime, chi: &Character) -> Self {
        let designated = chi.designated_generator();
        let n = chi.len();
        let mut columns = vec![None; n];
        let mut next = 0;
        for (i, col) in columns.iter_mut().enumerate() {
            if i != designated {
                *col = Some(next);
                next += 1;
            }
        }
        let z_column = next;
        let sigma_pows = (0..p.get()).map(|k| RPoly::sigma_power(p, k)).collect();
        Rewriter {
            p,
            chi: chi.values().to_vec(),
            designated,
            columns,
            z_column,
            rank: n,
            sigma_pows,
        }
    }

    /// Rewrite a word of the subgroup to coordinates over the module
    /// generators. Requires chi(word) = 0.
    ///
    /// A letter with character value c scanned at coset v contributes
    /// sigma^v on its own module generator plus one copy of z whenever
    /// v + c wraps past p: the Schreier generator gamma(s^v, x) ends in
    /// s^(-(v+c)), and straightening that tail across s^p costs exactly one
    /// z. The designated generator is the c = 1, zero-module-generator case
    /// of the same rule.
    fn rewrite(&self, w: &Word) -> Result<Vec<RPoly>> {
        let p = self.p.get();
        let mut out = vec![RPoly::zero(self.p); self.rank];
        let mut coset: u64 = 0;
        let emit = |coset: u64, index: usize, negative: bool, out: &mut Vec<RPoly>| {
            let add = |col: usize, poly: &RPoly, out: &mut Vec<RPoly>| {
                out[col] = if negative { out[col].sub(poly) } else { out[col].add(poly) };
            };
            if let Some(col) = self.columns[index] {
                let poly = self.sigma_pows[coset as usize].clone();
                add(col, &poly, out);
            }
            if coset + self.chi[index] >= p {
                add(self.z_column, &RPoly::one(self.p), out);
            }
        };
        for l in w.letters() {
            let steps = l.exponent.unsigned_abs();
            for _ in 0..steps {
                if l.exponent > 0 {
                    emit(coset, l.index, false, &mut out);
                    coset = (coset + self.chi[l.index]) % p;
                } else {
                    coset = (coset + p - self.chi[l.index]) % p;
                    emit(coset, l.index, true, &mut out);
                }
            }
        }
        if coset != 0 {
            return Err(Error::ParameterRange(
                "word does not lie in the index-p subgroup (nonzero character value)".into(),
            ));
        }
        Ok(out)
    }
}

/// Outcome of the rewriting: the T-group data of Gamma / Delta^p [Delta,
/// Delta] together with everything needed to push further words through the
/// same quotient.
#[derive(Debug, Clone)]
pub struct TQuotientResult {
    data: TGroupData,
    qmap: QuotientMap,
    rewriter: Rewriter,
    log: Vec<String>,
}

impl TQuotientResult {
    pub fn data(&self) -> &TGroupData {
        &self.data
    }

    pub fn invariants(&self) -> TInvariants {
        invariants_from_data(&self.data)
    }

    /// Index of the designated transversal generator after rescaling.
    pub fn designated_generator(&self) -> usize {
        self.rewriter.designated
    }

    /// The Schreier generator table and elimination notes.
    pub fn log(&self) -> &[String] {
        &self.log
    }

    /// Rewrite a subgroup word into adapted module coordinates.
    pub fn rewrite(&self, w: &Word) -> Result<FpVector> {
        Ok(self.qmap.apply(&self.rewriter.rewrite(w)?))
    }
}

/// The T-group of the index-p subgroup named by chi: the module
/// Delta / Delta^p [Delta, Delta] with its sigma-action in adapted
/// coordinates, plus the class of s^p.
pub fn schreier_tgroup(pres: &ProPPresentation, chi: &Character) -> Result<TQuotientResult> {
    chi.validate_on(pres)?;
    let p = pres.p();
    let chi = chi.rescaled();
    let rewriter = Rewriter::new(p, &chi);

    let mut log = Vec::new();
    let names = pres.generator_names();
    let s = rewriter.designated;
    log.push(format!("transversal: powers of `{}` (character rescaled)", names[s]));
    for (i, name) in names.iter().enumerate() {
        let c = chi.value(i);
        match rewriter.columns[i] {
            Some(col) if c == 0 => log.push(format!(
                "gamma(s^i, {name}) = sigma^i Y_{col} for 0 <= i < {p}"
            )),
            Some(col) => log.push(format!(
                "gamma(s^i, {name}) = sigma^i Y_{col}, plus z once i + {c} >= {p}"
            )),
            None => log.push(format!(
                "gamma(s^i, {name}) trivial for i < {}; gamma(s^{}, {name}) = z",
                p.get() - 1,
                p.get() - 1
            )),
        }
    }

    let mut relations: Vec<Vec<RPoly>> = Vec::with_capacity(pres.relators().len() + 1);
    // conjugation by s fixes s^p, so t z = 0
    let mut z_relation = vec![RPoly::zero(p); rewriter.rank];
    z_relation[rewriter.z_column] = RPoly::t_power(p, 1);
    relations.push(z_relation);
    for (i, r) in pres.relators().iter().enumerate() {
        let rel = rewriter.rewrite(r)?;
        log.push(format!("relator {i} rewritten"));
        relations.push(rel);
    }

    let mp = ModulePresentation::new(p, rewriter.rank, relations);
    let (_type, qmap) = crate::fpmod::present_normal_form(&mp);
    let action = qmap.action();
    let sigma_p = qmap.apply_generator(rewriter.z_column);
    assert!(
        fixed_subspace(&action).contains(&sigma_p),
        "rewriting defect: class of s^p is not fixed by the action"
    );
    let data = TGroupData::new(p, action, sigma_p)?;
    Ok(TQuotientResult { data, qmap, rewriter, log })
}

/// Whether the character lifts to Z/p^2 on the presented group: a linear
/// system over F_p in the correction vector y, one equation per relator.
pub fn zp2_lift_exists(pres: &ProPPresentation, chi: &Character) -> Result<bool> {
    chi.validate_on(pres)?;
    let p = pres.p();
    let pv = p.get() as i128;
    let p2 = pv * pv;
    let n = pres.num_generators();
    let sums = pres.relator_exponent_sums();
    // rows of [E | -c] over F_p, where E is the mod-p exponent matrix and
    // c_r = (E_r . chi)/p mod p for the chosen lift of chi
    let mut rows: Vec<FpVector> = Vec::with_capacity(sums.len());
    for e in &sums {
        let mut value: i128 = 0;
        for (i, &ei) in e.iter().enumerate() {
            value = (value + (ei as i128) * chi.value(i) as i128) % p2;
        }
        let value = value.rem_euclid(p2);
        assert!(value % pv == 0, "character was validated on relators");
        let c = (value / pv) % pv;
        let mut row: FpVector = e.iter().map(|&ei| p.reduce(ei)).collect();
        row.push(p.reduce(-(c as i64)));
        rows.push(row);
    }
    if rows.is_empty() {
        return Ok(true);
    }
    // solvable iff rank(E) = rank([E | -c])
    let full = crate::fpmod::rref(p, rows.clone()).0.len();
    let coeff_only: Vec<FpVector> =
        rows.iter().map(|r| r[..n].to_vec()).collect();
    let coeff = crate::fpmod::rref(p, coeff_only).0.len();
    Ok(full == coeff)
}
