//! Arithmetic in W_d = V/V^(3), the quotient of the free pro-p-group V on d
//! generators by the third term of its p-central series, for odd p.
//!
//! Every element has a normal form g_1^{a_1} ... g_d^{a_d} c with a_i mod p^2
//! and c in the central subgroup V^(2)/V^(3), which is elementary abelian with
//! basis the p-th powers g_i^p and the commutators [g_i, g_j] for i < j. The
//! group law follows from the class-2 identity y^n x^m = x^m y^n [y, x]^{nm}
//! with [x, y] = x y x^-1 y^-1; for odd p the binomial coefficient C(p, 2)
//! vanishes mod p, so p-th powers collect without cross terms.
//!
//! p = 2 is excluded: the squaring law couples the two coordinate blocks
//! differently and no detector in scope needs it.

use crate::error::{Error, Result};
use crate::fpmod::{FpMatrix, FpVector, NilpotentAction, Prime};

/// A letter is a generator index with a nonzero integer exponent.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Letter {
    pub index: usize,
    pub exponent: i64,
}

/// A free-group word: a sequence of letters. Words are kept as written;
/// normalization merges adjacent letters with equal index and drops zero
/// exponents.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word::default()
    }

    pub fn from_letters(letters: Vec<(usize, i64)>) -> Self {
        Word {
            letters: letters
                .into_iter()
                .map(|(index, exponent)| Letter { index, exponent })
                .collect(),
        }
    }

    pub fn generator(index: usize) -> Self {
        Word { letters: vec![Letter { index, exponent: 1 }] }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.index).max()
    }

    pub fn push(&mut self, index: usize, exponent: i64) {
        if exponent != 0 {
            self.letters.push(Letter { index, exponent });
        }
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self
                .letters
                .iter()
                .rev()
                .map(|l| Letter { index: l.index, exponent: -l.exponent })
                .collect(),
        }
    }

    /// [u, v] = u v u^-1 v^-1.
    pub fn commutator(u: &Word, v: &Word) -> Word {
        u.concat(v).concat(&u.inverse()).concat(&v.inverse())
    }

    /// Iterated commutator: 0[u,v] = v, n[u,v] = [u, (n-1)[u,v]].
    pub fn iterated_commutator(n: usize, u: &Word, v: &Word) -> Word {
        let mut w = v.clone();
        for _ in 0..n {
            w = Word::commutator(u, &w);
        }
        w
    }

    pub fn repeat(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Merge adjacent letters with the same index; drop vanishing exponents.
    pub fn normalize(&self) -> Word {
        let mut letters: Vec<Letter> = Vec::new();
        for &l in &self.letters {
            if l.exponent == 0 {
                continue;
            }
            match letters.last_mut() {
                Some(last) if last.index == l.index => {
                    last.exponent += l.exponent;
                    if last.exponent == 0 {
                        letters.pop();
                    }
                }
                _ => letters.push(l),
            }
        }
        Word { letters }
    }

    /// Exponent sum per generator over the integers.
    pub fn exponent_sums(&self, num_generators: usize) -> Vec<i64> {
        let mut sums = vec![0i64; num_generators];
        for l in &self.letters {
            sums[l.index] += l.exponent;
        }
        sums
    }
}

/// Orientation of the wedge coordinates: the b-coordinate at (i, j), i < j,
/// changes by +1 (`Standard`) or -1 (`Flipped`) under [g_i, g_j]. Downstream
/// Jordan types are invariant under the choice; the flipped convention exists
/// so that invariance can be asserted rather than assumed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WedgeSign {
    #[default]
    Standard,
    Flipped,
}

impl WedgeSign {
    fn as_exponent(self) -> i64 {
        match self {
            WedgeSign::Standard => 1,
            WedgeSign::Flipped => -1,
        }
    }
}

/// Descriptor of the ambient group W_d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClassTwoGroup {
    p: Prime,
    d: usize,
    sign: WedgeSign,
}

/// Normal-form element of W_d: a-part mod p^2 indexed by generators, b-part
/// mod p indexed by wedge pairs i < j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClassTwoElement {
    a: Vec<u64>,
    b: Vec<u64>,
}

impl ClassTwoElement {
    pub fn a(&self) -> &[u64] {
        &self.a
    }

    pub fn b(&self) -> &[u64] {
        &self.b
    }
}

impl ClassTwoGroup {
    pub fn new(p: Prime, d: usize) -> Result<Self> {
        Self::with_sign(p, d, WedgeSign::Standard)
    }

    pub fn with_sign(p: Prime, d: usize, sign: WedgeSign) -> Result<Self> {
        p.require_odd()?;
        Ok(ClassTwoGroup { p, d, sign })
    }

    pub fn p(&self) -> Prime {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn sign(&self) -> WedgeSign {
        self.sign
    }

    pub fn wedge_count(&self) -> usize {
        self.d * self.d.saturating_sub(1) / 2
    }

    /// Dimension d + d(d-1)/2 of the central subgroup V^(2)/V^(3).
    pub fn central_dim(&self) -> usize {
        self.d + self.wedge_count()
    }

    /// |W_d| = p^(2d + d(d-1)/2).
    pub fn order(&self) -> u128 {
        let e = 2 * self.d + self.wedge_count();
        (self.p.get() as u128).pow(e as u32)
    }

    pub fn wedge_index(&self, i: usize, j: usize) -> usize {
        assert!(i < j && j < self.d, "wedge index out of range");
        i * self.d - i * (i + 1) / 2 + (j - i - 1)
    }

    pub fn identity(&self) -> ClassTwoElement {
        ClassTwoElement { a: vec![0; self.d], b: vec![0; self.wedge_count()] }
    }

    pub fn generator(&self, i: usize) -> ClassTwoElement {
        assert!(i < self.d, "generator index out of range");
        let mut e = self.identity();
        e.a[i] = 1;
        e
    }

    fn check_member(&self, x: &ClassTwoElement) -> Result<()> {
        if x.a.len() != self.d || x.b.len() != self.wedge_count() {
            return Err(Error::AmbientMismatch(format!(
                "element has {} generator and {} wedge coordinates, ambient needs {} and {}",
                x.a.len(),
                x.b.len(),
                self.d,
                self.wedge_count()
            )));
        }
        Ok(())
    }

    /// Group product in normal form: a-parts add mod p^2, b-parts add mod p
    /// plus the bilinear reordering correction determined by the a-parts.
    pub fn multiply(
        &self,
        x: &ClassTwoElement,
        y: &ClassTwoElement,
    ) -> Result<ClassTwoElement> {
        self.check_member(x)?;
        self.check_member(y)?;
        let p = self.p.get();
        let p2 = p * p;
        let eps = self.p.reduce(self.sign.as_exponent());
        let a: Vec<u64> = x.a.iter().zip(&y.a).map(|(&u, &v)| (u + v) % p2).collect();
        let mut b: Vec<u64> = x.b.iter().zip(&y.b).map(|(&u, &v)| (u + v) % p).collect();
        // moving y's g_i block left past x's g_j block (j > i) inserts
        // [g_j, g_i]^(x_j y_i) = [g_i, g_j]^(-x_j y_i)
        for i in 0..self.d {
            let yi = y.a[i] % p;
            if yi == 0 {
                continue;
            }
            for j in (i + 1)..self.d {
                let xj = x.a[j] % p;
                if xj == 0 {
                    continue;
                }
                let k = self.wedge_index(i, j);
                b[k] = self.p.sub(b[k], eps * xj % p * yi % p);
            }
        }
        Ok(ClassTwoElement { a, b })
    }

    pub fn inverse(&self, x: &ClassTwoElement) -> Result<ClassTwoElement> {
        self.check_member(x)?;
        let p = self.p.get();
        let p2 = p * p;
        let eps = self.p.reduce(self.sign.as_exponent());
        let a: Vec<u64> = x.a.iter().map(|&u| (p2 - u % p2) % p2).collect();
        let mut b: Vec<u64> = x.b.iter().map(|&u| (p - u % p) % p).collect();
        for i in 0..self.d {
            let ai = x.a[i] % p;
            if ai == 0 {
                continue;
            }
            for j in (i + 1)..self.d {
                let aj = x.a[j] % p;
                if aj == 0 {
                    continue;
                }
                let k = self.wedge_index(i, j);
                b[k] = self.p.sub(b[k], eps * ai % p * aj % p);
            }
        }
        Ok(ClassTwoElement { a, b })
    }

    /// n-th power by square and multiply; the exponent is reduced mod p^2
    /// first since every element satisfies x^(p^2) = 1.
    pub fn power(&self, x: &ClassTwoElement, n: i64) -> Result<ClassTwoElement> {
        self.check_member(x)?;
        let p2 = (self.p.get() * self.p.get()) as i64;
        let mut e = n.rem_euclid(p2) as u64;
        let mut base = x.clone();
        let mut acc = self.identity();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.multiply(&acc, &base)?;
            }
            base = self.multiply(&base, &base)?;
            e >>= 1;
        }
        Ok(acc)
    }

    pub fn commutator(
        &self,
        x: &ClassTwoElement,
        y: &ClassTwoElement,
    ) -> Result<ClassTwoElement> {
        let xy = self.multiply(x, y)?;
        let xinv = self.inverse(x)?;
        let yinv = self.inverse(y)?;
        self.multiply(&self.multiply(&xy, &xinv)?, &yinv)
    }

    /// Left-to-right product of generator images of a word.
    pub fn evaluate(&self, w: &Word) -> Result<ClassTwoElement> {
        let mut acc = self.identity();
        for l in w.letters() {
            if l.index >= self.d {
                return Err(Error::ParameterRange(format!(
                    "word references generator {} but the ambient has rank {}",
                    l.index, self.d
                )));
            }
            let g = self.generator(l.index);
            acc = self.multiply(&acc, &self.power(&g, l.exponent)?)?;
        }
        Ok(acc)
    }

    pub fn is_central(&self, x: &ClassTwoElement) -> Result<bool> {
        self.check_member(x)?;
        let p = self.p.get();
        Ok(x.a.iter().all(|&v| v % p == 0))
    }

    /// Coordinates of a central element in the (d + d(d-1)/2)-dimensional
    /// F_p-space spanned by p-th powers and wedges: (a/p mod p) followed by b.
    ///
    /// A non-divisible a-coordinate means the element lies outside the
    /// Frattini subgroup, which for a relator signals a non-minimal
    /// presentation.
    pub fn central_coords(&self, x: &ClassTwoElement) -> Result<FpVector> {
        self.check_member(x)?;
        let p = self.p.get();
        let mut out = Vec::with_capacity(self.central_dim());
        for (i, &v) in x.a.iter().enumerate() {
            if v % p != 0 {
                return Err(Error::NotCentral { index: i, value: v });
            }
            out.push((v / p) % p);
        }
        out.extend_from_slice(&x.b);
        Ok(out)
    }

    /// The central element with the given coordinates.
    pub fn from_central_coords(&self, coords: &[u64]) -> ClassTwoElement {
        assert_eq!(coords.len(), self.central_dim(), "coordinate length mismatch");
        let p = self.p.get();
        let a: Vec<u64> = coords[..self.d].iter().map(|&c| (c % p) * p).collect();
        let b: Vec<u64> = coords[self.d..].iter().map(|&c| c % p).collect();
        ClassTwoElement { a, b }
    }
}

/// An assignment of an image word to each generator, inducing an
/// automorphism of W_d whose p-th power is the identity. Both properties are
/// validated on construction.
#[derive(Debug, Clone)]
pub struct GeneratorAction {
    images: Vec<Word>,
    evaluated: Vec<ClassTwoElement>,
}

impl GeneratorAction {
    pub fn new(group: &ClassTwoGroup, images: Vec<Word>) -> Result<Self> {
        if images.len() != group.rank() {
            return Err(Error::DimensionMismatch(format!(
                "{} image words for rank {}",
                images.len(),
                group.rank()
            )));
        }
        let evaluated: Vec<ClassTwoElement> =
            images.iter().map(|w| group.evaluate(w)).collect::<Result<_>>()?;

        // automorphism check: exponent matrix mod p invertible
        let p = group.p();
        let d = group.rank();
        let mut expmat = FpMatrix::zero(p, d, d);
        for (j, e) in evaluated.iter().enumerate() {
            for i in 0..d {
                expmat[(i, j)] = e.a()[i] % p.get();
            }
        }
        if expmat.try_inverse().is_none() {
            return Err(Error::ActionNotInvertible);
        }

        let action = GeneratorAction { images, evaluated };

        // order check: applying the endomorphism p times fixes every generator
        for i in 0..d {
            let mut x = group.generator(i);
            for _ in 0..p.get() {
                x = action.apply(group, &x)?;
            }
            if x != group.generator(i) {
                return Err(Error::ActionOrder);
            }
        }
        Ok(action)
    }

    /// The identity action.
    pub fn trivial(group: &ClassTwoGroup) -> Self {
        let images = (0..group.rank()).map(Word::generator).collect();
        GeneratorAction::new(group, images).expect("identity action is valid")
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn image(&self, i: usize) -> &Word {
        &self.images[i]
    }

    /// Apply the induced endomorphism to an element via its normal form.
    pub fn apply(&self, group: &ClassTwoGroup, x: &ClassTwoElement) -> Result<ClassTwoElement> {
        group.check_member(x)?;
        let eps = group.sign().as_exponent();
        let mut acc = group.identity();
        for (i, &ai) in x.a().iter().enumerate() {
            if ai != 0 {
                acc = group.multiply(&acc, &group.power(&self.evaluated[i], ai as i64)?)?;
            }
        }
        for i in 0..group.rank() {
            for j in (i + 1)..group.rank() {
                let bij = x.b()[group.wedge_index(i, j)];
                if bij != 0 {
                    // basis wedge element (i,j) is [g_i, g_j]^eps
                    let c = group.commutator(&self.evaluated[i], &self.evaluated[j])?;
                    let c = group.power(&c, eps)?;
                    acc = group.multiply(&acc, &group.power(&c, bij as i64)?)?;
                }
            }
        }
        Ok(acc)
    }

    /// Apply the action to a free-group word by substituting generator
    /// images letter by letter.
    pub fn substitute(&self, w: &Word) -> Word {
        let mut out = Word::empty();
        for l in w.letters() {
            out = out.concat(&self.images[l.index].repeat(l.exponent));
        }
        out
    }
}

/// The linear map sigma - 1 on the central coordinate space, where sigma is
/// the action induced on V^(2)/V^(3) by functorial extension of the
/// generator action.
pub fn induced_central_action(
    group: &ClassTwoGroup,
    act: &GeneratorAction,
) -> Result<NilpotentAction> {
    let p = group.p();
    let d = group.rank();
    let n = group.central_dim();
    let eps = group.sign().as_exponent();
    let mut m = FpMatrix::zero(p, n, n);
    let set_column = |col: usize, coords: &[u64], m: &mut FpMatrix| {
        for (row, &v) in coords.iter().enumerate() {
            m[(row, col)] = v;
        }
    };
    for i in 0..d {
        let image = group.power(&act.evaluated[i], p.get() as i64)?;
        let coords = group.central_coords(&image)?;
        set_column(i, &coords, &mut m);
    }
    for i in 0..d {
        for j in (i + 1)..d {
            let c = group.commutator(&act.evaluated[i], &act.evaluated[j])?;
            let c = group.power(&c, eps)?;
            let coords = group.central_coords(&c)?;
            set_column(d + group.wedge_index(i, j), &coords, &mut m);
        }
    }
    let a = m.sub(&FpMatrix::identity(p, n));
    NilpotentAction::new(p, a).map_err(|_| Error::ActionOrder)
}
