//! Quantum torus algebras of seeds.
//!
//! Monomials are kept in normal form: `c · X_0^{a_0} X_1^{a_1} ⋯` in vertex
//! order, with `X_i X_j = q^{2ε_ji} X_j X_i`.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Rational64;

use crate::coeff::QCoeff;
use crate::Error;

/// A seed: vertices `0..len`, a frozen subset and a skew-symmetric exchange
/// matrix with half-integer entries, stored doubled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    frozen: Vec<bool>,
    eps2: Vec<Vec<i64>>,
    labels: Vec<String>,
}

impl Seed {
    pub fn new(n: usize) -> Self {
        Seed { frozen: vec![false; n], eps2: vec![vec![0; n]; n], labels: vec![String::new(); n] }
    }

    pub fn len(&self) -> usize {
        self.frozen.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frozen.is_empty()
    }

    pub fn is_frozen(&self, v: usize) -> bool {
        self.frozen[v]
    }

    pub fn set_frozen(&mut self, v: usize, f: bool) {
        self.frozen[v] = f;
    }

    pub fn frozen(&self) -> &[bool] {
        &self.frozen
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn set_label(&mut self, v: usize, l: String) {
        self.labels[v] = l;
    }

    /// `2ε_ij`.
    #[inline]
    pub fn eps2(&self, i: usize, j: usize) -> i64 {
        self.eps2[i][j]
    }

    pub fn eps(&self, i: usize, j: usize) -> Rational64 {
        Rational64::new(self.eps2[i][j], 2)
    }

    /// Sets `ε_ij = w2/2` and `ε_ji = -w2/2`.
    pub fn set_eps2(&mut self, i: usize, j: usize, w2: i64) {
        self.eps2[i][j] = w2;
        self.eps2[j][i] = -w2;
    }

    pub fn add_eps2(&mut self, i: usize, j: usize, w2: i64) {
        let v = self.eps2[i][j] + w2;
        self.set_eps2(i, j, v);
    }

    /// Checks skew-symmetry and the half-integer rule.
    pub fn validate(&self) -> Result<(), Error> {
        let n = self.len();
        for i in 0..n {
            for j in 0..n {
                if self.eps2[i][j] != -self.eps2[j][i] {
                    return Err(Error::BadShape(alloc::format!("eps not skew at ({},{})", i, j)));
                }
                if self.eps2[i][j] % 2 != 0 && !(self.frozen[i] && self.frozen[j]) {
                    return Err(Error::BadShape(alloc::format!("half-integer eps on a non-frozen pair ({},{})", i, j)));
                }
            }
        }
        Ok(())
    }

    /// Arrows `(i, j, 2ε_ij)` with `ε_ij > 0`, sorted.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if self.eps2[i][j] > 0 {
                    out.push((i, j, self.eps2[i][j]));
                }
            }
        }
        out
    }

    /// Disjoint union: vertices of `other` are shifted by `self.len()`.
    pub fn disjoint_union(&self, other: &Seed) -> Seed {
        let a = self.len();
        let mut s = Seed::new(a + other.len());
        for i in 0..a {
            s.frozen[i] = self.frozen[i];
            s.labels[i] = self.labels[i].clone();
            for j in 0..a {
                s.eps2[i][j] = self.eps2[i][j];
            }
        }
        for i in 0..other.len() {
            s.frozen[a + i] = other.frozen[i];
            s.labels[a + i] = other.labels[i].clone();
            for j in 0..other.len() {
                s.eps2[a + i][a + j] = other.eps2[i][j];
            }
        }
        s
    }

    /// Relabels vertices: vertex `v` of `self` becomes `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Seed {
        let n = self.len();
        let mut s = Seed::new(n);
        for i in 0..n {
            s.frozen[perm[i]] = self.frozen[i];
            s.labels[perm[i]] = self.labels[i].clone();
            for j in 0..n {
                s.eps2[perm[i]][perm[j]] = self.eps2[i][j];
            }
        }
        s
    }

    /// Same exchange matrix and frozen set (labels ignored).
    pub fn same_quiver(&self, other: &Seed) -> bool {
        self.frozen == other.frozen && self.eps2 == other.eps2
    }

    /// `2c` where `X^a X^b = q^{2c} X^b X^a`, i.e. `c = Σ a_i b_j ε_ji`.
    pub fn comm2(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate() {
                if bj != 0 {
                    acc += ai * bj * self.eps2[j][i];
                }
            }
        }
        acc
    }

    /// `2s` where `X^a · X^b = q^{2s} X^{a+b}` in normal form.
    pub fn order2(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut acc = 0;
        for (i, &ai) in a.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(i) {
                if bj != 0 {
                    acc += ai * bj * self.eps2[j][i];
                }
            }
        }
        acc
    }

    fn check(&self, x: &TorusElement) -> Result<(), Error> {
        if x.nvars != self.len() {
            Err(Error::SeedMismatch)
        } else {
            Ok(())
        }
    }

    pub fn mono_mul(&self, a: &Monomial, b: &Monomial) -> Monomial {
        let s2 = self.order2(&a.exp, &b.exp);
        let exp = a.exp.iter().zip(&b.exp).map(|(x, y)| x + y).collect();
        Monomial { exp, coef: a.coef.mul(&b.coef).shift(s2) }
    }

    /// Inverse of a monomial with invertible coefficient.
    pub fn mono_inv(&self, a: &Monomial) -> Result<Monomial, Error> {
        let neg: Vec<i64> = a.exp.iter().map(|x| -x).collect();
        // X^a X^{-a} = q^{2s} in normal form, so (X^a)^{-1} = q^{-2s} X^{-a}
        let s2 = self.order2(&a.exp, &neg);
        Ok(Monomial { exp: neg, coef: a.coef.inv()?.shift(-s2) })
    }

    pub fn mono_pow(&self, a: &Monomial, k: i64) -> Result<Monomial, Error> {
        let base = if k < 0 { self.mono_inv(a)? } else { a.clone() };
        let mut out = Monomial::one(self.len());
        for _ in 0..k.unsigned_abs() {
            out = self.mono_mul(&out, &base);
        }
        Ok(out)
    }

    /// Normal-form product of generators in the given order.
    pub fn word(&self, vs: &[usize]) -> Monomial {
        let mut out = Monomial::one(self.len());
        for &v in vs {
            out = self.mono_mul(&out, &Monomial::var(self.len(), v));
        }
        out
    }

    pub fn mul(&self, x: &TorusElement, y: &TorusElement) -> TorusElement {
        debug_assert!(x.nvars == self.len() && y.nvars == self.len());
        let mut out = TorusElement::zero(self.len());
        for (ea, ca) in &x.terms {
            for (eb, cb) in &y.terms {
                let s2 = self.order2(ea, eb);
                let e: Vec<i64> = ea.iter().zip(eb).map(|(p, r)| p + r).collect();
                out.add_term(e, ca.mul(cb).shift(s2));
            }
        }
        out
    }

    pub fn mul_mono_left(&self, m: &Monomial, x: &TorusElement) -> TorusElement {
        self.mul(&TorusElement::from_monomial(m.clone()), x)
    }

    pub fn mul_mono_right(&self, x: &TorusElement, m: &Monomial) -> TorusElement {
        self.mul(x, &TorusElement::from_monomial(m.clone()))
    }

    pub fn pow(&self, x: &TorusElement, k: u32) -> TorusElement {
        let mut out = TorusElement::one(self.len());
        for _ in 0..k {
            out = self.mul(&out, x);
        }
        out
    }

    /// `xy - c·yx`.
    pub fn q_commutator(&self, x: &TorusElement, y: &TorusElement, c: &QCoeff) -> TorusElement {
        self.mul(x, y).sub(&self.mul(y, x).scale(c))
    }

    /// If every term of `x` satisfies `m·t = q^{2c} t·m` with the same `c`,
    /// returns `2c`.
    pub fn uniform_comm2(&self, m: &[i64], x: &TorusElement) -> Option<i64> {
        let mut out = None;
        for e in x.terms.keys() {
            let c = self.comm2(m, e);
            match out {
                None => out = Some(c),
                Some(v) if v == c => {}
                _ => return None,
            }
        }
        out
    }
}

/// `m1·m2 = q^{2c}·m2·m1`; returns `c`.
pub fn torus_commutator_qpower(s: &Seed, m1: &Monomial, m2: &Monomial) -> Rational64 {
    Rational64::new(s.comm2(&m1.exp, &m2.exp), 2)
}

/// Normal-form product, failing on elements from a different torus.
pub fn torus_mul(s: &Seed, x: &TorusElement, y: &TorusElement) -> Result<TorusElement, Error> {
    s.check(x)?;
    s.check(y)?;
    Ok(s.mul(x, y))
}

/// `coef · X^exp` in normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial {
    pub exp: Vec<i64>,
    pub coef: QCoeff,
}

impl Monomial {
    pub fn new(exp: Vec<i64>, coef: QCoeff) -> Self {
        Monomial { exp, coef }
    }

    pub fn one(n: usize) -> Self {
        Monomial { exp: vec![0; n], coef: QCoeff::one() }
    }

    pub fn var(n: usize, v: usize) -> Self {
        let mut exp = vec![0; n];
        exp[v] = 1;
        Monomial { exp, coef: QCoeff::one() }
    }

    pub fn with_coef(&self, coef: QCoeff) -> Self {
        Monomial { exp: self.exp.clone(), coef }
    }

    pub fn scale(&self, c: &QCoeff) -> Self {
        Monomial { exp: self.exp.clone(), coef: self.coef.mul(c) }
    }

    pub fn degree(&self) -> i64 {
        self.exp.iter().sum()
    }
}

/// A finite sum of normal-form monomials with distinct exponents.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorusElement {
    nvars: usize,
    terms: BTreeMap<Vec<i64>, QCoeff>,
}

impl TorusElement {
    pub fn zero(n: usize) -> Self {
        TorusElement { nvars: n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        TorusElement::constant(n, QCoeff::one())
    }

    pub fn constant(n: usize, c: QCoeff) -> Self {
        let mut t = TorusElement::zero(n);
        t.add_term(vec![0; n], c);
        t
    }

    pub fn var(n: usize, v: usize) -> Self {
        TorusElement::from_monomial(Monomial::var(n, v))
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut t = TorusElement::zero(m.exp.len());
        t.add_term(m.exp, m.coef);
        t
    }

    pub fn from_monomials<I: IntoIterator<Item = Monomial>>(n: usize, it: I) -> Self {
        let mut t = TorusElement::zero(n);
        for m in it {
            t.add_term(m.exp, m.coef);
        }
        t
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, QCoeff> {
        &self.terms
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        self.terms.iter().map(|(e, c)| Monomial::new(e.clone(), c.clone()))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coef(&self, exp: &[i64]) -> QCoeff {
        self.terms.get(exp).cloned().unwrap_or_else(QCoeff::zero)
    }

    /// The single monomial, if there is exactly one term.
    pub fn as_monomial(&self) -> Option<Monomial> {
        if self.terms.len() == 1 {
            self.monomials().next()
        } else {
            None
        }
    }

    pub fn add_term(&mut self, exp: Vec<i64>, c: QCoeff) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&exp) {
            Some(v) => {
                let s = v.add(&c);
                if s.is_zero() {
                    self.terms.remove(&exp);
                } else {
                    *v = s;
                }
            }
            None => {
                self.terms.insert(exp, c);
            }
        }
    }

    pub fn add(&self, o: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &TorusElement) -> TorusElement {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(e.clone(), c.neg());
        }
        out
    }

    pub fn neg(&self) -> TorusElement {
        self.scale(&QCoeff::from_int(-1))
    }

    pub fn scale(&self, c: &QCoeff) -> TorusElement {
        let mut out = TorusElement::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.mul(c));
        }
        out
    }

    pub fn divexact(&self, c: &QCoeff) -> Result<TorusElement, Error> {
        let mut out = TorusElement::zero(self.nvars);
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v.divexact(c)?);
        }
        Ok(out)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter<F: Fn(&[i64], &QCoeff) -> bool>(&self, keep: F) -> TorusElement {
        TorusElement {
            nvars: self.nvars,
            terms: self.terms.iter().filter(|(e, c)| keep(e, c)).map(|(e, c)| (e.clone(), c.clone())).collect(),
        }
    }

    /// Reindexes variables: old variable `v` becomes `map[v]` in a torus of
    /// `n` variables.
    pub fn reindex(&self, n: usize, map: &[usize]) -> TorusElement {
        let mut out = TorusElement::zero(n);
        for (e, c) in &self.terms {
            let mut ne = vec![0; n];
            for (v, x) in e.iter().enumerate() {
                ne[map[v]] += x;
            }
            out.add_term(ne, c.clone());
        }
        out
    }
}

pub fn reindex_monomial(m: &Monomial, n: usize, map: &[usize]) -> Monomial {
    let mut ne = vec![0; n];
    for (v, x) in m.exp.iter().enumerate() {
        ne[map[v]] += x;
    }
    Monomial::new(ne, m.coef.clone())
}

/// `(1 + q^shift · X^mono)^{-1}` where `X^mono` has coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QBinomialInverse {
    pub shift: i64,
    pub mono: Vec<i64>,
}

impl QBinomialInverse {
    pub fn new(shift: i64, mono: Vec<i64>) -> Result<Self, Error> {
        if mono.iter().all(|&x| x == 0) {
            return Err(Error::BadShape("binomial with trivial monomial".into()));
        }
        Ok(QBinomialInverse { shift, mono })
    }

    /// The polynomial `1 + q^shift X^mono` being inverted.
    pub fn binomial(&self) -> TorusElement {
        let n = self.mono.len();
        let mut t = TorusElement::one(n);
        t.add_term(self.mono.clone(), QCoeff::q_pow(self.shift));
        t
    }

    /// The binomial `b'` with `b^{-1}·X^e = X^e·b'^{-1}`.
    pub fn transported(&self, s: &Seed, e: &[i64]) -> QBinomialInverse {
        QBinomialInverse { shift: self.shift + s.comm2(&self.mono, e), mono: self.mono.clone() }
    }
}

/// `num · dens[0]^{-1} · dens[1]^{-1} ⋯`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FracElement {
    pub num: TorusElement,
    pub dens: Vec<QBinomialInverse>,
}

impl FracElement {
    pub fn from_torus(num: TorusElement) -> Self {
        FracElement { num, dens: Vec::new() }
    }

    pub fn from_monomial(m: Monomial) -> Self {
        FracElement::from_torus(TorusElement::from_monomial(m))
    }

    pub fn one(n: usize) -> Self {
        FracElement::from_torus(TorusElement::one(n))
    }

    pub fn inverse_binomial(b: QBinomialInverse) -> Self {
        let n = b.mono.len();
        FracElement { num: TorusElement::one(n), dens: vec![b] }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial value when there are no denominators.
    pub fn as_torus(&self) -> Option<&TorusElement> {
        if self.dens.is_empty() {
            Some(&self.num)
        } else {
            None
        }
    }
}

/// `b^{-1} · y = y' · (list)^{-1}` with all listed binomials in the direction
/// of `b`.
fn push_through(s: &Seed, b: &QBinomialInverse, y: &TorusElement) -> (TorusElement, Vec<QBinomialInverse>) {
    let mut groups: BTreeMap<i64, TorusElement> = BTreeMap::new();
    for (e, c) in y.terms() {
        let sh = b.shift + s.comm2(&b.mono, e);
        groups.entry(sh).or_insert_with(|| TorusElement::zero(y.nvars())).add_term(e.clone(), c.clone());
    }
    if groups.len() <= 1 {
        let sh = groups.keys().next().copied().unwrap_or(b.shift);
        return (y.clone(), vec![QBinomialInverse { shift: sh, mono: b.mono.clone() }]);
    }
    let shifts: Vec<i64> = groups.keys().copied().collect();
    let mut out = TorusElement::zero(y.nvars());
    for (sh, part) in &groups {
        let mut acc = part.clone();
        for other in &shifts {
            if other != sh {
                let bin = QBinomialInverse { shift: *other, mono: b.mono.clone() }.binomial();
                acc = s.mul(&acc, &bin);
            }
        }
        out = out.add(&acc);
    }
    let list = shifts.into_iter().map(|sh| QBinomialInverse { shift: sh, mono: b.mono.clone() }).collect();
    (out, list)
}

/// Solves `p = r · (1 + q^shift X^mono)` for `r`, if possible.
fn right_divide(s: &Seed, p: &TorusElement, b: &QBinomialInverse) -> Option<TorusElement> {
    let piv = b.mono.iter().position(|&x| x != 0)?;
    let sgn = b.mono[piv].signum();
    let key = |e: &[i64]| e[piv] * sgn;
    let top = p.terms().keys().map(|e| key(e)).max()?;
    let mut rem = p.clone();
    let mut r = TorusElement::zero(p.nvars());
    while let Some((e, c)) = rem.terms().iter().min_by_key(|(e, _)| key(e)).map(|(e, c)| (e.clone(), c.clone())) {
        if key(&e) + b.mono[piv] * sgn > top {
            return None;
        }
        r.add_term(e.clone(), c.clone());
        let m = Monomial::new(e, c);
        let prod = s.mul_mono_left(&m, &b.binomial());
        rem = rem.sub(&prod);
    }
    Some(r)
}

fn simplify(s: &Seed, mut x: FracElement) -> FracElement {
    if x.num.is_zero() {
        x.dens.clear();
        return x;
    }
    while let Some(b) = x.dens.last() {
        match right_divide(s, &x.num, b) {
            Some(r) => {
                x.num = r;
                x.dens.pop();
            }
            None => break,
        }
    }
    x
}

/// Product of two fractions with all inverses pushed to the right.
pub fn frac_mul(s: &Seed, x: &FracElement, y: &FracElement) -> FracElement {
    let mut cur = y.num.clone();
    let mut lists: Vec<Vec<QBinomialInverse>> = Vec::new();
    for b in x.dens.iter().rev() {
        let (ny, l) = push_through(s, b, &cur);
        cur = ny;
        lists.push(l);
    }
    let mut dens = Vec::new();
    for l in lists.into_iter().rev() {
        dens.extend(l);
    }
    dens.extend(y.dens.iter().cloned());
    simplify(s, FracElement { num: s.mul(&x.num, &cur), dens })
}

/// Product of the binomials, in the order that cancels the inverse list:
/// `prod · d_0^{-1} ⋯ d_k^{-1} = 1`.
fn list_product(s: &Seed, n: usize, dens: &[QBinomialInverse]) -> TorusElement {
    let mut out = TorusElement::one(n);
    for d in dens.iter().rev() {
        out = s.mul(&out, &d.binomial());
    }
    out
}

pub fn frac_add(s: &Seed, x: &FracElement, y: &FracElement) -> FracElement {
    if x.dens == y.dens {
        return simplify(s, FracElement { num: x.num.add(&y.num), dens: x.dens.clone() });
    }
    let n = x.num.nvars();
    // x = P·D^{-1} = P·(D^{-1}·Eprod)·E^{-1}
    let eprod = list_product(s, n, &y.dens);
    let moved = frac_mul(s, &FracElement { num: TorusElement::one(n), dens: x.dens.clone() }, &FracElement::from_torus(eprod));
    let lprod = list_product(s, n, &moved.dens);
    let num = s.mul(&x.num, &moved.num).add(&s.mul(&y.num, &lprod));
    let mut dens = moved.dens;
    dens.extend(y.dens.iter().cloned());
    simplify(s, FracElement { num, dens })
}

pub fn frac_neg(x: &FracElement) -> FracElement {
    FracElement { num: x.num.neg(), dens: x.dens.clone() }
}

pub fn frac_sub(s: &Seed, x: &FracElement, y: &FracElement) -> FracElement {
    frac_add(s, x, &frac_neg(y))
}

/// Equality in the localized algebra.
pub fn frac_eq(s: &Seed, x: &FracElement, y: &FracElement) -> bool {
    frac_sub(s, x, y).num.is_zero()
}

/// Inverse of a fraction whose numerator is a single monomial.
pub fn frac_inv_monomial(s: &Seed, x: &FracElement) -> Result<FracElement, Error> {
    let m = x.num.as_monomial().ok_or(Error::Inexact)?;
    let mi = s.mono_inv(&m)?;
    let n = x.num.nvars();
    // (m·d_0^{-1}⋯d_k^{-1})^{-1} = d_k ⋯ d_0 · m^{-1}
    let mut p = TorusElement::one(n);
    for d in x.dens.iter().rev() {
        p = s.mul(&p, &d.binomial());
    }
    Ok(FracElement::from_torus(s.mul_mono_right(&p, &mi)))
}
