//! The `R`-matrix side: the Cartan part acting on `Z_n`, the three
//! factorizations of the quasi `R`-matrix as sequences of dilogarithm
//! arguments, and truncated series for dilogarithm identities.
//!
//! Arguments live in the torus of `D_n ⊔ D_n` (left copy first) and are
//! stored in the orientation of `R̄`, i.e. `ψ(w ⊗ m)` with the `E`-side on
//! the left.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_rational::Rational64;
use num_traits::{One, Zero};

use crate::coeff::QCoeff;
use crate::mutate::{run_schedule, MonomialMap};
use crate::qgroup::{tensor, tensor_embedding, Embedding, Generator, RootKind};
use crate::qtorus::{Monomial, Seed, TorusElement};
use crate::quiver::{binomial, build_zn, half_dehn_schedule, theta, ZnQuiver};
use crate::Error;

type Q = Rational64;

fn rat(v: &[i64]) -> Vec<Q> {
    v.iter().map(|&x| Q::from(x)).collect()
}

/// `ω(a, b) = Σ a_i b_j ε_ji`, so `X^a X^b = q^{2ω} X^b X^a`.
fn omega(s: &Seed, a: &[Q], b: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() && s.eps2(j, i) != 0 {
                acc += ai * bj * Q::new(s.eps2(j, i), 2);
            }
        }
    }
    acc
}

/// `X^e` in normal form equals `q^{w(e)}` times the Weyl-ordered monomial.
fn weyl_shift(s: &Seed, e: &[Q]) -> Q {
    let mut acc = Q::zero();
    for i in 0..e.len() {
        if e[i].is_zero() {
            continue;
        }
        for j in i + 1..e.len() {
            if !e[j].is_zero() && s.eps2(j, i) != 0 {
                acc += e[i] * e[j] * Q::new(s.eps2(j, i), 2);
            }
        }
    }
    acc
}

fn integral(v: &[Q]) -> Result<Vec<i64>, Error> {
    v.iter().map(|x| if x.is_integer() { Ok(x.to_integer()) } else { Err(Error::Inexact) }).collect()
}

/// `P`: swaps the two tensor factors of a monomial over `D ⊔ D`.
pub fn swap_factors(m: &Monomial) -> Monomial {
    let h = m.exp.len() / 2;
    let mut exp = m.exp[h..].to_vec();
    exp.extend_from_slice(&m.exp[..h]);
    Monomial::new(exp, m.coef.clone())
}

pub fn swap_element(x: &TorusElement) -> TorusElement {
    TorusElement::from_monomials(x.nvars(), x.monomials().map(|m| swap_factors(&m)))
}

/// `a ⊗ b` for monomials.
pub fn tensor_monomial(a: &Monomial, b: &Monomial) -> Monomial {
    let mut exp = a.exp.clone();
    exp.extend_from_slice(&b.exp);
    Monomial::new(exp, a.coef.mul(&b.coef))
}

/// Conjugation by the Cartan part `q^{Σ c_ij H_i ⊗ H'_j}` on monomials of
/// `D ⊔ D`, with `K_i = q^{H_i}` in the first factor, `K'_j = q^{H'_j}` in
/// the second and `c` the inverse Cartan matrix.
pub struct CartanAction {
    d: Seed,
    dd: Seed,
    c: Vec<Vec<Q>>,
    k: Vec<Vec<Q>>,
    kp: Vec<Vec<Q>>,
}

impl CartanAction {
    pub fn new(emb: &Embedding) -> Result<Self, Error> {
        let n = emb.n();
        let d = emb.seed().clone();
        let mut k = Vec::new();
        let mut kp = Vec::new();
        for i in 1..=n {
            for (g, out) in [(Generator::K(i), &mut k), (Generator::Kp(i), &mut kp)] {
                let m = emb.image(g)?.as_monomial().ok_or(Error::Inexact)?;
                // both are Weyl-ordered, so fractional powers make sense
                if weyl_shift(&d, &rat(&m.exp)) + Q::from(m.coef.as_monomial().ok_or(Error::Inexact)?.1) != Q::zero() {
                    return Err(Error::Inexact);
                }
                out.push(rat(&m.exp));
            }
        }
        let dd = d.disjoint_union(&d);
        Ok(CartanAction { d, dd, c: emb.cartan.c.clone(), k, kp })
    }

    pub fn seed(&self) -> &Seed {
        &self.dd
    }

    /// `(μ, ν')`: `K_i x K_i^{-1} = q^{μ_i} x`, `K'_j y K'^{-1}_j = q^{ν'_j} y`.
    pub fn weights(&self, e: &[i64]) -> (Vec<Q>, Vec<Q>) {
        let h = self.d.len();
        let (x, y) = (rat(&e[..h]), rat(&e[h..]));
        let two = Q::from(2);
        let mu = self.k.iter().map(|k| two * omega(&self.d, k, &x)).collect();
        let nu = self.kp.iter().map(|k| two * omega(&self.d, k, &y)).collect();
        (mu, nu)
    }

    pub fn apply(&self, m: &Monomial) -> Result<Monomial, Error> {
        let h = self.d.len();
        if m.exp.len() != 2 * h {
            return Err(Error::SeedMismatch);
        }
        let (mu, nu) = self.weights(&m.exp);
        let r = mu.len();
        let mut cmu = vec![Q::zero(); r];
        let mut cnu = vec![Q::zero(); r];
        let mut pair = Q::zero();
        for i in 0..r {
            for j in 0..r {
                cmu[j] += self.c[i][j] * mu[i];
                cnu[i] += self.c[i][j] * nu[j];
                pair += mu[i] * self.c[i][j] * nu[j];
            }
        }
        // (x⊗y) ↦ q^{(μ,ν')} (x ⊗ y)(K^{cν'} ⊗ K'^{cμ}), Weyl-ordered
        let mut shift = vec![Q::zero(); 2 * h];
        for i in 0..r {
            for v in 0..h {
                shift[v] += cnu[i] * self.k[i][v];
                shift[h + v] += cmu[i] * self.kp[i][v];
            }
        }
        let e = rat(&m.exp);
        let out: Vec<Q> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
        let qexp = weyl_shift(&self.dd, &e) + pair + omega(&self.dd, &e, &shift) - weyl_shift(&self.dd, &out);
        if !qexp.is_integer() {
            return Err(Error::Inexact);
        }
        Ok(Monomial::new(integral(&out)?, m.coef.shift(qexp.to_integer())))
    }
}

/// The `Z_n` monomial whose image under the tensor embedding is `m`.
pub fn pull_back(z: &ZnQuiver, t: &MonomialMap, m: &Monomial) -> Result<Monomial, Error> {
    let h = z.d.seed.len();
    if m.exp.len() != 2 * h {
        return Err(Error::SeedMismatch);
    }
    let mut f = vec![0i64; z.seed.len()];
    for x in 0..h {
        f[z.left[x]] = m.exp[x];
    }
    for x in 0..h {
        let v = z.right[x];
        if z.left.contains(&v) {
            if f[v] != m.exp[h + x] {
                return Err(Error::BadShape(String::from("monomial is not in the image of Z_n")));
            }
        } else {
            f[v] = m.exp[h + x];
        }
    }
    let base = t.apply(&Monomial::new(f.clone(), QCoeff::one()))?;
    if base.exp != m.exp {
        return Err(Error::BadShape(String::from("monomial is not in the image of Z_n")));
    }
    Ok(Monomial::new(f, m.coef.divexact(&base.coef)?))
}

/// `P ∘ Ad_K` as a monomial automorphism of the `Z_n` torus.
pub fn cartan_flip_map(z: &ZnQuiver) -> Result<MonomialMap, Error> {
    let emb = Embedding::new(z.n)?;
    let act = CartanAction::new(&emb)?;
    let t = tensor_embedding(z);
    let images = t.images.iter().map(|x| pull_back(z, &t, &swap_factors(&act.apply(x)?))).collect::<Result<Vec<_>, _>>()?;
    Ok(MonomialMap { source: z.seed.clone(), target: z.seed.clone(), images })
}

pub fn cartan_flip_rank(n: usize) -> Result<MonomialMap, Error> {
    cartan_flip_map(&build_zn(n)?)
}

/// Inverse of a monomial automorphism, if its exponent matrix is unimodular.
pub fn invert_monomial_map(f: &MonomialMap) -> Result<MonomialMap, Error> {
    let n = f.source.len();
    if f.target.len() != n {
        return Err(Error::SeedMismatch);
    }
    // columns of a are the image exponents; solve a·b = 1
    let mut a: Vec<Vec<Q>> = (0..n)
        .map(|r| {
            let mut row: Vec<Q> = (0..n).map(|c| Q::from(f.images[c].exp[r])).collect();
            row.extend((0..n).map(|c| if c == r { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).ok_or(Error::DivisionByZero)?;
        a.swap(col, p);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let k = a[r][col];
                for c in 0..2 * n {
                    let v = a[col][c];
                    a[r][c] -= k * v;
                }
            }
        }
    }
    let mut images = Vec::with_capacity(n);
    for w in 0..n {
        let exp = integral(&(0..n).map(|r| a[r][n + w]).collect::<Vec<_>>())?;
        let raw = f.apply(&Monomial::new(exp.clone(), QCoeff::one()))?;
        images.push(Monomial::new(exp, QCoeff::one().divexact(&raw.coef)?));
    }
    Ok(MonomialMap { source: f.target.clone(), target: f.source.clone(), images })
}

/// The `ΛV_i`-path as `Z_n` vertices, read along the top row of its
/// figure: `X_{2θ(i)+1}, …, X_2, X_1Y_1, Y_2, …, Y_{2i+1}` with
/// `X_k = Λ^L_{θ(i), k-1-θ(i)}` and `Y_k = V^R_{i, k-1-i}`.
pub fn lv_path(z: &ZnQuiver, i: usize) -> Result<Vec<usize>, Error> {
    if i == 0 || i > z.n {
        return Err(Error::BadIndex(format!("path {} outside 1..={}", i, z.n)));
    }
    let t = theta(z.n, i) as i64;
    let ii = i as i64;
    let mut p: Vec<usize> = (-t..=t).rev().map(|s| z.left[z.d.lam(t as usize, s)]).collect();
    if *p.last().unwrap() != z.right[z.d.v(i, -ii)] {
        return Err(Error::BadShape(String::from("ΛV path is not glued at its centre")));
    }
    p.extend((1 - ii..=ii).map(|r| z.right[z.d.v(i, r)]));
    Ok(p)
}

/// The bottom row of the `M_N` figure on the `ΛV_i`-path, position by
/// position: `Z_-, Y_2, …, Y_{2i}, Z_0, X_{2θ(i)}, …, X_2, Z_+`, as pairs
/// `(path vertex, image)` over `Z_n`.
pub fn mn_path_action(z: &ZnQuiver, i: usize) -> Result<Vec<(usize, Monomial)>, Error> {
    let path = lv_path(z, i)?;
    let n = z.n;
    let t = theta(n, i);
    let h = z.d.seed.len();
    let dd = z.d.seed.disjoint_union(&z.d.seed);
    let tm = tensor_embedding(z);
    let x = |k: usize| z.d.lam(t, k as i64 - 1 - t as i64);
    let y = |k: usize| h + z.d.v(i, k as i64 - 1 - i as i64);
    let word = |vs: &[(usize, i64)], qpow: i64| -> Result<Monomial, Error> {
        let mut out = Monomial::one(2 * h).with_coef(QCoeff::q_pow(qpow));
        for &(v, e) in vs {
            out = dd.mono_mul(&out, &dd.mono_pow(&Monomial::var(2 * h, v), e)?);
        }
        Ok(out)
    };
    let mut zm: Vec<(usize, i64)> = (1..=2 * t + 1).map(|k| (x(k), 1)).collect();
    zm.push((y(1), 1));
    let mut z0: Vec<(usize, i64)> = (1..=2 * t).rev().map(|k| (x(k), -1)).collect();
    z0.extend((1..=2 * i).rev().map(|k| (y(k), -1)));
    let mut zp = vec![(x(1), 1)];
    zp.extend((1..=2 * i + 1).map(|k| (y(k), 1)));
    let mut bottom = vec![word(&zm, 2 * t as i64)?];
    for k in 2..=2 * i {
        bottom.push(word(&[(y(k), 1)], 0)?);
    }
    bottom.push(word(&z0, -2 * n as i64)?);
    for k in (2..=2 * t).rev() {
        bottom.push(word(&[(x(k), 1)], 0)?);
    }
    bottom.push(word(&zp, 2 * i as i64)?);
    debug_assert_eq!(bottom.len(), path.len());
    path.iter().zip(bottom).map(|(&v, b)| Ok((v, pull_back(z, &tm, &b)?))).collect()
}

/// `P ∘ Ad_K` agrees with `M_N ∘ σ` on every generator, for a given `σ`.
pub fn verify_lemk_with(z: &ZnQuiver, sigma: &[usize]) -> Result<bool, Error> {
    let flip = cartan_flip_map(z)?;
    let (sched, _) = half_dehn_schedule(z)?;
    let run = run_schedule(&z.seed, &sched.steps)?;
    if sigma.len() != z.seed.len() {
        return Err(Error::SeedMismatch);
    }
    Ok((0..z.seed.len()).all(|v| flip.images[v] == run.m.images[sigma[v]]))
}

pub fn verify_lemk(n: usize) -> Result<bool, Error> {
    let z = build_zn(n)?;
    verify_lemk_with(&z, &z.sigma)
}

/// Where a factor sequence comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    RFactor,
    RFact1,
    RFact2,
    PhiFromSchedule,
}

impl Provenance {
    pub fn name(self) -> &'static str {
        match self {
            Provenance::RFactor => "r-factor",
            Provenance::RFact1 => "R-fact1",
            Provenance::RFact2 => "R-fact2",
            Provenance::PhiFromSchedule => "Phi-from-schedule",
        }
    }
}

/// One factor `ψ(arg)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factor {
    pub arg: Monomial,
    pub label: String,
}

#[derive(Clone, Debug)]
pub struct FactorSequence {
    pub n: usize,
    /// `D_n ⊔ D_n`.
    pub seed: Seed,
    pub factors: Vec<Factor>,
    pub provenance: Provenance,
}

impl FactorSequence {
    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn args(&self) -> Vec<Monomial> {
        self.factors.iter().map(|f| f.arg.clone()).collect()
    }

    /// Same arguments with multiplicity.
    pub fn same_multiset(&self, other: &FactorSequence) -> bool {
        let count = |s: &FactorSequence| {
            let mut m: BTreeMap<(Vec<i64>, QCoeff), usize> = BTreeMap::new();
            for f in &s.factors {
                *m.entry((f.arg.exp.clone(), f.arg.coef.clone())).or_insert(0) += 1;
            }
            m
        };
        count(self) == count(other)
    }
}

/// `N = 4·C(n+2, 3)`.
pub fn sequence_length(n: usize) -> usize {
    4 * binomial(n + 2, 3)
}

pub fn wm_label(j: usize, i: i64, a: usize, b: i64) -> String {
    format!("w_{}^{}⊗m_{}^{}", j, i, a, b)
}

fn wm(emb: &Embedding, j: usize, i: i64, a: usize, b: i64) -> Result<Factor, Error> {
    Ok(Factor { arg: tensor_monomial(&emb.w(j, i)?, &emb.m(a, b)?), label: wm_label(j, i, a, b) })
}

fn seq(emb: &Embedding, factors: Vec<Factor>, provenance: Provenance) -> FactorSequence {
    let d = emb.seed();
    FactorSequence { n: emb.n(), seed: d.disjoint_union(d), factors, provenance }
}

/// The single-monomial factorization of `R̄`, expanded in `k`, then `j`,
/// then `i`.
pub fn gen_rfact1(n: usize) -> Result<FactorSequence, Error> {
    let emb = Embedding::new(n)?;
    let th = |x: usize| theta(n, x);
    let mut out = Vec::new();
    for k in 1..=n {
        for j in 1..=th(k) {
            let (tj, jj) = (th(j), j as i64);
            for i in -jj..jj {
                out.push(wm(&emb, j, i, tj, k as i64 - tj as i64 - 1)?);
            }
        }
    }
    for k in 1..=n {
        for j in th(k)..=n {
            let tj = th(j) as i64;
            for i in -tj..tj {
                out.push(wm(&emb, th(j), i, j, j as i64 - th(k) as i64)?);
            }
        }
    }
    Ok(seq(&emb, out, Provenance::RFact1))
}

/// `θ` extended by `θ(0) = n+1`, `θ(n+1) = 0`.
fn theta_ext(n: usize, i: usize) -> usize {
    n + 1 - i
}

/// The factorization read off the flips of the half-Dehn twist. Its factors
/// are written `ψ(m ⊗ w)`; they are stored after `P`, as `w ⊗ m`.
pub fn gen_rfact2(n: usize) -> Result<FactorSequence, Error> {
    let emb = Embedding::new(n)?;
    let th = |x: usize| theta_ext(n, x);
    let mut out = Vec::new();
    let mut push = |a: usize, b: i64, j: usize, i: i64| -> Result<(), Error> {
        out.push(wm(&emb, j, i, a, b)?);
        Ok(())
    };
    for block in 0..2 {
        for k in 0..n {
            for j in th(k)..=n + 1 {
                for i in 1..=th(k + 1) {
                    let lvl = if block == 0 { -(i as i64) } else { th(j) as i64 };
                    push(j - i, i as i64 - th(k) as i64, i + th(j), lvl)?;
                }
            }
        }
    }
    for block in 0..2 {
        for k in 1..=n {
            for j in k + 1..=n + 1 {
                for i in 1..=k {
                    let lvl = if block == 0 { k as i64 - j as i64 } else { k as i64 - i as i64 };
                    push(i + th(j), i as i64 - 1, j - i, lvl)?;
                }
            }
        }
    }
    Ok(seq(&emb, out, Provenance::RFact2))
}

/// `ψ(E_c ⊗ m_a^b)` with `E_c` kept as its ordered path monomials.
#[derive(Clone, Debug)]
pub struct CompositeFactor {
    pub c: usize,
    pub a: usize,
    pub b: i64,
    pub summands: Vec<Factor>,
}

impl CompositeFactor {
    pub fn label(&self) -> String {
        format!("E_{}⊗m_{}^{}", self.c, self.a, self.b)
    }
}

/// The triangular factorization by rows of composite factors.
#[derive(Clone, Debug)]
pub struct TriangularFactorization {
    pub n: usize,
    pub seed: Seed,
    pub rows: Vec<Vec<CompositeFactor>>,
}

pub fn gen_rfactor_triangular(n: usize) -> Result<TriangularFactorization, Error> {
    let emb = Embedding::new(n)?;
    let comp = |c: usize, b: i64| -> Result<CompositeFactor, Error> {
        let a = theta(n, c);
        let cc = c as i64;
        let summands = (-cc..cc).map(|r| wm(&emb, c, r, a, b)).collect::<Result<Vec<_>, _>>()?;
        Ok(CompositeFactor { c, a, b, summands })
    };
    let nn = n as i64;
    let mut rows = Vec::new();
    for t in 0..n {
        rows.push((1..=n - t).map(|c| comp(c, c as i64 - 1 - nn + t as i64)).collect::<Result<Vec<_>, _>>()?);
    }
    for u in 0..n {
        rows.push((1..=u + 1).rev().map(|c| comp(c, u as i64 + 1 - c as i64)).collect::<Result<Vec<_>, _>>()?);
    }
    let d = emb.seed();
    Ok(TriangularFactorization { n, seed: d.disjoint_union(d), rows })
}

impl TriangularFactorization {
    pub fn composite_count(&self) -> usize {
        self.rows.iter().map(|r| r.len()).sum()
    }

    /// Splits each `ψ(Σ_r x_r)` into `ψ(x_1)ψ(x_2)⋯`, which needs
    /// `x_a x_b = q^{-2} x_b x_a` for all `a < b`.
    pub fn expand(&self) -> Result<FactorSequence, Error> {
        let mut out = Vec::new();
        for row in &self.rows {
            for cf in row {
                let xs = &cf.summands;
                for a in 0..xs.len() {
                    for b in a + 1..xs.len() {
                        if self.seed.comm2(&xs[a].arg.exp, &xs[b].arg.exp) != -2 {
                            return Err(Error::BadShape(format!(
                                "summands {} and {} of {} are not q^-2-commuting",
                                xs[a].label,
                                xs[b].label,
                                cf.label()
                            )));
                        }
                    }
                }
                out.extend(xs.iter().cloned());
            }
        }
        Ok(FactorSequence { n: self.n, seed: self.seed.clone(), factors: out, provenance: Provenance::RFactor })
    }
}

/// The dilogarithm arguments of the half-Dehn twist, `ψ(b_r)` with
/// `b_r = P(-a_r)` for the arguments `a_r` of `Ψ^q`. Labels are taken from
/// the matching factor of `gen_rfact1`, if any.
pub fn phi_args_from_twist(n: usize) -> Result<FactorSequence, Error> {
    let z = build_zn(n)?;
    let (sched, _) = half_dehn_schedule(&z)?;
    let run = run_schedule(&z.seed, &sched.steps)?;
    let t = tensor_embedding(&z);
    let names: BTreeMap<(Vec<i64>, QCoeff), String> =
        gen_rfact1(n)?.factors.into_iter().map(|f| ((f.arg.exp, f.arg.coef), f.label)).collect();
    let mut out = Vec::new();
    for a in &run.args {
        let b = swap_factors(&t.apply(a)?);
        let b = b.with_coef(b.coef.neg());
        let label = names.get(&(b.exp.clone(), b.coef.clone())).cloned().unwrap_or_else(|| String::from("?"));
        out.push(Factor { arg: b, label });
    }
    Ok(FactorSequence { n, seed: t.target.clone(), factors: out, provenance: Provenance::PhiFromSchedule })
}

/// Whether `s2` is reachable from `s1` by swapping adjacent factors whose
/// arguments commute exactly.
///
/// Each factor of `s2` in turn is bubbled to the front of what is left of
/// `s1`; the first equal argument is taken, and every factor it passes must
/// commute with it.
pub fn equivalent_mod_commuting_swaps(s1: &FactorSequence, s2: &FactorSequence) -> Result<bool, Error> {
    if s1.len() != s2.len() {
        return Err(Error::BadShape(format!("lengths {} and {}", s1.len(), s2.len())));
    }
    if s1.seed.len() != s2.seed.len() {
        return Err(Error::SeedMismatch);
    }
    let s = &s1.seed;
    let mut rest: Vec<&Monomial> = s1.factors.iter().map(|f| &f.arg).collect();
    for f in &s2.factors {
        let Some(pos) = rest.iter().position(|a| **a == f.arg) else {
            return Ok(false);
        };
        if rest[..pos].iter().any(|a| s.comm2(&a.exp, &f.arg.exp) != 0) {
            return Ok(false);
        }
        rest.remove(pos);
    }
    Ok(true)
}

/// A grading of the torus by rational weights per generator.
#[derive(Clone, Debug)]
pub struct SeriesRing {
    pub seed: Seed,
    pub weights: Vec<Q>,
    pub cutoff: i64,
}

/// Terms of total degree at most `cutoff`.
#[derive(Clone, Debug)]
pub struct TruncatedSeries {
    pub terms: TorusElement,
    pub cutoff: i64,
}

impl TruncatedSeries {
    pub fn eq_series(&self, other: &TruncatedSeries) -> bool {
        self.cutoff == other.cutoff && self.terms.sub(&other.terms).is_zero()
    }
}

/// `Ψ^q` series coefficients `c_k` with `Ψ^q(x) = Σ c_k x^k`:
/// `Ψ^q(q²x) = (1+qx)Ψ^q(x)` gives `c_k = q c_{k-1} / (q^{2k} - 1)`.
pub fn dilog_coefficients(kmax: usize) -> Result<Vec<QCoeff>, Error> {
    let mut c = vec![QCoeff::one()];
    for k in 1..=kmax {
        let den = QCoeff::q_pow(2 * k as i64).sub(&QCoeff::one());
        let next = c[k - 1].shift(1).mul(&den.inv()?);
        c.push(next);
    }
    Ok(c)
}

impl SeriesRing {
    pub fn new(seed: Seed, weights: Vec<Q>, cutoff: i64) -> Result<Self, Error> {
        if weights.len() != seed.len() {
            return Err(Error::SeedMismatch);
        }
        if cutoff < 0 {
            return Err(Error::BadIndex(String::from("negative cutoff")));
        }
        Ok(SeriesRing { seed, weights, cutoff })
    }

    /// Total degree grading.
    pub fn standard(seed: Seed, cutoff: i64) -> Result<Self, Error> {
        let w = vec![Q::one(); seed.len()];
        SeriesRing::new(seed, w, cutoff)
    }

    pub fn degree(&self, e: &[i64]) -> Q {
        e.iter().zip(&self.weights).map(|(&x, w)| Q::from(x) * w).sum()
    }

    fn keep(&self, e: &[i64]) -> bool {
        self.degree(e) <= Q::from(self.cutoff)
    }

    pub fn truncate(&self, x: &TorusElement) -> TruncatedSeries {
        TruncatedSeries { terms: x.filter(|e, _| self.keep(e)), cutoff: self.cutoff }
    }

    pub fn one(&self) -> TruncatedSeries {
        self.truncate(&TorusElement::one(self.seed.len()))
    }

    pub fn mul(&self, a: &TruncatedSeries, b: &TruncatedSeries) -> TruncatedSeries {
        let mut out = TorusElement::zero(self.seed.len());
        for ma in a.terms.monomials() {
            let da = self.degree(&ma.exp);
            for mb in b.terms.monomials() {
                if da + self.degree(&mb.exp) > Q::from(self.cutoff) {
                    continue;
                }
                let p = self.seed.mono_mul(&ma, &mb);
                out.add_term(p.exp, p.coef);
            }
        }
        TruncatedSeries { terms: out, cutoff: self.cutoff }
    }

    pub fn product(&self, xs: &[TruncatedSeries]) -> TruncatedSeries {
        xs.iter().fold(self.one(), |acc, x| self.mul(&acc, x))
    }

    /// `Ψ^q(x)`; every term of `x` must have positive degree.
    pub fn big_psi(&self, x: &TorusElement) -> Result<TruncatedSeries, Error> {
        let low = x.monomials().map(|m| self.degree(&m.exp)).min();
        let low = match low {
            None => return Ok(self.one()),
            Some(l) if l <= Q::zero() => return Err(Error::BadShape(String::from("dilogarithm argument of non-positive degree"))),
            Some(l) => l,
        };
        let kmax = (Q::from(self.cutoff) / low).floor().to_integer() as usize;
        let c = dilog_coefficients(kmax)?;
        let xt = self.truncate(x);
        let mut power = self.one();
        let mut out = self.one().terms;
        for ck in c.iter().skip(1) {
            power = self.mul(&power, &xt);
            out = out.add(&power.terms.scale(ck));
        }
        Ok(TruncatedSeries { terms: out, cutoff: self.cutoff })
    }

    /// `ψ(x) = Ψ^q(-x)`.
    pub fn psi(&self, x: &TorusElement) -> Result<TruncatedSeries, Error> {
        self.big_psi(&x.neg())
    }
}

/// `Ψ^q(x)` for a single variable, truncated at `x^D`.
pub fn psi_series(d: i64) -> Result<TruncatedSeries, Error> {
    let ring = SeriesRing::standard(Seed::new(1), d)?;
    ring.big_psi(&TorusElement::var(1, 0))
}

/// The torus `uv = q^{-2}vu` with `u = X_0`, `v = X_1`, graded by total degree.
pub fn uv_ring(d: i64) -> Result<SeriesRing, Error> {
    let mut s = Seed::new(2);
    s.set_eps2(1, 0, -2);
    SeriesRing::standard(s, d)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdentityCheck {
    pub name: String,
    pub holds: bool,
}

/// Names of the checks in [`dilog_identities`] that are identities.
pub const DILOG_IDENTITIES: [&str; 3] = ["addition law", "pentagon", "pentagon, ψ form"];

/// Dilogarithm relations in the torus `uv = q^{-2}vu`, to degree `d`.
///
/// Besides the three identities this evaluates two variants that are not
/// identities: the addition law with `Ψ^q(uv)` on the right, and the
/// pentagon with middle argument `qvu`.
pub fn dilog_identities(d: i64) -> Result<Vec<IdentityCheck>, Error> {
    let r = uv_ring(d)?;
    let u = TorusElement::var(2, 0);
    let v = TorusElement::var(2, 1);
    let vu = r.seed.mul(&v, &u);
    let uv = r.seed.mul(&u, &v);
    let q = |k: i64, x: &TorusElement| x.scale(&QCoeff::q_pow(k));
    let mut out = Vec::new();
    let mut check = |name: &str, lhs: TruncatedSeries, rhs: TruncatedSeries| {
        out.push(IdentityCheck { name: String::from(name), holds: lhs.eq_series(&rhs) });
    };
    let pu = r.big_psi(&u)?;
    let pv = r.big_psi(&v)?;
    check("addition law", r.mul(&pu, &pv), r.big_psi(&u.add(&v))?);
    check("addition law, product argument", r.mul(&pu, &pv), r.big_psi(&uv)?);
    check("pentagon", r.mul(&pv, &pu), r.product(&[pu.clone(), r.big_psi(&q(1, &uv))?, pv.clone()]));
    check("pentagon, middle argument qvu", r.mul(&pv, &pu), r.product(&[pu.clone(), r.big_psi(&q(1, &vu))?, pv.clone()]));
    let mu = r.psi(&u)?;
    let mv = r.psi(&v)?;
    check("pentagon, ψ form", r.mul(&mv, &mu), r.product(&[mu.clone(), r.psi(&q(1, &uv).neg())?, mv.clone()]));
    Ok(out)
}

/// The addition law, the pentagon and its `ψ` form hold to degree `d`.
pub fn verify_pentagon(d: i64) -> Result<bool, Error> {
    let checks = dilog_identities(d)?;
    Ok(checks.iter().filter(|c| DILOG_IDENTITIES.contains(&c.name.as_str())).all(|c| c.holds))
}

/// Grades `D ⊔ D` by the height of the weight of the left factor, so that
/// `E_{ij} ⊗ y` has degree `j - i + 1`.
pub fn height_grading(emb: &Embedding) -> Result<Vec<Q>, Error> {
    let act = CartanAction::new(emb)?;
    let h = emb.seed().len();
    let n = emb.n();
    let mut w = vec![Q::zero(); 2 * h];
    for (v, slot) in w.iter_mut().enumerate().take(h) {
        let (mu, _) = act.weights(&Monomial::var(2 * h, v).exp);
        // root coordinates are c·μ
        *slot = (0..n).map(|j| (0..n).map(|i| emb.cartan.c[i][j] * mu[i]).sum::<Q>()).sum();
    }
    Ok(w)
}

/// The three arguments on each side of the pentagon lemma at `(i, j, s)`,
/// `ψ(A)ψ(B)ψ(C) = ψ(C)ψ(A)ψ(B')` with `A = E_{ij} ⊗ F_{ij}^{↑s+}`,
/// `B = E_{i,j+1} ⊗ F_{i,j+1}^{≥s}`, `B' = E_{i,j+1} ⊗ F_{i,j+1}^{≥s+1}`,
/// `C = E_{j+1} ⊗ m_{θ(j+1)}^s`.
pub struct PentLemmaArgs {
    pub a: TorusElement,
    pub b: TorusElement,
    pub b_next: TorusElement,
    pub c: TorusElement,
}

pub fn pent_lemma_args(emb: &Embedding, i: usize, j: usize, s: i64) -> Result<PentLemmaArgs, Error> {
    let n = emb.n();
    if i == 0 || i > j || j + 1 > n {
        return Err(Error::BadIndex(format!("need 1 ≤ i ≤ j < n, got ({},{}) at n={}", i, j, n)));
    }
    let t = theta(n, j + 1) as i64;
    if s < -t || s > t {
        return Err(Error::BadIndex(format!("level {} outside path {}", s, t)));
    }
    let (_, f_up) = emb.f_up(i, j, s)?;
    let e_ij = emb.root(RootKind::E, i, j)?;
    let e_ij1 = emb.root(RootKind::E, i, j + 1)?;
    let e_next = emb.image(Generator::E(j + 1))?;
    let m = TorusElement::from_monomial(emb.m(theta(n, j + 1), s)?);
    Ok(PentLemmaArgs {
        a: tensor(&e_ij, &f_up),
        b: tensor(&e_ij1, &emb.f_geq(i, j + 1, s)?),
        b_next: tensor(&e_ij1, &emb.f_geq(i, j + 1, s + 1)?),
        c: tensor(&e_next, &m),
    })
}

/// Both sides of the pentagon lemma as series to degree `d`, with the
/// arguments passed through `tweak` first.
pub fn pent_lemma_sides<F>(n: usize, i: usize, j: usize, s: i64, d: i64, tweak: F) -> Result<(TruncatedSeries, TruncatedSeries), Error>
where
    F: Fn(PentLemmaArgs) -> PentLemmaArgs,
{
    let emb = Embedding::new(n)?;
    let args = tweak(pent_lemma_args(&emb, i, j, s)?);
    let dd = emb.seed().disjoint_union(emb.seed());
    let ring = SeriesRing::new(dd, height_grading(&emb)?, d)?;
    let (a, b, bn, c) = (ring.psi(&args.a)?, ring.psi(&args.b)?, ring.psi(&args.b_next)?, ring.psi(&args.c)?);
    Ok((ring.product(&[a.clone(), b, c.clone()]), ring.product(&[c, a, bn])))
}

pub fn verify_pent_lemma_instance(n: usize, i: usize, j: usize, s: i64, d: i64) -> Result<bool, Error> {
    let (l, r) = pent_lemma_sides(n, i, j, s, d, |a| a)?;
    Ok(l.eq_series(&r))
}

/// All `(i, j, s)` at which the pentagon lemma makes sense for rank `n`:
/// `1 ≤ i ≤ j < n` and `|s| ≤ θ(j+1)`. At `s = θ(j+1)` both `F^{≥}` sums
/// are empty and the lemma says `ψ(A)` and `ψ(C)` commute.
pub fn pent_lemma_instances(n: usize) -> Vec<(usize, usize, i64)> {
    let mut out = Vec::new();
    for j in 1..n {
        let t = theta(n, j + 1) as i64;
        for i in 1..=j {
            for s in -t..=t {
                out.push((i, j, s));
            }
        }
    }
    out
}
