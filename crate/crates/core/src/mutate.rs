//! Seed mutation, quantum mutation and its monomial / dilogarithm parts.
//!
//! Maps between tori go from the mutated seed back to the original one:
//! `μ_k^q : T(μ_k s) → Frac T(s)`, and likewise for `μ'_k`.

use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::QCoeff;
use crate::qtorus::{frac_add, frac_inv_monomial, frac_mul, FracElement, Monomial, QBinomialInverse, Seed, TorusElement};
use crate::skew::{map_monomials, substitute, Expr};
use crate::Error;

fn check_mutable(s: &Seed, k: usize) -> Result<(), Error> {
    if k >= s.len() {
        return Err(Error::BadVertex(k));
    }
    if s.is_frozen(k) {
        return Err(Error::FrozenVertex(k));
    }
    Ok(())
}

/// Exchange-matrix mutation in direction `k`.
pub fn mutate_eps(s: &Seed, k: usize) -> Result<Seed, Error> {
    check_mutable(s, k)?;
    let n = s.len();
    let mut out = s.clone();
    for i in 0..n {
        for j in i + 1..n {
            let e = if i == k || j == k {
                -s.eps2(i, j)
            } else {
                let (a, b) = (s.eps2(i, k), s.eps2(k, j));
                // doubled entries: 2ε' = 2ε + |2ε_ik|·2ε_kj / 2 when the signs agree
                if a * b > 0 {
                    s.eps2(i, j) + a.abs() * b / 2
                } else {
                    s.eps2(i, j)
                }
            };
            out.set_eps2(i, j, e);
        }
    }
    Ok(out)
}

/// `ε_ki` as an integer; `k` is mutable so this is exact.
fn eps_int(s: &Seed, k: usize, i: usize) -> i64 {
    s.eps2(k, i) / 2
}

/// A monomial map sending the generators of `source` to monomials of
/// `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialMap {
    pub source: Seed,
    pub target: Seed,
    pub images: Vec<Monomial>,
}

impl MonomialMap {
    pub fn identity(s: &Seed) -> Self {
        let n = s.len();
        MonomialMap { source: s.clone(), target: s.clone(), images: (0..n).map(|i| Monomial::var(n, i)).collect() }
    }

    /// Image of `c · X^e` (normal form) as a monomial of the target.
    pub fn apply(&self, m: &Monomial) -> Result<Monomial, Error> {
        if m.exp.len() != self.source.len() {
            return Err(Error::SeedMismatch);
        }
        let t = &self.target;
        let mut out = Monomial::one(t.len()).with_coef(m.coef.clone());
        for (i, &e) in m.exp.iter().enumerate() {
            if e != 0 {
                out = t.mono_mul(&out, &t.mono_pow(&self.images[i], e)?);
            }
        }
        Ok(out)
    }

    pub fn apply_element(&self, x: &TorusElement) -> Result<TorusElement, Error> {
        let mut out = TorusElement::zero(self.target.len());
        for m in x.monomials() {
            let im = self.apply(&m)?;
            out.add_term(im.exp, im.coef);
        }
        Ok(out)
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &MonomialMap) -> Result<MonomialMap, Error> {
        if inner.target.len() != self.source.len() {
            return Err(Error::SeedMismatch);
        }
        let images = inner.images.iter().map(|m| self.apply(m)).collect::<Result<Vec<_>, _>>()?;
        Ok(MonomialMap { source: inner.source.clone(), target: self.target.clone(), images })
    }

    /// The images satisfy the source relations in the target torus.
    pub fn is_homomorphism(&self) -> bool {
        let n = self.source.len();
        (0..n).all(|i| (0..n).all(|j| self.target.comm2(&self.images[i].exp, &self.images[j].exp) == self.source.eps2(j, i)))
    }
}

/// `μ'_k : T(μ_k s) → T(s)`.
pub fn mutation_prime(s: &Seed, k: usize) -> Result<MonomialMap, Error> {
    check_mutable(s, k)?;
    let n = s.len();
    let source = mutate_eps(s, k)?;
    let xk = Monomial::var(n, k);
    let mut images = Vec::with_capacity(n);
    for i in 0..n {
        let xi = Monomial::var(n, i);
        let e = eps_int(s, k, i);
        let img = if i == k {
            s.mono_inv(&xk)?
        } else if e > 0 {
            let p = s.mono_mul(&xi, &s.mono_pow(&xk, e)?);
            p.scale(&QCoeff::q_pow(-e * e))
        } else {
            xi
        };
        images.push(img);
    }
    Ok(MonomialMap { source, target: s.clone(), images })
}

/// Image of generator `X_i` of `μ_k s` under `μ_k^q`, as a fraction over `s`.
pub fn quantum_generator_image(s: &Seed, k: usize, i: usize) -> Result<FracElement, Error> {
    check_mutable(s, k)?;
    let n = s.len();
    let xi = FracElement::from_monomial(Monomial::var(n, i));
    if i == k {
        return Ok(FracElement::from_monomial(s.mono_inv(&Monomial::var(n, k))?));
    }
    let e = eps_int(s, k, i);
    let mut mk = vec![0; n];
    if e >= 0 {
        mk[k] = -1;
        let dens = (1..=e).map(|r| QBinomialInverse::new(2 * r - 1, mk.clone())).collect::<Result<Vec<_>, _>>()?;
        Ok(frac_mul(s, &xi, &FracElement { num: TorusElement::one(n), dens }))
    } else {
        mk[k] = 1;
        let mut p = TorusElement::one(n);
        for r in 1..=-e {
            p = s.mul(&p, &QBinomialInverse::new(2 * r - 1, mk.clone())?.binomial());
        }
        Ok(frac_mul(s, &xi, &FracElement::from_torus(p)))
    }
}

fn quantum_generator_inverse(s: &Seed, k: usize, i: usize) -> Result<FracElement, Error> {
    let n = s.len();
    let img = quantum_generator_image(s, k, i)?;
    if img.num.len() == 1 {
        return frac_inv_monomial(s, &img);
    }
    // X_i·P with P a product of binomials: (X_i P)^{-1} = P^{-1} X_i^{-1}
    let e = eps_int(s, k, i);
    let mut mk = vec![0; n];
    mk[k] = 1;
    let dens = (1..=-e).rev().map(|r| QBinomialInverse::new(2 * r - 1, mk.clone())).collect::<Result<Vec<_>, _>>()?;
    let xi_inv = s.mono_inv(&Monomial::var(n, i))?;
    Ok(frac_mul(s, &FracElement { num: TorusElement::one(n), dens }, &FracElement::from_monomial(xi_inv)))
}

/// `μ_k^q` applied to `x ∈ Frac T(μ_k s)`.
///
/// Denominators of `x` must map to binomials, which happens whenever their
/// monomials map to monomials; otherwise the result is not representable
/// and `Inexact` is returned.
pub fn mutate_quantum(s: &Seed, k: usize, x: &FracElement) -> Result<FracElement, Error> {
    check_mutable(s, k)?;
    let n = s.len();
    if x.num.nvars() != n {
        return Err(Error::SeedMismatch);
    }
    let imgs = (0..n).map(|i| quantum_generator_image(s, k, i)).collect::<Result<Vec<_>, _>>()?;
    let invs = (0..n).map(|i| quantum_generator_inverse(s, k, i)).collect::<Result<Vec<_>, _>>()?;
    let image_of = |e: &[i64], c: &QCoeff| -> FracElement {
        let mut acc = FracElement::from_torus(TorusElement::constant(n, c.clone()));
        for (v, &p) in e.iter().enumerate() {
            let base = if p > 0 { &imgs[v] } else { &invs[v] };
            for _ in 0..p.unsigned_abs() {
                acc = frac_mul(s, &acc, base);
            }
        }
        acc
    };
    let mut out = FracElement::from_torus(TorusElement::zero(n));
    for (e, c) in x.num.terms() {
        out = frac_add(s, &out, &image_of(e, c));
    }
    for b in &x.dens {
        let im = image_of(&b.mono, &QCoeff::one());
        let m = match (im.dens.is_empty(), im.num.as_monomial()) {
            (true, Some(m)) => m,
            _ => return Err(Error::Inexact),
        };
        let (c, k2) = m.coef.as_monomial().ok_or(Error::Inexact)?;
        if !c.is_one() {
            return Err(Error::Inexact);
        }
        let nb = QBinomialInverse::new(b.shift + k2, m.exp)?;
        out = frac_mul(s, &out, &FracElement::inverse_binomial(nb));
    }
    Ok(out)
}

/// `Ad_{Ψ^q(u)}(x)`.
///
/// A monomial `y` with `y·u = q^{2m}·u·y` goes to `y·∏_{r=1}^{-m}(1 + q^{2r-1}u)`
/// when `m ≤ 0` and to `y·∏_{r=1}^{m}(1 + q^{1-2r}u)^{-1}` when `m > 0`.
/// The coefficient of `u` must be a power of `q`.
pub fn ad_dilog(s: &Seed, u: &Monomial, x: &TorusElement) -> Result<FracElement, Error> {
    let n = s.len();
    let (c, k) = u.coef.as_monomial().ok_or(Error::Inexact)?;
    if !c.is_one() {
        return Err(Error::BadShape("dilogarithm argument must have a q-power coefficient".into()));
    }
    let mut out = FracElement::from_torus(TorusElement::zero(n));
    for y in x.monomials() {
        let m2 = s.comm2(&y.exp, &u.exp);
        if m2 % 2 != 0 {
            return Err(Error::NonEvenCommutation);
        }
        let m = m2 / 2;
        let yf = FracElement::from_monomial(y);
        let term = if m <= 0 {
            let mut p = TorusElement::one(n);
            for r in 1..=-m {
                p = s.mul(&p, &QBinomialInverse::new(k + 2 * r - 1, u.exp.clone())?.binomial());
            }
            frac_mul(s, &yf, &FracElement::from_torus(p))
        } else {
            let dens = (1..=m).map(|r| QBinomialInverse::new(k + 1 - 2 * r, u.exp.clone())).collect::<Result<Vec<_>, _>>()?;
            frac_mul(s, &yf, &FracElement { num: TorusElement::one(n), dens })
        };
        out = frac_add(s, &out, &term);
    }
    Ok(out)
}

/// Result of running a mutation sequence.
#[derive(Clone, Debug)]
pub struct ScheduleRun {
    /// `M = μ'_{i_1} ∘ ⋯ ∘ μ'_{i_N} : T(s_N) → T(s_0)`.
    pub m: MonomialMap,
    /// `args[r] = μ'_{i_1} ∘ ⋯ ∘ μ'_{i_{r-1}}(X_{i_r})`, monomials of `T(s_0)`.
    pub args: Vec<Monomial>,
    pub final_seed: Seed,
}

pub fn run_schedule(s: &Seed, steps: &[usize]) -> Result<ScheduleRun, Error> {
    let mut m = MonomialMap::identity(s);
    let mut cur = s.clone();
    let mut args = Vec::with_capacity(steps.len());
    for &k in steps {
        check_mutable(&cur, k)?;
        args.push(m.apply(&Monomial::var(cur.len(), k))?);
        let mp = mutation_prime(&cur, k)?;
        m = m.compose(&mp)?;
        cur = mp.source;
    }
    Ok(ScheduleRun { m, args, final_seed: cur })
}

/// `μ^q_{i_1} ∘ ⋯ ∘ μ^q_{i_N}(X_j)` for each generator of the final seed, as
/// expressions over `s`, built by substituting each mutation formula into
/// the previous ones.
pub fn composite_exprs(s: &Seed, steps: &[usize]) -> Result<Vec<Rc<Expr>>, Error> {
    let n = s.len();
    let mut gens: Vec<Rc<Expr>> = (0..n).map(|i| Expr::monomial(Monomial::var(n, i))).collect();
    let mut cur = s.clone();
    for &k in steps {
        let next = (0..n).map(|i| Ok(substitute(&quantum_generator_image(&cur, k, i)?, &gens))).collect::<Result<Vec<_>, Error>>()?;
        gens = next;
        cur = mutate_eps(&cur, k)?;
    }
    Ok(gens)
}

/// The same composite written as `Ad_{Ψ^q(a_1)} ∘ ⋯ ∘ Ad_{Ψ^q(a_N)} ∘ M` from
/// the output of [`run_schedule`].
pub fn decomposed_exprs(s: &Seed, steps: &[usize]) -> Result<Vec<Rc<Expr>>, Error> {
    let n = s.len();
    let run = run_schedule(s, steps)?;
    let mut out: Vec<Rc<Expr>> = run.m.images.iter().cloned().map(Expr::monomial).collect();
    for a in run.args.iter().rev() {
        let mut err = None;
        out = map_monomials(&out, &mut |e: &[i64]| {
            let y = TorusElement::from_monomial(Monomial::new(e.to_vec(), QCoeff::one()));
            match ad_dilog(s, a, &y) {
                Ok(f) => Expr::from_frac(&f),
                Err(x) => {
                    err = Some(x);
                    Expr::constant(n, QCoeff::zero())
                }
            }
        });
        if let Some(x) = err {
            return Err(x);
        }
    }
    Ok(out)
}
