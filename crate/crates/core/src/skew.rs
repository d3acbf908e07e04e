//! Rational expressions over a quantum torus and their truncated
//! Malcev–Neumann expansions.
//!
//! A weight vector `λ` orders monomials by `λ·e`. Every nonzero element of
//! the skew field of fractions then has a lowest term, and inverses expand
//! as series in increasing weight. A [`Series`] stores the exact terms of
//! weight below its precision. Two expressions are compared by expanding
//! both and matching every term below the common precision.

use alloc::collections::BTreeMap;
use alloc::rc::Rc;
use alloc::vec;
use alloc::vec::Vec;

use crate::coeff::QCoeff;
use crate::qtorus::{FracElement, Monomial, Seed, TorusElement};
use crate::Error;

/// Expression tree; shared subtrees are evaluated once.
#[derive(Debug)]
pub enum Expr {
    Leaf(TorusElement),
    Sum(Vec<Rc<Expr>>),
    Product(Vec<Rc<Expr>>),
    Inv(Rc<Expr>),
}

impl Expr {
    pub fn leaf(x: TorusElement) -> Rc<Expr> {
        Rc::new(Expr::Leaf(x))
    }

    pub fn monomial(m: Monomial) -> Rc<Expr> {
        Rc::new(Expr::Leaf(TorusElement::from_monomial(m)))
    }

    pub fn constant(n: usize, c: QCoeff) -> Rc<Expr> {
        Rc::new(Expr::Leaf(TorusElement::constant(n, c)))
    }

    pub fn sum(xs: Vec<Rc<Expr>>) -> Rc<Expr> {
        Rc::new(Expr::Sum(xs))
    }

    pub fn product(xs: Vec<Rc<Expr>>) -> Rc<Expr> {
        if xs.len() == 1 {
            return xs[0].clone();
        }
        Rc::new(Expr::Product(xs))
    }

    pub fn inv(x: Rc<Expr>) -> Rc<Expr> {
        Rc::new(Expr::Inv(x))
    }

    /// The fraction `num · d_0^{-1} ⋯ d_k^{-1}` as an expression.
    pub fn from_frac(x: &FracElement) -> Rc<Expr> {
        let mut f = vec![Expr::leaf(x.num.clone())];
        f.extend(x.dens.iter().map(|d| Expr::inv(Expr::leaf(d.binomial()))));
        Expr::product(f)
    }
}

/// Replaces `X_v` by `gens[v]` in a fraction.
pub fn substitute(x: &FracElement, gens: &[Rc<Expr>]) -> Rc<Expr> {
    let n = gens.len();
    let word = |e: &[i64], c: QCoeff| -> Rc<Expr> {
        let mut f = vec![Expr::constant(n, c)];
        for (v, &p) in e.iter().enumerate() {
            let g = if p > 0 { gens[v].clone() } else { Expr::inv(gens[v].clone()) };
            for _ in 0..p.unsigned_abs() {
                f.push(g.clone());
            }
        }
        Expr::product(f)
    };
    let num = Expr::sum(x.num.terms().iter().map(|(e, c)| word(e, c.clone())).collect());
    let mut f = vec![num];
    for d in &x.dens {
        let b = Expr::sum(vec![Expr::constant(n, QCoeff::one()), word(&d.mono, QCoeff::q_pow(d.shift))]);
        f.push(Expr::inv(b));
    }
    Expr::product(f)
}

/// Applies a ring map given on monomials (`c·X^e ↦ c·f(X^e)`) to every leaf
/// of every expression, keeping shared subtrees shared.
///
/// `f` is called once per distinct exponent vector.
pub fn map_monomials<F>(es: &[Rc<Expr>], f: &mut F) -> Vec<Rc<Expr>>
where
    F: FnMut(&[i64]) -> Rc<Expr>,
{
    let mut nodes: BTreeMap<*const Expr, Rc<Expr>> = BTreeMap::new();
    let mut monos: BTreeMap<Vec<i64>, Rc<Expr>> = BTreeMap::new();
    es.iter().map(|e| map_rec(e, f, &mut nodes, &mut monos)).collect()
}

fn map_rec<F>(e: &Rc<Expr>, f: &mut F, nodes: &mut BTreeMap<*const Expr, Rc<Expr>>, monos: &mut BTreeMap<Vec<i64>, Rc<Expr>>) -> Rc<Expr>
where
    F: FnMut(&[i64]) -> Rc<Expr>,
{
    let key = Rc::as_ptr(e);
    if let Some(r) = nodes.get(&key) {
        return r.clone();
    }
    let out = match &**e {
        Expr::Leaf(x) => {
            let n = x.nvars();
            let mut parts = Vec::new();
            for (exp, c) in x.terms() {
                let img = monos.entry(exp.clone()).or_insert_with(|| f(exp)).clone();
                if c.is_one() {
                    parts.push(img);
                } else {
                    parts.push(Expr::product(vec![Expr::constant(n, c.clone()), img]));
                }
            }
            if parts.len() == 1 {
                parts.pop().unwrap()
            } else {
                Expr::sum(parts)
            }
        }
        Expr::Sum(xs) => Expr::sum(xs.iter().map(|x| map_rec(x, f, nodes, monos)).collect()),
        Expr::Product(xs) => Expr::product(xs.iter().map(|x| map_rec(x, f, nodes, monos)).collect()),
        Expr::Inv(x) => Expr::inv(map_rec(x, f, nodes, monos)),
    };
    nodes.insert(key, out.clone());
    out
}

/// Terms of weight below `prec`, all exact.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    pub terms: BTreeMap<Vec<i64>, QCoeff>,
    pub prec: i64,
}

/// Outcome of comparing two expansions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Agreement {
    pub equal: bool,
    /// Common precision of the two expansions.
    pub prec: i64,
    /// Lowest weight occurring on either side.
    pub valuation: Option<i64>,
    /// Number of terms compared.
    pub terms: usize,
}

/// Expansion context: seed, weight vector and a weight budget.
pub struct Expander<'a> {
    seed: &'a Seed,
    lambda: Vec<i64>,
    budget: i64,
}

impl<'a> Expander<'a> {
    pub fn new(seed: &'a Seed, lambda: Vec<i64>, budget: i64) -> Result<Self, Error> {
        if lambda.len() != seed.len() {
            return Err(Error::SeedMismatch);
        }
        Ok(Expander { seed, lambda, budget })
    }

    pub fn weight(&self, e: &[i64]) -> i64 {
        e.iter().zip(&self.lambda).map(|(a, b)| a * b).sum()
    }

    /// Lowest weight present, if any term is known.
    pub fn valuation(&self, x: &Series) -> Option<i64> {
        x.terms.keys().map(|e| self.weight(e)).min()
    }

    fn val_or_prec(&self, x: &Series) -> i64 {
        self.valuation(x).unwrap_or(x.prec)
    }

    fn truncate(&self, mut terms: BTreeMap<Vec<i64>, QCoeff>, prec: i64) -> Series {
        terms.retain(|e, c| !c.is_zero() && self.weight(e) < prec);
        Series { terms, prec }
    }

    pub fn series(&self, x: &TorusElement) -> Series {
        self.truncate(x.terms().clone(), self.budget)
    }

    pub fn add(&self, a: &Series, b: &Series) -> Series {
        let mut terms = a.terms.clone();
        for (e, c) in &b.terms {
            let v = terms.entry(e.clone()).or_insert_with(QCoeff::zero);
            *v = v.add(c);
        }
        self.truncate(terms, a.prec.min(b.prec))
    }

    pub fn mul(&self, a: &Series, b: &Series) -> Series {
        let (va, vb) = (self.val_or_prec(a), self.val_or_prec(b));
        let prec = (a.prec.saturating_add(vb)).min(b.prec.saturating_add(va));
        let bw: Vec<(i64, Monomial)> = b.terms.iter().map(|(e, c)| (self.weight(e), Monomial::new(e.clone(), c.clone()))).collect();
        let mut terms: BTreeMap<Vec<i64>, QCoeff> = BTreeMap::new();
        for (e, c) in &a.terms {
            let wa = self.weight(e);
            let ma = Monomial::new(e.clone(), c.clone());
            for (wb, mb) in &bw {
                if wa + wb < prec {
                    let p = self.seed.mono_mul(&ma, mb);
                    let v = terms.entry(p.exp).or_insert_with(QCoeff::zero);
                    *v = v.add(&p.coef);
                }
            }
        }
        self.truncate(terms, prec)
    }

    /// Inverse; needs a unique lowest term known to be nonzero.
    pub fn inv(&self, x: &Series) -> Result<Series, Error> {
        let v = self.valuation(x).ok_or(Error::Precision)?;
        let lows: Vec<&Vec<i64>> = x.terms.keys().filter(|e| self.weight(e) == v).collect();
        if lows.len() != 1 {
            return Err(Error::Precision);
        }
        let n = self.seed.len();
        let t0 = Monomial::new(lows[0].clone(), x.terms[lows[0]].clone());
        let t0inv = self.seed.mono_inv(&t0)?;
        // x = t0·(1 + s), s of positive weight known below rel
        let rel = (x.prec - v).min(self.budget + v);
        let mut rest = x.clone();
        rest.terms.remove(lows[0]);
        let t0s = Series { terms: t0inv.clone().into_terms(), prec: i64::MAX / 4 };
        let mut s = self.mul(&t0s, &rest);
        s.prec = s.prec.min(rel);
        s = self.truncate(s.terms, s.prec);
        let neg_s = Series { terms: s.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(), prec: s.prec };
        let one = Series { terms: TorusElement::one(n).terms().clone(), prec: rel };
        let mut acc = one.clone();
        let mut pw = one;
        loop {
            pw = self.mul(&pw, &neg_s);
            pw.prec = pw.prec.min(rel);
            if pw.terms.is_empty() {
                break;
            }
            acc = self.add(&acc, &pw);
        }
        let out = self.mul(&acc, &t0s);
        let prec = out.prec.min(rel - v);
        Ok(self.truncate(out.terms, prec))
    }

    /// Evaluates an expression, sharing work across common subtrees.
    pub fn eval(&self, e: &Rc<Expr>) -> Result<Series, Error> {
        let mut cache: BTreeMap<*const Expr, Series> = BTreeMap::new();
        self.eval_rec(e, &mut cache)
    }

    fn eval_rec(&self, e: &Rc<Expr>, cache: &mut BTreeMap<*const Expr, Series>) -> Result<Series, Error> {
        let key = Rc::as_ptr(e);
        if let Some(s) = cache.get(&key) {
            return Ok(s.clone());
        }
        let out = match &**e {
            Expr::Leaf(x) => self.series(x),
            Expr::Sum(xs) => {
                let mut acc = Series { terms: BTreeMap::new(), prec: self.budget };
                for x in xs {
                    acc = self.add(&acc, &self.eval_rec(x, cache)?);
                }
                acc
            }
            Expr::Product(xs) => {
                let mut acc = self.series(&TorusElement::one(self.seed.len()));
                for x in xs {
                    acc = self.mul(&acc, &self.eval_rec(x, cache)?);
                }
                acc
            }
            Expr::Inv(x) => self.inv(&self.eval_rec(x, cache)?)?,
        };
        cache.insert(key, out.clone());
        Ok(out)
    }

    /// Expands both expressions and compares them below the common precision.
    pub fn compare(&self, a: &Rc<Expr>, b: &Rc<Expr>) -> Result<Agreement, Error> {
        let (sa, sb) = (self.eval(a)?, self.eval(b)?);
        let prec = sa.prec.min(sb.prec);
        let sa = self.truncate(sa.terms, prec);
        let sb = self.truncate(sb.terms, prec);
        let valuation = self.valuation(&sa).into_iter().chain(self.valuation(&sb)).min();
        Ok(Agreement { equal: sa.terms == sb.terms, prec, valuation, terms: sa.terms.len().max(sb.terms.len()) })
    }
}

trait IntoTerms {
    fn into_terms(self) -> BTreeMap<Vec<i64>, QCoeff>;
}

impl IntoTerms for Monomial {
    fn into_terms(self) -> BTreeMap<Vec<i64>, QCoeff> {
        let mut t = BTreeMap::new();
        t.insert(self.exp, self.coef);
        t
    }
}
