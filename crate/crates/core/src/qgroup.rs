//! The Drinfeld double `𝔇_n` of the Borel of `U_q(sl_{n+1})`, realized in the
//! quantum torus of the `D_n` quiver.
//!
//! Everything here works on images: generators, root vectors and their
//! decompositions are elements of the `D_n` torus. Coproducts live in the
//! `Z_n` torus.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cell::RefCell;
use core::cmp::Ordering;

use num_rational::Rational64;

use crate::coeff::{GaussianRational, QCoeff, QLaurent};
use crate::mutate::MonomialMap;
use crate::qtorus::{Monomial, Seed, TorusElement};
use crate::quiver::{build_dn, build_zn, theta, DnQuiver, ZnQuiver};
use crate::Error;

/// Type `A_n` root data.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CartanData {
    pub n: usize,
    /// `a[i-1][j-1] = (α_i, α_j)`.
    pub a: Vec<Vec<i64>>,
    /// Inverse of `a`.
    pub c: Vec<Vec<Rational64>>,
}

impl CartanData {
    pub fn new(n: usize) -> Result<Self, Error> {
        if n == 0 {
            return Err(Error::BadIndex(String::from("rank must be positive")));
        }
        let a = (1..=n)
            .map(|i| {
                (1..=n)
                    .map(|j| match i.abs_diff(j) {
                        0 => 2,
                        1 => -1,
                        _ => 0,
                    })
                    .collect()
            })
            .collect();
        // (A_n^{-1})_{ij} = min(i,j)(n+1-max(i,j))/(n+1)
        let c =
            (1..=n).map(|i| (1..=n).map(|j| Rational64::new((i.min(j) * (n + 1 - i.max(j))) as i64, (n + 1) as i64)).collect()).collect();
        Ok(CartanData { n, a, c })
    }

    pub fn theta(&self, i: usize) -> usize {
        theta(self.n, i)
    }

    /// `a_{ij}` with 1-based indices.
    pub fn aij(&self, i: usize, j: usize) -> i64 {
        self.a[i - 1][j - 1]
    }

    /// `(α, β)` for `α = α_i + … + α_j`, `β = α_k + … + α_l`.
    pub fn pairing(&self, (i, j): (usize, usize), (k, l): (usize, usize)) -> i64 {
        let mut s = 0;
        for x in i..=j {
            for y in k..=l {
                s += self.aij(x, y);
            }
        }
        s
    }
}

/// Chevalley generators of `𝔇_n`, 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    E(usize),
    F(usize),
    K(usize),
    Kp(usize),
}

/// Which recursion defines a root vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RootKind {
    E,
    F,
    /// `F'`, built with the `E` recursion out of the `F_i`, taking the roots
    /// in the order mirrored by `θ`.
    Fp,
}

/// `q - q^{-1}`.
pub fn q_minus_qinv() -> QCoeff {
    QCoeff::from_laurent(QLaurent::from_terms([(1, GaussianRational::one()), (-1, GaussianRational::from_int(-1))]))
}

/// `q + q^{-1}`.
pub fn q_plus_qinv() -> QCoeff {
    QCoeff::from_laurent(QLaurent::from_terms([(1, GaussianRational::one()), (-1, GaussianRational::one())]))
}

/// `𝐢 Σ_{k=0}^{len-1} q^k X_{p_0} ⋯ X_{p_k}`, i.e. `𝐢X_{p_0}(1 + qX_{p_1}(1 + …))`.
pub fn nested_path_sum(s: &Seed, path: &[usize], len: usize) -> TorusElement {
    let mut out = TorusElement::zero(s.len());
    for k in 0..len {
        let m = s.word(&path[..=k]).scale(&QCoeff::i_q(1, k as i64));
        out.add_term(m.exp, m.coef);
    }
    out
}

/// The embedding `ι: 𝔇_n → D_n` with cached root vectors.
pub struct Embedding {
    pub cartan: CartanData,
    pub d: DnQuiver,
    roots: RefCell<BTreeMap<(RootKind, usize, usize), TorusElement>>,
}

impl Embedding {
    pub fn new(n: usize) -> Result<Self, Error> {
        let cartan = CartanData::new(n)?;
        let d = build_dn(n)?;
        Ok(Embedding { cartan, d, roots: RefCell::new(BTreeMap::new()) })
    }

    pub fn n(&self) -> usize {
        self.cartan.n
    }

    pub fn seed(&self) -> &Seed {
        &self.d.seed
    }

    pub fn theta(&self, i: usize) -> usize {
        self.cartan.theta(i)
    }

    fn check_index(&self, i: usize) -> Result<(), Error> {
        if i == 0 || i > self.n() {
            Err(Error::BadIndex(format!("index {} outside 1..={}", i, self.n())))
        } else {
            Ok(())
        }
    }

    fn check_level(&self, i: usize, r: i64) -> Result<(), Error> {
        self.check_index(i)?;
        if r < -(i as i64) || r > i as i64 {
            Err(Error::BadIndex(format!("level {} outside path {}", r, i)))
        } else {
            Ok(())
        }
    }

    /// `w_i^r = 𝐢 q^{i+r} V_{i,-i} ⋯ V_{i,r}`.
    pub fn w(&self, i: usize, r: i64) -> Result<Monomial, Error> {
        self.check_level(i, r)?;
        let k = (i as i64 + r) as usize;
        Ok(self.seed().word(&self.d.v_path(i)[..=k]).scale(&QCoeff::i_q(1, i as i64 + r)))
    }

    /// `m_i^r = 𝐢 q^{i+r} Λ_{i,-i} ⋯ Λ_{i,r}`.
    pub fn m(&self, i: usize, r: i64) -> Result<Monomial, Error> {
        self.check_level(i, r)?;
        let k = (i as i64 + r) as usize;
        Ok(self.seed().word(&self.d.lam_path(i)[..=k]).scale(&QCoeff::i_q(1, i as i64 + r)))
    }

    pub fn image(&self, g: Generator) -> Result<TorusElement, Error> {
        let s = self.seed();
        match g {
            Generator::E(i) => {
                self.check_index(i)?;
                Ok(nested_path_sum(s, &self.d.v_path(i), 2 * i))
            }
            Generator::K(i) => {
                self.check_index(i)?;
                Ok(TorusElement::from_monomial(s.word(&self.d.v_path(i)).scale(&QCoeff::q_pow(2 * i as i64))))
            }
            Generator::F(j) => {
                self.check_index(j)?;
                let i = self.theta(j);
                Ok(nested_path_sum(s, &self.d.lam_path(i), 2 * i))
            }
            Generator::Kp(j) => {
                self.check_index(j)?;
                let i = self.theta(j);
                Ok(TorusElement::from_monomial(s.word(&self.d.lam_path(i)).scale(&QCoeff::q_pow(2 * i as i64))))
            }
        }
    }

    /// `E_{ij}`, `F_{ij}` or `F'_{ij}` for `i ≤ j`, split off the last simple root.
    pub fn root(&self, kind: RootKind, i: usize, j: usize) -> Result<TorusElement, Error> {
        self.check_index(i)?;
        self.check_index(j)?;
        if i > j {
            return Err(Error::BadIndex(format!("root ({},{}) needs i ≤ j", i, j)));
        }
        if let Some(x) = self.roots.borrow().get(&(kind, i, j)) {
            return Ok(x.clone());
        }
        let x = if i == j {
            match kind {
                RootKind::E => self.image(Generator::E(i))?,
                RootKind::F | RootKind::Fp => self.image(Generator::F(i))?,
            }
        } else {
            self.root_split(kind, i, j - 1, j)?
        };
        self.roots.borrow_mut().insert((kind, i, j), x.clone());
        Ok(x)
    }

    /// The recursion applied to `α = α_i + … + α_k` and `β = α_{k+1} + … + α_j`.
    pub fn root_split(&self, kind: RootKind, i: usize, k: usize, j: usize) -> Result<TorusElement, Error> {
        if !(i <= k && k < j) {
            return Err(Error::BadIndex(format!("split {} of ({},{})", k, i, j)));
        }
        let a = self.root(kind, i, k)?;
        let b = self.root(kind, k + 1, j)?;
        let ab = self.cartan.pairing((i, k), (k + 1, j));
        let s = self.seed();
        let num = match kind {
            RootKind::E => s.q_commutator(&a, &b, &QCoeff::q_pow(-ab)),
            RootKind::F => s.q_commutator(&b, &a, &QCoeff::q_pow(ab)),
            // the `E` recursion in the order reversed by `θ`
            RootKind::Fp => s.q_commutator(&b, &a, &QCoeff::q_pow(-ab)),
        };
        num.divexact(&q_minus_qinv())
    }

    /// Splits `x` by the sign of its `q`-commutation with `reference`:
    /// returns `(x_-, x_+)` with `ref·x_± = q^{±…} x_±·ref`.
    pub fn split(&self, x: &TorusElement, reference: &Monomial) -> Result<(TorusElement, TorusElement), Error> {
        split_by_commutation(self.seed(), x, reference)
    }

    /// `E_{ij}^{↑s±}`: `E_{ij}` split against `w_{j+1}^s`.
    pub fn e_up(&self, i: usize, j: usize, s: i64) -> Result<(TorusElement, TorusElement), Error> {
        self.split(&self.root(RootKind::E, i, j)?, &self.w(j + 1, s)?)
    }

    /// `E_{ij}^{↓r±}`: `E_{ij}` split against `w_{i-1}^r`.
    pub fn e_down(&self, i: usize, j: usize, r: i64) -> Result<(TorusElement, TorusElement), Error> {
        if i < 2 {
            return Err(Error::BadIndex(String::from("no path below the first")));
        }
        self.split(&self.root(RootKind::E, i, j)?, &self.w(i - 1, r)?)
    }

    /// `F_{ij}^{↑s±}`: `F_{ij}` split against `m_{θ(j+1)}^s`.
    pub fn f_up(&self, i: usize, j: usize, s: i64) -> Result<(TorusElement, TorusElement), Error> {
        self.check_index(j + 1)?;
        self.split(&self.root(RootKind::F, i, j)?, &self.m(self.theta(j + 1), s)?)
    }

    /// `F_{ij}^{↓r±}`: `F_{ij}` split against `m_{θ(i-1)}^r`.
    pub fn f_down(&self, i: usize, j: usize, r: i64) -> Result<(TorusElement, TorusElement), Error> {
        if i < 2 {
            return Err(Error::BadIndex(String::from("no path below the first")));
        }
        self.split(&self.root(RootKind::F, i, j)?, &self.m(self.theta(i - 1), r)?)
    }

    /// `F_{ij}^{≥s} = Σ_{r ≥ s} F_{i,j-1}^{↑r+} m_{θ(j)}^r`, `i < j`.
    pub fn f_geq(&self, i: usize, j: usize, s: i64) -> Result<TorusElement, Error> {
        if i >= j {
            return Err(Error::BadIndex(format!("F^≥ needs i < j, got ({},{})", i, j)));
        }
        self.check_index(j)?;
        let t = self.theta(j) as i64;
        let mut out = TorusElement::zero(self.seed().len());
        for r in s.max(-t)..t {
            let (_, plus) = self.f_up(i, j - 1, r)?;
            out = out.add(&self.seed().mul_mono_right(&plus, &self.m(self.theta(j), r)?));
        }
        Ok(out)
    }

    /// Positive roots `(i, j)` in the normal order
    /// `α_1 ≺ α_1+α_2 ≺ … ≺ α_1+…+α_n ≺ α_2 ≺ … ≺ α_n`.
    pub fn roots_in_order(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        (1..=n).flat_map(|i| (i..=n).map(move |j| (i, j))).collect()
    }

    /// `ι` of a PBW monomial, multiplied out exactly.
    pub fn pbw_image(&self, p: &PbwMonomial) -> Result<TorusElement, Error> {
        if p.n != self.n() {
            return Err(Error::BadShape(String::from("PBW monomial of another rank")));
        }
        let s = self.seed();
        let mut out = TorusElement::one(s.len());
        for (idx, &k) in p.k.iter().enumerate() {
            out = s.mul(&out, &s.pow(&self.image(Generator::K(idx + 1))?, k));
        }
        for (idx, &k) in p.kp.iter().enumerate() {
            out = s.mul(&out, &s.pow(&self.image(Generator::Kp(idx + 1))?, k));
        }
        for (r, &k) in self.roots_in_order().iter().zip(&p.e) {
            if k > 0 {
                out = s.mul(&out, &s.pow(&self.root(RootKind::E, r.0, r.1)?, k));
            }
        }
        for (r, &k) in self.roots_in_order().iter().zip(&p.fp) {
            if k > 0 {
                out = s.mul(&out, &s.pow(&self.root(RootKind::Fp, r.0, r.1)?, k));
            }
        }
        Ok(out)
    }

    /// The `D_n` vertex playing `V_{i,r}` in the degree formulas, where
    /// row `n+1` is the `Λ_{·,0}` column and `V_{n+1,0}` is absent.
    fn v_ext(&self, i: usize, r: i64) -> Option<usize> {
        let n = self.n();
        if i <= n {
            Some(self.d.v(i, r))
        } else if r == 0 {
            None
        } else {
            Some(self.d.lam(n + 1 - r as usize, 0))
        }
    }

    /// Same for `Λ_{j,s}`, with `Λ_{n+1,s} = V_{n+1-s,0}`.
    fn lam_ext(&self, j: usize, s: i64) -> Option<usize> {
        let n = self.n();
        if j <= n {
            Some(self.d.lam(j, s))
        } else if s == 0 {
            None
        } else {
            Some(self.d.v(n + 1 - s as usize, 0))
        }
    }

    /// Reads a PBW monomial off the leading exponent by the rhombus rule
    /// `north + south - east - west`, then checks that it reproduces `lead`.
    pub fn reconstruct_pbw(&self, lead: &Monomial) -> Result<PbwMonomial, Error> {
        if lead.coef.is_zero() {
            return Err(Error::NotPbwLeadingTerm);
        }
        if lead.exp.len() != self.seed().len() {
            return Err(Error::SeedMismatch);
        }
        let n = self.n();
        let deg = |v: Option<usize>| v.map_or(0, |v| lead.exp[v]);
        let mut out = PbwMonomial::one(n);
        let set = |x: i64, slot: &mut u32| -> Result<(), Error> {
            *slot = u32::try_from(x).map_err(|_| Error::NotPbwLeadingTerm)?;
            Ok(())
        };
        for (idx, &(i, j)) in self.roots_in_order().iter().enumerate() {
            let (ii, jj) = (i as i64, j);
            let x = deg(self.v_ext(jj + 1, ii)) + deg(self.v_ext(jj, ii - 1)) - deg(self.v_ext(jj, ii)) - deg(self.v_ext(jj + 1, ii - 1));
            set(x, &mut out.e[idx])?;
        }
        for i in 1..=n {
            let ii = i as i64;
            set(deg(self.v_ext(i, ii)) - deg(self.v_ext(n + 1, ii)), &mut out.k[i - 1])?;
            set(deg(self.lam_ext(i, ii)) - deg(self.lam_ext(n + 1, ii)), &mut out.kp[theta(n, i) - 1])?;
        }
        let roots = self.roots_in_order();
        for i in 1..=n {
            for j in i..=n {
                let ii = i as i64;
                let x = deg(self.lam_ext(j, ii - 1)) + deg(self.lam_ext(j + 1, ii))
                    - deg(self.lam_ext(j + 1, ii - 1))
                    - deg(self.lam_ext(j, ii));
                // F'_{θ(j)θ(i)} in increasing index order
                let key = (theta(n, j), theta(n, i));
                let idx = roots.iter().position(|r| *r == key).unwrap();
                set(x, &mut out.fp[idx])?;
            }
        }
        if self.pbw_leading_exponent(&out)? != lead.exp {
            return Err(Error::NotPbwLeadingTerm);
        }
        Ok(out)
    }

    /// Sum of the leading exponents of the factors of `p`.
    pub fn pbw_leading_exponent(&self, p: &PbwMonomial) -> Result<Vec<i64>, Error> {
        let order: Vec<usize> = (0..self.seed().len()).collect();
        let mut acc = vec![0i64; self.seed().len()];
        let mut add = |x: &TorusElement, k: u32| -> Result<(), Error> {
            if k > 0 {
                let l = leading_term(x, &order)?;
                for (a, b) in acc.iter_mut().zip(&l.exp) {
                    *a += *b * k as i64;
                }
            }
            Ok(())
        };
        for (idx, &k) in p.k.iter().enumerate() {
            add(&self.image(Generator::K(idx + 1))?, k)?;
        }
        for (idx, &k) in p.kp.iter().enumerate() {
            add(&self.image(Generator::Kp(idx + 1))?, k)?;
        }
        for (r, (&ke, &kf)) in self.roots_in_order().iter().zip(p.e.iter().zip(&p.fp)) {
            add(&self.root(RootKind::E, r.0, r.1)?, ke)?;
            add(&self.root(RootKind::Fp, r.0, r.1)?, kf)?;
        }
        Ok(acc)
    }
}

/// Splits `x = x_- + x_+` by the sign of `c` in `ref·t = q^c t·ref`.
/// A term commuting with `ref` makes the split undefined.
pub fn split_by_commutation(s: &Seed, x: &TorusElement, reference: &Monomial) -> Result<(TorusElement, TorusElement), Error> {
    let mut minus = TorusElement::zero(s.len());
    let mut plus = TorusElement::zero(s.len());
    for (e, c) in x.terms() {
        match s.comm2(&reference.exp, e).cmp(&0) {
            Ordering::Less => minus.add_term(e.clone(), c.clone()),
            Ordering::Greater => plus.add_term(e.clone(), c.clone()),
            Ordering::Equal => return Err(Error::DecompositionUndefined),
        }
    }
    Ok((minus, plus))
}

/// Exponents of `K_i`, `K'_i` (indexed by `i-1`) and of `E_α`, `F'_α` in the
/// normal order of positive roots. Normal form is `K^a K'^b E^c F'^d`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PbwMonomial {
    pub n: usize,
    pub k: Vec<u32>,
    pub kp: Vec<u32>,
    pub e: Vec<u32>,
    pub fp: Vec<u32>,
}

impl PbwMonomial {
    pub fn one(n: usize) -> Self {
        let r = n * (n + 1) / 2;
        PbwMonomial { n, k: vec![0; n], kp: vec![0; n], e: vec![0; r], fp: vec![0; r] }
    }

    pub fn degree(&self) -> u32 {
        self.k.iter().chain(&self.kp).chain(&self.e).chain(&self.fp).sum()
    }
}

/// The largest term under degree-lexicographic order; `order` lists the
/// vertices from most to least significant.
pub fn leading_term(x: &TorusElement, order: &[usize]) -> Result<Monomial, Error> {
    let key = |e: &[i64]| -> (i64, Vec<i64>) { (e.iter().sum(), order.iter().map(|&v| e[v]).collect()) };
    x.terms()
        .iter()
        .max_by(|a, b| key(a.0).cmp(&key(b.0)))
        .map(|(e, c)| Monomial::new(e.clone(), c.clone()))
        .ok_or_else(|| Error::BadShape(String::from("leading term of zero")))
}

pub fn iota(n: usize, g: Generator) -> Result<TorusElement, Error> {
    Embedding::new(n)?.image(g)
}

pub fn root_vector(n: usize, kind: RootKind, i: usize, j: usize) -> Result<TorusElement, Error> {
    Embedding::new(n)?.root(kind, i, j)
}

pub fn reconstruct_pbw(lead: &Monomial, n: usize) -> Result<PbwMonomial, Error> {
    Embedding::new(n)?.reconstruct_pbw(lead)
}

/// One line of a relation report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationCheck {
    pub name: String,
    pub holds: bool,
}

/// Checks every defining relation of `𝔇_n` on the images.
pub fn check_relations(n: usize) -> Result<Vec<RelationCheck>, Error> {
    let emb = Embedding::new(n)?;
    let s = emb.seed();
    let mut out = Vec::new();
    let gens = |f: fn(usize) -> Generator| -> Result<Vec<TorusElement>, Error> { (1..=n).map(|i| emb.image(f(i))).collect() };
    let (e, f, k, kp) = (gens(Generator::E)?, gens(Generator::F)?, gens(Generator::K)?, gens(Generator::Kp)?);
    let mut push = |name: String, x: TorusElement| out.push(RelationCheck { name, holds: x.is_zero() });
    for i in 1..=n {
        for j in 1..=n {
            let a = emb.cartan.aij(i, j);
            let (ki, kpi, ej, fj) = (&k[i - 1], &kp[i - 1], &e[j - 1], &f[j - 1]);
            push(format!("K{} E{}", i, j), s.q_commutator(ki, ej, &QCoeff::q_pow(a)));
            push(format!("K'{} E{}", i, j), s.q_commutator(kpi, ej, &QCoeff::q_pow(-a)));
            push(format!("K{} F{}", i, j), s.q_commutator(ki, fj, &QCoeff::q_pow(-a)));
            push(format!("K'{} F{}", i, j), s.q_commutator(kpi, fj, &QCoeff::q_pow(a)));
            push(format!("K{} K{}", i, j), s.q_commutator(ki, &k[j - 1], &QCoeff::one()));
            push(format!("K{} K'{}", i, j), s.q_commutator(ki, &kp[j - 1], &QCoeff::one()));
            push(format!("K'{} K'{}", i, j), s.q_commutator(kpi, &kp[j - 1], &QCoeff::one()));
            let mut ef = s.q_commutator(&e[i - 1], fj, &QCoeff::one());
            if i == j {
                ef = ef.sub(&ki.sub(kpi).scale(&q_minus_qinv()));
            }
            push(format!("[E{}, F{}]", i, j), ef);
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for (name, x) in [("E", &e), ("F", &f)] {
                let (a, b) = (&x[i - 1], &x[j - 1]);
                if i.abs_diff(j) == 1 {
                    let aab = s.mul(&s.mul(a, a), b);
                    let aba = s.mul(&s.mul(a, b), a);
                    let baa = s.mul(&s.mul(b, a), a);
                    let r = aab.sub(&aba.scale(&q_plus_qinv())).add(&baa);
                    push(format!("Serre {}{}^2 {}{}", name, i, name, j), r);
                } else if i < j {
                    push(format!("[{}{}, {}{}]", name, i, name, j), s.q_commutator(a, b, &QCoeff::one()));
                }
            }
        }
    }
    Ok(out)
}

/// `Δ(g)` as an element of the `Z_n` torus, read off the `VV_i`- and
/// `ΛΛ_i`-paths.
pub fn coproduct_image(z: &ZnQuiver, g: Generator) -> Result<TorusElement, Error> {
    let n = z.n;
    let s = &z.seed;
    let chk = |i: usize| {
        if i == 0 || i > n {
            Err(Error::BadIndex(format!("index {} outside 1..={}", i, n)))
        } else {
            Ok(())
        }
    };
    match g {
        Generator::E(i) => {
            chk(i)?;
            Ok(nested_path_sum(s, &z.vv_path(i), 4 * i))
        }
        Generator::K(i) => {
            chk(i)?;
            Ok(TorusElement::from_monomial(s.word(&z.vv_path(i)).scale(&QCoeff::q_pow(4 * i as i64))))
        }
        Generator::F(j) => {
            chk(j)?;
            let i = theta(n, j);
            Ok(nested_path_sum(s, &z.ll_path(i), 4 * i))
        }
        Generator::Kp(j) => {
            chk(j)?;
            let i = theta(n, j);
            Ok(TorusElement::from_monomial(s.word(&z.ll_path(i)).scale(&QCoeff::q_pow(4 * i as i64))))
        }
    }
}

pub fn coproduct_image_rank(n: usize, g: Generator) -> Result<TorusElement, Error> {
    coproduct_image(&build_zn(n)?, g)
}

/// The embedding `Z_n → D_n ⊗ D_n`: a glued vertex goes to the product of
/// its two halves. The target seed is `D_n ⊔ D_n`, left copy first.
pub fn tensor_embedding(z: &ZnQuiver) -> MonomialMap {
    let dn = z.d.seed.len();
    let target = z.d.seed.disjoint_union(&z.d.seed);
    let mut images = vec![Monomial::one(2 * dn); z.seed.len()];
    for (side, map) in [(0, &z.left), (1, &z.right)] {
        for (x, &v) in map.iter().enumerate() {
            images[v].exp[side * dn + x] += 1;
        }
    }
    MonomialMap { source: z.seed.clone(), target, images }
}

/// `a ⊗ b` in the seed `D ⊔ D`.
pub fn tensor(a: &TorusElement, b: &TorusElement) -> TorusElement {
    let (na, nb) = (a.nvars(), b.nvars());
    let mut out = TorusElement::zero(na + nb);
    for (ea, ca) in a.terms() {
        for (eb, cb) in b.terms() {
            let mut e = ea.clone();
            e.extend_from_slice(eb);
            out.add_term(e, ca.mul(cb));
        }
    }
    out
}

/// `(ι⊗ι)(Δ(g))` from the Hopf structure of `𝔇_n`.
pub fn hopf_coproduct(emb: &Embedding, g: Generator) -> Result<TorusElement, Error> {
    let one = TorusElement::one(emb.seed().len());
    let x = emb.image(g)?;
    Ok(match g {
        Generator::E(i) => tensor(&x, &one).add(&tensor(&emb.image(Generator::K(i))?, &x)),
        Generator::F(i) => tensor(&x, &emb.image(Generator::Kp(i))?).add(&tensor(&one, &x)),
        Generator::K(_) | Generator::Kp(_) => tensor(&x, &x),
    })
}
