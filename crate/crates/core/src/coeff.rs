//! Exact coefficients: Laurent polynomials and rational functions in a formal
//! parameter `q` over the Gaussian rationals `Q(i)`.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::Error;

/// `re + im·i` with arbitrary-precision rational parts.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GaussianRational {
    pub re: BigRational,
    pub im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_int(v: i64) -> Self {
        GaussianRational::new(BigRational::from_integer(BigInt::from(v)), BigRational::zero())
    }

    pub fn from_ratio(p: i64, d: i64) -> Self {
        GaussianRational::new(BigRational::new(BigInt::from(p), BigInt::from(d)), BigRational::zero())
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::one())
    }

    pub fn zero() -> Self {
        GaussianRational::new(BigRational::zero(), BigRational::zero())
    }

    pub fn one() -> Self {
        GaussianRational::from_int(1)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational::new(self.re.clone(), -self.im.clone())
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = &self.re * &self.re + &self.im * &self.im;
        Some(GaussianRational::new(&self.re / &n, -(&self.im / &n)))
    }

    /// `i^k`.
    pub fn i_pow(k: i64) -> Self {
        match k.rem_euclid(4) {
            0 => GaussianRational::from_int(1),
            1 => GaussianRational::i(),
            2 => GaussianRational::from_int(-1),
            _ => -GaussianRational::i(),
        }
    }
}

impl<'a> Add<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn add(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &o.re, &self.im + &o.im)
    }
}

impl<'a> Sub<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn sub(self, o: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &o.re, &self.im - &o.im)
    }
}

impl<'a> Mul<&'a GaussianRational> for &'a GaussianRational {
    type Output = GaussianRational;
    fn mul(self, o: &GaussianRational) -> GaussianRational {
        if self.im.is_zero() && o.im.is_zero() {
            return GaussianRational::new(&self.re * &o.re, BigRational::zero());
        }
        GaussianRational::new(&self.re * &o.re - &self.im * &o.im, &self.re * &o.im + &self.im * &o.re)
    }
}

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

/// Finitely supported map `q`-exponent → coefficient. Never stores zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct QLaurent {
    coeffs: BTreeMap<i64, GaussianRational>,
}

impl QLaurent {
    pub fn zero() -> Self {
        QLaurent { coeffs: BTreeMap::new() }
    }

    pub fn one() -> Self {
        QLaurent::monomial(GaussianRational::one(), 0)
    }

    pub fn monomial(c: GaussianRational, k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        QLaurent { coeffs }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        QLaurent::monomial(GaussianRational::one(), k)
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, GaussianRational)>>(it: I) -> Self {
        let mut out = QLaurent::zero();
        for (k, c) in it {
            out.add_term(k, &c);
        }
        out
    }

    pub fn coeffs(&self) -> &BTreeMap<i64, GaussianRational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_term(&mut self, k: i64, c: &GaussianRational) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.get_mut(&k) {
            Some(v) => {
                let s = &*v + c;
                if s.is_zero() {
                    self.coeffs.remove(&k);
                } else {
                    *v = s;
                }
            }
            None => {
                self.coeffs.insert(k, c.clone());
            }
        }
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        QLaurent { coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return QLaurent::zero();
        }
        QLaurent { coeffs: self.coeffs.iter().map(|(e, v)| (*e, v * c)).collect() }
    }

    /// Substitute `q ↦ -q`.
    pub fn negate_q(&self) -> Self {
        QLaurent { coeffs: self.coeffs.iter().map(|(e, v)| (*e, if e.rem_euclid(2) == 1 { -v.clone() } else { v.clone() })).collect() }
    }

    /// Dense coefficient vector after factoring out `q^min`.
    fn dense(&self) -> (i64, Vec<GaussianRational>) {
        let lo = self.min_exp().unwrap_or(0);
        let hi = self.max_exp().unwrap_or(0);
        let mut v = alloc::vec![GaussianRational::zero(); (hi - lo + 1) as usize];
        for (e, c) in &self.coeffs {
            v[(e - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i64, v: &[GaussianRational]) -> Self {
        QLaurent::from_terms(v.iter().enumerate().map(|(i, c)| (lo + i as i64, c.clone())))
    }
}

impl<'a> Add<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn add(self, o: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(*k, c);
        }
        out
    }
}

impl<'a> Sub<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn sub(self, o: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        for (k, c) in &o.coeffs {
            out.add_term(*k, &-c.clone());
        }
        out
    }
}

impl<'a> Mul<&'a QLaurent> for &'a QLaurent {
    type Output = QLaurent;
    fn mul(self, o: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (a, x) in &self.coeffs {
            for (b, y) in &o.coeffs {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl Neg for QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent { coeffs: self.coeffs.into_iter().map(|(k, c)| (k, -c)).collect() }
    }
}

// Dense polynomial helpers over Q(i), lowest degree first.

fn trim(v: &mut Vec<GaussianRational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_rem(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            let t = &r[dr - db + i] - &(&f * c);
            r[dr - db + i] = t;
        }
        trim(&mut r);
    }
    r
}

fn poly_divexact(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut r = a.to_vec();
    trim(&mut r);
    if r.is_empty() {
        return r;
    }
    let db = b.len() - 1;
    let lead_inv = b[db].inv().expect("nonzero leading coefficient");
    let mut quo = alloc::vec![GaussianRational::zero(); r.len() - db];
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let f = &r[dr] * &lead_inv;
        for (i, c) in b.iter().enumerate() {
            let t = &r[dr - db + i] - &(&f * c);
            r[dr - db + i] = t;
        }
        quo[dr - db] = f;
        trim(&mut r);
    }
    debug_assert!(r.is_empty(), "inexact polynomial division");
    quo
}

fn poly_monic_gcd(a: &[GaussianRational], b: &[GaussianRational]) -> Vec<GaussianRational> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = poly_rem(&x, &y);
        x = y;
        y = r;
    }
    let li = x.last().unwrap().inv().unwrap();
    x.iter().map(|c| c * &li).collect()
}

/// Rational function `num/den` in canonical form: coprime, `den` a polynomial
/// with nonzero constant term and leading coefficient 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QCoeff {
    num: QLaurent,
    den: QLaurent,
}

impl Default for QCoeff {
    fn default() -> Self {
        QCoeff::zero()
    }
}

impl QCoeff {
    pub fn zero() -> Self {
        QCoeff { num: QLaurent::zero(), den: QLaurent::one() }
    }

    pub fn one() -> Self {
        QCoeff { num: QLaurent::one(), den: QLaurent::one() }
    }

    pub fn from_int(v: i64) -> Self {
        QCoeff::from_laurent(QLaurent::monomial(GaussianRational::from_int(v), 0))
    }

    pub fn from_gauss(c: GaussianRational) -> Self {
        QCoeff::from_laurent(QLaurent::monomial(c, 0))
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        QCoeff::from_laurent(QLaurent::q_pow(k))
    }

    /// `i^a · q^k`.
    pub fn i_q(a: i64, k: i64) -> Self {
        QCoeff::from_laurent(QLaurent::monomial(GaussianRational::i_pow(a), k))
    }

    pub fn from_laurent(num: QLaurent) -> Self {
        QCoeff { num, den: QLaurent::one() }
    }

    /// Builds `num/den`, normalizing. Fails on a zero denominator.
    pub fn from_parts(num: QLaurent, den: QLaurent) -> Result<Self, Error> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QCoeff::normalize(num, den))
    }

    pub fn num(&self) -> &QLaurent {
        &self.num
    }

    pub fn den(&self) -> &QLaurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    /// If the value is `c·q^k` with `c` a unit of `Q(i)`, returns `(c, k)`.
    pub fn as_monomial(&self) -> Option<(GaussianRational, i64)> {
        if !self.den.is_one() || self.num.coeffs.len() != 1 {
            return None;
        }
        let (k, c) = self.num.coeffs.iter().next().unwrap();
        Some((c.clone(), *k))
    }

    fn normalize(num: QLaurent, den: QLaurent) -> Self {
        if num.is_zero() {
            return QCoeff::zero();
        }
        if den.coeffs.len() == 1 {
            let (k, c) = den.coeffs.iter().next().unwrap();
            let ci = c.inv().unwrap();
            return QCoeff { num: num.scale(&ci).shift(-k), den: QLaurent::one() };
        }
        let (nlo, nd) = num.dense();
        let (dlo, dd) = den.dense();
        let g = poly_monic_gcd(&nd, &dd);
        let (nd, dd) = if g.len() > 1 { (poly_divexact(&nd, &g), poly_divexact(&dd, &g)) } else { (nd, dd) };
        let li = dd.last().unwrap().inv().unwrap();
        let nd: Vec<_> = nd.iter().map(|c| c * &li).collect();
        let dd: Vec<_> = dd.iter().map(|c| c * &li).collect();
        let num = QLaurent::from_dense(nlo - dlo, &nd);
        let den = QLaurent::from_dense(0, &dd);
        if den.coeffs.len() == 1 {
            // den collapsed to a monomial q^k after cancellation
            let k = den.min_exp().unwrap();
            return QCoeff { num: num.shift(-k), den: QLaurent::one() };
        }
        QCoeff { num, den }
    }

    pub fn neg(&self) -> Self {
        QCoeff { num: -self.num.clone(), den: self.den.clone() }
    }

    pub fn add(&self, o: &QCoeff) -> QCoeff {
        if o.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return o.clone();
        }
        if self.den == o.den {
            if self.den.is_one() {
                return QCoeff { num: &self.num + &o.num, den: QLaurent::one() };
            }
            return QCoeff::normalize(&self.num + &o.num, self.den.clone());
        }
        QCoeff::normalize(&(&self.num * &o.den) + &(&o.num * &self.den), &self.den * &o.den)
    }

    pub fn sub(&self, o: &QCoeff) -> QCoeff {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &QCoeff) -> QCoeff {
        if self.is_zero() || o.is_zero() {
            return QCoeff::zero();
        }
        if self.den.is_one() && o.den.is_one() {
            return QCoeff { num: &self.num * &o.num, den: QLaurent::one() };
        }
        QCoeff::normalize(&self.num * &o.num, &self.den * &o.den)
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> QCoeff {
        QCoeff { num: self.num.shift(k), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<QCoeff, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(QCoeff::normalize(self.den.clone(), self.num.clone()))
    }

    /// `self / b`, failing when `b = 0`.
    pub fn divexact(&self, b: &QCoeff) -> Result<QCoeff, Error> {
        if b.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if b.den.is_one() && b.num.coeffs.len() == 1 && self.den.is_one() {
            let (k, c) = b.num.coeffs.iter().next().unwrap();
            return Ok(QCoeff { num: self.num.scale(&c.inv().unwrap()).shift(-k), den: QLaurent::one() });
        }
        Ok(QCoeff::normalize(&self.num * &b.den, &self.den * &b.num))
    }

    /// Substitute `q ↦ -q`.
    pub fn negate_q(&self) -> QCoeff {
        QCoeff::normalize(self.num.negate_q(), self.den.negate_q())
    }

    pub fn render(&self) -> String {
        if self.den.is_one() {
            render_laurent(&self.num)
        } else {
            alloc::format!("({})/({})", render_laurent(&self.num), render_laurent(&self.den))
        }
    }

    pub fn parse(s: &str) -> Result<QCoeff, Error> {
        let mut p = Parser { s: s.as_bytes(), pos: 0 };
        if let Some(v) = p.try_fraction() {
            return Ok(v);
        }
        p.pos = 0;
        let l = p.laurent()?;
        p.ws();
        if p.pos != p.s.len() {
            return Err(p.err("trailing input"));
        }
        Ok(QCoeff::from_laurent(l))
    }
}

impl fmt::Display for QCoeff {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

fn render_rat(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        alloc::format!("{}/{}", r.numer(), r.denom())
    }
}

fn render_scalar(c: &GaussianRational) -> String {
    if c.im.is_zero() {
        return render_rat(&c.re);
    }
    if c.re.is_zero() {
        if c.im.is_one() {
            return "i".into();
        }
        if (-c.im.clone()).is_one() {
            return "-i".into();
        }
        return alloc::format!("{}*i", render_rat(&c.im));
    }
    let sign = if c.im.is_negative() { "-" } else { "+" };
    alloc::format!("({}{}{}*i)", render_rat(&c.re), sign, render_rat(&c.im.abs()))
}

fn render_laurent(l: &QLaurent) -> String {
    if l.is_zero() {
        return "0".into();
    }
    let mut out = String::new();
    for (k, c) in l.coeffs.iter().rev() {
        let term = if *k == 0 {
            render_scalar(c)
        } else if c.is_one() {
            alloc::format!("q^{}", k)
        } else if (-c.clone()).is_one() {
            alloc::format!("-q^{}", k)
        } else {
            alloc::format!("{}*q^{}", render_scalar(c), k)
        };
        if out.is_empty() {
            out = term;
        } else if let Some(rest) = term.strip_prefix('-') {
            out.push_str(" - ");
            out.push_str(rest);
        } else {
            out.push_str(" + ");
            out.push_str(&term);
        }
    }
    out
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(alloc::format!("{} at byte {}", msg, self.pos))
    }

    fn ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos] == b' ' {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, b: u8) -> Result<(), Error> {
        if self.eat(b) {
            Ok(())
        } else {
            Err(self.err(&alloc::format!("expected '{}'", b as char)))
        }
    }

    fn try_fraction(&mut self) -> Option<QCoeff> {
        if !self.eat(b'(') {
            return None;
        }
        let n = self.laurent().ok()?;
        if !self.eat(b')') || !self.eat(b'/') || !self.eat(b'(') {
            return None;
        }
        let d = self.laurent().ok()?;
        if !self.eat(b')') {
            return None;
        }
        self.ws();
        if self.pos != self.s.len() {
            return None;
        }
        QCoeff::from_parts(n, d).ok()
    }

    fn uint(&mut self) -> Result<BigInt, Error> {
        self.ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        let txt = core::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse::<BigInt>().unwrap())
    }

    fn int(&mut self) -> Result<i64, Error> {
        let neg = self.eat(b'-');
        let v = self.uint()?;
        let v: i64 = v.try_into().map_err(|_| self.err("exponent overflow"))?;
        Ok(if neg { -v } else { v })
    }

    fn rat(&mut self) -> Result<BigRational, Error> {
        let n = self.uint()?;
        // a '/' followed by a digit continues the rational; "/(" belongs to a fraction
        self.ws();
        if self.s.get(self.pos) == Some(&b'/') && self.s.get(self.pos + 1).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
            let d = self.uint()?;
            if d.is_zero() {
                return Err(self.err("zero denominator"));
            }
            return Ok(BigRational::new(n, d));
        }
        Ok(BigRational::from_integer(n))
    }

    fn scalar(&mut self) -> Result<GaussianRational, Error> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let neg = self.eat(b'-');
                let mut re = self.rat()?;
                if neg {
                    re = -re;
                }
                let sign = if self.eat(b'+') {
                    BigRational::one()
                } else if self.eat(b'-') {
                    -BigRational::one()
                } else {
                    return Err(self.err("expected sign in complex scalar"));
                };
                let im = self.rat()? * sign;
                self.expect(b'*')?;
                self.expect(b'i')?;
                self.expect(b')')?;
                Ok(GaussianRational::new(re, im))
            }
            Some(b'i') => {
                self.pos += 1;
                Ok(GaussianRational::i())
            }
            Some(c) if c.is_ascii_digit() => {
                let r = self.rat()?;
                let save = self.pos;
                if self.eat(b'*') {
                    if self.eat(b'i') {
                        return Ok(GaussianRational::new(BigRational::zero(), r));
                    }
                    self.pos = save;
                }
                Ok(GaussianRational::new(r, BigRational::zero()))
            }
            _ => Err(self.err("expected scalar")),
        }
    }

    fn qpow(&mut self) -> Result<i64, Error> {
        self.expect(b'q')?;
        if self.eat(b'^') {
            self.int()
        } else {
            Ok(1)
        }
    }

    fn term(&mut self) -> Result<(i64, GaussianRational), Error> {
        if self.peek() == Some(b'q') {
            return Ok((self.qpow()?, GaussianRational::one()));
        }
        let c = self.scalar()?;
        if self.eat(b'*') {
            return Ok((self.qpow()?, c));
        }
        Ok((0, c))
    }

    fn laurent(&mut self) -> Result<QLaurent, Error> {
        let mut out = QLaurent::zero();
        let mut neg = self.eat(b'-');
        loop {
            let (k, c) = self.term()?;
            out.add_term(k, &if neg { -c } else { c });
            if self.eat(b'+') {
                neg = false;
            } else if self.eat(b'-') {
                neg = true;
            } else {
                break;
            }
        }
        Ok(out)
    }
}
