//! Sparse Laurent polynomials in `q`, `t` over exact rationals.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

// integer gcd helpers live at the bottom of this file

/// A monomial exponent pair `q^qe * t^te`, ordered graded-lexicographically
/// with `q` before `t`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Mono {
    pub qe: i64,
    pub te: i64,
}

impl Mono {
    pub const ONE: Mono = Mono { qe: 0, te: 0 };

    pub fn new(qe: i64, te: i64) -> Self {
        Mono { qe, te }
    }

    pub fn mul(self, other: Mono) -> Mono {
        Mono::new(self.qe + other.qe, self.te + other.te)
    }

    pub fn div(self, other: Mono) -> Mono {
        Mono::new(self.qe - other.qe, self.te - other.te)
    }

    fn degree(self) -> i64 {
        self.qe + self.te
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.degree(), self.qe).cmp(&(other.degree(), other.qe))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse Laurent polynomial; invariant: no stored coefficient is zero.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<Mono, BigRational>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(BigRational::one())
    }

    pub fn constant(c: BigRational) -> Self {
        LaurentPoly::monomial(0, 0, c)
    }

    pub fn monomial(qe: i64, te: i64, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono::new(qe, te), c);
        }
        LaurentPoly { terms }
    }

    pub fn q() -> Self {
        LaurentPoly::monomial(1, 0, BigRational::one())
    }

    pub fn t() -> Self {
        LaurentPoly::monomial(0, 1, BigRational::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::ONE)
                .map(|c| c.is_one())
                .unwrap_or(false)
    }

    /// True when the polynomial is a single term (a unit in the Laurent ring).
    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Mono, &BigRational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, qe: i64, te: i64) -> BigRational {
        self.terms
            .get(&Mono::new(qe, te))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    fn insert_add(&mut self, m: Mono, c: BigRational) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Leading term under the fixed grlex order.
    pub fn leading(&self) -> Option<(Mono, &BigRational)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    /// Componentwise minimum of the exponents over all terms.
    pub fn min_exponents(&self) -> Option<Mono> {
        let mut it = self.terms.keys();
        let first = *it.next()?;
        let mut min = first;
        for m in it {
            min.qe = min.qe.min(m.qe);
            min.te = min.te.min(m.te);
        }
        Some(min)
    }

    pub fn shift(&self, by: Mono) -> Self {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.mul(by), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, v)| (*m, v * c)).collect(),
        }
    }

    pub fn eval(&self, q0: &BigRational, t0: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (m, c) in &self.terms {
            acc += c * pow_rational(q0, m.qe) * pow_rational(t0, m.te);
        }
        acc
    }

    /// Exact division; panics if `other` does not divide `self` (internal use
    /// after a gcd computation).
    pub fn div_exact(&self, other: &LaurentPoly) -> LaurentPoly {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        if other.is_monomial() {
            let (m, c) = other.leading().unwrap();
            let inv = c.recip();
            return LaurentPoly {
                terms: self
                    .terms
                    .iter()
                    .map(|(mm, cc)| (mm.div(m), cc * &inv))
                    .collect(),
            };
        }
        let mut rem = self.clone();
        let mut quot = LaurentPoly::zero();
        let (lm, lc) = other.leading().unwrap();
        let lc = lc.clone();
        while !rem.is_zero() {
            let (rm, rc) = rem.leading().unwrap();
            let qm = rm.div(lm);
            let qc = rc / &lc;
            let term = LaurentPoly::monomial(qm.qe, qm.te, qc);
            rem -= &(&term * other);
            quot += &term;
        }
        quot
    }
}

pub(crate) fn pow_rational(b: &BigRational, e: i64) -> BigRational {
    if e == 0 {
        return BigRational::one();
    }
    let p = num_traits::Pow::pow(b.clone(), e.unsigned_abs());
    if e < 0 {
        p.recip()
    } else {
        p
    }
}

impl<'a> AddAssign<&'a LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &'a LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.insert_add(*m, c.clone());
        }
    }
}

impl<'a> SubAssign<&'a LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &'a LaurentPoly) {
        for (m, c) in &rhs.terms {
            self.insert_add(*m, -c.clone());
        }
    }
}

impl<'a, 'b> Add<&'b LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &'b LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a, 'b> Sub<&'b LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &'b LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a, 'b> Mul<&'b LaurentPoly> for &'a LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &'b LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.insert_add(m1.mul(*m2), c1 * c2);
            }
        }
        out
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Terms in ascending grlex order, e.g. "1 - q*t".
        for (idx, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || (m.qe == 0 && m.te == 0) {
                if abs.denom() == &BigInt::one() {
                    parts.push(abs.numer().to_string());
                } else {
                    parts.push(format!("{}/{}", abs.numer(), abs.denom()));
                }
            }
            if m.qe != 0 {
                parts.push(if m.qe == 1 {
                    "q".to_string()
                } else {
                    format!("q^{}", m.qe)
                });
            }
            if m.te != 0 {
                parts.push(if m.te == 1 {
                    "t".to_string()
                } else {
                    format!("t^{}", m.te)
                });
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// gcd of bivariate polynomials (after monomial clearing and denominator
// scaling): primitive PRS in (Z[t])[q] with integer contents.
// ---------------------------------------------------------------------------

type TZ = Vec<BigInt>; // dense in t, ascending, over Z

fn tz_trim(p: &mut TZ) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn tz_is_zero(p: &TZ) -> bool {
    p.is_empty()
}

fn tz_mul(a: &TZ, b: &TZ) -> TZ {
    if tz_is_zero(a) || tz_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    tz_trim(&mut out);
    out
}

fn tz_sub(a: &TZ, b: &TZ) -> TZ {
    let mut out = a.clone();
    if out.len() < b.len() {
        out.resize(b.len(), BigInt::zero());
    }
    for (i, cb) in b.iter().enumerate() {
        out[i] -= cb;
    }
    tz_trim(&mut out);
    out
}

fn tz_int_content(p: &TZ) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = num_integer::Integer::gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn tz_primitive(mut p: TZ) -> TZ {
    let g = tz_int_content(&p);
    if g.is_zero() || g.is_one() {
        return p;
    }
    for c in p.iter_mut() {
        *c /= &g;
    }
    p
}

fn tz_div_exact(a: &TZ, b: &TZ) -> TZ {
    assert!(!tz_is_zero(b));
    if tz_is_zero(a) {
        return Vec::new();
    }
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    while !tz_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let (c, rem) = num_integer::Integer::div_rem(r.last().unwrap(), &lb);
        assert!(rem.is_zero(), "inexact t-division");
        let shift = dr - db;
        q[shift] = c.clone();
        for (j, cb) in b.iter().enumerate() {
            r[j + shift] -= cb * &c;
        }
        tz_trim(&mut r);
    }
    assert!(tz_is_zero(&r), "inexact t-division");
    tz_trim(&mut q);
    q
}

/// Pseudo-remainder lc(b)^k a mod b in Z[t].
fn tz_pseudo_rem(a: &TZ, b: &TZ) -> TZ {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while !tz_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c *= &lb;
        }
        for (j, cb) in b.iter().enumerate() {
            r[j + shift] -= cb * &lr;
        }
        tz_trim(&mut r);
    }
    r
}

/// Primitive-PRS gcd in Z[t], primitive output.
fn tz_gcd(a: &TZ, b: &TZ) -> TZ {
    let mut x = tz_primitive(a.clone());
    let mut y = tz_primitive(b.clone());
    if tz_is_zero(&x) {
        return y;
    }
    if tz_is_zero(&y) {
        return x;
    }
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !tz_is_zero(&y) {
        let r = tz_primitive(tz_pseudo_rem(&x, &y));
        x = y;
        y = r;
    }
    if x.last().map(|c| c.is_negative()).unwrap_or(false) {
        for c in x.iter_mut() {
            *c = -c.clone();
        }
    }
    x
}

type QZ = Vec<TZ>; // dense in q, ascending; coefficients in Z[t]

fn qz_trim(p: &mut QZ) {
    while p.last().map(|c| tz_is_zero(c)).unwrap_or(false) {
        p.pop();
    }
}

fn qz_is_zero(p: &QZ) -> bool {
    p.is_empty()
}

fn qz_content(p: &QZ) -> TZ {
    let mut g: TZ = Vec::new();
    for c in p {
        if !tz_is_zero(c) {
            g = if tz_is_zero(&g) {
                tz_primitive(c.clone())
            } else {
                tz_gcd(&g, c)
            };
            if g.len() == 1 && g[0].is_one() {
                return g;
            }
        }
    }
    g
}

fn qz_div_content(p: &QZ, content: &TZ) -> QZ {
    p.iter()
        .map(|c| {
            if tz_is_zero(c) {
                Vec::new()
            } else {
                tz_div_exact(c, content)
            }
        })
        .collect()
}

fn qz_mul_tz(p: &QZ, f: &TZ) -> QZ {
    p.iter().map(|c| tz_mul(c, f)).collect()
}

/// Pseudo-remainder in (Z[t])[q].
fn qz_pseudo_rem(a: &QZ, b: &QZ) -> QZ {
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    let mut r = a.clone();
    while !qz_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        let shift = dr - db;
        let mut next: QZ = qz_mul_tz(&r, &lb);
        for (j, cb) in b.iter().enumerate() {
            next[j + shift] = tz_sub(&next[j + shift], &tz_mul(cb, &lr));
        }
        qz_trim(&mut next);
        r = next;
    }
    r
}

fn qz_gcd(a: QZ, b: QZ) -> QZ {
    let mut a = a;
    let mut b = b;
    qz_trim(&mut a);
    qz_trim(&mut b);
    if qz_is_zero(&a) {
        return b;
    }
    if qz_is_zero(&b) {
        return a;
    }
    let ca = qz_content(&a);
    let cb = qz_content(&b);
    let cg = tz_gcd(&ca, &cb);
    let mut x = qz_div_content(&a, &ca);
    let mut y = qz_div_content(&b, &cb);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !qz_is_zero(&y) {
        let mut r = qz_pseudo_rem(&x, &y);
        if !qz_is_zero(&r) {
            let c = qz_content(&r);
            r = qz_div_content(&r, &c);
        }
        x = y;
        y = r;
    }
    qz_mul_tz(&x, &cg)
}

impl LaurentPoly {
    /// Integer model after clearing denominators; the rational scale is
    /// irrelevant for gcd purposes.
    fn to_qz(&self) -> QZ {
        let min = self.min_exponents().unwrap_or(Mono::ONE);
        let mut denom_lcm = BigInt::one();
        for c in self.terms.values() {
            denom_lcm = num_integer::Integer::lcm(&denom_lcm, c.denom());
        }
        let mut qp: QZ = Vec::new();
        for (m, c) in &self.terms {
            let qi = (m.qe - min.qe) as usize;
            let ti = (m.te - min.te) as usize;
            if qp.len() <= qi {
                qp.resize(qi + 1, Vec::new());
            }
            if qp[qi].len() <= ti {
                qp[qi].resize(ti + 1, BigInt::zero());
            }
            qp[qi][ti] = c.numer() * (&denom_lcm / c.denom());
        }
        qp
    }

    fn from_qz(qp: &QZ) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (qi, tp) in qp.iter().enumerate() {
            for (ti, c) in tp.iter().enumerate() {
                out.insert_add(
                    Mono::new(qi as i64, ti as i64),
                    BigRational::from_integer(c.clone()),
                );
            }
        }
        out
    }

    /// Polynomial gcd up to units: monomial factors are ignored and the
    /// result is normalized so its grlex-minimal coefficient is +1.
    pub fn gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
        if a.is_zero() || b.is_zero() || a.is_monomial() || b.is_monomial() {
            return LaurentPoly::one();
        }
        let g = qz_gcd(a.to_qz(), b.to_qz());
        let mut out = LaurentPoly::from_qz(&g);
        if out.is_zero() || out.is_monomial() {
            return LaurentPoly::one();
        }
        let min = out.min_exponents().unwrap();
        if min != Mono::ONE {
            out = out.shift(Mono::new(-min.qe, -min.te));
        }
        let (_, c0) = out.trailing().unwrap();
        let inv = c0.recip();
        out.scale(&inv)
    }

    /// Trailing term under the fixed grlex order (the minimal one).
    pub fn trailing(&self) -> Option<(Mono, &BigRational)> {
        self.terms.iter().next().map(|(m, c)| (*m, c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn br(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn mono_order_is_graded_lex_q_first() {
        assert!(Mono::new(1, 0) > Mono::new(0, 1)); // q > t
        assert!(Mono::new(1, 1) > Mono::new(1, 0)); // qt > q
        assert!(Mono::new(0, 0) > Mono::new(-1, 0)); // 1 > q^-1
        assert!(Mono::new(2, -1) > Mono::new(1, 0)); // same degree, more q
    }

    #[test]
    fn arithmetic_basics() {
        let q = LaurentPoly::q();
        let t = LaurentPoly::t();
        let s = &q + &t;
        assert_eq!(s.coeff(1, 0), BigRational::one());
        let p = &s * &s;
        assert_eq!(p.coeff(1, 1), br(2));
        let z = &p - &p;
        assert!(z.is_zero());
    }

    #[test]
    fn div_exact_roundtrip() {
        let one = LaurentPoly::one();
        let q = LaurentPoly::q();
        let a = &one - &(&q * &LaurentPoly::t()); // 1 - qt
        let b = &one - &q; // 1 - q
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a), b);
        assert_eq!(prod.div_exact(&b), a);
    }

    #[test]
    fn gcd_finds_common_factor() {
        let one = LaurentPoly::one();
        let q = LaurentPoly::q();
        let t = LaurentPoly::t();
        let f = &one - &q;
        let g = &one - &t;
        let h = &one - &(&q * &t);
        let a = &f * &h;
        let b = &g * &h;
        let d = LaurentPoly::gcd(&a, &b);
        // normalized so the grlex-minimal coefficient is +1, which is h itself
        assert_eq!(d, h);
    }

    #[test]
    fn gcd_of_coprime_is_one() {
        let one = LaurentPoly::one();
        let a = &one - &LaurentPoly::q();
        let b = &one - &LaurentPoly::t();
        assert!(LaurentPoly::gcd(&a, &b).is_one());
    }

    #[test]
    fn display_sorted_ascending() {
        let one = LaurentPoly::one();
        let qt = &LaurentPoly::q() * &LaurentPoly::t();
        let p = &one - &qt;
        assert_eq!(p.to_string(), "1 - q*t");
        let m = LaurentPoly::monomial(-2, 0, br(3));
        assert_eq!(m.to_string(), "3*q^-2");
    }
}
