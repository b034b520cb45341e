//! Univariate series expansion over an abstract scalar field, plus a small
//! bivariate Laurent type used for g(z,w), h-polynomials and symmetric
//! Laurent arguments.

use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::One;

use super::ratfunc::Scalar;
use super::QtError;

/// Where to expand an [`AuxRatFunc`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ExpandAt {
    Zero,
    Infinity,
}

/// Fraction of two polynomials in one auxiliary variable, coefficients in F.
/// Coefficient vectors are ascending in the variable.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct AuxRatFunc<F> {
    pub num: Vec<F>,
    pub den: Vec<F>,
}

fn trim<F: Scalar>(v: &mut Vec<F>) {
    while v.last().map(|c| c.is_zero()).unwrap_or(false) {
        v.pop();
    }
}

fn leading_zeros<F: Scalar>(v: &[F]) -> usize {
    v.iter().take_while(|c| c.is_zero()).count()
}

impl<F: Scalar> AuxRatFunc<F> {
    pub fn new(mut num: Vec<F>, mut den: Vec<F>) -> Result<Self, QtError> {
        trim(&mut num);
        trim(&mut den);
        if den.is_empty() {
            return Err(QtError::DivisionByZero);
        }
        Ok(AuxRatFunc { num, den })
    }

    /// Multiply the fraction by another polynomial-over-polynomial pair.
    pub fn mul_fraction(&self, num: &[F], den: &[F]) -> Result<Self, QtError> {
        AuxRatFunc::new(poly_mul(&self.num, num), poly_mul(&self.den, den))
    }

    /// Coefficients `c_0..c_order` of the expansion at the requested point:
    /// at zero these are coefficients of `v^j`; at infinity of `v^-j`.
    pub fn expand(&self, at: ExpandAt, order: usize) -> Result<Vec<F>, QtError> {
        let (num, den) = match at {
            ExpandAt::Zero => (self.num.clone(), self.den.clone()),
            ExpandAt::Infinity => {
                // f(1/u) = u^(deg den - deg num) * rev(num)(u) / rev(den)(u)
                let mut n: Vec<F> = self.num.iter().rev().cloned().collect();
                let mut d: Vec<F> = self.den.iter().rev().cloned().collect();
                let dn = self.num.len() as i64 - 1;
                let dd = self.den.len() as i64 - 1;
                // pad so both have an explicit shift through u^(dd-dn)
                if dd > dn {
                    let mut shifted = vec![F::zero(); (dd - dn) as usize];
                    shifted.append(&mut n);
                    n = shifted;
                } else if dn > dd {
                    let mut shifted = vec![F::zero(); (dn - dd) as usize];
                    shifted.append(&mut d);
                    d = shifted;
                }
                (n, d)
            }
        };
        series_divide(&num, &den, order)
    }
}

/// Polynomial product of coefficient vectors.
pub fn poly_mul<F: Scalar>(a: &[F], b: &[F]) -> Vec<F> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![F::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&ca.mul(cb));
        }
    }
    out
}

/// Truncated series division num/den to the given order; the denominator may
/// have leading zeros as long as the numerator cancels them.
pub fn series_divide<F: Scalar>(num: &[F], den: &[F], order: usize) -> Result<Vec<F>, QtError> {
    let vn = leading_zeros(num);
    let vd = leading_zeros(den);
    if vd >= den.len() {
        return Err(QtError::DivisionByZero);
    }
    if num.iter().all(|c| c.is_zero()) {
        return Ok(vec![F::zero(); order + 1]);
    }
    if vn < vd {
        return Err(QtError::UncancellablePole {
            order: (vd - vn) as u32,
        });
    }
    let shift = vn - vd;
    let n = &num[vn..];
    let d = &den[vd..];
    let d0inv = d[0].inv()?;
    let inner = if order >= shift { order - shift } else { 0 };
    let mut coeffs: Vec<F> = Vec::with_capacity(inner + 1);
    for j in 0..=inner {
        let mut acc = if j < n.len() { n[j].clone() } else { F::zero() };
        for i in 1..=j.min(d.len() - 1) {
            acc = acc.sub(&d[i].mul(&coeffs[j - i]));
        }
        coeffs.push(acc.mul(&d0inv));
    }
    let mut out = vec![F::zero(); shift.min(order + 1)];
    out.extend(coeffs.into_iter().take(order + 1 - out.len()));
    out.resize(order + 1, F::zero());
    Ok(out)
}

/// Truncated exponential of a series with zero constant term.
pub fn series_exp<F: Scalar>(s: &[F], order: usize) -> Vec<F> {
    assert!(s.first().map(|c| c.is_zero()).unwrap_or(true));
    let mut out = vec![F::zero(); order + 1];
    out[0] = F::one();
    let mut power = out.clone(); // s^k truncated
    let mut factorial = BigRational::one();
    for k in 1..=order {
        power = truncated_mul(&power, s, order);
        factorial *= BigRational::from_integer(k.into());
        let inv = F::from_rat(factorial.recip());
        for j in 0..=order {
            out[j] = out[j].add(&power[j].mul(&inv));
        }
    }
    out
}

pub fn truncated_mul<F: Scalar>(a: &[F], b: &[F], order: usize) -> Vec<F> {
    let mut out = vec![F::zero(); order + 1];
    for i in 0..a.len().min(order + 1) {
        if a[i].is_zero() {
            continue;
        }
        for j in 0..b.len().min(order + 1 - i) {
            out[i + j] = out[i + j].add(&a[i].mul(&b[j]));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Bivariate Laurent polynomials in two auxiliary slots (z, w) or (z1, z2).
// ---------------------------------------------------------------------------

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct ZLaurent<F> {
    terms: BTreeMap<(i64, i64), F>,
}

impl<F: Scalar> ZLaurent<F> {
    pub fn zero() -> Self {
        ZLaurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, F::one())
    }

    pub fn monomial(a: i64, b: i64, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        ZLaurent { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(i64, i64), &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: i64, b: i64) -> F {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, a: i64, b: i64, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((a, b)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &o.terms {
            out.add_term(a, b, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (&(a, b), c) in &o.terms {
            out.add_term(a, b, c.neg());
        }
        out
    }

    pub fn neg(&self) -> Self {
        ZLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = ZLaurent::zero();
        for (&(a1, b1), c1) in &self.terms {
            for (&(a2, b2), c2) in &o.terms {
                out.add_term(a1 + a2, b1 + b2, c1.mul(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return ZLaurent::zero();
        }
        ZLaurent {
            terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect(),
        }
    }

    /// Swap the two variable slots.
    pub fn swapped(&self) -> Self {
        ZLaurent {
            terms: self
                .terms
                .iter()
                .map(|(&(a, b), c)| ((b, a), c.clone()))
                .collect(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.swapped()
    }

    /// Substitute scalars for the two slots (slots carry Laurent exponents,
    /// so both values must be invertible when negative exponents occur).
    pub fn eval(&self, x: &F, y: &F) -> Result<F, QtError> {
        let mut acc = F::zero();
        for (&(a, b), c) in &self.terms {
            acc = acc.add(&c.mul(&x.pow(a)?).mul(&y.pow(b)?));
        }
        Ok(acc)
    }
}

impl<F: Scalar> fmt::Display for ZLaurent<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (&(a, b), c)) in self.terms.iter().enumerate() {
            if idx > 0 {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            if a != 0 {
                write!(f, "*z1^{}", a)?;
            }
            if b != 0 {
                write!(f, "*z2^{}", b)?;
            }
        }
        Ok(())
    }
}

/// The structure polynomial g(z,w) = (z - q1 w)(z - q2 w)(z - q3 w) with
/// q1 = q, q2 = t, q3 = 1/(qt); returned expanded, with the factored form
/// recomputed and compared on construction.
pub fn g_poly<F: Scalar>() -> ZLaurent<F> {
    let sigma1 = F::q().add(&F::t()).add(&F::qt_mono(-1, -1));
    let sigma2 = F::qt_mono(1, 1).add(&F::qt_mono(-1, 0)).add(&F::qt_mono(0, -1));
    let mut g = ZLaurent::zero();
    g.add_term(3, 0, F::one());
    g.add_term(2, 1, sigma1.neg());
    g.add_term(1, 2, sigma2);
    g.add_term(0, 3, F::one().neg());
    let factored = {
        let factor = |c: F| {
            let mut f = ZLaurent::zero();
            f.add_term(1, 0, F::one());
            f.add_term(0, 1, c.neg());
            f
        };
        factor(F::q())
            .mul(&factor(F::t()))
            .mul(&factor(F::qt_mono(-1, -1)))
    };
    debug_assert_eq!(g, factored);
    g
}

/// g with the variable slots swapped: g(w,z).
pub fn g_poly_swapped<F: Scalar>() -> ZLaurent<F> {
    g_poly::<F>().swapped()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qt::RatFunc;

    fn rf(n: i64) -> RatFunc {
        RatFunc::from_int(n)
    }

    #[test]
    fn geometric_series_at_infinity() {
        // 1/(1 - z^-1) at infinity, order 3 -> [1,1,1,1]
        // As a fraction in z: z/(z-1).
        let f = AuxRatFunc::new(
            vec![RatFunc::zero(), RatFunc::one()],
            vec![rf(-1), RatFunc::one()],
        )
        .unwrap();
        let c = f.expand(ExpandAt::Infinity, 3).unwrap();
        assert_eq!(c, vec![rf(1), rf(1), rf(1), rf(1)]);
    }

    #[test]
    fn psi_prefactor_expansion() {
        // -(1 - q^-1 t^-1 z^-1)/(1 - z^-1) at infinity, order 1
        //   -> [-1, -(1 - q^-1 t^-1)]
        // In z: -(z - q^-1 t^-1)/(z - 1).
        let qtinv = RatFunc::qt_mono(-1, -1);
        let f = AuxRatFunc::new(
            vec![qtinv.clone(), rf(-1)],
            vec![rf(-1), RatFunc::one()],
        )
        .unwrap();
        let c = f.expand(ExpandAt::Infinity, 1).unwrap();
        assert_eq!(c[0], rf(-1));
        assert_eq!(c[1], (&qtinv - &RatFunc::one()));
    }

    #[test]
    fn expansion_at_zero_with_shift() {
        // z/(z-1) at 0, order 2 -> [0, -1, -1]
        let f = AuxRatFunc::new(
            vec![RatFunc::zero(), RatFunc::one()],
            vec![rf(-1), RatFunc::one()],
        )
        .unwrap();
        let c = f.expand(ExpandAt::Zero, 2).unwrap();
        assert_eq!(c, vec![rf(0), rf(-1), rf(-1)]);
    }

    #[test]
    fn pole_is_an_error() {
        // 1/z at 0 has an uncancellable pole.
        let f = AuxRatFunc::new(vec![RatFunc::one()], vec![RatFunc::zero(), RatFunc::one()])
            .unwrap();
        assert!(matches!(
            f.expand(ExpandAt::Zero, 2),
            Err(QtError::UncancellablePole { .. })
        ));
    }

    #[test]
    fn resum_identity() {
        // (sum c_j v^j) * den == num to the requested order.
        let num = vec![RatFunc::one(), RatFunc::q()];
        let den = vec![RatFunc::one(), RatFunc::t().neg(), RatFunc::q()];
        let f = AuxRatFunc::new(num.clone(), den.clone()).unwrap();
        let order = 6;
        let c = f.expand(ExpandAt::Zero, order).unwrap();
        let prod = truncated_mul(&c, &den, order);
        for (j, p) in prod.iter().enumerate() {
            let expect = if j < num.len() {
                num[j].clone()
            } else {
                RatFunc::zero()
            };
            assert_eq!(*p, expect, "coefficient {j}");
        }
    }

    #[test]
    fn g_poly_coefficients() {
        let g = g_poly::<RatFunc>();
        assert_eq!(g.coeff(3, 0), RatFunc::one());
        let sigma1 = RatFunc::q()
            .add(&RatFunc::t())
            .add(&RatFunc::qt_mono(-1, -1));
        assert_eq!(g.coeff(2, 1), sigma1.neg());
        // g(1,1) = (1-q)(1-t)(1-1/(qt))
        let v = g.eval(&RatFunc::one(), &RatFunc::one()).unwrap();
        let one = RatFunc::one();
        let want = one
            .sub(&RatFunc::q())
            .mul(&one.sub(&RatFunc::t()))
            .mul(&one.sub(&RatFunc::qt_mono(-1, -1)));
        assert_eq!(v, want);
    }

    #[test]
    fn series_exp_of_log_geometric() {
        // exp(sum_{m>=1} z^m/m) = 1/(1-z)
        let order = 7;
        let mut s = vec![RatFunc::zero(); order + 1];
        for (m, slot) in s.iter_mut().enumerate().skip(1) {
            *slot = RatFunc::from_rat(
                BigRational::from_integer(1.into()) / BigRational::from_integer((m as i64).into()),
            );
        }
        let e = series_exp(&s, order);
        for c in e {
            assert_eq!(c, RatFunc::one());
        }
    }
}
