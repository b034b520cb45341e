//! Reduced fractions of Laurent polynomials: the scalar field Q(q,t).

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::laurent::{pow_rational, LaurentPoly, Mono};
use super::QtError;

/// A rational function in `q`, `t` kept in canonical form: the denominator
/// is a polynomial with nonnegative exponents, nonzero constant term, unit
/// leading coefficient under grlex, and `gcd(num, den)` is a unit.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RatFunc {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self, QtError> {
        if den.is_zero() {
            return Err(QtError::DivisionByZero);
        }
        Ok(Self::reduced(num, den))
    }

    fn reduced(num: LaurentPoly, den: LaurentPoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            };
        }
        let g = LaurentPoly::gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g), den.div_exact(&g))
        };
        Self::normalized_coprime(num, den)
    }

    /// Final normalization when num and den are already known coprime as
    /// polynomials: shift the denominator's monomial part into the numerator
    /// and scale so the denominator's grlex-minimal coefficient is +1.
    fn normalized_coprime(mut num: LaurentPoly, mut den: LaurentPoly) -> Self {
        if num.is_zero() {
            return RatFunc {
                num: LaurentPoly::zero(),
                den: LaurentPoly::one(),
            };
        }
        let dmin = den.min_exponents().unwrap();
        if dmin != Mono::ONE {
            den = den.shift(Mono::new(-dmin.qe, -dmin.te));
            num = num.shift(Mono::new(-dmin.qe, -dmin.te));
        }
        let (_, c0) = den.trailing().unwrap();
        if !c0.is_one() {
            let inv = c0.recip();
            den = den.scale(&inv);
            num = num.scale(&inv);
        }
        RatFunc { num, den }
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rat(BigRational::from_integer(n.into()))
    }

    pub fn from_rat(r: BigRational) -> Self {
        Self::from_poly(LaurentPoly::constant(r))
    }

    /// `c * q^a * t^b`
    pub fn monomial(a: i64, b: i64, c: BigRational) -> Self {
        Self::from_poly(LaurentPoly::monomial(a, b, c))
    }

    pub fn qt_mono(a: i64, b: i64) -> Self {
        Self::monomial(a, b, BigRational::one())
    }

    pub fn q() -> Self {
        Self::qt_mono(1, 0)
    }

    pub fn t() -> Self {
        Self::qt_mono(0, 1)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self, QtError> {
        if self.is_zero() {
            return Err(QtError::DivisionByZero);
        }
        Ok(RatFunc::normalized_coprime(
            self.den.clone(),
            self.num.clone(),
        ))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self, QtError> {
        Ok(self * &other.inv()?)
    }

    pub fn pow(&self, e: i64) -> Result<Self, QtError> {
        if e == 0 {
            return Ok(RatFunc::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = RatFunc::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    /// Exact evaluation at a rational point; errors when the denominator
    /// vanishes there.
    pub fn eval(&self, q0: &BigRational, t0: &BigRational) -> Result<BigRational, QtError> {
        let d = self.den.eval(q0, t0);
        if d.is_zero() {
            return Err(QtError::PoleAtPoint);
        }
        Ok(self.num.eval(q0, t0) / d)
    }
}

fn add_reduced(a: &RatFunc, b: &RatFunc, negate_b: bool) -> RatFunc {
    let bnum = if negate_b { -&b.num } else { b.num.clone() };
    if a.den == b.den {
        let num = &a.num + &bnum;
        if num.is_zero() {
            return RatFunc::zero();
        }
        // common factors of num with the shared denominator are possible
        let g = LaurentPoly::gcd(&num, &a.den);
        if g.is_one() {
            return RatFunc::normalized_coprime(num, a.den.clone());
        }
        return RatFunc::normalized_coprime(num.div_exact(&g), a.den.div_exact(&g));
    }
    // a.num/a.den + b.num/b.den with both fractions reduced: any common
    // factor of the combined numerator and denominator divides g = gcd of
    // the denominators.
    let g = LaurentPoly::gcd(&a.den, &b.den);
    let (da, db) = if g.is_one() {
        (a.den.clone(), b.den.clone())
    } else {
        (a.den.div_exact(&g), b.den.div_exact(&g))
    };
    let num = &(&a.num * &db) + &(&bnum * &da);
    if num.is_zero() {
        return RatFunc::zero();
    }
    let den = &a.den * &db;
    if g.is_one() {
        return RatFunc::normalized_coprime(num, den);
    }
    let h = LaurentPoly::gcd(&num, &g);
    if h.is_one() {
        RatFunc::normalized_coprime(num, den)
    } else {
        RatFunc::normalized_coprime(num.div_exact(&h), den.div_exact(&h))
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        add_reduced(self, rhs, false)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        add_reduced(self, rhs, true)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero();
        }
        // cross-cancel: both inputs are reduced, so the product of the
        // cross-reduced parts is reduced as well
        let g1 = LaurentPoly::gcd(&self.num, &rhs.den);
        let g2 = LaurentPoly::gcd(&rhs.num, &self.den);
        let n1 = if g1.is_one() {
            self.num.clone()
        } else {
            self.num.div_exact(&g1)
        };
        let d2 = if g1.is_one() {
            rhs.den.clone()
        } else {
            rhs.den.div_exact(&g1)
        };
        let n2 = if g2.is_one() {
            rhs.num.clone()
        } else {
            rhs.num.div_exact(&g2)
        };
        let d1 = if g2.is_one() {
            self.den.clone()
        } else {
            self.den.div_exact(&g2)
        };
        RatFunc::normalized_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            if self.num.num_terms() > 1 {
                write!(f, "({})", self.num)
            } else {
                write!(f, "{}", self.num)
            }
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

fn poly_to_json(p: &LaurentPoly) -> Vec<(i64, i64, String)> {
    p.iter()
        .map(|(m, c)| (m.qe, m.te, c.to_string()))
        .collect()
}

fn poly_from_json(v: &[(i64, i64, String)]) -> Result<LaurentPoly, String> {
    let mut out = LaurentPoly::zero();
    for (a, b, c) in v {
        let r: BigRational = c.parse().map_err(|e| format!("bad rational {c:?}: {e}"))?;
        out += &LaurentPoly::monomial(*a, *b, r);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct RatFuncJson {
    num: Vec<(i64, i64, String)>,
    den: Vec<(i64, i64, String)>,
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        RatFuncJson {
            num: poly_to_json(&self.num),
            den: poly_to_json(&self.den),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatFunc {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = RatFuncJson::deserialize(d)?;
        let num = poly_from_json(&j.num).map_err(D::Error::custom)?;
        let den = poly_from_json(&j.den).map_err(D::Error::custom)?;
        RatFunc::new(num, den).map_err(D::Error::custom)
    }
}

// ---------------------------------------------------------------------------
// Scalar abstraction: the exact symbolic field and a numeric evaluation
// backend at a fixed rational point (q0, t0).
// ---------------------------------------------------------------------------

/// Coefficient field for all operator computations. Implemented by [`RatFunc`]
/// (exact symbolic) and [`PointEval`] (exact rational evaluation at a fixed
/// point, a fast probabilistic pre-filter).
pub trait Scalar:
    Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Result<Self, QtError>;
    /// `c * q^a * t^b`
    fn monomial(c: BigRational, a: i64, b: i64) -> Self;

    fn div(&self, o: &Self) -> Result<Self, QtError> {
        Ok(self.mul(&o.inv()?))
    }

    fn from_rat(r: BigRational) -> Self {
        Self::monomial(r, 0, 0)
    }

    fn from_int(n: i64) -> Self {
        Self::from_rat(BigRational::from_integer(n.into()))
    }

    fn qt_mono(a: i64, b: i64) -> Self {
        Self::monomial(BigRational::one(), a, b)
    }

    fn q() -> Self {
        Self::qt_mono(1, 0)
    }

    fn t() -> Self {
        Self::qt_mono(0, 1)
    }

    fn pow(&self, e: i64) -> Result<Self, QtError> {
        if e == 0 {
            return Ok(Self::one());
        }
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
}

impl Scalar for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn one() -> Self {
        RatFunc::one()
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn inv(&self) -> Result<Self, QtError> {
        RatFunc::inv(self)
    }
    fn monomial(c: BigRational, a: i64, b: i64) -> Self {
        RatFunc::monomial(a, b, c)
    }
}

static EVAL_POINT: std::sync::OnceLock<(BigRational, BigRational)> = std::sync::OnceLock::new();

/// Fix the global evaluation point used by [`PointEval`]. Idempotent; returns
/// an error if a different point was already set in this process.
pub fn set_eval_point(q0: BigRational, t0: BigRational) -> Result<(), QtError> {
    let wanted = (q0, t0);
    let got = EVAL_POINT.get_or_init(|| wanted.clone());
    if *got != wanted {
        return Err(QtError::EvalPointAlreadySet);
    }
    Ok(())
}

pub fn eval_point() -> (BigRational, BigRational) {
    EVAL_POINT
        .get_or_init(|| {
            (
                BigRational::from_integer(2.into()),
                BigRational::from_integer(3.into()),
            )
        })
        .clone()
}

/// Exact rational arithmetic at the fixed evaluation point.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PointEval(pub BigRational);

impl fmt::Display for PointEval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Scalar for PointEval {
    fn zero() -> Self {
        PointEval(BigRational::zero())
    }
    fn one() -> Self {
        PointEval(BigRational::one())
    }
    fn is_zero(&self) -> bool {
        self.0.is_zero()
    }
    fn add(&self, o: &Self) -> Self {
        PointEval(&self.0 + &o.0)
    }
    fn sub(&self, o: &Self) -> Self {
        PointEval(&self.0 - &o.0)
    }
    fn mul(&self, o: &Self) -> Self {
        PointEval(&self.0 * &o.0)
    }
    fn neg(&self) -> Self {
        PointEval(-self.0.clone())
    }
    fn inv(&self) -> Result<Self, QtError> {
        if self.0.is_zero() {
            return Err(QtError::PoleAtPoint);
        }
        Ok(PointEval(self.0.recip()))
    }
    fn monomial(c: BigRational, a: i64, b: i64) -> Self {
        let (q0, t0) = eval_point();
        PointEval(c * pow_rational(&q0, a) * pow_rational(&t0, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse_frac(num: &[(i64, i64, i64)], den: &[(i64, i64, i64)]) -> RatFunc {
        let build = |v: &[(i64, i64, i64)]| {
            let mut p = LaurentPoly::zero();
            for (a, b, c) in v {
                p += &LaurentPoly::monomial(*a, *b, BigRational::from_integer((*c).into()));
            }
            p
        };
        RatFunc::new(build(num), build(den)).unwrap()
    }

    #[test]
    fn telescoping_cancellation() {
        // ((1-qt)/(1-q)) * ((1-q)/(1-t)) = (1-qt)/(1-t)
        let a = parse_frac(&[(0, 0, 1), (1, 1, -1)], &[(0, 0, 1), (1, 0, -1)]);
        let b = parse_frac(&[(0, 0, 1), (1, 0, -1)], &[(0, 0, 1), (0, 1, -1)]);
        let want = parse_frac(&[(0, 0, 1), (1, 1, -1)], &[(0, 0, 1), (0, 1, -1)]);
        assert_eq!(&a * &b, want);
    }

    #[test]
    fn inverse_and_cancellation_to_zero() {
        let qmt = parse_frac(&[(1, 0, 1), (0, 1, -1)], &[(0, 0, 1)]); // q - t
        let inv = qmt.inv().unwrap();
        assert!((&qmt * &inv).is_one());
        let qpt = parse_frac(&[(1, 0, 1), (0, 1, 1)], &[(0, 0, 1)]);
        assert!((&qpt - &qpt).is_zero());
    }

    #[test]
    fn canonical_denominator_normalization() {
        // 1/(2t - 2t^2): denominator becomes 1 - t with the monomial and
        // scale pushed into the numerator.
        let f = parse_frac(&[(0, 0, 1)], &[(0, 1, 2), (0, 2, -2)]);
        let dmin = f.den().trailing().unwrap();
        assert!(dmin.1.is_one());
        assert!(!f.den().coeff(0, 0).is_zero());
        assert_eq!(f.den().to_string(), "1 - t");
        // f * den = num exactly
        let back = &f * &RatFunc::from_poly(f.den().clone());
        assert_eq!(back, RatFunc::from_poly(f.num().clone()));
    }

    #[test]
    fn display_canonical_string() {
        let f = parse_frac(&[(0, 0, 1), (1, 1, -1)], &[(0, 0, 1), (0, 1, -1)]);
        assert_eq!(f.to_string(), "(1 - q*t)/(1 - t)");
    }

    #[test]
    fn eval_matches_spec_examples() {
        let f = parse_frac(&[(0, 0, 1), (1, 1, -1)], &[(0, 0, 1), (1, 0, -1)]);
        let v = f
            .eval(
                &BigRational::from_integer(2.into()),
                &BigRational::from_integer(3.into()),
            )
            .unwrap();
        assert_eq!(v, BigRational::from_integer(5.into()));
        let pole = parse_frac(&[(0, 0, 1)], &[(1, 0, 1), (0, 1, -1)]);
        assert!(pole
            .eval(
                &BigRational::from_integer(2.into()),
                &BigRational::from_integer(2.into())
            )
            .is_err());
    }

    #[test]
    fn json_roundtrip() {
        let f = parse_frac(&[(0, 0, 1), (1, 1, -1)], &[(0, 0, 1), (0, 1, -1)]);
        let s = serde_json::to_string(&f).unwrap();
        let g: RatFunc = serde_json::from_str(&s).unwrap();
        assert_eq!(f, g);
    }
}
