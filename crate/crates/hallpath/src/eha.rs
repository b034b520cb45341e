//! Derived elements of the spherical world: e_m, f_m, phi, A, Y, the psi
//! eigenvalue series, h-polynomials, and the independent short-form oracle
//! actions on the modified Macdonald basis.

use thiserror::Error;

use crate::combinatorics::{c_coeff, cstar_coeff, CombError, Partition};
use crate::polyrep::{act_word, ActError, State, TruncationPolicy, Vect};
use crate::qt::{
    series_exp, truncated_mul, AuxRatFunc, ExpandAt, QtError, Scalar, ZLaurent,
};
use crate::word::{Letter, Word};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum EhaError {
    #[error("psi dual-method disagreement on {lambda} at order {index}: rational {rational}, exponential {exponential}")]
    PsiMethodMismatch {
        lambda: String,
        index: usize,
        rational: String,
        exponential: String,
    },
    #[error(transparent)]
    Act(#[from] ActError),
    #[error(transparent)]
    Comb(#[from] CombError),
    #[error(transparent)]
    Qt(#[from] QtError),
}

/// e_m = 1_0 d- z1^m d+ 1_0.
pub fn e_word(m: i64) -> Word {
    let mut letters = vec![Letter::DMinus];
    if m != 0 {
        letters.push(Letter::Z { i: 1, a: m });
    }
    letters.push(Letter::DPlus);
    Word::new(letters, 0).expect("e word is well typed")
}

/// f_m = 1_0 d+ z1^m d- 1_0.
pub fn f_word(m: i64) -> Word {
    let mut letters = vec![Letter::DPlus];
    if m != 0 {
        letters.push(Letter::Z { i: 1, a: m });
    }
    letters.push(Letter::DMinus);
    Word::new(letters, 0).expect("f word is well typed")
}

/// A_{m_1,...,m_n} = 1_0 d- z1^{m_1} phi ... phi z1^{m_n} 1_1.
pub fn a_word(ms: &[i64]) -> Word {
    assert!(!ms.is_empty());
    let mut letters = vec![Letter::DMinus];
    for (idx, &m) in ms.iter().enumerate() {
        if idx > 0 {
            letters.push(Letter::Phi);
        }
        if m != 0 {
            letters.push(Letter::Z { i: 1, a: m });
        }
    }
    Word::new(letters, 1).expect("A word is well typed")
}

/// Y_{m_1,...,m_n} = A_{m_1,...,m_n} d+ 1_0.
pub fn y_word(ms: &[i64]) -> Word {
    let a = a_word(ms);
    let mut letters = a.letters().to_vec();
    letters.push(Letter::DPlus);
    Word::new(letters, 0).expect("Y word is well typed")
}

pub fn e_act<F: Scalar>(
    m: i64,
    v: &Vect<F>,
    policy: &TruncationPolicy,
) -> Result<Vect<F>, ActError> {
    act_word(&e_word(m), v, policy)
}

pub fn f_act<F: Scalar>(
    m: i64,
    v: &Vect<F>,
    policy: &TruncationPolicy,
) -> Result<Vect<F>, ActError> {
    act_word(&f_word(m), v, policy)
}

pub fn y_act<F: Scalar>(
    ms: &[i64],
    v: &Vect<F>,
    policy: &TruncationPolicy,
) -> Result<Vect<F>, ActError> {
    act_word(&y_word(ms), v, policy)
}

pub fn a_act<F: Scalar>(
    ms: &[i64],
    v: &Vect<F>,
    policy: &TruncationPolicy,
) -> Result<Vect<F>, ActError> {
    act_word(&a_word(ms), v, policy)
}

/// Independent oracle: the short form of the elliptic Hall generator action,
/// e~_m I_lambda = -(1-q)^-1 (1-t)^-1 sum_x c(lambda;x) x^m I_{lambda+x},
/// computed directly without passing through level 1.
pub fn ft_e_act<F: Scalar>(m: i64, v: &Vect<F>) -> Result<Vect<F>, EhaError> {
    let norm = F::one()
        .sub(&F::q())
        .mul(&F::one().sub(&F::t()))
        .inv()?
        .neg();
    let mut out = Vect::zero();
    for (s, coeff) in v.iter() {
        debug_assert_eq!(s.level(), 0);
        let lambda = s.lambda();
        for x in lambda.addable_boxes() {
            let (a, b) = x.content_exps();
            let c = c_coeff::<F>(lambda, x)?
                .mul(&F::qt_mono(a * m, b * m))
                .mul(&norm);
            out.add_term(State::level_zero(lambda.add_box(x)?), coeff.mul(&c));
        }
    }
    Ok(out)
}

/// Independent oracle: f~_m I_mu = sum_x c*(mu;x) x^m I_{mu-x}.
pub fn ft_f_act<F: Scalar>(m: i64, v: &Vect<F>) -> Result<Vect<F>, EhaError> {
    let mut out = Vect::zero();
    for (s, coeff) in v.iter() {
        debug_assert_eq!(s.level(), 0);
        let mu = s.lambda();
        for x in mu.removable_boxes() {
            let (a, b) = x.content_exps();
            let c = cstar_coeff::<F>(mu, x)?.mul(&F::qt_mono(a * m, b * m));
            out.add_term(State::level_zero(mu.remove_box(x)?), coeff.mul(&c));
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PsiSign {
    Plus,
    Minus,
}

/// h_s(z1,z2) = (z1^(s+1) - z2^(s+1))/(z1 - z2), the symmetric complete
/// homogeneous Laurent polynomial; three-case closed form.
pub fn h_poly<F: Scalar>(s: i64) -> ZLaurent<F> {
    if s == -1 {
        return ZLaurent::zero();
    }
    if s >= 0 {
        let mut out = ZLaurent::zero();
        for a in 0..=s {
            out.add_term(s - a, a, F::one());
        }
        return out;
    }
    // s <= -2: h_s = -(z1 z2)^(s+1) h_{-s-2}
    let inner = h_poly::<F>(-s - 2);
    let mut out = ZLaurent::zero();
    for (&(a, b), c) in inner.iter() {
        out.add_term(a + s + 1, b + s + 1, c.neg());
    }
    out
}

/// Power sum of box contents: sum over boxes of lambda of content^m.
pub fn power_sum<F: Scalar>(lambda: &Partition, m: i64) -> F {
    let mut acc = F::zero();
    for b in lambda.boxes() {
        let (a, t) = b.content_exps();
        acc = acc.add(&F::qt_mono(a * m, t * m));
    }
    acc
}

/// Eigenvalue-series coefficients psi^+/-_m on I_lambda for m <= order,
/// computed BOTH from the rational product form and from the truncated
/// exponential of power sums; a disagreement is a hard failure.
///
/// For psi^+ the series variable is z^-1 (expansion at infinity); for psi^-
/// it is z (expansion at zero), so `coeffs[m]` is the coefficient of z^(-m)
/// resp. z^(+m). Memoized per thread (the stored prefix is reused when a
/// shorter order is requested).
pub fn psi_coeffs<F: Scalar>(
    sign: PsiSign,
    lambda: &Partition,
    order: usize,
) -> Result<Vec<F>, EhaError> {
    use std::any::{Any, TypeId};
    use std::cell::RefCell;
    use std::collections::HashMap;
    thread_local! {
        static PSI_CACHE: RefCell<HashMap<(TypeId, bool, Vec<u32>), Box<dyn Any>>> =
            RefCell::new(HashMap::new());
    }
    let key = (
        TypeId::of::<F>(),
        matches!(sign, PsiSign::Plus),
        lambda.parts().to_vec(),
    );
    let hit: Option<Vec<F>> = PSI_CACHE.with(|c| {
        c.borrow().get(&key).and_then(|v| {
            let stored = v.downcast_ref::<Vec<F>>().expect("cache type");
            if stored.len() > order {
                Some(stored[..=order].to_vec())
            } else {
                None
            }
        })
    });
    if let Some(prefix) = hit {
        return Ok(prefix);
    }
    let full = psi_coeffs_uncached::<F>(sign, lambda, order)?;
    PSI_CACHE.with(|c| {
        c.borrow_mut().insert(key, Box::new(full.clone()));
    });
    Ok(full)
}

fn psi_coeffs_uncached<F: Scalar>(
    sign: PsiSign,
    lambda: &Partition,
    order: usize,
) -> Result<Vec<F>, EhaError> {
    let rational = psi_rational::<F>(sign, lambda, order)?;
    let exponential = psi_exponential::<F>(sign, lambda, order)?;
    for (i, (r, e)) in rational.iter().zip(exponential.iter()).enumerate() {
        if r != e {
            return Err(EhaError::PsiMethodMismatch {
                lambda: lambda.to_string(),
                index: i,
                rational: r.to_string(),
                exponential: e.to_string(),
            });
        }
    }
    Ok(rational)
}

/// Rational product form expanded at the psi-orientation.
fn psi_rational<F: Scalar>(
    sign: PsiSign,
    lambda: &Partition,
    order: usize,
) -> Result<Vec<F>, EhaError> {
    // In the variable u = z^-1 the eigenvalue is
    //   -(1 - (qt)^-1 u)/(1 - u) * prod_box
    //     (1 - q^-1 B u)(1 - t^-1 B u)(1 - qt B u)
    //   / ((1 - q B u)(1 - t B u)(1 - (qt)^-1 B u)).
    // psi^+ expands this at u = 0. psi^- expands the same rational function
    // in z at z = 0; each factor (1 - cu) = (z - c)/z and the z powers
    // cancel (equal counts up and down), leaving (z - c) factors.
    let lin_u = |c: F| vec![F::one(), c.neg()]; // 1 - c u
    let lin_z = |c: F| vec![c.neg(), F::one()]; // z - c
    let lin: &dyn Fn(F) -> Vec<F> = match sign {
        PsiSign::Plus => &lin_u,
        PsiSign::Minus => &lin_z,
    };
    let mut num = lin(F::qt_mono(-1, -1));
    num = num.iter().map(|c| c.neg()).collect();
    let mut den = lin(F::one());
    for b in lambda.boxes() {
        let (a, t) = b.content_exps();
        let m = |dq: i64, dt: i64| F::qt_mono(a + dq, t + dt);
        for f in [m(-1, 0), m(0, -1), m(1, 1)] {
            num = crate::qt::poly_mul(&num, &lin(f));
        }
        for f in [m(1, 0), m(0, 1), m(-1, -1)] {
            den = crate::qt::poly_mul(&den, &lin(f));
        }
    }
    let fr = AuxRatFunc::new(num, den)?;
    Ok(fr.expand(ExpandAt::Zero, order)?)
}

/// Exponential form through Delta eigenvalues: prefactor times
/// exp(-sum u^m/m D_m (1-q^m)(1-t^m)(1-(qt)^-m)) for psi^+ (D_m the
/// Delta_{p_m} eigenvalue), and exp(+sum z^m/m D*_m (...)) for psi^-.
fn psi_exponential<F: Scalar>(
    sign: PsiSign,
    lambda: &Partition,
    order: usize,
) -> Result<Vec<F>, EhaError> {
    let mut log_series = vec![F::zero(); order + 1];
    for m in 1..=order {
        let mi = m as i64;
        let c3 = F::one()
            .sub(&F::qt_mono(mi, 0))
            .mul(&F::one().sub(&F::qt_mono(0, mi)))
            .mul(&F::one().sub(&F::qt_mono(-mi, -mi)));
        let inv_m = F::from_rat(num_rational::BigRational::new(1.into(), mi.into()));
        let (d, s) = match sign {
            PsiSign::Plus => (power_sum::<F>(lambda, mi), true),
            PsiSign::Minus => (power_sum::<F>(lambda, -mi), false),
        };
        let term = inv_m.mul(&d).mul(&c3);
        log_series[m] = if s { term.neg() } else { term };
    }
    let e = series_exp(&log_series, order);
    // prefactor expanded in the matching variable
    let prefactor = match sign {
        PsiSign::Plus => {
            // -(1 - (qt)^-1 u)/(1 - u) at u = 0
            AuxRatFunc::new(
                vec![F::one().neg(), F::qt_mono(-1, -1)],
                vec![F::one(), F::one().neg()],
            )?
        }
        PsiSign::Minus => {
            // -(z - (qt)^-1)/(z - 1) at z = 0
            AuxRatFunc::new(
                vec![F::qt_mono(-1, -1), F::one().neg()],
                vec![F::one().neg(), F::one()],
            )?
        }
    };
    let p = prefactor.expand(ExpandAt::Zero, order)?;
    Ok(truncated_mul(&p, &e, order))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyrep::enumerate_states;
    use crate::qt::RatFunc;

    type V = Vect<RatFunc>;

    fn pol() -> TruncationPolicy {
        TruncationPolicy::new(16, 8)
    }

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn iv(parts: &[u32]) -> V {
        V::from_state(State::level_zero(p(parts)))
    }

    #[test]
    fn e_and_f_basic_actions() {
        // e_0 I_empty = I_(1) under the literal d+ sign convention (s = +1).
        let out = e_act(0, &iv(&[]), &pol()).unwrap();
        assert_eq!(out, iv(&[1]));
        // f_0 I_empty = 0.
        assert!(f_act(0, &iv(&[]), &pol()).unwrap().is_zero());
        // f_1 I_(1) = -c*((1);(1,1)) * 1^1 * I_empty = -I_empty.
        let out = f_act(1, &iv(&[1]), &pol()).unwrap();
        assert_eq!(out, iv(&[]).scale(&RatFunc::one().neg()));
    }

    #[test]
    fn ft_oracle_examples() {
        // e~_0 I_empty = (1-q)^-1(1-t)^-1 I_(1)
        let out = ft_e_act(0, &iv(&[])).unwrap();
        let want = iv(&[1]).scale(
            &RatFunc::one()
                .sub(&RatFunc::q())
                .mul(&RatFunc::one().sub(&RatFunc::t()))
                .inv()
                .unwrap(),
        );
        assert_eq!(out, want);
        // same for every m since the only addable box has content 1
        for m in [-2i64, 1, 3] {
            assert_eq!(ft_e_act(m, &iv(&[])).unwrap(), want);
        }
        // f~_0 I_(1) = I_empty
        assert_eq!(ft_f_act(0, &iv(&[1])).unwrap(), iv(&[]));
    }

    #[test]
    fn e_matches_ft_up_to_global_scalar() {
        // e_m = s (1-q)(1-t) e~_m with one global sign s; here s = +1.
        let scalar = RatFunc::one()
            .sub(&RatFunc::q())
            .mul(&RatFunc::one().sub(&RatFunc::t()));
        for s in enumerate_states(0, 4) {
            let v = V::from_state(s);
            for m in -2..=2 {
                let lhs = e_act(m, &v, &pol()).unwrap();
                let rhs = ft_e_act(m, &v).unwrap().scale(&scalar);
                assert_eq!(lhs, rhs, "m = {m}");
            }
        }
    }

    #[test]
    fn f_matches_ft_up_to_sign() {
        // f_m = -f~_m (minus-side sign constant s' = -1).
        for s in enumerate_states(0, 4) {
            let v = V::from_state(s);
            for m in -2..=2 {
                let lhs = f_act(m, &v, &pol()).unwrap();
                let rhs = ft_f_act(m, &v).unwrap().scale(&RatFunc::one().neg());
                assert_eq!(lhs, rhs, "m = {m}");
            }
        }
    }

    #[test]
    fn h_poly_cases() {
        assert_eq!(h_poly::<RatFunc>(0), ZLaurent::one());
        let mut want = ZLaurent::zero();
        want.add_term(1, 0, RatFunc::one());
        want.add_term(0, 1, RatFunc::one());
        assert_eq!(h_poly::<RatFunc>(1), want);
        assert!(h_poly::<RatFunc>(-1).is_zero());
        let mut want = ZLaurent::zero();
        want.add_term(-1, -1, RatFunc::one().neg());
        assert_eq!(h_poly::<RatFunc>(-2), want);
        // recursion h_s = z2^s + z1 h_{s-1} for s >= 1
        for s in 1..=4i64 {
            let mut rhs = ZLaurent::monomial(0, s, RatFunc::one());
            let shifted = {
                let mut out = ZLaurent::zero();
                for (&(a, b), c) in h_poly::<RatFunc>(s - 1).iter() {
                    out.add_term(a + 1, b, c.clone());
                }
                out
            };
            rhs = rhs.add(&shifted);
            assert_eq!(h_poly::<RatFunc>(s), rhs);
        }
        // symmetry
        for s in -4..=4i64 {
            assert!(h_poly::<RatFunc>(s).is_symmetric());
        }
    }

    #[test]
    fn psi_first_coefficients_on_empty() {
        let c = psi_coeffs::<RatFunc>(PsiSign::Plus, &Partition::empty(), 3).unwrap();
        assert_eq!(c[0], RatFunc::one().neg());
        assert_eq!(
            c[1],
            RatFunc::one().sub(&RatFunc::qt_mono(-1, -1)).neg()
        );
        let c = psi_coeffs::<RatFunc>(PsiSign::Minus, &Partition::empty(), 3).unwrap();
        assert_eq!(c[0], RatFunc::qt_mono(-1, -1).neg());
    }

    #[test]
    fn psi_dual_method_agreement_small() {
        for lam in Partition::up_to_size(4) {
            for sign in [PsiSign::Plus, PsiSign::Minus] {
                psi_coeffs::<RatFunc>(sign, &lam, 5).unwrap();
            }
        }
    }

    #[test]
    fn psi_zero_invertible() {
        for lam in Partition::up_to_size(5) {
            for sign in [PsiSign::Plus, PsiSign::Minus] {
                let c = psi_coeffs::<RatFunc>(sign, &lam, 0).unwrap();
                assert!(c[0].inv().is_ok(), "psi_0 not invertible on {lam}");
            }
        }
    }

    #[test]
    fn y_arity_one_is_e() {
        for s in enumerate_states(0, 4) {
            let v = V::from_state(s);
            for m in -1..=1 {
                assert_eq!(
                    y_act(&[m], &v, &pol()).unwrap(),
                    e_act(m, &v, &pol()).unwrap()
                );
            }
        }
    }

    #[test]
    fn a_zero_word_moves_mark() {
        // A_0 = 1_0 d- 1_1: A_0 I_{empty,((1,1))} = I_(1)
        let s = State::new(
            crate::polyrep::Side::Plus,
            Partition::empty(),
            vec![crate::combinatorics::BoxPos::new(1, 1)],
        )
        .unwrap();
        let out = a_act(&[0], &V::from_state(s), &pol()).unwrap();
        assert_eq!(out, iv(&[1]));
    }

    #[test]
    fn y_00_matches_commutator_expression() {
        // Y_{0,0} = (q-1)^-1 (e_0^2 - d-^2 d+^2) on level-0 states.
        let w = Word::parse("1_0 d- d- d+ d+ 1_0").unwrap();
        for s in enumerate_states(0, 3) {
            let v = V::from_state(s);
            let lhs = y_act(&[0, 0], &v, &pol()).unwrap();
            let e0e0 = e_act(0, &e_act(0, &v, &pol()).unwrap(), &pol()).unwrap();
            let dd = act_word(&w, &v, &pol()).unwrap();
            let rhs = e0e0
                .sub(&dd)
                .scale(&RatFunc::q().sub(&RatFunc::one()).inv().unwrap());
            assert_eq!(lhs, rhs);
        }
    }
}
