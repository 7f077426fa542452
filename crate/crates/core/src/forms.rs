//! Closed forms of the `R_i^(k)` multisums and related series: the
//! indefinite theta forms, the Appell-Lerch decompositions, and the pieces
//! of the mock theta identities at `k = 3, 4`.

use crate::error::{Error, Result};
use crate::indefinite::{indefinite_f, theta_np, FabcParams};
use crate::multisum::{classical, Classical};
use crate::series::{inv_pochhammer, pochhammer, with_precision, Count, LaurentSeries, QMonomial};
use crate::theta::{appell_m, j_const, jtheta, xi, JKind};

fn q(e: i64) -> QMonomial {
    QMonomial::q(e)
}

fn neg_q(e: i64) -> QMonomial {
    QMonomial::neg_q(e)
}

fn pow2(e: i64) -> i64 {
    1 << e
}

fn check_k(k: usize) -> Result<i64> {
    if !(3..=12).contains(&k) {
        return Err(Error::BadParams(format!("k must be in 3..=12, got {k}")));
    }
    Ok(k as i64)
}

/// `exact / 3`, which every caller knows to be an integer.
fn third(exact: i64) -> i64 {
    assert_eq!(exact % 3, 0, "exponent {exact} is not divisible by 3");
    exact / 3
}

/// `(x; q^step)_inf` products over `(y; q^step)_inf` products.
fn product_quotient(num: &[(QMonomial, i64)], den: &[(QMonomial, i64)], prec: i64) -> Result<LaurentSeries> {
    let mut acc = LaurentSeries::one(prec);
    for &(x, step) in num {
        acc = &acc * &pochhammer(x, step, Count::Infinite, prec)?;
    }
    for &(x, step) in den {
        acc = &acc * &inv_pochhammer(x, step, Count::Infinite, prec)?;
    }
    Ok(acc)
}

/// `f_{a,b,c}(x, x, q^base)` for a symmetric pair of arguments.
fn f_sym(a: i64, b: i64, c: i64, x: QMonomial, base: i64, prec: i64) -> Result<LaurentSeries> {
    indefinite_f(&FabcParams::new(a, b, c, x, x, base)?, prec)
}

/// `pre * s` where `s` is computed with enough room for the shift.
fn shifted(pre: QMonomial, prec: i64, s: impl FnOnce(i64) -> Result<LaurentSeries>) -> Result<LaurentSeries> {
    Ok(s(prec - pre.exp())?.mul_monomial(pre))
}

/// The indefinite theta form of `R_i^(k)`.
pub fn r_f(i: u8, k: usize, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let e = pow2(k - 2);
    with_precision(prec, |w| match i {
        1 => {
            let pre = product_quotient(&[(neg_q(1), 1)], &[(q(1), 1)], w)?;
            let b = 2 * e + 1;
            let s1 = f_sym(1, b, 1, q(e + 1), 2, w)?;
            let s2 = shifted(q(2 * e + 1), w, |p| f_sym(1, b, 1, q(3 * (e + 1)), 2, p))?;
            Ok(&pre * &(&s1 + &s2))
        }
        2 => {
            let pre = product_quotient(&[], &[(q(1), 1)], w)?;
            let b = 4 * e + 3;
            let s1 = f_sym(3, b, 3, q(e + 2), 1, w)?;
            let s2 = shifted(q(2 * e + 2), w, |p| f_sym(3, b, 3, q(3 * (e + 2) - 1), 1, p))?;
            Ok(&pre * &(&s1 + &s2))
        }
        3 => {
            let pre = product_quotient(&[(q(1), 2)], &[(q(2), 2)], w)?;
            let f = indefinite_f(&FabcParams::new(1, 2 * e + 1, 1, q(e + 1), neg_q(e + 1), 1)?, w)?;
            Ok(&pre * &f)
        }
        4 => {
            let pre = product_quotient(&[(q(1), 2)], &[(q(2), 2)], w)?;
            Ok(&pre * &f_sym(1, 4 * e + 1, 1, neg_q(e + 1), 1, w)?)
        }
        _ => Err(Error::BadParams(format!("R_i needs i in 1..=4, got {i}"))),
    })
}

/// The four-term `q^4` splitting of the `R_3` theta series:
/// `f(-q^(2^(k-1)+3), -q^(2^(k-1)+3), q^4) - q^(2^k+3) f(-q^(3*2^(k-1)+7), -q^(3*2^(k-1)+7), q^4)`
/// with `f = f_{1,2^(k-1)+1,1}`.
pub fn r3_split(k: usize, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let h = pow2(k - 1);
    with_precision(prec, |w| {
        let s1 = f_sym(1, h + 1, 1, neg_q(h + 3), 4, w)?;
        let s2 = shifted(q(2 * h + 3), w, |p| f_sym(1, h + 1, 1, neg_q(3 * h + 7), 4, p))?;
        Ok(&s1 - &s2)
    })
}

/// The two-term form of the `R_4` theta series before the inversion law:
/// `(f(-q^(2^(k-2)+1), ...) - q^(2^(k-1)+1) f(-q^(3(2^(k-2)+1)-1), ...)) / 2`
/// with `f = f_{1,2^k+1,1}` in base `q`.
pub fn r4_split(k: usize, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let e = pow2(k - 2);
    with_precision(prec, |w| {
        let s1 = f_sym(1, 4 * e + 1, 1, neg_q(e + 1), 1, w)?;
        let s2 = shifted(q(2 * e + 1), w, |p| {
            f_sym(1, 4 * e + 1, 1, neg_q(3 * (e + 1) - 1), 1, p)
        })?;
        Ok((&s1 - &s2).scale(&crate::series::ratio(1, 2)))
    })
}

/// `m(x, q^base, z) + xi(x, q^base, z)`.
pub fn m_plus_xi(x: QMonomial, base: i64, z: QMonomial, prec: i64) -> Result<LaurentSeries> {
    Ok(&appell_m(x, base, z, prec)? + &xi(x, base, z, prec)?)
}

/// `coef * q^e * [m + xi](x, q^base, z)`.
fn bracket(coef: i64, e: i64, x: QMonomial, base: i64, z: QMonomial, prec: i64) -> Result<LaurentSeries> {
    Ok(m_plus_xi(x, base, z, prec - e)?.mul_monomial(q(e)).scale_int(coef))
}

/// `pre * theta_{n,p}(x, x, q^base) / j(q^jn, q^jm)`.
fn theta_over_j(
    pre: QMonomial,
    (n, p): (i64, i64),
    (x, y): (QMonomial, QMonomial),
    base: i64,
    (jx, jm): (QMonomial, i64),
    prec: i64,
) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let inner = w - pre.exp();
        let th = theta_np(n, p, x, y, base, inner)?;
        Ok(th.div(&jtheta(jx, jm, inner)?)?.mul_monomial(pre))
    })
}

/// The Appell-Lerch form of `R_1^(k)` with free parameter `z`.
pub fn r1_m(k: usize, z: QMonomial, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let e = pow2(k - 2);
    let sign = if pow2(k - 3) % 2 == 1 { -1 } else { 1 };
    with_precision(prec, |w| {
        let main = bracket(2 * sign, -pow2(2 * k - 6), q(e), pow2(k - 1) * (e + 1), z, w)?;
        let t1 = theta_over_j(QMonomial::ONE, (1, 2 * e), (q(e + 1), q(e + 1)), 2, (q(1), 2), w)?;
        let x = q(3 * (e + 1));
        let t2 = theta_over_j(q(2 * e + 1), (1, 2 * e), (x, x), 2, (q(1), 2), w)?;
        Ok(&(&main + &t1) + &t2)
    })
}

/// The Appell-Lerch form of `R_2^(k)`; the first bracket differs between
/// odd and even `k`.
pub fn r2_m(k: usize, z: QMonomial, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let base = 3 * pow2(k - 1) * (pow2(k - 1) + 3);
    let (e1, x1) = if k % 2 == 1 {
        (
            -third(pow2(k - 3) * (pow2(k - 2) + 1)),
            q(pow2(k + 1) * (pow2(k - 3) + 1)),
        )
    } else {
        (
            third(-29 * pow2(k - 3) - 25 * pow2(2 * k - 5)),
            q(-pow2(k) * (pow2(k - 2) + 1)),
        )
    };
    let e2 = -3 * pow2(k - 3) * (pow2(k - 2) + 1);
    with_precision(prec, |w| {
        let b1 = bracket(-2, e1, x1, base, z, w)?;
        let b2 = bracket(-2, e2, q(pow2(k - 1)), base, z, w)?;
        let x = q(pow2(k - 2) + 2);
        let t1 = theta_over_j(QMonomial::ONE, (3, pow2(k)), (x, x), 1, (q(1), 3), w)?;
        let x = q(3 * pow2(k - 2) + 5);
        let t2 = theta_over_j(q(pow2(k - 1) + 2), (3, pow2(k)), (x, x), 1, (q(1), 3), w)?;
        Ok(&(&(&b1 + &b2) + &t1) + &t2)
    })
}

/// The Appell-Lerch form of `R_3^(k)`.
pub fn r3_m(k: usize, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let e = pow2(k - 2);
    let lead = -pow2(k - 3) * (e + 1);
    with_precision(prec, |w| {
        let m = appell_m(q(e), pow2(2 * k - 2) + pow2(k), QMonomial::MINUS_ONE, w - lead)?;
        let m = m.mul_monomial(q(lead)).scale_int(2);
        let t = theta_over_j(
            QMonomial::ONE,
            (1, 2 * e),
            (q(e + 1), neg_q(e + 1)),
            1,
            (QMonomial::MINUS_ONE, 1),
            w,
        )?;
        Ok(&m + &t.scale_int(2))
    })
}

/// The Appell-Lerch form of `R_4^(k)`.
pub fn r4_m(k: usize, prec: i64) -> Result<LaurentSeries> {
    let k = check_k(k)?;
    let e = pow2(k - 2);
    let h = pow2(k - 1);
    let lead = -pow2(k - 3) * (e + 1);
    with_precision(prec, |w| {
        let m = appell_m(
            neg_q(h * (h + 1)),
            pow2(k + 1) * (h + 1),
            QMonomial::MINUS_ONE,
            w - lead,
        )?;
        let m = m.mul_monomial(q(lead)).scale_int(4);
        let x = neg_q(e + 1);
        let t = theta_over_j(QMonomial::ONE, (1, 4 * e), (x, x), 1, (QMonomial::MINUS_ONE, 1), w)?;
        Ok(&m + &t.scale_int(2))
    })
}

/// Appell-Lerch decomposition of the generalized `f(q)` multisum `B_1^(k)`:
/// `2/(q)_inf (sum_{i != k+1} (-1)^(i+1) j(q^(k+i), q^M) m(-q^(k-i+1), q^M, q^(k+i))
/// + (-1)^k (q^M;q^M)_inf^2 / (2 (-q^M;q^M)_inf^2))` with `M = 2k+1`.
pub fn b1_appell(k: usize, prec: i64) -> Result<LaurentSeries> {
    if !(1..=12).contains(&k) {
        return Err(Error::BadParams(format!("k must be in 1..=12, got {k}")));
    }
    let k = k as i64;
    let big = 2 * k + 1;
    with_precision(prec, |w| {
        let mut acc = LaurentSeries::zero(w);
        for i in (1..=big).filter(|&i| i != k + 1) {
            let z = q(k + i);
            let term = &jtheta(z, big, w)? * &appell_m(neg_q(k - i + 1), big, z, w)?;
            acc = if i % 2 == 1 { &acc + &term } else { &acc - &term };
        }
        let tail = product_quotient(
            &[(q(big), big), (q(big), big)],
            &[(neg_q(big), big), (neg_q(big), big)],
            w,
        )?;
        let tail = tail.scale(&crate::series::ratio(if k % 2 == 0 { 1 } else { -1 }, 2));
        let pre = product_quotient(&[], &[(q(1), 1)], w)?.scale_int(2);
        Ok(&pre * &(&acc + &tail))
    })
}

/// `(-q)_inf/(q)_inf f_{2k,2k+1,2k}(q^(2k), q^(2k), q)`; at `k = 1` this is `phi(q)`.
pub fn b2_f(k: usize, prec: i64) -> Result<LaurentSeries> {
    if !(1..=12).contains(&k) {
        return Err(Error::BadParams(format!("k must be in 1..=12, got {k}")));
    }
    let k = k as i64;
    with_precision(prec, |w| {
        let pre = product_quotient(&[(neg_q(1), 1)], &[(q(1), 1)], w)?;
        Ok(&pre * &f_sym(2 * k, 2 * k + 1, 2 * k, q(2 * k), 1, w)?)
    })
}

/// `J_1 J_{3,12} / J_2`.
pub fn nu_theta_part(prec: i64) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let num = &j_const(JKind::J, 0, 1, 1, w)? * &j_const(JKind::Jam, 3, 12, 1, w)?;
        num.div(&j_const(JKind::J, 0, 2, 1, w)?)
    })
}

/// `2 q^-1 m(q^2, q^12, -q^3) + J_1 J_{3,12} / J_2`, an Appell-Lerch form of `nu(q)`.
pub fn nu_appell(prec: i64) -> Result<LaurentSeries> {
    let m = appell_m(q(2), 12, neg_q(3), prec + 1)?.mul_monomial(q(-1)).scale_int(2);
    Ok(&m + &nu_theta_part(prec)?)
}

/// `2 q^-1 xi(q^2, q^12, -q^3) + theta_{1,4}(-q^3,-q^3,q^2)/j(-q,q^2) - q^5 theta_{1,4}(-q^9,-q^9,q^2)/j(-q,q^2)`.
pub fn nu_theta_combination(prec: i64) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let x = xi(q(2), 12, neg_q(3), w + 1)?.mul_monomial(q(-1)).scale_int(2);
        let t1 = theta_over_j(QMonomial::ONE, (1, 4), (neg_q(3), neg_q(3)), 2, (neg_q(1), 2), w)?;
        let t2 = theta_over_j(q(5), (1, 4), (neg_q(9), neg_q(9)), 2, (neg_q(1), 2), w)?;
        Ok(&(&x + &t1) - &t2)
    })
}

/// `J_5 J_10 J_{4,10} / (J_{2,5} J_{2,10})` at `q -> q^base`.
pub fn phi_theta_part(base: i64, prec: i64) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let num = &(&j_const(JKind::J, 0, 5, base, w)? * &j_const(JKind::J, 0, 10, base, w)?)
            * &j_const(JKind::Jam, 4, 10, base, w)?;
        let den = &j_const(JKind::Jam, 2, 5, base, w)? * &j_const(JKind::Jam, 2, 10, base, w)?;
        num.div(&den)
    })
}

/// `-2 q^-base m(q^base, q^(10 base), q^(2 base)) + J_5 J_10 J_{4,10} / (J_{2,5} J_{2,10})`
/// at `q -> q^base`, an Appell-Lerch form of `phi(q^base)`.
pub fn phi_appell(base: i64, prec: i64) -> Result<LaurentSeries> {
    let m = appell_m(q(base), 10 * base, q(2 * base), prec + base)?
        .mul_monomial(q(-base))
        .scale_int(-2);
    Ok(&m + &phi_theta_part(base, prec)?)
}

/// Both sides of the rearranged identity for `R_1^(4) + phi(q^4)`: the
/// multisum side is supplied by the caller, the assembled side is
/// `2q^-4 [m + xi](q^4, q^40, q^8) + theta terms + (J-quotient)(q^4) - 2q^-4 m(q^4, q^40, q^8)`.
pub fn mockid2_assembled(prec: i64) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let appell = r1_m(4, q(8), w)?;
        let phi_part = phi_theta_part(4, w)?;
        let m = appell_m(q(4), 40, q(8), w + 4)?.mul_monomial(q(-4)).scale_int(2);
        Ok(&(&appell + &phi_part) - &m)
    })
}

/// The candidate weakly holomorphic part `M_1(q) = R_1^(4)(q) + phi(q^4)`,
/// assembled without the Appell-Lerch sums.
pub fn m1_series(prec: i64) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let x = xi(q(4), 40, q(8), w + 4)?.mul_monomial(q(-4)).scale_int(2);
        let t1 = theta_over_j(QMonomial::ONE, (1, 8), (q(5), q(5)), 2, (q(1), 2), w)?;
        let t2 = theta_over_j(q(9), (1, 8), (q(15), q(15)), 2, (q(1), 2), w)?;
        Ok(&(&(&x + &t1) + &t2) + &phi_theta_part(4, w)?)
    })
}

/// `R_2^(3)(q) - q^-1 F_1(q^4)`.
pub fn diff_mockid3(r2: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    let f1 = classical(Classical::F1, (prec + 1 + 3) / 4 + 1)?
        .substitute_power(4)
        .mul_monomial(q(-1));
    Ok(&r2.truncate(prec.min(r2.prec()))? - &f1.truncate(prec.min(f1.prec()))?)
}

/// `R_4^(k)(q) - q^(-2^(k-3)(2^(k-2)+1)) mu(q^(2^(k-1)(2^(k-1)+1)))`.
pub fn diff_mockid5(k: usize, r4: &LaurentSeries, prec: i64) -> Result<LaurentSeries> {
    let kk = check_k(k)?;
    let lead = -pow2(kk - 3) * (pow2(kk - 2) + 1);
    let m = pow2(kk - 1) * (pow2(kk - 1) + 1);
    let inner = (prec - lead - 1 + m - 1) / m + 1;
    let mu = classical(Classical::Mu, inner.max(1))?
        .substitute_power(m)
        .mul_monomial(q(lead));
    Ok(&r4.truncate(prec.min(r4.prec()))? - &mu.truncate(prec.min(mu.prec()))?)
}
