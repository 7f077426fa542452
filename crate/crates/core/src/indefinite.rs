//! Indefinite theta series `f_{a,b,c}(x, y, q)` and their conversion into
//! Appell-Lerch sums: the `g_{a,b,c}` sums, the theta quotient
//! `theta_{n,p}`, and the two transformation laws of `f_{a,b,c}`.

use num_integer::Integer;

use crate::error::{Error, Result};
use crate::series::{rat, with_precision, LaurentSeries, QMonomial};
use crate::theta::{appell_m, j_const, jtheta, jtheta_unit, jtheta_vanishes, unit_factor, JKind};

/// Parameters of `f_{a,b,c}(x, y, q^base)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FabcParams {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub x: QMonomial,
    pub y: QMonomial,
    pub base: i64,
}

impl FabcParams {
    pub fn new(a: i64, b: i64, c: i64, x: QMonomial, y: QMonomial, base: i64) -> Result<Self> {
        let p = FabcParams { a, b, c, x, y, base };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.a < 1 || self.b < 1 || self.c < 1 || self.base < 1 {
            return Err(Error::InvalidParams(format!(
                "f_{{a,b,c}} needs positive a, b, c, base: {self:?}"
            )));
        }
        if self.b * self.b <= self.a * self.c {
            return Err(Error::InvalidParams(format!(
                "f_{{{},{},{}}} is not indefinite (b^2 <= ac)",
                self.a, self.b, self.c
            )));
        }
        Ok(())
    }

    fn with_args(&self, x: QMonomial, y: QMonomial, base: i64) -> Self {
        FabcParams { x, y, base, ..*self }
    }
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

fn parity_sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 1 {
        -1
    } else {
        1
    }
}

/// Smallest value of a function on `0, 1, 2, ...` that is convex there.
fn convex_min(f: impl Fn(i64) -> i64) -> i64 {
    let mut v = 0;
    while f(v + 1) < f(v) {
        v += 1;
    }
    f(v)
}

/// Visits every `(u, v)` with `u, v >= 0` and `exponent(u, v) < prec`.
///
/// `exponent` is convex in each variable and bounded below on each row by
/// `row_bound(u)`, itself convex, which is what makes the scan finite.
fn scan_quadrant(
    prec: i64,
    exponent: impl Fn(i64, i64) -> i64,
    row_bound: impl Fn(i64) -> i64,
    mut visit: impl FnMut(i64, i64, i64),
) {
    let mut u = 0;
    loop {
        let lb = row_bound(u);
        if lb >= prec && row_bound(u + 1) >= lb {
            break;
        }
        let mut v = 0;
        loop {
            let e = exponent(u, v);
            if e >= prec && exponent(u, v + 1) >= e {
                break;
            }
            if e < prec {
                visit(u, v, e);
            }
            v += 1;
        }
        u += 1;
    }
}

/// `f_{a,b,c}(x, y, q^M) = (sum_{r,s >= 0} - sum_{r,s < 0}) (-1)^(r+s) x^r y^s q^(M Q(r,s))`
/// with `Q(r,s) = a C(r,2) + b r s + c C(s,2)`, truncated at `prec`.
pub fn indefinite_f(p: &FabcParams, prec: i64) -> Result<LaurentSeries> {
    p.validate()?;
    let (a, b, c) = (p.a * p.base, p.b * p.base, p.c * p.base);
    let (ex, ey) = (p.x.exp(), p.y.exp());
    let mut coeffs = std::collections::BTreeMap::<i64, i64>::new();
    let q_exp = |r: i64, s: i64| a * binom2(r) + b * r * s + c * binom2(s) + ex * r + ey * s;
    let weight = |r: i64, s: i64| parity_sign(r + s) * p.x.pow(r).sign() * p.y.pow(s).sign();

    // r, s >= 0; the cross term b r s is nonnegative there
    let col_min = convex_min(|v| c * binom2(v) + ey * v);
    scan_quadrant(
        prec,
        q_exp,
        |u| a * binom2(u) + ex * u + col_min,
        |u, v, e| *coeffs.entry(e).or_insert(0) += weight(u, v),
    );

    // r, s < 0 written as r = -1-u, s = -1-v; b (1+u)(1+v) is again nonnegative
    let col_min_neg = convex_min(|v| c * binom2(-1 - v) - ey * (1 + v));
    scan_quadrant(
        prec,
        |u, v| q_exp(-1 - u, -1 - v),
        |u| a * binom2(-1 - u) - ex * (1 + u) + col_min_neg,
        |u, v, e| *coeffs.entry(e).or_insert(0) -= weight(-1 - u, -1 - v),
    );

    let Some((&lo, _)) = coeffs.iter().find(|(_, v)| **v != 0) else {
        return Ok(LaurentSeries::zero(prec));
    };
    let dense = (lo..prec).map(|e| rat(*coeffs.get(&e).unwrap_or(&0))).collect();
    Ok(LaurentSeries::from_coeffs(lo, dense, prec))
}

/// `g_{a,b,c}(x, y, q^M, z1, z0)`: two finite sums of theta functions times
/// Appell-Lerch sums.
#[allow(clippy::too_many_arguments)]
pub fn g_abc(
    a: i64,
    b: i64,
    c: i64,
    x: QMonomial,
    y: QMonomial,
    base: i64,
    z1: QMonomial,
    z0: QMonomial,
    prec: i64,
) -> Result<LaurentSeries> {
    let disc = b * b - a * c;
    if a < 1 || b < 1 || c < 1 || disc <= 0 {
        return Err(Error::InvalidParams(format!("g_{{{a},{b},{c}}} needs b^2 > ac > 0")));
    }
    let q = |e: i64| QMonomial::q(e * base);
    let neg_x = -x;
    let neg_y = -y;
    with_precision(prec, |work| {
        let mut acc = LaurentSeries::zero(work);
        for t in 0..a {
            let pre = neg_y.pow(t) * q(c * binom2(t));
            let arg = -(q(a * binom2(b + 1) - c * binom2(a + 1) - t * disc) * neg_y.pow(a) * neg_x.pow(-b));
            let inner = work - pre.exp();
            let jt = jtheta(q(b * t) * x, a * base, inner)?;
            if jt.is_zero() {
                continue;
            }
            let m = appell_m(arg, a * disc * base, z0, inner).map_err(|e| tag(e, "first", t))?;
            acc = &acc + &(&jt * &m).mul_monomial(pre);
        }
        for t in 0..c {
            let pre = neg_x.pow(t) * q(a * binom2(t));
            let arg = -(q(c * binom2(b + 1) - a * binom2(c + 1) - t * disc) * neg_x.pow(c) * neg_y.pow(-b));
            let inner = work - pre.exp();
            let jt = jtheta(q(b * t) * y, c * base, inner)?;
            if jt.is_zero() {
                continue;
            }
            let m = appell_m(arg, c * disc * base, z1, inner).map_err(|e| tag(e, "second", t))?;
            acc = &acc + &(&jt * &m).mul_monomial(pre);
        }
        Ok(acc)
    })
}

fn tag(e: Error, which: &str, t: i64) -> Error {
    match e {
        Error::PolarParameters(s) => Error::PolarParameters(format!("{which} t-sum, t = {t}: {s}")),
        other => other,
    }
}

/// `theta_{n,p}(x, y, q^M)` for odd `n` coprime to `p`.
///
/// For odd `n` the fractional shifts vanish, so `r = r*` and `s = s*` and
/// every exponent is an integer.
pub fn theta_np(n: i64, p: i64, x: QMonomial, y: QMonomial, base: i64, prec: i64) -> Result<LaurentSeries> {
    if n < 1 || p < 1 {
        return Err(Error::InvalidParams(format!(
            "theta_{{n,p}} needs positive n, p, got ({n}, {p})"
        )));
    }
    if n % 2 == 0 {
        return Err(Error::NonIntegerExponent(format!("theta_{{{n},{p}}} with even n")));
    }
    if n.gcd(&p) != 1 {
        return Err(Error::InvalidParams(format!("theta_{{{n},{p}}}: n and p not coprime")));
    }
    if (p * (n + p)) % 2 != 0 {
        return Err(Error::NonIntegerExponent(format!("p(n+p)/2 for (n, p) = ({n}, {p})")));
    }
    let q = |e: i64| QMonomial::q(e * base);
    let (neg_x, neg_y) = (-x, -y);
    let big = p * p * (2 * n + p);
    let half = p * (n + p) / 2;
    let (h, g) = ((n - 1) / 2, (n + 1) / 2);

    // every denominator theta, checked up front
    if jtheta_vanishes(QMonomial::MINUS_ONE, n * p * (2 * n + p) * base) {
        return Err(Error::ZeroDivisor);
    }
    for r in 0..p {
        let d1 = q(p * (2 * n + p) * r + half) * neg_y.pow(n + p) * neg_x.pow(-n);
        let d2 = q(p * (2 * n + p) * r + half) * neg_x.pow(n + p) * neg_y.pow(-n);
        if jtheta_vanishes(d1, big * base) || jtheta_vanishes(d2, big * base) {
            return Err(Error::ZeroDivisor);
        }
    }

    with_precision(prec, |work| {
        let jb = j_const(JKind::JbarAm, 0, n * p * (2 * n + p), base, work)?;
        let mut acc = LaurentSeries::zero(work);
        for r in 0..p {
            for s in 0..p {
                let (rr, ss) = (r - h, s + g);
                let e = n * binom2(rr) + (n + p) * rr * ss + n * binom2(ss);
                let t1 = -(q(n * p * (s - r)) * x.pow(n) * y.pow(-n));
                let t2 = q(p * (2 * n + p) * (r + s) + p * (n + p)) * x.pow(p) * y.pow(p);
                if jtheta_vanishes(t1, n * p * p * base) || jtheta_vanishes(t2, big * base) {
                    continue;
                }
                let d1 = q(p * (2 * n + p) * r + half) * neg_y.pow(n + p) * neg_x.pow(-n);
                let d2 = q(p * (2 * n + p) * s + half) * neg_x.pow(n + p) * neg_y.pow(-n);
                // every theta is a monomial times a unit, so only the units
                // need computing, and only below what is left of `work`
                let thetas = [
                    (t1, n * p * p),
                    (t2, big),
                    (q(big), 3 * big),
                    (q(big), 3 * big),
                    (q(big), 3 * big),
                ];
                let mut mono = q(e) * neg_x.pow(rr) * neg_y.pow(ss);
                for (arg, m) in thetas {
                    mono = mono * unit_factor(arg, m * base);
                }
                for arg in [d1, d2] {
                    mono = mono * unit_factor(arg, big * base).inv();
                }
                let inner = work - mono.exp();
                if inner <= 0 {
                    continue;
                }
                let mut num = LaurentSeries::one(inner);
                for (arg, m) in thetas {
                    num = &num * &jtheta_unit(arg, m * base, inner + unit_factor(arg, m * base).exp())?.1;
                }
                let den = &jtheta_unit(d1, big * base, inner + unit_factor(d1, big * base).exp())?.1
                    * &jtheta_unit(d2, big * base, inner + unit_factor(d2, big * base).exp())?.1;
                acc = &acc + &num.div(&den)?.mul_monomial(mono);
            }
        }
        acc.div(&jb)
    })
}

/// Checks `f_{n,n+p,n}(x,y,q) = g_{n,n+p,n}(x,y,q,-1,-1) + theta_{n,p}(x,y,q)`
/// below `prec` at base `q^base`.
pub fn hm_check(n: i64, p: i64, x: QMonomial, y: QMonomial, base: i64, prec: i64) -> Result<bool> {
    let (f, rhs) = hm_sides(n, p, x, y, base, prec)?;
    Ok(f.first_discrepancy(&rhs, prec).is_none())
}

/// `(f_{n,n+p,n}, g_{n,n+p,n}(-1,-1) + theta_{n,p})` below `prec`.
pub fn hm_sides(
    n: i64,
    p: i64,
    x: QMonomial,
    y: QMonomial,
    base: i64,
    prec: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    let f = indefinite_f(&FabcParams::new(n, n + p, n, x, y, base)?, prec)?;
    let g = g_abc(
        n,
        n + p,
        n,
        x,
        y,
        base,
        QMonomial::MINUS_ONE,
        QMonomial::MINUS_ONE,
        prec,
    )?;
    let th = theta_np(n, p, x, y, base, prec)?;
    Ok((f, &g + &th))
}

/// Which transformation law of `f_{a,b,c}` to check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Transform {
    /// Splitting into four series in `q^4`.
    Quadruple,
    /// `f(x,y,q) = -q^(a+b+c)/(xy) f(q^(2a+b)/x, q^(2c+b)/y, q)`.
    Inversion,
}

/// Right-hand side of the chosen transformation law.
pub fn f_transform_rhs(kind: Transform, p: &FabcParams, prec: i64) -> Result<LaurentSeries> {
    p.validate()?;
    let q = |e: i64| QMonomial::q(e * p.base);
    let (a, b, c, x, y) = (p.a, p.b, p.c, p.x, p.y);
    with_precision(prec, |work| match kind {
        Transform::Inversion => {
            let pre = -(q(a + b + c) * (x * y).inv());
            let inner = p.with_args(q(2 * a + b) * x.inv(), q(2 * c + b) * y.inv(), p.base);
            Ok(indefinite_f(&inner, work - pre.exp())?.mul_monomial(pre))
        }
        Transform::Quadruple => {
            let x2 = -(x * x);
            let y2 = -(y * y);
            let b4 = 4 * p.base;
            let parts = [
                (QMonomial::ONE, q(a), q(c)),
                (-x, q(3 * a), q(c + 2 * b)),
                (-y, q(a + 2 * b), q(3 * c)),
                (x * y * q(b), q(3 * a + 2 * b), q(3 * c + 2 * b)),
            ];
            let mut acc = LaurentSeries::zero(work);
            for (pre, sx, sy) in parts {
                let inner = p.with_args(x2 * sx, y2 * sy, b4);
                acc = &acc + &indefinite_f(&inner, work - pre.exp())?.mul_monomial(pre);
            }
            Ok(acc)
        }
    })
}

/// True when the chosen transformation law holds below `prec`.
pub fn f_transform_check(kind: Transform, p: &FabcParams, prec: i64) -> Result<bool> {
    let lhs = indefinite_f(p, prec)?;
    let rhs = f_transform_rhs(kind, p, prec)?;
    Ok(lhs.first_discrepancy(&rhs, prec).is_none())
}
