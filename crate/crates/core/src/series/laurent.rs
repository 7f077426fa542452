use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::monomial::QMonomial;
use crate::error::{Error, Result};

/// Exact rational coefficient. Always reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A truncated Laurent series in `q` with exact rational coefficients.
///
/// The coefficient of `q^e` is known for every `e < prec` and unknown from
/// `prec` on. `coeffs[i]` is the coefficient of `q^(min_exp + i)` and
/// `coeffs.len() == prec - min_exp`. The leading stored coefficient is
/// nonzero; the zero series has no coefficients and `min_exp == prec`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentSeries {
    min_exp: i64,
    coeffs: Vec<Rational>,
    prec: i64,
}

/// First exponent at which two series disagree, with both coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Discrepancy {
    pub exponent: i64,
    pub left: Rational,
    pub right: Rational,
}

impl LaurentSeries {
    /// Builds a series from coefficients starting at `min_exp`, padding with
    /// zeros or dropping entries so that exactly the exponents below `prec`
    /// are stored.
    pub fn from_coeffs(min_exp: i64, mut coeffs: Vec<Rational>, prec: i64) -> Self {
        let want = (prec - min_exp).max(0) as usize;
        coeffs.resize(want, Rational::zero());
        let mut s = LaurentSeries { min_exp, coeffs, prec };
        s.normalize();
        s
    }

    pub fn from_ints(min_exp: i64, coeffs: &[i64], prec: i64) -> Self {
        Self::from_coeffs(min_exp, coeffs.iter().map(|&c| rat(c)).collect(), prec)
    }

    pub fn zero(prec: i64) -> Self {
        LaurentSeries {
            min_exp: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn one(prec: i64) -> Self {
        Self::constant(Rational::one(), prec)
    }

    pub fn constant(c: Rational, prec: i64) -> Self {
        Self::term(c, 0, prec)
    }

    /// `c * q^exp` known below `prec`.
    pub fn term(c: Rational, exp: i64, prec: i64) -> Self {
        if exp >= prec || c.is_zero() {
            return Self::zero(prec);
        }
        let mut coeffs = vec![Rational::zero(); (prec - exp) as usize];
        coeffs[0] = c;
        LaurentSeries {
            min_exp: exp,
            coeffs,
            prec,
        }
    }

    pub fn monomial(m: QMonomial, prec: i64) -> Self {
        Self::term(rat(m.sign()), m.exp(), prec)
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().position(|c| !c.is_zero());
        match lead {
            Some(0) => {}
            Some(i) => {
                self.coeffs.drain(..i);
                self.min_exp += i as i64;
            }
            None => {
                self.coeffs.clear();
                self.min_exp = self.prec;
            }
        }
    }

    pub fn min_exp(&self) -> i64 {
        self.min_exp
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `q^e`; `None` when `e >= prec`.
    pub fn coeff(&self, e: i64) -> Option<Rational> {
        if e >= self.prec {
            None
        } else if e < self.min_exp {
            Some(Rational::zero())
        } else {
            Some(self.coeffs[(e - self.min_exp) as usize].clone())
        }
    }

    fn coeff_ref(&self, e: i64) -> Option<&Rational> {
        if e < self.min_exp || e >= self.prec {
            None
        } else {
            Some(&self.coeffs[(e - self.min_exp) as usize])
        }
    }

    /// Nonzero `(exponent, coefficient)` pairs in increasing order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &Rational)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// Dense coefficients from `min_exp` up to `prec - 1`.
    pub fn coefficients(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    /// Lowers the precision to `n`.
    pub fn truncate(&self, n: i64) -> Result<Self> {
        if n > self.prec {
            return Err(Error::PrecisionLoss {
                requested: n,
                available: self.prec,
            });
        }
        if n <= self.min_exp {
            return Ok(Self::zero(n));
        }
        let keep = (n - self.min_exp) as usize;
        Ok(LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs[..keep].to_vec(),
            prec: n,
        })
    }

    /// Multiply by `q^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.prec);
        }
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|x| x * c).collect(),
            prec: self.prec,
        }
    }

    pub fn scale_int(&self, c: i64) -> Self {
        self.scale(&rat(c))
    }

    /// Multiply by a signed power of `q`.
    pub fn mul_monomial(&self, m: QMonomial) -> Self {
        let s = self.shift(m.exp());
        if m.is_negative() {
            -&s
        } else {
            s
        }
    }

    /// In-place multiplication by `1 - sign * q^e`.
    pub fn mul_binomial(&mut self, sign: i64, e: i64) {
        if e == 0 {
            *self = self.scale_int(1 - sign);
            return;
        }
        if e < 0 {
            // 1 - s q^e = -s q^e (1 - s q^{-e})
            *self = self.shift(e).scale_int(-sign);
            self.mul_binomial(sign, -e);
            return;
        }
        let e = e as usize;
        for i in (e..self.coeffs.len()).rev() {
            if self.coeffs[i - e].is_zero() {
                continue;
            }
            let t = self.coeffs[i - e].clone();
            if sign > 0 {
                self.coeffs[i] -= t;
            } else {
                self.coeffs[i] += t;
            }
        }
        self.normalize();
    }

    /// In-place division by `1 - sign * q^e`.
    pub fn div_binomial(&mut self, sign: i64, e: i64) -> Result<()> {
        if e == 0 {
            if sign > 0 {
                return Err(Error::ZeroDivisor);
            }
            *self = self.scale(&ratio(1, 2));
            return Ok(());
        }
        if e < 0 {
            // 1 / (1 - s q^e) = -s q^{-e} / (1 - s q^{-e})
            *self = self.shift(-e).scale_int(-sign);
            return self.div_binomial(sign, -e);
        }
        let e = e as usize;
        for i in e..self.coeffs.len() {
            if self.coeffs[i - e].is_zero() {
                continue;
            }
            let t = if sign > 0 {
                self.coeffs[i - e].clone()
            } else {
                -&self.coeffs[i - e]
            };
            self.coeffs[i] += t;
        }
        Ok(())
    }

    /// Multiplicative inverse. The result starts at `-min_exp` and is known
    /// below `prec - 2 * min_exp`.
    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        let len = self.coeffs.len();
        let lead_inv = self.coeffs[0].recip();
        let mut out: Vec<Rational> = Vec::with_capacity(len);
        out.push(lead_inv.clone());
        let integral = self.is_integral() && lead_inv.abs().is_one();
        if integral {
            // unit leading coefficient: stay in integer arithmetic
            let c: Vec<BigInt> = self.coeffs.iter().map(|x| x.to_integer()).collect();
            let li = lead_inv.to_integer();
            let mut b: Vec<BigInt> = Vec::with_capacity(len);
            b.push(li.clone());
            for n in 1..len {
                let mut acc = BigInt::zero();
                for i in 1..=n {
                    if !c[i].is_zero() && !b[n - i].is_zero() {
                        acc += &c[i] * &b[n - i];
                    }
                }
                b.push(-(acc * &li));
            }
            out = b.into_iter().map(Rational::from_integer).collect();
        } else {
            for n in 1..len {
                let mut acc = Rational::zero();
                for i in 1..=n {
                    if !self.coeffs[i].is_zero() && !out[n - i].is_zero() {
                        acc += &self.coeffs[i] * &out[n - i];
                    }
                }
                out.push(-(acc * &lead_inv));
            }
        }
        Ok(LaurentSeries::from_coeffs(
            -self.min_exp,
            out,
            self.prec - 2 * self.min_exp,
        ))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.invert()?)
    }

    /// Non-negative integer power. `a^0` is `1` known to the relative
    /// precision of `a`.
    pub fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Self::one(self.prec - self.min_exp);
        }
        let mut out = self.clone();
        for _ in 1..n {
            out = &out * self;
        }
        out
    }

    /// The series `a(q^m)`. Precision becomes `m * (prec - 1) + 1`.
    pub fn substitute_power(&self, m: i64) -> Self {
        assert!(m >= 1, "substitute_power needs m >= 1");
        let prec = m * (self.prec - 1) + 1;
        if self.is_zero() {
            return Self::zero(prec);
        }
        let min_exp = m * self.min_exp;
        let mut coeffs = vec![Rational::zero(); (prec - min_exp).max(0) as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            let idx = i * m as usize;
            if idx < coeffs.len() {
                coeffs[idx] = c.clone();
            }
        }
        LaurentSeries::from_coeffs(min_exp, coeffs, prec)
    }

    /// The series `a(-q)`.
    pub fn negate_q(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| {
                if (self.min_exp + i as i64).rem_euclid(2) == 1 {
                    -c
                } else {
                    c.clone()
                }
            })
            .collect();
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs,
            prec: self.prec,
        }
    }

    /// Compares coefficients below `min(self.prec, other.prec, upto)`.
    pub fn first_discrepancy(&self, other: &Self, upto: i64) -> Option<Discrepancy> {
        let top = self.prec.min(other.prec).min(upto);
        let start = self.min_exp.min(other.min_exp);
        let zero = Rational::zero();
        for e in start..top {
            let l = self.coeff_ref(e).unwrap_or(&zero);
            let r = other.coeff_ref(e).unwrap_or(&zero);
            if l != r {
                return Some(Discrepancy {
                    exponent: e,
                    left: l.clone(),
                    right: r.clone(),
                });
            }
        }
        None
    }

    /// True when the two series agree on every exponent both of them know.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_discrepancy(other, i64::MAX).is_none()
    }
}

fn add_impl(a: &LaurentSeries, b: &LaurentSeries, negate_b: bool) -> LaurentSeries {
    let prec = a.prec.min(b.prec);
    let min_exp = a.min_exp.min(b.min_exp).min(prec);
    let mut coeffs = vec![Rational::zero(); (prec - min_exp) as usize];
    for (i, c) in a.coeffs.iter().enumerate() {
        let e = a.min_exp + i as i64;
        if e >= prec {
            break;
        }
        coeffs[(e - min_exp) as usize] = c.clone();
    }
    for (i, c) in b.coeffs.iter().enumerate() {
        let e = b.min_exp + i as i64;
        if e >= prec {
            break;
        }
        if c.is_zero() {
            continue;
        }
        let slot = &mut coeffs[(e - min_exp) as usize];
        if negate_b {
            *slot -= c;
        } else {
            *slot += c;
        }
    }
    let mut s = LaurentSeries { min_exp, coeffs, prec };
    s.normalize();
    s
}

fn mul_impl(a: &LaurentSeries, b: &LaurentSeries) -> LaurentSeries {
    let prec = (a.prec + b.min_exp).min(b.prec + a.min_exp);
    let min_exp = a.min_exp + b.min_exp;
    if a.is_zero() || b.is_zero() || min_exp >= prec {
        return LaurentSeries::zero(prec);
    }
    let len = (prec - min_exp) as usize;
    let mut coeffs = vec![Rational::zero(); len];
    if a.is_integral() && b.is_integral() {
        let ai: Vec<(usize, BigInt)> = int_terms(&a.coeffs, len);
        let bi: Vec<(usize, BigInt)> = int_terms(&b.coeffs, len);
        let mut acc = vec![BigInt::zero(); len];
        for (i, x) in &ai {
            for (j, y) in &bi {
                if i + j >= len {
                    break;
                }
                acc[i + j] += x * y;
            }
        }
        for (slot, v) in coeffs.iter_mut().zip(acc) {
            *slot = Rational::from_integer(v);
        }
    } else {
        for (i, x) in a.coeffs.iter().enumerate().take(len) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coeffs.iter().enumerate().take(len - i) {
                if y.is_zero() {
                    continue;
                }
                coeffs[i + j] += x * y;
            }
        }
    }
    let mut s = LaurentSeries { min_exp, coeffs, prec };
    s.normalize();
    s
}

fn int_terms(c: &[Rational], len: usize) -> Vec<(usize, BigInt)> {
    c.iter()
        .enumerate()
        .take(len)
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.to_integer()))
        .collect()
}

impl Add for &LaurentSeries {
    type Output = LaurentSeries;
    fn add(self, rhs: &LaurentSeries) -> LaurentSeries {
        add_impl(self, rhs, false)
    }
}

impl Sub for &LaurentSeries {
    type Output = LaurentSeries;
    fn sub(self, rhs: &LaurentSeries) -> LaurentSeries {
        add_impl(self, rhs, true)
    }
}

impl Mul for &LaurentSeries {
    type Output = LaurentSeries;
    fn mul(self, rhs: &LaurentSeries) -> LaurentSeries {
        mul_impl(self, rhs)
    }
}

impl Neg for &LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        LaurentSeries {
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            prec: self.prec,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentSeries> for LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: &LaurentSeries) -> LaurentSeries {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentSeries> for &LaurentSeries {
            type Output = LaurentSeries;
            fn $m(self, rhs: LaurentSeries) -> LaurentSeries {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentSeries {
    type Output = LaurentSeries;
    fn neg(self) -> LaurentSeries {
        -&self
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.terms() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let unit = mag.is_one();
            match (e, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{e}")?,
                (_, false) => write!(f, "{mag}*q^{e}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.prec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(min: i64, c: &[i64], prec: i64) -> LaurentSeries {
        LaurentSeries::from_ints(min, c, prec)
    }

    fn geometric(prec: i64) -> LaurentSeries {
        s(0, &vec![1; prec as usize], prec)
    }

    #[test]
    fn add_cancels() {
        let a = s(0, &[1, -1], 10);
        let b = s(1, &[1], 8);
        let r = &a + &b;
        assert_eq!(r, LaurentSeries::one(8));
        assert_eq!(r.prec(), 8);
    }

    #[test]
    fn add_zero_identity() {
        let a = s(-2, &[3, 0, 1, 5], 6);
        assert_eq!(&LaurentSeries::zero(10) + &a, a);
    }

    #[test]
    fn laurent_cancellation() {
        let a = s(-1, &[1], 10);
        let b = s(-1, &[-1, 1], 10);
        let r = &a + &b;
        assert_eq!(r.min_exp(), 0);
        assert_eq!(r, LaurentSeries::one(10));
    }

    #[test]
    fn telescoping_product() {
        let r = &s(0, &[1, -1], 20) * &geometric(20);
        assert_eq!(r, LaurentSeries::one(20));
    }

    #[test]
    fn shift_product() {
        let r = &s(-1, &[1], 10) * &s(1, &[1], 10);
        assert_eq!(r.min_exp(), 0);
        assert_eq!(r.coeff(0), Some(rat(1)));
        assert_eq!(r.prec(), 9);
    }

    #[test]
    fn square() {
        let a = s(0, &[1, 1], 10);
        assert_eq!(&a * &a, s(0, &[1, 2, 1], 10));
    }

    #[test]
    fn mul_precision_rule() {
        let a = s(2, &[1, 3], 7);
        let b = s(-1, &[2, 0, 1], 12);
        let r = &a * &b;
        assert_eq!(r.min_exp(), 1);
        assert_eq!(r.prec(), 6);
    }

    #[test]
    fn invert_examples() {
        assert_eq!(s(0, &[1, -1], 15).invert().unwrap(), geometric(15));
        let half = LaurentSeries::constant(rat(2), 5).invert().unwrap();
        assert_eq!(half.coeff(0), Some(ratio(1, 2)));
        let a = s(2, &[1, 1], 12);
        let inv = a.invert().unwrap();
        assert_eq!(inv.min_exp(), -2);
        let alt: Vec<i64> = (0..10).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
        assert_eq!(inv, s(-2, &alt, 8));
        assert_eq!(inv.prec(), 12 - 4);
        assert_eq!(LaurentSeries::zero(5).invert(), Err(Error::ZeroDivisor));
    }

    #[test]
    fn substitution() {
        assert_eq!(s(0, &[1, 1], 10).substitute_power(2), s(0, &[1, 0, 1], 19));
        let r = s(-1, &[1], 10).substitute_power(3);
        assert_eq!(r.min_exp(), -3);
        let g = geometric(10).substitute_power(2);
        for e in 0..g.prec() {
            let want = if e % 2 == 0 { 1 } else { 0 };
            assert_eq!(g.coeff(e), Some(rat(want)));
        }
        assert_eq!(g.prec(), 2 * 9 + 1);
    }

    #[test]
    fn truncation() {
        let a = s(0, &[1, 1, 1], 3);
        assert_eq!(a.truncate(2).unwrap(), s(0, &[1, 1], 2));
        assert_eq!(a.truncate(3).unwrap(), a);
        assert_eq!(
            LaurentSeries::one(5).truncate(10),
            Err(Error::PrecisionLoss {
                requested: 10,
                available: 5
            })
        );
    }

    #[test]
    fn binomial_mul_and_div() {
        let mut a = LaurentSeries::one(12);
        a.mul_binomial(1, 3);
        assert_eq!(a, s(0, &[1, 0, 0, -1], 12));
        a.div_binomial(1, 3).unwrap();
        assert_eq!(a, LaurentSeries::one(12));

        let mut b = LaurentSeries::one(12);
        b.mul_binomial(-1, -2); // 1 + q^-2
        assert_eq!(b, s(-2, &[1, 0, 1], 10));
        b.div_binomial(-1, -2).unwrap();
        assert_eq!(b, LaurentSeries::one(12));

        let mut c = LaurentSeries::one(5);
        c.div_binomial(-1, 0).unwrap();
        assert_eq!(c.coeff(0), Some(ratio(1, 2)));
        assert_eq!(LaurentSeries::one(5).div_binomial(1, 0), Err(Error::ZeroDivisor));
    }

    #[test]
    fn discrepancy_reporting() {
        let a = s(0, &[1, 2, 3, 4], 4);
        let b = s(0, &[1, 2, 5], 6);
        let d = a.first_discrepancy(&b, 100).unwrap();
        assert_eq!(d.exponent, 2);
        assert_eq!(d.left, rat(3));
        assert_eq!(d.right, rat(5));
        assert!(a.first_discrepancy(&b, 2).is_none());
    }

    #[test]
    fn display() {
        let a = s(-1, &[1, 0, -2, 1], 3);
        assert_eq!(a.to_string(), "q^-1 - 2*q + q^2 + O(q^3)");
        assert_eq!(LaurentSeries::zero(4).to_string(), "0 + O(q^4)");
    }
}
