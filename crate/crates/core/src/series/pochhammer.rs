use super::laurent::LaurentSeries;
use super::monomial::QMonomial;
use crate::error::Result;

/// Length of a q-Pochhammer product.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Count {
    Finite(u64),
    Infinite,
}

/// `(x; q^base)_n` known below `prec`.
///
/// Factors `1 - x q^(base*i)` with a non-positive exponent are Laurent
/// polynomials; there are finitely many of them, so the infinite product
/// is always a well-defined formal Laurent series. A factor equal to
/// `1 - 1` makes the whole product the exact zero series.
pub fn pochhammer(x: QMonomial, base: i64, n: Count, prec: i64) -> Result<LaurentSeries> {
    assert!(base >= 1, "pochhammer base must be positive");
    let factor_exp = |i: u64| x.exp() + base * i as i64;
    // every factor with exponent >= prec is 1 + O(q^prec)
    let last = match n {
        Count::Finite(n) => n,
        Count::Infinite => {
            if x.exp() >= prec {
                0
            } else {
                ((prec - x.exp()) as u64).div_ceil(base as u64)
            }
        }
    };
    let mut deficit = 0;
    for i in 0..last {
        let e = factor_exp(i);
        if e == 0 && !x.is_negative() {
            return Ok(LaurentSeries::zero(prec));
        }
        if e < 0 {
            deficit -= e;
        }
    }
    let mut acc = LaurentSeries::one(prec + deficit);
    for i in 0..last {
        let e = factor_exp(i);
        if e >= prec + deficit {
            continue;
        }
        acc.mul_binomial(x.sign(), e);
    }
    acc.truncate(prec)
}

/// `1 / (x; q^base)_n` known below `prec`, computed by repeated geometric
/// division so no full series inversion is needed.
pub fn inv_pochhammer(x: QMonomial, base: i64, n: Count, prec: i64) -> Result<LaurentSeries> {
    assert!(base >= 1, "pochhammer base must be positive");
    let last = match n {
        Count::Finite(n) => n,
        Count::Infinite => {
            if x.exp() >= prec {
                0
            } else {
                ((prec - x.exp()) as u64).div_ceil(base as u64)
            }
        }
    };
    let mut shift = 0;
    for i in 0..last {
        let e = x.exp() + base * i as i64;
        if e < 0 {
            shift -= e;
        }
    }
    // each negative-exponent factor moves the leading term up by |e|
    let mut acc = LaurentSeries::one(prec - shift);
    for i in 0..last {
        let e = x.exp() + base * i as i64;
        acc.div_binomial(x.sign(), e)?;
    }
    acc.truncate(prec)
}

/// Multiply `s` in place by `(x; q^base)_n` (finite `n`).
pub fn mul_pochhammer(s: &mut LaurentSeries, x: QMonomial, base: i64, n: u64) {
    for i in 0..n {
        s.mul_binomial(x.sign(), x.exp() + base * i as i64);
    }
}

/// Divide `s` in place by `(x; q^base)_n` (finite `n`).
pub fn div_pochhammer(s: &mut LaurentSeries, x: QMonomial, base: i64, n: u64) -> Result<()> {
    for i in 0..n {
        s.div_binomial(x.sign(), x.exp() + base * i as i64)?;
    }
    Ok(())
}

/// A finite quotient `mono * prod (x; q^base)_n / prod (y; q^base)_m`.
///
/// Summands of the multisums and the Bailey transforms are all of this
/// shape; applying one to a series is a sequence of in-place binomial
/// multiplications and geometric divisions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QProduct {
    pub mono: QMonomial,
    num: Vec<(QMonomial, i64, u64)>,
    den: Vec<(QMonomial, i64, u64)>,
}

impl QProduct {
    pub fn new(mono: QMonomial) -> Self {
        QProduct {
            mono,
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    /// Multiply by `(x; q^base)_n`.
    pub fn times(mut self, x: QMonomial, base: i64, n: u64) -> Self {
        if n > 0 {
            self.num.push((x, base, n));
        }
        self
    }

    /// Divide by `(x; q^base)_n`.
    pub fn over(mut self, x: QMonomial, base: i64, n: u64) -> Self {
        if n > 0 {
            self.den.push((x, base, n));
        }
        self
    }

    /// Multiply by a further monomial.
    pub fn scaled(mut self, m: QMonomial) -> Self {
        self.mono = self.mono * m;
        self
    }

    /// Product of two quotients.
    pub fn merged(mut self, other: &QProduct) -> Self {
        self.mono = self.mono * other.mono;
        self.num.extend_from_slice(&other.num);
        self.den.extend_from_slice(&other.den);
        self
    }

    /// The same quotient after `q -> q^m`.
    pub fn at_base(&self, m: i64) -> Self {
        let sub = |v: &Vec<(QMonomial, i64, u64)>| v.iter().map(|&(x, b, n)| (x.at_base(m), b * m, n)).collect();
        QProduct {
            mono: self.mono.at_base(m),
            num: sub(&self.num),
            den: sub(&self.den),
        }
    }

    /// True when every Pochhammer factor starts with a nonzero constant
    /// term, so the valuation of the quotient is that of `mono`.
    pub fn is_unit_like(&self) -> bool {
        self.num.iter().chain(&self.den).all(|&(x, _, _)| x.exp() > 0)
    }

    /// Multiply `s` in place by this quotient.
    pub fn apply(&self, s: &mut LaurentSeries) -> Result<()> {
        if self.mono != QMonomial::ONE {
            *s = s.mul_monomial(self.mono);
        }
        for &(x, base, n) in &self.num {
            mul_pochhammer(s, x, base, n);
        }
        for &(x, base, n) in &self.den {
            div_pochhammer(s, x, base, n)?;
        }
        Ok(())
    }

    /// The quotient as a series known below `prec`.
    pub fn series(&self, prec: i64) -> Result<LaurentSeries> {
        super::with_precision(prec, |w| {
            let mut s = LaurentSeries::one(w - self.mono.exp());
            self.apply(&mut s)?;
            Ok(s)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::laurent::rat;

    fn finite_product(x: QMonomial, base: i64, n: u64, prec: i64) -> LaurentSeries {
        let mut acc = LaurentSeries::one(prec + 64);
        for i in 0..n {
            let f = &LaurentSeries::one(prec + 64) - &LaurentSeries::monomial(x.shift(base * i as i64), prec + 64);
            acc = &acc * &f;
        }
        acc.truncate(prec).unwrap()
    }

    #[test]
    fn single_factor() {
        let p = pochhammer(QMonomial::q(1), 1, Count::Finite(1), 10).unwrap();
        assert_eq!(p, LaurentSeries::from_ints(0, &[1, -1], 10));
    }

    #[test]
    fn empty_product_is_one() {
        let p = pochhammer(QMonomial::q(-3), 2, Count::Finite(0), 10).unwrap();
        assert_eq!(p, LaurentSeries::one(10));
    }

    #[test]
    fn minus_one_infinite_has_constant_two() {
        let p = pochhammer(QMonomial::MINUS_ONE, 1, Count::Infinite, 12).unwrap();
        assert_eq!(p.coeff(0), Some(rat(2)));
        let half = pochhammer(QMonomial::neg_q(1), 1, Count::Infinite, 12).unwrap();
        assert_eq!(p, half.scale_int(2));
    }

    #[test]
    fn minus_q_infinite_matches_finite_expansion() {
        // prod_{i=1}^{5} (1 + q^i) expanded by hand: 1 1 1 2 2 3
        let p = pochhammer(QMonomial::neg_q(1), 1, Count::Infinite, 6).unwrap();
        assert_eq!(p, LaurentSeries::from_ints(0, &[1, 1, 1, 2, 2, 3], 6));
        assert_eq!(p, finite_product(QMonomial::neg_q(1), 1, 5, 6));
    }

    #[test]
    fn vanishing_factor_gives_zero() {
        let p = pochhammer(QMonomial::q(-2), 1, Count::Infinite, 10).unwrap();
        assert!(p.is_zero());
        assert_eq!(p.prec(), 10);
    }

    #[test]
    fn negative_exponent_factors() {
        let x = QMonomial::neg_q(-3);
        let p = pochhammer(x, 2, Count::Finite(4), 15).unwrap();
        assert_eq!(p, finite_product(x, 2, 4, 15));
        let inv = inv_pochhammer(x, 2, Count::Finite(4), 15).unwrap();
        let prod = &(p.truncate(15).unwrap()) * &inv;
        assert!(prod.agrees_with(&LaurentSeries::one(40)));
    }

    #[test]
    fn inverse_of_q_infinite_is_partition_function() {
        let inv = inv_pochhammer(QMonomial::q(1), 1, Count::Infinite, 12).unwrap();
        let p = [1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42, 56];
        assert_eq!(inv, LaurentSeries::from_ints(0, &p, 12));
    }
}
