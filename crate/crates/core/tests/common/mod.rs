//! Strategies and property bodies shared by the proptest suite and the
//! acceptance harness.
#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::TestCaseError;
use qchain::series::{inv_pochhammer, pochhammer, Count, LaurentSeries, QMonomial};

pub fn series() -> impl Strategy<Value = LaurentSeries> {
    (-3i64..3, prop::collection::vec(-5i64..=5, 0..9), 0i64..4)
        .prop_map(|(lo, c, extra)| LaurentSeries::from_ints(lo, &c, lo + c.len() as i64 + extra))
}

pub fn nonzero_series() -> impl Strategy<Value = LaurentSeries> {
    series().prop_filter("needs a known nonzero term", |s| !s.is_zero())
}

pub fn monomial() -> impl Strategy<Value = QMonomial> {
    (any::<bool>(), -3i64..6).prop_map(|(neg, e)| if neg { QMonomial::neg_q(e) } else { QMonomial::q(e) })
}

fn agree(a: &LaurentSeries, b: &LaurentSeries, what: &str) -> Result<(), TestCaseError> {
    prop_assert!(a.agrees_with(b), "{what}: {a} vs {b}");
    Ok(())
}

pub fn ring_axioms(a: &LaurentSeries, b: &LaurentSeries, c: &LaurentSeries) -> Result<(), TestCaseError> {
    agree(&(a + b), &(b + a), "a+b")?;
    agree(&(a * b), &(b * a), "ab")?;
    agree(&(&(a + b) + c), &(a + &(b + c)), "(a+b)+c")?;
    agree(&(&(a * b) * c), &(a * &(b * c)), "(ab)c")?;
    agree(&(a * &(b + c)), &(&(a * b) + &(a * c)), "a(b+c)")?;
    prop_assert!((a - &a.clone()).is_zero(), "a-a");
    agree(&(a * &LaurentSeries::one(a.prec().max(1))), a, "a*1")?;
    Ok(())
}

pub fn invert_correct(a: &LaurentSeries) -> Result<(), TestCaseError> {
    let inv = a.invert().map_err(|e| TestCaseError::fail(e.to_string()))?;
    let prod = a * &inv;
    prop_assert_eq!(prod.prec(), a.prec() - a.min_exp());
    agree(&prod, &LaurentSeries::one(prod.prec()), "a * a^-1")?;
    Ok(())
}

pub fn substitution_homomorphism(a: &LaurentSeries, b: &LaurentSeries, m: i64) -> Result<(), TestCaseError> {
    let s = |x: &LaurentSeries| x.substitute_power(m);
    agree(&s(&(a * b)), &(&s(a) * &s(b)), "(ab)(q^m)")?;
    agree(&s(&(a + b)), &(&s(a) + &s(b)), "(a+b)(q^m)")?;
    Ok(())
}

pub fn pochhammer_recursion(x: QMonomial, base: i64, n: u64) -> Result<(), TestCaseError> {
    let prec = 25;
    let err = |e: qchain::Error| TestCaseError::fail(e.to_string());
    let a = pochhammer(x, base, Count::Finite(n), prec).map_err(err)?;
    let b = pochhammer(x, base, Count::Finite(n + 1), prec).map_err(err)?;
    let factor = &LaurentSeries::one(prec) - &LaurentSeries::monomial(x.shift(base * n as i64), prec);
    agree(&b, &(&a * &factor), "(x)_(n+1) = (x)_n (1 - x q^n)")?;
    if !b.is_zero() {
        let inv = inv_pochhammer(x, base, Count::Finite(n + 1), prec).map_err(err)?;
        agree(&(&b * &inv), &LaurentSeries::one(prec), "(x)_n / (x)_n")?;
    }
    Ok(())
}
