//! Bailey pairs as lazily evaluated sequences, the Bailey lemma and its
//! limits, the Bailey chain step and the change of base from `q^2` to `q`.
//!
//! A pair is stored in base `q`; evaluation at base multiplier `m` is the
//! substitution `q -> q^m` applied to the base-`q` value, which is what the
//! change of base needs.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::multisum::key_beta;
use crate::series::{pochhammer, with_precision, Count, LaurentSeries, QMonomial, QProduct};

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}

fn q(e: i64) -> QMonomial {
    QMonomial::q(e)
}

fn alt(n: u64) -> i64 {
    if n % 2 == 1 {
        -1
    } else {
        1
    }
}

/// `ceil(a / m)` for `m > 0`.
fn div_ceil(a: i64, m: i64) -> i64 {
    -((-a).div_euclid(m))
}

type Generator = dyn Fn(u64, i64) -> Result<LaurentSeries> + Send + Sync;
type Factors = Vec<(QMonomial, i64)>;

/// A sequence `n -> s_n(q)` of series, memoized per index at the highest
/// precision computed so far.
#[derive(Clone)]
pub struct Sequence {
    f: Arc<Generator>,
    memo: Arc<Mutex<HashMap<u64, LaurentSeries>>>,
}

impl Sequence {
    /// `f(n, prec)` must return `s_n` known at least below `prec`.
    pub fn new(f: impl Fn(u64, i64) -> Result<LaurentSeries> + Send + Sync + 'static) -> Self {
        Sequence {
            f: Arc::new(f),
            memo: Arc::new(Mutex::new(HashMap::new())),
        }
    }

    /// `s_n(q)` below `prec`.
    pub fn at(&self, n: u64, prec: i64) -> Result<LaurentSeries> {
        if let Some(s) = self.memo.lock().unwrap().get(&n) {
            if s.prec() >= prec {
                return s.truncate(prec);
            }
        }
        // computed outside the lock: generators call into other sequences
        let s = (self.f)(n, prec)?;
        let mut memo = self.memo.lock().unwrap();
        let keep = memo.get(&n).is_none_or(|old| old.prec() < s.prec());
        if keep {
            memo.insert(n, s.clone());
        }
        s.truncate(prec)
    }

    /// `s_n(q^base)` below `prec`.
    pub fn eval(&self, n: u64, base: i64, prec: i64) -> Result<LaurentSeries> {
        if base == 1 {
            return self.at(n, prec);
        }
        let inner = div_ceil(prec - 1, base) + 1;
        self.at(n, inner)?.substitute_power(base).truncate(prec)
    }
}

/// A Bailey pair relative to `a`:
/// `beta_n = sum_{k<=n} alpha_k / ((q)_(n-k) (aq)_(n+k))`.
#[derive(Clone)]
pub struct BaileyPair {
    name: String,
    a: QMonomial,
    alpha: Sequence,
    beta: Sequence,
}

impl fmt::Debug for BaileyPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BaileyPair({}, a = {})", self.name, self.a)
    }
}

impl BaileyPair {
    pub fn new(name: impl Into<String>, a: QMonomial, alpha: Sequence, beta: Sequence) -> Self {
        BaileyPair {
            name: name.into(),
            a,
            alpha,
            beta,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// The relative parameter, in base `q`.
    pub fn a(&self) -> QMonomial {
        self.a
    }

    /// `alpha_n(q^base)` below `prec`.
    pub fn alpha(&self, n: u64, base: i64, prec: i64) -> Result<LaurentSeries> {
        self.alpha.eval(n, base, prec)
    }

    /// `beta_n(q^base)` below `prec`.
    pub fn beta(&self, n: u64, base: i64, prec: i64) -> Result<LaurentSeries> {
        self.beta.eval(n, base, prec)
    }

    pub fn alpha_sequence(&self) -> &Sequence {
        &self.alpha
    }

    pub fn beta_sequence(&self) -> &Sequence {
        &self.beta
    }
}

/// `factor * s_n` below `prec`, raising the precision of `s_n` as needed.
fn scaled_term(factor: &QProduct, seq: &Sequence, n: u64, base: i64, prec: i64) -> Result<LaurentSeries> {
    with_precision(prec, |w| {
        let mut s = seq.eval(n, base, w - factor.mono.exp())?;
        factor.apply(&mut s)?;
        Ok(s)
    })
}

/// `(beta_n, sum_r alpha_r / ((q)_(n-r) (aq)_(n+r)))` below `prec`.
pub fn pair_relation(p: &BaileyPair, n: u64, prec: i64) -> Result<(LaurentSeries, LaurentSeries)> {
    let aq = p.a.shift(1);
    let rhs = with_precision(prec, |w| {
        let mut acc = LaurentSeries::zero(w);
        for k in 0..=n {
            let f = QProduct::new(QMonomial::ONE).over(q(1), 1, n - k).over(aq, 1, n + k);
            acc = &acc + &scaled_term(&f, &p.alpha, k, 1, w)?;
        }
        Ok(acc)
    })?;
    Ok((p.beta(n, 1, prec)?, rhs))
}

/// True iff the defining relation holds below `prec` for every `n <= n_max`.
pub fn verify_pair(p: &BaileyPair, n_max: u64, prec: i64) -> Result<bool> {
    for n in 0..=n_max {
        let (lhs, rhs) = pair_relation(p, n, prec)?;
        if lhs.first_discrepancy(&rhs, prec).is_some() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The `b`, `c` parameters of the Bailey lemma.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpecParam {
    Monomial(QMonomial),
    Infinity,
    /// The fused pair `(b, c) = (sqrt(q), -sqrt(q))`; only meaningful as both
    /// parameters of [`bailey_limit_sum`].
    SqrtConjugate,
}

/// `(x; q^base)_n` would contain the factor `1 - 1` for some `n`.
fn hits_zero(x: QMonomial, base: i64) -> bool {
    !x.is_negative() && x.exp() <= 0 && x.exp().rem_euclid(base) == 0
}

fn no_pole(x: QMonomial, base: i64, what: &str) -> Result<()> {
    if hits_zero(x, base) {
        return Err(Error::PolarParameters(format!(
            "({x}; q^{base})_n in a denominator vanishes ({what})"
        )));
    }
    Ok(())
}

/// The per-index factors of a chain step: `alpha'_n = A(n) alpha_n` and
/// `beta'_n = sum_k B(n, k) beta_k`.
#[derive(Clone, Copy, Debug)]
enum StepKind {
    Finite(QMonomial, QMonomial),
    OneInfinite(QMonomial),
    BothInfinite,
}

impl StepKind {
    fn new(a: QMonomial, b: SpecParam, c: SpecParam) -> Result<Self> {
        let aq = a.shift(1);
        match (b, c) {
            (SpecParam::Monomial(b), SpecParam::Monomial(c)) => {
                no_pole(aq * b.inv(), 1, "aq/b")?;
                no_pole(aq * c.inv(), 1, "aq/c")?;
                Ok(StepKind::Finite(b, c))
            }
            (SpecParam::Monomial(b), SpecParam::Infinity) | (SpecParam::Infinity, SpecParam::Monomial(b)) => {
                no_pole(aq * b.inv(), 1, "aq/b")?;
                Ok(StepKind::OneInfinite(b))
            }
            (SpecParam::Infinity, SpecParam::Infinity) => Ok(StepKind::BothInfinite),
            _ => Err(Error::InvalidParams(
                "the fused sqrt(q) pair is not a chain step parameter".into(),
            )),
        }
    }

    /// `A(n)`, also the weight of `alpha_n` in the Bailey lemma.
    fn alpha_factor(self, a: QMonomial, n: u64) -> QProduct {
        let aq = a.shift(1);
        let ni = n as i64;
        match self {
            StepKind::Finite(b, c) => {
                let w = aq * (b * c).inv();
                QProduct::new(w.pow(ni))
                    .times(b, 1, n)
                    .times(c, 1, n)
                    .over(aq * b.inv(), 1, n)
                    .over(aq * c.inv(), 1, n)
            }
            StepKind::OneInfinite(b) => {
                let u = aq * b.inv();
                QProduct::new(QMonomial::new(alt(n), binom2(ni)) * u.pow(ni))
                    .times(b, 1, n)
                    .over(u, 1, n)
            }
            StepKind::BothInfinite => QProduct::new(a.pow(ni).shift(ni * ni)),
        }
    }

    /// The weight of `beta_n` in the Bailey lemma.
    fn beta_weight(self, a: QMonomial, n: u64) -> QProduct {
        let aq = a.shift(1);
        let ni = n as i64;
        match self {
            StepKind::Finite(b, c) => QProduct::new((aq * (b * c).inv()).pow(ni))
                .times(b, 1, n)
                .times(c, 1, n),
            StepKind::OneInfinite(b) => {
                QProduct::new(QMonomial::new(alt(n), binom2(ni)) * (aq * b.inv()).pow(ni)).times(b, 1, n)
            }
            StepKind::BothInfinite => QProduct::new(a.pow(ni).shift(ni * ni)),
        }
    }

    /// `B(n, k)`.
    fn beta_factor(self, a: QMonomial, n: u64, k: u64) -> QProduct {
        let aq = a.shift(1);
        let base = self.beta_weight(a, k).over(q(1), 1, n - k);
        match self {
            StepKind::Finite(b, c) => {
                let w = aq * (b * c).inv();
                base.times(w, 1, n - k)
                    .over(aq * b.inv(), 1, n)
                    .over(aq * c.inv(), 1, n)
            }
            StepKind::OneInfinite(b) => base.over(aq * b.inv(), 1, n),
            StepKind::BothInfinite => base,
        }
    }
}

/// One step along the Bailey chain with parameters `b`, `c`, where either
/// may be sent to infinity.
pub fn chain_step(p: &BaileyPair, b: SpecParam, c: SpecParam) -> Result<BaileyPair> {
    let a = p.a;
    let kind = StepKind::new(a, b, c)?;
    let parent = p.clone();
    let alpha = Sequence::new(move |n, prec| scaled_term(&kind.alpha_factor(a, n), &parent.alpha, n, 1, prec));
    let parent = p.clone();
    let beta = Sequence::new(move |n, prec| {
        with_precision(prec, |w| {
            let mut acc = LaurentSeries::zero(w);
            for k in 0..=n {
                acc = &acc + &scaled_term(&kind.beta_factor(a, n, k), &parent.beta, k, 1, w)?;
            }
            Ok(acc)
        })
    });
    let name = format!("{}'", p.name);
    Ok(BaileyPair::new(name, a, alpha, beta))
}

/// Change of base for pairs relative to `q`:
/// `alpha'_n = (1+q)/(1+q^(2n+1)) q^n alpha_n(q^2)`,
/// `beta'_n = sum_k (-q)_(2k) q^k beta_k(q^2) / (q^2;q^2)_(n-k)`.
pub fn change_base(p: &BaileyPair) -> Result<BaileyPair> {
    if p.a != q(1) {
        return Err(Error::WrongRelativeParameter(format!(
            "change of base needs a = q, got a = {}",
            p.a
        )));
    }
    let parent = p.clone();
    let alpha = Sequence::new(move |n, prec| {
        let ni = n as i64;
        let f = QProduct::new(q(ni))
            .times(QMonomial::neg_q(1), 1, 1)
            .over(QMonomial::neg_q(2 * ni + 1), 1, 1);
        scaled_term(&f, &parent.alpha, n, 2, prec)
    });
    let parent = p.clone();
    let beta = Sequence::new(move |n, prec| {
        with_precision(prec, |w| {
            let mut acc = LaurentSeries::zero(w);
            for k in 0..=n {
                let f = QProduct::new(q(k as i64))
                    .times(QMonomial::neg_q(1), 1, 2 * k)
                    .over(q(2), 2, n - k);
                acc = &acc + &scaled_term(&f, &parent.beta, k, 2, w)?;
            }
            Ok(acc)
        })
    });
    Ok(BaileyPair::new(format!("base({})", p.name), p.a, alpha, beta))
}

/// The two sides of the Bailey lemma for `p` evaluated at `q -> q^base`,
/// with `b` and `c` given directly as monomials in `q`:
///
/// ```text
/// sum (b)_n (c)_n (aq/bc)^n beta_n
///   = (aq/b)_inf (aq/c)_inf / ((aq)_inf (aq/bc)_inf) sum (b)_n (c)_n (aq/bc)^n / ((aq/b)_n (aq/c)_n) alpha_n
/// ```
///
/// Pochhammer symbols are in base `q^base`. Infinite `b` or `c` use the
/// usual limits; the fused [`SpecParam::SqrtConjugate`] pair stands for
/// `b = q^(base/2)`, `c = -q^(base/2)`.
pub fn bailey_limit_sum(
    p: &BaileyPair,
    b: SpecParam,
    c: SpecParam,
    base: i64,
    prec: i64,
) -> Result<(LaurentSeries, LaurentSeries)> {
    if base < 1 {
        return Err(Error::InvalidParams(format!("base must be positive, got {base}")));
    }
    let a = p.a.at_base(base);
    let aq = a.shift(base);
    let fused = matches!(b, SpecParam::SqrtConjugate) || matches!(c, SpecParam::SqrtConjugate);
    let bn = |n: u64| -> QProduct {
        let ni = n as i64;
        if fused {
            return QProduct::new((-a).pow(ni)).times(q(base), 2 * base, n);
        }
        match (b, c) {
            (SpecParam::Monomial(b), SpecParam::Monomial(c)) => QProduct::new((aq * (b * c).inv()).pow(ni))
                .times(b, base, n)
                .times(c, base, n),
            (SpecParam::Monomial(b), SpecParam::Infinity) | (SpecParam::Infinity, SpecParam::Monomial(b)) => {
                QProduct::new(QMonomial::new(alt(n), base * binom2(ni)) * (aq * b.inv()).pow(ni)).times(b, base, n)
            }
            _ => QProduct::new(a.pow(ni).shift(base * ni * ni)),
        }
    };
    // (aq/b)_n (aq/c)_n and the infinite prefactor, as lists of (x, step)
    let (den, pre_num, pre_den): (Factors, Factors, Factors) = if fused {
        if b != c {
            return Err(Error::InvalidParams(
                "the sqrt(q) pair must be used for both b and c".into(),
            ));
        }
        let a2q = (a * a).shift(base);
        (
            vec![(a2q, 2 * base)],
            vec![(a2q, 2 * base)],
            vec![(aq, base), (-a, base)],
        )
    } else {
        match (b, c) {
            (SpecParam::Monomial(b), SpecParam::Monomial(c)) => {
                let (u, v, w) = (aq * b.inv(), aq * c.inv(), aq * (b * c).inv());
                for (x, what) in [(u, "aq/b"), (v, "aq/c"), (w, "aq/bc")] {
                    no_pole(x, base, what)?;
                }
                (
                    vec![(u, base), (v, base)],
                    vec![(u, base), (v, base)],
                    vec![(aq, base), (w, base)],
                )
            }
            (SpecParam::Monomial(b), SpecParam::Infinity) | (SpecParam::Infinity, SpecParam::Monomial(b)) => {
                let u = aq * b.inv();
                no_pole(u, base, "aq/b")?;
                (vec![(u, base)], vec![(u, base)], vec![(aq, base)])
            }
            (SpecParam::Infinity, SpecParam::Infinity) => (vec![], vec![], vec![(aq, base)]),
            _ => unreachable!(),
        }
    };
    no_pole(aq, base, "aq")?;

    let lhs = converging_sum(prec, |n, w| scaled_term(&bn(n), &p.beta, n, base, w))?;
    let rhs = with_precision(prec, |w| {
        let mut pre = LaurentSeries::one(w);
        for &(x, step) in &pre_num {
            pre = &pre * &pochhammer(x, step, Count::Infinite, w)?;
        }
        let mut den_prod = LaurentSeries::one(w);
        for &(x, step) in &pre_den {
            den_prod = &den_prod * &pochhammer(x, step, Count::Infinite, w)?;
        }
        let pre = pre.div(&den_prod)?;
        let inner = w - pre.min_exp().min(0);
        let sum = converging_sum(inner, |n, w| {
            let mut f = bn(n);
            for &(x, step) in &den {
                f = f.over(x, step, n);
            }
            scaled_term(&f, &p.alpha, n, base, w)
        })?;
        Ok(&pre * &sum)
    })?;
    Ok((lhs, rhs))
}

/// `sum_{n>=0} term(n)` below `prec`, stopping once three consecutive terms
/// vanish below `prec`.
fn converging_sum(prec: i64, term: impl Fn(u64, i64) -> Result<LaurentSeries>) -> Result<LaurentSeries> {
    let cap = 4 * prec.max(0) as u64 + 64;
    let mut acc = LaurentSeries::zero(prec);
    let mut quiet = 0;
    for n in 0..=cap {
        let t = term(n, prec)?;
        if t.is_zero() {
            quiet += 1;
            if quiet == 3 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
            acc = &acc + &t;
        }
    }
    Err(Error::NonConvergent(format!(
        "Bailey lemma terms still below q^{prec} after n = {cap}"
    )))
}

/// `(1 - q^(2n+1))/(1 - q) * sum_{|j|<=n} (-1)^j q^(-c j^2)`, times `q^lead`,
/// as an exact Laurent polynomial known below `prec`.
fn theta_block(lead: i64, c: i64, n: u64, prec: i64) -> LaurentSeries {
    let ni = n as i64;
    let lo = lead - c * ni * ni;
    let hi = lead + 2 * ni;
    let mut coeffs = vec![0i64; (hi - lo + 1) as usize];
    for j in -ni..=ni {
        let sign = if j.rem_euclid(2) == 1 { -1 } else { 1 };
        for i in 0..=2 * ni {
            coeffs[(lead - c * j * j + i - lo) as usize] += sign;
        }
    }
    LaurentSeries::from_ints(lo, &coeffs, prec)
}

/// Built-in pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Builtin {
    /// `alpha_n = (a)_n (1 - a q^(2n)) (-1)^n q^(C(n,2)) / ((q)_n (1 - a))`, `beta_n = [n = 0]`.
    Unit(QMonomial),
    /// `alpha_n = 4 (-1)^n q^(C(n+1,2)) / (1 + q^n)` for `n >= 1`, `beta_n = 1/(-q)_n^2`, relative to 1.
    Foq,
    /// `alpha_n = q^(n^2) (1 - q^(2n+1))/(1 - q) sum_{|j|<=n} (-1)^j q^(-j^2)`,
    /// `beta_n = (-1)^n / (q^2;q^2)_n`, relative to `q`.
    AndrewsHickerson,
}

/// One of the built-in pairs.
pub fn builtin(which: Builtin) -> BaileyPair {
    match which {
        Builtin::Unit(a) => {
            // (a)_n / (1 - a) = (aq)_(n-1), which also covers a = 1
            let alpha = Sequence::new(move |n, prec| {
                if n == 0 {
                    return Ok(LaurentSeries::one(prec));
                }
                let ni = n as i64;
                QProduct::new(QMonomial::new(alt(n), binom2(ni)))
                    .times(a.shift(1), 1, n - 1)
                    .times(a.shift(2 * ni), 1, 1)
                    .over(q(1), 1, n)
                    .series(prec)
            });
            let beta = Sequence::new(|n, prec| {
                Ok(if n == 0 {
                    LaurentSeries::one(prec)
                } else {
                    LaurentSeries::zero(prec)
                })
            });
            BaileyPair::new(format!("unit({a})"), a, alpha, beta)
        }
        Builtin::Foq => {
            let alpha = Sequence::new(|n, prec| {
                if n == 0 {
                    return Ok(LaurentSeries::one(prec));
                }
                let ni = n as i64;
                let s = QProduct::new(QMonomial::new(alt(n), binom2(ni + 1)))
                    .over(QMonomial::neg_q(ni), 1, 1)
                    .series(prec)?;
                Ok(s.scale_int(4))
            });
            let beta = Sequence::new(|n, prec| {
                QProduct::new(QMonomial::ONE)
                    .over(QMonomial::neg_q(1), 1, n)
                    .over(QMonomial::neg_q(1), 1, n)
                    .series(prec)
            });
            BaileyPair::new("foq", QMonomial::ONE, alpha, beta)
        }
        Builtin::AndrewsHickerson => {
            let alpha = Sequence::new(|n, prec| {
                let ni = n as i64;
                Ok(theta_block(ni * ni, 1, n, prec))
            });
            let beta = Sequence::new(|n, prec| QProduct::new(QMonomial::new(alt(n), 0)).over(q(2), 2, n).series(prec));
            BaileyPair::new("andrews_hickerson", q(1), alpha, beta)
        }
    }
}

/// Parses `unit(<monomial>)`, `foq`, `andrews_hickerson`.
pub fn builtin_by_name(name: &str) -> Result<BaileyPair> {
    let name = name.trim();
    if let Some(arg) = name.strip_prefix("unit(").and_then(|r| r.strip_suffix(')')) {
        let a: QMonomial = arg.parse().map_err(|_| Error::UnknownPair(name.to_string()))?;
        return Ok(builtin(Builtin::Unit(a)));
    }
    match name {
        "foq" => Ok(builtin(Builtin::Foq)),
        "andrews_hickerson" => Ok(builtin(Builtin::AndrewsHickerson)),
        _ => Err(Error::UnknownPair(name.to_string())),
    }
}

/// The key pair relative to `q` for `k >= 3`:
/// `alpha_n = q^(((2^(k-1)+1) n^2 + (2^(k-1)-1) n)/2) (1-q^(2n+1))/(1-q) sum_{|j|<=n} (-1)^j q^(-2^(k-2) j^2)`
/// and `beta_n = (1/(-q)_n) sum B_k(n, n_(k-1), ..., n_1)`.
pub fn key_pair(k: usize) -> Result<BaileyPair> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("the key pair needs k >= 3, got {k}")));
    }
    let p = 1i64 << (k - 1);
    let c = 1i64 << (k - 2);
    let alpha = Sequence::new(move |n, prec| {
        let ni = n as i64;
        Ok(theta_block(((p + 1) * ni * ni + (p - 1) * ni) / 2, c, n, prec))
    });
    let beta = Sequence::new(move |n, prec| key_beta(k, n, prec));
    Ok(BaileyPair::new(format!("key({k})"), q(1), alpha, beta))
}

/// The key pair rebuilt from the Andrews-Hickerson pair by `k-2` changes of
/// base followed by a chain step with `b = -q`, `c -> infinity`.
pub fn key_pair_iterated(k: usize) -> Result<BaileyPair> {
    if k < 3 {
        return Err(Error::InvalidParams(format!("the key pair needs k >= 3, got {k}")));
    }
    let mut p = builtin(Builtin::AndrewsHickerson);
    for _ in 0..k - 2 {
        p = change_base(&p)?;
    }
    chain_step(&p, SpecParam::Monomial(QMonomial::neg_q(1)), SpecParam::Infinity)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn neg_q(e: i64) -> QMonomial {
        QMonomial::neg_q(e)
    }

    #[test]
    fn builtin_pairs_satisfy_relation() {
        for p in [
            builtin(Builtin::Unit(q(1))),
            builtin(Builtin::Unit(QMonomial::ONE)),
            builtin(Builtin::Foq),
            builtin(Builtin::AndrewsHickerson),
        ] {
            assert!(verify_pair(&p, 8, 60).unwrap(), "{p:?}");
        }
    }

    #[test]
    fn tampered_pair_rejected() {
        let p = builtin(Builtin::Foq);
        let beta = p.beta_sequence().clone();
        let bad = Sequence::new(move |n, prec| {
            let b = beta.at(n, prec)?;
            Ok(if n == 1 {
                &b + &LaurentSeries::monomial(q(1), prec)
            } else {
                b
            })
        });
        let t = BaileyPair::new("tampered", p.a(), p.alpha_sequence().clone(), bad);
        assert!(!verify_pair(&t, 3, 30).unwrap());
    }

    #[test]
    fn unit_at_one_closed_form() {
        let p = builtin(Builtin::Unit(QMonomial::ONE));
        assert_eq!(p.alpha(0, 1, 10).unwrap(), LaurentSeries::one(10));
        // (-1)^3 q^3 (1 + q^3)
        assert_eq!(
            p.alpha(3, 1, 10).unwrap(),
            LaurentSeries::from_ints(3, &[-1, 0, 0, -1], 10)
        );
    }

    #[test]
    fn foq_pair_from_unit_pair() {
        let unit = builtin(Builtin::Unit(QMonomial::ONE));
        let minus_one = SpecParam::Monomial(QMonomial::MINUS_ONE);
        let derived = chain_step(&unit, minus_one, minus_one).unwrap();
        let foq = builtin(Builtin::Foq);
        for n in 0..=6 {
            assert_eq!(
                derived.alpha(n, 1, 40).unwrap(),
                foq.alpha(n, 1, 40).unwrap(),
                "alpha_{n}"
            );
            assert_eq!(derived.beta(n, 1, 40).unwrap(), foq.beta(n, 1, 40).unwrap(), "beta_{n}");
        }
    }

    #[test]
    fn derived_pairs_satisfy_relation() {
        let ah = builtin(Builtin::AndrewsHickerson);
        let once = change_base(&ah).unwrap();
        let step = chain_step(&once, SpecParam::Monomial(neg_q(1)), SpecParam::Infinity).unwrap();
        let both = chain_step(&builtin(Builtin::Unit(q(1))), SpecParam::Infinity, SpecParam::Infinity).unwrap();
        let finite = chain_step(&ah, SpecParam::Monomial(neg_q(1)), SpecParam::Monomial(neg_q(2))).unwrap();
        for p in [once, step, both, finite] {
            assert!(verify_pair(&p, 6, 40).unwrap(), "{p:?}");
        }
    }

    #[test]
    fn change_base_needs_a_equal_q() {
        assert!(matches!(
            change_base(&builtin(Builtin::Foq)),
            Err(Error::WrongRelativeParameter(_))
        ));
    }

    #[test]
    fn change_base_matches_displayed_sequences() {
        let ah = builtin(Builtin::AndrewsHickerson);
        let once = change_base(&ah).unwrap();
        let twice = change_base(&once).unwrap();
        for n in 0..=4u64 {
            let ni = n as i64;
            assert_eq!(once.alpha(n, 1, 50).unwrap(), theta_block(2 * ni * ni + ni, 2, n, 50));
            assert_eq!(
                twice.alpha(n, 1, 50).unwrap(),
                theta_block(4 * ni * ni + 3 * ni, 4, n, 50)
            );
            // beta'_n = sum (-q)_(2 n1) q^n1 (-1)^n1 / ((q^2;q^2)_(n-n1) (q^4;q^4)_n1)
            let mut beta1 = LaurentSeries::zero(50);
            for n1 in 0..=n {
                let t = QProduct::new(QMonomial::new(alt(n1), n1 as i64))
                    .times(neg_q(1), 1, 2 * n1)
                    .over(q(2), 2, n - n1)
                    .over(q(4), 4, n1)
                    .series(50)
                    .unwrap();
                beta1 = &beta1 + &t;
            }
            assert_eq!(once.beta(n, 1, 50).unwrap(), beta1);
        }
    }

    #[test]
    fn key_pair_basics() {
        let p = key_pair(3).unwrap();
        assert_eq!(p.alpha(0, 1, 10).unwrap(), LaurentSeries::one(10));
        assert_eq!(p.beta(0, 1, 10).unwrap(), LaurentSeries::one(10));
        assert!(verify_pair(&p, 6, 60).unwrap());
    }

    #[test]
    fn key_pair_equals_iterated_construction() {
        for k in 3..=4 {
            let closed = key_pair(k).unwrap();
            let built = key_pair_iterated(k).unwrap();
            for n in 0..=5 {
                assert_eq!(
                    closed.alpha(n, 1, 60).unwrap(),
                    built.alpha(n, 1, 60).unwrap(),
                    "k={k} alpha_{n}"
                );
                assert_eq!(
                    closed.beta(n, 1, 60).unwrap(),
                    built.beta(n, 1, 60).unwrap(),
                    "k={k} beta_{n}"
                );
            }
        }
    }

    #[test]
    fn limit_sum_balances() {
        let unit = builtin(Builtin::Unit(QMonomial::ONE));
        let (l, r) = bailey_limit_sum(&unit, SpecParam::Infinity, SpecParam::Infinity, 1, 40).unwrap();
        assert_eq!(l, r);
        let foq = builtin(Builtin::Foq);
        let (l, r) = bailey_limit_sum(&foq, SpecParam::Infinity, SpecParam::Infinity, 1, 40).unwrap();
        assert_eq!(l, r);
        let key = key_pair(3).unwrap();
        for (b, c, base) in [
            (SpecParam::Monomial(neg_q(1)), SpecParam::Infinity, 1),
            (SpecParam::Infinity, SpecParam::Infinity, 1),
            (SpecParam::Monomial(q(1)), SpecParam::Infinity, 2),
            (SpecParam::SqrtConjugate, SpecParam::SqrtConjugate, 1),
        ] {
            let (l, r) = bailey_limit_sum(&key, b, c, base, 30).unwrap();
            assert_eq!(l, r, "{b:?} {c:?} base {base}");
        }
    }

    #[test]
    fn memo_and_base_evaluation() {
        let p = builtin(Builtin::Foq);
        let direct = p.beta(2, 1, 20).unwrap().substitute_power(3).truncate(40).unwrap();
        assert_eq!(p.beta(2, 3, 40).unwrap(), direct);
        assert_eq!(p.beta(2, 1, 5).unwrap(), p.beta(2, 1, 20).unwrap().truncate(5).unwrap());
    }

    #[test]
    fn unknown_pair() {
        assert!(matches!(builtin_by_name("nope"), Err(Error::UnknownPair(_))));
        assert_eq!(builtin_by_name("unit(q)").unwrap().a(), q(1));
    }
}
