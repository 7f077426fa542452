//! The identity registry: every checkable identity with the recipes for its
//! two sides, plus the series that `expand` can print.

use std::fmt;
use std::ops::RangeInclusive;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use num_traits::Zero;
use rayon::prelude::*;
use serde_json::json;

use crate::bailey::{
    bailey_limit_sum, builtin, chain_step, change_base, key_pair, key_pair_iterated, pair_relation, BaileyPair,
    Builtin, SpecParam,
};
use crate::error::{Error, Result};
use crate::forms;
use crate::indefinite::{f_transform_rhs, hm_sides, indefinite_f, FabcParams, Transform};
use crate::multisum::{
    andrews_gordon, bilateral_f_sum, classical, mixed_multisum, r_series, rogers_ramanujan, Classical, Mixed, Side,
};
use crate::series::{pochhammer, with_precision, Count, Discrepancy, LaurentSeries, QMonomial, Rational};
use crate::theta::{jtheta, m3_sides, triple_product_sum};

/// Parameters of a registry check or an expansion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Params {
    pub k: Option<i64>,
    pub z: Option<QMonomial>,
}

impl Params {
    pub fn none() -> Self {
        Params::default()
    }

    pub fn k(k: i64) -> Self {
        Params { k: Some(k), z: None }
    }

    pub fn kz(k: i64, z: QMonomial) -> Self {
        Params { k: Some(k), z: Some(z) }
    }

    fn k_or(&self, default: i64) -> i64 {
        self.k.unwrap_or(default)
    }

    fn ku(&self) -> usize {
        self.k.unwrap_or(0) as usize
    }

    fn zv(&self) -> QMonomial {
        self.z.unwrap_or(QMonomial::MINUS_ONE)
    }
}

impl fmt::Display for Params {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.k, self.z) {
            (None, None) => write!(f, "-"),
            (Some(k), None) => write!(f, "k={k}"),
            (None, Some(z)) => write!(f, "z={z}"),
            (Some(k), Some(z)) => write!(f, "k={k} z={z}"),
        }
    }
}

/// Which parameters a record accepts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParamDomain {
    Fixed,
    K(RangeInclusive<i64>),
    /// `k` in range plus a free monomial `z`, `-1` by default.
    KZ(RangeInclusive<i64>),
}

/// One point of a record's default grid; `cap` bounds the order used for it.
#[derive(Clone, Copy, Debug)]
pub struct GridPoint {
    pub params: Params,
    pub cap: Option<i64>,
}

/// One pair of series that must agree.
#[derive(Clone, Debug)]
pub struct Comparison {
    pub label: String,
    pub lhs: LaurentSeries,
    pub rhs: LaurentSeries,
}

impl Comparison {
    pub fn new(label: impl Into<String>, lhs: LaurentSeries, rhs: LaurentSeries) -> Self {
        Comparison {
            label: label.into(),
            lhs,
            rhs,
        }
    }
}

/// Recipe producing the comparisons of one record.
pub type SidesFn = fn(&Params, i64) -> Result<Vec<Comparison>>;
type EmitFn = fn(&Params, i64) -> Result<LaurentSeries>;

#[derive(Clone, Copy)]
enum Recipe {
    Sides(SidesFn),
    /// Emits a difference series that is reported, never judged.
    Emit(EmitFn),
}

/// A registry entry.
#[derive(Clone)]
pub struct IdentityRecord {
    pub id: &'static str,
    pub citation: &'static str,
    pub default_order: i64,
    pub domain: ParamDomain,
    pub grid: Vec<GridPoint>,
    recipe: Recipe,
}

impl fmt::Debug for IdentityRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdentityRecord")
            .field("id", &self.id)
            .field("domain", &self.domain)
            .finish()
    }
}

impl IdentityRecord {
    pub fn new(
        id: &'static str,
        citation: &'static str,
        default_order: i64,
        domain: ParamDomain,
        grid: Vec<GridPoint>,
        sides: SidesFn,
    ) -> Self {
        IdentityRecord {
            id,
            citation,
            default_order,
            domain,
            grid,
            recipe: Recipe::Sides(sides),
        }
    }

    /// True for the difference-series emitters.
    pub fn is_emitter(&self) -> bool {
        matches!(self.recipe, Recipe::Emit(_))
    }

    /// Fills in defaults and rejects parameters outside the domain.
    pub fn resolve(&self, p: &Params) -> Result<Params> {
        let bad = |msg: String| Err(Error::BadParams(format!("{}: {msg}", self.id)));
        let default_k = self.grid.first().and_then(|g| g.params.k);
        match &self.domain {
            ParamDomain::Fixed => {
                if p.k.is_some() || p.z.is_some() {
                    return bad("takes no parameters".into());
                }
                Ok(Params::none())
            }
            ParamDomain::K(range) | ParamDomain::KZ(range) => {
                let k = p.k.or(default_k).expect("k-records have a grid");
                if !range.contains(&k) {
                    return bad(format!("k = {k} outside {}..={}", range.start(), range.end()));
                }
                match (&self.domain, p.z) {
                    (ParamDomain::KZ(_), z) => Ok(Params::kz(k, z.unwrap_or(QMonomial::MINUS_ONE))),
                    (_, Some(_)) => bad("takes no z".into()),
                    _ => Ok(Params::k(k)),
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Verified,
    Failed,
    Skipped,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Verified => "VERIFIED",
            Status::Failed => "FAILED",
            Status::Skipped => "SKIPPED",
        })
    }
}

/// The outcome of one check.
#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: String,
    pub params: Params,
    pub order: i64,
    pub status: Status,
    pub first_discrepancy: Option<Discrepancy>,
    /// Label of the failing comparison, the skip reason, or an evaluation error.
    pub detail: Option<String>,
    /// The difference series of an emitter.
    pub series: Option<LaurentSeries>,
    pub wall_time: Duration,
}

impl Verdict {
    /// One report line; wall time is left out so reports are reproducible.
    pub fn report_line(&self) -> String {
        let mut line = format!("{:<8} {} [{}] order={}", self.status, self.id, self.params, self.order);
        if let Some(d) = &self.first_discrepancy {
            line += &format!(" first difference at q^{}: lhs {} rhs {}", d.exponent, d.left, d.right);
        }
        if let Some(detail) = &self.detail {
            line += &format!(" ({detail})");
        }
        line
    }
}

/// Judges a list of comparisons below `order`.
pub fn judge(id: &str, params: Params, order: i64, comparisons: &[Comparison]) -> Result<Verdict> {
    let mut verdict = Verdict {
        id: id.to_string(),
        params,
        order,
        status: Status::Verified,
        first_discrepancy: None,
        detail: None,
        series: None,
        wall_time: Duration::ZERO,
    };
    for c in comparisons {
        let available = c.lhs.prec().min(c.rhs.prec());
        if available < order {
            return Err(Error::PrecisionLoss {
                requested: order,
                available,
            });
        }
        if let Some(d) = c.lhs.first_discrepancy(&c.rhs, order) {
            verdict.status = Status::Failed;
            verdict.first_discrepancy = Some(d);
            verdict.detail = Some(c.label.clone());
            break;
        }
    }
    Ok(verdict)
}

/// The full static registry.
pub fn registry() -> &'static [IdentityRecord] {
    static REG: OnceLock<Vec<IdentityRecord>> = OnceLock::new();
    REG.get_or_init(build)
}

/// Looks a record up by id.
pub fn lookup(id: &str) -> Result<&'static IdentityRecord> {
    registry()
        .iter()
        .find(|r| r.id == id)
        .ok_or_else(|| Error::UnknownIdentity(id.to_string()))
}

/// Evaluates both sides of `id` and compares them below `order`.
pub fn check(id: &str, params: &Params, order: i64) -> Result<Verdict> {
    check_record(lookup(id)?, params, order)
}

/// [`check`] for a record that need not be in the registry.
pub fn check_record(rec: &IdentityRecord, params: &Params, order: i64) -> Result<Verdict> {
    let params = rec.resolve(params)?;
    if order < 1 {
        return Err(Error::BadParams(format!("order must be positive, got {order}")));
    }
    let start = Instant::now();
    let mut verdict = match rec.recipe {
        Recipe::Sides(f) => match f(&params, order) {
            Ok(cmp) => judge(rec.id, params, order, &cmp)?,
            Err(e @ (Error::PolarParameters(_) | Error::ZeroDivisor)) if matches!(rec.domain, ParamDomain::KZ(_)) => {
                skipped(rec.id, params, order, format!("polar z: {e}"), None)
            }
            Err(e) => return Err(e),
        },
        Recipe::Emit(f) => {
            let s = f(&params, order)?;
            skipped(rec.id, params, order, "difference series, not verified".into(), Some(s))
        }
    };
    verdict.wall_time = start.elapsed();
    Ok(verdict)
}

fn skipped(id: &str, params: Params, order: i64, why: String, series: Option<LaurentSeries>) -> Verdict {
    Verdict {
        id: id.to_string(),
        params,
        order,
        status: Status::Skipped,
        first_discrepancy: None,
        detail: Some(why),
        series,
        wall_time: Duration::ZERO,
    }
}

/// Every record at every point of its default grid, in registry order.
///
/// `order` overrides each record's default order but not the per-point caps.
/// Evaluation errors are reported as FAILED with the error as detail.
pub fn run_all(order: Option<i64>, jobs: usize) -> Vec<Verdict> {
    run_records(registry(), order, jobs)
}

/// [`run_all`] over an explicit list of records.
pub fn run_records(records: &[IdentityRecord], order: Option<i64>, jobs: usize) -> Vec<Verdict> {
    let tasks: Vec<(&IdentityRecord, Params, i64)> = records
        .iter()
        .flat_map(|rec| {
            rec.grid.iter().map(move |g| {
                let o = order.unwrap_or(rec.default_order);
                (rec, g.params, g.cap.map_or(o, |c| o.min(c)))
            })
        })
        .collect();
    let run = || {
        tasks
            .par_iter()
            .map(|&(rec, params, order)| {
                let start = Instant::now();
                check_record(rec, &params, order).unwrap_or_else(|e| Verdict {
                    id: rec.id.to_string(),
                    params,
                    order,
                    status: Status::Failed,
                    first_discrepancy: None,
                    detail: Some(format!("error: {e}")),
                    series: None,
                    wall_time: start.elapsed(),
                })
            })
            .collect()
    };
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(run),
        Err(_) => run(),
    }
}

/// `0` when nothing FAILED, `1` otherwise.
pub fn exit_code(verdicts: &[Verdict]) -> u8 {
    u8::from(verdicts.iter().any(|v| v.status == Status::Failed))
}

// ---------------------------------------------------------------------------
// series output

/// `# min_exp=<e> prec=<N>` then `<exp>\t<num>[/<den>]` for each nonzero coefficient.
pub fn to_text(s: &LaurentSeries) -> String {
    let mut out = format!("# min_exp={} prec={}\n", s.min_exp(), s.prec());
    for (e, c) in s.terms() {
        out += &format!("{e}\t{c}\n");
    }
    out
}

/// `{min_exp, prec, coeffs}` with dense `[num, den]` string pairs.
pub fn to_json(s: &LaurentSeries) -> String {
    let coeffs: Vec<[String; 2]> = (s.min_exp()..s.prec())
        .map(|e| {
            let c = s.coeff(e).unwrap_or_else(Rational::zero);
            [c.numer().to_string(), c.denom().to_string()]
        })
        .collect();
    json!({ "min_exp": s.min_exp(), "prec": s.prec(), "coeffs": coeffs }).to_string()
}

/// Output format of `expand`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Series available to `expand`, with a short description.
pub const SERIES: &[(&str, &str)] = &[
    ("R1", "R_1^(k) multisum, k >= 3"),
    ("R2", "R_2^(k) multisum, k >= 3"),
    ("R3", "R_3^(k) multisum, k >= 3"),
    ("R4", "R_4^(k) multisum, k >= 3"),
    ("F1", "sum q^(n^2)/(q^n)_n"),
    ("foq", "third order f(q)"),
    ("nu", "third order nu(q)"),
    ("phi", "third order phi(q)"),
    ("mu", "second order mu(q)"),
    ("B1", "generalized f(q) multisum B_1^(k), k >= 1"),
    ("B2", "generalized phi(q) multisum B_2^(k), k >= 1"),
    ("M1", "R_1^(4)(q) + phi(q^4) assembled from theta quotients"),
    ("diff_mockid3", "R_2^(3)(q) - q^-1 F_1(q^4)"),
    ("diff_mockid5", "R_4^(k)(q) - q^e mu(q^m), k >= 3"),
    ("jtheta", "j(z, q), needs z"),
];

/// Computes a named series below `order`.
pub fn series(id: &str, p: &Params, order: i64) -> Result<LaurentSeries> {
    if order < 1 {
        return Err(Error::BadParams(format!("order must be positive, got {order}")));
    }
    if !SERIES.iter().any(|(name, _)| *name == id) {
        return Err(Error::UnknownSeries(id.to_string()));
    }
    let k_in = |lo: i64, default: i64| -> Result<usize> {
        let k = p.k_or(default);
        if !(lo..=12).contains(&k) {
            return Err(Error::BadParams(format!("{id}: k = {k} outside {lo}..=12")));
        }
        Ok(k as usize)
    };
    let no_z = || -> Result<()> {
        if p.z.is_some() && id != "jtheta" {
            return Err(Error::BadParams(format!("{id} takes no z")));
        }
        Ok(())
    };
    no_z()?;
    let s = match id {
        "R1" | "R2" | "R3" | "R4" => r_series(id.as_bytes()[1] - b'0', k_in(3, 3)?, order)?,
        "F1" | "foq" | "nu" | "phi" | "mu" => classical(id.parse::<Classical>()?, order)?,
        "B1" => mixed_multisum(Mixed::B1, k_in(1, 1)?, order)?,
        "B2" => mixed_multisum(Mixed::B2, k_in(1, 1)?, order)?,
        "M1" => forms::m1_series(order)?,
        "diff_mockid3" => forms::diff_mockid3(&r_series(2, 3, order)?, order)?,
        "diff_mockid5" => {
            let k = k_in(3, 3)?;
            forms::diff_mockid5(k, &r_series(4, k, order)?, order)?
        }
        "jtheta" => {
            let z = p.z.ok_or_else(|| Error::BadParams("jtheta needs z".into()))?;
            jtheta(z, 1, order)?
        }
        _ => unreachable!("checked against SERIES"),
    };
    s.truncate(order.min(s.prec()))
}

/// `series` serialized in the requested format.
pub fn expand(id: &str, p: &Params, order: i64, format: Format) -> Result<String> {
    let s = series(id, p, order)?;
    if s.prec() < order {
        return Err(Error::PrecisionLoss {
            requested: order,
            available: s.prec(),
        });
    }
    Ok(match format {
        Format::Text => to_text(&s),
        Format::Json => to_json(&s) + "\n",
    })
}

// ---------------------------------------------------------------------------
// recipes

fn q(e: i64) -> QMonomial {
    QMonomial::q(e)
}

fn neg_q(e: i64) -> QMonomial {
    QMonomial::neg_q(e)
}

fn one(label: &str, lhs: LaurentSeries, rhs: LaurentSeries) -> Result<Vec<Comparison>> {
    Ok(vec![Comparison::new(label, lhs, rhs)])
}

fn jtp(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for j in -4..=4 {
        for z in [q(j), neg_q(j)] {
            let prod = with_precision(n, |w| {
                let a = &pochhammer(-(z * q(1)), 2, Count::Infinite, w)?
                    * &pochhammer(-(q(1) * z.inv()), 2, Count::Infinite, w)?;
                Ok(&a * &pochhammer(q(2), 2, Count::Infinite, w)?)
            })?;
            out.push(Comparison::new(format!("z={z}"), triple_product_sum(z, n), prod));
        }
    }
    Ok(out)
}

fn rr(s: i64, n: i64) -> Result<Vec<Comparison>> {
    one(
        "sum = product",
        rogers_ramanujan(s, Side::Lhs, n)?,
        rogers_ramanujan(s, Side::Rhs, n)?,
    )
}

fn ag(p: &Params, n: i64) -> Result<Vec<Comparison>> {
    let k = p.ku();
    one(
        "sum = product",
        andrews_gordon(k, Side::Lhs, n)?,
        andrews_gordon(k, Side::Rhs, n)?,
    )
}

const PAIR_N: u64 = 6;

fn pair_rows(p: &BaileyPair, n_max: u64, order: i64, out: &mut Vec<Comparison>) -> Result<()> {
    for n in 0..=n_max {
        let (beta, sum) = pair_relation(p, n, order)?;
        out.push(Comparison::new(format!("{} n={n}", p.name()), beta, sum));
    }
    Ok(())
}

fn pairs(ps: &[BaileyPair], order: i64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for p in ps {
        pair_rows(p, PAIR_N, order, &mut out)?;
    }
    Ok(out)
}

fn derived_pairs() -> Result<Vec<BaileyPair>> {
    let ah = builtin(Builtin::AndrewsHickerson);
    let once = change_base(&ah)?;
    let twice = change_base(&once)?;
    let step = chain_step(&once, SpecParam::Monomial(neg_q(1)), SpecParam::Infinity)?;
    let both = chain_step(&builtin(Builtin::Unit(q(1))), SpecParam::Infinity, SpecParam::Infinity)?;
    let finite = chain_step(&ah, SpecParam::Monomial(neg_q(1)), SpecParam::Monomial(neg_q(2)))?;
    let foq = chain_step(&builtin(Builtin::Foq), SpecParam::Infinity, SpecParam::Infinity)?;
    Ok(vec![once, twice, step, both, finite, foq])
}

fn sequences(a: &BaileyPair, b: &BaileyPair, n_max: u64, order: i64) -> Result<Vec<Comparison>> {
    let mut out = Vec::new();
    for n in 0..=n_max {
        out.push(Comparison::new(
            format!("alpha_{n}"),
            a.alpha(n, 1, order)?,
            b.alpha(n, 1, order)?,
        ));
        out.push(Comparison::new(
            format!("beta_{n}"),
            a.beta(n, 1, order)?,
            b.beta(n, 1, order)?,
        ));
    }
    Ok(out)
}

fn foq_derivation(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let derived = chain_step(
        &builtin(Builtin::Unit(QMonomial::ONE)),
        SpecParam::Monomial(QMonomial::MINUS_ONE),
        SpecParam::Monomial(QMonomial::MINUS_ONE),
    )?;
    sequences(&derived, &builtin(Builtin::Foq), PAIR_N, n)
}

fn genfoq(p: &Params, n: i64) -> Result<Vec<Comparison>> {
    let k = p.k_or(1);
    let rhs = bilateral_f_sum(k, n)?;
    let mut out = vec![Comparison::new(
        "multisum = bilateral sum",
        mixed_multisum(Mixed::B1, k as usize, n)?,
        rhs.clone(),
    )];
    if k == 1 {
        out.push(Comparison::new("k=1 is f(q)", classical(Classical::Foq, n)?, rhs));
    }
    Ok(out)
}

fn b1_appell(p: &Params, n: i64) -> Result<Vec<Comparison>> {
    let k = p.ku();
    let mut out = vec![Comparison::new(
        "multisum = Appell-Lerch form",
        mixed_multisum(Mixed::B1, k, n)?,
        forms::b1_appell(k, n)?,
    )];
    if k == 1 {
        let qinf = pochhammer(q(1), 1, Count::Infinite, n)?;
        out.push(Comparison::new(
            "j(q^2,q^3) = (q)_inf",
            jtheta(q(2), 3, n)?,
            qinf.clone(),
        ));
        out.push(Comparison::new(
            "-q j(q^4,q^3) = (q)_inf",
            jtheta(q(4), 3, n)?.mul_monomial(neg_q(1)),
            qinf,
        ));
    }
    Ok(out)
}

fn phi_f(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    one("phi = f-form", classical(Classical::Phi, n)?, forms::b2_f(1, n)?)
}

fn b2_f(p: &Params, n: i64) -> Result<Vec<Comparison>> {
    let k = p.ku();
    let f = forms::b2_f(k, n)?;
    let mut out = vec![Comparison::new(
        "multisum = f-form",
        mixed_multisum(Mixed::B2, k, n)?,
        f.clone(),
    )];
    if k == 1 {
        out.push(Comparison::new("k=1 is phi(q)", classical(Classical::Phi, n)?, f));
    }
    Ok(out)
}

fn pair_key(p: &Params, n: i64) -> Result<Vec<Comparison>> {
    pairs(&[key_pair(p.ku())?], n)
}

fn keypair_iter(p: &Params, n: i64) -> Result<Vec<Comparison>> {
    sequences(&key_pair(p.ku())?, &key_pair_iterated(p.ku())?, 5, n)
}

/// The limit of the Bailey lemma that produces `R_i`.
fn limit_for(i: u8) -> (SpecParam, SpecParam, i64) {
    match i {
        1 => (SpecParam::Monomial(neg_q(1)), SpecParam::Infinity, 1),
        2 => (SpecParam::Infinity, SpecParam::Infinity, 1),
        3 => (SpecParam::Monomial(q(1)), SpecParam::Infinity, 2),
        _ => (SpecParam::SqrtConjugate, SpecParam::SqrtConjugate, 1),
    }
}

fn r_f(i: u8, p: &Params, n: i64) -> Result<Vec<Comparison>> {
    let k = p.ku();
    let multi = r_series(i, k, n)?;
    let f = forms::r_f(i, k, n)?;
    let (b, c, base) = limit_for(i);
    let (lhs, rhs) = bailey_limit_sum(&key_pair(k)?, b, c, base, n)?;
    let mut out = vec![
        Comparison::new("multisum = Bailey lemma lhs", multi.clone(), lhs),
        Comparison::new("Bailey lemma rhs = f-form", rhs, f.clone()),
        Comparison::new("multisum = f-form", multi, f),
    ];
    let theta = |args: (i64, i64, QMonomial, QMonomial)| -> Result<LaurentSeries> {
        let (a, b, x, y) = args;
        indefinite_f(&FabcParams::new(a, b, a, x, y, 1)?, n)
    };
    let e = 1i64 << (k - 2);
    match i {
        3 => out.push(Comparison::new(
            "q^4 splitting",
            theta((1, 2 * e + 1, q(e + 1), neg_q(e + 1)))?,
            forms::r3_split(k, n)?,
        )),
        4 => out.push(Comparison::new(
            "inversion pairing",
            theta((1, 4 * e + 1, neg_q(e + 1), neg_q(e + 1)))?,
            forms::r4_split(k, n)?,
        )),
        _ => {}
    }
    Ok(out)
}

fn r_m(i: u8, p: &Params, n: i64) -> Result<Vec<Comparison>> {
    let k = p.ku();
    let form = match i {
        1 => forms::r1_m(k, p.zv(), n)?,
        2 => forms::r2_m(k, p.zv(), n)?,
        3 => forms::r3_m(k, n)?,
        _ => forms::r4_m(k, n)?,
    };
    one("multisum = Appell-Lerch form", r_series(i, k, n)?, form)
}

fn m3_grid(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let grid = [
        (q(1), 1, QMonomial::MINUS_ONE),
        (q(2), 12, neg_q(3)),
        (q(3), 5, neg_q(2)),
        (neg_q(2), 3, q(1)),
        (q(2), 5, q(1)),
        (neg_q(1), 4, q(3)),
    ];
    let mut out = Vec::new();
    for (x, m, z) in grid {
        let (lhs, rhs) = m3_sides(x, m, z, n)?;
        out.push(Comparison::new(format!("x={x} M={m} z={z}"), lhs, rhs));
    }
    Ok(out)
}

fn fprop_grid(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let sets = [
        FabcParams::new(1, 3, 1, q(1), q(1), 1)?,
        FabcParams::new(2, 3, 2, q(2), neg_q(1), 1)?,
        FabcParams::new(1, 5, 1, q(3), q(3), 2)?,
        FabcParams::new(3, 11, 3, q(4), q(4), 1)?,
        FabcParams::new(1, 9, 1, neg_q(3), neg_q(3), 1)?,
    ];
    let mut out = Vec::new();
    for p in &sets {
        let f = indefinite_f(p, n)?;
        for (name, kind) in [("quadruple", Transform::Quadruple), ("inversion", Transform::Inversion)] {
            let label = format!("{name} f_{{{},{},{}}}({},{},q^{})", p.a, p.b, p.c, p.x, p.y, p.base);
            out.push(Comparison::new(label, f.clone(), f_transform_rhs(kind, p, n)?));
        }
    }
    Ok(out)
}

fn hm_grid(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let instances = [
        (1, 2, q(2), q(2), 2),
        (1, 4, q(3), q(3), 2),
        (1, 4, q(3), neg_q(3), 1),
        (1, 8, neg_q(3), neg_q(3), 1),
        (1, 8, q(5), q(5), 2),
        (3, 8, q(4), q(4), 1),
    ];
    let mut out = Vec::new();
    for (nn, p, x, y, base) in instances {
        let (f, rhs) = hm_sides(nn, p, x, y, base, n)?;
        out.push(Comparison::new(
            format!("(n,p)=({nn},{p}) x={x} y={y} q^{base}"),
            f,
            rhs,
        ));
    }
    Ok(out)
}

fn mockid1(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    one(
        "R_1^(3)(q) = nu(-q)",
        r_series(1, 3, n)?,
        classical(Classical::Nu, n)?.negate_q(),
    )
}

fn mockid1_theta(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    one(
        "theta combination = J-quotient",
        forms::nu_theta_combination(n)?,
        forms::nu_theta_part(n)?,
    )
}

fn nu_appell(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    one(
        "nu = Appell-Lerch form",
        classical(Classical::Nu, n)?,
        forms::nu_appell(n)?,
    )
}

fn phi_appell(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let phi = classical(Classical::Phi, n)?;
    let phi4 = classical(Classical::Phi, (n + 3) / 4 + 1)?.substitute_power(4);
    Ok(vec![
        Comparison::new("phi(q)", phi, forms::phi_appell(1, n)?),
        Comparison::new("phi(q^4)", phi4, forms::phi_appell(4, n)?),
    ])
}

fn mockid2(_: &Params, n: i64) -> Result<Vec<Comparison>> {
    let phi4 = classical(Classical::Phi, (n + 3) / 4 + 1)?.substitute_power(4);
    let lhs = &r_series(1, 4, n)? + &phi4;
    Ok(vec![
        Comparison::new(
            "R_1^(4) + phi(q^4) = assembled pieces",
            lhs.clone(),
            forms::mockid2_assembled(n)?,
        ),
        Comparison::new("M_1 by-product", lhs, forms::m1_series(n)?),
    ])
}

fn diff3(_: &Params, n: i64) -> Result<LaurentSeries> {
    series("diff_mockid3", &Params::none(), n)
}

fn diff5(p: &Params, n: i64) -> Result<LaurentSeries> {
    series("diff_mockid5", &Params::k(p.k_or(3)), n)
}

fn build() -> Vec<IdentityRecord> {
    let fixed = || {
        vec![GridPoint {
            params: Params::none(),
            cap: None,
        }]
    };
    let ks = |ks: &[(i64, Option<i64>)]| -> Vec<GridPoint> {
        ks.iter()
            .map(|&(k, cap)| GridPoint {
                params: Params::k(k),
                cap,
            })
            .collect()
    };
    let kzs = |ks: &[(i64, Option<i64>)]| -> Vec<GridPoint> {
        ks.iter()
            .map(|&(k, cap)| GridPoint {
                params: Params::kz(k, QMonomial::MINUS_ONE),
                cap,
            })
            .collect()
    };
    let k345 = [(3, None), (4, None), (5, Some(20))];
    let rec = |id, citation, default_order, domain, grid, recipe| IdentityRecord {
        id,
        citation,
        default_order,
        domain,
        grid,
        recipe,
    };
    use ParamDomain::{Fixed, K, KZ};
    use Recipe::{Emit, Sides};
    let mut r1m_grid = kzs(&k345);
    r1m_grid.insert(
        2,
        GridPoint {
            params: Params::kz(4, q(8)),
            cap: None,
        },
    );
    vec![
        rec("jtp", "the triple product identity", 50, Fixed, fixed(), Sides(jtp)),
        rec(
            "rr0",
            "first Rogers-Ramanujan identity",
            80,
            Fixed,
            fixed(),
            Sides(|_, n| rr(0, n)),
        ),
        rec(
            "rr1",
            "second Rogers-Ramanujan identity",
            80,
            Fixed,
            fixed(),
            Sides(|_, n| rr(1, n)),
        ),
        rec(
            "andrews_gordon",
            "Andrews-Gordon identities",
            60,
            K(2..=8),
            ks(&[(2, None), (3, None), (4, None)]),
            Sides(ag),
        ),
        rec(
            "pair_unit",
            "unit Bailey pair",
            60,
            Fixed,
            fixed(),
            Sides(|_, n| {
                pairs(
                    &[builtin(Builtin::Unit(q(1))), builtin(Builtin::Unit(QMonomial::ONE))],
                    n,
                )
            }),
        ),
        rec(
            "pair_foq",
            "Bailey pair for f(q)",
            60,
            Fixed,
            fixed(),
            Sides(|_, n| pairs(&[builtin(Builtin::Foq)], n)),
        ),
        rec(
            "pair_ah",
            "Andrews-Hickerson Bailey pair",
            60,
            Fixed,
            fixed(),
            Sides(|_, n| pairs(&[builtin(Builtin::AndrewsHickerson)], n)),
        ),
        rec(
            "pair_key",
            "key Bailey pair relative to q",
            60,
            K(3..=8),
            ks(&[(3, None), (4, None), (5, None)]),
            Sides(pair_key),
        ),
        rec(
            "pair_derived",
            "pairs produced by chain steps and changes of base",
            60,
            Fixed,
            fixed(),
            Sides(|_, n| pairs(&derived_pairs()?, n)),
        ),
        rec(
            "foq_derivation",
            "f(q) pair from the unit pair with -a = b = c = -1",
            60,
            Fixed,
            fixed(),
            Sides(foq_derivation),
        ),
        rec(
            "genfoq",
            "generalized f(q) multisum as a bilateral sum",
            50,
            K(1..=8),
            ks(&[(1, None), (2, None), (3, None)]),
            Sides(genfoq),
        ),
        rec(
            "b1_appell",
            "Appell-Lerch decomposition of the generalized f(q) multisum",
            40,
            K(1..=6),
            ks(&[(1, None), (2, None)]),
            Sides(b1_appell),
        ),
        rec(
            "phi_f",
            "phi(q) as f_{2,3,2}(q^2,q^2,q)",
            60,
            Fixed,
            fixed(),
            Sides(phi_f),
        ),
        rec(
            "b2_f",
            "generalized phi(q) multisum as f_{2k,2k+1,2k}(q^2k,q^2k,q)",
            40,
            K(1..=6),
            ks(&[(1, None), (2, None)]),
            Sides(b2_f),
        ),
        rec(
            "keypair_iter",
            "key pair as iterated changes of base",
            60,
            K(3..=6),
            ks(&[(3, None), (4, None)]),
            Sides(keypair_iter),
        ),
        rec(
            "r1_f",
            "R_1 via b = -q, c -> infinity",
            40,
            K(3..=8),
            ks(&k345),
            Sides(|p, n| r_f(1, p, n)),
        ),
        rec(
            "r2_f",
            "R_2 via b, c -> infinity",
            40,
            K(3..=8),
            ks(&k345),
            Sides(|p, n| r_f(2, p, n)),
        ),
        rec(
            "r3_f",
            "R_3 via q -> q^2, b = q, c -> infinity",
            40,
            K(3..=8),
            ks(&k345),
            Sides(|p, n| r_f(3, p, n)),
        ),
        rec(
            "r4_f",
            "R_4 via b = sqrt(q), c = -sqrt(q)",
            40,
            K(3..=8),
            ks(&k345),
            Sides(|p, n| r_f(4, p, n)),
        ),
        rec(
            "r1_m",
            "Appell-Lerch form of R_1",
            40,
            KZ(3..=8),
            r1m_grid,
            Sides(|p, n| r_m(1, p, n)),
        ),
        rec(
            "r2_m",
            "Appell-Lerch form of R_2, odd and even k",
            40,
            KZ(3..=8),
            kzs(&k345),
            Sides(|p, n| r_m(2, p, n)),
        ),
        rec(
            "r3_m",
            "Appell-Lerch form of R_3",
            40,
            K(3..=8),
            ks(&k345),
            Sides(|p, n| r_m(3, p, n)),
        ),
        rec(
            "r4_m",
            "Appell-Lerch form of R_4",
            40,
            K(3..=8),
            ks(&k345),
            Sides(|p, n| r_m(4, p, n)),
        ),
        rec(
            "m3_grid",
            "splitting of m(x,q,z) into q^4 sums and xi",
            40,
            Fixed,
            fixed(),
            Sides(m3_grid),
        ),
        rec(
            "fprop_grid",
            "two transformation laws of f_{a,b,c}",
            40,
            Fixed,
            fixed(),
            Sides(fprop_grid),
        ),
        rec(
            "hm_grid",
            "f_{n,n+p,n} = g_{n,n+p,n} + theta_{n,p}",
            40,
            Fixed,
            fixed(),
            Sides(hm_grid),
        ),
        rec("mockid1", "R_1^(3)(q) = nu(-q)", 100, Fixed, fixed(), Sides(mockid1)),
        rec(
            "mockid1_theta",
            "the theta identity behind R_1^(3)(q) = nu(-q)",
            100,
            Fixed,
            fixed(),
            Sides(mockid1_theta),
        ),
        rec(
            "nu_appell",
            "nu(q) as an Appell-Lerch sum",
            100,
            Fixed,
            fixed(),
            Sides(nu_appell),
        ),
        rec(
            "phi_appell",
            "phi(q) as an Appell-Lerch sum",
            60,
            Fixed,
            fixed(),
            Sides(phi_appell),
        ),
        rec(
            "mockid2",
            "R_1^(4)(q) = -phi(q^4) + M_1(q) with k = 4, z = q^8",
            60,
            Fixed,
            fixed(),
            Sides(mockid2),
        ),
        rec(
            "diff_mockid3",
            "R_2^(3)(q) against q^-1 F_1(q^4)",
            40,
            Fixed,
            fixed(),
            Emit(diff3),
        ),
        rec(
            "diff_mockid5",
            "R_4^(k)(q) against mu",
            40,
            K(3..=8),
            ks(&k345),
            Emit(diff5),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    #[test]
    fn registry_shape() {
        let reg = registry();
        assert!(reg.len() >= 28);
        assert!(reg.iter().all(|r| !r.citation.is_empty() && !r.grid.is_empty()));
        assert_eq!(lookup("mockid1").unwrap().default_order, 100);
        let mut ids: Vec<_> = reg.iter().map(|r| r.id).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), reg.len());
    }

    #[test]
    fn check_errors() {
        assert!(matches!(
            check("nope", &Params::none(), 10),
            Err(Error::UnknownIdentity(_))
        ));
        assert!(matches!(check("rr0", &Params::k(3), 10), Err(Error::BadParams(_))));
        assert!(matches!(
            check("r3_m", &Params::kz(3, q(1)), 10),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(check("r1_m", &Params::k(2), 10), Err(Error::BadParams(_))));
        assert!(matches!(check("rr0", &Params::none(), 0), Err(Error::BadParams(_))));
    }

    #[test]
    fn simple_checks() {
        assert_eq!(check("rr0", &Params::none(), 80).unwrap().status, Status::Verified);
        let v = check("r1_m", &Params::kz(3, QMonomial::MINUS_ONE), 40).unwrap();
        assert_eq!(v.status, Status::Verified, "{}", v.report_line());
    }

    #[test]
    fn polar_z_is_skipped() {
        // z = q^M with M the Appell base makes j(z, q^M) vanish
        let v = check("r1_m", &Params::kz(3, q(12)), 20).unwrap();
        assert_eq!(v.status, Status::Skipped, "{}", v.report_line());
    }

    #[test]
    fn corrupted_recipe_fails() {
        let good = rogers_ramanujan(0, Side::Lhs, 30).unwrap();
        let mut coeffs = good.coefficients().to_vec();
        coeffs[17] += rat(1);
        let bad = LaurentSeries::from_coeffs(good.min_exp(), coeffs, 30);
        let v = judge("rr0", Params::none(), 30, &[Comparison::new("corrupt", good, bad)]).unwrap();
        assert_eq!(v.status, Status::Failed);
        assert_eq!(v.first_discrepancy.unwrap().exponent, 17);
    }

    #[test]
    fn text_and_json() {
        let s = LaurentSeries::from_coeffs(-1, vec![crate::series::ratio(1, 2), rat(0), rat(-3)], 3);
        assert_eq!(to_text(&s), "# min_exp=-1 prec=3\n-1\t1/2\n1\t-3\n");
        let v: serde_json::Value = serde_json::from_str(&to_json(&s)).unwrap();
        assert_eq!(v["min_exp"], -1);
        assert_eq!(v["prec"], 3);
        assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
        assert_eq!(v["coeffs"][0], json!(["1", "2"]));
        assert_eq!(v["coeffs"][3], json!(["0", "1"]));
    }

    #[test]
    fn expand_outputs() {
        let f1 = series("F1", &Params::none(), 5).unwrap();
        assert_eq!(f1.min_exp(), 1);
        assert!(matches!(
            series("nope", &Params::none(), 5),
            Err(Error::UnknownSeries(_))
        ));
        let r1 = series("R1", &Params::k(3), 10).unwrap();
        assert_eq!(r1, classical(Classical::Nu, 10).unwrap().negate_q());
    }
}
