//! Exact truncated Laurent series over the rationals.

mod laurent;
mod monomial;
mod pochhammer;

pub use laurent::{rat, ratio, Discrepancy, LaurentSeries, Rational};
pub use monomial::QMonomial;
pub use pochhammer::{div_pochhammer, inv_pochhammer, mul_pochhammer, pochhammer, Count, QProduct};

use crate::error::{Error, Result};

/// Evaluates `f` at a working precision large enough that the result is
/// known below `target`, then truncates to exactly `target`.
///
/// Quotients lose precision in proportion to the valuations involved, which
/// are often only known after a first evaluation, so the working precision
/// is raised by the observed shortfall until it suffices.
pub fn with_precision<F>(target: i64, mut f: F) -> Result<LaurentSeries>
where
    F: FnMut(i64) -> Result<LaurentSeries>,
{
    let mut work = target;
    let mut last = None;
    let mut zero_retries = 0;
    for _ in 0..12 {
        // a divisor that is zero below the working precision may just be
        // truncated too early; callers rule out divisors that vanish exactly
        let s = match f(work) {
            Err(Error::ZeroDivisor) if zero_retries < 4 => {
                zero_retries += 1;
                work += work.abs() / 2 + 8;
                continue;
            }
            r => r?,
        };
        if s.prec() >= target {
            return s.truncate(target);
        }
        let short = target - s.prec();
        last = Some(s.prec());
        work += short + short / 2 + 1;
    }
    Err(Error::PrecisionLoss {
        requested: target,
        available: last.unwrap_or(target),
    })
}
