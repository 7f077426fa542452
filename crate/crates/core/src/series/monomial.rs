use std::fmt;
use std::ops::{Mul, Neg};
use std::str::FromStr;

use crate::error::{Error, Result};

/// A signed power of `q`: `sign * q^exp` with `sign` in `{+1, -1}`.
///
/// Every parameter (`x`, `y`, `z`, `a`, `b`, `c`) handed to the theta
/// functions, Appell-Lerch sums and Bailey machinery is one of these.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QMonomial {
    sign: i8,
    exp: i64,
}

impl QMonomial {
    pub const ONE: QMonomial = QMonomial { sign: 1, exp: 0 };
    pub const MINUS_ONE: QMonomial = QMonomial { sign: -1, exp: 0 };

    /// `sign * q^exp`; any negative `sign` is read as `-1`.
    pub fn new(sign: i64, exp: i64) -> Self {
        QMonomial {
            sign: if sign < 0 { -1 } else { 1 },
            exp,
        }
    }

    /// `q^exp`
    pub fn q(exp: i64) -> Self {
        QMonomial { sign: 1, exp }
    }

    /// `-q^exp`
    pub fn neg_q(exp: i64) -> Self {
        QMonomial { sign: -1, exp }
    }

    pub fn sign(self) -> i64 {
        self.sign as i64
    }

    pub fn exp(self) -> i64 {
        self.exp
    }

    pub fn is_negative(self) -> bool {
        self.sign < 0
    }

    /// Integer power; negative powers are fine since `sign^-1 = sign`.
    pub fn pow(self, n: i64) -> Self {
        let sign = if self.sign < 0 && n.rem_euclid(2) == 1 { -1 } else { 1 };
        QMonomial {
            sign,
            exp: self.exp * n,
        }
    }

    pub fn inv(self) -> Self {
        self.pow(-1)
    }

    /// Multiply by `q^k`.
    pub fn shift(self, k: i64) -> Self {
        QMonomial {
            sign: self.sign,
            exp: self.exp + k,
        }
    }

    /// The monomial after substituting `q -> q^m`.
    pub fn at_base(self, m: i64) -> Self {
        QMonomial {
            sign: self.sign,
            exp: self.exp * m,
        }
    }
}

impl Mul for QMonomial {
    type Output = QMonomial;

    fn mul(self, rhs: QMonomial) -> QMonomial {
        QMonomial {
            sign: self.sign * rhs.sign,
            exp: self.exp + rhs.exp,
        }
    }
}

impl Neg for QMonomial {
    type Output = QMonomial;

    fn neg(self) -> QMonomial {
        QMonomial {
            sign: -self.sign,
            exp: self.exp,
        }
    }
}

impl fmt::Display for QMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.sign < 0 { "-" } else { "" };
        match self.exp {
            0 => write!(f, "{sign}1"),
            1 => write!(f, "{sign}q"),
            e => write!(f, "{sign}q^{e}"),
        }
    }
}

/// Parses `q`, `q^3`, `-q^3`, `q^-2`, `1`, `-1`.
impl FromStr for QMonomial {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParams(format!("cannot parse monomial `{s}`"));
        let t = s.trim();
        let (sign, rest) = match t.strip_prefix('-') {
            Some(r) => (-1, r.trim_start()),
            None => (1, t.strip_prefix('+').unwrap_or(t)),
        };
        if rest == "1" {
            return Ok(QMonomial::new(sign, 0));
        }
        let body = rest.strip_prefix('q').ok_or_else(bad)?;
        if body.is_empty() {
            return Ok(QMonomial::new(sign, 1));
        }
        let e = body.strip_prefix('^').ok_or_else(bad)?;
        let e = e.trim_start_matches('(').trim_end_matches(')');
        let exp: i64 = e.parse().map_err(|_| bad())?;
        Ok(QMonomial::new(sign, exp))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = QMonomial::neg_q(3);
        assert_eq!(-x, QMonomial::q(3));
        assert_eq!(x * x, QMonomial::q(6));
        assert_eq!(x.pow(3), QMonomial::neg_q(9));
        assert_eq!(x.pow(-1), QMonomial::neg_q(-3));
        assert_eq!(x.pow(-2), QMonomial::q(-6));
        assert_eq!(x.pow(0), QMonomial::ONE);
        assert_eq!(x * x.inv(), QMonomial::ONE);
    }

    #[test]
    fn parse_and_print() {
        for (s, m) in [
            ("q^3", QMonomial::q(3)),
            ("-q^3", QMonomial::neg_q(3)),
            ("-1", QMonomial::MINUS_ONE),
            ("1", QMonomial::ONE),
            ("q^-2", QMonomial::q(-2)),
            ("q", QMonomial::q(1)),
            ("-q", QMonomial::neg_q(1)),
        ] {
            let parsed: QMonomial = s.parse().unwrap();
            assert_eq!(parsed, m);
            let again: QMonomial = parsed.to_string().parse().unwrap();
            assert_eq!(again, m);
        }
        assert!("x^2".parse::<QMonomial>().is_err());
        assert!("q^".parse::<QMonomial>().is_err());
    }
}
