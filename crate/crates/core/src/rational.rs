//! Exact rationals and their JSON form `{"num": "...", "den": "..."}`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub type Rational = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RationalRepr {
    pub num: String,
    pub den: String,
}

impl From<&Rational> for RationalRepr {
    fn from(r: &Rational) -> Self {
        RationalRepr { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl TryFrom<&RationalRepr> for Rational {
    type Error = String;

    fn try_from(r: &RationalRepr) -> Result<Self, String> {
        let num: BigInt = r.num.parse().map_err(|e| format!("numerator {:?}: {e}", r.num))?;
        let den: BigInt = r.den.parse().map_err(|e| format!("denominator {:?}: {e}", r.den))?;
        if den.is_zero() {
            return Err("zero denominator".into());
        }
        Ok(Rational::new(num, den))
    }
}

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

/// `q^e` for possibly negative `e`.
pub fn power(q: u32, e: i64) -> Rational {
    let base = BigInt::from(q);
    let p = Pow::pow(&base, e.unsigned_abs());
    if e >= 0 {
        Rational::from_integer(p)
    } else {
        Rational::new(BigInt::one(), p)
    }
}

fn ln_bigint(x: &BigInt) -> f64 {
    // Shift large values down so the f64 conversion keeps full precision.
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().expect("small bigint fits in f64").ln();
    }
    let shift = bits - 64;
    let top: BigInt = x >> shift;
    top.to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
}

/// `log_base(r)` for positive `r`.
pub fn log(r: &Rational, base: u32) -> f64 {
    assert!(r.is_positive(), "log of non-positive rational");
    (ln_bigint(r.numer()) - ln_bigint(r.denom())) / (base as f64).ln()
}

/// The exponent `e` with `r = q^e`, when one exists.
pub fn exact_log(r: &Rational, q: u32) -> Option<i64> {
    if !r.is_positive() {
        return None;
    }
    let qb = BigInt::from(q);
    let (mut num, mut den) = (r.numer().clone(), r.denom().clone());
    let mut e = 0i64;
    if !den.is_one() {
        if !num.is_one() {
            return None;
        }
        std::mem::swap(&mut num, &mut den);
        while num > BigInt::one() {
            if (&num % &qb).is_zero() {
                num /= &qb;
                e -= 1;
            } else {
                return None;
            }
        }
        return Some(e);
    }
    while num > BigInt::one() {
        if (&num % &qb).is_zero() {
            num /= &qb;
            e += 1;
        } else {
            return None;
        }
    }
    Some(e)
}
