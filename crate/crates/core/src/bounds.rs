//! Closed-form counting bounds, evaluated exactly over the rationals.

use num_bigint::BigInt;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

/// Rational upper bound used for `e`.
pub fn e_upper() -> Rational {
    Rational::new(
        BigInt::from(27_182_818_285u64),
        BigInt::from(10_000_000_000u64),
    )
}

/// An exact bound with convenient renderings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    #[serde(skip)]
    pub exact: Rational,
    pub scientific: String,
    pub log2: f64,
}

impl BoundValue {
    fn new(exact: Rational) -> Self {
        Self {
            scientific: scientific(&exact, 15),
            log2: log2(&exact),
            exact,
        }
    }
}

/// `(8 e d k / l)^l`: Warren's bound on sign-pattern regions of `k` polynomials of
/// degree at most `d` in `l` variables.
pub fn warren_region_bound(k: u64, l: u64, d: u64) -> Result<BoundValue> {
    if l == 0 || d == 0 {
        return Err(Error::Domain("l and d must be at least 1".into()));
    }
    if k < l {
        return Err(Error::Domain(format!("k = {k} is smaller than l = {l}")));
    }
    let base =
        e_upper() * Rational::from_integer((8 * d).into()) * Rational::new(k.into(), l.into());
    Ok(BoundValue::new(pow(&base, l)))
}

/// Bound on the number of `n`-vertex graphs in a family with `p` polynomials of degree
/// `d` over a `dim_s`-dimensional space, with the constant `c` of `2^{c n ln n}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FamilyCount {
    pub value: BoundValue,
    pub c: f64,
}

/// `(4 e d p n / dim_s)^{n dim_s}`.
pub fn family_count_bound(n: u64, dim_s: u64, p: u64, d: u64) -> Result<FamilyCount> {
    if n == 0 || dim_s == 0 || p == 0 || d == 0 {
        return Err(Error::Domain("all arguments must be at least 1".into()));
    }
    let base = e_upper() * Rational::from_integer((4 * d * p * n).into())
        / Rational::from_integer(dim_s.into());
    let value = BoundValue::new(pow(&base, n * dim_s));
    let nf = n as f64;
    let c = if n < 2 {
        f64::INFINITY
    } else {
        value.log2 / (nf * nf.ln())
    };
    Ok(FamilyCount { value, c })
}

/// `log2(2^Q - 1) / Q`.
pub fn scheme_exponent(q: u32) -> f64 {
    assert!(q >= 1);
    (((1u64 << q) - 1) as f64).log2() / q as f64
}

fn pow(base: &Rational, exp: u64) -> Rational {
    Rational::new(
        Pow::pow(base.numer(), exp as u32),
        Pow::pow(base.denom(), exp as u32),
    )
}

fn digits(v: &BigInt) -> i64 {
    v.abs().to_str_radix(10).len() as i64
}

/// Rounded-down decimal rendering with `sig` significant digits, e.g. `2.17462546280000e1`.
pub fn scientific(r: &Rational, sig: usize) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    let (p, q) = (r.numer().abs(), r.denom().clone());
    let mut exp = digits(&p) - digits(&q);
    let ten = BigInt::from(10);
    let scaled = |e: i64| -> BigInt {
        let shift = sig as i64 - 1 - e;
        if shift >= 0 {
            &p * Pow::pow(&ten, shift as u32) / &q
        } else {
            &p / (&q * Pow::pow(&ten, (-shift) as u32))
        }
    };
    let mut m = scaled(exp);
    let lo = Pow::pow(&ten, sig as u32 - 1);
    while m < lo {
        exp -= 1;
        m = scaled(exp);
    }
    while m >= &lo * &ten {
        exp += 1;
        m = scaled(exp);
    }
    let s = m.to_string();
    format!("{sign}{}.{}e{exp}", &s[..1], &s[1..])
}

fn log2(r: &Rational) -> f64 {
    let bits = |v: &BigInt| -> f64 {
        let b = v.bits();
        let shift = b.saturating_sub(60);
        let top: BigInt = v >> shift;
        top.to_f64().unwrap().log2() + shift as f64
    };
    if r <= &Rational::zero() {
        return f64::NEG_INFINITY;
    }
    bits(r.numer()) - bits(r.denom())
}
