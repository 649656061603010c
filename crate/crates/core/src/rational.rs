//! Exact rational scalars and vectors.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;
pub type QVec = Vec<Q>;

/// Default denominator bound used when rationalizing floats.
pub const DEFAULT_DENOM_BOUND: i64 = 1_000_000;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn qvec(xs: &[i64]) -> QVec {
    xs.iter().map(|&x| q(x)).collect()
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or_else(|| {
        // very large numerators/denominators: fall back to a ratio of floats
        let n = x.numer().to_f64().unwrap_or(f64::NAN);
        let d = x.denom().to_f64().unwrap_or(f64::NAN);
        n / d
    })
}

pub fn to_f64_vec(xs: &[Q]) -> Vec<f64> {
    xs.iter().map(to_f64).collect()
}

/// Best rational approximation with denominator at most `max_den`
/// (continued-fraction convergents and semiconvergents).
pub fn rationalize(x: f64, max_den: i64) -> Q {
    if !x.is_finite() {
        return Q::zero();
    }
    if x == x.trunc() && x.abs() < 9.0e15 {
        return q(x as i64);
    }
    let neg = x < 0.0;
    let mut v = x.abs();
    let (mut p0, mut q0, mut p1, mut q1): (i128, i128, i128, i128) = (0, 1, 1, 0);
    let max_den = max_den as i128;
    loop {
        let a = v.floor();
        if a > 1.0e18 {
            break;
        }
        let a = a as i128;
        let p2 = a * p1 + p0;
        let q2 = a * q1 + q0;
        if q2 > max_den {
            // semiconvergent
            let k = (max_den - q0) / q1;
            let ps = k * p1 + p0;
            let qs = k * q1 + q0;
            let cand_s = ps as f64 / qs as f64;
            let cand_1 = p1 as f64 / q1 as f64;
            if (cand_s - x.abs()).abs() < (cand_1 - x.abs()).abs() {
                p1 = ps;
                q1 = qs;
            }
            break;
        }
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        let frac = v - a as f64;
        if frac < 1e-15 {
            break;
        }
        v = 1.0 / frac;
    }
    let r = Q::new(BigInt::from(p1), BigInt::from(q1));
    if neg {
        -r
    } else {
        r
    }
}

pub fn rationalize_vec(xs: &[f64], max_den: i64) -> QVec {
    xs.iter().map(|&x| rationalize(x, max_den)).collect()
}

/// Parse `"p/q"`, an integer, or a decimal literal (exactly).
pub fn parse_q(s: &str) -> Result<Q> {
    let s = s.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty number".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
        let d: BigInt = d
            .trim()
            .parse()
            .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {s:?}")));
        }
        return Ok(Q::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Ok(Q::from_integer(n));
    }
    parse_decimal(s).ok_or_else(|| Error::Parse(format!("not a number: {s:?}")))
}

fn parse_decimal(s: &str) -> Option<Q> {
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(m) => (true, m),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (int, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits: BigInt = format!("{int}{frac}0").parse().ok()?;
    let digits = digits / BigInt::from(10);
    let scale = exp - frac.len() as i32;
    let ten = BigInt::from(10);
    let mut r = Q::from_integer(digits);
    if scale >= 0 {
        r *= Q::from_integer(num_traits::pow(ten, scale as usize));
    } else {
        r /= Q::from_integer(num_traits::pow(ten, (-scale) as usize));
    }
    Some(if neg { -r } else { r })
}

/// Comma-separated vector of rationals/decimals.
pub fn parse_qvec(s: &str) -> Result<QVec> {
    s.split(',').map(parse_q).collect()
}

pub fn format_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn is_zero_vec(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Positive rescaling to a primitive integer vector (gcd 1).
pub fn primitive(v: &[Q]) -> QVec {
    let mut l = BigInt::one();
    for x in v {
        l = l.lcm(x.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(l.clone())).to_integer()).collect();
    let mut g = BigInt::zero();
    for x in &ints {
        g = g.gcd(x);
    }
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Q::from_integer(x / &g)).collect()
}

pub fn max_abs(v: &[Q]) -> Q {
    v.iter().map(|x| x.abs()).max().unwrap_or_else(Q::zero)
}

pub fn add(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> QVec {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(c: &Q, a: &[Q]) -> QVec {
    a.iter().map(|x| c * x).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_forms() {
        assert_eq!(parse_q("3/4").unwrap(), qf(3, 4));
        assert_eq!(parse_q("-2").unwrap(), q(-2));
        assert_eq!(parse_q("0.25").unwrap(), qf(1, 4));
        assert_eq!(parse_q("-1.5e1").unwrap(), q(-15));
        assert_eq!(parse_q(".5").unwrap(), qf(1, 2));
        assert!(parse_q("1/0").is_err());
        assert!(parse_q("abc").is_err());
        assert_eq!(parse_qvec("1, 1/2,0.5").unwrap(), vec![q(1), qf(1, 2), qf(1, 2)]);
    }

    #[test]
    fn rationalize_bounded() {
        assert_eq!(rationalize(0.5, 1000), qf(1, 2));
        assert_eq!(rationalize(-0.75, 1000), qf(-3, 4));
        let pi = rationalize(std::f64::consts::PI, 1000);
        assert_eq!(pi, qf(355, 113));
        let r = rationalize(std::f64::consts::SQRT_2, DEFAULT_DENOM_BOUND);
        assert!(r.denom() <= &BigInt::from(DEFAULT_DENOM_BOUND));
        assert!((to_f64(&r) - std::f64::consts::SQRT_2).abs() < 1e-11);
    }

    #[test]
    fn primitive_scaling() {
        assert_eq!(primitive(&[qf(1, 2), qf(3, 2)]), qvec(&[1, 3]));
        assert_eq!(primitive(&qvec(&[4, -6])), qvec(&[2, -3]));
        assert_eq!(format_q(&qf(-3, 6)), "-1/2");
    }
}
