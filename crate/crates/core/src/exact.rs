//! Rational number helpers shared by the exact modules.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse rational {0:?}")]
pub struct ParseRationalError(pub String);

pub fn int(v: i64) -> Rational {
    Rational::from_integer(BigInt::from(v))
}

pub fn frac(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// `C(n, k)` as a big integer; zero when `k < 0` or `k > n`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || n < 0 || k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

pub fn binomial_q(n: i64, k: i64) -> Rational {
    Rational::from_integer(binomial(n, k))
}

/// Parses `"p/q"`, `"p"`, or a plain decimal like `"0.25"`.
pub fn parse_rational(s: &str) -> Result<Rational, ParseRationalError> {
    let t = s.trim();
    let bad = || ParseRationalError(s.to_string());
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, dec)) = t.split_once('.') {
        if dec.is_empty() || !dec.chars().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let negative = whole.starts_with('-');
        let whole: BigInt = match whole.trim_start_matches(['-', '+']) {
            "" => BigInt::zero(),
            w => w.parse().map_err(|_| bad())?,
        };
        let scale = BigInt::from(10u32).pow(dec.len() as u32);
        let frac_part: BigInt = dec.parse().map_err(|_| bad())?;
        let v = Rational::new(whole * &scale + frac_part, scale);
        return Ok(if negative { -v } else { v });
    }
    let n: BigInt = t.parse().map_err(|_| bad())?;
    Ok(Rational::from_integer(n))
}

/// `"p/q"`, or `"p"` for integers.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

pub fn pow(q: &Rational, e: u32) -> Rational {
    num_traits::pow(q.clone(), e as usize)
}

/// Decimal string of `sqrt(q)` with `digits` significant digits, rounded up,
/// so the rendered value is never below the true square root.
pub fn sqrt_decimal_upper(q: &Rational, digits: u32) -> String {
    assert!(!q.is_negative(), "square root of a negative rational");
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    // Pick a decimal scale 10^-s so that ceil(sqrt(q) * 10^s) has `digits`
    // digits. Start from an estimate and correct.
    let est = to_f64(q).sqrt();
    let mut scale: i64 = digits as i64 - 1 - est.log10().floor() as i64;
    loop {
        let m = ceil_sqrt_scaled(q, scale);
        let len = m.to_string().len() as i64;
        if len > digits as i64 {
            scale -= 1;
        } else if len < digits as i64 {
            scale += 1;
        } else {
            return render_scaled(&m, scale);
        }
    }
}

/// `ceil(sqrt(q) * 10^scale)`.
fn ceil_sqrt_scaled(q: &Rational, scale: i64) -> BigInt {
    let ten = BigInt::from(10u32);
    let (num, den) = if scale >= 0 {
        (q.numer() * ten.pow(2 * scale as u32), q.denom().clone())
    } else {
        (q.numer().clone(), q.denom() * ten.pow(2 * (-scale) as u32))
    };
    // smallest m with m^2 * den >= num
    let mut m = (&num / &den).sqrt();
    while &m * &m * &den < num {
        m += 1;
    }
    while m > BigInt::zero() && (&m - 1) * (&m - 1) * &den >= num {
        m -= 1;
    }
    m
}

fn render_scaled(m: &BigInt, scale: i64) -> String {
    let s = m.to_string();
    if scale <= 0 {
        let mut out = s;
        out.extend(std::iter::repeat_n('0', (-scale) as usize));
        return out;
    }
    let scale = scale as usize;
    if s.len() > scale {
        let (a, b) = s.split_at(s.len() - scale);
        format!("{a}.{b}")
    } else {
        format!("0.{}{}", "0".repeat(scale - s.len()), s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 4), BigInt::from(15));
        assert_eq!(binomial(10, 4), BigInt::from(210));
        assert_eq!(binomial(3, 4), BigInt::zero());
        assert_eq!(binomial(3, -1), BigInt::zero());
        assert_eq!(binomial(0, 0), BigInt::one());
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("2/4").unwrap(), frac(1, 2));
        assert_eq!(parse_rational(" -3 ").unwrap(), int(-3));
        assert_eq!(parse_rational("0.25").unwrap(), frac(1, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), frac(-3, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(format_rational(&frac(-8, 12)), "-2/3");
        assert_eq!(format_rational(&int(7)), "7");
    }

    #[test]
    fn sqrt_rounds_up() {
        assert_eq!(sqrt_decimal_upper(&int(4), 5), "2.0000");
        assert_eq!(sqrt_decimal_upper(&int(2), 10), "1.414213563");
        assert_eq!(sqrt_decimal_upper(&frac(1, 100), 3), "0.100");
        assert_eq!(sqrt_decimal_upper(&int(10000), 2), "100");
        // sqrt(5/12) = 0.6454972243679028...
        assert_eq!(sqrt_decimal_upper(&frac(5, 12), 8), "0.64549723");
    }
}
