//! Dual-mode scalars: exact rationals or doubles.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub type Rational = BigRational;

/// Denominator bound for continued-fraction snapping.
pub const SNAP_MAX_DENOMINATOR: u64 = 1_000_000;

/// A structure constant, degree, or multiplicity.
///
/// Exact values are kept in lowest terms with a positive denominator (the
/// `BigRational` normal form). In JSON an exact value is a `"p/q"` string
/// and a float is a plain number, so the mode survives a round trip.
#[derive(Clone, Debug, PartialEq)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn from_int(n: i64) -> Self {
        Scalar::Exact(Rational::from_integer(BigInt::from(n)))
    }

    pub fn ratio(p: i64, q: i64) -> Self {
        Scalar::Exact(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(q) => rational_to_f64(q),
            Scalar::Float(x) => *x,
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(q) => Some(q),
            Scalar::Float(_) => None,
        }
    }

    pub fn is_zero(&self, eps_zero: f64) -> bool {
        match self {
            Scalar::Exact(q) => q.is_zero(),
            Scalar::Float(x) => x.abs() <= eps_zero,
        }
    }

    pub fn is_positive(&self, eps_zero: f64) -> bool {
        match self {
            Scalar::Exact(q) => q.is_positive(),
            Scalar::Float(x) => *x > eps_zero,
        }
    }

    /// Snap a float to a nearby small-denominator rational; exact values
    /// pass through.
    pub fn snapped(&self, eps_zero: f64) -> Scalar {
        match self {
            Scalar::Exact(_) => self.clone(),
            Scalar::Float(x) => match snap_rational(*x, eps_zero, SNAP_MAX_DENOMINATOR) {
                Some(q) => Scalar::Exact(q),
                None => self.clone(),
            },
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(q) => write!(f, "{}", q),
            Scalar::Float(x) => write!(f, "{}", x),
        }
    }
}

impl FromStr for Scalar {
    type Err = String;

    /// `p/q` and plain integers parse exactly; anything with a decimal
    /// point or exponent parses as a float.
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() {
            return Err("empty value".into());
        }
        if let Some((p, q)) = s.split_once('/') {
            let p = BigInt::from_str(p.trim()).map_err(|e| format!("bad numerator {p:?}: {e}"))?;
            let q = BigInt::from_str(q.trim()).map_err(|e| format!("bad denominator {q:?}: {e}"))?;
            if q.is_zero() {
                return Err("zero denominator".into());
            }
            return Ok(Scalar::Exact(Rational::new(p, q)));
        }
        if let Ok(n) = BigInt::from_str(s) {
            return Ok(Scalar::Exact(Rational::from_integer(n)));
        }
        let x = f64::from_str(s).map_err(|e| format!("bad number {s:?}: {e}"))?;
        if !x.is_finite() {
            return Err(format!("non-finite value {s:?}"));
        }
        Ok(Scalar::Float(x))
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Scalar::Exact(q) => serializer.serialize_str(&q.to_string()),
            Scalar::Float(x) => serializer.serialize_f64(*x),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a \"p/q\" string or a number")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> std::result::Result<Scalar, E> {
                match Scalar::from_str(v).map_err(E::custom)? {
                    s @ Scalar::Exact(_) => Ok(s),
                    Scalar::Float(_) => Err(E::custom("exact scalar strings must be p/q")),
                }
            }

            fn visit_f64<E: de::Error>(self, v: f64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Float(v))
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Float(v as f64))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> std::result::Result<Scalar, E> {
                Ok(Scalar::Float(v as f64))
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    match (q.numer().to_f64(), q.denom().to_f64()) {
        (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
        _ => q.to_f64().unwrap_or(f64::NAN),
    }
}

pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Best rational approximation of `x` by continued-fraction convergents
/// with denominator at most `max_den`, accepted only within `eps`.
pub fn snap_rational(x: f64, eps: f64, max_den: u64) -> Option<Rational> {
    if !x.is_finite() || x.abs() > 1e15 {
        return None;
    }
    // Every real has convergents p/q within 1/q² of it, so only accept
    // denominators small enough that a hit within eps is not a coincidence.
    let cap = ((1.0 / (eps.max(1e-300) * 1e2)).sqrt() as u64).max(1);
    let max_den = max_den.min(cap);
    let (mut p_prev, mut p) = (1i128, x.floor() as i128);
    let (mut q_prev, mut q) = (0i128, 1i128);
    let mut frac = x - x.floor();
    loop {
        let approx = p as f64 / q as f64;
        if (approx - x).abs() <= eps {
            return Some(Rational::new(BigInt::from(p), BigInt::from(q)));
        }
        if frac.abs() < 1e-300 {
            return None;
        }
        let inv = 1.0 / frac;
        let a = inv.floor();
        frac = inv - a;
        let a = a as i128;
        let p_next = a.checked_mul(p)?.checked_add(p_prev)?;
        let q_next = a.checked_mul(q)?.checked_add(q_prev)?;
        if q_next as u128 > max_den as u128 {
            return None;
        }
        p_prev = p;
        q_prev = q;
        p = p_next;
        q = q_next;
    }
}

/// Exponent of `p` in a nonzero rational; `None` for zero.
pub fn p_adic_valuation(q: &Rational, p: u64) -> Option<i64> {
    if q.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let count = |mut n: BigInt| {
        let mut v = 0i64;
        n = n.abs();
        loop {
            let (quot, rem) = n.div_rem(&p);
            if !rem.is_zero() {
                return v;
            }
            n = quot;
            v += 1;
        }
    };
    Some(count(q.numer().clone()) - count(q.denom().clone()))
}

pub fn is_integer(q: &Rational) -> bool {
    q.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_modes() {
        assert_eq!("3/6".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("-4/-8".parse::<Scalar>().unwrap(), Scalar::ratio(1, 2));
        assert_eq!("7".parse::<Scalar>().unwrap(), Scalar::from_int(7));
        assert_eq!("0.25".parse::<Scalar>().unwrap(), Scalar::Float(0.25));
        assert!("1/0".parse::<Scalar>().is_err());
        assert!("abc".parse::<Scalar>().is_err());
    }

    #[test]
    fn lowest_terms_positive_denominator() {
        let s: Scalar = "6/-4".parse().unwrap();
        let q = s.as_rational().unwrap();
        assert_eq!(q.numer(), &BigInt::from(-3));
        assert_eq!(q.denom(), &BigInt::from(2));
    }

    #[test]
    fn snapping() {
        assert_eq!(snap_rational(52.0 / 45.0, 1e-12, 1_000_000), Some(rat(52, 45)));
        assert_eq!(snap_rational(-2.5, 1e-12, 1_000_000), Some(rat(-5, 2)));
        assert_eq!(snap_rational(1e-13, 1e-12, 1_000_000), Some(rat(0, 1)));
        assert_eq!(snap_rational(5f64.sqrt(), 1e-12, 1_000_000), None);
    }

    #[test]
    fn valuations() {
        assert_eq!(p_adic_valuation(&rat(-5, 2), 2), Some(-1));
        assert_eq!(p_adic_valuation(&rat(12, 1), 2), Some(2));
        assert_eq!(p_adic_valuation(&rat(9, 2), 3), Some(2));
        assert_eq!(p_adic_valuation(&rat(0, 1), 2), None);
    }

    #[test]
    fn json_keeps_mode() {
        let v = vec![Scalar::ratio(52, 45), Scalar::Float(0.5), Scalar::from_int(-3)];
        let s = serde_json::to_string(&v).unwrap();
        assert_eq!(s, r#"["52/45",0.5,"-3"]"#);
        let back: Vec<Scalar> = serde_json::from_str(&s).unwrap();
        assert_eq!(back, v);
    }
}
