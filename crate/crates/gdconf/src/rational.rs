//! Exact rational scalars.
//!
//! The base field is the rationals; every coefficient in the crate is a
//! [`Rat`]. Values are always reduced with a positive denominator, which
//! `num-rational` maintains for us.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

pub type Rat = BigRational;

/// Rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational from numerator and denominator.
pub fn ratio(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Parse "p/q" or "p". Used by the JSON structure-constant format.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|e| format!("bad numerator {n:?}: {e}"))?;
            let d: BigInt = d.trim().parse().map_err(|e| format!("bad denominator {d:?}: {e}"))?;
            if d.is_zero() {
                return Err(format!("zero denominator in {s:?}"));
            }
            Ok(BigRational::new(n, d))
        }
        None => {
            let n: BigInt = s.parse().map_err(|e| format!("bad rational {s:?}: {e}"))?;
            Ok(BigRational::from_integer(n))
        }
    }
}

/// Canonical "p/q" rendering; integers print without the denominator.
pub fn rat_str(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Binomial coefficient as a rational.
pub fn binomial(n: u32, k: u32) -> Rat {
    if k > n {
        return Rat::zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k {
        acc *= BigInt::from(n - i);
    }
    let mut den = BigInt::one();
    for i in 1..=k {
        den *= BigInt::from(i);
    }
    BigRational::new(acc, den)
}

/// n! as a rational.
pub fn factorial(n: u32) -> Rat {
    let mut acc = BigInt::one();
    for i in 1..=n {
        acc *= BigInt::from(i);
    }
    BigRational::from_integer(acc)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_render() {
        assert_eq!(rat_str(&parse_rat("3/6").unwrap()), "1/2");
        assert_eq!(rat_str(&parse_rat("-4/2").unwrap()), "-2");
        assert_eq!(rat_str(&parse_rat("7").unwrap()), "7");
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rat(10));
        assert_eq!(binomial(4, 0), rat(1));
        assert_eq!(binomial(3, 5), rat(0));
        assert_eq!(factorial(5), rat(120));
    }
}
