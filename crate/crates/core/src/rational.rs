//! Reduced integer fractions. Every density and lambda value in the crate is
//! one of these; there is no floating point anywhere in the computation path.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// A rational number `p/q` kept in lowest terms with `q > 0`.
///
/// The canonical zero is `0/1`. Arithmetic and comparison are exact;
/// intermediates are widened to `i128` so values at the crate's scales
/// (numerators and denominators bounded by group orders) never overflow.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rational {
    num: i64,
    den: i64,
}

const fn gcd_i64(mut a: i64, mut b: i64) -> i64 {
    a = a.abs();
    b = b.abs();
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

impl Rational {
    pub const ZERO: Rational = Rational { num: 0, den: 1 };
    pub const ONE: Rational = Rational { num: 1, den: 1 };

    /// Builds `num/den` in lowest terms.
    ///
    /// Panics if `den == 0`; a zero denominator is a programming error,
    /// not a data condition.
    pub fn new(num: i64, den: i64) -> Rational {
        assert!(den != 0, "rational with zero denominator");
        let sign = if den < 0 { -1 } else { 1 };
        let g = gcd_i64(num, den);
        if g == 0 {
            return Rational::ZERO;
        }
        Rational {
            num: sign * (num / g),
            den: (den / g).abs(),
        }
    }

    fn from_i128(num: i128, den: i128) -> Rational {
        assert!(den != 0, "rational with zero denominator");
        let sign: i128 = if den < 0 { -1 } else { 1 };
        let g = {
            let (mut a, mut b) = (num.abs(), den.abs());
            while b != 0 {
                let t = a % b;
                a = b;
                b = t;
            }
            a
        };
        if g == 0 {
            return Rational::ZERO;
        }
        let n = sign * (num / g);
        let d = (den / g).abs();
        assert!(
            n >= i64::MIN as i128 && n <= i64::MAX as i128 && d <= i64::MAX as i128,
            "rational overflow"
        );
        Rational {
            num: n as i64,
            den: d as i64,
        }
    }

    pub fn numerator(&self) -> i64 {
        self.num
    }

    pub fn denominator(&self) -> i64 {
        self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num == 0
    }

    /// Reciprocal of `k + l`, the recurring upper-bound constant.
    pub fn one_over(total: u64) -> Rational {
        Rational::new(1, total as i64)
    }
}

impl PartialOrd for Rational {
    fn partial_cmp(&self, other: &Rational) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Rational {
    fn cmp(&self, other: &Rational) -> Ordering {
        let lhs = self.num as i128 * other.den as i128;
        let rhs = other.num as i128 * self.den as i128;
        lhs.cmp(&rhs)
    }
}

impl Add for Rational {
    type Output = Rational;
    fn add(self, rhs: Rational) -> Rational {
        Rational::from_i128(
            self.num as i128 * rhs.den as i128 + rhs.num as i128 * self.den as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Sub for Rational {
    type Output = Rational;
    fn sub(self, rhs: Rational) -> Rational {
        self + (-rhs)
    }
}

impl Mul for Rational {
    type Output = Rational;
    fn mul(self, rhs: Rational) -> Rational {
        Rational::from_i128(
            self.num as i128 * rhs.num as i128,
            self.den as i128 * rhs.den as i128,
        )
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -self.num,
            den: self.den,
        }
    }
}

impl fmt::Display for Rational {
    /// Always renders as `p/q`, including `0/1`; report formats rely on this.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.num, self.den)
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Rational, Error> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid rational literal {s:?}"));
        match s.split_once('/') {
            Some((p, q)) => {
                let num: i64 = p.trim().parse().map_err(|_| bad())?;
                let den: i64 = q.trim().parse().map_err(|_| bad())?;
                if den == 0 {
                    return Err(bad());
                }
                Ok(Rational::new(num, den))
            }
            None => {
                let num: i64 = s.parse().map_err(|_| bad())?;
                Ok(Rational::new(num, 1))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reduction_and_canonical_zero() {
        assert_eq!(Rational::new(4, 6), Rational::new(2, 3));
        assert_eq!(Rational::new(0, 5), Rational::ZERO);
        assert_eq!(Rational::new(0, -5), Rational::ZERO);
        assert_eq!(Rational::new(-2, -4), Rational::new(1, 2));
        assert_eq!(Rational::new(2, -4), Rational::new(-1, 2));
        assert_eq!(Rational::new(2, -4).denominator(), 2);
    }

    #[test]
    fn ordering_is_exact() {
        assert!(Rational::new(2, 7) < Rational::new(1, 3));
        assert!(Rational::new(1, 2) > Rational::new(2, 5));
        assert_eq!(Rational::new(3, 9), Rational::new(1, 3));
        // Values that would collide under f64 rounding stay distinct.
        assert!(Rational::new(1_000_000_000, 3_000_000_001) < Rational::new(1, 3));
    }

    #[test]
    fn arithmetic() {
        assert_eq!(
            Rational::new(1, 3) + Rational::new(1, 6),
            Rational::new(1, 2)
        );
        assert_eq!(
            Rational::new(1, 2) - Rational::new(2, 7),
            Rational::new(3, 14)
        );
        assert_eq!(
            Rational::new(2, 3) * Rational::new(3, 4),
            Rational::new(1, 2)
        );
    }

    #[test]
    fn display_and_parse_round_trip() {
        for r in [
            Rational::ZERO,
            Rational::new(2, 7),
            Rational::new(-3, 5),
            Rational::new(1, 2),
        ] {
            assert_eq!(r.to_string().parse::<Rational>().unwrap(), r);
        }
        assert_eq!("5".parse::<Rational>().unwrap(), Rational::new(5, 1));
        assert!("1/0".parse::<Rational>().is_err());
        assert!("a/b".parse::<Rational>().is_err());
        assert!("".parse::<Rational>().is_err());
    }

    #[test]
    fn zero_displays_as_zero_over_one() {
        assert_eq!(Rational::ZERO.to_string(), "0/1");
    }
}
