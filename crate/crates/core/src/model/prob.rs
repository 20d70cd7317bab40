use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::ModelError;

/// Maximum number of fractional digits accepted in a decimal literal.
pub const MAX_FRACTION_DIGITS: usize = 6;

/// An exact probability in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Probability(BigRational);

impl Probability {
    pub fn new(value: BigRational) -> Result<Self, ModelError> {
        if value.is_negative() || value > BigRational::one() {
            return Err(ModelError::ProbabilityRange(value.to_string()));
        }
        Ok(Probability(value))
    }

    /// `num / den`, e.g. a ratio of row counts.
    pub fn from_ratio(num: u64, den: u64) -> Result<Self, ModelError> {
        if den == 0 {
            return Err(ModelError::ZeroDenominator);
        }
        Probability::new(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn zero() -> Self {
        Probability(BigRational::zero())
    }

    pub fn one() -> Self {
        Probability(BigRational::one())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn as_rational(&self) -> &BigRational {
        &self.0
    }

    /// `|self - other|`, which is again a probability.
    pub fn abs_diff(&self, other: &Probability) -> Probability {
        Probability((&self.0 - &other.0).abs())
    }

    /// Parses `digits[.digits]` (at most six fractional digits) or `num/den`.
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        if let Some((n, d)) = text.split_once('/') {
            let num = parse_digits(n).ok_or_else(|| ModelError::BadProbability(text.into()))?;
            let den = parse_digits(d).ok_or_else(|| ModelError::BadProbability(text.into()))?;
            if den.is_zero() {
                return Err(ModelError::ZeroDenominator);
            }
            return Probability::new(BigRational::new(num, den));
        }
        let (int, frac) = match text.split_once('.') {
            Some((i, f)) => (i, f),
            None => (text, ""),
        };
        let int = parse_digits(int).ok_or_else(|| ModelError::BadProbability(text.into()))?;
        if text.contains('.') && frac.is_empty() {
            return Err(ModelError::BadProbability(text.into()));
        }
        if frac.len() > MAX_FRACTION_DIGITS {
            return Err(ModelError::TooManyDigits(text.into()));
        }
        let mut value = BigRational::from_integer(int);
        if !frac.is_empty() {
            let f = parse_digits(frac).ok_or_else(|| ModelError::BadProbability(text.into()))?;
            let scale = BigInt::from(10u32).pow(frac.len() as u32);
            value += BigRational::new(f, scale);
        }
        Probability::new(value)
    }

    /// Decimal rendering when the value has a short exact expansion.
    ///
    /// `0` and `1` print bare; other decimals keep at least two fractional
    /// digits (`0.60`). Values with no terminating expansion of at most six
    /// digits print as a reduced fraction (`1/3`).
    pub fn to_decimal_string(&self) -> Option<String> {
        if self.0.is_zero() {
            return Some("0".into());
        }
        if self.0.is_one() {
            return Some("1".into());
        }
        let scale = BigInt::from(10u32).pow(MAX_FRACTION_DIGITS as u32);
        let scaled = &self.0 * BigRational::from_integer(scale);
        if !scaled.is_integer() {
            return None;
        }
        let digits = format!("{:0>7}", scaled.to_integer());
        let (int, frac) = digits.split_at(digits.len() - MAX_FRACTION_DIGITS);
        let mut frac = frac.trim_end_matches('0').to_string();
        while frac.len() < 2 {
            frac.push('0');
        }
        Some(format!("{int}.{frac}"))
    }
}

fn parse_digits(s: &str) -> Option<BigInt> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_decimal_string() {
            Some(s) => f.write_str(&s),
            None => write!(f, "{}/{}", self.0.numer(), self.0.denom()),
        }
    }
}

impl FromStr for Probability {
    type Err = ModelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Probability::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decimal_is_exact() {
        assert_eq!(Probability::parse("0.60").unwrap(), Probability::from_ratio(3, 5).unwrap());
        assert_eq!(Probability::parse("1").unwrap(), Probability::one());
        assert_eq!(Probability::parse("0.000001").unwrap(), Probability::from_ratio(1, 1_000_000).unwrap());
    }

    #[test]
    fn rejects_out_of_range_and_long_literals() {
        assert!(matches!(Probability::parse("1.2"), Err(ModelError::ProbabilityRange(_))));
        assert!(matches!(Probability::parse("0.1234567"), Err(ModelError::TooManyDigits(_))));
        assert!(Probability::parse("0.").is_err());
        assert!(Probability::parse(".5").is_err());
        assert!(Probability::parse("-0.5").is_err());
        assert!(Probability::parse("1/0").is_err());
    }

    #[test]
    fn rendering() {
        let p = |s: &str| Probability::parse(s).unwrap().to_string();
        assert_eq!(p("0.60"), "0.60");
        assert_eq!(p("0.6"), "0.60");
        assert_eq!(p("0.125"), "0.125");
        assert_eq!(p("0"), "0");
        assert_eq!(p("1.000"), "1");
        assert_eq!(p("2/6"), "1/3");
        assert_eq!(p("1/4"), "0.25");
    }

    #[test]
    fn difference() {
        let p = Probability::parse("0.60").unwrap();
        let q = Probability::parse("0.50").unwrap();
        assert_eq!(p.abs_diff(&q), Probability::parse("0.1").unwrap());
        assert_eq!(q.abs_diff(&p), Probability::parse("0.1").unwrap());
    }
}
