use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex64;
use num_integer::Integer;
use num_rational::Rational64;

use crate::error::{Error, Result};

/// A unimodular complex number `exp(2πi·θ)` stored exactly as `θ ∈ Q/Z`.
///
/// The representative is always normalized into `[0, 1)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Phase(Rational64);

impl Phase {
    pub const ZERO: Phase = Phase(Rational64::new_raw(0, 1));

    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "phase denominator must be nonzero");
        Phase::from_ratio(Rational64::new(num, den))
    }

    fn from_ratio(r: Rational64) -> Self {
        let num = r.numer().mod_floor(r.denom());
        Phase(Rational64::new(num, *r.denom()))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.numer() == 0
    }

    pub fn scale(self, k: i64) -> Self {
        let n = (self.numer() as i128 * k as i128).rem_euclid(self.denom() as i128) as i64;
        Phase::new(n, self.denom())
    }

    /// Smallest `m ≥ 1` with `m·θ ≡ 0`.
    pub fn order(&self) -> u64 {
        self.denom() as u64
    }

    pub fn to_complex(self) -> Complex64 {
        let angle = 2.0 * std::f64::consts::PI * (self.numer() as f64 / self.denom() as f64);
        Complex64::from_polar(1.0, angle)
    }
}

impl Default for Phase {
    fn default() -> Self {
        Phase::ZERO
    }
}

impl Add for Phase {
    type Output = Phase;
    fn add(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 + rhs.0)
    }
}

impl AddAssign for Phase {
    fn add_assign(&mut self, rhs: Phase) {
        *self = *self + rhs;
    }
}

impl Sub for Phase {
    type Output = Phase;
    fn sub(self, rhs: Phase) -> Phase {
        Phase::from_ratio(self.0 - rhs.0)
    }
}

impl Neg for Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_ratio(-self.0)
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl fmt::Debug for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Phase({self})")
    }
}

impl FromStr for Phase {
    type Err = Error;

    /// Accepts `"p/q"` or a bare integer `"p"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::invalid(format!("malformed phase literal {s:?}, expected \"p/q\""));
        match s.split_once('/') {
            Some((p, q)) => {
                let p: i64 = p.trim().parse().map_err(|_| bad())?;
                let q: i64 = q.trim().parse().map_err(|_| bad())?;
                if q == 0 {
                    return Err(bad());
                }
                Ok(Phase::new(p, q))
            }
            None => {
                let p: i64 = s.parse().map_err(|_| bad())?;
                Ok(Phase::new(p, 1))
            }
        }
    }
}

impl serde::Serialize for Phase {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Phase {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
