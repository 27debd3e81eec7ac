//! Exact scalars: integers, rationals, and p-local rationals standing in for
//! the p-adic integers.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// True iff the reduced denominator of `q` is prime to `p`.
pub fn is_p_integral(q: &Rational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero()
}

/// Which scalar ring an element's coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScalarMode {
    Integer,
    /// Rationals with denominator prime to `p`.
    PLocal(u64),
    Rational,
}

impl ScalarMode {
    /// The smallest mode containing both.
    pub fn join(self, other: ScalarMode) -> ScalarMode {
        use ScalarMode::*;
        match (self, other) {
            (Integer, m) | (m, Integer) => m,
            (PLocal(p), PLocal(q)) if p == q => PLocal(p),
            _ => Rational,
        }
    }

    pub fn admits(self, q: &Rational) -> bool {
        match self {
            ScalarMode::Integer => q.is_integer(),
            ScalarMode::PLocal(p) => is_p_integral(q, p),
            ScalarMode::Rational => true,
        }
    }
}

/// A rational number whose denominator is prime to `p`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct PLocalScalar {
    value: Rational,
    prime: u64,
}

impl fmt::Debug for PLocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (p={})", self.value, self.prime)
    }
}

impl fmt::Display for PLocalScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl PLocalScalar {
    pub fn new(value: Rational, prime: u64) -> Result<PLocalScalar> {
        if !is_p_integral(&value, prime) {
            return Err(Error::PAdicIntegralityViolation(format!(
                "{value} has denominator divisible by {prime}"
            )));
        }
        Ok(PLocalScalar { value, prime })
    }

    pub fn from_fraction(num: i64, den: i64, prime: u64) -> Result<PLocalScalar> {
        if den == 0 {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        PLocalScalar::new(rat(num, den), prime)
    }

    pub fn value(&self) -> &Rational {
        &self.value
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn numer(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.value.denom()
    }

    /// The residue of the value modulo `p^precision`, in `0..p^precision`.
    pub fn residue(&self, precision: u32) -> BigInt {
        padic_residue(&self.value, self.prime, precision)
    }

    /// Base-`p` digits of the residue mod `p^precision`, most significant first.
    pub fn digits(&self, precision: u32) -> Vec<u64> {
        let p = BigInt::from(self.prime);
        let mut r = self.residue(precision);
        let mut digits = Vec::with_capacity(precision as usize);
        for _ in 0..precision {
            let (q, d) = r.div_rem(&p);
            digits.push(d.to_u64().expect("digit fits"));
            r = q;
        }
        digits.reverse();
        digits
    }
}

/// `q mod p^precision` for a p-integral rational `q`.
pub fn padic_residue(q: &Rational, p: u64, precision: u32) -> BigInt {
    let modulus = BigInt::from(p).pow(precision);
    let num = q.numer().mod_floor(&modulus);
    let den = q.denom().mod_floor(&modulus);
    let inv = mod_inverse(&den, &modulus).expect("denominator prime to p");
    (num * inv).mod_floor(&modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    if m.is_one() {
        return Some(BigInt::zero());
    }
    let egcd = a.extended_gcd(m);
    if !egcd.gcd.abs().is_one() {
        return None;
    }
    Some(egcd.x.mod_floor(m))
}

/// Renders `q` as `a` or `a/b`.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}
