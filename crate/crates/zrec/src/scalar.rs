//! Exact field arithmetic for matrix entries: arbitrary-precision rationals
//! and prime fields. No floating point anywhere; division by zero is an
//! error, never a representable value.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;

#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum ScalarError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("field mismatch: {0}")]
    FieldMismatch(String),
    #[error("invalid scalar literal `{0}`")]
    BadLiteral(String),
}

/// Field descriptor carried by every matrix and sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Rational,
    /// Integers mod p, p prime.
    Prime(u64),
}

impl fmt::Display for FieldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldKind::Rational => write!(f, "rational"),
            FieldKind::Prime(p) => write!(f, "mod {p}"),
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// An exact field element. Rationals are kept reduced with positive
/// denominator (the representation `BigRational` maintains); prime-field
/// values are canonical residues in `[0, p)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Rational(BigRational),
    Prime { value: u64, modulus: u64 },
}

impl Scalar {
    pub fn zero(field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => Scalar::Rational(BigRational::zero()),
            FieldKind::Prime(p) => Scalar::Prime { value: 0, modulus: p },
        }
    }

    pub fn one(field: FieldKind) -> Self {
        match field {
            FieldKind::Rational => Scalar::Rational(BigRational::one()),
            FieldKind::Prime(p) => Scalar::Prime { value: 1 % p, modulus: p },
        }
    }

    pub fn from_integer(field: FieldKind, n: i64) -> Self {
        match field {
            FieldKind::Rational => Scalar::Rational(BigRational::from(BigInt::from(n))),
            FieldKind::Prime(p) => Scalar::Prime { value: n.rem_euclid(p as i64) as u64, modulus: p },
        }
    }

    /// num/den where den must be invertible in the field.
    pub fn from_fraction(field: FieldKind, num: i64, den: i64) -> Result<Self, ScalarError> {
        if den == 0 {
            return Err(ScalarError::DivisionByZero);
        }
        match field {
            FieldKind::Rational => Ok(Scalar::Rational(BigRational::new(
                BigInt::from(num),
                BigInt::from(den),
            ))),
            FieldKind::Prime(_) => {
                let d = Self::from_integer(field, den);
                Self::from_integer(field, num).checked_div(&d)
            }
        }
    }

    pub fn field(&self) -> FieldKind {
        match self {
            Scalar::Rational(_) => FieldKind::Rational,
            Scalar::Prime { modulus, .. } => FieldKind::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_zero(),
            Scalar::Prime { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Scalar::Rational(r) => r.is_one(),
            Scalar::Prime { value, modulus } => *value == 1 % *modulus,
        }
    }

    fn check_same(&self, other: &Scalar) -> (FieldKind, FieldKind) {
        (self.field(), other.field())
    }

    fn binop(
        &self,
        other: &Scalar,
        rat: impl FnOnce(&BigRational, &BigRational) -> BigRational,
        pf: impl FnOnce(u64, u64, u64) -> u64,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Rational(a), Scalar::Rational(b)) => Scalar::Rational(rat(a, b)),
            (Scalar::Prime { value: a, modulus: p }, Scalar::Prime { value: b, modulus: q })
                if p == q =>
            {
                Scalar::Prime { value: pf(*a, *b, *p), modulus: *p }
            }
            _ => {
                let (f, g) = self.check_same(other);
                panic!("scalar arithmetic across fields: {f} vs {g}")
            }
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        self.binop(other, |a, b| a + b, |a, b, p| ((a as u128 + b as u128) % p as u128) as u64)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        self.binop(other, |a, b| a - b, |a, b, p| {
            ((a as u128 + p as u128 - b as u128) % p as u128) as u64
        })
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        self.binop(other, |a, b| a * b, |a, b, p| ((a as u128 * b as u128) % p as u128) as u64)
    }

    pub fn neg(&self) -> Scalar {
        match self {
            Scalar::Rational(r) => Scalar::Rational(-r),
            Scalar::Prime { value, modulus } => Scalar::Prime {
                value: if *value == 0 { 0 } else { modulus - value },
                modulus: *modulus,
            },
        }
    }

    pub fn inverse(&self) -> Result<Scalar, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match self {
            Scalar::Rational(r) => Ok(Scalar::Rational(r.recip())),
            Scalar::Prime { value, modulus } => {
                // extended Euclid; modulus is prime so any nonzero value inverts
                let (mut r0, mut r1) = (*modulus as i128, *value as i128);
                let (mut t0, mut t1) = (0i128, 1i128);
                while r1 != 0 {
                    let q = r0 / r1;
                    (r0, r1) = (r1, r0 - q * r1);
                    (t0, t1) = (t1, t0 - q * t1);
                }
                debug_assert_eq!(r0, 1, "modulus must be prime");
                let p = *modulus as i128;
                Ok(Scalar::Prime { value: t0.rem_euclid(p) as u64, modulus: *modulus })
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar, ScalarError> {
        Ok(self.mul(&other.inverse()?))
    }

    /// Parse `num` or `num/den` in the given field. Used by the JSON codec
    /// and the DSL.
    pub fn parse(field: FieldKind, s: &str) -> Result<Self, ScalarError> {
        let bad = || ScalarError::BadLiteral(s.to_string());
        let (num_s, den_s) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let num: BigInt = num_s.trim().parse().map_err(|_| bad())?;
        let den: BigInt = match den_s {
            Some(d) => d.trim().parse().map_err(|_| bad())?,
            None => BigInt::one(),
        };
        if den.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        match field {
            FieldKind::Rational => Ok(Scalar::Rational(BigRational::new(num, den))),
            FieldKind::Prime(p) => {
                let pb = BigInt::from(p);
                let reduce = |x: &BigInt| -> u64 {
                    let m = x % &pb;
                    let m = if m.is_negative() { m + &pb } else { m };
                    u64::try_from(m).expect("residue fits u64")
                };
                let n = Scalar::Prime { value: reduce(&num), modulus: p };
                let d = Scalar::Prime { value: reduce(&den), modulus: p };
                n.checked_div(&d)
            }
        }
    }

    /// Rational numerator/denominator view; prime-field values render as a
    /// bare residue.
    pub fn to_literal(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Rational(r) => {
                if r.denom().is_one() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Scalar::Prime { value, .. } => write!(f, "{value}"),
        }
    }
}
