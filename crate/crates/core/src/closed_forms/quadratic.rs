use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::numtheory::factorize;

/// The algebraic integer `(half_x + half_y * sqrt(d)) / 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticValue {
    half_x: BigInt,
    half_y: BigInt,
    d: i64,
}

fn squarefree(d: i64) -> bool {
    d != 0 && factorize(d.unsigned_abs()).iter().all(|&(_, e)| e == 1)
}

impl QuadraticValue {
    pub fn new(half_x: BigInt, half_y: BigInt, d: i64) -> Result<Self> {
        if !squarefree(d) {
            return Err(Error::InvalidParameter(format!("{d} is not a squarefree nonzero integer")));
        }
        let ok = if d.rem_euclid(4) == 1 {
            half_x.is_even() == half_y.is_even()
        } else {
            half_x.is_even() && half_y.is_even()
        };
        if !ok {
            return Err(Error::InvalidParameter("not an algebraic integer".into()));
        }
        Ok(Self { half_x, half_y, d })
    }

    pub fn integer(v: BigInt, d: i64) -> Self {
        Self::new(v * 2, BigInt::zero(), d).expect("integers are algebraic integers")
    }

    pub fn half_x(&self) -> &BigInt {
        &self.half_x
    }

    pub fn half_y(&self) -> &BigInt {
        &self.half_y
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// Rational part `half_x / 2`.
    pub fn rational_part(&self) -> BigRational {
        BigRational::new(self.half_x.clone(), BigInt::from(2))
    }

    /// Coefficient `half_y / 2` of `sqrt(d)`.
    pub fn surd_part(&self) -> BigRational {
        BigRational::new(self.half_y.clone(), BigInt::from(2))
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        (self.half_y.is_zero() && self.half_x.is_even()).then(|| &self.half_x / 2)
    }

    fn same_field(&self, other: &Self) {
        assert!(
            self.d == other.d || self.half_y.is_zero() || other.half_y.is_zero(),
            "values live in different quadratic fields"
        );
    }

    fn field_of(&self, other: &Self) -> i64 {
        if self.half_y.is_zero() {
            other.d
        } else {
            self.d
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        self.same_field(other);
        Self {
            half_x: &self.half_x + &other.half_x,
            half_y: &self.half_y + &other.half_y,
            d: self.field_of(other),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            half_x: -&self.half_x,
            half_y: -&self.half_y,
            d: self.d,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.same_field(other);
        let d = self.field_of(other);
        let x = &self.half_x * &other.half_x + BigInt::from(d) * &self.half_y * &other.half_y;
        let y = &self.half_x * &other.half_y + &other.half_x * &self.half_y;
        debug_assert!(x.is_even() && y.is_even());
        Self {
            half_x: x / 2,
            half_y: y / 2,
            d,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            half_x: &self.half_x * k,
            half_y: &self.half_y * k,
            d: self.d,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::integer(BigInt::one(), self.d);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn conj(&self) -> Self {
        Self {
            half_x: self.half_x.clone(),
            half_y: -&self.half_y,
            d: self.d,
        }
    }

    /// `(half_x^2 - d half_y^2) / 4`.
    pub fn norm(&self) -> BigInt {
        (&self.half_x * &self.half_x - BigInt::from(self.d) * &self.half_y * &self.half_y) / 4
    }

    pub fn to_complex(&self) -> Complex64 {
        let x = self.half_x.to_f64().unwrap_or(f64::NAN) / 2.0;
        let y = self.half_y.to_f64().unwrap_or(f64::NAN) / 2.0;
        let root = (self.d.unsigned_abs() as f64).sqrt();
        if self.d > 0 {
            Complex64::new(x + y * root, 0.0)
        } else {
            Complex64::new(x, y * root)
        }
    }
}

impl fmt::Display for QuadraticValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = self.as_integer() {
            return write!(f, "{v}");
        }
        let sign = if self.half_y.is_negative() { '-' } else { '+' };
        write!(f, "({} {} {}*sqrt({}))/2", self.half_x, sign, self.half_y.abs(), self.d)
    }
}
