//! Arithmetic in prime fields `F_p` for odd primes `p`.
//!
//! Residues are stored canonically in `[0, p)`. The balanced view in
//! `[-(p-1)/2, (p-1)/2]` is computed on demand and is what the infinity
//! norm of points is measured in.

mod matrix;
pub mod primality;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use matrix::MatrixFp;

/// Largest supported modulus (exclusive). Keeps `a + b` inside `u64`.
pub const MAX_MODULUS: u64 = 1 << 63;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct PrimeField {
    p: u64,
}

impl TryFrom<u64> for PrimeField {
    type Error = Error;
    fn try_from(p: u64) -> Result<Self> {
        PrimeField::new(p)
    }
}

impl From<PrimeField> for u64 {
    fn from(f: PrimeField) -> u64 {
        f.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

impl PrimeField {
    /// Builds `F_p`; `p` must be an odd prime below [`MAX_MODULUS`].
    pub fn new(p: u64) -> Result<Self> {
        if p < 3 || p.is_multiple_of(2) {
            return Err(Error::EvenOrTooSmall(p));
        }
        if p >= MAX_MODULUS {
            return Err(Error::ModulusOutOfRange(p as u128));
        }
        if !primality::is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(PrimeField { p })
    }

    #[inline]
    pub fn modulus(&self) -> u64 {
        self.p
    }

    /// `(p - 1) / 2`, the largest balanced magnitude.
    #[inline]
    pub fn half(&self) -> u64 {
        (self.p - 1) / 2
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: *self,
        }
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: *self,
        }
    }

    pub fn elem(&self, v: i64) -> FieldElement {
        FieldElement {
            value: self.from_i64(v),
            field: *self,
        }
    }

    pub fn elem_u(&self, v: u64) -> FieldElement {
        FieldElement {
            value: v % self.p,
            field: *self,
        }
    }

    #[inline]
    pub fn from_i64(&self, v: i64) -> u64 {
        (v as i128).rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn from_i128(&self, v: i128) -> u64 {
        v.rem_euclid(self.p as i128) as u64
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        if self.p <= u32::MAX as u64 {
            return (a * b) % self.p;
        }
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn pow(&self, mut base: u64, mut exp: u64) -> u64 {
        let mut acc = 1;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    /// Multiplicative inverse via the extended Euclidean algorithm.
    pub fn inv(&self, a: u64) -> Result<u64> {
        if a.is_multiple_of(self.p) {
            return Err(Error::DivisionByZero);
        }
        let (mut r0, mut r1) = (self.p as i128, (a % self.p) as i128);
        let (mut t0, mut t1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (t0, t1) = (t1, t0 - q * t1);
        }
        debug_assert_eq!(r0, 1);
        Ok(self.from_i128(t0))
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Balanced representative of the canonical residue `a`.
    #[inline]
    pub fn balanced(&self, a: u64) -> i64 {
        if a > self.half() {
            a as i64 - self.p as i64
        } else {
            a as i64
        }
    }

    /// `C(n, k) mod p`, built from exact integer binomials reduced early.
    ///
    /// Uses Pascal's rule so no factorial inverses are required; this stays
    /// correct even when `n >= p`.
    pub fn binomial(&self, n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        let k = k.min(n - k) as usize;
        let mut row = vec![0u64; k + 1];
        row[0] = 1 % self.p;
        for i in 1..=n as usize {
            for j in (1..=k.min(i)).rev() {
                row[j] = self.add(row[j], row[j - 1]);
            }
        }
        row[k]
    }
}

/// An element of `F_p` tagged with its field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElement {
    value: u64,
    field: PrimeField,
}

impl FieldElement {
    #[inline]
    pub fn value(&self) -> u64 {
        self.value
    }

    #[inline]
    pub fn field(&self) -> PrimeField {
        self.field
    }

    pub fn balanced(&self) -> i64 {
        self.field.balanced(self.value)
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field,
        })
    }

    pub fn pow(&self, e: u64) -> FieldElement {
        FieldElement {
            value: self.field.pow(self.value, e),
            field: self.field,
        }
    }

    fn check(&self, other: &FieldElement) -> Result<()> {
        if self.field != other.field {
            return Err(Error::FieldMismatch(self.field.p, other.field.p));
        }
        Ok(())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// The operations accepted by [`field_op`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
    Neg,
    Inv,
    Pow,
}

/// Second operand of [`field_op`].
#[derive(Clone, Copy, Debug)]
pub enum Operand {
    None,
    Elem(FieldElement),
    Exp(u64),
}

/// Checked dispatcher over the field operations.
pub fn field_op(kind: FieldOp, a: FieldElement, b: Operand) -> Result<FieldElement> {
    let f = a.field;
    let elem = |b: Operand| -> Result<FieldElement> {
        match b {
            Operand::Elem(e) => {
                a.check(&e)?;
                Ok(e)
            }
            _ => Err(Error::Invalid(format!(
                "{kind:?} needs a field element operand"
            ))),
        }
    };
    let value = match kind {
        FieldOp::Add => f.add(a.value, elem(b)?.value),
        FieldOp::Sub => f.sub(a.value, elem(b)?.value),
        FieldOp::Mul => f.mul(a.value, elem(b)?.value),
        FieldOp::Div => f.div(a.value, elem(b)?.value)?,
        FieldOp::Neg => f.neg(a.value),
        FieldOp::Inv => f.inv(a.value)?,
        FieldOp::Pow => match b {
            Operand::Exp(e) => f.pow(a.value, e),
            _ => return Err(Error::Invalid("pow needs an exponent".into())),
        },
    };
    Ok(FieldElement { value, field: f })
}

macro_rules! binop {
    ($trait:ident, $method:ident) => {
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                assert_eq!(self.field, rhs.field, "field mismatch");
                FieldElement {
                    value: self.field.$method(self.value, rhs.value),
                    field: self.field,
                }
            }
        }
    };
}

binop!(Add, add);
binop!(Sub, sub);
binop!(Mul, mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn construction() {
        assert_eq!(PrimeField::new(7).unwrap().modulus(), 7);
        assert_eq!(PrimeField::new(9), Err(Error::NotPrime(9)));
        assert_eq!(PrimeField::new(2), Err(Error::EvenOrTooSmall(2)));
        assert_eq!(PrimeField::new(1), Err(Error::EvenOrTooSmall(1)));
        assert_eq!(PrimeField::new(10), Err(Error::EvenOrTooSmall(10)));
        assert!(PrimeField::new((1 << 61) - 1).is_ok());
    }

    #[test]
    fn ops_in_f7() {
        let f = PrimeField::new(7).unwrap();
        let (a, b) = (f.elem(3), f.elem(5));
        assert_eq!(
            field_op(FieldOp::Mul, a, Operand::Elem(b)).unwrap().value(),
            1
        );
        assert_eq!(field_op(FieldOp::Inv, a, Operand::None).unwrap().value(), 5);
        assert_eq!(
            field_op(FieldOp::Inv, f.zero(), Operand::None),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            field_op(FieldOp::Div, a, Operand::Elem(f.zero())),
            Err(Error::DivisionByZero)
        );
        assert_eq!(
            field_op(FieldOp::Pow, a, Operand::Exp(6)).unwrap().value(),
            1
        );
        assert_eq!(field_op(FieldOp::Neg, a, Operand::None).unwrap().value(), 4);
        assert_eq!(
            field_op(FieldOp::Sub, a, Operand::Elem(b)).unwrap().value(),
            5
        );
        let g = PrimeField::new(5).unwrap();
        assert_eq!(
            field_op(FieldOp::Add, a, Operand::Elem(g.one())),
            Err(Error::FieldMismatch(7, 5))
        );
    }

    #[test]
    fn balanced_examples() {
        let f = PrimeField::new(7).unwrap();
        assert_eq!(f.elem(6).balanced(), -1);
        assert_eq!(f.elem(3).balanced(), 3);
        assert_eq!(f.elem(0).balanced(), 0);
        assert_eq!(f.elem(4).balanced(), -3);
    }

    #[test]
    fn binomials_small_prime() {
        let f = PrimeField::new(5).unwrap();
        assert_eq!(f.binomial(4, 2), 1);
        assert_eq!(f.binomial(5, 1), 0);
        assert_eq!(f.binomial(10, 3), 120 % 5);
        assert_eq!(f.binomial(3, 4), 0);
        let g = PrimeField::new(1_000_003).unwrap();
        assert_eq!(g.binomial(30, 15), 155_117_520 % 1_000_003);
    }

    proptest! {
        #[test]
        fn inverse_law(p in prop::sample::select(vec![3u64, 5, 7, 11, 101, 1_000_000_007, (1 << 61) - 1]), a in 1u64..u64::MAX) {
            let f = PrimeField::new(p).unwrap();
            let a = a % p;
            prop_assume!(a != 0);
            let e = f.elem_u(a);
            prop_assert_eq!((e * e.inv().unwrap()).value(), 1);
        }

        #[test]
        fn balanced_round_trip(p in prop::sample::select(vec![3u64, 5, 7, 13, 1009, 1_000_000_007]), a in 0u64..u64::MAX) {
            let f = PrimeField::new(p).unwrap();
            let a = a % p;
            let b = f.balanced(a);
            prop_assert!(b.unsigned_abs() <= f.half());
            prop_assert_eq!(f.from_i64(b), a);
        }
    }
}
