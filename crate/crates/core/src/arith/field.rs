use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;

use num::BigRational;
use num::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Exact field arithmetic over elements that carry their own context
/// (characteristic, extension modulus). Binary operations require both
/// operands to come from the same field; mixing fields is a programming
/// error and panics.
pub trait Field: Clone + PartialEq + Eq + Hash + fmt::Debug + fmt::Display {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_one(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn inv(&self) -> Result<Self>;
    /// 0 for characteristic zero, otherwise the prime p.
    fn characteristic(&self) -> u64;
    /// Total order used only to make sorted output deterministic.
    fn canon_cmp(&self, rhs: &Self) -> Ordering;
    /// Rough bit-size used by entry-growth watchdogs.
    fn size_bits(&self) -> usize;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }
    fn div(&self, rhs: &Self) -> Result<Self> {
        Ok(self.mul(&rhs.inv()?))
    }
}

impl Field for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }
    fn one_like(&self) -> Self {
        BigRational::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_one(&self) -> bool {
        One::is_one(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Result<Self> {
        if Zero::is_zero(self) {
            return Err(Error::domain("division by zero"));
        }
        Ok(self.recip())
    }
    fn characteristic(&self) -> u64 {
        0
    }
    fn canon_cmp(&self, rhs: &Self) -> Ordering {
        self.cmp(rhs)
    }
    fn size_bits(&self) -> usize {
        (self.numer().abs().bits() + self.denom().bits()) as usize
    }
}
