//! Coefficient contexts the torsion engine can eliminate over.
//!
//! The engine needs honest division, so it works over a field supplied as a
//! small context value: the rationals, or a cyclotomic field of a given
//! order. The context style (methods take `&self`) lets the cyclotomic case
//! carry its order without threading it through every matrix entry.

use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::ring::Cyclotomic;

/// Exact field arithmetic on an element type chosen by the context.
pub trait FieldOps: Clone {
    type Elem: Clone + PartialEq + std::fmt::Debug + std::fmt::Display;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Multiplicative inverse.
    ///
    /// # Panics
    ///
    /// Panics on zero input.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.mul(a, &self.inv(b))
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The rational numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Rationals;

impl FieldOps for Rationals {
    type Elem = BigRational;

    fn zero(&self) -> BigRational {
        BigRational::zero()
    }

    fn one(&self) -> BigRational {
        BigRational::one()
    }

    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }

    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }

    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }

    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }

    fn is_zero(&self, a: &BigRational) -> bool {
        Zero::is_zero(a)
    }
}

/// The cyclotomic field of the given order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CycField {
    pub order: u32,
}

impl FieldOps for CycField {
    type Elem = Cyclotomic;

    fn zero(&self) -> Cyclotomic {
        Cyclotomic::zero(self.order)
    }

    fn one(&self) -> Cyclotomic {
        Cyclotomic::one(self.order)
    }

    fn add(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a + b
    }

    fn neg(&self, a: &Cyclotomic) -> Cyclotomic {
        -a
    }

    fn mul(&self, a: &Cyclotomic, b: &Cyclotomic) -> Cyclotomic {
        a * b
    }

    fn inv(&self, a: &Cyclotomic) -> Cyclotomic {
        a.inv().expect("inverse of zero")
    }

    fn is_zero(&self, a: &Cyclotomic) -> bool {
        a.is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_context_round_trips() {
        let f = Rationals;
        let two = f.add(&f.one(), &f.one());
        assert_eq!(f.mul(&two, &f.inv(&two)), f.one());
        assert!(f.is_zero(&f.sub(&two, &two)));
    }

    #[test]
    fn cyclotomic_context_uses_its_order() {
        let f = CycField { order: 5 };
        let z = Cyclotomic::zeta(5);
        assert_eq!(f.mul(&z, &f.inv(&z)), f.one());
        // 1 + z + z^2 + z^3 + z^4 = 0
        let mut acc = f.one();
        let mut p = f.one();
        for _ in 0..4 {
            p = f.mul(&p, &z);
            acc = f.add(&acc, &p);
        }
        assert!(f.is_zero(&acc));
    }
}
