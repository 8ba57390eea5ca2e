//! Elements of the localized ring `R = Z[u, u^-1, (1-u)^-1]`.
//!
//! Every element is stored as `num / (1-u)^denom_pow` with the canonical-form
//! invariant that `1 - u` does not divide `num` whenever `denom_pow > 0` (and
//! zero is stored with `denom_pow = 0`). Equality is therefore structural.

use std::fmt;

use num_complex::Complex64;
use num_traits::{One, Signed};

use super::cyclotomic::Cyclotomic;
use super::laurent::{LaurentPoly, Parser};
use super::{LocalSystem, ParseError, RingError, Sign};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RingElem {
    num: LaurentPoly,
    denom_pow: u32,
}

/// A unit of `R` written as `sign * u^u_exp * (1-u)^one_minus_u_exp`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UnitParts {
    pub sign: Sign,
    pub u_exp: i64,
    pub one_minus_u_exp: i64,
}

/// A unit of `R` with the sign quotiented away, the currency of edge labels
/// and torsion classes up to `+-1`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub struct UnitUpToSign {
    pub u_exp: i64,
    pub one_minus_u_exp: i64,
}

impl UnitParts {
    pub fn up_to_sign(self) -> UnitUpToSign {
        UnitUpToSign { u_exp: self.u_exp, one_minus_u_exp: self.one_minus_u_exp }
    }
}

impl UnitUpToSign {
    pub fn to_ring_elem(self) -> RingElem {
        RingElem::unit(Sign::Plus, self.u_exp, self.one_minus_u_exp)
    }
}

impl fmt::Display for UnitUpToSign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "+-{}", self.to_ring_elem())
    }
}

impl RingElem {
    /// Build `num / (1-u)^denom_pow` and reduce to canonical form.
    pub fn new(num: LaurentPoly, denom_pow: u32) -> Self {
        let mut elem = RingElem { num, denom_pow };
        elem.canonicalize();
        elem
    }

    fn canonicalize(&mut self) {
        if self.num.is_zero() {
            self.denom_pow = 0;
            return;
        }
        while self.denom_pow > 0 {
            match self.num.div_exact_one_minus_u() {
                Some(q) => {
                    self.num = q;
                    self.denom_pow -= 1;
                }
                None => break,
            }
        }
    }

    pub fn zero() -> Self {
        RingElem { num: LaurentPoly::zero(), denom_pow: 0 }
    }

    pub fn one() -> Self {
        RingElem { num: LaurentPoly::one(), denom_pow: 0 }
    }

    pub fn from_laurent(num: LaurentPoly) -> Self {
        RingElem { num, denom_pow: 0 }
    }

    pub fn constant(c: i64) -> Self {
        RingElem::from_laurent(LaurentPoly::monomial(c, 0))
    }

    pub fn u_pow(k: i64) -> Self {
        RingElem::from_laurent(LaurentPoly::monomial(1, k))
    }

    /// `(1-u)^k` for any integer `k`, negative meaning the inverted prime.
    pub fn one_minus_u_pow(k: i64) -> Self {
        if k >= 0 {
            let mut num = LaurentPoly::one();
            for _ in 0..k {
                num = &num * &LaurentPoly::one_minus_u();
            }
            RingElem::from_laurent(num)
        } else {
            RingElem { num: LaurentPoly::one(), denom_pow: (-k) as u32 }
        }
    }

    /// The unit `sign * u^a * (1-u)^b`.
    pub fn unit(sign: Sign, a: i64, b: i64) -> Self {
        let monomial = LaurentPoly::monomial(sign.to_int(), a);
        &RingElem::from_laurent(monomial) * &RingElem::one_minus_u_pow(b)
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom_pow(&self) -> u32 {
        self.denom_pow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self == &RingElem::one()
    }

    pub fn pow(&self, k: u32) -> RingElem {
        let mut acc = RingElem::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient in `R`; `None` when `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &RingElem) -> Option<RingElem> {
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(RingElem::zero());
        }
        // self / divisor = (n1 / n2) * (1-u)^(d2 - d1); the (1-u) factors of
        // n2 are invertible and must not obstruct, so they move into the
        // exponent before the polynomial division.
        let mut dnum = divisor.num.clone();
        let mut stripped = 0i64;
        while let Some(reduced) = dnum.div_exact_one_minus_u() {
            dnum = reduced;
            stripped += 1;
        }
        let q = self.num.div_exact(&dnum)?;
        let shift = divisor.denom_pow as i64 - self.denom_pow as i64 - stripped;
        Some(&RingElem::from_laurent(q) * &RingElem::one_minus_u_pow(shift))
    }

    /// Recognize a unit `+-u^a (1-u)^b`; `None` for non-units.
    ///
    /// Units of `R` are exactly these: `R` is the localization of the UFD
    /// `Z[u]` away from the primes `u` and `1 - u`, so a unit is `+-1` times
    /// a product of powers of the inverted primes. The test suite
    /// cross-checks with the evaluation `u -> -1` (which kills `1 + u` but
    /// keeps `1 - u` invertible).
    pub fn is_unit(&self) -> Option<UnitParts> {
        if self.is_zero() {
            return None;
        }
        let mut stripped = self.num.clone();
        let mut one_minus_u_mult: i64 = 0;
        while let Some(q) = stripped.div_exact_one_minus_u() {
            stripped = q;
            one_minus_u_mult += 1;
        }
        let (coeff, u_exp) = stripped.as_monomial()?;
        if !coeff.magnitude().is_one() {
            return None;
        }
        let sign = if coeff.is_negative() { Sign::Minus } else { Sign::Plus };
        Some(UnitParts {
            sign,
            u_exp,
            one_minus_u_exp: one_minus_u_mult - self.denom_pow as i64,
        })
    }

    /// Evaluate under the local system, sending `u` to the primitive n-th
    /// root `zeta`. Fails with [`RingError::OrderOne`] for `n = 1`.
    pub fn eval_cyclotomic(&self, rho: &LocalSystem) -> Result<Cyclotomic, RingError> {
        let n = rho.order();
        if n < 2 {
            return Err(RingError::OrderOne);
        }
        let mut acc = Cyclotomic::zero(n);
        for (exp, coeff) in self.num.iter() {
            let term = Cyclotomic::zeta_pow(n, exp).scaled_int(coeff);
            acc = &acc + &term;
        }
        if self.denom_pow > 0 {
            let one_minus_zeta = &Cyclotomic::one(n) - &Cyclotomic::zeta(n);
            let inv = one_minus_zeta
                .inv()
                .expect("1 - zeta is nonzero for order >= 2");
            for _ in 0..self.denom_pow {
                acc = &acc * &inv;
            }
        }
        Ok(acc)
    }

    /// Approximate evaluation at `u = e^(i*theta)` (diagnostics only).
    pub fn eval_unit_circle(&self, theta: f64) -> Result<Complex64, RingError> {
        let denominator = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, theta);
        if self.denom_pow > 0 && denominator.norm() < 1e-9 {
            return Err(RingError::SingularEvaluation { theta, denom_pow: self.denom_pow });
        }
        let mut value = self.num.eval_unit_circle(theta);
        for _ in 0..self.denom_pow {
            value /= denominator;
        }
        Ok(value)
    }

    /// Parse the textual form produced by `Display`: either a bare Laurent
    /// polynomial or `(poly) * (1-u)^-k`.
    pub fn parse(input: &str) -> Result<RingElem, ParseError> {
        let mut p = Parser::new(input);
        let elem = if p.eat(b'(') {
            let num = p.poly()?;
            p.expect(b')')?;
            p.expect(b'*')?;
            p.expect_literal("(1-u)^")?;
            let k = p.small_int()?;
            if k >= 0 {
                return Err(p.error("denominator exponent must be negative"));
            }
            RingElem::new(num, (-k) as u32)
        } else {
            RingElem::from_laurent(p.poly()?)
        };
        p.expect_end()?;
        Ok(elem)
    }
}

impl From<LaurentPoly> for RingElem {
    fn from(num: LaurentPoly) -> Self {
        RingElem::from_laurent(num)
    }
}

impl std::ops::Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem { num: -&self.num, denom_pow: self.denom_pow }
    }
}

impl std::ops::Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        // Bring both over the common denominator (1-u)^max.
        let d = self.denom_pow.max(rhs.denom_pow);
        let scale = |x: &RingElem| {
            let mut num = x.num.clone();
            for _ in 0..(d - x.denom_pow) {
                num = &num * &LaurentPoly::one_minus_u();
            }
            num
        };
        RingElem::new(&scale(self) + &scale(rhs), d)
    }
}

impl std::ops::Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self + &(-rhs)
    }
}

impl std::ops::Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        RingElem::new(&self.num * &rhs.num, self.denom_pow + rhs.denom_pow)
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for RingElem {
            type Output = RingElem;
            fn $method(self, rhs: RingElem) -> RingElem {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl std::ops::Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        -&self
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom_pow == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) * (1-u)^-{}", self.num, self.denom_pow)
        }
    }
}
