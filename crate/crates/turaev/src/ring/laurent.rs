//! Sparse Laurent polynomials over `Z` in one variable `u`.
//!
//! Coefficients are arbitrary-precision integers keyed by exponent; zero
//! coefficients are never stored, so structural equality is semantic
//! equality.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ParseError;

/// An element of `Z[u, u^-1]`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::monomial(BigInt::one(), 0)
    }

    /// The variable `u` itself.
    pub fn u() -> Self {
        LaurentPoly::monomial(BigInt::one(), 1)
    }

    /// `1 - u`, the distinguished prime this toolkit keeps inverting.
    pub fn one_minus_u() -> Self {
        LaurentPoly::from_terms([(0, BigInt::one()), (1, -BigInt::one())])
    }

    pub fn monomial(coeff: impl Into<BigInt>, exp: i64) -> Self {
        let coeff = coeff.into();
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(exp, coeff);
        }
        LaurentPoly { terms }
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut p = LaurentPoly::zero();
        for (exp, coeff) in terms {
            p.add_term(exp, &coeff.into());
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.terms.get(&exp).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Iterate terms in ascending exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    /// `Some((coeff, exp))` when the polynomial has exactly one term.
    pub fn as_monomial(&self) -> Option<(&BigInt, i64)> {
        if self.terms.len() == 1 {
            let (exp, coeff) = self.terms.iter().next().unwrap();
            Some((coeff, *exp))
        } else {
            None
        }
    }

    fn add_term(&mut self, exp: i64, coeff: &BigInt) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            self.terms.remove(&exp);
        }
    }

    /// Multiply by `u^k`.
    pub fn shifted(&self, k: i64) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    /// Sum of coefficients, i.e. the evaluation at `u = 1`.
    pub fn eval_at_one(&self) -> BigInt {
        self.terms.values().sum()
    }

    /// Evaluation at `u = -1` (the unit-group oracle: it kills `1 + u` while
    /// sending `1 - u` to the invertible rational `2`).
    pub fn eval_at_minus_one(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for (exp, coeff) in &self.terms {
            if exp.rem_euclid(2) == 0 {
                acc += coeff;
            } else {
                acc -= coeff;
            }
        }
        acc
    }

    /// Approximate evaluation at `u = e^{i theta}` (diagnostics only).
    pub fn eval_unit_circle(&self, theta: f64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (exp, coeff) in &self.terms {
            let c = coeff.to_f64().unwrap_or(f64::NAN);
            acc += c * Complex64::from_polar(1.0, *exp as f64 * theta);
        }
        acc
    }

    /// Whether `1 - u` divides this polynomial, i.e. the coefficients sum
    /// to zero.
    pub fn divisible_by_one_minus_u(&self) -> bool {
        self.eval_at_one().is_zero()
    }

    /// Exact quotient by `1 - u`; `None` when not divisible.
    pub fn div_exact_one_minus_u(&self) -> Option<LaurentPoly> {
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        if !self.divisible_by_one_minus_u() {
            return None;
        }
        // Shift to an ordinary polynomial a_0 + ... + a_d x^d. Dividing by
        // (1 - x) leaves the prefix sums q_i = a_0 + ... + a_i, degree d-1.
        let low = self.min_exp().unwrap();
        let high = self.max_exp().unwrap();
        let mut quotient = LaurentPoly::zero();
        let mut prefix = BigInt::zero();
        for e in low..high {
            prefix += self.coeff(e);
            quotient.add_term(e, &prefix);
        }
        Some(quotient)
    }

    /// Exact quotient `self / divisor`; `None` when the division has a
    /// remainder. Runs the long division over the rationals and demands an
    /// integral, remainder-free result.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        use num_rational::BigRational;
        if divisor.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(LaurentPoly::zero());
        }
        let self_low = self.min_exp().unwrap();
        let div_low = divisor.min_exp().unwrap();
        // Work with ordinary polynomials; remember the net shift.
        let num_deg = (self.max_exp().unwrap() - self_low) as usize;
        let div_deg = (divisor.max_exp().unwrap() - div_low) as usize;
        if num_deg < div_deg {
            return None;
        }
        let mut num: Vec<BigRational> = (0..=num_deg)
            .map(|i| BigRational::from(self.coeff(self_low + i as i64)))
            .collect();
        let div: Vec<BigRational> = (0..=div_deg)
            .map(|i| BigRational::from(divisor.coeff(div_low + i as i64)))
            .collect();
        let lead = div[div_deg].clone();
        let mut quot = vec![BigRational::zero(); num_deg - div_deg + 1];
        for i in (0..quot.len()).rev() {
            let q = &num[i + div_deg] / &lead;
            if !q.is_zero() {
                for (j, d) in div.iter().enumerate() {
                    let t = &q * d;
                    num[i + j] -= t;
                }
            }
            quot[i] = q;
        }
        if num.iter().any(|c| !c.is_zero()) {
            return None;
        }
        let mut result = LaurentPoly::zero();
        for (i, q) in quot.iter().enumerate() {
            if !q.denom().is_one() {
                return None;
            }
            result.add_term(self_low - div_low + i as i64, q.numer());
        }
        Some(result)
    }

    /// Parse the textual form produced by `Display`, e.g. `u^-2 - 3*u + 1`.
    pub fn parse(input: &str) -> Result<LaurentPoly, ParseError> {
        let mut p = Parser::new(input);
        let poly = p.poly()?;
        p.expect_end()?;
        Ok(poly)
    }
}

impl std::ops::Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl std::ops::Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.add_term(*exp, coeff);
        }
        out
    }
}

impl std::ops::Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (exp, coeff) in &rhs.terms {
            out.add_term(*exp, &-coeff);
        }
        out
    }
}

impl std::ops::Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl std::ops::Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exp, coeff) in &self.terms {
            let negative = coeff.is_negative();
            let abs = coeff.magnitude();
            if first {
                if negative {
                    write!(f, "-")?;
                }
                first = false;
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let coeff_is_one = abs.is_one();
            match (*exp, coeff_is_one) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => write!(f, "u")?,
                (1, false) => write!(f, "{abs}*u")?,
                (e, true) => write!(f, "u^{e}")?,
                (e, false) => write!(f, "{abs}*u^{e}")?,
            }
        }
        Ok(())
    }
}

/// Recursive-descent parser shared by the Laurent and ring-element grammars.
pub(super) struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    pub(super) fn new(input: &'a str) -> Self {
        Parser { input: input.as_bytes(), pos: 0 }
    }

    pub(super) fn error(&self, msg: impl Into<String>) -> ParseError {
        ParseError { pos: self.pos, msg: msg.into() }
    }

    pub(super) fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    pub(super) fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.input.get(self.pos).copied()
    }

    pub(super) fn eat(&mut self, byte: u8) -> bool {
        if self.peek() == Some(byte) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    pub(super) fn expect(&mut self, byte: u8) -> Result<(), ParseError> {
        if self.eat(byte) {
            Ok(())
        } else {
            Err(self.error(format!("expected '{}'", byte as char)))
        }
    }

    pub(super) fn expect_end(&mut self) -> Result<(), ParseError> {
        if self.peek().is_some() {
            Err(self.error("trailing input"))
        } else {
            Ok(())
        }
    }

    pub(super) fn expect_literal(&mut self, lit: &str) -> Result<(), ParseError> {
        self.skip_ws();
        if self.input[self.pos..].starts_with(lit.as_bytes()) {
            self.pos += lit.len();
            Ok(())
        } else {
            Err(self.error(format!("expected '{lit}'")))
        }
    }

    pub(super) fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') || self.peek() == Some(b'+') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected integer"));
        }
        let text = std::str::from_utf8(&self.input[start..self.pos]).unwrap();
        text.parse::<BigInt>().map_err(|e| self.error(e.to_string()))
    }

    pub(super) fn small_int(&mut self) -> Result<i64, ParseError> {
        let n = self.integer()?;
        n.to_i64().ok_or_else(|| self.error("exponent out of range"))
    }

    /// One `coeff [* u[^k]]` term; the sign is handled by the caller.
    fn term(&mut self) -> Result<(BigInt, i64), ParseError> {
        self.skip_ws();
        let coeff = if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            let c = self.integer()?;
            // An explicit coefficient may be followed by '*u'.
            if self.eat(b'*') {
                self.expect(b'u')?;
                let exp = if self.eat(b'^') { self.small_int()? } else { 1 };
                return Ok((c, exp));
            }
            return Ok((c, 0));
        } else {
            BigInt::one()
        };
        self.expect(b'u')?;
        let exp = if self.eat(b'^') { self.small_int()? } else { 1 };
        Ok((coeff, exp))
    }

    pub(super) fn poly(&mut self) -> Result<LaurentPoly, ParseError> {
        let mut out = LaurentPoly::zero();
        let mut negate = false;
        if self.eat(b'-') {
            negate = true;
        }
        loop {
            let (coeff, exp) = self.term()?;
            let coeff = if negate { -coeff } else { coeff };
            out.add_term(exp, &coeff);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negate = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negate = true;
                }
                _ => break,
            }
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> LaurentPoly {
        LaurentPoly::parse(s).unwrap()
    }

    #[test]
    fn arithmetic_basics() {
        let a = p("1 + u");
        let b = p("1 - u");
        assert_eq!(&a * &b, p("1 - u^2"));
        assert_eq!(&a + &b, p("2"));
        assert_eq!(&a - &a, LaurentPoly::zero());
        assert_eq!(-&b, p("u - 1"));
    }

    #[test]
    fn negative_exponents() {
        let a = p("u^-2 + u");
        assert_eq!(a.min_exp(), Some(-2));
        assert_eq!(a.max_exp(), Some(1));
        assert_eq!(&a * &LaurentPoly::u(), p("u^-1 + u^2"));
        assert_eq!(a.shifted(2), p("1 + u^3"));
    }

    #[test]
    fn zero_coefficients_are_dropped() {
        let a = p("u + 1 - u");
        assert_eq!(a, LaurentPoly::one());
        assert!(p("u - u").is_zero());
        assert_eq!(format!("{}", LaurentPoly::zero()), "0");
    }

    #[test]
    fn division_by_one_minus_u() {
        // 1 - u^3 = (1 - u)(1 + u + u^2)
        let q = p("1 - u^3").div_exact_one_minus_u().unwrap();
        assert_eq!(q, p("1 + u + u^2"));
        // and a Laurent case: u^-1 - u^2 = (1 - u)(u^-1 + 1 + u)
        let q = p("u^-1 - u^2").div_exact_one_minus_u().unwrap();
        assert_eq!(q, p("u^-1 + 1 + u"));
        assert!(p("1 + u").div_exact_one_minus_u().is_none());
    }

    #[test]
    fn general_exact_division() {
        let a = p("2 - 2*u^2");
        let b = p("1 + u");
        assert_eq!(a.div_exact(&b).unwrap(), p("2 - 2*u"));
        assert!(p("1 + u^2").div_exact(&p("2")).is_none()); // 1/2 not integral
        assert!(p("1 + u").div_exact(&p("1 - u")).is_none());
        // divisors with negative exponents
        let c = p("u^-3 - u^-1");
        assert_eq!(p("1 - u^2").div_exact(&c).unwrap(), p("u^3"));
    }

    #[test]
    fn evaluations() {
        let a = p("1 + u + u^2");
        assert_eq!(a.eval_at_one(), BigInt::from(3));
        assert_eq!(a.eval_at_minus_one(), BigInt::from(1));
        assert_eq!(p("1 + u").eval_at_minus_one(), BigInt::zero());
        let v = p("1 - u").eval_unit_circle(std::f64::consts::PI);
        assert!((v.re - 2.0).abs() < 1e-12 && v.im.abs() < 1e-12);
    }

    #[test]
    fn display_round_trip() {
        for s in ["0", "1", "-1", "u", "-u", "u^-1", "2*u^3 - u + 5", "-3*u^-2 + u^4"] {
            let poly = p(s);
            assert_eq!(LaurentPoly::parse(&poly.to_string()).unwrap(), poly, "case {s}");
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = LaurentPoly::parse("1 + ").unwrap_err();
        assert!(err.pos >= 3);
        assert!(LaurentPoly::parse("u^").is_err());
        assert!(LaurentPoly::parse("1 2").is_err());
    }
}
