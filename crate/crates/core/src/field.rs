//! Exact arithmetic in the real field Q(√2, √3).
//!
//! Every element is stored as `a + b√2 + c√3 + d√6` with arbitrary-precision
//! rational coefficients. The four radicals are linearly independent over Q,
//! so two elements are equal exactly when their coefficients are equal, and
//! the derived `PartialEq` is value equality.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("sqrt({0}) is not representable in Q(√2, √3)")]
    UnrepresentableRadical(BigRational),
    #[error("sqrt of negative rational {0}")]
    NegativeRadicand(BigRational),
    #[error("malformed exact scalar `{0}`")]
    Malformed(String),
}

/// The radicands of the basis `1, √2, √3, √6`.
pub const RADICANDS: [u32; 4] = [1, 2, 3, 6];

/// An element of Q(√2, √3).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    coeffs: [BigRational; 4],
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

impl ExactScalar {
    pub fn zero() -> Self {
        Self::from_parts([
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
            BigRational::zero(),
        ])
    }

    pub fn one() -> Self {
        Self::from_rational(BigRational::one())
    }

    /// Builds `a + b√2 + c√3 + d√6`.
    pub fn from_parts(coeffs: [BigRational; 4]) -> Self {
        ExactScalar { coeffs }
    }

    pub fn from_rational(q: BigRational) -> Self {
        let mut parts = Self::zero().coeffs;
        parts[0] = q;
        ExactScalar { coeffs: parts }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(rat(n, d))
    }

    /// `q · √r` for `r` one of 1, 2, 3, 6.
    pub fn monomial(q: BigRational, radicand: u32) -> Self {
        let slot = RADICANDS
            .iter()
            .position(|&r| r == radicand)
            .expect("radicand must be one of 1, 2, 3, 6");
        let mut parts = Self::zero().coeffs;
        parts[slot] = q;
        ExactScalar { coeffs: parts }
    }

    /// Coefficients of `1, √2, √3, √6`, in that order.
    pub fn parts(&self) -> &[BigRational; 4] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs[1..].iter().all(Zero::is_zero)
    }

    /// The rational value, if the element has no radical part.
    pub fn rational_part(&self) -> Option<&BigRational> {
        self.is_rational().then(|| &self.coeffs[0])
    }

    pub fn square(&self) -> Self {
        self * self
    }

    fn map(&self, f: impl Fn(&BigRational) -> BigRational) -> Self {
        let [a, b, c, d] = &self.coeffs;
        ExactScalar {
            coeffs: [f(a), f(b), f(c), f(d)],
        }
    }

    fn conjugate(&self, flip_sqrt2: bool, flip_sqrt3: bool) -> Self {
        let [a, b, c, d] = &self.coeffs;
        let s2 = |x: &BigRational| if flip_sqrt2 { -x } else { x.clone() };
        let s3 = |x: &BigRational| if flip_sqrt3 { -x } else { x.clone() };
        let s6 = |x: &BigRational| {
            if flip_sqrt2 != flip_sqrt3 {
                -x
            } else {
                x.clone()
            }
        };
        ExactScalar {
            coeffs: [a.clone(), s2(b), s3(c), s6(d)],
        }
    }

    /// Multiplicative inverse via the product of the three non-trivial Galois
    /// conjugates, divided by the (rational) field norm.
    pub fn inv(&self) -> Result<Self, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let cofactor = &(&self.conjugate(true, false) * &self.conjugate(false, true))
            * &self.conjugate(true, true);
        let norm = self * &cofactor;
        debug_assert!(norm.is_rational());
        let norm = norm.coeffs[0].clone();
        Ok(cofactor.map(|x| x / &norm))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, FieldError> {
        Ok(self * &rhs.inv()?)
    }

    /// Exact sign of the real value: -1, 0 or 1.
    pub fn signum(&self) -> i32 {
        let [a, b, c, d] = &self.coeffs;
        // Write the element as u + v√3 with u = a + b√2 and v = c + d√2.
        let su = sign_sqrt2(a, b);
        let sv = sign_sqrt2(c, d);
        if sv == 0 || su == sv {
            return if su == 0 { sv } else { su };
        }
        if su == 0 {
            return sv;
        }
        // Opposite signs: the larger of u² and 3v² wins.
        let u = ExactScalar::from_parts([a.clone(), b.clone(), BigRational::zero(), BigRational::zero()]);
        let v = ExactScalar::from_parts([c.clone(), d.clone(), BigRational::zero(), BigRational::zero()]);
        let w = &u.square() - &(&v.square() * &ExactScalar::from_integer(3));
        let [p, q, _, _] = &w.coeffs;
        if sign_sqrt2(p, q) > 0 {
            su
        } else {
            sv
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Floating-point approximation. Only for sampling and display.
    pub fn to_f64(&self) -> f64 {
        let radicals = [1.0, std::f64::consts::SQRT_2, 3f64.sqrt(), 6f64.sqrt()];
        self.coeffs
            .iter()
            .zip(radicals)
            .map(|(q, r)| q.to_f64().unwrap_or(f64::NAN) * r)
            .sum()
    }

    /// Decimal rendering rounded half away from zero to `digits` places.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let guard = digits as u32 + 20 + self.magnitude_digits();
        let scale = BigInt::from(10u32).pow(guard);
        let mut approx = self.coeffs[0].clone();
        for (q, &r) in self.coeffs[1..].iter().zip(&RADICANDS[1..]) {
            if q.is_zero() {
                continue;
            }
            let root = (BigInt::from(r) * &scale * &scale).sqrt();
            approx += q * BigRational::new(root, scale.clone());
        }
        let negative = approx.is_negative();
        let out_scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = approx.abs() * BigRational::from_integer(out_scale.clone());
        let rounded = (scaled + rat(1, 2)).floor().to_integer();
        let (int_part, frac_part) = rounded.div_rem(&out_scale);
        let negative = negative && !rounded.is_zero();
        let mut s = String::new();
        if negative {
            s.push('-');
        }
        s.push_str(&int_part.to_string());
        if digits > 0 {
            let frac = frac_part.to_string();
            s.push('.');
            s.push_str(&"0".repeat(digits - frac.len()));
            s.push_str(&frac);
        }
        s
    }

    fn magnitude_digits(&self) -> u32 {
        self.coeffs
            .iter()
            .map(|q| q.numer().abs().to_string().len() as u32)
            .max()
            .unwrap_or(1)
    }

    /// Canonical wire form `a + b*sqrt(2) + c*sqrt(3) + d*sqrt(6)` with zero
    /// terms omitted, e.g. `1/12` or `1/3 - 1/6*sqrt(6)`.
    pub fn to_canonical_string(&self) -> String {
        self.render(|q, r| {
            if r == 1 {
                q.to_string()
            } else if q.is_one() {
                format!("sqrt({r})")
            } else {
                format!("{q}*sqrt({r})")
            }
        })
    }

    fn render(&self, term: impl Fn(&BigRational, u32) -> String) -> String {
        let mut out = String::new();
        for (q, &r) in self.coeffs.iter().zip(&RADICANDS) {
            if q.is_zero() {
                continue;
            }
            let body = term(&q.abs(), r);
            match (out.is_empty(), q.is_negative()) {
                (true, false) => out.push_str(&body),
                (true, true) => {
                    out.push('-');
                    out.push_str(&body);
                }
                (false, false) => {
                    out.push_str(" + ");
                    out.push_str(&body);
                }
                (false, true) => {
                    out.push_str(" - ");
                    out.push_str(&body);
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

fn sign_of(q: &BigRational) -> i32 {
    match q.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sign of `p + q√2`.
fn sign_sqrt2(p: &BigRational, q: &BigRational) -> i32 {
    let (sp, sq) = (sign_of(p), sign_of(q));
    if sq == 0 || sp == sq {
        return if sp == 0 { sq } else { sp };
    }
    if sp == 0 {
        return sq;
    }
    let lhs = p * p;
    let rhs = q * q * rat(2, 1);
    if lhs > rhs {
        sp
    } else {
        sq
    }
}

/// Exact square root of a non-negative rational, when its squarefree part
/// lies in {1, 2, 3, 6}.
pub fn sqrt_rational(q: &BigRational) -> Result<ExactScalar, FieldError> {
    if q.is_negative() {
        return Err(FieldError::NegativeRadicand(q.clone()));
    }
    if q.is_zero() {
        return Ok(ExactScalar::zero());
    }
    // sqrt(n/d) = sqrt(n·d) / d
    let den = q.denom().clone();
    let mut rest = q.numer() * &den;
    let mut square_root = BigInt::one();
    let mut radicand = 1u32;
    for p in [2u32, 3] {
        let p_big = BigInt::from(p);
        let mut exponent = 0u32;
        while rest.is_multiple_of(&p_big) {
            rest /= &p_big;
            exponent += 1;
        }
        square_root *= p_big.pow(exponent / 2);
        if exponent % 2 == 1 {
            radicand *= p;
        }
    }
    let root = rest.sqrt();
    if &root * &root != rest {
        return Err(FieldError::UnrepresentableRadical(q.clone()));
    }
    square_root *= root;
    Ok(ExactScalar::monomial(
        BigRational::new(square_root, den),
        radicand,
    ))
}

impl Default for ExactScalar {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        Self::from_integer(n)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(q: BigRational) -> Self {
        Self::from_rational(q)
    }
}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl<'a> Add<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> AddAssign<&'a ExactScalar> for ExactScalar {
    fn add_assign(&mut self, rhs: &ExactScalar) {
        for (x, y) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *x += y;
        }
    }
}

impl<'a> Sub<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        let mut out = self.clone();
        for (x, y) in out.coeffs.iter_mut().zip(&rhs.coeffs) {
            *x -= y;
        }
        out
    }
}

impl<'a> Neg for &'a ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        self.map(|x| -x)
    }
}

impl Neg for ExactScalar {
    type Output = ExactScalar;
    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl<'a> Mul<&'a ExactScalar> for &'a ExactScalar {
    type Output = ExactScalar;
    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        let [a0, a1, a2, a3] = &self.coeffs;
        let [b0, b1, b2, b3] = &rhs.coeffs;
        let two = rat(2, 1);
        let three = rat(3, 1);
        let six = rat(6, 1);
        // √2·√3 = √6, √2·√6 = 2√3, √3·√6 = 3√2, √6·√6 = 6
        let c0 = a0 * b0 + &two * a1 * b1 + &three * a2 * b2 + &six * a3 * b3;
        let c1 = a0 * b1 + a1 * b0 + &three * (a2 * b3 + a3 * b2);
        let c2 = a0 * b2 + a2 * b0 + &two * (a1 * b3 + a3 * b1);
        let c3 = a0 * b3 + a3 * b0 + a1 * b2 + a2 * b1;
        ExactScalar {
            coeffs: [c0, c1, c2, c3],
        }
    }
}

macro_rules! forward_owned {
    ($($imp:ident $method:ident),*) => {$(
        impl $imp<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $imp<&'a ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned!(Add add, Sub sub, Mul mul);

impl std::iter::Sum for ExactScalar {
    fn sum<I: Iterator<Item = ExactScalar>>(iter: I) -> Self {
        iter.fold(ExactScalar::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}

/// Human form, e.g. `1/3 + (1/6)√6`.
impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.render(|q, r| {
            if r == 1 {
                q.to_string()
            } else if q.is_one() {
                format!("√{r}")
            } else if q.is_integer() {
                format!("{q}√{r}")
            } else {
                format!("({q})√{r}")
            }
        });
        f.write_str(&s)
    }
}

impl fmt::Debug for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ExactScalar({})", self.to_canonical_string())
    }
}

/// Parses the canonical wire form produced by
/// [`ExactScalar::to_canonical_string`].
impl FromStr for ExactScalar {
    type Err = FieldError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || FieldError::Malformed(s.to_string());
        let text = s.trim();
        if text.is_empty() {
            return Err(malformed());
        }
        let mut out = ExactScalar::zero();
        let mut rest = text;
        let mut negative = false;
        if let Some(r) = rest.strip_prefix('-') {
            negative = true;
            rest = r;
        }
        loop {
            let (term, next) = match rest.find([' ']) {
                Some(pos) => (&rest[..pos], Some(&rest[pos..])),
                None => (rest, None),
            };
            let (coef, radicand) = match term.split_once('*') {
                Some((c, r)) => (c, parse_sqrt(r).ok_or_else(malformed)?),
                None => match parse_sqrt(term) {
                    Some(r) => ("1", r),
                    None => (term, 1),
                },
            };
            let mut q: BigRational = coef.parse().map_err(|_| malformed())?;
            if coef.contains(['-', '+']) {
                return Err(malformed());
            }
            if negative {
                q = -q;
            }
            out += &ExactScalar::monomial(q, radicand);
            match next {
                None => break,
                Some(n) => {
                    if let Some(r) = n.strip_prefix(" + ") {
                        negative = false;
                        rest = r;
                    } else if let Some(r) = n.strip_prefix(" - ") {
                        negative = true;
                        rest = r;
                    } else {
                        return Err(malformed());
                    }
                }
            }
        }
        Ok(out)
    }
}

fn parse_sqrt(s: &str) -> Option<u32> {
    let inner = s.strip_prefix("sqrt(")?.strip_suffix(')')?;
    let r: u32 = inner.parse().ok()?;
    (r != 1 && RADICANDS.contains(&r)).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        rat(n, d)
    }

    fn sqrt(n: i64, d: i64) -> ExactScalar {
        sqrt_rational(&q(n, d)).unwrap()
    }

    #[test]
    fn third_of_root_three_squared() {
        let x = ExactScalar::monomial(q(1, 3), 3);
        assert_eq!(x.square(), ExactScalar::from_ratio(1, 3));
    }

    #[test]
    fn invert_root_two() {
        let root2 = ExactScalar::monomial(q(1, 1), 2);
        assert_eq!(root2.inv().unwrap(), ExactScalar::monomial(q(1, 2), 2));
    }

    #[test]
    fn one_over_root_twelve() {
        let x = ExactScalar::one().checked_div(&sqrt(12, 1)).unwrap();
        assert_eq!(x, ExactScalar::monomial(q(1, 6), 3));
        assert_eq!(x.square(), ExactScalar::from_ratio(1, 12));
    }

    #[test]
    fn inverting_zero_fails() {
        assert_eq!(ExactScalar::zero().inv(), Err(FieldError::DivisionByZero));
    }

    #[test]
    fn sqrt_literals() {
        assert_eq!(sqrt(1, 3), ExactScalar::monomial(q(1, 3), 3));
        assert_eq!(sqrt(2, 3), ExactScalar::monomial(q(1, 3), 6));
        assert_eq!(sqrt(3, 4), ExactScalar::monomial(q(1, 2), 3));
        assert_eq!(sqrt(8, 1), ExactScalar::monomial(q(2, 1), 2));
        assert_eq!(sqrt(0, 1), ExactScalar::zero());
        assert_eq!(sqrt(49, 36), ExactScalar::from_ratio(7, 6));
        assert!(matches!(
            sqrt_rational(&q(1, 5)),
            Err(FieldError::UnrepresentableRadical(_))
        ));
        assert!(matches!(
            sqrt_rational(&q(-1, 4)),
            Err(FieldError::NegativeRadicand(_))
        ));
    }

    #[test]
    fn general_inverse() {
        let x = ExactScalar::from_parts([q(1, 3), q(-2, 5), q(7, 1), q(1, 6)]);
        assert!((&x * &x.inv().unwrap()).is_one());
    }

    #[test]
    fn signs_of_near_cancellations() {
        // √2 + √3 - √6 - 1/2 ≈ 0.2966
        let x = ExactScalar::from_parts([q(-1, 2), q(1, 1), q(1, 1), q(-1, 1)]);
        assert_eq!(x.signum(), 1);
        // 5 - 2√6 ≈ 0.101
        let y = ExactScalar::from_parts([q(5, 1), q(0, 1), q(0, 1), q(-2, 1)]);
        assert_eq!(y.signum(), 1);
        // √2 + √3 - 3.15 < 0
        let z = ExactScalar::from_parts([q(-315, 100), q(1, 1), q(1, 1), q(0, 1)]);
        assert_eq!(z.signum(), -1);
        assert_eq!(ExactScalar::zero().signum(), 0);
        assert!(ExactScalar::from_ratio(1, 12) < ExactScalar::from_ratio(1, 6));
    }

    #[test]
    fn rendering() {
        let x = ExactScalar::from_parts([q(1, 3), q(0, 1), q(0, 1), q(1, 6)]);
        assert_eq!(x.to_string(), "1/3 + (1/6)√6");
        assert_eq!(x.to_canonical_string(), "1/3 + 1/6*sqrt(6)");
        let y = ExactScalar::from_parts([q(0, 1), q(-1, 1), q(2, 1), q(0, 1)]);
        assert_eq!(y.to_string(), "-√2 + 2√3");
        assert_eq!(y.to_canonical_string(), "-sqrt(2) + 2*sqrt(3)");
        assert_eq!(ExactScalar::zero().to_canonical_string(), "0");
        assert_eq!(ExactScalar::from_ratio(1, 12).to_canonical_string(), "1/12");
    }

    #[test]
    fn canonical_strings_parse_back() {
        for s in [
            "0",
            "1/12",
            "-1/6*sqrt(6)",
            "1/3 - 1/6*sqrt(6)",
            "-sqrt(2) + 2*sqrt(3)",
            "3/4 + sqrt(2) - 5/7*sqrt(3) + 11*sqrt(6)",
        ] {
            let x: ExactScalar = s.parse().unwrap();
            assert_eq!(x.to_canonical_string(), s);
        }
        for bad in ["", "sqrt(5)", "1 +", "1 + + 2", "x", "1/0", "2*sqrt(1)"] {
            assert!(bad.parse::<ExactScalar>().is_err(), "{bad}");
        }
    }

    #[test]
    fn decimals() {
        assert_eq!(ExactScalar::from_ratio(1, 12).to_decimal_string(12), "0.083333333333");
        assert_eq!(ExactScalar::from_ratio(3, 4).to_decimal_string(12), "0.750000000000");
        assert_eq!(sqrt(2, 3).to_decimal_string(12), "0.816496580928");
        assert_eq!((-sqrt(1, 6)).to_decimal_string(12), "-0.408248290464");
        assert_eq!(ExactScalar::zero().to_decimal_string(3), "0.000");
        assert_eq!(ExactScalar::from_integer(2).to_decimal_string(0), "2");
    }
}
