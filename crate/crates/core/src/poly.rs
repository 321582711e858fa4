//! Exact scalars: polynomials in `q` over the integers, fractions of such
//! polynomials, and the localisation at polynomials with constant term 1.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::PolyError;

/// A polynomial in `q` with arbitrary-precision integer coefficients.
///
/// Coefficients are stored lowest degree first with no trailing zeros, so the
/// zero polynomial is the empty sequence.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    coeffs: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(1)
    }

    /// The indeterminate `q`.
    pub fn q() -> Self {
        Self::monomial(1, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::from_big(vec![c.into()])
    }

    pub fn monomial(c: impl Into<BigInt>, degree: usize) -> Self {
        let mut coeffs = vec![BigInt::zero(); degree + 1];
        coeffs[degree] = c.into();
        Self::from_big(coeffs)
    }

    pub fn from_coeffs(coeffs: &[i64]) -> Self {
        Self::from_big(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn from_big(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        IntPoly { coeffs }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading_coeff(&self) -> BigInt {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Lowest degree with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval_at_integer(&self, x: i64) -> BigInt {
        let x = BigInt::from(x);
        self.coeffs
            .iter()
            .rev()
            .fold(BigInt::zero(), |acc, c| acc * &x + c)
    }

    /// Image under `q ↦ 0`.
    pub fn specialize_q0(&self) -> BigInt {
        self.coeff(0)
    }

    /// Membership in the multiplicative set of polynomials with constant term ±1.
    pub fn in_p(&self) -> bool {
        self.coeffs.first().is_some_and(|c| c.abs().is_one())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Multiplication by `q^k`.
    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![BigInt::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        IntPoly { coeffs }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Gcd of the coefficients, nonnegative.
    pub fn content(&self) -> BigInt {
        self.coeffs
            .iter()
            .fold(BigInt::zero(), |g, c| num_integer::Integer::gcd(&g, c))
    }

    fn div_scalar_exact(&self, c: &BigInt) -> Self {
        IntPoly {
            coeffs: self.coeffs.iter().map(|a| a / c).collect(),
        }
    }

    pub fn primitive_part(&self) -> Self {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        self.div_scalar_exact(&c)
    }

    /// Division with remainder over `Z`, failing on the first step whose
    /// quotient coefficient is not an integer.
    fn long_division(&self, divisor: &IntPoly) -> (IntPoly, IntPoly, bool) {
        let Some(db) = divisor.degree() else {
            return (IntPoly::zero(), self.clone(), false);
        };
        let lead = divisor.leading_coeff();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![BigInt::zero(); rem.len().saturating_sub(db).max(1)];
        let mut exact = true;
        while rem.len() > db && !rem.is_empty() {
            let top = rem.len() - 1;
            let c = rem[top].clone();
            if c.is_zero() {
                rem.pop();
                continue;
            }
            let (qc, r) = num_integer::Integer::div_rem(&c, &lead);
            if !r.is_zero() {
                exact = false;
                break;
            }
            let shift = top - db;
            for (i, b) in divisor.coeffs.iter().enumerate() {
                rem[shift + i] -= &qc * b;
            }
            quot[shift] = qc;
            rem.pop();
        }
        (IntPoly::from_big(quot), IntPoly::from_big(rem), exact)
    }

    /// Exact quotient `self / divisor` in `Z[q]`.
    pub fn exact_div(&self, divisor: &IntPoly) -> Result<IntPoly, PolyError> {
        if divisor.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let (quot, rem, exact) = self.long_division(divisor);
        if exact && rem.is_zero() {
            Ok(quot)
        } else {
            Err(PolyError::NotDivisible {
                dividend: self.clone(),
                divisor: divisor.clone(),
                remainder: rem,
            })
        }
    }

    /// Pseudo-remainder of `self` by `divisor`: `lc^k * self mod divisor`.
    fn pseudo_rem(&self, divisor: &IntPoly) -> IntPoly {
        let db = divisor.degree().expect("nonzero divisor");
        let lead = divisor.leading_coeff();
        let mut rem = self.clone();
        while let Some(dr) = rem.degree() {
            if dr < db {
                break;
            }
            let c = rem.leading_coeff();
            rem = &rem.scale(&lead) - &divisor.shift(dr - db).scale(&c);
        }
        rem
    }

    /// Greatest common divisor in `Z[q]`, normalized to a positive leading
    /// coefficient. Computed by the primitive polynomial remainder sequence.
    pub fn gcd(&self, other: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return other.normalize_sign_leading();
        }
        if other.is_zero() {
            return self.normalize_sign_leading();
        }
        let content = num_integer::Integer::gcd(&self.content(), &other.content());
        let (mut a, mut b) = if self.degree() >= other.degree() {
            (self.primitive_part(), other.primitive_part())
        } else {
            (other.primitive_part(), self.primitive_part())
        };
        while !b.is_zero() {
            let r = a.pseudo_rem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.primitive_part()
            .scale(&content)
            .normalize_sign_leading()
    }

    fn normalize_sign_leading(&self) -> IntPoly {
        if self.leading_coeff().is_negative() {
            -self
        } else {
            self.clone()
        }
    }

    /// Render with an arbitrary variable name.
    pub fn display_var(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let body = match k {
                0 => abs.to_string(),
                _ => {
                    let base = if k == 1 {
                        var.to_string()
                    } else {
                        format!("{var}^{k}")
                    };
                    if abs.is_one() {
                        base
                    } else {
                        format!("{abs}{base}")
                    }
                }
            };
            out.push_str(&body);
        }
        out
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_var("q"))
    }
}

impl fmt::Debug for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntPoly({self})")
    }
}

impl PartialOrd for IntPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for IntPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl From<i64> for IntPoly {
    fn from(c: i64) -> Self {
        IntPoly::constant(c)
    }
}

impl<'a> Add<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn add(self, rhs: &IntPoly) -> IntPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n)
            .map(|i| match (self.coeffs.get(i), rhs.coeffs.get(i)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            })
            .collect();
        IntPoly::from_big(coeffs)
    }
}

impl<'a> Sub<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn sub(self, rhs: &IntPoly) -> IntPoly {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a IntPoly> for &'a IntPoly {
    type Output = IntPoly;
    fn mul(self, rhs: &IntPoly) -> IntPoly {
        if self.is_zero() || rhs.is_zero() {
            return IntPoly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        IntPoly::from_big(coeffs)
    }
}

impl Neg for &IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        IntPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for IntPoly {
    type Output = IntPoly;
    fn neg(self) -> IntPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a IntPoly> for IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: &IntPoly) -> IntPoly {
                (&self).$m(rhs)
            }
        }
        impl<'a> $tr<IntPoly> for &'a IntPoly {
            type Output = IntPoly;
            fn $m(self, rhs: IntPoly) -> IntPoly {
                self.$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&IntPoly> for IntPoly {
    fn add_assign(&mut self, rhs: &IntPoly) {
        *self = &*self + rhs;
    }
}

impl SubAssign<&IntPoly> for IntPoly {
    fn sub_assign(&mut self, rhs: &IntPoly) {
        *self = &*self - rhs;
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CoeffRepr {
    Small(i64),
    Big(String),
}

impl Serialize for IntPoly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let reprs: Vec<CoeffRepr> = self
            .coeffs
            .iter()
            .map(|c| match c.to_i64() {
                Some(v) => CoeffRepr::Small(v),
                None => CoeffRepr::Big(c.to_string()),
            })
            .collect();
        reprs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for IntPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let reprs = Vec::<CoeffRepr>::deserialize(d)?;
        let coeffs = reprs
            .into_iter()
            .map(|r| match r {
                CoeffRepr::Small(v) => Ok(BigInt::from(v)),
                CoeffRepr::Big(s) => s.parse::<BigInt>().map_err(D::Error::custom),
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntPoly::from_big(coeffs))
    }
}

/// A fraction of polynomials over `Z[q]` kept in lowest terms.
///
/// The denominator is normalized to a positive constant term when that term
/// is nonzero, and to a positive leading coefficient otherwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Frac {
    num: IntPoly,
    den: IntPoly,
}

impl Frac {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: IntPoly, den: IntPoly) -> Self {
        if num.is_zero() {
            return Frac {
                num,
                den: IntPoly::one(),
            };
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let flip = match den.coeffs.first() {
            Some(c) if !c.is_zero() => c.is_negative(),
            _ => den.leading_coeff().is_negative(),
        };
        if flip {
            num = -num;
            den = -den;
        }
        Frac { num, den }
    }

    pub fn from_poly(p: IntPoly) -> Self {
        Frac {
            num: p,
            den: IntPoly::one(),
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(IntPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(IntPoly::one())
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The polynomial this fraction equals, if any.
    pub fn as_poly(&self) -> Option<IntPoly> {
        self.num.exact_div(&self.den).ok()
    }

    pub fn inv(&self) -> Result<Frac, PolyError> {
        Frac::new(self.den.clone(), self.num.clone())
    }

    pub fn add(&self, o: &Frac) -> Frac {
        Self::normalized(&self.num * &o.den + &o.num * &self.den, &self.den * &o.den)
    }

    pub fn sub(&self, o: &Frac) -> Frac {
        Self::normalized(&self.num * &o.den - &o.num * &self.den, &self.den * &o.den)
    }

    pub fn mul(&self, o: &Frac) -> Frac {
        Self::normalized(&self.num * &o.num, &self.den * &o.den)
    }

    pub fn div(&self, o: &Frac) -> Result<Frac, PolyError> {
        Ok(self.mul(&o.inv()?))
    }

    pub fn neg(&self) -> Frac {
        Frac {
            num: -&self.num,
            den: self.den.clone(),
        }
    }

    pub fn eval_at_integer(&self, x: i64) -> Option<Ratio> {
        let d = self.den.eval_at_integer(x);
        if d.is_zero() {
            return None;
        }
        Some(Ratio::new(self.num.eval_at_integer(x), d))
    }
}

impl PartialEq for Frac {
    fn eq(&self, o: &Frac) -> bool {
        &self.num * &o.den == &o.num * &self.den
    }
}

impl Eq for Frac {}

impl fmt::Display for Frac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

/// A rational number, used for integer specializations of fractions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ratio {
    pub num: BigInt,
    pub den: BigInt,
}

impl Ratio {
    pub fn new(num: BigInt, den: BigInt) -> Self {
        let g = num_integer::Integer::gcd(&num, &den);
        let (mut num, mut den) = (num / &g, den / &g);
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        Ratio { num, den }
    }
}

/// An element of the localisation `R = Z[q]_P`: a fraction whose denominator
/// has constant term 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PFraction(Frac);

impl PFraction {
    pub fn new(num: IntPoly, den: IntPoly) -> Result<Self, PolyError> {
        if !den.in_p() {
            return Err(PolyError::NotInP(den));
        }
        let f = Frac::new(num, den)?;
        debug_assert!(f.den.coeff(0).is_one());
        Ok(PFraction(f))
    }

    pub fn from_poly(p: IntPoly) -> Self {
        PFraction(Frac::from_poly(p))
    }

    pub fn one() -> Self {
        Self::from_poly(IntPoly::one())
    }

    pub fn zero() -> Self {
        Self::from_poly(IntPoly::zero())
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.0.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.0.den
    }

    pub fn as_frac(&self) -> &Frac {
        &self.0
    }

    pub fn as_poly(&self) -> Option<IntPoly> {
        self.0.as_poly()
    }

    pub fn add(&self, o: &PFraction) -> PFraction {
        PFraction(self.0.add(&o.0))
    }

    pub fn sub(&self, o: &PFraction) -> PFraction {
        PFraction(self.0.sub(&o.0))
    }

    pub fn mul(&self, o: &PFraction) -> PFraction {
        PFraction(self.0.mul(&o.0))
    }

    pub fn neg(&self) -> PFraction {
        PFraction(self.0.neg())
    }

    /// Inverse, defined when the numerator itself lies in `P`.
    pub fn inv(&self) -> Result<PFraction, PolyError> {
        PFraction::new(self.0.den.clone(), self.0.num.clone())
    }

    /// Image under `q ↦ 0`, always defined since denominators are units there.
    pub fn specialize_q0(&self) -> BigInt {
        self.0.num.specialize_q0() * self.0.den.specialize_q0()
    }
}

impl fmt::Display for PFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Binomial coefficient `n choose k` as a big integer; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}
