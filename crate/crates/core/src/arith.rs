//! Exact scalars: arbitrary-precision rationals and elements of a real
//! quadratic field `Q(√d)`.
//!
//! Every value that flows through an evaluation path in this crate is one of
//! these two types. Floating point only appears in [`QuadExt::to_f64`], which
//! exists for diagnostics.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num::bigint::Sign;
use num::{BigInt, BigRational, Integer, One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational number in canonical form (reduced, positive denominator).
pub type Rat = BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("cannot combine elements of Q(sqrt({left})) and Q(sqrt({right}))")]
    MixedRadicand { left: BigInt, right: BigInt },
    #[error("negative radicand {0}: only real quadratic fields are supported")]
    NegativeRadicand(Rat),
    #[error("division by zero")]
    DivisionByZero,
    #[error("cannot parse exact value from {0:?}")]
    Parse(String),
}

/// Shorthand for the rational `n / d`. Panics if `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Shorthand for the integer `n` as a rational.
pub fn int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// Parses `"p"`, `"-p"`, or `"p/q"` into a canonical rational.
pub fn parse_rat(s: &str) -> Result<Rat, ArithError> {
    Rat::from_str(s.trim()).map_err(|_| ArithError::Parse(s.to_string()))
}

/// `base^exp` for a nonnegative integer exponent.
pub fn pow<T: Scalar>(base: &T, exp: usize) -> T {
    let mut acc = T::one();
    let mut sq = base.clone();
    let mut e = exp;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * sq.clone();
        }
        e >>= 1;
        if e > 0 {
            sq = sq.clone() * sq;
        }
    }
    acc
}

/// Field operations shared by [`Rat`] and [`QuadExt`], so that evaluators and
/// linear solvers can run over either.
pub trait Scalar:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_rat(r: &Rat) -> Self;

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    fn checked_div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.clone() * inv)
    }
}

impl Scalar for Rat {
    fn from_rat(r: &Rat) -> Self {
        r.clone()
    }

    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Element `base + coeff·√radicand` of a real quadratic field.
///
/// The radicand is kept as a positive integer with square factors removed
/// (as far as trial division finds them), so equal field elements compare
/// equal structurally. Elements with `coeff = 0` are rationals and carry
/// radicand 1; they combine freely with any field. Two elements with
/// nonzero `coeff` over different radicands cannot be combined: the
/// operator impls panic, the `try_*` methods return
/// [`ArithError::MixedRadicand`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadExt {
    base: Rat,
    coeff: Rat,
    radicand: BigInt,
}

const SQUARE_FACTOR_TRIAL_LIMIT: u64 = 20_000;

/// Splits `n > 0` into `(s, k)` with `n = s²·k`, removing every square factor
/// whose prime is below the trial limit and a final perfect-square remainder.
fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    let mut k = n.clone();
    let mut s = BigInt::one();
    let mut p: u64 = 2;
    while p <= SQUARE_FACTOR_TRIAL_LIMIT {
        let bp = BigInt::from(p);
        let p2 = &bp * &bp;
        if p2 > k {
            break;
        }
        while (&k % &p2).is_zero() {
            k /= &p2;
            s *= &bp;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    let r = k.sqrt();
    if &r * &r == k {
        s *= r;
        k = BigInt::one();
    }
    (s, k)
}

impl QuadExt {
    /// Builds `base + coeff·√radicand`, normalizing the radicand. A radicand
    /// that is the square of a rational folds into `base`.
    pub fn new(base: Rat, coeff: Rat, radicand: Rat) -> Result<Self, ArithError> {
        if radicand.is_negative() {
            return Err(ArithError::NegativeRadicand(radicand));
        }
        if radicand.is_zero() || coeff.is_zero() {
            return Ok(Self::from_rat(base));
        }
        // √(p/q) = √(p·q) / q
        let pq = radicand.numer() * radicand.denom();
        let (s, k) = split_square(&pq);
        let scale = Rat::new(s, radicand.denom().clone());
        let coeff = coeff * scale;
        if k.is_one() {
            return Ok(Self::from_rat(base + coeff));
        }
        Ok(Self {
            base,
            coeff,
            radicand: k,
        })
    }

    pub fn from_rat(r: Rat) -> Self {
        Self {
            base: r,
            coeff: Rat::zero(),
            radicand: BigInt::one(),
        }
    }

    /// Exact nonnegative square root of a nonnegative rational.
    pub fn sqrt(r: &Rat) -> Result<Self, ArithError> {
        Self::new(Rat::zero(), Rat::one(), r.clone())
    }

    pub fn base(&self) -> &Rat {
        &self.base
    }

    pub fn coeff(&self) -> &Rat {
        &self.coeff
    }

    /// Normalized radicand; `1` for rational elements.
    pub fn radicand(&self) -> &BigInt {
        &self.radicand
    }

    pub fn is_rational(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_rat(&self) -> Option<Rat> {
        self.is_rational().then(|| self.base.clone())
    }

    /// `base - coeff·√d`.
    pub fn conjugate(&self) -> Self {
        Self {
            base: self.base.clone(),
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
        }
    }

    /// Field norm `base² - coeff²·d`, zero only for the zero element.
    pub fn norm(&self) -> Rat {
        let d = Rat::from_integer(self.radicand.clone());
        &self.base * &self.base - &self.coeff * &self.coeff * d
    }

    /// Exact sign: -1, 0 or 1.
    ///
    /// With `s = sign(base)`, `t = sign(coeff)`: equal signs decide directly,
    /// otherwise `base²` against `coeff²·d` decides which term dominates.
    pub fn signum(&self) -> i8 {
        let s = sign_of(&self.base);
        let t = sign_of(&self.coeff);
        if t == 0 {
            return s;
        }
        if s == 0 || s == t {
            return t;
        }
        let d = Rat::from_integer(self.radicand.clone());
        let lhs = &self.base * &self.base;
        let rhs = &self.coeff * &self.coeff * d;
        match lhs.cmp(&rhs) {
            Ordering::Greater => s,
            Ordering::Less => t,
            // d is never a perfect square
            Ordering::Equal => 0,
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    /// Approximate value. Diagnostics only.
    pub fn to_f64(&self) -> f64 {
        let b = self.base.to_f64().unwrap_or(f64::NAN);
        let c = self.coeff.to_f64().unwrap_or(f64::NAN);
        let d = self.radicand.to_f64().unwrap_or(f64::NAN);
        b + c * d.sqrt()
    }

    fn merged_radicand(&self, other: &Self) -> Result<BigInt, ArithError> {
        if self.coeff.is_zero() {
            Ok(other.radicand.clone())
        } else if other.coeff.is_zero() || self.radicand == other.radicand {
            Ok(self.radicand.clone())
        } else {
            Err(ArithError::MixedRadicand {
                left: self.radicand.clone(),
                right: other.radicand.clone(),
            })
        }
    }

    fn normalized(mut self) -> Self {
        if self.coeff.is_zero() {
            self.radicand = BigInt::one();
        }
        self
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, ArithError> {
        let radicand = self.merged_radicand(other)?;
        Ok(Self {
            base: &self.base + &other.base,
            coeff: &self.coeff + &other.coeff,
            radicand,
        }
        .normalized())
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_add(&-other.clone())
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, ArithError> {
        let radicand = self.merged_radicand(other)?;
        let d = Rat::from_integer(radicand.clone());
        Ok(Self {
            base: &self.base * &other.base + &self.coeff * &other.coeff * d,
            coeff: &self.base * &other.coeff + &self.coeff * &other.base,
            radicand,
        }
        .normalized())
    }

    pub fn try_inverse(&self) -> Result<Self, ArithError> {
        let n = self.norm();
        if n.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        Ok(Self {
            base: &self.base / &n,
            coeff: -(&self.coeff / &n),
            radicand: self.radicand.clone(),
        }
        .normalized())
    }

    pub fn try_div(&self, other: &Self) -> Result<Self, ArithError> {
        self.try_mul(&other.try_inverse()?)
    }
}

fn sign_of(r: &Rat) -> i8 {
    match r.numer().sign() {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

impl From<Rat> for QuadExt {
    fn from(r: Rat) -> Self {
        Self::from_rat(r)
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeff.is_zero() {
            return write!(f, "{}", self.base);
        }
        let c = self.coeff.abs();
        let root = if c.is_one() {
            format!("sqrt({})", self.radicand)
        } else {
            format!("{}*sqrt({})", c, self.radicand)
        };
        match (self.base.is_zero(), self.coeff.is_negative()) {
            (true, false) => write!(f, "{root}"),
            (true, true) => write!(f, "-{root}"),
            (false, false) => write!(f, "{} + {root}", self.base),
            (false, true) => write!(f, "{} - {root}", self.base),
        }
    }
}

impl PartialOrd for QuadExt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = self.try_sub(other).ok()?;
        Some(diff.signum().cmp(&0))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $try:ident) => {
        impl $trait<&QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                self.$try(rhs).unwrap_or_else(|e| panic!("{e}"))
            }
        }
        impl $trait<QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&QuadExt> for QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: &QuadExt) -> QuadExt {
                (&self).$method(rhs)
            }
        }
        impl $trait<QuadExt> for &QuadExt {
            type Output = QuadExt;
            fn $method(self, rhs: QuadExt) -> QuadExt {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, try_add);
forward_binop!(Sub, sub, try_sub);
forward_binop!(Mul, mul, try_mul);
forward_binop!(Div, div, try_div);

impl Neg for QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        Self {
            base: -self.base,
            coeff: -self.coeff,
            radicand: self.radicand,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        -self.clone()
    }
}

impl Zero for QuadExt {
    fn zero() -> Self {
        Self::from_rat(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.base.is_zero() && self.coeff.is_zero()
    }
}

impl One for QuadExt {
    fn one() -> Self {
        Self::from_rat(Rat::one())
    }
}

impl Scalar for QuadExt {
    fn from_rat(r: &Rat) -> Self {
        QuadExt::from_rat(r.clone())
    }

    fn inverse(&self) -> Option<Self> {
        self.try_inverse().ok()
    }
}

/// Euclidean gcd on machine integers, used by arity bookkeeping.
pub fn gcd(a: usize, b: usize) -> usize {
    a.gcd(&b)
}
