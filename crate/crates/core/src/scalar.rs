//! Exact coefficients: reduced rationals or residues modulo a prime.
//!
//! Rationals keep an `i64` fast path and fall back to arbitrary precision
//! only when a result no longer fits.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which field the coefficients live in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ScalarKind {
    Rational,
    Prime(u64),
}

impl ScalarKind {
    pub fn prime(p: u64) -> Result<Self> {
        if is_prime(p) {
            Ok(ScalarKind::Prime(p))
        } else {
            Err(Error::Domain(format!("modulus {p} is not prime")))
        }
    }
}

impl fmt::Display for ScalarKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarKind::Rational => write!(f, "Q"),
            ScalarKind::Prime(p) => write!(f, "gf {p}"),
        }
    }
}

pub(crate) fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p < 4 {
        return true;
    }
    if p % 2 == 0 {
        return false;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= p {
        if p % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    /// Reduced, denominator positive.
    Small(i64, i64),
    /// Reduced and never representable as `Small`.
    Big(BigRational),
    Mod(u64, u64),
}

/// An exact field element.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

impl Scalar {
    pub fn zero(kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Rational => Scalar(Repr::Small(0, 1)),
            ScalarKind::Prime(p) => Scalar(Repr::Mod(0, p)),
        }
    }

    pub fn one(kind: ScalarKind) -> Self {
        Self::from_i64(1, kind)
    }

    pub fn from_i64(v: i64, kind: ScalarKind) -> Self {
        match kind {
            ScalarKind::Rational => Scalar(Repr::Small(v, 1)),
            ScalarKind::Prime(p) => Scalar(Repr::Mod(reduce_i128(v as i128, p), p)),
        }
    }

    /// `num / den`, reduced. Fails on a zero denominator, or when `den` is
    /// divisible by the prime modulus.
    pub fn from_ratio(num: BigInt, den: BigInt, kind: ScalarKind) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::Domain("zero denominator".into()));
        }
        match kind {
            ScalarKind::Rational => Ok(Self::from_big(BigRational::new(num, den))),
            ScalarKind::Prime(p) => {
                let m = BigInt::from(p);
                let n = num.mod_floor(&m).to_u64().unwrap();
                let d = den.mod_floor(&m).to_u64().unwrap();
                if d == 0 {
                    return Err(Error::Domain(format!(
                        "denominator {den} vanishes modulo {p}"
                    )));
                }
                Ok(Scalar(Repr::Mod(mul_mod(n, inv_mod(d, p), p), p)))
            }
        }
    }

    fn from_big(r: BigRational) -> Self {
        match (r.numer().to_i64(), r.denom().to_i64()) {
            (Some(n), Some(d)) => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(r)),
        }
    }

    fn to_big(&self) -> BigRational {
        match &self.0 {
            Repr::Small(n, d) => BigRational::new_raw(BigInt::from(*n), BigInt::from(*d)),
            Repr::Big(r) => r.clone(),
            Repr::Mod(..) => unreachable!("modular scalar used as rational"),
        }
    }

    fn small(n: i128, d: i128) -> Self {
        let g = n.gcd(&d);
        let (mut n, mut d) = if g > 1 { (n / g, d / g) } else { (n, d) };
        if d < 0 {
            n = -n;
            d = -d;
        }
        match (i64::try_from(n), i64::try_from(d)) {
            (Ok(n), Ok(d)) => Scalar(Repr::Small(n, d)),
            _ => Scalar(Repr::Big(BigRational::new(BigInt::from(n), BigInt::from(d)))),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match &self.0 {
            Repr::Small(..) | Repr::Big(_) => ScalarKind::Rational,
            Repr::Mod(_, p) => ScalarKind::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n == 0,
            Repr::Big(_) => false,
            Repr::Mod(v, _) => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(n, d) => *n == 1 && *d == 1,
            Repr::Big(_) => false,
            Repr::Mod(v, _) => *v == 1,
        }
    }

    /// True for rationals with negative sign. Residues are never negative.
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(n, _) => *n < 0,
            Repr::Big(r) => r.is_negative(),
            Repr::Mod(..) => false,
        }
    }

    /// Multiplicative inverse.
    ///
    /// # Panics
    /// On zero.
    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        match &self.0 {
            Repr::Small(n, d) => Self::small(*d as i128, *n as i128),
            Repr::Big(r) => Self::from_big(r.recip()),
            Repr::Mod(v, p) => Scalar(Repr::Mod(inv_mod(*v, *p), *p)),
        }
    }

    pub fn as_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Mod(..) => None,
            _ => Some(self.to_big()),
        }
    }

    /// Approximate value, for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        match &self.0 {
            Repr::Small(n, d) => *n as f64 / *d as f64,
            Repr::Big(r) => r.to_f64().unwrap_or(f64::NAN),
            Repr::Mod(v, _) => *v as f64,
        }
    }

    /// `self - c * other`, the elimination kernel.
    pub fn sub_mul(&self, c: &Scalar, other: &Scalar) -> Scalar {
        match (&self.0, &c.0, &other.0) {
            (Repr::Mod(a, p), Repr::Mod(b, _), Repr::Mod(x, _)) => {
                let prod = mul_mod(*b, *x, *p);
                Scalar(Repr::Mod((*a + *p - prod) % *p, *p))
            }
            _ => self - &(c * other),
        }
    }
}

fn reduce_i128(v: i128, p: u64) -> u64 {
    v.rem_euclid(p as i128) as u64
}

fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a is nonzero mod p.
    let mut base = a % p;
    let mut exp = p - 2;
    let mut acc = 1u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

fn check_same(a: &Repr, b: &Repr) -> u64 {
    match (a, b) {
        (Repr::Mod(_, p), Repr::Mod(_, q)) => {
            assert_eq!(p, q, "scalars from different prime fields");
            *p
        }
        (Repr::Mod(..), _) | (_, Repr::Mod(..)) => {
            panic!("mixing rational and modular scalars")
        }
        _ => 0,
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        let p = check_same(&self.0, &rhs.0);
        match (&self.0, &rhs.0) {
            (Repr::Mod(a, _), Repr::Mod(b, _)) => Scalar(Repr::Mod((a + b) % p, p)),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                let (a, b, c, d) = (*a as i128, *b as i128, *c as i128, *d as i128);
                if b == d {
                    Scalar::small(a + c, b)
                } else {
                    Scalar::small(a * d + c * b, b * d)
                }
            }
            _ => Scalar::from_big(self.to_big() + rhs.to_big()),
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        self + &(-rhs)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        let p = check_same(&self.0, &rhs.0);
        match (&self.0, &rhs.0) {
            (Repr::Mod(a, _), Repr::Mod(b, _)) => Scalar(Repr::Mod(mul_mod(*a, *b, p), p)),
            (Repr::Small(a, b), Repr::Small(c, d)) => {
                Scalar::small(*a as i128 * *c as i128, *b as i128 * *d as i128)
            }
            _ => Scalar::from_big(self.to_big() * rhs.to_big()),
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Small(n, d) => Scalar::small(-(*n as i128), *d as i128),
            Repr::Big(r) => Scalar::from_big(-r.clone()),
            Repr::Mod(v, p) => Scalar(Repr::Mod((p - v) % p, *p)),
        }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(n, 1) => write!(f, "{n}"),
            Repr::Small(n, d) => write!(f, "{n}/{d}"),
            Repr::Big(r) if r.denom().is_one() => write!(f, "{}", r.numer()),
            Repr::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Repr::Mod(v, _) => write!(f, "{v}"),
        }
    }
}
