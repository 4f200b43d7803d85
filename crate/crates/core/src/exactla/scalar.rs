//! Scalar types: the prime fields `Gf<P>`, the runtime field tag
//! [`PrimeField`], and the coefficient-ring tag [`Ring`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::LinalgError;

/// Anything that can sit in a matrix: a commutative ring with identity.
pub trait Scalar:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
{
}

impl<T> Scalar for T where
    T: Clone
        + fmt::Debug
        + PartialEq
        + Zero
        + One
        + Neg<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
{
}

/// A scalar type in which every nonzero element is invertible.
pub trait FieldScalar: Scalar {
    fn inverse(&self) -> Option<Self>;
}

impl FieldScalar for BigRational {
    fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

/// Integer-like scalars accepted by the Smith normal form routines.
pub trait IntegerScalar: Scalar + num_integer::Integer + Signed {}
impl IntegerScalar for BigInt {}
impl IntegerScalar for i64 {}

/// Element of the prime field GF(P). The representative is always reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Gf<const P: u32>(u32);

impl<const P: u32> Gf<P> {
    pub fn new(v: i64) -> Self {
        Gf(v.rem_euclid(P as i64) as u32)
    }

    pub fn value(self) -> u32 {
        self.0
    }

    pub fn pow(self, mut e: u64) -> Self {
        let mut base = self;
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }
}

impl<const P: u32> fmt::Debug for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> fmt::Display for Gf<P> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl<const P: u32> Add for Gf<P> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Gf((self.0 + o.0) % P)
    }
}

impl<const P: u32> Sub for Gf<P> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Gf((self.0 + P - o.0) % P)
    }
}

impl<const P: u32> Mul for Gf<P> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Gf(((self.0 as u64 * o.0 as u64) % P as u64) as u32)
    }
}

impl<const P: u32> Neg for Gf<P> {
    type Output = Self;
    fn neg(self) -> Self {
        Gf((P - self.0) % P)
    }
}

impl<const P: u32> Zero for Gf<P> {
    fn zero() -> Self {
        Gf(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl<const P: u32> One for Gf<P> {
    fn one() -> Self {
        Gf(1 % P)
    }
}

impl<const P: u32> FieldScalar for Gf<P> {
    fn inverse(&self) -> Option<Self> {
        if self.0 == 0 {
            None
        } else {
            Some(self.pow(P as u64 - 2))
        }
    }
}

/// Primes accepted by [`PrimeField`] and by [`dispatch_prime!`](crate::dispatch_prime).
pub const SUPPORTED_PRIMES: [u32; 25] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
];

/// Runs `$body` with `$F` bound to the type `Gf<p>` for a runtime prime `p`.
///
/// Panics on primes outside [`SUPPORTED_PRIMES`]; callers obtain `p` from a
/// validated [`PrimeField`].
#[macro_export]
macro_rules! dispatch_prime {
    ($p:expr, $F:ident => $body:expr) => {{
        macro_rules! __arm {
            ($q:literal) => {{
                #[allow(dead_code)]
                type $F = $crate::exactla::Gf<$q>;
                $body
            }};
        }
        match $p {
            2 => __arm!(2),
            3 => __arm!(3),
            5 => __arm!(5),
            7 => __arm!(7),
            11 => __arm!(11),
            13 => __arm!(13),
            17 => __arm!(17),
            19 => __arm!(19),
            23 => __arm!(23),
            29 => __arm!(29),
            31 => __arm!(31),
            37 => __arm!(37),
            41 => __arm!(41),
            43 => __arm!(43),
            47 => __arm!(47),
            53 => __arm!(53),
            59 => __arm!(59),
            61 => __arm!(61),
            67 => __arm!(67),
            71 => __arm!(71),
            73 => __arm!(73),
            79 => __arm!(79),
            83 => __arm!(83),
            89 => __arm!(89),
            97 => __arm!(97),
            other => panic!("unsupported prime {other}"),
        }
    }};
}

/// Runtime handle on GF(p) for small primes. Elements are plain `u32`
/// residues; the group and building code stores them as `u8`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub struct PrimeField {
    p: u32,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, LinalgError> {
        if SUPPORTED_PRIMES.contains(&p) {
            Ok(PrimeField { p })
        } else {
            Err(LinalgError::InvalidPrime(p))
        }
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn reduce(self, v: i64) -> u32 {
        v.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        (a * b) % self.p
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn pow(self, a: u32, mut e: u32) -> u32 {
        let mut base = a % self.p;
        let mut acc = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self, a: u32) -> Option<u32> {
        if a % self.p == 0 {
            None
        } else {
            Some(self.pow(a, self.p - 2))
        }
    }

    /// Smallest generator of the multiplicative group.
    pub fn primitive_root(self) -> u32 {
        if self.p == 2 {
            return 1;
        }
        (2..self.p)
            .find(|&g| (1..self.p - 1).all(|e| self.pow(g, e) != 1))
            .expect("prime fields have primitive roots")
    }

    /// The residue as a signed integer in (-p/2, p/2].
    pub fn lift_centered(self, a: u32) -> i64 {
        let a = (a % self.p) as i64;
        let p = self.p as i64;
        if 2 * a > p {
            a - p
        } else {
            a
        }
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.p)
    }
}

/// Coefficient ring tag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Ring {
    Integers,
    Rationals,
    Prime(PrimeField),
}

impl Ring {
    pub fn is_field(self) -> bool {
        !matches!(self, Ring::Integers)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::Prime(k) => write!(f, "F{}", k.p()),
        }
    }
}

impl FromStr for Ring {
    type Err = LinalgError;

    /// Accepts `Z`, `Q`, `F3`, `Fp3`, `GF3` and `GF(3)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        match t {
            "Z" | "ZZ" => return Ok(Ring::Integers),
            "Q" | "QQ" => return Ok(Ring::Rationals),
            _ => {}
        }
        let digits = t
            .trim_start_matches("GF")
            .trim_start_matches("Fp")
            .trim_start_matches('F')
            .trim_start_matches('(')
            .trim_end_matches(')');
        let p: u32 = digits
            .parse()
            .map_err(|_| LinalgError::UnknownRing(s.to_string()))?;
        Ok(Ring::Prime(PrimeField::new(p)?))
    }
}
