//! Coefficient rings for exact series arithmetic.
//!
//! Every series in this crate is generic over a [`Scalar`]: an exact
//! commutative ring element with decidable equality and a partial inverse.
//! The three base rings are arbitrary-precision rationals ([`Rat`]),
//! arbitrary-precision integers ([`Int`]), and residue rings Z/N ([`Mod`]).
//! Truncated series themselves implement [`Scalar`], so towers like
//! "z-series whose coefficients are q-expansions" reuse the same kernels.
//!
//! No floating point is used anywhere.

use std::fmt::{self, Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num::bigint::BigInt;
use num::rational::BigRational;
use num::traits::{One, Zero};

/// Exact rational scalar.
pub type Rat = BigRational;
/// Exact integer scalar.
pub type Int = BigInt;

/// An exact commutative ring element.
///
/// `from_int` embeds small integers through the unique ring map from Z;
/// `inv` returns the multiplicative inverse when the element is a unit.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    fn from_int(n: i64) -> Self;

    /// Multiplicative inverse, or `None` if the element is not a unit.
    fn inv(&self) -> Option<Self>;

    fn is_unit(&self) -> bool {
        self.inv().is_some()
    }
}

impl Scalar for Rat {
    fn from_int(n: i64) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
}

impl Scalar for Int {
    fn from_int(n: i64) -> Self {
        BigInt::from(n)
    }

    fn inv(&self) -> Option<Self> {
        if self == &BigInt::from(1) || self == &BigInt::from(-1) {
            Some(self.clone())
        } else {
            None
        }
    }
}

/// An element of Z/N with the modulus carried alongside the value.
///
/// Elements produced by `zero`, `one`, and `from_int` do not yet know a
/// modulus; they carry `modulus == 0` and attach to the other operand's
/// modulus on first contact. Attached values are kept reduced to `0..modulus`.
#[derive(Clone, Copy)]
pub struct Mod {
    val: i128,
    modulus: u64,
}

impl PartialEq for Mod {
    /// Values compare after attaching an unattached side to the other's
    /// modulus, so the integer 0 equals the zero of every Z/N.
    fn eq(&self, other: &Self) -> bool {
        match (self.modulus, other.modulus) {
            (0, 0) => self.val == other.val,
            (0, m) => self.val.rem_euclid(m as i128) == other.val,
            (m, 0) => other.val.rem_euclid(m as i128) == self.val,
            (m, n) => m == n && self.val == other.val,
        }
    }
}

impl Mod {
    pub fn new(val: i64, modulus: u64) -> Self {
        assert!(modulus >= 2, "residue modulus must be >= 2");
        Mod {
            val: (val as i128).rem_euclid(modulus as i128),
            modulus,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    /// Reduced representative in `0..modulus` (attached elements only).
    pub fn value(&self) -> u64 {
        debug_assert!(self.modulus > 0, "value() on an unattached Mod");
        self.val as u64
    }

    fn attach(self, modulus: u64) -> Self {
        if self.modulus == modulus {
            self
        } else {
            assert!(
                self.modulus == 0,
                "modulus mismatch: {} vs {}",
                self.modulus,
                modulus
            );
            Mod {
                val: self.val.rem_euclid(modulus as i128),
                modulus,
            }
        }
    }

    fn unify(self, other: Self) -> (Self, Self, u64) {
        let m = if self.modulus != 0 {
            self.modulus
        } else {
            other.modulus
        };
        if m == 0 {
            (self, other, 0)
        } else {
            (self.attach(m), other.attach(m), m)
        }
    }
}

impl Debug for Mod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.modulus == 0 {
            write!(f, "{}?", self.val)
        } else {
            write!(f, "{} mod {}", self.val, self.modulus)
        }
    }
}

impl Display for Mod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.val)
    }
}

impl Add for Mod {
    type Output = Mod;
    fn add(self, rhs: Mod) -> Mod {
        let (a, b, m) = self.unify(rhs);
        let val = a.val + b.val;
        Mod {
            val: if m == 0 { val } else { val.rem_euclid(m as i128) },
            modulus: m,
        }
    }
}

impl Sub for Mod {
    type Output = Mod;
    fn sub(self, rhs: Mod) -> Mod {
        self + (-rhs)
    }
}

impl Neg for Mod {
    type Output = Mod;
    fn neg(self) -> Mod {
        let val = -self.val;
        Mod {
            val: if self.modulus == 0 {
                val
            } else {
                val.rem_euclid(self.modulus as i128)
            },
            modulus: self.modulus,
        }
    }
}

impl Mul for Mod {
    type Output = Mod;
    fn mul(self, rhs: Mod) -> Mod {
        let (a, b, m) = self.unify(rhs);
        let val = a.val * b.val;
        Mod {
            val: if m == 0 { val } else { val.rem_euclid(m as i128) },
            modulus: m,
        }
    }
}

impl Zero for Mod {
    fn zero() -> Self {
        Mod { val: 0, modulus: 0 }
    }
    fn is_zero(&self) -> bool {
        self.val == 0
    }
}

impl One for Mod {
    fn one() -> Self {
        Mod { val: 1, modulus: 0 }
    }
    fn is_one(&self) -> bool {
        self.val == 1 || (self.modulus == 1)
    }
}

impl Scalar for Mod {
    fn from_int(n: i64) -> Self {
        Mod {
            val: n as i128,
            modulus: 0,
        }
    }

    fn inv(&self) -> Option<Self> {
        if self.modulus == 0 {
            // Unattached integers invert like integers.
            return match self.val {
                1 | -1 => Some(*self),
                _ => None,
            };
        }
        let (g, x, _) = ext_gcd(self.val, self.modulus as i128);
        if g == 1 {
            Some(Mod {
                val: x.rem_euclid(self.modulus as i128),
                modulus: self.modulus,
            })
        } else {
            None
        }
    }
}

/// Extended Euclid: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    if b == 0 {
        if a < 0 {
            (-a, -1, 0)
        } else {
            (a, 1, 0)
        }
    } else {
        let (g, x, y) = ext_gcd(b, a.rem_euclid(b));
        (g, y, x - (a.div_euclid(b)) * y)
    }
}

/// The coefficient ring of a serialized series, as named in the text format.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CoeffRing {
    Rational,
    Integer,
    Residue(u64),
}

impl CoeffRing {
    pub fn parse(s: &str) -> Option<CoeffRing> {
        match s.trim() {
            "Q" => Some(CoeffRing::Rational),
            "Z" => Some(CoeffRing::Integer),
            other => {
                let n = other.strip_prefix("Z/")?.parse::<u64>().ok()?;
                if n >= 2 {
                    Some(CoeffRing::Residue(n))
                } else {
                    None
                }
            }
        }
    }
}

impl Display for CoeffRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffRing::Rational => write!(f, "Q"),
            CoeffRing::Integer => write!(f, "Z"),
            CoeffRing::Residue(n) => write!(f, "Z/{}", n),
        }
    }
}

/// Convenience constructors used pervasively in tests.
pub fn rat(n: i64, d: i64) -> Rat {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Int {
    BigInt::from(n)
}
