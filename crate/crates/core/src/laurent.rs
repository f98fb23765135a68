//! Exact Laurent polynomials in K invertible variables.
//!
//! Unlike the truncated series types, a `Laurent` is a finite object: a
//! sparse map from integer exponent vectors (negative exponents allowed) to
//! coefficients. Theta-function q-layers live here, as does the group ring
//! Z[Z^3] of the three line-bundle generators.
//!
//! `Laurent<S, K>` implements [`Scalar`]; a Tate-curve theta function is a
//! `QSeries<Laurent<Int, 1>>`, and products of theta factors on the cube
//! are `QSeries<Laurent<Int, 3>>`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Zero};

use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Debug)]
pub struct Laurent<S: Scalar, const K: usize> {
    terms: BTreeMap<[i64; K], S>,
}

impl<S: Scalar, const K: usize> Laurent<S, K> {
    pub fn new() -> Self {
        Laurent {
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(c: S, expo: [i64; K]) -> Self {
        let mut l = Self::new();
        l.set_coeff(expo, c);
        l
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, [0; K])
    }

    pub fn coeff(&self, expo: [i64; K]) -> S {
        self.terms.get(&expo).cloned().unwrap_or_else(S::zero)
    }

    pub fn set_coeff(&mut self, expo: [i64; K], c: S) {
        if c.is_zero() {
            self.terms.remove(&expo);
        } else {
            self.terms.insert(expo, c);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64; K], &S)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Exponent range of variable `i` over the support, or None if zero.
    pub fn support_range(&self, i: usize) -> Option<(i64, i64)> {
        let mut range: Option<(i64, i64)> = None;
        for e in self.terms.keys() {
            let v = e[i];
            range = Some(match range {
                None => (v, v),
                Some((lo, hi)) => (lo.min(v), hi.max(v)),
            });
        }
        range
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            let cur = out.coeff(*e);
            out.set_coeff(*e, cur + c.clone());
        }
        out
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        Laurent {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (*e, -c.clone()))
                .collect(),
        }
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        let mut out = Self::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = [0i64; K];
                for i in 0..K {
                    e[i] = ea[i] + eb[i];
                }
                let cur = out.coeff(e);
                out.set_coeff(e, cur + ca.clone() * cb.clone());
            }
        }
        out
    }

    /// Reinterpret a one-variable Laurent polynomial at a monomial of a
    /// K-variable ring: u^k becomes (u1^m1 ... )^k.
    pub fn at_monomial<const K2: usize>(&self, expo: [i64; K2]) -> Laurent<S, K2>
    where
        [i64; 1]: AsRef<[i64]>,
    {
        assert_eq!(K, 1, "at_monomial applies to one-variable polynomials");
        let mut out = Laurent::new();
        for (e, c) in &self.terms {
            let k = e[0];
            let mut key = [0i64; K2];
            for i in 0..K2 {
                key[i] = k * expo[i];
            }
            let cur = out.coeff(key);
            out.set_coeff(key, cur + c.clone());
        }
        out
    }
}

impl<S: Scalar, const K: usize> Default for Laurent<S, K> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar, const K: usize> Add for Laurent<S, K> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<S: Scalar, const K: usize> Sub for Laurent<S, K> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<S: Scalar, const K: usize> Neg for Laurent<S, K> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<S: Scalar, const K: usize> Mul for Laurent<S, K> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<S: Scalar, const K: usize> Zero for Laurent<S, K> {
    fn zero() -> Self {
        Self::new()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl<S: Scalar, const K: usize> One for Laurent<S, K> {
    fn one() -> Self {
        Self::constant(S::one())
    }
    fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.coeff([0; K]).is_one()
    }
}

impl<S: Scalar, const K: usize> fmt::Display for Laurent<S, K> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let names = ["u", "v", "w", "t"];
        let mut wrote = false;
        for (e, c) in &self.terms {
            if wrote {
                write!(f, " + ")?;
            }
            write!(f, "({})", c)?;
            for (i, &ei) in e.iter().enumerate() {
                if ei != 0 {
                    let name = names.get(i).copied().unwrap_or("x");
                    if K == 1 {
                        write!(f, "*{}^{}", name, ei)?;
                    } else {
                        write!(f, "*{}{}^{}", name, i + 1, ei)?;
                    }
                }
            }
            wrote = true;
        }
        Ok(())
    }
}

impl<S: Scalar, const K: usize> Scalar for Laurent<S, K> {
    fn from_int(n: i64) -> Self {
        Self::constant(S::from_int(n))
    }

    /// Only single-term Laurent polynomials with a unit coefficient are
    /// invertible.
    fn inv(&self) -> Option<Self> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut inv_e = [0i64; K];
        for i in 0..K {
            inv_e[i] = -e[i];
        }
        Some(Self::monomial(c.inv()?, inv_e))
    }
}
