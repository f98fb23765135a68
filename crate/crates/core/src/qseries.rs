//! Dense truncated power series in one variable.
//!
//! A `QSeries` stores the coefficients of q^0 .. q^(trunc-1); everything at
//! or above `trunc` is unknown. Binary operations truncate to the minimum of
//! the operand truncations, and multiplication discards unknown terms.
//!
//! `QSeries<S>` itself implements [`Scalar`], so series towers such as
//! z-expansions with q-expansion coefficients work with the same kernels.
//! Ring constants built by `zero`/`one`/`from_int` carry the sentinel
//! truncation `usize::MAX` ("known to every order") and take the finite
//! truncation of the first real operand they meet.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::traits::{One, Zero};

use crate::error::SeriesError;
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct QSeries<S: Scalar> {
    coeffs: Vec<S>,
    trunc: usize,
}

impl<S: Scalar> QSeries<S> {
    /// The zero series known below q^trunc.
    pub fn zero_trunc(trunc: usize) -> Self {
        let mut s = QSeries {
            coeffs: Vec::new(),
            trunc,
        };
        s.pad();
        s
    }

    /// The constant-one series known below q^trunc.
    pub fn one_trunc(trunc: usize) -> Self {
        Self::constant(S::one(), trunc)
    }

    pub fn constant(c: S, trunc: usize) -> Self {
        let mut s = QSeries {
            coeffs: vec![c],
            trunc,
        };
        s.pad();
        s
    }

    /// c * q^k.
    pub fn monomial(c: S, k: usize, trunc: usize) -> Self {
        let mut s = Self::zero_trunc(trunc);
        if k < trunc {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<S>, trunc: usize) -> Self {
        assert!(
            coeffs.len() <= trunc,
            "coefficient list longer than truncation order"
        );
        let mut s = QSeries { coeffs, trunc };
        s.pad();
        s
    }

    /// Build coefficient-by-coefficient from a rule.
    pub fn from_fn(trunc: usize, f: impl FnMut(usize) -> S) -> Self {
        QSeries {
            coeffs: (0..trunc).map(f).collect(),
            trunc,
        }
    }

    fn pad(&mut self) {
        if self.trunc != usize::MAX && self.coeffs.len() < self.trunc {
            self.coeffs.resize(self.trunc, S::zero());
        }
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    /// Coefficient of q^k. Panics if the coefficient is beyond the truncation.
    pub fn coeff(&self, k: usize) -> S {
        assert!(
            k < self.trunc,
            "coefficient q^{} is unknown at truncation {}",
            k,
            self.trunc
        );
        self.coeffs.get(k).cloned().unwrap_or_else(S::zero)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn constant_term(&self) -> S {
        self.coeffs.get(0).cloned().unwrap_or_else(S::zero)
    }

    /// Forget coefficients at or above `n`.
    pub fn truncate_to(&self, n: usize) -> Self {
        if n >= self.trunc {
            return self.clone();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.truncate(n);
        QSeries { coeffs, trunc: n }
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> QSeries<T> {
        QSeries {
            coeffs: self.coeffs.iter().map(f).collect(),
            trunc: self.trunc,
        }
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Lowest exponent with a nonzero coefficient, if any survives truncation.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn add_ref(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let len = self.coeffs.len().max(rhs.coeffs.len()).min(trunc);
        let mut s = QSeries {
            coeffs: (0..len)
                .map(|k| {
                    let a = self.coeffs.get(k).cloned().unwrap_or_else(S::zero);
                    let b = rhs.coeffs.get(k).cloned().unwrap_or_else(S::zero);
                    a + b
                })
                .collect(),
            trunc,
        };
        s.pad();
        s
    }

    pub fn sub_ref(&self, rhs: &Self) -> Self {
        self.add_ref(&rhs.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        QSeries {
            coeffs: self.coeffs.iter().map(|a| a.clone() * c.clone()).collect(),
            trunc: self.trunc,
        }
    }

    pub fn mul_ref(&self, rhs: &Self) -> Self {
        let trunc = self.trunc.min(rhs.trunc);
        let len = if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            0
        } else {
            (self.coeffs.len() + rhs.coeffs.len() - 1).min(trunc)
        };
        let mut coeffs = vec![S::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = coeffs[i + j].clone() + a.clone() * b.clone();
            }
        }
        let mut s = QSeries { coeffs, trunc };
        s.pad();
        s
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one_trunc(self.trunc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul_ref(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul_ref(&base);
            }
        }
        result
    }

    /// Multiply by q^k. The truncation grows with the shift: coefficients
    /// below q^(trunc + k) stay known.
    pub fn shift(&self, k: usize) -> Self {
        if self.trunc == usize::MAX {
            let mut coeffs = vec![S::zero(); k];
            coeffs.extend(self.coeffs.iter().cloned());
            return QSeries {
                coeffs,
                trunc: usize::MAX,
            };
        }
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        QSeries {
            coeffs,
            trunc: self.trunc + k,
        }
    }

    /// Series inverse; requires a unit constant term.
    ///
    /// Uses c[0] = a0^-1, c[n] = -a0^-1 * sum_{k=1..n} a[k] c[n-k].
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let a0 = self.constant_term();
        let inv_a0 = a0.inv().ok_or(SeriesError::NonUnitConstant)?;
        if self.trunc == usize::MAX {
            // A constant of unbounded precision.
            if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
                return Ok(QSeries {
                    coeffs: vec![inv_a0],
                    trunc: usize::MAX,
                });
            }
        }
        let trunc = self.trunc;
        let mut out = vec![S::zero(); trunc];
        out[0] = inv_a0.clone();
        let neg_inv_a0 = -inv_a0;
        for n in 1..trunc {
            let mut sum = S::zero();
            for k in 1..=n {
                let ak = self.coeff(k);
                if ak.is_zero() {
                    continue;
                }
                sum = sum + ak * out[n - k].clone();
            }
            out[n] = neg_inv_a0.clone() * sum;
        }
        Ok(QSeries { coeffs: out, trunc })
    }

    /// Formal composition self(g) for g with zero constant term.
    pub fn compose(&self, g: &Self) -> Result<Self, SeriesError> {
        if !g.constant_term().is_zero() {
            return Err(SeriesError::ConstantTermNotZero);
        }
        let trunc = self.trunc.min(g.trunc);
        // Horner from the top coefficient down.
        let mut acc = QSeries::zero_trunc(trunc);
        let top = self.coeffs.len().min(trunc);
        for k in (0..top).rev() {
            acc = acc.mul_ref(g);
            acc = acc.add_ref(&QSeries::constant(self.coeff(k), trunc));
        }
        Ok(acc)
    }

    pub fn derivative(&self) -> Self {
        if self.trunc == usize::MAX {
            let coeffs = self
                .coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * S::from_int(k as i64))
                .collect();
            return QSeries {
                coeffs,
                trunc: usize::MAX,
            };
        }
        let trunc = self.trunc.saturating_sub(1).max(1);
        let mut s = QSeries {
            coeffs: (1..self.coeffs.len())
                .map(|k| self.coeffs[k].clone() * S::from_int(k as i64))
                .collect(),
            trunc,
        };
        s.pad();
        s
    }

    /// Antiderivative with zero constant term. Fails on rings where some
    /// needed integer is not invertible.
    pub fn integrate(&self) -> Result<Self, SeriesError> {
        let trunc = if self.trunc == usize::MAX {
            usize::MAX
        } else {
            self.trunc + 1
        };
        let mut coeffs = vec![S::zero()];
        for (k, c) in self.coeffs.iter().enumerate() {
            let n = (k + 1) as i64;
            let inv = S::from_int(n)
                .inv()
                .ok_or(SeriesError::NonInvertibleInteger(n))?;
            coeffs.push(c.clone() * inv);
        }
        let mut s = QSeries { coeffs, trunc };
        s.pad();
        Ok(s)
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::ConstantTermNotZero);
        }
        // g' = f' g, solved coefficient by coefficient.
        let trunc = self.trunc;
        let mut g = vec![S::one()];
        for n in 1..trunc {
            // n g_n = sum_{k=1..n} k f_k g_{n-k}
            let mut sum = S::zero();
            for k in 1..=n {
                let fk = self.coeff(k);
                if fk.is_zero() {
                    continue;
                }
                sum = sum + S::from_int(k as i64) * fk * g[n - k].clone();
            }
            let inv_n = S::from_int(n as i64)
                .inv()
                .ok_or(SeriesError::NonInvertibleInteger(n as i64))?;
            g.push(inv_n * sum);
        }
        Ok(QSeries { coeffs: g, trunc })
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let ratio = self.derivative().mul_ref(&self.invert()?);
        let integrated = ratio.integrate()?;
        Ok(integrated.truncate_to(self.trunc))
    }
}

impl<S: Scalar> PartialEq for QSeries<S> {
    fn eq(&self, other: &Self) -> bool {
        if self.trunc != other.trunc {
            return false;
        }
        let len = self.coeffs.len().max(other.coeffs.len());
        (0..len).all(|k| {
            let a = self.coeffs.get(k).cloned().unwrap_or_else(S::zero);
            let b = other.coeffs.get(k).cloned().unwrap_or_else(S::zero);
            a == b
        })
    }
}

impl<S: Scalar> fmt::Display for QSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if wrote {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "{}", c)?,
                1 => write!(f, "({})*q", c)?,
                _ => write!(f, "({})*q^{}", c, k)?,
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl<S: Scalar> Add for QSeries<S> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl<S: Scalar> Sub for QSeries<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl<S: Scalar> Neg for QSeries<S> {
    type Output = Self;
    fn neg(self) -> Self {
        self.neg_ref()
    }
}

impl<S: Scalar> Mul for QSeries<S> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<S: Scalar> Zero for QSeries<S> {
    fn zero() -> Self {
        QSeries {
            coeffs: Vec::new(),
            trunc: usize::MAX,
        }
    }
    fn is_zero(&self) -> bool {
        self.is_zero_series()
    }
}

impl<S: Scalar> One for QSeries<S> {
    fn one() -> Self {
        QSeries {
            coeffs: vec![S::one()],
            trunc: usize::MAX,
        }
    }
    fn is_one(&self) -> bool {
        !self.coeffs.is_empty()
            && self.coeffs[0].is_one()
            && self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }
}

impl<S: Scalar> Scalar for QSeries<S> {
    fn from_int(n: i64) -> Self {
        QSeries {
            coeffs: vec![S::from_int(n)],
            trunc: usize::MAX,
        }
    }

    fn inv(&self) -> Option<Self> {
        self.invert().ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Int, Mod, Rat};

    fn q_rat(coeffs: &[(i64, i64)], trunc: usize) -> QSeries<Rat> {
        QSeries::from_coeffs(coeffs.iter().map(|&(n, d)| rat(n, d)).collect(), trunc)
    }

    #[test]
    fn difference_of_squares() {
        // (1 + q)(1 - q) at trunc 3 -> 1 - q^2
        let a = QSeries::from_coeffs(vec![int(1), int(1)], 3);
        let b = QSeries::from_coeffs(vec![int(1), int(-1)], 3);
        let prod = a.mul_ref(&b);
        assert_eq!(prod, QSeries::from_coeffs(vec![int(1), int(0), int(-1)], 3));
    }

    #[test]
    fn geometric_series_inverse() {
        // 1 - q at trunc 4 -> 1 + q + q^2 + q^3
        let a = QSeries::from_coeffs(vec![int(1), int(-1)], 4);
        let inv = a.invert().unwrap();
        assert_eq!(
            inv,
            QSeries::from_coeffs(vec![int(1), int(1), int(1), int(1)], 4)
        );
        assert!(a.mul_ref(&inv).is_one());
    }

    #[test]
    fn invert_requires_unit_constant() {
        let a = QSeries::from_coeffs(vec![int(2), int(1)], 4);
        assert_eq!(a.invert(), Err(SeriesError::NonUnitConstant));
        // 2 is a unit mod 9
        let b = QSeries::from_coeffs(vec![Mod::new(2, 9), Mod::new(1, 9)], 4);
        let inv = b.invert().unwrap();
        assert!(b.mul_ref(&inv).is_one());
    }

    #[test]
    fn exp_log_expansions() {
        // exp(q) trunc 4 -> 1 + q + q^2/2 + q^3/6
        let x = QSeries::monomial(rat(1, 1), 1, 4);
        let e = x.exp().unwrap();
        assert_eq!(e, q_rat(&[(1, 1), (1, 1), (1, 2), (1, 6)], 4));
        // log(1 + q) trunc 4 -> q - q^2/2 + q^3/3
        let one_plus = QSeries::from_coeffs(vec![rat(1, 1), rat(1, 1)], 4);
        let l = one_plus.log().unwrap();
        assert_eq!(l, q_rat(&[(0, 1), (1, 1), (-1, 2), (1, 3)], 4));
        // round trip
        assert_eq!(l.exp().unwrap(), one_plus);
    }

    #[test]
    fn exp_rejects_integer_ring() {
        let x: QSeries<Int> = QSeries::monomial(int(1), 1, 4);
        assert_eq!(x.exp(), Err(SeriesError::NonInvertibleInteger(2)));
    }

    #[test]
    fn compose_identity_and_square() {
        let f = QSeries::monomial(rat(1, 1), 2, 5); // z^2
        let g = QSeries::from_coeffs(vec![rat(0, 1), rat(1, 1), rat(1, 1)], 5); // z + z^2
        let c = f.compose(&g).unwrap();
        // (z + z^2)^2 = z^2 + 2 z^3 + z^4
        assert_eq!(c, q_rat(&[(0, 1), (0, 1), (1, 1), (2, 1), (1, 1)], 5));
    }

    #[test]
    fn neutral_constants_adopt_truncation() {
        let one: QSeries<Rat> = QSeries::one();
        let f = q_rat(&[(1, 1), (3, 1)], 6);
        assert_eq!(one.mul_ref(&f), f);
        assert_eq!(f.trunc(), one.mul_ref(&f).trunc());
        let two: QSeries<Rat> = QSeries::from_int(2);
        assert_eq!(two.mul_ref(&f).coeff(1), rat(6, 1));
    }

    #[test]
    fn shift_extends_truncation() {
        let f = q_rat(&[(5, 1)], 3);
        let shifted = f.shift(2);
        assert_eq!(shifted.trunc(), 5);
        assert_eq!(shifted.coeff(2), rat(5, 1));
    }
}
