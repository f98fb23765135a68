//! Sparse truncated power series in several variables.
//!
//! Monomials are truncated by *total* degree: a `MultiSeries` with
//! truncation D stores only exponent vectors of total degree < D, and
//! multiplication discards everything at or above D. Keys are ordered
//! graded-lexicographically (total degree first, then the exponent vector
//! read left to right), so "the earliest offending monomial" of a failed
//! identity is the first mismatch in iteration order.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;


use crate::error::SeriesError;
use crate::qseries::QSeries;
use crate::scalar::Scalar;

/// An ordered set of variable names, cheap to clone and compared by content.
#[derive(Clone, Debug, Eq)]
pub struct Vars(Arc<[String]>);

impl Vars {
    pub fn new(names: &[&str]) -> Self {
        Vars(names.iter().map(|s| s.to_string()).collect())
    }

    pub fn from_names(names: Vec<String>) -> Self {
        Vars(names.into())
    }

    pub fn arity(&self) -> usize {
        self.0.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.0[i]
    }

    pub fn names(&self) -> &[String] {
        &self.0
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.0.iter().position(|n| n == name)
    }
}

impl PartialEq for Vars {
    fn eq(&self, other: &Self) -> bool {
        self.0 == other.0
    }
}

/// An exponent vector, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct Expo(pub Vec<u32>);

impl Expo {
    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn zero(arity: usize) -> Self {
        Expo(vec![0; arity])
    }

    pub fn unit(arity: usize, i: usize) -> Self {
        let mut e = vec![0; arity];
        e[i] = 1;
        Expo(e)
    }

    fn add(&self, other: &Expo) -> Expo {
        Expo(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    /// Render against a variable set, e.g. `x^2*y`.
    pub fn display(&self, vars: &Vars) -> String {
        let mut parts = Vec::new();
        for (i, &e) in self.0.iter().enumerate() {
            match e {
                0 => {}
                1 => parts.push(vars.name(i).to_string()),
                _ => parts.push(format!("{}^{}", vars.name(i), e)),
            }
        }
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }
}

impl Ord for Expo {
    /// Graded-lexicographic: lower total degree first; within a degree,
    /// higher powers of earlier variables first (x^2, xy, y^2, ...).
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for Expo {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug)]
pub struct MultiSeries<S: Scalar> {
    vars: Vars,
    trunc: usize,
    coeffs: BTreeMap<Expo, S>,
}

impl<S: Scalar> MultiSeries<S> {
    pub fn zero(vars: Vars, trunc: usize) -> Self {
        MultiSeries {
            vars,
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: Vars, c: S, trunc: usize) -> Self {
        let mut s = Self::zero(vars, trunc);
        s.set_coeff(Expo::zero(s.vars.arity()), c);
        s
    }

    pub fn one(vars: Vars, trunc: usize) -> Self {
        Self::constant(vars.clone(), S::one(), trunc)
    }

    /// The variable `x_i` as a series.
    pub fn var(vars: Vars, i: usize, trunc: usize) -> Self {
        let mut s = Self::zero(vars, trunc);
        s.set_coeff(Expo::unit(s.vars.arity(), i), S::one());
        s
    }

    pub fn var_named(vars: &Vars, name: &str, trunc: usize) -> Self {
        let i = vars
            .index_of(name)
            .unwrap_or_else(|| panic!("unknown variable {}", name));
        Self::var(vars.clone(), i, trunc)
    }

    pub fn from_terms(vars: Vars, trunc: usize, terms: Vec<(Expo, S)>) -> Self {
        let mut s = Self::zero(vars, trunc);
        for (e, c) in terms {
            let cur = s.coeff(&e);
            s.set_coeff(e, cur + c);
        }
        s
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn trunc(&self) -> usize {
        self.trunc
    }

    pub fn coeff(&self, e: &Expo) -> S {
        self.coeffs.get(e).cloned().unwrap_or_else(S::zero)
    }

    pub fn set_coeff(&mut self, e: Expo, c: S) {
        assert_eq!(e.0.len(), self.vars.arity(), "exponent arity mismatch");
        if (e.degree() as usize) >= self.trunc {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&e);
        } else {
            self.coeffs.insert(e, c);
        }
    }

    /// Nonzero terms in graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&Expo, &S)> {
        self.coeffs.iter()
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one_series(&self) -> bool {
        self.coeffs.len() == 1 && self.constant_term().is_one()
    }

    pub fn constant_term(&self) -> S {
        self.coeff(&Expo::zero(self.vars.arity()))
    }

    pub fn truncate_to(&self, trunc: usize) -> Self {
        let mut s = Self::zero(self.vars.clone(), trunc.min(self.trunc));
        for (e, c) in &self.coeffs {
            s.set_coeff(e.clone(), c.clone());
        }
        s
    }

    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> MultiSeries<T> {
        let mut s = MultiSeries::zero(self.vars.clone(), self.trunc);
        for (e, c) in &self.coeffs {
            s.set_coeff(e.clone(), f(c));
        }
        s
    }

    fn check_compatible(&self, rhs: &Self) {
        assert_eq!(
            self.vars, rhs.vars,
            "variable-set mismatch: {:?} vs {:?}",
            self.vars, rhs.vars
        );
    }

    pub fn add(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        let trunc = self.trunc.min(rhs.trunc);
        let mut s = Self::zero(self.vars.clone(), trunc);
        for (e, c) in self.coeffs.iter().chain(rhs.coeffs.iter()) {
            let cur = s.coeff(e);
            s.set_coeff(e.clone(), cur + c.clone());
        }
        s
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        let mut s = Self::zero(self.vars.clone(), self.trunc);
        for (e, c) in &self.coeffs {
            s.set_coeff(e.clone(), -c.clone());
        }
        s
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut s = Self::zero(self.vars.clone(), self.trunc);
        for (e, a) in &self.coeffs {
            s.set_coeff(e.clone(), a.clone() * c.clone());
        }
        s
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        self.check_compatible(rhs);
        let trunc = self.trunc.min(rhs.trunc);
        let mut acc: BTreeMap<Expo, S> = BTreeMap::new();
        for (ea, ca) in &self.coeffs {
            let da = ea.degree() as usize;
            if da >= trunc {
                continue;
            }
            for (eb, cb) in &rhs.coeffs {
                if da + eb.degree() as usize >= trunc {
                    continue;
                }
                let e = ea.add(eb);
                let term = ca.clone() * cb.clone();
                match acc.get_mut(&e) {
                    Some(cur) => *cur = cur.clone() + term,
                    None => {
                        acc.insert(e, term);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        MultiSeries {
            vars: self.vars.clone(),
            trunc,
            coeffs: acc,
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut result = Self::one(self.vars.clone(), self.trunc);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Series inverse; requires a unit constant term.
    pub fn invert(&self) -> Result<Self, SeriesError> {
        let c0 = self.constant_term();
        let c0_inv = c0.inv().ok_or(SeriesError::NonUnitConstant)?;
        // f = c0 (1 + h) with val(h) >= 1; 1/f = c0^-1 sum (-h)^k.
        let mut h = self.scale(&c0_inv);
        h.set_coeff(Expo::zero(self.vars.arity()), S::zero());
        let neg_h = h.neg();
        let mut acc = Self::one(self.vars.clone(), self.trunc);
        let mut pw = Self::one(self.vars.clone(), self.trunc);
        for _ in 1..self.trunc {
            pw = pw.mul(&neg_h);
            if pw.is_zero_series() {
                break;
            }
            acc = acc.add(&pw);
        }
        Ok(acc.scale(&c0_inv))
    }

    /// Formal composition: replace each variable by the assigned series.
    ///
    /// Every assigned series must have zero constant term and they must all
    /// share a variable set; the result is truncated at the minimum bound.
    pub fn substitute(&self, assignment: &[MultiSeries<S>]) -> Result<MultiSeries<S>, SeriesError> {
        assert_eq!(
            assignment.len(),
            self.vars.arity(),
            "assignment must cover every variable"
        );
        let target = assignment
            .first()
            .map(|g| g.vars.clone())
            .unwrap_or_else(|| self.vars.clone());
        let mut trunc = self.trunc;
        for g in assignment {
            assert_eq!(g.vars, target, "assigned series share a variable set");
            if !g.constant_term().is_zero() {
                return Err(SeriesError::ConstantTermNotZero);
            }
            trunc = trunc.min(g.trunc);
        }
        // Cache powers of each assigned series as they are needed.
        let mut powers: Vec<Vec<MultiSeries<S>>> = assignment
            .iter()
            .map(|g| vec![Self::one(target.clone(), trunc), g.truncate_to(trunc)])
            .collect();
        let mut out = Self::zero(target.clone(), trunc);
        for (e, c) in &self.coeffs {
            if (e.degree() as usize) >= trunc {
                continue;
            }
            let mut term = Self::constant(target.clone(), c.clone(), trunc);
            for (i, &ei) in e.0.iter().enumerate() {
                if ei == 0 {
                    continue;
                }
                while powers[i].len() <= ei as usize {
                    let next = powers[i].last().unwrap().mul(&powers[i][1]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][ei as usize]);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Reinterpret this series inside a larger variable set: variable `i`
    /// becomes `positions[i]` of `target`.
    pub fn embed(&self, target: &Vars, positions: &[usize]) -> MultiSeries<S> {
        assert_eq!(positions.len(), self.vars.arity());
        let mut s = MultiSeries::zero(target.clone(), self.trunc);
        for (e, c) in &self.coeffs {
            let mut exp = vec![0u32; target.arity()];
            for (i, &ei) in e.0.iter().enumerate() {
                exp[positions[i]] += ei;
            }
            let key = Expo(exp);
            let cur = s.coeff(&key);
            s.set_coeff(key, cur + c.clone());
        }
        s
    }

    /// Permute variables: variable `i` becomes variable `perm[i]`.
    pub fn permute_vars(&self, perm: &[usize]) -> MultiSeries<S> {
        self.embed(&self.vars.clone(), perm)
    }

    /// Substitute zero for variable `i` (keeping the variable set).
    pub fn set_var_zero(&self, i: usize) -> MultiSeries<S> {
        let mut s = Self::zero(self.vars.clone(), self.trunc);
        for (e, c) in &self.coeffs {
            if e.0[i] == 0 {
                s.set_coeff(e.clone(), c.clone());
            }
        }
        s
    }

    /// Partial derivative with respect to variable `i`.
    pub fn derivative(&self, i: usize) -> MultiSeries<S> {
        let mut s = Self::zero(self.vars.clone(), self.trunc.saturating_sub(1).max(1));
        for (e, c) in &self.coeffs {
            if e.0[i] == 0 {
                continue;
            }
            let mut exp = e.0.clone();
            exp[i] -= 1;
            let key = Expo(exp);
            let cur = s.coeff(&key);
            s.set_coeff(key, cur + c.clone() * S::from_int(e.0[i] as i64));
        }
        s
    }

    /// Formal exponential of a series with zero constant term.
    pub fn exp(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_zero() {
            return Err(SeriesError::ConstantTermNotZero);
        }
        let mut acc = Self::one(self.vars.clone(), self.trunc);
        let mut pw = Self::one(self.vars.clone(), self.trunc);
        let mut inv_fact = S::one();
        for k in 1..self.trunc {
            pw = pw.mul(self);
            if pw.is_zero_series() {
                break;
            }
            let inv_k = S::from_int(k as i64)
                .inv()
                .ok_or(SeriesError::NonInvertibleInteger(k as i64))?;
            inv_fact = inv_fact * inv_k;
            acc = acc.add(&pw.scale(&inv_fact));
        }
        Ok(acc)
    }

    /// Formal logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self, SeriesError> {
        if !self.constant_term().is_one() {
            return Err(SeriesError::ConstantTermNotOne);
        }
        let mut h = self.clone();
        h.set_coeff(Expo::zero(self.vars.arity()), S::zero());
        let mut acc = Self::zero(self.vars.clone(), self.trunc);
        let mut pw = Self::one(self.vars.clone(), self.trunc);
        let mut sign = S::one();
        for k in 1..self.trunc {
            pw = pw.mul(&h);
            if pw.is_zero_series() {
                break;
            }
            let inv_k = S::from_int(k as i64)
                .inv()
                .ok_or(SeriesError::NonInvertibleInteger(k as i64))?;
            acc = acc.add(&pw.scale(&(sign.clone() * inv_k)));
            sign = -sign;
        }
        Ok(acc)
    }

    /// Order of vanishing along {x_i = 0}: the minimal exponent of `x_i`
    /// over the stored monomials.
    pub fn valuation_along_var(&self, i: usize) -> Result<usize, SeriesError> {
        if self.is_zero_series() {
            return Err(SeriesError::ValuationUndecidable);
        }
        Ok(self
            .coeffs
            .keys()
            .map(|e| e.0[i] as usize)
            .min()
            .expect("nonzero series has a monomial"))
    }

    /// Collapse to a one-variable series in variable `i`.
    /// Panics if any other variable occurs.
    pub fn to_qseries_in(&self, i: usize) -> QSeries<S> {
        let mut coeffs = vec![S::zero(); self.trunc];
        for (e, c) in &self.coeffs {
            for (j, &ej) in e.0.iter().enumerate() {
                assert!(
                    j == i || ej == 0,
                    "series involves variable {} besides {}",
                    self.vars.name(j),
                    self.vars.name(i)
                );
            }
            coeffs[e.0[i] as usize] = c.clone();
        }
        QSeries::from_coeffs(coeffs, self.trunc)
    }

    /// Lift a one-variable series into variable `i` of a variable set.
    pub fn from_qseries(f: &QSeries<S>, vars: Vars, i: usize, trunc: usize) -> MultiSeries<S> {
        let trunc = trunc.min(f.trunc());
        let mut s = MultiSeries::zero(vars, trunc);
        for (k, c) in f.coeffs().iter().enumerate() {
            if k >= trunc {
                break;
            }
            if !c.is_zero() {
                let mut e = vec![0u32; s.vars.arity()];
                e[i] = k as u32;
                s.set_coeff(Expo(e), c.clone());
            }
        }
        s
    }

    /// First monomial (graded-lex) where the two series differ, with both
    /// coefficients, or None if they agree up to the common truncation.
    pub fn first_difference(&self, rhs: &Self) -> Option<(Expo, S, S)> {
        self.check_compatible(rhs);
        let trunc = self.trunc.min(rhs.trunc);
        let mut keys: Vec<&Expo> = self.coeffs.keys().chain(rhs.coeffs.keys()).collect();
        keys.sort();
        keys.dedup();
        for e in keys {
            if (e.degree() as usize) >= trunc {
                continue;
            }
            let a = self.coeff(e);
            let b = rhs.coeff(e);
            if a != b {
                return Some((e.clone(), a, b));
            }
        }
        None
    }
}

/// Evaluate a one-variable series at a multivariate argument with zero
/// constant term.
pub fn qseries_at<S: Scalar>(
    f: &QSeries<S>,
    arg: &MultiSeries<S>,
) -> Result<MultiSeries<S>, SeriesError> {
    if !arg.constant_term().is_zero() {
        return Err(SeriesError::ConstantTermNotZero);
    }
    let trunc = if f.trunc() == usize::MAX {
        arg.trunc()
    } else {
        f.trunc().min(arg.trunc())
    };
    let mut acc = MultiSeries::zero(arg.vars().clone(), trunc);
    let top = f.coeffs().len().min(trunc);
    for k in (0..top).rev() {
        acc = acc.mul(arg);
        let c = f.coeff(k);
        if !c.is_zero() {
            acc = acc.add(&MultiSeries::constant(arg.vars().clone(), c, trunc));
        }
    }
    Ok(acc)
}

impl<S: Scalar> PartialEq for MultiSeries<S> {
    /// Equality of the stored data: same variables, truncation, and
    /// coefficients (omitted zeros ignored).
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.trunc == other.trunc && self.coeffs == other.coeffs
    }
}

impl<S: Scalar> fmt::Display for MultiSeries<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (e, c) in &self.coeffs {
            if wrote {
                write!(f, " + ")?;
            }
            if e.degree() == 0 {
                write!(f, "{}", c)?;
            } else {
                write!(f, "({})*{}", c, e.display(&self.vars))?;
            }
            wrote = true;
        }
        if !wrote {
            write!(f, "0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Int, Rat};

    fn xy() -> Vars {
        Vars::new(&["x", "y"])
    }

    #[test]
    fn square_of_sum() {
        // (x + y)^2 at total-degree trunc 3 -> x^2 + 2xy + y^2
        let v = xy();
        let s = MultiSeries::<Int>::var(v.clone(), 0, 3).add(&MultiSeries::var(v.clone(), 1, 3));
        let sq = s.mul(&s);
        assert_eq!(sq.coeff(&Expo(vec![2, 0])), int(1));
        assert_eq!(sq.coeff(&Expo(vec![1, 1])), int(2));
        assert_eq!(sq.coeff(&Expo(vec![0, 2])), int(1));
        assert_eq!(sq.terms().count(), 3);
    }

    #[test]
    fn invert_two_variables() {
        // 1 + x + y at trunc 2 -> 1 - x - y
        let v = xy();
        let f = MultiSeries::<Rat>::one(v.clone(), 2)
            .add(&MultiSeries::var(v.clone(), 0, 2))
            .add(&MultiSeries::var(v.clone(), 1, 2));
        let inv = f.invert().unwrap();
        assert_eq!(inv.coeff(&Expo(vec![0, 0])), rat(1, 1));
        assert_eq!(inv.coeff(&Expo(vec![1, 0])), rat(-1, 1));
        assert_eq!(inv.coeff(&Expo(vec![0, 1])), rat(-1, 1));
        assert!(f.mul(&inv).sub(&MultiSeries::one(v, 2)).is_zero_series());
    }

    #[test]
    fn substitute_square() {
        // f = x^2, x -> y + z, trunc 3 gives y^2 + 2yz + z^2
        let vx = Vars::new(&["x"]);
        let vyz = Vars::new(&["y", "z"]);
        let f = MultiSeries::<Int>::var(vx, 0, 3).pow(2);
        let g = MultiSeries::<Int>::var(vyz.clone(), 0, 3)
            .add(&MultiSeries::var(vyz.clone(), 1, 3));
        let h = f.substitute(&[g]).unwrap();
        assert_eq!(h.coeff(&Expo(vec![2, 0])), int(1));
        assert_eq!(h.coeff(&Expo(vec![1, 1])), int(2));
        assert_eq!(h.coeff(&Expo(vec![0, 2])), int(1));
    }

    #[test]
    fn substitute_identity() {
        // f = x, x -> x + y + xy returns the assigned series
        let vx = Vars::new(&["x"]);
        let v = xy();
        let f = MultiSeries::<Int>::var(vx, 0, 4);
        let g = MultiSeries::<Int>::var(v.clone(), 0, 4)
            .add(&MultiSeries::var(v.clone(), 1, 4))
            .add(&MultiSeries::from_terms(
                v.clone(),
                4,
                vec![(Expo(vec![1, 1]), int(1))],
            ));
        assert_eq!(f.substitute(&[g.clone()]).unwrap(), g);
    }

    #[test]
    fn substitute_rejects_constant_term() {
        let vx = Vars::new(&["x"]);
        let f = MultiSeries::<Int>::var(vx.clone(), 0, 4);
        let g = MultiSeries::<Int>::one(vx, 4);
        assert_eq!(
            f.substitute(&[g]).unwrap_err(),
            SeriesError::ConstantTermNotZero
        );
    }

    #[test]
    fn exp_log_round_trip() {
        // exp(log(1 + x + y)) = 1 + x + y to trunc 5
        let v = xy();
        let f = MultiSeries::<Rat>::one(v.clone(), 5)
            .add(&MultiSeries::var(v.clone(), 0, 5))
            .add(&MultiSeries::var(v.clone(), 1, 5));
        let round = f.log().unwrap().exp().unwrap();
        assert_eq!(round, f);
    }

    #[test]
    fn valuation_along_variables() {
        // x^2 y: valuation 2 along {x = 0}, 1 along {y = 0}
        let v = xy();
        let f = MultiSeries::<Int>::from_terms(v.clone(), 5, vec![(Expo(vec![2, 1]), int(1))]);
        assert_eq!(f.valuation_along_var(0), Ok(2));
        assert_eq!(f.valuation_along_var(1), Ok(1));
        let z = MultiSeries::<Int>::zero(v, 5);
        assert_eq!(
            z.valuation_along_var(0),
            Err(SeriesError::ValuationUndecidable)
        );
    }

    #[test]
    fn graded_lex_order() {
        let mut keys = vec![
            Expo(vec![2, 0, 0]),
            Expo(vec![0, 0, 1]),
            Expo(vec![1, 1, 0]),
            Expo(vec![0, 2, 0]),
        ];
        keys.sort();
        assert_eq!(
            keys,
            vec![
                Expo(vec![0, 0, 1]),
                Expo(vec![2, 0, 0]),
                Expo(vec![1, 1, 0]),
                Expo(vec![0, 2, 0]),
            ]
        );
    }

    #[test]
    fn truncation_coherence() {
        // truncate-then-multiply equals multiply-then-truncate
        let v = xy();
        let f = MultiSeries::<Int>::from_terms(
            v.clone(),
            6,
            vec![
                (Expo(vec![0, 0]), int(1)),
                (Expo(vec![1, 0]), int(2)),
                (Expo(vec![2, 1]), int(-3)),
            ],
        );
        let g = MultiSeries::<Int>::from_terms(
            v.clone(),
            6,
            vec![(Expo(vec![0, 1]), int(5)), (Expo(vec![1, 1]), int(7))],
        );
        let a = f.truncate_to(4).mul(&g.truncate_to(4));
        let b = f.mul(&g).truncate_to(4);
        assert_eq!(a, b);
    }
}
