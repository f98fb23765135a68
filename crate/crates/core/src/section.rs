//! Sections with divisor bookkeeping.
//!
//! A `LaurentUnit` is (product of divisor factors)^vals times a unit
//! series: the divisor labels name loci of the form {x_{i1} + .. + x_{im}
//! = 0} (sums taken in a formal group; for the cube sections the additive
//! coordinate is in force and sums are literal). Multiplying sections adds
//! valuations and multiplies unit parts, so identities between products of
//! sections can be checked without ever dividing by a non-unit.

use std::collections::BTreeMap;
use std::collections::BTreeSet;
use std::fmt;


use crate::error::SeriesError;
use crate::fgl::FormalGroupLaw;
use crate::multiseries::{MultiSeries, Vars};
use crate::scalar::Scalar;

/// A divisor locus: the vanishing set of a sum of distinct variables,
/// identified by their indices.
pub type Locus = BTreeSet<usize>;

#[derive(Clone, Debug, PartialEq)]
pub struct LaurentUnit<S: Scalar> {
    divisors: BTreeMap<Locus, i64>,
    unit: MultiSeries<S>,
}

impl<S: Scalar> LaurentUnit<S> {
    pub fn new(divisors: BTreeMap<Locus, i64>, unit: MultiSeries<S>) -> Self {
        assert!(
            unit.constant_term().is_unit(),
            "the unit part needs an invertible constant term"
        );
        let divisors = divisors.into_iter().filter(|(_, v)| *v != 0).collect();
        LaurentUnit { divisors, unit }
    }

    pub fn from_unit(unit: MultiSeries<S>) -> Self {
        Self::new(BTreeMap::new(), unit)
    }

    pub fn unit(&self) -> &MultiSeries<S> {
        &self.unit
    }

    pub fn divisors(&self) -> &BTreeMap<Locus, i64> {
        &self.divisors
    }

    pub fn valuation(&self, locus: &Locus) -> i64 {
        self.divisors.get(locus).copied().unwrap_or(0)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut divisors = self.divisors.clone();
        for (locus, v) in &rhs.divisors {
            *divisors.entry(locus.clone()).or_insert(0) += v;
        }
        divisors.retain(|_, v| *v != 0);
        LaurentUnit {
            divisors,
            unit: self.unit.mul(&rhs.unit),
        }
    }

    pub fn invert(&self) -> Result<Self, SeriesError> {
        Ok(LaurentUnit {
            divisors: self.divisors.iter().map(|(l, v)| (l.clone(), -v)).collect(),
            unit: self.unit.invert()?,
        })
    }

    /// Mutate one coefficient of the unit part (testing hook).
    pub fn bump_unit_coeff(&mut self, e: crate::multiseries::Expo, delta: S) {
        let cur = self.unit.coeff(&e);
        self.unit.set_coeff(e, cur + delta);
    }
}

impl<S: Scalar> fmt::Display for LaurentUnit<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (locus, v) in &self.divisors {
            let names: Vec<&str> = locus
                .iter()
                .map(|&i| self.unit.vars().name(i))
                .collect();
            write!(f, "{{{}}}^{} * ", names.join("+"), v)?;
        }
        write!(f, "({})", self.unit)
    }
}

/// Integer multiplicities on the eight labelled divisors of the cube:
/// {x+y+z}, {x}, {y}, {z}, {x+y}, {x+z}, {y+z}, and the constant slot
/// (carried for shape, always 0 for computed sections).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DivisorVector(pub [i64; 8]);

impl DivisorVector {
    pub const LABELS: [&'static str; 8] =
        ["x+y+z", "x", "y", "z", "x+y", "x+z", "y+z", "e"];

    /// The seven non-constant loci, in slot order, as variable-index sets.
    pub fn cube_loci() -> [Locus; 7] {
        [
            BTreeSet::from([0, 1, 2]),
            BTreeSet::from([0]),
            BTreeSet::from([1]),
            BTreeSet::from([2]),
            BTreeSet::from([0, 1]),
            BTreeSet::from([0, 2]),
            BTreeSet::from([1, 2]),
        ]
    }
}

impl fmt::Display for DivisorVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = Self::LABELS
            .iter()
            .zip(self.0.iter())
            .map(|(l, v)| format!("{}: {:+}", l, v))
            .collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// Order of vanishing of a series along {x_{i1} +_G ... +_G x_{im} = 0}.
///
/// For a single variable this is the minimal exponent. Otherwise change
/// coordinates by trading the last locus variable for w with
/// x_last = F(w, i(x_{i1} +_G ... +_G x_{i(m-1)})), which turns the locus
/// into {w = 0}, and read off the w-adic order.
pub fn valuation_along_locus<S: Scalar>(
    series: &MultiSeries<S>,
    fgl: &FormalGroupLaw<S>,
    locus: &Locus,
) -> Result<usize, SeriesError> {
    assert!(!locus.is_empty(), "a locus names at least one variable");
    if series.is_zero_series() {
        return Err(SeriesError::ValuationUndecidable);
    }
    let vars = series.vars();
    if locus.len() == 1 {
        return series.valuation_along_var(*locus.iter().next().unwrap());
    }
    // Extended variable set with w appended.
    let mut names: Vec<String> = vars.names().to_vec();
    names.push("w".to_string());
    let target = Vars::from_names(names);
    let w_index = target.arity() - 1;
    let trunc = series.trunc().min(fgl.trunc());

    let locus_vars: Vec<usize> = locus.iter().copied().collect();
    let (last, rest) = locus_vars.split_last().expect("nonempty locus");
    let rest_sum = fgl.sum_of_vars(&target, rest, trunc);
    let w_var = MultiSeries::<S>::var(target.clone(), w_index, trunc);
    let replacement = fgl.plug(&w_var, &fgl.neg_of(&rest_sum));

    let assignment: Vec<MultiSeries<S>> = (0..vars.arity())
        .map(|i| {
            if i == *last {
                replacement.clone()
            } else {
                MultiSeries::<S>::var(target.clone(), i, trunc)
            }
        })
        .collect();
    let changed = series.substitute(&assignment)?;
    if changed.is_zero_series() {
        return Err(SeriesError::ValuationUndecidable);
    }
    changed.valuation_along_var(w_index)
}

/// Valuation of a section along a locus: stored divisor multiplicity plus
/// the vanishing order of the unit part (zero for genuine units, but
/// computed honestly).
pub fn section_valuation<S: Scalar>(
    s: &LaurentUnit<S>,
    fgl: &FormalGroupLaw<S>,
    locus: &Locus,
) -> Result<i64, SeriesError> {
    let unit_val = valuation_along_locus(s.unit(), fgl, locus)?;
    Ok(s.valuation(locus) + unit_val as i64)
}
