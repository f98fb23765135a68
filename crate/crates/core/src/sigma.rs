//! The sigma function of the Tate curve and the cube section.
//!
//! sigma(z) = (e^{z/2} - e^{-z/2}) prod_{n>=1} (1 - q^n e^z)(1 - q^n e^-z)
//!            / (1 - q^n)^2
//!
//! expanded as a z-series whose coefficients are exact rational
//! q-expansions. It is odd, sigma(z) = z + O(z^2), and
//! log(z/sigma(z)) = sum_{k>=2 even} 2 G_k z^k / k! with
//! G_k = -B_k/2k + sum sigma_{k-1}(n) q^n, which is how the Witten-genus
//! characteristic series is normalized downstream.
//!
//! The cube section
//!
//!   s(x,y,z) = sigma(x+y+z) sigma(x) sigma(y) sigma(z)
//!              / ( sigma(x+y) sigma(x+z) sigma(y+z) )
//!
//! is carried as a `LaurentUnit` in the additive coordinate: divisor
//! valuations (+1,+1,+1,+1,-1,-1,-1) on the seven loci times a unit
//! series with constant term 1. Rigidity, symmetry, and the 2-cocycle
//! identity are verified by cross-multiplication of unit parts.

use std::collections::BTreeMap;
use std::collections::BTreeSet;

use num::traits::One;

use crate::error::SeriesError;
use crate::fgl::{Check, FormalGroupLaw, StandardLaw};
use crate::multiseries::{qseries_at, MultiSeries, Vars};
use crate::qseries::QSeries;
use crate::scalar::{rat, Rat};
use crate::section::{section_valuation, DivisorVector, LaurentUnit, Locus};

/// z-series with q-expansion coefficients.
pub type ZQ = QSeries<QSeries<Rat>>;

#[derive(Clone, Debug, PartialEq)]
pub struct SigmaSeries {
    inner: ZQ,
    trunc_q: usize,
}

impl SigmaSeries {
    pub fn inner(&self) -> &ZQ {
        &self.inner
    }

    pub fn trunc_z(&self) -> usize {
        self.inner.trunc()
    }

    pub fn trunc_q(&self) -> usize {
        self.trunc_q
    }

    /// Coefficient of z^k as a q-expansion.
    pub fn z_coeff(&self, k: usize) -> QSeries<Rat> {
        self.inner.coeff(k)
    }

    /// The q^0 shadow: a plain z-series (2 sinh(z/2) for the genuine sigma).
    pub fn q0(&self) -> QSeries<Rat> {
        self.inner.map(|c| c.coeff(0))
    }

    /// sigma(z)/z, a unit with constant term 1.
    pub fn unit_part(&self) -> ZQ {
        let trunc = self.trunc_z() - 1;
        QSeries::from_fn(trunc, |k| self.inner.coeff(k + 1))
    }

    /// log(z/sigma(z)); only even z-degrees >= 2 survive.
    pub fn log_z_over_sigma(&self) -> Result<ZQ, SeriesError> {
        Ok(self.unit_part().log()?.neg_ref())
    }

    /// Mutate one coefficient (testing hook).
    pub fn bump(&mut self, z_deg: usize, q_deg: usize, delta: Rat) {
        let old = self.inner.coeff(z_deg);
        let bumped = old.coeff(q_deg) + delta;
        let new_layer = QSeries::from_fn(old.trunc(), |k| {
            if k == q_deg {
                bumped.clone()
            } else {
                old.coeff(k)
            }
        });
        let prev = self.inner.clone();
        self.inner = QSeries::from_fn(prev.trunc(), |k| {
            if k == z_deg {
                new_layer.clone()
            } else {
                prev.coeff(k)
            }
        });
    }
}

/// Expand sigma to the given z- and q-truncations.
pub fn sigma_series(trunc_z: usize, trunc_q: usize) -> SigmaSeries {
    assert!(trunc_z >= 2 && trunc_q >= 1);
    let qc = |c: Rat| QSeries::constant(c, trunc_q);

    // Factorials as rationals, once.
    let mut inv_factorial = vec![rat(1, 1)];
    for k in 1..trunc_z {
        let prev = inv_factorial[k - 1].clone();
        inv_factorial.push(prev * rat(1, k as i64));
    }

    // e^{z/2} - e^{-z/2}: odd part of e^{z/2} doubled.
    let mut acc: ZQ = QSeries::from_fn(trunc_z, |k| {
        if k % 2 == 1 {
            let half_pow = Rat::from_integer(1.into())
                / Rat::from_integer(num::BigInt::from(2).pow(k as u32 - 1));
            qc(half_pow * inv_factorial[k].clone())
        } else {
            QSeries::zero_trunc(trunc_q)
        }
    });

    for n in 1..trunc_q {
        // (1 - q^n e^z) and (1 - q^n e^-z)
        let plus: ZQ = QSeries::from_fn(trunc_z, |k| {
            let mut c = QSeries::monomial(-inv_factorial[k].clone(), n, trunc_q);
            if k == 0 {
                c = c.add_ref(&QSeries::one_trunc(trunc_q));
            }
            c
        });
        let minus: ZQ = QSeries::from_fn(trunc_z, |k| {
            let sign = if k % 2 == 0 { rat(-1, 1) } else { rat(1, 1) };
            let mut c = QSeries::monomial(sign * inv_factorial[k].clone(), n, trunc_q);
            if k == 0 {
                c = c.add_ref(&QSeries::one_trunc(trunc_q));
            }
            c
        });
        // (1 - q^n)^-2, z-free
        let unit = QSeries::from_fn(trunc_q, |k| {
            if k == 0 {
                rat(1, 1)
            } else if k == n {
                rat(-1, 1)
            } else {
                rat(0, 1)
            }
        });
        let norm = unit.invert().expect("1 - q^n is a unit").pow(2);
        acc = acc
            .mul_ref(&plus)
            .mul_ref(&minus)
            .mul_ref(&QSeries::constant(norm, trunc_z));
    }

    SigmaSeries {
        inner: acc,
        trunc_q,
    }
}

fn cube_vars() -> Vars {
    Vars::new(&["x", "y", "z"])
}

/// The canonical cube section in the additive coordinate. The unit part
/// has total degree < trunc_z; the divisor valuations are
/// (+1,+1,+1,+1,-1,-1,-1) on {x+y+z}, {x}, {y}, {z}, {x+y}, {x+z}, {y+z}.
pub fn cube_section(trunc_z: usize, trunc_q: usize) -> LaurentUnit<QSeries<Rat>> {
    let sigma = sigma_series(trunc_z + 1, trunc_q);
    section_from_unit_series(&sigma.unit_part(), trunc_z)
}

/// Build the cube section of any one-variable unit series u = s(w)/w.
pub fn section_from_unit_series(u: &ZQ, trunc_z: usize) -> LaurentUnit<QSeries<Rat>> {
    let vars = cube_vars();
    let trunc = trunc_z.min(u.trunc());
    let lin = |indices: &[usize]| {
        let mut s = MultiSeries::<QSeries<Rat>>::zero(vars.clone(), trunc);
        for &i in indices {
            s = s.add(&MultiSeries::var(vars.clone(), i, trunc));
        }
        s
    };
    let u_at = |indices: &[usize]| qseries_at(u, &lin(indices)).expect("linear sums vanish at 0");

    let numerator = u_at(&[0, 1, 2])
        .mul(&u_at(&[0]))
        .mul(&u_at(&[1]))
        .mul(&u_at(&[2]));
    let denominator = u_at(&[0, 1]).mul(&u_at(&[0, 2])).mul(&u_at(&[1, 2]));
    let unit = numerator.mul(&denominator.invert().expect("units have unit constant"));

    let mut divisors: BTreeMap<Locus, i64> = BTreeMap::new();
    for (locus, val) in [
        (BTreeSet::from([0, 1, 2]), 1i64),
        (BTreeSet::from([0]), 1),
        (BTreeSet::from([1]), 1),
        (BTreeSet::from([2]), 1),
        (BTreeSet::from([0, 1]), -1),
        (BTreeSet::from([0, 2]), -1),
        (BTreeSet::from([1, 2]), -1),
    ] {
        divisors.insert(locus, val);
    }
    LaurentUnit::new(divisors, unit)
}

/// The two-variable companion sigma(x+y)/(sigma(x) sigma(y)) as a
/// LaurentUnit in (x, y).
pub fn two_variable_section(trunc_z: usize, trunc_q: usize) -> LaurentUnit<QSeries<Rat>> {
    let sigma = sigma_series(trunc_z + 1, trunc_q);
    let u = sigma.unit_part();
    let vars = Vars::new(&["x", "y"]);
    let trunc = trunc_z.min(u.trunc());
    let xv = MultiSeries::<QSeries<Rat>>::var(vars.clone(), 0, trunc);
    let yv = MultiSeries::<QSeries<Rat>>::var(vars.clone(), 1, trunc);
    let sum = xv.add(&yv);
    let unit = qseries_at(&u, &sum)
        .expect("x+y vanishes at 0")
        .mul(&qseries_at(&u, &xv).unwrap().invert().unwrap())
        .mul(&qseries_at(&u, &yv).unwrap().invert().unwrap());
    let divisors = BTreeMap::from([
        (BTreeSet::from([0, 1]), 1i64),
        (BTreeSet::from([0]), -1),
        (BTreeSet::from([1]), -1),
    ]);
    LaurentUnit::new(divisors, unit)
}

/// Verdicts for the cube-section conditions.
#[derive(Clone, Debug, PartialEq)]
pub struct CubeReport {
    pub rigid: Check,
    pub symmetric: Check,
    pub cocycle: Check,
}

impl CubeReport {
    pub fn all_pass(&self) -> bool {
        self.rigid.passed() && self.symmetric.passed() && self.cocycle.passed()
    }
}

/// Instantiate a 3-slot section at disjoint sums of target variables:
/// divisor loci map to unions of slot variable sets, the unit part is
/// substituted accordingly.
fn instance(
    s: &LaurentUnit<QSeries<Rat>>,
    slots: [&[usize]; 3],
    target: &Vars,
) -> LaurentUnit<QSeries<Rat>> {
    let trunc = s.unit().trunc();
    let assignment: Vec<MultiSeries<QSeries<Rat>>> = slots
        .iter()
        .map(|vs| {
            let mut sum = MultiSeries::<QSeries<Rat>>::zero(target.clone(), trunc);
            for &v in *vs {
                sum = sum.add(&MultiSeries::var(target.clone(), v, trunc));
            }
            sum
        })
        .collect();
    let unit = s
        .unit()
        .substitute(&assignment)
        .expect("slot sums vanish at the origin");
    let mut divisors: BTreeMap<Locus, i64> = BTreeMap::new();
    for (locus, val) in s.divisors() {
        let mapped: Locus = locus.iter().flat_map(|&i| slots[i].iter().copied()).collect();
        *divisors.entry(mapped).or_insert(0) += val;
    }
    divisors.retain(|_, v| *v != 0);
    LaurentUnit::new(divisors, unit)
}

/// Check the section conditions: s(e,e,e) = 1, symmetry in all three
/// slots, and the cross-multiplied 2-cocycle identity
///
///   s(y,z,v) s(x, y+z, v) = s(x,y,v) s(x+y, z, v)
///
/// in the four-variable ring. The divisor vectors of the two sides must
/// agree before any series work; a mismatch is an error, not a failing
/// check.
pub fn verify_cube_conditions(
    s: &LaurentUnit<QSeries<Rat>>,
) -> Result<CubeReport, SeriesError> {
    // Rigidity: the unit part at the origin is exactly 1.
    let ct = s.unit().constant_term();
    let rigid = if ct.is_one() {
        Check::Pass
    } else {
        Check::Fail {
            expo: vec![0, 0, 0],
            monomial: "1".to_string(),
            lhs: ct.to_string(),
            rhs: "1".to_string(),
        }
    };

    // Symmetry: permuting the three slots fixes divisors and unit.
    let mut symmetric = Check::Pass;
    for perm in [[1usize, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
        let permuted_div: BTreeMap<Locus, i64> = s
            .divisors()
            .iter()
            .map(|(locus, v)| (locus.iter().map(|&i| perm[i]).collect(), *v))
            .collect();
        if &permuted_div != s.divisors() {
            symmetric = Check::Fail {
                expo: vec![],
                monomial: "divisor vector".to_string(),
                lhs: "permuted".to_string(),
                rhs: "original".to_string(),
            };
            break;
        }
        symmetric = Check::of_difference(&s.unit().permute_vars(&perm), s.unit());
        if !symmetric.passed() {
            break;
        }
    }

    // Cocycle, cross-multiplied in (x, y, z, v).
    let v4 = Vars::new(&["x", "y", "z", "v"]);
    let lhs = instance(s, [&[1], &[2], &[3]], &v4).mul(&instance(s, [&[0], &[1, 2], &[3]], &v4));
    let rhs = instance(s, [&[0], &[1], &[3]], &v4).mul(&instance(s, [&[0, 1], &[2], &[3]], &v4));
    if lhs.divisors() != rhs.divisors() {
        return Err(SeriesError::DivisorMismatch);
    }
    let cocycle = Check::of_difference(lhs.unit(), rhs.unit());

    Ok(CubeReport {
        rigid,
        symmetric,
        cocycle,
    })
}

/// Valuations of a cube section along the seven loci, plus the constant
/// slot (always 0 for computed sections), matching the fiber formula of
/// the cube line bundle with L = O(-e).
pub fn divisor_of_section(
    s: &LaurentUnit<QSeries<Rat>>,
) -> Result<DivisorVector, SeriesError> {
    let fgl = FormalGroupLaw::<QSeries<Rat>>::standard(StandardLaw::Additive, s.unit().trunc());
    let mut out = [0i64; 8];
    for (slot, locus) in DivisorVector::cube_loci().iter().enumerate() {
        out[slot] = section_valuation(s, &fgl, locus)?;
    }
    out[7] = 0;
    Ok(DivisorVector(out))
}

/// Valuations of the two-variable section along {x+y}, {x}, {y}.
pub fn divisor_of_two_variable_section(
    s: &LaurentUnit<QSeries<Rat>>,
) -> Result<[i64; 3], SeriesError> {
    let fgl = FormalGroupLaw::<QSeries<Rat>>::standard(StandardLaw::Additive, s.unit().trunc());
    Ok([
        section_valuation(s, &fgl, &BTreeSet::from([0, 1]))?,
        section_valuation(s, &fgl, &BTreeSet::from([0]))?,
        section_valuation(s, &fgl, &BTreeSet::from([1]))?,
    ])
}
