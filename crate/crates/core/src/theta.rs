//! The Tate-curve theta function.
//!
//! Theta(u) = (1 - u^-1) prod_{n>=1} (1 - q^n u)(1 - q^n u^-1) / (1 - q^n)^2,
//!
//! truncated in q, with each q-layer an exact integer Laurent polynomial
//! in u. Layer n is supported in u-exponents [-n-1, n]. The function
//! transforms under u -> qu by
//!
//!   Theta(qu) = -(qu)^-1 Theta(u),
//!
//! equivalently q u Theta(qu) = -Theta(u); all checks below use the
//! cross-multiplied form, which needs no division and no negative powers
//! of q. The same bookkeeping makes the theorem-of-the-cube combination
//!
//!   Theta(u1 u2 u3) Theta(u1) Theta(u2) Theta(u3)
//!   / ( Theta(u1 u2) Theta(u1 u3) Theta(u2 u3) )
//!
//! invariant under u_i -> q u_i: the shift multipliers of numerator and
//! denominator cancel exactly, and the cross-multiplied series identity
//! holds layer by layer.

use num::traits::{One, Zero};

use crate::laurent::Laurent;
use crate::qseries::QSeries;
use crate::scalar::Int;

pub type ThetaLayer = Laurent<Int, 1>;

/// A q-truncated theta function: layer n is the coefficient of q^n.
#[derive(Clone, Debug, PartialEq)]
pub struct ThetaFunction {
    layers: Vec<ThetaLayer>,
}

impl ThetaFunction {
    pub fn trunc_q(&self) -> usize {
        self.layers.len()
    }

    pub fn layer(&self, n: usize) -> &ThetaLayer {
        &self.layers[n]
    }

    pub fn layers(&self) -> &[ThetaLayer] {
        &self.layers
    }

    /// Coefficient of q^n u^k; layers at or above the truncation are
    /// unknown and must not be asked for.
    pub fn coeff(&self, n: usize, k: i64) -> Int {
        assert!(n < self.layers.len(), "q-layer {} beyond truncation", n);
        self.layers[n].coeff([k])
    }

    /// Add `delta` to one stored coefficient (mutation-testing hook).
    pub fn bump(&mut self, n: usize, k: i64, delta: Int) {
        let cur = self.layers[n].coeff([k]);
        self.layers[n].set_coeff([k], cur + delta);
    }
}

/// prod_{n=1}^{trunc-1} (1 - q^n) as an integer q-series.
fn euler_product(trunc: usize) -> QSeries<Int> {
    let mut p = QSeries::one_trunc(trunc);
    for n in 1..trunc {
        let factor = QSeries::from_fn(trunc, |k| {
            if k == 0 {
                Int::one()
            } else if k == n {
                -Int::one()
            } else {
                Int::zero()
            }
        });
        p = p.mul_ref(&factor);
    }
    p
}

/// The theta function to the given q-truncation (exact integer layers).
pub fn theta_u(trunc_q: usize) -> ThetaFunction {
    assert!(trunc_q >= 1);
    let series = theta_at_monomial::<1>([1], trunc_q, false);
    ThetaFunction {
        layers: series.coeffs().to_vec(),
    }
}

/// Theta (or its shifted companion) evaluated at a monomial of a
/// K-variable Laurent ring, expanded directly from the product formula.
///
/// With `shifted` set, returns S(v) := q v Theta(q v) = (q v - 1) *
/// prod_{m>=2}(1 - q^m v) * prod_{m>=0}(1 - q^m v^-1) / prod (1 - q^n)^2,
/// exact to the same truncation; S(v) = -Theta(v) identically.
pub fn theta_at_monomial<const K: usize>(
    expo: [i64; K],
    trunc_q: usize,
    shifted: bool,
) -> QSeries<Laurent<Int, K>> {
    assert!(trunc_q >= 1);
    let mono = |c: i64, e: [i64; K]| Laurent::<Int, K>::monomial(Int::from(c), e);
    let neg_expo: [i64; K] = core::array::from_fn(|i| -expo[i]);

    // Leading factor: (1 - v^-1), or (q v - 1) for the shifted form.
    let mut acc: QSeries<Laurent<Int, K>> = if shifted {
        let mut head = QSeries::constant(mono(-1, [0; K]), trunc_q);
        head = head.add_ref(&QSeries::monomial(mono(1, expo), 1, trunc_q));
        head
    } else {
        QSeries::constant(
            mono(1, [0; K]).sub_ref(&mono(1, neg_expo)),
            trunc_q,
        )
    };

    // (1 - q^m v) factors: m >= 1 normally, m >= 2 when shifted.
    let lo = if shifted { 2 } else { 1 };
    for m in lo..trunc_q {
        let factor = QSeries::from_fn(trunc_q, |k| {
            if k == 0 {
                Laurent::one()
            } else if k == m {
                mono(-1, expo)
            } else {
                Laurent::zero()
            }
        });
        acc = acc.mul_ref(&factor);
    }
    // (1 - q^m v^-1) factors: m >= 1 normally, m >= 0 when shifted.
    if shifted {
        let extra = QSeries::constant(mono(1, [0; K]).sub_ref(&mono(1, neg_expo)), trunc_q);
        acc = acc.mul_ref(&extra);
    }
    for m in 1..trunc_q {
        let factor = QSeries::from_fn(trunc_q, |k| {
            if k == 0 {
                Laurent::one()
            } else if k == m {
                mono(-1, neg_expo)
            } else {
                Laurent::zero()
            }
        });
        acc = acc.mul_ref(&factor);
    }

    // The (1 - q^n)^-2 normalizer is u-free.
    let inv_sq = euler_product(trunc_q)
        .invert()
        .expect("Euler product has constant term 1")
        .pow(2);
    let inv_sq_lifted = inv_sq.map(|c| Laurent::<Int, K>::constant(c.clone()));
    acc.mul_ref(&inv_sq_lifted)
}

/// Verify q u Theta(qu) = -Theta(u) from the stored layers, comparing all
/// coefficients the truncation determines.
///
/// Writing c(n,k) for the input's q^n u^k coefficient, the left side's
/// q^m u^j coefficient is c(m-j, j-1), determined for j >= m - N + 1;
/// below that, layers n >= N would contribute. The right side is fully
/// known for m < N. Coefficients are compared on the union of supports
/// inside the determined window.
pub fn quasi_periodicity_check(theta: &ThetaFunction) -> bool {
    let n_layers = theta.trunc_q();
    let coeff = |n: i64, k: i64| -> Int {
        if n < 0 {
            Int::zero()
        } else {
            theta.coeff(n as usize, k)
        }
    };
    for m in 0..n_layers {
        let undetermined_below = m as i64 - n_layers as i64 + 1;
        // Candidate u-exponents: supports of both sides.
        let mut lo = undetermined_below;
        let mut hi = m as i64 + 1;
        if let Some((a, b)) = theta.layer(m).support_range(0) {
            lo = lo.min(a);
            hi = hi.max(b);
        }
        for j in lo..=hi {
            if j < undetermined_below {
                continue;
            }
            let left = coeff(m as i64 - j, j - 1);
            let right = -coeff(m as i64, j);
            if left != right {
                return false;
            }
        }
    }
    true
}

/// The multiplier picked up by Theta(v), v a Laurent monomial, when one
/// cube variable is shifted u_i -> q u_i: sign, power of q, and monomial.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ShiftMultiplier {
    sign: i64,
    q_exp: i64,
    u_exp: [i64; 3],
}

impl ShiftMultiplier {
    /// Theta(q^d v) = (-1)^d q^(-d(d+1)/2) v^(-d) Theta(v): here d is the
    /// exponent of u_i in v.
    fn for_factor(v: [i64; 3], i: usize) -> Self {
        let d = v[i];
        ShiftMultiplier {
            sign: if d % 2 == 0 { 1 } else { -1 },
            q_exp: -d * (d + 1) / 2,
            u_exp: core::array::from_fn(|j| -d * v[j]),
        }
    }

    fn mul(&self, rhs: &Self) -> Self {
        ShiftMultiplier {
            sign: self.sign * rhs.sign,
            q_exp: self.q_exp + rhs.q_exp,
            u_exp: core::array::from_fn(|j| self.u_exp[j] + rhs.u_exp[j]),
        }
    }
}

const CUBE_NUMERATOR: [[i64; 3]; 4] = [[1, 1, 1], [1, 0, 0], [0, 1, 0], [0, 0, 1]];
const CUBE_DENOMINATOR: [[i64; 3]; 3] = [[1, 1, 0], [1, 0, 1], [0, 1, 1]];

/// Exponent bookkeeping: under each u_i -> q u_i the product of numerator
/// shift multipliers equals the product of denominator shift multipliers.
pub fn cube_multiplier_check() -> bool {
    for i in 0..3 {
        let nmul = CUBE_NUMERATOR
            .iter()
            .map(|&v| ShiftMultiplier::for_factor(v, i))
            .fold(
                ShiftMultiplier {
                    sign: 1,
                    q_exp: 0,
                    u_exp: [0; 3],
                },
                |acc, m| acc.mul(&m),
            );
        let dmul = CUBE_DENOMINATOR
            .iter()
            .map(|&v| ShiftMultiplier::for_factor(v, i))
            .fold(
                ShiftMultiplier {
                    sign: 1,
                    q_exp: 0,
                    u_exp: [0; 3],
                },
                |acc, m| acc.mul(&m),
            );
        if nmul != dmul {
            return false;
        }
    }
    true
}

/// Full-series witness of the cube invariance at the given truncation.
///
/// For each i, with S(v) = q v Theta(qv) expanded from its own product
/// formula and T(v) = Theta(v):
///
///   S(u1 u2 u3) S(u_i) T(u_j) T(u_k) * [T(u1 u2) T(u1 u3) T(u2 u3)]
///     = [T(u1 u2 u3) T(u1) T(u2) T(u3)] * S(u_i u_j) S(u_i u_k) T(u_j u_k)
///
/// is the cross-multiplied form of invariance under u_i -> q u_i.
pub fn cube_invariance_check(trunc_q: usize) -> bool {
    if !cube_multiplier_check() {
        return false;
    }
    let t = |v: [i64; 3]| theta_at_monomial::<3>(v, trunc_q, false);
    let s = |v: [i64; 3]| theta_at_monomial::<3>(v, trunc_q, true);
    let numerator: Vec<QSeries<Laurent<Int, 3>>> =
        CUBE_NUMERATOR.iter().map(|&v| t(v)).collect();
    let denominator: Vec<QSeries<Laurent<Int, 3>>> =
        CUBE_DENOMINATOR.iter().map(|&v| t(v)).collect();
    let product = |fs: &[QSeries<Laurent<Int, 3>>]| {
        fs.iter()
            .fold(QSeries::one_trunc(trunc_q), |acc, f| acc.mul_ref(f))
    };
    let n_all = product(&numerator);
    let d_all = product(&denominator);
    for i in 0..3 {
        let (j, k) = match i {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let unit = |idx: usize| -> [i64; 3] { core::array::from_fn(|p| (p == idx) as i64) };
        let pair = |a: usize, b: usize| -> [i64; 3] {
            core::array::from_fn(|p| ((p == a) || (p == b)) as i64)
        };
        let lhs = s([1, 1, 1])
            .mul_ref(&s(unit(i)))
            .mul_ref(&t(unit(j)))
            .mul_ref(&t(unit(k)))
            .mul_ref(&d_all);
        let rhs = n_all
            .mul_ref(&s(pair(i, j)))
            .mul_ref(&s(pair(i, k)))
            .mul_ref(&t(pair(j, k)));
        if lhs != rhs {
            return false;
        }
    }
    true
}
