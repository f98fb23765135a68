//! Level-1 modular forms with exact q-expansions.
//!
//! Generators: c4 = E4 and c6 = E6 (so c4^3 - c6^2 = 1728 Delta with a
//! positive 1728), and Delta = q prod (1-q^n)^24. The integral forms of
//! weight w have the Z-basis {c4^a c6^b Delta^c : 4a + 6b + 12c = w,
//! b <= 1}, listed by increasing Delta-power; since the form with
//! Delta-power c has q-valuation c and leading coefficient 1, exact
//! decomposition is forward substitution plus an over-determined
//! consistency check on every remaining known coefficient.
//!
//! Weight-12 forms carry the distinguished index-24 sublattice generated
//! by c4^3 and 24 Delta; membership is decided from the exact (alpha,
//! beta) coordinates.

use num::traits::{One, Zero};

use crate::error::SeriesError;
use crate::qseries::QSeries;
use crate::scalar::{rat, Int, Rat};

#[derive(Clone, Debug, PartialEq)]
pub struct ModularForm {
    weight: u32,
    qexp: QSeries<Rat>,
}

impl ModularForm {
    pub fn new(weight: u32, qexp: QSeries<Rat>) -> Self {
        ModularForm { weight, qexp }
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn qexp(&self) -> &QSeries<Rat> {
        &self.qexp
    }

    pub fn trunc_q(&self) -> usize {
        self.qexp.trunc()
    }

    pub fn is_integral(&self) -> bool {
        self.qexp.coeffs().iter().all(|c| c.denom().is_one())
    }

    /// Integer coefficients, if the form is integral.
    pub fn qexp_int(&self) -> Option<QSeries<Int>> {
        if !self.is_integral() {
            return None;
        }
        Some(self.qexp.map(|c| c.numer().clone()))
    }

    pub fn add(&self, rhs: &ModularForm) -> ModularForm {
        assert_eq!(self.weight, rhs.weight, "weights must match");
        ModularForm {
            weight: self.weight,
            qexp: self.qexp.add_ref(&rhs.qexp),
        }
    }

    pub fn mul(&self, rhs: &ModularForm) -> ModularForm {
        ModularForm {
            weight: self.weight + rhs.weight,
            qexp: self.qexp.mul_ref(&rhs.qexp),
        }
    }

    pub fn scale(&self, c: &Rat) -> ModularForm {
        ModularForm {
            weight: self.weight,
            qexp: self.qexp.scale(c),
        }
    }

    pub fn pow(&self, e: u32) -> ModularForm {
        ModularForm {
            weight: self.weight * e,
            qexp: self.qexp.pow(e as u64),
        }
    }
}

/// Bernoulli numbers B_0, B_1, ..., B_k (B_1 = -1/2) by the standard
/// recurrence sum_{j<=m} C(m+1, j) B_j = 0.
pub fn bernoulli_numbers(k: usize) -> Vec<Rat> {
    let mut b: Vec<Rat> = Vec::with_capacity(k + 1);
    for m in 0..=k {
        if m == 0 {
            b.push(rat(1, 1));
            continue;
        }
        // binomials C(m+1, j) for j = 0..m
        let mut binom = Int::one();
        let mut sum = Rat::zero();
        for (j, bj) in b.iter().enumerate() {
            if j > 0 {
                // C(m+1, j) = C(m+1, j-1) * (m+2-j)/j
                binom = binom * Int::from((m + 2 - j) as i64) / Int::from(j as i64);
            }
            sum += Rat::from_integer(binom.clone()) * bj;
        }
        b.push(-sum / rat(m as i64 + 1, 1));
    }
    b
}

/// sigma_{e}(n): sum of e-th powers of divisors of n.
pub fn divisor_sum(e: u32, n: usize) -> Int {
    let mut total = Int::zero();
    for d in 1..=n {
        if n % d == 0 {
            total += Int::from(d as i64).pow(e);
        }
    }
    total
}

/// The Eisenstein q-series G_k = -B_k/2k + sum_n sigma_{k-1}(n) q^n.
pub fn eisenstein_g(k: u32, trunc_q: usize) -> QSeries<Rat> {
    assert!(k >= 2 && k % 2 == 0, "G_k needs even k >= 2");
    let b = bernoulli_numbers(k as usize);
    QSeries::from_fn(trunc_q, |n| {
        if n == 0 {
            -b[k as usize].clone() / rat(2 * k as i64, 1)
        } else {
            Rat::from_integer(divisor_sum(k - 1, n))
        }
    })
}

/// The normalized Eisenstein series E_k = 1 - (2k/B_k) sum sigma_{k-1} q^n.
pub fn eisenstein(k: u32, trunc_q: usize) -> Result<ModularForm, SeriesError> {
    if k % 2 != 0 || k < 4 {
        return Err(SeriesError::InvalidArgument(format!(
            "Eisenstein series needs even weight >= 4, got {}",
            k
        )));
    }
    let b = bernoulli_numbers(k as usize);
    let factor = -rat(2 * k as i64, 1) / b[k as usize].clone();
    let qexp = QSeries::from_fn(trunc_q, |n| {
        if n == 0 {
            rat(1, 1)
        } else {
            factor.clone() * Rat::from_integer(divisor_sum(k - 1, n))
        }
    });
    Ok(ModularForm::new(k, qexp))
}

/// Delta = q prod_{n>=1} (1 - q^n)^24, expanded exactly.
pub fn delta(trunc_q: usize) -> ModularForm {
    let mut p: QSeries<Int> = QSeries::one_trunc(trunc_q);
    for n in 1..trunc_q {
        let factor = QSeries::from_fn(trunc_q, |k| {
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
    let qexp = p.pow(24).shift(1).truncate_to(trunc_q);
    ModularForm::new(12, qexp.map(|c| Rat::from_integer(c.clone())))
}

pub fn c4(trunc_q: usize) -> ModularForm {
    eisenstein(4, trunc_q).expect("weight 4 is valid")
}

pub fn c6(trunc_q: usize) -> ModularForm {
    eisenstein(6, trunc_q).expect("weight 6 is valid")
}

/// The monomial basis c4^a c6^b Delta^c (4a + 6b + 12c = weight, b <= 1)
/// by increasing Delta-power; a Z-basis of the integral forms.
pub fn mf_basis(weight: u32, trunc_q: usize) -> Result<Vec<ModularForm>, SeriesError> {
    if weight % 2 != 0 {
        return Err(SeriesError::InvalidArgument(format!(
            "no odd-weight level-1 forms (weight {})",
            weight
        )));
    }
    let c4 = c4(trunc_q);
    let c6 = c6(trunc_q);
    let dl = delta(trunc_q);
    let mut out = Vec::new();
    let mut c = 0u32;
    while 12 * c <= weight {
        let rem = weight - 12 * c;
        let ab = match rem % 4 {
            0 => Some((rem / 4, 0u32)),
            2 if rem >= 6 => Some(((rem - 6) / 4, 1)),
            _ => None,
        };
        if let Some((a, b)) = ab {
            let mut form = c4.pow(a);
            if b == 1 {
                form = form.mul(&c6);
            }
            if c > 0 {
                form = form.mul(&dl.pow(c));
            }
            out.push(ModularForm::new(weight, form.qexp.truncate_to(trunc_q)));
        }
        c += 1;
    }
    Ok(out)
}

/// Exact coordinates of a q-expansion in the weight-w basis. Forward
/// substitution on the leading coefficients, then a zero-residual check on
/// every remaining known coefficient; the first inconsistent q-degree is
/// reported on failure.
pub fn decompose(f: &QSeries<Rat>, weight: u32) -> Result<Vec<Rat>, SeriesError> {
    let trunc = f.trunc();
    let basis = mf_basis(weight, trunc)?;
    let d = basis.len();
    if trunc <= d {
        return Err(SeriesError::InsufficientTruncation { required: d + 1 });
    }
    let mut residual = f.clone();
    let mut coords = Vec::with_capacity(d);
    for (j, b) in basis.iter().enumerate() {
        // basis[j] has q-valuation j with leading coefficient 1
        let cj = residual.coeff(j);
        residual = residual.sub_ref(&b.qexp.scale(&cj));
        coords.push(cj);
    }
    if let Some(bad) = residual.valuation() {
        return Err(SeriesError::Inconsistent { q_degree: bad });
    }
    Ok(coords)
}

/// Membership certificate for the index-24 sublattice of weight 12
/// generated by c4^3 and 24 Delta: f = alpha c4^3 + beta Delta is a
/// member iff alpha is an integer and beta is divisible by 24.
#[derive(Clone, Debug, PartialEq)]
pub struct Mf12Certificate {
    pub alpha: Rat,
    pub beta: Rat,
    pub member: bool,
}

pub fn mf12_membership(f: &ModularForm) -> Result<Mf12Certificate, SeriesError> {
    if f.weight != 12 {
        return Err(SeriesError::InvalidArgument(format!(
            "membership test is for weight 12, got {}",
            f.weight
        )));
    }
    let coords = decompose(&f.qexp, 12)?;
    let alpha = coords[0].clone();
    let beta = coords[1].clone();
    let member = alpha.denom().is_one()
        && beta.denom().is_one()
        && (beta.numer() % Int::from(24)).is_zero();
    Ok(Mf12Certificate {
        alpha,
        beta,
        member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use rand::{Rng, SeedableRng};

    #[test]
    fn bernoulli_values() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[6], rat(1, 42));
        assert_eq!(b[8], rat(-1, 30));
        assert_eq!(b[10], rat(5, 66));
        assert_eq!(b[12], rat(-691, 2730));
        assert!(b[3].is_zero() && b[5].is_zero() && b[11].is_zero());
    }

    #[test]
    fn eisenstein_expansions() {
        // E4 = 1 + 240q + 2160q^2 + ..., E6 = 1 - 504q - ...
        let e4 = eisenstein(4, 3).unwrap();
        assert_eq!(e4.qexp().coeff(0), rat(1, 1));
        assert_eq!(e4.qexp().coeff(1), rat(240, 1));
        assert_eq!(e4.qexp().coeff(2), rat(2160, 1));
        let e6 = eisenstein(6, 2).unwrap();
        assert_eq!(e6.qexp().coeff(1), rat(-504, 1));
        assert!(eisenstein(5, 4).is_err());
        assert!(eisenstein(2, 4).is_err());
    }

    #[test]
    fn e4_is_integral_to_q16() {
        let e4 = eisenstein(4, 16).unwrap();
        assert!(e4.is_integral());
    }

    #[test]
    fn delta_leading_coefficients() {
        let d = delta(4);
        assert_eq!(d.qexp().coeff(0), rat(0, 1));
        assert_eq!(d.qexp().coeff(1), rat(1, 1));
        assert_eq!(d.qexp().coeff(2), rat(-24, 1));
        assert_eq!(d.qexp().coeff(3), rat(252, 1));
    }

    #[test]
    fn delta_matches_jacobi_cube_oracle() {
        // prod (1-q^n)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2} (Jacobi), so
        // Delta = q * (that series)^8: an independent route to tau(n).
        let trunc = 17;
        let mut jacobi: QSeries<Int> = QSeries::zero_trunc(trunc);
        let mut k = 0usize;
        loop {
            let e = k * (k + 1) / 2;
            if e >= trunc {
                break;
            }
            let sign = if k % 2 == 0 { 1 } else { -1 };
            jacobi = jacobi.add_ref(&QSeries::monomial(
                int(sign * (2 * k as i64 + 1)),
                e,
                trunc,
            ));
            k += 1;
        }
        let via_jacobi = jacobi.pow(8).shift(1).truncate_to(trunc);
        let d = delta(trunc).qexp_int().unwrap();
        assert_eq!(d, via_jacobi);
        // spot values of Ramanujan tau
        assert_eq!(d.coeff(16), int(987136));
        assert_eq!(d.coeff(11), int(534612));
    }

    #[test]
    fn c4_cubed_minus_c6_squared_is_1728_delta() {
        let trunc = 16;
        let lhs = c4(trunc).pow(3).qexp().sub_ref(c6(trunc).pow(2).qexp());
        let rhs = delta(trunc).qexp().scale(&rat(1728, 1));
        assert_eq!(lhs, rhs);
        // the q^1 layer: 720 - (-1008) = 1728
        assert_eq!(c4(2).pow(3).qexp().coeff(1), rat(720, 1));
        assert_eq!(c6(2).pow(2).qexp().coeff(1), rat(-1008, 1));
    }

    #[test]
    fn basis_dimensions() {
        let dims: Vec<usize> = (0..=13)
            .map(|w| mf_basis(2 * w, 20).unwrap().len())
            .collect();
        // weights 0, 2, 4, ..., 26
        assert_eq!(dims, vec![1, 0, 1, 1, 1, 1, 2, 1, 2, 2, 2, 2, 3, 2]);
    }

    #[test]
    fn weight_12_basis_is_c4cubed_and_delta() {
        let basis = mf_basis(12, 8).unwrap();
        assert_eq!(basis.len(), 2);
        assert_eq!(basis[0].qexp(), c4(8).pow(3).qexp());
        assert_eq!(basis[1].qexp(), delta(8).qexp());
    }

    #[test]
    fn decompose_round_trips_random_combinations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for w in [0u32, 4, 8, 12, 16, 20, 24] {
            let basis = mf_basis(w, 12).unwrap();
            for _ in 0..10 {
                let coeffs: Vec<Rat> =
                    (0..basis.len()).map(|_| rat(rng.gen_range(-9..=9), 1)).collect();
                let mut f = QSeries::zero_trunc(12);
                for (c, b) in coeffs.iter().zip(&basis) {
                    f = f.add_ref(&b.qexp().scale(c));
                }
                assert_eq!(decompose(&f, w).unwrap(), coeffs);
            }
        }
    }

    #[test]
    fn decompose_rejects_non_forms() {
        // q + 0 q^2 + ... is not a weight-12 form.
        let f = QSeries::monomial(rat(1, 1), 1, 10);
        let err = decompose(&f, 12).unwrap_err();
        assert!(matches!(err, SeriesError::Inconsistent { .. }));
        // zero decomposes as all-zero coordinates
        let z = QSeries::zero_trunc(10);
        assert_eq!(decompose(&z, 12).unwrap(), vec![rat(0, 1), rat(0, 1)]);
    }

    #[test]
    fn e4_squared_is_c4_squared() {
        let f = eisenstein(4, 10).unwrap().pow(2);
        let coords = decompose(f.qexp(), 8).unwrap();
        assert_eq!(coords, vec![rat(1, 1)]);
    }

    #[test]
    fn mf12_membership_matches_lattice() {
        let trunc = 8;
        let c4cubed = c4(trunc).pow(3);
        let cert = mf12_membership(&c4cubed).unwrap();
        assert!(cert.member);
        assert_eq!((cert.alpha, cert.beta), (rat(1, 1), rat(0, 1)));

        let d = delta(trunc);
        let cert = mf12_membership(&d).unwrap();
        assert!(!cert.member);
        assert_eq!((cert.alpha, cert.beta), (rat(0, 1), rat(1, 1)));

        let c6sq = c6(trunc).pow(2);
        let cert = mf12_membership(&c6sq).unwrap();
        assert!(cert.member);
        assert_eq!((cert.alpha, cert.beta), (rat(1, 1), rat(-1728, 1)));
    }

    #[test]
    fn lattice_has_index_24() {
        // Coordinates of the sublattice generators in the full basis:
        // det [[1, 0], [0, 24]] = 24.
        let trunc = 8;
        let g1 = decompose(c4(trunc).pow(3).qexp(), 12).unwrap();
        let g2 = decompose(&delta(trunc).qexp().scale(&rat(24, 1)), 12).unwrap();
        let det = g1[0].clone() * g2[1].clone() - g1[1].clone() * g2[0].clone();
        assert_eq!(det, rat(24, 1));
    }

    #[test]
    fn membership_is_a_subgroup_predicate() {
        let trunc = 8;
        let c4cubed = c4(trunc).pow(3);
        let d24 = delta(trunc).scale(&rat(24, 1));
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(13);
        for _ in 0..50 {
            let (a1, b1) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            let (a2, b2) = (rng.gen_range(-5..=5), rng.gen_range(-5..=5));
            let f = c4cubed.scale(&rat(a1, 1)).add(&d24.scale(&rat(b1, 1)));
            let g = c4cubed.scale(&rat(a2, 1)).add(&d24.scale(&rat(b2, 1)));
            assert!(mf12_membership(&f).unwrap().member);
            assert!(mf12_membership(&g).unwrap().member);
            assert!(mf12_membership(&f.add(&g)).unwrap().member);
            assert!(mf12_membership(&f.scale(&rat(-1, 1))).unwrap().member);
        }
    }
}
