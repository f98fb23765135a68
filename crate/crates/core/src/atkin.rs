//! The Atkin operator U_p and the map 1 - U_p.
//!
//! (U_p f)[n] = f[pn] on q-expansions, with companion (V_p f)(q) = f(q^p)
//! and the level-1 Hecke operator T_p = U_p + p^{k-1} V_p on weight k.
//! U_p V_p = id and the projection formula U_p(f V_p g) = (U_p f) g hold
//! exactly; E_k^(p) = E_k - p^{k-1} V_p E_k is a fixed point of U_p, hence
//! a kernel element of 1 - U_p.
//!
//! `kernel_search` computes the kernel of 1 - U_p at finite precision:
//! the search space is the span of the weight-k integral basis and its
//! V_p image, coefficients modulo p^M, with the q-coefficients below
//! floor(trunc_q / p) as linear functionals. The result is an honest
//! finite shadow: kernel vectors are re-verified to the advertised
//! q-order after reconstruction.

use num::traits::{One, Zero};
use num::Integer;

use crate::error::SeriesError;
use crate::modforms::{self, ModularForm};
use crate::qseries::QSeries;
use crate::scalar::{Int, Mod, Rat, Scalar};
use crate::snf;

pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Work modulo p^M.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PadicPrecision {
    pub p: u64,
    pub m: u32,
}

impl PadicPrecision {
    pub fn new(p: u64, m: u32) -> Result<Self, SeriesError> {
        if !is_prime(p) {
            return Err(SeriesError::InvalidArgument(format!("{} is not prime", p)));
        }
        if m == 0 {
            return Err(SeriesError::InvalidArgument(
                "p-adic precision must be at least 1".to_string(),
            ));
        }
        Ok(PadicPrecision { p, m })
    }

    pub fn modulus(&self) -> u64 {
        self.p.pow(self.m)
    }
}

/// (U_p f)[n] = f[p n]; the output is known below floor(trunc / p).
pub fn u_p<S: Scalar>(f: &QSeries<S>, p: u64) -> Result<QSeries<S>, SeriesError> {
    if !is_prime(p) {
        return Err(SeriesError::InvalidArgument(format!("{} is not prime", p)));
    }
    if f.trunc() == usize::MAX {
        // A constant of unbounded precision: U_p fixes it.
        return Ok(f.truncate_to(f.coeffs().len().max(1)));
    }
    let out_trunc = f.trunc() / p as usize;
    Ok(QSeries::from_fn(out_trunc, |n| f.coeff(p as usize * n)))
}

/// (V_p f)(q) = f(q^p); every coefficient below p * trunc is known.
pub fn v_p<S: Scalar>(f: &QSeries<S>, p: u64) -> QSeries<S> {
    assert!(p >= 1);
    if f.trunc() == usize::MAX {
        let coeffs: Vec<S> = (0..f.coeffs().len() * p as usize)
            .map(|m| {
                if m % p as usize == 0 {
                    f.coeffs()[m / p as usize].clone()
                } else {
                    S::zero()
                }
            })
            .collect();
        return QSeries::from_coeffs(coeffs, usize::MAX);
    }
    let out_trunc = f.trunc().saturating_mul(p as usize);
    QSeries::from_fn(out_trunc, |m| {
        if m % p as usize == 0 {
            f.coeff(m / p as usize)
        } else {
            S::zero()
        }
    })
}

pub fn one_minus_up<S: Scalar>(f: &QSeries<S>, p: u64) -> Result<QSeries<S>, SeriesError> {
    let upf = u_p(f, p)?;
    Ok(f.truncate_to(upf.trunc()).sub_ref(&upf))
}

/// T_p = U_p + p^{k-1} V_p on level-1 forms of weight k.
pub fn t_p(f: &ModularForm, p: u64) -> Result<ModularForm, SeriesError> {
    let upf = u_p(f.qexp(), p)?;
    if upf.trunc() == 0 {
        return Err(SeriesError::InsufficientTruncation {
            required: p as usize,
        });
    }
    let scale = Rat::from_integer(Int::from(p).pow(f.weight().saturating_sub(1)));
    let vpf = v_p(f.qexp(), p).scale(&scale);
    Ok(ModularForm::new(f.weight(), upf.add_ref(&vpf)))
}

/// The p-stabilized Eisenstein series E_k - p^{k-1} V_p E_k, a fixed
/// point of U_p.
pub fn eisenstein_p_stabilized(
    k: u32,
    p: u64,
    trunc_q: usize,
) -> Result<QSeries<Rat>, SeriesError> {
    let e = modforms::eisenstein(k, trunc_q)?;
    let scale = Rat::from_integer(Int::from(p).pow(k - 1));
    Ok(e.qexp()
        .sub_ref(&v_p(e.qexp(), p).truncate_to(trunc_q).scale(&scale)))
}

/// Kernel of 1 - U_p on span{basis, V_p basis} mod p^M.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub prec: PadicPrecision,
    pub weight: u32,
    /// Coordinates of each kernel generator in the 2d-dimensional search
    /// space (basis forms then their V_p images), entries mod p^M.
    pub coordinates: Vec<Vec<Int>>,
    /// The same generators re-expanded as q-expansions mod p^M.
    pub generators: Vec<QSeries<Mod>>,
    /// Every generator satisfies (1 - U_p) v = 0 mod p^M below this order.
    pub verified_q_order: usize,
}

impl KernelReport {
    /// Whether the given search-space coordinates lie in the kernel span
    /// mod p^M.
    pub fn contains(&self, coords: &[Int]) -> bool {
        let modulus = Int::from(self.prec.modulus());
        if self.coordinates.is_empty() {
            return coords.iter().all(|c| c.mod_floor(&modulus).is_zero());
        }
        let dim = self.coordinates[0].len();
        assert_eq!(coords.len(), dim);
        // columns = kernel generators
        let a: snf::Matrix = (0..dim)
            .map(|r| self.coordinates.iter().map(|g| g[r].clone()).collect())
            .collect();
        snf::solve_mod(&a, coords, &modulus).is_some()
    }
}

/// The search-space generators: the weight-k integral basis followed by
/// its V_p image, all truncated to trunc_q.
fn search_space(weight: u32, p: u64, trunc_q: usize) -> Result<Vec<QSeries<Int>>, SeriesError> {
    let basis = modforms::mf_basis(weight, trunc_q)?;
    let mut generators: Vec<QSeries<Int>> = basis
        .iter()
        .map(|f| f.qexp_int().expect("monomial basis forms are integral"))
        .collect();
    let twists: Vec<QSeries<Int>> = generators
        .iter()
        .map(|g| v_p(g, p).truncate_to(trunc_q))
        .collect();
    generators.extend(twists);
    Ok(generators)
}

pub fn kernel_search(
    weight: u32,
    prec: PadicPrecision,
    trunc_q: usize,
) -> Result<KernelReport, SeriesError> {
    let p = prec.p;
    let generators = search_space(weight, p, trunc_q)?;
    let n_gen = generators.len();
    let functionals = trunc_q / p as usize;
    if n_gen > 0 && functionals < n_gen {
        return Err(SeriesError::InsufficientTruncation {
            required: n_gen * p as usize,
        });
    }

    // Matrix of 1 - U_p: rows are q-coefficients of the images.
    let images: Vec<QSeries<Int>> = generators
        .iter()
        .map(|g| one_minus_up(g, p).expect("p is prime"))
        .collect();
    let a: snf::Matrix = (0..functionals)
        .map(|r| images.iter().map(|im| im.coeff(r)).collect())
        .collect();

    let modulus = Int::from(prec.modulus());
    let coordinates = snf::kernel_mod(&a, &modulus);

    // Reconstruct and independently re-verify each generator.
    let to_mod = |c: &Int| -> Mod {
        let r = c.mod_floor(&modulus);
        Mod::new(TryInto::<i64>::try_into(r).expect("modulus fits i64"), prec.modulus())
    };
    let mut expanded = Vec::with_capacity(coordinates.len());
    for coords in &coordinates {
        let mut v: QSeries<Int> = QSeries::zero_trunc(trunc_q);
        for (c, g) in coords.iter().zip(&generators) {
            v = v.add_ref(&g.scale(c));
        }
        let vm = v.map(to_mod);
        let residue = one_minus_up(&vm, p).expect("p is prime");
        assert!(
            residue.is_zero_series(),
            "kernel reconstruction failed re-verification"
        );
        expanded.push(vm);
    }

    Ok(KernelReport {
        prec,
        weight,
        coordinates,
        generators: expanded,
        verified_q_order: functionals,
    })
}

/// Coordinates of E_k^(p) in the search space: the decomposition of E_k
/// over the basis, followed by -p^{k-1} times it.
pub fn eisenstein_witness_coords(
    weight: u32,
    p: u64,
    trunc_q: usize,
) -> Result<Vec<Int>, SeriesError> {
    let e = modforms::eisenstein(weight, trunc_q)?;
    let coords = modforms::decompose(e.qexp(), weight)?;
    let pk = Int::from(p).pow(weight - 1);
    let mut out: Vec<Int> = Vec::with_capacity(2 * coords.len());
    for c in &coords {
        assert!(c.denom().is_one(), "E_k decomposes integrally");
        out.push(c.numer().clone());
    }
    for c in &coords {
        out.push(-c.numer().clone() * &pk);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};
    use rand::{Rng, SeedableRng};

    #[test]
    fn u2_of_geometric_series() {
        // U_2 (sum q^n) = sum q^n.
        let f: QSeries<Int> = QSeries::from_fn(10, |_| Int::one());
        let u = u_p(&f, 2).unwrap();
        assert_eq!(u, QSeries::from_fn(5, |_| Int::one()));
    }

    #[test]
    fn u2_delta_leading_terms() {
        // tau(2) = -24, tau(4) = -1472.
        let d = modforms::delta(6).qexp_int().unwrap();
        let u = u_p(&d, 2).unwrap();
        assert_eq!(u.trunc(), 3);
        assert_eq!(u.coeff(1), int(-24));
        assert_eq!(u.coeff(2), int(-1472));
    }

    #[test]
    fn u_p_rejects_composite() {
        let f: QSeries<Int> = QSeries::one_trunc(4);
        assert!(u_p(&f, 4).is_err());
        assert!(u_p(&f, 1).is_err());
    }

    #[test]
    fn v_p_examples() {
        let q: QSeries<Int> = QSeries::monomial(Int::one(), 1, 3);
        assert_eq!(v_p(&q, 2), QSeries::monomial(Int::one(), 2, 6));
        let f = QSeries::from_coeffs(vec![int(1), int(1)], 2);
        let v = v_p(&f, 3);
        assert_eq!(v.trunc(), 6);
        assert_eq!(v.coeff(0), int(1));
        assert_eq!(v.coeff(3), int(1));
        assert_eq!(v.coeff(1), int(0));
    }

    #[test]
    fn up_vp_is_identity_but_not_conversely() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(43);
        for p in [2u64, 3, 5] {
            for _ in 0..17 {
                let f: QSeries<Int> =
                    QSeries::from_fn(8, |_| int(rng.gen_range(-9..=9)));
                let round = u_p(&v_p(&f, p), p).unwrap();
                assert_eq!(round, f);
            }
        }
        // V_2 U_2 forgets odd coefficients: witness q.
        let q: QSeries<Int> = QSeries::monomial(Int::one(), 1, 4);
        let back = v_p(&u_p(&q, 2).unwrap(), 2);
        assert!(back.is_zero_series());
    }

    #[test]
    fn projection_formula() {
        // U_p(f * V_p g) = (U_p f) * g, exactly.
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(47);
        for p in [2u64, 3] {
            for _ in 0..25 {
                let f: QSeries<Int> =
                    QSeries::from_fn(12, |_| int(rng.gen_range(-5..=5)));
                let g: QSeries<Int> =
                    QSeries::from_fn(12, |_| int(rng.gen_range(-5..=5)));
                let lhs = u_p(&f.mul_ref(&v_p(&g, p).truncate_to(12)), p).unwrap();
                let rhs = u_p(&f, p).unwrap().mul_ref(&g);
                assert_eq!(lhs, rhs.truncate_to(lhs.trunc()));
            }
        }
    }

    #[test]
    fn hecke_eigenvalues_of_delta() {
        // T_2 Delta = -24 Delta and T_3 Delta = 252 Delta, to q^8.
        let d = modforms::delta(24);
        let t2 = t_p(&d, 2).unwrap();
        let expect = d.qexp().scale(&rat(-24, 1)).truncate_to(t2.trunc_q());
        assert!(t2.trunc_q() >= 8);
        assert_eq!(t2.qexp(), &expect);
        let t3 = t_p(&d, 3).unwrap();
        let expect = d.qexp().scale(&rat(252, 1)).truncate_to(t3.trunc_q());
        assert_eq!(t3.qexp(), &expect);
    }

    #[test]
    fn hecke_on_eisenstein() {
        // T_2 E_4 = (1 + 2^3) E_4 = 9 E_4.
        let e4 = modforms::eisenstein(4, 16).unwrap();
        let t2 = t_p(&e4, 2).unwrap();
        let expect = e4.qexp().scale(&rat(9, 1)).truncate_to(t2.trunc_q());
        assert_eq!(t2.qexp(), &expect);
        // T_p of zero is zero.
        let zero = ModularForm::new(4, QSeries::zero_trunc(8));
        assert!(t_p(&zero, 2).unwrap().qexp().is_zero_series());
    }

    #[test]
    fn one_minus_up_on_constants_and_delta() {
        let one: QSeries<Rat> = QSeries::one_trunc(9);
        assert!(one_minus_up(&one, 3).unwrap().is_zero_series());
        // (1 - U_2) Delta has q^1 coefficient 1 - tau(2) = 25.
        let d = modforms::delta(8).qexp_int().unwrap();
        let r = one_minus_up(&d, 2).unwrap();
        assert_eq!(r.coeff(1), int(25));
    }

    #[test]
    fn stabilized_eisenstein_is_a_fixed_point() {
        for (p, k) in [(2u64, 4u32), (3, 4), (5, 6)] {
            let witness = eisenstein_p_stabilized(k, p, 12).unwrap();
            let image = one_minus_up(&witness, p).unwrap();
            assert!(image.is_zero_series(), "(p, k) = ({}, {})", p, k);
        }
    }

    #[test]
    fn kernel_contains_the_witness_mod_8() {
        let prec = PadicPrecision::new(2, 3).unwrap();
        let report = kernel_search(4, prec, 16).unwrap();
        assert_eq!(report.verified_q_order, 8);
        let witness = eisenstein_witness_coords(4, 2, 16).unwrap();
        assert!(report.contains(&witness));
    }

    #[test]
    fn kernel_at_weight_zero_contains_constants() {
        let prec = PadicPrecision::new(3, 2).unwrap();
        let report = kernel_search(0, prec, 9).unwrap();
        // the constant 1 has coordinates (1, 0)
        assert!(report.contains(&[Int::one(), Int::zero()]));
    }

    #[test]
    fn kernel_is_stable_under_precision_doubling() {
        // Each kernel generator mod 2^(M+1), reduced mod 2^M, stays in the
        // mod-2^M kernel.
        let coarse = kernel_search(12, PadicPrecision::new(2, 3).unwrap(), 24).unwrap();
        let fine = kernel_search(12, PadicPrecision::new(2, 4).unwrap(), 24).unwrap();
        for gen in &fine.coordinates {
            assert!(coarse.contains(gen));
        }
    }

    #[test]
    fn kernel_search_reports_underdetermined_systems() {
        let prec = PadicPrecision::new(2, 3).unwrap();
        let err = kernel_search(12, prec, 6).unwrap_err();
        assert!(matches!(err, SeriesError::InsufficientTruncation { .. }));
    }
}
