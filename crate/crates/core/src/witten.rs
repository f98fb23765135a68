//! The Witten genus on Pontryagin-number data.
//!
//! A manifold enters only through its dimension 4k and the Pontryagin
//! numbers p_lambda[M], one integer per partition lambda of k. The genus
//! pairs these with the degree-k multiplicative-sequence polynomial of the
//! characteristic series Q(z) = z/sigma(z): writing
//!
//!   log Q(z) = sum_{j>=1} (2 G_{2j}/(2j)!) z^{2j},
//!
//! the polynomial is exp(sum_j c_j s_j) in the algebra generated by
//! p_1, p_2, ... with s_j the j-th power sum (Newton) and c_j the
//! coefficient above. Its q^0 layer is the classical A-hat sequence, so
//! the constant term of the genus is the A-hat genus; on string-like data
//! (all p_1-divisible numbers zero) the value is a weight-2k modular form
//! and is independent of the weight-2 coefficient G_2.

use std::collections::BTreeMap;

use num::traits::{One, Zero};

use crate::error::SeriesError;
use crate::modforms;
use crate::qseries::QSeries;
use crate::scalar::{rat, Int, Rat};
use crate::sigma;

/// A partition written in weakly decreasing order.
pub type Partition = Vec<u32>;

/// All partitions of k, in a fixed deterministic order.
pub fn partitions(k: u32) -> Vec<Partition> {
    fn extend(remaining: u32, max_part: u32, prefix: &mut Partition, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(prefix.clone());
            return;
        }
        let hi = remaining.min(max_part);
        for part in (1..=hi).rev() {
            prefix.push(part);
            extend(remaining - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    extend(k, k, &mut Vec::new(), &mut out);
    out
}

/// Pontryagin numbers of a closed manifold of dimension 4k.
#[derive(Clone, Debug, PartialEq)]
pub struct PontryaginData {
    dim: u32,
    numbers: BTreeMap<Partition, Int>,
}

impl PontryaginData {
    pub fn new(dim: u32, numbers: BTreeMap<Partition, Int>) -> Result<Self, SeriesError> {
        if dim == 0 || dim % 4 != 0 {
            return Err(SeriesError::InvalidArgument(format!(
                "dimension must be a positive multiple of 4, got {}",
                dim
            )));
        }
        let k = dim / 4;
        for key in numbers.keys() {
            let sorted_desc = key.windows(2).all(|w| w[0] >= w[1]);
            let total: u32 = key.iter().sum();
            if !sorted_desc || total != k || key.iter().any(|&p| p == 0) {
                return Err(SeriesError::InvalidArgument(format!(
                    "{:?} is not a partition of {}",
                    key, k
                )));
            }
        }
        Ok(PontryaginData { dim, numbers })
    }

    pub fn dim(&self) -> u32 {
        self.dim
    }

    pub fn degree(&self) -> u32 {
        self.dim / 4
    }

    pub fn number(&self, partition: &Partition) -> Int {
        self.numbers.get(partition).cloned().unwrap_or_else(Int::zero)
    }

    pub fn numbers(&self) -> &BTreeMap<Partition, Int> {
        &self.numbers
    }

    /// The characteristic-number shadow of p1/2 = 0: every monomial
    /// divisible by p1 vanishes.
    pub fn string_like(&self) -> bool {
        partitions(self.degree())
            .iter()
            .filter(|p| p.contains(&1))
            .all(|p| self.number(p).is_zero())
    }
}

/// The value of the genus: a q-expansion of weight dim/2.
#[derive(Clone, Debug, PartialEq)]
pub struct GenusValue {
    pub weight: u32,
    pub qexp: QSeries<Rat>,
}

/// A polynomial in p_1, .., p_k, homogeneous pieces keyed by partition.
type WPoly = BTreeMap<Partition, QSeries<Rat>>;

fn wpoly_add(a: &WPoly, b: &WPoly) -> WPoly {
    let mut out = a.clone();
    for (key, c) in b {
        let entry = out
            .entry(key.clone())
            .or_insert_with(|| QSeries::zero_trunc(c.trunc()));
        *entry = entry.add_ref(c);
    }
    out.retain(|_, c| !c.is_zero_series());
    out
}

fn wpoly_mul(a: &WPoly, b: &WPoly, max_weight: u32) -> WPoly {
    let mut out = WPoly::new();
    for (ka, ca) in a {
        let wa: u32 = ka.iter().sum();
        for (kb, cb) in b {
            let wb: u32 = kb.iter().sum();
            if wa + wb > max_weight {
                continue;
            }
            let mut key: Partition = ka.iter().chain(kb.iter()).copied().collect();
            key.sort_unstable_by(|x, y| y.cmp(x));
            let term = ca.mul_ref(cb);
            match out.get_mut(&key) {
                Some(cur) => *cur = cur.add_ref(&term),
                None => {
                    out.insert(key, term);
                }
            }
        }
    }
    out.retain(|_, c| !c.is_zero_series());
    out
}

fn wpoly_scale(a: &WPoly, c: &QSeries<Rat>) -> WPoly {
    let mut out = WPoly::new();
    for (k, v) in a {
        let scaled = v.mul_ref(c);
        if !scaled.is_zero_series() {
            out.insert(k.clone(), scaled);
        }
    }
    out
}

/// exp(sum_j coeffs[j] s_j) up to weight `k`, where coeffs[j] multiplies
/// the j-th power sum (1-indexed; coeffs[0] unused).
fn multiplicative_sequence(log_coeffs: &[QSeries<Rat>], k: u32, trunc_q: usize) -> WPoly {
    // Power sums in the elementary basis via Newton's identities:
    // s_j = e_1 s_{j-1} - e_2 s_{j-2} + ... + (-1)^{j-1} j e_j.
    let e = |j: u32| -> WPoly {
        let mut w = WPoly::new();
        w.insert(vec![j], QSeries::one_trunc(trunc_q));
        w
    };
    let mut power_sums: Vec<WPoly> = vec![WPoly::new()]; // s_0 unused
    for j in 1..=k {
        let mut sj = WPoly::new();
        let mut sign = rat(1, 1);
        for i in 1..j {
            let term = wpoly_mul(&e(i), &power_sums[(j - i) as usize], k);
            sj = wpoly_add(&sj, &wpoly_scale(&term, &QSeries::constant(sign.clone(), trunc_q)));
            sign = -sign;
        }
        let last = wpoly_scale(
            &e(j),
            &QSeries::constant(sign * rat(j as i64, 1), trunc_q),
        );
        sj = wpoly_add(&sj, &last);
        power_sums.push(sj);
    }

    // L = sum_j c_j s_j, then exp(L) truncated at weight k.
    let mut l = WPoly::new();
    for j in 1..=k {
        let c = &log_coeffs[j as usize];
        if c.is_zero_series() {
            continue;
        }
        l = wpoly_add(&l, &wpoly_scale(&power_sums[j as usize], c));
    }
    let mut acc = WPoly::new();
    acc.insert(vec![], QSeries::one_trunc(trunc_q));
    let mut pw = acc.clone();
    let mut inv_fact = rat(1, 1);
    for m in 1..=k {
        pw = wpoly_mul(&pw, &l, k);
        if pw.is_empty() {
            break;
        }
        inv_fact = inv_fact * rat(1, m as i64);
        acc = wpoly_add(
            &acc,
            &wpoly_scale(&pw, &QSeries::constant(inv_fact.clone(), trunc_q)),
        );
    }
    acc
}

/// Coefficients of log Q(z) on the even powers z^{2j}, read off sigma:
/// entry j is the z^{2j} coefficient of log(z/sigma(z)), i.e. 2 G_{2j}/(2j)!.
fn sigma_log_coefficients(k: u32, trunc_q: usize) -> Vec<QSeries<Rat>> {
    let s = sigma::sigma_series(2 * k as usize + 2, trunc_q.max(1));
    let l = s.log_z_over_sigma().expect("sigma/z is a rational unit");
    (0..=k as usize).map(|j| l.coeff(2 * j)).collect()
}

/// The weight-k multiplicative-sequence polynomial of Q(z) = z/sigma(z):
/// one q-expansion per partition of k.
pub fn genus_polynomial(k: u32, trunc_q: usize) -> BTreeMap<Partition, QSeries<Rat>> {
    genus_polynomial_perturbed(k, trunc_q, &Rat::zero())
}

/// Same, with `delta` added to the weight-2 log coefficient (the G_2
/// slot); used to demonstrate that string-like genera do not feel the
/// G_2 normalization.
pub fn genus_polynomial_perturbed(
    k: u32,
    trunc_q: usize,
    delta: &Rat,
) -> BTreeMap<Partition, QSeries<Rat>> {
    let mut coeffs = sigma_log_coefficients(k, trunc_q);
    if k >= 1 && !delta.is_zero() {
        coeffs[1] = coeffs[1].add_ref(&QSeries::constant(delta.clone(), trunc_q));
    }
    let seq = multiplicative_sequence(&coeffs, k, trunc_q);
    seq.into_iter().filter(|(key, _)| !key.is_empty()).collect()
}

/// The classical A-hat polynomial of weight k (no q anywhere): the
/// multiplicative sequence of (z/2)/sinh(z/2).
pub fn a_hat_polynomial(k: u32) -> BTreeMap<Partition, Rat> {
    // log((z/2)/sinh(z/2)) = - sum_j B_{2j} z^{2j} / (2j (2j)!)
    let b = modforms::bernoulli_numbers(2 * k as usize);
    let mut factorial = rat(1, 1);
    let mut coeffs: Vec<QSeries<Rat>> = vec![QSeries::zero_trunc(1)];
    for j in 1..=k as usize {
        for m in (2 * j - 1)..=(2 * j) {
            factorial = factorial * rat(m as i64, 1);
        }
        let c = -b[2 * j].clone() / (rat(2 * j as i64, 1) * factorial.clone());
        coeffs.push(QSeries::constant(c, 1));
    }
    let seq = multiplicative_sequence(&coeffs, k, 1);
    seq.into_iter()
        .filter(|(key, _)| !key.is_empty())
        .map(|(key, c)| (key, c.coeff(0)))
        .collect()
}

/// Pair a weight-k polynomial with the manifold's Pontryagin numbers.
fn pair<T: Clone>(
    poly: &BTreeMap<Partition, T>,
    m: &PontryaginData,
    zero: T,
    mul_add: impl Fn(&T, &Int, &T) -> T,
) -> T {
    let mut acc = zero;
    for (key, c) in poly {
        let n = m.number(key);
        if n.is_zero() {
            continue;
        }
        acc = mul_add(c, &n, &acc);
    }
    acc
}

/// The Witten genus of the given Pontryagin data.
pub fn witten_genus(m: &PontryaginData, trunc_q: usize) -> Result<GenusValue, SeriesError> {
    witten_genus_perturbed(m, trunc_q, &Rat::zero())
}

pub fn witten_genus_perturbed(
    m: &PontryaginData,
    trunc_q: usize,
    delta: &Rat,
) -> Result<GenusValue, SeriesError> {
    let k = m.degree();
    let poly = genus_polynomial_perturbed(k, trunc_q, delta);
    let qexp = pair(
        &poly,
        m,
        QSeries::zero_trunc(trunc_q),
        |c: &QSeries<Rat>, n: &Int, acc: &QSeries<Rat>| {
            acc.add_ref(&c.scale(&Rat::from_integer(n.clone())))
        },
    );
    Ok(GenusValue {
        weight: m.dim / 2,
        qexp,
    })
}

/// The A-hat genus, evaluated through the classical Bernoulli sequence
/// (independently of the q-expansion machinery).
pub fn a_hat(m: &PontryaginData) -> Result<Rat, SeriesError> {
    let poly = a_hat_polynomial(m.degree());
    Ok(pair(&poly, m, Rat::zero(), |c: &Rat, n: &Int, acc: &Rat| {
        acc + c.clone() * Rat::from_integer(n.clone())
    }))
}

/// Decomposition of a string-like genus into the weight-(dim/2) basis,
/// with the G_2-independence witness.
#[derive(Clone, Debug, PartialEq)]
pub struct ModularityReport {
    pub weight: u32,
    pub coordinates: Vec<Rat>,
    pub g2_invariant: bool,
}

pub fn modularity_check(
    m: &PontryaginData,
    trunc_q: usize,
) -> Result<ModularityReport, SeriesError> {
    if !m.string_like() {
        return Err(SeriesError::InvalidArgument(
            "modularity check needs string-like data (p1-divisible numbers zero)".to_string(),
        ));
    }
    let genus = witten_genus(m, trunc_q)?;
    let coordinates = modforms::decompose(&genus.qexp, genus.weight)?;
    let perturbed = witten_genus_perturbed(m, trunc_q, &rat(1, 1))?;
    Ok(ModularityReport {
        weight: genus.weight,
        coordinates,
        g2_invariant: perturbed.qexp == genus.qexp,
    })
}

/// The q^1 functional on the lattice generated by c4^3 and 24 Delta:
/// q^1(alpha c4^3 + beta 24 Delta) = 720 alpha + 24 beta, always
/// divisible by 24.
#[derive(Clone, Debug, PartialEq)]
pub struct Div24Report {
    pub q1: Int,
    pub divisible: bool,
}

pub fn div24_check(alpha: &Int, beta: &Int) -> Div24Report {
    let trunc = 2;
    let c4cubed = modforms::c4(trunc).pow(3);
    let d24 = modforms::delta(trunc).scale(&rat(24, 1));
    let f = c4cubed
        .scale(&Rat::from_integer(alpha.clone()))
        .add(&d24.scale(&Rat::from_integer(beta.clone())));
    let q1 = f.qexp().coeff(1);
    assert!(q1.denom().is_one(), "lattice elements are integral");
    let q1 = q1.numer().clone();
    let divisible = (&q1 % Int::from(24)).is_zero();
    Div24Report { q1, divisible }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn data(dim: u32, entries: &[(&[u32], i64)]) -> PontryaginData {
        let numbers = entries
            .iter()
            .map(|(p, n)| (p.to_vec(), Int::from(*n)))
            .collect();
        PontryaginData::new(dim, numbers).unwrap()
    }

    #[test]
    fn partition_enumeration() {
        assert_eq!(partitions(1), vec![vec![1]]);
        assert_eq!(partitions(2), vec![vec![2], vec![1, 1]]);
        assert_eq!(partitions(4).len(), 5);
        assert_eq!(partitions(6).len(), 11);
    }

    #[test]
    fn a_hat_polynomials_match_the_classical_values() {
        // A-hat_1 = -p1/24, A-hat_2 = (7 p1^2 - 4 p2)/5760.
        let k1 = a_hat_polynomial(1);
        assert_eq!(k1[&vec![1u32]], rat(-1, 24));
        let k2 = a_hat_polynomial(2);
        assert_eq!(k2[&vec![1, 1]], rat(7, 5760));
        assert_eq!(k2[&vec![2]], rat(-4, 5760));
    }

    #[test]
    fn genus_polynomial_q0_is_a_hat() {
        for k in 1..=3 {
            let witten = genus_polynomial(k, 4);
            let ahat = a_hat_polynomial(k);
            for (key, c) in &witten {
                assert_eq!(c.coeff(0), ahat[key], "partition {:?}", key);
            }
        }
    }

    #[test]
    fn degree_one_full_expansion() {
        // K_1 = G_2 * p1 = (-1/24 + q + 3q^2 + ...) p1.
        let k1 = genus_polynomial(1, 5);
        let g2 = modforms::eisenstein_g(2, 5);
        assert_eq!(k1[&vec![1u32]], g2);
    }

    #[test]
    fn sigma_log_layers_match_eisenstein_oracle() {
        // The z^{2j} layers of log(z/sigma) against independent divisor sums.
        let trunc_q = 6;
        let coeffs = sigma_log_coefficients(3, trunc_q);
        let mut factorial = rat(1, 1);
        for j in 1..=3usize {
            for m in (2 * j - 1)..=(2 * j) {
                factorial = factorial * rat(m as i64, 1);
            }
            let expected = modforms::eisenstein_g(2 * j as u32, trunc_q)
                .scale(&(rat(2, 1) / factorial.clone()));
            assert_eq!(coeffs[j], expected, "layer {}", j);
        }
    }

    #[test]
    fn chern_root_oracle_for_small_degrees() {
        // Q is even, so Q(z) = R(z^2): with x_i = z_i^2, the degree-k part
        // of prod_{i=1}^{k} R(x_i) must agree with the sequence paired
        // with e_j(x). Both sides are expanded as honest multivariate
        // series in x_0..x_{k-1} and compared coefficient by coefficient,
        // which pins every partition (k roots suffice in weight <= k).
        use crate::multiseries::{qseries_at, MultiSeries, Vars};
        let trunc_q = 3;
        for k in 1..=3u32 {
            let coeffs = sigma_log_coefficients(k, trunc_q);
            let log_r: QSeries<QSeries<Rat>> = QSeries::from_fn(k as usize + 1, |j| {
                if j == 0 {
                    QSeries::zero_trunc(trunc_q)
                } else {
                    coeffs[j].clone()
                }
            });
            let r = log_r.exp().unwrap();
            let names: Vec<String> = (0..k).map(|i| format!("x{}", i)).collect();
            let vars = Vars::from_names(names);
            let trunc = k as usize + 1;
            let mut product = MultiSeries::<QSeries<Rat>>::one(vars.clone(), trunc);
            for i in 0..k as usize {
                let xi = MultiSeries::var(vars.clone(), i, trunc);
                product = product.mul(&qseries_at(&r, &xi).unwrap());
            }

            // e_j(x_0..x_{k-1}) as series.
            let mut elementary: Vec<MultiSeries<QSeries<Rat>>> =
                vec![MultiSeries::one(vars.clone(), trunc)];
            for j in 1..=k as usize {
                let mut es = MultiSeries::<QSeries<Rat>>::zero(vars.clone(), trunc);
                for combo in combinations(k as usize, j) {
                    let mut term = MultiSeries::one(vars.clone(), trunc);
                    for &i in &combo {
                        term = term.mul(&MultiSeries::var(vars.clone(), i, trunc));
                    }
                    es = es.add(&term);
                }
                elementary.push(es);
            }

            let full = multiplicative_sequence(&coeffs, k, trunc_q);
            let mut paired = MultiSeries::<QSeries<Rat>>::zero(vars.clone(), trunc);
            for (mu, cmu) in &full {
                let mut term = MultiSeries::constant(vars.clone(), cmu.clone(), trunc);
                for &part in mu {
                    term = term.mul(&elementary[part as usize]);
                }
                paired = paired.add(&term);
            }
            assert!(
                product.sub(&paired).is_zero_series(),
                "sequence mismatch at k = {}",
                k
            );
        }
    }

    fn combinations(n: usize, take: usize) -> Vec<Vec<usize>> {
        fn go(start: usize, n: usize, take: usize) -> Vec<Vec<usize>> {
            if take == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for first in start..n {
                for mut rest in go(first + 1, n, take - 1) {
                    rest.insert(0, first);
                    out.push(rest);
                }
            }
            out
        }
        go(0, n, take)
    }

    #[test]
    fn a_hat_spot_values() {
        // dim 4 with p1 = 24 gives -1; dim 8 with p2 = 1, p1-data 0 gives
        // -4/5760 = -1/1440.
        let m4 = data(4, &[(&[1], 24)]);
        assert_eq!(a_hat(&m4).unwrap(), rat(-1, 1));
        let m8 = data(8, &[(&[2], 1)]);
        assert_eq!(a_hat(&m8).unwrap(), rat(-1, 1440));
        let zero = data(12, &[]);
        assert_eq!(a_hat(&zero).unwrap(), rat(0, 1));
    }

    #[test]
    fn q0_matches_a_hat_on_random_data() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(19);
        for dim in [4u32, 8, 12] {
            for _ in 0..20 {
                let numbers: BTreeMap<Partition, Int> = partitions(dim / 4)
                    .into_iter()
                    .map(|p| (p, Int::from(rng.gen_range(-50..=50))))
                    .collect();
                let m = PontryaginData::new(dim, numbers).unwrap();
                let genus = witten_genus(&m, 3).unwrap();
                assert_eq!(genus.qexp.coeff(0), a_hat(&m).unwrap());
            }
        }
    }

    #[test]
    fn string_like_dimension_four_vanishes() {
        let m = data(4, &[(&[1], 0)]);
        assert!(m.string_like());
        let genus = witten_genus(&m, 6).unwrap();
        assert!(genus.qexp.is_zero_series());
    }

    #[test]
    fn dim8_string_genus_is_a_multiple_of_e4() {
        let m = data(8, &[(&[2], 1)]);
        assert!(m.string_like());
        let report = modularity_check(&m, 8).unwrap();
        assert_eq!(report.weight, 4);
        assert_eq!(report.coordinates.len(), 1);
        assert_eq!(report.coordinates[0], rat(-1, 1440));
        assert!(report.g2_invariant);
    }

    #[test]
    fn dim12_string_genus_is_a_multiple_of_e6() {
        let m = data(12, &[(&[3], 1)]);
        assert!(m.string_like());
        let report = modularity_check(&m, 8).unwrap();
        assert_eq!(report.weight, 6);
        assert_eq!(report.coordinates.len(), 1);
        // K_3 at p3 with p1 = 0: G_6/120 = -(1/504) E_6 / 120
        assert_eq!(report.coordinates[0], rat(-1, 60480));
        assert!(report.g2_invariant);
    }

    #[test]
    fn g2_perturbation_moves_non_string_data() {
        let m = data(4, &[(&[1], 24)]);
        assert!(!m.string_like());
        let plain = witten_genus(&m, 4).unwrap();
        let moved = witten_genus_perturbed(&m, 4, &rat(1, 1)).unwrap();
        assert_ne!(plain.qexp, moved.qexp);
    }

    #[test]
    fn div24_generators_and_random_lattice_points() {
        let r = div24_check(&Int::from(1), &Int::from(0));
        assert_eq!(r.q1, Int::from(720));
        assert!(r.divisible);
        let r = div24_check(&Int::from(0), &Int::from(1));
        assert_eq!(r.q1, Int::from(24));
        assert!(r.divisible);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(37);
        for _ in 0..50 {
            let a = Int::from(rng.gen_range(-1000..=1000i64));
            let b = Int::from(rng.gen_range(-1000..=1000i64));
            assert!(div24_check(&a, &b).divisible);
        }
    }

    #[test]
    fn rejects_malformed_partitions() {
        let bad = PontryaginData::new(8, BTreeMap::from([(vec![1u32, 2], Int::one())]));
        assert!(bad.is_err()); // not weakly decreasing
        let bad = PontryaginData::new(8, BTreeMap::from([(vec![3u32], Int::one())]));
        assert!(bad.is_err()); // wrong total
        let bad = PontryaginData::new(10, BTreeMap::new());
        assert!(bad.is_err()); // dimension not divisible by 4
    }
}
