//! The augmentation-ideal correspondence for finite abelian groups.
//!
//! For a finite abelian group G with augmentation ideal I of Z[G] and
//! A = Z/N, additive maps I^2 -> A correspond to rigid symmetric 2-cocycles
//! G^2 -> A, and additive maps I^3 -> A to rigid symmetric functions
//! G^3 -> A that are 2-cocycles in any two of the three variables. Both
//! sides are counted independently -- the hom side through a lattice basis
//! of I^k, the function side by Smith normal form of the condition matrix
//! over Z/N -- and the explicit correspondence
//!
//!   h  |->  f(x_1, .., x_k) = h((x_1 - e) ... (x_k - e))
//!
//! is checked to be a bijection onto the solution set.

use std::collections::{BTreeMap, BTreeSet};

use num::traits::{One, Zero};
use num::Integer;

use crate::error::SeriesError;
use crate::scalar::Int;
use crate::snf;

/// A product of cyclic groups with a coefficient modulus N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupSpec {
    pub cyclic_orders: Vec<u32>,
    pub modulus: u64,
}

/// Elements are indexed 0..order in mixed radix over the cyclic factors.
struct FiniteGroup {
    orders: Vec<u32>,
    order: usize,
}

impl FiniteGroup {
    fn new(orders: &[u32]) -> Self {
        let order = orders.iter().map(|&n| n as usize).product::<usize>().max(1);
        FiniteGroup {
            orders: orders.to_vec(),
            order,
        }
    }

    fn add(&self, a: usize, b: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        let (mut a, mut b) = (a, b);
        for &n in &self.orders {
            let n = n as usize;
            let da = a % n;
            let db = b % n;
            out += ((da + db) % n) * place;
            place *= n;
            a /= n;
            b /= n;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BijectionCheck {
    /// Enumerated both sides; the image of the explicit map equals the
    /// solution set.
    Enumerated { size: usize },
    /// Too many solutions to list: sampled homs land in the solution set
    /// and stay distinct.
    Sampled { samples: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AugIdealReport {
    /// Rank of I^power as a free Z-module.
    pub rank: usize,
    /// Number of additive maps I^power -> Z/N.
    pub hom_count: Int,
    /// Number of functions G^power -> Z/N satisfying the conditions.
    pub function_count: Int,
    pub counts_agree: bool,
    pub bijection: BijectionCheck,
}

impl AugIdealReport {
    pub fn verified(&self) -> bool {
        self.counts_agree
            && match self.bijection {
                BijectionCheck::Enumerated { size } => size > 0,
                BijectionCheck::Sampled { samples } => samples > 0,
            }
    }
}

const MAX_GROUP_ORDER: usize = 64;
const MAX_UNKNOWNS: usize = 4096;
const ENUMERATION_CAP: usize = 100_000;

/// Count both sides of the correspondence and verify the explicit map.
pub fn aug_ideal_correspondence(
    spec: &FiniteGroupSpec,
    power: u32,
) -> Result<AugIdealReport, SeriesError> {
    assert!(power == 2 || power == 3, "power must be 2 or 3");
    assert!(spec.modulus >= 2, "coefficient modulus must be >= 2");
    let group = FiniteGroup::new(&spec.cyclic_orders);
    if group.order > MAX_GROUP_ORDER {
        return Err(SeriesError::BoundExceeded {
            limit: MAX_GROUP_ORDER,
        });
    }
    let k = power as usize;
    let unknowns = group.order.pow(power);
    if unknowns > MAX_UNKNOWNS {
        return Err(SeriesError::BoundExceeded {
            limit: MAX_UNKNOWNS,
        });
    }
    let n = Int::from(spec.modulus);

    // --- Hom side: lattice basis of I^k from the generator products. ---
    // As a Z-module, I^k is spanned by the products (x_1 - e)...(x_k - e);
    // the product depends only on the multiset {x_1, .., x_k}.
    let mut tuple_products: BTreeMap<Vec<usize>, Vec<Int>> = BTreeMap::new();
    for t in tuples(group.order, k) {
        let mut key = t.clone();
        key.sort_unstable();
        tuple_products
            .entry(key)
            .or_insert_with(|| generator_product(&group, &t));
    }
    let columns: Vec<Vec<Int>> = tuple_products.values().cloned().collect();
    let basis = snf::column_lattice_basis(&columns);
    let rank = basis.len();
    let hom_count = n.pow(rank as u32);

    // --- Function side: solution count of the linear conditions mod N. ---
    let conditions = condition_matrix(&group, k);
    let smith = snf::smith(&conditions);
    let function_count = snf::kernel_count_from(&smith, &n, unknowns);
    let counts_agree = hom_count == function_count;

    // --- Explicit map. ---
    // Coordinates of every generator product in the lattice basis; the
    // hom h is determined by its values on the basis.
    let mut tuple_coords: Vec<Vec<Int>> = Vec::with_capacity(unknowns);
    for t in tuples(group.order, k) {
        let mut key = t.clone();
        key.sort_unstable();
        let product = &tuple_products[&key];
        let coords = snf::solve_in_lattice(&basis, product)
            .expect("generator products lie in their own span");
        tuple_coords.push(coords);
    }

    let bijection = if hom_count <= Int::from(ENUMERATION_CAP) {
        let mut image: BTreeSet<Vec<Int>> = BTreeSet::new();
        let radix = vec![n.clone(); rank];
        let homs = snf::enumerate_box(&radix, |h| h.to_vec()).expect("bounded enumeration");
        for h in &homs {
            image.insert(apply_hom(&tuple_coords, h, &n));
        }
        let solutions = snf::kernel_enumerate_from(&smith, &n, unknowns, ENUMERATION_CAP)
            .expect("solution count within enumeration cap");
        let solution_set: BTreeSet<Vec<Int>> = solutions.into_iter().collect();
        if image == solution_set {
            BijectionCheck::Enumerated { size: image.len() }
        } else {
            BijectionCheck::Enumerated { size: 0 }
        }
    } else {
        // Spot-check: pseudo-random homs map to distinct solutions.
        let mut seen: BTreeSet<Vec<Int>> = BTreeSet::new();
        let mut ok = true;
        let mut state: u64 = 0x9e3779b97f4a7c15;
        for _ in 0..50 {
            let h: Vec<Int> = (0..rank)
                .map(|_| {
                    state = state
                        .wrapping_mul(6364136223846793005)
                        .wrapping_add(1442695040888963407);
                    Int::from((state >> 33) % spec.modulus)
                })
                .collect();
            let f = apply_hom(&tuple_coords, &h, &n);
            if !satisfies_conditions(&conditions, &f, &n) {
                ok = false;
                break;
            }
            seen.insert(f);
        }
        BijectionCheck::Sampled {
            samples: if ok { seen.len() } else { 0 },
        }
    };

    Ok(AugIdealReport {
        rank,
        hom_count,
        function_count,
        counts_agree,
        bijection,
    })
}

/// All k-tuples over 0..order in lexicographic order (last index fastest).
fn tuples(order: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::with_capacity(order.pow(k as u32));
    let mut t = vec![0usize; k];
    loop {
        out.push(t.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            t[i] += 1;
            if t[i] < order {
                break;
            }
            t[i] = 0;
        }
    }
}

/// The product (x_1 - e)(x_2 - e)...(x_k - e) expanded in Z[G].
fn generator_product(group: &FiniteGroup, t: &[usize]) -> Vec<Int> {
    // Sparse convolution: each factor at most doubles the support.
    let mut acc: BTreeMap<usize, Int> = BTreeMap::new();
    acc.insert(0, Int::one());
    for &x in t {
        let mut next: BTreeMap<usize, Int> = BTreeMap::new();
        for (&g, c) in &acc {
            *next.entry(group.add(g, x)).or_insert_with(Int::zero) += c;
            *next.entry(g).or_insert_with(Int::zero) -= c;
        }
        next.retain(|_, c| !c.is_zero());
        acc = next;
    }
    let mut dense = vec![Int::zero(); group.order];
    for (g, c) in acc {
        dense[g] = c;
    }
    dense
}

/// Index of a tuple among all |G|^k tuples, matching `tuples` order.
fn tuple_index(order: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * order + x)
}

/// Rows of the rigidity/symmetry/cocycle conditions as an integer matrix.
fn condition_matrix(group: &FiniteGroup, k: usize) -> snf::Matrix {
    let order = group.order;
    let unknowns = order.pow(k as u32);
    let mut rows: BTreeSet<Vec<Int>> = BTreeSet::new();

    let mut push = |entries: &[(usize, i64)]| {
        let mut row = vec![Int::zero(); unknowns];
        for &(idx, c) in entries {
            row[idx] += Int::from(c);
        }
        if row.iter().any(|c| !c.is_zero()) {
            rows.insert(row);
        }
    };

    // Rigid: f(e, .., e) = 0.
    push(&[(0, 1)]);

    // Symmetric under every transposition of slots.
    for a in 0..k {
        for b in a + 1..k {
            for t in tuples(order, k) {
                let mut s = t.clone();
                s.swap(a, b);
                push(&[(tuple_index(order, &t), 1), (tuple_index(order, &s), -1)]);
            }
        }
    }

    // 2-cocycle in each pair of slots, the remaining slot as a parameter:
    // f(..y..z..) + f(..x..y+z..) = f(..x..y..) + f(..x+y..z..).
    let params = k - 2;
    for a in 0..k {
        for b in a + 1..k {
            let rest: Vec<usize> = (0..k).filter(|&i| i != a && i != b).collect();
            for xyz in tuples(order, 3) {
                let (x, y, z) = (xyz[0], xyz[1], xyz[2]);
                for w in tuples(order, params) {
                    let assemble = |first: usize, second: usize| {
                        let mut t = vec![0usize; k];
                        t[a] = first;
                        t[b] = second;
                        for (slot, &val) in rest.iter().zip(w.iter()) {
                            t[*slot] = val;
                        }
                        tuple_index(order, &t)
                    };
                    push(&[
                        (assemble(y, z), 1),
                        (assemble(x, group.add(y, z)), 1),
                        (assemble(x, y), -1),
                        (assemble(group.add(x, y), z), -1),
                    ]);
                }
            }
        }
    }

    rows.into_iter().collect()
}

fn apply_hom(tuple_coords: &[Vec<Int>], h: &[Int], n: &Int) -> Vec<Int> {
    tuple_coords
        .iter()
        .map(|coords| {
            coords
                .iter()
                .zip(h)
                .fold(Int::zero(), |acc, (c, hv)| acc + c * hv)
                .mod_floor(n)
        })
        .collect()
}

fn satisfies_conditions(conditions: &snf::Matrix, f: &[Int], n: &Int) -> bool {
    conditions.iter().all(|row| {
        row.iter()
            .zip(f)
            .fold(Int::zero(), |acc, (c, v)| acc + c * v)
            .mod_floor(n)
            .is_zero()
    })
}
