//! Integer matrix normal forms.
//!
//! Smith normal form over Z with both transforms tracked, plus the two
//! consumers used elsewhere in the crate: kernel generators of A x = 0 over
//! Z/m, and particular solutions of A x = b over Z/m. A column-echelon
//! (Hermite-style) reduction provides bases of column lattices and exact
//! membership tests.

use num::traits::{One, Signed, Zero};
use num::Integer;

use crate::scalar::Int;

pub type Matrix = Vec<Vec<Int>>;

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { Int::one() } else { Int::zero() })
                .collect()
        })
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let rows = a.len();
    let inner = if rows > 0 { a[0].len() } else { 0 };
    let cols = if b.is_empty() { 0 } else { b[0].len() };
    assert!(b.len() == inner, "dimension mismatch");
    let mut out = vec![vec![Int::zero(); cols]; rows];
    for i in 0..rows {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..cols {
                if !b[k][j].is_zero() {
                    out[i][j] += &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

pub fn mat_vec(a: &Matrix, x: &[Int]) -> Vec<Int> {
    a.iter()
        .map(|row| {
            row.iter()
                .zip(x)
                .map(|(c, v)| c * v)
                .fold(Int::zero(), |acc, t| acc + t)
        })
        .collect()
}

/// Smith normal form: d = u * a * v with u, v unimodular and the diagonal
/// of d nonnegative with d1 | d2 | ... .
pub struct Smith {
    pub d: Matrix,
    pub u: Matrix,
    pub v: Matrix,
    pub rank: usize,
}

impl Smith {
    pub fn diagonal(&self) -> Vec<Int> {
        let n = self
            .d
            .len()
            .min(if self.d.is_empty() { 0 } else { self.d[0].len() });
        (0..n).map(|i| self.d[i][i].clone()).collect()
    }
}

pub fn smith(a: &Matrix) -> Smith {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    let mut d = a.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);

    let n = rows.min(cols);
    let mut rank = n;
    'diag: for k in 0..n {
        loop {
            // Pivot: smallest nonzero |entry| in the trailing block.
            let mut pivot: Option<(usize, usize)> = None;
            for i in k..rows {
                for j in k..cols {
                    if !d[i][j].is_zero() {
                        let better = match pivot {
                            None => true,
                            Some((pi, pj)) => d[i][j].abs() < d[pi][pj].abs(),
                        };
                        if better {
                            pivot = Some((i, j));
                        }
                    }
                }
            }
            let (pi, pj) = match pivot {
                None => {
                    rank = k;
                    break 'diag;
                }
                Some(p) => p,
            };
            d.swap(k, pi);
            u.swap(k, pi);
            swap_cols(&mut d, k, pj);
            swap_cols(&mut v, k, pj);

            // Clear column k below the pivot.
            let mut clean = true;
            for i in k + 1..rows {
                if d[i][k].is_zero() {
                    continue;
                }
                let q = div_round(&d[i][k], &d[k][k]);
                if !q.is_zero() {
                    for j in 0..cols {
                        let t = &q * &d[k][j];
                        d[i][j] -= t;
                    }
                    for j in 0..rows {
                        let t = &q * &u[k][j];
                        u[i][j] -= t;
                    }
                }
                if !d[i][k].is_zero() {
                    clean = false;
                }
            }
            // Clear row k right of the pivot.
            for j in k + 1..cols {
                if d[k][j].is_zero() {
                    continue;
                }
                let q = div_round(&d[k][j], &d[k][k]);
                if !q.is_zero() {
                    for i in 0..rows {
                        let t = &q * &d[i][k];
                        d[i][j] -= t;
                    }
                    for i in 0..cols {
                        let t = &q * &v[i][k];
                        v[i][j] -= t;
                    }
                }
                if !d[k][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // Enforce divisibility d[k][k] | trailing entries.
            let mut fixed = true;
            'outer: for i in k + 1..rows {
                for j in k + 1..cols {
                    if !(&d[i][j] % &d[k][k]).is_zero() {
                        // Add row i to row k; the next pass shrinks the pivot.
                        for col in 0..cols {
                            let t = d[i][col].clone();
                            d[k][col] += t;
                        }
                        for col in 0..rows {
                            let t = u[i][col].clone();
                            u[k][col] += t;
                        }
                        fixed = false;
                        break 'outer;
                    }
                }
            }
            if fixed {
                break;
            }
        }
        if d[k][k].is_negative() {
            for i in 0..rows {
                d[i][k] = -d[i][k].clone();
            }
            for i in 0..cols {
                v[i][k] = -v[i][k].clone();
            }
        }
    }
    rank = (0..rank).take_while(|&i| !d[i][i].is_zero()).count();
    Smith { d, u, v, rank }
}

fn swap_cols(m: &mut Matrix, a: usize, b: usize) {
    if a == b {
        return;
    }
    for row in m.iter_mut() {
        row.swap(a, b);
    }
}

/// Division rounded to nearest, which keeps remainders small.
fn div_round(a: &Int, b: &Int) -> Int {
    let (q, r) = a.div_rem(b);
    let two_r: Int = &r * 2;
    if two_r.abs() > b.abs() {
        if r.is_negative() == b.is_negative() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Generators of the Z/m-module {x : A x = 0 (mod m)}.
pub fn kernel_mod(a: &Matrix, m: &Int) -> Vec<Vec<Int>> {
    let cols = if a.is_empty() { 0 } else { a[0].len() };
    if cols == 0 {
        return Vec::new();
    }
    if a.is_empty() {
        // No conditions: the standard basis generates.
        return identity(cols);
    }
    let s = smith(a);
    let mut gens = Vec::new();
    for i in 0..cols {
        let scale = if i < s.rank {
            let g = s.d[i][i].gcd(m);
            if g.is_one() {
                continue;
            }
            m / &g
        } else {
            Int::one()
        };
        let gen: Vec<Int> = (0..cols)
            .map(|r| (&s.v[r][i] * &scale).mod_floor(m))
            .collect();
        if gen.iter().any(|c| !c.is_zero()) {
            gens.push(gen);
        }
    }
    gens
}

/// Number of solutions of A x = 0 (mod m) with x in (Z/m)^cols, from a
/// precomputed Smith form of A.
pub fn kernel_count_from(s: &Smith, m: &Int, cols: usize) -> Int {
    let mut count = Int::one();
    for i in 0..cols {
        if i < s.rank {
            count *= s.d[i][i].gcd(m);
        } else {
            count *= m.clone();
        }
    }
    count
}

/// Number of solutions of A x = 0 (mod m) with x in (Z/m)^cols.
pub fn kernel_count_mod(a: &Matrix, m: &Int, cols: usize) -> Int {
    if a.is_empty() {
        return m.pow(cols as u32);
    }
    kernel_count_from(&smith(a), m, cols)
}

/// Enumerate every solution of A x = 0 (mod m) from a precomputed Smith
/// form; `None` if there are more than `cap`.
pub fn kernel_enumerate_from(
    s: &Smith,
    m: &Int,
    cols: usize,
    cap: usize,
) -> Option<Vec<Vec<Int>>> {
    if kernel_count_from(s, m, cols) > Int::from(cap) {
        return None;
    }
    // x = v y with d_i y_i = 0 (mod m): y_i ranges over g_i multiples of m/g_i.
    let mut radix = Vec::with_capacity(cols);
    let mut step = Vec::with_capacity(cols);
    for i in 0..cols {
        if i < s.rank {
            let g = s.d[i][i].gcd(m);
            step.push(m / &g);
            radix.push(g);
        } else {
            step.push(Int::one());
            radix.push(m.clone());
        }
    }
    enumerate_box(&radix, |digits| {
        let y: Vec<Int> = digits.iter().zip(&step).map(|(d, s)| d * s).collect();
        mat_vec(&s.v, &y).iter().map(|c| c.mod_floor(m)).collect()
    })
}

/// Enumerate every solution of A x = 0 (mod m); `None` if more than `cap`.
pub fn kernel_enumerate_mod(a: &Matrix, m: &Int, cols: usize, cap: usize) -> Option<Vec<Vec<Int>>> {
    if a.is_empty() {
        if m.pow(cols as u32) > Int::from(cap) {
            return None;
        }
        return enumerate_box(&vec![m.clone(); cols], |y| y.to_vec());
    }
    kernel_enumerate_from(&smith(a), m, cols, cap)
}

/// Walk a mixed-radix box, emitting one vector per digit combination.
pub fn enumerate_box(radix: &[Int], emit: impl Fn(&[Int]) -> Vec<Int>) -> Option<Vec<Vec<Int>>> {
    let mut digits = vec![Int::zero(); radix.len()];
    let mut out = Vec::new();
    loop {
        out.push(emit(&digits));
        let mut i = 0;
        loop {
            if i == radix.len() {
                return Some(out);
            }
            digits[i] += 1;
            if digits[i] < radix[i] {
                break;
            }
            digits[i] = Int::zero();
            i += 1;
        }
    }
}

/// One solution of A x = b (mod m), if any.
pub fn solve_mod(a: &Matrix, b: &[Int], m: &Int) -> Option<Vec<Int>> {
    let rows = a.len();
    let cols = if rows > 0 { a[0].len() } else { 0 };
    assert_eq!(b.len(), rows);
    let s = smith(a);
    let c = mat_vec(&s.u, b);
    let mut y = vec![Int::zero(); cols];
    for i in 0..rows {
        let di = if i < cols {
            s.d[i][i].clone()
        } else {
            Int::zero()
        };
        let ci = c[i].mod_floor(m);
        if di.is_zero() {
            if !ci.is_zero() {
                return None;
            }
            continue;
        }
        // d y = c (mod m): solvable iff gcd(d, m) divides c.
        let g = di.gcd(m);
        if !(&ci % &g).is_zero() {
            return None;
        }
        let m_red = m / &g;
        if m_red.is_one() {
            continue;
        }
        let d_red = (&di / &g).mod_floor(&m_red);
        let c_red = (&ci / &g).mod_floor(&m_red);
        let inv = mod_inverse(&d_red, &m_red)?;
        y[i] = (c_red * inv).mod_floor(&m_red);
    }
    let x = mat_vec(&s.v, &y);
    Some(x.iter().map(|c| c.mod_floor(m)).collect())
}

fn mod_inverse(a: &Int, m: &Int) -> Option<Int> {
    if m.is_one() {
        return Some(Int::zero());
    }
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// A column-echelon basis of the lattice spanned by the given columns:
/// pivot rows strictly increase column by column.
pub fn column_lattice_basis(columns: &[Vec<Int>]) -> Vec<Vec<Int>> {
    let mut basis: Vec<Vec<Int>> = Vec::new();
    for col in columns {
        insert_column(&mut basis, col.clone());
    }
    basis
}

fn pivot_row(col: &[Int]) -> Option<usize> {
    col.iter().position(|c| !c.is_zero())
}

fn insert_column(basis: &mut Vec<Vec<Int>>, mut v: Vec<Int>) {
    loop {
        let p = match pivot_row(&v) {
            None => return,
            Some(p) => p,
        };
        let slot = basis
            .iter()
            .position(|b| pivot_row(b).expect("basis columns are nonzero") >= p);
        match slot {
            Some(j) if pivot_row(&basis[j]) == Some(p) => {
                // Combine so the basis column holds gcd at the pivot.
                let bp = basis[j][p].clone();
                let vp = v[p].clone();
                let e = bp.extended_gcd(&vp);
                let (g, x, y) = (e.gcd, e.x, e.y);
                let b_old = basis[j].clone();
                let new_b: Vec<Int> = b_old
                    .iter()
                    .zip(&v)
                    .map(|(b, w)| &x * b + &y * w)
                    .collect();
                let bq = &bp / &g;
                let vq = &vp / &g;
                let new_v: Vec<Int> = b_old
                    .iter()
                    .zip(&v)
                    .map(|(b, w)| &bq * w - &vq * b)
                    .collect();
                basis[j] = new_b;
                v = new_v;
            }
            Some(j) => {
                basis.insert(j, v);
                return;
            }
            None => {
                basis.push(v);
                return;
            }
        }
    }
}

/// Express `b` as an integer combination of an echelon basis, if possible.
pub fn solve_in_lattice(basis: &[Vec<Int>], b: &[Int]) -> Option<Vec<Int>> {
    let mut rem: Vec<Int> = b.to_vec();
    let mut coords = Vec::with_capacity(basis.len());
    for col in basis {
        let p = pivot_row(col).expect("basis columns are nonzero");
        let (q, r) = rem[p].div_rem(&col[p]);
        if !r.is_zero() {
            return None;
        }
        for (i, c) in col.iter().enumerate() {
            rem[i] -= &q * c;
        }
        coords.push(q);
    }
    if rem.iter().all(|c| c.is_zero()) {
        Some(coords)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use rand::{Rng, SeedableRng};

    fn m(rows: &[&[i64]]) -> Matrix {
        rows.iter()
            .map(|r| r.iter().map(|&x| int(x)).collect())
            .collect()
    }

    #[test]
    fn smith_known_form() {
        // Classical example with invariant factors 1, 3, 21, 0.
        let a = m(&[
            &[-6, 111, -36, 6],
            &[5, -672, 210, 74],
            &[0, -255, 81, 24],
            &[-7, 255, -81, -10],
        ]);
        let s = smith(&a);
        assert_eq!(s.diagonal(), vec![int(1), int(3), int(21), int(0)]);
        assert_eq!(s.rank, 3);
        // u a v = d
        let uav = mat_mul(&mat_mul(&s.u, &a), &s.v);
        assert_eq!(uav, s.d);
    }

    #[test]
    fn smith_random_property() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let rows = rng.gen_range(1..5);
            let cols = rng.gen_range(1..5);
            let a: Matrix = (0..rows)
                .map(|_| (0..cols).map(|_| int(rng.gen_range(-9..=9))).collect())
                .collect();
            let s = smith(&a);
            assert_eq!(mat_mul(&mat_mul(&s.u, &a), &s.v), s.d);
            let diag = s.diagonal();
            for w in diag.windows(2) {
                if !w[1].is_zero() {
                    assert!(!w[0].is_zero(), "gap in diagonal: {:?}", diag);
                    assert!((&w[1] % &w[0]).is_zero(), "divisibility broken: {:?}", diag);
                }
            }
        }
    }

    #[test]
    fn kernel_mod_small() {
        // x + y = 0 mod 4: solutions are (t, -t), 4 of them.
        let a = m(&[&[1, 1]]);
        let gens = kernel_mod(&a, &int(4));
        assert!(!gens.is_empty());
        for g in &gens {
            let s = (&g[0] + &g[1]).mod_floor(&int(4));
            assert!(s.is_zero());
        }
        assert_eq!(kernel_count_mod(&a, &int(4), 2), int(4));
        let all = kernel_enumerate_mod(&a, &int(4), 2, 100).unwrap();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn solve_mod_cases() {
        // 2x = 2 mod 4 has a solution; 2x = 1 mod 4 does not.
        let a = m(&[&[2]]);
        let sol = solve_mod(&a, &[int(2)], &int(4)).unwrap();
        let residue: Int = (&sol[0] * 2 - 2) % 4;
        assert!(residue.is_zero());
        assert!(solve_mod(&a, &[int(1)], &int(4)).is_none());
    }

    #[test]
    fn lattice_basis_and_membership() {
        let cols = vec![
            vec![int(2), int(0)],
            vec![int(0), int(3)],
            vec![int(2), int(3)],
        ];
        let basis = column_lattice_basis(&cols);
        assert_eq!(basis.len(), 2);
        assert!(solve_in_lattice(&basis, &[int(4), int(3)]).is_some());
        assert!(solve_in_lattice(&basis, &[int(1), int(0)]).is_none());
        assert!(solve_in_lattice(&basis, &[int(0), int(0)]).is_some());
    }
}
