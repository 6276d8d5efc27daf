//! Smith normal form of integer matrices and invariant factors of their
//! cokernels.
//!
//! Arithmetic is arbitrary precision throughout; pivots are chosen by minimal
//! absolute value (preferring units) to limit entry growth, so the relation
//! matrices produced by coset rewriting stay tractable.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

/// The abelian group `Z^free_rank + Z/d_1 + ... + Z/d_k` with
/// `d_1 | d_2 | ... | d_k` and every `d_i >= 2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbelianInvariants {
    pub factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl AbelianInvariants {
    pub fn torsion_order(&self) -> BigInt {
        self.factors.iter().product()
    }

    pub fn factors_u64(&self) -> Option<Vec<u64>> {
        self.factors.iter().map(|f| u64::try_from(f).ok()).collect()
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for AbelianInvariants {
    /// Grouped invariant-factor form, e.g. `(Z2)^4 x (Z4)^2` or `Z^2 x Z3`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.factors.len() {
            let mut j = i;
            while j < self.factors.len() && self.factors[j] == self.factors[i] {
                j += 1;
            }
            let d = &self.factors[i];
            if j - i == 1 {
                parts.push(format!("Z{d}"));
            } else {
                parts.push(format!("(Z{d})^{}", j - i));
            }
            i = j;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" x "))
        }
    }
}

/// Invariant factors of the cokernel `Z^cols / rowspace(rows)`.
pub fn smith_normal_form(rows: &[Vec<i64>], cols: usize) -> AbelianInvariants {
    let big: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            debug_assert_eq!(r.len(), cols);
            r.iter().map(|&x| BigInt::from(x)).collect()
        })
        .collect();
    smith_normal_form_big(big, cols)
}

pub fn smith_normal_form_big(mut m: Vec<Vec<BigInt>>, cols: usize) -> AbelianInvariants {
    let rows = m.len();
    let steps = rows.min(cols);
    let mut diagonal: Vec<BigInt> = Vec::new();

    'outer: for k in 0..steps {
        // Re-select the minimal pivot after every incomplete pass: the
        // leftover remainders are strictly smaller than the old pivot, so
        // the pivot sequence decreases and the pass count is finite.
        loop {
            match select_pivot(&m, k) {
                None => break 'outer,
                Some((pi, pj)) => {
                    m.swap(k, pi);
                    swap_cols(&mut m, k, pj);
                }
            }
            let mut clean = true;
            for i in k + 1..rows {
                if !m[i][k].is_zero() {
                    let q = quotient(&m[i][k], &m[k][k]);
                    if !q.is_zero() {
                        row_op(&mut m, i, k, &q);
                    }
                    if !m[i][k].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                continue;
            }
            // The column below the pivot is zero, so clearing the pivot row
            // cannot disturb it.
            for j in k + 1..cols {
                if !m[k][j].is_zero() {
                    let q = quotient(&m[k][j], &m[k][k]);
                    if !q.is_zero() {
                        col_op(&mut m, j, k, &q);
                    }
                    if !m[k][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        diagonal.push(m[k][k].abs());
    }

    let mut nonzero: Vec<BigInt> = diagonal.into_iter().filter(|d| !d.is_zero()).collect();
    let rank = nonzero.len();
    fix_divisibility_chain(&mut nonzero);
    let factors = nonzero.into_iter().filter(|d| !d.is_one()).collect();
    AbelianInvariants {
        factors,
        free_rank: cols - rank,
    }
}

/// Minimal-absolute-value nonzero entry of the active submatrix, preferring
/// the first unit found.
fn select_pivot(m: &[Vec<BigInt>], k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for (i, row) in m.iter().enumerate().skip(k) {
        for (j, x) in row.iter().enumerate().skip(k) {
            if x.is_zero() {
                continue;
            }
            let a = x.abs();
            if a.is_one() {
                return Some((i, j));
            }
            if best.is_none() || a < best_abs {
                best = Some((i, j));
                best_abs = a;
            }
        }
    }
    best
}

/// Truncated quotient; the remainder `a - q*b` satisfies `|rem| < |b|`.
fn quotient(a: &BigInt, b: &BigInt) -> BigInt {
    a / b
}

fn row_op(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    // target row -= q * source row
    let (lo, hi) = if target < source {
        let (a, b) = m.split_at_mut(source);
        (&mut a[target], &b[0])
    } else {
        let (a, b) = m.split_at_mut(target);
        (&mut b[0], &a[source])
    };
    for (t, s) in lo.iter_mut().zip(hi.iter()) {
        if !s.is_zero() {
            *t -= q * s;
        }
    }
}

fn col_op(m: &mut [Vec<BigInt>], target: usize, source: usize, q: &BigInt) {
    for row in m.iter_mut() {
        if !row[source].is_zero() {
            let delta = q * &row[source];
            row[target] -= delta;
        }
    }
}

fn swap_cols(m: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a != b {
        for row in m.iter_mut() {
            row.swap(a, b);
        }
    }
}

/// Repairs a diagonal into a divisibility chain by gcd/lcm exchanges; valid
/// because `diag(a, b)` and `diag(gcd, lcm)` are equivalent over Z.
fn fix_divisibility_chain(diag: &mut [BigInt]) {
    diag.sort();
    loop {
        let mut changed = false;
        for i in 0..diag.len() {
            for j in i + 1..diag.len() {
                if !(&diag[j] % &diag[i]).is_zero() {
                    let g = diag[i].gcd(&diag[j]);
                    let l = &diag[i] / &g * &diag[j];
                    diag[i] = g;
                    diag[j] = l;
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
        diag.sort();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn snf(rows: &[&[i64]]) -> AbelianInvariants {
        let cols = rows.first().map_or(0, |r| r.len());
        let owned: Vec<Vec<i64>> = rows.iter().map(|r| r.to_vec()).collect();
        smith_normal_form(&owned, cols)
    }

    #[test]
    fn identity_matrix_has_trivial_cokernel() {
        let inv = snf(&[&[1, 0], &[0, 1]]);
        assert!(inv.factors.is_empty());
        assert_eq!(inv.free_rank, 0);
    }

    #[test]
    fn two_by_two_example() {
        // |det| = 8 = 2 * 4
        let inv = snf(&[&[2, 4], &[6, 8]]);
        assert_eq!(inv.factors_u64().unwrap(), vec![2, 4]);
        assert_eq!(inv.free_rank, 0);
    }

    #[test]
    fn zero_matrix_is_free() {
        let inv = snf(&[&[0, 0, 0], &[0, 0, 0]]);
        assert!(inv.factors.is_empty());
        assert_eq!(inv.free_rank, 3);
    }

    #[test]
    fn polygonal_five_involutions_relation_matrix() {
        // Generators x1..x5; relators 2*x_i and x1+...+x5.
        let mut rows = vec![];
        for i in 0..5 {
            let mut r = vec![0i64; 5];
            r[i] = 2;
            rows.push(r);
        }
        rows.push(vec![1; 5]);
        let inv = smith_normal_form(&rows, 5);
        assert_eq!(inv.factors_u64().unwrap(), vec![2, 2, 2, 2]);
        assert_eq!(inv.free_rank, 0);
    }

    #[test]
    fn divisibility_chain_holds() {
        let inv = snf(&[&[4, 0, 0], &[0, 6, 0], &[0, 0, 10]]);
        let f = inv.factors_u64().unwrap();
        for w in f.windows(2) {
            assert_eq!(w[1] % w[0], 0, "chain broken: {f:?}");
        }
        // det = 240, torsion order preserved.
        assert_eq!(f.iter().product::<u64>(), 240);
    }

    #[test]
    fn display_groups_equal_factors() {
        let inv = AbelianInvariants {
            factors: vec![2, 2, 4, 8].into_iter().map(BigInt::from).collect(),
            free_rank: 0,
        };
        assert_eq!(inv.to_string(), "(Z2)^2 x Z4 x Z8");
        let free = AbelianInvariants {
            factors: vec![],
            free_rank: 12,
        };
        assert_eq!(free.to_string(), "Z^12");
    }

    // --- independent oracle: determinantal divisors -------------------------

    /// Bareiss fraction-free determinant.
    fn det(m: &[Vec<BigInt>]) -> BigInt {
        let n = m.len();
        if n == 0 {
            return BigInt::from(1);
        }
        let mut a: Vec<Vec<BigInt>> = m.to_vec();
        let mut prev = BigInt::from(1);
        let mut sign = 1i32;
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return BigInt::from(0),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = num / &prev; // exact by Bareiss
                }
                a[i][k] = BigInt::from(0);
            }
            prev = a[k][k].clone();
        }
        if sign < 0 {
            -a[n - 1][n - 1].clone()
        } else {
            a[n - 1][n - 1].clone()
        }
    }

    fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(i + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    /// Invariant factors via determinantal divisors: d_k = D_k / D_{k-1}
    /// where D_k is the gcd of all k x k minors.
    pub(crate) fn invariants_by_determinantal_divisors(
        rows: &[Vec<i64>],
        cols: usize,
    ) -> AbelianInvariants {
        use num_integer::Integer;
        let m: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
            .collect();
        let nr = m.len();
        let maxk = nr.min(cols);
        let mut d_prev = BigInt::from(1);
        let mut factors = Vec::new();
        let mut rank = 0;
        for k in 1..=maxk {
            let mut gcd = BigInt::from(0);
            'outer: for ri in combinations(nr, k) {
                for ci in combinations(cols, k) {
                    let sub: Vec<Vec<BigInt>> = ri
                        .iter()
                        .map(|&i| ci.iter().map(|&j| m[i][j].clone()).collect())
                        .collect();
                    gcd = gcd.gcd(&det(&sub));
                    if gcd.is_one() {
                        break 'outer;
                    }
                }
            }
            if gcd.is_zero() {
                break;
            }
            factors.push(&gcd / &d_prev);
            d_prev = gcd;
            rank = k;
        }
        AbelianInvariants {
            factors: factors.into_iter().filter(|f| !f.is_one()).collect(),
            free_rank: cols - rank,
        }
    }

    #[test]
    fn matches_determinantal_divisor_oracle_on_random_matrices() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(20240917);
        for _ in 0..100 {
            let nr = rng.gen_range(1..=8);
            let nc = rng.gen_range(1..=8);
            let rows: Vec<Vec<i64>> = (0..nr)
                .map(|_| (0..nc).map(|_| rng.gen_range(-9..=9)).collect())
                .collect();
            let fast = smith_normal_form(&rows, nc);
            let slow = invariants_by_determinantal_divisors(&rows, nc);
            assert_eq!(fast, slow, "disagreement on {rows:?}");
        }
    }
}
