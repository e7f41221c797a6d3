//! Small exact linear algebra over Q.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::scalar::Rational;

pub type Vector = Vec<Rational>;

pub fn to_q(v: &[u64]) -> Vector {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

pub fn to_q_i(v: &[i64]) -> Vector {
    v.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |s, (x, y)| s + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vector]) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(k) = (r..rows).find(|&k| !m[k][c].is_zero()) else {
            continue;
        };
        m.swap(r, k);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for k in 0..rows {
            if k != r && !m[k][c].is_zero() {
                let f = m[k][c].clone();
                let pivot_row = m[r].clone();
                for (x, y) in m[k].iter_mut().zip(&pivot_row) {
                    *x -= &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(rows: &[Vector]) -> usize {
    let mut m = rows.to_vec();
    rref(&mut m).len()
}

/// Basis of {x : rows·x = 0} in Q^ncols.
pub fn kernel(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let mut m = rows.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Rational::zero(); ncols];
            v[f] = Rational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// Coordinates λ with Σ λ_j cols[j] = b, assuming the columns are independent.
pub fn solve_in_span(cols: &[Vector], b: &[Rational]) -> Option<Vector> {
    let n = b.len();
    let e = cols.len();
    let mut m: Vec<Vector> = (0..n)
        .map(|i| {
            let mut row: Vector = cols.iter().map(|c| c[i].clone()).collect();
            row.push(b[i].clone());
            row
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.contains(&e) {
        return None;
    }
    let mut x = vec![Rational::zero(); e];
    for (r, &pc) in pivots.iter().enumerate() {
        x[pc] = m[r][e].clone();
    }
    Some(x)
}

/// Scales a nonzero rational vector to a primitive integer vector (same direction).
pub fn primitive(v: &[Rational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Determinant of a square integer matrix (Bareiss).
pub fn det_i(m: &[Vec<i64>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a: Vec<Vec<BigInt>> = m
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            let Some(s) = (k + 1..n).find(|&s| !a[s][k].is_zero()) else {
                return BigInt::zero();
            };
            a.swap(k, s);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * a[n - 1][n - 1].clone()
}

/// gcd of all e×e minors of the n×e matrix with the given columns.
pub fn maximal_minor_gcd(cols: &[Vec<u64>]) -> BigInt {
    let e = cols.len();
    let n = cols.first().map_or(0, |c| c.len());
    let mut g = BigInt::zero();
    for rows in combinations(n, e) {
        let m: Vec<Vec<i64>> = rows
            .iter()
            .map(|&r| cols.iter().map(|c| c[r] as i64).collect())
            .collect();
        g = g.gcd(&det_i(&m));
    }
    g.abs()
}

/// All k-subsets of 0..n in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}
