//! Exact row reduction over ℚ and Hermite normal form over ℤ.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::symreal::Rational;

/// Reduced row echelon form; zero rows are dropped.
pub(crate) fn rref(mut m: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..cols {
                    let d = &f * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Row Hermite normal form: echelon rows with positive pivots and entries
/// above each pivot reduced into `[0, pivot)`. Zero rows are dropped.
pub(crate) fn hnf(mut m: Vec<Vec<BigInt>>) -> Vec<Vec<BigInt>> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        loop {
            let Some(p) = (r..rows)
                .filter(|&i| !m[i][c].is_zero())
                .min_by(|&a, &b| m[a][c].abs().cmp(&m[b][c].abs()))
            else {
                break;
            };
            m.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows {
                if !m[i][c].is_zero() {
                    let q = m[i][c].div_floor(&m[r][c]);
                    for j in 0..cols {
                        let d = &q * &m[r][j];
                        m[i][j] -= d;
                    }
                    if !m[i][c].is_zero() {
                        clean = false;
                    }
                }
            }
            if clean {
                break;
            }
        }
        if m[r][c].is_zero() {
            continue;
        }
        if m[r][c].is_negative() {
            for x in m[r].iter_mut() {
                *x = -&*x;
            }
        }
        for i in 0..r {
            let q = m[i][c].div_floor(&m[r][c]);
            if !q.is_zero() {
                for j in 0..cols {
                    let d = &q * &m[r][j];
                    m[i][j] -= d;
                }
            }
        }
        r += 1;
    }
    m.truncate(r);
    m
}

/// Finds `c` with `Σ c_i · rows[i] = target`; free unknowns are set to zero.
pub(crate) fn solve_left(rows: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let n = rows.len();
    let cols = target.len();
    // augmented system: one equation per column
    let mut a: Vec<Vec<Rational>> = (0..cols)
        .map(|j| {
            let mut eq: Vec<Rational> = rows.iter().map(|r| r[j].clone()).collect();
            eq.push(target[j].clone());
            eq
        })
        .collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..a.len() {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=n {
                    let d = &f * &a[r][j];
                    a[i][j] -= d;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|eq| !eq[n].is_zero()) {
        return None;
    }
    let mut sol = vec![Rational::zero(); n];
    for (i, &c) in pivots.iter().enumerate() {
        sol[c] = a[i][n].clone();
    }
    Some(sol)
}

/// Basis of `{c : Σ c_i · rows[i] = 0}`.
pub(crate) fn left_kernel(rows: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let eqs: Vec<Vec<Rational>> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].clone()).collect())
        .collect();
    let red = rref(eqs);
    let pivot_cols: Vec<usize> = red
        .iter()
        .map(|row| row.iter().position(|x| !x.is_zero()).expect("nonzero row"))
        .collect();
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![Rational::zero(); n];
        v[free] = Rational::one();
        for (row, &pc) in red.iter().zip(&pivot_cols) {
            v[pc] = -row[free].clone();
        }
        basis.push(v);
    }
    basis
}

pub(crate) fn lcm_of_denominators<'a>(xs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    xs.into_iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}
