//! Exact rank over the rationals by fraction-free (Bareiss) elimination.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::covers::IntMatrix;

/// Rank of an integer matrix over Q. Runs in `i64` with overflow checks and
/// restarts in arbitrary precision if an intermediate minor overflows.
pub fn rank(m: &IntMatrix) -> usize {
    // eliminate along the shorter side
    let (rows, cols, data) = if m.rows <= m.cols {
        (m.rows, m.cols, m.data.clone())
    } else {
        let mut t = vec![0i64; m.data.len()];
        for r in 0..m.rows {
            for c in 0..m.cols {
                t[c * m.rows + r] = m.get(r, c);
            }
        }
        (m.cols, m.rows, t)
    };
    match rank_i64(rows, cols, data.clone()) {
        Some(r) => r,
        None => rank_big(rows, cols, data.into_iter().map(BigInt::from).collect()),
    }
}

fn rank_i64(rows: usize, cols: usize, mut a: Vec<i64>) -> Option<usize> {
    let mut prev: i64 = 1;
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| a[i * cols + c] != 0) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let pivot = a[r * cols + c];
        for i in r + 1..rows {
            let f = a[i * cols + c];
            for j in c + 1..cols {
                let x = a[i * cols + j];
                let y = a[r * cols + j];
                let num = pivot.checked_mul(x)?.checked_sub(f.checked_mul(y)?)?;
                a[i * cols + j] = num / prev;
            }
            a[i * cols + c] = 0;
        }
        prev = pivot;
        r += 1;
    }
    Some(r)
}

fn rank_big(rows: usize, cols: usize, mut a: Vec<BigInt>) -> usize {
    let mut prev = BigInt::from(1);
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i * cols + c].is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..cols {
                a.swap(p * cols + j, r * cols + j);
            }
        }
        let pivot = a[r * cols + c].clone();
        for i in r + 1..rows {
            let f = a[i * cols + c].clone();
            for j in c + 1..cols {
                let num = &pivot * &a[i * cols + j] - &f * &a[r * cols + j];
                debug_assert!((&num % &prev).is_zero());
                a[i * cols + j] = num / &prev;
            }
            a[i * cols + c] = BigInt::zero();
        }
        prev = pivot;
        r += 1;
    }
    r
}
