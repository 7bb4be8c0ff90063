//! Small exact linear-algebra kernels.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use crate::rootspace::Q;

/// Solves the square system `m · x = rhs` over Q. `None` when singular.
pub fn solve(m: &[Vec<Q>], rhs: &[Q]) -> Option<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .zip(rhs)
        .map(|(row, r)| {
            let mut row = row.clone();
            row.push(*r);
            row
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, p);
        let pivot = a[col][col];
        for x in a[col].iter_mut() {
            *x /= pivot;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in col..=n {
                    let t = a[col][c] * f;
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n]).collect())
}

/// Rank of a rational matrix, computed by clearing denominators row by row
/// and running fraction-free (Bareiss) elimination over big integers.
pub fn rank_rational(rows: &[Vec<Q>]) -> usize {
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|row| {
            let l = row.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
            row.iter().map(|q| BigInt::from(q.numer() * (l / q.denom()))).collect()
        })
        .collect();
    rank_bareiss(int_rows)
}

/// Fraction-free Gaussian elimination. Every division is exact.
pub fn rank_bareiss(mut a: Vec<Vec<BigInt>>) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut prev = BigInt::from(1);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..nrows {
            for c in col + 1..ncols {
                let v = &a[rank][col] * &a[r][c] - &a[r][col] * &a[rank][c];
                a[r][c] = v / &prev;
            }
            a[r][col] = BigInt::zero();
        }
        prev = a[rank][col].clone();
        rank += 1;
    }
    rank
}

/// A primitive integer vector `c` with `Σ c_i v_i = 0`, when the vectors
/// are dependent.
pub fn integer_relation(vectors: &[Vec<Q>]) -> Option<Vec<i64>> {
    let k = vectors.len();
    if k == 0 {
        return None;
    }
    let d = vectors[0].len();
    // Row-reduce the d × k matrix whose columns are the vectors.
    let mut a: Vec<Vec<Q>> = (0..d).map(|i| vectors.iter().map(|v| v[i]).collect()).collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..k {
        let Some(p) = (row..d).find(|&r| !a[r][col].is_zero()) else {
            continue;
        };
        a.swap(row, p);
        let pv = a[row][col];
        for x in a[row].iter_mut() {
            *x /= pv;
        }
        for r in 0..d {
            if r != row && !a[r][col].is_zero() {
                let f = a[r][col];
                for c in 0..k {
                    let t = a[row][c] * f;
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let free = (0..k).find(|c| !pivots.contains(c))?;
    let mut sol = vec![Q::zero(); k];
    sol[free] = Q::from_integer(1);
    for (r, &pc) in pivots.iter().enumerate() {
        sol[pc] = -a[r][free];
    }
    let l = sol.iter().fold(1i64, |acc, q| acc.lcm(q.denom()));
    let ints: Vec<i64> = sol.iter().map(|q| q.numer() * (l / q.denom())).collect();
    let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    Some(ints.iter().map(|x| x / g).collect())
}

/// Modulus for the fast rank kernel (the Mersenne prime 2^61 − 1).
pub const PRIME: u64 = (1 << 61) - 1;

#[inline]
pub fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
pub fn add_mod(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= PRIME {
        s - PRIME
    } else {
        s
    }
}

pub fn pow_mod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, a);
        }
        a = mul_mod(a, a);
        e >>= 1;
    }
    r
}

pub fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

/// Reduces a rational into the prime field.
pub fn q_mod(q: &Q) -> u64 {
    let n = q.numer().rem_euclid(PRIME as i64) as u64;
    let d = q.denom().rem_euclid(PRIME as i64) as u64;
    mul_mod(n, inv_mod(d))
}

/// Rank over `F_p` of a matrix given as rows; consumes the rows.
pub fn rank_mod(a: &mut [Vec<u64>]) -> usize {
    let nrows = a.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = a[0].len();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == nrows {
            break;
        }
        let Some(p) = (rank..nrows).find(|&r| a[r][col] != 0) else {
            continue;
        };
        a.swap(rank, p);
        let inv = inv_mod(a[rank][col]);
        for r in rank + 1..nrows {
            if a[r][col] == 0 {
                continue;
            }
            let f = PRIME - mul_mod(a[r][col], inv);
            for c in col..ncols {
                let t = mul_mod(f, a[rank][c]);
                a[r][c] = add_mod(a[r][c], t);
            }
        }
        rank += 1;
    }
    rank
}
