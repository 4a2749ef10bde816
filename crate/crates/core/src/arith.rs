//! Exact integer and rational linear algebra on small dense matrices.
//!
//! Everything here is exact: determinants are fraction-free (Bareiss) over
//! `i128`, elimination is over `Ratio<i64>`. Matrices are at most a dozen
//! rows wide in practice, so no attempt is made at asymptotic efficiency.

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

pub type Rational = Ratio<i64>;

/// Determinant by fraction-free Gaussian elimination.
///
/// Panics if the matrix is not square.
pub fn det_i128(matrix: &[Vec<i128>]) -> i128 {
    let n = matrix.len();
    assert!(matrix.iter().all(|row| row.len() == n), "det of non-square matrix");
    if n == 0 {
        return 1;
    }
    let mut a: Vec<Vec<i128>> = matrix.to_vec();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if a[k][k] == 0 {
            let Some(swap) = (k + 1..n).find(|&i| a[i][k] != 0) else {
                return 0;
            };
            a.swap(k, swap);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
            }
        }
        prev = a[k][k];
    }
    sign * a[n - 1][n - 1]
}

pub fn det_i64(matrix: &[Vec<i64>]) -> i128 {
    let wide: Vec<Vec<i128>> = matrix
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    det_i128(&wide)
}

/// Rank of a rational matrix given by rows.
pub fn rank(rows: &[Vec<Rational>]) -> usize {
    let mut a: Vec<Vec<Rational>> = rows.to_vec();
    let width = a.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..width {
        let Some(pivot) = (rank..a.len()).find(|&i| !a[i][col].is_zero()) else {
            continue;
        };
        a.swap(rank, pivot);
        let p = a[rank][col];
        for i in 0..a.len() {
            if i != rank && !a[i][col].is_zero() {
                let factor = a[i][col] / p;
                for j in col..width {
                    let delta = factor * a[rank][j];
                    a[i][j] -= delta;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Inverse of a square rational matrix, or `None` when singular.
pub fn invert(matrix: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Rational>> = matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col];
        for x in a[col].iter_mut() {
            *x /= p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let factor = a[i][col];
                for j in 0..2 * n {
                    let delta = factor * a[col][j];
                    a[i][j] -= delta;
                }
            }
        }
    }
    Some(a.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Scale a rational vector to the primitive integer vector on the same ray.
/// The zero vector maps to zeros.
pub fn primitive(v: &[Rational]) -> Vec<i64> {
    let lcm = v.iter().fold(1i64, |acc, x| acc.lcm(x.denom()));
    let ints: Vec<i64> = v.iter().map(|x| (x * lcm).to_integer()).collect();
    let g = ints.iter().fold(0i64, |acc, &x| acc.gcd(&x));
    if g == 0 {
        return ints;
    }
    ints.into_iter().map(|x| x / g).collect()
}

/// Flip sign so that the first nonzero coordinate is positive.
pub fn sign_normalize(mut v: Vec<i64>) -> Vec<i64> {
    if v.iter().find(|x| **x != 0).is_some_and(|x| x.is_negative()) {
        for x in v.iter_mut() {
            *x = -*x;
        }
    }
    v
}

pub fn to_rational(v: &[i64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x)).collect()
}

pub fn dot_i64(a: &[i64], b: &[i64]) -> i64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn factorial(n: usize) -> i128 {
    (1..=n as i128).product()
}

/// All `k`-subsets of `0..n` in lexicographic order.
pub fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(0, n, k, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

/// All permutations of `0..n` (Heap's algorithm) paired with their signs.
pub fn signed_permutations(n: usize) -> Vec<(Vec<usize>, i128)> {
    let mut perm: Vec<usize> = (0..n).collect();
    let mut out = vec![(perm.clone(), 1i128)];
    let mut c = vec![0usize; n];
    let mut sign = 1i128;
    let mut i = 1;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            sign = -sign;
            out.push((perm.clone(), sign));
            c[i] += 1;
            i = 1;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn bareiss_matches_small_cases() {
        assert_eq!(det_i64(&[vec![1, 2], vec![3, 4]]), -2);
        assert_eq!(det_i64(&[vec![0, 1], vec![1, 0]]), -1);
        assert_eq!(det_i64(&[vec![2, 0, 0], vec![0, 3, 0], vec![0, 0, 4]]), 24);
        assert_eq!(det_i64(&[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]), 0);
        assert_eq!(det_i64(&[]), 1);
    }

    #[test]
    fn inverse_round_trips() {
        let m = vec![vec![r(2, 1), r(-1, 1)], vec![r(-1, 1), r(2, 1)]];
        let inv = invert(&m).unwrap();
        assert_eq!(inv, vec![vec![r(2, 3), r(1, 3)], vec![r(1, 3), r(2, 3)]]);
        assert!(invert(&[vec![r(1, 1), r(2, 1)], vec![r(2, 1), r(4, 1)]]).is_none());
    }

    #[test]
    fn primitive_clears_denominators() {
        assert_eq!(primitive(&[r(1, 2), r(-1, 3), r(0, 1)]), vec![3, -2, 0]);
        assert_eq!(primitive(&[r(4, 1), r(6, 1)]), vec![2, 3]);
        assert_eq!(sign_normalize(vec![0, -2, 3]), vec![0, 2, -3]);
    }

    #[test]
    fn permutation_signs() {
        let perms = signed_permutations(4);
        assert_eq!(perms.len(), 24);
        assert_eq!(perms.iter().map(|p| p.1).sum::<i128>(), 0);
        for (p, s) in &perms {
            let inversions = (0..4)
                .flat_map(|i| (i + 1..4).map(move |j| (i, j)))
                .filter(|&(i, j)| p[i] > p[j])
                .count();
            assert_eq!(*s, if inversions % 2 == 0 { 1 } else { -1 });
        }
        assert_eq!(subsets(4, 2).len(), 6);
        assert_eq!(subsets(3, 0), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn rank_detects_dependence() {
        let rows = vec![to_rational(&[1, 2, 3]), to_rational(&[2, 4, 6]), to_rational(&[0, 1, 0])];
        assert_eq!(rank(&rows), 2);
    }
}
