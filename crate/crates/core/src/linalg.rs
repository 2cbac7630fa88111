//! Small exact-rational linear algebra: rank, solve, inverse on dense
//! matrices of `BigRational`. Everything here is Gaussian elimination with
//! full pivot search; the matrices in this crate are at most a few dozen
//! rows of dimension 4.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn rat_frac(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// Row-echelon rank of a dense rational matrix.
pub fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let nrows = m.len();
    if nrows == 0 {
        return 0;
    }
    let ncols = m[0].len();
    let mut rank = 0;
    let mut col = 0;
    while rank < nrows && col < ncols {
        let pivot = (rank..nrows).find(|&r| !m[r][col].is_zero());
        let Some(p) = pivot else {
            col += 1;
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].clone();
        for r in (rank + 1)..nrows {
            if !m[r][col].is_zero() {
                let factor = &m[r][col] / &inv;
                for c in col..ncols {
                    let sub = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        rank += 1;
        col += 1;
    }
    rank
}

/// Solves the (possibly overdetermined) system `a x = b` exactly.
///
/// Returns `None` when the system is inconsistent or the solution is not
/// unique (rank below the number of unknowns).
pub fn solve_unique(a: &[Vec<Rat>], b: &[Rat]) -> Option<Vec<Rat>> {
    let nrows = a.len();
    assert_eq!(nrows, b.len());
    if nrows == 0 {
        return None;
    }
    let ncols = a[0].len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();

    let mut pivot_cols = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        let Some(p) = (rank..nrows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = m[rank][col].clone();
        for c in col..=ncols {
            m[rank][c] = &m[rank][c] / &inv;
        }
        for r in 0..nrows {
            if r != rank && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in col..=ncols {
                    let sub = &factor * &m[rank][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
        pivot_cols.push(col);
        rank += 1;
        if rank == nrows {
            break;
        }
    }
    if rank < ncols {
        return None;
    }
    // Inconsistent rows: 0 = nonzero.
    for r in rank..nrows {
        if !m[r][ncols].is_zero() {
            return None;
        }
    }
    let mut x = vec![rat_zero(); ncols];
    for (i, &col) in pivot_cols.iter().enumerate() {
        x[col] = m[i][ncols].clone();
    }
    Some(x)
}

/// Exact inverse of a square rational matrix; `None` if singular.
pub fn invert(a: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = a.len();
    let mut m: Vec<Vec<Rat>> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            assert_eq!(row.len(), n);
            let mut r = row.clone();
            for j in 0..n {
                r.push(if i == j { rat_one() } else { rat_zero() });
            }
            r
        })
        .collect();
    for col in 0..n {
        let Some(p) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(col, p);
        let inv = m[col][col].clone();
        for c in 0..2 * n {
            m[col][c] = &m[col][c] / &inv;
        }
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for c in 0..2 * n {
                    let sub = &factor * &m[col][c];
                    m[r][c] = &m[r][c] - sub;
                }
            }
        }
    }
    Some(m.into_iter().map(|row| row[n..].to_vec()).collect())
}

/// Dot product of two rational vectors.
pub fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    assert_eq!(a.len(), b.len());
    let mut acc = rat_zero();
    for (x, y) in a.iter().zip(b) {
        acc += x * y;
    }
    acc
}

/// Scales a nonzero rational vector to coprime integer entries, keeping
/// direction. Used to canonicalize ray representatives.
pub fn primitive_integer_vector(v: &[Rat]) -> Vec<BigInt> {
    let mut lcm = BigInt::one();
    for x in v {
        lcm = num_integer::lcm(lcm, x.denom().clone());
    }
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&lcm / x.denom())).collect();
    let mut gcd = BigInt::zero();
    for x in &ints {
        gcd = num_integer::gcd(gcd, x.clone());
    }
    if gcd.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &gcd).collect()
}

/// Floor of a rational number as a BigInt.
pub fn rat_floor(x: &Rat) -> BigInt {
    x.floor().to_integer()
}

/// True iff `x` is an integer.
pub fn rat_is_integer(x: &Rat) -> bool {
    x.denom().is_one() || (x.denom().abs().is_one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Rat>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| rat_int(x)).collect())
            .collect()
    }

    #[test]
    fn rank_of_identity_and_defect() {
        assert_eq!(rank(&m(&[&[1, 0], &[0, 1]])), 2);
        assert_eq!(rank(&m(&[&[1, 2], &[2, 4]])), 1);
        assert_eq!(rank(&m(&[&[0, 0], &[0, 0]])), 0);
    }

    #[test]
    fn solve_overdetermined_consistent() {
        // x = 3, y = -2 seen through three consistent equations.
        let a = m(&[&[1, 0], &[0, 1], &[1, 1]]);
        let b = vec![rat_int(3), rat_int(-2), rat_int(1)];
        let x = solve_unique(&a, &b).unwrap();
        assert_eq!(x, vec![rat_int(3), rat_int(-2)]);
    }

    #[test]
    fn solve_rejects_inconsistent_and_underdetermined() {
        let a = m(&[&[1, 1], &[1, 1]]);
        assert!(solve_unique(&a, &[rat_int(1), rat_int(2)]).is_none());
        assert!(solve_unique(&a, &[rat_int(1), rat_int(1)]).is_none());
    }

    #[test]
    fn invert_round_trip() {
        let a = m(&[&[2, 1], &[1, 1]]);
        let inv = invert(&a).unwrap();
        assert_eq!(inv[0][0], rat_int(1));
        assert_eq!(inv[0][1], rat_int(-1));
        assert_eq!(inv[1][0], rat_int(-1));
        assert_eq!(inv[1][1], rat_int(2));
        assert!(invert(&m(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn primitive_vector_normalizes() {
        let v = vec![rat_frac(1, 2), rat_frac(-3, 4), rat_zero()];
        let ints = primitive_integer_vector(&v);
        assert_eq!(
            ints,
            vec![BigInt::from(2), BigInt::from(-3), BigInt::from(0)]
        );
    }
}
