//! Exact short-vector enumeration on positive definite rational Gram
//! matrices, and the minimum / minimal-vector data of a Hermitian form.
//!
//! The enumeration is a Fincke–Pohst-style tree search driven by an exact
//! rational LDLᵀ decomposition. Per-coordinate ranges are found by walking
//! outward from the interval center while the exact quadratic constraint
//! holds, so no floating point or square roots enter anywhere; the output
//! is certified exhaustive.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hermitian::{ColumnVector, HermitianForm};
use crate::linalg::Rat;
use crate::qfield::AlgebraicNum;

struct Ldl {
    diag: Vec<Rat>,
    upper: Vec<Vec<Rat>>, // upper[i][j] for j > i, else zero
}

fn ldl(gram: &[Vec<Rat>]) -> Result<Ldl> {
    let n = gram.len();
    let mut a: Vec<Vec<Rat>> = gram.to_vec();
    let mut diag = vec![Rat::zero(); n];
    let mut upper = vec![vec![Rat::zero(); n]; n];
    for i in 0..n {
        let d = a[i][i].clone();
        if !d.is_positive() {
            return Err(Error::NotPositiveDefinite);
        }
        for j in (i + 1)..n {
            upper[i][j] = &a[i][j] / &d;
        }
        for k in (i + 1)..n {
            for l in k..n {
                let sub = &d * &upper[i][k] * &upper[i][l];
                a[k][l] = &a[k][l] - sub;
            }
        }
        diag[i] = d;
    }
    Ok(Ldl { diag, upper })
}

struct Search<'a> {
    ldl: &'a Ldl,
    bound: &'a Rat,
    coords: Vec<BigInt>,
    out: Vec<(Vec<BigInt>, Rat)>,
}

impl Search<'_> {
    /// Descends levels n−1, n−2, …, 0; `used` is the value consumed by the
    /// levels above, `all_zero_above` restricts to one of each ± pair by
    /// forcing the highest nonzero coordinate positive.
    fn descend(&mut self, level: isize, used: Rat, all_zero_above: bool) {
        if level < 0 {
            if !all_zero_above {
                self.out.push((self.coords.clone(), used));
            }
            return;
        }
        let i = level as usize;
        let n = self.coords.len();
        // Center of the admissible interval at this level.
        let mut center = Rat::zero();
        for j in (i + 1)..n {
            if !self.coords[j].is_zero() {
                center += &self.ldl.upper[i][j] * Rat::from_integer(self.coords[j].clone());
            }
        }
        let remaining = self.bound - &used;
        let di = &self.ldl.diag[i];
        let fits = |x: &BigInt| -> bool {
            let t = Rat::from_integer(x.clone()) + &center;
            &(&t * &t) * di <= remaining
        };
        // Any admissible integer interval contains floor(−center) or the
        // next integer up, so two outward walks cover it.
        let start = (-&center).floor().to_integer();
        let lo_first = if all_zero_above {
            // x_i ≥ 0 branch only.
            if start.is_negative() {
                BigInt::zero()
            } else {
                start.clone()
            }
        } else {
            start.clone()
        };
        let mut x = lo_first.clone();
        while fits(&x) {
            self.step_into(i, &x, &used, &center, all_zero_above);
            if all_zero_above && x.is_zero() {
                break;
            }
            x -= 1;
            if all_zero_above && x.is_negative() {
                break;
            }
        }
        let mut x = &lo_first + 1;
        while fits(&x) {
            self.step_into(i, &x, &used, &center, all_zero_above);
            x += 1;
        }
    }

    fn step_into(&mut self, i: usize, x: &BigInt, used: &Rat, center: &Rat, all_zero_above: bool) {
        let t = Rat::from_integer(x.clone()) + center;
        let contrib = &(&t * &t) * &self.ldl.diag[i];
        self.coords[i] = x.clone();
        self.descend(
            i as isize - 1,
            used + contrib,
            all_zero_above && x.is_zero(),
        );
        self.coords[i] = BigInt::zero();
    }
}

/// Exact LLL reduction driven by the Gram matrix alone. Returns the
/// reduced Gram UᵀGU and the unimodular integer column basis U. A pure
/// speedup for the enumeration; the result contract is unchanged.
fn lll_gram(gram: &[Vec<Rat>]) -> (Vec<Vec<Rat>>, Vec<Vec<BigInt>>) {
    let n = gram.len();
    let mut basis: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(u64::from(i == j))).collect())
        .collect();
    let ip = |a: &[BigInt], b: &[BigInt]| -> Rat {
        let mut acc = Rat::zero();
        for i in 0..n {
            if a[i].is_zero() {
                continue;
            }
            for j in 0..n {
                if b[j].is_zero() {
                    continue;
                }
                acc += &gram[i][j] * Rat::from_integer(&a[i] * &b[j]);
            }
        }
        acc
    };
    // Gram-Schmidt data (μ, B) recomputed from scratch; n is at most 4.
    let gso = |basis: &[Vec<BigInt>]| -> (Vec<Vec<Rat>>, Vec<Rat>) {
        let mut mu = vec![vec![Rat::zero(); n]; n];
        let mut b = vec![Rat::zero(); n];
        for i in 0..n {
            for j in 0..i {
                let mut num = ip(&basis[i], &basis[j]);
                for l in 0..j {
                    let t = &mu[i][l] * &mu[j][l] * &b[l];
                    num -= t;
                }
                mu[i][j] = &num / &b[j];
            }
            let mut bi = ip(&basis[i], &basis[i]);
            for l in 0..i {
                let t = &mu[i][l] * &mu[i][l] * &b[l];
                bi -= t;
            }
            b[i] = bi;
        }
        (mu, b)
    };
    let round = |x: &Rat| -> BigInt {
        (x + Rat::new(BigInt::from(1), BigInt::from(2)))
            .floor()
            .to_integer()
    };

    let delta = Rat::new(BigInt::from(3), BigInt::from(4));
    let mut k = 1usize;
    while k < n {
        for j in (0..k).rev() {
            let (mu, _) = gso(&basis);
            let q = round(&mu[k][j]);
            if !q.is_zero() {
                for c in 0..n {
                    let t = &q * &basis[j][c];
                    basis[k][c] -= t;
                }
            }
        }
        let (mu, b) = gso(&basis);
        let lovasz = (&delta - &mu[k][k - 1] * &mu[k][k - 1]) * &b[k - 1];
        if b[k] >= lovasz {
            k += 1;
        } else {
            basis.swap(k, k - 1);
            k = k.max(2) - 1;
        }
    }
    let reduced: Vec<Vec<Rat>> = (0..n)
        .map(|i| (0..n).map(|j| ip(&basis[i], &basis[j])).collect())
        .collect();
    (reduced, basis)
}

/// All nonzero integer vectors x with xᵀ·gram·x ≤ bound, one per ± pair
/// (the one whose highest-index nonzero coordinate is positive), each with
/// its exact value. Works for any rank; sorted by (value, coordinates).
pub fn short_vectors_on_gram(gram: &[Vec<Rat>], bound: &Rat) -> Result<Vec<(Vec<BigInt>, Rat)>> {
    let n = gram.len();
    for row in gram {
        assert_eq!(row.len(), n, "gram matrix must be square");
    }
    if !bound.is_positive() {
        return Ok(Vec::new());
    }
    let (reduced, basis) = lll_gram(gram);
    let decomp = ldl(&reduced)?;
    let mut search = Search {
        ldl: &decomp,
        bound,
        coords: vec![BigInt::zero(); n],
        out: Vec::new(),
    };
    search.descend(n as isize - 1, Rat::zero(), true);
    let mut out: Vec<(Vec<BigInt>, Rat)> = search
        .out
        .into_iter()
        .map(|(y, value)| {
            // Map back to original coordinates and re-normalize the ± pair
            // representative: highest nonzero coordinate positive.
            let mut x: Vec<BigInt> = (0..n)
                .map(|c| {
                    let mut acc = BigInt::zero();
                    for (i, yi) in y.iter().enumerate() {
                        if !yi.is_zero() {
                            acc += yi * &basis[i][c];
                        }
                    }
                    acc
                })
                .collect();
            if let Some(h) = x.iter().rposition(|c| !c.is_zero()) {
                if x[h].is_negative() {
                    for c in &mut x {
                        *c = -(c.clone());
                    }
                }
            }
            (x, value)
        })
        .collect();
    out.sort_by(|(ca, va), (cb, vb)| va.cmp(vb).then_with(|| ca.cmp(cb)));
    Ok(out)
}

/// Rank-4 surface used by the form pipeline.
pub fn vectors_below(gram: &[Vec<Rat>], bound: &Rat) -> Result<Vec<(Vec<BigInt>, Rat)>> {
    assert_eq!(gram.len(), 4, "form Gram matrices have rank 4");
    short_vectors_on_gram(gram, bound)
}

/// The minimum m(φ) and minimal vectors M(φ) of a positive definite form.
#[derive(Debug, Clone)]
pub struct MinimalData {
    minimum: Rat,
    vectors: Vec<ColumnVector>,
    orbit_representatives: Vec<ColumnVector>,
}

impl MinimalData {
    pub fn minimum(&self) -> &Rat {
        &self.minimum
    }

    /// The full minimal-vector set, closed under negation and unit scaling.
    pub fn vectors(&self) -> &[ColumnVector] {
        &self.vectors
    }

    /// One vector per unit-scaling orbit: the lexicographically least
    /// element in ω-coordinates.
    pub fn orbit_representatives(&self) -> &[ColumnVector] {
        &self.orbit_representatives
    }
}

/// Computes m(φ) and M(φ) by exact enumeration. The enumeration bound is
/// the smallest diagonal entry of the LLL-reduced Gram matrix, an attained
/// nonzero value of the form and hence an upper bound for the minimum.
pub fn minimal_data(phi: &HermitianForm) -> Result<MinimalData> {
    if !phi.is_positive_definite() {
        return Err(Error::NotPositiveDefinite);
    }
    let ctx = phi.context();
    let gram = phi.gram_z4();
    let (reduced, _) = lll_gram(&gram);
    let bound = (0..reduced.len())
        .map(|i| reduced[i][i].clone())
        .min()
        .expect("nonempty diagonal");
    let hits = vectors_below(&gram, &bound)?;
    let minimum = hits
        .iter()
        .map(|(_, v)| v)
        .min()
        .expect("standard basis vectors lie below the bound")
        .clone();

    let to_column = |coords: &[BigInt]| -> ColumnVector {
        ColumnVector::new(
            AlgebraicNum::new(
                ctx,
                Rat::from_integer(coords[0].clone()),
                Rat::from_integer(coords[1].clone()),
            ),
            AlgebraicNum::new(
                ctx,
                Rat::from_integer(coords[2].clone()),
                Rat::from_integer(coords[3].clone()),
            ),
        )
    };

    let mut vectors: Vec<ColumnVector> = Vec::new();
    for (coords, value) in &hits {
        if *value == minimum {
            let v = to_column(coords);
            vectors.push(v.neg());
            vectors.push(v);
        }
    }
    vectors.sort_by(|a, b| a.lex_cmp(b));

    let units = ctx.units();
    let mut orbit_representatives: Vec<ColumnVector> = Vec::new();
    for v in &vectors {
        let rep = units
            .iter()
            .map(|u| v.scale(u))
            .min_by(|a, b| a.lex_cmp(b))
            .expect("unit group is nonempty");
        if !orbit_representatives.contains(&rep) {
            orbit_representatives.push(rep);
        }
    }
    orbit_representatives.sort_by(|a, b| a.lex_cmp(b));

    Ok(MinimalData {
        minimum,
        vectors,
        orbit_representatives,
    })
}
