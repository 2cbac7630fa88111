//! Double description over exact rationals: extreme rays of a pointed cone
//! {x : A·x ≥ 0} given by inequality rows, built incrementally from a
//! simplicial start. Adjacency of rays is decided combinatorially from
//! incidence sets, which stays exact at these sizes (a few dozen rows).

use num_traits::{Signed, Zero};

use crate::linalg::{dot, invert, primitive_integer_vector, rank, Rat};

const MAX_ROWS: usize = 128;

/// Extreme rays of {x ∈ Q^n : row·x ≥ 0 for every row}. Requires the rows
/// to span rank n (pointed cone); returns `None` otherwise. Rays come back
/// as primitive integer vectors in a deterministic order.
pub fn extreme_rays(rows: &[Vec<Rat>]) -> Option<Vec<Vec<Rat>>> {
    let n = rows.first()?.len();
    assert!(rows.len() <= MAX_ROWS);
    if rank(rows) < n {
        return None;
    }

    // Greedy choice of n independent rows for the simplicial start.
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<Vec<Rat>> = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        if chosen.len() == n {
            break;
        }
        basis.push(row.clone());
        if rank(&basis) == basis.len() {
            chosen.push(i);
        } else {
            basis.pop();
        }
    }
    let inv = invert(&basis)?;
    // Columns of the inverse: ray_j has row_i·ray_j = δ_ij on chosen rows.
    let mut rays: Vec<Vec<Rat>> = (0..n)
        .map(|j| (0..n).map(|i| inv[i][j].clone()).collect())
        .collect();

    let mut processed: Vec<usize> = chosen.clone();
    for (h, row) in rows.iter().enumerate() {
        if chosen.contains(&h) {
            continue;
        }
        let values: Vec<Rat> = rays.iter().map(|r| dot(row, r)).collect();
        let pos: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_positive())
            .collect();
        let neg: Vec<usize> = (0..rays.len())
            .filter(|&i| values[i].is_negative())
            .collect();
        if neg.is_empty() {
            processed.push(h);
            continue;
        }

        let masks: Vec<u128> = rays
            .iter()
            .map(|r| zero_mask(r, rows, &processed))
            .collect();
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for (i, r) in rays.iter().enumerate() {
            if !values[i].is_negative() {
                next.push(r.clone());
            }
        }
        for &p in &pos {
            for &m in &neg {
                // p and m are adjacent iff no third ray's zero set contains
                // their common zero set.
                let common = masks[p] & masks[m];
                let adjacent = (0..rays.len())
                    .filter(|&k| k != p && k != m)
                    .all(|k| (masks[k] & common) != common);
                if !adjacent {
                    continue;
                }
                let combo: Vec<Rat> = (0..n)
                    .map(|c| &values[p] * &rays[m][c] - &values[m] * &rays[p][c])
                    .collect();
                debug_assert!(dot(row, &combo).is_zero());
                next.push(combo);
            }
        }
        processed.push(h);
        rays = dedup_rays(next);
    }

    let mut out: Vec<Vec<Rat>> = rays
        .into_iter()
        .map(|r| {
            primitive_integer_vector(&r)
                .into_iter()
                .map(Rat::from_integer)
                .collect()
        })
        .collect();
    out.sort();
    out.dedup();
    Some(out)
}

fn zero_mask(ray: &[Rat], rows: &[Vec<Rat>], processed: &[usize]) -> u128 {
    let mut mask = 0u128;
    for &i in processed {
        if dot(&rows[i], ray).is_zero() {
            mask |= 1u128 << i;
        }
    }
    mask
}

fn dedup_rays(rays: Vec<Vec<Rat>>) -> Vec<Vec<Rat>> {
    let mut canon: Vec<Vec<Rat>> = rays
        .into_iter()
        .map(|r| {
            primitive_integer_vector(&r)
                .into_iter()
                .map(Rat::from_integer)
                .collect()
        })
        .collect();
    canon.sort();
    canon.dedup();
    canon
}

/// Values of every row on every ray; exposes incidence downstream.
pub fn incidence(rows: &[Vec<Rat>], rays: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    rays.iter()
        .map(|ray| rows.iter().map(|row| dot(row, ray)).collect())
        .collect()
}
