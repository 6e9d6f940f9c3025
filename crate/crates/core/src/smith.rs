//! Solution counting for homogeneous linear systems over `o_l`.
//!
//! `o_l` is a local principal ideal ring, so any matrix diagonalizes by row
//! and column operations once pivots of minimal valuation are chosen. For a
//! diagonal entry of valuation `v < l`, the kernel of multiplication by it is
//! `w^(l-v) o_l`, of size `q^v`.

use crate::ring::{Ring, RingElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolutionSpace {
    /// Exact number of solutions, a power of `q`.
    pub count: u128,
    /// `log_q(count)`.
    pub log_q: u32,
    /// Generators of the solution module.
    pub generators: Vec<Vec<RingElem>>,
    /// Valuations of the nonzero diagonal entries.
    pub diagonal: Vec<u32>,
}

/// Solves `A y = 0` for `A` given as rows of length `cols`.
pub fn solve_count(rows: &[Vec<RingElem>], cols: usize, ring: &Ring) -> SolutionSpace {
    let mut a: Vec<Vec<RingElem>> = rows.to_vec();
    let nrows = a.len();
    let ell = ring.ell();
    // column transform Q, so that the reduced matrix is A * Q
    let mut qmat: Vec<Vec<RingElem>> = (0..cols)
        .map(|i| (0..cols).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect();
    let mut diagonal = Vec::new();
    let mut s = 0;
    while s < nrows.min(cols) {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in a.iter().enumerate().skip(s) {
            for (j, &e) in row.iter().enumerate().skip(s) {
                let v = ring.valuation(e);
                if v < ell && best.map_or(true, |(bv, _, _)| v < bv) {
                    best = Some((v, i, j));
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        a.swap(s, pi);
        if pj != s {
            for row in a.iter_mut() {
                row.swap(s, pj);
            }
            for row in qmat.iter_mut() {
                row.swap(s, pj);
            }
        }
        let unit = ring.div_uniformizer_pow(a[s][s], v);
        let unit_inv = ring.inv(unit).expect("pivot / w^v is a unit");
        for i in s + 1..nrows {
            let b = a[i][s];
            if b.0 == 0 {
                continue;
            }
            let factor = ring.mul(ring.div_uniformizer_pow(b, v), unit_inv);
            for j in s..cols {
                let t = ring.mul(factor, a[s][j]);
                a[i][j] = ring.sub(a[i][j], t);
            }
        }
        for j in s + 1..cols {
            let b = a[s][j];
            if b.0 == 0 {
                continue;
            }
            let factor = ring.mul(ring.div_uniformizer_pow(b, v), unit_inv);
            for row in a.iter_mut() {
                let t = ring.mul(factor, row[s]);
                row[j] = ring.sub(row[j], t);
            }
            for row in qmat.iter_mut() {
                let t = ring.mul(factor, row[s]);
                row[j] = ring.sub(row[j], t);
            }
        }
        diagonal.push(v);
        s += 1;
    }
    let rank = diagonal.len();
    let log_q: u32 = diagonal.iter().sum::<u32>() + ell * (cols - rank) as u32;
    let mut generators = Vec::new();
    for (k, &v) in diagonal.iter().enumerate() {
        if v == 0 {
            continue;
        }
        let scale = ring.uniformizer_pow(ell - v);
        generators.push((0..cols).map(|i| ring.mul(scale, qmat[i][k])).collect());
    }
    for k in rank..cols {
        generators.push((0..cols).map(|i| qmat[i][k]).collect());
    }
    SolutionSpace {
        count: (ring.q() as u128).pow(log_q),
        log_q,
        generators,
        diagonal,
    }
}
