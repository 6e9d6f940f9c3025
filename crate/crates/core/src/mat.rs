//! Square matrices over `o_l` (and over `F_q`, which is `o_1`).

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::poly::Poly;
use crate::ring::{Ring, RingElem};

/// Row-major `n x n` matrix of ring codes. The ring is supplied by the caller.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat {
    pub n: usize,
    pub data: SmallVec<[RingElem; 16]>,
}

impl Mat {
    pub fn zero(n: usize) -> Self {
        Mat { n, data: SmallVec::from_elem(RingElem(0), n * n) }
    }

    pub fn identity(ring: &Ring, n: usize) -> Self {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.data[i * n + i] = ring.one();
        }
        m
    }

    pub fn scalar(n: usize, c: RingElem) -> Self {
        let mut m = Mat::zero(n);
        for i in 0..n {
            m.data[i * n + i] = c;
        }
        m
    }

    pub fn from_rows(rows: &[&[u32]]) -> Self {
        let n = rows.len();
        let mut m = Mat::zero(n);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n, "matrix must be square");
            for (j, &v) in row.iter().enumerate() {
                m.data[i * n + j] = RingElem(v);
            }
        }
        m
    }

    /// Builds from raw codes, reducing each into the ring.
    pub fn from_codes(ring: &Ring, n: usize, codes: &[u32]) -> Self {
        assert_eq!(codes.len(), n * n);
        Mat { n, data: codes.iter().map(|&c| ring.elem(c)).collect() }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> RingElem {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: RingElem) {
        self.data[i * self.n + j] = v;
    }

    pub fn mul(&self, other: &Mat, ring: &Ring) -> Mat {
        let n = self.n;
        debug_assert_eq!(n, other.n);
        let mut out = Mat::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.0 == 0 {
                    continue;
                }
                for j in 0..n {
                    let idx = i * n + j;
                    out.data[idx] = ring.add(out.data[idx], ring.mul(a, other.data[k * n + j]));
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Mat, ring: &Ring) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| ring.add(a, b)).collect(),
        }
    }

    pub fn sub(&self, other: &Mat, ring: &Ring) -> Mat {
        Mat {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(&a, &b)| ring.sub(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: RingElem, ring: &Ring) -> Mat {
        Mat { n: self.n, data: self.data.iter().map(|&a| ring.mul(c, a)).collect() }
    }

    pub fn trace(&self, ring: &Ring) -> RingElem {
        (0..self.n).fold(ring.zero(), |acc, i| ring.add(acc, self.get(i, i)))
    }

    pub fn commutes_with(&self, other: &Mat, ring: &Ring) -> bool {
        self.mul(other, ring) == other.mul(self, ring)
    }

    /// Entrywise reduction to `o_i`.
    pub fn project(&self, ring: &Ring, i: u32) -> Result<Mat> {
        let mut out = self.clone();
        for e in out.data.iter_mut() {
            *e = ring.project(*e, i)?;
        }
        Ok(out)
    }

    pub fn is_identity(&self, ring: &Ring) -> bool {
        *self == Mat::identity(ring, self.n)
    }

    pub fn is_scalar(&self) -> bool {
        let n = self.n;
        (0..n).all(|i| (0..n).all(|j| if i == j { self.get(i, i) == self.get(0, 0) } else { self.get(i, j).0 == 0 }))
    }

    /// Row-major mixed-radix integer of the entry codes; lexicographic in the
    /// entries. `None` when it does not fit in 64 bits.
    pub fn key(&self, ring: &Ring) -> Option<u64> {
        let base = ring.order() as u64;
        self.data.iter().try_fold(0u64, |acc, e| acc.checked_mul(base)?.checked_add(e.0 as u64))
    }

    pub fn from_key(ring: &Ring, n: usize, mut key: u64) -> Mat {
        let base = ring.order() as u64;
        let mut m = Mat::zero(n);
        for idx in (0..n * n).rev() {
            m.data[idx] = RingElem((key % base) as u32);
            key /= base;
        }
        m
    }

    pub fn mat_vec(&self, v: &[RingElem], ring: &Ring) -> Vec<RingElem> {
        let n = self.n;
        (0..n)
            .map(|i| (0..n).fold(ring.zero(), |acc, j| ring.add(acc, ring.mul(self.get(i, j), v[j]))))
            .collect()
    }

    pub fn pow(&self, mut e: u64, ring: &Ring) -> Mat {
        let mut base = self.clone();
        let mut acc = Mat::identity(ring, self.n);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, ring);
            }
            base = base.mul(&base, ring);
            e >>= 1;
        }
        acc
    }

    /// Evaluates the polynomial with coefficients `coeffs` (constant first) at this matrix.
    pub fn eval_poly(&self, coeffs: &[RingElem], ring: &Ring) -> Mat {
        let mut acc = Mat::zero(self.n);
        for &c in coeffs.iter().rev() {
            acc = acc.mul(self, ring).add(&Mat::scalar(self.n, c), ring);
        }
        acc
    }

    pub fn format(&self, ring: &Ring) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let row: Vec<String> = (0..self.n).map(|j| ring.format(self.get(i, j))).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        format!("[{}]", rows.join(","))
    }
}

/// Characteristic polynomial `det(tI - A)` over any `o_l`, division free
/// (Samuelson–Berkowitz). Coefficients constant term first, monic of degree `n`.
pub fn char_poly_coeffs(a: &Mat, ring: &Ring) -> Vec<RingElem> {
    let n = a.n;
    // desc[i] = coefficient of t^(deg - i), built from the bottom-right corner up.
    let mut desc: Vec<RingElem> = vec![ring.one()];
    for k in (0..n).rev() {
        let m = n - 1 - k; // size of the trailing block B = A[k+1.., k+1..]
        let akk = a.get(k, k);
        // w_j = R B^j C for j = 0..m-1
        let mut w = Vec::with_capacity(m);
        let mut v: Vec<RingElem> = (k + 1..n).map(|i| a.get(i, k)).collect();
        for _ in 0..m {
            let rv = (0..m).fold(ring.zero(), |acc, t| ring.add(acc, ring.mul(a.get(k, k + 1 + t), v[t])));
            w.push(rv);
            let nv: Vec<RingElem> = (0..m)
                .map(|i| {
                    (0..m).fold(ring.zero(), |acc, t| ring.add(acc, ring.mul(a.get(k + 1 + i, k + 1 + t), v[t])))
                })
                .collect();
            v = nv;
        }
        let mut next = vec![ring.zero(); m + 2];
        for i in 0..=m + 1 {
            let pi = if i <= m { desc[i] } else { ring.zero() };
            let pim1 = if i >= 1 { desc[i - 1] } else { ring.zero() };
            next[i] = ring.sub(pi, ring.mul(akk, pim1));
        }
        for j in 0..m {
            let s = (0..=j).fold(ring.zero(), |acc, i| ring.add(acc, ring.mul(desc[i], w[j - i])));
            next[j + 2] = ring.sub(next[j + 2], s);
        }
        desc = next;
    }
    desc.reverse();
    desc
}

pub fn det(a: &Mat, ring: &Ring) -> RingElem {
    let cp = char_poly_coeffs(a, ring);
    if a.n % 2 == 0 {
        cp[0]
    } else {
        ring.neg(cp[0])
    }
}

/// Inverse by Gauss–Jordan elimination with unit pivots.
pub fn inverse(a: &Mat, ring: &Ring) -> Result<Mat> {
    let n = a.n;
    let mut m = a.clone();
    let mut inv = Mat::identity(ring, n);
    for col in 0..n {
        let pivot = (col..n).find(|&r| ring.is_unit(m.get(r, col))).ok_or(Error::NotInvertible)?;
        if pivot != col {
            for j in 0..n {
                m.data.swap(pivot * n + j, col * n + j);
                inv.data.swap(pivot * n + j, col * n + j);
            }
        }
        let pinv = ring.inv(m.get(col, col))?;
        for j in 0..n {
            m.set(col, j, ring.mul(pinv, m.get(col, j)));
            inv.set(col, j, ring.mul(pinv, inv.get(col, j)));
        }
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = m.get(r, col);
            if factor.0 == 0 {
                continue;
            }
            for j in 0..n {
                m.set(r, j, ring.sub(m.get(r, j), ring.mul(factor, m.get(col, j))));
                inv.set(r, j, ring.sub(inv.get(r, j), ring.mul(factor, inv.get(col, j))));
            }
        }
    }
    Ok(inv)
}

/// Rank of a list of vectors over a field (`ring.ell() == 1`).
pub fn field_rank(rows: &[Vec<RingElem>], ring: &Ring) -> usize {
    debug_assert_eq!(ring.ell(), 1);
    let mut rows: Vec<Vec<RingElem>> = rows.to_vec();
    let width = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..width {
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][col].0 != 0) else { continue };
        rows.swap(rank, p);
        let inv = ring.inv(rows[rank][col]).expect("nonzero field element");
        for r in 0..rows.len() {
            if r == rank || rows[r][col].0 == 0 {
                continue;
            }
            let f = ring.mul(rows[r][col], inv);
            for c in col..width {
                let v = ring.mul(f, rows[rank][c]);
                rows[r][c] = ring.sub(rows[r][c], v);
            }
        }
        rank += 1;
    }
    rank
}

pub fn char_poly(x: &Mat, field: &Ring) -> Poly {
    Poly::new(char_poly_coeffs(x, field))
}

/// Minimal polynomial over a field: the first linear dependency among
/// `I, x, x^2, ..`.
pub fn min_poly(x: &Mat, field: &Ring) -> Poly {
    debug_assert_eq!(field.ell(), 1);
    let n = x.n;
    let mut powers: Vec<Mat> = vec![Mat::identity(field, n)];
    loop {
        let d = powers.len();
        let next = powers[d - 1].mul(x, field);
        // solve next = sum c_i powers[i] via elimination on the n^2 x d system
        if let Some(c) = solve_combination(&powers, &next, field) {
            let mut coeffs: Vec<RingElem> = c.iter().map(|&ci| field.neg(ci)).collect();
            coeffs.push(field.one());
            return Poly::new(coeffs);
        }
        powers.push(next);
    }
}

fn solve_combination(basis: &[Mat], target: &Mat, field: &Ring) -> Option<Vec<RingElem>> {
    let d = basis.len();
    let rows = target.n * target.n;
    // augmented matrix, one row per entry position
    let mut aug: Vec<Vec<RingElem>> = (0..rows)
        .map(|r| {
            let mut row: Vec<RingElem> = basis.iter().map(|b| b.data[r]).collect();
            row.push(target.data[r]);
            row
        })
        .collect();
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..d {
        let Some(p) = (rank..rows).find(|&r| aug[r][col].0 != 0) else { continue };
        aug.swap(rank, p);
        let inv = field.inv(aug[rank][col]).ok()?;
        for c in 0..=d {
            aug[rank][c] = field.mul(inv, aug[rank][c]);
        }
        for r in 0..rows {
            if r != rank && aug[r][col].0 != 0 {
                let f = aug[r][col];
                for c in 0..=d {
                    let v = field.mul(f, aug[rank][c]);
                    aug[r][c] = field.sub(aug[r][c], v);
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    if (rank..rows).any(|r| aug[r][d].0 != 0) {
        return None;
    }
    let mut sol = vec![field.zero(); d];
    for (i, &col) in pivots.iter().enumerate() {
        sol[col] = aug[i][d];
    }
    Some(sol)
}

/// Companion matrix of a monic polynomial (constant term first): ones on the
/// subdiagonal, `-c_i` in the last column.
pub fn companion(coeffs: &[RingElem], ring: &Ring) -> Mat {
    let n = coeffs.len() - 1;
    let mut m = Mat::zero(n);
    for i in 1..n {
        m.set(i, i - 1, ring.one());
    }
    for i in 0..n {
        m.set(i, n - 1, ring.neg(coeffs[i]));
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDesc;

    fn z(p: u32, l: u32) -> Ring {
        Ring::new(RingDesc::mixed(p, l).unwrap())
    }

    fn det_leibniz(a: &Mat, ring: &Ring) -> RingElem {
        fn perms(n: usize) -> Vec<(Vec<usize>, bool)> {
            if n == 1 {
                return vec![(vec![0], true)];
            }
            let mut out = Vec::new();
            for (p, even) in perms(n - 1) {
                for pos in 0..n {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    let swaps = n - 1 - pos;
                    out.push((q, even == (swaps % 2 == 0)));
                }
            }
            out
        }
        let mut acc = ring.zero();
        for (p, even) in perms(a.n) {
            let term = (0..a.n).fold(ring.one(), |t, i| ring.mul(t, a.get(i, p[i])));
            acc = if even { ring.add(acc, term) } else { ring.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn det_and_inverse_examples() {
        let r = z(3, 2);
        let i3 = Mat::identity(&r, 3);
        assert_eq!(det(&i3, &r), r.one());
        assert_eq!(inverse(&i3, &r).unwrap(), i3);
        let r4 = z(2, 2);
        let u = Mat::from_rows(&[&[1, 1], &[0, 1]]);
        assert_eq!(inverse(&u, &r4).unwrap(), Mat::from_rows(&[&[1, 3], &[0, 1]]));
        let m = Mat::from_rows(&[&[0, 1], &[3, 0]]);
        assert_eq!(det(&m, &r), r.from_int(-3));
        assert!(matches!(inverse(&m, &r), Err(Error::NotInvertible)));
    }

    #[test]
    fn berkowitz_det_matches_leibniz_exhaustive_2x2_and_sampled_3x3() {
        let r = z(2, 2);
        for code in 0..256u32 {
            let m = Mat::from_codes(&r, 2, &[code % 4, (code / 4) % 4, (code / 16) % 4, code / 64]);
            assert_eq!(det(&m, &r), det_leibniz(&m, &r));
        }
        let r = Ring::new(RingDesc::equal(3, 1, 2).unwrap());
        let mut state = 12345u64;
        for _ in 0..500 {
            let codes: Vec<u32> = (0..16)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    ((state >> 33) % 9) as u32
                })
                .collect();
            let m = Mat::from_codes(&r, 4, &codes);
            assert_eq!(det(&m, &r), det_leibniz(&m, &r));
            if r.is_unit(det(&m, &r)) {
                let inv = inverse(&m, &r).unwrap();
                assert!(m.mul(&inv, &r).is_identity(&r));
            }
        }
    }

    #[test]
    fn char_poly_annihilates() {
        // Cayley–Hamilton on sampled 3x3 over Z/8
        let r = z(2, 3);
        let mut state = 99u64;
        for _ in 0..200 {
            let codes: Vec<u32> = (0..9)
                .map(|_| {
                    state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                    ((state >> 33) % 8) as u32
                })
                .collect();
            let m = Mat::from_codes(&r, 3, &codes);
            let cp = char_poly_coeffs(&m, &r);
            assert_eq!(cp.len(), 4);
            assert_eq!(cp[3], r.one());
            assert_eq!(m.eval_poly(&cp, &r), Mat::zero(3));
        }
    }

    #[test]
    fn char_and_min_poly_examples() {
        let f2 = z(2, 1);
        let zero = Mat::zero(2);
        assert_eq!(char_poly(&zero, &f2).coeffs_u32(), vec![0, 0, 1]);
        assert_eq!(min_poly(&zero, &f2).coeffs_u32(), vec![0, 1]);

        // t^2 + t + 1 over F_2
        let c = companion(&[RingElem(1), RingElem(1), RingElem(1)], &f2);
        assert_eq!(char_poly(&c, &f2).coeffs_u32(), vec![1, 1, 1]);
        assert_eq!(min_poly(&c, &f2), char_poly(&c, &f2));

        let f3 = z(3, 1);
        let i2 = Mat::identity(&f3, 2);
        // (t - 1)^2 = t^2 - 2t + 1 = t^2 + t + 1 over F_3
        assert_eq!(char_poly(&i2, &f3).coeffs_u32(), vec![1, 1, 1]);
        assert_eq!(min_poly(&i2, &f3).coeffs_u32(), vec![2, 1]);
    }

    #[test]
    fn min_poly_divides_char_poly_and_annihilates() {
        let f2 = z(2, 1);
        for code in 0..512u64 {
            let m = Mat::from_key(&f2, 3, code);
            let mp = min_poly(&m, &f2);
            let cp = char_poly(&m, &f2);
            assert_eq!(m.eval_poly(&mp.coeffs, &f2), Mat::zero(3));
            assert!(cp.rem(&mp, &f2).is_zero());
        }
    }

    #[test]
    fn key_roundtrip() {
        let r = z(3, 2);
        let m = Mat::from_rows(&[&[1, 8], &[3, 4]]);
        let k = m.key(&r).unwrap();
        assert_eq!(Mat::from_key(&r, 2, k), m);
        assert_eq!(k, ((1 * 9 + 8) * 9 + 3) * 9 + 4);
    }
}
