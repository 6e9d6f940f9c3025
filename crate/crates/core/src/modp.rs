//! Linear algebra over a prime field `F_r` with `r < 2^31`, as needed for
//! splitting class-multiplication matrices.

use crate::field::is_prime;

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Fp {
    pub r: u64,
}

impl Fp {
    pub fn new(r: u32) -> Self {
        debug_assert!(is_prime(r));
        Fp { r: r as u64 }
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.r {
            s - self.r
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.r - b
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.r
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1 % self.r;
        a %= self.r;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u64) -> u64 {
        debug_assert!(a % self.r != 0);
        self.pow(a, self.r - 2)
    }

    pub fn from_i64(&self, v: i64) -> u64 {
        v.rem_euclid(self.r as i64) as u64
    }

    /// Least primitive root.
    pub fn primitive_root(&self) -> u64 {
        let n = self.r - 1;
        let mut primes = Vec::new();
        let (mut m, mut d) = (n, 2);
        while d * d <= m {
            if m % d == 0 {
                primes.push(d);
                while m % d == 0 {
                    m /= d;
                }
            }
            d += 1;
        }
        if m > 1 {
            primes.push(m);
        }
        (2..self.r)
            .find(|&g| primes.iter().all(|&p| self.pow(g, n / p) != 1))
            .unwrap_or(1)
    }

    /// Characteristic polynomial `det(tI - A)`, constant term first, via
    /// reduction to upper Hessenberg form.
    pub fn char_poly(&self, a: &[Vec<u64>]) -> Vec<u64> {
        let n = a.len();
        let mut h: Vec<Vec<u64>> = a.to_vec();
        for m in 1..n.saturating_sub(1) {
            let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else { continue };
            if i != m {
                h.swap(i, m);
                for row in h.iter_mut() {
                    row.swap(i, m);
                }
            }
            let inv = self.inv(h[m][m - 1]);
            for i in m + 1..n {
                let u = self.mul(h[i][m - 1], inv);
                if u == 0 {
                    continue;
                }
                for j in 0..n {
                    let t = self.mul(u, h[m][j]);
                    h[i][j] = self.sub(h[i][j], t);
                }
                for row in h.iter_mut() {
                    let t = self.mul(u, row[i]);
                    row[m] = self.add(row[m], t);
                }
            }
        }
        // p_{k+1} = (t - h_kk) p_k - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i
        let mut polys: Vec<Vec<u64>> = vec![vec![1]];
        for k in 0..n {
            let pk = &polys[k];
            let mut next = vec![0u64; k + 2];
            for (d, &c) in pk.iter().enumerate() {
                next[d + 1] = self.add(next[d + 1], c);
                next[d] = self.sub(next[d], self.mul(h[k][k], c));
            }
            let mut t = 1u64;
            for i in (0..k).rev() {
                t = self.mul(t, h[i + 1][i]);
                let f = self.mul(t, h[i][k]);
                if f == 0 {
                    continue;
                }
                for (d, &c) in polys[i].iter().enumerate() {
                    next[d] = self.sub(next[d], self.mul(f, c));
                }
            }
            polys.push(next);
        }
        polys.pop().expect("nonempty")
    }

    pub fn eval(&self, poly: &[u64], x: u64) -> u64 {
        poly.iter().rev().fold(0, |acc, &c| self.add(self.mul(acc, x), c))
    }

    /// Distinct roots in increasing order, by exhaustive search.
    pub fn roots(&self, poly: &[u64]) -> Vec<u64> {
        (0..self.r).filter(|&x| self.eval(poly, x) == 0).collect()
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<u64>>) -> Vec<usize> {
        let width = rows.first().map_or(0, |r| r.len());
        let mut pivots = Vec::new();
        let mut rank = 0;
        for col in 0..width {
            let Some(p) = (rank..rows.len()).find(|&i| rows[i][col] != 0) else { continue };
            rows.swap(rank, p);
            let inv = self.inv(rows[rank][col]);
            for c in col..width {
                rows[rank][c] = self.mul(rows[rank][c], inv);
            }
            for i in 0..rows.len() {
                if i == rank || rows[i][col] == 0 {
                    continue;
                }
                let f = rows[i][col];
                for c in col..width {
                    let t = self.mul(f, rows[rank][c]);
                    rows[i][c] = self.sub(rows[i][c], t);
                }
            }
            pivots.push(col);
            rank += 1;
        }
        rows.truncate(rank);
        pivots
    }

    /// Basis of `{v : A v = 0}` for a square matrix given by rows.
    pub fn kernel(&self, a: &[Vec<u64>]) -> Vec<Vec<u64>> {
        let width = a.first().map_or(0, |r| r.len());
        let mut rows = a.to_vec();
        let pivots = self.rref(&mut rows);
        let free: Vec<usize> = (0..width).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0u64; width];
                v[f] = 1;
                for (row, &p) in rows.iter().zip(&pivots) {
                    v[p] = self.neg(row[f]);
                }
                v
            })
            .collect()
    }
}

/// Least prime `r` with `r = 1 (mod e)` and `r > lower`, up to `bound`.
pub fn prime_one_mod(e: u32, lower: u64, bound: u64) -> Option<u32> {
    let e = e as u64;
    let mut r = (lower / e + 1) * e + 1;
    while r <= bound {
        if r < u32::MAX as u64 && is_prime(r as u32) {
            return Some(r as u32);
        }
        r += e;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn det_brute(f: &Fp, a: &[Vec<u64>]) -> u64 {
        let n = a.len();
        if n == 0 {
            return 1;
        }
        let mut acc = 0;
        for j in 0..n {
            let minor: Vec<Vec<u64>> = a[1..].iter().map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &v)| v).collect()).collect();
            let term = f.mul(a[0][j], det_brute(f, &minor));
            acc = if j % 2 == 0 { f.add(acc, term) } else { f.sub(acc, term) };
        }
        acc
    }

    #[test]
    fn char_poly_matches_determinants() {
        let f = Fp::new(101);
        let mut state = 3u64;
        for n in 1..6 {
            for _ in 0..20 {
                let a: Vec<Vec<u64>> = (0..n)
                    .map(|_| {
                        (0..n)
                            .map(|_| {
                                state = state.wrapping_mul(6364136223846793005).wrapping_add(1);
                                // sparse entries exercise the pivot search
                                let v = (state >> 33) % 101;
                                if v < 40 { 0 } else { v }
                            })
                            .collect()
                    })
                    .collect();
                let cp = f.char_poly(&a);
                assert_eq!(cp.len(), n + 1);
                assert_eq!(cp[n], 1);
                for t in [0u64, 1, 5, 77] {
                    let m: Vec<Vec<u64>> = (0..n)
                        .map(|i| (0..n).map(|j| f.sub(if i == j { t } else { 0 }, a[i][j])).collect())
                        .collect();
                    assert_eq!(f.eval(&cp, t), det_brute(&f, &m));
                }
            }
        }
    }

    #[test]
    fn kernel_and_roots() {
        let f = Fp::new(7);
        let a = vec![vec![1, 2, 3], vec![2, 4, 6], vec![0, 0, 1]];
        let k = f.kernel(&a);
        assert_eq!(k.len(), 1);
        for row in &a {
            assert_eq!(row.iter().zip(&k[0]).fold(0, |s, (&x, &y)| f.add(s, f.mul(x, y))), 0);
        }
        // (t - 2)(t - 5) = t^2 - 7t + 10 = t^2 + 3 over F_7
        assert_eq!(f.roots(&[3, 0, 1]), vec![2, 5]);
        assert_eq!(prime_one_mod(72, 125, 1_000_000), Some(433));
        let g = Fp::new(433).primitive_root();
        assert_eq!(Fp::new(433).pow(g, 432), 1);
        assert!((1..432).all(|e| 432 % e != 0 || Fp::new(433).pow(g, e) != 1 || e == 432));
    }
}
