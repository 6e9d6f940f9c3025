//! The residue field `F_q`, `q = p^f`.
//!
//! Elements are encoded as integers in `[0, q)` whose base-`p` digits are the
//! coefficients (constant term first) of a polynomial of degree `< f` taken
//! modulo a fixed monic irreducible of degree `f`.

use serde::{Deserialize, Serialize};

/// Conway polynomials for the small fields, coefficients constant term first.
const CONWAY: &[(u32, u32, &[u32])] = &[
    (2, 2, &[1, 1, 1]),
    (2, 3, &[1, 1, 0, 1]),
    (2, 4, &[1, 1, 0, 0, 1]),
    (2, 5, &[1, 0, 1, 0, 0, 1]),
    (2, 6, &[1, 1, 0, 1, 1, 0, 1]),
    (3, 2, &[2, 2, 1]),
    (3, 3, &[1, 2, 0, 1]),
    (5, 2, &[2, 4, 1]),
    (7, 2, &[3, 6, 1]),
];

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while (d as u64) * (d as u64) <= n as u64 {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ResidueField {
    pub p: u32,
    pub f: u32,
    pub q: u32,
    /// Monic defining polynomial, constant term first (length `f + 1`).
    pub modulus: Vec<u32>,
    #[serde(skip)]
    add: Vec<u32>,
    #[serde(skip)]
    mul: Vec<u32>,
}

impl ResidueField {
    pub(crate) fn new(p: u32, f: u32) -> Self {
        let q = p.pow(f);
        let modulus = if f == 1 {
            vec![0, 1]
        } else {
            CONWAY
                .iter()
                .find(|(cp, cf, _)| *cp == p && *cf == f)
                .map(|(_, _, c)| c.to_vec())
                .unwrap_or_else(|| smallest_irreducible(p, f))
        };
        let mut field = ResidueField {
            p,
            f,
            q,
            modulus,
            add: Vec::new(),
            mul: Vec::new(),
        };
        let qs = q as usize;
        let mut add = vec![0; qs * qs];
        let mut mul = vec![0; qs * qs];
        for a in 0..q {
            for b in 0..q {
                add[(a * q + b) as usize] = field.slow_add(a, b);
                mul[(a * q + b) as usize] = field.slow_mul(a, b);
            }
        }
        field.add = add;
        field.mul = mul;
        field
    }

    fn digits(&self, x: u32) -> Vec<u32> {
        let mut d = Vec::with_capacity(self.f as usize);
        let mut x = x;
        for _ in 0..self.f {
            d.push(x % self.p);
            x /= self.p;
        }
        d
    }

    fn undigits(&self, d: &[u32]) -> u32 {
        d.iter().rev().fold(0, |acc, &c| acc * self.p + c)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        let (da, db) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % self.p).collect();
        self.undigits(&s)
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let p = self.p;
        let f = self.f as usize;
        let (da, db) = (self.digits(a), self.digits(b));
        let mut prod = vec![0u32; 2 * f];
        for (i, x) in da.iter().enumerate() {
            for (j, y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % p;
            }
        }
        for k in (f..2 * f).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for (i, &m) in self.modulus[..f].iter().enumerate() {
                prod[k - f + i] = (prod[k - f + i] + (p - c) * m) % p;
            }
        }
        self.undigits(&prod[..f])
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    pub fn neg(&self, a: u32) -> u32 {
        let d: Vec<u32> = self.digits(a).iter().map(|&c| (self.p - c) % self.p).collect();
        self.undigits(&d)
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: u32, mut e: u64) -> u32 {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        (a != 0).then(|| self.pow(a, self.q as u64 - 2))
    }

    /// Absolute trace `F_q -> F_p`; the result is a prime-field element, i.e. `< p`.
    pub fn trace(&self, a: u32) -> u32 {
        let mut acc = 0;
        let mut x = a;
        for _ in 0..self.f {
            acc = self.add(acc, x);
            x = self.pow(x, self.p as u64);
        }
        debug_assert!(acc < self.p);
        acc
    }
}

/// Lexicographically smallest monic irreducible of degree `f` over `F_p`.
fn smallest_irreducible(p: u32, f: u32) -> Vec<u32> {
    let count = (p as u64).pow(f);
    'outer: for code in 0..count {
        let mut c = Vec::with_capacity(f as usize + 1);
        let mut x = code;
        for _ in 0..f {
            c.push((x % p as u64) as u32);
            x /= p as u64;
        }
        c.push(1);
        if c[0] == 0 {
            continue;
        }
        // trial division by every monic polynomial of degree 1..=f/2
        for d in 1..=f / 2 {
            for dc in 0..(p as u64).pow(d) {
                let mut g = Vec::with_capacity(d as usize + 1);
                let mut y = dc;
                for _ in 0..d {
                    g.push((y % p as u64) as u32);
                    y /= p as u64;
                }
                g.push(1);
                if prime_poly_rem_is_zero(&c, &g, p) {
                    continue 'outer;
                }
            }
        }
        return c;
    }
    unreachable!("irreducible polynomials exist in every degree")
}

fn prime_poly_rem_is_zero(a: &[u32], g: &[u32], p: u32) -> bool {
    let mut r = a.to_vec();
    let dg = g.len() - 1;
    for k in (dg..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (i, &gi) in g.iter().enumerate() {
            r[k - dg + i] = (r[k - dg + i] + (p - c) * gi % p) % p;
        }
    }
    r.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_axioms_small() {
        for (p, f) in [(2, 1), (2, 2), (3, 2), (2, 3), (5, 1)] {
            let k = ResidueField::new(p, f);
            for a in 0..k.q {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
                }
                for b in 0..k.q {
                    assert_eq!(k.mul(a, b), k.mul(b, a));
                    for c in 0..k.q {
                        assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn fallback_modulus_is_irreducible() {
        // 11^2 is not in the table
        let k = ResidueField::new(11, 2);
        assert_eq!(k.modulus.len(), 3);
        for a in 1..k.q {
            assert!(k.inv(a).is_some());
            assert_eq!(k.mul(a, k.inv(a).unwrap()), 1);
        }
    }

    #[test]
    fn trace_is_additive_and_onto() {
        let k = ResidueField::new(2, 2);
        let traces: Vec<u32> = (0..4).map(|a| k.trace(a)).collect();
        assert!(traces.contains(&1));
        for a in 0..4 {
            for b in 0..4 {
                assert_eq!(k.trace(k.add(a, b)), (k.trace(a) + k.trace(b)) % 2);
            }
        }
    }
}
