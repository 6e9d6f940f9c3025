//! Polynomials over the residue field and factorization by trial division.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{Ring, RingElem};

pub const DEFAULT_FACTOR_CAP: usize = 8;

/// Coefficients constant term first, without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Poly {
    pub coeffs: Vec<RingElem>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<RingElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.0 == 0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_u32(c: &[u32]) -> Self {
        Poly::new(c.iter().map(|&x| RingElem(x)).collect())
    }

    pub fn coeffs_u32(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.0).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_monic(&self) -> bool {
        self.coeffs.last().is_some_and(|c| c.0 == 1)
    }

    pub fn mul(&self, other: &Poly, field: &Ring) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![field.zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = field.add(out[i + j], field.mul(a, b));
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder by a nonzero divisor over a field.
    pub fn div_rem(&self, d: &Poly, field: &Ring) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let lead_inv = field.inv(d.coeffs[dd]).expect("field leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::new(Vec::new()), self.clone());
        }
        let mut quot = vec![field.zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = field.mul(r[k], lead_inv);
            if c.0 == 0 {
                continue;
            }
            quot[k - dd] = c;
            for (i, &di) in d.coeffs.iter().enumerate() {
                r[k - dd + i] = field.sub(r[k - dd + i], field.mul(c, di));
            }
        }
        r.truncate(dd);
        (Poly::new(quot), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly, field: &Ring) -> Poly {
        self.div_rem(d, field).1
    }

    pub fn format(&self, field: &Ring) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, c)| c.0 != 0)
            .map(|(i, c)| {
                let cs = field.format(*c);
                match (i, c.0) {
                    (0, _) => cs,
                    (1, 1) => "t".into(),
                    (1, _) => format!("{cs}t"),
                    (_, 1) => format!("t^{i}"),
                    _ => format!("{cs}t^{i}"),
                }
            })
            .collect();
        terms.join(" + ")
    }
}

/// All monic polynomials of degree `d` in increasing code order.
pub fn monic_polys(field: &Ring, d: usize) -> impl Iterator<Item = Poly> + '_ {
    let q = field.q() as u64;
    (0..q.pow(d as u32)).map(move |mut code| {
        let mut c = Vec::with_capacity(d + 1);
        for _ in 0..d {
            c.push(RingElem((code % q) as u32));
            code /= q;
        }
        c.push(field.one());
        Poly::new(c)
    })
}

/// Monic irreducibles over `F_q` of each degree up to a cap.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IrreducibleSieve {
    pub q: u32,
    pub cap: usize,
    /// `by_degree[d]` lists the monic irreducibles of degree `d`.
    pub by_degree: Vec<Vec<Poly>>,
}

impl IrreducibleSieve {
    /// Sieve of the monic irreducibles of degree `<= cap`; each degree is
    /// screened by trial division against the lower degrees.
    pub fn build(field: &Ring, cap: usize) -> Self {
        let mut by_degree: Vec<Vec<Poly>> = vec![Vec::new(); cap + 1];
        for d in 1..=cap {
            let found: Vec<Poly> = monic_polys(field, d)
                .filter(|f| {
                    (1..=d / 2).all(|e| by_degree[e].iter().all(|g| !f.rem(g, field).is_zero()))
                })
                .collect();
            by_degree[d] = found;
        }
        IrreducibleSieve { q: field.q(), cap, by_degree }
    }

    pub fn is_irreducible(&self, f: &Poly) -> bool {
        f.degree().is_some_and(|d| d >= 1 && d <= self.cap && self.by_degree[d].contains(f))
    }

    pub fn count(&self, d: usize) -> usize {
        self.by_degree[d].len()
    }
}

/// Factors a monic polynomial into `(irreducible, exponent)` pairs, sorted by
/// degree then code. Trial division uses irreducibles up to half the degree;
/// whatever cofactor remains is then irreducible.
pub fn factor_poly(f: &Poly, field: &Ring, sieve: &IrreducibleSieve) -> Result<Vec<(Poly, u32)>> {
    let deg = f.degree().unwrap_or(0);
    if deg > sieve.cap {
        return Err(Error::DegreeCap { degree: deg, cap: sieve.cap });
    }
    debug_assert!(f.is_monic());
    let mut rest = f.clone();
    let mut out: Vec<(Poly, u32)> = Vec::new();
    for d in 1..=sieve.cap {
        if rest.degree().unwrap_or(0) < 2 * d {
            break;
        }
        for g in &sieve.by_degree[d] {
            let mut e = 0;
            loop {
                let (qt, r) = rest.div_rem(g, field);
                if !r.is_zero() {
                    break;
                }
                rest = qt;
                e += 1;
            }
            if e > 0 {
                out.push((g.clone(), e));
            }
        }
    }
    if rest.degree().unwrap_or(0) >= 1 {
        match out.iter_mut().find(|(g, _)| *g == rest) {
            Some((_, e)) => *e += 1,
            None => out.push((rest, 1)),
        }
    }
    out.sort_by(|(a, _), (b, _)| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::RingDesc;

    fn field(p: u32, f: u32) -> Ring {
        Ring::new(RingDesc::equal(p, f, 1).unwrap())
    }

    fn brute_irreducible(f: &Poly, k: &Ring) -> bool {
        let d = f.degree().unwrap();
        (1..d).all(|e| monic_polys(k, e).all(|g| !f.rem(&g, k).is_zero()))
    }

    #[test]
    fn factor_examples() {
        let f3 = field(3, 1);
        let sieve = IrreducibleSieve::build(&f3, DEFAULT_FACTOR_CAP.min(4));
        // t^2 - 1
        let f = Poly::from_u32(&[2, 0, 1]);
        assert_eq!(
            factor_poly(&f, &f3, &sieve).unwrap(),
            vec![(Poly::from_u32(&[1, 1]), 1), (Poly::from_u32(&[2, 1]), 1)]
        );
        // t^2 + 1 has no roots in F_3
        let f = Poly::from_u32(&[1, 0, 1]);
        assert!((0..3).all(|x| (x * x + 1) % 3 != 0));
        assert_eq!(factor_poly(&f, &f3, &sieve).unwrap(), vec![(f.clone(), 1)]);
        let f2 = field(2, 1);
        let sieve2 = IrreducibleSieve::build(&f2, 4);
        let t4 = Poly::from_u32(&[0, 0, 0, 0, 1]);
        assert_eq!(factor_poly(&t4, &f2, &sieve2).unwrap(), vec![(Poly::from_u32(&[0, 1]), 4)]);
        let t5 = Poly::from_u32(&[0, 0, 0, 0, 0, 1]);
        assert!(matches!(factor_poly(&t5, &f2, &sieve2), Err(Error::DegreeCap { .. })));
    }

    #[test]
    fn sieve_counts_match_necklace_formula() {
        // number of monic irreducibles of degree d over F_q: (1/d) sum_{e|d} mu(e) q^(d/e)
        let cases = [(2u32, 1u32, [2usize, 1, 2, 3, 6]), (3, 1, [3, 3, 8, 18, 48]), (2, 2, [4, 6, 20, 60, 204])];
        for (p, f, counts) in cases {
            let k = field(p, f);
            let s = IrreducibleSieve::build(&k, 5);
            for d in 1..=5 {
                assert_eq!(s.count(d), counts[d - 1], "q={} d={}", k.q(), d);
            }
        }
    }

    #[test]
    fn factorization_remultiplies_exhaustively() {
        for (p, f) in [(2, 1), (3, 1), (2, 2)] {
            let k = field(p, f);
            let sieve = IrreducibleSieve::build(&k, 4);
            for d in 1..=4 {
                for poly in monic_polys(&k, d) {
                    let factors = factor_poly(&poly, &k, &sieve).unwrap();
                    let mut prod = Poly::from_u32(&[1]);
                    for (g, e) in &factors {
                        assert!(brute_irreducible(g, &k));
                        assert!(sieve.is_irreducible(g));
                        for _ in 0..*e {
                            prod = prod.mul(g, &k);
                        }
                    }
                    assert_eq!(prod, poly);
                }
            }
        }
    }
}
