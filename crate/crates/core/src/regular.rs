//! Regular (cyclic) matrices, the `a`-regular normal forms and the type
//! invariants `tau`, `iota(tau, r)` and `u^tau`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cyclo::gcd;
use crate::error::{Error, Result};
use crate::group::{commutator_system, Family};
use crate::mat::{char_poly, char_poly_coeffs, det, min_poly, Mat};
use crate::poly::{factor_poly, IrreducibleSieve};
use crate::ring::{Ring, RingElem};
use crate::smith::solve_count;

/// Regularity is decided on the residue field: `x` is regular iff its
/// reduction has equal characteristic and minimal polynomials.
pub fn is_regular(x: &Mat, ring: &Ring) -> bool {
    let field = ring.residue_ring();
    let xbar = x.project(ring, 1).expect("length >= 1");
    char_poly(&xbar, &field) == min_poly(&xbar, &field)
}

/// `[v, xv, .., x^(n-1) v]` as a matrix with those columns.
fn krylov(x: &Mat, v: &[RingElem], ring: &Ring) -> Mat {
    let n = x.n;
    let mut m = Mat::zero(n);
    let mut cur = v.to_vec();
    for j in 0..n {
        for i in 0..n {
            m.set(i, j, cur[i]);
        }
        cur = x.mat_vec(&cur, ring);
    }
    m
}

/// A vector `v` with `v, xv, .., x^(n-1)v` a basis of `o_r^n`, if any. A vector
/// is cyclic iff its reduction is, so only residue digits are searched.
pub fn cyclic_vector(x: &Mat, ring: &Ring) -> Option<Vec<RingElem>> {
    let n = x.n;
    let q = ring.q() as u64;
    (1..q.pow(n as u32)).find_map(|mut code| {
        let v: Vec<RingElem> = (0..n)
            .map(|_| {
                let d = (code % q) as u32;
                code /= q;
                RingElem(d)
            })
            .collect();
        ring.is_unit(det(&krylov(x, &v, ring), ring)).then_some(v)
    })
}

/// Generators of `C_{M_n(o_r)}(x)` as an `o_r`-module.
pub fn centralizer_generators(x: &Mat, ring: &Ring) -> Vec<Mat> {
    let n = x.n;
    let sol = solve_count(&commutator_system(x, ring), n * n, ring);
    sol.generators
        .into_iter()
        .map(|g| Mat { n, data: g.into_iter().collect() })
        .collect()
}

/// Whether `C_{M_n(o_r)}(x)` is commutative.
pub fn has_abelian_centralizer(x: &Mat, ring: &Ring) -> bool {
    let gens = centralizer_generators(x, ring);
    gens.iter().enumerate().all(|(i, a)| gens[i + 1..].iter().all(|b| a.commutes_with(b, ring)))
}

/// `|o_r[x]|`, the size of the span of `I, x, .., x^(n-1)`.
pub fn polynomial_algebra_size(x: &Mat, ring: &Ring) -> u128 {
    let n = x.n;
    let mut powers = vec![Mat::identity(ring, n)];
    for k in 1..n {
        powers.push(powers[k - 1].mul(x, ring));
    }
    let rows: Vec<Vec<RingElem>> = (0..n * n).map(|e| powers.iter().map(|p| p.data[e]).collect()).collect();
    let kernel = solve_count(&rows, n, ring).count;
    (ring.order() as u128).pow(n as u32) / kernel
}

/// Whether `C_{M_n(o_r)}(x) = o_r[x]`. The inclusion of `o_r[x]` is automatic,
/// so sizes are compared.
pub fn centralizer_is_polynomial(x: &Mat, ring: &Ring) -> bool {
    let n = x.n;
    let c = solve_count(&commutator_system(x, ring), n * n, ring).count;
    c == polynomial_algebra_size(x, ring)
}

/// The matrix with subdiagonal `(a, 1, .., 1)` and last column `coeffs`.
pub fn a_regular(a: RingElem, coeffs: &[RingElem], ring: &Ring) -> Result<Mat> {
    if !ring.is_unit(a) {
        return Err(Error::NotUnit(a.0));
    }
    let n = coeffs.len();
    let mut m = Mat::zero(n);
    for i in 1..n {
        m.set(i, i - 1, if i == 1 { a } else { ring.one() });
    }
    for (i, &c) in coeffs.iter().enumerate() {
        m.set(i, n - 1, c);
    }
    Ok(m)
}

fn check_sl_characteristic(family: Family, n: usize, p: u32) -> Result<()> {
    if family == Family::SL && n as u32 % p == 0 {
        return Err(Error::SlCharacteristic { n, p });
    }
    Ok(())
}

/// Coefficient tuples of the `a`-regular elements of `g(o_r)`; for `sl_n`
/// the trace `x_n` vanishes.
pub fn a_regular_tuples(family: Family, n: usize, ring: &Ring) -> Vec<Vec<RingElem>> {
    let free = match family {
        Family::GL => n,
        Family::SL => n - 1,
    };
    let order = ring.order() as u64;
    (0..order.pow(free as u32))
        .map(|mut code| {
            let mut t: Vec<RingElem> = (0..free)
                .map(|_| {
                    let d = (code % order) as u32;
                    code /= order;
                    RingElem(d)
                })
                .collect();
            t.resize(n, ring.zero());
            t
        })
        .collect()
}

/// Number of `a`-regular classes in `g(o_r)`, `q^(n r)` for `gl_n` and
/// `q^((n-1) r)` for `sl_n`.
pub fn count_a_regular_classes(family: Family, n: usize, ring: &Ring) -> Result<u128> {
    check_sl_characteristic(family, n, ring.p())?;
    let d = match family {
        Family::GL => n as u32,
        Family::SL => n as u32 - 1,
    };
    Ok((ring.q() as u128).pow(d * ring.ell()))
}

/// `|C_{G(o_r)}(x)|` for regular `x`, counting the units (or the determinant
/// one elements) of `o_r[x]`.
pub fn regular_centralizer_order(x: &Mat, ring: &Ring, family: Family) -> u128 {
    let n = x.n;
    let mut powers = vec![Mat::identity(ring, n)];
    for k in 1..n {
        powers.push(powers[k - 1].mul(x, ring));
    }
    let order = ring.order() as u64;
    let mut count = 0u128;
    for mut code in 0..order.pow(n as u32) {
        let mut m = Mat::zero(n);
        for p in &powers {
            let c = RingElem((code % order) as u32);
            code /= order;
            if c.0 != 0 {
                m = m.add(&p.scale(c, ring), ring);
            }
        }
        let d = det(&m, ring);
        let ok = match family {
            Family::GL => ring.is_unit(d),
            Family::SL => d == ring.one(),
        };
        count += ok as u128;
    }
    count
}

/// `tau_{d,e}` stored sparsely as sorted `(d, e, count)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TypeMatrix {
    pub n: usize,
    pub entries: Vec<(u32, u32, u32)>,
}

impl TypeMatrix {
    pub fn from_entries(mut entries: Vec<(u32, u32, u32)>) -> Self {
        entries.retain(|e| e.2 > 0);
        entries.sort_unstable();
        let n = entries.iter().map(|&(d, e, c)| (d * e * c) as usize).sum();
        TypeMatrix { n, entries }
    }

    pub fn get(&self, d: u32, e: u32) -> u32 {
        self.entries.iter().find(|x| x.0 == d && x.1 == e).map_or(0, |x| x.2)
    }

    /// The `n = 2` names: cuspidal, split non-semisimple, split semisimple.
    pub fn gl2_name(&self) -> Option<&'static str> {
        match self.entries.as_slice() {
            [(2, 1, 1)] => Some("cuspidal"),
            [(1, 2, 1)] => Some("split-nss"),
            [(1, 1, 2)] => Some("split-ss"),
            _ => None,
        }
    }

    /// All `n`-typical matrices.
    pub fn all(n: usize) -> Vec<TypeMatrix> {
        let parts: Vec<(u32, u32)> = (1..=n as u32)
            .flat_map(|d| (1..=n as u32).map(move |e| (d, e)))
            .filter(|&(d, e)| (d * e) as usize <= n)
            .collect();
        let mut out = Vec::new();
        fn rec(parts: &[(u32, u32)], rest: usize, acc: &mut Vec<(u32, u32, u32)>, out: &mut Vec<TypeMatrix>) {
            let Some((&(d, e), tail)) = parts.split_first() else {
                if rest == 0 {
                    out.push(TypeMatrix::from_entries(acc.clone()));
                }
                return;
            };
            let w = (d * e) as usize;
            for c in 0..=rest / w {
                if c > 0 {
                    acc.push((d, e, c as u32));
                }
                rec(tail, rest - c * w, acc, out);
                if c > 0 {
                    acc.pop();
                }
            }
        }
        rec(&parts, n, &mut Vec::new(), &mut out);
        out.sort();
        out
    }
}

impl fmt::Display for TypeMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(name) = self.gl2_name() {
            return write!(f, "{name}");
        }
        let parts: Vec<String> = self.entries.iter().map(|(d, e, c)| format!("t{d}{e}={c}")).collect();
        write!(f, "{}", parts.join(","))
    }
}

/// Type of a regular matrix over `F_q`, from the factorization of its
/// characteristic polynomial.
pub fn type_of(xbar: &Mat, field: &Ring, sieve: &IrreducibleSieve) -> Result<TypeMatrix> {
    if !is_regular(xbar, field) {
        return Err(Error::NotRegular);
    }
    let factors = factor_poly(&char_poly(xbar, field), field, sieve)?;
    let mut entries: Vec<(u32, u32, u32)> = Vec::new();
    for (f, e) in factors {
        let d = f.degree().expect("nonconstant factor") as u32;
        match entries.iter_mut().find(|x| x.0 == d && x.1 == e) {
            Some(x) => x.2 += 1,
            None => entries.push((d, e, 1)),
        }
    }
    Ok(TypeMatrix::from_entries(entries))
}

/// `gcd` of the occurring exponents `e` and `r`.
pub fn iota(tau: &TypeMatrix, r: u64) -> u64 {
    tau.entries.iter().fold(r, |g, &(_, e, _)| gcd(g, e as u64))
}

/// `u^tau = prod (q^(de) - q^(d(e-1)))^(tau_{d,e})`.
pub fn centralizer_order_residue(tau: &TypeMatrix, q: u32) -> u128 {
    let q = q as u128;
    tau.entries
        .iter()
        .map(|&(d, e, c)| (q.pow(d * e) - q.pow(d * (e - 1))).pow(c))
        .product()
}

/// Characteristic polynomial over `o_r`, used to separate `a`-regular classes.
pub fn char_poly_over(x: &Mat, ring: &Ring) -> Vec<RingElem> {
    char_poly_coeffs(x, ring)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{centralizer, GroupSpec, GroupTable, DEFAULT_TABLE_CAP};
    use crate::mat::companion;
    use crate::ring::RingDesc;

    fn z(p: u32, l: u32) -> Ring {
        Ring::new(RingDesc::mixed(p, l).unwrap())
    }

    fn e(codes: &[u32]) -> Vec<RingElem> {
        codes.iter().map(|&c| RingElem(c)).collect()
    }

    #[test]
    fn is_regular_examples() {
        let r = z(3, 2);
        assert!(is_regular(&companion(&e(&[1, 0, 1]), &r), &r));
        assert!(!is_regular(&Mat::scalar(2, RingElem(2)), &r));
        let r4 = z(2, 2);
        // lower shift with unit a in position (2,1), arbitrary upper part
        let x = Mat::from_rows(&[&[1, 2, 3], &[3, 0, 1], &[0, 1, 2]]);
        assert!(is_regular(&x, &r4));
        assert!(cyclic_vector(&x, &r4).is_some());
    }

    #[test]
    fn a_regular_examples() {
        let f3 = z(3, 1);
        let x = a_regular(RingElem(1), &e(&[1, 0]), &f3).unwrap();
        assert_eq!(x, Mat::from_rows(&[&[0, 1], &[1, 0]]));
        assert_eq!(char_poly(&x, &f3).coeffs_u32(), vec![2, 0, 1]);
        let x = a_regular(RingElem(1), &e(&[0, 0]), &f3).unwrap();
        assert_eq!(x, Mat::from_rows(&[&[0, 0], &[1, 0]]));
        assert_eq!(char_poly(&x, &f3).coeffs_u32(), vec![0, 0, 1]);
        let r4 = z(2, 2);
        let x = a_regular(RingElem(2), &e(&[1, 1, 1]), &r4);
        assert!(matches!(x, Err(Error::NotUnit(2))));
        let x = a_regular(RingElem(3), &e(&[1, 1, 1]), &r4).unwrap();
        assert!(is_regular(&x, &r4) && cyclic_vector(&x, &r4).is_some());
    }

    #[test]
    fn class_counts() {
        assert_eq!(count_a_regular_classes(Family::GL, 2, &z(3, 1)).unwrap(), 9);
        assert_eq!(count_a_regular_classes(Family::SL, 2, &z(3, 1)).unwrap(), 3);
        assert_eq!(count_a_regular_classes(Family::GL, 2, &z(2, 2)).unwrap(), 16);
        assert!(matches!(count_a_regular_classes(Family::SL, 2, &z(2, 2)), Err(Error::SlCharacteristic { .. })));
        assert_eq!(count_a_regular_classes(Family::SL, 3, &z(2, 2)).unwrap(), 16);
        assert_eq!(a_regular_tuples(Family::SL, 2, &z(3, 2)).len(), 9);
    }

    #[test]
    fn type_examples() {
        let f3 = z(3, 1);
        let sieve = IrreducibleSieve::build(&f3, 4);
        let t = type_of(&companion(&e(&[1, 0, 1]), &f3), &f3, &sieve).unwrap();
        assert_eq!(t.entries, vec![(2, 1, 1)]);
        let t = type_of(&companion(&e(&[0, 0, 1]), &f3), &f3, &sieve).unwrap();
        assert_eq!(t.entries, vec![(1, 2, 1)]);
        let t = type_of(&companion(&e(&[2, 0, 1]), &f3), &f3, &sieve).unwrap();
        assert_eq!(t.entries, vec![(1, 1, 2)]);
        assert!(matches!(type_of(&Mat::identity(&f3, 2), &f3, &sieve), Err(Error::NotRegular)));
    }

    #[test]
    fn iota_examples() {
        assert_eq!(iota(&TypeMatrix::from_entries(vec![(2, 1, 1)]), 2), 1);
        assert_eq!(iota(&TypeMatrix::from_entries(vec![(1, 2, 1)]), 2), 2);
        assert_eq!(iota(&TypeMatrix::from_entries(vec![(1, 1, 2)]), 2), 1);
        for n in 1..=4 {
            for t in TypeMatrix::all(n) {
                let i = iota(&t, 6);
                assert!(i >= 1 && i as usize <= n);
            }
        }
    }

    #[test]
    fn typical_matrix_counts() {
        // coefficients of prod_k (1 - x^k)^(-divisors(k))
        let counts: Vec<usize> = (1..=4).map(|n| TypeMatrix::all(n).len()).collect();
        assert_eq!(counts, vec![1, 3, 5, 11]);
        assert!(TypeMatrix::all(3).iter().all(|t| t.n == 3));
    }

    #[test]
    fn centralizer_order_residue_matches_brute_force() {
        for (p, n) in [(2, 2), (3, 2), (2, 3), (3, 3)] {
            let f = z(p, 1);
            let sieve = IrreducibleSieve::build(&f, n);
            let t = GroupTable::build(&GroupSpec::with_ring(Family::GL, n, f.clone().into()), DEFAULT_TABLE_CAP).unwrap();
            let mut seen = std::collections::BTreeSet::new();
            let order = f.order() as u64;
            for code in 0..order.pow(n as u32) {
                let mut c = code;
                let mut coeffs: Vec<RingElem> = (0..n)
                    .map(|_| {
                        let d = (c % order) as u32;
                        c /= order;
                        RingElem(d)
                    })
                    .collect();
                coeffs.push(f.one());
                let x = companion(&coeffs, &f);
                let tau = type_of(&x, &f, &sieve).unwrap();
                let brute = centralizer(&t, &x, &f).unwrap().order() as u128;
                assert_eq!(centralizer_order_residue(&tau, f.q()), brute, "{tau}");
                assert_eq!(regular_centralizer_order(&x, &f, Family::GL), brute);
                seen.insert(tau);
            }
            let all = TypeMatrix::all(n);
            assert!(seen.iter().all(|t| all.contains(t)));
            if (p, n) == (3, 2) || (p, n) == (3, 3) {
                assert_eq!(seen.len(), all.len());
            }
        }
        let t = |d, e, c| TypeMatrix::from_entries(vec![(d, e, c)]);
        assert_eq!(centralizer_order_residue(&t(2, 1, 1), 3), 8);
        assert_eq!(centralizer_order_residue(&t(1, 2, 1), 3), 6);
        assert_eq!(centralizer_order_residue(&t(1, 1, 2), 3), 4);
    }
}
