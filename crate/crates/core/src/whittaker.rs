//! Non-degenerate characters of `U`, the duality characters of abelian
//! congruence subgroups, and exact dimension and self-intertwining numbers of
//! `Ind_U^G(theta_a)` compared with the regular-orbit predictions.

use serde::{Deserialize, Serialize};

use crate::cyclo::CycloNum;
use crate::error::{Error, Result};
use crate::group::{is_upper_unitriangular, Family, GroupSpec};
use crate::mat::{inverse, Mat};
use crate::regular::{a_regular, a_regular_tuples, regular_centralizer_order};
use crate::ring::{primitive_char, AdditiveChar, Ring, RingElem};

/// `theta_a(u) = phi(a u_12 + u_23 + .. + u_{n-1,n})`.
#[derive(Clone, Debug)]
pub struct NonDegenChar {
    pub spec: GroupSpec,
    pub a: RingElem,
    pub phi: AdditiveChar,
}

impl NonDegenChar {
    pub fn new(spec: &GroupSpec, a: RingElem) -> Result<Self> {
        let ring = &spec.ring;
        if !ring.is_unit(a) {
            return Err(Error::NotUnit(a.0));
        }
        Ok(NonDegenChar { spec: spec.clone(), a, phi: primitive_char(ring, ring.one())? })
    }

    pub fn modulus(&self) -> u32 {
        self.phi.modulus
    }

    /// Exponent of `theta_a(u)`, assuming `u` upper unitriangular.
    #[inline]
    pub fn exponent(&self, u: &Mat) -> u32 {
        let ring = &*self.spec.ring;
        let mut s = ring.mul(self.a, u.get(0, 1));
        for i in 1..u.n - 1 {
            s = ring.add(s, u.get(i, i + 1));
        }
        self.phi.exponent(ring, s)
    }

    pub fn theta_value(&self, u: &Mat) -> Result<CycloNum> {
        if !is_upper_unitriangular(u, &self.spec.ring) {
            return Err(Error::NotUnipotent);
        }
        Ok(CycloNum::root_of_unity(self.modulus(), self.exponent(u)))
    }
}

/// `phi_x(k) = phi(tr(x^ (k - I)))` on `K^i`, for `x` in `g(o_{l-i})` and any
/// lift `x^` to `o_l`. Writing `k = I + w^i y` this is `phi(w^i tr(x^ y))`.
#[derive(Clone, Debug)]
pub struct DualityChar {
    pub i: u32,
    pub x: Mat,
    pub lift: Mat,
    phi: AdditiveChar,
}

impl DualityChar {
    /// Uses the digit lift of `x` (codes are kept as they are).
    pub fn new(ring: &Ring, x: &Mat, i: u32) -> Result<Self> {
        Self::with_lift(ring, x, x.clone(), i)
    }

    pub fn with_lift(ring: &Ring, x: &Mat, lift: Mat, i: u32) -> Result<Self> {
        let ell = ring.ell();
        if 2 * i < ell || i >= ell {
            return Err(Error::NonAbelianCongruence { i, ell });
        }
        if lift.project(ring, ell - i)? != *x {
            return Err(Error::RingMismatch);
        }
        Ok(DualityChar { i, x: x.clone(), lift, phi: primitive_char(ring, ring.one())? })
    }

    pub fn modulus(&self) -> u32 {
        self.phi.modulus
    }

    pub fn exponent(&self, ring: &Ring, k: &Mat) -> u32 {
        let y = k.sub(&Mat::identity(ring, k.n), ring);
        self.phi.exponent(ring, self.lift.mul(&y, ring).trace(ring))
    }

    pub fn phi_x_value(&self, ring: &Ring, k: &Mat) -> Result<CycloNum> {
        let y = k.sub(&Mat::identity(ring, k.n), ring);
        if y.data.iter().any(|&e| ring.valuation(e) < self.i) {
            return Err(Error::OutOfRange { index: self.i, max: ring.ell() });
        }
        Ok(CycloNum::root_of_unity(self.modulus(), self.exponent(ring, k)))
    }
}

pub fn induced_dim(spec: &GroupSpec) -> u128 {
    spec.index_of_unipotent()
}

/// Result of the streaming double sum.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormSum {
    /// Number of group elements visited.
    pub group_order: u64,
    /// `|U|` by enumeration.
    pub u_order: u64,
    /// `<Ind theta_a, Ind theta_a>`.
    pub norm: i64,
}

/// `(1/|U|^2) sum_u sum_g [g u g^-1 in U] theta(g u g^-1) conj(theta(u))`,
/// streamed over `G` in parallel with one exponent counter per worker.
pub fn induced_norm(spec: &GroupSpec, a: RingElem) -> Result<NormSum> {
    let theta = NonDegenChar::new(spec, a)?;
    let ring = &*spec.ring;
    let us = spec.unipotent_elements(0)?;
    let u_exps: Vec<u32> = us.iter().map(|u| theta.exponent(u)).collect();
    let m = theta.modulus() as usize;
    let (count, counter) = spec.par_fold(
        || (0u64, vec![0i64; m]),
        |(count, mut counter), g| {
            let ginv = inverse(g, ring).expect("group element");
            for (u, &eu) in us.iter().zip(&u_exps) {
                let v = g.mul(u, ring).mul(&ginv, ring);
                if is_upper_unitriangular(&v, ring) {
                    let ev = theta.exponent(&v);
                    counter[(ev as usize + m - eu as usize) % m] += 1;
                }
            }
            (count + 1, counter)
        },
        |(c1, mut v1), (c2, v2)| {
            for (x, y) in v1.iter_mut().zip(v2) {
                *x += y;
            }
            (c1 + c2, v1)
        },
    );
    let total = CycloNum::from_coeffs(m as u32, counter);
    let uo = us.len() as i64;
    let value = total.rational_value()?;
    let norm = value / num_rational::Ratio::from_integer(uo * uo);
    if !norm.is_integer() {
        return Err(Error::Integrality(format!("induced norm {norm} for {}", spec.key())));
    }
    Ok(NormSum { group_order: count, u_order: us.len() as u64, norm: norm.to_integer() })
}

/// `m = floor(l/2)`; predictions need `l >= 2` and, for `SL_n`, `p` not
/// dividing `n`.
fn prediction_setup(spec: &GroupSpec) -> Result<(u32, Ring)> {
    let ell = spec.ell();
    if ell < 2 {
        return Err(Error::OutOfRange { index: ell, max: u32::MAX });
    }
    if spec.family == Family::SL && spec.n as u32 % spec.ring.p() == 0 {
        return Err(Error::SlCharacteristic { n: spec.n, p: spec.ring.p() });
    }
    let m = ell / 2;
    Ok((m, spec.ring.truncated(m)?))
}

/// Sum over the `a`-regular classes `x` of `g(o_m)` of `|C_{G(o_m)}(x)|`,
/// times `q^d` when `l` is odd.
pub fn predicted_regular_count(spec: &GroupSpec, a: RingElem) -> Result<u128> {
    let (_, ring_m) = prediction_setup(spec)?;
    let am = spec.ring.project(a, ring_m.ell())?;
    let mut sum = 0u128;
    for t in a_regular_tuples(spec.family, spec.n, &ring_m) {
        let x = a_regular(am, &t, &ring_m)?;
        sum += regular_centralizer_order(&x, &ring_m, spec.family);
    }
    if spec.ell() % 2 == 1 {
        sum *= (spec.q() as u128).pow(spec.regular_centralizer_dim());
    }
    Ok(sum)
}

/// `q^(d m) |G(o_m)|` for even `l`, `q^(d m) q^((d_g + d)/2) |G(o_m)|` for odd.
pub fn predicted_dim_sum(spec: &GroupSpec) -> Result<u128> {
    let (m, _) = prediction_setup(spec)?;
    let q = spec.q() as u128;
    let d = spec.regular_centralizer_dim();
    let gm = spec.truncated(m)?.order();
    let mut out = q.pow(d * m) * gm;
    if spec.ell() % 2 == 1 {
        out *= q.pow((spec.lie_dim() + d) / 2);
    }
    Ok(out)
}

/// The closed form `(q^2 - 1) q^(2l - 4)` displayed for `[SL_2(o_l) : U]` in
/// the literature; kept only to be compared against the actual index.
pub fn printed_sl2_index(q: u32, ell: u32) -> Option<u128> {
    let q = q as u128;
    (ell >= 2).then(|| (q * q - 1) * q.pow(2 * ell - 4))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub group: String,
    pub ring: String,
    pub a: u32,
    pub group_order: u64,
    pub u_order: u64,
    pub induced_dim: u128,
    pub induced_norm: i64,
    pub index: u128,
    /// `None` when no prediction applies (`SL_n` with `p | n`, or `l = 1`).
    pub predicted_regular_count: Option<u128>,
    pub predicted_dim_sum: Option<u128>,
    /// Only for `SL_2`: the printed index formula and whether it agrees.
    pub printed_sl2_index: Option<u128>,
    pub printed_sl2_index_consistent: Option<bool>,
    pub pass: bool,
}

pub fn verify_multiplicity_one(spec: &GroupSpec, a: RingElem) -> Result<VerificationReport> {
    let ns = induced_norm(spec, a)?;
    let index = spec.index_of_unipotent();
    let induced_dim = ns.group_order as u128 / ns.u_order as u128;
    let (pred_count, pred_dim) = match (predicted_regular_count(spec, a), predicted_dim_sum(spec)) {
        (Ok(c), Ok(d)) => (Some(c), Some(d)),
        (Err(Error::SlCharacteristic { .. }), _) | (Err(Error::OutOfRange { .. }), _) => (None, None),
        (Err(e), _) | (_, Err(e)) => return Err(e),
    };
    let printed = (spec.family == Family::SL && spec.n == 2)
        .then(|| printed_sl2_index(spec.q(), spec.ell()))
        .flatten();
    let pass = ns.group_order as u128 == spec.order()
        && induced_dim == index
        && ns.norm >= 1
        && ns.norm as u128 <= induced_dim
        && pred_count.map_or(true, |c| c == ns.norm as u128)
        && pred_dim.map_or(true, |d| d == induced_dim);
    Ok(VerificationReport {
        group: spec.name(),
        ring: spec.ring.desc.to_string(),
        a: a.0,
        group_order: ns.group_order,
        u_order: ns.u_order,
        induced_dim,
        induced_norm: ns.norm,
        index,
        predicted_regular_count: pred_count,
        predicted_dim_sum: pred_dim,
        printed_sl2_index: printed,
        printed_sl2_index_consistent: printed.map(|p| p == index),
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{centralizer, congruence_subgroup, GroupTable, DEFAULT_TABLE_CAP};

    fn spec(f: Family, n: usize, r: &str) -> GroupSpec {
        GroupSpec::new(f, n, r.parse().unwrap()).unwrap()
    }

    #[test]
    fn theta_examples() {
        let s = spec(Family::GL, 2, "mixed:3^2");
        let th = NonDegenChar::new(&s, RingElem(1)).unwrap();
        assert_eq!(th.theta_value(&Mat::identity(&s.ring, 2)).unwrap(), CycloNum::one(9));
        let u = Mat::from_rows(&[&[1, 3], &[0, 1]]);
        assert_eq!(th.theta_value(&u).unwrap(), CycloNum::root_of_unity(9, 3));
        assert!(th.theta_value(&Mat::from_rows(&[&[1, 0], &[1, 1]])).is_err());
        let s3 = spec(Family::GL, 3, "mixed:2^2");
        let th = NonDegenChar::new(&s3, RingElem(3)).unwrap();
        for x13 in 0..4 {
            let u = Mat::from_rows(&[&[1, 1, x13], &[0, 1, 2], &[0, 0, 1]]);
            assert_eq!(th.theta_value(&u).unwrap(), CycloNum::root_of_unity(4, 1));
        }
        assert!(NonDegenChar::new(&s3, RingElem(2)).is_err());
    }

    #[test]
    fn theta_is_multiplicative() {
        for (r, a) in [("mixed:3^2", 2), ("equal:2^2", 1), ("mixed:2^3", 3)] {
            let s = spec(Family::GL, 3, r);
            let th = NonDegenChar::new(&s, RingElem(a)).unwrap();
            let us = s.unipotent_elements(0).unwrap();
            let m = th.modulus();
            for (i, u) in us.iter().enumerate().step_by(7) {
                for v in us.iter().skip(i % 5).step_by(11) {
                    let uv = u.mul(v, &s.ring);
                    assert_eq!(th.exponent(&uv), (th.exponent(u) + th.exponent(v)) % m);
                }
            }
        }
    }

    #[test]
    fn duality_examples() {
        let s = spec(Family::GL, 2, "mixed:3^2");
        let ring = &s.ring;
        let zero = DualityChar::new(ring, &Mat::zero(2), 1).unwrap();
        let y = Mat::from_rows(&[&[4, 3], &[6, 1]]);
        assert_eq!(zero.phi_x_value(ring, &y).unwrap(), CycloNum::one(9));
        let e11 = DualityChar::new(ring, &Mat::from_rows(&[&[1, 0], &[0, 0]]), 1).unwrap();
        let y = Mat::from_rows(&[&[4, 0], &[0, 1]]);
        assert_eq!(e11.phi_x_value(ring, &y).unwrap(), CycloNum::root_of_unity(9, 3));
        assert!(e11.phi_x_value(ring, &Mat::from_rows(&[&[2, 0], &[0, 1]])).is_err());
        let s3 = spec(Family::GL, 2, "mixed:2^3");
        assert!(matches!(
            DualityChar::new(&s3.ring, &Mat::zero(2), 1),
            Err(Error::NonAbelianCongruence { i: 1, ell: 3 })
        ));
    }

    #[test]
    fn induced_examples() {
        let s = spec(Family::GL, 2, "mixed:2^2");
        assert_eq!(induced_dim(&s), 24);
        let ns = induced_norm(&s, RingElem(1)).unwrap();
        assert_eq!((ns.group_order, ns.u_order, ns.norm), (96, 4, 8));
        assert_eq!(predicted_regular_count(&s, RingElem(1)).unwrap(), 8);
        assert_eq!(predicted_dim_sum(&s).unwrap(), 24);
        // oracle: brute-force centralizers of the a-regular classes over F_2
        let f2 = s.ring.residue_ring();
        let t = GroupTable::build(&s.truncated(1).unwrap(), DEFAULT_TABLE_CAP).unwrap();
        let oracle: usize = a_regular_tuples(Family::GL, 2, &f2)
            .iter()
            .map(|c| centralizer(&t, &a_regular(RingElem(1), c, &f2).unwrap(), &f2).unwrap().order())
            .sum();
        assert_eq!(oracle, 8);
    }

    #[test]
    fn odd_length_predictions() {
        let s = spec(Family::GL, 2, "mixed:2^3");
        assert_eq!(predicted_regular_count(&s, RingElem(1)).unwrap(), 32);
        assert_eq!(predicted_dim_sum(&s).unwrap(), 192);
        assert_eq!(induced_dim(&s), 192);
    }

    #[test]
    fn sl_predictions() {
        let s = spec(Family::SL, 2, "mixed:3^2");
        assert_eq!(induced_dim(&s), 72);
        assert_eq!(predicted_dim_sum(&s).unwrap(), 72);
        assert_eq!(predicted_regular_count(&s, RingElem(1)).unwrap(), 12);
        assert_eq!(printed_sl2_index(3, 2), Some(8));
        let bad = spec(Family::SL, 2, "mixed:2^2");
        assert!(matches!(predicted_regular_count(&bad, RingElem(1)), Err(Error::SlCharacteristic { .. })));
        let r = verify_multiplicity_one(&bad, RingElem(1)).unwrap();
        assert!(r.predicted_regular_count.is_none() && r.pass);
    }

    #[test]
    fn verify_reports() {
        let r = verify_multiplicity_one(&spec(Family::GL, 2, "mixed:2^2"), RingElem(3)).unwrap();
        assert!(r.pass);
        assert_eq!((r.induced_norm, r.induced_dim), (8, 24));
        let r = verify_multiplicity_one(&spec(Family::SL, 2, "mixed:3^2"), RingElem(1)).unwrap();
        assert!(r.pass);
        assert_eq!((r.induced_norm, r.induced_dim), (12, 72));
        assert_eq!(r.printed_sl2_index_consistent, Some(false));
    }

    #[test]
    fn duality_is_lift_independent_and_bijective() {
        for r in ["mixed:2^2", "mixed:3^2"] {
            let s = spec(Family::GL, 2, r);
            let ring = &s.ring;
            let f = ring.residue_ring();
            let t = GroupTable::build(&s, DEFAULT_TABLE_CAP).unwrap();
            let k1 = congruence_subgroup(&t, 1).unwrap();
            let q = ring.q() as u64;
            let mut seen = std::collections::HashSet::new();
            for key in 0..q.pow(4) {
                let x = Mat::from_key(&f, 2, key);
                let base = DualityChar::new(ring, &x, 1).unwrap();
                let values: Vec<u32> = k1.ids.iter().map(|&id| base.exponent(ring, t.element(id))).collect();
                // shifting every entry by w * c gives another lift
                for c in 1..q as u32 {
                    let lift = Mat::from_codes(ring, 2, &x.data.iter().map(|e| e.0 + c * ring.q()).collect::<Vec<_>>());
                    let other = DualityChar::with_lift(ring, &x, lift, 1).unwrap();
                    for (&id, &v) in k1.ids.iter().zip(&values) {
                        assert_eq!(other.exponent(ring, t.element(id)), v);
                    }
                }
                // character property
                let kk = |a: u32, b: u32| t.mul(a, b);
                for &a in k1.ids.iter().step_by(3) {
                    for &b in k1.ids.iter().step_by(5) {
                        let m = base.modulus();
                        let ab = base.exponent(ring, t.element(kk(a, b)));
                        let sum = (base.exponent(ring, t.element(a)) + base.exponent(ring, t.element(b))) % m;
                        assert_eq!(ab, sum);
                    }
                }
                assert!(seen.insert(values), "x -> phi_x not injective");
            }
            assert_eq!(seen.len() as u64, q.pow(4));
            assert_eq!(k1.order() as u64, q.pow(4));
        }
    }
}
