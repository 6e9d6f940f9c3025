//! The finite local rings `o_l`: `Z/p^l` and `F_q[t]/(t^l)`.
//!
//! Every element is stored as a canonical code in `[0, q^l)`. For `Z/p^l` the
//! code is the residue itself; for `F_q[t]/(t^l)` it is the base-`q` number
//! whose digits (constant term first) are the coefficients of `1, t, .., t^(l-1)`.
//! With this encoding the uniformizer is the code `q` in both families,
//! reduction to `o_i` is `code mod q^i`, and the valuation is the number of
//! trailing base-`q` zero digits. Elements are enumerated in increasing code
//! order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{is_prime, ResidueField};

const MAX_ORDER: u64 = 1 << 16;
const MAX_Q: u32 = 256;
const TABLE_ORDER: u32 = 256;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingKind {
    MixedChar,
    EqualChar,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RingDesc {
    pub kind: RingKind,
    pub p: u32,
    pub f: u32,
    pub ell: u32,
}

impl RingDesc {
    pub fn new(kind: RingKind, p: u32, f: u32, ell: u32) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if f == 0 || ell == 0 {
            return Err(Error::UnsupportedRing("f and l must be positive".into()));
        }
        if kind == RingKind::MixedChar && f > 1 {
            return Err(Error::UnsupportedRing(format!(
                "unramified extensions of Z/{p}^{ell} (f = {f}) are not supported"
            )));
        }
        let q = (p as u64).checked_pow(f).unwrap_or(u64::MAX);
        if q > MAX_Q as u64 {
            return Err(Error::UnsupportedRing(format!("residue field of size {q} too large")));
        }
        if q.checked_pow(ell).map_or(true, |o| o > MAX_ORDER) {
            return Err(Error::UnsupportedRing(format!("ring of order {q}^{ell} too large")));
        }
        Ok(RingDesc { kind, p, f, ell })
    }

    pub fn mixed(p: u32, ell: u32) -> Result<Self> {
        Self::new(RingKind::MixedChar, p, 1, ell)
    }

    pub fn equal(p: u32, f: u32, ell: u32) -> Result<Self> {
        Self::new(RingKind::EqualChar, p, f, ell)
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }

    pub fn order(&self) -> u32 {
        self.q().pow(self.ell)
    }

    /// The same family at length `ell`.
    pub fn with_length(&self, ell: u32) -> Result<Self> {
        Self::new(self.kind, self.p, self.f, ell)
    }
}

impl fmt::Display for RingDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            RingKind::MixedChar => write!(f, "mixed:{}^{}", self.p, self.ell),
            RingKind::EqualChar => write!(f, "equal:{}^{}", self.q(), self.ell),
        }
    }
}

impl FromStr for RingDesc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadRingString(s.to_string());
        let (kind, rest) = s.split_once(':').ok_or_else(bad)?;
        let (base, ell) = rest.split_once('^').ok_or_else(bad)?;
        let base: u32 = base.trim().parse().map_err(|_| bad())?;
        let ell: u32 = ell.trim().parse().map_err(|_| bad())?;
        match kind.trim() {
            "mixed" => RingDesc::mixed(base, ell),
            "equal" => {
                let (p, f) = prime_power(base).ok_or_else(bad)?;
                RingDesc::equal(p, f, ell)
            }
            _ => Err(bad()),
        }
    }
}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut f = 0;
    let mut x = q;
    while x % p == 0 {
        x /= p;
        f += 1;
    }
    (x == 1).then_some((p, f))
}

/// A canonical element code, interpreted relative to a [`Ring`].
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[repr(transparent)]
pub struct RingElem(pub u32);

/// Arithmetic context for one ring `o_l`.
#[derive(Clone, Debug)]
pub struct Ring {
    pub desc: RingDesc,
    q: u32,
    order: u32,
    field: ResidueField,
    add_table: Option<Vec<u32>>,
    mul_table: Option<Vec<u32>>,
    inv_table: Vec<u32>,
}

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        self.desc == other.desc
    }
}

impl Eq for Ring {}

impl Ring {
    pub fn new(desc: RingDesc) -> Self {
        let q = desc.q();
        let order = desc.order();
        let field = ResidueField::new(desc.p, desc.f);
        let mut ring = Ring {
            desc,
            q,
            order,
            field,
            add_table: None,
            mul_table: None,
            inv_table: Vec::new(),
        };
        if order <= TABLE_ORDER {
            let n = order as usize;
            let mut add = vec![0; n * n];
            let mut mul = vec![0; n * n];
            for a in 0..order {
                for b in 0..order {
                    add[(a * order + b) as usize] = ring.slow_add(a, b);
                    mul[(a * order + b) as usize] = ring.slow_mul(a, b);
                }
            }
            ring.add_table = Some(add);
            ring.mul_table = Some(mul);
        }
        let unit_count = (q as u64 - 1) * (q as u64).pow(desc.ell - 1);
        ring.inv_table = (0..order)
            .map(|a| {
                if a % q == 0 {
                    0
                } else {
                    ring.pow(RingElem(a), unit_count - 1).0
                }
            })
            .collect();
        ring
    }

    pub fn make(kind: RingKind, p: u32, f: u32, ell: u32) -> Result<Self> {
        Ok(Ring::new(RingDesc::new(kind, p, f, ell)?))
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn ell(&self) -> u32 {
        self.desc.ell
    }

    pub fn p(&self) -> u32 {
        self.desc.p
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn field(&self) -> &ResidueField {
        &self.field
    }

    /// The same family truncated to length `i`.
    pub fn truncated(&self, i: u32) -> Result<Ring> {
        if i == 0 || i > self.ell() {
            return Err(Error::OutOfRange { index: i, max: self.ell() });
        }
        Ok(Ring::new(self.desc.with_length(i)?))
    }

    /// The residue field `o_1 = F_q` as a ring of length one.
    pub fn residue_ring(&self) -> Ring {
        self.truncated(1).expect("length one always valid")
    }

    pub fn zero(&self) -> RingElem {
        RingElem(0)
    }

    pub fn one(&self) -> RingElem {
        RingElem(if self.order == 1 { 0 } else { 1 })
    }

    /// The uniformizer `p` or `t` (zero when `l = 1`).
    pub fn uniformizer(&self) -> RingElem {
        RingElem(self.q % self.order)
    }

    /// `w^k` for the uniformizer `w`.
    pub fn uniformizer_pow(&self, k: u32) -> RingElem {
        if k >= self.ell() {
            RingElem(0)
        } else {
            RingElem(self.q.pow(k))
        }
    }

    pub fn elem(&self, code: u32) -> RingElem {
        RingElem(code % self.order)
    }

    /// Interprets an integer through the unital map `Z -> o_l`.
    pub fn from_int(&self, v: i64) -> RingElem {
        match self.desc.kind {
            RingKind::MixedChar => RingElem(v.rem_euclid(self.order as i64) as u32),
            RingKind::EqualChar => {
                let c = v.rem_euclid(self.desc.p as i64) as u32;
                RingElem(c)
            }
        }
    }

    /// All elements in canonical (increasing code) order.
    pub fn elements(&self) -> impl Iterator<Item = RingElem> {
        (0..self.order).map(RingElem)
    }

    pub fn units(&self) -> impl Iterator<Item = RingElem> + '_ {
        self.elements().filter(|x| self.is_unit(*x))
    }

    pub fn unit_count(&self) -> u64 {
        (self.q as u64 - 1) * (self.q as u64).pow(self.ell() - 1)
    }

    #[inline]
    pub fn is_unit(&self, x: RingElem) -> bool {
        x.0 % self.q != 0
    }

    /// `valuation(0) = l`.
    pub fn valuation(&self, x: RingElem) -> u32 {
        if x.0 == 0 {
            return self.ell();
        }
        let mut v = 0;
        let mut c = x.0;
        while c % self.q == 0 {
            c /= self.q;
            v += 1;
        }
        v
    }

    /// Reduction `o_l -> o_i`; the result is a code of the length-`i` ring.
    pub fn project(&self, x: RingElem, i: u32) -> Result<RingElem> {
        if i == 0 || i > self.ell() {
            return Err(Error::OutOfRange { index: i, max: self.ell() });
        }
        Ok(RingElem(x.0 % self.q.pow(i)))
    }

    #[inline]
    pub fn residue(&self, x: RingElem) -> u32 {
        x.0 % self.q
    }

    /// For `x` of valuation `>= v`, returns some `c` with `w^v * c = x`.
    pub fn div_uniformizer_pow(&self, x: RingElem, v: u32) -> RingElem {
        debug_assert!(self.valuation(x) >= v);
        if v >= self.ell() {
            return RingElem(0);
        }
        RingElem(x.0 / self.q.pow(v))
    }

    fn digits(&self, x: u32) -> [u32; 16] {
        let mut d = [0u32; 16];
        let mut x = x;
        for slot in d.iter_mut().take(self.ell() as usize) {
            *slot = x % self.q;
            x /= self.q;
        }
        d
    }

    fn undigits(&self, d: &[u32; 16]) -> u32 {
        d[..self.ell() as usize]
            .iter()
            .rev()
            .fold(0, |acc, &c| acc * self.q + c)
    }

    fn slow_add(&self, a: u32, b: u32) -> u32 {
        match self.desc.kind {
            RingKind::MixedChar => (a + b) % self.order,
            RingKind::EqualChar => {
                let (da, db) = (self.digits(a), self.digits(b));
                let mut s = [0u32; 16];
                for i in 0..self.ell() as usize {
                    s[i] = self.field.add(da[i], db[i]);
                }
                self.undigits(&s)
            }
        }
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        match self.desc.kind {
            RingKind::MixedChar => ((a as u64 * b as u64) % self.order as u64) as u32,
            RingKind::EqualChar => {
                let l = self.ell() as usize;
                let (da, db) = (self.digits(a), self.digits(b));
                let mut s = [0u32; 16];
                for i in 0..l {
                    if da[i] == 0 {
                        continue;
                    }
                    for j in 0..l - i {
                        s[i + j] = self.field.add(s[i + j], self.field.mul(da[i], db[j]));
                    }
                }
                self.undigits(&s)
            }
        }
    }

    #[inline]
    pub fn add(&self, a: RingElem, b: RingElem) -> RingElem {
        match &self.add_table {
            Some(t) => RingElem(t[(a.0 * self.order + b.0) as usize]),
            None => RingElem(self.slow_add(a.0, b.0)),
        }
    }

    #[inline]
    pub fn mul(&self, a: RingElem, b: RingElem) -> RingElem {
        match &self.mul_table {
            Some(t) => RingElem(t[(a.0 * self.order + b.0) as usize]),
            None => RingElem(self.slow_mul(a.0, b.0)),
        }
    }

    pub fn neg(&self, a: RingElem) -> RingElem {
        match self.desc.kind {
            RingKind::MixedChar => RingElem((self.order - a.0) % self.order),
            RingKind::EqualChar => {
                let mut d = self.digits(a.0);
                for c in d.iter_mut().take(self.ell() as usize) {
                    *c = self.field.neg(*c);
                }
                RingElem(self.undigits(&d))
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: RingElem, b: RingElem) -> RingElem {
        self.add(a, self.neg(b))
    }

    pub fn pow(&self, a: RingElem, mut e: u64) -> RingElem {
        let mut base = a;
        let mut acc = self.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: RingElem) -> Result<RingElem> {
        if !self.is_unit(a) {
            return Err(Error::NotUnit(a.0));
        }
        Ok(RingElem(self.inv_table[a.0 as usize]))
    }

    /// Human-readable form: an integer, or a polynomial in `t`.
    pub fn format(&self, x: RingElem) -> String {
        match self.desc.kind {
            RingKind::MixedChar => x.0.to_string(),
            RingKind::EqualChar => {
                let d = self.digits(x.0);
                let terms: Vec<String> = (0..self.ell() as usize)
                    .filter(|&i| d[i] != 0)
                    .map(|i| match i {
                        0 => format!("{}", d[i]),
                        1 => format!("{}t", d[i]),
                        _ => format!("{}t^{}", d[i], i),
                    })
                    .collect();
                if terms.is_empty() {
                    "0".into()
                } else {
                    terms.join("+")
                }
            }
        }
    }
}

/// An additive character `x -> zeta_m^{exponent(x)}` of `o_l`.
///
/// `phi_a(x) = phi(a x)` where `phi` is the fixed primitive character:
/// `zeta_{p^l}^x` on `Z/p^l` and `zeta_p^{Tr(c_{l-1})}` on `F_q[t]/(t^l)`,
/// `c_{l-1}` being the coefficient of `t^(l-1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveChar {
    pub ring: RingDesc,
    pub twist: RingElem,
    /// Order of the root of unity the exponents refer to.
    pub modulus: u32,
}

impl AdditiveChar {
    pub fn primitive(ring: &Ring, a: RingElem) -> Result<Self> {
        if !ring.is_unit(a) {
            return Err(Error::NotUnit(a.0));
        }
        let modulus = match ring.desc.kind {
            RingKind::MixedChar => ring.order(),
            RingKind::EqualChar => ring.p(),
        };
        Ok(AdditiveChar { ring: ring.desc, twist: a, modulus })
    }

    #[inline]
    pub fn exponent(&self, ring: &Ring, x: RingElem) -> u32 {
        debug_assert_eq!(ring.desc, self.ring);
        let y = ring.mul(self.twist, x);
        match ring.desc.kind {
            RingKind::MixedChar => y.0,
            RingKind::EqualChar => {
                let top = y.0 / ring.q().pow(ring.ell() - 1);
                ring.field().trace(top)
            }
        }
    }

    /// Nontrivial on `w^(l-1) o_l`.
    pub fn is_primitive(&self, ring: &Ring) -> bool {
        let w = ring.uniformizer_pow(ring.ell() - 1);
        ring.elements()
            .any(|x| self.exponent(ring, ring.mul(w, x)) != 0)
    }
}

pub fn primitive_char(ring: &Ring, a: RingElem) -> Result<AdditiveChar> {
    AdditiveChar::primitive(ring, a)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(p: u32, l: u32) -> Ring {
        Ring::new(RingDesc::mixed(p, l).unwrap())
    }

    fn fq(p: u32, f: u32, l: u32) -> Ring {
        Ring::new(RingDesc::equal(p, f, l).unwrap())
    }

    #[test]
    fn make_examples() {
        let r = Ring::make(RingKind::MixedChar, 3, 1, 2).unwrap();
        assert_eq!((r.q(), r.order()), (3, 9));
        assert_eq!(r.desc.to_string(), "mixed:3^2");
        let r = Ring::make(RingKind::EqualChar, 2, 2, 2).unwrap();
        assert_eq!((r.q(), r.order()), (4, 16));
        assert_eq!(r.desc.to_string(), "equal:4^2");
        assert!(matches!(
            Ring::make(RingKind::MixedChar, 3, 2, 2),
            Err(Error::UnsupportedRing(_))
        ));
        assert!(matches!(Ring::make(RingKind::MixedChar, 4, 1, 2), Err(Error::NotPrime(4))));
    }

    #[test]
    fn ring_string_roundtrip() {
        for s in ["mixed:2^2", "mixed:3^2", "equal:2^2", "equal:4^3", "equal:9^1"] {
            let d: RingDesc = s.parse().unwrap();
            assert_eq!(d.to_string(), s);
        }
        assert!("equal:6^2".parse::<RingDesc>().is_err());
        assert!("mixed:9^1".parse::<RingDesc>().is_err());
        assert!("weird".parse::<RingDesc>().is_err());
    }

    #[test]
    fn project_examples() {
        let r = z(3, 2);
        assert_eq!(r.project(RingElem(7), 1).unwrap(), RingElem(1));
        // 2 + t in F_3[t]/(t^2) has code 2 + 1*3 = 5
        let r = fq(3, 1, 2);
        assert_eq!(r.project(RingElem(5), 1).unwrap(), RingElem(2));
        let r = z(2, 3);
        assert_eq!(r.project(RingElem(6), 2).unwrap(), RingElem(2));
        assert!(r.project(RingElem(6), 4).is_err());
        assert!(r.project(RingElem(6), 0).is_err());
        assert_eq!(r.project(RingElem(6), 3).unwrap(), RingElem(6));
    }

    #[test]
    fn projection_is_homomorphism_and_composes() {
        for r in [z(2, 3), z(3, 2), fq(2, 2, 2), fq(3, 1, 3)] {
            for i in 1..=r.ell() {
                let ri = r.truncated(i).unwrap();
                for x in r.elements() {
                    for y in r.elements() {
                        let px = r.project(x, i).unwrap();
                        let py = r.project(y, i).unwrap();
                        assert_eq!(r.project(r.add(x, y), i).unwrap(), ri.add(px, py));
                        assert_eq!(r.project(r.mul(x, y), i).unwrap(), ri.mul(px, py));
                    }
                    for j in i..=r.ell() {
                        let rj = r.truncated(j).unwrap();
                        let pj = r.project(x, j).unwrap();
                        assert_eq!(rj.project(pj, i).unwrap(), r.project(x, i).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn unit_counts_and_valuations() {
        let r = z(2, 2);
        let units: Vec<u32> = r.units().map(|u| u.0).collect();
        assert_eq!(units, vec![1, 3]);
        assert_eq!(z(3, 2).valuation(RingElem(6)), 1);
        assert_eq!(z(3, 2).valuation(RingElem(0)), 2);
        assert_eq!(fq(2, 1, 3).units().count(), 4);
        for r in [z(2, 3), z(3, 2), fq(2, 2, 2), fq(3, 1, 3), z(5, 2)] {
            let q = r.q() as u64;
            assert_eq!(r.units().count() as u64, q.pow(r.ell() - 1) * (q - 1));
            assert_eq!(r.elements().count() as u64, q.pow(r.ell()));
            for x in r.elements() {
                assert_eq!(r.is_unit(x), r.valuation(x) == 0);
                assert_eq!(r.is_unit(x), r.residue(x) != 0);
                for y in r.elements() {
                    let xy = r.mul(x, y);
                    if xy.0 != 0 {
                        assert_eq!(r.valuation(xy), r.valuation(x) + r.valuation(y));
                    }
                }
            }
        }
    }

    #[test]
    fn ring_axioms() {
        for r in [z(2, 3), fq(2, 2, 2), fq(3, 1, 2)] {
            for a in r.elements() {
                assert_eq!(r.add(a, r.neg(a)), r.zero());
                if r.is_unit(a) {
                    assert_eq!(r.mul(a, r.inv(a).unwrap()), r.one());
                } else {
                    assert!(r.inv(a).is_err());
                }
                for b in r.elements() {
                    for c in r.elements() {
                        assert_eq!(r.mul(a, r.add(b, c)), r.add(r.mul(a, b), r.mul(a, c)));
                        assert_eq!(r.mul(a, r.mul(b, c)), r.mul(r.mul(a, b), c));
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_char_examples() {
        let r = z(3, 2);
        let phi = primitive_char(&r, RingElem(1)).unwrap();
        assert_eq!(phi.modulus, 9);
        assert_eq!(phi.exponent(&r, RingElem(3)), 3);
        let top: Vec<u32> = [0, 3, 6].iter().map(|&x| phi.exponent(&r, RingElem(x))).collect();
        assert_eq!(top, vec![0, 3, 6]);
        assert!(phi.is_primitive(&r));

        let r = fq(3, 1, 2);
        let phi = primitive_char(&r, RingElem(1)).unwrap();
        assert_eq!(phi.modulus, 3);
        assert_eq!(phi.exponent(&r, RingElem(3)), 1); // t
        assert_eq!(phi.exponent(&r, RingElem(1)), 0);
        assert!(primitive_char(&r, RingElem(3)).is_err());
    }

    #[test]
    fn primitive_chars_are_exactly_the_twists() {
        for r in [z(2, 1), z(2, 2), z(2, 3), z(3, 1), z(3, 2), z(3, 3), fq(2, 1, 3), fq(3, 1, 2), fq(2, 2, 2)] {
            let m = primitive_char(&r, r.one()).unwrap().modulus;
            let mut seen = std::collections::HashSet::new();
            for a in r.units() {
                let phi = primitive_char(&r, a).unwrap();
                assert!(phi.is_primitive(&r));
                for x in r.elements() {
                    for y in r.elements() {
                        assert_eq!(
                            phi.exponent(&r, r.add(x, y)),
                            (phi.exponent(&r, x) + phi.exponent(&r, y)) % m
                        );
                    }
                }
                let table: Vec<u32> = r.elements().map(|x| phi.exponent(&r, x)).collect();
                assert!(seen.insert(table), "twists must give distinct characters");
            }
            // x -> phi(b x) over all b in o_l gives |o_l| distinct characters, i.e. the
            // whole dual group; the primitive ones are exactly those with b a unit.
            let phi1 = primitive_char(&r, r.one()).unwrap();
            let w = r.uniformizer_pow(r.ell() - 1);
            let mut all = std::collections::HashSet::new();
            for b in r.elements() {
                let table: Vec<u32> = r.elements().map(|x| phi1.exponent(&r, r.mul(b, x))).collect();
                let primitive = r.elements().any(|x| phi1.exponent(&r, r.mul(b, r.mul(w, x))) != 0);
                assert_eq!(primitive, r.is_unit(b));
                all.insert(table);
            }
            assert_eq!(all.len() as u32, r.order());
        }
    }
}
