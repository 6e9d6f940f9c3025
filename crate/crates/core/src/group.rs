//! Enumeration of `GL_n(o_l)` and `SL_n(o_l)` and of the subgroups
//! `U(w^k o_l)`, `K^i` and centralizers.
//!
//! Elements are produced fibre by fibre: the invertible residue matrices over
//! `F_q` in lexicographic order, each followed by all of its lifts. A
//! [`GroupTable`] additionally sorts the elements by canonical key, moves the
//! identity to id 0 and keeps a key index and an inverse map.

use std::collections::HashMap;
use std::fmt;
use std::io::Read;
use std::path::Path;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mat::{det, inverse, Mat};
use crate::ring::{Ring, RingDesc, RingElem};
use crate::smith::{solve_count, SolutionSpace};

pub const DEFAULT_TABLE_CAP: u64 = 200_000;
const TABLE_MAGIC: &[u8; 4] = b"LRGT";
const TABLE_VERSION: u32 = 1;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    GL,
    SL,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::GL => write!(f, "GL"),
            Family::SL => write!(f, "SL"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GroupSpec {
    pub family: Family,
    pub n: usize,
    pub ring: Arc<Ring>,
}

impl PartialEq for GroupSpec {
    fn eq(&self, other: &Self) -> bool {
        self.family == other.family && self.n == other.n && self.ring.desc == other.ring.desc
    }
}

/// Parses `GL2`, `SL3`, ...
pub fn parse_group(s: &str) -> Result<(Family, usize)> {
    let bad = || Error::UnsupportedRing(format!("bad group {s:?}, expected GL<n> or SL<n>"));
    let (fam, n) = s.split_at(2.min(s.len()));
    let family = match fam.to_ascii_uppercase().as_str() {
        "GL" => Family::GL,
        "SL" => Family::SL,
        _ => return Err(bad()),
    };
    let n: usize = n.parse().map_err(|_| bad())?;
    if n == 0 {
        return Err(bad());
    }
    Ok((family, n))
}

fn gl_residue_order(n: usize, q: u128) -> u128 {
    let qn = q.pow(n as u32);
    (0..n as u32).map(|i| qn - q.pow(i)).product()
}

impl GroupSpec {
    pub fn new(family: Family, n: usize, desc: RingDesc) -> Result<Self> {
        Ok(GroupSpec { family, n, ring: Arc::new(Ring::new(desc)) })
    }

    pub fn with_ring(family: Family, n: usize, ring: Arc<Ring>) -> Self {
        GroupSpec { family, n, ring }
    }

    pub fn parse(group: &str, ring: &str) -> Result<Self> {
        let (family, n) = parse_group(group)?;
        Self::new(family, n, ring.parse()?)
    }

    pub fn q(&self) -> u32 {
        self.ring.q()
    }

    pub fn ell(&self) -> u32 {
        self.ring.ell()
    }

    /// The same group over `o_i`.
    pub fn truncated(&self, i: u32) -> Result<GroupSpec> {
        Ok(GroupSpec::with_ring(self.family, self.n, Arc::new(self.ring.truncated(i)?)))
    }

    /// `dim g`: `n^2` or `n^2 - 1`.
    pub fn lie_dim(&self) -> u32 {
        let n2 = (self.n * self.n) as u32;
        match self.family {
            Family::GL => n2,
            Family::SL => n2 - 1,
        }
    }

    /// Dimension of the centralizer of a regular element in `g(F_q)`.
    pub fn regular_centralizer_dim(&self) -> u32 {
        match self.family {
            Family::GL => self.n as u32,
            Family::SL => self.n as u32 - 1,
        }
    }

    /// Closed-form group order.
    pub fn order(&self) -> u128 {
        let q = self.q() as u128;
        let gl = gl_residue_order(self.n, q);
        let lifts = q.pow(self.lie_dim() * (self.ell() - 1));
        match self.family {
            Family::GL => lifts * gl,
            Family::SL => lifts * (gl / (q - 1)),
        }
    }

    pub fn unipotent_order(&self, k: u32) -> u128 {
        let q = self.q() as u128;
        q.pow((self.ell() - k.min(self.ell())) * (self.n * (self.n - 1) / 2) as u32)
    }

    pub fn index_of_unipotent(&self) -> u128 {
        self.order() / self.unipotent_order(0)
    }

    pub fn name(&self) -> String {
        format!("{}{}", self.family, self.n)
    }

    /// Cache key, e.g. `GL2@mixed:3^2`.
    pub fn key(&self) -> String {
        format!("{}{}@{}", self.family, self.n, self.ring.desc)
    }

    pub fn contains(&self, g: &Mat) -> bool {
        let d = det(g, &self.ring);
        match self.family {
            Family::GL => self.ring.is_unit(d),
            Family::SL => d == self.ring.one(),
        }
    }

    /// Invertible residue matrices over `F_q`, lexicographic.
    pub fn residue_matrices(&self) -> Vec<Mat> {
        let field = self.ring.residue_ring();
        let n2 = (self.n * self.n) as u32;
        let total = (field.q() as u64).pow(n2);
        (0..total)
            .map(|k| Mat::from_key(&field, self.n, k))
            .filter(|m| field.is_unit(det(m, &field)))
            .collect()
    }

    /// All lifts to `o_l` of a residue matrix lying in the group.
    pub fn lifts<'a>(&'a self, residue: &'a Mat) -> impl Iterator<Item = Mat> + 'a {
        let q = self.q();
        let fibre = self.ring.order() / q;
        let n2 = self.n * self.n;
        let count = (fibre as u64).pow(n2 as u32);
        (0..count).filter_map(move |mut c| {
            let mut m = residue.clone();
            for idx in (0..n2).rev() {
                let t = (c % fibre as u64) as u32;
                c /= fibre as u64;
                m.data[idx] = RingElem(residue.data[idx].0 + q * t);
            }
            match self.family {
                Family::GL => Some(m),
                Family::SL => (det(&m, &self.ring) == self.ring.one()).then_some(m),
            }
        })
    }

    /// Streaming enumeration without an index.
    pub fn elements(&self) -> impl Iterator<Item = Mat> + '_ {
        let residues = self.residue_matrices();
        residues.into_iter().flat_map(move |r| self.lifts(&r).collect::<Vec<_>>())
    }

    /// Parallel fold over all elements, split by residue fibre. `reduce` must be
    /// associative and commutative for a deterministic result.
    pub fn par_fold<A, F, R>(&self, init: impl Fn() -> A + Sync + Send, fold: F, reduce: R) -> A
    where
        A: Send,
        F: Fn(A, &Mat) -> A + Sync + Send,
        R: Fn(A, A) -> A + Sync + Send,
    {
        let residues = self.residue_matrices();
        residues
            .par_iter()
            .map(|r| self.lifts(r).fold(init(), |acc, g| fold(acc, &g)))
            .reduce(&init, reduce)
    }

    /// `U(w^k o_l)`: upper unitriangular with superdiagonal part in `w^k o_l`.
    pub fn unipotent_elements(&self, k: u32) -> Result<Vec<Mat>> {
        if k > self.ell() {
            return Err(Error::OutOfRange { index: k, max: self.ell() });
        }
        let ring = &self.ring;
        let n = self.n;
        let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
        let step = ring.uniformizer_pow(k).0.max(1);
        let choices = if k >= self.ell() { 1 } else { ring.order() / step };
        let total = (choices as u64).pow(slots.len() as u32);
        let mut out = Vec::with_capacity(total as usize);
        for mut c in 0..total {
            let mut m = Mat::identity(ring, n);
            for &(i, j) in slots.iter().rev() {
                let t = (c % choices as u64) as u32;
                c /= choices as u64;
                m.set(i, j, RingElem(if k >= self.ell() { 0 } else { t * step }));
            }
            out.push(m);
        }
        Ok(out)
    }
}

/// Whether `u` is upper unitriangular.
pub fn is_upper_unitriangular(u: &Mat, ring: &Ring) -> bool {
    let n = u.n;
    (0..n).all(|i| {
        (0..n).all(|j| {
            let e = u.get(i, j);
            if i == j {
                e == ring.one()
            } else if i > j {
                e.0 == 0
            } else {
                true
            }
        })
    })
}

#[derive(Clone, Debug)]
pub struct GroupTable {
    pub spec: GroupSpec,
    elements: Vec<Mat>,
    index: HashMap<u64, u32>,
    inverses: Vec<u32>,
}

impl GroupTable {
    pub fn build(spec: &GroupSpec, cap: u64) -> Result<Self> {
        let order = spec.order();
        if order > cap as u128 {
            return Err(Error::CapExceeded { order: order as u64, cap });
        }
        if Mat::identity(&spec.ring, spec.n).key(&spec.ring).is_none()
            || Mat::scalar(spec.n, RingElem(spec.ring.order() - 1)).key(&spec.ring).is_none()
        {
            return Err(Error::UnsupportedRing("matrix keys exceed 64 bits".into()));
        }
        Self::from_elements(spec, spec.elements().collect())
    }

    fn from_elements(spec: &GroupSpec, mut elements: Vec<Mat>) -> Result<Self> {
        let ring = &spec.ring;
        elements.sort_by_key(|m| m.key(ring).expect("checked"));
        let id_pos = elements
            .iter()
            .position(|m| m.is_identity(ring))
            .ok_or_else(|| Error::CharTable("identity missing".into()))?;
        elements[..=id_pos].rotate_right(1);
        let index: HashMap<u64, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, m)| (m.key(ring).expect("checked"), i as u32))
            .collect();
        let inverses: Vec<u32> = elements
            .par_iter()
            .map(|m| {
                let inv = inverse(m, ring).expect("group elements are invertible");
                index[&inv.key(ring).expect("checked")]
            })
            .collect();
        Ok(GroupTable { spec: spec.clone(), elements, index, inverses })
    }

    pub fn ring(&self) -> &Ring {
        &self.spec.ring
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn element(&self, id: u32) -> &Mat {
        &self.elements[id as usize]
    }

    pub fn elements(&self) -> &[Mat] {
        &self.elements
    }

    pub fn id_of(&self, m: &Mat) -> Option<u32> {
        self.index.get(&m.key(self.ring())?).copied()
    }

    pub fn inv(&self, id: u32) -> u32 {
        self.inverses[id as usize]
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        let prod = self.element(a).mul(self.element(b), self.ring());
        self.id_of(&prod).expect("closed under products")
    }

    /// `g x g^-1`.
    pub fn conj(&self, g: u32, x: u32) -> u32 {
        let ring = self.ring();
        let m = self.element(g).mul(self.element(x), ring).mul(self.element(self.inv(g)), ring);
        self.id_of(&m).expect("closed under conjugation")
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let ring = self.ring();
        let width: u8 = if ring.order() <= 256 { 1 } else { 2 };
        let key = self.spec.key();
        let mut buf = Vec::new();
        buf.extend_from_slice(TABLE_MAGIC);
        buf.extend_from_slice(&TABLE_VERSION.to_le_bytes());
        buf.extend_from_slice(&(key.len() as u32).to_le_bytes());
        buf.extend_from_slice(key.as_bytes());
        buf.extend_from_slice(&(self.elements.len() as u64).to_le_bytes());
        buf.push(width);
        for m in &self.elements {
            for e in &m.data {
                if width == 1 {
                    buf.push(e.0 as u8);
                } else {
                    buf.extend_from_slice(&(e.0 as u16).to_le_bytes());
                }
            }
        }
        crate::cache::atomic_write(path, &buf)
    }

    pub fn load(spec: &GroupSpec, path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        let bad = |what: &str| Error::Cache(format!("{}: {what}", path.display()));
        let mut pos = 0usize;
        let mut take = |len: usize| -> Result<&[u8]> {
            let s = bytes.get(pos..pos + len).ok_or_else(|| bad("truncated"))?;
            pos += len;
            Ok(s)
        };
        if take(4)? != TABLE_MAGIC {
            return Err(bad("bad magic"));
        }
        let version = u32::from_le_bytes(take(4)?.try_into().expect("4 bytes"));
        if version != TABLE_VERSION {
            return Err(bad("version mismatch"));
        }
        let klen = u32::from_le_bytes(take(4)?.try_into().expect("4 bytes")) as usize;
        let key = String::from_utf8(take(klen)?.to_vec()).map_err(|_| bad("key not utf-8"))?;
        if key != spec.key() {
            return Err(bad("key mismatch"));
        }
        let count = u64::from_le_bytes(take(8)?.try_into().expect("8 bytes")) as usize;
        let width = take(1)?[0] as usize;
        let n2 = spec.n * spec.n;
        let mut elements = Vec::with_capacity(count);
        for _ in 0..count {
            let raw = take(n2 * width)?;
            let codes: Vec<u32> = raw
                .chunks(width)
                .map(|c| if width == 1 { c[0] as u32 } else { u16::from_le_bytes([c[0], c[1]]) as u32 })
                .collect();
            elements.push(Mat::from_codes(&spec.ring, spec.n, &codes));
        }
        if elements.len() as u128 != spec.order() {
            return Err(bad("element count does not match group order"));
        }
        Self::from_elements(spec, elements)
    }

    /// Builds the table, going through `cache` when one is supplied.
    pub fn load_or_build(spec: &GroupSpec, cap: u64, cache: Option<&crate::cache::Cache>) -> Result<(Self, crate::cache::Provenance)> {
        use crate::cache::{Provenance, CacheStatus};
        let Some(cache) = cache else {
            return Ok((Self::build(spec, cap)?, Provenance::uncached(&spec.key())));
        };
        let name = cache.entry_name("group", &spec.key(), "bin");
        let path = cache.path(&name);
        if path.exists() {
            if let Ok(t) = Self::load(spec, &path) {
                return Ok((t, Provenance { key: name, status: CacheStatus::Hit }));
            }
        }
        let t = Self::build(spec, cap)?;
        t.save(&path)?;
        Ok((t, Provenance { key: name, status: CacheStatus::Miss }))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SubgroupTag {
    Unipotent { k: u32 },
    Congruence { i: u32 },
    Centralizer,
    Custom(String),
}

#[derive(Clone, Debug)]
pub struct SubgroupHandle {
    pub tag: SubgroupTag,
    /// Sorted member ids.
    pub ids: Vec<u32>,
}

impl SubgroupHandle {
    pub fn order(&self) -> usize {
        self.ids.len()
    }

    pub fn contains(&self, id: u32) -> bool {
        self.ids.binary_search(&id).is_ok()
    }

    pub fn is_closed(&self, table: &GroupTable) -> bool {
        self.contains(0)
            && self.ids.iter().all(|&a| self.contains(table.inv(a)))
            && self.ids.iter().all(|&a| self.ids.iter().all(|&b| self.contains(table.mul(a, b))))
    }

    pub fn is_normal(&self, table: &GroupTable) -> bool {
        (0..table.order() as u32).all(|g| self.ids.iter().all(|&x| self.contains(table.conj(g, x))))
    }
}

pub fn unipotent_subgroup(table: &GroupTable, k: u32) -> Result<SubgroupHandle> {
    let mut ids: Vec<u32> = table
        .spec
        .unipotent_elements(k)?
        .iter()
        .map(|m| table.id_of(m).expect("U lies in both GL and SL"))
        .collect();
    ids.sort_unstable();
    Ok(SubgroupHandle { tag: SubgroupTag::Unipotent { k }, ids })
}

/// `K^i`, the kernel of reduction to `o_i`.
pub fn congruence_subgroup(table: &GroupTable, i: u32) -> Result<SubgroupHandle> {
    let ell = table.spec.ell();
    if i == 0 || i > ell {
        return Err(Error::OutOfRange { index: i, max: ell });
    }
    let ring = table.ring();
    let residue_ring = ring.truncated(i)?;
    let id_i = Mat::identity(&residue_ring, table.spec.n);
    let ids = (0..table.order() as u32)
        .filter(|&g| table.element(g).project(ring, i).expect("i in range") == id_i)
        .collect();
    Ok(SubgroupHandle { tag: SubgroupTag::Congruence { i }, ids })
}

/// Centralizer in the table's group of `x`, a matrix over `o_r` (`x_ring`),
/// with group elements acting through their reduction to `o_r`.
pub fn centralizer(table: &GroupTable, x: &Mat, x_ring: &Ring) -> Result<SubgroupHandle> {
    let r = x_ring.ell();
    let ring = table.ring();
    let ids = (0..table.order() as u32)
        .filter(|&g| {
            let gr = table.element(g).project(ring, r).expect("r <= l");
            gr.commutes_with(x, x_ring)
        })
        .collect();
    Ok(SubgroupHandle { tag: SubgroupTag::Centralizer, ids })
}

/// Linear system `xy - yx = 0` in the `n^2` entries of `y`.
pub fn commutator_system(x: &Mat, ring: &Ring) -> Vec<Vec<RingElem>> {
    let n = x.n;
    let mut rows = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            let mut row = vec![ring.zero(); n * n];
            for k in 0..n {
                row[k * n + j] = ring.add(row[k * n + j], x.get(i, k));
                row[i * n + k] = ring.sub(row[i * n + k], x.get(k, j));
            }
            rows.push(row);
        }
    }
    rows
}

/// `C_{g(o_r)}(x)` as a solution space of the commutator system (with the
/// trace condition added for `sl_n`).
pub fn lie_centralizer(x: &Mat, ring: &Ring, family: Family) -> SolutionSpace {
    let n = x.n;
    let mut rows = commutator_system(x, ring);
    if family == Family::SL {
        rows.push((0..n * n).map(|idx| if idx % (n + 1) == 0 { ring.one() } else { ring.zero() }).collect());
    }
    solve_count(&rows, n * n, ring)
}
