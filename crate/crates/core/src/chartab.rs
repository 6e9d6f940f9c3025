//! Exact character tables by the Dixon–Schneider method, and the character
//! computations built on them: decomposition of `Ind_U^G(theta_a)`, regular
//! classification through `K^(l-1)`, restriction norms to `SL_n` and the scan
//! of `theta_a`-models over all units.
//!
//! The class-multiplication matrices are split into common eigenspaces over a
//! prime field `F_r` with `r = 1 (mod exponent)`. Each one-dimensional space
//! gives the central character of an irreducible `chi`; its values mod `r` are
//! lifted to `Z[zeta_e]` through the eigenvalue multiplicities of `rho(g)`,
//! recovered from `chi` on the powers of `g`.

use std::collections::BTreeMap;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cache::{atomic_write, Cache, CacheStatus, Provenance};
use crate::classes::{conjugacy_classes, ClassData};
use crate::cyclo::{lcm, CycloNum};
use crate::error::{Error, Result};
use crate::group::{congruence_subgroup, Family, GroupTable};
use crate::mat::{det, Mat};
use crate::modp::{prime_one_mod, Fp};
use crate::poly::IrreducibleSieve;
use crate::regular::{is_regular, type_of, TypeMatrix};
use crate::ring::RingElem;
use crate::whittaker::{DualityChar, NonDegenChar};

pub const CHARTAB_ALGORITHM_VERSION: u32 = 1;
pub const DEFAULT_CHARTAB_CAP: u64 = 100_000;
pub const DEFAULT_PRIME_BOUND: u64 = 10_000_000;

#[derive(Clone, Debug)]
pub struct CharTable {
    pub classes: ClassData,
    /// The prime used for splitting.
    pub prime: u32,
    pub degrees: Vec<u64>,
    /// `values[i][c]`, all in `Z[zeta_e]` with `e` the group exponent.
    pub values: Vec<Vec<CycloNum>>,
    terms: Vec<Vec<Vec<(u32, i64)>>>,
}

type Terms = Vec<(u32, i64)>;

fn sparse(z: &CycloNum) -> Terms {
    z.terms().collect()
}

impl CharTable {
    fn new(classes: ClassData, prime: u32, degrees: Vec<u64>, values: Vec<Vec<CycloNum>>) -> Self {
        let terms = values.iter().map(|row| row.iter().map(sparse).collect()).collect();
        CharTable { classes, prime, degrees, values, terms }
    }

    pub fn count(&self) -> usize {
        self.degrees.len()
    }

    pub fn exponent(&self) -> u32 {
        self.classes.exponent
    }

    /// `sum_c weight_c chi_i(c) conj(chi_j(c))` as a rational, for the given
    /// per-class integer weights.
    fn weighted_pairing(&self, i: usize, j: usize, weights: &[i64]) -> Result<num_rational::Ratio<i64>> {
        let e = self.exponent();
        let mut acc = vec![0i64; e as usize];
        for (c, &w) in weights.iter().enumerate() {
            if w == 0 {
                continue;
            }
            for &(a, x) in &self.terms[i][c] {
                for &(b, y) in &self.terms[j][c] {
                    acc[((a + e - b) % e) as usize] += w * x * y;
                }
            }
        }
        CycloNum::from_coeffs(e, acc).rational_value()
    }

    /// Both orthogonality relations, integrality of degrees and
    /// `sum deg^2 = |G|`, all exact.
    pub fn verify(&self) -> Result<()> {
        let cd = &self.classes;
        let order = cd.group_order;
        let k = cd.count();
        if self.count() != k {
            return Err(Error::CharTable(format!("{} characters for {k} classes", self.count())));
        }
        let sq: u64 = self.degrees.iter().map(|d| d * d).sum();
        if sq != order {
            return Err(Error::CharTable(format!("sum of squared degrees {sq} != {order}")));
        }
        for (i, &d) in self.degrees.iter().enumerate() {
            if order % d != 0 || self.values[i][0].integer_value()? != d as i64 {
                return Err(Error::CharTable(format!("bad degree {d}")));
            }
        }
        let sizes: Vec<i64> = cd.sizes.iter().map(|&s| s as i64).collect();
        let rows: Result<Vec<()>> = (0..k)
            .into_par_iter()
            .map(|i| {
                for j in i..k {
                    let v = self.weighted_pairing(i, j, &sizes)?;
                    let want = if i == j { order as i64 } else { 0 };
                    if v != want.into() {
                        return Err(Error::CharTable(format!("row orthogonality fails at ({i},{j}): {v}")));
                    }
                }
                Ok(())
            })
            .collect();
        rows?;
        let e = self.exponent();
        let cols: Result<Vec<()>> = (0..k)
            .into_par_iter()
            .map(|l| {
                for m in l..k {
                    let mut acc = vec![0i64; e as usize];
                    for t in &self.terms {
                        for &(a, x) in &t[l] {
                            for &(b, y) in &t[m] {
                                acc[((a + e - b) % e) as usize] += x * y;
                            }
                        }
                    }
                    let v = CycloNum::from_coeffs(e, acc).rational_value()?;
                    let want = if l == m { cd.centralizer_order(l) as i64 } else { 0 };
                    if v != want.into() {
                        return Err(Error::CharTable(format!("column orthogonality fails at ({l},{m}): {v}")));
                    }
                }
                Ok(())
            })
            .collect();
        cols?;
        Ok(())
    }

    /// Builds classes and table, then verifies it.
    pub fn compute(table: &GroupTable, cap: u64) -> Result<Self> {
        let cd = conjugacy_classes(table, cap)?;
        let ct = character_table(&cd, table, DEFAULT_PRIME_BOUND)?;
        ct.verify()?;
        Ok(ct)
    }

    pub fn to_json(&self) -> Result<Vec<u8>> {
        let stored = StoredTable {
            algorithm_version: CHARTAB_ALGORITHM_VERSION,
            classes: self.classes.clone(),
            prime: self.prime,
            degrees: self.degrees.clone(),
            values: self.terms.clone(),
        };
        serde_json::to_vec(&stored).map_err(|e| Error::Cache(e.to_string()))
    }

    pub fn from_json(bytes: &[u8], group_key: &str) -> Result<Self> {
        let s: StoredTable = serde_json::from_slice(bytes).map_err(|e| Error::Cache(e.to_string()))?;
        if s.algorithm_version != CHARTAB_ALGORITHM_VERSION || s.classes.group_key != group_key {
            return Err(Error::Cache("stale or foreign character table".into()));
        }
        let e = s.classes.exponent;
        let values = s
            .values
            .iter()
            .map(|row| {
                row.iter()
                    .map(|t| {
                        let mut z = CycloNum::zero(e);
                        for &(j, c) in t {
                            z.add_root(j, c);
                        }
                        z
                    })
                    .collect()
            })
            .collect();
        Ok(CharTable::new(s.classes, s.prime, s.degrees, values))
    }

    pub fn load(path: &Path, group_key: &str) -> Result<Self> {
        Self::from_json(&std::fs::read(path)?, group_key)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        atomic_write(path, &self.to_json()?)
    }

    /// Computes or loads the table; a fresh computation is written back.
    pub fn load_or_build(table: &GroupTable, cap: u64, cache: Option<&Cache>) -> Result<(Self, Provenance)> {
        let key = format!("{}#v{}", table.spec.key(), CHARTAB_ALGORITHM_VERSION);
        let Some(cache) = cache else {
            return Ok((Self::compute(table, cap)?, Provenance::uncached(&key)));
        };
        let name = cache.entry_name("chartab", &key, "json");
        let path = cache.path(&name);
        if path.exists() {
            if let Ok(ct) = Self::load(&path, &table.spec.key()) {
                return Ok((ct, Provenance { key: name, status: CacheStatus::Hit }));
            }
        }
        let ct = Self::compute(table, cap)?;
        ct.save(&path)?;
        Ok((ct, Provenance { key: name, status: CacheStatus::Miss }))
    }
}

#[derive(Serialize, Deserialize)]
struct StoredTable {
    algorithm_version: u32,
    classes: ClassData,
    prime: u32,
    degrees: Vec<u64>,
    values: Vec<Vec<Terms>>,
}

/// Class-multiplication coefficients `c[j][l][k] = #{x in C_j : x^-1 g_k in C_l}`,
/// flattened as `(j * k + l) * k + kk`.
fn class_coefficients(cd: &ClassData, table: &GroupTable) -> Vec<u32> {
    let k = cd.count();
    let slices: Vec<Vec<u32>> = cd
        .reps
        .par_iter()
        .map(|&g| {
            let mut s = vec![0u32; k * k];
            for x in 0..table.order() as u32 {
                let j = cd.class_of[x as usize] as usize;
                let l = cd.class_of[table.mul(table.inv(x), g) as usize] as usize;
                s[j * k + l] += 1;
            }
            s
        })
        .collect();
    let mut c = vec![0u32; k * k * k];
    for (kk, s) in slices.iter().enumerate() {
        for (jl, &v) in s.iter().enumerate() {
            c[jl * k + kk] = v;
        }
    }
    c
}

/// Splits `F_r^k` into common eigenlines of the class matrices.
fn split_eigenspaces(fp: &Fp, coeff: &[u32], k: usize) -> Result<Vec<Vec<u64>>> {
    let mut done = Vec::new();
    let identity: Vec<Vec<u64>> = (0..k).map(|i| (0..k).map(|j| (i == j) as u64).collect()).collect();
    let mut pending: Vec<(Vec<Vec<u64>>, usize)> = vec![(identity, 1)];
    while let Some((mut basis, start)) = pending.pop() {
        if basis.len() == 1 {
            done.push(basis.pop().expect("one vector"));
            continue;
        }
        let pivots = {
            let mut b = basis.clone();
            let p = fp.rref(&mut b);
            basis = b;
            p
        };
        let s = basis.len();
        let mut split = false;
        for j in start..k {
            // restricted matrix R[t][i] = (M_j b_i)[P_t]
            let images: Vec<Vec<u64>> = basis
                .iter()
                .map(|b| {
                    pivots
                        .iter()
                        .map(|&l| {
                            let row = &coeff[(j * k + l) * k..(j * k + l + 1) * k];
                            row.iter().zip(b).fold(0u64, |acc, (&c, &v)| fp.add(acc, fp.mul(c as u64 % fp.r, v)))
                        })
                        .collect()
                })
                .collect();
            let r: Vec<Vec<u64>> = (0..s).map(|t| (0..s).map(|i| images[i][t]).collect()).collect();
            let cp = fp.char_poly(&r);
            let roots = fp.roots(&cp);
            if roots.len() == 1 {
                // a single eigenvalue; the space is an eigenspace iff R is scalar
                let lam = roots[0];
                let scalar = (0..s).all(|t| (0..s).all(|i| r[t][i] == if t == i { lam } else { 0 }));
                if scalar {
                    continue;
                }
            }
            let mut total = 0;
            for lam in roots {
                let shifted: Vec<Vec<u64>> = (0..s)
                    .map(|t| (0..s).map(|i| if t == i { fp.sub(r[t][i], lam) } else { r[t][i] }).collect())
                    .collect();
                let kern = fp.kernel(&shifted);
                total += kern.len();
                let sub: Vec<Vec<u64>> = kern
                    .iter()
                    .map(|c| {
                        (0..k)
                            .map(|col| c.iter().zip(&basis).fold(0u64, |acc, (&ci, b)| fp.add(acc, fp.mul(ci, b[col]))))
                            .collect()
                    })
                    .collect();
                pending.push((sub, j + 1));
            }
            if total != s {
                return Err(Error::CharTable(format!("class matrix {j} not diagonalizable over F_{}", fp.r)));
            }
            split = true;
            break;
        }
        if !split {
            return Err(Error::CharTable(format!("a common eigenspace of dimension {s} does not split")));
        }
    }
    Ok(done)
}

pub fn character_table(cd: &ClassData, table: &GroupTable, prime_bound: u64) -> Result<CharTable> {
    let k = cd.count();
    let order = cd.group_order;
    let e = cd.exponent;
    let lower = 2 * ((order as f64).sqrt().ceil() as u64);
    let r = prime_one_mod(e, lower, prime_bound)
        .ok_or_else(|| Error::CharTable(format!("no prime = 1 mod {e} below {prime_bound}")))?;
    let fp = Fp::new(r);
    let z = fp.pow(fp.primitive_root(), (r as u64 - 1) / e as u64);
    let zpow: Vec<u64> = (0..e as u64).map(|t| fp.pow(z, t)).collect();
    let coeff = class_coefficients(cd, table);
    let lines = split_eigenspaces(&fp, &coeff, k)?;
    let mut chars: Vec<(u64, Vec<CycloNum>)> = lines
        .par_iter()
        .map(|line| lift_character(&fp, cd, line, &zpow))
        .collect::<Result<_>>()?;
    // trivial character first, then by degree and values
    let trivial = |c: &(u64, Vec<CycloNum>)| c.1.iter().all(|z| z.coeffs()[0] == 1 && z.terms().count() == 1);
    chars.sort_by(|a, b| a.0.cmp(&b.0).then(trivial(b).cmp(&trivial(a))).then_with(|| {
        let ka: Vec<&[i64]> = a.1.iter().map(|z| z.coeffs()).collect();
        let kb: Vec<&[i64]> = b.1.iter().map(|z| z.coeffs()).collect();
        ka.cmp(&kb)
    }));
    let degrees = chars.iter().map(|c| c.0).collect();
    let values = chars.into_iter().map(|c| c.1).collect();
    Ok(CharTable::new(cd.clone(), r, degrees, values))
}

fn lift_character(fp: &Fp, cd: &ClassData, line: &[u64], zpow: &[u64]) -> Result<(u64, Vec<CycloNum>)> {
    let k = cd.count();
    let order = cd.group_order;
    let e = cd.exponent as usize;
    let inv0 = fp.inv(line[0]);
    let omega: Vec<u64> = line.iter().map(|&v| fp.mul(v, inv0)).collect();
    let hinv: Vec<u64> = cd.sizes.iter().map(|&h| fp.inv(h % fp.r)).collect();
    let s = (0..k).fold(0u64, |acc, l| {
        fp.add(acc, fp.mul(fp.mul(omega[l], omega[cd.inverse_class[l] as usize]), hinv[l]))
    });
    let d2 = fp.mul(order % fp.r, fp.inv(s));
    let max_d = (order as f64).sqrt() as u64 + 1;
    let d = (1..=max_d)
        .find(|&d| order % d == 0 && d * d <= order && (d * d) % fp.r == d2)
        .ok_or_else(|| Error::CharTable("no admissible degree".into()))?;
    let chi: Vec<u64> = (0..k).map(|l| fp.mul(fp.mul(omega[l], d % fp.r), hinv[l])).collect();
    let mut values = Vec::with_capacity(k);
    for c in 0..k {
        let o = cd.orders[c] as usize;
        let step = e / o;
        let oinv = fp.inv(o as u64 % fp.r);
        let powers = &cd.powers[c];
        let mut z = CycloNum::zero(e as u32);
        for kk in 0..o {
            let mut acc = 0u64;
            for (i, &pc) in powers.iter().enumerate() {
                let t = (o - (i * kk) % o) % o;
                acc = fp.add(acc, fp.mul(chi[pc as usize], zpow[t * step]));
            }
            let mu = fp.mul(acc, oinv);
            if mu > d {
                return Err(Error::CharTable(format!("eigenvalue multiplicity {mu} exceeds degree {d}")));
            }
            if mu > 0 {
                z.add_root((kk * step) as u32, mu as i64);
            }
        }
        values.push(z);
    }
    Ok((d, values))
}

/// `m_i = <Ind_U^G theta_a, chi_i>`, by Frobenius reciprocity.
pub fn decompose_induced(ct: &CharTable, table: &GroupTable, theta: &NonDegenChar) -> Result<Vec<i64>> {
    let us = table.spec.unipotent_elements(0)?;
    let mut counts: BTreeMap<(u32, u32), i64> = BTreeMap::new();
    for u in &us {
        let id = table.id_of(u).ok_or(Error::RingMismatch)?;
        *counts.entry((ct.classes.class_of[id as usize], theta.exponent(u))).or_default() += 1;
    }
    pair_with_counts(ct, &counts, theta.modulus(), us.len() as i64)
}

/// `(1/size) sum count * chi(c) * zeta_m^(-t)` for every character.
fn pair_with_counts(ct: &CharTable, counts: &BTreeMap<(u32, u32), i64>, m: u32, size: i64) -> Result<Vec<i64>> {
    let e = ct.exponent();
    let big = lcm(e as u64, m as u64) as u32;
    let (se, sm) = (big / e, big / m);
    (0..ct.count())
        .into_par_iter()
        .map(|i| {
            let mut acc = vec![0i64; big as usize];
            for (&(c, t), &n) in counts {
                for &(a, x) in &ct.terms[i][c as usize] {
                    acc[((a * se + big - (t * sm) % big) % big) as usize] += n * x;
                }
            }
            let v = CycloNum::from_coeffs(big, acc).rational_value()? / num_rational::Ratio::from_integer(size);
            if !v.is_integer() || v < 0.into() {
                return Err(Error::Integrality(format!("multiplicity {v}")));
            }
            Ok(v.to_integer())
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RegularInfo {
    pub regular: bool,
    /// Type of the orbit of `x` the restriction lies over, when regular.
    pub tau: Option<TypeMatrix>,
}

impl RegularInfo {
    pub fn type_name(&self) -> Option<String> {
        self.tau.as_ref().map(|t| t.to_string())
    }
}

/// Pairs `chi|K^(l-1)` with `phi_x` for every `x` in `gl_n(F_q)`; `chi` is
/// regular iff all `x` it lies over are regular. Shifting `x` by a scalar
/// changes neither regularity nor type, so for `SL_n` the same range of `x`
/// is used.
pub fn classify_regular(ct: &CharTable, table: &GroupTable) -> Result<Vec<RegularInfo>> {
    let ring = table.ring();
    let ell = ring.ell();
    if ell < 2 {
        return Err(Error::OutOfRange { index: ell, max: u32::MAX });
    }
    let k = congruence_subgroup(table, ell - 1)?;
    let field = ring.residue_ring();
    let sieve = IrreducibleSieve::build(&field, table.spec.n);
    let n = table.spec.n;
    let mut info: Vec<RegularInfo> = vec![RegularInfo { regular: true, tau: None }; ct.count()];
    let total = (field.q() as u64).pow((n * n) as u32);
    for key in 0..total {
        let x = Mat::from_key(&field, n, key);
        let phi = DualityChar::new(ring, &x, ell - 1)?;
        let mut counts: BTreeMap<(u32, u32), i64> = BTreeMap::new();
        for &id in &k.ids {
            *counts.entry((ct.classes.class_of[id as usize], phi.exponent(ring, table.element(id)))).or_default() += 1;
        }
        let mult = pair_with_counts(ct, &counts, phi.modulus(), k.order() as i64)?;
        let reg = is_regular(&x, &field);
        for (i, &m) in mult.iter().enumerate() {
            if m == 0 {
                continue;
            }
            if !reg {
                info[i].regular = false;
                info[i].tau = None;
            } else if info[i].regular && info[i].tau.is_none() {
                info[i].tau = Some(type_of(&x, &field, &sieve)?);
            }
        }
    }
    Ok(info)
}

/// `<Res chi, Res chi>` over `SL_n`, from the `GL_n` classes of determinant one.
pub fn restriction_norm(ct: &CharTable, table: &GroupTable, chi: usize) -> Result<i64> {
    if table.spec.family != Family::GL {
        return Err(Error::RingMismatch);
    }
    let ring = table.ring();
    let mut sl_order = 0i64;
    let weights: Vec<i64> = ct
        .classes
        .reps
        .iter()
        .zip(&ct.classes.sizes)
        .map(|(&r, &h)| {
            if det(table.element(r), ring) == ring.one() {
                sl_order += h as i64;
                h as i64
            } else {
                0
            }
        })
        .collect();
    let v = ct.weighted_pairing(chi, chi, &weights)? / num_rational::Ratio::from_integer(sl_order);
    if !v.is_integer() {
        return Err(Error::Integrality(format!("restriction norm {v}")));
    }
    Ok(v.to_integer())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRow {
    pub chi: usize,
    /// Units `a` with `<Ind theta_a, chi> = 1`.
    pub units: Vec<u32>,
    pub all_units: bool,
}

/// For each irreducible, the units `a` for which it has a `theta_a`-model.
pub fn special_regular_scan(ct: &CharTable, table: &GroupTable) -> Result<Vec<ScanRow>> {
    let ring = table.ring();
    let units: Vec<RingElem> = ring.units().collect();
    let mut rows: Vec<ScanRow> = (0..ct.count()).map(|chi| ScanRow { chi, units: Vec::new(), all_units: false }).collect();
    for &a in &units {
        let theta = NonDegenChar::new(&table.spec, a)?;
        for (i, m) in decompose_induced(ct, table, &theta)?.into_iter().enumerate() {
            if m > 1 {
                return Err(Error::CharTable(format!("multiplicity {m} for a = {}", a.0)));
            }
            if m == 1 {
                rows[i].units.push(a.0);
            }
        }
    }
    for r in &mut rows {
        r.all_units = r.units.len() == units.len();
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{GroupSpec, DEFAULT_TABLE_CAP};

    fn table(f: Family, n: usize, r: &str) -> GroupTable {
        GroupTable::build(&GroupSpec::new(f, n, r.parse().unwrap()).unwrap(), DEFAULT_TABLE_CAP).unwrap()
    }

    #[test]
    fn symmetric_group_s3() {
        let t = table(Family::GL, 2, "mixed:2^1");
        let ct = CharTable::compute(&t, DEFAULT_CHARTAB_CAP).unwrap();
        assert_eq!(ct.degrees, vec![1, 1, 2]);
        // class of a transposition has size 3; sign is -1 there
        let c3 = ct.classes.sizes.iter().position(|&s| s == 3).unwrap();
        assert_eq!(ct.values[1][c3].integer_value().unwrap(), -1);
        assert_eq!(ct.values[2][c3].integer_value().unwrap(), 0);
    }

    #[test]
    fn sl2_f3_degrees() {
        let t = table(Family::SL, 2, "mixed:3^1");
        let ct = CharTable::compute(&t, DEFAULT_CHARTAB_CAP).unwrap();
        assert_eq!(ct.degrees, vec![1, 1, 1, 2, 2, 2, 3]);
        // two of the linear characters take values zeta_3^(+-1) on elements of order 3
        let nonreal = ct.values[..3]
            .iter()
            .filter(|row| row.iter().any(|z| z.rational_value().is_err()))
            .count();
        assert_eq!(nonreal, 2);
    }

    #[test]
    fn gl2_z4_table_and_induced() {
        let t = table(Family::GL, 2, "mixed:2^2");
        let ct = CharTable::compute(&t, DEFAULT_CHARTAB_CAP).unwrap();
        assert_eq!(ct.degrees.iter().map(|d| d * d).sum::<u64>(), 96);
        for a in [1, 3] {
            let theta = NonDegenChar::new(&t.spec, RingElem(a)).unwrap();
            let m = decompose_induced(&ct, &t, &theta).unwrap();
            assert!(m.iter().all(|&x| x == 0 || x == 1));
            assert_eq!(m.iter().sum::<i64>(), 8);
            let dim: u64 = m.iter().zip(&ct.degrees).map(|(&x, &d)| x as u64 * d).sum();
            assert_eq!(dim, 24);
        }
        let info = classify_regular(&ct, &t).unwrap();
        let mut by_type: BTreeMap<String, usize> = BTreeMap::new();
        for i in info.iter().filter(|i| i.regular) {
            *by_type.entry(i.type_name().unwrap()).or_default() += 1;
        }
        assert_eq!(by_type.get("cuspidal"), Some(&3));
        assert_eq!(by_type.get("split-nss"), Some(&4));
        assert_eq!(by_type.get("split-ss"), Some(&1));
    }

    #[test]
    fn trivial_theta_diagnostic() {
        // the permutation character on U\G contains the trivial character once
        let t = table(Family::GL, 2, "mixed:3^1");
        let ct = CharTable::compute(&t, DEFAULT_CHARTAB_CAP).unwrap();
        let us = t.spec.unipotent_elements(0).unwrap();
        let mut counts = BTreeMap::new();
        for u in &us {
            *counts.entry((ct.classes.class_of[t.id_of(u).unwrap() as usize], 0u32)).or_default() += 1;
        }
        let m = pair_with_counts(&ct, &counts, 1, us.len() as i64).unwrap();
        let triv = (0..ct.count()).find(|&i| ct.values[i].iter().all(|z| *z == CycloNum::one(ct.exponent()))).unwrap();
        assert_eq!(m[triv], 1);
    }

    #[test]
    fn json_roundtrip() {
        let t = table(Family::SL, 2, "mixed:3^1");
        let ct = CharTable::compute(&t, DEFAULT_CHARTAB_CAP).unwrap();
        let bytes = ct.to_json().unwrap();
        let back = CharTable::from_json(&bytes, &t.spec.key()).unwrap();
        assert_eq!(back.degrees, ct.degrees);
        assert_eq!(back.values, ct.values);
        assert_eq!(back.to_json().unwrap(), bytes);
        assert!(CharTable::from_json(&bytes, "GL2@mixed:3^1").is_err());
    }
}
