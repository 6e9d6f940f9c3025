//! Exact arithmetic in `Z[zeta_m]`.
//!
//! Values are kept in the group ring `Z[x]/(x^m - 1)`: `coeffs[j]` counts
//! `zeta^j`. Several vectors represent the same algebraic number; equality and
//! rationality are decided by reducing modulo the cyclotomic polynomial.
//! Character sums are accumulated directly as exponent counters.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CycloNum {
    m: u32,
    coeffs: Vec<i64>,
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            let mut e = 0;
            while n % d == 0 {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn euler_phi(n: u64) -> u64 {
    factorize(n).iter().fold(n, |acc, &(p, _)| acc / p * (p - 1))
}

fn mobius(n: u64) -> i64 {
    let f = factorize(n);
    if f.iter().any(|&(_, e)| e > 1) {
        0
    } else if f.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `Tr_{Q(zeta_m)/Q}(zeta_m^j)`, the Ramanujan sum. For `m = p^k` this is
/// `phi(m)` when `j = 0`, `-p^(k-1)` when `zeta^j` has order `p`, and `0` otherwise.
pub fn trace_of_root(m: u32, j: u32) -> i64 {
    let m = m as u64;
    let g = gcd(j as u64 % m, m);
    let order = m / g;
    mobius(order) * (euler_phi(m) / euler_phi(order)) as i64
}

/// Integer coefficients of `Phi_m`, constant term first.
pub fn cyclotomic_poly(m: u32) -> Arc<Vec<i64>> {
    static CACHE: OnceLock<Mutex<HashMap<u32, Arc<Vec<i64>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(p) = cache.lock().expect("cache lock").get(&m) {
        return p.clone();
    }
    let p = Arc::new(compute_cyclotomic(m));
    cache.lock().expect("cache lock").insert(m, p.clone());
    p
}

fn compute_cyclotomic(m: u32) -> Vec<i64> {
    // x^m - 1 = prod_{d | m} Phi_d(x)
    let mut num = vec![0i64; m as usize + 1];
    num[0] = -1;
    num[m as usize] = 1;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            num = exact_div(&num, &phi_d);
        }
    }
    num
}

fn exact_div(num: &[i64], den: &[i64]) -> Vec<i64> {
    let dd = den.len() - 1;
    let mut r = num.to_vec();
    let mut q = vec![0i64; num.len() - dd];
    for k in (dd..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        q[k - dd] = c;
        for (i, &di) in den.iter().enumerate() {
            r[k - dd + i] -= c * di;
        }
    }
    debug_assert!(r.iter().all(|&c| c == 0));
    q
}

/// Reduces a group-ring vector modulo `Phi_m`; returns `phi(m)` coefficients.
fn reduce(coeffs: &[i64], phi: &[i64]) -> Vec<i64> {
    let d = phi.len() - 1;
    let mut r = coeffs.to_vec();
    for k in (d..r.len()).rev() {
        let c = r[k];
        if c == 0 {
            continue;
        }
        for (i, &pi) in phi.iter().enumerate() {
            r[k - d + i] -= c * pi;
        }
    }
    r.truncate(d);
    r
}

impl CycloNum {
    pub fn zero(m: u32) -> Self {
        assert!(m >= 1);
        CycloNum { m, coeffs: vec![0; m as usize] }
    }

    pub fn from_int(m: u32, v: i64) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[0] = v;
        z
    }

    pub fn one(m: u32) -> Self {
        Self::from_int(m, 1)
    }

    pub fn root_of_unity(m: u32, j: u32) -> Self {
        let mut z = Self::zero(m);
        z.coeffs[(j % m) as usize] = 1;
        z
    }

    pub fn from_coeffs(m: u32, coeffs: Vec<i64>) -> Self {
        assert_eq!(coeffs.len(), m as usize);
        CycloNum { m, coeffs }
    }

    pub fn modulus(&self) -> u32 {
        self.m
    }

    pub fn coeffs(&self) -> &[i64] {
        &self.coeffs
    }

    /// Nonzero `(exponent, coefficient)` pairs.
    pub fn terms(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, &c)| c != 0).map(|(j, &c)| (j as u32, c))
    }

    /// Adds `count * zeta^j`; the accumulator form used by character sums.
    #[inline]
    pub fn add_root(&mut self, j: u32, count: i64) {
        let idx = (j % self.m) as usize;
        self.coeffs[idx] += count;
    }

    /// The same number inside `Z[zeta_big]`, `m | big`.
    pub fn embed(&self, big: u32) -> Result<Self> {
        if big % self.m != 0 {
            return Err(Error::MixedModulus(self.m, big));
        }
        let step = big / self.m;
        let mut z = Self::zero(big);
        for (j, c) in self.terms() {
            z.coeffs[(j * step) as usize] = c;
        }
        Ok(z)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.m != other.m {
            Err(Error::MixedModulus(self.m, other.m))
        } else {
            Ok(())
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(CycloNum { m: self.m, coeffs })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(CycloNum { m: self.m, coeffs })
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check(other)?;
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += b;
        }
        Ok(())
    }

    /// Cyclic convolution.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut out = Self::zero(self.m);
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                out.coeffs[((i + j) % self.m) as usize] += a * b;
            }
        }
        Ok(out)
    }

    /// Accumulates `scale * self * conj(other)` into `acc` without allocating.
    pub fn mul_conj_into(&self, other: &Self, scale: i64, acc: &mut CycloNum) -> Result<()> {
        self.check(other)?;
        self.check(acc)?;
        let m = self.m;
        for (i, a) in self.terms() {
            for (j, b) in other.terms() {
                acc.coeffs[((i + m - j) % m) as usize] += scale * a * b;
            }
        }
        Ok(())
    }

    pub fn scale(&self, k: i64) -> Self {
        CycloNum { m: self.m, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Complex conjugation `zeta^j -> zeta^(-j)`.
    pub fn conj(&self) -> Self {
        let m = self.m as usize;
        let mut out = Self::zero(self.m);
        for (j, &c) in self.coeffs.iter().enumerate() {
            out.coeffs[(m - j) % m] = c;
        }
        out
    }

    /// Canonical coordinates in the power basis `1, zeta, .., zeta^(phi(m)-1)`.
    pub fn canonical(&self) -> Vec<i64> {
        reduce(&self.coeffs, &cyclotomic_poly(self.m))
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(|&c| c == 0)
    }

    /// `Tr_{Q(zeta_m)/Q}`.
    pub fn trace(&self) -> i64 {
        self.terms().map(|(j, c)| c * trace_of_root(self.m, j)).sum()
    }

    /// The exact rational value, or [`Error::NotRational`].
    ///
    /// A rational `z` equals `Tr(z) / phi(m)`; the candidate is confirmed by
    /// checking `phi(m) z - Tr(z) = 0` in `Z[zeta_m]`.
    pub fn rational_value(&self) -> Result<Ratio<i64>> {
        let phi = euler_phi(self.m as u64) as i64;
        let tr = self.trace();
        let mut check = self.scale(phi);
        check.coeffs[0] -= tr;
        if !check.is_zero() {
            return Err(Error::NotRational);
        }
        Ok(Ratio::new(tr, phi))
    }

    /// Rational value that must additionally be an integer; anything else is
    /// an arithmetic fault.
    pub fn integer_value(&self) -> Result<i64> {
        let r = self.rational_value().map_err(|_| Error::Integrality("sum is not rational".into()))?;
        if !r.is_integer() {
            return Err(Error::Integrality(format!("sum {r} is not an integer")));
        }
        Ok(r.to_integer())
    }

    /// Floating-point evaluation, for diagnostics only.
    pub fn to_complex(&self) -> (f64, f64) {
        let m = self.m as f64;
        self.terms().fold((0.0, 0.0), |(re, im), (j, c)| {
            let ang = 2.0 * std::f64::consts::PI * j as f64 / m;
            (re + c as f64 * ang.cos(), im + c as f64 * ang.sin())
        })
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Ok(r) = self.rational_value() {
            return write!(f, "{r}");
        }
        let terms: Vec<String> = self
            .terms()
            .map(|(j, c)| match (j, c) {
                (0, c) => c.to_string(),
                (j, 1) => format!("z{}^{}", self.m, j),
                (j, c) => format!("{}*z{}^{}", c, self.m, j),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}
