//! Exact arithmetic in the cyclotomic ring `Z[ζ_t]` and its fraction field
//! `Q(ζ_t)`, together with the root-of-unity data attached to an invariant
//! computation:
//!
//! - [`RootSpec`] fixes a primitive `r`-th root `ξ = ζ_t^{4u}` together with
//!   the fourth root `ξ^{1/4} = ζ_t^u`, where the conductor is `t = 8r` for
//!   odd `r` and `t = 4r` for even `r` (so that `e_8 ∈ Z[ζ_t]` always).
//! - [`CycElt`] is a coefficient vector reduced modulo the cyclotomic
//!   polynomial `Φ_t`; integrality of all coefficients is exactly membership
//!   in the ring of integers, since `Z[ζ_t]` is monogenic.
//! - the evaluation map `ev_ξ : Z[q^{±1/4}] → Z[ζ_t]`, `q^{1/4} ↦ ξ^{1/4}`,
//! - exact divisibility, the associate relation `x ~ y`, and unit tests,
//! - canonical square roots of `2` and `r` in the ring, with the sign fixed by
//!   the complex embedding `ζ_t ↦ exp(2πi/t)`.

use crate::qlaurent::{big, QLaurent};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CycloError {
    #[error("division by zero element")]
    DivisionByZero,
    #[error("spec is degenerate: G=SU(2) with ord(xi^(1/4)) = 2r (condition (*))")]
    StarCondition,
    #[error("invalid root spec: {0}")]
    BadSpec(String),
    #[error("conductor mismatch: {0} vs {1}")]
    ConductorMismatch(u64, u64),
}

pub fn euler_phi(mut n: u64) -> u64 {
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

fn divisors(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 1;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            if d != n / d {
                out.push(n / d);
            }
        }
        d += 1;
    }
    out.sort_unstable();
    out
}

/// Dense integer polynomial, ascending coefficients.
type IntPoly = Vec<BigInt>;

fn poly_mul(a: &IntPoly, b: &IntPoly) -> IntPoly {
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    out
}

/// Exact division of integer polynomials (monic divisor), used to build `Φ_t`.
fn poly_div_exact(num: &IntPoly, den: &IntPoly) -> IntPoly {
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    let mut rem = num.to_vec();
    let nd = rem.len() - 1;
    if nd < dd {
        assert!(rem.iter().all(|c| c.is_zero()));
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (0..=(nd - dd)).rev() {
        let c = rem[i + dd].clone();
        quot[i] = c.clone();
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate() {
            let v = rem[i + j].clone() - &c * dj;
            rem[i + j] = v;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

static PHI_CACHE: Lazy<RwLock<HashMap<u64, IntPoly>>> = Lazy::new(|| RwLock::new(HashMap::new()));

/// Reduced coefficient vectors of `ζ_t^e`, `0 ≤ e < t`, per conductor.
static ZETA_POW_CACHE: Lazy<RwLock<HashMap<u64, Vec<CycElt>>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

/// The `t`-th cyclotomic polynomial `Φ_t` as a dense integer coefficient
/// vector, computed by exact division of `x^t − 1` by `∏_{d|t, d<t} Φ_d`
/// and cached per process.
pub fn cyclotomic_poly(t: u64) -> IntPoly {
    assert!(t >= 1);
    if let Some(p) = PHI_CACHE.read().unwrap().get(&t) {
        return p.clone();
    }
    let poly = if t == 1 {
        vec![BigInt::from(-1), BigInt::one()]
    } else {
        let mut den = vec![BigInt::one()];
        for d in divisors(t) {
            if d < t {
                den = poly_mul(&den, &cyclotomic_poly(d));
            }
        }
        let mut num = vec![BigInt::zero(); (t + 1) as usize];
        num[0] = BigInt::from(-1);
        num[t as usize] = BigInt::one();
        poly_div_exact(&num, &den)
    };
    PHI_CACHE.write().unwrap().insert(t, poly.clone());
    poly
}

/// Gauge group tag for an invariant computation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Hash)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Su2,
    So3,
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Group::Su2 => write!(f, "su2"),
            Group::So3 => write!(f, "so3"),
        }
    }
}

/// Conductor for order `r`: `8r` if `r` is odd, `4r` if `r` is even.
pub fn conductor(r: u64) -> u64 {
    if r % 2 == 1 {
        8 * r
    } else {
        4 * r
    }
}

/// Root-of-unity specification: `ξ = ζ_t^{4u}` primitive of order `r`, with
/// `ξ^{1/4} = ζ_t^u` of order `ord4 ∈ {r, 2r, 4r}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize, Hash)]
pub struct RootSpec {
    pub r: u64,
    pub u: u64,
    pub group: Group,
}

impl RootSpec {
    /// Build a spec, rejecting the degenerate case (`⋆`): `G = SU(2)` with
    /// `ord(ξ^{1/4}) = 2r`, where `F_{U^±}(ξ) = 0` and the invariant is
    /// undefined.
    pub fn new(r: u64, u: u64, group: Group) -> Result<Self, CycloError> {
        if r < 2 {
            return Err(CycloError::BadSpec(format!("r = {r} < 2")));
        }
        if group == Group::So3 && (r % 2 == 0 || r < 3) {
            return Err(CycloError::BadSpec(format!(
                "SO(3) requires odd r >= 3, got r = {r}"
            )));
        }
        let t = conductor(r);
        let xi_exp = (4 * u) % t;
        if order_of_zeta_power(t, xi_exp) != r {
            return Err(CycloError::BadSpec(format!(
                "zeta_{t}^{{4*{u}}} does not have order {r}"
            )));
        }
        let spec = RootSpec { r, u, group };
        if group == Group::Su2 && spec.ord4() == 2 * r {
            return Err(CycloError::StarCondition);
        }
        Ok(spec)
    }

    /// Like [`new`](Self::new) but keeps the (`⋆`)-degenerate SU(2) specs;
    /// used only by checks that quantify over all four fourth roots.
    pub fn new_allow_star(r: u64, u: u64, group: Group) -> Result<Self, CycloError> {
        if r < 2 {
            return Err(CycloError::BadSpec(format!("r = {r} < 2")));
        }
        if group == Group::So3 && (r % 2 == 0 || r < 3) {
            return Err(CycloError::BadSpec(format!(
                "SO(3) requires odd r >= 3, got r = {r}"
            )));
        }
        let t = conductor(r);
        if order_of_zeta_power(t, (4 * u) % t) != r {
            return Err(CycloError::BadSpec(format!(
                "zeta_{t}^{{4*{u}}} does not have order {r}"
            )));
        }
        Ok(RootSpec { r, u, group })
    }

    /// Default fourth root: the smallest `u ≥ 1` with `ord(ζ_t^{4u}) = r` and
    /// `ord(ζ_t^u) = 4r`, matching the classical `ξ^{1/4} = exp(πi/2r)`.
    pub fn default_u(r: u64) -> u64 {
        let t = conductor(r);
        (1..t)
            .find(|&u| {
                order_of_zeta_power(t, (4 * u) % t) == r && order_of_zeta_power(t, u) == 4 * r
            })
            .expect("a default u always exists")
    }

    pub fn with_default_u(r: u64, group: Group) -> Result<Self, CycloError> {
        Self::new(r, Self::default_u(r), group)
    }

    pub fn t(&self) -> u64 {
        conductor(self.r)
    }

    /// Order of `ξ^{1/4} = ζ_t^u`.
    pub fn ord4(&self) -> u64 {
        order_of_zeta_power(self.t(), self.u)
    }

    /// The four fourth roots of the fixed `ξ`: exponents `u + k·t/4`, `k = 0..3`.
    pub fn sibling_us(&self) -> [u64; 4] {
        let t = self.t();
        [0, 1, 2, 3].map(|k| (self.u + k * (t / 4)) % t)
    }

    pub fn is_star(&self) -> bool {
        self.group == Group::Su2 && self.ord4() == 2 * self.r
    }

    /// All `u` with `ξ = ζ_t^{4u}` primitive of order `r` (no (`⋆`) filtering).
    pub fn all_us(r: u64) -> Vec<u64> {
        let t = conductor(r);
        (1..t)
            .filter(|&u| order_of_zeta_power(t, (4 * u) % t) == r)
            .collect()
    }
}

/// Multiplicative order of `ζ_t^e`.
pub fn order_of_zeta_power(t: u64, e: u64) -> u64 {
    let e = e % t;
    if e == 0 {
        1
    } else {
        t / t.gcd(&e)
    }
}

/// Element of `Q(ζ_t)` as a coefficient vector of length `< φ(t)`, reduced
/// modulo `Φ_t`. All-integer coefficients exactly characterizes membership in
/// `Z[ζ_t]`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycElt {
    pub t: u64,
    coeffs: Vec<BigRational>,
}

impl CycElt {
    pub fn zero(t: u64) -> Self {
        CycElt { t, coeffs: vec![] }
    }

    pub fn one(t: u64) -> Self {
        Self::from_int(t, 1)
    }

    pub fn from_int(t: u64, n: i64) -> Self {
        Self::from_rat(t, big(n))
    }

    pub fn from_rat(t: u64, c: BigRational) -> Self {
        let mut e = CycElt {
            t,
            coeffs: vec![c],
        };
        e.normalize();
        e
    }

    pub fn from_coeffs(t: u64, coeffs: Vec<BigRational>) -> Self {
        let mut e = CycElt { t, coeffs };
        e.reduce();
        e
    }

    /// `ζ_t^e` (exponent taken mod `t`).
    pub fn zeta_pow(t: u64, e: i64) -> Self {
        let e = e.rem_euclid(t as i64) as usize;
        {
            let cache = ZETA_POW_CACHE.read().unwrap();
            if let Some(powers) = cache.get(&t) {
                return powers[e].clone();
            }
        }
        let mut powers = Vec::with_capacity(t as usize);
        for k in 0..t as usize {
            let mut coeffs = vec![BigRational::zero(); k + 1];
            coeffs[k] = BigRational::one();
            powers.push(Self::from_coeffs(t, coeffs));
        }
        let out = powers[e].clone();
        ZETA_POW_CACHE.write().unwrap().insert(t, powers);
        out
    }

    fn normalize(&mut self) {
        while let Some(c) = self.coeffs.last() {
            if c.is_zero() {
                self.coeffs.pop();
            } else {
                break;
            }
        }
    }

    /// Reduce the coefficient vector modulo `Φ_t`.
    fn reduce(&mut self) {
        let phi = cyclotomic_poly(self.t);
        let deg = phi.len() - 1;
        while self.coeffs.len() > deg {
            let top = self.coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = self.coeffs.len() - deg;
            // x^{shift+deg} = -(phi - x^deg)·x^{shift}
            for (j, pj) in phi.iter().enumerate().take(deg) {
                if pj.is_zero() {
                    continue;
                }
                let delta = &top * BigRational::from_integer(pj.clone());
                let idx = shift + j;
                self.coeffs[idx] -= delta;
            }
        }
        self.normalize();
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// True iff all reduced coefficients are integers, i.e. membership in `Z[ζ_t]`.
    pub fn is_integral(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_integer())
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.t, other.t);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = vec![BigRational::zero(); n];
        for (i, c) in self.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        for (i, c) in other.coeffs.iter().enumerate() {
            coeffs[i] += c;
        }
        let mut e = CycElt { t: self.t, coeffs };
        e.normalize();
        e
    }

    pub fn neg(&self) -> Self {
        CycElt {
            t: self.t,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.t, other.t);
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.t);
        }
        let mut coeffs = vec![BigRational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Self::from_coeffs(self.t, coeffs)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        CycElt {
            t: self.t,
            coeffs: if c.is_zero() {
                vec![]
            } else {
                self.coeffs.iter().map(|k| k * c).collect()
            },
        }
    }

    pub fn pow(&self, n: u64) -> Self {
        let mut out = Self::one(self.t);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        out
    }

    /// Galois conjugation `ζ ↦ ζ^{−1}` (complex conjugation).
    pub fn conj(&self) -> Self {
        let t = self.t;
        let mut out = Self::zero(t);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(&Self::zeta_pow(t, -(i as i64)).scale(c));
        }
        out
    }

    /// Multiplicative inverse in `Q(ζ_t)` via the extended Euclidean algorithm
    /// against `Φ_t` over the rationals.
    /// The Galois image under `ζ_t ↦ ζ_t^j` (for `gcd(j, t) = 1`).
    fn galois(&self, j: u64) -> Self {
        let mut coeffs = vec![BigRational::zero(); self.t as usize];
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                let e = (i as u64 * j % self.t) as usize;
                coeffs[e] += c;
            }
        }
        Self::from_coeffs(self.t, coeffs)
    }

    pub fn inverse(&self) -> Result<Self, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        // 1/a = (∏_{σ ≠ id} σ(a)) / N(a): the numerator is the product of
        // the nontrivial Galois conjugates and the denominator the field
        // norm, a rational number. All intermediates stay polynomial, so no
        // rational-coefficient gcd cascade occurs.
        let mut num = Self::one(self.t);
        for j in 2..self.t {
            if j.gcd(&self.t) == 1 {
                num = num.mul(&self.galois(j));
            }
        }
        let norm = self.mul(&num);
        if norm.coeffs.len() == 1 && !norm.coeffs[0].is_zero() {
            let n0 = norm.coeffs[0].clone();
            return Ok(num.scale(&n0.recip()));
        }
        // fall back to the extended Euclidean inverse (degenerate reduction)
        self.inverse_euclid()
    }

    fn inverse_euclid(&self) -> Result<Self, CycloError> {
        let phi: Vec<BigRational> = cyclotomic_poly(self.t)
            .iter()
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        // extended gcd of (self.coeffs, phi) in Q[x]
        let mut r0 = phi;
        let mut r1 = self.coeffs.clone();
        let mut s0: Vec<BigRational> = vec![];
        let mut s1: Vec<BigRational> = vec![BigRational::one()];
        let trim = |v: &mut Vec<BigRational>| {
            while v.last().map(|c| c.is_zero()).unwrap_or(false) {
                v.pop();
            }
        };
        trim(&mut r0);
        trim(&mut r1);
        while r1.len() > 1 || (r1.len() == 1 && r0.len() > 1) {
            if r1.is_empty() {
                return Err(CycloError::DivisionByZero);
            }
            if r1.len() == 1 {
                break;
            }
            // divide r0 by r1
            let mut rem = r0.clone();
            let mut q = vec![BigRational::zero(); rem.len().saturating_sub(r1.len()) + 1];
            let lead = r1.last().unwrap().clone();
            while rem.len() >= r1.len() {
                let d = rem.len() - r1.len();
                let c = rem.last().unwrap() / &lead;
                q[d] = c.clone();
                for (j, bj) in r1.iter().enumerate() {
                    let v = rem[d + j].clone() - &c * bj;
                    rem[d + j] = v;
                }
                trim(&mut rem);
                if rem.len() >= r1.len() && rem.last().unwrap().is_zero() {
                    trim(&mut rem);
                }
            }
            // s2 = s0 - q*s1
            let mut qs1 = vec![BigRational::zero(); q.len() + s1.len()];
            for (i, qi) in q.iter().enumerate() {
                if qi.is_zero() {
                    continue;
                }
                for (j, sj) in s1.iter().enumerate() {
                    qs1[i + j] += qi * sj;
                }
            }
            let n = s0.len().max(qs1.len());
            let mut s2 = vec![BigRational::zero(); n];
            for (i, c) in s0.iter().enumerate() {
                s2[i] += c;
            }
            for (i, c) in qs1.iter().enumerate() {
                s2[i] -= c;
            }
            trim(&mut s2);
            r0 = r1;
            r1 = rem;
            s0 = s1;
            s1 = s2;
        }
        if r1.is_empty() {
            return Err(CycloError::DivisionByZero);
        }
        // r1 is a nonzero constant: gcd. inverse = s1 / r1[0]
        let c = r1[0].clone();
        let coeffs = s1.into_iter().map(|s| s / &c).collect();
        Ok(Self::from_coeffs(self.t, coeffs))
    }

    /// Exact division certified in `Z[ζ_t]`: returns `other/self` when the
    /// quotient is integral.
    pub fn divides(&self, other: &Self) -> Result<Option<CycElt>, CycloError> {
        let inv = self.inverse()?;
        let q = other.mul(&inv);
        Ok(if q.is_integral() { Some(q) } else { None })
    }

    /// `self ~ other`: the quotient is a unit of `Z[ζ_t]`.
    pub fn is_associate(&self, other: &Self) -> Result<bool, CycloError> {
        if self.is_zero() && other.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if self.is_zero() || other.is_zero() {
            return Ok(false);
        }
        Ok(self.divides(other)?.is_some() && other.divides(self)?.is_some())
    }

    /// `x` is a unit iff `x | 1`.
    pub fn is_unit(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        self.divides(&Self::one(self.t))
            .map(|q| q.is_some())
            .unwrap_or(false)
    }

    /// Certified complex-interval image under `ζ_t ↦ exp(2πi/t)`.
    ///
    /// f64 evaluation with a rigorous first-order error bound: the returned
    /// radius dominates coefficient conversion error, trig error, and
    /// accumulation error at desk scale.
    pub fn complex_interval(&self) -> ComplexInterval {
        let t = self.t as f64;
        let mut re = 0.0f64;
        let mut im = 0.0f64;
        let mut mag = 0.0f64;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let cf = ratio_to_f64(c);
            let theta = 2.0 * std::f64::consts::PI * (i as f64) / t;
            re += cf * theta.cos();
            im += cf * theta.sin();
            mag += cf.abs();
        }
        let err = (mag + 1.0) * 1e-12;
        ComplexInterval { re, im, err }
    }

    /// Serialization form: `{ "t": t, "coeffs": ["num/den", ...] }`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "t": self.t,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

fn ratio_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        let n = c.numer().to_f64().unwrap_or(f64::MAX);
        let d = c.denom().to_f64().unwrap_or(1.0);
        n / d
    })
}

/// Complex box `value ± err` (both components).
#[derive(Clone, Copy, Debug)]
pub struct ComplexInterval {
    pub re: f64,
    pub im: f64,
    pub err: f64,
}

impl ComplexInterval {
    pub fn re_definitely_positive(&self) -> bool {
        self.re - self.err > 0.0
    }
    pub fn re_definitely_negative(&self) -> bool {
        self.re + self.err < 0.0
    }
    pub fn contains_zero(&self) -> bool {
        self.re.abs() <= self.err && self.im.abs() <= self.err
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0 (t={})", self.t);
        }
        let parts: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| format!("{}*z{}^{}", c, self.t, i))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// Evaluation map `ev_ξ`: `q^{e/4} ↦ ζ_t^{u·e mod t}` extended linearly.
pub fn ev_xi(f: &QLaurent, spec: &RootSpec) -> CycElt {
    ev_at_zeta(f, spec.t(), spec.u as i64)
}

/// Evaluate a `QLaurent` at `q^{1/4} = ζ_t^u` for arbitrary conductor and
/// exponent (the general form used when working directly at `ξ = ζ_r`).
pub fn ev_at_zeta(f: &QLaurent, t: u64, u: i64) -> CycElt {
    // bin coefficients by exponent mod t first, then reduce mod Φ_t once
    let mut bins = vec![BigRational::zero(); t as usize];
    for (e, c) in f.terms() {
        let exp = (u as i128 * *e as i128).rem_euclid(t as i128) as usize;
        bins[exp] += c;
    }
    CycElt::from_coeffs(t, bins)
}

/// `ξ^{a/4}` as a ring element, i.e. `(ξ^{1/4})^a = ζ_t^{u·a}`.
pub fn xi_quarter_pow(spec: &RootSpec, a: i64) -> CycElt {
    let t = spec.t();
    let exp = (spec.u as i128 * a as i128).rem_euclid(t as i128) as i64;
    CycElt::zeta_pow(t, exp)
}

/// `ξ^a` for integer `a`.
pub fn xi_pow(spec: &RootSpec, a: i64) -> CycElt {
    xi_quarter_pow(spec, 4 * a)
}

/// `O_ξ = (ξ;ξ)_{⌊(r−1)/2⌋}`.
pub fn o_xi(spec: &RootSpec) -> CycElt {
    poch_at_xi(spec, (spec.r as i64 - 1) / 2)
}

/// `(ξ;ξ)_m = ∏_{j=1}^m (1 − ξ^j)`.
pub fn poch_at_xi(spec: &RootSpec, m: i64) -> CycElt {
    let t = spec.t();
    let mut out = CycElt::one(t);
    for j in 1..=m {
        out = out.mul(&CycElt::one(t).sub(&xi_pow(spec, j)));
    }
    out
}

/// `x_k = ∏_{j=⌊k/2⌋+1}^k (1 − ξ^j) = ev_ξ(X_k)`.
pub fn x_k(spec: &RootSpec, k: i64) -> CycElt {
    let t = spec.t();
    let mut out = CycElt::one(t);
    for j in (k / 2 + 1)..=k {
        out = out.mul(&CycElt::one(t).sub(&xi_pow(spec, j)));
    }
    out
}

/// `e_8 = exp(πi/4) = ζ_t^{t/8}`; the conductor is always divisible by 8.
pub fn e8(t: u64) -> CycElt {
    assert!(t % 8 == 0, "conductor must contain an 8th root of unity");
    CycElt::zeta_pow(t, (t / 8) as i64)
}

/// `√2 = e_8 + e_8^{−1}` (the positive real square root).
pub fn sqrt2(t: u64) -> CycElt {
    let e = e8(t);
    e.add(&e.conj())
}

/// `√-1` as `ζ_t^{t/4}`.
pub fn sqrt_minus_one(t: u64) -> CycElt {
    assert!(t % 4 == 0);
    CycElt::zeta_pow(t, (t / 4) as i64)
}

/// The positive-real square root of `r` inside `Z[ζ_t]`, built from
/// `∏_{j=1}^{(r−1)/2} |1−ξ^j|` with `|1−ξ^j| = ±√−1 (ξ^{j/2}−ξ^{−j/2})`,
/// the overall sign fixed by the complex embedding. For even `r` the product
/// yields `√(r/2)` and is completed by `√2`.
pub fn sqrt_r(spec: &RootSpec) -> CycElt {
    let t = spec.t();
    let r = spec.r as i64;
    let i_elt = sqrt_minus_one(t);
    let mut prod = CycElt::one(t);
    for j in 1..=((r - 1) / 2) {
        // xi^{j/2} - xi^{-j/2} = (xi^{1/4})^{2j} - (xi^{1/4})^{-2j}
        let term = xi_quarter_pow(spec, 2 * j).sub(&xi_quarter_pow(spec, -2 * j));
        prod = prod.mul(&i_elt).mul(&term);
    }
    if spec.r % 2 == 0 {
        prod = prod.mul(&sqrt2(t));
    }
    canonical_positive(prod)
}

/// Square root of `n ∈ {2, r}` in the ring; post-verified by squaring in tests.
pub fn sqrt_in_ring(n: u64, spec: &RootSpec) -> CycElt {
    if n == 2 {
        canonical_positive(sqrt2(spec.t()))
    } else if n == spec.r {
        sqrt_r(spec)
    } else {
        panic!("sqrt_in_ring only supports n = 2 or n = r");
    }
}

/// Pick the representative with positive real part under the canonical
/// embedding; panics if the interval straddles zero (cannot happen for the
/// nonzero real algebraic numbers this is applied to at desk scale).
pub fn canonical_positive(x: CycElt) -> CycElt {
    let iv = x.complex_interval();
    if iv.re_definitely_positive() {
        x
    } else if iv.re_definitely_negative() {
        x.neg()
    } else {
        panic!("embedding interval straddles zero; cannot fix sign");
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::{poch_q, x_poly};

    #[test]
    fn cyclotomic_poly_small() {
        let x_minus_1 = vec![BigInt::from(-1), BigInt::from(1)];
        assert_eq!(cyclotomic_poly(1), x_minus_1);
        // t=4: x^2+1
        assert_eq!(
            cyclotomic_poly(4),
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)]
        );
        // t=8: x^4+1
        assert_eq!(
            cyclotomic_poly(8),
            vec![
                BigInt::from(1),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(0),
                BigInt::from(1)
            ]
        );
        // degree is phi(t)
        for t in 1..=30u64 {
            assert_eq!(cyclotomic_poly(t).len() as u64 - 1, euler_phi(t));
        }
    }

    #[test]
    fn root_spec_orders() {
        // odd r: the 4 sibling fourth roots have orders {4r, r, 4r, 2r} in some order
        for r in [3u64, 5, 7, 9] {
            let us = RootSpec::all_us(r);
            let t = conductor(r);
            let mut orders: Vec<u64> = us
                .iter()
                .map(|&u| order_of_zeta_power(t, u))
                .collect();
            orders.sort_unstable();
            orders.dedup();
            assert_eq!(orders, vec![r, 2 * r, 4 * r]);
        }
        // even r: always ord4 = 4r
        for r in [2u64, 4, 6, 8] {
            for u in RootSpec::all_us(r) {
                assert_eq!(order_of_zeta_power(conductor(r), u), 4 * r);
            }
        }
    }

    #[test]
    fn default_u_is_classical() {
        // odd r: zeta_{8r}^2 = exp(pi i/2r)
        assert_eq!(RootSpec::default_u(5), 2);
        assert_eq!(RootSpec::default_u(3), 2);
        // even r: zeta_{4r}^1
        assert_eq!(RootSpec::default_u(4), 1);
    }

    #[test]
    fn star_condition_rejected() {
        // r=3, t=24: u=20 gives ord4 = 6 = 2r
        assert_eq!(order_of_zeta_power(24, 20), 6);
        assert!(matches!(
            RootSpec::new(3, 20, Group::Su2),
            Err(CycloError::StarCondition)
        ));
        // fine for SO(3)
        assert!(RootSpec::new(3, 20, Group::So3).is_ok());
    }

    #[test]
    fn ev_xi_homomorphism() {
        let spec = RootSpec::with_default_u(5, Group::So3).unwrap();
        let f = poch_q(1, 3);
        let g = x_poly(4);
        let lhs = ev_xi(&f.mul(&g), &spec);
        let rhs = ev_xi(&f, &spec).mul(&ev_xi(&g, &spec));
        assert_eq!(lhs, rhs);
        let lhs = ev_xi(&f.add(&g), &spec);
        let rhs = ev_xi(&f, &spec).add(&ev_xi(&g, &spec));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn poch_r_minus_1_is_r() {
        // Lemma: (xi;xi)_{r-1} = r
        for r in 2..=20u64 {
            let group = if r % 2 == 1 { Group::So3 } else { Group::Su2 };
            let spec = RootSpec::with_default_u(r, group).unwrap();
            let val = poch_at_xi(&spec, r as i64 - 1);
            assert_eq!(val, CycElt::from_int(spec.t(), r as i64), "r={r}");
        }
    }

    #[test]
    fn inverse_and_divides() {
        let spec = RootSpec::with_default_u(5, Group::So3).unwrap();
        let t = spec.t();
        let x = CycElt::one(t).sub(&xi_pow(&spec, 1));
        let inv = x.inverse().unwrap();
        assert_eq!(x.mul(&inv), CycElt::one(t));
        // (1 - zeta) divides r for prime r
        let r_elt = CycElt::from_int(t, 5);
        assert!(x.divides(&r_elt).unwrap().is_some());
        // 2 does not divide 1
        let two = CycElt::from_int(t, 2);
        assert!(two.divides(&CycElt::one(t)).unwrap().is_none());
        // x/x = 1
        assert_eq!(x.divides(&x).unwrap().unwrap(), CycElt::one(t));
    }

    #[test]
    fn sqrt2_and_sqrt_r() {
        for r in [3u64, 4, 5, 7, 9] {
            let group = if r % 2 == 1 { Group::So3 } else { Group::Su2 };
            let spec = RootSpec::with_default_u(r, group).unwrap();
            let t = spec.t();
            let s2 = sqrt_in_ring(2, &spec);
            assert_eq!(s2.mul(&s2), CycElt::from_int(t, 2));
            assert!(s2.complex_interval().re_definitely_positive());
            let sr = sqrt_in_ring(r, &spec);
            assert_eq!(sr.mul(&sr), CycElt::from_int(t, r as i64), "r={r}");
            assert!(sr.complex_interval().re_definitely_positive());
            assert!(sr.is_integral());
        }
        // r = 4: sqrt is the rational integer 2
        let spec = RootSpec::with_default_u(4, Group::Su2).unwrap();
        assert_eq!(sqrt_in_ring(4, &spec), CycElt::from_int(spec.t(), 2));
    }

    #[test]
    fn unit_1_minus_xi_iff_not_prime_power() {
        // 1 - xi is a unit iff r has at least two distinct prime factors
        for r in [5u64, 6, 9, 15] {
            let group = if r % 2 == 1 { Group::So3 } else { Group::Su2 };
            let spec = RootSpec::with_default_u(r, group).unwrap();
            let x = CycElt::one(spec.t()).sub(&xi_pow(&spec, 1));
            let is_pp = [5u64, 9].contains(&r);
            assert_eq!(x.is_unit(), !is_pp, "r={r}");
        }
    }

    #[test]
    fn conj_is_involutive_ring_map() {
        let spec = RootSpec::with_default_u(7, Group::So3).unwrap();
        let a = o_xi(&spec);
        let b = x_k(&spec, 3);
        assert_eq!(a.conj().conj(), a);
        assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
    }
}
