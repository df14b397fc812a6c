//! The divisibility engine: the ideal `I_k ⊂ Z[z^{±1}, q^{±1}]` generated by
//! the Pochhammer factors `(q^a z; q)_k`, the evaluation operator
//! `Λ_Q(z^j) = q^{Q(j)}` for a quadratic form `Q`, and the exact divisibility
//! statements built on them:
//!
//! - `Λ_Q(I_k) ⊆ X_k · Z[q^{±1}]` where `X_k = ∏_{j=⌊k/2⌋+1}^k (1−q^j)`,
//! - the Andrews-type alternating sums, divisible by `X_k`,
//! - the expansion of integer-point-integral polynomials in the basis
//!   `∏_i (z_i;q)_{k_i} / (q;q)_{k_i}`, with certified `Z[q^{±1}]`
//!   coefficients computed by triangular evaluation at `z_i = q^{−k_i}`,
//! - at a primitive `r`-th root of unity `ξ`: divisibility of
//!   `Σ_n ξ^{Q(n)} f(ξ^n, ξ)` by `x_k · O_ξ` in `Z[ξ]`, and the companion
//!   `x_{r−1−k}`-divisibility of binomial character sums.
//!
//! Every claimed divisibility is verified by exact division; a failure is
//! reported as a distinguished falsification signal, not an ordinary error,
//! since it would contradict a theorem.

use crate::cyclo::{CycElt, RootSpec};
use crate::qlaurent::{
    pochhammer, poch_q, q_round_binom, x_poly, QLaurent, ZQLaurent,
};
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum IdealError {
    /// A divisibility guaranteed by a theorem failed. This is a counterexample
    /// signal and must never occur on valid inputs.
    #[error("falsified: {0}")]
    Falsified(String),
    /// The input does not satisfy the hypothesis of the statement being used.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
}

/// Integer quadratic form `Q(n) = a2·n² + a1·n + a0`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct QuadForm {
    pub a2: i64,
    pub a1: i64,
    pub a0: i64,
}

impl QuadForm {
    pub fn new(a2: i64, a1: i64, a0: i64) -> Self {
        QuadForm { a2, a1, a0 }
    }

    pub fn eval(&self, n: i64) -> i64 {
        self.a2 * n * n + self.a1 * n + self.a0
    }

    /// The pure-square part `a2·n² + a0`, used by the `a1`-elimination step.
    pub fn without_linear(&self) -> Self {
        QuadForm { a2: self.a2, a1: 0, a0: self.a0 }
    }
}

/// Element of `I_k`, kept in generator form: `Σ_i c_i(q) · z^{d_i} · (q^{a_i} z; q)_k`.
///
/// Membership in the ideal is constructive: elements can only be assembled
/// from the generators, so no membership decision procedure is needed.
#[derive(Clone, Debug)]
pub struct IkElement {
    pub k: i64,
    terms: Vec<(QLaurent, i64, i64)>,
}

impl IkElement {
    pub fn new(k: i64) -> Result<Self, IdealError> {
        if k < 0 {
            return Err(IdealError::Hypothesis(format!("k = {k} < 0")));
        }
        Ok(IkElement { k, terms: Vec::new() })
    }

    /// Add `coeff(q) · z^d · (q^a z;q)_k`; the coefficient must lie in `Z[q^{±1}]`.
    pub fn push(&mut self, coeff: QLaurent, d: i64, a: i64) -> Result<(), IdealError> {
        if !(coeff.is_integer() && coeff.in_q_lattice()) {
            return Err(IdealError::Hypothesis(
                "coefficient must lie in Z[q^{+-1}]".into(),
            ));
        }
        self.terms.push((coeff, d, a));
        Ok(())
    }

    /// The single generator `z^d (q^a z;q)_k`.
    pub fn generator(k: i64, d: i64, a: i64) -> Result<Self, IdealError> {
        let mut e = Self::new(k)?;
        e.push(QLaurent::one(), d, a)?;
        Ok(e)
    }

    pub fn terms(&self) -> &[(QLaurent, i64, i64)] {
        &self.terms
    }

    /// Expand the generator combination into an explicit bivariate polynomial.
    pub fn materialize(&self) -> ZQLaurent {
        let mut out = ZQLaurent::zero();
        for (coeff, d, a) in &self.terms {
            let g = pochhammer(*a, self.k).mul_z_pow(*d).mul_q(coeff);
            out = out.add(&g);
        }
        out
    }
}

/// `Λ_Q`: the `Z[q^{±1}]`-linear extension of `z^j ↦ q^{Q(j)}`.
pub fn lambda_q(f: &ZQLaurent, q_form: &QuadForm) -> QLaurent {
    let mut out = QLaurent::zero();
    for (j, c) in f.terms() {
        out = out.add(&c.shift(4 * q_form.eval(*j)));
    }
    out
}

/// `Λ_Q(e) / X_k`, certified exact in `Z[q^{±1}]`.
///
/// The linear part of `Q` is also eliminated by the substitution
/// `z ↦ q^{a1} z` (which preserves `I_k`) and the two evaluation routes are
/// compared, cross-validating the reduction used in the proof.
pub fn check_thm1(e: &IkElement, q_form: &QuadForm) -> Result<QLaurent, IdealError> {
    let f = e.materialize();
    let direct = lambda_q(&f, q_form);
    let reduced = lambda_q(&f.subst_qc_z(q_form.a1), &q_form.without_linear());
    if direct != reduced {
        return Err(IdealError::Falsified(format!(
            "linear-part elimination mismatch for Q = ({}, {}, {})",
            q_form.a2, q_form.a1, q_form.a0
        )));
    }
    let quot = direct.div_exact(&x_poly(e.k)).ok_or_else(|| {
        IdealError::Falsified(format!(
            "X_{} does not divide Lambda_Q of a degree-{} ideal element",
            e.k, e.k
        ))
    })?;
    if !(quot.is_integer() && quot.in_q_lattice()) {
        return Err(IdealError::Falsified(format!(
            "quotient by X_{} is not in Z[q^(+-1)]",
            e.k
        )));
    }
    Ok(quot)
}

/// The alternating Andrews-type sum
/// `Σ_{j=0}^k (−1)^j binom_q(k,j) q^{Q(j) + j(j−1)/2}`, returned as its exact
/// quotient by `X_k`.
pub fn andrews_sum(k: i64, q_form: &QuadForm) -> Result<QLaurent, IdealError> {
    if k < 0 {
        return Err(IdealError::Hypothesis(format!("k = {k} < 0")));
    }
    let mut sum = QLaurent::zero();
    for j in 0..=k {
        let mut term = q_round_binom(k, j).shift(4 * (q_form.eval(j) + j * (j - 1) / 2));
        if j % 2 == 1 {
            term = term.neg();
        }
        sum = sum.add(&term);
    }
    sum.div_exact(&x_poly(k))
        .filter(|quot| quot.is_integer() && quot.in_q_lattice())
        .ok_or_else(|| {
            IdealError::Falsified(format!("Andrews sum for k = {k} is not divisible by X_{k}"))
        })
}

// ---------------------------------------------------------------------------
// Rational functions of q and multivariate polynomials over them, used by the
// basis expansion.
// ---------------------------------------------------------------------------

/// Element of `Q(q)` as a quotient of sparse Laurent polynomials. Fractions
/// are reduced opportunistically (whenever the denominator divides exactly).
#[derive(Clone, PartialEq, Debug)]
pub struct QFrac {
    num: QLaurent,
    den: QLaurent,
}

impl QFrac {
    pub fn new(num: QLaurent, den: QLaurent) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if let Some(q) = num.div_exact(&den) {
            QFrac { num: q, den: QLaurent::one() }
        } else {
            QFrac { num, den }
        }
    }

    pub fn zero() -> Self {
        Self::from_laurent(QLaurent::zero())
    }

    pub fn one() -> Self {
        Self::from_laurent(QLaurent::one())
    }

    pub fn from_laurent(num: QLaurent) -> Self {
        QFrac { num, den: QLaurent::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        QFrac { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero fraction");
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn eq_frac(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }

    /// The fraction as a Laurent polynomial, if the division is exact.
    pub fn as_laurent(&self) -> Option<QLaurent> {
        self.num.div_exact(&self.den)
    }
}

/// Multivariate polynomial in `z_1 .. z_n` with [`QFrac`] coefficients,
/// indexed by exponent vectors.
#[derive(Clone, Debug)]
pub struct MPoly {
    pub nvars: usize,
    terms: BTreeMap<Vec<i64>, QFrac>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: QFrac) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn monomial(nvars: usize, exps: Vec<i64>, c: QFrac) -> Self {
        assert_eq!(exps.len(), nvars);
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn terms(&self) -> &BTreeMap<Vec<i64>, QFrac> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            let entry = out
                .terms
                .entry(e.clone())
                .or_insert_with(QFrac::zero);
            *entry = entry.add(c);
            if entry.is_zero() {
                out.terms.remove(e);
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<i64> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                let c = c1.mul(c2);
                let entry = out.terms.entry(e.clone()).or_insert_with(QFrac::zero);
                *entry = entry.add(&c);
                if entry.is_zero() {
                    out.terms.remove(&e);
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &QFrac) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, k)| (e.clone(), k.mul(c))).collect(),
        }
    }

    /// `(q^a · z^{exps}; q)_k` for a monomial `z^{exps}` in the variables.
    pub fn poch_monomial(nvars: usize, exps: Vec<i64>, a: i64, k: i64) -> Self {
        let mut out = Self::constant(nvars, QFrac::one());
        for j in 0..k {
            let factor = Self::constant(nvars, QFrac::one()).sub(&Self::monomial(
                nvars,
                exps.clone(),
                QFrac::from_laurent(QLaurent::q_pow(a + j)),
            ));
            out = out.mul(&factor);
        }
        out
    }

    /// Evaluate at `z_i = q^{m_i}`.
    pub fn eval_at_qpowers(&self, m: &[i64]) -> QFrac {
        assert_eq!(m.len(), self.nvars);
        let mut out = QFrac::zero();
        for (e, c) in &self.terms {
            let shift: i64 = e.iter().zip(m).map(|(ei, mi)| ei * mi).sum();
            let scaled = QFrac {
                num: c.num.shift(4 * shift),
                den: c.den.clone(),
            };
            out = out.add(&scaled);
        }
        out
    }

    pub fn eq_poly(&self, other: &Self) -> bool {
        self.sub(other).is_zero()
    }

    /// Per-variable maximum exponent; errors on negative exponents.
    fn degree_bounds(&self) -> Result<Vec<i64>, IdealError> {
        let mut deg = vec![0i64; self.nvars];
        for e in self.terms.keys() {
            for (i, ei) in e.iter().enumerate() {
                if *ei < 0 {
                    return Err(IdealError::Hypothesis(
                        "basis expansion requires a genuine polynomial in the z_i".into(),
                    ));
                }
                deg[i] = deg[i].max(*ei);
            }
        }
        Ok(deg)
    }
}

/// The basis element `∏_i (z_i;q)_{k_i} / (q;q)_{k_i}` evaluated at
/// `z_i = q^{−m_i}`, as a fraction.
fn basis_value(k: &[i64], m: &[i64]) -> QFrac {
    let mut out = QFrac::one();
    for (ki, mi) in k.iter().zip(m) {
        out = out.mul(&QFrac::new(poch_q(-mi, *ki), poch_q(1, *ki)));
    }
    out
}

/// Coefficients of `f` in the basis `∏_i (z_i;q)_{k_i}/(q;q)_{k_i}`.
///
/// Solved by triangular evaluation at `z_i = q^{−m_i}`: the basis element
/// indexed by `k` vanishes there unless `k ≤ m` componentwise, and the
/// diagonal value `∏ (−1)^{m_i} q^{−m_i(m_i+1)/2}` is a unit. The hypothesis
/// (`f(q^{m_1},…,q^{m_n}) ∈ Z[q^{±1}]` at all integer points) is probed on the
/// window `|m_i| ≤ probe`, and every computed coefficient is certified to lie
/// in `Z[q^{±1}]`.
pub fn expand_pochhammer_basis(
    f: &MPoly,
    probe: i64,
) -> Result<BTreeMap<Vec<i64>, QLaurent>, IdealError> {
    let deg = f.degree_bounds()?;
    // probe window for the integrality hypothesis
    let mut m = vec![-probe; f.nvars];
    loop {
        let v = f.eval_at_qpowers(&m);
        let ok = v
            .as_laurent()
            .map(|l| l.is_integer() && l.in_q_lattice())
            .unwrap_or(false);
        if !ok {
            return Err(IdealError::Hypothesis(format!(
                "f({m:?}) is not in Z[q^(+-1)]"
            )));
        }
        if !advance(&mut m, -probe, probe) {
            break;
        }
    }
    // triangular solve, indices ascending lexicographically so that every
    // k <= m (componentwise) is available when m is processed
    let mut coeffs: BTreeMap<Vec<i64>, QLaurent> = BTreeMap::new();
    let mut idx = vec![0i64; f.nvars];
    loop {
        let neg: Vec<i64> = idx.iter().map(|i| -i).collect();
        let mut val = f.eval_at_qpowers(&neg);
        for (k, c) in &coeffs {
            if k.iter().zip(&idx).all(|(ki, mi)| ki <= mi) {
                val = val.sub(&QFrac::from_laurent(c.clone()).mul(&basis_value(k, &idx)));
            }
        }
        let c = val.div(&basis_value(&idx, &idx));
        let lau = c.as_laurent().filter(|l| l.is_integer() && l.in_q_lattice());
        match lau {
            Some(l) => {
                if !l.is_zero() {
                    coeffs.insert(idx.clone(), l);
                }
            }
            None => {
                return Err(IdealError::Hypothesis(format!(
                    "coefficient at k = {idx:?} is not in Z[q^(+-1)]"
                )))
            }
        }
        if !advance_bounded(&mut idx, &deg) {
            break;
        }
    }
    Ok(coeffs)
}

/// Rebuild `Σ c_k ∏ (z_i;q)_{k_i}/(q;q)_{k_i}` from an expansion table.
pub fn materialize_basis_combination(
    nvars: usize,
    coeffs: &BTreeMap<Vec<i64>, QLaurent>,
) -> MPoly {
    let mut out = MPoly::zero(nvars);
    for (k, c) in coeffs {
        let mut b = MPoly::constant(nvars, QFrac::from_laurent(c.clone()));
        for (i, ki) in k.iter().enumerate() {
            let mut exps = vec![0i64; nvars];
            exps[i] = 1;
            let poch = MPoly::poch_monomial(nvars, exps, 0, *ki);
            b = b.mul(&poch).scale(&QFrac::new(QLaurent::one(), poch_q(1, *ki)));
        }
        out = out.add(&b);
    }
    out
}

fn advance(m: &mut [i64], lo: i64, hi: i64) -> bool {
    for i in (0..m.len()).rev() {
        if m[i] < hi {
            m[i] += 1;
            for mj in m.iter_mut().skip(i + 1) {
                *mj = lo;
            }
            return true;
        }
    }
    false
}

fn advance_bounded(m: &mut [i64], hi: &[i64]) -> bool {
    for i in (0..m.len()).rev() {
        if m[i] < hi[i] {
            m[i] += 1;
            for mj in m.iter_mut().skip(i + 1) {
                *mj = 0;
            }
            return true;
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Root-of-unity divisibility. These checks run in Z[ζ_r] directly: every
// quantity involved lies in Q(ξ), and integrality there is equivalent to
// integrality in the larger ring fixed by the root spec.
// ---------------------------------------------------------------------------

/// The exponent `w` with `ξ = ζ_r^w` under the identification
/// `ζ_r = ζ_t^{t/r}`.
fn xi_exponent_mod_r(spec: &RootSpec) -> i64 {
    let t = spec.t();
    let step = t / spec.r;
    let e = (4 * spec.u) % t;
    debug_assert_eq!(e % step, 0);
    (e / step) as i64
}

/// Evaluate a Laurent polynomial lying in `Z[q^{±1}]` at `q = ζ_r^w`.
fn ev_q_at_zeta_r(f: &QLaurent, r: u64, w: i64) -> CycElt {
    let mut out = CycElt::zero(r);
    for (e, c) in f.terms() {
        assert!(e % 4 == 0, "evaluation at q requires integral q-exponents");
        let exp = (w as i128 * (e / 4) as i128).rem_euclid(r as i128) as i64;
        out = out.add(&CycElt::zeta_pow(r, exp).scale(c));
    }
    out
}

fn one_minus_xi_pow(r: u64, w: i64, j: i64) -> CycElt {
    CycElt::one(r).sub(&CycElt::zeta_pow(r, (w * j).rem_euclid(r as i64)))
}

/// `(ξ;ξ)_m` in `Z[ζ_r]`.
fn poch_xi_small(r: u64, w: i64, m: i64) -> CycElt {
    let mut out = CycElt::one(r);
    for j in 1..=m {
        out = out.mul(&one_minus_xi_pow(r, w, j));
    }
    out
}

/// `x_k = ∏_{j=⌊k/2⌋+1}^k (1−ξ^j)` in `Z[ζ_r]`.
fn x_k_small(r: u64, w: i64, k: i64) -> CycElt {
    let mut out = CycElt::one(r);
    for j in (k / 2 + 1)..=k {
        out = out.mul(&one_minus_xi_pow(r, w, j));
    }
    out
}

/// `Σ_{n=0}^{r−1} ξ^{Q(n)} f(ξ^n, ξ)` divided exactly by `x_k · O_ξ`,
/// where `O_ξ = (ξ;ξ)_{⌊(r−1)/2⌋}` and `f` is the given `I_k` element.
pub fn check_div1(
    e: &IkElement,
    q_form: &QuadForm,
    spec: &RootSpec,
) -> Result<CycElt, IdealError> {
    let r = spec.r;
    if e.k < 0 || e.k >= r as i64 {
        return Err(IdealError::Hypothesis(format!(
            "need 0 <= k < r, got k = {}, r = {r}",
            e.k
        )));
    }
    let w = xi_exponent_mod_r(spec);
    let f = e.materialize();
    let mut total = QLaurent::zero();
    for n in 0..r as i64 {
        total = total.add(&f.eval_z_qpow(n).shift(4 * q_form.eval(n)));
    }
    let sum = ev_q_at_zeta_r(&total, r, w);
    let divisor = x_k_small(r, w, e.k).mul(&poch_xi_small(r, w, (r as i64 - 1) / 2));
    match divisor.divides(&sum) {
        Ok(Some(q)) => Ok(q),
        Ok(None) => Err(IdealError::Falsified(format!(
            "character sum not divisible by x_{} O_xi at r = {r}",
            e.k
        ))),
        Err(e) => Err(IdealError::Hypothesis(format!("divisor is zero: {e}"))),
    }
}

/// `y = Σ_{n=0}^{r−1} ξ^{Q(n)} binom_q(n+a, k)|_{q=ξ}`, divided exactly by
/// `x_{r−1−k}`.
pub fn check_lemma_xbar(
    a: i64,
    k: i64,
    q_form: &QuadForm,
    spec: &RootSpec,
) -> Result<CycElt, IdealError> {
    let r = spec.r;
    if k < 0 || k >= r as i64 {
        return Err(IdealError::Hypothesis(format!(
            "need 0 <= k < r, got k = {k}, r = {r}"
        )));
    }
    let w = xi_exponent_mod_r(spec);
    let mut total = QLaurent::zero();
    for n in 0..r as i64 {
        total = total.add(&q_round_binom(n + a, k).shift(4 * q_form.eval(n)));
    }
    let sum = ev_q_at_zeta_r(&total, r, w);
    let divisor = x_k_small(r, w, r as i64 - 1 - k);
    match divisor.divides(&sum) {
        Ok(Some(q)) => Ok(q),
        Ok(None) => Err(IdealError::Falsified(format!(
            "binomial character sum not divisible by x_{} at r = {r}",
            r as i64 - 1 - k
        ))),
        Err(e) => Err(IdealError::Hypothesis(format!("divisor is zero: {e}"))),
    }
}

/// Finite-window necessary condition for `I_k` membership: `f(q^b, q)` is
/// divisible by `(q;q)_k` for every integer `b` in the window.
pub fn check_evaluation_criterion(e: &IkElement, window: i64) -> Result<(), IdealError> {
    let f = e.materialize();
    let divisor = poch_q(1, e.k);
    for b in -window..=window {
        let v = f.eval_z_qpow(b);
        if v.div_exact(&divisor).is_none() {
            return Err(IdealError::Falsified(format!(
                "f(q^{b}, q) is not divisible by (q;q)_{}",
                e.k
            )));
        }
    }
    Ok(())
}
