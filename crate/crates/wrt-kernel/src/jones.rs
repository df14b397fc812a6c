//! Surgery presentations, colored Jones values, and cyclotomic block
//! expansions.
//!
//! The supported link family is "split-diagonal": each surgery component is
//! an unknot with integer framing, optionally Hopf-linked (linking number 1)
//! with one colored companion unknot, and distinct blocks are split. The
//! colored Jones polynomial of such a link is an explicit product:
//! `[n]` for a bare unknot, `[n·s]` for a 0-framed Hopf pair with companion
//! color `s`, with each framed component contributing `q^{b(n²−1)/4}`. This
//! family covers every computation performed downstream (lens spaces, the
//! `U^±` generators, connected sums); anything else enters through an
//! explicit value table.
//!
//! The cyclotomic block solver inverts
//! `J(n) = Σ_k c(k) ∏_i ⟨⟨n_i+k_i; 2k_i+1⟩⟩ {k_i}! λ_{n_i}^{ε_i}/λ_{k_i+1}^{ε_i}`
//! by back-substitution: the summand at `k` vanishes unless `n_i ≥ k_i + 1`
//! componentwise, and at `n = k + 1` it collapses to `∏ {k_i}!`. The solved
//! coefficients are certified to satisfy the integrality
//! `c(k) ∈ ((q^{kmax+1};q)_{kmax+1}/(1−q)) · Z[q^{±1/4}]`, and the expansion
//! is re-summed and compared with the table. The symmetry principle
//! (periodicity, reflection antisymmetry, and the `n ↦ r−n` transformation
//! law at a root of unity) is checked against the same values.

use crate::cyclo::{ev_xi, xi_quarter_pow, RootSpec};
use crate::qlaurent::{lambda, poch_q, q_bracket_binom, q_braces_fact, q_int, QLaurent};
use once_cell::sync::Lazy;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, HashMap};
use std::sync::RwLock;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum JonesError {
    #[error("falsified: {0}")]
    Falsified(String),
    #[error("invalid presentation: {0}")]
    BadPresentation(String),
    #[error("table is missing a value for colors {0:?}")]
    MissingValue(Vec<i64>),
}

/// A colored companion unknot, Hopf-linked with its surgery component.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Companion {
    pub color: i64,
    #[serde(default)]
    pub framing: i64,
}

/// One surgery component: an unknot with integer framing, optionally carrying
/// a companion.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryComponent {
    pub framing: i64,
    #[serde(default)]
    pub companion: Option<Companion>,
}

/// A split-diagonal surgery presentation. The linking matrix of the surgery
/// part is `diag(b_1, …, b_m)`; companions link their own component once and
/// nothing else.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurgeryPresentation {
    pub surgery: Vec<SurgeryComponent>,
}

impl SurgeryPresentation {
    pub fn from_json(s: &str) -> Result<Self, JonesError> {
        let v: serde_json::Value = serde_json::from_str(s)
            .map_err(|e| JonesError::BadPresentation(format!("malformed JSON: {e}")))?;
        let pres: SurgeryPresentation = serde_json::from_value(v)
            .map_err(|e| JonesError::BadPresentation(format!("bad schema: {e}")))?;
        pres.validate()?;
        Ok(pres)
    }

    pub fn validate(&self) -> Result<(), JonesError> {
        for c in &self.surgery {
            if let Some(comp) = c.companion {
                if comp.color < 1 {
                    return Err(JonesError::BadPresentation(format!(
                        "companion color {} < 1",
                        comp.color
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.surgery.len()
    }

    /// Framing vector `(b_1, …, b_m)` of the surgery part.
    pub fn framings(&self) -> Vec<i64> {
        self.surgery.iter().map(|c| c.framing).collect()
    }

    /// Counts `(β_+, β_−, β_0)` of positive, negative, zero framings.
    pub fn signature_counts(&self) -> (usize, usize, usize) {
        let pos = self.surgery.iter().filter(|c| c.framing > 0).count();
        let neg = self.surgery.iter().filter(|c| c.framing < 0).count();
        (pos, neg, self.arity() - pos - neg)
    }

    /// `ε_i = Σ_j ℓ̃_ij (s_j − 1) mod 2`; for this family `ℓ̃_ij` is 1
    /// exactly when component `i` carries companion `j`.
    pub fn epsilon_vector(&self) -> Vec<u8> {
        self.surgery
            .iter()
            .map(|c| match c.companion {
                Some(comp) => ((comp.color - 1).rem_euclid(2)) as u8,
                None => 0,
            })
            .collect()
    }

    /// The same presentation with every surgery framing set to 0 (companion
    /// framings kept); this is the link the block solver receives.
    pub fn with_zero_framings(&self) -> Self {
        SurgeryPresentation {
            surgery: self
                .surgery
                .iter()
                .map(|c| SurgeryComponent {
                    framing: 0,
                    companion: c.companion,
                })
                .collect(),
        }
    }

    /// Full linking matrix of the underlying link, surgery components first,
    /// companions after (in component order).
    pub fn full_linking_matrix(&self) -> Vec<Vec<i64>> {
        let m = self.arity();
        let comps: Vec<usize> = self
            .surgery
            .iter()
            .enumerate()
            .filter(|(_, c)| c.companion.is_some())
            .map(|(i, _)| i)
            .collect();
        let n = m + comps.len();
        let mut mat = vec![vec![0i64; n]; n];
        for (i, c) in self.surgery.iter().enumerate() {
            mat[i][i] = c.framing;
        }
        for (j, &i) in comps.iter().enumerate() {
            let comp = self.surgery[i].companion.unwrap();
            mat[m + j][m + j] = comp.framing;
            mat[i][m + j] = 1;
            mat[m + j][i] = 1;
        }
        mat
    }

    /// Fixed companion colors, in component order.
    pub fn companion_colors(&self) -> Vec<i64> {
        self.surgery
            .iter()
            .filter_map(|c| c.companion.map(|comp| comp.color))
            .collect()
    }
}

/// `J` of the presented link at surgery colors `n` (companion colors fixed).
///
/// Per block: `q^{b(n²−1)/4}` for the framed surgery unknot, times
/// `q^{p(s²−1)/4}` for a framed companion, times `[n·s]` (or `[n]` without a
/// companion).
pub fn jones_value(pres: &SurgeryPresentation, n: &[i64]) -> Result<QLaurent, JonesError> {
    if n.len() != pres.arity() {
        return Err(JonesError::BadPresentation(format!(
            "expected {} colors, got {}",
            pres.arity(),
            n.len()
        )));
    }
    let mut out = QLaurent::one();
    for (c, &ni) in pres.surgery.iter().zip(n) {
        let mut block = match c.companion {
            Some(comp) => q_int(ni * comp.color)
                .shift(comp.framing * (comp.color * comp.color - 1)),
            None => q_int(ni),
        };
        block = block.shift(c.framing * (ni * ni - 1));
        out = out.mul(&block);
    }
    Ok(out)
}

/// Table of Jones values on a finite color window.
#[derive(Clone, Debug)]
pub struct JonesTable {
    pub arity: usize,
    values: BTreeMap<Vec<i64>, QLaurent>,
}

impl JonesTable {
    pub fn new(arity: usize) -> Self {
        JonesTable {
            arity,
            values: BTreeMap::new(),
        }
    }

    pub fn insert(&mut self, n: Vec<i64>, v: QLaurent) {
        assert_eq!(n.len(), self.arity);
        self.values.insert(n, v);
    }

    pub fn get(&self, n: &[i64]) -> Result<&QLaurent, JonesError> {
        self.values
            .get(n)
            .ok_or_else(|| JonesError::MissingValue(n.to_vec()))
    }

    /// Tabulate the family formula on the window `n ∈ [1..max_color]^m`.
    pub fn from_presentation(
        pres: &SurgeryPresentation,
        max_color: i64,
    ) -> Result<Self, JonesError> {
        let m = pres.arity();
        let mut table = Self::new(m);
        let mut n = vec![1i64; m];
        loop {
            table.insert(n.clone(), jones_value(pres, &n)?);
            let mut i = m;
            loop {
                if i == 0 {
                    return Ok(table);
                }
                i -= 1;
                if n[i] < max_color {
                    n[i] += 1;
                    for nj in n.iter_mut().skip(i + 1) {
                        *nj = 1;
                    }
                    break;
                }
            }
        }
    }

    /// Parse a JSON object mapping comma-separated color tuples to canonical
    /// polynomial strings.
    pub fn from_json(arity: usize, v: &serde_json::Value) -> Result<Self, JonesError> {
        let obj = v
            .as_object()
            .ok_or_else(|| JonesError::BadPresentation("table must be a JSON object".into()))?;
        let mut table = Self::new(arity);
        for (key, val) in obj {
            let n: Result<Vec<i64>, _> = key.split(',').map(|p| p.trim().parse()).collect();
            let n = n.map_err(|e| {
                JonesError::BadPresentation(format!("bad color tuple {key}: {e}"))
            })?;
            if n.len() != arity {
                return Err(JonesError::BadPresentation(format!(
                    "tuple {key} has wrong arity"
                )));
            }
            let s = val.as_str().ok_or_else(|| {
                JonesError::BadPresentation(format!("value for {key} must be a string"))
            })?;
            let poly = QLaurent::parse_canonical(s)
                .map_err(JonesError::BadPresentation)?;
            table.insert(n, poly);
        }
        Ok(table)
    }
}

/// The summand factor `⟨⟨n+k; 2k+1⟩⟩ {k}! λ_n^ε / λ_{k+1}^ε` of the block
/// expansion. The `ε = 1` division is exact in `Z[v^{±1}]`, which is asserted.
pub fn block_basis(n: i64, k: i64, eps: u8) -> QLaurent {
    {
        let cache = BLOCK_BASIS_CACHE.read().unwrap();
        if let Some(v) = cache.get(&(n, k, eps)) {
            return v.clone();
        }
    }
    let v = block_basis_uncached(n, k, eps);
    BLOCK_BASIS_CACHE
        .write()
        .unwrap()
        .insert((n, k, eps), v.clone());
    v
}

static BLOCK_BASIS_CACHE: Lazy<RwLock<HashMap<(i64, i64, u8), QLaurent>>> =
    Lazy::new(|| RwLock::new(HashMap::new()));

fn block_basis_uncached(n: i64, k: i64, eps: u8) -> QLaurent {
    let binom = q_bracket_binom(n + k, 2 * k + 1);
    let base = if eps == 0 {
        binom
    } else {
        binom
            .mul(&lambda(n))
            .div_exact(&lambda(k + 1))
            .expect("binomial times lambda_n is divisible by lambda_{k+1}")
    };
    base.mul(&q_braces_fact(k))
}

/// Solved cyclotomic block coefficients `c(k)`, `k ∈ [0..depth]^m`.
#[derive(Clone, Debug)]
pub struct HabiroBlocks {
    pub eps: Vec<u8>,
    pub depth: i64,
    coeffs: BTreeMap<Vec<i64>, QLaurent>,
}

impl HabiroBlocks {
    pub fn coeff(&self, k: &[i64]) -> QLaurent {
        self.coeffs.get(k).cloned().unwrap_or_else(QLaurent::zero)
    }

    pub fn coeffs(&self) -> &BTreeMap<Vec<i64>, QLaurent> {
        &self.coeffs
    }

    /// Re-sum the expansion at colors `n`.
    pub fn reconstruct(&self, n: &[i64]) -> QLaurent {
        let mut out = QLaurent::zero();
        for (k, c) in &self.coeffs {
            let mut term = c.clone();
            for (i, (&ni, &ki)) in n.iter().zip(k.iter()).enumerate() {
                term = term.mul(&block_basis(ni, ki, self.eps[i]));
            }
            out = out.add(&term);
        }
        out
    }
}

/// The allowed-denominator shape of the integrality statement:
/// `(q^{k+1};q)_{k+1} / (1−q)`, a genuine polynomial.
pub fn integrality_divisor(kmax: i64) -> QLaurent {
    poch_q(kmax + 1, kmax + 1)
        .div_exact(&poch_q(1, 1))
        .expect("(q^{k+1};q)_{k+1} is divisible by 1-q")
}

/// Solve the block expansion for `c(k)`, `k ∈ [0..depth]^m`, from a table
/// covering `n ∈ [1..depth+1]^m`. Asserts the integrality certificate for
/// every coefficient and re-checks the expansion against the table.
pub fn habiro_blocks(
    table: &JonesTable,
    eps: &[u8],
    depth: i64,
) -> Result<HabiroBlocks, JonesError> {
    let m = table.arity;
    assert_eq!(eps.len(), m);
    let mut blocks = HabiroBlocks {
        eps: eps.to_vec(),
        depth,
        coeffs: BTreeMap::new(),
    };
    let mut k = vec![0i64; m];
    loop {
        // target colors n = k + 1
        let n: Vec<i64> = k.iter().map(|ki| ki + 1).collect();
        let mut rhs = table.get(&n)?.clone();
        for (kp, c) in &blocks.coeffs {
            if kp.iter().zip(&k).all(|(a, b)| a <= b) {
                let mut term = c.clone();
                for (i, (&ni, &kpi)) in n.iter().zip(kp.iter()).enumerate() {
                    term = term.mul(&block_basis(ni, kpi, eps[i]));
                }
                rhs = rhs.sub(&term);
            }
        }
        let mut diag = QLaurent::one();
        for &ki in &k {
            diag = diag.mul(&q_braces_fact(ki));
        }
        let c = rhs.div_exact(&diag).ok_or_else(|| {
            JonesError::Falsified(format!("triangular solve failed at k = {k:?}"))
        })?;
        if !c.is_zero() {
            // integrality certificate at kmax = max k_i
            let kmax = *k.iter().max().unwrap();
            let quot = c.div_exact(&integrality_divisor(kmax));
            let ok = quot.map(|q| q.is_integer()).unwrap_or(false);
            if !ok {
                return Err(JonesError::Falsified(format!(
                    "c({k:?}) is not in ((q^{{k+1}};q)_{{k+1}}/(1-q)) Z[q^(+-1/4)]"
                )));
            }
            blocks.coeffs.insert(k.clone(), c);
        }
        // advance k over [0..depth]^m
        let mut i = m;
        loop {
            if i == 0 {
                // final residual check over the full probe window
                let mut n = vec![1i64; m];
                loop {
                    if &blocks.reconstruct(&n) != table.get(&n)? {
                        return Err(JonesError::Falsified(format!(
                            "reconstruction mismatch at n = {n:?}"
                        )));
                    }
                    let mut j = m;
                    loop {
                        if j == 0 {
                            return Ok(blocks);
                        }
                        j -= 1;
                        if n[j] < depth + 1 {
                            n[j] += 1;
                            for nl in n.iter_mut().skip(j + 1) {
                                *nl = 1;
                            }
                            break;
                        }
                    }
                }
            }
            i -= 1;
            if k[i] < depth {
                k[i] += 1;
                for kl in k.iter_mut().skip(i + 1) {
                    *kl = 0;
                }
                break;
            }
        }
    }
}

/// One instance of the symmetry principle at a root of unity: with
/// `α ∈ {0,1}^m` acting by `1∗n = r−n` on surgery colors,
/// `ev_ξ J(α∗n) = (−ξ^{r/2})^{Σ a_i} ξ^t ev_ξ J(n)`,
/// `t = r(r−2)/4 · Σ ℓ_ij a_i a_j + r/2 · Σ ℓ_ij a_i n̂_j`
/// over the full linking matrix (companion colors fixed, `a_j = 0` there).
pub fn symmetry_check(
    pres: &SurgeryPresentation,
    spec: &RootSpec,
    alpha: &[u8],
    n: &[i64],
) -> Result<bool, JonesError> {
    let m = pres.arity();
    assert_eq!(alpha.len(), m);
    assert_eq!(n.len(), m);
    let r = spec.r as i64;
    let lm = pres.full_linking_matrix();
    let total = lm.len();
    // full color and alpha vectors, companions appended with fixed colors
    let mut colors: Vec<i64> = n.to_vec();
    colors.extend(pres.companion_colors());
    let mut a_full = vec![0i64; total];
    for (i, &ai) in alpha.iter().enumerate() {
        a_full[i] = ai as i64;
    }
    let starred: Vec<i64> = n
        .iter()
        .zip(alpha)
        .map(|(&ni, &ai)| if ai == 1 { r - ni } else { ni })
        .collect();
    let lhs = ev_xi(&jones_value(pres, &starred)?, spec);
    // 4t = r(r-2) sum l a a + 2r sum l a (n-1)
    let mut t4: i64 = 0;
    for i in 0..total {
        for j in 0..total {
            t4 += r * (r - 2) * lm[i][j] * a_full[i] * a_full[j];
            t4 += 2 * r * lm[i][j] * a_full[i] * (colors[j] - 1);
        }
    }
    let sum_a: i64 = a_full.iter().sum();
    let mut factor = xi_quarter_pow(spec, t4).mul(&xi_quarter_pow(spec, 2 * r * sum_a));
    if sum_a % 2 == 1 {
        factor = factor.neg();
    }
    let rhs = factor.mul(&ev_xi(&jones_value(pres, n)?, spec));
    Ok(lhs == rhs)
}

/// Periodicity of `ev_ξ J` in each color with period `2r`.
pub fn periodicity_check(
    pres: &SurgeryPresentation,
    spec: &RootSpec,
    n: &[i64],
) -> Result<bool, JonesError> {
    let base = ev_xi(&jones_value(pres, n)?, spec);
    for i in 0..n.len() {
        let mut shifted = n.to_vec();
        shifted[i] += 2 * spec.r as i64;
        if ev_xi(&jones_value(pres, &shifted)?, spec) != base {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reflection antisymmetry: `ev_ξ J(…, r+n_i, …) = −ev_ξ J(…, r−n_i, …)`.
pub fn reflection_check(
    pres: &SurgeryPresentation,
    spec: &RootSpec,
    n: &[i64],
) -> Result<bool, JonesError> {
    let r = spec.r as i64;
    for i in 0..n.len() {
        let mut plus = n.to_vec();
        plus[i] = r + n[i];
        let mut minus = n.to_vec();
        minus[i] = r - n[i];
        let lhs = ev_xi(&jones_value(pres, &plus)?, spec);
        let rhs = ev_xi(&jones_value(pres, &minus)?, spec).neg();
        if lhs != rhs {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Convenience: the unknot as its own presentation.
pub fn unknot(framing: i64) -> SurgeryPresentation {
    SurgeryPresentation {
        surgery: vec![SurgeryComponent {
            framing,
            companion: None,
        }],
    }
}

/// A Hopf pair: framed surgery unknot with a colored companion.
pub fn hopf_pair(framing: i64, color: i64, companion_framing: i64) -> SurgeryPresentation {
    SurgeryPresentation {
        surgery: vec![SurgeryComponent {
            framing,
            companion: Some(Companion {
                color,
                framing: companion_framing,
            }),
        }],
    }
}
