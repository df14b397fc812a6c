//! The Grothendieck ring `R = Z[v^{±1}][V]` of the quantum `sl_2` at the
//! level of characters: Chebyshev-type classes `V_n` with
//! `V_n V = V_{n+1} + V_{n−1}`, the shifted bases
//! `P_n^{(0)} = ∏_{j=1}^n (V − λ_{2j−1})` and
//! `P_n^{(1)} = ∏_{j=1}^n (V − λ_{2j})` with `λ_m = v^m + v^{−m}`,
//! the change-of-basis identities expressing `V_n` through binomials,
//! the Rosso pairing `⟨V_n, f⟩ = [n] f(λ_n)`, the orthogonality
//! `⟨S_p^{(ε)}, P_k^{(ε)}⟩ = δ_{k,p} · (closed form)`, and the quantum-trace
//! values `B(n,l,j)` computed both by recursion and in closed form.
//!
//! Everything here is a polynomial computation in `R`; no quantum-group
//! elements are constructed. Claimed identities are asserted exactly, and a
//! failure is a falsification signal.

use crate::qlaurent::{lambda, poch_q, q_bracket_binom, q_braces, q_braces_fact, q_int, q_round_binom, QLaurent};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RepError {
    #[error("falsified: {0}")]
    Falsified(String),
    #[error("invalid argument: {0}")]
    BadArg(String),
}

/// Polynomial in the formal variable `V` with `Z[v^{±1}]` coefficients,
/// stored densely by `V`-degree.
#[derive(Clone, PartialEq, Debug)]
pub struct RElt {
    coeffs: Vec<QLaurent>,
}

impl RElt {
    pub fn zero() -> Self {
        RElt { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(QLaurent::one())
    }

    pub fn constant(c: QLaurent) -> Self {
        let mut e = RElt { coeffs: vec![c] };
        e.normalize();
        e
    }

    /// The generator `V`.
    pub fn v() -> Self {
        RElt {
            coeffs: vec![QLaurent::zero(), QLaurent::one()],
        }
    }

    fn normalize(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.is_zero() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn coeff(&self, i: usize) -> QLaurent {
        self.coeffs.get(i).cloned().unwrap_or_else(QLaurent::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            coeffs.push(self.coeff(i).add(&other.coeff(i)));
        }
        let mut e = RElt { coeffs };
        e.normalize();
        e
    }

    pub fn neg(&self) -> Self {
        RElt {
            coeffs: self.coeffs.iter().map(|c| c.neg()).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![QLaurent::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        let mut e = RElt { coeffs };
        e.normalize();
        e
    }

    pub fn scale(&self, c: &QLaurent) -> Self {
        let mut e = RElt {
            coeffs: self.coeffs.iter().map(|k| k.mul(c)).collect(),
        };
        e.normalize();
        e
    }

    /// Evaluate at `V = x`.
    pub fn eval(&self, x: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(x).add(c);
        }
        out
    }

    /// Expansion in the Chebyshev basis: returns `c` with
    /// `self = Σ_{n≥1} c[n−1] · V_n`. Exact because `V_n` is monic of degree
    /// `n−1`.
    pub fn chebyshev_coeffs(&self) -> Vec<QLaurent> {
        let mut rem = self.clone();
        let deg = match rem.degree() {
            None => return vec![],
            Some(d) => d,
        };
        let mut out = vec![QLaurent::zero(); deg + 1];
        while let Some(d) = rem.degree() {
            let c = rem.coeff(d);
            out[d] = c.clone();
            rem = rem.sub(&v_n(d as i64 + 1).unwrap().scale(&c));
        }
        out
    }
}

/// `V_n`, `n ≥ 1`, by the recursion `V_{n+1} = V·V_n − V_{n−1}` with
/// `V_1 = 1`, `V_2 = V`.
pub fn v_n(n: i64) -> Result<RElt, RepError> {
    if n < 1 {
        return Err(RepError::BadArg(format!("V_n needs n >= 1, got {n}")));
    }
    let mut prev = RElt::one();
    if n == 1 {
        return Ok(prev);
    }
    let v = RElt::v();
    let mut cur = v.clone();
    for _ in 2..n {
        let next = v.mul(&cur).sub(&prev);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `P_n^{(ε)} = ∏_{j=1}^n (V − λ_{2j−1+ε})`; `P_0^{(ε)} = 1`.
pub fn p_basis(n: i64, eps: u8) -> RElt {
    assert!(n >= 0 && eps <= 1);
    let mut out = RElt::one();
    for j in 1..=n {
        out = out.mul(&RElt::v().sub(&RElt::constant(lambda(2 * j - 1 + eps as i64))));
    }
    out
}

/// Coefficients of `V_n` in the `P^{(ε)}` basis, solved by triangular
/// elimination and then asserted against the closed binomial forms:
/// `⟨⟨n+k; 2k+1⟩⟩` for `ε = 0` and `⟨⟨n+k; 2k+1⟩⟩ · λ_n / λ_{k+1}` for
/// `ε = 1` (the latter division must be exact in `Z[v^{±1}]`).
pub fn expand_v_n(n: i64, eps: u8) -> Result<Vec<QLaurent>, RepError> {
    let vn = v_n(n)?;
    let deg = (n - 1) as usize;
    let basis: Vec<RElt> = (0..=deg as i64).map(|k| p_basis(k, eps)).collect();
    let mut rem = vn;
    let mut coeffs = vec![QLaurent::zero(); deg + 1];
    while let Some(d) = rem.degree() {
        let c = rem.coeff(d);
        coeffs[d] = c.clone();
        rem = rem.sub(&basis[d].scale(&c));
    }
    for (k, c) in coeffs.iter().enumerate() {
        let binom = q_bracket_binom(n + k as i64, 2 * k as i64 + 1);
        let claimed = if eps == 0 {
            Some(binom)
        } else {
            binom.mul(&lambda(n)).div_exact(&lambda(k as i64 + 1))
        };
        match claimed {
            Some(cl) if &cl == c => {}
            _ => {
                return Err(RepError::Falsified(format!(
                    "V_{n} expansion coefficient at k={k} (eps={eps}) does not match the binomial form"
                )))
            }
        }
    }
    Ok(coeffs)
}

/// Rosso pairing `⟨x, y⟩`, extended bilinearly from `⟨V_n, f⟩ = [n] f(λ_n)`.
pub fn rosso_pairing(x: &RElt, y: &RElt) -> QLaurent {
    let mut out = QLaurent::zero();
    for (i, c) in x.chebyshev_coeffs().into_iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let n = i as i64 + 1;
        out = out.add(&c.mul(&q_int(n)).mul(&y.eval(&lambda(n))));
    }
    out
}

/// `S_p^{(1)} = V ∏_{j=1}^p (V² − λ_j²)`.
pub fn s_elt(p: i64, eps: u8) -> RElt {
    assert!(p >= 0 && eps <= 1);
    let v2 = RElt::v().mul(&RElt::v());
    let mut out = if eps == 1 { RElt::v() } else { RElt::one() };
    for j in 1..=p {
        let lj = lambda(j);
        out = out.mul(&v2.sub(&RElt::constant(lj.mul(&lj))));
    }
    out
}

/// Orthogonality: `⟨S_p^{(ε)}, P_k^{(ε)}⟩` vanishes off the diagonal; on the
/// diagonal it equals `{2k+1}!/{1}` for `ε = 0` and
/// `[p+1] λ_{p+1} ∏_{j=1}^p {j}{2p+2−j}` for `ε = 1`.
pub fn verify_orthogonality(k: i64, p: i64, eps: u8) -> Result<(), RepError> {
    let val = rosso_pairing(&s_elt(p, eps), &p_basis(k, eps));
    if k != p {
        return if val.is_zero() {
            Ok(())
        } else {
            Err(RepError::Falsified(format!(
                "pairing <S_{p}^({eps}), P_{k}^({eps})> is nonzero off the diagonal"
            )))
        };
    }
    let expected = if eps == 0 {
        q_braces_fact(2 * k + 1)
            .div_exact(&q_braces(1))
            .expect("{2k+1}! is divisible by {1}")
    } else {
        let mut e = q_int(p + 1).mul(&lambda(p + 1));
        for j in 1..=p {
            e = e.mul(&q_braces(j)).mul(&q_braces(2 * p + 2 - j));
        }
        e
    };
    if val == expected {
        Ok(())
    } else {
        Err(RepError::Falsified(format!(
            "diagonal pairing <S_{p}^({eps}), P_{p}^({eps})> does not match its closed form"
        )))
    }
}

/// `B(n,l,j)` by the two-term recursion
/// `B(n,l,j) = {j−n}{j+n} B(n−1,l,j) + q^{−j} (q^{−l}−1) B(n−1,l−1,j+1)`,
/// with `B(0,0,j) = 1` and `B(n,l,j) = 0` for `l > n` or `l < 0`.
pub fn b_trace_recursive(n: i64, l: i64, j: i64) -> QLaurent {
    if l > n || l < 0 || n < 0 {
        return QLaurent::zero();
    }
    if n == 0 {
        return QLaurent::one();
    }
    let first = q_braces(j - n)
        .mul(&q_braces(j + n))
        .mul(&b_trace_recursive(n - 1, l, j));
    let second = QLaurent::q_pow(-j)
        .mul(&QLaurent::q_pow(-l).sub(&QLaurent::one()))
        .mul(&b_trace_recursive(n - 1, l - 1, j + 1));
    first.add(&second)
}

/// `B(n,l,j)` in closed form:
/// `q^{−(j+l)n} (q;q)_n (q;q)_{n−l} binom_q(j−1, n−l) binom_q(j+n, n−l)`.
pub fn b_trace_closed(n: i64, l: i64, j: i64) -> QLaurent {
    if l > n || l < 0 || n < 0 {
        return QLaurent::zero();
    }
    poch_q(1, n)
        .mul(&poch_q(1, n - l))
        .mul(&q_round_binom(j - 1, n - l))
        .mul(&q_round_binom(j + n, n - l))
        .shift(-4 * (j + l) * n)
}

/// Both `B(n,l,j)` routes, asserted equal and divisible by `(q;q)_n`.
pub fn b_trace(n: i64, l: i64, j: i64) -> Result<QLaurent, RepError> {
    let rec = b_trace_recursive(n, l, j);
    let closed = b_trace_closed(n, l, j);
    if rec != closed {
        return Err(RepError::Falsified(format!(
            "B({n},{l},{j}): recursion and closed form disagree"
        )));
    }
    if !rec.is_zero() {
        let quot = rec.div_exact(&poch_q(1, n));
        if !quot.map(|q| q.is_integer() && q.in_q_lattice()).unwrap_or(false) {
            return Err(RepError::Falsified(format!(
                "B({n},{l},{j}) is not in (q;q)_{n} Z[q^(+-1)]"
            )));
        }
    }
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qlaurent::big;

    #[test]
    fn chebyshev_basics() {
        assert_eq!(v_n(1).unwrap(), RElt::one());
        assert_eq!(v_n(2).unwrap(), RElt::v());
        // V_3 = V^2 - 1
        let v3 = RElt::v().mul(&RElt::v()).sub(&RElt::one());
        assert_eq!(v_n(3).unwrap(), v3);
        assert!(v_n(0).is_err());
        // recursion identity V_n V = V_{n+1} + V_{n-1}
        for n in 2..=10i64 {
            let lhs = v_n(n).unwrap().mul(&RElt::v());
            let rhs = v_n(n + 1).unwrap().add(&v_n(n - 1).unwrap());
            assert_eq!(lhs, rhs, "n={n}");
        }
    }

    #[test]
    fn p_basis_small() {
        assert_eq!(p_basis(0, 0), RElt::one());
        assert_eq!(p_basis(0, 1), RElt::one());
        assert_eq!(p_basis(1, 0), RElt::v().sub(&RElt::constant(lambda(1))));
        assert_eq!(p_basis(1, 1), RElt::v().sub(&RElt::constant(lambda(2))));
    }

    #[test]
    fn p_families_are_unitriangular_bases() {
        for eps in [0u8, 1] {
            for n in 0..=10i64 {
                let p = p_basis(n, eps);
                assert_eq!(p.degree(), Some(n as usize));
                assert_eq!(p.coeff(n as usize), QLaurent::one());
                for i in 0..n as usize {
                    let c = p.coeff(i);
                    assert!(c.is_integer() && c.in_half_lattice(), "eps={eps} n={n} i={i}");
                }
            }
        }
    }

    #[test]
    fn p1_is_chebyshev_plus_lower(){
        // P_n^{(1)} = V_{n+1} + Z[v^{+-1}]-combination of V_1..V_n
        for n in 0..=10i64 {
            let c = p_basis(n, 1).chebyshev_coeffs();
            assert_eq!(c.len(), n as usize + 1);
            assert_eq!(c[n as usize], QLaurent::one());
            for ci in &c[..n as usize] {
                assert!(ci.is_integer() && ci.in_half_lattice(), "n={n}");
            }
        }
    }

    #[test]
    fn v_n_expansions_match_binomials() {
        for n in 1..=9i64 {
            let c0 = expand_v_n(n, 0).unwrap();
            let c1 = expand_v_n(n, 1).unwrap();
            assert_eq!(c0.len(), n as usize);
            assert_eq!(c1.len(), n as usize);
        }
        // spot check n=3, eps=0: coefficients qbinom(3+k, 2k+1)
        let c = expand_v_n(3, 0).unwrap();
        for (k, ck) in c.iter().enumerate() {
            assert_eq!(ck, &q_bracket_binom(3 + k as i64, 2 * k as i64 + 1));
        }
    }

    #[test]
    fn rosso_basics() {
        // <V_n, V> = [n] lambda_n
        for n in 1..=8i64 {
            let val = rosso_pairing(&v_n(n).unwrap(), &RElt::v());
            assert_eq!(val, q_int(n).mul(&lambda(n)));
        }
        // <V_1, f> = f(lambda_1)
        let f = p_basis(2, 0);
        assert_eq!(rosso_pairing(&v_n(1).unwrap(), &f), f.eval(&lambda(1)));
        // <V_{2m+2}, P_n^{(1)}> = 0 for m < n
        for n in 1..=4i64 {
            for m in 0..n {
                let val = rosso_pairing(&v_n(2 * m + 2).unwrap(), &p_basis(n, 1));
                assert!(val.is_zero(), "m={m} n={n}");
            }
        }
    }

    #[test]
    fn rosso_symmetry() {
        let elts: Vec<RElt> = (1..=8i64).map(|n| v_n(n).unwrap()).collect();
        for x in &elts {
            for y in &elts {
                assert_eq!(rosso_pairing(x, y), rosso_pairing(y, x));
            }
        }
        // also on products
        let a = elts[2].mul(&elts[4]);
        let b = elts[1].mul(&elts[5]);
        assert_eq!(rosso_pairing(&a, &b), rosso_pairing(&b, &a));
    }

    #[test]
    fn orthogonality_all_small() {
        for eps in [0u8, 1] {
            for k in 0..=6i64 {
                for p in 0..=6i64 {
                    verify_orthogonality(k, p, eps)
                        .unwrap_or_else(|e| panic!("k={k} p={p} eps={eps}: {e}"));
                }
            }
        }
    }

    #[test]
    fn orthogonality_hand_values() {
        // k=p=1, eps=1: [2] lambda_2 {1}{3}
        let val = rosso_pairing(&s_elt(1, 1), &p_basis(1, 1));
        let expected = q_int(2)
            .mul(&lambda(2))
            .mul(&q_braces(1))
            .mul(&q_braces(3));
        assert_eq!(val, expected);
        // k=p=0, eps=0: {1}!/{1} = 1
        let val = rosso_pairing(&s_elt(0, 0), &p_basis(0, 0));
        assert_eq!(val, QLaurent::one());
        // k=0, p=1, eps=1: off-diagonal zero
        assert!(rosso_pairing(&s_elt(1, 1), &p_basis(0, 1)).is_zero());
    }

    #[test]
    fn b_trace_values() {
        // n=0: 1 for any j
        for j in -3..=3i64 {
            assert_eq!(b_trace(0, 0, j).unwrap(), QLaurent::one());
        }
        // l > n: 0
        assert!(b_trace(2, 3, 1).unwrap().is_zero());
        // n=3, l=2, j=4: routes agree (checked inside)
        assert!(!b_trace(3, 2, 4).unwrap().is_zero());
    }

    #[test]
    fn b_trace_sweep() {
        for n in 0..=8i64 {
            for l in 0..=n {
                for j in -8..=8i64 {
                    b_trace(n, l, j).unwrap_or_else(|e| panic!("n={n} l={l} j={j}: {e}"));
                }
            }
        }
    }

    #[test]
    fn scale_and_eval_consistency() {
        let x = v_n(5).unwrap().scale(&QLaurent::q_pow(1).scale(&big(3)));
        let direct = x.eval(&lambda(2));
        let via = v_n(5)
            .unwrap()
            .eval(&lambda(2))
            .mul(&QLaurent::q_pow(1).scale(&big(3)));
        assert_eq!(direct, via);
    }
}
