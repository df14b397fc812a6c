//! Linking pairings on finite abelian groups: non-singular symmetric
//! bilinear maps `G × G → Q/Z`, presented by a list of cyclic orders and a
//! Gram matrix of rationals taken mod 1.
//!
//! - [`phi_b`] builds the pairing `φ_B(x, x') = xᵀ B^{−1} x'` on `Zⁿ/BZⁿ`
//!   from a symmetric nonsingular integer matrix, put into cyclic coordinates
//!   by Smith normal form.
//! - [`LinkingPairing::block_sum`] is the orthogonal direct sum.
//! - [`is_isomorphic`] decides isometry by backtracking over generator
//!   images, pruned by element-order and self-linking statistics, and returns
//!   a witness.
//! - `E_0^k` is the hyperbolic form `(1/2^k)[[0,1],[1,0]]` on `(Z/2^k)²`; its
//!   defining property `E_0^k ⊕ φ(−2^k) ≅ φ(−2^k) ⊕ φ(2^k) ⊕ φ(2^k)` is
//!   verified by brute force, and [`stabilized_diagonal`] applies it to write
//!   a stabilized block sum as a diagonal of prime type.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::json;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum PairError {
    #[error("invalid pairing: {0}")]
    Invalid(String),
    #[error("singular matrix")]
    Singular,
    #[error("group order {0} exceeds the search bound {1}")]
    TooLarge(u64, u64),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Reduce into `[0, 1)`, i.e. the canonical representative mod 1.
fn mod1(x: &BigRational) -> BigRational {
    let f = x.floor();
    x - f
}

/// A linking pairing: orders `(d_1, …, d_n)` with `d_i ≥ 2`, and a symmetric
/// Gram matrix over `Q/Z` with `d_i · g_ij ≡ 0 (mod 1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinkingPairing {
    orders: Vec<u64>,
    gram: Vec<Vec<BigRational>>,
}

impl LinkingPairing {
    pub fn new(orders: Vec<u64>, gram: Vec<Vec<BigRational>>) -> Result<Self, PairError> {
        let n = orders.len();
        if gram.len() != n || gram.iter().any(|row| row.len() != n) {
            return Err(PairError::Invalid("gram shape mismatch".into()));
        }
        if orders.iter().any(|d| *d < 2) {
            return Err(PairError::Invalid("orders must be >= 2".into()));
        }
        let gram: Vec<Vec<BigRational>> = gram
            .iter()
            .map(|row| row.iter().map(mod1).collect())
            .collect();
        for i in 0..n {
            for j in 0..n {
                if mod1(&(&gram[i][j] - &gram[j][i])) != BigRational::zero() {
                    return Err(PairError::Invalid(format!("gram not symmetric at ({i},{j})")));
                }
                let scaled = &gram[i][j] * BigRational::from_integer(BigInt::from(orders[i]));
                if !scaled.is_integer() {
                    return Err(PairError::Invalid(format!(
                        "entry ({i},{j}) is not annihilated by d_{i} = {}",
                        orders[i]
                    )));
                }
            }
        }
        Ok(LinkingPairing { orders, gram })
    }

    /// The trivial pairing on the trivial group.
    pub fn trivial() -> Self {
        LinkingPairing {
            orders: vec![],
            gram: vec![],
        }
    }

    pub fn orders(&self) -> &[u64] {
        &self.orders
    }

    pub fn gram(&self) -> &[Vec<BigRational>] {
        &self.gram
    }

    pub fn group_order(&self) -> u64 {
        self.orders.iter().product()
    }

    /// `ν(x, y) mod 1` for coordinate vectors.
    pub fn eval(&self, x: &[i64], y: &[i64]) -> BigRational {
        let mut out = BigRational::zero();
        for (i, &xi) in x.iter().enumerate() {
            if xi == 0 {
                continue;
            }
            for (j, &yj) in y.iter().enumerate() {
                if yj == 0 {
                    continue;
                }
                out += &self.gram[i][j] * rat(xi * yj, 1);
            }
        }
        mod1(&out)
    }

    /// All group elements as coordinate vectors.
    pub fn elements(&self) -> Vec<Vec<i64>> {
        let mut out = vec![vec![]];
        for &d in &self.orders {
            let mut next = Vec::with_capacity(out.len() * d as usize);
            for e in &out {
                for v in 0..d as i64 {
                    let mut e2 = e.clone();
                    e2.push(v);
                    next.push(e2);
                }
            }
            out = next;
        }
        out
    }

    fn element_order(&self, x: &[i64]) -> u64 {
        let mut ord = 1u64;
        for (&d, &xi) in self.orders.iter().zip(x) {
            let xi = xi.rem_euclid(d as i64) as u64;
            if xi != 0 {
                let o = d / num_integer::gcd(d, xi);
                ord = num_integer::lcm(ord, o);
            }
        }
        ord
    }

    /// Injectivity of `G → Hom(G, Q/Z)`: no nonzero `x` pairs integrally with
    /// every generator.
    pub fn is_nonsingular(&self, bound: u64) -> Result<bool, PairError> {
        let order = self.group_order();
        if order > bound {
            return Err(PairError::TooLarge(order, bound));
        }
        let n = self.orders.len();
        'outer: for x in self.elements() {
            if x.iter().all(|v| *v == 0) {
                continue;
            }
            for j in 0..n {
                let mut gen = vec![0i64; n];
                gen[j] = 1;
                if !self.eval(&x, &gen).is_zero() {
                    continue 'outer;
                }
            }
            return Ok(false);
        }
        Ok(true)
    }

    pub fn block_sum(&self, other: &Self) -> Self {
        let n1 = self.orders.len();
        let n2 = other.orders.len();
        let mut orders = self.orders.clone();
        orders.extend_from_slice(&other.orders);
        let mut gram = vec![vec![BigRational::zero(); n1 + n2]; n1 + n2];
        for i in 0..n1 {
            for j in 0..n1 {
                gram[i][j] = self.gram[i][j].clone();
            }
        }
        for i in 0..n2 {
            for j in 0..n2 {
                gram[n1 + i][n1 + j] = other.gram[i][j].clone();
            }
        }
        LinkingPairing { orders, gram }
    }

    /// Serialization: `{"orders": […], "gram": [[num, den], …]}` with the
    /// Gram entries flattened row-major.
    pub fn to_json(&self) -> serde_json::Value {
        let flat: Vec<serde_json::Value> = self
            .gram
            .iter()
            .flatten()
            .map(|g| json!([g.numer().to_string(), g.denom().to_string()]))
            .collect();
        json!({ "orders": self.orders, "gram": flat })
    }

    pub fn from_json(v: &serde_json::Value) -> Result<Self, PairError> {
        let orders: Vec<u64> = serde_json::from_value(
            v.get("orders")
                .cloned()
                .ok_or_else(|| PairError::Invalid("missing orders".into()))?,
        )
        .map_err(|e| PairError::Invalid(format!("bad orders: {e}")))?;
        let n = orders.len();
        let flat = v
            .get("gram")
            .and_then(|g| g.as_array())
            .ok_or_else(|| PairError::Invalid("missing gram".into()))?;
        if flat.len() != n * n {
            return Err(PairError::Invalid(format!(
                "gram must have {} entries, found {}",
                n * n,
                flat.len()
            )));
        }
        let parse_entry = |e: &serde_json::Value| -> Result<BigRational, PairError> {
            let pair = e
                .as_array()
                .filter(|a| a.len() == 2)
                .ok_or_else(|| PairError::Invalid("gram entry must be [num, den]".into()))?;
            let parse_int = |x: &serde_json::Value| -> Result<BigInt, PairError> {
                if let Some(i) = x.as_i64() {
                    Ok(BigInt::from(i))
                } else if let Some(s) = x.as_str() {
                    s.parse()
                        .map_err(|e| PairError::Invalid(format!("bad integer {s}: {e}")))
                } else {
                    Err(PairError::Invalid("gram entry component must be integer or string".into()))
                }
            };
            let num = parse_int(&pair[0])?;
            let den = parse_int(&pair[1])?;
            if den.is_zero() {
                return Err(PairError::Invalid("zero denominator in gram".into()));
            }
            Ok(BigRational::new(num, den))
        };
        let mut gram = vec![vec![BigRational::zero(); n]; n];
        for i in 0..n {
            for j in 0..n {
                gram[i][j] = parse_entry(&flat[i * n + j])?;
            }
        }
        Self::new(orders, gram)
    }
}

/// `φ_(b)`: the cyclic pairing `(1/b mod 1)` on `Z/|b|`; trivial for `|b| = 1`.
pub fn phi_cyclic(b: i64) -> LinkingPairing {
    assert!(b != 0);
    if b.abs() == 1 {
        return LinkingPairing::trivial();
    }
    LinkingPairing::new(vec![b.unsigned_abs()], vec![vec![rat(1, b)]]).unwrap()
}

/// The hyperbolic block `E_0^k`: Gram `(1/2^k)[[0,1],[1,0]]` on `(Z/2^k)²`.
pub fn e0(k: u32) -> LinkingPairing {
    let d = 1i64 << k;
    LinkingPairing::new(
        vec![d as u64, d as u64],
        vec![
            vec![BigRational::zero(), rat(1, d)],
            vec![rat(1, d), BigRational::zero()],
        ],
    )
    .unwrap()
}

/// Smith normal form `U·B·V = D`; returns `(diag(D), U)`.
fn smith_u(b: &[Vec<i64>]) -> (Vec<i128>, Vec<Vec<i128>>) {
    let n = b.len();
    let mut m: Vec<Vec<i128>> = b
        .iter()
        .map(|row| row.iter().map(|&x| x as i128).collect())
        .collect();
    let mut u: Vec<Vec<i128>> = (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect();
    for t in 0..n {
        loop {
            // find a pivot with minimal nonzero absolute value in the block
            let mut pivot: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if m[i][j] != 0
                        && pivot
                            .map(|(pi, pj)| m[i][j].abs() < m[pi][pj].abs())
                            .unwrap_or(true)
                    {
                        pivot = Some((i, j));
                    }
                }
            }
            let (pi, pj) = match pivot {
                Some(p) => p,
                None => return (vec![0; 0], u), // cannot happen for nonsingular B
            };
            m.swap(t, pi);
            u.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            // eliminate the rest of row/column t
            let mut clean = true;
            for i in (t + 1)..n {
                if m[i][t] != 0 {
                    let f = m[i][t] / m[t][t];
                    for j in 0..n {
                        m[i][j] -= f * m[t][j];
                        u[i][j] -= f * u[t][j];
                    }
                    if m[i][t] != 0 {
                        clean = false;
                    }
                }
            }
            for j in (t + 1)..n {
                if m[t][j] != 0 {
                    let f = m[t][j] / m[t][t];
                    for i in 0..n {
                        m[i][j] -= f * m[i][t];
                    }
                    if m[t][j] != 0 {
                        clean = false;
                    }
                }
            }
            if clean
                && ((t + 1)..n).all(|i| m[i][t] == 0)
                && ((t + 1)..n).all(|j| m[t][j] == 0)
            {
                break;
            }
        }
    }
    // divisibility chain is irrelevant for our use; only the cyclic orders
    // matter, and those are |diagonal| after full diagonalization
    let d = (0..n).map(|i| m[i][i]).collect();
    (d, u)
}

/// Rational inverse by Gauss-Jordan elimination.
fn rational_inverse(w: &[Vec<i128>]) -> Option<Vec<Vec<BigRational>>> {
    let n = w.len();
    let mut a: Vec<Vec<BigRational>> = w
        .iter()
        .map(|row| row.iter().map(|&x| rat_i128(x)).collect())
        .collect();
    let mut inv: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&i| !a[i][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for i in 0..n {
            if i != col && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in 0..n {
                    let av = &a[col][j] * &f;
                    a[i][j] -= av;
                    let iv = &inv[col][j] * &f;
                    inv[i][j] -= iv;
                }
            }
        }
    }
    Some(inv)
}

fn rat_i128(x: i128) -> BigRational {
    BigRational::from_integer(x.into())
}

/// `φ_B` for a symmetric nonsingular integer matrix: the pairing
/// `x ↦ xᵀ B^{−1} x'` on `Zⁿ/BZⁿ`, in Smith cyclic coordinates. Trivial
/// cyclic factors (`d = 1`) are dropped.
pub fn phi_b(b: &[Vec<i64>]) -> Result<LinkingPairing, PairError> {
    let n = b.len();
    if b.iter().any(|row| row.len() != n) {
        return Err(PairError::Invalid("matrix must be square".into()));
    }
    for i in 0..n {
        for j in 0..n {
            if b[i][j] != b[j][i] {
                return Err(PairError::Invalid("matrix must be symmetric".into()));
            }
        }
    }
    if n == 0 {
        return Ok(LinkingPairing::trivial());
    }
    let (d, u) = smith_u(b);
    if d.iter().any(|x| *x == 0) {
        return Err(PairError::Singular);
    }
    // W = U B Uᵀ; the pairing in Smith coordinates is W^{-1}
    let mut w = vec![vec![0i128; n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = 0i128;
            for s in 0..n {
                for t in 0..n {
                    acc += u[i][s] * (b[s][t] as i128) * u[j][t];
                }
            }
            w[i][j] = acc;
        }
    }
    let winv = rational_inverse(&w).ok_or(PairError::Singular)?;
    let keep: Vec<usize> = (0..n).filter(|&i| d[i].unsigned_abs() > 1).collect();
    let orders: Vec<u64> = keep.iter().map(|&i| d[i].unsigned_abs() as u64).collect();
    let gram: Vec<Vec<BigRational>> = keep
        .iter()
        .map(|&i| keep.iter().map(|&j| mod1(&winv[i][j])).collect())
        .collect();
    LinkingPairing::new(orders, gram)
}

/// Maximum group order accepted by the isomorphism search.
pub const ISO_SEARCH_BOUND: u64 = 512;

/// Decide whether two pairings are isometric; on success return generator
/// images (`witness[i]` is the image of the `i`-th generator of `a` in `b`'s
/// coordinates).
pub fn is_isomorphic(
    a: &LinkingPairing,
    b: &LinkingPairing,
) -> Result<Option<Vec<Vec<i64>>>, PairError> {
    let order = a.group_order();
    if order > ISO_SEARCH_BOUND || b.group_order() > ISO_SEARCH_BOUND {
        return Err(PairError::TooLarge(
            order.max(b.group_order()),
            ISO_SEARCH_BOUND,
        ));
    }
    if order != b.group_order() {
        return Ok(None);
    }
    if order == 1 {
        return Ok(Some(vec![]));
    }
    // invariant precheck: multiset of (element order, self-linking)
    let stats = |p: &LinkingPairing| {
        let mut v: Vec<(u64, BigRational)> = p
            .elements()
            .into_iter()
            .map(|x| (p.element_order(&x), p.eval(&x, &x)))
            .collect();
        v.sort();
        v
    };
    if stats(a) != stats(b) {
        return Ok(None);
    }
    let elems_b = b.elements();
    let n = a.orders.len();
    let gens_a: Vec<Vec<i64>> = (0..n)
        .map(|i| {
            let mut g = vec![0i64; n];
            g[i] = 1;
            g
        })
        .collect();
    let mut images: Vec<Vec<i64>> = Vec::new();
    if backtrack(a, b, &elems_b, &gens_a, &mut images) {
        Ok(Some(images))
    } else {
        Ok(None)
    }
}

fn backtrack(
    a: &LinkingPairing,
    b: &LinkingPairing,
    elems_b: &[Vec<i64>],
    gens_a: &[Vec<i64>],
    images: &mut Vec<Vec<i64>>,
) -> bool {
    let idx = images.len();
    if idx == gens_a.len() {
        return generates(b, elems_b, images);
    }
    let d = a.orders[idx];
    let self_link = a.eval(&gens_a[idx], &gens_a[idx]);
    'cand: for y in elems_b {
        // homomorphism: d·y = 0, i.e. ord(y) | d
        if d % b.element_order(y) != 0 {
            continue;
        }
        if b.eval(y, y) != self_link {
            continue;
        }
        for (j, prev) in images.iter().enumerate() {
            if b.eval(y, prev) != a.eval(&gens_a[idx], &gens_a[j]) {
                continue 'cand;
            }
        }
        images.push(y.clone());
        if backtrack(a, b, elems_b, gens_a, images) {
            return true;
        }
        images.pop();
    }
    false
}

/// Do the images generate all of `b`? Closure by repeated addition.
fn generates(b: &LinkingPairing, elems_b: &[Vec<i64>], images: &[Vec<i64>]) -> bool {
    use std::collections::BTreeSet;
    let n = b.orders.len();
    let zero = vec![0i64; n];
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::new();
    seen.insert(zero.clone());
    let mut frontier = vec![zero];
    while let Some(x) = frontier.pop() {
        for g in images {
            let y: Vec<i64> = x
                .iter()
                .zip(g)
                .zip(&b.orders)
                .map(|((xi, gi), &d)| (xi + gi).rem_euclid(d as i64))
                .collect();
            if seen.insert(y.clone()) {
                frontier.push(y);
            }
        }
    }
    seen.len() == elems_b.len()
}

/// Block description of a pairing: diagonal entries `φ_(b)` and hyperbolic
/// summands `E_0^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairingBlock {
    Phi(i64),
    E0(u32),
}

/// Realize a block list as a pairing.
pub fn realize_blocks(blocks: &[PairingBlock]) -> LinkingPairing {
    let mut out = LinkingPairing::trivial();
    for b in blocks {
        out = out.block_sum(&match b {
            PairingBlock::Phi(v) => phi_cyclic(*v),
            PairingBlock::E0(k) => e0(*k),
        });
    }
    out
}

/// Diagonal entries of the stabilization: `s` copies of every `φ` entry, and
/// for each `E_0^{k}` summand `s` copies of `−2^{k}` together with `s + 1`
/// copies of `2^{k}`. Each hyperbolic block is absorbed against a borrowed
/// `φ(2^k)` via `E_0^k ⊕ φ(2^k) ≅ φ(−2^k) ⊕ 2·φ(2^k)`; iterating gives
/// `s·E_0^k ⊕ φ(2^k) ≅ s·φ(−2^k) ⊕ (s+1)·φ(2^k)`, which
/// [`verify_stabilized_diagonal`] checks by brute force.
pub fn stabilized_diagonal(blocks: &[PairingBlock], s: u32) -> Vec<i64> {
    let mut out = Vec::new();
    for b in blocks {
        if let PairingBlock::Phi(v) = b {
            for _ in 0..s {
                out.push(*v);
            }
        }
    }
    for b in blocks {
        if let PairingBlock::E0(k) = b {
            let d = 1i64 << k;
            for _ in 0..s {
                out.push(-d);
            }
            for _ in 0..s + 1 {
                out.push(d);
            }
        }
    }
    out
}

/// Check the stabilization isometry
/// `s·(blocks) ⊕ ⊕_{E_0^k} φ(2^k) ≅ diag(stabilized_diagonal)` by brute
/// force (sizes permitting).
pub fn verify_stabilized_diagonal(blocks: &[PairingBlock], s: u32) -> Result<bool, PairError> {
    let mut lhs = LinkingPairing::trivial();
    for _ in 0..s {
        lhs = lhs.block_sum(&realize_blocks(blocks));
    }
    for b in blocks {
        if let PairingBlock::E0(k) = b {
            lhs = lhs.block_sum(&phi_cyclic(1i64 << k));
        }
    }
    let diag = stabilized_diagonal(blocks, s);
    let rhs = realize_blocks(&diag.iter().map(|&v| PairingBlock::Phi(v)).collect::<Vec<_>>());
    Ok(is_isomorphic(&lhs, &rhs)?.is_some())
}
