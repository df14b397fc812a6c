//! Quadratic Gauss sums `G(b,d,ξ) = Σ_{k=0}^{n−1} ξ^{bk² + dk}` for `ξ` a
//! primitive `n`-th root of unity, with two independent evaluation paths:
//!
//! - [`gauss_brute`]: the defining sum, computed termwise by accumulating
//!   exponent multiplicities mod `n` before a single ring reduction. This is
//!   the trusted oracle.
//! - [`gauss_reduce`]: the closed-form reduction rules, applied recursively:
//!   (a) pulling out `c = gcd(b,n)` (the sum vanishes unless `c | d`),
//!   (c) vanishing when `d` is odd and `4 | n`,
//!   (d) the Chinese-remainder factorization over coprime splittings of `n`,
//!   bottoming out in brute force on prime-power cores with `b` coprime.
//!
//! The two paths are cross-validated exhaustively at small orders.

use crate::cyclo::{CycElt, CycloError};
use num_integer::Integer;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum GaussError {
    #[error("element is not a root of unity of the claimed order {0}")]
    WrongOrder(u64),
    #[error(transparent)]
    Cyclo(#[from] CycloError),
}

/// Check that `root^n = 1` and `root^{n/p} ≠ 1` for every prime `p | n`.
pub fn verify_order(root: &CycElt, n: u64) -> Result<(), GaussError> {
    let one = CycElt::one(root.t);
    if n == 0 || root.pow(n) != one {
        return Err(GaussError::WrongOrder(n));
    }
    let mut m = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            if root.pow(n / p) == one {
                return Err(GaussError::WrongOrder(n));
            }
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 && root.pow(n / m) == one {
        return Err(GaussError::WrongOrder(n));
    }
    Ok(())
}

/// `G(b,d,root) = Σ_{k=0}^{n−1} root^{bk²+dk}` by direct summation.
///
/// Exponents are folded mod `n` first, so the ring sees at most `n` monomial
/// scalings regardless of the size of `b` and `d`.
pub fn gauss_brute(b: i64, d: i64, root: &CycElt, n: u64) -> Result<CycElt, GaussError> {
    verify_order(root, n)?;
    let nn = n as i128;
    let mut mult = vec![0i64; n as usize];
    for k in 0..nn {
        let e = (b as i128 * k * k + d as i128 * k).rem_euclid(nn) as usize;
        mult[e] += 1;
    }
    let mut out = CycElt::zero(root.t);
    let mut pw = CycElt::one(root.t);
    for (e, m) in mult.iter().enumerate() {
        if *m != 0 {
            out = out.add(&pw.scale(&BigRational::from_integer((*m).into())));
        }
        if e + 1 < n as usize {
            pw = pw.mul(root);
        }
    }
    Ok(out)
}

fn smallest_prime_factor(n: u64) -> u64 {
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            return p;
        }
        p += 1;
    }
    n
}

/// `G(b,d,root)` via the closed-form reductions, recursing until the order is
/// a prime power and `b` is coprime to it, then falling back to the direct sum.
pub fn gauss_reduce(b: i64, d: i64, root: &CycElt, n: u64) -> Result<CycElt, GaussError> {
    verify_order(root, n)?;
    gauss_reduce_inner(b, d, root, n)
}

fn gauss_reduce_inner(b: i64, d: i64, root: &CycElt, n: u64) -> Result<CycElt, GaussError> {
    let nn = n as i64;
    let b = b.rem_euclid(nn);
    let d_red = d.rem_euclid(nn);
    // b ≡ 0: pure geometric sum
    if b == 0 {
        return Ok(if d_red == 0 {
            CycElt::from_int(root.t, nn)
        } else {
            CycElt::zero(root.t)
        });
    }
    // (a): pull out c = gcd(b,n)
    let c = b.gcd(&nn);
    if c > 1 {
        if d % c != 0 {
            return Ok(CycElt::zero(root.t));
        }
        let sub = gauss_reduce_inner(b / c, d / c, &root.pow(c as u64), n / c as u64)?;
        return Ok(sub.scale(&BigRational::from_integer(c.into())));
    }
    // (c): odd linear coefficient kills the sum when 4 | n
    if d % 2 != 0 && n % 4 == 0 {
        return Ok(CycElt::zero(root.t));
    }
    // (d): coprime factorization n = n1·n2
    let p = smallest_prime_factor(n);
    let mut n1 = 1u64;
    let mut m = n;
    while m % p == 0 {
        n1 *= p;
        m /= p;
    }
    let n2 = m;
    if n2 > 1 {
        let g1 = gauss_reduce_inner(b * n2 as i64, d, &root.pow(n2), n1)?;
        let g2 = gauss_reduce_inner(b * n1 as i64, d, &root.pow(n1), n2)?;
        return Ok(g1.mul(&g2));
    }
    // prime-power core with coprime b
    gauss_brute(b, d, root, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::{conductor, ev_xi, xi_pow, Group, RootSpec};
    use crate::qlaurent::QLaurent;

    fn zeta(n: u64) -> CycElt {
        CycElt::zeta_pow(n, 1)
    }

    #[test]
    fn order_verification() {
        assert!(verify_order(&zeta(12), 12).is_ok());
        assert!(verify_order(&zeta(12).pow(2), 6).is_ok());
        assert!(verify_order(&zeta(12).pow(2), 12).is_err());
        assert!(verify_order(&CycElt::one(12), 1).is_ok());
        assert!(verify_order(&CycElt::one(12), 2).is_err());
    }

    #[test]
    fn trivial_values() {
        // b = d = 0: every term is 1
        for n in [1u64, 5, 8, 12] {
            assert_eq!(
                gauss_brute(0, 0, &zeta(n), n).unwrap(),
                CycElt::from_int(n, n as i64)
            );
        }
        // b = 0, d not divisible by n: geometric sum vanishes
        assert!(gauss_brute(0, 3, &zeta(8), 8).unwrap().is_zero());
        assert!(gauss_brute(0, 5, &zeta(12), 12).unwrap().is_zero());
        // b = 0, n | d: again n
        assert_eq!(
            gauss_brute(0, 12, &zeta(12), 12).unwrap(),
            CycElt::from_int(12, 12)
        );
    }

    #[test]
    fn reduce_matches_brute_exhaustively() {
        for n in 1..=24u64 {
            let root = zeta(n);
            for b in 0..n as i64 {
                for d in 0..n as i64 {
                    let bf = gauss_brute(b, d, &root, n).unwrap();
                    let rd = gauss_reduce(b, d, &root, n).unwrap();
                    assert_eq!(bf, rd, "n={n} b={b} d={d}");
                }
            }
        }
    }

    #[test]
    fn reduce_matches_brute_nonstandard_roots() {
        // roots living in a larger ring, e.g. xi of order r inside Z[zeta_t]
        for r in [5u64, 6, 7, 9] {
            let group = if r % 2 == 1 { Group::So3 } else { Group::Su2 };
            let spec = RootSpec::with_default_u(r, group).unwrap();
            let xi = xi_pow(&spec, 1);
            for b in 0..r as i64 {
                for d in [0i64, 1, 2] {
                    let bf = gauss_brute(b, d, &xi, r).unwrap();
                    let rd = gauss_reduce(b, d, &xi, r).unwrap();
                    assert_eq!(bf, rd, "r={r} b={b} d={d}");
                }
            }
        }
    }

    #[test]
    fn square_values_by_residue() {
        // gcd(b,n) = 1: G(b,0)^2 ~ n for odd n, = 0 for n = 2 mod 4,
        // ~ 2n for n = 0 mod 4; and G(b,b)^2 = 2n when n = 2 mod 4.
        for n in [3u64, 5, 7, 9, 15, 4, 8, 12, 16, 2, 6, 10, 14] {
            let root = zeta(n);
            for b in (1..n as i64).filter(|b| b.gcd(&(n as i64)) == 1) {
                let g = gauss_brute(b, 0, &root, n).unwrap();
                let g2 = g.mul(&g);
                match n % 4 {
                    1 | 3 => {
                        let target = CycElt::from_int(n, n as i64);
                        assert!(g2.is_associate(&target).unwrap(), "n={n} b={b}");
                    }
                    2 => {
                        assert!(g2.is_zero(), "n={n} b={b}");
                        // G(b,b)^2 ~ 2n; the exact equality holds for G·conj(G)
                        let gb = gauss_brute(b, b, &root, n).unwrap();
                        let target = CycElt::from_int(n, 2 * n as i64);
                        assert!(gb.mul(&gb).is_associate(&target).unwrap(), "n={n} b={b}");
                        assert_eq!(gb.mul(&gb.conj()), target, "n={n} b={b}");
                    }
                    0 => {
                        let target = CycElt::from_int(n, 2 * n as i64);
                        assert!(g2.is_associate(&target).unwrap(), "n={n} b={b}");
                    }
                    _ => unreachable!(),
                }
            }
        }
    }

    #[test]
    fn odd_linear_term_kills_sum_mod_4() {
        let n = 16u64;
        let root = zeta(n);
        for b in 0..n as i64 {
            for d in (1..n as i64).step_by(2) {
                assert!(gauss_brute(b, d, &root, n).unwrap().is_zero(), "b={b} d={d}");
            }
        }
    }

    #[test]
    fn crt_factorization_example() {
        // n = 6 = 2*3
        let root = zeta(6);
        for b in 0..6i64 {
            for d in 0..6i64 {
                let lhs = gauss_brute(b, d, &root, 6).unwrap();
                let g2 = gauss_brute(3 * b, d, &root.pow(3), 2).unwrap();
                let g3 = gauss_brute(2 * b, d, &root.pow(2), 3).unwrap();
                assert_eq!(lhs, g2.mul(&g3), "b={b} d={d}");
            }
        }
    }

    #[test]
    fn gauss_in_quarter_root_ring_matches_laurent_route() {
        // evaluate sum_k q^{b k^2 + d k} as a Laurent polynomial, then ev_xi
        let spec = RootSpec::with_default_u(5, Group::So3).unwrap();
        let t = conductor(5);
        assert_eq!(t, 40);
        let xi = xi_pow(&spec, 1);
        for (b, d) in [(1i64, 0i64), (2, 1), (3, 4)] {
            let mut f = QLaurent::zero();
            for k in 0..5i64 {
                f = f.add(&QLaurent::q_pow(b * k * k + d * k));
            }
            assert_eq!(ev_xi(&f, &spec), gauss_brute(b, d, &xi, 5).unwrap());
        }
    }
}
