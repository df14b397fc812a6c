//! Exact computation of quantum `SU(2)`, `SO(3)`, and `Z/2` invariants of
//! closed 3-manifolds given by surgery on framed links with diagonal linking
//! matrix, together with the algebraic machinery the computation rests on:
//! quantum integer arithmetic, cyclotomic rings, Gauss sums, the cyclotomic
//! completion ideals controlling integrality, colored Jones values, and
//! linking pairings.
//!
//! All arithmetic is exact. Rational coefficients appear only where the
//! theory produces them; every integrality claim is certified by an explicit
//! membership test rather than floating-point proximity.

pub mod cyclo;
pub mod gausssum;
pub mod ideal_div;
pub mod jones;
pub mod linkpair;
pub mod qlaurent;
pub mod rep;
pub mod wrt;
