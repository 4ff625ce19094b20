//! Finite Heisenberg groups over finite commutative rings, their Schrödinger
//! representations over cyclotomic fields, and exact verifiers for the
//! Stone–von Neumann uniqueness statement and the defect-filtration calculus.

pub mod cyclo;
pub mod ring;
pub mod caps;
pub mod character;
pub mod defect;
pub mod heisenberg;
pub mod schrodinger;
pub mod homspace;
pub mod filtration;
