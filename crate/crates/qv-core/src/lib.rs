//! Quandle cocycle state-sum invariants of links presented as braid closures.
//!
//! The pipeline: a finite Alexander quandle on `S = F_p[w]/(h(w))` colors the
//! arcs (and regions) of a braid-closure diagram; a 2-cocycle or shadow
//! 3-cocycle turns each coloring into a group-ring monomial `t^E`, `E in S`;
//! summing over colorings gives the invariant. Substituting `t = e^{a hbar}`,
//! `w = e^{b hbar}` on integer exponent lifts expands the invariant into an
//! hbar-series whose coefficient residues mod p are Vassiliev invariants.

pub mod arith;
pub mod cochain;
pub mod coloring;
pub mod diagram;
pub mod expansion;
pub mod invariant;
pub mod quandle;
pub mod rmatrix;
