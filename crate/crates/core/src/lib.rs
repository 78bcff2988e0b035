//! Exact wallcrossing computations for enumerative invariants of framed
//! sheaf-type theories: charge lattice and walls, Hall-algebra relations,
//! invariants across chambers, generating functions, a Kontsevich–Soibelman
//! Lie algebra and Bell-polynomial utilities.

pub mod bell;
pub mod decomp;
pub mod error;
pub mod genfun;
pub mod hall;
pub mod invariants;
pub mod kslie;
pub mod lattice;
pub mod rational;
pub mod theory;
