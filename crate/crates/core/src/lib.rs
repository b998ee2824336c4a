//! Ptolemy equations for one-cusped hyperbolic 3-manifolds.
//!
//! The pipeline runs from a labelled ideal triangulation to its
//! Neumann–Zagier data, an integer sign vector, the Ptolemy equation of
//! every tetrahedron, and an eliminant in `L = ℓ^{1/2}` and `M = m^{1/2}`.
//! Dehn fillings along layered solid tori are assembled directly from a
//! walk in the Farey graph.

pub mod cli_io;
pub mod eliminate;
pub mod farey_dehn;
pub mod numeric_verify;
pub mod nz_core;
pub mod ptolemy_gen;
pub mod triangulation;
