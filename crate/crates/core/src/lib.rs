//! Circular planar electrical networks and their circular minors.
//!
//! * [`circ`]: circular pairs, their statistics and the diametric set.
//! * [`linalg`]: exact determinants and the determinant identities.
//! * [`network`]: response matrices, connections and local moves.
//! * [`positroid`]: the electrical positroid axioms and extensions.
//! * [`rewrite`]: subtraction-free expressions of any minor in diametric ones.
//! * [`mutation`]: the cluster engines on non-symmetric and symmetric minors.
//! * [`laurent`]: Laurent polynomials for the exchange sequences.
//! * [`wsep`]: weak separation, maximal collections and positivity tests.
//! * [`io`]: the JSON encodings.

pub mod circ;
pub mod io;
pub mod laurent;
pub mod linalg;
pub mod network;
pub mod positroid;
pub mod mutation;
pub mod rewrite;
pub mod sample;
pub mod wsep;

pub use circ::{CircError, CircularPair, Label, NonSymPair, PairClass, PairSet, Phi, Triple};
pub use linalg::{ExactMatrix, GroundSet, LinalgError, Rational};
