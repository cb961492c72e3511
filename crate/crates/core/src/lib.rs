//! Bell violation versus one-way secret-key extraction for individual
//! eavesdropping attacks on entangled qubits.
//!
//! The crate builds the two-angle family of one-qubit attacks on half of
//! `|Φ+>`, and its symmetric two-qubit extension. For each attack it
//! computes:
//!
//! * the Pauli correlation matrix and the maximal CHSH value (local bound 1),
//! * Alice's, Bob's and Eve's mutual informations and the one-way key
//!   criterion `I(A:B) > min(I(A:E), I(B:E))`,
//! * the PPT test, Bell-diagonal form and rank of Alice and Bob's state.
//!
//! Closed forms are paired with independent numeric routes (simplex search
//! over measurement settings, brute-force scans) so they can be
//! cross-checked. The [`multiparty`] module evaluates Mermin–Klyshko and
//! WWZB functionals on N-qubit states and maps violations to a
//! distillability degree.

pub mod attack;
pub mod chsh;
pub mod entanglement;
pub mod error;
pub mod harness;
pub mod multiparty;
pub mod numeric;
pub mod optimize;
pub mod secrecy;

pub use attack::{AttackParams, AttackVariant};
pub use error::{Error, Result};
