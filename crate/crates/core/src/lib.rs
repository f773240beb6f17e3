//! Two-party instantaneous nonlocal quantum computation, simulated end to end.
//!
//! Alice and Bob evaluate a circuit on one-time-pad encrypted data. Each party
//! keeps its own share of the Pauli keys, Clifford gates are applied directly to
//! the encrypted qubits, T gates go through an entanglement gadget whose one
//! nonlinear key term is absorbed by a Popescu-Rohrlich box, and the only
//! classical communication is one simultaneous exchange of key shares at the
//! end. Every run is checked against a direct statevector evaluation.
//!
//! Modules, bottom up:
//!
//! - [`qsim`]: dense statevector simulator for {X, Z, P, H, CNOT, T}.
//! - [`pauli_frame`]: per-party key shares and their update rules.
//! - [`resources`]: EPR slots, nonlocal boxes and the communication ledger.
//! - [`circuit`]: circuit IR, text format and resource estimates.
//! - [`protocol`]: the two-party run and its verification oracle.
//! - [`cli`]: the `inqc` command line.

pub mod circuit;
pub mod cli;
pub mod pauli_frame;
pub mod protocol;
pub mod qsim;
pub mod resources;

use std::fmt;

use serde::{Deserialize, Serialize};

/// One of the two cooperating parties.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Party {
    #[serde(rename = "A")]
    Alice,
    #[serde(rename = "B")]
    Bob,
}

impl Party {
    pub fn other(self) -> Party {
        match self {
            Party::Alice => Party::Bob,
            Party::Bob => Party::Alice,
        }
    }

    pub fn letter(self) -> &'static str {
        match self {
            Party::Alice => "A",
            Party::Bob => "B",
        }
    }
}

impl fmt::Display for Party {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}
