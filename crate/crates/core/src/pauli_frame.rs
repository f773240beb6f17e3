//! Distributed one-time-pad keys.
//!
//! Every wire `i` carries a pad `X^{x_i} Z^{z_i}` whose bits are split between
//! the parties: `x_i = x_i^A ⊕ x_i^B`, `z_i = z_i^A ⊕ z_i^B`. Each party only
//! ever updates its own [`PartyKeys`]; no rule reads the other party's shares.

use std::collections::BTreeMap;
use std::ops::BitXor;

use serde::Serialize;
use thiserror::Error;

use crate::qsim::{BellOutcome, Gate};
use crate::Party;

pub type WireId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FrameError {
    #[error("wire {0} has no key entry")]
    DeadWire(WireId),
    #[error("T is not a Clifford gate; use the T-gadget key update")]
    NotClifford,
}

/// One party's `(x, z)` share for one wire.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct KeyShare {
    pub x: bool,
    pub z: bool,
}

impl KeyShare {
    pub const ZERO: KeyShare = KeyShare { x: false, z: false };

    pub fn new(x: bool, z: bool) -> Self {
        Self { x, z }
    }
}

impl BitXor for KeyShare {
    type Output = KeyShare;

    fn bitxor(self, rhs: KeyShare) -> KeyShare {
        KeyShare::new(self.x ^ rhs.x, self.z ^ rhs.z)
    }
}

/// The key shares one party holds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartyKeys {
    party: Party,
    shares: BTreeMap<WireId, KeyShare>,
}

impl PartyKeys {
    /// All-zero shares for wires `0..num_wires`.
    pub fn new(party: Party, num_wires: usize) -> Self {
        Self {
            party,
            shares: (0..num_wires).map(|w| (w, KeyShare::ZERO)).collect(),
        }
    }

    pub fn party(&self) -> Party {
        self.party
    }

    pub fn wires(&self) -> impl Iterator<Item = WireId> + '_ {
        self.shares.keys().copied()
    }

    pub fn get(&self, wire: WireId) -> Result<KeyShare, FrameError> {
        self.shares
            .get(&wire)
            .copied()
            .ok_or(FrameError::DeadWire(wire))
    }

    fn entry(&mut self, wire: WireId) -> Result<&mut KeyShare, FrameError> {
        self.shares.get_mut(&wire).ok_or(FrameError::DeadWire(wire))
    }

    pub fn set(&mut self, wire: WireId, share: KeyShare) -> Result<(), FrameError> {
        *self.entry(wire)? = share;
        Ok(())
    }

    /// Pushes this party's shares through a Clifford gate.
    pub fn apply_clifford(&mut self, gate: &Gate) -> Result<(), FrameError> {
        match *gate {
            Gate::X(w) | Gate::Z(w) => {
                self.entry(w)?;
            }
            Gate::H(w) => {
                let k = self.entry(w)?;
                std::mem::swap(&mut k.x, &mut k.z);
            }
            Gate::P(w) => {
                let k = self.entry(w)?;
                k.z ^= k.x;
            }
            Gate::Cnot { control, target } => {
                let c = self.get(control)?;
                let t = self.get(target)?;
                self.set(control, KeyShare::new(c.x, c.z ^ t.z))?;
                self.set(target, KeyShare::new(t.x ^ c.x, t.z))?;
            }
            Gate::T(_) => return Err(FrameError::NotClifford),
        }
        Ok(())
    }

    /// The sender of a teleport folds its Bell outcome into its own share
    /// instead of sending the correction.
    pub fn apply_teleport(&mut self, wire: WireId, outcome: BellOutcome) -> Result<(), FrameError> {
        let k = self.entry(wire)?;
        k.x ^= outcome.m_x;
        k.z ^= outcome.m_z;
        Ok(())
    }

    /// This party's half of the T-gadget key update. `local_bit` is the
    /// party's own gadget measurement (`c` for Alice, `d` for Bob) and
    /// `nlb_output` its nonlocal-box output. Right-hand sides use the
    /// pre-update share.
    pub fn apply_t(
        &mut self,
        wire: WireId,
        local_bit: bool,
        nlb_output: bool,
    ) -> Result<(), FrameError> {
        let party = self.party;
        let k = self.entry(wire)?;
        let KeyShare { x, z } = *k;
        *k = match party {
            Party::Alice => KeyShare::new(x ^ local_bit, nlb_output ^ x ^ z ^ (x & local_bit)),
            Party::Bob => KeyShare::new(x, nlb_output ^ x ^ z ^ local_bit),
        };
        Ok(())
    }
}

/// Both parties' shares, as seen by an omniscient observer (tests, reports).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KeyTable {
    alice: PartyKeys,
    bob: PartyKeys,
}

/// One row of the serialized key table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct KeyRow {
    pub wire: WireId,
    #[serde(rename = "xA")]
    pub x_a: u8,
    #[serde(rename = "zA")]
    pub z_a: u8,
    #[serde(rename = "xB")]
    pub x_b: u8,
    #[serde(rename = "zB")]
    pub z_b: u8,
}

impl KeyTable {
    pub fn new(num_wires: usize) -> Self {
        Self {
            alice: PartyKeys::new(Party::Alice, num_wires),
            bob: PartyKeys::new(Party::Bob, num_wires),
        }
    }

    /// Table with explicit shares for wires `0..n`.
    pub fn from_shares(alice: &[KeyShare], bob: &[KeyShare]) -> Self {
        assert_eq!(alice.len(), bob.len(), "both parties need a share per wire");
        let mut t = Self::new(alice.len());
        for (w, (a, b)) in alice.iter().zip(bob).enumerate() {
            t.alice.shares.insert(w, *a);
            t.bob.shares.insert(w, *b);
        }
        t
    }

    pub fn party(&self, party: Party) -> &PartyKeys {
        match party {
            Party::Alice => &self.alice,
            Party::Bob => &self.bob,
        }
    }

    pub fn party_mut(&mut self, party: Party) -> &mut PartyKeys {
        match party {
            Party::Alice => &mut self.alice,
            Party::Bob => &mut self.bob,
        }
    }

    pub fn share(&self, party: Party, wire: WireId) -> Result<KeyShare, FrameError> {
        self.party(party).get(wire)
    }

    /// Both parties update independently; the gate is applied to nothing quantum.
    pub fn clifford_update(&mut self, gate: &Gate) -> Result<(), FrameError> {
        // Validate against both tables first so a failure leaves neither half-updated.
        let mut alice = self.alice.clone();
        let mut bob = self.bob.clone();
        alice.apply_clifford(gate)?;
        bob.apply_clifford(gate)?;
        self.alice = alice;
        self.bob = bob;
        Ok(())
    }

    pub fn teleport_update(
        &mut self,
        party: Party,
        wire: WireId,
        outcome: BellOutcome,
    ) -> Result<(), FrameError> {
        self.party_mut(party).apply_teleport(wire, outcome)
    }

    /// Full T-gadget update from the gadget outcomes `c` (Alice), `d` (Bob)
    /// and the nonlocal-box outputs.
    pub fn apply_t_update(
        &mut self,
        wire: WireId,
        c: bool,
        d: bool,
        nlb_a: bool,
        nlb_b: bool,
    ) -> Result<(), FrameError> {
        self.bob.get(wire)?;
        self.alice.apply_t(wire, c, nlb_a)?;
        self.bob.apply_t(wire, d, nlb_b)
    }

    /// The global pad `(x^A ⊕ x^B, z^A ⊕ z^B)` of a wire.
    pub fn decrypt_key(&self, wire: WireId) -> Result<KeyShare, FrameError> {
        Ok(self.alice.get(wire)? ^ self.bob.get(wire)?)
    }

    pub fn rows(&self) -> Vec<KeyRow> {
        self.alice
            .shares
            .iter()
            .filter_map(|(&wire, a)| {
                let b = self.bob.shares.get(&wire)?;
                Some(KeyRow {
                    wire,
                    x_a: a.x as u8,
                    z_a: a.z as u8,
                    x_b: b.x as u8,
                    z_b: b.z as u8,
                })
            })
            .collect()
    }
}
