//! Applies Clifford gates to one-time-padded qubits and decrypts with the
//! tracked key shares.

use inqc::pauli_frame::{KeyShare, KeyTable};
use inqc::qsim::{Gate, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let gates = [
        Gate::H(0),
        Gate::P(1),
        Gate::Cnot {
            control: 0,
            target: 1,
        },
        Gate::H(1),
        Gate::Z(0),
        Gate::Cnot {
            control: 1,
            target: 0,
        },
    ];

    let alice: Vec<KeyShare> = (0..2)
        .map(|_| KeyShare::new(rng.gen(), rng.gen()))
        .collect();
    let bob: Vec<KeyShare> = (0..2)
        .map(|_| KeyShare::new(rng.gen(), rng.gen()))
        .collect();
    let mut keys = KeyTable::from_shares(&alice, &bob);

    let mut plain = StateVector::zeros(2);
    plain.apply_gate(&Gate::H(1)).unwrap();
    let mut cipher = plain.clone();
    for w in 0..2 {
        let k = keys.decrypt_key(w).unwrap();
        if k.z {
            cipher.apply_gate(&Gate::Z(w)).unwrap();
        }
        if k.x {
            cipher.apply_gate(&Gate::X(w)).unwrap();
        }
    }
    println!("start     {}", serde_json::to_string(&keys.rows()).unwrap());

    for g in &gates {
        plain.apply_gate(g).unwrap();
        cipher.apply_gate(g).unwrap();
        keys.clifford_update(g).unwrap();
        println!(
            "{:<10}{}",
            g.to_string(),
            serde_json::to_string(&keys.rows()).unwrap()
        );
    }

    for w in 0..2 {
        let k = keys.decrypt_key(w).unwrap();
        if k.x {
            cipher.apply_gate(&Gate::X(w)).unwrap();
        }
        if k.z {
            cipher.apply_gate(&Gate::Z(w)).unwrap();
        }
    }
    println!(
        "fidelity after decryption: {:.12}",
        cipher.fidelity(&plain).unwrap()
    );
}
