//! Teleports a random qubit through an EPR pair on each of the four Bell outcomes.
//!
//! The receiver ends with `X^mx Z^mz |psi>`; the outcome bits are exactly a
//! one-time-pad key.

use std::f64::consts::PI;

use inqc::qsim::{BellOutcome, Gate, StateVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let theta: f64 = rng.gen::<f64>() * PI;
    let phi: f64 = rng.gen::<f64>() * 2.0 * PI;
    let a0 = Complex64::new((theta / 2.0).cos(), 0.0);
    let a1 = Complex64::from_polar((theta / 2.0).sin(), phi);
    let psi = StateVector::qubit(a0, a1).unwrap();
    println!("input  theta={theta:.4} phi={phi:.4}");

    for outcome in BellOutcome::all() {
        let mut state = StateVector::empty();
        let input = state.push_qubit(a0, a1).unwrap();
        let (sender, receiver) = state.make_epr();
        let (got, p) = state
            .bell_measure(input, sender, Some(outcome), &mut rng)
            .unwrap();
        let before = state.extract(&[receiver]).unwrap().fidelity(&psi).unwrap();
        if got.m_x {
            state.apply_gate(&Gate::X(receiver)).unwrap();
        }
        if got.m_z {
            state.apply_gate(&Gate::Z(receiver)).unwrap();
        }
        let after = state.extract(&[receiver]).unwrap().fidelity(&psi).unwrap();
        println!(
            "m_x={} m_z={}  p={p:.3}  fidelity before correction {before:.4}, after {after:.12}",
            got.m_x as u8, got.m_z as u8
        );
    }
}
