//! Runs the T gadget on an encrypted |+> for every split of the X key and
//! shows the updated key shares.

use inqc::pauli_frame::{KeyShare, KeyTable};
use inqc::protocol::{run_t_gadget, GadgetSchedule, Outcomes};
use inqc::qsim::{Gate, StateVector};
use inqc::resources::NlbInstance;
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

fn main() {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut expected = StateVector::qubit(h, h).unwrap();
    expected.apply_gate(&Gate::T(0)).unwrap();

    println!("xA xB | c d a b | key after (x, z) | fidelity");
    for (i, (xa, xb)) in [(false, false), (false, true), (true, false), (true, true)]
        .into_iter()
        .enumerate()
    {
        let mut state = StateVector::empty();
        let wire = state.push_qubit(h, h).unwrap();
        if xa ^ xb {
            state.apply_gate(&Gate::X(wire)).unwrap();
        }
        let halves = state.make_epr();
        let mut outcomes = Outcomes::new(i as u64, []);
        let mut nlb = NlbInstance::new(0, 0);
        let g = run_t_gadget(
            &mut state,
            wire,
            halves,
            xa,
            xb,
            &mut nlb,
            &mut outcomes,
            GadgetSchedule::AliceFirst,
        )
        .unwrap();

        let mut keys =
            KeyTable::from_shares(&[KeyShare::new(xa, false)], &[KeyShare::new(xb, false)]);
        keys.apply_t_update(0, g.c, g.d, g.nlb_a, g.nlb_b).unwrap();
        let key = keys.decrypt_key(0).unwrap();
        if key.x {
            state.apply_gate(&Gate::X(g.output_qubit)).unwrap();
        }
        if key.z {
            state.apply_gate(&Gate::Z(g.output_qubit)).unwrap();
        }
        let f = state
            .extract(&[g.output_qubit])
            .unwrap()
            .fidelity(&expected)
            .unwrap();
        println!(
            " {}  {} | {} {} {} {} | ({}, {})           | {f:.12}",
            xa as u8,
            xb as u8,
            g.c as u8,
            g.d as u8,
            g.nlb_a as u8,
            g.nlb_b as u8,
            key.x as u8,
            key.z as u8
        );
    }
}
