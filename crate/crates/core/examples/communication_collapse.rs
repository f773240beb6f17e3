//! With a single Alice-owned output, the final round is Bob's key bits for that wire only.

use inqc::circuit::{random_single_output_circuit, GeneratorConfig, OutputKind};
use inqc::protocol::{run_single_output_variant, trial_seed, RunConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let generator = GeneratorConfig::default();
    for kind in [OutputKind::Quantum, OutputKind::Classical] {
        let mut min_fid = 1.0f64;
        let mut bits = (0, 0);
        for trial in 0..20 {
            let seed = trial_seed(99, trial);
            let circuit = random_single_output_circuit(
                &generator,
                kind,
                &mut ChaCha8Rng::seed_from_u64(seed),
            );
            let report = run_single_output_variant(&circuit, &RunConfig::seeded(seed)).unwrap();
            min_fid = min_fid.min(report.oracle_fidelity_min);
            bits = (report.audit.bits_ab, report.audit.bits_ba);
        }
        println!(
            "{kind:<9} output: A->B {} bits, B->A {} bits, min fidelity over 20 circuits {min_fid:.12}",
            bits.0, bits.1
        );
    }
}
