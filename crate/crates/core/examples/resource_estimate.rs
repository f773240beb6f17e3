//! Static resource counts for a few random circuits, next to what a run consumes.

use inqc::circuit::{random_circuit, GeneratorConfig};
use inqc::protocol::{run_protocol, RunConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let generator = GeneratorConfig::default();
    println!("seed wires gates  T bobIn bobOut | epr nlb ab ba | used epr nlb");
    for seed in 0..10u64 {
        let c = random_circuit(&generator, &mut ChaCha8Rng::seed_from_u64(seed));
        let est = c.estimate_resources();
        let used = run_protocol(&c, &RunConfig::seeded(seed))
            .unwrap()
            .resources;
        println!(
            "{seed:>4} {:>5} {:>5} {:>2} {:>5} {:>6} | {:>3} {:>3} {:>2} {:>2} | {:>8} {:>3}",
            c.num_wires,
            c.gates.len(),
            c.t_count(),
            c.bob_input_wires().count(),
            c.bob_quantum_output_wires().count(),
            est.epr,
            est.nlb,
            est.classical_bits_ab,
            est.classical_bits_ba,
            used.epr,
            used.nlb
        );
    }
}
