//! Plays the CHSH game with a nonlocal box and with the best classical strategy.

use inqc::resources::NlbInstance;
use inqc::Party;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let rounds = 100_000;
    let mut box_wins = 0;
    let mut classical_wins = 0;
    let mut alice_ones = [0usize; 2];
    let mut alice_counts = [0usize; 2];

    for i in 0..rounds {
        let x: bool = rng.gen();
        let y: bool = rng.gen();
        let mut nlb = NlbInstance::new(i, 0);
        let a = nlb.invoke(Party::Alice, x, &mut rng).unwrap();
        let b = nlb.invoke(Party::Bob, y, &mut rng).unwrap();
        box_wins += (a ^ b == (x & y)) as usize;
        // Both answer 0: wins unless x = y = 1.
        classical_wins += !(x & y) as usize;
        alice_ones[y as usize] += a as usize;
        alice_counts[y as usize] += 1;
    }

    println!(
        "CHSH wins with box:       {:.4}",
        box_wins as f64 / rounds as f64
    );
    println!(
        "CHSH wins classically:    {:.4}",
        classical_wins as f64 / rounds as f64
    );
    println!("quantum (Tsirelson) bound {:.4}", 0.5 + 0.5 / 2f64.sqrt());
    for y in 0..2 {
        println!(
            "P(a=1 | Bob input {y}) = {:.4}",
            alice_ones[y] as f64 / alice_counts[y] as f64
        );
    }
}
