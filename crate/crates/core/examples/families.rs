//! Gate counts for the built-in circuit families under every method.
//!
//! cargo run --release -p gms-core --example families

use gms_core::generators::{
    bernstein_vazirani, cnot_ladder, commuting_cnot_layer, cz_complete, fanout_blocks, ghz_ladder, random_circuit,
};
use gms_core::pipeline::{compile, CompileOptions, Method};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let circuits = [
        bernstein_vazirani(16, &[true; 15]),
        ghz_ladder(20),
        cz_complete(8),
        commuting_cnot_layer(8, 12, &mut rng),
        cnot_ladder(6, 3, &mut rng),
        fanout_blocks(5, 4),
        random_circuit(6, 30, &mut rng),
    ];
    println!("{:<16} {:<7} {:>4} {:>5} {:>9}", "circuit", "method", "GMS", "SQG", "time_ms");
    for c in &circuits {
        for m in Method::ALL {
            match compile(c, &CompileOptions::with_method(m)) {
                Ok(o) => println!(
                    "{:<16} {:<7} {:>4} {:>5} {:>9.3}",
                    c.name, m, o.stats.entangling, o.stats.sqg, o.stats.time_ms
                ),
                Err(e) => println!("{:<16} {:<7} error: {e}", c.name, m),
            }
        }
    }
}
