//! Run the verification suites from code.
//!
//! `cargo run --release --example verify -- quantization`

use kaehler_sl2c::verify::{run_suite, Suite, VerifyConfig};

fn main() {
    let suite: Suite = std::env::args().nth(1).as_deref().unwrap_or("all").parse().unwrap();
    let results = run_suite(suite, &VerifyConfig { seed: 7, fast: true });
    for r in &results {
        println!("{r}");
    }
    std::process::exit(if results.iter().all(|r| r.passed) { 0 } else { 1 });
}
