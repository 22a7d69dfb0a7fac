//! With `e | 24`, only `m_Q = 12` can occur, and `T^12 + p^6` has factors of
//! degree 4 and 8 only, so no odd genus survives.
//!
//! Run with `cargo run --release --example restricted_exponent`.

use rtsieve::driver::{analyze, Config};
use rtsieve::Result;

fn main() -> Result<()> {
    let cfg = Config {
        restrict_e: Some(24),
        ..Config::default()
    };
    for g in (1..=9).step_by(2) {
        let r = analyze(g, &cfg)?;
        let mqs: Vec<u64> = r.certificates.iter().map(|c| c.m_q).collect();
        println!(
            "g = {g}: {} survivors, m_Q {mqs:?}, verdict {}",
            r.survivors.len(),
            r.verdict
        );
    }
    Ok(())
}
