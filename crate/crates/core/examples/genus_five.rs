//! Close genus 5: every surviving `m_Q` is removed by a trace obstruction.
//!
//! Run with `cargo run --release --example genus_five`.

use rtsieve::driver::{analyze, Config};
use rtsieve::weilgate::describe_shapes;
use rtsieve::Result;

fn main() -> Result<()> {
    let report = analyze(5, &Config::default())?;
    report.verify()?;
    println!(
        "{} survivors, verdict {}",
        report.survivors.len(),
        report.verdict
    );
    for c in &report.certificates {
        let route = c.route.as_ref().expect("every surviving m_Q has a route");
        let first = &c.per_prime[0];
        println!(
            "m_Q = {:<3} {route}: {} splits as {} (checked at {} prime(s))",
            c.m_q,
            first.binomial,
            describe_shapes(&first.factors),
            c.tested_primes.len()
        );
    }
    Ok(())
}
