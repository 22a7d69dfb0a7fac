//! Genus 7 leaves four values of `m_Q` open. For each, show the degree-14
//! assembly that blocks the obstruction, or why no route applies.
//!
//! Run with `cargo run --release --example genus_seven`.

use rtsieve::driver::{analyze, mq_values, Config};
use rtsieve::weilgate::describe_combination;
use rtsieve::Result;

fn main() -> Result<()> {
    let cfg = Config::default();
    println!("before the obstruction: {:?}", mq_values(7, false, &cfg)?);
    let report = analyze(7, &cfg)?;
    println!("after:                  {:?}", report.open_mq());
    for c in report.certificates.iter().filter(|c| !c.eliminated) {
        match c.per_prime.iter().find(|e| e.combination_exists) {
            Some(ev) => println!(
                "m_Q = {:<3} {} admits 14 = {}",
                c.m_q,
                ev.binomial,
                describe_combination(ev)
            ),
            None => println!("m_Q = {:<3} no route evaluated", c.m_q),
        }
        for n in &c.notes {
            println!("           {n}");
        }
    }
    Ok(())
}
