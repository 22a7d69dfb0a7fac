//! The congruence sieve at genus 4: every filtered decomposition, the
//! candidate values of `m_Q`, and the class of `ℓ` each surviving pair needs.
//!
//! Run with `cargo run --example congruence_sieve`.

use rtsieve::decomp::enumerate_decompositions;
use rtsieve::ntheory::Solution;
use rtsieve::sieve::mq_candidates;
use rtsieve::Result;

fn main() -> Result<()> {
    let decs = enumerate_decompositions(4, true)?;
    println!(
        "{} decompositions of 8 pass the exponent filters",
        decs.len()
    );
    for dec in &decs {
        for cand in mq_candidates(dec)? {
            let verdict = match &cand.solution {
                Solution::Sat { witness } => format!(
                    "ℓ ≡ {witness}, first such prime {}",
                    witness.first_prime_below(1_000_000).unwrap_or(0)
                ),
                Solution::Unsat { reason } => format!("unsatisfiable ({reason:?})"),
            };
            println!(
                "{:<24} e = {:<4} m_Q = {:<3} {verdict}",
                dec.label(),
                dec.e,
                cand.m_q
            );
        }
    }
    Ok(())
}
