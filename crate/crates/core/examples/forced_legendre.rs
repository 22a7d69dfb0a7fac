//! Reciprocity pins `(p/ℓ)` once `p | m_Q | ℓ − 1` and `ord₂(ℓ − 1) =
//! ord₂(m_Q)`. Compare the predicted sign with the Legendre symbol at actual
//! primes in the class.
//!
//! Run with `cargo run --example forced_legendre`.

use rtsieve::ntheory::{forced_legendre, is_prime, legendre_symbol, two_adic_valuation};
use rtsieve::Result;

fn main() -> Result<()> {
    for m_q in [10u64, 12, 14, 18, 20, 30] {
        for p in [3u64, 5, 7] {
            let Some(sign) = forced_legendre(p, m_q)? else {
                continue;
            };
            let v = two_adic_valuation(m_q)?;
            let ells: Vec<u64> = (m_q + 1..20_000)
                .step_by(m_q as usize)
                .filter(|&l| is_prime(l) && two_adic_valuation(l - 1).unwrap() == v)
                .take(5)
                .collect();
            let seen: Vec<i8> = ells
                .iter()
                .map(|&l| legendre_symbol(p as i64, l))
                .collect::<Result<_>>()?;
            println!("m_Q = {m_q:<3} p = {p}: forced {sign}, at ℓ in {ells:?}: {seen:?}");
        }
    }
    Ok(())
}
