//! Least odd quadratic nonresidues up to 10^6 next to the Burgess exponent.
//!
//! Run with `cargo run --release --example nonresidue_scan`.

use rtsieve::driver::qnr_scan;
use rtsieve::Result;

fn main() -> Result<()> {
    let scan = qnr_scan(5, 1_000_000)?;
    print!("{}", scan.to_text());
    // records: each ℓ whose nonresidue beats all smaller ℓ
    let mut best = 0;
    for e in &scan.entries {
        if e.n > best {
            best = e.n;
            println!("  n = {:<3} first at ℓ = {}", e.n, e.ell);
        }
    }
    Ok(())
}
