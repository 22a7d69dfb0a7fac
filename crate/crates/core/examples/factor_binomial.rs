//! Factor a few trace binomials over ℚ and count real roots of each factor.
//!
//! Run with `cargo run --example factor_binomial`.

use rtsieve::intpoly::{
    binomial, factor_rational, irreducible_binomial_criterion, real_root_count,
};
use rtsieve::Result;

fn main() -> Result<()> {
    // T^N − c
    for (n, c) in [
        (14u64, -823_543i64),
        (12, -729),
        (8, -81),
        (10, 3125),
        (6, 343),
    ] {
        let f = binomial(n as usize, c)?;
        let fac = factor_rational(&f)?;
        println!("{f}");
        println!(
            "  criterion says irreducible: {}",
            irreducible_binomial_criterion(n, &c.into())?
        );
        for (h, _) in &fac.factors {
            println!("  {h:<60} real roots: {}", real_root_count(h)?);
        }
    }
    Ok(())
}
