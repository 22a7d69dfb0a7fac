use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{invalid, Result};
use crate::ntheory::prime_divisors;

/// Irreducibility of `T^N − a` over ℚ by the classical binomial criterion:
/// irreducible iff `a` is not a `q`-th power for any prime `q | N`, and, when
/// `4 | N`, `a ∉ −4ℚ⁴`.
///
/// For integer `a` both conditions reduce to exact integer root extraction.
pub fn irreducible_binomial_criterion(n: u64, a: &BigInt) -> Result<bool> {
    if n == 0 {
        return Err(invalid("binomial exponent must be positive"));
    }
    if a.is_zero() {
        return Err(invalid("T^N − 0 is outside the binomial family"));
    }
    for q in prime_divisors(n) {
        if is_perfect_power(a, q as u32) {
            return Ok(false);
        }
    }
    if n.is_multiple_of(4) && a.is_negative() {
        let m = -a;
        if (&m % 4u32).is_zero() && is_perfect_power(&(m / 4u32), 4) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Whether `a = b^k` for some integer `b`.
fn is_perfect_power(a: &BigInt, k: u32) -> bool {
    if a.is_negative() {
        return k % 2 == 1 && is_perfect_power(&-a, k);
    }
    let r = a.nth_root(k);
    &r.pow(k) == a
}
