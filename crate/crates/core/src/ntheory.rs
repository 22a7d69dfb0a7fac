//! Elementary number theory over machine integers.
//!
//! Everything here is a pure function. Residue-class reasoning stands in
//! for "all sufficiently large primes ℓ": a [`ResidueClass`] with
//! `gcd(residue, modulus) = 1` contains infinitely many primes by
//! Dirichlet's theorem, so a class is all the engine ever needs to name.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::intpoly::IntPoly;

/// Largest modulus `solve_congruence_system` will scan exhaustively.
pub const MAX_SCAN_MODULUS: u64 = 50_000_000;

/// Default upper limit for [`PrimeSieve`].
pub const DEFAULT_SIEVE_LIMIT: u64 = 10_000_000;

/// A sign `ε ∈ {+1, −1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i8 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn from_value(v: i8) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller–Rabin, exact for every `u64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    const SMALL: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &SMALL {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for &a in &SMALL {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Sieve of Eratosthenes over `[0, limit]`.
#[derive(Debug, Clone)]
pub struct PrimeSieve {
    composite: Vec<bool>,
}

impl PrimeSieve {
    pub fn new(limit: u64) -> Result<Self> {
        if limit > DEFAULT_SIEVE_LIMIT {
            return Err(Error::Capacity {
                what: "prime sieve limit",
                got: limit,
                limit: DEFAULT_SIEVE_LIMIT,
            });
        }
        let n = limit as usize;
        let mut composite = vec![false; n + 1];
        for slot in composite.iter_mut().take(2.min(n + 1)) {
            *slot = true;
        }
        let mut i = 2;
        while i * i <= n {
            if !composite[i] {
                let mut j = i * i;
                while j <= n {
                    composite[j] = true;
                    j += i;
                }
            }
            i += 1;
        }
        Ok(PrimeSieve { composite })
    }

    pub fn limit(&self) -> u64 {
        (self.composite.len() - 1) as u64
    }

    pub fn is_prime(&self, n: u64) -> bool {
        (n as usize) < self.composite.len() && !self.composite[n as usize]
    }

    pub fn primes_in(&self, lo: u64, hi: u64) -> impl Iterator<Item = u64> + '_ {
        let hi = hi.min(self.limit());
        (lo..=hi).filter(move |&n| self.is_prime(n))
    }
}

/// Odd primes `3 ≤ p ≤ bound`, ascending.
pub fn odd_primes_up_to(bound: u64) -> Vec<u64> {
    (3..=bound).step_by(2).filter(|&n| is_prime(n)).collect()
}

/// Prime factorization by trial division, ascending primes.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut k = 0;
            while n.is_multiple_of(p) {
                n /= p;
                k += 1;
            }
            out.push((p, k));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn prime_divisors(n: u64) -> Vec<u64> {
    factorize(n).into_iter().map(|(p, _)| p).collect()
}

/// All positive divisors of `n`, ascending. `divisors(0)` is empty.
pub fn divisors(n: u64) -> Vec<u64> {
    if n == 0 {
        return Vec::new();
    }
    let mut out = vec![1u64];
    for (p, k) in factorize(n) {
        let len = out.len();
        let mut pk = 1;
        for _ in 0..k {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// Euler's totient, from the factorization of `n`.
pub fn totient(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(invalid("totient(0) is undefined"));
    }
    Ok(factorize(n)
        .into_iter()
        .map(|(p, k)| (p - 1) * p.pow(k - 1))
        .product())
}

/// `ord₂(n)`, the exponent of 2 in `n`.
pub fn two_adic_valuation(n: u64) -> Result<u32> {
    if n == 0 {
        return Err(invalid("2-adic valuation of 0 is infinite"));
    }
    Ok(n.trailing_zeros())
}

/// The `d`-th cyclotomic polynomial, built by exact division of `T^d − 1`
/// by `Φ_k` for every proper divisor `k` of `d`.
pub fn cyclotomic_poly(d: u64) -> Result<IntPoly> {
    if d == 0 {
        return Err(invalid("cyclotomic polynomial index must be positive"));
    }
    let mut table: BTreeMap<u64, IntPoly> = BTreeMap::new();
    for k in divisors(d) {
        let mut phi = IntPoly::binomial(k as usize, BigInt::from(1))?;
        for j in divisors(k) {
            if j < k {
                phi = phi.exact_div(&table[&j])?;
            }
        }
        table.insert(k, phi);
    }
    Ok(table.remove(&d).expect("d divides itself"))
}

/// Legendre symbol `(a/ℓ)` by Euler's criterion.
pub fn legendre_symbol(a: i64, ell: u64) -> Result<i8> {
    if ell == 2 || !is_prime(ell) {
        return Err(invalid(format!("{ell} is not an odd prime")));
    }
    Ok(legendre_unchecked(a, ell))
}

/// Euler's criterion without validating that `ell` is an odd prime.
pub(crate) fn legendre_unchecked(a: i64, ell: u64) -> i8 {
    let r = a.rem_euclid(ell as i64) as u64;
    if r == 0 {
        return 0;
    }
    if pow_mod(r, (ell - 1) / 2, ell) == 1 {
        1
    } else {
        -1
    }
}

/// The value of `(p/ℓ)` forced for every large prime `ℓ` with `m_Q | ℓ − 1`
/// and `ord₂(ℓ − 1) = ord₂(m_Q)`, or `None` when `p ∤ m_Q`.
///
/// With `p | m_Q` we have `ℓ ≡ 1 mod p`, hence `(ℓ/p) = +1`, and the parity of
/// `(ℓ − 1)/2` is fixed by `ord₂(m_Q)`; quadratic reciprocity finishes it.
pub fn forced_legendre(p: u64, m_q: u64) -> Result<Option<Sign>> {
    if p == 2 {
        return Err(invalid("the supplementary law for (2/ℓ) is not modeled"));
    }
    if !is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    if m_q == 0 || m_q % 2 == 1 {
        return Err(invalid(format!(
            "m_Q = {m_q} must be a positive even integer"
        )));
    }
    if !m_q.is_multiple_of(p) {
        return Ok(None);
    }
    let half_ell_minus_one_odd = m_q.trailing_zeros() == 1;
    let half_p_minus_one_odd = (p - 1) / 2 % 2 == 1;
    // (ℓ/p) = +1, so (p/ℓ) = (−1)^{((p−1)/2)((ℓ−1)/2)}
    Ok(Some(if half_ell_minus_one_odd && half_p_minus_one_odd {
        Sign::Minus
    } else {
        Sign::Plus
    }))
}

/// Least odd positive integer that is a quadratic nonresidue mod `ell`.
pub fn least_odd_qnr(ell: u64) -> Result<u64> {
    if ell < 5 || !is_prime(ell) {
        return Err(invalid(format!(
            "least odd nonresidue needs a prime ℓ ≥ 5, got {ell}"
        )));
    }
    Ok(least_odd_qnr_unchecked(ell))
}

pub(crate) fn least_odd_qnr_unchecked(ell: u64) -> u64 {
    let mut n = 3;
    loop {
        if legendre_unchecked(n as i64, ell) == -1 {
            debug_assert!(is_prime(n));
            return n;
        }
        n += 2;
    }
}

/// The class `residue mod modulus`, with `residue` a unit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ResidueClass {
    pub residue: u64,
    pub modulus: u64,
}

impl ResidueClass {
    pub fn new(residue: u64, modulus: u64) -> Result<Self> {
        if modulus == 0 {
            return Err(invalid("residue class modulus must be positive"));
        }
        if residue >= modulus {
            return Err(invalid(format!(
                "residue {residue} not reduced mod {modulus}"
            )));
        }
        if residue.gcd(&modulus) != 1 {
            return Err(invalid(format!(
                "class {residue} mod {modulus} contains at most one prime"
            )));
        }
        Ok(ResidueClass { residue, modulus })
    }

    pub fn contains(&self, n: u64) -> bool {
        n % self.modulus == self.residue
    }

    /// Smallest prime in the class below `bound`, if any.
    pub fn first_prime_below(&self, bound: u64) -> Option<u64> {
        let mut n = self.residue;
        while n < bound {
            if is_prime(n) {
                return Some(n);
            }
            n += self.modulus;
        }
        None
    }
}

impl std::fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} mod {}", self.residue, self.modulus)
    }
}

/// Conditions on a prime `ℓ`: `ℓ ≡ 1 mod d` for each required `d`,
/// `ℓ ≢ 1 mod d` for each forbidden `d`, and optionally `ord₂(ℓ − 1) = a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CongruenceSystem {
    pub required: BTreeSet<u64>,
    pub forbidden: BTreeSet<u64>,
    pub two_adic_valuation: Option<u32>,
}

/// Why a system has no admissible class.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum UnsatReason {
    /// `ℓ ≡ 1 mod d` holds for every odd prime, so forbidding it is absurd.
    TriviallyForbidden { d: u64 },
    /// No unit residue modulo `modulus` satisfies every condition.
    Exhausted { modulus: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Solution {
    Sat { witness: ResidueClass },
    Unsat { reason: UnsatReason },
}

impl Solution {
    pub fn witness(&self) -> Option<ResidueClass> {
        match self {
            Solution::Sat { witness } => Some(*witness),
            Solution::Unsat { .. } => None,
        }
    }

    pub fn is_sat(&self) -> bool {
        matches!(self, Solution::Sat { .. })
    }
}

impl CongruenceSystem {
    pub fn new(
        required: impl IntoIterator<Item = u64>,
        forbidden: impl IntoIterator<Item = u64>,
        two_adic_valuation: Option<u32>,
    ) -> Result<Self> {
        let required: BTreeSet<u64> = required.into_iter().collect();
        let forbidden: BTreeSet<u64> = forbidden.into_iter().collect();
        if required.contains(&0) || forbidden.contains(&0) {
            return Err(invalid("congruence moduli must be positive"));
        }
        if let Some(a) = two_adic_valuation {
            if a > 40 {
                return Err(Error::Capacity {
                    what: "2-adic valuation",
                    got: a as u64,
                    limit: 40,
                });
            }
        }
        Ok(CongruenceSystem {
            required,
            forbidden,
            two_adic_valuation,
        })
    }

    pub fn empty() -> Self {
        CongruenceSystem {
            required: BTreeSet::new(),
            forbidden: BTreeSet::new(),
            two_adic_valuation: None,
        }
    }

    /// The smallest forbidden `d ∈ {1, 2}`, which makes the system unsatisfiable
    /// for odd primes before any scan.
    pub fn trivial_contradiction(&self) -> Option<u64> {
        [1, 2].into_iter().find(|d| self.forbidden.contains(d))
    }

    /// `lcm` of every modulus mentioned, including `2^{a+1}`.
    pub fn modulus(&self) -> Result<u64> {
        let mut m: u64 = 1;
        let pow2 = self.two_adic_valuation.map(|a| 1u64 << (a + 1));
        for &d in self
            .required
            .iter()
            .chain(self.forbidden.iter())
            .chain(pow2.iter())
        {
            m = m.lcm(&d);
            if m > MAX_SCAN_MODULUS {
                return Err(Error::Capacity {
                    what: "congruence modulus",
                    got: m,
                    limit: MAX_SCAN_MODULUS,
                });
            }
        }
        Ok(m)
    }

    /// Whether `r` (taken as a value of `ℓ`) meets every condition.
    pub fn admits(&self, r: u64) -> bool {
        let rm1 = r.wrapping_sub(1);
        if r == 0 {
            // ℓ − 1 ≡ −1: only the trivial modulus 1 divides it
            return self.required.iter().all(|&d| d == 1)
                && self.forbidden.iter().all(|&d| d != 1)
                && self.two_adic_valuation.is_none();
        }
        self.required.iter().all(|&d| rm1.is_multiple_of(d))
            && self.forbidden.iter().all(|&d| !rm1.is_multiple_of(d))
            && self.two_adic_valuation.is_none_or(|a| {
                let step = 1u64 << a;
                rm1 % (step << 1) == step
            })
    }
}

/// Decide a [`CongruenceSystem`] by scanning every unit modulo its modulus.
/// The returned witness is the least qualifying residue.
pub fn solve_congruence_system(sys: &CongruenceSystem) -> Result<Solution> {
    if let Some(d) = sys.trivial_contradiction() {
        return Ok(Solution::Unsat {
            reason: UnsatReason::TriviallyForbidden { d },
        });
    }
    let m = sys.modulus()?;
    for r in 0..m {
        if r.gcd(&m) == 1 && sys.admits(r) {
            return Ok(Solution::Sat {
                witness: ResidueClass {
                    residue: r,
                    modulus: m,
                },
            });
        }
    }
    Ok(Solution::Unsat {
        reason: UnsatReason::Exhausted { modulus: m },
    })
}
