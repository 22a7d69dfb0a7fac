//! Independent oracles shared by the integration tests. Nothing here calls
//! the routine it is used to check.

#![allow(dead_code)]

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;

use rtsieve::decomp::enumerate_decompositions;
use rtsieve::intpoly::{
    binomial, cross_check_irreducible, factor_rational, irreducible_binomial_criterion,
};
use rtsieve::ntheory::Solution;
use rtsieve::sieve::mq_candidates;
use rtsieve::weilgate::FactorShape;

pub fn naive_is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

pub fn naive_gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        naive_gcd(b, a % b)
    }
}

pub fn naive_totient(n: u64) -> u64 {
    (1..=n).filter(|&k| naive_gcd(k, n) == 1).count() as u64
}

fn slow_pow_mod(b: u64, mut e: u64, m: u64) -> u64 {
    let m = m as u128;
    let (mut acc, mut b) = (1u128, b as u128 % m);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol by Euler's criterion.
pub fn euler_legendre(a: u64, ell: u64) -> i8 {
    match slow_pow_mod(a % ell, (ell - 1) / 2, ell) {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// For each prime `ℓ ∈ [min, max]`, the least odd `n` outside the set of
/// squares mod `ℓ`, by tabulating the squares directly.
pub fn direct_qnr_table(min: u64, max: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut square = Vec::new();
    for ell in min..=max {
        if !naive_is_prime(ell) {
            continue;
        }
        square.clear();
        square.resize(ell as usize, false);
        for x in 1..ell {
            square[(x * x % ell) as usize] = true;
        }
        let n = (3..)
            .step_by(2)
            .find(|&n| !square[(n % ell) as usize])
            .unwrap();
        out.push((ell, n));
    }
    out
}

/// Whether `target` is a sum of `k_i·deg_i` with `k_i` even for real-rooted
/// kinds, by walking every multiplicity vector.
pub fn combination_oracle(kinds: &[FactorShape], target: usize) -> bool {
    fn go(kinds: &[FactorShape], left: usize) -> bool {
        let Some((first, rest)) = kinds.split_first() else {
            return left == 0;
        };
        let mut k = 0;
        while k * first.degree <= left {
            if (first.real_roots == 0 || k % 2 == 0) && go(rest, left - k * first.degree) {
                return true;
            }
            k += 1;
        }
        false
    }
    go(kinds, target)
}

/// Every multiset of at most `max_kinds` shapes with degree in
/// `1..=max_degree`, each shape with or without real roots.
pub fn all_shape_multisets(max_kinds: usize, max_degree: usize) -> Vec<Vec<FactorShape>> {
    let alphabet: Vec<FactorShape> = (1..=max_degree)
        .flat_map(|d| {
            [0, 1].map(|r| FactorShape {
                degree: d,
                real_roots: r,
            })
        })
        .collect();
    let mut out = vec![Vec::new()];
    let mut frontier = vec![(Vec::<FactorShape>::new(), 0usize)];
    for _ in 0..max_kinds {
        let mut next = Vec::new();
        for (cur, start) in &frontier {
            for (i, s) in alphabet.iter().enumerate().skip(*start) {
                let mut v = cur.clone();
                v.push(*s);
                out.push(v.clone());
                next.push((v, i));
            }
        }
        frontier = next;
    }
    out
}

/// Bitmask of every total `≤ max` reachable by walking all multiplicity
/// vectors.
pub fn reachable_totals(kinds: &[FactorShape], max: usize) -> u64 {
    fn go(kinds: &[FactorShape], sum: usize, max: usize, out: &mut u64) {
        let Some((first, rest)) = kinds.split_first() else {
            *out |= 1 << sum;
            return;
        };
        let mut k = 0;
        while sum + k * first.degree <= max {
            if first.real_roots == 0 || k % 2 == 0 {
                go(rest, sum + k * first.degree, max, out);
            }
            k += 1;
        }
    }
    let mut out = 0;
    go(kinds, 0, max, &mut out);
    out
}

/// Exhaustive agreement check; returns the first disagreement.
pub fn check_combinations(
    max_kinds: usize,
    max_degree: usize,
    max_target: usize,
) -> Result<usize, String> {
    let mut checked = 0;
    for kinds in all_shape_multisets(max_kinds, max_degree) {
        let reach = reachable_totals(&kinds, max_target);
        for target in 0..=max_target {
            let got = rtsieve::weilgate::degree_combination_exists(&kinds, target);
            if got != (reach >> target & 1 == 1) {
                return Err(format!("{kinds:?} target {target}: got {got}"));
            }
            checked += 1;
        }
    }
    Ok(checked)
}

/// `(N, c)` for `T^N − c` with `c = ±p^k`, `N ≤ 30`, `p < 50` prime.
pub fn binomial_sample(count: usize) -> Vec<(u64, BigInt)> {
    let primes: Vec<u64> = (2..50).filter(|&p| naive_is_prime(p)).collect();
    let strategy = (
        1u64..=30,
        prop::sample::select(primes),
        1u32..=30,
        any::<bool>(),
    );
    let mut runner = TestRunner::deterministic();
    (0..count)
        .map(|_| {
            let (n, p, k, neg) = strategy.new_tree(&mut runner).unwrap().current();
            let c = BigInt::from(p).pow(k);
            (n, if neg { -c } else { c })
        })
        .collect()
}

/// Factor `T^N − c` and check reconstruction, agreement with the binomial
/// criterion, and the modular cross-check on every factor.
pub fn check_binomial(n: u64, c: &BigInt) -> Result<(), String> {
    let f = binomial(n as usize, c.clone()).map_err(|e| e.to_string())?;
    let fac = factor_rational(&f).map_err(|e| e.to_string())?;
    if fac.reconstruct() != f {
        return Err(format!("T^{n} − {c}: product does not reconstruct"));
    }
    let crit = irreducible_binomial_criterion(n, c).map_err(|e| e.to_string())?;
    if crit != fac.is_irreducible() {
        return Err(format!(
            "T^{n} − {c}: criterion {crit}, factorization {fac}"
        ));
    }
    for (h, _) in &fac.factors {
        let deg = h.degree().unwrap();
        let cc = cross_check_irreducible(h, 5);
        if !cc.consistent(deg) {
            return Err(format!(
                "T^{n} − {c}: factor {h} fails the modular cross-check"
            ));
        }
    }
    Ok(())
}

/// lcm of every modulus in the conditions for `(required, forbidden, a)`.
fn system_modulus(required: &BTreeSet<u64>, forbidden: &BTreeSet<u64>, a: u32) -> u64 {
    let lcm = |x: u64, y: u64| x / naive_gcd(x, y) * y;
    required
        .iter()
        .chain(forbidden)
        .fold(1u64 << (a + 1), |m, &d| lcm(m, d))
}

fn qualifies(r: u64, required: &BTreeSet<u64>, forbidden: &BTreeSet<u64>, a: u32) -> bool {
    // r stands for ℓ; ℓ − 1 ≡ r − 1 modulo every divisor of the modulus
    let Some(rm1) = r.checked_sub(1) else {
        return false;
    };
    required.iter().all(|&d| rm1 % d == 0)
        && forbidden.iter().all(|&d| rm1 % d != 0)
        && rm1 % (1 << a) == 0
        && (rm1 >> a) & 1 == 1
}

/// Sieve soundness for one genus: recompute every candidate's conditions from
/// the decomposition, rescan all units, compare verdicts and witnesses, and
/// find a prime below `prime_cap` in each witness class.
pub fn check_sieve(g: u32, prime_cap: u64) -> Result<(usize, usize), String> {
    let decs = enumerate_decompositions(g, true).map_err(|e| e.to_string())?;
    let (mut sat, mut unsat) = (0, 0);
    for dec in &decs {
        let cands = mq_candidates(dec).map_err(|e| e.to_string())?;
        let half = dec.e / 2;
        let expected: Vec<u64> = (7..=half).filter(|m| half % m == 0 && m % 2 == 0).collect();
        if cands.iter().map(|c| c.m_q).collect::<Vec<_>>() != expected {
            return Err(format!(
                "{}: candidate m_Q values differ from {expected:?}",
                dec.label()
            ));
        }
        for cand in cands {
            let m_q = cand.m_q;
            let required: BTreeSet<u64> = (1..=m_q).filter(|d| m_q % d == 0).collect();
            let forbidden: BTreeSet<u64> =
                dec.parts.iter().filter(|p| p.1 == 1).map(|p| p.0).collect();
            let a = m_q.trailing_zeros();
            if cand.system.required != required || cand.system.forbidden != forbidden {
                return Err(format!("{} m_Q = {m_q}: wrong conditions", dec.label()));
            }
            let m = system_modulus(&required, &forbidden, a);
            let first =
                (0..m).find(|&r| naive_gcd(r, m) == 1 && qualifies(r, &required, &forbidden, a));
            match (&cand.solution, first) {
                (Solution::Sat { witness }, Some(r)) => {
                    if witness.residue != r || witness.modulus != m {
                        return Err(format!(
                            "{} m_Q = {m_q}: witness {witness}, rescan {r} mod {m}",
                            dec.label()
                        ));
                    }
                    let prime = (r..prime_cap)
                        .step_by(m as usize)
                        .find(|&x| naive_is_prime(x));
                    if prime.is_none() {
                        return Err(format!("no prime below {prime_cap} in {witness}"));
                    }
                    sat += 1;
                }
                (Solution::Unsat { .. }, None) => unsat += 1,
                (s, r) => {
                    return Err(format!(
                        "{} m_Q = {m_q}: solver {s:?}, rescan {r:?}",
                        dec.label()
                    ));
                }
            }
        }
    }
    Ok((sat, unsat))
}
