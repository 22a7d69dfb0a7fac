mod common;

use rtsieve::ntheory::{forced_legendre, PrimeSieve, ResidueClass, Sign};
use rtsieve::sieve::survivors;

#[test]
fn sieve_is_sound_through_genus_seven() {
    for g in 1..=7 {
        let (sat, unsat) = common::check_sieve(g, 1_000_000).unwrap();
        assert_eq!(sat, survivors(g).unwrap().len(), "g = {g}");
        assert!(g < 4 || unsat > 0);
    }
}

#[test]
fn survivors_revalidate() {
    for g in 4..=7 {
        for s in survivors(g).unwrap() {
            s.verify().unwrap();
        }
    }
}

#[test]
fn genus_four_table() {
    let got: Vec<(String, ResidueClass)> = survivors(4)
        .unwrap()
        .into_iter()
        .map(|s| (s.decomposition.label(), s.witness))
        .collect();
    let class = |r, m| ResidueClass {
        residue: r,
        modulus: m,
    };
    assert_eq!(
        got,
        vec![
            ("2φ(3)+φ(8)".to_string(), class(13, 24)),
            ("2φ(6)+φ(8)".to_string(), class(13, 24)),
            ("φ(16)".to_string(), class(9, 16)),
            ("φ(20)".to_string(), class(11, 20)),
            ("φ(24)".to_string(), class(13, 24)),
        ]
    );
}

#[test]
fn forced_symbol_holds_for_every_prime_below_a_million() {
    let sieve = PrimeSieve::new(1_000_000).unwrap();
    let mqs: Vec<u64> = (8..=60).step_by(2).collect();
    let mut checked = 0;
    for ell in sieve.primes_in(3, 1_000_000) {
        let v = (ell - 1).trailing_zeros();
        for &m_q in &mqs {
            if (ell - 1) % m_q != 0 || m_q.trailing_zeros() != v {
                continue;
            }
            for p in (3..=m_q).filter(|&p| m_q % p == 0 && common::naive_is_prime(p)) {
                let sign = forced_legendre(p, m_q).unwrap().expect("p divides m_Q");
                let expected = if sign == Sign::Plus { 1 } else { -1 };
                assert_eq!(
                    common::euler_legendre(p, ell),
                    expected,
                    "p = {p}, m_Q = {m_q}, ℓ = {ell}"
                );
                checked += 1;
            }
        }
    }
    assert!(checked > 10_000);
}
