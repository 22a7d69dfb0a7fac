//! Totient decompositions `2g = Σ n_d·φ(d)` with `e = lcm{d : n_d > 0}`.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::ntheory::{prime_divisors, totient};

pub const MAX_GENUS: u32 = 12;

/// One solution of `2g = Σ n_d·φ(d)`. `parts` holds `(d, n_d)` with
/// `n_d > 0`, ascending in `d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Decomposition {
    pub g: u32,
    pub parts: Vec<(u64, u64)>,
    pub e: u64,
}

impl Decomposition {
    pub fn new(g: u32, mut parts: Vec<(u64, u64)>) -> Result<Self> {
        parts.retain(|&(_, n)| n > 0);
        parts.sort_unstable();
        if parts.windows(2).any(|w| w[0].0 == w[1].0) {
            return Err(invalid("repeated index in decomposition"));
        }
        let mut sum = 0;
        let mut e = 1u64;
        for &(d, n) in &parts {
            sum += n * totient(d)?;
            e = e.lcm(&d);
        }
        if sum != 2 * g as u64 {
            return Err(invalid(format!("Σ n_d·φ(d) = {sum}, expected {}", 2 * g)));
        }
        Ok(Decomposition { g, parts, e })
    }

    pub fn multiplicity(&self, d: u64) -> u64 {
        self.parts
            .iter()
            .find(|&&(k, _)| k == d)
            .map_or(0, |&(_, n)| n)
    }

    pub fn support(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().map(|&(d, _)| d)
    }

    /// Indices `d` with `n_d = 1`.
    pub fn singletons(&self) -> impl Iterator<Item = u64> + '_ {
        self.parts.iter().filter(|&&(_, n)| n == 1).map(|&(d, _)| d)
    }

    /// `4 | e` and every prime divisor of `e` is at most `2g + 1`.
    pub fn passes_filters(&self) -> bool {
        self.e.is_multiple_of(4)
            && prime_divisors(self.e)
                .iter()
                .all(|&p| p <= 2 * self.g as u64 + 1)
    }

    /// `2φ(3)+φ(8)` style label.
    pub fn label(&self) -> String {
        self.parts
            .iter()
            .map(|&(d, n)| {
                if n == 1 {
                    format!("φ({d})")
                } else {
                    format!("{n}φ({d})")
                }
            })
            .collect::<Vec<_>>()
            .join("+")
    }

    /// Re-derive every structural invariant from scratch.
    pub fn check(&self, filtered: bool) -> Result<()> {
        let rebuilt = Decomposition::new(self.g, self.parts.clone())?;
        if rebuilt.e != self.e {
            return Err(invalid(format!(
                "e = {} but lcm of support is {}",
                self.e, rebuilt.e
            )));
        }
        if filtered && !self.passes_filters() {
            return Err(invalid(format!("{} violates the e filters", self.label())));
        }
        Ok(())
    }

    fn sort_key(&self) -> (Vec<u64>, Vec<u64>) {
        self.parts.iter().map(|&(d, n)| (d, n)).unzip()
    }
}

fn check_genus(g: u32) -> Result<()> {
    if g == 0 {
        return Err(invalid("g must be positive"));
    }
    if g > MAX_GENUS {
        return Err(Error::Capacity {
            what: "g",
            got: g as u64,
            limit: MAX_GENUS as u64,
        });
    }
    Ok(())
}

/// Every `d` with `φ(d) ≤ 2g` whose prime divisors are at most `2g + 1`,
/// ascending.
pub fn admissible_d(g: u32) -> Result<Vec<u64>> {
    if g == 0 {
        return Err(invalid("g must be positive"));
    }
    let two_g = 2 * g as u64;
    // φ(d) ≥ √(d/2), so φ(d) ≤ 2g forces d ≤ 2·(2g)².
    let bound = 2 * two_g * two_g;
    let mut out = Vec::new();
    for d in 1..=bound {
        if totient(d)? <= two_g && prime_divisors(d).iter().all(|&p| p <= two_g + 1) {
            out.push(d);
        }
    }
    Ok(out)
}

/// All multiset solutions of `Σ n_d·φ(d) = 2g` over [`admissible_d`], in
/// canonical order (sorted support, then multiplicities). With
/// `apply_filters`, only those with `4 | e` and small prime divisors of `e`.
pub fn enumerate_decompositions(g: u32, apply_filters: bool) -> Result<Vec<Decomposition>> {
    check_genus(g)?;
    let ds: Vec<(u64, u64)> = admissible_d(g)?
        .into_iter()
        .map(|d| Ok((d, totient(d)?)))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut parts = Vec::new();
    walk(&ds, 0, 2 * g as u64, &mut parts, &mut |parts| {
        let dec = Decomposition::new(g, parts.to_vec()).expect("sum matches by construction");
        if !apply_filters || dec.passes_filters() {
            out.push(dec);
        }
    });
    out.sort_by_cached_key(Decomposition::sort_key);
    Ok(out)
}

fn walk(
    ds: &[(u64, u64)],
    i: usize,
    remaining: u64,
    parts: &mut Vec<(u64, u64)>,
    emit: &mut dyn FnMut(&[(u64, u64)]),
) {
    if remaining == 0 {
        emit(parts);
        return;
    }
    let Some(&(d, phi)) = ds.get(i) else { return };
    walk(ds, i + 1, remaining, parts, emit);
    for n in 1..=remaining / phi {
        parts.push((d, n));
        walk(ds, i + 1, remaining - n * phi, parts, emit);
        parts.pop();
    }
}
