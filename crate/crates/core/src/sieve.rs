//! Congruence sieve on `(decomposition, m_Q)` pairs.
//!
//! For a decomposition with exponent `e`, `m_Q` ranges over the even divisors
//! of `e/2` exceeding 6. Each candidate induces conditions on `ℓ`:
//! `m_Q | ℓ − 1`, `ord₂(ℓ − 1) = ord₂(m_Q)`, and `ℓ ≢ 1 mod d` whenever
//! `n_d = 1`. A candidate survives when some unit class satisfies them.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{enumerate_decompositions, Decomposition};
use crate::error::{invalid, Result};
use crate::ntheory::{
    divisors, solve_congruence_system, two_adic_valuation, CongruenceSystem, ResidueClass, Solution,
};

/// Smallest value `m_Q` may take.
pub const MQ_FLOOR: u64 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MqCandidate {
    pub m_q: u64,
    pub system: CongruenceSystem,
    pub solution: Solution,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurvivorCase {
    pub decomposition: Decomposition,
    pub m_q: u64,
    pub witness: ResidueClass,
    pub system: CongruenceSystem,
}

impl SurvivorCase {
    /// Re-check every invariant independently of how the case was produced.
    pub fn verify(&self) -> Result<()> {
        self.decomposition.check(true)?;
        let e = self.decomposition.e;
        if !(e / 2).is_multiple_of(self.m_q) || self.m_q <= MQ_FLOOR || !self.m_q.is_multiple_of(2) {
            return Err(invalid(format!(
                "m_Q = {} not an even divisor of e/2 > 6",
                self.m_q
            )));
        }
        if self.system != system_for(&self.decomposition, self.m_q)? {
            return Err(invalid("recorded system does not match the decomposition"));
        }
        ResidueClass::new(self.witness.residue, self.witness.modulus)?;
        if self.witness.modulus != self.system.modulus()?
            || !self.system.admits(self.witness.residue)
        {
            return Err(invalid(format!(
                "witness {} fails its system",
                self.witness
            )));
        }
        Ok(())
    }
}

/// The conditions on `ℓ` induced by `(dec, m_Q)`.
pub fn system_for(dec: &Decomposition, m_q: u64) -> Result<CongruenceSystem> {
    CongruenceSystem::new(
        divisors(m_q),
        dec.singletons(),
        Some(two_adic_valuation(m_q)?),
    )
}

/// Candidate `m_Q` values for `dec`, ascending, with the verdict on each.
pub fn mq_candidates(dec: &Decomposition) -> Result<Vec<MqCandidate>> {
    let half = dec.e / 2;
    let mut out = Vec::new();
    for m_q in divisors(half) {
        if m_q <= MQ_FLOOR || m_q % 2 == 1 {
            continue;
        }
        let system = system_for(dec, m_q)?;
        let solution = solve_congruence_system(&system)?;
        if solution.is_sat() {
            // ord₂(ℓ − 1) ≤ ord₂(e) − 1 follows from m_Q | e/2
            assert!(two_adic_valuation(m_q)? < two_adic_valuation(dec.e)?);
        }
        out.push(MqCandidate {
            m_q,
            system,
            solution,
        });
    }
    Ok(out)
}

/// SAT candidates over `decs`, keeping the order of `decs` and then `m_Q`.
pub fn survivors_of(decs: &[Decomposition]) -> Result<Vec<SurvivorCase>> {
    let per_dec: Vec<Vec<SurvivorCase>> = decs
        .par_iter()
        .map(|dec| {
            Ok(mq_candidates(dec)?
                .into_iter()
                .filter_map(|c| {
                    c.solution.witness().map(|witness| SurvivorCase {
                        decomposition: dec.clone(),
                        m_q: c.m_q,
                        witness,
                        system: c.system,
                    })
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_dec.into_iter().flatten().collect())
}

pub fn survivors(g: u32) -> Result<Vec<SurvivorCase>> {
    survivors_of(&enumerate_decompositions(g, true)?)
}
