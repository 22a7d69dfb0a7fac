//! Binomial trace obstruction.
//!
//! If the trace of `Frob_p^{m_Q}` is forced to `ε·2g·p^{m_Q/2}`, every
//! Frobenius eigenvalue is a root of `T^{m_Q} − ε·p^{m_Q/2}`, so the degree-2g
//! characteristic polynomial must be a product of that binomial's rational
//! irreducible factors, with even multiplicity on each factor that has a
//! real root. When no such product has degree `2g`, the value of `m_Q` is
//! ruled out.
//!
//! Two ways of naming the prime `p` are modeled:
//! * an odd prime `p | m_Q`, whose Legendre symbol modulo `ℓ` is forced by
//!   reciprocity;
//! * the least odd quadratic nonresidue, whose size is controlled by the
//!   Burgess exponent `1/(4√e)`. This needs `p^{m_Q/2} < ℓ/4g`, which is
//!   available only when `m_Q/2 < 4√e`. The prime itself is unknown, so the
//!   obstruction must hold for every odd prime up to the bound.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::intpoly::{factor_rational_with, real_root_count, IntPoly, DEFAULT_MAX_DEGREE};
use crate::ntheory::{
    cyclotomic_poly, divisors, forced_legendre, is_prime, odd_primes_up_to, prime_divisors, Sign,
};
use crate::sieve::MQ_FLOOR;

/// `4√e` to ten decimal places.
pub const BURGESS_WINDOW: f64 = 6.594_885_082_8;

pub const DEFAULT_PRIME_BOUND: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RouteKind {
    ExplicitPrime,
    UniversalOddQnr,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Route {
    pub kind: RouteKind,
    pub sign: Sign,
    /// Set for explicit-prime routes only.
    pub prime: Option<u64>,
    pub window_exponent: u64,
    pub window_ok: bool,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match (self.kind, self.prime) {
            (RouteKind::ExplicitPrime, Some(p)) => write!(f, "explicit p = {p}, ε = {}", self.sign),
            _ => write!(
                f,
                "least odd nonresidue, ε = {}, window {}",
                self.sign,
                if self.window_ok { "open" } else { "closed" }
            ),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FactorShape {
    pub degree: usize,
    pub real_roots: usize,
}

impl FactorShape {
    pub fn has_real_root(&self) -> bool {
        self.real_roots > 0
    }
}

/// Factorization data of the trace binomial at one prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeEvaluation {
    pub prime: u64,
    pub binomial: String,
    pub factors: Vec<FactorShape>,
    pub combination_exists: bool,
    /// Multiplicities, aligned with `factors`, of one degree-2g assembly.
    pub combination: Option<Vec<u32>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RouteOutcome {
    pub route: Route,
    pub evaluated: bool,
    pub eliminated: bool,
    /// First prime at which a degree-2g assembly exists.
    pub witness_prime: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EliminationCertificate {
    pub g: u32,
    pub m_q: u64,
    pub prime_bound: u64,
    /// The eliminating route, or the first evaluated one when none eliminates.
    pub route: Option<Route>,
    pub tested_primes: Vec<u64>,
    pub per_prime: Vec<PrimeEvaluation>,
    pub eliminated: bool,
    pub routes_considered: Vec<RouteOutcome>,
    pub notes: Vec<String>,
}

/// `T^{m_Q} − ε·p^{m_Q/2}`.
pub fn trace_binomial(m_q: u64, sign: Sign, p: u64) -> Result<IntPoly> {
    if m_q == 0 || m_q % 2 == 1 {
        return Err(invalid(format!(
            "m_Q = {m_q} must be a positive even integer"
        )));
    }
    if p == 2 || !is_prime(p) {
        return Err(invalid(format!("{p} is not an odd prime")));
    }
    let c = BigInt::from(p).pow((m_q / 2) as u32) * BigInt::from(sign.value());
    IntPoly::binomial(m_q as usize, c)
}

/// Whether nonnegative multiplicities exist with `Σ m_i·deg_i = target` and
/// `m_i` even whenever factor `i` has a real root.
pub fn degree_combination_exists(factors: &[FactorShape], target: usize) -> bool {
    let mut reach = vec![false; target + 1];
    reach[0] = true;
    for f in factors {
        let Some(step) = factor_step(f) else {
            return false;
        };
        for s in step..=target {
            if reach[s - step] {
                reach[s] = true;
            }
        }
    }
    reach[target]
}

/// One witness for [`degree_combination_exists`].
pub fn find_degree_combination(factors: &[FactorShape], target: usize) -> Option<Vec<u32>> {
    let k = factors.len();
    // reach[i][s]: factors i.. can make s
    let mut reach = vec![vec![false; target + 1]; k + 1];
    reach[k][0] = true;
    for i in (0..k).rev() {
        let step = factor_step(&factors[i])?;
        for s in 0..=target {
            reach[i][s] = (0..=s / step).any(|j| reach[i + 1][s - j * step]);
        }
    }
    if !reach[0][target] {
        return None;
    }
    let mut mult = vec![0u32; k];
    let mut s = target;
    for i in 0..k {
        let step = factor_step(&factors[i]).unwrap();
        let j = (0..=s / step)
            .find(|&j| reach[i + 1][s - j * step])
            .unwrap();
        mult[i] = (j * step / factors[i].degree) as u32;
        s -= j * step;
    }
    Some(mult)
}

fn factor_step(f: &FactorShape) -> Option<usize> {
    if f.degree == 0 {
        return None;
    }
    Some(if f.has_real_root() {
        2 * f.degree
    } else {
        f.degree
    })
}

/// Every explicit-prime route, ascending in `p`, then the nonresidue route.
pub fn routes_for(m_q: u64) -> Result<Vec<Route>> {
    if m_q % 2 == 1 || m_q <= MQ_FLOOR {
        return Err(invalid(format!(
            "m_Q = {m_q} must be even and exceed {MQ_FLOOR}"
        )));
    }
    let window_exponent = m_q / 2;
    let mut out = Vec::new();
    for p in prime_divisors(m_q).into_iter().filter(|&p| p != 2) {
        if let Some(sign) = forced_legendre(p, m_q)? {
            out.push(Route {
                kind: RouteKind::ExplicitPrime,
                sign,
                prime: Some(p),
                window_exponent,
                window_ok: true,
            });
        }
    }
    out.push(Route {
        kind: RouteKind::UniversalOddQnr,
        sign: Sign::Minus,
        prime: None,
        window_exponent,
        window_ok: (window_exponent as f64) < BURGESS_WINDOW,
    });
    Ok(out)
}

/// Split `T^{2k} − ε·p^k` into the pieces `p^{φ(d)}·Φ_d(T²/p)`, over `d | k`
/// when `ε = +1` and over `d | 2k` with `d ∤ k` when `ε = −1`. The pieces are
/// pairwise coprime and multiply back to the binomial.
pub fn trace_binomial_pieces(m_q: u64, sign: Sign, p: u64) -> Result<Vec<IntPoly>> {
    trace_binomial(m_q, sign, p)?;
    let k = m_q / 2;
    let index: Vec<u64> = match sign {
        Sign::Plus => divisors(k),
        Sign::Minus => divisors(m_q).into_iter().filter(|d| !k.is_multiple_of(*d)).collect(),
    };
    let p = BigInt::from(p);
    let mut out = Vec::with_capacity(index.len());
    for d in index {
        let phi = cyclotomic_poly(d)?;
        let top = phi.degree().unwrap_or(0);
        let mut coeffs = vec![BigInt::zero(); 2 * top + 1];
        for (i, a) in phi.coeffs().iter().enumerate() {
            coeffs[2 * i] = a * p.pow((top - i) as u32);
        }
        out.push(IntPoly::new(coeffs));
    }
    Ok(out)
}

/// Factor the trace binomial at `p` and look for a degree-`2g` assembly.
pub fn evaluate_prime(g: u32, m_q: u64, sign: Sign, p: u64) -> Result<PrimeEvaluation> {
    let f = trace_binomial(m_q, sign, p)?;
    let mut irreducible = Vec::new();
    for piece in trace_binomial_pieces(m_q, sign, p)? {
        let max_degree = DEFAULT_MAX_DEGREE.max(piece.degree().unwrap_or(0));
        irreducible.extend(factor_rational_with(&piece, max_degree)?.factors);
    }
    irreducible.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    let mut factors = Vec::with_capacity(irreducible.len());
    for (h, mult) in &irreducible {
        let shape = FactorShape {
            degree: h.degree().unwrap_or(0),
            real_roots: real_root_count(h)?,
        };
        factors.extend(std::iter::repeat_n(shape, *mult as usize));
    }
    let combination = find_degree_combination(&factors, 2 * g as usize);
    Ok(PrimeEvaluation {
        prime: p,
        binomial: f.to_string(),
        factors,
        combination_exists: combination.is_some(),
        combination,
    })
}

fn primes_in_scope(route: &Route, prime_bound: u64) -> Vec<u64> {
    match route.kind {
        RouteKind::ExplicitPrime => route.prime.into_iter().collect(),
        RouteKind::UniversalOddQnr => odd_primes_up_to(prime_bound),
    }
}

fn evaluate_route(
    g: u32,
    m_q: u64,
    route: &Route,
    prime_bound: u64,
) -> Result<Vec<PrimeEvaluation>> {
    primes_in_scope(route, prime_bound)
        .par_iter()
        .map(|&p| evaluate_prime(g, m_q, route.sign, p))
        .collect()
}

fn shape_key(ev: &PrimeEvaluation) -> Vec<FactorShape> {
    let mut s = ev.factors.clone();
    s.sort_unstable();
    s
}

fn stability_notes(evals: &[PrimeEvaluation]) -> Vec<String> {
    let mut counts: BTreeMap<Vec<FactorShape>, usize> = BTreeMap::new();
    for ev in evals {
        *counts.entry(shape_key(ev)).or_default() += 1;
    }
    if counts.len() <= 1 {
        return Vec::new();
    }
    let generic = counts
        .iter()
        .max_by(|a, b| a.1.cmp(b.1).then_with(|| b.0.cmp(a.0)))
        .map(|(k, _)| k.clone())
        .unwrap();
    evals
        .iter()
        .filter(|ev| shape_key(ev) != generic)
        .map(|ev| {
            format!(
                "factor shape at p = {} is {} instead of the generic {}",
                ev.prime,
                describe_shapes(&ev.factors),
                describe_shapes(&generic)
            )
        })
        .collect()
}

pub fn describe_shapes(shapes: &[FactorShape]) -> String {
    let parts: Vec<String> = shapes
        .iter()
        .map(|s| {
            if s.has_real_root() {
                format!("{}r", s.degree)
            } else {
                s.degree.to_string()
            }
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

/// Try each applicable route for `m_Q` at genus `g` and certify the outcome.
pub fn eliminate_mq(g: u32, m_q: u64, prime_bound: u64) -> Result<EliminationCertificate> {
    if g == 0 {
        return Err(invalid("g must be positive"));
    }
    if prime_bound < 3 {
        return Err(invalid("prime bound must be at least 3"));
    }
    if prime_bound > 1_000_000 {
        return Err(Error::Capacity {
            what: "prime bound",
            got: prime_bound,
            limit: 1_000_000,
        });
    }
    let mut cert = EliminationCertificate {
        g,
        m_q,
        prime_bound,
        route: None,
        tested_primes: Vec::new(),
        per_prime: Vec::new(),
        eliminated: false,
        routes_considered: Vec::new(),
        notes: Vec::new(),
    };
    let mut fallback: Option<(Route, Vec<PrimeEvaluation>)> = None;

    for route in routes_for(m_q)? {
        if !route.window_ok {
            cert.notes.push(format!(
                "nonresidue route closed: m_Q/2 = {} is not below 4√e ≈ {BURGESS_WINDOW}",
                route.window_exponent
            ));
            cert.routes_considered.push(RouteOutcome {
                route,
                evaluated: false,
                eliminated: false,
                witness_prime: None,
            });
            continue;
        }
        let evals = evaluate_route(g, m_q, &route, prime_bound)?;
        let witness_prime = evals.iter().find(|e| e.combination_exists).map(|e| e.prime);
        let eliminated = !evals.is_empty() && witness_prime.is_none();
        if route.kind == RouteKind::UniversalOddQnr {
            cert.notes.extend(stability_notes(&evals));
            cert.notes.push(format!(
                "{route}: shapes evaluated for the {} odd primes p ≤ {prime_bound} only",
                evals.len()
            ));
        }
        if let Some(p) = witness_prime {
            let ev = evals.iter().find(|e| e.prime == p).unwrap();
            cert.notes.push(format!(
                "{route}: degree {} assembles from {} at p = {p}",
                2 * g,
                describe_combination(ev)
            ));
        }
        cert.routes_considered.push(RouteOutcome {
            route: route.clone(),
            evaluated: true,
            eliminated,
            witness_prime,
        });
        if eliminated {
            cert.eliminated = true;
            cert.tested_primes = evals.iter().map(|e| e.prime).collect();
            cert.per_prime = evals;
            cert.route = Some(route);
            return Ok(cert);
        }
        if fallback.is_none() {
            fallback = Some((route, evals));
        }
    }

    match fallback {
        Some((route, evals)) => {
            cert.tested_primes = evals.iter().map(|e| e.prime).collect();
            cert.per_prime = evals;
            cert.route = Some(route);
        }
        None => cert
            .notes
            .push("no applicable route; m_Q stays open".into()),
    }
    Ok(cert)
}

/// `2 + 6 + 6` style rendering of a witness assembly.
pub fn describe_combination(ev: &PrimeEvaluation) -> String {
    let Some(mult) = &ev.combination else {
        return "nothing".into();
    };
    let terms: Vec<String> = ev
        .factors
        .iter()
        .zip(mult)
        .flat_map(|(f, &m)| std::iter::repeat_n(f.degree.to_string(), m as usize))
        .collect();
    terms.join(" + ")
}

impl EliminationCertificate {
    /// Recompute every factorization and verdict recorded in the certificate.
    pub fn verify(&self) -> Result<()> {
        let fail = |msg: String| {
            Err(invalid(format!(
                "certificate for m_Q = {}: {msg}",
                self.m_q
            )))
        };
        if self.tested_primes != self.per_prime.iter().map(|e| e.prime).collect::<Vec<_>>() {
            return fail("tested primes disagree with per-prime records".into());
        }
        let all_fail =
            !self.per_prime.is_empty() && self.per_prime.iter().all(|e| !e.combination_exists);
        if self.eliminated != all_fail {
            return fail("eliminated flag disagrees with per-prime records".into());
        }
        let Some(route) = &self.route else {
            return if self.eliminated || !self.per_prime.is_empty() {
                fail("records without a route".into())
            } else {
                Ok(())
            };
        };
        if !routes_for(self.m_q)?.contains(route) {
            return fail(format!("route {route} is not available"));
        }
        if self.tested_primes != primes_in_scope(route, self.prime_bound) {
            return fail("tested primes do not cover the route's scope".into());
        }
        for ev in &self.per_prime {
            let fresh = evaluate_prime(self.g, self.m_q, route.sign, ev.prime)?;
            if fresh.factors != ev.factors || fresh.combination_exists != ev.combination_exists {
                return fail(format!("evaluation at p = {} does not reproduce", ev.prime));
            }
            if let Some(m) = &ev.combination {
                let total: usize = ev
                    .factors
                    .iter()
                    .zip(m)
                    .map(|(f, &k)| f.degree * k as usize)
                    .sum();
                let parity = ev
                    .factors
                    .iter()
                    .zip(m)
                    .all(|(f, &k)| !f.has_real_root() || k % 2 == 0);
                if total != 2 * self.g as usize || !parity {
                    return fail(format!("bad witness assembly at p = {}", ev.prime));
                }
            }
        }
        Ok(())
    }
}
