//! Full pipeline per genus, report rendering, and the nonresidue scan.
//!
//! All parallel work is confined here and in the modules it calls; results
//! are collected in input order and sorted before they reach a report, so
//! output does not depend on the thread count.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decomp::{enumerate_decompositions, Decomposition, MAX_GENUS};
use crate::error::{invalid, Error, Result};
use crate::ntheory::{least_odd_qnr_unchecked, PrimeSieve, ResidueClass, DEFAULT_SIEVE_LIMIT};
use crate::sieve::{survivors_of, SurvivorCase};
use crate::weilgate::{
    describe_combination, describe_shapes, eliminate_mq, EliminationCertificate,
    DEFAULT_PRIME_BOUND,
};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Pipeline settings. The TOML form uses the same keys as the CLI flags.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields, default)]
pub struct Config {
    /// Keep only decompositions whose `e` divides this value.
    pub restrict_e: Option<u64>,
    pub prime_bound: u64,
    /// Worker threads; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            restrict_e: None,
            prime_bound: DEFAULT_PRIME_BOUND,
            threads: None,
        }
    }
}

impl Config {
    pub fn from_toml_str(s: &str) -> Result<Self> {
        let cfg: Config = toml::from_str(s).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml_str(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.restrict_e == Some(0) {
            return Err(invalid("restrict-e must be positive"));
        }
        if self.prime_bound < 3 {
            return Err(invalid("prime-bound must be at least 3"));
        }
        if self.threads == Some(0) {
            return Err(invalid("threads must be positive"));
        }
        Ok(())
    }

    fn run<T: Send>(&self, job: impl FnOnce() -> Result<T> + Send) -> Result<T> {
        match self.threads {
            None => job(),
            Some(n) => rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(e.to_string()))?
                .install(job),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    Empty,
    Open,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Empty => "EMPTY",
            Verdict::Open => "OPEN",
        })
    }
}

/// A survivor whose `m_Q` no certificate eliminates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpenCase {
    /// Index into `survivors`.
    pub survivor: usize,
    pub decomposition: String,
    pub m_q: u64,
    pub witness: ResidueClass,
    /// Index into `certificates`, absent when no certificate was produced.
    pub certificate: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub g: u32,
    pub verdict: Verdict,
    pub decompositions: Vec<Decomposition>,
    pub survivors: Vec<SurvivorCase>,
    pub certificates: Vec<EliminationCertificate>,
    pub open_cases: Vec<OpenCase>,
    pub tool_version: String,
    pub config: Config,
}

fn check_analysis_genus(g: u32) -> Result<()> {
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

fn restricted_decompositions(g: u32, cfg: &Config) -> Result<Vec<Decomposition>> {
    let mut decs = enumerate_decompositions(g, true)?;
    if let Some(m) = cfg.restrict_e {
        decs.retain(|d| m % d.e == 0);
    }
    Ok(decs)
}

fn distinct_mq(survivors: &[SurvivorCase]) -> BTreeSet<u64> {
    survivors.iter().map(|s| s.m_q).collect()
}

pub fn analyze(g: u32, cfg: &Config) -> Result<AnalysisReport> {
    check_analysis_genus(g)?;
    cfg.validate()?;
    cfg.run(|| {
        let decompositions = restricted_decompositions(g, cfg)?;
        let survivors = survivors_of(&decompositions)?;
        let mqs: Vec<u64> = distinct_mq(&survivors).into_iter().collect();
        let certificates: Vec<EliminationCertificate> = mqs
            .par_iter()
            .map(|&m| eliminate_mq(g, m, cfg.prime_bound))
            .collect::<Result<_>>()?;

        let open_cases: Vec<OpenCase> = survivors
            .iter()
            .enumerate()
            .filter_map(|(i, s)| {
                let cert = certificates.iter().position(|c| c.m_q == s.m_q);
                let closed = cert.is_some_and(|k| certificates[k].eliminated);
                (!closed).then(|| OpenCase {
                    survivor: i,
                    decomposition: s.decomposition.label(),
                    m_q: s.m_q,
                    witness: s.witness,
                    certificate: cert,
                })
            })
            .collect();

        Ok(AnalysisReport {
            g,
            verdict: if open_cases.is_empty() {
                Verdict::Empty
            } else {
                Verdict::Open
            },
            decompositions,
            survivors,
            certificates,
            open_cases,
            tool_version: TOOL_VERSION.to_string(),
            config: cfg.clone(),
        })
    })
}

impl AnalysisReport {
    /// Distinct `m_Q` values still open.
    pub fn open_mq(&self) -> BTreeSet<u64> {
        self.open_cases.iter().map(|c| c.m_q).collect()
    }

    /// Re-validate every embedded witness and certificate and the
    /// cross-references between them.
    pub fn verify(&self) -> Result<()> {
        for d in &self.decompositions {
            d.check(true)?;
            if d.g != self.g {
                return Err(invalid(format!(
                    "decomposition {} has the wrong genus",
                    d.label()
                )));
            }
        }
        for s in &self.survivors {
            s.verify()?;
            if !self.decompositions.contains(&s.decomposition) {
                return Err(invalid("survivor refers to an unlisted decomposition"));
            }
        }
        let expected: Vec<u64> = distinct_mq(&self.survivors).into_iter().collect();
        let got: Vec<u64> = self.certificates.iter().map(|c| c.m_q).collect();
        if expected != got {
            return Err(invalid(
                "certificates do not match the surviving m_Q values",
            ));
        }
        for c in &self.certificates {
            c.verify()?;
        }
        for oc in &self.open_cases {
            let s = self
                .survivors
                .get(oc.survivor)
                .ok_or_else(|| invalid("open case points past the survivor list"))?;
            if s.m_q != oc.m_q
                || s.witness != oc.witness
                || s.decomposition.label() != oc.decomposition
            {
                return Err(invalid("open case disagrees with its survivor"));
            }
            if let Some(k) = oc.certificate {
                let c = self
                    .certificates
                    .get(k)
                    .ok_or_else(|| invalid("open case points past the certificate list"))?;
                if c.m_q != oc.m_q || c.eliminated {
                    return Err(invalid("open case cites an eliminating certificate"));
                }
            }
        }
        let open_idx: BTreeSet<usize> = self.open_cases.iter().map(|c| c.survivor).collect();
        for (i, s) in self.survivors.iter().enumerate() {
            let closed = self
                .certificates
                .iter()
                .any(|c| c.m_q == s.m_q && c.eliminated);
            if closed == open_idx.contains(&i) {
                return Err(invalid(format!("survivor {i} is misclassified")));
            }
        }
        if (self.verdict == Verdict::Empty) != self.open_cases.is_empty() {
            return Err(invalid("verdict disagrees with the open cases"));
        }
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "genus {}  verdict {}", self.g, self.verdict);
        let _ = writeln!(
            out,
            "tool {}  prime bound {}  restrict e {}",
            self.tool_version,
            self.config.prime_bound,
            self.config
                .restrict_e
                .map_or("none".to_string(), |m| m.to_string())
        );
        let _ = writeln!(out, "\ndecompositions ({})", self.decompositions.len());
        for d in &self.decompositions {
            let _ = writeln!(out, "  e = {:<5} {}", d.e, d.label());
        }
        let _ = writeln!(out, "\nsurvivors ({})", self.survivors.len());
        for s in &self.survivors {
            let _ = writeln!(
                out,
                "  m_Q = {:<3} ℓ ≡ {:<10} {}",
                s.m_q,
                s.witness.to_string(),
                s.decomposition.label()
            );
        }
        let _ = writeln!(out, "\ncertificates ({})", self.certificates.len());
        for c in &self.certificates {
            let status = if c.eliminated { "eliminated" } else { "open" };
            let route = c
                .route
                .as_ref()
                .map_or("none".to_string(), |r| r.to_string());
            let _ = writeln!(out, "  m_Q = {:<3} {status:<10} {route}", c.m_q);
            if let Some(ev) = c.per_prime.first() {
                let _ = writeln!(
                    out,
                    "    {} factors as {}, {} prime(s) tested",
                    ev.binomial,
                    describe_shapes(&ev.factors),
                    c.tested_primes.len()
                );
            }
            if let Some(ev) = c.per_prime.iter().find(|e| e.combination_exists) {
                let _ = writeln!(
                    out,
                    "    degree {} = {} at p = {}",
                    2 * c.g,
                    describe_combination(ev),
                    ev.prime
                );
            }
            for n in &c.notes {
                let _ = writeln!(out, "    note: {n}");
            }
        }
        let _ = writeln!(out, "\nopen cases ({})", self.open_cases.len());
        for oc in &self.open_cases {
            let _ = writeln!(
                out,
                "  m_Q = {:<3} ℓ ≡ {:<10} {}",
                oc.m_q,
                oc.witness.to_string(),
                oc.decomposition
            );
        }
        out
    }
}

/// Distinct `m_Q` values among survivors, or among open cases after the
/// trace obstruction when `post_weilgate` is set.
pub fn mq_values(g: u32, post_weilgate: bool, cfg: &Config) -> Result<BTreeSet<u64>> {
    if post_weilgate {
        return Ok(analyze(g, cfg)?.open_mq());
    }
    check_analysis_genus(g)?;
    cfg.validate()?;
    cfg.run(|| {
        Ok(distinct_mq(&survivors_of(&restricted_decompositions(
            g, cfg,
        )?)?))
    })
}

/// Post-sieve survivors for `g`, honoring `restrict_e`.
pub fn survivor_cases(g: u32, cfg: &Config) -> Result<Vec<SurvivorCase>> {
    check_analysis_genus(g)?;
    cfg.validate()?;
    cfg.run(|| survivors_of(&restricted_decompositions(g, cfg)?))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QnrEntry {
    pub ell: u64,
    pub n: u64,
}

impl QnrEntry {
    pub fn exponent(&self) -> f64 {
        (self.n as f64).ln() / (self.ell as f64).ln()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnrSummary {
    pub primes: usize,
    pub max_n: u64,
    /// Smallest `ℓ` attaining `max_n`.
    pub argmax_ell: u64,
    pub max_exponent: f64,
    pub max_exponent_ell: u64,
    /// `1/(4√e)`.
    pub burgess_exponent: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QnrScan {
    pub min: u64,
    pub max: u64,
    pub entries: Vec<QnrEntry>,
    pub summary: QnrSummary,
}

/// Least odd nonresidue for every prime in `[min, max]`.
pub fn qnr_scan(min: u64, max: u64) -> Result<QnrScan> {
    if min < 5 || min > max {
        return Err(invalid(format!(
            "scan range [{min}, {max}] needs 5 ≤ min ≤ max"
        )));
    }
    if max > DEFAULT_SIEVE_LIMIT {
        return Err(Error::Capacity {
            what: "scan maximum",
            got: max,
            limit: DEFAULT_SIEVE_LIMIT,
        });
    }
    let sieve = PrimeSieve::new(max)?;
    let primes: Vec<u64> = sieve.primes_in(min, max).collect();
    let entries: Vec<QnrEntry> = primes
        .par_iter()
        .map(|&ell| QnrEntry {
            ell,
            n: least_odd_qnr_unchecked(ell),
        })
        .collect();

    let mut summary = QnrSummary {
        primes: entries.len(),
        max_n: 0,
        argmax_ell: 0,
        max_exponent: 0.0,
        max_exponent_ell: 0,
        burgess_exponent: 0.25 / std::f64::consts::E.sqrt(),
    };
    for e in &entries {
        if e.n > summary.max_n {
            summary.max_n = e.n;
            summary.argmax_ell = e.ell;
        }
        let x = e.exponent();
        if x > summary.max_exponent {
            summary.max_exponent = x;
            summary.max_exponent_ell = e.ell;
        }
    }
    Ok(QnrScan {
        min,
        max,
        entries,
        summary,
    })
}

impl QnrScan {
    pub fn to_text(&self) -> String {
        let s = &self.summary;
        let mut out = String::new();
        let _ = writeln!(out, "primes in [{}, {}]: {}", self.min, self.max, s.primes);
        if s.primes > 0 {
            let _ = writeln!(
                out,
                "largest least odd nonresidue: {} at ℓ = {}",
                s.max_n, s.argmax_ell
            );
            let _ = writeln!(
                out,
                "largest log n/log ℓ: {:.6} at ℓ = {}  (1/(4√e) = {:.6})",
                s.max_exponent, s.max_exponent_ell, s.burgess_exponent
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_toml() {
        let c = Config::from_toml_str("restrict-e = 24\nprime-bound = 200\n").unwrap();
        assert_eq!(c.restrict_e, Some(24));
        assert_eq!(c.prime_bound, 200);
        assert_eq!(c.threads, None);
        assert!(Config::from_toml_str("primebound = 3").is_err());
        assert!(Config::from_toml_str("prime-bound = 1").is_err());
        assert_eq!(Config::from_toml_str("").unwrap(), Config::default());
    }

    #[test]
    fn small_genus_empty() {
        for g in 1..=3 {
            let r = analyze(g, &Config::default()).unwrap();
            assert_eq!(r.verdict, Verdict::Empty);
            assert!(r.survivors.is_empty());
            r.verify().unwrap();
        }
        assert!(matches!(
            analyze(13, &Config::default()),
            Err(Error::Capacity { .. })
        ));
        assert!(analyze(0, &Config::default()).is_err());
    }

    #[test]
    fn genus_four_open() {
        let r = analyze(4, &Config::default()).unwrap();
        assert_eq!(r.verdict, Verdict::Open);
        assert_eq!(r.open_cases.len(), 5);
        r.verify().unwrap();
        let mut bad = r.clone();
        bad.verdict = Verdict::Empty;
        assert!(bad.verify().is_err());
    }

    #[test]
    fn scan_small() {
        let s = qnr_scan(5, 100).unwrap();
        assert_eq!(s.entries[0], QnrEntry { ell: 5, n: 3 });
        assert!(s
            .entries
            .iter()
            .all(|e| e.n % 2 == 1 && crate::ntheory::is_prime(e.n)));
        assert!(qnr_scan(3, 10).is_err());
        assert!(qnr_scan(20, 10).is_err());
    }
}
