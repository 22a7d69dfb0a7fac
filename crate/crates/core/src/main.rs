use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use serde_json::json;

use rtsieve::driver::{analyze, mq_values, qnr_scan, survivor_cases, Config, Verdict};
use rtsieve::intpoly::{factor_rational, IntPoly};
use rtsieve::Result;

const EXIT_OPEN: u8 = 10;
const EXIT_INVALID: u8 = 2;

#[derive(Parser)]
#[command(
    name = "rtsieve",
    version,
    about = "Exact case elimination for abelian varieties over ℚ"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Common {
    /// TOML file with the same keys as the flags
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    restrict_e: Option<u64>,
    #[arg(long)]
    prime_bound: Option<u64>,
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

impl Common {
    fn config(&self) -> Result<Config> {
        let mut cfg = match &self.config {
            Some(path) => Config::from_file(path)?,
            None => Config::default(),
        };
        if self.restrict_e.is_some() {
            cfg.restrict_e = self.restrict_e;
        }
        if let Some(b) = self.prime_bound {
            cfg.prime_bound = b;
        }
        if self.threads.is_some() {
            cfg.threads = self.threads;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the full pipeline for one genus
    Analyze {
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        common: Common,
    },
    /// List post-sieve survivor cases
    Survivors {
        #[arg(long)]
        g: u32,
        #[command(flatten)]
        common: Common,
    },
    /// Factor a polynomial over ℚ
    Factor {
        /// T^N − c
        #[arg(long, num_args = 2, value_names = ["N", "C"], allow_negative_numbers = true,
              conflicts_with = "coeffs", required_unless_present = "coeffs")]
        binomial: Option<Vec<String>>,
        /// Coefficients, constant term first
        #[arg(long, allow_hyphen_values = true)]
        coeffs: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Least odd quadratic nonresidue for each prime in a range
    QnrScan {
        #[arg(long)]
        min: u64,
        #[arg(long)]
        max: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Distinct m_Q values for one genus
    Mq {
        #[arg(long)]
        g: u32,
        #[arg(long)]
        post_weilgate: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn poly_json(f: &IntPoly) -> serde_json::Value {
    json!({ "coeffs": f.coeff_strings(), "pretty": f.to_string() })
}

fn coeff_list(f: &IntPoly) -> String {
    format!("[{}]", f.coeff_strings().join(", "))
}

fn parse_input(binomial: Option<Vec<String>>, coeffs: Option<String>) -> Result<IntPoly> {
    let bad = |s: &str| rtsieve::Error::InvalidInput(format!("cannot parse {s:?}"));
    match (binomial, coeffs) {
        (Some(v), None) => {
            let n: usize = v[0].parse().map_err(|_| bad(&v[0]))?;
            let c: BigInt = v[1].parse().map_err(|_| bad(&v[1]))?;
            IntPoly::binomial(n, c)
        }
        (None, Some(s)) => IntPoly::parse_coeff_list(&s),
        _ => Err(rtsieve::Error::InvalidInput(
            "give exactly one of --binomial, --coeffs".into(),
        )),
    }
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Analyze { g, common } => {
            let report = analyze(g, &common.config()?)?;
            match common.format {
                Format::Text => print!("{}", report.to_text()),
                Format::Json => println!("{}", report.to_json()),
            }
            Ok(match report.verdict {
                Verdict::Empty => 0,
                Verdict::Open => EXIT_OPEN,
            })
        }
        Command::Survivors { g, common } => {
            let cases = survivor_cases(g, &common.config()?)?;
            match common.format {
                Format::Text => {
                    for s in &cases {
                        println!(
                            "{}\t{}\tm_Q = {}",
                            s.decomposition.label(),
                            s.witness,
                            s.m_q
                        );
                    }
                }
                Format::Json => println!("{}", serde_json::to_string_pretty(&cases).unwrap()),
            }
            Ok(0)
        }
        Command::Factor {
            binomial,
            coeffs,
            format,
        } => {
            let f = parse_input(binomial, coeffs)?;
            let fac = factor_rational(&f)?;
            match format {
                Format::Text => {
                    println!("input: {f}");
                    println!("coefficients: {}", coeff_list(&f));
                    println!("unit: {}", fac.unit);
                    for (h, m) in &fac.factors {
                        println!("factor^{m}: {}  {h}", coeff_list(h));
                    }
                    println!("product: {fac}");
                }
                Format::Json => {
                    let factors: Vec<_> = fac
                        .factors
                        .iter()
                        .map(|(h, m)| json!({ "factor": poly_json(h), "multiplicity": m }))
                        .collect();
                    let doc = json!({
                        "input": poly_json(&f),
                        "unit": fac.unit.to_string(),
                        "factors": factors,
                        "product": fac.to_string(),
                    });
                    println!("{}", serde_json::to_string_pretty(&doc).unwrap());
                }
            }
            Ok(0)
        }
        Command::QnrScan { min, max, format } => {
            let scan = qnr_scan(min, max)?;
            match format {
                Format::Text => print!("{}", scan.to_text()),
                Format::Json => println!("{}", serde_json::to_string(&scan).unwrap()),
            }
            Ok(0)
        }
        Command::Mq {
            g,
            post_weilgate,
            common,
        } => {
            let values = mq_values(g, post_weilgate, &common.config()?)?;
            match common.format {
                Format::Text => {
                    let v: Vec<String> = values.iter().map(u64::to_string).collect();
                    println!("{}", v.join(" "));
                }
                Format::Json => println!("{}", serde_json::to_string(&values).unwrap()),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_INVALID)
        }
    }
}
