use std::io::Write;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};

use mseq::census::{self, DEFAULT_BUDGET};
use mseq::error::Error;
use mseq::field::Field;
use mseq::report::{self, CensusBlock, Format, PolytopeRow};
use mseq::{jlc_fast, jlc_profile, polytope, seqfile, verify, Multisequence};

/// Joint linear complexity toolkit for multisequences over F_q.
#[derive(Parser)]
#[command(name = "mseq", version, about)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

/// Inclusive integer range: "a..b" or a single value.
#[derive(Clone, Debug)]
struct NRange {
    lo: usize,
    hi: usize,
}

impl std::str::FromStr for NRange {
    type Err = String;
    fn from_str(s: &str) -> Result<NRange, String> {
        let parse = |t: &str| t.parse::<usize>().map_err(|_| format!("bad integer '{t}'"));
        if let Some((a, b)) = s.split_once("..") {
            let lo = parse(a)?;
            let hi = parse(b)?;
            if lo > hi {
                return Err(format!("empty range '{s}'"));
            }
            Ok(NRange { lo, hi })
        } else {
            let v = parse(s)?;
            Ok(NRange { lo: v, hi: v })
        }
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Per-prefix joint linear complexity of a sequence file.
    Profile {
        /// Path to a seqfile (header `q=.. m=.. n=..`, then m rows).
        input: std::path::PathBuf,
    },
    /// Exhaustive distribution census with expectation, deviation, and
    /// fitted bound constants, one block per n.
    Census {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
        /// Prefix length or inclusive range `a..b`.
        #[arg(long)]
        n: NRange,
        /// State-space cap; also settable via MSEQ_BUDGET.
        #[arg(long)]
        budget: Option<u64>,
        /// Worker threads (default: all cores). Output is identical for
        /// any value.
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "csv")]
        format: Format,
        /// Modulus override for extension fields, base-p digits low first.
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u8>>,
    },
    /// Partition/lattice-point tables: rho_H, M_H, (H+1)^m per (L, H).
    Polytope {
        #[arg(long)]
        m: usize,
        /// L value or inclusive range `a..b`.
        #[arg(long)]
        l: NRange,
        /// Also list the exact rational vertices of Omega_H^*.
        #[arg(long)]
        vertices: bool,
    },
    /// Seeded Monte Carlo estimate of the expected complexity.
    Montecarlo {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long, default_value = "csv")]
        format: Format,
        #[arg(long, value_delimiter = ',')]
        modulus: Option<Vec<u8>>,
    },
    /// Run a verification suite; nonzero exit on any violation.
    Verify {
        /// One of: lemma2, bounds, polytope, identity, oracle.
        suite: String,
        #[arg(long)]
        budget: Option<u64>,
        #[arg(long, default_value_t = 0x6d736571)]
        seed: u64,
    },
}

fn budget_from(flag: Option<u64>) -> u64 {
    flag.or_else(|| {
        std::env::var("MSEQ_BUDGET")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(DEFAULT_BUDGET)
}

fn make_field(q: usize, modulus: &Option<Vec<u8>>) -> Result<Field, Error> {
    match modulus {
        Some(m) => Field::with_modulus(q, m),
        None => Field::new(q),
    }
}

fn install_pool(jobs: Option<usize>) {
    if let Some(j) = jobs {
        // ignore failure if a global pool already exists
        let _ = rayon::ThreadPoolBuilder::new().num_threads(j).build_global();
    }
}

fn run() -> Result<i32, Error> {
    let cli = Cli::parse();
    let mut stdout = std::io::stdout().lock();
    match cli.cmd {
        Cmd::Profile { input } => {
            let text = std::fs::read_to_string(&input)?;
            let sf = seqfile::parse(&text)?;
            let field = Arc::new(make_field(sf.q, &sf.modulus)?);
            let t = Multisequence::from_rows(field, &sf.rows)?;
            let profile = jlc_profile(&t);
            let (l, witness) = jlc_fast(&t);
            write!(stdout, "{}", report::profile_report(&profile, l, &witness))?;
            Ok(0)
        }
        Cmd::Census {
            q,
            m,
            n,
            budget,
            jobs,
            format,
            modulus,
        } => {
            install_pool(jobs);
            let budget = budget_from(budget);
            let field = make_field(q, &modulus)?;
            for nv in n.lo..=n.hi {
                let dist = census::enumerate_distribution(&field, m, nv, budget)?;
                let block = CensusBlock {
                    exp: census::expectation(&dist),
                    dev: census::deviation_table(&dist),
                    bounds: census::fit_bounds(&dist),
                    dist,
                };
                write!(stdout, "{}", report::render_census(&block, format))?;
                if format == Format::Csv && nv < n.hi {
                    writeln!(stdout)?;
                }
            }
            Ok(0)
        }
        Cmd::Polytope { m, l, vertices } => {
            let mut rows = Vec::new();
            for lv in l.lo as u64..=l.hi as u64 {
                let hmax = (m as u64 - 1) * lv;
                for h in 0..=hmax {
                    rows.push(PolytopeRow {
                        m,
                        l: lv,
                        h,
                        rho: polytope::rho(m, lv, h),
                        points: polytope::count_lattice_points(m, lv, h),
                        bound: num_bigint::BigUint::from(h + 1).pow(m as u32).to_string(),
                        ok: polytope::lemma4_check(m, lv, h),
                    });
                }
            }
            write!(stdout, "{}", report::polytope_csv(&rows))?;
            if vertices {
                for lv in l.lo as u64..=l.hi as u64 {
                    if lv == 0 {
                        continue; // vertex construction undefined at L = 0
                    }
                    for h in 0..=(m as u64 - 1) * lv {
                        let vs = polytope::vertices(m, lv, h)?;
                        write!(stdout, "{}", report::vertices_csv(&vs))?;
                    }
                }
            }
            Ok(0)
        }
        Cmd::Montecarlo {
            q,
            m,
            n,
            samples,
            seed,
            jobs,
            format,
            modulus,
        } => {
            install_pool(jobs);
            let field = make_field(q, &modulus)?;
            let est = census::mc_estimate(&field, m, n, samples, seed);
            let out = match format {
                Format::Json => report::mc_json(&est),
                _ => report::mc_csv(&est),
            };
            write!(stdout, "{out}")?;
            Ok(0)
        }
        Cmd::Verify {
            suite,
            budget,
            seed,
        } => {
            let budget = budget_from(budget);
            let checks: Vec<(&str, Box<dyn FnOnce() -> Result<(), String>>)> = match suite.as_str() {
                "lemma2" => {
                    let cells = verify::run_grid(budget)?;
                    let cells2 = std::sync::Arc::new(cells);
                    let a = cells2.clone();
                    let b = cells2.clone();
                    vec![
                        ("mass", Box::new(move || verify::check_mass(&a)) as _),
                        ("lemma2", Box::new(move || verify::check_lemma2(&b)) as _),
                    ]
                }
                "bounds" => {
                    let cells = std::sync::Arc::new(verify::run_grid(budget)?);
                    let (a, b, c, d) = (cells.clone(), cells.clone(), cells.clone(), cells);
                    vec![
                        ("rueppel", Box::new(move || verify::check_rueppel(&a)) as _),
                        ("residual", Box::new(move || verify::check_residual_bounded(&b)) as _),
                        ("window", Box::new(move || verify::check_conjecture_window(&c)) as _),
                        ("zdelta", Box::new(move || verify::check_zdelta_constants(&d)) as _),
                    ]
                }
                "polytope" => vec![
                    ("polytope", Box::new(|| verify::check_polytope_suite(5, 25)) as _),
                    ("box", Box::new(|| verify::check_polytope_box(5, 25)) as _),
                ],
                "identity" => {
                    let cells = std::sync::Arc::new(verify::run_grid(budget)?);
                    vec![
                        (
                            "expectation-identity",
                            Box::new(move || verify::check_expectation_identity(&cells)) as _,
                        ),
                        (
                            "sum-identity",
                            Box::new(move || verify::check_sum_identity_random(seed, 100)) as _,
                        ),
                    ]
                }
                "oracle" => vec![(
                    "oracle",
                    Box::new(move || verify::check_oracle_equivalence(seed, 10_000)) as _,
                )],
                other => return Err(Error::UnknownSuite(other.to_string())),
            };
            let mut failed = false;
            for (name, check) in checks {
                match check() {
                    Ok(()) => writeln!(stdout, "{name}: PASS")?,
                    Err(msg) => {
                        failed = true;
                        writeln!(stdout, "{name}: FAIL\n  {msg}")?;
                    }
                }
            }
            Ok(if failed { 1 } else { 0 })
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
