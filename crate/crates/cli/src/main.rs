use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use sagl::bounds::{family_count_bound, scheme_exponent, warren_region_bound};
use sagl::family::{Family, ReducedPredicate};
use sagl::harness::{
    decode_file_bytes, decode_sections, encode_constraint, gated_instance, prepare_family,
    read_points, run_roundtrip, run_scaling, verify_instance, write_points, BuiltinFamily,
    InstanceSpec, RunParams,
};
use sagl::partition::{BalanceMode, HierarchyParams};
use sagl::rational;
use sagl::Error;
use serde::Serialize;

mod config;

#[derive(Parser)]
#[command(
    name = "sagl",
    version,
    about = "Adjacency labels for semi-algebraic graphs"
)]
struct Cli {
    #[command(flatten)]
    opts: GlobalOpts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Debug, Default)]
struct GlobalOpts {
    /// Key=value config file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Load factor of the relaxed balance bound.
    #[arg(long, global = true)]
    beta: Option<f64>,
    /// Fresh attempts per hierarchy node before giving up.
    #[arg(long, global = true)]
    max_retries: Option<u32>,
    /// Require the tight cell loads at every split.
    #[arg(long, global = true)]
    strict_balance: bool,
    /// Fail instead of resampling a generated instance that is not in general position.
    #[arg(long, global = true)]
    no_resample: bool,
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
}

/// Where the family comes from: a spec file or a built-in name.
#[derive(Args, Clone, Debug)]
struct FamilyArgs {
    /// Family-spec document.
    #[arg(long, conflicts_with = "builtin")]
    family: Option<PathBuf>,
    /// Built-in family: unit-disk, disk or dot-product.
    #[arg(long, default_value = "unit-disk")]
    builtin: String,
    /// Ambient dimension of dot-product.
    #[arg(long, default_value_t = 2)]
    dim: usize,
    /// Threshold t of dot-product (x . y >= t).
    #[arg(long, default_value_t = 0)]
    threshold: i64,
}

impl FamilyArgs {
    fn spec(&self, n: usize, seed: u64) -> InstanceSpec {
        InstanceSpec {
            family: self.builtin.clone(),
            n,
            seed,
            dim: self.dim,
            threshold: self.threshold,
        }
    }

    fn load(&self) -> Result<Family, Error> {
        match &self.family {
            Some(path) => Family::parse(&fs::read_to_string(path)?),
            None => Ok(BuiltinFamily::from_spec(&self.spec(0, 0))?.family()),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Reduce a family to its diagonal form and report Q and the signature.
    Lift {
        #[command(flatten)]
        family: FamilyArgs,
    },
    /// Generate a random instance of a built-in family as a points file.
    Gen {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, short)]
        n: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build labels for a points file, or for a generated instance with --n.
    Encode {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, conflicts_with = "n")]
        points: Option<PathBuf>,
        #[arg(long, short)]
        n: Option<usize>,
        #[arg(long, short)]
        output: PathBuf,
        /// Write the hierarchy audit as JSON.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Answer adjacency queries from a label file alone.
    Decode {
        #[arg(long)]
        labels: PathBuf,
        /// Vertex pairs as `i,j`.
        #[arg(long = "pair", value_parser = parse_pair)]
        pairs: Vec<(usize, usize)>,
        /// Print the whole adjacency matrix, one row of 0/1 per vertex.
        #[arg(long)]
        all: bool,
    },
    /// Full round trip with an exhaustive pair check.
    Verify {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, conflicts_with = "n")]
        points: Option<PathBuf>,
        #[arg(long, short)]
        n: Option<usize>,
        /// Re-derive every certificate from the sign matrix.
        #[arg(long)]
        audit: bool,
        /// Check a hierarchy audit file written by `encode --audit`.
        #[arg(long)]
        audit_file: Option<PathBuf>,
    },
    /// Round trips over a grid of sizes with a fitted growth exponent.
    Bench {
        #[command(flatten)]
        family: FamilyArgs,
        #[arg(long, value_delimiter = ',', default_values_t = [64usize, 256, 1024, 4096])]
        ns: Vec<usize>,
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Counting bounds and the scheme exponent.
    Bounds {
        #[command(subcommand)]
        which: BoundsCommand,
    },
}

#[derive(Subcommand)]
enum BoundsCommand {
    /// (8edk/l)^l
    Warren {
        #[arg(long)]
        k: u64,
        #[arg(long)]
        l: u64,
        #[arg(long)]
        d: u64,
    },
    /// (4edpn/dimS)^(n dimS)
    Family {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        dim_s: u64,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        d: u64,
    },
    /// log2(2^Q - 1) / Q
    Exponent {
        #[arg(long)]
        q: u32,
    },
}

fn parse_pair(s: &str) -> Result<(usize, usize), String> {
    let (a, b) = s.split_once(',').ok_or("expected i,j")?;
    Ok((
        a.trim().parse().map_err(|_| format!("bad vertex {a:?}"))?,
        b.trim().parse().map_err(|_| format!("bad vertex {b:?}"))?,
    ))
}

struct Settings {
    seed: u64,
    params: RunParams,
    json: bool,
}

fn settings(opts: &GlobalOpts) -> Result<Settings, Error> {
    let file = match &opts.config {
        Some(p) => config::Config::load(p)?,
        None => config::Config::default(),
    };
    let beta = opts.beta.or(file.beta).unwrap_or(2.0);
    if !(beta.is_finite() && beta >= 1.0) {
        return Err(Error::Domain(format!(
            "beta must be at least 1, got {beta}"
        )));
    }
    let balance = if opts.strict_balance || file.strict_balance.unwrap_or(false) {
        BalanceMode::Strict
    } else {
        BalanceMode::Relaxed { beta }
    };
    let seed = opts.seed.or(file.seed).unwrap_or(0);
    let no_resample = opts.no_resample || file.no_resample.unwrap_or(false);
    Ok(Settings {
        seed,
        json: opts.json,
        params: RunParams {
            hierarchy: HierarchyParams {
                seed,
                balance,
                max_retries: opts.max_retries.or(file.max_retries).unwrap_or(32),
                geometric_audit: file.geometric_audit.unwrap_or(false),
            },
            max_resamples: if no_resample {
                0
            } else {
                file.max_resamples.unwrap_or(16)
            },
            audit: file.audit.unwrap_or(false),
            baseline: true,
        },
    })
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::GeneralPosition(..) => 2,
        Error::ProviderExhausted { .. } => 3,
        Error::Mismatch { .. } => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Error> {
    println!("{}", serde_json::to_string_pretty(v)?);
    Ok(())
}

/// Points from a file, or a generated instance passed through the gate.
fn load_instance(
    family: &FamilyArgs,
    points: &Option<PathBuf>,
    n: Option<usize>,
    s: &Settings,
) -> Result<
    (
        Family,
        Vec<Vec<rational::Rational>>,
        Vec<sagl::harness::PreparedConstraint>,
    ),
    Error,
> {
    match (points, n) {
        (Some(path), _) => {
            let fam = family.load()?;
            let pts = read_points(fs::File::open(path)?)?;
            let prepared = prepare_family(&fam, &pts)?;
            Ok((fam, pts, prepared))
        }
        (None, Some(n)) => {
            if family.family.is_some() {
                return Err(Error::Domain(
                    "generated instances need a built-in family".into(),
                ));
            }
            let (fam, pts, prepared, resamples) =
                gated_instance(&family.spec(n, s.seed), s.params.max_resamples)?;
            if resamples > 0 {
                eprintln!("resampled {resamples} time(s) to reach general position");
            }
            Ok((fam, pts, prepared))
        }
        (None, None) => Err(Error::Domain("pass --points FILE or --n N".into())),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Error> {
    let s = settings(&cli.opts)?;
    match cli.command {
        Command::Lift { family } => lift(&family.load()?, s.json)?,
        Command::Gen { family, n, output } => {
            let pts = sagl::harness::generate_instance(&family.spec(n, s.seed))?;
            match output {
                Some(p) => write_points(fs::File::create(p)?, &pts)?,
                None => write_points(io::stdout().lock(), &pts)?,
            }
        }
        Command::Encode {
            family,
            points,
            n,
            output,
            audit,
        } => {
            let (_, pts, prepared) = load_instance(&family, &points, n, &s)?;
            let mut out = BufWriter::new(fs::File::create(&output)?);
            let mut audits = Vec::new();
            for c in prepared {
                let enc = encode_constraint(c, s.params.hierarchy)?;
                sagl::labeling::write_label_section(&mut out, &enc.labels)?;
                audits.push(enc.hierarchy.audit());
                let st = &enc.stats;
                if s.json {
                    print_json(st)?;
                } else {
                    println!(
                        "n={} Q={} depth={} max_bits={} mean_bits={:.2} trivial={} format_bound={:.0}",
                        pts.len(),
                        st.q,
                        st.depth,
                        st.max_bits,
                        st.mean_bits,
                        st.trivial_bound,
                        st.adjusted_bound
                    );
                }
            }
            out.flush()?;
            if let Some(path) = audit {
                fs::write(path, serde_json::to_string(&audits)?)?;
            }
        }
        Command::Decode { labels, pairs, all } => {
            let sections = decode_file_bytes(&fs::read(&labels)?)?;
            let n = sections[0].len();
            let mut out = BufWriter::new(io::stdout().lock());
            for (i, j) in pairs {
                if i >= n || j >= n {
                    return Err(Error::Domain(format!("vertex out of range 0..{n}")));
                }
                writeln!(out, "{i} {j} {}", decode_sections(&sections, i, j)? as u8)?;
            }
            if all {
                for i in 0..n {
                    let row: String = (0..n)
                        .map(|j| {
                            Ok(if i == j {
                                '-'
                            } else if decode_sections(&sections, i, j)? {
                                '1'
                            } else {
                                '0'
                            })
                        })
                        .collect::<Result<_, Error>>()?;
                    writeln!(out, "{row}")?;
                }
            }
            out.flush()?;
        }
        Command::Verify {
            family,
            points,
            n,
            audit,
            audit_file,
        } => {
            if let Some(path) = audit_file {
                return check_audit_file(&path);
            }
            let params = RunParams {
                audit: audit || s.params.audit,
                ..s.params
            };
            let report = match (&points, n) {
                (None, Some(n)) if family.family.is_none() => {
                    run_roundtrip(&family.spec(n, s.seed), &params)?
                }
                _ => {
                    let (fam, pts, prepared) = load_instance(&family, &points, n, &s)?;
                    verify_instance(&fam, &pts, prepared, &params)?
                }
            };
            if s.json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
            if report.mismatches > 0 {
                return Err(Error::Mismatch {
                    count: report.mismatches,
                });
            }
            if !report.success() {
                return Ok(ExitCode::from(4));
            }
        }
        Command::Bench { family, ns, csv } => {
            let report = run_scaling(&family.spec(0, s.seed), &ns, &s.params)?;
            if let Some(p) = csv {
                fs::write(p, report.to_csv()?)?;
            }
            if s.json {
                print_json(&report)?;
            } else {
                print!("{}", report.to_text());
            }
        }
        Command::Bounds { which } => bounds(which, s.json)?,
    }
    Ok(ExitCode::SUCCESS)
}

fn lift(family: &Family, json: bool) -> Result<(), Error> {
    let mut reports = Vec::new();
    for c in &family.constraints {
        let (pred, complement) = c.encoded_predicate();
        let r = ReducedPredicate::new(&pred)?;
        reports.push(serde_json::json!({
            "q": pred.q(),
            "degree": pred.degree(),
            "basis_size": r.basis.len(),
            "reduced_dim": r.dim(),
            "signature": r.signature(),
            "complement": complement,
            "diagonal": r.form.diagonal.iter().map(rational::to_string).collect::<Vec<_>>(),
            "predicate": sagl::family::PredicateJson::from_constraint(c),
        }));
    }
    if json {
        print_json(&reports)?;
    } else {
        for r in &reports {
            println!(
                "q={} d={} basis={} Q={} signature=({}, {}) complement={}",
                r["q"],
                r["degree"],
                r["basis_size"],
                r["reduced_dim"],
                r["signature"][0],
                r["signature"][1],
                r["complement"]
            );
        }
    }
    Ok(())
}

fn bounds(which: BoundsCommand, json: bool) -> Result<(), Error> {
    match which {
        BoundsCommand::Warren { k, l, d } => {
            let v = warren_region_bound(k, l, d)?;
            if json {
                print_json(&v)?;
            } else {
                println!("{} (log2 {:.6})", v.scientific, v.log2);
            }
        }
        BoundsCommand::Family { n, dim_s, p, d } => {
            let v = family_count_bound(n, dim_s, p, d)?;
            if json {
                print_json(&v)?;
            } else {
                println!(
                    "{} (log2 {:.6}); c = {:.6}",
                    v.value.scientific, v.value.log2, v.c
                );
            }
        }
        BoundsCommand::Exponent { q } => {
            if q == 0 {
                return Err(Error::Domain("Q must be at least 1".into()));
            }
            let e = scheme_exponent(q);
            if json {
                print_json(&serde_json::json!({ "q": q, "exponent": e }))?;
            } else {
                println!("{e:.6}");
            }
        }
    }
    Ok(())
}

fn check_audit_file(path: &Path) -> Result<ExitCode, Error> {
    let audits: Vec<sagl::partition::HierarchyAudit> =
        serde_json::from_str(&fs::read_to_string(path)?)?;
    let mut ok = true;
    for (i, a) in audits.iter().enumerate() {
        let problems = a.check();
        println!(
            "section {i}: {} nodes, depth {} (bound {}): {}",
            a.nodes.len(),
            a.depth,
            a.depth_bound,
            if problems.is_empty() { "ok" } else { "FAILED" }
        );
        for p in &problems {
            println!("  {p}");
        }
        ok &= problems.is_empty();
    }
    Ok(if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}
