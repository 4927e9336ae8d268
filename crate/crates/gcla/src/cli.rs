//! Command-line front end: generation, multiplication, verification,
//! benchmarks and file inspection.
//!
//! Exit codes: 0 ok, 1 verification failure, 2 invalid input, 3 budget
//! exceeded.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::bench;
use crate::bundle::{
    self, rlemat_from_text, verify_manifest, Manifest,
};
use crate::error::{Error, Result};
use crate::linalg::{self, CompressedMatrix, CompressedVector, Strategy};
use crate::oracle::{brute_3sum, TargetMode};
use crate::reductions::{
    self, balance_s, certify_mm, reduce_3sum_to_ip, reduce_3sum_to_mv, reduce_ksum_to_ip,
    reduce_mm, self_reduce, universe_reduce,
};
use crate::rle::RleSeq;
use crate::slp::Slp;
use crate::sum::{Form, SumInstance};

#[derive(Parser)]
#[command(name = "gcla", version, about = "Grammar-compressed linear algebra toolkit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Seed for all randomized steps (recorded in manifests).
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Maximum expansion length any command may materialize.
    #[arg(long = "budget-n", global = true, default_value_t = 1 << 26)]
    pub budget_n: u64,
    /// Maximum brute-force work (product of set sizes) for oracle calls.
    #[arg(long = "budget-brute", global = true, default_value_t = 100_000_000)]
    pub budget_brute: u64,
}

#[derive(Subcommand)]
pub enum Command {
    /// Generate a certified bundle (reduction outputs plus manifest).
    Gen {
        #[command(subcommand)]
        kind: GenKind,
    },
    /// Inner product of two compressed vectors, or matrix-vector entries
    /// from a bundle manifest; prints decimal integers, one per line.
    Multiply {
        /// Left vector file (slp v1 or rle v1).
        #[arg(long)]
        a: Option<PathBuf>,
        /// Right vector file (slp v1 or rle v1).
        #[arg(long)]
        b: Option<PathBuf>,
        /// Bundle manifest; ip bundles print the inner product, mv bundles
        /// print one entry per row.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value = "run-merge")]
        strategy: String,
    },
    /// Re-derive everything a bundle claims and report pass/fail per item.
    Verify { manifest: PathBuf },
    /// Benchmark a synthetic family over a size grid; writes CSV.
    Bench {
        /// alternating | ip3 | mv
        #[arg(long, default_value = "alternating")]
        family: String,
        /// Comma-separated size grid (dimension for alternating, m for the
        /// reduction families).
        #[arg(long, default_value = "1024,4096,16384,65536")]
        sizes: String,
        #[arg(long, default_value = "run-merge")]
        strategy: String,
        /// Repetitions per measurement (median is reported).
        #[arg(long, default_value_t = 5)]
        reps: usize,
        /// Output CSV path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Describe files: slp, rle, sum, rlemat or manifest.
    Info { files: Vec<PathBuf> },
}

#[derive(Subcommand)]
pub enum GenKind {
    /// 3SUM (a+b=c) to two compressed vectors.
    Ip3 {
        #[arg(long = "A", value_delimiter = ',', required = true)]
        a: Vec<i64>,
        #[arg(long = "B", value_delimiter = ',', required = true)]
        b: Vec<i64>,
        #[arg(long = "C", value_delimiter = ',', required = true)]
        c: Vec<i64>,
        #[arg(long = "U")]
        universe: i64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// kSUM to two compressed vectors; pass --set once per set.
    Ipk {
        /// One comma-separated set per occurrence, k >= 3 of them.
        #[arg(long = "set", required = true)]
        sets: Vec<String>,
        #[arg(long = "U")]
        universe: i64,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Batched target-3SUM instances to a row-compressed matrix and vector.
    Mv {
        /// sum v1 instance files sharing one target (repeatable).
        #[arg(long = "inst", required = true)]
        instances: Vec<PathBuf>,
        /// Group size; defaults to the m^(2/7) balance point.
        #[arg(long)]
        s: Option<usize>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Split a 3SUM instance into non-trivial signed subproblems.
    Selfred {
        #[arg(long = "inst")]
        instance: PathBuf,
        #[arg(long)]
        s: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// Random-prime universe reduction of a signed instance.
    Unired {
        #[arg(long = "inst")]
        instance: PathBuf,
        #[arg(long, default_value_t = 16)]
        trials: usize,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// The incompressible matrix-product construction at parameter ell.
    Mm {
        #[arg(long)]
        ell: u32,
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
}

/// Runs a parsed command line; returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Gen { kind } => {
            cmd_gen(kind, cli.seed, cli.budget_n, cli.budget_brute)?;
            Ok(0)
        }
        Command::Multiply { a, b, manifest, strategy } => {
            cmd_multiply(a, b, manifest, &strategy, cli.budget_n)?;
            Ok(0)
        }
        Command::Verify { manifest } => cmd_verify(&manifest, cli.budget_n, cli.budget_brute),
        Command::Bench { family, sizes, strategy, reps, out } => {
            cmd_bench(&family, &sizes, &strategy, reps, out, cli.seed, cli.budget_n)?;
            Ok(0)
        }
        Command::Info { files } => {
            for f in &files {
                cmd_info(f)?;
            }
            Ok(0)
        }
    }
}

fn parse_set(text: &str) -> Result<Vec<i64>> {
    text.split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad integer {t:?}"))))
        .collect()
}

fn read_instance(path: &Path) -> Result<SumInstance> {
    SumInstance::from_text(&fs::read_to_string(path)?)
}

fn cmd_gen(kind: GenKind, seed: u64, budget_n: u64, budget_brute: u64) -> Result<()> {
    match kind {
        GenKind::Ip3 { a, b, c, universe, out } => {
            let inst = SumInstance::new(vec![a, b, c], universe, None)?;
            let bundle = reduce_3sum_to_ip(&inst, budget_brute)?;
            let path = bundle::write_reduction_bundle(&out, &bundle, None)?;
            print_bundle_summary(&bundle, &path);
        }
        GenKind::Ipk { sets, universe, out } => {
            let sets: Vec<Vec<i64>> = sets.iter().map(|s| parse_set(s)).collect::<Result<_>>()?;
            let inst = SumInstance::new(sets, universe, None)?;
            let bundle = reduce_ksum_to_ip(&inst, budget_brute)?;
            let path = bundle::write_reduction_bundle(&out, &bundle, None)?;
            print_bundle_summary(&bundle, &path);
        }
        GenKind::Mv { instances, s, out } => {
            let instances: Vec<SumInstance> =
                instances.iter().map(|p| read_instance(p)).collect::<Result<_>>()?;
            let max_m = instances.iter().map(SumInstance::m).max().unwrap_or(1);
            let s = s.unwrap_or_else(|| balance_s(max_m as u64) as usize).max(max_m);
            let bundle = reduce_3sum_to_mv(&instances, s, budget_brute)?;
            let path = bundle::write_reduction_bundle(&out, &bundle, None)?;
            print_bundle_summary(&bundle, &path);
        }
        GenKind::Selfred { instance, s, out } => {
            let inst = read_instance(&instance)?;
            let subs = self_reduce(&inst, s)?;
            let direct = brute_3sum(&inst, TargetMode::Convolution, budget_brute)?.answer;
            let path = bundle::write_selfred_bundle(&out, &inst, s, &subs, direct)?;
            println!("kind selfred");
            println!("subproblems {}", subs.len());
            println!("expected 0 {direct}");
            println!("manifest {}", path.display());
        }
        GenKind::Unired { instance, trials, out } => {
            let inst = read_instance(&instance)?;
            let signed = if inst.form() == Form::Signed { inst } else { inst.to_signed() };
            let reduced = universe_reduce(&signed, trials, seed)?;
            let direct = brute_3sum(&signed, TargetMode::Target(0), budget_brute)?.answer;
            let path = bundle::write_unired_bundle(&out, &signed, &reduced, direct, seed)?;
            println!("kind unired");
            println!("trials {}", reduced.len());
            for (i, r) in reduced.iter().enumerate() {
                println!("prime {i} {}", r.prime);
            }
            println!("expected 0 {direct}");
            println!("manifest {}", path.display());
        }
        GenKind::Mm { ell, out } => {
            let mm = reduce_mm(ell)?;
            let certs = certify_mm(&mm, budget_n)?;
            if !certs.all_ok() {
                return Err(Error::InvalidInstance(format!(
                    "construction failed its own certificates: {certs:?}"
                )));
            }
            let path = bundle::write_mm_bundle(&out, &mm)?;
            println!("kind mm");
            println!("N {}", mm.n);
            println!("n a_strong {}", mm.strong_a_slp().size());
            println!("n b_strong {}", mm.strong_b_slp().size());
            println!("distinct-substrings {}", certs.distinct_substrings);
            println!("grammar-lower-bound {}", certs.c_grammar_lower_bound);
            println!("manifest {}", path.display());
        }
    }
    Ok(())
}

fn print_bundle_summary(bundle: &reductions::ReductionBundle, manifest: &Path) {
    println!("kind {}", bundle.kind.name());
    println!("N {}", bundle.dimension);
    for (i, v) in bundle.vectors.iter().enumerate() {
        println!("n vector_{i} {}", v.size());
    }
    if let Some(CompressedMatrix::RowWise { rows, .. }) = &bundle.matrix {
        for (i, r) in rows.iter().enumerate() {
            println!("n row_{i} {}", r.size());
        }
    }
    for (i, ans) in bundle.expected.iter().enumerate() {
        println!("expected {i} {ans}");
    }
    println!("manifest {}", manifest.display());
}

/// Reads a vector file, sniffing the header for the format.
fn read_vector(path: &Path) -> Result<CompressedVector> {
    let text = fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or_default();
    if header.starts_with("slp v1") {
        Ok(CompressedVector::Slp(Slp::from_text(&text)?))
    } else if header.starts_with("rle v1") {
        Ok(CompressedVector::Rle(RleSeq::from_text(&text)?))
    } else {
        Err(Error::Parse(format!("{}: not an slp or rle file", path.display())))
    }
}

fn cmd_multiply(
    a: Option<PathBuf>,
    b: Option<PathBuf>,
    manifest: Option<PathBuf>,
    strategy: &str,
    budget_n: u64,
) -> Result<()> {
    let strategy = Strategy::parse(strategy, budget_n)?;
    if let Some(path) = manifest {
        let dir = path.parent().unwrap_or_else(|| Path::new(".")).to_path_buf();
        let m = Manifest::read(&path)?;
        match m.kind.as_str() {
            "ip3" | "ipk" => {
                let vectors = m.items_with_role("vector");
                if vectors.len() != 2 {
                    return Err(Error::Parse("ip bundle needs two vectors".into()));
                }
                let a = read_vector(&dir.join(&vectors[0].file))?;
                let b = read_vector(&dir.join(&vectors[1].file))?;
                println!("{}", linalg::inner_product(&a, &b, strategy)?);
            }
            "mv" => {
                let cols = m.meta_u64("dim")?;
                let rows: Vec<Slp> = m
                    .items_with_role("row")
                    .iter()
                    .map(|i| Slp::from_text(&fs::read_to_string(dir.join(&i.file))?))
                    .collect::<Result<_>>()?;
                let vector_items = m.items_with_role("vector");
                let [vector_item] = vector_items.as_slice() else {
                    return Err(Error::Parse("mv bundle needs exactly one vector".into()));
                };
                let v = read_vector(&dir.join(&vector_item.file))?;
                let matrix = CompressedMatrix::RowWise { rows, cols };
                for entry in linalg::mat_vec(&matrix, &v, strategy)? {
                    println!("{entry}");
                }
            }
            other => {
                return Err(Error::Parse(format!("bundle kind {other:?} has nothing to multiply")))
            }
        }
        return Ok(());
    }
    let (Some(a), Some(b)) = (a, b) else {
        return Err(Error::Parse("multiply needs --a and --b, or --manifest".into()));
    };
    let a = read_vector(&a)?;
    let b = read_vector(&b)?;
    println!("{}", linalg::inner_product(&a, &b, strategy)?);
    Ok(())
}

fn cmd_verify(path: &Path, budget_n: u64, budget_brute: u64) -> Result<i32> {
    let report = verify_manifest(path, budget_n, budget_brute)?;
    for w in &report.warnings {
        println!("WARN {w}");
    }
    for line in &report.lines {
        if line.pass {
            println!("PASS {}", line.label);
        } else {
            println!("FAIL {}: {}", line.label, line.detail);
        }
    }
    if report.passed() {
        println!("verify: all {} checks passed", report.lines.len());
        Ok(0)
    } else {
        let failed = report.lines.iter().filter(|l| !l.pass).count();
        println!("verify: {failed} of {} checks failed", report.lines.len());
        Ok(1)
    }
}

fn cmd_bench(
    family: &str,
    sizes: &str,
    strategy_name: &str,
    reps: usize,
    out: Option<PathBuf>,
    seed: u64,
    budget_n: u64,
) -> Result<()> {
    let sizes: Vec<u64> = sizes
        .split(',')
        .filter(|t| !t.is_empty())
        .map(|t| t.trim().parse().map_err(|_| Error::Parse(format!("bad size {t:?}"))))
        .collect::<Result<_>>()?;
    let strategy = Strategy::parse(strategy_name, budget_n)?;
    let rows = bench::run_family(family, &sizes, strategy, strategy_name, reps, seed, budget_n)?;
    let csv = bench::rows_to_csv(&rows);
    match out {
        Some(path) => fs::write(path, csv)?,
        None => print!("{csv}"),
    }
    Ok(())
}

fn cmd_info(path: &Path) -> Result<()> {
    let text = fs::read_to_string(path)?;
    let header = text.lines().next().unwrap_or_default().to_string();
    print!("{}: ", path.display());
    if header.starts_with("slp v1") {
        let g = Slp::from_text(&text)?;
        println!(
            "slp, {} rules, N={}, depth={}, start={}",
            g.size(),
            g.expansion_length(),
            g.depth(),
            g.start()
        );
    } else if header.starts_with("rle v1") {
        let r = RleSeq::from_text(&text)?;
        println!("rle, {} runs, N={}, ones={}", r.n_rle(), r.total_len(), r.ones());
    } else if header.starts_with("sum v1") {
        let s = SumInstance::from_text(&text)?;
        let form = match s.form() {
            Form::Positive => "positive",
            Form::Signed => "signed",
        };
        match s.target() {
            Some(t) => println!(
                "sum instance, k={}, m={}, U={}, t={t}, {form}",
                s.k(),
                s.m(),
                s.universe()
            ),
            None => {
                println!("sum instance, k={}, m={}, U={}, {form}", s.k(), s.m(), s.universe())
            }
        }
    } else if header.starts_with("rlemat v1") {
        let (rows, cols) = rlemat_from_text(&text)?;
        let max_runs = rows.iter().map(RleSeq::n_rle).max().unwrap_or(0);
        println!("rlemat, {} rows x {cols} cols, max {} runs per row", rows.len(), max_runs);
    } else if header.starts_with("manifest v1") {
        let m = Manifest::from_text(&text)?;
        println!(
            "bundle manifest, kind={}, {} items, {} expected answers",
            m.kind,
            m.items.len(),
            m.expected.len()
        );
    } else {
        println!("unrecognized format ({header:?})");
    }
    Ok(())
}
