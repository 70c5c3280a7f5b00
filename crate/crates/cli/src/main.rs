//! `egyptfrac` command-line frontend.
//!
//! Exit status: 0 success, 1 verification divergence, 2 argument error,
//! 3 resource limit.

mod sequences;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::Serialize;

use egyptfrac::classify::{classify_all, efp_classify, trajectory};
use egyptfrac::enumerate::{
    build_efp_tree, build_murthy_tree, construct, enumerate_murthy, enumerate_pp_giuga,
    enumerate_pp_pseudoperfect, extended_fermat_primes, scan_a003306, scan_strict_giuga,
    Construction, GenTree,
};
use egyptfrac::oeis::{compare_sequences, export_dot, read_bfile_path, write_bfile, Comparison, SequenceFile};
use egyptfrac::{Error, SpfSieve};

use sequences::SequenceId;

const DEFAULT_LIMIT: u64 = 10_000_000;

#[derive(Parser, Debug)]
#[command(name = "egyptfrac", version, about = "Prime power pseudoperfect and Giuga numbers, divisor chains and extended Fermat primes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print every predicate verdict for n.
    Classify {
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Print the orbit n, f(n), ..., 1.
    Trajectory {
        n: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// List the members of a class up to a bound.
    Enumerate {
        #[arg(value_enum)]
        class: Class,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Build a generation tree.
    Tree {
        #[arg(value_enum)]
        kind: TreeChoice,
        /// Value bound (decimal).
        #[arg(long, default_value_t = BigUint::from(DEFAULT_LIMIT))]
        limit: BigUint,
        /// Largest exponent k tried for extended Fermat children.
        #[arg(long)]
        max_exp: Option<u32>,
        /// Deepest level kept.
        #[arg(long)]
        max_depth: Option<u32>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Extended Fermat level of one prime, or the list of all up to --limit.
    Efp {
        p: Option<BigUint>,
        #[arg(long, conflicts_with = "p")]
        limit: Option<BigUint>,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Build a new term from a known one.
    Construct {
        #[arg(long, value_enum)]
        variant: Variant,
        #[arg(long)]
        n: u64,
        #[arg(long, default_value_t = 1)]
        k: u32,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Finite evidence scans.
    Scan {
        #[arg(value_enum)]
        which: ScanChoice,
        /// Value bound for strict-giuga, bound on k for a003306.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Compare a computed sequence with a reference b-file.
    Verify {
        #[arg(long, value_enum)]
        sequence: SequenceId,
        #[arg(long)]
        bfile: PathBuf,
        #[arg(long, default_value_t = DEFAULT_LIMIT)]
        limit: u64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Plain,
    Bfile,
    Dot,
    Record,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Class {
    /// Prime power pseudoperfect numbers.
    Pppn,
    /// Prime power Giuga numbers.
    Ppgiuga,
    /// Divisor-chain numbers (1 excluded).
    Murthy,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TreeChoice {
    Murthy,
    Efp,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ScanChoice {
    StrictGiuga,
    A003306,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Variant {
    /// n / p for a divisor-chain n, p its largest prime.
    IDivide,
    /// n p for a divisor-chain n, p its largest prime.
    #[value(alias = "i")]
    IMultiply,
    /// n (n + 1)^k for a divisor-chain n with n + 1 prime.
    Ii,
    /// n (n + 1)^k for a prime power pseudoperfect n with n + 1 prime.
    Iii,
    /// n (n - 1) for a prime power pseudoperfect n with n - 1 prime.
    Iv,
}

impl From<Variant> for Construction {
    fn from(v: Variant) -> Self {
        match v {
            Variant::IDivide => Construction::DivideLargestPrime,
            Variant::IMultiply => Construction::TimesLargestPrime,
            Variant::Ii => Construction::ChainTimesSuccessorPower,
            Variant::Iii => Construction::PseudoperfectTimesSuccessorPower,
            Variant::Iv => Construction::PseudoperfectTimesPredecessor,
        }
    }
}

enum Failure {
    Lib(Error),
    Usage(String),
    Diverged(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Lib(Error::Io(e))
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    let result = run(cli.command, &mut out);
    let flushed = out.flush();
    match (result, flushed) {
        (Ok(()), Ok(())) => ExitCode::SUCCESS,
        (Ok(()), Err(e)) => fail(2, &format!("writing output: {e}")),
        (Err(Failure::Diverged(msg)), _) => fail(1, &msg),
        (Err(Failure::Usage(msg)), _) => fail(2, &msg),
        (Err(Failure::Lib(e)), _) => {
            let code = if matches!(e, Error::ResourceLimit(_)) { 3 } else { 2 };
            fail(code, &e.to_string())
        }
    }
}

fn fail(code: u8, msg: &str) -> ExitCode {
    eprintln!("egyptfrac: {msg}");
    ExitCode::from(code)
}

fn require_format(format: Format, allowed: &[Format]) -> CliResult {
    if allowed.contains(&format) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("format {format:?} is not available here").to_lowercase()))
    }
}

fn record<T: Serialize>(out: &mut dyn Write, value: &T) -> CliResult {
    serde_json::to_writer(&mut *out, value).map_err(|e| Failure::Usage(e.to_string()))?;
    writeln!(out)?;
    Ok(())
}

fn with_output(path: Option<PathBuf>, out: &mut dyn Write, body: impl FnOnce(&mut dyn Write) -> CliResult) -> CliResult {
    match path {
        Some(p) => {
            let mut file = BufWriter::new(File::create(p)?);
            body(&mut file)?;
            file.flush()?;
            Ok(())
        }
        None => body(out),
    }
}

fn run(command: Command, out: &mut dyn Write) -> CliResult {
    match command {
        Command::Classify { n, format } => {
            require_format(format, &[Format::Plain, Format::Record])?;
            let c = classify_all(n)?;
            if format == Format::Record {
                return record(out, &c);
            }
            let opt = |v: Option<bool>| v.map_or("unknown".to_owned(), |b| b.to_string());
            writeln!(out, "n: {}", c.n)?;
            writeln!(out, "factorization: {}", c.factorization)?;
            writeln!(out, "pseudoperfect: {}", opt(c.pseudoperfect))?;
            writeln!(out, "primary_pseudoperfect: {}", c.primary_pseudoperfect)?;
            writeln!(out, "giuga: {}", c.giuga)?;
            writeln!(out, "pp_pseudoperfect: {}", c.pp_pseudoperfect)?;
            writeln!(out, "pp_giuga: {}", c.pp_giuga)?;
            writeln!(out, "murthy: {}", c.murthy)?;
            match c.efp_level {
                Some(l) => writeln!(out, "efp_level: {l}")?,
                None => writeln!(out, "efp_level: none")?,
            }
            Ok(())
        }
        Command::Trajectory { n, format } => {
            require_format(format, &[Format::Plain, Format::Record])?;
            let t = trajectory(n)?;
            if format == Format::Record {
                return record(out, &t);
            }
            writeln!(out, "{t}")?;
            Ok(())
        }
        Command::Enumerate { class, limit, format, output } => {
            require_format(format, &[Format::Plain, Format::Bfile, Format::Record])?;
            let sieve = SpfSieve::new(limit)?;
            with_output(output, out, |w| enumerate(class, &sieve, limit, format, w))
        }
        Command::Tree { kind, limit, max_exp, max_depth, format, output } => {
            require_format(format, &[Format::Plain, Format::Dot, Format::Record])?;
            let tree = match kind {
                TreeChoice::Murthy => build_murthy_tree(&limit, max_depth)?,
                TreeChoice::Efp => {
                    let exps = max_exp.unwrap_or_else(|| limit.bits().max(1) as u32);
                    let t = build_efp_tree(&limit, exps)?;
                    match max_depth {
                        Some(d) => t.truncated(d),
                        None => t,
                    }
                }
            };
            with_output(output, out, |w| print_tree(&tree, format, w))
        }
        Command::Efp { p, limit, format } => {
            require_format(format, &[Format::Plain, Format::Record])?;
            match (p, limit) {
                (Some(p), None) => {
                    let v = efp_classify(&p, None)?;
                    if format == Format::Record {
                        #[derive(Serialize)]
                        struct Row {
                            p: String,
                            primality: String,
                            level: Option<u32>,
                        }
                        return record(out, &Row { p: p.to_string(), primality: v.primality.to_string(), level: v.level });
                    }
                    match v.level {
                        Some(l) => writeln!(out, "{p} level {l} ({})", v.primality)?,
                        None => writeln!(out, "{p} not an extended Fermat prime ({})", v.primality)?,
                    }
                    Ok(())
                }
                (None, Some(limit)) => {
                    for e in extended_fermat_primes(&limit)? {
                        if format == Format::Record {
                            #[derive(Serialize)]
                            struct Row {
                                p: String,
                                p_minus_1: egyptfrac::Factorization,
                                level: u32,
                            }
                            record(out, &Row { p: e.prime.to_string(), p_minus_1: e.predecessor, level: e.level })?;
                        } else {
                            writeln!(out, "{}\t{}\t{}", e.prime, e.predecessor, e.level)?;
                        }
                    }
                    Ok(())
                }
                _ => Err(Failure::Usage("efp needs either <P> or --limit".into())),
            }
        }
        Command::Construct { variant, n, k, format } => {
            require_format(format, &[Format::Plain, Format::Record])?;
            let c = construct(n, variant.into(), k)?;
            let holds = c.verify();
            if format == Format::Record {
                #[derive(Serialize)]
                struct Row {
                    value: String,
                    factorization: egyptfrac::Factorization,
                    class: egyptfrac::enumerate::TargetClass,
                    holds: bool,
                }
                return record(out, &Row {
                    value: c.value().to_string(),
                    class: c.construction.target(),
                    factorization: c.factorization,
                    holds,
                });
            }
            let class = serde_json::to_value(c.construction.target()).ok();
            let class = class.as_ref().and_then(|v| v.as_str()).unwrap_or("?");
            writeln!(out, "{} = {} ({class}: {holds})", c.value(), c.factorization)?;
            Ok(())
        }
        Command::Scan { which, limit } => match which {
            ScanChoice::StrictGiuga => {
                let limit = limit.unwrap_or(DEFAULT_LIMIT);
                let sieve = SpfSieve::new(limit.max(2))?;
                let found = scan_strict_giuga(&sieve, limit)?;
                for (n, e) in &found {
                    writeln!(out, "{n} {e}")?;
                }
                eprintln!("{} prime power Giuga numbers up to {limit} with excess other than 1", found.len());
                Ok(())
            }
            ScanChoice::A003306 => {
                let k = limit.unwrap_or(100);
                let k = u32::try_from(k).map_err(|_| Failure::Usage(format!("k limit {k} too large")))?;
                for k in scan_a003306(k) {
                    writeln!(out, "{k}")?;
                }
                Ok(())
            }
        },
        Command::Verify { sequence, bfile, limit } => {
            let reference = read_bfile_path(sequence.tag(), &bfile)?;
            let computed = sequences::compute(sequence, limit)?;
            match compare_sequences(&computed, &reference)? {
                Comparison::Match { first, last } => {
                    writeln!(out, "{} matches {} at indices {first}..={last}", sequence.tag(), bfile.display())?;
                    Ok(())
                }
                Comparison::Divergence { index, computed, reference } => Err(Failure::Diverged(format!(
                    "{} diverges at index {index}: computed {computed}, reference {reference}",
                    sequence.tag()
                ))),
            }
        }
    }
}

fn enumerate(class: Class, sieve: &SpfSieve, limit: u64, format: Format, out: &mut dyn Write) -> CliResult {
    match class {
        Class::Ppgiuga => {
            let rows = enumerate_pp_giuga(sieve, limit)?;
            match format {
                Format::Bfile => write_bfile(&SequenceFile::from_u64s("A286497", rows.iter().map(|r| r.0)), out)?,
                Format::Record => {
                    #[derive(Serialize)]
                    struct Row<'a> {
                        n: u64,
                        factorization: &'a egyptfrac::Factorization,
                    }
                    for (n, f) in &rows {
                        record(out, &Row { n: *n, factorization: f })?;
                    }
                }
                _ => {
                    for (n, f) in &rows {
                        writeln!(out, "{n} = {f}")?;
                    }
                }
            }
        }
        Class::Pppn | Class::Murthy => {
            let (tag, terms) = match class {
                Class::Pppn => ("A283423", enumerate_pp_pseudoperfect(sieve, limit)?),
                _ => ("A073935", enumerate_murthy(sieve, limit)?),
            };
            match format {
                Format::Bfile => write_bfile(&SequenceFile::from_u64s(tag, terms), out)?,
                Format::Record => {
                    #[derive(Serialize)]
                    struct Row {
                        n: u64,
                    }
                    for n in terms {
                        record(out, &Row { n })?;
                    }
                }
                _ => {
                    for n in terms {
                        writeln!(out, "{n}")?;
                    }
                }
            }
        }
    }
    Ok(())
}

fn print_tree(tree: &GenTree, format: Format, out: &mut dyn Write) -> CliResult {
    match format {
        Format::Dot => export_dot(tree, out)?,
        Format::Record => {
            #[derive(Serialize)]
            struct Row {
                index: usize,
                value: String,
                factored: String,
                parent: Option<usize>,
                edge: Option<egyptfrac::enumerate::EdgeLabel>,
                level: u32,
            }
            for (index, n) in tree.nodes().iter().enumerate() {
                record(out, &Row {
                    index,
                    value: n.value.to_string(),
                    factored: n.form.to_string(),
                    parent: n.parent,
                    edge: n.edge,
                    level: n.level,
                })?;
            }
        }
        _ => {
            for n in tree.nodes() {
                match (n.parent, n.edge) {
                    (Some(p), Some(edge)) => {
                        writeln!(out, "{} {} <- {} {edge}", n.level, n.value, tree.nodes()[p].value)?
                    }
                    _ => writeln!(out, "{} {}", n.level, n.value)?,
                }
            }
        }
    }
    Ok(())
}
