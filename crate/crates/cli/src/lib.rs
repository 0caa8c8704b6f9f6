//! Argument parsing and subcommand dispatch for the `collatz` binary.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use collatz_core::{diophantine, ladder, map, oeis, tree, triangle, verify, Error, ParityVector, StoppingTime};
use num_bigint::BigUint;

pub const EXIT_OK: i32 = 0;
pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "collatz", version, about = "Stopping-time residue classes of the 3x+1 map")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TextOrCsv {
    Text,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangleFormat {
    Table,
    Csv,
    Bfile,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TriangleSequence {
    #[value(name = "A100982")]
    A100982,
    #[value(name = "A076227")]
    A076227,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VsetFormat {
    Text,
    Csv,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SieveFormat {
    Table,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SequenceFormat {
    Text,
    Bfile,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stopping time of X by direct iteration.
    Sigma {
        x: BigUint,
        /// Give up after this many steps.
        #[arg(long, default_value_t = 100_000)]
        cap: u32,
    },
    /// n, d(n), kappa(n) and sigma_n for n = 1..=N.
    Ladder {
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = TextOrCsv::Text)]
        format: TextOrCsv,
    },
    /// The count triangle R(k, n) with row sums w(k) and column sums z(n).
    Triangle {
        #[arg(long)]
        max_n: u32,
        #[arg(long, value_enum, default_value_t = TriangleFormat::Table)]
        format: TriangleFormat,
        /// Sequence emitted by `--format bfile`.
        #[arg(long, value_enum, ignore_case = true, default_value_t = TriangleSequence::A100982)]
        sequence: TriangleSequence,
        /// Index of the first b-file line.
        #[arg(long, allow_negative_numbers = true)]
        offset: Option<i64>,
    },
    /// Parity vectors of V(N) in generation order as `bits h p [x y]`.
    Vset {
        n: u32,
        /// Append the solution x and stopping term y.
        #[arg(long)]
        with_solutions: bool,
        #[arg(long, value_enum, default_value_t = VsetFormat::Text)]
        format: VsetFormat,
        /// Largest tree rendered by `--format dot`.
        #[arg(long, default_value_t = 10_000)]
        max_nodes: u64,
    },
    /// Candidate tuples for level N in lexicographic order with solutions.
    Tuples { n: u32 },
    /// Solve one parity vector for its residue class.
    Solve {
        /// Comma separated bits, e.g. 1,1,0,1,1
        #[arg(long)]
        vector: ParityVector,
    },
    /// Residues modulo 2^sigma_N with stopping time sigma_N.
    Residues {
        #[arg(long)]
        sigma_index: u32,
    },
    /// Surviving residues at each depth up to K.
    Sieve {
        #[arg(long)]
        k: u32,
        #[arg(long, value_enum, default_value_t = SieveFormat::Table)]
        format: SieveFormat,
        /// Refuse when more than this many residues survive at depth K.
        #[arg(long, default_value_t = verify::DEFAULT_SIEVE_LIMIT)]
        limit: u64,
    },
    /// Simulate every x in [2, 2^B) and compare with the residue classes.
    Verify {
        #[arg(long)]
        max_bits: u32,
        #[arg(long)]
        n_max: u32,
        /// Worker threads; defaults to all cores.
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// First terms of an integer sequence.
    Oeis {
        id: String,
        #[arg(long, default_value_t = 10)]
        terms: usize,
        #[arg(long, value_enum, default_value_t = SequenceFormat::Text)]
        format: SequenceFormat,
        /// Index of the first b-file line.
        #[arg(long, allow_negative_numbers = true)]
        offset: Option<i64>,
    },
}

enum Failure {
    Usage(String),
    Mismatch(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

/// Parses `args` (program name first), writes to `out` and `err`, and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut impl Write, err: &mut impl Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
        Err(e) => {
            let text = e.to_string();
            let line = text.lines().next().unwrap_or("error: invalid arguments");
            let _ = writeln!(err, "{line}");
            return EXIT_USAGE;
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            EXIT_OK
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Mismatch(text)) => {
            let _ = out.write_all(text.as_bytes());
            let _ = writeln!(err, "error: verification found mismatches");
            EXIT_MISMATCH
        }
    }
}

fn dispatch(command: Command) -> Outcome {
    match command {
        Command::Sigma { x, cap } => sigma(&x, cap),
        Command::Ladder { max_n, format } => Ok(ladder_rows(max_n, format)),
        Command::Triangle {
            max_n,
            format,
            sequence,
            offset,
        } => triangle_cmd(max_n, format, sequence, offset),
        Command::Vset {
            n,
            with_solutions,
            format,
            max_nodes,
        } => vset(n, with_solutions, format, max_nodes),
        Command::Tuples { n } => tuples(n),
        Command::Solve { vector } => solve(&vector),
        Command::Residues { sigma_index } => residues(sigma_index),
        Command::Sieve { k, format, limit } => sieve(k, format, limit),
        Command::Verify { max_bits, n_max, jobs } => verify_cmd(max_bits, n_max, jobs),
        Command::Oeis {
            id,
            terms,
            format,
            offset,
        } => sequence(&id, terms, format, offset),
    }
}

fn sigma(x: &BigUint, cap: u32) -> Outcome {
    Ok(match map::stopping_time(x, cap)? {
        StoppingTime::Found(s) => format!("sigma({x}) = {s}\n"),
        StoppingTime::Unknown => format!("sigma({x}) > {cap}\n"),
    })
}

fn require_level(n: u32, min: u32) -> Result<(), Failure> {
    if n < min {
        return Err(Error::LevelTooSmall { got: n, min }.into());
    }
    Ok(())
}

fn ladder_rows(max_n: u32, format: TextOrCsv) -> String {
    let rows = ladder::rows(max_n);
    let mut out = String::new();
    match format {
        TextOrCsv::Csv => {
            out.push_str("n,d,kappa,sigma\n");
            for r in rows {
                writeln!(out, "{},{},{},{}", r.n, r.d, r.kappa, r.sigma).unwrap();
            }
        }
        TextOrCsv::Text => {
            writeln!(out, "{:>6} {:>4} {:>7} {:>7}", "n", "d(n)", "kappa", "sigma").unwrap();
            for r in rows {
                writeln!(out, "{:>6} {:>4} {:>7} {:>7}", r.n, r.d, r.kappa, r.sigma).unwrap();
            }
        }
    }
    out
}

fn triangle_cmd(max_n: u32, format: TriangleFormat, sequence: TriangleSequence, offset: Option<i64>) -> Outcome {
    let t = triangle::build_triangle(max_n)?;
    Ok(match format {
        TriangleFormat::Table => t.render(),
        TriangleFormat::Csv => t.to_csv(),
        TriangleFormat::Bfile => {
            let (id, terms) = match sequence {
                TriangleSequence::A100982 => ("A100982", max_n as usize),
                TriangleSequence::A076227 => ("A076227", max_n as usize - 1),
            };
            let mut s = oeis::generate(id, terms)?;
            if let Some(o) = offset {
                s = s.with_offset(o);
            }
            s.to_bfile()
        }
    })
}

fn vset(n: u32, with_solutions: bool, format: VsetFormat, max_nodes: u64) -> Outcome {
    require_level(n, 1)?;
    if format == VsetFormat::Dot {
        let opts = tree::DotOptions {
            with_solutions,
            max_nodes,
        };
        return Ok(tree::export_tree(1, n, opts)?);
    }
    let sep = if format == VsetFormat::Csv { "," } else { " " };
    let mut out = String::new();
    if format == VsetFormat::Csv {
        out.push_str(if with_solutions { "bits,h,p,x,y\n" } else { "bits,h,p\n" });
    }
    if with_solutions {
        for e in diophantine::solve_vset(n)? {
            let fields = [
                e.entry.vector.to_digits(),
                e.entry.h.to_string(),
                e.entry.p.to_string(),
                e.solution.x.to_string(),
                e.solution.y.to_string(),
            ];
            writeln!(out, "{}", fields.join(sep)).unwrap();
        }
    } else {
        for e in tree::stream_vset(n) {
            writeln!(out, "{}{sep}{}{sep}{}", e.vector.to_digits(), e.h, e.p).unwrap();
        }
    }
    Ok(out)
}

fn tuples(n: u32) -> Outcome {
    require_level(n, 1)?;
    let mut out = String::from("rank tuple x y member\n");
    for (i, v) in tree::lex_tuples(n).enumerate() {
        let s = diophantine::solve_vector(&v)?;
        let digits = v.to_digits();
        writeln!(out, "{} {} {} {} {}", i + 1, &digits[2..], s.x, s.y, s.member).unwrap();
    }
    Ok(out)
}

fn solve(v: &ParityVector) -> Outcome {
    let s = diophantine::solve_vector(v)?;
    Ok(format!("x={} y={} member={} h={}\n", s.x, s.y, s.member, s.h()))
}

fn residues(n: u32) -> Outcome {
    require_level(n, 1)?;
    Ok(verify::render_blocks(&[verify::residue_block(n)?]))
}

fn sieve(k: u32, format: SieveFormat, limit: u64) -> Outcome {
    let levels = verify::sieve_levels(k, limit)?;
    Ok(match format {
        SieveFormat::Table => verify::render_sieve(&levels),
        SieveFormat::Csv => verify::sieve_csv(&levels),
    })
}

fn verify_cmd(max_bits: u32, n_max: u32, jobs: Option<usize>) -> Outcome {
    if !(2..=63).contains(&max_bits) {
        return Err(Failure::Usage(format!("--max-bits must lie in 2..=63, got {max_bits}")));
    }
    require_level(n_max, 1)?;
    let report = verify::verify_range_with_jobs(2, 1u64 << max_bits, n_max, jobs)?;
    let text = report.summary();
    if report.is_clean() {
        Ok(text)
    } else {
        Err(Failure::Mismatch(text))
    }
}

fn sequence(id: &str, terms: usize, format: SequenceFormat, offset: Option<i64>) -> Outcome {
    if terms == 0 {
        return Err(Failure::Usage("--terms must be at least 1".into()));
    }
    let mut s = oeis::generate(id, terms)?;
    if let Some(o) = offset {
        s = s.with_offset(o);
    }
    Ok(match format {
        SequenceFormat::Text => s.to_text(),
        SequenceFormat::Bfile => s.to_bfile(),
    })
}
