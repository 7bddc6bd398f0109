use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};

use latgen::bounds::{
    bounds_table, fraction, half_degree, report_table, sigma_plus_l_plus, slack,
    structured_report, BoundsRow, ReportRecord,
};
use latgen::verify::verify;
use latgen::{
    budget, classify, curve_data, discr, rank_l_minus, rank_perp_lower_bound, Execution, Lattice,
    Parity,
};

#[derive(Parser, Debug)]
#[command(name = "latgen", version, about = "Integral lattices, discriminant forms and genus bounds")]
struct Cli {
    /// Run table sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Rank, determinant, signature and unimodularity of a Gram matrix file.
    Lattice {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Discriminant form of a Gram matrix file.
    Discr { file: PathBuf },
    /// Table of d, G0(d), G1(d) and the derived bound; fails on any mismatch.
    Bounds {
        #[arg(long)]
        dmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Classification of a single pair.
    Status {
        g: i64,
        d: i64,
        #[arg(long, value_enum, default_value_t = Format::Plain)]
        format: Format,
    },
    /// Runs every self-check up to the given degree.
    Verify {
        #[arg(long)]
        dmax: i64,
    },
    /// Eigenlattice rank budget of a pair.
    Budget {
        g: i64,
        d: i64,
        /// Node split `r,s` with `r + 2s = n`.
        #[arg(long, value_parser = parse_split)]
        split: Option<(i64, i64)>,
    },
    /// Per-pair records for 1 <= d <= dmax, 0 <= g <= gmax.
    Report {
        #[arg(long)]
        dmax: i64,
        #[arg(long)]
        gmax: i64,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Plain,
    Csv,
    #[value(alias = "structured")]
    Json,
}

fn parse_split(s: &str) -> Result<(i64, i64), String> {
    let (r, t) = s.split_once(',').ok_or("expected r,s")?;
    let r = r.trim().parse().map_err(|_| format!("bad r in {s:?}"))?;
    let t = t.trim().parse().map_err(|_| format!("bad s in {s:?}"))?;
    Ok((r, t))
}

/// Failure kinds: bad input exits with 2, a failed check with 1.
enum Failure {
    Input(anyhow::Error),
    Check(String),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Input(e)
    }
}

impl From<latgen::Error> for Failure {
    fn from(e: latgen::Error) -> Self {
        Failure::Input(e.into())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Input(e.into())
    }
}

type Outcome = Result<String, Failure>;

fn read_lattice(path: &Path) -> anyhow::Result<Lattice> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Lattice::parse_any(&text).map_err(|e| anyhow!("{}: {e}", path.display()))
}

fn cmd_lattice(path: &Path, format: Format) -> Outcome {
    let l = read_lattice(path)?;
    let primes = [2u32, 3, 5];
    let p_unimodular = primes
        .iter()
        .map(|&p| l.is_p_unimodular(&p.into()))
        .collect::<latgen::Result<Vec<bool>>>()?;
    if format == Format::Json {
        let value = serde_json::json!({
            "rank": l.rank(),
            "det": serde_json::Number::from_string_unchecked(l.det().to_string()),
            "signature": l.signature(),
            "unimodular": l.is_unimodular(),
            "p_unimodular": primes
                .iter()
                .zip(&p_unimodular)
                .map(|(p, u)| (p.to_string(), serde_json::Value::Bool(*u)))
                .collect::<serde_json::Map<_, _>>(),
        });
        return Ok(format!("{value}\n"));
    }
    let mut out = format!("rank {}, det {}, signature {}\n", l.rank(), l.det(), l.signature());
    writeln!(out, "unimodular: {}", l.is_unimodular()).unwrap();
    for (p, u) in primes.iter().zip(p_unimodular) {
        writeln!(out, "{p}-unimodular: {u}").unwrap();
    }
    Ok(out)
}

fn cmd_discr(path: &Path) -> Outcome {
    let l = read_lattice(path)?;
    let form = discr(&l)?;
    let mut out = format!("group {}\norder {}\n", form.group(), form.order());
    for (i, (o, lift)) in form.orders().iter().zip(form.generators()).enumerate() {
        let lift: Vec<String> = lift.iter().map(ToString::to_string).collect();
        writeln!(out, "e{} order {o} lift [{}]", i + 1, lift.join(", ")).unwrap();
    }
    if form.num_generators() > 0 {
        writeln!(out, "bilinear").unwrap();
        for row in form.bilinear() {
            let row: Vec<String> = row.iter().map(ToString::to_string).collect();
            writeln!(out, "  {}", row.join(" ")).unwrap();
        }
    }
    Ok(out)
}

fn csv_string<T: serde::Serialize>(rows: &[T]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn cmd_bounds(d_max: i64, format: Format, exec: Execution) -> Outcome {
    let rows = bounds_table(d_max, exec)?;
    let out = match format {
        Format::Plain => {
            let mut s = format!("{:>5} {:>10} {:>10} {:>8}\n", "d", "G0", "G1", "derived");
            for r in &rows {
                writeln!(
                    s,
                    "{:>5} {:>10} {:>10} {:>8}",
                    r.d,
                    fraction::format(&r.g0),
                    fraction::format(&r.g1),
                    r.derived
                )
                .unwrap();
            }
            s
        }
        Format::Csv => csv_string(&rows)?,
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&rows).map_err(anyhow::Error::from)?),
    };
    let bad: Vec<&BoundsRow> = rows.iter().filter(|r| !r.is_consistent()).collect();
    if let Some(r) = bad.first() {
        io::stdout().write_all(out.as_bytes())?;
        return Err(Failure::Check(format!(
            "derived bound disagrees with G0 at {} degree(s), first d = {}",
            bad.len(),
            r.d
        )));
    }
    Ok(out)
}

fn cmd_status(g: i64, d: i64, format: Format) -> Outcome {
    match format {
        Format::Json => {
            let rec = structured_report(g, d)?;
            Ok(format!("{}\n", serde_json::to_string_pretty(&rec).map_err(anyhow::Error::from)?))
        }
        Format::Csv => Ok(csv_string(&[latgen::bounds::report(g, d)?])?),
        Format::Plain => Ok(format!("{}\n", classify(g, d)?)),
    }
}

fn cmd_verify(d_max: i64, exec: Execution) -> Outcome {
    let report = verify(d_max, exec)?;
    if report.passed() {
        Ok(format!("{report}\n"))
    } else {
        io::stdout().write_all(format!("{report}\n").as_bytes())?;
        Err(Failure::Check(format!("verification failed for d <= {d_max}")))
    }
}

fn cmd_budget(g: i64, d: i64, split: Option<(i64, i64)>) -> Outcome {
    let mut cd = curve_data(g, d)?;
    if let Some((r, s)) = split {
        cd = cd.with_split(r, s)?;
    }
    let parity = Parity::of(d);
    let k = half_degree(d);
    let b = budget(&cd, parity)?;
    let counts = b.counts();
    let perp = match parity {
        Parity::Even => rank_perp_lower_bound(cd.c as usize, (d - 2) as usize),
        Parity::Odd => cd.c as usize,
    };
    let rank_minus = rank_l_minus(k, counts.sigma_plus_definite_rank)?;
    let mut out = String::new();
    writeln!(out, "(g,d) = ({g},{d}), {parity:?}, k = {k}").unwrap();
    writeln!(out, "cusps c = {}, nodes n = {} (r = {}, s = {})", cd.c, cd.n, cd.r, cd.s).unwrap();
    writeln!(out, "rank Sigma- = {}, signature {}", b.sigma_minus.rank(), b.sigma_minus.signature()).unwrap();
    writeln!(out, "rank S- = {}, signature {}", b.s_minus.rank(), b.s_minus.signature()).unwrap();
    writeln!(out, "ell3(discr S-) = {}", b.ell3_s).unwrap();
    writeln!(out, "definite rank in L+ = {}, sigma+(L+) = {}", counts.sigma_plus_definite_rank, sigma_plus_l_plus(k)).unwrap();
    writeln!(out, "rank L- <= {rank_minus}, rank S-perp >= {perp}").unwrap();
    if parity == Parity::Odd {
        writeln!(out, "note: rank S-perp >= c assumes ell3(K) = 0 for the augmented curve").unwrap();
    }
    if k >= 2 || parity == Parity::Even {
        writeln!(out, "slack = {}", fraction::format(&slack(g, d)?)).unwrap();
    }
    Ok(out)
}

fn cmd_report(d_max: i64, g_max: i64, format: Format, exec: Execution) -> Outcome {
    let rows = report_table(d_max, g_max, exec)?;
    match format {
        Format::Csv => Ok(csv_string(&rows)?),
        Format::Json => {
            let recs = rows
                .iter()
                .map(|r| structured_report(r.g, r.d))
                .collect::<latgen::Result<Vec<_>>>()?;
            Ok(format!("{}\n", serde_json::to_string_pretty(&recs).map_err(anyhow::Error::from)?))
        }
        Format::Plain => Ok(rows.iter().map(plain_record).collect()),
    }
}

fn plain_record(r: &ReportRecord) -> String {
    let verdict = latgen::Verdict {
        status: r.status,
        sources: r.sources.clone(),
    };
    format!("({},{}) {verdict}\n", r.g, r.d)
}

fn run(cli: Cli) -> Outcome {
    let exec = if cli.sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    match cli.command {
        Command::Lattice { file, format } => cmd_lattice(&file, format),
        Command::Discr { file } => cmd_discr(&file),
        Command::Bounds { dmax, format } => cmd_bounds(dmax, format, exec),
        Command::Status { g, d, format } => cmd_status(g, d, format),
        Command::Verify { dmax } => cmd_verify(dmax, exec),
        Command::Budget { g, d, split } => cmd_budget(g, d, split),
        Command::Report { dmax, gmax, format } => cmd_report(dmax, gmax, format, exec),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            if io::stdout().write_all(out.as_bytes()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(Failure::Input(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Check(msg)) => {
            eprintln!("check failed: {msg}");
            ExitCode::from(1)
        }
    }
}
