use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use virasoro_cli::{
    discrete_point, grid, parse_q, render, CliError, Format, Point, Report, Result, VerifyConfig, OUT_DIR_ENV, SUITES,
};
use virasoro_core::exactalg::Rational;
use virasoro_core::fock::RealizationTag;
use virasoro_core::virasoro::KacVariant;

#[derive(Parser, Debug)]
#[command(name = "virasoro", version, about = "Exact reports on sl(2) and Virasoro Verma modules")]
struct Cli {
    #[arg(long, value_enum, default_value_t = FormatArg::Json, global = true)]
    format: FormatArg,
    /// Output file; defaults to `$VIRASORO_OUT_DIR/<command>.<ext>` or stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, env = OUT_DIR_ENV, hide_env_values = true)]
    out_dir: Option<PathBuf>,
    /// Runs every suite and lists each identity with its status.
    #[arg(long)]
    seed_report: bool,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Csv,
    Pretty,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KacArg {
    Corrected,
    AsPrinted,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum TagArg {
    #[value(name = "OE")]
    Oe,
    #[value(name = "FE")]
    Fe,
    #[value(name = "OEc")]
    Oec,
    #[value(name = "Wc")]
    Wc,
}

#[derive(Args, Debug, Clone)]
struct PointArgs {
    /// Weight `h` as an exact rational, or `symbolic`.
    #[arg(long, allow_hyphen_values = true)]
    h: Option<String>,
    /// Central charge `c` as an exact rational.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<String>,
    #[arg(long)]
    symbolic: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Level-n Gram matrix, its determinant and the Kac comparison.
    Gram {
        #[arg(long, default_value_t = 2)]
        level: u32,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, value_enum, default_value_t = KacArg::Corrected)]
        kac: KacArg,
    },
    /// Runs one relation suite; exit 0 iff every asserted identity holds.
    Verify {
        suite: String,
        #[command(flatten)]
        point: PointArgs,
        #[arg(long = "N", default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        max_mode: i64,
        #[arg(long, default_value_t = 6)]
        trunc: usize,
        #[arg(long, value_enum, default_value_t = TagArg::Oe)]
        tag: TagArg,
        #[arg(long, default_value_t = 4)]
        max_level: u32,
    },
    /// Inertia per level and degeneracy classification at a point or on a grid.
    Scan {
        #[command(flatten)]
        point: PointArgs,
        /// Discrete-series point as `p=P a=A b=B`.
        #[arg(long, num_args = 3, value_names = ["p=P", "a=A", "b=B"])]
        discrete: Option<Vec<String>>,
        /// Grid in h: `FROM TO COUNT`.
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        h_range: Option<Vec<String>>,
        /// Grid in c: `FROM TO COUNT`.
        #[arg(long, num_args = 3, allow_hyphen_values = true)]
        c_range: Option<Vec<String>>,
        #[arg(long, default_value_t = 4)]
        max_level: u32,
        /// Search bound for the pairs `(α, β)`.
        #[arg(long, default_value_t = 6)]
        bound: i64,
    },
    /// Solves the local hidden-symmetry family and compares it on the fiber.
    Nomizu {
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        h: String,
        #[arg(long, default_value = "2", allow_hyphen_values = true)]
        c: String,
        #[arg(long, default_value_t = 6)]
        trunc: usize,
    },
}

impl PointArgs {
    fn point(&self, default: Option<(&str, &str)>) -> Result<Point> {
        if self.symbolic || self.h.as_deref() == Some("symbolic") {
            return Ok(Point::Symbolic);
        }
        let (dh, dc) = default.unzip();
        match (self.h.as_deref().or(dh), self.c.as_deref().or(dc)) {
            (Some(h), Some(c)) => Ok(Point::At(parse_q(h)?, parse_q(c)?)),
            (Some(h), None) => Ok(Point::At(parse_q(h)?, parse_q("0")?)),
            (None, _) => Err(CliError::Usage("give --h and --c, or --symbolic".into())),
        }
    }
}

fn key_value(items: &[String], keys: [&str; 3]) -> Result<[i64; 3]> {
    let mut out = [0; 3];
    for (slot, (item, key)) in out.iter_mut().zip(items.iter().zip(keys)) {
        let bad = || CliError::Usage(format!("expected {key}=<integer>, got {item:?}"));
        let (k, v) = item.split_once('=').ok_or_else(bad)?;
        if k != key {
            return Err(bad());
        }
        *slot = v.parse().map_err(|_| bad())?;
    }
    Ok(out)
}

fn range(items: &[String]) -> Result<Vec<Rational>> {
    let count = items[2].parse().map_err(|_| CliError::Usage(format!("bad grid count {:?}", items[2])))?;
    Ok(grid(&parse_q(&items[0])?, &parse_q(&items[1])?, count))
}

fn run(cli: &Cli) -> Result<Report> {
    if cli.seed_report {
        return virasoro_cli::seed_report();
    }
    let Some(command) = &cli.command else {
        return Err(CliError::Usage("no command given; try --help".into()));
    };
    match command {
        Command::Gram { level, point, kac } => {
            let kac = match kac {
                KacArg::Corrected => KacVariant::Corrected,
                KacArg::AsPrinted => KacVariant::AsPrinted,
            };
            let at = if point.h.is_none() { Point::Symbolic } else { point.point(None)? };
            virasoro_cli::gram(*level, &at, kac)
        }
        Command::Verify { suite, point, n, max_mode, trunc, tag, max_level } => {
            if !SUITES.contains(&suite.as_str()) {
                return Err(CliError::Usage(format!("unknown suite {suite:?}; expected one of {}", SUITES.join(", "))));
            }
            let tag = match tag {
                TagArg::Oe => RealizationTag::OE,
                TagArg::Fe => RealizationTag::FE,
                TagArg::Oec => RealizationTag::OEc,
                TagArg::Wc => RealizationTag::Wc,
            };
            let default = if suite == "sl2" { None } else { Some(("1", "2")) };
            let point = match (suite.as_str(), point.h.is_none() && !point.symbolic) {
                ("geometry" | "m1" | "fock", true) => Point::Symbolic,
                _ => point.point(default)?,
            };
            let cfg = VerifyConfig { point, n: *n, max_mode: *max_mode, trunc: *trunc, tag, max_level: *max_level };
            virasoro_cli::verify(suite, &cfg)
        }
        Command::Scan { point, discrete, h_range, c_range, max_level, bound } => {
            let mut disc = None;
            let points = if let Some(items) = discrete {
                let [p, a, b] = key_value(items, ["p", "a", "b"])?;
                disc = Some((p, a, b));
                vec![discrete_point(p, a, b)?]
            } else if h_range.is_some() || c_range.is_some() {
                let at = point.point(Some(("0", "0"))).ok();
                let fixed = |i: usize| match &at {
                    Some(Point::At(h, c)) => vec![if i == 0 { h.clone() } else { c.clone() }],
                    _ => Vec::new(),
                };
                let hs = h_range.as_deref().map(range).transpose()?.unwrap_or_else(|| fixed(0));
                let cs = c_range.as_deref().map(range).transpose()?.unwrap_or_else(|| fixed(1));
                hs.iter().flat_map(|h| cs.iter().map(move |c| (h.clone(), c.clone()))).collect()
            } else {
                match point.point(None)? {
                    Point::At(h, c) => vec![(h, c)],
                    Point::Symbolic => return Err(CliError::Usage("scan needs a numeric point".into())),
                }
            };
            virasoro_cli::scan(&points, *max_level, *bound, disc)
        }
        Command::Nomizu { n, h, c, trunc } => virasoro_cli::nomizu(*n, &parse_q(h)?, &parse_q(c)?, *trunc),
    }
}

fn destination(cli: &Cli, report: &Report, format: Format) -> Option<PathBuf> {
    cli.out.clone().or_else(|| cli.out_dir.as_ref().map(|d| d.join(format!("{}.{}", report.command, format.extension()))))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let format = match cli.format {
        FormatArg::Json => Format::Json,
        FormatArg::Csv => Format::Csv,
        FormatArg::Pretty => Format::Pretty,
    };
    let outcome = run(&cli).and_then(|report| {
        let text = render(&report.to_value(), format);
        match destination(&cli, &report, format) {
            Some(path) => {
                std::fs::write(&path, text).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
                eprintln!("wrote {}", path.display());
            }
            None => print!("{text}"),
        }
        Ok(report.exit_code())
    });
    match outcome {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
