//! Command-line front end: parse an expression and ranges, plot, emit the
//! chosen format, optionally validate by sampling or hand the result to
//! Gnuplot. A thin shell over the library: every behavior here is a plain
//! library call, and the emitted bytes are exactly the library's.
//!
//! Exit codes: 0 success, 1 bad usage or unparseable input, 2 plotting
//! failure, 3 validation found a violation.

use crate::checker::check_plot2;
use crate::expr::{parse_rational, Expr};
use crate::interval::Precision;
use crate::plotter::{plot, PlotConfig};
use crate::render;
use clap::error::ErrorKind;
use clap::{Parser, ValueEnum};
use num_rational::BigRational;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::Command;

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// One text line per column: frame header, then `i z1 z2`.
    Runs,
    /// Self-describing document with exact hex-float frame fields.
    Json,
    /// Gnuplot script plus data file (requires --output).
    Gnuplot,
    /// Standalone vector image.
    Svg,
}

/// Plot a function of x with guaranteed enclosure semantics: every filled
/// pixel column covers the function's values there, so blank space is
/// proof of absence.
#[derive(Parser, Debug)]
#[command(name = "rigorplot", version)]
struct Cli {
    /// Function of x, e.g. "sin(x + exp(x))".
    expr: String,

    /// Left edge of the x range: integer, fraction, or decimal.
    #[arg(allow_hyphen_values = true)]
    x1: String,

    /// Right edge of the x range.
    #[arg(allow_hyphen_values = true)]
    x2: String,

    /// Bottom of the y window (give with Y2; omit both to fit the data).
    #[arg(allow_hyphen_values = true)]
    y1: Option<String>,

    /// Top of the y window.
    #[arg(allow_hyphen_values = true)]
    y2: Option<String>,

    /// Working precision in bits (also: --i_prec).
    #[arg(long, alias = "i_prec", default_value_t = 53, value_name = "BITS")]
    prec: u32,

    /// Polynomial model degree (also: --i_degree).
    #[arg(long, alias = "i_degree", default_value_t = 10, value_name = "N")]
    degree: usize,

    /// Plot size in pixels (also: --i_size).
    #[arg(long, alias = "i_size", default_value = "512x384", value_name = "WxH")]
    size: String,

    /// Completeness slack in pixels.
    #[arg(long, default_value_t = 2, value_name = "T")]
    slack: u32,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Svg)]
    format: Format,

    /// Output file (gnuplot writes PATH.gp and PATH.dat); default stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Re-check the finished plot by random sampling; a violation exits 3.
    #[arg(long)]
    check: bool,

    /// Samples per column for --check.
    #[arg(long, default_value_t = 50, value_name = "N")]
    samples: u32,

    /// Seed for --check sampling; reports are reproducible from it.
    #[arg(long, default_value_t = 0)]
    seed: u64,

    /// Plain interval evaluation per column: no models, no subdivision.
    #[arg(long, conflicts_with = "max_depth")]
    naive: bool,

    /// Maximum subdivision depth per column.
    #[arg(long, value_name = "N")]
    max_depth: Option<u32>,

    /// Open the plot in Gnuplot (set RIGORPLOT_GNUPLOT to pick the binary).
    #[arg(long)]
    show: bool,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn plotting(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests arrive as errors but are successes;
            // everything else is bad usage.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("rigorplot: {}", f.message);
            f.code
        }
    }
}

fn parse_size(text: &str) -> Option<(u32, u32)> {
    let (w, h) = text.split_once('x')?;
    let w = w.parse().ok().filter(|&w| w >= 1)?;
    let h = h.parse().ok().filter(|&h| h >= 1)?;
    Some((w, h))
}

fn rational_arg(name: &str, text: &str) -> Result<BigRational, Failure> {
    parse_rational(text).map_err(|e| usage(format!("{name}: {e}")))
}

fn execute(cli: &Cli) -> Result<i32, Failure> {
    let e = Expr::parse(&cli.expr).map_err(|err| usage(err.to_string()))?;
    let x1 = rational_arg("X1", &cli.x1)?;
    let x2 = rational_arg("X2", &cli.x2)?;
    if x1 >= x2 {
        return Err(usage("X1 must be less than X2"));
    }
    let window = match (&cli.y1, &cli.y2) {
        (Some(a), Some(b)) => {
            let y1 = rational_arg("Y1", a)?;
            let y2 = rational_arg("Y2", b)?;
            if y1 >= y2 {
                return Err(usage("Y1 must be less than Y2"));
            }
            Some((y1, y2))
        }
        (None, None) => None,
        _ => return Err(usage("give both Y1 and Y2, or neither")),
    };
    let (width, height) =
        parse_size(&cli.size).ok_or_else(|| usage("--size wants WxH, e.g. 512x384"))?;
    if cli.prec < 2 {
        return Err(usage("--prec must be at least 2 bits"));
    }
    if cli.slack < 1 {
        return Err(usage("--slack must be at least 1 pixel"));
    }
    if cli.check && cli.samples < 1 {
        return Err(usage("--samples must be at least 1"));
    }
    if cli.format == Format::Gnuplot && cli.output.is_none() {
        return Err(usage("--format gnuplot needs --output PATH for the file pair"));
    }

    let defaults = PlotConfig::default();
    let cfg = PlotConfig {
        prec: Precision::new(cli.prec),
        degree: cli.degree,
        slack: cli.slack,
        width,
        height,
        max_depth: if cli.naive { 0 } else { cli.max_depth.unwrap_or(defaults.max_depth) },
        ..defaults
    };
    let p2 = plot(&e, &x1, &x2, window.as_ref().map(|(a, b)| (a, b)), &cfg)
        .map_err(|err| plotting(err.to_string()))?;

    emit(cli, &p2)?;
    if cli.show {
        show(&p2)?;
    }
    if cli.check {
        let oracle = Precision::new(cli.prec.saturating_mul(3));
        let report = check_plot2(&e, &p2, cli.samples, oracle, cli.seed);
        eprint!("{}", report.to_text());
        if !report.passed() {
            return Ok(3);
        }
    }
    Ok(0)
}

fn write_artifact(path: &PathBuf, text: &str) -> Result<(), Failure> {
    fs::write(path, text)
        .map_err(|e| plotting(format!("cannot write {}: {e}", path.display())))
}

fn emit(cli: &Cli, p2: &crate::plotter::Plot2) -> Result<(), Failure> {
    if cli.format == Format::Gnuplot {
        let base = cli.output.as_ref().expect("validated above");
        let script_path = base.with_extension("gp");
        let data_path = base.with_extension("dat");
        let (script, data) = render::emit_gnuplot(p2, &data_path.display().to_string());
        write_artifact(&script_path, &script)?;
        write_artifact(&data_path, &data)?;
        return Ok(());
    }
    let text = match cli.format {
        Format::Runs => render::emit_runs(p2),
        Format::Json => render::emit_json(p2),
        Format::Svg => render::emit_svg(p2, p2.xframe().w(), p2.yframe().h()),
        Format::Gnuplot => unreachable!("handled above"),
    };
    match &cli.output {
        Some(path) => write_artifact(path, &text),
        None => {
            std::io::stdout()
                .write_all(text.as_bytes())
                .map_err(|e| plotting(format!("cannot write to stdout: {e}")))
        }
    }
}

/// Write the script/data pair to the temp directory and hand it to
/// Gnuplot. A missing executable is reported with the exact command that
/// was attempted.
fn show(p2: &crate::plotter::Plot2) -> Result<(), Failure> {
    let dir = std::env::temp_dir();
    let pid = std::process::id();
    let script_path = dir.join(format!("rigorplot-{pid}.gp"));
    let data_path = dir.join(format!("rigorplot-{pid}.dat"));
    let (script, data) = render::emit_gnuplot(p2, &data_path.display().to_string());
    write_artifact(&script_path, &script)?;
    write_artifact(&data_path, &data)?;
    let exe = std::env::var("RIGORPLOT_GNUPLOT").unwrap_or_else(|_| "gnuplot".to_string());
    let attempted = format!("{exe} -persist {}", script_path.display());
    let status = Command::new(&exe)
        .arg("-persist")
        .arg(&script_path)
        .status()
        .map_err(|e| plotting(format!("could not run '{attempted}': {e}")));
    let cleanup = || {
        let _ = fs::remove_file(&script_path);
        let _ = fs::remove_file(&data_path);
    };
    match status {
        Ok(s) if s.success() => {
            cleanup();
            Ok(())
        }
        Ok(s) => {
            cleanup();
            Err(plotting(format!("'{attempted}' exited with {s}")))
        }
        Err(f) => {
            cleanup();
            Err(f)
        }
    }
}
