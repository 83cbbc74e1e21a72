//! Argument parsing and command dispatch for the `macrodefault` binary.
//!
//! Exit status: 0 on success, 1 on a usage error, 2 on a data or
//! validation error. Results go to stdout (or `--out`), diagnostics to
//! stderr.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use macrodefault::diagnostics::{self, DwBand};
use macrodefault::ols::{self, DesignMatrix, OlsFit};
use macrodefault::pipeline::{self, PipelineConfig, ReportFormat};
use macrodefault::series::Dataset;
use macrodefault::stepwise::{self, Direction, SpecLadder};
use macrodefault::unitroot::{
    self, AdfModel, AdfOutcome, AdfProvider, IntegrationReport, LagChoice, Level, OlsAdf,
};
use macrodefault::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "macrodefault", version, about = "Default-rate econometrics toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ModelArg {
    Auto,
    None,
    Const,
    Trend,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum DirectionArg {
    Backward,
    Forward,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Text,
    Structured,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Unit-root test on one series.
    Adf {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        series: String,
        #[arg(long, value_enum, default_value = "auto")]
        model: ModelArg,
        #[arg(long, default_value = "0", value_parser = parse_lags)]
        lags: LagChoice,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 2)]
        max_diff: usize,
    },
    /// OLS regression.
    Fit {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        dep: String,
        #[arg(long, value_delimiter = ',')]
        regressors: Vec<String>,
    },
    /// Stepwise specification search.
    Stepwise {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        dep: String,
        #[arg(long, value_delimiter = ',')]
        regressors: Vec<String>,
        #[arg(long, value_enum, default_value = "backward")]
        direction: DirectionArg,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
    },
    /// Residual diagnostics of an OLS fit.
    Diagnose {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        dep: String,
        #[arg(long, value_delimiter = ',')]
        regressors: Vec<String>,
        #[arg(long, default_value_t = 0.05)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        dw_low: f64,
        #[arg(long, default_value_t = 3.0)]
        dw_high: f64,
    },
    /// Descriptive statistics of one series.
    Describe {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        series: String,
    },
    /// Full workflow driven by a config file.
    Pipeline {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: FormatArg,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Overrides the config file.
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, value_parser = parse_lags)]
        adf_lags: Option<LagChoice>,
        #[arg(long)]
        max_diff: Option<usize>,
    },
}

fn parse_lags(s: &str) -> Result<LagChoice, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Parse `args` (program name first), run the command and write its output.
pub fn dispatch<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let (text, dest) = match run(cli.command) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_DATA;
        }
    };
    match dest {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                let _ = writeln!(err, "error: Io: {}: {e}", path.display());
                return EXIT_DATA;
            }
        }
        None => {
            let _ = out.write_all(text.as_bytes());
        }
    }
    EXIT_OK
}

fn upper(names: &[String]) -> Vec<String> {
    names
        .iter()
        .map(|s| s.trim().to_uppercase())
        .filter(|s| !s.is_empty())
        .collect()
}

fn build_design(data: &Dataset, regressors: &[String]) -> Result<DesignMatrix, Error> {
    let n = data.periods().len();
    let mut design = DesignMatrix::with_intercept(n);
    for r in upper(regressors) {
        let col = data
            .column(&r)
            .ok_or_else(|| Error::MissingColumn(r.clone()))?;
        design.push(r, col.to_vec())?;
    }
    Ok(design)
}

fn dependent(data: &Dataset, dep: &str) -> Result<(String, Vec<f64>), Error> {
    let dep = dep.to_uppercase();
    let y = data
        .column(&dep)
        .ok_or_else(|| Error::MissingColumn(dep.clone()))?
        .to_vec();
    Ok((dep, y))
}

fn run(cmd: Command) -> Result<(String, Option<PathBuf>), Error> {
    match cmd {
        Command::Adf {
            data,
            series,
            model,
            lags,
            alpha,
            max_diff,
        } => {
            let data = pipeline::load_csv(data)?;
            let s = data.series(&series.to_uppercase())?;
            let text = match model {
                ModelArg::Auto => {
                    render_integration(&unitroot::sequential_adf(&s, alpha, lags, max_diff)?)
                }
                fixed => {
                    let model = match fixed {
                        ModelArg::None => AdfModel::None,
                        ModelArg::Const => AdfModel::ConstantOnly,
                        _ => AdfModel::ConstantAndTrend,
                    };
                    let level = Level::from_alpha(alpha)?;
                    let mut outcome = OlsAdf.regress(&s, model, lags)?;
                    outcome.decision =
                        Some(unitroot::classify(outcome.adf_stat, outcome.critical_value(level)?));
                    let mut t = format!("series {}\n", s.name());
                    render_outcome(&mut t, &outcome);
                    t
                }
            };
            Ok((text, None))
        }
        Command::Fit {
            data,
            dep,
            regressors,
        } => {
            let data = pipeline::load_csv(data)?;
            let (dep, y) = dependent(&data, &dep)?;
            let design = build_design(&data, &regressors)?;
            Ok((render_fit(&ols::fit(&dep, &y, &design)?), None))
        }
        Command::Stepwise {
            data,
            dep,
            regressors,
            direction,
            alpha,
        } => {
            let data = pipeline::load_csv(data)?;
            let (dep, y) = dependent(&data, &dep)?;
            let design = build_design(&data, &regressors)?;
            let direction = match direction {
                DirectionArg::Backward => Direction::Backward,
                DirectionArg::Forward => Direction::Forward,
            };
            let ladder = stepwise::stepwise(direction, &dep, &y, &design, alpha)?;
            Ok((render_ladder(&ladder), None))
        }
        Command::Diagnose {
            data,
            dep,
            regressors,
            alpha,
            dw_low,
            dw_high,
        } => {
            let data = pipeline::load_csv(data)?;
            let (dep, y) = dependent(&data, &dep)?;
            let design = build_design(&data, &regressors)?;
            let fit = ols::fit(&dep, &y, &design)?;
            let band = DwBand {
                low: dw_low,
                high: dw_high,
            };
            let report = diagnostics::diagnose(&fit, &design, alpha, band)?;
            let mut t = String::new();
            let dw = &report.durbin_watson;
            let _ = writeln!(t, "Durbin-Watson {:.6} {:?}", dw.statistic, dw.verdict);
            if let Some(w) = &report.white {
                let _ = writeln!(
                    t,
                    "White Obs*R2 {:.6} Chi2({}) p {:.6} F {:.6} p {:.6} {:?}",
                    w.obs_r_squared, w.df, w.p_value, w.f_statistic, w.f_p_value, w.verdict
                );
                let _ = writeln!(t, "  auxiliary: {}", w.aux_regressors.join(", "));
                if !w.dropped_collinear.is_empty() {
                    let _ = writeln!(t, "  dropped: {}", w.dropped_collinear.join(", "));
                }
            }
            let jb = &report.jarque_bera;
            let _ = writeln!(
                t,
                "Jarque-Bera {:.6} S {:.6} K {:.6} p {:.6} {:?}",
                jb.jb_stat, jb.skewness, jb.kurtosis, jb.p_value, jb.verdict
            );
            Ok((t, None))
        }
        Command::Describe { data, series } => {
            let data = pipeline::load_csv(data)?;
            let s = data.series(&series.to_uppercase())?;
            let d = s.describe()?;
            let text = format!(
                "series {}\nmean {}\nmedian {}\nmax {}\nmin {}\nstd_dev {}\nn {}\n",
                s.name(),
                d.mean,
                d.median,
                d.max,
                d.min,
                d.std_dev,
                d.n
            );
            Ok((text, None))
        }
        Command::Pipeline {
            data,
            config,
            format,
            out,
            alpha,
            adf_lags,
            max_diff,
        } => {
            let data = pipeline::load_csv(data)?;
            let mut cfg = PipelineConfig::load(config)?;
            if let Some(a) = alpha {
                cfg.alpha = a;
            }
            if let Some(l) = adf_lags {
                cfg.adf_lags = l;
            }
            if let Some(m) = max_diff {
                cfg.max_diff = m;
            }
            let report = pipeline::run_pipeline(&data, &cfg)?;
            let format = match format {
                FormatArg::Text => ReportFormat::Text,
                FormatArg::Structured => ReportFormat::Structured,
            };
            Ok((pipeline::render_report(&report, format), out))
        }
    }
}

fn render_outcome(t: &mut String, a: &AdfOutcome) {
    let _ = writeln!(
        t,
        "  model {}  lags {}  nobs {}  rho {:.6}  adf {:.6}",
        a.model, a.lags, a.effective_n, a.rho_hat, a.adf_stat
    );
    if let Some(cv) = &a.critical_values {
        let _ = writeln!(
            t,
            "  critical values 1% {:.6}  5% {:.6}  10% {:.6}",
            cv.one_percent, cv.five_percent, cv.ten_percent
        );
    }
    if let Some(c) = &a.constant {
        let _ = writeln!(t, "  C      {:.6} (t {:.6}, p {:.4})", c.coefficient, c.t_stat, c.p_value);
    }
    if let Some(tr) = &a.trend {
        let _ = writeln!(t, "  TREND  {:.6} (t {:.6}, p {:.4})", tr.coefficient, tr.t_stat, tr.p_value);
    }
    if let Some(d) = a.decision {
        let _ = writeln!(t, "  decision {d:?}");
    }
}

fn render_integration(r: &IntegrationReport) -> String {
    let mut t = format!("series {}\norder {}\n", r.series, r.order);
    for stage in &r.trace {
        let _ = writeln!(t, "differences {}", stage.differences);
        for a in &stage.attempts {
            render_outcome(&mut t, a);
        }
    }
    t
}

fn render_fit(f: &OlsFit) -> String {
    let mut t = format!("dependent {}  nobs {}  dof {}\n", f.dependent, f.nobs, f.dof);
    let _ = writeln!(
        t,
        "{:<18} {:>14} {:>14} {:>12} {:>8}",
        "variable", "coefficient", "std. error", "t-stat", "prob."
    );
    for c in &f.coefficients {
        let _ = writeln!(
            t,
            "{:<18} {:>14.6} {:>14.6} {:>12.6} {:>8.4}",
            c.name, c.estimate, c.std_error, c.t_stat, c.p_value
        );
    }
    let _ = writeln!(
        t,
        "R-squared {:.6}  adj. R-squared {:.6}  DW {}",
        f.r_squared,
        f.adj_r_squared,
        f.durbin_watson.map_or("-".into(), |d| format!("{d:.6}"))
    );
    t
}

fn render_ladder(l: &SpecLadder) -> String {
    let mut t = format!("direction {:?}  alpha {}\n", l.direction, l.alpha);
    for (i, step) in l.steps.iter().enumerate() {
        let _ = writeln!(t, "step {}", i + 1);
        t.push_str(&render_fit(&step.fit));
        if let Some(r) = &step.removed {
            let _ = writeln!(t, "removed {r} (p {:.4})", step.criterion_p_value.unwrap_or(f64::NAN));
        }
        if let Some(e) = &step.entered {
            let _ = writeln!(t, "entered {e} (p {:.4})", step.criterion_p_value.unwrap_or(f64::NAN));
        }
    }
    t
}
