use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use skewdyn::config::{self, ms_to_kmh, Config};
use skewdyn::output::{self, fmt_g9};
use skewdyn::response::{self, speed_grid, Analysis};
use skewdyn::studies::{self, Parameter, SweepSpec};
use skewdyn::{presets, Error, ErrorClass, Model, Train};

#[derive(Parser, Debug)]
#[command(
    name = "skewdyn",
    version,
    about = "Dynamic response of simply-supported skew bridges under moving loads"
)]
struct Cli {
    /// Configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output file; standard output when omitted.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    /// Override a config value, e.g. `--set deck.alpha_deg=30` or `--set v=190km/h`.
    #[arg(long = "set", value_name = "KEY=VALUE", global = true)]
    overrides: Vec<String>,
    /// Deck model.
    #[arg(long, value_enum, global = true)]
    model: Option<ModelArg>,
    /// Worker threads for sweeps (also SKEWDYN_THREADS).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Analytical,
    Simplified,
}

impl From<ModelArg> for Model {
    fn from(m: ModelArg) -> Self {
        match m {
            ModelArg::Analytical => Model::Analytical,
            ModelArg::Simplified => Model::Simplified,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum SweepParam {
    Skew,
    Ratio,
    Span,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Natural frequencies and modal masses.
    Modes,
    /// Time history at the evaluation point for the configured speed.
    History,
    /// Maximum displacement and acceleration over the configured speed range.
    Envelope,
    /// Resonance speeds f0 D / i.
    Resonance {
        #[arg(long)]
        f0: f64,
        #[arg(long = "D")]
        spacing: f64,
        #[arg(long, default_value_t = 3)]
        imax: usize,
    },
    /// Dynamic amplification factor at the configured speed.
    Daf,
    /// Parametric study.
    Sweep {
        #[arg(long, value_enum)]
        param: SweepParam,
        /// Comma-separated parameter values (degrees for skew, GJ/EI for ratio).
        #[arg(long, value_delimiter = ',')]
        values: Option<Vec<f64>>,
        /// Span table (`L h EI GJ m` per line); the bundled table when omitted.
        #[arg(long)]
        fixtures: Option<PathBuf>,
        /// Regular axle spacing D [m] for the span study.
        #[arg(long = "D", default_value_t = 18.0)]
        spacing: f64,
    },
    /// Summary of a train file.
    TrainCheck { file: PathBuf },
}

/// A failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e.class() {
            ErrorClass::Input => 2,
            ErrorClass::Numerical => 3,
            ErrorClass::Io => 4,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

/// Errors reading inputs are input errors, whatever their cause.
fn input(e: Error) -> Failure {
    Failure {
        code: 2,
        message: e.to_string(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("skewdyn: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads(flag: Option<usize>) -> Result<(), Failure> {
    let from_env = std::env::var("SKEWDYN_THREADS").ok();
    let n = match (flag, from_env) {
        (Some(n), _) => Some(n),
        (None, Some(s)) => Some(s.trim().parse::<usize>().map_err(|_| Failure {
            code: 2,
            message: format!("SKEWDYN_THREADS=`{s}` is not a thread count"),
        })?),
        (None, None) => None,
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(Failure {
                code: 2,
                message: "thread count must be at least 1".into(),
            });
        }
        // fails only if a pool already exists, which cannot happen here
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    Ok(())
}

fn load(cli: &Cli) -> Result<Config, Failure> {
    let path = cli.config.as_ref().ok_or_else(|| Failure {
        code: 2,
        message: "this command needs --config".into(),
    })?;
    config::load_config(path, &cli.overrides).map_err(input)
}

fn train_of(cfg: &Config) -> Result<Train, Failure> {
    match (&cfg.train.file, cfg.train.load) {
        (Some(file), _) => Train::load_file(file).map_err(input),
        (None, Some(p)) => Train::single(p).map_err(input),
        (None, None) => Err(input(Error::Validation {
            field: "train".into(),
            reason: "needs `file` or `P`".into(),
        })),
    }
}

fn required(value: Option<f64>, key: &str) -> Result<f64, Failure> {
    value.ok_or_else(|| {
        input(Error::Validation {
            field: key.into(),
            reason: "missing from [train]".into(),
        })
    })
}

fn emit(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => output::write_atomic(p, text).map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn analysis(cfg: &Config, model: Model) -> Result<Analysis, Failure> {
    let a = Analysis::new(&cfg.deck, model, &cfg.run)?;
    if let Some(w) = a.time_step_warning() {
        eprintln!("skewdyn: warning: {w}");
    }
    Ok(a)
}

fn run(cli: Cli) -> Result<(), Failure> {
    configure_threads(cli.threads)?;
    let out = cli.output.as_deref();
    let model_or = |default: Model| cli.model.map(Model::from).unwrap_or(default);
    match &cli.command {
        Command::Modes => {
            let cfg = load(&cli)?;
            let modes =
                skewdyn::find_modes(&cfg.deck, model_or(Model::Analytical), cfg.run.n_modes)?;
            emit(out, &output::modes_csv(&modes))
        }
        Command::History => {
            let cfg = load(&cli)?;
            let convoy = train_of(&cfg)?
                .at_speed(required(cfg.train.speed, "v")?, cfg.train.eccentricity)
                .map_err(input)?;
            let h = analysis(&cfg, model_or(Model::Analytical))?.run(&convoy)?;
            emit(out, &output::history_csv(&h))
        }
        Command::Envelope => {
            let cfg = load(&cli)?;
            let train = train_of(&cfg)?;
            let speeds = speed_grid(
                required(cfg.train.v_min, "v_min")?,
                required(cfg.train.v_max, "v_max")?,
                required(cfg.train.v_step, "v_step")?,
            )
            .map_err(input)?;
            let env = analysis(&cfg, model_or(Model::Analytical))?.envelope(
                &train,
                &speeds,
                cfg.train.eccentricity,
            )?;
            emit(out, &output::envelope_csv(&env))
        }
        Command::Resonance { f0, spacing, imax } => {
            let v = response::resonance_speeds(*f0, *spacing, *imax).map_err(input)?;
            let mut text = String::from("i,v_kmh,v_ms\n");
            for (i, s) in v.iter().enumerate() {
                text.push_str(&format!(
                    "{},{},{}\n",
                    i + 1,
                    fmt_g9(ms_to_kmh(*s)),
                    fmt_g9(*s)
                ));
            }
            emit(out, &text)
        }
        Command::Daf => {
            let cfg = load(&cli)?;
            let v = required(cfg.train.speed, "v")?;
            let convoy = train_of(&cfg)?
                .at_speed(v, cfg.train.eccentricity)
                .map_err(input)?;
            let daf = analysis(&cfg, model_or(Model::Analytical))?.daf(&convoy)?;
            emit(
                out,
                &format!("v_kmh,daf\n{},{}\n", fmt_g9(ms_to_kmh(v)), fmt_g9(daf)),
            )
        }
        Command::Sweep {
            param,
            values,
            fixtures,
            spacing,
        } => {
            let cfg = load(&cli)?;
            let train = train_of(&cfg)?;
            let range = (
                required(cfg.train.v_min, "v_min")?,
                required(cfg.train.v_max, "v_max")?,
                required(cfg.train.v_step, "v_step")?,
            );
            let parameter = match param {
                SweepParam::Skew => Parameter::SkewAngle,
                SweepParam::Ratio => Parameter::StiffnessRatio,
                SweepParam::Span => Parameter::SpanLength,
            };
            let defaults: Vec<f64> = match param {
                SweepParam::Skew => (0..=8).map(|i| 5.0 * i as f64).collect(),
                SweepParam::Ratio => vec![0.5, 0.75, 1.0, 1.25, 1.5],
                SweepParam::Span => Vec::new(),
            };
            let mut spec = SweepSpec::new(
                parameter,
                values.clone().unwrap_or(defaults),
                cfg.deck,
                train,
                range,
                cfg.run,
            );
            spec.eccentricity = cfg.train.eccentricity;
            spec.model = model_or(Model::Simplified);
            let text = match param {
                SweepParam::Skew => output::sweep_csv(&studies::sweep_skew(&spec)?),
                SweepParam::Ratio => output::sweep_csv(&studies::sweep_stiffness(&spec)?),
                SweepParam::Span => {
                    let table = match fixtures {
                        Some(p) => {
                            let text = std::fs::read_to_string(p).map_err(|source| {
                                input(Error::Io {
                                    path: p.clone(),
                                    source,
                                })
                            })?;
                            presets::parse_span_table(&text).map_err(input)?
                        }
                        None => presets::span_fixtures(),
                    };
                    let angles: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
                    output::span_csv(&studies::sweep_span(&spec, &table, &angles, *spacing)?)
                }
            };
            emit(out, &text)
        }
        Command::TrainCheck { file } => {
            let train = Train::load_file(file).map_err(input)?;
            let mut text = format!(
                "axles: {}\ntotal_load_kN: {}\nlength_m: {}\nspacing_m,count\n",
                train.axles().len(),
                fmt_g9(train.total_load() / 1000.0),
                fmt_g9(train.length())
            );
            for (mm, count) in train.spacing_histogram() {
                text.push_str(&format!("{},{}\n", fmt_g9(mm as f64 / 1000.0), count));
            }
            emit(out, &text)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use skewdyn::config::kmh_to_ms;

    #[test]
    fn error_classes_map_to_exit_codes() {
        let f = Failure::from(Error::UndefinedDaf);
        assert_eq!(f.code, 3);
        let f = Failure::from(Error::Validation {
            field: "L".into(),
            reason: "bad".into(),
        });
        assert_eq!(f.code, 2);
        let io = Error::Io {
            path: "x".into(),
            source: std::io::Error::other("denied"),
        };
        assert_eq!(Failure::from(io).code, 4);
    }

    #[test]
    fn speed_helpers_round_trip() {
        assert!((ms_to_kmh(kmh_to_ms(190.0)) - 190.0).abs() < 1e-12);
    }

    #[test]
    fn cli_parses_globals_after_subcommand() {
        let cli = Cli::try_parse_from([
            "skewdyn",
            "modes",
            "--config",
            "a.cfg",
            "--model",
            "simplified",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Modes));
        assert!(matches!(cli.model, Some(ModelArg::Simplified)));
        let cli = Cli::try_parse_from([
            "skewdyn",
            "resonance",
            "--f0",
            "5.878",
            "--D",
            "18",
            "--imax",
            "3",
        ])
        .unwrap();
        assert!(matches!(cli.command, Command::Resonance { imax: 3, .. }));
    }
}
