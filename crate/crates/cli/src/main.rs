use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use bellparity::montecarlo::{sample_lhv, sample_quantum, SignModel};
use bellparity::report::{
    BellRecord, ChshRecord, CorrelationRecord, SampleKind, SampleRecord, SweepRecord,
};
use bellparity::search::{maximize, parity_sweep, Objective, SearchSpec};
use bellparity::{
    bell_lhs_rhs, chsh, correlate, correlation, BellTriple, ChshQuad, Direction, Mode, Part, Spin,
    StateParams,
};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Bell and CHSH tests for spin-s Bell cat states.
#[derive(Parser, Debug)]
#[command(name = "bellparity", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Density elements and correlation for one pair of directions.
    Correlate {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, value_enum, default_value_t = ModeArg::ClosedForm)]
        mode: ModeArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Modified Bell inequality for a triple (a, b, c).
    Bell {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, value_enum, default_value_t = PartArg::Total)]
        which: PartArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// CHSH combination for a quad (a, b, c, d).
    Chsh {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[arg(long, value_enum, default_value_t = PartArg::Total)]
        which: PartArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Search for the largest value of an objective at one spin.
    Maximize {
        #[arg(long, value_parser = spin2_parser())]
        spin2: u32,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run the search for every spin from 1/2 up to --spin2-max / 2.
    ParitySweep {
        #[arg(long, value_parser = spin2_parser())]
        spin2_max: u32,
        #[command(flatten)]
        search: SearchArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample joint measurements on the Bell cat state.
    SampleQuantum {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Sample the sign hidden-variable model.
    SampleLhv {
        #[command(flatten)]
        angles: AngleArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
}

fn spin2_parser() -> clap::builder::RangedI64ValueParser<u32> {
    clap::value_parser!(u32).range(1..=Spin::MAX_TWICE as i64)
}

#[derive(Args, Debug)]
struct StateArgs {
    /// Twice the spin, 1..=50.
    #[arg(long, value_parser = spin2_parser())]
    spin2: u32,
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_4, allow_hyphen_values = true)]
    xi: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    eta: f64,
}

#[derive(Args, Debug)]
struct AngleArgs {
    #[arg(long, allow_hyphen_values = true)]
    theta_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_a: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_b: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    theta_d: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    phi_d: Option<f64>,
    /// Comma-separated signed angles in the x-z plane, one per direction.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    coplanar: Option<Vec<f64>>,
    /// Read every angle in degrees.
    #[arg(long)]
    degrees: bool,
}

#[derive(Args, Debug)]
struct SearchArgs {
    #[arg(long, default_value = "chsh_total", value_parser = parse_objective)]
    objective: Objective,
    /// Grid points per angle in the coarse scan.
    #[arg(long, default_value_t = 16)]
    grid: usize,
    /// Simplex iteration cap per seed; 0 skips refinement.
    #[arg(long, default_value_t = 4000)]
    refine: usize,
    /// Let (xi, eta) float during refinement.
    #[arg(long)]
    optimize_state: bool,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    #[arg(long, default_value_t = 1_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum ModeArg {
    ClosedForm,
    Oracle,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
#[value(rename_all = "snake_case")]
enum PartArg {
    LocalOnly,
    Total,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::ClosedForm => Mode::ClosedForm,
            ModeArg::Oracle => Mode::Oracle,
        }
    }
}

impl From<PartArg> for Part {
    fn from(p: PartArg) -> Self {
        match p {
            PartArg::LocalOnly => Part::LocalOnly,
            PartArg::Total => Part::Total,
        }
    }
}

fn parse_objective(s: &str) -> Result<Objective, String> {
    s.parse().map_err(|_| {
        let names: Vec<_> = Objective::ALL.iter().map(|o| o.name()).collect();
        format!("expected one of {}", names.join(", "))
    })
}

/// Reports a flag that parsed but failed a domain check; exits with code 2.
fn flag_error(flag: &str, msg: impl std::fmt::Display) -> ! {
    Cli::command()
        .error(
            ErrorKind::ValueValidation,
            format!("invalid value for '--{flag}': {msg}"),
        )
        .exit()
}

impl StateArgs {
    fn params(&self) -> StateParams {
        let spin = Spin::from_twice(self.spin2).unwrap_or_else(|e| flag_error("spin2", e));
        if !self.xi.is_finite() {
            flag_error("xi", "must be finite");
        }
        StateParams::new(spin, self.xi, self.eta).unwrap_or_else(|e| flag_error("eta", e))
    }
}

impl AngleArgs {
    fn directions<const N: usize>(&self) -> [Direction; N] {
        let unit = |x: f64| if self.degrees { x.to_radians() } else { x };
        if let Some(list) = &self.coplanar {
            if list.len() != N {
                flag_error(
                    "coplanar",
                    format!("expected {N} angles, got {}", list.len()),
                );
            }
            return std::array::from_fn(|i| {
                if !list[i].is_finite() {
                    flag_error("coplanar", "angles must be finite");
                }
                Direction::in_plane(unit(list[i]))
            });
        }
        let pairs = [
            ("a", self.theta_a, self.phi_a),
            ("b", self.theta_b, self.phi_b),
            ("c", self.theta_c, self.phi_c),
            ("d", self.theta_d, self.phi_d),
        ];
        if let Some((name, ..)) = pairs[N..]
            .iter()
            .find(|(_, t, p)| t.is_some() || p.is_some())
        {
            flag_error(
                &format!("theta-{name}"),
                format!("this subcommand takes {N} directions"),
            );
        }
        std::array::from_fn(|i| {
            let (name, theta, phi) = pairs[i];
            let theta = theta.unwrap_or_else(|| flag_error(&format!("theta-{name}"), "required"));
            let phi = unit(phi.unwrap_or(0.0));
            Direction::new(unit(theta), phi)
                .unwrap_or_else(|e| flag_error(&format!("theta-{name}"), e))
        })
    }
}

impl SearchArgs {
    fn spec(&self, twice: u32) -> SearchSpec {
        let spin = Spin::from_twice(twice).unwrap_or_else(|e| flag_error("spin2", e));
        let spec = SearchSpec {
            optimize_state: self.optimize_state,
            grid_points_per_angle: self.grid,
            refine_iterations: self.refine,
            ..SearchSpec::new(spin, self.objective)
        };
        spec.validate().unwrap_or_else(|e| flag_error("grid", e));
        spec
    }
}

fn emit<T: Serialize>(records: &[T], output: &OutputArgs) -> io::Result<()> {
    let mut sink: Box<dyn Write> = match &output.out {
        Some(path) => Box::new(File::create(path)?),
        None => Box::new(io::stdout().lock()),
    };
    match output.format {
        Format::Json => {
            for r in records {
                serde_json::to_writer(&mut sink, r)?;
                writeln!(sink)?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(sink);
            for r in records {
                w.serialize(r)?;
            }
            w.flush()?;
            return Ok(());
        }
    }
    sink.flush()
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Correlate {
            state,
            angles,
            mode,
            output,
        } => {
            let p = state.params();
            let [a, b] = angles.directions();
            let mode = mode.into();
            let e = correlation::elements(&p, &a, &b, mode);
            emit(&[CorrelationRecord::new(&p, &a, &b, mode, &e)], &output)?;
        }
        Command::Bell {
            state,
            angles,
            which,
            output,
        } => {
            let p = state.params();
            let dirs = angles.directions();
            let [a, b, c] = dirs;
            let out = bell_lhs_rhs(&BellTriple { params: p, a, b, c }, which.into());
            emit(&[BellRecord::new(&p, &dirs, which.into(), &out)], &output)?;
        }
        Command::Chsh {
            state,
            angles,
            which,
            output,
        } => {
            let p = state.params();
            let dirs = angles.directions();
            let [a, b, c, d] = dirs;
            let value = chsh(
                &ChshQuad {
                    params: p,
                    a,
                    b,
                    c,
                    d,
                },
                which.into(),
            );
            emit(&[ChshRecord::new(&p, &dirs, which.into(), value)], &output)?;
        }
        Command::Maximize {
            spin2,
            search,
            output,
        } => {
            let report = maximize(&search.spec(spin2))?;
            emit(&[SweepRecord::from(&report)], &output)?;
        }
        Command::ParitySweep {
            spin2_max,
            search,
            output,
        } => {
            let template = search.spec(1);
            let s_max = Spin::from_twice(spin2_max)?;
            let rows: Vec<SweepRecord> = parity_sweep(s_max, &template)?
                .iter()
                .map(SweepRecord::from)
                .collect();
            emit(&rows, &output)?;
        }
        Command::SampleQuantum {
            state,
            angles,
            sampling,
            output,
        } => {
            let p = state.params();
            let [a, b] = angles.directions();
            let stats = sample_quantum(&p, &a, &b, sampling.shots, sampling.seed)?;
            let analytic = correlate(&p, &a, &b, Mode::ClosedForm).p_total;
            let r = SampleRecord::new(
                SampleKind::Quantum,
                Some(&p),
                &a,
                &b,
                sampling.seed,
                &stats,
                Some(analytic),
            );
            emit(&[r], &output)?;
        }
        Command::SampleLhv {
            angles,
            sampling,
            output,
        } => {
            let [a, b] = angles.directions();
            let stats = sample_lhv(&SignModel, &a, &b, sampling.shots, sampling.seed)?;
            let r = SampleRecord::new(SampleKind::Lhv, None, &a, &b, sampling.seed, &stats, None);
            emit(&[r], &output)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
