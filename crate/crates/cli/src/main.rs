//! Command-line front end: spec validation, point analyses, capability
//! curves, design-space sweeps, inverse design, and task feasibility
//! checks over robot description files.
//!
//! Exit codes: 0 on success (all checks passing), 1 on a domain failure
//! (invalid spec, unreachable location, infeasible problem, failed
//! verdicts), 2 on I/O, parse, or usage failures.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use sha2::{Digest, Sha256};

use tipstat::design::{
    run_sweep, solve_design, DesignSolution, Objective, SpecField, SweepAxis, SweepMetric,
    SweepRequest, SweepTable,
};
use tipstat::feasibility::check_manifest;
use tipstat::io::{load_design_problem, load_robot_spec, load_task_manifest};
use tipstat::kinematics::{forward_kinematics, inverse_kinematics, EndEffectorPose};
use tipstat::robot::{validate_spec, Configuration, RobotSpec};
use tipstat::statics::{capability, capability_curve};
use tipstat::{fmt_sig6, Capability, Error, LoadKind, LoadLocation};

const TOOL_VERSION: &str = concat!("tipstat ", env!("CARGO_PKG_VERSION"));

#[derive(Parser)]
#[command(
    name = "tipstat",
    version,
    about = "Static stability analysis and design tools for wheeled mobile manipulators"
)]
struct Cli {
    /// Robot description file (robotspec-v1) used by commands that do not
    /// name one positionally.
    #[arg(
        long,
        global = true,
        value_name = "PATH",
        default_value = "stretch_re1.spec.json"
    )]
    spec: PathBuf,

    /// Output style for command results.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,

    /// Length units for table output. Files and CSV are always SI.
    #[arg(long, global = true, value_enum, default_value_t = Units::Si)]
    units: Units,

    /// Write a JSON record of this invocation: command, input digests,
    /// tool version, output rows.
    #[arg(long, global = true, value_name = "PATH")]
    record: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Table,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Units {
    Si,
    Cm,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Pull,
    Push,
    Backpush,
    Payload,
}

impl From<KindArg> for LoadKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Pull => LoadKind::Pull,
            KindArg::Push => LoadKind::Push,
            KindArg::Backpush => LoadKind::Backpush,
            KindArg::Payload => LoadKind::Payload,
        }
    }
}

/// `MIN:MAX:N` — N evenly spaced values from MIN to MAX inclusive.
#[derive(Clone, Copy)]
struct GridArg {
    min: f64,
    max: f64,
    steps: usize,
}

impl FromStr for GridArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        let [min, max, steps] = parts.as_slice() else {
            return Err(format!("{s:?} is not MIN:MAX:N"));
        };
        Ok(GridArg {
            min: min
                .parse()
                .map_err(|_| format!("grid minimum {min:?} is not a number"))?,
            max: max
                .parse()
                .map_err(|_| format!("grid maximum {max:?} is not a number"))?,
            steps: steps
                .parse()
                .map_err(|_| format!("grid count {steps:?} is not a whole number"))?,
        })
    }
}

impl GridArg {
    /// The grid points; emptiness and ordering problems are left for the
    /// consuming operation to report as domain errors.
    fn points(&self) -> Vec<f64> {
        match self.steps {
            0 => Vec::new(),
            1 => vec![self.min],
            n => (0..n)
                .map(|i| self.min + (self.max - self.min) * i as f64 / (n - 1) as f64)
                .collect(),
        }
    }
}

/// `FIELD=MIN:MAX:N` — one swept spec field with its grid.
#[derive(Clone)]
struct AxisArg {
    field: SpecField,
    grid: GridArg,
}

impl FromStr for AxisArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let Some((field, grid)) = s.split_once('=') else {
            return Err(format!("{s:?} is not FIELD=MIN:MAX:N"));
        };
        Ok(AxisArg {
            field: SpecField::from_key(field).map_err(|e| e.to_string())?,
            grid: grid.parse()?,
        })
    }
}

/// `payload`, `payload@REACH`, or `pull@H` / `push@H` / `backpush@H`.
#[derive(Clone)]
struct MetricArg(SweepMetric<f64>);

impl FromStr for MetricArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (kind, at) = match s.split_once('@') {
            Some((k, v)) => (k, Some(v)),
            None => (s, None),
        };
        let kind = LoadKind::from_str(kind).map_err(|e| e.to_string())?;
        let location = match (kind, at) {
            (LoadKind::Payload, None) => LoadLocation::FullReach,
            (LoadKind::Payload, Some(v)) => LoadLocation::Reach(
                v.parse()
                    .map_err(|_| format!("reach {v:?} is not a number"))?,
            ),
            (_, Some(v)) => LoadLocation::Height(
                v.parse()
                    .map_err(|_| format!("height {v:?} is not a number"))?,
            ),
            (_, None) => {
                return Err(format!("{kind} metric needs a height, e.g. {kind}@0.7"));
            }
        };
        Ok(MetricArg(SweepMetric { kind, location }))
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check a robot description file and report any violations.
    Validate {
        /// File to check; defaults to --spec.
        path: Option<PathBuf>,
    },
    /// Forward kinematics: joint values to tool position.
    #[command(allow_negative_numbers = true)]
    Fk {
        /// Arm extension, m.
        #[arg(long, value_name = "M", default_value_t = 0.0)]
        arm: f64,
        /// Lift height, m.
        #[arg(long, value_name = "M", default_value_t = 0.0)]
        lift: f64,
        /// Base translation along the drive direction, m.
        #[arg(long, value_name = "M", default_value_t = 0.0)]
        base: f64,
        /// Wrist yaw, rad.
        #[arg(long, value_name = "RAD", default_value_t = 0.0)]
        yaw: f64,
        /// Wrist pitch, rad.
        #[arg(long, value_name = "RAD", default_value_t = 0.0)]
        pitch: f64,
        /// Wrist roll, rad.
        #[arg(long, value_name = "RAD", default_value_t = 0.0)]
        roll: f64,
    },
    /// Inverse kinematics: tool position to joint targets.
    #[command(allow_negative_numbers = true)]
    Ik {
        /// Tool position along the arm axis, m.
        #[arg(long, value_name = "M")]
        x: f64,
        /// Tool position along the drive direction, m.
        #[arg(long, value_name = "M")]
        y: f64,
        /// Tool height above the floor, m.
        #[arg(long, value_name = "M")]
        z: f64,
    },
    /// One capability value for a load kind at a location.
    #[command(allow_negative_numbers = true)]
    Analyze {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Load height above the floor, m (pull, push, backpush).
        #[arg(
            long,
            value_name = "M",
            required_if_eq_any([("kind", "pull"), ("kind", "push"), ("kind", "backpush")]),
            conflicts_with = "reach"
        )]
        height: Option<f64>,
        /// Arm extension beyond the wheel edge, m (payload; defaults to
        /// full reach).
        #[arg(long, value_name = "M")]
        reach: Option<f64>,
    },
    /// Capability values over a grid of heights or reaches, as CSV.
    #[command(allow_negative_numbers = true)]
    Curve {
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Heights (forces) or reaches (payload) to evaluate.
        #[arg(long, value_name = "MIN:MAX:N")]
        grid: GridArg,
        /// Write the CSV here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Metric values over a one- or two-axis grid of spec fields.
    Sweep {
        /// Swept field and grid, e.g. D=0.4:0.9:6. Repeat for two axes.
        #[arg(long = "axis", value_name = "FIELD=MIN:MAX:N", required = true)]
        axes: Vec<AxisArg>,
        /// Metric to tabulate. Defaults to payload at full reach.
        #[arg(long = "metric", value_name = "KIND[@X]")]
        metrics: Vec<MetricArg>,
        /// Write the CSV here instead of standard output.
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
    /// Solve a design problem file against the template spec.
    Solve {
        /// Design problem file (designproblem-v1).
        problem: PathBuf,
    },
    /// Check every requirement in a task manifest against a spec.
    Check {
        /// A task manifest (taskreq-v1), optionally preceded by the robot
        /// description file to check it against.
        #[arg(value_name = "PATH", num_args = 1..=2, required = true)]
        paths: Vec<PathBuf>,
    },
}

fn command_name(command: &Command) -> &'static str {
    match command {
        Command::Validate { .. } => "validate",
        Command::Fk { .. } => "fk",
        Command::Ik { .. } => "ik",
        Command::Analyze { .. } => "analyze",
        Command::Curve { .. } => "curve",
        Command::Sweep { .. } => "sweep",
        Command::Solve { .. } => "solve",
        Command::Check { .. } => "check",
    }
}

struct CmdOutput {
    text: String,
    pass: bool,
}

fn ok(text: String) -> Result<CmdOutput, Error> {
    Ok(CmdOutput { text, pass: true })
}

fn version_comment() -> String {
    format!("# tool-version: {TOOL_VERSION}\n")
}

fn fmt_len(v: f64, units: Units) -> String {
    match units {
        Units::Si => format!("{} m", fmt_sig6(v)),
        Units::Cm => format!("{} cm", fmt_sig6(v * 100.0)),
    }
}

fn load_spec(path: &Path, inputs: &mut Vec<PathBuf>) -> Result<RobotSpec<f64>, Error> {
    let spec = load_robot_spec(path)?;
    inputs.push(path.to_path_buf());
    Ok(spec)
}

fn write_out(path: &Path, contents: &str) -> Result<(), Error> {
    fs::write(path, contents).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}

fn render_sweep_table(table: &SweepTable<f64>) -> String {
    let rows: Vec<Vec<String>> = table
        .to_csv()
        .lines()
        .map(|line| line.split(',').map(str::to_string).collect())
        .collect();
    let cols = rows[0].len();
    let widths: Vec<usize> = (0..cols)
        .map(|c| rows.iter().map(|r| r[c].len()).max().unwrap_or(0))
        .collect();
    let mut out = String::new();
    for row in &rows {
        let line: Vec<String> = row
            .iter()
            .zip(&widths)
            .map(|(cell, w)| format!("{cell:>w$}"))
            .collect();
        out.push_str(line.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn solve_report(
    solution: &DesignSolution<f64>,
    objective: &Objective,
    units: Units,
) -> String {
    let mut text = String::new();
    match objective {
        Objective::Minimize(f) | Objective::Maximize(f) => {
            let value = match (f, units) {
                (SpecField::Mass, _) => format!("{} kg", fmt_sig6(solution.objective_value)),
                (_, u) => fmt_len(solution.objective_value, u),
            };
            let _ = writeln!(text, "{} = {value}", f.key());
        }
        Objective::MaximizePayload => {
            let _ = writeln!(text, "payload = {} kg", fmt_sig6(solution.objective_value));
        }
    }
    for report in &solution.reports {
        let _ = writeln!(
            text,
            "{}: achieved {} {}, margin {}",
            report.constraint,
            fmt_sig6(report.achieved.or_infinity()),
            report.constraint.kind.unit(),
            fmt_sig6(report.margin),
        );
    }
    text.push('\n');
    for field in SpecField::ALL {
        let raw = field.get(&solution.spec);
        let value = match field {
            SpecField::Mass => format!("{} kg", fmt_sig6(raw)),
            _ => fmt_len(raw, units),
        };
        let _ = writeln!(text, "  {} = {value}", field.key());
    }
    text
}

fn solve_csv(solution: &DesignSolution<f64>) -> String {
    let mut text = version_comment();
    text.push_str("key,value\n");
    let _ = writeln!(text, "objective,{}", fmt_sig6(solution.objective_value));
    for field in SpecField::ALL {
        let _ = writeln!(text, "{},{}", field.key(), fmt_sig6(field.get(&solution.spec)));
    }
    text
}

fn run(cli: &Cli, inputs: &mut Vec<PathBuf>) -> Result<CmdOutput, Error> {
    match &cli.command {
        Command::Validate { path } => {
            let path = path.as_deref().unwrap_or(&cli.spec);
            let spec = load_spec(path, inputs)?;
            let report = validate_spec(&spec);
            if report.is_valid() {
                ok(format!(
                    "ok: {} is a valid robot description\n",
                    path.display()
                ))
            } else {
                let mut text = String::new();
                for v in report.violations() {
                    let _ = writeln!(text, "invalid: {}: {}", v.field, v.message);
                }
                Ok(CmdOutput { text, pass: false })
            }
        }

        Command::Fk {
            arm,
            lift,
            base,
            yaw,
            pitch,
            roll,
        } => {
            let spec = load_spec(&cli.spec, inputs)?;
            let mut config = Configuration::home();
            config.arm = *arm;
            config.lift = *lift;
            config.base = *base;
            config.wrist_yaw = *yaw;
            config.wrist_pitch = *pitch;
            config.wrist_roll = *roll;
            let pose = forward_kinematics(&spec, &config)?;
            match cli.format {
                Format::Table => ok(format!(
                    "x_e = {}\ny_e = {}\nz_e = {}\n",
                    fmt_len(pose.x, cli.units),
                    fmt_len(pose.y, cli.units),
                    fmt_len(pose.z, cli.units),
                )),
                Format::Csv => ok(format!(
                    "{}x_m,y_m,z_m\n{},{},{}\n",
                    version_comment(),
                    fmt_sig6(pose.x),
                    fmt_sig6(pose.y),
                    fmt_sig6(pose.z),
                )),
            }
        }

        Command::Ik { x, y, z } => {
            let spec = load_spec(&cli.spec, inputs)?;
            let config = inverse_kinematics(&spec, &EndEffectorPose::new(*x, *y, *z))?;
            match cli.format {
                Format::Table => ok(format!(
                    "q_a = {}\nq_m = {}\nq_l = {}\n",
                    fmt_len(config.arm, cli.units),
                    fmt_len(config.base, cli.units),
                    fmt_len(config.lift, cli.units),
                )),
                Format::Csv => ok(format!(
                    "{}q_a_m,q_m_m,q_l_m\n{},{},{}\n",
                    version_comment(),
                    fmt_sig6(config.arm),
                    fmt_sig6(config.base),
                    fmt_sig6(config.lift),
                )),
            }
        }

        Command::Analyze {
            kind,
            height,
            reach,
        } => {
            let spec = load_spec(&cli.spec, inputs)?;
            let kind = LoadKind::from(*kind);
            let location = match kind {
                LoadKind::Payload => {
                    if height.is_some() {
                        return Err(Error::InvalidArgument {
                            what: "analyze flags",
                            detail: "payload takes --reach, not --height".to_string(),
                        });
                    }
                    reach.map(LoadLocation::Reach).unwrap_or(LoadLocation::FullReach)
                }
                _ => LoadLocation::Height(height.expect("clap requires --height for forces")),
            };
            match capability(&spec, kind, location)? {
                Capability::Finite(value) => match cli.format {
                    Format::Table => ok(format!("{} {}\n", fmt_sig6(value), kind.unit())),
                    Format::Csv => ok(format!(
                        "{}kind,location,value\n{kind},{location},{}\n",
                        version_comment(),
                        fmt_sig6(value),
                    )),
                },
                Capability::Unbounded => Err(Error::InvalidArgument {
                    what: "capability",
                    detail: format!("unbounded at {location}"),
                }),
            }
        }

        Command::Curve { kind, grid, out } => {
            let spec = load_spec(&cli.spec, inputs)?;
            let curve = capability_curve(&spec, LoadKind::from(*kind), &grid.points())?;
            let csv = format!("{}{}", version_comment(), curve.to_csv());
            match out {
                Some(path) => {
                    write_out(path, &csv)?;
                    ok(format!(
                        "wrote {} rows to {}\n",
                        curve.grid.len(),
                        path.display()
                    ))
                }
                None => ok(csv),
            }
        }

        Command::Sweep { axes, metrics, out } => {
            let spec = load_spec(&cli.spec, inputs)?;
            let metrics = if metrics.is_empty() {
                vec![SweepMetric {
                    kind: LoadKind::Payload,
                    location: LoadLocation::FullReach,
                }]
            } else {
                metrics.iter().map(|m| m.0).collect()
            };
            let request = SweepRequest {
                template: spec,
                axes: axes
                    .iter()
                    .map(|a| SweepAxis {
                        field: a.field,
                        min: a.grid.min,
                        max: a.grid.max,
                        steps: a.grid.steps,
                    })
                    .collect(),
                metrics,
            };
            let table = run_sweep(&request)?;
            let csv = format!("{}{}", version_comment(), table.to_csv());
            match (out, cli.format) {
                (Some(path), _) => {
                    write_out(path, &csv)?;
                    ok(format!(
                        "wrote {} rows to {}\n",
                        table.rows.len(),
                        path.display()
                    ))
                }
                (None, Format::Csv) => ok(csv),
                (None, Format::Table) => ok(render_sweep_table(&table)),
            }
        }

        Command::Solve { problem } => {
            let template = load_spec(&cli.spec, inputs)?;
            let problem_doc = load_design_problem(problem, template)?;
            inputs.push(problem.clone());
            let solution = solve_design(&problem_doc)?;
            match cli.format {
                Format::Table => ok(solve_report(&solution, &problem_doc.objective, cli.units)),
                Format::Csv => ok(solve_csv(&solution)),
            }
        }

        Command::Check { paths } => {
            let (spec_path, tasks_path) = match paths.as_slice() {
                [tasks] => (cli.spec.clone(), tasks.clone()),
                [spec, tasks] => (spec.clone(), tasks.clone()),
                _ => unreachable!("clap limits check to 1..=2 paths"),
            };
            let spec = load_spec(&spec_path, inputs)?;
            let reqs = load_task_manifest(&tasks_path)?;
            inputs.push(tasks_path);
            let (verdicts, summary) = check_manifest(&spec, &reqs)?;

            let text = match cli.format {
                Format::Table => {
                    let mut text = String::new();
                    for v in &verdicts {
                        let reason = v.reason.map(|r| format!(" ({r})")).unwrap_or_default();
                        let _ = writeln!(
                            text,
                            "{} {}: {} {} {} at {}, capability {} {}, margin {}{reason}",
                            if v.pass { "PASS" } else { "FAIL" },
                            v.requirement.name,
                            v.requirement.kind,
                            fmt_sig6(v.requirement.magnitude),
                            v.requirement.kind.unit(),
                            v.requirement.location,
                            fmt_sig6(v.capability.or_infinity()),
                            v.requirement.kind.unit(),
                            fmt_sig6(v.margin),
                        );
                    }
                    let _ = writeln!(
                        text,
                        "summary: {} passed, {} failed",
                        summary.passed, summary.failed
                    );
                    text
                }
                Format::Csv => {
                    let mut text = version_comment();
                    text.push_str("name,kind,location,required,capability,margin,pass\n");
                    for v in &verdicts {
                        let _ = writeln!(
                            text,
                            "{},{},{},{},{},{},{}",
                            v.requirement.name,
                            v.requirement.kind,
                            v.requirement.location,
                            fmt_sig6(v.requirement.magnitude),
                            fmt_sig6(v.capability.or_infinity()),
                            fmt_sig6(v.margin),
                            v.pass,
                        );
                    }
                    text
                }
            };
            Ok(CmdOutput {
                text,
                pass: summary.all_passed(),
            })
        }
    }
}

#[derive(Serialize)]
struct RecordInput {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunRecord<'a> {
    command: &'a str,
    tool_version: &'a str,
    inputs: Vec<RecordInput>,
    outputs: Vec<String>,
}

fn write_record(
    path: &Path,
    command: &'static str,
    inputs: &[PathBuf],
    stdout: &str,
) -> Result<(), Error> {
    let inputs = inputs
        .iter()
        .map(|p| {
            let bytes = fs::read(p).map_err(|source| Error::Io {
                path: p.display().to_string(),
                source,
            })?;
            Ok(RecordInput {
                path: p.display().to_string(),
                sha256: format!("{:x}", Sha256::digest(&bytes)),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let record = RunRecord {
        command,
        tool_version: TOOL_VERSION,
        inputs,
        outputs: stdout.lines().map(str::to_string).collect(),
    };
    let json = serde_json::to_string_pretty(&record).expect("record serializes") + "\n";
    write_out(path, &json)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut inputs = Vec::new();
    match run(&cli, &mut inputs) {
        Ok(output) => {
            print!("{}", output.text);
            if let Some(record) = &cli.record {
                if let Err(e) =
                    write_record(record, command_name(&cli.command), &inputs, &output.text)
                {
                    eprintln!("error: {e}");
                    return ExitCode::from(2);
                }
            }
            if output.pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_file_error() { 2 } else { 1 })
        }
    }
}
