use std::io::Write;
use std::time::Instant;

use serde::Serialize;
use topoctl_core::lab::{
    gen_clustered_plus_outlier, gen_lower_bound, gen_uniform_random, oracle_max_depth,
    oracle_min_interference, MinInterference, OracleMeasure,
};
use topoctl_core::{
    is_valid, lnn, network_interference, plan, r_min, transform, uniform_assignment, GridSpec,
    Instance, InterferenceReport, MeasureMode, Model, RadiiAssignment, WitnessPair, SCHEMA,
};

use crate::files::{emit, read_assignment, read_instance, to_json, AssignmentFile};
use crate::{
    AnalyzeArgs, BuildArgs, CliError, CompareArgs, ExplainArgs, GenArgs, GenKind, MeasureArgs,
    Method, OracleArgs, OracleWhat,
};

/// `r_min`, or zero for a single sensor.
fn threshold(instance: &Instance) -> f64 {
    if instance.len() < 2 {
        0.0
    } else {
        r_min(instance).expect("two or more sensors")
    }
}

fn require<T>(value: Option<T>, flag: &str, kind: &str) -> Result<T, CliError> {
    value.ok_or_else(|| CliError::Usage(format!("--{flag} is required for {kind}")))
}

/// Summaries go to stdout once the data went to a file, else to stderr.
fn summarize(to_stdout: bool, bytes: &[u8], stdout: &mut dyn Write, stderr: &mut dyn Write) {
    let _ = if to_stdout {
        stdout.write_all(bytes)
    } else {
        stderr.write_all(bytes)
    };
}

pub(crate) fn gen(
    args: GenArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let instance = match args.kind {
        GenKind::LowerBound => gen_lower_bound(require(args.k, "k", "lower-bound")?)?,
        GenKind::UniformRandom => gen_uniform_random(
            require(args.n, "n", "uniform-random")?,
            args.dim,
            require(args.seed, "seed", "uniform-random")?,
            args.extent,
        )?,
        GenKind::ClusteredPlusOutlier => gen_clustered_plus_outlier(
            require(args.n, "n", "clustered-plus-outlier")?,
            args.dim,
            require(args.seed, "seed", "clustered-plus-outlier")?,
            args.spread,
            args.separation,
        )?,
    };
    emit(args.out.as_deref(), &to_json(&instance), stdout)?;
    let line = format!(
        "n={} d={} r_min={}\n",
        instance.len(),
        instance.dim(),
        threshold(&instance)
    );
    summarize(args.out.is_some(), line.as_bytes(), stdout, stderr);
    Ok(())
}

/// What a construction reports beyond its radii.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "snake_case")]
pub enum BuildDetails {
    Uniform {
        radius: f64,
    },
    Lnn {
        rounds: u32,
        levels: Vec<u32>,
    },
    Bounded {
        radius: f64,
        clusters: usize,
        leaders: usize,
        witnesses: usize,
        raised: usize,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Built {
    pub assignment: RadiiAssignment,
    pub details: BuildDetails,
}

fn lnn_input(instance: &Instance, model: Model) -> RadiiAssignment {
    let res = lnn(instance);
    match model {
        Model::Symmetric => res.symmetric_closure(instance),
        Model::Asymmetric => res.assignment,
    }
}

/// Runs one construction.
///
/// `lnn` under the symmetric model returns the closure in which every
/// parent also reaches its children; the asymmetric model keeps the plain
/// layered radii. `bounded` transforms `input` (default: that LNN output).
pub fn build(
    instance: &Instance,
    method: Method,
    model: Model,
    radius: Option<f64>,
    input: Option<RadiiAssignment>,
) -> topoctl_core::Result<Built> {
    let floor = threshold(instance);
    let radius = radius.unwrap_or(floor);
    if radius < floor {
        return Err(topoctl_core::Error::RadiusBelowThreshold {
            radius,
            r_min: floor,
        });
    }
    match method {
        Method::Uniform => Ok(Built {
            assignment: uniform_assignment(instance, radius)?,
            details: BuildDetails::Uniform { radius },
        }),
        Method::Lnn => {
            let res = lnn(instance);
            let assignment = match model {
                Model::Symmetric => res.symmetric_closure(instance),
                Model::Asymmetric => res.assignment,
            };
            Ok(Built {
                assignment,
                details: BuildDetails::Lnn {
                    rounds: res.rounds,
                    levels: res.levels,
                },
            })
        }
        Method::Bounded => {
            if instance.len() < 2 {
                let assignment = uniform_assignment(instance, radius)?;
                return Ok(Built {
                    assignment,
                    details: BuildDetails::Bounded {
                        radius,
                        clusters: 1,
                        leaders: 1,
                        witnesses: 0,
                        raised: 0,
                    },
                });
            }
            let input = input.unwrap_or_else(|| lnn_input(instance, model));
            let t = transform(instance, &input, radius, model)?;
            let details = BuildDetails::Bounded {
                radius,
                clusters: t.plan.decomposition.clusters.len(),
                leaders: t.plan.leaders.iter().map(Vec::len).sum(),
                witnesses: t.plan.witnesses.len(),
                raised: t.raised(&input).len(),
            };
            Ok(Built {
                assignment: t.assignment,
                details,
            })
        }
    }
}

#[derive(Serialize)]
struct BuildReport<'a> {
    schema: &'static str,
    model: Model,
    n: usize,
    r_min: f64,
    max_radius: f64,
    valid: bool,
    #[serde(flatten)]
    details: &'a BuildDetails,
}

pub(crate) fn build_cmd(
    args: BuildArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    let input = match &args.input {
        Some(path) => Some(read_assignment(path)?.0),
        None => None,
    };
    let built = build(&instance, args.method, args.model, args.radius, input)?;

    let mut file = AssignmentFile::new(args.method.name(), args.model, &built.assignment);
    if let BuildDetails::Lnn { rounds, levels } = &built.details {
        file.rounds = Some(*rounds);
        file.levels = Some(levels.clone());
    }
    emit(args.out.as_deref(), &to_json(&file), stdout)?;

    let report = BuildReport {
        schema: SCHEMA,
        model: args.model,
        n: instance.len(),
        r_min: threshold(&instance),
        max_radius: built.assignment.max_radius(),
        valid: is_valid(&instance, &built.assignment, args.model)?,
        details: &built.details,
    };
    summarize(args.out.is_some(), &to_json(&report), stdout, stderr);
    Ok(())
}

fn measure(
    instance: &Instance,
    r: &RadiiAssignment,
    args: &MeasureArgs,
) -> topoctl_core::Result<InterferenceReport> {
    let mode = args.mode_for(instance.dim());
    network_interference(instance, r, mode, Some(args.samples), args.seed)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HistogramBin {
    pub lo: f64,
    pub hi: f64,
    pub count: usize,
}

/// Equal-width bins over `[0, max radius]`; the last bin is closed.
pub fn histogram(r: &RadiiAssignment, bins: usize) -> Vec<HistogramBin> {
    let bins = bins.max(1);
    let max = r.max_radius();
    let width = max / bins as f64;
    let mut out: Vec<HistogramBin> = (0..bins)
        .map(|i| HistogramBin {
            lo: width * i as f64,
            hi: if i + 1 == bins {
                max
            } else {
                width * (i + 1) as f64
            },
            count: 0,
        })
        .collect();
    for &x in r.radii() {
        let i = if max > 0.0 {
            ((x / width) as usize).min(bins - 1)
        } else {
            0
        };
        out[i].count += 1;
    }
    out
}

#[derive(Serialize)]
struct AnalyzeReport {
    schema: &'static str,
    #[serde(flatten)]
    interference: InterferenceReport,
    model: Model,
    valid: bool,
    max_radius: f64,
    histogram: Vec<HistogramBin>,
}

pub(crate) fn analyze(args: AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    let (r, recorded) = read_assignment(&args.assignment)?;
    let model = args.model.or(recorded).unwrap_or_default();
    let interference = measure(&instance, &r, &args.measure)?;
    let report = AnalyzeReport {
        schema: SCHEMA,
        interference,
        model,
        valid: is_valid(&instance, &r, model)?,
        max_radius: r.max_radius(),
        histogram: histogram(&r, args.bins),
    };
    emit(args.out.as_deref(), &to_json(&report), stdout)
}

/// One row of the `compare` table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareRow {
    pub method: String,
    pub max_radius: f64,
    pub interference: usize,
    pub valid: bool,
    /// Construction time only.
    pub runtime_ms: f64,
}

pub fn compare(
    instance: &Instance,
    methods: &[Method],
    model: Model,
    radius: Option<f64>,
    args: &MeasureArgs,
) -> topoctl_core::Result<Vec<CompareRow>> {
    methods
        .iter()
        .map(|&method| {
            let started = Instant::now();
            let built = build(instance, method, model, radius, None)?;
            let runtime_ms = started.elapsed().as_secs_f64() * 1e3;
            Ok(CompareRow {
                method: method.name().to_string(),
                max_radius: built.assignment.max_radius(),
                interference: measure(instance, &built.assignment, args)?.value,
                valid: is_valid(instance, &built.assignment, model)?,
                runtime_ms: (runtime_ms * 1e3).round() / 1e3,
            })
        })
        .collect()
}

pub(crate) fn compare_cmd(args: CompareArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    if args.methods.is_empty() {
        return Err(CliError::Usage("at least one method is required".into()));
    }
    let instance = read_instance(&args.instance)?;
    let rows = compare(
        &instance,
        &args.methods,
        args.model,
        args.radius,
        &args.measure,
    )?;
    let mut table = csv::Writer::from_writer(Vec::new());
    for row in &rows {
        table.serialize(row)?;
    }
    let bytes = table.into_inner().map_err(|e| CliError::Io {
        path: "<csv>".into(),
        source: e.into_error(),
    })?;
    emit(args.out.as_deref(), &bytes, stdout)
}

#[derive(Serialize)]
struct MinInterferenceReport {
    schema: &'static str,
    what: &'static str,
    n: usize,
    exact: MinInterference,
    at_sensors: MinInterference,
}

#[derive(Serialize)]
struct MaxDepthReport {
    schema: &'static str,
    what: &'static str,
    pitch: f64,
    value: usize,
    point: Vec<f64>,
    grid_points: usize,
    exact: usize,
}

fn smallest_gap(instance: &Instance) -> Option<f64> {
    let n = instance.len();
    (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| instance.dist(u, v)))
        .filter(|&d| d > 0.0)
        .min_by(f64::total_cmp)
}

pub(crate) fn oracle(args: OracleArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    let bytes = match args.what {
        OracleWhat::MinInterference => {
            let at_sensors =
                oracle_min_interference(&instance, OracleMeasure::AtSensors, args.model)?;
            let exact = oracle_min_interference(&instance, OracleMeasure::Exact, args.model)?;
            to_json(&MinInterferenceReport {
                schema: SCHEMA,
                what: "min_interference",
                n: instance.len(),
                exact,
                at_sensors,
            })
        }
        OracleWhat::MaxDepth => {
            let path = require(args.assignment, "assignment", "max-depth")?;
            let (r, _) = read_assignment(&path)?;
            let pitch = match args.pitch {
                Some(p) => p,
                None => {
                    smallest_gap(&instance)
                        .or_else(|| Some(r.max_radius()).filter(|&m| m > 0.0))
                        .unwrap_or(1.0)
                        / 8.0
                }
            };
            let probe = oracle_max_depth(&instance, &r, pitch)?;
            let mode = MeasureMode::exact_for(instance.dim()).expect("oracle checked dimension");
            let exact = network_interference(&instance, &r, mode, None, None)?.value;
            to_json(&MaxDepthReport {
                schema: SCHEMA,
                what: "max_depth",
                pitch,
                value: probe.value,
                point: probe.point,
                grid_points: probe.grid_points,
                exact,
            })
        }
    };
    emit(args.out.as_deref(), &bytes, stdout)
}

#[derive(Serialize)]
struct ClusterView {
    id: usize,
    bucket: Vec<i64>,
    members: Vec<usize>,
    leaders: Vec<usize>,
    neighbors: Vec<usize>,
    promoted: usize,
}

#[derive(Serialize)]
struct ExplainReport {
    schema: &'static str,
    radius: f64,
    r_min: f64,
    grid: GridSpec,
    clusters: Vec<ClusterView>,
    witnesses: Vec<WitnessPair>,
}

pub(crate) fn explain(args: ExplainArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let instance = read_instance(&args.instance)?;
    let floor = threshold(&instance);
    let radius = match args.radius {
        Some(r) => r,
        None if floor > 0.0 => floor,
        None => {
            return Err(CliError::Usage(
                "--radius is required when r_min is zero".into(),
            ))
        }
    };
    let p = plan(&instance, radius)?;
    let promoted = p.promoted_per_cluster();
    let clusters = p
        .decomposition
        .clusters
        .iter()
        .enumerate()
        .map(|(id, c)| ClusterView {
            id,
            bucket: c.bucket.clone(),
            members: c.members.clone(),
            leaders: p.leaders[id].clone(),
            neighbors: p.neighbors(id),
            promoted: promoted[id],
        })
        .collect();
    let report = ExplainReport {
        schema: SCHEMA,
        radius,
        r_min: floor,
        grid: p.decomposition.grid.clone(),
        clusters,
        witnesses: p.witnesses.clone(),
    };
    emit(args.out.as_deref(), &to_json(&report), stdout)
}
