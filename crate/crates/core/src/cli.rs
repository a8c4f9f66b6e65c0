//! Command-line front end. Every subcommand reads and writes the JSON formats
//! of [`crate::io`]; exit code 0 means success, 2 means the checked predicate
//! is false, 1 means the check could not be carried out.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gibbs::{gibbs_to_modalities, moebius_potentials, project_to_tilde_k, project_to_tilde_r};
use crate::io;
use crate::joint::{
    component_membership, is_r_robust_distribution, proportionality_witness, random_robust_distribution,
    sample_from_component, support_structure, ComponentParams,
};
use crate::kernels::{modalities_witness, robustness_witness, DEFAULT_TOL};
use crate::neural::{renormalized_threshold_modalities, threshold_modalities, Beta, ThresholdParams};
use crate::robustness::RobustnessSpec;
use crate::scalar::{Rational, Scalar};
use crate::space::NodeSet;
use crate::structures::{
    build_graph, components_of, enumerate_maximal_structures_with, export_dot, is_maximal,
    max_singleton_code_size, structure_size_bound, EnumerateOptions,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FALSE: i32 = 2;
pub const EXIT_ERROR: i32 = 1;

const SCHEMAS: &str = "\
File formats (JSON):
  spec          {\"cardinalities\":[d0,d1,...,dn],\"pairs\":[{\"R\":[1,2],\"x\":[0,1]},{\"R\":[3],\"x\":\"ALL\"}]}
  set           {\"states\":[0,5,...]}  or  {\"coords\":[[0,1,0],...]}
  structure     {\"blocks\":[[0,1],[6]]}
  kernel        {\"cardinalities\":[...],\"domain\":[1,2],\"rows\":{\"0\":[\"1/2\",\"1/2\"],...}}
  modalities    {\"cardinalities\":[...],\"modalities\":[<kernel without cardinalities>, ...]}
  potentials    {\"cardinalities\":[...],\"potentials\":[{\"domain\":[...],\"rows\":{...}}, ...]}
  distribution  {\"cardinalities\":[...],\"entries\":{\"(x0,x)\":\"p/q\",...}}
States are dense indices with node 1 varying slowest; output value index 0 comes first.
Exit codes: 0 success, 2 predicate false, 1 error.";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Rational,
    Float,
}

#[derive(Parser, Debug)]
#[command(name = "knockout", version, about = "Knockout-robust stochastic maps on finite state spaces")]
#[command(after_help = SCHEMAS)]
pub struct Cli {
    /// Arithmetic for probabilities read from files.
    #[arg(long, global = true, value_enum, default_value = "rational")]
    pub mode: Mode,
    /// Tolerance for float comparisons; rational mode compares exactly.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    /// Seed for randomized generators.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Write the main result here instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug)]
pub struct SpecSet {
    #[arg(long)]
    pub spec: PathBuf,
    /// State set; defaults to all input states.
    #[arg(long)]
    pub set: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Robustness graph on a state set, as DOT.
    Graph(SpecSet),
    /// Connected components of the robustness graph, as a structure.
    Components {
        #[command(flatten)]
        input: SpecSet,
        /// Also write the clustered graph as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Enumerate maximal robustness structures, or test one with --check.
    Maximal {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        limit: Option<usize>,
        /// One representative per class under node and value permutations.
        #[arg(long)]
        up_to_symmetry: bool,
        /// Structure file to test for maximality (exit 2 if not maximal).
        #[arg(long, conflicts_with_all = ["limit", "up_to_symmetry"])]
        check: Option<PathBuf>,
    },
    /// Test a kernel or a family of knockout modalities for robustness.
    CheckRobust {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, required_unless_present = "modalities", conflicts_with = "modalities")]
        kernel: Option<PathBuf>,
        #[arg(long)]
        modalities: Option<PathBuf>,
        /// Restrict to a state set; defaults to all input states.
        #[arg(long)]
        set: Option<PathBuf>,
    },
    /// Convert modalities to Möbius potentials or potentials back to modalities.
    Gibbs {
        #[arg(long, required_unless_present = "potentials", conflicts_with = "potentials")]
        modalities: Option<PathBuf>,
        #[arg(long)]
        potentials: Option<PathBuf>,
    },
    /// Geometric-mean projection onto the k-robust or spec-robust family.
    Project {
        #[arg(long)]
        modalities: PathBuf,
        #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
        k: Option<usize>,
        #[arg(long)]
        spec: Option<PathBuf>,
    },
    /// Test a joint distribution for the conditional independences of a spec.
    #[command(alias = "verify-ci")]
    Ci {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sample a robust joint distribution from a structure's component.
    #[command(alias = "sample-joint")]
    Sample {
        #[arg(long)]
        spec: PathBuf,
        /// Structure to sample from; defaults to a random structure of the spec.
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Robustness structure of a distribution's support and its component.
    DecomposeSupport {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        spec: PathBuf,
    },
    /// Upper bound on the number of blocks; with --structure, test it.
    Bound {
        #[arg(long)]
        spec: PathBuf,
        /// Nodes of R, comma separated; defaults to every subset.
        #[arg(long, value_delimiter = ',')]
        nodes: Option<Vec<usize>>,
        #[arg(long)]
        structure: Option<PathBuf>,
    },
    /// Largest code with all pairwise Hamming distances at least n − k + 1.
    CodeSize {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: usize,
        /// Alphabet size.
        #[arg(long, default_value_t = 2)]
        d: usize,
    },
    /// Knockout modalities of a sigmoid threshold unit.
    Neuron {
        /// Comma-separated decimal weights.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true, required = true)]
        weights: Vec<String>,
        #[arg(long, default_value = "0", allow_hyphen_values = true)]
        eta: String,
        /// Decimal inverse temperature or "inf".
        #[arg(long, default_value = "1")]
        beta: String,
        /// Amplify surviving weights by n/|A|.
        #[arg(long)]
        renormalized: bool,
    },
}

/// Outcome of a subcommand: the main artifact, notes for stderr, exit code.
struct Report {
    body: String,
    notes: Vec<String>,
    code: i32,
}

impl Report {
    fn json(value: Value) -> Self {
        Report { body: io::to_text(&value), notes: Vec::new(), code: EXIT_OK }
    }

    fn verdict(value: Value, holds: bool) -> Self {
        Report { code: if holds { EXIT_OK } else { EXIT_FALSE }, ..Report::json(value) }
    }

    fn note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the exit code.
pub fn run<I, S>(argv: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, S>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return EXIT_OK;
            }
            let _ = write!(err, "{e}\n{SCHEMAS}\n");
            return EXIT_ERROR;
        }
    };
    let report = match execute(&cli) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    for note in &report.notes {
        let _ = writeln!(err, "{note}");
    }
    let written = match &cli.output {
        Some(path) => std::fs::write(path, &report.body).map_err(|e| format!("{}: {e}", path.display())),
        None => out.write_all(report.body.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(e) = written {
        let _ = writeln!(err, "error: {e}");
        return EXIT_ERROR;
    }
    report.code
}

fn read_spec(path: &Path) -> Result<RobustnessSpec> {
    io::spec_from_json(&io::read_json(path)?)
}

fn read_set(path: Option<&PathBuf>, spec: &RobustnessSpec) -> Result<Vec<usize>> {
    match path {
        Some(p) => io::states_from_json(&io::read_json(p)?, spec.space()),
        None => Ok((0..spec.space().input_size()).collect()),
    }
}

fn read_structure(path: &Path, spec: &RobustnessSpec) -> Result<crate::structures::RobustnessStructure> {
    io::structure_from_json(&io::read_json(path)?, spec.space())
}

fn parse_decimal(s: &str, what: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| Error::Parse(format!("{what}: expected a decimal number, got {s:?}")))
}

fn execute(cli: &Cli) -> Result<Report> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(Error::InvalidParameter(format!("tolerance must be positive, got {}", cli.tol)));
    }
    let tol = cli.tol;
    match &cli.command {
        Command::Graph(input) => {
            let spec = read_spec(&input.spec)?;
            let graph = build_graph(&spec, &read_set(input.set.as_ref(), &spec)?)?;
            Ok(Report { body: export_dot(&graph, None), notes: Vec::new(), code: EXIT_OK })
        }
        Command::Components { input, dot } => {
            let spec = read_spec(&input.spec)?;
            let set = read_set(input.set.as_ref(), &spec)?;
            let structure = components_of(&spec, &set)?;
            if let Some(path) = dot {
                let text = export_dot(&build_graph(&spec, &set)?, Some(&structure));
                std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            }
            let n = structure.len();
            Ok(Report::json(io::structure_to_json(&structure)).note(format!("{n} component(s)")))
        }
        Command::Maximal { spec, limit, up_to_symmetry, check } => {
            let spec = read_spec(spec)?;
            if let Some(path) = check {
                let structure = read_structure(path, &spec)?;
                let set = structure.union();
                let is_structure = components_of(&spec, &set)? == structure;
                let maximal = is_structure && is_maximal(&structure, &spec)?;
                return Ok(Report::verdict(json!({"structure": is_structure, "maximal": maximal}), maximal));
            }
            let opts = EnumerateOptions { limit: *limit, up_to_symmetry: *up_to_symmetry };
            let found = enumerate_maximal_structures_with(&spec, &opts)?;
            let list: Vec<Value> = found.iter().map(io::structure_to_json).collect();
            Ok(Report::json(json!({"count": list.len(), "structures": list})))
        }
        Command::CheckRobust { spec, kernel, modalities, set } => {
            let spec = read_spec(spec)?;
            let set = read_set(set.as_ref(), &spec)?;
            match cli.mode {
                Mode::Rational => check_robust::<Rational>(&spec, kernel.as_deref(), modalities.as_deref(), &set, tol),
                Mode::Float => check_robust::<f64>(&spec, kernel.as_deref(), modalities.as_deref(), &set, tol),
            }
        }
        Command::Gibbs { modalities, potentials } => {
            if let Some(path) = modalities {
                let m = io::modalities_from_json::<f64>(&io::read_json(path)?, None)?;
                Ok(Report::json(io::potentials_to_json(&moebius_potentials(&m)?)))
            } else {
                let path = potentials.as_ref().expect("clap requires one input");
                let p = io::potentials_from_json(&io::read_json(path)?)?;
                Ok(Report::json(io::modalities_to_json(&gibbs_to_modalities(&p))))
            }
        }
        Command::Project { modalities, k, spec } => {
            let m = io::modalities_from_json::<f64>(&io::read_json(modalities)?, None)?;
            let projection = match (k, spec) {
                (Some(k), _) => project_to_tilde_k(&m, *k)?,
                (None, Some(path)) => {
                    let spec = read_spec(path)?;
                    if spec.space() != m.space() {
                        return Err(Error::Shape("specification and modalities use different spaces".into()));
                    }
                    project_to_tilde_r(&m, &spec)?
                }
                (None, None) => unreachable!("clap requires --k or --spec"),
            };
            let mut report = Report::json(io::modalities_to_json(&projection.modalities));
            for (domain, row) in &projection.degenerate {
                report = report.note(format!("warning: degenerate row {row} of domain {domain} set to uniform"));
            }
            Ok(report)
        }
        Command::Ci { dist, spec } => {
            let spec = read_spec(spec)?;
            let value = io::read_json(dist)?;
            match cli.mode {
                Mode::Rational => verify_ci(&io::distribution_from_json::<Rational>(&value)?, &spec, tol),
                Mode::Float => verify_ci(&io::distribution_from_json::<f64>(&value)?, &spec, tol),
            }
        }
        Command::Sample { spec, structure } => {
            let spec = read_spec(spec)?;
            let structure = structure.as_ref().map(|p| read_structure(p, &spec)).transpose()?;
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            match cli.mode {
                Mode::Rational => sample::<Rational>(&spec, structure, &mut rng),
                Mode::Float => sample::<f64>(&spec, structure, &mut rng),
            }
        }
        Command::DecomposeSupport { dist, spec } => {
            let spec = read_spec(spec)?;
            let value = io::read_json(dist)?;
            match cli.mode {
                Mode::Rational => decompose(&io::distribution_from_json::<Rational>(&value)?, &spec, tol),
                Mode::Float => decompose(&io::distribution_from_json::<f64>(&value)?, &spec, tol),
            }
        }
        Command::Bound { spec, nodes, structure } => {
            let spec = read_spec(spec)?;
            let n = spec.space().n();
            let sets: Vec<NodeSet> = match nodes {
                Some(list) => {
                    for &node in list {
                        spec.space().check_node(node)?;
                    }
                    vec![NodeSet::from_nodes(list.iter().copied())]
                }
                None => NodeSet::all(n).collect(),
            };
            let mut bounds = Vec::new();
            for &r in &sets {
                bounds.push((r, structure_size_bound(&spec, r)?));
            }
            let list: Vec<Value> = bounds
                .iter()
                .map(|(r, b)| json!({"R": r.nodes().collect::<Vec<_>>(), "bound": b}))
                .collect();
            match structure {
                None => Ok(Report::json(json!({ "bounds": list }))),
                Some(path) => {
                    let st = read_structure(path, &spec)?;
                    let holds = bounds.iter().all(|&(_, b)| st.len() <= b);
                    Ok(Report::verdict(json!({"blocks": st.len(), "within_bound": holds, "bounds": list}), holds))
                }
            }
        }
        Command::CodeSize { n, k, d } => {
            let size = max_singleton_code_size(*n, *k, *d)?;
            Ok(Report::json(json!({"n": n, "k": k, "d": d, "size": size})))
        }
        Command::Neuron { weights, eta, beta, renormalized } => {
            let weights = weights.iter().map(|w| parse_decimal(w, "weight")).collect::<Result<Vec<_>>>()?;
            let eta = parse_decimal(eta, "eta")?;
            let beta = match beta.trim() {
                "inf" | "infinity" | "∞" => Beta::Infinite,
                b => Beta::Finite(parse_decimal(b, "beta")?),
            };
            let params = ThresholdParams::new(weights, eta, beta)?;
            let m = if *renormalized {
                renormalized_threshold_modalities(&params)?
            } else {
                threshold_modalities(&params)?
            };
            Ok(Report::json(io::modalities_to_json(&m)))
        }
    }
}

fn coords(spec: &RobustnessSpec, x: usize) -> Value {
    json!(spec.space().coords_of(x))
}

fn check_robust<T: Scalar>(
    spec: &RobustnessSpec,
    kernel: Option<&Path>,
    modalities: Option<&Path>,
    set: &[usize],
    tol: f64,
) -> Result<Report> {
    if let Some(path) = kernel {
        let kappa = io::kernel_from_json::<T>(&io::read_json(path)?, Some(spec.space()))?;
        if kappa.space() != spec.space() {
            return Err(Error::Shape("specification and kernel use different spaces".into()));
        }
        return Ok(match robustness_witness(&kappa, spec, set, tol)? {
            None => Report::verdict(json!({"robust": true}), true),
            Some((x, y)) => Report::verdict(
                json!({"robust": false, "witness": {"edge": [x, y], "x": coords(spec, x), "y": coords(spec, y)}}),
                false,
            )
            .note(format!("not robust: adjacent states {x} and {y} have different rows")),
        });
    }
    let path = modalities.expect("clap requires one input");
    let m = io::modalities_from_json::<T>(&io::read_json(path)?, Some(spec.space()))?;
    if m.space() != spec.space() {
        return Err(Error::Shape("specification and modalities use different spaces".into()));
    }
    Ok(match modalities_witness(&m, spec, set, tol)? {
        None => Report::verdict(json!({"robust": true}), true),
        Some((x, r)) => {
            let r: Vec<usize> = r.nodes().collect();
            Report::verdict(
                json!({"robust": false, "witness": {"state": x, "x": coords(spec, x), "R": r}}),
                false,
            )
            .note(format!("not robust: knocking out all inputs outside {r:?} changes the output at state {x}"))
        }
    })
}

fn verify_ci<T: Scalar>(p: &crate::joint::JointDistribution<T>, spec: &RobustnessSpec, tol: f64) -> Result<Report> {
    if p.space() != spec.space() {
        return Err(Error::Shape("specification and distribution use different spaces".into()));
    }
    if is_r_robust_distribution(p, spec, tol)? {
        return Ok(Report::verdict(json!({"robust": true}), true));
    }
    let witness = proportionality_witness(p, spec, tol)?
        .map(|(x, y)| json!({"x": x, "y": y}))
        .unwrap_or(Value::Null);
    Ok(Report::verdict(json!({"robust": false, "witness": witness}), false))
}

fn sample<T: Scalar>(
    spec: &RobustnessSpec,
    structure: Option<crate::structures::RobustnessStructure>,
    rng: &mut ChaCha8Rng,
) -> Result<Report> {
    let (p, structure) = match structure {
        Some(st) => {
            if components_of(spec, &st.union())? != st {
                return Err(Error::InconsistentStructure);
            }
            let params = ComponentParams::<T>::random(&st, spec.space().output_size(), rng);
            (sample_from_component(spec.space(), &st, &params)?, st)
        }
        None => random_robust_distribution::<T, _>(spec, rng)?,
    };
    Ok(Report::json(io::distribution_to_json(&p)).note(format!("structure: {}", io::structure_to_json(&structure))))
}

fn decompose<T: Scalar>(p: &crate::joint::JointDistribution<T>, spec: &RobustnessSpec, tol: f64) -> Result<Report> {
    let structure = support_structure(p, spec)?;
    let member = component_membership(p, &structure, tol)?;
    let maximal = is_maximal(&structure, spec)?;
    Ok(Report::verdict(
        json!({"blocks": structure.blocks(), "in_component": member, "maximal": maximal}),
        member,
    ))
}
