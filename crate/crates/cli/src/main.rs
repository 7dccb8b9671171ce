//! `grouptest`: run the finite-group property testers and oracles from the
//! command line. Exit status is 0 on accept or success, 1 on reject, and 2
//! on usage or input errors.

use std::fmt::Display;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};
use grouptest_core::harness::{
    certify, fourier_blocks, irrep_table, load_any, load_group, load_matrix, load_scalar, run_experiment, run_tester,
    EpsilonGrid, ExperimentSpec, Family, Instance, OutputFormat, TesterId,
};
use grouptest_core::oracle::{
    distance_to_character_rays, distance_to_class_functions, distance_to_homomorphisms, exact_conjugation_rejection_probability,
    unitary_equivalence_gap, GapSearch,
};
use grouptest_core::rep::{fourier_transform, FunctionData};
use grouptest_core::testers::TesterConfig;
use grouptest_core::{FiniteGroup, IrrepBasis};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

#[derive(Parser)]
#[command(name = "grouptest", version, about = "Property testing of functions on finite groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Irreducible representations and character table of a group.
    Irreps {
        #[arg(long)]
        group: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fourier coefficients of a scalar function.
    Fourier {
        #[arg(long)]
        group: String,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Half-L2 distance between two functions of the same kind.
    Dist {
        #[arg(long)]
        group: String,
        #[arg(long)]
        function: PathBuf,
        #[arg(long)]
        function2: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test whether f is constant on conjugacy classes.
    TestConjinv(TestArgs),
    /// Test whether f is a homomorphism into the unit circle.
    TestHom(TestArgs),
    /// Test whether f is proportional to an irreducible character.
    TestChar(TestArgs),
    /// Test whether f = U g U* for a single unitary U.
    TestUniteq {
        #[command(flatten)]
        test: TestArgs,
        /// The reference function g.
        #[arg(long)]
        function2: PathBuf,
    },
    /// Exact distance of f to a property, with a certificate.
    Oracle {
        #[arg(long)]
        group: String,
        #[arg(long)]
        function: PathBuf,
        /// Reference g, for unitary equivalence.
        #[arg(long)]
        function2: Option<PathBuf>,
        #[arg(long, value_enum)]
        property: Property,
        /// Seed of the restarts in the unitary search.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep a tester over an ε grid and an instance family.
    Experiment(ExperimentArgs),
}

#[derive(Args)]
struct TestArgs {
    #[arg(long)]
    group: String,
    #[arg(long)]
    function: PathBuf,
    #[arg(long)]
    epsilon: f64,
    #[arg(long)]
    seed: u64,
    /// Rounds kept per stage in the report trace.
    #[arg(long, default_value_t = 32)]
    trace_limit: usize,
    /// Embed the oracle certificate for the input in the report.
    #[arg(long)]
    certify: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Property {
    ClassFunction,
    Homomorphism,
    CharacterRay,
    UnitaryEquivalence,
}

#[derive(Args)]
struct ExperimentArgs {
    #[arg(long, value_parser = parse_tester)]
    tester: TesterId,
    #[arg(long)]
    group: String,
    #[arg(long, value_parser = parse_family)]
    family: Family,
    /// Comma-separated family parameters; the family default if omitted.
    #[arg(long, value_delimiter = ',')]
    params: Vec<f64>,
    /// Irrep label for character and homomorphism families.
    #[arg(long)]
    label: Option<usize>,
    /// ε grid as start:stop:count, or a single value.
    #[arg(long, value_parser = parse_grid)]
    epsilon: EpsilonGrid,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Directory for the generated instances.
    #[arg(long)]
    instance_dir: Option<PathBuf>,
    /// Record zero wall time so that output depends only on the inputs.
    #[arg(long)]
    no_timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_tester(s: &str) -> Result<TesterId, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_grid(s: &str) -> Result<EpsilonGrid, String> {
    s.parse().map_err(|e| format!("{e}"))
}

/// An input or usage error, reported on stderr with exit status 2.
struct Failure(String);

impl<E: Display> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure(e.to_string())
    }
}

fn context<T, E: Display>(r: Result<T, E>, what: impl Display) -> Result<T, Failure> {
    r.map_err(|e| Failure(format!("{what}: {e}")))
}

fn group_arg(spec: &str) -> Result<Arc<FiniteGroup>, Failure> {
    context(load_group(spec), format_args!("--group {spec}"))
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => context(std::fs::write(path, format!("{text}\n")), path.display()),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn pretty(value: &serde_json::Value) -> String {
    serde_json::to_string_pretty(value).expect("json value serializes")
}

fn run_test(tester: TesterId, args: &TestArgs, function2: Option<&Path>) -> Result<ExitCode, Failure> {
    let group = group_arg(&args.group)?;
    let arg = |flag: &str, path: &Path| format!("--{flag} {}", path.display());
    let instance = match function2 {
        Some(path2) => Instance::Matrix(
            context(load_matrix(&args.function, &group), arg("function", &args.function))?,
            context(load_matrix(path2, &group), arg("function2", path2))?,
        ),
        None => Instance::Scalar(context(load_scalar(&args.function, &group), arg("function", &args.function))?),
    };
    let mut cfg = TesterConfig::new(args.epsilon, args.seed);
    cfg.trace_limit = args.trace_limit;
    let mut report = run_tester(tester, &instance, &cfg)?;
    if args.certify {
        let basis = match tester {
            TesterId::Homomorphism | TesterId::CharacterProportional => Some(IrrepBasis::compute(group.clone())?),
            _ => None,
        };
        let cert = certify(tester, &instance, basis.as_ref(), args.seed)?;
        report.certificate = Some(serde_json::to_value(&cert)?);
    }
    emit(&report.to_json(), args.out.as_deref())?;
    Ok(if report.accepted() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Irreps { group, out } => {
            let g = group_arg(&group)?;
            let basis = IrrepBasis::compute(g)?;
            emit(&pretty(&serde_json::to_value(irrep_table(&basis))?), out.as_deref())?;
        }
        Command::Fourier { group, function, out } => {
            let g = group_arg(&group)?;
            let f = context(load_scalar(&function, &g), format_args!("--function {}", function.display()))?;
            let basis = IrrepBasis::compute(g)?;
            let coeffs = fourier_transform(&f, &basis)?;
            let value = json!({ "norm_sqr": f.norm_sqr(), "blocks": fourier_blocks(&coeffs, &basis) });
            emit(&pretty(&value), out.as_deref())?;
        }
        Command::Dist { group, function, function2, out } => {
            let g = group_arg(&group)?;
            let a = context(load_any(&function, &g), format_args!("--function {}", function.display()))?;
            let b = context(load_any(&function2, &g), format_args!("--function2 {}", function2.display()))?;
            let distance = match (a, b) {
                (a @ FunctionData::Scalar(_), b @ FunctionData::Scalar(_)) => {
                    a.into_scalar(g.clone())?.distance(&b.into_scalar(g)?)?
                }
                (a @ FunctionData::Matrix { .. }, b @ FunctionData::Matrix { .. }) => {
                    a.into_matrix(g.clone())?.distance(&b.into_matrix(g)?)?
                }
                _ => return Err(Failure("--function and --function2 must both be scalar or both matrix".into())),
            };
            emit(&pretty(&json!({ "distance": distance })), out.as_deref())?;
        }
        Command::TestConjinv(args) => return run_test(TesterId::ConjugateInvariance, &args, None),
        Command::TestHom(args) => return run_test(TesterId::Homomorphism, &args, None),
        Command::TestChar(args) => return run_test(TesterId::CharacterProportional, &args, None),
        Command::TestUniteq { test, function2 } => return run_test(TesterId::UnitaryEquivalence, &test, Some(&function2)),
        Command::Oracle { group, function, function2, property, seed, out } => {
            let g = group_arg(&group)?;
            let flag = format!("--function {}", function.display());
            let value = match property {
                Property::UnitaryEquivalence => {
                    let path2 = function2.ok_or_else(|| Failure("unitary-equivalence needs --function2".into()))?;
                    let f = context(load_matrix(&function, &g), flag)?;
                    let h = context(load_matrix(&path2, &g), format_args!("--function2 {}", path2.display()))?;
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    serde_json::to_value(unitary_equivalence_gap(&f, &h, GapSearch::default(), &mut rng)?)?
                }
                Property::ClassFunction => {
                    let f = context(load_scalar(&function, &g), flag)?;
                    let mut v = serde_json::to_value(distance_to_class_functions(&f))?;
                    v["rejection_probability"] = json!(exact_conjugation_rejection_probability(&f).ok());
                    v
                }
                Property::Homomorphism | Property::CharacterRay => {
                    let f = context(load_scalar(&function, &g), flag)?;
                    let basis = IrrepBasis::compute(g)?;
                    let cert = if matches!(property, Property::Homomorphism) {
                        distance_to_homomorphisms(&f, &basis)?
                    } else {
                        distance_to_character_rays(&f, &basis)?
                    };
                    serde_json::to_value(cert)?
                }
            };
            emit(&pretty(&value), out.as_deref())?;
        }
        Command::Experiment(args) => {
            let spec = ExperimentSpec {
                tester: args.tester,
                group: args.group,
                family: args.family,
                family_params: args.params,
                label: args.label,
                epsilon: args.epsilon,
                trials: args.trials,
                seed: args.seed,
                instance_dir: args.instance_dir,
                no_timing: args.no_timing,
            };
            let format = match args.format {
                Format::Json => OutputFormat::Json,
                Format::Csv => OutputFormat::Csv,
            };
            let result = run_experiment(&spec)?;
            emit(result.render(format).trim_end(), args.out.as_deref())?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(Failure(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}
