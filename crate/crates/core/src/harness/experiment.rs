//! Sweeps of a tester over an ε grid and instance family parameters.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::families::{generate, Family, Instance};
use super::io::write_file;
use crate::error::{HarnessError, TesterError};
use crate::group::FiniteGroup;
use crate::oracle::{
    distance_to_character_rays, distance_to_class_functions, distance_to_homomorphisms, unitary_equivalence_gap,
    FarnessCertificate, GapSearch, Method,
};
use crate::rep::IrrepBasis;
use crate::testers::{
    test_character_proportional, test_conjugate_invariance, test_homomorphism, test_unitary_equivalence, MatrixOracle,
    QueryOracle, TesterConfig, TesterReport,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TesterId {
    #[serde(rename = "test-conjinv")]
    ConjugateInvariance,
    #[serde(rename = "test-hom")]
    Homomorphism,
    #[serde(rename = "test-char")]
    CharacterProportional,
    #[serde(rename = "test-uniteq")]
    UnitaryEquivalence,
}

impl TesterId {
    pub fn name(self) -> &'static str {
        match self {
            TesterId::ConjugateInvariance => "test-conjinv",
            TesterId::Homomorphism => "test-hom",
            TesterId::CharacterProportional => "test-char",
            TesterId::UnitaryEquivalence => "test-uniteq",
        }
    }

    pub fn accepts(self, family: Family) -> bool {
        family.is_matrix() == (self == TesterId::UnitaryEquivalence)
    }
}

impl FromStr for TesterId {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [
            TesterId::ConjugateInvariance,
            TesterId::Homomorphism,
            TesterId::CharacterProportional,
            TesterId::UnitaryEquivalence,
        ]
        .into_iter()
        .find(|t| t.name() == s)
        .ok_or_else(|| HarnessError::InvalidSpec(format!("unknown tester {s:?}")))
    }
}

/// Runs `tester` on `instance` with an RNG seeded from `cfg.seed`.
pub fn run_tester(tester: TesterId, instance: &Instance, cfg: &TesterConfig) -> Result<TesterReport, TesterError> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    match (tester, instance) {
        (TesterId::UnitaryEquivalence, Instance::Matrix(f, g)) => {
            test_unitary_equivalence(&mut MatrixOracle::new(f), g, cfg, &mut rng)
        }
        (TesterId::UnitaryEquivalence, Instance::Scalar(_)) | (_, Instance::Matrix(..)) => {
            Err(TesterError::Config(format!("{} does not take this kind of function", tester.name())))
        }
        (t, Instance::Scalar(f)) => {
            let mut oracle = QueryOracle::with_tolerance(f, cfg.value_tolerance);
            match t {
                TesterId::ConjugateInvariance => test_conjugate_invariance(&mut oracle, cfg, &mut rng),
                TesterId::Homomorphism => test_homomorphism(&mut oracle, cfg, &mut rng),
                TesterId::CharacterProportional => test_character_proportional(&mut oracle, cfg, &mut rng),
                TesterId::UnitaryEquivalence => unreachable!(),
            }
        }
    }
}

/// The oracle certificate for the property `tester` checks.
pub fn certify(
    tester: TesterId,
    instance: &Instance,
    basis: Option<&IrrepBasis>,
    seed: u64,
) -> Result<FarnessCertificate, HarnessError> {
    let need_basis = || basis.ok_or_else(|| HarnessError::InvalidSpec("certificate needs the irreps".into()));
    Ok(match (tester, instance) {
        (TesterId::ConjugateInvariance, Instance::Scalar(f)) => distance_to_class_functions(f),
        (TesterId::Homomorphism, Instance::Scalar(f)) => distance_to_homomorphisms(f, need_basis()?)?,
        (TesterId::CharacterProportional, Instance::Scalar(f)) => distance_to_character_rays(f, need_basis()?)?,
        (TesterId::UnitaryEquivalence, Instance::Matrix(f, g)) => {
            let search = GapSearch {
                restarts: 4,
                ..GapSearch::default()
            };
            unitary_equivalence_gap(f, g, search, &mut ChaCha8Rng::seed_from_u64(seed))?
        }
        _ => return Err(HarnessError::InvalidSpec("instance kind does not match the tester".into())),
    })
}

/// The distance a certificate vouches for: the exact value, or the rigorous
/// lower bound for heuristic searches.
pub fn certified_distance(cert: &FarnessCertificate) -> f64 {
    match cert.method {
        Method::Heuristic => cert.lower_bound.unwrap_or(0.0),
        _ => cert.distance,
    }
}

/// `start:stop:count`, evenly spaced with both ends included.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl EpsilonGrid {
    pub fn values(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|i| self.start + step * i as f64).collect()
    }
}

impl FromStr for EpsilonGrid {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || HarnessError::InvalidSpec(format!("epsilon grid {s:?} is not start:stop:count"));
        let parts: Vec<&str> = s.split(':').collect();
        let grid = match parts.as_slice() {
            [single] => {
                let e: f64 = single.parse().map_err(|_| bad())?;
                EpsilonGrid {
                    start: e,
                    stop: e,
                    count: 1,
                }
            }
            [a, b, c] => EpsilonGrid {
                start: a.parse().map_err(|_| bad())?,
                stop: b.parse().map_err(|_| bad())?,
                count: c.parse().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        if grid.count == 0 || grid.values().iter().any(|&e| !(e > 0.0 && e <= 1.0)) {
            return Err(HarnessError::InvalidSpec(format!("epsilon grid {s:?} must have values in (0, 1]")));
        }
        Ok(grid)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    pub tester: TesterId,
    pub group: String,
    pub family: Family,
    /// One cell per (ε, parameter) pair; empty means the family default.
    #[serde(default)]
    pub family_params: Vec<f64>,
    /// Irrep label for character and homomorphism families.
    #[serde(default)]
    pub label: Option<usize>,
    pub epsilon: EpsilonGrid,
    pub trials: usize,
    pub seed: u64,
    /// Directory receiving one `.fn` file per generated instance.
    #[serde(default)]
    pub instance_dir: Option<PathBuf>,
    /// Record zero wall time so that repeated runs are byte-identical.
    #[serde(default)]
    pub no_timing: bool,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !self.tester.accepts(self.family) {
            return Err(HarnessError::IncompatibleFamily {
                tester: self.tester.name().into(),
                family: self.family.name().into(),
            });
        }
        if self.trials == 0 {
            return Err(HarnessError::InvalidSpec("trials must be at least 1".into()));
        }
        Ok(())
    }

    fn params(&self) -> Vec<f64> {
        if self.family_params.is_empty() {
            vec![self.family.default_param()]
        } else {
            self.family_params.clone()
        }
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `base ⊕ h(cell, trial)` with `h` built from splitmix64. Trial `0` seeds
/// the instance of the cell; trials proper use `1..=trials`.
pub fn trial_seed(base: u64, cell: u64, trial: u64) -> u64 {
    base ^ splitmix64(splitmix64(cell) ^ trial)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRow {
    pub epsilon: f64,
    pub family_param: f64,
    pub trials: usize,
    pub accept_rate: f64,
    pub mean_queries: f64,
    pub max_queries: u64,
    pub certified_distance: f64,
    pub wall_ms: u64,
    pub certificate: FarnessCertificate,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub instance_files: Vec<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub tool_version: String,
    pub spec: ExperimentSpec,
    pub rows: Vec<ExperimentRow>,
}

pub const CSV_HEADER: &str = "epsilon,family_param,trials,accept_rate,mean_queries,max_queries,certified_distance,wall_ms";

impl ExperimentResult {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("result serializes")
    }

    /// Same numbers as the JSON rows; floats use the shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(CSV_HEADER);
        out.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                r.epsilon,
                r.family_param,
                r.trials,
                r.accept_rate,
                r.mean_queries,
                r.max_queries,
                r.certified_distance,
                r.wall_ms
            );
        }
        out
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Json => self.to_json(),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

fn log_instance(dir: &Path, cell: usize, instance: &Instance) -> Result<Vec<String>, HarnessError> {
    let files = match instance {
        Instance::Scalar(f) => vec![(format!("cell{cell}.fn"), f.to_fn_string())],
        Instance::Matrix(f, g) => vec![
            (format!("cell{cell}_f.fn"), f.to_fn_string()),
            (format!("cell{cell}_g.fn"), g.to_fn_string()),
        ],
    };
    let mut names = Vec::new();
    for (name, text) in files {
        let path = dir.join(&name);
        write_file(&path, &text)?;
        names.push(path.display().to_string());
    }
    Ok(names)
}

/// Runs every cell of the sweep. Trials of a cell run in parallel, each with
/// its own derived seed, and are aggregated in trial order.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult, HarnessError> {
    spec.validate()?;
    let group: Arc<FiniteGroup> = super::io::load_group(&spec.group)?;
    let basis = if spec.family.is_matrix() {
        None
    } else {
        Some(IrrepBasis::compute(group.clone())?)
    };
    let mut rows = Vec::new();
    let cells = spec.epsilon.values().into_iter().flat_map(|e| spec.params().into_iter().map(move |p| (e, p)));
    for (cell, (epsilon, param)) in cells.enumerate() {
        let started = Instant::now();
        let instance_seed = trial_seed(spec.seed, cell as u64, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
        let instance = generate(spec.family, param, spec.label, &group, basis.as_ref(), &mut rng)?;
        let certificate = certify(spec.tester, &instance, basis.as_ref(), instance_seed)?;
        let instance_files = match &spec.instance_dir {
            Some(dir) => log_instance(dir, cell, &instance)?,
            None => Vec::new(),
        };
        let reports: Vec<TesterReport> = (1..=spec.trials as u64)
            .into_par_iter()
            .map(|t| {
                let cfg = TesterConfig::new(epsilon, trial_seed(spec.seed, cell as u64, t));
                run_tester(spec.tester, &instance, &cfg)
            })
            .collect::<Result<_, _>>()?;
        let accepted = reports.iter().filter(|r| r.accepted()).count();
        let total: u128 = reports.iter().map(|r| r.queries as u128).sum();
        let trials = spec.trials as u128;
        // integer part first, so a row of equal counts reports that count exactly
        let mean_queries = (total / trials) as f64 + (total % trials) as f64 / trials as f64;
        rows.push(ExperimentRow {
            epsilon,
            family_param: param,
            trials: spec.trials,
            accept_rate: accepted as f64 / spec.trials as f64,
            mean_queries,
            max_queries: reports.iter().map(|r| r.queries).max().unwrap_or(0),
            certified_distance: certified_distance(&certificate),
            wall_ms: if spec.no_timing { 0 } else { started.elapsed().as_millis() as u64 },
            certificate,
            instance_files,
        });
    }
    Ok(ExperimentResult {
        tool_version: crate::TOOL_VERSION.to_string(),
        spec: spec.clone(),
        rows,
    })
}
