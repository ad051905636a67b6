//! Experiment configuration: a single JSON document naming the
//! experiment, its parameters and the seed. `out_dir` may be set in the
//! file but is stripped from summaries so outputs stay byte-identical
//! wherever they are written.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExperimentConfig {
    #[serde(flatten)]
    pub experiment: Experiment,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "experiment", content = "params", rename_all = "kebab-case")]
pub enum Experiment {
    LearnSim(LearnSimParams),
    ExactLearn(ExactLearnParams),
    MinCover(MinCoverParams),
    CountingAudit(CountingAuditParams),
    CommConvert(CommConvertParams),
    SiTransform(SiTransformParams),
    CostSearch(CostSearchParams),
}

impl Experiment {
    pub fn kind(&self) -> &'static str {
        match self {
            Experiment::LearnSim(_) => "learn-sim",
            Experiment::ExactLearn(_) => "exact-learn",
            Experiment::MinCover(_) => "min-cover",
            Experiment::CountingAudit(_) => "counting-audit",
            Experiment::CommConvert(_) => "comm-convert",
            Experiment::SiTransform(_) => "si-transform",
            Experiment::CostSearch(_) => "cost-search",
        }
    }
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyParam {
    AllQueries,
    UniformRandom,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LearnSimParams {
    pub n: u64,
    pub k: u32,
    pub trials: u64,
    pub policy: PolicyParam,
    /// Fixed concept bitstring; random per trial when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExactLearnParams {
    pub n: u64,
    pub trials: u64,
    pub policy: PolicyParam,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub concept: Option<String>,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModeParam {
    Exact,
    Greedy,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinCoverParams {
    pub n: u64,
    pub mode: ModeParam,
}

fn default_exact() -> ModeParam {
    ModeParam::Exact
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CountingAuditParams {
    pub n: u64,
    #[serde(default = "default_exact")]
    pub mode: ModeParam,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InstanceKindParam {
    LowInformation,
    HighInformation,
}

fn default_draws() -> u64 {
    1000
}

fn default_sample_cap() -> u64 {
    1 << 20
}

fn default_tuple_cap() -> u64 {
    16384
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CommConvertParams {
    pub kind: InstanceKindParam,
    pub eps: f64,
    /// Declared quantum cost; the family mutual information when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    #[serde(default = "default_draws")]
    pub draws: u64,
    #[serde(default = "default_sample_cap")]
    pub sample_cap: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SiTransformParams {
    pub max_inputs: usize,
    pub eps: f64,
    pub delta: f64,
    #[serde(default = "default_tuple_cap")]
    pub tuple_cap: u64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CostSearchParams {
    pub problem: ProblemParam,
    pub eps: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum ProblemParam {
    /// Explicit single-input relation; uniform input distribution when
    /// `mu` is absent.
    Single {
        valid: Vec<Vec<bool>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<Vec<f64>>,
    },
    /// Explicit two-sided relation given by its valid triples.
    TwoSided {
        x: usize,
        y: usize,
        z: usize,
        valid_triples: Vec<(usize, usize, usize)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        mu: Option<Vec<f64>>,
    },
    /// The all-queries concept answering problem over `Z_n`.
    ConceptClass { n: u64 },
}
