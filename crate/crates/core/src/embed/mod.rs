//! Embedding prescribed cycle families: short cycles through an absorber for
//! one dominant length, long cycles through the three-phase segment budget,
//! triangle chains, and the dispatcher composing them into a 2-factor.

mod budget;
pub mod chains;
mod dispatch;
mod io;
mod long;
mod short;
mod triangles;
mod verify;

use std::time::Instant;

use thiserror::Error;

use crate::absorber::{AbsorberError, AbsorberOptions, TemplateChoice};
use crate::config::{Constants, GateError, JumbledParams, Mode};
use crate::graph::{Graph, VertexSet};
use crate::partition::{PartitionError, PartitionOptions};
use crate::paths::{PathConfig, PathError};

pub use budget::{plan_segment_budget, BudgetError, SegmentBudget, ROW_RESERVE};
pub use dispatch::{embed_two_factor, pad_spec, FamilySplit};
pub use long::embed_long_cycles;
pub use short::embed_short_cycles;
pub use triangles::{exact_triangle_factor, ExactTriangles, GreedyTriangles, TriangleProvider};
pub use verify::{verify_embedding, VerifyFailure, VerifyReport};

/// Cycle lengths, each at least 3, in the order the embedding reports them.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CycleFamilySpec {
    lengths: Vec<usize>,
}

impl CycleFamilySpec {
    pub fn new(lengths: Vec<usize>) -> Result<Self, EmbedError> {
        if let Some((i, &l)) = lengths.iter().enumerate().find(|(_, &l)| l < 3) {
            return Err(EmbedError::Infeasible(format!("cycle {i} has length {l} < 3")));
        }
        Ok(CycleFamilySpec { lengths })
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn total(&self) -> usize {
        self.lengths.iter().sum()
    }

    pub(crate) fn check_fits(&self, n: usize) -> Result<(), EmbedError> {
        if self.total() > n {
            return Err(EmbedError::Infeasible(format!(
                "spec needs {} vertices but only {n} are available",
                self.total()
            )));
        }
        Ok(())
    }
}

/// One vertex sequence per requested cycle, in spec order.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Embedding {
    pub cycles: Vec<Vec<usize>>,
}

impl Embedding {
    pub fn vertex_count(&self) -> usize {
        self.cycles.iter().map(Vec::len).sum()
    }

    pub fn covered(&self, n: usize) -> VertexSet {
        VertexSet::from_ids(n, self.cycles.iter().flatten().copied())
    }
}

#[derive(Debug, Error)]
pub enum EmbedError {
    #[error("infeasible spec: {0}")]
    Infeasible(String),
    #[error("missing capability: {0}")]
    Capability(String),
    #[error("strict gate: {0}")]
    Gate(#[from] GateError),
    #[error(transparent)]
    Budget(#[from] BudgetError),
    #[error("{stage}: {source}")]
    Path {
        stage: &'static str,
        #[source]
        source: PathError,
    },
    #[error("{stage}: {source}")]
    Absorber {
        stage: &'static str,
        #[source]
        source: AbsorberError,
    },
    #[error("{stage}: {source}")]
    Partition {
        stage: &'static str,
        #[source]
        source: PartitionError,
    },
    #[error("{stage}: {detail}")]
    Stage { stage: &'static str, detail: String },
    #[error("embedding failed verification: {0}")]
    Verification(VerifyFailure),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EmbedError {
    /// Pipeline stage that failed, when there is one.
    pub fn stage(&self) -> Option<&'static str> {
        match self {
            EmbedError::Path { stage, .. }
            | EmbedError::Absorber { stage, .. }
            | EmbedError::Partition { stage, .. }
            | EmbedError::Stage { stage, .. } => Some(stage),
            EmbedError::Gate(_) => Some("gate"),
            EmbedError::Budget(_) => Some("segment budget"),
            _ => None,
        }
    }

    pub(crate) fn path(stage: &'static str) -> impl FnOnce(PathError) -> EmbedError {
        move |source| EmbedError::Path { stage, source }
    }

    pub(crate) fn absorber(stage: &'static str) -> impl FnOnce(AbsorberError) -> EmbedError {
        move |source| EmbedError::Absorber { stage, source }
    }

    pub(crate) fn partition(stage: &'static str) -> impl FnOnce(PartitionError) -> EmbedError {
        move |source| EmbedError::Partition { stage, source }
    }
}

#[derive(Clone, Debug)]
pub struct EmbedOptions {
    pub mode: Mode,
    pub constants: Constants,
    pub template: TemplateChoice,
    pub template_trials: usize,
    /// Node expansions per connecting-path search.
    pub path_budget: usize,
    pub seed: u64,
}

impl EmbedOptions {
    pub fn strict() -> Self {
        Self::for_mode(Mode::Strict)
    }

    pub fn practical() -> Self {
        Self::for_mode(Mode::Practical)
    }

    pub fn for_mode(mode: Mode) -> Self {
        EmbedOptions {
            mode,
            constants: Constants::for_mode(mode),
            template: TemplateChoice::Auto,
            template_trials: 1000,
            path_budget: 200_000,
            seed: 0,
        }
    }

    pub fn absorber(&self) -> AbsorberOptions {
        AbsorberOptions {
            mode: self.mode,
            constants: self.constants.clone(),
            template: self.template.clone(),
            template_trials: self.template_trials,
            path_budget: self.path_budget,
            seed: self.seed,
        }
    }

    pub fn paths(&self, params: &JumbledParams) -> PathConfig {
        PathConfig {
            mode: self.mode,
            p: params.p,
            epsilon: self.mode.is_strict().then_some(params.epsilon),
            budget: self.path_budget,
        }
    }

    pub fn partition(&self) -> PartitionOptions {
        PartitionOptions {
            mode: self.mode,
            factor: self.constants.partition_factor,
        }
    }

    pub(crate) fn gate(&self) -> Result<(), EmbedError> {
        if self.mode.is_strict() {
            self.constants.check_strict()?;
        }
        Ok(())
    }
}

/// Counters and phase timings collected along a run. Counters are
/// deterministic; timings are not.
#[derive(Clone, Debug, Default)]
pub struct Trace {
    counts: Vec<(String, String)>,
    timings: Vec<(String, f64)>,
}

impl Trace {
    pub fn note(&mut self, key: impl Into<String>, value: impl ToString) {
        self.counts.push((key.into(), value.to_string()));
    }

    /// Runs `f`, recording its wall time under `name`.
    pub fn phase<T>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> T) -> T {
        let start = Instant::now();
        let out = f(self);
        self.timings.push((name.to_string(), start.elapsed().as_secs_f64()));
        out
    }

    pub fn counts(&self) -> &[(String, String)] {
        &self.counts
    }

    pub fn timings(&self) -> &[(String, f64)] {
        &self.timings
    }
}

/// Largest `δ'` with `deg(v, pool) ≥ δ' p |pool|` for every endpoint.
pub(crate) fn endpoint_delta<'a>(g: &Graph, ends: impl IntoIterator<Item = &'a usize>, pool: &VertexSet, p: f64) -> f64 {
    let size = pool.len().max(1) as f64;
    ends.into_iter()
        .map(|&v| g.deg_into(v, pool) as f64 / (p * size))
        .fold(f64::INFINITY, f64::min)
        .min(1.0)
}

/// `min_{v ∈ X} deg(v, X) / (p |X|)`.
pub(crate) fn inner_delta(g: &Graph, x: &VertexSet, p: f64) -> f64 {
    let min = x.iter().map(|v| g.deg_into(v, x)).min().unwrap_or(0);
    min as f64 / (p * x.len().max(1) as f64)
}

/// Checks the result and turns a failed check into an error.
pub(crate) fn finish(g: &Graph, spec: &CycleFamilySpec, emb: Embedding) -> Result<Embedding, EmbedError> {
    match verify_embedding(g, spec, &emb).failure {
        None => Ok(emb),
        Some(f) => Err(EmbedError::Verification(f)),
    }
}
