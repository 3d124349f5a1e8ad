//! Curvature-driven evolution of edge weights with threshold surgeries.
//!
//! Weights follow w_e(t) = w_e(t_prev) * exp(-c_e * (t - t_prev)) piecewise:
//! each edge decays (or grows) at the rate of its frozen curvature
//! coefficient. Coefficients are recomputed only when a surgery changes the
//! topology; between surgeries they stay bitwise constant, which keeps the
//! run cheap and makes weight ratios evolve as exact exponentials.
//!
//! A surgery removes, simultaneously, every edge whose weight is at least A
//! times the minimum weight of its connected component. Weights live in log
//! space: ratios become differences, overflow is impossible during
//! iteration, and each frozen span evaluates weights directly from the
//! span's anchor, so stepping twice by dt lands bitwise on one step of 2 dt.

use crate::curvature::{curvature_all, CurvatureError, CurvatureKind};
use crate::graph::{EdgeId, Graph, GraphError};

/// Default spacing of the uniform iteration schedule.
pub const DEFAULT_DT: f64 = 0.05;

/// Default iteration budget.
pub const DEFAULT_ITERATIONS: usize = 200;

/// Largest |log weight| that still materializes to a normal positive float.
const MAX_LOG_WEIGHT: f64 = 700.0;

/// Errors from flow configuration and execution.
#[derive(Debug, thiserror::Error)]
pub enum FlowError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Curvature(#[from] CurvatureError),
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),
    #[error("iteration budget must be at least 1")]
    BadIterationBudget,
    #[error("schedule times must be finite, positive, and strictly increasing; entry {index} is {time}")]
    BadSchedule { index: usize, time: f64 },
    #[error("surgery threshold must be finite and greater than 1, got {0}")]
    BadThreshold(f64),
    #[error("weight must be positive and finite, got {0}")]
    BadWeight(f64),
    #[error("evaluation time {t} precedes the anchor time {t_prev}")]
    BadTimeOrder { t: f64, t_prev: f64 },
    #[error("cannot choose a surgery threshold for a graph with no edges")]
    EdgelessGraph,
    #[error("schedule has only {budget} steps; cannot step further")]
    ScheduleExhausted { budget: usize },
    #[error("weight of edge {u}-{v} left floating-point range (log weight {log_weight})")]
    WeightOverflow {
        u: String,
        v: String,
        log_weight: f64,
    },
    #[error("flow aborted at iteration {iteration}: {source}")]
    Aborted {
        iteration: usize,
        trace: Box<FlowTrace>,
        #[source]
        source: Box<FlowError>,
    },
}

/// Iteration times t_1 < t_2 < ... at which the discrete flow is evaluated.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Schedule {
    /// t_k = k * dt for k = 1..=iterations.
    Uniform { dt: f64, iterations: usize },
    /// Explicit times, strictly increasing and positive.
    Explicit(Vec<f64>),
}

impl Schedule {
    /// Number of iterations the schedule provides.
    pub fn len(&self) -> usize {
        match self {
            Schedule::Uniform { iterations, .. } => *iterations,
            Schedule::Explicit(times) => times.len(),
        }
    }

    /// True when the schedule provides no iterations at all.
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn validate(&self) -> Result<(), FlowError> {
        match self {
            Schedule::Uniform { dt, iterations } => {
                if !(dt.is_finite() && *dt > 0.0) {
                    return Err(FlowError::BadTimeStep(*dt));
                }
                if *iterations == 0 {
                    return Err(FlowError::BadIterationBudget);
                }
            }
            Schedule::Explicit(times) => {
                if times.is_empty() {
                    return Err(FlowError::BadIterationBudget);
                }
                let mut prev = 0.0;
                for (index, &time) in times.iter().enumerate() {
                    if !(time.is_finite() && time > prev) {
                        return Err(FlowError::BadSchedule { index, time });
                    }
                    prev = time;
                }
            }
        }
        Ok(())
    }

    /// Time of iteration `k` (1-based, `k <= len()`).
    fn time_at(&self, k: usize) -> f64 {
        match self {
            Schedule::Uniform { dt, .. } => (k as f64) * dt,
            Schedule::Explicit(times) => times[k - 1],
        }
    }

    /// Time elapsed from the anchor iteration to iteration `k`. For the
    /// uniform schedule this is computed as (k - anchor) * dt in one
    /// multiplication, so equal elapsed spans give bitwise-equal results
    /// regardless of how many steps they are split into.
    fn elapsed(&self, anchor_iteration: usize, anchor_time: f64, k: usize) -> f64 {
        match self {
            Schedule::Uniform { dt, .. } => ((k - anchor_iteration) as f64) * dt,
            Schedule::Explicit(times) => times[k - 1] - anchor_time,
        }
    }
}

/// Surgery threshold selection.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub enum Threshold {
    /// Twice the largest initial weight ratio within any component.
    Auto,
    /// Explicit value, required to be finite and greater than 1.
    Fixed(f64),
}

/// Convergence rule: stop once no surgery has happened for a while and the
/// coefficients within every component have flattened out.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct EarlyStop {
    /// Consecutive surgery-free iterations required before stopping.
    pub quiet_iterations: usize,
    /// Largest per-component coefficient spread considered flat.
    pub spread_tolerance: f64,
}

impl EarlyStop {
    /// Default rule for a given iteration budget.
    pub fn for_budget(iterations: usize) -> EarlyStop {
        EarlyStop {
            quiet_iterations: 50.max(iterations / 5),
            spread_tolerance: 1e-9,
        }
    }
}

/// Complete configuration of one discrete flow run.
#[derive(Debug, Clone, serde::Serialize, serde::Deserialize)]
pub struct FlowConfig {
    /// Curvature kind driving the decay coefficients.
    pub kind: CurvatureKind,
    /// Iteration times.
    pub schedule: Schedule,
    /// Surgery threshold.
    pub threshold: Threshold,
    /// Optional convergence rule; `None` always runs the full schedule.
    pub early_stop: Option<EarlyStop>,
    /// Record per-edge weights and coefficients in every trace row.
    pub record_history: bool,
}

impl FlowConfig {
    /// Defaults: uniform schedule (dt = 0.05, 200 iterations), automatic
    /// threshold, early stop tuned to the budget, no per-edge history.
    pub fn new(kind: CurvatureKind) -> FlowConfig {
        FlowConfig {
            kind,
            schedule: Schedule::Uniform {
                dt: DEFAULT_DT,
                iterations: DEFAULT_ITERATIONS,
            },
            threshold: Threshold::Auto,
            early_stop: Some(EarlyStop::for_budget(DEFAULT_ITERATIONS)),
            record_history: false,
        }
    }
}

/// Per-edge flow state, indexed by the original graph's edge ids. Entries of
/// removed edges stay frozen at their last pre-removal values.
#[derive(Debug, Clone)]
pub struct FlowState {
    /// ln w_e at the current iteration.
    pub log_weights: Vec<f64>,
    /// Frozen decay coefficients c_e.
    pub coefficients: Vec<f64>,
    /// Which edges are still present.
    pub alive: Vec<bool>,
    /// Iterations completed so far.
    pub iteration: usize,
    /// Time of the current iteration (0 before the first step).
    pub time: f64,
}

/// Edges removed by one surgery, with the weight ratios that triggered it.
#[derive(Debug, Clone)]
pub struct SurgeryReport {
    /// Iteration at which the removal happened.
    pub iteration: usize,
    /// Removed edges, ascending by id in the original graph.
    pub removed: Vec<EdgeId>,
    /// Ratio w_e / min-component-weight for each removed edge, aligned with
    /// `removed`; every entry is at least the threshold.
    pub ratios: Vec<f64>,
    /// Threshold in force.
    pub threshold: f64,
}

/// One iteration's summary in the flow trace.
#[derive(Debug, Clone)]
pub struct TraceRow {
    /// Iteration index k.
    pub iteration: usize,
    /// Time t_k.
    pub time: f64,
    /// Edges alive after this iteration's surgery.
    pub alive_edges: usize,
    /// Edges removed by this iteration's surgery.
    pub removed: usize,
    /// Connected components after this iteration.
    pub components: usize,
    /// Largest within-component coefficient spread (max - min).
    pub coefficient_spread: f64,
    /// Linear weights per original edge id, when history is recorded.
    pub weights: Option<Vec<f64>>,
    /// Coefficients per original edge id, when history is recorded.
    pub coefficients: Option<Vec<f64>>,
}

/// Iteration-by-iteration record of one flow run.
#[derive(Debug, Clone, Default)]
pub struct FlowTrace {
    /// One row per completed iteration.
    pub rows: Vec<TraceRow>,
    /// Every surgery that removed at least one edge.
    pub surgeries: Vec<SurgeryReport>,
}

/// Output of a completed flow run.
#[derive(Debug)]
pub struct FlowResult {
    /// Surviving graph: full original vertex set, final weights.
    pub final_graph: Graph,
    /// Map from `final_graph` edge ids to original edge ids.
    pub edge_map: Vec<EdgeId>,
    /// Final per-edge state.
    pub state: FlowState,
    /// Per-iteration trace.
    pub trace: FlowTrace,
    /// Threshold that was in force (resolved from `Threshold::Auto`).
    pub threshold: f64,
    /// True when the run stopped via the early-stop rule (or trivially);
    /// false when it exhausted the schedule.
    pub converged: bool,
    /// Original edge ids whose coefficient carried a curvature reliability
    /// warning at any recomputation.
    pub warned_edges: Vec<EdgeId>,
}

/// Closed-form weight evolution over one frozen span:
/// w(t) = w_prev * exp(-kappa * (t - t_prev)).
pub fn continuous_weight_at(
    w_prev: f64,
    kappa: f64,
    t: f64,
    t_prev: f64,
) -> Result<f64, FlowError> {
    if !(w_prev > 0.0 && w_prev.is_finite()) {
        return Err(FlowError::BadWeight(w_prev));
    }
    if !t.is_finite() || !t_prev.is_finite() || t < t_prev {
        return Err(FlowError::BadTimeOrder { t, t_prev });
    }
    Ok(w_prev * (-kappa * (t - t_prev)).exp())
}

/// Default surgery threshold: twice the largest ratio of an edge's weight to
/// the minimum weight in its component, measured on the initial graph.
pub fn default_surgery_threshold(g0: &Graph) -> Result<f64, FlowError> {
    if g0.edge_count() == 0 {
        return Err(FlowError::EdgelessGraph);
    }
    let comp = g0.connected_components();
    let blocks = comp.vertex_count();
    debug_assert_eq!(blocks, g0.vertex_count());
    let mut min_weight = vec![f64::INFINITY; comp.len()];
    for edge in g0.edges() {
        let c = comp.block_of(edge.u);
        if edge.weight < min_weight[c] {
            min_weight[c] = edge.weight;
        }
    }
    let mut max_ratio: f64 = 1.0;
    for edge in g0.edges() {
        let ratio = edge.weight / min_weight[comp.block_of(edge.u)];
        max_ratio = max_ratio.max(ratio);
    }
    Ok(2.0 * max_ratio)
}

/// Samples the curvature flow with per-step coefficient refresh: at every
/// schedule time the curvature of the current weighted graph is recomputed
/// and the weights advance by the closed form over that interval. No
/// surgeries are applied. Returns one weight row per time, starting with the
/// initial weights (row 0).
pub fn sample_continuous_flow(
    g: &Graph,
    kind: &CurvatureKind,
    schedule: &Schedule,
) -> Result<Vec<Vec<f64>>, FlowError> {
    kind.validate()?;
    schedule.validate()?;
    let mut rows = Vec::with_capacity(schedule.len() + 1);
    let mut current = g.clone();
    rows.push(current.edges().iter().map(|e| e.weight).collect::<Vec<_>>());
    let mut t_prev = 0.0;
    for k in 1..=schedule.len() {
        let t = schedule.time_at(k);
        let cv = curvature_all(&current, kind)?;
        let mut next = Vec::with_capacity(current.edge_count());
        for (edge, &c) in current.edges().iter().zip(&cv.values) {
            let w = continuous_weight_at(edge.weight, c, t, t_prev)?;
            if !w.is_finite() || w == 0.0 {
                return Err(FlowError::WeightOverflow {
                    u: g.vertex_name(edge.u).to_string(),
                    v: g.vertex_name(edge.v).to_string(),
                    log_weight: edge.weight.ln() - c * (t - t_prev),
                });
            }
            next.push(w);
        }
        current = current.with_weights(&next)?;
        rows.push(next);
        t_prev = t;
    }
    Ok(rows)
}

/// Discrete flow engine exposing the individual step operations.
///
/// [`run_flow`] drives it in the canonical order: `discrete_step`, then
/// `apply_surgery`, then `update_coefficients` with the surgery outcome.
pub struct Flow<'g> {
    g: &'g Graph,
    kind: CurvatureKind,
    schedule: Schedule,
    threshold: f64,
    threshold_log: f64,
    state: FlowState,
    anchor_log: Vec<f64>,
    anchor_iteration: usize,
    anchor_time: f64,
    comp_of: Vec<usize>,
    component_count: usize,
    warned: Vec<EdgeId>,
}

impl<'g> Flow<'g> {
    /// Validates the configuration, resolves the threshold, and computes the
    /// initial coefficients c_0 as the curvature of the starting graph.
    pub fn new(g: &'g Graph, cfg: &FlowConfig) -> Result<Flow<'g>, FlowError> {
        cfg.kind.validate()?;
        cfg.schedule.validate()?;
        let threshold = match cfg.threshold {
            Threshold::Auto => default_surgery_threshold(g)?,
            Threshold::Fixed(a) => {
                if !(a.is_finite() && a > 1.0) {
                    return Err(FlowError::BadThreshold(a));
                }
                a
            }
        };
        let cv = curvature_all(g, &cfg.kind)?;
        let log_weights: Vec<f64> = g.edges().iter().map(|e| e.weight.ln()).collect();
        let alive = vec![true; g.edge_count()];
        let (comp_of, component_count) = masked_components(g, &alive);
        Ok(Flow {
            g,
            kind: cfg.kind,
            schedule: cfg.schedule.clone(),
            threshold,
            threshold_log: threshold.ln(),
            anchor_log: log_weights.clone(),
            anchor_iteration: 0,
            anchor_time: 0.0,
            state: FlowState {
                log_weights,
                coefficients: cv.values,
                alive,
                iteration: 0,
                time: 0.0,
            },
            comp_of,
            component_count,
            warned: cv.warnings,
        })
    }

    /// Current per-edge state.
    pub fn state(&self) -> &FlowState {
        &self.state
    }

    /// Threshold in force.
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Number of connected components of the current alive graph.
    pub fn component_count(&self) -> usize {
        self.component_count
    }

    /// Number of edges still alive.
    pub fn alive_count(&self) -> usize {
        self.state.alive.iter().filter(|&&a| a).count()
    }

    /// Largest within-component spread (max - min) of the coefficients over
    /// alive edges; 0 when every component is curvature-flat.
    pub fn coefficient_spread(&self) -> f64 {
        let mut lo = vec![f64::INFINITY; self.component_count];
        let mut hi = vec![f64::NEG_INFINITY; self.component_count];
        for (e, edge) in self.g.edges().iter().enumerate() {
            if !self.state.alive[e] {
                continue;
            }
            let c = self.comp_of[edge.u];
            let value = self.state.coefficients[e];
            lo[c] = lo[c].min(value);
            hi[c] = hi[c].max(value);
        }
        let mut spread: f64 = 0.0;
        for c in 0..self.component_count {
            if hi[c] >= lo[c] {
                spread = spread.max(hi[c] - lo[c]);
            }
        }
        spread
    }

    /// Advances to the next schedule time: every alive edge's log weight is
    /// evaluated from the current frozen span's anchor.
    pub fn discrete_step(&mut self) -> Result<(), FlowError> {
        let budget = self.schedule.len();
        if self.state.iteration >= budget {
            return Err(FlowError::ScheduleExhausted { budget });
        }
        self.state.iteration += 1;
        let k = self.state.iteration;
        self.state.time = self.schedule.time_at(k);
        let elapsed = self
            .schedule
            .elapsed(self.anchor_iteration, self.anchor_time, k);
        for e in 0..self.state.log_weights.len() {
            if self.state.alive[e] {
                self.state.log_weights[e] =
                    self.anchor_log[e] - self.state.coefficients[e] * elapsed;
            }
        }
        Ok(())
    }

    /// Removes every edge whose weight is at least `threshold` times the
    /// minimum weight of its component. All removals happen simultaneously,
    /// judged against the pre-removal components.
    pub fn apply_surgery(&mut self) -> SurgeryReport {
        let mut min_log = vec![f64::INFINITY; self.component_count];
        for (e, edge) in self.g.edges().iter().enumerate() {
            if !self.state.alive[e] {
                continue;
            }
            let c = self.comp_of[edge.u];
            min_log[c] = min_log[c].min(self.state.log_weights[e]);
        }
        let mut removed = Vec::new();
        let mut ratios = Vec::new();
        for (e, edge) in self.g.edges().iter().enumerate() {
            if !self.state.alive[e] {
                continue;
            }
            let excess = self.state.log_weights[e] - min_log[self.comp_of[edge.u]];
            if excess >= self.threshold_log {
                removed.push(e);
                ratios.push(excess.exp());
            }
        }
        for &e in &removed {
            self.state.alive[e] = false;
        }
        if !removed.is_empty() {
            let (comp_of, component_count) = masked_components(self.g, &self.state.alive);
            self.comp_of = comp_of;
            self.component_count = component_count;
        }
        SurgeryReport {
            iteration: self.state.iteration,
            removed,
            ratios,
            threshold: self.threshold,
        }
    }

    /// Refreshes the coefficients as the curvature of the current surgered
    /// graph when a surgery just occurred; otherwise leaves them bitwise
    /// untouched. A refresh starts a new frozen span.
    pub fn update_coefficients(&mut self, surgery_occurred: bool) -> Result<(), FlowError> {
        if !surgery_occurred {
            return Ok(());
        }
        let weights = self.linear_weights_checked()?;
        let (sub, map) = self.g.edge_subgraph(&self.state.alive, &weights)?;
        let cv = curvature_all(&sub, &self.kind)?;
        for (sub_e, &orig_e) in map.iter().enumerate() {
            self.state.coefficients[orig_e] = cv.values[sub_e];
        }
        for sub_e in cv.warnings {
            let orig = map[sub_e];
            if !self.warned.contains(&orig) {
                self.warned.push(orig);
            }
        }
        self.anchor_log.copy_from_slice(&self.state.log_weights);
        self.anchor_iteration = self.state.iteration;
        self.anchor_time = self.state.time;
        Ok(())
    }

    /// Materializes the surviving graph with the current weights.
    pub fn materialize(&self) -> Result<(Graph, Vec<EdgeId>), FlowError> {
        let weights = self.linear_weights_checked()?;
        Ok(self.g.edge_subgraph(&self.state.alive, &weights)?)
    }

    /// Linear weights for alive edges (1.0 placeholders for removed ones),
    /// erroring when an alive edge has drifted outside floating-point range.
    fn linear_weights_checked(&self) -> Result<Vec<f64>, FlowError> {
        let mut weights = Vec::with_capacity(self.state.log_weights.len());
        for (e, edge) in self.g.edges().iter().enumerate() {
            if !self.state.alive[e] {
                weights.push(1.0);
                continue;
            }
            let lw = self.state.log_weights[e];
            if lw.abs() > MAX_LOG_WEIGHT {
                return Err(FlowError::WeightOverflow {
                    u: self.g.vertex_name(edge.u).to_string(),
                    v: self.g.vertex_name(edge.v).to_string(),
                    log_weight: lw,
                });
            }
            weights.push(lw.exp());
        }
        Ok(weights)
    }

    /// Linear weights without the range check, for trace recording.
    fn linear_weights_raw(&self) -> Vec<f64> {
        self.state.log_weights.iter().map(|lw| lw.exp()).collect()
    }
}

/// Runs the discrete flow to completion.
///
/// Each iteration advances the weights, applies the surgery, and refreshes
/// the coefficients when the topology changed. The run ends when the
/// schedule is exhausted, every edge has been removed, or the early-stop
/// rule fires. On failure the trace accumulated so far is preserved inside
/// the error.
pub fn run_flow(g0: &Graph, cfg: &FlowConfig) -> Result<FlowResult, FlowError> {
    if g0.edge_count() == 0 {
        return Ok(FlowResult {
            final_graph: g0.clone(),
            edge_map: Vec::new(),
            state: FlowState {
                log_weights: Vec::new(),
                coefficients: Vec::new(),
                alive: Vec::new(),
                iteration: 0,
                time: 0.0,
            },
            trace: FlowTrace::default(),
            threshold: f64::NAN,
            converged: true,
            warned_edges: Vec::new(),
        });
    }
    let mut flow = Flow::new(g0, cfg)?;
    let mut rows = Vec::new();
    let mut surgeries = Vec::new();
    let mut quiet = 0usize;
    let mut converged = false;
    let mut failure = None;
    for _ in 1..=cfg.schedule.len() {
        if let Err(err) = flow.discrete_step() {
            failure = Some(err);
            break;
        }
        let report = flow.apply_surgery();
        let occurred = !report.removed.is_empty();
        if occurred {
            quiet = 0;
        } else {
            quiet += 1;
        }
        if let Err(err) = flow.update_coefficients(occurred) {
            failure = Some(err);
            break;
        }
        let spread = flow.coefficient_spread();
        rows.push(TraceRow {
            iteration: flow.state.iteration,
            time: flow.state.time,
            alive_edges: flow.alive_count(),
            removed: report.removed.len(),
            components: flow.component_count(),
            coefficient_spread: spread,
            weights: cfg.record_history.then(|| flow.linear_weights_raw()),
            coefficients: cfg.record_history.then(|| flow.state.coefficients.clone()),
        });
        if occurred {
            surgeries.push(report);
        }
        if flow.alive_count() == 0 {
            converged = true;
            break;
        }
        if let Some(rule) = &cfg.early_stop {
            if quiet >= rule.quiet_iterations && spread <= rule.spread_tolerance {
                converged = true;
                break;
            }
        }
    }
    let trace = FlowTrace { rows, surgeries };
    if let Some(source) = failure {
        return Err(FlowError::Aborted {
            iteration: flow.state.iteration,
            trace: Box::new(trace),
            source: Box::new(source),
        });
    }
    let (final_graph, edge_map) = match flow.materialize() {
        Ok(pair) => pair,
        Err(source) => {
            return Err(FlowError::Aborted {
                iteration: flow.state.iteration,
                trace: Box::new(trace),
                source: Box::new(source),
            });
        }
    };
    flow.warned.sort_unstable();
    Ok(FlowResult {
        final_graph,
        edge_map,
        state: flow.state,
        trace,
        threshold: flow.threshold,
        converged,
        warned_edges: flow.warned,
    })
}

/// Component id per vertex over the alive edges only; isolated vertices get
/// their own components. Ids are assigned in vertex order, deterministically.
fn masked_components(g: &Graph, alive: &[bool]) -> (Vec<usize>, usize) {
    let n = g.vertex_count();
    let mut comp = vec![usize::MAX; n];
    let mut next = 0usize;
    let mut stack = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = next;
        stack.push(s);
        while let Some(v) = stack.pop() {
            for &(nbr, e) in g.neighbors(v) {
                if alive[e] && comp[nbr] == usize::MAX {
                    comp[nbr] = next;
                    stack.push(nbr);
                }
            }
        }
        next += 1;
    }
    (comp, next)
}
