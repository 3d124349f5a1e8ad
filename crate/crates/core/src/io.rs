//! Plain-text interchange formats and the JSON run report.
//!
//! Graphs travel as whitespace-separated edge lists ("u v [w]", '#' starts a
//! comment, weight defaults to 1.0), labelings as "vertex label" lines where
//! the label is everything after the first token. Weights are written with
//! Rust's shortest round-trip float formatting, so a write/load cycle
//! reproduces every weight bit for bit. The run report is a schema-versioned
//! JSON document with deterministic field order: maps are sorted, struct
//! fields serialize in declaration order.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::flow::FlowTrace;
use crate::graph::{Graph, GraphError};
use crate::metrics::Labeling;

/// Version stamp written into every [`RunReport`].
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Errors from reading or writing artifact files.
#[derive(Debug, thiserror::Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: expected 'u v [w]', got {got:?}")]
    MalformedEdge {
        path: String,
        line: usize,
        got: String,
    },
    #[error("{path}:{line}: weight must be a positive finite number, got {got:?}")]
    BadWeight {
        path: String,
        line: usize,
        got: String,
    },
    #[error("{path}:{line}: expected 'vertex label', got {got:?}")]
    MalformedLabel {
        path: String,
        line: usize,
        got: String,
    },
    #[error("{path}:{line}: vertex {vertex:?} is labeled twice")]
    DuplicateLabel {
        path: String,
        line: usize,
        vertex: String,
    },
    #[error("{path}:{line}: vertex {vertex:?} does not occur in the graph")]
    UnknownVertex {
        path: String,
        line: usize,
        vertex: String,
    },
    #[error("{path}: no label for vertex {vertex:?}")]
    MissingLabel { path: String, vertex: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{path}: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

fn path_str(path: &Path) -> String {
    path.display().to_string()
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path_str(path),
        source,
    })
}

fn write_string(path: &Path, text: &str) -> Result<(), IoError> {
    std::fs::write(path, text).map_err(|source| IoError::File {
        path: path_str(path),
        source,
    })
}

/// Strips the comment tail and surrounding whitespace; None for blank lines.
fn payload(line: &str) -> Option<&str> {
    let text = line.split('#').next().unwrap_or("").trim();
    if text.is_empty() {
        None
    } else {
        Some(text)
    }
}

/// Reads an edge-list file. Duplicate undirected edges are collapsed to
/// their minimum weight; each collapse is reported as a warning string.
pub fn load_graph(path: impl AsRef<Path>) -> Result<(Graph, Vec<String>), IoError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    // Key: name pair in sorted order. Value: first-appearance rank, endpoint
    // names as first seen, running minimum weight, occurrence count.
    let mut seen: BTreeMap<(String, String), usize> = BTreeMap::new();
    let mut edges: Vec<(String, String, f64, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(body) = payload(raw) else { continue };
        let fields: Vec<&str> = body.split_whitespace().collect();
        let (u, v, weight_text) = match fields.as_slice() {
            [u, v] => (*u, *v, None),
            [u, v, w] => (*u, *v, Some(*w)),
            _ => {
                return Err(IoError::MalformedEdge {
                    path: path_str(path),
                    line,
                    got: body.to_string(),
                })
            }
        };
        let weight = match weight_text {
            None => 1.0,
            Some(w) => match w.parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => x,
                _ => {
                    return Err(IoError::BadWeight {
                        path: path_str(path),
                        line,
                        got: w.to_string(),
                    })
                }
            },
        };
        let key = if u <= v {
            (u.to_string(), v.to_string())
        } else {
            (v.to_string(), u.to_string())
        };
        match seen.get(&key) {
            None => {
                seen.insert(key, edges.len());
                edges.push((u.to_string(), v.to_string(), weight, 1));
            }
            Some(&slot) => {
                let entry = &mut edges[slot];
                entry.2 = entry.2.min(weight);
                entry.3 += 1;
            }
        }
    }
    let warnings: Vec<String> = edges
        .iter()
        .filter(|(_, _, _, count)| *count > 1)
        .map(|(u, v, w, count)| {
            format!("edge {u} {v} appears {count} times; kept minimum weight {w}")
        })
        .collect();
    let graph = Graph::build(edges.into_iter().map(|(u, v, w, _)| (u, v, w)))?;
    Ok((graph, warnings))
}

/// Writes a graph as an edge list, one "u v w" line per edge in edge order.
pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<(), IoError> {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.vertex_name(e.u), g.vertex_name(e.v), e.weight);
    }
    write_string(path.as_ref(), &out)
}

/// Reads a "vertex label" file as ground truth for `g`. Every line must name
/// a graph vertex, every graph vertex must receive exactly one label, and
/// label strings may contain spaces. Distinct labels are mapped to dense
/// block ids in sorted label order.
pub fn load_labels(path: impl AsRef<Path>, g: &Graph) -> Result<Labeling, IoError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut by_vertex: Vec<Option<String>> = vec![None; g.vertex_count()];
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let Some(body) = payload(raw) else { continue };
        let Some((vertex, label)) = body.split_once(char::is_whitespace) else {
            return Err(IoError::MalformedLabel {
                path: path_str(path),
                line,
                got: body.to_string(),
            });
        };
        let label = label.trim();
        if label.is_empty() {
            return Err(IoError::MalformedLabel {
                path: path_str(path),
                line,
                got: body.to_string(),
            });
        }
        let Some(id) = g.vertex_index(vertex) else {
            return Err(IoError::UnknownVertex {
                path: path_str(path),
                line,
                vertex: vertex.to_string(),
            });
        };
        if by_vertex[id].is_some() {
            return Err(IoError::DuplicateLabel {
                path: path_str(path),
                line,
                vertex: vertex.to_string(),
            });
        }
        by_vertex[id] = Some(label.to_string());
    }
    for (id, slot) in by_vertex.iter().enumerate() {
        if slot.is_none() {
            return Err(IoError::MissingLabel {
                path: path_str(path),
                vertex: g.vertex_name(id).to_string(),
            });
        }
    }
    let names: Vec<String> = by_vertex.into_iter().map(Option::unwrap).collect();
    let mut distinct: Vec<&String> = names.iter().collect();
    distinct.sort();
    distinct.dedup();
    let labels = names
        .iter()
        .map(|l| distinct.binary_search(&l).unwrap())
        .collect();
    Ok(Labeling::new(labels))
}

/// Writes "vertex label" lines in the order given.
pub fn write_labels<'a, I>(pairs: I, path: impl AsRef<Path>) -> Result<(), IoError>
where
    I: IntoIterator<Item = (&'a str, &'a str)>,
{
    let mut out = String::new();
    for (vertex, label) in pairs {
        let _ = writeln!(out, "{vertex} {label}");
    }
    write_string(path.as_ref(), &out)
}

/// Per-run timing figures. The only report fields allowed to differ between
/// two runs of one invocation.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Timings {
    /// End-to-end wall-clock seconds for the command.
    pub total_seconds: f64,
    /// Seconds spent inside the flow loop.
    pub flow_seconds: f64,
}

/// Quality figures of a detected partition.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ReportMetrics {
    /// Number of detected communities.
    pub communities: usize,
    /// Mutual information against ground truth, when truth was given and
    /// the score is defined.
    pub nmi: Option<f64>,
    /// Modularity of the detected partition on the input graph.
    pub modularity_input: f64,
    /// Modularity of the detected partition on the surgered final graph.
    pub modularity_final: f64,
}

/// Compressed view of a flow trace.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct TraceSummary {
    /// Iterations actually executed.
    pub iterations: usize,
    /// Iterations at which at least one edge was removed.
    pub surgeries: usize,
    /// Total edges removed over the run.
    pub removed_edges: usize,
    /// Surviving edges.
    pub final_edges: usize,
    /// Connected components of the final graph.
    pub final_components: usize,
    /// Whether the run stopped on its own rather than exhausting the budget.
    pub converged: bool,
    /// Resolved surgery threshold.
    pub threshold: f64,
}

/// The JSON document a detection run emits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    /// Format version of this document.
    pub schema_version: u32,
    /// Echo of the resolved configuration.
    pub config: serde_json::Value,
    /// Community id per vertex name, ids contiguous from 1.
    pub assignments: BTreeMap<String, usize>,
    /// Partition quality figures.
    pub metrics: ReportMetrics,
    /// Flow trace summary.
    pub trace: TraceSummary,
    /// Wall-clock figures.
    pub timings: Timings,
}

/// Writes a report as pretty-printed JSON.
pub fn write_run_report(report: &RunReport, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut text = serde_json::to_string_pretty(report).map_err(|source| IoError::Json {
        path: path_str(path),
        source,
    })?;
    text.push('\n');
    write_string(path, &text)
}

/// Reads a report back, checking nothing beyond JSON shape.
pub fn read_run_report(path: impl AsRef<Path>) -> Result<RunReport, IoError> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    serde_json::from_str(&text).map_err(|source| IoError::Json {
        path: path_str(path),
        source,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<std::fs::File>, IoError> {
    csv::Writer::from_path(path).map_err(|source| IoError::Csv {
        path: path_str(path),
        source,
    })
}

fn csv_record<W: std::io::Write>(
    w: &mut csv::Writer<W>,
    path: &Path,
    record: &[String],
) -> Result<(), IoError> {
    w.write_record(record).map_err(|source| IoError::Csv {
        path: path_str(path),
        source,
    })
}

/// Writes the iteration-by-iteration trace as CSV.
pub fn write_trace_csv(trace: &FlowTrace, path: impl AsRef<Path>) -> Result<(), IoError> {
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    csv_record(
        &mut w,
        path,
        &[
            "iteration".into(),
            "time".into(),
            "alive_edges".into(),
            "removed".into(),
            "components".into(),
            "coefficient_spread".into(),
        ],
    )?;
    for row in &trace.rows {
        csv_record(
            &mut w,
            path,
            &[
                row.iteration.to_string(),
                row.time.to_string(),
                row.alive_edges.to_string(),
                row.removed.to_string(),
                row.components.to_string(),
                row.coefficient_spread.to_string(),
            ],
        )?;
    }
    w.flush().map_err(|source| IoError::File {
        path: path_str(path),
        source,
    })
}

/// Writes a two-column vertex,label CSV in vertex order.
pub fn write_partition_csv<'a, I>(pairs: I, path: impl AsRef<Path>) -> Result<(), IoError>
where
    I: IntoIterator<Item = (&'a str, usize)>,
{
    let path = path.as_ref();
    let mut w = csv_writer(path)?;
    csv_record(&mut w, path, &["vertex".into(), "community".into()])?;
    for (vertex, community) in pairs {
        csv_record(&mut w, path, &[vertex.to_string(), community.to_string()])?;
    }
    w.flush().map_err(|source| IoError::File {
        path: path_str(path),
        source,
    })
}

/// Renders per-edge curvature values as CSV with columns u, v, weight,
/// kappa, one row per edge in edge order.
pub fn curvature_csv_string(g: &Graph, values: &[f64]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["u", "v", "weight", "kappa"])
        .expect("in-memory write");
    for (e, kappa) in g.edges().iter().zip(values) {
        w.write_record([
            g.vertex_name(e.u),
            g.vertex_name(e.v),
            &e.weight.to_string(),
            &kappa.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory write")).expect("csv output is utf-8")
}

/// Writes per-edge curvature values as CSV with columns u, v, weight, kappa.
pub fn write_curvature_csv(
    g: &Graph,
    values: &[f64],
    path: impl AsRef<Path>,
) -> Result<(), IoError> {
    write_string(path.as_ref(), &curvature_csv_string(g, values))
}
