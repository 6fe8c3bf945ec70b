//! Edge-list and membership dump formats.
//!
//! Edge list: a `# sociosynth v1 n=<N> seed=<S>` header line, then one
//! `u,v,level` line per edge with `u < v` and level in {1,2,3}; level-3
//! lines are opt-in. Membership dump: a `node,kind,group_id` header and
//! one line per member. Everything is UTF-8 with LF line endings.

use std::io::{self, Write};

use thiserror::Error;

use crate::affiliation::AffiliationGroup;
use crate::graph::{EdgeLevel, SocialGraph};

pub const DUMP_MAGIC: &str = "# sociosynth v1";

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DumpError {
    #[error("missing `{DUMP_MAGIC} n=<N> seed=<S>` header line")]
    MissingHeader,
    #[error("malformed header: {0}")]
    BadHeader(String),
    #[error("line {line}: {message}")]
    BadLine { line: usize, message: String },
    #[error("duplicate edge {u},{v},{level}")]
    DuplicateEdge { u: u32, v: u32, level: u8 },
}

/// A parsed edge-list dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeListDump {
    pub n: u32,
    pub seed: u64,
    pub edges: Vec<(u32, u32, EdgeLevel)>,
}

impl EdgeListDump {
    /// Union of the requested levels as deduplicated `u < v` pairs.
    pub fn level_edges(&self, levels: &[EdgeLevel]) -> Vec<(u32, u32)> {
        let mut out: Vec<(u32, u32)> = self
            .edges
            .iter()
            .filter(|(_, _, level)| levels.contains(level))
            .map(|&(u, v, _)| (u, v))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// Write the edge-list dump for a finalized graph.
pub fn write_edge_list<W: Write>(
    mut w: W,
    graph: &SocialGraph,
    seed: u64,
    include_level3: bool,
) -> io::Result<()> {
    writeln!(w, "{DUMP_MAGIC} n={} seed={seed}", graph.node_count())?;
    for &(u, v) in graph.level_edges(EdgeLevel::I) {
        writeln!(w, "{u},{v},1")?;
    }
    for &(u, v) in graph.level_edges(EdgeLevel::II) {
        writeln!(w, "{u},{v},2")?;
    }
    if include_level3 {
        for (u, v) in graph.expand_level3() {
            writeln!(w, "{u},{v},3")?;
        }
    }
    Ok(())
}

fn parse_header(line: &str) -> Result<(u32, u64), DumpError> {
    let rest = line
        .strip_prefix(DUMP_MAGIC)
        .ok_or(DumpError::MissingHeader)?;
    let mut n = None;
    let mut seed = None;
    for token in rest.split_whitespace() {
        if let Some(value) = token.strip_prefix("n=") {
            n = Some(
                value
                    .parse::<u32>()
                    .map_err(|e| DumpError::BadHeader(format!("n: {e}")))?,
            );
        } else if let Some(value) = token.strip_prefix("seed=") {
            seed = Some(
                value
                    .parse::<u64>()
                    .map_err(|e| DumpError::BadHeader(format!("seed: {e}")))?,
            );
        } else {
            return Err(DumpError::BadHeader(format!("unexpected token `{token}`")));
        }
    }
    match (n, seed) {
        (Some(n), Some(seed)) => Ok((n, seed)),
        _ => Err(DumpError::BadHeader("need both n= and seed=".into())),
    }
}

/// Parse an edge-list dump. Allocation stays proportional to the input;
/// the declared `n` is only validated against edge endpoints here.
pub fn parse_edge_list(text: &str) -> Result<EdgeListDump, DumpError> {
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or(DumpError::MissingHeader)?;
    let (n, seed) = parse_header(header)?;

    let mut edges = Vec::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| DumpError::BadLine {
            line: line_no,
            message,
        };
        let mut fields = line.split(',');
        let (u, v, level) = match (fields.next(), fields.next(), fields.next(), fields.next()) {
            (Some(u), Some(v), Some(level), None) => (u, v, level),
            _ => return Err(bad("expected `u,v,level`".into())),
        };
        let u: u32 = u.parse().map_err(|e| bad(format!("u: {e}")))?;
        let v: u32 = v.parse().map_err(|e| bad(format!("v: {e}")))?;
        let level: u8 = level.parse().map_err(|e| bad(format!("level: {e}")))?;
        let level = EdgeLevel::from_number(level)
            .filter(|l| *l != EdgeLevel::IV)
            .ok_or_else(|| bad(format!("level must be 1, 2, or 3, got {level}")))?;
        if u >= v {
            return Err(bad(format!("edges must satisfy u < v, got {u},{v}")));
        }
        if v >= n {
            return Err(bad(format!("node {v} out of range for n={n}")));
        }
        edges.push((u, v, level));
    }

    let mut sorted: Vec<(u8, u32, u32)> = edges
        .iter()
        .map(|&(u, v, level)| (level.number(), u, v))
        .collect();
    sorted.sort_unstable();
    if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
        return Err(DumpError::DuplicateEdge {
            u: w[0].1,
            v: w[0].2,
            level: w[0].0,
        });
    }
    Ok(EdgeListDump { n, seed, edges })
}

/// Write the `node,kind,group_id` membership dump, sorted by node id.
pub fn write_memberships<W: Write>(mut w: W, groups: &[AffiliationGroup]) -> io::Result<()> {
    writeln!(w, "node,kind,group_id")?;
    let mut rows: Vec<(u32, &'static str, u32)> = groups
        .iter()
        .flat_map(|g| {
            g.members
                .iter()
                .map(move |&member| (member, g.kind.label(), g.id))
        })
        .collect();
    rows.sort_unstable();
    for (node, kind, group) in rows {
        writeln!(w, "{node},{kind},{group}")?;
    }
    Ok(())
}
