//! All-edge-coverage test generation over a (sub-)model.
//!
//! Every edge becomes a cover element. Each element gets one candidate walk:
//! the shortest walk from the start node to the edge's head, the edge
//! itself, then the shortest walk from its tail to the nearest end node.
//! Candidates are then picked greedily by how many still-uncovered elements
//! they contain.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artifact::{to_json, Provenance};
use crate::model::{Edge, MegaModel};
use crate::tvsim::{Key, UnknownKey};
use crate::{EdgeId, NodeId};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverElement {
    pub head: NodeId,
    pub edge: EdgeId,
    pub tail: NodeId,
}

/// A walk from the start node to an end node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestCase {
    pub nodes: Vec<NodeId>,
    pub edges: Vec<EdgeId>,
    pub keys: Vec<Key>,
}

impl TestCase {
    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    fn order(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.nodes.cmp(&other.nodes))
            .then_with(|| self.edges.cmp(&other.edges))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TestSuite {
    pub tests: Vec<TestCase>,
    pub covered_edges: BTreeSet<EdgeId>,
    pub uncoverable: BTreeSet<EdgeId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("edge `{0}` lies on no walk from the start node to an end node")]
    Uncoverable(EdgeId),
    #[error("model has no edges and its start node is not an end node")]
    EmptyModel,
    #[error("cover element for unknown edge `{0}`")]
    UnknownEdge(EdgeId),
}

pub fn build_cover(g: &impl AsRef<MegaModel>) -> Vec<CoverElement> {
    g.as_ref()
        .edges()
        .iter()
        .map(|e| CoverElement { head: e.source.clone(), edge: e.id.clone(), tail: e.target.clone() })
        .collect()
}

/// Precomputed adjacency and distance tables shared by all candidates.
struct Walker<'a> {
    out: HashMap<&'a str, Vec<&'a Edge>>,
    inc: HashMap<&'a str, Vec<&'a Edge>>,
    /// Distance from each node to the nearest end node.
    to_end: HashMap<&'a str, usize>,
    start: &'a str,
}

impl<'a> Walker<'a> {
    fn new(g: &'a MegaModel) -> Self {
        let mut out = g.out_edges();
        for edges in out.values_mut() {
            edges.sort_by(|a, b| (&a.target, &a.id).cmp(&(&b.target, &b.id)));
        }
        let inc = g.in_edges();
        let to_end = distances_to(g.end_nodes().iter().map(String::as_str), &inc);
        Walker { out, inc, to_end, start: g.start() }
    }

    /// Lexicographically smallest shortest walk from `from` down a distance
    /// table, appended to `nodes`/`edges`.
    fn descend(
        &self,
        from: &'a str,
        dist: &HashMap<&'a str, usize>,
        nodes: &mut Vec<NodeId>,
        edges: &mut Vec<&'a Edge>,
    ) {
        let mut at = from;
        let mut d = dist[at];
        while d > 0 {
            // out-edges are sorted by (target, id), so the first hit is the smallest step
            let e = self.out[at]
                .iter()
                .find(|e| dist.get(e.target.as_str()) == Some(&(d - 1)))
                .expect("distance table is consistent");
            edges.push(e);
            nodes.push(e.target.clone());
            at = &e.target;
            d -= 1;
        }
    }

    fn candidate(&self, c: &CoverElement, edge: &'a Edge) -> Option<TestCase> {
        self.candidate_with(c, edge, &distances_to([edge.source.as_str()], &self.inc))
    }

    /// As `candidate`, with the distance table to `edge.source` supplied.
    fn candidate_with(&self, c: &CoverElement, edge: &'a Edge, to_head: &HashMap<&'a str, usize>) -> Option<TestCase> {
        if !to_head.contains_key(self.start) || !self.to_end.contains_key(edge.target.as_str()) {
            return None;
        }
        let mut nodes = vec![self.start.to_string()];
        let mut edges = Vec::new();
        self.descend(self.start, to_head, &mut nodes, &mut edges);
        debug_assert_eq!(nodes.last().map(String::as_str), Some(c.head.as_str()));
        edges.push(edge);
        nodes.push(edge.target.clone());
        self.descend(&edge.target, &self.to_end, &mut nodes, &mut edges);
        Some(TestCase {
            nodes,
            keys: edges.iter().map(|e| e.key).collect(),
            edges: edges.into_iter().map(|e| e.id.clone()).collect(),
        })
    }
}

/// Backward BFS: number of edges from each node to the nearest target.
fn distances_to<'a>(
    targets: impl IntoIterator<Item = &'a str>,
    inc: &HashMap<&'a str, Vec<&'a Edge>>,
) -> HashMap<&'a str, usize> {
    let mut dist = HashMap::new();
    let mut queue = VecDeque::new();
    for t in targets {
        if dist.insert(t, 0).is_none() {
            queue.push_back(t);
        }
    }
    while let Some(n) = queue.pop_front() {
        let d = dist[n];
        for e in inc.get(n).into_iter().flatten() {
            let prev = e.source.as_str();
            if !dist.contains_key(prev) {
                dist.insert(prev, d + 1);
                queue.push_back(prev);
            }
        }
    }
    dist
}

/// Shortest walk start → c.head → c.tail → nearest end node; ties go to the
/// lexicographically smallest node sequence.
pub fn candidate_walk(g: &impl AsRef<MegaModel>, c: &CoverElement) -> Result<TestCase, GenError> {
    let g = g.as_ref();
    let edge = g
        .edge(&c.edge)
        .filter(|e| e.source == c.head && e.target == c.tail)
        .ok_or_else(|| GenError::UnknownEdge(c.edge.clone()))?;
    Walker::new(g).candidate(c, edge).ok_or_else(|| GenError::Uncoverable(c.edge.clone()))
}

pub fn generate_tests(g: &impl AsRef<MegaModel>) -> Result<TestSuite, GenError> {
    let g = g.as_ref();
    if g.edges().is_empty() {
        if g.end_nodes().contains(g.start()) {
            return Ok(TestSuite { tests: vec![], covered_edges: BTreeSet::new(), uncoverable: BTreeSet::new() });
        }
        return Err(GenError::EmptyModel);
    }

    let walker = Walker::new(g);
    let index: HashMap<&str, usize> = g.edges().iter().enumerate().map(|(i, e)| (e.id.as_str(), i)).collect();
    let mut to_head: HashMap<&str, HashMap<&str, usize>> = HashMap::new();
    // each candidate with the distinct edge indices it walks
    let mut candidates: Vec<(TestCase, Vec<usize>)> = Vec::new();
    let mut uncoverable = BTreeSet::new();
    let mut remaining = vec![false; g.edges().len()];
    for (i, (c, edge)) in build_cover(&g).iter().zip(g.edges()).enumerate() {
        let dist =
            to_head.entry(edge.source.as_str()).or_insert_with(|| distances_to([edge.source.as_str()], &walker.inc));
        match walker.candidate_with(c, edge, dist) {
            Some(walk) => {
                remaining[i] = true;
                let mut ids: Vec<usize> = walk.edges.iter().map(|e| index[e.as_str()]).collect();
                ids.sort_unstable();
                ids.dedup();
                candidates.push((walk, ids));
            }
            None => {
                uncoverable.insert(edge.id.clone());
            }
        }
    }
    let mut left = remaining.iter().filter(|r| **r).count();
    let mut tests = Vec::new();
    let mut covered_edges = BTreeSet::new();
    while left > 0 {
        let gain = |ids: &[usize]| ids.iter().filter(|&&i| remaining[i]).count();
        let (best, ids) = candidates
            .iter()
            .map(|(t, ids)| (gain(ids), t, ids))
            .max_by(|(ga, a, _), (gb, b, _)| ga.cmp(gb).then_with(|| b.order(a)))
            .map(|(_, t, ids)| (t.clone(), ids.clone()))
            .expect("candidates is non-empty");
        for i in ids {
            if std::mem::take(&mut remaining[i]) {
                left -= 1;
            }
        }
        covered_edges.extend(best.edges.iter().cloned());
        tests.push(best);
    }
    Ok(TestSuite { tests, covered_edges, uncoverable })
}

pub const SUITE_SCHEMA: &str = "tvcreeper.suite";
pub const SUITE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct SuiteDocument {
    schema: String,
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    #[serde(flatten)]
    suite: TestSuite,
}

#[derive(Debug, Error)]
pub enum SuiteFormatError {
    #[error("schema violation: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("unsupported document `{schema}` version {version}")]
    Version { schema: String, version: u32 },
    #[error("line {line}: {source}")]
    Key { line: usize, source: UnknownKey },
}

pub fn save_suite(suite: &TestSuite, provenance: Option<&Provenance>) -> String {
    to_json(&SuiteDocument {
        schema: SUITE_SCHEMA.into(),
        version: SUITE_VERSION,
        provenance: provenance.cloned(),
        suite: suite.clone(),
    })
}

pub fn load_suite(text: &str) -> Result<(TestSuite, Option<Provenance>), SuiteFormatError> {
    let doc: SuiteDocument = serde_json::from_str(text)?;
    if doc.schema != SUITE_SCHEMA || doc.version != SUITE_VERSION {
        return Err(SuiteFormatError::Version { schema: doc.schema, version: doc.version });
    }
    Ok((doc.suite, doc.provenance))
}

/// One key name per line, a blank line between tests.
pub fn to_keys_text(suite: &TestSuite) -> String {
    suite
        .tests
        .iter()
        .map(|t| t.keys.iter().map(|k| format!("{k}\n")).collect::<String>())
        .collect::<Vec<_>>()
        .join("\n")
}

pub fn parse_keys_text(text: &str) -> Result<Vec<Vec<Key>>, SuiteFormatError> {
    let mut tests = Vec::new();
    let mut current = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            tests.push(std::mem::take(&mut current));
            continue;
        }
        current.push(line.parse().map_err(|source| SuiteFormatError::Key { line: i + 1, source })?);
    }
    if !current.is_empty() {
        tests.push(current);
    }
    Ok(tests)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::graph;
    use crate::model::{edge_id, extract_sub_model};

    #[test]
    fn empty_model_cover() {
        let g = graph(&["a"], &[], "a", &["a"]);
        assert!(build_cover(&g).is_empty());
        let suite = generate_tests(&g).unwrap();
        assert!(suite.tests.is_empty() && suite.covered_edges.is_empty() && suite.uncoverable.is_empty());
        let g = graph(&["a"], &[], "a", &[]);
        assert_eq!(generate_tests(&g), Err(GenError::EmptyModel));
    }

    #[test]
    fn linear_chain_is_one_test() {
        let g = graph(
            &["s", "a", "b", "e"],
            &[("s", Key::Right, "a"), ("a", Key::Right, "b"), ("b", Key::Ok, "e")],
            "s",
            &["e"],
        );
        let suite = generate_tests(&g).unwrap();
        assert_eq!(suite.tests.len(), 1);
        assert_eq!(suite.tests[0].keys, [Key::Right, Key::Right, Key::Ok]);
        assert_eq!(suite.covered_edges.len(), 3);
    }

    #[test]
    fn direct_edge_candidate() {
        let g = graph(&["s", "e"], &[("s", Key::Ok, "e")], "s", &["e"]);
        let c = &build_cover(&g)[0];
        let w = candidate_walk(&g, c).unwrap();
        assert_eq!(w.nodes, ["s", "e"]);
        assert_eq!(w.edges, [edge_id("s", Key::Ok)]);
    }

    #[test]
    fn back_edge_revisits_start() {
        let g =
            graph(&["s", "a", "e"], &[("s", Key::Right, "a"), ("a", Key::Left, "s"), ("a", Key::Ok, "e")], "s", &["e"]);
        let c = build_cover(&g).into_iter().find(|c| c.tail == "s").unwrap();
        let w = candidate_walk(&g, &c).unwrap();
        assert_eq!(w.nodes, ["s", "a", "s", "a", "e"]);
    }

    #[test]
    fn uncoverable_on_raw_model() {
        let g = graph(&["s", "x", "e"], &[("s", Key::Ok, "e"), ("x", Key::Ok, "e")], "s", &["e"]);
        let c = build_cover(&g).into_iter().find(|c| c.head == "x").unwrap();
        assert_eq!(candidate_walk(&g, &c), Err(GenError::Uncoverable(c.edge.clone())));
        let suite = generate_tests(&g).unwrap();
        assert_eq!(suite.uncoverable.iter().collect::<Vec<_>>(), [&c.edge]);
        assert_eq!(suite.tests.len(), 1);
        // the sub-model drops it
        let sub = extract_sub_model(&g, ["e"]).unwrap();
        assert!(generate_tests(&sub).unwrap().uncoverable.is_empty());
    }

    #[test]
    fn parallel_edges_tie_break_by_edge_id() {
        let g = graph(&["s", "e"], &[("s", Key::Right, "e"), ("s", Key::Down, "e")], "s", &["e"]);
        let suite = generate_tests(&g).unwrap();
        assert_eq!(suite.tests.len(), 2);
        assert_eq!(suite.tests[0].edges, [edge_id("s", Key::Down)]);
    }

    #[test]
    fn keys_text_round_trip() {
        let suite = TestSuite {
            tests: vec![
                TestCase { nodes: vec![], edges: vec![], keys: vec![Key::Right, Key::Ok] },
                TestCase { nodes: vec![], edges: vec![], keys: vec![Key::Down] },
            ],
            covered_edges: BTreeSet::new(),
            uncoverable: BTreeSet::new(),
        };
        let text = to_keys_text(&suite);
        assert_eq!(text, "Right\nOK\n\nDown\n");
        assert_eq!(parse_keys_text(&text).unwrap(), vec![vec![Key::Right, Key::Ok], vec![Key::Down]]);
        assert!(matches!(parse_keys_text("Right\nJump\n"), Err(SuiteFormatError::Key { line: 2, .. })));
        assert!(parse_keys_text("").unwrap().is_empty());
    }

    #[test]
    fn suite_document_round_trip() {
        let g = graph(&["s", "e"], &[("s", Key::Ok, "e")], "s", &["e"]);
        let suite = generate_tests(&g).unwrap();
        let text = save_suite(&suite, None);
        assert_eq!(load_suite(&text).unwrap().0, suite);
    }
}
