//! Depth-first black-box crawler producing the mega-model.

use std::collections::{BTreeSet, HashSet, VecDeque};

use thiserror::Error;

use crate::model::{action_node_id, edge_id, widget_node_id, Edge, MegaModel, Node, NodeKind};
use crate::tvsim::{
    init_session, press_key, reset_and_replay, AppSpec, Key, LogEvent, LogKind, SessionState, SimError,
};
use crate::NodeId;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CrawlConfig {
    /// Cap on probe key presses. Replays used for restoration are free.
    pub max_actions: Option<u64>,
    pub focus: Option<String>,
}

impl CrawlConfig {
    /// Probe keys, tried in this order from every state.
    pub const PROBE_ORDER: [Key; 5] = Key::PROBE;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrawlResult {
    pub model: MegaModel,
    /// Node ids in discovery order.
    pub visited: Vec<NodeId>,
    pub actions_used: u64,
    pub truncated: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CrawlError {
    #[error(transparent)]
    Sim(#[from] SimError),
}

fn widget_node(spec: &AppSpec, screen: &str, widget: &str) -> Node {
    let label = spec
        .screen(screen)
        .and_then(|s| s.widget(widget))
        .map(|w| w.label().to_string())
        .unwrap_or_else(|| widget.to_string());
    Node {
        id: widget_node_id(screen, widget),
        label,
        screen: screen.to_string(),
        widget: widget.to_string(),
        kind: NodeKind::Navigable,
    }
}

/// Node the app ended up in after a press, judged from the press's log
/// events. `None` when the app did not react.
pub fn reaction_target(
    spec: &AppSpec,
    before: &SessionState,
    after: &SessionState,
    events: &[LogEvent],
) -> Option<Node> {
    let mut reacted = false;
    for ev in events {
        match ev.kind {
            LogKind::Moved | LogKind::OpenedScreen | LogKind::ClosedScreen => reacted = true,
            LogKind::ActionFired => {
                return Some(Node {
                    id: action_node_id(before.screen(), &before.focus, &ev.detail),
                    label: ev.detail.clone(),
                    screen: before.screen().to_string(),
                    widget: before.focus.clone(),
                    kind: NodeKind::End,
                });
            }
            LogKind::NoReaction | LogKind::Fault | LogKind::FocusRequired => {}
        }
    }
    reacted.then(|| widget_node(spec, after.screen(), &after.focus))
}

/// Node for the state a session is currently in.
pub fn current_node(spec: &AppSpec, state: &SessionState) -> Node {
    widget_node(spec, state.screen(), &state.focus)
}

struct Crawler<'a> {
    spec: &'a AppSpec,
    focus: Option<&'a str>,
    cap: Option<u64>,
    nodes: Vec<Node>,
    known: HashSet<NodeId>,
    edges: Vec<Edge>,
    actions_used: u64,
    truncated: bool,
}

impl Crawler<'_> {
    fn explore(&mut self, source: &str, path: &mut Vec<Key>) -> Result<(), CrawlError> {
        let mut state = reset_and_replay(self.spec, path, self.focus)?;
        for key in CrawlConfig::PROBE_ORDER {
            if self.cap.is_some_and(|cap| self.actions_used >= cap) {
                self.truncated = true;
                return Ok(());
            }
            let before = state.clone();
            let events = press_key(self.spec, &mut state, key).to_vec();
            self.actions_used += 1;
            let Some(target) = reaction_target(self.spec, &before, &state, &events) else {
                continue;
            };
            self.edges.push(Edge {
                id: edge_id(source, key),
                source: source.to_string(),
                target: target.id.clone(),
                key,
            });
            if self.known.insert(target.id.clone()) {
                let expand = target.kind == NodeKind::Navigable;
                let id = target.id.clone();
                self.nodes.push(target);
                if expand {
                    path.push(key);
                    self.explore(&id, path)?;
                    path.pop();
                }
            }
            if self.truncated {
                return Ok(());
            }
            // back to the parent state
            state = reset_and_replay(self.spec, path, self.focus)?;
        }
        Ok(())
    }
}

/// Marks navigable nodes without outgoing edges as sinks and collects the
/// end-node set.
fn finish(mut nodes: Vec<Node>, edges: Vec<Edge>, start: NodeId) -> MegaModel {
    let sources: HashSet<&str> = edges.iter().map(|e| e.source.as_str()).collect();
    let mut end_nodes = BTreeSet::new();
    for n in &mut nodes {
        if n.kind == NodeKind::Navigable && !sources.contains(n.id.as_str()) {
            n.kind = NodeKind::Sink;
        }
        if n.kind != NodeKind::Navigable {
            end_nodes.insert(n.id.clone());
        }
    }
    MegaModel::new(nodes, edges, start, end_nodes).expect("crawled model is well formed")
}

pub fn crawl(spec: &AppSpec, config: &CrawlConfig) -> Result<CrawlResult, CrawlError> {
    let focus = config.focus.as_deref();
    let init = init_session(spec, focus)?;
    let start = current_node(spec, &init);
    let start_id = start.id.clone();

    let mut crawler = Crawler {
        spec,
        focus,
        cap: config.max_actions,
        nodes: vec![start],
        known: HashSet::from([start_id.clone()]),
        edges: Vec::new(),
        actions_used: 0,
        truncated: false,
    };
    crawler.explore(&start_id, &mut Vec::new())?;

    let visited = crawler.nodes.iter().map(|n| n.id.clone()).collect();
    Ok(CrawlResult {
        model: finish(crawler.nodes, crawler.edges, start_id),
        visited,
        actions_used: crawler.actions_used,
        truncated: crawler.truncated,
    })
}

/// Breadth-first enumeration of every reachable simulator state, probing
/// all five keys everywhere. Serves as the completeness oracle for `crawl`.
///
/// Reactions are detected by comparing whole states rather than reading the
/// log. States are deduplicated by (screen, focus): probe reactions never
/// depend on the deeper screen stack, and full stacks are unbounded when
/// screens open each other.
pub fn brute_force_model(spec: &AppSpec, focus: &str) -> Result<MegaModel, CrawlError> {
    let init = init_session(spec, Some(focus))?;
    let start = current_node(spec, &init);
    let start_id = start.id.clone();

    let mut nodes = vec![start];
    let mut known: HashSet<NodeId> = HashSet::from([start_id.clone()]);
    let mut edges = Vec::new();
    let mut queue = VecDeque::from([init]);

    while let Some(state) = queue.pop_front() {
        let source = widget_node_id(state.screen(), &state.focus);
        for key in Key::PROBE {
            let mut next = state.clone();
            next.log.clear();
            press_key(spec, &mut next, key);
            let fired = next.log.iter().find(|e| e.kind == LogKind::ActionFired);
            let target = if let Some(ev) = fired {
                Node {
                    id: action_node_id(state.screen(), &state.focus, &ev.detail),
                    label: ev.detail.clone(),
                    screen: state.screen().to_string(),
                    widget: state.focus.clone(),
                    kind: NodeKind::End,
                }
            } else if next.screen_stack != state.screen_stack || next.focus != state.focus {
                current_node(spec, &next)
            } else {
                continue;
            };
            edges.push(Edge { id: edge_id(&source, key), source: source.clone(), target: target.id.clone(), key });
            if known.insert(target.id.clone()) {
                if target.kind == NodeKind::Navigable {
                    queue.push_back(next);
                }
                nodes.push(target);
            }
        }
    }
    Ok(finish(nodes, edges, start_id))
}
