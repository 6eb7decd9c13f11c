//! Reference implementations used only by tests. Each is written
//! independently of the library algorithm it checks.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use proptest::prelude::*;
use tvcreeper_core::model::{Edge, Node, NodeKind};
use tvcreeper_core::tvsim::{
    init_session, press_key, EffectKind, EffectStep, LogKind, Screen, SessionState, Widget, WidgetKind,
};
use tvcreeper_core::{AppSpec, Key, MegaModel, SubModel, TestSuite};

/// Nodes and edges on some walk start -> destination, by transitive closure.
pub fn closure_sub_model(model: &MegaModel, dests: &[&str]) -> (BTreeSet<String>, BTreeSet<String>) {
    let ids: Vec<&str> = model.nodes().iter().map(|n| n.id.as_str()).collect();
    let index: BTreeMap<&str, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let n = ids.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, row) in reach.iter_mut().enumerate() {
        row[i] = true;
    }
    for e in model.edges() {
        reach[index[e.source.as_str()]][index[e.target.as_str()]] = true;
    }
    for k in 0..n {
        for i in 0..n {
            if reach[i][k] {
                let via = reach[k].clone();
                for (cell, r) in reach[i].iter_mut().zip(via) {
                    *cell |= r;
                }
            }
        }
    }
    let s = index[model.start()];
    let to_dest = |v: usize| dests.iter().any(|d| reach[v][index[d]]);
    let nodes = (0..n).filter(|&v| reach[s][v] && to_dest(v)).map(|v| ids[v].to_string()).collect();
    let edges = model
        .edges()
        .iter()
        .filter(|e| reach[s][index[e.source.as_str()]] && to_dest(index[e.target.as_str()]))
        .map(|e| e.id.clone())
        .collect();
    (nodes, edges)
}

/// Walk as (nodes, edges).
pub type Walk = (Vec<String>, Vec<String>);

/// All shortest walks start -> end node that use `edge`, enumerated over the
/// product graph (node, edge-used) with exact distances to the goal.
pub fn shortest_walks_through(model: &MegaModel, edge: &str) -> Vec<Walk> {
    // backward BFS over product states from goals (end, true)
    let mut dist: BTreeMap<(&str, bool), usize> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for end in model.end_nodes() {
        dist.insert((end.as_str(), true), 0);
        queue.push_back((end.as_str(), true));
    }
    while let Some((v, used)) = queue.pop_front() {
        let d = dist[&(v, used)];
        for e in model.edges().iter().filter(|e| e.target == v) {
            let mut preds = vec![];
            if e.id == edge {
                if used {
                    preds.push((e.source.as_str(), false));
                    preds.push((e.source.as_str(), true));
                }
            } else {
                preds.push((e.source.as_str(), used));
            }
            for p in preds {
                if let std::collections::btree_map::Entry::Vacant(slot) = dist.entry(p) {
                    slot.insert(d + 1);
                    queue.push_back(p);
                }
            }
        }
    }
    let Some(&total) = dist.get(&(model.start(), false)) else {
        return vec![];
    };
    let mut out = Vec::new();
    let mut stack = vec![((model.start(), false), vec![model.start().to_string()], Vec::<String>::new())];
    while let Some(((v, used), nodes, edges)) = stack.pop() {
        let d = dist[&(v, used)];
        if d == 0 {
            out.push((nodes, edges));
            continue;
        }
        for e in model.edges().iter().filter(|e| e.source == v) {
            let next = (e.target.as_str(), used || e.id == edge);
            if dist.get(&next) == Some(&(d - 1)) {
                let mut n2 = nodes.clone();
                n2.push(e.target.clone());
                let mut e2 = edges.clone();
                e2.push(e.id.clone());
                stack.push((next, n2, e2));
            }
        }
    }
    assert!(out.iter().all(|(_, e)| e.len() == total));
    out
}

/// Lexicographically least (nodes, then edges) shortest walk through `edge`.
pub fn lexmin_walk_through(model: &MegaModel, edge: &str) -> Option<Walk> {
    shortest_walks_through(model, edge).into_iter().min()
}

/// Node the simulator is on, computed from the raw session state and events.
pub fn observed_node(state: &SessionState, fired: Option<&str>) -> String {
    let screen = &state.screen_stack.last().unwrap().screen;
    match fired {
        Some(action) => format!("{screen}/{}!{action}", state.focus),
        None => format!("{screen}/{}", state.focus),
    }
}

/// Replays each test's keys on the simulator and marks the model edges
/// (source node, key) that the observed run actually traversed.
pub fn replay_mark(spec: &AppSpec, model: &MegaModel, suite: &TestSuite, focus: Option<&str>) -> BTreeSet<String> {
    let by_source_key: BTreeMap<(&str, Key), &Edge> =
        model.edges().iter().map(|e| ((e.source.as_str(), e.key), e)).collect();
    let mut marked = BTreeSet::new();
    for test in &suite.tests {
        let mut state = init_session(spec, focus).unwrap();
        let mut at = observed_node(&state, None);
        for &key in &test.keys {
            let events = press_key(spec, &mut state, key).to_vec();
            let fired = events.iter().find(|e| e.kind == LogKind::ActionFired).map(|e| e.detail.clone());
            let next = observed_node(&state, fired.as_deref());
            if let Some(e) = by_source_key.get(&(at.as_str(), key)) {
                if e.target == next {
                    marked.insert(e.id.clone());
                }
            }
            at = next;
        }
    }
    marked
}

/// Widgets on which some test presses OK, as (screen, widget).
pub fn ok_pressed_widgets(spec: &AppSpec, suite: &TestSuite, focus: Option<&str>) -> BTreeSet<(String, String)> {
    let mut out = BTreeSet::new();
    for test in &suite.tests {
        let mut state = init_session(spec, focus).unwrap();
        for &key in &test.keys {
            if key == Key::Ok {
                out.insert((state.screen().to_string(), state.focus.clone()));
            }
            press_key(spec, &mut state, key);
        }
    }
    out
}

pub fn node(id: &str) -> Node {
    Node { id: id.into(), label: id.into(), screen: "s".into(), widget: id.into(), kind: NodeKind::Navigable }
}

/// Random multigraph on `n` nodes: each (node, key) has at most one edge.
pub fn arb_model(max_nodes: usize) -> impl Strategy<Value = MegaModel> {
    (2..=max_nodes)
        .prop_flat_map(|n| {
            let slots = proptest::collection::vec(proptest::option::weighted(0.45, 0..n), n * 5);
            let ends = proptest::collection::btree_set(0..n, 1..=2.min(n));
            (Just(n), slots, ends)
        })
        .prop_map(|(n, slots, ends)| {
            let name = |i: usize| format!("n{i}");
            let nodes = (0..n).map(|i| node(&name(i))).collect();
            let mut edges = Vec::new();
            for (slot, target) in slots.into_iter().enumerate() {
                if let Some(t) = target {
                    let (src, key) = (slot / 5, Key::PROBE[slot % 5]);
                    edges.push(Edge { id: format!("{}.{}", name(src), key), source: name(src), target: name(t), key });
                }
            }
            MegaModel::new(nodes, edges, name(0), ends.into_iter().map(name).collect()).unwrap()
        })
}

/// A random model together with a sub-model for one of its reachable end nodes.
pub fn arb_sub_model(max_nodes: usize) -> impl Strategy<Value = SubModel> {
    arb_model(max_nodes).prop_filter_map("no reachable destination", |m| {
        let ends: Vec<String> = m.end_nodes().iter().cloned().collect();
        tvcreeper_core::extract_sub_model(&m, ends.iter().map(String::as_str)).ok()
    })
}

/// Random app: one or two screens, arbitrary directional nav, some action
/// widgets that either finish or open the other screen.
pub fn arb_spec() -> impl Strategy<Value = AppSpec> {
    let screen = |sid: &'static str| {
        (2usize..6)
            .prop_flat_map(move |n| {
                let nav = proptest::collection::vec(proptest::option::weighted(0.5, 0..n), n * 4);
                let kinds = proptest::collection::vec(0u8..4, n);
                (Just(n), nav, kinds)
            })
            .prop_map(move |(n, nav, kinds)| {
                let wid = |i: usize| format!("{sid}{i}");
                let other = if sid == "a" { "b" } else { "a" };
                let widgets = (0..n)
                    .map(|i| {
                        let (kind, effects) = match kinds[i] {
                            0 | 1 => (WidgetKind::Navigable, vec![]),
                            2 => (
                                WidgetKind::Action,
                                vec![
                                    EffectStep::new(EffectKind::SetAttribute, "class"),
                                    EffectStep::new(EffectKind::TerminalAction, format!("Do{sid}{i}")),
                                ],
                            ),
                            _ => (WidgetKind::Action, vec![EffectStep::new(EffectKind::OpenScreen, other)]),
                        };
                        Widget { id: wid(i), label: String::new(), kind, effects }
                    })
                    .collect();
                let mut map: BTreeMap<String, BTreeMap<Key, String>> = BTreeMap::new();
                for (slot, t) in nav.into_iter().enumerate() {
                    if let Some(t) = t {
                        map.entry(wid(slot / 4)).or_default().insert(Key::PROBE[slot % 4], wid(t));
                    }
                }
                Screen { id: sid.into(), initial_focus: None, widgets, nav: map, grid_hints: Default::default() }
            })
    };
    (screen("a"), screen("b")).prop_map(|(a, b)| {
        let spec = AppSpec { name: "random".into(), root_screen: "a".into(), screens: vec![a, b] };
        spec.validate().unwrap();
        spec
    })
}
