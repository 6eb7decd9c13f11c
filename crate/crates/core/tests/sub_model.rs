mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use tvcreeper_core::model::ModelError;
use tvcreeper_core::{crawl, extract_sub_model, fixtures, CrawlConfig};

#[test]
fn fixture_sub_models_match_closure() {
    for f in fixtures::all() {
        let m = crawl(&f.spec, &CrawlConfig { focus: f.focus.map(String::from), ..Default::default() }).unwrap().model;
        for dest in m.end_nodes() {
            let sub = extract_sub_model(&m, [dest.as_str()]).unwrap();
            let (nodes, edges) = common::closure_sub_model(&m, &[dest]);
            let got_nodes: BTreeSet<_> = sub.graph().nodes().iter().map(|n| n.id.clone()).collect();
            let got_edges: BTreeSet<_> = sub.graph().edges().iter().map(|e| e.id.clone()).collect();
            assert_eq!((got_nodes, got_edges), (nodes, edges), "{} -> {dest}", f.name);
        }
    }
}

#[test]
fn play_trailer_sub_model() {
    let m = crawl(&fixtures::cinemup(), &CrawlConfig::default()).unwrap().model;
    let sub = extract_sub_model(&m, ["details/PLAY TRAILER!PlayTrailer"]).unwrap();
    // settings screen and the other action are cut away
    assert_eq!(sub.graph().nodes().len(), 17);
    assert_eq!(sub.graph().edges().len(), 48);
    assert!(sub.graph().nodes().iter().all(|n| n.screen != "settings"));
}

#[test]
fn destination_errors() {
    let m = crawl(&fixtures::cinemup(), &CrawlConfig::default()).unwrap().model;
    assert!(matches!(extract_sub_model(&m, ["nope"]), Err(ModelError::UnknownDestination(_))));
    assert!(matches!(extract_sub_model(&m, std::iter::empty()), Err(ModelError::NoDestinations)));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn sub_model_is_sound_and_minimal(m in common::arb_model(8)) {
        let dests: Vec<&str> = m.end_nodes().iter().map(String::as_str).collect();
        let (nodes, edges) = common::closure_sub_model(&m, &dests);
        match extract_sub_model(&m, dests.iter().copied()) {
            Ok(sub) => {
                let got_nodes: BTreeSet<_> = sub.graph().nodes().iter().map(|n| n.id.clone()).collect();
                let got_edges: BTreeSet<_> = sub.graph().edges().iter().map(|e| e.id.clone()).collect();
                prop_assert_eq!(got_nodes, nodes);
                prop_assert_eq!(got_edges, edges);
                // idempotent
                let again = extract_sub_model(sub.graph(), sub.destinations().iter().map(String::as_str)).unwrap();
                prop_assert_eq!(again.graph(), sub.graph());
            }
            Err(ModelError::DestinationsUnreachable) => prop_assert!(nodes.is_empty()),
            Err(e) => prop_assert!(false, "unexpected {e}"),
        }
    }
}
