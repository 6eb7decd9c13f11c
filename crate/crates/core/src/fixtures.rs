//! Bundled example apps used by the tests, the acceptance suite and the
//! README walkthrough. All are returned with grid navigation derived.

use crate::tvsim::{derive_nav_from_grid, load_app_spec, AppSpec, EffectKind, EffectStep, Screen, Widget, WidgetKind};

pub const SIX_GRID_JSON: &str = include_str!("../fixtures/six_grid.json");
pub const CINEMUP_JSON: &str = include_str!("../fixtures/cinemup.json");
pub const MEMORY_JSON: &str = include_str!("../fixtures/memory.json");
pub const CHESSLAB_JSON: &str = include_str!("../fixtures/chesslab.json");
pub const MINIMAL_JSON: &str = include_str!("../fixtures/minimal.json");

/// A bundled app together with the focus to start from.
#[derive(Debug, Clone)]
pub struct Fixture {
    pub name: &'static str,
    pub spec: AppSpec,
    pub focus: Option<&'static str>,
}

impl Fixture {
    /// The focus widget a session will actually start on.
    pub fn start_widget(&self) -> &str {
        self.spec.root().initial_focus.as_deref().or(self.focus).expect("fixtures resolve a focus")
    }
}

fn load(text: &str) -> AppSpec {
    derive_nav_from_grid(&load_app_spec(text).expect("bundled fixture is valid"))
}

/// Single screen, 2×3 grid v1..v6, no declared focus.
pub fn six_grid() -> AppSpec {
    load(SIX_GRID_JSON)
}

/// Home menu, movie list, details and settings screens.
pub fn cinemup() -> AppSpec {
    load(CINEMUP_JSON)
}

/// 3×5 board of cards, each flipping with one attribute write.
pub fn memory() -> AppSpec {
    load(MEMORY_JSON)
}

pub fn chesslab() -> AppSpec {
    load(CHESSLAB_JSON)
}

pub fn minimal() -> AppSpec {
    load(MINIMAL_JSON)
}

pub const SCALE_TILES: usize = 89;
pub const SCALE_FETCH: usize = 89;
pub const SCALE_LOOKUP: usize = 49;
pub const SCALE_FEATURE: usize = 1365;
pub const SCALE_ASSIGN: usize = 89;

/// A one-screen catalog of 89 tiles whose OK handlers carry exactly 89
/// fetch-resource, 49 lookup-element, 1365 invoke-feature and 89
/// assign-variable steps. With `fatal`, every step stops the app when
/// mutated.
pub fn cinemup_scale(fatal: bool) -> AppSpec {
    const COLS: usize = 9;
    let per_tile = SCALE_FEATURE / SCALE_TILES;
    let extra = SCALE_FEATURE % SCALE_TILES;
    let step = |kind, arg: String| EffectStep { fatal, ..EffectStep::new(kind, arg) };

    let mut widgets = Vec::with_capacity(SCALE_TILES);
    let mut hints = std::collections::BTreeMap::new();
    for i in 0..SCALE_TILES {
        let mut effects = vec![step(EffectKind::FetchResource, format!("https://api.themoviedb.org/movie/{i}"))];
        if i < SCALE_LOOKUP {
            effects.push(step(EffectKind::LookupElement, format!("poster-{i}")));
        }
        effects.push(step(EffectKind::AssignVariable, "starsEmpty".into()));
        let features = per_tile + usize::from(i < extra);
        effects.extend((0..features).map(|f| step(EffectKind::InvokeFeature, format!("slickNext{f}"))));
        effects.push(EffectStep::new(EffectKind::TerminalAction, format!("Open{i}")));
        let id = format!("t{i:02}");
        hints.insert(id.clone(), ((i / COLS) as i64, (i % COLS) as i64));
        widgets.push(Widget { id, label: format!("Movie {i}"), kind: WidgetKind::Action, effects });
    }
    let spec = AppSpec {
        name: "CineMup catalog".into(),
        root_screen: "catalog".into(),
        screens: vec![Screen {
            id: "catalog".into(),
            initial_focus: Some("t00".into()),
            widgets,
            nav: Default::default(),
            grid_hints: hints,
        }],
    };
    spec.validate().expect("generated fixture is valid");
    derive_nav_from_grid(&spec)
}

/// Every bundled fixture with at most 100 widgets.
pub fn all() -> Vec<Fixture> {
    vec![
        Fixture { name: "six_grid", spec: six_grid(), focus: Some("v1") },
        Fixture { name: "cinemup", spec: cinemup(), focus: None },
        Fixture { name: "memory", spec: memory(), focus: None },
        Fixture { name: "chesslab", spec: chesslab(), focus: None },
        Fixture { name: "minimal", spec: minimal(), focus: None },
        Fixture { name: "cinemup_scale", spec: cinemup_scale(false), focus: None },
    ]
}
