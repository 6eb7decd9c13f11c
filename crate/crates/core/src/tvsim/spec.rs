use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mutation::MutationMark;

/// A remote-control key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Key {
    Up,
    Down,
    Left,
    Right,
    #[serde(rename = "OK")]
    Ok,
    Back,
}

impl Key {
    pub const ALL: [Key; 6] = [Key::Up, Key::Down, Key::Left, Key::Right, Key::Ok, Key::Back];

    /// Keys used to discover new states, in probing order.
    pub const PROBE: [Key; 5] = [Key::Up, Key::Down, Key::Left, Key::Right, Key::Ok];

    pub fn is_directional(self) -> bool {
        matches!(self, Key::Up | Key::Down | Key::Left | Key::Right)
    }

    pub fn name(self) -> &'static str {
        match self {
            Key::Up => "Up",
            Key::Down => "Down",
            Key::Left => "Left",
            Key::Right => "Right",
            Key::Ok => "OK",
            Key::Back => "Back",
        }
    }
}

impl fmt::Display for Key {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown key `{0}`")]
pub struct UnknownKey(pub String);

impl FromStr for Key {
    type Err = UnknownKey;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Key::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| UnknownKey(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum WidgetKind {
    #[default]
    Navigable,
    Action,
}

/// What a single step of a widget's OK handler does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EffectKind {
    FetchResource,
    LookupElement,
    SetAttribute,
    InvokeFeature,
    AssignVariable,
    ComputeIndex,
    CallFunction,
    BindEvent,
    OpenScreen,
    TerminalAction,
}

impl EffectKind {
    /// Steps that change what the user sees; only allowed as the last step.
    pub fn is_terminal(self) -> bool {
        matches!(self, EffectKind::OpenScreen | EffectKind::TerminalAction)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct EffectStep {
    pub kind: EffectKind,
    pub argument: String,
    /// When this step's site is mutated, the fault stops the app.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub fatal: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mutation: Option<MutationMark>,
}

impl EffectStep {
    pub fn new(kind: EffectKind, argument: impl Into<String>) -> Self {
        EffectStep { kind, argument: argument.into(), fatal: false, mutation: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Widget {
    pub id: String,
    #[serde(default)]
    pub label: String,
    #[serde(default)]
    pub kind: WidgetKind,
    #[serde(default)]
    pub effects: Vec<EffectStep>,
}

impl Widget {
    pub fn label(&self) -> &str {
        if self.label.is_empty() {
            &self.id
        } else {
            &self.label
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Screen {
    pub id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_focus: Option<String>,
    pub widgets: Vec<Widget>,
    /// widget id -> key -> target widget id on this screen.
    #[serde(default)]
    pub nav: BTreeMap<String, BTreeMap<Key, String>>,
    /// widget id -> (row, col).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub grid_hints: BTreeMap<String, (i64, i64)>,
}

impl Screen {
    pub fn widget(&self, id: &str) -> Option<&Widget> {
        self.widgets.iter().find(|w| w.id == id)
    }

    pub fn nav_target(&self, widget: &str, key: Key) -> Option<&str> {
        self.nav.get(widget).and_then(|m| m.get(&key)).map(String::as_str)
    }

    /// Focus after this screen is opened.
    pub fn entry_focus(&self) -> &str {
        match &self.initial_focus {
            Some(f) => f,
            None => &self.widgets[0].id,
        }
    }
}

/// Declarative description of a simulated app.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AppSpec {
    pub name: String,
    pub root_screen: String,
    pub screens: Vec<Screen>,
}

impl AppSpec {
    pub fn screen(&self, id: &str) -> Option<&Screen> {
        self.screens.iter().find(|s| s.id == id)
    }

    pub fn root(&self) -> &Screen {
        self.screen(&self.root_screen).expect("validated spec has a root screen")
    }

    pub fn widget_count(&self) -> usize {
        self.screens.iter().map(|s| s.widgets.len()).sum()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("app spec serializes")
    }

    /// Checks every structural invariant; `load_app_spec` calls this.
    pub fn validate(&self) -> Result<(), SpecError> {
        validate(self)
    }
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("schema violation: {0}")]
    Schema(#[from] serde_json::Error),
    #[error("{location}: empty identifier")]
    EmptyId { location: String },
    #[error("{location}: identifier `{id}` must not contain '/' or '!'")]
    ReservedChar { location: String, id: String },
    #[error("{location}: duplicate id `{id}`")]
    DuplicateId { location: String, id: String },
    #[error("{location}: unknown widget `{id}`")]
    DanglingWidget { location: String, id: String },
    #[error("{location}: unknown screen `{id}`")]
    DanglingScreen { location: String, id: String },
    #[error("{location}: navigation key must be Up, Down, Left or Right, got {key}")]
    NonDirectionalNav { location: String, key: Key },
    #[error("{location}: screen has no widgets")]
    EmptyScreen { location: String },
    #[error("{location}: action widget has no effects")]
    InertAction { location: String },
    #[error("{location}: {kind:?} must be the last effect of a widget")]
    MisplacedTerminal { location: String, kind: EffectKind },
    #[error("{location}: grid cell ({row}, {col}) is used twice")]
    DuplicateCell { location: String, row: i64, col: i64 },
}

/// Parses and validates an app-spec JSON document.
pub fn load_app_spec(text: &str) -> Result<AppSpec, SpecError> {
    let spec: AppSpec = serde_json::from_str(text)?;
    validate(&spec)?;
    Ok(spec)
}

fn check_id(location: &str, id: &str) -> Result<(), SpecError> {
    if id.is_empty() {
        return Err(SpecError::EmptyId { location: location.to_string() });
    }
    if id.contains('/') || id.contains('!') {
        return Err(SpecError::ReservedChar { location: location.to_string(), id: id.to_string() });
    }
    Ok(())
}

fn validate(spec: &AppSpec) -> Result<(), SpecError> {
    let mut screen_ids = HashSet::new();
    for (si, screen) in spec.screens.iter().enumerate() {
        let loc = format!("screens[{si}]");
        check_id(&format!("{loc}.id"), &screen.id)?;
        if !screen_ids.insert(screen.id.as_str()) {
            return Err(SpecError::DuplicateId { location: format!("{loc}.id"), id: screen.id.clone() });
        }
    }
    if !screen_ids.contains(spec.root_screen.as_str()) {
        return Err(SpecError::DanglingScreen { location: "rootScreen".into(), id: spec.root_screen.clone() });
    }

    for (si, screen) in spec.screens.iter().enumerate() {
        let loc = format!("screens[{si}]");
        if screen.widgets.is_empty() {
            return Err(SpecError::EmptyScreen { location: loc });
        }
        let mut widget_ids = HashSet::new();
        for (wi, w) in screen.widgets.iter().enumerate() {
            let wloc = format!("{loc}.widgets[{wi}]");
            check_id(&format!("{wloc}.id"), &w.id)?;
            if !widget_ids.insert(w.id.as_str()) {
                return Err(SpecError::DuplicateId { location: format!("{wloc}.id"), id: w.id.clone() });
            }
            if w.kind == WidgetKind::Action && w.effects.is_empty() {
                return Err(SpecError::InertAction { location: wloc });
            }
            let last = w.effects.len().saturating_sub(1);
            for (ei, step) in w.effects.iter().enumerate() {
                let eloc = format!("{wloc}.effects[{ei}]");
                if step.kind.is_terminal() && ei != last {
                    return Err(SpecError::MisplacedTerminal { location: eloc, kind: step.kind });
                }
                if step.kind == EffectKind::OpenScreen && !screen_ids.contains(step.argument.as_str()) {
                    return Err(SpecError::DanglingScreen {
                        location: format!("{eloc}.argument"),
                        id: step.argument.clone(),
                    });
                }
            }
        }
        if let Some(f) = &screen.initial_focus {
            if !widget_ids.contains(f.as_str()) {
                return Err(SpecError::DanglingWidget { location: format!("{loc}.initialFocus"), id: f.clone() });
            }
        }
        for (src, targets) in &screen.nav {
            if !widget_ids.contains(src.as_str()) {
                return Err(SpecError::DanglingWidget { location: format!("{loc}.nav"), id: src.clone() });
            }
            for (key, dst) in targets {
                let nloc = format!("{loc}.nav.{src}.{key}");
                if !key.is_directional() {
                    return Err(SpecError::NonDirectionalNav { location: nloc, key: *key });
                }
                if !widget_ids.contains(dst.as_str()) {
                    return Err(SpecError::DanglingWidget { location: nloc, id: dst.clone() });
                }
            }
        }
        let mut cells = BTreeSet::new();
        for (wid, &(row, col)) in &screen.grid_hints {
            if !widget_ids.contains(wid.as_str()) {
                return Err(SpecError::DanglingWidget { location: format!("{loc}.gridHints"), id: wid.clone() });
            }
            if !cells.insert((row, col)) {
                return Err(SpecError::DuplicateCell { location: format!("{loc}.gridHints"), row, col });
            }
        }
    }
    Ok(())
}
