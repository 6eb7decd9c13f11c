//! Simulated remote-control app: spec loading and a deterministic session
//! interpreter standing in for the device under test.

mod grid;
mod session;
mod spec;

pub use grid::derive_nav_from_grid;
pub use session::{init_session, press_key, reset_and_replay, Frame, LogEvent, LogKind, SessionState, SimError};
pub use spec::{
    load_app_spec, AppSpec, EffectKind, EffectStep, Key, Screen, SpecError, UnknownKey, Widget, WidgetKind,
};
