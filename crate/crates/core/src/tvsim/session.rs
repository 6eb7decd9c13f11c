use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::spec::{AppSpec, EffectKind, Key};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LogKind {
    Moved,
    NoReaction,
    OpenedScreen,
    ClosedScreen,
    ActionFired,
    Fault,
    FocusRequired,
}

/// One line of the app log, the only thing a black-box observer sees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LogEvent {
    pub kind: LogKind,
    pub detail: String,
}

impl LogEvent {
    fn new(kind: LogKind, detail: impl Into<String>) -> Self {
        LogEvent { kind, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Frame {
    pub screen: String,
    /// Widget whose OK opened this screen; `None` for the root.
    pub opener: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SessionState {
    pub screen_stack: Vec<Frame>,
    pub focus: String,
    pub key_count: u64,
    pub log: Vec<LogEvent>,
    /// Set once a fatal fault has stopped the app.
    pub halted: bool,
}

impl SessionState {
    pub fn screen(&self) -> &str {
        &self.screen_stack.last().expect("screen stack is never empty").screen
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("Please Select the Focus Point")]
    FocusRequired,
    #[error("focus widget `{0}` is not on the root screen")]
    UnknownFocus(String),
}

pub fn init_session(spec: &AppSpec, focus: Option<&str>) -> Result<SessionState, SimError> {
    let root = spec.root();
    let focus = match (&root.initial_focus, focus) {
        (Some(f), _) => f.clone(),
        (None, Some(f)) if root.widget(f).is_some() => f.to_string(),
        (None, Some(f)) => return Err(SimError::UnknownFocus(f.to_string())),
        (None, None) => return Err(SimError::FocusRequired),
    };
    Ok(SessionState {
        screen_stack: vec![Frame { screen: root.id.clone(), opener: None }],
        focus,
        key_count: 0,
        log: Vec::new(),
        halted: false,
    })
}

/// Applies one key press and returns the events it logged.
pub fn press_key<'s>(spec: &AppSpec, state: &'s mut SessionState, key: Key) -> &'s [LogEvent] {
    let first = state.log.len();
    state.key_count += 1;

    if state.halted {
        state.log.push(LogEvent::new(LogKind::NoReaction, "halted"));
        return &state.log[first..];
    }

    let screen = spec.screen(state.screen()).expect("session screen exists in spec");
    match key {
        Key::Up | Key::Down | Key::Left | Key::Right => match screen.nav_target(&state.focus, key) {
            // a self-referencing nav entry leaves the screen unchanged
            Some(target) if target != state.focus => {
                state.focus = target.to_string();
                state.log.push(LogEvent::new(LogKind::Moved, target));
            }
            _ => state.log.push(LogEvent::new(LogKind::NoReaction, state.focus.clone())),
        },
        Key::Ok => {
            let widget = screen.widget(&state.focus).expect("focus names a widget on the top screen");
            for step in &widget.effects {
                if let Some(mark) = &step.mutation {
                    state.log.push(LogEvent::new(LogKind::Fault, mark.mutant_id.clone()));
                    if mark.fatal {
                        state.halted = true;
                    }
                    break;
                }
                match step.kind {
                    EffectKind::OpenScreen => {
                        let target = spec.screen(&step.argument).expect("validated open-screen target");
                        let opener = std::mem::replace(&mut state.focus, target.entry_focus().to_string());
                        state.screen_stack.push(Frame { screen: target.id.clone(), opener: Some(opener) });
                        state.log.push(LogEvent::new(LogKind::OpenedScreen, target.id.clone()));
                    }
                    EffectKind::TerminalAction => {
                        state.log.push(LogEvent::new(LogKind::ActionFired, step.argument.clone()));
                    }
                    // data-only effects have no visible reaction
                    _ => {}
                }
            }
            if state.log.len() == first {
                state.log.push(LogEvent::new(LogKind::NoReaction, state.focus.clone()));
            }
        }
        Key::Back => {
            if state.screen_stack.len() > 1 {
                let frame = state.screen_stack.pop().expect("len > 1");
                state.focus = frame.opener.expect("non-root frames record their opener");
                state.log.push(LogEvent::new(LogKind::ClosedScreen, frame.screen));
            } else {
                state.log.push(LogEvent::new(LogKind::NoReaction, state.focus.clone()));
            }
        }
    }
    &state.log[first..]
}

/// Fresh session followed by `keys`.
pub fn reset_and_replay(spec: &AppSpec, keys: &[Key], focus: Option<&str>) -> Result<SessionState, SimError> {
    let mut state = init_session(spec, focus)?;
    for &k in keys {
        press_key(spec, &mut state, k);
    }
    Ok(state)
}
