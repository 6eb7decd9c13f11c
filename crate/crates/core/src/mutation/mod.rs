//! Mutation operators for remote-control apps, retargeted to effect-step
//! sites of an [`AppSpec`], and mutation campaigns over a test suite.

mod campaign;
mod score;

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::artifact::{to_json, Provenance};
use crate::model::SubModel;
use crate::tvsim::{AppSpec, EffectKind};

pub use campaign::{render_table, run_campaign, save_report, KillChannel, MutantOutcome, MutationReport};
pub use score::{mutation_score, MutationScore, NoMutants, Score};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MutationOperator {
    /// Wrong Address Request
    #[serde(rename = "RAR")]
    Rar,
    /// Non-existing Element
    #[serde(rename = "NEE")]
    Nee,
    /// Non-existing Attribute
    #[serde(rename = "NEA")]
    Nea,
    /// Non-existing Feature
    #[serde(rename = "NEF")]
    Nef,
    /// Null Variable Replacement
    #[serde(rename = "NVR")]
    Nvr,
    /// Wrong Calculation
    #[serde(rename = "WRC")]
    Wrc,
    /// Badly Assigned Variable
    #[serde(rename = "BAV")]
    Bav,
    /// Incorrect Function Call
    #[serde(rename = "IFC")]
    Ifc,
    /// Non-existent Event
    #[serde(rename = "NXE")]
    Nxe,
}

impl MutationOperator {
    pub const ALL: [MutationOperator; 9] = [
        MutationOperator::Rar,
        MutationOperator::Nee,
        MutationOperator::Nea,
        MutationOperator::Nef,
        MutationOperator::Nvr,
        MutationOperator::Wrc,
        MutationOperator::Bav,
        MutationOperator::Ifc,
        MutationOperator::Nxe,
    ];

    pub fn acronym(self) -> &'static str {
        match self {
            MutationOperator::Rar => "RAR",
            MutationOperator::Nee => "NEE",
            MutationOperator::Nea => "NEA",
            MutationOperator::Nef => "NEF",
            MutationOperator::Nvr => "NVR",
            MutationOperator::Wrc => "WRC",
            MutationOperator::Bav => "BAV",
            MutationOperator::Ifc => "IFC",
            MutationOperator::Nxe => "NXE",
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            MutationOperator::Rar => "Wrong Address Request",
            MutationOperator::Nee => "Non-existing Element",
            MutationOperator::Nea => "Non-existing Attribute",
            MutationOperator::Nef => "Non-existing Feature",
            MutationOperator::Nvr => "Null Variable Replacement",
            MutationOperator::Wrc => "Wrong Calculation",
            MutationOperator::Bav => "Badly Assigned Variable",
            MutationOperator::Ifc => "Incorrect Function Call",
            MutationOperator::Nxe => "Non-existent Event",
        }
    }

    /// Operators that can mutate a step of the given kind.
    pub fn for_site(kind: EffectKind) -> &'static [MutationOperator] {
        use MutationOperator::*;
        match kind {
            EffectKind::FetchResource => &[Rar],
            EffectKind::LookupElement => &[Nee],
            EffectKind::SetAttribute => &[Nea],
            EffectKind::InvokeFeature => &[Nef],
            EffectKind::AssignVariable => &[Nvr, Bav],
            EffectKind::ComputeIndex => &[Wrc, Bav],
            EffectKind::CallFunction => &[Ifc],
            EffectKind::BindEvent => &[Nxe],
            EffectKind::OpenScreen | EffectKind::TerminalAction => &[],
        }
    }

    pub fn applies_to(self, kind: EffectKind) -> bool {
        Self::for_site(kind).contains(&self)
    }

    /// The corrupted argument, in the spirit of the source-level examples
    /// (`'trailer'` → `'trai'`, `index - MAX` → `index - MAX*6`, ...).
    pub fn corrupt(self, argument: &str) -> String {
        let drop_tail = |n: usize| -> String {
            let keep = argument.chars().count().saturating_sub(n);
            argument.chars().take(keep).collect()
        };
        match self {
            MutationOperator::Rar => format!("{}3/", argument.trim_end_matches('/').to_string() + "/"),
            MutationOperator::Nee => {
                let keep = argument.chars().count().div_ceil(2);
                argument.chars().take(keep.min(argument.chars().count().saturating_sub(1))).collect()
            }
            MutationOperator::Nea | MutationOperator::Ifc => drop_tail(1),
            MutationOperator::Nef => drop_tail(2),
            MutationOperator::Nvr => "null".to_string(),
            MutationOperator::Wrc => format!("{argument}*6"),
            MutationOperator::Bav => if argument == "MAX" { "index" } else { "MAX" }.to_string(),
            MutationOperator::Nxe => String::new(),
        }
    }
}

impl fmt::Display for MutationOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.acronym())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown mutation operator `{0}`")]
pub struct UnknownOperator(pub String);

impl FromStr for MutationOperator {
    type Err = UnknownOperator;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let upper = s.trim().to_ascii_uppercase();
        MutationOperator::ALL.into_iter().find(|op| op.acronym() == upper).ok_or_else(|| UnknownOperator(s.to_string()))
    }
}

/// Marker placed on a mutated effect step; executing the step logs a fault.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct MutationMark {
    pub mutant_id: String,
    pub operator: MutationOperator,
    pub mutated_argument: String,
    #[serde(default)]
    pub fatal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Site {
    pub screen: String,
    pub widget: String,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Mutant {
    pub id: String,
    pub operator: MutationOperator,
    pub site: Site,
    pub fatal: bool,
    pub original: String,
    pub mutated: String,
}

impl Mutant {
    pub fn description(&self) -> String {
        format!("{}: {:?} -> {:?}", self.operator.name(), self.original, self.mutated)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MutationError {
    #[error("mutant `{0}` targets a site that no longer exists")]
    Stale(String),
}

/// One mutant per compatible (operator, site) pair, in spec declaration
/// order (screen, widget, step, operator).
pub fn enumerate_mutants(
    spec: &AppSpec,
    operators: &BTreeSet<MutationOperator>,
    scope: Option<&SubModel>,
) -> Vec<Mutant> {
    let in_scope: Option<HashSet<(&str, &str)>> =
        scope.map(|sub| sub.graph().nodes().iter().map(|n| (n.screen.as_str(), n.widget.as_str())).collect());
    let mut out = Vec::new();
    for screen in &spec.screens {
        for widget in &screen.widgets {
            if in_scope.as_ref().is_some_and(|s| !s.contains(&(screen.id.as_str(), widget.id.as_str()))) {
                continue;
            }
            for (step, effect) in widget.effects.iter().enumerate() {
                for &op in MutationOperator::for_site(effect.kind) {
                    if !operators.contains(&op) {
                        continue;
                    }
                    out.push(Mutant {
                        id: format!("{op}:{}/{}/{step}", screen.id, widget.id),
                        operator: op,
                        site: Site { screen: screen.id.clone(), widget: widget.id.clone(), step },
                        fatal: effect.fatal,
                        original: effect.argument.clone(),
                        mutated: op.corrupt(&effect.argument),
                    });
                }
            }
        }
    }
    out
}

/// Copy of `spec` with the mutant's step marked; `spec` is untouched.
pub fn apply_mutant(spec: &AppSpec, m: &Mutant) -> Result<AppSpec, MutationError> {
    let mut out = spec.clone();
    let step = out
        .screens
        .iter_mut()
        .find(|s| s.id == m.site.screen)
        .and_then(|s| s.widgets.iter_mut().find(|w| w.id == m.site.widget))
        .and_then(|w| w.effects.get_mut(m.site.step))
        .filter(|e| m.operator.applies_to(e.kind))
        .ok_or_else(|| MutationError::Stale(m.id.clone()))?;
    step.mutation = Some(MutationMark {
        mutant_id: m.id.clone(),
        operator: m.operator,
        mutated_argument: m.mutated.clone(),
        fatal: m.fatal,
    });
    Ok(out)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct MutantsDocument<'a> {
    schema: &'a str,
    version: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    provenance: Option<&'a Provenance>,
    count: usize,
    mutants: &'a [Mutant],
}

/// The `mutants.json` listing.
pub fn save_mutants(mutants: &[Mutant], provenance: Option<&Provenance>) -> String {
    to_json(&MutantsDocument { schema: "tvcreeper.mutants", version: 1, provenance, count: mutants.len(), mutants })
}
