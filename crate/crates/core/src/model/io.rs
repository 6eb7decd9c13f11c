use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{Edge, MegaModel, ModelError, Node, SubModel};
use crate::artifact::{to_json, Provenance};
use crate::NodeId;

pub const MODEL_SCHEMA: &str = "tvcreeper.model";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct ModelDocument {
    schema: String,
    version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    provenance: Option<Provenance>,
    start: NodeId,
    end_nodes: BTreeSet<NodeId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    destinations: Option<BTreeSet<NodeId>>,
    nodes: Vec<Node>,
    edges: Vec<Edge>,
}

/// Model, declared destinations (sub-models only) and provenance.
type Parsed = (MegaModel, Option<BTreeSet<NodeId>>, Option<Provenance>);

impl ModelDocument {
    fn new(model: &MegaModel, destinations: Option<&BTreeSet<NodeId>>, provenance: Option<&Provenance>) -> Self {
        ModelDocument {
            schema: MODEL_SCHEMA.to_string(),
            version: MODEL_VERSION,
            provenance: provenance.cloned(),
            start: model.start.clone(),
            end_nodes: model.end_nodes.clone(),
            destinations: destinations.cloned(),
            nodes: model.nodes.clone(),
            edges: model.edges.clone(),
        }
    }

    fn parse(text: &str) -> Result<Self, ModelError> {
        let doc: ModelDocument = serde_json::from_str(text)?;
        if doc.schema != MODEL_SCHEMA || doc.version != MODEL_VERSION {
            return Err(ModelError::Version { schema: doc.schema, version: doc.version });
        }
        Ok(doc)
    }

    fn into_model(self) -> Result<Parsed, ModelError> {
        let model = MegaModel::new(self.nodes, self.edges, self.start, self.end_nodes)?;
        Ok((model, self.destinations, self.provenance))
    }
}

pub fn save_model(model: &MegaModel) -> String {
    save_model_document(model, None)
}

pub fn save_model_document(model: &MegaModel, provenance: Option<&Provenance>) -> String {
    to_json(&ModelDocument::new(model, None, provenance))
}

pub fn load_model(text: &str) -> Result<MegaModel, ModelError> {
    load_model_document(text).map(|(m, _)| m)
}

/// Loads any model document, including a sub-model (its destinations are
/// then just its end nodes).
pub fn load_model_document(text: &str) -> Result<(MegaModel, Option<Provenance>), ModelError> {
    let (model, _, prov) = ModelDocument::parse(text)?.into_model()?;
    Ok((model, prov))
}

pub fn save_sub_model(sub: &SubModel) -> String {
    save_sub_model_document(sub, None)
}

pub fn save_sub_model_document(sub: &SubModel, provenance: Option<&Provenance>) -> String {
    to_json(&ModelDocument::new(sub.graph(), Some(sub.destinations()), provenance))
}

pub fn load_sub_model(text: &str) -> Result<SubModel, ModelError> {
    load_sub_model_document(text).map(|(m, _)| m)
}

pub fn load_sub_model_document(text: &str) -> Result<(SubModel, Option<Provenance>), ModelError> {
    let (model, destinations, prov) = ModelDocument::parse(text)?.into_model()?;
    let destinations = destinations.ok_or(ModelError::NotSubModel)?;
    if &destinations != model.end_nodes() {
        return Err(ModelError::DestinationMismatch);
    }
    Ok((SubModel::new(model)?, prov))
}
