//! JSON formats for instances and assignments.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{
    Assignment, BipartiteInstance, Constraint, Instance, Layer, LabelCoverError, LayeredConstraint, LayeredInstance,
    ProjectionMap,
};

#[derive(Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
enum InstanceFile {
    Bipartite {
        #[serde(rename = "L")]
        left_alphabet: u32,
        #[serde(rename = "R")]
        right_alphabet: u32,
        #[serde(rename = "U")]
        left_count: usize,
        #[serde(rename = "V")]
        right_count: usize,
        edges: Vec<BipartiteEdge>,
    },
    Layered {
        layers: Vec<LayerEntry>,
        edges: Vec<LayeredEdge>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct BipartiteEdge {
    u: usize,
    v: usize,
    pi: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerEntry {
    size: usize,
    #[serde(rename = "R")]
    alphabet: u32,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayeredEdge {
    i: usize,
    j: usize,
    u: usize,
    v: usize,
    pi: Vec<u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AssignmentFile {
    labels: BTreeMap<usize, u32>,
}

pub fn write_instance(instance: &Instance) -> String {
    let file = match instance {
        Instance::Bipartite(b) => InstanceFile::Bipartite {
            left_alphabet: b.left_alphabet(),
            right_alphabet: b.right_alphabet(),
            left_count: b.left_count(),
            right_count: b.right_count(),
            edges: b
                .edges()
                .iter()
                .map(|e| BipartiteEdge { u: e.u, v: e.v, pi: e.map.table().to_vec() })
                .collect(),
        },
        Instance::Layered(l) => InstanceFile::Layered {
            layers: l.layers().iter().map(|x| LayerEntry { size: x.size, alphabet: x.alphabet }).collect(),
            edges: l
                .edges()
                .iter()
                .map(|e| LayeredEdge { i: e.i, j: e.j, u: e.u, v: e.v, pi: e.map.table().to_vec() })
                .collect(),
        },
    };
    serde_json::to_string(&file).expect("instance serialization cannot fail")
}

pub fn read_instance(text: &str) -> Result<Instance, LabelCoverError> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| LabelCoverError::Parse(e.to_string()))?;
    match file {
        InstanceFile::Bipartite { left_alphabet, right_alphabet, left_count, right_count, edges } => {
            let edges = edges
                .into_iter()
                .map(|e| Ok(Constraint { u: e.u, v: e.v, map: ProjectionMap::new(e.pi, right_alphabet)? }))
                .collect::<Result<Vec<_>, LabelCoverError>>()?;
            BipartiteInstance::new(left_count, right_count, left_alphabet, right_alphabet, edges).map(Instance::Bipartite)
        }
        InstanceFile::Layered { layers, edges } => {
            let layers: Vec<Layer> = layers.into_iter().map(|l| Layer { size: l.size, alphabet: l.alphabet }).collect();
            let edges = edges
                .into_iter()
                .map(|e| {
                    let range = layers
                        .get(e.j)
                        .ok_or_else(|| LabelCoverError::InvalidInstance(format!("layer {} does not exist", e.j)))?
                        .alphabet;
                    Ok(LayeredConstraint { i: e.i, j: e.j, u: e.u, v: e.v, map: ProjectionMap::new(e.pi, range)? })
                })
                .collect::<Result<Vec<_>, LabelCoverError>>()?;
            LayeredInstance::new(layers, edges).map(Instance::Layered)
        }
    }
}

/// Writes the assigned labels as `{"labels":{"<var>":label}}`; unassigned
/// variables are omitted.
pub fn write_assignment(assignment: &Assignment) -> String {
    let labels = assignment
        .labels()
        .iter()
        .enumerate()
        .filter_map(|(v, l)| l.map(|l| (v, l)))
        .collect();
    serde_json::to_string(&AssignmentFile { labels }).expect("assignment serialization cannot fail")
}

/// Reads an assignment; its length is one past the largest listed variable.
pub fn read_assignment(text: &str) -> Result<Assignment, LabelCoverError> {
    let file: AssignmentFile = serde_json::from_str(text).map_err(|e| LabelCoverError::Parse(e.to_string()))?;
    let mut assignment = Assignment::unassigned(file.labels.keys().next_back().map_or(0, |&v| v + 1));
    for (var, label) in file.labels {
        if label == 0 {
            return Err(LabelCoverError::InvalidAssignment(format!("label 0 for variable {var}; labels are 1-based")));
        }
        assignment.set(var, label);
    }
    Ok(assignment)
}
