//! The VFG document: a self-contained JSON record of an animated plan that a
//! viewer can load without the PDDL inputs or a planner.
//!
//! Serialization is canonical: object keys sorted, no whitespace, integers
//! unquoted, colors as `#RRGGBB`. The same document always yields the same
//! bytes.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::Value as Json;
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::color::Rgb;
use crate::plan::{SubgoalTable, Trajectory};
use crate::profile::{Prefab, Shape};
use crate::scene::{LineElement, ObjectOp, ObjectProps, Scene, SceneSequence, Transition};

pub const VFG_VERSION: &str = "planim/1";
pub const GENERATOR: &str = concat!("planim ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct VfgDocument {
    pub version: String,
    pub metadata: Metadata,
    /// Sprite name -> `builtin:<shape>` or a base64 image payload.
    pub sprites: BTreeMap<String, String>,
    pub goals: Vec<String>,
    pub goal_scene: SceneRecord,
    pub steps: Vec<StepRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct Metadata {
    pub domain_name: String,
    pub problem_name: String,
    pub generator: String,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct StepRecord {
    pub index: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub action: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preconditions: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub add_effects: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub del_effects: Option<Vec<String>>,
    pub scene: SceneRecord,
    /// Animation from the previous step's scene into this one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub transition: Option<TransitionRecord>,
    pub at_goal: Vec<String>,
    pub satisfied_subgoals: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct SceneRecord {
    pub objects: BTreeMap<String, ObjectRecord>,
    pub lines: Vec<LineRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ObjectRecord {
    pub x: Option<i64>,
    pub y: Option<i64>,
    pub width: i64,
    pub height: i64,
    pub color: String,
    pub depth: i64,
    pub showname: bool,
    pub label: String,
    /// Key into the document's sprites.
    pub prefab_image: String,
    pub visible: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct LineRecord {
    pub from: String,
    pub to: String,
    pub color: String,
    pub x1: i64,
    pub y1: i64,
    pub x2: i64,
    pub y2: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct TransitionRecord {
    pub duration: f64,
    pub ops: Vec<OpRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "camelCase", deny_unknown_fields)]
pub enum OpRecord {
    Translate {
        object: String,
        from: [i64; 2],
        to: [i64; 2],
    },
    Scale {
        object: String,
        from: [i64; 2],
        to: [i64; 2],
    },
    Appear {
        object: String,
        at: [i64; 2],
    },
    Disappear {
        object: String,
        at: [i64; 2],
    },
}

#[derive(Debug, Error)]
pub enum VfgError {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported VFG version {found:?} (expected {VFG_VERSION})")]
    Version { found: Option<String> },
    #[error("schema violation at {path}: {message}")]
    Schema { path: String, message: String },
    #[error("step index gap: missing index {missing}")]
    IndexGap { missing: usize },
    #[error("step at position {position} has index {index}")]
    IndexOrder { position: usize, index: usize },
    #[error("document has no steps")]
    NoSteps,
}

impl VfgError {
    fn schema(path: impl Into<String>, message: impl Into<String>) -> Self {
        VfgError::Schema {
            path: path.into(),
            message: message.into(),
        }
    }
}

fn sprite_name(prefab: &Prefab) -> String {
    match prefab {
        Prefab::Builtin(shape) => shape.name().to_string(),
        Prefab::Base64(payload) => {
            let digest = Sha256::digest(payload.as_bytes());
            let hex: String = digest[..6].iter().map(|b| format!("{b:02x}")).collect();
            format!("image-{hex}")
        }
    }
}

fn sprite_payload(prefab: &Prefab) -> String {
    match prefab {
        Prefab::Builtin(shape) => format!("builtin:{}", shape.name()),
        Prefab::Base64(payload) => payload.clone(),
    }
}

fn prefab_from_payload(payload: &str) -> Option<Prefab> {
    match payload.strip_prefix("builtin:") {
        Some("rectangle") => Some(Prefab::Builtin(Shape::Rectangle)),
        Some("ellipse") => Some(Prefab::Builtin(Shape::Ellipse)),
        Some(_) => None,
        None => Some(Prefab::Base64(payload.to_string())),
    }
}

impl SceneRecord {
    pub fn from_scene(scene: &Scene) -> Self {
        let objects = scene
            .objects
            .iter()
            .map(|(name, p)| {
                (
                    name.clone(),
                    ObjectRecord {
                        x: p.x,
                        y: p.y,
                        width: p.width,
                        height: p.height,
                        color: p.color.to_string(),
                        depth: p.depth,
                        showname: p.showname,
                        label: p.label.clone(),
                        prefab_image: sprite_name(&p.prefab),
                        visible: p.is_visible(),
                    },
                )
            })
            .collect();
        let lines = scene
            .lines
            .iter()
            .map(|l| LineRecord {
                from: l.from.clone(),
                to: l.to.clone(),
                color: l.color.to_string(),
                x1: l.x1,
                y1: l.y1,
                x2: l.x2,
                y2: l.y2,
            })
            .collect();
        SceneRecord { objects, lines }
    }

    /// Rebuilds the scene; `at_goal` is not part of the record.
    fn to_scene(&self, sprites: &BTreeMap<String, String>, at_goal: BTreeSet<String>) -> Scene {
        let color = |c: &str| Rgb::from_hex(c).unwrap_or(Rgb::GRAY);
        let objects = self
            .objects
            .iter()
            .map(|(name, r)| {
                let prefab = sprites
                    .get(&r.prefab_image)
                    .and_then(|p| prefab_from_payload(p))
                    .unwrap_or_default();
                (
                    name.clone(),
                    ObjectProps {
                        x: r.x,
                        y: r.y,
                        width: r.width,
                        height: r.height,
                        color: color(&r.color),
                        depth: r.depth,
                        showname: r.showname,
                        label: r.label.clone(),
                        prefab,
                    },
                )
            })
            .collect::<BTreeMap<_, _>>();
        let visible = objects
            .iter()
            .filter(|(_, p)| p.is_visible())
            .map(|(n, _)| n.clone())
            .collect();
        let lines = self
            .lines
            .iter()
            .map(|l| LineElement {
                from: l.from.clone(),
                to: l.to.clone(),
                color: color(&l.color),
                x1: l.x1,
                y1: l.y1,
                x2: l.x2,
                y2: l.y2,
            })
            .collect();
        Scene {
            objects,
            lines,
            visible,
            at_goal,
        }
    }
}

impl TransitionRecord {
    pub fn from_transition(t: &Transition) -> Self {
        let ops = t
            .ops
            .iter()
            .map(|op| match op {
                ObjectOp::Translate { object, from, to } => OpRecord::Translate {
                    object: object.clone(),
                    from: [from.0, from.1],
                    to: [to.0, to.1],
                },
                ObjectOp::Scale { object, from, to } => OpRecord::Scale {
                    object: object.clone(),
                    from: [from.0, from.1],
                    to: [to.0, to.1],
                },
                ObjectOp::Appear { object, at } => OpRecord::Appear {
                    object: object.clone(),
                    at: [at.0, at.1],
                },
                ObjectOp::Disappear { object, at } => OpRecord::Disappear {
                    object: object.clone(),
                    at: [at.0, at.1],
                },
            })
            .collect();
        TransitionRecord {
            duration: t.duration_seconds,
            ops,
        }
    }

    fn to_transition(&self) -> Transition {
        let ops = self
            .ops
            .iter()
            .map(|op| match op {
                OpRecord::Translate { object, from, to } => ObjectOp::Translate {
                    object: object.clone(),
                    from: (from[0], from[1]),
                    to: (to[0], to[1]),
                },
                OpRecord::Scale { object, from, to } => ObjectOp::Scale {
                    object: object.clone(),
                    from: (from[0], from[1]),
                    to: (to[0], to[1]),
                },
                OpRecord::Appear { object, at } => ObjectOp::Appear {
                    object: object.clone(),
                    at: (at[0], at[1]),
                },
                OpRecord::Disappear { object, at } => ObjectOp::Disappear {
                    object: object.clone(),
                    at: (at[0], at[1]),
                },
            })
            .collect();
        Transition {
            ops,
            duration_seconds: self.duration,
        }
    }
}

fn strings<T: ToString>(items: impl IntoIterator<Item = T>) -> Vec<String> {
    items.into_iter().map(|i| i.to_string()).collect()
}

/// Assembles the document for a synthesized plan.
pub fn build_document(
    sequence: &SceneSequence,
    trajectory: &Trajectory,
    report: &SubgoalTable,
    metadata: Metadata,
) -> VfgDocument {
    let mut sprites = BTreeMap::new();
    for scene in sequence.scenes.iter().chain(std::iter::once(&sequence.goal_scene)) {
        for p in scene.objects.values() {
            sprites.insert(sprite_name(&p.prefab), sprite_payload(&p.prefab));
        }
    }
    let steps = sequence
        .scenes
        .iter()
        .enumerate()
        .map(|(i, scene)| {
            let action = i.checked_sub(1).map(|a| &trajectory.actions[a]);
            StepRecord {
                index: i,
                action: action.map(|a| a.to_string()),
                preconditions: action.map(|a| strings(&a.pre)),
                add_effects: action.map(|a| strings(&a.add)),
                del_effects: action.map(|a| strings(&a.del)),
                scene: SceneRecord::from_scene(scene),
                transition: i
                    .checked_sub(1)
                    .map(|t| TransitionRecord::from_transition(&sequence.transitions[t])),
                at_goal: strings(&scene.at_goal),
                satisfied_subgoals: report.satisfied.get(i).map(strings).unwrap_or_default(),
            }
        })
        .collect();
    VfgDocument {
        version: VFG_VERSION.to_string(),
        metadata,
        sprites,
        goals: strings(report.rows.iter().map(|r| &r.atom)),
        goal_scene: SceneRecord::from_scene(&sequence.goal_scene),
        steps,
    }
}

impl VfgDocument {
    /// Rebuilds the scene sequence a renderer needs.
    pub fn to_sequence(&self) -> SceneSequence {
        let set = |v: &[String]| v.iter().cloned().collect::<BTreeSet<_>>();
        let scenes = self
            .steps
            .iter()
            .map(|s| s.scene.to_scene(&self.sprites, set(&s.at_goal)))
            .collect();
        let transitions = self
            .steps
            .iter()
            .skip(1)
            .map(|s| {
                s.transition.as_ref().map_or(
                    Transition {
                        ops: Vec::new(),
                        duration_seconds: crate::scene::DEFAULT_DURATION,
                    },
                    TransitionRecord::to_transition,
                )
            })
            .collect();
        // every goal atom holds in the goal scene
        let goal_at = self
            .goals
            .iter()
            .filter_map(|g| crate::pddl::parse_step(g))
            .flat_map(|atom| atom.args)
            .collect();
        SceneSequence {
            scenes,
            transitions,
            goal_scene: self.goal_scene.to_scene(&self.sprites, goal_at),
        }
    }
}

fn write_canonical(value: &Json, out: &mut String) {
    match value {
        Json::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Json::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
        Json::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        scalar => out.push_str(&scalar.to_string()),
    }
}

/// Canonical JSON bytes for `document`.
pub fn serialize_vfg(document: &VfgDocument) -> Vec<u8> {
    let value = serde_json::to_value(document).expect("VFG documents always convert to JSON");
    let mut out = String::new();
    write_canonical(&value, &mut out);
    out.into_bytes()
}

/// Parses and validates a VFG document.
pub fn deserialize_vfg(bytes: &[u8]) -> Result<VfgDocument, VfgError> {
    let value: Json = serde_json::from_slice(bytes)?;
    let version = value.get("version").and_then(Json::as_str);
    if version != Some(VFG_VERSION) {
        return Err(VfgError::Version {
            found: version.map(str::to_string),
        });
    }
    let doc: VfgDocument = serde_path_to_error::deserialize(value).map_err(|e| VfgError::Schema {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    if doc.steps.is_empty() {
        return Err(VfgError::NoSteps);
    }
    for (position, step) in doc.steps.iter().enumerate() {
        if step.index > position {
            return Err(VfgError::IndexGap { missing: position });
        }
        if step.index < position {
            return Err(VfgError::IndexOrder {
                position,
                index: step.index,
            });
        }
        let path = |field: &str| format!("steps[{position}].{field}");
        match (position, &step.action) {
            (0, Some(_)) => return Err(VfgError::schema(path("action"), "the initial step has no action")),
            (p, None) if p > 0 => return Err(VfgError::schema(path("action"), "missing action")),
            _ => {}
        }
        check_scene(&step.scene, &doc.sprites, &path("scene"))?;
    }
    for (name, payload) in &doc.sprites {
        if prefab_from_payload(payload).is_none() {
            return Err(VfgError::schema(
                format!("sprites.{name}"),
                format!("unknown built-in sprite {payload}"),
            ));
        }
    }
    check_scene(&doc.goal_scene, &doc.sprites, "goalScene")?;
    Ok(doc)
}

fn check_scene(scene: &SceneRecord, sprites: &BTreeMap<String, String>, path: &str) -> Result<(), VfgError> {
    for (name, o) in &scene.objects {
        let at = |field: &str| format!("{path}.objects.{name}.{field}");
        if Rgb::from_hex(&o.color).is_none() {
            return Err(VfgError::schema(
                at("color"),
                format!("expected #RRGGBB, found {:?}", o.color),
            ));
        }
        if !sprites.contains_key(&o.prefab_image) {
            return Err(VfgError::schema(
                at("prefabImage"),
                format!("unknown sprite {}", o.prefab_image),
            ));
        }
        if o.visible != (o.x.is_some() && o.y.is_some()) {
            return Err(VfgError::schema(
                at("visible"),
                "must be true exactly when x and y are set",
            ));
        }
    }
    for (i, l) in scene.lines.iter().enumerate() {
        if Rgb::from_hex(&l.color).is_none() {
            return Err(VfgError::schema(
                format!("{path}.lines[{i}].color"),
                format!("expected #RRGGBB, found {:?}", l.color),
            ));
        }
    }
    Ok(())
}
