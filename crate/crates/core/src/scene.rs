//! Scene synthesis: resolve every object's visual properties in a state by
//! running the profile's rules to a fixed point, then diff consecutive scenes
//! into transitions.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use crate::color::Rgb;
use crate::layout::{self, LayoutError};
use crate::pddl::{Atom, DomainAst, ProblemAst};
use crate::plan::{at_goal_objects, GroundState, Trajectory};
use crate::profile::{
    AnimationProfile, Effect, Expr, ObjectRef, PredicateRule, Prefab, Property, PropertyMap, SpecValue, Value,
};

pub const DEFAULT_SIZE: i64 = 40;
pub const DEFAULT_DURATION: f64 = 1.0;

/// Fully resolved visual properties of one object.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectProps {
    pub x: Option<i64>,
    pub y: Option<i64>,
    pub width: i64,
    pub height: i64,
    pub color: Rgb,
    pub depth: i64,
    pub showname: bool,
    pub label: String,
    pub prefab: Prefab,
}

impl ObjectProps {
    pub fn default_for(name: &str) -> Self {
        ObjectProps {
            x: None,
            y: None,
            width: DEFAULT_SIZE,
            height: DEFAULT_SIZE,
            color: Rgb::GRAY,
            depth: 0,
            showname: true,
            label: name.to_string(),
            prefab: Prefab::default(),
        }
    }

    pub fn get(&self, property: Property) -> Value {
        let opt = |v: Option<i64>| v.map_or(Value::Null, Value::Int);
        match property {
            Property::X => opt(self.x),
            Property::Y => opt(self.y),
            Property::Width => Value::Int(self.width),
            Property::Height => Value::Int(self.height),
            Property::Color => Value::Color(self.color),
            Property::Depth => Value::Int(self.depth),
            Property::ShowName => Value::Bool(self.showname),
            Property::Label => Value::Text(self.label.clone()),
            Property::PrefabImage => Value::Image(self.prefab.clone()),
        }
    }

    /// Stores `value`, or returns `false` when its kind does not fit the property.
    pub fn set(&mut self, property: Property, value: &Value) -> bool {
        match (property, value) {
            (Property::X, Value::Int(i)) => self.x = Some(*i),
            (Property::X, Value::Null) => self.x = None,
            (Property::Y, Value::Int(i)) => self.y = Some(*i),
            (Property::Y, Value::Null) => self.y = None,
            (Property::Width, Value::Int(i)) => self.width = *i,
            (Property::Height, Value::Int(i)) => self.height = *i,
            (Property::Depth, Value::Int(i)) => self.depth = *i,
            (Property::Color, Value::Color(c)) => self.color = *c,
            (Property::ShowName, Value::Bool(b)) => self.showname = *b,
            (Property::Label, Value::Text(t)) => self.label = t.clone(),
            (Property::Label, Value::Int(i)) => self.label = i.to_string(),
            (Property::PrefabImage, Value::Image(p)) => self.prefab = p.clone(),
            _ => return false,
        }
        true
    }

    pub fn position(&self) -> Option<(i64, i64)> {
        self.x.zip(self.y)
    }

    pub fn is_visible(&self) -> bool {
        self.position().is_some()
    }
}

pub type ObjectMap = BTreeMap<String, ObjectProps>;

/// A segment between two object centers, produced by `draw_line`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LineElement {
    pub from: String,
    pub to: String,
    pub color: Rgb,
    pub x1: i64,
    pub y1: i64,
    pub x2: i64,
    pub y2: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Scene {
    pub objects: ObjectMap,
    pub lines: Vec<LineElement>,
    pub visible: BTreeSet<String>,
    pub at_goal: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SceneError {
    #[error("no fixed point after {iterations} iterations; still changing: {}", objects.join(", "))]
    Cyclic { iterations: usize, objects: Vec<String> },
    #[error("conflicting writes to {object}.{property}: {first} vs {second}")]
    Conflict {
        object: String,
        property: Property,
        first: String,
        second: String,
    },
    #[error("{context}: unknown object {object}")]
    UnknownObject { object: String, context: String },
    #[error("{context}: value {value} does not fit property {property}")]
    Type {
        property: Property,
        value: String,
        context: String,
    },
    #[error("{context}: {source}")]
    Layout { source: LayoutError, context: String },
}

/// A scene error together with the state it happened in (`None` for the goal scene).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}: {source}", match state { Some(i) => format!("state {i}"), None => "goal scene".to_string() })]
pub struct SequenceError {
    pub state: Option<usize>,
    pub source: SceneError,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FixedPointStats {
    /// Passes that changed at least one property.
    pub iterations: usize,
    /// All passes, including the final confirming one.
    pub passes: usize,
}

/// Everything scene synthesis needs besides the state: the domain (for type
/// inheritance of specs), the problem, the profile and the color seed.
#[derive(Debug, Clone)]
pub struct SceneBuilder<'a> {
    profile: &'a AnimationProfile,
    problem: &'a ProblemAst,
    base: ObjectMap,
}

fn apply_spec(props: &mut ObjectProps, name: &str, spec: &PropertyMap, seed: u64) {
    for (p, v) in spec {
        let value = match v {
            SpecValue::Value(v) => v.clone(),
            SpecValue::RandomColor => Value::Color(Rgb::random_for(seed, name)),
        };
        props.set(*p, &value);
    }
}

fn bind<'s>(r: &'s ObjectRef, rule: &PredicateRule, atom: &'s Atom) -> Option<&'s str> {
    match r {
        ObjectRef::Var(v) => rule.param_index(v).and_then(|i| atom.args.get(i)).map(String::as_str),
        ObjectRef::Name(n) => Some(n),
    }
}

struct Pass {
    writes: BTreeMap<(String, Property), (Value, String)>,
    lines: BTreeSet<LineElement>,
}

impl Pass {
    fn write(&mut self, object: &str, property: Property, value: Value, by: String) -> Result<(), SceneError> {
        match self.writes.get(&(object.to_string(), property)) {
            Some((existing, first)) if *existing != value => Err(SceneError::Conflict {
                object: object.to_string(),
                property,
                first: first.clone(),
                second: by,
            }),
            Some(_) => Ok(()),
            None => {
                self.writes.insert((object.to_string(), property), (value, by));
                Ok(())
            }
        }
    }
}

impl<'a> SceneBuilder<'a> {
    pub fn new(domain: &DomainAst, problem: &'a ProblemAst, profile: &'a AnimationProfile, seed: u64) -> Self {
        let mut base = ObjectMap::new();
        for (name, ty) in &problem.objects {
            let mut props = ObjectProps::default_for(name);
            for t in domain.type_chain(ty).iter().rev() {
                if let Some(spec) = profile.spec(t) {
                    apply_spec(&mut props, name, &spec.properties, seed);
                }
            }
            if let Some(spec) = profile.spec(name) {
                apply_spec(&mut props, name, &spec.properties, seed);
            }
            base.insert(name.clone(), props);
        }
        for custom in &profile.custom_objects {
            let mut props = ObjectProps::default_for(&custom.name);
            apply_spec(&mut props, &custom.name, &custom.properties, seed);
            if let Some(spec) = profile.spec(&custom.name) {
                apply_spec(&mut props, &custom.name, &spec.properties, seed);
            }
            base.insert(custom.name.clone(), props);
        }
        SceneBuilder { profile, problem, base }
    }

    /// Properties before any rule fires.
    pub fn base(&self) -> &ObjectMap {
        &self.base
    }

    pub fn iteration_cap(&self) -> usize {
        self.base.len() + 10
    }

    fn eval(
        &self,
        expr: &Expr,
        rule: &PredicateRule,
        atom: &Atom,
        current: &ObjectMap,
        context: &str,
    ) -> Result<Option<Value>, SceneError> {
        match expr {
            Expr::Literal(v) => Ok(Some(v.clone())),
            Expr::Prop(p) => {
                let name = bind(&p.object, rule, atom).ok_or_else(|| SceneError::UnknownObject {
                    object: p.object.to_string(),
                    context: context.to_string(),
                })?;
                let props = current.get(name).ok_or_else(|| SceneError::UnknownObject {
                    object: name.to_string(),
                    context: context.to_string(),
                })?;
                Ok(match props.get(p.property) {
                    Value::Null => None,
                    v => Some(v),
                })
            }
            Expr::Add(ops) => {
                let mut sum = 0i64;
                for op in ops {
                    match self.eval(op, rule, atom, current, context)? {
                        None => return Ok(None),
                        Some(Value::Int(i)) => sum += i,
                        Some(other) => {
                            return Err(SceneError::Type {
                                property: Property::X,
                                value: other.to_string(),
                                context: format!("{context}: add operand"),
                            })
                        }
                    }
                }
                Ok(Some(Value::Int(sum)))
            }
        }
    }

    fn pass(
        &self,
        rules: &[(&PredicateRule, &Atom)],
        state: &GroundState,
        current: &ObjectMap,
    ) -> Result<Pass, SceneError> {
        let mut pass = Pass {
            writes: BTreeMap::new(),
            lines: BTreeSet::new(),
        };
        for (rule, atom) in rules {
            for (idx, effect) in rule.effects.iter().enumerate() {
                if let Effect::Equal { target, expr } = effect {
                    let by = format!("rule {} effect {} on {atom}", rule.predicate, idx + 1);
                    let object = bind(&target.object, rule, atom).ok_or_else(|| SceneError::UnknownObject {
                        object: target.object.to_string(),
                        context: by.clone(),
                    })?;
                    if !current.contains_key(object) {
                        return Err(SceneError::UnknownObject {
                            object: object.to_string(),
                            context: by,
                        });
                    }
                    if let Some(v) = self.eval(expr, rule, atom, current, &by)? {
                        pass.write(object, target.property, v, by)?;
                    }
                }
            }
        }
        for rule in &self.profile.rules {
            for (idx, effect) in rule.effects.iter().enumerate() {
                let Effect::Assign { target, call } = effect else {
                    continue;
                };
                let inv = layout::resolve_objects(&target.object, call, rule, state);
                if inv.is_empty() {
                    continue;
                }
                let by = format!("rule {} effect {} ({})", rule.predicate, idx + 1, call.function);
                let (result, _deferred) =
                    layout::evaluate(&inv, call, current, &self.base).map_err(|source| match source {
                        LayoutError::UnknownObject(object) => SceneError::UnknownObject {
                            object,
                            context: by.clone(),
                        },
                        source => SceneError::Layout {
                            source,
                            context: by.clone(),
                        },
                    })?;
                for w in result.writes.into_iter().filter(|w| w.property == target.property) {
                    pass.write(&w.object, w.property, w.value, by.clone())?;
                }
                pass.lines.extend(result.lines);
            }
        }
        Ok(pass)
    }

    /// Resolves the scene for `state`; `goal` decides which objects are at goal.
    pub fn synthesize(&self, state: &GroundState, goal: &[Atom]) -> Result<Scene, SceneError> {
        self.synthesize_with_stats(state, goal).map(|(s, _)| s)
    }

    pub fn synthesize_with_stats(
        &self,
        state: &GroundState,
        goal: &[Atom],
    ) -> Result<(Scene, FixedPointStats), SceneError> {
        // BTreeSet iteration already yields (predicate, args) order
        let rules: Vec<(&PredicateRule, &Atom)> = state
            .atoms
            .iter()
            .filter_map(|a| {
                self.profile
                    .rule(&a.predicate)
                    .filter(|r| r.params.len() == a.args.len())
                    .map(|r| (r, a))
            })
            .collect();
        let mut current = self.base.clone();
        let mut lines = BTreeSet::new();
        let mut stats = FixedPointStats::default();
        let cap = self.iteration_cap();
        loop {
            let pass = self.pass(&rules, state, &current)?;
            stats.passes += 1;
            let mut next = self.base.clone();
            for ((object, property), (value, by)) in &pass.writes {
                let props = next.get_mut(object).ok_or_else(|| SceneError::UnknownObject {
                    object: object.clone(),
                    context: by.clone(),
                })?;
                if !props.set(*property, value) {
                    return Err(SceneError::Type {
                        property: *property,
                        value: value.to_string(),
                        context: by.clone(),
                    });
                }
            }
            if next == current && pass.lines == lines {
                break;
            }
            stats.iterations += 1;
            if stats.passes >= cap {
                let mut objects: Vec<String> = next
                    .iter()
                    .filter(|(n, p)| current.get(*n) != Some(*p))
                    .map(|(n, _)| n.clone())
                    .collect();
                for l in pass.lines.symmetric_difference(&lines) {
                    objects.push(l.from.clone());
                    objects.push(l.to.clone());
                }
                objects.sort();
                objects.dedup();
                return Err(SceneError::Cyclic {
                    iterations: stats.passes,
                    objects,
                });
            }
            current = next;
            lines = pass.lines;
        }
        let visible = current
            .iter()
            .filter(|(_, p)| p.is_visible())
            .map(|(n, _)| n.clone())
            .collect();
        let at_goal = at_goal_objects(state, goal);
        Ok((
            Scene {
                objects: current,
                lines: lines.into_iter().collect(),
                visible,
                at_goal,
            },
            stats,
        ))
    }

    /// Scene built from the goal atoms as if they were a state.
    pub fn goal_scene(&self) -> Result<Scene, SceneError> {
        let state: GroundState = self.problem.goal.iter().cloned().collect();
        self.synthesize(&state, &self.problem.goal)
    }

    pub fn synthesize_sequence(&self, trajectory: &Trajectory) -> Result<SceneSequence, SequenceError> {
        let goal = &self.problem.goal;
        let scenes = trajectory
            .states
            .iter()
            .enumerate()
            .map(|(i, s)| {
                self.synthesize(s, goal)
                    .map_err(|source| SequenceError { state: Some(i), source })
            })
            .collect::<Result<Vec<_>, _>>()?;
        let goal_scene = self
            .goal_scene()
            .map_err(|source| SequenceError { state: None, source })?;
        let transitions = scenes.windows(2).map(|w| diff_scenes(&w[0], &w[1])).collect();
        Ok(SceneSequence {
            scenes,
            transitions,
            goal_scene,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ObjectOp {
    Translate {
        object: String,
        from: (i64, i64),
        to: (i64, i64),
    },
    Scale {
        object: String,
        from: (i64, i64),
        to: (i64, i64),
    },
    /// Becomes visible at `at`.
    Appear { object: String, at: (i64, i64) },
    /// Was visible at `at`, now hidden.
    Disappear { object: String, at: (i64, i64) },
}

impl ObjectOp {
    pub fn object(&self) -> &str {
        match self {
            ObjectOp::Translate { object, .. }
            | ObjectOp::Scale { object, .. }
            | ObjectOp::Appear { object, .. }
            | ObjectOp::Disappear { object, .. } => object,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            ObjectOp::Translate { .. } => "translate",
            ObjectOp::Scale { .. } => "scale",
            ObjectOp::Appear { .. } => "appear",
            ObjectOp::Disappear { .. } => "disappear",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Transition {
    pub ops: Vec<ObjectOp>,
    pub duration_seconds: f64,
}

impl Transition {
    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SceneSequence {
    pub scenes: Vec<Scene>,
    pub transitions: Vec<Transition>,
    pub goal_scene: Scene,
}

/// Operations turning `before` into `after`, ordered by object name.
pub fn diff_scenes(before: &Scene, after: &Scene) -> Transition {
    let mut ops = Vec::new();
    for (name, b) in &before.objects {
        let Some(a) = after.objects.get(name) else { continue };
        match (b.position(), a.position()) {
            (Some(from), Some(to)) if from != to => ops.push(ObjectOp::Translate {
                object: name.clone(),
                from,
                to,
            }),
            (None, Some(at)) => ops.push(ObjectOp::Appear {
                object: name.clone(),
                at,
            }),
            (Some(at), None) => ops.push(ObjectOp::Disappear {
                object: name.clone(),
                at,
            }),
            _ => {}
        }
        if (b.width, b.height) != (a.width, a.height) {
            ops.push(ObjectOp::Scale {
                object: name.clone(),
                from: (b.width, b.height),
                to: (a.width, a.height),
            });
        }
    }
    Transition {
        ops,
        duration_seconds: DEFAULT_DURATION,
    }
}

/// Position (when visible) and size of every object.
pub type Geometry = BTreeMap<String, (Option<(i64, i64)>, (i64, i64))>;

pub fn geometry(scene: &Scene) -> Geometry {
    scene
        .objects
        .iter()
        .map(|(n, p)| (n.clone(), (p.position(), (p.width, p.height))))
        .collect()
}

/// Applies a transition's ops to a geometry snapshot.
pub fn apply_ops(geometry: &Geometry, transition: &Transition) -> Geometry {
    let mut g = geometry.clone();
    for op in &transition.ops {
        let Some(entry) = g.get_mut(op.object()) else { continue };
        match op {
            ObjectOp::Translate { to, .. } | ObjectOp::Appear { at: to, .. } => entry.0 = Some(*to),
            ObjectOp::Disappear { .. } => entry.0 = None,
            ObjectOp::Scale { to, .. } => entry.1 = *to,
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_plan, parse_problem};
    use crate::plan::execute_plan;
    use crate::profile::parse_profile;

    struct Bw {
        domain: DomainAst,
        problem: ProblemAst,
        profile: AnimationProfile,
    }

    fn bw() -> Bw {
        let domain = parse_domain(include_str!("../fixtures/blocksworld/domain.pddl")).unwrap();
        let problem = parse_problem(include_str!("../fixtures/blocksworld/problem.pddl"), &domain).unwrap();
        let profile = parse_profile(include_str!("../fixtures/blocksworld/animation.pddl")).unwrap();
        Bw {
            domain,
            problem,
            profile,
        }
    }

    fn atoms(list: &[(&str, &[&str])]) -> GroundState {
        list.iter().map(|(p, a)| Atom::new(*p, a.iter().copied())).collect()
    }

    fn pos(s: &Scene, n: &str) -> (Option<i64>, Option<i64>) {
        (s.objects[n].x, s.objects[n].y)
    }

    #[test]
    fn initial_row() {
        let bw = bw();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 0);
        let state = GroundState::new(bw.problem.init.clone());
        let s = b.synthesize(&state, &bw.problem.goal).unwrap();
        assert_eq!(pos(&s, "a"), (Some(0), Some(0)));
        assert_eq!(pos(&s, "b"), (Some(80), Some(0)));
        assert_eq!(pos(&s, "c"), (Some(160), Some(0)));
        assert_eq!(pos(&s, "table"), (Some(0), Some(-22)));
        assert!(s.visible.contains("claw"));
        assert!(s.at_goal.is_empty());
    }

    #[test]
    fn stacked_pair() {
        let bw = bw();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 0);
        let s = b
            .synthesize(&atoms(&[("ontable", &["b"]), ("on", &["a", "b"])]), &[])
            .unwrap();
        assert_eq!(pos(&s, "b"), (Some(0), Some(0)));
        assert_eq!(pos(&s, "a"), (Some(0), Some(42)));
        assert!(!s.visible.contains("c"));
    }

    #[test]
    fn tower_of_three_iterations() {
        let bw = bw();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 0);
        let (s, stats) = b
            .synthesize_with_stats(
                &atoms(&[("on", &["a", "b"]), ("on", &["b", "c"]), ("ontable", &["c"])]),
                &[],
            )
            .unwrap();
        assert_eq!(pos(&s, "a"), (Some(0), Some(84)));
        assert!(stats.iterations <= 3);
        assert_eq!(stats.passes, stats.iterations + 1);
    }

    #[test]
    fn holding_follows_claw() {
        let bw = bw();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 0);
        let s = b.synthesize(&atoms(&[("holding", &["a"])]), &[]).unwrap();
        assert_eq!(pos(&s, "a"), (Some(180), Some(258)));
    }

    #[test]
    fn sequence_and_goal_scene() {
        let bw = bw();
        let plan = parse_plan(include_str!("../fixtures/blocksworld/plan.txt"), &bw.domain).unwrap();
        let traj = execute_plan(&bw.domain, &bw.problem, &plan).unwrap();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 7);
        let seq = b.synthesize_sequence(&traj).unwrap();
        assert_eq!(seq.scenes.len(), 5);
        assert_eq!(seq.transitions.len(), 4);
        // goal atoms alone do not say c is on the table
        assert_eq!(pos(&seq.goal_scene, "c"), (None, None));
        let last = seq.scenes.last().unwrap();
        assert_eq!(pos(last, "c"), (Some(0), Some(0)));
        assert_eq!(pos(last, "b"), (Some(0), Some(42)));
        assert_eq!(pos(last, "a"), (Some(0), Some(84)));
        assert_eq!(last.at_goal, BTreeSet::from(["a".to_string(), "b".into(), "c".into()]));
    }

    #[test]
    fn diff_cases() {
        let bw = bw();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 0);
        let s0 = b
            .synthesize(&atoms(&[("ontable", &["a"]), ("ontable", &["b"])]), &[])
            .unwrap();
        assert!(diff_scenes(&s0, &s0).is_empty());
        let s1 = b
            .synthesize(&atoms(&[("ontable", &["b"]), ("on", &["a", "b"])]), &[])
            .unwrap();
        let t = diff_scenes(&s0, &s1);
        assert_eq!(
            t.ops,
            vec![
                ObjectOp::Translate {
                    object: "a".into(),
                    from: (0, 0),
                    to: (0, 42)
                },
                ObjectOp::Translate {
                    object: "b".into(),
                    from: (80, 0),
                    to: (0, 0)
                },
            ]
        );
        let s2 = b.synthesize(&atoms(&[("ontable", &["b"])]), &[]).unwrap();
        let t = diff_scenes(&s1, &s2);
        assert_eq!(
            t.ops,
            vec![ObjectOp::Disappear {
                object: "a".into(),
                at: (0, 42)
            }]
        );
        assert_eq!(apply_ops(&geometry(&s1), &t), geometry(&s2));
        let back = diff_scenes(&s2, &s1);
        assert_eq!(
            back.ops,
            vec![ObjectOp::Appear {
                object: "a".into(),
                at: (0, 42)
            }]
        );
    }

    #[test]
    fn cyclic_profile_is_reported() {
        let bw = bw();
        let profile = parse_profile(
            "(define (animation loop)
               (:objects (block (:x 0) (:y 0)))
               (:predicate on :parameters (?a ?b) :effects (equal (?a x) (add (?b x) 1)))
               (:predicate above :parameters (?a ?b) :effects (equal (?b x) (add (?a x) 1))))",
        )
        .unwrap();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &profile, 0);
        let err = b
            .synthesize(&atoms(&[("on", &["a", "b"]), ("above", &["a", "b"])]), &[])
            .unwrap_err();
        match err {
            SceneError::Cyclic { objects, .. } => assert_eq!(objects, vec!["a", "b"]),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn conflicting_rules_are_reported() {
        let bw = bw();
        let profile = parse_profile(
            "(define (animation clash)
               (:predicate clear :parameters (?b) :effects (equal (?b y) 5))
               (:predicate ontable :parameters (?b) :effects (equal (?b y) 0)))",
        )
        .unwrap();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &profile, 0);
        let err = b
            .synthesize(&atoms(&[("clear", &["a"]), ("ontable", &["a"])]), &[])
            .unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, SceneError::Conflict { .. }));
        assert!(msg.contains("rule clear") && msg.contains("rule ontable"), "{msg}");
    }

    #[test]
    fn type_spec_then_object_spec() {
        let bw = bw();
        let profile = parse_profile(
            "(define (animation t) (:objects (object (:width 10) (:color red)) (block (:width 20)) (a (:width 30))))",
        )
        .unwrap();
        let b = SceneBuilder::new(&bw.domain, &bw.problem, &profile, 0);
        assert_eq!(b.base()["a"].width, 30);
        assert_eq!(b.base()["b"].width, 20);
        assert_eq!(b.base()["b"].color, Rgb(255, 0, 0));
        assert_eq!(b.base()["b"].label, "b");
    }

    #[test]
    fn random_color_depends_on_seed() {
        let bw = bw();
        let one = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 1);
        let two = SceneBuilder::new(&bw.domain, &bw.problem, &bw.profile, 2);
        assert_eq!(one.base()["a"].color, Rgb::random_for(1, "a"));
        assert_ne!(one.base()["a"].color, two.base()["a"].color);
    }
}
