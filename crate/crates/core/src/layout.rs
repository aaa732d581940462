//! The nine layout functions and the rule that decides which objects a
//! function call governs in a state.
//!
//! A call `(assign (<target> p) (function f (objects o…)))` inside the rule
//! for predicate `P` is evaluated once per state over *all* true
//! instantiations of `P`. Instantiations are grouped as follows:
//!
//! * target is one of the `objects`: the group key is the binding of the
//!   remaining objects (the reference, e.g. a container), and the members are
//!   the target bindings. With no remaining objects every instantiation falls
//!   into one shared group (the `ontable`/`distributex` case).
//! * otherwise: the key is the target binding and the members are the
//!   bindings of `objects` (the `in ?pkg ?truck`/`calculate_label` case).
//!
//! Members are deduplicated and sorted by name.
//!
//! A function computes every property it knows how to place (both axes for
//! the within, grid and centering functions; both sizes for `apply_smaller`).
//! The scene keeps only the writes matching the assign's target property, so
//! `(assign (?k x) …)` and `(assign (?k y) …)` are separate effects.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::color::Rgb;
use crate::plan::GroundState;
use crate::profile::{FunctionCall, LayoutFn, ObjectRef, PredicateRule, Property, Value};
use crate::scene::{LineElement, ObjectMap, ObjectProps};

pub const DEFAULT_SCALE: f64 = 0.8;

/// Group key (reference objects, empty for a shared group) -> sorted members.
pub type Groups = BTreeMap<Vec<String>, Vec<String>>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionInvocation {
    pub function: LayoutFn,
    pub groups: Groups,
}

impl FunctionInvocation {
    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyWrite {
    pub object: String,
    pub property: Property,
    pub value: Value,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LayoutResult {
    pub writes: Vec<PropertyWrite>,
    pub lines: Vec<LineElement>,
}

impl LayoutResult {
    fn write(&mut self, object: &str, property: Property, value: Value) {
        self.writes.push(PropertyWrite {
            object: object.to_string(),
            property,
            value,
        });
    }

    fn extend(&mut self, other: LayoutResult) {
        self.writes.extend(other.writes);
        self.lines.extend(other.lines);
    }

    /// Value written to `(object, property)`, if any.
    pub fn get(&self, object: &str, property: Property) -> Option<&Value> {
        self.writes
            .iter()
            .find(|w| w.object == object && w.property == property)
            .map(|w| &w.value)
    }

    pub fn int(&self, object: &str, property: Property) -> Option<i64> {
        match self.get(object, property) {
            Some(Value::Int(i)) => Some(*i),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LayoutError {
    /// The reference object has no position yet; retry on a later pass.
    #[error("{0} has no resolved position")]
    Unresolved(String),
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("scale {0} is outside (0, 1)")]
    ScaleOutOfRange(f64),
    #[error("{0} needs exactly one reference object per group")]
    MissingReference(LayoutFn),
}

impl Eq for LayoutError {}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Horizontal,
    Vertical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridSettings {
    pub x: i64,
    pub y: i64,
    pub spacebtwn: i64,
    pub columns: Option<i64>,
}

/// `num / den` rounded to the nearest integer, halves away from zero.
pub(crate) fn round_div(num: i64, den: i64) -> i64 {
    debug_assert!(den > 0);
    if num >= 0 {
        (2 * num + den) / (2 * den)
    } else {
        -((-2 * num + den) / (2 * den))
    }
}

fn lookup<'a>(objects: &'a ObjectMap, name: &str) -> Result<&'a ObjectProps, LayoutError> {
    objects
        .get(name)
        .ok_or_else(|| LayoutError::UnknownObject(name.to_string()))
}

fn position<'a>(objects: &'a ObjectMap, name: &str) -> Result<(i64, i64, &'a ObjectProps), LayoutError> {
    let p = lookup(objects, name)?;
    match (p.x, p.y) {
        (Some(x), Some(y)) => Ok((x, y, p)),
        _ => Err(LayoutError::Unresolved(name.to_string())),
    }
}

fn sorted(group: &[String]) -> Vec<&str> {
    let mut g: Vec<&str> = group.iter().map(String::as_str).collect();
    g.sort_unstable();
    g.dedup();
    g
}

fn distribute(group: &[String], spacebtwn: i64, objects: &ObjectMap, axis: Axis) -> Result<LayoutResult, LayoutError> {
    let mut out = LayoutResult::default();
    let mut pos = 0;
    for name in sorted(group) {
        let p = lookup(objects, name)?;
        match axis {
            Axis::Horizontal => {
                out.write(name, Property::X, Value::Int(pos));
                pos += p.width + spacebtwn;
            }
            Axis::Vertical => {
                out.write(name, Property::Y, Value::Int(pos));
                pos += p.height + spacebtwn;
            }
        }
    }
    Ok(out)
}

/// Lays the group out left to right from x = 0, `spacebtwn` units between
/// consecutive edges.
pub fn distributex(group: &[String], spacebtwn: i64, objects: &ObjectMap) -> Result<LayoutResult, LayoutError> {
    distribute(group, spacebtwn, objects, Axis::Horizontal)
}

/// Vertical twin of [`distributex`], stacking upward from y = 0.
pub fn distributey(group: &[String], spacebtwn: i64, objects: &ObjectMap) -> Result<LayoutResult, LayoutError> {
    distribute(group, spacebtwn, objects, Axis::Vertical)
}

/// Centers the group's objects in `n` equal slots along `axis` inside the
/// container, and centers them across the other axis.
pub fn distribute_within(
    group: &[String],
    container: &str,
    axis: Axis,
    objects: &ObjectMap,
) -> Result<LayoutResult, LayoutError> {
    let (cx, cy, c) = position(objects, container)?;
    let members = sorted(group);
    let n = members.len() as i64;
    let mut out = LayoutResult::default();
    for (i, name) in members.into_iter().enumerate() {
        let p = lookup(objects, name)?;
        let i = i as i64;
        let (x, y) = match axis {
            Axis::Horizontal => (
                round_div(2 * cx * n + (2 * i + 1) * c.width - p.width * n, 2 * n),
                round_div(2 * cy + c.height - p.height, 2),
            ),
            Axis::Vertical => (
                round_div(2 * cx + c.width - p.width, 2),
                round_div(2 * cy * n + (2 * i + 1) * c.height - p.height * n, 2 * n),
            ),
        };
        out.write(name, Property::X, Value::Int(x));
        out.write(name, Property::Y, Value::Int(y));
    }
    Ok(out)
}

fn ceil_sqrt(n: i64) -> i64 {
    let mut c = 0;
    while c * c < n {
        c += 1;
    }
    c
}

/// Row-major grid (first row on top) whose occupied cell centers average to
/// the given point. Cell pitch is the largest member size plus `spacebtwn`.
pub fn distribute_grid_around_point(
    group: &[String],
    settings: &GridSettings,
    objects: &ObjectMap,
) -> Result<LayoutResult, LayoutError> {
    let members = sorted(group);
    let n = members.len() as i64;
    let mut out = LayoutResult::default();
    if n == 0 {
        return Ok(out);
    }
    let props = members
        .iter()
        .map(|m| lookup(objects, m))
        .collect::<Result<Vec<_>, _>>()?;
    let columns = settings.columns.unwrap_or_else(|| ceil_sqrt(n)).max(1);
    let pitch_x = props.iter().map(|p| p.width).max().unwrap_or(0) + settings.spacebtwn;
    let pitch_y = props.iter().map(|p| p.height).max().unwrap_or(0) + settings.spacebtwn;
    let offsets: Vec<(i64, i64)> = (0..n)
        .map(|i| ((i % columns) * pitch_x, -(i / columns) * pitch_y))
        .collect();
    let sum_x: i64 = offsets.iter().map(|o| o.0).sum();
    let sum_y: i64 = offsets.iter().map(|o| o.1).sum();
    for ((name, p), (ox, oy)) in members.iter().zip(&props).zip(&offsets) {
        let x = round_div(2 * n * (settings.x + ox) - 2 * sum_x - n * p.width, 2 * n);
        let y = round_div(2 * n * (settings.y + oy) - 2 * sum_y - n * p.height, 2 * n);
        out.write(name, Property::X, Value::Int(x));
        out.write(name, Property::Y, Value::Int(y));
    }
    Ok(out)
}

/// Writes each reference object's label as the size of its group.
pub fn calculate_label(groups: &Groups) -> Result<LayoutResult, LayoutError> {
    let mut out = LayoutResult::default();
    for (key, members) in groups {
        let [holder] = key.as_slice() else {
            return Err(LayoutError::MissingReference(LayoutFn::CalculateLabel));
        };
        out.write(holder, Property::Label, Value::Text(members.len().to_string()));
    }
    Ok(out)
}

/// Centers `object` on `container`.
pub fn align_middle(object: &str, container: &str, objects: &ObjectMap) -> Result<LayoutResult, LayoutError> {
    let (cx, cy, c) = position(objects, container)?;
    let p = lookup(objects, object)?;
    let mut out = LayoutResult::default();
    out.write(
        object,
        Property::X,
        Value::Int(round_div(2 * cx + c.width - p.width, 2)),
    );
    out.write(
        object,
        Property::Y,
        Value::Int(round_div(2 * cy + c.height - p.height, 2)),
    );
    Ok(out)
}

/// Scales `object` relative to its base (profile) size, so applying it again
/// in the same state gives the same size.
pub fn apply_smaller(object: &str, scale: f64, base: &ObjectMap) -> Result<LayoutResult, LayoutError> {
    if !(scale > 0.0 && scale < 1.0) {
        return Err(LayoutError::ScaleOutOfRange(scale));
    }
    let p = lookup(base, object)?;
    let shrink = |v: i64| ((v as f64 * scale).round() as i64).max(1);
    let mut out = LayoutResult::default();
    out.write(object, Property::Width, Value::Int(shrink(p.width)));
    out.write(object, Property::Height, Value::Int(shrink(p.height)));
    Ok(out)
}

fn center(x: i64, y: i64, p: &ObjectProps) -> (i64, i64) {
    (round_div(2 * x + p.width, 2), round_div(2 * y + p.height, 2))
}

/// Line between the centers of two placed objects.
pub fn draw_line(from: &str, to: &str, color: Rgb, objects: &ObjectMap) -> Result<LayoutResult, LayoutError> {
    let (ax, ay, a) = position(objects, from)?;
    let (bx, by, b) = position(objects, to)?;
    let (x1, y1) = center(ax, ay, a);
    let (x2, y2) = center(bx, by, b);
    Ok(LayoutResult {
        writes: Vec::new(),
        lines: vec![LineElement {
            from: from.to_string(),
            to: to.to_string(),
            color,
            x1,
            y1,
            x2,
            y2,
        }],
    })
}

fn bind<'a>(r: &'a ObjectRef, rule: &PredicateRule, args: &'a [String]) -> Option<&'a str> {
    match r {
        ObjectRef::Var(v) => rule.param_index(v).and_then(|i| args.get(i)).map(String::as_str),
        ObjectRef::Name(n) => Some(n),
    }
}

/// Collects the objects `call` governs in `state`, grouped as described in
/// the module docs.
pub fn resolve_objects(
    target: &ObjectRef,
    call: &FunctionCall,
    rule: &PredicateRule,
    state: &GroundState,
) -> FunctionInvocation {
    let mut refs: Vec<&ObjectRef> = Vec::new();
    for o in &call.objects {
        if !refs.contains(&o) {
            refs.push(o);
        }
    }
    let target_is_member = refs.contains(&target);
    let mut groups = Groups::new();
    'atoms: for atom in state.atoms.iter().filter(|a| a.predicate == rule.predicate) {
        if atom.args.len() != rule.params.len() {
            continue;
        }
        let (key, members): (Vec<&ObjectRef>, Vec<&ObjectRef>) = if target_is_member {
            (refs.iter().copied().filter(|r| *r != target).collect(), vec![target])
        } else {
            (vec![target], refs.clone())
        };
        let mut key_names = Vec::with_capacity(key.len());
        for k in key {
            match bind(k, rule, &atom.args) {
                Some(n) => key_names.push(n.to_string()),
                None => continue 'atoms,
            }
        }
        let entry = groups.entry(key_names).or_default();
        for m in members {
            if let Some(n) = bind(m, rule, &atom.args) {
                entry.push(n.to_string());
            }
        }
    }
    for members in groups.values_mut() {
        members.sort();
        members.dedup();
    }
    FunctionInvocation {
        function: call.function,
        groups,
    }
}

fn reference(key: &[String], function: LayoutFn) -> Result<&str, LayoutError> {
    match key {
        [r] => Ok(r),
        _ => Err(LayoutError::MissingReference(function)),
    }
}

/// Evaluates an invocation against the current property map.
///
/// Groups whose reference object is not placed yet are skipped and their
/// reference names returned, so the caller can retry on a later pass.
pub fn evaluate(
    invocation: &FunctionInvocation,
    call: &FunctionCall,
    objects: &ObjectMap,
    base: &ObjectMap,
) -> Result<(LayoutResult, Vec<String>), LayoutError> {
    let mut out = LayoutResult::default();
    let mut deferred = Vec::new();
    let function = invocation.function;
    if function == LayoutFn::CalculateLabel {
        return Ok((calculate_label(&invocation.groups)?, deferred));
    }
    for (key, members) in &invocation.groups {
        let result = match function {
            LayoutFn::DistributeX => distributex(members, call.int_setting("spacebtwn").unwrap_or(0), objects),
            LayoutFn::DistributeY => distributey(members, call.int_setting("spacebtwn").unwrap_or(0), objects),
            LayoutFn::DistributeWithinHorizontal => {
                distribute_within(members, reference(key, function)?, Axis::Horizontal, objects)
            }
            LayoutFn::DistributeWithinVertical => {
                distribute_within(members, reference(key, function)?, Axis::Vertical, objects)
            }
            LayoutFn::DistributeGridAroundPoint => {
                let settings = GridSettings {
                    x: call.int_setting("x").unwrap_or(0),
                    y: call.int_setting("y").unwrap_or(0),
                    spacebtwn: call.int_setting("spacebtwn").unwrap_or(0),
                    columns: call.int_setting("columns"),
                };
                distribute_grid_around_point(members, &settings, objects)
            }
            LayoutFn::AlignMiddle => {
                let container = reference(key, function)?;
                members.iter().try_fold(LayoutResult::default(), |mut acc, m| {
                    acc.extend(align_middle(m, container, objects)?);
                    Ok(acc)
                })
            }
            LayoutFn::ApplySmaller => {
                let scale = call.number_setting("scale").unwrap_or(DEFAULT_SCALE);
                members.iter().try_fold(LayoutResult::default(), |mut acc, m| {
                    acc.extend(apply_smaller(m, scale, base)?);
                    Ok(acc)
                })
            }
            LayoutFn::DrawLine => {
                let to = reference(key, function)?;
                let color = call.color_setting("color").unwrap_or(Rgb::BLACK);
                members.iter().try_fold(LayoutResult::default(), |mut acc, m| {
                    acc.extend(draw_line(m, to, color, objects)?);
                    Ok(acc)
                })
            }
            LayoutFn::CalculateLabel => unreachable!("handled above"),
        };
        match result {
            Ok(r) => out.extend(r),
            Err(LayoutError::Unresolved(name)) => deferred.push(name),
            Err(e) => return Err(e),
        }
    }
    Ok((out, deferred))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::Atom;
    use crate::profile::parse_profile;

    fn obj(x: Option<i64>, y: Option<i64>, w: i64, h: i64) -> ObjectProps {
        ObjectProps {
            x,
            y,
            width: w,
            height: h,
            ..ObjectProps::default_for("o")
        }
    }

    fn map(entries: &[(&str, ObjectProps)]) -> ObjectMap {
        entries.iter().map(|(n, p)| (n.to_string(), p.clone())).collect()
    }

    fn names(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn distributex_examples() {
        let sq = obj(None, None, 40, 40);
        let m = map(&[("a", sq.clone()), ("b", sq.clone()), ("c", sq.clone())]);
        let r = distributex(&names(&["c", "a", "b"]), 40, &m).unwrap();
        assert_eq!(["a", "b", "c"].map(|n| r.int(n, Property::X).unwrap()), [0, 80, 160]);
        let r = distributex(&names(&["b"]), 40, &m).unwrap();
        assert_eq!(r.int("b", Property::X), Some(0));
        let m = map(&[("a", obj(None, None, 40, 1)), ("b", obj(None, None, 60, 1))]);
        let r = distributex(&names(&["a", "b"]), 10, &m).unwrap();
        assert_eq!((r.int("a", Property::X), r.int("b", Property::X)), (Some(0), Some(50)));
    }

    #[test]
    fn distributey_examples() {
        let sq = obj(None, None, 40, 40);
        let m = map(&[("a", sq.clone()), ("b", sq.clone()), ("c", sq)]);
        let r = distributey(&names(&["a", "b", "c"]), 40, &m).unwrap();
        assert_eq!(["a", "b", "c"].map(|n| r.int(n, Property::Y).unwrap()), [0, 80, 160]);
        let m = map(&[("a", obj(None, None, 1, 20)), ("b", obj(None, None, 1, 20))]);
        let r = distributey(&names(&["a", "b"]), 0, &m).unwrap();
        assert_eq!((r.int("a", Property::Y), r.int("b", Property::Y)), (Some(0), Some(20)));
    }

    #[test]
    fn within_examples() {
        let m = map(&[
            ("city", obj(Some(0), Some(0), 120, 60)),
            ("p", obj(None, None, 20, 20)),
            ("q", obj(None, None, 20, 20)),
        ]);
        let r = distribute_within(&names(&["p", "q"]), "city", Axis::Horizontal, &m).unwrap();
        assert_eq!((r.int("p", Property::X), r.int("q", Property::X)), (Some(20), Some(80)));
        assert_eq!((r.int("p", Property::Y), r.int("q", Property::Y)), (Some(20), Some(20)));

        let r = distribute_within(&names(&["p"]), "city", Axis::Horizontal, &m).unwrap();
        assert_eq!((r.int("p", Property::X), r.int("p", Property::Y)), (Some(50), Some(20)));

        let m = map(&[
            ("c", obj(Some(0), Some(0), 120, 40)),
            ("a", obj(None, None, 40, 40)),
            ("b", obj(None, None, 40, 40)),
            ("d", obj(None, None, 40, 40)),
        ]);
        let r = distribute_within(&names(&["a", "b", "d"]), "c", Axis::Horizontal, &m).unwrap();
        assert_eq!(["a", "b", "d"].map(|n| r.int(n, Property::X).unwrap()), [0, 40, 80]);

        let r = distribute_within(&names(&["a", "b", "d"]), "c", Axis::Vertical, &m).unwrap();
        assert_eq!(r.int("a", Property::X), Some(40));
    }

    #[test]
    fn within_needs_placed_container() {
        let m = map(&[("c", obj(None, Some(0), 10, 10)), ("a", obj(None, None, 1, 1))]);
        assert_eq!(
            distribute_within(&names(&["a"]), "c", Axis::Vertical, &m),
            Err(LayoutError::Unresolved("c".into()))
        );
    }

    #[test]
    fn grid_examples() {
        let sq = obj(None, None, 40, 40);
        let m = map(&[("a", sq.clone()), ("b", sq.clone()), ("c", sq.clone()), ("d", sq)]);
        let s = GridSettings {
            x: 0,
            y: 0,
            spacebtwn: 10,
            columns: None,
        };
        let r = distribute_grid_around_point(&names(&["a", "b", "c", "d"]), &s, &m).unwrap();
        // pitch 50: centers at (±25, ±25), first row on top
        let pos = |n: &str| (r.int(n, Property::X).unwrap(), r.int(n, Property::Y).unwrap());
        assert_eq!(pos("a"), (-45, 5));
        assert_eq!(pos("b"), (5, 5));
        assert_eq!(pos("c"), (-45, -45));
        assert_eq!(pos("d"), (5, -45));

        let s = GridSettings {
            x: 100,
            y: 100,
            spacebtwn: 10,
            columns: None,
        };
        let r = distribute_grid_around_point(&names(&["a"]), &s, &m).unwrap();
        assert_eq!((r.int("a", Property::X), r.int("a", Property::Y)), (Some(80), Some(80)));

        let s = GridSettings {
            x: 0,
            y: 0,
            spacebtwn: 10,
            columns: Some(3),
        };
        let r = distribute_grid_around_point(&names(&["a", "b", "c"]), &s, &m).unwrap();
        assert_eq!(["a", "b", "c"].map(|n| r.int(n, Property::X).unwrap()), [-70, -20, 30]);
        assert_eq!(["a", "b", "c"].map(|n| r.int(n, Property::Y).unwrap()), [-20, -20, -20]);
    }

    #[test]
    fn label_counts() {
        let mut g = Groups::new();
        g.insert(names(&["t1"]), names(&["p1", "p2"]));
        g.insert(names(&["t2"]), names(&["p3"]));
        let r = calculate_label(&g).unwrap();
        assert_eq!(r.get("t1", Property::Label), Some(&Value::Text("2".into())));
        assert_eq!(r.get("t2", Property::Label), Some(&Value::Text("1".into())));
        assert!(calculate_label(&Groups::new()).unwrap().writes.is_empty());
        let mut g = Groups::new();
        g.insert(names(&["t"]), names(&["p1", "p2", "p3", "p4", "p5"]));
        assert_eq!(
            calculate_label(&g).unwrap().get("t", Property::Label),
            Some(&Value::Text("5".into()))
        );
    }

    #[test]
    fn align_middle_examples() {
        let m = map(&[
            ("box", obj(Some(0), Some(0), 100, 100)),
            ("small", obj(None, None, 20, 20)),
            ("same", obj(None, None, 100, 100)),
            ("box2", obj(Some(10), Some(10), 50, 50)),
            ("flat", obj(None, None, 30, 10)),
        ]);
        let r = align_middle("small", "box", &m).unwrap();
        assert_eq!(
            (r.int("small", Property::X), r.int("small", Property::Y)),
            (Some(40), Some(40))
        );
        let r = align_middle("same", "box", &m).unwrap();
        assert_eq!(
            (r.int("same", Property::X), r.int("same", Property::Y)),
            (Some(0), Some(0))
        );
        let r = align_middle("flat", "box2", &m).unwrap();
        assert_eq!(
            (r.int("flat", Property::X), r.int("flat", Property::Y)),
            (Some(20), Some(30))
        );
    }

    #[test]
    fn apply_smaller_examples() {
        let base = map(&[("a", obj(None, None, 40, 40)), ("b", obj(None, None, 50, 30))]);
        let r = apply_smaller("a", 0.8, &base).unwrap();
        assert_eq!(
            (r.int("a", Property::Width), r.int("a", Property::Height)),
            (Some(32), Some(32))
        );
        let again = apply_smaller("a", 0.8, &base).unwrap();
        assert_eq!(r, again);
        let r = apply_smaller("b", 0.5, &base).unwrap();
        assert_eq!(
            (r.int("b", Property::Width), r.int("b", Property::Height)),
            (Some(25), Some(15))
        );
        assert_eq!(apply_smaller("a", 1.0, &base), Err(LayoutError::ScaleOutOfRange(1.0)));
        assert_eq!(apply_smaller("a", 0.0, &base), Err(LayoutError::ScaleOutOfRange(0.0)));
    }

    #[test]
    fn draw_line_examples() {
        let m = map(&[
            ("a", obj(Some(0), Some(0), 40, 40)),
            ("b", obj(Some(100), Some(0), 40, 40)),
        ]);
        let r = draw_line("a", "b", Rgb::BLACK, &m).unwrap();
        let l = &r.lines[0];
        assert_eq!((l.x1, l.y1, l.x2, l.y2), (20, 20, 120, 20));
        let r = draw_line("a", "a", Rgb::named("blue").unwrap(), &m).unwrap();
        let l = &r.lines[0];
        assert_eq!((l.x1, l.y1), (l.x2, l.y2));
        assert_eq!(l.color.to_string(), "#0000FF");
    }

    fn rule_and_call(src: &str) -> (PredicateRule, ObjectRef, FunctionCall) {
        let p = parse_profile(&format!("(define (animation t) {src})")).unwrap();
        let rule = p.rules[0].clone();
        match &rule.effects[0] {
            crate::profile::Effect::Assign { target, call } => {
                let (t, c) = (target.object.clone(), call.clone());
                (rule, t, c)
            }
            _ => panic!(),
        }
    }

    #[test]
    fn resolve_shared_group() {
        let (rule, target, call) = rule_and_call(
            "(:predicate ontable :parameters (?b) :effects (assign (?b x) (function distributex (objects ?b) (settings (spacebtwn 40)))))",
        );
        let state: GroundState = ["c", "a", "b"].iter().map(|o| Atom::new("ontable", [*o])).collect();
        let inv = resolve_objects(&target, &call, &rule, &state);
        assert_eq!(inv.groups.len(), 1);
        assert_eq!(inv.groups[&Vec::<String>::new()], names(&["a", "b", "c"]));
        assert!(resolve_objects(&target, &call, &rule, &GroundState::default()).is_empty());
    }

    #[test]
    fn resolve_per_truck_groups() {
        let (rule, target, call) = rule_and_call(
            "(:predicate in :parameters (?pkg ?truck) :effects (assign (?truck label) (function calculate_label (objects ?pkg))))",
        );
        let state: GroundState = [("p1", "t1"), ("p2", "t1"), ("p3", "t2")]
            .iter()
            .map(|(p, t)| Atom::new("in", [*p, *t]))
            .collect();
        let inv = resolve_objects(&target, &call, &rule, &state);
        assert_eq!(inv.groups[&names(&["t1"])], names(&["p1", "p2"]));
        assert_eq!(inv.groups[&names(&["t2"])], names(&["p3"]));
        assert_eq!(inv.groups.len(), 2);
    }

    #[test]
    fn resolve_container_groups() {
        let (rule, target, call) = rule_and_call(
            "(:predicate at :parameters (?o ?l) :effects (assign (?o x) (function distribute_within_objects_vertical (objects ?o ?l))))",
        );
        let state: GroundState = [("p1", "l1"), ("t1", "l1"), ("p2", "l2")]
            .iter()
            .map(|(o, l)| Atom::new("at", [*o, *l]))
            .collect();
        let inv = resolve_objects(&target, &call, &rule, &state);
        assert_eq!(inv.groups[&names(&["l1"])], names(&["p1", "t1"]));
        assert_eq!(inv.groups[&names(&["l2"])], names(&["p2"]));
    }

    #[test]
    fn evaluate_defers_unplaced_references() {
        let (rule, target, call) = rule_and_call(
            "(:predicate at :parameters (?o ?l) :effects (assign (?o x) (function align_middle (objects ?o ?l))))",
        );
        let state: GroundState = [Atom::new("at", ["p", "l1"]), Atom::new("at", ["q", "l2"])]
            .into_iter()
            .collect();
        let inv = resolve_objects(&target, &call, &rule, &state);
        let m = map(&[
            ("p", obj(None, None, 10, 10)),
            ("q", obj(None, None, 10, 10)),
            ("l1", obj(Some(0), Some(0), 30, 30)),
            ("l2", obj(None, None, 30, 30)),
        ]);
        let (r, deferred) = evaluate(&inv, &call, &m, &m).unwrap();
        assert_eq!(deferred, vec!["l2".to_string()]);
        assert_eq!(r.int("p", Property::X), Some(10));
        assert_eq!(r.get("q", Property::X), None);
    }

    #[test]
    fn rounding_halves_away_from_zero() {
        assert_eq!(round_div(5, 2), 3);
        assert_eq!(round_div(-5, 2), -3);
        assert_eq!(round_div(7, 3), 2);
        assert_eq!(round_div(-7, 3), -2);
        assert_eq!(round_div(0, 4), 0);
    }
}
