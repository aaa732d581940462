//! The animation profile: per-object/type visual specs, custom objects, and
//! predicate rules whose effects fire for every true instantiation of the
//! predicate in a state.
//!
//! Surface syntax:
//!
//! ```text
//! (define (animation <name>)
//!   (:objects (<object-or-type> (:<prop> <value>)…)…)
//!   (:custom  (<name> (:<prop> <value>)…)…)
//!   (:predicate <name> :parameters (?v…) :effects <effect>…)…)
//! ```
//!
//! where an effect is `(equal (<ref> <prop>) <expr>)` or
//! `(assign (<ref> <prop>) (function <fn> (objects <ref>…) (settings (<key> <value>)…)))`.

mod check;
mod parse;

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::color::Rgb;
use crate::sexpr::{quote, Pos, SyntaxError};

pub use check::{check_profile, Diagnostic, Severity};
pub use parse::parse_profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Property {
    X,
    Y,
    Color,
    Width,
    Height,
    PrefabImage,
    Depth,
    ShowName,
    Label,
}

impl Property {
    pub const ALL: [Property; 9] = [
        Property::X,
        Property::Y,
        Property::Color,
        Property::Width,
        Property::Height,
        Property::PrefabImage,
        Property::Depth,
        Property::ShowName,
        Property::Label,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::X => "x",
            Property::Y => "y",
            Property::Color => "color",
            Property::Width => "width",
            Property::Height => "height",
            Property::PrefabImage => "prefabimage",
            Property::Depth => "depth",
            Property::ShowName => "showname",
            Property::Label => "label",
        }
    }

    pub fn from_name(name: &str) -> Option<Property> {
        let lower = name.to_ascii_lowercase();
        Property::ALL.into_iter().find(|p| p.name() == lower)
    }

    /// Properties holding integers (the operands `add` accepts).
    pub fn is_numeric(self) -> bool {
        matches!(
            self,
            Property::X | Property::Y | Property::Width | Property::Height | Property::Depth
        )
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Shape {
    Rectangle,
    Ellipse,
}

impl Shape {
    pub fn name(self) -> &'static str {
        match self {
            Shape::Rectangle => "rectangle",
            Shape::Ellipse => "ellipse",
        }
    }
}

/// Sprite of an object: a built-in shape or a base64-encoded image kept verbatim.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Prefab {
    Builtin(Shape),
    Base64(String),
}

impl Default for Prefab {
    fn default() -> Self {
        Prefab::Builtin(Shape::Rectangle)
    }
}

/// A resolved property value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Value {
    Null,
    Int(i64),
    Color(Rgb),
    Bool(bool),
    Text(String),
    Image(Prefab),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Null => f.write_str("null"),
            Value::Int(i) => write!(f, "{i}"),
            Value::Color(c) => write!(f, "{c}"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Text(t) => f.write_str(&quote(t)),
            Value::Image(Prefab::Builtin(s)) => f.write_str(s.name()),
            Value::Image(Prefab::Base64(p)) => f.write_str(&quote(p)),
        }
    }
}

/// Value in an object or custom-object spec; `random` colors are resolved
/// per object when a scene is built.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SpecValue {
    Value(Value),
    RandomColor,
}

impl fmt::Display for SpecValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpecValue::Value(v) => write!(f, "{v}"),
            SpecValue::RandomColor => f.write_str("random"),
        }
    }
}

pub type PropertyMap = BTreeMap<Property, SpecValue>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObjectSpec {
    /// Problem object, type, or custom-object name.
    pub target: String,
    pub properties: PropertyMap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CustomObject {
    pub name: String,
    pub properties: PropertyMap,
}

/// A rule parameter (stored without `?`) or a named object.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ObjectRef {
    Var(String),
    Name(String),
}

impl fmt::Display for ObjectRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ObjectRef::Var(v) => write!(f, "?{v}"),
            ObjectRef::Name(n) => f.write_str(n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropRef {
    pub object: ObjectRef,
    pub property: Property,
}

impl fmt::Display for PropRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {})", self.object, self.property)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Literal(Value),
    Prop(PropRef),
    /// Two or more integer operands.
    Add(Vec<Expr>),
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal(v) => write!(f, "{v}"),
            Expr::Prop(p) => write!(f, "{p}"),
            Expr::Add(ops) => {
                f.write_str("(add")?;
                for o in ops {
                    write!(f, " {o}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LayoutFn {
    DistributeX,
    DistributeY,
    DistributeWithinVertical,
    DistributeWithinHorizontal,
    DistributeGridAroundPoint,
    CalculateLabel,
    AlignMiddle,
    ApplySmaller,
    DrawLine,
}

impl LayoutFn {
    pub const ALL: [LayoutFn; 9] = [
        LayoutFn::DistributeX,
        LayoutFn::DistributeY,
        LayoutFn::DistributeWithinVertical,
        LayoutFn::DistributeWithinHorizontal,
        LayoutFn::DistributeGridAroundPoint,
        LayoutFn::CalculateLabel,
        LayoutFn::AlignMiddle,
        LayoutFn::ApplySmaller,
        LayoutFn::DrawLine,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LayoutFn::DistributeX => "distributex",
            LayoutFn::DistributeY => "distributey",
            LayoutFn::DistributeWithinVertical => "distribute_within_objects_vertical",
            LayoutFn::DistributeWithinHorizontal => "distribute_within_objects_horizontal",
            LayoutFn::DistributeGridAroundPoint => "distribute_grid_around_point",
            LayoutFn::CalculateLabel => "calculate_label",
            LayoutFn::AlignMiddle => "align_middle",
            LayoutFn::ApplySmaller => "apply_smaller",
            LayoutFn::DrawLine => "draw_line",
        }
    }

    pub fn from_name(name: &str) -> Option<LayoutFn> {
        LayoutFn::ALL.into_iter().find(|f| f.name() == name)
    }

    /// Whether each group needs exactly one reference object (container,
    /// line endpoint, or label holder).
    pub fn needs_reference(self) -> bool {
        matches!(
            self,
            LayoutFn::DistributeWithinVertical
                | LayoutFn::DistributeWithinHorizontal
                | LayoutFn::CalculateLabel
                | LayoutFn::AlignMiddle
                | LayoutFn::DrawLine
        )
    }

    /// Properties an `assign` may name as its target for this function.
    pub fn allows_target(self, p: Property) -> bool {
        use Property::*;
        match self {
            LayoutFn::DistributeX => p == X,
            LayoutFn::DistributeY => p == Y,
            LayoutFn::DistributeWithinVertical
            | LayoutFn::DistributeWithinHorizontal
            | LayoutFn::DistributeGridAroundPoint
            | LayoutFn::AlignMiddle => matches!(p, X | Y),
            LayoutFn::CalculateLabel => p == Label,
            LayoutFn::ApplySmaller => matches!(p, Width | Height),
            LayoutFn::DrawLine => true,
        }
    }
}

impl fmt::Display for LayoutFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Setting {
    Int(i64),
    Number(f64),
    Color(Rgb),
}

impl Eq for Setting {}

impl fmt::Display for Setting {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Setting::Int(i) => write!(f, "{i}"),
            Setting::Number(n) => write!(f, "{n}"),
            Setting::Color(c) => write!(f, "{c}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionCall {
    pub function: LayoutFn,
    pub objects: Vec<ObjectRef>,
    pub settings: BTreeMap<String, Setting>,
}

impl FunctionCall {
    pub fn int_setting(&self, key: &str) -> Option<i64> {
        match self.settings.get(key) {
            Some(Setting::Int(i)) => Some(*i),
            _ => None,
        }
    }

    pub fn number_setting(&self, key: &str) -> Option<f64> {
        match self.settings.get(key) {
            Some(Setting::Number(n)) => Some(*n),
            Some(Setting::Int(i)) => Some(*i as f64),
            _ => None,
        }
    }

    pub fn color_setting(&self, key: &str) -> Option<Rgb> {
        match self.settings.get(key) {
            Some(Setting::Color(c)) => Some(*c),
            _ => None,
        }
    }
}

impl fmt::Display for FunctionCall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(function {} (objects", self.function)?;
        for o in &self.objects {
            write!(f, " {o}")?;
        }
        f.write_str(")")?;
        if !self.settings.is_empty() {
            f.write_str(" (settings")?;
            for (k, v) in &self.settings {
                write!(f, " ({k} {v})")?;
            }
            f.write_str(")")?;
        }
        f.write_str(")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Effect {
    Equal { target: PropRef, expr: Expr },
    Assign { target: PropRef, call: FunctionCall },
}

impl Effect {
    pub fn target(&self) -> &PropRef {
        match self {
            Effect::Equal { target, .. } | Effect::Assign { target, .. } => target,
        }
    }
}

impl fmt::Display for Effect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Effect::Equal { target, expr } => write!(f, "(equal {target} {expr})"),
            Effect::Assign { target, call } => write!(f, "(assign {target} {call})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateRule {
    pub predicate: String,
    /// Parameter variables without `?`, positionally matching the predicate.
    pub params: Vec<String>,
    pub effects: Vec<Effect>,
}

impl PredicateRule {
    pub fn param_index(&self, var: &str) -> Option<usize> {
        self.params.iter().position(|p| p == var)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnimationProfile {
    pub name: String,
    pub object_specs: Vec<ObjectSpec>,
    pub custom_objects: Vec<CustomObject>,
    pub rules: Vec<PredicateRule>,
}

impl AnimationProfile {
    pub fn rule(&self, predicate: &str) -> Option<&PredicateRule> {
        self.rules.iter().find(|r| r.predicate == predicate)
    }

    pub fn spec(&self, target: &str) -> Option<&ObjectSpec> {
        self.object_specs.iter().find(|s| s.target == target)
    }

    pub fn custom(&self, name: &str) -> Option<&CustomObject> {
        self.custom_objects.iter().find(|c| c.name == name)
    }
}

fn write_props(f: &mut fmt::Formatter<'_>, props: &PropertyMap) -> fmt::Result {
    for (p, v) in props {
        write!(f, " (:{p} {v})")?;
    }
    Ok(())
}

impl fmt::Display for AnimationProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (animation {})", self.name)?;
        if !self.object_specs.is_empty() {
            f.write_str("  (:objects")?;
            for s in &self.object_specs {
                write!(f, "\n    ({}", s.target)?;
                write_props(f, &s.properties)?;
                f.write_str(")")?;
            }
            writeln!(f, ")")?;
        }
        if !self.custom_objects.is_empty() {
            f.write_str("  (:custom")?;
            for c in &self.custom_objects {
                write!(f, "\n    ({}", c.name)?;
                write_props(f, &c.properties)?;
                f.write_str(")")?;
            }
            writeln!(f, ")")?;
        }
        for r in &self.rules {
            write!(f, "  (:predicate {}\n    :parameters (", r.predicate)?;
            for (i, p) in r.params.iter().enumerate() {
                if i > 0 {
                    f.write_str(" ")?;
                }
                write!(f, "?{p}")?;
            }
            f.write_str(")\n    :effects")?;
            for e in &r.effects {
                write!(f, "\n      {e}")?;
            }
            writeln!(f, ")")?;
        }
        writeln!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProfileError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: unknown property {name}")]
    UnknownProperty { name: String, pos: Pos },
    #[error("{pos}: unknown function {name}")]
    UnknownFunction { name: String, pos: Pos },
    #[error("{pos}: malformed color {text}")]
    BadColor { text: String, pos: Pos },
    #[error("{pos}: malformed settings: {message}")]
    BadSettings { message: String, pos: Pos },
    #[error("{pos}: duplicate {kind} {name}")]
    Duplicate { kind: &'static str, name: String, pos: Pos },
    #[error("{pos}: {message}")]
    Invalid { message: String, pos: Pos },
}
