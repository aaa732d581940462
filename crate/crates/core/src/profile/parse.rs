use std::collections::BTreeMap;

use base64::Engine;

use crate::color::Rgb;
use crate::sexpr::{self, Pos, SExpr, SExprKind};

use super::{
    AnimationProfile, CustomObject, Effect, Expr, FunctionCall, LayoutFn, ObjectRef, ObjectSpec, PredicateRule, Prefab,
    ProfileError, PropRef, Property, PropertyMap, Setting, Shape, SpecValue, Value,
};

type Result<T> = std::result::Result<T, ProfileError>;

fn invalid(pos: Pos, message: impl Into<String>) -> ProfileError {
    ProfileError::Invalid {
        message: message.into(),
        pos,
    }
}

fn bad_settings(pos: Pos, message: impl Into<String>) -> ProfileError {
    ProfileError::BadSettings {
        message: message.into(),
        pos,
    }
}

fn parse_property(e: &SExpr, keyword: bool) -> Result<Property> {
    let raw = e.atom().ok_or_else(|| invalid(e.pos, "expected a property name"))?;
    let name = if keyword {
        raw.strip_prefix(':')
            .ok_or_else(|| invalid(e.pos, format!("expected :property, found {raw}")))?
    } else {
        raw
    };
    Property::from_name(name).ok_or_else(|| ProfileError::UnknownProperty {
        name: name.to_string(),
        pos: e.pos,
    })
}

fn text_of(e: &SExpr) -> Option<&str> {
    match &e.kind {
        SExprKind::Atom(a) | SExprKind::Str(a) => Some(a),
        SExprKind::List(_) => None,
    }
}

fn parse_int(e: &SExpr) -> Option<i64> {
    e.atom()?.parse().ok()
}

fn parse_color(e: &SExpr) -> Result<Rgb> {
    let text = text_of(e).ok_or_else(|| invalid(e.pos, "expected a color"))?;
    Rgb::parse(text).ok_or_else(|| ProfileError::BadColor {
        text: text.to_string(),
        pos: e.pos,
    })
}

/// Literal value for `property`; `null` only where the property allows it.
fn parse_literal(property: Property, e: &SExpr) -> Result<Value> {
    let wrong = |what: &str| invalid(e.pos, format!("{property} expects {what}"));
    match property {
        Property::X | Property::Y => {
            if e.atom().is_some_and(|a| a.eq_ignore_ascii_case("null")) {
                Ok(Value::Null)
            } else {
                parse_int(e).map(Value::Int).ok_or_else(|| wrong("an integer or null"))
            }
        }
        Property::Width | Property::Height => match parse_int(e) {
            Some(v) if v > 0 => Ok(Value::Int(v)),
            _ => Err(wrong("a positive integer")),
        },
        Property::Depth => parse_int(e).map(Value::Int).ok_or_else(|| wrong("an integer")),
        Property::Color => parse_color(e).map(Value::Color),
        Property::ShowName => match e.atom().map(str::to_ascii_lowercase).as_deref() {
            Some("true") => Ok(Value::Bool(true)),
            Some("false") => Ok(Value::Bool(false)),
            _ => Err(wrong("true or false")),
        },
        Property::Label => text_of(e)
            .map(|t| Value::Text(t.to_string()))
            .ok_or_else(|| wrong("text")),
        Property::PrefabImage => {
            let text = text_of(e).ok_or_else(|| wrong("a shape name or base64 image"))?;
            if matches!(e.kind, SExprKind::Atom(_)) {
                match text.to_ascii_lowercase().as_str() {
                    "rectangle" => return Ok(Value::Image(Prefab::Builtin(Shape::Rectangle))),
                    "ellipse" => return Ok(Value::Image(Prefab::Builtin(Shape::Ellipse))),
                    _ => {}
                }
            }
            base64::engine::general_purpose::STANDARD
                .decode(text)
                .map_err(|err| invalid(e.pos, format!("prefabimage is not valid base64: {err}")))?;
            Ok(Value::Image(Prefab::Base64(text.to_string())))
        }
    }
}

fn parse_spec_value(property: Property, e: &SExpr) -> Result<SpecValue> {
    if property == Property::Color && e.atom().is_some_and(|a| a.eq_ignore_ascii_case("random")) {
        return Ok(SpecValue::RandomColor);
    }
    parse_literal(property, e).map(SpecValue::Value)
}

/// `(:prop value)…`
fn parse_property_list(items: &[SExpr]) -> Result<PropertyMap> {
    let mut props = PropertyMap::new();
    for item in items {
        let pair = item.expect_list("(:property value)")?;
        let [key, value] = pair else {
            return Err(invalid(item.pos, "expected (:property value)"));
        };
        let property = parse_property(key, true)?;
        let v = parse_spec_value(property, value)?;
        if props.insert(property, v).is_some() {
            return Err(ProfileError::Duplicate {
                kind: "property",
                name: property.to_string(),
                pos: key.pos,
            });
        }
    }
    Ok(props)
}

fn parse_object_ref(e: &SExpr) -> Result<ObjectRef> {
    let name = e.expect_ident("an object reference")?;
    Ok(match name.strip_prefix('?') {
        Some(v) => ObjectRef::Var(v.to_string()),
        None => ObjectRef::Name(name),
    })
}

fn parse_prop_ref(e: &SExpr) -> Result<PropRef> {
    let items = e.expect_list("(<object> <property>)")?;
    let [obj, prop] = items else {
        return Err(invalid(e.pos, "expected (<object> <property>)"));
    };
    Ok(PropRef {
        object: parse_object_ref(obj)?,
        property: parse_property(prop, false)?,
    })
}

fn parse_expr(expected: Property, e: &SExpr) -> Result<Expr> {
    if let Some((head, args)) = e.head() {
        if head == "add" {
            if !expected.is_numeric() {
                return Err(invalid(e.pos, format!("add cannot produce a value for {expected}")));
            }
            if args.len() < 2 {
                return Err(invalid(e.pos, "add takes at least two operands"));
            }
            let ops = args
                .iter()
                .map(|a| parse_expr(Property::Depth, a))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Expr::Add(ops));
        }
        let items = e.list().unwrap_or_default();
        let is_ref = items.len() == 2 && items[1].atom().and_then(Property::from_name).is_some();
        if !is_ref {
            return Err(invalid(
                e.pos,
                format!("unsupported expression ({head} ...); only add and (<object> <property>) are available"),
            ));
        }
        let r = parse_prop_ref(e)?;
        let compatible = if expected.is_numeric() {
            r.property.is_numeric()
        } else {
            r.property == expected
        };
        if !compatible {
            return Err(invalid(
                e.pos,
                format!("{} cannot be used where {expected} is expected", r.property),
            ));
        }
        return Ok(Expr::Prop(r));
    }
    if e.list().is_some() {
        return Err(invalid(e.pos, "empty expression"));
    }
    if expected == Property::Depth {
        // operand of add
        return parse_int(e)
            .map(|i| Expr::Literal(Value::Int(i)))
            .ok_or_else(|| invalid(e.pos, "add operands must be integers"));
    }
    parse_literal(expected, e).map(Expr::Literal)
}

fn setting_kind(function: LayoutFn, key: &str) -> Option<fn(&SExpr) -> Result<Setting>> {
    fn int_nonneg(e: &SExpr) -> Result<Setting> {
        match parse_int(e) {
            Some(v) if v >= 0 => Ok(Setting::Int(v)),
            _ => Err(bad_settings(e.pos, "expected a non-negative integer")),
        }
    }
    fn int_any(e: &SExpr) -> Result<Setting> {
        parse_int(e)
            .map(Setting::Int)
            .ok_or_else(|| bad_settings(e.pos, "expected an integer"))
    }
    fn int_positive(e: &SExpr) -> Result<Setting> {
        match parse_int(e) {
            Some(v) if v > 0 => Ok(Setting::Int(v)),
            _ => Err(bad_settings(e.pos, "expected a positive integer")),
        }
    }
    fn scale(e: &SExpr) -> Result<Setting> {
        let text = e.atom().ok_or_else(|| bad_settings(e.pos, "expected a number"))?;
        let v = match text.split_once('/') {
            Some((n, d)) => {
                let n: f64 = n.parse().map_err(|_| bad_settings(e.pos, "bad numerator"))?;
                let d: f64 = d.parse().map_err(|_| bad_settings(e.pos, "bad denominator"))?;
                n / d
            }
            None => text.parse().map_err(|_| bad_settings(e.pos, "expected a number"))?,
        };
        if v > 0.0 && v < 1.0 {
            Ok(Setting::Number(v))
        } else {
            Err(bad_settings(e.pos, "scale must lie strictly between 0 and 1"))
        }
    }
    fn color(e: &SExpr) -> Result<Setting> {
        parse_color(e).map(Setting::Color)
    }
    use LayoutFn::*;
    match (function, key) {
        (DistributeX | DistributeY, "spacebtwn") => Some(int_nonneg),
        (DistributeGridAroundPoint, "spacebtwn") => Some(int_nonneg),
        (DistributeGridAroundPoint, "x" | "y") => Some(int_any),
        (DistributeGridAroundPoint, "columns") => Some(int_positive),
        (ApplySmaller, "scale") => Some(scale),
        (DrawLine, "color") => Some(color),
        _ => None,
    }
}

fn required_settings(function: LayoutFn) -> &'static [&'static str] {
    match function {
        LayoutFn::DistributeGridAroundPoint => &["x", "y"],
        _ => &[],
    }
}

fn parse_function_call(e: &SExpr) -> Result<FunctionCall> {
    let (head, args) = e
        .head()
        .ok_or_else(|| invalid(e.pos, "expected (function <name> (objects ...) (settings ...))"))?;
    if head != "function" {
        return Err(invalid(e.pos, "expected (function <name> ...)"));
    }
    let name_expr = args.first().ok_or_else(|| invalid(e.pos, "missing function name"))?;
    let fname = name_expr.expect_ident("a function name")?;
    let function = LayoutFn::from_name(&fname).ok_or(ProfileError::UnknownFunction {
        name: fname,
        pos: name_expr.pos,
    })?;
    let mut objects = None;
    let mut settings = BTreeMap::new();
    for part in &args[1..] {
        let (kind, items) = part
            .head()
            .ok_or_else(|| invalid(part.pos, "expected (objects ...) or (settings ...)"))?;
        match kind.as_str() {
            "objects" => {
                if objects.is_some() {
                    return Err(invalid(part.pos, "duplicate (objects ...)"));
                }
                let refs = items.iter().map(parse_object_ref).collect::<Result<Vec<_>>>()?;
                if refs.is_empty() {
                    return Err(invalid(part.pos, "(objects ...) must name at least one object"));
                }
                objects = Some(refs);
            }
            "settings" => {
                for s in items {
                    let pair = s.list().ok_or_else(|| bad_settings(s.pos, "expected (key value)"))?;
                    let [k, v] = pair else {
                        return Err(bad_settings(s.pos, "expected (key value)"));
                    };
                    let key = k.expect_ident("a setting name")?;
                    let parse = setting_kind(function, &key)
                        .ok_or_else(|| bad_settings(k.pos, format!("{function} has no setting {key}")))?;
                    if settings.insert(key.clone(), parse(v)?).is_some() {
                        return Err(bad_settings(k.pos, format!("duplicate setting {key}")));
                    }
                }
            }
            other => return Err(invalid(part.pos, format!("unexpected ({other} ...) in function call"))),
        }
    }
    let objects = objects.ok_or_else(|| invalid(e.pos, "missing (objects ...)"))?;
    for req in required_settings(function) {
        if !settings.contains_key(*req) {
            return Err(bad_settings(e.pos, format!("{function} requires setting {req}")));
        }
    }
    Ok(FunctionCall {
        function,
        objects,
        settings,
    })
}

fn parse_effect(e: &SExpr, out: &mut Vec<Effect>) -> Result<()> {
    let (head, args) = e
        .head()
        .ok_or_else(|| invalid(e.pos, "expected (equal ...) or (assign ...)"))?;
    match head.as_str() {
        "and" => {
            for a in args {
                parse_effect(a, out)?;
            }
        }
        "equal" => {
            let [target, expr] = args else {
                return Err(invalid(e.pos, "equal takes a target and an expression"));
            };
            let target = parse_prop_ref(target)?;
            let expr = parse_expr(target.property, expr)?;
            out.push(Effect::Equal { target, expr });
        }
        "assign" => {
            let [target, call] = args else {
                return Err(invalid(e.pos, "assign takes a target and a function call"));
            };
            let target = parse_prop_ref(target)?;
            let call = parse_function_call(call)?;
            if !call.function.allows_target(target.property) {
                return Err(invalid(
                    e.pos,
                    format!("{} cannot be assigned to {}", call.function, target.property),
                ));
            }
            out.push(Effect::Assign { target, call });
        }
        other => return Err(invalid(e.pos, format!("unknown effect {other}"))),
    }
    Ok(())
}

fn parse_rule(items: &[SExpr], pos: Pos) -> Result<PredicateRule> {
    let predicate = items
        .first()
        .ok_or_else(|| invalid(pos, "missing predicate name"))?
        .expect_ident("a predicate name")?;
    let mut params = None;
    let mut effects = Vec::new();
    let mut i = 1;
    while i < items.len() {
        let key = items[i].expect_ident("a rule keyword")?;
        match key.as_str() {
            ":parameters" => {
                let list = items
                    .get(i + 1)
                    .ok_or_else(|| invalid(items[i].pos, "missing parameter list"))?
                    .expect_list("a parameter list")?;
                let mut vars: Vec<String> = Vec::new();
                for v in list {
                    let name = v.expect_ident("a ?variable")?;
                    let var = name
                        .strip_prefix('?')
                        .ok_or_else(|| invalid(v.pos, format!("expected a ?variable, found {name}")))?;
                    if vars.iter().any(|x| x == var) {
                        return Err(ProfileError::Duplicate {
                            kind: "parameter",
                            name,
                            pos: v.pos,
                        });
                    }
                    vars.push(var.to_string());
                }
                params = Some(vars);
                i += 2;
            }
            ":effects" => {
                // everything up to the next keyword is an effect
                i += 1;
                while i < items.len() && items[i].atom().is_none() {
                    if items[i].list().is_some_and(|l| l.is_empty()) {
                        i += 1;
                        continue;
                    }
                    parse_effect(&items[i], &mut effects)?;
                    i += 1;
                }
            }
            other => return Err(invalid(items[i].pos, format!("unexpected {other} in predicate rule"))),
        }
    }
    Ok(PredicateRule {
        predicate,
        params: params.ok_or_else(|| invalid(pos, "missing :parameters"))?,
        effects,
    })
}

/// Parses an animation profile.
pub fn parse_profile(source: &str) -> Result<AnimationProfile> {
    let top = sexpr::parse_one(source)?;
    let items = top.expect_list("(define (animation <name>) ...)")?;
    if !items.first().is_some_and(|e| e.is_keyword("define")) {
        return Err(invalid(top.pos, "expected (define (animation <name>) ...)"));
    }
    let header = items
        .get(1)
        .and_then(SExpr::list)
        .filter(|h| h.len() == 2 && h[0].is_keyword("animation"))
        .ok_or_else(|| invalid(top.pos, "expected (animation <name>) header"))?;
    let mut profile = AnimationProfile {
        name: header[1].expect_ident("a profile name")?,
        object_specs: Vec::new(),
        custom_objects: Vec::new(),
        rules: Vec::new(),
    };
    for section in &items[2..] {
        let (head, args) = section
            .head()
            .ok_or_else(|| invalid(section.pos, "expected a (:section ...)"))?;
        match head.as_str() {
            ":objects" | ":custom" => {
                for entry in args {
                    let (name, props) = entry
                        .head()
                        .ok_or_else(|| invalid(entry.pos, "expected (<name> (:property value)...)"))?;
                    let properties = parse_property_list(props)?;
                    if head == ":objects" {
                        if profile.spec(&name).is_some() {
                            return Err(ProfileError::Duplicate {
                                kind: "object spec",
                                name,
                                pos: entry.pos,
                            });
                        }
                        profile.object_specs.push(ObjectSpec {
                            target: name,
                            properties,
                        });
                    } else {
                        if profile.custom(&name).is_some() {
                            return Err(ProfileError::Duplicate {
                                kind: "custom object",
                                name,
                                pos: entry.pos,
                            });
                        }
                        profile.custom_objects.push(CustomObject { name, properties });
                    }
                }
            }
            ":predicate" => {
                let rule = parse_rule(args, section.pos)?;
                if profile.rule(&rule.predicate).is_some() {
                    return Err(ProfileError::Duplicate {
                        kind: "rule for predicate",
                        name: rule.predicate,
                        pos: section.pos,
                    });
                }
                profile.rules.push(rule);
            }
            other => return Err(invalid(section.pos, format!("unknown section {other}"))),
        }
    }
    Ok(profile)
}
