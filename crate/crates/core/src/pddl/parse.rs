use std::collections::{BTreeMap, BTreeSet};

use crate::sexpr::{self, Pos, SExpr, SExprKind};

use super::{
    ActionSchema, Atom, AtomSchema, DomainAst, Literal, Params, PddlError, PredicateSchema, ProblemAst, Requirement,
    Term, OBJECT_TYPE,
};

type Result<T> = std::result::Result<T, PddlError>;

fn invalid(pos: Pos, message: impl Into<String>) -> PddlError {
    PddlError::Invalid {
        message: message.into(),
        pos,
    }
}

fn unsupported(pos: Pos, what: impl Into<String>) -> PddlError {
    PddlError::Unsupported { what: what.into(), pos }
}

/// Splits `(define (<kind> <name>) section…)` into the name and its sections.
fn split_define<'a>(top: &'a SExpr, kind: &str) -> Result<(String, &'a [SExpr])> {
    let items = top.expect_list("(define ...)")?;
    if !items.first().is_some_and(|e| e.is_keyword("define")) {
        return Err(invalid(top.pos, "expected (define ...)"));
    }
    let header = items
        .get(1)
        .ok_or_else(|| invalid(top.pos, format!("missing ({kind} <name>)")))?;
    let hitems = header.expect_list(&format!("({kind} <name>)"))?;
    if hitems.len() != 2 || !hitems[0].is_keyword(kind) {
        return Err(invalid(header.pos, format!("expected ({kind} <name>)")));
    }
    let name = hitems[1].expect_ident("a name")?;
    Ok((name, &items[2..]))
}

/// A flat `a b - t c - u d` list. Names without a trailing type get `object`.
fn parse_typed_list(items: &[SExpr]) -> Result<Vec<(String, String, Pos)>> {
    let mut out = Vec::new();
    let mut pending: Vec<(String, Pos)> = Vec::new();
    let mut i = 0;
    while i < items.len() {
        let item = &items[i];
        if item.atom() == Some("-") {
            let ty_expr = items
                .get(i + 1)
                .ok_or_else(|| invalid(item.pos, "missing type after '-'"))?;
            if ty_expr.head().is_some_and(|(h, _)| h == "either") {
                return Err(unsupported(ty_expr.pos, "either types"));
            }
            let ty = ty_expr.expect_ident("a type name")?;
            if pending.is_empty() {
                return Err(invalid(item.pos, "'-' without preceding names"));
            }
            for (n, p) in pending.drain(..) {
                out.push((n, ty.clone(), p));
            }
            i += 2;
        } else {
            pending.push((item.expect_ident("a name")?, item.pos));
            i += 1;
        }
    }
    for (n, p) in pending {
        out.push((n, OBJECT_TYPE.to_string(), p));
    }
    Ok(out)
}

fn parse_params(items: &[SExpr], domain_types: &dyn Fn(&str) -> bool) -> Result<Params> {
    let mut seen = BTreeSet::new();
    let mut params = Vec::new();
    for (name, ty, pos) in parse_typed_list(items)? {
        let Some(var) = name.strip_prefix('?') else {
            return Err(invalid(pos, format!("expected a ?variable, found {name}")));
        };
        if !domain_types(&ty) {
            return Err(PddlError::UndeclaredType { name: ty, pos });
        }
        if !seen.insert(var.to_string()) {
            return Err(PddlError::Duplicate {
                kind: "parameter",
                name: format!("?{var}"),
                pos,
            });
        }
        params.push((var.to_string(), ty));
    }
    Ok(params)
}

fn parse_term(e: &SExpr) -> Result<Term> {
    let s = e.expect_ident("a term")?;
    Ok(match s.strip_prefix('?') {
        Some(v) => Term::Var(v.to_string()),
        None => Term::Const(s),
    })
}

struct SchemaCtx<'a> {
    domain: &'a DomainAst,
    params: &'a Params,
    action: &'a str,
}

impl SchemaCtx<'_> {
    fn check_term(&self, t: &Term, pos: Pos) -> Result<()> {
        match t {
            Term::Var(v) => {
                if self.params.iter().any(|(p, _)| p == v) {
                    Ok(())
                } else {
                    Err(PddlError::UnboundVariable {
                        var: v.clone(),
                        context: format!("action {}", self.action),
                        pos,
                    })
                }
            }
            Term::Const(c) => {
                if self.domain.constants.contains_key(c) {
                    Ok(())
                } else {
                    Err(PddlError::UndeclaredObject { name: c.clone(), pos })
                }
            }
        }
    }

    fn atom(&self, e: &SExpr) -> Result<AtomSchema> {
        let (pred, args) = e
            .head()
            .ok_or_else(|| invalid(e.pos, "expected an atom (<predicate> <term>...)"))?;
        let schema = self
            .domain
            .predicate(&pred)
            .ok_or_else(|| PddlError::UnknownPredicate {
                name: pred.clone(),
                pos: e.pos,
            })?;
        if schema.params.len() != args.len() {
            return Err(PddlError::Arity {
                predicate: pred,
                expected: schema.params.len(),
                found: args.len(),
                pos: e.pos,
            });
        }
        let mut terms = Vec::with_capacity(args.len());
        for a in args {
            let t = parse_term(a)?;
            self.check_term(&t, a.pos)?;
            terms.push(t);
        }
        Ok(AtomSchema {
            predicate: pred,
            args: terms,
        })
    }

    fn equality(&self, args: &[SExpr], pos: Pos) -> Result<(Term, Term)> {
        if args.len() != 2 {
            return Err(invalid(pos, "(= a b) takes exactly two terms"));
        }
        let a = parse_term(&args[0])?;
        let b = parse_term(&args[1])?;
        self.check_term(&a, args[0].pos)?;
        self.check_term(&b, args[1].pos)?;
        Ok((a, b))
    }

    fn precondition(&self, e: &SExpr, out: &mut Vec<Literal>) -> Result<()> {
        let (head, args) = e
            .head()
            .ok_or_else(|| invalid(e.pos, "expected a precondition formula"))?;
        match head.as_str() {
            "and" => {
                for a in args {
                    self.precondition(a, out)?;
                }
            }
            "=" => {
                let (a, b) = self.equality(args, e.pos)?;
                out.push(Literal::Eq(a, b));
            }
            "not" => {
                let inner = match args {
                    [inner] => inner,
                    _ => return Err(invalid(e.pos, "(not ...) takes one formula")),
                };
                match inner.head() {
                    Some((h, iargs)) if h == "=" => {
                        let (a, b) = self.equality(iargs, inner.pos)?;
                        out.push(Literal::NotEq(a, b));
                    }
                    _ => return Err(unsupported(e.pos, "negative precondition")),
                }
            }
            "or" | "imply" | "forall" | "exists" | "when" => {
                return Err(unsupported(e.pos, format!("'{head}' in precondition")));
            }
            _ => out.push(Literal::Pos(self.atom(e)?)),
        }
        Ok(())
    }

    fn effect(&self, e: &SExpr, add: &mut Vec<AtomSchema>, del: &mut Vec<AtomSchema>) -> Result<()> {
        let (head, args) = e.head().ok_or_else(|| invalid(e.pos, "expected an effect formula"))?;
        match head.as_str() {
            "and" => {
                for a in args {
                    self.effect(a, add, del)?;
                }
            }
            "not" => match args {
                [inner] => del.push(self.atom(inner)?),
                _ => return Err(invalid(e.pos, "(not ...) takes one atom")),
            },
            "when" | "forall" | "increase" | "decrease" | "assign" | "scale-up" | "scale-down" => {
                return Err(unsupported(e.pos, format!("'{head}' in effect")));
            }
            _ => add.push(self.atom(e)?),
        }
        Ok(())
    }
}

fn push_unique<T: PartialEq>(v: &mut Vec<T>, item: T) {
    if !v.contains(&item) {
        v.push(item);
    }
}

fn parse_action(domain: &DomainAst, items: &[SExpr], pos: Pos) -> Result<ActionSchema> {
    let name = items
        .first()
        .ok_or_else(|| invalid(pos, "missing action name"))?
        .expect_ident("an action name")?;
    let is_type = |t: &str| domain.is_type(t);
    let mut params = Vec::new();
    let mut pre_expr = None;
    let mut eff_expr = None;
    let mut i = 1;
    while i < items.len() {
        let key = items[i].expect_ident("an action keyword")?;
        let value = items
            .get(i + 1)
            .ok_or_else(|| invalid(items[i].pos, format!("missing value for {key}")))?;
        match key.as_str() {
            ":parameters" => params = parse_params(value.expect_list("a parameter list")?, &is_type)?,
            ":precondition" => pre_expr = Some(value),
            ":effect" => eff_expr = Some(value),
            _ => return Err(unsupported(items[i].pos, format!("action keyword {key}"))),
        }
        i += 2;
    }
    let ctx = SchemaCtx {
        domain,
        params: &params,
        action: &name,
    };
    let mut precondition = Vec::new();
    if let Some(e) = pre_expr {
        // `()` is an empty precondition
        if e.list().is_some_and(|l| !l.is_empty()) {
            ctx.precondition(e, &mut precondition)?;
        }
    }
    let mut add = Vec::new();
    let mut del = Vec::new();
    if let Some(e) = eff_expr {
        if e.list().is_some_and(|l| !l.is_empty()) {
            ctx.effect(e, &mut add, &mut del)?;
        }
    }
    let mut add_effects = Vec::new();
    for a in add {
        push_unique(&mut add_effects, a);
    }
    let mut del_effects = Vec::new();
    for d in del {
        push_unique(&mut del_effects, d);
    }
    let mut pre_dedup = Vec::new();
    for l in precondition {
        push_unique(&mut pre_dedup, l);
    }
    if let Some(a) = add_effects.iter().find(|a| del_effects.contains(a)) {
        return Err(PddlError::AddDelOverlap {
            action: name,
            atom: a.to_string(),
        });
    }
    Ok(ActionSchema {
        name,
        params,
        precondition: pre_dedup,
        add_effects,
        del_effects,
    })
}

fn parse_requirements(items: &[SExpr]) -> Result<BTreeSet<Requirement>> {
    let mut reqs = BTreeSet::new();
    for r in items {
        let flag = r.expect_ident("a requirement flag")?;
        match Requirement::from_flag(&flag) {
            Some(req) => {
                reqs.insert(req);
            }
            None => return Err(PddlError::UnsupportedRequirement { flag, pos: r.pos }),
        }
    }
    Ok(reqs)
}

fn check_type_cycles(hierarchy: &BTreeMap<String, String>) -> Result<()> {
    for start in hierarchy.keys() {
        let mut cur = start.as_str();
        let mut steps = 0;
        while let Some(parent) = hierarchy.get(cur) {
            steps += 1;
            if parent == start || steps > hierarchy.len() {
                return Err(PddlError::TypeCycle { name: start.clone() });
            }
            cur = parent;
        }
    }
    Ok(())
}

/// Parses a domain file.
pub fn parse_domain(source: &str) -> Result<DomainAst> {
    let top = sexpr::parse_one(source)?;
    let (name, sections) = split_define(&top, "domain")?;
    let mut domain = DomainAst {
        name,
        requirements: BTreeSet::new(),
        type_hierarchy: BTreeMap::new(),
        constants: BTreeMap::new(),
        predicates: Vec::new(),
        actions: Vec::new(),
    };
    // Actions refer to predicates and constants, so collect those first.
    let mut action_sections = Vec::new();
    for section in sections {
        let (head, args) = section
            .head()
            .ok_or_else(|| invalid(section.pos, "expected a (:section ...)"))?;
        match head.as_str() {
            ":requirements" => domain.requirements.extend(parse_requirements(args)?),
            ":types" => {
                for (t, parent, pos) in parse_typed_list(args)? {
                    if t == OBJECT_TYPE {
                        continue;
                    }
                    if domain.type_hierarchy.contains_key(&t) {
                        return Err(PddlError::Duplicate {
                            kind: "type",
                            name: t,
                            pos,
                        });
                    }
                    domain.type_hierarchy.insert(t, parent);
                }
            }
            ":constants" => {
                for (c, ty, pos) in parse_typed_list(args)? {
                    if domain.constants.insert(c.clone(), ty).is_some() {
                        return Err(PddlError::Duplicate {
                            kind: "constant",
                            name: c,
                            pos,
                        });
                    }
                }
            }
            ":predicates" => {
                for p in args {
                    let (pname, pargs) = p
                        .head()
                        .ok_or_else(|| invalid(p.pos, "expected (<predicate> ?param...)"))?;
                    if domain.predicate(&pname).is_some() {
                        return Err(PddlError::Duplicate {
                            kind: "predicate",
                            name: pname,
                            pos: p.pos,
                        });
                    }
                    domain.predicates.push(PredicateSchema {
                        name: pname,
                        params: parse_params(pargs, &|_| true)?,
                    });
                }
            }
            ":action" => action_sections.push((args, section.pos)),
            ":functions" => return Err(unsupported(section.pos, "numeric fluents (:functions)")),
            ":derived" => return Err(unsupported(section.pos, "derived predicates")),
            ":durative-action" => return Err(unsupported(section.pos, "durative actions")),
            other => return Err(unsupported(section.pos, format!("domain section {other}"))),
        }
    }
    // parents mentioned only on the right of '-' are implicit children of object
    let implicit: Vec<String> = domain
        .type_hierarchy
        .values()
        .filter(|p| p.as_str() != OBJECT_TYPE && !domain.type_hierarchy.contains_key(*p))
        .cloned()
        .collect();
    for p in implicit {
        domain.type_hierarchy.insert(p, OBJECT_TYPE.to_string());
    }
    check_type_cycles(&domain.type_hierarchy)?;

    for ty in domain.constants.values() {
        if !domain.is_type(ty) {
            let pos = find_pos_of(sections, ty).unwrap_or_default();
            return Err(PddlError::UndeclaredType { name: ty.clone(), pos });
        }
    }
    let types = domain.type_hierarchy.clone();
    let is_type = |t: &str| t == OBJECT_TYPE || types.contains_key(t);
    for pred in &domain.predicates {
        if let Some((_, t)) = pred.params.iter().find(|(_, t)| !is_type(t)) {
            let pos = find_pos_of(sections, t).unwrap_or_default();
            return Err(PddlError::UndeclaredType { name: t.clone(), pos });
        }
    }
    for (args, pos) in action_sections {
        let action = parse_action(&domain, args, pos)?;
        if domain.action(&action.name).is_some() {
            return Err(PddlError::Duplicate {
                kind: "action",
                name: action.name,
                pos,
            });
        }
        domain.actions.push(action);
    }
    Ok(domain)
}

/// Position of the first atom spelling `name` (case-insensitive) in `exprs`.
fn find_pos_of(exprs: &[SExpr], name: &str) -> Option<Pos> {
    for e in exprs {
        match &e.kind {
            SExprKind::Atom(a) if a.eq_ignore_ascii_case(name) => return Some(e.pos),
            SExprKind::List(items) => {
                if let Some(p) = find_pos_of(items, name) {
                    return Some(p);
                }
            }
            _ => {}
        }
    }
    None
}

struct GroundCtx<'a> {
    domain: &'a DomainAst,
    objects: &'a BTreeMap<String, String>,
}

impl GroundCtx<'_> {
    fn atom(&self, e: &SExpr) -> Result<Atom> {
        let (pred, args) = e
            .head()
            .ok_or_else(|| invalid(e.pos, "expected a ground atom (<predicate> <object>...)"))?;
        let schema = self
            .domain
            .predicate(&pred)
            .ok_or_else(|| PddlError::UnknownPredicate {
                name: pred.clone(),
                pos: e.pos,
            })?;
        if schema.params.len() != args.len() {
            return Err(PddlError::Arity {
                predicate: pred,
                expected: schema.params.len(),
                found: args.len(),
                pos: e.pos,
            });
        }
        let mut names = Vec::with_capacity(args.len());
        for (a, (_, expected)) in args.iter().zip(&schema.params) {
            let obj = a.expect_ident("an object name")?;
            let ty = self.objects.get(&obj).ok_or_else(|| PddlError::UndeclaredObject {
                name: obj.clone(),
                pos: a.pos,
            })?;
            if !self.domain.is_subtype(ty, expected) {
                return Err(PddlError::TypeMismatch {
                    object: obj,
                    expected: expected.clone(),
                    found: ty.clone(),
                    pos: a.pos,
                });
            }
            names.push(obj);
        }
        Ok(Atom {
            predicate: pred,
            args: names,
        })
    }

    fn goal(&self, e: &SExpr, out: &mut Vec<Atom>) -> Result<()> {
        let (head, args) = e.head().ok_or_else(|| invalid(e.pos, "expected a goal formula"))?;
        match head.as_str() {
            "and" => {
                for a in args {
                    self.goal(a, out)?;
                }
                Ok(())
            }
            "not" | "or" | "imply" | "forall" | "exists" | "=" => Err(unsupported(
                e.pos,
                format!("'{head}' in goal (only positive conjunctions)"),
            )),
            _ => {
                push_unique(out, self.atom(e)?);
                Ok(())
            }
        }
    }
}

/// Parses a problem file against an already parsed domain.
pub fn parse_problem(source: &str, domain: &DomainAst) -> Result<ProblemAst> {
    let top = sexpr::parse_one(source)?;
    let (name, sections) = split_define(&top, "problem")?;
    let mut domain_name = None;
    let mut objects = domain.constants.clone();
    let mut init_exprs: &[SExpr] = &[];
    let mut goal_expr = None;
    for section in sections {
        let (head, args) = section
            .head()
            .ok_or_else(|| invalid(section.pos, "expected a (:section ...)"))?;
        match head.as_str() {
            ":domain" => {
                let d = args
                    .first()
                    .ok_or_else(|| invalid(section.pos, "missing domain name"))?
                    .expect_ident("a domain name")?;
                if d != domain.name {
                    return Err(invalid(
                        section.pos,
                        format!("problem is for domain {d}, but domain {} was given", domain.name),
                    ));
                }
                domain_name = Some(d);
            }
            ":requirements" => {
                parse_requirements(args)?;
            }
            ":objects" => {
                for (o, ty, pos) in parse_typed_list(args)? {
                    if !domain.is_type(&ty) {
                        return Err(PddlError::UndeclaredType { name: ty, pos });
                    }
                    match objects.get(&o) {
                        Some(existing) if *existing == ty && domain.constants.contains_key(&o) => {}
                        Some(_) => {
                            return Err(PddlError::Duplicate {
                                kind: "object",
                                name: o,
                                pos,
                            })
                        }
                        None => {
                            objects.insert(o, ty);
                        }
                    }
                }
            }
            ":init" => init_exprs = args,
            ":goal" => {
                goal_expr = Some(
                    args.first()
                        .ok_or_else(|| invalid(section.pos, "missing goal formula"))?,
                )
            }
            ":metric" => return Err(unsupported(section.pos, "metric specification")),
            other => return Err(unsupported(section.pos, format!("problem section {other}"))),
        }
    }
    let domain_name = domain_name.ok_or_else(|| invalid(top.pos, "missing (:domain <name>)"))?;
    let ctx = GroundCtx {
        domain,
        objects: &objects,
    };
    let mut init = BTreeSet::new();
    for e in init_exprs {
        match e.head() {
            Some((h, _)) if h == "not" || h == "=" => {
                return Err(unsupported(e.pos, format!("'{h}' in init")));
            }
            _ => {}
        }
        init.insert(ctx.atom(e)?);
    }
    let mut goal = Vec::new();
    if let Some(g) = goal_expr {
        if g.list().is_some_and(|l| !l.is_empty()) {
            ctx.goal(g, &mut goal)?;
        }
    }
    Ok(ProblemAst {
        name,
        domain_name,
        objects,
        init,
        goal,
    })
}
