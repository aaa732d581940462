//! PDDL front end for the STRIPS + typing (+ equality) fragment.
//!
//! Identifiers are lowercased at parse time, so every name in the ASTs below
//! is already in canonical form. The `Display` impls print valid PDDL that
//! parses back to an identical AST.

mod parse;
mod plan_text;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::sexpr::{Pos, SyntaxError};

pub use parse::{parse_domain, parse_problem};
pub use plan_text::{parse_plan, parse_step, PlanParseError, PlanStep, PlanText};

/// Root of every type hierarchy.
pub const OBJECT_TYPE: &str = "object";

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Requirement {
    Strips,
    Typing,
    Equality,
}

impl Requirement {
    pub fn from_flag(flag: &str) -> Option<Self> {
        match flag {
            ":strips" => Some(Requirement::Strips),
            ":typing" => Some(Requirement::Typing),
            ":equality" => Some(Requirement::Equality),
            _ => None,
        }
    }

    pub fn flag(self) -> &'static str {
        match self {
            Requirement::Strips => ":strips",
            Requirement::Typing => ":typing",
            Requirement::Equality => ":equality",
        }
    }
}

/// A ground atom such as `(on a b)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub predicate: String,
    pub args: Vec<String>,
}

impl Atom {
    pub fn new<S: Into<String>>(predicate: impl Into<String>, args: impl IntoIterator<Item = S>) -> Self {
        Atom {
            predicate: predicate.into(),
            args: args.into_iter().map(Into::into).collect(),
        }
    }

    pub fn mentions(&self, object: &str) -> bool {
        self.args.iter().any(|a| a == object)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A term inside an action schema: a parameter variable (stored without the
/// leading `?`) or a constant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(String),
    Const(String),
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "?{v}"),
            Term::Const(c) => f.write_str(c),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AtomSchema {
    pub predicate: String,
    pub args: Vec<Term>,
}

impl fmt::Display for AtomSchema {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.predicate)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Literal {
    Pos(AtomSchema),
    Eq(Term, Term),
    NotEq(Term, Term),
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Pos(a) => write!(f, "{a}"),
            Literal::Eq(a, b) => write!(f, "(= {a} {b})"),
            Literal::NotEq(a, b) => write!(f, "(not (= {a} {b}))"),
        }
    }
}

/// Ordered `(variable, type)` list; variables stored without `?`.
pub type Params = Vec<(String, String)>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredicateSchema {
    pub name: String,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ActionSchema {
    pub name: String,
    pub params: Params,
    pub precondition: Vec<Literal>,
    pub add_effects: Vec<AtomSchema>,
    pub del_effects: Vec<AtomSchema>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DomainAst {
    pub name: String,
    pub requirements: BTreeSet<Requirement>,
    /// type -> parent type; `object` itself is not a key.
    pub type_hierarchy: BTreeMap<String, String>,
    /// constant -> type
    pub constants: BTreeMap<String, String>,
    pub predicates: Vec<PredicateSchema>,
    pub actions: Vec<ActionSchema>,
}

impl DomainAst {
    pub fn predicate(&self, name: &str) -> Option<&PredicateSchema> {
        self.predicates.iter().find(|p| p.name == name)
    }

    pub fn action(&self, name: &str) -> Option<&ActionSchema> {
        self.actions.iter().find(|a| a.name == name)
    }

    pub fn is_type(&self, name: &str) -> bool {
        name == OBJECT_TYPE || self.type_hierarchy.contains_key(name)
    }

    /// True when `ty` equals `ancestor` or inherits from it.
    pub fn is_subtype(&self, ty: &str, ancestor: &str) -> bool {
        if ancestor == OBJECT_TYPE {
            return true;
        }
        let mut cur = ty;
        loop {
            if cur == ancestor {
                return true;
            }
            match self.type_hierarchy.get(cur) {
                Some(parent) => cur = parent,
                None => return false,
            }
        }
    }

    /// `ty` followed by its ancestors, ending at `object`.
    pub fn type_chain(&self, ty: &str) -> Vec<String> {
        let mut chain = vec![ty.to_string()];
        let mut cur = ty;
        while let Some(parent) = self.type_hierarchy.get(cur) {
            chain.push(parent.clone());
            cur = parent;
        }
        if chain.last().map(String::as_str) != Some(OBJECT_TYPE) {
            chain.push(OBJECT_TYPE.to_string());
        }
        chain
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProblemAst {
    pub name: String,
    pub domain_name: String,
    /// object -> type, including the domain's constants.
    pub objects: BTreeMap<String, String>,
    pub init: BTreeSet<Atom>,
    /// Positive conjunction, source order, duplicates removed.
    pub goal: Vec<Atom>,
}

impl ProblemAst {
    pub fn goal_set(&self) -> BTreeSet<Atom> {
        self.goal.iter().cloned().collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PddlError {
    #[error("syntax error at {0}")]
    Syntax(#[from] SyntaxError),
    #[error("{pos}: unsupported requirement {flag}")]
    UnsupportedRequirement { flag: String, pos: Pos },
    #[error("{pos}: unsupported construct: {what}")]
    Unsupported { what: String, pos: Pos },
    #[error("{pos}: undeclared type {name}")]
    UndeclaredType { name: String, pos: Pos },
    #[error("type hierarchy contains a cycle through {name}")]
    TypeCycle { name: String },
    #[error("{pos}: duplicate {kind} {name}")]
    Duplicate { kind: &'static str, name: String, pos: Pos },
    #[error("{pos}: undeclared object {name}")]
    UndeclaredObject { name: String, pos: Pos },
    #[error("{pos}: unknown predicate {name}")]
    UnknownPredicate { name: String, pos: Pos },
    #[error("{pos}: {predicate} expects {expected} arguments, found {found}")]
    Arity {
        predicate: String,
        expected: usize,
        found: usize,
        pos: Pos,
    },
    #[error("{pos}: object {object} has type {found}, expected {expected}")]
    TypeMismatch {
        object: String,
        expected: String,
        found: String,
        pos: Pos,
    },
    #[error("{pos}: variable ?{var} is not a parameter of {context}")]
    UnboundVariable { var: String, context: String, pos: Pos },
    #[error("action {action}: {atom} is both added and deleted")]
    AddDelOverlap { action: String, atom: String },
    #[error("{pos}: {message}")]
    Invalid { message: String, pos: Pos },
}

fn write_params(f: &mut fmt::Formatter<'_>, params: &Params, typed: bool) -> fmt::Result {
    for (i, (v, t)) in params.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "?{v}")?;
        if typed {
            write!(f, " - {t}")?;
        }
    }
    Ok(())
}

fn write_typed_names(f: &mut fmt::Formatter<'_>, names: &BTreeMap<String, String>, typed: bool) -> fmt::Result {
    for (name, ty) in names {
        if typed {
            write!(f, " {name} - {ty}")?;
        } else {
            write!(f, " {name}")?;
        }
    }
    Ok(())
}

impl fmt::Display for DomainAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let typed = self.requirements.contains(&Requirement::Typing);
        writeln!(f, "(define (domain {})", self.name)?;
        if !self.requirements.is_empty() {
            f.write_str("  (:requirements")?;
            for r in &self.requirements {
                write!(f, " {}", r.flag())?;
            }
            writeln!(f, ")")?;
        }
        if !self.type_hierarchy.is_empty() {
            f.write_str("  (:types")?;
            for (t, p) in &self.type_hierarchy {
                write!(f, " {t} - {p}")?;
            }
            writeln!(f, ")")?;
        }
        if !self.constants.is_empty() {
            f.write_str("  (:constants")?;
            write_typed_names(f, &self.constants, typed)?;
            writeln!(f, ")")?;
        }
        f.write_str("  (:predicates")?;
        for p in &self.predicates {
            write!(f, " ({}", p.name)?;
            if !p.params.is_empty() {
                f.write_str(" ")?;
                write_params(f, &p.params, typed)?;
            }
            f.write_str(")")?;
        }
        writeln!(f, ")")?;
        for a in &self.actions {
            writeln!(f, "  (:action {}", a.name)?;
            f.write_str("    :parameters (")?;
            write_params(f, &a.params, typed)?;
            writeln!(f, ")")?;
            f.write_str("    :precondition (and")?;
            for l in &a.precondition {
                write!(f, " {l}")?;
            }
            writeln!(f, ")")?;
            f.write_str("    :effect (and")?;
            for e in &a.add_effects {
                write!(f, " {e}")?;
            }
            for e in &a.del_effects {
                write!(f, " (not {e})")?;
            }
            writeln!(f, "))")?;
        }
        writeln!(f, ")")
    }
}

impl fmt::Display for ProblemAst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "(define (problem {})", self.name)?;
        writeln!(f, "  (:domain {})", self.domain_name)?;
        f.write_str("  (:objects")?;
        write_typed_names(f, &self.objects, true)?;
        writeln!(f, ")")?;
        f.write_str("  (:init")?;
        for a in &self.init {
            write!(f, " {a}")?;
        }
        writeln!(f, ")")?;
        f.write_str("  (:goal (and")?;
        for a in &self.goal {
            write!(f, " {a}")?;
        }
        writeln!(f, ")))")
    }
}
