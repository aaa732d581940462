use std::collections::BTreeSet;
use std::fmt;

use crate::pddl::{DomainAst, ProblemAst};

use super::{AnimationProfile, Effect, Expr, ObjectRef, PredicateRule};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
        }
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.severity {
            Severity::Error => write!(f, "error: {}", self.message),
            Severity::Warning => write!(f, "warning: {}", self.message),
        }
    }
}

struct Checker<'a> {
    problem: &'a ProblemAst,
    profile: &'a AnimationProfile,
    out: BTreeSet<Diagnostic>,
}

impl Checker<'_> {
    fn object_ref(&mut self, rule: &PredicateRule, r: &ObjectRef, context: &str) {
        match r {
            ObjectRef::Var(v) => {
                if rule.param_index(v).is_none() {
                    self.out.insert(Diagnostic::error(format!(
                        "rule {}: {context} uses ?{v}, which is not a rule parameter",
                        rule.predicate
                    )));
                }
            }
            ObjectRef::Name(n) => {
                if !self.problem.objects.contains_key(n) && self.profile.custom(n).is_none() {
                    self.out.insert(Diagnostic::error(format!(
                        "rule {}: {context} refers to unknown object {n}",
                        rule.predicate
                    )));
                }
            }
        }
    }

    fn expr(&mut self, rule: &PredicateRule, e: &Expr) {
        match e {
            Expr::Literal(_) => {}
            Expr::Prop(p) => self.object_ref(rule, &p.object, "an expression"),
            Expr::Add(ops) => {
                for o in ops {
                    self.expr(rule, o);
                }
            }
        }
    }

    fn effect(&mut self, rule: &PredicateRule, e: &Effect) {
        match e {
            Effect::Equal { target, expr } => {
                self.object_ref(rule, &target.object, "an equal target");
                self.expr(rule, expr);
            }
            Effect::Assign { target, call } => {
                self.object_ref(rule, &target.object, "an assign target");
                for o in &call.objects {
                    self.object_ref(rule, o, &format!("function {}", call.function));
                }
                if call.function.needs_reference() {
                    let context: BTreeSet<&ObjectRef> = if call.objects.contains(&target.object) {
                        call.objects.iter().filter(|o| **o != target.object).collect()
                    } else {
                        BTreeSet::from([&target.object])
                    };
                    if context.len() != 1 {
                        self.out.insert(Diagnostic::error(format!(
                            "rule {}: {} needs exactly one reference object besides the objects it places (found {})",
                            rule.predicate,
                            call.function,
                            context.len()
                        )));
                    }
                }
            }
        }
    }
}

/// Cross-checks a profile against the domain and problem it animates.
///
/// Returned diagnostics are sorted, errors first.
pub fn check_profile(profile: &AnimationProfile, domain: &DomainAst, problem: &ProblemAst) -> Vec<Diagnostic> {
    let mut c = Checker {
        problem,
        profile,
        out: BTreeSet::new(),
    };
    for rule in &profile.rules {
        match domain.predicate(&rule.predicate) {
            None => {
                c.out.insert(Diagnostic::error(format!(
                    "rule for unknown predicate {}",
                    rule.predicate
                )));
            }
            Some(schema) if schema.params.len() != rule.params.len() => {
                c.out.insert(Diagnostic::error(format!(
                    "rule {}: {} parameters, but the predicate takes {}",
                    rule.predicate,
                    rule.params.len(),
                    schema.params.len()
                )));
            }
            Some(_) => {}
        }
        for e in &rule.effects {
            c.effect(rule, e);
        }
    }
    for spec in &profile.object_specs {
        let t = &spec.target;
        if !problem.objects.contains_key(t) && !domain.is_type(t) && profile.custom(t).is_none() {
            c.out.insert(Diagnostic::error(format!(
                "object spec targets unknown object or type {t}"
            )));
        }
    }
    for custom in &profile.custom_objects {
        if problem.objects.contains_key(&custom.name) {
            c.out.insert(Diagnostic::error(format!(
                "custom object {} collides with a problem object",
                custom.name
            )));
        }
    }
    for pred in &domain.predicates {
        if profile.rule(&pred.name).is_none() {
            c.out.insert(Diagnostic::warning(format!(
                "predicate {} has no animation rule",
                pred.name
            )));
        }
    }
    c.out.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::{parse_domain, parse_problem};
    use crate::profile::parse_profile;

    fn bw() -> (DomainAst, ProblemAst) {
        let d = parse_domain(include_str!("../../fixtures/blocksworld/domain.pddl")).unwrap();
        let p = parse_problem(include_str!("../../fixtures/blocksworld/problem.pddl"), &d).unwrap();
        (d, p)
    }

    fn bw_profile_with(extra: &str) -> AnimationProfile {
        let base = include_str!("../../fixtures/blocksworld/animation.pddl");
        let cut = base.rfind(')').unwrap();
        parse_profile(&format!("{}{extra})", &base[..cut])).unwrap()
    }

    #[test]
    fn fixture_profile_is_clean() {
        let (d, p) = bw();
        let prof = parse_profile(include_str!("../../fixtures/blocksworld/animation.pddl")).unwrap();
        assert_eq!(check_profile(&prof, &d, &p), vec![]);
    }

    #[test]
    fn unknown_predicate_is_one_error() {
        let (d, p) = bw();
        let prof = bw_profile_with("(:predicate flying :parameters (?b) :effects (equal (?b y) 100))");
        let diags = check_profile(&prof, &d, &p);
        assert_eq!(diags.len(), 1);
        assert!(diags[0].is_error());
        assert!(diags[0].message.contains("flying"));
    }

    #[test]
    fn custom_object_collision() {
        let (d, p) = bw();
        let prof = bw_profile_with("(:custom (a (:x 0)))");
        let diags = check_profile(&prof, &d, &p);
        assert!(diags.iter().any(|d| d.is_error() && d.message.contains("collides")));
    }

    #[test]
    fn other_diagnostics() {
        let (d, p) = bw();
        let prof = parse_profile(
            "(define (animation t)
               (:objects (ghost (:x 1)))
               (:predicate on :parameters (?a) :effects)
               (:predicate holding :parameters (?b) :effects
                  (assign (?b x) (function distributex (objects ?q)))
                  (equal (?b y) (nowhere y))
                  (assign (?b label) (function calculate_label (objects ?b)))))",
        )
        .unwrap();
        let diags = check_profile(&prof, &d, &p);
        let errors: Vec<_> = diags
            .iter()
            .filter(|d| d.is_error())
            .map(|d| d.message.clone())
            .collect();
        assert!(errors.iter().any(|m| m.contains("ghost")));
        assert!(errors.iter().any(|m| m.contains("rule on: 1 parameters")));
        assert!(errors.iter().any(|m| m.contains("?q")));
        assert!(errors.iter().any(|m| m.contains("nowhere")));
        assert!(errors.iter().any(|m| m.contains("calculate_label")));
        let warnings = diags.iter().filter(|d| !d.is_error()).count();
        // ontable, clear, handempty have no rule
        assert_eq!(warnings, 3);
    }
}
