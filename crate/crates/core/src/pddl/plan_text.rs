use std::fmt;

use thiserror::Error;

use super::DomainAst;

/// One `(name arg…)` line of a sequential plan.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlanStep {
    pub action: String,
    pub args: Vec<String>,
}

impl fmt::Display for PlanStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.action)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PlanText {
    pub steps: Vec<PlanStep>,
}

impl fmt::Display for PlanText {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.steps {
            writeln!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanParseError {
    #[error("line {line}: malformed plan step: {text}")]
    Malformed { line: usize, text: String },
    #[error("line {line}: unknown action {name}")]
    UnknownAction { line: usize, name: String },
    #[error("line {line}: {action} expects {expected} arguments, found {found}")]
    ArgCount {
        line: usize,
        action: String,
        expected: usize,
        found: usize,
    },
}

/// Parses one step body such as `(stack a b)`; returns `None` when malformed.
pub fn parse_step(text: &str) -> Option<PlanStep> {
    let inner = text.trim().strip_prefix('(')?.strip_suffix(')')?;
    if inner.contains(['(', ')']) {
        return None;
    }
    let mut words = inner.split_whitespace().map(str::to_ascii_lowercase);
    let action = words.next()?;
    Some(PlanStep {
        action,
        args: words.collect(),
    })
}

/// Parses an IPC-style plan: one `(name arg…)` per line, optional `N:` step
/// prefixes and `;` comments, blank lines ignored.
pub fn parse_plan(source: &str, domain: &DomainAst) -> Result<PlanText, PlanParseError> {
    let mut steps = Vec::new();
    for (idx, raw) in source.lines().enumerate() {
        let line = idx + 1;
        let mut text = raw.split(';').next().unwrap_or("").trim();
        if text.is_empty() {
            continue;
        }
        if let Some((prefix, rest)) = text.split_once(':') {
            let prefix = prefix.trim();
            if !prefix.is_empty() && prefix.parse::<f64>().is_ok() {
                text = rest.trim();
            }
        }
        // some planners append a duration or cost in brackets
        if let Some(close) = text.rfind(')') {
            let tail = text[close + 1..].trim();
            if tail.starts_with('[') && tail.ends_with(']') {
                text = &text[..=close];
            }
        }
        let step = parse_step(text).ok_or_else(|| PlanParseError::Malformed {
            line,
            text: raw.trim().to_string(),
        })?;
        let schema = domain
            .action(&step.action)
            .ok_or_else(|| PlanParseError::UnknownAction {
                line,
                name: step.action.clone(),
            })?;
        if schema.params.len() != step.args.len() {
            return Err(PlanParseError::ArgCount {
                line,
                action: step.action,
                expected: schema.params.len(),
                found: step.args.len(),
            });
        }
        steps.push(step);
    }
    Ok(PlanText { steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pddl::parse_domain;

    fn domain() -> DomainAst {
        parse_domain(
            "(define (domain bw) (:predicates (clear ?x) (holding ?x) (on ?x ?y))
              (:action pick-up :parameters (?x) :precondition (clear ?x) :effect (holding ?x))
              (:action stack :parameters (?x ?y) :precondition (holding ?x) :effect (on ?x ?y)))",
        )
        .unwrap()
    }

    #[test]
    fn two_steps() {
        let p = parse_plan("(pick-up b1)\n(stack b1 b2)", &domain()).unwrap();
        assert_eq!(p.steps.len(), 2);
        assert_eq!(p.steps[1].args, vec!["b1", "b2"]);
    }

    #[test]
    fn empty_plan() {
        assert!(parse_plan("", &domain()).unwrap().steps.is_empty());
        assert!(parse_plan("\n ; cost = 0\n\n", &domain()).unwrap().steps.is_empty());
    }

    #[test]
    fn decorations_are_ignored() {
        let p = parse_plan("0: (pick-up b1) ; grab", &domain()).unwrap();
        assert_eq!(
            p.steps,
            vec![PlanStep {
                action: "pick-up".into(),
                args: vec!["b1".into()]
            }]
        );
        let p = parse_plan("0.000: (PICK-UP B1) [1]", &domain()).unwrap();
        assert_eq!(p.steps[0].to_string(), "(pick-up b1)");
    }

    #[test]
    fn malformed_line_number() {
        let err = parse_plan("(pick-up b1)\n\npick-up b2", &domain()).unwrap_err();
        assert_eq!(
            err,
            PlanParseError::Malformed {
                line: 3,
                text: "pick-up b2".into()
            }
        );
    }

    #[test]
    fn unknown_action_and_arity() {
        assert!(matches!(
            parse_plan("(fly b1)", &domain()).unwrap_err(),
            PlanParseError::UnknownAction { line: 1, .. }
        ));
        assert!(matches!(
            parse_plan("(stack b1)", &domain()).unwrap_err(),
            PlanParseError::ArgCount {
                expected: 2,
                found: 1,
                ..
            }
        ));
    }
}
