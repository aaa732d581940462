//! Plan execution: grounding, precondition checking, the state trajectory,
//! and per-step goal bookkeeping.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::pddl::{Atom, AtomSchema, DomainAst, Literal, PlanStep, PlanText, ProblemAst, Term};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundAction {
    pub name: String,
    pub args: Vec<String>,
    pub pre: BTreeSet<Atom>,
    pub add: BTreeSet<Atom>,
    pub del: BTreeSet<Atom>,
}

impl fmt::Display for GroundAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}", self.name)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        write!(f, ")")
    }
}

/// A set of ground atoms.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GroundState {
    pub atoms: BTreeSet<Atom>,
}

impl GroundState {
    pub fn new(atoms: BTreeSet<Atom>) -> Self {
        GroundState { atoms }
    }

    pub fn contains(&self, atom: &Atom) -> bool {
        self.atoms.contains(atom)
    }

    /// `(self \ del) ∪ add`
    pub fn apply(&self, action: &GroundAction) -> GroundState {
        let mut atoms: BTreeSet<Atom> = self.atoms.difference(&action.del).cloned().collect();
        atoms.extend(action.add.iter().cloned());
        GroundState { atoms }
    }
}

impl FromIterator<Atom> for GroundState {
    fn from_iter<T: IntoIterator<Item = Atom>>(iter: T) -> Self {
        GroundState {
            atoms: iter.into_iter().collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trajectory {
    pub states: Vec<GroundState>,
    pub actions: Vec<GroundAction>,
}

impl Trajectory {
    pub fn final_state(&self) -> &GroundState {
        self.states.last().expect("a trajectory always holds the initial state")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroundError {
    #[error("unknown action {0}")]
    UnknownAction(String),
    #[error("{action} expects {expected} arguments, found {found}")]
    Arity {
        action: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown object {0}")]
    UnknownObject(String),
    #[error("argument {object} has type {found}, parameter ?{param} requires {expected}")]
    TypeMismatch {
        object: String,
        param: String,
        expected: String,
        found: String,
    },
    #[error("equality precondition {0} does not hold")]
    EqualityViolated(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ExecErrorKind {
    MissingPreconditions(Vec<Atom>),
    Ground(Box<GroundError>),
}

/// Failure of plan execution at a specific step (0-based).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct ExecError {
    pub step: usize,
    pub action: String,
    pub kind: ExecErrorKind,
}

impl fmt::Display for ExecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "step {} {}: ", self.step, self.action)?;
        match &self.kind {
            ExecErrorKind::MissingPreconditions(atoms) => {
                f.write_str("missing preconditions")?;
                for (i, a) in atoms.iter().enumerate() {
                    f.write_str(if i == 0 { " " } else { ", " })?;
                    write!(f, "{a}")?;
                }
                Ok(())
            }
            ExecErrorKind::Ground(e) => write!(f, "{e}"),
        }
    }
}

fn substitute(term: &Term, binding: &BTreeMap<&str, &str>) -> String {
    match term {
        Term::Var(v) => binding[v.as_str()].to_string(),
        Term::Const(c) => c.clone(),
    }
}

fn ground_atom(schema: &AtomSchema, binding: &BTreeMap<&str, &str>) -> Atom {
    Atom {
        predicate: schema.predicate.clone(),
        args: schema.args.iter().map(|t| substitute(t, binding)).collect(),
    }
}

/// Instantiates the step's action schema with its arguments.
///
/// Equality literals are decided here and dropped from the precondition set.
/// When an atom ends up both added and deleted, the add wins.
pub fn ground_step(domain: &DomainAst, problem: &ProblemAst, step: &PlanStep) -> Result<GroundAction, GroundError> {
    let schema = domain
        .action(&step.action)
        .ok_or_else(|| GroundError::UnknownAction(step.action.clone()))?;
    if schema.params.len() != step.args.len() {
        return Err(GroundError::Arity {
            action: step.action.clone(),
            expected: schema.params.len(),
            found: step.args.len(),
        });
    }
    let mut binding = BTreeMap::new();
    for ((param, expected), arg) in schema.params.iter().zip(&step.args) {
        let found = problem
            .objects
            .get(arg)
            .ok_or_else(|| GroundError::UnknownObject(arg.clone()))?;
        if !domain.is_subtype(found, expected) {
            return Err(GroundError::TypeMismatch {
                object: arg.clone(),
                param: param.clone(),
                expected: expected.clone(),
                found: found.clone(),
            });
        }
        binding.insert(param.as_str(), arg.as_str());
    }
    let mut pre = BTreeSet::new();
    for lit in &schema.precondition {
        match lit {
            Literal::Pos(a) => {
                pre.insert(ground_atom(a, &binding));
            }
            Literal::Eq(a, b) | Literal::NotEq(a, b) => {
                let same = substitute(a, &binding) == substitute(b, &binding);
                let wanted = matches!(lit, Literal::Eq(..));
                if same != wanted {
                    return Err(GroundError::EqualityViolated(lit.to_string()));
                }
            }
        }
    }
    let add: BTreeSet<Atom> = schema.add_effects.iter().map(|a| ground_atom(a, &binding)).collect();
    let del = schema
        .del_effects
        .iter()
        .map(|a| ground_atom(a, &binding))
        .filter(|a| !add.contains(a))
        .collect();
    Ok(GroundAction {
        name: step.action.clone(),
        args: step.args.clone(),
        pre,
        add,
        del,
    })
}

/// Executes the plan from the problem's initial state, stopping at the first
/// step that cannot be grounded or whose preconditions do not hold.
pub fn execute_plan(domain: &DomainAst, problem: &ProblemAst, plan: &PlanText) -> Result<Trajectory, ExecError> {
    let mut states = vec![GroundState::new(problem.init.clone())];
    let mut actions = Vec::with_capacity(plan.steps.len());
    for (i, step) in plan.steps.iter().enumerate() {
        let action = ground_step(domain, problem, step).map_err(|e| ExecError {
            step: i,
            action: step.to_string(),
            kind: ExecErrorKind::Ground(Box::new(e)),
        })?;
        let current = states.last().expect("non-empty");
        let missing: Vec<Atom> = action.pre.difference(&current.atoms).cloned().collect();
        if !missing.is_empty() {
            return Err(ExecError {
                step: i,
                action: action.to_string(),
                kind: ExecErrorKind::MissingPreconditions(missing),
            });
        }
        let next = current.apply(&action);
        states.push(next);
        actions.push(action);
    }
    Ok(Trajectory { states, actions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubgoalRow {
    pub atom: Atom,
    /// Strictly increasing state indices in which the atom holds.
    pub steps: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SubgoalTable {
    pub rows: Vec<SubgoalRow>,
    /// For each state, the goal atoms true in it (goal order).
    pub satisfied: Vec<Vec<Atom>>,
}

impl SubgoalTable {
    pub fn all_satisfied_at(&self, step: usize) -> bool {
        self.satisfied.get(step).is_some_and(|s| s.len() == self.rows.len())
    }
}

pub fn goal_report(trajectory: &Trajectory, goal: &[Atom]) -> SubgoalTable {
    let rows = goal
        .iter()
        .map(|g| SubgoalRow {
            atom: g.clone(),
            steps: trajectory
                .states
                .iter()
                .enumerate()
                .filter(|(_, s)| s.contains(g))
                .map(|(i, _)| i)
                .collect(),
        })
        .collect();
    let satisfied = trajectory
        .states
        .iter()
        .map(|s| goal.iter().filter(|g| s.contains(g)).cloned().collect())
        .collect();
    SubgoalTable { rows, satisfied }
}

/// Objects mentioned by at least one goal atom whose every mentioning goal
/// atom holds in `state`.
pub fn at_goal_objects(state: &GroundState, goal: &[Atom]) -> BTreeSet<String> {
    let mut verdict: BTreeMap<&str, bool> = BTreeMap::new();
    for g in goal {
        let holds = state.contains(g);
        for o in &g.args {
            let entry = verdict.entry(o.as_str()).or_insert(true);
            *entry &= holds;
        }
    }
    verdict
        .into_iter()
        .filter(|(_, ok)| *ok)
        .map(|(o, _)| o.to_string())
        .collect()
}
