#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::io::{Read, Write};
use std::net::TcpListener;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};
use std::thread;
use std::time::Duration;

use planim::pddl::{AtomSchema, DomainAst, Literal, PlanText, ProblemAst, Term};
use planim::pipeline::Inputs;
use planim::plan::{execute_plan, GroundState, Trajectory};
use planim::profile::{AnimationProfile, Effect, ObjectRef, PredicateRule};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;

pub const FIXTURES: [&str; 4] = ["blocksworld", "grid", "hanoi", "logistics"];

pub fn fixture_path(domain: &str, file: &str) -> PathBuf {
    [env!("CARGO_MANIFEST_DIR"), "fixtures", domain, file].iter().collect()
}

pub fn fixture(domain: &str, file: &str) -> String {
    let path = fixture_path(domain, file);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

pub struct Loaded {
    pub inputs: Inputs,
    pub plan: PlanText,
    pub trajectory: Trajectory,
}

pub fn load(name: &str) -> Loaded {
    let inputs = Inputs::parse(
        &fixture(name, "domain.pddl"),
        &fixture(name, "problem.pddl"),
        &fixture(name, "animation.pddl"),
    )
    .unwrap();
    let plan = inputs.parse_plan(&fixture(name, "plan.txt")).unwrap();
    let trajectory = execute_plan(&inputs.domain, &inputs.problem, &plan).unwrap();
    Loaded {
        inputs,
        plan,
        trajectory,
    }
}

// ---------------------------------------------------------------------------
// Plan simulation by direct rewriting of atom strings.

pub type TextState = BTreeSet<String>;

fn ancestors(domain: &DomainAst, ty: &str) -> Vec<String> {
    let mut out = vec![ty.to_string()];
    let mut cur = ty.to_string();
    for _ in 0..64 {
        match domain.type_hierarchy.get(&cur) {
            Some(parent) => {
                out.push(parent.clone());
                cur = parent.clone();
            }
            None => break,
        }
    }
    out.push("object".to_string());
    out
}

fn instantiate(schema: &AtomSchema, binding: &BTreeMap<String, String>) -> String {
    let mut s = format!("({}", schema.predicate);
    for t in &schema.args {
        s.push(' ');
        s.push_str(&term(t, binding));
    }
    s.push(')');
    s
}

fn term(t: &Term, binding: &BTreeMap<String, String>) -> String {
    match t {
        Term::Var(v) => binding[v].clone(),
        Term::Const(c) => c.clone(),
    }
}

/// Outcome of simulating a plan: every state reached and the index of the
/// first step that could not be applied, if any.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Simulation {
    pub states: Vec<TextState>,
    pub failed_at: Option<usize>,
}

/// Applies `(name args…)` to `state`, or `None` when it is not applicable.
pub fn apply_text(
    domain: &DomainAst,
    problem: &ProblemAst,
    state: &TextState,
    name: &str,
    args: &[String],
) -> Option<TextState> {
    let action = domain.actions.iter().find(|a| a.name == name)?;
    if action.params.len() != args.len() {
        return None;
    }
    let mut binding = BTreeMap::new();
    for ((var, ty), arg) in action.params.iter().zip(args) {
        let actual = problem.objects.get(arg).or_else(|| domain.constants.get(arg))?;
        if !ancestors(domain, actual).iter().any(|t| t == ty) {
            return None;
        }
        binding.insert(var.clone(), arg.clone());
    }
    for lit in &action.precondition {
        let ok = match lit {
            Literal::Pos(a) => state.contains(&instantiate(a, &binding)),
            Literal::Eq(a, b) => term(a, &binding) == term(b, &binding),
            Literal::NotEq(a, b) => term(a, &binding) != term(b, &binding),
        };
        if !ok {
            return None;
        }
    }
    let mut next = state.clone();
    for d in &action.del_effects {
        next.remove(&instantiate(d, &binding));
    }
    for a in &action.add_effects {
        next.insert(instantiate(a, &binding));
    }
    Some(next)
}

pub fn text_state(state: &GroundState) -> TextState {
    state.atoms.iter().map(ToString::to_string).collect()
}

pub fn simulate(domain: &DomainAst, problem: &ProblemAst, plan: &[(String, Vec<String>)]) -> Simulation {
    let mut states = vec![problem.init.iter().map(ToString::to_string).collect::<TextState>()];
    for (i, (name, args)) in plan.iter().enumerate() {
        match apply_text(domain, problem, states.last().unwrap(), name, args) {
            Some(next) => states.push(next),
            None => {
                return Simulation {
                    states,
                    failed_at: Some(i),
                }
            }
        }
    }
    Simulation {
        states,
        failed_at: None,
    }
}

/// Every grounding of every action, by exhaustive enumeration over the
/// objects of each parameter's type.
pub fn applicable(domain: &DomainAst, problem: &ProblemAst, state: &TextState) -> Vec<(String, Vec<String>)> {
    let mut out = Vec::new();
    for action in &domain.actions {
        let candidates: Vec<Vec<&String>> = action
            .params
            .iter()
            .map(|(_, ty)| {
                problem
                    .objects
                    .iter()
                    .filter(|(_, t)| ancestors(domain, t).iter().any(|a| a == ty))
                    .map(|(o, _)| o)
                    .collect()
            })
            .collect();
        if candidates.iter().any(Vec::is_empty) {
            continue;
        }
        let arity = action.params.len();
        let mut idx = vec![0usize; arity];
        loop {
            let args: Vec<String> = idx.iter().zip(&candidates).map(|(&i, c)| c[i].clone()).collect();
            if apply_text(domain, problem, state, &action.name, &args).is_some() {
                out.push((action.name.clone(), args));
            }
            let mut k = 0;
            while k < arity {
                idx[k] += 1;
                if idx[k] < candidates[k].len() {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == arity {
                break;
            }
        }
    }
    out
}

pub fn plan_text(plan: &[(String, Vec<String>)]) -> String {
    plan.iter()
        .map(|(n, a)| {
            if a.is_empty() {
                format!("({n})")
            } else {
                format!("({n} {})", a.join(" "))
            }
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// A random walk of applicable steps.
pub fn random_walk(
    domain: &DomainAst,
    problem: &ProblemAst,
    len: usize,
    rng: &mut StdRng,
) -> Vec<(String, Vec<String>)> {
    let mut state: TextState = problem.init.iter().map(ToString::to_string).collect();
    let mut plan = Vec::new();
    for _ in 0..len {
        let options = applicable(domain, problem, &state);
        let Some(step) = options.choose(rng) else { break };
        state = apply_text(domain, problem, &state, &step.0, &step.1).unwrap();
        plan.push(step.clone());
    }
    plan
}

/// Damages a plan in one of several ways; the result may still be valid.
pub fn corrupt(plan: &[(String, Vec<String>)], problem: &ProblemAst, rng: &mut StdRng) -> Vec<(String, Vec<String>)> {
    let mut p = plan.to_vec();
    let objects: Vec<String> = problem.objects.keys().cloned().collect();
    if p.is_empty() {
        return p;
    }
    match rng.gen_range(0..4) {
        0 => {
            let i = rng.gen_range(0..p.len());
            let j = rng.gen_range(0..p.len());
            p.swap(i, j);
        }
        1 => {
            let i = rng.gen_range(0..p.len());
            if !p[i].1.is_empty() {
                let k = rng.gen_range(0..p[i].1.len());
                p[i].1[k] = objects.choose(rng).unwrap().clone();
            }
        }
        2 => {
            let i = rng.gen_range(0..p.len());
            p.remove(i);
        }
        _ => {
            let i = rng.gen_range(0..=p.len());
            let donor = p[rng.gen_range(0..p.len())].clone();
            p.insert(i, donor);
        }
    }
    p
}

pub fn blocksworld_problem(rng: &mut StdRng, n: usize) -> String {
    let blocks: Vec<String> = (0..n).map(|i| format!("b{i}")).collect();
    let towers = |rng: &mut StdRng| {
        let mut order = blocks.clone();
        order.shuffle(rng);
        let mut out: Vec<Vec<String>> = Vec::new();
        for b in order {
            if out.is_empty() || rng.gen_bool(0.4) {
                out.push(vec![b]);
            } else {
                out.last_mut().unwrap().push(b);
            }
        }
        out
    };
    let mut init = vec!["(handempty)".to_string()];
    for t in towers(rng) {
        init.push(format!("(ontable {})", t[0]));
        for w in t.windows(2) {
            init.push(format!("(on {} {})", w[1], w[0]));
        }
        init.push(format!("(clear {})", t.last().unwrap()));
    }
    let mut goal = Vec::new();
    for t in towers(rng) {
        for w in t.windows(2) {
            goal.push(format!("(on {} {})", w[1], w[0]));
        }
    }
    if goal.is_empty() {
        goal.push(format!("(ontable {})", blocks[0]));
    }
    format!(
        "(define (problem bw-random)\n  (:domain blocksworld)\n  (:objects {} - block)\n  (:init {})\n  (:goal (and {})))",
        blocks.join(" "),
        init.join(" "),
        goal.join(" ")
    )
}

pub fn logistics_problem(rng: &mut StdRng) -> String {
    let cities = rng.gen_range(2..=3);
    let mut objects = Vec::new();
    let mut init = Vec::new();
    let mut places = Vec::new();
    let mut airports = Vec::new();
    for c in 0..cities {
        objects.push(format!("c{c} - city"));
        objects.push(format!("l{c} - location"));
        objects.push(format!("a{c} - airport"));
        init.push(format!("(in-city l{c} c{c})"));
        init.push(format!("(in-city a{c} c{c})"));
        places.push(format!("l{c}"));
        places.push(format!("a{c}"));
        airports.push(format!("a{c}"));
        objects.push(format!("t{c} - truck"));
        init.push(format!(
            "(at t{c} {})",
            if rng.gen_bool(0.5) {
                format!("l{c}")
            } else {
                format!("a{c}")
            }
        ));
    }
    objects.push("ap0 - airplane".to_string());
    init.push(format!("(at ap0 {})", airports.choose(rng).unwrap()));
    let packages = rng.gen_range(1..=3);
    let mut goal = Vec::new();
    for p in 0..packages {
        objects.push(format!("p{p} - package"));
        init.push(format!("(at p{p} {})", places.choose(rng).unwrap()));
        goal.push(format!("(at p{p} {})", places.choose(rng).unwrap()));
    }
    format!(
        "(define (problem log-random)\n  (:domain logistics)\n  (:objects {})\n  (:init {})\n  (:goal (and {})))",
        objects.join(" "),
        init.join(" "),
        goal.join(" ")
    )
}

/// Checks `execute_plan` against `simulate` on one plan; returns a
/// description of the first disagreement.
pub fn compare_with_engine(
    domain: &DomainAst,
    problem: &ProblemAst,
    plan: &[(String, Vec<String>)],
) -> Result<(), String> {
    let oracle = simulate(domain, problem, plan);
    let parsed = planim::pddl::parse_plan(&plan_text(plan), domain).map_err(|e| e.to_string())?;
    match (execute_plan(domain, problem, &parsed), oracle.failed_at) {
        (Ok(traj), None) => {
            let states: Vec<TextState> = traj.states.iter().map(text_state).collect();
            if states != oracle.states {
                return Err("trajectories differ".into());
            }
        }
        (Err(e), Some(i)) => {
            if e.step != i {
                return Err(format!("engine failed at {}, oracle at {i}", e.step));
            }
            let prefix = PlanText {
                steps: parsed.steps[..i].to_vec(),
            };
            let traj = execute_plan(domain, problem, &prefix).map_err(|e| e.to_string())?;
            let states: Vec<TextState> = traj.states.iter().map(text_state).collect();
            if states != oracle.states {
                return Err("prefix trajectories differ".into());
            }
        }
        (Ok(_), Some(i)) => return Err(format!("engine accepted a plan the oracle rejects at {i}")),
        (Err(e), None) => return Err(format!("engine rejected a valid plan: {e}")),
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// Object resolution by exhaustive enumeration of candidate key tuples.

fn bind_ref<'a>(r: &'a ObjectRef, rule: &PredicateRule, args: &'a [String]) -> Option<&'a str> {
    match r {
        ObjectRef::Var(v) => {
            let i = rule.params.iter().position(|p| p == v)?;
            args.get(i).map(String::as_str)
        }
        ObjectRef::Name(n) => Some(n),
    }
}

/// For every tuple K over the universe, the set of objects o such that some
/// true atom of the rule's predicate binds the key references to K and a
/// member reference to o.
pub fn brute_force_groups(
    target: &ObjectRef,
    call_objects: &[ObjectRef],
    rule: &PredicateRule,
    state: &GroundState,
    universe: &[String],
) -> BTreeMap<Vec<String>, Vec<String>> {
    let mut refs: Vec<&ObjectRef> = Vec::new();
    for r in call_objects {
        if !refs.contains(&r) {
            refs.push(r);
        }
    }
    let (key_refs, member_refs): (Vec<&ObjectRef>, Vec<&ObjectRef>) = if refs.contains(&target) {
        (refs.iter().copied().filter(|r| *r != target).collect(), vec![target])
    } else {
        (vec![target], refs.clone())
    };
    let atoms: Vec<&planim::pddl::Atom> = state
        .atoms
        .iter()
        .filter(|a| a.predicate == rule.predicate && a.args.len() == rule.params.len())
        .collect();
    let mut out = BTreeMap::new();
    let k = key_refs.len();
    let mut idx = vec![0usize; k];
    loop {
        let key: Vec<String> = idx.iter().map(|&i| universe[i].clone()).collect();
        let keyed: Vec<&&planim::pddl::Atom> = atoms
            .iter()
            .filter(|a| {
                key_refs
                    .iter()
                    .zip(&key)
                    .all(|(r, name)| bind_ref(r, rule, &a.args) == Some(name.as_str()))
            })
            .collect();
        if !keyed.is_empty() {
            let members: Vec<String> = universe
                .iter()
                .filter(|o| {
                    keyed.iter().any(|a| {
                        member_refs
                            .iter()
                            .any(|r| bind_ref(r, rule, &a.args) == Some(o.as_str()))
                    })
                })
                .cloned()
                .collect();
            out.insert(key, members);
        }
        let mut j = 0;
        while j < k {
            idx[j] += 1;
            if idx[j] < universe.len() {
                break;
            }
            idx[j] = 0;
            j += 1;
        }
        if j == k {
            break;
        }
    }
    out
}

/// Compares `resolve_objects` with the brute-force enumeration for every
/// assign effect of `profile` in every state of `trajectory`. Returns the
/// number of comparisons made.
pub fn check_resolution(
    profile: &AnimationProfile,
    problem: &ProblemAst,
    trajectory: &Trajectory,
) -> Result<usize, String> {
    let mut universe: Vec<String> = problem.objects.keys().cloned().collect();
    universe.extend(profile.custom_objects.iter().map(|c| c.name.clone()));
    universe.sort();
    universe.dedup();
    let mut checked = 0;
    for state in &trajectory.states {
        for rule in &profile.rules {
            for effect in &rule.effects {
                let Effect::Assign { target, call } = effect else {
                    continue;
                };
                let got = planim::layout::resolve_objects(&target.object, call, rule, state);
                let want = brute_force_groups(&target.object, &call.objects, rule, state, &universe);
                if got.groups != want {
                    return Err(format!("{} {}: {:?} != {:?}", rule.predicate, effect, got.groups, want));
                }
                checked += 1;
            }
        }
    }
    Ok(checked)
}

// ---------------------------------------------------------------------------
// Goal bookkeeping straight from the definitions.

/// `steps[g]` = indices i with goal atom g in state i, found by linear scan.
pub fn subgoal_scan(goal: &[String], states: &[TextState]) -> Vec<Vec<usize>> {
    goal.iter()
        .map(|g| {
            let mut steps = Vec::new();
            for (i, s) in states.iter().enumerate() {
                if s.iter().any(|a| a == g) {
                    steps.push(i);
                }
            }
            steps
        })
        .collect()
}

fn atom_args(atom: &str) -> Vec<String> {
    atom.trim_matches(|c| c == '(' || c == ')')
        .split_whitespace()
        .skip(1)
        .map(str::to_string)
        .collect()
}

/// o is at goal iff some goal atom mentions o and every goal atom mentioning
/// o holds in the state.
pub fn at_goal_by_definition(goal: &[String], state: &TextState, universe: &[String]) -> BTreeSet<String> {
    universe
        .iter()
        .filter(|o| {
            let mentioning: Vec<&String> = goal.iter().filter(|g| atom_args(g).contains(o)).collect();
            !mentioning.is_empty() && mentioning.iter().all(|g| state.contains(*g))
        })
        .cloned()
        .collect()
}

// ---------------------------------------------------------------------------
// A minimal HTTP responder standing in for the planning service.

pub struct Stub {
    pub url: String,
    pub bodies: Arc<Mutex<Vec<String>>>,
}

fn read_request(stream: &mut std::net::TcpStream) -> String {
    let mut buf = Vec::new();
    let mut chunk = [0u8; 4096];
    loop {
        let n = stream.read(&mut chunk).unwrap_or(0);
        if n == 0 {
            break;
        }
        buf.extend_from_slice(&chunk[..n]);
        if let Some(end) = buf.windows(4).position(|w| w == b"\r\n\r\n") {
            let head = String::from_utf8_lossy(&buf[..end]).to_ascii_lowercase();
            let len = head
                .lines()
                .find_map(|l| l.strip_prefix("content-length:"))
                .and_then(|v| v.trim().parse::<usize>().ok())
                .unwrap_or(0);
            while buf.len() < end + 4 + len {
                let n = stream.read(&mut chunk).unwrap_or(0);
                if n == 0 {
                    break;
                }
                buf.extend_from_slice(&chunk[..n]);
            }
            return String::from_utf8_lossy(&buf[end + 4..]).into_owned();
        }
    }
    String::new()
}

/// Serves `status` and `body` to every request after waiting `delay`.
pub fn serve(status: u16, body: &str, delay: Duration) -> Stub {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let url = format!("http://{}/solve", listener.local_addr().unwrap());
    let bodies = Arc::new(Mutex::new(Vec::new()));
    let seen = Arc::clone(&bodies);
    let body = body.to_string();
    thread::spawn(move || {
        for stream in listener.incoming() {
            let Ok(mut stream) = stream else { continue };
            let request = read_request(&mut stream);
            seen.lock().unwrap().push(request);
            thread::sleep(delay);
            let reply = format!(
                "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                body.len()
            );
            let _ = stream.write_all(reply.as_bytes());
        }
    });
    Stub { url, bodies }
}

/// An address nothing listens on.
pub fn dead_url() -> String {
    let listener = TcpListener::bind("127.0.0.1:0").unwrap();
    let addr = listener.local_addr().unwrap();
    drop(listener);
    format!("http://{addr}/solve")
}

// ---------------------------------------------------------------------------
// Random, schema-valid VFG documents.

fn random_color(rng: &mut StdRng) -> String {
    format!("#{:02X}{:02X}{:02X}", rng.gen::<u8>(), rng.gen::<u8>(), rng.gen::<u8>())
}

fn random_scene(rng: &mut StdRng, names: &[String], sprites: &[String]) -> planim::vfg::SceneRecord {
    use planim::vfg::{LineRecord, ObjectRecord, SceneRecord};
    let objects = names
        .iter()
        .map(|n| {
            let visible = rng.gen_bool(0.8);
            let record = ObjectRecord {
                x: visible.then(|| rng.gen_range(-500..500)),
                y: visible.then(|| rng.gen_range(-500..500)),
                width: rng.gen_range(1..200),
                height: rng.gen_range(1..200),
                color: random_color(rng),
                depth: rng.gen_range(-3..4),
                showname: rng.gen(),
                label: format!("{n}\"{}", rng.gen_range(0..9)),
                prefab_image: sprites.choose(rng).unwrap().clone(),
                visible,
            };
            (n.clone(), record)
        })
        .collect();
    let lines = (0..rng.gen_range(0..3))
        .map(|_| LineRecord {
            from: names.choose(rng).unwrap().clone(),
            to: names.choose(rng).unwrap().clone(),
            color: random_color(rng),
            x1: rng.gen_range(-99..99),
            y1: rng.gen_range(-99..99),
            x2: rng.gen_range(-99..99),
            y2: rng.gen_range(-99..99),
        })
        .collect();
    SceneRecord { objects, lines }
}

pub fn random_vfg(rng: &mut StdRng) -> planim::vfg::VfgDocument {
    use planim::vfg::{Metadata, OpRecord, StepRecord, TransitionRecord, VfgDocument, VFG_VERSION};
    let names: Vec<String> = (0..rng.gen_range(1..6)).map(|i| format!("o{i}")).collect();
    let mut sprites = BTreeMap::new();
    sprites.insert("rectangle".to_string(), "builtin:rectangle".to_string());
    if rng.gen_bool(0.5) {
        sprites.insert("ellipse".to_string(), "builtin:ellipse".to_string());
    }
    if rng.gen_bool(0.3) {
        sprites.insert("image-0123456789ab".to_string(), "iVBORw0KGgo=".to_string());
    }
    let sprite_names: Vec<String> = sprites.keys().cloned().collect();
    let goals: Vec<String> = (0..rng.gen_range(0..3)).map(|i| format!("(g o{i})")).collect();
    let steps = (0..rng.gen_range(1..5))
        .map(|index| {
            let effects = |rng: &mut StdRng| {
                (index > 0 && rng.gen_bool(0.7)).then(|| vec![format!("(p o{})", rng.gen_range(0..9))])
            };
            let transition = (index > 0 && rng.gen_bool(0.8)).then(|| TransitionRecord {
                duration: rng.gen_range(1..9) as f64 * 0.25,
                ops: names
                    .iter()
                    .filter(|_| rng.gen_bool(0.5))
                    .collect::<Vec<_>>()
                    .into_iter()
                    .map(|n| {
                        let a = [rng.gen_range(-50..50), rng.gen_range(-50..50)];
                        let b = [rng.gen_range(-50..50), rng.gen_range(-50..50)];
                        match rng.gen_range(0..4) {
                            0 => OpRecord::Translate {
                                object: n.clone(),
                                from: a,
                                to: b,
                            },
                            1 => OpRecord::Scale {
                                object: n.clone(),
                                from: a,
                                to: b,
                            },
                            2 => OpRecord::Appear {
                                object: n.clone(),
                                at: a,
                            },
                            _ => OpRecord::Disappear {
                                object: n.clone(),
                                at: a,
                            },
                        }
                    })
                    .collect(),
            });
            StepRecord {
                index,
                action: (index > 0).then(|| format!("(act o{})", rng.gen_range(0..9))),
                preconditions: effects(rng),
                add_effects: effects(rng),
                del_effects: effects(rng),
                scene: random_scene(rng, &names, &sprite_names),
                transition,
                at_goal: names.iter().filter(|_| rng.gen_bool(0.3)).cloned().collect(),
                satisfied_subgoals: goals.iter().filter(|_| rng.gen_bool(0.5)).cloned().collect(),
            }
        })
        .collect();
    VfgDocument {
        version: VFG_VERSION.to_string(),
        metadata: Metadata {
            domain_name: "random".into(),
            problem_name: format!("r{}", rng.gen::<u16>()),
            generator: "test".into(),
            seed: rng.gen(),
        },
        goal_scene: random_scene(rng, &names, &sprite_names),
        sprites,
        goals,
        steps,
    }
}

// ---------------------------------------------------------------------------
// Random animation profiles, as text.

fn random_value(rng: &mut StdRng, prop: &str, allow_random: bool) -> String {
    match prop {
        "color" => match rng.gen_range(0..3) {
            0 if allow_random => "random".to_string(),
            1 => ["red", "blue", "gray", "brown"].choose(rng).unwrap().to_string(),
            _ => random_color(rng),
        },
        "showname" => rng.gen::<bool>().to_string(),
        "label" => format!("\"l{}\"", rng.gen_range(0..99)),
        "prefabimage" => ["rectangle", "ellipse"].choose(rng).unwrap().to_string(),
        "width" | "height" => rng.gen_range(1..300).to_string(),
        _ => rng.gen_range(-300..300).to_string(),
    }
}

const PROPS: [&str; 8] = ["x", "y", "width", "height", "color", "depth", "showname", "label"];

fn random_props(rng: &mut StdRng) -> String {
    let mut chosen: Vec<&str> = PROPS.iter().copied().filter(|_| rng.gen_bool(0.4)).collect();
    if rng.gen_bool(0.3) {
        chosen.push("prefabimage");
    }
    chosen
        .iter()
        .map(|p| format!(" (:{p} {})", random_value(rng, p, true)))
        .collect()
}

pub fn random_profile_text(rng: &mut StdRng) -> String {
    let mut s = String::from("(define (animation rnd)\n  (:objects");
    let types: Vec<&str> = ["block", "place", "thing"]
        .into_iter()
        .filter(|_| rng.gen_bool(0.7))
        .collect();
    for t in types {
        s.push_str(&format!("\n    ({t}{})", random_props(rng)));
    }
    s.push_str(")\n  (:custom");
    let customs: Vec<&str> = ["table", "claw"].into_iter().filter(|_| rng.gen_bool(0.6)).collect();
    for c in customs {
        s.push_str(&format!("\n    ({c}{})", random_props(rng)));
    }
    s.push(')');
    for pred in ["on", "at", "near"] {
        if !rng.gen_bool(0.8) {
            continue;
        }
        s.push_str(&format!(
            "\n  (:predicate {pred}\n    :parameters (?a ?b)\n    :effects"
        ));
        for _ in 0..rng.gen_range(0..4) {
            let v = ["?a", "?b"].choose(rng).unwrap();
            match rng.gen_range(0..3) {
                0 => {
                    let p = ["x", "y", "depth"].choose(rng).unwrap();
                    let q = ["x", "y", "width", "height"].choose(rng).unwrap();
                    s.push_str(&format!(" (equal ({v} {p}) (add (?b {q}) {}))", rng.gen_range(-50..50)));
                }
                1 => {
                    let p = ["color", "label", "width"].choose(rng).unwrap();
                    s.push_str(&format!(" (equal ({v} {p}) {})", random_value(rng, p, false)));
                }
                _ => {
                    let (f, target, settings) = [
                        ("distributex", "x", " (settings (spacebtwn 10))"),
                        ("distributey", "y", ""),
                        ("distribute_within_objects_vertical", "y", ""),
                        ("align_middle", "x", ""),
                        ("apply_smaller", "width", " (settings (scale 0.5))"),
                        (
                            "distribute_grid_around_point",
                            "x",
                            " (settings (x 5) (y -5) (columns 2))",
                        ),
                    ]
                    .choose(rng)
                    .copied()
                    .unwrap();
                    let objects = if matches!(f, "distribute_within_objects_vertical" | "align_middle") {
                        "?a ?b"
                    } else {
                        "?a"
                    };
                    s.push_str(&format!(
                        " (assign (?a {target}) (function {f} (objects {objects}){settings}))"
                    ));
                }
            }
        }
        s.push(')');
    }
    s.push_str(")\n");
    s
}
