//! Cross-checks animation profiles against their domain and problem.
//!
//!     cargo run --example check_profile

use planim::pddl::{parse_domain, parse_problem};
use planim::profile::{check_profile, parse_profile};

const DOMAIN: &str = include_str!("../fixtures/blocksworld/domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/blocksworld/problem.pddl");
const PROFILE: &str = include_str!("../fixtures/blocksworld/animation.pddl");

const BROKEN: &str = r#"
(define (animation broken)
  (:objects (brick (:width 40)))
  (:predicate ontable
    :parameters (?b)
    :effects (assign (?b x) (function distributex (objects ?b))))
  (:predicate on
    :parameters (?b1 ?b2)
    :effects (equal (?b1 x) (?b3 x)))
  (:predicate stacked :parameters (?b) :effects))
"#;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = parse_domain(DOMAIN)?;
    let problem = parse_problem(PROBLEM, &domain)?;

    for (name, text) in [("bundled", PROFILE), ("broken", BROKEN)] {
        let profile = parse_profile(text)?;
        let diagnostics = check_profile(&profile, &domain, &problem);
        let errors = diagnostics.iter().filter(|d| d.is_error()).count();
        println!("{name}: {errors} error(s), {} warning(s)", diagnostics.len() - errors);
        for d in &diagnostics {
            println!("  {d}");
        }
    }

    // some mistakes are caught while parsing, before any cross-check
    for text in [
        "(define (animation x) (:predicate on :parameters (?a) :effects (equal (?a colour) red)))",
        "(define (animation x) (:predicate on :parameters (?a) :effects (assign (?a y) (function distributex (objects ?a)))))",
    ] {
        if let Err(e) = parse_profile(text) {
            println!("parse error: {e}");
        }
    }
    Ok(())
}
