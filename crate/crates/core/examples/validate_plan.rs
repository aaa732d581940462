//! Plan validation: a good plan yields a trajectory, a bad one stops at the
//! first inapplicable step and names the missing preconditions.
//!
//!     cargo run --example validate_plan

use planim::pddl::{parse_domain, parse_plan, parse_problem};
use planim::plan::{execute_plan, ExecErrorKind};

const DOMAIN: &str = include_str!("../fixtures/blocksworld/domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/blocksworld/problem.pddl");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = parse_domain(DOMAIN)?;
    let problem = parse_problem(PROBLEM, &domain)?;

    let good = parse_plan("(pick-up b)\n(stack b c)\n(pick-up a)\n(stack a b)", &domain)?;
    let trajectory = execute_plan(&domain, &problem, &good)?;
    println!("valid plan, {} states", trajectory.states.len());
    for (i, state) in trajectory.states.iter().enumerate() {
        let atoms: Vec<String> = state.atoms.iter().map(ToString::to_string).collect();
        println!("  s{i}: {}", atoms.join(" "));
    }

    let bad = parse_plan("(pick-up b)\n(stack a c)", &domain)?;
    match execute_plan(&domain, &problem, &bad) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => {
            println!("invalid plan: {e}");
            if let ExecErrorKind::MissingPreconditions(missing) = &e.kind {
                println!("  step {} lacks {} atom(s)", e.step, missing.len());
            }
        }
    }

    // typing is enforced while grounding
    let mistyped = parse_plan("(pick-up nonexistent)", &domain)?;
    if let Err(e) = execute_plan(&domain, &problem, &mistyped) {
        println!("grounding error: {e}");
    }
    Ok(())
}
