//! Subgoal bookkeeping for the logistics fixture: which goal atoms hold in
//! which states, and which objects are drawn darkened as "at goal".
//!
//!     cargo run --example subgoals

use planim::pddl::{parse_domain, parse_plan, parse_problem};
use planim::plan::{at_goal_objects, execute_plan, goal_report};

const DOMAIN: &str = include_str!("../fixtures/logistics/domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/logistics/problem.pddl");
const PLAN: &str = include_str!("../fixtures/logistics/plan.txt");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = parse_domain(DOMAIN)?;
    let problem = parse_problem(PROBLEM, &domain)?;
    let plan = parse_plan(PLAN, &domain)?;
    let trajectory = execute_plan(&domain, &problem, &plan)?;
    let report = goal_report(&trajectory, &problem.goal);

    for row in &report.rows {
        let steps: Vec<String> = row.steps.iter().map(ToString::to_string).collect();
        println!("{:<14} holds in states [{}]", row.atom.to_string(), steps.join(", "));
    }
    println!();
    for (i, state) in trajectory.states.iter().enumerate() {
        let action = i
            .checked_sub(1)
            .map(|k| trajectory.actions[k].to_string())
            .unwrap_or_default();
        let at_goal: Vec<String> = at_goal_objects(state, &problem.goal).into_iter().collect();
        println!(
            "{i:>2} {action:<28} satisfied {}/{}  at goal: {}",
            report.satisfied[i].len(),
            problem.goal.len(),
            at_goal.join(" ")
        );
    }
    let last = trajectory.states.len() - 1;
    println!("\ngoal reached: {}", report.all_satisfied_at(last));
    Ok(())
}
