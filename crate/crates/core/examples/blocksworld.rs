//! The three-block worked example: run the plan, build every scene and print
//! where each block ends up.
//!
//!     cargo run --example blocksworld

use planim::pddl::{parse_domain, parse_plan, parse_problem};
use planim::plan::execute_plan;
use planim::profile::parse_profile;
use planim::scene::SceneBuilder;

const DOMAIN: &str = include_str!("../fixtures/blocksworld/domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/blocksworld/problem.pddl");
const PROFILE: &str = include_str!("../fixtures/blocksworld/animation.pddl");
const PLAN: &str = include_str!("../fixtures/blocksworld/plan.txt");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let domain = parse_domain(DOMAIN)?;
    let problem = parse_problem(PROBLEM, &domain)?;
    let profile = parse_profile(PROFILE)?;
    let plan = parse_plan(PLAN, &domain)?;

    let trajectory = execute_plan(&domain, &problem, &plan)?;
    let builder = SceneBuilder::new(&domain, &problem, &profile, 0);
    let sequence = builder.synthesize_sequence(&trajectory)?;

    for (i, scene) in sequence.scenes.iter().enumerate() {
        let step = match i {
            0 => "initial state".to_string(),
            _ => trajectory.actions[i - 1].to_string(),
        };
        println!("{i}: {step}");
        for block in ["a", "b", "c"] {
            let p = &scene.objects[block];
            match p.position() {
                Some((x, y)) => println!("     {block} at ({x}, {y})"),
                None => println!("     {block} not placed"),
            }
        }
        if let Some(t) = i.checked_sub(1).map(|k| &sequence.transitions[k]) {
            let ops: Vec<String> = t
                .ops
                .iter()
                .map(|op| format!("{} {}", op.kind(), op.object()))
                .collect();
            println!("     animated: {}", ops.join(", "));
        }
    }
    Ok(())
}
