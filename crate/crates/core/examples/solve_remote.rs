//! Asks a planning service for a Blocksworld plan and animates the answer.
//! Uses $PLANIM_ENDPOINT when set, the public solver otherwise.
//!
//!     PLANIM_ENDPOINT=http://localhost:5000/solve cargo run --example solve_remote

use planim::pipeline::Inputs;
use planim::service::{solve_remote, SolveRequest};

const DOMAIN: &str = include_str!("../fixtures/blocksworld/domain.pddl");
const PROBLEM: &str = include_str!("../fixtures/blocksworld/problem.pddl");
const PROFILE: &str = include_str!("../fixtures/blocksworld/animation.pddl");

fn main() {
    let mut request = SolveRequest::new(DOMAIN, PROBLEM);
    request.timeout_seconds = 20;
    println!("asking {}", request.endpoint_url);

    let plan = match solve_remote(&request).and_then(|r| r.into_plan()) {
        Ok(plan) => plan,
        Err(e) => {
            eprintln!("no plan: {e}");
            std::process::exit(3);
        }
    };
    println!("{plan}");

    let inputs = Inputs::parse(DOMAIN, PROBLEM, PROFILE).expect("bundled inputs parse");
    match inputs.compile(&plan, 0) {
        Ok(c) => println!(
            "animated {} states, {} VFG bytes",
            c.sequence.scenes.len(),
            c.vfg_bytes().len()
        ),
        Err(e) => eprintln!("service plan does not animate: {e}"),
    }
}
