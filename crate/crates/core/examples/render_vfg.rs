//! Compiles each bundled domain into a VFG document and reads it back.
//!
//!     cargo run --example render_vfg -- [output-dir]

use std::path::PathBuf;

use planim::pipeline::Inputs;
use planim::vfg::deserialize_vfg;

const FIXTURES: [(&str, [&str; 4]); 4] = [
    (
        "blocksworld",
        [
            include_str!("../fixtures/blocksworld/domain.pddl"),
            include_str!("../fixtures/blocksworld/problem.pddl"),
            include_str!("../fixtures/blocksworld/animation.pddl"),
            include_str!("../fixtures/blocksworld/plan.txt"),
        ],
    ),
    (
        "grid",
        [
            include_str!("../fixtures/grid/domain.pddl"),
            include_str!("../fixtures/grid/problem.pddl"),
            include_str!("../fixtures/grid/animation.pddl"),
            include_str!("../fixtures/grid/plan.txt"),
        ],
    ),
    (
        "hanoi",
        [
            include_str!("../fixtures/hanoi/domain.pddl"),
            include_str!("../fixtures/hanoi/problem.pddl"),
            include_str!("../fixtures/hanoi/animation.pddl"),
            include_str!("../fixtures/hanoi/plan.txt"),
        ],
    ),
    (
        "logistics",
        [
            include_str!("../fixtures/logistics/domain.pddl"),
            include_str!("../fixtures/logistics/problem.pddl"),
            include_str!("../fixtures/logistics/animation.pddl"),
            include_str!("../fixtures/logistics/plan.txt"),
        ],
    ),
];

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out: PathBuf = std::env::args_os()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("planim-vfg"));
    std::fs::create_dir_all(&out)?;

    for (name, [domain, problem, profile, plan]) in FIXTURES {
        let inputs = Inputs::parse(domain, problem, profile)?;
        let plan = inputs.parse_plan(plan)?;
        let compiled = inputs.compile(&plan, 0)?;
        let bytes = compiled.vfg_bytes();
        let path = out.join(format!("{name}.vfg"));
        std::fs::write(&path, &bytes)?;

        let doc = deserialize_vfg(&std::fs::read(&path)?)?;
        let objects = doc.steps[0].scene.objects.len();
        println!(
            "{name:<12} {} steps, {objects} objects, {} goals, {} bytes -> {}",
            doc.steps.len(),
            doc.goals.len(),
            bytes.len(),
            path.display()
        );
    }
    Ok(())
}
