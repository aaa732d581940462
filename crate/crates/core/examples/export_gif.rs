//! Towers of Hanoi as SVG frames and an animated GIF.
//!
//!     cargo run --release --example export_gif -- [output-dir] [fps]

use std::path::PathBuf;

use planim::pipeline::Inputs;
use planim::render::{frame_count, RenderSettings};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let out: PathBuf = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| std::env::temp_dir().join("planim-hanoi"));
    let fps: u32 = args.next().map(|s| s.parse()).transpose()?.unwrap_or(12);

    let inputs = Inputs::parse(
        include_str!("../fixtures/hanoi/domain.pddl"),
        include_str!("../fixtures/hanoi/problem.pddl"),
        include_str!("../fixtures/hanoi/animation.pddl"),
    )?;
    let plan = inputs.parse_plan(include_str!("../fixtures/hanoi/plan.txt"))?;
    let compiled = inputs.compile(&plan, 0)?;
    let settings = RenderSettings { fps, canvas: None };

    let frames_dir = out.join("frames");
    std::fs::create_dir_all(&frames_dir)?;
    let frames = compiled.svg_frames(&settings);
    for (i, svg) in frames.iter().enumerate() {
        std::fs::write(frames_dir.join(format!("frame-{:06}.svg", i + 1)), svg)?;
    }
    let gif = compiled.gif(&settings)?;
    let gif_path = out.join("hanoi.gif");
    std::fs::write(&gif_path, &gif)?;

    assert_eq!(frames.len(), frame_count(&compiled.sequence, fps));
    println!("{} SVG frames in {}", frames.len(), frames_dir.display());
    println!("{} byte GIF at {}", gif.len(), gif_path.display());
    Ok(())
}
