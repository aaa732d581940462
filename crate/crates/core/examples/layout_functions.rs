//! The layout library on its own, without a profile: each function reads an
//! object map and returns property writes.
//!
//!     cargo run --example layout_functions

use planim::color::Rgb;
use planim::layout::{
    align_middle, apply_smaller, calculate_label, distribute_grid_around_point, distribute_within, distributex,
    draw_line, Axis, GridSettings, Groups, LayoutResult,
};
use planim::scene::{ObjectMap, ObjectProps};

fn object(name: &str, x: Option<i64>, y: Option<i64>, w: i64, h: i64) -> (String, ObjectProps) {
    let mut p = ObjectProps::default_for(name);
    p.x = x;
    p.y = y;
    p.width = w;
    p.height = h;
    (name.to_string(), p)
}

fn show(title: &str, r: &LayoutResult) {
    println!("{title}");
    for w in &r.writes {
        println!("  {}.{} = {}", w.object, w.property, w.value);
    }
    for l in &r.lines {
        println!(
            "  line {} -> {}: ({}, {}) to ({}, {})",
            l.from, l.to, l.x1, l.y1, l.x2, l.y2
        );
    }
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let objects: ObjectMap = [
        object("a", None, None, 40, 40),
        object("b", None, None, 60, 30),
        object("c", None, None, 20, 50),
        object("box", Some(0), Some(0), 300, 100),
        object("dot", Some(200), Some(150), 10, 10),
    ]
    .into_iter()
    .collect();
    let group: Vec<String> = ["c", "a", "b"].iter().map(|s| s.to_string()).collect();

    show("distributex, 40 between", &distributex(&group, 40, &objects)?);
    show(
        "distribute_within box, horizontal",
        &distribute_within(&group, "box", Axis::Horizontal, &objects)?,
    );
    let grid = GridSettings {
        x: 100,
        y: 100,
        spacebtwn: 10,
        columns: Some(2),
    };
    show(
        "grid around (100, 100), two columns",
        &distribute_grid_around_point(&group, &grid, &objects)?,
    );
    show("align a on box", &align_middle("a", "box", &objects)?);
    show("apply_smaller b by 0.5", &apply_smaller("b", 0.5, &objects)?);
    show("line box -> dot", &draw_line("box", "dot", Rgb::BLACK, &objects)?);

    let mut held = Groups::new();
    held.insert(vec!["t1".into()], vec!["p1".into(), "p2".into()]);
    held.insert(vec!["t2".into()], vec!["p3".into()]);
    show("labels per truck", &calculate_label(&held)?);

    // placing relative to an unplaced object is an error the scene builder retries
    if let Err(e) = align_middle("a", "b", &objects) {
        println!("align a on b: {e}");
    }
    Ok(())
}
