//! Frame export. A scene sequence is first flattened into display-list
//! frames; the SVG writer and the GIF rasterizer both draw from that list, so
//! the two outputs always have the same frame count.
//!
//! Frames are laid out as: key frame of scene 0, the in-between frames of
//! transition 0, key frame of scene 1, and so on. A transition of duration
//! `d` contributes `ceil(d * fps)` in-between frames at `t = k / (n + 1)`.

mod gif;
mod raster;
mod svg;

use std::collections::BTreeMap;

use crate::color::Rgb;
use crate::profile::Prefab;
use crate::scene::{ObjectOp, Scene, SceneSequence, Transition};

pub use self::gif::{export_gif, frame_delay, render_gif, GifError};
pub use self::raster::{rasterize, Raster};
pub use self::svg::{export_svg_frames, frame_to_svg};

pub const DEFAULT_FPS: u32 = 30;
pub const CANVAS_MARGIN: i64 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderSettings {
    pub fps: u32,
    /// Canvas size in scene units; `None` fits the bounding box of all scenes.
    pub canvas: Option<(u32, u32)>,
}

impl Default for RenderSettings {
    fn default() -> Self {
        RenderSettings {
            fps: DEFAULT_FPS,
            canvas: None,
        }
    }
}

/// Visible window in scene coordinates (y up).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Canvas {
    pub min_x: i64,
    pub min_y: i64,
    pub width: u32,
    pub height: u32,
}

impl Canvas {
    /// Screen x for a scene x.
    pub fn sx(&self, x: f64) -> f64 {
        x - self.min_x as f64
    }

    /// Screen y for a scene y (the axis is flipped).
    pub fn sy(&self, y: f64) -> f64 {
        (self.min_y + self.height as i64) as f64 - y
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrawItem {
    pub name: String,
    pub x: f64,
    pub y: f64,
    pub width: f64,
    pub height: f64,
    pub fill: Rgb,
    pub opacity: f64,
    pub depth: i64,
    pub prefab: Prefab,
    /// Text drawn at the center when the object shows its name.
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrawLine {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
    pub color: Rgb,
}

/// One frame: lines underneath, then items in ascending depth.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub lines: Vec<DrawLine>,
    pub items: Vec<DrawItem>,
}

pub fn frame_count(sequence: &SceneSequence, fps: u32) -> usize {
    sequence.scenes.len()
        + sequence
            .transitions
            .iter()
            .map(|t| in_between_count(t, fps))
            .sum::<usize>()
}

fn in_between_count(t: &Transition, fps: u32) -> usize {
    (t.duration_seconds * fps as f64).ceil().max(0.0) as usize
}

fn scene_bounds(scene: &Scene, acc: &mut Option<(i64, i64, i64, i64)>) {
    let mut add = |x0: i64, y0: i64, x1: i64, y1: i64| {
        *acc = Some(match *acc {
            None => (x0, y0, x1, y1),
            Some((a, b, c, d)) => (a.min(x0), b.min(y0), c.max(x1), d.max(y1)),
        });
    };
    for p in scene.objects.values() {
        if let Some((x, y)) = p.position() {
            add(x, y, x + p.width, y + p.height);
        }
    }
    for l in &scene.lines {
        add(l.x1.min(l.x2), l.y1.min(l.y2), l.x1.max(l.x2), l.y1.max(l.y2));
    }
}

/// Canvas covering every visible object and line in the sequence's scenes.
pub fn auto_canvas(sequence: &SceneSequence, settings: &RenderSettings) -> Canvas {
    let mut bounds = None;
    for s in &sequence.scenes {
        scene_bounds(s, &mut bounds);
    }
    let (x0, y0, x1, y1) = bounds.unwrap_or((0, 0, 0, 0));
    let (min_x, min_y) = (x0 - CANVAS_MARGIN, y0 - CANVAS_MARGIN);
    let (width, height) = settings.canvas.unwrap_or((
        (x1 - x0 + 2 * CANVAS_MARGIN) as u32,
        (y1 - y0 + 2 * CANVAS_MARGIN) as u32,
    ));
    Canvas {
        min_x,
        min_y,
        width,
        height,
    }
}

fn item(name: &str, scene: &Scene, opacity: f64) -> Option<DrawItem> {
    let p = scene.objects.get(name)?;
    let (x, y) = p.position()?;
    let fill = if scene.at_goal.contains(name) {
        p.color.darkened()
    } else {
        p.color
    };
    Some(DrawItem {
        name: name.to_string(),
        x: x as f64,
        y: y as f64,
        width: p.width as f64,
        height: p.height as f64,
        fill,
        opacity,
        depth: p.depth,
        prefab: p.prefab.clone(),
        label: p.showname.then(|| p.label.clone()),
    })
}

fn finish(items: BTreeMap<String, DrawItem>, scene: &Scene) -> Frame {
    let mut items: Vec<DrawItem> = items.into_values().collect();
    items.sort_by(|a, b| a.depth.cmp(&b.depth).then_with(|| a.name.cmp(&b.name)));
    let lines = scene
        .lines
        .iter()
        .map(|l| DrawLine {
            x1: l.x1 as f64,
            y1: l.y1 as f64,
            x2: l.x2 as f64,
            y2: l.y2 as f64,
            color: l.color,
        })
        .collect();
    Frame { lines, items }
}

pub fn key_frame(scene: &Scene) -> Frame {
    let items = scene
        .visible
        .iter()
        .filter_map(|n| item(n, scene, 1.0).map(|i| (n.clone(), i)))
        .collect();
    finish(items, scene)
}

fn lerp(a: i64, b: i64, t: f64) -> f64 {
    a as f64 + (b - a) as f64 * t
}

/// Frame at fraction `t` (0 < t < 1) of the transition from `before` to `after`.
pub fn in_between_frame(before: &Scene, after: &Scene, transition: &Transition, t: f64) -> Frame {
    let mut items: BTreeMap<String, DrawItem> = before
        .visible
        .iter()
        .filter_map(|n| item(n, before, 1.0).map(|i| (n.clone(), i)))
        .collect();
    for op in &transition.ops {
        match op {
            ObjectOp::Translate { object, from, to } => {
                if let Some(i) = items.get_mut(object) {
                    i.x = lerp(from.0, to.0, t);
                    i.y = lerp(from.1, to.1, t);
                }
            }
            ObjectOp::Scale { object, from, to } => {
                if let Some(i) = items.get_mut(object) {
                    i.width = lerp(from.0, to.0, t);
                    i.height = lerp(from.1, to.1, t);
                }
            }
            ObjectOp::Appear { object, .. } => {
                if let Some(i) = item(object, after, t) {
                    items.insert(object.clone(), i);
                }
            }
            ObjectOp::Disappear { object, .. } => {
                if let Some(i) = items.get_mut(object) {
                    i.opacity = 1.0 - t;
                }
            }
        }
    }
    finish(items, if t < 0.5 { before } else { after })
}

/// All frames of the sequence, in playback order.
pub fn build_frames(sequence: &SceneSequence, settings: &RenderSettings) -> Vec<Frame> {
    let fps = settings.fps.max(1);
    let mut frames = Vec::with_capacity(frame_count(sequence, fps));
    for (i, scene) in sequence.scenes.iter().enumerate() {
        frames.push(key_frame(scene));
        if let (Some(t), Some(next)) = (sequence.transitions.get(i), sequence.scenes.get(i + 1)) {
            let n = in_between_count(t, fps);
            for k in 1..=n {
                frames.push(in_between_frame(scene, next, t, k as f64 / (n + 1) as f64));
            }
        }
    }
    frames
}
