use std::fmt::Write;

use crate::profile::{Prefab, Shape};
use crate::scene::SceneSequence;

use super::{auto_canvas, build_frames, Canvas, Frame, RenderSettings};

/// Fixed-precision number without trailing zeros, so output bytes never
/// depend on float formatting quirks.
fn num(v: f64) -> String {
    let s = format!("{:.2}", v);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    match s {
        "-0" | "" => "0".to_string(),
        s => s.to_string(),
    }
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            c => out.push(c),
        }
    }
    out
}

fn mime(payload: &str) -> &'static str {
    if payload.starts_with("/9j/") {
        "image/jpeg"
    } else {
        "image/png"
    }
}

/// One frame as a standalone SVG 1.1 document.
pub fn frame_to_svg(frame: &Frame, canvas: &Canvas) -> String {
    let (w, h) = (canvas.width, canvas.height);
    let mut out = String::new();
    let _ = write!(
        out,
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" version=\"1.1\" width=\"{w}\" height=\"{h}\" viewBox=\"0 0 {w} {h}\">\n<rect x=\"0\" y=\"0\" width=\"{w}\" height=\"{h}\" fill=\"#FFFFFF\"/>\n"
    );
    for l in &frame.lines {
        let _ = writeln!(
            out,
            "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"2\"/>",
            num(canvas.sx(l.x1)),
            num(canvas.sy(l.y1)),
            num(canvas.sx(l.x2)),
            num(canvas.sy(l.y2)),
            l.color
        );
    }
    for i in &frame.items {
        let left = canvas.sx(i.x);
        let top = canvas.sy(i.y + i.height);
        let opacity = if i.opacity < 1.0 {
            format!(" opacity=\"{}\"", num(i.opacity))
        } else {
            String::new()
        };
        let _ = write!(out, "<g id=\"{}\"{opacity}>", escape(&i.name));
        match &i.prefab {
            Prefab::Builtin(Shape::Rectangle) => {
                let _ = write!(
                    out,
                    "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"{}\"/>",
                    num(left),
                    num(top),
                    num(i.width),
                    num(i.height),
                    i.fill
                );
            }
            Prefab::Builtin(Shape::Ellipse) => {
                let _ = write!(
                    out,
                    "<ellipse cx=\"{}\" cy=\"{}\" rx=\"{}\" ry=\"{}\" fill=\"{}\"/>",
                    num(left + i.width / 2.0),
                    num(top + i.height / 2.0),
                    num(i.width / 2.0),
                    num(i.height / 2.0),
                    i.fill
                );
            }
            Prefab::Base64(payload) => {
                let _ = write!(
                    out,
                    "<image x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" preserveAspectRatio=\"none\" xlink:href=\"data:{};base64,{}\"/>",
                    num(left),
                    num(top),
                    num(i.width),
                    num(i.height),
                    mime(payload),
                    payload
                );
            }
        }
        if let Some(label) = &i.label {
            let _ = write!(
                out,
                "<text x=\"{}\" y=\"{}\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" dominant-baseline=\"middle\">{}</text>",
                num(left + i.width / 2.0),
                num(top + i.height / 2.0),
                escape(label)
            );
        }
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}

/// Every frame of the sequence as SVG bytes, in playback order.
pub fn export_svg_frames(sequence: &SceneSequence, settings: &RenderSettings) -> Vec<Vec<u8>> {
    let canvas = auto_canvas(sequence, settings);
    build_frames(sequence, settings)
        .iter()
        .map(|f| frame_to_svg(f, &canvas).into_bytes())
        .collect()
}
