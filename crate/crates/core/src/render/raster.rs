use std::collections::HashMap;

use base64::Engine;
use image::RgbaImage;

use crate::color::Rgb;
use crate::profile::{Prefab, Shape};

use super::{Canvas, Frame};

/// An RGB pixel buffer, one canvas unit per pixel. Text is not drawn.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Raster {
    pub width: u32,
    pub height: u32,
    /// Row-major RGB triples.
    pub pixels: Vec<u8>,
}

impl Raster {
    fn new(width: u32, height: u32) -> Self {
        Raster {
            width,
            height,
            pixels: vec![0xFF; width as usize * height as usize * 3],
        }
    }

    pub fn pixel(&self, x: u32, y: u32) -> Rgb {
        let i = (y as usize * self.width as usize + x as usize) * 3;
        Rgb(self.pixels[i], self.pixels[i + 1], self.pixels[i + 2])
    }

    /// Fills columns `xs` of row `y`, blending unless fully opaque.
    fn fill_row(&mut self, y: i64, xs: std::ops::Range<i64>, c: Rgb, alpha: f64) {
        if alpha < 1.0 {
            for x in xs {
                self.blend(x, y, c, alpha);
            }
            return;
        }
        if y < 0 || y >= self.height as i64 {
            return;
        }
        let (x0, x1) = (xs.start.max(0), xs.end.min(self.width as i64));
        if x0 >= x1 {
            return;
        }
        let row = y as usize * self.width as usize;
        for px in self.pixels[(row + x0 as usize) * 3..(row + x1 as usize) * 3].chunks_exact_mut(3) {
            px.copy_from_slice(&[c.0, c.1, c.2]);
        }
    }

    fn blend(&mut self, x: i64, y: i64, c: Rgb, alpha: f64) {
        if x < 0 || y < 0 || x >= self.width as i64 || y >= self.height as i64 || alpha <= 0.0 {
            return;
        }
        let i = (y as usize * self.width as usize + x as usize) * 3;
        for (k, src) in [c.0, c.1, c.2].into_iter().enumerate() {
            let dst = self.pixels[i + k] as f64;
            self.pixels[i + k] = (src as f64 * alpha + dst * (1.0 - alpha)).round() as u8;
        }
    }

    /// Pixel index range whose centers fall in `[lo, hi)`.
    fn span(lo: f64, hi: f64, limit: u32) -> std::ops::Range<i64> {
        let start = (lo - 0.5).ceil().max(0.0) as i64;
        let end = ((hi - 0.5).ceil() as i64).min(limit as i64);
        start..end.max(start)
    }
}

/// Decoded sprite images, keyed by base64 payload.
#[derive(Default)]
pub(crate) struct ImageCache {
    images: HashMap<String, Option<RgbaImage>>,
}

impl ImageCache {
    fn get(&mut self, payload: &str) -> Option<&RgbaImage> {
        self.images
            .entry(payload.to_string())
            .or_insert_with(|| {
                let bytes = base64::engine::general_purpose::STANDARD.decode(payload.trim()).ok()?;
                image::load_from_memory(&bytes).ok().map(|i| i.to_rgba8())
            })
            .as_ref()
    }
}

pub(crate) fn rasterize_cached(frame: &Frame, canvas: &Canvas, cache: &mut ImageCache) -> Raster {
    let mut r = Raster::new(canvas.width, canvas.height);
    for l in &frame.lines {
        let (x1, y1) = (canvas.sx(l.x1), canvas.sy(l.y1));
        let (x2, y2) = (canvas.sx(l.x2), canvas.sy(l.y2));
        let steps = (x2 - x1).abs().max((y2 - y1).abs()).ceil().max(1.0) as i64;
        for s in 0..=steps {
            let t = s as f64 / steps as f64;
            let x = (x1 + (x2 - x1) * t).floor() as i64;
            let y = (y1 + (y2 - y1) * t).floor() as i64;
            for (dx, dy) in [(0, 0), (-1, 0), (0, -1), (-1, -1)] {
                r.blend(x + dx, y + dy, l.color, 1.0);
            }
        }
    }
    for item in &frame.items {
        let left = canvas.sx(item.x);
        let top = canvas.sy(item.y + item.height);
        let xs = Raster::span(left, left + item.width, r.width);
        let ys = Raster::span(top, top + item.height, r.height);
        match &item.prefab {
            Prefab::Builtin(Shape::Rectangle) => {
                for y in ys {
                    r.fill_row(y, xs.clone(), item.fill, item.opacity);
                }
            }
            Prefab::Builtin(Shape::Ellipse) => {
                let (rx, ry) = (item.width / 2.0, item.height / 2.0);
                let (cx, cy) = (left + rx, top + ry);
                for y in ys {
                    for x in xs.clone() {
                        let dx = (x as f64 + 0.5 - cx) / rx;
                        let dy = (y as f64 + 0.5 - cy) / ry;
                        if dx * dx + dy * dy <= 1.0 {
                            r.blend(x, y, item.fill, item.opacity);
                        }
                    }
                }
            }
            Prefab::Base64(payload) => match cache.get(payload) {
                Some(img) if img.width() > 0 && img.height() > 0 => {
                    for y in ys {
                        for x in xs.clone() {
                            let u = ((x as f64 + 0.5 - left) / item.width * img.width() as f64) as u32;
                            let v = ((y as f64 + 0.5 - top) / item.height * img.height() as f64) as u32;
                            let p = img.get_pixel(u.min(img.width() - 1), v.min(img.height() - 1)).0;
                            r.blend(x, y, Rgb(p[0], p[1], p[2]), item.opacity * p[3] as f64 / 255.0);
                        }
                    }
                }
                _ => {
                    for y in ys {
                        r.fill_row(y, xs.clone(), item.fill, item.opacity);
                    }
                }
            },
        }
    }
    r
}

/// Draws one frame onto a white canvas.
pub fn rasterize(frame: &Frame, canvas: &Canvas) -> Raster {
    rasterize_cached(frame, canvas, &mut ImageCache::default())
}
