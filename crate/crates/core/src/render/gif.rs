use std::collections::{BTreeSet, HashMap};

use color_quant::NeuQuant;
use gif::{Encoder, Repeat};
use thiserror::Error;

use crate::scene::SceneSequence;

use super::raster::{rasterize_cached, ImageCache};
use super::{auto_canvas, build_frames, Raster, RenderSettings};

#[derive(Debug, Error)]
pub enum GifError {
    #[error("no frames to encode")]
    Empty,
    #[error("frame size {width}x{height} does not fit a GIF")]
    TooLarge { width: u32, height: u32 },
    #[error("frames have different sizes")]
    SizeMismatch,
    #[error(transparent)]
    Encoding(#[from] gif::EncodingError),
}

/// Frame delay in hundredths of a second, `round(100 / fps)`.
pub fn frame_delay(fps: u32) -> u16 {
    let fps = fps.max(1);
    ((100 + fps / 2) / fps) as u16
}

enum Palette {
    Exact(HashMap<[u8; 3], u8>, Vec<u8>),
    Quantized(NeuQuant),
}

impl Palette {
    fn for_frames(frames: &[Raster]) -> Palette {
        let mut colors = BTreeSet::new();
        let mut last = None;
        'scan: for f in frames {
            for px in f.pixels.chunks_exact(3) {
                if last == Some(px) {
                    continue;
                }
                last = Some(px);
                colors.insert([px[0], px[1], px[2]]);
                if colors.len() > 256 {
                    break 'scan;
                }
            }
        }
        if colors.len() <= 256 {
            let rgb = colors.iter().flatten().copied().collect();
            let index = colors.into_iter().enumerate().map(|(i, c)| (c, i as u8)).collect();
            return Palette::Exact(index, rgb);
        }
        // train on a bounded, evenly strided sample of every frame
        let total: usize = frames.iter().map(|f| f.pixels.len() / 3).sum();
        let stride = (total / 200_000).max(1);
        let mut sample = Vec::new();
        for f in frames {
            for px in f.pixels.chunks_exact(3).step_by(stride) {
                sample.extend_from_slice(&[px[0], px[1], px[2], 0xFF]);
            }
        }
        Palette::Quantized(NeuQuant::new(10, 256, &sample))
    }

    fn rgb(&self) -> Vec<u8> {
        let mut rgb = match self {
            Palette::Exact(_, rgb) => rgb.clone(),
            Palette::Quantized(nq) => nq.color_map_rgb(),
        };
        let mut size = 2;
        while size * 3 < rgb.len() {
            size *= 2;
        }
        rgb.resize(size * 3, 0);
        rgb
    }

    fn index(&self, px: &[u8]) -> u8 {
        match self {
            Palette::Exact(map, _) => map[&[px[0], px[1], px[2]]],
            Palette::Quantized(nq) => nq.index_of(&[px[0], px[1], px[2], 0xFF]) as u8,
        }
    }
}

/// Sub-frame covering every pixel that differs from `prev`; a single
/// unchanged pixel when nothing moved.
fn changed_region(prev: &[u8], next: &[u8], width: usize) -> gif::Frame<'static> {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for (row, (a, b)) in prev.chunks_exact(width).zip(next.chunks_exact(width)).enumerate() {
        if a == b {
            continue;
        }
        let first = a.iter().zip(b).position(|(p, q)| p != q).unwrap_or(0);
        let last = width
            - 1
            - a.iter()
                .rev()
                .zip(b.iter().rev())
                .position(|(p, q)| p != q)
                .unwrap_or(0);
        x0 = x0.min(first);
        x1 = x1.max(last);
        y0 = y0.min(row);
        y1 = row;
    }
    if x0 == usize::MAX {
        (x0, y0, x1, y1) = (0, 0, 0, 0);
    }
    let sub: Vec<u8> = (y0..=y1)
        .flat_map(|y| next[y * width + x0..=y * width + x1].iter().copied())
        .collect();
    let mut frame = gif::Frame::from_indexed_pixels((x1 - x0 + 1) as u16, (y1 - y0 + 1) as u16, sub, None);
    frame.left = x0 as u16;
    frame.top = y0 as u16;
    frame
}

/// Encodes rasters as a looping GIF with one palette shared by all frames.
/// After the first frame only the changed rectangle of each frame is stored.
pub fn export_gif(frames: &[Raster], fps: u32) -> Result<Vec<u8>, GifError> {
    let first = frames.first().ok_or(GifError::Empty)?;
    let (width, height) = (first.width, first.height);
    if frames.iter().any(|f| (f.width, f.height) != (width, height)) {
        return Err(GifError::SizeMismatch);
    }
    let (w, h) = match (u16::try_from(width), u16::try_from(height)) {
        (Ok(w), Ok(h)) if w > 0 && h > 0 => (w, h),
        _ => return Err(GifError::TooLarge { width, height }),
    };
    let palette = Palette::for_frames(frames);
    let mut out = Vec::new();
    {
        let mut encoder = Encoder::new(&mut out, w, h, &palette.rgb())?;
        encoder.set_repeat(Repeat::Infinite)?;
        let delay = frame_delay(fps);
        let mut lookup: HashMap<[u8; 3], u8> = HashMap::new();
        let mut previous: Option<Vec<u8>> = None;
        for f in frames {
            let mut last: Option<(&[u8], u8)> = None;
            let indices: Vec<u8> = f
                .pixels
                .chunks_exact(3)
                .map(|px| match last {
                    Some((seen, i)) if seen == px => i,
                    _ => {
                        let i = *lookup.entry([px[0], px[1], px[2]]).or_insert_with(|| palette.index(px));
                        last = Some((px, i));
                        i
                    }
                })
                .collect();
            let mut frame = match &previous {
                None => gif::Frame::from_indexed_pixels(w, h, indices.clone(), None),
                Some(prev) => changed_region(prev, &indices, w as usize),
            };
            frame.delay = delay;
            frame.dispose = gif::DisposalMethod::Keep;
            encoder.write_frame(&frame)?;
            previous = Some(indices);
        }
    }
    Ok(out)
}

/// Rasterizes every frame of the sequence and encodes the GIF.
pub fn render_gif(sequence: &SceneSequence, settings: &RenderSettings) -> Result<Vec<u8>, GifError> {
    let canvas = auto_canvas(sequence, settings);
    let mut cache = ImageCache::default();
    let rasters: Vec<Raster> = build_frames(sequence, settings)
        .iter()
        .map(|f| rasterize_cached(f, &canvas, &mut cache))
        .collect();
    export_gif(&rasters, settings.fps)
}
