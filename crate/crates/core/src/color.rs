use std::fmt;

use sha2::{Digest, Sha256};

/// 24-bit RGB color.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

pub const NAMED_COLORS: [(&str, Rgb); 12] = [
    ("red", Rgb(0xFF, 0x00, 0x00)),
    ("green", Rgb(0x00, 0xFF, 0x00)),
    ("blue", Rgb(0x00, 0x00, 0xFF)),
    ("yellow", Rgb(0xFF, 0xFF, 0x00)),
    ("orange", Rgb(0xFF, 0xA5, 0x00)),
    ("purple", Rgb(0x80, 0x00, 0x80)),
    ("cyan", Rgb(0x00, 0xFF, 0xFF)),
    ("magenta", Rgb(0xFF, 0x00, 0xFF)),
    ("black", Rgb(0x00, 0x00, 0x00)),
    ("white", Rgb(0xFF, 0xFF, 0xFF)),
    ("gray", Rgb(0x80, 0x80, 0x80)),
    ("brown", Rgb(0x8B, 0x45, 0x13)),
];

impl Rgb {
    pub const BLACK: Rgb = Rgb(0, 0, 0);
    pub const WHITE: Rgb = Rgb(0xFF, 0xFF, 0xFF);
    pub const GRAY: Rgb = Rgb(0x80, 0x80, 0x80);

    pub fn named(name: &str) -> Option<Rgb> {
        NAMED_COLORS
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, c)| *c)
    }

    /// Parses `#RRGGBB` (either case).
    pub fn from_hex(text: &str) -> Option<Rgb> {
        let hex = text.strip_prefix('#')?;
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return None;
        }
        let v = u32::from_str_radix(hex, 16).ok()?;
        Some(Rgb((v >> 16) as u8, (v >> 8) as u8, v as u8))
    }

    /// Hex triplet or named constant.
    pub fn parse(text: &str) -> Option<Rgb> {
        Rgb::from_hex(text).or_else(|| Rgb::named(text))
    }

    /// Deterministic color for `object` under `seed`.
    pub fn random_for(seed: u64, object: &str) -> Rgb {
        let mut h = Sha256::new();
        h.update(seed.to_le_bytes());
        h.update(object.as_bytes());
        let d = h.finalize();
        Rgb(d[0], d[1], d[2])
    }

    /// Each channel multiplied by 0.6, rounded half up.
    pub fn darkened(self) -> Rgb {
        let f = |c: u8| ((c as u32 * 6 + 5) / 10) as u8;
        Rgb(f(self.0), f(self.1), f(self.2))
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}
