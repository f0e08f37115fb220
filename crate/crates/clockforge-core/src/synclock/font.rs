//! Embedded vector-stroke font for clock numerals.
//!
//! Glyphs are polylines in a unit-height box (y up, 0 at the baseline) that
//! get rasterized as capsule strokes. Keeping the font in code makes builds
//! hermetic and renders bit-reproducible — no system font files involved.

/// A glyph: advance width in glyph units plus its polyline strokes.
pub struct Glyph {
    pub width: f64,
    pub strokes: &'static [&'static [(f64, f64)]],
}

const D0: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[
        (0.00, 0.15),
        (0.00, 0.85),
        (0.14, 1.00),
        (0.46, 1.00),
        (0.60, 0.85),
        (0.60, 0.15),
        (0.46, 0.00),
        (0.14, 0.00),
        (0.00, 0.15),
    ]],
};

const D1: Glyph = Glyph {
    width: 0.34,
    strokes: &[&[(0.02, 0.76), (0.24, 1.00), (0.24, 0.00)]],
};

const D2: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[
        (0.02, 0.82),
        (0.16, 1.00),
        (0.46, 1.00),
        (0.60, 0.82),
        (0.60, 0.62),
        (0.00, 0.12),
        (0.00, 0.00),
        (0.60, 0.00),
    ]],
};

const D3: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[
        (0.02, 0.86),
        (0.16, 1.00),
        (0.46, 1.00),
        (0.60, 0.86),
        (0.60, 0.64),
        (0.40, 0.53),
        (0.60, 0.40),
        (0.60, 0.14),
        (0.46, 0.00),
        (0.15, 0.00),
        (0.01, 0.13),
    ]],
};

const D4: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[(0.46, 0.00), (0.46, 1.00), (0.00, 0.34), (0.60, 0.34)]],
};

const D5: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[
        (0.58, 1.00),
        (0.04, 1.00),
        (0.02, 0.55),
        (0.44, 0.58),
        (0.60, 0.42),
        (0.60, 0.14),
        (0.46, 0.00),
        (0.14, 0.00),
        (0.00, 0.12),
    ]],
};

const D6: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[
        (0.54, 1.00),
        (0.20, 1.00),
        (0.02, 0.70),
        (0.00, 0.16),
        (0.13, 0.00),
        (0.47, 0.00),
        (0.60, 0.15),
        (0.60, 0.40),
        (0.46, 0.54),
        (0.02, 0.50),
    ]],
};

const D7: Glyph = Glyph {
    width: 0.56,
    strokes: &[&[(0.00, 1.00), (0.56, 1.00), (0.20, 0.00)]],
};

const D8: Glyph = Glyph {
    width: 0.60,
    strokes: &[
        &[
            (0.30, 0.55),
            (0.06, 0.66),
            (0.02, 0.86),
            (0.16, 1.00),
            (0.44, 1.00),
            (0.58, 0.86),
            (0.54, 0.66),
            (0.30, 0.55),
        ],
        &[
            (0.30, 0.55),
            (0.02, 0.40),
            (0.00, 0.14),
            (0.14, 0.00),
            (0.46, 0.00),
            (0.60, 0.14),
            (0.58, 0.40),
            (0.30, 0.55),
        ],
    ],
};

const D9: Glyph = Glyph {
    width: 0.60,
    strokes: &[&[
        (0.06, 0.00),
        (0.40, 0.00),
        (0.58, 0.30),
        (0.60, 0.84),
        (0.47, 1.00),
        (0.13, 1.00),
        (0.00, 0.85),
        (0.00, 0.60),
        (0.14, 0.46),
        (0.58, 0.50),
    ]],
};

const ROMAN_I: Glyph = Glyph {
    width: 0.16,
    strokes: &[&[(0.08, 0.00), (0.08, 1.00)]],
};

const ROMAN_V: Glyph = Glyph {
    width: 0.52,
    strokes: &[&[(0.00, 1.00), (0.26, 0.00), (0.52, 1.00)]],
};

const ROMAN_X: Glyph = Glyph {
    width: 0.52,
    strokes: &[
        &[(0.00, 1.00), (0.52, 0.00)],
        &[(0.00, 0.00), (0.52, 1.00)],
    ],
};

/// Looks up a glyph; supported characters are digits and I/V/X.
pub fn glyph(ch: char) -> Option<&'static Glyph> {
    match ch {
        '0' => Some(&D0),
        '1' => Some(&D1),
        '2' => Some(&D2),
        '3' => Some(&D3),
        '4' => Some(&D4),
        '5' => Some(&D5),
        '6' => Some(&D6),
        '7' => Some(&D7),
        '8' => Some(&D8),
        '9' => Some(&D9),
        'I' => Some(&ROMAN_I),
        'V' => Some(&ROMAN_V),
        'X' => Some(&ROMAN_X),
        _ => None,
    }
}

/// Inter-glyph spacing in glyph units.
pub const LETTER_SPACING: f64 = 0.14;

/// Total advance width of a string in glyph units (1.0 = glyph height).
pub fn text_width(text: &str) -> f64 {
    let mut w = 0.0;
    let mut count = 0;
    for ch in text.chars() {
        if let Some(g) = glyph(ch) {
            w += g.width;
            count += 1;
        }
    }
    if count > 1 {
        w += LETTER_SPACING * (count - 1) as f64;
    }
    w
}

/// Roman numeral spellings for the twelve hour marks.
pub fn roman(n: u8) -> &'static str {
    match n {
        1 => "I",
        2 => "II",
        3 => "III",
        4 => "IV",
        5 => "V",
        6 => "VI",
        7 => "VII",
        8 => "VIII",
        9 => "IX",
        10 => "X",
        11 => "XI",
        12 => "XII",
        _ => "",
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_needed_glyphs_exist() {
        for ch in "0123456789IVX".chars() {
            assert!(glyph(ch).is_some(), "missing glyph {ch}");
        }
    }

    #[test]
    fn widths_are_positive() {
        for n in 1..=12 {
            assert!(text_width(&n.to_string()) > 0.0);
            assert!(text_width(roman(n)) > 0.0);
        }
    }
}
