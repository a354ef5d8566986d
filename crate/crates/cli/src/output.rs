//! Deterministic text rendering.

use ptqs_core::Complex;

pub const SIG_DIGITS: usize = 12;

/// `x` with [`SIG_DIGITS`] significant digits, fixed notation for
/// `1e-5 <= |x| < 1e12` and scientific otherwise. `-0` prints as `0`.
pub fn fmt_num(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.*}", SIG_DIGITS - 1, 0.0);
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..12).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        format!("{:.*}", decimals, x)
    } else {
        sci
    }
}

/// `a+bi` / `a-bi`.
pub fn fmt_complex(z: Complex) -> String {
    let im = fmt_num(z.im);
    match im.strip_prefix('-') {
        Some(abs) => format!("{}-{}i", fmt_num(z.re), abs),
        None => format!("{}+{}i", fmt_num(z.re), im),
    }
}

/// Comma-separated table with a header row.
pub struct Csv {
    out: String,
    width: usize,
}

impl Csv {
    pub fn new(header: &[&str]) -> Self {
        Self {
            out: header.join(",") + "\n",
            width: header.len(),
        }
    }

    pub fn row<S: AsRef<str>>(&mut self, cells: &[S]) {
        debug_assert_eq!(cells.len(), self.width);
        let cells: Vec<&str> = cells.iter().map(AsRef::as_ref).collect();
        self.out.push_str(&cells.join(","));
        self.out.push('\n');
    }

    pub fn numbers(&mut self, values: &[f64]) {
        let cells: Vec<String> = values.iter().map(|&v| fmt_num(v)).collect();
        self.row(&cells);
    }

    pub fn finish(self) -> String {
        self.out
    }
}
