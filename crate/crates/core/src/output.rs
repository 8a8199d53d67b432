//! Plain-text number formatting shared by every CSV writer.

use std::io::{self, Write};

/// Twelve significant digits in scientific notation. Zero is printed as
/// `0.00000000000e0` and negative zero is folded into it, so output does
/// not depend on the sign of a vanishing roundoff term.
pub fn fmt_float(x: f64) -> String {
    if x == 0.0 {
        return format!("{:.11e}", 0.0);
    }
    format!("{x:.11e}")
}

/// Writes one CSV line from already-formatted fields.
pub fn write_row<W: Write, S: AsRef<str>>(w: &mut W, fields: &[S]) -> io::Result<()> {
    let mut first = true;
    for f in fields {
        if !first {
            w.write_all(b",")?;
        }
        w.write_all(f.as_ref().as_bytes())?;
        first = false;
    }
    w.write_all(b"\n")
}
