//! CSV tables. Numbers use [`sig15`], angles are radians, lines end in `\n`.

use std::io::{self, Write};

use crate::format::sig15;
use crate::report::SweepRow;

pub const SWEEP_HEADER: &str = "a,regime,kite_theta1";
pub const COUNT_HEADER: &str = "a2,a3,root_count,class_count,root1,root2,root3";

pub struct CountRow {
    pub a2: f64,
    pub a3: f64,
    pub root_count: usize,
    pub class_count: usize,
    pub roots: Vec<f64>,
}

pub fn regime_label(r: crate::report::RegimeName) -> &'static str {
    use crate::report::RegimeName::*;
    match r {
        SquareOnly => "square_only",
        Critical => "critical",
        SquareAndKite => "square_and_kite",
    }
}

/// `rows` must carry radians; the JSON rows may be in degrees, these never are.
pub fn write_sweep<W: Write>(w: &mut W, rows: &[SweepRow]) -> io::Result<()> {
    writeln!(w, "{SWEEP_HEADER}")?;
    for r in rows {
        let kite = r.kite_theta1.map(sig15).unwrap_or_default();
        writeln!(w, "{},{},{}", sig15(r.a), regime_label(r.regime), kite)?;
    }
    Ok(())
}

pub fn write_count<W: Write>(w: &mut W, rows: &[CountRow]) -> io::Result<()> {
    writeln!(w, "{COUNT_HEADER}")?;
    for r in rows {
        write!(
            w,
            "{},{},{},{}",
            sig15(r.a2),
            sig15(r.a3),
            r.root_count,
            r.class_count
        )?;
        for i in 0..3 {
            match r.roots.get(i) {
                Some(&x) => write!(w, ",{}", sig15(x))?,
                None => write!(w, ",")?,
            }
        }
        writeln!(w)?;
    }
    Ok(())
}
