use std::fmt::Write as _;
use std::path::Path;

use quartic::Grid;
use serde::Serialize;

use crate::failure::Failure;

/// `x,<names...>` followed by one row per grid point, 17 significant digits.
pub fn columns_csv(grid: &Grid, names: &[String], columns: &[&[f64]]) -> String {
    let mut out = String::from("x");
    for name in names {
        out.push(',');
        out.push_str(name);
    }
    out.push('\n');
    for (i, x) in grid.points().enumerate() {
        let _ = write!(out, "{x:.16e}");
        for col in columns {
            let _ = write!(out, ",{:.16e}", col[i]);
        }
        out.push('\n');
    }
    out
}

pub fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::BadArguments(format!("{}: {e}", path.display())))
}

/// Pretty JSON to `out`, or to stdout when no path is given.
pub fn emit_json(value: &impl Serialize, out: Option<&Path>) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    match out {
        Some(path) => write_file(path, &text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}
