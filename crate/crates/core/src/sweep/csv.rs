//! CSV rendering: a `# plan:` echo line, a header, then one line per row.
//! Floats use 17 significant digits, so values round-trip exactly.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

use super::plan::{SweepMode, SweepPlan};
use super::run::{Cell, SweepRow};

fn render_cell(out: &mut String, cell: Cell) {
    match cell {
        Cell::Float(x) => write!(out, "{x:.16e}"),
        Cell::Int(n) => write!(out, "{n}"),
    }
    .expect("writing to a String");
}

/// CSV text for `rows` of `mode`, with an optional `# plan:` echo.
pub fn render_csv(mode: SweepMode, rows: &[SweepRow], echo: Option<&str>) -> Result<String> {
    let mut out = String::new();
    if let Some(echo) = echo {
        out.push_str("# plan: ");
        out.push_str(echo);
        out.push('\n');
    }
    out.push_str(&SweepRow::header(mode).join(","));
    out.push('\n');
    for row in rows {
        if row.mode() != mode {
            return Err(Error::InvalidPlan(format!(
                "{} row in a {mode} table",
                row.mode()
            )));
        }
        for (i, cell) in row.cells().into_iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            render_cell(&mut out, cell);
        }
        out.push('\n');
    }
    Ok(out)
}

/// Writes the rows of `plan` to `path`, echoing the plan.
pub fn emit_csv(plan: &SweepPlan, rows: &[SweepRow], path: &Path) -> Result<()> {
    let text = render_csv(plan.mode, rows, Some(&plan.echo()))?;
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
