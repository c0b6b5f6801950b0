//! Parameter sweeps over mixture weights and chain couplings, CSV output and
//! the command line.

pub mod cli;
pub mod csv;
pub mod plan;
pub mod run;

pub use cli::{cli_main, cli_run};
pub use csv::{emit_csv, render_csv};
pub use plan::{parse_quads, Grid, SweepMode, SweepPlan};
pub use run::{
    chain_rows, convergence_gate, ground, run_sweep, run_sweep_with, Cell, GateReport, Ground,
    RunOptions, SweepRow, GATE_TOLERANCE,
};
