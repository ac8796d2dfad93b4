//! Driver for `dephasing-core`: configuration, parameter sweeps, and CSV/SVG export.

pub mod analysis;
pub mod config;
pub mod error;
pub mod run;
pub mod svg;
pub mod table;
pub mod trajectory;

pub use config::{Cli, RunConfig};
pub use error::{CliError, FieldError};
pub use run::{run, write_outputs, RunOutput, Summary};
pub use svg::{export_svg, render_svg, FigKind};
pub use table::{export_csv, read_rows, write_rows};
pub use trajectory::{Row, Trajectory};
