//! JSON model files, trajectory CSV and the built-in scenarios.

mod model_file;
mod presets;
mod trajectory_csv;

pub use model_file::{EdgeFamily, EdgeOrientation, EdgeRecord, GeneRecord, ModelFile, SourceRef, Units};
pub use presets::{preset, vinoth_reference, Preset, PRESET_NAMES};
pub use trajectory_csv::{read_trajectory, read_trajectory_file, write_trajectory, write_trajectory_file};
