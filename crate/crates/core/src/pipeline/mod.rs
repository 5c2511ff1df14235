//! Manifest-driven batch processing: seed, grow, write, evaluate.

mod manifest;
mod palette;
mod run;

pub use manifest::{load_manifest, parse_manifest, ManifestEntry};
pub use palette::{colorize_labels, pascal_color, IGNORE_COLOR};
pub use run::{
    evaluate_predictions, label_entry, labels_file, run_pipeline, seeds_file, vis_file,
    EntryLabels, EntryReport, EvalStatus, Evaluation, RunOptions, Stage, Summary,
};
