use std::collections::BTreeMap;
use std::fmt;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use crate::cam::{class_activation_map, extract_seeds, upsample_bilinear, Cam};
use crate::error::{Error, Result};
use crate::eval::{render_key_values, render_report, ConfusionAccumulator};
use crate::model::{
    load_label_map, load_rgb, load_saliency, read_tensor, rgb_to_hsv, save_label_map, GrowConfig,
    LabelMap,
};
use crate::srg::grow_regions;

use super::manifest::ManifestEntry;
use super::palette::colorize_labels;

/// How far each entry is taken.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    /// Seeds only.
    Seed,
    /// Seeds and grown labels.
    Grow,
    /// Seeds, grown labels and evaluation against ground truth.
    Full,
}

#[derive(Debug, Clone)]
pub struct RunOptions {
    pub config: GrowConfig,
    pub stage: Stage,
    /// Abort on the first failing entry instead of skipping it.
    pub strict: bool,
    /// Worker threads; `0` lets the thread pool decide.
    pub jobs: usize,
    pub class_names: BTreeMap<u8, String>,
}

impl RunOptions {
    pub fn new(config: GrowConfig, stage: Stage) -> Self {
        Self {
            config,
            stage,
            strict: false,
            jobs: 0,
            class_names: crate::eval::default_class_names(config.num_classes),
        }
    }
}

pub fn seeds_file(out_dir: &Path, image_id: &str) -> PathBuf {
    out_dir.join(format!("{image_id}_seeds.png"))
}

pub fn labels_file(out_dir: &Path, image_id: &str) -> PathBuf {
    out_dir.join(format!("{image_id}_labels.png"))
}

pub fn vis_file(out_dir: &Path, image_id: &str) -> PathBuf {
    out_dir.join(format!("{image_id}_vis.png"))
}

/// Seeds and (optionally) grown labels for one entry, in memory.
#[derive(Debug, Clone)]
pub struct EntryLabels {
    pub seeds: LabelMap,
    pub grown: Option<LabelMap>,
}

/// Runs the seed and grow stages on one entry without touching the disk
/// beyond reading its inputs.
pub fn label_entry(entry: &ManifestEntry, cfg: &GrowConfig, grow: bool) -> Result<EntryLabels> {
    cfg.validate()?;
    let saliency = load_saliency(&entry.saliency_path)?;
    let (width, height) = (saliency.width(), saliency.height());
    let acts = read_tensor(&entry.activations_path)?.into_activations()?;
    let weights = read_tensor(&entry.weights_path)?.into_weights()?;

    // Weight row `c - 1` scores object class `c`.
    let mut cams: BTreeMap<u8, Cam> = BTreeMap::new();
    for &class in entry.present_classes.classes() {
        let cam = class_activation_map(&acts, &weights, class as usize - 1)?;
        cams.insert(class, upsample_bilinear(&cam, height, width)?);
    }
    let seeds = extract_seeds(&cams, &entry.present_classes, &saliency, cfg)?;

    let grown = if grow {
        let rgb = load_rgb(&entry.image_path)?;
        let hsv = rgb_to_hsv(&rgb);
        Some(grow_regions(&hsv, &saliency, &seeds, cfg)?)
    } else {
        None
    };
    Ok(EntryLabels { seeds, grown })
}

fn process_entry(
    entry: &ManifestEntry,
    opts: &RunOptions,
    out_dir: &Path,
) -> Result<(f64, Option<ConfusionAccumulator>)> {
    let cfg = &opts.config;
    let out = label_entry(entry, cfg, opts.stage != Stage::Seed)?;
    save_label_map(&seeds_file(out_dir, &entry.image_id), &out.seeds)?;

    let Some(grown) = out.grown else {
        return Ok((out.seeds.ignore_fraction(), None));
    };
    save_label_map(&labels_file(out_dir, &entry.image_id), &grown)?;
    let vis = vis_file(out_dir, &entry.image_id);
    colorize_labels(&grown)
        .save(&vis)
        .map_err(|e| Error::image(&vis, e))?;

    let acc = match (&entry.gt_path, opts.stage) {
        (Some(gt_path), Stage::Full) => {
            let gt = load_label_map(gt_path, cfg.num_classes)?;
            Some(ConfusionAccumulator::new(cfg.num_classes).accumulate(&grown, &gt)?)
        }
        _ => None,
    };
    Ok((grown.ignore_fraction(), acc))
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntryReport {
    pub image_id: String,
    /// Fraction of ignore pixels in the final output; `None` if the entry failed.
    pub ignore_fraction: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub images: usize,
    pub per_class: BTreeMap<u8, f64>,
    pub miou: f64,
    pub report: String,
    pub key_values: String,
}

#[derive(Debug, Clone, PartialEq)]
pub enum EvalStatus {
    /// No entry had ground truth, or evaluation was not requested.
    Skipped,
    /// Ground truth was supplied but no class had a nonempty union.
    Empty,
    Done(Evaluation),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub entries: Vec<EntryReport>,
    pub evaluation: EvalStatus,
}

impl Summary {
    pub fn failed(&self) -> usize {
        self.entries.iter().filter(|e| e.error.is_some()).count()
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "entries: {} ({} failed)",
            self.entries.len(),
            self.failed()
        )?;
        for e in &self.entries {
            match (&e.ignore_fraction, &e.error) {
                (Some(frac), _) => writeln!(f, "{} ignore_fraction={frac:.4}", e.image_id)?,
                (None, Some(err)) => writeln!(f, "{} failed: {err}", e.image_id)?,
                (None, None) => writeln!(f, "{}", e.image_id)?,
            }
        }
        match &self.evaluation {
            EvalStatus::Skipped => Ok(()),
            EvalStatus::Empty => writeln!(f, "evaluation: no scorable pixels"),
            EvalStatus::Done(ev) => {
                writeln!(f, "evaluation over {} images:", ev.images)?;
                write!(f, "{}", ev.report)
            }
        }
    }
}

fn evaluate(
    acc: &ConfusionAccumulator,
    images: usize,
    names: &BTreeMap<u8, String>,
) -> Result<EvalStatus> {
    match acc.mean_iou() {
        Ok((per_class, miou)) => Ok(EvalStatus::Done(Evaluation {
            images,
            report: render_report(&per_class, names)?,
            key_values: render_key_values(&per_class, names)?,
            per_class,
            miou,
        })),
        Err(Error::EmptyEvaluation) => Ok(EvalStatus::Empty),
        Err(e) => Err(e),
    }
}

/// Processes every entry and writes `<id>_seeds.png`, `<id>_labels.png`,
/// `<id>_vis.png` (the latter two unless seeding only) and `summary.txt`
/// into `out_dir`.
///
/// Entries may run concurrently; the summary keeps manifest order.
pub fn run_pipeline(
    entries: &[ManifestEntry],
    opts: &RunOptions,
    out_dir: &Path,
) -> Result<Summary> {
    opts.config.validate()?;
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.jobs)
        .build()
        .map_err(|e| Error::InvalidConfig(format!("thread pool: {e}")))?;
    let results: Vec<Result<(f64, Option<ConfusionAccumulator>)>> = pool.install(|| {
        entries
            .par_iter()
            .map(|entry| process_entry(entry, opts, out_dir))
            .collect()
    });

    let mut reports = Vec::with_capacity(entries.len());
    let mut acc = ConfusionAccumulator::new(opts.config.num_classes);
    let mut evaluated = 0;
    for (entry, result) in entries.iter().zip(results) {
        match result {
            Ok((ignore_fraction, entry_acc)) => {
                if let Some(a) = entry_acc {
                    acc = acc.merge(&a)?;
                    evaluated += 1;
                }
                reports.push(EntryReport {
                    image_id: entry.image_id.clone(),
                    ignore_fraction: Some(ignore_fraction),
                    error: None,
                });
            }
            Err(e) if opts.strict => {
                return Err(Error::Entry {
                    id: entry.image_id.clone(),
                    source: Box::new(e),
                })
            }
            Err(e) => reports.push(EntryReport {
                image_id: entry.image_id.clone(),
                ignore_fraction: None,
                error: Some(e.to_string()),
            }),
        }
    }

    let evaluation = if evaluated == 0 {
        EvalStatus::Skipped
    } else {
        evaluate(&acc, evaluated, &opts.class_names)?
    };
    let summary = Summary {
        entries: reports,
        evaluation,
    };
    let path = out_dir.join("summary.txt");
    std::fs::write(&path, summary.to_string()).map_err(|e| Error::io(&path, e))?;
    Ok(summary)
}

/// Scores existing `<id>_labels.png` predictions in `pred_dir` against the
/// ground truth of every manifest entry that has one.
pub fn evaluate_predictions(
    entries: &[ManifestEntry],
    pred_dir: &Path,
    num_classes: u8,
    names: &BTreeMap<u8, String>,
) -> Result<EvalStatus> {
    let mut acc = ConfusionAccumulator::new(num_classes);
    let mut images = 0;
    for entry in entries {
        let Some(gt_path) = &entry.gt_path else {
            continue;
        };
        let wrap = |e: Error| Error::Entry {
            id: entry.image_id.clone(),
            source: Box::new(e),
        };
        let pred = load_label_map(&labels_file(pred_dir, &entry.image_id), num_classes)
            .map_err(wrap)?;
        let gt = load_label_map(gt_path, num_classes).map_err(wrap)?;
        acc.add(&pred, &gt).map_err(wrap)?;
        images += 1;
    }
    if images == 0 {
        return Ok(EvalStatus::Skipped);
    }
    evaluate(&acc, images, names)
}
