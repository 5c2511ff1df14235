//! Intersection-over-union evaluation and the per-class report.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::model::{LabelMap, IGNORE};

/// PASCAL VOC class names, background first.
pub const PASCAL_VOC_CLASSES: [&str; 21] = [
    "background",
    "aeroplane",
    "bicycle",
    "bird",
    "boat",
    "bottle",
    "bus",
    "car",
    "cat",
    "chair",
    "cow",
    "diningtable",
    "dog",
    "horse",
    "motorbike",
    "person",
    "pottedplant",
    "sheep",
    "sofa",
    "train",
    "tvmonitor",
];

/// Names for classes `0..=num_classes`: the PASCAL VOC names where they
/// exist, `class<N>` beyond them.
pub fn default_class_names(num_classes: u8) -> BTreeMap<u8, String> {
    (0..=num_classes)
        .map(|c| {
            let name = PASCAL_VOC_CLASSES
                .get(c as usize)
                .map(|s| s.to_string())
                .unwrap_or_else(|| format!("class{c}"));
            (c, name)
        })
        .collect()
}

/// Confusion counts over classes `0..=C`.
///
/// Rows are ground truth, columns are predictions. One extra column counts
/// pixels predicted as ignore, which match no class. Ground-truth ignore
/// pixels are never counted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfusionAccumulator {
    num_classes: u8,
    counts: Vec<u64>,
}

impl ConfusionAccumulator {
    pub fn new(num_classes: u8) -> Self {
        let n = num_classes as usize + 1;
        Self {
            num_classes,
            counts: vec![0; n * (n + 1)],
        }
    }

    pub fn num_classes(&self) -> u8 {
        self.num_classes
    }

    fn cols(&self) -> usize {
        self.num_classes as usize + 2
    }

    fn unlabeled_col(&self) -> usize {
        self.num_classes as usize + 1
    }

    /// Pixels with ground truth `gt` predicted as `pred`; `pred == 255`
    /// reads the ignore-prediction column.
    pub fn count(&self, gt: u8, pred: u8) -> u64 {
        let col = if pred == IGNORE {
            self.unlabeled_col()
        } else {
            pred as usize
        };
        self.counts[gt as usize * self.cols() + col]
    }

    /// Number of ground-truth pixels accumulated so far.
    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Returns a new accumulator with one more image pair counted.
    pub fn accumulate(&self, pred: &LabelMap, gt: &LabelMap) -> Result<Self> {
        let mut next = self.clone();
        next.add(pred, gt)?;
        Ok(next)
    }

    /// In-place form of [`accumulate`](Self::accumulate). Leaves `self`
    /// untouched on error.
    pub fn add(&mut self, pred: &LabelMap, gt: &LabelMap) -> Result<()> {
        if pred.width() != gt.width() || pred.height() != gt.height() {
            return Err(Error::DimensionMismatch(format!(
                "prediction is {}x{}, ground truth is {}x{}",
                pred.width(),
                pred.height(),
                gt.width(),
                gt.height()
            )));
        }
        pred.validate(self.num_classes)?;
        gt.validate(self.num_classes)?;

        let cols = self.cols();
        let unlabeled = self.unlabeled_col();
        for (&p, &g) in pred.data().iter().zip(gt.data()) {
            if g == IGNORE {
                continue;
            }
            let col = if p == IGNORE { unlabeled } else { p as usize };
            self.counts[g as usize * cols + col] += 1;
        }
        Ok(())
    }

    /// Sums two accumulators over the same class set.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        if self.num_classes != other.num_classes {
            return Err(Error::DimensionMismatch(format!(
                "cannot merge accumulators over {} and {} classes",
                self.num_classes, other.num_classes
            )));
        }
        let counts = self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Self {
            num_classes: self.num_classes,
            counts,
        })
    }

    /// `TP / (TP + FP + FN)` for `class`; `None` when the class appears in
    /// neither prediction nor ground truth.
    pub fn iou(&self, class: u8) -> Result<Option<f64>> {
        if class > self.num_classes {
            return Err(Error::IndexOutOfRange {
                index: class as usize,
                limit: self.num_classes as usize + 1,
            });
        }
        let c = class as usize;
        let cols = self.cols();
        let rows = self.num_classes as usize + 1;
        let tp = self.counts[c * cols + c];
        let gt_total: u64 = self.counts[c * cols..(c + 1) * cols].iter().sum();
        let pred_total: u64 = (0..rows).map(|g| self.counts[g * cols + c]).sum();
        let union = gt_total + pred_total - tp;
        if union == 0 {
            return Ok(None);
        }
        Ok(Some(tp as f64 / union as f64))
    }

    /// Per-class IoU for every class with a nonempty union, and their mean.
    pub fn mean_iou(&self) -> Result<(BTreeMap<u8, f64>, f64)> {
        let mut per_class = BTreeMap::new();
        for class in 0..=self.num_classes {
            if let Some(v) = self.iou(class)? {
                per_class.insert(class, v);
            }
        }
        if per_class.is_empty() {
            return Err(Error::EmptyEvaluation);
        }
        let miou = mean(&per_class);
        Ok((per_class, miou))
    }
}

fn mean(per_class: &BTreeMap<u8, f64>) -> f64 {
    per_class.values().sum::<f64>() / per_class.len() as f64
}

fn rows<'a>(
    per_class: &BTreeMap<u8, f64>,
    names: &'a BTreeMap<u8, String>,
) -> Result<Vec<(&'a str, f64)>> {
    per_class
        .iter()
        .map(|(c, &v)| {
            names
                .get(c)
                .map(|n| (n.as_str(), v * 100.0))
                .ok_or(Error::MissingName(*c))
        })
        .collect()
}

/// One `name percent` row per class in index order, then `mIoU percent`.
/// Percentages carry one decimal.
pub fn render_report(
    per_class: &BTreeMap<u8, f64>,
    names: &BTreeMap<u8, String>,
) -> Result<String> {
    if per_class.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut out = String::new();
    for (name, pct) in rows(per_class, names)? {
        writeln!(out, "{name} {pct:.1}").unwrap();
    }
    writeln!(out, "mIoU {:.1}", mean(per_class) * 100.0).unwrap();
    Ok(out)
}

/// Machine-readable form of [`render_report`]: `name=percent` lines and a
/// final `miou=percent`.
pub fn render_key_values(
    per_class: &BTreeMap<u8, f64>,
    names: &BTreeMap<u8, String>,
) -> Result<String> {
    if per_class.is_empty() {
        return Err(Error::EmptyEvaluation);
    }
    let mut out = String::new();
    for (name, pct) in rows(per_class, names)? {
        writeln!(out, "{name}={pct:.1}").unwrap();
    }
    writeln!(out, "miou={:.1}", mean(per_class) * 100.0).unwrap();
    Ok(out)
}
