//! Saliency-guided seeded region growing.
//!
//! Labelled pixels spread to unlabelled neighbours whose saliency-weighted
//! HSV distance is below `theta`. All open candidates compete on one global
//! priority front ordered by `(distance, label, target index, source index)`,
//! so the result does not depend on seed order or on heap internals.

mod oracle;

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::model::{Connectivity, GrowConfig, HsvImage, LabelMap, SaliencyMap, IGNORE};

pub use oracle::{grow_regions_oracle, reachable_set};

/// Distance between two hue values on the circular `[0, 255]` scale.
pub fn circular_hue_delta(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(255.0 - d)
}

/// `exp(|S(i) - S(j)|) · ‖I(i) - I(j)‖` for two row-major pixel indices.
///
/// Callers guarantee the indices are in bounds and the inputs share a shape.
pub(crate) fn similarity_at(img: &HsvImage, sal: &SaliencyMap, i: usize, j: usize) -> f64 {
    let [hi, si, vi] = img.pixel(i);
    let [hj, sj, vj] = img.pixel(j);
    let dh = circular_hue_delta(hi, hj);
    let ds = si - sj;
    let dv = vi - vj;
    let distance = (dh * dh + ds * ds + dv * dv).sqrt();
    let weight = (sal.data()[i] - sal.data()[j]).abs().exp();
    weight * distance
}

pub(crate) fn check_shapes(img: &HsvImage, sal: &SaliencyMap) -> Result<()> {
    if img.width() != sal.width() || img.height() != sal.height() {
        return Err(Error::DimensionMismatch(format!(
            "image is {}x{}, saliency is {}x{}",
            img.width(),
            img.height(),
            sal.width(),
            sal.height()
        )));
    }
    Ok(())
}

/// Saliency-weighted HSV distance between pixels `i` and `j`, given as `(x, y)`.
pub fn pixel_similarity(
    img: &HsvImage,
    sal: &SaliencyMap,
    i: (usize, usize),
    j: (usize, usize),
) -> Result<f64> {
    check_shapes(img, sal)?;
    let (width, height) = (img.width(), img.height());
    for (x, y) in [i, j] {
        if x >= width || y >= height {
            return Err(Error::OutOfBounds {
                x,
                y,
                width,
                height,
            });
        }
    }
    Ok(similarity_at(
        img,
        sal,
        i.1 * width + i.0,
        j.1 * width + j.0,
    ))
}

/// Strict growing criterion: `sim < theta`.
pub fn growing_predicate(sim: f64, theta: f64) -> bool {
    sim < theta
}

pub(crate) fn check_inputs(
    img: &HsvImage,
    sal: &SaliencyMap,
    seeds: &LabelMap,
    cfg: &GrowConfig,
) -> Result<()> {
    cfg.validate()?;
    check_shapes(img, sal)?;
    if seeds.width() != img.width() || seeds.height() != img.height() {
        return Err(Error::DimensionMismatch(format!(
            "image is {}x{}, seeds are {}x{}",
            img.width(),
            img.height(),
            seeds.width(),
            seeds.height()
        )));
    }
    seeds.validate(cfg.num_classes)
}

/// A pending claim of unlabelled pixel `target` by the label of `source`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub key: f64,
    pub label: u8,
    pub target: usize,
    pub source: usize,
}

impl Ord for Candidate {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key
            .total_cmp(&other.key)
            .then(self.label.cmp(&other.label))
            .then(self.target.cmp(&other.target))
            .then(self.source.cmp(&other.source))
    }
}

impl PartialOrd for Candidate {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl PartialEq for Candidate {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Candidate {}

struct Front<'a> {
    img: &'a HsvImage,
    sal: &'a SaliencyMap,
    theta: f64,
    connectivity: Connectivity,
    heap: BinaryHeap<Reverse<Candidate>>,
}

impl Front<'_> {
    /// Queues every unlabelled neighbour of `source`. Candidates that fail
    /// the predicate can never be accepted, so they are dropped here.
    fn push_neighbours(&mut self, labels: &[u8], source: usize) {
        let (width, height) = (self.img.width(), self.img.height());
        let label = labels[source];
        for target in self.connectivity.neighbours(source, width, height) {
            if labels[target] != IGNORE {
                continue;
            }
            let key = similarity_at(self.img, self.sal, target, source);
            if growing_predicate(key, self.theta) {
                self.heap.push(Reverse(Candidate {
                    key,
                    label,
                    target,
                    source,
                }));
            }
        }
    }
}

/// Grows `seeds` over the image. Seed labels are kept verbatim; pixels no
/// seed can reach stay `255`.
pub fn grow_regions(
    img: &HsvImage,
    sal: &SaliencyMap,
    seeds: &LabelMap,
    cfg: &GrowConfig,
) -> Result<LabelMap> {
    check_inputs(img, sal, seeds, cfg)?;

    let mut labels = seeds.data().to_vec();
    let mut front = Front {
        img,
        sal,
        theta: cfg.theta,
        connectivity: cfg.connectivity,
        heap: BinaryHeap::new(),
    };
    for source in 0..labels.len() {
        if labels[source] != IGNORE {
            front.push_neighbours(&labels, source);
        }
    }

    while let Some(Reverse(cand)) = front.heap.pop() {
        if labels[cand.target] != IGNORE {
            continue;
        }
        labels[cand.target] = cand.label;
        front.push_neighbours(&labels, cand.target);
    }

    LabelMap::new(seeds.width(), seeds.height(), labels)
}
