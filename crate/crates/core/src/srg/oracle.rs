//! Brute-force references for [`grow_regions`](super::grow_regions).
//!
//! Both are deliberately naive; they exist to be checked against.

use std::collections::VecDeque;

use crate::error::Result;
use crate::model::{Connectivity, GrowConfig, HsvImage, LabelMap, SaliencyMap, IGNORE};

use super::{check_inputs, growing_predicate, similarity_at, Candidate};

/// Same contract as `grow_regions`, computed by rescanning every
/// (labelled, unlabelled neighbour) pair at every step.
pub fn grow_regions_oracle(
    img: &HsvImage,
    sal: &SaliencyMap,
    seeds: &LabelMap,
    cfg: &GrowConfig,
) -> Result<LabelMap> {
    check_inputs(img, sal, seeds, cfg)?;
    let (width, height) = (img.width(), img.height());
    let mut labels = seeds.data().to_vec();

    loop {
        let mut best: Option<Candidate> = None;
        for source in 0..labels.len() {
            if labels[source] == IGNORE {
                continue;
            }
            for target in cfg.connectivity.neighbours(source, width, height) {
                if labels[target] != IGNORE {
                    continue;
                }
                let key = similarity_at(img, sal, target, source);
                if !growing_predicate(key, cfg.theta) {
                    continue;
                }
                let cand = Candidate {
                    key,
                    label: labels[source],
                    target,
                    source,
                };
                if best.is_none_or(|b| cand < b) {
                    best = Some(cand);
                }
            }
        }
        match best {
            Some(c) => labels[c.target] = c.label,
            None => break,
        }
    }

    LabelMap::new(width, height, labels)
}

/// Pixels reachable from any seed through neighbour steps that each pass the
/// growing predicate, ignoring which label would get there.
pub fn reachable_set(
    img: &HsvImage,
    sal: &SaliencyMap,
    seeds: &LabelMap,
    theta: f64,
    connectivity: Connectivity,
) -> Result<Vec<bool>> {
    let cfg = GrowConfig {
        theta,
        connectivity,
        num_classes: 254,
        ..GrowConfig::default()
    };
    check_inputs(img, sal, seeds, &cfg)?;
    let (width, height) = (img.width(), img.height());

    let mut reached: Vec<bool> = seeds.data().iter().map(|&c| c != IGNORE).collect();
    let mut queue: VecDeque<usize> = (0..reached.len()).filter(|&p| reached[p]).collect();
    while let Some(p) = queue.pop_front() {
        for q in connectivity.neighbours(p, width, height) {
            if !reached[q] && growing_predicate(similarity_at(img, sal, p, q), theta) {
                reached[q] = true;
                queue.push_back(q);
            }
        }
    }
    Ok(reached)
}
