//! Class activation maps and seed extraction.
//!
//! A class activation map is the classifier-weighted sum of the last
//! convolutional feature maps. Seeds are the top-ranked pixels of each
//! present class's map, plus low-saliency background.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::model::{
    ActivationStack, ClassWeights, GrowConfig, LabelMap, SaliencyMap, BACKGROUND, IGNORE,
};

/// One class's activation map, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Cam {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl Cam {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != height * width {
            return Err(Error::DimensionMismatch(format!(
                "Cam: data length {} does not match {height}x{width}",
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }

    pub fn at(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.width + x]
    }
}

/// Object classes present at image level, strictly increasing, never 0 or 255.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ImageLabels(Vec<u8>);

impl ImageLabels {
    pub fn new(classes: Vec<u8>) -> Result<Self> {
        for (i, &c) in classes.iter().enumerate() {
            if c == BACKGROUND || c == IGNORE {
                return Err(Error::InvalidValue(format!(
                    "image-level class {c} is reserved"
                )));
            }
            if i > 0 && classes[i - 1] >= c {
                return Err(Error::InvalidValue(format!(
                    "image-level classes must be strictly increasing: {classes:?}"
                )));
            }
        }
        Ok(Self(classes))
    }

    pub fn classes(&self) -> &[u8] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Per-channel spatial sums `F_k = Σ f_k(x, y)`.
///
/// This is an unnormalised sum: dividing by `H·W` would rescale every class
/// score by the same factor and leave rankings unchanged.
pub fn global_average_pool(acts: &ActivationStack) -> Vec<f64> {
    (0..acts.channels())
        .map(|k| acts.channel(k).iter().map(|&v| f64::from(v)).sum())
        .collect()
}

/// Linear class score `S_c = Σ_k w[c,k] · F_k`.
pub fn class_score(pooled: &[f64], weights: &ClassWeights, class: usize) -> Result<f64> {
    if pooled.len() != weights.channels() {
        return Err(Error::ChannelMismatch {
            activations: pooled.len(),
            weights: weights.channels(),
        });
    }
    let row = weights.row(class)?;
    Ok(row
        .iter()
        .zip(pooled)
        .map(|(&w, &f)| f64::from(w) * f)
        .sum())
}

/// `M_c(x, y) = Σ_k w[c,k] · f_k(x, y)` at the activation resolution.
pub fn class_activation_map(
    acts: &ActivationStack,
    weights: &ClassWeights,
    class: usize,
) -> Result<Cam> {
    if acts.channels() != weights.channels() {
        return Err(Error::ChannelMismatch {
            activations: acts.channels(),
            weights: weights.channels(),
        });
    }
    let row = weights.row(class)?;
    let mut data = vec![0.0f64; acts.height() * acts.width()];
    for (k, &w) in row.iter().enumerate() {
        let w = f64::from(w);
        for (out, &f) in data.iter_mut().zip(acts.channel(k)) {
            *out += w * f64::from(f);
        }
    }
    Cam::new(acts.height(), acts.width(), data)
}

/// Source coordinate of output index `i` when corner samples are aligned.
fn corner_aligned(i: usize, len_in: usize, len_out: usize) -> (usize, usize, f64) {
    if len_in == 1 || len_out == 1 {
        return (0, 0, 0.0);
    }
    let pos = (i * (len_in - 1)) as f64 / (len_out - 1) as f64;
    let lo = (pos.floor() as usize).min(len_in - 1);
    let hi = (lo + 1).min(len_in - 1);
    (lo, hi, pos - lo as f64)
}

/// Bilinear resampling with input corners mapped onto output corners.
pub fn upsample_bilinear(cam: &Cam, out_h: usize, out_w: usize) -> Result<Cam> {
    if cam.data.is_empty() || out_h == 0 || out_w == 0 {
        return Err(Error::DimensionMismatch(format!(
            "cannot resample a {}x{} map to {out_h}x{out_w}",
            cam.height, cam.width
        )));
    }
    let cols: Vec<_> = (0..out_w)
        .map(|x| corner_aligned(x, cam.width, out_w))
        .collect();
    let mut data = Vec::with_capacity(out_h * out_w);
    for y in 0..out_h {
        let (y0, y1, fy) = corner_aligned(y, cam.height, out_h);
        for &(x0, x1, fx) in &cols {
            let top = cam.at(y0, x0) + (cam.at(y0, x1) - cam.at(y0, x0)) * fx;
            let bottom = cam.at(y1, x0) + (cam.at(y1, x1) - cam.at(y1, x0)) * fx;
            data.push(top + (bottom - top) * fy);
        }
    }
    Cam::new(out_h, out_w, data)
}

/// Rescales a map onto `[0, 1]`; `None` when the map is constant (or empty).
pub fn normalize_min_max(cam: &Cam) -> Option<Vec<f64>> {
    let (min, max) = cam
        .data
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if cam.data.is_empty() || max == min {
        return None;
    }
    let range = max - min;
    Some(cam.data.iter().map(|&v| (v - min) / range).collect())
}

/// `ceil(fraction · n)`, clamped to `n`.
///
/// The product is nudged down by a tiny epsilon so that an exact integer
/// like `0.2 · 15` is not pushed to 4 by binary rounding.
pub fn seed_budget(fraction: f64, n: usize) -> usize {
    let raw = (fraction * n as f64 - 1e-9).ceil();
    (raw.max(0.0) as usize).min(n)
}

/// Pixels of `values` ranked in the top `budget`, by value descending and
/// then by row-major index ascending. Returned sorted by index.
pub fn top_ranked(values: &[f64], budget: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    order.truncate(budget);
    order.sort_unstable();
    order
}

/// Seed pixels claimed by one class before cross-class conflicts are resolved.
///
/// Empty when the map is constant.
pub fn class_seed_pixels(cam: &Cam, seed_fraction: f64) -> Vec<usize> {
    match normalize_min_max(cam) {
        Some(norm) => top_ranked(&norm, seed_budget(seed_fraction, norm.len())),
        None => Vec::new(),
    }
}

/// Builds the sparse seed map for one image.
///
/// `cams` must hold an image-resolution map for every present class. Each
/// class claims its top `seed_fraction` pixels after min-max normalisation;
/// a pixel claimed by several classes goes to the highest normalised value
/// (ties to the smaller class index). Unclaimed pixels with saliency below
/// `cfg.bg_saliency_threshold` become background; the rest are ignored.
pub fn extract_seeds(
    cams: &BTreeMap<u8, Cam>,
    labels: &ImageLabels,
    saliency: &SaliencyMap,
    cfg: &GrowConfig,
) -> Result<LabelMap> {
    let (width, height) = (saliency.width(), saliency.height());
    let n = width * height;

    // (class, normalised value) of the current winner per pixel.
    let mut winner: Vec<Option<(u8, f64)>> = vec![None; n];
    for &class in labels.classes() {
        if class > cfg.num_classes {
            return Err(Error::InvalidLabelCode {
                code: class,
                num_classes: cfg.num_classes,
            });
        }
        let cam = cams.get(&class).ok_or(Error::MissingCam(class))?;
        if cam.width != width || cam.height != height {
            return Err(Error::DimensionMismatch(format!(
                "class {class} map is {}x{}, saliency is {height}x{width}",
                cam.height, cam.width
            )));
        }
        let Some(norm) = normalize_min_max(cam) else {
            continue;
        };
        for p in top_ranked(&norm, seed_budget(cfg.seed_fraction, n)) {
            // Classes arrive in increasing order, so only a strictly larger
            // value displaces an earlier claim.
            match winner[p] {
                Some((_, v)) if v >= norm[p] => {}
                _ => winner[p] = Some((class, norm[p])),
            }
        }
    }

    let data = winner
        .iter()
        .zip(saliency.data())
        .map(|(w, &s)| match w {
            Some((class, _)) => *class,
            None if s < cfg.bg_saliency_threshold => BACKGROUND,
            None => IGNORE,
        })
        .collect();
    LabelMap::new(width, height, data)
}
