use crate::error::{Error, Result};

/// Label code for pixels that carry no class (PASCAL VOC "void").
pub const IGNORE: u8 = 255;

/// Label code for background.
pub const BACKGROUND: u8 = 0;

fn check_len(what: &str, len: usize, expected: usize) -> Result<()> {
    if len != expected {
        return Err(Error::DimensionMismatch(format!(
            "{what}: data length {len} does not match dimensions ({expected})"
        )));
    }
    Ok(())
}

/// Row-major HSV image with every channel scaled to `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct HsvImage {
    width: usize,
    height: usize,
    data: Vec<[f64; 3]>,
}

impl HsvImage {
    pub fn new(width: usize, height: usize, data: Vec<[f64; 3]>) -> Result<Self> {
        check_len("HsvImage", data.len(), width * height)?;
        if let Some(i) = data
            .iter()
            .position(|px| px.iter().any(|c| !(0.0..=255.0).contains(c)))
        {
            return Err(Error::InvalidValue(format!(
                "HsvImage: pixel {i} has a channel outside [0, 255]: {:?}",
                data[i]
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[[f64; 3]] {
        &self.data
    }

    pub fn pixel(&self, index: usize) -> [f64; 3] {
        self.data[index]
    }
}

/// Row-major per-pixel saliency in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaliencyMap {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl SaliencyMap {
    pub fn new(width: usize, height: usize, data: Vec<f64>) -> Result<Self> {
        check_len("SaliencyMap", data.len(), width * height)?;
        if let Some(i) = data.iter().position(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::InvalidValue(format!(
                "SaliencyMap: value {} at pixel {i} outside [0, 1]",
                data[i]
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    /// A map holding the same value everywhere.
    pub fn constant(width: usize, height: usize, value: f64) -> Result<Self> {
        Self::new(width, height, vec![value; width * height])
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

/// Stack of `channels` feature maps, channel-major then row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ActivationStack {
    channels: usize,
    height: usize,
    width: usize,
    data: Vec<f32>,
}

impl ActivationStack {
    pub fn new(channels: usize, height: usize, width: usize, data: Vec<f32>) -> Result<Self> {
        check_len("ActivationStack", data.len(), channels * height * width)?;
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self {
            channels,
            height,
            width,
            data,
        })
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// The `k`-th feature map, row-major.
    pub fn channel(&self, k: usize) -> &[f32] {
        let plane = self.height * self.width;
        &self.data[k * plane..(k + 1) * plane]
    }
}

/// Row-major `num_classes × channels` matrix of classifier weights.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassWeights {
    num_classes: usize,
    channels: usize,
    data: Vec<f32>,
}

impl ClassWeights {
    pub fn new(num_classes: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        check_len("ClassWeights", data.len(), num_classes * channels)?;
        if let Some(index) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFiniteValue { index });
        }
        Ok(Self {
            num_classes,
            channels,
            data,
        })
    }

    pub fn num_classes(&self) -> usize {
        self.num_classes
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    /// Weight row for classifier output `row`.
    pub fn row(&self, row: usize) -> Result<&[f32]> {
        if row >= self.num_classes {
            return Err(Error::IndexOutOfRange {
                index: row,
                limit: self.num_classes,
            });
        }
        Ok(&self.data[row * self.channels..(row + 1) * self.channels])
    }
}

/// Row-major per-pixel label codes: `0` background, `1..=C` object classes,
/// `255` ignore.
///
/// Construction only checks the shape; [`LabelMap::validate`] checks codes
/// against a class count.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabelMap {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

impl LabelMap {
    pub fn new(width: usize, height: usize, data: Vec<u8>) -> Result<Self> {
        check_len("LabelMap", data.len(), width * height)?;
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn filled(width: usize, height: usize, code: u8) -> Self {
        Self {
            width,
            height,
            data: vec![code; width * height],
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn data(&self) -> &[u8] {
        &self.data
    }

    pub fn into_data(self) -> Vec<u8> {
        self.data
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Fails on the first code outside `{0..=num_classes} ∪ {255}`.
    pub fn validate(&self, num_classes: u8) -> Result<()> {
        match self
            .data
            .iter()
            .find(|&&code| code != IGNORE && code > num_classes)
        {
            Some(&code) => Err(Error::InvalidLabelCode { code, num_classes }),
            None => Ok(()),
        }
    }

    /// Fraction of pixels holding the ignore code.
    pub fn ignore_fraction(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        let ignored = self.data.iter().filter(|&&c| c == IGNORE).count();
        ignored as f64 / self.data.len() as f64
    }
}

/// Pixel neighbourhood used for growing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Connectivity {
    #[default]
    Four,
    Eight,
}

impl Connectivity {
    pub fn from_count(n: u32) -> Result<Self> {
        match n {
            4 => Ok(Connectivity::Four),
            8 => Ok(Connectivity::Eight),
            other => Err(Error::InvalidConfig(format!(
                "connectivity must be 4 or 8, got {other}"
            ))),
        }
    }

    pub fn count(self) -> u32 {
        match self {
            Connectivity::Four => 4,
            Connectivity::Eight => 8,
        }
    }

    pub(crate) fn offsets(self) -> &'static [(isize, isize)] {
        const FOUR: [(isize, isize); 4] = [(0, -1), (-1, 0), (1, 0), (0, 1)];
        const EIGHT: [(isize, isize); 8] = [
            (-1, -1),
            (0, -1),
            (1, -1),
            (-1, 0),
            (1, 0),
            (-1, 1),
            (0, 1),
            (1, 1),
        ];
        match self {
            Connectivity::Four => &FOUR,
            Connectivity::Eight => &EIGHT,
        }
    }

    /// Row-major indices of the in-bounds neighbours of `index`.
    pub fn neighbours(
        self,
        index: usize,
        width: usize,
        height: usize,
    ) -> impl Iterator<Item = usize> {
        let x = (index % width) as isize;
        let y = (index / width) as isize;
        self.offsets().iter().filter_map(move |&(dx, dy)| {
            let nx = x + dx;
            let ny = y + dy;
            if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                None
            } else {
                Some(ny as usize * width + nx as usize)
            }
        })
    }
}

/// Parameters for seeding and growing.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowConfig {
    /// Growing threshold on the saliency-weighted HSV distance.
    pub theta: f64,
    pub connectivity: Connectivity,
    /// Fraction of pixels each class may seed, in `(0, 1]`.
    pub seed_fraction: f64,
    /// Unclaimed pixels with saliency strictly below this become background seeds.
    pub bg_saliency_threshold: f64,
    /// Number of object classes `C`; valid codes are `0..=C` and `255`.
    pub num_classes: u8,
}

impl Default for GrowConfig {
    fn default() -> Self {
        Self {
            theta: 10.0,
            connectivity: Connectivity::Four,
            seed_fraction: 0.2,
            bg_saliency_threshold: 0.1,
            num_classes: 20,
        }
    }
}

impl GrowConfig {
    pub fn validate(&self) -> Result<()> {
        if !self.theta.is_finite() || self.theta <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "theta must be a positive finite number, got {}",
                self.theta
            )));
        }
        if !(self.seed_fraction > 0.0 && self.seed_fraction <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "seed_fraction must lie in (0, 1], got {}",
                self.seed_fraction
            )));
        }
        if !(0.0..=1.0).contains(&self.bg_saliency_threshold) {
            return Err(Error::InvalidConfig(format!(
                "bg_saliency_threshold must lie in [0, 1], got {}",
                self.bg_saliency_threshold
            )));
        }
        if self.num_classes == IGNORE {
            return Err(Error::InvalidConfig(
                "num_classes must be below 255".to_string(),
            ));
        }
        Ok(())
    }
}
