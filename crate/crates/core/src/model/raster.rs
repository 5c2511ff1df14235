use std::path::Path;

use image::{ColorType, DynamicImage, GrayImage, RgbImage};

use crate::error::{Error, Result};

use super::types::{LabelMap, SaliencyMap};

pub fn normalize_saliency(gray: &GrayImage) -> SaliencyMap {
    let data = gray.as_raw().iter().map(|&g| f64::from(g) / 255.0).collect();
    SaliencyMap::new(gray.width() as usize, gray.height() as usize, data)
        .expect("8-bit values scale into [0, 1]")
}

pub fn decode_label_map(gray: &GrayImage, num_classes: u8) -> Result<LabelMap> {
    let map = LabelMap::new(
        gray.width() as usize,
        gray.height() as usize,
        gray.as_raw().clone(),
    )?;
    map.validate(num_classes)?;
    Ok(map)
}

pub fn label_map_to_gray(labels: &LabelMap) -> GrayImage {
    GrayImage::from_raw(
        labels.width() as u32,
        labels.height() as u32,
        labels.data().to_vec(),
    )
    .expect("label map buffer matches its dimensions")
}

fn open(path: &Path) -> Result<DynamicImage> {
    image::open(path).map_err(|e| Error::image(path, e))
}

/// Loads an 8-bit RGB image. 8-bit grayscale files are widened to RGB.
pub fn load_rgb(path: &Path) -> Result<RgbImage> {
    match open(path)? {
        DynamicImage::ImageRgb8(img) => Ok(img),
        DynamicImage::ImageLuma8(img) => Ok(DynamicImage::ImageLuma8(img).to_rgb8()),
        other => Err(unsupported(path, other.color(), "8-bit RGB")),
    }
}

/// Loads an 8-bit single-channel image.
pub fn load_gray(path: &Path) -> Result<GrayImage> {
    match open(path)? {
        DynamicImage::ImageLuma8(img) => Ok(img),
        other => Err(unsupported(path, other.color(), "8-bit grayscale")),
    }
}

fn unsupported(path: &Path, found: ColorType, wanted: &str) -> Error {
    Error::UnsupportedImage {
        path: path.to_path_buf(),
        reason: format!("expected {wanted}, found {found:?}"),
    }
}

pub fn load_saliency(path: &Path) -> Result<SaliencyMap> {
    Ok(normalize_saliency(&load_gray(path)?))
}

pub fn load_label_map(path: &Path, num_classes: u8) -> Result<LabelMap> {
    decode_label_map(&load_gray(path)?, num_classes)
}

pub fn save_label_map(path: &Path, labels: &LabelMap) -> Result<()> {
    label_map_to_gray(labels)
        .save(path)
        .map_err(|e| Error::image(path, e))
}
