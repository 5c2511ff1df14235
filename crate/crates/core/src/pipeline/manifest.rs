use std::collections::HashSet;
use std::path::{Path, PathBuf};

use crate::cam::ImageLabels;
use crate::error::{Error, Result};

/// One image's inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ManifestEntry {
    pub image_id: String,
    pub image_path: PathBuf,
    pub saliency_path: PathBuf,
    pub activations_path: PathBuf,
    pub weights_path: PathBuf,
    pub gt_path: Option<PathBuf>,
    pub present_classes: ImageLabels,
}

impl ManifestEntry {
    /// Rebases relative paths onto `base`.
    pub fn resolve(mut self, base: &Path) -> Self {
        let fix = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        fix(&mut self.image_path);
        fix(&mut self.saliency_path);
        fix(&mut self.activations_path);
        fix(&mut self.weights_path);
        if let Some(gt) = self.gt_path.as_mut() {
            fix(gt);
        }
        self
    }
}

const FIELDS: usize = 7;

fn parse_classes(field: &str, line: usize) -> Result<ImageLabels> {
    let malformed = |reason: String| Error::MalformedLine { line, reason };
    let mut classes = Vec::new();
    for token in field.split(';').map(str::trim).filter(|t| !t.is_empty()) {
        let c: u8 = token
            .parse()
            .map_err(|_| malformed(format!("invalid class index {token:?}")))?;
        classes.push(c);
    }
    classes.sort_unstable();
    if classes.windows(2).any(|w| w[0] == w[1]) {
        return Err(malformed(format!("duplicate class in {field:?}")));
    }
    ImageLabels::new(classes).map_err(|e| malformed(e.to_string()))
}

/// Parses `image_id,image,saliency,activations,weights,gt,classes` records.
///
/// `gt` may be empty; `classes` is a `;`-separated list of object class
/// indices in any order. Blank lines and lines starting with `#` are skipped.
pub fn parse_manifest(text: &str) -> Result<Vec<ManifestEntry>> {
    let mut entries = Vec::new();
    let mut seen = HashSet::new();

    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let record = raw.trim();
        if record.is_empty() || record.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = record.split(',').map(str::trim).collect();
        if fields.len() != FIELDS {
            return Err(Error::MalformedLine {
                line,
                reason: format!("expected {FIELDS} fields, found {}", fields.len()),
            });
        }
        for (name, value) in ["image_id", "image", "saliency", "activations", "weights"]
            .iter()
            .zip(&fields)
        {
            if value.is_empty() {
                return Err(Error::MalformedLine {
                    line,
                    reason: format!("empty {name} field"),
                });
            }
        }

        let image_id = fields[0].to_string();
        if !seen.insert(image_id.clone()) {
            return Err(Error::DuplicateId { id: image_id, line });
        }
        entries.push(ManifestEntry {
            image_id,
            image_path: fields[1].into(),
            saliency_path: fields[2].into(),
            activations_path: fields[3].into(),
            weights_path: fields[4].into(),
            gt_path: (!fields[5].is_empty()).then(|| fields[5].into()),
            present_classes: parse_classes(fields[6], line)?,
        });
    }

    if entries.is_empty() {
        return Err(Error::EmptyManifest);
    }
    Ok(entries)
}

/// Reads and parses a manifest file, resolving its paths against the
/// manifest's own directory.
pub fn load_manifest(path: &Path) -> Result<Vec<ManifestEntry>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let base = path.parent().unwrap_or(Path::new(""));
    Ok(parse_manifest(&text)?
        .into_iter()
        .map(|e| e.resolve(base))
        .collect())
}
