use image::RgbImage;

use crate::model::{LabelMap, IGNORE};

/// Colour used for ignore pixels.
pub const IGNORE_COLOR: [u8; 3] = [224, 224, 192];

/// PASCAL VOC palette entry: the bits of `n` are dealt out to R, G, B in
/// turn, filling each channel from its most significant bit down.
pub fn pascal_color(n: u8) -> [u8; 3] {
    if n == IGNORE {
        return IGNORE_COLOR;
    }
    let mut rgb = [0u8; 3];
    let mut code = n;
    for shift in (0..8).rev() {
        for (channel, bit) in rgb.iter_mut().zip(0..3) {
            *channel |= ((code >> bit) & 1) << shift;
        }
        code >>= 3;
    }
    rgb
}

pub fn colorize_labels(labels: &LabelMap) -> RgbImage {
    let mut raw = Vec::with_capacity(labels.len() * 3);
    for &code in labels.data() {
        raw.extend_from_slice(&pascal_color(code));
    }
    RgbImage::from_raw(labels.width() as u32, labels.height() as u32, raw)
        .expect("one RGB triple per label")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_entries() {
        assert_eq!(pascal_color(0), [0, 0, 0]);
        assert_eq!(pascal_color(1), [128, 0, 0]);
        assert_eq!(pascal_color(2), [0, 128, 0]);
        assert_eq!(pascal_color(3), [128, 128, 0]);
        assert_eq!(pascal_color(8), [64, 0, 0]);
        assert_eq!(pascal_color(15), [192, 128, 128]);
        assert_eq!(pascal_color(20), [0, 64, 128]);
        assert_eq!(pascal_color(255), [224, 224, 192]);
    }

    #[test]
    fn image_layout() {
        let labels = LabelMap::new(3, 1, vec![0, 1, 255]).unwrap();
        let img = colorize_labels(&labels);
        assert_eq!(img.dimensions(), (3, 1));
        assert_eq!(
            img.as_raw(),
            &[0, 0, 0, 128, 0, 0, 224, 224, 192]
        );
    }
}
