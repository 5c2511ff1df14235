use image::RgbImage;

use super::types::HsvImage;

/// Converts one 8-bit RGB triple to HSV with every channel on `[0, 255]`.
///
/// Hue is computed in degrees on `[0, 360)` and compressed by `255 / 360`;
/// achromatic colours get hue 0.
pub fn hsv_from_rgb([r, g, b]: [u8; 3]) -> [f64; 3] {
    let (r, g, b) = (f64::from(r), f64::from(g), f64::from(b));
    let max = r.max(g).max(b);
    let min = r.min(g).min(b);
    let delta = max - min;

    let hue_deg = if delta == 0.0 {
        0.0
    } else if max == r {
        let h = 60.0 * ((g - b) / delta);
        if h < 0.0 {
            h + 360.0
        } else {
            h
        }
    } else if max == g {
        60.0 * ((b - r) / delta + 2.0)
    } else {
        60.0 * ((r - g) / delta + 4.0)
    };
    let saturation = if max == 0.0 { 0.0 } else { delta / max * 255.0 };

    [hue_deg * 255.0 / 360.0, saturation, max]
}

pub fn rgb_to_hsv(rgb: &RgbImage) -> HsvImage {
    let data = rgb.pixels().map(|p| hsv_from_rgb(p.0)).collect();
    HsvImage::new(rgb.width() as usize, rgb.height() as usize, data)
        .expect("hsv conversion stays within [0, 255]")
}
