//! Domain types, colour conversion and file codecs.

mod codec;
mod hsv;
mod raster;
mod types;

pub use codec::{decode_tensor, encode_tensor, read_tensor, write_tensor, Tensor, MAGIC};
pub use hsv::{hsv_from_rgb, rgb_to_hsv};
pub use raster::{
    decode_label_map, label_map_to_gray, load_gray, load_label_map, load_rgb, load_saliency,
    normalize_saliency, save_label_map,
};
pub use types::{
    ActivationStack, ClassWeights, Connectivity, GrowConfig, HsvImage, LabelMap, SaliencyMap,
    BACKGROUND, IGNORE,
};
