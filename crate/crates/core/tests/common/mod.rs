#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use image::{GrayImage, RgbImage};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use salgrow::model::{
    write_tensor, ActivationStack, ClassWeights, Connectivity, GrowConfig, HsvImage, LabelMap,
    SaliencyMap, IGNORE,
};

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

/// A random growing problem on a small grid.
#[derive(Debug, Clone)]
pub struct Instance {
    pub img: HsvImage,
    pub sal: SaliencyMap,
    pub seeds: LabelMap,
    pub cfg: GrowConfig,
}

/// Patchy colours (a few base colours plus jitter), patchy saliency and
/// sparse seeds. Half the instances use exact integer colours, a third of
/// those with no jitter at all, so that tied similarities exercise the
/// tie-break order.
pub fn random_instance(rng: &mut ChaCha8Rng, theta: f64, constant_saliency: bool) -> Instance {
    let width = rng.gen_range(1..=12);
    let height = rng.gen_range(1..=12);
    let n = width * height;
    let classes: u8 = rng.gen_range(1..=4);
    let quantised = rng.gen_bool(0.5);
    let jitter_span = if quantised && rng.gen_bool(1.0 / 3.0) { 0 } else { 3 };

    let bases: Vec<[f64; 3]> = (0..3)
        .map(|_| {
            [
                rng.gen_range(0.0..255.0f64).floor(),
                rng.gen_range(0.0..255.0f64).floor(),
                rng.gen_range(0.0..255.0f64).floor(),
            ]
        })
        .collect();
    let px = (0..n)
        .map(|_| {
            let base = bases[rng.gen_range(0..bases.len())];
            base.map(|c| {
                let jitter = if quantised {
                    f64::from(rng.gen_range(-jitter_span..=jitter_span))
                } else {
                    rng.gen_range(-4.0..4.0)
                };
                (c + jitter).clamp(0.0, 255.0)
            })
        })
        .collect();
    let img = HsvImage::new(width, height, px).unwrap();

    let sal = if constant_saliency || quantised && rng.gen_bool(0.5) {
        SaliencyMap::constant(width, height, rng.gen_range(0.0..=1.0)).unwrap()
    } else {
        let levels = [0.0, 0.05, 0.5, 0.9, 1.0];
        let data = (0..n)
            .map(|_| {
                let l: f64 = *levels.choose(rng).unwrap();
                (l + rng.gen_range(-0.05..0.05)).clamp(0.0, 1.0)
            })
            .collect();
        SaliencyMap::new(width, height, data).unwrap()
    };

    let density = rng.gen_range(0.02..0.25);
    let seeds = (0..n)
        .map(|_| {
            if rng.gen_bool(density) {
                rng.gen_range(0..=classes)
            } else {
                IGNORE
            }
        })
        .collect();
    let seeds = LabelMap::new(width, height, seeds).unwrap();

    let connectivity = if rng.gen_bool(0.25) {
        Connectivity::Eight
    } else {
        Connectivity::Four
    };
    let cfg = GrowConfig {
        theta,
        connectivity,
        num_classes: classes,
        ..GrowConfig::default()
    };
    Instance {
        img,
        sal,
        seeds,
        cfg,
    }
}

/// Plain colour-only seeded region growing, written independently of the
/// library: Euclidean HSV distance with circular hue, no saliency weight,
/// an ordered-set front and the same `(distance, label, target, source)`
/// priority.
pub fn colour_only_srg(img: &HsvImage, seeds: &LabelMap, theta: f64, eight: bool) -> Vec<u8> {
    let (w, h) = (img.width() as i64, img.height() as i64);
    let dist = |a: usize, b: usize| {
        let [ha, sa, va] = img.data()[a];
        let [hb, sb, vb] = img.data()[b];
        let raw = (ha - hb).abs();
        let dh = if raw > 255.0 - raw { 255.0 - raw } else { raw };
        let ds = sa - sb;
        let dv = va - vb;
        (dh * dh + ds * ds + dv * dv).sqrt()
    };
    let steps: Vec<(i64, i64)> = if eight {
        (-1..=1)
            .flat_map(|dy| (-1..=1).map(move |dx| (dx, dy)))
            .filter(|&d| d != (0, 0))
            .collect()
    } else {
        vec![(1, 0), (-1, 0), (0, 1), (0, -1)]
    };
    let around = |p: usize| {
        let (x, y) = (p as i64 % w, p as i64 / w);
        steps
            .iter()
            .map(move |&(dx, dy)| (x + dx, y + dy))
            .filter(move |&(nx, ny)| nx >= 0 && ny >= 0 && nx < w && ny < h)
            .map(move |(nx, ny)| (ny * w + nx) as usize)
            .collect::<Vec<_>>()
    };

    let mut labels = seeds.data().to_vec();
    // (distance bits, label, target, source); distances are non-negative so
    // their bit patterns sort like the values.
    let mut front: BTreeSet<(u64, u8, usize, usize)> = BTreeSet::new();
    let push = |labels: &[u8], front: &mut BTreeSet<_>, src: usize| {
        for t in around(src) {
            if labels[t] == IGNORE {
                let d = dist(t, src);
                if d < theta {
                    front.insert((d.to_bits(), labels[src], t, src));
                }
            }
        }
    };
    for p in 0..labels.len() {
        if labels[p] != IGNORE {
            push(&labels, &mut front, p);
        }
    }
    while let Some((_, label, target, _)) = front.pop_first() {
        if labels[target] == IGNORE {
            labels[target] = label;
            push(&labels, &mut front, target);
        }
    }
    labels
}

pub const FIXTURE_IMAGES: usize = 20;
pub const FIXTURE_SIZE: usize = 16;

/// Well-separated saturated colours for squares and backgrounds.
const COLOURS: [[u8; 3]; 8] = [
    [200, 40, 40],
    [40, 180, 60],
    [50, 70, 210],
    [220, 200, 40],
    [180, 60, 200],
    [40, 190, 200],
    [230, 130, 30],
    [140, 90, 40],
];

pub struct Fixture {
    pub manifest: PathBuf,
    pub num_classes: u8,
}

fn square_mask(top: usize, left: usize, side: usize) -> Vec<bool> {
    (0..FIXTURE_SIZE * FIXTURE_SIZE)
        .map(|i| {
            let (y, x) = (i / FIXTURE_SIZE, i % FIXTURE_SIZE);
            (top..top + side).contains(&y) && (left..left + side).contains(&x)
        })
        .collect()
}

/// Writes the synthetic end-to-end dataset into `dir`.
///
/// 20 images of 16×16, each with one square (side 8–10) or two 8×8 squares
/// in opposite quadrants, on a distinct background with ±2 RGB jitter.
/// Saliency is 0.9 on squares and 0.05 elsewhere. Activations carry one
/// channel per class that is ≈1 on that class's square and ≤0.05 noise
/// elsewhere; the shared weight matrix is the identity plus small
/// off-diagonal noise. Every square has at least 64 pixels, above the
/// 52-pixel seed budget of a 256-pixel image.
pub fn write_fixture(dir: &Path, seed: u64) -> Fixture {
    let mut rng = rng(seed);
    let num_classes: u8 = 20;
    let k = num_classes as usize;
    let n = FIXTURE_SIZE * FIXTURE_SIZE;

    let mut weights = vec![0f32; k * k];
    for c in 0..k {
        for j in 0..k {
            weights[c * k + j] = if c == j {
                1.0
            } else {
                rng.gen_range(-0.02..0.02)
            };
        }
    }
    write_tensor(
        &dir.join("weights.sgt"),
        &ClassWeights::new(k, k, weights).unwrap().into(),
    )
    .unwrap();

    let mut manifest = String::from("# id,image,saliency,activations,weights,gt,classes\n");
    for idx in 0..FIXTURE_IMAGES {
        let id = format!("img{idx:02}");
        let mut palette = COLOURS.to_vec();
        palette.shuffle(&mut rng);

        let squares: Vec<Vec<bool>> = if idx % 2 == 0 {
            let side = rng.gen_range(8..=10);
            let top = rng.gen_range(0..=FIXTURE_SIZE - side);
            let left = rng.gen_range(0..=FIXTURE_SIZE - side);
            vec![square_mask(top, left, side)]
        } else if rng.gen_bool(0.5) {
            vec![square_mask(0, 0, 8), square_mask(8, 8, 8)]
        } else {
            vec![square_mask(0, 8, 8), square_mask(8, 0, 8)]
        };
        let mut classes: Vec<u8> = (1..=num_classes).collect();
        classes.shuffle(&mut rng);
        let classes = &classes[..squares.len()];

        let mut rgb = RgbImage::new(FIXTURE_SIZE as u32, FIXTURE_SIZE as u32);
        let mut sal = GrayImage::new(FIXTURE_SIZE as u32, FIXTURE_SIZE as u32);
        let mut gt = GrayImage::new(FIXTURE_SIZE as u32, FIXTURE_SIZE as u32);
        let mut acts: Vec<f32> = (0..k * n).map(|_| rng.gen_range(0.0..0.05)).collect();
        for i in 0..n {
            let (x, y) = ((i % FIXTURE_SIZE) as u32, (i / FIXTURE_SIZE) as u32);
            let owner = squares.iter().position(|m| m[i]);
            let colour = palette[owner.map_or(0, |s| s + 1)];
            let jittered = colour.map(|c| (i32::from(c) + rng.gen_range(-2..=2)) as u8);
            rgb.put_pixel(x, y, image::Rgb(jittered));
            let (s, label) = match owner {
                Some(s) => {
                    let class = classes[s] as usize;
                    acts[(class - 1) * n + i] = 1.0 + rng.gen_range(0.0..0.1);
                    (230, class as u8)
                }
                None => (13, 0),
            };
            sal.put_pixel(x, y, image::Luma([s]));
            gt.put_pixel(x, y, image::Luma([label]));
        }

        rgb.save(dir.join(format!("{id}.png"))).unwrap();
        sal.save(dir.join(format!("{id}_sal.png"))).unwrap();
        gt.save(dir.join(format!("{id}_gt.png"))).unwrap();
        let stack = ActivationStack::new(k, FIXTURE_SIZE, FIXTURE_SIZE, acts).unwrap();
        write_tensor(&dir.join(format!("{id}.sgt")), &stack.into()).unwrap();

        let mut sorted = classes.to_vec();
        sorted.sort_unstable();
        let class_list: Vec<String> = sorted.iter().map(u8::to_string).collect();
        manifest.push_str(&format!(
            "{id},{id}.png,{id}_sal.png,{id}.sgt,weights.sgt,{id}_gt.png,{}\n",
            class_list.join(";")
        ));
    }

    let path = dir.join("manifest.csv");
    std::fs::write(&path, manifest).unwrap();
    Fixture {
        manifest: path,
        num_classes,
    }
}

/// Every file under `dir` with its bytes, sorted by name.
pub fn snapshot(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                std::fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}
