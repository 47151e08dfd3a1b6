//! Deterministic synthetic apple image generator with ground-truth defect
//! masks.
//!
//! The renderer works backwards from the gray-level histogram the pipeline
//! will see: it designs an exact per-level pixel count for the bright
//! (healthy fruit + backdrop) region, assigns levels to pixels by rank along
//! a radial shading field, and colors each level through a lookup table
//! solved so the production grayscale transform reproduces the designed
//! level exactly. Defect, calyx, and stem disks are painted in dark browns
//! far below the bright block. The construction keeps the smoothed histogram
//! strictly unimodal over the bright block and leaves a wide empty gap above
//! the dark levels, so Otsu and the valley oracle both land in the gap and
//! the measured NDA equals the ground-truth defect fraction.
//!
//! Bright levels split at a derived boundary: fruit pixels take the upper
//! levels (brightest at the center, per the shading exponent) and backdrop
//! pixels the lower ones, assigned outside-in so the backdrop darkens toward
//! the fruit. The resulting level jump at the fruit boundary is what gives
//! edge detectors a visible rim ring without disturbing the histogram.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::grading::GradeLabel;
use crate::raster::{BinaryMask, RgbImage};
use crate::weights::production_weights;

/// Gray level of defect, calyx, and stem pixels in the generated presets.
/// Kept within the first smoothing half-window so the whole dark mode
/// collapses into a single histogram peak at level 0.
const DARK_LEVEL: u8 = 2;
/// Gray level of the fruit center (the brightest designed level).
const ANCHOR_LEVEL: u8 = 252;
/// Base color whose weighted gray value equals [`ANCHOR_LEVEL`].
const PRESET_BASE_COLOR: (u8, u8, u8) = (173, 161, 68);
/// Canvas size used by [`generate_batch`].
const BATCH_IMAGE_SIZE: (u32, u32) = (600, 450);
/// Fruit semi-axes used by [`generate_batch`], as fractions of the canvas.
const BATCH_AXIS_FRACTION: f64 = 0.49;
/// Rim brightness of defective-preset apples (wide bright block, so the
/// small dark mode stays prominent).
const DEFECTIVE_RIM_BRIGHTNESS: f64 = 0.81;
/// Rim brightness of sound-preset apples (narrow bright block, so the tiny
/// calyx mode stays below prominence and Otsu stays in the gap).
const SOUND_RIM_BRIGHTNESS: f64 = 0.89;
/// Radial falloff exponent of the presets; below 2 the designed level
/// counts rise strictly toward the rim, which keeps the smoothed histogram
/// free of spurious plateau peaks.
const PRESET_SHADING_EXPONENT: f64 = 1.8;
/// Defect-fraction range of defective-preset apples.
const DEFECT_FRACTION_RANGE: (f64, f64) = (0.01, 0.11);
/// Calyx+stem area fraction range of sound-preset apples.
const CALYX_STEM_FRACTION_RANGE: (f64, f64) = (0.0025, 0.0035);
/// Smallest defect disk radius the batch generator will draw.
const MIN_DEFECT_RADIUS: f64 = 26.0;
/// Clearance kept between dark disks and between a disk and the fruit rim.
const DISK_CLEARANCE: f64 = 4.0;

/// One dark disk to paint on the fruit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DefectDisk {
    /// Disk center in pixel coordinates.
    pub center: (f64, f64),
    /// Disk radius in pixels.
    pub radius: f64,
    /// Brown fill color; its weighted gray value must sit well below the
    /// bright block.
    pub color: (u8, u8, u8),
}

/// Full description of one synthetic apple image.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticAppleSpec {
    /// Seed recorded with the image; rendering is deterministic in the
    /// spec fields alone.
    pub seed: u64,
    /// Canvas width and height in pixels.
    pub image_size: (u32, u32),
    /// Fruit ellipse semi-axes in pixels.
    pub fruit_axes: (f64, f64),
    /// Color of the fruit center; its weighted gray value anchors the top
    /// of the bright block.
    pub base_color: (u8, u8, u8),
    /// Radial brightness falloff exponent (valid range `(0, 2)`).
    pub shading_exponent: f64,
    /// Gray value at the fruit rim as a fraction of the anchor level;
    /// controls the width of the bright histogram block.
    pub rim_brightness: f64,
    /// Browning defect disks; must lie inside the fruit.
    pub defects: Vec<DefectDisk>,
    /// Whether to draw a calyx disk near the top pole.
    pub include_calyx: bool,
    /// Whether to draw a stem disk near the bottom pole.
    pub include_stem: bool,
    /// Combined target area fraction of calyx and stem; must stay below
    /// the classifier threshold so sound apples grade healthy.
    pub calyx_stem_area_fraction: f64,
}

/// Ground truth accompanying a rendered image.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    /// Mask of defect pixels (calyx and stem excluded).
    pub defect_mask: BinaryMask,
    /// Defect pixel count divided by total pixel count.
    pub defect_fraction: f64,
}

/// One generated batch element.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSample {
    /// The resolved spec, including the per-image seed.
    pub spec: SyntheticAppleSpec,
    /// Rendered image.
    pub image: RgbImage,
    /// Ground truth for the image.
    pub truth: GroundTruth,
    /// True grade of the sample.
    pub label: GradeLabel,
}

fn weighted_gray_of(color: (u8, u8, u8)) -> u8 {
    let w = production_weights::<f64>();
    crate::real::quantize_u8(w.a * color.0 as f64 + w.b * color.1 as f64)
}

/// Number of gray levels below the anchor over which the flesh color ramps
/// from the base hue to the reddest feasible color: the dim side of the
/// fruit carries a red blush, as ripe fruit does. The production transform
/// still maps every entry to its own level, but green-heavy weightings smear
/// the blushed flesh far down the gray range, so a poor weight choice
/// visibly degrades segmentation instead of being silently absorbed by the
/// generator. The ramp is linear in the level, which keeps the remapped
/// flesh monotone (a single clump) under every weight pair.
const RED_BLUSH_SPAN: f64 = 48.0;

/// Solves a gray-to-RGB lookup table such that the production transform
/// maps each entry back to its own level exactly. The hue drifts linearly
/// from the base color at the anchor to the reddest feasible color one
/// blush span below it.
fn color_lookup(base_color: (u8, u8, u8), anchor: u8) -> Result<Vec<(u8, u8, u8)>> {
    let w = production_weights::<f64>();
    let c_red_anchor = base_color.0 as f64 / anchor.max(1) as f64;
    let mut lut = Vec::with_capacity(256);
    for level in 0..=255u32 {
        let level_f = level as f64;
        let c_red =
            (c_red_anchor + 0.25 * (anchor as f64 - level_f) / 252.0).clamp(0.05, 1.30);
        let base_red = c_red * level_f;
        let max_red = (level_f / w.a).min(255.0).floor();
        let blush = ((anchor as f64 - level_f) / RED_BLUSH_SPAN).clamp(0.0, 1.0);
        let r_target = (base_red + (max_red - base_red) * blush).round();
        let mut found = None;
        'search: for dr in [0i64, -1, 1, -2, 2, -3, 3, -4, 4, -5, 5, -6, 6] {
            let r = (r_target as i64 + dr).clamp(0, 255);
            let g_target = ((level_f - w.a * r as f64) / w.b).round() as i64;
            for dg in [0i64, -1, 1] {
                let g = (g_target + dg).clamp(0, 255);
                if (w.a * r as f64 + w.b * g as f64).round() as u32 == level {
                    found = Some((r as u8, g as u8, (0.42 * g as f64).round() as u8));
                    break 'search;
                }
            }
        }
        lut.push(found.ok_or_else(|| {
            Error::InvalidSpec(format!("no color solves gray level {level}"))
        })?);
    }
    lut[anchor as usize] = base_color;
    Ok(lut)
}

/// Normalized elliptical radius of a pixel: `< 1` inside the fruit.
fn elliptical_radius(x: u32, y: u32, spec: &SyntheticAppleSpec) -> f64 {
    let cx = (spec.image_size.0 as f64 - 1.0) / 2.0;
    let cy = (spec.image_size.1 as f64 - 1.0) / 2.0;
    let dx = (x as f64 - cx) / spec.fruit_axes.0;
    let dy = (y as f64 - cy) / spec.fruit_axes.1;
    (dx * dx + dy * dy).sqrt()
}

fn validate(spec: &SyntheticAppleSpec) -> Result<(u8, u8)> {
    let (w, h) = spec.image_size;
    if w < 32 || h < 32 {
        return Err(Error::InvalidSpec(format!(
            "image size {w}x{h} is too small (minimum 32x32)"
        )));
    }
    let (ax, ay) = spec.fruit_axes;
    if !(ax >= 8.0 && ay >= 8.0 && ax <= w as f64 / 2.0 && ay <= h as f64 / 2.0) {
        return Err(Error::InvalidSpec(format!(
            "fruit axes ({ax}, {ay}) must fit inside the {w}x{h} canvas"
        )));
    }
    if !(spec.shading_exponent > 0.0 && spec.shading_exponent < 2.0) {
        return Err(Error::InvalidSpec(format!(
            "shading exponent {} outside (0, 2)",
            spec.shading_exponent
        )));
    }
    if !(0.5..=0.98).contains(&spec.rim_brightness) {
        return Err(Error::InvalidSpec(format!(
            "rim brightness {} outside [0.5, 0.98]",
            spec.rim_brightness
        )));
    }
    if !(0.0..0.0065).contains(&spec.calyx_stem_area_fraction) {
        return Err(Error::InvalidSpec(format!(
            "calyx/stem fraction {} must stay below the classifier threshold",
            spec.calyx_stem_area_fraction
        )));
    }

    let anchor = weighted_gray_of(spec.base_color);
    let floor = (anchor as f64 * spec.rim_brightness).round() as u32;
    if anchor < 64 || anchor as u32 - floor < 15 {
        return Err(Error::InvalidSpec(format!(
            "base color and rim brightness leave a degenerate bright block \
             [{floor}, {anchor}]"
        )));
    }

    let min_axis = ax.min(ay);
    let mut disks: Vec<(f64, f64, f64)> = Vec::new();
    for d in &spec.defects {
        let rho = {
            let dx = (d.center.0 - (w as f64 - 1.0) / 2.0) / ax;
            let dy = (d.center.1 - (h as f64 - 1.0) / 2.0) / ay;
            (dx * dx + dy * dy).sqrt()
        };
        if rho + (d.radius + 3.0) / min_axis > 1.0 {
            return Err(Error::InvalidSpec(format!(
                "defect disk at ({}, {}) radius {} reaches outside the fruit",
                d.center.0, d.center.1, d.radius
            )));
        }
        let gray = weighted_gray_of(d.color);
        if gray as u32 + 20 > floor {
            return Err(Error::InvalidSpec(format!(
                "defect color gray value {gray} is too close to the bright \
                 block floor {floor}"
            )));
        }
        disks.push((d.center.0, d.center.1, d.radius));
    }
    for (cx_d, cy_d, r) in calyx_stem_disks(spec) {
        disks.push((cx_d, cy_d, r));
    }
    for i in 0..disks.len() {
        for j in i + 1..disks.len() {
            let dx = disks[i].0 - disks[j].0;
            let dy = disks[i].1 - disks[j].1;
            if (dx * dx + dy * dy).sqrt() < disks[i].2 + disks[j].2 + 2.0 {
                return Err(Error::InvalidSpec(
                    "dark disks overlap or nearly touch".into(),
                ));
            }
        }
    }
    Ok((floor as u8, anchor))
}

/// Calyx and stem disks implied by the scene flags, near the vertical poles.
fn calyx_stem_disks(spec: &SyntheticAppleSpec) -> Vec<(f64, f64, f64)> {
    let (w, h) = spec.image_size;
    let n = w as f64 * h as f64;
    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let (ax, ay) = spec.fruit_axes;
    let mut shares = Vec::new();
    match (spec.include_calyx, spec.include_stem) {
        (true, true) => shares.extend([(true, 0.62), (false, 0.38)]),
        (true, false) => shares.push((true, 1.0)),
        (false, true) => shares.push((false, 1.0)),
        (false, false) => {}
    }
    shares
        .into_iter()
        .filter(|&(_, share)| share * spec.calyx_stem_area_fraction > 0.0)
        .map(|(is_calyx, share)| {
            let radius =
                (share * spec.calyx_stem_area_fraction * n / std::f64::consts::PI).sqrt();
            if is_calyx {
                (cx - 0.10 * ax, cy - 0.62 * ay, radius)
            } else {
                (cx + 0.08 * ax, cy + 0.66 * ay, radius)
            }
        })
        .collect()
}

/// Renders an apple image and its ground truth.
///
/// Deterministic in the [`SyntheticAppleSpec`] fields; the same description
/// always produces bit-identical output.
pub fn render_apple(spec: &SyntheticAppleSpec) -> Result<(RgbImage, GroundTruth)> {
    let (floor, anchor) = validate(spec)?;
    let lut = color_lookup(spec.base_color, anchor)?;
    let (w, h) = spec.image_size;
    let n_total = w as usize * h as usize;

    // Paint dark disks: defects first (these enter the ground-truth mask),
    // then calyx/stem. `dark[i]` holds the RGB fill when the pixel is dark.
    let mut dark: Vec<Option<(u8, u8, u8)>> = vec![None; n_total];
    let mut mask = BinaryMask::new(w, h);
    let dark_color = lut[DARK_LEVEL as usize];
    let pole_disks = calyx_stem_disks(spec);
    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as usize;
            for d in &spec.defects {
                let (dx, dy) = (x as f64 - d.center.0, y as f64 - d.center.1);
                if dx * dx + dy * dy <= d.radius * d.radius {
                    dark[idx] = Some(d.color);
                    mask.data[idx] = 1;
                }
            }
            for &(cx_d, cy_d, r) in &pole_disks {
                let (dx, dy) = (x as f64 - cx_d, y as f64 - cy_d);
                if dark[idx].is_none() && dx * dx + dy * dy <= r * r {
                    dark[idx] = Some(dark_color);
                }
            }
        }
    }
    let defect_count = mask.count_ones();

    // Split bright pixels into fruit (inside the ellipse) and backdrop,
    // each ordered along the radial field; ties break by pixel index so the
    // ordering is total and deterministic.
    let mut fruit: Vec<(f64, usize)> = Vec::new();
    let mut backdrop: Vec<(f64, usize)> = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let idx = (y * w + x) as usize;
            if dark[idx].is_some() {
                continue;
            }
            let rho = elliptical_radius(x, y, spec);
            if rho < 1.0 {
                fruit.push((rho, idx));
            } else {
                backdrop.push((rho, idx));
            }
        }
    }
    fruit.sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    backdrop.sort_unstable_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));

    // Designed bright histogram: levels [floor, anchor], with the pixel
    // count per level rising strictly toward the floor when the shading
    // exponent is below 2. Cumulative rounding makes the counts exact.
    let n_bright = fruit.len() + backdrop.len();
    let span = (anchor - floor) as usize + 1;
    let cumulative: Vec<usize> = (0..=span)
        .map(|j| {
            let x = j as f64 / span as f64;
            (n_bright as f64 * x.powf(2.0 / spec.shading_exponent)).round() as usize
        })
        .collect();
    let mut level_by_rank: Vec<u8> = Vec::with_capacity(n_bright);
    for j in 0..span {
        let level = anchor - j as u8;
        for _ in cumulative[j]..cumulative[j + 1] {
            level_by_rank.push(level);
        }
    }
    debug_assert_eq!(level_by_rank.len(), n_bright);

    // Fruit takes the brightest ranks inside-out; the backdrop takes the
    // remaining (darker) ranks outside-in, so it dims toward the fruit and
    // the rim shows a clean level jump.
    let mut image = RgbImage::new(w, h);
    for (rank, &(_, idx)) in fruit.iter().enumerate() {
        let rgb = lut[level_by_rank[rank] as usize];
        image.data[3 * idx..3 * idx + 3].copy_from_slice(&[rgb.0, rgb.1, rgb.2]);
    }
    let n_fruit = fruit.len();
    for (rank, &(_, idx)) in backdrop.iter().enumerate() {
        let rgb = lut[level_by_rank[n_fruit + rank] as usize];
        image.data[3 * idx..3 * idx + 3].copy_from_slice(&[rgb.0, rgb.1, rgb.2]);
    }
    for (idx, fill) in dark.iter().enumerate() {
        if let Some(rgb) = fill {
            image.data[3 * idx..3 * idx + 3].copy_from_slice(&[rgb.0, rgb.1, rgb.2]);
        }
    }

    Ok((
        image,
        GroundTruth {
            defect_mask: mask,
            defect_fraction: defect_count as f64 / n_total as f64,
        },
    ))
}

/// Builds the defective-preset spec for one image seed.
fn defective_spec(seed: u64) -> Result<SyntheticAppleSpec> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = BATCH_IMAGE_SIZE;
    let n = w as f64 * h as f64;
    let (ax, ay) = (BATCH_AXIS_FRACTION * w as f64, BATCH_AXIS_FRACTION * h as f64);
    let (cx, cy) = ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0);
    let min_axis = ax.min(ay);
    let lut = color_lookup(PRESET_BASE_COLOR, ANCHOR_LEVEL)?;
    let brown = lut[DARK_LEVEL as usize];

    let min_disk_area = std::f64::consts::PI * MIN_DEFECT_RADIUS * MIN_DEFECT_RADIUS;
    'config: for _ in 0..50 {
        let fraction = rng.gen_range(DEFECT_FRACTION_RANGE.0..=DEFECT_FRACTION_RANGE.1);
        let max_disks = ((fraction * n / min_disk_area) as usize).clamp(1, 3);
        let disk_count = rng.gen_range(1..=max_disks);
        let raw: Vec<f64> = (0..disk_count).map(|_| rng.gen_range(0.7..=1.3)).collect();
        let total: f64 = raw.iter().sum();
        let radii: Vec<f64> = raw
            .iter()
            .map(|share| (share / total * fraction * n / std::f64::consts::PI).sqrt())
            .collect();

        let mut defects: Vec<DefectDisk> = Vec::with_capacity(disk_count);
        for &radius in &radii {
            let mut placed = false;
            for _ in 0..400 {
                let px = cx + rng.gen_range(-1.0..=1.0) * (ax - radius - DISK_CLEARANCE);
                let py = cy + rng.gen_range(-1.0..=1.0) * (ay - radius - DISK_CLEARANCE);
                let rho = {
                    let dx = (px - cx) / ax;
                    let dy = (py - cy) / ay;
                    (dx * dx + dy * dy).sqrt()
                };
                if rho + (radius + DISK_CLEARANCE) / min_axis > 1.0 {
                    continue;
                }
                if defects.iter().any(|d| {
                    let dx = d.center.0 - px;
                    let dy = d.center.1 - py;
                    (dx * dx + dy * dy).sqrt() < d.radius + radius + DISK_CLEARANCE
                }) {
                    continue;
                }
                defects.push(DefectDisk {
                    center: (px, py),
                    radius,
                    color: brown,
                });
                placed = true;
                break;
            }
            if !placed {
                continue 'config;
            }
        }
        return Ok(SyntheticAppleSpec {
            seed,
            image_size: BATCH_IMAGE_SIZE,
            fruit_axes: (ax, ay),
            base_color: PRESET_BASE_COLOR,
            shading_exponent: PRESET_SHADING_EXPONENT,
            rim_brightness: DEFECTIVE_RIM_BRIGHTNESS,
            defects,
            include_calyx: false,
            include_stem: false,
            calyx_stem_area_fraction: 0.0,
        });
    }
    Err(Error::InvalidSpec(
        "could not place defect disks inside the fruit".into(),
    ))
}

/// Builds the sound-preset spec for one image seed.
fn sound_spec(seed: u64) -> SyntheticAppleSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = BATCH_IMAGE_SIZE;
    SyntheticAppleSpec {
        seed,
        image_size: BATCH_IMAGE_SIZE,
        fruit_axes: (BATCH_AXIS_FRACTION * w as f64, BATCH_AXIS_FRACTION * h as f64),
        base_color: PRESET_BASE_COLOR,
        shading_exponent: PRESET_SHADING_EXPONENT,
        rim_brightness: SOUND_RIM_BRIGHTNESS,
        defects: Vec::new(),
        include_calyx: true,
        include_stem: true,
        calyx_stem_area_fraction: rng
            .gen_range(CALYX_STEM_FRACTION_RANGE.0..=CALYX_STEM_FRACTION_RANGE.1),
    }
}

/// Generates a labeled batch of synthetic apples: `n_defective` apples with
/// 1–3 browning disks (total fraction in [0.01, 0.11]) followed by
/// `n_sound` apples carrying only calyx and stem marks.
///
/// Per-image seeds derive from `master_seed`, so batches are deterministic
/// and the images are independent of each other.
pub fn generate_batch(
    n_defective: usize,
    n_sound: usize,
    master_seed: u64,
) -> Result<Vec<SyntheticSample>> {
    let mut master = ChaCha8Rng::seed_from_u64(master_seed);
    let defective_seeds: Vec<u64> = (0..n_defective).map(|_| master.next_u64()).collect();
    let sound_seeds: Vec<u64> = (0..n_sound).map(|_| master.next_u64()).collect();

    let mut jobs: Vec<(u64, GradeLabel)> = Vec::with_capacity(n_defective + n_sound);
    jobs.extend(defective_seeds.iter().map(|&s| (s, GradeLabel::Defective)));
    jobs.extend(sound_seeds.iter().map(|&s| (s, GradeLabel::Healthy)));

    jobs.into_par_iter()
        .map(|(seed, label)| {
            let spec = match label {
                GradeLabel::Defective => defective_spec(seed)?,
                GradeLabel::Healthy => Ok::<_, Error>(sound_spec(seed))?,
            };
            let (image, truth) = render_apple(&spec)?;
            Ok(SyntheticSample {
                spec,
                image,
                truth,
                label,
            })
        })
        .collect()
}
