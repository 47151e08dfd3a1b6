//! End-to-end pipeline tests on synthetic apples with known ground truth.
//!
//! Every test renders images through the public generator, so the expected
//! values (defect fractions, geometry) come from the generator's own spec
//! rather than from the code under test.

use applevision::{
    generate_batch, grade_image, production_weights, render_apple, roberts_edges,
    valley_oracle_nda, weighted_grayscale, GradeLabel, PipelineConfig, SyntheticSample,
    DEFAULT_TAU,
};

fn defective_samples(n: usize, master_seed: u64) -> Vec<SyntheticSample> {
    generate_batch(n, 0, master_seed).expect("defective batch renders")
}

fn sound_samples(n: usize, master_seed: u64) -> Vec<SyntheticSample> {
    generate_batch(0, n, master_seed).expect("sound batch renders")
}

#[test]
fn defective_apples_grade_defective_with_accurate_area() {
    let config = PipelineConfig::<f64>::default();
    for sample in defective_samples(4, 41) {
        let out = grade_image(&sample.image, &config).unwrap();
        let fraction = sample.truth.defect_fraction;
        assert_eq!(out.label, GradeLabel::Defective);
        assert!(
            out.modality.is_bimodal,
            "defective histogram should be bimodal, got peaks {:?}",
            out.modality.peak_levels
        );
        let rel = (out.nda - fraction).abs() / fraction;
        assert!(
            rel <= 0.10,
            "nda {} vs ground truth {} (relative error {rel})",
            out.nda,
            fraction
        );
    }
}

#[test]
fn defective_apples_admit_a_close_valley_oracle() {
    let config = PipelineConfig::<f64>::default();
    for sample in defective_samples(4, 43) {
        let out = grade_image(&sample.image, &config).unwrap();
        let oracle = valley_oracle_nda(&sample.image, &config)
            .unwrap()
            .expect("defective histogram is bimodal, so the valley exists");
        let rel = (out.nda - oracle).abs() / oracle;
        assert!(
            rel <= 0.10,
            "method nda {} vs valley oracle {oracle} (relative gap {rel})",
            out.nda
        );
    }
}

#[test]
fn sound_apples_grade_healthy_below_tau() {
    let config = PipelineConfig::<f64>::default();
    for sample in sound_samples(4, 42) {
        let out = grade_image(&sample.image, &config).unwrap();
        assert_eq!(out.label, GradeLabel::Healthy);
        assert!(
            out.nda <= DEFAULT_TAU,
            "sound apple nda {} exceeds tau",
            out.nda
        );
        // Calyx and stem leave too little dark mass for a second peak, so
        // the valley oracle abstains on sound fruit.
        assert!(!out.modality.is_bimodal);
        assert_eq!(valley_oracle_nda(&sample.image, &config).unwrap(), None);
    }
}

/// Distance classifiers for the edge-mask test: a marked pixel must lie on
/// the fruit rim (elliptical radius near 1) or on a defect-disk outline.
struct Geometry {
    center: (f64, f64),
    axes: (f64, f64),
    disks: Vec<((f64, f64), f64)>,
}

impl Geometry {
    fn of(sample: &SyntheticSample) -> Self {
        let (w, h) = sample.spec.image_size;
        Geometry {
            center: ((w as f64 - 1.0) / 2.0, (h as f64 - 1.0) / 2.0),
            axes: sample.spec.fruit_axes,
            disks: sample
                .spec
                .defects
                .iter()
                .map(|d| (d.center, d.radius))
                .collect(),
        }
    }

    fn near_rim(&self, x: u32, y: u32, pixels: f64) -> bool {
        let dx = (x as f64 - self.center.0) / self.axes.0;
        let dy = (y as f64 - self.center.1) / self.axes.1;
        let rho = (dx * dx + dy * dy).sqrt();
        (rho - 1.0).abs() <= pixels / self.axes.0.min(self.axes.1)
    }

    fn near_disk_outline(&self, x: u32, y: u32, pixels: f64) -> bool {
        self.disks.iter().any(|&((cx, cy), r)| {
            let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
            (d - r).abs() <= pixels
        })
    }
}

#[test]
fn roberts_mask_hugs_the_rim_and_defect_outlines() {
    let sample = &defective_samples(1, 5)[0];
    let geometry = Geometry::of(sample);
    let gray = weighted_grayscale(&sample.image, &production_weights::<f64>());
    let (w, h) = (gray.width, gray.height);

    // The designed shading ramps change by at most one level per pixel, so a
    // low threshold silences them while keeping the rim's level jump and the
    // much stronger defect outlines.
    let edges = roberts_edges(&gray, 6);
    let mut rim_hits = 0u64;
    let mut disk_hits = vec![0u64; geometry.disks.len()];
    for y in 0..h {
        for x in 0..w {
            if edges.get(x, y) == 0 {
                continue;
            }
            let on_rim = geometry.near_rim(x, y, 3.0);
            let on_disk = geometry.near_disk_outline(x, y, 3.0);
            assert!(
                on_rim || on_disk,
                "edge pixel ({x}, {y}) is neither on the rim nor on a defect outline"
            );
            if on_rim {
                rim_hits += 1;
            }
            for (i, &((cx, cy), r)) in geometry.disks.iter().enumerate() {
                let d = ((x as f64 - cx).powi(2) + (y as f64 - cy).powi(2)).sqrt();
                if (d - r).abs() <= 3.0 {
                    disk_hits[i] += 1;
                }
            }
        }
    }
    // Coverage: the rim ring is roughly the ellipse perimeter long, and each
    // disk outline is roughly its circumference long.
    assert!(rim_hits >= 1000, "only {rim_hits} edge pixels on the rim");
    for (i, &((_, _), r)) in geometry.disks.iter().enumerate() {
        assert!(
            disk_hits[i] as f64 >= 2.0 * r,
            "disk {i} (radius {r}) has only {} outline pixels",
            disk_hits[i]
        );
    }

    // A high threshold suppresses the rim jump but keeps the defect
    // outlines, whose contrast is two orders of magnitude larger.
    let strong = roberts_edges(&gray, 100);
    let mut strong_count = 0u64;
    for y in 0..h {
        for x in 0..w {
            if strong.get(x, y) == 1 {
                strong_count += 1;
                assert!(
                    geometry.near_disk_outline(x, y, 3.0),
                    "strong edge ({x}, {y}) off the defect outlines"
                );
            }
        }
    }
    let circumference: f64 = geometry.disks.iter().map(|&(_, r)| 2.0 * r).sum();
    assert!(strong_count as f64 >= circumference);
}

#[test]
fn explicit_resize_keeps_defective_grading_accurate() {
    let sample = &defective_samples(1, 7)[0];
    let mut config = PipelineConfig::<f64>::default();
    config.resize_to = Some((300, 225));
    let out = grade_image(&sample.image, &config).unwrap();
    assert_eq!(out.processed_size, (300, 225));
    assert_eq!(out.label, GradeLabel::Defective);
    let fraction = sample.truth.defect_fraction;
    let rel = (out.nda - fraction).abs() / fraction;
    assert!(
        rel <= 0.20,
        "half-resolution nda {} vs ground truth {fraction} (relative error {rel})",
        out.nda
    );
}

#[test]
fn native_capture_size_auto_resizes_to_the_processing_size() {
    // A sound apple at the native capture size; grading should downscale it
    // to the default processing size before segmentation.
    let mut spec = sound_samples(1, 9)[0].spec.clone();
    spec.image_size = (1600, 1200);
    spec.fruit_axes = (0.49 * 1600.0, 0.49 * 1200.0);
    let (image, _) = render_apple(&spec).unwrap();

    let config = PipelineConfig::<f64>::default();
    let out = grade_image(&image, &config).unwrap();
    assert_eq!(out.processed_size, (1000, 750));
    assert_eq!(out.label, GradeLabel::Healthy);
    assert!(out.nda <= DEFAULT_TAU);
}

#[test]
fn manual_threshold_bypasses_automatic_selection() {
    let sample = &defective_samples(1, 11)[0];
    let mut config = PipelineConfig::<f64>::default();
    config.manual_threshold = Some(100);
    let out = grade_image(&sample.image, &config).unwrap();
    assert_eq!(out.threshold, 100);
    assert_eq!(out.criterion_value, None);
}

#[test]
fn grading_is_deterministic_for_identical_input() {
    let sample = &defective_samples(1, 13)[0];
    let config = PipelineConfig::<f64>::default();
    let first = grade_image(&sample.image, &config).unwrap();
    let second = grade_image(&sample.image, &config).unwrap();
    assert_eq!(first.nda, second.nda);
    assert_eq!(first.threshold, second.threshold);
    assert_eq!(first.mask.data, second.mask.data);
}
