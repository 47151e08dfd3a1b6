//! Diagnostic: sweeps synthetic batches and reports any pipeline guarantee
//! violations (modality, NDA accuracy, classification, oracle agreement).

use applevision::blur::gaussian_lowpass;
use applevision::grading::{classify_nda, compute_nda, GradeLabel};
use applevision::grayscale::weighted_grayscale;
use applevision::raster::compute_histogram;
use applevision::segmentation::{apply_threshold, modality, valley_threshold};
use applevision::weights::production_weights;
use applevision::{generate_batch, otsu_threshold};

fn main() {
    let mut violations = 0usize;
    let mut worst_rel: f64 = 0.0;
    let mut worst_sound_nda: f64 = 0.0;
    let mut oracle_gap: f64 = 0.0;
    let mut checked = 0usize;
    for master_seed in [7u64, 11, 99, 12345, 777, 31415] {
        let batch = generate_batch(40, 20, master_seed).unwrap();
        for (i, sample) in batch.iter().enumerate() {
            checked += 1;
            let gray = weighted_grayscale(&sample.image, &production_weights::<f64>());
            let smooth = gaussian_lowpass(&gray, 0.5).unwrap();
            let hist = compute_histogram(&smooth);
            let report = modality::<f64>(&hist, 9, 0.05).unwrap();
            let otsu = otsu_threshold::<f64>(&hist).unwrap().threshold;
            let mask = apply_threshold(&smooth, otsu);
            let nda = compute_nda::<f64>(&mask).unwrap();
            let label = classify_nda(nda, 0.0065);

            let mut bad: Vec<String> = Vec::new();
            match sample.label {
                GradeLabel::Defective => {
                    if !report.is_bimodal {
                        bad.push(format!("not bimodal: peaks {:?}", report.peak_levels));
                    }
                    let f = sample.truth.defect_fraction;
                    let rel = (nda - f).abs() / f;
                    worst_rel = worst_rel.max(rel);
                    if rel > 0.10 {
                        bad.push(format!("nda {nda:.5} vs f {f:.5} rel {rel:.4}"));
                    }
                    if label != GradeLabel::Defective {
                        bad.push("classified healthy".into());
                    }
                    if let Ok(t) = valley_threshold::<f64>(&hist, 9) {
                        let omask = apply_threshold(&smooth, t);
                        let onda = compute_nda::<f64>(&omask).unwrap();
                        oracle_gap = oracle_gap.max((onda - nda).abs() / nda);
                    } else {
                        bad.push("no valley threshold".into());
                    }
                }
                GradeLabel::Healthy => {
                    if report.is_bimodal {
                        bad.push(format!("bimodal: peaks {:?}", report.peak_levels));
                    }
                    worst_sound_nda = worst_sound_nda.max(nda);
                    if nda > 0.0065 {
                        bad.push(format!("sound nda {nda:.5}"));
                    }
                    if label != GradeLabel::Healthy {
                        bad.push("classified defective".into());
                    }
                }
            }
            if !bad.is_empty() {
                violations += 1;
                println!(
                    "seed {master_seed} #{i} {:?} f={:.4}: {}",
                    sample.label,
                    sample.truth.defect_fraction,
                    bad.join("; ")
                );
            }
        }
    }
    println!("checked {checked} samples, {violations} violations");
    println!("worst defective NDA relative error: {worst_rel:.4}");
    println!("worst sound NDA: {worst_sound_nda:.6}");
    println!("worst oracle/method relative gap:   {oracle_gap:.6}");
}
