//! Normalized-defective-area feature, threshold classifier, extraction
//! error metric, and batch evaluation reports.

use serde_json::json;

use crate::error::{Error, Result};
use crate::raster::BinaryMask;
use crate::real::rconst;
use crate::Real;

/// Default classifier threshold on the NDA feature.
pub const DEFAULT_TAU: f64 = 0.0065;

/// Binary grade assigned to an apple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradeLabel {
    /// NDA at or below the classifier threshold.
    Healthy,
    /// NDA above the classifier threshold.
    Defective,
}

impl GradeLabel {
    /// Lowercase name used in CSV and JSON output.
    pub fn as_str(self) -> &'static str {
        match self {
            GradeLabel::Healthy => "healthy",
            GradeLabel::Defective => "defective",
        }
    }

    /// Parses the lowercase name produced by [`GradeLabel::as_str`].
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "healthy" => Ok(GradeLabel::Healthy),
            "defective" => Ok(GradeLabel::Defective),
            other => Err(Error::CorruptData(format!(
                "unknown grade label {other:?}"
            ))),
        }
    }
}

impl std::fmt::Display for GradeLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Grading result for one image.
#[derive(Debug, Clone, PartialEq)]
pub struct NdaRecord<T = f64> {
    /// Identifier of the graded image.
    pub image_id: String,
    /// Normalized defective area in `[0, 1]`.
    pub nda: T,
    /// Grade implied by the NDA.
    pub label: GradeLabel,
}

/// One input row for [`evaluate_batch`]: the pipeline's NDA, the
/// valley-oracle NDA when the histogram admitted one, and the true label.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRecord<T = f64> {
    /// Identifier of the image.
    pub image_id: String,
    /// NDA measured by the method under test.
    pub method_nda: T,
    /// NDA under the valley-threshold oracle, when the histogram was
    /// bimodal; `None` otherwise (the record is then excluded from the
    /// extraction totals but still classified).
    pub oracle_nda: Option<T>,
    /// Ground-truth label.
    pub true_label: GradeLabel,
}

/// Classification tallies; "positive" is [`GradeLabel::Defective`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    /// Defective classified defective.
    pub true_positive: u64,
    /// Healthy classified healthy.
    pub true_negative: u64,
    /// Healthy classified defective.
    pub false_positive: u64,
    /// Defective classified healthy.
    pub false_negative: u64,
}

impl ConfusionCounts {
    /// Total number of classified records.
    pub fn total(&self) -> u64 {
        self.true_positive + self.true_negative + self.false_positive + self.false_negative
    }

    /// Number of correctly classified records.
    pub fn correct(&self) -> u64 {
        self.true_positive + self.true_negative
    }
}

/// Per-record outcome kept in the evaluation report.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalRow<T = f64> {
    /// Identifier of the image.
    pub image_id: String,
    /// NDA measured by the method under test.
    pub method_nda: T,
    /// Oracle NDA, when available.
    pub oracle_nda: Option<T>,
    /// Ground-truth label.
    pub true_label: GradeLabel,
    /// Label assigned by the classifier to `method_nda`.
    pub predicted_label: GradeLabel,
}

/// Batch-level evaluation: extraction totals and error, plus the
/// classification confusion matrix.
///
/// Accuracy percentages are derived via methods; only totals, the error,
/// and raw counts are stored.
#[derive(Debug, Clone, PartialEq)]
pub struct EvaluationReport<T = f64> {
    /// Sum of method NDAs over records that carry an oracle value.
    pub total_nda_method: T,
    /// Sum of oracle NDAs over the same records.
    pub total_nda_oracle: T,
    /// Relative extraction error `(method − oracle) / oracle × 100`.
    pub error_percent: T,
    /// Confusion counts over all records.
    pub confusion: ConfusionCounts,
    /// Per-record outcomes in input order.
    pub rows: Vec<EvalRow<T>>,
}

impl<T: Real> EvaluationReport<T> {
    /// Extraction accuracy, `100 − |error_percent|`.
    pub fn extraction_accuracy_percent(&self) -> T {
        rconst::<T>(100.0) - self.error_percent.abs()
    }

    /// Share of correctly classified records, as a percentage.
    pub fn classification_accuracy_percent(&self) -> T {
        rconst::<T>(100.0) * rconst::<T>(self.confusion.correct() as f64)
            / rconst::<T>(self.confusion.total() as f64)
    }

    /// Renders the per-record table as CSV.
    pub fn rows_to_csv(&self) -> String {
        let mut out =
            String::from("image_id,method_nda,oracle_nda,true_label,predicted_label\n");
        for row in &self.rows {
            let oracle = row
                .oracle_nda
                .map(|v| format!("{:.6}", v.to_f64().unwrap()))
                .unwrap_or_default();
            out.push_str(&format!(
                "{},{:.6},{},{},{}\n",
                row.image_id,
                row.method_nda.to_f64().unwrap(),
                oracle,
                row.true_label,
                row.predicted_label
            ));
        }
        out
    }

    /// Builds the JSON value of the full report (render it with
    /// [`crate::report::render_json`] for byte-stable output).
    pub fn to_json_value(&self) -> serde_json::Value {
        json!({
            "total_nda_method": self.total_nda_method.to_f64().unwrap(),
            "total_nda_oracle": self.total_nda_oracle.to_f64().unwrap(),
            "error_percent": self.error_percent.to_f64().unwrap(),
            "extraction_accuracy_percent": self.extraction_accuracy_percent().to_f64().unwrap(),
            "classification_accuracy_percent": self.classification_accuracy_percent().to_f64().unwrap(),
            "confusion": {
                "true_positive": self.confusion.true_positive,
                "true_negative": self.confusion.true_negative,
                "false_positive": self.confusion.false_positive,
                "false_negative": self.confusion.false_negative,
            },
            "records": self.rows.iter().map(|row| json!({
                "image_id": row.image_id,
                "method_nda": row.method_nda.to_f64().unwrap(),
                "oracle_nda": row.oracle_nda.map(|v| v.to_f64().unwrap()),
                "true_label": row.true_label.as_str(),
                "predicted_label": row.predicted_label.as_str(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Fraction of foreground pixels in a mask.
pub fn compute_nda<T: Real>(mask: &BinaryMask) -> Result<T> {
    if mask.is_empty() {
        return Err(Error::ZeroSizeMask);
    }
    Ok(rconst::<T>(mask.count_ones() as f64) / rconst::<T>(mask.len() as f64))
}

/// Applies the NDA threshold rule: at or below `tau` is healthy.
pub fn classify_nda<T: Real>(nda: T, tau: T) -> GradeLabel {
    if nda <= tau {
        GradeLabel::Healthy
    } else {
        GradeLabel::Defective
    }
}

/// Relative extraction error `(nda_ts − nda_hb) / nda_hb × 100`.
pub fn extraction_error<T: Real>(nda_ts: T, nda_hb: T) -> Result<T> {
    if nda_hb <= T::zero() {
        return Err(Error::ZeroOracleTotal);
    }
    Ok((nda_ts - nda_hb) / nda_hb * rconst::<T>(100.0))
}

/// Evaluates a batch: pairs method and oracle NDA totals over the records
/// that carry an oracle value, computes the extraction error on those
/// totals, and classifies every record's method NDA against `tau`.
pub fn evaluate_batch<T: Real>(records: &[EvalRecord<T>], tau: T) -> Result<EvaluationReport<T>> {
    if records.is_empty() {
        return Err(Error::EmptyBatch);
    }
    let mut total_method = T::zero();
    let mut total_oracle = T::zero();
    let mut confusion = ConfusionCounts::default();
    let mut rows = Vec::with_capacity(records.len());
    for record in records {
        if let Some(oracle) = record.oracle_nda {
            total_method = total_method + record.method_nda;
            total_oracle = total_oracle + oracle;
        }
        let predicted = classify_nda(record.method_nda, tau);
        match (record.true_label, predicted) {
            (GradeLabel::Defective, GradeLabel::Defective) => confusion.true_positive += 1,
            (GradeLabel::Healthy, GradeLabel::Healthy) => confusion.true_negative += 1,
            (GradeLabel::Healthy, GradeLabel::Defective) => confusion.false_positive += 1,
            (GradeLabel::Defective, GradeLabel::Healthy) => confusion.false_negative += 1,
        }
        rows.push(EvalRow {
            image_id: record.image_id.clone(),
            method_nda: record.method_nda,
            oracle_nda: record.oracle_nda,
            true_label: record.true_label,
            predicted_label: predicted,
        });
    }
    let error_percent = extraction_error(total_method, total_oracle)?;
    Ok(EvaluationReport {
        total_nda_method: total_method,
        total_nda_oracle: total_oracle,
        error_percent,
        confusion,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nda_is_the_foreground_fraction() {
        let zeros = BinaryMask::new(10, 10);
        assert_eq!(compute_nda::<f64>(&zeros).unwrap(), 0.0);

        let mut some = BinaryMask::new(10, 10);
        for i in 0..13 {
            some.data[i * 7 % 100] = 1;
        }
        assert_eq!(some.count_ones(), 13);
        assert_eq!(compute_nda::<f64>(&some).unwrap(), 0.13);

        let ones = BinaryMask::from_raw(4, 4, vec![1; 16]);
        assert_eq!(compute_nda::<f64>(&ones).unwrap(), 1.0);
    }

    #[test]
    fn nda_rejects_empty_masks() {
        let empty = BinaryMask::new(0, 5);
        assert!(matches!(
            compute_nda::<f64>(&empty),
            Err(Error::ZeroSizeMask)
        ));
    }

    #[test]
    fn classifier_boundary_is_inclusive_healthy() {
        assert_eq!(classify_nda(0.0065, 0.0065), GradeLabel::Healthy);
        assert_eq!(classify_nda(0.0432, 0.0065), GradeLabel::Defective);
        assert_eq!(classify_nda(0.0, 0.0065), GradeLabel::Healthy);
    }

    #[test]
    fn extraction_error_matches_direct_formula() {
        assert_eq!(extraction_error(0.5867f64, 0.5867).unwrap(), 0.0);
        let e = extraction_error(0.8754f64, 0.5867).unwrap();
        let direct = (0.8754 - 0.5867) / 0.5867 * 100.0;
        assert_eq!(e, direct);
        assert!(matches!(
            extraction_error(0.5f64, 0.0),
            Err(Error::ZeroOracleTotal)
        ));
    }

    #[test]
    fn extraction_error_increases_with_the_method_total() {
        let lo = extraction_error(0.4f64, 0.5).unwrap();
        let hi = extraction_error(0.6f64, 0.5).unwrap();
        assert!(lo < hi);
    }

    #[test]
    fn single_perfect_record_scores_perfectly() {
        let records = vec![EvalRecord {
            image_id: "a".into(),
            method_nda: 0.05f64,
            oracle_nda: Some(0.05),
            true_label: GradeLabel::Defective,
        }];
        let report = evaluate_batch(&records, 0.0065).unwrap();
        assert_eq!(report.error_percent, 0.0);
        assert_eq!(report.extraction_accuracy_percent(), 100.0);
        assert_eq!(report.classification_accuracy_percent(), 100.0);
        assert_eq!(report.confusion.true_positive, 1);
    }

    #[test]
    fn batch_totals_skip_records_without_an_oracle() {
        let records = vec![
            EvalRecord {
                image_id: "with".into(),
                method_nda: 0.04f64,
                oracle_nda: Some(0.05),
                true_label: GradeLabel::Defective,
            },
            EvalRecord {
                image_id: "without".into(),
                method_nda: 0.001,
                oracle_nda: None,
                true_label: GradeLabel::Healthy,
            },
        ];
        let report = evaluate_batch(&records, 0.0065).unwrap();
        assert_eq!(report.total_nda_method, 0.04);
        assert_eq!(report.total_nda_oracle, 0.05);
        assert_eq!(report.confusion.total(), 2);
        assert_eq!(report.confusion.true_negative, 1);
    }

    #[test]
    fn empty_batch_and_zero_oracle_are_rejected() {
        assert!(matches!(
            evaluate_batch::<f64>(&[], 0.0065),
            Err(Error::EmptyBatch)
        ));
        let no_oracle = vec![EvalRecord {
            image_id: "x".into(),
            method_nda: 0.01f64,
            oracle_nda: None,
            true_label: GradeLabel::Healthy,
        }];
        assert!(matches!(
            evaluate_batch(&no_oracle, 0.0065),
            Err(Error::ZeroOracleTotal)
        ));
    }

    #[test]
    fn rows_csv_has_one_line_per_record_plus_header() {
        let records = vec![
            EvalRecord {
                image_id: "a".into(),
                method_nda: 0.0432f64,
                oracle_nda: Some(0.0432),
                true_label: GradeLabel::Defective,
            },
            EvalRecord {
                image_id: "b".into(),
                method_nda: 0.0001,
                oracle_nda: None,
                true_label: GradeLabel::Healthy,
            },
        ];
        let report = evaluate_batch(&records, 0.0065).unwrap();
        let csv = report.rows_to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "a,0.043200,0.043200,defective,defective");
        assert_eq!(lines[2], "b,0.000100,,healthy,healthy");
    }
}
