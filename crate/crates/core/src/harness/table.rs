//! Labeled feature rows and their CSV serialization.

use std::io;

use crate::error::{Error, Result};

/// One labeled sample: a unique id, its class label, and the feature values.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub sample_id: String,
    pub label: String,
    pub features: Vec<f64>,
}

/// A dataset of feature rows with a shared column schema. Every row has the
/// same feature count and sample ids are unique.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureTable {
    feature_names: Vec<String>,
    rows: Vec<FeatureRow>,
}

impl FeatureTable {
    pub fn new(feature_names: Vec<String>, rows: Vec<FeatureRow>) -> Result<Self> {
        if feature_names.is_empty() {
            return Err(Error::invalid("feature table needs at least one feature column"));
        }
        let mut seen = std::collections::BTreeSet::new();
        for row in &rows {
            if row.features.len() != feature_names.len() {
                return Err(Error::DimensionMismatch {
                    expected: feature_names.len(),
                    got: row.features.len(),
                });
            }
            if !seen.insert(row.sample_id.as_str()) {
                return Err(Error::invalid(format!(
                    "duplicate sample id {:?}",
                    row.sample_id
                )));
            }
        }
        Ok(FeatureTable { feature_names, rows })
    }

    pub fn feature_names(&self) -> &[String] {
        &self.feature_names
    }

    pub fn feature_count(&self) -> usize {
        self.feature_names.len()
    }

    pub fn rows(&self) -> &[FeatureRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct labels in ascending order.
    pub fn labels(&self) -> Vec<String> {
        let set: std::collections::BTreeSet<&str> =
            self.rows.iter().map(|r| r.label.as_str()).collect();
        set.into_iter().map(String::from).collect()
    }

    /// New table holding the rows at `indices`, in the given order.
    pub(crate) fn subset(&self, indices: &[usize]) -> FeatureTable {
        FeatureTable {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
        }
    }

    /// Writes the table as CSV: header `sample_id,label,` plus the feature
    /// names, then one row per sample with floats at 9 significant digits.
    pub fn to_csv<W: io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["sample_id".to_string(), "label".to_string()];
        header.extend(self.feature_names.iter().cloned());
        w.write_record(&header)?;
        for row in &self.rows {
            let mut record = vec![row.sample_id.clone(), row.label.clone()];
            record.extend(row.features.iter().map(|v| format!("{v:.8e}")));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads a table previously written by `to_csv` (or any CSV with the
    /// same shape).
    pub fn from_csv<R: io::Read>(reader: R) -> Result<Self> {
        let mut r = csv::Reader::from_reader(reader);
        let header = r.headers()?.clone();
        if header.len() < 3 || &header[0] != "sample_id" || &header[1] != "label" {
            return Err(Error::invalid(
                "feature CSV must start with sample_id,label followed by feature columns",
            ));
        }
        let feature_names: Vec<String> = header.iter().skip(2).map(String::from).collect();
        let mut rows = Vec::new();
        for record in r.records() {
            let record = record?;
            let features = record
                .iter()
                .skip(2)
                .map(|cell| {
                    cell.parse::<f64>().map_err(|_| {
                        Error::invalid(format!("non-numeric feature value {cell:?}"))
                    })
                })
                .collect::<Result<Vec<f64>>>()?;
            rows.push(FeatureRow {
                sample_id: record[0].to_string(),
                label: record[1].to_string(),
                features,
            });
        }
        FeatureTable::new(feature_names, rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn small_table() -> FeatureTable {
        FeatureTable::new(
            vec!["f0".into(), "f1".into()],
            vec![
                FeatureRow {
                    sample_id: "a/one".into(),
                    label: "a".into(),
                    features: vec![0.7213475204444817, -3.0],
                },
                FeatureRow {
                    sample_id: "b/two".into(),
                    label: "b".into(),
                    features: vec![16.0, 0.0],
                },
            ],
        )
        .unwrap()
    }

    #[test]
    fn rejects_ragged_rows_and_duplicate_ids() {
        let bad = FeatureTable::new(
            vec!["f0".into()],
            vec![FeatureRow {
                sample_id: "x".into(),
                label: "a".into(),
                features: vec![1.0, 2.0],
            }],
        );
        assert!(bad.is_err());

        let dup = FeatureTable::new(
            vec!["f0".into()],
            vec![
                FeatureRow { sample_id: "x".into(), label: "a".into(), features: vec![1.0] },
                FeatureRow { sample_id: "x".into(), label: "b".into(), features: vec![2.0] },
            ],
        );
        assert!(dup.is_err());
    }

    #[test]
    fn csv_round_trip() {
        let table = small_table();
        let mut buf = Vec::new();
        table.to_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("sample_id,label,f0,f1"));
        assert_eq!(lines.next(), Some("a/one,a,7.21347520e-1,-3.00000000e0"));
        assert_eq!(lines.next(), Some("b/two,b,1.60000000e1,0.00000000e0"));

        let back = FeatureTable::from_csv(buf.as_slice()).unwrap();
        assert_eq!(back.feature_names(), table.feature_names());
        assert_eq!(back.len(), 2);
        assert_eq!(back.rows()[0].sample_id, "a/one");
        assert!((back.rows()[0].features[0] - 0.7213475204444817).abs() < 1e-8);
        assert_eq!(back.rows()[1].features[0], 16.0);
    }

    #[test]
    fn from_csv_rejects_malformed_input() {
        assert!(FeatureTable::from_csv("id,label,f0\nx,a,1.0".as_bytes()).is_err());
        assert!(FeatureTable::from_csv("sample_id,label\nx,a".as_bytes()).is_err());
        assert!(
            FeatureTable::from_csv("sample_id,label,f0\nx,a,not_a_number".as_bytes()).is_err()
        );
    }

    #[test]
    fn labels_are_sorted_and_unique() {
        let mut rows = Vec::new();
        for (i, label) in ["zebra", "ant", "ant", "moss"].iter().enumerate() {
            rows.push(FeatureRow {
                sample_id: format!("s{i}"),
                label: label.to_string(),
                features: vec![i as f64],
            });
        }
        let table = FeatureTable::new(vec!["f0".into()], rows).unwrap();
        assert_eq!(table.labels(), vec!["ant", "moss", "zebra"]);
    }
}
