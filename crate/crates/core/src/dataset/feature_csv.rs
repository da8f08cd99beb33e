use std::fs;
use std::path::Path;

use crate::classifiers::FeatureMatrix;
use crate::dataset::Label;
use crate::error::{Error, Result};
use crate::features::{AccountFeatureVector, LEXICAL_FEATURES};
use crate::profile::{ProfileFeatureVector, PROFILE_FEATURES};

pub const ID_COLUMN: &str = "account_id";
pub const LABEL_COLUMN: &str = "label";
const TWEETS_USED: &str = "tweets_used";

/// Count-valued columns, written without decimals.
const INTEGER_COLUMNS: [&str; 4] = [TWEETS_USED, "lists", "user_replies", "user_retweets"];

/// One account's row in the feature CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    pub label: Option<Label>,
    pub lexical: AccountFeatureVector,
    pub profile: Option<ProfileFeatureVector>,
}

impl FeatureRow {
    fn values(&self) -> Vec<f64> {
        let mut v = self.lexical.lexical_values().to_vec();
        v.push(self.lexical.tweets_used as f64);
        if let Some(p) = &self.profile {
            v.extend_from_slice(&p.values());
        }
        v
    }
}

fn lexical_header() -> Vec<String> {
    LEXICAL_FEATURES
        .iter()
        .chain(std::iter::once(&TWEETS_USED))
        .map(|s| s.to_string())
        .collect()
}

/// Builds the matrix the CSV would hold, without touching the filesystem.
pub(crate) fn rows_to_matrix(rows: &[FeatureRow]) -> Result<FeatureMatrix> {
    let with_profile = rows.first().is_some_and(|r| r.profile.is_some());
    if rows.iter().any(|r| r.profile.is_some() != with_profile) {
        return Err(Error::Csv("rows disagree on profile columns".into()));
    }
    let mut names = lexical_header();
    if with_profile {
        names.extend(PROFILE_FEATURES.iter().map(|s| s.to_string()));
    }
    let labels = collect_labels(rows.iter().map(|r| r.label))?;
    FeatureMatrix::new(
        rows.iter().map(|r| r.lexical.account_id.clone()).collect(),
        names,
        rows.iter().map(FeatureRow::values).collect(),
        labels,
    )
}

fn collect_labels(labels: impl Iterator<Item = Option<Label>>) -> Result<Option<Vec<u8>>> {
    let labels: Vec<Option<Label>> = labels.collect();
    if labels.is_empty() || labels.iter().all(Option::is_none) {
        return Ok(None);
    }
    if labels.iter().any(Option::is_none) {
        return Err(Error::Csv("label column is only partially filled".into()));
    }
    Ok(Some(labels.into_iter().map(|l| l.unwrap().as_class()).collect()))
}

/// Writes `account_id,label,avg_ttr,...,tweets_used[,profile columns]`.
pub fn write_feature_csv(rows: &[FeatureRow], path: impl AsRef<Path>) -> Result<()> {
    write_matrix_csv(&rows_to_matrix(rows)?, path)
}

pub fn write_matrix_csv(matrix: &FeatureMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, matrix_csv_string(matrix)?).map_err(|e| Error::io(path, e))
}

pub(crate) fn matrix_csv_string(matrix: &FeatureMatrix) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![ID_COLUMN.to_string(), LABEL_COLUMN.to_string()];
    header.extend(matrix.feature_names.iter().cloned());
    w.write_record(&header)?;
    let integer: Vec<bool> = matrix
        .feature_names
        .iter()
        .map(|n| INTEGER_COLUMNS.contains(&n.as_str()))
        .collect();
    for (i, row) in matrix.rows.iter().enumerate() {
        let mut record = vec![
            matrix.ids[i].clone(),
            matrix
                .labels
                .as_ref()
                .map(|l| Label::from_class(l[i]).as_str().to_string())
                .unwrap_or_default(),
        ];
        record.extend(row.iter().zip(&integer).map(
            |(v, &int)| {
                if int {
                    format!("{v:.0}")
                } else {
                    format!("{v:.6}")
                }
            },
        ));
        w.write_record(&record)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Csv(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

/// Reads a feature CSV. The id, label, lexical and `tweets_used` columns are
/// required; profile columns must be either all present or all absent.
pub fn read_feature_csv(path: impl AsRef<Path>) -> Result<FeatureMatrix> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_feature_csv(&text)
}

pub(crate) fn parse_feature_csv(text: &str) -> Result<FeatureMatrix> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(|h| h.trim().to_string()).collect();

    let mut missing: Vec<String> = [ID_COLUMN, LABEL_COLUMN]
        .into_iter()
        .map(str::to_string)
        .chain(lexical_header())
        .filter(|c| !header.contains(c))
        .collect();
    let profile_present = PROFILE_FEATURES
        .iter()
        .filter(|c| header.iter().any(|h| h == *c))
        .count();
    if profile_present > 0 && profile_present < PROFILE_FEATURES.len() {
        missing.extend(
            PROFILE_FEATURES
                .iter()
                .filter(|c| !header.iter().any(|h| h == *c))
                .map(|s| s.to_string()),
        );
    }
    if !missing.is_empty() {
        return Err(Error::MissingColumns(missing));
    }

    let id_col = header.iter().position(|h| h == ID_COLUMN).unwrap();
    let label_col = header.iter().position(|h| h == LABEL_COLUMN).unwrap();
    let feature_cols: Vec<usize> = (0..header.len()).filter(|&j| j != id_col && j != label_col).collect();
    let feature_names = feature_cols.iter().map(|&j| header[j].clone()).collect();

    let mut ids = Vec::new();
    let mut rows = Vec::new();
    let mut labels = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record?;
        if record.len() != header.len() {
            return Err(Error::MalformedLine {
                line,
                message: format!("expected {} fields, found {}", header.len(), record.len()),
            });
        }
        ids.push(record[id_col].to_string());
        let label = record[label_col].trim();
        labels.push(if label.is_empty() {
            None
        } else {
            Some(Label::parse(label).ok_or_else(|| Error::MalformedLine {
                line,
                message: format!("unknown label {label:?}"),
            })?)
        });
        let mut row = Vec::with_capacity(feature_cols.len());
        for &j in &feature_cols {
            let v: f64 = record[j].trim().parse().map_err(|_| Error::MalformedLine {
                line,
                message: format!("column {}: not a number: {:?}", header[j], &record[j]),
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    FeatureMatrix::new(ids, feature_names, rows, collect_labels(labels.into_iter())?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn row(i: usize, label: Option<Label>, profile: bool) -> FeatureRow {
        let x = i as f64;
        FeatureRow {
            label,
            lexical: AccountFeatureVector {
                account_id: format!("acc{i}"),
                avg_ttr: 1.0 / (x + 1.0),
                avg_lexical_diversity: 0.123456789,
                avg_contraction: x / 7.0,
                avg_emoticons: 0.5,
                tweets_used: i + 1,
                contraction_per_token: 0.0,
                emoticons_per_token: 0.0,
            },
            profile: profile.then(|| ProfileFeatureVector {
                age_days: 100.0 + x / 3.0,
                favourites_to_tweets: 0.25,
                lists_per_user: 2.0,
                followers_to_friends: 1.5,
                likes_per_tweet: 0.1,
                retweets_per_tweet: 0.2,
                user_replies: 3.0,
                user_retweets: 4.0,
                tweet_frequency: 9.75,
                urls_count: 0.3,
            }),
        }
    }

    #[test]
    fn ten_rows_round_trip() {
        let rows: Vec<_> = (0..10)
            .map(|i| row(i, Some(if i % 2 == 0 { Label::Bot } else { Label::Human }), true))
            .collect();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("f.csv");
        write_feature_csv(&rows, &path).unwrap();
        let m = read_feature_csv(&path).unwrap();
        assert_eq!(m.n_rows(), 10);
        assert_eq!(m.n_features(), 15);
        assert_eq!(m.labels.as_ref().unwrap()[0], 1);
        let exact = rows_to_matrix(&rows).unwrap();
        for (a, b) in m.rows.iter().flatten().zip(exact.rows.iter().flatten()) {
            assert!((a - b).abs() <= 5e-7, "{a} vs {b}");
        }
        // re-reading our own output is exact
        let path2 = dir.path().join("g.csv");
        write_matrix_csv(&m, &path2).unwrap();
        assert_eq!(fs::read(&path).unwrap(), fs::read(&path2).unwrap());
        assert_eq!(read_feature_csv(&path2).unwrap(), m);
    }

    #[test]
    fn header_and_format() {
        let text = matrix_csv_string(&rows_to_matrix(&[row(0, None, false)]).unwrap()).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "account_id,label,avg_ttr,avg_lexical_diversity,avg_contraction,avg_emoticons,tweets_used"
        );
        assert_eq!(lines.next().unwrap(), "acc0,,1.000000,0.123457,0.000000,0.500000,1");
    }

    #[test]
    fn missing_column_is_named() {
        let text = "account_id,label,avg_ttr,avg_contraction,avg_emoticons,tweets_used\na,bot,1,0,0,1\n";
        match parse_feature_csv(text) {
            Err(Error::MissingColumns(cols)) => assert_eq!(cols, vec!["avg_lexical_diversity"]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn partial_profile_columns() {
        let text =
            "account_id,label,avg_ttr,avg_lexical_diversity,avg_contraction,avg_emoticons,tweets_used,age_days\n";
        match parse_feature_csv(text) {
            Err(Error::MissingColumns(cols)) => assert_eq!(cols.len(), 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn empty_list_is_header_only() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("e.csv");
        write_feature_csv(&[], &path).unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap().lines().count(), 1);
        let m = read_feature_csv(&path).unwrap();
        assert_eq!(m.n_rows(), 0);
        assert_eq!(m.n_features(), 5);
    }

    #[test]
    fn mixed_profile_rows_rejected() {
        assert!(rows_to_matrix(&[row(0, None, true), row(1, None, false)]).is_err());
    }

    #[test]
    fn bad_number_reports_line() {
        let text = "account_id,label,avg_ttr,avg_lexical_diversity,avg_contraction,avg_emoticons,tweets_used\na,bot,1,0,x,0,1\n";
        assert!(matches!(
            parse_feature_csv(text),
            Err(Error::MalformedLine { line: 2, .. })
        ));
    }

    proptest! {
        #[test]
        fn own_output_is_a_fixed_point(values in prop::collection::vec(0.0f64..1000.0, 1..40)) {
            let rows: Vec<Vec<f64>> = values.iter().map(|v| vec![*v, v / 3.0, v * 7.0, 1.0 / (v + 1.0), v.floor()]).collect();
            let names = lexical_header();
            let m = FeatureMatrix::from_rows(names, rows, None).unwrap();
            let once = parse_feature_csv(&matrix_csv_string(&m).unwrap()).unwrap();
            let twice = parse_feature_csv(&matrix_csv_string(&once).unwrap()).unwrap();
            prop_assert_eq!(once, twice);
        }
    }
}
