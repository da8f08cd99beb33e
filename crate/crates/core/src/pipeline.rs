//! Corpus to feature matrix, and the per-label averages behind the bar charts.

use std::fmt::Write as _;

use chrono::{DateTime, Utc};
use rayon::prelude::*;
use serde::Serialize;

use crate::classifiers::{FeatureMatrix, FeatureSet};
use crate::dataset::{AccountRecord, FeatureRow, Label};
use crate::error::{Error, Result};
use crate::features::{account_features, LEXICAL_FEATURES};
use crate::lexicon::Lexicons;
use crate::profile::{profile_features, PROFILE_FIELDS};

/// Whether profile columns are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ProfileMode {
    Skip,
    /// Computed when every account has metadata, skipped otherwise.
    IfPresent,
    /// Every account must carry metadata.
    Required,
}

/// Latest timestamp in the corpus, tweet or account creation. Used as the
/// default reference time for account age so that outputs never depend on
/// the wall clock.
pub fn corpus_reference_time(records: &[AccountRecord]) -> Option<DateTime<Utc>> {
    records
        .iter()
        .flat_map(|r| {
            r.tweets
                .iter()
                .filter_map(|t| t.created_at)
                .chain(r.profile.as_ref().map(|p| p.created_at))
        })
        .max()
}

fn check_profiles(records: &[AccountRecord]) -> Result<()> {
    let missing: Vec<String> = records
        .iter()
        .filter(|r| r.profile.is_none())
        .map(|r| r.account_id.clone())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::MissingProfile {
            fields: PROFILE_FIELDS.iter().map(|s| s.to_string()).collect(),
            accounts: missing,
        })
    }
}

/// One row per account, in corpus order. Accounts are processed in parallel.
pub fn feature_rows(
    records: &[AccountRecord],
    lexicons: &Lexicons,
    mode: ProfileMode,
    now: Option<DateTime<Utc>>,
) -> Result<Vec<FeatureRow>> {
    let with_profile = match mode {
        ProfileMode::Skip => false,
        ProfileMode::IfPresent => !records.is_empty() && records.iter().all(|r| r.profile.is_some()),
        ProfileMode::Required => {
            check_profiles(records)?;
            true
        }
    };
    let now = now.or_else(|| corpus_reference_time(records));
    records
        .par_iter()
        .map(|r| {
            let profile = match (&r.profile, with_profile) {
                (Some(meta), true) => {
                    let now = now.expect("a corpus with profiles has a reference time");
                    Some(profile_features(meta, &r.tweets, now)?)
                }
                _ => None,
            };
            Ok(FeatureRow {
                label: r.label,
                lexical: account_features(r, lexicons)?,
                profile,
            })
        })
        .collect()
}

/// Feature matrix restricted to `set`. Profile metadata is required for F
/// and FL.
pub fn feature_matrix(
    records: &[AccountRecord],
    lexicons: &Lexicons,
    set: FeatureSet,
    now: Option<DateTime<Utc>>,
) -> Result<FeatureMatrix> {
    let mode = if set.needs_profile() {
        ProfileMode::Required
    } else {
        ProfileMode::Skip
    };
    let rows = feature_rows(records, lexicons, mode, now)?;
    crate::dataset::feature_csv::rows_to_matrix(&rows)?.select_set(set)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LabelAverages {
    pub label: Label,
    pub n_accounts: usize,
    /// Means in [`LEXICAL_FEATURES`] order.
    pub means: Vec<f64>,
}

/// Mean of each lexical feature per label, human first.
pub fn label_averages(matrix: &FeatureMatrix) -> Result<Vec<LabelAverages>> {
    let labels = matrix.labels_required()?;
    let lexical = matrix.select(&LEXICAL_FEATURES)?;
    let mut out = Vec::new();
    for label in [Label::Human, Label::Bot] {
        let rows: Vec<&Vec<f64>> = lexical
            .rows
            .iter()
            .zip(labels)
            .filter(|(_, &l)| l == label.as_class())
            .map(|(r, _)| r)
            .collect();
        if rows.is_empty() {
            continue;
        }
        let means = (0..LEXICAL_FEATURES.len())
            .map(|j| rows.iter().map(|r| r[j]).sum::<f64>() / rows.len() as f64)
            .collect();
        out.push(LabelAverages {
            label,
            n_accounts: rows.len(),
            means,
        });
    }
    Ok(out)
}

pub fn label_averages_csv(averages: &[LabelAverages]) -> String {
    let mut out = format!("label,n_accounts,{}\n", LEXICAL_FEATURES.join(","));
    for a in averages {
        let _ = write!(out, "{},{}", a.label.as_str(), a.n_accounts);
        for m in &a.means {
            let _ = write!(out, ",{m:.6}");
        }
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Tweet;
    use crate::profile::ProfileMetadata;
    use chrono::TimeZone;

    fn record(id: &str, label: Label, text: &str, profile: bool) -> AccountRecord {
        AccountRecord {
            account_id: id.into(),
            label: Some(label),
            tweets: vec![Tweet {
                text: text.into(),
                created_at: Some(Utc.with_ymd_and_hms(2019, 3, 1, 0, 0, 0).unwrap()),
                ..Default::default()
            }],
            profile: profile.then(|| ProfileMetadata {
                created_at: Utc.with_ymd_and_hms(2019, 1, 1, 0, 0, 0).unwrap(),
                followers_count: 10,
                friends_count: 5,
                favourites_count: 2,
                listed_count: 0,
                statuses_count: 100,
            }),
            ..Default::default()
        }
    }

    #[test]
    fn f_set_requires_profiles() {
        let lex = Lexicons::bundled();
        let corpus = vec![
            record("a", Label::Bot, "hi :)", true),
            record("b", Label::Human, "hey", false),
        ];
        match feature_matrix(&corpus, &lex, FeatureSet::F, None) {
            Err(Error::MissingProfile { fields, accounts }) => {
                assert_eq!(accounts, vec!["b"]);
                assert!(fields.contains(&"followers_count".to_string()));
            }
            other => panic!("{other:?}"),
        }
        let l = feature_matrix(&corpus, &lex, FeatureSet::L, None).unwrap();
        assert_eq!(l.n_features(), 4);
    }

    #[test]
    fn fl_columns_and_age() {
        let lex = Lexicons::bundled();
        let corpus = vec![
            record("a", Label::Bot, "hi :)", true),
            record("b", Label::Human, "hey", true),
        ];
        let m = feature_matrix(&corpus, &lex, FeatureSet::FL, None).unwrap();
        assert_eq!(m.n_features(), 14);
        // reference time is the latest tweet, 59 days after creation
        assert_eq!(m.rows[0][0], 59.0);
        let rows = feature_rows(&corpus, &lex, ProfileMode::IfPresent, None).unwrap();
        assert!(rows.iter().all(|r| r.profile.is_some()));
    }

    #[test]
    fn averages_by_label() {
        let m = FeatureMatrix::from_rows(
            LEXICAL_FEATURES.iter().map(|s| s.to_string()).collect(),
            vec![
                vec![1.0, 0.5, 0.0, 1.0],
                vec![0.5, 0.5, 2.0, 0.0],
                vec![0.0, 0.5, 1.0, 0.0],
            ],
            Some(vec![1, 0, 0]),
        )
        .unwrap();
        let avg = label_averages(&m).unwrap();
        assert_eq!(avg[0].label, Label::Human);
        assert_eq!(avg[0].means, vec![0.25, 0.5, 1.5, 0.0]);
        assert_eq!(avg[1].n_accounts, 1);
        assert_eq!(
            label_averages_csv(&avg),
            "label,n_accounts,avg_ttr,avg_lexical_diversity,avg_contraction,avg_emoticons\n\
             human,2,0.250000,0.500000,1.500000,0.000000\n\
             bot,1,1.000000,0.500000,0.000000,1.000000\n"
        );
    }
}
