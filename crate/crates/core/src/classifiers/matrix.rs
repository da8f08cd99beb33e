use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::LEXICAL_FEATURES;
use crate::profile::PROFILE_FEATURES;

/// Named numeric features per account, with an optional 0/1 label vector
/// (0 = human, 1 = bot).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub ids: Vec<String>,
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Option<Vec<u8>>,
}

impl FeatureMatrix {
    pub fn new(
        ids: Vec<String>,
        feature_names: Vec<String>,
        rows: Vec<Vec<f64>>,
        labels: Option<Vec<u8>>,
    ) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::LengthMismatch(ids.len(), rows.len()));
        }
        let d = feature_names.len();
        for (i, row) in rows.iter().enumerate() {
            if row.len() != d {
                return Err(Error::InvalidData(format!(
                    "row {i} has {} values, expected {d}",
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidData(format!(
                    "row {i} has a non-finite value in {}",
                    feature_names[j]
                )));
            }
        }
        if let Some(labels) = &labels {
            if labels.len() != rows.len() {
                return Err(Error::LengthMismatch(labels.len(), rows.len()));
            }
            if labels.iter().any(|&l| l > 1) {
                return Err(Error::InvalidData("labels must be 0 or 1".into()));
            }
        }
        Ok(Self {
            ids,
            feature_names,
            rows,
            labels,
        })
    }

    /// Matrix without row ids; rows are numbered.
    pub fn from_rows(feature_names: Vec<String>, rows: Vec<Vec<f64>>, labels: Option<Vec<u8>>) -> Result<Self> {
        let ids = (0..rows.len()).map(|i| i.to_string()).collect();
        Self::new(ids, feature_names, rows, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Column subset in the order given; errors list every missing name.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Self> {
        let mut idx = Vec::with_capacity(names.len());
        let mut missing = Vec::new();
        for name in names {
            match self.feature_names.iter().position(|f| f == name.as_ref()) {
                Some(j) => idx.push(j),
                None => missing.push(name.as_ref().to_string()),
            }
        }
        if !missing.is_empty() {
            return Err(Error::MissingColumns(missing));
        }
        Ok(Self {
            ids: self.ids.clone(),
            feature_names: idx.iter().map(|&j| self.feature_names[j].clone()).collect(),
            rows: self.rows.iter().map(|r| idx.iter().map(|&j| r[j]).collect()).collect(),
            labels: self.labels.clone(),
        })
    }

    pub fn select_set(&self, set: FeatureSet) -> Result<Self> {
        self.select(&set.columns())
    }

    /// Rows at `indices`, in that order.
    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            ids: indices.iter().map(|&i| self.ids[i].clone()).collect(),
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: self.labels.as_ref().map(|l| indices.iter().map(|&i| l[i]).collect()),
        }
    }

    pub fn labels_required(&self) -> Result<&[u8]> {
        self.labels
            .as_deref()
            .ok_or_else(|| Error::InvalidData("matrix has no labels".into()))
    }

    /// Checks the preconditions shared by every training routine.
    pub(crate) fn validate_for_training(&self) -> Result<&[u8]> {
        if self.is_empty() {
            return Err(Error::InvalidData("empty matrix".into()));
        }
        if self.n_features() == 0 {
            return Err(Error::InvalidData("matrix has no features".into()));
        }
        let labels = self.labels_required()?;
        let bots = labels.iter().filter(|&&l| l == 1).count();
        if bots == 0 || bots == labels.len() {
            return Err(Error::InvalidData("training labels contain a single class".into()));
        }
        Ok(labels)
    }
}

/// Feature-set tags: profile metadata (F), lexical (L) and their union (FL).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FeatureSet {
    F,
    L,
    FL,
}

impl FeatureSet {
    pub fn columns(self) -> Vec<&'static str> {
        match self {
            FeatureSet::F => PROFILE_FEATURES.to_vec(),
            FeatureSet::L => LEXICAL_FEATURES.to_vec(),
            FeatureSet::FL => PROFILE_FEATURES
                .iter()
                .chain(LEXICAL_FEATURES.iter())
                .copied()
                .collect(),
        }
    }

    pub fn needs_profile(self) -> bool {
        self != FeatureSet::L
    }

    pub fn as_str(self) -> &'static str {
        match self {
            FeatureSet::F => "F",
            FeatureSet::L => "L",
            FeatureSet::FL => "FL",
        }
    }
}

impl std::str::FromStr for FeatureSet {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "F" => Ok(FeatureSet::F),
            "L" => Ok(FeatureSet::L),
            "FL" => Ok(FeatureSet::FL),
            other => Err(format!("unknown feature set {other:?} (expected F, L or FL)")),
        }
    }
}

impl std::fmt::Display for FeatureSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}
