//! JSON file formats for missions and plans.
//!
//! A mission file holds `n`, the `n x n` matrix with transmission
//! probabilities on the diagonal and crossing probabilities off it (0 for
//! "no edge"), and the information values `w`. A plan file holds `route`
//! and `send` arrays; a multi-drone plan file is an array of those.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Mission, MissionError, MultiPlan, Plan};

#[derive(Debug, Error)]
pub enum FileError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("field n = {n} does not match matrix size {rows}")]
    SizeMismatch { n: usize, rows: usize },
    #[error("send flags must be 0 or 1, found {0}")]
    SendFlag(u8),
    #[error(transparent)]
    Mission(#[from] MissionError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MissionFile {
    pub n: usize,
    pub matrix: Vec<Vec<f64>>,
    pub w: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanFile {
    pub route: Vec<usize>,
    pub send: Vec<u8>,
}

/// Either a single plan object or an array of them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PlanSet {
    Single(PlanFile),
    Multi(Vec<PlanFile>),
}

fn read(path: &Path) -> Result<String, FileError> {
    std::fs::read_to_string(path).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn write(path: &Path, text: &str) -> Result<(), FileError> {
    std::fs::write(path, text).map_err(|source| FileError::Io {
        path: path.display().to_string(),
        source,
    })
}

impl MissionFile {
    pub fn into_mission(self) -> Result<Mission, FileError> {
        if self.matrix.len() != self.n {
            return Err(FileError::SizeMismatch {
                n: self.n,
                rows: self.matrix.len(),
            });
        }
        Ok(Mission::from_matrix(&self.matrix, self.w)?)
    }
}

impl From<&Mission> for MissionFile {
    fn from(m: &Mission) -> Self {
        Self {
            n: m.n(),
            matrix: m.to_matrix(),
            w: m.weights().to_vec(),
        }
    }
}

impl Mission {
    pub fn from_json(text: &str) -> Result<Self, FileError> {
        serde_json::from_str::<MissionFile>(text)?.into_mission()
    }

    /// Serializes with one matrix row per line.
    pub fn to_json(&self) -> String {
        let file = MissionFile::from(self);
        let rows: Vec<String> = file
            .matrix
            .iter()
            .map(|row| format!("    {}", serde_json::to_string(row).expect("finite row")))
            .collect();
        format!(
            "{{\n  \"n\": {},\n  \"matrix\": [\n{}\n  ],\n  \"w\": {}\n}}\n",
            file.n,
            rows.join(",\n"),
            serde_json::to_string(&file.w).expect("finite weights")
        )
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FileError> {
        Self::from_json(&read(path.as_ref())?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), FileError> {
        write(path.as_ref(), &self.to_json())
    }
}

impl TryFrom<PlanFile> for Plan {
    type Error = FileError;

    fn try_from(file: PlanFile) -> Result<Self, FileError> {
        if let Some(&bad) = file.send.iter().find(|&&b| b > 1) {
            return Err(FileError::SendFlag(bad));
        }
        Ok(Plan::from_bits(&file.route, &file.send))
    }
}

impl From<&Plan> for PlanFile {
    fn from(plan: &Plan) -> Self {
        Self {
            route: plan.route.clone(),
            send: plan.send_bits(),
        }
    }
}

impl PlanSet {
    pub fn into_multi(self) -> Result<MultiPlan, FileError> {
        let files = match self {
            PlanSet::Single(f) => vec![f],
            PlanSet::Multi(fs) => fs,
        };
        let plans = files.into_iter().map(Plan::try_from).collect::<Result<_, _>>()?;
        Ok(MultiPlan::new(plans))
    }

    pub fn from_multi(mp: &MultiPlan) -> Self {
        match mp.plans.as_slice() {
            [single] => PlanSet::Single(single.into()),
            many => PlanSet::Multi(many.iter().map(PlanFile::from).collect()),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, FileError> {
        Ok(serde_json::from_str(&read(path.as_ref())?)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), FileError> {
        let text = serde_json::to_string_pretty(self)?;
        write(path.as_ref(), &(text + "\n"))
    }
}
