//! Input formats, selectable by name.

use crate::error::Result;
use crate::matrix_io::{points_to_dissimilarity, votes_to_dissimilarity, DissimilarityMatrix, PointSet, VoteMatrix};
use crate::registry::Registry;

/// A loaded problem: the dissimilarity matrix, plus the object vectors when
/// the input had them.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub dissimilarity: DissimilarityMatrix,
    pub vectors: Option<Vec<Vec<f64>>>,
}

impl Dataset {
    pub fn from_votes(votes: &VoteMatrix) -> Self {
        Self {
            dissimilarity: votes_to_dissimilarity(votes),
            vectors: Some(votes.to_vectors()),
        }
    }

    pub fn from_points(points: &PointSet) -> Result<Self> {
        Ok(Self {
            dissimilarity: points_to_dissimilarity(points)?,
            vectors: Some(points.points().to_vec()),
        })
    }

    pub fn from_dissimilarity(dissimilarity: DissimilarityMatrix) -> Self {
        Self { dissimilarity, vectors: None }
    }

    pub fn len(&self) -> usize {
        self.dissimilarity.size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct FormatOptions {
    /// Skip the first line of vote files.
    pub header: bool,
}

pub trait InputFormat: Send + Sync {
    fn name(&self) -> &'static str;
    fn parse(&self, text: &str) -> Result<Dataset>;
}

struct DissimilarityCsv;

impl InputFormat for DissimilarityCsv {
    fn name(&self) -> &'static str {
        "dissimilarity"
    }

    fn parse(&self, text: &str) -> Result<Dataset> {
        Ok(Dataset::from_dissimilarity(DissimilarityMatrix::parse_csv(text)?))
    }
}

struct VotesCsv {
    header: bool,
}

impl InputFormat for VotesCsv {
    fn name(&self) -> &'static str {
        "votes"
    }

    fn parse(&self, text: &str) -> Result<Dataset> {
        Ok(Dataset::from_votes(&VoteMatrix::parse_csv(text, self.header)?))
    }
}

struct PointsCsv;

impl InputFormat for PointsCsv {
    fn name(&self) -> &'static str {
        "points"
    }

    fn parse(&self, text: &str) -> Result<Dataset> {
        Dataset::from_points(&PointSet::parse_csv(text)?)
    }
}

pub fn input_formats() -> Registry<dyn InputFormat, FormatOptions> {
    let mut reg: Registry<dyn InputFormat, FormatOptions> = Registry::new("input format");
    reg.register("dissimilarity", |_| Ok(Box::new(DissimilarityCsv)))
        .register("votes", |o| Ok(Box::new(VotesCsv { header: o.header })))
        .register("points", |_| Ok(Box::new(PointsCsv)));
    reg
}
