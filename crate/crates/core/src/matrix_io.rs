//! Input carriers (votes, points, dissimilarities) and their CSV/JSON forms.
//!
//! Every constructor validates its invariants, so a value of any of these
//! types is known-good once it exists.

use std::fs;
use std::path::Path;

use crate::classification::Classification;
use crate::error::{invalid, Error, Result};

/// Symmetric, nonnegative, zero-diagonal distance matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DissimilarityMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl DissimilarityMatrix {
    /// Builds a matrix from row-major entries, enforcing symmetry, a zero
    /// diagonal and nonnegativity. Triangle inequality is not required.
    pub fn from_row_major(size: usize, entries: Vec<f64>) -> Result<Self> {
        if entries.len() != size * size {
            return Err(invalid(format!(
                "expected {} entries for a {size}x{size} matrix, got {}",
                size * size,
                entries.len()
            )));
        }
        for i in 0..size {
            for j in 0..size {
                let v = entries[i * size + j];
                if !v.is_finite() || v < 0.0 {
                    return Err(invalid(format!("entry ({i},{j}) = {v} is not a finite nonnegative value")));
                }
                if i == j && v != 0.0 {
                    return Err(invalid(format!("diagonal entry ({i},{i}) = {v} is not zero")));
                }
                if j > i && v != entries[j * size + i] {
                    return Err(invalid(format!(
                        "matrix is not symmetric at ({i},{j}): {v} vs {}",
                        entries[j * size + i]
                    )));
                }
            }
        }
        Ok(Self { size, entries })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let size = rows.len();
        if let Some((i, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != size) {
            return Err(invalid(format!("row {i} has {} entries, expected {size}", row.len())));
        }
        Self::from_row_major(size, rows.concat())
    }

    /// Internal constructor for matrices that are symmetric by construction.
    fn from_fn(size: usize, mut dist: impl FnMut(usize, usize) -> f64) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            for j in (i + 1)..size {
                let d = dist(i, j);
                entries[i * size + j] = d;
                entries[j * size + i] = d;
            }
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.size {
            push_row(&mut out, self.row(i).iter());
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = parse_real_rows(text)?;
        let size = rows.len();
        for (line, row) in &rows_with_lines(text) {
            if row.len() != size {
                return Err(Error::Parse {
                    line: *line,
                    message: format!("expected {size} columns, found {}", row.len()),
                });
            }
        }
        Self::from_rows(&rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_csv(&fs::read_to_string(path)?)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Roll-call matrix: one row per deputy, one column per vote, entries in {-1, 0, 1}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoteMatrix {
    deputies: usize,
    votes: usize,
    entries: Vec<i8>,
}

impl VoteMatrix {
    pub fn from_rows(rows: &[Vec<i8>]) -> Result<Self> {
        let deputies = rows.len();
        if deputies < 2 {
            return Err(invalid("a vote matrix needs at least 2 deputies"));
        }
        let votes = rows[0].len();
        if votes == 0 {
            return Err(invalid("a vote matrix needs at least 1 vote"));
        }
        let mut entries = Vec::with_capacity(deputies * votes);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != votes {
                return Err(invalid(format!("row {i} has {} votes, expected {votes}", row.len())));
            }
            for (j, &v) in row.iter().enumerate() {
                if !matches!(v, -1..=1) {
                    return Err(invalid(format!("vote ({i},{j}) = {v} is not one of -1, 0, 1")));
                }
            }
            entries.extend_from_slice(row);
        }
        Ok(Self { deputies, votes, entries })
    }

    pub fn deputies(&self) -> usize {
        self.deputies
    }

    pub fn votes(&self) -> usize {
        self.votes
    }

    pub fn row(&self, i: usize) -> &[i8] {
        &self.entries[i * self.votes..(i + 1) * self.votes]
    }

    /// Rows as real vectors, for centroid methods.
    pub fn to_vectors(&self) -> Vec<Vec<f64>> {
        (0..self.deputies)
            .map(|i| self.row(i).iter().map(|&v| f64::from(v)).collect())
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for i in 0..self.deputies {
            push_row(&mut out, self.row(i).iter());
        }
        out
    }

    /// Parses integer votes. Any token other than `-1`, `0` or `1` is rejected.
    pub fn parse_csv(text: &str, has_header: bool) -> Result<Self> {
        let mut rows = Vec::new();
        let mut lines = rows_with_lines(text).into_iter();
        if has_header {
            lines.next();
        }
        for (line, tokens) in lines {
            let row = tokens
                .iter()
                .map(|t| match *t {
                    "1" | "+1" => Ok(1),
                    "-1" => Ok(-1),
                    "0" => Ok(0),
                    other => Err(Error::Parse {
                        line,
                        message: format!("`{other}` is not a vote (-1, 0 or 1)"),
                    }),
                })
                .collect::<Result<Vec<i8>>>()?;
            if let Some(first) = rows.first().map(Vec::len) {
                if row.len() != first {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected {first} votes, found {}", row.len()),
                    });
                }
            }
            rows.push(row);
        }
        Self::from_rows(&rows)
    }

    pub fn load_csv(path: impl AsRef<Path>, has_header: bool) -> Result<Self> {
        Self::parse_csv(&fs::read_to_string(path)?, has_header)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }
}

/// Euclidean distance between deputy vote rows.
pub fn votes_to_dissimilarity(votes: &VoteMatrix) -> DissimilarityMatrix {
    DissimilarityMatrix::from_fn(votes.deputies(), |s, t| {
        let sq: i64 = votes
            .row(s)
            .iter()
            .zip(votes.row(t))
            .map(|(&a, &b)| {
                let diff = i64::from(a) - i64::from(b);
                diff * diff
            })
            .sum();
        (sq as f64).sqrt()
    })
}

/// Points of a common dimension.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    points: Vec<Vec<f64>>,
}

impl PointSet {
    pub fn new(points: Vec<Vec<f64>>) -> Result<Self> {
        let dim = points.first().map_or(0, Vec::len);
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.len() != dim) {
            return Err(invalid(format!("point {i} has dimension {}, expected {dim}", p.len())));
        }
        if points.iter().flatten().any(|c| !c.is_finite()) {
            return Err(invalid("point coordinates must be finite"));
        }
        Ok(Self { dim, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for p in &self.points {
            push_row(&mut out, p.iter());
        }
        out
    }

    pub fn parse_csv(text: &str) -> Result<Self> {
        let rows = parse_real_rows(text)?;
        if let Some(dim) = rows.first().map(Vec::len) {
            for (line, row) in rows_with_lines(text) {
                if row.len() != dim {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected {dim} coordinates, found {}", row.len()),
                    });
                }
            }
        }
        Self::new(rows)
    }

    pub fn load_csv(path: impl AsRef<Path>) -> Result<Self> {
        Self::parse_csv(&fs::read_to_string(path)?)
    }

    pub fn save_csv(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_csv())?;
        Ok(())
    }
}

pub fn points_to_dissimilarity(points: &PointSet) -> Result<DissimilarityMatrix> {
    if points.len() < 2 {
        return Err(invalid("at least 2 points are required"));
    }
    let pts = points.points();
    Ok(DissimilarityMatrix::from_fn(points.len(), |i, j| {
        pts[i]
            .iter()
            .zip(&pts[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }))
}

pub fn classifications_to_json(list: &[Classification]) -> Result<String> {
    Ok(serde_json::to_string_pretty(list)?)
}

/// Reads a JSON array of classifications; each must already be canonical.
pub fn classifications_from_json(text: &str) -> Result<Vec<Classification>> {
    let raw: Vec<Vec<Vec<usize>>> = serde_json::from_str(text)?;
    raw.into_iter()
        .map(|classes| {
            let c = Classification::from_classes(classes.clone())?;
            if c.classes() != classes.as_slice() {
                return Err(invalid(
                    "classes must be ascending and ordered by their smallest member",
                ));
            }
            Ok(c)
        })
        .collect()
}

pub fn save_classifications(path: impl AsRef<Path>, list: &[Classification]) -> Result<()> {
    fs::write(path, classifications_to_json(list)?)?;
    Ok(())
}

pub fn load_classifications(path: impl AsRef<Path>) -> Result<Vec<Classification>> {
    classifications_from_json(&fs::read_to_string(path)?)
}

/// Ground-truth labels, one per line.
pub fn labels_to_csv(labels: &[usize]) -> String {
    labels.iter().map(|l| format!("{l}\n")).collect()
}

fn push_row<T: std::fmt::Display>(out: &mut String, values: impl Iterator<Item = T>) {
    let row: Vec<String> = values.map(|v| v.to_string()).collect();
    out.push_str(&row.join(","));
    out.push('\n');
}

/// Non-blank lines split on commas, tagged with 1-based line numbers.
fn rows_with_lines(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| (i + 1, l.split(',').map(str::trim).collect()))
        .collect()
}

fn parse_real_rows(text: &str) -> Result<Vec<Vec<f64>>> {
    rows_with_lines(text)
        .into_iter()
        .map(|(line, tokens)| {
            tokens
                .into_iter()
                .map(|t| {
                    t.parse::<f64>().map_err(|_| Error::Parse {
                        line,
                        message: format!("`{t}` is not a number"),
                    })
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn votes(rows: &[&[i8]]) -> VoteMatrix {
        VoteMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn vote_distances() {
        let d = votes_to_dissimilarity(&votes(&[&[1, 1, 0], &[1, 1, 0], &[1, -1, 0]]));
        assert_eq!(d.get(0, 1), 0.0);
        assert_eq!(d.get(0, 2), 2.0);

        let d = votes_to_dissimilarity(&votes(&[&[1, 1, 1, 1], &[-1, -1, -1, -1]]));
        assert_eq!(d.get(0, 1), 4.0);
    }

    #[test]
    fn vote_entries_are_validated() {
        assert!(VoteMatrix::from_rows(&[vec![1, 2], vec![0, 0]]).is_err());
        assert!(VoteMatrix::from_rows(&[vec![1, 0]]).is_err());
        let err = VoteMatrix::parse_csv("1,0\n0,0.5\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }), "{err}");
        let err = VoteMatrix::parse_csv("1,0\nyes,0\n", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn vote_header_is_skipped_on_request() {
        let m = VoteMatrix::parse_csv("v1,v2\n1,-1\n0,1\n", true).unwrap();
        assert_eq!(m.deputies(), 2);
        assert_eq!(m.row(0), &[1, -1]);
        assert!(VoteMatrix::parse_csv("v1,v2\n1,-1\n0,1\n", false).is_err());
    }

    #[test]
    fn point_distances() {
        let p = PointSet::new(vec![vec![2.0, 2.0], vec![2.0, 2.0]]).unwrap();
        assert_eq!(points_to_dissimilarity(&p).unwrap().get(0, 1), 0.0);

        let p = PointSet::new(vec![vec![0.0, 0.0], vec![3.0, 4.0]]).unwrap();
        assert_eq!(points_to_dissimilarity(&p).unwrap().get(0, 1), 5.0);

        let p = PointSet::new(vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]]).unwrap();
        let d = points_to_dissimilarity(&p).unwrap();
        assert_eq!(d.get(0, 1), 1.0);
        assert_eq!(d.get(0, 2), 1.0);
        assert_eq!(d.get(1, 2), 2f64.sqrt());
    }

    #[test]
    fn point_dimension_mismatch() {
        assert!(PointSet::new(vec![vec![0.0, 0.0], vec![1.0]]).is_err());
        let err = PointSet::parse_csv("0,0\n1\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        assert!(points_to_dissimilarity(&PointSet::new(vec![vec![1.0]]).unwrap()).is_err());
    }

    #[test]
    fn dissimilarity_csv_invariants() {
        assert!(DissimilarityMatrix::parse_csv("0,1\n1,0\n").is_ok());
        assert!(DissimilarityMatrix::parse_csv("0,1\n2,0\n").is_err(), "asymmetric");
        assert!(DissimilarityMatrix::parse_csv("1,1\n1,0\n").is_err(), "nonzero diagonal");
        assert!(DissimilarityMatrix::parse_csv("0,-1\n-1,0\n").is_err(), "negative");
        let err = DissimilarityMatrix::parse_csv("0,1\n1,x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let err = DissimilarityMatrix::parse_csv("0,1\n1,0,3\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }

    #[test]
    fn non_metric_matrices_are_accepted() {
        // d(0,2) > d(0,1) + d(1,2)
        let d = DissimilarityMatrix::parse_csv("0,1,5\n1,0,1\n5,1,0\n").unwrap();
        assert_eq!(d.get(0, 2), 5.0);
    }

    #[test]
    fn csv_round_trips() {
        let p = PointSet::new(vec![vec![0.1, -2.5], vec![1e-9, 3.0], vec![0.3, 7.0]]).unwrap();
        let d = points_to_dissimilarity(&p).unwrap();
        assert_eq!(DissimilarityMatrix::parse_csv(&d.to_csv()).unwrap(), d);
        assert_eq!(PointSet::parse_csv(&p.to_csv()).unwrap(), p);
        let v = votes(&[&[1, -1, 0], &[0, 0, 1]]);
        assert_eq!(VoteMatrix::parse_csv(&v.to_csv(), false).unwrap(), v);
    }

    #[test]
    fn classification_json_round_trip_and_canonical_check() {
        let list = vec![
            Classification::from_labels(&[0, 1, 0, 2]),
            Classification::from_labels(&[0, 0, 0, 0]),
        ];
        let json = classifications_to_json(&list).unwrap();
        assert_eq!(classifications_from_json(&json).unwrap(), list);
        assert!(classifications_from_json("[[[1],[0]]]").is_err());
        assert!(classifications_from_json("[[[1,0]]]").is_err());
        assert!(classifications_from_json("[[[0],[0,1]]]").is_err());
    }
}
