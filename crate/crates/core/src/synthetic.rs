//! Seeded synthetic datasets with planted ground-truth labels.
//!
//! Shapes are selected by a spec string `name` or `name:p1,p2,...`; omitted
//! trailing parameters take their defaults.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{invalid, Result};
use crate::input::Dataset;
use crate::matrix_io::{PointSet, VoteMatrix};
use crate::registry::Registry;

#[derive(Debug, Clone, PartialEq)]
pub enum SyntheticData {
    Points(PointSet),
    Votes(VoteMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthetic {
    pub data: SyntheticData,
    pub labels: Vec<usize>,
}

impl Synthetic {
    pub fn to_dataset(&self) -> Result<Dataset> {
        match &self.data {
            SyntheticData::Points(p) => Dataset::from_points(p),
            SyntheticData::Votes(v) => Ok(Dataset::from_votes(v)),
        }
    }
}

pub trait ShapeGenerator: Send + Sync {
    fn name(&self) -> &'static str;
    fn generate(&self, seed: u64) -> Result<Synthetic>;
}

/// Registry of the built-in shapes, keyed by name; factories take the
/// numeric parameters of the spec string.
pub fn generators() -> Registry<dyn ShapeGenerator, [f64]> {
    let mut reg: Registry<dyn ShapeGenerator, [f64]> = Registry::new("shape");
    reg.register("two-blobs", |p| Ok(Box::new(TwoBlobs::from_params(p)?)))
        .register("blob-plus-ring", |p| Ok(Box::new(BlobPlusRing::from_params(p)?)))
        .register("two-rings-plus-blob", |p| Ok(Box::new(TwoRingsPlusBlob::from_params(p)?)))
        .register("planted-votes", |p| Ok(Box::new(PlantedVotes::from_params(p)?)));
    reg
}

/// Parses `name[:p1,p2,...]` and builds the generator.
pub fn parse_shape(spec: &str) -> Result<Box<dyn ShapeGenerator>> {
    let (name, params) = match spec.split_once(':') {
        Some((name, rest)) => {
            let params = rest
                .split(',')
                .filter(|t| !t.trim().is_empty())
                .map(|t| {
                    t.trim()
                        .parse::<f64>()
                        .map_err(|_| invalid(format!("shape parameter `{t}` is not a number")))
                })
                .collect::<Result<Vec<f64>>>()?;
            (name.trim(), params)
        }
        None => (spec.trim(), Vec::new()),
    };
    generators().create(name, &params)
}

fn param(params: &[f64], i: usize, default: f64) -> f64 {
    params.get(i).copied().unwrap_or(default)
}

fn count(params: &[f64], i: usize, default: usize, what: &str) -> Result<usize> {
    let v = param(params, i, default as f64);
    if v < 1.0 || v.fract() != 0.0 {
        return Err(invalid(format!("{what} must be a positive integer, got {v}")));
    }
    Ok(v as usize)
}

fn check_arity(name: &str, params: &[f64], max: usize) -> Result<()> {
    if params.len() > max {
        return Err(invalid(format!("{name} takes at most {max} parameters")));
    }
    Ok(())
}

fn gaussian_blob(rng: &mut ChaCha8Rng, n: usize, center: (f64, f64), sigma: f64, out: &mut Vec<Vec<f64>>) {
    let normal = Normal::new(0.0, sigma).expect("positive sigma");
    for _ in 0..n {
        out.push(vec![center.0 + normal.sample(rng), center.1 + normal.sample(rng)]);
    }
}

/// Evenly spaced points around a circle with small angular and radial jitter.
fn ring(rng: &mut ChaCha8Rng, n: usize, radius: f64, out: &mut Vec<Vec<f64>>) {
    let step = 2.0 * PI / n as f64;
    for i in 0..n {
        let theta = step * (i as f64 + rng.random_range(-0.2..0.2));
        let r = radius * (1.0 + rng.random_range(-0.01..0.01));
        out.push(vec![r * theta.cos(), r * theta.sin()]);
    }
}

/// Sunflower-packed disk: uniformly dense and well connected.
fn disk(rng: &mut ChaCha8Rng, n: usize, center: (f64, f64), radius: f64, out: &mut Vec<Vec<f64>>) {
    let golden = PI * (3.0 - 5f64.sqrt());
    for i in 0..n {
        let r = radius * ((i as f64 + 0.5) / n as f64).sqrt();
        let theta = golden * i as f64 + rng.random_range(-0.05..0.05);
        out.push(vec![center.0 + r * theta.cos(), center.1 + r * theta.sin()]);
    }
}

fn labelled(sizes: &[usize]) -> Vec<usize> {
    sizes.iter().enumerate().flat_map(|(label, &s)| std::iter::repeat_n(label, s)).collect()
}

/// Two unit-variance Gaussian blobs `separation` apart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoBlobs {
    pub first: usize,
    pub second: usize,
    pub separation: f64,
}

impl TwoBlobs {
    pub fn from_params(p: &[f64]) -> Result<Self> {
        check_arity("two-blobs", p, 3)?;
        let separation = param(p, 2, 20.0);
        if separation.is_nan() || separation < 0.0 {
            return Err(invalid("separation must be nonnegative"));
        }
        Ok(Self {
            first: count(p, 0, 50, "first blob size")?,
            second: count(p, 1, 50, "second blob size")?,
            separation,
        })
    }
}

impl ShapeGenerator for TwoBlobs {
    fn name(&self) -> &'static str {
        "two-blobs"
    }

    fn generate(&self, seed: u64) -> Result<Synthetic> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        gaussian_blob(&mut rng, self.first, (0.0, 0.0), 1.0, &mut pts);
        gaussian_blob(&mut rng, self.second, (self.separation, 0.0), 1.0, &mut pts);
        Ok(Synthetic {
            data: SyntheticData::Points(PointSet::new(pts)?),
            labels: labelled(&[self.first, self.second]),
        })
    }
}

/// A Gaussian blob surrounded by a ring.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlobPlusRing {
    pub blob: usize,
    pub ring: usize,
    pub radius: f64,
}

impl BlobPlusRing {
    pub fn from_params(p: &[f64]) -> Result<Self> {
        check_arity("blob-plus-ring", p, 3)?;
        let radius = param(p, 2, 8.0);
        if radius.is_nan() || radius <= 0.0 {
            return Err(invalid("ring radius must be positive"));
        }
        Ok(Self {
            blob: count(p, 0, 60, "blob size")?,
            ring: count(p, 1, 120, "ring size")?,
            radius,
        })
    }
}

impl ShapeGenerator for BlobPlusRing {
    fn name(&self) -> &'static str {
        "blob-plus-ring"
    }

    fn generate(&self, seed: u64) -> Result<Synthetic> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        gaussian_blob(&mut rng, self.blob, (0.0, 0.0), 1.0, &mut pts);
        ring(&mut rng, self.ring, self.radius, &mut pts);
        Ok(Synthetic {
            data: SyntheticData::Points(PointSet::new(pts)?),
            labels: labelled(&[self.blob, self.ring]),
        })
    }
}

/// Two concentric rings (radii 10 and 5) and a small dense disk, centered
/// at `(offset, 0)`. Objects are numbered disk first, then outer ring, then
/// inner ring; labels follow the same order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoRingsPlusBlob {
    pub outer: usize,
    pub inner: usize,
    pub blob: usize,
    pub offset: f64,
}

impl TwoRingsPlusBlob {
    pub const OUTER_RADIUS: f64 = 10.0;
    pub const INNER_RADIUS: f64 = 5.0;
    pub const BLOB_RADIUS: f64 = 1.2;

    pub fn from_params(p: &[f64]) -> Result<Self> {
        check_arity("two-rings-plus-blob", p, 4)?;
        let offset = param(p, 3, 0.0);
        if offset.abs() > Self::INNER_RADIUS - 2.0 * Self::BLOB_RADIUS {
            return Err(invalid("blob offset would make the disk touch the inner ring"));
        }
        Ok(Self {
            outer: count(p, 0, 104, "outer ring size")?,
            inner: count(p, 1, 66, "inner ring size")?,
            blob: count(p, 2, 30, "blob size")?,
            offset,
        })
    }
}

impl ShapeGenerator for TwoRingsPlusBlob {
    fn name(&self) -> &'static str {
        "two-rings-plus-blob"
    }

    fn generate(&self, seed: u64) -> Result<Synthetic> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut pts = Vec::new();
        disk(&mut rng, self.blob, (self.offset, 0.0), Self::BLOB_RADIUS, &mut pts);
        ring(&mut rng, self.outer, Self::OUTER_RADIUS, &mut pts);
        ring(&mut rng, self.inner, Self::INNER_RADIUS, &mut pts);
        Ok(Synthetic {
            data: SyntheticData::Points(PointSet::new(pts)?),
            labels: labelled(&[self.blob, self.outer, self.inner]),
        })
    }
}

/// Roll-call votes of `factions` blocs. Each bloc has a random line (mostly
/// for/against, some abstentions); each deputy follows it except that every
/// vote is replaced, with probability `noise`, by a different random value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlantedVotes {
    pub deputies: usize,
    pub votes: usize,
    pub factions: usize,
    pub noise: f64,
}

impl PlantedVotes {
    pub fn from_params(p: &[f64]) -> Result<Self> {
        check_arity("planted-votes", p, 4)?;
        let noise = param(p, 3, 0.05);
        if !(0.0..=1.0).contains(&noise) {
            return Err(invalid("noise must lie in [0, 1]"));
        }
        let s = Self {
            deputies: count(p, 0, 450, "deputy count")?,
            votes: count(p, 1, 250, "vote count")?,
            factions: count(p, 2, 4, "faction count")?,
            noise,
        };
        if s.factions > s.deputies || s.deputies < 2 {
            return Err(invalid("need at least 2 deputies and no more factions than deputies"));
        }
        Ok(s)
    }
}

impl ShapeGenerator for PlantedVotes {
    fn name(&self) -> &'static str {
        "planted-votes"
    }

    fn generate(&self, seed: u64) -> Result<Synthetic> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let lines: Vec<Vec<i8>> = (0..self.factions)
            .map(|_| {
                (0..self.votes)
                    .map(|_| match rng.random_range(0..10) {
                        0 => 0,
                        x if x % 2 == 1 => 1,
                        _ => -1,
                    })
                    .collect()
            })
            .collect();
        let sizes: Vec<usize> = (0..self.factions)
            .map(|f| self.deputies / self.factions + usize::from(f < self.deputies % self.factions))
            .collect();
        let labels = labelled(&sizes);
        let rows: Vec<Vec<i8>> = labels
            .iter()
            .map(|&f| {
                lines[f]
                    .iter()
                    .map(|&v| {
                        if self.noise > 0.0 && rng.random_bool(self.noise) {
                            let others: Vec<i8> = [-1, 0, 1].into_iter().filter(|&o| o != v).collect();
                            others[rng.random_range(0..2)]
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(Synthetic {
            data: SyntheticData::Votes(VoteMatrix::from_rows(&rows)?),
            labels,
        })
    }
}
