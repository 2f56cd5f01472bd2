//! Square-grid geometry and placement ensembles.
//!
//! Outage metrics are averaged over random tag placements on an M×M grid
//! with resolution Δ; the reader (and, for multistatic networks, the carrier
//! emitters) sit at fixed canonical positions and tags are drawn uniformly
//! without replacement from the remaining admissible grid points.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type Point = [f64; 2];

pub fn distance(a: Point, b: Point) -> f64 {
    let dx = a[0] - b[0];
    let dy = a[1] - b[1];
    (dx * dx + dy * dy).sqrt()
}

/// An M×M square grid with resolution Δ dividing M; (K+1)² candidate points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub side: f64,
    pub resolution: f64,
    /// K = M/Δ.
    pub cells: usize,
}

impl Grid {
    pub fn new(side: f64, resolution: f64) -> Result<Self> {
        if !(side > 0.0) || !(resolution > 0.0) {
            return Err(Error::config(
                "grid side and resolution must be positive".to_string(),
            ));
        }
        let ratio = side / resolution;
        let cells = ratio.round();
        if (ratio - cells).abs() > 1e-9 * ratio.max(1.0) {
            return Err(Error::config(format!(
                "grid resolution {resolution} does not divide side {side}"
            )));
        }
        Ok(Self {
            side,
            resolution,
            cells: cells as usize,
        })
    }

    pub fn n_points(&self) -> usize {
        (self.cells + 1) * (self.cells + 1)
    }

    /// All grid points in lexicographic order.
    pub fn points(&self) -> Vec<Point> {
        let k = self.cells;
        let mut pts = Vec::with_capacity(self.n_points());
        for i in 0..=k {
            for j in 0..=k {
                pts.push([i as f64 * self.resolution, j as f64 * self.resolution]);
            }
        }
        pts
    }

    /// Whether (K+1)² can host N tags plus L emitters plus the reader.
    pub fn can_host(&self, n_tags: usize, n_emitters: usize) -> bool {
        self.n_points() >= n_tags + n_emitters + 1
    }
}

/// Monostatic networks have no separate emitters; multistatic ones have L.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Layout {
    Monostatic,
    Multistatic { emitters: usize },
}

impl Layout {
    pub fn n_emitters(&self) -> usize {
        match self {
            Layout::Monostatic => 0,
            Layout::Multistatic { emitters } => *emitters,
        }
    }
}

/// Reader, emitter, and tag positions plus the per-link path-loss exponents.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub reader: Point,
    pub emitters: Vec<Point>,
    pub tags: Vec<Point>,
    /// ν for each CE→tag link, indexed [emitter][tag].
    pub ple_ce_tag: Vec<Vec<f64>>,
    /// ν for each tag→reader link.
    pub ple_tag_reader: Vec<f64>,
}

impl Topology {
    /// Uniform path-loss exponent everywhere (scenario laws overwrite this).
    pub fn with_uniform_exponent(
        reader: Point,
        emitters: Vec<Point>,
        tags: Vec<Point>,
        exponent: f64,
    ) -> Self {
        let l = emitters.len();
        let n = tags.len();
        Topology {
            reader,
            emitters,
            tags,
            ple_ce_tag: vec![vec![exponent; n]; l],
            ple_tag_reader: vec![exponent; n],
        }
    }

    pub fn n_tags(&self) -> usize {
        self.tags.len()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("topology serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::config(format!("topology JSON: {e}")))
    }
}

/// All pairwise link distances of a topology.
#[derive(Debug, Clone, PartialEq)]
pub struct Distances {
    /// d(CE_l, T_n), indexed [emitter][tag].
    pub ce_tag: Vec<Vec<f64>>,
    /// d(T_n, reader).
    pub tag_reader: Vec<f64>,
    /// d(CE_l, reader).
    pub ce_reader: Vec<f64>,
}

pub fn link_distances(topology: &Topology) -> Distances {
    let ce_tag = topology
        .emitters
        .iter()
        .map(|&ce| topology.tags.iter().map(|&t| distance(ce, t)).collect())
        .collect();
    let tag_reader = topology
        .tags
        .iter()
        .map(|&t| distance(t, topology.reader))
        .collect();
    let ce_reader = topology
        .emitters
        .iter()
        .map(|&ce| distance(ce, topology.reader))
        .collect();
    Distances {
        ce_tag,
        tag_reader,
        ce_reader,
    }
}

/// Canonical anchor positions: reader at the grid center; for multistatic
/// networks the L = 4 emitters sit at the four quarter points.
pub fn canonical_anchors(grid: &Grid, layout: Layout) -> Result<(Point, Vec<Point>)> {
    let m = grid.side;
    let on_grid = |p: Point| -> Result<Point> {
        for c in p {
            let ratio = c / grid.resolution;
            if (ratio - ratio.round()).abs() > 1e-9 * ratio.max(1.0) {
                return Err(Error::config(format!(
                    "canonical position {p:?} is not a grid point at resolution {}",
                    grid.resolution
                )));
            }
        }
        Ok(p)
    };
    let reader = on_grid([m / 2.0, m / 2.0])?;
    let emitters = match layout {
        Layout::Monostatic => Vec::new(),
        Layout::Multistatic { emitters } => {
            if emitters != 4 {
                return Err(Error::config(format!(
                    "canonical multistatic layout defines 4 emitter positions, requested {emitters}"
                )));
            }
            vec![
                on_grid([m / 4.0, m / 4.0])?,
                on_grid([3.0 * m / 4.0, m / 4.0])?,
                on_grid([3.0 * m / 4.0, 3.0 * m / 4.0])?,
                on_grid([m / 4.0, 3.0 * m / 4.0])?,
            ]
        }
    };
    Ok((reader, emitters))
}

/// Grid points a tag may occupy: everything except the anchors themselves
/// and, when `min_distance > 0`, points closer than that to the reader or
/// any emitter (keeps the path-loss model inside its reference distance).
pub fn admissible_points(
    grid: &Grid,
    reader: Point,
    emitters: &[Point],
    min_distance: f64,
) -> Vec<Point> {
    grid.points()
        .into_iter()
        .filter(|&p| {
            let d_reader = distance(p, reader);
            if d_reader < 1e-12 || d_reader < min_distance {
                return false;
            }
            emitters.iter().all(|&ce| {
                let d = distance(p, ce);
                d >= 1e-12 && d >= min_distance
            })
        })
        .collect()
}

/// Draw a topology with canonical anchors and `n_tags` tags placed uniformly
/// without replacement over the admissible points.
pub fn sample_topology<R: Rng + ?Sized>(
    grid: &Grid,
    n_tags: usize,
    layout: Layout,
    min_distance: f64,
    rng: &mut R,
) -> Result<Topology> {
    let (reader, emitters) = canonical_anchors(grid, layout)?;
    sample_topology_with_anchors(grid, n_tags, reader, emitters, min_distance, rng)
}

/// As [`sample_topology`] but with explicit reader/emitter positions.
pub fn sample_topology_with_anchors<R: Rng + ?Sized>(
    grid: &Grid,
    n_tags: usize,
    reader: Point,
    emitters: Vec<Point>,
    min_distance: f64,
    rng: &mut R,
) -> Result<Topology> {
    if !grid.can_host(n_tags, emitters.len()) {
        return Err(Error::config(format!(
            "grid with {} points cannot host {} tags, {} emitters, and the reader",
            grid.n_points(),
            n_tags,
            emitters.len()
        )));
    }
    let candidates = admissible_points(grid, reader, &emitters, min_distance);
    if candidates.len() < n_tags {
        return Err(Error::config(format!(
            "only {} admissible tag positions (need {n_tags}); grid side {}, \
             min distance {min_distance}",
            candidates.len(),
            grid.side
        )));
    }
    // partial Fisher-Yates over the candidate indices
    let mut idx: Vec<usize> = (0..candidates.len()).collect();
    for i in 0..n_tags {
        let j = rng.random_range(i..idx.len());
        idx.swap(i, j);
    }
    let tags: Vec<Point> = idx[..n_tags].iter().map(|&i| candidates[i]).collect();
    Ok(Topology::with_uniform_exponent(reader, emitters, tags, 2.0))
}

/// Number of equally likely tag placements: C(#admissible, N) with the
/// anchors (but not the min-distance rule) removed. Overflows above u128 on
/// large grids, where the ensemble is only ever sampled.
pub fn ensemble_count(grid: &Grid, n_tags: usize, layout: Layout) -> Result<u128> {
    let available = grid
        .n_points()
        .checked_sub(1 + layout.n_emitters())
        .ok_or_else(|| Error::config("grid smaller than its anchors"))?;
    if n_tags > available {
        return Err(Error::config(format!(
            "cannot place {n_tags} tags on {available} free points"
        )));
    }
    // C(available, n_tags) with overflow detection
    let k = n_tags.min(available - n_tags);
    let mut result: u128 = 1;
    for i in 0..k {
        result = result
            .checked_mul((available - i) as u128)
            .ok_or_else(|| Error::numerical("ensemble count exceeds u128".to_string()))?
            / (i as u128 + 1);
    }
    Ok(result)
}
