//! Finite vertex sets Ω ⊂ ℤ^d, the standard shape families, and the JSON
//! domain file format.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fs;
use std::path::Path;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{canonical_offset, OffsetKey};

/// A finite set of distinct lattice points, stored in lexicographic order.
#[derive(Debug, Clone)]
pub struct Domain {
    dim: usize,
    vertices: Vec<Vec<i64>>,
    index: HashMap<Vec<i64>, usize>,
}

impl PartialEq for Domain {
    fn eq(&self, other: &Self) -> bool {
        self.dim == other.dim && self.vertices == other.vertices
    }
}

impl Eq for Domain {}

#[derive(Serialize, Deserialize)]
struct DomainFile {
    dim: usize,
    vertices: Vec<Vec<i64>>,
}

impl Domain {
    /// Builds a domain from vertices in any order. Duplicates, empty input
    /// and coordinate-count mismatches are rejected.
    pub fn new(dim: usize, vertices: Vec<Vec<i64>>) -> Result<Self> {
        Self::checked(dim, vertices).map_err(Error::domain)
    }

    fn checked(dim: usize, vertices: Vec<Vec<i64>>) -> std::result::Result<Self, String> {
        if dim == 0 {
            return Err("dimension must be at least 1".into());
        }
        if vertices.is_empty() {
            return Err("a domain needs at least one vertex".into());
        }
        let mut first_seen: HashMap<&[i64], usize> = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if v.len() != dim {
                return Err(format!(
                    "vertex {i} {v:?} has {} coordinates, expected {dim}",
                    v.len()
                ));
            }
            if let Some(j) = first_seen.insert(v.as_slice(), i) {
                return Err(format!("vertex {i} {v:?} duplicates vertex {j}"));
            }
        }
        let mut vertices = vertices;
        vertices.sort();
        let index = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.clone(), i))
            .collect();
        Ok(Self { dim, vertices, index })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `|Ω|`, always at least 1.
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vec<i64>] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &[i64] {
        &self.vertices[i]
    }

    pub fn index_of(&self, point: &[i64]) -> Option<usize> {
        self.index.get(point).copied()
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        self.index.contains_key(point)
    }

    /// Per-axis `(min, max)` of the coordinates.
    pub fn bounding_box(&self) -> Vec<(i64, i64)> {
        (0..self.dim)
            .map(|a| {
                let it = self.vertices.iter().map(|v| v[a]);
                (it.clone().min().expect("nonempty"), it.max().expect("nonempty"))
            })
            .collect()
    }

    /// Largest per-axis coordinate spread, `max_a (max − min)`.
    pub fn extent(&self) -> usize {
        self.bounding_box()
            .iter()
            .map(|(lo, hi)| (hi - lo) as usize)
            .max()
            .unwrap_or(0)
    }

    /// Largest `|x|_∞` over the vertices.
    pub fn max_norm(&self) -> usize {
        self.vertices
            .iter()
            .flat_map(|v| v.iter().map(|c| c.unsigned_abs() as usize))
            .max()
            .unwrap_or(0)
    }

    /// Canonical keys of all differences `x − y`, `x ≠ y` in Ω.
    pub fn difference_keys(&self) -> BTreeSet<OffsetKey> {
        let mut keys = BTreeSet::new();
        let mut diff = vec![0i64; self.dim];
        for (i, x) in self.vertices.iter().enumerate() {
            for y in &self.vertices[i + 1..] {
                for a in 0..self.dim {
                    diff[a] = x[a] - y[a];
                }
                keys.insert(canonical_offset(&diff));
            }
        }
        keys
    }

    /// Connectivity under nearest-neighbour adjacency `|x − y|_1 = 1`.
    pub fn is_connected(&self) -> bool {
        let n = self.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0usize]);
        seen[0] = true;
        let mut count = 1;
        let mut nb = vec![0i64; self.dim];
        while let Some(i) = queue.pop_front() {
            for a in 0..self.dim {
                for step in [-1i64, 1] {
                    nb.copy_from_slice(&self.vertices[i]);
                    nb[a] += step;
                    if let Some(j) = self.index_of(&nb) {
                        if !seen[j] {
                            seen[j] = true;
                            count += 1;
                            queue.push_back(j);
                        }
                    }
                }
            }
        }
        count == n
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&DomainFile {
            dim: self.dim,
            vertices: self.vertices.clone(),
        })
        .expect("plain integers always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DomainFile =
            serde_json::from_str(text).map_err(|e| Error::parse(format!("malformed domain file: {e}")))?;
        Self::checked(file.dim, file.vertices).map_err(Error::parse)
    }
}

/// The box `{0..n_1−1} × … × {0..n_d−1}`.
pub fn make_box(dim: usize, side_lengths: &[usize]) -> Result<Domain> {
    if side_lengths.len() != dim {
        return Err(Error::domain(format!(
            "{} side lengths given for dimension {dim}",
            side_lengths.len()
        )));
    }
    if let Some(a) = side_lengths.iter().position(|&n| n == 0) {
        return Err(Error::domain(format!("side {a} of the box is empty")));
    }
    let total: usize = side_lengths.iter().product();
    let mut vertices = Vec::with_capacity(total);
    for flat in 0..total {
        let mut rem = flat;
        let mut v = vec![0i64; dim];
        for a in (0..dim).rev() {
            v[a] = (rem % side_lengths[a]) as i64;
            rem /= side_lengths[a];
        }
        vertices.push(v);
    }
    Domain::new(dim, vertices)
}

/// The `2·arm × 2·arm` square without its upper-right `arm × arm` quadrant;
/// `3·arm²` vertices.
pub fn make_l_shape(arm: usize) -> Result<Domain> {
    if arm < 2 {
        return Err(Error::domain(format!("L-shape arm must be at least 2, got {arm}")));
    }
    let side = 2 * arm as i64;
    let a = arm as i64;
    let vertices = (0..side)
        .flat_map(|x| (0..side).map(move |y| vec![x, y]))
        .filter(|v| v[0] < a || v[1] < a)
        .collect();
    Domain::new(2, vertices)
}

/// Random connected set grown from the origin.
///
/// The generator is SplitMix64 with its state initialised to `seed`. The
/// frontier (lattice neighbours of the current set that are not yet in it)
/// is kept in lexicographic order; each step draws one 64-bit output `r`
/// and adds the frontier element at index `⌊r · |frontier| / 2^64⌋`.
pub fn make_random_connected(dim: usize, size: usize, seed: u64) -> Result<Domain> {
    if dim == 0 {
        return Err(Error::domain("dimension must be at least 1"));
    }
    if size == 0 {
        return Err(Error::domain("size must be at least 1"));
    }
    let mut rng = SplitMix64::seed_from_u64(seed);
    let origin = vec![0i64; dim];
    let mut members: BTreeSet<Vec<i64>> = BTreeSet::from([origin.clone()]);
    let mut frontier: BTreeSet<Vec<i64>> = BTreeSet::new();
    let add_neighbours = |p: &[i64], members: &BTreeSet<Vec<i64>>, frontier: &mut BTreeSet<Vec<i64>>| {
        for a in 0..dim {
            for step in [-1i64, 1] {
                let mut nb = p.to_vec();
                nb[a] += step;
                if !members.contains(&nb) {
                    frontier.insert(nb);
                }
            }
        }
    };
    add_neighbours(&origin, &members, &mut frontier);
    while members.len() < size {
        let pick = ((rng.next_u64() as u128 * frontier.len() as u128) >> 64) as usize;
        let chosen = frontier.iter().nth(pick).expect("index below frontier size").clone();
        frontier.remove(&chosen);
        members.insert(chosen.clone());
        add_neighbours(&chosen, &members, &mut frontier);
    }
    Domain::new(dim, members.into_iter().collect())
}

pub fn read_domain(path: &Path) -> Result<Domain> {
    let text = fs::read_to_string(path)?;
    Domain::from_json(&text).map_err(|e| match e {
        Error::Parse { message, .. } => Error::Parse {
            path: Some(path.to_path_buf()),
            message,
        },
        other => other,
    })
}

pub fn write_domain(domain: &Domain, path: &Path) -> Result<()> {
    fs::write(path, domain.to_json())?;
    Ok(())
}
