use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rayon::prelude::*;

use super::{q_alpha_time_integral_estimate, AlphaParam, QuadratureSpec, SymbolCoefficients};
use crate::error::{Error, Result};

/// Offset with absolute coordinates sorted in descending order.
///
/// Every offset related to it by coordinate sign flips and permutations maps
/// to the same key, matching the symmetry group of `Φ`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct OffsetKey(Vec<i64>);

impl OffsetKey {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }

    pub fn max_coord(&self) -> usize {
        self.0.first().copied().unwrap_or(0) as usize
    }
}

impl fmt::Display for OffsetKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

pub fn canonical_offset(offset: &[i64]) -> OffsetKey {
    let mut coords: Vec<i64> = offset.iter().map(|c| c.abs()).collect();
    coords.sort_unstable_by(|a, b| b.cmp(a));
    OffsetKey(coords)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KernelMethod {
    TimeIntegral,
    Fourier,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelEntry {
    pub value: f64,
    pub error: f64,
    pub method: KernelMethod,
}

/// Cache of `Q_α` values keyed by canonical offset.
#[derive(Debug, Clone)]
pub struct KernelTable {
    dim: usize,
    alpha: AlphaParam,
    entries: BTreeMap<OffsetKey, KernelEntry>,
}

impl KernelTable {
    pub fn new(dim: usize, alpha: AlphaParam) -> Self {
        Self {
            dim,
            alpha,
            entries: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn alpha(&self) -> &AlphaParam {
        &self.alpha
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&OffsetKey, &KernelEntry)> {
        self.entries.iter()
    }

    pub fn entry(&self, offset: &[i64]) -> Option<&KernelEntry> {
        if offset.len() != self.dim {
            return None;
        }
        self.entries.get(&canonical_offset(offset))
    }

    pub fn get(&self, offset: &[i64]) -> Option<f64> {
        self.entry(offset).map(|e| e.value)
    }

    fn missing_keys<'a, I>(&self, offsets: I) -> Result<BTreeSet<OffsetKey>>
    where
        I: IntoIterator<Item = &'a [i64]>,
    {
        let mut keys = BTreeSet::new();
        for off in offsets {
            if off.len() != self.dim {
                return Err(Error::domain(format!(
                    "offset {off:?} has {} coordinates, table dimension is {}",
                    off.len(),
                    self.dim
                )));
            }
            let key = canonical_offset(off);
            if key.is_zero() {
                return Err(Error::domain("Q_alpha is defined only for nonzero offsets"));
            }
            if !self.entries.contains_key(&key) {
                keys.insert(key);
            }
        }
        Ok(keys)
    }

    /// Fills all missing offsets from one set of Fourier coefficients.
    /// Returns the coefficients so callers can reuse `S_α`.
    pub fn fill_fourier<'a, I>(&mut self, offsets: I, quad: &QuadratureSpec) -> Result<Option<SymbolCoefficients>>
    where
        I: IntoIterator<Item = &'a [i64]>,
    {
        let keys = self.missing_keys(offsets)?;
        if keys.is_empty() {
            return Ok(None);
        }
        let magnitudes: BTreeSet<usize> = keys
            .iter()
            .flat_map(|k| k.coords().iter().map(|c| c.unsigned_abs() as usize))
            .collect();
        let coeffs = SymbolCoefficients::compute_for_values(self.dim, &self.alpha, magnitudes, quad)?;
        for key in keys {
            let est = coeffs.kernel(key.coords()).expect("inside computed set");
            if !(est.value > 0.0) {
                return Err(Error::Numeric {
                    what: format!("Fourier kernel at offset {key} is not positive ({:e})", est.value),
                    residual: est.error,
                });
            }
            self.entries.insert(
                key,
                KernelEntry {
                    value: est.value,
                    error: est.error,
                    method: KernelMethod::Fourier,
                },
            );
        }
        Ok(Some(coeffs))
    }

    /// Fills all missing offsets by the time integral, in parallel; results
    /// are merged by a single writer afterwards.
    pub fn fill_time_integral<'a, I>(&mut self, offsets: I, quad: &QuadratureSpec) -> Result<()>
    where
        I: IntoIterator<Item = &'a [i64]>,
    {
        let keys: Vec<OffsetKey> = self.missing_keys(offsets)?.into_iter().collect();
        let alpha = self.alpha;
        let computed: Vec<(OffsetKey, KernelEntry)> = keys
            .into_par_iter()
            .map(|key| {
                let est = q_alpha_time_integral_estimate(key.coords(), &alpha, quad)?;
                Ok((
                    key,
                    KernelEntry {
                        value: est.value,
                        error: est.error,
                        method: KernelMethod::TimeIntegral,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        self.entries.extend(computed);
        Ok(())
    }

    /// Merges another table for the same `(d, α)`. Keys present in both must
    /// carry bit-identical values.
    pub fn merge(&mut self, other: KernelTable) -> Result<()> {
        if other.dim != self.dim || other.alpha != self.alpha {
            return Err(Error::domain("cannot merge kernel tables with different (dim, alpha)"));
        }
        for (key, entry) in other.entries {
            match self.entries.get(&key) {
                Some(existing) if existing.value.to_bits() != entry.value.to_bits() => {
                    return Err(Error::domain(format!(
                        "kernel table shards disagree at offset {key}: {} vs {}",
                        existing.value, entry.value
                    )));
                }
                Some(_) => {}
                None => {
                    self.entries.insert(key, entry);
                }
            }
        }
        Ok(())
    }
}
