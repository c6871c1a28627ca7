//! Truncated bosonic Fock space over a finite lattice of (momentum cell,
//! acceleration cell) modes.
//!
//! Dirac deltas δ³(p−p′)δ³(a−a′) become δ_ij / cell_volume, so ladder
//! operators carry a 1/√Δ factor. Operators are stored column-sparse; a
//! ladder operator has at most one non-zero per column.

use std::collections::{BTreeMap, BTreeSet};
use std::ops::{Mul, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

/// Largest Fock-space dimension accepted.
pub const MAX_DIMENSION: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq)]
pub struct ModeLattice {
    modes: Vec<(i64, i64)>,
    cell_volume: f64,
}

impl ModeLattice {
    pub fn new(modes: Vec<(i64, i64)>, cell_volume: f64) -> Result<Self> {
        if !(cell_volume.is_finite() && cell_volume > 0.0) {
            return Err(Error::invalid(
                "cell_volume",
                format!("must be positive, got {cell_volume}"),
            ));
        }
        if modes.is_empty() {
            return Err(Error::invalid("modes", "lattice needs at least one mode"));
        }
        let unique: BTreeSet<_> = modes.iter().collect();
        if unique.len() != modes.len() {
            return Err(Error::invalid("modes", "mode labels must be unique"));
        }
        Ok(Self { modes, cell_volume })
    }

    /// `count` modes labelled (i, 0).
    pub fn line(count: usize, cell_volume: f64) -> Result<Self> {
        Self::new((0..count as i64).map(|i| (i, 0)).collect(), cell_volume)
    }

    pub fn modes(&self) -> &[(i64, i64)] {
        &self.modes
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn cell_volume(&self) -> f64 {
        self.cell_volume
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LadderKind {
    Create,
    Annihilate,
}

/// Occupation-number basis |n₀, n₁, …⟩ with 0 ≤ n_k ≤ cutoff, indexed
/// little-endian in base cutoff + 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockBasis {
    pub n_modes: usize,
    pub cutoff: usize,
}

impl FockBasis {
    pub fn new(n_modes: usize, cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::invalid("cutoff", "must be at least 1"));
        }
        (cutoff + 1)
            .checked_pow(n_modes as u32)
            .filter(|d| *d <= MAX_DIMENSION)
            .ok_or_else(|| {
                Error::invalid("modes", format!("Fock dimension exceeds {MAX_DIMENSION}"))
            })?;
        Ok(Self { n_modes, cutoff })
    }

    pub fn dim(&self) -> usize {
        (self.cutoff + 1).pow(self.n_modes as u32)
    }

    fn stride(&self, mode: usize) -> usize {
        (self.cutoff + 1).pow(mode as u32)
    }

    pub fn occupation(&self, index: usize, mode: usize) -> usize {
        (index / self.stride(mode)) % (self.cutoff + 1)
    }

    pub fn occupations(&self, index: usize) -> Vec<usize> {
        (0..self.n_modes)
            .map(|m| self.occupation(index, m))
            .collect()
    }

    pub fn index_of(&self, occupations: &[usize]) -> usize {
        occupations
            .iter()
            .enumerate()
            .map(|(m, n)| n * self.stride(m))
            .sum()
    }

    /// States with every occupation ≤ cutoff − 1.
    pub fn interior(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.dim()).filter(|&i| (0..self.n_modes).all(|m| self.occupation(i, m) < self.cutoff))
    }
}

/// A linear map on the truncated Fock space.
#[derive(Debug, Clone, PartialEq)]
pub struct FockOperator {
    basis: FockBasis,
    /// columns[j] = sorted (row, value) pairs.
    columns: Vec<Vec<(usize, f64)>>,
}

impl FockOperator {
    pub fn zero(basis: FockBasis) -> Self {
        Self {
            basis,
            columns: vec![Vec::new(); basis.dim()],
        }
    }

    pub fn identity(basis: FockBasis) -> Self {
        Self {
            basis,
            columns: (0..basis.dim()).map(|j| vec![(j, 1.0)]).collect(),
        }
    }

    pub fn basis(&self) -> FockBasis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn cutoff(&self) -> usize {
        self.basis.cutoff
    }

    pub fn column(&self, j: usize) -> &[(usize, f64)] {
        &self.columns[j]
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.columns[col]
            .iter()
            .find(|(r, _)| *r == row)
            .map_or(0.0, |(_, v)| *v)
    }

    pub fn apply(&self, state: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        for (j, amp) in state.iter().enumerate() {
            if *amp != 0.0 {
                for (i, v) in &self.columns[j] {
                    out[*i] += v * amp;
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &Self) -> Self {
        &(self * other) - &(other * self)
    }
}

fn collect(entries: BTreeMap<usize, f64>) -> Vec<(usize, f64)> {
    entries.into_iter().filter(|(_, v)| *v != 0.0).collect()
}

impl Mul for &FockOperator {
    type Output = FockOperator;
    fn mul(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.basis, rhs.basis, "operators act on different spaces");
        let columns = rhs
            .columns
            .iter()
            .map(|col| {
                let mut acc = BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        *acc.entry(*i).or_insert(0.0) += a * b;
                    }
                }
                collect(acc)
            })
            .collect();
        FockOperator {
            basis: self.basis,
            columns,
        }
    }
}

impl Sub for &FockOperator {
    type Output = FockOperator;
    fn sub(self, rhs: &FockOperator) -> FockOperator {
        assert_eq!(self.basis, rhs.basis, "operators act on different spaces");
        let columns = self
            .columns
            .iter()
            .zip(&rhs.columns)
            .map(|(a, b)| {
                let mut acc: BTreeMap<usize, f64> = a.iter().copied().collect();
                for (i, v) in b {
                    *acc.entry(*i).or_insert(0.0) -= v;
                }
                collect(acc)
            })
            .collect();
        FockOperator {
            basis: self.basis,
            columns,
        }
    }
}

/// b_i or b†_i on the lattice, scaled by 1/√Δ so that [b_i, b†_i] = 1/Δ
/// below the cutoff.
pub fn build_ladder(
    lattice: &ModeLattice,
    mode_index: usize,
    kind: LadderKind,
    cutoff: usize,
) -> Result<FockOperator> {
    if mode_index >= lattice.len() {
        return Err(Error::InvalidModeIndex {
            index: mode_index,
            len: lattice.len(),
        });
    }
    let basis = FockBasis::new(lattice.len(), cutoff)?;
    let scale = lattice.cell_volume().sqrt().recip();
    let stride = basis.stride(mode_index);
    let columns = (0..basis.dim())
        .map(|j| {
            let n = basis.occupation(j, mode_index);
            match kind {
                LadderKind::Annihilate if n > 0 => vec![(j - stride, (n as f64).sqrt() * scale)],
                LadderKind::Create if n < cutoff => {
                    vec![(j + stride, ((n + 1) as f64).sqrt() * scale)]
                }
                _ => Vec::new(),
            }
        })
        .collect();
    Ok(FockOperator { basis, columns })
}

/// b†_i b_i, with spectrum {0, 1, …, cutoff}/Δ.
pub fn number_operator(
    lattice: &ModeLattice,
    mode_index: usize,
    cutoff: usize,
) -> Result<FockOperator> {
    let create = build_ladder(lattice, mode_index, LadderKind::Create, cutoff)?;
    let annihilate = build_ladder(lattice, mode_index, LadderKind::Annihilate, cutoff)?;
    Ok(&create * &annihilate)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CommutatorReport {
    pub max_deviation: f64,
    pub subspace_dim: usize,
}

/// Largest |C_rj − expected·δ_rj| over all rows r and interior columns j.
fn deviation_on_interior(c: &FockOperator, expected_diag: f64, interior: &[usize]) -> f64 {
    let mut worst: f64 = 0.0;
    for &j in interior {
        let mut diag_seen = false;
        for (r, v) in c.column(j) {
            let target = if *r == j {
                diag_seen = true;
                expected_diag
            } else {
                0.0
            };
            worst = worst.max((v - target).abs());
        }
        if !diag_seen {
            worst = worst.max(expected_diag.abs());
        }
    }
    worst
}

/// Checks [b_i, b†_j] = δ_ij/Δ, [b_i, b_j] = 0 and [b†_i, b†_j] = 0 on the
/// subspace where every occupation is below the cutoff.
pub fn commutator_check(lattice: &ModeLattice, cutoff: usize) -> Result<CommutatorReport> {
    if cutoff < 2 {
        return Err(Error::invalid(
            "cutoff",
            format!("must be at least 2, got {cutoff}"),
        ));
    }
    let basis = FockBasis::new(lattice.len(), cutoff)?;
    let interior: Vec<usize> = basis.interior().collect();
    let lower: Vec<FockOperator> = (0..lattice.len())
        .map(|i| build_ladder(lattice, i, LadderKind::Annihilate, cutoff))
        .collect::<Result<_>>()?;
    let raise: Vec<FockOperator> = (0..lattice.len())
        .map(|i| build_ladder(lattice, i, LadderKind::Create, cutoff))
        .collect::<Result<_>>()?;

    let inv_volume = lattice.cell_volume().recip();
    let mut max_deviation: f64 = 0.0;
    for i in 0..lattice.len() {
        for j in 0..lattice.len() {
            let delta = if i == j { inv_volume } else { 0.0 };
            let mixed = lower[i].commutator(&raise[j]);
            let both_lower = lower[i].commutator(&lower[j]);
            let both_raise = raise[i].commutator(&raise[j]);
            max_deviation = max_deviation
                .max(deviation_on_interior(&mixed, delta, &interior))
                .max(deviation_on_interior(&both_lower, 0.0, &interior))
                .max(deviation_on_interior(&both_raise, 0.0, &interior));
        }
    }
    Ok(CommutatorReport {
        max_deviation,
        subspace_dim: interior.len(),
    })
}
