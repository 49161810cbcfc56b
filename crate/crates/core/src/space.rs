//! Finite quantum spaces `(B, psi)` with `B = ⊕_a M_{N_a}(C)`.
//!
//! Elements of `B` are stored blockwise. Whenever an element is flattened to
//! coordinates, the canonical order is used: blocks ascending, then matrix
//! units `e_ij` row-major inside each block.

use std::ops::{Add, Mul, Neg, Range, Sub};

use crate::error::{Error, Result};
use crate::linalg::{frobenius, real, CMatrix, CVector, C64, ZERO};
use crate::tolerance;

/// A standard matrix unit `e_ij^{(a)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Unit {
    pub block: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockStructure {
    sizes: Vec<usize>,
    offsets: Vec<usize>,
    units: Vec<Unit>,
}

impl BlockStructure {
    pub fn new(sizes: Vec<usize>) -> Result<Self> {
        if sizes.is_empty() {
            return Err(Error::InvalidStructure(
                "at least one block is required".into(),
            ));
        }
        if let Some(a) = sizes.iter().position(|&n| n == 0) {
            return Err(Error::InvalidStructure(format!("block {a} has size 0")));
        }
        let mut offsets = Vec::with_capacity(sizes.len());
        let mut units = Vec::new();
        let mut acc = 0;
        for (block, &n) in sizes.iter().enumerate() {
            offsets.push(acc);
            acc += n * n;
            for row in 0..n {
                for col in 0..n {
                    units.push(Unit { block, row, col });
                }
            }
        }
        Ok(Self {
            sizes,
            offsets,
            units,
        })
    }

    /// `C^n`, i.e. `n` blocks of size one.
    pub fn commutative(n: usize) -> Result<Self> {
        Self::new(vec![1; n])
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    pub fn num_blocks(&self) -> usize {
        self.sizes.len()
    }

    pub fn block_size(&self, a: usize) -> usize {
        self.sizes[a]
    }

    /// Total dimension `Σ_a N_a^2`.
    pub fn dim(&self) -> usize {
        self.units.len()
    }

    pub fn is_commutative(&self) -> bool {
        self.sizes.iter().all(|&n| n == 1)
    }

    pub fn block_range(&self, a: usize) -> Range<usize> {
        self.offsets[a]..self.offsets[a] + self.sizes[a] * self.sizes[a]
    }

    pub fn index(&self, block: usize, row: usize, col: usize) -> usize {
        self.offsets[block] + row * self.sizes[block] + col
    }

    pub fn checked_index(&self, block: usize, row: usize, col: usize) -> Result<usize> {
        if block >= self.sizes.len() || row >= self.sizes[block] || col >= self.sizes[block] {
            return Err(Error::IndexOutOfRange(format!(
                "unit ({block}; {row}, {col}) in structure {:?}",
                self.sizes
            )));
        }
        Ok(self.index(block, row, col))
    }

    pub fn unit(&self, p: usize) -> Unit {
        self.units[p]
    }

    pub fn units(&self) -> &[Unit] {
        &self.units
    }

    /// Index of `e_p^*`.
    pub fn adjoint_index(&self, p: usize) -> usize {
        let u = self.units[p];
        self.index(u.block, u.col, u.row)
    }

    /// `e_p e_q` as a unit index, or `None` when the product vanishes.
    pub fn product(&self, p: usize, q: usize) -> Option<usize> {
        let (u, v) = (self.units[p], self.units[q]);
        (u.block == v.block && u.col == v.row).then(|| self.index(u.block, u.row, v.col))
    }

    /// Indices of the diagonal units `e_ii^{(a)}`, whose sum is the unit of `B`.
    pub fn diagonal_units(&self) -> Vec<usize> {
        (0..self.dim())
            .filter(|&p| self.units[p].row == self.units[p].col)
            .collect()
    }

    /// Matrix of `y -> x y` on canonical coordinates.
    pub fn left_multiplication(&self, x: &CVector) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for p in 0..n {
            if x[p] == ZERO {
                continue;
            }
            for q in 0..n {
                if let Some(r) = self.product(p, q) {
                    m[(r, q)] += x[p];
                }
            }
        }
        m
    }

    /// Matrix of `y -> y x` on canonical coordinates.
    pub fn right_multiplication(&self, x: &CVector) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for p in 0..n {
            if x[p] == ZERO {
                continue;
            }
            for q in 0..n {
                if let Some(r) = self.product(q, p) {
                    m[(r, q)] += x[p];
                }
            }
        }
        m
    }

    /// Coordinates of the product of two coordinate vectors.
    pub fn multiply_coords(&self, x: &CVector, y: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        for (p, u) in self.units.iter().enumerate() {
            if x[p] == ZERO {
                continue;
            }
            let n = self.sizes[u.block];
            for col in 0..n {
                let q = self.index(u.block, u.col, col);
                out[self.index(u.block, u.row, col)] += x[p] * y[q];
            }
        }
        out
    }

    /// Coordinates of the adjoint.
    pub fn adjoint_coords(&self, x: &CVector) -> CVector {
        CVector::from_iterator(
            self.dim(),
            (0..self.dim()).map(|p| x[self.adjoint_index(p)].conj()),
        )
    }

    pub fn identity_coords(&self) -> CVector {
        let mut v = CVector::zeros(self.dim());
        for p in self.diagonal_units() {
            v[p] = real(1.0);
        }
        v
    }

    pub fn basis_coords(&self, p: usize) -> CVector {
        let mut v = CVector::zeros(self.dim());
        v[p] = real(1.0);
        v
    }

    pub(crate) fn check_dim(&self, n: usize, what: &str) -> Result<()> {
        if n != self.dim() {
            return Err(Error::ShapeMismatch(format!(
                "{what} has dimension {n}, expected {}",
                self.dim()
            )));
        }
        Ok(())
    }
}

/// An element of `B`, one square complex matrix per block.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    blocks: Vec<CMatrix>,
}

impl AlgebraElement {
    pub fn from_blocks(structure: &BlockStructure, blocks: Vec<CMatrix>) -> Result<Self> {
        if blocks.len() != structure.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} blocks supplied, structure has {}",
                blocks.len(),
                structure.num_blocks()
            )));
        }
        for (a, b) in blocks.iter().enumerate() {
            let n = structure.block_size(a);
            if b.nrows() != n || b.ncols() != n {
                return Err(Error::ShapeMismatch(format!(
                    "block {a} is {}x{}, expected {n}x{n}",
                    b.nrows(),
                    b.ncols()
                )));
            }
        }
        Ok(Self { blocks })
    }

    pub fn zeros(structure: &BlockStructure) -> Self {
        Self {
            blocks: structure
                .sizes()
                .iter()
                .map(|&n| CMatrix::zeros(n, n))
                .collect(),
        }
    }

    pub fn identity(structure: &BlockStructure) -> Self {
        Self {
            blocks: structure
                .sizes()
                .iter()
                .map(|&n| CMatrix::identity(n, n))
                .collect(),
        }
    }

    /// The standard matrix unit `e_ij^{(a)}`.
    pub fn unit(structure: &BlockStructure, block: usize, row: usize, col: usize) -> Result<Self> {
        structure.checked_index(block, row, col)?;
        let mut x = Self::zeros(structure);
        x.blocks[block][(row, col)] = real(1.0);
        Ok(x)
    }

    pub fn from_coords(structure: &BlockStructure, coords: &CVector) -> Result<Self> {
        structure.check_dim(coords.len(), "coordinate vector")?;
        let mut x = Self::zeros(structure);
        for (p, u) in structure.units().iter().enumerate() {
            x.blocks[u.block][(u.row, u.col)] = coords[p];
        }
        Ok(x)
    }

    pub fn coords(&self) -> CVector {
        let dim: usize = self.blocks.iter().map(|b| b.len()).sum();
        let mut v = CVector::zeros(dim);
        let mut k = 0;
        for b in &self.blocks {
            for i in 0..b.nrows() {
                for j in 0..b.ncols() {
                    v[k] = b[(i, j)];
                    k += 1;
                }
            }
        }
        v
    }

    pub fn blocks(&self) -> &[CMatrix] {
        &self.blocks
    }

    pub fn block(&self, a: usize) -> &CMatrix {
        &self.blocks[a]
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.nrows()).collect()
    }

    pub fn conforms_to(&self, structure: &BlockStructure) -> bool {
        self.blocks.len() == structure.num_blocks()
            && self
                .blocks
                .iter()
                .zip(structure.sizes())
                .all(|(b, &n)| b.nrows() == n && b.ncols() == n)
    }

    pub(crate) fn check(&self, structure: &BlockStructure) -> Result<()> {
        if !self.conforms_to(structure) {
            return Err(Error::ShapeMismatch(format!(
                "element with blocks {:?} does not match structure {:?}",
                self.sizes(),
                structure.sizes()
            )));
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b.adjoint()).collect(),
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            blocks: self.blocks.iter().map(|b| b * c).collect(),
        }
    }

    pub fn norm(&self) -> f64 {
        self.blocks
            .iter()
            .map(|b| frobenius(b).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&CMatrix, &CMatrix) -> CMatrix) -> Self {
        assert_eq!(self.sizes(), other.sizes(), "block shapes differ");
        Self {
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

impl Add for &AlgebraElement {
    type Output = AlgebraElement;
    fn add(self, rhs: Self) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &AlgebraElement {
    type Output = AlgebraElement;
    fn sub(self, rhs: Self) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Mul for &AlgebraElement {
    type Output = AlgebraElement;
    fn mul(self, rhs: Self) -> AlgebraElement {
        self.zip_with(rhs, |a, b| a * b)
    }
}

impl Neg for &AlgebraElement {
    type Output = AlgebraElement;
    fn neg(self) -> AlgebraElement {
        self.scale(real(-1.0))
    }
}

/// A faithful state given by diagonal block densities, validated as a
/// delta-form (`Tr(rho_a^{-1}) = delta^2` for every block).
#[derive(Clone, Debug, PartialEq)]
pub struct DeltaState {
    structure: BlockStructure,
    weights: Vec<Vec<f64>>,
    delta_sq: f64,
}

impl DeltaState {
    /// Validates per-block diagonal weights `psi(e_ii^{(a)})`.
    pub fn new(structure: BlockStructure, weights: Vec<Vec<f64>>) -> Result<Self> {
        if weights.len() != structure.num_blocks() {
            return Err(Error::ShapeMismatch(format!(
                "{} weight lists for {} blocks",
                weights.len(),
                structure.num_blocks()
            )));
        }
        for (a, w) in weights.iter().enumerate() {
            if w.len() != structure.block_size(a) {
                return Err(Error::ShapeMismatch(format!(
                    "block {a} has {} weights, expected {}",
                    w.len(),
                    structure.block_size(a)
                )));
            }
            if let Some(&value) = w.iter().find(|&&v| !(v > 0.0) || !v.is_finite()) {
                return Err(Error::NonPositiveWeight { block: a, value });
            }
        }
        let sum: f64 = weights.iter().flatten().sum();
        if (sum - 1.0).abs() > tolerance::THEOREM {
            return Err(Error::NotState { sum });
        }
        let values: Vec<f64> = weights
            .iter()
            .map(|w| w.iter().map(|v| 1.0 / v).sum())
            .collect();
        let delta_sq = values[0];
        if values
            .iter()
            .any(|v| (v - delta_sq).abs() > tolerance::THEOREM * delta_sq.max(1.0))
        {
            return Err(Error::NotDeltaForm { values });
        }
        Ok(Self {
            structure,
            weights,
            delta_sq,
        })
    }

    /// Uniform state on `C^n`; a delta-form with `delta^2 = n`.
    pub fn uniform(n: usize) -> Result<Self> {
        let structure = BlockStructure::commutative(n)?;
        Self::new(structure, vec![vec![1.0 / n as f64]; n])
    }

    /// The trace-proportional delta-form `psi = Tr(·)/dim B` restricted blockwise,
    /// so that every block has weights `N_a / dim B` and `delta^2 = dim B`.
    /// On a single block `M_n` this is the normalized trace.
    pub fn tracial(structure: BlockStructure) -> Result<Self> {
        let dim = structure.dim() as f64;
        let weights = structure
            .sizes()
            .iter()
            .map(|&n| vec![n as f64 / dim; n])
            .collect();
        Self::new(structure, weights)
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn weights(&self) -> &[Vec<f64>] {
        &self.weights
    }

    pub fn weight(&self, block: usize, i: usize) -> f64 {
        self.weights[block][i]
    }

    pub fn delta_sq(&self) -> f64 {
        self.delta_sq
    }

    pub fn delta(&self) -> f64 {
        self.delta_sq.sqrt()
    }

    /// Weight of the column index of unit `p`, i.e. `psi(e_p^* e_p)`.
    pub fn column_weight(&self, p: usize) -> f64 {
        let u = self.structure.unit(p);
        self.weights[u.block][u.col]
    }

    pub fn row_weight(&self, p: usize) -> f64 {
        let u = self.structure.unit(p);
        self.weights[u.block][u.row]
    }

    /// `psi(e_p)` for every unit, as a coordinate row.
    pub fn functional(&self) -> CVector {
        CVector::from_iterator(
            self.structure.dim(),
            self.structure.units().iter().map(|u| {
                if u.row == u.col {
                    real(self.weights[u.block][u.row])
                } else {
                    ZERO
                }
            }),
        )
    }

    /// Diagonal Gram matrix of the standard units under `<x, y> = psi(x^* y)`.
    pub fn gram_diagonal(&self) -> Vec<f64> {
        (0..self.structure.dim())
            .map(|p| self.column_weight(p))
            .collect()
    }

    pub fn density(&self, block: usize) -> CMatrix {
        CMatrix::from_diagonal(&CVector::from_iterator(
            self.weights[block].len(),
            self.weights[block].iter().map(|&w| real(w)),
        ))
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<C64> {
        x.check(&self.structure)?;
        let mut acc = ZERO;
        for (a, b) in x.blocks().iter().enumerate() {
            for (i, w) in self.weights[a].iter().enumerate() {
                acc += b[(i, i)] * *w;
            }
        }
        Ok(acc)
    }

    pub fn apply_coords(&self, x: &CVector) -> C64 {
        self.functional()
            .iter()
            .zip(x.iter())
            .map(|(f, v)| f * v)
            .sum()
    }

    /// `1 / sqrt(psi(e_ii) psi(e_jj))`, the factor turning `e_ij` into the
    /// adapted unit `f_ij`.
    pub fn adapted_scale(&self, p: usize) -> f64 {
        1.0 / (self.row_weight(p) * self.column_weight(p)).sqrt()
    }
}

/// `<x, y>_psi = psi(x^* y)`.
pub fn gns_inner(x: &AlgebraElement, y: &AlgebraElement, psi: &DeltaState) -> Result<C64> {
    x.check(psi.structure())?;
    y.check(psi.structure())?;
    let mut acc = ZERO;
    for (a, (bx, by)) in x.blocks().iter().zip(y.blocks()).enumerate() {
        for i in 0..bx.nrows() {
            for j in 0..bx.ncols() {
                acc += bx[(i, j)].conj() * by[(i, j)] * psi.weight(a, j);
            }
        }
    }
    Ok(acc)
}

/// `σ_{is}(x) = ρ^{-s} x ρ^{s}` blockwise, for the modular group
/// `σ_t(x) = ρ^{it} x ρ^{-it}`.
pub fn modular_imaginary(x: &AlgebraElement, psi: &DeltaState, s: f64) -> Result<AlgebraElement> {
    x.check(psi.structure())?;
    let blocks = x
        .blocks()
        .iter()
        .enumerate()
        .map(|(a, b)| {
            CMatrix::from_fn(b.nrows(), b.ncols(), |i, j| {
                b[(i, j)] * (psi.weight(a, j) / psi.weight(a, i)).powf(s)
            })
        })
        .collect();
    AlgebraElement::from_blocks(psi.structure(), blocks)
}

/// `σ_{i/2}(x) = ρ^{-1/2} x ρ^{1/2}`.
pub fn modular_half(x: &AlgebraElement, psi: &DeltaState) -> Result<AlgebraElement> {
    modular_imaginary(x, psi, 0.5)
}

/// `σ_{-i}(x) = ρ x ρ^{-1}`, the KMS twist `psi(x y) = psi(y σ_{-i}(x))`.
pub fn modular_minus_i(x: &AlgebraElement, psi: &DeltaState) -> Result<AlgebraElement> {
    modular_imaginary(x, psi, -1.0)
}

/// Adapted matrix unit `f_ij^{(a)} = e_ij^{(a)} / sqrt(psi(e_ii) psi(e_jj))`.
pub fn adapted_unit(
    block: usize,
    row: usize,
    col: usize,
    psi: &DeltaState,
) -> Result<AlgebraElement> {
    let p = psi.structure().checked_index(block, row, col)?;
    Ok(AlgebraElement::unit(psi.structure(), block, row, col)?.scale(real(psi.adapted_scale(p))))
}
