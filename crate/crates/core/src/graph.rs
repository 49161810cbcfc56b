//! Quantum adjacency matrices, edge indicators and the checks built on them.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{frobenius, hermitian_eigen, real, CMatrix, CVector, ZERO};
use crate::space::{AlgebraElement, BlockStructure, DeltaState};
use crate::tensor::{comultiply_coords, modular_first_leg, sharp, TensorElement};
use crate::tolerance;

/// A linear map on `B`, stored as its matrix on canonical coordinates:
/// `A(e_q) = Σ_p M[p, q] e_p`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMapOnB {
    matrix: CMatrix,
}

impl LinearMapOnB {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::ShapeMismatch(format!(
                "map matrix is {}x{}, expected square",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(Self { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: CMatrix::identity(dim, dim),
        }
    }

    /// Builds the matrix from the images of the canonical units.
    pub fn from_images(
        structure: &BlockStructure,
        f: impl Fn(&AlgebraElement) -> AlgebraElement,
    ) -> Self {
        let n = structure.dim();
        let mut matrix = CMatrix::zeros(n, n);
        for q in 0..n {
            let e =
                AlgebraElement::from_coords(structure, &structure.basis_coords(q)).expect("basis");
            matrix.set_column(q, &f(&e).coords());
        }
        Self { matrix }
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn apply_coords(&self, x: &CVector) -> CVector {
        &self.matrix * x
    }

    pub fn apply(&self, x: &AlgebraElement, structure: &BlockStructure) -> Result<AlgebraElement> {
        x.check(structure)?;
        structure.check_dim(self.dim(), "map")?;
        AlgebraElement::from_coords(structure, &self.apply_coords(&x.coords()))
    }

    /// Coefficients in adapted units: `A(f_q) = Σ_p Â[p, q] f_p`.
    pub fn adapted_coefficients(&self, psi: &DeltaState) -> CMatrix {
        let c: Vec<f64> = (0..self.dim()).map(|p| psi.adapted_scale(p)).collect();
        CMatrix::from_fn(self.dim(), self.dim(), |p, q| {
            self.matrix[(p, q)] * (c[q] / c[p])
        })
    }
}

/// `‖m (A ⊗ A) m^* − δ² A‖` over the canonical basis.
pub fn schur_residual(psi: &DeltaState, a: &LinearMapOnB) -> Result<f64> {
    let s = psi.structure();
    s.check_dim(a.dim(), "adjacency")?;
    Ok(frobenius(
        &(schur_product(psi, a.matrix(), a.matrix()) - a.matrix() * real(psi.delta_sq())),
    ))
}

/// Matrix of `m (A ⊗ B) m^*`.
pub(crate) fn schur_product(psi: &DeltaState, a: &CMatrix, b: &CMatrix) -> CMatrix {
    let s = psi.structure();
    let n = s.dim();
    let mut out = CMatrix::zeros(n, n);
    for q in 0..n {
        let t = comultiply_coords(&s.basis_coords(q), psi).map_legs(a, b);
        out.set_column(q, &t.multiply().coords());
    }
    out
}

/// A validated quantum graph `(B, ψ, A)`.
#[derive(Clone, Debug, PartialEq)]
pub struct QuantumGraph {
    psi: DeltaState,
    adjacency: LinearMapOnB,
    schur_residual: f64,
}

impl QuantumGraph {
    pub fn new(psi: DeltaState, adjacency: LinearMapOnB) -> Result<Self> {
        Self::with_tolerance(psi, adjacency, tolerance::THEOREM)
    }

    pub fn with_tolerance(psi: DeltaState, adjacency: LinearMapOnB, tol: f64) -> Result<Self> {
        let residual = schur_residual(&psi, &adjacency)?;
        if !(residual <= tol) {
            return Err(Error::NotSchurIdempotent { residual });
        }
        Ok(Self {
            psi,
            adjacency,
            schur_residual: residual,
        })
    }

    pub fn structure(&self) -> &BlockStructure {
        self.psi.structure()
    }

    pub fn psi(&self) -> &DeltaState {
        &self.psi
    }

    pub fn adjacency(&self) -> &LinearMapOnB {
        &self.adjacency
    }

    pub fn matrix(&self) -> &CMatrix {
        self.adjacency.matrix()
    }

    pub fn schur_residual(&self) -> f64 {
        self.schur_residual
    }

    pub fn delta_sq(&self) -> f64 {
        self.psi.delta_sq()
    }

    pub fn dim(&self) -> usize {
        self.structure().dim()
    }

    pub fn apply(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        self.adjacency.apply(x, self.structure())
    }

    pub fn basis(&self, p: usize) -> AlgebraElement {
        AlgebraElement::from_coords(self.structure(), &self.structure().basis_coords(p))
            .expect("basis")
    }
}

/// `ε_G = δ^{-2} (1 ⊗ A) m^*(1)`.
pub fn edge_indicator(g: &QuantumGraph) -> TensorElement {
    let s = g.structure();
    comultiply_coords(&s.identity_coords(), g.psi())
        .map_second(g.matrix())
        .scale(real(1.0 / g.delta_sq()))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IndicatorReport {
    /// `max_x ‖A(x) − δ² (ψ ⊗ 1)(x · ε)‖` over canonical units.
    pub reconstruction: f64,
    /// `‖ε # ε − ε‖`.
    pub idempotency: f64,
    /// `‖(σ_{i/2} ⊗ 1)(ε) − ((σ_{i/2} ⊗ 1)(ε))^†‖`.
    pub modular_self_adjointness: f64,
}

impl IndicatorReport {
    pub fn max(&self) -> f64 {
        self.reconstruction
            .max(self.idempotency)
            .max(self.modular_self_adjointness)
    }
}

pub fn indicator_properties(g: &QuantumGraph) -> IndicatorReport {
    let eps = edge_indicator(g);
    let rebuilt = indicator_adjacency(&eps, g.psi());
    let reconstruction = (0..g.dim())
        .map(|q| frobenius_col(&(g.matrix().column(q) - rebuilt.column(q))))
        .fold(0.0, f64::max);
    let idempotency = sharp(&eps, &eps).expect("same structure").sub(&eps).norm();
    IndicatorReport {
        reconstruction,
        idempotency,
        modular_self_adjointness: modular_self_adjoint_residual(&eps, g.psi()),
    }
}

fn frobenius_col(v: &CVector) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `‖(σ_{i/2} ⊗ 1)(ξ) − ((σ_{i/2} ⊗ 1)(ξ))^†‖`.
pub fn modular_self_adjoint_residual(xi: &TensorElement, psi: &DeltaState) -> f64 {
    let twisted = modular_first_leg(xi, psi, 0.5);
    twisted.sub(&twisted.star()).norm()
}

/// Matrix of `x ↦ δ² (ψ ⊗ 1)(x · ξ)`, with no validation of `ξ`.
pub(crate) fn indicator_adjacency(xi: &TensorElement, psi: &DeltaState) -> CMatrix {
    let s = psi.structure();
    let n = s.dim();
    let f = psi.functional();
    let c = xi.coeffs();
    let mut m = CMatrix::zeros(n, n);
    // (ψ ⊗ 1)(e_q · ξ)[t] = Σ_p ψ(e_q e_p) C[p, t]
    for q in 0..n {
        for p in 0..n {
            if let Some(r) = s.product(q, p) {
                if f[r] == ZERO {
                    continue;
                }
                for t in 0..n {
                    m[(t, q)] += f[r] * c[(p, t)];
                }
            }
        }
    }
    m * real(psi.delta_sq())
}

/// `A_ξ(x) = δ² (ψ ⊗ 1)(x · ξ)` for a `#`-idempotent, modular self-adjoint `ξ`.
pub fn adjacency_from_indicator(xi: &TensorElement, psi: &DeltaState) -> Result<LinearMapOnB> {
    adjacency_from_indicator_with_tolerance(xi, psi, tolerance::THEOREM)
}

pub fn adjacency_from_indicator_with_tolerance(
    xi: &TensorElement,
    psi: &DeltaState,
    tol: f64,
) -> Result<LinearMapOnB> {
    if xi.structure() != psi.structure() {
        return Err(Error::ShapeMismatch(
            "indicator and state live on different algebras".into(),
        ));
    }
    let residual = sharp(xi, xi)?.sub(xi).norm();
    if !(residual <= tol) {
        return Err(Error::NotIdempotent { residual });
    }
    let residual = modular_self_adjoint_residual(xi, psi);
    if !(residual <= tol) {
        return Err(Error::NotModularSelfAdjoint { residual });
    }
    LinearMapOnB::new(indicator_adjacency(xi, psi))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CpReport {
    pub completely_positive: bool,
    pub hermitian: bool,
    pub min_eigenvalue: f64,
    pub max_abs_eigenvalue: f64,
}

/// Choi matrix of `A` restricted to the block pair `(a, b)`:
/// `H[(i, r), (j, s)] = A(e_ij^{(a)})^{(b)}_{rs}`.
pub fn choi_block(structure: &BlockStructure, a: &LinearMapOnB, from: usize, to: usize) -> CMatrix {
    let (na, nb) = (structure.block_size(from), structure.block_size(to));
    CMatrix::from_fn(na * nb, na * nb, |row, col| {
        let (i, r) = (row / nb, row % nb);
        let (j, s) = (col / nb, col % nb);
        a.matrix()[(structure.index(to, r, s), structure.index(from, i, j))]
    })
}

/// Choi positivity, blockwise over all block pairs.
pub fn is_completely_positive(psi: &DeltaState, a: &LinearMapOnB) -> Result<CpReport> {
    let s = psi.structure();
    s.check_dim(a.dim(), "map")?;
    let mut hermitian = true;
    let mut min_eigenvalue = f64::INFINITY;
    let mut max_abs: f64 = 0.0;
    for from in 0..s.num_blocks() {
        for to in 0..s.num_blocks() {
            let h = choi_block(s, a, from, to);
            let scale = frobenius(&h).max(1.0);
            if frobenius(&(&h - h.adjoint())) > tolerance::THEOREM * scale {
                hermitian = false;
            }
            let (values, _) = hermitian_eigen(&h);
            for v in values {
                min_eigenvalue = min_eigenvalue.min(v);
                max_abs = max_abs.max(v.abs());
            }
        }
    }
    let completely_positive = hermitian && min_eigenvalue >= -tolerance::CHOI_RELATIVE * max_abs;
    Ok(CpReport {
        completely_positive,
        hermitian,
        min_eigenvalue,
        max_abs_eigenvalue: max_abs,
    })
}

/// The modular criterion: `A` is completely positive iff
/// `(σ_{i/2} ⊗ 1)(ε_G)` is self-adjoint.
pub fn cp_by_modular_criterion(g: &QuantumGraph, tol: f64) -> bool {
    modular_self_adjoint_residual(&edge_indicator(g), g.psi()) <= tol
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SourcesSinks {
    pub sources: Vec<usize>,
    pub sinks: Vec<usize>,
}

/// Blocks of `B` contained in `ker A` (sources) or orthogonal to the range
/// of `A` (sinks).
pub fn quantum_sources_sinks(g: &QuantumGraph) -> SourcesSinks {
    quantum_sources_sinks_with_tolerance(g, tolerance::THEOREM)
}

pub fn quantum_sources_sinks_with_tolerance(g: &QuantumGraph, tol: f64) -> SourcesSinks {
    let s = g.structure();
    let m = g.matrix();
    let mut out = SourcesSinks::default();
    for a in 0..s.num_blocks() {
        let r = s.block_range(a);
        let cols = m.columns(r.start, r.len());
        if frobenius(&cols.into_owned()) <= tol {
            out.sources.push(a);
        }
        let rows = m.rows(r.start, r.len());
        if frobenius(&rows.into_owned()) <= tol {
            out.sinks.push(a);
        }
    }
    out
}

/// Adjoint of `A` for the GNS inner product: `M^* = G^{-1} M^† G`.
pub fn adjoint_map(a: &LinearMapOnB, psi: &DeltaState) -> Result<LinearMapOnB> {
    psi.structure().check_dim(a.dim(), "map")?;
    let g = psi.gram_diagonal();
    let n = a.dim();
    let m = a.matrix();
    LinearMapOnB::new(CMatrix::from_fn(n, n, |p, q| {
        m[(q, p)].conj() * (g[q] / g[p])
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct HomomorphismReport {
    /// `max ‖A(xy) − A(x) A(y)‖` over pairs of canonical units.
    pub multiplicativity: f64,
    /// `max ‖(xy) · ε − x · ε · A(y)‖` over pairs of canonical units.
    pub indicator_shift: f64,
}

pub fn homomorphism_check(g: &QuantumGraph) -> Result<HomomorphismReport> {
    let cp = is_completely_positive(g.psi(), g.adjacency())?;
    if !cp.completely_positive {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: cp.min_eigenvalue,
        });
    }
    let s = g.structure();
    let n = s.dim();
    let m = g.matrix();
    let eps = edge_indicator(g);
    let mut report = HomomorphismReport {
        multiplicativity: 0.0,
        indicator_shift: 0.0,
    };
    for p in 0..n {
        let x = s.basis_coords(p);
        let ax = m * &x;
        let x_eps = s.left_multiplication(&x) * eps.coeffs();
        for q in 0..n {
            let y = s.basis_coords(q);
            let xy = s.multiply_coords(&x, &y);
            let ay = m * &y;
            let lhs = m * &xy;
            let rhs = s.multiply_coords(&ax, &ay);
            report.multiplicativity = report.multiplicativity.max(frobenius_col(&(lhs - rhs)));
            let shifted = s.left_multiplication(&xy) * eps.coeffs();
            let moved = &x_eps * s.right_multiplication(&ay).transpose();
            report.indicator_shift = report.indicator_shift.max(frobenius(&(shifted - moved)));
        }
    }
    Ok(report)
}

/// A linear map `θ: B_1 → B_2 ⊗ M_h`, given by the `h × h` coefficient of
/// every canonical unit of `B_2` in the image of every canonical unit of
/// `B_1`: `θ(e_p) = Σ_q e_q ⊗ images[p][q]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AmplifiedMap {
    h: usize,
    images: Vec<Vec<CMatrix>>,
}

impl AmplifiedMap {
    pub fn new(h: usize, images: Vec<Vec<CMatrix>>) -> Result<Self> {
        if h == 0 {
            return Err(Error::ShapeMismatch(
                "amplification h must be at least 1".into(),
            ));
        }
        let width = images.first().map(|v| v.len()).unwrap_or(0);
        for row in &images {
            if row.len() != width || row.iter().any(|c| c.nrows() != h || c.ncols() != h) {
                return Err(Error::ShapeMismatch("ragged amplified map images".into()));
            }
        }
        Ok(Self { h, images })
    }

    /// `θ = φ ⊗ 1` for a linear map `φ: B_1 → B_2` given as a coordinate matrix.
    pub fn from_matrix(matrix: &CMatrix) -> Self {
        let images = (0..matrix.ncols())
            .map(|p| {
                (0..matrix.nrows())
                    .map(|q| CMatrix::from_element(1, 1, matrix[(q, p)]))
                    .collect()
            })
            .collect();
        Self { h: 1, images }
    }

    pub fn h(&self) -> usize {
        self.h
    }

    pub fn images(&self) -> &[Vec<CMatrix>] {
        &self.images
    }

    fn apply(&self, x: &CVector) -> Vec<CMatrix> {
        let width = self.images.first().map(|v| v.len()).unwrap_or(0);
        let mut out = vec![CMatrix::zeros(self.h, self.h); width];
        for (p, c) in x.iter().enumerate() {
            if *c == ZERO {
                continue;
            }
            for (q, img) in self.images[p].iter().enumerate() {
                out[q] += img * *c;
            }
        }
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IsomorphismReport {
    pub multiplicativity: f64,
    pub involution: f64,
    pub unitality: f64,
    pub state_covariance: f64,
    pub adjacency_covariance: f64,
}

impl IsomorphismReport {
    pub fn homomorphism(&self) -> f64 {
        self.multiplicativity
            .max(self.involution)
            .max(self.unitality)
    }

    pub fn max(&self) -> f64 {
        self.homomorphism()
            .max(self.state_covariance)
            .max(self.adjacency_covariance)
    }
}

fn amplified_norm(v: &[CMatrix]) -> f64 {
    v.iter().map(|m| frobenius(m).powi(2)).sum::<f64>().sqrt()
}

fn amplified_sub(a: &[CMatrix], b: &[CMatrix]) -> Vec<CMatrix> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Residuals of the conditions making `θ` a quantum isomorphism witness:
/// unital `*`-homomorphism, `(ψ_2 ⊗ id) θ = ψ_1(·) 1` and
/// `(A_2 ⊗ id) θ = θ A_1`.
pub fn quantum_isomorphism_residual(
    g1: &QuantumGraph,
    g2: &QuantumGraph,
    theta: &AmplifiedMap,
) -> Result<IsomorphismReport> {
    let (s1, s2) = (g1.structure(), g2.structure());
    if theta.images.len() != s1.dim() || theta.images.iter().any(|r| r.len() != s2.dim()) {
        return Err(Error::ShapeMismatch(format!(
            "θ must have {}x{} image blocks",
            s1.dim(),
            s2.dim()
        )));
    }
    let h = theta.h;
    let product = |x: &[CMatrix], y: &[CMatrix]| {
        let mut out = vec![CMatrix::zeros(h, h); s2.dim()];
        for (q, xq) in x.iter().enumerate() {
            for (r, yr) in y.iter().enumerate() {
                if let Some(t) = s2.product(q, r) {
                    out[t] += xq * yr;
                }
            }
        }
        out
    };
    let mut report = IsomorphismReport {
        multiplicativity: 0.0,
        involution: 0.0,
        unitality: 0.0,
        state_covariance: 0.0,
        adjacency_covariance: 0.0,
    };
    let f2 = g2.psi().functional();
    let f1 = g1.psi().functional();
    for p in 0..s1.dim() {
        let tp = &theta.images[p];
        for p2 in 0..s1.dim() {
            let lhs = match s1.product(p, p2) {
                Some(r) => theta.images[r].clone(),
                None => vec![CMatrix::zeros(h, h); s2.dim()],
            };
            let rhs = product(tp, &theta.images[p2]);
            report.multiplicativity = report
                .multiplicativity
                .max(amplified_norm(&amplified_sub(&lhs, &rhs)));
        }
        let star_image = &theta.images[s1.adjoint_index(p)];
        let mut adj = vec![CMatrix::zeros(h, h); s2.dim()];
        for (q, c) in tp.iter().enumerate() {
            adj[s2.adjoint_index(q)] = c.adjoint();
        }
        report.involution = report
            .involution
            .max(amplified_norm(&amplified_sub(star_image, &adj)));

        let mut state = CMatrix::identity(h, h) * (-f1[p]);
        for (q, c) in tp.iter().enumerate() {
            state += c * f2[q];
        }
        report.state_covariance = report.state_covariance.max(frobenius(&state));

        let mut lhs = vec![CMatrix::zeros(h, h); s2.dim()];
        for (q, c) in tp.iter().enumerate() {
            for (r, slot) in lhs.iter_mut().enumerate() {
                let coeff = g2.matrix()[(r, q)];
                if coeff != ZERO {
                    *slot += c * coeff;
                }
            }
        }
        let rhs = theta.apply(&g1.matrix().column(p).into_owned());
        report.adjacency_covariance = report
            .adjacency_covariance
            .max(amplified_norm(&amplified_sub(&lhs, &rhs)));
    }
    let unit = theta.apply(&s1.identity_coords());
    let mut expected = vec![CMatrix::zeros(h, h); s2.dim()];
    for q in s2.diagonal_units() {
        expected[q] = CMatrix::identity(h, h);
    }
    report.unitality = amplified_norm(&amplified_sub(&unit, &expected));
    Ok(report)
}
