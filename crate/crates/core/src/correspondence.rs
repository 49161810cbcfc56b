//! Finite-dimensional C*-correspondences over `B`, the quantum edge
//! correspondence `E_G = B · ε_G · B` and the model `B ⊗_A B`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{
    adjoint_map, edge_indicator, indicator_adjacency, is_completely_positive, schur_residual,
    LinearMapOnB, QuantumGraph,
};
use crate::linalg::{
    frobenius, hermitian_eigen, null_space, pseudo_inverse, rank, real, CMatrix, CVector, C64, ZERO,
};
use crate::space::{AlgebraElement, BlockStructure, DeltaState};
use crate::tensor::TensorElement;
use crate::tolerance;

/// Where the basis vectors of a correspondence live.
#[derive(Clone, Debug, PartialEq)]
pub enum Ambient {
    /// Coefficient arrays of `B ⊗ B`, flattened row-major (`p * dim + q`).
    Tensor,
    /// Coordinates of `B`.
    Algebra,
    /// Coordinates over the spanning set the module was built from.
    Abstract,
}

/// A vector of a correspondence, in its orthonormal basis.
#[derive(Clone, Debug, PartialEq)]
pub struct CorrVector {
    pub coords: CVector,
}

impl CorrVector {
    pub fn new(coords: CVector) -> Self {
        Self { coords }
    }
}

/// A right Hilbert `B`-module with a left action of `B`, stored over a basis
/// orthonormal for the scalar product `ψ(<·,·>_B)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Correspondence {
    psi: DeltaState,
    ambient: Ambient,
    /// Basis vectors as columns, in ambient coordinates.
    basis: CMatrix,
    /// Hermitian form of `ψ(<·,·>_B)` on ambient coordinates.
    metric: CMatrix,
    /// Basis coordinates of the spanning vectors (columns).
    projection: CMatrix,
    /// Spanning-set coefficients of the basis vectors (columns).
    lift: CMatrix,
    /// `inner[s][i, j]` is the coefficient of `e_s` in `<v_i, v_j>_B`.
    inner: Vec<CMatrix>,
    /// Matrices of `v ↦ e_p · v`.
    left: Vec<CMatrix>,
    /// Matrices of `v ↦ v · e_p`.
    right: Vec<CMatrix>,
}

/// Raw data of a spanning family before the Gram kernel is removed.
pub(crate) struct Spanning {
    pub ambient: Ambient,
    /// Spanning vectors as columns in ambient coordinates.
    pub vectors: CMatrix,
    pub metric: CMatrix,
    pub inner: Vec<CMatrix>,
    pub left: Vec<CMatrix>,
    pub right: Vec<CMatrix>,
}

impl Correspondence {
    /// Quotients a spanning family by the kernel of its scalar Gram matrix.
    pub(crate) fn from_spanning(psi: &DeltaState, span: Spanning) -> Self {
        let f = psi.functional();
        let m = span.vectors.ncols();
        let mut gram = CMatrix::zeros(m, m);
        for (s, g) in span.inner.iter().enumerate() {
            if f[s] != ZERO {
                gram += g * f[s];
            }
        }
        // Rescale spanning vectors to unit norm before diagonalizing; this
        // keeps the spectrum well conditioned when weights vary a lot.
        let diag_max = (0..m).map(|i| gram[(i, i)].re).fold(0.0, f64::max);
        let scale: Vec<f64> = (0..m)
            .map(|i| {
                let d = gram[(i, i)].re;
                if d > tolerance::GRAM_CUTOFF * tolerance::GRAM_CUTOFF * diag_max {
                    1.0 / d.sqrt()
                } else {
                    0.0
                }
            })
            .collect();
        let scaled = CMatrix::from_fn(m, m, |i, j| gram[(i, j)] * (scale[i] * scale[j]));
        let (values, vectors) = hermitian_eigen(&scaled);
        let top = values.first().copied().unwrap_or(0.0);
        let keep: Vec<usize> = (0..m)
            .filter(|&i| top > 0.0 && values[i] > tolerance::GRAM_CUTOFF * top)
            .collect();
        let n = keep.len();
        let mut v = CMatrix::zeros(m, n);
        let mut p = CMatrix::zeros(n, m);
        for (k, &i) in keep.iter().enumerate() {
            let l = values[i].sqrt();
            for r in 0..m {
                let u = vectors[(r, i)];
                v[(r, k)] = u * (scale[r] / l);
                if scale[r] > 0.0 {
                    p[(k, r)] = u.conj() * (l / scale[r]);
                }
            }
        }
        let vt = v.adjoint();
        let inner = span.inner.iter().map(|x| &vt * x * &v).collect();
        let left = span.left.iter().map(|x| &p * x * &v).collect();
        let right = span.right.iter().map(|x| &p * x * &v).collect();
        Self {
            psi: psi.clone(),
            ambient: span.ambient,
            basis: &span.vectors * &v,
            metric: span.metric,
            projection: p,
            lift: v,
            inner,
            left,
            right,
        }
    }

    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn psi(&self) -> &DeltaState {
        &self.psi
    }

    pub fn structure(&self) -> &BlockStructure {
        self.psi.structure()
    }

    pub fn ambient(&self) -> &Ambient {
        &self.ambient
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    /// Basis coordinates of the spanning vectors used to build the module.
    pub fn spanning_coords(&self) -> &CMatrix {
        &self.projection
    }

    pub fn inner_tensor(&self, s: usize) -> &CMatrix {
        &self.inner[s]
    }

    pub fn left_unit(&self, p: usize) -> &CMatrix {
        &self.left[p]
    }

    pub fn right_unit(&self, p: usize) -> &CMatrix {
        &self.right[p]
    }

    fn combine(ops: &[CMatrix], x: &CVector, n: usize) -> CMatrix {
        let mut out = CMatrix::zeros(n, n);
        for (op, c) in ops.iter().zip(x.iter()) {
            if *c != ZERO {
                out += op * *c;
            }
        }
        out
    }

    /// Matrix of `v ↦ x · v`.
    pub fn left_action(&self, x: &AlgebraElement) -> Result<CMatrix> {
        x.check(self.structure())?;
        Ok(Self::combine(&self.left, &x.coords(), self.dim()))
    }

    pub(crate) fn left_action_coords(&self, x: &CVector) -> CMatrix {
        Self::combine(&self.left, x, self.dim())
    }

    /// Matrix of `v ↦ v · y`.
    pub fn right_action(&self, y: &AlgebraElement) -> Result<CMatrix> {
        y.check(self.structure())?;
        Ok(Self::combine(&self.right, &y.coords(), self.dim()))
    }

    pub(crate) fn inner_coords(&self, xi: &CVector, eta: &CVector) -> CVector {
        let adj = xi.adjoint();
        CVector::from_iterator(
            self.inner.len(),
            self.inner.iter().map(|g| (&adj * g * eta)[(0, 0)]),
        )
    }

    /// `<ξ, η>_B`.
    pub fn b_inner(&self, xi: &CorrVector, eta: &CorrVector) -> Result<AlgebraElement> {
        for v in [xi, eta] {
            if v.coords.len() != self.dim() {
                return Err(Error::ShapeMismatch(format!(
                    "vector of length {} in a module of dimension {}",
                    v.coords.len(),
                    self.dim()
                )));
            }
        }
        AlgebraElement::from_coords(
            self.structure(),
            &self.inner_coords(&xi.coords, &eta.coords),
        )
    }

    /// Basis coordinates of an ambient vector lying in the module.
    pub fn coords_of_ambient(&self, v: &CVector) -> Result<CorrVector> {
        if v.len() != self.metric.nrows() {
            return Err(Error::ShapeMismatch(format!(
                "ambient vector of length {}, expected {}",
                v.len(),
                self.metric.nrows()
            )));
        }
        Ok(CorrVector::new(self.basis.adjoint() * &self.metric * v))
    }

    /// `ψ(<v_i, v_j>_B)`, the identity up to rounding.
    pub fn scalar_gram(&self) -> CMatrix {
        let f = self.psi.functional();
        Self::combine(&self.inner, &f, self.dim())
    }

    /// Residuals of the structural identities of a correspondence:
    /// commuting actions, right linearity of the inner product and
    /// positivity of `<ξ, ξ>_B` on basis vectors.
    pub fn consistency(&self) -> ConsistencyReport {
        let st = self.structure();
        let n = self.dim();
        let mut commute: f64 = 0.0;
        let mut right_linear: f64 = 0.0;
        for p in 0..st.dim() {
            for q in 0..st.dim() {
                commute = commute.max(frobenius(
                    &(&self.left[p] * &self.right[q] - &self.right[q] * &self.left[p]),
                ));
            }
            // <v_i, v_j · e_p>_B = <v_i, v_j>_B e_p
            for s in 0..st.dim() {
                let lhs = &self.inner[s] * &self.right[p];
                let mut rhs = CMatrix::zeros(n, n);
                for r in 0..st.dim() {
                    if st.product(r, p) == Some(s) {
                        rhs += &self.inner[r];
                    }
                }
                right_linear = right_linear.max(frobenius(&(lhs - rhs)));
            }
        }
        let mut min_eigenvalue = f64::INFINITY;
        for i in 0..n {
            let e = CVector::from_fn(n, |k, _| if k == i { real(1.0) } else { ZERO });
            let x = AlgebraElement::from_coords(st, &self.inner_coords(&e, &e)).expect("dimension");
            for b in x.blocks() {
                let (values, _) = hermitian_eigen(b);
                min_eigenvalue = min_eigenvalue.min(values.last().copied().unwrap_or(0.0));
            }
        }
        ConsistencyReport {
            commute,
            right_linear,
            min_inner_eigenvalue: min_eigenvalue,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ConsistencyReport {
    pub commute: f64,
    pub right_linear: f64,
    pub min_inner_eigenvalue: f64,
}

/// Spanning data of `B · ξ · B` inside `B ⊗ B` with the inner product
/// `<a ⊗ b, c ⊗ d>_B = ψ(a^* c) b^* d`.
fn cyclic_tensor_span(xi: &TensorElement, psi: &DeltaState) -> Spanning {
    let st = psi.structure();
    let n = st.dim();
    let g = psi.gram_diagonal();
    // x_p = e_p · ξ
    let left: Vec<CMatrix> = (0..n)
        .map(|p| st.left_multiplication(&st.basis_coords(p)) * xi.coeffs())
        .collect();
    // <e_p ξ, e_r ξ>_B as coordinates, for every pair (p, r).
    let mut pair_inner = vec![vec![CVector::zeros(n); n]; n];
    for p in 0..n {
        let wc: CMatrix = CMatrix::from_fn(n, n, |a, b| left[p][(a, b)].conj() * g[a]);
        for r in 0..n {
            let m = wc.transpose() * &left[r];
            let mut v = CVector::zeros(n);
            for q in 0..n {
                for q2 in 0..n {
                    if m[(q, q2)] == ZERO {
                        continue;
                    }
                    if let Some(s) = st.product(st.adjoint_index(q), q2) {
                        v[s] += m[(q, q2)];
                    }
                }
            }
            pair_inner[p][r] = v;
        }
    }
    let m = n * n;
    let idx = |p: usize, q: usize| p * n + q;
    let mut vectors = CMatrix::zeros(m, m);
    for p in 0..n {
        for q in 0..n {
            let t = &left[p] * st.right_multiplication(&st.basis_coords(q)).transpose();
            for a in 0..n {
                for b in 0..n {
                    vectors[(idx(a, b), idx(p, q))] = t[(a, b)];
                }
            }
        }
    }
    // <e_p ξ e_q, e_r ξ e_t>_B = e_q^* <e_p ξ, e_r ξ>_B e_t
    let mut inner = vec![CMatrix::zeros(m, m); n];
    for p in 0..n {
        for r in 0..n {
            let v = &pair_inner[p][r];
            for (s, c) in v.iter().enumerate() {
                if *c == ZERO {
                    continue;
                }
                for q in 0..n {
                    let Some(left_prod) = st.product(st.adjoint_index(q), s) else {
                        continue;
                    };
                    for t in 0..n {
                        if let Some(out) = st.product(left_prod, t) {
                            inner[out][(idx(p, q), idx(r, t))] += *c;
                        }
                    }
                }
            }
        }
    }
    let (left_span, right_span) = span_actions(st);
    let metric = CMatrix::from_diagonal(&CVector::from_iterator(
        m,
        (0..m).map(|k| real(g[k / n] * g[k % n])),
    ));
    Spanning {
        ambient: Ambient::Tensor,
        vectors,
        metric,
        inner,
        left: left_span,
        right: right_span,
    }
}

/// Actions of the canonical units on a spanning family indexed by pairs
/// `(p, q)` representing `e_p · ξ · e_q`.
fn span_actions(st: &BlockStructure) -> (Vec<CMatrix>, Vec<CMatrix>) {
    let n = st.dim();
    let m = n * n;
    let mut left = vec![CMatrix::zeros(m, m); n];
    let mut right = vec![CMatrix::zeros(m, m); n];
    for r in 0..n {
        for p in 0..n {
            for q in 0..n {
                if let Some(rp) = st.product(r, p) {
                    left[r][(rp * n + q, p * n + q)] = real(1.0);
                }
                if let Some(qr) = st.product(q, r) {
                    right[r][(p * n + qr, p * n + q)] = real(1.0);
                }
            }
        }
    }
    (left, right)
}

/// The quantum edge correspondence together with its generator `ε_G`.
#[derive(Clone, Debug, PartialEq)]
pub struct EdgeCorrespondence {
    pub graph: QuantumGraph,
    pub module: Correspondence,
    pub indicator: TensorElement,
    pub generator: CorrVector,
}

impl EdgeCorrespondence {
    /// Coordinates of `x · ε · y`.
    pub fn vector(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<CorrVector> {
        let lx = self.module.left_action(x)?;
        let ry = self.module.right_action(y)?;
        Ok(CorrVector::new(lx * ry * &self.generator.coords))
    }

    pub fn dim(&self) -> usize {
        self.module.dim()
    }
}

fn require_cp(g: &QuantumGraph) -> Result<()> {
    let cp = is_completely_positive(g.psi(), g.adjacency())?;
    if !cp.completely_positive {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: cp.min_eigenvalue,
        });
    }
    Ok(())
}

/// `E_G = span{x · ε_G · y}` with the inner product inherited from `B ⊗_ψ B`.
pub fn build_edge_correspondence(g: &QuantumGraph) -> Result<EdgeCorrespondence> {
    require_cp(g)?;
    let indicator = edge_indicator(g);
    let module = Correspondence::from_spanning(g.psi(), cyclic_tensor_span(&indicator, g.psi()));
    let flat = flatten(&indicator);
    let generator = module.coords_of_ambient(&flat)?;
    Ok(EdgeCorrespondence {
        graph: g.clone(),
        module,
        indicator,
        generator,
    })
}

fn flatten(t: &TensorElement) -> CVector {
    let c = t.coeffs();
    let n = c.nrows();
    CVector::from_iterator(n * n, (0..n * n).map(|k| c[(k / n, k % n)]))
}

/// `<ξ, η>_B` in a correspondence.
pub fn b_inner(
    xi: &CorrVector,
    eta: &CorrVector,
    module: &Correspondence,
) -> Result<AlgebraElement> {
    module.b_inner(xi, eta)
}

/// `B` as a correspondence over itself, `<x, y>_B = x^* y`, with the left
/// action twisted by a map `α` (the identity gives the trivial
/// correspondence).
pub fn algebra_correspondence(psi: &DeltaState, alpha: Option<&LinearMapOnB>) -> Correspondence {
    let st = psi.structure();
    let n = st.dim();
    let mut inner = vec![CMatrix::zeros(n, n); n];
    for p in 0..n {
        for q in 0..n {
            if let Some(s) = st.product(st.adjoint_index(p), q) {
                inner[s][(p, q)] = real(1.0);
            }
        }
    }
    let left = (0..n)
        .map(|p| {
            let x = match alpha {
                Some(a) => a.apply_coords(&st.basis_coords(p)),
                None => st.basis_coords(p),
            };
            st.left_multiplication(&x)
        })
        .collect();
    let right = (0..n)
        .map(|p| st.right_multiplication(&st.basis_coords(p)))
        .collect();
    let g = psi.gram_diagonal();
    let metric = CMatrix::from_diagonal(&CVector::from_iterator(n, g.iter().map(|&w| real(w))));
    Correspondence::from_spanning(
        psi,
        Spanning {
            ambient: Ambient::Algebra,
            vectors: CMatrix::identity(n, n),
            metric,
            inner,
            left,
            right,
        },
    )
}

/// Coordinates of an element of `B` in a correspondence built by
/// [`algebra_correspondence`].
pub fn algebra_vector(module: &Correspondence, x: &AlgebraElement) -> Result<CorrVector> {
    if module.ambient() != &Ambient::Algebra {
        return Err(Error::ShapeMismatch(
            "module is not realized inside B".into(),
        ));
    }
    x.check(module.structure())?;
    module.coords_of_ambient(&x.coords())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LeftKernelReport {
    /// Dimension of `{x : x · ξ = 0 for all ξ}`.
    pub kernel_dim: usize,
    /// Dimension of `(B A^*(B) B)^⊥`.
    pub predicted_dim: usize,
    /// Blocks outside the ideal generated by the range of `A^*`.
    pub predicted_blocks: Vec<usize>,
    /// Frobenius distance between the orthogonal projectors onto the two
    /// subspaces, in ψ-orthonormal coordinates.
    pub distance: f64,
}

/// The kernel of the left action, computed directly and from the range of
/// the adjoint adjacency matrix.
pub fn left_kernel(g: &QuantumGraph) -> Result<LeftKernelReport> {
    let edge = build_edge_correspondence(g)?;
    Ok(left_kernel_of(&edge))
}

pub fn left_kernel_of(edge: &EdgeCorrespondence) -> LeftKernelReport {
    let g = &edge.graph;
    let st = g.structure();
    let n = st.dim();
    let e = &edge.module;
    let k = e.dim();
    let w: Vec<f64> = g.psi().gram_diagonal();
    // rows (β, i): coefficient i of e_p · v_β, in ψ-orthonormal coordinates of x.
    let mut stacked = CMatrix::zeros(k * k, n);
    for p in 0..n {
        let scale = real(1.0 / w[p].sqrt());
        for beta in 0..k {
            for i in 0..k {
                stacked[(beta * k + i, p)] = e.left_unit(p)[(i, beta)] * scale;
            }
        }
    }
    let kernel = if k == 0 {
        CMatrix::identity(n, n)
    } else {
        null_space(&stacked, 1e-10)
    };
    let adj = adjoint_map(g.adjacency(), g.psi()).expect("shapes agree");
    let mut predicted_blocks = Vec::new();
    let mut predicted = CMatrix::zeros(n, n);
    for a in 0..st.num_blocks() {
        let r = st.block_range(a);
        if frobenius(&adj.matrix().rows(r.start, r.len()).into_owned()) <= tolerance::THEOREM {
            predicted_blocks.push(a);
            for p in r {
                predicted[(p, p)] = real(1.0);
            }
        }
    }
    let direct = &kernel * kernel.adjoint();
    LeftKernelReport {
        kernel_dim: kernel.ncols(),
        predicted_dim: predicted_blocks
            .iter()
            .map(|&a| st.block_size(a).pow(2))
            .sum(),
        predicted_blocks,
        distance: frobenius(&(direct - predicted)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FullnessReport {
    /// Blocks of `B · A(B) · B`.
    pub blocks: Vec<usize>,
    /// Blocks reached by the inner products `<ξ, η>_B` of the module.
    pub module_blocks: Vec<usize>,
    pub full: bool,
}

pub fn fullness_ideal(g: &QuantumGraph) -> Result<FullnessReport> {
    let edge = build_edge_correspondence(g)?;
    Ok(fullness_of(&edge))
}

pub fn fullness_of(edge: &EdgeCorrespondence) -> FullnessReport {
    let g = &edge.graph;
    let st = g.structure();
    let mut blocks = Vec::new();
    let mut module_blocks = Vec::new();
    for a in 0..st.num_blocks() {
        let r = st.block_range(a);
        if frobenius(&g.matrix().rows(r.start, r.len()).into_owned()) > tolerance::THEOREM {
            blocks.push(a);
        }
        if r.clone()
            .any(|s| frobenius(edge.module.inner_tensor(s)) > tolerance::THEOREM)
        {
            module_blocks.push(a);
        }
    }
    FullnessReport {
        full: blocks.len() == st.num_blocks(),
        blocks,
        module_blocks,
    }
}

/// `θ_{u, v}` as a matrix on the module: `ζ ↦ u · <v, ζ>_B`.
pub fn rank_one_operator(module: &Correspondence, u: &CVector, v: &CVector) -> CMatrix {
    let n = module.dim();
    let mut out = CMatrix::zeros(n, n);
    let vadj = v.adjoint();
    for s in 0..module.structure().dim() {
        let row = &vadj * module.inner_tensor(s);
        let col = module.right_unit(s) * u;
        out += col * row;
    }
    out
}

/// `max ‖f_ij · ξ − Σ_k θ_{f_ik ε, f_jk ε}(ξ)‖` over adapted units and
/// basis vectors `ξ`.
pub fn compact_decomposition_residual(g: &QuantumGraph) -> Result<f64> {
    let edge = build_edge_correspondence(g)?;
    Ok(compact_residual_of(&edge))
}

pub fn compact_residual_of(edge: &EdgeCorrespondence) -> f64 {
    let g = &edge.graph;
    let st = g.structure();
    let psi = g.psi();
    let e = &edge.module;
    let one = AlgebraElement::identity(st);
    let f = |p: usize| {
        AlgebraElement::from_coords(st, &(st.basis_coords(p) * real(psi.adapted_scale(p))))
            .expect("basis")
    };
    let f_eps: Vec<CVector> = (0..st.dim())
        .map(|p| edge.vector(&f(p), &one).expect("shapes").coords)
        .collect();
    let mut worst: f64 = 0.0;
    for (p, u) in st.units().iter().enumerate() {
        let mut m = e.left_action(&f(p)).expect("shapes");
        for k in 0..st.block_size(u.block) {
            let ik = st.index(u.block, u.row, k);
            let jk = st.index(u.block, u.col, k);
            m -= rank_one_operator(e, &f_eps[ik], &f_eps[jk]);
        }
        for col in m.column_iter() {
            worst = worst.max(col.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt());
        }
    }
    worst
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CpIsomorphismReport {
    pub edge_dim: usize,
    pub tensor_dim: usize,
    /// `‖J Φ_E − Φ_X‖` for the spanning images, zero iff the assignment
    /// `x · ε · y ↦ δ^{-1} x ⊗ y` is well defined and linear.
    pub well_defined: f64,
    pub inner_product: f64,
    pub left_action: f64,
    pub right_action: f64,
}

impl CpIsomorphismReport {
    pub fn max(&self) -> f64 {
        self.well_defined
            .max(self.inner_product)
            .max(self.left_action)
            .max(self.right_action)
    }
}

/// `B ⊗_A B` with `<a ⊗ b, c ⊗ d>_B = b^* A(a^* c) d`.
pub fn tensor_over_adjacency(g: &QuantumGraph) -> Result<Correspondence> {
    require_cp(g)?;
    let st = g.structure();
    let n = st.dim();
    let m = n * n;
    let mut inner = vec![CMatrix::zeros(m, m); n];
    for p in 0..n {
        for p2 in 0..n {
            let Some(r) = st.product(st.adjoint_index(p), p2) else {
                continue;
            };
            let image = g.matrix().column(r);
            for (s, c) in image.iter().enumerate() {
                if *c == ZERO {
                    continue;
                }
                for q in 0..n {
                    let Some(left) = st.product(st.adjoint_index(q), s) else {
                        continue;
                    };
                    for q2 in 0..n {
                        if let Some(out) = st.product(left, q2) {
                            inner[out][(p * n + q, p2 * n + q2)] += *c;
                        }
                    }
                }
            }
        }
    }
    let (left, right) = span_actions(st);
    let mut gram = CMatrix::zeros(m, m);
    let f = g.psi().functional();
    for (s, gs) in inner.iter().enumerate() {
        gram += gs * f[s];
    }
    Ok(Correspondence::from_spanning(
        g.psi(),
        Spanning {
            ambient: Ambient::Abstract,
            vectors: CMatrix::identity(m, m),
            metric: gram,
            inner,
            left,
            right,
        },
    ))
}

fn max_over<'a>(
    it: impl Iterator<Item = (&'a CMatrix, &'a CMatrix)>,
    f: impl Fn(&CMatrix, &CMatrix) -> f64,
) -> f64 {
    it.map(|(a, b)| f(a, b)).fold(0.0, f64::max)
}

/// Linear map between two modules sending spanning vector `k` of `from`
/// to spanning vector `k` of `to`, with residuals of the isomorphism
/// conditions.
fn spanning_map(from: &CMatrix, to: &CMatrix) -> (CMatrix, f64) {
    let j = to * pseudo_inverse(from, 1e-10);
    let residual = frobenius(&(&j * from - to));
    (j, residual)
}

fn intertwining(j: &CMatrix, from: &Correspondence, to: &Correspondence) -> (f64, f64, f64) {
    let n = from.structure().dim();
    let inner = (0..n)
        .map(|s| frobenius(&(j.adjoint() * to.inner_tensor(s) * j - from.inner_tensor(s))))
        .fold(0.0, f64::max);
    let left = max_over(from.left.iter().zip(&to.left), |a, b| {
        frobenius(&(j * a - b * j))
    });
    let right = max_over(from.right.iter().zip(&to.right), |a, b| {
        frobenius(&(j * a - b * j))
    });
    (inner, left, right)
}

/// `E_G ≅ B ⊗_A B` through `x · ε · y ↦ δ^{-1} x ⊗ y`.
pub fn cp_correspondence(g: &QuantumGraph) -> Result<(Correspondence, CpIsomorphismReport)> {
    let edge = build_edge_correspondence(g)?;
    let x = tensor_over_adjacency(g)?;
    let report = cp_isomorphism_of(&edge, &x);
    Ok((x, report))
}

pub fn cp_isomorphism_of(edge: &EdgeCorrespondence, x: &Correspondence) -> CpIsomorphismReport {
    let from = edge.module.spanning_coords();
    let to = x.spanning_coords() * real(1.0 / edge.graph.delta_sq().sqrt());
    // Both modules are spanned by the same index set (p, q), so the basis
    // of E_G lifts to spanning coefficients that can be pushed forward.
    let j = &to * &edge.module.lift;
    let well_defined = frobenius(&(&j * from - &to));
    let (inner_product, left_action, right_action) = intertwining(&j, &edge.module, x);
    CpIsomorphismReport {
        edge_dim: edge.dim(),
        tensor_dim: x.dim(),
        well_defined,
        inner_product,
        left_action,
        right_action,
    }
}

/// Input to the recognition procedure.
#[derive(Clone, Copy, Debug)]
pub enum CyclicVector<'a> {
    /// `ξ ∈ B ⊗ B`, generating `B · ξ · B` with the inner product of `B ⊗_ψ B`.
    Ambient(&'a TensorElement),
    /// A vector of a given correspondence.
    Module(&'a Correspondence, &'a CorrVector),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Recognition {
    pub graph: QuantumGraph,
    pub edge: EdgeCorrespondence,
    /// Matrix sending module coordinates to `E_G` coordinates, with
    /// `x · ξ · y ↦ x · ε · y`.
    pub isomorphism: CMatrix,
    pub residual: f64,
}

/// Recovers the quantum graph `A(x) = δ² <ξ, x · ξ>_B` of a cyclic vector
/// and the isomorphism of its module onto the edge correspondence.
pub fn recognize(input: CyclicVector, psi: &DeltaState) -> Result<Recognition> {
    recognize_with_tolerance(input, psi, tolerance::THEOREM)
}

pub fn recognize_with_tolerance(
    input: CyclicVector,
    psi: &DeltaState,
    tol: f64,
) -> Result<Recognition> {
    let st = psi.structure();
    let n = st.dim();
    let d2 = psi.delta_sq();
    let (module, generator, a) = match input {
        CyclicVector::Ambient(xi) => {
            if xi.structure() != st {
                return Err(Error::MismatchedBase);
            }
            let module = Correspondence::from_spanning(psi, cyclic_tensor_span(xi, psi));
            let generator = module.coords_of_ambient(&flatten(xi))?;
            (module, generator, indicator_adjacency(xi, psi))
        }
        CyclicVector::Module(module, xi) => {
            if module.psi() != psi {
                return Err(Error::MismatchedBase);
            }
            if xi.coords.len() != module.dim() {
                return Err(Error::ShapeMismatch(
                    "cyclic vector does not match the module".into(),
                ));
            }
            let mut a = CMatrix::zeros(n, n);
            for q in 0..n {
                let v = module.left_unit(q) * &xi.coords;
                a.set_column(q, &(module.inner_coords(&xi.coords, &v) * real(d2)));
            }
            (module.clone(), xi.clone(), a)
        }
    };
    let images = orbit(&module, &generator.coords);
    let r = rank(&images, 1e-10);
    if r != module.dim() || r == 0 {
        return Err(Error::NotGenerating {
            rank: r,
            dim: module.dim(),
        });
    }
    let a = LinearMapOnB::new(a)?;
    let residual = schur_residual(psi, &a)?;
    if residual > tol {
        return Err(Error::NotQuantumAdjacency { residual });
    }
    let graph = QuantumGraph::with_tolerance(psi.clone(), a, tol)?;
    let edge = build_edge_correspondence(&graph)?;
    let target = orbit(&edge.module, &edge.generator.coords);
    let (j, well_defined) = spanning_map(&images, &target);
    let (inner, left, right) = intertwining(&j, &module, &edge.module);
    let residual = well_defined.max(inner).max(left).max(right);
    if residual > tol {
        return Err(Error::NotIsomorphic { residual });
    }
    Ok(Recognition {
        graph,
        edge,
        isomorphism: j,
        residual,
    })
}

/// Columns `e_p · ξ · e_q` for all pairs of canonical units.
fn orbit(module: &Correspondence, xi: &CVector) -> CMatrix {
    let n = module.structure().dim();
    let mut out = CMatrix::zeros(module.dim(), n * n);
    for p in 0..n {
        let lx = module.left_unit(p) * xi;
        for q in 0..n {
            out.set_column(p * n + q, &(module.right_unit(q) * &lx));
        }
    }
    out
}

/// The scalar `ψ(<ξ, ξ>_B)`, the squared norm of a module vector.
pub fn scalar_norm_sq(module: &Correspondence, xi: &CorrVector) -> C64 {
    module
        .psi()
        .apply_coords(&module.inner_coords(&xi.coords, &xi.coords))
}
