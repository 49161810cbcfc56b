//! Interior tensor powers, the truncated Fock module and its creation
//! operators.

use std::collections::BTreeMap;
use std::ops::Range;

use serde::Serialize;

use crate::correspondence::{
    algebra_correspondence, build_edge_correspondence, Ambient, Correspondence, EdgeCorrespondence,
    Spanning,
};
use crate::error::{Error, Result};
use crate::graph::{quantum_sources_sinks, QuantumGraph};
use crate::linalg::{frobenius, kron, pseudo_inverse, real, CMatrix, CVector, ZERO};
use crate::relations::CkFamily;
use crate::space::AlgebraElement;
use crate::tolerance;

/// `X ⊗_B Y` with `<ξ₁ ⊗ η₁, ξ₂ ⊗ η₂>_B = <η₁, <ξ₁, ξ₂>_B · η₂>_B`, and the
/// residual of the balancing relation `ξ · b ⊗ η = ξ ⊗ b · η`.
pub fn interior_tensor_with_residual(
    x: &Correspondence,
    y: &Correspondence,
) -> Result<(Correspondence, f64)> {
    if x.psi() != y.psi() {
        return Err(Error::MismatchedBase);
    }
    let psi = x.psi();
    let n = psi.structure().dim();
    let (nx, ny) = (x.dim(), y.dim());
    let m = nx * ny;
    let inner: Vec<CMatrix> = (0..n)
        .map(|s| {
            let mut acc = CMatrix::zeros(m, m);
            for p in 0..n {
                let gx = x.inner_tensor(p);
                if frobenius(gx) == 0.0 {
                    continue;
                }
                acc += kron(gx, &(y.inner_tensor(s) * y.left_unit(p)));
            }
            acc
        })
        .collect();
    let ix = CMatrix::identity(nx, nx);
    let iy = CMatrix::identity(ny, ny);
    let left: Vec<CMatrix> = (0..n).map(|p| kron(x.left_unit(p), &iy)).collect();
    let right: Vec<CMatrix> = (0..n).map(|p| kron(&ix, y.right_unit(p))).collect();
    let balance: Vec<CMatrix> = (0..n)
        .map(|b| kron(x.right_unit(b), &iy) - kron(&ix, y.left_unit(b)))
        .collect();
    let f = psi.functional();
    let mut metric = CMatrix::zeros(m, m);
    for (s, g) in inner.iter().enumerate() {
        if f[s] != ZERO {
            metric += g * f[s];
        }
    }
    let module = Correspondence::from_spanning(
        psi,
        Spanning {
            ambient: Ambient::Abstract,
            vectors: CMatrix::identity(m, m),
            metric,
            inner,
            left,
            right,
        },
    );
    let residual = balance
        .iter()
        .map(|d| frobenius(&(module.spanning_coords() * d)))
        .fold(0.0, f64::max);
    Ok((module, residual))
}

pub fn interior_tensor(x: &Correspondence, y: &Correspondence) -> Result<Correspondence> {
    interior_tensor_with_residual(x, y).map(|(m, _)| m)
}

/// An operator on `⊕_n E^{⊗n}`, stored as blocks between levels.
#[derive(Clone, Debug, PartialEq)]
pub struct FockOperator {
    dims: Vec<usize>,
    /// `(row level, column level) → block`.
    blocks: BTreeMap<(usize, usize), CMatrix>,
}

impl FockOperator {
    pub fn zero(dims: &[usize]) -> Self {
        Self {
            dims: dims.to_vec(),
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(dims: &[usize]) -> Self {
        let blocks = dims
            .iter()
            .enumerate()
            .map(|(l, &d)| ((l, l), CMatrix::identity(d, d)))
            .collect();
        Self {
            dims: dims.to_vec(),
            blocks,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block(&self, row: usize, col: usize) -> Option<&CMatrix> {
        self.blocks.get(&(row, col))
    }

    fn insert(&mut self, row: usize, col: usize, m: CMatrix) {
        match self.blocks.get_mut(&(row, col)) {
            Some(b) => *b += m,
            None => {
                self.blocks.insert((row, col), m);
            }
        }
    }

    pub fn adjoint(&self) -> Self {
        let blocks = self
            .blocks
            .iter()
            .map(|(&(r, c), m)| ((c, r), m.adjoint()))
            .collect();
        Self {
            dims: self.dims.clone(),
            blocks,
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.dims);
        for (&(r, k), a) in &self.blocks {
            for (&(k2, c), b) in other.blocks.range((k, 0)..(k + 1, 0)) {
                debug_assert_eq!(k, k2);
                out.insert(r, c, a * b);
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(r, c), m) in &other.blocks {
            out.insert(r, c, m.clone());
        }
        out
    }

    pub fn scale(&self, c: crate::linalg::C64) -> Self {
        let blocks = self.blocks.iter().map(|(&k, m)| (k, m * c)).collect();
        Self {
            dims: self.dims.clone(),
            blocks,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(real(-1.0)))
    }

    /// Frobenius norm of the columns belonging to the given levels.
    pub fn norm_on(&self, levels: Range<usize>) -> f64 {
        self.blocks
            .iter()
            .filter(|((_, c), _)| levels.contains(c))
            .map(|(_, m)| frobenius(m).powi(2))
            .sum::<f64>()
            .sqrt()
    }

    pub fn norm(&self) -> f64 {
        self.norm_on(0..self.dims.len())
    }

    pub fn to_dense(&self) -> CMatrix {
        let offsets = offsets(&self.dims);
        let total: usize = self.dims.iter().sum();
        let mut out = CMatrix::zeros(total, total);
        for (&(r, c), m) in &self.blocks {
            let mut view = out.view_mut((offsets[r], offsets[c]), (m.nrows(), m.ncols()));
            view += m;
        }
        out
    }
}

fn offsets(dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .scan(0, |acc, &d| {
            let o = *acc;
            *acc += d;
            Some(o)
        })
        .collect()
}

/// Levels `E^{⊗0}, …, E^{⊗N}` of the Fock module with `E^{⊗0} = B`.
#[derive(Clone, Debug)]
pub struct FockTruncation {
    pub edge: EdgeCorrespondence,
    pub levels: Vec<Correspondence>,
    /// `creation[i]` is `T(e_i)` for the `i`-th basis vector of `E`.
    pub creation: Vec<FockOperator>,
    pub balanced_residuals: Vec<f64>,
    /// Columns `u_j` with `Σ_j θ_{u_j, e_j} = 1` on `E`.
    frame: CMatrix,
    frame_residual: f64,
}

impl FockTruncation {
    pub fn graph(&self) -> &QuantumGraph {
        &self.edge.graph
    }

    pub fn top(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level_dims(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.dim()).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.level_dims().iter().sum()
    }

    /// `‖Σ_j θ_{u_j, e_j} − 1‖` for the frame used by [`Self::compact_coefficients`].
    pub fn frame_residual(&self) -> f64 {
        self.frame_residual
    }

    /// `T(ξ) = Σ_i ξ_i T(e_i)`.
    pub fn create(&self, xi: &CVector) -> FockOperator {
        let dims = self.level_dims();
        let mut op = FockOperator::zero(&dims);
        for n in 0..self.top() {
            let d = dims[n];
            let p = self.levels[n + 1].spanning_coords();
            let mut block = CMatrix::zeros(dims[n + 1], d);
            for (i, c) in xi.iter().enumerate() {
                if *c != ZERO {
                    block += p.columns(i * d, d) * *c;
                }
            }
            op.insert(n + 1, n, block);
        }
        op
    }

    /// `π(x)`, the diagonal left action.
    pub fn pi(&self, x: &CVector) -> FockOperator {
        let dims = self.level_dims();
        let mut out = FockOperator::zero(&dims);
        for (l, level) in self.levels.iter().enumerate() {
            out.insert(l, l, level.left_action_coords(x));
        }
        out
    }

    /// `ψ_t(Σ_ij c_ij θ_{e_i, e_j}) = Σ_ij c_ij T(e_i) T(e_j)^*`.
    pub fn psi_t(&self, coeffs: &CMatrix) -> FockOperator {
        let dims = self.level_dims();
        let n = coeffs.nrows();
        let mut out = FockOperator::zero(&dims);
        for l in 1..=self.top() {
            let d = dims[l - 1];
            let p = self.levels[l].spanning_coords();
            let mut y = CMatrix::zeros(dims[l], n * d);
            for b in 0..n {
                let mut col = y.columns_mut(b * d, d);
                for a in 0..n {
                    let c = coeffs[(a, b)];
                    if c != ZERO {
                        col += p.columns(a * d, d) * c;
                    }
                }
            }
            out.insert(l, l, y * p.adjoint());
        }
        out
    }

    /// Scalar coefficients `c` with `φ(x) = Σ_ij c_ij θ_{e_i, e_j}` on `E`,
    /// read off from the frame, and the frame residual.
    pub fn compact_coefficients(&self, x: &CVector) -> (CMatrix, f64) {
        (
            self.edge.module.left_action_coords(x) * &self.frame,
            self.frame_residual,
        )
    }

    /// `S(x) = δ^{-1} T(x · ε)`.
    pub fn canonical_generator(&self, x: &AlgebraElement) -> Result<FockOperator> {
        let one = AlgebraElement::identity(self.graph().structure());
        let v = self.edge.vector(x, &one)?;
        Ok(self
            .create(&v.coords)
            .scale(real(1.0 / self.graph().delta_sq().sqrt())))
    }

    /// The canonical family as dense matrices, restricted to the interior
    /// levels `1..N-1` as its window.
    pub fn canonical_family(&self) -> Result<CkFamily> {
        let st = self.graph().structure();
        let images = (0..st.dim())
            .map(|p| {
                self.canonical_generator(&self.graph().basis(p))
                    .map(|s| s.to_dense())
            })
            .collect::<Result<Vec<_>>>()?;
        let offs = offsets(&self.level_dims());
        let window = offs[1]..offs[self.top()];
        CkFamily::new(self.total_dim(), images)?.with_window(window)
    }
}

/// `u_j = Σ_i e_i · c_ij` with `c = G^+` the pseudo-inverse of the Gram
/// matrix `G_ij = <e_i, e_j>_B` in `M_n(B)`.
fn module_frame(e: &Correspondence) -> (CMatrix, f64) {
    let st = e.structure();
    let n = e.dim();
    let mut c = vec![vec![CVector::zeros(st.dim()); n]; n];
    for a in 0..st.num_blocks() {
        let k = st.block_size(a);
        let mut g = CMatrix::zeros(n * k, n * k);
        for r in 0..k {
            for s in 0..k {
                let gq = e.inner_tensor(st.index(a, r, s));
                for i in 0..n {
                    for j in 0..n {
                        g[(i * k + r, j * k + s)] = gq[(i, j)];
                    }
                }
            }
        }
        let inv = pseudo_inverse(&g, tolerance::GRAM_CUTOFF);
        for i in 0..n {
            for j in 0..n {
                for r in 0..k {
                    for s in 0..k {
                        c[i][j][st.index(a, r, s)] = inv[(i * k + r, j * k + s)];
                    }
                }
            }
        }
    }
    let mut u = CMatrix::zeros(n, n);
    for j in 0..n {
        for (i, row) in c.iter().enumerate() {
            for (q, coef) in row[j].iter().enumerate() {
                if *coef != ZERO {
                    let mut col = u.column_mut(j);
                    col += e.right_unit(q).column(i) * *coef;
                }
            }
        }
    }
    // Σ_j θ_{u_j, e_j}(e_l) = Σ_q R_q U G_q[:, l]
    let mut id = CMatrix::zeros(n, n);
    for q in 0..st.dim() {
        id += e.right_unit(q) * &u * e.inner_tensor(q);
    }
    let residual = frobenius(&(id - CMatrix::identity(n, n)));
    (u, residual)
}

/// Builds `F_N = ⊕_{n ≤ N} E^{⊗n}` with creation operators that vanish on
/// the top level.
pub fn build_fock(g: &QuantumGraph, levels: usize) -> Result<FockTruncation> {
    if levels < 1 {
        return Err(Error::InvalidLevels);
    }
    let sources = quantum_sources_sinks(g).sources;
    if !sources.is_empty() {
        return Err(Error::HasQuantumSource { blocks: sources });
    }
    let edge = build_edge_correspondence(g)?;
    let e = edge.module.clone();
    let ne = e.dim();
    let mut stack = vec![algebra_correspondence(g.psi(), None)];
    let mut balanced = Vec::new();
    let mut total = stack[0].dim();
    for _ in 0..levels {
        let prev = stack.last().expect("level 0 exists");
        let coordinates = total + ne * prev.dim();
        if coordinates > tolerance::FOCK_BUDGET {
            return Err(Error::BudgetExceeded {
                coordinates,
                limit: tolerance::FOCK_BUDGET,
            });
        }
        let (next, residual) = interior_tensor_with_residual(&e, prev)?;
        total += next.dim();
        balanced.push(residual);
        stack.push(next);
    }
    let (frame, frame_residual) = module_frame(&e);
    let mut f = FockTruncation {
        edge,
        levels: stack,
        creation: Vec::new(),
        balanced_residuals: balanced,
        frame,
        frame_residual,
    };
    f.creation = (0..ne)
        .map(|i| {
            let mut v = CVector::zeros(ne);
            v[i] = real(1.0);
            f.create(&v)
        })
        .collect();
    Ok(f)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RepresentationReport {
    /// `max ‖T(e_i)^* T(e_j) − π(<e_i, e_j>_B)‖` on levels `0..N-1`.
    pub toeplitz: f64,
    /// `max ‖π(x) − ψ_t(φ(x))‖` on levels `1..N-1`.
    pub covariance: f64,
    /// `max ‖π(x)‖` restricted to the vacuum level, where `ψ_t` vanishes.
    pub vacuum_defect: f64,
    /// Unitality of `π` on every level.
    pub unital: f64,
    /// Multiplicativity and involution of `π` on every level.
    pub homomorphism: f64,
    /// `max ‖T(e_i)^*(η ⊗ ζ) − <e_i, η>_B · ζ‖` on levels `≥ 1`, together
    /// with `T(e_i)^*` on the vacuum.
    pub annihilation: f64,
    /// `‖Σ_j θ_{u_j, e_j} − 1‖` for the frame behind `ψ_t(φ(x))`.
    pub frame: f64,
}

impl RepresentationReport {
    pub fn interior_max(&self) -> f64 {
        self.toeplitz.max(self.covariance)
    }
}

pub fn representation_residuals(f: &FockTruncation) -> RepresentationReport {
    let st = f.graph().structure();
    let n = st.dim();
    let e = &f.edge.module;
    let ne = e.dim();
    let top = f.top();
    let dims = f.level_dims();

    // T(e_i)^* T(e_j) on level l is the (i, j) block of P_{l+1}^* P_{l+1};
    // its columns are T(e_i)^* applied to e_j ⊗ ζ.
    let mut toeplitz: f64 = 0.0;
    let mut annihilation: f64 = 0.0;
    for l in 0..top {
        let d = dims[l];
        let p = f.levels[l + 1].spanning_coords();
        let level = &f.levels[l];
        for i in 0..ne {
            let h = p.columns(i * d, d).adjoint() * p;
            for j in 0..ne {
                let b = CVector::from_iterator(n, (0..n).map(|q| e.inner_tensor(q)[(i, j)]));
                let r = frobenius(&(h.columns(j * d, d) - level.left_action_coords(&b)));
                toeplitz = toeplitz.max(r);
                annihilation = annihilation.max(r);
            }
        }
    }
    for t in &f.creation {
        annihilation = annihilation.max(t.adjoint().norm_on(0..1));
    }

    let mut covariance: f64 = 0.0;
    let mut vacuum_defect: f64 = 0.0;
    let mut homomorphism: f64 = 0.0;
    let pis: Vec<FockOperator> = (0..n).map(|p| f.pi(&st.basis_coords(p))).collect();
    for p in 0..n {
        let (coeffs, _) = f.compact_coefficients(&st.basis_coords(p));
        let d = pis[p].sub(&f.psi_t(&coeffs));
        covariance = covariance.max(d.norm_on(1..top));
        vacuum_defect = vacuum_defect.max(d.norm_on(0..1));
        for q in 0..n {
            let prod = match st.product(p, q) {
                Some(r) => pis[r].clone(),
                None => FockOperator::zero(&dims),
            };
            homomorphism = homomorphism.max(pis[p].mul(&pis[q]).sub(&prod).norm());
        }
        let star = pis[st.adjoint_index(p)].sub(&pis[p].adjoint());
        homomorphism = homomorphism.max(star.norm());
    }
    let unital = f
        .pi(&st.identity_coords())
        .sub(&FockOperator::identity(&dims))
        .norm();
    RepresentationReport {
        toeplitz,
        covariance,
        vacuum_defect,
        unital,
        homomorphism,
        annihilation,
        frame: f.frame_residual(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FockRelationReport {
    /// LQCK1-LQCK3 for `S(x) = δ^{-1} T(x · ε)` on levels `1..N-1`.
    pub lqck: [f64; 3],
    /// `μ(T^* ⊗ T) = δ^{-2} π A m` on levels `1..N-1`.
    pub toeplitz_product: f64,
    /// `μ(T ⊗ T^*) m^* = ψ_t φ` on levels `1..N-1`.
    pub toeplitz_coproduct: f64,
    /// LQCK3 evaluated with the vacuum included.
    pub lqck3_with_vacuum: f64,
}

impl FockRelationReport {
    pub fn interior_max(&self) -> f64 {
        self.lqck
            .iter()
            .copied()
            .fold(self.toeplitz_product.max(self.toeplitz_coproduct), f64::max)
    }
}

pub fn lqck_fock_residuals(g: &QuantumGraph, levels: usize) -> Result<FockRelationReport> {
    let f = build_fock(g, levels)?;
    Ok(fock_relations(&f))
}

pub fn fock_relations(f: &FockTruncation) -> FockRelationReport {
    let g = f.graph();
    let st = g.structure();
    let psi = g.psi();
    let n = st.dim();
    let top = f.top();
    let inner = 1..top;
    let d2 = g.delta_sq();
    let inv_d2 = real(1.0 / d2);
    let one = AlgebraElement::identity(st);
    let t: Vec<FockOperator> = (0..n)
        .map(|p| f.create(&f.edge.vector(&g.basis(p), &one).expect("shapes").coords))
        .collect();
    let delta_inv = real(1.0 / d2.sqrt());
    let s: Vec<FockOperator> = t.iter().map(|x| x.scale(delta_inv)).collect();
    let s_adj: Vec<FockOperator> = s.iter().map(|x| x.adjoint()).collect();
    // s^*(e_p) = s(e_p^*)^*
    let s_star = |p: usize| &s_adj[st.adjoint_index(p)];
    // Φ(e_ij) = Σ_k w_k^{-1} s(e_ik) s(e_jk)^*
    let phi: Vec<FockOperator> = st
        .units()
        .iter()
        .map(|u| {
            let mut acc = FockOperator::zero(&f.level_dims());
            for k in 0..st.block_size(u.block) {
                let a = st.index(u.block, u.row, k);
                let b = st.index(u.block, u.col, k);
                acc = acc.add(
                    &s[a]
                        .mul(&s_adj[b])
                        .scale(real(1.0 / psi.weight(u.block, k))),
                );
            }
            acc
        })
        .collect();
    let combine = |ops: &[FockOperator], v: &CVector| {
        let mut acc = FockOperator::zero(&f.level_dims());
        for (op, c) in ops.iter().zip(v.iter()) {
            if *c != ZERO {
                acc = acc.add(&op.scale(*c));
            }
        }
        acc
    };
    let pis: Vec<FockOperator> = (0..n).map(|p| f.pi(&st.basis_coords(p))).collect();
    let mut lqck = [0.0f64; 3];
    let mut toeplitz_product: f64 = 0.0;
    for p in 0..n {
        for q in 0..n {
            let prod = st.product(p, q);
            let mut l1 = phi[p].mul(&s[q]);
            let mut l2 = s_star(p).mul(&s[q]);
            let t_prod = t[st.adjoint_index(p)].adjoint().mul(&t[q]);
            let mut tp = t_prod;
            if let Some(r) = prod {
                l1 = l1.sub(&s[r].scale(inv_d2));
                let a = g.matrix().column(r).into_owned();
                l2 = l2.sub(&combine(&phi, &a).scale(inv_d2));
                tp = tp.sub(&combine(&pis, &a).scale(inv_d2));
            }
            lqck[0] = lqck[0].max(l1.norm_on(inner.clone()));
            lqck[1] = lqck[1].max(l2.norm_on(inner.clone()));
            toeplitz_product = toeplitz_product.max(tp.norm_on(inner.clone()));
        }
    }
    let mut unit = FockOperator::identity(&f.level_dims()).scale(-inv_d2);
    for p in st.diagonal_units() {
        unit = unit.add(&phi[p]);
    }
    lqck[2] = unit.norm_on(inner.clone());
    let lqck3_with_vacuum = unit.norm_on(0..top);
    let mut toeplitz_coproduct: f64 = 0.0;
    for p in 0..n {
        // μ(T ⊗ T^*) m^*(e_p) = δ² Φ(e_p)
        let (coeffs, _) = f.compact_coefficients(&st.basis_coords(p));
        let d = phi[p].scale(real(d2)).sub(&f.psi_t(&coeffs));
        toeplitz_coproduct = toeplitz_coproduct.max(d.norm_on(inner.clone()));
    }
    FockRelationReport {
        lqck,
        toeplitz_product,
        toeplitz_coproduct,
        lqck3_with_vacuum,
    }
}
