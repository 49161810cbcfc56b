//! Quantum Cuntz-Krieger relation systems for concrete operator families.

use std::ops::Range;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::QuantumGraph;
use crate::linalg::{frobenius, real, CMatrix, ZERO};
use crate::tolerance;

/// A linear map `s: B → M_k(C)`, given by the images of the canonical units.
///
/// An optional column window restricts every relation to a subspace of the
/// domain of the operators, which is how truncated Fock families are
/// compared on their interior levels.
#[derive(Clone, Debug, PartialEq)]
pub struct CkFamily {
    k: usize,
    images: Vec<CMatrix>,
    window: Option<Range<usize>>,
}

impl CkFamily {
    pub fn new(k: usize, images: Vec<CMatrix>) -> Result<Self> {
        if let Some(m) = images.iter().find(|m| m.nrows() != k || m.ncols() != k) {
            return Err(Error::ShapeMismatch(format!(
                "family image is {}x{}, expected {k}x{k}",
                m.nrows(),
                m.ncols()
            )));
        }
        Ok(Self {
            k,
            images,
            window: None,
        })
    }

    pub fn zero(dim: usize, k: usize) -> Self {
        Self {
            k,
            images: vec![CMatrix::zeros(k, k); dim],
            window: None,
        }
    }

    pub fn with_window(mut self, window: Range<usize>) -> Result<Self> {
        if window.start > window.end || window.end > self.k {
            return Err(Error::ShapeMismatch(format!(
                "window {window:?} outside 0..{}",
                self.k
            )));
        }
        self.window = Some(window);
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn image(&self, p: usize) -> &CMatrix {
        &self.images[p]
    }

    pub fn window(&self) -> Option<Range<usize>> {
        self.window.clone()
    }

    /// `s(f_p)` for the adapted unit `f_p`.
    pub fn adapted_image(&self, p: usize, g: &QuantumGraph) -> CMatrix {
        &self.images[p] * real(g.psi().adapted_scale(p))
    }

    fn check(&self, g: &QuantumGraph) -> Result<()> {
        g.structure().check_dim(self.images.len(), "family")
    }

    fn domain(&self) -> Range<usize> {
        self.window.clone().unwrap_or(0..self.k)
    }

    fn compress(&self, m: &CMatrix) -> f64 {
        let w = self.domain();
        frobenius(&m.columns(w.start, w.len()).into_owned())
    }
}

/// Precomputed operators shared by the relation evaluations.
struct Operators<'a> {
    g: &'a QuantumGraph,
    s: &'a [CMatrix],
    /// `Φ(e_p) = μ(s ⊗ s^*) m^*(e_p)`.
    phi: Vec<CMatrix>,
    /// `Φ(A(e_p))`.
    phi_a: Vec<CMatrix>,
}

impl<'a> Operators<'a> {
    fn new(family: &'a CkFamily, g: &'a QuantumGraph) -> Self {
        let st = g.structure();
        let psi = g.psi();
        let k = family.k;
        let s = &family.images[..];
        let phi: Vec<CMatrix> = st
            .units()
            .iter()
            .map(|u| {
                let mut acc = CMatrix::zeros(k, k);
                for l in 0..st.block_size(u.block) {
                    let a = &s[st.index(u.block, u.row, l)];
                    let b = &s[st.index(u.block, u.col, l)];
                    acc += a * b.adjoint() * real(1.0 / psi.weight(u.block, l));
                }
                acc
            })
            .collect();
        let phi_a = (0..st.dim())
            .map(|p| combine(&phi, g.matrix().column(p).iter().copied(), k))
            .collect();
        Self { g, s, phi, phi_a }
    }

    fn s_star(&self, p: usize) -> CMatrix {
        self.s[self.g.structure().adjoint_index(p)].adjoint()
    }
}

fn combine(ops: &[CMatrix], coeffs: impl Iterator<Item = crate::linalg::C64>, k: usize) -> CMatrix {
    let mut acc = CMatrix::zeros(k, k);
    for (op, c) in ops.iter().zip(coeffs) {
        if c != ZERO {
            acc += op * c;
        }
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RelationResiduals {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
}

impl RelationResiduals {
    pub fn max(&self) -> f64 {
        self.r1.max(self.r2).max(self.r3)
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.r1, self.r2, self.r3]
    }
}

/// Residuals of QCK1-QCK3, each maximized over the canonical units of `B`.
pub fn qck_residuals(family: &CkFamily, g: &QuantumGraph) -> Result<RelationResiduals> {
    family.check(g)?;
    let ops = Operators::new(family, g);
    let st = g.structure();
    let psi = g.psi();
    let mut out = RelationResiduals {
        r1: 0.0,
        r2: 0.0,
        r3: 0.0,
    };
    for (p, u) in st.units().iter().enumerate() {
        let mut first = -ops.s[p].clone();
        let mut second = -ops.phi_a[p].clone();
        for l in 0..st.block_size(u.block) {
            let w = real(1.0 / psi.weight(u.block, l));
            let left = st.index(u.block, u.row, l);
            let right = st.index(u.block, l, u.col);
            first += &ops.phi[left] * &ops.s[right] * w;
            second += ops.s_star(left) * &ops.s[right] * w;
        }
        out.r1 = out.r1.max(family.compress(&first));
        out.r2 = out.r2.max(family.compress(&second));
    }
    out.r3 = unit_relation(&ops, family);
    Ok(out)
}

/// `‖Φ(1) − δ^{-2} 1‖`, shared by QCK3 and LQCK3.
fn unit_relation(ops: &Operators, family: &CkFamily) -> f64 {
    let st = ops.g.structure();
    let mut m = CMatrix::identity(family.k, family.k) * real(-1.0 / ops.g.delta_sq());
    for p in st.diagonal_units() {
        m += &ops.phi[p];
    }
    family.compress(&m)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalReport {
    /// LQCK1-LQCK3 on pairs of canonical units.
    pub lqck: RelationResiduals,
    /// The explicit adapted-unit relations QCP1-QCP3 on all index tuples.
    pub qcp: RelationResiduals,
    /// Largest discrepancy between corresponding operators of the two
    /// evaluations after rescaling to adapted units.
    pub cross_agreement: f64,
}

impl LocalReport {
    pub fn max(&self) -> f64 {
        self.lqck.max().max(self.qcp.max())
    }
}

/// Residuals of the local relations, evaluated both coordinate-free and in
/// adapted units.
pub fn lqck_residuals(family: &CkFamily, g: &QuantumGraph) -> Result<LocalReport> {
    family.check(g)?;
    let ops = Operators::new(family, g);
    let st = g.structure();
    let psi = g.psi();
    let n = st.dim();
    let d2 = g.delta_sq();
    let inv_d2 = real(1.0 / d2);
    let c: Vec<f64> = (0..n).map(|p| psi.adapted_scale(p)).collect();
    let adapted_a = g.adjacency().adapted_coefficients(psi);
    let f: Vec<CMatrix> = (0..n).map(|p| family.adapted_image(p, g)).collect();
    let f_star: Vec<CMatrix> = f.iter().map(|m| m.adjoint()).collect();

    let mut lqck = RelationResiduals {
        r1: 0.0,
        r2: 0.0,
        r3: 0.0,
    };
    let mut qcp = RelationResiduals {
        r1: 0.0,
        r2: 0.0,
        r3: 0.0,
    };
    let mut cross: f64 = 0.0;

    // Σ_n s_{ln} s_{mn}^* for adapted units, i.e. Φ(f_lm).
    let phi_f: Vec<CMatrix> = st
        .units()
        .iter()
        .map(|u| {
            let mut acc = CMatrix::zeros(family.k, family.k);
            for t in 0..st.block_size(u.block) {
                acc += &f[st.index(u.block, u.row, t)] * &f_star[st.index(u.block, u.col, t)];
            }
            acc
        })
        .collect();

    for p in 0..n {
        let up = st.unit(p);
        for q in 0..n {
            // LQCK1(e_p, e_q) = Φ(e_p) s(e_q) − δ^{-2} s(e_p e_q)
            let mut l1 = &ops.phi[p] * &ops.s[q];
            if let Some(r) = st.product(p, q) {
                l1 -= &ops.s[r] * inv_d2;
            }
            // LQCK2(e_p, e_q) = s^*(e_p) s(e_q) − δ^{-2} Φ(A(e_p e_q))
            let mut l2 = ops.s_star(p) * &ops.s[q];
            if let Some(r) = st.product(p, q) {
                l2 -= &ops.phi_a[r] * inv_d2;
            }
            lqck.r1 = lqck.r1.max(family.compress(&l1));
            lqck.r2 = lqck.r2.max(family.compress(&l2));

            let uq = st.unit(q);
            // QCP1 at (a, i, j; b, r, s) with p = (a, i, j), q = (b, r, s).
            let mut q1 = &phi_f[p] * &f[q];
            if up.block == uq.block && up.col == uq.row {
                let target = st.index(up.block, up.row, uq.col);
                q1 -= &f[target] * real(1.0 / (d2 * psi.weight(up.block, up.col)));
            }
            qcp.r1 = qcp.r1.max(family.compress(&q1));
            cross = cross.max(frobenius(&(&q1 - &l1 * real(c[p] * c[q]))));

            // QCP2 at (a, i, j; b, r, s) pairs with LQCK2(f_ji, f_rs).
            let mut q2 = &f_star[p] * &f[q];
            if up.block == uq.block && up.row == uq.row {
                let js = st.index(up.block, up.col, uq.col);
                let scale = real(1.0 / (d2 * psi.weight(up.block, up.row)));
                for (lm, phi) in phi_f.iter().enumerate() {
                    let coeff = adapted_a[(lm, js)];
                    if coeff != ZERO {
                        q2 -= phi * (coeff * scale);
                    }
                }
            }
            qcp.r2 = qcp.r2.max(family.compress(&q2));
            let ji = st.adjoint_index(p);
            let l2_ji = {
                let mut m = ops.s_star(ji) * &ops.s[q];
                if let Some(r) = st.product(ji, q) {
                    m -= &ops.phi_a[r] * inv_d2;
                }
                m
            };
            cross = cross.max(frobenius(&(&q2 - &l2_ji * real(c[ji] * c[q]))));
        }
    }

    lqck.r3 = unit_relation(&ops, family);
    // QCP3: Σ_c Σ_{l,m} ψ(e_ll^{(c)}) s_lm^{(c)} (s_lm^{(c)})^* = δ^{-2} 1
    let mut q3 = CMatrix::identity(family.k, family.k) * (-inv_d2);
    for (p, fp) in f.iter().enumerate() {
        q3 += fp * &f_star[p] * real(psi.row_weight(p));
    }
    qcp.r3 = family.compress(&q3);
    let mut l3 = CMatrix::identity(family.k, family.k) * (-inv_d2);
    for p in st.diagonal_units() {
        l3 += &ops.phi[p];
    }
    cross = cross.max(frobenius(&(q3 - l3)));
    Ok(LocalReport {
        lqck,
        qcp,
        cross_agreement: cross,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ClassicalReport {
    /// `max_i ‖S_i S_i^* S_i − S_i‖`.
    pub partial_isometry: f64,
    /// `max_i ‖S_i^* S_i − Σ_j A(j, i) S_j S_j^*‖` with `A(j, i)` the
    /// coefficient of `p_j` in `A(p_i)`.
    pub cuntz_krieger: f64,
    /// `‖Σ_i S_i S_i^* − 1‖`.
    pub range_sum: f64,
    /// QCK residuals of the family `s`.
    pub qck: RelationResiduals,
    /// Largest gap between each QCK residual and the matching
    /// Cuntz-Krieger residual divided by the vertex count.
    pub dictionary: f64,
}

impl ClassicalReport {
    pub fn max(&self) -> f64 {
        self.partial_isometry
            .max(self.cuntz_krieger)
            .max(self.range_sum)
    }
}

fn require_classical(g: &QuantumGraph) -> Result<usize> {
    let st = g.structure();
    if !st.is_commutative() {
        return Err(Error::NotClassical(format!(
            "blocks {:?} are not all of size one",
            st.sizes()
        )));
    }
    let n = st.dim();
    let uniform = 1.0 / n as f64;
    if g.psi()
        .weights()
        .iter()
        .flatten()
        .any(|w| (w - uniform).abs() > tolerance::ALGEBRAIC)
    {
        return Err(Error::NotClassical("state is not uniform".into()));
    }
    Ok(n)
}

/// Translates a family on a classical graph to `S_i = N s(e_i)` and checks
/// the Cuntz-Krieger relations alongside the QCK relations.
pub fn classical_reduction(g: &QuantumGraph, family: &CkFamily) -> Result<ClassicalReport> {
    let n = require_classical(g)?;
    family.check(g)?;
    let big: Vec<CMatrix> = family.images.iter().map(|m| m * real(n as f64)).collect();
    let k = family.k;
    let mut partial_isometry: f64 = 0.0;
    let mut cuntz_krieger: f64 = 0.0;
    let projections: Vec<CMatrix> = big.iter().map(|s| s * s.adjoint()).collect();
    for (i, s) in big.iter().enumerate() {
        partial_isometry = partial_isometry.max(family.compress(&(&projections[i] * s - s)));
        let mut m = s.adjoint() * s;
        for (j, proj) in projections.iter().enumerate() {
            let a = g.matrix()[(j, i)];
            if a != ZERO {
                m -= proj * a;
            }
        }
        cuntz_krieger = cuntz_krieger.max(family.compress(&m));
    }
    let mut sum = -CMatrix::identity(k, k);
    for proj in &projections {
        sum += proj;
    }
    let range_sum = family.compress(&sum);
    let qck = qck_residuals(family, g)?;
    let nf = n as f64;
    let dictionary = (qck.r1 - partial_isometry / nf)
        .abs()
        .max((qck.r2 - cuntz_krieger / nf).abs())
        .max((qck.r3 - range_sum / nf).abs());
    Ok(ClassicalReport {
        partial_isometry,
        cuntz_krieger,
        range_sum,
        qck,
        dictionary,
    })
}

/// The reverse dictionary `s(e_i) = S_i / N` for a Cuntz-Krieger family.
pub fn family_from_classical(g: &QuantumGraph, partial_isometries: &[CMatrix]) -> Result<CkFamily> {
    let n = require_classical(g)?;
    g.structure()
        .check_dim(partial_isometries.len(), "Cuntz-Krieger family")?;
    let k = partial_isometries.first().map(|m| m.nrows()).unwrap_or(0);
    CkFamily::new(
        k,
        partial_isometries
            .iter()
            .map(|m| m * real(1.0 / n as f64))
            .collect(),
    )
}
