//! Elements of `B ⊗ B` and the maps on them used throughout the crate.

use crate::error::Result;
use crate::linalg::{frobenius, real, CMatrix, CVector, C64, ZERO};
use crate::space::{AlgebraElement, BlockStructure, DeltaState};

/// `Σ C[p, q] e_p ⊗ e_q` over canonical units of `B`.
///
/// The coefficient of `e_ij^{(a)} ⊗ e_rs^{(b)}` lives at row `index(a,i,j)`
/// and column `index(b,r,s)`, so the `(a, b)` block-pair array is the
/// corresponding sub-matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct TensorElement {
    structure: BlockStructure,
    coeffs: CMatrix,
}

impl TensorElement {
    pub fn zeros(structure: &BlockStructure) -> Self {
        let n = structure.dim();
        Self {
            structure: structure.clone(),
            coeffs: CMatrix::zeros(n, n),
        }
    }

    pub fn from_coeffs(structure: &BlockStructure, coeffs: CMatrix) -> Result<Self> {
        structure.check_dim(coeffs.nrows(), "tensor first leg")?;
        structure.check_dim(coeffs.ncols(), "tensor second leg")?;
        Ok(Self {
            structure: structure.clone(),
            coeffs,
        })
    }

    /// `x ⊗ y`.
    pub fn simple(
        x: &AlgebraElement,
        y: &AlgebraElement,
        structure: &BlockStructure,
    ) -> Result<Self> {
        x.check(structure)?;
        y.check(structure)?;
        Ok(Self {
            structure: structure.clone(),
            coeffs: x.coords() * y.coords().transpose(),
        })
    }

    /// `1 ⊗ 1`.
    pub fn unit(structure: &BlockStructure) -> Self {
        let one = structure.identity_coords();
        Self {
            structure: structure.clone(),
            coeffs: &one * one.transpose(),
        }
    }

    pub fn structure(&self) -> &BlockStructure {
        &self.structure
    }

    pub fn coeffs(&self) -> &CMatrix {
        &self.coeffs
    }

    /// The coefficient array of the `(a, b)` block pair.
    pub fn pair_block(&self, a: usize, b: usize) -> CMatrix {
        let (ra, rb) = (self.structure.block_range(a), self.structure.block_range(b));
        self.coeffs
            .view((ra.start, rb.start), (ra.len(), rb.len()))
            .into_owned()
    }

    pub fn norm(&self) -> f64 {
        frobenius(&self.coeffs)
    }

    pub fn add(&self, other: &Self) -> Self {
        self.with(&self.coeffs + &other.coeffs)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.with(&self.coeffs - &other.coeffs)
    }

    pub fn scale(&self, c: C64) -> Self {
        self.with(&self.coeffs * c)
    }

    fn with(&self, coeffs: CMatrix) -> Self {
        Self {
            structure: self.structure.clone(),
            coeffs,
        }
    }

    /// `(x ⊗ 1) ξ`.
    pub fn left_mul(&self, x: &AlgebraElement) -> Result<Self> {
        x.check(&self.structure)?;
        Ok(self.with(self.structure.left_multiplication(&x.coords()) * &self.coeffs))
    }

    /// `ξ (1 ⊗ y)`.
    pub fn right_mul(&self, y: &AlgebraElement) -> Result<Self> {
        y.check(&self.structure)?;
        Ok(self.with(&self.coeffs * self.structure.right_multiplication(&y.coords()).transpose()))
    }

    /// `x · ξ · y`, the bimodule action on `B ⊗ B`.
    pub fn sandwich(&self, x: &AlgebraElement, y: &AlgebraElement) -> Result<Self> {
        self.left_mul(x)?.right_mul(y)
    }

    /// `(a ⊗ b)^† = a^* ⊗ b^*`, extended conjugate-linearly.
    pub fn star(&self) -> Self {
        let s = &self.structure;
        let n = s.dim();
        let mut out = CMatrix::zeros(n, n);
        for p in 0..n {
            for q in 0..n {
                out[(s.adjoint_index(p), s.adjoint_index(q))] = self.coeffs[(p, q)].conj();
            }
        }
        self.with(out)
    }

    /// Apply `f ⊗ g` with `f` and `g` given as matrices on coordinates.
    pub fn map_legs(&self, f: &CMatrix, g: &CMatrix) -> Self {
        self.with(f * &self.coeffs * g.transpose())
    }

    /// `(1 ⊗ g) ξ`.
    pub fn map_second(&self, g: &CMatrix) -> Self {
        self.with(&self.coeffs * g.transpose())
    }

    /// `(f ⊗ 1) ξ`.
    pub fn map_first(&self, f: &CMatrix) -> Self {
        self.with(f * &self.coeffs)
    }

    /// `(ψ ⊗ 1) ξ` as an element of `B`.
    pub fn slice_first(&self, psi: &DeltaState) -> AlgebraElement {
        let v = (psi.functional().transpose() * &self.coeffs).transpose();
        AlgebraElement::from_coords(&self.structure, &v).expect("dimension checked")
    }

    /// `(1 ⊗ ψ) ξ` as an element of `B`.
    pub fn slice_second(&self, psi: &DeltaState) -> AlgebraElement {
        let v = &self.coeffs * psi.functional();
        AlgebraElement::from_coords(&self.structure, &v).expect("dimension checked")
    }

    /// The multiplication map `m(a ⊗ b) = ab`.
    pub fn multiply(&self) -> AlgebraElement {
        let s = &self.structure;
        let n = s.dim();
        let mut v = CVector::zeros(n);
        for p in 0..n {
            for q in 0..n {
                let c = self.coeffs[(p, q)];
                if c == ZERO {
                    continue;
                }
                if let Some(r) = s.product(p, q) {
                    v[r] += c;
                }
            }
        }
        AlgebraElement::from_coords(s, &v).expect("dimension checked")
    }

    /// `<ξ, η>` for the product state `ψ ⊗ ψ`.
    pub fn inner(&self, other: &Self, psi: &DeltaState) -> C64 {
        let g = psi.gram_diagonal();
        let n = self.structure.dim();
        let mut acc = ZERO;
        for p in 0..n {
            for q in 0..n {
                acc += self.coeffs[(p, q)].conj() * other.coeffs[(p, q)] * (g[p] * g[q]);
            }
        }
        acc
    }
}

/// The comultiplication `m^*`, adjoint of `m` for the GNS inner products:
/// `m^*(e_ij^{(a)}) = Σ_k ψ(e_kk^{(a)})^{-1} e_ik^{(a)} ⊗ e_kj^{(a)}`.
pub fn comultiply(x: &AlgebraElement, psi: &DeltaState) -> Result<TensorElement> {
    let s = psi.structure();
    x.check(s)?;
    Ok(comultiply_coords(&x.coords(), psi))
}

pub(crate) fn comultiply_coords(x: &CVector, psi: &DeltaState) -> TensorElement {
    let s = psi.structure();
    let n = s.dim();
    let mut coeffs = CMatrix::zeros(n, n);
    for (p, u) in s.units().iter().enumerate() {
        if x[p] == ZERO {
            continue;
        }
        for k in 0..s.block_size(u.block) {
            let c = x[p] * real(1.0 / psi.weight(u.block, k));
            coeffs[(s.index(u.block, u.row, k), s.index(u.block, k, u.col))] += c;
        }
    }
    TensorElement {
        structure: s.clone(),
        coeffs,
    }
}

/// `(a ⊗ b) # (c ⊗ d) = (ac) ⊗ (db)`, extended bilinearly.
pub fn sharp(u: &TensorElement, v: &TensorElement) -> Result<TensorElement> {
    if u.structure != v.structure {
        return Err(crate::error::Error::ShapeMismatch(format!(
            "tensor structures {:?} and {:?} differ",
            u.structure.sizes(),
            v.structure.sizes()
        )));
    }
    let s = &u.structure;
    let n = s.dim();
    let mut out = CMatrix::zeros(n, n);
    for p in 0..n {
        let up = s.unit(p);
        for q in 0..n {
            let c = u.coeffs[(p, q)];
            if c == ZERO {
                continue;
            }
            let uq = s.unit(q);
            // (e_p ⊗ e_q) # (e_r ⊗ e_t) is nonzero only when r starts at
            // the column of p and t ends at the row of q.
            for col in 0..s.block_size(up.block) {
                let r = s.index(up.block, up.col, col);
                let first = s.index(up.block, up.row, col);
                for row in 0..s.block_size(uq.block) {
                    let t = s.index(uq.block, row, uq.row);
                    let d = v.coeffs[(r, t)];
                    if d != ZERO {
                        out[(first, s.index(uq.block, row, uq.col))] += c * d;
                    }
                }
            }
        }
    }
    Ok(u.with(out))
}

/// `(σ_{is} ⊗ 1) ξ` with `σ_{is}(x) = ρ^{-s} x ρ^{s}`.
pub fn modular_first_leg(xi: &TensorElement, psi: &DeltaState, s: f64) -> TensorElement {
    let st = psi.structure();
    let factors = CMatrix::from_diagonal(&CVector::from_iterator(
        st.dim(),
        (0..st.dim()).map(|p| real((psi.column_weight(p) / psi.row_weight(p)).powf(s))),
    ));
    xi.map_first(&factors)
}
