//! Constructors for the standard example classes of quantum graphs and
//! their canonical relation families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{AmplifiedMap, LinearMapOnB, QuantumGraph};
use crate::linalg::{frobenius, kron, real, CMatrix};
use crate::relations::{lqck_residuals, CkFamily};
use crate::space::{AlgebraElement, BlockStructure, DeltaState};
use crate::tolerance;

/// `A(x) = δ² ψ(x) 1`.
pub fn complete_graph(psi: &DeltaState) -> Result<QuantumGraph> {
    let s = psi.structure();
    let m = s.identity_coords() * psi.functional().transpose() * real(psi.delta_sq());
    QuantumGraph::new(psi.clone(), LinearMapOnB::new(m)?)
}

/// `A = id`.
pub fn trivial_graph(psi: &DeltaState) -> Result<QuantumGraph> {
    QuantumGraph::new(psi.clone(), LinearMapOnB::identity(psi.structure().dim()))
}

/// `Tr(ρ_a^{-1} T_a^* T_a)` for every block.
pub fn rank_one_normalization(psi: &DeltaState, t: &AlgebraElement) -> Result<Vec<f64>> {
    t.check(psi.structure())?;
    Ok(t.blocks()
        .iter()
        .enumerate()
        .map(|(a, b)| {
            let g = b.adjoint() * b;
            (0..b.nrows())
                .map(|i| g[(i, i)].re / psi.weight(a, i))
                .sum()
        })
        .collect())
}

/// `max ‖Σ_k f_ik S f_kj − Tr(ρ^{-1} S) f_ij‖` over all canonical `S` and
/// adapted units `f_ij` in the same block.
pub fn rank_one_kernel_residual(psi: &DeltaState) -> f64 {
    let st = psi.structure();
    let mut worst: f64 = 0.0;
    for a in 0..st.num_blocks() {
        let n = st.block_size(a);
        let f = |i: usize, j: usize| {
            CMatrix::from_fn(n, n, |r, c| {
                if (r, c) == (i, j) {
                    real(1.0 / (psi.weight(a, i) * psi.weight(a, j)).sqrt())
                } else {
                    real(0.0)
                }
            })
        };
        for p in 0..n * n {
            let s = CMatrix::from_fn(
                n,
                n,
                |r, c| if r * n + c == p { real(1.0) } else { real(0.0) },
            );
            let trace: f64 = (0..n).map(|k| s[(k, k)].re / psi.weight(a, k)).sum();
            for i in 0..n {
                for j in 0..n {
                    let mut lhs = -f(i, j) * real(trace);
                    for k in 0..n {
                        lhs += f(i, k) * &s * f(k, j);
                    }
                    worst = worst.max(frobenius(&lhs));
                }
            }
        }
    }
    worst
}

/// `A(x) = T x T^*`. Every block with `T_a ≠ 0` must satisfy
/// `Tr(ρ_a^{-1} T_a^* T_a) = δ²`; blocks with `T_a = 0` are allowed and give
/// quantum sources and sinks.
pub fn rank_one_graph(psi: &DeltaState, t: &AlgebraElement) -> Result<QuantumGraph> {
    let values = rank_one_normalization(psi, t)?;
    let d2 = psi.delta_sq();
    for (a, &value) in values.iter().enumerate() {
        let vanishing = frobenius(t.block(a)) <= tolerance::ALGEBRAIC;
        if !vanishing && (value - d2).abs() > tolerance::THEOREM * d2.max(1.0) {
            return Err(Error::BadNormalization {
                block: a,
                value,
                delta_sq: d2,
            });
        }
    }
    let residual = rank_one_kernel_residual(psi);
    if residual > tolerance::THEOREM * d2.max(1.0) {
        return Err(Error::ResidualTooLarge {
            what: "rank-one kernel identity".into(),
            residual,
        });
    }
    let s = psi.structure();
    let ts = t.adjoint();
    let a = LinearMapOnB::from_images(s, |x| &(t * x) * &ts);
    QuantumGraph::new(psi.clone(), a)
}

/// Rescales each block of `t` so that the rank-one normalization holds.
pub fn normalize_rank_one(psi: &DeltaState, t: &AlgebraElement) -> Result<AlgebraElement> {
    let values = rank_one_normalization(psi, t)?;
    let blocks = t
        .blocks()
        .iter()
        .zip(&values)
        .map(|(b, &v)| {
            if v > 0.0 {
                b * real((psi.delta_sq() / v).sqrt())
            } else {
                b.clone()
            }
        })
        .collect();
    AlgebraElement::from_blocks(psi.structure(), blocks)
}

/// A `*`-automorphism of `B`: a permutation of equal-size blocks followed by
/// inner automorphisms. Block `a` is sent to block `permutation[a]`, where it
/// is conjugated by `unitaries[permutation[a]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct AutomorphismSpec {
    pub permutation: Vec<usize>,
    pub unitaries: Vec<CMatrix>,
}

impl AutomorphismSpec {
    /// A pure block permutation.
    pub fn permutation(structure: &BlockStructure, permutation: Vec<usize>) -> Self {
        let unitaries = structure
            .sizes()
            .iter()
            .map(|&n| CMatrix::identity(n, n))
            .collect();
        Self {
            permutation,
            unitaries,
        }
    }

    pub fn validate(&self, structure: &BlockStructure) -> Result<()> {
        let d = structure.num_blocks();
        if self.permutation.len() != d {
            return Err(Error::InvalidPermutation(format!(
                "permutation has {} entries for {d} blocks",
                self.permutation.len()
            )));
        }
        let mut seen = vec![false; d];
        for (a, &b) in self.permutation.iter().enumerate() {
            if b >= d || seen[b] {
                return Err(Error::InvalidPermutation(format!(
                    "{:?} is not a bijection",
                    self.permutation
                )));
            }
            seen[b] = true;
            if structure.block_size(a) != structure.block_size(b) {
                return Err(Error::InvalidPermutation(format!(
                    "block {a} of size {} cannot map to block {b} of size {}",
                    structure.block_size(a),
                    structure.block_size(b)
                )));
            }
        }
        if self.unitaries.len() != d {
            return Err(Error::ShapeMismatch(format!(
                "{} unitaries for {d} blocks",
                self.unitaries.len()
            )));
        }
        for (a, u) in self.unitaries.iter().enumerate() {
            let n = structure.block_size(a);
            if u.nrows() != n || u.ncols() != n {
                return Err(Error::ShapeMismatch(format!("unitary {a} is not {n}x{n}")));
            }
            let residual = frobenius(&(u.adjoint() * u - CMatrix::identity(n, n)));
            if residual > tolerance::ALGEBRAIC * 100.0 {
                return Err(Error::NotUnitary { residual });
            }
        }
        Ok(())
    }

    pub fn apply(&self, x: &AlgebraElement, structure: &BlockStructure) -> Result<AlgebraElement> {
        x.check(structure)?;
        let mut blocks: Vec<CMatrix> = structure
            .sizes()
            .iter()
            .map(|&n| CMatrix::zeros(n, n))
            .collect();
        for (a, &b) in self.permutation.iter().enumerate() {
            let u = &self.unitaries[b];
            blocks[b] = u * x.block(a) * u.adjoint();
        }
        AlgebraElement::from_blocks(structure, blocks)
    }

    /// Cycles of the block permutation, each starting at its smallest block.
    pub fn cycles(&self) -> Vec<Vec<usize>> {
        let mut seen = vec![false; self.permutation.len()];
        let mut out = Vec::new();
        for start in 0..self.permutation.len() {
            if seen[start] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut a = start;
            while !seen[a] {
                seen[a] = true;
                cycle.push(a);
                a = self.permutation[a];
            }
            out.push(cycle);
        }
        out
    }
}

/// Human-readable description of a Cuntz-Pimsner algebra, with one entry
/// per direct summand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureReport {
    pub description: String,
    pub summands: Vec<String>,
}

fn subscript(n: usize) -> String {
    const DIGITS: [char; 10] = ['₀', '₁', '₂', '₃', '₄', '₅', '₆', '₇', '₈', '₉'];
    n.to_string()
        .chars()
        .map(|c| DIGITS[c.to_digit(10).unwrap() as usize])
        .collect()
}

fn matrix_algebra(n: usize) -> String {
    if n == 1 {
        "ℂ".to_string()
    } else {
        format!("M{}(ℂ)", subscript(n))
    }
}

/// `M_{N_1}(ℂ) ⊕ … ⊕ M_{N_d}(ℂ)`.
pub fn describe_algebra(sizes: &[usize]) -> String {
    sizes
        .iter()
        .map(|&n| matrix_algebra(n))
        .collect::<Vec<_>>()
        .join(" ⊕ ")
}

/// `M_n(ℂ) ⊗ M_k(ℂ) ⊗ C(𝕋)` for a cycle of length `k` on blocks of size `n`,
/// dropping trivial matrix factors.
pub fn crossed_product_summand(n: usize, k: usize) -> String {
    let mut factors: Vec<String> = [n, k]
        .iter()
        .filter(|&&m| m > 1)
        .map(|&m| matrix_algebra(m))
        .collect();
    factors.push("C(𝕋)".into());
    factors.join("⊗")
}

pub fn complete_structure_report(psi: &DeltaState) -> StructureReport {
    let n = psi.structure().dim();
    StructureReport {
        description: format!(
            "Cuntz-Pimsner algebra of the edge correspondence is the Cuntz algebra 𝒪{} (B = {})",
            subscript(n),
            describe_algebra(psi.structure().sizes())
        ),
        summands: vec![format!("𝒪{}", subscript(n))],
    }
}

pub fn trivial_structure_report(psi: &DeltaState) -> StructureReport {
    let sizes = psi.structure().sizes();
    StructureReport {
        description: format!(
            "Cuntz-Pimsner algebra of the edge correspondence is isomorphic to B⊗C(𝕋) with B = {}",
            describe_algebra(sizes)
        ),
        summands: sizes
            .iter()
            .map(|&n| crossed_product_summand(n, 1))
            .collect(),
    }
}

/// Only blocks with `T_a ≠ 0` survive: the algebra is `B'⊗C(𝕋)`.
pub fn rank_one_structure_report(psi: &DeltaState, t: &AlgebraElement) -> StructureReport {
    let sizes: Vec<usize> = t
        .blocks()
        .iter()
        .zip(psi.structure().sizes())
        .filter(|(b, _)| frobenius(b) > tolerance::ALGEBRAIC)
        .map(|(_, &n)| n)
        .collect();
    StructureReport {
        description: format!(
            "Cuntz-Pimsner algebra of the edge correspondence is isomorphic to B'⊗C(𝕋) with B' = {}",
            describe_algebra(&sizes)
        ),
        summands: sizes.iter().map(|&n| crossed_product_summand(n, 1)).collect(),
    }
}

/// The automorphism graph `(B, ψ, α)` together with the crossed product
/// decomposition of `B ⋊_α ℤ`. Inner parts do not affect the decomposition.
pub fn automorphism_graph(
    psi: &DeltaState,
    spec: &AutomorphismSpec,
) -> Result<(QuantumGraph, StructureReport)> {
    let s = psi.structure();
    spec.validate(s)?;
    let map = LinearMapOnB::from_images(s, |x| spec.apply(x, s).expect("validated"));
    let f = psi.functional();
    let pulled = map.matrix().transpose() * &f;
    let residual = crate::linalg::frobenius_vec(&(pulled - &f));
    if residual > tolerance::THEOREM {
        return Err(Error::StateNotInvariant { residual });
    }
    let summands: Vec<String> = spec
        .cycles()
        .iter()
        .map(|c| crossed_product_summand(s.block_size(c[0]), c.len()))
        .collect();
    let report = StructureReport {
        description: format!(
            "Cuntz-Pimsner algebra of the edge correspondence is B⋊ℤ ≅ {}",
            summands.join(" ⊕ ")
        ),
        summands,
    };
    Ok((QuantumGraph::new(psi.clone(), map)?, report))
}

/// The classical graph on `|V|` vertices with uniform state. `adj[i][j] = 1`
/// records an edge `i → j`; the adjacency map is `A(p_j) = Σ_i adj[i][j] p_i`.
pub fn classical_graph(adj: &[Vec<f64>]) -> Result<QuantumGraph> {
    let n = adj.len();
    if n == 0 {
        return Err(Error::InvalidStructure(
            "a classical graph needs at least one vertex".into(),
        ));
    }
    for row in adj {
        if row.len() != n {
            return Err(Error::ShapeMismatch(format!(
                "adjacency row of length {} for {n} vertices",
                row.len()
            )));
        }
    }
    for (i, row) in adj.iter().enumerate() {
        for (j, &v) in row.iter().enumerate() {
            if v != 0.0 && v != 1.0 {
                return Err(Error::NotZeroOne {
                    row: i,
                    col: j,
                    value: v,
                });
            }
        }
    }
    let psi = DeltaState::uniform(n)?;
    let m = CMatrix::from_fn(n, n, |i, j| real(adj[i][j]));
    QuantumGraph::new(psi, LinearMapOnB::new(m)?)
}

/// Relabels a classical graph: vertex `i` becomes `perm[i]`.
pub fn relabel_classical(adj: &[Vec<f64>], perm: &[usize]) -> Result<Vec<Vec<f64>>> {
    check_permutation(perm, adj.len())?;
    let n = adj.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in 0..n {
            out[perm[i]][perm[j]] = adj[i][j];
        }
    }
    Ok(out)
}

/// The `*`-isomorphism `p_i ↦ p_{perm[i]}` as an amplified map with `h = 1`.
pub fn permutation_isomorphism(perm: &[usize]) -> Result<AmplifiedMap> {
    check_permutation(perm, perm.len())?;
    let n = perm.len();
    let m = CMatrix::from_fn(
        n,
        n,
        |r, c| if perm[c] == r { real(1.0) } else { real(0.0) },
    );
    Ok(AmplifiedMap::from_matrix(&m))
}

fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n
        || perm
            .iter()
            .any(|&p| p >= n || std::mem::replace(&mut seen[p], true))
    {
        return Err(Error::InvalidPermutation(format!(
            "{perm:?} is not a permutation of 0..{n}"
        )));
    }
    Ok(())
}

/// Which canonical family to build.
#[derive(Clone, Debug, PartialEq)]
pub enum FamilyKind {
    /// `T = 1`, for the trivial graph.
    Trivial,
    /// A normalized `T`, for the rank-one graph `A(x) = T x T^*`.
    RankOne(AlgebraElement),
}

/// `s(x) = δ^{-2} (x T^*) ⊗ u`, with `B` acting on `⊕_a ℂ^{N_a}`, so that
/// `k = (Σ_a N_a) · dim u`. The family is checked against the local
/// relations of the matching graph before it is returned.
pub fn canonical_lqck_family(psi: &DeltaState, kind: &FamilyKind, u: &CMatrix) -> Result<CkFamily> {
    if u.nrows() != u.ncols() || u.nrows() == 0 {
        return Err(Error::ShapeMismatch(format!(
            "u is {}x{}, expected square",
            u.nrows(),
            u.ncols()
        )));
    }
    let residual = frobenius(&(u.adjoint() * u - CMatrix::identity(u.nrows(), u.ncols())));
    if residual > tolerance::ALGEBRAIC * 100.0 {
        return Err(Error::NotUnitary { residual });
    }
    let s = psi.structure();
    let (graph, t) = match kind {
        FamilyKind::Trivial => (trivial_graph(psi)?, AlgebraElement::identity(s)),
        FamilyKind::RankOne(t) => (rank_one_graph(psi, t)?, t.clone()),
    };
    let ts = t.adjoint();
    let inv_d2 = real(1.0 / psi.delta_sq());
    let images = (0..s.dim())
        .map(|p| {
            let x = AlgebraElement::from_coords(s, &s.basis_coords(p)).expect("basis");
            kron(&defining_representation(&(&x * &ts)), u) * inv_d2
        })
        .collect();
    let k = s.sizes().iter().sum::<usize>() * u.nrows();
    let family = CkFamily::new(k, images)?;
    let report = lqck_residuals(&family, &graph)?;
    if report.max() > tolerance::THEOREM {
        return Err(Error::ResidualTooLarge {
            what: "canonical family local relations".into(),
            residual: report.max(),
        });
    }
    Ok(family)
}

/// `x ↦ ⊕_a x_a` as a block-diagonal matrix on `⊕_a ℂ^{N_a}`.
pub fn defining_representation(x: &AlgebraElement) -> CMatrix {
    let total: usize = x.sizes().iter().sum();
    let mut m = CMatrix::zeros(total, total);
    let mut off = 0;
    for b in x.blocks() {
        let n = b.nrows();
        m.view_mut((off, off), (n, n)).copy_from(b);
        off += n;
    }
    m
}

/// Weights `(1/3, 2/3)` on `M₂`, a non-tracial delta-form with `δ² = 9/2`.
pub fn nontracial_m2() -> DeltaState {
    DeltaState::new(
        BlockStructure::new(vec![2]).expect("valid"),
        vec![vec![1.0 / 3.0, 2.0 / 3.0]],
    )
    .expect("delta-form")
}

/// Builds a delta-form from arbitrary positive per-block profiles by
/// rescaling each block so that `Σ_i 1/w_{a,i}` agrees and the weights
/// sum to one.
pub fn delta_form_from_profile(
    structure: BlockStructure,
    profile: &[Vec<f64>],
) -> Result<DeltaState> {
    if profile.len() != structure.num_blocks() {
        return Err(Error::ShapeMismatch(
            "profile does not match the block count".into(),
        ));
    }
    // Scaling block a by c_a gives Σ 1/w = (Σ 1/r)/c_a, so c_a ∝ Σ 1/r_a.
    let scaled: Vec<Vec<f64>> = profile
        .iter()
        .map(|r| {
            let inv: f64 = r.iter().map(|v| 1.0 / v).sum();
            r.iter().map(|v| v * inv).collect()
        })
        .collect();
    let total: f64 = scaled.iter().flatten().sum();
    let weights = scaled
        .iter()
        .map(|r| r.iter().map(|v| v / total).collect())
        .collect();
    DeltaState::new(structure, weights)
}
