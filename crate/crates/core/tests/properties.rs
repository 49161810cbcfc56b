mod common;

use common::*;
use proptest::prelude::*;
use qgraph::cli::GraphFile;
use qgraph::constructors::{
    canonical_lqck_family, classical_graph, complete_graph, rank_one_graph, trivial_graph,
    FamilyKind,
};
use qgraph::correspondence::{
    build_edge_correspondence, fullness_of, left_kernel_of, rank_one_operator, CorrVector,
};
use qgraph::graph::{
    adjacency_from_indicator, edge_indicator, indicator_properties, is_completely_positive,
    quantum_sources_sinks,
};
use qgraph::linalg::{frobenius, hermitian_eigen, CMatrix, CVector, C64};
use qgraph::relations::{lqck_residuals, qck_residuals, CkFamily};
use qgraph::space::{gns_inner, modular_half};
use qgraph::tensor::{comultiply, sharp, TensorElement};
use qgraph::AlgebraElement;
use rand::Rng;

fn config() -> ProptestConfig {
    ProptestConfig {
        cases: 64,
        ..ProptestConfig::default()
    }
}

fn structure_index() -> impl Strategy<Value = usize> {
    0..STRUCTURES.len()
}

fn random_tensor(r: &mut rand_chacha::ChaCha8Rng, st: &qgraph::BlockStructure) -> TensorElement {
    TensorElement::from_coeffs(st, random_matrix(r, st.dim(), st.dim())).unwrap()
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn multiplication_is_a_delta_form(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let st = psi.structure();
        let x = random_element(&mut r, st);
        // m(m^*(x)): multiply the legs back together
        let c = comultiply(&x, &psi).unwrap();
        let mut back = CVector::zeros(st.dim());
        for p in 0..st.dim() {
            for q in 0..st.dim() {
                if let Some(t) = st.product(p, q) {
                    back[t] += c.coeffs()[(p, q)];
                }
            }
        }
        let expected = x.coords() * C64::new(psi.delta_sq(), 0.0);
        prop_assert!(qgraph::linalg::frobenius_vec(&(back - expected)) <= 1e-9);
    }

    #[test]
    fn comultiplication_is_the_gns_adjoint(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let st = psi.structure();
        let n = st.dim();
        // <m^*(e_p), e_a ⊗ e_b> = <e_p, e_a e_b>
        for p in 0..n {
            let ep = AlgebraElement::from_coords(st, &st.basis_coords(p)).unwrap();
            let c = comultiply(&ep, &psi).unwrap();
            for a in 0..n {
                for b in 0..n {
                    let ea = AlgebraElement::from_coords(st, &st.basis_coords(a)).unwrap();
                    let eb = AlgebraElement::from_coords(st, &st.basis_coords(b)).unwrap();
                    let lhs = c.inner(&TensorElement::simple(&ea, &eb, st).unwrap(), &psi);
                    let rhs = gns_inner(&ep, &(&ea * &eb), &psi).unwrap();
                    prop_assert!((lhs - rhs).norm() <= 1e-12);
                }
            }
        }
    }

    #[test]
    fn sharp_is_associative_with_unit(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let st = qgraph::BlockStructure::new(STRUCTURES[k].to_vec()).unwrap();
        let (u, v, w) = (random_tensor(&mut r, &st), random_tensor(&mut r, &st), random_tensor(&mut r, &st));
        let left = sharp(&sharp(&u, &v).unwrap(), &w).unwrap();
        let right = sharp(&u, &sharp(&v, &w).unwrap()).unwrap();
        prop_assert!(frobenius(&(left.coeffs() - right.coeffs())) <= 1e-9);
        let one = TensorElement::unit(&st);
        prop_assert!(frobenius(&(sharp(&one, &u).unwrap().coeffs() - u.coeffs())) <= 1e-12);
        prop_assert!(frobenius(&(sharp(&u, &one).unwrap().coeffs() - u.coeffs())) <= 1e-12);
    }

    #[test]
    fn modular_half_identities(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let st = psi.structure();
        let one = AlgebraElement::identity(st);
        prop_assert!((&modular_half(&one, &psi).unwrap() - &one).norm() <= 1e-12);
        let x = random_element(&mut r, st);
        let lhs = modular_half(&x, &psi).unwrap().adjoint();
        // ρ^{1/2} x^* ρ^{-1/2}, blockwise from the densities
        let blocks = (0..st.num_blocks())
            .map(|a| {
                let d = psi.density(a);
                let half = CMatrix::from_diagonal(&d.diagonal().map(|w| C64::new(w.re.sqrt(), 0.0)));
                let inv = CMatrix::from_diagonal(&d.diagonal().map(|w| C64::new(1.0 / w.re.sqrt(), 0.0)));
                &half * x.block(a).adjoint() * inv
            })
            .collect();
        let rhs = AlgebraElement::from_blocks(st, blocks).unwrap();
        prop_assert!((&lhs - &rhs).norm() <= 1e-9);
    }

    #[test]
    fn gns_gram_is_positive_definite(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let st = psi.structure();
        let n = st.dim();
        let basis: Vec<AlgebraElement> =
            (0..n).map(|p| AlgebraElement::from_coords(st, &st.basis_coords(p)).unwrap()).collect();
        let gram = CMatrix::from_fn(n, n, |i, j| gns_inner(&basis[i], &basis[j], &psi).unwrap());
        let (values, _) = hermitian_eigen(&gram);
        prop_assert!(values.iter().cloned().fold(f64::INFINITY, f64::min) > 0.0);
    }

    #[test]
    fn indicator_round_trip_on_families(seed in any::<u64>(), k in structure_index(), kind in 0..3usize) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let g = match kind {
            0 => complete_graph(&psi).unwrap(),
            1 => trivial_graph(&psi).unwrap(),
            _ => rank_one_graph(&psi, &random_rank_one_t(&mut r, &psi)).unwrap(),
        };
        prop_assert!(g.schur_residual() <= 1e-9);
        let rep = indicator_properties(&g);
        prop_assert!(rep.max() <= 1e-9);
        let back = adjacency_from_indicator(&edge_indicator(&g), g.psi()).unwrap();
        prop_assert!(frobenius(&(back.matrix() - g.matrix())) <= 1e-9);
        prop_assert_eq!(is_completely_positive(g.psi(), g.adjacency()).unwrap().completely_positive, rep.modular_self_adjointness <= 1e-9);
    }

    #[test]
    fn classical_faithful_and_full(bits in proptest::collection::vec(any::<bool>(), 1..=16)) {
        let n = (bits.len() as f64).sqrt().floor() as usize;
        let adj: Vec<Vec<f64>> =
            (0..n).map(|i| (0..n).map(|j| if bits[i * n + j] { 1.0 } else { 0.0 }).collect()).collect();
        let g = classical_graph(&adj).unwrap();
        let ss = quantum_sources_sinks(&g);
        let zero_col = (0..n).any(|j| (0..n).all(|i| adj[i][j] == 0.0));
        let zero_row = (0..n).any(|i| (0..n).all(|j| adj[i][j] == 0.0));
        prop_assert_eq!(!ss.sources.is_empty(), zero_col);
        prop_assert_eq!(!ss.sinks.is_empty(), zero_row);
        if ss.sources.len() == n {
            return Ok(());
        }
        let edge = build_edge_correspondence(&g).unwrap();
        let kernel = left_kernel_of(&edge);
        prop_assert_eq!(kernel.kernel_dim == 0, ss.sources.is_empty());
        prop_assert_eq!(fullness_of(&edge).full, ss.sinks.is_empty());
        prop_assert!(kernel.distance <= 1e-9);
    }

    #[test]
    fn module_inner_products(seed in any::<u64>(), k in 0..5usize, kind in 0..3usize) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let g = match kind {
            0 => complete_graph(&psi).unwrap(),
            1 => trivial_graph(&psi).unwrap(),
            _ => rank_one_graph(&psi, &random_rank_one_t(&mut r, &psi)).unwrap(),
        };
        let edge = build_edge_correspondence(&g).unwrap();
        let e = &edge.module;
        let st = g.structure();
        let d = e.dim();
        let xi = CVector::from_fn(d, |_, _| complex(&mut r));
        // <ξ, ξ>_B is positive
        let ip = e.b_inner(&CorrVector::new(xi.clone()), &CorrVector::new(xi.clone())).unwrap();
        for a in 0..st.num_blocks() {
            let (values, _) = hermitian_eigen(ip.block(a));
            prop_assert!(values.iter().all(|v| *v >= -1e-9));
        }
        // compacts commute with the right action
        let (u, v) = (CVector::from_fn(d, |_, _| complex(&mut r)), CVector::from_fn(d, |_, _| complex(&mut r)));
        let theta = rank_one_operator(e, &u, &v);
        let b = random_element(&mut r, st);
        let rb = e.right_action(&b).unwrap();
        prop_assert!(frobenius(&(&theta * &rb - &rb * &theta)) <= 1e-9);
        // rank-one graphs with every T_a nonzero are faithful
        if kind == 2 {
            prop_assert_eq!(left_kernel_of(&edge).kernel_dim, 0);
        }
    }

    #[test]
    fn local_relations_imply_global(seed in any::<u64>(), k in structure_index(), h in 1..3usize, rank_one in any::<bool>()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let u = random_unitary(&mut r, h);
        let (kind, g) = if rank_one {
            let t = random_rank_one_t(&mut r, &psi);
            (FamilyKind::RankOne(t.clone()), rank_one_graph(&psi, &t).unwrap())
        } else {
            (FamilyKind::Trivial, trivial_graph(&psi).unwrap())
        };
        let family = canonical_lqck_family(&psi, &kind, &u).unwrap();
        let local = lqck_residuals(&family, &g).unwrap();
        prop_assert!(local.max() <= 1e-9);
        prop_assert!(qck_residuals(&family, &g).unwrap().max() <= g.delta_sq() * 1e-9);
    }

    #[test]
    fn adapted_and_coordinate_free_relations_agree(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let g = complete_graph(&psi).unwrap();
        let kdim = r.gen_range(1..4);
        let images = (0..g.dim()).map(|_| random_matrix(&mut r, kdim, kdim) * C64::new(0.3, 0.0)).collect();
        let family = CkFamily::new(kdim, images).unwrap();
        prop_assert!(lqck_residuals(&family, &g).unwrap().cross_agreement <= 1e-12);
    }

    #[test]
    fn graph_file_round_trip(seed in any::<u64>(), k in structure_index()) {
        let mut r = rng(seed);
        let psi = random_delta_form(&mut r, STRUCTURES[k]);
        let g = complete_graph(&psi).unwrap();
        let mut file = GraphFile::from_graph(&g);
        for row in &mut file.adjacency {
            for e in row.iter_mut() {
                *e = [r.gen::<f64>() * 10f64.powi(r.gen_range(-20..20)), -r.gen::<f64>()];
            }
        }
        let text = serde_json::to_string(&file).unwrap();
        let back: GraphFile = serde_json::from_str(&text).unwrap();
        for (a, b) in file.adjacency.iter().flatten().zip(back.adjacency.iter().flatten()) {
            prop_assert_eq!(a[0].to_bits(), b[0].to_bits());
            prop_assert_eq!(a[1].to_bits(), b[1].to_bits());
        }
        for (a, b) in file.psi.iter().flatten().zip(back.psi.iter().flatten()) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
        prop_assert_eq!(serde_json::to_string(&back).unwrap(), text);
    }
}
