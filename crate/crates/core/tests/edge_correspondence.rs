mod common;

use common::*;
use qgraph::constructors::*;
use qgraph::correspondence::*;
use qgraph::graph::quantum_sources_sinks;
use qgraph::linalg::{frobenius, real, CMatrix};
use qgraph::{AlgebraElement, Error, TensorElement};

#[test]
fn edge_dimensions() {
    let e = build_edge_correspondence(&classical_graph(&three_cycle()).unwrap()).unwrap();
    assert_eq!(e.dim(), 3);
    let e = build_edge_correspondence(&complete_graph(&tracial_m2()).unwrap()).unwrap();
    assert_eq!(e.dim(), 16);
    let e = build_edge_correspondence(&trivial_graph(&tracial_m2()).unwrap()).unwrap();
    assert_eq!(e.dim(), 4);
    let e = build_edge_correspondence(&trivial_graph(&nontracial_m2()).unwrap()).unwrap();
    assert_eq!(e.dim(), 4);
}

#[test]
fn modules_are_correspondences() {
    for (name, g) in family_instances(17) {
        let e = build_edge_correspondence(&g).unwrap();
        let gram = e.module.scalar_gram();
        assert!(
            frobenius(&(gram - CMatrix::identity(e.dim(), e.dim()))) < 1e-9,
            "{name}"
        );
        let c = e.module.consistency();
        assert!(
            c.commute < 1e-9 && c.right_linear < 1e-9 && c.min_inner_eigenvalue > -1e-9,
            "{name}: {c:?}"
        );
    }
}

#[test]
fn inner_product_theorem() {
    for (name, g) in family_instances(19) {
        let e = build_edge_correspondence(&g).unwrap();
        let st = g.structure();
        let one = AlgebraElement::identity(st);
        let d2 = g.delta_sq();
        for p in 0..st.dim() {
            for q in 0..st.dim() {
                for (y, y2) in [(0, 0), (p, q)] {
                    let (x, x2) = (g.basis(p), g.basis(q));
                    let (yy, yy2) = (g.basis(y), g.basis(y2));
                    let lhs = e
                        .module
                        .b_inner(&e.vector(&x, &yy).unwrap(), &e.vector(&x2, &yy2).unwrap())
                        .unwrap();
                    let rhs = &(&yy.adjoint() * &g.apply(&(&x.adjoint() * &x2)).unwrap()) * &yy2;
                    assert!((&lhs - &rhs.scale(real(1.0 / d2))).norm() < 1e-9, "{name}");
                }
            }
        }
        let eps = &e.generator;
        if name == "complete" {
            let v = e.module.b_inner(eps, eps).unwrap();
            assert!((&v - &one).norm() < 1e-9);
        }
    }
}

#[test]
fn faithful_and_full() {
    for (name, g) in family_instances(23) {
        let e = build_edge_correspondence(&g).unwrap();
        let k = left_kernel_of(&e);
        assert!(k.distance < 1e-9, "{name}: {k:?}");
        assert_eq!(k.kernel_dim, k.predicted_dim);
        let sources = quantum_sources_sinks(&g);
        assert_eq!(k.predicted_blocks, sources.sources, "{name}");
        let f = fullness_of(&e);
        assert_eq!(f.blocks, f.module_blocks, "{name}");
        let complement: Vec<usize> = (0..g.structure().num_blocks())
            .filter(|a| !sources.sinks.contains(a))
            .collect();
        assert_eq!(f.blocks, complement, "{name}");
    }
    let g = classical_graph(&source_sink()).unwrap();
    let k = left_kernel(&g).unwrap();
    assert_eq!(k.kernel_dim, 1);
    let f = fullness_ideal(&g).unwrap();
    assert!(!f.full);
    assert_eq!(f.blocks.len(), 1);
    for g in [
        complete_graph(&tracial_m2()).unwrap(),
        trivial_graph(&nontracial_m2()).unwrap(),
    ] {
        assert_eq!(left_kernel(&g).unwrap().kernel_dim, 0);
        assert!(fullness_ideal(&g).unwrap().full);
    }
}

#[test]
fn compact_decomposition() {
    for g in [
        complete_graph(&uniform(2)).unwrap(),
        trivial_graph(&tracial_m2()).unwrap(),
        rank_one_graph(&tracial_m2(), &m2_diag_t()).unwrap(),
        classical_graph(&three_cycle()).unwrap(),
    ] {
        assert!(compact_decomposition_residual(&g).unwrap() < 1e-9);
    }
}

#[test]
fn cp_model_matches_edge_correspondence() {
    for (name, g) in family_instances(29) {
        let (x, report) = cp_correspondence(&g).unwrap();
        assert_eq!(report.edge_dim, x.dim(), "{name}");
        assert!(report.max() < 1e-9, "{name}: {report:?}");
    }
    let g = classical_graph(&three_cycle()).unwrap();
    assert_eq!(tensor_over_adjacency(&g).unwrap().dim(), 3);
    let (x, _) = cp_correspondence(&complete_graph(&tracial_m2()).unwrap()).unwrap();
    assert_eq!(x.dim(), 16);
}

#[test]
fn recognition_examples() {
    for psi in [tracial_m2(), nontracial_m2()] {
        let b = algebra_correspondence(&psi, None);
        let xi = algebra_vector(
            &b,
            &AlgebraElement::identity(psi.structure()).scale(real(1.0 / psi.delta())),
        )
        .unwrap();
        let r = recognize(CyclicVector::Module(&b, &xi), &psi).unwrap();
        assert!(frobenius(&(r.graph.matrix() - CMatrix::identity(4, 4))) < 1e-9);
    }
    let psi = tracial_m2();
    let t = m2_diag_t();
    let b = algebra_correspondence(&psi, None);
    let xi = algebra_vector(&b, &t.adjoint().scale(real(1.0 / psi.delta()))).unwrap();
    let rec = recognize(CyclicVector::Module(&b, &xi), &psi).unwrap();
    assert!(frobenius(&(rec.graph.matrix() - rank_one_graph(&psi, &t).unwrap().matrix())) < 1e-9);
    let zero = CorrVector::new(qgraph::linalg::CVector::zeros(4));
    assert!(matches!(
        recognize(CyclicVector::Module(&b, &zero), &psi),
        Err(Error::NotGenerating { .. })
    ));

    let mut r = rng(31);
    for psi in [
        tracial_m2(),
        nontracial_m2(),
        random_delta_form(&mut r, &[2, 1]),
    ] {
        let t = random_rank_one_t(&mut r, &psi);
        let b = algebra_correspondence(&psi, None);
        let xi = algebra_vector(&b, &t.adjoint().scale(real(1.0 / psi.delta()))).unwrap();
        let rec = recognize(CyclicVector::Module(&b, &xi), &psi).unwrap();
        let expected = rank_one_graph(&psi, &t).unwrap();
        assert!(frobenius(&(rec.graph.matrix() - expected.matrix())) < 1e-9);
    }

    let s = psi.structure();
    let xi = TensorElement::simple(
        &AlgebraElement::unit(s, 0, 0, 0).unwrap(),
        &AlgebraElement::unit(s, 0, 0, 1).unwrap(),
        s,
    )
    .unwrap();
    assert!(matches!(
        recognize(CyclicVector::Ambient(&xi), &psi),
        Err(Error::NotQuantumAdjacency { .. })
    ));

    let g = complete_graph(&psi).unwrap();
    let eps = qgraph::graph::edge_indicator(&g);
    let rec = recognize(CyclicVector::Ambient(&eps), &psi).unwrap();
    assert!(frobenius(&(rec.graph.matrix() - g.matrix())) < 1e-9);
}

#[test]
fn twisted_algebra_is_automorphism_edge_module() {
    let mut r = rng(37);
    for _ in 0..4 {
        let (psi, spec) = random_automorphism(&mut r);
        let (g, _) = automorphism_graph(&psi, &spec).unwrap();
        let b = algebra_correspondence(&psi, Some(g.adjacency()));
        let xi = algebra_vector(
            &b,
            &AlgebraElement::identity(psi.structure()).scale(real(1.0 / psi.delta())),
        )
        .unwrap();
        let rec = recognize(CyclicVector::Module(&b, &xi), &psi).unwrap();
        assert!(frobenius(&(rec.graph.matrix() - g.matrix())) < 1e-9);
    }
}
