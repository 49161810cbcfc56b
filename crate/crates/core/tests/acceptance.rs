//! Acceptance suite: one line per criterion, nonzero exit if any fails.

mod common;

use std::time::{Duration, Instant};

use common::*;
use qgraph::constructors::{
    canonical_lqck_family, classical_graph, complete_graph, rank_one_graph, trivial_graph,
    FamilyKind,
};
use qgraph::correspondence::{
    algebra_correspondence, algebra_vector, build_edge_correspondence, compact_residual_of,
    cp_isomorphism_of, fullness_of, left_kernel_of, recognize, tensor_over_adjacency, CyclicVector,
};
use qgraph::fock::{build_fock, fock_relations, representation_residuals};
use qgraph::graph::{
    adjacency_from_indicator, cp_by_modular_criterion, edge_indicator, indicator_properties,
    is_completely_positive, quantum_sources_sinks,
};
use qgraph::linalg::{frobenius, real, CMatrix, C64};
use qgraph::relations::{
    classical_reduction, family_from_classical, lqck_residuals, qck_residuals, CkFamily,
};
use qgraph::{
    AlgebraElement, BlockStructure, DeltaState, LinearMapOnB, QuantumGraph, TensorElement,
};

const THEOREM: f64 = 1e-9;
const EXACT: f64 = 1e-12;

type Check = std::result::Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn instances() -> Vec<(&'static str, QuantumGraph)> {
    let mut all = family_instances(2024);
    all.extend(family_instances(7));
    all
}

fn c1() -> Check {
    for n in [2, 3, 5] {
        let d = DeltaState::uniform(n)
            .map_err(|e| e.to_string())?
            .delta_sq();
        ensure((d - n as f64).abs() <= EXACT, || {
            format!("uniform C^{n}: delta^2 = {d}")
        })?;
    }
    for n in [2, 3] {
        let s = BlockStructure::new(vec![n]).map_err(|e| e.to_string())?;
        let d = DeltaState::tracial(s)
            .map_err(|e| e.to_string())?
            .delta_sq();
        ensure((d - (n * n) as f64).abs() <= EXACT, || {
            format!("trace on M_{n}: delta^2 = {d}")
        })?;
    }
    Ok("delta^2 = N on C^N, n^2 on M_n".into())
}

fn c2() -> Check {
    // construction is part of the timed budget
    let graphs = instances();
    let nontracial = qgraph::constructors::nontracial_m2();
    ensure((nontracial.delta_sq() - 4.5).abs() <= EXACT, || {
        format!("non-tracial delta^2 {}", nontracial.delta_sq())
    })?;
    let mut worst: f64 = 0.0;
    let mut counts = std::collections::BTreeMap::new();
    for (name, g) in &graphs {
        *counts.entry(*name).or_insert(0) += 1;
        let r = qgraph::graph::schur_residual(g.psi(), g.adjacency()).map_err(|e| e.to_string())?;
        worst = worst.max(r);
    }
    for fam in [
        "complete",
        "trivial",
        "rank-one",
        "automorphism",
        "classical",
    ] {
        let c = counts.get(fam).copied().unwrap_or(0);
        ensure(c >= 10, || format!("only {c} {fam} instances"))?;
    }
    ensure(worst <= THEOREM, || format!("Schur residual {worst:.3e}"))?;
    Ok(format!(
        "{} instances, max residual {worst:.2e}",
        graphs.len()
    ))
}

fn c3(graphs: &[(&str, QuantumGraph)]) -> Check {
    let mut worst: f64 = 0.0;
    for (name, g) in graphs {
        let r = indicator_properties(g);
        worst = worst.max(r.max());
        let back = adjacency_from_indicator(&edge_indicator(g), g.psi())
            .map_err(|e| format!("{name}: {e}"))?;
        worst = worst.max(frobenius(&(back.matrix() - g.matrix())));
    }
    ensure(worst <= THEOREM, || {
        format!("indicator residual {worst:.3e}")
    })?;
    let mut r = rng(3);
    for _ in 0..20 {
        let n = rand::Rng::gen_range(&mut r, 1..=5);
        let adj = random_adjacency(&mut r, n);
        let eps = edge_indicator(&classical_graph(&adj).map_err(|e| e.to_string())?);
        for v in 0..n {
            for w in 0..n {
                let expected = C64::new(adj[w][v], 0.0);
                ensure(eps.coeffs()[(v, w)] == expected, || {
                    format!("classical indicator at ({v},{w}) for {adj:?}")
                })?;
            }
        }
    }
    Ok(format!(
        "max residual {worst:.2e}; classical indicators exact"
    ))
}

fn c4(graphs: &[(&str, QuantumGraph)]) -> Check {
    for (name, g) in graphs {
        let choi = is_completely_positive(g.psi(), g.adjacency()).map_err(|e| e.to_string())?;
        let modular = cp_by_modular_criterion(g, THEOREM);
        ensure(choi.completely_positive == modular, || {
            format!(
                "{name}: Choi {} vs modular {modular}",
                choi.completely_positive
            )
        })?;
    }
    let psi = tracial_m2();
    let s = psi.structure().clone();
    let transpose = LinearMapOnB::from_images(&s, |x| {
        AlgebraElement::from_blocks(&s, vec![x.block(0).transpose()]).unwrap()
    });
    let rep = is_completely_positive(&psi, &transpose).map_err(|e| e.to_string())?;
    let ratio = rep.min_eigenvalue / rep.max_abs_eigenvalue;
    ensure(!rep.completely_positive && ratio <= -0.5, || {
        format!("transpose: cp {} ratio {ratio}", rep.completely_positive)
    })?;
    Ok(format!(
        "criteria agree on {} graphs; transpose min/max {ratio:.2}",
        graphs.len()
    ))
}

fn c5(graphs: &[(&str, QuantumGraph)]) -> Check {
    let mut worst: f64 = 0.0;
    for (name, g) in graphs {
        let edge = build_edge_correspondence(g).map_err(|e| format!("{name}: {e}"))?;
        let k = left_kernel_of(&edge);
        worst = worst.max(k.distance);
        let ss = quantum_sources_sinks(g);
        ensure((k.kernel_dim == 0) == ss.sources.is_empty(), || {
            format!("{name}: faithful vs sources")
        })?;
        ensure(fullness_of(&edge).full == ss.sinks.is_empty(), || {
            format!("{name}: full vs sinks")
        })?;
        if *name == "complete" || *name == "trivial" {
            ensure(k.kernel_dim == 0 && fullness_of(&edge).full, || {
                format!("{name} not faithful and full")
            })?;
        }
    }
    ensure(worst <= THEOREM, || format!("kernel distance {worst:.3e}"))?;
    let edge = build_edge_correspondence(&classical_graph(&source_sink()).unwrap())
        .map_err(|e| e.to_string())?;
    let k = left_kernel_of(&edge);
    let f = fullness_of(&edge);
    ensure(k.kernel_dim == 1 && !f.full && f.blocks.len() == 1, || {
        format!("source-sink: kernel {} ideal {:?}", k.kernel_dim, f.blocks)
    })?;
    Ok(format!(
        "max subspace distance {worst:.2e}; source-sink kernel 1, ideal 1 block"
    ))
}

fn c6() -> Check {
    let graphs = [
        ("complete/C2", complete_graph(&uniform(2))),
        ("trivial/M2", trivial_graph(&tracial_m2())),
        ("rank-one/M2", rank_one_graph(&tracial_m2(), &m2_diag_t())),
        ("3-cycle", classical_graph(&three_cycle())),
    ];
    let mut worst: f64 = 0.0;
    for (name, g) in graphs {
        let g = g.map_err(|e| format!("{name}: {e}"))?;
        let r = compact_residual_of(&build_edge_correspondence(&g).map_err(|e| e.to_string())?);
        ensure(r <= THEOREM, || format!("{name}: {r:.3e}"))?;
        worst = worst.max(r);
    }
    Ok(format!("max residual {worst:.2e}"))
}

fn c7(graphs: &[(&str, QuantumGraph)]) -> Check {
    let mut worst: f64 = 0.0;
    for (name, g) in graphs {
        let edge = build_edge_correspondence(g).map_err(|e| format!("{name}: {e}"))?;
        let rep = cp_isomorphism_of(&edge, &tensor_over_adjacency(g).map_err(|e| e.to_string())?);
        ensure(rep.edge_dim == rep.tensor_dim, || {
            format!("{name}: dims {} vs {}", rep.edge_dim, rep.tensor_dim)
        })?;
        worst = worst.max(rep.max());
    }
    ensure(worst <= THEOREM, || {
        format!("isomorphism residual {worst:.3e}")
    })?;
    let dims = [
        (classical_graph(&three_cycle()), 3),
        (complete_graph(&tracial_m2()), 16),
        (trivial_graph(&tracial_m2()), 4),
    ];
    for (g, d) in dims {
        let e =
            build_edge_correspondence(&g.map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure(e.dim() == d, || format!("dim E_G {} expected {d}", e.dim()))?;
    }
    Ok(format!("max residual {worst:.2e}; dims 3/16/4"))
}

fn c8() -> Check {
    let cases = [
        (
            "complete/C2",
            complete_graph(&uniform(2)),
            vec![2, 4, 8, 16],
        ),
        ("trivial/M2", trivial_graph(&tracial_m2()), vec![4, 4, 4, 4]),
        ("3-cycle", classical_graph(&three_cycle()), vec![3, 3, 3, 3]),
    ];
    let mut worst: f64 = 0.0;
    for (name, g, dims) in cases {
        let g = g.map_err(|e| e.to_string())?;
        let f = build_fock(&g, 3).map_err(|e| format!("{name}: {e}"))?;
        ensure(f.level_dims() == dims, || {
            format!("{name}: dims {:?}", f.level_dims())
        })?;
        let rep = representation_residuals(&f);
        let rel = fock_relations(&f);
        worst = worst
            .max(rep.interior_max())
            .max(rel.toeplitz_product)
            .max(rel.toeplitz_coproduct);
        ensure(rep.interior_max() <= THEOREM, || format!("{name}: {rep:?}"))?;
        ensure(
            rel.toeplitz_product.max(rel.toeplitz_coproduct) <= THEOREM,
            || format!("{name}: {rel:?}"),
        )?;
        if name == "complete/C2" {
            ensure(rep.vacuum_defect > 0.0, || "vacuum defect vanishes".into())?;
        }
    }
    Ok(format!("dims match; max interior residual {worst:.2e}"))
}

fn c9(graphs: &[(&str, QuantumGraph)]) -> Check {
    let mut r = rng(9);
    let mut worst_local: f64 = 0.0;
    let mut implications = 0;
    let mut check_implication =
        |family: &CkFamily, g: &QuantumGraph| -> std::result::Result<(), String> {
            let local = lqck_residuals(family, g).map_err(|e| e.to_string())?;
            if local.lqck.max() <= THEOREM {
                let global = qck_residuals(family, g).map_err(|e| e.to_string())?;
                ensure(global.max() <= g.delta_sq() * THEOREM, || {
                    format!("local passes, global {global:?}")
                })?;
                implications += 1;
            }
            Ok(())
        };
    for psi in [
        tracial_m2(),
        qgraph::constructors::nontracial_m2(),
        uniform(3),
        random_delta_form(&mut r, &[2, 1]),
        random_delta_form(&mut r, &[1, 2, 2]),
    ] {
        for h in 1..=2 {
            let u = random_unitary(&mut r, h);
            let t = random_rank_one_t(&mut r, &psi);
            let pairs = [
                (FamilyKind::Trivial, trivial_graph(&psi).unwrap()),
                (
                    FamilyKind::RankOne(t.clone()),
                    rank_one_graph(&psi, &t).unwrap(),
                ),
            ];
            for (kind, g) in pairs {
                let fam = canonical_lqck_family(&psi, &kind, &u).map_err(|e| e.to_string())?;
                let local = lqck_residuals(&fam, &g).map_err(|e| e.to_string())?;
                worst_local = worst_local.max(local.max());
                let global = qck_residuals(&fam, &g).map_err(|e| e.to_string())?;
                ensure(local.max() <= THEOREM && global.max() <= THEOREM, || {
                    format!("canonical family {local:?} {global:?}")
                })?;
                check_implication(&fam, &g)?;
            }
        }
    }
    for (_, g) in graphs
        .iter()
        .filter(|(_, g)| g.dim() <= 3 && quantum_sources_sinks(g).sources.is_empty())
    {
        let f = build_fock(g, 2).map_err(|e| e.to_string())?;
        check_implication(&f.canonical_family().map_err(|e| e.to_string())?, g)?;
    }
    for (_, g) in graphs {
        let zero = CkFamily::zero(g.dim(), 1);
        let q = qck_residuals(&zero, g).map_err(|e| e.to_string())?;
        let expected = 1.0 / g.delta_sq();
        ensure(
            q.r1 == 0.0 && q.r2 == 0.0 && (q.r3 - expected).abs() <= EXACT,
            || format!("zero family {q:?}, expected r3 {expected}"),
        )?;
    }
    // classical dictionary, from Fock families and from partial isometries
    for adj in [
        vec![vec![0.0, 1.0], vec![1.0, 0.0]],
        three_cycle(),
        vec![vec![1.0, 1.0], vec![1.0, 0.0]],
    ] {
        let g = classical_graph(&adj).map_err(|e| e.to_string())?;
        let f = build_fock(&g, 3).map_err(|e| e.to_string())?;
        let rep = classical_reduction(&g, &f.canonical_family().map_err(|e| e.to_string())?)
            .map_err(|e| e.to_string())?;
        ensure(
            rep.max() <= THEOREM && rep.qck.max() <= THEOREM && rep.dictionary <= THEOREM,
            || format!("{adj:?}: {rep:?}"),
        )?;
    }
    let g = classical_graph(&[vec![0.0, 1.0], vec![1.0, 0.0]]).map_err(|e| e.to_string())?;
    let e12 = CMatrix::from_fn(2, 2, |i, j| real(if (i, j) == (0, 1) { 1.0 } else { 0.0 }));
    let fam =
        family_from_classical(&g, &[e12.clone(), e12.transpose()]).map_err(|e| e.to_string())?;
    let rep = classical_reduction(&g, &fam).map_err(|e| e.to_string())?;
    ensure(rep.max() <= THEOREM && rep.qck.max() <= THEOREM, || {
        format!("2-cycle from partial isometries {rep:?}")
    })?;
    Ok(format!(
        "canonical LQCK max {worst_local:.2e}; {implications} local=>global instances"
    ))
}

fn c10() -> Check {
    let mut worst: f64 = 0.0;
    let mut r = rng(10);
    for psi in [
        tracial_m2(),
        qgraph::constructors::nontracial_m2(),
        random_delta_form(&mut r, &[2, 1]),
    ] {
        let b = algebra_correspondence(&psi, None);
        let one = AlgebraElement::identity(psi.structure()).scale(real(1.0 / psi.delta()));
        let rec = recognize(
            CyclicVector::Module(&b, &algebra_vector(&b, &one).unwrap()),
            &psi,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(frobenius(
            &(rec.graph.matrix() - trivial_graph(&psi).unwrap().matrix()),
        ));
        let t = random_rank_one_t(&mut r, &psi);
        let ts = t.adjoint().scale(real(1.0 / psi.delta()));
        let rec = recognize(
            CyclicVector::Module(&b, &algebra_vector(&b, &ts).unwrap()),
            &psi,
        )
        .map_err(|e| e.to_string())?;
        worst = worst.max(frobenius(
            &(rec.graph.matrix() - rank_one_graph(&psi, &t).unwrap().matrix()),
        ));
    }
    let psi = tracial_m2();
    let b = algebra_correspondence(&psi, None);
    let ts = m2_diag_t().adjoint().scale(real(1.0 / psi.delta()));
    let rec = recognize(
        CyclicVector::Module(&b, &algebra_vector(&b, &ts).unwrap()),
        &psi,
    )
    .map_err(|e| e.to_string())?;
    worst = worst.max(frobenius(
        &(rec.graph.matrix() - rank_one_graph(&psi, &m2_diag_t()).unwrap().matrix()),
    ));
    ensure(worst <= THEOREM, || {
        format!("recovered adjacency off by {worst:.3e}")
    })?;
    let s = psi.structure();
    let bad = TensorElement::simple(
        &AlgebraElement::unit(s, 0, 0, 0).unwrap(),
        &AlgebraElement::unit(s, 0, 0, 1).unwrap(),
        s,
    )
    .unwrap();
    let rejected = recognize(CyclicVector::Ambient(&bad), &psi);
    ensure(rejected.is_err(), || "e11 (x) e12 accepted".into())?;
    Ok(format!(
        "max adjacency error {worst:.2e}; e11 (x) e12 rejected ({})",
        rejected.err().unwrap().kind()
    ))
}

fn main() {
    let graphs = instances();
    let cp: Vec<(&str, QuantumGraph)> = graphs
        .iter()
        .filter(|(_, g)| {
            is_completely_positive(g.psi(), g.adjacency())
                .map(|r| r.completely_positive)
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    type Criterion<'a> = (u32, &'a str, Option<Duration>, Box<dyn Fn() -> Check + 'a>);
    let criteria: Vec<Criterion> = vec![
        (
            1,
            "delta-form validation",
            Some(Duration::from_secs(1)),
            Box::new(c1),
        ),
        (
            2,
            "Schur idempotency",
            Some(Duration::from_secs(5)),
            Box::new(c2),
        ),
        (3, "edge-indicator suite", None, Box::new(|| c3(&graphs))),
        (
            4,
            "CP criterion equivalence",
            None,
            Box::new(|| c4(&graphs)),
        ),
        (5, "faithful/full theorem", None, Box::new(|| c5(&cp))),
        (6, "compact-operators theorem", None, Box::new(c6)),
        (7, "correspondence models", None, Box::new(|| c7(&cp))),
        (8, "Fock suite", Some(Duration::from_secs(60)), Box::new(c8)),
        (9, "relation systems", None, Box::new(|| c9(&graphs))),
        (10, "recognition", None, Box::new(c10)),
    ];
    let mut failed = 0;
    for (n, name, limit, run) in criteria {
        let start = Instant::now();
        let mut result = run();
        let took = start.elapsed();
        if let (Ok(_), Some(limit)) = (&result, limit) {
            if took > limit {
                result = Err(format!("took {took:.2?}, limit {limit:?}"));
            }
        }
        match result {
            Ok(detail) => println!("criterion {n:>2} PASS  {name}: {detail} [{took:.2?}]"),
            Err(why) => {
                failed += 1;
                println!("criterion {n:>2} FAIL  {name}: {why} [{took:.2?}]");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
