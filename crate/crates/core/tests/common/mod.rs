#![allow(dead_code)]

use qgraph::constructors::{
    automorphism_graph, classical_graph, complete_graph, delta_form_from_profile, nontracial_m2,
    normalize_rank_one, rank_one_graph, trivial_graph, AutomorphismSpec,
};
use qgraph::linalg::{CMatrix, C64};
use qgraph::{AlgebraElement, BlockStructure, DeltaState, QuantumGraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub const STRUCTURES: &[&[usize]] = &[&[1, 1], &[2], &[1, 1, 1], &[2, 1], &[1, 2], &[3], &[2, 2]];

pub fn complex(rng: &mut ChaCha8Rng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| complex(rng))
}

pub fn random_delta_form(rng: &mut ChaCha8Rng, sizes: &[usize]) -> DeltaState {
    let structure = BlockStructure::new(sizes.to_vec()).unwrap();
    let profile: Vec<Vec<f64>> = sizes
        .iter()
        .map(|&n| (0..n).map(|_| rng.gen_range(0.2..1.0)).collect())
        .collect();
    delta_form_from_profile(structure, &profile).unwrap()
}

pub fn random_element(rng: &mut ChaCha8Rng, structure: &BlockStructure) -> AlgebraElement {
    let blocks = structure
        .sizes()
        .iter()
        .map(|&n| random_matrix(rng, n, n))
        .collect();
    AlgebraElement::from_blocks(structure, blocks).unwrap()
}

pub fn random_unitary(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    random_matrix(rng, n, n).qr().q()
}

pub fn random_phases(rng: &mut ChaCha8Rng, n: usize) -> CMatrix {
    CMatrix::from_diagonal(&qgraph::linalg::CVector::from_iterator(
        n,
        (0..n).map(|_| C64::from_polar(1.0, rng.gen_range(0.0..std::f64::consts::TAU))),
    ))
}

pub fn random_rank_one_t(rng: &mut ChaCha8Rng, psi: &DeltaState) -> AlgebraElement {
    let t = random_element(rng, psi.structure());
    normalize_rank_one(psi, &t).unwrap()
}

pub fn random_adjacency(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<f64>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| if rng.gen_bool(0.5) { 1.0 } else { 0.0 })
                .collect()
        })
        .collect()
}

pub fn tracial_m2() -> DeltaState {
    DeltaState::tracial(BlockStructure::new(vec![2]).unwrap()).unwrap()
}

pub fn uniform(n: usize) -> DeltaState {
    DeltaState::uniform(n).unwrap()
}

pub fn m2_diag_t() -> AlgebraElement {
    let s = BlockStructure::new(vec![2]).unwrap();
    let b = CMatrix::from_diagonal(&qgraph::linalg::CVector::from_vec(vec![
        C64::new(2f64.sqrt(), 0.0),
        C64::new(0.0, 0.0),
    ]));
    AlgebraElement::from_blocks(&s, vec![b]).unwrap()
}

pub fn three_cycle() -> Vec<Vec<f64>> {
    vec![
        vec![0.0, 1.0, 0.0],
        vec![0.0, 0.0, 1.0],
        vec![1.0, 0.0, 0.0],
    ]
}

pub fn source_sink() -> Vec<Vec<f64>> {
    vec![vec![0.0, 1.0], vec![0.0, 0.0]]
}

/// A random automorphism of a structure whose state is invariant: cycles
/// of equal-size blocks share a weight profile, and inner parts commute
/// with the densities.
pub fn random_automorphism(rng: &mut ChaCha8Rng) -> (DeltaState, AutomorphismSpec) {
    let choices: &[(&[usize], &[usize])] = &[
        (&[2, 2], &[1, 0]),
        (&[1, 1, 1], &[1, 2, 0]),
        (&[2, 2, 1], &[1, 0, 2]),
        (&[2], &[0]),
        (&[1, 1], &[1, 0]),
        (&[2, 1, 2], &[2, 1, 0]),
    ];
    let (sizes, perm) = choices[rng.gen_range(0..choices.len())];
    let structure = BlockStructure::new(sizes.to_vec()).unwrap();
    let tracial = rng.gen_bool(0.5);
    let mut profile: Vec<Vec<f64>> = vec![Vec::new(); sizes.len()];
    for a in 0..sizes.len() {
        if !profile[a].is_empty() {
            continue;
        }
        let p: Vec<f64> = (0..sizes[a])
            .map(|_| {
                if tracial {
                    1.0
                } else {
                    rng.gen_range(0.2..1.0)
                }
            })
            .collect();
        let mut b = a;
        loop {
            profile[b] = p.clone();
            b = perm[b];
            if b == a {
                break;
            }
        }
    }
    let psi = delta_form_from_profile(structure, &profile).unwrap();
    let unitaries = sizes
        .iter()
        .map(|&n| {
            if tracial {
                random_unitary(rng, n)
            } else {
                random_phases(rng, n)
            }
        })
        .collect();
    (
        psi,
        AutomorphismSpec {
            permutation: perm.to_vec(),
            unitaries,
        },
    )
}

/// At least ten graphs from each constructor family, labelled by family.
pub fn family_instances(seed: u64) -> Vec<(&'static str, QuantumGraph)> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    let mut states: Vec<DeltaState> = vec![nontracial_m2(), tracial_m2(), uniform(2), uniform(3)];
    while states.len() < 10 {
        let sizes = STRUCTURES[r.gen_range(0..STRUCTURES.len())];
        states.push(random_delta_form(&mut r, sizes));
    }
    for psi in &states {
        out.push(("complete", complete_graph(psi).unwrap()));
        out.push(("trivial", trivial_graph(psi).unwrap()));
        let t = random_rank_one_t(&mut r, psi);
        out.push(("rank-one", rank_one_graph(psi, &t).unwrap()));
    }
    out.push((
        "rank-one",
        rank_one_graph(&tracial_m2(), &m2_diag_t()).unwrap(),
    ));
    for _ in 0..10 {
        let (psi, spec) = random_automorphism(&mut r);
        out.push(("automorphism", automorphism_graph(&psi, &spec).unwrap().0));
    }
    out.push(("classical", classical_graph(&three_cycle()).unwrap()));
    out.push(("classical", classical_graph(&source_sink()).unwrap()));
    for _ in 0..10 {
        let n = r.gen_range(1..=4);
        out.push((
            "classical",
            classical_graph(&random_adjacency(&mut r, n)).unwrap(),
        ));
    }
    out
}
