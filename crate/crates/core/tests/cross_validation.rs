use lcgraph::decomposition::{apply_sequence, decompose};
use lcgraph::equivalence::{
    test_equivalence, test_equivalence_graphs, Verdict, DEFAULT_SEARCH_CAP,
};
use lcgraph::oracle::{self, SingleQubitClifford, StateVector};
use lcgraph::orbit::{enumerate_orbit, same_orbit, DEFAULT_MEMBER_CAP};
use lcgraph::reduction::to_graph_state;
use lcgraph::{Graph, StabilizerGenMatrix, Vertex};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_walk(g: &Graph, steps: usize, rng: &mut impl Rng) -> Graph {
    let mut h = g.clone();
    for _ in 0..steps {
        h = h
            .local_complement(Vertex::from_index(rng.random_range(0..h.n())))
            .unwrap();
    }
    h
}

#[test]
fn solver_agrees_with_orbits_on_sampled_pairs() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for n in [5, 6] {
        for round in 0..60 {
            let g = Graph::random(n, &mut rng);
            let h = if round % 2 == 0 {
                random_walk(&g, 6, &mut rng)
            } else {
                Graph::random(n, &mut rng)
            };
            let r = test_equivalence_graphs(&g, &h, DEFAULT_SEARCH_CAP).unwrap();
            assert!(
                !matches!(r.verdict, Verdict::Indeterminate { .. }),
                "{g:?} vs {h:?}"
            );
            assert_eq!(
                r.is_equivalent(),
                same_orbit(&g, &h, DEFAULT_MEMBER_CAP).unwrap(),
                "{g:?} vs {h:?}"
            );
        }
    }
}

#[test]
fn witnesses_between_graphs_decompose_into_local_complementations() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for _ in 0..100 {
        let g = Graph::random(rng.random_range(1..=9), &mut rng);
        let h = random_walk(&g, 5, &mut rng);
        let r = test_equivalence_graphs(&g, &h, DEFAULT_SEARCH_CAP).unwrap();
        let q = r.witness().expect("graphs in one orbit are equivalent");
        let seq = decompose(q, &g).unwrap();
        assert_eq!(apply_sequence(&g, &seq).unwrap(), h);
    }
}

#[test]
fn reduced_states_are_equivalent_to_their_graphs() {
    for seed in 0..60 {
        let n = 1 + seed as usize % 7;
        let s = StabilizerGenMatrix::random(n, seed);
        let w = to_graph_state(&s).unwrap();
        let r = test_equivalence(
            &s,
            &StabilizerGenMatrix::from_graph(&w.graph),
            DEFAULT_SEARCH_CAP,
        )
        .unwrap();
        assert!(r.is_equivalent());
        // Every member of the graph's orbit is equivalent to s as well.
        let orbit = enumerate_orbit(&w.graph, DEFAULT_MEMBER_CAP).unwrap();
        let far = orbit.members().last().unwrap();
        let r = test_equivalence(
            &s,
            &StabilizerGenMatrix::from_graph(far),
            DEFAULT_SEARCH_CAP,
        )
        .unwrap();
        assert!(r.is_equivalent());
    }
}

/// All `24^n` products of tabulated single-qubit Cliffords applied to `psi`.
fn all_local_images(psi: &StateVector) -> Vec<StateVector> {
    let table = oracle::clifford_table();
    let n = psi.n();
    (0..24usize.pow(n as u32))
        .map(|mut code| {
            let lift: Vec<SingleQubitClifford> = (0..n)
                .map(|_| {
                    let c = table[code % 24].clone();
                    code /= 24;
                    c
                })
                .collect();
            oracle::apply_local_unitaries(psi, &lift).unwrap()
        })
        .collect()
}

#[test]
fn solver_verdicts_hold_on_statevectors() {
    for n in 1..=3 {
        let graphs: Vec<Graph> = Graph::all(n).collect();
        for g in &graphs {
            let psi = oracle::build_graph_state(g).unwrap();
            let images = all_local_images(&psi);
            for h in &graphs {
                let target = StabilizerGenMatrix::from_graph(h);
                let r = test_equivalence_graphs(g, h, DEFAULT_SEARCH_CAP).unwrap();
                match &r.verdict {
                    Verdict::Equivalent(q) => {
                        let image = oracle::apply_local_clifford(&psi, q).unwrap();
                        assert!(oracle::stabilized_up_to_signs(&image, &target).unwrap());
                    }
                    Verdict::Inequivalent => {
                        assert!(
                            !images
                                .iter()
                                .any(|s| oracle::stabilized_up_to_signs(s, &target).unwrap()),
                            "{g:?} reaches {h:?} on statevectors"
                        );
                    }
                    Verdict::Indeterminate { .. } => panic!("indeterminate at n = {n}"),
                }
            }
        }
    }
}

#[test]
fn graphs_in_different_orbits_are_not_stabilized() {
    let g = Graph::path(4);
    let psi = oracle::build_graph_state(&g).unwrap();
    for h in Graph::all(4) {
        let stabilized =
            oracle::stabilized_up_to_signs(&psi, &StabilizerGenMatrix::from_graph(&h)).unwrap();
        assert_eq!(stabilized, h == g);
        if !same_orbit(&g, &h, DEFAULT_MEMBER_CAP).unwrap() {
            assert!(!stabilized);
        }
    }
}
