//! Orbits of labeled graphs under local complementation.

use std::collections::HashMap;

use thiserror::Error;

use crate::decomposition::{LcSequence, LcStep};
use crate::graphs::{Graph, Vertex};
use crate::par::Execution;

/// Members enumerated before giving up with [`OrbitError::CapExceeded`].
pub const DEFAULT_MEMBER_CAP: usize = 1_000_000;

/// Largest vertex count accepted by [`permutation_canonical_form`].
pub const ISOMORPHISM_MAX_VERTICES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OrbitError {
    #[error("orbit has more than {0} members")]
    CapExceeded(usize),
    #[error("isomorphism grouping is limited to {max} vertices, got {n}")]
    TooManyVertices { n: usize, max: usize },
}

/// All graphs reachable from a seed by local complementations.
///
/// Members are stored in breadth-first order, so each member's transcript is a
/// shortest sequence of single complementations from the seed.
#[derive(Debug, Clone)]
pub struct Orbit {
    members: Vec<Graph>,
    index: HashMap<Vec<u64>, usize>,
    parent: Vec<Option<(usize, Vertex)>>,
    canonical: usize,
}

impl Orbit {
    pub fn seed(&self) -> &Graph {
        &self.members[0]
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members in breadth-first order from the seed.
    pub fn members(&self) -> &[Graph] {
        &self.members
    }

    pub fn contains(&self, g: &Graph) -> bool {
        g.n() == self.seed().n() && self.index.contains_key(&g.order_key())
    }

    /// The smallest member in the order of [`Graph`]'s `Ord`.
    pub fn canonical(&self) -> &Graph {
        &self.members[self.canonical]
    }

    /// A shortest sequence taking the seed to `g`.
    pub fn transcript(&self, g: &Graph) -> Option<LcSequence> {
        if !self.contains(g) {
            return None;
        }
        let mut at = self.index[&g.order_key()];
        let mut steps = Vec::new();
        while let Some((parent, v)) = self.parent[at] {
            steps.push(LcStep::Single(v));
            at = parent;
        }
        steps.reverse();
        Some(LcSequence::new(steps))
    }

    /// Members sorted by `Ord`, starting with the canonical one.
    pub fn sorted_members(&self) -> Vec<Graph> {
        let mut out = self.members.clone();
        out.sort();
        out
    }
}

pub fn enumerate_orbit(g: &Graph, member_cap: usize) -> Result<Orbit, OrbitError> {
    enumerate_orbit_with(g, member_cap, Execution::default())
}

/// Breadth-first search over `g_1..g_n`. Each level's neighbours may be computed
/// in parallel; they are merged in (parent, vertex) order, so the result does
/// not depend on `exec`.
pub fn enumerate_orbit_with(
    g: &Graph,
    member_cap: usize,
    exec: Execution,
) -> Result<Orbit, OrbitError> {
    let mut members = vec![g.clone()];
    let mut index = HashMap::from([(g.order_key(), 0usize)]);
    let mut parent = vec![None];
    if member_cap == 0 {
        return Err(OrbitError::CapExceeded(member_cap));
    }

    let mut level = 0..1;
    while !level.is_empty() {
        let expanded = expand_level(&members[level.clone()], &index, exec);
        let next_start = members.len();
        for (offset, found) in expanded.into_iter().enumerate() {
            for (v, h, key) in found {
                if index.contains_key(&key) {
                    continue;
                }
                if members.len() == member_cap {
                    return Err(OrbitError::CapExceeded(member_cap));
                }
                index.insert(key, members.len());
                members.push(h);
                parent.push(Some((level.start + offset, v)));
            }
        }
        level = next_start..members.len();
    }

    let canonical = (0..members.len())
        .min_by(|&a, &b| members[a].cmp(&members[b]))
        .expect("seed is a member");
    Ok(Orbit {
        members,
        index,
        parent,
        canonical,
    })
}

type Neighbour = (Vertex, Graph, Vec<u64>);

/// Unseen neighbours of each frontier graph with their keys, in vertex order.
fn expand_level(
    frontier: &[Graph],
    index: &HashMap<Vec<u64>, usize>,
    exec: Execution,
) -> Vec<Vec<Neighbour>> {
    let expand = |m: &Graph| -> Vec<Neighbour> {
        (0..m.n())
            .filter_map(|i| {
                let mut h = m.clone();
                h.local_complement_in_place(i);
                let key = h.order_key();
                (!index.contains_key(&key)).then(|| (Vertex::from_index(i), h, key))
            })
            .collect()
    };
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return frontier.par_iter().map(expand).collect();
    }
    let _ = exec;
    frontier.iter().map(expand).collect()
}

pub fn canonical_form(g: &Graph, member_cap: usize) -> Result<Graph, OrbitError> {
    Ok(enumerate_orbit(g, member_cap)?.canonical().clone())
}

/// Whether `h` lies in the orbit of `g`.
pub fn same_orbit(g: &Graph, h: &Graph, member_cap: usize) -> Result<bool, OrbitError> {
    if g.n() != h.n() {
        return Ok(false);
    }
    Ok(enumerate_orbit(g, member_cap)?.contains(h))
}

/// Experimental: smallest relabeling of `g` over all vertex permutations.
pub fn permutation_canonical_form(g: &Graph) -> Result<Graph, OrbitError> {
    let n = g.n();
    if n > ISOMORPHISM_MAX_VERTICES {
        return Err(OrbitError::TooManyVertices {
            n,
            max: ISOMORPHISM_MAX_VERTICES,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = g.clone();
    // Heap's algorithm.
    let mut counters = vec![0usize; n];
    let mut i = 0;
    while i < n {
        if counters[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(counters[i], i);
            }
            let candidate = g.permuted(&perm);
            if candidate < best {
                best = candidate;
            }
            counters[i] += 1;
            i = 0;
        } else {
            counters[i] = 0;
            i += 1;
        }
    }
    Ok(best)
}

/// Experimental: groups `graphs` into isomorphism classes, returning indices.
pub fn group_by_isomorphism(graphs: &[Graph]) -> Result<Vec<Vec<usize>>, OrbitError> {
    let mut classes: Vec<(Graph, Vec<usize>)> = Vec::new();
    for (i, g) in graphs.iter().enumerate() {
        let key = permutation_canonical_form(g)?;
        match classes.iter_mut().find(|(k, _)| *k == key) {
            Some((_, members)) => members.push(i),
            None => classes.push((key, vec![i])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::decomposition::apply_sequence;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::collections::BTreeSet;

    fn v(label: usize) -> Vertex {
        Vertex::new(label)
    }

    #[test]
    fn small_orbits() {
        for n in 1..6 {
            let o = enumerate_orbit(&Graph::empty(n), DEFAULT_MEMBER_CAP).unwrap();
            assert_eq!(o.len(), 1);
        }
        assert_eq!(
            enumerate_orbit(&Graph::path(2), DEFAULT_MEMBER_CAP)
                .unwrap()
                .len(),
            1
        );

        let o = enumerate_orbit(&Graph::complete(3), DEFAULT_MEMBER_CAP).unwrap();
        let expected: BTreeSet<Graph> = [
            Graph::complete(3),
            Graph::star(3, v(1)),
            Graph::star(3, v(2)),
            Graph::star(3, v(3)),
        ]
        .into();
        assert_eq!(
            o.members().iter().cloned().collect::<BTreeSet<_>>(),
            expected
        );
        assert_eq!(
            *o.canonical(),
            Graph::from_edges(3, [(1, 3), (2, 3)]).unwrap()
        );
    }

    #[test]
    fn canonical_forms() {
        let k3 = canonical_form(&Graph::complete(3), DEFAULT_MEMBER_CAP).unwrap();
        assert_eq!(
            k3,
            canonical_form(&Graph::path(3), DEFAULT_MEMBER_CAP).unwrap()
        );
        assert_eq!(canonical_form(&k3, DEFAULT_MEMBER_CAP).unwrap(), k3);
        assert_eq!(
            canonical_form(&Graph::empty(4), DEFAULT_MEMBER_CAP).unwrap(),
            Graph::empty(4)
        );
    }

    #[test]
    fn closure_and_transcripts() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..20 {
            let g = Graph::random(rng.random_range(1..7), &mut rng);
            let o = enumerate_orbit(&g, DEFAULT_MEMBER_CAP).unwrap();
            assert_eq!(o.seed(), &g);
            assert!(o.transcript(&g).unwrap().is_empty());
            for m in o.members() {
                for i in m.vertices() {
                    assert!(o.contains(&m.local_complement(i).unwrap()));
                }
                assert_eq!(apply_sequence(&g, &o.transcript(m).unwrap()).unwrap(), *m);
            }
            assert!(o.members().iter().all(|m| o.canonical() <= m));
        }
    }

    #[test]
    fn transcripts_are_shortest() {
        let o = enumerate_orbit(&Graph::cycle(5), DEFAULT_MEMBER_CAP).unwrap();
        // Depths from an independent breadth-first search.
        let mut depth = HashMap::from([(Graph::cycle(5), 0usize)]);
        let mut frontier = vec![Graph::cycle(5)];
        let mut d = 0;
        while !frontier.is_empty() {
            d += 1;
            let mut next = Vec::new();
            for m in &frontier {
                for i in m.vertices() {
                    let h = m.local_complement(i).unwrap();
                    if !depth.contains_key(&h) {
                        depth.insert(h.clone(), d);
                        next.push(h);
                    }
                }
            }
            frontier = next;
        }
        assert_eq!(depth.len(), o.len());
        for m in o.members() {
            assert_eq!(o.transcript(m).unwrap().len(), depth[m]);
        }
    }

    #[test]
    fn size_independent_of_seed() {
        let o = enumerate_orbit(&Graph::path(5), DEFAULT_MEMBER_CAP).unwrap();
        for m in o.members().iter().step_by(7) {
            let other = enumerate_orbit(m, DEFAULT_MEMBER_CAP).unwrap();
            assert_eq!(other.len(), o.len());
            assert_eq!(other.canonical(), o.canonical());
        }
    }

    #[test]
    fn cap() {
        let err = enumerate_orbit(&Graph::complete(3), 3).unwrap_err();
        assert_eq!(err, OrbitError::CapExceeded(3));
        assert_eq!(enumerate_orbit(&Graph::complete(3), 4).unwrap().len(), 4);
    }

    #[test]
    fn same_orbit_examples() {
        let g = Graph::path(4);
        assert!(same_orbit(&g, &g.local_complement(v(2)).unwrap(), DEFAULT_MEMBER_CAP).unwrap());
        assert!(!same_orbit(&Graph::path(2), &Graph::empty(2), DEFAULT_MEMBER_CAP).unwrap());
        assert!(!same_orbit(&Graph::path(2), &Graph::path(3), DEFAULT_MEMBER_CAP).unwrap());
    }

    #[test]
    fn execution_modes_agree() {
        for g in [Graph::cycle(6), Graph::path(6), Graph::complete(5)] {
            let seq = enumerate_orbit_with(&g, DEFAULT_MEMBER_CAP, Execution::Sequential).unwrap();
            let par = enumerate_orbit_with(&g, DEFAULT_MEMBER_CAP, Execution::Parallel).unwrap();
            assert_eq!(seq.members(), par.members());
            assert_eq!(seq.canonical(), par.canonical());
            for m in seq.members() {
                assert_eq!(seq.transcript(m), par.transcript(m));
            }
        }
    }

    #[test]
    fn isomorphism_grouping() {
        let stars: Vec<Graph> = (1..=4).map(|c| Graph::star(4, v(c))).collect();
        let mut graphs = stars.clone();
        graphs.push(Graph::path(4));
        let classes = group_by_isomorphism(&graphs).unwrap();
        assert_eq!(classes, vec![vec![0, 1, 2, 3], vec![4]]);
        let key = permutation_canonical_form(&stars[2]).unwrap();
        assert!(stars.iter().all(|s| key <= *s));
        assert!(permutation_canonical_form(&Graph::empty(9)).is_err());
    }
}
