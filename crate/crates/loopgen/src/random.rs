//! Random connected trivalent graphs for property tests and count checks.

use rand::prelude::*;
use rand::rngs::StdRng;

use crate::graph::{GraphSpec, RecouplingGraph};

/// Samples a random connected trivalent graph with `nv` vertices via the
/// configuration model: pick a number of legs of the right parity, pair the
/// remaining half-edge stubs uniformly, randomize cyclic orders and edge
/// orientations, and reject disconnected outcomes. Self-loops and parallel
/// edges are allowed.
pub fn random_connected_trivalent(nv: usize, rng: &mut StdRng) -> RecouplingGraph {
    assert!(nv >= 1);
    loop {
        let stubs = 3 * nv;
        // J = 3V - 2I with I >= V - 1 for connectivity to be possible
        let max_edges = stubs / 2;
        let min_edges = nv.saturating_sub(1);
        if min_edges > max_edges {
            panic!("no trivalent graph with {nv} vertices");
        }
        let ne = rng.random_range(min_edges..=max_edges);
        let nl = stubs - 2 * ne;

        let mut stub_ids: Vec<usize> = (0..stubs).collect();
        stub_ids.shuffle(rng);
        let half_name = |s: usize| format!("v{}.{}", s / 3, s % 3);

        let mut spec = GraphSpec::default();
        for v in 0..nv {
            let mut halves = vec![half_name(3 * v), half_name(3 * v + 1), half_name(3 * v + 2)];
            // random cyclic order
            halves.shuffle(rng);
            spec.vertices.push((format!("v{v}"), halves));
        }
        for e in 0..ne {
            let (mut s, mut t) = (stub_ids[2 * e], stub_ids[2 * e + 1]);
            if rng.random_bool(0.5) {
                std::mem::swap(&mut s, &mut t);
            }
            spec.edges
                .push((format!("E{e}"), half_name(s), half_name(t)));
        }
        for (l, &s) in stub_ids[2 * ne..].iter().enumerate() {
            spec.legs.push((format!("L{l}"), half_name(s)));
        }
        debug_assert_eq!(spec.legs.len(), nl);

        let g = RecouplingGraph::build(&spec).expect("configuration model output is valid");
        if g.is_connected() {
            return g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn samples_are_valid_and_connected() {
        let mut rng = StdRng::seed_from_u64(7);
        for _ in 0..30 {
            let nv = rng.random_range(1..=8);
            let g = random_connected_trivalent(nv, &mut rng);
            assert!(g.is_connected());
            assert_eq!(g.leg_count() + 2 * g.edge_count(), 3 * g.vertex_count());
        }
    }

    #[test]
    fn serialization_round_trips_on_random_graphs() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let nv = rng.random_range(1..=8);
            let g = random_connected_trivalent(nv, &mut rng);
            let back = RecouplingGraph::parse(&g.serialize()).unwrap();
            assert_eq!(g, back);
        }
    }
}
