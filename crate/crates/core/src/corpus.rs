//! The named test corpus. The `fixtures/` directory at the workspace root holds
//! the same graphs as text files; a test keeps the two in sync.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::{PatternName, SimpleGraph};

/// Seed of the first random corpus graph; graph `i` uses `RANDOM_SEED + i`.
pub const RANDOM_SEED: u64 = 0x5eed_2024;
pub const RANDOM_COUNT: usize = 20;
pub const RANDOM_VERTICES: usize = 6;

#[derive(Clone, Debug)]
pub struct NamedGraph {
    pub name: String,
    pub graph: SimpleGraph,
}

fn numbered(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

pub fn l_graph() -> SimpleGraph {
    SimpleGraph::from_fn(numbered(3), |_, _| false).unwrap()
}

pub fn l_plus() -> SimpleGraph {
    SimpleGraph::from_fn(numbered(3), |i, j| (i, j) == (0, 1)).unwrap()
}

pub fn k23() -> SimpleGraph {
    PatternName::K23.graph()
}

pub fn k23_plus() -> SimpleGraph {
    PatternName::K23Plus.graph()
}

/// `K23` without the edge `a1 b1`.
pub fn k23_minus_edge() -> SimpleGraph {
    SimpleGraph::new(
        &["a1", "a2", "b1", "b2", "b3"],
        &[("a1", "b2"), ("a1", "b3"), ("a2", "b1"), ("a2", "b2"), ("a2", "b3")],
    )
    .unwrap()
}

pub fn cycle(n: usize) -> SimpleGraph {
    SimpleGraph::from_fn(numbered(n), |i, j| (i + 1) % n == j || (j + 1) % n == i).unwrap()
}

pub fn complete(n: usize) -> SimpleGraph {
    SimpleGraph::from_fn(numbered(n), |_, _| true).unwrap()
}

/// Path on `n` vertices `1 - 2 - … - n`.
pub fn path(n: usize) -> SimpleGraph {
    SimpleGraph::from_fn(numbered(n), |i, j| i + 1 == j).unwrap()
}

/// Three-vertex path `b - a - c` with the middle vertex `a` smallest in the
/// order, so `a` commutes with both `b` and `c`.
pub fn path3() -> SimpleGraph {
    SimpleGraph::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap()
}

/// Two non-adjacent vertices `u`, `v`: the infinite dihedral group.
pub fn d_infinity() -> SimpleGraph {
    SimpleGraph::new::<&str>(&["u", "v"], &[]).unwrap()
}

/// Random graph on six vertices `v0..v5`, each edge present with probability 1/2.
pub fn random_graph(index: usize) -> SimpleGraph {
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED + index as u64);
    let names: Vec<String> = (0..RANDOM_VERTICES).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    for i in 0..RANDOM_VERTICES {
        for j in i + 1..RANDOM_VERTICES {
            if rng.gen_bool(0.5) {
                edges.push((names[i].clone(), names[j].clone()));
            }
        }
    }
    SimpleGraph::with_order(&names, &edges).unwrap()
}

fn named(name: impl Into<String>, graph: SimpleGraph) -> NamedGraph {
    NamedGraph { name: name.into(), graph }
}

/// Hand-picked graphs only (no random ones).
pub fn named_graphs() -> Vec<NamedGraph> {
    let mut out = vec![
        named("l", l_graph()),
        named("l_plus", l_plus()),
        named("k23", k23()),
        named("k23_plus", k23_plus()),
        named("k23_minus_edge", k23_minus_edge()),
        named("c4", cycle(4)),
        named("c5", cycle(5)),
        named("dinf", d_infinity()),
    ];
    for m in 1..=4 {
        out.push(named(format!("k{m}"), complete(m)));
    }
    out.push(named("path2", path(2)));
    out.push(named("path3", path3()));
    out.push(named("path4", path(4)));
    out
}

pub fn random_graphs() -> Vec<NamedGraph> {
    (0..RANDOM_COUNT)
        .map(|i| named(format!("random_{i:02}"), random_graph(i)))
        .collect()
}

/// The full corpus: named graphs followed by the random ones.
pub fn standard() -> Vec<NamedGraph> {
    let mut all = named_graphs();
    all.extend(random_graphs());
    all
}
