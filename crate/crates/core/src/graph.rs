//! Finite simple graphs with named vertices, links and stars, and induced
//! subgraph detection for the handful of small patterns the classifier needs.
//!
//! Vertices are stored in ShortLex order: index `i` is the `i`-th vertex of
//! the order used by every downstream normal form. Vertex sets are bitmasks,
//! so a graph holds at most 64 vertices.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest supported vertex count.
pub const MAX_VERTICES: usize = 64;

/// A subset of the vertex indices of one graph.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub(crate) const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn singleton(v: usize) -> Self {
        debug_assert!(v < MAX_VERTICES);
        VertexSet(1 << v)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < MAX_VERTICES && self.0 & (1 << v) != 0
    }

    pub fn is_subset(self, other: VertexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & !other.0)
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    /// Members in increasing index order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let v = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(v)
        })
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut s = VertexSet::EMPTY;
        for v in iter {
            s.insert(v);
        }
        s
    }
}

/// Undirected simple graph. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct SimpleGraph {
    names: Vec<String>,
    adjacency: Vec<u64>,
    index: HashMap<String, usize>,
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("vertices", &self.names)
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}

fn check_name(name: &str) -> Result<()> {
    if name.is_empty() {
        return Err(Error::InvalidVertexName(name.to_owned()));
    }
    // `e` is the identity token and `,` separates vertex lists on the command line.
    if name == "e" || name.contains(',') || name.chars().any(char::is_whitespace) {
        return Err(Error::InvalidVertexName(name.to_owned()));
    }
    Ok(())
}

impl SimpleGraph {
    /// Builds a graph with vertices ordered lexicographically by name.
    pub fn new<S: AsRef<str>>(vertices: &[S], edges: &[(S, S)]) -> Result<Self> {
        let mut names: Vec<String> = vertices.iter().map(|v| v.as_ref().to_owned()).collect();
        names.sort();
        Self::with_order(&names, edges)
    }

    /// Builds a graph whose ShortLex order is exactly the order of `vertices`.
    pub fn with_order<S: AsRef<str>, T: AsRef<str>>(vertices: &[S], edges: &[(T, T)]) -> Result<Self> {
        if vertices.len() > MAX_VERTICES {
            return Err(Error::TooManyVertices(vertices.len()));
        }
        let mut names = Vec::with_capacity(vertices.len());
        let mut index = HashMap::new();
        for v in vertices {
            let v = v.as_ref();
            check_name(v)?;
            if index.insert(v.to_owned(), names.len()).is_some() {
                return Err(Error::DuplicateVertex(v.to_owned()));
            }
            names.push(v.to_owned());
        }
        let mut graph = SimpleGraph {
            adjacency: vec![0; names.len()],
            names,
            index,
        };
        for (a, b) in edges {
            let i = graph.vertex(a.as_ref())?;
            let j = graph.vertex(b.as_ref())?;
            if i == j {
                return Err(Error::SelfLoop(a.as_ref().to_owned()));
            }
            graph.adjacency[i] |= 1 << j;
            graph.adjacency[j] |= 1 << i;
        }
        Ok(graph)
    }

    /// Builds a graph on vertices `0..n` named by `name`, with adjacency from a
    /// predicate. Used by the corpus and exhaustive sweeps.
    pub fn from_fn(names: Vec<String>, adjacent: impl Fn(usize, usize) -> bool) -> Result<Self> {
        let n = names.len();
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                if adjacent(i, j) {
                    edges.push((names[i].clone(), names[j].clone()));
                }
            }
        }
        Self::with_order(&names, &edges)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, v: usize) -> &str {
        &self.names[v]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Index of the vertex called `name`.
    pub fn vertex(&self, name: &str) -> Result<usize> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| Error::UnknownVertex(name.to_owned()))
    }

    pub fn all(&self) -> VertexSet {
        if self.len() == MAX_VERTICES {
            VertexSet(u64::MAX)
        } else {
            VertexSet((1u64 << self.len()) - 1)
        }
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adjacency[u] & (1 << v) != 0
    }

    /// Neighbours of `v` as a bitmask.
    pub fn neighbours(&self, v: usize) -> VertexSet {
        VertexSet(self.adjacency[v])
    }

    pub(crate) fn adjacency_masks(&self) -> &[u64] {
        &self.adjacency
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |i| {
            VertexSet(self.adjacency[i] & u64::MAX.checked_shl(i as u32 + 1).unwrap_or(0))
                .iter()
                .map(move |j| (i, j))
        })
    }

    pub fn edge_count(&self) -> usize {
        self.edges().count()
    }

    /// Vertex set from names, rejecting unknown ones.
    pub fn vertex_set<S: AsRef<str>>(&self, names: &[S]) -> Result<VertexSet> {
        names
            .iter()
            .map(|n| self.vertex(n.as_ref()))
            .collect::<Result<VertexSet>>()
    }

    /// Parses a comma separated vertex list; the empty string is the empty set.
    pub fn parse_vertex_list(&self, text: &str) -> Result<VertexSet> {
        let names: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
        self.vertex_set(&names)
    }

    pub fn check_subset(&self, s: VertexSet) -> Result<()> {
        if s.is_subset(self.all()) {
            Ok(())
        } else {
            Err(Error::NotASubset)
        }
    }

    pub fn set_names(&self, s: VertexSet) -> Vec<String> {
        s.iter().map(|v| self.names[v].clone()).collect()
    }

    /// `{a,b}` style rendering.
    pub fn format_set(&self, s: VertexSet) -> String {
        format!("{{{}}}", self.set_names(s).join(","))
    }

    /// Vertices adjacent to every member of `s`. The empty family intersects to
    /// the whole vertex set.
    pub fn link(&self, s: VertexSet) -> Result<VertexSet> {
        self.check_subset(s)?;
        Ok(self.link_unchecked(s))
    }

    pub(crate) fn link_unchecked(&self, s: VertexSet) -> VertexSet {
        VertexSet(s.iter().fold(self.all().bits(), |acc, v| acc & self.adjacency[v]))
    }

    pub fn star(&self, v: usize) -> Result<VertexSet> {
        if v >= self.len() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(VertexSet(self.adjacency[v] | (1 << v)))
    }

    pub fn is_clique(&self, s: VertexSet) -> Result<bool> {
        self.check_subset(s)?;
        Ok(s.iter().all(|v| s.difference(VertexSet::singleton(v)).is_subset(self.neighbours(v))))
    }

    /// `⋂_v Star(v)`: the vertices adjacent to all others.
    pub fn center_clique(&self) -> Result<VertexSet> {
        if self.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok((0..self.len()).fold(self.all(), |acc, v| {
            acc.intersection(VertexSet(self.adjacency[v] | (1 << v)))
        }))
    }

    /// Induced subgraph on `s`, keeping the relative vertex order.
    pub fn induced(&self, s: VertexSet) -> Result<SimpleGraph> {
        self.check_subset(s)?;
        let keep: Vec<usize> = s.iter().collect();
        let names = keep.iter().map(|&v| self.names[v].clone()).collect();
        SimpleGraph::from_fn(names, |i, j| self.is_adjacent(keep[i], keep[j]))
    }

    /// The join: every vertex of `self` adjacent to every vertex of `other`.
    pub fn join(&self, other: &SimpleGraph) -> Result<SimpleGraph> {
        let mut names = self.names.clone();
        names.extend(other.names.iter().cloned());
        let n = self.len();
        SimpleGraph::from_fn(names, |i, j| match (i < n, j < n) {
            (true, true) => self.is_adjacent(i, j),
            (false, false) => other.is_adjacent(i - n, j - n),
            _ => true,
        })
    }

    /// Adds the edge `uv` (no-op if already present).
    pub fn with_edge(&self, u: usize, v: usize) -> Result<SimpleGraph> {
        if u == v {
            return Err(Error::SelfLoop(self.names[u].clone()));
        }
        let mut g = self.clone();
        g.adjacency[u] |= 1 << v;
        g.adjacency[v] |= 1 << u;
        Ok(g)
    }

    /// First induced embedding of `pattern`, scanning ordered vertex tuples
    /// lexicographically.
    pub fn find_induced(&self, pattern: PatternName) -> Option<Embedding> {
        let shape = pattern.shape();
        let mut chosen = Vec::with_capacity(shape.len());
        if self.extend_embedding(&shape, &mut chosen) {
            Some(Embedding { pattern, vertices: chosen })
        } else {
            None
        }
    }

    fn extend_embedding(&self, shape: &[u8], chosen: &mut Vec<usize>) -> bool {
        let k = chosen.len();
        if k == shape.len() {
            return true;
        }
        for v in 0..self.len() {
            if chosen.contains(&v) {
                continue;
            }
            let consistent = chosen
                .iter()
                .enumerate()
                .all(|(i, &w)| (shape[k] >> i & 1 == 1) == self.is_adjacent(v, w));
            if consistent {
                chosen.push(v);
                if self.extend_embedding(shape, chosen) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }

    /// Serializes to the text format accepted by [`SimpleGraph::parse`]. The
    /// `order:` line is emitted only when the order is not lexicographic.
    pub fn to_text(&self) -> String {
        let mut out = format!("vertices: {}\n", self.names.join(" "));
        let mut sorted = self.names.clone();
        sorted.sort();
        if sorted != self.names {
            out.push_str(&format!("order: {}\n", self.names.join(" ")));
        }
        for (i, j) in self.edges() {
            out.push_str(&format!("edge: {} {}\n", self.names[i], self.names[j]));
        }
        out
    }

    /// Parses the line-oriented graph format:
    ///
    /// ```text
    /// # comment
    /// vertices: a b c
    /// edge: a b
    /// order: c b a
    /// ```
    pub fn parse(text: &str) -> Result<SimpleGraph> {
        let mut vertices: Option<Vec<String>> = None;
        let mut order: Option<(usize, Vec<String>)> = None;
        let mut edges: Vec<(usize, String, String)> = Vec::new();
        let perr = |line: usize, message: String| Error::Parse { line, message };

        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, rest) = line
                .split_once(':')
                .ok_or_else(|| perr(line_no, format!("expected `key: value`, got `{line}`")))?;
            let tokens: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            match key.trim() {
                "vertices" => {
                    if vertices.is_some() {
                        return Err(perr(line_no, "duplicate `vertices:` line".into()));
                    }
                    if !edges.is_empty() || order.is_some() {
                        return Err(perr(line_no, "`vertices:` must come first".into()));
                    }
                    if tokens.is_empty() {
                        return Err(perr(line_no, "graph must have at least one vertex".into()));
                    }
                    for t in &tokens {
                        check_name(t).map_err(|e| perr(line_no, e.to_string()))?;
                    }
                    vertices = Some(tokens);
                }
                "edge" => {
                    if vertices.is_none() {
                        return Err(perr(line_no, "`edge:` before `vertices:`".into()));
                    }
                    if tokens.len() != 2 {
                        return Err(perr(line_no, format!("edge needs 2 endpoints, got {}", tokens.len())));
                    }
                    let mut it = tokens.into_iter();
                    edges.push((line_no, it.next().unwrap(), it.next().unwrap()));
                }
                "order" => {
                    if vertices.is_none() {
                        return Err(perr(line_no, "`order:` before `vertices:`".into()));
                    }
                    if order.is_some() {
                        return Err(perr(line_no, "duplicate `order:` line".into()));
                    }
                    order = Some((line_no, tokens));
                }
                other => return Err(perr(line_no, format!("unknown key `{other}`"))),
            }
        }

        let vertices = vertices.ok_or_else(|| perr(1, "missing `vertices:` line".into()))?;
        let ordered = match order {
            Some((line_no, order)) => {
                let mut a = order.clone();
                let mut b = vertices.clone();
                a.sort();
                b.sort();
                if a != b {
                    return Err(perr(line_no, "`order:` must list every vertex exactly once".into()));
                }
                order
            }
            None => {
                let mut v = vertices.clone();
                v.sort();
                v
            }
        };
        let mut graph =
            SimpleGraph::with_order::<String, String>(&ordered, &[]).map_err(|e| perr(1, e.to_string()))?;
        for (line_no, a, b) in edges {
            let i = graph.vertex(&a).map_err(|e| perr(line_no, e.to_string()))?;
            let j = graph.vertex(&b).map_err(|e| perr(line_no, e.to_string()))?;
            if i == j {
                return Err(perr(line_no, format!("self-loop at `{a}`")));
            }
            if graph.is_adjacent(i, j) {
                return Err(perr(line_no, format!("duplicate edge `{a} {b}`")));
            }
            graph.adjacency[i] |= 1 << j;
            graph.adjacency[j] |= 1 << i;
        }
        Ok(graph)
    }
}

/// The small pattern graphs the classification theorems are phrased in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PatternName {
    /// Three vertices, no edges.
    #[serde(rename = "L")]
    L,
    /// Three vertices, one edge.
    #[serde(rename = "L_PLUS")]
    LPlus,
    /// Complete bipartite on `{a1,a2}` and `{b1,b2,b3}`.
    #[serde(rename = "K23")]
    K23,
    /// `K23` plus the edge `b1 b2`.
    #[serde(rename = "K23_PLUS")]
    K23Plus,
    /// The 4-cycle.
    #[serde(rename = "C4")]
    C4,
}

impl PatternName {
    pub const ALL: [PatternName; 5] = [
        PatternName::L,
        PatternName::LPlus,
        PatternName::K23,
        PatternName::K23Plus,
        PatternName::C4,
    ];

    /// Row `k` holds the adjacency of pattern vertex `k` to vertices `0..k`.
    fn shape(self) -> Vec<u8> {
        match self {
            PatternName::L => vec![0, 0, 0],
            // e1 - e2, isolated third vertex
            PatternName::LPlus => vec![0, 0b1, 0],
            // a1 a2 b1 b2 b3
            PatternName::K23 => vec![0, 0, 0b11, 0b11, 0b11],
            PatternName::K23Plus => vec![0, 0, 0b11, 0b111, 0b11],
            // c1 - c2 - c3 - c4 - c1
            PatternName::C4 => vec![0, 0b1, 0b10, 0b101],
        }
    }

    pub fn vertex_labels(self) -> &'static [&'static str] {
        match self {
            PatternName::L => &["l1", "l2", "l3"],
            PatternName::LPlus => &["e1", "e2", "iso"],
            PatternName::K23 | PatternName::K23Plus => &["a1", "a2", "b1", "b2", "b3"],
            PatternName::C4 => &["c1", "c2", "c3", "c4"],
        }
    }

    pub fn size(self) -> usize {
        self.shape().len()
    }

    /// The pattern itself as a graph, vertices named by [`Self::vertex_labels`].
    pub fn graph(self) -> SimpleGraph {
        let shape = self.shape();
        let names = self.vertex_labels().iter().map(|s| s.to_string()).collect();
        SimpleGraph::from_fn(names, |i, j| {
            let (lo, hi) = if i < j { (i, j) } else { (j, i) };
            shape[hi] >> lo & 1 == 1
        })
        .expect("pattern graphs are valid")
    }

    pub fn as_str(self) -> &'static str {
        match self {
            PatternName::L => "L",
            PatternName::LPlus => "L_PLUS",
            PatternName::K23 => "K23",
            PatternName::K23Plus => "K23_PLUS",
            PatternName::C4 => "C4",
        }
    }
}

impl fmt::Display for PatternName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// An induced embedding: pattern vertex `k` maps to graph vertex `vertices[k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Embedding {
    pub pattern: PatternName,
    pub vertices: Vec<usize>,
}

impl Embedding {
    pub fn image(&self) -> VertexSet {
        self.vertices.iter().copied().collect()
    }

    /// Re-checks injectivity and preservation of edges and non-edges.
    pub fn verify(&self, graph: &SimpleGraph) -> bool {
        let shape = self.pattern.shape();
        if self.vertices.len() != shape.len() || self.image().len() != shape.len() {
            return false;
        }
        if self.vertices.iter().any(|&v| v >= graph.len()) {
            return false;
        }
        (0..shape.len()).all(|k| {
            (0..k).all(|i| (shape[k] >> i & 1 == 1) == graph.is_adjacent(self.vertices[k], self.vertices[i]))
        })
    }

    pub fn named(&self, graph: &SimpleGraph) -> Vec<(String, String)> {
        self.pattern
            .vertex_labels()
            .iter()
            .zip(&self.vertices)
            .map(|(p, &v)| (p.to_string(), graph.name(v).to_owned()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k23() -> SimpleGraph {
        PatternName::K23.graph()
    }

    fn cycle(n: usize) -> SimpleGraph {
        let names = (1..=n).map(|i| i.to_string()).collect();
        SimpleGraph::from_fn(names, |i, j| (i + 1) % n == j || (j + 1) % n == i).unwrap()
    }

    fn set(g: &SimpleGraph, names: &[&str]) -> VertexSet {
        g.vertex_set(names).unwrap()
    }

    #[test]
    fn link_examples() {
        let g = k23();
        assert_eq!(g.link(set(&g, &["a1"])).unwrap(), set(&g, &["b1", "b2", "b3"]));
        assert_eq!(g.link(set(&g, &["b1", "b2", "b3"])).unwrap(), set(&g, &["a1", "a2"]));
        let edge = SimpleGraph::new(&["v", "w"], &[("v", "w")]).unwrap();
        assert_eq!(edge.link(edge.all()).unwrap(), VertexSet::EMPTY);
        assert_eq!(g.link(VertexSet::EMPTY).unwrap(), g.all());
    }

    #[test]
    fn link_rejects_foreign_sets() {
        let g = k23();
        assert!(matches!(g.link(VertexSet::singleton(7)), Err(Error::NotASubset)));
        assert!(matches!(g.vertex_set(&["zz"]), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn star_examples() {
        let c4 = cycle(4);
        assert_eq!(c4.star(c4.vertex("1").unwrap()).unwrap(), set(&c4, &["1", "2", "4"]));
        let g = k23();
        assert_eq!(g.star(0).unwrap(), set(&g, &["a1", "b1", "b2", "b3"]));
        let single = SimpleGraph::new::<&str>(&["v"], &[]).unwrap();
        assert_eq!(single.star(0).unwrap(), single.all());
        assert!(single.star(3).is_err());
    }

    #[test]
    fn clique_examples() {
        let plus = PatternName::K23Plus.graph();
        assert!(plus.is_clique(set(&plus, &["b1", "b2"])).unwrap());
        let g = k23();
        assert!(!g.is_clique(set(&g, &["b1", "b2"])).unwrap());
        assert!(g.is_clique(VertexSet::EMPTY).unwrap());
        assert!(g.is_clique(set(&g, &["b3"])).unwrap());
    }

    #[test]
    fn find_induced_examples() {
        let c5 = cycle(5);
        let emb = c5.find_induced(PatternName::LPlus).unwrap();
        assert!(emb.verify(&c5));
        let names: Vec<&str> = emb.vertices.iter().map(|&v| c5.name(v)).collect();
        assert_eq!(names, ["1", "2", "4"]);
        assert!(cycle(4).find_induced(PatternName::L).is_none());
        let g = k23();
        assert_eq!(g.find_induced(PatternName::K23).unwrap().vertices, vec![0, 1, 2, 3, 4]);
        assert!(g.find_induced(PatternName::K23Plus).is_none());
        assert!(g.find_induced(PatternName::C4).is_some());
    }

    #[test]
    fn center_clique_examples() {
        assert_eq!(k23().center_clique().unwrap(), VertexSet::EMPTY);
        let k3 = SimpleGraph::from_fn(vec!["x".into(), "y".into(), "z".into()], |_, _| true).unwrap();
        assert_eq!(k3.center_clique().unwrap(), k3.all());
        let star = SimpleGraph::new(&["h", "l1", "l2"], &[("h", "l1"), ("h", "l2")]).unwrap();
        assert_eq!(star.center_clique().unwrap(), set(&star, &["h"]));
    }

    #[test]
    fn parse_round_trip_and_order() {
        let text = "# demo\nvertices: c a b\norder: c b a\nedge: a b\n\nedge: b c\n";
        let g = SimpleGraph::parse(text).unwrap();
        assert_eq!(g.names(), ["c", "b", "a"]);
        assert!(g.is_adjacent(g.vertex("a").unwrap(), g.vertex("b").unwrap()));
        assert_eq!(SimpleGraph::parse(&g.to_text()).unwrap(), g);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let cases = [
            ("vertices: a b\nedge: a c\n", 2),
            ("vertices: a b\nedge: a a\n", 2),
            ("# x\nedge: a b\n", 2),
            ("vertices: a b\nedge: a b\nedge: b a\n", 3),
            ("vertices: a b\nbogus\n", 2),
            ("vertices: a a\n", 1),
            ("vertices: a e\n", 1),
            ("vertices: a b\norder: a\n", 2),
        ];
        for (text, line) in cases {
            match SimpleGraph::parse(text) {
                Err(Error::Parse { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
