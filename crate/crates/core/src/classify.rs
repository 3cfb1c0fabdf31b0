//! Graph-level classification of `W_Γ` and certified subgroup witnesses.
//!
//! * amenable iff `Γ` has no induced `L` (three independent vertices) and no
//!   induced `L⁺` (an edge plus an isolated vertex);
//! * `W_Γ` contains `ℤ × 𝔽₂` iff `Γ` has an induced `K₂,₃` or `K₂,₃⁺`, and its
//!   group von Neumann algebra is strongly solid exactly when it does not;
//! * hyperbolic iff there is no induced 4-cycle.
//!
//! Freeness of witness pairs is certified only up to a bounded word length.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Embedding, PatternName, SimpleGraph, VertexSet};
use crate::word::{CoxeterGroup, Element};

pub const CERTIFY_DEPTH: usize = 8;
/// Longest candidate word in the free-pair search.
pub const PAIR_SEARCH_LENGTH: usize = 4;
/// `z^k ≠ ε` is checked for `1 ≤ k ≤ Z_POWER_CHECK`.
pub const Z_POWER_CHECK: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SpecialShape {
    /// `D∞ × (ℤ₂ ∗ ℤ₂ ∗ ℤ₂)`, from an induced `K₂,₃`.
    #[serde(rename = "D∞×(ℤ₂∗ℤ₂∗ℤ₂)")]
    DInfinityTimesFreeProduct,
    /// `D∞ × (ℤ₂ ∗ (ℤ₂ × ℤ₂))`, from an induced `K₂,₃⁺`.
    #[serde(rename = "D∞×(ℤ₂∗(ℤ₂×ℤ₂))")]
    DInfinityTimesAmalgam,
}

impl SpecialShape {
    pub fn as_str(self) -> &'static str {
        match self {
            SpecialShape::DInfinityTimesFreeProduct => "D∞×(ℤ₂∗ℤ₂∗ℤ₂)",
            SpecialShape::DInfinityTimesAmalgam => "D∞×(ℤ₂∗(ℤ₂×ℤ₂))",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreePair {
    pub x: Element,
    pub y: Element,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZxF2Triple {
    pub z: Element,
    pub x: Element,
    pub y: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialSubgroup {
    pub vertices: VertexSet,
    pub shape: SpecialShape,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WitnessBundle {
    pub f2_pair: Option<FreePair>,
    pub zxf2_triple: Option<ZxF2Triple>,
    pub pattern_embedding: Option<Embedding>,
    pub special_subgroup: Option<SpecialSubgroup>,
}

/// `W_Γ = W_{Γ₁} ∗_{W_amalgam} W_{Γ₂}` with `Γ₁ = Star(v)`, `Γ₂ = Γ ∖ {v}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AfpDecomposition {
    pub vertex: usize,
    pub gamma1: VertexSet,
    pub gamma2: VertexSet,
    pub amalgam: VertexSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub amenable: bool,
    pub contains_f2: bool,
    pub strongly_solid: bool,
    pub contains_zxf2: bool,
    pub hyperbolic: bool,
    pub center_clique: VertexSet,
    /// `(Γ′, Γ ∖ Γ′)` with `Γ′` the center clique: `W = W_{Γ′} × W_{Γ∖Γ′}`.
    pub product_split: (VertexSet, VertexSet),
    pub afp_decompositions: Vec<AfpDecomposition>,
    pub witnesses: Option<WitnessBundle>,
}

impl Classification {
    pub fn invariants_hold(&self) -> bool {
        self.strongly_solid == !self.contains_zxf2
            && (!self.contains_zxf2 || self.contains_f2)
            && self.contains_f2 == !self.amenable
            && (!self.amenable || self.strongly_solid)
    }

    pub fn to_record(&self, group: &CoxeterGroup) -> ClassificationRecord {
        let graph = group.graph();
        let names = |s: VertexSet| graph.set_names(s);
        ClassificationRecord {
            vertices: graph.names().to_vec(),
            amenable: self.amenable,
            contains_f2: self.contains_f2,
            strongly_solid: self.strongly_solid,
            contains_zxf2: self.contains_zxf2,
            hyperbolic: self.hyperbolic,
            center_clique: names(self.center_clique),
            product_split: ProductSplitRecord {
                center: names(self.product_split.0),
                rest: names(self.product_split.1),
            },
            afp_decompositions: self
                .afp_decompositions
                .iter()
                .map(|d| AfpRecord {
                    vertex: graph.name(d.vertex).to_owned(),
                    gamma1: names(d.gamma1),
                    gamma2: names(d.gamma2),
                    amalgam: names(d.amalgam),
                })
                .collect(),
            witnesses: self.witnesses.as_ref().map(|w| WitnessRecord {
                f2_pair: w.f2_pair.as_ref().map(|p| FreePairRecord {
                    x: group.format(&p.x),
                    y: group.format(&p.y),
                    depth: p.depth,
                }),
                zxf2_triple: w.zxf2_triple.as_ref().map(|t| TripleRecord {
                    z: group.format(&t.z),
                    x: group.format(&t.x),
                    y: group.format(&t.y),
                }),
                pattern_embedding: w.pattern_embedding.as_ref().map(|e| EmbeddingRecord {
                    pattern: e.pattern,
                    vertices: e.named(graph).into_iter().collect(),
                }),
                special_subgroup: w.special_subgroup.as_ref().map(|s| SpecialRecord {
                    vertices: names(s.vertices),
                    shape: s.shape,
                }),
            }),
        }
    }
}

/// Serialized form of a [`Classification`], with vertex names and words as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationRecord {
    pub vertices: Vec<String>,
    pub amenable: bool,
    #[serde(rename = "contains_F2")]
    pub contains_f2: bool,
    pub strongly_solid: bool,
    #[serde(rename = "contains_ZxF2")]
    pub contains_zxf2: bool,
    pub hyperbolic: bool,
    pub center_clique: Vec<String>,
    pub product_split: ProductSplitRecord,
    pub afp_decompositions: Vec<AfpRecord>,
    pub witnesses: Option<WitnessRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductSplitRecord {
    pub center: Vec<String>,
    pub rest: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AfpRecord {
    pub vertex: String,
    pub gamma1: Vec<String>,
    pub gamma2: Vec<String>,
    pub amalgam: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub f2_pair: Option<FreePairRecord>,
    #[serde(rename = "zxF2_triple")]
    pub zxf2_triple: Option<TripleRecord>,
    pub pattern_embedding: Option<EmbeddingRecord>,
    pub special_subgroup: Option<SpecialRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreePairRecord {
    pub x: String,
    pub y: String,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub z: String,
    pub x: String,
    pub y: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingRecord {
    pub pattern: PatternName,
    /// Pattern label to graph vertex.
    pub vertices: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecialRecord {
    pub vertices: Vec<String>,
    pub shape: SpecialShape,
}

pub fn afp_decompositions(graph: &SimpleGraph) -> Vec<AfpDecomposition> {
    (0..graph.len())
        .map(|v| {
            let gamma1 = VertexSet::from_bits(graph.neighbours(v).bits() | 1 << v);
            let gamma2 = graph.all().difference(VertexSet::singleton(v));
            AfpDecomposition { vertex: v, gamma1, gamma2, amalgam: gamma1.intersection(gamma2) }
        })
        .collect()
}

/// Every element of `ball(radius)` supported in the amalgam lies in both factors.
pub fn afp_amalgam_coherent(group: &CoxeterGroup, entry: &AfpDecomposition, radius: usize) -> Result<bool> {
    let ball = group.ball(radius)?;
    let coherent = ball
        .elements()
        .filter(|x| x.support().is_subset(entry.amalgam))
        .all(|x| group.is_member(x, entry.gamma1) && group.is_member(x, entry.gamma2));
    Ok(coherent)
}

/// The graph-level flags and decompositions, no witnesses.
pub fn classify(graph: &SimpleGraph) -> Result<Classification> {
    if graph.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let has = |p| graph.find_induced(p).is_some();
    let amenable = !has(PatternName::L) && !has(PatternName::LPlus);
    let contains_zxf2 = has(PatternName::K23) || has(PatternName::K23Plus);
    let center = graph.center_clique()?;
    Ok(Classification {
        amenable,
        contains_f2: !amenable,
        strongly_solid: !contains_zxf2,
        contains_zxf2,
        hyperbolic: !has(PatternName::C4),
        center_clique: center,
        product_split: (center, graph.all().difference(center)),
        afp_decompositions: afp_decompositions(graph),
        witnesses: None,
    })
}

/// [`classify`] plus certified witnesses.
pub fn classify_with_witnesses(group: &CoxeterGroup) -> Result<Classification> {
    let mut c = classify(group.graph())?;
    let zxf2 = zxf2_witness(group)?;
    let f2 = f2_witness(group)?;
    let pattern_embedding = zxf2
        .as_ref()
        .map(|(_, e)| e.clone())
        .or_else(|| f2.as_ref().map(|(_, e)| e.clone()));
    c.witnesses = Some(WitnessBundle {
        f2_pair: f2.map(|(p, _)| p),
        zxf2_triple: zxf2.map(|(t, _)| t),
        pattern_embedding,
        special_subgroup: special_subgroup_witness(group.graph()),
    });
    Ok(c)
}

/// Number of nonempty freely reduced words of length at most `depth` on four letters.
fn reduced_word_count(depth: usize) -> Option<usize> {
    let mut total = 0usize;
    let mut level = 4usize;
    for _ in 0..depth {
        total = total.checked_add(level)?;
        level = level.checked_mul(3)?;
    }
    Some(total)
}

/// True iff no nonempty freely reduced word of length `≤ depth` in
/// `x, y, x⁻¹, y⁻¹` evaluates to the identity.
pub fn certify_free(group: &CoxeterGroup, x: &Element, y: &Element, depth: usize) -> Result<bool> {
    if depth == 0 {
        return Err(Error::Precondition("certificate depth must be at least 1".into()));
    }
    if x.group() != group.id() || y.group() != group.id() {
        return Err(Error::GraphMismatch);
    }
    let cap = group.ball_cap();
    if reduced_word_count(depth).is_none_or(|n| n > cap) {
        return Err(Error::BudgetExceeded { limit: cap });
    }
    // letters 0..4 = x, y, x⁻¹, y⁻¹; letter k is inverse to (k + 2) % 4
    let letters = [x.clone(), y.clone(), group.inverse(x), group.inverse(y)];
    fn search(group: &CoxeterGroup, letters: &[Element; 4], value: &Element, last: usize, left: usize) -> bool {
        if left == 0 {
            return true;
        }
        (0..4).filter(|&k| (k + 2) % 4 != last).all(|k| {
            let next = group.mul(value, &letters[k]);
            !next.is_identity() && search(group, letters, &next, k, left - 1)
        })
    }
    Ok(search(group, &letters, &group.identity(), usize::MAX, depth))
}

/// Elements of length `1..=max_len` in the letters of `verts`, ShortLex order.
fn short_elements(group: &CoxeterGroup, verts: VertexSet, max_len: usize) -> Vec<Element> {
    let gens: Vec<Element> = verts.iter().map(|v| group.generator(v)).collect();
    let mut seen: BTreeSet<Element> = BTreeSet::new();
    let mut frontier = vec![group.identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for x in &frontier {
            for s in &gens {
                let y = group.mul(x, s);
                if y.len() > x.len() && seen.insert(y.clone()) {
                    next.push(y);
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

/// A certified free pair inside `W_{p,q,r}`. For pairwise non-adjacent vertices
/// with apex `p` this is `(q p, r p)`; otherwise the first certified pair in
/// ShortLex order among words of length `≤ PAIR_SEARCH_LENGTH`.
fn free_pair_on(group: &CoxeterGroup, verts: [usize; 3]) -> Result<Option<FreePair>> {
    let [p, q, r] = verts;
    let graph = group.graph();
    let independent = !graph.is_adjacent(p, q) && !graph.is_adjacent(p, r) && !graph.is_adjacent(q, r);
    if independent {
        let apex = group.generator(p);
        let x = group.mul(&group.generator(q), &apex);
        let y = group.mul(&group.generator(r), &apex);
        if certify_free(group, &x, &y, CERTIFY_DEPTH)? {
            return Ok(Some(FreePair { x, y, depth: CERTIFY_DEPTH }));
        }
    }
    let candidates = short_elements(group, verts.into_iter().collect(), PAIR_SEARCH_LENGTH);
    for (i, x) in candidates.iter().enumerate() {
        for y in &candidates[i + 1..] {
            if certify_free(group, x, y, CERTIFY_DEPTH)? {
                return Ok(Some(FreePair { x: x.clone(), y: y.clone(), depth: CERTIFY_DEPTH }));
            }
        }
    }
    Ok(None)
}

/// Certified generators of a free subgroup of rank two, with the induced
/// `L` or `L⁺` they live on. `None` for amenable groups.
pub fn f2_witness(group: &CoxeterGroup) -> Result<Option<(FreePair, Embedding)>> {
    let graph = group.graph();
    for pattern in [PatternName::L, PatternName::LPlus] {
        if let Some(e) = graph.find_induced(pattern) {
            let verts = [e.vertices[0], e.vertices[1], e.vertices[2]];
            if let Some(pair) = free_pair_on(group, verts)? {
                return Ok(Some((pair, e)));
            }
        }
    }
    Ok(None)
}

/// `(z, x, y)` with `z = a₁ a₂` central in `⟨z, x, y⟩`, `z` of infinite order
/// (checked up to `Z_POWER_CHECK`) and `x, y` free, from an induced `K₂,₃` or
/// `K₂,₃⁺` on `{a₁, a₂, b₁, b₂, b₃}`.
pub fn zxf2_witness(group: &CoxeterGroup) -> Result<Option<(ZxF2Triple, Embedding)>> {
    let graph = group.graph();
    for pattern in [PatternName::K23, PatternName::K23Plus] {
        let Some(e) = graph.find_induced(pattern) else { continue };
        let v = &e.vertices;
        let z = group.mul(&group.generator(v[0]), &group.generator(v[1]));
        let Some(pair) = free_pair_on(group, [v[2], v[3], v[4]])? else { continue };
        let commutes = |w: &Element| group.mul(&z, w) == group.mul(w, &z);
        let infinite = (1..=Z_POWER_CHECK).all(|k| !group.pow(&z, k).is_identity());
        if commutes(&pair.x) && commutes(&pair.y) && infinite && certify_free(group, &pair.x, &pair.y, CERTIFY_DEPTH)? {
            return Ok(Some((ZxF2Triple { z, x: pair.x, y: pair.y }, e)));
        }
    }
    Ok(None)
}

/// The vertex set of the first induced `K₂,₃` (or else `K₂,₃⁺`).
pub fn special_subgroup_witness(graph: &SimpleGraph) -> Option<SpecialSubgroup> {
    if let Some(e) = graph.find_induced(PatternName::K23) {
        return Some(SpecialSubgroup { vertices: e.image(), shape: SpecialShape::DInfinityTimesFreeProduct });
    }
    graph
        .find_induced(PatternName::K23Plus)
        .map(|e| SpecialSubgroup { vertices: e.image(), shape: SpecialShape::DInfinityTimesAmalgam })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn classification_examples() {
        let k = classify(&corpus::k23()).unwrap();
        assert!(!k.amenable && !k.strongly_solid && k.contains_zxf2 && !k.hyperbolic);
        let c4 = classify(&corpus::cycle(4)).unwrap();
        assert!(c4.amenable && c4.strongly_solid && !c4.contains_zxf2 && !c4.hyperbolic);
        let c5 = classify(&corpus::cycle(5)).unwrap();
        assert!(!c5.amenable && c5.strongly_solid && c5.hyperbolic);
        for m in 1..=4 {
            assert!(classify(&corpus::complete(m)).unwrap().amenable);
        }
        let empty = SimpleGraph::new::<&str>(&[], &[]).unwrap();
        assert_eq!(classify(&empty), Err(Error::EmptyGraph));
    }

    #[test]
    fn product_split_of_k3_plus_pair() {
        let g = SimpleGraph::new(&["a", "b", "c"], &[("a", "b"), ("a", "c")]).unwrap();
        let c = classify(&g).unwrap();
        assert_eq!(g.format_set(c.product_split.0), "{a}");
        assert_eq!(g.format_set(c.product_split.1), "{b,c}");
    }

    #[test]
    fn certify_examples() {
        let d = CoxeterGroup::new(corpus::d_infinity());
        let x = d.element("u v").unwrap();
        assert!(!certify_free(&d, &x, &x, 2).unwrap());
        assert!(!certify_free(&d, &x, &d.element("v u").unwrap(), 2).unwrap());
        let l = CoxeterGroup::new(corpus::l_graph());
        let (a, b) = (l.element("2 1").unwrap(), l.element("3 1").unwrap());
        assert!(certify_free(&l, &a, &b, 8).unwrap());
        assert!(certify_free(&l, &a, &b, 40).is_err());
    }

    #[test]
    fn f2_witness_examples() {
        let g = SimpleGraph::with_order::<&str, &str>(&["v", "u", "w"], &[]).unwrap();
        let l = CoxeterGroup::new(g);
        let (p, _) = f2_witness(&l).unwrap().unwrap();
        assert_eq!((l.format(&p.x), l.format(&p.y)), ("u v".to_owned(), "w v".to_owned()));
        let k = CoxeterGroup::new(corpus::k23());
        let (p, _) = f2_witness(&k).unwrap().unwrap();
        assert_eq!((k.format(&p.x), k.format(&p.y)), ("b2 b1".to_owned(), "b3 b1".to_owned()));
        assert!(f2_witness(&CoxeterGroup::new(corpus::complete(3))).unwrap().is_none());
        let lp = CoxeterGroup::new(corpus::l_plus());
        let (p, e) = f2_witness(&lp).unwrap().unwrap();
        assert_eq!(e.pattern, PatternName::LPlus);
        assert!(certify_free(&lp, &p.x, &p.y, 8).unwrap());
    }

    #[test]
    fn zxf2_examples() {
        let k = CoxeterGroup::new(corpus::k23());
        let (t, _) = zxf2_witness(&k).unwrap().unwrap();
        assert_eq!(k.format(&t.z), "a1 a2");
        assert_eq!(k.format(&t.x), "b2 b1");
        assert_eq!(k.format(&t.y), "b3 b1");
        let kp = CoxeterGroup::new(corpus::k23_plus());
        let (t, e) = zxf2_witness(&kp).unwrap().unwrap();
        assert_eq!(e.pattern, PatternName::K23Plus);
        assert_eq!(kp.format(&t.z), "a1 a2");
        assert!(certify_free(&kp, &t.x, &t.y, 8).unwrap());
        assert!(zxf2_witness(&CoxeterGroup::new(corpus::cycle(4))).unwrap().is_none());
    }

    #[test]
    fn special_subgroup_examples() {
        let s = special_subgroup_witness(&corpus::k23()).unwrap();
        assert_eq!((s.vertices.len(), s.shape), (5, SpecialShape::DInfinityTimesFreeProduct));
        let s = special_subgroup_witness(&corpus::k23_plus()).unwrap();
        assert_eq!(s.shape, SpecialShape::DInfinityTimesAmalgam);
        assert!(special_subgroup_witness(&corpus::cycle(5)).is_none());
    }

    #[test]
    fn afp_examples() {
        let one = SimpleGraph::new::<&str>(&["v"], &[]).unwrap();
        let d = afp_decompositions(&one);
        assert_eq!(d, vec![AfpDecomposition {
            vertex: 0,
            gamma1: VertexSet::singleton(0),
            gamma2: VertexSet::EMPTY,
            amalgam: VertexSet::EMPTY
        }]);
        let dinf = corpus::d_infinity();
        let d = afp_decompositions(&dinf)[0];
        assert_eq!((dinf.format_set(d.gamma1), dinf.format_set(d.gamma2), d.amalgam), ("{u}".into(), "{v}".into(), VertexSet::EMPTY));
        let k = corpus::k23();
        let d = afp_decompositions(&k)[0];
        assert_eq!(k.format_set(d.gamma1), "{a1,b1,b2,b3}");
        assert_eq!(k.format_set(d.amalgam), "{b1,b2,b3}");
    }

    #[test]
    fn record_names_fields() {
        let k = CoxeterGroup::new(corpus::k23());
        let c = classify_with_witnesses(&k).unwrap();
        let r = c.to_record(&k);
        assert!(!r.strongly_solid && r.contains_zxf2);
        let w = r.witnesses.unwrap();
        assert_eq!(w.zxf2_triple.unwrap().z, "a1 a2");
        assert_eq!(w.pattern_embedding.unwrap().vertices["b1"], "b1");
    }
}
