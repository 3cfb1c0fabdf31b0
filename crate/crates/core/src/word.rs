//! Words and elements of a right-angled Coxeter group.
//!
//! Generators are the vertex indices of the defining graph, which already
//! follow the ShortLex order. Reduction cancels a letter against an earlier
//! equal letter when everything in between commutes with it; the canonical
//! form then repeatedly extracts the smallest left descent.

use std::cmp::Ordering;
use std::fmt;
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::{SimpleGraph, VertexSet};

pub(crate) type Letters = SmallVec<[u8; 16]>;

/// Default cap on the number of elements an enumeration may produce.
pub const DEFAULT_BALL_CAP: usize = 2_000_000;

static NEXT_GROUP_ID: AtomicU32 = AtomicU32::new(1);

/// Identity of a [`CoxeterGroup`] instance. Elements remember the group they
/// were built in and mixing groups is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupId(u32);

/// A sequence of generators, not necessarily reduced.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(Vec<u8>);

impl Word {
    pub fn new(letters: Vec<u8>) -> Self {
        Word(letters)
    }

    pub fn letters(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// A group element in canonical (ShortLex) normal form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Element {
    group: GroupId,
    letters: Letters,
}

impl Element {
    pub fn letters(&self) -> &[u8] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    /// Letters occurring in the normal form.
    pub fn support(&self) -> VertexSet {
        VertexSet::from_bits(mask_of(&self.letters))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element{:?}", self.letters.as_slice())
    }
}

impl Ord for Element {
    /// ShortLex: shorter first, then lexicographic in the vertex order.
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
            .then_with(|| self.group.cmp(&other.group))
    }
}

impl PartialOrd for Element {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn mask_of(letters: &[u8]) -> u64 {
    letters.iter().fold(0, |m, &l| m | 1 << l)
}

/// Appends `s` to the reduced word `r`, cancelling it against an occurrence
/// reachable through commuting letters.
fn push_reduce(adj: &[u64], r: &mut Letters, s: u8) {
    let commutes = adj[s as usize];
    for j in (0..r.len()).rev() {
        let l = r[j];
        if l == s {
            r.remove(j);
            return;
        }
        if commutes & (1 << l) == 0 {
            break;
        }
    }
    r.push(s);
}

/// Greedy ShortLex canonical form of a reduced word.
fn canonical(adj: &[u64], word: &[u8]) -> Letters {
    let mut rest: Letters = word.iter().copied().collect();
    let mut out = Letters::with_capacity(word.len());
    while !rest.is_empty() {
        let mut seen = 0u64;
        let mut best: Option<(u8, usize)> = None;
        for (i, &l) in rest.iter().enumerate() {
            if adj[l as usize] & seen == seen && best.is_none_or(|(b, _)| l < b) {
                best = Some((l, i));
            }
            seen |= 1 << l;
            if adj[l as usize] == 0 && best.is_some() {
                // nothing further can pass this letter
                break;
            }
        }
        let (l, i) = best.expect("reduced word always has a left descent");
        out.push(l);
        rest.remove(i);
    }
    out
}

fn left_descent_bits(adj: &[u64], word: &[u8]) -> u64 {
    let mut seen = 0u64;
    let mut found = 0u64;
    for &l in word {
        if adj[l as usize] & seen == seen {
            found |= 1 << l;
        }
        seen |= 1 << l;
    }
    found
}

fn right_descent_bits(adj: &[u64], word: &[u8]) -> u64 {
    let mut seen = 0u64;
    let mut found = 0u64;
    for &l in word.iter().rev() {
        if adj[l as usize] & seen == seen {
            found |= 1 << l;
        }
        seen |= 1 << l;
    }
    found
}

/// The right-angled Coxeter group of a finite simple graph.
#[derive(Clone, Debug)]
pub struct CoxeterGroup {
    id: GroupId,
    graph: SimpleGraph,
    ball_cap: usize,
}

impl CoxeterGroup {
    pub fn new(graph: SimpleGraph) -> Self {
        let id = GroupId(NEXT_GROUP_ID.fetch_add(1, AtomicOrdering::Relaxed));
        CoxeterGroup { id, graph, ball_cap: DEFAULT_BALL_CAP }
    }

    /// Sets the element cap used by [`CoxeterGroup::ball`] and everything built on it.
    pub fn with_ball_cap(mut self, cap: usize) -> Self {
        self.ball_cap = cap;
        self
    }

    pub fn ball_cap(&self) -> usize {
        self.ball_cap
    }

    pub fn id(&self) -> GroupId {
        self.id
    }

    pub fn graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn rank(&self) -> usize {
        self.graph.len()
    }

    fn adj(&self) -> &[u64] {
        self.graph.adjacency_masks()
    }

    fn owns(&self, x: &Element) -> Result<()> {
        if x.group == self.id {
            Ok(())
        } else {
            Err(Error::GraphMismatch)
        }
    }

    fn wrap(&self, letters: Letters) -> Element {
        Element { group: self.id, letters }
    }

    /// Parses whitespace separated vertex names; `e` is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word> {
        let mut letters = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "e" {
                continue;
            }
            letters.push(self.graph.vertex(tok)? as u8);
        }
        Ok(Word(letters))
    }

    pub fn word_from_letters(&self, letters: &[u8]) -> Result<Word> {
        if let Some(&l) = letters.iter().find(|&&l| l as usize >= self.rank()) {
            return Err(Error::UnknownVertex(l.to_string()));
        }
        Ok(Word(letters.to_vec()))
    }

    /// Parses and normalizes.
    pub fn element(&self, text: &str) -> Result<Element> {
        let w = self.parse_word(text)?;
        self.normal_form(&w)
    }

    pub fn identity(&self) -> Element {
        self.wrap(Letters::new())
    }

    pub fn generator(&self, v: usize) -> Element {
        assert!(v < self.rank(), "generator {v} out of range");
        self.wrap(smallvec::smallvec![v as u8])
    }

    pub fn generators(&self) -> Vec<Element> {
        (0..self.rank()).map(|v| self.generator(v)).collect()
    }

    fn check_word(&self, w: &Word) -> Result<()> {
        match w.0.iter().find(|&&l| l as usize >= self.rank()) {
            Some(l) => Err(Error::UnknownVertex(l.to_string())),
            None => Ok(()),
        }
    }

    /// A reduced word for the same element (not necessarily canonical).
    pub fn reduce(&self, w: &Word) -> Result<Word> {
        self.check_word(w)?;
        let mut r = Letters::new();
        for &s in &w.0 {
            push_reduce(self.adj(), &mut r, s);
        }
        Ok(Word(r.into_vec()))
    }

    pub fn normal_form(&self, w: &Word) -> Result<Element> {
        let r = self.reduce(w)?;
        Ok(self.wrap(canonical(self.adj(), &r.0)))
    }

    /// Element from letters known to be in range.
    pub fn multiply(&self, x: &Element, y: &Element) -> Result<Element> {
        self.owns(x)?;
        self.owns(y)?;
        Ok(self.mul(x, y))
    }

    /// Unchecked product; both factors must belong to this group.
    pub fn mul(&self, x: &Element, y: &Element) -> Element {
        debug_assert!(x.group == self.id && y.group == self.id);
        if y.is_identity() {
            return x.clone();
        }
        if x.is_identity() {
            return y.clone();
        }
        let mut r = x.letters.clone();
        for &s in &y.letters {
            push_reduce(self.adj(), &mut r, s);
        }
        self.wrap(canonical(self.adj(), &r))
    }

    /// `x · x · … · x` (`k` factors).
    pub fn pow(&self, x: &Element, k: usize) -> Element {
        (0..k).fold(self.identity(), |acc, _| self.mul(&acc, x))
    }

    /// `a⁻¹ x b`.
    pub fn sandwich(&self, a: &Element, x: &Element, b: &Element) -> Element {
        let mut r = Letters::new();
        for &s in a.letters.iter().rev().chain(&x.letters).chain(&b.letters) {
            push_reduce(self.adj(), &mut r, s);
        }
        self.wrap(canonical(self.adj(), &r))
    }

    /// `g⁻¹ x g`.
    pub fn conjugate(&self, g: &Element, x: &Element) -> Element {
        self.sandwich(g, x, g)
    }

    pub fn inverse(&self, x: &Element) -> Element {
        let rev: Letters = x.letters.iter().rev().copied().collect();
        self.wrap(canonical(self.adj(), &rev))
    }

    pub fn try_inverse(&self, x: &Element) -> Result<Element> {
        self.owns(x)?;
        Ok(self.inverse(x))
    }

    pub fn length(&self, x: &Element) -> usize {
        x.len()
    }

    /// Generators `a` with `|a x| < |x|`.
    pub fn left_descents(&self, x: &Element) -> VertexSet {
        VertexSet::from_bits(left_descent_bits(self.adj(), &x.letters))
    }

    /// Generators `a` with `|x a| < |x|`.
    pub fn right_descents(&self, x: &Element) -> VertexSet {
        VertexSet::from_bits(right_descent_bits(self.adj(), &x.letters))
    }

    /// `a x` for a left descent `a`.
    pub(crate) fn strip_left(&self, x: &Element, a: usize) -> Element {
        let pos = x
            .letters
            .iter()
            .position(|&l| l as usize == a)
            .expect("stripped letter must occur");
        let mut rest = x.letters.clone();
        rest.remove(pos);
        self.wrap(canonical(self.adj(), &rest))
    }

    /// `x a` for a right descent `a`.
    pub(crate) fn strip_right(&self, x: &Element, a: usize) -> Element {
        let pos = x
            .letters
            .iter()
            .rposition(|&l| l as usize == a)
            .expect("stripped letter must occur");
        let mut rest = x.letters.clone();
        rest.remove(pos);
        self.wrap(canonical(self.adj(), &rest))
    }

    /// `(l, c)` with `x = l · c`, `l ∈ W_Λ` and `c` without left `Λ`-descents.
    pub fn split_left(&self, x: &Element, lambda: VertexSet) -> (Element, Element) {
        let adj = self.adj();
        let (mut head, mut rest) = (Letters::new(), Letters::new());
        let mut kept = 0u64;
        for &l in &x.letters {
            if lambda.contains(l as usize) && adj[l as usize] & kept == kept {
                head.push(l);
            } else {
                kept |= 1 << l;
                rest.push(l);
            }
        }
        (self.wrap(canonical(adj, &head)), self.wrap(canonical(adj, &rest)))
    }

    /// `(c, r)` with `x = c · r`, `r ∈ W_Λ` and `c` without right `Λ`-descents.
    pub fn split_right(&self, x: &Element, lambda: VertexSet) -> (Element, Element) {
        let adj = self.adj();
        let (mut tail, mut rest) = (Letters::new(), Letters::new());
        let mut kept = 0u64;
        for &l in x.letters.iter().rev() {
            if lambda.contains(l as usize) && adj[l as usize] & kept == kept {
                tail.push(l);
            } else {
                kept |= 1 << l;
                rest.push(l);
            }
        }
        tail.reverse();
        rest.reverse();
        (self.wrap(canonical(adj, &rest)), self.wrap(canonical(adj, &tail)))
    }

    pub fn support(&self, x: &Element) -> VertexSet {
        x.support()
    }

    /// `Link(support(x))`; the whole vertex set for the identity.
    pub fn element_link(&self, x: &Element) -> VertexSet {
        self.graph.link_unchecked(x.support())
    }

    /// Whether `x` lies in the special subgroup `W_Λ`.
    pub fn is_member(&self, x: &Element, lambda: VertexSet) -> bool {
        x.support().is_subset(lambda)
    }

    pub fn format(&self, x: &Element) -> String {
        self.format_letters(&x.letters)
    }

    pub fn format_word(&self, w: &Word) -> String {
        self.format_letters(&w.0)
    }

    fn format_letters(&self, letters: &[u8]) -> String {
        if letters.is_empty() {
            return "e".to_owned();
        }
        letters
            .iter()
            .map(|&l| self.graph.name(l as usize))
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Elements of length `k + 1` obtained from the given length-`k` elements.
    fn next_sphere(&self, sphere: &[Element], exec: &Exec) -> Vec<Element> {
        let all = self.graph.all().bits();
        let chunks: Vec<&[Element]> = sphere.chunks(256).collect();
        let mut next = exec.flat_map(&chunks, |chunk| {
            let mut out = Vec::new();
            for x in chunk.iter() {
                let grow = all & !right_descent_bits(self.adj(), &x.letters);
                for s in VertexSet::from_bits(grow).iter() {
                    let mut w = x.letters.clone();
                    w.push(s as u8);
                    out.push(self.wrap(canonical(self.adj(), &w)));
                }
            }
            out.sort_unstable();
            out.dedup();
            out
        });
        next.sort_unstable();
        next.dedup();
        next
    }

    /// All elements of length at most `radius`, grouped by length.
    pub fn ball(&self, radius: usize) -> Result<Ball> {
        self.ball_with(radius, self.ball_cap, &Exec::sequential())
    }

    pub fn ball_with(&self, radius: usize, cap: usize, exec: &Exec) -> Result<Ball> {
        let mut spheres = vec![vec![self.identity()]];
        let mut total = 1usize;
        for _ in 0..radius {
            let next = self.next_sphere(spheres.last().unwrap(), exec);
            if next.is_empty() {
                break;
            }
            total += next.len();
            if total > cap {
                return Err(Error::BudgetExceeded { limit: cap });
            }
            spheres.push(next);
        }
        Ok(Ball { spheres, radius })
    }

    /// `[#{x : |x| = k} for k in 0..=n]`, keeping only one sphere in memory.
    pub fn sphere_sizes(&self, n: usize) -> Result<Vec<usize>> {
        self.sphere_sizes_with(n, self.ball_cap, &Exec::sequential())
    }

    pub fn sphere_sizes_with(&self, n: usize, cap: usize, exec: &Exec) -> Result<Vec<usize>> {
        let mut sizes = vec![1];
        let mut sphere = vec![self.identity()];
        let mut total = 1usize;
        for _ in 0..n {
            sphere = self.next_sphere(&sphere, exec);
            total += sphere.len();
            if total > cap {
                return Err(Error::BudgetExceeded { limit: cap });
            }
            sizes.push(sphere.len());
        }
        Ok(sizes)
    }
}

/// Elements of length `≤ radius`, each sphere sorted in ShortLex order.
#[derive(Clone, Debug)]
pub struct Ball {
    spheres: Vec<Vec<Element>>,
    radius: usize,
}

impl Ball {
    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn spheres(&self) -> &[Vec<Element>] {
        &self.spheres
    }

    /// Sphere sizes `0..=radius`; trailing zeros for finite groups.
    pub fn sphere_sizes(&self) -> Vec<usize> {
        (0..=self.radius)
            .map(|k| self.spheres.get(k).map_or(0, Vec::len))
            .collect()
    }

    /// All elements in ShortLex order.
    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.spheres.iter().flatten()
    }

    pub fn to_vec(&self) -> Vec<Element> {
        self.elements().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.spheres.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn within(&self, radius: usize) -> impl Iterator<Item = &Element> {
        self.spheres.iter().take(radius + 1).flatten()
    }
}
