//! Special subgroups `W_Λ`: left/center/right decompositions, minimal double
//! coset representatives, intersections with conjugates, and the normalization
//! of element tuples into the set `V` used by the iterated expectation identity.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::VertexSet;
use crate::report::{Mismatch, Report};
use crate::word::{CoxeterGroup, Element};

/// `x = left · center · right` with `left ∈ W_Γ₁`, `right ∈ W_Γ₂` and the
/// center free of `Γ₁` letters at the start and `Γ₂` letters at the end.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LcrDecomposition {
    pub left: Element,
    pub center: Element,
    pub right: Element,
    pub gamma1: VertexSet,
    pub gamma2: VertexSet,
}

/// `W_Γ₁ ∩ g W_Γ₁ g⁻¹ = h W_core h⁻¹`, with `g ∈ h · d · W_Γ₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParabolicIntersection {
    pub conjugator: Element,
    pub core: VertexSet,
    pub min_rep: Element,
}

/// Output of [`normalize_tuple_to_v`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalizedTuple {
    pub tuple: Vec<Element>,
    /// Pieces moved out on the left, in the order they were absorbed.
    pub absorbed_left: Vec<Element>,
    pub absorbed_right: Element,
}

pub fn is_member(group: &CoxeterGroup, x: &Element, lambda: VertexSet) -> bool {
    group.is_member(x, lambda)
}

/// Strips every `Γ₁` letter that can reach the front, then every `Γ₂` letter
/// that can reach the back of what is left. Stripping on the right never
/// creates a new left `Γ₁`-descent, so one round suffices.
pub fn lcr_decompose(group: &CoxeterGroup, x: &Element, g1: VertexSet, g2: VertexSet) -> LcrDecomposition {
    let (left, rest) = group.split_left(x, g1);
    let (center, right) = group.split_right(&rest, g2);
    LcrDecomposition { left, center, right, gamma1: g1, gamma2: g2 }
}

pub fn min_double_coset_rep(group: &CoxeterGroup, g: &Element, g1: VertexSet) -> Element {
    lcr_decompose(group, g, g1, g1).center
}

pub fn conjugate_parabolic_intersection(group: &CoxeterGroup, g: &Element, g1: VertexSet) -> ParabolicIntersection {
    let lcr = lcr_decompose(group, g, g1, g1);
    let core = g1.intersection(group.element_link(&lcr.center));
    ParabolicIntersection { conjugator: lcr.left, core, min_rep: lcr.center }
}

/// Right-end bound for slot `i` of a `V`-tuple:
/// `Γ_{i+1} ∩ … ∩ Γ_n ∩ Link(v_{i+1}) ∩ … ∩ Link(v_{n-1})` (0-based slots).
pub fn v_right_bound(group: &CoxeterGroup, tuple: &[Element], graphs: &[VertexSet], i: usize) -> VertexSet {
    let mut bound = graphs[i + 1..].iter().fold(group.graph().all(), |acc, &g| acc.intersection(g));
    for v in &tuple[i + 1..] {
        bound = bound.intersection(group.element_link(v));
    }
    bound
}

fn check_tuple_shape(tuple: &[Element], graphs: &[VertexSet]) -> Result<()> {
    if graphs.len() < 2 || tuple.len() + 1 != graphs.len() {
        return Err(Error::Precondition(format!(
            "need n >= 2 subgraphs and n - 1 tuple entries, got {} and {}",
            graphs.len(),
            tuple.len()
        )));
    }
    Ok(())
}

/// Membership in `V`.
pub fn in_v(group: &CoxeterGroup, tuple: &[Element], graphs: &[VertexSet]) -> bool {
    if check_tuple_shape(tuple, graphs).is_err() {
        return false;
    }
    tuple.iter().enumerate().all(|(i, v)| {
        group.left_descents(v).intersection(graphs[i]).is_empty()
            && group
                .right_descents(v)
                .intersection(v_right_bound(group, tuple, graphs, i))
                .is_empty()
    })
}

fn strip_all_left(group: &CoxeterGroup, x: &Element, set: VertexSet) -> (Element, Element) {
    group.split_left(x, set)
}

fn strip_all_right(group: &CoxeterGroup, x: &Element, set: VertexSet) -> (Element, Element) {
    group.split_right(x, set)
}

/// Moves `Γ_i`-letters at the start of each `v_i` one slot to the left and the
/// `F_i`-letters at the end out to the right, until the tuple lies in `V`.
pub fn normalize_tuple_to_v(group: &CoxeterGroup, tuple: &[Element], graphs: &[VertexSet]) -> Result<NormalizedTuple> {
    check_tuple_shape(tuple, graphs)?;
    for &g in graphs {
        group.graph().check_subset(g)?;
    }
    let mut t = tuple.to_vec();
    let mut absorbed_left = Vec::new();
    let mut absorbed_right = group.identity();
    loop {
        let mut changed = false;
        for i in (0..t.len()).rev() {
            let (l, c) = strip_all_left(group, &t[i], graphs[i]);
            if l.is_identity() {
                continue;
            }
            changed = true;
            t[i] = c;
            if i == 0 {
                absorbed_left.push(l);
            } else {
                t[i - 1] = group.mul(&t[i - 1], &l);
            }
        }
        for i in (0..t.len()).rev() {
            let bound = v_right_bound(group, &t, graphs, i);
            let (c, r) = strip_all_right(group, &t[i], bound);
            if r.is_identity() {
                continue;
            }
            changed = true;
            t[i] = c;
            absorbed_right = group.mul(&r, &absorbed_right);
        }
        if !changed {
            break;
        }
    }
    Ok(NormalizedTuple { tuple: t, absorbed_left, absorbed_right })
}

/// Every subset of the vertex set, in increasing bitmask order.
pub fn all_subsets(group: &CoxeterGroup) -> Vec<VertexSet> {
    let n = group.rank();
    assert!(n <= 20, "subset sweeps are limited to 20 vertices");
    (0..1u64 << n).map(VertexSet::from_bits).collect()
}

fn all_pairs(group: &CoxeterGroup) -> Vec<(VertexSet, VertexSet)> {
    let subsets = all_subsets(group);
    subsets
        .iter()
        .flat_map(|&a| subsets.iter().map(move |&b| (a, b)))
        .collect()
}

/// Elements with no left descent in `g1` and no right descent in `g2`.
pub(crate) fn double_coset_minimal(group: &CoxeterGroup, ball: &[Element], g1: VertexSet, g2: VertexSet) -> Vec<Element> {
    ball.iter()
        .filter(|u| {
            group.left_descents(u).intersection(g1).is_empty() && group.right_descents(u).intersection(g2).is_empty()
        })
        .cloned()
        .collect()
}

/// Shortest element of `x W_Λ`, by stripping right `Λ`-descents.
pub fn right_coset_key(group: &CoxeterGroup, x: &Element, lambda: VertexSet) -> Element {
    strip_all_right(group, x, lambda).0
}

fn fmt_set(group: &CoxeterGroup, s: VertexSet) -> String {
    group.graph().format_set(s)
}

struct CombinatoricsCase<'a> {
    group: &'a CoxeterGroup,
    g1: VertexSet,
    g2: VertexSet,
}

impl CombinatoricsCase<'_> {
    /// Checks the conclusions for a triple that satisfies the hypotheses.
    fn conclude(&self, w: &Element, u: &Element, u2: &Element, report: &mut Report) {
        let group = self.group;
        report.cases += 1;
        let in_meet = group.is_member(w, self.g1.intersection(self.g2));
        let same = u == u2;
        let commute = group.mul(u, w) == group.mul(w, u);
        if !(in_meet && same && commute) {
            report.mismatches.push(
                Mismatch::new("combinatorics")
                    .with("gamma1", fmt_set(group, self.g1))
                    .with("gamma2", fmt_set(group, self.g2))
                    .with("w", group.format(w))
                    .with("u", group.format(u))
                    .with("u_prime", group.format(u2))
                    .with("w_in_meet", in_meet.to_string())
                    .with("u_eq_u_prime", same.to_string())
                    .with("u_commutes_w", commute.to_string()),
            );
        }
    }
}

/// Exhaustive check over all `(Γ₁, Γ₂)`: for `w ∈ W_Γ₁` and `u, u′` with no
/// `Γ₁` letter at the start and no `Γ₂` letter at the end, `u⁻¹ w u′ ∈ W_Γ₂`
/// forces `w ∈ W_{Γ₁∩Γ₂}`, `u = u′` and `uw = wu`.
///
/// Candidates `u` are located through the shortest element of `w u′ W_Γ₂`;
/// the hypothesis is then confirmed by direct multiplication.
/// [`verify_combinatorics_brute`] enumerates every triple instead.
pub fn verify_combinatorics(group: &CoxeterGroup, radius: usize, exec: &Exec) -> Result<Report> {
    let ball = group.ball_with(radius, group.ball_cap(), exec)?.to_vec();
    let pairs = all_pairs(group);
    let parts = exec.map(&pairs, |&(g1, g2)| {
        let case = CombinatoricsCase { group, g1, g2 };
        let mut report = Report::new("combinatorics");
        let words: Vec<&Element> = ball.iter().filter(|w| group.is_member(w, g1)).collect();
        let us = double_coset_minimal(group, &ball, g1, g2);
        let index: HashSet<&Element> = us.iter().collect();
        for w in &words {
            for u2 in &us {
                let key = right_coset_key(group, &group.mul(w, u2), g2);
                if let Some(u) = index.get(&key) {
                    let z = group.sandwich(u, w, u2);
                    if group.is_member(&z, g2) {
                        case.conclude(w, u, u2, &mut report);
                    } else {
                        report.mismatches.push(
                            Mismatch::new("combinatorics-coset-key")
                                .with("gamma2", fmt_set(group, g2))
                                .with("w", group.format(w))
                                .with("u_prime", group.format(u2)),
                        );
                    }
                }
            }
        }
        report
    });
    Ok(Report::from_parts("combinatorics", parts))
}

/// Same statement as [`verify_combinatorics`], scanning every `(w, u, u′)`.
pub fn verify_combinatorics_brute(group: &CoxeterGroup, radius: usize, exec: &Exec) -> Result<Report> {
    let ball = group.ball_with(radius, group.ball_cap(), exec)?.to_vec();
    let pairs = all_pairs(group);
    let parts = exec.map(&pairs, |&(g1, g2)| {
        let case = CombinatoricsCase { group, g1, g2 };
        let mut report = Report::new("combinatorics");
        let us = double_coset_minimal(group, &ball, g1, g2);
        for w in ball.iter().filter(|w| group.is_member(w, g1)) {
            for u in &us {
                for u2 in &us {
                    if group.is_member(&group.sandwich(u, w, u2), g2) {
                        case.conclude(w, u, u2, &mut report);
                    }
                }
            }
        }
        report
    });
    Ok(Report::from_parts("combinatorics", parts))
}

fn lcr_invariants_hold(group: &CoxeterGroup, x: &Element, d: &LcrDecomposition) -> bool {
    let product = group.mul(&d.left, &group.mul(&d.center, &d.right));
    product == *x
        && d.left.len() + d.center.len() + d.right.len() == x.len()
        && group.is_member(&d.left, d.gamma1)
        && group.is_member(&d.right, d.gamma2)
        && group.left_descents(&d.center).intersection(d.gamma1).is_empty()
        && group.right_descents(&d.center).intersection(d.gamma2).is_empty()
}

/// For every `x` in the ball and every `(Γ₁, Γ₂)`, all maximal sequences of
/// strips (any `Γ₁` left descent or `Γ₂` right descent, in any order) end at
/// the same center, and that center is the one [`lcr_decompose`] returns.
pub fn verify_lcr_unique(group: &CoxeterGroup, radius: usize, exec: &Exec) -> Result<Report> {
    let ball = group.ball_with(radius, group.ball_cap(), exec)?.to_vec();
    let pairs = all_pairs(group);
    let parts = exec.map(&pairs, |&(g1, g2)| {
        let mut report = Report::new("lcr-unique");
        // terminal center reachable from each element; None = several
        let mut terminal: HashMap<&Element, Option<Element>> = HashMap::with_capacity(ball.len());
        for x in &ball {
            let left = group.left_descents(x).intersection(g1);
            let right = group.right_descents(x).intersection(g2);
            let result = if left.is_empty() && right.is_empty() {
                Some(x.clone())
            } else {
                let mut ends = left
                    .iter()
                    .map(|a| group.strip_left(x, a))
                    .chain(right.iter().map(|b| group.strip_right(x, b)))
                    .map(|child| terminal.get(&child).cloned().flatten());
                let first = ends.next().flatten();
                match first {
                    Some(c) if ends.all(|e| e.as_ref() == Some(&c)) => Some(c),
                    _ => None,
                }
            };
            report.cases += 1;
            let d = lcr_decompose(group, x, g1, g2);
            let ok = result.as_ref() == Some(&d.center) && lcr_invariants_hold(group, x, &d);
            if !ok {
                report.mismatches.push(
                    Mismatch::new("lcr-unique")
                        .with("gamma1", fmt_set(group, g1))
                        .with("gamma2", fmt_set(group, g2))
                        .with("x", group.format(x))
                        .with("center", group.format(&d.center))
                        .with(
                            "strip_centers",
                            result.map_or("several".to_owned(), |c| group.format(&c)),
                        ),
                );
            }
            terminal.insert(x, ok.then_some(d.center));
        }
        report
    });
    Ok(Report::from_parts("lcr-unique", parts))
}

/// For every `g` in the ball and every `Γ₁`: the set
/// `{x ∈ W_Γ₁ ∩ B : g⁻¹ x g ∈ W_Γ₁}` equals `{x ∈ B : h⁻¹ x h ∈ W_core}`,
/// i.e. `h W_core h⁻¹ ∩ B`, where `(h, core, d)` come from
/// [`conjugate_parabolic_intersection`]. Also checks the shape of `(h, core, d)`.
pub fn verify_intersection(group: &CoxeterGroup, radius: usize, exec: &Exec) -> Result<Report> {
    let ball = group.ball_with(radius, group.ball_cap(), exec)?.to_vec();
    let subsets = all_subsets(group);
    let parts = exec.map(&subsets, |&g1| {
        let mut report = Report::new("intersection");
        let members: Vec<&Element> = ball.iter().filter(|x| group.is_member(x, g1)).collect();
        for g in &ball {
            let pi = conjugate_parabolic_intersection(group, g, g1);
            let h = &pi.conjugator;
            let tail = group.sandwich(&pi.min_rep, &group.mul(&group.inverse(h), g), &group.identity());
            let shape_ok = group.is_member(h, g1)
                && pi.core.is_subset(g1)
                && group.is_member(&tail, g1)
                && group.left_descents(&pi.min_rep).intersection(g1).is_empty()
                && group.right_descents(&pi.min_rep).intersection(g1).is_empty();
            if !shape_ok {
                report.mismatches.push(
                    Mismatch::new("intersection-shape")
                        .with("gamma1", fmt_set(group, g1))
                        .with("g", group.format(g)),
                );
            }
            // h ∈ W_Γ₁ and core ⊆ Γ₁ put h W_core h⁻¹ inside W_Γ₁, so only members need testing.
            for x in &members {
                report.cases += 1;
                let lhs = group.is_member(&group.conjugate(g, x), g1);
                let rhs = group.is_member(&group.conjugate(h, x), pi.core);
                if lhs != rhs {
                    report.mismatches.push(
                        Mismatch::new("intersection")
                            .with("gamma1", fmt_set(group, g1))
                            .with("g", group.format(g))
                            .with("x", group.format(x))
                            .with("h", group.format(h))
                            .with("core", fmt_set(group, pi.core))
                            .with("in_intersection", lhs.to_string())
                            .with("in_conjugate_core", rhs.to_string()),
                    );
                }
            }
        }
        report
    });
    Ok(Report::from_parts("intersection", parts))
}
