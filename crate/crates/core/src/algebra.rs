//! Finitely supported vectors `Σ c_g λ_g` in the rational group algebra of `W`,
//! conditional expectations onto special subalgebras, and the two nested
//! expectation identities checked on basis vectors.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::graph::VertexSet;
use crate::parabolic::{all_subsets, in_v, lcr_decompose, right_coset_key, LcrDecomposition};
use crate::report::{Mismatch, Report};
use crate::word::{CoxeterGroup, Element, GroupId};

/// `Σ c_g λ_g` with exact rational coefficients; zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq)]
pub struct GroupAlgebraVector {
    group: GroupId,
    terms: BTreeMap<Element, BigRational>,
}

impl fmt::Debug for GroupAlgebraVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.terms.iter().map(|(g, c)| (g, c.to_string()))).finish()
    }
}

impl GroupAlgebraVector {
    pub fn zero(group: &CoxeterGroup) -> Self {
        GroupAlgebraVector { group: group.id(), terms: BTreeMap::new() }
    }

    /// `λ_g`
    pub fn basis(g: &Element) -> Self {
        Self::scaled_basis(g, BigRational::one())
    }

    /// `c · λ_g`
    pub fn scaled_basis(g: &Element, c: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g.clone(), c);
        }
        GroupAlgebraVector { group: g.group(), terms }
    }

    pub fn from_terms(group: &CoxeterGroup, terms: impl IntoIterator<Item = (Element, BigRational)>) -> Result<Self> {
        let mut out = Self::zero(group);
        for (g, c) in terms {
            if g.group() != group.id() {
                return Err(Error::GraphMismatch);
            }
            out.add_term(g, c);
        }
        Ok(out)
    }

    fn add_term(&mut self, g: Element, c: BigRational) {
        use std::collections::btree_map::Entry;
        match self.terms.entry(g) {
            Entry::Vacant(e) => {
                if !c.is_zero() {
                    e.insert(c);
                }
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn group(&self) -> GroupId {
        self.group
    }

    pub fn terms(&self) -> &BTreeMap<Element, BigRational> {
        &self.terms
    }

    pub fn coefficient(&self, g: &Element) -> BigRational {
        self.terms.get(g).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.group != other.group {
            return Err(Error::GraphMismatch);
        }
        let mut out = self.clone();
        for (g, c) in &other.terms {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return GroupAlgebraVector { group: self.group, terms: BTreeMap::new() };
        }
        GroupAlgebraVector {
            group: self.group,
            terms: self.terms.iter().map(|(g, x)| (g.clone(), x * c)).collect(),
        }
    }

    /// Renders as `c·g + …`, identity written `e`.
    pub fn format(&self, group: &CoxeterGroup) -> String {
        if self.is_zero() {
            return "0".to_owned();
        }
        self.terms
            .iter()
            .map(|(g, c)| format!("{c}·[{}]", group.format(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

fn owns(group: &CoxeterGroup, x: &GroupAlgebraVector) -> Result<()> {
    if x.group == group.id() {
        Ok(())
    } else {
        Err(Error::GraphMismatch)
    }
}

/// Convolution product.
pub fn algebra_multiply(group: &CoxeterGroup, x: &GroupAlgebraVector, y: &GroupAlgebraVector) -> Result<GroupAlgebraVector> {
    owns(group, x)?;
    owns(group, y)?;
    Ok(mul(group, x, y))
}

fn mul(group: &CoxeterGroup, x: &GroupAlgebraVector, y: &GroupAlgebraVector) -> GroupAlgebraVector {
    let mut out = GroupAlgebraVector::zero(group);
    for (g, a) in &x.terms {
        for (h, b) in &y.terms {
            out.add_term(group.mul(g, h), a * b);
        }
    }
    out
}

/// `c λ_g ↦ c λ_{g⁻¹}`.
pub fn adjoint(group: &CoxeterGroup, x: &GroupAlgebraVector) -> Result<GroupAlgebraVector> {
    owns(group, x)?;
    Ok(adj(group, x))
}

fn adj(group: &CoxeterGroup, x: &GroupAlgebraVector) -> GroupAlgebraVector {
    GroupAlgebraVector {
        group: x.group,
        terms: x.terms.iter().map(|(g, c)| (group.inverse(g), c.clone())).collect(),
    }
}

/// Coefficient of the identity.
pub fn trace(x: &GroupAlgebraVector) -> BigRational {
    x.terms
        .iter()
        .next()
        .filter(|(g, _)| g.is_identity())
        .map_or_else(BigRational::zero, |(_, c)| c.clone())
}

/// Conditional expectation onto the span of `λ_g`, `g ∈ W_Λ`.
pub fn expect(group: &CoxeterGroup, x: &GroupAlgebraVector, lambda: VertexSet) -> Result<GroupAlgebraVector> {
    owns(group, x)?;
    group.graph().check_subset(lambda)?;
    Ok(restrict(x, lambda))
}

fn restrict(x: &GroupAlgebraVector, lambda: VertexSet) -> GroupAlgebraVector {
    GroupAlgebraVector {
        group: x.group,
        terms: x
            .terms
            .iter()
            .filter(|(g, _)| g.support().is_subset(lambda))
            .map(|(g, c)| (g.clone(), c.clone()))
            .collect(),
    }
}

/// `λ_a · x · λ_b`
fn sandwich(group: &CoxeterGroup, a: &Element, x: &GroupAlgebraVector, b: &Element) -> GroupAlgebraVector {
    mul(group, &mul(group, &GroupAlgebraVector::basis(a), x), &GroupAlgebraVector::basis(b))
}

/// `E_Γ₂(λ_v* E_Γ₁(x) λ_u)`.
pub fn condition_nest_lhs(
    group: &CoxeterGroup,
    x: &GroupAlgebraVector,
    g1: VertexSet,
    g2: VertexSet,
    v: &Element,
    u: &Element,
) -> GroupAlgebraVector {
    let inner = restrict(x, g1);
    restrict(&sandwich(group, &group.inverse(v), &inner, u), g2)
}

/// Closed form of [`condition_nest_lhs`] from the decompositions
/// `u = u_l u_c u_r`, `v = v_l v_c v_r`: zero if `u_c ≠ v_c`, otherwise
/// `λ_{v_r}* E_{Γ₁∩Γ₂∩Link(u_c)}(λ_{v_l}* x λ_{u_l}) λ_{u_r}`.
pub fn condition_nest_rhs(
    group: &CoxeterGroup,
    x: &GroupAlgebraVector,
    ud: &LcrDecomposition,
    vd: &LcrDecomposition,
) -> GroupAlgebraVector {
    if ud.center != vd.center {
        return GroupAlgebraVector::zero(group);
    }
    let lambda = ud.gamma1.intersection(ud.gamma2).intersection(group.element_link(&ud.center));
    let inner = restrict(&sandwich(group, &group.inverse(&vd.left), x, &ud.left), lambda);
    sandwich(group, &group.inverse(&vd.right), &inner, &ud.right)
}

fn condition_nest_mismatch(
    group: &CoxeterGroup,
    g1: VertexSet,
    g2: VertexSet,
    g: &Element,
    u: &Element,
    v: &Element,
    lhs: &GroupAlgebraVector,
    rhs: &GroupAlgebraVector,
) -> Mismatch {
    Mismatch::new("condition-nest")
        .with("gamma1", group.graph().format_set(g1))
        .with("gamma2", group.graph().format_set(g2))
        .with("g", group.format(g))
        .with("u", group.format(u))
        .with("v", group.format(v))
        .with("lhs", lhs.format(group))
        .with("rhs", rhs.format(group))
}

/// Compares both sides of the conditional-expectation nesting identity on every
/// basis vector `λ_g`, `g ∈ ball(radius)`.
pub fn condition_nest_check(
    group: &CoxeterGroup,
    g1: VertexSet,
    g2: VertexSet,
    v: &Element,
    u: &Element,
    radius: usize,
) -> Result<Report> {
    group.graph().check_subset(g1)?;
    group.graph().check_subset(g2)?;
    if u.group() != group.id() || v.group() != group.id() {
        return Err(Error::GraphMismatch);
    }
    let ud = lcr_decompose(group, u, g1, g2);
    let vd = lcr_decompose(group, v, g1, g2);
    let mut report = Report::new("condition-nest");
    for g in group.ball(radius)?.elements() {
        report.cases += 1;
        let x = GroupAlgebraVector::basis(g);
        let lhs = condition_nest_lhs(group, &x, g1, g2, v, u);
        let rhs = condition_nest_rhs(group, &x, &ud, &vd);
        if lhs != rhs {
            report.mismatches.push(condition_nest_mismatch(group, g1, g2, g, u, v, &lhs, &rhs));
        }
    }
    Ok(report)
}

/// Graphs up to this rank get every `(Γ₁, Γ₂)` pair in [`condition_nest_pairs`].
pub const FULL_PAIR_RANK: usize = 5;
/// Number of pairs drawn for larger graphs, besides `(Γ, Γ)`.
pub const SAMPLED_PAIRS: usize = 191;
pub const PAIR_SEED: u64 = 0xc0de_2024;

/// Subgraph pairs swept by [`verify_condition_nest`] by default: all pairs up
/// to [`FULL_PAIR_RANK`] vertices, otherwise `(Γ, Γ)` plus a fixed-seed sample.
pub fn condition_nest_pairs(group: &CoxeterGroup) -> Vec<(VertexSet, VertexSet)> {
    let subsets = all_subsets(group);
    let total = subsets.len() * subsets.len();
    let pick = |i: usize| (subsets[i / subsets.len()], subsets[i % subsets.len()]);
    if group.rank() <= FULL_PAIR_RANK {
        return (0..total).map(pick).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(PAIR_SEED + group.rank() as u64);
    let mut chosen: Vec<usize> = rand::seq::index::sample(&mut rng, total - 1, SAMPLED_PAIRS.min(total - 1)).into_vec();
    chosen.push(total - 1);
    chosen.sort_unstable();
    chosen.into_iter().map(pick).collect()
}

/// Right side of the identity on a basis vector `λ_g`, `None` for zero.
fn nest_rhs_basis(group: &CoxeterGroup, g: &Element, ud: &LcrDecomposition, vd: &LcrDecomposition, lambda: VertexSet) -> Option<Element> {
    if ud.center != vd.center {
        return None;
    }
    let y = group.sandwich(&vd.left, g, &ud.left);
    group.is_member(&y, lambda).then(|| group.sandwich(&vd.right, &y, &ud.right))
}

/// [`condition_nest_check`] over the given `(Γ₁, Γ₂)` pairs, all
/// `u, v ∈ ball(uv_radius)` and all `g ∈ ball(g_radius)`.
///
/// For a fixed `(Γ₁, Γ₂, u, g)` the left side is nonzero only if `g ∈ W_Γ₁` and
/// `v W_Γ₂ = g u W_Γ₂`, and the right side only if `v_c = u_c` and
/// `v_l W_Λ = g u_l W_Λ` with `Λ = Γ₁∩Γ₂∩Link(u_c)`, which also needs
/// `g ∈ W_Γ₁`. Pairs are looked up through shortest coset representatives and
/// both sides are evaluated on exactly those `v`; `cases` counts evaluations.
/// Basis vectors go to scalar multiples of basis vectors, so both sides are
/// computed as single group elements.
pub fn verify_condition_nest(
    group: &CoxeterGroup,
    pairs: &[(VertexSet, VertexSet)],
    uv_radius: usize,
    g_radius: usize,
    exec: &Exec,
) -> Result<Report> {
    for &(g1, g2) in pairs {
        group.graph().check_subset(g1)?;
        group.graph().check_subset(g2)?;
    }
    let uvs = group.ball_with(uv_radius, group.ball_cap(), exec)?.to_vec();
    let gs = group.ball_with(g_radius, group.ball_cap(), exec)?.to_vec();
    let parts = exec.map(pairs, |&(g1, g2)| {
        let mut report = Report::new("condition-nest");
        let members: Vec<&Element> = gs.iter().filter(|g| group.is_member(g, g1)).collect();
        let decs: Vec<LcrDecomposition> = uvs.iter().map(|x| lcr_decompose(group, x, g1, g2)).collect();
        let lambdas: Vec<VertexSet> = decs
            .iter()
            .map(|d| g1.intersection(g2).intersection(group.element_link(&d.center)))
            .collect();
        let mut by_coset: HashMap<Element, Vec<usize>> = HashMap::new();
        let mut by_center: HashMap<(&Element, Element), Vec<usize>> = HashMap::new();
        for (i, (v, d)) in uvs.iter().zip(&decs).enumerate() {
            by_coset.entry(right_coset_key(group, v, g2)).or_default().push(i);
            let key = right_coset_key(group, &d.left, lambdas[i]);
            by_center.entry((&d.center, key)).or_default().push(i);
        }
        let mut candidates = Vec::new();
        for (ui, u) in uvs.iter().enumerate() {
            let ud = &decs[ui];
            for g in &members {
                candidates.clear();
                if let Some(vs) = by_coset.get(&right_coset_key(group, &group.mul(g, u), g2)) {
                    candidates.extend_from_slice(vs);
                }
                let key = right_coset_key(group, &group.mul(g, &ud.left), lambdas[ui]);
                if let Some(vs) = by_center.get(&(&ud.center, key)) {
                    candidates.extend_from_slice(vs);
                }
                candidates.sort_unstable();
                candidates.dedup();
                for &vi in &candidates {
                    report.cases += 1;
                    let v = &uvs[vi];
                    let lhs = Some(group.sandwich(v, g, u)).filter(|z| group.is_member(z, g2));
                    let rhs = nest_rhs_basis(group, g, ud, &decs[vi], lambdas[ui]);
                    if lhs != rhs {
                        let as_vector = |z: Option<Element>| z.map_or_else(|| GroupAlgebraVector::zero(group), |z| GroupAlgebraVector::basis(&z));
                        report.mismatches.push(condition_nest_mismatch(
                            group,
                            g1,
                            g2,
                            g,
                            u,
                            v,
                            &as_vector(lhs),
                            &as_vector(rhs),
                        ));
                    }
                }
            }
        }
        report
    });
    let mut report = Report::from_parts("condition-nest", parts);
    report.mismatches.sort();
    Ok(report)
}

fn check_family(group: &CoxeterGroup, graphs: &[VertexSet]) -> Result<()> {
    if graphs.len() < 2 {
        return Err(Error::Precondition("need at least two subgraphs".into()));
    }
    for &g in graphs {
        group.graph().check_subset(g)?;
    }
    let meet = graphs.iter().fold(group.graph().all(), |acc, &g| acc.intersection(g));
    if !meet.is_empty() {
        return Err(Error::Precondition(format!(
            "subgraphs share the vertices {}",
            group.graph().format_set(meet)
        )));
    }
    Ok(())
}

/// `E_{Γ_n}(λ_{v_{n-1}}* … E_{Γ₂}(λ_{v₁}* E_{Γ₁}(x) λ_{u₁}) … λ_{u_{n-1}})`.
pub fn nested_expectation(
    group: &CoxeterGroup,
    graphs: &[VertexSet],
    u: &[Element],
    v: &[Element],
    x: &GroupAlgebraVector,
) -> Result<GroupAlgebraVector> {
    owns(group, x)?;
    if graphs.is_empty() || u.len() + 1 != graphs.len() || v.len() != u.len() {
        return Err(Error::Precondition("need n subgraphs and two tuples of length n - 1".into()));
    }
    let mut y = restrict(x, graphs[0]);
    for i in 0..u.len() {
        y = nest_step(group, &y, &v[i], &u[i], graphs[i + 1]);
    }
    Ok(y)
}

fn nest_step(group: &CoxeterGroup, y: &GroupAlgebraVector, v: &Element, u: &Element, lambda: VertexSet) -> GroupAlgebraVector {
    restrict(&sandwich(group, &group.inverse(v), y, u), lambda)
}

/// `δ_{u,v} · τ(x) · λ_ε`
fn delta_trace(group: &CoxeterGroup, same: bool, x: &GroupAlgebraVector) -> GroupAlgebraVector {
    if same {
        GroupAlgebraVector::scaled_basis(&group.identity(), trace(x))
    } else {
        GroupAlgebraVector::zero(group)
    }
}

fn format_tuple(group: &CoxeterGroup, t: &[Element]) -> String {
    t.iter().map(|x| format!("[{}]", group.format(x))).collect::<Vec<_>>().join(" ")
}

/// Checks the nested expectation against `δ_{u,v} τ(λ_g) λ_ε` for every
/// `g ∈ ball(radius)`. `⋂ Γ_i ≠ ∅` or `u, v ∉ V` is a precondition error.
pub fn iterated_expectation_check(
    group: &CoxeterGroup,
    graphs: &[VertexSet],
    u: &[Element],
    v: &[Element],
    radius: usize,
) -> Result<Report> {
    check_family(group, graphs)?;
    for t in [u, v] {
        if !in_v(group, t, graphs) {
            return Err(Error::Precondition(format!("tuple {} is not in V", format_tuple(group, t))));
        }
    }
    let mut report = Report::new("inner-product");
    for g in group.ball(radius)?.elements() {
        report.cases += 1;
        let x = GroupAlgebraVector::basis(g);
        let got = nested_expectation(group, graphs, u, v, &x)?;
        let want = delta_trace(group, u == v, &x);
        if got != want {
            report.mismatches.push(
                Mismatch::new("inner-product")
                    .with("g", group.format(g))
                    .with("u", format_tuple(group, u))
                    .with("v", format_tuple(group, v))
                    .with("got", got.format(group))
                    .with("expected", want.format(group)),
            );
        }
    }
    Ok(report)
}

/// All tuples in `V` whose entries lie in `ball(tuple_radius)`, sorted.
pub fn v_tuples(group: &CoxeterGroup, graphs: &[VertexSet], tuple_radius: usize) -> Result<Vec<Vec<Element>>> {
    if graphs.len() < 2 {
        return Err(Error::Precondition("need at least two subgraphs".into()));
    }
    let ball = group.ball(tuple_radius)?.to_vec();
    let slots: Vec<Vec<&Element>> = graphs[..graphs.len() - 1]
        .iter()
        .map(|&g| ball.iter().filter(|x| group.left_descents(x).intersection(g).is_empty()).collect())
        .collect();
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(slots.len());
    fn fill(
        group: &CoxeterGroup,
        graphs: &[VertexSet],
        slots: &[Vec<&Element>],
        current: &mut Vec<Element>,
        out: &mut Vec<Vec<Element>>,
    ) {
        if current.len() == slots.len() {
            if in_v(group, current, graphs) {
                out.push(current.clone());
            }
            return;
        }
        for x in &slots[current.len()] {
            current.push((*x).clone());
            fill(group, graphs, slots, current, out);
            current.pop();
        }
    }
    fill(group, graphs, &slots, &mut current, &mut out);
    out.sort();
    Ok(out)
}

/// Runs of tuples sharing the entry at `level` (input sorted).
fn runs<'a>(tuples: &'a [&'a [Element]], level: usize) -> Vec<&'a [&'a [Element]]> {
    let mut out = Vec::new();
    let mut start = 0;
    for i in 1..=tuples.len() {
        if i == tuples.len() || tuples[i][level] != tuples[start][level] {
            out.push(&tuples[start..i]);
            start = i;
        }
    }
    out
}

struct NestSweep<'a> {
    group: &'a CoxeterGroup,
    graphs: &'a [VertexSet],
    g: &'a Element,
    basis: GroupAlgebraVector,
}

impl NestSweep<'_> {
    /// `us` and `vs` share their first `level` entries; `y` is the partial map.
    fn descend(&self, level: usize, us: &[&[Element]], vs: &[&[Element]], same: bool, y: &GroupAlgebraVector, report: &mut Report) {
        let group = self.group;
        if level == self.graphs.len() - 1 {
            report.cases += 1;
            let want = delta_trace(group, same, &self.basis);
            if *y != want {
                report.mismatches.push(
                    Mismatch::new("inner-product")
                        .with("g", group.format(self.g))
                        .with("u", format_tuple(group, us[0]))
                        .with("v", format_tuple(group, vs[0]))
                        .with("got", y.format(group))
                        .with("expected", want.format(group)),
                );
            }
            return;
        }
        for ru in runs(us, level) {
            for rv in runs(vs, level) {
                let (uc, vc) = (&ru[0][level], &rv[0][level]);
                let next = nest_step(group, y, vc, uc, self.graphs[level + 1]);
                let same_next = same && uc == vc;
                if next.is_zero() {
                    // every completion maps λ_g to zero
                    report.cases += (ru.len() * rv.len()) as u64;
                    if same_next && !trace(&self.basis).is_zero() {
                        report.mismatches.push(
                            Mismatch::new("inner-product")
                                .with("g", group.format(self.g))
                                .with("u", format_tuple(group, ru[0]))
                                .with("v", format_tuple(group, ru[0]))
                                .with("got", "0")
                                .with("expected", delta_trace(group, true, &self.basis).format(group)),
                        );
                    }
                    continue;
                }
                self.descend(level + 1, ru, rv, same_next, &next, report);
            }
        }
    }
}

/// [`iterated_expectation_check`] for every pair of tuples from [`v_tuples`].
/// A partial map that is already zero stays zero, so whole subtrees of tuple
/// pairs are settled at once.
pub fn verify_inner_product(
    group: &CoxeterGroup,
    graphs: &[VertexSet],
    tuple_radius: usize,
    radius: usize,
    exec: &Exec,
) -> Result<Report> {
    check_family(group, graphs)?;
    let tuples = v_tuples(group, graphs, tuple_radius)?;
    let refs: Vec<&[Element]> = tuples.iter().map(Vec::as_slice).collect();
    let gs = group.ball_with(radius, group.ball_cap(), exec)?.to_vec();
    let parts = exec.map(&gs, |g| {
        let mut report = Report::new("inner-product");
        if refs.is_empty() {
            return report;
        }
        let sweep = NestSweep { group, graphs, g, basis: GroupAlgebraVector::basis(g) };
        let y = restrict(&sweep.basis, graphs[0]);
        if y.is_zero() {
            report.cases += (refs.len() * refs.len()) as u64;
            if g.is_identity() {
                report.mismatches.push(Mismatch::new("inner-product").with("g", "e").with("got", "0"));
            }
            return report;
        }
        sweep.descend(0, &refs, &refs, true, &y, &mut report);
        report
    });
    Ok(Report::from_parts("inner-product", parts))
}

/// Families `Γ_i = Link(v_i)` for increasing vertex sequences `v_1 < … < v_n`
/// whose links have empty common intersection.
pub fn link_families(group: &CoxeterGroup, n: usize) -> Vec<Vec<VertexSet>> {
    let graph = group.graph();
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::new();
    fn pick(graph: &crate::graph::SimpleGraph, n: usize, start: usize, chosen: &mut Vec<usize>, out: &mut Vec<Vec<VertexSet>>) {
        if chosen.len() == n {
            let links: Vec<VertexSet> = chosen.iter().map(|&v| graph.neighbours(v)).collect();
            if links.iter().fold(graph.all(), |a, &l| a.intersection(l)).is_empty() {
                out.push(links);
            }
            return;
        }
        for v in start..graph.len() {
            chosen.push(v);
            pick(graph, n, v + 1, chosen, out);
            chosen.pop();
        }
    }
    pick(graph, n, 0, &mut chosen, &mut out);
    out
}
