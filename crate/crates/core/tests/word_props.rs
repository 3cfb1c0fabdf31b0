mod common;

use std::collections::HashMap;
use std::sync::OnceLock;

use proptest::prelude::*;
use racg::{corpus, CoxeterGroup, Element};

fn groups() -> &'static [CoxeterGroup] {
    static GROUPS: OnceLock<Vec<CoxeterGroup>> = OnceLock::new();
    GROUPS.get_or_init(|| corpus::standard().into_iter().map(|ng| CoxeterGroup::new(ng.graph)).collect())
}

fn word_in_corpus(max_len: usize) -> impl Strategy<Value = (usize, Vec<u8>)> {
    (0..groups().len()).prop_flat_map(move |gi| {
        let rank = groups()[gi].rank() as u8;
        (Just(gi), prop::collection::vec(0..rank, 0..=max_len))
    })
}

fn nf(group: &CoxeterGroup, letters: &[u8]) -> Element {
    group.normal_form(&group.word_from_letters(letters).unwrap()).unwrap()
}

/// Words one rewrite away: a commuting swap or a cancellation of `s s`.
fn neighbours(group: &CoxeterGroup, w: &[u8]) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for j in 0..w.len().saturating_sub(1) {
        let mut next = w.to_vec();
        if w[j] == w[j + 1] {
            next.drain(j..j + 2);
        } else if group.graph().is_adjacent(w[j] as usize, w[j + 1] as usize) {
            next.swap(j, j + 1);
        } else {
            continue;
        }
        out.push(next);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn normal_form_is_idempotent((gi, w) in word_in_corpus(12)) {
        let g = &groups()[gi];
        let x = nf(g, &w);
        prop_assert_eq!(nf(g, x.letters()), x);
    }

    #[test]
    fn rewrite_neighbours_share_the_normal_form((gi, w) in word_in_corpus(7)) {
        let g = &groups()[gi];
        let x = nf(g, &w);
        for n in neighbours(g, &w) {
            prop_assert_eq!(nf(g, &n), x.clone());
        }
    }

    #[test]
    fn length_parity((gi, w) in word_in_corpus(10)) {
        let g = &groups()[gi];
        let x = nf(g, &w);
        prop_assert!(x.len() <= w.len());
        prop_assert_eq!(x.len() % 2, w.len() % 2);
        let reduced = g.reduce(&g.word_from_letters(&w).unwrap()).unwrap();
        prop_assert_eq!(reduced.len(), x.len());
    }

    #[test]
    fn product_and_inverse((gi, a) in word_in_corpus(6), b in prop::collection::vec(0u8..64, 0..6)) {
        let g = &groups()[gi];
        let b: Vec<u8> = b.into_iter().map(|l| l % g.rank() as u8).collect();
        let (x, y) = (nf(g, &a), nf(g, &b));
        let mut ab = a.clone();
        ab.extend(&b);
        prop_assert_eq!(g.mul(&x, &y), nf(g, &ab));
        prop_assert!(g.mul(&x, &g.inverse(&x)).is_identity());
    }
}

#[test]
fn normal_form_equality_matches_relation_classes() {
    for ng in corpus::standard() {
        let g = CoxeterGroup::new(ng.graph);
        let (words, classes) = common::relation_classes(&g, 4);
        let mut by_class: HashMap<usize, Element> = HashMap::new();
        let mut by_element: HashMap<Element, usize> = HashMap::new();
        for (w, &c) in words.iter().zip(&classes) {
            let x = nf(&g, w);
            assert_eq!(by_class.entry(c).or_insert_with(|| x.clone()), &x, "{}: class split", ng.name);
            assert_eq!(*by_element.entry(x).or_insert(c), c, "{}: classes merged", ng.name);
        }
        let ball = g.ball(4).unwrap();
        assert_eq!(by_element.len(), ball.len(), "{}", ng.name);
        assert!(ball.elements().all(|x| by_element.contains_key(x)));
    }
}

#[test]
fn descents_and_lengths_on_balls() {
    for ng in corpus::standard() {
        let g = CoxeterGroup::new(ng.graph);
        let ball5 = g.ball(5).unwrap();
        for x in ball5.elements() {
            assert_eq!(g.left_descents(x), g.right_descents(&g.inverse(x)));
            for a in 0..g.rank() {
                let s = g.generator(a);
                assert_eq!(g.left_descents(x).contains(a), g.mul(&s, x).len() < x.len());
                assert_eq!(g.right_descents(x).contains(a), g.mul(x, &s).len() < x.len());
            }
        }
    }
}

#[test]
fn product_lengths_on_ball4() {
    for ng in corpus::named_graphs().into_iter().chain(corpus::random_graphs().into_iter().step_by(5)) {
        let g = CoxeterGroup::new(ng.graph);
        let ball = g.ball(4).unwrap().to_vec();
        for x in &ball {
            for y in &ball {
                let p = g.mul(x, y).len();
                assert!(p <= x.len() + y.len());
                assert_eq!(p % 2, (x.len() + y.len()) % 2);
            }
        }
    }
}
