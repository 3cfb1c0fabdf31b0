use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use racg::parabolic::{
    all_subsets, conjugate_parabolic_intersection, in_v, lcr_decompose, min_double_coset_rep, normalize_tuple_to_v,
    right_coset_key, verify_combinatorics, verify_combinatorics_brute,
};
use racg::{corpus, CoxeterGroup, Exec, VertexSet};

fn small_groups() -> Vec<(String, CoxeterGroup)> {
    corpus::named_graphs()
        .into_iter()
        .chain(corpus::random_graphs().into_iter().step_by(4))
        .map(|ng| (ng.name, CoxeterGroup::new(ng.graph)))
        .collect()
}

#[test]
fn double_coset_rep_is_constant_on_the_double_coset() {
    for (name, g) in small_groups() {
        let ball = g.ball(3).unwrap().to_vec();
        for g1 in all_subsets(&g) {
            for x in &ball {
                let d = min_double_coset_rep(&g, x, g1);
                assert!(g.left_descents(&d).intersection(g1).is_empty(), "{name}");
                assert!(g.right_descents(&d).intersection(g1).is_empty(), "{name}");
                assert!(d.len() <= x.len());
                let lcr = lcr_decompose(&g, x, g1, g1);
                assert_eq!(g.mul(&lcr.left, &g.mul(&d, &lcr.right)), *x);
                assert!(g.is_member(&lcr.left, g1) && g.is_member(&lcr.right, g1));
                for s in g1.iter() {
                    let s = g.generator(s);
                    assert_eq!(min_double_coset_rep(&g, &g.mul(&s, x), g1), d, "{name}");
                    assert_eq!(min_double_coset_rep(&g, &g.mul(x, &s), g1), d, "{name}");
                }
            }
        }
    }
}

#[test]
fn right_coset_key_is_the_shortest_coset_element() {
    for (name, g) in small_groups() {
        let ball = g.ball(3).unwrap().to_vec();
        for lambda in all_subsets(&g) {
            for x in &ball {
                let key = right_coset_key(&g, x, lambda);
                assert!(g.right_descents(&key).intersection(lambda).is_empty(), "{name}");
                let tail = g.mul(&g.inverse(&key), x);
                assert!(g.is_member(&tail, lambda), "{name}");
                assert_eq!(key.len() + tail.len(), x.len());
                for s in lambda.iter() {
                    assert_eq!(right_coset_key(&g, &g.mul(x, &g.generator(s)), lambda), key);
                }
            }
        }
    }
}

#[test]
fn intersection_core_lies_in_the_link_of_the_rep() {
    for (_, g) in small_groups() {
        let ball = g.ball(3).unwrap().to_vec();
        for g1 in all_subsets(&g) {
            for x in &ball {
                let pi = conjugate_parabolic_intersection(&g, x, g1);
                assert_eq!(pi.core, g1.intersection(g.element_link(&pi.min_rep)));
                for c in pi.core.iter() {
                    let s = g.generator(c);
                    assert_eq!(g.mul(&s, &pi.min_rep), g.mul(&pi.min_rep, &s));
                }
            }
        }
    }
}

#[test]
fn indexed_and_brute_combinatorics_agree() {
    let exec = Exec::sequential();
    for (name, g) in small_groups().into_iter().filter(|(_, g)| g.rank() <= 5) {
        let fast = verify_combinatorics(&g, 2, &exec).unwrap();
        let slow = verify_combinatorics_brute(&g, 2, &exec).unwrap();
        assert!(fast.passed() && slow.passed(), "{name}");
        assert_eq!(fast.cases, slow.cases, "{name}");
    }
}

#[test]
fn normalized_tuples_lie_in_v_and_keep_the_product() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for (name, g) in small_groups() {
        let ball = g.ball(3).unwrap().to_vec();
        let subsets = all_subsets(&g);
        for _ in 0..200 {
            let n = rng.gen_range(2..=4);
            let graphs: Vec<VertexSet> = (0..n).map(|_| *subsets.choose(&mut rng).unwrap()).collect();
            let tuple: Vec<_> = (0..n - 1).map(|_| ball.choose(&mut rng).unwrap().clone()).collect();
            let out = normalize_tuple_to_v(&g, &tuple, &graphs).unwrap();
            assert!(in_v(&g, &out.tuple, &graphs), "{name}");
            let product = |xs: &[racg::Element]| xs.iter().fold(g.identity(), |acc, x| g.mul(&acc, x));
            let before = product(&tuple);
            let after = g.mul(&product(&out.absorbed_left), &g.mul(&product(&out.tuple), &out.absorbed_right));
            assert_eq!(before, after, "{name}");
            for l in &out.absorbed_left {
                assert!(g.is_member(l, graphs[0]));
            }
            if in_v(&g, &tuple, &graphs) {
                assert_eq!(out.tuple, tuple);
            }
        }
    }
}

#[test]
fn normalize_rejects_bad_shapes() {
    let g = CoxeterGroup::new(corpus::k23());
    let x = g.element("a1").unwrap();
    assert!(normalize_tuple_to_v(&g, std::slice::from_ref(&x), &[g.graph().all()]).is_err());
    assert!(normalize_tuple_to_v(&g, &[x.clone(), x], &[g.graph().all(); 2]).is_err());
}
