use num_bigint::BigInt;
use racg::classify::classify;
use racg::growth::{growth_series, growth_type, GrowthKind, IntPolynomial, RationalSeries};
use racg::{corpus, CoxeterGroup, Exec, SimpleGraph};

#[test]
fn series_matches_sphere_counts() {
    let exec = Exec::default();
    for ng in corpus::standard() {
        let series = growth_series(&ng.graph);
        let predicted = series.coefficients(10).unwrap();
        let counted = CoxeterGroup::new(ng.graph).sphere_sizes_with(10, 8_000_000, &exec).unwrap();
        let counted: Vec<BigInt> = counted.into_iter().map(BigInt::from).collect();
        assert_eq!(predicted, counted, "{}", ng.name);
    }
}

#[test]
fn joins_multiply_series() {
    let graphs = corpus::named_graphs();
    for a in &graphs {
        for b in graphs.iter().filter(|b| b.graph.len() + a.graph.len() <= 9) {
            let names = b.graph.names().iter().map(|n| format!("r_{n}")).collect();
            let renamed = SimpleGraph::from_fn(names, |i, j| b.graph.is_adjacent(i, j)).unwrap();
            let j = a.graph.join(&renamed).unwrap();
            let product = growth_series(&a.graph).mul(&growth_series(&b.graph)).unwrap();
            assert_eq!(growth_series(&j), product, "{} * {}", a.name, b.name);
        }
    }
}

#[test]
fn known_series() {
    let k23 = growth_series(&corpus::k23());
    let expected = RationalSeries::new(IntPolynomial::from_i64(&[1, 2, 1]), IntPolynomial::from_i64(&[1, -3, 2])).unwrap();
    assert_eq!(k23, expected);
    let dinf = growth_series(&corpus::d_infinity());
    assert_eq!(dinf.numerator(), &IntPolynomial::from_i64(&[1, 1]));
    assert_eq!(dinf.denominator(), &IntPolynomial::from_i64(&[1, -1]));
    let finite = growth_series(&corpus::complete(3));
    assert_eq!(finite.numerator(), &IntPolynomial::from_i64(&[1, 3, 3, 1]));
    assert_eq!(finite.denominator(), &IntPolynomial::one());
}

#[test]
fn growth_type_agrees_with_the_classifier() {
    for ng in corpus::standard() {
        let report = growth_type(&ng.graph, 30).unwrap();
        let amenable = classify(&ng.graph).unwrap().amenable;
        let expected = if amenable { GrowthKind::Polynomial } else { GrowthKind::Exponential };
        assert_eq!(report.kind, expected, "{}", ng.name);
        assert_eq!(report.graph_prediction, expected, "{}", ng.name);
    }
}

#[test]
fn growth_type_needs_depth() {
    assert!(growth_type(&corpus::k23(), 19).is_err());
    assert!(growth_type(&corpus::k23(), 20).is_ok());
}
