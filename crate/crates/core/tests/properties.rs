use proptest::prelude::*;

use simplelift::cover::{elevations, PermCover};
use simplelift::growth::threshold_defect;
use simplelift::hyperbolic::{
    gamma_n_length, geodesic_length, ortho_distance, pants_holonomy, thrice_punctured_holonomy, Isometry, PantsMetric,
};
use simplelift::intersection::{path_self_intersection, CurvePath};
use simplelift::ribbon::cover_ribbon;
use simplelift::word::Letter;
use simplelift::{pants_base, self_intersection, CyclicWord};

fn letters(max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((0usize..2, any::<bool>()), 1..=max_len)
        .prop_map(|v| v.into_iter().map(|(g, i)| Letter::new(g, i)).collect())
}

fn primitive_word(max_len: usize) -> impl Strategy<Value = CyclicWord> {
    letters(max_len).prop_filter_map("trivial or a proper power", |ls| {
        CyclicWord::from_letters(2, &ls).ok().filter(|w| w.power_root().1 == 1)
    })
}

fn perm(d: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..d).collect::<Vec<_>>()).prop_shuffle()
}

fn cover() -> impl Strategy<Value = PermCover> {
    (1usize..=5)
        .prop_flat_map(|d| (perm(d), perm(d)))
        .prop_filter_map("not transitive", |(a, b)| PermCover::from_images(vec![a, b]).ok())
}

fn metric() -> impl Strategy<Value = PantsMetric> {
    (0.1f64..5.0, 0.1f64..5.0, 0.1f64..5.0).prop_map(|(a, b, c)| PantsMetric::new(a, b, c).unwrap())
}

proptest! {
    #[test]
    fn intersection_is_inverse_invariant(w in primitive_word(14)) {
        let base = pants_base();
        prop_assert_eq!(self_intersection(&w, &base).unwrap(), self_intersection(&w.invert(), &base).unwrap());
    }

    #[test]
    fn canonical_form_is_idempotent(ls in letters(14), r in 0usize..14) {
        if let Ok(w) = CyclicWord::from_letters(2, &ls) {
            let mut rotated = w.letters().to_vec();
            let k = r % rotated.len();
            rotated.rotate_left(k);
            prop_assert_eq!(CyclicWord::from_letters(2, &rotated).unwrap(), w.clone());
            prop_assert_eq!(CyclicWord::parse(&w.to_string(), 2).unwrap(), w);
        }
    }

    #[test]
    fn trace_length_is_conjugation_invariant(m in metric(), w in primitive_word(8), c in primitive_word(4)) {
        let rep = pants_holonomy(&m).unwrap();
        let mut conj = c.letters().to_vec();
        conj.extend_from_slice(w.letters());
        conj.extend(c.letters().iter().rev().map(|l| l.inverted()));
        let u = CyclicWord::from_letters(2, &conj).unwrap();
        prop_assert_eq!(&u, &w);
        let x = rep.image(&w).unwrap();
        let g = rep.image(&c).unwrap();
        let y = g.mul(&x).mul(&g.inverse());
        prop_assert!((x.trace() - y.trace()).abs() <= 1e-8 * x.trace().abs().max(1.0));
    }

    #[test]
    fn holonomy_preserves_determinant(m in metric(), w in primitive_word(12)) {
        let rep = pants_holonomy(&m).unwrap();
        let x = rep.image(&w).unwrap();
        prop_assert!((x.det() - 1.0).abs() < 1e-6 * (1.0 + x.a.abs() + x.b.abs() + x.c.abs() + x.d.abs()).powi(2));
        prop_assert!(rep.trace_defect(&m) < 1e-9);
    }

    #[test]
    fn gamma_length_bound_random_metrics(m in metric(), n in 0u64..=100) {
        let rep = pants_holonomy(&m).unwrap();
        let [la, lb, _] = m.cuffs;
        let bound = la + n as f64 * lb + 2.0 * ortho_distance(&m).unwrap();
        prop_assert!(gamma_n_length(&rep, n).unwrap() <= bound);
    }

    #[test]
    fn elevation_degrees_sum_to_cover_degree(c in cover(), w in primitive_word(10)) {
        let total: usize = elevations(&pants_base(), &c, &w).unwrap().iter().map(|e| e.traversal_degree).sum();
        prop_assert_eq!(total, c.degree());
    }

    #[test]
    fn cover_boundaries_cover_base_boundaries(c in cover()) {
        let base = pants_base();
        let graph = cover_ribbon(&base, &c).unwrap();
        let base_words: Vec<CyclicWord> =
            base.boundary_walks().iter().map(|w| base.walk_word(w).unwrap()).collect();
        let mut lengths = 0;
        for walk in graph.boundary_walks() {
            let word = graph.walk_word(&walk).unwrap();
            let (root, _) = word.power_root();
            prop_assert!(base_words.contains(&root), "{} is not a power of a base boundary", word);
            let path = CurvePath::new(&graph, walk.darts.clone()).unwrap();
            prop_assert_eq!(path_self_intersection(&graph, &path).unwrap(), 0);
            lengths += walk.len();
        }
        prop_assert_eq!(lengths, 2 * graph.edge_count());
    }

    #[test]
    fn euler_characteristic_is_multiplicative(c in cover()) {
        let base = pants_base().euler_and_genus().unwrap();
        let up = cover_ribbon(&pants_base(), &c).unwrap().euler_and_genus().unwrap();
        prop_assert_eq!(up.euler_characteristic, c.degree() as i64 * base.euler_characteristic);
        prop_assert_eq!(up.euler_characteristic, 2 - 2 * up.genus as i64 - up.boundary_components as i64);
    }
}

#[test]
fn cusped_defect_stays_bounded() {
    let rep = thrice_punctured_holonomy();
    let mut n = 1u64;
    let mut previous = 2.0 * 3f64.acosh();
    while n <= 1_000_000 {
        let exact = gamma_n_length(&rep, n).unwrap();
        let defect = exact - 2.0 * (n as f64).ln();
        assert!((defect - threshold_defect(n)).abs() < 1e-6, "n = {n}");
        // decreases from 2 arccosh 3 at n = 1 towards 2 log 4
        assert!(defect > 2.0 * 4f64.ln() - 1e-9 && defect <= previous + 1e-12, "n = {n}: {defect}");
        previous = defect;
        n = n * 3 + 1;
    }
}

#[test]
fn matrix_product_matches_word_image() {
    let rep = thrice_punctured_holonomy();
    let w = CyclicWord::parse("abAB", 2).unwrap();
    let by_hand = rep.a.mul(&rep.b).mul(&rep.a.inverse()).mul(&rep.b.inverse());
    assert_eq!(rep.image(&w).unwrap().trace(), by_hand.trace());
    assert_eq!(geodesic_length(&rep, &w).unwrap(), simplelift::hyperbolic::trace_to_length(by_hand.trace()).unwrap());
    let id = Isometry::new(1.0, 0.0, 0.0, 1.0).unwrap();
    assert_eq!(rep.a.mul(&rep.a.inverse()), id);
}
