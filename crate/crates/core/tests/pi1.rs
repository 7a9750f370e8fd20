mod common;

use proptest::prelude::*;

use common::*;
use rmoduli_core::decorated_trees::InvolutionSpec;
use rmoduli_core::pi1::{abelianization, collapse_to_group, collapse_with_tree, components, wall_crossing_presentation};

fn all_sigmas() -> Vec<InvolutionSpec> {
    (4..=6).flat_map(conjugacy_types).collect()
}

#[test]
fn presentation_shape() {
    for s in all_sigmas() {
        let f = fixture(&s);
        let w = wall_crossing_presentation(&f.poset).unwrap();
        let top = f.poset.top_dim();
        assert_eq!(w.objects.len(), f.poset.classes[top].len());
        assert_eq!(w.walls.len(), f.poset.classes[top - 1].len());
        assert_eq!(w.crossings.len(), 2 * w.walls.len());
        for (k, pair) in w.crossings.chunks(2).enumerate() {
            assert_eq!((pair[0].wall, pair[1].wall), (k, k));
            assert_eq!((pair[0].from, pair[0].to), (pair[1].to, pair[1].from));
        }
        assert_eq!(components(&w).len(), 1);
    }
}

#[test]
fn abelianization_rank_is_betti_one() {
    for s in all_sigmas() {
        let f = fixture(&s);
        let b1 = rmoduli_core::homology::betti_mod2(f.quotient.as_ref().unwrap()).unwrap().betti2[1];
        let g = collapse_to_group(&wall_crossing_presentation(&f.poset).unwrap()).unwrap();
        assert_eq!(abelianization(&g).rank_mod2(), b1, "{} n={}", s.notation(), s.n());
    }
}

#[test]
fn known_groups() {
    let cases = [
        (5, "(1 2)", "Z^2 + Z/2"),
        (5, "(1 2)(3 4)", "Z/2"),
        (6, "id", "Z^10 + (Z/2)^6"),
        (6, "(1 2)", "Z^4 + (Z/2)^4"),
        (6, "(1 2)(3 4)", "Z^2 + (Z/2)^2"),
        (6, "(1 2)(3 4)(5 6)", "Z^3 + Z/2"),
    ];
    for (n, text, want) in cases {
        let s = rmoduli_core::decorated_trees::parse_sigma(text, n).unwrap();
        let g = collapse_to_group(&wall_crossing_presentation(&fixture(&s).poset).unwrap()).unwrap();
        assert_eq!(abelianization(&g).notation(), want, "n={n} {text}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn spanning_tree_does_not_matter(s in sigma_strategy(4, 6), seed in any::<u64>()) {
        let w = wall_crossing_presentation(&fixture(&s).poset).unwrap();
        let mut order: Vec<usize> = (0..w.walls.len()).collect();
        let mut x = seed | 1;
        for i in (1..order.len()).rev() {
            x ^= x << 13;
            x ^= x >> 7;
            x ^= x << 17;
            order.swap(i, (x % (i as u64 + 1)) as usize);
        }
        let a = abelianization(&collapse_to_group(&w).unwrap());
        let b = abelianization(&collapse_with_tree(&w, &order).unwrap());
        prop_assert_eq!(a, b);
    }
}
