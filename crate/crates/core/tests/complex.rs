mod common;

use proptest::prelude::*;

use common::*;
use rmoduli_core::decorated_trees::InvolutionSpec;
use rmoduli_core::enumeration::enumerate_classes;
use rmoduli_core::graph_complex::{Coeff, GradedComplex};
use rmoduli_core::homology::betti_mod2;

fn all_sigmas() -> Vec<InvolutionSpec> {
    (3..=6).flat_map(conjugacy_types).collect()
}

#[test]
fn boundary_support_is_odd_coverings() {
    for s in all_sigmas() {
        let f = fixture(&s);
        for d in 1..=f.complex.top() {
            let m = f.complex.boundary[d].dense();
            for c in f.poset.coverings.iter().filter(|c| c.upper.dim == d) {
                assert_eq!(m[c.lower.idx][c.upper.idx].rem_euclid(2), i64::from(c.mult % 2));
            }
            let listed = f.poset.coverings.iter().filter(|c| c.upper.dim == d && c.mult % 2 == 1).count();
            let nonzero = m.iter().flatten().filter(|x| *x % 2 != 0).count();
            assert_eq!(listed, nonzero);
        }
    }
}

#[test]
fn euler_matches_local_product_oracle() {
    for s in all_sigmas() {
        let f = fixture(&s);
        let h = betti_mod2(f.quotient.as_ref().unwrap()).unwrap();
        assert_eq!(h.euler, euler_oracle(&f.poset), "{} n={}", s.notation(), s.n());
    }
}

#[test]
fn relation_ranks_match_vertex_count_oracle() {
    for s in all_sigmas() {
        let f = fixture(&s);
        let want = relation_count_oracle(&f.poset);
        assert_eq!(relation_ranks(&f.complex), want, "{} n={}", s.notation(), s.n());
    }
}

#[test]
fn poincare_duality_mod_2() {
    for s in all_sigmas() {
        let f = fixture(&s);
        let b = betti_mod2(f.quotient.as_ref().unwrap()).unwrap().betti2;
        let mut r = b.clone();
        r.reverse();
        assert_eq!(b, r, "{} n={}", s.notation(), s.n());
        assert_eq!(b[0], 1);
    }
}

fn conjugate(s: &InvolutionSpec, p: &[u8]) -> InvolutionSpec {
    let pairs = s.pairs().iter().map(|&(a, b)| (p[a as usize - 1] + 1, p[b as usize - 1] + 1)).collect();
    InvolutionSpec::new(s.n(), pairs).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn relabeling_is_an_isomorphism(
        s in sigma_strategy(4, 6),
        perm in Just((0u8..6).collect::<Vec<u8>>()).prop_shuffle(),
    ) {
        let n = s.n();
        let p: Vec<u8> = perm.into_iter().filter(|&x| (x as usize) < n).collect();
        let t = conjugate(&s, &p);
        let a = enumerate_classes(&s);
        let b = enumerate_classes(&t);
        prop_assert_eq!(a.counts(), b.counts());
        let image = |id| b.lookup(&a.class(id).rep.relabel(&p).encoding(&t)).expect("image");
        for c in &a.coverings {
            let (u, l) = (image(c.upper), image(c.lower));
            let m: u8 = b.coverings.iter().filter(|x| x.upper == u && x.lower == l).map(|x| x.mult).sum();
            prop_assert_eq!(m, c.mult);
        }
        let ha = betti_mod2(&fixture(&s).quotient.clone().unwrap()).unwrap();
        let hb = betti_mod2(&fixture(&t).quotient.clone().unwrap()).unwrap();
        prop_assert_eq!(ha.betti2, hb.betti2);
    }
}

#[test]
fn exports() {
    let s = InvolutionSpec::identity(5).unwrap();
    let c = GradedComplex::build(&enumerate_classes(&s), Coeff::Z2);
    let m = &c.boundary[2];
    let sms = m.to_sms();
    let lines: Vec<&str> = sms.lines().collect();
    assert_eq!(lines[0], format!("{} {} M", m.rows, m.cols));
    assert_eq!(lines.len(), m.entries.len() + 2);
    assert_eq!(*lines.last().unwrap(), "0 0 0");
    let j = m.to_json();
    assert_eq!(j["rows"], m.rows);
    assert_eq!(j["entries"].as_array().unwrap().len(), m.entries.len());
}

#[test]
fn integer_mode_on_circles() {
    for s in conjugacy_types(4) {
        let c = GradedComplex::build(&enumerate_classes(&s), Coeff::ZExperimental);
        assert!(c.check_d_squared().is_ok());
        let q = c.quotient().unwrap();
        let h = rmoduli_core::homology::integer_homology(&q).unwrap();
        assert_eq!(h.betti2, vec![1, 1]);
    }
}
