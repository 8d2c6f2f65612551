use cartdec::cartesian::classify::classify_observed;
use cartdec::cartesian::quotient::quotient_system;
use cartdec::cartesian::{
    decomposition_from_system, is_g_invariant, system_from_decomposition, verify_system, CartesianSystem,
};
use cartdec::cartesian::classify::ClassLabel;
use cartdec::demos;
use cartdec::perm::Perm;
use cartdec::product::detect_strips;
use proptest::prelude::*;

const SMALL: [&str; 7] = [
    "a5-2nsim",
    "a5a5-2nsim",
    "a6-2sim",
    "a6a6-2sim",
    "a6a6-1s",
    "a6a6-1s-valency2",
    "a5a5a5-s",
];

fn sys(name: &str) -> CartesianSystem {
    demos::demo(name).unwrap().unwrap()
}

/// The element of `M` with the given `T`-element indices per coordinate.
fn element(s: &CartesianSystem, picks: &[usize]) -> Perm {
    let pg = s.instance().m();
    let t = pg.t().elements().unwrap();
    let parts: Vec<Perm> = (0..pg.k()).map(|i| t[picks[i] % t.len()].clone()).collect();
    pg.embed(&parts)
}

#[test]
fn grid_counting_identity() {
    for name in demos::DEMO_NAMES {
        let s = sys(name);
        let pg = s.instance().m();
        let m = pg.order().unwrap();
        let prod: u128 = s.members().iter().map(|k| m / k.order().unwrap() as u128).product();
        assert_eq!(s.instance().omega_size().unwrap(), prod, "{name}");
    }
}

#[test]
fn quotient_keeps_the_class() {
    for name in ["a5-2nsim", "a5a5-2nsim", "a6-2sim", "a6a6-2sim", "a6a6-1s", "a6a6-1s-valency2"] {
        let s = sys(name);
        let label = classify_observed(&s).unwrap().label;
        assert!(matches!(label, ClassLabel::TwoSim | ClassLabel::TwoNsim | ClassLabel::OneS));
        let q = quotient_system(&s, label).unwrap();
        assert!(q.report.valid, "{name}");
        assert!(q.class_matches(), "{name}: {:?}", q.classification.label);
    }
}

#[test]
fn strips_of_transitive_members_are_disjoint() {
    for name in SMALL.iter().filter(|n| demos::is_transitive_demo(n)) {
        let s = sys(name);
        for k in s.members() {
            let d = detect_strips(k).unwrap();
            let strips = d.strips();
            for (i, x) in strips.iter().enumerate() {
                for y in &strips[i + 1..] {
                    assert!(x.support().iter().all(|c| !y.support().contains(c)), "{name}");
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn basepoint_change_is_harmless(which in 0..SMALL.len(), picks in proptest::collection::vec(0usize..360, 3)) {
        let s = sys(SMALL[which]);
        let x = element(&s, &picks);
        let r = s.rebased(&x).unwrap();
        prop_assert!(verify_system(&r).unwrap().valid);
        prop_assert_eq!(r.instance().omega_size().unwrap(), s.instance().omega_size().unwrap());
        let (a, b) = (classify_observed(&s).unwrap(), classify_observed(&r).unwrap());
        prop_assert_eq!(a.label, b.label);
        prop_assert_eq!(a.invariant, b.invariant);
        prop_assert_eq!(a.transitive, b.transitive);
        prop_assert_eq!(is_g_invariant(&r).unwrap(), a.invariant);
    }

    #[test]
    fn rebased_systems_round_trip(which in 0..4usize, picks in proptest::collection::vec(0usize..360, 3)) {
        let s = sys(["a5-2nsim", "a5a5-2nsim", "a6-2sim", "a5a5a5-s"][which]);
        let r = s.rebased(&element(&s, &picks)).unwrap();
        let d = decomposition_from_system(&r).unwrap();
        prop_assert!(d.check().unwrap().valid);
        let back = system_from_decomposition(&d).unwrap();
        prop_assert!(back.same_members(&r).unwrap());
    }
}
