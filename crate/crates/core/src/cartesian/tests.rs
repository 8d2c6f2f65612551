use super::properties::{verify_factorisation_property, verify_isomorphism_property, verify_quotient_property};
use super::*;
use crate::catalog::{self, Factorisation};
use crate::perm::{Perm, PermGroup};
use crate::product::{ProductOptions, ProductGroup};
use crate::report::Status;

fn product(f: &Factorisation, k: usize) -> ProductGroup {
    ProductGroup::with_options(
        f.t.clone(),
        k,
        ProductOptions {
            assume_simple: f.assume_simple,
            automorphisms: f.automorphisms.clone(),
            ..Default::default()
        },
    )
    .unwrap()
}

fn at(pg: &ProductGroup, i: usize, h: &PermGroup) -> ProductSubgroup {
    classify::at_coordinate(pg, i, h).unwrap()
}

fn a5_pair() -> CartesianSystem {
    let f = catalog::a5();
    let pg = product(&f, 1);
    let inst = PointedInstance::new(pg.clone(), at(&pg, 0, &f.intersection), vec![]).unwrap();
    CartesianSystem::new(inst, vec![at(&pg, 0, &f.a), at(&pg, 0, &f.b)]).unwrap()
}

fn a6_pair() -> CartesianSystem {
    let f = catalog::a6();
    let pg = product(&f, 1);
    let swap = GOmegaAction::new(&pg, Perm::identity(1), vec![f.swapper.clone().unwrap()]).unwrap();
    let inst = PointedInstance::new(pg.clone(), at(&pg, 0, &f.intersection), vec![swap]).unwrap();
    CartesianSystem::new(inst, vec![at(&pg, 0, &f.a), at(&pg, 0, &f.b)]).unwrap()
}

#[test]
fn a5_pair_is_a_system_on_30_points() {
    let s = a5_pair();
    let r = verify_system(&s).unwrap();
    assert!(r.valid, "{r:?}");
    assert_eq!(r.omega_size, 30);
    assert_eq!(r.members.iter().map(|m| m.index_in_m).collect::<Vec<_>>(), vec![5, 6]);
    assert!(r.grid_identity);
    assert_eq!(s.instance().coset_space().unwrap().size(), 30);
}

#[test]
fn a5_pair_decomposes_into_a_grid() {
    let s = a5_pair();
    let d = decomposition_from_system(&s).unwrap();
    let c = d.check().unwrap();
    assert!(c.valid);
    assert_eq!(c.block_counts, vec![5, 6]);
    for (part, size) in d.partitions().iter().zip([6, 5]) {
        assert!(part.blocks.iter().all(|b| b.len() == size));
    }
    let back = system_from_decomposition(&d).unwrap();
    assert!(back.same_members(&s).unwrap());
    let d2 = decomposition_from_system(&back).unwrap();
    assert!(d2.same_partitions(&d));
}

#[test]
fn a5_pair_is_invariant_but_not_transitive() {
    let s = a5_pair();
    assert!(is_g_invariant(&s).unwrap());
    assert!(!is_transitive(&s).unwrap());
    assert_eq!(classify(&s).unwrap_err(), CartesianError::NotTransitive);
    let c = classify_observed(&s).unwrap();
    assert_eq!(c.label, ClassLabel::TwoNsim);
    assert_eq!(c.fi.sizes, vec![2]);
    assert!(!c.pair.unwrap().conjugate);
}

#[test]
fn a5_pair_factorisation_clauses_hold() {
    let s = a5_pair();
    let rep = verify_factorisation_property(&s, ClassLabel::TwoNsim).unwrap();
    assert!(rep.clauses.iter().all(|c| c.status == Status::Pass), "{rep:?}");
    assert_eq!(rep.clauses.len(), 5);
}

#[test]
fn non_proper_and_duplicate_members_are_rejected() {
    let s = a5_pair();
    let inst = s.instance().clone();
    let pg = inst.m().clone();
    let r = verify_members(&inst, &[pg.full()]).unwrap();
    assert!(!r.valid);
    assert!(!r.members[0].proper);
    let a = s.members()[0].clone();
    let r = verify_members(&inst, &[a.clone(), a.clone()]).unwrap();
    assert!(!r.valid);
    assert_eq!(r.duplicate_pairs, vec![(0, 1)]);
    assert_eq!(
        CartesianSystem::new(inst, vec![a.clone(), a]).unwrap_err(),
        CartesianError::DuplicateMember(0, 1)
    );
}

#[test]
fn single_member_system() {
    let f = catalog::a5();
    let pg = product(&f, 1);
    let inst = PointedInstance::new(pg.clone(), at(&pg, 0, &f.a), vec![]).unwrap();
    let s = CartesianSystem::new(inst, vec![at(&pg, 0, &f.a)]).unwrap();
    let r = verify_system(&s).unwrap();
    assert!(r.valid);
    assert_eq!(r.omega_size, 5);
    let d = decomposition_from_system(&s).unwrap();
    assert_eq!(d.partitions()[0].len(), 5);
    assert!(system_from_decomposition(&d).unwrap().same_members(&s).unwrap());
}

#[test]
fn corrupted_decomposition_is_rejected() {
    let s = a5_pair();
    let d = decomposition_from_system(&s).unwrap();
    let mut parts = d.partitions().to_vec();
    let moved = parts[0].blocks[0].pop().unwrap();
    parts[0].blocks[1].push(moved);
    let bad = CartesianDecomposition::new(s.instance().clone(), parts);
    assert!(!bad.check().unwrap().valid);
    assert!(matches!(
        system_from_decomposition(&bad),
        Err(CartesianError::InvalidDecomposition(_))
    ));
}

#[test]
fn instance_validation() {
    let f = catalog::a5();
    let pg = product(&f, 1);
    // M_omega = M
    assert!(PointedInstance::new(pg.clone(), pg.full(), vec![]).is_err());
    // an action not normalizing M_omega
    let c5 = Perm::parse("(0 1 2 3 4)", 5).unwrap();
    let g = GOmegaAction::inner(&pg, &c5);
    assert!(PointedInstance::new(pg.clone(), at(&pg, 0, &f.intersection), vec![g]).is_err());
    // G_omega meets M outside M_omega
    let v = Perm::parse("(0 1) (2 3)", 5).unwrap();
    let g = GOmegaAction::inner(&pg, &v);
    assert!(matches!(
        PointedInstance::new(pg.clone(), at(&pg, 0, &f.intersection), vec![g]),
        Err(CartesianError::InvalidInstance(_))
    ));
    // coordinates not permuted transitively
    let k2 = product(&f, 2);
    assert!(PointedInstance::new(k2.clone(), k2.direct_product(&[f.a.clone(), f.b.clone()]), vec![]).is_err());
    // a factor inside M_omega
    let swap = GOmegaAction::new(&k2, Perm::parse("(0 1)", 2).unwrap(), vec![Perm::identity(5); 2]).unwrap();
    let bad = k2.direct_product(&[f.t.clone(), PermGroup::trivial(5)]);
    assert!(PointedInstance::new(k2, bad, vec![swap]).is_err());
}

#[test]
fn a6_pair_is_2sim_on_36_points() {
    let s = a6_pair();
    assert!(verify_system(&s).unwrap().valid);
    assert_eq!(s.instance().omega_size().unwrap(), 36);
    let c = classify(&s).unwrap();
    assert_eq!(c.label, ClassLabel::TwoSim);
    assert!(c.pair.as_ref().unwrap().witness.is_some());
    let d = decomposition_from_system(&s).unwrap();
    assert_eq!(d.check().unwrap().block_counts, vec![6, 6]);
}

#[test]
fn a6_pair_suites() {
    let s = a6_pair();
    for rep in [
        verify_factorisation_property(&s, ClassLabel::TwoSim).unwrap(),
        verify_quotient_property(&s, ClassLabel::TwoSim).unwrap(),
        verify_isomorphism_property(&s, ClassLabel::TwoSim).unwrap(),
    ] {
        assert!(rep.clauses.iter().all(|c| c.status == Status::Pass), "{rep:?}");
    }
    let q = quotient_system(&s, ClassLabel::TwoSim).unwrap();
    assert!(q.equals_original);
    assert!(q.m_bar_equals_m_omega);
}

#[test]
fn wrong_label_is_rejected() {
    let s = a6_pair();
    assert!(matches!(
        quotient_system(&s, ClassLabel::TwoNsim),
        Err(CartesianError::WrongClass { .. })
    ));
    assert!(matches!(
        quotient_system(&s, ClassLabel::S),
        Err(CartesianError::WrongClass { .. })
    ));
}

#[test]
fn quotient_partition_extremes() {
    let s = a6_pair();
    let inst = s.instance();
    let same = quotient_partition(inst, inst.m_omega()).unwrap();
    assert!(same.is_identity);
    assert_eq!(same.block_count, 36);
    let whole = quotient_partition(inst, &inst.m().full()).unwrap();
    assert!(whole.instance.is_none());
    assert_eq!(whole.partition.len(), 1);
    // N_T(D10) = D10
    let f = catalog::a6();
    let n = f.t.normalizer(&f.intersection).unwrap();
    assert_eq!(n.order().unwrap(), 10);
    let q = quotient_partition(inst, &at(inst.m(), 0, &n)).unwrap();
    assert!(q.is_identity);
    // A5 lies above M_omega but is not normalized by the swapper
    assert!(matches!(
        quotient_partition(inst, &s.members()[0]),
        Err(CartesianError::NotNormalized(_))
    ));
    let c2 = PermGroup::new(10, vec![f.intersection.generators()[0].clone()]).unwrap();
    assert!(matches!(
        quotient_partition(inst, &at(inst.m(), 0, &c2)),
        Err(CartesianError::NotBetween(_))
    ));
}

#[test]
fn basepoint_change_keeps_the_label() {
    for s in [a5_pair(), a6_pair()] {
        let label = classify_observed(&s).unwrap().label;
        let els = s.instance().m().full().elements().unwrap().to_vec();
        for x in els.iter().step_by(37) {
            let r = s.rebased(x).unwrap();
            assert!(verify_system(&r).unwrap().valid);
            assert_eq!(classify_observed(&r).unwrap().label, label);
        }
    }
}

#[test]
fn conjugated_system_is_not_invariant() {
    let s = a6_pair();
    let f = catalog::a6();
    let x = s.instance().m().embed_at(0, &f.t.generators()[0]);
    let moved: Vec<_> = s.members().iter().map(|k| k.conjugate(&x)).collect();
    let t = CartesianSystem::new(s.instance().clone(), moved).unwrap();
    assert!(!is_g_invariant(&t).unwrap());
    assert_eq!(classify(&t).unwrap_err(), CartesianError::NotInvariant);
}

/// Two diagonal links in `A5³` meeting in the full diagonal.
#[test]
fn subdirect_members_give_class_s() {
    let f = catalog::a5();
    let pg = product(&f, 3);
    let diag = |x: &Perm| pg.embed(&[x.clone(), x.clone(), x.clone()]);
    let m_omega = pg.subgroup(f.t.generators().iter().map(diag).collect()).unwrap();
    let link = |i: usize, j: usize| {
        let mut gens = Vec::new();
        for t in f.t.generators() {
            let mut c = vec![Perm::identity(5); 3];
            c[i] = t.clone();
            c[j] = t.clone();
            gens.push(pg.embed(&c));
            let other = 3 - i - j;
            let mut c = vec![Perm::identity(5); 3];
            c[other] = t.clone();
            gens.push(pg.embed(&c));
        }
        pg.subgroup(gens).unwrap()
    };
    let rot = GOmegaAction::new(&pg, Perm::parse("(0 1 2)", 3).unwrap(), vec![Perm::identity(5); 3]).unwrap();
    let inst = PointedInstance::new(pg.clone(), m_omega, vec![rot]).unwrap();
    let s = CartesianSystem::new(inst, vec![link(0, 1), link(1, 2)]).unwrap();
    let r = verify_system(&s).unwrap();
    assert!(r.valid, "{r:?}");
    assert_eq!(r.omega_size, 3600);
    let c = classify_observed(&s).unwrap();
    assert_eq!(c.fi.sizes, vec![0, 0, 0]);
    assert_eq!(c.label, ClassLabel::S);
    assert!(!c.invariant);
}

#[test]
fn labels_round_trip_through_text() {
    for l in [
        ClassLabel::S,
        ClassLabel::One,
        ClassLabel::OneS,
        ClassLabel::TwoSim,
        ClassLabel::TwoNsim,
        ClassLabel::Three,
    ] {
        assert_eq!(l.id().parse::<ClassLabel>().unwrap(), l);
        assert_eq!(l.to_string().parse::<ClassLabel>().unwrap(), l);
    }
    assert_eq!(ClassLabel::TwoSim.to_string(), "2∼");
}
