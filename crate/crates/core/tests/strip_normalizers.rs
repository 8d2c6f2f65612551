use cartdec::catalog::{self, Factorisation};
use cartdec::demos;
use cartdec::perm::{Perm, PermGroup};
use cartdec::product::{brute_normalizer_of_strip, normalizer_of_strip, ProductGroup, Strip};

fn cyc(f: &Factorisation, s: &str) -> PermGroup {
    let d = f.t.degree();
    PermGroup::new(d, vec![Perm::parse(s, d).unwrap()]).unwrap()
}

/// Strips of `T^k` given by support, first projection and the twist on
/// each support coordinate.
fn strips(pg: &ProductGroup, cases: &[(&[usize], PermGroup, Vec<Perm>)]) -> Vec<Strip> {
    cases
        .iter()
        .map(|(sup, h, maps)| Strip::diagonal(pg, sup, h, maps).unwrap())
        .collect()
}

fn check_all(strips: &[Strip]) -> usize {
    for (n, x) in strips.iter().enumerate() {
        let formula = normalizer_of_strip(x).unwrap();
        let brute = brute_normalizer_of_strip(x).unwrap();
        assert_eq!(formula.elements().unwrap(), brute.as_slice(), "strip {n} on {:?}", x.support());
    }
    strips.len()
}

#[test]
fn a5_squared() {
    let f = catalog::a5();
    let pg = demos::product(&f, 2).unwrap();
    let id = Perm::identity(5);
    let outer = f.automorphisms[0].clone();
    let inner = Perm::parse("(0 1 2)", 5).unwrap();
    let s = [0usize, 1];
    let cases: Vec<(&[usize], PermGroup, Vec<Perm>)> = vec![
        (&s, f.t.clone(), vec![id.clone(), id.clone()]),
        (&s, f.t.clone(), vec![id.clone(), outer.clone()]),
        (&s, f.a.clone(), vec![id.clone(), id.clone()]),
        (&s, f.a.clone(), vec![id.clone(), outer.clone()]),
        (&s, f.b.clone(), vec![id.clone(), inner.clone()]),
        (&s, f.intersection.clone(), vec![id.clone(), id.clone()]),
        (&s, cyc(&f, "(0 1 2 3 4)"), vec![id.clone(), outer.clone()]),
        (&s, cyc(&f, "(0 1 2)"), vec![inner.clone(), id.clone()]),
        (&s, f.a.intersection(&cyc(&f, "(0 1) (2 3)").join(&cyc(&f, "(0 2) (1 3)"))).unwrap(), vec![id.clone(), id]),
    ];
    assert_eq!(check_all(&strips(&pg, &cases)), 9);
}

#[test]
fn a5_cubed() {
    let f = catalog::a5();
    let pg = demos::product(&f, 3).unwrap();
    let id = Perm::identity(5);
    let outer = f.automorphisms[0].clone();
    let cases: Vec<(&[usize], PermGroup, Vec<Perm>)> = vec![
        (&[0, 1, 2], f.t.clone(), vec![id.clone(), id.clone(), outer.clone()]),
        (&[0, 2], f.a.clone(), vec![id.clone(), id.clone()]),
        (&[1, 2], f.b.clone(), vec![id.clone(), outer.clone()]),
        (&[0, 1], cyc(&f, "(0 1 2)"), vec![id.clone(), id.clone()]),
        (&[0, 1, 2], f.intersection.clone(), vec![id.clone(), outer, id]),
    ];
    assert_eq!(check_all(&strips(&pg, &cases)), 5);
}

#[test]
fn a6_squared() {
    let f = catalog::a6();
    let pg = demos::product(&f, 2).unwrap();
    let id = Perm::identity(10);
    let swap = f.swapper.clone().unwrap();
    let other = f.automorphisms[1].clone();
    let s = [0usize, 1];
    let cases: Vec<(&[usize], PermGroup, Vec<Perm>)> = vec![
        (&s, f.t.clone(), vec![id.clone(), id.clone()]),
        (&s, f.t.clone(), vec![id.clone(), swap.clone()]),
        (&s, f.a.clone(), vec![id.clone(), id.clone()]),
        (&s, f.a.clone(), vec![id.clone(), swap.clone()]),
        (&s, f.b.clone(), vec![id.clone(), other.clone()]),
        (&s, f.intersection.clone(), vec![id.clone(), id.clone()]),
        (&s, f.intersection.clone(), vec![id.clone(), swap]),
        (&s, cyc(&f, "(0 1 2) (3 4 5) (6 7 8)"), vec![id.clone(), other]),
        (&s, cyc(&f, "(1 6 2 3) (4 7 8 5)"), vec![id.clone(), id]),
    ];
    assert_eq!(check_all(&strips(&pg, &cases)), 9);
}
