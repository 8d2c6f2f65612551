//! Generator data for the small simple groups and factorisations used by the
//! demos and tests.

use crate::perm::{Perm, PermGroup, DEFAULT_ELEMENT_CAP};

/// A simple group `T = AB` with the data needed to build pointed instances.
#[derive(Clone, Debug)]
pub struct Factorisation {
    pub name: &'static str,
    pub t: PermGroup,
    /// Extra automorphisms of `T` as normalizing permutations.
    pub automorphisms: Vec<Perm>,
    pub a: PermGroup,
    pub b: PermGroup,
    /// `A ∩ B`, given by generators.
    pub intersection: PermGroup,
    /// An automorphism of `T` exchanging `A` and `B` and normalizing
    /// `A ∩ B`, when one exists.
    pub swapper: Option<Perm>,
    /// Skip the simplicity test when building a product over `T`.
    pub assume_simple: bool,
}

fn p(s: &str, n: usize) -> Perm {
    Perm::parse(s, n).expect("bundled cycle strings are valid")
}

fn stabilizer(t: &PermGroup, point: u32) -> PermGroup {
    t.point_stabilizer(point).expect("within the element cap")
}

fn grp(n: usize, gens: &[&str]) -> PermGroup {
    PermGroup::with_cap(n, gens.iter().map(|g| p(g, n)).collect(), DEFAULT_ELEMENT_CAP)
        .expect("bundled generators are valid")
}

/// `A5` on 5 points with `A4 = stab(4)` and `D10`; `A4 ∩ D10 = ⟨(0 3)(1 2)⟩`.
pub fn a5() -> Factorisation {
    Factorisation {
        name: "A5",
        t: grp(5, &["(0 1 2 3 4)", "(0 1 2)"]),
        automorphisms: vec![p("(0 1)", 5)],
        a: grp(5, &["(0 1 2)", "(0 1) (2 3)"]),
        b: grp(5, &["(0 1 2 3 4)", "(1 4) (2 3)"]),
        intersection: grp(5, &["(0 3) (1 2)"]),
        swapper: None,
        assume_simple: false,
    }
}

/// `A6` acting on the 10 points of the projective line over `GF(9)`. `A`
/// and `B` are representatives of the two classes of `A5`, fused by the
/// swapper.
pub fn a6() -> Factorisation {
    Factorisation {
        name: "A6",
        t: grp(10, &["(0 1 2) (3 4 5) (6 7 8)", "(1 6 2 3) (4 7 8 5)", "(0 9) (1 2) (4 7) (5 8)"]),
        automorphisms: vec![p("(1 4 6 7 2 8 3 5)", 10), p("(3 6) (4 7) (5 8)", 10)],
        a: grp(10, &["(2 9) (3 4) (5 8) (6 7)", "(1 3) (2 7) (5 6) (8 9)", "(0 1) (3 7) (4 6) (5 8)"]),
        b: grp(10, &["(2 9) (3 4) (5 8) (6 7)", "(1 2) (3 6) (4 8) (5 7)", "(0 1) (2 5) (3 4) (8 9)"]),
        intersection: grp(10, &["(2 9) (3 4) (5 8) (6 7)", "(0 2) (1 7) (4 9) (6 8)"]),
        swapper: Some(p("(0 1) (2 6) (3 8) (4 5) (7 9)", 10)),
        assume_simple: false,
    }
}

const M12_GENS: [&str; 3] = [
    "(0 1 2 3 4 5 6 7 8 9 10)",
    "(2 6 10 7) (3 9 4 5)",
    "(0 11) (1 10) (2 5) (3 7) (4 8) (6 9)",
];

/// `M12` on 12 points: `A` the stabilizer of 11, `B` a transitive `M11`,
/// `A ∩ B ≅ PSL(2,11)`. No automorphism exchanging the classes acts on
/// 12 points.
pub fn m12() -> Factorisation {
    let t = grp(12, &M12_GENS);
    let a = stabilizer(&t, 11);
    Factorisation {
        name: "M12",
        t,
        automorphisms: Vec::new(),
        a,
        b: grp(
            12,
            &[
                "(2 6) (3 7) (4 10) (8 9)",
                "(0 2 7) (1 9 5) (4 6 8)",
                "(0 7) (1 3 9) (2 10 8 5 4 11)",
            ],
        ),
        intersection: grp(12, &["(2 6) (3 7) (4 10) (8 9)", "(0 2 7) (1 9 5) (4 6 8)"]),
        swapper: None,
        assume_simple: true,
    }
}

/// `M12` on 24 points, the union of its two classes of 12 cosets of `M11`.
/// `A` and `B` are the stabilizers of points 11 and 12, and the swapper is
/// an outer automorphism exchanging them.
pub fn m12_outer() -> Factorisation {
    let t = grp(
        24,
        &[
            "(0 1 2 3 4 5 6 7 8 9 10) (12 13 16 21 17 14 18 22 19 15 20)",
            "(2 6 10 7) (3 9 4 5) (12 14 19 13) (15 16) (17 18 21 22) (20 23)",
            "(0 11) (1 10) (2 5) (3 7) (4 8) (6 9) (12 15) (13 17) (14 19) (16 18) (20 23) (21 22)",
        ],
    );
    let a = stabilizer(&t, 11);
    let l = [
        "(2 6) (3 7) (4 10) (8 9) (14 15) (16 19) (17 21) (18 20)",
        "(0 2 7) (1 9 5) (4 6 8) (13 20 16) (15 17 19) (21 22 23)",
    ];
    Factorisation {
        name: "M12",
        t,
        automorphisms: Vec::new(),
        a,
        b: grp(24, &[l[0], l[1], "(0 7) (1 3 9) (2 10 8 5 4 11) (13 23 14) (15 19 16 22 20 21) (17 18)"]),
        intersection: grp(24, &l),
        swapper: Some(p(
            "(0 13 7 18 4 19 6 23 5 15 1 14) (2 22 3 21) (8 17 9 20 10 16) (11 12)",
            24,
        )),
        assume_simple: true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(f: &Factorisation, orders: (usize, usize, usize)) {
        let (t, a, i) = orders;
        assert_eq!(f.t.order().unwrap(), t);
        assert_eq!(f.a.order().unwrap(), a);
        assert!(f.a.is_subgroup_of(&f.t).unwrap());
        assert!(f.b.is_subgroup_of(&f.t).unwrap());
        let ab = f.a.intersection(&f.b).unwrap();
        assert!(ab.same_group(&f.intersection).unwrap());
        assert_eq!(ab.order().unwrap(), i);
        assert_eq!(f.a.product_size(&f.b).unwrap(), t);
        for x in &f.automorphisms {
            assert!(f.t.is_normalized_by(x).unwrap());
        }
        if let Some(s) = &f.swapper {
            assert!(f.t.is_normalized_by(s).unwrap());
            assert!(f.a.conjugate(s).same_group(&f.b).unwrap());
            assert!(f.b.conjugate(s).same_group(&f.a).unwrap());
            assert!(f.intersection.is_normalized_by(s).unwrap());
        }
    }

    #[test]
    fn a5_data() {
        check(&a5(), (60, 12, 2));
    }

    #[test]
    fn a6_data() {
        let f = a6();
        check(&f, (360, 60, 10));
        assert_eq!(f.b.order().unwrap(), 60);
        let s = f.swapper.unwrap();
        assert!(!f.t.contains(&s).unwrap());
        assert!(s.compose(&s).is_identity());
    }

    #[test]
    fn m12_data() {
        let f = m12();
        check(&f, (95040, 7920, 660));
        assert!(f.b.is_transitive());
    }

    #[test]
    fn m12_outer_data() {
        let f = m12_outer();
        check(&f, (95040, 7920, 660));
        let s = f.swapper.unwrap();
        assert!(!f.t.contains(&s).unwrap());
        assert!(f.t.contains(&s.compose(&s)).unwrap());
        assert!(f.intersection.contains(&s.compose(&s)).unwrap());
    }
}
