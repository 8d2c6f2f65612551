//! Bundled Cartesian systems built directly from the catalog data.

use crate::cartesian::classify::at_coordinate;
use crate::cartesian::{CartesianError, CartesianSystem, PointedInstance};
use crate::catalog::{self, Factorisation};
use crate::perm::{Perm, PermGroup};
use crate::product::{GOmegaAction, ProductGroup, ProductOptions, ProductSubgroup, Strip};

pub const DEMO_NAMES: [&str; 9] = [
    "a5-2nsim",
    "a5a5-2nsim",
    "a6-2sim",
    "a6a6-2sim",
    "a6a6-1s",
    "a6a6-1s-valency2",
    "m12-2sim",
    "m12-2sim-outer",
    "a5a5a5-s",
];

pub fn demo(name: &str) -> Option<Result<CartesianSystem, CartesianError>> {
    Some(match name {
        "a5-2nsim" => a5_2nsim(),
        "a5a5-2nsim" => a5a5_2nsim(),
        "a6-2sim" => a6_2sim(),
        "a6a6-2sim" => a6a6_2sim(),
        "a6a6-1s" => a6a6_1s(),
        "a6a6-1s-valency2" => a6a6_1s_valency2(),
        "m12-2sim" => m12_2sim(),
        "m12-2sim-outer" => m12_2sim_outer(),
        "a5a5a5-s" => a5a5a5_s(),
        _ => return None,
    })
}

/// Demos whose action makes the system `G_ω`-transitive.
pub fn is_transitive_demo(name: &str) -> bool {
    matches!(name, "a5a5-2nsim" | "a6-2sim" | "a6a6-2sim" | "m12-2sim-outer")
}

pub fn product(f: &Factorisation, k: usize) -> Result<ProductGroup, CartesianError> {
    Ok(ProductGroup::with_options(
        f.t.clone(),
        k,
        ProductOptions {
            assume_simple: f.assume_simple,
            automorphisms: f.automorphisms.clone(),
            ..Default::default()
        },
    )?)
}

fn at(pg: &ProductGroup, i: usize, h: &PermGroup) -> Result<ProductSubgroup, CartesianError> {
    at_coordinate(pg, i, h)
}

fn swap_action(pg: &ProductGroup, twist: &Perm) -> Result<GOmegaAction, CartesianError> {
    Ok(GOmegaAction::new(
        pg,
        Perm::parse("(0 1)", 2).expect("valid"),
        vec![twist.clone(), twist.clone()],
    )?)
}

fn pair(f: Factorisation, actions: impl Fn(&ProductGroup) -> Vec<GOmegaAction>) -> Result<CartesianSystem, CartesianError> {
    let pg = product(&f, 1)?;
    let acts = actions(&pg);
    let inst = PointedInstance::new(pg.clone(), at(&pg, 0, &f.intersection)?, acts)?;
    CartesianSystem::new(inst, vec![at(&pg, 0, &f.a)?, at(&pg, 0, &f.b)?])
}

/// `A5 = A4·D10` with `G_ω = M_ω` of order 2.
pub fn a5_2nsim() -> Result<CartesianSystem, CartesianError> {
    pair(catalog::a5(), |_| Vec::new())
}

/// `A5²` with `M_ω = C2²`, the coordinate swap, and members `A4×D10`,
/// `D10×A4`.
pub fn a5a5_2nsim() -> Result<CartesianSystem, CartesianError> {
    let f = catalog::a5();
    let pg = product(&f, 2)?;
    let id = Perm::identity(pg.d());
    let inst = PointedInstance::new(
        pg.clone(),
        pg.direct_product(&[f.intersection.clone(), f.intersection.clone()]),
        vec![swap_action(&pg, &id)?],
    )?;
    CartesianSystem::new(
        inst,
        vec![
            pg.direct_product(&[f.a.clone(), f.b.clone()]),
            pg.direct_product(&[f.b.clone(), f.a.clone()]),
        ],
    )
}

/// `A6` on 10 points with the class-fusing twist.
pub fn a6_2sim() -> Result<CartesianSystem, CartesianError> {
    pair(catalog::a6(), |pg| {
        let f = catalog::a6();
        vec![GOmegaAction::new(pg, Perm::identity(1), vec![f.swapper.expect("A6 has a swapper")]).expect("normalizes")]
    })
}

/// `A6²` with `M_ω = D10²`, a twist in the first coordinate and the swap;
/// members `A×T`, `B×T`, `T×A`, `T×B`.
pub fn a6a6_2sim() -> Result<CartesianSystem, CartesianError> {
    let f = catalog::a6();
    let pg = product(&f, 2)?;
    let t = f.swapper.clone().expect("A6 has a swapper");
    let id = Perm::identity(pg.d());
    let twist = GOmegaAction::new(&pg, Perm::identity(2), vec![t, id.clone()])?;
    let inst = PointedInstance::new(
        pg.clone(),
        pg.direct_product(&[f.intersection.clone(), f.intersection.clone()]),
        vec![twist, swap_action(&pg, &id)?],
    )?;
    let full = f.t.clone();
    CartesianSystem::new(
        inst,
        vec![
            pg.direct_product(&[f.a.clone(), full.clone()]),
            pg.direct_product(&[f.b.clone(), full.clone()]),
            pg.direct_product(&[full.clone(), f.a.clone()]),
            pg.direct_product(&[full, f.b.clone()]),
        ],
    )
}

fn a6a6_strip_instance() -> Result<(Factorisation, ProductGroup, PointedInstance, ProductSubgroup), CartesianError> {
    let f = catalog::a6();
    let pg = product(&f, 2)?;
    let id = Perm::identity(pg.d());
    let t = f.swapper.clone().expect("A6 has a swapper");
    let m_omega = Strip::diagonal(&pg, &[0, 1], &f.intersection, &[id.clone(), id.clone()])?;
    let inst = PointedInstance::new(pg.clone(), m_omega.subgroup().clone(), vec![swap_action(&pg, &t)?])?;
    let diag = Strip::diagonal(&pg, &[0, 1], &f.t, &[id.clone(), id])?;
    Ok((f, pg, inst, diag.subgroup().clone()))
}

/// `A6²` with `M_ω = Diag(D10)` and members `Diag(A6)`, `A×B`.
pub fn a6a6_1s() -> Result<CartesianSystem, CartesianError> {
    let (f, pg, inst, diag) = a6a6_strip_instance()?;
    CartesianSystem::new(inst, vec![diag, pg.direct_product(&[f.a.clone(), f.b.clone()])])
}

/// Same instance with members `A×T`, `Diag(A6)`, `T×B`: the strip has
/// two `E₁` edges.
pub fn a6a6_1s_valency2() -> Result<CartesianSystem, CartesianError> {
    let (f, pg, inst, diag) = a6a6_strip_instance()?;
    CartesianSystem::new(
        inst,
        vec![
            pg.direct_product(&[f.a.clone(), f.t.clone()]),
            diag,
            pg.direct_product(&[f.t.clone(), f.b.clone()]),
        ],
    )
}

/// `M12` on 12 points with `G_ω = M_ω`; the two `M11` classes are not fused.
pub fn m12_2sim() -> Result<CartesianSystem, CartesianError> {
    pair(catalog::m12(), |_| Vec::new())
}

/// `M12` on 24 points with an outer automorphism fusing the classes.
/// Experimental.
pub fn m12_2sim_outer() -> Result<CartesianSystem, CartesianError> {
    pair(catalog::m12_outer(), |pg| {
        let f = catalog::m12_outer();
        vec![GOmegaAction::new(pg, Perm::identity(1), vec![f.swapper.expect("has a swapper")]).expect("normalizes")]
    })
}

/// `A5³` with `M_ω` the full diagonal and members the two links
/// `{(x, x, y)}`, `{(y, x, x)}`. Not invariant under the rotation.
pub fn a5a5a5_s() -> Result<CartesianSystem, CartesianError> {
    let f = catalog::a5();
    let pg = product(&f, 3)?;
    let id = Perm::identity(pg.d());
    let diag = Strip::diagonal(&pg, &[0, 1, 2], &f.t, &[id.clone(), id.clone(), id.clone()])?;
    let link = |i: usize, j: usize| -> Result<ProductSubgroup, CartesianError> {
        let s = Strip::diagonal(&pg, &[i, j], &f.t, &[id.clone(), id.clone()])?;
        Ok(s.subgroup().join(&pg.factor(3 - i - j)))
    };
    let rot = GOmegaAction::new(&pg, Perm::parse("(0 1 2)", 3).expect("valid"), vec![id.clone(); 3])?;
    let inst = PointedInstance::new(pg.clone(), diag.subgroup().clone(), vec![rot])?;
    CartesianSystem::new(inst, vec![link(0, 1)?, link(1, 2)?])
}
