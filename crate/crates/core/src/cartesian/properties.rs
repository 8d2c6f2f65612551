//! Factorisation, quotient and isomorphism property suites. Each clause has a
//! stable id; the combinatorial suites live with the graph code.

use serde::Serialize;

use super::classify::{at_coordinate, classify_observed, coordinate_reps, ordered_pair, ClassLabel, Classification};
use super::quotient::quotient_system;
use super::table::match_row;
use super::{CartesianError, CartesianSystem};
use crate::perm::{Perm, PermGroup};
use crate::product::{normalizer_in_m, GOmegaGroup, ProductGroup, ProductSubgroup, Strip};
use crate::report::{Clause, PropertyReport};

/// `A_i` and `B_i` at one coordinate, obtained by moving `A_0`, `B_0` along
/// the coordinate representative.
#[derive(Clone, Debug, Serialize)]
pub struct CoordinatePair {
    pub coordinate: usize,
    #[serde(skip)]
    pub a: PermGroup,
    #[serde(skip)]
    pub b: PermGroup,
    pub a_order: usize,
    pub b_order: usize,
    /// Members whose projection here is `A_i`.
    pub a_members: Vec<usize>,
    pub b_members: Vec<usize>,
}

/// Pairs for a system with `|𝓕ᵢ| = 2`; `None` at a coordinate where the
/// transported subgroups are not the two entries of `𝓕ᵢ`.
pub fn coordinate_pairs(
    s: &CartesianSystem,
    cls: &Classification,
) -> Result<Vec<Option<CoordinatePair>>, CartesianError> {
    let pg = s.instance().m();
    if cls.fi.size() != 2 {
        return Err(CartesianError::WrongClass {
            expected: "|F_i| = 2".into(),
            found: cls.label.id().into(),
        });
    }
    let (a0, b0) = ordered_pair(&cls.fi.coordinates[0]);
    let a0e = at_coordinate(pg, 0, &a0.group)?;
    let b0e = at_coordinate(pg, 0, &b0.group)?;
    let reps = coordinate_reps(s.instance().g_omega())?;
    let mut out = Vec::new();
    for (i, g) in reps.iter().enumerate() {
        let a = a0e.conjugate(g).projection(i);
        let b = b0e.conjugate(g).projection(i);
        let mut a_members = None;
        let mut b_members = None;
        for e in &cls.fi.coordinates[i] {
            if e.group.same_group(&a)? {
                a_members = Some(e.witnesses.clone());
            } else if e.group.same_group(&b)? {
                b_members = Some(e.witnesses.clone());
            }
        }
        out.push(match (a_members, b_members) {
            (Some(am), Some(bm)) if cls.fi.coordinates[i].len() == 2 => Some(CoordinatePair {
                coordinate: i,
                a_order: a.order()?,
                b_order: b.order()?,
                a,
                b,
                a_members: am,
                b_members: bm,
            }),
            _ => None,
        });
    }
    Ok(out)
}

/// A strip involved in the system together with the proper projections at
/// the ends of its support.
#[derive(Clone, Debug, Serialize)]
pub struct StripPair {
    #[serde(skip)]
    pub strip: Strip,
    pub support: Vec<usize>,
    /// The member involving the strip.
    pub member: usize,
    #[serde(skip)]
    pub a: Option<PermGroup>,
    #[serde(skip)]
    pub b: Option<PermGroup>,
    /// Members with a proper projection at `min X`, resp. `max X`.
    pub a_members: Vec<usize>,
    pub b_members: Vec<usize>,
}

pub fn strip_pairs(cls: &Classification) -> Vec<StripPair> {
    cls.strips
        .iter()
        .map(|x| {
            let (lo, hi) = (x.strip.min(), x.strip.max());
            let at = |i: usize| {
                cls.fi.coordinates[i]
                    .first()
                    .map(|e| (e.group.clone(), e.witnesses.clone()))
            };
            let (a, a_members) = at(lo).map_or((None, vec![]), |(g, w)| (Some(g), w));
            let (b, b_members) = at(hi).map_or((None, vec![]), |(g, w)| (Some(g), w));
            StripPair {
                strip: x.strip.clone(),
                support: x.support.clone(),
                member: x.member,
                a,
                b,
                a_members,
                b_members,
            }
        })
        .collect()
}

/// Closure elements of `G_ω` fixing coordinate `i`.
fn normalizes_factor(g: &GOmegaGroup, x: &Perm, i: usize) -> bool {
    g.coordinate_perm(x).apply(i as u32) as usize == i
}

fn element_set_eq(a: &[Perm], b: &[Perm]) -> bool {
    a == b
}

fn product_is(a: &PermGroup, b: &PermGroup, target: u128) -> Result<bool, CartesianError> {
    let inter = a.intersection(b)?.order()? as u128;
    Ok(a.order()? as u128 * b.order()? as u128 / inter == target)
}

fn sub_product_order(a: &ProductSubgroup, b: &ProductSubgroup) -> Result<u128, CartesianError> {
    let inter = a.intersection(b)?.order()? as u128;
    Ok(a.order()? as u128 * b.order()? as u128 / inter)
}

fn order_or_zero(g: &Option<PermGroup>) -> usize {
    g.as_ref().and_then(|g| g.order().ok()).unwrap_or(0)
}

/// Factorisation suite for the given class.
pub fn verify_factorisation_property(
    s: &CartesianSystem,
    label: ClassLabel,
) -> Result<PropertyReport, CartesianError> {
    let cls = classify_observed(s)?;
    if cls.label != label {
        return Err(CartesianError::WrongClass {
            expected: label.id().into(),
            found: cls.label.id().into(),
        });
    }
    match label {
        ClassLabel::TwoSim | ClassLabel::TwoNsim => pair_factorisation(s, &cls, label),
        ClassLabel::OneS => strip_factorisation(s, &cls),
        other => Err(CartesianError::WrongClass {
            expected: "2sim, 2nsim or 1S".into(),
            found: other.id().into(),
        }),
    }
}

fn pair_factorisation(
    s: &CartesianSystem,
    cls: &Classification,
    label: ClassLabel,
) -> Result<PropertyReport, CartesianError> {
    let inst = s.instance();
    let pg = inst.m();
    let g = inst.g_omega();
    let tr = cls.transitive;
    let t_order = pg.t_order()? as u128;
    let sim = label == ClassLabel::TwoSim;
    let prefix = if sim { "2sim" } else { "2nsim" };
    let id = |suffix: &str| format!("{prefix}.fact.{suffix}");
    let mut rep = PropertyReport::new(&format!("{prefix}.factorisation"));
    let pairs = coordinate_pairs(s, cls)?;
    let m_bar = if sim {
        None
    } else {
        let bars: Vec<ProductSubgroup> = s
            .members()
            .iter()
            .map(|k| pg.direct_product(&(0..pg.k()).map(|i| k.projection(i)).collect::<Vec<_>>()))
            .collect();
        let mut acc = bars[0].clone();
        for b in &bars[1..] {
            acc = acc.intersection(b)?;
        }
        Some(acc)
    };
    for (i, p) in pairs.iter().enumerate() {
        let Some(p) = p else {
            rep.push(Clause::when_transitive(
                &id("transport"),
                Some(i),
                tr,
                false,
                "the images of A_0 and B_0 are not the two entries of F_i",
            ));
            continue;
        };
        let ae = at_coordinate(pg, i, &p.a)?;
        let be = at_coordinate(pg, i, &p.b)?;
        let proper = (p.a_order as u128) < t_order && (p.b_order as u128) < t_order;
        let conj = g.are_conjugate_under_gomega(&ae, &be)?;
        if sim {
            rep.push(Clause::when_transitive(
                &id("i"),
                Some(i),
                tr,
                proper && p.a_order == p.b_order && conj.is_some(),
                format!("|A| = {}, |B| = {}, |T| = {t_order}", p.a_order, p.b_order),
            ));
            rep.push(Clause::when_transitive(
                &id("ii"),
                Some(i),
                tr,
                conj.is_some(),
                match &conj {
                    Some(w) => format!("A^g = B for g = {w}"),
                    None => "A and B are not G_omega-conjugate".into(),
                },
            ));
        } else {
            rep.push(Clause::when_transitive(
                &id("i"),
                Some(i),
                tr,
                proper,
                format!("|A| = {}, |B| = {}, |T| = {t_order}", p.a_order, p.b_order),
            ));
            rep.push(Clause::when_transitive(
                &id("ii"),
                Some(i),
                tr,
                conj.is_none(),
                match &conj {
                    Some(w) => format!("A^g = B for g = {w}"),
                    None => "A and B are not G_omega-conjugate".into(),
                },
            ));
        }
        rep.push(Clause::when_transitive(
            &id("iii.product"),
            Some(i),
            tr,
            product_is(&p.a, &p.b, t_order)?,
            "AB = T",
        ));
        let ab = p.a.intersection(&p.b)?;
        let (target, what) = if sim {
            (
                pg.t().normalizer(&inst.m_omega().projection(i))?,
                "N_T(sigma_i(M_omega))",
            )
        } else {
            (
                m_bar.as_ref().expect("computed above").projection(i),
                "sigma_i(M_bar_omega)",
            )
        };
        rep.push(Clause::when_transitive(
            &id("iii.intersection"),
            Some(i),
            tr,
            ab.same_group(&target)?,
            format!("|A ∩ B| = {}, |{what}| = {}", ab.order()?, target.order()?),
        ));
        let els = g.elements()?;
        let n_t: Vec<Perm> = els.iter().filter(|x| normalizes_factor(g, x, i)).cloned().collect();
        if sim {
            let mut keep = Vec::new();
            for x in els {
                let ax = ae.conjugate(x);
                let bx = be.conjugate(x);
                let a_in = ax.same(&ae)? || ax.same(&be)?;
                let b_in = bx.same(&ae)? || bx.same(&be)?;
                if a_in && b_in {
                    keep.push(x.clone());
                }
            }
            rep.push(Clause::when_transitive(
                &id("iv"),
                Some(i),
                tr,
                element_set_eq(&n_t, &keep),
                format!("|N(T_i)| = {}, |stabilizer of {{A, B}}| = {}", n_t.len(), keep.len()),
            ));
        } else {
            let n_a = g.normalizer_elements(&ae)?;
            let n_b = g.normalizer_elements(&be)?;
            rep.push(Clause::when_transitive(
                &id("iv"),
                Some(i),
                tr,
                element_set_eq(&n_t, &n_a) && element_set_eq(&n_t, &n_b),
                format!(
                    "|N(T_i)| = {}, |N(A_i)| = {}, |N(B_i)| = {}",
                    n_t.len(),
                    n_a.len(),
                    n_b.len()
                ),
            ));
        }
    }
    Ok(rep)
}

fn strip_factorisation(s: &CartesianSystem, cls: &Classification) -> Result<PropertyReport, CartesianError> {
    let inst = s.instance();
    let pg = inst.m();
    let g = inst.g_omega();
    let tr = cls.transitive;
    let t_order = pg.t_order()? as u128;
    let mut rep = PropertyReport::new("1s.factorisation");
    let n_m = normalizer_in_m(inst.m_omega())?;
    for sp in strip_pairs(cls) {
        let x = &sp.strip;
        let (lo, hi) = (x.min(), x.max());
        let c = Some(lo);
        let full = x.is_full()?;
        rep.push(Clause::when_transitive(
            "1s.fact.i",
            c,
            tr,
            full && x.support().len() == 2,
            format!("support {:?}, full = {full}", x.support()),
        ));
        let a_ok = sp.a.is_some() && sp.a_members.len() == 1;
        let b_ok = sp.b.is_some() && sp.b_members.len() == 1;
        rep.push(Clause::when_transitive(
            "1s.fact.ii",
            c,
            tr,
            a_ok && b_ok,
            format!(
                "|A| = {} from members {:?}, |B| = {} from members {:?}",
                order_or_zero(&sp.a),
                sp.a_members,
                order_or_zero(&sp.b),
                sp.b_members
            ),
        ));
        let (Some(a), Some(b)) = (&sp.a, &sp.b) else {
            continue;
        };
        let ae = at_coordinate(pg, lo, a)?;
        let be = at_coordinate(pg, hi, b)?;
        let conj = g.are_conjugate_under_gomega(&ae, &be)?;
        rep.push(Clause::when_transitive(
            "1s.fact.iii",
            c,
            tr,
            conj.is_some(),
            match &conj {
                Some(w) => format!("A^g = B for g = {w}"),
                None => "A and B are not G_omega-conjugate".into(),
            },
        ));
        let axb = ae.join(&be);
        let target = t_order * t_order;
        let prod = sub_product_order(x.subgroup(), &axb)?;
        rep.push(Clause::when_transitive(
            "1s.fact.iv.product",
            c,
            tr,
            prod == target,
            format!("|X(A × B)| = {prod}, |T|^2 = {target}"),
        ));
        let inter = x.subgroup().intersection(&axb)?;
        let proj = n_m.project_in_place(x.support());
        rep.push(Clause::when_transitive(
            "1s.fact.iv.intersection",
            c,
            tr,
            inter.same(&proj)?,
            format!(
                "|X ∩ (A × B)| = {}, |sigma_Supp X(N_M(M_omega))| = {}",
                inter.order()?,
                proj.order()?
            ),
        ));
        let els = g.elements()?;
        let n_tt: Vec<Perm> = els
            .iter()
            .filter(|y| {
                let cp = g.coordinate_perm(y);
                let mut img = [cp.apply(lo as u32) as usize, cp.apply(hi as u32) as usize];
                img.sort_unstable();
                img == [lo, hi]
            })
            .cloned()
            .collect();
        let n_x = g.normalizer_elements(x.subgroup())?;
        let n_ab = g.normalizer_elements(&axb)?;
        rep.push(Clause::when_transitive(
            "1s.fact.v",
            c,
            tr,
            element_set_eq(&n_tt, &n_x) && element_set_eq(&n_tt, &n_ab),
            format!(
                "|N(T_min × T_max)| = {}, |N(X)| = {}, |N(A × B)| = {}",
                n_tt.len(),
                n_x.len(),
                n_ab.len()
            ),
        ));
    }
    Ok(rep)
}

/// Quotient action suite: faithfulness, the quotient system, invariance and
/// class preservation.
pub fn verify_quotient_property(s: &CartesianSystem, label: ClassLabel) -> Result<PropertyReport, CartesianError> {
    let prefix = "quot";
    let mut rep = PropertyReport::new(&format!("{}.quotient", label.id()));
    let q = match quotient_system(s, label) {
        Ok(q) => q,
        Err(e @ CartesianError::WrongClass { .. }) => return Err(e),
        Err(e) => {
            rep.push(Clause::new(&format!("{prefix}.faithful"), None, false, e.to_string()));
            return Ok(rep);
        }
    };
    rep.push(Clause::new(
        &format!("{prefix}.faithful"),
        None,
        true,
        format!("no factor of M lies in M_bar_omega (order {})", q.m_bar_omega.order()?),
    ));
    rep.push(Clause::new(
        &format!("{prefix}.system"),
        None,
        q.report.valid,
        format!("{} members on {} points", q.system.len(), q.instance.omega_size()?),
    ));
    rep.push(Clause::new(
        &format!("{prefix}.invariant"),
        None,
        q.invariant,
        "the quotient system is invariant under the quotient point stabilizer",
    ));
    rep.push(Clause::new(
        &format!("{prefix}.class"),
        None,
        q.class_matches(),
        format!("quotient class {}", q.classification.label),
    ));
    let eq = if q.equals_original {
        Clause::new(&format!("{prefix}.equals_original"), None, true, "quotient system equals the original")
    } else {
        Clause::not_applicable(
            &format!("{prefix}.equals_original"),
            None,
            "informational: the quotient differs from the original",
        )
    };
    rep.push(eq);
    Ok(rep)
}

/// Isomorphism suite for `2∼` and `1S`. Unknown or parametric table rows
/// are `UnsupportedRow`.
pub fn verify_isomorphism_property(
    s: &CartesianSystem,
    label: ClassLabel,
) -> Result<PropertyReport, CartesianError> {
    if !matches!(label, ClassLabel::TwoSim | ClassLabel::OneS) {
        return Err(CartesianError::WrongClass {
            expected: "2sim or 1S".into(),
            found: label.id().into(),
        });
    }
    let q = quotient_system(s, label)?;
    let pg: &ProductGroup = s.instance().m();
    let cls = classify_observed(s)?;
    let m_bar = &q.m_bar_omega;
    let (a_order, i_order) = if label == ClassLabel::TwoSim {
        let (a, _) = ordered_pair(&cls.fi.coordinates[0]);
        (a.order, m_bar.projection(0).order()?)
    } else {
        let sp = strip_pairs(&cls);
        let first = sp.first().ok_or_else(|| CartesianError::StructureViolation("no strips".into()))?;
        (
            order_or_zero(&first.a),
            m_bar.project_in_place(first.strip.support()).order()?,
        )
    };
    let row = match_row(pg.t_order()? as u128, a_order as u128, i_order as u128)?;
    let mut rep = PropertyReport::new(&format!("{}.isomorphism", label.id()));
    let n = normalizer_in_m(m_bar)?;
    rep.push(Clause::new(
        "iso.self_normalizing",
        None,
        n.same(m_bar)?,
        format!("|N_M(M_bar_omega)| = {}, |M_bar_omega| = {}", n.order()?, m_bar.order()?),
    ));
    let faithful = (0..pg.k()).all(|i| {
        !pg.t()
            .generators()
            .iter()
            .all(|t| m_bar.contains(&pg.embed_at(i, t)).unwrap_or(false))
    });
    rep.push(Clause::new("iso.faithful", None, faithful, "no factor of M lies in M_bar_omega"));
    rep.push(Clause::new(
        "iso.row",
        None,
        true,
        format!(
            "row {}: {} | {} | {} matched by ({}, {}, {})",
            row.row.row,
            row.row.t,
            row.row.a,
            row.row.intersection,
            pg.t_order()?,
            a_order,
            i_order
        ),
    ));
    rep.push(Clause::new(
        "iso.m_bar_equals_m_omega",
        None,
        q.m_bar_equals_m_omega,
        format!("|M_bar_omega| = {}, |M_omega| = {}", m_bar.order()?, s.instance().m_omega().order()?),
    ));
    Ok(rep)
}
