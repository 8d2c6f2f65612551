//! Cartesian systems manufactured from a factorisation of `T` and a graph
//! carrying a `G_ω`-action. Every hypothesis is a named clause; outputs are
//! re-verified before they are returned.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::cartesian::classify::{at_coordinate, classify_observed, ClassLabel};
use crate::cartesian::{is_g_invariant, is_transitive, verify_system, CartesianError, CartesianSystem, PointedInstance};
use crate::ggraph::{
    bipartite_isomorphic, digraphs_isomorphic, extract_1s, extract_2nsim, extract_2sim, graphs_isomorphic,
    BipartiteLabeledGraph, GeneralizedDiGraph, GeneralizedGraph, GraphError,
};
use crate::perm::{Perm, PermGroup};
use crate::product::{strip_components, ProductError, ProductGroup, ProductSubgroup, Strip};
use crate::report::{Clause, PropertyReport};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error(transparent)]
    Cartesian(#[from] CartesianError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("hypothesis {clause} fails: {detail}")]
    SpecViolation { clause: String, detail: String },
    #[error("construction depends on the choice of representative: {0}")]
    WellDefinednessFailure(String),
    #[error("constructed system fails {clause}: {detail}")]
    PostconditionFailed { clause: String, detail: String },
}

impl From<ProductError> for ConstructionError {
    fn from(e: ProductError) -> Self {
        ConstructionError::Cartesian(e.into())
    }
}

impl From<crate::perm::GroupError> for ConstructionError {
    fn from(e: crate::perm::GroupError) -> Self {
        ConstructionError::Cartesian(e.into())
    }
}

type Result<T> = std::result::Result<T, ConstructionError>;

/// `A1`, `B1` are subgroups of `T` placed at coordinate 0; edge `i` of the
/// graph is coordinate `i`, and `a_vertex` is the endpoint of edge 0 whose
/// member gets `A1` there.
#[derive(Clone, Debug)]
pub struct TwoSimSpec {
    pub instance: PointedInstance,
    pub a1: PermGroup,
    pub b1: PermGroup,
    pub graph: GeneralizedGraph,
    pub a_vertex: usize,
    /// Vertex permutation for each supplied action; `M_ω` fixes every vertex.
    pub vertex_action: Vec<Vec<usize>>,
    /// Accept a vertex action with several orbits.
    pub allow_intransitive: bool,
}

/// Arc `i` is coordinate `i`; its tail gets `A1` and its head `B1`.
#[derive(Clone, Debug)]
pub struct TwoNsimSpec {
    pub instance: PointedInstance,
    pub a1: PermGroup,
    pub b1: PermGroup,
    pub graph: GeneralizedDiGraph,
    pub vertex_action: Vec<Vec<usize>>,
    pub allow_intransitive: bool,
}

/// `V₂` vertex `j` of the graph is the `j`-th strip of `M_ω` ordered by
/// least support point. `A1` sits at `min Supp X1` and `B1` at
/// `max Supp X1`.
#[derive(Clone, Debug)]
pub struct OneSSpec {
    pub instance: PointedInstance,
    pub x1: ProductSubgroup,
    pub a1: PermGroup,
    pub b1: PermGroup,
    pub graph: BipartiteLabeledGraph,
    pub vertex_action: Vec<Vec<usize>>,
    pub allow_intransitive: bool,
}

#[derive(Clone, Debug)]
pub struct Construction {
    pub system: CartesianSystem,
    /// Hypothesis clauses, all passed or not applicable.
    pub spec_report: PropertyReport,
    /// Checks run on the output.
    pub post_report: PropertyReport,
    /// Index in closure order of the representative used for each
    /// coordinate (or strip).
    pub representatives: Vec<usize>,
}

fn is_bijection(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

/// Vertex permutation of every closure element, indexed like
/// `g_omega().elements()`, extended from the generators.
fn vertex_maps(inst: &PointedInstance, action: &[Vec<usize>], n: usize) -> std::result::Result<Vec<Vec<usize>>, String> {
    let g = inst.g_omega();
    let pg = inst.m();
    if action.len() != inst.actions().len() {
        return Err(format!(
            "{} vertex permutations for {} supplied actions",
            action.len(),
            inst.actions().len()
        ));
    }
    for (j, p) in action.iter().enumerate() {
        if !is_bijection(p, n) {
            return Err(format!("vertex permutation {j} is not a permutation of {n} vertices"));
        }
    }
    let id: Vec<usize> = (0..n).collect();
    let gens: Vec<(Perm, Vec<usize>)> = g
        .generators()
        .iter()
        .enumerate()
        .map(|(j, a)| (a.to_perm(pg), action.get(j).cloned().unwrap_or_else(|| id.clone())))
        .collect();
    let els = g.elements().map_err(|e| e.to_string())?;
    let group = g.group();
    let mut maps: Vec<Option<Vec<usize>>> = vec![None; els.len()];
    let start = group
        .position(&pg.identity())
        .map_err(|e| e.to_string())?
        .expect("identity is in the closure");
    maps[start] = Some(id);
    let mut queue = vec![start];
    while let Some(xi) = queue.pop() {
        let vx = maps[xi].clone().expect("queued elements are mapped");
        for (gp, gv) in &gens {
            let y = els[xi].compose(gp);
            let yi = group.position(&y).map_err(|e| e.to_string())?.expect("closed");
            let vy: Vec<usize> = vx.iter().map(|&v| gv[v]).collect();
            match &maps[yi] {
                Some(old) if *old != vy => {
                    return Err(format!("element {y} would act as both {old:?} and {vy:?}"));
                }
                Some(_) => {}
                None => {
                    maps[yi] = Some(vy);
                    queue.push(yi);
                }
            }
        }
    }
    Ok(maps.into_iter().map(|m| m.expect("closure is connected")).collect())
}

fn coordinate_images(inst: &PointedInstance) -> Result<Vec<Vec<usize>>> {
    let g = inst.g_omega();
    Ok(g.elements()?
        .iter()
        .map(|x| {
            let cp = g.coordinate_perm(x);
            (0..cp.degree()).map(|i| cp.apply(i as u32) as usize).collect()
        })
        .collect())
}

fn single_orbit(n: usize, maps: &[Vec<usize>]) -> bool {
    n > 0 && maps.iter().map(|m| m[0]).collect::<BTreeSet<_>>().len() == n
}

fn first_failure(rep: &PropertyReport) -> Result<()> {
    match rep.failures().first() {
        Some(c) => Err(ConstructionError::SpecViolation {
            clause: c.id.clone(),
            detail: c.detail.clone(),
        }),
        None => Ok(()),
    }
}

/// `K^g` projected to coordinate `i`, where `k` sits at coordinate 0.
fn moved_projection(k: &ProductSubgroup, g: &Perm, i: usize) -> PermGroup {
    k.conjugate(g).projection(i)
}

fn m_omega_is_product(inst: &PointedInstance) -> Result<bool> {
    let pg = inst.m();
    let parts: Vec<PermGroup> = (0..pg.k()).map(|i| inst.m_omega().projection(i)).collect();
    Ok(pg.direct_product(&parts).same(inst.m_omega())?)
}

/// Clauses shared by both two-projection constructions.
struct PairChecks {
    a: ProductSubgroup,
    b: ProductSubgroup,
}

fn pair_checks(rep: &mut PropertyReport, prefix: &str, inst: &PointedInstance, a1: &PermGroup, b1: &PermGroup) -> Result<PairChecks> {
    let pg = inst.m();
    let t = pg.t();
    rep.push(Clause::new(
        &format!("{prefix}.spec.m_omega_product"),
        None,
        m_omega_is_product(inst)?,
        "M_omega is the product of its projections",
    ));
    let inside = a1.is_subgroup_of(t)? && b1.is_subgroup_of(t)?;
    let proper = inside && a1.order()? < t.order()? && b1.order()? < t.order()?;
    let (a, b) = if inside {
        (at_coordinate(pg, 0, a1)?, at_coordinate(pg, 0, b1)?)
    } else {
        (pg.factor(0), pg.factor(0))
    };
    let iso = proper && a1.order()? == b1.order()?;
    if prefix == "2sim" {
        rep.push(Clause::new(
            "2sim.spec.i",
            None,
            iso,
            format!("|A1| = {}, |B1| = {}, |T| = {}", a1.order()?, b1.order()?, t.order()?),
        ));
    } else {
        rep.push(Clause::new(
            "2nsim.spec.i",
            None,
            proper,
            format!("|A1| = {}, |B1| = {}, |T| = {}", a1.order()?, b1.order()?, t.order()?),
        ));
    }
    let conj = inside && inst.g_omega().are_conjugate_under_gomega(&a, &b)?.is_some();
    if prefix == "2sim" {
        rep.push(Clause::new("2sim.spec.ii", None, conj, "A1 and B1 are conjugate under G_omega"));
    } else {
        rep.push(Clause::new("2nsim.spec.ii", None, inside && !conj, "A1 and B1 are not conjugate under G_omega"));
    }
    let prod = inside && a1.product_size(b1)? == t.order()?;
    rep.push(Clause::new(&format!("{prefix}.spec.iii.product"), None, prod, "A1 B1 = T"));
    let meet = inside && a1.intersection(b1)?.same_group(&inst.m_omega().projection(0))?;
    rep.push(Clause::new(
        &format!("{prefix}.spec.iii.intersection"),
        None,
        meet,
        "A1 ∩ B1 = σ_0(M_omega)",
    ));
    Ok(PairChecks { a, b })
}

fn vertex_clauses(
    rep: &mut PropertyReport,
    prefix: &str,
    inst: &PointedInstance,
    action: &[Vec<usize>],
    n: usize,
    allow_intransitive: bool,
) -> Option<Vec<Vec<usize>>> {
    match vertex_maps(inst, action, n) {
        Ok(maps) => {
            rep.push(Clause::new(&format!("{prefix}.spec.action.homomorphism"), None, true, "vertex action extends to G_omega"));
            let vt = single_orbit(n, &maps);
            rep.push(Clause::when_transitive(
                &format!("{prefix}.spec.action.vertex_transitive"),
                None,
                !allow_intransitive,
                vt,
                format!("{n} vertices"),
            ));
            Some(maps)
        }
        Err(e) => {
            rep.push(Clause::new(&format!("{prefix}.spec.action.homomorphism"), None, false, e));
            None
        }
    }
}

/// Incidences `(tail, head)` per coordinate; for edges the order is
/// `(A-vertex, B-vertex)` at coordinate 0 only.
fn two_projection_system(
    inst: &PointedInstance,
    a: &ProductSubgroup,
    b: &ProductSubgroup,
    ends0: (usize, usize),
    n: usize,
    maps: &[Vec<usize>],
) -> Result<(Vec<ProductSubgroup>, Vec<usize>)> {
    let pg = inst.m();
    let k = pg.k();
    let g = inst.g_omega();
    let els = g.elements()?;
    let coords = coordinate_images(inst)?;
    let mut table: Vec<Vec<Option<PermGroup>>> = vec![vec![None; k]; n];
    let mut reps = vec![usize::MAX; k];
    for (xi, x) in els.iter().enumerate() {
        let i = coords[xi][0];
        if reps[i] == usize::MAX {
            reps[i] = xi;
        }
        for (v, h) in [(maps[xi][ends0.0], a), (maps[xi][ends0.1], b)] {
            let p = moved_projection(h, x, i);
            match &table[v][i] {
                Some(old) if !old.same_group(&p)? => {
                    return Err(ConstructionError::WellDefinednessFailure(format!(
                        "vertex {v}, coordinate {i}: representatives {} and {x} disagree",
                        els[reps[i]]
                    )));
                }
                Some(_) => {}
                None => table[v][i] = Some(p),
            }
        }
    }
    let members = (0..n)
        .map(|v| {
            let parts: Vec<PermGroup> = (0..k)
                .map(|i| table[v][i].clone().unwrap_or_else(|| pg.t().clone()))
                .collect();
            pg.direct_product(&parts)
        })
        .collect();
    Ok((members, reps))
}

fn post_checks(
    s: &CartesianSystem,
    label: ClassLabel,
    maps: &[Vec<usize>],
    allow_intransitive: bool,
    round_trip: bool,
) -> Result<PropertyReport> {
    let mut rep = PropertyReport::new("construction.post");
    let v = verify_system(s)?;
    rep.push(Clause::new("post.system", None, v.valid, format!("|Omega| = {}", v.omega_size)));
    rep.push(Clause::new("post.invariant", None, is_g_invariant(s)?, "G_omega permutes the members"));
    rep.push(Clause::when_transitive(
        "post.transitive",
        None,
        !allow_intransitive,
        is_transitive(s)?,
        "G_omega is transitive on the members",
    ));
    let c = classify_observed(s)?;
    rep.push(Clause::new("post.class", None, c.label == label, format!("label {}", c.label.id())));
    rep.push(Clause::new("post.round_trip", None, round_trip, "extracted graph is isomorphic to the input"));
    let mut eq = true;
    for (xi, x) in s.instance().g_omega().elements()?.iter().enumerate() {
        eq &= s.member_permutation(x)?.as_deref() == Some(&maps[xi][..]);
    }
    rep.push(Clause::new("post.equivariance", None, eq, "K_v^g = K_{v^g} for every closure element"));
    if let Some(c) = rep.failures().first() {
        return Err(ConstructionError::PostconditionFailed {
            clause: c.id.clone(),
            detail: c.detail.clone(),
        });
    }
    Ok(rep)
}

pub fn validate_2sim(spec: &TwoSimSpec) -> Result<(PropertyReport, Option<Vec<Vec<usize>>>)> {
    let inst = &spec.instance;
    let mut rep = PropertyReport::new("2sim.spec");
    let pc = pair_checks(&mut rep, "2sim", inst, &spec.a1, &spec.b1)?;
    let g = inst.g_omega();
    let els = g.elements()?;
    let coords = coordinate_images(inst)?;
    let pg = inst.m();
    let swaps_or_fixes = |x: &Perm| -> Result<(bool, bool)> {
        let (pa, pb) = (pc.a.conjugate(x), pc.b.conjugate(x));
        let fixes = pa.same(&pc.a)? && pb.same(&pc.b)?;
        let swaps = pa.same(&pc.b)? && pb.same(&pc.a)?;
        Ok((fixes, swaps))
    };
    let mut iv = true;
    for (xi, x) in els.iter().enumerate() {
        let (f, s) = swaps_or_fixes(x)?;
        iv &= (coords[xi][0] == 0) == (f || s);
    }
    rep.push(Clause::new(
        "2sim.spec.iv",
        None,
        iv,
        "N_{G_omega}(T_0) is the stabilizer of {A1, B1}",
    ));
    let n = spec.graph.vertex_count();
    rep.push(Clause::new(
        "2sim.spec.graph.edges",
        None,
        spec.graph.edge_count() == pg.k(),
        format!("{} edges for k = {}", spec.graph.edge_count(), pg.k()),
    ));
    let e0 = spec.graph.edges.first().copied();
    let ends0 = e0.and_then(|(u, w)| match spec.a_vertex {
        x if x == u => Some((u, w)),
        x if x == w => Some((w, u)),
        _ => None,
    });
    rep.push(Clause::new(
        "2sim.spec.graph.a_vertex",
        None,
        ends0.is_some(),
        format!("vertex {} on edge 0", spec.a_vertex),
    ));
    let maps = vertex_clauses(&mut rep, "2sim", inst, &spec.vertex_action, n, spec.allow_intransitive);
    if let (Some(maps), Some((v1, v2)), true) = (&maps, ends0, spec.graph.edge_count() == pg.k()) {
        let mut auto = true;
        let mut comp = true;
        for (xi, x) in els.iter().enumerate() {
            for (e, &(u, w)) in spec.graph.edges.iter().enumerate() {
                let (a, b) = (maps[xi][u], maps[xi][w]);
                auto &= spec.graph.edges[coords[xi][e]] == (a.min(b), a.max(b));
            }
            if coords[xi][0] == 0 {
                let (f, _) = swaps_or_fixes(x)?;
                comp &= f == (maps[xi][v1] == v1 && maps[xi][v2] == v2);
            }
        }
        rep.push(Clause::new("2sim.spec.action.automorphisms", None, auto, "G_omega acts as graph automorphisms"));
        rep.push(Clause::new(
            "2sim.spec.comp",
            None,
            comp,
            "in N(T_0), fixing (A1, B1) is equivalent to fixing (v1, v2)",
        ));
    }
    Ok((rep, maps))
}

pub fn construct_2sim(spec: &TwoSimSpec) -> Result<Construction> {
    let (rep, maps) = validate_2sim(spec)?;
    first_failure(&rep)?;
    let maps = maps.expect("validated");
    let (u, w) = spec.graph.edges[0];
    let ends0 = if spec.a_vertex == u { (u, w) } else { (w, u) };
    let pg = spec.instance.m();
    let (a, b) = (at_coordinate(pg, 0, &spec.a1)?, at_coordinate(pg, 0, &spec.b1)?);
    let (members, reps) = two_projection_system(&spec.instance, &a, &b, ends0, spec.graph.vertex_count(), &maps)?;
    let s = CartesianSystem::new(spec.instance.clone(), members)?;
    let round_trip = extract_2sim(&s).map(|g| graphs_isomorphic(&g, &spec.graph)).unwrap_or(false);
    let post = post_checks(&s, ClassLabel::TwoSim, &maps, spec.allow_intransitive, round_trip)?;
    Ok(Construction {
        system: s,
        spec_report: rep,
        post_report: post,
        representatives: reps,
    })
}

pub fn validate_2nsim(spec: &TwoNsimSpec) -> Result<(PropertyReport, Option<Vec<Vec<usize>>>)> {
    let inst = &spec.instance;
    let mut rep = PropertyReport::new("2nsim.spec");
    let pc = pair_checks(&mut rep, "2nsim", inst, &spec.a1, &spec.b1)?;
    let g = inst.g_omega();
    let els = g.elements()?;
    let coords = coordinate_images(inst)?;
    let pg = inst.m();
    let mut iv = true;
    for (xi, x) in els.iter().enumerate() {
        let in_t = coords[xi][0] == 0;
        iv &= in_t == pc.a.is_normalized_by(x)? && in_t == pc.b.is_normalized_by(x)?;
    }
    rep.push(Clause::new(
        "2nsim.spec.iv",
        None,
        iv,
        "N_{G_omega}(T_0) = N_{G_omega}(A1) = N_{G_omega}(B1)",
    ));
    let n = spec.graph.vertices.len();
    let k_ok = spec.graph.arcs.len() == pg.k();
    rep.push(Clause::new(
        "2nsim.spec.graph.arcs",
        None,
        k_ok,
        format!("{} arcs for k = {}", spec.graph.arcs.len(), pg.k()),
    ));
    let maps = vertex_clauses(&mut rep, "2nsim", inst, &spec.vertex_action, n, spec.allow_intransitive);
    if let (Some(maps), true) = (&maps, k_ok) {
        let mut auto = true;
        for xi in 0..els.len() {
            for (e, &(u, w)) in spec.graph.arcs.iter().enumerate() {
                auto &= spec.graph.arcs[coords[xi][e]] == (maps[xi][u], maps[xi][w]);
            }
        }
        rep.push(Clause::new("2nsim.spec.action.automorphisms", None, auto, "G_omega acts as di-graph automorphisms"));
    }
    Ok((rep, maps))
}

pub fn construct_2nsim(spec: &TwoNsimSpec) -> Result<Construction> {
    let (rep, maps) = validate_2nsim(spec)?;
    first_failure(&rep)?;
    let maps = maps.expect("validated");
    let pg = spec.instance.m();
    let (a, b) = (at_coordinate(pg, 0, &spec.a1)?, at_coordinate(pg, 0, &spec.b1)?);
    let (members, reps) =
        two_projection_system(&spec.instance, &a, &b, spec.graph.arcs[0], spec.graph.vertices.len(), &maps)?;
    let s = CartesianSystem::new(spec.instance.clone(), members)?;
    let round_trip = extract_2nsim(&s).map(|g| digraphs_isomorphic(&g, &spec.graph)).unwrap_or(false);
    let post = post_checks(&s, ClassLabel::TwoNsim, &maps, spec.allow_intransitive, round_trip)?;
    Ok(Construction {
        system: s,
        spec_report: rep,
        post_report: post,
        representatives: reps,
    })
}

/// Supports of the strips of `M_ω`, if it is a product of pairwise disjoint
/// strips of length 2.
fn m_omega_strips(inst: &PointedInstance) -> Result<Option<Vec<(usize, usize)>>> {
    let comps = strip_components(inst.m_omega())?;
    if comps.iter().any(|c| c.support.len() != 2 || !c.is_strip)
        || !crate::product::is_product_of_components(inst.m_omega(), &comps)?
    {
        return Ok(None);
    }
    let mut s: Vec<(usize, usize)> = comps.iter().map(|c| (c.support[0], c.support[1])).collect();
    s.sort_unstable();
    Ok(Some(s))
}

/// `P·Q = T_min × T_max` for subgroups of the two factors on a support.
fn fills_pair(pg: &ProductGroup, p: &ProductSubgroup, q: &ProductSubgroup) -> Result<bool> {
    let t = pg.t_order()? as u128;
    let meet = p.intersection(q)?.order()? as u128;
    Ok(p.order()? as u128 * q.order()? as u128 / meet == t * t)
}

struct OneSData {
    strips: Vec<(usize, usize)>,
    j1: usize,
    k_v1: ProductSubgroup,
    v1: usize,
    v2: usize,
}

fn strip_index(strips: &[(usize, usize)], coords: &[usize], j: usize) -> Option<usize> {
    let (a, b) = strips[j];
    let img = (coords[a].min(coords[b]), coords[a].max(coords[b]));
    strips.iter().position(|&s| s == img)
}

pub fn validate_1s(spec: &OneSSpec) -> Result<(PropertyReport, Option<Vec<Vec<usize>>>)> {
    validate_1s_inner(spec).map(|(r, m, _)| (r, m))
}

fn validate_1s_inner(spec: &OneSSpec) -> Result<(PropertyReport, Option<Vec<Vec<usize>>>, Option<OneSData>)> {
    let inst = &spec.instance;
    let pg = inst.m();
    let t = pg.t();
    let g = inst.g_omega();
    let els = g.elements()?;
    let coords = coordinate_images(inst)?;
    let mut rep = PropertyReport::new("1S.spec");
    let strips = m_omega_strips(inst)?;
    rep.push(Clause::new(
        "1s.spec.m_omega_strips",
        None,
        strips.is_some(),
        "M_omega is a product of pairwise disjoint strips of length 2",
    ));
    let strips = strips.unwrap_or_default();
    rep.push(Clause::new(
        "1s.spec.graph.strips",
        None,
        spec.graph.v2.len() == strips.len(),
        format!("{} strip vertices for {} strips", spec.graph.v2.len(), strips.len()),
    ));
    let x1 = Strip::new(spec.x1.clone()).ok();
    let full2 = match &x1 {
        Some(x) => x.support().len() == 2 && x.is_full()?,
        None => false,
    };
    rep.push(Clause::new("1s.spec.i", None, full2, "X1 is a full strip of length 2"));
    let supp = x1.as_ref().map(|x| (x.min(), x.max()));
    let j1 = supp.and_then(|s| strips.iter().position(|&y| y == s));
    rep.push(Clause::new(
        "1s.spec.support",
        None,
        j1.is_some(),
        format!("Supp X1 = {supp:?}, strip supports {strips:?}"),
    ));
    let (lo, hi) = supp.unwrap_or((0, pg.k().min(2) - 1));
    let inside = spec.a1.is_subgroup_of(t)? && spec.b1.is_subgroup_of(t)?;
    let proper = inside && spec.a1.order()? < t.order()? && spec.b1.order()? < t.order()?;
    rep.push(Clause::new(
        "1s.spec.ii",
        None,
        proper,
        format!("|A1| = {}, |B1| = {}", spec.a1.order()?, spec.b1.order()?),
    ));
    let (a, b) = if inside {
        (at_coordinate(pg, lo, &spec.a1)?, at_coordinate(pg, hi, &spec.b1)?)
    } else {
        (pg.factor(lo), pg.factor(hi))
    };
    rep.push(Clause::new(
        "1s.spec.iii",
        None,
        inside && g.are_conjugate_under_gomega(&a, &b)?.is_some(),
        "A1 and B1 are conjugate under G_omega",
    ));
    let ab = a.join(&b);
    let pair_ok = full2 && inside && lo != hi;
    rep.push(Clause::new(
        "1s.spec.iv.product",
        None,
        pair_ok && fills_pair(pg, &spec.x1, &ab)?,
        "X1 (A1 × B1) = T_min × T_max",
    ));
    let y1 = j1.map(|_| inst.m_omega().project_in_place(&[lo, hi]));
    let meet_ok = match &y1 {
        Some(y) if pair_ok => spec.x1.intersection(&ab)?.same(y)?,
        _ => false,
    };
    rep.push(Clause::new(
        "1s.spec.iv.intersection",
        None,
        meet_ok,
        "X1 ∩ (A1 × B1) = σ_Supp(X1)(M_omega)",
    ));
    let mut v_ok = true;
    if pair_ok {
        for (xi, x) in els.iter().enumerate() {
            let c = &coords[xi];
            let n_pair = (c[lo].min(c[hi]), c[lo].max(c[hi])) == (lo, hi);
            v_ok &= n_pair == spec.x1.is_normalized_by(x)? && n_pair == ab.is_normalized_by(x)?;
        }
    }
    rep.push(Clause::new(
        "1s.spec.v",
        None,
        pair_ok && v_ok,
        "N(T_min × T_max) = N(X1) = N(A1 × B1) in G_omega",
    ));

    let n = spec.graph.v1.len();
    let maps = vertex_clauses(&mut rep, "1s", inst, &spec.vertex_action, n, spec.allow_intransitive);
    let nx = strips.len();
    let gr = &spec.graph;
    let mut data = None;
    if let (Some(maps), true) = (&maps, gr.v2.len() == nx && nx > 0) {
        let smaps: Vec<Option<Vec<usize>>> = coords
            .iter()
            .map(|c| (0..nx).map(|j| strip_index(&strips, c, j)).collect())
            .collect();
        let mut auto = smaps.iter().all(Option::is_some);
        let smaps: Vec<Vec<usize>> = smaps.into_iter().map(|m| m.unwrap_or_else(|| (0..nx).collect())).collect();
        let map_edges = |es: &[(usize, usize)], xi: usize| {
            let mut m: Vec<(usize, usize)> = es.iter().map(|&(v, y)| (maps[xi][v], smaps[xi][y])).collect();
            m.sort_unstable();
            m
        };
        for xi in 0..els.len() {
            auto &= map_edges(&gr.e1, xi) == gr.e1 && map_edges(&gr.e2, xi) == gr.e2;
        }
        rep.push(Clause::new("1s.spec.action.automorphisms", None, auto, "G_omega preserves E1 and E2"));
        let edge_orbit = |es: &[(usize, usize)]| -> bool {
            !es.is_empty()
                && (0..els.len())
                    .map(|xi| (maps[xi][es[0].0], smaps[xi][es[0].1]))
                    .collect::<BTreeSet<_>>()
                    .len()
                    == es.len()
        };
        rep.push(Clause::new("1s.spec.action.orbit.strips", None, single_orbit(nx, &smaps), "strips form one orbit"));
        rep.push(Clause::new("1s.spec.action.orbit.e1", None, edge_orbit(&gr.e1), "E1 is one orbit"));
        rep.push(Clause::new("1s.spec.action.orbit.e2", None, edge_orbit(&gr.e2), "E2 is one orbit"));

        let val2 = (0..nx).any(|y| gr.valency(y).0 == 2);
        if val2 {
            let mut stab = true;
            for &(v, y) in &gr.e1 {
                let (p, q) = strips[y];
                for xi in 0..els.len() {
                    let fixes = maps[xi][v] == v && smaps[xi][y] == y;
                    stab &= fixes == (coords[xi][p] == p && coords[xi][q] == q);
                }
            }
            rep.push(Clause::new(
                "1s.spec.valency_two.stabilizer",
                None,
                stab,
                "edge stabilizers equal N(T_min Y) ∩ N(T_max Y)",
            ));
            // X1, A1 × T, T × B1 must factorise T_min × T_max as a system
            let at = a.join(&pg.factor(hi));
            let tb = pg.factor(lo).join(&b);
            let ok = pair_ok
                && fills_pair(pg, &spec.x1, &at.intersection(&tb)?)?
                && fills_pair(pg, &at, &spec.x1.intersection(&tb)?)?
                && fills_pair(pg, &tb, &spec.x1.intersection(&at)?)?;
            rep.push(Clause::new(
                "1s.spec.valency_two.factorisation",
                None,
                ok,
                "X1, A1 × T_max, T_min × B1 form a system on Supp X1",
            ));
        } else {
            rep.push(Clause::not_applicable("1s.spec.valency_two.stabilizer", None, "E1-valency 1"));
            rep.push(Clause::not_applicable("1s.spec.valency_two.factorisation", None, "E1-valency 1"));
        }
        if let Some(j1) = j1 {
            let v1 = gr.e1.iter().filter(|e| e.1 == j1).map(|e| e.0).min();
            let v2 = gr.e2.iter().find(|e| e.1 == j1).map(|e| e.0);
            if let (Some(v1), Some(v2)) = (v1, v2) {
                let k_v1 = if val2 { a.join(&pg.factor(hi)) } else { ab.clone() };
                data = Some(OneSData { strips, j1, k_v1, v1, v2 });
            }
        }
        return Ok((rep, Some(maps.clone()), data));
    }
    Ok((rep, maps, data))
}

pub fn construct_1s(spec: &OneSSpec) -> Result<Construction> {
    let (rep, maps, data) = validate_1s_inner(spec)?;
    first_failure(&rep)?;
    let maps = maps.expect("validated");
    let d = data.expect("validated");
    let inst = &spec.instance;
    let pg = inst.m();
    let g = inst.g_omega();
    let els = g.elements()?;
    let coords = coordinate_images(inst)?;
    let n = spec.graph.v1.len();
    let nx = d.strips.len();
    let mut table: Vec<Vec<Option<ProductSubgroup>>> = vec![vec![None; nx]; n];
    let mut reps = vec![usize::MAX; nx];
    for (xi, x) in els.iter().enumerate() {
        let y = strip_index(&d.strips, &coords[xi], d.j1).expect("validated");
        if reps[y] == usize::MAX {
            reps[y] = xi;
        }
        for (v, h) in [(maps[xi][d.v1], &d.k_v1), (maps[xi][d.v2], &spec.x1)] {
            let moved = h.conjugate(x);
            match &table[v][y] {
                Some(old) if !old.same(&moved)? => {
                    return Err(ConstructionError::WellDefinednessFailure(format!(
                        "vertex {v}, strip {y}: representatives {} and {x} disagree",
                        els[reps[y]]
                    )));
                }
                Some(_) => {}
                None => table[v][y] = Some(moved),
            }
        }
    }
    let members = (0..n)
        .map(|v| {
            let mut gens = Vec::new();
            for (y, &(p, q)) in d.strips.iter().enumerate() {
                match &table[v][y] {
                    Some(h) => gens.extend(h.generators().iter().cloned()),
                    None => {
                        gens.extend(pg.factor(p).generators().iter().cloned());
                        gens.extend(pg.factor(q).generators().iter().cloned());
                    }
                }
            }
            pg.subgroup(gens)
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let s = CartesianSystem::new(inst.clone(), members)?;
    let round_trip = extract_1s(&s).map(|g| bipartite_isomorphic(&g, &spec.graph)).unwrap_or(false);
    let post = post_checks(&s, ClassLabel::OneS, &maps, spec.allow_intransitive, round_trip)?;
    Ok(Construction {
        system: s,
        spec_report: rep,
        post_report: post,
        representatives: reps,
    })
}
