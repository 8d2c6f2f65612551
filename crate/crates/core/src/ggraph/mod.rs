//! Generalised graphs, generalised di-graphs and labelled bipartite graphs
//! attached to Cartesian systems, and the combinatorial property suites.

pub mod search;

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cartesian::classify::{classify_observed, ClassLabel, Classification};
use crate::cartesian::properties::coordinate_pairs;
use crate::cartesian::{CartesianError, CartesianSystem};
use crate::perm::Perm;
use crate::product::GOmegaGroup;
use crate::report::{Clause, PropertyReport};

pub use search::{
    check_edge_transitive, exhaustive_nonexistence_searches, search_bipartite, search_digraphs, search_graphs,
    GraphShape, EdgeTransitiveReport, SearchCertificate,
};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error(transparent)]
    Cartesian(#[from] CartesianError),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),
}

impl From<crate::product::ProductError> for GraphError {
    fn from(e: crate::product::ProductError) -> Self {
        GraphError::Cartesian(e.into())
    }
}

/// Vertices, edges, and an incidence map sending each edge to two distinct
/// vertices. Parallel edges are allowed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedGraph {
    pub vertices: Vec<String>,
    pub edge_labels: Vec<String>,
    /// `ε(e)` with the smaller vertex first.
    pub edges: Vec<(usize, usize)>,
}

impl GeneralizedGraph {
    pub fn new(
        vertices: Vec<String>,
        edge_labels: Vec<String>,
        edges: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::InvalidGraph("no vertices".into()));
        }
        if edge_labels.len() != edges.len() {
            return Err(GraphError::InvalidGraph("edge label count differs from edge count".into()));
        }
        let n = vertices.len();
        let mut norm = Vec::with_capacity(edges.len());
        for (e, &(u, v)) in edges.iter().enumerate() {
            if u >= n || v >= n {
                return Err(GraphError::InvalidGraph(format!("edge {e} has an endpoint out of range")));
            }
            if u == v {
                return Err(GraphError::InvalidGraph(format!("edge {e} is a loop")));
            }
            norm.push((u.min(v), u.max(v)));
        }
        Ok(GeneralizedGraph {
            vertices,
            edge_labels,
            edges: norm,
        })
    }

    /// Unlabelled graph on `n` vertices.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        GeneralizedGraph::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            (0..edges.len()).map(|i| format!("e{i}")).collect(),
            edges.to_vec(),
        )
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// No two edges share both endpoints.
    pub fn is_simple(&self) -> bool {
        let mut e = self.edges.clone();
        e.sort_unstable();
        e.windows(2).all(|w| w[0] != w[1])
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d = vec![0; self.vertex_count()];
        for &(u, v) in &self.edges {
            d[u] += 1;
            d[v] += 1;
        }
        d
    }

    fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &e in &self.edges {
            *m.entry(e).or_insert(0) += 1;
        }
        m
    }

    /// Checks that a vertex map and an edge map together preserve incidence.
    pub fn is_automorphism(&self, vperm: &[usize], eperm: &[usize]) -> bool {
        self.edges.iter().enumerate().all(|(e, &(u, v))| {
            let (a, b) = (vperm[u], vperm[v]);
            self.edges[eperm[e]] == (a.min(b), a.max(b))
        })
    }
}

/// Vertices and arcs with tail `β` and head `ε`, distinct for every arc.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GeneralizedDiGraph {
    pub vertices: Vec<String>,
    pub arc_labels: Vec<String>,
    /// `(β(a), ε(a))`.
    pub arcs: Vec<(usize, usize)>,
}

impl GeneralizedDiGraph {
    pub fn new(vertices: Vec<String>, arc_labels: Vec<String>, arcs: Vec<(usize, usize)>) -> Result<Self, GraphError> {
        if vertices.is_empty() {
            return Err(GraphError::InvalidGraph("no vertices".into()));
        }
        if arc_labels.len() != arcs.len() {
            return Err(GraphError::InvalidGraph("arc label count differs from arc count".into()));
        }
        for (a, &(u, v)) in arcs.iter().enumerate() {
            if u >= vertices.len() || v >= vertices.len() {
                return Err(GraphError::InvalidGraph(format!("arc {a} has an endpoint out of range")));
            }
            if u == v {
                return Err(GraphError::InvalidGraph(format!("arc {a} has equal tail and head")));
            }
        }
        Ok(GeneralizedDiGraph {
            vertices,
            arc_labels,
            arcs,
        })
    }

    pub fn from_arcs(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        GeneralizedDiGraph::new(
            (0..n).map(|i| format!("v{i}")).collect(),
            (0..arcs.len()).map(|i| format!("a{i}")).collect(),
            arcs.to_vec(),
        )
    }

    pub fn is_automorphism(&self, vperm: &[usize], aperm: &[usize]) -> bool {
        self.arcs
            .iter()
            .enumerate()
            .all(|(a, &(u, v))| self.arcs[aperm[a]] == (vperm[u], vperm[v]))
    }

    fn multiplicities(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for &a in &self.arcs {
            *m.entry(a).or_insert(0) += 1;
        }
        m
    }
}

/// Parts `V₁` (system members) and `V₂` (strips) with two labelled edge
/// sets between them, stored as `(v1, v2)` pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BipartiteLabeledGraph {
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub e1: Vec<(usize, usize)>,
    pub e2: Vec<(usize, usize)>,
}

impl BipartiteLabeledGraph {
    /// Every `V₂` vertex must meet exactly one `E₂` edge and one or two
    /// `E₁` edges.
    pub fn new(
        v1: Vec<String>,
        v2: Vec<String>,
        mut e1: Vec<(usize, usize)>,
        mut e2: Vec<(usize, usize)>,
    ) -> Result<Self, GraphError> {
        for &(a, b) in e1.iter().chain(&e2) {
            if a >= v1.len() || b >= v2.len() {
                return Err(GraphError::InvalidGraph(format!("edge ({a}, {b}) out of range")));
            }
        }
        e1.sort_unstable();
        e2.sort_unstable();
        if e1.windows(2).any(|w| w[0] == w[1]) || e2.windows(2).any(|w| w[0] == w[1]) {
            return Err(GraphError::InvalidGraph("repeated edge".into()));
        }
        let g = BipartiteLabeledGraph { v1, v2, e1, e2 };
        for x in 0..g.v2.len() {
            let (d1, d2) = g.valency(x);
            if d2 != 1 || !(1..=2).contains(&d1) {
                return Err(GraphError::InvalidGraph(format!(
                    "V2 vertex {x} meets {d1} E1 edges and {d2} E2 edges"
                )));
            }
        }
        Ok(g)
    }

    /// `(E₁-valency, E₂-valency)` of a `V₂` vertex.
    pub fn valency(&self, x: usize) -> (usize, usize) {
        (
            self.e1.iter().filter(|e| e.1 == x).count(),
            self.e2.iter().filter(|e| e.1 == x).count(),
        )
    }

    pub fn is_automorphism(&self, p1: &[usize], p2: &[usize]) -> bool {
        let map = |es: &[(usize, usize)]| {
            let mut m: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (p1[a], p2[b])).collect();
            m.sort_unstable();
            m
        };
        map(&self.e1) == self.e1 && map(&self.e2) == self.e2
    }
}

/// Backtracking search for a vertex bijection carrying `ga` to `gb`,
/// matching the given per-vertex invariants and the edge multiplicities.
fn find_vertex_bijection(
    n: usize,
    inv_a: &[Vec<usize>],
    inv_b: &[Vec<usize>],
    ok: &dyn Fn(&[usize]) -> bool,
) -> Option<Vec<usize>> {
    fn rec(
        i: usize,
        n: usize,
        inv_a: &[Vec<usize>],
        inv_b: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        ok: &dyn Fn(&[usize]) -> bool,
    ) -> bool {
        if i == n {
            return ok(map);
        }
        for j in 0..n {
            if !used[j] && inv_a[i] == inv_b[j] {
                used[j] = true;
                map.push(j);
                if rec(i + 1, n, inv_a, inv_b, map, used, ok) {
                    return true;
                }
                map.pop();
                used[j] = false;
            }
        }
        false
    }
    let mut map = Vec::with_capacity(n);
    let mut used = vec![false; n];
    if rec(0, n, inv_a, inv_b, &mut map, &mut used, ok) {
        Some(map)
    } else {
        None
    }
}

pub fn graphs_isomorphic(a: &GeneralizedGraph, b: &GeneralizedGraph) -> bool {
    let n = a.vertex_count();
    if n != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (ma, mb) = (a.multiplicities(), b.multiplicities());
    let inv = |g: &GeneralizedGraph| {
        let d = g.degrees();
        d.iter().map(|&x| vec![x]).collect::<Vec<_>>()
    };
    find_vertex_bijection(n, &inv(a), &inv(b), &|map| {
        ma.iter().all(|(&(u, v), &c)| {
            let (x, y) = (map[u], map[v]);
            mb.get(&(x.min(y), x.max(y))) == Some(&c)
        })
    })
    .is_some()
}

pub fn digraphs_isomorphic(a: &GeneralizedDiGraph, b: &GeneralizedDiGraph) -> bool {
    let n = a.vertices.len();
    if n != b.vertices.len() || a.arcs.len() != b.arcs.len() {
        return false;
    }
    let (ma, mb) = (a.multiplicities(), b.multiplicities());
    let inv = |g: &GeneralizedDiGraph| {
        (0..g.vertices.len())
            .map(|v| {
                vec![
                    g.arcs.iter().filter(|a| a.0 == v).count(),
                    g.arcs.iter().filter(|a| a.1 == v).count(),
                ]
            })
            .collect::<Vec<_>>()
    };
    find_vertex_bijection(n, &inv(a), &inv(b), &|map| {
        ma.iter().all(|(&(u, v), &c)| mb.get(&(map[u], map[v])) == Some(&c))
    })
    .is_some()
}

pub fn bipartite_isomorphic(a: &BipartiteLabeledGraph, b: &BipartiteLabeledGraph) -> bool {
    if a.v1.len() != b.v1.len() || a.v2.len() != b.v2.len() || a.e1.len() != b.e1.len() || a.e2.len() != b.e2.len() {
        return false;
    }
    let n1 = a.v1.len();
    let inv1 = |g: &BipartiteLabeledGraph| {
        (0..g.v1.len())
            .map(|v| vec![g.e1.iter().filter(|e| e.0 == v).count(), g.e2.iter().filter(|e| e.0 == v).count()])
            .collect::<Vec<_>>()
    };
    let inv2 = |g: &BipartiteLabeledGraph| {
        (0..g.v2.len())
            .map(|x| {
                let (d1, d2) = g.valency(x);
                vec![d1, d2]
            })
            .collect::<Vec<_>>()
    };
    let (ia2, ib2) = (inv2(a), inv2(b));
    find_vertex_bijection(n1, &inv1(a), &inv1(b), &|m1| {
        let m1 = m1.to_vec();
        find_vertex_bijection(a.v2.len(), &ia2, &ib2, &|m2| a.clone().is_mapped_onto(b, &m1, m2)).is_some()
    })
    .is_some()
}

impl BipartiteLabeledGraph {
    fn is_mapped_onto(&self, other: &BipartiteLabeledGraph, p1: &[usize], p2: &[usize]) -> bool {
        let map = |es: &[(usize, usize)]| {
            let mut m: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (p1[a], p2[b])).collect();
            m.sort_unstable();
            m
        };
        map(&self.e1) == other.e1 && map(&self.e2) == other.e2
    }
}

fn member_labels(s: &CartesianSystem) -> Result<Vec<String>, CartesianError> {
    s.members()
        .iter()
        .map(|k| {
            Ok(k.describe()?
                .iter()
                .map(|g| format!("[{}]", g.join(", ")))
                .collect::<Vec<_>>()
                .join(" "))
        })
        .collect()
}

fn require(s: &CartesianSystem, label: ClassLabel) -> Result<Classification, GraphError> {
    let c = classify_observed(s)?;
    if c.label != label {
        return Err(CartesianError::WrongClass {
            expected: label.id().into(),
            found: c.label.id().into(),
        }
        .into());
    }
    Ok(c)
}

fn edge_endpoints(s: &CartesianSystem, c: &Classification) -> Result<Vec<(usize, usize)>, GraphError> {
    let pairs = coordinate_pairs(s, c)?;
    let mut out = Vec::new();
    for (i, p) in pairs.iter().enumerate() {
        let p = p.as_ref().ok_or_else(|| {
            CartesianError::StructureViolation(format!("F_{i} is not the image of F_0"))
        })?;
        if p.a_members.len() != 1 || p.b_members.len() != 1 {
            return Err(CartesianError::StructureViolation(format!(
                "coordinate {i}: proper projections are not carried by single members"
            ))
            .into());
        }
        out.push((p.a_members[0], p.b_members[0]));
    }
    Ok(out)
}

/// Members as vertices, coordinates as edges, each joining the two members
/// with a proper projection there.
pub fn extract_2sim(s: &CartesianSystem) -> Result<GeneralizedGraph, GraphError> {
    let c = require(s, ClassLabel::TwoSim)?;
    let ends = edge_endpoints(s, &c)?;
    GeneralizedGraph::new(
        member_labels(s)?,
        (0..ends.len()).map(|i| format!("T{i}")).collect(),
        ends,
    )
}

/// Arc `T_i` runs from the member with projection `A_i` to the one with `B_i`.
pub fn extract_2nsim(s: &CartesianSystem) -> Result<GeneralizedDiGraph, GraphError> {
    let c = require(s, ClassLabel::TwoNsim)?;
    let ends = edge_endpoints(s, &c)?;
    GeneralizedDiGraph::new(
        member_labels(s)?,
        (0..ends.len()).map(|i| format!("T{i}")).collect(),
        ends,
    )
}

/// Members and involved strips; `E₁` records a proper projection at an end
/// of the strip's support, `E₂` records involvement.
pub fn extract_1s(s: &CartesianSystem) -> Result<BipartiteLabeledGraph, GraphError> {
    let c = require(s, ClassLabel::OneS)?;
    let (e1, e2) = one_s_edges(s, &c)?;
    let v2 = c.strips.iter().map(|x| format!("X{:?}", x.support)).collect();
    BipartiteLabeledGraph::new(member_labels(s)?, v2, e1, e2)
}

type EdgeList = Vec<(usize, usize)>;

fn one_s_edges(s: &CartesianSystem, c: &Classification) -> Result<(EdgeList, EdgeList), CartesianError> {
    let t = s.instance().m().t_order()?;
    let mut e1 = Vec::new();
    let mut e2 = Vec::new();
    for (x, st) in c.strips.iter().enumerate() {
        let (lo, hi) = (st.strip.min(), st.strip.max());
        for (j, k) in s.members().iter().enumerate() {
            if k.projection(lo).order()? < t || k.projection(hi).order()? < t {
                e1.push((j, x));
            }
        }
        e2.push((st.member, x));
    }
    Ok((e1, e2))
}

/// Action of a `G_ω` element on members and coordinates.
struct Induced {
    members: Option<Vec<usize>>,
    coords: Vec<usize>,
}

fn induced(s: &CartesianSystem, g: &GOmegaGroup, x: &Perm) -> Result<Induced, CartesianError> {
    let cp = g.coordinate_perm(x);
    Ok(Induced {
        members: s.member_permutation(x)?,
        coords: (0..cp.degree()).map(|i| cp.apply(i as u32) as usize).collect(),
    })
}

fn orbit_count(n: usize, perms: &[Vec<usize>]) -> usize {
    let mut seen = vec![false; n];
    let mut count = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        count += 1;
        seen[start] = true;
        let mut stack = vec![start];
        while let Some(v) = stack.pop() {
            for p in perms {
                if !seen[p[v]] {
                    seen[p[v]] = true;
                    stack.push(p[v]);
                }
            }
        }
    }
    count
}

/// Combinatorial suite for the class of `s`.
pub fn verify_combinatorial_property(s: &CartesianSystem, label: ClassLabel) -> Result<PropertyReport, GraphError> {
    match label {
        ClassLabel::TwoSim => comb_pair(s, true),
        ClassLabel::TwoNsim => comb_pair(s, false),
        ClassLabel::OneS => comb_one_s(s),
        other => Err(CartesianError::WrongClass {
            expected: "2sim, 2nsim or 1S".into(),
            found: other.id().into(),
        }
        .into()),
    }
}

fn comb_pair(s: &CartesianSystem, sim: bool) -> Result<PropertyReport, GraphError> {
    let label = if sim { ClassLabel::TwoSim } else { ClassLabel::TwoNsim };
    let c = require(s, label)?;
    let tr = c.transitive;
    let g = s.instance().g_omega();
    let ends = edge_endpoints(s, &c)?;
    let prefix = label.id();
    let mut rep = PropertyReport::new(&format!("{prefix}.combinatorial"));
    let mut vperms = Vec::new();
    let mut eperms = Vec::new();
    let mut auto_ok = true;
    for x in g.group().generators() {
        let ind = induced(s, g, x)?;
        let Some(vp) = ind.members else {
            auto_ok = false;
            continue;
        };
        let ok = ends.iter().enumerate().all(|(i, &(a, b))| {
            let (na, nb) = ends[ind.coords[i]];
            if sim {
                let mut x = [vp[a], vp[b]];
                let mut y = [na, nb];
                x.sort_unstable();
                y.sort_unstable();
                x == y
            } else {
                (vp[a], vp[b]) == (na, nb)
            }
        });
        auto_ok &= ok;
        vperms.push(vp);
        eperms.push(ind.coords);
    }
    rep.push(Clause::new(
        &format!("{prefix}.comb.automorphisms"),
        None,
        auto_ok,
        "every generator of G_omega maps incidences to incidences",
    ));
    let vt = orbit_count(s.len(), &vperms) == 1;
    rep.push(Clause::when_transitive(
        &format!("{prefix}.comb.vertex_transitive"),
        None,
        tr,
        vt,
        format!("{} vertices", s.len()),
    ));
    let et = orbit_count(ends.len(), &eperms) == 1;
    let what = if sim { "edge_transitive" } else { "arc_transitive" };
    rep.push(Clause::when_transitive(
        &format!("{prefix}.comb.{what}"),
        None,
        tr,
        et,
        format!("{} edges", ends.len()),
    ));
    if sim {
        let pairs = coordinate_pairs(s, &c)?;
        let pg = s.instance().m();
        for (i, p) in pairs.iter().enumerate() {
            let p = p.as_ref().expect("checked by edge_endpoints");
            let ae = crate::cartesian::classify::at_coordinate(pg, i, &p.a)?;
            let be = crate::cartesian::classify::at_coordinate(pg, i, &p.b)?;
            let (j1, j2) = ends[i];
            let mut ok = true;
            let mut checked = 0usize;
            for x in g.elements().map_err(CartesianError::from)? {
                if g.coordinate_perm(x).apply(i as u32) as usize != i {
                    continue;
                }
                checked += 1;
                let fixes_pair = ae.conjugate(x).same(&ae)? && be.conjugate(x).same(&be)?;
                let mp = s.member_permutation(x)?;
                let fixes_members = mp.is_some_and(|m| m[j1] == j1 && m[j2] == j2);
                ok &= fixes_pair == fixes_members;
            }
            rep.push(Clause::when_transitive(
                "2sim.comb.pair_rule",
                Some(i),
                tr,
                ok,
                format!("{checked} elements of N(T_{i}) checked"),
            ));
        }
    }
    Ok(rep)
}

fn comb_one_s(s: &CartesianSystem) -> Result<PropertyReport, GraphError> {
    let c = require(s, ClassLabel::OneS)?;
    let tr = c.transitive;
    let g = s.instance().g_omega();
    let (e1, e2) = one_s_edges(s, &c)?;
    let nx = c.strips.len();
    let mut rep = PropertyReport::new("1S.combinatorial");

    let bip = e1.iter().chain(&e2).all(|&(a, b)| a < s.len() && b < nx);
    rep.push(Clause::new(
        "1s.comb.bipartite",
        None,
        bip,
        format!("{} members, {} strips, |E1| = {}, |E2| = {}", s.len(), nx, e1.len(), e2.len()),
    ));

    let strips: Vec<_> = c.strips.iter().map(|x| x.strip.subgroup().clone()).collect();
    let mut p1s = Vec::new();
    let mut p2s = Vec::new();
    let mut auto_ok = true;
    for x in g.group().generators() {
        let Some(p1) = s.member_permutation(x)? else {
            auto_ok = false;
            continue;
        };
        let mut p2 = Vec::new();
        for st in &strips {
            let img = st.conjugate(x);
            let mut found = None;
            for (j, other) in strips.iter().enumerate() {
                if other.same(&img)? {
                    found = Some(j);
                    break;
                }
            }
            match found {
                Some(j) => p2.push(j),
                None => auto_ok = false,
            }
        }
        if p2.len() != nx {
            continue;
        }
        let map = |es: &[(usize, usize)]| {
            let mut m: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (p1[a], p2[b])).collect();
            m.sort_unstable();
            m
        };
        let mut s1 = e1.clone();
        let mut s2 = e2.clone();
        s1.sort_unstable();
        s2.sort_unstable();
        auto_ok &= map(&e1) == s1 && map(&e2) == s2;
        p1s.push(p1);
        p2s.push(p2);
    }
    rep.push(Clause::new(
        "1s.comb.automorphisms",
        None,
        auto_ok,
        "G_omega permutes members and strips preserving E1 and E2",
    ));

    let edge_perms = |es: &[(usize, usize)]| -> Vec<Vec<usize>> {
        p1s.iter()
            .zip(&p2s)
            .map(|(p1, p2)| {
                es.iter()
                    .map(|&(a, b)| es.iter().position(|&e| e == (p1[a], p2[b])).unwrap_or(0))
                    .collect()
            })
            .collect()
    };
    for (id, n, perms) in [
        ("1s.comb.orbit.members", s.len(), p1s.clone()),
        ("1s.comb.orbit.strips", nx, p2s.clone()),
        ("1s.comb.orbit.e1", e1.len(), edge_perms(&e1)),
        ("1s.comb.orbit.e2", e2.len(), edge_perms(&e2)),
    ] {
        let ok = n > 0 && orbit_count(n, &perms) == 1;
        rep.push(Clause::when_transitive(id, None, tr, ok, format!("{n} elements")));
    }

    let valencies: Vec<(usize, usize)> = (0..nx)
        .map(|x| {
            (
                e1.iter().filter(|e| e.1 == x).count(),
                e2.iter().filter(|e| e.1 == x).count(),
            )
        })
        .collect();
    let val_ok = valencies.iter().all(|&(d1, d2)| (1..=2).contains(&d1) && d2 == 1);
    rep.push(Clause::when_transitive(
        "1s.comb.valency",
        None,
        tr,
        val_ok,
        format!("(E1, E2) valencies {valencies:?}"),
    ));

    if valencies.iter().any(|v| v.0 == 2) {
        let els = g.elements().map_err(CartesianError::from)?;
        let mut ok = true;
        for &(j, x) in &e1 {
            let st = &c.strips[x].strip;
            let (lo, hi) = (st.min() as u32, st.max() as u32);
            for y in els {
                let cp = g.coordinate_perm(y);
                let in_norms = cp.apply(lo) == lo && cp.apply(hi) == hi;
                let fixes_k = s.member_permutation(y)?.is_some_and(|m| m[j] == j);
                let fixes_x = strips[x].conjugate(y).same(&strips[x])?;
                ok &= (fixes_k && fixes_x) == in_norms;
            }
        }
        rep.push(Clause::when_transitive(
            "1s.comb.valency_two_stabilizer",
            None,
            tr,
            ok,
            "edge stabilizers equal N(T_min) ∩ N(T_max)",
        ));
    } else {
        rep.push(Clause::not_applicable(
            "1s.comb.valency_two_stabilizer",
            None,
            "every strip has E1-valency 1",
        ));
    }
    Ok(rep)
}
