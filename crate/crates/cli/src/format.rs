//! The JSON instance file and its conversion to library objects.

use cartdec::cartesian::{CartesianSystem, PointedInstance};
use cartdec::constructions::{OneSSpec, TwoNsimSpec, TwoSimSpec};
use cartdec::ggraph::{BipartiteLabeledGraph, GeneralizedDiGraph, GeneralizedGraph};
use cartdec::perm::{Perm, PermGroup, DEFAULT_ELEMENT_CAP};
use cartdec::product::{GOmegaAction, ProductGroup, ProductOptions, ProductSubgroup};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// A problem with the input, located by a JSON path such as
/// `$.m_omega_generators[0][1]`.
#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("{path}: {message}")]
pub struct InputError {
    pub path: String,
    pub message: String,
}

fn input_err(path: impl Into<String>, message: impl ToString) -> InputError {
    InputError {
        path: path.into(),
        message: message.to_string(),
    }
}

fn is_false(b: &bool) -> bool {
    !*b
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ActionFile {
    pub coord_perm: String,
    pub twists: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct DiGraphFile {
    pub vertices: usize,
    pub arcs: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BipartiteFile {
    pub v1: Vec<String>,
    pub v2: Vec<String>,
    pub e1: Vec<[usize; 2]>,
    pub e2: Vec<[usize; 2]>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ConstructionSpecFile {
    /// `2sim`, `2nsim` or `1s`.
    pub kind: String,
    /// Generators of `A1` and `B1` as permutations of the `t_degree` points.
    pub a1: Vec<String>,
    pub b1: Vec<String>,
    /// `2sim` only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a_vertex: Option<usize>,
    /// `1s` only: generators of the strip `X1` as `k`-tuples.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x1: Option<Vec<Vec<String>>>,
    /// One vertex permutation per entry of `g_omega_generators`.
    #[serde(default)]
    pub vertex_action: Vec<Vec<usize>>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub allow_intransitive: bool,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub t_generators: Vec<String>,
    pub t_degree: usize,
    pub k: usize,
    /// Permutations of the `t_degree` points normalizing `T`, used to
    /// recognise strip isomorphisms.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub t_automorphisms: Vec<String>,
    #[serde(default, skip_serializing_if = "is_false")]
    pub assume_simple: bool,
    #[serde(default, skip_serializing_if = "is_false")]
    pub experimental: bool,
    pub m_omega_generators: Vec<Vec<String>>,
    #[serde(default)]
    pub g_omega_generators: Vec<ActionFile>,
    /// Each member is a list of generators, each a `k`-tuple.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system_members: Option<Vec<Vec<Vec<String>>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub digraph: Option<DiGraphFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bipartite: Option<BipartiteFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub construction_spec: Option<ConstructionSpecFile>,
}

impl InstanceFile {
    pub fn parse(text: &str) -> Result<InstanceFile, InputError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let path = if path == "." { "$".to_string() } else { format!("$.{path}") };
            input_err(path, e.into_inner())
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files serialize")
    }
}

/// An instance file resolved against the library.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: InstanceFile,
    pub product: ProductGroup,
    pub instance: PointedInstance,
    pub system: Option<CartesianSystem>,
}

fn perm(text: &str, degree: usize, path: &str) -> Result<Perm, InputError> {
    Perm::parse(text, degree).map_err(|e| input_err(path, e))
}

fn tuple(pg: &ProductGroup, parts: &[String], path: &str) -> Result<Perm, InputError> {
    if parts.len() != pg.k() {
        return Err(input_err(path, format!("expected {} coordinates, found {}", pg.k(), parts.len())));
    }
    let coords = parts
        .iter()
        .enumerate()
        .map(|(i, s)| perm(s, pg.d(), &format!("{path}[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    for (i, c) in coords.iter().enumerate() {
        if !pg.t().contains(c).map_err(|e| input_err(path, e))? {
            return Err(input_err(format!("{path}[{i}]"), format!("{c} is not in T")));
        }
    }
    Ok(pg.embed(&coords))
}

fn subgroup_of_m(pg: &ProductGroup, gens: &[Vec<String>], path: &str) -> Result<ProductSubgroup, InputError> {
    let perms = gens
        .iter()
        .enumerate()
        .map(|(j, g)| tuple(pg, g, &format!("{path}[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    pg.subgroup(perms).map_err(|e| input_err(path, e))
}

fn group_of_t(pg: &ProductGroup, gens: &[String], path: &str) -> Result<PermGroup, InputError> {
    let perms = gens
        .iter()
        .enumerate()
        .map(|(j, g)| perm(g, pg.d(), &format!("{path}[{j}]")))
        .collect::<Result<Vec<_>, _>>()?;
    for (j, g) in perms.iter().enumerate() {
        if !pg.t().contains(g).map_err(|e| input_err(path, e))? {
            return Err(input_err(format!("{path}[{j}]"), format!("{g} is not in T")));
        }
    }
    PermGroup::with_cap(pg.d(), perms, pg.cap()).map_err(|e| input_err(path, e))
}

pub fn load(text: &str, element_cap: Option<usize>) -> Result<Loaded, InputError> {
    resolve(InstanceFile::parse(text)?, element_cap)
}

pub fn resolve(file: InstanceFile, element_cap: Option<usize>) -> Result<Loaded, InputError> {
    let cap = element_cap.unwrap_or(DEFAULT_ELEMENT_CAP);
    let d = file.t_degree;
    if d == 0 {
        return Err(input_err("$.t_degree", "must be positive"));
    }
    if file.k == 0 {
        return Err(input_err("$.k", "must be positive"));
    }
    let t_gens = file
        .t_generators
        .iter()
        .enumerate()
        .map(|(i, s)| perm(s, d, &format!("$.t_generators[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let t = PermGroup::with_cap(d, t_gens, cap).map_err(|e| input_err("$.t_generators", e))?;
    let automorphisms = file
        .t_automorphisms
        .iter()
        .enumerate()
        .map(|(i, s)| perm(s, d, &format!("$.t_automorphisms[{i}]")))
        .collect::<Result<Vec<_>, _>>()?;
    let pg = ProductGroup::with_options(
        t,
        file.k,
        ProductOptions {
            assume_simple: file.assume_simple,
            automorphisms,
            cap,
        },
    )
    .map_err(|e| input_err("$.t_generators", e))?;
    let m_omega = subgroup_of_m(&pg, &file.m_omega_generators, "$.m_omega_generators")?;
    let mut actions = Vec::new();
    for (i, a) in file.g_omega_generators.iter().enumerate() {
        let path = format!("$.g_omega_generators[{i}]");
        let coord = perm(&a.coord_perm, file.k, &format!("{path}.coord_perm"))?;
        let twists = a
            .twists
            .iter()
            .enumerate()
            .map(|(j, s)| perm(s, d, &format!("{path}.twists[{j}]")))
            .collect::<Result<Vec<_>, _>>()?;
        actions.push(GOmegaAction::new(&pg, coord, twists).map_err(|e| input_err(&path, e))?);
    }
    let instance = PointedInstance::new(pg.clone(), m_omega, actions).map_err(|e| input_err("$", e))?;
    let system = match &file.system_members {
        None => None,
        Some(members) => {
            let ks = members
                .iter()
                .enumerate()
                .map(|(i, gens)| subgroup_of_m(&pg, gens, &format!("$.system_members[{i}]")))
                .collect::<Result<Vec<_>, _>>()?;
            Some(CartesianSystem::new(instance.clone(), ks).map_err(|e| input_err("$.system_members", e))?)
        }
    };
    Ok(Loaded {
        file,
        product: pg,
        instance,
        system,
    })
}

/// A construction request resolved from `construction_spec` and the graph
/// block matching its kind.
#[derive(Clone, Debug)]
pub enum SpecRequest {
    TwoSim(TwoSimSpec),
    TwoNsim(TwoNsimSpec),
    OneS(OneSSpec),
}

pub fn construction_spec(l: &Loaded, kind: &str) -> Result<SpecRequest, InputError> {
    let spec = l
        .file
        .construction_spec
        .as_ref()
        .ok_or_else(|| input_err("$.construction_spec", "missing"))?;
    if spec.kind != kind {
        return Err(input_err(
            "$.construction_spec.kind",
            format!("the file describes a {} construction, not {kind}", spec.kind),
        ));
    }
    let a1 = group_of_t(&l.product, &spec.a1, "$.construction_spec.a1")?;
    let b1 = group_of_t(&l.product, &spec.b1, "$.construction_spec.b1")?;
    let pairs = |v: &[[usize; 2]]| v.iter().map(|&[a, b]| (a, b)).collect::<Vec<_>>();
    let instance = l.instance.clone();
    let vertex_action = spec.vertex_action.clone();
    let allow_intransitive = spec.allow_intransitive;
    Ok(match kind {
        "2sim" => {
            let g = l.file.graph.as_ref().ok_or_else(|| input_err("$.graph", "missing"))?;
            let graph = GeneralizedGraph::from_edges(g.vertices, &pairs(&g.edges)).map_err(|e| input_err("$.graph", e))?;
            SpecRequest::TwoSim(TwoSimSpec {
                instance,
                a1,
                b1,
                graph,
                a_vertex: spec
                    .a_vertex
                    .ok_or_else(|| input_err("$.construction_spec.a_vertex", "missing"))?,
                vertex_action,
                allow_intransitive,
            })
        }
        "2nsim" => {
            let g = l.file.digraph.as_ref().ok_or_else(|| input_err("$.digraph", "missing"))?;
            let graph = GeneralizedDiGraph::from_arcs(g.vertices, &pairs(&g.arcs)).map_err(|e| input_err("$.digraph", e))?;
            SpecRequest::TwoNsim(TwoNsimSpec {
                instance,
                a1,
                b1,
                graph,
                vertex_action,
                allow_intransitive,
            })
        }
        "1s" => {
            let g = l.file.bipartite.as_ref().ok_or_else(|| input_err("$.bipartite", "missing"))?;
            let graph = BipartiteLabeledGraph::new(g.v1.clone(), g.v2.clone(), pairs(&g.e1), pairs(&g.e2))
                .map_err(|e| input_err("$.bipartite", e))?;
            let x1 = spec.x1.as_ref().ok_or_else(|| input_err("$.construction_spec.x1", "missing"))?;
            let x1 = subgroup_of_m(&l.product, x1, "$.construction_spec.x1")?;
            SpecRequest::OneS(OneSSpec {
                instance,
                x1,
                a1,
                b1,
                graph,
                vertex_action,
                allow_intransitive,
            })
        }
        other => return Err(input_err("$.construction_spec.kind", format!("unknown kind {other}"))),
    })
}

fn strings(ps: &[Perm]) -> Vec<String> {
    ps.iter().map(Perm::to_cycle_string).collect()
}

fn tuples(pg: &ProductGroup, gens: &[Perm]) -> Vec<Vec<String>> {
    gens.iter().map(|g| strings(&pg.coordinates(g))).collect()
}

/// The instance file describing `s`; members are written with their
/// canonical generators.
pub fn file_for(s: &CartesianSystem, automorphisms: &[Perm], assume_simple: bool) -> InstanceFile {
    let inst = s.instance();
    let pg = inst.m();
    let members = s
        .members()
        .iter()
        .map(|k| tuples(pg, &k.canonical_generators().unwrap_or_else(|_| k.generators().to_vec())))
        .collect();
    InstanceFile {
        t_generators: strings(pg.t().generators()),
        t_degree: pg.d(),
        k: pg.k(),
        t_automorphisms: strings(automorphisms),
        assume_simple,
        experimental: false,
        m_omega_generators: tuples(pg, inst.m_omega().generators()),
        g_omega_generators: inst
            .actions()
            .iter()
            .map(|a| ActionFile {
                coord_perm: a.coord_perm.to_cycle_string(),
                twists: strings(&a.twists),
            })
            .collect(),
        system_members: Some(members),
        graph: None,
        digraph: None,
        bipartite: None,
        construction_spec: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const A5: &str = r#"{
        "t_generators": ["(0 1 2 3 4)", "(0 1 2)"],
        "t_degree": 5,
        "k": 1,
        "m_omega_generators": [["(0 3) (1 2)"]],
        "system_members": [[["(0 1 2)"], ["(0 1) (2 3)"]], [["(0 1 2 3 4)"], ["(1 4) (2 3)"]]]
    }"#;

    #[test]
    fn loads_the_a5_pair() {
        let l = load(A5, None).unwrap();
        assert_eq!(l.instance.omega_size().unwrap(), 30);
        assert_eq!(l.system.unwrap().len(), 2);
    }

    #[test]
    fn errors_carry_json_paths() {
        let bad = A5.replace("[[\"(0 3) (1 2)\"]]", "[[\"(0 3) (1 5)\"]]");
        assert_eq!(load(&bad, None).unwrap_err().path, "$.m_omega_generators[0][0]");
        let bad = A5.replace("[\"(0 1 2 3 4)\"], [\"(1 4)", "[\"(0 1 2 3 4)\", \"()\"], [\"(1 4)");
        assert_eq!(load(&bad, None).unwrap_err().path, "$.system_members[1][0]");
        let bad = A5.replace("\"k\": 1", "\"k\": \"one\"");
        assert_eq!(load(&bad, None).unwrap_err().path, "$.k");
        let bad = A5.replace("\"t_degree\": 5,", "\"t_degree\": 5, \"extra\": 1,");
        assert!(load(&bad, None).unwrap_err().message.contains("extra"));
        let bad = A5.replace("(0 1 2)\"], [\"(0 1) (2 3)", "(0 1)\"], [\"(0 1) (2 3)");
        assert_eq!(load(&bad, None).unwrap_err().path, "$.system_members[0][0][0]");
    }

    #[test]
    fn files_round_trip() {
        let l = load(A5, None).unwrap();
        let f = file_for(l.system.as_ref().unwrap(), &[], false);
        let again = load(&f.to_json(), None).unwrap();
        assert!(again.system.unwrap().same_members(l.system.as_ref().unwrap()).unwrap());
        assert_eq!(InstanceFile::parse(&f.to_json()).unwrap(), f);
    }
}
