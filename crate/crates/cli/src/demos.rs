//! Bundled demo instances as instance files.

use cartdec::catalog::{self, Factorisation};
use cartdec::demos;
use cartdec::perm::Perm;

use crate::format::{file_for, BipartiteFile, ConstructionSpecFile, DiGraphFile, GraphFile, InstanceFile};

pub const NAMES: [&str; 9] = demos::DEMO_NAMES;

fn factorisation(name: &str) -> Factorisation {
    match name {
        n if n.starts_with("a5") => catalog::a5(),
        n if n.starts_with("a6") => catalog::a6(),
        "m12-2sim" => catalog::m12(),
        _ => catalog::m12_outer(),
    }
}

fn gens(f: &Factorisation, which: char) -> Vec<String> {
    let g = if which == 'a' { &f.a } else { &f.b };
    g.generators().iter().map(Perm::to_cycle_string).collect()
}

fn spec(f: &Factorisation, kind: &str, action: Vec<Vec<usize>>, intransitive: bool) -> ConstructionSpecFile {
    ConstructionSpecFile {
        kind: kind.to_string(),
        a1: gens(f, 'a'),
        b1: gens(f, 'b'),
        a_vertex: (kind == "2sim").then_some(0),
        x1: None,
        vertex_action: action,
        allow_intransitive: intransitive,
    }
}

/// The demo as an instance file, with a construction request when the demo
/// comes from one of the constructions.
pub fn demo_file(name: &str) -> Option<InstanceFile> {
    let s = demos::demo(name)?.expect("bundled demos are valid");
    let f = factorisation(name);
    let mut file = file_for(&s, &f.automorphisms, f.assume_simple);
    file.experimental = name == "m12-2sim-outer";
    let graph = |n: usize, e: &[[usize; 2]]| GraphFile {
        vertices: n,
        edges: e.to_vec(),
    };
    let digraph = |n: usize, e: &[[usize; 2]]| DiGraphFile {
        vertices: n,
        arcs: e.to_vec(),
    };
    match name {
        "a5-2nsim" => {
            file.digraph = Some(digraph(2, &[[0, 1]]));
            file.construction_spec = Some(spec(&f, "2nsim", vec![], true));
        }
        "a5a5-2nsim" => {
            file.digraph = Some(digraph(2, &[[0, 1], [1, 0]]));
            file.construction_spec = Some(spec(&f, "2nsim", vec![vec![1, 0]], false));
        }
        "a6-2sim" => {
            file.graph = Some(graph(2, &[[0, 1]]));
            file.construction_spec = Some(spec(&f, "2sim", vec![vec![1, 0]], false));
        }
        "a6a6-2sim" => {
            file.graph = Some(graph(4, &[[0, 1], [2, 3]]));
            file.construction_spec = Some(spec(&f, "2sim", vec![vec![1, 0, 2, 3], vec![2, 3, 0, 1]], false));
        }
        "a6a6-1s" | "a6a6-1s-valency2" => {
            let v = |n: usize| (0..n).map(|i| format!("v{i}")).collect::<Vec<_>>();
            let (bip, action) = if name == "a6a6-1s" {
                (
                    BipartiteFile {
                        v1: v(2),
                        v2: v(1),
                        e1: vec![[1, 0]],
                        e2: vec![[0, 0]],
                    },
                    vec![vec![0, 1]],
                )
            } else {
                (
                    BipartiteFile {
                        v1: v(3),
                        v2: v(1),
                        e1: vec![[0, 0], [2, 0]],
                        e2: vec![[1, 0]],
                    },
                    vec![vec![2, 1, 0]],
                )
            };
            file.bipartite = Some(bip);
            let mut sp = spec(&f, "1s", action, true);
            sp.x1 = Some(
                f.t.generators()
                    .iter()
                    .map(|t| vec![t.to_cycle_string(), t.to_cycle_string()])
                    .collect(),
            );
            file.construction_spec = Some(sp);
        }
        _ => {}
    }
    Some(file)
}
