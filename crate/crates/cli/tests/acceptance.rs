//! The eight acceptance criteria, one pass/fail line each.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use cartdec::cartesian::classify::{classify, classify_observed, compute_fi, ClassLabel};
use cartdec::cartesian::properties::{verify_factorisation_property, verify_isomorphism_property};
use cartdec::cartesian::table::match_row;
use cartdec::cartesian::{decomposition_from_system, quotient_system, verify_system, CartesianSystem};
use cartdec::catalog;
use cartdec::constructions::{construct_2nsim, TwoNsimSpec};
use cartdec::demos;
use cartdec::ggraph::{
    extract_1s, search_bipartite, search_digraphs, search_graphs, GeneralizedDiGraph,
};
use cartdec::oracle;
use cartdec::perm::{Perm, PermGroup};
use cartdec::product::{brute_normalizer_of_strip, normalizer_of_strip, ProductGroup, Strip};
use cartdec::report::{PropertyReport, Status};
use cartdec_cli::commands::{self, all_clauses, Options};
use cartdec_cli::format::resolve;

type Check = Result<String, String>;

fn ensure(ok: bool, what: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what.into())
    }
}

fn demo(name: &str) -> CartesianSystem {
    demos::demo(name).unwrap().unwrap()
}

fn clause(r: &PropertyReport, id: &str) -> Result<Status, String> {
    r.clauses
        .iter()
        .find(|c| c.id == id)
        .map(|c| c.status)
        .ok_or_else(|| format!("clause {id} missing"))
}

fn criterion_1() -> Check {
    let s = demo("a5-2nsim");
    let f = catalog::a5();
    let rep = verify_system(&s).map_err(|e| e.to_string())?;
    ensure(rep.valid, "verify_system rejects {A4, D10}")?;
    ensure(s.instance().m_omega().order().unwrap() == 2, "|M_omega| != 2")?;
    ensure(rep.omega_size == 30 && rep.grid_product == 30 && rep.grid_identity, "|Omega| != 30")?;
    let d = decomposition_from_system(&s).map_err(|e| e.to_string())?;
    let mut sizes: Vec<usize> = d.partitions().iter().map(|p| p.len()).collect();
    sizes.sort_unstable();
    ensure(sizes == [5, 6], format!("partition sizes {sizes:?}"))?;
    let spec = TwoNsimSpec {
        instance: s.instance().clone(),
        a1: f.a.clone(),
        b1: f.b.clone(),
        graph: GeneralizedDiGraph::from_arcs(2, &[(0, 1)]).unwrap(),
        vertex_action: vec![],
        allow_intransitive: true,
    };
    let c = construct_2nsim(&spec).map_err(|e| e.to_string())?;
    ensure(c.system.same_members(&s).unwrap(), "construction differs from the demo")?;
    let cat = oracle::enumerate_interval(s.instance()).map_err(|e| e.to_string())?;
    let found = oracle::enumerate_systems(&cat, 2).map_err(|e| e.to_string())?;
    ensure(
        found.iter().any(|x| x.system.same_members(&s).unwrap()),
        "oracle does not find A5 = A4 D10",
    )?;
    Ok("|Omega| = 30 = 5 x 6, construction and oracle agree".into())
}

fn criterion_2() -> Check {
    let s = demo("a6-2sim");
    let f = catalog::a6();
    let c = classify(&s).map_err(|e| e.to_string())?;
    ensure(c.label == ClassLabel::TwoSim, format!("label {}", c.label.id()))?;
    let fi = compute_fi(&s).map_err(|e| e.to_string())?;
    let (a, b) = (&fi.coordinates[0][0].group, &fi.coordinates[0][1].group);
    let ab = a.intersection(b).unwrap();
    ensure(ab.order().unwrap() == 10, format!("|A n B| = {}", ab.order().unwrap()))?;
    let n = f.t.normalizer(&ab).unwrap();
    ensure(n.same_group(&ab).unwrap(), "A n B is not self-normalizing in T")?;
    let row = match_row(360, a.order().unwrap() as u128, 10).map_err(|e| e.to_string())?;
    ensure(row.row.row == 1, format!("matched row {}", row.row.row))?;
    let iso = verify_isomorphism_property(&s, ClassLabel::TwoSim).map_err(|e| e.to_string())?;
    ensure(clause(&iso, "iso.m_bar_equals_m_omega")? == Status::Pass, "M_bar_omega != M_omega")?;
    ensure(iso.passed(), format!("isomorphism failures {:?}", iso.failures()))?;
    ensure(s.instance().omega_size().unwrap() == 36, "|Omega| != 36")?;
    Ok("2sim, |A n B| = 10 self-normalizing, row 1 (A6 | A5 | D10), |Omega| = 36".into())
}

fn criterion_3() -> Check {
    let s = demo("a6a6-1s");
    let c = classify_observed(&s).map_err(|e| e.to_string())?;
    ensure(c.label == ClassLabel::OneS, format!("label {}", c.label.id()))?;
    let mut strips: Vec<&Strip> = Vec::new();
    for x in &c.strips {
        if !strips.iter().any(|y| y.subgroup().same(x.strip.subgroup()).unwrap()) {
            strips.push(&x.strip);
        }
    }
    ensure(strips.len() == 1, format!("{} involved strips", strips.len()))?;
    ensure(
        strips[0].support().len() == 2 && strips[0].is_full().unwrap(),
        "the strip is not full of support size 2",
    )?;
    let q = quotient_system(&s, ClassLabel::OneS).map_err(|e| e.to_string())?;
    ensure(q.equals_original, "quotient system differs from the original")?;
    let g = extract_1s(&s).map_err(|e| e.to_string())?;
    ensure(
        g.v1.len() == 2 && g.v2.len() == 1 && g.e1.len() == 1 && g.e2.len() == 1,
        "bipartite graph is not 2+1 vertices with one edge of each kind",
    )?;
    let fact = verify_factorisation_property(&s, ClassLabel::OneS).map_err(|e| e.to_string())?;
    for id in ["1s.fact.iv.product", "1s.fact.iv.intersection"] {
        ensure(clause(&fact, id)? == Status::Pass, format!("{id} fails"))?;
    }
    ensure(s.instance().omega_size().unwrap() == 12960, "|Omega| != 12960")?;
    Ok("1S with one full strip on {0, 1}, quotient equal, 2+1 graph, |Omega| = 12960".into())
}

fn criterion_4() -> Check {
    let s = demo("m12-2sim");
    let rep = verify_system(&s).map_err(|e| e.to_string())?;
    ensure(rep.valid, "equations fail for the M11 pair")?;
    ensure(rep.omega_size == 144, format!("|Omega| = {}", rep.omega_size))?;
    let f = catalog::m12();
    let ab = f.a.intersection(&f.b).unwrap();
    ensure(ab.order().unwrap() == 660, format!("|A n B| = {}", ab.order().unwrap()))?;
    let row = match_row(95040, f.a.order().unwrap() as u128, 660).map_err(|e| e.to_string())?;
    ensure(row.row.row == 2, format!("matched row {}", row.row.row))?;
    // experimental: the degree-24 action with the class-fusing automorphism
    let outer = demo("m12-2sim-outer");
    let c = classify(&outer).map_err(|e| e.to_string())?;
    ensure(c.label == ClassLabel::TwoSim, format!("outer action gives {}", c.label.id()))?;
    Ok("equations hold, |Omega| = 144, row 2 (M12 | M11 | PSL(2,11)); outer action gives 2sim".into())
}

fn criterion_5() -> Check {
    fn cyc(d: usize, s: &str) -> PermGroup {
        PermGroup::new(d, vec![Perm::parse(s, d).unwrap()]).unwrap()
    }
    let mut strips = Vec::new();
    let mut add = |pg: &ProductGroup, sup: &[usize], h: &PermGroup, maps: Vec<Perm>| {
        strips.push(Strip::diagonal(pg, sup, h, &maps).unwrap());
    };
    let f = catalog::a5();
    let id = Perm::identity(5);
    let o = f.automorphisms[0].clone();
    let pg = demos::product(&f, 2).unwrap();
    for h in [&f.t, &f.a, &f.b, &f.intersection] {
        add(&pg, &[0, 1], h, vec![id.clone(), id.clone()]);
        add(&pg, &[0, 1], h, vec![id.clone(), o.clone()]);
    }
    add(&pg, &[0, 1], &cyc(5, "(0 1 2 3 4)"), vec![id.clone(), o.clone()]);
    let pg3 = demos::product(&f, 3).unwrap();
    add(&pg3, &[0, 1, 2], &f.t, vec![id.clone(), id.clone(), o.clone()]);
    add(&pg3, &[0, 2], &f.a, vec![id.clone(), id.clone()]);
    add(&pg3, &[1, 2], &f.b, vec![id.clone(), o.clone()]);
    add(&pg3, &[0, 1], &cyc(5, "(0 1 2)"), vec![id.clone(), id.clone()]);
    add(&pg3, &[0, 1, 2], &f.intersection, vec![id.clone(), o, id]);
    let f6 = catalog::a6();
    let id = Perm::identity(10);
    let sw = f6.swapper.clone().unwrap();
    let pg6 = demos::product(&f6, 2).unwrap();
    for h in [&f6.t, &f6.a, &f6.b, &f6.intersection] {
        add(&pg6, &[0, 1], h, vec![id.clone(), id.clone()]);
        add(&pg6, &[0, 1], h, vec![id.clone(), sw.clone()]);
    }
    add(&pg6, &[0, 1], &cyc(10, "(1 6 2 3) (4 7 8 5)"), vec![id.clone(), f6.automorphisms[1].clone()]);
    for (n, x) in strips.iter().enumerate() {
        let formula = normalizer_of_strip(x).map_err(|e| format!("strip {n}: {e}"))?;
        let brute = brute_normalizer_of_strip(x).map_err(|e| format!("strip {n}: {e}"))?;
        ensure(formula.elements().unwrap() == brute.as_slice(), format!("strip {n} differs"))?;
    }
    ensure(strips.len() >= 20, "fewer than 20 strips")?;
    Ok(format!("{} strips in A5^2, A5^3, A6^2 match the brute-force normalizer", strips.len()))
}

fn criterion_6() -> Check {
    let s = demo("a5-2nsim");
    let cat = oracle::enumerate_interval(s.instance()).map_err(|e| e.to_string())?;
    let found = oracle::enumerate_systems(&cat, 4).map_err(|e| e.to_string())?;
    ensure(found.iter().any(|f| f.system.same_members(&s).unwrap()), "{A4, D10} not found")?;
    let systems: Vec<_> = found.iter().map(|f| f.system.clone()).collect();
    let b = oracle::cross_check_bijection(&systems).map_err(|e| e.to_string())?;
    ensure(b.violations.is_empty(), format!("bijection violations {:?}", b.violations))?;
    let a = oracle::predicate_agreement(&cat, cat.len()).map_err(|e| e.to_string())?;
    ensure(a.agreed == a.tested, format!("disagreements on {:?}", a.disagreements))?;
    Ok(format!(
        "{} systems, 0 bijection violations, {}/{} subsets agree",
        found.len(),
        a.agreed,
        a.tested
    ))
}

fn criterion_7() -> Check {
    let a = search_graphs();
    ensure(
        a.found == ["kK2, k=1", "K3", "kK2, k=2", "kK2, k=3"],
        format!("search (a) found {:?}", a.found),
    )?;
    let b = search_digraphs();
    ensure(b.qualifying == 0, format!("search (b) found {:?}", b.found))?;
    let c = search_bipartite();
    ensure(c.qualifying == 0, format!("search (c) found {:?}", c.found))?;
    Ok(format!(
        "(a) {} graphs -> K3, kK2 k<=3; (b) {} and (c) {} candidates, none qualifying",
        a.examined, b.examined, c.examined
    ))
}

fn criterion_8() -> Check {
    let opts = Options::default();
    let mut total = 0;
    for name in demos::DEMO_NAMES {
        let file = cartdec_cli::demos::demo_file(name).unwrap();
        let l = resolve(file, None).map_err(|e| e.to_string())?;
        let o = commands::finish("properties", commands::properties(&l, &opts));
        if let Some(e) = o.report.get("error") {
            return Err(format!("{name}: {e}"));
        }
        let label = o.report["label"].as_str().unwrap_or("").to_string();
        let clauses = all_clauses(&o.report);
        for (id, st) in &clauses {
            ensure(*st != Status::Fail, format!("{name}: clause {id} fails"))?;
        }
        let suites: Vec<&str> = o.report["suites"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s["suite"].as_str().unwrap())
            .collect();
        if matches!(label.as_str(), "2sim" | "2nsim" | "1S") {
            for want in ["factorisation", "quotient", "combinatorial"] {
                ensure(
                    suites.iter().any(|s| s.contains(want)),
                    format!("{name}: no {want} suite in {suites:?}"),
                )?;
            }
        }
        ensure(o.exit == 0, format!("{name}: exit {}", o.exit))?;
        total += clauses.len();
    }
    Ok(format!("{} demos, {total} clauses, none failing", demos::DEMO_NAMES.len()))
}

fn main() {
    let criteria: [(u8, fn() -> Check, Duration); 8] = [
        (1, criterion_1, Duration::from_secs(5)),
        (2, criterion_2, Duration::from_secs(10)),
        (3, criterion_3, Duration::from_secs(60)),
        (4, criterion_4, Duration::from_secs(120)),
        (5, criterion_5, Duration::from_secs(60)),
        (6, criterion_6, Duration::from_secs(120)),
        (7, criterion_7, Duration::from_secs(60)),
        (8, criterion_8, Duration::from_secs(600)),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failures = 0;
    for (n, f, limit) in criteria {
        let start = Instant::now();
        let r = panic::catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        let r = match r {
            Ok(m) if t > limit => Err(format!("{m}; took {t:.2?}, limit {limit:?}")),
            other => other,
        };
        match r {
            Ok(m) => println!("criterion {n}: PASS ({:.2}s) {m}", t.as_secs_f64()),
            Err(m) => {
                failures += 1;
                println!("criterion {n}: FAIL ({:.2}s) {m}", t.as_secs_f64());
            }
        }
    }
    if failures > 0 {
        std::process::exit(1);
    }
}
