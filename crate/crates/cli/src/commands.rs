//! The subcommands as functions from parsed input to a report.
//!
//! Exit codes: 0 success, 1 a check failed or the library refused the
//! request (the report says why), 2 the input could not be read, parsed or
//! resolved, or exceeds a cap.

use cartdec::cartesian::properties::{verify_factorisation_property, verify_isomorphism_property, verify_quotient_property};
use cartdec::cartesian::{
    classify_observed, decomposition_from_system, is_g_invariant, is_transitive, quotient_system,
    system_from_decomposition, verify_system, CartesianError, CartesianSystem, ClassLabel, Classification,
};
use cartdec::constructions::{construct_1s, construct_2nsim, construct_2sim, Construction, ConstructionError};
use cartdec::ggraph::{extract_1s, extract_2nsim, extract_2sim, verify_combinatorial_property, GraphError};
use cartdec::oracle::{self, OracleError};
use cartdec::perm::GroupError;
use cartdec::product::ProductError;
use cartdec::report::{Clause, PropertyReport, Status};
use serde::Serialize;
use serde_json::{json, Value};

use crate::demos;
use crate::format::{construction_spec, file_for, InputError, Loaded, SpecRequest};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CheckLevel {
    Fast,
    Full,
}

#[derive(Clone, Copy, Debug)]
pub struct Options {
    pub max_len: usize,
    pub element_cap: Option<usize>,
    pub check_level: CheckLevel,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            max_len: 4,
            element_cap: None,
            check_level: CheckLevel::Full,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit: u8,
    pub report: Value,
}

impl Outcome {
    pub fn json(&self) -> String {
        serde_json::to_string_pretty(&self.report).expect("reports serialize")
    }

    /// Human-readable rendering of the report.
    pub fn text(&self) -> String {
        render(&self.report)
    }
}

pub fn input_failure(command: &str, e: &InputError) -> Outcome {
    Outcome {
        exit: 2,
        report: json!({
            "command": command,
            "error": {"kind": "input", "path": e.path, "message": e.message},
        }),
    }
}

fn group_cap(e: &GroupError) -> bool {
    matches!(e, GroupError::CapExceeded { .. })
}

fn cartesian_cap(e: &CartesianError) -> bool {
    match e {
        CartesianError::PointCapExceeded { .. } => true,
        CartesianError::Product(ProductError::Group(g)) => group_cap(g),
        _ => false,
    }
}

/// Library errors: caps exit 2, everything else 1.
#[derive(Debug)]
pub enum Failure {
    Input(InputError),
    Library { cap: bool, message: String, clause: Option<String> },
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e)
    }
}

impl From<CartesianError> for Failure {
    fn from(e: CartesianError) -> Self {
        Failure::Library {
            cap: cartesian_cap(&e),
            message: e.to_string(),
            clause: None,
        }
    }
}

impl From<ProductError> for Failure {
    fn from(e: ProductError) -> Self {
        CartesianError::from(e).into()
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::Cartesian(c) => c.into(),
            other => Failure::Library {
                cap: false,
                message: other.to_string(),
                clause: None,
            },
        }
    }
}

impl From<ConstructionError> for Failure {
    fn from(e: ConstructionError) -> Self {
        match e {
            ConstructionError::Cartesian(c) => c.into(),
            ConstructionError::Graph(g) => g.into(),
            ConstructionError::SpecViolation { ref clause, .. } | ConstructionError::PostconditionFailed { ref clause, .. } => {
                Failure::Library {
                    cap: false,
                    clause: Some(clause.clone()),
                    message: e.to_string(),
                }
            }
            other => Failure::Library {
                cap: false,
                message: other.to_string(),
                clause: None,
            },
        }
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::Cartesian(c) => c.into(),
            cap @ OracleError::CapExceeded { .. } => Failure::Library {
                cap: true,
                message: cap.to_string(),
                clause: None,
            },
        }
    }
}

type Res = Result<Outcome, Failure>;

pub fn finish(command: &str, r: Res) -> Outcome {
    match r {
        Ok(o) => o,
        Err(Failure::Input(e)) => input_failure(command, &e),
        Err(Failure::Library { cap, message, clause }) => {
            let mut err = json!({"kind": if cap { "cap" } else { "library" }, "message": message});
            if let Some(c) = clause {
                err["clause"] = json!(c);
            }
            Outcome {
                exit: if cap { 2 } else { 1 },
                report: json!({"command": command, "error": err}),
            }
        }
    }
}

fn system_of(l: &Loaded) -> Result<&CartesianSystem, Failure> {
    l.system.as_ref().ok_or_else(|| {
        Failure::Input(InputError {
            path: "$.system_members".into(),
            message: "missing".into(),
        })
    })
}

/// Ids of every clause in the suites, first occurrence order.
fn checked(suites: &[PropertyReport]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in suites {
        for c in &s.clauses {
            if !out.contains(&c.id) {
                out.push(c.id.clone());
            }
        }
    }
    out
}

fn failed(suites: &[PropertyReport]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for s in suites {
        for c in s.failures() {
            if !out.contains(&c.id) {
                out.push(c.id.clone());
            }
        }
    }
    out
}

fn outcome(command: &str, mut body: Value, suites: Vec<PropertyReport>) -> Outcome {
    let failures = failed(&suites);
    body["command"] = json!(command);
    body["checked"] = json!(checked(&suites));
    body["failed"] = json!(failures);
    body["suites"] = json!(suites);
    body["passed"] = json!(failures.is_empty());
    Outcome {
        exit: if failures.is_empty() { 0 } else { 1 },
        report: body,
    }
}

fn equations(s: &CartesianSystem) -> Result<(bool, PropertyReport, Value), Failure> {
    let rep = verify_system(s)?;
    Ok((rep.valid, rep.clauses(), json!(rep)))
}

pub fn verify(l: &Loaded, opts: &Options) -> Res {
    let s = system_of(l)?;
    let (valid, eq, raw) = equations(s)?;
    let mut suites = vec![eq];
    let mut body = json!({"valid": valid, "omega_size": raw["omega_size"].clone(), "system": raw});
    if valid {
        let inv = is_g_invariant(s)?;
        body["invariant"] = json!(inv);
        body["transitive"] = json!(inv && is_transitive(s)?);
        if opts.check_level == CheckLevel::Full {
            let mut rt = PropertyReport::new("decomposition");
            let d = decomposition_from_system(s)?;
            let check = d.check()?;
            rt.push(Clause::new(
                "decomp.valid",
                None,
                check.valid,
                format!("block counts {:?}", check.block_counts),
            ));
            let back = system_from_decomposition(&d)?;
            rt.push(Clause::new(
                "decomp.round_trip",
                None,
                back.same_members(s)?,
                "system -> decomposition -> system",
            ));
            suites.push(rt);
        }
    }
    Ok(outcome("verify", body, suites))
}

fn classification_json(c: &Classification) -> Value {
    json!({
        "label": c.label,
        "invariant": c.invariant,
        "transitive": c.transitive,
        "fi": c.fi,
        "strips": c.strips,
        "pair": c.pair,
    })
}

fn structure_suite(c: &Classification) -> PropertyReport {
    let mut r = PropertyReport::new("structure");
    r.clauses = c.structure.clone();
    r
}

/// Equations first; `Err(outcome)` when they fail.
fn valid_system<'a>(command: &str, l: &'a Loaded) -> Result<Result<&'a CartesianSystem, Outcome>, Failure> {
    let s = system_of(l)?;
    let (valid, eq, raw) = equations(s)?;
    if valid {
        Ok(Ok(s))
    } else {
        Ok(Err(outcome(command, json!({"valid": false, "system": raw}), vec![eq])))
    }
}

pub fn classify(l: &Loaded, _opts: &Options) -> Res {
    let s = match valid_system("classify", l)? {
        Ok(s) => s,
        Err(o) => return Ok(o),
    };
    let c = classify_observed(s)?;
    let mut body = classification_json(&c);
    body["omega_size"] = json!(s.instance().omega_size()?);
    Ok(outcome("classify", body, vec![structure_suite(&c)]))
}

fn needs_pair_or_strip(label: ClassLabel) -> bool {
    matches!(label, ClassLabel::TwoSim | ClassLabel::TwoNsim | ClassLabel::OneS)
}

pub fn quotient(l: &Loaded, _opts: &Options) -> Res {
    let s = match valid_system("quotient", l)? {
        Ok(s) => s,
        Err(o) => return Ok(o),
    };
    let label = classify_observed(s)?.label;
    let q = quotient_system(s, label)?;
    let suite = verify_quotient_property(s, label)?;
    let body = json!({"label": label, "quotient": q.summary()?});
    Ok(outcome("quotient", body, vec![suite]))
}

pub fn properties(l: &Loaded, opts: &Options) -> Res {
    let s = match valid_system("properties", l)? {
        Ok(s) => s,
        Err(o) => return Ok(o),
    };
    let c = classify_observed(s)?;
    let label = c.label;
    let mut suites = vec![structure_suite(&c)];
    if needs_pair_or_strip(label) {
        suites.push(verify_factorisation_property(s, label)?);
        suites.push(verify_quotient_property(s, label)?);
        if opts.check_level == CheckLevel::Full {
            suites.push(verify_combinatorial_property(s, label)?);
            if matches!(label, ClassLabel::TwoSim | ClassLabel::OneS) {
                match verify_isomorphism_property(s, label) {
                    Ok(r) => suites.push(r),
                    Err(CartesianError::UnsupportedRow(m)) => {
                        let mut r = PropertyReport::new(&format!("{}.isomorphism", label.id()));
                        r.push(Clause::not_applicable("iso.row", None, format!("unsupported row: {m}")));
                        suites.push(r);
                    }
                    Err(e) => return Err(e.into()),
                }
            }
        }
    }
    let body = json!({"label": label, "invariant": c.invariant, "transitive": c.transitive});
    Ok(outcome("properties", body, suites))
}

pub fn extract_graph(l: &Loaded, _opts: &Options) -> Res {
    let s = match valid_system("extract-graph", l)? {
        Ok(s) => s,
        Err(o) => return Ok(o),
    };
    let label = classify_observed(s)?.label;
    let graph = match label {
        ClassLabel::TwoSim => json!({"kind": "graph", "graph": extract_2sim(s)?}),
        ClassLabel::TwoNsim => json!({"kind": "digraph", "graph": extract_2nsim(s)?}),
        ClassLabel::OneS => json!({"kind": "bipartite", "graph": extract_1s(s)?}),
        other => {
            return Err(Failure::Library {
                cap: false,
                message: format!("class {} has no associated graph", other.id()),
                clause: None,
            })
        }
    };
    let mut body = graph;
    body["label"] = json!(label);
    Ok(outcome("extract-graph", body, Vec::new()))
}

pub fn construct(kind: &str, l: &Loaded, _opts: &Options) -> Res {
    let c: Construction = match construction_spec(l, kind)? {
        SpecRequest::TwoSim(spec) => construct_2sim(&spec)?,
        SpecRequest::TwoNsim(spec) => construct_2nsim(&spec)?,
        SpecRequest::OneS(spec) => construct_1s(&spec)?,
    };
    let mut file = file_for(&c.system, &[], l.file.assume_simple);
    file.t_automorphisms = l.file.t_automorphisms.clone();
    file.experimental = l.file.experimental;
    let mut body = json!({
        "kind": kind,
        "omega_size": c.system.instance().omega_size()?,
        "representatives": c.representatives,
        "instance": serde_json::to_value(&file).expect("instance files serialize"),
    });
    if let Some(given) = &l.system {
        body["matches_input_system"] = json!(given.same_members(&c.system)?);
    }
    Ok(outcome("construct", body, vec![c.spec_report, c.post_report]))
}

pub fn run_oracle(l: &Loaded, opts: &Options) -> Res {
    let cat = oracle::enumerate_interval(&l.instance)?;
    let pg = &l.product;
    let interval: Vec<Value> = cat
        .subgroups
        .iter()
        .zip(cat.orders())
        .enumerate()
        .map(|(i, (h, order))| {
            let gens: Vec<Vec<String>> = h
                .canonical_generators()
                .unwrap_or_else(|_| h.generators().to_vec())
                .iter()
                .map(|g| pg.coordinates(g).iter().map(|c| c.to_cycle_string()).collect())
                .collect();
            json!({"index": i, "order": order, "generators": gens})
        })
        .collect();
    let found = oracle::enumerate_systems(&cat, opts.max_len)?;
    let agreement = oracle::predicate_agreement(&cat, opts.max_len)?;
    let systems: Vec<CartesianSystem> = found.iter().map(|f| f.system.clone()).collect();
    let bijection = oracle::cross_check_bijection(&systems)?;
    let mut suite = PropertyReport::new("oracle");
    suite.push(Clause::new(
        "oracle.agreement",
        None,
        agreement.disagreements.is_empty(),
        format!("{} of {} subsets agree", agreement.agreed, agreement.tested),
    ));
    suite.push(Clause::new(
        "oracle.bijection",
        None,
        bijection.violations.is_empty(),
        format!("{} systems, {} violations", bijection.systems, bijection.violations.len()),
    ));
    let mut body = json!({
        "max_len": opts.max_len,
        "interval": interval,
        "systems": found,
        "agreement": agreement,
        "bijection": bijection,
    });
    if let Some(given) = &l.system {
        let mut at = None;
        for (i, s) in systems.iter().enumerate() {
            if s.same_members(given)? {
                at = Some(i);
            }
        }
        body["input_system_index"] = json!(at);
    }
    Ok(outcome("oracle", body, vec![suite]))
}

pub fn demo(name: &str) -> Outcome {
    match demos::demo_file(name) {
        Some(f) => Outcome {
            exit: 0,
            report: serde_json::to_value(&f).expect("instance files serialize"),
        },
        None => input_failure(
            "demo",
            &InputError {
                path: "name".into(),
                message: format!("unknown demo {name}; known: {}", demos::NAMES.join(", ")),
            },
        ),
    }
}

fn render_suite(out: &mut String, s: &Value) {
    out.push_str(&format!("suite {}\n", s["suite"].as_str().unwrap_or("?")));
    for c in s["clauses"].as_array().into_iter().flatten() {
        let tag = match c["status"].as_str() {
            Some("Pass") => "PASS",
            Some("Fail") => "FAIL",
            _ => "N/A ",
        };
        let coord = c.get("coordinate").and_then(Value::as_u64).map(|i| format!(" [{i}]")).unwrap_or_default();
        out.push_str(&format!(
            "  {tag} {}{coord}: {}\n",
            c["id"].as_str().unwrap_or("?"),
            c["detail"].as_str().unwrap_or("")
        ));
    }
}

fn render(report: &Value) -> String {
    let mut out = String::new();
    let command = report["command"].as_str().unwrap_or("");
    if command.is_empty() {
        // instance files from `demo` are their own rendering
        return serde_json::to_string_pretty(report).expect("reports serialize") + "\n";
    }
    out.push_str(&format!("{command}\n"));
    if let Some(e) = report.get("error") {
        out.push_str(&format!("error ({}): ", e["kind"].as_str().unwrap_or("?")));
        if let Some(p) = e.get("path").and_then(Value::as_str) {
            out.push_str(&format!("{p}: "));
        }
        out.push_str(e["message"].as_str().unwrap_or(""));
        out.push('\n');
        return out;
    }
    for key in ["label", "valid", "invariant", "transitive", "omega_size", "kind"] {
        if let Some(v) = report.get(key) {
            out.push_str(&format!("{key}: {v}\n"));
        }
    }
    if let Some(q) = report.get("quotient") {
        out.push_str(&format!("quotient: {q}\n"));
    }
    if let Some(g) = report.get("graph") {
        out.push_str(&format!("graph: {g}\n"));
    }
    if let Some(ss) = report.get("systems").and_then(Value::as_array) {
        out.push_str(&format!("interval: {} subgroups\n", report["interval"].as_array().map_or(0, Vec::len)));
        for s in ss {
            out.push_str(&format!(
                "system {} orders {} label {} invariant {} transitive {}\n",
                s["members"], s["orders"], s["label"], s["invariant"], s["transitive"]
            ));
        }
    }
    for s in report["suites"].as_array().into_iter().flatten() {
        render_suite(&mut out, s);
    }
    let failed = report["failed"].as_array().map_or(0, Vec::len);
    out.push_str(if failed == 0 { "result: pass\n" } else { "result: FAIL\n" });
    out
}

/// Every clause id in the report with its status.
pub fn all_clauses(report: &Value) -> Vec<(String, Status)> {
    let mut out = Vec::new();
    for s in report["suites"].as_array().into_iter().flatten() {
        for c in s["clauses"].as_array().into_iter().flatten() {
            let st = match c["status"].as_str() {
                Some("Pass") => Status::Pass,
                Some("Fail") => Status::Fail,
                _ => Status::NotApplicable,
            };
            out.push((c["id"].as_str().unwrap_or("").to_string(), st));
        }
    }
    out
}
