//! The sets `𝓕ᵢ` of proper projections, involved strips, and the six-way
//! class split.

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use super::{is_g_invariant, is_transitive, CartesianError, CartesianSystem};
use crate::perm::{Perm, PermGroup};
use crate::product::{strip_components, GOmegaGroup, ProductGroup, ProductSubgroup, Strip};
use crate::report::Clause;

/// One proper projection at a coordinate, with the members projecting onto it.
#[derive(Clone, Debug, Serialize)]
pub struct FiEntry {
    #[serde(skip)]
    pub group: PermGroup,
    pub generators: Vec<String>,
    pub order: usize,
    pub witnesses: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiReport {
    pub coordinates: Vec<Vec<FiEntry>>,
    pub sizes: Vec<usize>,
    /// Same size at every coordinate, at most 3.
    pub uniform: bool,
    pub within_bound: bool,
}

impl FiReport {
    /// `|𝓕₀|`.
    pub fn size(&self) -> usize {
        self.sizes[0]
    }
}

pub fn compute_fi(s: &CartesianSystem) -> Result<FiReport, CartesianError> {
    let pg = s.instance().m();
    let t_order = pg.t_order()?;
    let mut coordinates = Vec::new();
    for i in 0..pg.k() {
        let mut entries: Vec<FiEntry> = Vec::new();
        for (j, kj) in s.members().iter().enumerate() {
            let p = kj.projection(i);
            if p.order()? == t_order {
                continue;
            }
            let mut found = false;
            for e in entries.iter_mut() {
                if e.group.same_group(&p)? {
                    e.witnesses.push(j);
                    found = true;
                    break;
                }
            }
            if !found {
                entries.push(FiEntry {
                    generators: group_strings(&p)?,
                    order: p.order()?,
                    group: p,
                    witnesses: vec![j],
                });
            }
        }
        coordinates.push(entries);
    }
    let sizes: Vec<usize> = coordinates.iter().map(Vec::len).collect();
    let uniform = sizes.iter().all(|&n| n == sizes[0]);
    let within_bound = sizes.iter().all(|&n| n <= 3);
    Ok(FiReport {
        coordinates,
        sizes,
        uniform,
        within_bound,
    })
}

/// Canonical generators of a group of `T` as cycle strings.
pub(crate) fn group_strings(g: &PermGroup) -> Result<Vec<String>, CartesianError> {
    let els = g.elements()?.to_vec();
    let c = PermGroup::from_elements(g.degree(), els, g.cap());
    Ok(c.generators().iter().map(Perm::to_cycle_string).collect())
}

/// `h` placed at coordinate `i` of `M`.
pub fn at_coordinate(pg: &ProductGroup, i: usize, h: &PermGroup) -> Result<ProductSubgroup, CartesianError> {
    let gens = h.generators().iter().map(|g| pg.embed_at(i, g)).collect();
    Ok(pg.subgroup(gens)?)
}

/// For each coordinate `i`, the first closure element of `G_ω` carrying
/// coordinate 0 to `i`.
pub fn coordinate_reps(g: &GOmegaGroup) -> Result<Vec<Perm>, CartesianError> {
    let k = g.parent().k();
    let mut reps: Vec<Option<Perm>> = vec![None; k];
    for x in g.elements()? {
        let j = g.coordinate_perm(x).apply(0) as usize;
        if reps[j].is_none() {
            reps[j] = Some(x.clone());
        }
    }
    reps.into_iter()
        .enumerate()
        .map(|(i, r)| {
            r.ok_or_else(|| {
                CartesianError::InvalidInstance(format!("no G_omega element maps coordinate 0 to {i}"))
            })
        })
        .collect()
}

/// Nontrivial full strips `X` with `K = X × σ_rest(K)`.
pub fn involved_strips(k: &ProductSubgroup) -> Result<Vec<Strip>, CartesianError> {
    let pg = k.parent();
    let order = k.order()? as u128;
    let mut out = Vec::new();
    for c in strip_components(k)? {
        if c.support.len() < 2 || !c.is_full_strip {
            continue;
        }
        let rest: Vec<usize> = (0..pg.k()).filter(|i| !c.support.contains(i)).collect();
        let rest_order = if rest.is_empty() {
            1
        } else {
            k.project(&rest)?.order()? as u128
        };
        if c.projection.order()? as u128 * rest_order == order {
            out.push(Strip::new(c.projection)?);
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ClassLabel {
    S,
    One,
    OneS,
    TwoSim,
    TwoNsim,
    Three,
}

impl ClassLabel {
    /// ASCII identifier, also the serialized form.
    pub fn id(self) -> &'static str {
        match self {
            ClassLabel::S => "S",
            ClassLabel::One => "1",
            ClassLabel::OneS => "1S",
            ClassLabel::TwoSim => "2sim",
            ClassLabel::TwoNsim => "2nsim",
            ClassLabel::Three => "3",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ClassLabel::TwoSim => "2∼",
            ClassLabel::TwoNsim => "2≁",
            other => other.id(),
        })
    }
}

impl FromStr for ClassLabel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "S" | "s" => ClassLabel::S,
            "1" => ClassLabel::One,
            "1S" | "1s" => ClassLabel::OneS,
            "2sim" | "2∼" | "2~" => ClassLabel::TwoSim,
            "2nsim" | "2≁" | "2!~" => ClassLabel::TwoNsim,
            "3" => ClassLabel::Three,
            _ => return Err(format!("unknown class label {s:?}")),
        })
    }
}

impl Serialize for ClassLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.id())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct InvolvedStrip {
    pub member: usize,
    pub support: Vec<usize>,
    #[serde(skip)]
    pub strip: Strip,
}

/// The two entries of `𝓕₀` when `|𝓕ᵢ| = 2`: `A` is the one whose first
/// witness comes first.
#[derive(Clone, Debug, Serialize)]
pub struct PairInfo {
    pub a_order: usize,
    pub b_order: usize,
    pub a_member: usize,
    pub b_member: usize,
    pub conjugate: bool,
    pub witness: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Classification {
    pub label: ClassLabel,
    pub invariant: bool,
    pub transitive: bool,
    pub fi: FiReport,
    pub strips: Vec<InvolvedStrip>,
    pub pair: Option<PairInfo>,
    /// The four structural assertions about `𝓕ᵢ` and strips.
    pub structure: Vec<Clause>,
}

impl Classification {
    pub fn structure_holds(&self) -> bool {
        self.structure.iter().all(Clause::passed)
    }
}

/// Classifies an invariant, transitive system. Structural violations are
/// errors.
pub fn classify(s: &CartesianSystem) -> Result<Classification, CartesianError> {
    if !is_g_invariant(s)? {
        return Err(CartesianError::NotInvariant);
    }
    if !is_transitive(s)? {
        return Err(CartesianError::NotTransitive);
    }
    classify_observed(s)
}

/// Computes the label whatever the invariance and transitivity status.
/// Structural assertions are marked not applicable on non-transitive
/// systems; on transitive ones a violation is an error.
pub fn classify_observed(s: &CartesianSystem) -> Result<Classification, CartesianError> {
    let invariant = is_g_invariant(s)?;
    let transitive = invariant && is_transitive(s)?;
    let pg = s.instance().m();
    let fi = compute_fi(s)?;
    let mut strips = Vec::new();
    for (j, kj) in s.members().iter().enumerate() {
        for x in involved_strips(kj)? {
            strips.push(InvolvedStrip {
                member: j,
                support: x.support().to_vec(),
                strip: x,
            });
        }
    }
    let f = fi.size();
    let g = s.instance().g_omega();

    let mut structure = Vec::new();
    structure.push(Clause::when_transitive(
        "strips.fi_uniform",
        None,
        transitive,
        fi.uniform && fi.within_bound,
        format!("|F_i| = {:?}", fi.sizes),
    ));
    let b_ok = strips.is_empty() || (pg.k() >= 2 && f <= 1);
    structure.push(Clause::when_transitive(
        "strips.excludes_large_fi",
        None,
        transitive,
        b_ok,
        format!("{} involved strips, k = {}, |F_0| = {f}", strips.len(), pg.k()),
    ));
    let c_ok = f != 1 || strips.iter().all(|x| x.support.len() == 2);
    structure.push(Clause::when_transitive(
        "strips.support_two",
        None,
        transitive,
        c_ok,
        format!(
            "supports {:?}",
            strips.iter().map(|x| x.support.clone()).collect::<Vec<_>>()
        ),
    ));
    let d_ok = strips.is_empty() || supports_form_invariant_partition(&strips, g, pg.k());
    structure.push(Clause::when_transitive(
        "strips.partition",
        None,
        transitive,
        d_ok,
        "strip supports partition the coordinates and are permuted by G_omega",
    ));
    if transitive {
        if let Some(c) = structure.iter().find(|c| !c.passed()) {
            return Err(CartesianError::StructureViolation(format!("{}: {}", c.id, c.detail)));
        }
    }

    let mut pair = None;
    let label = match f {
        0 => ClassLabel::S,
        1 if strips.is_empty() => ClassLabel::One,
        1 => ClassLabel::OneS,
        2 => {
            let (a, b) = ordered_pair(&fi.coordinates[0]);
            let a_emb = at_coordinate(pg, 0, &a.group)?;
            let b_emb = at_coordinate(pg, 0, &b.group)?;
            let w = g.are_conjugate_under_gomega(&a_emb, &b_emb)?;
            let conjugate = w.is_some();
            pair = Some(PairInfo {
                a_order: a.order,
                b_order: b.order,
                a_member: a.witnesses[0],
                b_member: b.witnesses[0],
                conjugate,
                witness: w.map(|x| x.to_cycle_string()),
            });
            if conjugate {
                ClassLabel::TwoSim
            } else {
                ClassLabel::TwoNsim
            }
        }
        3 => ClassLabel::Three,
        n => {
            return Err(CartesianError::StructureViolation(format!(
                "|F_0| = {n} exceeds 3"
            )))
        }
    };
    Ok(Classification {
        label,
        invariant,
        transitive,
        fi,
        strips,
        pair,
        structure,
    })
}

/// `(A, B)` ordered by least witness.
pub(crate) fn ordered_pair(entries: &[FiEntry]) -> (&FiEntry, &FiEntry) {
    let (x, y) = (&entries[0], &entries[1]);
    if x.witnesses[0] <= y.witnesses[0] {
        (x, y)
    } else {
        (y, x)
    }
}

fn supports_form_invariant_partition(strips: &[InvolvedStrip], g: &GOmegaGroup, k: usize) -> bool {
    let mut owner = vec![usize::MAX; k];
    for (n, x) in strips.iter().enumerate() {
        for &i in &x.support {
            if owner[i] != usize::MAX {
                return false;
            }
            owner[i] = n;
        }
    }
    if owner.contains(&usize::MAX) {
        return false;
    }
    let supports: Vec<Vec<usize>> = strips.iter().map(|x| x.support.clone()).collect();
    g.generators().iter().all(|a| {
        supports.iter().all(|s| {
            let mut img: Vec<usize> = s.iter().map(|&i| a.coord_perm.apply(i as u32) as usize).collect();
            img.sort_unstable();
            supports.contains(&img)
        })
    })
}
