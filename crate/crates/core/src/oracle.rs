//! Brute-force ground truth over small `M`: every subgroup between `M_ω`
//! and `M`, every Cartesian system built from them, and cross-checks of the
//! system/decomposition correspondence.

use std::collections::{HashMap, HashSet};

use serde::Serialize;
use thiserror::Error;

use crate::cartesian::classify::classify_observed;
use crate::cartesian::{
    decomposition_from_system, system_from_decomposition, verify_members,
    CartesianDecomposition, CartesianError, CartesianSystem, PointedInstance,
};
use crate::perm::{Perm, PermGroup};
use crate::product::{ProductGroup, ProductSubgroup};

/// Largest `|M|` for which the interval is enumerated.
pub const ORACLE_CAP: u128 = 10_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("|M| = {order} exceeds the oracle cap {cap}")]
    CapExceeded { order: u128, cap: u128 },
    #[error(transparent)]
    Cartesian(#[from] CartesianError),
}

impl From<crate::product::ProductError> for OracleError {
    fn from(e: crate::product::ProductError) -> Self {
        OracleError::Cartesian(e.into())
    }
}

impl From<crate::perm::GroupError> for OracleError {
    fn from(e: crate::perm::GroupError) -> Self {
        OracleError::Cartesian(e.into())
    }
}

/// Elements of `M` by canonical position, with subgroups as bitsets.
struct Universe {
    elements: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

type Bits = Vec<u64>;

impl Universe {
    fn new(elements: &[Perm]) -> Universe {
        Universe {
            elements: elements.to_vec(),
            index: elements.iter().enumerate().map(|(i, p)| (p.clone(), i)).collect(),
        }
    }

    fn empty(&self) -> Bits {
        vec![0; self.elements.len().div_ceil(64)]
    }

    fn bits_of(&self, els: &[Perm]) -> Bits {
        let mut b = self.empty();
        for x in els {
            let i = self.index[x];
            b[i / 64] |= 1 << (i % 64);
        }
        b
    }

    fn mul(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].compose(&self.elements[b])]
    }

    /// Closure of `set ∪ {x}` under multiplication.
    fn extend(&self, set: &[usize], x: usize) -> Vec<usize> {
        let mut gens: Vec<usize> = set.to_vec();
        gens.push(x);
        let mut seen = self.empty();
        let mut out = Vec::new();
        let mut stack: Vec<usize> = set.to_vec();
        stack.push(x);
        while let Some(a) = stack.pop() {
            if seen[a / 64] >> (a % 64) & 1 == 1 {
                continue;
            }
            seen[a / 64] |= 1 << (a % 64);
            out.push(a);
            for &g in &gens {
                let c = self.mul(a, g);
                if seen[c / 64] >> (c % 64) & 1 == 0 {
                    stack.push(c);
                }
            }
        }
        out.sort_unstable();
        out
    }
}

fn ones(b: &Bits) -> Vec<usize> {
    let mut out = Vec::new();
    for (w, &word) in b.iter().enumerate() {
        let mut x = word;
        while x != 0 {
            out.push(w * 64 + x.trailing_zeros() as usize);
            x &= x - 1;
        }
    }
    out
}

fn count(b: &Bits) -> usize {
    b.iter().map(|w| w.count_ones() as usize).sum()
}

fn and(a: &Bits, b: &Bits) -> Bits {
    a.iter().zip(b).map(|(x, y)| x & y).collect()
}

#[derive(Clone, Debug)]
pub struct IntervalCatalog {
    /// Absent when the catalog was built from `M` and a base subgroup only.
    pub instance: Option<PointedInstance>,
    pub top: ProductGroup,
    pub base: ProductSubgroup,
    /// All `H` with `M_ω ≤ H ≤ M`, ordered by order and then by element
    /// positions.
    pub subgroups: Vec<ProductSubgroup>,
    bits: Vec<Bits>,
    universe_size: usize,
}

impl IntervalCatalog {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    pub fn orders(&self) -> Vec<usize> {
        self.bits.iter().map(count).collect()
    }

    pub fn position(&self, h: &ProductSubgroup) -> Result<Option<usize>, OracleError> {
        for (i, k) in self.subgroups.iter().enumerate() {
            if k.same(h)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }
}

pub fn enumerate_interval(inst: &PointedInstance) -> Result<IntervalCatalog, OracleError> {
    let mut cat = enumerate_interval_in(inst.m(), inst.m_omega())?;
    cat.instance = Some(inst.clone());
    Ok(cat)
}

/// The interval between `base` and `pg`, with no point stabilizer
/// semantics attached; `base` may be all of `M`.
pub fn enumerate_interval_in(pg: &ProductGroup, base: &ProductSubgroup) -> Result<IntervalCatalog, OracleError> {
    let order = pg.order()?;
    if order > ORACLE_CAP {
        return Err(OracleError::CapExceeded { order, cap: ORACLE_CAP });
    }
    let full = pg.full();
    let u = Universe::new(full.elements()?);
    let start: Vec<usize> = {
        let mut v: Vec<usize> = base.elements()?.iter().map(|x| u.index[x]).collect();
        v.sort_unstable();
        v
    };
    let mut found: Vec<Vec<usize>> = vec![start.clone()];
    let mut seen: HashSet<Vec<usize>> = HashSet::from([start]);
    let mut next = 0;
    while next < found.len() {
        let h = found[next].clone();
        next += 1;
        let mut in_h = vec![false; u.elements.len()];
        for &a in &h {
            in_h[a] = true;
        }
        // ⟨H, x⟩ depends only on the double coset HxH
        let mut covered = in_h.clone();
        for x in 0..u.elements.len() {
            if covered[x] {
                continue;
            }
            for &a in &h {
                for &b in &h {
                    covered[u.mul(u.mul(a, x), b)] = true;
                }
            }
            let j = u.extend(&h, x);
            if seen.insert(j.clone()) {
                found.push(j);
            }
        }
    }
    found.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    let subgroups = found
        .iter()
        .map(|s| {
            let els: Vec<Perm> = s.iter().map(|&i| u.elements[i].clone()).collect();
            pg.wrap_group(PermGroup::from_elements(pg.degree(), els, pg.cap()))
        })
        .collect();
    let bits = found
        .iter()
        .map(|s| {
            let els: Vec<Perm> = s.iter().map(|&i| u.elements[i].clone()).collect();
            u.bits_of(&els)
        })
        .collect();
    Ok(IntervalCatalog {
        instance: None,
        top: pg.clone(),
        base: base.clone(),
        subgroups,
        bits,
        universe_size: u.elements.len(),
    })
}

/// The system equations evaluated on element sets: the members meet in
/// exactly `M_ω`, and each member times the meet of the others is all of
/// `M`, counted element by element. Members are catalog indices.
pub fn oracle_predicate(cat: &IntervalCatalog, members: &[usize]) -> bool {
    if members.is_empty() {
        return false;
    }
    let n = cat.universe_size;
    let mut distinct = members.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() != members.len() {
        return false;
    }
    if members.iter().any(|&i| count(&cat.bits[i]) == n) {
        return false;
    }
    let meet = |skip: Option<usize>| -> Bits {
        let mut acc = vec![0u64; n.div_ceil(64)];
        for i in 0..n {
            acc[i / 64] |= 1 << (i % 64);
        }
        for (pos, &i) in members.iter().enumerate() {
            if Some(pos) != skip {
                acc = and(&acc, &cat.bits[i]);
            }
        }
        acc
    };
    let all = meet(None);
    if ones(&all) != ones(&cat.bits[0]) {
        return false;
    }
    let full = cat.top.full();
    let els = full.elements().expect("enumerated by the catalog");
    let index: HashMap<&Perm, usize> = els.iter().enumerate().map(|(i, p)| (p, i)).collect();
    for pos in 0..members.len() {
        let rest = ones(&meet(Some(pos)));
        let mut product = vec![false; n];
        let mut hit = 0;
        for a in ones(&cat.bits[members[pos]]) {
            for &b in &rest {
                let c = index[&els[a].compose(&els[b])];
                if !std::mem::replace(&mut product[c], true) {
                    hit += 1;
                }
            }
        }
        if hit != n {
            return false;
        }
    }
    true
}

fn no_instance() -> OracleError {
    OracleError::Cartesian(CartesianError::InvalidInstance(
        "the catalog has no pointed instance".into(),
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct FoundSystem {
    /// Catalog indices.
    pub members: Vec<usize>,
    pub orders: Vec<usize>,
    pub invariant: bool,
    pub transitive: bool,
    /// Observed class label.
    pub label: String,
    #[serde(skip)]
    pub system: CartesianSystem,
}

/// All sets of at most `max_len` interval subgroups satisfying the system
/// equations, in lexicographic order of catalog indices. Candidate sets
/// must have `∏|M : K_i| = |M : M_ω|`.
pub fn enumerate_systems(cat: &IntervalCatalog, max_len: usize) -> Result<Vec<FoundSystem>, OracleError> {
    let n = cat.universe_size as u128;
    let target = n / count(&cat.bits[0]) as u128;
    let idx: Vec<u128> = cat.bits.iter().map(|b| n / count(b) as u128).collect();
    let mut out = Vec::new();
    let mut cur = Vec::new();
    search(cat, &idx, target, 1, 0, max_len, &mut cur, &mut out)?;
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search(
    cat: &IntervalCatalog,
    idx: &[u128],
    target: u128,
    prod: u128,
    start: usize,
    max_len: usize,
    cur: &mut Vec<usize>,
    out: &mut Vec<FoundSystem>,
) -> Result<(), OracleError> {
    if prod == target && !cur.is_empty() && oracle_predicate(cat, cur) {
        let system = CartesianSystem::new(
            cat.instance.clone().ok_or_else(no_instance)?,
            cur.iter().map(|&i| cat.subgroups[i].clone()).collect(),
        )?;
        let c = classify_observed(&system)?;
        let (invariant, transitive, label) = (c.invariant, c.transitive, c.label.id().to_string());
        out.push(FoundSystem {
            members: cur.clone(),
            orders: cur.iter().map(|&i| count(&cat.bits[i])).collect(),
            invariant,
            transitive,
            label,
            system,
        });
    }
    if cur.len() == max_len {
        return Ok(());
    }
    for i in start..cat.len() {
        let p = prod * idx[i];
        // proper members only, and the index product must divide the target
        if idx[i] > 1 && target.is_multiple_of(p) {
            cur.push(i);
            search(cat, idx, target, p, i + 1, max_len, cur, out)?;
            cur.pop();
        }
    }
    Ok(())
}

#[derive(Clone, Debug, Serialize)]
pub struct AgreementReport {
    pub tested: usize,
    pub agreed: usize,
    pub disagreements: Vec<Vec<usize>>,
}

/// Compares `verify_members` with the oracle predicate on every set of at
/// most `max_len` interval subgroups.
pub fn predicate_agreement(cat: &IntervalCatalog, max_len: usize) -> Result<AgreementReport, OracleError> {
    let mut rep = AgreementReport {
        tested: 0,
        agreed: 0,
        disagreements: Vec::new(),
    };
    let mut cur = Vec::new();
    fn rec(
        cat: &IntervalCatalog,
        start: usize,
        max_len: usize,
        cur: &mut Vec<usize>,
        rep: &mut AgreementReport,
    ) -> Result<(), OracleError> {
        if !cur.is_empty() {
            let members: Vec<ProductSubgroup> = cur.iter().map(|&i| cat.subgroups[i].clone()).collect();
            let inst = cat.instance.as_ref().ok_or_else(no_instance)?;
            let primary = verify_members(inst, &members)?.valid;
            rep.tested += 1;
            if primary == oracle_predicate(cat, cur) {
                rep.agreed += 1;
            } else {
                rep.disagreements.push(cur.clone());
            }
        }
        if cur.len() == max_len {
            return Ok(());
        }
        for i in start..cat.len() {
            cur.push(i);
            rec(cat, i + 1, max_len, cur, rep)?;
            cur.pop();
        }
        Ok(())
    }
    rec(cat, 0, max_len, &mut cur, &mut rep)?;
    Ok(rep)
}

#[derive(Clone, Debug, Serialize)]
pub struct BijectionReport {
    pub systems: usize,
    pub violations: Vec<String>,
}

/// Each system yields a valid decomposition that maps back to it, and
/// distinct systems yield distinct decompositions.
pub fn cross_check_bijection(systems: &[CartesianSystem]) -> Result<BijectionReport, OracleError> {
    let mut violations = Vec::new();
    let mut decs = Vec::new();
    for (n, s) in systems.iter().enumerate() {
        let d = decomposition_from_system(s)?;
        violations.extend(check_round_trip(&d, s)?.into_iter().map(|v| format!("system {n}: {v}")));
        decs.push(d);
    }
    for i in 0..systems.len() {
        for j in i + 1..systems.len() {
            let same_sys = systems[i].same_members(&systems[j])?;
            if !same_sys && decs[i].same_partitions(&decs[j]) {
                violations.push(format!("systems {i} and {j} give the same decomposition"));
            }
        }
    }
    Ok(BijectionReport {
        systems: systems.len(),
        violations,
    })
}

/// Problems with `d` as the decomposition of `expected`.
pub fn check_round_trip(d: &CartesianDecomposition, expected: &CartesianSystem) -> Result<Vec<String>, OracleError> {
    let mut v = Vec::new();
    if !d.check()?.valid {
        v.push("decomposition is not valid".to_string());
    }
    match system_from_decomposition(d) {
        Ok(back) if back.same_members(expected)? => {}
        Ok(_) => v.push("round trip returns different members".to_string()),
        Err(e) => v.push(format!("round trip fails: {e}")),
    }
    Ok(v)
}

/// Moves the last point of the first block of a partition into its second
/// block.
pub fn corrupt_decomposition(d: &CartesianDecomposition, partition: usize) -> CartesianDecomposition {
    let mut parts = d.partitions().to_vec();
    if let Some(p) = parts.get_mut(partition) {
        if p.blocks.len() >= 2 {
            if let Some(x) = p.blocks[0].pop() {
                p.blocks[1].push(x);
            }
        }
    }
    CartesianDecomposition::new(d.instance().clone(), parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::demos;

    fn a5_catalog() -> IntervalCatalog {
        enumerate_interval(demos::demo("a5-2nsim").unwrap().unwrap().instance()).unwrap()
    }

    #[test]
    fn a5_interval_over_an_involution() {
        let cat = a5_catalog();
        // an involution of A5 lies in one V4, one A4, two S3 and two D10
        assert_eq!(cat.orders(), vec![2, 4, 6, 6, 10, 10, 12, 60]);
        let s = demos::a5_2nsim().unwrap();
        for k in s.members() {
            assert!(cat.position(k).unwrap().is_some());
        }
        let omega = s.instance().m_omega();
        assert!(cat.subgroups.iter().all(|h| omega.is_subgroup_of(h).unwrap()));
    }

    #[test]
    fn interval_of_m_omega_equal_to_t() {
        let s = demos::a6_2sim().unwrap();
        let cat = enumerate_interval(s.instance()).unwrap();
        // D10 < A5, A5' < A6
        assert_eq!(cat.orders(), vec![10, 60, 60, 360]);
        assert!(cat.position(&s.members()[0]).unwrap().is_some());
        assert!(cat.position(&s.members()[1]).unwrap().is_some());
    }

    #[test]
    fn a5_systems_include_the_pair() {
        let cat = a5_catalog();
        let found = enumerate_systems(&cat, 3).unwrap();
        let s = demos::a5_2nsim().unwrap();
        assert!(found.iter().any(|f| f.system.same_members(&s).unwrap()));
        assert!(found.iter().any(|f| f.members == vec![0]));
        let r = cross_check_bijection(&found.iter().map(|f| f.system.clone()).collect::<Vec<_>>()).unwrap();
        assert!(r.violations.is_empty(), "{:?}", r.violations);
        let summary: Vec<_> = found.iter().map(|f| (f.orders.clone(), f.label.as_str())).collect();
        assert_eq!(summary, vec![(vec![2], "1"), (vec![10, 12], "2nsim"), (vec![10, 12], "2nsim")]);
    }

    #[test]
    fn predicate_matches_primary_checks() {
        let cat = a5_catalog();
        let r = predicate_agreement(&cat, 3).unwrap();
        assert_eq!(r.agreed, r.tested, "{:?}", r.disagreements);
    }

    #[test]
    fn corrupted_decomposition_is_caught() {
        let s = demos::a5_2nsim().unwrap();
        let d = decomposition_from_system(&s).unwrap();
        assert!(check_round_trip(&d, &s).unwrap().is_empty());
        let bad = corrupt_decomposition(&d, 0);
        assert!(!check_round_trip(&bad, &s).unwrap().is_empty());
    }

    #[test]
    fn cap_is_enforced() {
        let s = demos::a6a6_1s().unwrap();
        assert!(matches!(
            enumerate_interval(s.instance()),
            Err(OracleError::CapExceeded { order: 129_600, .. })
        ));
    }

    #[test]
    fn a6_over_d10_has_the_two_a5() {
        let s = demos::a6_2sim().unwrap();
        let cat = enumerate_interval(s.instance()).unwrap();
        let found = enumerate_systems(&cat, 3).unwrap();
        assert!(found.iter().any(|f| f.system.same_members(&s).unwrap()));
        for f in found.iter().filter(|f| f.transitive) {
            let c = crate::cartesian::classify::classify(&f.system).unwrap();
            assert!(c.structure_holds());
        }
        let r = cross_check_bijection(&[s]).unwrap();
        assert_eq!((r.systems, r.violations.len()), (1, 0));
    }

    #[test]
    fn m_omega_equal_to_m_has_no_systems() {
        let s = demos::a5_2nsim().unwrap();
        let pg = s.instance().m().clone();
        assert!(PointedInstance::new(pg.clone(), pg.full(), Vec::new()).is_err());
        let cat = enumerate_interval_in(&pg, &pg.full()).unwrap();
        assert_eq!(cat.orders(), vec![60]);
        assert!(enumerate_systems(&cat, 4).unwrap().is_empty());
    }
}
