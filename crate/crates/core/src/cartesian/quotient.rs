//! Quotients of `Ω` by overgroups of `M_ω`, and the class-specific
//! quotient systems.

use serde::Serialize;

use super::classify::{classify_observed, involved_strips, ClassLabel, Classification};
use super::{
    is_g_invariant, partition_for, verify_system, CartesianError, CartesianSystem, Partition,
    PointedInstance, SystemReport,
};
use crate::product::{normalizer_in_m, ProductSubgroup};

/// The partition of `Ω` into `M`-translates of `ω^{M₀}`.
#[derive(Clone, Debug)]
pub struct QuotientPartition {
    pub block_size: usize,
    pub block_count: u128,
    pub partition: Partition,
    /// The action on blocks; `None` when `M₀ = M`.
    pub instance: Option<PointedInstance>,
    pub is_identity: bool,
}

/// Requires `M_ω ≤ M₀ ≤ M` with `M₀` normalized by `G_ω`. The quotient
/// instance has stabilizer `M₀` and point stabilizer generated by `G_ω`
/// and `M₀`.
pub fn quotient_partition(
    inst: &PointedInstance,
    m0: &ProductSubgroup,
) -> Result<QuotientPartition, CartesianError> {
    let m = inst.m();
    for g in m0.generators() {
        if !m.contains(g)? {
            return Err(CartesianError::NotBetween(format!("{g} is not in M")));
        }
    }
    for g in inst.m_omega().generators() {
        if !m0.contains(g)? {
            return Err(CartesianError::NotBetween(format!("M_omega generator {g} is not in M0")));
        }
    }
    for g in inst.g_omega().group().generators() {
        if !m0.is_normalized_by(g)? {
            return Err(CartesianError::NotNormalized(g.to_cycle_string()));
        }
    }
    let m0_order = m0.order()?;
    let block_size = m0_order / inst.m_omega().order()?;
    let block_count = m.order()? / m0_order as u128;
    let partition = partition_for(inst, m0)?;
    let instance = if block_count == 1 {
        None
    } else {
        Some(PointedInstance::new(m.clone(), m0.clone(), inst.actions().to_vec())?)
    };
    Ok(QuotientPartition {
        block_size,
        block_count,
        partition,
        instance,
        is_identity: block_size == 1,
    })
}

#[derive(Clone, Debug)]
pub struct QuotientResult {
    pub label: ClassLabel,
    /// `M̄_ω`, the stabilizer of the block containing `ω`.
    pub m_bar_omega: ProductSubgroup,
    pub instance: PointedInstance,
    pub system: CartesianSystem,
    pub report: SystemReport,
    pub invariant: bool,
    pub classification: Classification,
    pub equals_original: bool,
    pub m_bar_equals_m_omega: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct QuotientSummary {
    pub label: ClassLabel,
    pub m_bar_omega_order: usize,
    pub quotient_points: u128,
    pub valid_system: bool,
    pub invariant: bool,
    pub quotient_label: ClassLabel,
    pub equals_original: bool,
    pub m_bar_equals_m_omega: bool,
}

impl QuotientResult {
    pub fn summary(&self) -> Result<QuotientSummary, CartesianError> {
        Ok(QuotientSummary {
            label: self.label,
            m_bar_omega_order: self.m_bar_omega.order()?,
            quotient_points: self.instance.omega_size()?,
            valid_system: self.report.valid,
            invariant: self.invariant,
            quotient_label: self.classification.label,
            equals_original: self.equals_original,
            m_bar_equals_m_omega: self.m_bar_equals_m_omega,
        })
    }

    pub fn class_matches(&self) -> bool {
        self.classification.label == self.label
    }
}

/// Builds `M̄_ω` and the members `K̄_j` for the given class, then checks the
/// result on the quotient instance.
pub fn quotient_system(s: &CartesianSystem, label: ClassLabel) -> Result<QuotientResult, CartesianError> {
    if !matches!(label, ClassLabel::TwoSim | ClassLabel::TwoNsim | ClassLabel::OneS) {
        return Err(CartesianError::WrongClass {
            expected: "2sim, 2nsim or 1S".into(),
            found: label.id().into(),
        });
    }
    let observed = classify_observed(s)?;
    if observed.label != label {
        return Err(CartesianError::WrongClass {
            expected: label.id().into(),
            found: observed.label.id().into(),
        });
    }
    let inst = s.instance();
    let pg = inst.m();
    let k = pg.k();
    let mut members = Vec::new();
    for kj in s.members() {
        let bar = match label {
            ClassLabel::OneS => {
                let strips = involved_strips(kj)?;
                let mut gens = Vec::new();
                for x in &strips {
                    gens.extend(x.subgroup().generators().iter().cloned());
                }
                let covered: Vec<usize> = strips.iter().flat_map(|x| x.support().to_vec()).collect();
                for i in (0..k).filter(|i| !covered.contains(i)) {
                    gens.extend(kj.projection(i).generators().iter().map(|g| pg.embed_at(i, g)));
                }
                pg.subgroup(gens)?
            }
            _ => {
                let parts: Vec<_> = (0..k).map(|i| kj.projection(i)).collect();
                pg.direct_product(&parts)
            }
        };
        members.push(bar);
    }
    let m_bar = match label {
        ClassLabel::TwoSim => {
            let parts = (0..k)
                .map(|i| pg.t().normalizer(&inst.m_omega().projection(i)))
                .collect::<Result<Vec<_>, _>>()?;
            pg.direct_product(&parts)
        }
        ClassLabel::TwoNsim => {
            let mut acc = members[0].clone();
            for kb in &members[1..] {
                acc = acc.intersection(kb)?;
            }
            acc
        }
        _ => normalizer_in_m(inst.m_omega())?,
    };
    for i in 0..k {
        let t_i_inside = pg
            .t()
            .generators()
            .iter()
            .all(|t| m_bar.contains(&pg.embed_at(i, t)).unwrap_or(false));
        if t_i_inside {
            return Err(CartesianError::StructureViolation(format!(
                "T_{i} lies in the quotient stabilizer, so M is not faithful on the quotient"
            )));
        }
    }
    let qp = quotient_partition(inst, &m_bar)?;
    let q_inst = qp.instance.ok_or_else(|| {
        CartesianError::StructureViolation("the quotient stabilizer is all of M".into())
    })?;
    let system = CartesianSystem::new(q_inst.clone(), members)?;
    let report = verify_system(&system)?;
    let invariant = is_g_invariant(&system)?;
    let classification = classify_observed(&system)?;
    let m_bar_equals_m_omega = m_bar.same(inst.m_omega())?;
    let equals_original = m_bar_equals_m_omega && system.same_members(s)?;
    Ok(QuotientResult {
        label,
        m_bar_omega: m_bar,
        instance: q_inst,
        system,
        report,
        invariant,
        classification,
        equals_original,
        m_bar_equals_m_omega,
    })
}
