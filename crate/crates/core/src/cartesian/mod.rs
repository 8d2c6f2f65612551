//! Pointed actions `Ω = M/M_ω`, Cartesian systems and decompositions, and
//! the bijection between them.
//!
//! `Ω` is the set of right cosets `M_ω·x`, acted on by right multiplication;
//! the basepoint `ω` is always the trivial coset (point 0).

pub mod classify;
pub mod properties;
pub mod quotient;
pub mod table;

use std::collections::{HashMap, HashSet};
use std::sync::{Arc, OnceLock};

use serde::Serialize;
use thiserror::Error;

use crate::perm::{GroupError, Perm};
use crate::report::{Clause, PropertyReport};
use crate::product::{GOmegaAction, GOmegaGroup, ProductError, ProductGroup, ProductSubgroup};

pub use classify::{classify, classify_observed, compute_fi, ClassLabel, Classification, FiReport};
pub use quotient::{quotient_partition, quotient_system, QuotientPartition, QuotientResult};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum CartesianError {
    #[error(transparent)]
    Product(#[from] ProductError),
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("members {0} and {1} are the same subgroup")]
    DuplicateMember(usize, usize),
    #[error("invalid system: {0}")]
    InvalidSystem(String),
    #[error("invalid decomposition: {0}")]
    InvalidDecomposition(String),
    #[error("the system is not G_omega-invariant")]
    NotInvariant,
    #[error("the system is not G_omega-transitive")]
    NotTransitive,
    #[error("M0 does not lie between M_omega and M: {0}")]
    NotBetween(String),
    #[error("M0 is not normalized by G_omega: {0}")]
    NotNormalized(String),
    #[error("expected class {expected}, found {found}")]
    WrongClass { expected: String, found: String },
    #[error("structural assertion violated: {0}")]
    StructureViolation(String),
    #[error("unsupported table row: {0}")]
    UnsupportedRow(String),
    #[error("Omega would have {points} points, above the cap of {cap}")]
    PointCapExceeded { points: u128, cap: usize },
}

impl From<GroupError> for CartesianError {
    fn from(e: GroupError) -> Self {
        CartesianError::Product(ProductError::Group(e))
    }
}

/// Right cosets of `M_ω` in `M` with the action of the generators of `M`.
#[derive(Debug)]
pub struct CosetSpace {
    reps: Vec<Perm>,
    index: HashMap<Perm, u32>,
    m_omega: Vec<Perm>,
    gen_images: Vec<Vec<u32>>,
}

impl CosetSpace {
    fn build(m: &ProductGroup, m_omega: &ProductSubgroup) -> Result<CosetSpace, CartesianError> {
        let m_omega_els = m_omega.elements()?.to_vec();
        let points = m.order()? / m_omega_els.len() as u128;
        if points > m.cap() as u128 {
            return Err(CartesianError::PointCapExceeded {
                points,
                cap: m.cap(),
            });
        }
        let gens = m.full().generators().to_vec();
        let mut space = CosetSpace {
            reps: vec![m.identity()],
            index: HashMap::new(),
            m_omega: m_omega_els,
            gen_images: vec![Vec::with_capacity(points as usize); gens.len()],
        };
        let k0 = space.key(&m.identity());
        space.index.insert(k0, 0);
        let mut head = 0;
        while head < space.reps.len() {
            let x = space.reps[head].clone();
            for (gi, g) in gens.iter().enumerate() {
                let y = x.compose(g);
                let key = space.key(&y);
                let n = space.reps.len() as u32;
                let id = *space.index.entry(key).or_insert(n);
                if id == n {
                    space.reps.push(y);
                }
                space.gen_images[gi].push(id);
            }
            head += 1;
        }
        Ok(space)
    }

    fn key(&self, x: &Perm) -> Perm {
        self.m_omega
            .iter()
            .map(|h| h.compose(x))
            .min()
            .expect("M_omega is nonempty")
    }

    pub fn size(&self) -> usize {
        self.reps.len()
    }

    /// Representative of point `p`; the coset is `M_ω·rep(p)`.
    pub fn rep(&self, p: u32) -> &Perm {
        &self.reps[p as usize]
    }

    /// The point `M_ω·x`.
    pub fn point_of(&self, x: &Perm) -> u32 {
        self.index[&self.key(x)]
    }

    /// `p·x` for an element `x` of `M`.
    pub fn act(&self, p: u32, x: &Perm) -> u32 {
        self.point_of(&self.reps[p as usize].compose(x))
    }

    /// Images of every point under each generator of `M`.
    pub fn generator_images(&self) -> &[Vec<u32>] {
        &self.gen_images
    }

    /// Orbit of a point under a list of elements of `M`, sorted.
    pub fn orbit(&self, p: u32, gens: &[Perm]) -> Vec<u32> {
        let mut seen = HashSet::new();
        seen.insert(p);
        let mut stack = vec![p];
        while let Some(q) = stack.pop() {
            for g in gens {
                let r = self.act(q, g);
                if seen.insert(r) {
                    stack.push(r);
                }
            }
        }
        let mut out: Vec<u32> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }
}

struct InstanceInner {
    m: ProductGroup,
    m_omega: ProductSubgroup,
    actions: Vec<GOmegaAction>,
    g_omega: GOmegaGroup,
    omega: OnceLock<Result<Arc<CosetSpace>, CartesianError>>,
}

/// `M` acting on `Ω = M/M_ω`, with the point stabilizer `G_ω` given as
/// automorphisms of `M`. `G_ω` is generated by the supplied actions together
/// with the inner automorphisms from `M_ω`.
#[derive(Clone)]
pub struct PointedInstance {
    inner: Arc<InstanceInner>,
}

impl std::fmt::Debug for PointedInstance {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PointedInstance")
            .field("m", &self.inner.m)
            .field("m_omega", &self.inner.m_omega.generators())
            .field("actions", &self.inner.actions.len())
            .finish()
    }
}

impl PointedInstance {
    pub fn new(
        m: ProductGroup,
        m_omega: ProductSubgroup,
        actions: Vec<GOmegaAction>,
    ) -> Result<PointedInstance, CartesianError> {
        if m_omega.parent() != &m {
            return Err(CartesianError::InvalidInstance(
                "M_omega belongs to a different product".into(),
            ));
        }
        for g in m_omega.generators() {
            if !m.contains(g)? {
                return Err(CartesianError::InvalidInstance(format!(
                    "M_omega generator {g} is not in M"
                )));
            }
        }
        if !m_omega.is_proper()? {
            return Err(CartesianError::InvalidInstance("M_omega is not proper in M".into()));
        }
        for (i, a) in actions.iter().enumerate() {
            if !a.act(&m_omega).same(&m_omega)? {
                return Err(CartesianError::InvalidInstance(format!(
                    "G_omega generator {i} does not normalize M_omega"
                )));
            }
        }
        for i in 0..m.k() {
            if m.t()
                .generators()
                .iter()
                .all(|t| m_omega.contains(&m.embed_at(i, t)).unwrap_or(false))
            {
                return Err(CartesianError::InvalidInstance(format!(
                    "T_{i} lies in M_omega, so M is not faithful on Omega"
                )));
            }
        }
        let mut all = actions.clone();
        all.extend(m_omega.generators().iter().map(|x| GOmegaAction::inner(&m, x)));
        let g_omega = GOmegaGroup::new(&m, all)?;
        if !g_omega.coordinate_orbit_transitive() {
            return Err(CartesianError::InvalidInstance(
                "G_omega is not transitive on the coordinates".into(),
            ));
        }
        for x in g_omega.elements()? {
            if m.contains(x)? && !m_omega.contains(x)? {
                return Err(CartesianError::InvalidInstance(format!(
                    "G_omega contains {x} from M outside M_omega"
                )));
            }
        }
        Ok(PointedInstance {
            inner: Arc::new(InstanceInner {
                m,
                m_omega,
                actions,
                g_omega,
                omega: OnceLock::new(),
            }),
        })
    }

    pub fn m(&self) -> &ProductGroup {
        &self.inner.m
    }

    pub fn m_omega(&self) -> &ProductSubgroup {
        &self.inner.m_omega
    }

    /// The supplied actions, without the inner automorphisms from `M_ω`.
    pub fn actions(&self) -> &[GOmegaAction] {
        &self.inner.actions
    }

    pub fn g_omega(&self) -> &GOmegaGroup {
        &self.inner.g_omega
    }

    /// `|Ω| = |M : M_ω|`.
    pub fn omega_size(&self) -> Result<u128, CartesianError> {
        Ok(self.m().order()? / self.m_omega().order()? as u128)
    }

    /// The realized coset space; built once and shared.
    pub fn coset_space(&self) -> Result<&CosetSpace, CartesianError> {
        self.inner
            .omega
            .get_or_init(|| CosetSpace::build(self.m(), self.m_omega()).map(Arc::new))
            .as_ref()
            .map(|a| a.as_ref())
            .map_err(Clone::clone)
    }

    /// The same action seen from the point `ω·x`: stabilizer and `G_ω`
    /// conjugated by `x ∈ M`.
    pub fn rebased(&self, x: &Perm) -> Result<PointedInstance, CartesianError> {
        let m = self.m();
        let m_omega = self.m_omega().conjugate(x);
        let xinv = x.inverse();
        let actions = self
            .actions()
            .iter()
            .map(|a| {
                let p = xinv.compose(&a.to_perm(m)).compose(x);
                GOmegaAction::from_perm(m, &p)
            })
            .collect::<Result<Vec<_>, _>>()?;
        PointedInstance::new(m.clone(), m_omega, actions)
    }
}

/// A set of subgroups of `M` attached to a pointed instance.
#[derive(Clone, Debug)]
pub struct CartesianSystem {
    instance: PointedInstance,
    members: Vec<ProductSubgroup>,
}

impl CartesianSystem {
    /// Rejects duplicate members and members outside `M`; the defining
    /// equations are checked by [`verify_system`].
    pub fn new(
        instance: PointedInstance,
        members: Vec<ProductSubgroup>,
    ) -> Result<CartesianSystem, CartesianError> {
        if members.is_empty() {
            return Err(CartesianError::InvalidSystem("no members".into()));
        }
        for (i, k) in members.iter().enumerate() {
            for g in k.generators() {
                if !instance.m().contains(g)? {
                    return Err(CartesianError::InvalidSystem(format!(
                        "member {i} has generator {g} outside M"
                    )));
                }
            }
        }
        if let Some((i, j)) = first_duplicate(&members)? {
            return Err(CartesianError::DuplicateMember(i, j));
        }
        Ok(CartesianSystem { instance, members })
    }

    pub fn instance(&self) -> &PointedInstance {
        &self.instance
    }

    pub fn members(&self) -> &[ProductSubgroup] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Index of the member equal to `h`.
    pub fn member_index(&self, h: &ProductSubgroup) -> Result<Option<usize>, CartesianError> {
        for (i, k) in self.members.iter().enumerate() {
            if k.same(h)? {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Equality of member sets.
    pub fn same_members(&self, other: &CartesianSystem) -> Result<bool, CartesianError> {
        if self.len() != other.len() {
            return Ok(false);
        }
        for k in &other.members {
            if self.member_index(k)?.is_none() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Permutation of member indices induced by conjugation with a
    /// `G_ω`-element, or `None` if some image is not a member.
    pub fn member_permutation(&self, g: &Perm) -> Result<Option<Vec<usize>>, CartesianError> {
        let mut out = Vec::with_capacity(self.len());
        for k in &self.members {
            match self.member_index(&k.conjugate(g))? {
                Some(j) => out.push(j),
                None => return Ok(None),
            }
        }
        Ok(Some(out))
    }

    /// The system seen from `ω·x`.
    pub fn rebased(&self, x: &Perm) -> Result<CartesianSystem, CartesianError> {
        let inst = self.instance.rebased(x)?;
        let members = self.members.iter().map(|k| k.conjugate(x)).collect();
        CartesianSystem::new(inst, members)
    }
}

fn first_duplicate(members: &[ProductSubgroup]) -> Result<Option<(usize, usize)>, CartesianError> {
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].same(&members[j])? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

#[derive(Serialize, Clone, Debug)]
pub struct MemberReport {
    pub index: usize,
    pub order: usize,
    /// `|M : K|`.
    pub index_in_m: u128,
    pub proper: bool,
    pub contains_m_omega: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct ProductEquation {
    pub index: usize,
    /// `|K_i·(∩_{j≠i} K_j)|`.
    pub product_size: u128,
    pub holds: bool,
}

/// Outcome of checking the two defining equations of a Cartesian system.
#[derive(Serialize, Clone, Debug)]
pub struct SystemReport {
    pub members: Vec<MemberReport>,
    pub distinct: bool,
    pub duplicate_pairs: Vec<(usize, usize)>,
    /// `∩ K_i = M_ω`.
    pub intersection_equation: bool,
    pub intersection_order: usize,
    pub m_omega_order: usize,
    /// `K_i·(∩_{j≠i} K_j) = M` for each `i`.
    pub product_equations: Vec<ProductEquation>,
    pub omega_size: u128,
    /// `∏ |M : K_i|`.
    pub grid_product: u128,
    pub grid_identity: bool,
    pub valid: bool,
}

/// Elements lying in every listed subgroup.
fn intersect_all(groups: &[&ProductSubgroup]) -> Result<Vec<Perm>, CartesianError> {
    let mut order: Vec<usize> = (0..groups.len()).collect();
    let sizes: Vec<usize> = groups.iter().map(|g| g.order()).collect::<Result<_, _>>()?;
    order.sort_by_key(|&i| sizes[i]);
    let mut out = groups[order[0]].elements()?.to_vec();
    for &i in &order[1..] {
        let mut keep = Vec::with_capacity(out.len());
        for x in out {
            if groups[i].contains(&x)? {
                keep.push(x);
            }
        }
        out = keep;
    }
    Ok(out)
}

/// Checks the defining equations for an arbitrary list of subgroups, which
/// may contain duplicates or non-proper members. An empty intersection is
/// read as `M`, so a single member only has to satisfy `K₁ = M_ω`.
pub fn verify_members(
    instance: &PointedInstance,
    members: &[ProductSubgroup],
) -> Result<SystemReport, CartesianError> {
    let m = instance.m();
    let m_order = m.order()?;
    let mw = instance.m_omega();
    let mw_order = mw.order()?;
    let mut reports = Vec::new();
    let mut orders = Vec::new();
    for (i, k) in members.iter().enumerate() {
        let o = k.order()?;
        orders.push(o);
        let mut contains = true;
        for g in mw.generators() {
            if !k.contains(g)? {
                contains = false;
                break;
            }
        }
        reports.push(MemberReport {
            index: i,
            order: o,
            index_in_m: m_order / o as u128,
            proper: (o as u128) < m_order,
            contains_m_omega: contains,
        });
    }
    let mut duplicate_pairs = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            if members[i].same(&members[j])? {
                duplicate_pairs.push((i, j));
            }
        }
    }
    let refs: Vec<&ProductSubgroup> = members.iter().collect();
    let all = if refs.is_empty() {
        Vec::new()
    } else {
        intersect_all(&refs)?
    };
    let intersection_order = all.len();
    let mut eq1 = intersection_order == mw_order && !members.is_empty();
    if eq1 {
        let set: HashSet<&Perm> = all.iter().collect();
        eq1 = mw.elements()?.iter().all(|x| set.contains(x));
    }
    let mut eqs = Vec::new();
    for i in 0..members.len() {
        let others: Vec<&ProductSubgroup> =
            refs.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, k)| *k).collect();
        let size = if others.is_empty() {
            m_order
        } else {
            let j_order = intersect_all(&others)?.len() as u128;
            orders[i] as u128 * j_order / intersection_order.max(1) as u128
        };
        eqs.push(ProductEquation {
            index: i,
            product_size: size,
            holds: size == m_order,
        });
    }
    let omega_size = m_order / mw_order as u128;
    let grid_product: u128 = reports.iter().map(|r| r.index_in_m).product();
    let distinct = duplicate_pairs.is_empty();
    let valid = !members.is_empty()
        && distinct
        && reports.iter().all(|r| r.proper && r.contains_m_omega)
        && eq1
        && eqs.iter().all(|e| e.holds);
    Ok(SystemReport {
        members: reports,
        distinct,
        duplicate_pairs,
        intersection_equation: eq1,
        intersection_order,
        m_omega_order: mw_order,
        product_equations: eqs,
        omega_size,
        grid_product,
        grid_identity: grid_product == omega_size,
        valid,
    })
}

impl SystemReport {
    /// The checks above as itemized clauses.
    pub fn clauses(&self) -> PropertyReport {
        let mut rep = PropertyReport::new("equations");
        for m in &self.members {
            rep.push(Clause::new(
                "eq.member.proper",
                None,
                m.proper,
                format!("member {}: |M : K| = {}", m.index, m.index_in_m),
            ));
            rep.push(Clause::new(
                "eq.member.contains_m_omega",
                None,
                m.contains_m_omega,
                format!("member {}", m.index),
            ));
        }
        rep.push(Clause::new("eq.distinct", None, self.distinct, format!("duplicates {:?}", self.duplicate_pairs)));
        rep.push(Clause::new(
            "eq.intersection",
            None,
            self.intersection_equation,
            format!("|meet| = {}, |M_omega| = {}", self.intersection_order, self.m_omega_order),
        ));
        for e in &self.product_equations {
            rep.push(Clause::new(
                "eq.product",
                None,
                e.holds,
                format!("member {}: product of size {}", e.index, e.product_size),
            ));
        }
        rep.push(Clause::new(
            "eq.grid_identity",
            None,
            self.grid_identity,
            format!("|Omega| = {}, product of indices = {}", self.omega_size, self.grid_product),
        ));
        rep
    }
}

pub fn verify_system(s: &CartesianSystem) -> Result<SystemReport, CartesianError> {
    verify_members(s.instance(), s.members())
}

/// A partition of `Ω`; blocks are sorted and ordered by least point.
#[derive(Serialize, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    pub blocks: Vec<Vec<u32>>,
}

impl Partition {
    pub fn from_blocks(mut blocks: Vec<Vec<u32>>) -> Partition {
        for b in &mut blocks {
            b.sort_unstable();
        }
        blocks.sort();
        Partition { blocks }
    }

    pub fn block_of(&self, n: usize) -> Vec<u32> {
        let mut out = vec![u32::MAX; n];
        for (i, b) in self.blocks.iter().enumerate() {
            for &p in b {
                out[p as usize] = i as u32;
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }
}

/// The `M`-images of a block, or an error when they overlap inconsistently.
pub fn partition_from_block(space: &CosetSpace, block: &[u32]) -> Result<Partition, String> {
    let n = space.size();
    let mut owner = vec![u32::MAX; n];
    let mut blocks: Vec<Vec<u32>> = vec![block.to_vec()];
    for &p in block {
        owner[p as usize] = 0;
    }
    let mut head = 0;
    while head < blocks.len() {
        for img in space.generator_images() {
            let image: Vec<u32> = blocks[head].iter().map(|&p| img[p as usize]).collect();
            let first = owner[image[0] as usize];
            if first == u32::MAX {
                let id = blocks.len() as u32;
                for &q in &image {
                    if owner[q as usize] != u32::MAX {
                        return Err(format!("image of block {head} overlaps block {}", owner[q as usize]));
                    }
                    owner[q as usize] = id;
                }
                blocks.push(image);
            } else if image.iter().any(|&q| owner[q as usize] != first)
                || blocks[first as usize].len() != image.len()
            {
                return Err(format!("image of block {head} is not a block"));
            }
        }
        head += 1;
    }
    if owner.contains(&u32::MAX) {
        return Err("blocks do not cover Omega".into());
    }
    Ok(Partition::from_blocks(blocks))
}

/// A set of partitions of `Ω` for a pointed instance.
#[derive(Clone, Debug)]
pub struct CartesianDecomposition {
    instance: PointedInstance,
    partitions: Vec<Partition>,
}

#[derive(Serialize, Clone, Debug)]
pub struct DecompositionReport {
    pub block_counts: Vec<usize>,
    pub proper: Vec<bool>,
    pub m_invariant: Vec<bool>,
    /// Every choice of one block per partition meets in exactly one point.
    pub intersection_property: bool,
    pub valid: bool,
}

impl CartesianDecomposition {
    pub fn new(instance: PointedInstance, partitions: Vec<Partition>) -> CartesianDecomposition {
        CartesianDecomposition {
            instance,
            partitions,
        }
    }

    pub fn instance(&self) -> &PointedInstance {
        &self.instance
    }

    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn check(&self) -> Result<DecompositionReport, CartesianError> {
        let space = self.instance.coset_space()?;
        let n = space.size();
        let mut proper = Vec::new();
        let mut invariant = Vec::new();
        let mut owners = Vec::new();
        let mut covers = true;
        for part in &self.partitions {
            let owner = part.block_of(n);
            let sum: usize = part.blocks.iter().map(Vec::len).sum();
            if sum != n || owner.contains(&u32::MAX) {
                covers = false;
            }
            proper.push(part.len() >= 2);
            let mut inv = covers;
            if inv {
                'outer: for img in space.generator_images() {
                    for b in &part.blocks {
                        let t = owner[img[b[0] as usize] as usize];
                        if b.iter().any(|&p| owner[img[p as usize] as usize] != t)
                            || part.blocks[t as usize].len() != b.len()
                        {
                            inv = false;
                            break 'outer;
                        }
                    }
                }
            }
            invariant.push(inv);
            owners.push(owner);
        }
        let mut intersection = covers && !self.partitions.is_empty();
        if intersection {
            let grid: u128 = self.partitions.iter().map(|p| p.len() as u128).product();
            let mut seen = HashSet::with_capacity(n);
            for p in 0..n {
                let tuple: Vec<u32> = owners.iter().map(|o| o[p]).collect();
                if !seen.insert(tuple) {
                    intersection = false;
                    break;
                }
            }
            intersection &= grid == n as u128;
        }
        let valid = intersection && proper.iter().all(|&b| b) && invariant.iter().all(|&b| b);
        Ok(DecompositionReport {
            block_counts: self.partitions.iter().map(Partition::len).collect(),
            proper,
            m_invariant: invariant,
            intersection_property: intersection,
            valid,
        })
    }

    /// Equality as sets of partitions.
    pub fn same_partitions(&self, other: &CartesianDecomposition) -> bool {
        let mut a = self.partitions.clone();
        let mut b = other.partitions.clone();
        a.sort();
        b.sort();
        a == b
    }
}

/// The partition of `Ω` into the `M`-images of `ω^K`.
pub fn partition_for(instance: &PointedInstance, k: &ProductSubgroup) -> Result<Partition, CartesianError> {
    let space = instance.coset_space()?;
    let block = space.orbit(0, k.generators());
    partition_from_block(space, &block).map_err(CartesianError::InvalidSystem)
}

pub fn decomposition_from_system(s: &CartesianSystem) -> Result<CartesianDecomposition, CartesianError> {
    let report = verify_system(s)?;
    if !report.valid {
        return Err(CartesianError::InvalidSystem(
            "the defining equations do not hold".into(),
        ));
    }
    let parts = s
        .members()
        .iter()
        .map(|k| partition_for(s.instance(), k))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CartesianDecomposition::new(s.instance().clone(), parts))
}

/// `K_i` is the setwise stabilizer in `M` of the block of `Γ_i` containing
/// `ω`, which is `⋃_{p∈γ_i} M_ω·rep(p)`.
pub fn system_from_decomposition(d: &CartesianDecomposition) -> Result<CartesianSystem, CartesianError> {
    let report = d.check()?;
    if !report.valid {
        return Err(CartesianError::InvalidDecomposition(format!("{report:?}")));
    }
    let inst = d.instance();
    let space = inst.coset_space()?;
    let mw = inst.m_omega();
    let mw_order = mw.order()?;
    let mut members = Vec::new();
    for part in d.partitions() {
        let block = part
            .blocks
            .iter()
            .find(|b| b.contains(&0))
            .expect("partitions cover omega");
        let mut gens = mw.generators().to_vec();
        gens.extend(block.iter().map(|&p| space.rep(p).clone()));
        let k = inst.m().subgroup(gens)?;
        if k.order()? != block.len() * mw_order {
            return Err(CartesianError::InvalidDecomposition(
                "block stabilizer is larger than the block".into(),
            ));
        }
        members.push(k);
    }
    CartesianSystem::new(inst.clone(), members)
}

/// Invariance under every generator of `G_ω`.
pub fn is_g_invariant(s: &CartesianSystem) -> Result<bool, CartesianError> {
    for g in s.instance().g_omega().group().generators() {
        if s.member_permutation(g)?.is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// A single `G_ω`-orbit on the members; false when not invariant.
pub fn is_transitive(s: &CartesianSystem) -> Result<bool, CartesianError> {
    let mut perms = Vec::new();
    for g in s.instance().g_omega().group().generators() {
        match s.member_permutation(g)? {
            Some(p) => perms.push(p),
            None => return Ok(false),
        }
    }
    let mut seen = vec![false; s.len()];
    seen[0] = true;
    let mut stack = vec![0usize];
    while let Some(i) = stack.pop() {
        for p in &perms {
            if !seen[p[i]] {
                seen[p[i]] = true;
                stack.push(p[i]);
            }
        }
    }
    Ok(seen.into_iter().all(|b| b))
}

#[cfg(test)]
mod tests;
