//! Direct powers `M = T^k`, their subgroups, strips, and the
//! coordinate-permuting automorphisms used to model point stabilizers.
//!
//! An element of `M` is stored as a single permutation of `k·d` points,
//! where coordinate `i` acts on the block `[i·d, (i+1)·d)`. Every subgroup
//! of `M` is therefore an ordinary [`PermGroup`] of degree `k·d`.

use std::collections::BTreeSet;
use std::sync::Arc;

use thiserror::Error;

use crate::perm::{GroupError, Perm, PermGroup, DEFAULT_ELEMENT_CAP};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ProductError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("empty coordinate set")]
    EmptyIndexSet,
    #[error("coordinate {0} out of range")]
    CoordinateOutOfRange(usize),
    #[error("the factor group is not nonabelian simple")]
    NotSimple,
    #[error("not an element of M: {0}")]
    NotInM(String),
    #[error("{0} does not normalize T")]
    NotNormalizing(String),
    #[error("not a strip: {0}")]
    NotAStrip(String),
    #[error("strip support has size {0}; a nontrivial strip is required")]
    TrivialStrip(usize),
    #[error("strip isomorphism onto coordinate {0} is not induced by a known automorphism of T")]
    IsomorphismNotInduced(usize),
    #[error("{0} does not permute the coordinate blocks")]
    NotBlockPermuting(String),
}

/// Options for [`ProductGroup::with_options`].
#[derive(Clone, Debug)]
pub struct ProductOptions {
    /// Skip the simplicity check on `T`.
    pub assume_simple: bool,
    /// Extra permutations of the `d` points normalizing `T`. Together with
    /// `T` they generate the automorphism group used to recover strip
    /// isomorphisms.
    pub automorphisms: Vec<Perm>,
    pub cap: usize,
}

impl Default for ProductOptions {
    fn default() -> Self {
        ProductOptions {
            assume_simple: false,
            automorphisms: Vec::new(),
            cap: DEFAULT_ELEMENT_CAP,
        }
    }
}

struct ProductInner {
    t: PermGroup,
    k: usize,
    aut: PermGroup,
    cap: usize,
}

/// `M = T₁×…×T_k` with every `T_i` a copy of `t`.
#[derive(Clone)]
pub struct ProductGroup {
    inner: Arc<ProductInner>,
}

impl std::fmt::Debug for ProductGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "ProductGroup(k={}, d={})", self.k(), self.d())
    }
}

impl PartialEq for ProductGroup {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.k() == other.k()
                && self.d() == other.d()
                && self.t().generators() == other.t().generators())
    }
}

impl ProductGroup {
    pub fn new(t: PermGroup, k: usize) -> Result<Self, ProductError> {
        Self::with_options(t, k, ProductOptions::default())
    }

    pub fn with_options(t: PermGroup, k: usize, opts: ProductOptions) -> Result<Self, ProductError> {
        if k == 0 {
            return Err(ProductError::EmptyIndexSet);
        }
        let t = t.recapped(opts.cap);
        if !opts.assume_simple && !t.is_simple()? {
            return Err(ProductError::NotSimple);
        }
        for a in &opts.automorphisms {
            if a.degree() != t.degree() {
                return Err(GroupError::DegreeMismatch {
                    expected: t.degree(),
                    found: a.degree(),
                }
                .into());
            }
            if !t.is_normalized_by(a)? {
                return Err(ProductError::NotNormalizing(a.to_string()));
            }
        }
        let mut aut_gens = t.generators().to_vec();
        aut_gens.extend(opts.automorphisms.iter().cloned());
        let aut = PermGroup::with_cap(t.degree(), aut_gens, opts.cap)?;
        Ok(ProductGroup {
            inner: Arc::new(ProductInner {
                t,
                k,
                aut,
                cap: opts.cap,
            }),
        })
    }

    /// Same factor data with a different number of coordinates.
    pub fn with_k(&self, k: usize) -> ProductGroup {
        ProductGroup {
            inner: Arc::new(ProductInner {
                t: self.inner.t.clone(),
                k,
                aut: self.inner.aut.clone(),
                cap: self.inner.cap,
            }),
        }
    }

    pub fn t(&self) -> &PermGroup {
        &self.inner.t
    }

    pub fn k(&self) -> usize {
        self.inner.k
    }

    pub fn d(&self) -> usize {
        self.inner.t.degree()
    }

    pub fn degree(&self) -> usize {
        self.k() * self.d()
    }

    pub fn cap(&self) -> usize {
        self.inner.cap
    }

    /// Automorphisms of `T` available as permutations of the `d` points.
    pub fn automorphisms(&self) -> &PermGroup {
        &self.inner.aut
    }

    pub fn t_order(&self) -> Result<usize, ProductError> {
        Ok(self.t().order()?)
    }

    /// `|M| = |T|^k`, without enumerating `M`.
    pub fn order(&self) -> Result<u128, ProductError> {
        let t = self.t_order()? as u128;
        Ok((0..self.k()).fold(1u128, |acc, _| acc.saturating_mul(t)))
    }

    pub fn identity(&self) -> Perm {
        Perm::identity(self.degree())
    }

    /// The element with the given coordinates.
    pub fn embed(&self, coords: &[Perm]) -> Perm {
        debug_assert_eq!(coords.len(), self.k());
        let d = self.d();
        let mut img = Vec::with_capacity(self.degree());
        for (i, c) in coords.iter().enumerate() {
            let off = (i * d) as u32;
            img.extend(c.images().iter().map(|&x| x + off));
        }
        Perm::from_vec(img)
    }

    /// `x` placed in coordinate `i`, identity elsewhere.
    pub fn embed_at(&self, i: usize, x: &Perm) -> Perm {
        let d = self.d();
        let mut img: Vec<u32> = (0..self.degree() as u32).collect();
        for (p, &y) in x.images().iter().enumerate() {
            img[i * d + p] = (i * d) as u32 + y;
        }
        Perm::from_vec(img)
    }

    /// Coordinate `i` of an element of `M`.
    pub fn coordinate(&self, x: &Perm, i: usize) -> Perm {
        x.restrict(i * self.d(), self.d())
    }

    pub fn coordinates(&self, x: &Perm) -> Vec<Perm> {
        (0..self.k()).map(|i| self.coordinate(x, i)).collect()
    }

    /// The permutation of coordinates induced by a block-permuting element.
    pub fn block_map(&self, x: &Perm) -> Result<Perm, ProductError> {
        let d = self.d();
        let mut img = Vec::with_capacity(self.k());
        for i in 0..self.k() {
            let target = x.apply((i * d) as u32) as usize / d;
            for p in 0..d {
                if x.apply((i * d + p) as u32) as usize / d != target {
                    return Err(ProductError::NotBlockPermuting(x.to_string()));
                }
            }
            img.push(target as u32);
        }
        Perm::from_images(img).map_err(|_| ProductError::NotBlockPermuting(x.to_string()))
    }

    /// Membership in `M`, decided coordinatewise.
    pub fn contains(&self, x: &Perm) -> Result<bool, ProductError> {
        if x.degree() != self.degree() {
            return Ok(false);
        }
        let d = self.d();
        for i in 0..self.k() {
            for p in 0..d {
                if x.apply((i * d + p) as u32) as usize / d != i {
                    return Ok(false);
                }
            }
            if !self.t().contains(&self.coordinate(x, i))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn wrap(&self, gens: Vec<Perm>) -> Result<ProductSubgroup, ProductError> {
        Ok(ProductSubgroup {
            parent: self.clone(),
            group: PermGroup::with_cap(self.degree(), gens, self.cap())?,
        })
    }

    /// Subgroup generated by elements of `M`; every generator is checked.
    pub fn subgroup(&self, gens: Vec<Perm>) -> Result<ProductSubgroup, ProductError> {
        for g in &gens {
            if !self.contains(g)? {
                return Err(ProductError::NotInM(g.to_string()));
            }
        }
        self.wrap(gens)
    }

    /// Subgroup generated by coordinate tuples.
    pub fn subgroup_from_coords(&self, gens: &[Vec<Perm>]) -> Result<ProductSubgroup, ProductError> {
        let mut els = Vec::with_capacity(gens.len());
        for g in gens {
            if g.len() != self.k() {
                return Err(ProductError::NotInM(format!(
                    "tuple of length {} for k = {}",
                    g.len(),
                    self.k()
                )));
            }
            for c in g {
                if c.degree() != self.d() {
                    return Err(GroupError::DegreeMismatch {
                        expected: self.d(),
                        found: c.degree(),
                    }
                    .into());
                }
            }
            els.push(self.embed(g));
        }
        self.subgroup(els)
    }

    /// Wraps a group of degree `k·d` already known to lie in `M`.
    pub(crate) fn wrap_group(&self, group: PermGroup) -> ProductSubgroup {
        ProductSubgroup {
            parent: self.clone(),
            group,
        }
    }

    /// `M` itself.
    pub fn full(&self) -> ProductSubgroup {
        self.direct_product(&vec![self.t().clone(); self.k()])
    }

    /// `T_i`, the `i`-th simple factor.
    pub fn factor(&self, i: usize) -> ProductSubgroup {
        let mut parts = vec![PermGroup::trivial(self.d()); self.k()];
        parts[i] = self.t().clone();
        self.direct_product(&parts)
    }

    /// `H₀×…×H_{k−1}` for subgroups `H_i` of `T` (not checked).
    pub fn direct_product(&self, parts: &[PermGroup]) -> ProductSubgroup {
        let mut gens = Vec::new();
        for (i, h) in parts.iter().enumerate() {
            for g in h.generators() {
                gens.push(self.embed_at(i, g));
            }
        }
        self.wrap(gens).expect("degrees agree")
    }

    /// `∏_{i∈I} T_i` as a product group of its own.
    pub fn sub_product(&self, coords: &[usize]) -> ProductGroup {
        self.with_k(coords.len())
    }
}

/// A subgroup of a [`ProductGroup`].
#[derive(Clone, Debug)]
pub struct ProductSubgroup {
    parent: ProductGroup,
    group: PermGroup,
}

impl ProductSubgroup {
    pub fn parent(&self) -> &ProductGroup {
        &self.parent
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn generators(&self) -> &[Perm] {
        self.group.generators()
    }

    pub fn order(&self) -> Result<usize, ProductError> {
        Ok(self.group.order()?)
    }

    pub fn elements(&self) -> Result<&[Perm], ProductError> {
        Ok(self.group.elements()?)
    }

    pub fn contains(&self, x: &Perm) -> Result<bool, ProductError> {
        Ok(self.group.contains(x)?)
    }

    pub fn is_trivial(&self) -> bool {
        self.group.is_trivial()
    }

    /// Order strictly below `|M|`.
    pub fn is_proper(&self) -> Result<bool, ProductError> {
        Ok((self.order()? as u128) < self.parent.order()?)
    }

    pub fn is_subgroup_of(&self, other: &ProductSubgroup) -> Result<bool, ProductError> {
        Ok(self.group.is_subgroup_of(&other.group)?)
    }

    pub fn same(&self, other: &ProductSubgroup) -> Result<bool, ProductError> {
        Ok(self.group.same_group(&other.group)?)
    }

    pub fn intersection(&self, other: &ProductSubgroup) -> Result<ProductSubgroup, ProductError> {
        Ok(self.parent.wrap_group(self.group.intersection(&other.group)?))
    }

    pub fn join(&self, other: &ProductSubgroup) -> ProductSubgroup {
        self.parent.wrap_group(self.group.join(&other.group))
    }

    /// `x⁻¹·K·x` for a permutation of the `k·d` points normalizing `M`.
    pub fn conjugate(&self, x: &Perm) -> ProductSubgroup {
        self.parent.wrap_group(self.group.conjugate(x))
    }

    pub fn is_normalized_by(&self, x: &Perm) -> Result<bool, ProductError> {
        Ok(self.group.is_normalized_by(x)?)
    }

    /// `σ_i(K)` as a subgroup of `T`.
    pub fn projection(&self, i: usize) -> PermGroup {
        let d = self.parent.d();
        let gens = self
            .generators()
            .iter()
            .map(|g| g.restrict(i * d, d))
            .collect();
        PermGroup::with_cap(d, gens, self.parent.cap()).expect("degrees agree")
    }

    /// `σ_I(K)` inside `∏_{i∈I} T_i`, with coordinates renumbered in the
    /// order given.
    pub fn project(&self, coords: &[usize]) -> Result<ProductSubgroup, ProductError> {
        if coords.is_empty() {
            return Err(ProductError::EmptyIndexSet);
        }
        for &i in coords {
            if i >= self.parent.k() {
                return Err(ProductError::CoordinateOutOfRange(i));
            }
        }
        let sub = self.parent.sub_product(coords);
        let gens = self
            .generators()
            .iter()
            .map(|g| {
                let parts: Vec<Perm> = coords.iter().map(|&i| self.parent.coordinate(g, i)).collect();
                sub.embed(&parts)
            })
            .collect();
        sub.wrap(gens)
    }

    /// `σ_I(K)` kept inside `M`: coordinates outside `I` are set to the
    /// identity.
    pub fn project_in_place(&self, coords: &[usize]) -> ProductSubgroup {
        let pg = &self.parent;
        let gens = self
            .generators()
            .iter()
            .map(|g| {
                let parts: Vec<Perm> = (0..pg.k())
                    .map(|i| {
                        if coords.contains(&i) {
                            pg.coordinate(g, i)
                        } else {
                            Perm::identity(pg.d())
                        }
                    })
                    .collect();
                pg.embed(&parts)
            })
            .collect();
        pg.wrap(gens).expect("degrees agree")
    }

    /// Coordinates with nontrivial projection.
    pub fn support(&self) -> Vec<usize> {
        (0..self.parent.k())
            .filter(|&i| {
                let d = self.parent.d();
                self.generators().iter().any(|g| !g.restrict(i * d, d).is_identity())
            })
            .collect()
    }

    /// Canonical generators: the greedy generating set over the sorted
    /// element list.
    pub fn canonical_generators(&self) -> Result<Vec<Perm>, ProductError> {
        let els = self.elements()?.to_vec();
        let g = PermGroup::from_elements(self.parent.degree(), els, self.parent.cap());
        Ok(g.generators().to_vec())
    }

    /// Canonical generators written as coordinate tuples of cycle strings.
    pub fn describe(&self) -> Result<Vec<Vec<String>>, ProductError> {
        Ok(self
            .canonical_generators()?
            .iter()
            .map(|g| {
                self.parent
                    .coordinates(g)
                    .iter()
                    .map(|c| c.to_cycle_string())
                    .collect()
            })
            .collect())
    }
}

/// A subgroup whose projections are injective on its support.
#[derive(Clone, Debug)]
pub struct Strip {
    subgroup: ProductSubgroup,
    support: Vec<usize>,
}

impl Strip {
    /// Validates that `subgroup` is a nontrivial-order strip.
    pub fn new(subgroup: ProductSubgroup) -> Result<Strip, ProductError> {
        let support = subgroup.support();
        if support.is_empty() {
            return Err(ProductError::NotAStrip("trivial subgroup".into()));
        }
        let n = subgroup.order()?;
        for &i in &support {
            if subgroup.projection(i).order()? != n {
                return Err(ProductError::NotAStrip(format!(
                    "projection to coordinate {i} is not injective"
                )));
            }
        }
        Ok(Strip { subgroup, support })
    }

    /// The strip `{(h^{maps[0]}, …, h^{maps[r−1]}) : h ∈ h1}` on the given
    /// support; `maps` are automorphisms of `T` given as normalizing
    /// permutations.
    pub fn diagonal(
        pg: &ProductGroup,
        support: &[usize],
        h1: &PermGroup,
        maps: &[Perm],
    ) -> Result<Strip, ProductError> {
        assert_eq!(support.len(), maps.len());
        let mut gens = Vec::new();
        for h in h1.generators() {
            let mut parts = vec![Perm::identity(pg.d()); pg.k()];
            for (&i, m) in support.iter().zip(maps) {
                if i >= pg.k() {
                    return Err(ProductError::CoordinateOutOfRange(i));
                }
                parts[i] = h.conj(m);
            }
            gens.push(pg.embed(&parts));
        }
        Strip::new(pg.subgroup(gens)?)
    }

    pub fn subgroup(&self) -> &ProductSubgroup {
        &self.subgroup
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    pub fn min(&self) -> usize {
        self.support[0]
    }

    pub fn max(&self) -> usize {
        *self.support.last().expect("nonempty support")
    }

    pub fn is_nontrivial(&self) -> bool {
        self.support.len() >= 2
    }

    pub fn is_full(&self) -> Result<bool, ProductError> {
        let t = self.subgroup.parent().t_order()?;
        Ok(self.subgroup.order()? == t)
    }
}

/// One connected component of the coordinate link graph of a subgroup.
#[derive(Clone, Debug)]
pub struct StripComponent {
    pub support: Vec<usize>,
    /// `σ_S(K)` kept inside `M`.
    pub projection: ProductSubgroup,
    pub is_strip: bool,
    pub is_full_strip: bool,
}

/// Result of [`detect_strips`].
#[derive(Clone, Debug)]
pub enum StripDecomposition {
    /// `K = X₁×…×X_m×σ_R(K)`.
    Clean {
        strips: Vec<Strip>,
        residual: Vec<usize>,
    },
    NoCleanDecomposition {
        components: Vec<Vec<usize>>,
        reason: String,
    },
}

impl StripDecomposition {
    pub fn strips(&self) -> &[Strip] {
        match self {
            StripDecomposition::Clean { strips, .. } => strips,
            StripDecomposition::NoCleanDecomposition { .. } => &[],
        }
    }

    pub fn is_clean(&self) -> bool {
        matches!(self, StripDecomposition::Clean { .. })
    }
}

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    let mut y = x;
    while parent[y] != r {
        let n = parent[y];
        parent[y] = r;
        y = n;
    }
    r
}

/// Components of the graph linking `i` and `j` when `σ_{i,j}(K)` is smaller
/// than `σ_i(K)×σ_j(K)`. Coordinates with trivial projection are left out.
pub fn strip_components(k: &ProductSubgroup) -> Result<Vec<StripComponent>, ProductError> {
    let pg = k.parent();
    let n = pg.k();
    let proj_orders: Vec<usize> = (0..n)
        .map(|i| k.projection(i).order())
        .collect::<Result<_, _>>()?;
    let mut parent: Vec<usize> = (0..n).collect();
    for i in 0..n {
        if proj_orders[i] == 1 {
            continue;
        }
        for j in i + 1..n {
            if proj_orders[j] == 1 || find(&mut parent, i) == find(&mut parent, j) {
                continue;
            }
            let pair = k.project(&[i, j])?.order()?;
            if pair != proj_orders[i] * proj_orders[j] {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let roots: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
    let mut comps: Vec<Vec<usize>> = Vec::new();
    for i in 0..n {
        if proj_orders[i] == 1 {
            continue;
        }
        match comps.iter_mut().find(|c| roots[c[0]] == roots[i]) {
            Some(c) => c.push(i),
            None => comps.push(vec![i]),
        }
    }
    let t = pg.t_order()?;
    let mut out = Vec::new();
    for s in comps {
        let projection = k.project_in_place(&s);
        let order = projection.order()?;
        let is_strip = s.iter().all(|&i| proj_orders[i] == order);
        let is_full_strip = is_strip && order == t;
        out.push(StripComponent {
            support: s,
            projection,
            is_strip,
            is_full_strip,
        });
    }
    Ok(out)
}

/// True when `K` is the direct product of its link-graph components.
pub fn is_product_of_components(
    k: &ProductSubgroup,
    comps: &[StripComponent],
) -> Result<bool, ProductError> {
    let mut prod = 1u128;
    for c in comps {
        prod *= c.projection.order()? as u128;
    }
    Ok(prod == k.order()? as u128)
}

/// Nontrivial full strips involved in `K`, with the remaining coordinates.
pub fn detect_strips(k: &ProductSubgroup) -> Result<StripDecomposition, ProductError> {
    let pg = k.parent();
    let comps = strip_components(k)?;
    let mut strips = Vec::new();
    let mut in_strip = BTreeSet::new();
    let mut residual_parts: Vec<&StripComponent> = Vec::new();
    for c in &comps {
        if c.support.len() >= 2 {
            if !c.is_full_strip {
                return Ok(StripDecomposition::NoCleanDecomposition {
                    components: comps.iter().map(|c| c.support.clone()).collect(),
                    reason: format!(
                        "coordinates {:?} are linked but do not form a full strip",
                        c.support
                    ),
                });
            }
            in_strip.extend(c.support.iter().copied());
            strips.push(Strip {
                subgroup: c.projection.clone(),
                support: c.support.clone(),
            });
        } else {
            residual_parts.push(c);
        }
    }
    let residual: Vec<usize> = (0..pg.k()).filter(|i| !in_strip.contains(i)).collect();
    let mut prod = 1u128;
    for s in &strips {
        prod *= s.subgroup.order()? as u128;
    }
    for c in residual_parts {
        prod *= c.projection.order()? as u128;
    }
    if prod != k.order()? as u128 {
        return Ok(StripDecomposition::NoCleanDecomposition {
            components: comps.iter().map(|c| c.support.clone()).collect(),
            reason: format!(
                "order {} differs from the product {} of the parts",
                k.order()?,
                prod
            ),
        });
    }
    Ok(StripDecomposition::Clean { strips, residual })
}

/// For each coordinate `i` of the support after the first, an automorphism
/// `π_i` of `T` with `x_{s₀}^{π_i} = x_i` on every generator `x` of the strip.
pub fn strip_isomorphisms(x: &Strip) -> Result<Vec<Perm>, ProductError> {
    let pg = x.subgroup().parent();
    let s0 = x.min();
    let gens: Vec<(Perm, Vec<Perm>)> = x
        .subgroup()
        .generators()
        .iter()
        .map(|g| (pg.coordinate(g, s0), pg.coordinates(g)))
        .collect();
    let aut = pg.automorphisms().elements()?;
    let mut maps = vec![Perm::identity(pg.d())];
    for &i in &x.support()[1..] {
        let found = aut
            .iter()
            .find(|a| gens.iter().all(|(h, cs)| h.conj(a) == cs[i]))
            .ok_or(ProductError::IsomorphismNotInduced(i))?;
        maps.push(found.clone());
    }
    Ok(maps)
}

/// `N_{∏_{i∈S} T_i}(X)` from the diagonal-times-centralizer formula,
/// embedded in `M` with identity outside the support `S`.
pub fn normalizer_of_strip(x: &Strip) -> Result<ProductSubgroup, ProductError> {
    if !x.is_nontrivial() {
        return Err(ProductError::TrivialStrip(x.support().len()));
    }
    let pg = x.subgroup().parent();
    let t = pg.t();
    let s0 = x.min();
    let maps = strip_isomorphisms(x)?;
    let h1 = x.subgroup().projection(s0);
    let n1 = t.normalizer(&h1)?;
    let mut gens = Vec::new();
    for g in n1.generators() {
        let mut parts = vec![Perm::identity(pg.d()); pg.k()];
        for (&i, m) in x.support().iter().zip(&maps) {
            parts[i] = g.conj(m);
        }
        gens.push(pg.embed(&parts));
    }
    for (&i, m) in x.support().iter().zip(&maps).skip(1) {
        let hi = h1.conjugate(m);
        for c in t.centralizer(&hi)?.generators() {
            gens.push(pg.embed_at(i, c));
        }
    }
    pg.subgroup(gens)
}

/// Brute-force `N_{∏_{i∈S} T_i}(X)`: streams every tuple of `T^{|S|}` and
/// keeps those normalizing `X`. Returned in canonical order.
pub fn brute_normalizer_of_strip(x: &Strip) -> Result<Vec<Perm>, ProductError> {
    let pg = x.subgroup().parent();
    let support = x.support().to_vec();
    brute_normalizer_on(x.subgroup(), &support, pg)
}

/// Scans `∏_{i∈S} T_i` for elements normalizing `h`.
pub(crate) fn brute_normalizer_on(
    h: &ProductSubgroup,
    support: &[usize],
    pg: &ProductGroup,
) -> Result<Vec<Perm>, ProductError> {
    let t_els = pg.t().elements()?;
    let n = t_els.len();
    let mut idx = vec![0usize; support.len()];
    let mut out = Vec::new();
    let mut parts = vec![Perm::identity(pg.d()); pg.k()];
    loop {
        for (j, &i) in support.iter().enumerate() {
            parts[i] = t_els[idx[j]].clone();
        }
        let e = pg.embed(&parts);
        if h.is_normalized_by(&e)? {
            out.push(e);
        }
        let mut j = support.len();
        loop {
            if j == 0 {
                out.sort();
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < n {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// `N_M(H)` computed componentwise: when `H` is the direct product of its
/// link-graph components, the normalizer is the product of the component
/// normalizers. Components that are not strips are scanned directly.
pub fn normalizer_in_m(h: &ProductSubgroup) -> Result<ProductSubgroup, ProductError> {
    let pg = h.parent();
    let comps = strip_components(h)?;
    if !is_product_of_components(h, &comps)? {
        let all: Vec<usize> = (0..pg.k()).collect();
        let els = brute_normalizer_on(h, &all, pg)?;
        return Ok(pg.wrap_group(PermGroup::from_elements(pg.degree(), els, pg.cap())));
    }
    let covered: BTreeSet<usize> = comps.iter().flat_map(|c| c.support.iter().copied()).collect();
    let mut gens = Vec::new();
    for c in &comps {
        let part = if c.support.len() == 1 {
            let i = c.support[0];
            let n = pg.t().normalizer(&h.projection(i))?;
            n.generators().iter().map(|g| pg.embed_at(i, g)).collect()
        } else if c.is_strip {
            let strip = Strip {
                subgroup: c.projection.clone(),
                support: c.support.clone(),
            };
            match normalizer_of_strip(&strip) {
                Ok(n) => n.generators().to_vec(),
                Err(ProductError::IsomorphismNotInduced(_)) => {
                    brute_component(&c.projection, &c.support, pg)?
                }
                Err(e) => return Err(e),
            }
        } else {
            brute_component(&c.projection, &c.support, pg)?
        };
        gens.extend(part);
    }
    for i in 0..pg.k() {
        if !covered.contains(&i) {
            gens.extend(pg.t().generators().iter().map(|g| pg.embed_at(i, g)));
        }
    }
    pg.subgroup(gens)
}

fn brute_component(
    h: &ProductSubgroup,
    support: &[usize],
    pg: &ProductGroup,
) -> Result<Vec<Perm>, ProductError> {
    let els = brute_normalizer_on(h, support, pg)?;
    Ok(PermGroup::from_elements(pg.degree(), els, pg.cap())
        .generators()
        .to_vec())
}

/// An automorphism of `M` that permutes coordinates: coordinate `i` of `x`
/// is sent to coordinate `σ(i)` as `τ_i⁻¹·x_i·τ_i`.
///
/// This is conjugation by the permutation `(i, p) ↦ (σ(i), τ_i(p))` of the
/// `k·d` points, so products follow the wreath law
/// `(σ, τ)·(σ', τ') = (σσ', i ↦ τ_i·τ'_{σ(i)})`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GOmegaAction {
    pub coord_perm: Perm,
    pub twists: Vec<Perm>,
}

impl GOmegaAction {
    pub fn new(pg: &ProductGroup, coord_perm: Perm, twists: Vec<Perm>) -> Result<Self, ProductError> {
        if coord_perm.degree() != pg.k() {
            return Err(GroupError::DegreeMismatch {
                expected: pg.k(),
                found: coord_perm.degree(),
            }
            .into());
        }
        if twists.len() != pg.k() {
            return Err(ProductError::NotInM(format!(
                "{} twists for k = {}",
                twists.len(),
                pg.k()
            )));
        }
        for t in &twists {
            if t.degree() != pg.d() {
                return Err(GroupError::DegreeMismatch {
                    expected: pg.d(),
                    found: t.degree(),
                }
                .into());
            }
            if !pg.t().is_normalized_by(t)? {
                return Err(ProductError::NotNormalizing(t.to_string()));
            }
        }
        Ok(GOmegaAction { coord_perm, twists })
    }

    pub fn identity(pg: &ProductGroup) -> Self {
        GOmegaAction {
            coord_perm: Perm::identity(pg.k()),
            twists: vec![Perm::identity(pg.d()); pg.k()],
        }
    }

    /// The inner automorphism induced by an element of `M`.
    pub fn inner(pg: &ProductGroup, x: &Perm) -> Self {
        GOmegaAction {
            coord_perm: Perm::identity(pg.k()),
            twists: pg.coordinates(x),
        }
    }

    pub fn to_perm(&self, pg: &ProductGroup) -> Perm {
        let d = pg.d();
        let mut img = vec![0u32; pg.degree()];
        for i in 0..pg.k() {
            let j = self.coord_perm.apply(i as u32) as usize;
            for p in 0..d {
                img[i * d + p] = (j * d) as u32 + self.twists[i].apply(p as u32);
            }
        }
        Perm::from_vec(img)
    }

    /// Inverse of [`GOmegaAction::to_perm`]; twists are validated.
    pub fn from_perm(pg: &ProductGroup, x: &Perm) -> Result<Self, ProductError> {
        let coord_perm = pg.block_map(x)?;
        let d = pg.d();
        let twists = (0..pg.k())
            .map(|i| {
                let j = coord_perm.apply(i as u32) as usize;
                let img = (0..d)
                    .map(|p| x.apply((i * d + p) as u32) - (j * d) as u32)
                    .collect();
                Perm::from_vec(img)
            })
            .collect();
        GOmegaAction::new(pg, coord_perm, twists)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &GOmegaAction) -> GOmegaAction {
        let twists = (0..self.twists.len())
            .map(|i| {
                let j = self.coord_perm.apply(i as u32) as usize;
                self.twists[i].compose(&other.twists[j])
            })
            .collect();
        GOmegaAction {
            coord_perm: self.coord_perm.compose(&other.coord_perm),
            twists,
        }
    }

    pub fn inverse(&self) -> GOmegaAction {
        let inv = self.coord_perm.inverse();
        let twists = (0..self.twists.len())
            .map(|j| {
                let i = inv.apply(j as u32) as usize;
                self.twists[i].inverse()
            })
            .collect();
        GOmegaAction {
            coord_perm: inv,
            twists,
        }
    }

    /// Image of an element of `M`.
    pub fn apply(&self, pg: &ProductGroup, x: &Perm) -> Perm {
        let cs = pg.coordinates(x);
        let mut out = vec![Perm::identity(pg.d()); pg.k()];
        for (i, c) in cs.iter().enumerate() {
            let j = self.coord_perm.apply(i as u32) as usize;
            out[j] = c.conj(&self.twists[i]);
        }
        pg.embed(&out)
    }

    /// Image subgroup `K^g`.
    pub fn act(&self, k: &ProductSubgroup) -> ProductSubgroup {
        k.conjugate(&self.to_perm(k.parent()))
    }
}

/// The group generated by a list of [`GOmegaAction`]s, held as a permutation
/// group on the `k·d` points.
#[derive(Clone, Debug)]
pub struct GOmegaGroup {
    parent: ProductGroup,
    generators: Vec<GOmegaAction>,
    group: PermGroup,
}

impl GOmegaGroup {
    pub fn new(pg: &ProductGroup, generators: Vec<GOmegaAction>) -> Result<Self, ProductError> {
        Self::with_cap(pg, generators, pg.cap())
    }

    pub fn with_cap(
        pg: &ProductGroup,
        generators: Vec<GOmegaAction>,
        cap: usize,
    ) -> Result<Self, ProductError> {
        let perms = generators.iter().map(|g| g.to_perm(pg)).collect();
        Ok(GOmegaGroup {
            parent: pg.clone(),
            generators,
            group: PermGroup::with_cap(pg.degree(), perms, cap)?,
        })
    }

    pub fn parent(&self) -> &ProductGroup {
        &self.parent
    }

    pub fn generators(&self) -> &[GOmegaAction] {
        &self.generators
    }

    pub fn group(&self) -> &PermGroup {
        &self.group
    }

    pub fn elements(&self) -> Result<&[Perm], ProductError> {
        Ok(self.group.elements()?)
    }

    pub fn order(&self) -> Result<usize, ProductError> {
        Ok(self.group.order()?)
    }

    /// Coordinate permutation induced by a closure element.
    pub fn coordinate_perm(&self, x: &Perm) -> Perm {
        self.parent.block_map(x).expect("closure elements permute blocks")
    }

    /// True when the coordinate permutations generate a transitive group.
    pub fn coordinate_orbit_transitive(&self) -> bool {
        let k = self.parent.k();
        let mut seen = vec![false; k];
        seen[0] = true;
        let mut stack = vec![0u32];
        while let Some(i) = stack.pop() {
            for g in &self.generators {
                let j = g.coord_perm.apply(i);
                if !seen[j as usize] {
                    seen[j as usize] = true;
                    stack.push(j);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// First closure element in canonical order mapping `h1` onto `h2`.
    pub fn are_conjugate_under_gomega(
        &self,
        h1: &ProductSubgroup,
        h2: &ProductSubgroup,
    ) -> Result<Option<Perm>, ProductError> {
        if h1.order()? != h2.order()? {
            return Ok(None);
        }
        for x in self.elements()? {
            let mut ok = true;
            for g in h1.generators() {
                if !h2.contains(&g.conj(x))? {
                    ok = false;
                    break;
                }
            }
            if ok {
                return Ok(Some(x.clone()));
            }
        }
        Ok(None)
    }

    /// Closure elements normalizing `h`, in canonical order.
    pub fn normalizer_elements(&self, h: &ProductSubgroup) -> Result<Vec<Perm>, ProductError> {
        let mut out = Vec::new();
        for x in self.elements()? {
            if h.is_normalized_by(x)? {
                out.push(x.clone());
            }
        }
        Ok(out)
    }

    /// Closure elements fixing coordinate `i`.
    pub fn coordinate_stabilizer(&self, i: usize) -> Result<Vec<Perm>, ProductError> {
        let d = self.parent.d();
        Ok(self
            .elements()?
            .iter()
            .filter(|x| x.apply((i * d) as u32) as usize / d == i)
            .cloned()
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str, n: usize) -> Perm {
        Perm::parse(s, n).unwrap()
    }

    fn grp(n: usize, gens: &[&str]) -> PermGroup {
        PermGroup::new(n, gens.iter().map(|g| p(g, n)).collect()).unwrap()
    }

    fn a5() -> PermGroup {
        grp(5, &["(0 1 2 3 4)", "(0 1 2)"])
    }

    fn a4() -> PermGroup {
        grp(5, &["(0 1 2)", "(0 1) (2 3)"])
    }

    fn d10() -> PermGroup {
        grp(5, &["(0 1 2 3 4)", "(1 4) (2 3)"])
    }

    fn a5_power(k: usize) -> ProductGroup {
        ProductGroup::with_options(
            a5(),
            k,
            ProductOptions {
                automorphisms: vec![p("(0 1)", 5)],
                ..Default::default()
            },
        )
        .unwrap()
    }

    #[test]
    fn rejects_non_simple_factor() {
        let s4 = grp(4, &["(0 1 2 3)", "(0 1)"]);
        assert!(matches!(ProductGroup::new(s4, 2), Err(ProductError::NotSimple)));
    }

    #[test]
    fn projections() {
        let pg = a5_power(2);
        let diag = Strip::diagonal(&pg, &[0, 1], &a5(), &[Perm::identity(5), Perm::identity(5)]).unwrap();
        let p0 = diag.subgroup().project(&[0]).unwrap();
        assert_eq!(p0.order().unwrap(), 60);
        let k = pg.direct_product(&[a4(), d10()]);
        assert_eq!(k.project(&[1]).unwrap().order().unwrap(), 10);
        assert_eq!(pg.full().project(&[1, 0]).unwrap().order().unwrap(), 3600);
        assert_eq!(k.project(&[]).unwrap_err(), ProductError::EmptyIndexSet);
    }

    #[test]
    fn membership_in_m_is_coordinatewise() {
        let pg = a5_power(2);
        assert!(pg.contains(&pg.embed(&[p("(0 1 2)", 5), p("()", 5)])).unwrap());
        assert!(!pg.contains(&pg.embed(&[p("(0 1)", 5), p("()", 5)])).unwrap());
        let swap = GOmegaAction::new(&pg, p("(0 1)", 2), vec![Perm::identity(5); 2])
            .unwrap()
            .to_perm(&pg);
        assert!(!pg.contains(&swap).unwrap());
        assert_eq!(pg.order().unwrap(), 3600);
    }

    #[test]
    fn detects_strips() {
        let pg = a5_power(2);
        let id = Perm::identity(5);
        let diag = Strip::diagonal(&pg, &[0, 1], &a5(), &[id.clone(), id.clone()]).unwrap();
        match detect_strips(diag.subgroup()).unwrap() {
            StripDecomposition::Clean { strips, residual } => {
                assert_eq!(strips.len(), 1);
                assert_eq!(strips[0].support(), &[0, 1]);
                assert!(residual.is_empty());
            }
            other => panic!("{other:?}"),
        }
        let k = pg.direct_product(&[a4(), d10()]);
        match detect_strips(&k).unwrap() {
            StripDecomposition::Clean { strips, residual } => {
                assert!(strips.is_empty());
                assert_eq!(residual, vec![0, 1]);
            }
            other => panic!("{other:?}"),
        }
        let pg3 = a5_power(3);
        let diag3 = Strip::diagonal(&pg3, &[0, 1], &a5(), &[id.clone(), id.clone()]).unwrap();
        let k3 = diag3.subgroup().join(&pg3.direct_product(&[
            PermGroup::trivial(5),
            PermGroup::trivial(5),
            a4(),
        ]));
        match detect_strips(&k3).unwrap() {
            StripDecomposition::Clean { strips, residual } => {
                assert_eq!(strips.len(), 1);
                assert_eq!(strips[0].support(), &[0, 1]);
                assert_eq!(residual, vec![2]);
            }
            other => panic!("{other:?}"),
        }
        // A non-full diagonal links its coordinates without forming a full strip.
        let dd = Strip::diagonal(&pg, &[0, 1], &d10(), &[id.clone(), id]).unwrap();
        assert!(!detect_strips(dd.subgroup()).unwrap().is_clean());
    }

    #[test]
    fn strip_normalizer_examples() {
        let pg = a5_power(2);
        let id = Perm::identity(5);
        let diag = Strip::diagonal(&pg, &[0, 1], &a5(), &[id.clone(), id.clone()]).unwrap();
        let n = normalizer_of_strip(&diag).unwrap();
        assert!(n.same(diag.subgroup()).unwrap());
        assert_eq!(brute_normalizer_of_strip(&diag).unwrap(), n.elements().unwrap());

        let dd = Strip::diagonal(&pg, &[0, 1], &d10(), &[id.clone(), id.clone()]).unwrap();
        let n = normalizer_of_strip(&dd).unwrap();
        assert_eq!(n.order().unwrap(), 10);
        assert_eq!(brute_normalizer_of_strip(&dd).unwrap(), n.elements().unwrap());

        let single = Strip::new(pg.direct_product(&[a4(), PermGroup::trivial(5)])).unwrap();
        assert_eq!(
            normalizer_of_strip(&single).unwrap_err(),
            ProductError::TrivialStrip(1)
        );
    }

    #[test]
    fn outer_twisted_strip() {
        let pg = a5_power(2);
        let id = Perm::identity(5);
        let s = Strip::diagonal(&pg, &[0, 1], &a4(), &[id, p("(0 1)", 5)]).unwrap();
        let n = normalizer_of_strip(&s).unwrap();
        assert_eq!(brute_normalizer_of_strip(&s).unwrap(), n.elements().unwrap());
    }

    #[test]
    fn strip_isomorphism_must_be_induced() {
        // Without the outer automorphism, a twist by (0 1) cannot be recovered.
        let pg = ProductGroup::new(a5(), 2).unwrap();
        let s = Strip::diagonal(&pg, &[0, 1], &a4(), &[Perm::identity(5), p("(0 1)", 5)]);
        // Only conjugation by (0 1) itself agrees with the twist on A4.
        let s = s.unwrap();
        assert_eq!(
            normalizer_of_strip(&s).unwrap_err(),
            ProductError::IsomorphismNotInduced(1)
        );
    }

    #[test]
    fn actions_on_subgroups() {
        let pg = a5_power(2);
        let k = pg.direct_product(&[a4(), d10()]);
        let id = GOmegaAction::identity(&pg);
        assert!(id.act(&k).same(&k).unwrap());
        let swap = GOmegaAction::new(&pg, p("(0 1)", 2), vec![Perm::identity(5); 2]).unwrap();
        assert!(swap.act(&k).same(&pg.direct_product(&[d10(), a4()])).unwrap());
        let t = p("(0 1 2 3 4)", 5);
        let inner = GOmegaAction::new(&pg, Perm::identity(2), vec![t.clone(), Perm::identity(5)]).unwrap();
        let expected = pg.direct_product(&[a4().conjugate(&t), d10()]);
        assert!(inner.act(&k).same(&expected).unwrap());
    }

    #[test]
    fn twists_must_normalize() {
        let pg = ProductGroup::new(grp(6, &["(0 1 2)", "(1 2 3 4 5)"]), 1).unwrap();
        let r = GOmegaAction::new(&pg, Perm::identity(1), vec![p("(0 1)", 6)]);
        assert!(r.is_ok());
        let pg5 = ProductGroup::new(grp(6, &["(0 1 2 3 4)", "(0 1 2)"]), 1).unwrap();
        let bad = GOmegaAction::new(&pg5, Perm::identity(1), vec![p("(4 5)", 6)]);
        assert!(matches!(bad, Err(ProductError::NotNormalizing(_))));
    }

    #[test]
    fn coordinate_transitivity() {
        let pg1 = a5_power(1);
        let g = GOmegaGroup::new(&pg1, vec![]).unwrap();
        assert!(g.coordinate_orbit_transitive());
        let pg = a5_power(2);
        let inner = GOmegaAction::new(&pg, Perm::identity(2), vec![p("(0 1 2)", 5), Perm::identity(5)]).unwrap();
        assert!(!GOmegaGroup::new(&pg, vec![inner]).unwrap().coordinate_orbit_transitive());
        let swap = GOmegaAction::new(&pg, p("(0 1)", 2), vec![Perm::identity(5); 2]).unwrap();
        assert!(GOmegaGroup::new(&pg, vec![swap]).unwrap().coordinate_orbit_transitive());
    }

    #[test]
    fn conjugacy_under_gomega() {
        let pg = a5_power(1);
        let g = GOmegaGroup::new(&pg, vec![GOmegaAction::new(&pg, Perm::identity(1), vec![p("(0 1)", 5)]).unwrap()]).unwrap();
        let a = pg.direct_product(&[a4()]);
        let d = pg.direct_product(&[d10()]);
        assert_eq!(g.are_conjugate_under_gomega(&a, &a).unwrap(), Some(Perm::identity(5)));
        assert_eq!(g.are_conjugate_under_gomega(&a, &d).unwrap(), None);
    }

    #[test]
    fn wreath_law() {
        let pg = a5_power(3);
        let a = GOmegaAction::new(
            &pg,
            p("(0 1 2)", 3),
            vec![p("(0 1)", 5), p("(0 1 2)", 5), Perm::identity(5)],
        )
        .unwrap();
        let b = GOmegaAction::new(
            &pg,
            p("(0 1)", 3),
            vec![p("(2 3 4)", 5), p("(1 2)", 5), p("(0 4) (1 2)", 5)],
        )
        .unwrap();
        assert_eq!(a.compose(&b).to_perm(&pg), a.to_perm(&pg).compose(&b.to_perm(&pg)));
        assert_eq!(a.inverse().to_perm(&pg), a.to_perm(&pg).inverse());
        assert_eq!(GOmegaAction::from_perm(&pg, &a.to_perm(&pg)).unwrap(), a);
    }

    fn arb_action(k: usize) -> impl Strategy<Value = (Vec<u32>, Vec<usize>)> {
        (Just((0..k as u32).collect::<Vec<u32>>()).prop_shuffle(), proptest::collection::vec(0usize..120, k))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn actions_are_automorphisms_of_m(
            (perm, tw) in arb_action(3),
            xs in proptest::collection::vec(0usize..60, 3),
            ys in proptest::collection::vec(0usize..60, 3),
        ) {
            let pg = a5_power(3);
            let s5 = pg.automorphisms().elements().unwrap().to_vec();
            let t = pg.t().elements().unwrap().to_vec();
            let g = GOmegaAction::new(
                &pg,
                Perm::from_images(perm).unwrap(),
                tw.iter().map(|&i| s5[i].clone()).collect(),
            ).unwrap();
            let x = pg.embed(&xs.iter().map(|&i| t[i].clone()).collect::<Vec<_>>());
            let y = pg.embed(&ys.iter().map(|&i| t[i].clone()).collect::<Vec<_>>());
            let gx = g.apply(&pg, &x);
            prop_assert!(pg.contains(&gx).unwrap());
            prop_assert_eq!(gx.order(), x.order());
            prop_assert_eq!(g.apply(&pg, &x.compose(&y)), gx.compose(&g.apply(&pg, &y)));
            prop_assert_eq!(g.inverse().apply(&pg, &gx), x.clone());
            prop_assert_eq!(gx, x.conj(&g.to_perm(&pg)));
        }

        #[test]
        fn subgroup_sits_in_product_of_projections(
            xs in proptest::collection::vec(0usize..60, 2),
            ys in proptest::collection::vec(0usize..60, 2),
        ) {
            let pg = a5_power(2);
            let t = pg.t().elements().unwrap().to_vec();
            let k = pg.subgroup(vec![
                pg.embed(&[t[xs[0]].clone(), t[xs[1]].clone()]),
                pg.embed(&[t[ys[0]].clone(), t[ys[1]].clone()]),
            ]).unwrap();
            let prod = pg.direct_product(&[k.projection(0), k.projection(1)]);
            prop_assert!(k.is_subgroup_of(&prod).unwrap());
            let equal = k.order().unwrap() == prod.order().unwrap();
            let linked = strip_components(&k).unwrap().iter().any(|c| c.support.len() == 2);
            prop_assert_eq!(equal, !linked);
        }
    }
}
