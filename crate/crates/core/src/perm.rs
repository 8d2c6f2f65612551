//! Permutations and finite permutation groups.
//!
//! Points are `0..degree`. Products are read left to right: `p.compose(q)`
//! applies `p` first, then `q`. Conjugation is `h^x = x⁻¹·h·x`.
//!
//! Groups are handled by full element enumeration, bounded by an element cap.
//! Element lists are always returned in canonical order, which is
//! lexicographic order on image arrays.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

/// Default bound on the number of elements enumerated for a single group.
pub const DEFAULT_ELEMENT_CAP: usize = 200_000;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GroupError {
    #[error("closure exceeded the element cap of {cap}")]
    CapExceeded { cap: usize },
    #[error("not a subgroup: {0}")]
    NotSubgroup(String),
    #[error("degree mismatch: expected {expected}, found {found}")]
    DegreeMismatch { expected: usize, found: usize },
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
#[error("cycle notation error at byte {offset}: {message}")]
pub struct CycleParseError {
    pub offset: usize,
    pub message: String,
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm {
    img: Box<[u32]>,
}

impl Perm {
    pub fn identity(degree: usize) -> Self {
        Perm {
            img: (0..degree as u32).collect(),
        }
    }

    pub fn from_images(images: Vec<u32>) -> Result<Self, GroupError> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &x in &images {
            let x = x as usize;
            if x >= n || seen[x] {
                return Err(GroupError::InvalidPermutation(format!(
                    "image array {images:?} is not a bijection"
                )));
            }
            seen[x] = true;
        }
        Ok(Perm {
            img: images.into_boxed_slice(),
        })
    }

    /// Builds a permutation from disjoint cycles given as point lists.
    pub fn from_cycle_lists(degree: usize, cycles: &[Vec<u32>]) -> Result<Self, GroupError> {
        let mut img: Vec<u32> = (0..degree as u32).collect();
        let mut used = vec![false; degree];
        for c in cycles {
            for (i, &p) in c.iter().enumerate() {
                let pu = p as usize;
                if pu >= degree {
                    return Err(GroupError::InvalidPermutation(format!(
                        "point {p} out of range for degree {degree}"
                    )));
                }
                if used[pu] {
                    return Err(GroupError::InvalidPermutation(format!(
                        "point {p} appears twice"
                    )));
                }
                used[pu] = true;
                img[pu] = c[(i + 1) % c.len()];
            }
        }
        Ok(Perm {
            img: img.into_boxed_slice(),
        })
    }

    /// Parses cycle notation such as `"(0 1 2) (3 4)"` or `"()"`.
    pub fn parse(text: &str, degree: usize) -> Result<Self, CycleParseError> {
        let cycles = parse_cycles(text)?;
        Perm::from_cycle_lists(degree, &cycles).map_err(|e| CycleParseError {
            offset: 0,
            message: e.to_string(),
        })
    }

    /// Wraps an image array that the caller knows to be a bijection.
    pub(crate) fn from_vec(img: Vec<u32>) -> Perm {
        debug_assert!(Perm::from_images(img.clone()).is_ok());
        Perm {
            img: img.into_boxed_slice(),
        }
    }

    pub fn degree(&self) -> usize {
        self.img.len()
    }

    #[inline]
    pub fn apply(&self, p: u32) -> u32 {
        self.img[p as usize]
    }

    pub fn images(&self) -> &[u32] {
        &self.img
    }

    pub fn is_identity(&self) -> bool {
        self.img.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    /// `self` first, then `other`.
    pub fn compose(&self, other: &Perm) -> Perm {
        debug_assert_eq!(self.degree(), other.degree());
        Perm {
            img: self.img.iter().map(|&x| other.img[x as usize]).collect(),
        }
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0u32; self.img.len()];
        for (i, &x) in self.img.iter().enumerate() {
            inv[x as usize] = i as u32;
        }
        Perm {
            img: inv.into_boxed_slice(),
        }
    }

    /// `x⁻¹·self·x`.
    pub fn conj(&self, x: &Perm) -> Perm {
        let mut out = vec![0u32; self.img.len()];
        for (i, &y) in self.img.iter().enumerate() {
            out[x.img[i] as usize] = x.img[y as usize];
        }
        Perm {
            img: out.into_boxed_slice(),
        }
    }

    /// `self⁻¹·other⁻¹·self·other`.
    pub fn commutator(&self, other: &Perm) -> Perm {
        self.inverse()
            .compose(&other.inverse())
            .compose(self)
            .compose(other)
    }

    pub fn order(&self) -> usize {
        let mut seen = vec![false; self.img.len()];
        let mut l = 1usize;
        for i in 0..self.img.len() {
            if seen[i] {
                continue;
            }
            let mut len = 0usize;
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                j = self.img[j] as usize;
                len += 1;
            }
            l = lcm(l, len);
        }
        l
    }

    /// Disjoint cycles of length at least two, each starting at its least
    /// point, ordered by that point.
    pub fn cycles(&self) -> Vec<Vec<u32>> {
        let mut seen = vec![false; self.img.len()];
        let mut out = Vec::new();
        for i in 0..self.img.len() {
            if seen[i] || self.img[i] as usize == i {
                continue;
            }
            let mut c = Vec::new();
            let mut j = i;
            while !seen[j] {
                seen[j] = true;
                c.push(j as u32);
                j = self.img[j] as usize;
            }
            out.push(c);
        }
        out
    }

    /// Canonical cycle notation.
    pub fn to_cycle_string(&self) -> String {
        let cs = self.cycles();
        if cs.is_empty() {
            return "()".to_string();
        }
        cs.iter()
            .map(|c| {
                let body: Vec<String> = c.iter().map(|p| p.to_string()).collect();
                format!("({})", body.join(" "))
            })
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// Restricts to the block `[offset, offset + len)`, which must be invariant.
    pub fn restrict(&self, offset: usize, len: usize) -> Perm {
        Perm {
            img: self.img[offset..offset + len]
                .iter()
                .map(|&x| x - offset as u32)
                .collect(),
        }
    }
}

impl fmt::Debug for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

impl serde::Serialize for Perm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_cycle_string())
    }
}

impl fmt::Display for Perm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_cycle_string())
    }
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// Parses the cycle grammar into raw cycles (no range checks).
pub fn parse_cycles(text: &str) -> Result<Vec<Vec<u32>>, CycleParseError> {
    let bytes = text.as_bytes();
    let err = |offset: usize, message: &str| CycleParseError {
        offset,
        message: message.to_string(),
    };
    let mut i = 0usize;
    let skip_ws = |i: &mut usize| {
        while *i < bytes.len() && (bytes[*i] as char).is_ascii_whitespace() {
            *i += 1;
        }
    };
    let mut cycles = Vec::new();
    skip_ws(&mut i);
    if i == bytes.len() {
        return Err(err(i, "empty input; the identity is written ()"));
    }
    while i < bytes.len() {
        if bytes[i] != b'(' {
            return Err(err(i, "expected '('"));
        }
        i += 1;
        let mut cycle = Vec::new();
        loop {
            skip_ws(&mut i);
            if i >= bytes.len() {
                return Err(err(i, "unterminated cycle"));
            }
            if bytes[i] == b')' {
                i += 1;
                break;
            }
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            if start == i {
                return Err(err(i, "expected a point or ')'"));
            }
            if i < bytes.len() && !(bytes[i] == b')' || (bytes[i] as char).is_ascii_whitespace())
            {
                return Err(err(i, "points must be separated by whitespace"));
            }
            let v: u32 = text[start..i]
                .parse()
                .map_err(|_| err(start, "point out of range"))?;
            cycle.push(v);
        }
        if cycle.is_empty() {
            let only = cycles.is_empty() && {
                let mut j = i;
                skip_ws(&mut j);
                j == bytes.len()
            };
            if !only {
                return Err(err(i, "'()' may only appear alone"));
            }
        } else {
            cycles.push(cycle);
        }
        skip_ws(&mut i);
    }
    Ok(cycles)
}

struct ElementSet {
    sorted: Vec<Perm>,
    index: HashMap<Perm, u32>,
}

struct GroupInner {
    degree: usize,
    gens: Vec<Perm>,
    cap: usize,
    elements: OnceLock<Result<Arc<ElementSet>, GroupError>>,
    /// A group of the same order, e.g. the group this one is a conjugate of.
    same_order_as: Option<PermGroup>,
}

/// A finitely generated permutation group with lazily enumerated elements.
/// Clones share the enumeration.
#[derive(Clone)]
pub struct PermGroup {
    inner: Arc<GroupInner>,
}

impl fmt::Debug for PermGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PermGroup")
            .field("degree", &self.inner.degree)
            .field("gens", &self.inner.gens)
            .finish()
    }
}

impl PermGroup {
    /// Generators of the wrong degree are rejected; an empty list yields the
    /// trivial group.
    pub fn new(degree: usize, gens: Vec<Perm>) -> Result<Self, GroupError> {
        Self::with_cap(degree, gens, DEFAULT_ELEMENT_CAP)
    }

    pub fn with_cap(degree: usize, gens: Vec<Perm>, cap: usize) -> Result<Self, GroupError> {
        for g in &gens {
            if g.degree() != degree {
                return Err(GroupError::DegreeMismatch {
                    expected: degree,
                    found: g.degree(),
                });
            }
        }
        let mut gens: Vec<Perm> = gens.into_iter().filter(|g| !g.is_identity()).collect();
        gens.dedup();
        Ok(Self::raw(degree, gens, cap))
    }

    fn raw(degree: usize, gens: Vec<Perm>, cap: usize) -> Self {
        PermGroup {
            inner: Arc::new(GroupInner {
                degree,
                gens,
                cap,
                elements: OnceLock::new(),
                same_order_as: None,
            }),
        }
    }

    pub fn trivial(degree: usize) -> Self {
        Self::raw(degree, Vec::new(), DEFAULT_ELEMENT_CAP)
    }

    /// Wraps a known element list that is closed under multiplication.
    /// A small generating set is chosen greedily in canonical order.
    pub fn from_elements(degree: usize, mut elements: Vec<Perm>, cap: usize) -> Self {
        elements.sort();
        elements.dedup();
        let gens = greedy_generators(degree, &elements);
        let index = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let set = ElementSet {
            sorted: elements,
            index,
        };
        let g = Self::raw(degree, gens, cap);
        let _ = g.inner.elements.set(Ok(Arc::new(set)));
        g
    }

    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn cap(&self) -> usize {
        self.inner.cap
    }

    pub fn generators(&self) -> &[Perm] {
        &self.inner.gens
    }

    /// Same group with a different element cap (enumeration is redone lazily).
    pub fn recapped(&self, cap: usize) -> Self {
        if let Some(Ok(set)) = self.inner.elements.get() {
            let g = Self::raw(self.degree(), self.inner.gens.clone(), cap);
            let _ = g.inner.elements.set(Ok(set.clone()));
            return g;
        }
        Self::raw(self.degree(), self.inner.gens.clone(), cap)
    }

    fn set(&self) -> Result<&Arc<ElementSet>, GroupError> {
        self.inner
            .elements
            .get_or_init(|| enumerate(self.degree(), &self.inner.gens, self.inner.cap).map(Arc::new))
            .as_ref()
            .map_err(|e| e.clone())
    }

    /// All elements in canonical order.
    pub fn elements(&self) -> Result<&[Perm], GroupError> {
        Ok(&self.set()?.sorted)
    }

    pub fn order(&self) -> Result<usize, GroupError> {
        if let (None, Some(src)) = (self.inner.elements.get(), &self.inner.same_order_as) {
            return src.order();
        }
        Ok(self.set()?.sorted.len())
    }

    pub fn contains(&self, p: &Perm) -> Result<bool, GroupError> {
        if p.degree() != self.degree() {
            return Ok(false);
        }
        Ok(self.set()?.index.contains_key(p))
    }

    /// Position of `p` in canonical order.
    pub fn position(&self, p: &Perm) -> Result<Option<usize>, GroupError> {
        Ok(self.set()?.index.get(p).map(|&i| i as usize))
    }

    pub fn is_trivial(&self) -> bool {
        self.inner.gens.is_empty()
    }

    pub fn orbit(&self, point: u32) -> Vec<u32> {
        orbit_of(self.degree(), &self.inner.gens, point)
    }

    pub fn is_transitive(&self) -> bool {
        self.orbit(0).len() == self.degree()
    }

    /// `self ≤ other`, checked on generators.
    pub fn is_subgroup_of(&self, other: &PermGroup) -> Result<bool, GroupError> {
        if self.degree() != other.degree() {
            return Ok(false);
        }
        for g in self.generators() {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_group(&self, other: &PermGroup) -> Result<bool, GroupError> {
        if self.degree() != other.degree() {
            return Ok(false);
        }
        if self.inner.gens.is_empty() && other.inner.gens.is_empty() {
            return Ok(true);
        }
        if self.order()? != other.order()? {
            return Ok(false);
        }
        // test membership in whichever group is already enumerated
        if self.inner.elements.get().is_some() && other.inner.elements.get().is_none() {
            other.is_subgroup_of(self)
        } else {
            self.is_subgroup_of(other)
        }
    }

    fn require_subgroup(&self, h: &PermGroup) -> Result<(), GroupError> {
        if h.degree() != self.degree() {
            return Err(GroupError::DegreeMismatch {
                expected: self.degree(),
                found: h.degree(),
            });
        }
        for g in h.generators() {
            if !self.contains(g)? {
                return Err(GroupError::NotSubgroup(format!(
                    "generator {g} is not in the ambient group"
                )));
            }
        }
        Ok(())
    }

    pub fn conjugate(&self, x: &Perm) -> PermGroup {
        let gens = self.inner.gens.iter().map(|g| g.conj(x)).collect();
        let mut g = Self::raw(self.degree(), gens, self.cap());
        let src = match (&self.inner.same_order_as, self.inner.elements.get()) {
            (Some(src), None) => src.clone(),
            _ => self.clone(),
        };
        Arc::get_mut(&mut g.inner).expect("fresh").same_order_as = Some(src);
        g
    }

    /// True when `x` maps `self` onto itself by conjugation.
    pub fn is_normalized_by(&self, x: &Perm) -> Result<bool, GroupError> {
        for g in self.generators() {
            if !self.contains(&g.conj(x))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// True when `self^x = other`; the orders are assumed equal.
    fn conj_lands_in(&self, x: &Perm, other: &PermGroup) -> Result<bool, GroupError> {
        for g in self.generators() {
            if !other.contains(&g.conj(x))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn join(&self, other: &PermGroup) -> PermGroup {
        let mut gens = self.inner.gens.clone();
        gens.extend(other.inner.gens.iter().cloned());
        Self::raw(self.degree(), gens, self.cap())
    }

    pub fn intersection(&self, other: &PermGroup) -> Result<PermGroup, GroupError> {
        let (small, big) = if self.order()? <= other.order()? {
            (self, other)
        } else {
            (other, self)
        };
        let mut els = Vec::new();
        for x in small.elements()? {
            if big.contains(x)? {
                els.push(x.clone());
            }
        }
        Ok(PermGroup::from_elements(self.degree(), els, self.cap()))
    }

    /// `|self·other|`, which equals `|self|·|other| / |self ∩ other|`.
    pub fn product_size(&self, other: &PermGroup) -> Result<usize, GroupError> {
        let i = self.intersection(other)?.order()?;
        Ok(self.order()? * other.order()? / i)
    }

    /// Subgroup of the elements satisfying `pred`; the caller guarantees
    /// the selected set is a subgroup.
    pub fn filter_subgroup<F>(&self, mut pred: F) -> Result<PermGroup, GroupError>
    where
        F: FnMut(&Perm) -> Result<bool, GroupError>,
    {
        let mut els = Vec::new();
        for x in self.elements()? {
            if pred(x)? {
                els.push(x.clone());
            }
        }
        Ok(PermGroup::from_elements(self.degree(), els, self.cap()))
    }

    pub fn point_stabilizer(&self, point: u32) -> Result<PermGroup, GroupError> {
        self.filter_subgroup(|x| Ok(x.apply(point) == point))
    }

    pub fn normalizer(&self, h: &PermGroup) -> Result<PermGroup, GroupError> {
        self.require_subgroup(h)?;
        h.order()?;
        self.filter_subgroup(|x| h.is_normalized_by(x))
    }

    pub fn centralizer(&self, h: &PermGroup) -> Result<PermGroup, GroupError> {
        self.require_subgroup(h)?;
        let hg = h.generators().to_vec();
        self.filter_subgroup(|x| Ok(hg.iter().all(|g| &g.conj(x) == g)))
    }

    /// Normal closure of `h` in `self`.
    pub fn normal_closure(&self, h: &PermGroup) -> Result<PermGroup, GroupError> {
        let mut n = h.clone();
        loop {
            let mut extra = Vec::new();
            for g in self.generators() {
                for x in n.generators() {
                    let y = x.conj(g);
                    if !n.contains(&y)? && !extra.contains(&y) {
                        extra.push(y);
                    }
                }
            }
            if extra.is_empty() {
                return Ok(n);
            }
            let mut gens = n.generators().to_vec();
            gens.extend(extra);
            n = PermGroup::raw(self.degree(), gens, self.cap());
        }
    }

    pub fn derived_subgroup(&self) -> Result<PermGroup, GroupError> {
        let gens = self.generators();
        let mut comms = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            for b in &gens[i + 1..] {
                let c = a.commutator(b);
                if !c.is_identity() && !comms.contains(&c) {
                    comms.push(c);
                }
            }
        }
        let seed = PermGroup::raw(self.degree(), comms, self.cap());
        let n = self.normal_closure(&seed)?;
        n.order()?;
        Ok(PermGroup::from_elements(
            self.degree(),
            n.elements()?.to_vec(),
            self.cap(),
        ))
    }

    /// First element of `self` in canonical order conjugating `h1` onto `h2`.
    pub fn conjugating_element(
        &self,
        h1: &PermGroup,
        h2: &PermGroup,
    ) -> Result<Option<Perm>, GroupError> {
        self.require_subgroup(h1)?;
        self.require_subgroup(h2)?;
        if h1.order()? != h2.order()? {
            return Ok(None);
        }
        for x in self.elements()? {
            if h1.conj_lands_in(x, h2)? {
                return Ok(Some(x.clone()));
            }
        }
        Ok(None)
    }

    pub fn are_conjugate(&self, h1: &PermGroup, h2: &PermGroup) -> Result<bool, GroupError> {
        Ok(self.conjugating_element(h1, h2)?.is_some())
    }

    /// Right multiplication action on the right cosets of `h`.
    pub fn coset_action(&self, h: &PermGroup) -> Result<CosetAction, GroupError> {
        self.require_subgroup(h)?;
        CosetAction::build(self, h)
    }

    /// True when the group has no proper nontrivial normal subgroup, checked
    /// by the normal closure of one element from each conjugacy class.
    pub fn is_simple(&self) -> Result<bool, GroupError> {
        let n = self.order()?;
        if n == 1 {
            return Ok(false);
        }
        let mut seen: HashSet<Perm> = HashSet::new();
        for x in self.elements()? {
            if x.is_identity() || seen.contains(x) {
                continue;
            }
            let mut q = vec![x.clone()];
            seen.insert(x.clone());
            while let Some(y) = q.pop() {
                for g in self.generators() {
                    let z = y.conj(g);
                    if seen.insert(z.clone()) {
                        q.push(z);
                    }
                }
            }
            let c = self.normal_closure(&PermGroup::raw(self.degree(), vec![x.clone()], self.cap()))?;
            if c.order()? != n {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

fn orbit_of(degree: usize, gens: &[Perm], point: u32) -> Vec<u32> {
    let mut seen = vec![false; degree];
    seen[point as usize] = true;
    let mut q = vec![point];
    let mut out = vec![point];
    while let Some(p) = q.pop() {
        for g in gens {
            let r = g.apply(p);
            if !seen[r as usize] {
                seen[r as usize] = true;
                q.push(r);
                out.push(r);
            }
        }
    }
    out.sort_unstable();
    out
}

fn enumerate(degree: usize, gens: &[Perm], cap: usize) -> Result<ElementSet, GroupError> {
    let id = Perm::identity(degree);
    let mut index: HashMap<Perm, u32> = HashMap::new();
    let mut list = vec![id.clone()];
    index.insert(id, 0);
    let mut head = 0;
    while head < list.len() {
        let x = list[head].clone();
        head += 1;
        for g in gens {
            let y = x.compose(g);
            if !index.contains_key(&y) {
                if list.len() >= cap {
                    return Err(GroupError::CapExceeded { cap });
                }
                index.insert(y.clone(), 0);
                list.push(y);
            }
        }
    }
    list.sort();
    for (i, p) in list.iter().enumerate() {
        *index.get_mut(p).expect("present") = i as u32;
    }
    Ok(ElementSet {
        sorted: list,
        index,
    })
}

/// Incremental closure used when choosing generators for a known subgroup.
fn greedy_generators(degree: usize, sorted: &[Perm]) -> Vec<Perm> {
    let mut gens: Vec<Perm> = Vec::new();
    let mut have: HashSet<Perm> = HashSet::new();
    have.insert(Perm::identity(degree));
    let mut list: Vec<Perm> = vec![Perm::identity(degree)];
    for x in sorted {
        if have.contains(x) {
            continue;
        }
        gens.push(x.clone());
        let mut queue: VecDeque<Perm> = list.iter().cloned().collect();
        while let Some(y) = queue.pop_front() {
            for g in &gens {
                let z = y.compose(g);
                if have.insert(z.clone()) {
                    list.push(z.clone());
                    queue.push_back(z);
                }
            }
        }
        if list.len() == sorted.len() {
            break;
        }
    }
    gens
}

/// The action of a group on the right cosets of a subgroup.
#[derive(Clone, Debug)]
pub struct CosetAction {
    /// Image of each generator of the acting group, on coset indices.
    pub action: PermGroup,
    /// Coset representatives; coset 0 is the subgroup itself.
    pub reps: Vec<Perm>,
    subgroup_elements: Vec<Perm>,
    keys: HashMap<Perm, u32>,
}

impl CosetAction {
    fn build(g: &PermGroup, h: &PermGroup) -> Result<Self, GroupError> {
        let h_els = h.elements()?.to_vec();
        let key = |x: &Perm| -> Perm {
            h_els
                .iter()
                .map(|a| a.compose(x))
                .min()
                .expect("subgroup is nonempty")
        };
        let degree = g.degree();
        let id = Perm::identity(degree);
        let mut reps = vec![id.clone()];
        let mut keys: HashMap<Perm, u32> = HashMap::new();
        keys.insert(key(&id), 0);
        let mut images: Vec<Vec<u32>> = vec![Vec::new(); g.generators().len()];
        let mut head = 0;
        while head < reps.len() {
            let x = reps[head].clone();
            for (gi, s) in g.generators().iter().enumerate() {
                let y = x.compose(s);
                let k = key(&y);
                let idx = match keys.get(&k) {
                    Some(&i) => i,
                    None => {
                        if reps.len() >= g.cap() {
                            return Err(GroupError::CapExceeded { cap: g.cap() });
                        }
                        let i = reps.len() as u32;
                        keys.insert(k, i);
                        reps.push(y);
                        i
                    }
                };
                images[gi].push(idx);
            }
            head += 1;
        }
        let gens = images
            .into_iter()
            .map(|v| Perm::from_images(v).expect("coset action is a permutation"))
            .collect();
        let action = PermGroup::with_cap(reps.len(), gens, g.cap())?;
        Ok(CosetAction {
            action,
            reps,
            subgroup_elements: h_els,
            keys,
        })
    }

    pub fn degree(&self) -> usize {
        self.reps.len()
    }

    /// Index of the coset containing `x`.
    pub fn coset_of(&self, x: &Perm) -> Option<u32> {
        let k = self
            .subgroup_elements
            .iter()
            .map(|a| a.compose(x))
            .min()?;
        self.keys.get(&k).copied()
    }

    /// Permutation of cosets induced by right multiplication with `x`.
    pub fn image_of(&self, x: &Perm) -> Option<Perm> {
        let imgs: Option<Vec<u32>> = self
            .reps
            .iter()
            .map(|r| self.coset_of(&r.compose(x)))
            .collect();
        Perm::from_images(imgs?).ok()
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
        PermGroup::new(n, gens.iter().map(|s| p(s, n)).collect()).unwrap()
    }

    fn a5() -> PermGroup {
        grp(5, &["(0 1 2 3 4)", "(0 1 2)"])
    }

    fn d10() -> PermGroup {
        grp(5, &["(0 1 2 3 4)", "(1 4) (2 3)"])
    }

    // Direct scan used as an oracle for normalizers and centralizers.
    fn scan(g: &PermGroup, keep: impl Fn(&Perm) -> bool) -> usize {
        g.elements().unwrap().iter().filter(|x| keep(x)).count()
    }

    fn element_set(h: &PermGroup) -> HashSet<Perm> {
        h.elements().unwrap().iter().cloned().collect()
    }

    #[test]
    fn cycle_strings_round_trip() {
        let x = p("(3 4) (0 2 1)", 6);
        assert_eq!(x.to_cycle_string(), "(0 2 1) (3 4)");
        assert_eq!(p("()", 4).to_cycle_string(), "()");
        assert!(Perm::parse("(0 1)(2 3)", 4).is_ok());
        assert!(Perm::parse("", 4).is_err());
        assert!(Perm::parse("(0 1", 4).is_err());
        assert!(Perm::parse("(0,1)", 4).is_err());
        assert!(Perm::parse("(0 1) (1 2)", 4).is_err());
        assert!(Perm::parse("(0 9)", 4).is_err());
        assert!(Perm::parse("(0 1) ()", 4).is_err());
    }

    #[test]
    fn orders_of_small_groups() {
        assert_eq!(grp(5, &["()"]).order().unwrap(), 1);
        assert_eq!(grp(3, &["(0 1 2)"]).order().unwrap(), 3);
        assert_eq!(grp(6, &["(0 1 2)", "(1 2 3 4 5)"]).order().unwrap(), 360);
        assert_eq!(a5().order().unwrap(), 60);
    }

    #[test]
    fn cap_is_enforced() {
        let s6 = PermGroup::with_cap(6, vec![p("(0 1)", 6), p("(0 1 2 3 4 5)", 6)], 100).unwrap();
        assert_eq!(s6.order(), Err(GroupError::CapExceeded { cap: 100 }));
    }

    #[test]
    fn orbits() {
        assert_eq!(grp(3, &["(0 1 2)"]).orbit(0), vec![0, 1, 2]);
        assert_eq!(a5().orbit(3), vec![0, 1, 2, 3, 4]);
        assert_eq!(grp(4, &["(0 1) (2 3)"]).orbit(2), vec![2, 3]);
    }

    #[test]
    fn stabilizers() {
        assert_eq!(a5().point_stabilizer(0).unwrap().order().unwrap(), 12);
        assert_eq!(PermGroup::trivial(4).point_stabilizer(1).unwrap().order().unwrap(), 1);
        let a6 = grp(6, &["(0 1 2)", "(1 2 3 4 5)"]);
        assert_eq!(a6.point_stabilizer(0).unwrap().order().unwrap(), 60);
    }

    #[test]
    fn normalizers_match_scan() {
        let g = a5();
        let d = d10();
        let n = g.normalizer(&d).unwrap();
        let dset = element_set(&d);
        let expected = scan(&g, |x| {
            d.elements().unwrap().iter().all(|h| dset.contains(&h.conj(x)))
        });
        assert_eq!(n.order().unwrap(), expected);
        assert_eq!(expected, 10);
        let c2 = grp(5, &["(0 1) (2 3)"]);
        assert_eq!(g.normalizer(&c2).unwrap().order().unwrap(), 4);
        assert!(g.normalizer(&g).unwrap().same_group(&g).unwrap());
        let outside = grp(5, &["(0 1)"]);
        assert!(matches!(g.normalizer(&outside), Err(GroupError::NotSubgroup(_))));
    }

    #[test]
    fn centralizers_match_scan() {
        let g = a5();
        assert_eq!(g.centralizer(&g).unwrap().order().unwrap(), 1);
        assert_eq!(g.centralizer(&PermGroup::trivial(5)).unwrap().order().unwrap(), 60);
        let d = d10();
        let expected = scan(&g, |x| {
            d.elements().unwrap().iter().all(|h| h.conj(x) == *h)
        });
        assert_eq!(g.centralizer(&d).unwrap().order().unwrap(), expected);
        assert_eq!(expected, 1);
    }

    #[test]
    fn derived_subgroups() {
        let s4 = grp(4, &["(0 1)", "(0 1 2 3)"]);
        assert_eq!(s4.derived_subgroup().unwrap().order().unwrap(), 12);
        let v4 = grp(4, &["(0 1) (2 3)", "(0 2) (1 3)"]);
        assert_eq!(v4.derived_subgroup().unwrap().order().unwrap(), 1);
        assert_eq!(a5().derived_subgroup().unwrap().order().unwrap(), 60);
    }

    #[test]
    fn conjugacy() {
        let g = a5();
        let d = d10();
        assert_eq!(g.conjugating_element(&d, &d).unwrap(), Some(Perm::identity(5)));
        let s0 = g.point_stabilizer(0).unwrap();
        let s3 = g.point_stabilizer(3).unwrap();
        let x = g.conjugating_element(&s0, &s3).unwrap().unwrap();
        assert!(s0.conjugate(&x).same_group(&s3).unwrap());
        let a6 = grp(6, &["(0 1 2)", "(1 2 3 4 5)"]);
        let intransitive = a6.point_stabilizer(5).unwrap();
        let transitive = grp(6, &["(0 1 2 3 4)", "(0 5) (1 4)"]);
        assert_eq!(transitive.order().unwrap(), 60);
        assert!(transitive.is_transitive());
        // Oracle: no element of A6 carries one onto the other.
        let tset = element_set(&transitive);
        let found = a6.elements().unwrap().iter().any(|x| {
            intransitive
                .elements()
                .unwrap()
                .iter()
                .all(|h| tset.contains(&h.conj(x)))
        });
        assert!(!found);
        assert!(!a6.are_conjugate(&intransitive, &transitive).unwrap());
    }

    #[test]
    fn coset_actions() {
        let g = a5();
        assert_eq!(g.coset_action(&g).unwrap().degree(), 1);
        let a4 = g.point_stabilizer(4).unwrap();
        let ca = g.coset_action(&a4).unwrap();
        assert_eq!(ca.degree(), 5);
        assert!(ca.action.is_transitive());
        let c2 = grp(5, &["(0 1) (2 3)"]);
        let ca = g.coset_action(&c2).unwrap();
        assert_eq!(ca.degree(), 30);
        assert!(ca.action.is_transitive());
        assert_eq!(ca.action.order().unwrap(), 60);
    }

    #[test]
    fn coset_action_kernel_is_core() {
        let s4 = grp(4, &["(0 1)", "(0 1 2 3)"]);
        let d8 = grp(4, &["(0 1 2 3)", "(0 2)"]);
        let ca = s4.coset_action(&d8).unwrap();
        assert_eq!(ca.degree(), 3);
        let kernel: Vec<&Perm> = s4
            .elements()
            .unwrap()
            .iter()
            .filter(|x| ca.image_of(x).unwrap().is_identity())
            .collect();
        let core: Vec<&Perm> = s4
            .elements()
            .unwrap()
            .iter()
            .filter(|x| {
                s4.elements()
                    .unwrap()
                    .iter()
                    .all(|y| d8.contains(&x.conj(y)).unwrap())
            })
            .collect();
        assert_eq!(kernel, core);
        assert_eq!(kernel.len(), 4);
    }

    #[test]
    fn enumeration_is_deterministic() {
        let a = a5();
        let b = a5();
        assert_eq!(a.elements().unwrap(), b.elements().unwrap());
        let els = a.elements().unwrap();
        assert!(els.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(
            a.conjugating_element(&d10(), &d10().conjugate(&p("(0 1 2)", 5)))
                .unwrap(),
            b.conjugating_element(&d10(), &d10().conjugate(&p("(0 1 2)", 5)))
                .unwrap()
        );
    }

    #[test]
    fn simplicity() {
        assert!(a5().is_simple().unwrap());
        assert!(!grp(4, &["(0 1)", "(0 1 2 3)"]).is_simple().unwrap());
    }

    #[test]
    fn from_elements_generators_regenerate() {
        let g = a5();
        let a4 = g.point_stabilizer(2).unwrap();
        let regenerated = PermGroup::new(5, a4.generators().to_vec()).unwrap();
        assert_eq!(regenerated.elements().unwrap(), a4.elements().unwrap());
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Perm> {
        Just((0..n as u32).collect::<Vec<u32>>())
            .prop_shuffle()
            .prop_map(|v| Perm::from_images(v).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_composes_to_identity(x in arb_perm(7)) {
            prop_assert!(x.compose(&x.inverse()).is_identity());
            prop_assert!(x.inverse().compose(&x).is_identity());
        }

        #[test]
        fn cycle_notation_round_trips(x in arb_perm(9)) {
            prop_assert_eq!(Perm::parse(&x.to_cycle_string(), 9).unwrap(), x);
        }

        #[test]
        fn conj_matches_definition(x in arb_perm(6), y in arb_perm(6)) {
            prop_assert_eq!(x.conj(&y), y.inverse().compose(&x).compose(&y));
        }

        #[test]
        fn orbit_stabilizer(a in arb_perm(6), b in arb_perm(6), pt in 0u32..6) {
            let g = PermGroup::new(6, vec![a, b]).unwrap();
            let n = g.order().unwrap();
            let o = g.orbit(pt).len();
            let s = g.point_stabilizer(pt).unwrap().order().unwrap();
            prop_assert_eq!(n, o * s);
        }

        #[test]
        fn normalizer_contains_and_normalizes(a in arb_perm(5), b in arb_perm(5)) {
            let s5 = PermGroup::new(5, vec![
                Perm::parse("(0 1)", 5).unwrap(),
                Perm::parse("(0 1 2 3 4)", 5).unwrap(),
            ]).unwrap();
            let h = PermGroup::new(5, vec![a]).unwrap();
            let n = s5.normalizer(&h).unwrap();
            prop_assert!(h.is_subgroup_of(&n).unwrap());
            for x in n.generators() {
                prop_assert!(h.is_normalized_by(x).unwrap());
            }
            let c = s5.centralizer(&h).unwrap();
            for x in c.generators() {
                for g in h.generators() {
                    prop_assert_eq!(&g.conj(x), g);
                }
            }
            prop_assert!(c.is_subgroup_of(&n).unwrap());
            let _ = b;
        }
    }
}
