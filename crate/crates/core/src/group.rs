//! Finitely generated abelian groups `Z^r x Z_{d1} x ... x Z_{dk}`.
//!
//! Elements are integer vectors: `r` free coordinates followed by one
//! coordinate per torsion factor, the latter always reduced into `[0, d_i)`.
//! The group is written additively, so the identity is the zero vector.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bound_check, Error, Result};

/// Element order, subgroup size or degree that may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(n) => Some(n),
            Order::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Order::Infinite
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Order {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Order::Finite(n) => s.serialize_u64(*n),
            Order::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Element(pub Vec<i64>);

impl Element {
    pub fn coords(&self) -> &[i64] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

pub type ElementSet = BTreeSet<Element>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawGroupSpec", into = "RawGroupSpec")]
pub struct GroupSpec {
    free_rank: usize,
    torsion: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct RawGroupSpec {
    #[serde(default)]
    free_rank: usize,
    #[serde(default)]
    torsion: Vec<u64>,
}

impl TryFrom<RawGroupSpec> for GroupSpec {
    type Error = Error;

    fn try_from(raw: RawGroupSpec) -> Result<Self> {
        GroupSpec::new(raw.free_rank, raw.torsion)
    }
}

impl From<GroupSpec> for RawGroupSpec {
    fn from(g: GroupSpec) -> Self {
        RawGroupSpec { free_rank: g.free_rank, torsion: g.torsion }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z_{d}")));
        if parts.is_empty() {
            f.write_str("1")
        } else {
            f.write_str(&parts.join(" x "))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<Element>,
    /// Explicit element list, present exactly when the subgroup is finite.
    pub elements: Option<ElementSet>,
}

impl Subgroup {
    pub fn is_finite(&self) -> bool {
        self.elements.is_some()
    }

    pub fn size(&self) -> Order {
        match &self.elements {
            Some(e) => Order::Finite(e.len() as u64),
            None => Order::Infinite,
        }
    }

    pub fn elements(&self) -> Result<&ElementSet> {
        self.elements.as_ref().ok_or(Error::InfiniteSubgroup)
    }

    pub fn contains(&self, x: &Element) -> bool {
        self.elements.as_ref().is_some_and(|e| e.contains(x))
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn smallest_prime_factor(n: u64) -> Option<u64> {
    if n < 2 {
        return None;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return Some(d);
        }
        d += 1;
    }
    Some(n)
}

pub(crate) fn is_prime(n: u64) -> bool {
    smallest_prime_factor(n) == Some(n)
}

impl GroupSpec {
    pub fn new(free_rank: usize, torsion: Vec<u64>) -> Result<Self> {
        if let Some(d) = torsion.iter().find(|&&d| d < 2) {
            return Err(Error::InvalidGroup(format!("torsion factor {d} is below 2")));
        }
        if torsion.iter().try_fold(1u64, |acc, &d| acc.checked_mul(d)).is_none() {
            return Err(Error::InvalidGroup("torsion order overflows u64".into()));
        }
        Ok(GroupSpec { free_rank, torsion })
    }

    /// The cyclic group `Z_n`.
    pub fn cyclic(n: u64) -> Result<Self> {
        GroupSpec::new(0, vec![n])
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn torsion(&self) -> &[u64] {
        &self.torsion
    }

    /// Number of coordinates of an element.
    pub fn rank(&self) -> usize {
        self.free_rank + self.torsion.len()
    }

    pub fn torsion_order(&self) -> u64 {
        self.torsion.iter().product()
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_torsion_free(&self) -> bool {
        self.torsion.is_empty()
    }

    pub fn order(&self) -> Order {
        if self.is_finite() {
            Order::Finite(self.torsion_order())
        } else {
            Order::Infinite
        }
    }

    pub fn identity(&self) -> Element {
        Element(vec![0; self.rank()])
    }

    /// Builds an element, reducing torsion coordinates.
    pub fn element(&self, coords: Vec<i64>) -> Result<Element> {
        if coords.len() != self.rank() {
            return Err(Error::SpecMismatch(format!(
                "{self}: expected {} coordinates, got {}",
                self.rank(),
                coords.len()
            )));
        }
        let mut coords = coords;
        for (c, &d) in coords[self.free_rank..].iter_mut().zip(&self.torsion) {
            *c = c.rem_euclid(d as i64);
        }
        Ok(Element(coords))
    }

    /// Checks that `x` is a reduced element of this group.
    pub fn check(&self, x: &Element) -> Result<()> {
        if x.0.len() != self.rank() {
            return Err(Error::SpecMismatch(format!(
                "{self}: expected {} coordinates, got {}",
                self.rank(),
                x.0.len()
            )));
        }
        for (c, &d) in x.0[self.free_rank..].iter().zip(&self.torsion) {
            if *c < 0 || *c >= d as i64 {
                return Err(Error::SpecMismatch(format!("{self}: coordinate {c} not reduced mod {d}")));
            }
        }
        Ok(())
    }

    pub fn compose(&self, x: &Element, y: &Element) -> Result<Element> {
        self.check(x)?;
        self.check(y)?;
        Ok(self.add(x, y))
    }

    /// Composition of elements already known to belong to the group.
    pub(crate) fn add(&self, x: &Element, y: &Element) -> Element {
        let mut out = Vec::with_capacity(x.0.len());
        for i in 0..x.0.len() {
            let s = x.0[i] + y.0[i];
            if i >= self.free_rank {
                let d = self.torsion[i - self.free_rank] as i64;
                out.push(if s >= d { s - d } else { s });
            } else {
                out.push(s);
            }
        }
        Element(out)
    }

    pub fn inverse(&self, x: &Element) -> Element {
        let coords = x
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i < self.free_rank {
                    -c
                } else {
                    let d = self.torsion[i - self.free_rank] as i64;
                    (d - c) % d
                }
            })
            .collect();
        Element(coords)
    }

    pub(crate) fn sub(&self, x: &Element, y: &Element) -> Element {
        self.add(x, &self.inverse(y))
    }

    /// `k`-fold composition of `x` with itself.
    pub fn multiple(&self, k: i64, x: &Element) -> Element {
        let coords = x
            .0
            .iter()
            .enumerate()
            .map(|(i, &c)| {
                if i < self.free_rank {
                    c * k
                } else {
                    let d = self.torsion[i - self.free_rank] as i128;
                    ((c as i128 * k as i128).rem_euclid(d)) as i64
                }
            })
            .collect();
        Element(coords)
    }

    pub fn element_order(&self, x: &Element) -> Order {
        if x.0[..self.free_rank].iter().any(|&c| c != 0) {
            return Order::Infinite;
        }
        let n = x.0[self.free_rank..]
            .iter()
            .zip(&self.torsion)
            .fold(1u64, |acc, (&c, &d)| lcm(acc, d / gcd(c as u64, d)));
        Order::Finite(n)
    }

    /// All elements of a finite group in lexicographic coordinate order.
    pub fn elements(&self) -> Result<Vec<Element>> {
        if !self.is_finite() {
            return Err(Error::InvalidGroup(format!("{self} is infinite")));
        }
        let k = self.torsion.len();
        let mut out = Vec::with_capacity(self.torsion_order() as usize);
        let mut cur = vec![0i64; k];
        loop {
            out.push(Element(cur.clone()));
            let mut i = k;
            loop {
                if i == 0 {
                    return Ok(out);
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.torsion[i] as i64 {
                    break;
                }
                cur[i] = 0;
            }
        }
    }

    /// Mixed-radix index of an element of a finite group, matching the
    /// order of [`GroupSpec::elements`].
    pub(crate) fn index_of(&self, x: &Element) -> usize {
        x.0.iter()
            .zip(&self.torsion)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub fn subgroup_generated(&self, gens: &[Element]) -> Result<Subgroup> {
        for g in gens {
            self.check(g)?;
        }
        if gens.iter().any(|g| self.element_order(g).is_infinite()) {
            return Ok(Subgroup { generators: gens.to_vec(), elements: None });
        }
        let mut elements = ElementSet::new();
        let id = self.identity();
        elements.insert(id.clone());
        let mut queue = VecDeque::from([id]);
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.add(&x, g);
                if elements.insert(y.clone()) {
                    queue.push_back(y);
                }
            }
        }
        Ok(Subgroup { generators: gens.to_vec(), elements: Some(elements) })
    }

    /// Whether every `a ∈ S` satisfies `a + H ⊆ S`.
    pub fn is_union_of_cosets(&self, s: &ElementSet, h: &Subgroup) -> Result<bool> {
        let h = h.elements()?;
        Ok(s.iter().all(|a| h.iter().all(|x| s.contains(&self.add(a, x)))))
    }

    pub fn set_product(&self, s: &ElementSet, r: &ElementSet) -> Result<ElementSet> {
        let mut out = ElementSet::new();
        for x in s {
            self.check(x)?;
            for y in r {
                self.check(y)?;
                out.insert(self.add(x, y));
            }
        }
        Ok(out)
    }

    /// Length of the longest progression `{a, a+x, ..., a+(n-1)x}`,
    /// `n - 1 < o(x)`, contained in `a_set`.
    ///
    /// Steps are drawn from the differences of `a_set`, which contain the
    /// step of every progression of length at least two.
    pub fn max_progression_length(&self, a_set: &ElementSet) -> usize {
        if a_set.is_empty() {
            return 0;
        }
        let mut steps = BTreeSet::new();
        for a in a_set {
            for b in a_set {
                if a != b {
                    steps.insert(self.sub(b, a));
                }
            }
        }
        let mut best = 1;
        for x in &steps {
            let cap = match self.element_order(x) {
                Order::Finite(o) => o as usize,
                Order::Infinite => usize::MAX,
            };
            for a in a_set {
                // only start where the progression cannot be extended backwards
                let prev = self.sub(a, x);
                if a_set.contains(&prev) && cap == usize::MAX {
                    continue;
                }
                let mut len = 1;
                let mut cur = self.add(a, x);
                while len < cap && a_set.contains(&cur) {
                    len += 1;
                    cur = self.add(&cur, x);
                }
                best = best.max(len);
            }
        }
        best
    }

    /// Every sum `a1 + a2` over unordered pairs (with repetition) is distinct.
    pub fn is_sidon(&self, a_set: &ElementSet) -> bool {
        let v: Vec<&Element> = a_set.iter().collect();
        let mut seen = HashSet::new();
        for i in 0..v.len() {
            for j in i..v.len() {
                if !seen.insert(self.add(v[i], v[j])) {
                    return false;
                }
            }
        }
        true
    }

    /// Nonempty and every element has order greater than the set's size.
    pub fn is_chowla_subset(&self, b_set: &ElementSet) -> bool {
        let n = b_set.len() as u64;
        n > 0 && b_set.iter().all(|b| self.element_order(b) > Order::Finite(n))
    }

    /// Smallest cardinality of a nontrivial subgroup.
    pub fn min_nontrivial_subgroup_size(&self) -> Order {
        match smallest_prime_factor(self.torsion_order()) {
            Some(p) => Order::Finite(p),
            None => Order::Infinite,
        }
    }

    /// All subgroups of a finite group, sorted by size and then by their
    /// sorted element lists.
    pub fn enumerate_subgroups(&self, bound: u64) -> Result<Vec<Subgroup>> {
        if !self.is_finite() {
            return Err(Error::InvalidGroup(format!("{self} is infinite")));
        }
        bound_check("group order", self.torsion_order(), bound)?;
        let table = FiniteTable::new(self)?;
        let mut subgroups = table.all_subgroups();
        subgroups.sort_by(|x, y| x.len().cmp(&y.len()).then_with(|| x.cmp(y)));
        Ok(subgroups
            .into_iter()
            .map(|idx| {
                let elements: ElementSet = idx.iter().map(|&i| table.elements[i].clone()).collect();
                let generators = table.generators_of(&idx);
                Subgroup { generators, elements: Some(elements) }
            })
            .collect())
    }
}

/// Index-based view of a finite group used by subgroup enumeration.
pub(crate) struct FiniteTable {
    pub elements: Vec<Element>,
    sum: Vec<u16>,
}

impl FiniteTable {
    pub fn new(g: &GroupSpec) -> Result<Self> {
        let elements = g.elements()?;
        let n = elements.len();
        if n > u16::MAX as usize {
            return Err(Error::BoundExceeded { what: "group order", size: n as u64, bound: u16::MAX as u64 });
        }
        let mut sum = vec![0u16; n * n];
        for i in 0..n {
            for j in 0..n {
                sum[i * n + j] = g.index_of(&g.add(&elements[i], &elements[j])) as u16;
            }
        }
        Ok(FiniteTable { elements, sum })
    }

    fn n(&self) -> usize {
        self.elements.len()
    }

    fn add(&self, i: usize, j: usize) -> usize {
        self.sum[i * self.n() + j] as usize
    }

    /// Subgroup generated by the sorted index set `h` and `g`.
    fn join(&self, h: &[usize], g: usize) -> Vec<usize> {
        let n = self.n();
        let mut member = vec![false; n];
        for &x in h {
            member[x] = true;
        }
        let mut out: Vec<usize> = h.to_vec();
        let mut cur = g;
        // h + <g> is the union of the translates h + kg
        while !member[cur] {
            for &x in h {
                let y = self.add(x, cur);
                if !member[y] {
                    member[y] = true;
                    out.push(y);
                }
            }
            cur = self.add(cur, g);
        }
        out.sort_unstable();
        out
    }

    fn all_subgroups(&self) -> Vec<Vec<usize>> {
        let trivial = vec![0usize];
        let mut seen: HashSet<Vec<usize>> = HashSet::from([trivial.clone()]);
        let mut queue = VecDeque::from([trivial]);
        let mut out = Vec::new();
        while let Some(h) = queue.pop_front() {
            let mut covered = vec![false; self.n()];
            for &x in &h {
                covered[x] = true;
            }
            for g in 0..self.n() {
                if covered[g] {
                    continue;
                }
                // every element of the coset g + h yields the same join
                for &x in &h {
                    covered[self.add(g, x)] = true;
                }
                let k = self.join(&h, g);
                if seen.insert(k.clone()) {
                    queue.push_back(k);
                }
            }
            out.push(h);
        }
        out
    }

    /// A small generating set, chosen greedily in index order.
    fn generators_of(&self, h: &[usize]) -> Vec<Element> {
        let mut span = vec![0usize];
        let mut gens = Vec::new();
        for &x in h {
            if span.binary_search(&x).is_err() {
                span = self.join(&span, x);
                gens.push(self.elements[x].clone());
            }
        }
        gens
    }
}
