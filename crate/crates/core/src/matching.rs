//! Matchings from `A` to `B` inside an abelian group: bijections `f` with
//! `a + f(a) ∉ A`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{bound_check, Error, Result};
use crate::group::{Element, ElementSet, GroupSpec, Order};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawInstance")]
pub struct MatchInstance {
    group: GroupSpec,
    #[serde(rename = "A")]
    a: Vec<Element>,
    #[serde(rename = "B")]
    b: Vec<Element>,
}

#[derive(Deserialize)]
struct RawInstance {
    group: GroupSpec,
    #[serde(rename = "A")]
    a: Vec<Vec<i64>>,
    #[serde(rename = "B")]
    b: Vec<Vec<i64>>,
}

impl TryFrom<RawInstance> for MatchInstance {
    type Error = Error;

    fn try_from(raw: RawInstance) -> Result<Self> {
        let a = raw.a.into_iter().map(|c| raw.group.element(c)).collect::<Result<_>>()?;
        let b = raw.b.into_iter().map(|c| raw.group.element(c)).collect::<Result<_>>()?;
        MatchInstance::new(raw.group, a, b)
    }
}

impl MatchInstance {
    pub fn new(group: GroupSpec, a: Vec<Element>, b: Vec<Element>) -> Result<Self> {
        for x in a.iter().chain(&b) {
            group.check(x)?;
        }
        if a.is_empty() || a.len() != b.len() {
            return Err(Error::InvalidInstance(format!(
                "|A| = {} and |B| = {} must be equal and positive",
                a.len(),
                b.len()
            )));
        }
        for (name, v) in [("A", &a), ("B", &b)] {
            if v.iter().collect::<BTreeSet<_>>().len() != v.len() {
                return Err(Error::InvalidInstance(format!("{name} contains duplicates")));
            }
        }
        Ok(MatchInstance { group, a, b })
    }

    /// Instance from coordinate lists, reducing torsion coordinates.
    pub fn from_coords(group: GroupSpec, a: &[Vec<i64>], b: &[Vec<i64>]) -> Result<Self> {
        let a = a.iter().map(|c| group.element(c.clone())).collect::<Result<_>>()?;
        let b = b.iter().map(|c| group.element(c.clone())).collect::<Result<_>>()?;
        MatchInstance::new(group, a, b)
    }

    pub fn group(&self) -> &GroupSpec {
        &self.group
    }

    pub fn a(&self) -> &[Element] {
        &self.a
    }

    pub fn b(&self) -> &[Element] {
        &self.b
    }

    pub fn len(&self) -> usize {
        self.a.len()
    }

    pub fn is_empty(&self) -> bool {
        self.a.is_empty()
    }

    pub fn a_set(&self) -> ElementSet {
        self.a.iter().cloned().collect()
    }

    pub fn b_set(&self) -> ElementSet {
        self.b.iter().cloned().collect()
    }

    pub fn one_not_in_b(&self) -> bool {
        !self.b.iter().any(Element::is_zero)
    }

    fn require_one_not_in_b(&self) -> Result<()> {
        if self.one_not_in_b() {
            Ok(())
        } else {
            Err(Error::Precondition("the identity belongs to B".into()))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeSet {
    /// `adjacency[i][j]` holds when `A[i] + B[j] ∉ A`.
    pub adjacency: Vec<Vec<bool>>,
    pub degrees_a: Vec<usize>,
    pub degrees_b: Vec<usize>,
}

impl EdgeSet {
    /// Indices `j` adjacent to some row of `rows`.
    pub fn neighborhood(&self, rows: &[usize]) -> Vec<usize> {
        (0..self.degrees_b.len()).filter(|&j| rows.iter().any(|&i| self.adjacency[i][j])).collect()
    }

    fn row_masks(&self) -> Vec<u64> {
        self.adjacency
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &x)| x).fold(0u64, |m, (j, _)| m | 1 << j))
            .collect()
    }
}

pub fn build_edges(inst: &MatchInstance) -> EdgeSet {
    let a_set = inst.a_set();
    let g = inst.group();
    let adjacency: Vec<Vec<bool>> = inst
        .a()
        .iter()
        .map(|a| inst.b().iter().map(|b| !a_set.contains(&g.add(a, b))).collect())
        .collect();
    let n = inst.len();
    let degrees_a = adjacency.iter().map(|row| row.iter().filter(|&&x| x).count()).collect();
    let degrees_b = (0..n).map(|j| adjacency.iter().filter(|row| row[j]).count()).collect();
    EdgeSet { adjacency, degrees_a, degrees_b }
}

/// A subset `S` of `A` (as indices) with more elements than neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HallViolator {
    #[serde(rename = "S")]
    pub s: Vec<usize>,
    pub neighborhood: Vec<usize>,
    /// `{ b ∈ B : S + b ⊆ A }`, the complement of the neighbourhood.
    #[serde(rename = "U")]
    pub u: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingResult {
    pub exists: bool,
    /// `matching[i]` is the index in `B` assigned to `A[i]`.
    pub matching: Option<Vec<usize>>,
    pub witness: Option<HallViolator>,
}

/// `{ j : S + B[j] ⊆ A }` for a set of row indices.
pub fn stabilizing_columns(inst: &MatchInstance, rows: &[usize]) -> Vec<usize> {
    let a_set = inst.a_set();
    let g = inst.group();
    (0..inst.len())
        .filter(|&j| rows.iter().all(|&i| a_set.contains(&g.add(&inst.a()[i], &inst.b()[j]))))
        .collect()
}

fn augment(adj: &[Vec<bool>], i: usize, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
    for j in 0..adj[i].len() {
        if adj[i][j] && !seen[j] {
            seen[j] = true;
            if owner[j].is_none_or(|k| augment(adj, k, seen, owner)) {
                owner[j] = Some(i);
                return true;
            }
        }
    }
    false
}

/// Perfect matching by augmenting paths, scanning rows and columns in index
/// order. On failure the rows reachable by alternating paths from unmatched
/// rows form a Hall violator.
pub fn find_matching(inst: &MatchInstance) -> MatchingResult {
    let edges = build_edges(inst);
    let adj = &edges.adjacency;
    let n = inst.len();
    let mut owner: Vec<Option<usize>> = vec![None; n];
    let mut unmatched = Vec::new();
    for i in 0..n {
        let mut seen = vec![false; n];
        if !augment(adj, i, &mut seen, &mut owner) {
            unmatched.push(i);
        }
    }
    if unmatched.is_empty() {
        let mut matching = vec![0; n];
        for (j, i) in owner.iter().enumerate() {
            matching[i.expect("perfect matching")] = j;
        }
        return MatchingResult { exists: true, matching: Some(matching), witness: None };
    }
    let mut row_seen = vec![false; n];
    let mut col_seen = vec![false; n];
    let mut stack = unmatched.clone();
    for &i in &unmatched {
        row_seen[i] = true;
    }
    while let Some(i) = stack.pop() {
        for j in 0..n {
            if adj[i][j] && !col_seen[j] {
                col_seen[j] = true;
                let k = owner[j].expect("maximum matching saturates reachable columns");
                if !row_seen[k] {
                    row_seen[k] = true;
                    stack.push(k);
                }
            }
        }
    }
    let s: Vec<usize> = (0..n).filter(|&i| row_seen[i]).collect();
    let neighborhood: Vec<usize> = (0..n).filter(|&j| col_seen[j]).collect();
    let u = (0..n).filter(|&j| !col_seen[j]).collect();
    debug_assert_eq!(neighborhood, edges.neighborhood(&s));
    MatchingResult { exists: false, matching: None, witness: Some(HallViolator { s, neighborhood, u }) }
}

/// Permanent of a 0-1 matrix given by row bitmasks over `n` columns,
/// by signed inclusion-exclusion over column subsets.
pub fn permanent(rows: &[u64], n: usize) -> BigUint {
    assert_eq!(rows.len(), n);
    assert!(n < 64);
    if n == 0 {
        return BigUint::one();
    }
    if n <= 20 {
        // |sum| <= 2^n * n^n < 2^127 for n <= 20
        let mut total: i128 = 0;
        for mask in 1u64..(1 << n) {
            let mut prod: i128 = 1;
            for &r in rows {
                let c = (r & mask).count_ones();
                if c == 0 {
                    prod = 0;
                    break;
                }
                prod *= c as i128;
            }
            if (n as u32 - mask.count_ones()) % 2 == 1 {
                total -= prod;
            } else {
                total += prod;
            }
        }
        return BigUint::try_from(total).expect("permanent is non-negative");
    }
    let mut total = BigInt::zero();
    for mask in 1u64..(1 << n) {
        let mut prod = BigInt::one();
        for &r in rows {
            let c = (r & mask).count_ones();
            if c == 0 {
                prod = BigInt::zero();
                break;
            }
            prod *= c;
        }
        if (n as u32 - mask.count_ones()) % 2 == 1 {
            total -= prod;
        } else {
            total += prod;
        }
    }
    debug_assert!(!total.is_negative());
    total.to_biguint().expect("permanent is non-negative")
}

pub fn count_matchings(inst: &MatchInstance, limits: &Limits) -> Result<BigUint> {
    bound_check("|A| for counting", inst.len() as u64, limits.count_size.min(63) as u64)?;
    let edges = build_edges(inst);
    Ok(permanent(&edges.row_masks(), inst.len()))
}

pub fn factorial(n: usize) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * k)
}

/// `m!` where `m` is the least column degree; a lower bound on the number of
/// matchings whenever one exists.
pub fn marshall_hall_lower_bound(inst: &MatchInstance) -> Result<BigUint> {
    if !find_matching(inst).exists {
        return Err(Error::NoMatching);
    }
    let edges = build_edges(inst);
    let m = edges.degrees_b.iter().copied().min().unwrap_or(0);
    Ok(factorial(m))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Strategy {
    /// Scan every pair of subsets `S ⊆ A`, `R ⊆ B ∪ {1}`.
    Exhaustive,
    /// Scan subgroups `H` with `R = (B ∪ {1}) ∩ H` and `S` the union of
    /// `H`-cosets inside `A`.
    #[default]
    Reduced,
}

impl std::str::FromStr for Strategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Strategy::Exhaustive),
            "reduced" => Ok(Strategy::Reduced),
            _ => Err(Error::Precondition(format!("unknown strategy {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Characterization {
    pub holds: bool,
    /// A pair with `S + R = S` and `|S| > |B \ R|`.
    pub violation: Option<(ElementSet, ElementSet)>,
}

/// Whether every pair of nonempty `S ⊆ A`, `R ⊆ B ∪ {1}` with `S + R = S`
/// satisfies `|S| <= |B \ R|`. Equivalent to the existence of a matching.
pub fn characterization_check(inst: &MatchInstance, strategy: Strategy, limits: &Limits) -> Result<Characterization> {
    inst.require_one_not_in_b()?;
    match strategy {
        Strategy::Exhaustive => exhaustive_check(inst, limits),
        Strategy::Reduced => reduced_check(inst, limits),
    }
}

fn exhaustive_check(inst: &MatchInstance, limits: &Limits) -> Result<Characterization> {
    let n = inst.len();
    bound_check("|A| for the exhaustive scan", n as u64, limits.exhaustive_size.min(30) as u64)?;
    let g = inst.group();
    // columns 0..n are B, column n is the identity
    let mut cols: Vec<Element> = inst.b().to_vec();
    cols.push(g.identity());
    let a_index = |x: &Element| inst.a().iter().position(|a| a == x);
    let shift: Vec<Vec<Option<usize>>> =
        inst.a().iter().map(|a| cols.iter().map(|c| a_index(&g.add(a, c))).collect()).collect();
    let b_bits: u64 = (1 << n) - 1;
    for s in 1u64..(1 << n) {
        // S + r = S for r in R exactly when S + R = S; collect the admissible r
        let mut t: u64 = 0;
        for (j, _) in cols.iter().enumerate() {
            let closed = (0..n)
                .filter(|&i| s >> i & 1 == 1)
                .all(|i| shift[i][j].is_some_and(|k| s >> k & 1 == 1));
            if closed {
                t |= 1 << j;
            }
        }
        let size_s = s.count_ones();
        let mut r = t;
        while r != 0 {
            let outside = n as u32 - (r & b_bits).count_ones();
            if size_s > outside {
                let pick = |mask: u64, v: &[Element]| -> ElementSet {
                    (0..v.len()).filter(|&i| mask >> i & 1 == 1).map(|i| v[i].clone()).collect()
                };
                return Ok(Characterization { holds: false, violation: Some((pick(s, inst.a()), pick(r, &cols))) });
            }
            r = (r - 1) & t;
        }
    }
    Ok(Characterization { holds: true, violation: None })
}

/// Finite subgroups all live in the torsion part, so the scan runs over the
/// subgroups of `Z_{d1} x ... x Z_{dk}` embedded with zero free coordinates.
fn torsion_subgroups(g: &GroupSpec, limits: &Limits) -> Result<Vec<ElementSet>> {
    let torsion = GroupSpec::new(0, g.torsion().to_vec())?;
    let pad = g.free_rank();
    Ok(torsion
        .enumerate_subgroups(limits.subgroup_order)?
        .into_iter()
        .map(|h| {
            h.elements
                .expect("finite")
                .into_iter()
                .map(|x| {
                    let mut c = vec![0; pad];
                    c.extend(x.0);
                    Element(c)
                })
                .collect()
        })
        .collect())
}

fn reduced_check(inst: &MatchInstance, limits: &Limits) -> Result<Characterization> {
    let g = inst.group();
    let a_set = inst.a_set();
    let mut b_one = inst.b_set();
    b_one.insert(g.identity());
    for h in torsion_subgroups(g, limits)? {
        let r: ElementSet = b_one.intersection(&h).cloned().collect();
        let gens: Vec<Element> = r.iter().cloned().collect();
        let generated = g.subgroup_generated(&gens)?;
        if generated.elements() != Ok(&h) {
            continue;
        }
        let s: ElementSet = a_set.iter().filter(|a| h.iter().all(|x| a_set.contains(&g.add(a, x)))).cloned().collect();
        let outside = inst.b().iter().filter(|b| !r.contains(b)).count();
        if !s.is_empty() && s.len() > outside {
            return Ok(Characterization { holds: false, violation: Some((s, r)) });
        }
    }
    Ok(Characterization { holds: true, violation: None })
}

/// `A` has no progression longer than `n` and every element of `B` has
/// order greater than `n`.
pub fn check_progression_order_condition(inst: &MatchInstance, n: usize) -> bool {
    let g = inst.group();
    g.max_progression_length(&inst.a_set()) <= n
        && inst.b().iter().all(|b| g.element_order(b) > Order::Finite(n as u64))
}

pub fn check_chowla_condition(inst: &MatchInstance) -> bool {
    inst.group().is_chowla_subset(&inst.b_set())
}

/// A matching from `A` to itself exists exactly when `A` avoids the identity.
pub fn check_self_matching(a_set: &ElementSet) -> bool {
    !a_set.iter().any(Element::is_zero)
}

/// `(|A| - 1)!`, a lower bound on the number of matchings when `A` is Sidon.
pub fn sidon_count_bound(inst: &MatchInstance) -> Result<BigUint> {
    if !inst.group().is_sidon(&inst.a_set()) {
        return Err(Error::Precondition("A is not a Sidon set".into()));
    }
    inst.require_one_not_in_b()?;
    Ok(factorial(inst.len() - 1))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatchingPropertyReport {
    pub holds: bool,
    /// `A = H`, `B = (H \ {1}) ∪ {g}` for a subgroup `H` of prime order.
    pub counterexample: Option<MatchInstance>,
}

/// The matching property holds exactly for torsion-free groups and groups of
/// prime order. When it fails and the smallest nontrivial subgroup has at
/// most `bound` elements, an unmatchable instance is built and checked.
pub fn has_matching_property(g: &GroupSpec, bound: u64) -> Result<MatchingPropertyReport> {
    let prime_order = g.is_finite() && crate::group::is_prime(g.torsion_order());
    let holds = g.is_torsion_free() || prime_order;
    if holds {
        return Ok(MatchingPropertyReport { holds, counterexample: None });
    }
    let p = g.min_nontrivial_subgroup_size().finite().expect("group has torsion");
    if p > bound {
        return Ok(MatchingPropertyReport { holds, counterexample: None });
    }
    // an element of order p: scale a torsion generator whose order p divides
    let (slot, d) = g.torsion().iter().enumerate().find(|(_, &d)| d % p == 0).expect("p divides the torsion order");
    let mut coords = vec![0i64; g.rank()];
    coords[g.free_rank() + slot] = (d / p) as i64;
    let x = Element(coords);
    let h = g.subgroup_generated(&[x])?;
    let h_set = h.elements()?.clone();
    let outside = if g.is_finite() {
        g.elements()?.into_iter().find(|y| !h_set.contains(y))
    } else {
        let mut c = vec![0i64; g.rank()];
        c[0] = 1;
        Some(Element(c))
    }
    .expect("H is proper");
    let a: Vec<Element> = h_set.iter().cloned().collect();
    let mut b: Vec<Element> = h_set.iter().filter(|y| !y.is_zero()).cloned().collect();
    b.push(outside);
    let inst = MatchInstance::new(g.clone(), a, b)?;
    if find_matching(&inst).exists {
        return Err(Error::Audit(format!("counterexample for {g} is matchable")));
    }
    Ok(MatchingPropertyReport { holds, counterexample: Some(inst) })
}

/// `|(a + H) ∩ A| + |H ∩ B| < |H| + 1` for every `a ∈ G` and every
/// nontrivial proper subgroup `H`. Finite groups only.
pub fn check_coset_intersection_condition(inst: &MatchInstance, limits: &Limits) -> Result<bool> {
    let g = inst.group();
    if !g.is_finite() {
        return Err(Error::Precondition("coset condition is implemented for finite groups only".into()));
    }
    inst.require_one_not_in_b()?;
    let order = g.torsion_order() as usize;
    let a_set = inst.a_set();
    let b_set = inst.b_set();
    let elements = g.elements()?;
    for h in g.enumerate_subgroups(limits.subgroup_order)? {
        let h = h.elements.expect("finite");
        if h.len() == 1 || h.len() == order {
            continue;
        }
        let in_b = h.iter().filter(|x| b_set.contains(*x)).count();
        let mut covered = BTreeSet::new();
        for a in &elements {
            if covered.contains(a) {
                continue;
            }
            let coset: Vec<Element> = h.iter().map(|x| g.add(a, x)).collect();
            let in_a = coset.iter().filter(|y| a_set.contains(*y)).count();
            if in_a + in_b > h.len() {
                return Ok(false);
            }
            covered.extend(coset);
        }
    }
    Ok(true)
}

impl MatchInstance {
    /// Convenience for `count_matchings` as a `u64`, for small tests.
    pub fn count_u64(&self) -> Option<u64> {
        count_matchings(self, &Limits::default()).ok()?.to_u64()
    }
}
