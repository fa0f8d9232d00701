//! Seeded random instance families and oracle-agreement sweeps.
//!
//! All randomness comes from SplitMix64 with the standard constants, and
//! every draw is reduced with `next_u64() % n`, so another implementation
//! that follows the same draw order reproduces the same instance lists.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::dyson::{certificate_for_unmatched, verify_certificate};
use crate::error::{Error, Result};
use crate::ffield::{FieldElement, FieldTower};
use crate::group::{Element, GroupSpec};
use crate::linear::Subspace;
use crate::linear_matching::{is_matched_characterization, LinearInstance, LinearStrategy};
use crate::matching::{characterization_check, find_matching, MatchInstance, Strategy};
use crate::Limits;

pub const SPLITMIX_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;
pub const SPLITMIX_MUL1: u64 = 0xBF58_476D_1CE4_E5B9;
pub const SPLITMIX_MUL2: u64 = 0x94D0_49BB_1331_11EB;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(SPLITMIX_GAMMA);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(SPLITMIX_MUL1);
        z = (z ^ (z >> 27)).wrapping_mul(SPLITMIX_MUL2);
        z ^ (z >> 31)
    }

    /// `next_u64() % n`; `n` must be positive.
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    /// `k` distinct values from `0..n` by a partial Fisher-Yates shuffle of
    /// `[0, 1, ..., n-1]`: step `i` swaps position `i` with
    /// `i + below(n - i)`.
    pub fn sample(&mut self, n: usize, k: usize) -> Vec<usize> {
        assert!(k <= n, "cannot sample {k} of {n}");
        let mut pool: Vec<usize> = (0..n).collect();
        for i in 0..k {
            let j = i + self.below((n - i) as u64) as usize;
            pool.swap(i, j);
        }
        pool.truncate(k);
        pool
    }
}

/// Abelian groups of each order up to `max_order`, in invariant-factor form
/// `d_1 | d_2 | ... | d_k`, ordered by order and then by factor list.
pub fn small_groups(max_order: u64) -> Vec<GroupSpec> {
    fn go(rest: u64, min: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rest == 1 {
            out.push(cur.clone());
            return;
        }
        let mut d = min.max(2);
        while d <= rest {
            if rest.is_multiple_of(d) && cur.last().is_none_or(|&l| d.is_multiple_of(l)) {
                cur.push(d);
                go(rest / d, d, cur, out);
                cur.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    for n in 2..=max_order {
        let mut lists = Vec::new();
        go(n, 2, &mut Vec::new(), &mut lists);
        lists.sort();
        out.extend(lists.into_iter().map(|l| GroupSpec::new(0, l).expect("valid torsion")));
    }
    out
}

/// `A` uniform among `k`-subsets of `G`, then `B` uniform among `k`-subsets
/// of `G \ {0}`, both drawn as element indices in lexicographic order.
pub fn random_group_instance(rng: &mut SplitMix64, g: &GroupSpec, k: usize) -> Result<MatchInstance> {
    let elems = g.elements()?;
    if k == 0 || k >= elems.len() {
        return Err(Error::Precondition(format!("need 0 < k < |G|, got k = {k}")));
    }
    let a: Vec<Element> = rng.sample(elems.len(), k).into_iter().map(|i| elems[i].clone()).collect();
    let b: Vec<Element> = rng.sample(elems.len() - 1, k).into_iter().map(|i| elems[i + 1].clone()).collect();
    MatchInstance::new(g.clone(), a, b)
}

/// A random `m`-dimensional subspace: draw field elements by index
/// (`below(|L|)`) and keep each one that raises the dimension and, when
/// `avoid_one` is set, keeps `1` outside the span.
pub fn random_subspace(rng: &mut SplitMix64, tower: &FieldTower, m: usize, avoid_one: bool) -> Result<Subspace> {
    let limit = tower.degree() - usize::from(avoid_one);
    if m > limit {
        return Err(Error::Precondition(format!("no {m}-dimensional subspace of this kind")));
    }
    let mut gens: Vec<FieldElement> = Vec::new();
    let mut cur = Subspace::zero(tower);
    while cur.dim() < m {
        let x = tower.element_at(rng.below(tower.size()));
        let mut next_gens = gens.clone();
        next_gens.push(x);
        let next = Subspace::span(tower, &next_gens)?;
        if next.dim() > cur.dim() && !(avoid_one && next.contains(tower, &tower.one())) {
            gens = next_gens;
            cur = next;
        }
    }
    Ok(cur)
}

/// `m = 1 + below(max_dim)`, then `A` with [`random_subspace`] and `B` the
/// same way avoiding `1`.
pub fn random_linear_instance(rng: &mut SplitMix64, tower: &FieldTower, max_dim: usize) -> Result<LinearInstance> {
    let max_dim = max_dim.min(tower.degree() - 1);
    if max_dim == 0 {
        return Err(Error::Precondition("the extension has no admissible instances".into()));
    }
    let m = 1 + rng.below(max_dim as u64) as usize;
    let a = random_subspace(rng, tower, m, false)?;
    let b = random_subspace(rng, tower, m, true)?;
    LinearInstance::new(tower.clone(), a, b)
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement<I> {
    pub index: usize,
    pub instance: I,
    pub verdicts: BTreeMap<&'static str, bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Failure<I> {
    pub index: usize,
    pub instance: I,
    pub error: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepReport<I> {
    pub seed: u64,
    pub instances: usize,
    pub positives: usize,
    pub disagreements: Vec<Disagreement<I>>,
    pub failures: Vec<Failure<I>>,
}

impl<I> SweepReport<I> {
    pub fn clean(&self) -> bool {
        self.disagreements.is_empty() && self.failures.is_empty()
    }
}

/// Instance `i`: group `groups[below(len)]`, size `k = 1 + below(min(max_size, |G| - 1))`,
/// then [`random_group_instance`].
pub fn group_instances(groups: &[GroupSpec], count: usize, max_size: usize, seed: u64) -> Result<Vec<MatchInstance>> {
    if groups.is_empty() || groups.iter().any(|g| !g.is_finite()) {
        return Err(Error::Precondition("group sweeps need a nonempty list of finite groups".into()));
    }
    let mut rng = SplitMix64::new(seed);
    (0..count)
        .map(|_| {
            let g = &groups[rng.below(groups.len() as u64) as usize];
            let cap = (max_size as u64).min(g.torsion_order() - 1).max(1);
            let k = 1 + rng.below(cap) as usize;
            random_group_instance(&mut rng, g, k)
        })
        .collect()
}

/// Compares Kuhn matching with both characterization strategies. Unmatchable
/// instances must also yield a verified Dyson certificate; an audit error
/// lands in `failures`.
pub fn group_sweep(
    groups: &[GroupSpec],
    count: usize,
    max_size: usize,
    seed: u64,
    limits: &Limits,
) -> Result<SweepReport<MatchInstance>> {
    let instances = group_instances(groups, count, max_size, seed)?;
    let mut report =
        SweepReport { seed, instances: instances.len(), positives: 0, disagreements: Vec::new(), failures: Vec::new() };
    for (index, inst) in instances.into_iter().enumerate() {
        let outcome = (|| -> Result<BTreeMap<&'static str, bool>> {
            let mut v = BTreeMap::new();
            let exists = find_matching(&inst).exists;
            v.insert("matching", exists);
            v.insert("exhaustive", characterization_check(&inst, Strategy::Exhaustive, limits)?.holds);
            v.insert("reduced", characterization_check(&inst, Strategy::Reduced, limits)?.holds);
            if !exists {
                let (cert, _) = certificate_for_unmatched(&inst)?;
                if !verify_certificate(&inst, &cert) {
                    return Err(Error::Audit("certificate failed verification".into()));
                }
            }
            Ok(v)
        })();
        match outcome {
            Ok(v) => {
                if v["matching"] {
                    report.positives += 1;
                }
                if v.values().any(|&x| x != v["matching"]) {
                    report.disagreements.push(Disagreement { index, instance: inst, verdicts: v });
                }
            }
            Err(e) => report.failures.push(Failure { index, instance: inst, error: e.to_string() }),
        }
    }
    Ok(report)
}

pub fn linear_instances(tower: &FieldTower, count: usize, max_dim: usize, seed: u64) -> Result<Vec<LinearInstance>> {
    let mut rng = SplitMix64::new(seed);
    (0..count).map(|_| random_linear_instance(&mut rng, tower, max_dim)).collect()
}

/// Compares the requested characterization strategies on random instances.
pub fn field_sweep(
    tower: &FieldTower,
    count: usize,
    max_dim: usize,
    seed: u64,
    strategies: &[LinearStrategy],
    limits: &Limits,
) -> Result<SweepReport<LinearInstance>> {
    if strategies.is_empty() {
        return Err(Error::Precondition("need at least one strategy".into()));
    }
    let instances = linear_instances(tower, count, max_dim, seed)?;
    let mut report =
        SweepReport { seed, instances: instances.len(), positives: 0, disagreements: Vec::new(), failures: Vec::new() };
    for (index, inst) in instances.into_iter().enumerate() {
        let outcome = strategies
            .iter()
            .map(|&s| {
                let name = match s {
                    LinearStrategy::Exhaustive => "exhaustive",
                    LinearStrategy::Subfield => "subfield",
                    LinearStrategy::Frame => "frame",
                };
                is_matched_characterization(&inst, s, limits).map(|c| (name, c.matched))
            })
            .collect::<Result<BTreeMap<_, _>>>();
        match outcome {
            Ok(v) => {
                let first = *v.values().next().expect("nonempty");
                if first {
                    report.positives += 1;
                }
                if v.values().any(|&x| x != first) {
                    report.disagreements.push(Disagreement { index, instance: inst, verdicts: v });
                }
            }
            Err(e) => report.failures.push(Failure { index, instance: inst, error: e.to_string() }),
        }
    }
    Ok(report)
}
