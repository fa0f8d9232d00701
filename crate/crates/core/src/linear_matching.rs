//! Matched bases between `K`-subspaces of `L`, the linear Dyson transform and
//! the characterization by pairs `(S, R)` with `⟨SR⟩ = S`.
//!
//! `A` is matched to `B` when every basis `a_1..a_m` of `A` admits a basis
//! `b_1..b_m` of `B` with `a_i⁻¹A ∩ B ⊆ ⟨b_j : j ≠ i⟩`. For a fixed basis of
//! `A` this is a free transversal problem for the annihilators
//! `W_i = (a_i⁻¹A ∩ B)^⊥ ⊆ B*`, solved here by matroid intersection.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{bound_check, Error, Result};
use crate::ffield::{BaseField, FieldElement, FieldSpec, FieldTower};
use crate::linalg;
use crate::linear::{dual_basis, Functional, Subspace};
use crate::Limits;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearInstance {
    tower: FieldTower,
    a: Subspace,
    b: Subspace,
}

#[derive(Serialize, Deserialize)]
struct RawLinearInstance {
    tower: FieldSpec,
    #[serde(rename = "A")]
    a: Vec<Vec<u32>>,
    #[serde(rename = "B")]
    b: Vec<Vec<u32>>,
}

impl<'de> Deserialize<'de> for LinearInstance {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = RawLinearInstance::deserialize(d)?;
        LinearInstance::from_spec(&raw.tower, &raw.a, &raw.b).map_err(serde::de::Error::custom)
    }
}

impl Serialize for LinearInstance {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        RawLinearInstance { tower: self.tower.spec(), a: self.a.rows().to_vec(), b: self.b.rows().to_vec() }
            .serialize(s)
    }
}

impl LinearInstance {
    pub fn new(tower: FieldTower, a: Subspace, b: Subspace) -> Result<Self> {
        for s in [&a, &b] {
            if s.ambient_dim() != tower.degree() {
                return Err(Error::TowerMismatch { expected: tower.degree(), got: s.ambient_dim() });
            }
        }
        if a.dim() != b.dim() || a.is_zero() {
            return Err(Error::InvalidInstance(format!(
                "A and B need equal positive dimension, got {} and {}",
                a.dim(),
                b.dim()
            )));
        }
        Ok(LinearInstance { tower, a, b })
    }

    pub fn from_spec(spec: &FieldSpec, a: &[Vec<u32>], b: &[Vec<u32>]) -> Result<Self> {
        let tower = FieldTower::from_spec(spec)?;
        let a = Subspace::from_coeffs(&tower, a)?;
        let b = Subspace::from_coeffs(&tower, b)?;
        LinearInstance::new(tower, a, b)
    }

    pub fn tower(&self) -> &FieldTower {
        &self.tower
    }

    pub fn a(&self) -> &Subspace {
        &self.a
    }

    pub fn b(&self) -> &Subspace {
        &self.b
    }

    pub fn dim(&self) -> usize {
        self.a.dim()
    }

    pub fn one_not_in_b(&self) -> bool {
        !self.b.contains(&self.tower, &self.tower.one())
    }

    fn require_one_not_in_b(&self) -> Result<()> {
        if self.one_not_in_b() {
            Ok(())
        } else {
            Err(Error::Precondition("1 lies in B".into()))
        }
    }

    /// `B ⊕ K`.
    pub fn b_plus_base(&self) -> Result<Subspace> {
        self.b.direct_sum_with_base(&self.tower)
    }

    /// `a⁻¹A ∩ B`.
    pub fn local_intersection(&self, a: &FieldElement) -> Result<Subspace> {
        let ai = self.tower.inv(a)?;
        self.a.scale(&self.tower, &ai)?.intersect(&self.tower, &self.b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MatchedBasisResult {
    pub a_basis: Vec<FieldElement>,
    pub b_basis: Option<Vec<FieldElement>>,
    /// Indices `J` into `a_basis` with `dim Σ_{i∈J} W_i < |J|`.
    pub rado_witness: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearViolation {
    #[serde(rename = "S")]
    pub s: Subspace,
    #[serde(rename = "R")]
    pub r: Subspace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearStrategy {
    Exhaustive,
    #[default]
    Subfield,
    Frame,
}

impl std::str::FromStr for LinearStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(LinearStrategy::Exhaustive),
            "subfield" => Ok(LinearStrategy::Subfield),
            "frame" => Ok(LinearStrategy::Frame),
            other => Err(Error::InvalidInstance(format!("unknown linear strategy {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearCharacterization {
    pub matched: bool,
    pub violation: Option<LinearViolation>,
}

fn audit(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Audit(what()))
    }
}

/// Checks that `v` is an ordered basis of `space`.
fn require_basis(tower: &FieldTower, v: &[FieldElement], space: &Subspace, name: &'static str) -> Result<()> {
    if v.len() != space.dim() || v.iter().any(|x| !space.contains(tower, x)) || Subspace::span(tower, v)? != *space {
        return Err(Error::Precondition(format!("{name} is not a basis")));
    }
    Ok(())
}

/// Whether `a_i⁻¹A ∩ B ⊆ ⟨b_j : j ≠ i⟩` for every `i`.
pub fn is_matched_basis(inst: &LinearInstance, a_basis: &[FieldElement], b_basis: &[FieldElement]) -> Result<bool> {
    let t = inst.tower();
    require_basis(t, a_basis, inst.a(), "a_basis")?;
    require_basis(t, b_basis, inst.b(), "b_basis")?;
    for (i, a) in a_basis.iter().enumerate() {
        let local = inst.local_intersection(a)?;
        let others: Vec<FieldElement> =
            b_basis.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, b)| b.clone()).collect();
        if !local.is_subspace_of(t, &Subspace::span(t, &others)?) {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Transversal {
    /// `x_i ∈ W_i`, linearly independent.
    Found(Vec<Vec<u32>>),
    /// `J` with `dim Σ_{i∈J} W_i < |J|`.
    Violation(Vec<usize>),
}

/// Free transversal of a family of subspaces of `K^dim`, each given by a
/// spanning list.
///
/// Runs matroid intersection between the linear matroid on all spanning
/// vectors and the partition matroid "one vector per member", adding the
/// members one at a time and augmenting along shortest exchange paths. When
/// a member cannot be added, the elements that reach an uncovered member in
/// the exchange graph contain every spanning vector of some `J` with
/// `dim Σ_{i∈J} W_i < |J|`.
pub fn free_transversal(k: &BaseField, dim: usize, family: &[Vec<Vec<u32>>]) -> Result<Transversal> {
    if family.iter().flatten().any(|v| v.len() != dim) {
        return Err(Error::Precondition(format!("family vectors must have length {dim}")));
    }
    // ground set in (member, spanning vector) order
    let ground: Vec<(usize, &Vec<u32>)> =
        family.iter().enumerate().flat_map(|(i, vs)| vs.iter().map(move |v| (i, v))).collect();
    let independent =
        |set: &[usize]| linalg::rank(k, &set.iter().map(|&e| ground[e].1.clone()).collect::<Vec<_>>(), dim) == set.len();

    let mut chosen: Vec<usize> = Vec::new();
    for p in 0..family.len() {
        let active: Vec<usize> = (0..ground.len()).filter(|&e| ground[e].0 <= p).collect();
        let covered: BTreeSet<usize> = chosen.iter().map(|&e| ground[e].0).collect();
        let outside: Vec<usize> = active.iter().copied().filter(|e| !chosen.contains(e)).collect();

        let in_m1 = |x: Option<usize>, y: usize| {
            let mut s: Vec<usize> = chosen.iter().copied().filter(|&c| Some(c) != x).collect();
            s.push(y);
            independent(&s)
        };
        let sources: BTreeSet<usize> = outside.iter().copied().filter(|&y| in_m1(None, y)).collect();
        let sinks: BTreeSet<usize> = outside.iter().copied().filter(|&y| !covered.contains(&ground[y].0)).collect();
        // adjacency: x -> y if chosen - x + y independent; y -> x if same member
        let mut succ: Vec<Vec<usize>> = vec![Vec::new(); ground.len()];
        for &x in &chosen {
            for &y in &outside {
                if in_m1(Some(x), y) {
                    succ[x].push(y);
                }
                if ground[x].0 == ground[y].0 {
                    succ[y].push(x);
                }
            }
        }

        let mut prev: Vec<Option<usize>> = vec![None; ground.len()];
        let mut seen = vec![false; ground.len()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for &s in &sources {
            seen[s] = true;
            queue.push_back(s);
        }
        let mut end = None;
        while let Some(u) = queue.pop_front() {
            if sinks.contains(&u) {
                end = Some(u);
                break;
            }
            for &v in &succ[u] {
                if !seen[v] {
                    seen[v] = true;
                    prev[v] = Some(u);
                    queue.push_back(v);
                }
            }
        }

        match end {
            Some(mut u) => {
                let mut path = vec![u];
                while let Some(v) = prev[u] {
                    path.push(v);
                    u = v;
                }
                for e in path {
                    if let Some(pos) = chosen.iter().position(|&c| c == e) {
                        chosen.remove(pos);
                    } else {
                        chosen.push(e);
                    }
                }
                audit(independent(&chosen), || "augmented transversal is dependent".into())?;
                let members: BTreeSet<usize> = chosen.iter().map(|&e| ground[e].0).collect();
                audit(members.len() == chosen.len() && members.len() == p + 1, || {
                    "augmented transversal does not cover each member once".into()
                })?;
            }
            None => {
                // elements that can reach a sink, by reverse search
                let mut reach: BTreeSet<usize> = sinks.clone();
                let mut stack: Vec<usize> = sinks.iter().copied().collect();
                while let Some(v) = stack.pop() {
                    for &u in &active {
                        if !reach.contains(&u) && succ[u].contains(&v) {
                            reach.insert(u);
                            stack.push(u);
                        }
                    }
                }
                let j: Vec<usize> = (0..=p)
                    .filter(|&i| active.iter().all(|&e| ground[e].0 != i || reach.contains(&e)))
                    .collect();
                let span: Vec<Vec<u32>> = j.iter().flat_map(|&i| family[i].iter().cloned()).collect();
                let r = linalg::rank(k, &span, dim);
                audit(r < j.len(), || format!("Rado witness {j:?} has rank {r}, not below its size"))?;
                return Ok(Transversal::Violation(j));
            }
        }
    }
    chosen.sort_by_key(|&e| ground[e].0);
    Ok(Transversal::Found(chosen.into_iter().map(|e| ground[e].1.clone()).collect()))
}

/// `W_i = (a_i⁻¹A ∩ B)^⊥` in `B*`, in the row coordinates of `B`.
pub fn annihilator_family(inst: &LinearInstance, a_basis: &[FieldElement]) -> Result<Vec<Vec<Functional>>> {
    a_basis.iter().map(|a| inst.local_intersection(a)?.annihilator(inst.tower(), inst.b())).collect()
}

/// Looks for a basis of `B` matched to the given basis of `A`.
pub fn construct_matched_basis(inst: &LinearInstance, a_basis: &[FieldElement]) -> Result<MatchedBasisResult> {
    inst.require_one_not_in_b()?;
    let t = inst.tower();
    require_basis(t, a_basis, inst.a(), "a_basis")?;
    let family = annihilator_family(inst, a_basis)?;
    let vecs: Vec<Vec<Vec<u32>>> = family.iter().map(|w| w.iter().map(|f| f.0.clone()).collect()).collect();
    match free_transversal(t.base(), inst.dim(), &vecs)? {
        Transversal::Found(fs) => {
            let fs: Vec<Functional> = fs.into_iter().map(Functional).collect();
            let b_basis = dual_basis(t, &fs, inst.b())?;
            audit(is_matched_basis(inst, a_basis, &b_basis)?, || "dual basis is not matched".into())?;
            Ok(MatchedBasisResult { a_basis: a_basis.to_vec(), b_basis: Some(b_basis), rado_witness: None })
        }
        Transversal::Violation(j) => {
            Ok(MatchedBasisResult { a_basis: a_basis.to_vec(), b_basis: None, rado_witness: Some(j) })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearState {
    #[serde(rename = "S")]
    pub s: Subspace,
    #[serde(rename = "R")]
    pub r: Subspace,
    pub step: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearTrace {
    pub states: Vec<LinearState>,
    pub chosen_pairs: Vec<(FieldElement, FieldElement)>,
}

impl LinearTrace {
    pub fn last(&self) -> &LinearState {
        self.states.last().expect("trace starts with the initial state")
    }

    pub fn steps(&self) -> usize {
        self.chosen_pairs.len()
    }
}

/// `(S + eR, R ∩ e⁻¹S)` with the dimension audits.
pub fn linear_dyson_step(
    tower: &FieldTower,
    s: &Subspace,
    r: &Subspace,
    e: &FieldElement,
    x: &FieldElement,
) -> Result<(Subspace, Subspace)> {
    if e.is_zero() || !s.contains(tower, e) || !r.contains(tower, x) {
        return Err(Error::Precondition("e must be a nonzero element of S and r an element of R".into()));
    }
    if s.contains(tower, &tower.mul(e, x)) {
        return Err(Error::Precondition(format!("({e})({x}) already lies in S")));
    }
    let er = r.scale(tower, e)?;
    let s1 = s.sum(tower, &er)?;
    let r1 = r.intersect(tower, &s.scale(tower, &tower.inv(e)?)?)?;
    audit(s1.dim() + r1.dim() == s.dim() + r.dim(), || {
        format!("dim S + dim R changed from {} to {}", s.dim() + r.dim(), s1.dim() + r1.dim())
    })?;
    // y -> ey maps R1 onto S ∩ eR
    audit(r1.dim() == s.intersect(tower, &er)?.dim(), || "R1 and S ∩ eR differ in dimension".into())?;
    audit(r1.is_subspace_of(tower, r), || "R1 is not contained in R".into())?;
    if r.contains(tower, &tower.one()) {
        audit(r1.contains(tower, &tower.one()), || "1 left R".into())?;
    }
    audit(s1.dim() > s.dim(), || "S did not grow".into())?;
    Ok((s1, r1))
}

/// First pair of row-basis vectors `e ∈ S`, `r ∈ R` with `er ∉ S`.
pub fn first_open_pair(tower: &FieldTower, s: &Subspace, r: &Subspace) -> Option<(FieldElement, FieldElement)> {
    s.basis()
        .into_iter()
        .find_map(|e| r.basis().into_iter().find(|x| !s.contains(tower, &tower.mul(&e, x))).map(|x| (e.clone(), x)))
}

/// Iterates the linear transform until `⟨SR⟩ = S`, auditing each step
/// against the ambient subspace `A ⊇ ⟨S_0 R_0⟩`.
pub fn linear_stabilize(tower: &FieldTower, ambient: &Subspace, s0: Subspace, r0: Subspace) -> Result<LinearTrace> {
    if s0.is_zero() || r0.is_zero() {
        return Err(Error::Precondition("S0 and R0 must be nonzero".into()));
    }
    let prod0 = s0.minkowski_span(tower, &r0)?;
    audit(s0.is_subspace_of(tower, ambient) && prod0.is_subspace_of(tower, ambient), || {
        "⟨S0 R0⟩ is not inside A".into()
    })?;
    let total = s0.dim() + r0.dim();
    let start_dim = s0.dim();
    let mut trace = LinearTrace { states: vec![LinearState { s: s0, r: r0, step: 0 }], chosen_pairs: Vec::new() };
    loop {
        let cur = trace.last();
        let Some((e, x)) = first_open_pair(tower, &cur.s, &cur.r) else {
            break;
        };
        let prev_prod = cur.s.minkowski_span(tower, &cur.r)?;
        let (s1, r1) = linear_dyson_step(tower, &cur.s, &cur.r, &e, &x)?;
        let prod = s1.minkowski_span(tower, &r1)?;
        audit(prod.is_subspace_of(tower, &prev_prod), || "⟨S1 R1⟩ escaped ⟨SR⟩".into())?;
        audit(s1.is_subspace_of(tower, ambient), || "S left A".into())?;
        audit(s1.dim() + r1.dim() == total, || "dimension sum drifted".into())?;
        let step = cur.step + 1;
        audit(step <= ambient.dim() - start_dim, || "transform failed to terminate".into())?;
        trace.chosen_pairs.push((e, x));
        trace.states.push(LinearState { s: s1, r: r1, step });
    }
    let last = trace.last();
    audit(last.s.minkowski_span(tower, &last.r)? == last.s, || "final pair is not stable".into())?;
    Ok(trace)
}

/// Whether `(S, R)` is a nonzero pair with `S ⊆ A`, `R ⊆ B ⊕ K`, `⟨SR⟩ = S`
/// and `dim S > dim B - dim(R ∩ B)`.
pub fn verify_linear_violation(inst: &LinearInstance, v: &LinearViolation) -> bool {
    let t = inst.tower();
    let Ok(bk) = inst.b_plus_base() else {
        return false;
    };
    if v.s.ambient_dim() != t.degree() || v.r.ambient_dim() != t.degree() || v.s.is_zero() || v.r.is_zero() {
        return false;
    }
    if !v.s.is_subspace_of(t, inst.a()) || !v.r.is_subspace_of(t, &bk) {
        return false;
    }
    let (Ok(prod), Ok(rb)) = (v.s.minkowski_span(t, &v.r), v.r.intersect(t, inst.b())) else {
        return false;
    };
    prod == v.s && v.s.dim() > inst.b().dim() - rb.dim()
}

/// Turns a Rado failure `J` for `a_basis` into a violating pair: start from
/// `S = ⟨a_i : i ∈ J⟩`, `R = (⋂_{i∈J} a_i⁻¹A ∩ B) ⊕ K` and stabilize.
pub fn violation_from_rado(
    inst: &LinearInstance,
    a_basis: &[FieldElement],
    j: &[usize],
) -> Result<(LinearViolation, LinearTrace)> {
    inst.require_one_not_in_b()?;
    let t = inst.tower();
    if j.is_empty() || j.iter().any(|&i| i >= a_basis.len()) {
        return Err(Error::Precondition("J must be a nonempty set of basis indices".into()));
    }
    let s0 = Subspace::span(t, &j.iter().map(|&i| a_basis[i].clone()).collect::<Vec<_>>())?;
    let mut meet = inst.b().clone();
    for &i in j {
        meet = meet.intersect(t, &inst.local_intersection(&a_basis[i])?)?;
    }
    audit(s0.dim() > inst.dim() - meet.dim(), || "Rado witness does not give dim S > dim B - dim T".into())?;
    let r0 = meet.direct_sum_with_base(t)?;
    let trace = linear_stabilize(t, inst.a(), s0, r0)?;
    let last = trace.last();
    let v = LinearViolation { s: last.s.clone(), r: last.r.clone() };
    audit(last.r.contains(t, &t.one()), || "1 left R_m".into())?;
    audit(verify_linear_violation(inst, &v), || "stabilized pair does not violate the bound".into())?;
    Ok((v, trace))
}

/// Checks the bound `dim S ≤ dim B - dim(R ∩ B)` for a stable pair.
fn violates(inst: &LinearInstance, s: &Subspace, r: &Subspace) -> Result<bool> {
    Ok(!s.is_zero() && s.dim() > inst.b().dim() - r.intersect(inst.tower(), inst.b())?.dim())
}

/// Smallest subfield containing `K` and `r`.
pub fn field_generated(tower: &FieldTower, r: &Subspace) -> Result<Subspace> {
    let mut f = r.sum(tower, &Subspace::span(tower, &[tower.one()])?)?;
    loop {
        let next = f.minkowski_span(tower, &f)?;
        if next == f {
            return Ok(f);
        }
        f = next;
    }
}

/// Largest `F`-submodule of `A`: `A ∩ ⋂_h h⁻¹A` over a basis of `F`.
pub fn largest_submodule(tower: &FieldTower, a: &Subspace, f: &Subspace) -> Result<Subspace> {
    let mut s = a.clone();
    for h in f.basis() {
        s = s.intersect(tower, &a.scale(tower, &tower.inv(&h)?)?)?;
    }
    Ok(s)
}

/// Every unordered basis of `space` made of normalized projective points,
/// in lexicographic order of point indices.
pub fn frames(tower: &FieldTower, space: &Subspace, limits: &Limits) -> Result<Vec<Vec<FieldElement>>> {
    let points = space.projective_points(tower.base(), limits.subspace_vectors)?;
    struct Search<'a> {
        k: &'a BaseField,
        n: usize,
        m: usize,
        points: &'a [FieldElement],
        bound: u64,
        out: Vec<Vec<FieldElement>>,
    }
    impl Search<'_> {
        fn go(&mut self, start: usize, cur: &mut Vec<usize>) -> Result<()> {
            if cur.len() == self.m {
                bound_check("frame enumeration", self.out.len() as u64 + 1, self.bound)?;
                self.out.push(cur.iter().map(|&i| self.points[i].clone()).collect());
                return Ok(());
            }
            for i in start..self.points.len() {
                let mut rows: Vec<Vec<u32>> = cur.iter().map(|&c| self.points[c].0.clone()).collect();
                rows.push(self.points[i].0.clone());
                if linalg::rank(self.k, &rows, self.n) == rows.len() {
                    cur.push(i);
                    self.go(i + 1, cur)?;
                    cur.pop();
                }
            }
            Ok(())
        }
    }
    let mut search = Search {
        k: tower.base(),
        n: tower.degree(),
        m: space.dim(),
        points: &points,
        bound: limits.subspace_pairs,
        out: Vec::new(),
    };
    search.go(0, &mut Vec::new())?;
    let out = search.out;
    Ok(out)
}

/// Decides whether `A` is matched to `B` through the pair condition.
pub fn is_matched_characterization(
    inst: &LinearInstance,
    strategy: LinearStrategy,
    limits: &Limits,
) -> Result<LinearCharacterization> {
    inst.require_one_not_in_b()?;
    let t = inst.tower();
    let bk = inst.b_plus_base()?;
    let violation = match strategy {
        LinearStrategy::Exhaustive => {
            let ss = inst.a().all_subspaces(t, limits.subspace_pairs)?;
            let rs = bk.all_subspaces(t, limits.subspace_pairs)?;
            bound_check("subspace pairs", (ss.len() as u64).saturating_mul(rs.len() as u64), limits.subspace_pairs)?;
            let mut found = None;
            'outer: for s in ss.iter().filter(|s| !s.is_zero()) {
                for r in rs.iter().filter(|r| !r.is_zero()) {
                    if s.minkowski_span(t, r)? == *s && violates(inst, s, r)? {
                        found = Some(LinearViolation { s: s.clone(), r: r.clone() });
                        break 'outer;
                    }
                }
            }
            found
        }
        LinearStrategy::Subfield => {
            let mut found = None;
            for (_, f) in t.intermediate_fields() {
                let r = bk.intersect(t, &f)?;
                let fr = field_generated(t, &r)?;
                let s = largest_submodule(t, inst.a(), &fr)?;
                if violates(inst, &s, &r)? {
                    found = Some(LinearViolation { s, r });
                    break;
                }
            }
            found
        }
        LinearStrategy::Frame => {
            let mut found = None;
            for frame in frames(t, inst.a(), limits)? {
                let res = construct_matched_basis(inst, &frame)?;
                if let Some(j) = res.rado_witness {
                    found = Some(violation_from_rado(inst, &frame, &j)?.0);
                    break;
                }
            }
            found
        }
    };
    if let Some(v) = &violation {
        audit(verify_linear_violation(inst, v), || format!("{strategy:?} strategy produced an invalid violation"))?;
    }
    Ok(LinearCharacterization { matched: violation.is_none(), violation })
}

/// For a stable pair `⟨SR⟩ = S`, checks `aK(x) ⊆ S` and `[K(x) : K] ≤ dim S`
/// for every nonzero `a ∈ S` and `x ∈ R`.
pub fn stable_pair_field_audit(tower: &FieldTower, s: &Subspace, r: &Subspace, limits: &Limits) -> Result<()> {
    audit(s.minkowski_span(tower, r)? == *s, || "pair is not stable".into())?;
    let s_vecs = s.vectors(tower.base(), limits.subspace_vectors)?;
    for x in r.vectors(tower.base(), limits.subspace_vectors)? {
        if x.is_zero() {
            continue;
        }
        let kx = tower.generated_field(&x);
        audit(kx.dim() <= s.dim(), || format!("[K({x}) : K] = {} exceeds dim S = {}", kx.dim(), s.dim()))?;
        for a in s_vecs.iter().filter(|a| !a.is_zero()) {
            audit(kx.scale(tower, a)?.is_subspace_of(tower, s), || format!("({a})K({x}) is not inside S"))?;
        }
    }
    Ok(())
}

/// Whether every nonzero `b ∈ B` has `[K(b) : K] ≥ dim B + 1`.
pub fn is_chowla_subspace(tower: &FieldTower, b: &Subspace, limits: &Limits) -> Result<bool> {
    let need = b.dim() + 1;
    Ok(b.projective_points(tower.base(), limits.subspace_vectors)?
        .iter()
        .all(|x| tower.degree_over_base(x) >= need))
}

/// Sufficient condition: `B` is a Chowla subspace.
pub fn check_chowla_matching(inst: &LinearInstance, limits: &Limits) -> Result<bool> {
    is_chowla_subspace(inst.tower(), inst.b(), limits)
}

/// `A` is matched to itself exactly when `1 ∉ A`.
pub fn check_self_matched(tower: &FieldTower, a: &Subspace) -> bool {
    !a.contains(tower, &tower.one())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearPropertyReport {
    pub holds: bool,
    /// `L = K`, where no admissible pair exists at all.
    pub vacuous: bool,
    pub counterexample: Option<LinearInstance>,
    pub violation: Option<LinearViolation>,
}

/// The linear matching property holds exactly when `L` has no intermediate
/// field, i.e. when `n` is prime (or 1). Otherwise returns the unmatched pair
/// `A = K(a)`, `B = ⟨x, a, ..., a^{m-1}⟩` for `a` of degree `m`, the smallest
/// proper divisor, and `x ∉ K(a)`.
pub fn has_linear_matching_property(tower: &FieldTower, limits: &Limits) -> Result<LinearPropertyReport> {
    let n = tower.degree();
    let Some(m) = crate::ffield::divisors(n).into_iter().find(|&d| d > 1 && d < n) else {
        return Ok(LinearPropertyReport { holds: true, vacuous: n == 1, counterexample: None, violation: None });
    };
    bound_check("extension field order", tower.size(), limits.subspace_vectors)?;
    let a = (0..tower.size())
        .map(|i| tower.element_at(i))
        .find(|y| tower.degree_over_base(y) == m)
        .expect("GF(q^m) has elements of degree m");
    let ka = tower.generated_field(&a);
    let x = (0..tower.size()).map(|i| tower.element_at(i)).find(|y| !ka.contains(tower, y)).expect("K(a) ≠ L");
    let mut powers = vec![tower.one()];
    for _ in 1..m {
        powers.push(tower.mul(powers.last().unwrap(), &a));
    }
    let a_sub = Subspace::span(tower, &powers)?;
    let r = Subspace::span(tower, &powers[1..])?;
    let mut b_gens = vec![x];
    b_gens.extend_from_slice(&powers[1..]);
    let b_sub = Subspace::span(tower, &b_gens)?;
    let inst = LinearInstance::new(tower.clone(), a_sub.clone(), b_sub)?;
    let v = LinearViolation { s: a_sub, r };
    audit(verify_linear_violation(&inst, &v), || "counterexample pair does not violate the bound".into())?;
    Ok(LinearPropertyReport { holds: false, vacuous: false, counterexample: Some(inst), violation: Some(v) })
}

/// Sufficient condition: `dim(aH ∩ A) + dim(H ∩ B) ≤ [H : K]` for every
/// intermediate `K ⊊ H ⊊ L` and every nonzero `a`, scanning one `a` per
/// coset of `H^×`.
pub fn check_intermediate_field_condition(inst: &LinearInstance, limits: &Limits) -> Result<bool> {
    inst.require_one_not_in_b()?;
    let t = inst.tower();
    let n = t.degree();
    let proper: Vec<(usize, Subspace)> = t.intermediate_fields().into_iter().filter(|(d, _)| *d > 1 && *d < n).collect();
    if proper.is_empty() {
        return Ok(true);
    }
    bound_check("extension field order", t.size(), limits.subspace_vectors)?;
    for (d, h) in proper {
        let h_units: Vec<FieldElement> =
            h.vectors(t.base(), limits.subspace_vectors)?.into_iter().filter(|x| !x.is_zero()).collect();
        let hb = h.intersect(t, inst.b())?.dim();
        let mut seen = vec![false; t.size() as usize];
        for i in 1..t.size() {
            if seen[i as usize] {
                continue;
            }
            let a = t.element_at(i);
            for u in &h_units {
                seen[t.index_of(&t.mul(&a, u)) as usize] = true;
            }
            if h.scale(t, &a)?.intersect(t, inst.a())?.dim() + hb > d {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
