//! Brute-force oracles. They use only public element arithmetic and plain
//! enumeration, never the library's decision procedures.

#![allow(dead_code)]

use std::collections::BTreeSet;

use matchable::{Element, ElementSet, FieldElement, FieldTower, GroupSpec, MatchInstance, Order};

pub fn add(g: &GroupSpec, x: &Element, y: &Element) -> Element {
    g.compose(x, y).expect("valid elements")
}

pub fn naive_sum(g: &GroupSpec, s: &ElementSet, r: &ElementSet) -> ElementSet {
    s.iter().flat_map(|x| r.iter().map(move |y| add(g, x, y))).collect()
}

fn subset(v: &[Element], mask: u64) -> ElementSet {
    (0..v.len()).filter(|&i| mask >> i & 1 == 1).map(|i| v[i].clone()).collect()
}

/// Scans every nonempty `S ⊆ A`, `R ⊆ B ∪ {0}` with `S + R = S` and returns
/// whether all of them satisfy `|S| <= |B \ R|`.
pub fn naive_characterization(inst: &MatchInstance) -> bool {
    let g = inst.group();
    let a = inst.a();
    let mut cols = inst.b().to_vec();
    cols.push(g.identity());
    for sm in 1u64..(1 << a.len()) {
        let s = subset(a, sm);
        for rm in 1u64..(1 << cols.len()) {
            let r = subset(&cols, rm);
            if naive_sum(g, &s, &r) == s {
                let outside = inst.b().iter().filter(|b| !r.contains(*b)).count();
                if s.len() > outside {
                    return false;
                }
            }
        }
    }
    true
}

pub fn adjacency(inst: &MatchInstance) -> Vec<Vec<bool>> {
    let a_set = inst.a_set();
    let g = inst.group();
    inst.a().iter().map(|a| inst.b().iter().map(|b| !a_set.contains(&add(g, a, b))).collect()).collect()
}

/// Number of bijections `A -> B` along edges, by recursion over rows.
pub fn brute_force_count(inst: &MatchInstance) -> u64 {
    fn go(adj: &[Vec<bool>], row: usize, used: &mut Vec<bool>) -> u64 {
        if row == adj.len() {
            return 1;
        }
        let mut total = 0;
        for j in 0..adj.len() {
            if adj[row][j] && !used[j] {
                used[j] = true;
                total += go(adj, row + 1, used);
                used[j] = false;
            }
        }
        total
    }
    let adj = adjacency(inst);
    go(&adj, 0, &mut vec![false; adj.len()])
}

pub fn brute_force_exists(inst: &MatchInstance) -> bool {
    brute_force_count(inst) > 0
}

/// Order by repeated addition; `None` past `cap`.
pub fn naive_order(g: &GroupSpec, x: &Element, cap: u64) -> Option<u64> {
    let mut cur = x.clone();
    for k in 1..=cap {
        if cur.is_zero() {
            return Some(k);
        }
        cur = add(g, &cur, x);
    }
    None
}

/// Longest progression in `A` over every step of a finite group.
pub fn whole_group_progression(g: &GroupSpec, a: &ElementSet) -> usize {
    if a.is_empty() {
        return 0;
    }
    let mut best = 1;
    for x in g.elements().unwrap().into_iter().filter(|x| !x.is_zero()) {
        let ord = naive_order(g, &x, g.torsion_order()).unwrap() as usize;
        for start in a {
            let mut len = 1;
            let mut cur = add(g, start, &x);
            while len < ord && a.contains(&cur) {
                len += 1;
                cur = add(g, &cur, &x);
            }
            best = best.max(len);
        }
    }
    best
}

/// Every subset containing 0 and closed under addition.
pub fn subsets_that_are_subgroups(g: &GroupSpec) -> Vec<ElementSet> {
    let elems = g.elements().unwrap();
    assert!(elems.len() <= 16);
    let mut out = Vec::new();
    for mask in 0u64..(1 << elems.len()) {
        let s = subset(&elems, mask);
        if s.contains(&g.identity()) && naive_sum(g, &s, &s) == s {
            out.push(s);
        }
    }
    out
}

pub fn is_naive_sidon(g: &GroupSpec, a: &ElementSet) -> bool {
    let v: Vec<&Element> = a.iter().collect();
    let mut sums = BTreeSet::new();
    for i in 0..v.len() {
        for j in i..v.len() {
            if !sums.insert(add(g, v[i], v[j])) {
                return false;
            }
        }
    }
    true
}

pub fn order_exceeds(g: &GroupSpec, x: &Element, n: u64) -> bool {
    g.element_order(x) > Order::Finite(n)
}

// ---- GF(2) bitmask arithmetic ----

pub fn to_mask(x: &FieldElement) -> u32 {
    x.0.iter().enumerate().fold(0, |m, (i, &c)| m | (c & 1) << i)
}

pub fn from_mask(n: usize, m: u32) -> FieldElement {
    FieldElement((0..n).map(|i| m >> i & 1).collect())
}

/// Carry-less product reduced by the tower's modulus.
pub fn gf2_mul(tower: &FieldTower, x: u32, y: u32) -> u32 {
    let n = tower.degree();
    let modulus = to_mask(&FieldElement(tower.modulus().to_vec()));
    let mut acc: u64 = 0;
    for i in 0..n {
        if y >> i & 1 == 1 {
            acc ^= (x as u64) << i;
        }
    }
    for d in (n..2 * n).rev() {
        if acc >> d & 1 == 1 {
            acc ^= (modulus as u64) << (d - n);
        }
    }
    acc as u32
}

/// All GF(2)-combinations of the generators.
pub fn span_masks(gens: &[u32]) -> BTreeSet<u32> {
    let mut out = BTreeSet::from([0u32]);
    for &g in gens {
        let shifted: Vec<u32> = out.iter().map(|&v| v ^ g).collect();
        out.extend(shifted);
    }
    out
}

pub fn gf2_rank(vs: &[u32]) -> usize {
    let mut basis: Vec<u32> = Vec::new();
    for &v in vs {
        let mut v = v;
        for &b in &basis {
            v = v.min(v ^ b);
        }
        if v != 0 {
            basis.push(v);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    basis.len()
}

/// `prod_{i<k} (q^{n-i} - 1) / (q^{i+1} - 1)`.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}

/// Whether a GF(2) polynomial, as a bitmask, has a factor of degree in
/// `1..=deg/2`, by trial division.
pub fn gf2_poly_reducible(f: u32) -> bool {
    let deg = 31 - f.leading_zeros();
    for g in 2u32..(1 << (deg / 2 + 1)) {
        let dg = 31 - g.leading_zeros();
        if dg == 0 || dg > deg / 2 {
            continue;
        }
        let mut r = f;
        while r != 0 && 31 - r.leading_zeros() >= dg {
            r ^= g << (31 - r.leading_zeros() - dg);
        }
        if r == 0 {
            return true;
        }
    }
    false
}

/// Every nonzero subspace of `span(gens)` over GF(2), as masks sets, found
/// as spans of subsets of the nonzero vectors.
pub fn all_subspaces_masks(gens: &[u32]) -> BTreeSet<BTreeSet<u32>> {
    let vectors: Vec<u32> = span_masks(gens).into_iter().filter(|&v| v != 0).collect();
    let dim = gf2_rank(gens);
    let mut out = BTreeSet::new();
    fn go(vs: &[u32], start: usize, cur: &mut Vec<u32>, left: usize, out: &mut BTreeSet<BTreeSet<u32>>) {
        if !cur.is_empty() {
            out.insert(span_masks(cur));
        }
        if left == 0 {
            return;
        }
        for i in start..vs.len() {
            cur.push(vs[i]);
            go(vs, i + 1, cur, left - 1, out);
            cur.pop();
        }
    }
    go(&vectors, 0, &mut Vec::new(), dim, &mut out);
    out
}

fn set_rank(s: &BTreeSet<u32>) -> usize {
    s.len().trailing_zeros() as usize
}

/// The pair condition over GF(2) with sets of masks: every nonzero
/// `S ⊆ A`, `R ⊆ B ⊕ K` with `span(SR) = S` has `dim S <= dim B - dim(R ∩ B)`.
pub fn naive_linear_characterization(tower: &FieldTower, a: &[FieldElement], b: &[FieldElement]) -> bool {
    let am: Vec<u32> = a.iter().map(to_mask).collect();
    let bm: Vec<u32> = b.iter().map(to_mask).collect();
    let b_set = span_masks(&bm);
    let mut bk = bm.clone();
    bk.push(1);
    let dim_b = gf2_rank(&bm);
    let rs = all_subspaces_masks(&bk);
    for s in all_subspaces_masks(&am) {
        for r in &rs {
            let prods: Vec<u32> = s.iter().flat_map(|&x| r.iter().map(move |&y| gf2_mul(tower, x, y))).collect();
            if span_masks(&prods) == s {
                let rb: BTreeSet<u32> = r.intersection(&b_set).copied().collect();
                if set_rank(&s) > dim_b - set_rank(&rb) {
                    return false;
                }
            }
        }
    }
    true
}

/// Tries every tuple of vectors `x_i ∈ span(family[i])` over GF(2).
pub fn exhaustive_transversal_exists(family: &[Vec<u32>]) -> bool {
    fn go(family: &[Vec<u32>], i: usize, chosen: &mut Vec<u32>) -> bool {
        if i == family.len() {
            return true;
        }
        for v in span_masks(&family[i]) {
            if v == 0 {
                continue;
            }
            chosen.push(v);
            if gf2_rank(chosen) == chosen.len() && go(family, i + 1, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    go(family, 0, &mut Vec::new())
}

/// Every matching as a list of `(a, b)` pairs in `A` order.
pub fn all_matchings(inst: &MatchInstance) -> Vec<Vec<(Element, Element)>> {
    fn go(adj: &[Vec<bool>], row: usize, used: &mut Vec<bool>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if row == adj.len() {
            out.push(cur.clone());
            return;
        }
        for j in 0..adj.len() {
            if adj[row][j] && !used[j] {
                used[j] = true;
                cur.push(j);
                go(adj, row + 1, used, cur, out);
                cur.pop();
                used[j] = false;
            }
        }
    }
    let adj = adjacency(inst);
    let mut out = Vec::new();
    go(&adj, 0, &mut vec![false; adj.len()], &mut Vec::new(), &mut out);
    out.into_iter()
        .map(|m| m.iter().enumerate().map(|(i, &j)| (inst.a()[i].clone(), inst.b()[j].clone())).collect())
        .collect()
}
