//! `K`-subspaces of `L` in canonical reduced row echelon form.

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{bound_check, Error, Result};
use crate::ffield::{FieldElement, FieldTower};
use crate::linalg;

/// A `K`-subspace of `L`. Rows are `L`-coordinates in reduced row echelon
/// form, so two subspaces are equal exactly when their matrices are.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

/// A linear form on a designated subspace, written in that subspace's row
/// coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Functional(pub Vec<u32>);

impl Subspace {
    pub(crate) fn from_rows(k: &crate::ffield::BaseField, ambient: usize, rows: Vec<Vec<u32>>) -> Self {
        let (rows, pivots) = linalg::rref(k, rows, ambient);
        Subspace { ambient, rows, pivots }
    }

    pub fn zero(tower: &FieldTower) -> Self {
        Subspace { ambient: tower.degree(), rows: Vec::new(), pivots: Vec::new() }
    }

    /// `L` itself.
    pub fn full(tower: &FieldTower) -> Self {
        let n = tower.degree();
        let rows = (0..n).map(|i| (0..n).map(|j| u32::from(i == j)).collect()).collect();
        Subspace { ambient: n, rows, pivots: (0..n).collect() }
    }

    pub fn span(tower: &FieldTower, vectors: &[FieldElement]) -> Result<Self> {
        for v in vectors {
            tower.check(&v.0)?;
        }
        Ok(Subspace::from_rows(tower.base(), tower.degree(), vectors.iter().map(|v| v.0.clone()).collect()))
    }

    /// Canonicalizes raw coefficient arrays, validating them against the tower.
    pub fn from_coeffs(tower: &FieldTower, vectors: &[Vec<u32>]) -> Result<Self> {
        let v: Vec<FieldElement> = vectors.iter().map(|c| tower.element(c.clone())).collect::<Result<_>>()?;
        Subspace::span(tower, &v)
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn basis(&self) -> Vec<FieldElement> {
        self.rows.iter().cloned().map(FieldElement).collect()
    }

    fn same_tower(&self, tower: &FieldTower) -> Result<()> {
        if self.ambient == tower.degree() {
            Ok(())
        } else {
            Err(Error::TowerMismatch { expected: tower.degree(), got: self.ambient })
        }
    }

    /// Coordinates of `x` in the row basis, or `None` when `x` is outside.
    pub fn coords(&self, tower: &FieldTower, x: &FieldElement) -> Option<Vec<u32>> {
        let c: Vec<u32> = self.pivots.iter().map(|&p| x.0[p]).collect();
        let back = linalg::combine(tower.base(), &c, &self.rows, self.ambient);
        (back == x.0).then_some(c)
    }

    pub fn contains(&self, tower: &FieldTower, x: &FieldElement) -> bool {
        x.0.len() == self.ambient && self.coords(tower, x).is_some()
    }

    pub fn is_subspace_of(&self, tower: &FieldTower, other: &Subspace) -> bool {
        self.basis().iter().all(|v| other.contains(tower, v))
    }

    pub fn sum(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        self.same_tower(tower)?;
        other.same_tower(tower)?;
        let rows = self.rows.iter().chain(&other.rows).cloned().collect();
        Ok(Subspace::from_rows(tower.base(), self.ambient, rows))
    }

    /// Zassenhaus: reduce `[S | S ; T | 0]`; rows with zero left half span
    /// `S ∩ T` in their right half.
    pub fn intersect(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        self.same_tower(tower)?;
        other.same_tower(tower)?;
        let n = self.ambient;
        let k = tower.base();
        let mut rows: Vec<Vec<u32>> = self.rows.iter().map(|r| [r.clone(), r.clone()].concat()).collect();
        rows.extend(other.rows.iter().map(|r| [r.clone(), vec![0; n]].concat()));
        let (red, _) = linalg::rref(k, rows, 2 * n);
        let meet: Vec<Vec<u32>> =
            red.into_iter().filter(|r| r[..n].iter().all(|&x| x == 0)).map(|r| r[n..].to_vec()).collect();
        let meet = Subspace::from_rows(k, n, meet);
        let join = self.sum(tower, other)?;
        if join.dim() + meet.dim() != self.dim() + other.dim() {
            return Err(Error::Audit("dimension formula failed for sum and intersection".into()));
        }
        Ok(meet)
    }

    /// `aS`.
    pub fn scale(&self, tower: &FieldTower, a: &FieldElement) -> Result<Subspace> {
        self.same_tower(tower)?;
        if a.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let v: Vec<FieldElement> = self.basis().iter().map(|s| tower.mul(a, s)).collect();
        Subspace::span(tower, &v)
    }

    /// `⟨SR⟩`, the span of all products `sr`.
    pub fn minkowski_span(&self, tower: &FieldTower, other: &Subspace) -> Result<Subspace> {
        self.same_tower(tower)?;
        other.same_tower(tower)?;
        let mut v = Vec::with_capacity(self.dim() * other.dim());
        for s in self.basis() {
            for r in other.basis() {
                v.push(tower.mul(&s, &r));
            }
        }
        Subspace::span(tower, &v)
    }

    /// `B ⊕ K`; requires `1 ∉ B`.
    pub fn direct_sum_with_base(&self, tower: &FieldTower) -> Result<Subspace> {
        if self.contains(tower, &tower.one()) {
            return Err(Error::Precondition("1 lies in the subspace, so the sum with K is not direct".into()));
        }
        let mut v = self.basis();
        v.push(tower.one());
        Subspace::span(tower, &v)
    }

    /// Basis of `W^⊥` inside the dual of `within`, in `within`'s row
    /// coordinates.
    pub fn annihilator(&self, tower: &FieldTower, within: &Subspace) -> Result<Vec<Functional>> {
        let coords: Vec<Vec<u32>> = self
            .basis()
            .iter()
            .map(|w| within.coords(tower, w).ok_or(Error::NotContained("W is not inside the ambient subspace")))
            .collect::<Result<_>>()?;
        let ker = linalg::right_kernel(tower.base(), &coords, within.dim());
        debug_assert_eq!(ker.len(), within.dim() - self.dim());
        Ok(ker.into_iter().map(Functional).collect())
    }

    /// `dim B - dim U` for `U ⊆ B`.
    pub fn quotient_dim(&self, tower: &FieldTower, sub: &Subspace) -> Result<usize> {
        if !sub.is_subspace_of(tower, self) {
            return Err(Error::NotContained("quotient by a non-subspace"));
        }
        Ok(self.dim() - sub.dim())
    }

    /// Every vector of the subspace, refusing more than `bound` of them.
    pub fn vectors(&self, k: &crate::ffield::BaseField, bound: u64) -> Result<Vec<FieldElement>> {
        let q = k.order() as u64;
        let count = q.checked_pow(self.dim() as u32).unwrap_or(u64::MAX);
        bound_check("subspace size", count, bound)?;
        let mut out = Vec::with_capacity(count as usize);
        let mut c = vec![0u32; self.dim()];
        for _ in 0..count {
            out.push(FieldElement(linalg::combine(k, &c, &self.rows, self.ambient)));
            for d in c.iter_mut() {
                *d += 1;
                if *d < q as u32 {
                    break;
                }
                *d = 0;
            }
        }
        Ok(out)
    }

    /// One representative per line: the nonzero vectors whose leading
    /// row coordinate is 1.
    pub fn projective_points(&self, k: &crate::ffield::BaseField, bound: u64) -> Result<Vec<FieldElement>> {
        Ok(self
            .vectors(k, bound)?
            .into_iter()
            .filter(|v| self.pivots.iter().map(|&p| v.0[p]).find(|&c| c != 0) == Some(1))
            .collect())
    }

    /// All subspaces of `self` (including zero and itself), in order of
    /// dimension and then reduced-echelon pattern.
    pub fn all_subspaces(&self, tower: &FieldTower, bound: u64) -> Result<Vec<Subspace>> {
        let k = tower.base();
        let q = k.order() as u64;
        let d = self.dim();
        let mut out = Vec::new();
        for r in 0..=d {
            for pivots in combinations(d, r) {
                // free entries sit right of each pivot, outside pivot columns
                let free: Vec<(usize, usize)> = (0..r)
                    .flat_map(|i| ((pivots[i] + 1)..d).filter(|c| !pivots.contains(c)).map(move |c| (i, c)))
                    .collect();
                let combos = q.checked_pow(free.len() as u32).unwrap_or(u64::MAX);
                bound_check("subspace enumeration", out.len() as u64 + combos, bound)?;
                let mut digits = vec![0u32; free.len()];
                for _ in 0..combos {
                    let mut m = vec![vec![0u32; d]; r];
                    for (i, &p) in pivots.iter().enumerate() {
                        m[i][p] = 1;
                    }
                    for (&(i, c), &x) in free.iter().zip(&digits) {
                        m[i][c] = x;
                    }
                    let rows = m.iter().map(|c| linalg::combine(k, c, &self.rows, self.ambient)).collect();
                    out.push(Subspace::from_rows(k, self.ambient, rows));
                    for x in digits.iter_mut() {
                        *x += 1;
                        if *x < q as u32 {
                            break;
                        }
                        *x = 0;
                    }
                }
            }
        }
        Ok(out)
    }
}

pub(crate) fn combinations(n: usize, r: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, r: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == r {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, r, &mut Vec::new(), &mut out);
    out
}


impl Functional {
    /// `f(x)` for `x ∈ within`.
    pub fn eval(&self, tower: &FieldTower, within: &Subspace, x: &FieldElement) -> Result<u32> {
        let c = within.coords(tower, x).ok_or(Error::NotContained("argument outside the functional's domain"))?;
        Ok(linalg::dot(tower.base(), &self.0, &c))
    }
}

/// The basis `b_1, ..., b_m` of `within` with `f_i(b_j) = δ_ij`.
pub fn dual_basis(tower: &FieldTower, functionals: &[Functional], within: &Subspace) -> Result<Vec<FieldElement>> {
    let m = within.dim();
    if functionals.len() != m || functionals.iter().any(|f| f.0.len() != m) {
        return Err(Error::Precondition(format!("need {m} functionals of length {m}")));
    }
    let f: Vec<Vec<u32>> = functionals.iter().map(|f| f.0.clone()).collect();
    // F C = I, so the columns of C are the coordinates of the b_j
    let c = linalg::inverse(tower.base(), &f).ok_or(Error::Singular)?;
    Ok((0..m)
        .map(|j| {
            let col: Vec<u32> = (0..m).map(|i| c[i][j]).collect();
            FieldElement(linalg::combine(tower.base(), &col, within.rows(), within.ambient_dim()))
        })
        .collect())
}
