//! Finite field towers `K = GF(q) ⊂ L = GF(q^n)`.
//!
//! `K` is either a prime field or `GF(p^m)` built from its own modulus; its
//! elements are integers in `[0, q)` whose base-`p` digits are polynomial
//! coefficients. Elements of `L` are length-`n` coefficient vectors over `K`
//! in the polynomial basis `1, t, ..., t^{n-1}` modulo a monic irreducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{bound_check, Error, Result};
use crate::group::{is_prime, Order};
use crate::linalg;
use crate::linear::Subspace;

/// Largest base field kept as explicit tables.
pub const MAX_BASE_ORDER: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseField {
    p: u32,
    degree: u32,
    q: u32,
    /// Modulus of `K` over `GF(p)`, low to high; `[0, 1]` for a prime field.
    modulus: Vec<u32>,
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
}

impl BaseField {
    pub fn prime(p: u32) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        bound_check("base field order", p as u64, MAX_BASE_ORDER as u64)?;
        let q = p as usize;
        let mut f = BaseField {
            p,
            degree: 1,
            q: p,
            modulus: vec![0, 1],
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
        };
        for a in 0..q {
            for b in 0..q {
                f.add[a * q + b] = ((a + b) % q) as u32;
                f.mul[a * q + b] = ((a * b) % q) as u32;
            }
        }
        f.fill_unary();
        Ok(f)
    }

    /// `GF(p^m)` with the lexicographically smallest monic irreducible modulus.
    pub fn extension(p: u32, m: u32) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidField("base degree must be positive".into()));
        }
        let prime = BaseField::prime(p)?;
        if m == 1 {
            return Ok(prime);
        }
        let q = (p as u64).checked_pow(m).filter(|&q| q <= MAX_BASE_ORDER as u64).ok_or(Error::BoundExceeded {
            what: "base field order",
            size: (p as u64).saturating_pow(m),
            bound: MAX_BASE_ORDER as u64,
        })? as usize;
        let modulus = smallest_irreducible(&prime, m as usize);
        let digits = |mut x: usize| -> Vec<u32> {
            (0..m)
                .map(|_| {
                    let d = (x % p as usize) as u32;
                    x /= p as usize;
                    d
                })
                .collect()
        };
        let undigits = |v: &[u32]| -> u32 { v.iter().rev().fold(0u32, |acc, &d| acc * p + d) };
        let mut f = BaseField {
            p,
            degree: m,
            q: q as u32,
            modulus: modulus.clone(),
            add: vec![0; q * q],
            mul: vec![0; q * q],
            neg: vec![0; q],
            inv: vec![0; q],
        };
        for a in 0..q {
            let da = digits(a);
            for b in 0..q {
                let db = digits(b);
                let sum: Vec<u32> = da.iter().zip(&db).map(|(&x, &y)| (x + y) % p).collect();
                f.add[a * q + b] = undigits(&sum);
                let mut prod = poly::mul(&prime, &da, &db);
                prod = poly::rem(&prime, &prod, &modulus);
                prod.resize(m as usize, 0);
                f.mul[a * q + b] = undigits(&prod);
            }
        }
        f.fill_unary();
        Ok(f)
    }

    fn fill_unary(&mut self) {
        let q = self.q as usize;
        for a in 0..q {
            self.neg[a] = (0..q as u32).find(|&b| self.add(a as u32, b) == 0).expect("additive inverse");
            if a != 0 {
                self.inv[a] = (1..q as u32).find(|&b| self.mul(a as u32, b) == 1).expect("multiplicative inverse");
            }
        }
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        self.add[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg[b as usize])
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[(a * self.q + b) as usize]
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        self.neg[a as usize]
    }

    pub fn inv(&self, a: u32) -> Result<u32> {
        if a == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(self.inv[a as usize])
        }
    }

    pub fn contains(&self, a: u32) -> bool {
        a < self.q
    }
}

/// Dense polynomials over a [`BaseField`], low to high, without trailing zeros.
pub(crate) mod poly {
    use super::BaseField;

    pub fn trim(mut a: Vec<u32>) -> Vec<u32> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub fn sub(k: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let n = a.len().max(b.len());
        trim((0..n).map(|i| k.sub(*a.get(i).unwrap_or(&0), *b.get(i).unwrap_or(&0))).collect())
    }

    pub fn mul(k: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u32; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(x, y));
            }
        }
        trim(out)
    }

    /// Quotient and remainder; `m` must be nonzero.
    pub fn divrem(k: &BaseField, a: &[u32], m: &[u32]) -> (Vec<u32>, Vec<u32>) {
        let m = trim(m.to_vec());
        assert!(!m.is_empty(), "division by the zero polynomial");
        let mut r = trim(a.to_vec());
        if r.len() < m.len() {
            return (Vec::new(), r);
        }
        let lead_inv = k.inv(*m.last().unwrap()).expect("nonzero leading coefficient");
        let mut quot = vec![0u32; r.len() - m.len() + 1];
        while r.len() >= m.len() {
            let shift = r.len() - m.len();
            let c = k.mul(*r.last().unwrap(), lead_inv);
            quot[shift] = c;
            for (i, &y) in m.iter().enumerate() {
                r[shift + i] = k.sub(r[shift + i], k.mul(c, y));
            }
            r = trim(r);
        }
        (trim(quot), r)
    }

    pub fn rem(k: &BaseField, a: &[u32], m: &[u32]) -> Vec<u32> {
        divrem(k, a, m).1
    }

    pub fn monic(k: &BaseField, a: &[u32]) -> Vec<u32> {
        match a.last() {
            None => Vec::new(),
            Some(&l) => {
                let li = k.inv(l).expect("nonzero");
                a.iter().map(|&x| k.mul(x, li)).collect()
            }
        }
    }

    pub fn gcd(k: &BaseField, a: &[u32], b: &[u32]) -> Vec<u32> {
        let mut x = trim(a.to_vec());
        let mut y = trim(b.to_vec());
        while !y.is_empty() {
            let r = rem(k, &x, &y);
            x = y;
            y = r;
        }
        monic(k, &x)
    }

    pub fn mulmod(k: &BaseField, a: &[u32], b: &[u32], m: &[u32]) -> Vec<u32> {
        rem(k, &mul(k, a, b), m)
    }

    pub fn powmod(k: &BaseField, base: &[u32], mut e: u128, m: &[u32]) -> Vec<u32> {
        let mut result = rem(k, &[1], m);
        let mut b = rem(k, base, m);
        while e > 0 {
            if e & 1 == 1 {
                result = mulmod(k, &result, &b, m);
            }
            b = mulmod(k, &b, &b, m);
            e >>= 1;
        }
        result
    }
}

fn prime_factors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub(crate) fn divisors(n: usize) -> Vec<usize> {
    (1..=n).filter(|d| n.is_multiple_of(*d)).collect()
}

/// Rabin's test: `f` of degree `n` is irreducible iff `t^{q^n} = t mod f`
/// and `gcd(f, t^{q^{n/r}} - t) = 1` for every prime `r | n`.
pub fn is_irreducible(k: &BaseField, f: &[u32]) -> bool {
    let f = poly::trim(f.to_vec());
    if f.len() < 2 {
        return false;
    }
    let n = f.len() - 1;
    if n == 1 {
        return true;
    }
    let q = k.order() as u128;
    let t = vec![0, 1];
    // frob[d] = t^{q^d} mod f
    let mut frob = vec![poly::rem(k, &t, &f)];
    for d in 1..=n {
        let prev = &frob[d - 1];
        frob.push(poly::powmod(k, prev, q, &f));
    }
    if frob[n] != t {
        return false;
    }
    prime_factors(n).into_iter().all(|r| {
        let h = poly::sub(k, &frob[n / r], &t);
        poly::gcd(k, &f, &h) == vec![1]
    })
}

/// Lexicographically smallest monic irreducible of degree `n`, comparing
/// coefficient lists from the constant term upward.
pub fn smallest_irreducible(k: &BaseField, n: usize) -> Vec<u32> {
    let q = k.order();
    let mut digits = vec![0u32; n];
    loop {
        let mut f = digits.clone();
        f.push(1);
        if is_irreducible(k, &f) {
            return f;
        }
        // the constant term is the most significant digit
        let mut i = n;
        loop {
            assert!(i > 0, "an irreducible polynomial of every degree exists");
            i -= 1;
            digits[i] += 1;
            if digits[i] < q {
                break;
            }
            digits[i] = 0;
        }
    }
}

/// Field description as read from and written to JSON.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u32,
    #[serde(default = "one")]
    pub base_degree: u32,
    pub n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u32>>,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElement(pub Vec<u32>);

impl FieldElement {
    pub fn coeffs(&self) -> &[u32] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<String> = self
            .0
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "t".into(),
                (1, c) => format!("{c}t"),
                (i, 1) => format!("t^{i}"),
                (i, c) => format!("{c}t^{i}"),
            })
            .collect();
        if terms.is_empty() {
            f.write_str("0")
        } else {
            f.write_str(&terms.join("+"))
        }
    }
}

/// Monic minimal polynomial over `K`, low to high.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct MinPoly(pub Vec<u32>);

impl MinPoly {
    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn constant_term(&self) -> u32 {
        self.0[0]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTower {
    base: BaseField,
    n: usize,
    /// Monic irreducible of degree `n` over `K`, low to high.
    modulus: Vec<u32>,
}

impl FieldTower {
    /// `GF(p^m) ⊂ GF(p^{mn})` with the smallest irreducible modulus.
    pub fn new(p: u32, base_degree: u32, n: usize) -> Result<Self> {
        FieldTower::from_spec(&FieldSpec { p, base_degree, n, modulus: None })
    }

    /// `GF(p) ⊂ GF(p^n)`.
    pub fn prime_base(p: u32, n: usize) -> Result<Self> {
        FieldTower::new(p, 1, n)
    }

    pub fn from_spec(spec: &FieldSpec) -> Result<Self> {
        if spec.n == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let base = BaseField::extension(spec.p, spec.base_degree)?;
        let q = base.order() as u128;
        let size = (0..spec.n).try_fold(1u128, |acc, _| acc.checked_mul(q));
        if size.is_none_or(|s| s > 1 << 62) {
            return Err(Error::BoundExceeded { what: "extension field order", size: u64::MAX, bound: 1 << 62 });
        }
        let modulus = match &spec.modulus {
            Some(m) => {
                if m.len() != spec.n + 1 || m[spec.n] != 1 || m.iter().any(|&c| !base.contains(c)) {
                    return Err(Error::InvalidField(format!("modulus must be monic of degree {} over K", spec.n)));
                }
                if !is_irreducible(&base, m) {
                    return Err(Error::InvalidField(format!("modulus {m:?} is reducible")));
                }
                m.clone()
            }
            None => smallest_irreducible(&base, spec.n),
        };
        Ok(FieldTower { base, n: spec.n, modulus })
    }

    pub fn spec(&self) -> FieldSpec {
        FieldSpec {
            p: self.base.characteristic(),
            base_degree: self.base.degree(),
            n: self.n,
            modulus: Some(self.modulus.clone()),
        }
    }

    pub fn base(&self) -> &BaseField {
        &self.base
    }

    /// `[L : K]`.
    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn q(&self) -> u64 {
        self.base.order() as u64
    }

    /// `|L| = q^n`.
    pub fn size(&self) -> u64 {
        self.q().pow(self.n as u32)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement(vec![0; self.n])
    }

    pub fn one(&self) -> FieldElement {
        self.from_base(1)
    }

    /// Embeds `c ∈ K`.
    pub fn from_base(&self, c: u32) -> FieldElement {
        let mut v = vec![0; self.n];
        v[0] = c;
        FieldElement(v)
    }

    /// The class of `t`, a generator of `L` over `K`.
    pub fn generator(&self) -> FieldElement {
        if self.n == 1 {
            // t reduces to minus the constant term of the linear modulus
            return self.from_base(self.base.neg(self.modulus[0]));
        }
        let mut v = vec![0; self.n];
        v[1] = 1;
        FieldElement(v)
    }

    pub fn element(&self, coeffs: Vec<u32>) -> Result<FieldElement> {
        self.check(&coeffs)?;
        Ok(FieldElement(coeffs))
    }

    pub(crate) fn check(&self, coeffs: &[u32]) -> Result<()> {
        if coeffs.len() != self.n {
            return Err(Error::TowerMismatch { expected: self.n, got: coeffs.len() });
        }
        if let Some(c) = coeffs.iter().find(|&&c| !self.base.contains(c)) {
            return Err(Error::InvalidField(format!("coefficient {c} outside K")));
        }
        Ok(())
    }

    /// Element with index `i` in base-`q` digits, constant term first.
    pub fn element_at(&self, mut i: u64) -> FieldElement {
        let q = self.q();
        FieldElement(
            (0..self.n)
                .map(|_| {
                    let d = (i % q) as u32;
                    i /= q;
                    d
                })
                .collect(),
        )
    }

    pub fn index_of(&self, x: &FieldElement) -> u64 {
        x.0.iter().rev().fold(0u64, |acc, &d| acc * self.q() + d as u64)
    }

    /// All elements of `L`, refusing fields above `bound` elements.
    pub fn elements(&self, bound: u64) -> Result<impl Iterator<Item = FieldElement> + '_> {
        bound_check("extension field order", self.size(), bound)?;
        Ok((0..self.size()).map(move |i| self.element_at(i)))
    }

    pub fn add(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement(x.0.iter().zip(&y.0).map(|(&a, &b)| self.base.add(a, b)).collect())
    }

    pub fn sub(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        FieldElement(x.0.iter().zip(&y.0).map(|(&a, &b)| self.base.sub(a, b)).collect())
    }

    pub fn neg(&self, x: &FieldElement) -> FieldElement {
        FieldElement(x.0.iter().map(|&a| self.base.neg(a)).collect())
    }

    pub fn scale_base(&self, c: u32, x: &FieldElement) -> FieldElement {
        FieldElement(x.0.iter().map(|&a| self.base.mul(c, a)).collect())
    }

    fn pad(&self, mut v: Vec<u32>) -> FieldElement {
        v.resize(self.n, 0);
        FieldElement(v)
    }

    pub fn mul(&self, x: &FieldElement, y: &FieldElement) -> FieldElement {
        let prod = poly::mul(&self.base, &x.0, &y.0);
        self.pad(poly::rem(&self.base, &prod, &self.modulus))
    }

    pub fn pow(&self, x: &FieldElement, e: u128) -> FieldElement {
        self.pad(poly::powmod(&self.base, &poly::trim(x.0.clone()), e, &self.modulus))
    }

    pub fn inv(&self, x: &FieldElement) -> Result<FieldElement> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.pow(x, self.size() as u128 - 2))
    }

    /// `x -> x^q`, the generator of `Gal(L/K)`.
    pub fn frobenius(&self, x: &FieldElement) -> FieldElement {
        self.pow(x, self.q() as u128)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, x: &FieldElement) -> Result<u64> {
        if x.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let group = self.size() - 1;
        let mut order = group;
        for r in prime_factors(group as usize) {
            while order.is_multiple_of(r as u64) && self.pow(x, (order / r as u64) as u128) == self.one() {
                order /= r as u64;
            }
        }
        Ok(order)
    }

    /// Whether `x` lies in `K`.
    pub fn in_base(&self, x: &FieldElement) -> bool {
        x.0[1..].iter().all(|&c| c == 0)
    }

    /// The Frobenius orbit `x, x^q, x^{q^2}, ...` up to its first repeat.
    pub fn conjugates(&self, x: &FieldElement) -> Vec<FieldElement> {
        let mut orbit = vec![x.clone()];
        loop {
            let next = self.frobenius(orbit.last().unwrap());
            if &next == x {
                return orbit;
            }
            orbit.push(next);
        }
    }

    /// `[K(x) : K]`, the size of the Frobenius orbit of `x`.
    pub fn degree_over_base(&self, x: &FieldElement) -> usize {
        self.conjugates(x).len()
    }

    /// `prod (t - x^{q^i})` over the orbit, with coefficients checked to lie in `K`.
    pub fn minimal_polynomial(&self, x: &FieldElement) -> Result<MinPoly> {
        // polynomial in t with coefficients in L, low to high
        let mut acc: Vec<FieldElement> = vec![self.one()];
        for c in self.conjugates(x) {
            let mut next = vec![self.zero(); acc.len() + 1];
            for (i, a) in acc.iter().enumerate() {
                next[i + 1] = self.add(&next[i + 1], a);
                next[i] = self.sub(&next[i], &self.mul(a, &c));
            }
            acc = next;
        }
        let mut coeffs = Vec::with_capacity(acc.len());
        for a in &acc {
            if !self.in_base(a) {
                return Err(Error::Audit(format!("minimal polynomial coefficient {a} outside K")));
            }
            coeffs.push(a.0[0]);
        }
        Ok(MinPoly(coeffs))
    }

    /// Evaluates a polynomial over `K` at `x`.
    pub fn eval(&self, coeffs: &[u32], x: &FieldElement) -> FieldElement {
        coeffs
            .iter()
            .rev()
            .fold(self.zero(), |acc, &c| self.add(&self.mul(&acc, x), &self.from_base(c)))
    }

    /// Matrix of `x -> x^{q^d} - x` on the polynomial basis, one row per
    /// basis element.
    fn frobenius_minus_identity(&self, d: usize) -> Vec<Vec<u32>> {
        (0..self.n)
            .map(|i| {
                let mut e = vec![0u32; self.n];
                e[i] = 1;
                let e = FieldElement(e);
                let mut img = e.clone();
                for _ in 0..d {
                    img = self.frobenius(&img);
                }
                self.sub(&img, &e).0
            })
            .collect()
    }

    /// Fixed field of `x -> x^{q^d}`, i.e. `GF(q^d)`, as a `K`-subspace.
    pub fn subfield(&self, d: usize) -> Result<Subspace> {
        if d == 0 || !self.n.is_multiple_of(d) {
            return Err(Error::Precondition(format!("{d} does not divide {}", self.n)));
        }
        // x = sum c_i e_i is fixed iff sum c_i (phi^d - 1)(e_i) = 0
        let rows = self.frobenius_minus_identity(d);
        let kernel = linalg::left_kernel(&self.base, &rows, self.n);
        Ok(Subspace::from_rows(&self.base, self.n, kernel))
    }

    /// The subfields `GF(q^d)` for every `d | n`, in increasing `d`.
    pub fn intermediate_fields(&self) -> Vec<(usize, Subspace)> {
        divisors(self.n).into_iter().map(|d| (d, self.subfield(d).expect("d divides n"))).collect()
    }

    /// Smallest degree of an intermediate field `K ⊊ F ⊆ L`.
    pub fn n0(&self) -> Order {
        match divisors(self.n).into_iter().find(|&d| d > 1) {
            Some(d) => Order::Finite(d as u64),
            None => Order::Infinite,
        }
    }

    /// `K(x)` as the span of `1, x, ..., x^{d-1}`.
    pub fn generated_field(&self, x: &FieldElement) -> Subspace {
        let d = self.degree_over_base(x);
        let mut powers = vec![self.one()];
        for _ in 1..d {
            powers.push(self.mul(powers.last().unwrap(), x));
        }
        Subspace::span(self, &powers).expect("powers lie in L")
    }
}
