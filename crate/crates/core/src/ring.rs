//! Variables, monomials, and polynomials over GF(2).
//!
//! Coefficients live in GF(2), so a polynomial is exactly its set of
//! monomials: every term is monic, addition is symmetric difference, and
//! `p + p = 0`. All values are immutable after construction.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};

/// Index of an interned variable. Ids are dense and start at 0.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(u32);

impl VarId {
    pub fn new(index: u32) -> Self {
        VarId(index)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Interns variable names to dense [`VarId`]s.
///
/// Lookups take `&self` and a shared registry may be read from many threads;
/// interning takes `&mut self`, so writes are serialized by construction.
#[derive(Debug, Default, Clone)]
pub struct VariableRegistry {
    names: Vec<String>,
    ids: HashMap<String, u32>,
}

impl VariableRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of interned variables.
    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    /// Returns the id for `name`, interning it first if it is new.
    /// Interning the same name twice returns the same id.
    pub fn intern(&mut self, name: &str) -> VarId {
        if let Some(&id) = self.ids.get(name) {
            return VarId(id);
        }
        let id = u32::try_from(self.names.len()).expect("registry overflow");
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), id);
        VarId(id)
    }

    pub fn lookup(&self, name: &str) -> Option<VarId> {
        self.ids.get(name).map(|&id| VarId(id))
    }

    /// `None` if `id` was never interned in this registry.
    pub fn name(&self, id: VarId) -> Option<&str> {
        self.names.get(id.index()).map(String::as_str)
    }

    /// All ids, in interning order.
    pub fn vars(&self) -> impl Iterator<Item = VarId> {
        (0..self.names.len() as u32).map(VarId)
    }
}

/// A monomial: finitely many variables raised to positive exponents.
///
/// Factors are kept sorted by [`VarId`] with exponents at least 1; the empty
/// product is the monomial 1. Degrees saturate at `u64::MAX`.
///
/// `Ord` is the fixed output order used for canonical printing and for term
/// storage inside [`Polynomial`]: total degree first, then exponent vectors
/// compared variable-by-variable from the lowest id, where the larger
/// exponent at the first differing variable sorts greater. It is a total
/// order but deliberately not one of the configurable term orders in
/// `crate::order`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    factors: Vec<(VarId, u64)>,
}

impl Monomial {
    /// The monomial 1.
    pub fn one() -> Self {
        Monomial { factors: Vec::new() }
    }

    pub fn var(v: VarId) -> Self {
        Monomial { factors: vec![(v, 1)] }
    }

    /// Builds a monomial from arbitrary `(variable, exponent)` pairs:
    /// duplicates are merged by adding exponents and zero exponents are
    /// dropped.
    pub fn from_factors(factors: impl IntoIterator<Item = (VarId, u64)>) -> Self {
        let mut merged: Vec<(VarId, u64)> = Vec::new();
        for (v, e) in factors {
            if e == 0 {
                continue;
            }
            merged.push((v, e));
        }
        merged.sort_by_key(|&(v, _)| v);
        let mut out: Vec<(VarId, u64)> = Vec::with_capacity(merged.len());
        for (v, e) in merged {
            match out.last_mut() {
                Some(last) if last.0 == v => last.1 = last.1.saturating_add(e),
                _ => out.push((v, e)),
            }
        }
        Monomial { factors: out }
    }

    /// Sorted `(variable, exponent)` pairs; exponents are all positive.
    pub fn factors(&self) -> &[(VarId, u64)] {
        &self.factors
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    /// Total degree (sum of exponents), saturating at `u64::MAX`.
    pub fn degree(&self) -> u64 {
        self.factors
            .iter()
            .fold(0u64, |acc, &(_, e)| acc.saturating_add(e))
    }

    /// Exponent of `v`, zero when absent.
    pub fn exponent(&self, v: VarId) -> u64 {
        self.factors
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.factors[i].1)
            .unwrap_or(0)
    }

    pub fn contains_var(&self, v: VarId) -> bool {
        self.exponent(v) > 0
    }

    pub fn support(&self) -> impl Iterator<Item = VarId> + '_ {
        self.factors.iter().map(|&(v, _)| v)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        out.push((va, ea));
                        i += 1;
                    } else if vb < va {
                        out.push((vb, eb));
                        j += 1;
                    } else {
                        out.push((va, ea.saturating_add(eb)));
                        i += 1;
                        j += 1;
                    }
                }
                (Some(&f), None) => {
                    out.push(f);
                    i += 1;
                }
                (None, Some(&f)) => {
                    out.push(f);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial { factors: out }
    }

    /// Whether `self` divides `other` (exponent-wise `<=`).
    pub fn divides(&self, other: &Self) -> bool {
        self.factors
            .iter()
            .all(|&(v, e)| other.exponent(v) >= e)
    }

    /// Exact quotient `self / divisor`; `None` when `divisor` does not
    /// divide `self`.
    pub fn checked_div(&self, divisor: &Self) -> Option<Self> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut j = 0;
        for &(v, e) in &self.factors {
            let mut rem = e;
            if j < divisor.factors.len() && divisor.factors[j].0 == v {
                let d = divisor.factors[j].1;
                if d > e {
                    return None;
                }
                rem = e - d;
                j += 1;
            }
            if rem > 0 {
                out.push((v, rem));
            }
        }
        if j < divisor.factors.len() {
            return None;
        }
        Some(Monomial { factors: out })
    }

    pub fn lcm(&self, other: &Self) -> Self {
        let mut out = Vec::with_capacity(self.factors.len() + other.factors.len());
        let (mut i, mut j) = (0, 0);
        while i < self.factors.len() || j < other.factors.len() {
            match (self.factors.get(i), other.factors.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        out.push((va, ea));
                        i += 1;
                    } else if vb < va {
                        out.push((vb, eb));
                        j += 1;
                    } else {
                        out.push((va, ea.max(eb)));
                        i += 1;
                        j += 1;
                    }
                }
                (Some(&f), None) => {
                    out.push(f);
                    i += 1;
                }
                (None, Some(&f)) => {
                    out.push(f);
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        Monomial { factors: out }
    }

    pub fn pow(&self, k: u64) -> Self {
        if k == 0 {
            return Monomial::one();
        }
        Monomial {
            factors: self
                .factors
                .iter()
                .map(|&(v, e)| (v, e.saturating_mul(k)))
                .collect(),
        }
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        // Equal degree: first differing variable (lowest id) decides, larger
        // exponent sorts greater.
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.factors.get(i), other.factors.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    if ea != eb {
                        return ea.cmp(&eb);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A GF(2) polynomial: a finite set of monomials.
///
/// The zero polynomial is the empty set. Terms iterate in the canonical
/// [`Monomial`] order (ascending), independent of any configured term order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Polynomial {
    terms: BTreeSet<Monomial>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn one() -> Self {
        Polynomial::from_monomial(Monomial::one())
    }

    pub fn from_monomial(m: Monomial) -> Self {
        let mut terms = BTreeSet::new();
        terms.insert(m);
        Polynomial { terms }
    }

    /// Builds a polynomial by GF(2)-summing the given terms: a monomial
    /// appearing an even number of times cancels out.
    pub fn from_terms(terms: impl IntoIterator<Item = Monomial>) -> Self {
        let mut p = Polynomial::zero();
        for t in terms {
            p.toggle(t);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending canonical order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = &Monomial> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.terms.contains(m)
    }

    pub(crate) fn toggle(&mut self, m: Monomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    /// GF(2) sum: symmetric difference of the term sets.
    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for t in &other.terms {
            out.toggle(t.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Polynomial::zero();
        for a in &self.terms {
            for b in &other.terms {
                out.toggle(a.mul(b));
            }
        }
        out
    }

    pub fn mul_mono(&self, m: &Monomial) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|t| t.mul(m)).collect(),
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u64> {
        self.terms.iter().map(Monomial::degree).max()
    }
}
