//! Admissible monomial orders and the induced polynomial order.
//!
//! Four orders are provided: `lex`, `deglex`, `degrevlex` (all driven by a
//! variable rank permutation) and `weighted`, which compares weighted degrees
//! `sum(exp(v) * sqrt(p_k(v)))` where each variable carries a distinct prime
//! index `k` and `p_k` is the k-th prime. Distinct square roots of primes are
//! linearly independent over the rationals, so weighted degrees of distinct
//! exponent vectors never collide and the comparison is decidable: a float
//! prefilter handles clearly separated values and an integer interval
//! computation at doubling precision settles the rest exactly.

use std::cmp::Ordering;
use std::fmt;
use std::sync::Mutex;
use std::sync::OnceLock;

use num_bigint::{BigInt, BigUint};
use thiserror::Error;

use crate::ring::{Monomial, Polynomial, VarId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("variable id {0} has no rank in this order")]
    UnrankedVariable(u32),
    #[error("variable id {0} has no weight in this order")]
    UnweightedVariable(u32),
    #[error("variable ranking is not a permutation: {0}")]
    BadPermutation(String),
    #[error("invalid weight assignment: {0}")]
    BadWeights(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OrderKind {
    Lex,
    DegLex,
    DegRevLex,
    Weighted,
}

/// An admissible monomial order.
///
/// For the ranked kinds the order is defined by a permutation of variables
/// from least to greatest significance. For `Weighted` each variable carries
/// a distinct positive prime index; ranks play no role there.
#[derive(Debug, Clone)]
pub struct MonomialOrder {
    kind: OrderKind,
    /// `rank[id]` = position in the least-to-greatest permutation.
    rank: Vec<u32>,
    /// `weight_index[id]` = 1-based prime index, 0 when unassigned.
    weight_index: Vec<u64>,
}

impl MonomialOrder {
    /// Builds a ranked order (`Lex`, `DegLex`, or `DegRevLex`) from the
    /// variables listed least significant first. The list must be a
    /// permutation of ids `0..len`.
    pub fn new_ranked(kind: OrderKind, vars_ascending: &[VarId]) -> Result<Self, OrderError> {
        if kind == OrderKind::Weighted {
            return Err(OrderError::BadWeights(
                "weighted orders are built from a weight assignment, not a rank list".into(),
            ));
        }
        let n = vars_ascending.len();
        let mut rank = vec![u32::MAX; n];
        for (pos, v) in vars_ascending.iter().enumerate() {
            let slot = rank.get_mut(v.index()).ok_or_else(|| {
                OrderError::BadPermutation(format!(
                    "variable id {} out of range for a {}-variable order",
                    v.index(),
                    n
                ))
            })?;
            if *slot != u32::MAX {
                return Err(OrderError::BadPermutation(format!(
                    "variable id {} listed twice",
                    v.index()
                )));
            }
            *slot = pos as u32;
        }
        Ok(MonomialOrder {
            kind,
            rank,
            weight_index: Vec::new(),
        })
    }

    pub fn lex(vars_ascending: &[VarId]) -> Result<Self, OrderError> {
        Self::new_ranked(OrderKind::Lex, vars_ascending)
    }

    pub fn deglex(vars_ascending: &[VarId]) -> Result<Self, OrderError> {
        Self::new_ranked(OrderKind::DegLex, vars_ascending)
    }

    pub fn degrevlex(vars_ascending: &[VarId]) -> Result<Self, OrderError> {
        Self::new_ranked(OrderKind::DegRevLex, vars_ascending)
    }

    /// Builds a weighted order from `(variable, prime index)` pairs. Indices
    /// are 1-based (`1` means weight `sqrt(2)`), must be positive, and must
    /// be pairwise distinct so that the weight map is injective.
    pub fn weighted(assignment: &[(VarId, u64)]) -> Result<Self, OrderError> {
        let max_id = assignment.iter().map(|(v, _)| v.index()).max();
        let mut weight_index = vec![0u64; max_id.map_or(0, |m| m + 1)];
        let mut seen = std::collections::HashSet::new();
        for &(v, k) in assignment {
            if k == 0 {
                return Err(OrderError::BadWeights(format!(
                    "variable id {} has prime index 0; indices are 1-based",
                    v.index()
                )));
            }
            if weight_index[v.index()] != 0 {
                return Err(OrderError::BadWeights(format!(
                    "variable id {} assigned twice",
                    v.index()
                )));
            }
            if !seen.insert(k) {
                return Err(OrderError::BadWeights(format!(
                    "prime index {} assigned to two variables",
                    k
                )));
            }
            weight_index[v.index()] = k;
        }
        Ok(MonomialOrder {
            kind: OrderKind::Weighted,
            rank: Vec::new(),
            weight_index,
        })
    }

    /// The order used when none is configured: ranks follow interning order.
    pub fn default_ranked(kind: OrderKind, n_vars: usize) -> Result<Self, OrderError> {
        let vars: Vec<VarId> = (0..n_vars as u32).map(VarId::new).collect();
        Self::new_ranked(kind, &vars)
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            OrderKind::Lex => "lex",
            OrderKind::DegLex => "deglex",
            OrderKind::DegRevLex => "degrevlex",
            OrderKind::Weighted => "weighted",
        }
    }

    pub fn rank_of(&self, v: VarId) -> Option<u32> {
        self.rank.get(v.index()).copied().filter(|&r| r != u32::MAX)
    }

    pub fn weight_index_of(&self, v: VarId) -> Option<u64> {
        self.weight_index.get(v.index()).copied().filter(|&k| k != 0)
    }

    /// Checks that every variable of `m` is covered by this order.
    pub fn covers(&self, m: &Monomial) -> Result<(), OrderError> {
        for v in m.support() {
            match self.kind {
                OrderKind::Weighted => {
                    if self.weight_index_of(v).is_none() {
                        return Err(OrderError::UnweightedVariable(v.index() as u32));
                    }
                }
                _ => {
                    if self.rank_of(v).is_none() {
                        return Err(OrderError::UnrankedVariable(v.index() as u32));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn covers_poly(&self, p: &Polynomial) -> Result<(), OrderError> {
        for t in p.terms() {
            self.covers(t)?;
        }
        Ok(())
    }

    /// Total comparison of two monomials; errors if either contains a
    /// variable this order does not cover.
    pub fn try_cmp(&self, a: &Monomial, b: &Monomial) -> Result<Ordering, OrderError> {
        self.covers(a)?;
        self.covers(b)?;
        Ok(self.compare(a, b))
    }

    /// Total comparison of two monomials.
    ///
    /// Panics if a variable is not covered; use [`Self::try_cmp`] at trust
    /// boundaries and validate inputs once before hot loops.
    pub fn compare(&self, a: &Monomial, b: &Monomial) -> Ordering {
        match self.kind {
            OrderKind::Lex => self.lex_cmp(a, b),
            OrderKind::DegLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| self.lex_cmp(a, b)),
            OrderKind::DegRevLex => a
                .degree()
                .cmp(&b.degree())
                .then_with(|| self.revlex_tiebreak(a, b)),
            OrderKind::Weighted => self.weighted_cmp(a, b),
        }
    }

    /// `(rank, exponent)` pairs sorted by rank.
    fn ranked(&self, m: &Monomial, descending: bool) -> Vec<(u32, u64)> {
        let mut v: Vec<(u32, u64)> = m
            .factors()
            .iter()
            .map(|&(var, e)| {
                let r = self.rank_of(var).unwrap_or_else(|| {
                    panic!("variable id {} has no rank in this order", var.index())
                });
                (r, e)
            })
            .collect();
        if descending {
            v.sort_unstable_by(|a, b| b.0.cmp(&a.0));
        } else {
            v.sort_unstable_by_key(|&(r, _)| r);
        }
        v
    }

    fn lex_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let ra = self.ranked(a, true);
        let rb = self.ranked(b, true);
        let (mut i, mut j) = (0, 0);
        loop {
            match (ra.get(i), rb.get(j)) {
                (None, None) => return Ordering::Equal,
                // A positive exponent remains where the other side is
                // exhausted, so that side is greater.
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(r1, e1)), Some(&(r2, e2))) => {
                    if r1 > r2 {
                        return Ordering::Greater;
                    }
                    if r2 > r1 {
                        return Ordering::Less;
                    }
                    if e1 != e2 {
                        return e1.cmp(&e2);
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    /// Reverse-lex tiebreak for equal total degree: at the least significant
    /// variable where the exponents differ, the larger exponent loses.
    fn revlex_tiebreak(&self, a: &Monomial, b: &Monomial) -> Ordering {
        let ra = self.ranked(a, false);
        let rb = self.ranked(b, false);
        let (mut i, mut j) = (0, 0);
        loop {
            match (ra.get(i), rb.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Less,
                (None, Some(_)) => return Ordering::Greater,
                (Some(&(r1, e1)), Some(&(r2, e2))) => {
                    if r1 < r2 {
                        return Ordering::Less;
                    }
                    if r2 < r1 {
                        return Ordering::Greater;
                    }
                    if e1 != e2 {
                        return if e1 > e2 { Ordering::Less } else { Ordering::Greater };
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
    }

    fn weighted_cmp(&self, a: &Monomial, b: &Monomial) -> Ordering {
        // Per-prime-index exponent differences; injectivity of the weight
        // assignment means an all-zero difference vector is exact equality.
        let mut diffs: Vec<(u64, i128)> = Vec::new();
        let mut push = |k: u64, d: i128| {
            if d != 0 {
                diffs.push((k, d));
            }
        };
        let (fa, fb) = (a.factors(), b.factors());
        let (mut i, mut j) = (0, 0);
        while i < fa.len() || j < fb.len() {
            match (fa.get(i), fb.get(j)) {
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        push(self.weight_key(va), ea as i128);
                        i += 1;
                    } else if vb < va {
                        push(self.weight_key(vb), -(eb as i128));
                        j += 1;
                    } else {
                        push(self.weight_key(va), ea as i128 - eb as i128);
                        i += 1;
                        j += 1;
                    }
                }
                (Some(&(va, ea)), None) => {
                    push(self.weight_key(va), ea as i128);
                    i += 1;
                }
                (None, Some(&(vb, eb))) => {
                    push(self.weight_key(vb), -(eb as i128));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        if diffs.is_empty() {
            return Ordering::Equal;
        }
        if let Some(ord) = float_sign(&diffs) {
            return ord;
        }
        exact_sign(&diffs)
    }

    fn weight_key(&self, v: VarId) -> u64 {
        self.weight_index_of(v).unwrap_or_else(|| {
            panic!("variable id {} has no weight in this order", v.index())
        })
    }

    /// The greatest term of `p`; `None` for the zero polynomial.
    pub fn highest_term<'a>(&self, p: &'a Polynomial) -> Option<&'a Monomial> {
        p.terms().max_by(|a, b| self.compare(a, b))
    }

    /// Terms of `p` sorted greatest first.
    pub fn sorted_terms_desc<'a>(&self, p: &'a Polynomial) -> Vec<&'a Monomial> {
        let mut ts: Vec<&Monomial> = p.terms().collect();
        ts.sort_by(|a, b| self.compare(b, a));
        ts
    }

    /// Total order on polynomials induced by this monomial order: compare
    /// highest terms, then recurse on the remainders; the zero polynomial is
    /// the unique minimum. Equivalently, lexicographic comparison of the
    /// descending term sequences.
    pub fn cmp_poly(&self, p: &Polynomial, q: &Polynomial) -> Ordering {
        let pa = self.sorted_terms_desc(p);
        let qa = self.sorted_terms_desc(q);
        for (a, b) in pa.iter().zip(qa.iter()) {
            match self.compare(a, b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        pa.len().cmp(&qa.len())
    }
}

impl fmt::Display for MonomialOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Fast sign of `sum(d_k * sqrt(p_k))` with a conservative float error
/// bound; `None` when the value is too close to zero to trust floats.
fn float_sign(diffs: &[(u64, i128)]) -> Option<Ordering> {
    let mut sum = 0f64;
    let mut abs = 0f64;
    for &(k, d) in diffs {
        if d.unsigned_abs() > (1u128 << 52) {
            return None; // conversion to f64 would lose integer precision
        }
        let w = (prime(k) as f64).sqrt();
        sum += d as f64 * w;
        abs += d.unsigned_abs() as f64 * w;
    }
    let eps = abs * (diffs.len() as f64 + 3.0) * 2e-16;
    if sum > eps {
        Some(Ordering::Greater)
    } else if sum < -eps {
        Some(Ordering::Less)
    } else {
        None
    }
}

/// Exact sign of `sum(d_k * sqrt(p_k))` for a nonzero difference vector.
///
/// At precision `prec`, `isqrt(p << 2*prec)` brackets `sqrt(p) * 2^prec`
/// within an interval of width one; summing the signed interval ends
/// brackets the full value. The value is a nonzero algebraic number, so
/// doubling the precision terminates.
fn exact_sign(diffs: &[(u64, i128)]) -> Ordering {
    let mut prec: u64 = 32;
    loop {
        let mut lo = BigInt::from(0);
        let mut hi = BigInt::from(0);
        for &(k, d) in diffs {
            let scaled = BigUint::from(prime(k)) << (2 * prec);
            let root = BigInt::from(scaled.sqrt());
            let root1 = &root + 1;
            let d = BigInt::from(d);
            if d.sign() == num_bigint::Sign::Plus {
                lo += &d * &root;
                hi += &d * &root1;
            } else {
                lo += &d * &root1;
                hi += &d * &root;
            }
        }
        if lo.sign() == num_bigint::Sign::Plus {
            return Ordering::Greater;
        }
        if hi.sign() == num_bigint::Sign::Minus {
            return Ordering::Less;
        }
        prec = prec.checked_mul(2).expect("precision overflow");
        assert!(
            prec <= 1 << 24,
            "weighted comparison failed to separate at {} bits",
            prec
        );
    }
}

/// The 1-based k-th prime (`prime(1) == 2`), memoized process-wide.
pub fn prime(k: u64) -> u64 {
    static CACHE: OnceLock<Mutex<Vec<u64>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![2, 3, 5, 7, 11, 13]));
    let mut primes = cache.lock().expect("prime cache poisoned");
    let k = usize::try_from(k).expect("prime index overflow");
    assert!(k >= 1, "prime indices are 1-based");
    while primes.len() < k {
        let mut cand = primes.last().unwrap() + 2;
        loop {
            if primes
                .iter()
                .take_while(|&&p| p * p <= cand)
                .all(|&p| cand % p != 0)
            {
                break;
            }
            cand += 2;
        }
        primes.push(cand);
    }
    primes[k - 1]
}

/// Which order axiom a violation concerns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrderAxiom {
    /// `cmp(a, b)` must be the reverse of `cmp(b, a)`.
    Antisymmetry,
    /// `cmp(a, b) == Equal` exactly when `a == b`.
    EqualityIffIdentical,
    /// `a <= b` and `b <= c` imply `a <= c`.
    Transitivity,
    /// `1 <= t` for every monomial `t`.
    UnitIsMinimum,
    /// `a <= b` implies `a*c <= b*c`.
    MulMonotone,
}

#[derive(Debug, Clone)]
pub struct AxiomViolation {
    pub axiom: OrderAxiom,
    pub witnesses: Vec<Monomial>,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub comparisons: u64,
    pub violation: Option<AxiomViolation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violation.is_none()
    }
}

/// Exercises the admissible-order axioms on every pair and triple drawn from
/// `sample`, reporting the first violation found. The comparator is taken as
/// a black box so that a broken comparator can be probed as well.
pub fn check_order_axioms<F>(cmp: F, sample: &[Monomial]) -> AxiomReport
where
    F: Fn(&Monomial, &Monomial) -> Ordering,
{
    let mut comparisons = 0u64;
    let fail = |axiom, witnesses: &[&Monomial], detail: String, comparisons| AxiomReport {
        comparisons,
        violation: Some(AxiomViolation {
            axiom,
            witnesses: witnesses.iter().map(|m| (*m).clone()).collect(),
            detail,
        }),
    };

    for a in sample {
        comparisons += 1;
        if cmp(&Monomial::one(), a) == Ordering::Greater {
            return fail(
                OrderAxiom::UnitIsMinimum,
                &[a],
                "1 compares greater than a monomial".into(),
                comparisons,
            );
        }
    }
    for a in sample {
        for b in sample {
            comparisons += 2;
            let ab = cmp(a, b);
            if ab != cmp(b, a).reverse() {
                return fail(
                    OrderAxiom::Antisymmetry,
                    &[a, b],
                    "cmp(a, b) is not the reverse of cmp(b, a)".into(),
                    comparisons,
                );
            }
            if (ab == Ordering::Equal) != (a == b) {
                return fail(
                    OrderAxiom::EqualityIffIdentical,
                    &[a, b],
                    format!("cmp returned {:?} for monomials with equality {}", ab, a == b),
                    comparisons,
                );
            }
        }
    }
    for a in sample {
        for b in sample {
            comparisons += 1;
            if cmp(a, b) == Ordering::Greater {
                continue;
            }
            for c in sample {
                comparisons += 2;
                if cmp(b, c) != Ordering::Greater && cmp(a, c) == Ordering::Greater {
                    return fail(
                        OrderAxiom::Transitivity,
                        &[a, b, c],
                        "a <= b and b <= c but a > c".into(),
                        comparisons,
                    );
                }
            }
            for c in sample {
                comparisons += 1;
                if cmp(&a.mul(c), &b.mul(c)) == Ordering::Greater {
                    return fail(
                        OrderAxiom::MulMonotone,
                        &[a, b, c],
                        "a <= b but a*c > b*c".into(),
                        comparisons,
                    );
                }
            }
        }
    }
    AxiomReport {
        comparisons,
        violation: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::VariableRegistry;

    fn mono(factors: &[(VarId, u64)]) -> Monomial {
        Monomial::from_factors(factors.iter().copied())
    }

    /// Two variables with y least significant: ranks y < x.
    fn yx_vars() -> (VarId, VarId) {
        let mut reg = VariableRegistry::new();
        let y = reg.intern("y");
        let x = reg.intern("x");
        (y, x)
    }

    #[test]
    fn lex_compares_most_significant_variable_first() {
        let (y, x) = yx_vars();
        let lex = MonomialOrder::lex(&[y, x]).unwrap();
        // y^3 < x under lex with y < x.
        assert_eq!(lex.compare(&mono(&[(y, 3)]), &Monomial::var(x)), Ordering::Less);
        assert_eq!(
            lex.compare(&mono(&[(x, 1), (y, 5)]), &mono(&[(x, 2)])),
            Ordering::Less
        );
        assert_eq!(
            lex.compare(&mono(&[(x, 3), (y, 1)]), &mono(&[(x, 3)])),
            Ordering::Greater
        );
        assert_eq!(lex.compare(&Monomial::one(), &Monomial::var(y)), Ordering::Less);
    }

    #[test]
    fn deglex_refines_degree() {
        let (y, x) = yx_vars();
        let deglex = MonomialOrder::deglex(&[y, x]).unwrap();
        // x < y^2 under deglex (degree decides) even though x is lex-greater.
        assert_eq!(
            deglex.compare(&Monomial::var(x), &mono(&[(y, 2)])),
            Ordering::Less
        );
        assert_eq!(
            deglex.compare(&mono(&[(x, 2)]), &mono(&[(x, 1), (y, 1)])),
            Ordering::Greater
        );
        assert_eq!(
            deglex.compare(&mono(&[(x, 1), (y, 1)]), &mono(&[(y, 2)])),
            Ordering::Greater
        );
    }

    #[test]
    fn degrevlex_penalizes_low_variables() {
        let mut reg = VariableRegistry::new();
        let z = reg.intern("z");
        let y = reg.intern("y");
        let x = reg.intern("x");
        let o = MonomialOrder::degrevlex(&[z, y, x]).unwrap();
        // x^2*z vs x*y^2: equal degree; the lowest differing variable is z,
        // where the first has the larger exponent, so the first is smaller.
        assert_eq!(
            o.compare(&mono(&[(x, 2), (z, 1)]), &mono(&[(x, 1), (y, 2)])),
            Ordering::Less
        );
        // Degree still dominates.
        assert_eq!(
            o.compare(&mono(&[(z, 4)]), &mono(&[(x, 3)])),
            Ordering::Greater
        );
        // deglex and degrevlex disagree on x*z vs y^2 with z < y < x:
        // deglex looks at the greatest variable (x wins); degrevlex looks at
        // the least (z loses).
        let dl = MonomialOrder::deglex(&[z, y, x]).unwrap();
        assert_eq!(
            dl.compare(&mono(&[(x, 1), (z, 1)]), &mono(&[(y, 2)])),
            Ordering::Greater
        );
        assert_eq!(
            o.compare(&mono(&[(x, 1), (z, 1)]), &mono(&[(y, 2)])),
            Ordering::Less
        );
    }

    #[test]
    fn weighted_orders_by_irrational_weight() {
        let mut reg = VariableRegistry::new();
        let x = reg.intern("x");
        let y = reg.intern("y");
        // u(x) = sqrt(2), u(y) = sqrt(3).
        let w = MonomialOrder::weighted(&[(x, 1), (y, 2)]).unwrap();
        assert_eq!(w.compare(&Monomial::var(x), &Monomial::var(y)), Ordering::Less);
        // 3*sqrt(2) + sqrt(3) < sqrt(2) + 3*sqrt(3).
        assert_eq!(
            w.compare(&mono(&[(x, 3), (y, 1)]), &mono(&[(x, 1), (y, 3)])),
            Ordering::Less
        );
        // x^2 vs y: 2*sqrt(2) > sqrt(3).
        assert_eq!(w.compare(&mono(&[(x, 2)]), &Monomial::var(y)), Ordering::Greater);
        assert_eq!(
            w.compare(&mono(&[(x, 2), (y, 1)]), &mono(&[(x, 2), (y, 1)])),
            Ordering::Equal
        );
    }

    #[test]
    fn weighted_near_ties_are_exact() {
        // Convergent of sqrt(3/2): 1079*sqrt(2) and 881*sqrt(3) differ by
        // about 1.8e-3 at magnitude 1526. The public comparator must get the
        // sign right (1079*sqrt(2) < 881*sqrt(3)).
        let mut reg = VariableRegistry::new();
        let x = reg.intern("x");
        let y = reg.intern("y");
        let w = MonomialOrder::weighted(&[(x, 1), (y, 2)]).unwrap();
        assert_eq!(
            w.compare(&mono(&[(x, 1079)]), &mono(&[(y, 881)])),
            Ordering::Less
        );
        assert_eq!(
            w.compare(&mono(&[(y, 881)]), &mono(&[(x, 1079)])),
            Ordering::Greater
        );
    }

    #[test]
    fn exact_sign_separates_below_float_precision() {
        // k = floor(sqrt(3 * 2^109)) makes k*sqrt(2) - 2^55*sqrt(3) lie in
        // (-sqrt(2), 0): a magnitude-1 difference against coefficients near
        // 2^55. The float filter refuses such coefficients and the first
        // 32-bit interval pass cannot separate them, so this drives the
        // precision-doubling loop.
        let m: i128 = 1 << 55;
        let k_big = (BigUint::from(3u32) << 109u32).sqrt();
        let k = i128::try_from(u128::try_from(k_big).unwrap()).unwrap();
        assert_eq!(exact_sign(&[(1, k), (2, -m)]), Ordering::Less);
        assert_eq!(exact_sign(&[(1, -k), (2, m)]), Ordering::Greater);
        // Simple signs away from ties.
        assert_eq!(exact_sign(&[(1, 1)]), Ordering::Greater);
        assert_eq!(exact_sign(&[(2, -1)]), Ordering::Less);
        assert_eq!(exact_sign(&[(1, 5), (2, -4)]), Ordering::Greater);
    }

    #[test]
    fn weighted_equal_iff_identical() {
        let mut reg = VariableRegistry::new();
        let x = reg.intern("x");
        let y = reg.intern("y");
        let z = reg.intern("z");
        let w = MonomialOrder::weighted(&[(x, 1), (y, 2), (z, 3)]).unwrap();
        let sample = [
            Monomial::one(),
            Monomial::var(x),
            Monomial::var(y),
            Monomial::var(z),
            mono(&[(x, 2), (y, 1)]),
            mono(&[(x, 1), (y, 1), (z, 1)]),
            mono(&[(y, 3)]),
        ];
        for a in &sample {
            for b in &sample {
                assert_eq!(
                    w.compare(a, b) == Ordering::Equal,
                    a == b,
                    "equality must coincide with identity for {:?} vs {:?}",
                    a,
                    b
                );
            }
        }
    }

    #[test]
    fn constructors_validate_inputs() {
        let (y, x) = yx_vars();
        assert!(MonomialOrder::lex(&[y, x]).is_ok());
        assert!(matches!(
            MonomialOrder::lex(&[y, y]),
            Err(OrderError::BadPermutation(_))
        ));
        assert!(matches!(
            MonomialOrder::weighted(&[(x, 1), (y, 1)]),
            Err(OrderError::BadWeights(_))
        ));
        assert!(matches!(
            MonomialOrder::weighted(&[(x, 0)]),
            Err(OrderError::BadWeights(_))
        ));
    }

    #[test]
    fn uncovered_variables_are_reported() {
        let (y, x) = yx_vars();
        let lex = MonomialOrder::lex(&[y]).unwrap_or_else(|_| unreachable!());
        // x (id 1) is outside the 1-variable permutation domain.
        let err = lex.try_cmp(&Monomial::var(x), &Monomial::var(y));
        assert_eq!(err, Err(OrderError::UnrankedVariable(1)));
    }

    #[test]
    fn highest_term_and_poly_order() {
        let (y, x) = yx_vars();
        let lex = MonomialOrder::lex(&[y, x]).unwrap();
        let f = Polynomial::from_terms([mono(&[(x, 3), (y, 1)]), Monomial::var(x)]);
        assert_eq!(lex.highest_term(&f), Some(&mono(&[(x, 3), (y, 1)])));
        assert_eq!(lex.highest_term(&Polynomial::zero()), None);

        // x + y < x + y^2; zero is the minimum; recursion past equal heads.
        let p = Polynomial::from_terms([Monomial::var(x), Monomial::var(y)]);
        let q = Polynomial::from_terms([Monomial::var(x), mono(&[(y, 2)])]);
        assert_eq!(lex.cmp_poly(&p, &q), Ordering::Less);
        assert_eq!(lex.cmp_poly(&p, &p), Ordering::Equal);
        assert_eq!(lex.cmp_poly(&Polynomial::zero(), &p), Ordering::Less);
        let r = Polynomial::from_terms([Monomial::var(x)]);
        assert_eq!(lex.cmp_poly(&r, &p), Ordering::Less);
        assert_eq!(lex.cmp_poly(&p, &r), Ordering::Greater);
    }

    fn small_sample(x: VarId, y: VarId) -> Vec<Monomial> {
        vec![
            Monomial::one(),
            Monomial::var(x),
            Monomial::var(y),
            mono(&[(x, 2)]),
            mono(&[(x, 1), (y, 1)]),
            mono(&[(y, 3)]),
            mono(&[(x, 2), (y, 2)]),
        ]
    }

    #[test]
    fn axiom_checker_accepts_all_four_orders() {
        let (y, x) = yx_vars();
        let sample = small_sample(x, y);
        for order in [
            MonomialOrder::lex(&[y, x]).unwrap(),
            MonomialOrder::deglex(&[y, x]).unwrap(),
            MonomialOrder::degrevlex(&[y, x]).unwrap(),
            MonomialOrder::weighted(&[(y, 1), (x, 2)]).unwrap(),
        ] {
            let report = check_order_axioms(|a, b| order.compare(a, b), &sample);
            assert!(
                report.passed(),
                "{} violated {:?}",
                order.name(),
                report.violation
            );
        }
    }

    #[test]
    fn axiom_checker_rejects_reversed_comparator() {
        let (y, x) = yx_vars();
        let deglex = MonomialOrder::deglex(&[y, x]).unwrap();
        let sample = small_sample(x, y);
        let report = check_order_axioms(|a, b| deglex.compare(a, b).reverse(), &sample);
        let v = report.violation.expect("reversed order must fail");
        assert_eq!(v.axiom, OrderAxiom::UnitIsMinimum);
    }

    #[test]
    fn axiom_checker_rejects_non_multiplicative_comparator() {
        // deglex with the comparison of one specific pair swapped stays
        // total, antisymmetric, and 1-minimal, but multiplying into the
        // swapped pair breaks monotonicity.
        let (y, x) = yx_vars();
        let deglex = MonomialOrder::deglex(&[y, x]).unwrap();
        let xy = mono(&[(x, 1), (y, 1)]);
        let x2 = mono(&[(x, 2)]);
        let evil = move |a: &Monomial, b: &Monomial| {
            if a == &xy && b == &x2 {
                Ordering::Greater
            } else if a == &x2 && b == &xy {
                Ordering::Less
            } else {
                deglex.compare(a, b)
            }
        };
        let sample = small_sample(x, y);
        let report = check_order_axioms(evil, &sample);
        assert!(!report.passed());
    }

    #[test]
    fn primes_are_generated_in_order() {
        assert_eq!(prime(1), 2);
        assert_eq!(prime(6), 13);
        assert_eq!(prime(25), 97);
        assert_eq!(prime(100), 541);
    }
}
