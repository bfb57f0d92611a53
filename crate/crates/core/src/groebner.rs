//! Gröbner bases over GF(2): multivariate division, S-polynomials,
//! Buchberger's algorithm under resource budgets, reduced bases, ideal
//! membership, and bounded enumeration of fully reduced polynomials.

use std::cmp::Ordering;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::dominance::minimal_elements;
use crate::order::MonomialOrder;
use crate::ring::{Monomial, Polynomial, VarId};

/// An ordered list of nonzero generators. Zero polynomials are dropped and
/// exact duplicates removed, keeping first occurrences in order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    gens: Vec<Polynomial>,
}

impl GeneratorSet {
    pub fn new(gens: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut seen: HashSet<Polynomial> = HashSet::new();
        let mut out = Vec::new();
        for g in gens {
            if !g.is_zero() && seen.insert(g.clone()) {
                out.push(g);
            }
        }
        GeneratorSet { gens: out }
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Polynomial> {
        self.gens.iter()
    }
}

/// How Buchberger's loop picks the next S-pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectionStrategy {
    /// Smallest lcm of head terms under the active order (normal strategy).
    Normal,
    /// First-in, first-out.
    Fifo,
}

/// Resource limits and strategy switches for a Buchberger run.
#[derive(Debug, Clone)]
pub struct GroebnerConfig {
    /// Cap on the cumulative number of S-pairs ever queued.
    pub max_pairs: usize,
    /// Cap on the basis size during the run.
    pub max_basis: usize,
    /// Cap on the degree of any new basis element.
    pub max_degree: u64,
    pub strategy: SelectionStrategy,
    /// Also discard an already queued pair when the head of a newly
    /// installed element properly refines its lcm (the chain criterion in
    /// its queue-pruning form). Sound with either setting; on by default
    /// because the staged family is infeasible without it.
    pub chain_criterion: bool,
    /// Number of worker threads for batched S-pair reduction; 1 = serial.
    pub threads: usize,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        GroebnerConfig {
            max_pairs: 500_000,
            max_basis: 20_000,
            max_degree: 1_000,
            strategy: SelectionStrategy::Normal,
            chain_criterion: true,
            threads: 1,
        }
    }
}

/// Which budget a run exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Resource {
    Pairs,
    BasisSize,
    Degree,
    StandardMonomials,
    FamilyLevel,
    TargetSetSize,
    CertificateDepth,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("budget exceeded: {resource:?} (limit {limit}, reached {reached})")]
pub struct BudgetExceeded {
    pub resource: Resource,
    pub limit: u64,
    pub reached: u64,
}

fn head<'a>(order: &MonomialOrder, f: &'a Polynomial) -> &'a Monomial {
    order.highest_term(f).expect("nonzero polynomial")
}

fn normal_form_slice(f: &Polynomial, gens: &[Polynomial], order: &MonomialOrder) -> Polynomial {
    let heads: Vec<&Monomial> = gens.iter().map(|g| head(order, g)).collect();
    let mut r = f.clone();
    'outer: loop {
        if r.is_zero() {
            return r;
        }
        // Reduce the largest reducible term; among applicable generators
        // pick the one with the largest head, ties to the earliest.
        for t in order.sorted_terms_desc(&r) {
            let mut chosen: Option<usize> = None;
            for (i, h) in heads.iter().enumerate() {
                if h.divides(t)
                    && chosen.is_none_or(|c| order.compare(h, heads[c]) == Ordering::Greater)
                {
                    chosen = Some(i);
                }
            }
            if let Some(i) = chosen {
                let q = t.checked_div(heads[i]).expect("divisibility just checked");
                r = r.add(&gens[i].mul_mono(&q));
                continue 'outer;
            }
        }
        return r;
    }
}

/// Fully reduce `f` against `gens`: the result has no term divisible by any
/// generator's head term, and differs from `f` by an ideal element.
/// Deterministic given the order and the generator list.
pub fn normal_form(f: &Polynomial, gens: &GeneratorSet, order: &MonomialOrder) -> Polynomial {
    normal_form_slice(f, gens.gens(), order)
}

/// The S-polynomial of two nonzero polynomials: both head terms are lifted
/// to their lcm, where they cancel over GF(2).
pub fn s_polynomial(f: &Polynomial, g: &Polynomial, order: &MonomialOrder) -> Polynomial {
    let hf = head(order, f);
    let hg = head(order, g);
    let l = hf.lcm(hg);
    let qf = l.checked_div(hf).expect("lcm is divisible by both heads");
    let qg = l.checked_div(hg).expect("lcm is divisible by both heads");
    f.mul_mono(&qf).add(&g.mul_mono(&qg))
}

struct PairEntry {
    i: usize,
    j: usize,
    lcm: Monomial,
}

impl PairEntry {
    /// Natural selection key: lcm under the active order, then (j, i).
    fn key_cmp(&self, other: &Self, order: &MonomialOrder) -> Ordering {
        order
            .compare(&self.lcm, &other.lcm)
            .then((self.j, self.i).cmp(&(other.j, other.i)))
    }
}

/// Pending S-pairs. Kept as a plain vector so the installation step can
/// prune it; selection scans for the minimum (normal strategy) or takes the
/// oldest entry (FIFO). The queue stays small under the pruning criteria,
/// so the linear scan is not the bottleneck.
struct PairQueue {
    strategy: SelectionStrategy,
    pairs: Vec<PairEntry>,
}

impl PairQueue {
    fn new(strategy: SelectionStrategy) -> Self {
        PairQueue {
            strategy,
            pairs: Vec::new(),
        }
    }

    fn push(&mut self, e: PairEntry) {
        self.pairs.push(e);
    }

    fn pop(&mut self, order: &MonomialOrder) -> Option<PairEntry> {
        if self.pairs.is_empty() {
            return None;
        }
        match self.strategy {
            SelectionStrategy::Normal => {
                let mut best = 0;
                for k in 1..self.pairs.len() {
                    if self.pairs[k].key_cmp(&self.pairs[best], order) == Ordering::Less {
                        best = k;
                    }
                }
                Some(self.pairs.swap_remove(best))
            }
            SelectionStrategy::Fifo => Some(self.pairs.remove(0)),
        }
    }
}

struct BuchbergerState {
    basis: Vec<Polynomial>,
    queue: PairQueue,
    pairs_created: usize,
    order: Arc<MonomialOrder>,
    /// True when every input generator is a binomial. GF(2) S-polynomials
    /// and normal forms of binomials against binomials are binomials or
    /// zero, so this is an invariant of the whole run.
    binomial_inputs: bool,
}

impl BuchbergerState {
    /// Install the element at `new` into the pair queue with the
    /// Gebauer-Möller update: drop candidate pairs with non-minimal lcms,
    /// keep one candidate per lcm value, apply the coprime-head criterion,
    /// and (behind the chain flag) prune queued pairs whose lcm the new
    /// head properly refines. Each discard cites only pairs that are
    /// processed or were installed earlier, so every discarded pair's
    /// S-polynomial still reduces to zero once the surviving ones do, with
    /// any subset of the prunings active.
    fn add_pairs(&mut self, new: usize, config: &GroebnerConfig) -> Result<(), BudgetExceeded> {
        let hn = head(&self.order, &self.basis[new]).clone();
        let candidates: Vec<(usize, Monomial, bool)> = (0..new)
            .map(|i| {
                let hi = head(&self.order, &self.basis[i]);
                let lcm = hi.lcm(&hn);
                let coprime = lcm == hi.mul(&hn);
                (i, lcm, coprime)
            })
            .collect();
        // Chain criterion: an old pair (i, j) is subsumed by the two pairs
        // through `new` when the new head divides its lcm and neither of
        // those pairs has the same lcm.
        if config.chain_criterion {
            let basis = &self.basis;
            let order = &self.order;
            self.queue.pairs.retain(|e| {
                !hn.divides(&e.lcm)
                    || head(order, &basis[e.i]).lcm(&hn) == e.lcm
                    || head(order, &basis[e.j]).lcm(&hn) == e.lcm
            });
        }
        // Candidates with a properly smaller candidate lcm are redundant.
        let minimal = |a: usize| {
            candidates.iter().enumerate().all(|(b, cand)| {
                b == a || !cand.1.divides(&candidates[a].1) || cand.1 == candidates[a].1
            })
        };
        // Of each surviving equal-lcm class, a coprime member kills the
        // whole class; otherwise the lowest index represents it.
        let mut classes: HashMap<Monomial, (bool, usize)> = HashMap::new();
        for (a, (i, lcm, coprime)) in candidates.iter().enumerate() {
            if minimal(a) {
                let entry = classes.entry(lcm.clone()).or_insert((false, *i));
                entry.0 |= *coprime;
            }
        }
        for (a, (i, lcm, _)) in candidates.iter().enumerate() {
            if !minimal(a) {
                continue;
            }
            let (coprime, representative) = classes[lcm];
            if coprime || representative != *i {
                continue;
            }
            self.pairs_created += 1;
            if self.pairs_created > config.max_pairs {
                return Err(BudgetExceeded {
                    resource: Resource::Pairs,
                    limit: config.max_pairs as u64,
                    reached: self.pairs_created as u64,
                });
            }
            self.queue.push(PairEntry {
                i: *i,
                j: new,
                lcm: lcm.clone(),
            });
        }
        Ok(())
    }

    /// Reduce `h` against the current basis and install it if nonzero.
    fn absorb(&mut self, h: Polynomial, config: &GroebnerConfig) -> Result<(), BudgetExceeded> {
        let h = normal_form_slice(&h, &self.basis, &self.order);
        if h.is_zero() {
            return Ok(());
        }
        debug_assert!(
            !self.binomial_inputs || h.term_count() == 2,
            "binomial closure violated: {} terms",
            h.term_count()
        );
        let deg = h.degree().unwrap_or(0);
        if deg > config.max_degree {
            return Err(BudgetExceeded {
                resource: Resource::Degree,
                limit: config.max_degree,
                reached: deg,
            });
        }
        self.basis.push(h);
        if self.basis.len() > config.max_basis {
            return Err(BudgetExceeded {
                resource: Resource::BasisSize,
                limit: config.max_basis as u64,
                reached: self.basis.len() as u64,
            });
        }
        self.add_pairs(self.basis.len() - 1, config)
    }
}

/// Buchberger's algorithm. Returns a (generally non-reduced) Gröbner basis
/// of the ideal generated by `gens`, or the budget that was exhausted.
pub fn buchberger(
    gens: &GeneratorSet,
    order: &MonomialOrder,
    config: &GroebnerConfig,
) -> Result<GeneratorSet, BudgetExceeded> {
    let order = Arc::new(order.clone());
    let mut state = BuchbergerState {
        basis: gens.gens().to_vec(),
        queue: PairQueue::new(config.strategy),
        pairs_created: 0,
        order: Arc::clone(&order),
        binomial_inputs: gens.gens().iter().all(|p| p.term_count() == 2),
    };
    for j in 0..state.basis.len() {
        state.add_pairs(j, config)?;
    }
    if config.threads > 1 {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .expect("thread pool construction");
        pool.install(|| buchberger_loop(&mut state, config, config.threads * 4))?;
    } else {
        buchberger_loop(&mut state, config, 1)?;
    }
    Ok(GeneratorSet::new(state.basis))
}

fn buchberger_loop(
    state: &mut BuchbergerState,
    config: &GroebnerConfig,
    batch_size: usize,
) -> Result<(), BudgetExceeded> {
    use rayon::prelude::*;
    loop {
        let mut batch = Vec::new();
        while batch.len() < batch_size {
            let Some(e) = state.queue.pop(&state.order) else { break };
            batch.push(e);
        }
        if batch.is_empty() {
            return Ok(());
        }
        if batch.len() == 1 {
            let e = &batch[0];
            let s = s_polynomial(&state.basis[e.i], &state.basis[e.j], &state.order);
            state.absorb(s, config)?;
        } else {
            // Reduce the whole batch against the frozen basis in parallel;
            // the serial re-reduction in absorb accounts for any basis
            // growth inside the batch. The reduced basis is unaffected.
            let frozen = state.basis.clone();
            let order = Arc::clone(&state.order);
            let reduced: Vec<Polynomial> = batch
                .par_iter()
                .map(|e| {
                    let s = s_polynomial(&frozen[e.i], &frozen[e.j], &order);
                    normal_form_slice(&s, &frozen, &order)
                })
                .collect();
            for h in reduced {
                if !h.is_zero() {
                    state.absorb(h, config)?;
                }
            }
        }
    }
}

/// A minimal, autoreduced Gröbner basis, sorted by head term descending
/// under its order. Unique for a fixed ideal and order.
#[derive(Debug, Clone)]
pub struct ReducedBasis {
    gens: Vec<Polynomial>,
    order: MonomialOrder,
}

impl ReducedBasis {
    /// Wrap parts without checking the reducedness invariants. Intended for
    /// tests and for re-assembling verified data.
    pub fn from_parts(gens: Vec<Polynomial>, order: MonomialOrder) -> Self {
        ReducedBasis { gens, order }
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn head_terms(&self) -> Vec<&Monomial> {
        self.gens.iter().map(|g| head(&self.order, g)).collect()
    }
}

/// Minimize and autoreduce a Gröbner basis. The result is the unique
/// reduced basis of the ideal under `order`.
pub fn reduce_basis(basis: &GeneratorSet, order: &MonomialOrder) -> ReducedBasis {
    // Minimization: walk heads in ascending order; anything whose head is
    // divisible by an already-kept head is redundant.
    let mut indices: Vec<usize> = (0..basis.len()).collect();
    indices.sort_by(|&a, &b| {
        order
            .compare(head(order, &basis.gens()[a]), head(order, &basis.gens()[b]))
            .then(a.cmp(&b))
    });
    let mut kept: Vec<Polynomial> = Vec::new();
    for &i in &indices {
        let g = &basis.gens()[i];
        let hg = head(order, g);
        if !kept.iter().any(|k| head(order, k).divides(hg)) {
            kept.push(g.clone());
        }
    }
    // Autoreduction to a fixpoint. Heads are pairwise non-dividing, so each
    // element keeps its head and only tails change.
    loop {
        let mut changed = false;
        for i in 0..kept.len() {
            let others: Vec<Polynomial> = kept
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, g)| g.clone())
                .collect();
            let r = normal_form_slice(&kept[i], &others, order);
            if r != kept[i] {
                debug_assert_eq!(head(order, &r), head(order, &kept[i]));
                kept[i] = r;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert!(
        basis.gens().iter().any(|p| p.term_count() != 2)
            || kept.iter().all(|p| p.term_count() == 2),
        "binomial closure violated by autoreduction"
    );
    kept.sort_by(|a, b| order.compare(head(order, b), head(order, a)));
    ReducedBasis {
        gens: kept,
        order: order.clone(),
    }
}

/// Whether every pairwise S-polynomial of `basis` reduces to zero.
pub fn is_groebner(basis: &GeneratorSet, order: &MonomialOrder) -> bool {
    let gens = basis.gens();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let s = s_polynomial(&gens[i], &gens[j], order);
            if !normal_form_slice(&s, gens, order).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Ideal membership via normal form against a reduced basis.
pub fn ideal_member(f: &Polynomial, basis: &ReducedBasis) -> bool {
    normal_form_slice(f, &basis.gens, &basis.order).is_zero()
}

/// Head terms of a reduced basis, their pairwise divisibility minimality,
/// and the size agreement between the two.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalBasisReport {
    pub passed: bool,
    pub basis_size: usize,
    pub minimal_heads: usize,
}

/// Check that the head terms of a reduced basis form an antichain under
/// divisibility: stripping divisible elements removes nothing.
pub fn verify_minimal_basis(basis: &ReducedBasis) -> MinimalBasisReport {
    let heads: Vec<Monomial> = basis.head_terms().into_iter().cloned().collect();
    let minimal = minimal_elements(&heads);
    let mut sorted = heads.clone();
    sorted.sort();
    sorted.dedup();
    let passed = minimal == sorted && heads.len() == basis.len() && minimal.len() == heads.len();
    MinimalBasisReport {
        passed,
        basis_size: basis.len(),
        minimal_heads: minimal.len(),
    }
}

/// All monomials over `vars` of degree at most `max_deg` that no head term
/// of `basis` divides, in ascending canonical order.
pub fn standard_monomials_bounded(
    basis: &ReducedBasis,
    vars: &[VarId],
    max_deg: u64,
    cap: usize,
) -> Result<Vec<Monomial>, BudgetExceeded> {
    let heads = basis.head_terms();
    let mut out = Vec::new();
    let mut stack: Vec<(VarId, u64)> = Vec::new();
    rec_standard(&heads, vars, max_deg, cap, &mut stack, &mut out)?;
    out.sort();
    Ok(out)
}

fn rec_standard(
    heads: &[&Monomial],
    vars: &[VarId],
    budget: u64,
    cap: usize,
    stack: &mut Vec<(VarId, u64)>,
    out: &mut Vec<Monomial>,
) -> Result<(), BudgetExceeded> {
    let m = Monomial::from_factors(stack.iter().copied());
    if heads.iter().any(|h| h.divides(&m)) {
        // Every extension of a divisible monomial stays divisible.
        return Ok(());
    }
    match vars.split_first() {
        None => {
            if out.len() >= cap {
                return Err(BudgetExceeded {
                    resource: Resource::StandardMonomials,
                    limit: cap as u64,
                    reached: out.len() as u64 + 1,
                });
            }
            out.push(m);
            Ok(())
        }
        Some((&v, rest)) => {
            for e in 0..=budget {
                if e > 0 {
                    stack.push((v, e));
                }
                let r = rec_standard(heads, rest, budget - e, cap, stack, out);
                if e > 0 {
                    stack.pop();
                }
                r?;
            }
            Ok(())
        }
    }
}

/// Hard ceiling on the standard-monomial count for subset enumeration
/// (the result has `2^k - 1` elements).
pub const RESIDUAL_SUPPORT_CAP: usize = 20;

/// Every nonzero polynomial of degree at most `max_deg` none of whose terms
/// is divisible by a head term of `basis`: all nonzero subsets of the
/// standard monomials. Sorted ascending by the basis order.
pub fn residual_set_bounded(
    basis: &ReducedBasis,
    vars: &[VarId],
    max_deg: u64,
    cap: usize,
) -> Result<Vec<Polynomial>, BudgetExceeded> {
    let cap = cap.min(RESIDUAL_SUPPORT_CAP);
    let support = standard_monomials_bounded(basis, vars, max_deg, cap)?;
    let k = support.len();
    let mut out = Vec::with_capacity((1usize << k) - 1);
    for mask in 1u64..(1u64 << k) {
        let p = Polynomial::from_terms(
            support
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask >> i & 1 == 1)
                .map(|(_, m)| m.clone()),
        );
        out.push(p);
    }
    out.sort_by(|a, b| basis.order.cmp_poly(a, b));
    Ok(out)
}
