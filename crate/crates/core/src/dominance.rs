//! The dominance relation on monomials and polynomials.
//!
//! On monomials, dominance is divisibility. A polynomial `p` is dominated by
//! `q` when the terms of `p` can be injectively matched to terms of `q` with
//! each source term dividing its target; that is decided here by maximum
//! bipartite matching. Dominance is reflexive and transitive, and the zero
//! polynomial is below everything.

use crate::ring::{Monomial, Polynomial};

/// Whether `a` is dominated by `b` (that is, `a` divides `b`).
pub fn mono_below(a: &Monomial, b: &Monomial) -> bool {
    a.divides(b)
}

/// Witness for polynomial dominance: pairs `(i, j)` meaning the `i`-th term
/// of the source divides the `j`-th term of the target, with both sides
/// indexed in canonical term order. The map `i -> j` is injective.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DominanceWitness {
    pub assignment: Vec<(usize, usize)>,
}

/// Whether `p` is dominated by `q`, with a witness when it is.
///
/// Runs Kuhn's augmenting-path algorithm on the divides-graph between the
/// terms of `p` and the terms of `q`; `p` is below `q` exactly when the
/// maximum matching covers every term of `p`.
pub fn poly_below(p: &Polynomial, q: &Polynomial) -> Option<DominanceWitness> {
    let sources: Vec<&Monomial> = p.terms().collect();
    let targets: Vec<&Monomial> = q.terms().collect();
    if sources.len() > targets.len() {
        return None;
    }
    let adjacency: Vec<Vec<usize>> = sources
        .iter()
        .map(|s| {
            targets
                .iter()
                .enumerate()
                .filter(|(_, t)| s.divides(t))
                .map(|(j, _)| j)
                .collect()
        })
        .collect();

    // match_of_target[j] = source currently matched to target j.
    let mut match_of_target: Vec<Option<usize>> = vec![None; targets.len()];
    for i in 0..sources.len() {
        let mut seen = vec![false; targets.len()];
        if !augment(i, &adjacency, &mut match_of_target, &mut seen) {
            return None;
        }
    }
    let mut assignment: Vec<(usize, usize)> = match_of_target
        .iter()
        .enumerate()
        .filter_map(|(j, s)| s.map(|i| (i, j)))
        .collect();
    assignment.sort_unstable();
    Some(DominanceWitness { assignment })
}

fn augment(
    i: usize,
    adjacency: &[Vec<usize>],
    match_of_target: &mut [Option<usize>],
    seen: &mut [bool],
) -> bool {
    for &j in &adjacency[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        let free = match match_of_target[j] {
            None => true,
            Some(prev) => augment(prev, adjacency, match_of_target, seen),
        };
        if free {
            match_of_target[j] = Some(i);
            return true;
        }
    }
    false
}

/// Whether `s` lies in the upward closure of `set`: is some element of
/// `set` dominated by `s`?
pub fn upclosure_contains(set: &[Polynomial], s: &Polynomial) -> bool {
    set.iter().any(|p| poly_below(p, s).is_some())
}

/// The dominance-minimal elements of a monomial set: those divisible by no
/// other element. Duplicates are collapsed; the result is sorted in
/// canonical order.
pub fn minimal_elements(set: &[Monomial]) -> Vec<Monomial> {
    let mut items: Vec<Monomial> = set.to_vec();
    items.sort();
    items.dedup();
    // Scan by ascending degree: any strict divisor of m has smaller degree
    // (equal degree plus divisibility forces equality), so it is either
    // already kept or was dropped in favor of one of its own kept divisors.
    items.sort_by_key(Monomial::degree);
    let mut kept: Vec<Monomial> = Vec::new();
    for m in items {
        if !kept.iter().any(|k| k.divides(&m)) {
            kept.push(m);
        }
    }
    kept.sort();
    kept
}
