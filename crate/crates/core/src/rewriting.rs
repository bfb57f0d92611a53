//! Binomial rewriting as a view of ideal membership over GF(2).
//!
//! A binomial `t1 + t2` rewrites a monomial `m = b*t1` to `b*t2`, in either
//! direction; two monomials are connected exactly when their sum lies in the
//! ideal. This module provides the one-step relation, bounded breadth-first
//! enumeration of everything reachable from a monomial, and replayable
//! derivation certificates with an independent verifier.

use std::collections::{HashMap, VecDeque};

use thiserror::Error;

use crate::groebner::GeneratorSet;
use crate::order::MonomialOrder;
use crate::ring::{Monomial, Polynomial};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RewriteError {
    #[error("generator {index} has {terms} term(s); rewriting requires binomials")]
    NotBinomial { index: usize, terms: usize },
    #[error("step {step} refers to generator {index}, but only {count} generators exist")]
    UnknownGenerator {
        step: usize,
        index: usize,
        count: usize,
    },
    #[error("step {step}: multiplier times the matched term does not equal the current monomial")]
    StepMismatch { step: usize },
    #[error("replaying the steps does not reach the recorded end monomial")]
    EndMismatch,
    #[error("sum of step multiples does not telescope to start + end")]
    TelescopeMismatch,
}

/// Which of the two terms of a binomial matched the current monomial.
/// Term `Lo` is the canonically smaller of the two, `Hi` the larger.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Lo,
    Hi,
}

impl Side {
    pub fn flipped(self) -> Side {
        match self {
            Side::Lo => Side::Hi,
            Side::Hi => Side::Lo,
        }
    }

    pub fn index(self) -> usize {
        match self {
            Side::Lo => 0,
            Side::Hi => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Side> {
        match i {
            0 => Some(Side::Lo),
            1 => Some(Side::Hi),
            _ => None,
        }
    }
}

/// One rewrite: the current monomial is `multiplier` times the `from_side`
/// term of generator `gen_index`, and becomes `multiplier` times the other
/// term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RewriteStep {
    pub gen_index: usize,
    pub multiplier: Monomial,
    pub from_side: Side,
}

/// A replayable chain of rewrites connecting two monomials. A valid
/// certificate proves `start + end` lies in the ideal generated by the
/// binomials it references.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivationCertificate {
    pub start: Monomial,
    pub steps: Vec<RewriteStep>,
    pub end: Monomial,
}

impl DerivationCertificate {
    /// The empty derivation at `m`.
    pub fn identity(m: Monomial) -> Self {
        DerivationCertificate {
            start: m.clone(),
            steps: Vec::new(),
            end: m,
        }
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// The same derivation read backwards: endpoints swap, steps reverse,
    /// and each step now matches the term it previously produced.
    pub fn reversed(&self) -> Self {
        DerivationCertificate {
            start: self.end.clone(),
            end: self.start.clone(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| RewriteStep {
                    gen_index: s.gen_index,
                    multiplier: s.multiplier.clone(),
                    from_side: s.from_side.flipped(),
                })
                .collect(),
        }
    }
}

/// The two terms of a binomial in ascending canonical order.
pub fn binomial_sides(p: &Polynomial, index: usize) -> Result<(Monomial, Monomial), RewriteError> {
    let mut it = p.terms();
    match (it.next(), it.next(), it.next()) {
        (Some(lo), Some(hi), None) => Ok((lo.clone(), hi.clone())),
        _ => Err(RewriteError::NotBinomial {
            index,
            terms: p.term_count(),
        }),
    }
}

fn all_sides(gens: &GeneratorSet) -> Result<Vec<(Monomial, Monomial)>, RewriteError> {
    gens.gens()
        .iter()
        .enumerate()
        .map(|(i, g)| binomial_sides(g, i))
        .collect()
}

/// All monomials reachable from `alpha` in one rewrite, with the step that
/// produces each. Both directions of every generator are tried; results
/// appear in generator order, `Lo` match before `Hi` match.
pub fn one_step(
    alpha: &Monomial,
    gens: &GeneratorSet,
) -> Result<Vec<(Monomial, RewriteStep)>, RewriteError> {
    let sides = all_sides(gens)?;
    let mut out = Vec::new();
    for (gen_index, (lo, hi)) in sides.iter().enumerate() {
        for (from_side, matched, other) in [(Side::Lo, lo, hi), (Side::Hi, hi, lo)] {
            if let Some(multiplier) = alpha.checked_div(matched) {
                out.push((
                    multiplier.mul(other),
                    RewriteStep {
                        gen_index,
                        multiplier,
                        from_side,
                    },
                ));
            }
        }
    }
    Ok(out)
}

/// Apply one recorded step to `alpha`, checking that it matches.
pub fn apply_step(
    alpha: &Monomial,
    step: &RewriteStep,
    gens: &GeneratorSet,
    step_no: usize,
) -> Result<Monomial, RewriteError> {
    let count = gens.len();
    let gen = gens
        .gens()
        .get(step.gen_index)
        .ok_or(RewriteError::UnknownGenerator {
            step: step_no,
            index: step.gen_index,
            count,
        })?;
    let (lo, hi) = binomial_sides(gen, step.gen_index)?;
    let (matched, other) = match step.from_side {
        Side::Lo => (lo, hi),
        Side::Hi => (hi, lo),
    };
    if step.multiplier.mul(&matched) != *alpha {
        return Err(RewriteError::StepMismatch { step: step_no });
    }
    Ok(step.multiplier.mul(&other))
}

/// Replay a certificate and cross-check the telescoping identity: the GF(2)
/// sum of `multiplier * generator` over all steps must equal `start + end`.
pub fn check_certificate(
    cert: &DerivationCertificate,
    gens: &GeneratorSet,
) -> Result<(), RewriteError> {
    let mut current = cert.start.clone();
    for (step_no, step) in cert.steps.iter().enumerate() {
        current = apply_step(&current, step, gens, step_no)?;
    }
    if current != cert.end {
        return Err(RewriteError::EndMismatch);
    }
    let mut telescoped = Polynomial::zero();
    for step in &cert.steps {
        let gen = &gens.gens()[step.gen_index];
        telescoped = telescoped.add(&gen.mul_mono(&step.multiplier));
    }
    let endpoints = Polynomial::from_terms([cert.start.clone(), cert.end.clone()]);
    if telescoped != endpoints {
        return Err(RewriteError::TelescopeMismatch);
    }
    Ok(())
}

/// Whether the certificate replays cleanly against `gens`.
pub fn verify_certificate(cert: &DerivationCertificate, gens: &GeneratorSet) -> bool {
    check_certificate(cert, gens).is_ok()
}

/// Caps for bounded reachability searches. `max_steps` bounds the rewrite
/// count from the start monomial (the BFS depth), `max_degree` the degree of
/// any enqueued monomial, `max_visited` the total number of monomials kept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchBounds {
    pub max_degree: u64,
    pub max_steps: usize,
    pub max_visited: usize,
}

/// Everything reached by a bounded breadth-first closure of the one-step
/// relation, with parent pointers for certificate reconstruction.
#[derive(Debug, Clone)]
pub struct ReachedSet {
    start: Monomial,
    parents: HashMap<Monomial, Option<(Monomial, RewriteStep)>>,
    truncated: bool,
}

impl ReachedSet {
    pub fn start(&self) -> &Monomial {
        &self.start
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.parents.contains_key(m)
    }

    /// True when some successor was cut off by a bound, so the true
    /// reachable set may be larger than what is recorded here.
    pub fn truncated(&self) -> bool {
        self.truncated
    }

    pub fn len(&self) -> usize {
        self.parents.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.parents.keys()
    }

    /// Reconstruct the derivation from the start monomial to `m` by walking
    /// parent pointers.
    pub fn certificate_to(&self, m: &Monomial) -> Option<DerivationCertificate> {
        if !self.contains(m) {
            return None;
        }
        Some(reconstruct(&self.parents, &self.start, m))
    }
}

fn reconstruct(
    parents: &HashMap<Monomial, Option<(Monomial, RewriteStep)>>,
    start: &Monomial,
    target: &Monomial,
) -> DerivationCertificate {
    let mut steps = Vec::new();
    let mut cursor = target;
    while let Some(Some((prev, step))) = parents.get(cursor) {
        steps.push(step.clone());
        cursor = prev;
    }
    debug_assert_eq!(cursor, start);
    steps.reverse();
    DerivationCertificate {
        start: start.clone(),
        steps,
        end: target.clone(),
    }
}

/// Breadth-first closure of the one-step relation from `start`, within
/// `bounds`. The start monomial is always included, whatever its degree.
pub fn ideal_res_bounded(
    start: &Monomial,
    gens: &GeneratorSet,
    bounds: &SearchBounds,
) -> Result<ReachedSet, RewriteError> {
    let sides = all_sides(gens)?;
    let mut parents: HashMap<Monomial, Option<(Monomial, RewriteStep)>> = HashMap::new();
    parents.insert(start.clone(), None);
    let mut truncated = false;
    let mut queue = VecDeque::new();
    queue.push_back((start.clone(), 0usize));
    while let Some((alpha, depth)) = queue.pop_front() {
        expand(
            &alpha,
            depth,
            &sides,
            bounds,
            &mut parents,
            &mut truncated,
            &mut queue,
            |_succ| false,
        );
    }
    Ok(ReachedSet {
        start: start.clone(),
        parents,
        truncated,
    })
}

/// Expand one BFS node; returns the first successor for which `stop` says
/// true, after recording it. Successors cut by a bound set `truncated`.
#[allow(clippy::too_many_arguments)]
fn expand(
    alpha: &Monomial,
    depth: usize,
    sides: &[(Monomial, Monomial)],
    bounds: &SearchBounds,
    parents: &mut HashMap<Monomial, Option<(Monomial, RewriteStep)>>,
    truncated: &mut bool,
    queue: &mut VecDeque<(Monomial, usize)>,
    stop: impl Fn(&Monomial) -> bool,
) -> Option<Monomial> {
    for (gen_index, (lo, hi)) in sides.iter().enumerate() {
        for (from_side, matched, other) in [(Side::Lo, lo, hi), (Side::Hi, hi, lo)] {
            let Some(multiplier) = alpha.checked_div(matched) else {
                continue;
            };
            let succ = multiplier.mul(other);
            if parents.contains_key(&succ) {
                continue;
            }
            if depth + 1 > bounds.max_steps
                || succ.degree() > bounds.max_degree
                || parents.len() >= bounds.max_visited
            {
                *truncated = true;
                continue;
            }
            parents.insert(
                succ.clone(),
                Some((
                    alpha.clone(),
                    RewriteStep {
                        gen_index,
                        multiplier,
                        from_side,
                    },
                )),
            );
            if stop(&succ) {
                return Some(succ);
            }
            queue.push_back((succ, depth + 1));
        }
    }
    None
}

/// Result of a bounded search for a reachable monomial strictly below a
/// reference point.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    /// A reachable monomial strictly smaller than the reference under the
    /// active order, with its derivation, if one was found in bounds.
    pub found: Option<(Monomial, DerivationCertificate)>,
    /// Whether any part of the search space was cut off by the bounds; a
    /// `None` result with `truncated` set is evidence, not proof.
    pub truncated: bool,
    /// Number of distinct monomials visited.
    pub visited: usize,
}

/// Search the bounded reachable set of `g` for a monomial strictly smaller
/// than `g` under `order`, returning the first one found (breadth-first)
/// with its certificate.
pub fn min_residue_search(
    g: &Monomial,
    gens: &GeneratorSet,
    order: &MonomialOrder,
    bounds: &SearchBounds,
) -> Result<SearchOutcome, RewriteError> {
    let sides = all_sides(gens)?;
    let mut parents: HashMap<Monomial, Option<(Monomial, RewriteStep)>> = HashMap::new();
    parents.insert(g.clone(), None);
    let mut truncated = false;
    let mut queue = VecDeque::new();
    queue.push_back((g.clone(), 0usize));
    while let Some((alpha, depth)) = queue.pop_front() {
        let hit = expand(
            &alpha,
            depth,
            &sides,
            bounds,
            &mut parents,
            &mut truncated,
            &mut queue,
            |succ| order.compare(succ, g) == std::cmp::Ordering::Less,
        );
        if let Some(m) = hit {
            let cert = reconstruct(&parents, g, &m);
            return Ok(SearchOutcome {
                found: Some((m, cert)),
                truncated,
                visited: parents.len(),
            });
        }
    }
    Ok(SearchOutcome {
        found: None,
        truncated,
        visited: parents.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::order::{MonomialOrder, OrderKind};
    use crate::ring::{VarId, VariableRegistry};

    fn mono(factors: &[(VarId, u64)]) -> Monomial {
        Monomial::from_factors(factors.iter().copied())
    }

    /// xy + 1 and x^2 + y over variables x, y (and a spare z).
    fn setup() -> (VarId, VarId, VarId, GeneratorSet) {
        let mut reg = VariableRegistry::new();
        let x = reg.intern("x");
        let y = reg.intern("y");
        let z = reg.intern("z");
        let g1 = Polynomial::from_terms([mono(&[(x, 1), (y, 1)]), Monomial::one()]);
        let g2 = Polynomial::from_terms([mono(&[(x, 2)]), mono(&[(y, 1)])]);
        (x, y, z, GeneratorSet::new([g1, g2]))
    }

    #[test]
    fn one_step_enumerates_both_directions() {
        let (x, y, _, gens) = setup();
        let alpha = mono(&[(x, 3), (y, 1)]);
        let got = one_step(&alpha, &gens).unwrap();
        let expect = [
            // xy + 1, matching the constant term: upward to x^4 y^2.
            (mono(&[(x, 4), (y, 2)]), 0, Side::Lo, alpha.clone()),
            // xy + 1, matching xy: down to x^2.
            (mono(&[(x, 2)]), 0, Side::Hi, mono(&[(x, 2)])),
            // x^2 + y, matching y: up to x^5.
            (mono(&[(x, 5)]), 1, Side::Lo, mono(&[(x, 3)])),
            // x^2 + y, matching x^2: across to x y^2.
            (
                mono(&[(x, 1), (y, 2)]),
                1,
                Side::Hi,
                mono(&[(x, 1), (y, 1)]),
            ),
        ];
        assert_eq!(got.len(), expect.len());
        for ((succ, step), (em, eg, es, emul)) in got.iter().zip(expect.iter()) {
            assert_eq!(succ, em);
            assert_eq!(step.gen_index, *eg);
            assert_eq!(step.from_side, *es);
            assert_eq!(&step.multiplier, emul);
        }
    }

    #[test]
    fn unit_monomial_rewrites_upward_only() {
        let (x, y, _, gens) = setup();
        let got = one_step(&Monomial::one(), &gens).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, mono(&[(x, 1), (y, 1)]));
        assert_eq!(got[0].1.gen_index, 0);
        assert_eq!(got[0].1.from_side, Side::Lo);
        let _ = y;
    }

    #[test]
    fn foreign_variable_still_matches_constant_sides() {
        let (x, y, z, _) = setup();
        let mut reg = VariableRegistry::new();
        let _ = (reg.intern("x"), reg.intern("y"), reg.intern("z"));
        let gens = GeneratorSet::new([Polynomial::from_terms([
            mono(&[(x, 1), (y, 1)]),
            Monomial::one(),
        ])]);
        let got = one_step(&Monomial::var(z), &gens).unwrap();
        assert_eq!(got.len(), 1);
        assert_eq!(got[0].0, mono(&[(x, 1), (y, 1), (z, 1)]));
    }

    #[test]
    fn one_step_symmetry() {
        let (x, y, _, gens) = setup();
        for alpha in [
            mono(&[(x, 3), (y, 1)]),
            mono(&[(x, 1)]),
            mono(&[(y, 2)]),
            Monomial::one(),
        ] {
            for (succ, _) in one_step(&alpha, &gens).unwrap() {
                let back = one_step(&succ, &gens).unwrap();
                assert!(
                    back.iter().any(|(m, _)| *m == alpha),
                    "missing reverse edge {succ:?} -> {alpha:?}"
                );
            }
        }
    }

    #[test]
    fn non_binomials_are_rejected() {
        let mut reg = VariableRegistry::new();
        let x = reg.intern("x");
        let y = reg.intern("y");
        let tri = Polynomial::from_terms([mono(&[(x, 1)]), mono(&[(y, 1)]), Monomial::one()]);
        let gens = GeneratorSet::new([tri]);
        match one_step(&Monomial::var(x), &gens) {
            Err(RewriteError::NotBinomial { index: 0, terms: 3 }) => {}
            other => panic!("expected NotBinomial, got {other:?}"),
        }
        let single = GeneratorSet::new([Polynomial::from_monomial(mono(&[(x, 1)]))]);
        assert!(one_step(&Monomial::var(x), &single).is_err());
    }

    fn example_chain(x: VarId, y: VarId) -> DerivationCertificate {
        // x^3 y -> x^2 (via xy + 1, multiplier x^2) -> y (via x^2 + y).
        DerivationCertificate {
            start: mono(&[(x, 3), (y, 1)]),
            steps: vec![
                RewriteStep {
                    gen_index: 0,
                    multiplier: mono(&[(x, 2)]),
                    from_side: Side::Hi,
                },
                RewriteStep {
                    gen_index: 1,
                    multiplier: Monomial::one(),
                    from_side: Side::Hi,
                },
            ],
            end: mono(&[(y, 1)]),
        }
    }

    #[test]
    fn certificate_replay_accepts_valid_chain() {
        let (x, y, _, gens) = setup();
        let cert = example_chain(x, y);
        assert!(verify_certificate(&cert, &gens));
        // Its reversal is also a valid derivation.
        assert!(verify_certificate(&cert.reversed(), &gens));
        assert_eq!(cert.reversed().reversed(), cert);
    }

    #[test]
    fn certificate_rejects_tampering() {
        let (x, y, _, gens) = setup();
        let cert = example_chain(x, y);

        let mut bad = cert.clone();
        bad.steps[0].multiplier = mono(&[(x, 1)]);
        assert_eq!(
            check_certificate(&bad, &gens),
            Err(RewriteError::StepMismatch { step: 0 })
        );

        let mut bad = cert.clone();
        bad.end = mono(&[(x, 1)]);
        assert_eq!(check_certificate(&bad, &gens), Err(RewriteError::EndMismatch));

        let mut bad = cert.clone();
        bad.steps[1].gen_index = 5;
        assert!(matches!(
            check_certificate(&bad, &gens),
            Err(RewriteError::UnknownGenerator { step: 1, index: 5, count: 2 })
        ));
    }

    #[test]
    fn empty_certificate_requires_equal_endpoints() {
        let (x, y, _, gens) = setup();
        let ok = DerivationCertificate::identity(mono(&[(x, 1)]));
        assert!(verify_certificate(&ok, &gens));
        let bad = DerivationCertificate {
            start: mono(&[(x, 1)]),
            steps: vec![],
            end: mono(&[(y, 1)]),
        };
        assert!(!verify_certificate(&bad, &gens));
    }

    #[test]
    fn bounded_closure_reaches_example_results() {
        let (x, y, _, gens) = setup();
        let bounds = SearchBounds {
            max_degree: 8,
            max_steps: 8,
            max_visited: 10_000,
        };
        let set = ideal_res_bounded(&mono(&[(x, 3), (y, 1)]), &gens, &bounds).unwrap();
        assert!(set.contains(&mono(&[(y, 1)])));
        assert!(set.contains(&mono(&[(x, 2)])));
        // Every recorded monomial carries a replayable certificate.
        for m in set.monomials() {
            let cert = set.certificate_to(m).unwrap();
            assert!(verify_certificate(&cert, &gens), "bad certificate to {m:?}");
            assert_eq!(&cert.end, m);
        }
        // The degree bound cuts the upward spiral, so the closure is partial.
        assert!(set.truncated());
    }

    #[test]
    fn zero_step_budget_returns_singleton() {
        let (x, y, _, gens) = setup();
        let bounds = SearchBounds {
            max_degree: 100,
            max_steps: 0,
            max_visited: 10_000,
        };
        let alpha = mono(&[(x, 3), (y, 1)]);
        let set = ideal_res_bounded(&alpha, &gens, &bounds).unwrap();
        assert_eq!(set.len(), 1);
        assert!(set.contains(&alpha));
        assert!(set.truncated());
        assert_eq!(set.certificate_to(&alpha).unwrap().len(), 0);
    }

    #[test]
    fn isolated_monomial_is_a_complete_singleton() {
        let (x, y, z, _) = setup();
        // x^2 + y alone: neither side divides z, so z has no neighbors.
        let gens = GeneratorSet::new([Polynomial::from_terms([
            mono(&[(x, 2)]),
            mono(&[(y, 1)]),
        ])]);
        let bounds = SearchBounds {
            max_degree: 10,
            max_steps: 10,
            max_visited: 100,
        };
        let set = ideal_res_bounded(&Monomial::var(z), &gens, &bounds).unwrap();
        assert_eq!(set.len(), 1);
        assert!(!set.truncated());
    }

    fn lex_y_below_x() -> MonomialOrder {
        // Three variables x, y, z with x most significant, then y, then z.
        let asc = [VarId::new(2), VarId::new(1), VarId::new(0)];
        MonomialOrder::new_ranked(OrderKind::Lex, &asc).unwrap()
    }

    #[test]
    fn residue_search_finds_smaller_monomial() {
        let (x, y, _, gens) = setup();
        let order = lex_y_below_x();
        let bounds = SearchBounds {
            max_degree: 10,
            max_steps: 10,
            max_visited: 100_000,
        };
        let g = mono(&[(x, 3), (y, 1)]);
        let outcome = min_residue_search(&g, &gens, &order, &bounds).unwrap();
        let (m, cert) = outcome.found.expect("a smaller monomial is reachable");
        // Breadth-first: the depth-1 successor x^2 is found before y.
        assert_eq!(m, mono(&[(x, 2)]));
        assert_eq!(cert.start, g);
        assert_eq!(cert.end, m);
        assert!(verify_certificate(&cert, &gens));
        assert_eq!(order.compare(&m, &g), std::cmp::Ordering::Less);
    }

    #[test]
    fn residue_search_reports_no_witness_below_minimum() {
        let (_, y, _, gens) = setup();
        let order = lex_y_below_x();
        let bounds = SearchBounds {
            max_degree: 8,
            max_steps: 6,
            max_visited: 50_000,
        };
        // Only the unit monomial is below y, and y + 1 is not in the ideal.
        let outcome = min_residue_search(&mono(&[(y, 1)]), &gens, &order, &bounds).unwrap();
        assert!(outcome.found.is_none());
        assert!(outcome.truncated);
        assert!(outcome.visited >= 2);
    }
}
