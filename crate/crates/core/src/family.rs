//! A staged family of binomial ideals whose reduced Gröbner bases blow up
//! double-exponentially in the stage count.
//!
//! Stage `n` has `20n + 15` binomial generators over `28(n + 1) + 6`
//! variables, split into an unbarred block `P`, a mirrored barred block, and
//! seven coupling generators. The key quantity is the tower exponent
//! `e(n) = 2^(2^n)`: monomials `ell * c^m1 * barc^m2` with `m1 + m2 = e(n)`
//! all rewrite to the single variable `s`, and certificates for those
//! rewrites are constructed here explicitly, along with the height analyzer
//! that audits them and the order-specific blowup criteria.

use std::collections::HashSet;

use thiserror::Error;

use crate::groebner::{
    buchberger, reduce_basis, BudgetExceeded, GeneratorSet, GroebnerConfig, Resource,
};
use crate::order::{MonomialOrder, OrderKind};
use crate::rewriting::{
    binomial_sides, ideal_res_bounded, min_residue_search, DerivationCertificate, RewriteStep,
    SearchBounds, Side,
};
use crate::ring::{Monomial, Polynomial, VarId, VariableRegistry};

/// Largest stage for which a family instance can be generated.
pub const MAX_LEVEL: usize = 6;
/// Largest stage for which rewrite certificates can be built; the level-3
/// certificate already has 6989 steps and each further level squares the
/// tower exponent.
pub const MAX_CERT_LEVEL: usize = 3;
/// Default cap on materialized target-set sizes (admits the C set up to
/// stage 4 and the D set up to stage 2).
pub const DEFAULT_TARGET_CAP: usize = 65_537;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FamilyError {
    #[error(transparent)]
    Budget(#[from] BudgetExceeded),
    #[error("invalid target: exponents must sum to {expect}, got {got}")]
    InvalidTarget { got: u128, expect: u128 },
}

/// `2^(2^n)`, the blowup threshold at stage `n`.
pub fn tower_exponent(n: usize) -> Result<u128, BudgetExceeded> {
    if n > MAX_LEVEL {
        return Err(BudgetExceeded {
            resource: Resource::FamilyLevel,
            limit: MAX_LEVEL as u64,
            reached: n as u64,
        });
    }
    Ok(1u128 << (1u32 << n))
}

/// The six unindexed variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Globals {
    pub s: VarId,
    pub c: VarId,
    pub barc: VarId,
    pub ell: VarId,
    pub b: VarId,
    pub barb: VarId,
}

/// The per-stage variable tables of one side (unbarred or barred):
/// `s_i`, `f_i`, and the four-way tables `c_k`, `b_k`, `q_k`, each indexed
/// by stage `0..=n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SideVars {
    pub s: Vec<VarId>,
    pub f: Vec<VarId>,
    pub c: [Vec<VarId>; 4],
    pub b: [Vec<VarId>; 4],
    pub q: [Vec<VarId>; 4],
}

impl SideVars {
    /// `c_k` at `level`, with `k` in `1..=4`.
    pub fn c_at(&self, k: usize, level: usize) -> VarId {
        self.c[k - 1][level]
    }

    pub fn b_at(&self, k: usize, level: usize) -> VarId {
        self.b[k - 1][level]
    }

    pub fn q_at(&self, k: usize, level: usize) -> VarId {
        self.q[k - 1][level]
    }
}

/// Which table a variable belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Table {
    S,
    F,
    C(usize),
    B(usize),
    Q(usize),
}

/// Classification of a variable id within an instance's registry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarClass {
    /// One of the six globals, by position (s, c, barc, ell, b, barb).
    Global(usize),
    Indexed {
        barred: bool,
        table: Table,
        level: usize,
    },
}

/// One generated stage of the family: registry, variable tables, and the
/// generator lists `p` (unbarred), `pbar` (barred), `g` (coupling), and
/// their concatenation `f`.
#[derive(Debug, Clone)]
pub struct FamilyInstance {
    pub n: usize,
    pub registry: VariableRegistry,
    pub globals: Globals,
    pub unbarred: SideVars,
    pub barred: SideVars,
    pub p: GeneratorSet,
    pub pbar: GeneratorSet,
    pub g: GeneratorSet,
    pub f: GeneratorSet,
}

fn intern_side(reg: &mut VariableRegistry, n: usize, bar: &str) -> SideVars {
    let each = |reg: &mut VariableRegistry, prefix: String| -> Vec<VarId> {
        (0..=n).map(|i| reg.intern(&format!("{prefix}{i}"))).collect()
    };
    let s = each(reg, format!("{bar}s"));
    let f = each(reg, format!("{bar}f"));
    let table = |reg: &mut VariableRegistry, letter: &str| -> [Vec<VarId>; 4] {
        [1, 2, 3, 4].map(|k| {
            (0..=n)
                .map(|i| reg.intern(&format!("{bar}{letter}{k}_{i}")))
                .collect()
        })
    };
    let c = table(reg, "c");
    let b = table(reg, "b");
    let q = table(reg, "q");
    SideVars { s, f, c, b, q }
}

fn mono(factors: &[(VarId, u64)]) -> Monomial {
    Monomial::from_factors(factors.iter().copied())
}

fn binom(a: &[(VarId, u64)], b: &[(VarId, u64)]) -> Polynomial {
    Polynomial::from_terms([mono(a), mono(b)])
}

/// The staged generators of one side: 4 base binomials, then 10 per stage.
fn side_generators(v: &SideVars, n: usize) -> Vec<Polynomial> {
    let mut out = Vec::with_capacity(4 + 10 * n);
    for i in 1..=4 {
        out.push(binom(
            &[(v.b_at(i, 0), 2), (v.c_at(i, 0), 1), (v.f[0], 1)],
            &[(v.c_at(i, 0), 1), (v.s[0], 1)],
        ));
    }
    for m in 1..=n {
        let p = m - 1;
        out.push(binom(
            &[(v.q_at(1, m), 1), (v.c_at(1, p), 1), (v.s[p], 1)],
            &[(v.s[m], 1)],
        ));
        out.push(binom(
            &[(v.q_at(2, m), 1), (v.c_at(2, p), 1), (v.s[p], 1)],
            &[(v.q_at(1, m), 1), (v.b_at(1, p), 1), (v.c_at(1, p), 1), (v.f[p], 1)],
        ));
        out.push(binom(
            &[(v.q_at(3, m), 1), (v.c_at(3, p), 1), (v.f[p], 1)],
            &[(v.q_at(2, m), 1), (v.c_at(2, p), 1), (v.f[p], 1)],
        ));
        out.push(binom(
            &[(v.q_at(3, m), 1), (v.b_at(1, p), 1), (v.c_at(3, p), 1), (v.s[p], 1)],
            &[(v.q_at(2, m), 1), (v.b_at(4, p), 1), (v.c_at(2, p), 1), (v.s[p], 1)],
        ));
        out.push(binom(
            &[(v.q_at(4, m), 1), (v.b_at(4, p), 1), (v.c_at(4, p), 1), (v.f[p], 1)],
            &[(v.q_at(3, m), 1), (v.c_at(3, p), 1), (v.s[p], 1)],
        ));
        out.push(binom(
            &[(v.q_at(4, m), 1), (v.c_at(4, p), 1), (v.s[p], 1)],
            &[(v.f[m], 1)],
        ));
        for i in 1..=4 {
            out.push(binom(
                &[
                    (v.q_at(2, m), 1),
                    (v.b_at(3, p), 1),
                    (v.b_at(i, m), 1),
                    (v.c_at(i, m), 1),
                    (v.f[p], 1),
                ],
                &[(v.q_at(2, m), 1), (v.b_at(2, p), 1), (v.c_at(i, m), 1), (v.f[p], 1)],
            ));
        }
    }
    out
}

/// The seven coupling generators tying the two sides together at stage `n`.
fn coupling_generators(g: &Globals, un: &SideVars, bar: &SideVars, n: usize) -> Vec<Polynomial> {
    vec![
        binom(
            &[(un.b_at(4, n), 1), (g.ell, 1), (g.b, 1)],
            &[(g.ell, 1), (g.c, 1)],
        ),
        binom(
            &[(un.b_at(4, n), 1), (g.ell, 1), (g.barb, 1)],
            &[(g.ell, 1), (g.barc, 1)],
        ),
        binom(&[(un.c_at(4, n), 1), (un.f[n], 1)], &[(g.ell, 1)]),
        binom(
            &[(bar.c_at(4, n), 1), (bar.f[n], 1)],
            &[(un.c_at(4, n), 1), (un.s[n], 1)],
        ),
        binom(
            &[(bar.b_at(4, n), 1), (un.c_at(4, n), 1), (un.s[n], 1)],
            &[(un.c_at(4, n), 1), (un.s[n], 1), (g.b, 1)],
        ),
        binom(
            &[(bar.b_at(4, n), 1), (un.c_at(4, n), 1), (un.s[n], 1)],
            &[(un.c_at(4, n), 1), (un.s[n], 1), (g.barb, 1)],
        ),
        binom(&[(bar.c_at(4, n), 1), (bar.s[n], 1)], &[(g.s, 1)]),
    ]
}

/// Generate stage `n` of the family.
pub fn generate_family(n: usize) -> Result<FamilyInstance, BudgetExceeded> {
    if n > MAX_LEVEL {
        return Err(BudgetExceeded {
            resource: Resource::FamilyLevel,
            limit: MAX_LEVEL as u64,
            reached: n as u64,
        });
    }
    let mut registry = VariableRegistry::new();
    let globals = Globals {
        s: registry.intern("s"),
        c: registry.intern("c"),
        barc: registry.intern("barc"),
        ell: registry.intern("ell"),
        b: registry.intern("b"),
        barb: registry.intern("barb"),
    };
    let unbarred = intern_side(&mut registry, n, "");
    let barred = intern_side(&mut registry, n, "bar");
    assert_eq!(registry.len(), 28 * (n + 1) + 6);

    let p_list = side_generators(&unbarred, n);
    let pbar_list = side_generators(&barred, n);
    let g_list = coupling_generators(&globals, &unbarred, &barred, n);
    let all: Vec<Polynomial> = p_list
        .iter()
        .chain(pbar_list.iter())
        .chain(g_list.iter())
        .cloned()
        .collect();
    let p = GeneratorSet::new(p_list);
    let pbar = GeneratorSet::new(pbar_list);
    let g = GeneratorSet::new(g_list);
    let f = GeneratorSet::new(all);
    assert_eq!(p.len(), 4 + 10 * n);
    assert_eq!(pbar.len(), 4 + 10 * n);
    assert_eq!(g.len(), 7);
    assert_eq!(f.len(), 20 * n + 15);
    Ok(FamilyInstance {
        n,
        registry,
        globals,
        unbarred,
        barred,
        p,
        pbar,
        g,
        f,
    })
}

impl FamilyInstance {
    /// Index of a coupling generator (0..7) within the concatenated list.
    pub fn coupling_index(&self, j: usize) -> usize {
        assert!(j < 7);
        2 * self.p.len() + j
    }

    /// Classify a variable of this instance's registry.
    pub fn var_class(&self, v: VarId) -> VarClass {
        let idx = v.index();
        if idx < 6 {
            return VarClass::Global(idx);
        }
        let stride = self.n + 1;
        let off = idx - 6;
        let barred = off >= 14 * stride;
        let within = off % (14 * stride);
        let group = within / stride;
        let level = within % stride;
        let table = match group {
            0 => Table::S,
            1 => Table::F,
            2..=5 => Table::C(group - 1),
            6..=9 => Table::B(group - 5),
            _ => Table::Q(group - 9),
        };
        VarClass::Indexed {
            barred,
            table,
            level,
        }
    }
}

/// The blowup target monomials at stage `n`:
/// `c`: all `ell * c^m1 * barc^m2` with `m1 + m2 = e(n)`;
/// `d`: all `ell^j * c^m1 * barc^m2` with `j <= 1` and `j + m1 + m2 <= e(n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetSets {
    pub c: Vec<Monomial>,
    pub d: Vec<Monomial>,
}

/// Lazily enumerate the `c` target set, highest `c`-exponent first.
pub fn c_targets(
    inst: &FamilyInstance,
) -> Result<impl Iterator<Item = Monomial> + '_, BudgetExceeded> {
    let e = exponent_fitting_u64(inst)?;
    let g = inst.globals;
    Ok((0..=e).map(move |m2| mono(&[(g.ell, 1), (g.c, e - m2), (g.barc, m2)])))
}

/// Lazily enumerate the `d` target set.
pub fn d_targets(
    inst: &FamilyInstance,
) -> Result<impl Iterator<Item = Monomial> + '_, BudgetExceeded> {
    let e = exponent_fitting_u64(inst)?;
    let g = inst.globals;
    Ok((0u64..=1).flat_map(move |j| {
        (0..=e - j).flat_map(move |m1| {
            (0..=e - j - m1).map(move |m2| mono(&[(g.ell, j), (g.c, m1), (g.barc, m2)]))
        })
    }))
}

fn exponent_fitting_u64(inst: &FamilyInstance) -> Result<u64, BudgetExceeded> {
    let e = tower_exponent(inst.n)?;
    u64::try_from(e).map_err(|_| BudgetExceeded {
        resource: Resource::TargetSetSize,
        limit: u64::MAX,
        reached: u64::MAX,
    })
}

/// Materialize both target sets, refusing if either would exceed `cap`.
pub fn target_sets(inst: &FamilyInstance, cap: usize) -> Result<TargetSets, BudgetExceeded> {
    let e = tower_exponent(inst.n)?;
    let c_size = e + 1;
    // |d| = T(e) + T(e - 1) where T(k) counts pairs with m1 + m2 <= k.
    let tri = |k: u128| (k + 1) * (k + 2) / 2;
    let d_size = tri(e) + tri(e - 1);
    for size in [c_size, d_size] {
        if size > cap as u128 {
            return Err(BudgetExceeded {
                resource: Resource::TargetSetSize,
                limit: cap as u64,
                reached: u64::try_from(size).unwrap_or(u64::MAX),
            });
        }
    }
    let c: Vec<Monomial> = c_targets(inst)?.collect();
    let d: Vec<Monomial> = d_targets(inst)?.collect();
    assert_eq!(c.len() as u128, c_size);
    assert_eq!(d.len() as u128, d_size);
    Ok(TargetSets { c, d })
}

/// The stage lex order: ranks follow the interning order, which places the
/// globals `s, c, barc, ell, b, barb` lowest and the barred `q4` table
/// highest.
pub fn lex_variable_order(inst: &FamilyInstance) -> Vec<VarId> {
    inst.registry.vars().collect()
}

/// The stage weight order: 1-based prime indices in interning order, so the
/// globals get the six smallest weights in the required relative order and
/// every indexed variable outweighs them all.
pub fn weight_map(inst: &FamilyInstance) -> MonomialOrder {
    let assignment: Vec<(VarId, u64)> = inst.registry.vars().zip(1..).collect();
    MonomialOrder::weighted(&assignment).expect("consecutive indices are valid weights")
}

/// The family's monomial order of the given kind (ranked kinds reuse the
/// stage lex ranks; `Weighted` uses the stage weight map).
pub fn family_order(inst: &FamilyInstance, kind: OrderKind) -> MonomialOrder {
    match kind {
        OrderKind::Weighted => weight_map(inst),
        k => MonomialOrder::default_ranked(k, inst.registry.len())
            .expect("interning ranks form a permutation"),
    }
}

/// Incrementally built rewrite chain with self-checking step application.
struct ChainBuilder<'a> {
    gens: &'a [Polynomial],
    start: Monomial,
    current: Monomial,
    steps: Vec<RewriteStep>,
}

impl<'a> ChainBuilder<'a> {
    fn new(gens: &'a [Polynomial], start: Monomial) -> Self {
        ChainBuilder {
            gens,
            current: start.clone(),
            start,
            steps: Vec::new(),
        }
    }

    /// Rewrite the current monomial across generator `gen_index`, whose
    /// `matched` side (given literally) must divide the current monomial.
    fn apply(&mut self, gen_index: usize, matched: &Monomial) {
        let (lo, hi) =
            binomial_sides(&self.gens[gen_index], gen_index).expect("family generators are binomials");
        let (from_side, other) = if *matched == lo {
            (Side::Lo, hi)
        } else {
            assert_eq!(*matched, hi, "matched term is not a side of the generator");
            (Side::Hi, lo)
        };
        let multiplier = self
            .current
            .checked_div(matched)
            .expect("matched side must divide the current monomial");
        self.current = multiplier.mul(&other);
        self.steps.push(RewriteStep {
            gen_index,
            multiplier,
            from_side,
        });
    }

    /// Replay a whole certificate inside the current context: the entry
    /// endpoint must divide the current monomial and the quotient rides
    /// along as an extra multiplier on every step. `offset` shifts the
    /// generator indices (for splicing a side-local chain into the combined
    /// list), and `reverse` plays the chain backwards.
    fn splice(&mut self, cert: &DerivationCertificate, reverse: bool, offset: usize) {
        let (entry, exit) = if reverse {
            (&cert.end, &cert.start)
        } else {
            (&cert.start, &cert.end)
        };
        let context = self
            .current
            .checked_div(entry)
            .expect("splice entry must divide the current monomial");
        let forward: Box<dyn Iterator<Item = RewriteStep>> = if reverse {
            Box::new(cert.steps.iter().rev().map(|s| RewriteStep {
                gen_index: s.gen_index,
                multiplier: s.multiplier.clone(),
                from_side: s.from_side.flipped(),
            }))
        } else {
            Box::new(cert.steps.iter().cloned())
        };
        for step in forward {
            self.steps.push(RewriteStep {
                gen_index: step.gen_index + offset,
                multiplier: step.multiplier.mul(&context),
                from_side: step.from_side,
            });
        }
        self.current = exit.mul(&context);
    }

    fn finish(self) -> DerivationCertificate {
        DerivationCertificate {
            start: self.start,
            steps: self.steps,
            end: self.current,
        }
    }
}

fn p_base(m: usize) -> usize {
    4 + (m - 1) * 10
}

/// Index within a side's generator list of staged type `t` (2..=7) at stage m.
fn t_index(m: usize, t: usize) -> usize {
    debug_assert!((2..=7).contains(&t));
    p_base(m) + (t - 2)
}

fn t8_index(m: usize, i: usize) -> usize {
    debug_assert!((1..=4).contains(&i));
    p_base(m) + 6 + (i - 1)
}

fn mayr_level_zero(gens: &[Polynomial], v: &SideVars, i: usize) -> DerivationCertificate {
    let start = mono(&[(v.c_at(i, 0), 1), (v.s[0], 1)]);
    let mut cb = ChainBuilder::new(gens, start.clone());
    cb.apply(i - 1, &start);
    cb.finish()
}

/// Build the stage-`m` chain for table `i`: from `c_im * s_m` up to
/// `b_im^(e(m)) * c_im * f_m`, splicing all four stage-`(m-1)` chains.
fn mayr_level(
    gens: &[Polynomial],
    v: &SideVars,
    m: usize,
    i: usize,
    prev: &[DerivationCertificate; 4],
    e_prev: u64,
) -> DerivationCertificate {
    let p = m - 1;
    let start = mono(&[(v.c_at(i, m), 1), (v.s[m], 1)]);
    let mut cb = ChainBuilder::new(gens, start);
    cb.apply(t_index(m, 2), &mono(&[(v.s[m], 1)]));
    cb.splice(&prev[0], false, 0);
    cb.apply(
        t_index(m, 3),
        &mono(&[
            (v.q_at(1, m), 1),
            (v.b_at(1, p), 1),
            (v.c_at(1, p), 1),
            (v.f[p], 1),
        ]),
    );
    let b2_side = mono(&[
        (v.q_at(2, m), 1),
        (v.b_at(2, p), 1),
        (v.c_at(i, m), 1),
        (v.f[p], 1),
    ]);
    for round in 1..=e_prev {
        cb.splice(&prev[1], false, 0);
        for _ in 0..e_prev {
            cb.apply(t8_index(m, i), &b2_side);
        }
        cb.apply(
            t_index(m, 4),
            &mono(&[(v.q_at(2, m), 1), (v.c_at(2, p), 1), (v.f[p], 1)]),
        );
        cb.splice(&prev[2], true, 0);
        if round < e_prev {
            cb.apply(
                t_index(m, 5),
                &mono(&[
                    (v.q_at(3, m), 1),
                    (v.b_at(1, p), 1),
                    (v.c_at(3, p), 1),
                    (v.s[p], 1),
                ]),
            );
        } else {
            cb.apply(
                t_index(m, 6),
                &mono(&[(v.q_at(3, m), 1), (v.c_at(3, p), 1), (v.s[p], 1)]),
            );
        }
    }
    cb.splice(&prev[3], true, 0);
    cb.apply(
        t_index(m, 7),
        &mono(&[(v.q_at(4, m), 1), (v.c_at(4, p), 1), (v.s[p], 1)]),
    );
    cb.finish()
}

/// Build the chain certifying `c_im * s_m ~ b_im^(e(m)) * c_im * f_m` over
/// one side's generators (indices are local to that side's list).
pub fn build_mayr_certificate(
    inst: &FamilyInstance,
    m: usize,
    i: usize,
    barred: bool,
) -> Result<DerivationCertificate, BudgetExceeded> {
    assert!((1..=4).contains(&i), "table index must be in 1..=4");
    assert!(m <= inst.n, "chain stage cannot exceed the instance stage");
    if m > MAX_CERT_LEVEL {
        return Err(BudgetExceeded {
            resource: Resource::CertificateDepth,
            limit: MAX_CERT_LEVEL as u64,
            reached: m as u64,
        });
    }
    let (gens, vars) = if barred {
        (inst.pbar.gens(), &inst.barred)
    } else {
        (inst.p.gens(), &inst.unbarred)
    };
    let mut level: [DerivationCertificate; 4] =
        [1, 2, 3, 4].map(|j| mayr_level_zero(gens, vars, j));
    for lvl in 1..=m {
        let e_prev = u64::try_from(tower_exponent(lvl - 1)?).expect("small at buildable stages");
        level = [1, 2, 3, 4].map(|j| mayr_level(gens, vars, lvl, j, &level, e_prev));
    }
    let cert = level[i - 1].clone();
    let e_m = u64::try_from(tower_exponent(m)?).expect("small at buildable stages");
    debug_assert_eq!(
        cert.end,
        mono(&[(vars.b_at(i, m), e_m), (vars.c_at(i, m), 1), (vars.f[m], 1)])
    );
    Ok(cert)
}

/// Build the certificate `ell * c^m1 * barc^m2 ~ s` over the full generator
/// list, with `m1 + m2 = e(n)`. Indices refer to the concatenated list.
pub fn build_target_certificate(
    inst: &FamilyInstance,
    m1: u64,
    m2: u64,
) -> Result<DerivationCertificate, FamilyError> {
    let e = tower_exponent(inst.n)?;
    if u128::from(m1) + u128::from(m2) != e {
        return Err(FamilyError::InvalidTarget {
            got: u128::from(m1) + u128::from(m2),
            expect: e,
        });
    }
    let n = inst.n;
    let unbarred_chain = build_mayr_certificate(inst, n, 4, false)?;
    let barred_chain = build_mayr_certificate(inst, n, 4, true)?;
    let g = inst.globals;
    let un = &inst.unbarred;
    let bar = &inst.barred;
    let goff = inst.coupling_index(0);

    // Build upward from s, then hand back the reversal.
    let mut cb = ChainBuilder::new(inst.f.gens(), Monomial::var(g.s));
    cb.apply(goff + 6, &mono(&[(g.s, 1)]));
    cb.splice(&barred_chain, false, inst.p.len());
    cb.apply(goff + 3, &mono(&[(bar.c_at(4, n), 1), (bar.f[n], 1)]));
    let barred_pump = mono(&[(bar.b_at(4, n), 1), (un.c_at(4, n), 1), (un.s[n], 1)]);
    for _ in 0..m1 {
        cb.apply(goff + 4, &barred_pump);
    }
    for _ in 0..m2 {
        cb.apply(goff + 5, &barred_pump);
    }
    cb.splice(&unbarred_chain, false, 0);
    cb.apply(goff + 2, &mono(&[(un.c_at(4, n), 1), (un.f[n], 1)]));
    let unbarred_pump_b = mono(&[(un.b_at(4, n), 1), (g.ell, 1), (g.b, 1)]);
    let unbarred_pump_barb = mono(&[(un.b_at(4, n), 1), (g.ell, 1), (g.barb, 1)]);
    for _ in 0..m1 {
        cb.apply(goff, &unbarred_pump_b);
    }
    for _ in 0..m2 {
        cb.apply(goff + 1, &unbarred_pump_barb);
    }
    let cert = cb.finish();
    debug_assert_eq!(cert.end, mono(&[(g.ell, 1), (g.c, m1), (g.barc, m2)]));
    Ok(cert.reversed())
}

/// The stage of a monomial: the smallest level at which some unbarred
/// `c`-table variable divides it, if any.
pub fn height(inst: &FamilyInstance, m: &Monomial) -> Option<usize> {
    (0..=inst.n).find(|&i| (1..=4).any(|k| m.exponent(inst.unbarred.c_at(k, i)) > 0))
}

/// Properties audited along a chain by [`check_height_invariants`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeightViolation {
    /// A monomial has no height (no unbarred `c`-table variable).
    Undefined,
    /// Consecutive monomials differ in height by more than one.
    Jump,
    /// Some level between the height and the top carries zero or multiple
    /// `c`-table variables.
    CUniqueness,
    /// Some level strictly above the height (up to the top) carries zero or
    /// multiple `q`-table variables, or one appears at or below the height.
    QUniqueness,
    /// The `s`/`f` pair at the height level is not exactly one variable of
    /// exponent one, or an `s`/`f` variable appears at another level.
    SfExclusivity,
    /// A recorded step does not replay against the unbarred generators.
    Replay,
}

/// Heights along a replayed chain plus any audited-property violations,
/// indexed by monomial position (or step index for `Jump`/`Replay`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightReport {
    pub heights: Vec<Option<usize>>,
    pub violations: Vec<(usize, HeightViolation)>,
}

impl HeightReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn audit_monomial(
    inst: &FamilyInstance,
    m: &Monomial,
    pos: usize,
    heights: &mut Vec<Option<usize>>,
    violations: &mut Vec<(usize, HeightViolation)>,
) {
    let h = height(inst, m);
    heights.push(h);
    let Some(h) = h else {
        violations.push((pos, HeightViolation::Undefined));
        return;
    };
    let un = &inst.unbarred;
    let top = (0..=inst.n)
        .rev()
        .find(|&lvl| {
            m.exponent(un.s[lvl]) > 0
                || m.exponent(un.f[lvl]) > 0
                || (1..=4).any(|k| {
                    m.exponent(un.c_at(k, lvl)) > 0
                        || m.exponent(un.b_at(k, lvl)) > 0
                        || m.exponent(un.q_at(k, lvl)) > 0
                })
        })
        .expect("a monomial with a height has staged variables");
    for lvl in 0..=inst.n {
        let c_count = (1..=4).filter(|&k| m.exponent(un.c_at(k, lvl)) > 0).count();
        let expect_c = usize::from(lvl >= h && lvl <= top);
        if c_count != expect_c {
            violations.push((pos, HeightViolation::CUniqueness));
        }
        let q_count = (1..=4).filter(|&k| m.exponent(un.q_at(k, lvl)) > 0).count();
        let expect_q = usize::from(lvl > h && lvl <= top);
        if q_count != expect_q {
            violations.push((pos, HeightViolation::QUniqueness));
        }
        let s_exp = m.exponent(un.s[lvl]);
        let f_exp = m.exponent(un.f[lvl]);
        let ok = if lvl == h {
            (s_exp == 1 && f_exp == 0) || (s_exp == 0 && f_exp == 1)
        } else {
            s_exp == 0 && f_exp == 0
        };
        if !ok {
            violations.push((pos, HeightViolation::SfExclusivity));
        }
    }
}

/// Replay a chain against the unbarred staged generators and audit the
/// height discipline of every monomial and step along it.
pub fn check_height_invariants(inst: &FamilyInstance, cert: &DerivationCertificate) -> HeightReport {
    let mut heights = Vec::with_capacity(cert.len() + 1);
    let mut violations = Vec::new();
    let mut current = cert.start.clone();
    audit_monomial(inst, &current, 0, &mut heights, &mut violations);
    for (idx, step) in cert.steps.iter().enumerate() {
        match crate::rewriting::apply_step(&current, step, &inst.p, idx) {
            Ok(next) => current = next,
            Err(_) => {
                violations.push((idx, HeightViolation::Replay));
                break;
            }
        }
        audit_monomial(inst, &current, idx + 1, &mut heights, &mut violations);
        if let (Some(a), Some(b)) = (heights[idx], heights[idx + 1]) {
            if a.abs_diff(b) > 1 {
                violations.push((idx, HeightViolation::Jump));
            }
        }
    }
    HeightReport {
        heights,
        violations,
    }
}

/// First blowup criterion: the single variable `s` sits strictly below
/// every `c`-set target under the order.
pub fn check_targets_above_s(inst: &FamilyInstance, order: &MonomialOrder) -> bool {
    let s = Monomial::var(inst.globals.s);
    match c_targets(inst) {
        Ok(mut it) => it.all(|alpha| order.compare(&s, &alpha) == std::cmp::Ordering::Less),
        Err(_) => false,
    }
}

/// Outcome of the bounded second-criterion sweep over the `d` target set.
#[derive(Debug, Clone)]
pub struct ResidueReport {
    pub targets: usize,
    /// Targets from which something strictly smaller was reached, with the
    /// smaller monomial. Expected empty.
    pub violators: Vec<(Monomial, Monomial)>,
    pub any_truncated: bool,
    pub visited_total: usize,
}

impl ResidueReport {
    pub fn passed(&self) -> bool {
        self.violators.is_empty()
    }
}

/// Second blowup criterion, bounded: from every `d`-set target, search the
/// reachable monomials for anything strictly smaller under the order.
pub fn check_no_smaller_residues(
    inst: &FamilyInstance,
    order: &MonomialOrder,
    bounds: &SearchBounds,
) -> Result<ResidueReport, FamilyError> {
    let targets = target_sets(inst, DEFAULT_TARGET_CAP)?.d;
    let mut report = ResidueReport {
        targets: targets.len(),
        violators: Vec::new(),
        any_truncated: false,
        visited_total: 0,
    };
    for g in &targets {
        let outcome = min_residue_search(g, &inst.f, order, bounds)
            .expect("family generators are binomials");
        if let Some((m, _)) = outcome.found {
            report.violators.push((g.clone(), m));
        }
        report.any_truncated |= outcome.truncated;
        report.visited_total += outcome.visited;
    }
    Ok(report)
}

/// Bounded reachability facts for one `d`-set target.
#[derive(Debug, Clone)]
pub struct ResidueEvidence {
    pub target: Monomial,
    pub set_size: usize,
    pub truncated: bool,
    /// If `ell` does not divide the target, nothing rewrites at all.
    pub ell_free_singleton: bool,
    /// No reachable monomial is divisible by `c4_n * s_n`.
    pub no_c4s_divisible: bool,
    /// The only reachable monomial supported on `{ell, c, barc}` with
    /// `ell`-exponent one is the target itself.
    pub only_target_in_ell_shape: bool,
    /// Every other reachable monomial has strictly larger degree.
    pub all_larger_degree: bool,
}

impl ResidueEvidence {
    pub fn passed(&self) -> bool {
        self.ell_free_singleton
            && self.no_c4s_divisible
            && self.only_target_in_ell_shape
            && self.all_larger_degree
    }
}

/// Audit the bounded reachable set of one target monomial.
pub fn residue_evidence(
    inst: &FamilyInstance,
    target: &Monomial,
    bounds: &SearchBounds,
) -> ResidueEvidence {
    let set = ideal_res_bounded(target, &inst.f, bounds).expect("family generators are binomials");
    let g = inst.globals;
    let c4s = mono(&[(inst.unbarred.c_at(4, inst.n), 1), (inst.unbarred.s[inst.n], 1)]);
    let ell_free = target.exponent(g.ell) == 0;
    let mut evidence = ResidueEvidence {
        target: target.clone(),
        set_size: set.len(),
        truncated: set.truncated(),
        ell_free_singleton: !ell_free || (set.len() == 1 && !set.truncated()),
        no_c4s_divisible: true,
        only_target_in_ell_shape: true,
        all_larger_degree: true,
    };
    for m in set.monomials() {
        if c4s.divides(m) {
            evidence.no_c4s_divisible = false;
        }
        if m != target {
            let ell_shape = m.exponent(g.ell) == 1
                && m.support().all(|v| v == g.ell || v == g.c || v == g.barc);
            if ell_shape {
                evidence.only_target_in_ell_shape = false;
            }
            if m.degree() <= target.degree() {
                evidence.all_larger_degree = false;
            }
        }
    }
    evidence
}

/// Report of the stage-`n` blowup check under one order: the reduced basis
/// exists within budget, contains every `c`-set target among its head
/// terms, and has at least `e(n)` elements of degree at least `e(n)`.
#[derive(Debug, Clone)]
pub struct BlowupReport {
    pub n: usize,
    pub order_name: String,
    pub basis_size: usize,
    pub c_targets_in_heads: bool,
    pub high_degree_count: usize,
    pub threshold: u128,
    pub passed: bool,
}

/// Compute the reduced basis of stage `n` under the given order kind and
/// check the blowup facts against the tower exponent.
pub fn verify_blowup(
    n: usize,
    kind: OrderKind,
    config: &GroebnerConfig,
) -> Result<BlowupReport, FamilyError> {
    let inst = generate_family(n)?;
    let order = family_order(&inst, kind);
    let gb = buchberger(&inst.f, &order, config)?;
    let reduced = reduce_basis(&gb, &order);
    let e = tower_exponent(n)?;
    let heads: HashSet<Monomial> = reduced.head_terms().into_iter().cloned().collect();
    let c_targets_in_heads = c_targets(&inst)?.all(|alpha| heads.contains(&alpha));
    let high_degree_count = reduced
        .gens()
        .iter()
        .filter(|p| u128::from(p.degree().unwrap_or(0)) >= e)
        .count();
    let basis_size = reduced.len();
    let passed =
        c_targets_in_heads && high_degree_count as u128 >= e && basis_size as u128 >= e;
    Ok(BlowupReport {
        n,
        order_name: order.name().to_string(),
        basis_size,
        c_targets_in_heads,
        high_degree_count,
        threshold: e,
        passed,
    })
}
