//! Gröbner basis engine over GF(2) with binomial rewriting certificates.
//!
//! The crate is organized bottom-up:
//!
//! * [`ring`]: interned variables, monomials, and GF(2) polynomials
//!   (a polynomial is its set of monomials; addition is symmetric
//!   difference).
//! * [`order`]: admissible monomial orders (lex, deglex, degrevlex, and a
//!   weighted order with exact irrational-weight comparison), the induced
//!   polynomial order, and a runtime axiom checker.
//! * [`dominance`]: the divisibility-based dominance relation on monomials
//!   and polynomials, decided by bipartite matching.
//! * [`groebner`]: normal forms, S-polynomials, a budgeted Buchberger loop,
//!   basis reduction, and bounded residual-set enumeration.
//! * [`rewriting`]: one-step binomial rewriting, derivation certificates,
//!   bounded reachability, and search for order-smaller residues.
//! * [`family`]: a parameterized binomial generator family whose membership
//!   derivations require double-exponential degree, with constructive
//!   certificate builders and structural invariant checks.
//! * [`text`]: the line-oriented ideal-file and certificate formats.

pub mod dominance;
pub mod family;
pub mod groebner;
pub mod order;
pub mod rewriting;
pub mod ring;
pub mod text;
