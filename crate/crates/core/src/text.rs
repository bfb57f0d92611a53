//! Text formats: ideal files and derivation certificates.
//!
//! Ideal files are line-oriented: `#` starts a comment, an optional
//! `# vars: <names>` directive fixes the variable interning order (ascending
//! precedence), and every other non-blank line is one polynomial. Terms are
//! joined by `+`, factors by `*`, exponents written `var^exp`; `1` is the
//! empty monomial and `0` the zero polynomial. Parsing then formatting then
//! parsing is the identity on term sets.
//!
//! Certificates are also line-oriented: a `cert v1` header, a `start`
//! monomial, one `step <gen_index> <multiplier> <side>` line per rewrite
//! (side 0 = canonically smaller term, 1 = larger), and an `end` monomial.

use thiserror::Error;

use crate::order::MonomialOrder;
use crate::rewriting::{DerivationCertificate, RewriteStep, Side};
use crate::ring::{Monomial, Polynomial, VarId, VariableRegistry};

/// Syntax error with a 1-based line and character column.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

/// A parsed ideal file: the registry (ordered per any `# vars:` directive,
/// then first occurrence) and the generators in file order.
#[derive(Debug, Clone)]
pub struct IdealFile {
    pub registry: VariableRegistry,
    pub generators: Vec<Polynomial>,
}

struct LineParser<'r> {
    chars: Vec<char>,
    pos: usize,
    line_no: usize,
    reg: &'r mut VariableRegistry,
}

enum Line {
    Blank,
    Comment,
    Poly(Polynomial),
}

impl<'r> LineParser<'r> {
    fn new(line: &str, line_no: usize, reg: &'r mut VariableRegistry) -> Self {
        LineParser {
            chars: line.trim_end_matches('\r').chars().collect(),
            pos: 0,
            line_no,
            reg,
        }
    }

    fn err(&self, msg: impl Into<String>) -> ParseError {
        ParseError {
            line: self.line_no,
            col: self.pos + 1,
            msg: msg.into(),
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_whitespace()) {
            self.pos += 1;
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    fn expect_end(&mut self) -> Result<(), ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(()),
            Some(c) => Err(self.err(format!("unexpected character '{c}'"))),
        }
    }

    fn ident(&mut self) -> Result<String, ParseError> {
        match self.peek() {
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
            _ => return Err(self.err("expected an identifier")),
        }
        let mut name = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                name.push(c);
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(name)
    }

    fn number(&mut self) -> Result<u64, ParseError> {
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Err(self.err("expected a number"));
        }
        let mut value: u64 = 0;
        while let Some(c) = self.peek() {
            let Some(d) = c.to_digit(10) else { break };
            value = value
                .checked_mul(10)
                .and_then(|v| v.checked_add(u64::from(d)))
                .ok_or_else(|| self.err("number too large"))?;
            self.pos += 1;
        }
        Ok(value)
    }

    /// One factor: a variable with optional exponent, or the literal `1`.
    /// Returns None for the unit factor.
    fn factor(&mut self) -> Result<Option<(VarId, u64)>, ParseError> {
        match self.peek() {
            Some('1') => {
                self.pos += 1;
                match self.peek() {
                    Some(c) if c.is_ascii_alphanumeric() || c == '_' || c == '^' => {
                        Err(self.err(format!("unexpected character '{c}' after '1'")))
                    }
                    _ => Ok(None),
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == '_' => {
                let name = self.ident()?;
                let exp = if self.peek() == Some('^') {
                    self.pos += 1;
                    self.number()?
                } else {
                    1
                };
                Ok(Some((self.reg.intern(&name), exp)))
            }
            _ => Err(self.err("expected a variable or '1'")),
        }
    }

    /// One monomial: factors joined by `*`. Zero exponents drop out and
    /// repeated variables multiply.
    fn monomial(&mut self) -> Result<Monomial, ParseError> {
        let mut factors = Vec::new();
        loop {
            self.skip_ws();
            if let Some(f) = self.factor()? {
                if f.1 > 0 {
                    factors.push(f);
                }
            }
            self.skip_ws();
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok(Monomial::from_factors(factors))
    }

    /// A whole polynomial: terms joined by `+`, summed over GF(2). The
    /// literal `0` must stand alone.
    fn polynomial(&mut self) -> Result<Polynomial, ParseError> {
        self.skip_ws();
        if self.peek() == Some('0') {
            self.pos += 1;
            self.expect_end()
                .map_err(|_| self.err("'0' must stand alone"))?;
            return Ok(Polynomial::zero());
        }
        let mut terms = Vec::new();
        loop {
            terms.push(self.monomial()?);
            self.skip_ws();
            match self.peek() {
                None => break,
                Some('+') => {
                    self.pos += 1;
                }
                Some(c) => return Err(self.err(format!("expected '+' or end of line, found '{c}'"))),
            }
        }
        Ok(Polynomial::from_terms(terms))
    }

    /// Classify one ideal-file line, interning any `# vars:` directive names.
    fn ideal_line(&mut self) -> Result<Line, ParseError> {
        self.skip_ws();
        match self.peek() {
            None => Ok(Line::Blank),
            Some('#') => {
                self.pos += 1;
                self.skip_ws();
                let mark = self.pos;
                if self.ident().map(|w| w == "vars").unwrap_or(false) && self.peek() == Some(':') {
                    self.pos += 1;
                    loop {
                        self.skip_ws();
                        if self.at_end() {
                            break;
                        }
                        let name = self.ident()?;
                        self.reg.intern(&name);
                    }
                    Ok(Line::Comment)
                } else {
                    self.pos = mark;
                    Ok(Line::Comment)
                }
            }
            Some(_) => Ok(Line::Poly(self.polynomial()?)),
        }
    }
}

/// Parse a complete ideal file.
pub fn parse_ideal(text: &str) -> Result<IdealFile, ParseError> {
    let mut registry = VariableRegistry::new();
    let mut generators = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let mut p = LineParser::new(line, i + 1, &mut registry);
        if let Line::Poly(poly) = p.ideal_line()? {
            generators.push(poly);
        }
    }
    Ok(IdealFile {
        registry,
        generators,
    })
}

/// Parse one polynomial, interning new variables into `reg`.
pub fn parse_polynomial(reg: &mut VariableRegistry, text: &str) -> Result<Polynomial, ParseError> {
    let mut p = LineParser::new(text, 1, reg);
    let poly = p.polynomial()?;
    p.expect_end()?;
    Ok(poly)
}

/// Parse one monomial, interning new variables into `reg`.
pub fn parse_monomial(reg: &mut VariableRegistry, text: &str) -> Result<Monomial, ParseError> {
    let mut p = LineParser::new(text, 1, reg);
    p.skip_ws();
    let m = p.monomial()?;
    p.expect_end()?;
    Ok(m)
}

/// Format a monomial with factors in descending variable-id order.
pub fn format_monomial(reg: &VariableRegistry, m: &Monomial) -> String {
    if m.is_one() {
        return "1".to_string();
    }
    m.factors()
        .iter()
        .rev()
        .map(|(v, e)| {
            let name = reg.name(*v).expect("variable missing from registry");
            if *e == 1 {
                name.to_string()
            } else {
                format!("{name}^{e}")
            }
        })
        .collect::<Vec<_>>()
        .join("*")
}

fn join_terms<'a>(reg: &VariableRegistry, terms: impl Iterator<Item = &'a Monomial>) -> String {
    terms
        .map(|t| format_monomial(reg, t))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Format a polynomial with terms descending in the canonical order.
pub fn format_polynomial(reg: &VariableRegistry, p: &Polynomial) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    join_terms(reg, p.terms().rev())
}

/// Format a polynomial with terms descending under `order`.
pub fn format_polynomial_with(
    order: &MonomialOrder,
    reg: &VariableRegistry,
    p: &Polynomial,
) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    join_terms(reg, order.sorted_terms_desc(p).into_iter())
}

/// The `# vars:` directive naming every registered variable in id order.
pub fn vars_header(reg: &VariableRegistry) -> String {
    let names: Vec<&str> = reg
        .vars()
        .map(|v| reg.name(v).expect("registry iterates its own ids"))
        .collect();
    format!("# vars: {}", names.join(" "))
}

/// Format an ideal file: the vars header, then one canonically formatted
/// polynomial per line.
pub fn format_ideal(reg: &VariableRegistry, gens: &[Polynomial]) -> String {
    let mut out = vars_header(reg);
    out.push('\n');
    for g in gens {
        out.push_str(&format_polynomial(reg, g));
        out.push('\n');
    }
    out
}

/// Serialize a certificate in the line-oriented `cert v1` format.
pub fn format_certificate(reg: &VariableRegistry, cert: &DerivationCertificate) -> String {
    let mut out = String::from("cert v1\n");
    out.push_str(&format!("start {}\n", format_monomial(reg, &cert.start)));
    for step in &cert.steps {
        out.push_str(&format!(
            "step {} {} {}\n",
            step.gen_index,
            format_monomial(reg, &step.multiplier),
            step.from_side.index()
        ));
    }
    out.push_str(&format!("end {}\n", format_monomial(reg, &cert.end)));
    out
}

/// Parse a `cert v1` certificate, interning monomial variables into `reg`.
/// Blank lines and `#` comments are tolerated anywhere.
pub fn parse_certificate(
    reg: &mut VariableRegistry,
    text: &str,
) -> Result<DerivationCertificate, ParseError> {
    enum State {
        Header,
        Start,
        Steps,
        Done,
    }
    let mut state = State::Header;
    let mut start: Option<Monomial> = None;
    let mut steps: Vec<RewriteStep> = Vec::new();
    let mut end: Option<Monomial> = None;
    let mut last_line = 0;
    for (i, line) in text.lines().enumerate() {
        last_line = i + 1;
        let mut p = LineParser::new(line, i + 1, reg);
        p.skip_ws();
        if p.at_end() || p.peek() == Some('#') {
            continue;
        }
        match state {
            State::Header => {
                if p.ident()? != "cert" {
                    return Err(p.err("expected 'cert v1' header"));
                }
                p.skip_ws();
                let mark = p.pos;
                if p.ident()? != "v1" {
                    p.pos = mark;
                    return Err(p.err("unsupported certificate version"));
                }
                p.expect_end()?;
                state = State::Start;
            }
            State::Start => {
                if p.ident()? != "start" {
                    return Err(p.err("expected 'start <monomial>'"));
                }
                start = Some(p.monomial()?);
                p.expect_end()?;
                state = State::Steps;
            }
            State::Steps => {
                let mark = p.pos;
                match p.ident()?.as_str() {
                    "step" => {
                        p.skip_ws();
                        let gen_index = p.number()? as usize;
                        let multiplier = p.monomial()?;
                        p.skip_ws();
                        let side_pos = p.pos;
                        let side = match p.number()? {
                            s @ (0 | 1) => Side::from_index(s as usize).unwrap(),
                            _ => {
                                p.pos = side_pos;
                                return Err(p.err("side must be 0 or 1"));
                            }
                        };
                        p.expect_end()?;
                        steps.push(RewriteStep {
                            gen_index,
                            multiplier,
                            from_side: side,
                        });
                    }
                    "end" => {
                        end = Some(p.monomial()?);
                        p.expect_end()?;
                        state = State::Done;
                    }
                    _ => {
                        p.pos = mark;
                        return Err(p.err("expected 'step' or 'end'"));
                    }
                }
            }
            State::Done => {
                return Err(p.err("unexpected content after 'end'"));
            }
        }
    }
    match (state, start, end) {
        (State::Done, Some(start), Some(end)) => Ok(DerivationCertificate { start, steps, end }),
        _ => Err(ParseError {
            line: last_line + 1,
            col: 1,
            msg: "incomplete certificate: missing header, start, or end".to_string(),
        }),
    }
}
