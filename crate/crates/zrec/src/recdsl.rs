//! Text format for recurrence systems.
//!
//! A file is a list of clauses, each defining `x[i]` in terms of strictly
//! earlier values plus a constant, guarded by the rows it applies to:
//!
//! ```text
//! mod 7;                                    # optional prime field
//! x[i] = x[i-1] - x[i-2] for i % 2 == 0;    # residue clause
//! x[i] = 2*x[i-1] + 1/3 for i % 2 == 1;
//! middle {
//!     x[i] = 0 for i == 0;                  # explicit-row override
//! }
//! ```
//!
//! Residue clauses must cover every index class exactly once. `i == n`
//! overrides are only allowed inside a `middle { ... }` block, where they
//! shadow the residue clause for that single row. Comments run from `#` to
//! the end of the line. The formal grammar lives in `docs/recdsl.ebnf`.

use std::collections::BTreeMap;

use num_integer::Integer;
use thiserror::Error;

use crate::recmat::{RecurrenceMatrix, RowPattern};
use crate::scalar::{is_prime, FieldKind, Scalar};

#[derive(Debug, Clone, Error, PartialEq)]
pub enum DslError {
    #[error("line {line}, column {col}: {message}")]
    Syntax { line: usize, col: usize, message: String },
    #[error("line {line}: x[i] cannot appear on the right-hand side")]
    SelfReference { line: usize },
    #[error("line {line}: x[i+{ahead}] points ahead of the row being defined")]
    ForwardReference { line: usize, ahead: i64 },
    #[error("no clause covers index class {0}")]
    CoverageGap(i64),
    #[error("more than one clause covers index {0}")]
    CoverageOverlap(i64),
    #[error("line {line}: guard modulus must be positive")]
    ZeroModulus { line: usize },
    #[error("field error: {0}")]
    FieldMismatch(String),
    #[error("system has no textual form: {0}")]
    Unrepresentable(String),
}

/// Eventually periodic scalar sequence over the integers, stored the same
/// way as matrix rows: periodic tails pinned to absolute residues around an
/// explicit middle block.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicSequence {
    field: FieldKind,
    left: Vec<Scalar>,
    anchor: i64,
    middle: Vec<Scalar>,
    right: Vec<Scalar>,
}

impl PeriodicSequence {
    pub fn from_parts(
        field: FieldKind,
        left: Vec<Scalar>,
        anchor: i64,
        middle: Vec<Scalar>,
        right: Vec<Scalar>,
    ) -> Self {
        assert!(!left.is_empty() && !right.is_empty(), "tails must be nonempty");
        for v in left.iter().chain(middle.iter()).chain(right.iter()) {
            assert_eq!(v.field(), field, "mixed fields in one sequence");
        }
        PeriodicSequence { field, left, anchor, middle, right }
    }

    pub fn constant(field: FieldKind, v: Scalar) -> Self {
        Self::from_parts(field, vec![v.clone()], 0, Vec::new(), vec![v])
    }

    pub fn zero(field: FieldKind) -> Self {
        Self::constant(field, Scalar::zero(field))
    }

    pub fn field(&self) -> FieldKind {
        self.field
    }

    pub fn anchor_left(&self) -> i64 {
        self.anchor
    }

    pub fn anchor_right(&self) -> i64 {
        self.anchor + self.middle.len() as i64 - 1
    }

    pub fn left_period(&self) -> i64 {
        self.left.len() as i64
    }

    pub fn right_period(&self) -> i64 {
        self.right.len() as i64
    }

    pub fn left_values(&self) -> &[Scalar] {
        &self.left
    }

    pub fn middle_values(&self) -> &[Scalar] {
        &self.middle
    }

    pub fn right_values(&self) -> &[Scalar] {
        &self.right
    }

    pub fn value(&self, i: i64) -> &Scalar {
        if i < self.anchor {
            &self.left[residue(i, self.left_period())]
        } else if i <= self.anchor_right() {
            &self.middle[(i - self.anchor) as usize]
        } else {
            &self.right[residue(i, self.right_period())]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.left.iter().chain(self.middle.iter()).chain(self.right.iter()).all(Scalar::is_zero)
    }

    /// Minimal periods, middle absorbed into the tails, anchor 0 when the
    /// whole sequence is purely periodic.
    pub fn canonical(&self) -> PeriodicSequence {
        let left = minimize_period(&self.left);
        let right = minimize_period(&self.right);
        let mut anchor = self.anchor;
        let mut middle = self.middle.clone();
        while let Some(last) = middle.last() {
            let r = anchor + middle.len() as i64 - 1;
            if *last == right[residue(r, right.len() as i64)] {
                middle.pop();
            } else {
                break;
            }
        }
        while let Some(first) = middle.first() {
            if *first == left[residue(anchor, left.len() as i64)] {
                middle.remove(0);
                anchor += 1;
            } else {
                break;
            }
        }
        if middle.is_empty() {
            if left == right {
                return PeriodicSequence::from_parts(self.field, left.clone(), 0, vec![], right);
            }
            // Distinct tails meeting at a bare seam: push the seam down past
            // rows where both tails agree, so equal sequences normalize to
            // the same anchor. Bounded: some residue class must disagree.
            let lcm = (left.len() as i64).lcm(&(right.len() as i64));
            for _ in 0..lcm {
                let below = anchor - 1;
                if left[residue(below, left.len() as i64)]
                    == right[residue(below, right.len() as i64)]
                {
                    anchor = below;
                } else {
                    break;
                }
            }
        }
        PeriodicSequence::from_parts(self.field, left, anchor, middle, right)
    }

    /// Equality as functions on the integers, independent of representation.
    pub fn semantic_eq(&self, other: &PeriodicSequence) -> bool {
        if self.field != other.field {
            return false;
        }
        let lcm = self
            .left_period()
            .lcm(&self.right_period())
            .lcm(&other.left_period())
            .lcm(&other.right_period());
        let lo = self.anchor.min(other.anchor) - lcm;
        let hi = self.anchor_right().max(other.anchor_right()) + lcm;
        (lo..=hi).all(|i| self.value(i) == other.value(i))
    }
}

fn minimize_period(values: &[Scalar]) -> Vec<Scalar> {
    let p = values.len() as i64;
    'outer: for q in 1..=p {
        if p % q != 0 {
            continue;
        }
        for r in 0..p {
            if values[r as usize] != values[(r % q) as usize] {
                continue 'outer;
            }
        }
        return values[..q as usize].to_vec();
    }
    unreachable!("q = p always works");
}

/// A recurrence system: constraint matrix plus right-hand side.
#[derive(Debug, Clone)]
pub struct SystemSpec {
    pub matrix: RecurrenceMatrix,
    pub rhs: PeriodicSequence,
    /// Byte range of the source text this was parsed from, if any.
    pub source_span: Option<(usize, usize)>,
}

impl SystemSpec {
    pub fn new(matrix: RecurrenceMatrix, rhs: PeriodicSequence) -> Self {
        assert_eq!(matrix.field(), rhs.field(), "matrix and rhs field differ");
        SystemSpec { matrix, rhs, source_span: None }
    }

    pub fn homogeneous(matrix: RecurrenceMatrix) -> Self {
        let rhs = PeriodicSequence::zero(matrix.field());
        Self::new(matrix, rhs)
    }
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(i64),
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Assign,
    EqEq,
    Percent,
    Semi,
    Plus,
    Minus,
    Star,
    Slash,
}

impl std::fmt::Display for Tok {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LBrack => write!(f, "`[`"),
            Tok::RBrack => write!(f, "`]`"),
            Tok::LBrace => write!(f, "`{{`"),
            Tok::RBrace => write!(f, "`}}`"),
            Tok::Assign => write!(f, "`=`"),
            Tok::EqEq => write!(f, "`==`"),
            Tok::Percent => write!(f, "`%`"),
            Tok::Semi => write!(f, "`;`"),
            Tok::Plus => write!(f, "`+`"),
            Tok::Minus => write!(f, "`-`"),
            Tok::Star => write!(f, "`*`"),
            Tok::Slash => write!(f, "`/`"),
        }
    }
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Lexed>, DslError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut it = text.chars().peekable();
    while let Some(&ch) = it.peek() {
        let (tl, tc) = (line, col);
        let mut push = |tok: Tok| out.push(Lexed { tok, line: tl, col: tc });
        match ch {
            '\n' => {
                it.next();
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => {
                it.next();
                col += 1;
            }
            '#' => {
                while let Some(&c) = it.peek() {
                    if c == '\n' {
                        break;
                    }
                    it.next();
                    col += 1;
                }
            }
            '[' | ']' | '{' | '}' | '%' | ';' | '+' | '-' | '*' | '/' => {
                it.next();
                col += 1;
                push(match ch {
                    '[' => Tok::LBrack,
                    ']' => Tok::RBrack,
                    '{' => Tok::LBrace,
                    '}' => Tok::RBrace,
                    '%' => Tok::Percent,
                    ';' => Tok::Semi,
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    _ => Tok::Slash,
                });
            }
            '=' => {
                it.next();
                col += 1;
                if it.peek() == Some(&'=') {
                    it.next();
                    col += 1;
                    push(Tok::EqEq);
                } else {
                    push(Tok::Assign);
                }
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut s = String::new();
                while let Some(&c) = it.peek() {
                    if c.is_ascii_alphanumeric() || c == '_' {
                        s.push(c);
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push(Tok::Ident(s));
            }
            c if c.is_ascii_digit() => {
                let mut n: i64 = 0;
                while let Some(&c) = it.peek() {
                    if let Some(d) = c.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|m| m.checked_add(d as i64))
                            .ok_or(DslError::Syntax {
                                line: tl,
                                col: tc,
                                message: "integer literal too large".into(),
                            })?;
                        it.next();
                        col += 1;
                    } else {
                        break;
                    }
                }
                push(Tok::Int(n));
            }
            c => {
                return Err(DslError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{c}`"),
                })
            }
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

#[derive(Debug, Clone, PartialEq)]
enum Guard {
    All,
    Mod { m: i64, r: i64 },
    At(i64),
}

#[derive(Debug, Clone)]
struct Clause {
    line: usize,
    guard: Guard,
    /// Right-hand-side coefficients keyed by delay `d >= 1`.
    terms: BTreeMap<i64, Scalar>,
    constant: Scalar,
    in_middle: bool,
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    end_line: usize,
}

impl Parser {
    fn new(toks: Vec<Lexed>) -> Self {
        let end_line = toks.last().map(|l| l.line).unwrap_or(1);
        Parser { toks, pos: 0, end_line }
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|l| &l.tok)
    }

    fn peek_is_ident(&self, kw: &str) -> bool {
        matches!(self.peek(), Some(Tok::Ident(s)) if s == kw)
    }

    fn here(&self) -> (usize, usize) {
        self.toks
            .get(self.pos)
            .map(|l| (l.line, l.col))
            .unwrap_or((self.end_line, 1))
    }

    fn err(&self, message: impl Into<String>) -> DslError {
        let (line, col) = self.here();
        DslError::Syntax { line, col, message: message.into() }
    }

    fn bump(&mut self) -> Option<Lexed> {
        let t = self.toks.get(self.pos).cloned();
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, tok: Tok) -> Result<Lexed, DslError> {
        match self.peek() {
            Some(t) if *t == tok => Ok(self.bump().unwrap()),
            Some(t) => Err(self.err(format!("expected {tok}, found {t}"))),
            None => Err(self.err(format!("expected {tok}, found end of input"))),
        }
    }

    fn expect_ident(&mut self, kw: &str) -> Result<Lexed, DslError> {
        if self.peek_is_ident(kw) {
            Ok(self.bump().unwrap())
        } else {
            Err(self.err(format!("expected `{kw}`")))
        }
    }

    fn parse_uint(&mut self) -> Result<(i64, usize), DslError> {
        match self.peek() {
            Some(Tok::Int(_)) => {
                let lx = self.bump().unwrap();
                match lx.tok {
                    Tok::Int(n) => Ok((n, lx.line)),
                    _ => unreachable!(),
                }
            }
            _ => Err(self.err("expected an integer")),
        }
    }

    fn parse_int(&mut self) -> Result<(i64, usize), DslError> {
        if self.peek() == Some(&Tok::Minus) {
            self.bump();
            let (n, line) = self.parse_uint()?;
            Ok((-n, line))
        } else {
            self.parse_uint()
        }
    }

    /// `x [ i - d ]`, returning the delay `d >= 1`.
    fn parse_atom(&mut self) -> Result<i64, DslError> {
        let lx = self.expect_ident("x")?;
        self.expect(Tok::LBrack)?;
        self.expect_ident("i")?;
        match self.peek() {
            Some(Tok::RBrack) => Err(DslError::SelfReference { line: lx.line }),
            Some(Tok::Minus) => {
                self.bump();
                let (d, _) = self.parse_uint()?;
                self.expect(Tok::RBrack)?;
                if d == 0 {
                    Err(DslError::SelfReference { line: lx.line })
                } else {
                    Ok(d)
                }
            }
            Some(Tok::Plus) => {
                self.bump();
                let (d, _) = self.parse_uint()?;
                self.expect(Tok::RBrack)?;
                if d == 0 {
                    Err(DslError::SelfReference { line: lx.line })
                } else {
                    Err(DslError::ForwardReference { line: lx.line, ahead: d })
                }
            }
            _ => Err(self.err("expected `]`, `-`, or `+` after `i`")),
        }
    }

    fn parse_literal(&mut self, field: FieldKind, negate: bool) -> Result<Scalar, DslError> {
        let (num, _) = self.parse_uint()?;
        let den = if self.peek() == Some(&Tok::Slash) {
            self.bump();
            let (d, _) = self.parse_uint()?;
            if d == 0 {
                return Err(self.err("zero denominator"));
            }
            d
        } else {
            1
        };
        let v = Scalar::from_fraction(field, num, den)
            .map_err(|e| DslError::FieldMismatch(e.to_string()))?;
        Ok(if negate { v.neg() } else { v })
    }

    fn parse_expr(
        &mut self,
        field: FieldKind,
        clause_line: usize,
    ) -> Result<(BTreeMap<i64, Scalar>, Scalar), DslError> {
        let mut terms: BTreeMap<i64, Scalar> = BTreeMap::new();
        let mut constant = Scalar::zero(field);
        let mut first = true;
        loop {
            let negate = if first {
                match self.peek() {
                    Some(Tok::Minus) => {
                        self.bump();
                        true
                    }
                    Some(Tok::Plus) => {
                        self.bump();
                        false
                    }
                    _ => false,
                }
            } else {
                match self.peek() {
                    Some(Tok::Ident(s)) if s == "for" => break,
                    Some(Tok::Minus) => {
                        self.bump();
                        true
                    }
                    Some(Tok::Plus) => {
                        self.bump();
                        false
                    }
                    _ => return Err(self.err("expected `+`, `-`, or `for`")),
                }
            };
            match self.peek() {
                Some(Tok::Int(_)) => {
                    let v = self.parse_literal(field, negate)?;
                    if self.peek() == Some(&Tok::Star) {
                        self.bump();
                        let d = self.parse_atom()?;
                        add_term(&mut terms, d, v, clause_line)?;
                    } else {
                        constant = constant.add(&v);
                    }
                }
                Some(Tok::Ident(s)) if s == "x" => {
                    let d = self.parse_atom()?;
                    let one = Scalar::one(field);
                    let v = if negate { one.neg() } else { one };
                    add_term(&mut terms, d, v, clause_line)?;
                }
                _ => return Err(self.err("expected a coefficient or `x[...]`")),
            }
            first = false;
        }
        Ok((terms, constant))
    }

    fn parse_clause(&mut self, field: FieldKind, in_middle: bool) -> Result<Clause, DslError> {
        let head = self.expect_ident("x")?;
        let line = head.line;
        self.expect(Tok::LBrack)?;
        self.expect_ident("i")?;
        self.expect(Tok::RBrack)?;
        self.expect(Tok::Assign)?;
        let (terms, constant) = self.parse_expr(field, line)?;
        self.expect_ident("for")?;
        let guard = if self.peek_is_ident("all") {
            self.bump();
            self.expect_ident("i")?;
            Guard::All
        } else {
            self.expect_ident("i")?;
            match self.peek() {
                Some(Tok::Percent) => {
                    self.bump();
                    let (m, mline) = self.parse_int()?;
                    if m <= 0 {
                        return Err(DslError::ZeroModulus { line: mline });
                    }
                    self.expect(Tok::EqEq)?;
                    let (r, _) = self.parse_int()?;
                    Guard::Mod { m, r: r.rem_euclid(m) }
                }
                Some(Tok::EqEq) => {
                    self.bump();
                    let (n, _) = self.parse_int()?;
                    Guard::At(n)
                }
                _ => return Err(self.err("expected `%` or `==` in the guard")),
            }
        };
        self.expect(Tok::Semi)?;
        Ok(Clause { line, guard, terms, constant, in_middle })
    }
}

fn add_term(
    terms: &mut BTreeMap<i64, Scalar>,
    d: i64,
    v: Scalar,
    line: usize,
) -> Result<(), DslError> {
    if v.is_zero() {
        return Ok(());
    }
    if terms.contains_key(&d) {
        return Err(DslError::Syntax {
            line,
            col: 1,
            message: format!("delay {d} appears twice in one clause"),
        });
    }
    terms.insert(d, v);
    Ok(())
}

/// Parse a system from its textual form.
pub fn parse(text: &str) -> Result<SystemSpec, DslError> {
    let toks = lex(text)?;
    let mut p = Parser::new(toks);
    let mut field = FieldKind::Rational;
    if p.peek_is_ident("mod") {
        p.bump();
        let (m, mline) = p.parse_int()?;
        if m <= 0 {
            return Err(DslError::ZeroModulus { line: mline });
        }
        if !is_prime(m as u64) {
            return Err(DslError::FieldMismatch(format!("modulus {m} is not prime")));
        }
        field = FieldKind::Prime(m as u64);
        p.expect(Tok::Semi)?;
    }
    let mut clauses: Vec<Clause> = Vec::new();
    loop {
        match p.peek() {
            None => break,
            Some(Tok::Ident(s)) if s == "middle" => {
                p.bump();
                p.expect(Tok::LBrace)?;
                while p.peek() != Some(&Tok::RBrace) {
                    if p.peek().is_none() {
                        return Err(p.err("unclosed `middle` block"));
                    }
                    let c = p.parse_clause(field, true)?;
                    if !matches!(c.guard, Guard::At(_)) {
                        return Err(DslError::Syntax {
                            line: c.line,
                            col: 1,
                            message: "clauses inside `middle` need an `i == n` guard".into(),
                        });
                    }
                    clauses.push(c);
                }
                p.expect(Tok::RBrace)?;
            }
            Some(Tok::Ident(s)) if s == "x" => {
                clauses.push(p.parse_clause(field, false)?);
            }
            Some(_) => return Err(p.err("expected a clause or a `middle` block")),
        }
    }
    assemble(field, &clauses, Some((0, text.len())))
}

fn pattern_of(field: FieldKind, c: &Clause) -> RowPattern {
    let mut pairs = vec![(0, Scalar::one(field))];
    for (&d, coeff) in &c.terms {
        pairs.push((d, coeff.neg()));
    }
    RowPattern::new(field, pairs).expect("clause terms validated during parsing")
}

fn assemble(
    field: FieldKind,
    clauses: &[Clause],
    source_span: Option<(usize, usize)>,
) -> Result<SystemSpec, DslError> {
    let residue_clauses: Vec<&Clause> =
        clauses.iter().filter(|c| !matches!(c.guard, Guard::At(_))).collect();
    let at_clauses: Vec<&Clause> =
        clauses.iter().filter(|c| matches!(c.guard, Guard::At(_))).collect();
    if residue_clauses.is_empty() {
        return Err(DslError::CoverageGap(0));
    }
    let mut big_m = 1i64;
    for c in &residue_clauses {
        if let Guard::Mod { m, .. } = c.guard {
            big_m = big_m.lcm(&m);
        }
    }
    let mut owner: Vec<Option<usize>> = vec![None; big_m as usize];
    for (idx, c) in residue_clauses.iter().enumerate() {
        let (m, r) = match c.guard {
            Guard::All => (1, 0),
            Guard::Mod { m, r } => (m, r),
            Guard::At(_) => unreachable!(),
        };
        for class in 0..big_m {
            if class.rem_euclid(m) == r {
                if owner[class as usize].is_some() {
                    return Err(DslError::CoverageOverlap(class));
                }
                owner[class as usize] = Some(idx);
            }
        }
    }
    for (class, o) in owner.iter().enumerate() {
        if o.is_none() {
            return Err(DslError::CoverageGap(class as i64));
        }
    }
    // Residue clauses already define every row, so a bare `i == n` clause
    // outside `middle` always collides with one of them.
    for c in &at_clauses {
        if !c.in_middle {
            let Guard::At(n) = c.guard else { unreachable!() };
            return Err(DslError::CoverageOverlap(n));
        }
    }
    let mut patterns = Vec::with_capacity(big_m as usize);
    let mut consts = Vec::with_capacity(big_m as usize);
    for class in 0..big_m {
        let c = residue_clauses[owner[class as usize].unwrap()];
        patterns.push(pattern_of(field, c));
        consts.push(c.constant.clone());
    }
    let mut overrides: BTreeMap<i64, &Clause> = BTreeMap::new();
    for c in &at_clauses {
        let Guard::At(n) = c.guard else { unreachable!() };
        if overrides.insert(n, c).is_some() {
            return Err(DslError::CoverageOverlap(n));
        }
    }
    let (matrix, rhs) = if overrides.is_empty() {
        (
            RecurrenceMatrix::purely_periodic(field, patterns.clone()).expect("patterns valid"),
            PeriodicSequence::from_parts(field, consts.clone(), 0, vec![], consts),
        )
    } else {
        let lo = *overrides.keys().next().unwrap();
        let hi = *overrides.keys().next_back().unwrap();
        let mut mid_pat = Vec::new();
        let mut mid_val = Vec::new();
        for n in lo..=hi {
            match overrides.get(&n) {
                Some(c) => {
                    mid_pat.push(pattern_of(field, c));
                    mid_val.push(c.constant.clone());
                }
                None => {
                    mid_pat.push(patterns[residue(n, big_m)].clone());
                    mid_val.push(consts[residue(n, big_m)].clone());
                }
            }
        }
        (
            RecurrenceMatrix::new(field, patterns.clone(), lo, mid_pat, patterns)
                .expect("patterns valid"),
            PeriodicSequence::from_parts(field, consts.clone(), lo, mid_val, consts),
        )
    };
    Ok(SystemSpec {
        matrix: matrix.canonical(),
        rhs: rhs.canonical(),
        source_span,
    })
}

/// Render a system back to text. Only systems whose two tails follow the
/// same periodic rule (after canonicalization) are representable: guards
/// speak about residue classes of the whole index line, so a matrix with
/// genuinely different left and right behavior has no clause form.
pub fn format(spec: &SystemSpec) -> Result<String, DslError> {
    let c = spec.matrix.canonical();
    let rhs = spec.rhs.canonical();
    if c.left_patterns() != c.right_patterns() {
        return Err(DslError::Unrepresentable(
            "left and right periodic tails differ".into(),
        ));
    }
    if rhs.left_values() != rhs.right_values() {
        return Err(DslError::Unrepresentable(
            "left and right right-hand-side tails differ".into(),
        ));
    }
    let field = c.field();
    let pm = c.left_period();
    let ps = rhs.left_period();
    let m = pm.lcm(&ps);
    let mut out = String::new();
    if let FieldKind::Prime(p) = field {
        out.push_str(&format!("mod {p};\n"));
    }
    for r in 0..m {
        let pat = &c.left_patterns()[residue(r, pm)];
        let konst = &rhs.left_values()[residue(r, ps)];
        out.push_str(&format!(
            "x[i] = {} for {};\n",
            expr_text(pat, konst),
            guard_text(m, r)
        ));
    }
    let mut mids: Vec<i64> = Vec::new();
    let lo = c.anchor_left().min(rhs.anchor_left());
    let hi = c.anchor_right().max(rhs.anchor_right());
    for n in lo..=hi {
        let pat_differs = *c.row(n) != c.left_patterns()[residue(n, pm)];
        let val_differs = *rhs.value(n) != rhs.left_values()[residue(n, ps)];
        if pat_differs || val_differs {
            mids.push(n);
        }
    }
    if !mids.is_empty() {
        out.push_str("middle {\n");
        for n in mids {
            out.push_str(&format!(
                "    x[i] = {} for i == {n};\n",
                expr_text(c.row(n), rhs.value(n))
            ));
        }
        out.push_str("}\n");
    }
    Ok(out)
}

fn guard_text(m: i64, r: i64) -> String {
    if m == 1 {
        "all i".into()
    } else {
        format!("i % {m} == {r}")
    }
}

fn expr_text(pat: &RowPattern, konst: &Scalar) -> String {
    // (sign, body) per term, delays ascending, constant last.
    let mut parts: Vec<(bool, String)> = Vec::new();
    for (d, coeff) in pat.iter() {
        if d == 0 {
            continue;
        }
        let lit = coeff.neg().to_literal();
        let (neg, abs) = match lit.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, lit),
        };
        let body = if abs == "1" {
            format!("x[i-{d}]")
        } else {
            format!("{abs}*x[i-{d}]")
        };
        parts.push((neg, body));
    }
    if !konst.is_zero() {
        let lit = konst.to_literal();
        match lit.strip_prefix('-') {
            Some(rest) => parts.push((true, rest.to_string())),
            None => parts.push((false, lit)),
        }
    }
    if parts.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in parts.iter().enumerate() {
        if i == 0 {
            if *neg {
                out.push('-');
            }
        } else {
            out.push_str(if *neg { " - " } else { " + " });
        }
        out.push_str(body);
    }
    out
}

fn residue(a: i64, p: i64) -> usize {
    a.rem_euclid(p) as usize
}
