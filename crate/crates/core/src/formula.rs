//! Formulas of the form: boolean combinations of quantifier-free conditions
//! over the ordered field and blocks
//!
//! ```text
//! ∃y₁…y₂ₙ [ P(y₁,y₂) ∧ … ∧ P(y₂ₙ₋₁,y₂ₙ) ∧ φ(x, y) ]
//! ```
//!
//! where `P` is membership in Γ and `φ` is quantifier-free. Text syntax is an
//! S-expression grammar:
//!
//! ```text
//! formula := qf | block | (not formula) | (and formula+) | (or formula+)
//! block   := (exists-gamma INT qf)
//! qf      := (= poly poly) | (< poly poly) | (<= poly poly)
//!          | (and qf+) | (or qf+) | (not qf)
//! poly    := RATIONAL | VAR | (+ poly+) | (* poly+) | (- poly poly) | (^ poly POSINT)
//! VAR     := x1, x2, … (free) | y1, y2, … (bound by the enclosing block)
//! ```
//!
//! Block `j`-th point coordinates are `y(2j-1), y(2j)`. Existentials over Γ
//! are searched in a coefficient box, so evaluation is three-valued: a block
//! is `True` with a witness or `Unknown` with the bound searched, never
//! `False`.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::fg::{BoxTable, Coords, GammaSpec};
use crate::group::Point;
use crate::num::{parse_rational, Rational};
use crate::poly::MultiPoly;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rel {
    Eq,
    Lt,
    Le,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Lt => "<",
            Rel::Le => "<=",
        }
    }
}

/// Quantifier-free formula. Polynomials share one variable layout: the free
/// variables `x1..xs` first, then (inside a block) `y1..y2n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Qf {
    Atom(Rel, MultiPoly, MultiPoly),
    And(Vec<Qf>),
    Or(Vec<Qf>),
    Not(Box<Qf>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub n: usize,
    /// Number of free variables; the body has arity `free + 2n`.
    pub free: usize,
    pub body: Qf,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Node {
    Qf(Qf),
    Block(Block),
    Not(Box<Node>),
    And(Vec<Node>),
    Or(Vec<Node>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Formula {
    pub arity: usize,
    pub root: Node,
}

impl Qf {
    /// A tautology, `0 = 0`.
    pub fn truth(arity: usize) -> Qf {
        Qf::Atom(Rel::Eq, MultiPoly::zero(arity), MultiPoly::zero(arity))
    }

    pub fn eval(&self, assignment: &[Rational]) -> Result<bool> {
        Ok(match self {
            Qf::Atom(rel, l, r) => {
                let d = l.eval(assignment)? - r.eval(assignment)?;
                match rel {
                    Rel::Eq => d.is_zero(),
                    Rel::Lt => d < Rational::zero(),
                    Rel::Le => d <= Rational::zero(),
                }
            }
            Qf::And(cs) => {
                for c in cs {
                    if !c.eval(assignment)? {
                        return Ok(false);
                    }
                }
                true
            }
            Qf::Or(cs) => {
                for c in cs {
                    if c.eval(assignment)? {
                        return Ok(true);
                    }
                }
                false
            }
            Qf::Not(c) => !c.eval(assignment)?,
        })
    }

    /// True iff variable `index` (1-based) occurs in some atom.
    pub fn uses_var(&self, index: usize) -> bool {
        match self {
            Qf::Atom(_, l, r) => l.uses_var(index) || r.uses_var(index),
            Qf::And(cs) | Qf::Or(cs) => cs.iter().any(|c| c.uses_var(index)),
            Qf::Not(c) => c.uses_var(index),
        }
    }

    fn render(&self, name: &dyn Fn(usize) -> String) -> String {
        match self {
            Qf::Atom(rel, l, r) => format!(
                "({} {} {})",
                rel.symbol(),
                l.to_sexpr_with(name),
                r.to_sexpr_with(name)
            ),
            Qf::And(cs) => list("and", cs.iter().map(|c| c.render(name))),
            Qf::Or(cs) => list("or", cs.iter().map(|c| c.render(name))),
            Qf::Not(c) => format!("(not {})", c.render(name)),
        }
    }
}

fn list(head: &str, items: impl Iterator<Item = String>) -> String {
    let items: Vec<String> = items.collect();
    format!("({head} {})", items.join(" "))
}

/// `eval_qf`: classical truth of a quantifier-free formula.
pub fn eval_qf(phi: &Qf, assignment: &[Rational]) -> Result<bool> {
    phi.eval(assignment)
}

impl Node {
    fn render(&self) -> String {
        match self {
            Node::Qf(q) => q.render(&|i| format!("x{i}")),
            Node::Block(b) => {
                let s = b.free;
                let name = move |i: usize| {
                    if i <= s {
                        format!("x{i}")
                    } else {
                        format!("y{}", i - s)
                    }
                };
                format!("(exists-gamma {} {})", b.n, b.body.render(&name))
            }
            Node::Not(c) => format!("(not {})", c.render()),
            Node::And(cs) => list("and", cs.iter().map(Node::render)),
            Node::Or(cs) => list("or", cs.iter().map(Node::render)),
        }
    }

    pub fn has_blocks(&self) -> bool {
        match self {
            Node::Qf(_) => false,
            Node::Block(_) => true,
            Node::Not(c) => c.has_blocks(),
            Node::And(cs) | Node::Or(cs) => cs.iter().any(Node::has_blocks),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.root.render())
    }
}

// ---------------------------------------------------------------------------
// Parsing

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Pos {
    line: usize,
    column: usize,
}

fn syntax(pos: Pos, message: impl Into<String>) -> Error {
    Error::Syntax {
        line: pos.line,
        column: pos.column,
        message: message.into(),
    }
}

#[derive(Debug)]
enum Sx {
    Atom(String, Pos),
    List(Vec<Sx>, Pos),
}

impl Sx {
    fn pos(&self) -> Pos {
        match self {
            Sx::Atom(_, p) | Sx::List(_, p) => *p,
        }
    }
}

fn read_sexprs(text: &str) -> Result<Vec<Sx>> {
    let mut stack: Vec<(Vec<Sx>, Pos)> = Vec::new();
    let mut top = Vec::new();
    let mut pos = Pos { line: 1, column: 1 };
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let here = pos;
        match c {
            '\n' => {
                chars.next();
                pos.line += 1;
                pos.column = 1;
            }
            c if c.is_whitespace() => {
                chars.next();
                pos.column += 1;
            }
            ';' => {
                while chars.peek().is_some_and(|&c| c != '\n') {
                    chars.next();
                }
            }
            '(' => {
                chars.next();
                pos.column += 1;
                stack.push((Vec::new(), here));
            }
            ')' => {
                chars.next();
                pos.column += 1;
                let (items, start) = stack.pop().ok_or_else(|| syntax(here, "unbalanced ')'"))?;
                let node = Sx::List(items, start);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => top.push(node),
                }
            }
            _ => {
                let mut word = String::new();
                while let Some(&c) = chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    word.push(c);
                    chars.next();
                    pos.column += 1;
                }
                let node = Sx::Atom(word, here);
                match stack.last_mut() {
                    Some((parent, _)) => parent.push(node),
                    None => top.push(node),
                }
            }
        }
    }
    if let Some((_, start)) = stack.pop() {
        return Err(syntax(start, "unclosed '('"));
    }
    Ok(top)
}

#[derive(Clone, Copy, Debug)]
enum Var {
    X(usize),
    Y(usize),
}

#[derive(Debug)]
enum RawPoly {
    Const(Rational),
    Var(Var),
    Add(Vec<RawPoly>),
    Mul(Vec<RawPoly>),
    Sub(Box<RawPoly>, Box<RawPoly>),
    Pow(Box<RawPoly>, u32),
}

#[derive(Debug)]
enum RawQf {
    Atom(Rel, RawPoly, RawPoly),
    And(Vec<RawQf>),
    Or(Vec<RawQf>),
    Not(Box<RawQf>),
}

#[derive(Debug)]
enum RawNode {
    Qf(RawQf),
    Block(usize, RawQf),
    Not(Box<RawNode>),
    And(Vec<RawNode>),
    Or(Vec<RawNode>),
}

/// `y` variables allowed in the current scope (`None` outside blocks).
type Scope = Option<usize>;

fn parse_var(word: &str, pos: Pos, scope: Scope) -> Result<Option<Var>> {
    let (kind, digits) = match word.split_at_checked(1) {
        Some((k @ ("x" | "y"), d)) if !d.is_empty() && d.bytes().all(|b| b.is_ascii_digit()) => {
            (k, d)
        }
        _ => return Ok(None),
    };
    let index: usize = digits
        .parse()
        .map_err(|_| syntax(pos, format!("bad variable {word}")))?;
    if index == 0 {
        return Err(syntax(
            pos,
            format!("variables are numbered from 1: {word}"),
        ));
    }
    if kind == "x" {
        return Ok(Some(Var::X(index)));
    }
    match scope {
        Some(limit) if index <= limit => Ok(Some(Var::Y(index))),
        Some(limit) => Err(syntax(
            pos,
            format!("unbound variable {word}: the block binds y1..y{limit}"),
        )),
        None => Err(syntax(
            pos,
            format!("unbound variable {word} outside exists-gamma"),
        )),
    }
}

fn parse_poly(sx: &Sx, scope: Scope) -> Result<RawPoly> {
    match sx {
        Sx::Atom(word, pos) => {
            if let Some(v) = parse_var(word, *pos, scope)? {
                return Ok(RawPoly::Var(v));
            }
            parse_rational(word)
                .map(RawPoly::Const)
                .map_err(|_| syntax(*pos, format!("expected a polynomial, found {word:?}")))
        }
        Sx::List(items, pos) => {
            let (head, args) = split_head(items, *pos)?;
            let polys = |args: &[Sx]| -> Result<Vec<RawPoly>> {
                args.iter().map(|a| parse_poly(a, scope)).collect()
            };
            match head {
                "+" | "*" if args.is_empty() => {
                    Err(syntax(*pos, format!("({head} ...) needs an argument")))
                }
                "+" => Ok(RawPoly::Add(polys(args)?)),
                "*" => Ok(RawPoly::Mul(polys(args)?)),
                "-" => {
                    let [a, b] = args else {
                        return Err(syntax(*pos, "(- ...) takes exactly two arguments"));
                    };
                    Ok(RawPoly::Sub(
                        Box::new(parse_poly(a, scope)?),
                        Box::new(parse_poly(b, scope)?),
                    ))
                }
                "^" => {
                    let [base, Sx::Atom(e, epos)] = args else {
                        return Err(syntax(*pos, "(^ poly POSINT) expected"));
                    };
                    let k: u32 = e.parse().ok().filter(|&k| k > 0).ok_or_else(|| {
                        syntax(*epos, format!("expected positive exponent, found {e:?}"))
                    })?;
                    Ok(RawPoly::Pow(Box::new(parse_poly(base, scope)?), k))
                }
                other => Err(syntax(
                    *pos,
                    format!("unknown polynomial operator {other:?}"),
                )),
            }
        }
    }
}

fn split_head(items: &[Sx], pos: Pos) -> Result<(&str, &[Sx])> {
    match items.split_first() {
        Some((Sx::Atom(h, _), rest)) => Ok((h.as_str(), rest)),
        Some((other, _)) => Err(syntax(other.pos(), "expected an operator")),
        None => Err(syntax(pos, "empty list")),
    }
}

fn parse_qf(sx: &Sx, scope: Scope) -> Result<RawQf> {
    let Sx::List(items, pos) = sx else {
        return Err(syntax(sx.pos(), "expected a condition"));
    };
    let (head, args) = split_head(items, *pos)?;
    match head {
        "=" | "<" | "<=" => {
            let [a, b] = args else {
                return Err(syntax(
                    *pos,
                    format!("({head} ...) takes exactly two polynomials"),
                ));
            };
            let rel = match head {
                "=" => Rel::Eq,
                "<" => Rel::Lt,
                _ => Rel::Le,
            };
            Ok(RawQf::Atom(
                rel,
                parse_poly(a, scope)?,
                parse_poly(b, scope)?,
            ))
        }
        "and" | "or" => {
            if args.is_empty() {
                return Err(syntax(*pos, format!("({head} ...) needs an argument")));
            }
            let cs = args
                .iter()
                .map(|a| parse_qf(a, scope))
                .collect::<Result<Vec<_>>>()?;
            Ok(if head == "and" {
                RawQf::And(cs)
            } else {
                RawQf::Or(cs)
            })
        }
        "not" => {
            let [a] = args else {
                return Err(syntax(*pos, "(not ...) takes exactly one argument"));
            };
            Ok(RawQf::Not(Box::new(parse_qf(a, scope)?)))
        }
        "exists-gamma" => Err(syntax(*pos, "exists-gamma cannot be nested in a condition")),
        other => Err(syntax(*pos, format!("unknown operator {other:?}"))),
    }
}

fn parse_node(sx: &Sx) -> Result<RawNode> {
    let Sx::List(items, pos) = sx else {
        return Err(syntax(sx.pos(), "expected a formula"));
    };
    let (head, args) = split_head(items, *pos)?;
    match head {
        "exists-gamma" => {
            let [Sx::Atom(n, npos), body] = args else {
                return Err(syntax(*pos, "expected (exists-gamma INT condition)"));
            };
            let n: usize = n.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
                syntax(
                    *npos,
                    format!("expected a positive point count, found {n:?}"),
                )
            })?;
            Ok(RawNode::Block(n, parse_qf(body, Some(2 * n))?))
        }
        "and" | "or" => {
            if args.is_empty() {
                return Err(syntax(*pos, format!("({head} ...) needs an argument")));
            }
            let cs = args.iter().map(parse_node).collect::<Result<Vec<_>>>()?;
            Ok(if head == "and" {
                RawNode::And(cs)
            } else {
                RawNode::Or(cs)
            })
        }
        "not" => {
            let [a] = args else {
                return Err(syntax(*pos, "(not ...) takes exactly one argument"));
            };
            Ok(RawNode::Not(Box::new(parse_node(a)?)))
        }
        _ => Ok(RawNode::Qf(parse_qf(sx, None)?)),
    }
}

fn max_x_poly(p: &RawPoly) -> usize {
    match p {
        RawPoly::Const(_) | RawPoly::Var(Var::Y(_)) => 0,
        RawPoly::Var(Var::X(i)) => *i,
        RawPoly::Add(ps) | RawPoly::Mul(ps) => ps.iter().map(max_x_poly).max().unwrap_or(0),
        RawPoly::Sub(a, b) => max_x_poly(a).max(max_x_poly(b)),
        RawPoly::Pow(a, _) => max_x_poly(a),
    }
}

fn max_x_qf(q: &RawQf) -> usize {
    match q {
        RawQf::Atom(_, a, b) => max_x_poly(a).max(max_x_poly(b)),
        RawQf::And(cs) | RawQf::Or(cs) => cs.iter().map(max_x_qf).max().unwrap_or(0),
        RawQf::Not(c) => max_x_qf(c),
    }
}

fn max_x_node(n: &RawNode) -> usize {
    match n {
        RawNode::Qf(q) | RawNode::Block(_, q) => max_x_qf(q),
        RawNode::Not(c) => max_x_node(c),
        RawNode::And(cs) | RawNode::Or(cs) => cs.iter().map(max_x_node).max().unwrap_or(0),
    }
}

fn lower_poly(p: &RawPoly, free: usize, arity: usize) -> MultiPoly {
    match p {
        RawPoly::Const(c) => MultiPoly::constant(arity, c.clone()),
        RawPoly::Var(Var::X(i)) => MultiPoly::var(arity, *i).expect("x index checked"),
        RawPoly::Var(Var::Y(j)) => MultiPoly::var(arity, free + j).expect("y index checked"),
        RawPoly::Add(ps) => ps
            .iter()
            .map(|q| lower_poly(q, free, arity))
            .fold(MultiPoly::zero(arity), |acc, q| &acc + &q),
        RawPoly::Mul(ps) => ps.iter().map(|q| lower_poly(q, free, arity)).fold(
            MultiPoly::constant(arity, Rational::from_integer(1.into())),
            |acc, q| &acc * &q,
        ),
        RawPoly::Sub(a, b) => &lower_poly(a, free, arity) - &lower_poly(b, free, arity),
        RawPoly::Pow(a, k) => lower_poly(a, free, arity).pow(*k),
    }
}

fn lower_qf(q: &RawQf, free: usize, arity: usize) -> Qf {
    match q {
        RawQf::Atom(rel, a, b) => {
            Qf::Atom(*rel, lower_poly(a, free, arity), lower_poly(b, free, arity))
        }
        RawQf::And(cs) => Qf::And(cs.iter().map(|c| lower_qf(c, free, arity)).collect()),
        RawQf::Or(cs) => Qf::Or(cs.iter().map(|c| lower_qf(c, free, arity)).collect()),
        RawQf::Not(c) => Qf::Not(Box::new(lower_qf(c, free, arity))),
    }
}

/// Lowers a raw tree. Connectives whose children are all quantifier-free
/// become quantifier-free themselves, so the tree has one canonical shape.
fn lower_node(n: &RawNode, free: usize) -> Node {
    match n {
        RawNode::Qf(q) => Node::Qf(lower_qf(q, free, free)),
        RawNode::Block(k, body) => Node::Block(Block {
            n: *k,
            free,
            body: lower_qf(body, free, free + 2 * k),
        }),
        RawNode::Not(c) => match lower_node(c, free) {
            Node::Qf(q) => Node::Qf(Qf::Not(Box::new(q))),
            other => Node::Not(Box::new(other)),
        },
        RawNode::And(cs) | RawNode::Or(cs) => {
            let kids: Vec<Node> = cs.iter().map(|c| lower_node(c, free)).collect();
            let is_and = matches!(n, RawNode::And(_));
            if kids.iter().all(|k| matches!(k, Node::Qf(_))) {
                let qs = kids
                    .into_iter()
                    .map(|k| match k {
                        Node::Qf(q) => q,
                        _ => unreachable!(),
                    })
                    .collect();
                Node::Qf(if is_and { Qf::And(qs) } else { Qf::Or(qs) })
            } else if is_and {
                Node::And(kids)
            } else {
                Node::Or(kids)
            }
        }
    }
}

fn single(text: &str) -> Result<Sx> {
    let mut top = read_sexprs(text)?;
    match top.len() {
        0 => Err(syntax(Pos { line: 1, column: 1 }, "empty input")),
        1 => Ok(top.pop().unwrap()),
        _ => Err(syntax(top[1].pos(), "trailing input after formula")),
    }
}

/// Parses a formula; its arity is the largest `x` index that occurs.
pub fn parse(text: &str) -> Result<Formula> {
    let raw = parse_node(&single(text)?)?;
    let arity = max_x_node(&raw);
    Ok(Formula {
        arity,
        root: lower_node(&raw, arity),
    })
}

/// Parses a formula against a declared number of free variables.
pub fn parse_with_arity(text: &str, arity: usize) -> Result<Formula> {
    let raw = parse_node(&single(text)?)?;
    let used = max_x_node(&raw);
    if used > arity {
        return Err(Error::input(format!(
            "formula uses x{used} but only {arity} free variables were declared"
        )));
    }
    Ok(Formula {
        arity,
        root: lower_node(&raw, arity),
    })
}

/// Parses a bare polynomial in `x1..x{arity}`.
pub fn parse_poly_text(text: &str, arity: usize) -> Result<MultiPoly> {
    let raw = parse_poly(&single(text)?, None)?;
    let used = max_x_poly(&raw);
    if used > arity {
        return Err(Error::input(format!(
            "polynomial uses x{used} but arity is {arity}"
        )));
    }
    Ok(lower_poly(&raw, arity, arity))
}

// ---------------------------------------------------------------------------
// Evaluation

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub coords: Vec<Coords>,
    pub points: Vec<Point>,
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self.points.iter().map(Point::to_string).collect();
        write!(f, "{}", pts.join(", "))
    }
}

/// Kleene three-valued verdict. `True` carries one witness tuple per block
/// that contributed to the verdict.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TriBool {
    True { witnesses: Vec<Witness> },
    False,
    Unknown { bound: u64 },
}

impl TriBool {
    pub fn is_true(&self) -> bool {
        matches!(self, TriBool::True { .. })
    }

    pub fn is_false(&self) -> bool {
        matches!(self, TriBool::False)
    }

    pub fn is_unknown(&self) -> bool {
        matches!(self, TriBool::Unknown { .. })
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            TriBool::True {
                witnesses: Vec::new(),
            }
        } else {
            TriBool::False
        }
    }

    pub fn not(self, bound: u64) -> Self {
        match self {
            TriBool::True { .. } => TriBool::False,
            TriBool::False => TriBool::from_bool(true),
            TriBool::Unknown { .. } => TriBool::Unknown { bound },
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            TriBool::True { .. } => "true",
            TriBool::False => "false",
            TriBool::Unknown { .. } => "unknown",
        }
    }
}

impl fmt::Display for TriBool {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TriBool::True { witnesses } if witnesses.is_empty() => write!(f, "true"),
            TriBool::True { witnesses } => {
                let w: Vec<String> = witnesses.iter().map(Witness::to_string).collect();
                write!(f, "true (witness: {})", w.join("; "))
            }
            TriBool::False => write!(f, "false"),
            TriBool::Unknown { bound } => write!(f, "unknown(bound={bound})"),
        }
    }
}

/// Evaluates formulas against Γ with one shared coefficient box.
pub struct Evaluator<'g> {
    gamma: &'g GammaSpec,
    table: BoxTable,
}

impl<'g> Evaluator<'g> {
    pub fn new(gamma: &'g GammaSpec, bound: u64) -> Self {
        Evaluator {
            gamma,
            table: gamma.box_table(bound),
        }
    }

    pub fn bound(&self) -> u64 {
        self.table.bound
    }

    pub fn gamma(&self) -> &GammaSpec {
        self.gamma
    }

    /// First tuple of the box (shortest-first) satisfying the block body, or
    /// `Unknown`. Tuples with the identity in a slot whose coordinates the
    /// body uses are skipped.
    pub fn eval_block(&self, block: &Block, x: &[Rational]) -> Result<TriBool> {
        if x.len() != block.free {
            return Err(Error::input(format!(
                "{} values supplied for {} free variables",
                x.len(),
                block.free
            )));
        }
        let slot_used: Vec<bool> = (0..block.n)
            .map(|j| {
                block.body.uses_var(block.free + 2 * j + 1)
                    || block.body.uses_var(block.free + 2 * j + 2)
            })
            .collect();
        let entries = self.table.entries();
        let mut assignment = x.to_vec();
        assignment.resize(block.free + 2 * block.n, Rational::zero());
        for tuple in self.table.tuples(block.n)? {
            let skip = tuple
                .iter()
                .zip(&slot_used)
                .any(|(&i, &used)| used && entries[i].1.is_identity());
            if skip {
                continue;
            }
            for (j, &i) in tuple.iter().enumerate() {
                let (px, py) = match entries[i].1.coords() {
                    Some((px, py)) => (px.clone(), py.clone()),
                    None => (Rational::zero(), Rational::zero()),
                };
                assignment[block.free + 2 * j] = px;
                assignment[block.free + 2 * j + 1] = py;
            }
            if block.body.eval(&assignment)? {
                return Ok(TriBool::True {
                    witnesses: vec![Witness {
                        coords: tuple.iter().map(|&i| entries[i].0.clone()).collect(),
                        points: tuple.iter().map(|&i| entries[i].1.clone()).collect(),
                    }],
                });
            }
        }
        Ok(TriBool::Unknown {
            bound: self.table.bound,
        })
    }

    pub fn eval_node(&self, node: &Node, x: &[Rational]) -> Result<TriBool> {
        let bound = self.table.bound;
        match node {
            Node::Qf(q) => Ok(TriBool::from_bool(q.eval(x)?)),
            Node::Block(b) => self.eval_block(b, x),
            Node::Not(c) => Ok(self.eval_node(c, x)?.not(bound)),
            Node::And(cs) => {
                let mut witnesses = Vec::new();
                let mut unknown = false;
                for c in cs {
                    match self.eval_node(c, x)? {
                        TriBool::False => return Ok(TriBool::False),
                        TriBool::Unknown { .. } => unknown = true,
                        TriBool::True { witnesses: w } => witnesses.extend(w),
                    }
                }
                Ok(if unknown {
                    TriBool::Unknown { bound }
                } else {
                    TriBool::True { witnesses }
                })
            }
            Node::Or(cs) => {
                let mut unknown = false;
                for c in cs {
                    match self.eval_node(c, x)? {
                        t @ TriBool::True { .. } => return Ok(t),
                        TriBool::Unknown { .. } => unknown = true,
                        TriBool::False => {}
                    }
                }
                Ok(if unknown {
                    TriBool::Unknown { bound }
                } else {
                    TriBool::False
                })
            }
        }
    }

    pub fn eval_formula(&self, f: &Formula, x: &[Rational]) -> Result<TriBool> {
        if x.len() != f.arity {
            return Err(Error::input(format!(
                "formula has {} free variables, {} values supplied",
                f.arity,
                x.len()
            )));
        }
        self.eval_node(&f.root, x)
    }
}

pub fn eval_block(gamma: &GammaSpec, block: &Block, x: &[Rational], bound: u64) -> Result<TriBool> {
    Evaluator::new(gamma, bound).eval_block(block, x)
}

pub fn eval_formula(gamma: &GammaSpec, f: &Formula, x: &[Rational], bound: u64) -> Result<TriBool> {
    Evaluator::new(gamma, bound).eval_formula(f, x)
}

/// Re-checks a block witness exactly: every point lies on the variety and
/// the body holds at the witness coordinates.
pub fn witness_is_valid(gamma: &GammaSpec, block: &Block, x: &[Rational], w: &Witness) -> bool {
    if w.points.len() != block.n {
        return false;
    }
    if !w.points.iter().all(|p| gamma.backend().on_variety(p)) {
        return false;
    }
    if w.coords
        .iter()
        .zip(&w.points)
        .any(|(c, p)| gamma.realize(c).ok().as_ref() != Some(p))
    {
        return false;
    }
    let mut assignment = x.to_vec();
    for p in &w.points {
        let (px, py) = p
            .coords()
            .map(|(a, b)| (a.clone(), b.clone()))
            .unwrap_or_default();
        assignment.push(px);
        assignment.push(py);
    }
    block.body.eval(&assignment).unwrap_or(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::Backend;
    use crate::num::int;

    fn gamma_p() -> GammaSpec {
        let e = Backend::curve(int(0), int(-2)).unwrap();
        GammaSpec::from_generators(e, &[Point::affine(int(3), int(5))], Some(1)).unwrap()
    }

    #[test]
    fn parse_examples() {
        let f = parse("(exists-gamma 1 (= x1 y1))").unwrap();
        assert_eq!(f.arity, 1);
        let Node::Block(b) = &f.root else {
            panic!("expected block")
        };
        assert_eq!(b.n, 1);
        assert_eq!(
            b.body,
            Qf::Atom(
                Rel::Eq,
                MultiPoly::var(3, 1).unwrap(),
                MultiPoly::var(3, 2).unwrap()
            )
        );
        let g = parse("(not (exists-gamma 1 (= x1 y1)))").unwrap();
        assert!(matches!(g.root, Node::Not(_)));
        assert!(matches!(parse("(exists-gamma)"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn parse_errors_carry_positions() {
        let err = parse("(and\n  (= x1 1)\n  (< y1 2))").unwrap_err();
        match err {
            Error::Syntax {
                line,
                column,
                message,
            } => {
                assert_eq!((line, column), (3, 6));
                assert!(message.contains("unbound"), "{message}");
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse("(exists-gamma 1 (= y3 0))"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse("(exists-gamma 0 (= x1 0))"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse("(= x1 1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(= x1 1))"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("(= x1 1) (= x1 2)"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(parse("(^ x1 0)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(= (^ x1 0) 1)"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("(foo x1)"), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("(and (exists-gamma 1 (exists-gamma 1 (= 0 0))))"),
            Err(Error::Syntax { .. })
        ));
        assert!(matches!(
            parse_with_arity("(= x3 0)", 2),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn qf_connectives_fold() {
        let f = parse("(and (= x1 1) (not (< x2 0)))").unwrap();
        assert!(matches!(f.root, Node::Qf(Qf::And(_))));
        assert_eq!(f.arity, 2);
    }

    #[test]
    fn printing_round_trips() {
        for text in [
            "(exists-gamma 1 (= x1 y1))",
            "(not (exists-gamma 1 (= x1 y1)))",
            "(and (exists-gamma 2 (and (= y1 y3) (< 0 (+ y2 (* -1/2 x1))))) (<= x1 4))",
            "(or (= (^ (- x1 1) 2) 0) (exists-gamma 1 (< y2 0)))",
        ] {
            let f = parse(text).unwrap();
            let printed = f.to_string();
            let again = parse(&printed).unwrap();
            assert_eq!(again, f, "{text} -> {printed}");
            assert_eq!(again.to_string(), printed);
        }
    }

    #[test]
    fn eval_qf_examples() {
        let two_lt_three = parse("(< 2 3)").unwrap();
        let Node::Qf(q) = &two_lt_three.root else {
            panic!()
        };
        assert!(eval_qf(q, &[]).unwrap());
        let sq = parse("(<= 0 (^ x1 2))").unwrap();
        let Node::Qf(q) = &sq.root else { panic!() };
        for v in [-3, 0, 7] {
            assert!(eval_qf(q, &[int(v)]).unwrap());
        }
        let curve = parse("(= (- (^ x1 3) 2) (^ x2 2))").unwrap();
        let Node::Qf(q) = &curve.root else { panic!() };
        assert!(eval_qf(q, &[int(3), int(5)]).unwrap());
        assert!(!eval_qf(q, &[int(3), int(4)]).unwrap());
        assert!(eval_qf(q, &[int(3)]).is_err());
    }

    #[test]
    fn block_examples() {
        let g = gamma_p();
        let taut = parse("(exists-gamma 1 (= y1 y1))").unwrap();
        let t = eval_formula(&g, &taut, &[], 2).unwrap();
        assert!(t.is_true());

        let f = parse("(exists-gamma 1 (= x1 y1))").unwrap();
        let Node::Block(b) = &f.root else { panic!() };
        let t = eval_block(&g, b, &[int(3)], 4).unwrap();
        let TriBool::True { witnesses } = &t else {
            panic!("{t}")
        };
        assert_eq!(witnesses[0].points[0].x(), Some(&int(3)));
        assert!(witness_is_valid(&g, b, &[int(3)], &witnesses[0]));
        for bound in [1, 4, 9] {
            assert_eq!(
                eval_block(&g, b, &[int(2)], bound).unwrap(),
                TriBool::Unknown { bound }
            );
        }
    }

    #[test]
    fn kleene_examples() {
        let g = gamma_p();
        let f = parse("(not (exists-gamma 1 (= x1 y1)))").unwrap();
        assert_eq!(eval_formula(&g, &f, &[int(3)], 3).unwrap(), TriBool::False);
        let f = parse("(or (exists-gamma 1 (= x1 y1)) (exists-gamma 1 (= y1 2)))").unwrap();
        assert!(eval_formula(&g, &f, &[int(3)], 3).unwrap().is_true());
        let f = parse("(and (exists-gamma 1 (= x1 y1)) (< x1 4))").unwrap();
        let t = eval_formula(&g, &f, &[int(3)], 3).unwrap();
        assert!(t.is_true());
        assert!(t.to_string().starts_with("true (witness: (3, "));
        let f = parse("(and (exists-gamma 1 (= y1 2)) (< x1 4))").unwrap();
        assert_eq!(
            eval_formula(&g, &f, &[int(3)], 3).unwrap(),
            TriBool::Unknown { bound: 3 }
        );
        assert!(eval_formula(&g, &f, &[], 3).is_err());
    }
}
