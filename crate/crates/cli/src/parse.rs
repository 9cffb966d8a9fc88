//! Text syntax for maps and points.
//!
//! ```text
//! list   := '[' expr (':' expr)* ']'
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' ['-'] INT)?
//! atom   := INT | 't' | VAR | '(' expr ')'
//! ```
//!
//! `VAR` is `x0, x1, …` or one of the aliases `x, y, z, w` for `x0..x3`.
//! Division is only allowed by expressions free of homogeneous variables.

use arithdyn::dynamics::{MPoly, RationalMap};
use arithdyn::places::{Field, ProjPoint};
use arithdyn::ratfunc::{IntPoly, RatFunc};
use num_bigint::BigInt;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    /// 1-based column; `None` means end of input.
    pub pos: Option<usize>,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.pos {
            Some(p) => write!(f, "syntax error at column {p}: {}", self.msg),
            None => write!(f, "syntax error at end of input: {}", self.msg),
        }
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: Option<usize>, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    T,
    Var(usize),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

/// A node with the column where it starts.
#[derive(Clone, Debug, PartialEq)]
pub struct Spanned {
    pub pos: usize,
    pub expr: Expr,
}

/// A bracketed coordinate list.
#[derive(Clone, Debug, PartialEq)]
pub struct ExprAst {
    pub coords: Vec<Spanned>,
}

impl Expr {
    pub fn mentions_t(&self) -> bool {
        match self {
            Expr::T => true,
            Expr::Int(_) | Expr::Var(_) => false,
            Expr::Neg(a) | Expr::Pow(a, _) => a.mentions_t(),
            Expr::Bin(_, a, b) => a.mentions_t() || b.mentions_t(),
        }
    }

    fn max_var(&self) -> Option<usize> {
        match self {
            Expr::Var(i) => Some(*i),
            Expr::Int(_) | Expr::T => None,
            Expr::Neg(a) | Expr::Pow(a, _) => a.max_var(),
            Expr::Bin(_, a, b) => a.max_var().max(b.max_var()),
        }
    }
}

impl ExprAst {
    pub fn mentions_t(&self) -> bool {
        self.coords.iter().any(|c| c.expr.mentions_t())
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(s: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let pos = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((pos, Tok::Int(digits.parse().expect("ascii digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_alphanumeric() {
                i += 1;
            }
            out.push((pos, Tok::Ident(chars[start..i].iter().collect())));
        } else if "+-*/^()[]:".contains(c) {
            out.push((pos, Tok::Sym(c)));
            i += 1;
        } else {
            return err(Some(pos), format!("unexpected character '{c}'"));
        }
    }
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|t| &t.1)
    }

    fn pos(&self) -> Option<usize> {
        self.toks.get(self.at).map(|t| t.0)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, what: &str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            err(self.pos(), format!("expected {what}"))
        }
    }

    fn binop(&self) -> Option<BinOp> {
        match self.peek()? {
            Tok::Sym('+') => Some(BinOp::Add),
            Tok::Sym('-') => Some(BinOp::Sub),
            Tok::Sym('*') => Some(BinOp::Mul),
            Tok::Sym('/') => Some(BinOp::Div),
            _ => None,
        }
    }

    fn expr(&mut self, min_prec: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.unary()?;
        while let Some(op) = self.binop().filter(|op| op.precedence() >= min_prec) {
            self.at += 1;
            // all binary operators are left-associative
            let rhs = self.expr(op.precedence() + 1)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.eat('-') {
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let paren = self.eat('(');
        let neg = self.eat('-');
        let pos = self.pos();
        let e = match self.peek() {
            Some(Tok::Int(v)) => match i64::try_from(v.clone()) {
                Ok(e) => e,
                Err(_) => return err(pos, "exponent too large"),
            },
            _ => return err(pos, "exponent must be an integer literal"),
        };
        self.at += 1;
        if paren {
            self.expect(')', "')'")?;
        }
        if self.peek() == Some(&Tok::Sym('^')) {
            return err(self.pos(), "chained '^' is ambiguous; add parentheses");
        }
        Ok(Expr::Pow(Box::new(base), if neg { -e } else { e }))
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.pos();
        let Some(tok) = self.peek().cloned() else {
            return err(None, "expected a number, t, a variable or '('");
        };
        self.at += 1;
        match tok {
            Tok::Int(v) => Ok(Expr::Int(v)),
            Tok::Ident(name) => ident(&name).ok_or_else(|| ParseError {
                pos,
                msg: format!("unknown symbol '{name}'"),
            }),
            Tok::Sym('(') => {
                let e = self.expr(1)?;
                self.expect(')', "')'")?;
                Ok(e)
            }
            Tok::Sym(c) => err(pos, format!("unexpected '{c}'")),
        }
    }
}

fn ident(name: &str) -> Option<Expr> {
    match name {
        "t" => Some(Expr::T),
        "x" => Some(Expr::Var(0)),
        "y" => Some(Expr::Var(1)),
        "z" => Some(Expr::Var(2)),
        "w" => Some(Expr::Var(3)),
        _ => {
            let idx = name.strip_prefix('x')?;
            if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) || (idx.len() > 1 && idx.starts_with('0')) {
                return None;
            }
            idx.parse().ok().map(Expr::Var)
        }
    }
}

/// Parse a bracketed list `[e0 : e1 : …]` into an AST.
pub fn parse_list(s: &str) -> Result<ExprAst, ParseError> {
    let mut p = Parser { toks: lex(s)?, at: 0 };
    p.expect('[', "'['")?;
    let mut coords = Vec::new();
    loop {
        let pos = p.pos().unwrap_or(s.chars().count() + 1);
        let expr = p.expr(1)?;
        coords.push(Spanned { pos, expr });
        if p.eat(']') {
            break;
        }
        if !p.eat(':') {
            return err(p.pos(), "expected ':' or ']'");
        }
    }
    if p.at < p.toks.len() {
        return err(p.pos(), "trailing input after ']'");
    }
    Ok(ExprAst { coords })
}

/// `num / den` with `den ∈ ℤ[t]`, used while evaluating.
#[derive(Clone, Debug)]
struct Frac {
    num: MPoly,
    den: IntPoly,
}

fn lift(p: &IntPoly, nvars: usize) -> MPoly {
    MPoly::from_terms(
        nvars,
        p.coeffs().iter().enumerate().filter(|(_, c)| c.sign() != num_bigint::Sign::NoSign).map(|(k, c)| {
            let mut e = vec![0u32; nvars];
            e[0] = k as u32;
            (e, c.clone())
        }),
    )
}

/// The polynomial in `t` alone, if `p` has no homogeneous variables.
fn t_only(p: &MPoly) -> Option<IntPoly> {
    if p.degree_in_range(1..p.nvars()) > 0 {
        return None;
    }
    let mut c = vec![BigInt::from(0); p.degree_in(0) as usize + 1];
    for (e, v) in p.terms() {
        c[e[0] as usize] += v;
    }
    Some(IntPoly::new(c))
}

fn eval(e: &Expr, nvars: usize, pos: usize) -> Result<Frac, ParseError> {
    let one = IntPoly::one();
    Ok(match e {
        Expr::Int(v) => Frac {
            num: MPoly::constant(nvars, v.clone()),
            den: one,
        },
        Expr::T => Frac {
            num: MPoly::var(nvars, 0),
            den: one,
        },
        Expr::Var(i) => {
            if i + 1 >= nvars {
                return err(Some(pos), format!("variable x{i} is out of range for {} coordinates", nvars - 1));
            }
            Frac {
                num: MPoly::var(nvars, i + 1),
                den: one,
            }
        }
        Expr::Neg(a) => {
            let a = eval(a, nvars, pos)?;
            Frac { num: -&a.num, den: a.den }
        }
        Expr::Bin(op, a, b) => {
            let a = eval(a, nvars, pos)?;
            let b = eval(b, nvars, pos)?;
            match op {
                BinOp::Add | BinOp::Sub => {
                    let l = &a.num * &lift(&b.den, nvars);
                    let r = &b.num * &lift(&a.den, nvars);
                    Frac {
                        num: if *op == BinOp::Add { &l + &r } else { &l - &r },
                        den: &a.den * &b.den,
                    }
                }
                BinOp::Mul => Frac {
                    num: &a.num * &b.num,
                    den: &a.den * &b.den,
                },
                BinOp::Div => {
                    let Some(bn) = t_only(&b.num) else {
                        return err(Some(pos), "division by an expression in the homogeneous variables");
                    };
                    if bn.is_zero() {
                        return err(Some(pos), "division by zero");
                    }
                    Frac {
                        num: &a.num * &lift(&b.den, nvars),
                        den: &a.den * &bn,
                    }
                }
            }
        }
        Expr::Pow(a, k) => {
            let mut a = eval(a, nvars, pos)?;
            if *k < 0 {
                let Some(an) = t_only(&a.num) else {
                    return err(Some(pos), "negative power of an expression in the homogeneous variables");
                };
                if an.is_zero() {
                    return err(Some(pos), "division by zero");
                }
                a = Frac {
                    num: lift(&a.den, nvars),
                    den: an,
                };
            }
            let k = u32::try_from(k.unsigned_abs()).map_err(|_| ParseError {
                pos: Some(pos),
                msg: "exponent too large".into(),
            })?;
            Frac {
                num: a.num.pow(k),
                den: a.den.pow(k),
            }
        }
    })
}

/// Errors from turning text into maps and points.
#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error(transparent)]
    Syntax(#[from] ParseError),
    #[error("coordinate {index} (column {pos}) is not homogeneous")]
    NotHomogeneous { index: usize, pos: usize },
    #[error("coordinate {index} (column {pos}) has degree {got}, but coordinate 1 has degree {want}")]
    DegreeMismatch { index: usize, pos: usize, got: u32, want: u32 },
    #[error("coordinate {index} (column {pos}) of a point involves a homogeneous variable")]
    VariableInPoint { index: usize, pos: usize },
    #[error("a map needs at least two coordinates")]
    TooFewCoordinates,
    #[error(transparent)]
    Core(#[from] arithdyn::error::Error),
}

/// The field to use: the requested one, or ℚ(t) exactly when `t` appears.
pub fn infer_field(requested: Option<Field>, asts: &[&ExprAst]) -> Field {
    requested.unwrap_or(if asts.iter().any(|a| a.mentions_t()) { Field::Qt } else { Field::Q })
}

pub fn map_from_ast(ast: &ExprAst, field: Field) -> Result<RationalMap, InputError> {
    let k = ast.coords.len();
    if k < 2 {
        return Err(InputError::TooFewCoordinates);
    }
    let nvars = k + 1;
    let fracs = ast
        .coords
        .iter()
        .map(|c| eval(&c.expr, nvars, c.pos))
        .collect::<Result<Vec<_>, _>>()?;
    let mut want = None;
    for (i, (f, c)) in fracs.iter().zip(&ast.coords).enumerate() {
        if f.num.is_zero() {
            continue;
        }
        let Some(d) = f.num.homogeneous_degree(1..nvars) else {
            return Err(InputError::NotHomogeneous { index: i + 1, pos: c.pos });
        };
        match want {
            None => want = Some(d),
            Some(w) if w != d => {
                return Err(InputError::DegreeMismatch {
                    index: i + 1,
                    pos: c.pos,
                    got: d,
                    want: w,
                })
            }
            _ => {}
        }
    }
    // clear the t-denominators
    let coords = (0..k)
        .map(|i| {
            (0..k)
                .filter(|&j| j != i)
                .fold(fracs[i].num.clone(), |acc, j| &acc * &lift(&fracs[j].den, nvars))
        })
        .collect();
    Ok(RationalMap::dense(field, coords)?)
}

pub fn point_from_ast(ast: &ExprAst, field: Field) -> Result<ProjPoint, InputError> {
    let nvars = ast.coords.iter().filter_map(|c| c.expr.max_var()).max().map_or(1, |m| m + 2);
    let vals = ast
        .coords
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let f = eval(&c.expr, nvars, c.pos)?;
            let num = t_only(&f.num).ok_or(InputError::VariableInPoint { index: i + 1, pos: c.pos })?;
            Ok(RatFunc::from_int_polys(num, f.den)?)
        })
        .collect::<Result<Vec<_>, InputError>>()?;
    Ok(ProjPoint::from_ratfuncs(field, &vals)?)
}

/// Parse a map; without an explicit field, ℚ(t) is used exactly when `t` appears.
pub fn parse_map(s: &str, field: Option<Field>) -> Result<RationalMap, InputError> {
    let ast = parse_list(s)?;
    map_from_ast(&ast, infer_field(field, &[&ast]))
}

pub fn parse_point(s: &str, field: Option<Field>) -> Result<ProjPoint, InputError> {
    let ast = parse_list(s)?;
    point_from_ast(&ast, infer_field(field, &[&ast]))
}

/// Non-empty lines of a corpus file with `#` comments removed, paired with
/// their 1-based line numbers.
pub fn corpus_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .filter_map(|(i, l)| {
            let l = l.split('#').next().unwrap_or("").trim();
            (!l.is_empty()).then_some((i + 1, l))
        })
        .collect()
}
