//! Recursive-descent parser for the expression grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := factor (('*' | '/') factor)*
//! factor := atom ('^' factor)? | '-' factor
//! atom   := number | ident | ident '(' expr (',' expr)* ')' | '(' expr ')'
//! ```
//!
//! Integer literals become exact integers, decimal or exponent literals
//! become f64 constants. Division builds a reciprocal power, so parsed
//! expressions land directly in canonical form. Identifiers containing a
//! double underscore followed by a multi-index, such as `W__1(u)` or
//! `V__1_0_2(a, b, c)`, denote partial derivatives of a function symbol.

use super::{Builtin, Expr, FnSym};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// Parse-time context: declared function arities and chart conventions.
#[derive(Clone, Debug, Default)]
pub struct ParseCtx {
    /// Expand the polar abbreviations `r` and `theta` into Cartesian
    /// expressions in y and z.
    pub chart_mode: bool,
    /// Reject undeclared identifiers instead of treating bare names as
    /// symbols and applied names as implicit function symbols.
    pub strict: bool,
    functions: BTreeMap<String, usize>,
    symbols: BTreeSet<String>,
}

impl ParseCtx {
    /// Context with polar abbreviations enabled, the chart coordinates
    /// declared, and no declared functions.
    pub fn new() -> Self {
        let symbols = ["u", "v", "y", "z"].iter().map(|s| s.to_string()).collect();
        ParseCtx { chart_mode: true, strict: false, functions: BTreeMap::new(), symbols }
    }

    pub fn with_function(mut self, name: &str, arity: usize) -> Self {
        self.functions.insert(name.to_string(), arity);
        self
    }

    pub fn with_symbol(mut self, name: &str) -> Self {
        self.symbols.insert(name.to_string());
        self
    }

    pub fn declare(&mut self, name: &str, arity: usize) {
        self.functions.insert(name.to_string(), arity);
    }

    pub fn declare_symbol(&mut self, name: &str) {
        self.symbols.insert(name.to_string());
    }

    pub fn function_arity(&self, name: &str) -> Option<usize> {
        self.functions.get(name).copied()
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.symbols.contains(name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub message: String,
    pub position: usize,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "parse error at byte {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

pub fn parse(input: &str, ctx: &ParseCtx) -> Result<Expr, ParseError> {
    let mut p = Parser { bytes: input.as_bytes(), pos: 0, ctx };
    p.skip_ws();
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.bytes.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(e)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    ctx: &'a ParseCtx,
}

impl<'a> Parser<'a> {
    fn err(&self, message: &str) -> ParseError {
        ParseError { message: message.to_string(), position: self.pos }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut terms = vec![self.term()?];
        loop {
            if self.eat(b'+') {
                terms.push(self.term()?);
            } else if self.eat(b'-') {
                terms.push(Expr::neg(self.term()?));
            } else {
                break;
            }
        }
        Ok(Expr::add(terms))
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut factors = vec![self.factor()?];
        loop {
            if self.eat(b'*') {
                factors.push(self.factor()?);
            } else if self.eat(b'/') {
                factors.push(Expr::pow(self.factor()?, Expr::int(-1)));
            } else {
                break;
            }
        }
        Ok(Expr::mul(factors))
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.factor()?));
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let exp = self.factor()?;
            return Ok(Expr::pow(base, exp));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                self.skip_ws();
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => self.number(),
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => self.ident(),
            Some(_) => Err(self.err("expected a number, identifier, or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn number(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let mut is_real = false;
        if self.peek() == Some(b'.') {
            is_real = true;
            self.pos += 1;
            if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                return Err(self.err("expected digits after decimal point"));
            }
            while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                self.pos += 1;
            }
        }
        if matches!(self.peek(), Some(b'e') | Some(b'E')) {
            // Exponent suffix only when followed by a (signed) digit run,
            // so `2e` in `2exp(u)`-style typos still errors clearly.
            let mark = self.pos;
            self.pos += 1;
            if matches!(self.peek(), Some(b'+') | Some(b'-')) {
                self.pos += 1;
            }
            if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                is_real = true;
                while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
                    self.pos += 1;
                }
            } else {
                self.pos = mark;
            }
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        self.skip_ws();
        if is_real {
            let v: f64 = text
                .parse()
                .map_err(|_| self.err(&format!("invalid numeric literal '{}'", text)))?;
            Ok(Expr::real(v))
        } else {
            let v = text
                .parse::<num_bigint::BigInt>()
                .map_err(|_| self.err(&format!("invalid integer literal '{}'", text)))?;
            Ok(Expr::from_bigint(v))
        }
    }

    fn ident(&mut self) -> Result<Expr, ParseError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap().to_string();
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            self.skip_ws();
            let mut args = vec![self.expr()?];
            while self.eat(b',') {
                args.push(self.expr()?);
            }
            if !self.eat(b')') {
                return Err(self.err("expected ')' or ',' in argument list"));
            }
            return self.call(&name, args, start);
        }
        if self.ctx.chart_mode {
            if name == "r" {
                let s = Expr::add2(
                    Expr::pow(Expr::sym("y"), Expr::int(2)),
                    Expr::pow(Expr::sym("z"), Expr::int(2)),
                );
                return Ok(Expr::builtin(Builtin::Sqrt, vec![s]));
            }
            if name == "theta" {
                return Ok(Expr::builtin(Builtin::Arctan2, vec![Expr::sym("z"), Expr::sym("y")]));
            }
        }
        if self.ctx.function_arity(&name).is_some() {
            return Err(ParseError {
                message: format!("function '{}' used without arguments", name),
                position: start,
            });
        }
        if Builtin::from_name(&name).is_some() {
            return Err(ParseError {
                message: format!("builtin '{}' used without arguments", name),
                position: start,
            });
        }
        if self.ctx.strict && !self.ctx.has_symbol(&name) {
            return Err(ParseError {
                message: format!("unknown symbol '{}'", name),
                position: start,
            });
        }
        Ok(Expr::sym(&name))
    }

    fn call(&mut self, name: &str, args: Vec<Expr>, start: usize) -> Result<Expr, ParseError> {
        let fail = |message: String| ParseError { message, position: start };
        if let Some((base, index)) = split_deriv_name(name) {
            let declared = self.ctx.function_arity(&base);
            if declared.is_none() && self.ctx.strict {
                return Err(fail(format!("unknown function '{}'", base)));
            }
            let arity = declared.unwrap_or(args.len());
            if index.len() != arity || args.len() != arity {
                return Err(fail(format!(
                    "derivative of '{}' needs {} index entries and {} arguments",
                    base, arity, arity
                )));
            }
            return Ok(Expr::deriv(FnSym::new(&base, arity), index, args));
        }
        if let Some(b) = Builtin::from_name(name) {
            if args.len() != b.arity() {
                return Err(fail(format!(
                    "builtin '{}' takes {} argument(s), found {}",
                    name,
                    b.arity(),
                    args.len()
                )));
            }
            return Ok(Expr::builtin(b, args));
        }
        match self.ctx.function_arity(name) {
            Some(arity) => {
                if args.len() != arity {
                    return Err(fail(format!(
                        "function '{}' takes {} argument(s), found {}",
                        name,
                        arity,
                        args.len()
                    )));
                }
                Ok(Expr::apply(FnSym::new(name, arity), args))
            }
            None => {
                if self.ctx.strict {
                    return Err(fail(format!("unknown function '{}'", name)));
                }
                Ok(Expr::apply(FnSym::new(name, args.len()), args))
            }
        }
    }
}

/// Splits `W__1_0` into ("W", [1, 0]) when the suffix after the first
/// double underscore is a valid multi-index.
fn split_deriv_name(name: &str) -> Option<(String, Vec<u32>)> {
    let at = name.find("__")?;
    let base = &name[..at];
    let suffix = &name[at + 2..];
    if base.is_empty() || suffix.is_empty() {
        return None;
    }
    let mut index = Vec::new();
    for part in suffix.split('_') {
        if part.is_empty() || !part.bytes().all(|c| c.is_ascii_digit()) {
            return None;
        }
        index.push(part.parse().ok()?);
    }
    Some((base.to_string(), index))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::Node;

    fn ctx() -> ParseCtx {
        ParseCtx::new()
    }

    #[test]
    fn parses_polynomials_canonically() {
        let e = parse("2*u*v - v*u*2 + y^2", &ctx()).unwrap();
        assert_eq!(e, parse("y^2", &ctx()).unwrap());
    }

    #[test]
    fn division_is_reciprocal_power() {
        let e = parse("x/2", &ctx()).unwrap();
        assert_eq!(e, Expr::mul2(Expr::rat(1, 2), Expr::sym("x")));
    }

    #[test]
    fn chart_mode_expands_r_and_theta() {
        let e = parse("(N/4)*r^2 + delta*r^(-2)", &ctx()).unwrap();
        let s = Expr::add2(
            Expr::pow(Expr::sym("y"), Expr::int(2)),
            Expr::pow(Expr::sym("z"), Expr::int(2)),
        );
        let expect = Expr::add2(
            Expr::mul(vec![Expr::rat(1, 4), Expr::sym("N"), s.clone()]),
            Expr::mul2(Expr::sym("delta"), Expr::pow(s, Expr::int(-1))),
        );
        assert_eq!(e, expect);

        let t = parse("theta", &ctx()).unwrap();
        assert_eq!(
            t,
            Expr::builtin(Builtin::Arctan2, vec![Expr::sym("z"), Expr::sym("y")])
        );
    }

    #[test]
    fn chart_mode_off_keeps_r_symbolic() {
        let mut c = ctx();
        c.chart_mode = false;
        assert_eq!(parse("r", &c).unwrap(), Expr::sym("r"));
    }

    #[test]
    fn parses_derivative_names() {
        let c = ctx().with_function("W", 1);
        let e = parse("W__1(u)", &c).unwrap();
        assert_eq!(
            e,
            Expr::deriv(FnSym::new("W", 1), vec![1], vec![Expr::sym("u")])
        );
        let e2 = parse("V__1_0_2(u, y, z)", &ctx()).unwrap();
        assert!(matches!(e2.node(), Node::Deriv(f, idx, _) if f.arity == 3 && idx == &[1, 0, 2]));
    }

    #[test]
    fn declared_arity_is_enforced() {
        let c = ctx().with_function("V", 3);
        assert!(parse("V(u, y)", &c).is_err());
        assert!(parse("V__1_0(u, y)", &c).is_err());
        assert!(parse("V(u, y, z)", &c).is_ok());
    }

    #[test]
    fn strict_mode_rejects_unknowns() {
        let mut c = ctx().with_function("H", 3);
        c.strict = true;
        assert!(parse("H(u, y, z) + Q(u)", &c).is_err());
        assert!(parse("alpha", &c).is_err());
        assert!(parse("H(u, y, z)", &c).is_ok());
    }

    #[test]
    fn numbers_parse_exactly_or_as_reals() {
        assert_eq!(parse("12", &ctx()).unwrap(), Expr::int(12));
        assert_eq!(parse("0.5", &ctx()).unwrap(), Expr::real(0.5));
        assert_eq!(parse("2e-3", &ctx()).unwrap(), Expr::real(2e-3));
        assert_eq!(parse("1/3", &ctx()).unwrap(), Expr::rat(1, 3));
    }

    #[test]
    fn unary_minus_binds_one_factor() {
        let e = parse("-x^2", &ctx()).unwrap();
        assert_eq!(e, Expr::neg(Expr::pow(Expr::sym("x"), Expr::int(2))));
        let e2 = parse("-2*x", &ctx()).unwrap();
        assert_eq!(e2, Expr::mul2(Expr::int(-2), Expr::sym("x")));
    }

    #[test]
    fn power_is_right_associative() {
        let e = parse("x^2^3", &ctx()).unwrap();
        // x^(2^3) = x^8
        assert_eq!(e, Expr::pow(Expr::sym("x"), Expr::int(8)));
    }

    #[test]
    fn error_positions_are_reported() {
        let err = parse("x + ", &ctx()).unwrap_err();
        assert_eq!(err.position, 4);
        assert!(parse("(x + y", &ctx()).is_err());
        assert!(parse("x )", &ctx()).is_err());
    }

    #[test]
    fn display_round_trips_through_parse() {
        let c = ctx().with_function("W", 1).with_function("H", 3);
        for src in [
            "-2*u*v + y^2 - 1/2*z^2",
            "W__1(u)*y + W(u)",
            "exp(u/5)*H(u, y, z)",
            "arctan2(z, y) + sqrt(y^2 + z^2)",
            "(u^2 + 1)^(-2)",
            "2.5*u - 0.125",
            "u^(1/2) + v^(-1/2)",
        ] {
            let e = parse(src, &c).unwrap();
            let printed = e.to_string();
            let back = parse(&printed, &c).unwrap();
            assert_eq!(e, back, "round trip failed for {} -> {}", src, printed);
        }
    }
}
