//! Text form of expressions.
//!
//! ```text
//! expr    := term {("+"|"-") term}
//! term    := factor {"*" factor}
//! factor  := number | complex | atom | "(" expr ")"
//! atom    := "res" "(" weights "," complex "," number ")" | "exp" "(" weights ")"
//! weights := "[" number {"," number} "]"
//! complex := number [("+"|"-") number "i"]
//! ```
//!
//! Numbers may carry a leading sign. Printing is deterministic and
//! re-parses to the same normalized tree.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use num_complex::Complex64 as C64;

use super::expr::{ExpAtom, FnExpr, Node, ResLin};
use crate::error::FnError;

pub fn fmt_num(v: f64) -> String {
    if v == 0.0 {
        return "0".into();
    }
    let a = v.abs();
    if v.fract() == 0.0 && a < 1.0e15 {
        format!("{}", v as i64)
    } else if (1.0e-4..1.0e15).contains(&a) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn fmt_complex(z: C64) -> String {
    if z.im == 0.0 {
        fmt_num(z.re)
    } else {
        let sign = if z.im < 0.0 { '-' } else { '+' };
        format!("{}{}{}i", fmt_num(z.re), sign, fmt_num(z.im.abs()))
    }
}

fn fmt_list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| fmt_num(*x)).collect();
    format!("[{}]", parts.join(","))
}

fn leading_negative(node: &Node) -> bool {
    match node {
        Node::Const(k) => k.im == 0.0 && k.re < 0.0,
        Node::Prod(v) => matches!(v.first(), Some(Node::Const(k)) if k.im == 0.0 && k.re < 0.0),
        _ => false,
    }
}

fn negated(node: &Node) -> Node {
    Node::prod(alloc::vec![Node::Const(C64::new(-1.0, 0.0)), node.clone()])
}

fn write_expr(out: &mut String, node: &Node) {
    match node {
        Node::Sum(v) => {
            for (i, x) in v.iter().enumerate() {
                if i == 0 {
                    write_term(out, x);
                } else if leading_negative(x) {
                    out.push_str(" - ");
                    write_term(out, &negated(x));
                } else {
                    out.push_str(" + ");
                    write_term(out, x);
                }
            }
        }
        other => write_term(out, other),
    }
}

fn write_term(out: &mut String, node: &Node) {
    match node {
        Node::Prod(v) => {
            let mut first = true;
            for (i, x) in v.iter().enumerate() {
                if i == 0 && v.len() > 1 && matches!(x, Node::Const(k) if *k == C64::new(1.0, 0.0)) {
                    continue;
                }
                if !first {
                    out.push('*');
                }
                first = false;
                write_factor(out, x);
            }
        }
        other => write_factor(out, other),
    }
}

fn write_factor(out: &mut String, node: &Node) {
    match node {
        Node::Const(k) if k.im == 0.0 => out.push_str(&fmt_num(k.re)),
        Node::Const(k) => {
            out.push('(');
            out.push_str(&fmt_complex(*k));
            out.push(')');
        }
        Node::Res(r) => {
            out.push_str(&format!("res({},{},{})", fmt_list(&r.weights), fmt_complex(r.shift), fmt_num(r.power)));
        }
        Node::Exp(e) => out.push_str(&format!("exp({})", fmt_list(&e.rates))),
        Node::Sum(_) | Node::Prod(_) => {
            out.push('(');
            write_expr(out, node);
            out.push(')');
        }
    }
}

impl fmt::Display for FnExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        write_expr(&mut s, self.node());
        f.write_str(&s)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    dim: Option<usize>,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl ToString) -> Result<T, FnError> {
        Err(FnError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<(), FnError> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected '{}'", c as char))
        }
    }

    fn starts_number(&mut self) -> bool {
        match self.peek() {
            Some(c) if c.is_ascii_digit() || c == b'.' => true,
            Some(b'-') | Some(b'+') => {
                matches!(self.src.get(self.pos + 1), Some(c) if c.is_ascii_digit() || *c == b'.')
            }
            _ => false,
        }
    }

    fn number(&mut self) -> Result<f64, FnError> {
        self.ws();
        let start = self.pos;
        let s = self.src;
        let mut i = self.pos;
        if i < s.len() && (s[i] == b'-' || s[i] == b'+') {
            i += 1;
        }
        let digits_start = i;
        while i < s.len() && (s[i].is_ascii_digit() || s[i] == b'.') {
            i += 1;
        }
        if i == digits_start {
            return self.err("expected a number");
        }
        if i < s.len() && (s[i] == b'e' || s[i] == b'E') {
            let mut k = i + 1;
            if k < s.len() && (s[k] == b'-' || s[k] == b'+') {
                k += 1;
            }
            let exp_start = k;
            while k < s.len() && s[k].is_ascii_digit() {
                k += 1;
            }
            if k > exp_start {
                i = k;
            }
        }
        let text = core::str::from_utf8(&s[start..i]).unwrap();
        match text.parse::<f64>() {
            Ok(v) if v.is_finite() => {
                self.pos = i;
                Ok(v)
            }
            _ => self.err(format!("invalid number '{text}'")),
        }
    }

    /// `number [("+"|"-") number "i"]`, also accepting a bare `number "i"`.
    fn complex(&mut self) -> Result<C64, FnError> {
        let re = self.number()?;
        if self.src.get(self.pos) == Some(&b'i') {
            self.pos += 1;
            return Ok(C64::new(0.0, re));
        }
        let save = self.pos;
        if let Some(sign @ (b'+' | b'-')) = self.peek() {
            self.pos += 1;
            self.ws();
            if self.starts_number() && !matches!(self.src.get(self.pos), Some(b'-' | b'+')) {
                let im = self.number()?;
                if self.src.get(self.pos) == Some(&b'i') {
                    self.pos += 1;
                    let im = if sign == b'-' { -im } else { im };
                    return Ok(C64::new(re, im));
                }
            }
        }
        self.pos = save;
        Ok(C64::new(re, 0.0))
    }

    fn weights(&mut self) -> Result<Vec<f64>, FnError> {
        self.expect(b'[')?;
        let mut v = alloc::vec![self.number()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            v.push(self.number()?);
        }
        self.expect(b']')?;
        match self.dim {
            Some(d) if d != v.len() => self.err(format!("expected {d} weights, found {}", v.len())),
            _ => {
                self.dim = Some(v.len());
                Ok(v)
            }
        }
    }

    fn keyword(&mut self, kw: &str) -> bool {
        self.ws();
        let k = kw.as_bytes();
        if self.src[self.pos..].starts_with(k) {
            self.pos += k.len();
            true
        } else {
            false
        }
    }

    fn factor(&mut self) -> Result<Node, FnError> {
        let at = self.pos;
        if self.keyword("res") {
            self.expect(b'(')?;
            let w = self.weights()?;
            self.expect(b',')?;
            let shift = self.complex()?;
            self.expect(b',')?;
            let p = self.number()?;
            self.expect(b')')?;
            return ResLin::new(w, shift, p)
                .map(Node::Res)
                .map_err(|e| FnError::Parse { pos: at, msg: e.to_string() });
        }
        if self.keyword("exp") {
            self.expect(b'(')?;
            let w = self.weights()?;
            self.expect(b')')?;
            return ExpAtom::new(w)
                .map(Node::Exp)
                .map_err(|e| FnError::Parse { pos: at, msg: e.to_string() });
        }
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let e = self.expr()?;
            self.expect(b')')?;
            return Ok(e);
        }
        if self.starts_number() {
            return Ok(Node::Const(self.complex()?));
        }
        self.err("expected a number, atom or '('")
    }

    fn term(&mut self) -> Result<Node, FnError> {
        let mut items = alloc::vec![self.factor()?];
        while self.peek() == Some(b'*') {
            self.pos += 1;
            items.push(self.factor()?);
        }
        Ok(Node::prod(items))
    }

    fn expr(&mut self) -> Result<Node, FnError> {
        let mut items = alloc::vec![self.term()?];
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    items.push(self.term()?);
                }
                Some(b'-') => {
                    self.pos += 1;
                    let t = self.term()?;
                    items.push(Node::prod(alloc::vec![Node::Const(C64::new(-1.0, 0.0)), t]));
                }
                _ => break,
            }
        }
        Ok(Node::sum(items))
    }
}

impl FnExpr {
    /// Parses the text form. `dim` is required when the text has no atoms.
    pub fn parse(text: &str, dim: Option<usize>) -> Result<FnExpr, FnError> {
        let mut p = Parser { src: text.as_bytes(), pos: 0, dim };
        let node = p.expr()?;
        if p.peek().is_some() {
            return p.err("unexpected trailing input");
        }
        let d = p.dim.ok_or(FnError::Parse { pos: 0, msg: "dimension unknown: no atoms and no dimension given".into() })?;
        FnExpr::from_node(d, node)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_example_and_print() {
        let f = FnExpr::parse("res([1,0],1,1)*res([0,1],1,1)", None).unwrap();
        assert_eq!(f.dim(), 2);
        assert_eq!(f.to_string(), "res([1,0],1,1)*res([0,1],1,1)");
        let g = FnExpr::parse("1 - 2*exp([0.5]) + (1-2i)*res([1],2+1i,1.5)", None).unwrap();
        let s = g.to_string();
        assert_eq!(FnExpr::parse(&s, None).unwrap(), g);
    }

    #[test]
    fn complex_literal_versus_subtraction() {
        let f = FnExpr::parse("2-3i", Some(1)).unwrap();
        assert_eq!(f.node(), &Node::Const(C64::new(2.0, -3.0)));
        let g = FnExpr::parse("2-3*exp([1])", None).unwrap();
        assert!(matches!(g.node(), Node::Sum(_)));
    }

    #[test]
    fn parse_errors_carry_position() {
        match FnExpr::parse("res([1],1,1) + ", None) {
            Err(FnError::Parse { pos, .. }) => assert!(pos >= 14),
            other => panic!("unexpected {other:?}"),
        }
        assert!(FnExpr::parse("res([1,0],1,1)*exp([1])", None).is_err());
        assert!(FnExpr::parse("res([1],0,1)", None).is_err());
        assert!(FnExpr::parse("3", None).is_err());
        assert!(FnExpr::parse("3", Some(2)).is_ok());
    }

    #[test]
    fn number_format() {
        assert_eq!(fmt_num(1.0), "1");
        assert_eq!(fmt_num(0.25), "0.25");
        assert_eq!(fmt_num(1e-7), "1e-7");
        assert_eq!(fmt_complex(C64::new(1.0, -0.5)), "1-0.5i");
    }
}
