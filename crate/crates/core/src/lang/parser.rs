//! Surface syntax.
//!
//! ```text
//! term  ::= seq [":" type "<->" type]
//! seq   ::= sum (";" sum)*          right-nested
//! sum   ::= prod ("+" prod)*        right-nested
//! prod  ::= power ("*" power)*      right-nested
//! power ::= atom ["^" INT]          n-fold sequence
//! atom  ::= primitive | NAME ["(" arg ("," arg)* ")"] | "?" NAME | "(" term ")"
//! arg   ::= INT | seq
//! type  ::= tprod ("+" tprod)* ;  tprod ::= tatom ("*" tatom)* ;  tatom ::= 0 | 1 | 2 | "(" type ")"
//! ```
//!
//! `#` starts a comment. Unicode `⨾ × ↔` are accepted for `; * <->`.

use std::fmt;

use super::ast::{Arg, Prim, Term, ValueType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Source positions shaped like the parsed term: one child per sub-term
/// (two for `;`/`+`/`*`, one for annotations, one per term argument of a macro).
#[derive(Clone, Debug, Default)]
pub struct SpanTree {
    pub span: Span,
    pub children: Vec<SpanTree>,
}

impl SpanTree {
    fn leaf(span: Span) -> SpanTree {
        SpanTree { span, children: Vec::new() }
    }

    /// Span of the node at a binary path (as used in type errors); falls back to
    /// the deepest known ancestor.
    pub fn span_at(&self, path: &[usize]) -> Span {
        let mut cur = self;
        for &i in path {
            match cur.children.get(i) {
                Some(c) => cur = c,
                None => break,
            }
        }
        cur.span
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{span}: {message}")]
pub struct ParseError {
    pub span: Span,
    pub message: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Var(String),
    Int(usize),
    LParen,
    RParen,
    Comma,
    Semi,
    Plus,
    Star,
    Colon,
    Arrow,
    Caret,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Var(s) => write!(f, "`?{s}`"),
            Tok::Int(n) => write!(f, "`{n}`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Plus => f.write_str("`+`"),
            Tok::Star => f.write_str("`*`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Arrow => f.write_str("`<->`"),
            Tok::Caret => f.write_str("`^`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn lex(src: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let is_ident = |c: char| c.is_ascii_alphanumeric() || c == '_';
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let mut adv = 1;
        match c {
            '\n' => {
                line += 1;
                col = 0;
            }
            c if c.is_whitespace() => {}
            '#' => {
                while i + adv < chars.len() && chars[i + adv] != '\n' {
                    adv += 1;
                }
            }
            '(' => out.push((Tok::LParen, span)),
            ')' => out.push((Tok::RParen, span)),
            ',' => out.push((Tok::Comma, span)),
            ';' | '⨾' => out.push((Tok::Semi, span)),
            '+' => out.push((Tok::Plus, span)),
            '*' | '×' => out.push((Tok::Star, span)),
            ':' => out.push((Tok::Colon, span)),
            '^' => out.push((Tok::Caret, span)),
            '↔' => out.push((Tok::Arrow, span)),
            '<' => {
                if chars.get(i + 1) == Some(&'-') && chars.get(i + 2) == Some(&'>') {
                    adv = 3;
                    out.push((Tok::Arrow, span));
                } else {
                    return Err(ParseError { span, message: "expected `<->`".into() });
                }
            }
            '?' => {
                while i + adv < chars.len() && is_ident(chars[i + adv]) {
                    adv += 1;
                }
                if adv == 1 {
                    return Err(ParseError { span, message: "expected a variable name after `?`".into() });
                }
                out.push((Tok::Var(chars[i + 1..i + adv].iter().collect()), span));
            }
            c if c.is_ascii_digit() => {
                while i + adv < chars.len() && chars[i + adv].is_ascii_digit() {
                    adv += 1;
                }
                let s: String = chars[i..i + adv].iter().collect();
                let n = s
                    .parse()
                    .map_err(|_| ParseError { span, message: format!("integer `{s}` out of range") })?;
                out.push((Tok::Int(n), span));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                while i + adv < chars.len() && is_ident(chars[i + adv]) {
                    adv += 1;
                }
                let mut name: String = chars[i..i + adv].iter().collect();
                // primitive names such as `swap+` or `unite*l` carry an operator character
                if let Some(&op) = chars.get(i + adv) {
                    if op == '+' || op == '*' {
                        let with_l = format!("{name}{op}l");
                        let l_ends = chars.get(i + adv + 1) == Some(&'l')
                            && !chars.get(i + adv + 2).is_some_and(|&c| is_ident(c));
                        if l_ends && Prim::from_name(&with_l).is_some() {
                            name = with_l;
                            adv += 2;
                        } else if Prim::from_name(&format!("{name}{op}")).is_some() {
                            name.push(op);
                            adv += 1;
                        }
                    }
                }
                out.push((Tok::Ident(name), span));
            }
            other => {
                return Err(ParseError { span, message: format!("unexpected character `{other}`") });
            }
        }
        for _ in 0..adv {
            col += 1;
        }
        i += adv;
    }
    out.push((Tok::Eof, Span { line, col }));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, message: String) -> Result<T, ParseError> {
        Err(ParseError { span: self.span(), message })
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.err(format!("expected {t}, found {}", self.peek()))
        }
    }

    fn binary(
        &mut self,
        op: Tok,
        next: fn(&mut Parser) -> Result<(Term, SpanTree), ParseError>,
        build: fn(Term, Term) -> Term,
    ) -> Result<(Term, SpanTree), ParseError> {
        let (l, ls) = next(self)?;
        if *self.peek() == op {
            self.bump();
            let (r, rs) = self.binary(op, next, build)?;
            let span = ls.span;
            Ok((build(l, r), SpanTree { span, children: vec![ls, rs] }))
        } else {
            Ok((l, ls))
        }
    }

    fn seq(&mut self) -> Result<(Term, SpanTree), ParseError> {
        self.binary(Tok::Semi, Parser::sum, Term::seq)
    }

    fn sum(&mut self) -> Result<(Term, SpanTree), ParseError> {
        self.binary(Tok::Plus, Parser::prod, Term::sum)
    }

    fn prod(&mut self) -> Result<(Term, SpanTree), ParseError> {
        self.binary(Tok::Star, Parser::power, Term::prod)
    }

    fn power(&mut self) -> Result<(Term, SpanTree), ParseError> {
        let (t, s) = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok((t, s));
        }
        self.bump();
        let n = match self.bump() {
            (Tok::Int(n), _) if n >= 1 => n,
            (tok, span) => {
                return Err(ParseError { span, message: format!("expected a positive exponent, found {tok}") })
            }
        };
        let mut term = t.clone();
        let mut spans = s.clone();
        for _ in 1..n {
            term = Term::seq(t.clone(), term);
            spans = SpanTree { span: s.span, children: vec![s.clone(), spans] };
        }
        Ok((term, spans))
    }

    fn annotation(&mut self) -> Result<Option<(ValueType, ValueType)>, ParseError> {
        if *self.peek() != Tok::Colon {
            return Ok(None);
        }
        self.bump();
        let a = self.ty()?;
        self.expect(Tok::Arrow)?;
        let b = self.ty()?;
        Ok(Some((a, b)))
    }

    fn atom(&mut self) -> Result<(Term, SpanTree), ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Ident(name) => {
                if let Some(p) = Prim::from_name(&name) {
                    return Ok((Term::Prim(p), SpanTree::leaf(span)));
                }
                let mut args = Vec::new();
                let mut children = Vec::new();
                if *self.peek() == Tok::LParen {
                    self.bump();
                    loop {
                        let is_int = matches!(self.peek(), Tok::Int(_))
                            && matches!(self.toks.get(self.pos + 1).map(|t| &t.0), Some(Tok::Comma | Tok::RParen));
                        if is_int {
                            if let (Tok::Int(n), _) = self.bump() {
                                args.push(Arg::Int(n));
                            }
                        } else {
                            let (t, s) = self.seq()?;
                            args.push(Arg::Term(t));
                            children.push(s);
                        }
                        match self.bump() {
                            (Tok::Comma, _) => continue,
                            (Tok::RParen, _) => break,
                            (tok, span) => {
                                return Err(ParseError { span, message: format!("expected `,` or `)`, found {tok}") })
                            }
                        }
                    }
                }
                Ok((Term::Macro(name, args), SpanTree { span, children }))
            }
            Tok::Var(v) => Ok((Term::Var(v), SpanTree::leaf(span))),
            Tok::LParen => {
                let (t, s) = self.seq()?;
                let out = match self.annotation()? {
                    Some((a, b)) => (Term::ann(t, a, b), SpanTree { span, children: vec![s] }),
                    None => (t, s),
                };
                self.expect(Tok::RParen)?;
                Ok(out)
            }
            other => Err(ParseError { span, message: format!("expected a term, found {other}") }),
        }
    }

    fn ty(&mut self) -> Result<ValueType, ParseError> {
        let l = self.ty_prod()?;
        if *self.peek() == Tok::Plus {
            self.bump();
            Ok(ValueType::sum(l, self.ty()?))
        } else {
            Ok(l)
        }
    }

    fn ty_prod(&mut self) -> Result<ValueType, ParseError> {
        let l = self.ty_atom()?;
        if *self.peek() == Tok::Star {
            self.bump();
            Ok(ValueType::prod(l, self.ty_prod()?))
        } else {
            Ok(l)
        }
    }

    fn ty_atom(&mut self) -> Result<ValueType, ParseError> {
        let (tok, span) = self.bump();
        match tok {
            Tok::Int(0) => Ok(ValueType::Zero),
            Tok::Int(1) => Ok(ValueType::One),
            Tok::Int(2) => Ok(ValueType::two()),
            Tok::LParen => {
                let t = self.ty()?;
                self.expect(Tok::RParen)?;
                Ok(t)
            }
            other => Err(ParseError { span, message: format!("expected a type (0, 1, 2 or parenthesized), found {other}") }),
        }
    }
}

/// Parse a term together with a tree of source positions.
pub fn parse_with_spans(text: &str) -> Result<(Term, SpanTree), ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let (t, s) = p.seq()?;
    let out = match p.annotation()? {
        Some((a, b)) => (Term::ann(t, a, b), SpanTree { span: s.span, children: vec![s] }),
        None => (t, s),
    };
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {} after term", p.peek()));
    }
    Ok(out)
}

pub fn parse(text: &str) -> Result<Term, ParseError> {
    parse_with_spans(text).map(|(t, _)| t)
}

pub fn parse_type(text: &str) -> Result<ValueType, ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let t = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {} after type", p.peek()));
    }
    Ok(t)
}

/// Parse `type <-> type`.
pub fn parse_signature(text: &str) -> Result<(ValueType, ValueType), ParseError> {
    let mut p = Parser { toks: lex(text)?, pos: 0 };
    let a = p.ty()?;
    p.expect(Tok::Arrow)?;
    let b = p.ty()?;
    if *p.peek() != Tok::Eof {
        return p.err(format!("unexpected {} after signature", p.peek()));
    }
    Ok((a, b))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn primitive_names_with_operators() {
        assert_eq!(p("swap+"), Term::Prim(Prim::SwapPlus));
        assert_eq!(p("unite*l"), Term::Prim(Prim::UniteTimesL));
        assert_eq!(p("swap+ + id"), Term::sum(Prim::SwapPlus.into(), Term::id()));
        assert_eq!(p("swap++id"), Term::sum(Prim::SwapPlus.into(), Term::id()));
        assert_eq!(p("uniti+l;unite+l"), Term::seq(Prim::UnitiPlusL.into(), Prim::UnitePlusL.into()));
    }

    #[test]
    fn precedence_and_associativity() {
        let t = p("dist ; id + id * swap+ ; factor");
        let mid = Term::sum(Term::id(), Term::prod(Term::id(), Prim::SwapPlus.into()));
        assert_eq!(t, Term::seq(Prim::Dist.into(), Term::seq(mid, Prim::Factor.into())));
        assert_eq!(p("a ; b ; c"), Term::seq(Term::name("a"), Term::seq(Term::name("b"), Term::name("c"))));
    }

    #[test]
    fn powers_and_macros() {
        assert_eq!(p("w^3"), Term::pow(&Prim::W.into(), 3));
        let t = p("at(3, 1, 0, cx)");
        assert_eq!(t, Term::mac("at", vec![Arg::Int(3), Arg::Int(1), Arg::Int(0), Arg::Term(Term::name("cx"))]));
        assert_eq!(p("ctrl(?m)"), Term::mac("ctrl", vec![Arg::Term(Term::Var("m".into()))]));
    }

    #[test]
    fn annotations() {
        let t = p("swap+ : 2 <-> 2");
        assert_eq!(t, Term::ann(Prim::SwapPlus.into(), ValueType::two(), ValueType::two()));
        let t = p("(id : 1 + 0 ↔ 1 + 0) ⨾ id");
        assert!(matches!(t, Term::Seq(..)));
        assert_eq!(parse_type("2*2*2").unwrap(), ValueType::qubits(3));
    }

    #[test]
    fn errors_carry_positions() {
        let e = parse("v ;\n  (w").unwrap_err();
        assert_eq!(e.span.line, 2);
        let e = parse("v $ w").unwrap_err();
        assert_eq!(e.span, Span { line: 1, col: 3 });
        assert!(parse("v v").is_err());
    }

    #[test]
    fn round_trip_samples() {
        for s in [
            "v ; v",
            "id + w",
            "(id ; id) ; id",
            "uniti*l ; (w * (swap+ ; (id + w ; w) ; v)) ; unite*l",
            "(swap+ : 2 <-> 2) * id",
            "ctrl(ctrl(swap+))",
            "(a + b) * c ; ?x",
        ] {
            let t = p(s);
            assert_eq!(p(&t.pretty()), t, "{s}");
        }
    }

    #[test]
    fn spans_follow_structure() {
        let (_, spans) = parse_with_spans("v ; (w + id)").unwrap();
        assert_eq!(spans.span_at(&[1, 0]), Span { line: 1, col: 6 });
        assert_eq!(spans.span_at(&[1, 1]), Span { line: 1, col: 10 });
    }
}
