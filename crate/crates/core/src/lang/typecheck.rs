use std::fmt;

use super::ast::{Prim, Term, ValueType};

/// Type pattern with numbered metavariables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TyPat {
    Var(usize),
    Zero,
    One,
    Sum(Box<TyPat>, Box<TyPat>),
    Prod(Box<TyPat>, Box<TyPat>),
}

impl fmt::Display for TyPat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TyPat::Var(i) => write!(f, "b{}", i + 1),
            TyPat::Zero => f.write_str("0"),
            TyPat::One => f.write_str("1"),
            TyPat::Sum(a, b) => write!(f, "({a} + {b})"),
            TyPat::Prod(a, b) => write!(f, "({a} * {b})"),
        }
    }
}

/// A primitive's polymorphic signature.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TypeScheme {
    pub src: TyPat,
    pub tgt: TyPat,
}

impl fmt::Display for TypeScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} <-> {}", self.src, self.tgt)
    }
}

pub fn scheme(p: Prim) -> TypeScheme {
    use TyPat::*;
    let v = |i| Box::new(Var(i));
    let s = |a: TyPat, b: TyPat| Sum(Box::new(a), Box::new(b));
    let m = |a: TyPat, b: TyPat| Prod(Box::new(a), Box::new(b));
    let two = || s(One, One);
    let (src, tgt) = match p {
        Prim::Id => (Var(0), Var(0)),
        Prim::SwapPlus => (Sum(v(0), v(1)), Sum(v(1), v(0))),
        Prim::AssocrPlus => (s(s(Var(0), Var(1)), Var(2)), s(Var(0), s(Var(1), Var(2)))),
        Prim::AssoclPlus => (s(Var(0), s(Var(1), Var(2))), s(s(Var(0), Var(1)), Var(2))),
        Prim::UnitePlusL => (s(Zero, Var(0)), Var(0)),
        Prim::UnitiPlusL => (Var(0), s(Zero, Var(0))),
        Prim::Absorbl => (m(Var(0), Zero), Zero),
        Prim::Factorzr => (Zero, m(Var(0), Zero)),
        Prim::SwapTimes => (Prod(v(0), v(1)), Prod(v(1), v(0))),
        Prim::AssocrTimes => (m(m(Var(0), Var(1)), Var(2)), m(Var(0), m(Var(1), Var(2)))),
        Prim::AssoclTimes => (m(Var(0), m(Var(1), Var(2))), m(m(Var(0), Var(1)), Var(2))),
        Prim::UniteTimesL => (m(One, Var(0)), Var(0)),
        Prim::UnitiTimesL => (Var(0), m(One, Var(0))),
        Prim::Dist => (m(s(Var(0), Var(1)), Var(2)), s(m(Var(0), Var(2)), m(Var(1), Var(2)))),
        Prim::Factor => (s(m(Var(0), Var(2)), m(Var(1), Var(2))), m(s(Var(0), Var(1)), Var(2))),
        Prim::V | Prim::Vi => (two(), two()),
        Prim::W | Prim::Wi => (One, One),
    };
    TypeScheme { src, tgt }
}

/// A combinator with concrete types at every node.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Typed {
    pub node: TypedNode,
    pub src: ValueType,
    pub tgt: ValueType,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TypedNode {
    Prim(Prim),
    Seq(Box<Typed>, Box<Typed>),
    Sum(Box<Typed>, Box<Typed>),
    Prod(Box<Typed>, Box<Typed>),
}

impl Typed {
    /// Back to plain syntax (annotations dropped).
    pub fn term(&self) -> Term {
        match &self.node {
            TypedNode::Prim(p) => Term::Prim(*p),
            TypedNode::Seq(a, b) => Term::seq(a.term(), b.term()),
            TypedNode::Sum(a, b) => Term::sum(a.term(), b.term()),
            TypedNode::Prod(a, b) => Term::prod(a.term(), b.term()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum TypeError {
    #[error("type mismatch at {node}: {detail}")]
    Mismatch { path: Vec<usize>, node: String, detail: String },
    #[error("type of {node} is not determined (remaining variable in {ty}); add an annotation")]
    Unresolved { path: Vec<usize>, node: String, ty: String },
    #[error("gate name `{name}` must be expanded before type checking")]
    UnexpandedMacro { path: Vec<usize>, name: String },
    #[error("pattern variable `?{name}` cannot be type checked")]
    PatternVariable { path: Vec<usize>, name: String },
}

impl TypeError {
    /// Binary path (0 = left/only child, 1 = right child) of the offending node.
    pub fn path(&self) -> &[usize] {
        match self {
            TypeError::Mismatch { path, .. }
            | TypeError::Unresolved { path, .. }
            | TypeError::UnexpandedMacro { path, .. }
            | TypeError::PatternVariable { path, .. } => path,
        }
    }
}

#[derive(Clone, Debug)]
enum Node {
    Var,
    Zero,
    One,
    Sum(usize, usize),
    Prod(usize, usize),
}

/// Union-find over type terms.
#[derive(Default)]
struct Unifier {
    nodes: Vec<Node>,
    parent: Vec<usize>,
}

impl Unifier {
    fn push(&mut self, n: Node) -> usize {
        self.nodes.push(n);
        self.parent.push(self.parent.len());
        self.parent.len() - 1
    }

    fn fresh(&mut self) -> usize {
        self.push(Node::Var)
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn intern_type(&mut self, t: &ValueType) -> usize {
        match t {
            ValueType::Zero => self.push(Node::Zero),
            ValueType::One => self.push(Node::One),
            ValueType::Sum(a, b) => {
                let (a, b) = (self.intern_type(a), self.intern_type(b));
                self.push(Node::Sum(a, b))
            }
            ValueType::Prod(a, b) => {
                let (a, b) = (self.intern_type(a), self.intern_type(b));
                self.push(Node::Prod(a, b))
            }
        }
    }

    fn intern_pat(&mut self, p: &TyPat, vars: &mut Vec<Option<usize>>) -> usize {
        match p {
            TyPat::Var(i) => {
                if vars.len() <= *i {
                    vars.resize(i + 1, None);
                }
                match vars[*i] {
                    Some(id) => id,
                    None => {
                        let id = self.fresh();
                        vars[*i] = Some(id);
                        id
                    }
                }
            }
            TyPat::Zero => self.push(Node::Zero),
            TyPat::One => self.push(Node::One),
            TyPat::Sum(a, b) => {
                let (a, b) = (self.intern_pat(a, vars), self.intern_pat(b, vars));
                self.push(Node::Sum(a, b))
            }
            TyPat::Prod(a, b) => {
                let (a, b) = (self.intern_pat(a, vars), self.intern_pat(b, vars));
                self.push(Node::Prod(a, b))
            }
        }
    }

    fn occurs(&mut self, v: usize, t: usize) -> bool {
        let t = self.find(t);
        if t == v {
            return true;
        }
        match self.nodes[t].clone() {
            Node::Sum(a, b) | Node::Prod(a, b) => self.occurs(v, a) || self.occurs(v, b),
            _ => false,
        }
    }

    fn unify(&mut self, a: usize, b: usize) -> bool {
        let (a, b) = (self.find(a), self.find(b));
        if a == b {
            return true;
        }
        match (self.nodes[a].clone(), self.nodes[b].clone()) {
            (Node::Var, _) => {
                if self.occurs(a, b) {
                    return false;
                }
                self.parent[a] = b;
                true
            }
            (_, Node::Var) => {
                if self.occurs(b, a) {
                    return false;
                }
                self.parent[b] = a;
                true
            }
            (Node::Zero, Node::Zero) | (Node::One, Node::One) => true,
            (Node::Sum(a1, a2), Node::Sum(b1, b2)) | (Node::Prod(a1, a2), Node::Prod(b1, b2)) => {
                self.unify(a1, b1) && self.unify(a2, b2)
            }
            _ => false,
        }
    }

    fn resolve(&mut self, t: usize) -> Option<ValueType> {
        let t = self.find(t);
        match self.nodes[t].clone() {
            Node::Var => None,
            Node::Zero => Some(ValueType::Zero),
            Node::One => Some(ValueType::One),
            Node::Sum(a, b) => Some(ValueType::sum(self.resolve(a)?, self.resolve(b)?)),
            Node::Prod(a, b) => Some(ValueType::prod(self.resolve(a)?, self.resolve(b)?)),
        }
    }

    /// Like `resolve`, reading every remaining variable as `1`.
    fn ground(&mut self, t: usize) -> ValueType {
        let t = self.find(t);
        match self.nodes[t].clone() {
            Node::Var | Node::One => ValueType::One,
            Node::Zero => ValueType::Zero,
            Node::Sum(a, b) => ValueType::sum(self.ground(a), self.ground(b)),
            Node::Prod(a, b) => ValueType::prod(self.ground(a), self.ground(b)),
        }
    }

    /// Render with variables named by their representative.
    fn show(&mut self, t: usize) -> String {
        let t = self.find(t);
        match self.nodes[t].clone() {
            Node::Var => format!("'t{t}"),
            Node::Zero => "0".into(),
            Node::One => "1".into(),
            Node::Sum(a, b) => {
                let (a, b) = (self.show(a), self.show(b));
                if a == "1" && b == "1" {
                    "2".into()
                } else {
                    format!("({a} + {b})")
                }
            }
            Node::Prod(a, b) => format!("({} * {})", self.show(a), self.show(b)),
        }
    }
}

enum Inf {
    Prim(Prim),
    Bin(u8, Box<Inferred>, Box<Inferred>),
}

struct Inferred {
    kind: Inf,
    src: usize,
    tgt: usize,
    path: Vec<usize>,
    shown: String,
}

struct Checker {
    u: Unifier,
}

impl Checker {
    fn mismatch(&mut self, path: &[usize], t: &Term, what: &str, a: usize, b: usize) -> TypeError {
        let detail = format!("{what}: {} vs {}", self.u.show(a), self.u.show(b));
        TypeError::Mismatch { path: path.to_vec(), node: short(t), detail }
    }

    fn infer(&mut self, t: &Term, path: &mut Vec<usize>) -> Result<Inferred, TypeError> {
        match t {
            Term::Prim(p) => {
                let sch = scheme(*p);
                let mut vars = Vec::new();
                let src = self.u.intern_pat(&sch.src, &mut vars);
                let tgt = self.u.intern_pat(&sch.tgt, &mut vars);
                Ok(Inferred { kind: Inf::Prim(*p), src, tgt, path: path.clone(), shown: short(t) })
            }
            Term::Seq(a, b) | Term::Sum(a, b) | Term::Prod(a, b) => {
                path.push(0);
                let ia = self.infer(a, path);
                path.pop();
                let ia = ia?;
                path.push(1);
                let ib = self.infer(b, path);
                path.pop();
                let ib = ib?;
                let (tag, src, tgt) = match t {
                    Term::Seq(..) => {
                        if !self.u.unify(ia.tgt, ib.src) {
                            return Err(self.mismatch(path, t, "output of left side does not match input of right side", ia.tgt, ib.src));
                        }
                        (0, ia.src, ib.tgt)
                    }
                    Term::Sum(..) => {
                        let s = self.u.push(Node::Sum(ia.src, ib.src));
                        let g = self.u.push(Node::Sum(ia.tgt, ib.tgt));
                        (1, s, g)
                    }
                    _ => {
                        let s = self.u.push(Node::Prod(ia.src, ib.src));
                        let g = self.u.push(Node::Prod(ia.tgt, ib.tgt));
                        (2, s, g)
                    }
                };
                Ok(Inferred { kind: Inf::Bin(tag, Box::new(ia), Box::new(ib)), src, tgt, path: path.clone(), shown: short(t) })
            }
            Term::Ann(inner, a, b) => {
                path.push(0);
                let i = self.infer(inner, path);
                path.pop();
                let i = i?;
                let ea = self.u.intern_type(a);
                let eb = self.u.intern_type(b);
                if !self.u.unify(i.src, ea) {
                    return Err(self.mismatch(path, t, "annotated source type", i.src, ea));
                }
                if !self.u.unify(i.tgt, eb) {
                    return Err(self.mismatch(path, t, "annotated target type", i.tgt, eb));
                }
                Ok(i)
            }
            Term::Macro(name, _) => Err(TypeError::UnexpandedMacro { path: path.clone(), name: name.clone() }),
            Term::Var(name) => Err(TypeError::PatternVariable { path: path.clone(), name: name.clone() }),
        }
    }

    fn finish(&mut self, i: &Inferred) -> Result<Typed, TypeError> {
        let src = self.u.resolve(i.src);
        let tgt = self.u.resolve(i.tgt);
        let (src, tgt) = match (src, tgt) {
            (Some(s), Some(t)) => (s, t),
            _ => {
                let ty = format!("{} <-> {}", self.u.show(i.src), self.u.show(i.tgt));
                return Err(TypeError::Unresolved { path: i.path.clone(), node: i.shown.clone(), ty });
            }
        };
        let node = match &i.kind {
            Inf::Prim(p) => TypedNode::Prim(*p),
            Inf::Bin(tag, a, b) => {
                let (a, b) = (Box::new(self.finish(a)?), Box::new(self.finish(b)?));
                match tag {
                    0 => TypedNode::Seq(a, b),
                    1 => TypedNode::Sum(a, b),
                    _ => TypedNode::Prod(a, b),
                }
            }
        };
        Ok(Typed { node, src, tgt })
    }
}

fn short(t: &Term) -> String {
    let s = t.to_string();
    if s.chars().count() > 60 {
        let head: String = s.chars().take(57).collect();
        format!("`{head}...`")
    } else {
        format!("`{s}`")
    }
}

/// Infer concrete types for every node. With `expected`, the overall signature
/// is unified with it first; otherwise any remaining polymorphism is an error.
pub fn typecheck(c: &Term, expected: Option<(&ValueType, &ValueType)>) -> Result<Typed, TypeError> {
    let mut ck = Checker { u: Unifier::default() };
    let inf = ck.infer(c, &mut Vec::new())?;
    if let Some((a, b)) = expected {
        let ea = ck.u.intern_type(a);
        let eb = ck.u.intern_type(b);
        if !ck.u.unify(inf.src, ea) {
            return Err(ck.mismatch(&[], c, "expected source type", inf.src, ea));
        }
        if !ck.u.unify(inf.tgt, eb) {
            return Err(ck.mismatch(&[], c, "expected target type", inf.tgt, eb));
        }
    }
    ck.finish(&inf)
}

/// The most general signature of a term, rendered with type variables.
pub fn principal_signature(c: &Term) -> Result<String, TypeError> {
    let mut ck = Checker { u: Unifier::default() };
    let inf = ck.infer(c, &mut Vec::new())?;
    Ok(format!("{} <-> {}", ck.u.show(inf.src), ck.u.show(inf.tgt)))
}

/// The principal signature with its type variables set to `1`.
pub fn grounded_signature(c: &Term) -> Result<(ValueType, ValueType), TypeError> {
    let mut ck = Checker { u: Unifier::default() };
    let inf = ck.infer(c, &mut Vec::new())?;
    Ok((ck.u.ground(inf.src), ck.u.ground(inf.tgt)))
}
