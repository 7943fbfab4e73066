use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde_json::{json, Value};

use super::rules::{find_rule, rule_db, Direction, Orientation, RewriteRule, SideCondition};
use crate::lang::{grounded_signature, invert, parse, parse_signature, Arg, Term, TypeError, ValueType};
use crate::semantics::{adjoint, compose, eval};
use crate::{elaborate, gates, Error};

pub type Bindings = BTreeMap<String, Term>;
type Signature = (ValueType, ValueType);

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RewriteError {
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("no subterm at path {0:?}")]
    PathInvalid(Vec<usize>),
    #[error("rule `{rule}` does not match at {path:?}: {reason}")]
    NoMatch { rule: String, path: Vec<usize>, reason: String },
    #[error("rule `{rule}` at {path:?} gives an ill-typed term: {message}")]
    IllTyped { rule: String, path: Vec<usize>, message: String },
    #[error("input term: {0}")]
    Input(String),
}

/// Right-nest every `;` chain, including inside annotations and macro arguments.
pub fn normalize(t: &Term) -> Term {
    match t {
        Term::Seq(..) => {
            let mut elems = Vec::new();
            flatten(t, &mut elems);
            Term::seq_all(elems)
        }
        Term::Sum(a, b) => Term::sum(normalize(a), normalize(b)),
        Term::Prod(a, b) => Term::prod(normalize(a), normalize(b)),
        Term::Ann(c, a, b) => Term::ann(normalize(c), a.clone(), b.clone()),
        Term::Macro(n, args) => Term::Macro(
            n.clone(),
            args.iter()
                .map(|a| match a {
                    Arg::Term(t) => Arg::Term(normalize(t)),
                    i => i.clone(),
                })
                .collect(),
        ),
        Term::Prim(_) | Term::Var(_) => t.clone(),
    }
}

fn flatten(t: &Term, out: &mut Vec<Term>) {
    match t {
        Term::Seq(a, b) => {
            flatten(a, out);
            flatten(b, out);
        }
        t => out.push(normalize(t)),
    }
}

/// Elements of a (normalized) `;` chain; a non-sequence is a chain of one.
pub fn chain(t: &Term) -> Vec<&Term> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Term::Seq(a, b) = cur {
        out.push(&**a);
        cur = b;
    }
    out.push(cur);
    out
}

fn child(t: &Term, i: usize) -> Option<&Term> {
    match (t, i) {
        (Term::Seq(..), _) => {
            let mut cur = t;
            for _ in 0..i {
                match cur {
                    Term::Seq(_, b) => cur = b,
                    _ => return None,
                }
            }
            Some(match cur {
                Term::Seq(a, _) => a,
                last => last,
            })
        }
        (Term::Sum(a, _) | Term::Prod(a, _), 0) | (Term::Ann(a, _, _), 0) => Some(a),
        (Term::Sum(_, b) | Term::Prod(_, b), 1) => Some(b),
        (Term::Macro(_, args), _) => match args.get(i) {
            Some(Arg::Term(t)) => Some(t),
            _ => None,
        },
        _ => None,
    }
}

/// Subterm addressed by `path`. Children of a `;` chain are its elements,
/// of `+`/`*` the two operands, of an annotation its body, of a macro call
/// its term arguments (by argument position).
pub fn subterm<'a>(t: &'a Term, path: &[usize]) -> Option<&'a Term> {
    path.iter().try_fold(t, |cur, &i| child(cur, i))
}

fn rebuild(t: &Term, path: &[usize], f: &mut dyn FnMut(&Term) -> Option<Term>) -> Option<Term> {
    let Some((&i, rest)) = path.split_first() else {
        return f(t);
    };
    Some(match t {
        Term::Seq(..) => {
            let mut elems: Vec<Term> = chain(t).into_iter().cloned().collect();
            let new = rebuild(elems.get(i)?, rest, f)?;
            elems[i] = new;
            Term::seq_all(elems)
        }
        Term::Sum(a, b) | Term::Prod(a, b) => {
            let (a, b) = match i {
                0 => (rebuild(a, rest, f)?, (**b).clone()),
                1 => ((**a).clone(), rebuild(b, rest, f)?),
                _ => return None,
            };
            if matches!(t, Term::Sum(..)) {
                Term::sum(a, b)
            } else {
                Term::prod(a, b)
            }
        }
        Term::Ann(c, a, b) if i == 0 => Term::ann(rebuild(c, rest, f)?, a.clone(), b.clone()),
        Term::Macro(n, args) => {
            let mut args = args.clone();
            let Some(Arg::Term(arg)) = args.get(i) else { return None };
            args[i] = Arg::Term(rebuild(arg, rest, f)?);
            Term::Macro(n.clone(), args)
        }
        _ => return None,
    })
}

/// All node paths in pre-order, each flagged with whether it is an element of a `;` chain.
pub fn positions(t: &Term) -> Vec<(Vec<usize>, bool)> {
    fn go(t: &Term, path: &mut Vec<usize>, in_chain: bool, out: &mut Vec<(Vec<usize>, bool)>) {
        out.push((path.clone(), in_chain));
        let is_seq = matches!(t, Term::Seq(..));
        let n = match t {
            Term::Seq(..) => chain(t).len(),
            Term::Sum(..) | Term::Prod(..) => 2,
            Term::Ann(..) => 1,
            Term::Macro(_, args) => args.len(),
            _ => 0,
        };
        for i in 0..n {
            if let Some(c) = child(t, i) {
                path.push(i);
                go(c, path, is_seq, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), false, &mut out);
    out
}

/// `match_pattern` without bindings: same constructors and primitives, with
/// variables matching anything. Cheap enough to run at every position.
fn shape_ok(p: &Term, t: &Term) -> bool {
    match (p, t) {
        (Term::Var(_), _) => true,
        (Term::Prim(a), Term::Prim(c)) => a == c,
        (Term::Seq(p1, p2), Term::Seq(t1, t2))
        | (Term::Sum(p1, p2), Term::Sum(t1, t2))
        | (Term::Prod(p1, p2), Term::Prod(t1, t2)) => shape_ok(p1, t1) && shape_ok(p2, t2),
        (Term::Ann(p, a, c), Term::Ann(t, a2, c2)) => a == a2 && c == c2 && shape_ok(p, t),
        (Term::Macro(n, ps), Term::Macro(m, ts)) => {
            n == m
                && ps.len() == ts.len()
                && ps.iter().zip(ts).all(|pair| match pair {
                    (Arg::Int(i), Arg::Int(j)) => i == j,
                    (Arg::Term(p), Arg::Term(t)) => shape_ok(p, t),
                    _ => false,
                })
        }
        _ => false,
    }
}

/// Whether `lhs` could match at `path` (see `rewrite_at` for how chain
/// patterns pick their window).
fn may_match(t: &Term, lhs: &Term, path: &[usize]) -> bool {
    let Some(node) = subterm(t, path) else { return false };
    if !matches!(lhs, Term::Seq(..)) {
        return shape_ok(lhs, node);
    }
    let window = match node {
        Term::Seq(..) => node,
        _ => {
            let Some((&last, parent)) = path.split_last() else { return false };
            match subterm(t, parent) {
                Some(par @ Term::Seq(..)) => {
                    let mut cur = par;
                    for _ in 0..last {
                        match cur {
                            Term::Seq(_, b) => cur = b,
                            _ => return false,
                        }
                    }
                    cur
                }
                _ => return false,
            }
        }
    };
    // walk the pattern chain against the window, element by element
    let (mut p, mut w): (Option<&Term>, &Term) = (Some(lhs), window);
    while let Some(pc) = p {
        let (ph, pt) = match pc {
            Term::Seq(a, b) => (&**a, Some(&**b)),
            last => (last, None),
        };
        let (wh, wt) = match w {
            Term::Seq(a, b) => (&**a, Some(&**b)),
            last => (last, None),
        };
        if !shape_ok(ph, wh) {
            return false;
        }
        match (pt, wt) {
            (Some(_), None) => return false,
            (Some(_), Some(next)) => w = next,
            (None, _) => {}
        }
        p = pt;
    }
    true
}

/// A phase factor may not be pushed into one summand or into a macro argument.
fn phase_allowed(t: &Term, path: &[usize]) -> bool {
    let mut cur = t;
    for &i in path {
        if matches!(cur, Term::Sum(..) | Term::Macro(..)) {
            return false;
        }
        match child(cur, i) {
            Some(c) => cur = c,
            None => return false,
        }
    }
    true
}

/// First-order matching; repeated variables must bind equal terms.
pub fn match_pattern(p: &Term, t: &Term, b: &mut Bindings) -> bool {
    match (p, t) {
        (Term::Var(x), _) => match b.get(x) {
            Some(v) => v == t,
            None => {
                b.insert(x.clone(), t.clone());
                true
            }
        },
        (Term::Prim(a), Term::Prim(c)) => a == c,
        (Term::Seq(p1, p2), Term::Seq(t1, t2))
        | (Term::Sum(p1, p2), Term::Sum(t1, t2))
        | (Term::Prod(p1, p2), Term::Prod(t1, t2)) => match_pattern(p1, t1, b) && match_pattern(p2, t2, b),
        (Term::Ann(p, a, c), Term::Ann(t, a2, c2)) => a == a2 && c == c2 && match_pattern(p, t, b),
        (Term::Macro(n, ps), Term::Macro(m, ts)) => {
            n == m
                && ps.len() == ts.len()
                && ps.iter().zip(ts).all(|pair| match pair {
                    (Arg::Int(i), Arg::Int(j)) => i == j,
                    (Arg::Term(p), Arg::Term(t)) => match_pattern(p, t, b),
                    _ => false,
                })
        }
        _ => false,
    }
}

pub fn substitute(p: &Term, b: &Bindings) -> Result<Term, String> {
    Ok(match p {
        Term::Var(x) => b.get(x).cloned().ok_or_else(|| format!("variable ?{x} is not bound"))?,
        Term::Prim(_) => p.clone(),
        Term::Seq(x, y) => Term::seq(substitute(x, b)?, substitute(y, b)?),
        Term::Sum(x, y) => Term::sum(substitute(x, b)?, substitute(y, b)?),
        Term::Prod(x, y) => Term::prod(substitute(x, b)?, substitute(y, b)?),
        Term::Ann(t, x, y) => Term::ann(substitute(t, b)?, x.clone(), y.clone()),
        Term::Macro(n, args) => Term::Macro(
            n.clone(),
            args.iter()
                .map(|a| match a {
                    Arg::Term(t) => substitute(t, b).map(Arg::Term),
                    i => Ok(i.clone()),
                })
                .collect::<Result<_, _>>()?,
        ),
    })
}

/// `a` denotes the inverse of `b`: syntactically, or by evaluating both when
/// one of them determines the types.
pub fn inverse_of(a: &Term, b: &Term) -> bool {
    if normalize(&invert(b)) == *a {
        return true;
    }
    // the simplifier asks this of every adjacent pair, every step
    thread_local! {
        static SEEN: RefCell<HashMap<(Term, Term), bool>> = RefCell::new(HashMap::new());
    }
    let key = (a.clone(), b.clone());
    if let Some(r) = SEEN.with(|m| m.borrow().get(&key).copied()) {
        return r;
    }
    let r = semantic_inverse(a, b);
    SEEN.with(|m| {
        let mut m = m.borrow_mut();
        if m.len() > 50_000 {
            m.clear();
        }
        m.insert(key, r);
    });
    r
}

fn semantic_inverse(a: &Term, b: &Term) -> bool {
    let typed = match elaborate(b, None) {
        Ok(tb) => elaborate(a, Some((&tb.tgt, &tb.src))).map(|ta| (ta, tb)),
        Err(_) => elaborate(a, None).and_then(|ta| elaborate(b, Some((&ta.tgt, &ta.src))).map(|tb| (ta, tb))),
    };
    match typed {
        Ok((ta, tb)) => eval(&ta) == adjoint(&eval(&tb)),
        Err(_) => false,
    }
}

pub fn involutive(f: &Term) -> bool {
    if normalize(&invert(f)) == *f {
        return true;
    }
    match elaborate(f, None) {
        Ok(tf) => {
            let m = eval(&tf);
            m.is_square() && compose(&m, &m).is_identity()
        }
        Err(_) => false,
    }
}

/// Check side conditions, binding variables they determine.
pub fn check_side(side: &[SideCondition], b: &mut Bindings) -> Result<(), String> {
    for c in side {
        match c {
            SideCondition::Inverse(x, y) => {
                let Some(ty) = b.get(y).cloned() else {
                    return Err(format!("?{y} is not bound"));
                };
                match b.get(x) {
                    None => {
                        b.insert(x.clone(), normalize(&invert(&ty)));
                    }
                    Some(tx) if inverse_of(tx, &ty) => {}
                    Some(_) => return Err(format!("side condition `{c}` fails")),
                }
            }
            SideCondition::Involutive(f) => match b.get(f) {
                Some(tf) if involutive(tf) => {}
                Some(_) => return Err(format!("side condition `{c}` fails")),
                None => return Err(format!("?{f} is not bound")),
            },
        }
    }
    Ok(())
}

/// Rewrite `lhs` to `rhs` at `path`, without type checking. A `;`-chain pattern
/// matches the window of the enclosing chain that starts at the addressed element
/// (or the start of the chain, if the path addresses the chain itself).
pub fn rewrite_at(
    t: &Term,
    lhs: &Term,
    rhs: &Term,
    side: &[SideCondition],
    path: &[usize],
) -> Result<Term, Result<String, ()>> {
    let pats = chain(lhs);
    let mut b = Bindings::new();
    let node = subterm(t, path).ok_or(Err(()))?;
    let out = if pats.len() >= 2 {
        let (parent, start) = match node {
            Term::Seq(..) => (path, 0),
            _ => match path.split_last() {
                Some((&last, parent)) if matches!(subterm(t, parent), Some(Term::Seq(..))) => (parent, last),
                _ => return Err(Ok("no sequence at this position".into())),
            },
        };
        let elems = chain(subterm(t, parent).expect("parent exists"));
        if start + pats.len() > elems.len() {
            return Err(Ok("sequence too short".into()));
        }
        if !pats.iter().zip(&elems[start..]).all(|(p, e)| match_pattern(p, e, &mut b)) {
            return Err(Ok("pattern does not match".into()));
        }
        check_side(side, &mut b).map_err(Ok)?;
        let new = substitute(rhs, &b).map_err(Ok)?;
        let mut replacement: Vec<Term> = elems[..start].iter().map(|&e| e.clone()).collect();
        replacement.push(new);
        replacement.extend(elems[start + pats.len()..].iter().map(|&e| e.clone()));
        rebuild(t, parent, &mut |_| Some(Term::seq_all(replacement.clone()))).ok_or(Err(()))?
    } else {
        if !match_pattern(lhs, node, &mut b) {
            return Err(Ok("pattern does not match".into()));
        }
        check_side(side, &mut b).map_err(Ok)?;
        let new = substitute(rhs, &b).map_err(Ok)?;
        rebuild(t, path, &mut |_| Some(new.clone())).ok_or(Err(()))?
    };
    Ok(normalize(&out))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceStep {
    pub rule: String,
    pub path: Vec<usize>,
    pub direction: Direction,
    /// `before = w^phase . after`.
    pub phase: u8,
    pub term: Term,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RewriteTrace {
    pub start: Term,
    pub signature: (ValueType, ValueType),
    pub steps: Vec<TraceStep>,
}

impl RewriteTrace {
    pub fn result(&self) -> &Term {
        self.steps.last().map_or(&self.start, |s| &s.term)
    }

    /// `eval(start) = w^k eval(result)`.
    pub fn total_phase(&self) -> u8 {
        (self.steps.iter().map(|s| s.phase as u32).sum::<u32>() % 8) as u8
    }

    pub fn to_json(&self) -> Value {
        json!({
            "start": self.start.to_string(),
            "type": format!("{} <-> {}", self.signature.0, self.signature.1),
            "steps": self.steps.iter().map(|s| json!({
                "rule": s.rule,
                "path": s.path,
                "direction": s.direction.as_str(),
                "phase": s.phase,
                "term": s.term.to_string(),
            })).collect::<Vec<_>>(),
            "phase": self.total_phase(),
        })
    }

    pub fn from_json(v: &Value) -> Result<RewriteTrace, String> {
        let text = |v: &Value, k: &str| v.get(k).and_then(Value::as_str).map(str::to_string).ok_or(format!("missing \"{k}\""));
        let term = |s: String| parse(&s).map(|t| normalize(&t)).map_err(|e| e.to_string());
        let signature = parse_signature(&text(v, "type")?).map_err(|e| e.to_string())?;
        let steps = v
            .get("steps")
            .and_then(Value::as_array)
            .ok_or("missing \"steps\"")?
            .iter()
            .map(|s| {
                let path = s
                    .get("path")
                    .and_then(Value::as_array)
                    .ok_or("missing \"path\"")?
                    .iter()
                    .map(|i| i.as_u64().map(|i| i as usize).ok_or("bad path index".to_string()))
                    .collect::<Result<_, _>>()?;
                Ok(TraceStep {
                    rule: text(s, "rule")?,
                    path,
                    direction: Direction::parse(&text(s, "direction")?).ok_or("bad direction")?,
                    phase: s.get("phase").and_then(Value::as_u64).ok_or("missing \"phase\"")? as u8,
                    term: term(text(s, "term")?)?,
                })
            })
            .collect::<Result<_, String>>()?;
        Ok(RewriteTrace { start: term(text(v, "start")?)?, signature, steps })
    }
}

impl fmt::Display for RewriteTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "    {}", self.start)?;
        for (i, s) in self.steps.iter().enumerate() {
            write!(f, "{:>3}. {} ({}) at {:?}", i + 1, s.rule, s.direction, s.path)?;
            if s.phase != 0 {
                write!(f, "  [w^{}]", s.phase)?;
            }
            writeln!(f)?;
            writeln!(f, "    {}", s.term)?;
        }
        if self.total_phase() != 0 {
            writeln!(f, "phase: w^{}", self.total_phase())?;
        }
        Ok(())
    }
}

/// Rewriting against a fixed rule set.
pub struct Rewriter<'r> {
    rules: &'r [RewriteRule],
}

impl Default for Rewriter<'static> {
    fn default() -> Self {
        Rewriter { rules: rule_db() }
    }
}

impl<'r> Rewriter<'r> {
    pub fn new(rules: &'r [RewriteRule]) -> Rewriter<'r> {
        Rewriter { rules }
    }

    pub fn rules(&self) -> &'r [RewriteRule] {
        self.rules
    }

    /// Signature of the (normalized) input. Without an expected signature, type
    /// variables left open by the term are read as `1`.
    pub fn signature(&self, t: &Term, expected: Option<(&ValueType, &ValueType)>) -> Result<Signature, RewriteError> {
        let input = |e: Error| RewriteError::Input(e.to_string());
        match elaborate(t, expected) {
            Ok(typed) => Ok((typed.src, typed.tgt)),
            Err(Error::Type(TypeError::Unresolved { .. })) if expected.is_none() => {
                let core = gates::expand(t).map_err(|e| input(e.into()))?;
                let sig = grounded_signature(&core).map_err(|e| input(e.into()))?;
                elaborate(t, Some((&sig.0, &sig.1))).map_err(input)?;
                Ok(sig)
            }
            Err(e) => Err(input(e)),
        }
    }

    fn step(&self, t: &Term, sig: &Signature, rule: &RewriteRule, path: &[usize], dir: Direction) -> Result<TraceStep, RewriteError> {
        let (lhs, rhs, phase) = rule.oriented(dir);
        let out = rewrite_at(t, lhs, rhs, &rule.side, path).map_err(|e| match e {
            Ok(reason) => RewriteError::NoMatch { rule: rule.name.clone(), path: path.to_vec(), reason },
            Err(()) => RewriteError::PathInvalid(path.to_vec()),
        })?;
        if phase != 0 && !phase_allowed(t, path) {
            return Err(RewriteError::NoMatch {
                rule: rule.name.clone(),
                path: path.to_vec(),
                reason: "a phase-carrying rule cannot apply under `+` or inside a macro argument".into(),
            });
        }
        elaborate(&out, Some((&sig.0, &sig.1))).map_err(|e| RewriteError::IllTyped {
            rule: rule.name.clone(),
            path: path.to_vec(),
            message: e.to_string(),
        })?;
        Ok(TraceStep { rule: rule.name.clone(), path: path.to_vec(), direction: dir, phase, term: out })
    }

    /// One rewrite step; the result is checked to have the input's type.
    pub fn apply(
        &self,
        t: &Term,
        rule: &str,
        path: &[usize],
        dir: Direction,
        expected: Option<(&ValueType, &ValueType)>,
    ) -> Result<TraceStep, RewriteError> {
        let r = find_rule(self.rules, rule).ok_or_else(|| RewriteError::UnknownRule(rule.to_string()))?;
        let t = normalize(t);
        let sig = self.signature(&t, expected)?;
        self.step(&t, &sig, r, path, dir)
    }

    /// Apply a given sequence of steps.
    pub fn replay(
        &self,
        start: &Term,
        expected: Option<(&ValueType, &ValueType)>,
        steps: &[(&str, &[usize], Direction)],
    ) -> Result<RewriteTrace, RewriteError> {
        let start = normalize(start);
        let sig = self.signature(&start, expected)?;
        let mut trace = RewriteTrace { start: start.clone(), signature: sig.clone(), steps: Vec::new() };
        let mut cur = start;
        for (name, path, dir) in steps {
            let r = find_rule(self.rules, name).ok_or_else(|| RewriteError::UnknownRule(name.to_string()))?;
            let s = self.step(&cur, &sig, r, path, *dir)?;
            cur = s.term.clone();
            trace.steps.push(s);
        }
        Ok(trace)
    }

    fn first_forward(&self, t: &Term, sig: &Signature, pos: &[(Vec<usize>, bool)]) -> Option<TraceStep> {
        for r in self.rules.iter().filter(|r| r.orient == Orientation::Forward) {
            let is_chain = chain(&r.lhs).len() >= 2;
            for (path, in_chain) in pos {
                if (is_chain && !in_chain) || !may_match(t, &r.lhs, path) {
                    continue;
                }
                if let Ok(s) = self.step(t, sig, r, path, Direction::Forward) {
                    return Some(s);
                }
            }
        }
        None
    }

    fn best_decrease(&self, t: &Term, sig: &Signature, pos: &[(Vec<usize>, bool)]) -> Option<TraceStep> {
        let size = t.size();
        let mut cands = Vec::new();
        for (ri, r) in self.rules.iter().enumerate() {
            let dirs: &[Direction] = match r.orient {
                Orientation::Fold => &[Direction::Backward],
                Orientation::Both => &[Direction::Forward, Direction::Backward],
                Orientation::Forward | Orientation::None => continue,
            };
            for &dir in dirs {
                let (lhs, rhs, phase) = r.oriented(dir);
                let is_chain = chain(lhs).len() >= 2;
                for (pi, (path, in_chain)) in pos.iter().enumerate() {
                    if (is_chain && !in_chain) || (phase != 0 && !phase_allowed(t, path)) || !may_match(t, lhs, path) {
                        continue;
                    }
                    if let Ok(out) = rewrite_at(t, lhs, rhs, &r.side, path) {
                        let n = out.size();
                        if n < size {
                            cands.push((n, ri, pi, dir == Direction::Backward, dir, out));
                        }
                    }
                }
            }
        }
        cands.sort_by_key(|c| (c.0, c.1, c.2, c.3));
        cands.into_iter().find_map(|(_, ri, pi, _, dir, out)| {
            let r = &self.rules[ri];
            elaborate(&out, Some((&sig.0, &sig.1))).ok()?;
            Some(TraceStep { rule: r.name.clone(), path: pos[pi].0.clone(), direction: dir, phase: r.oriented(dir).2, term: out })
        })
    }

    /// Greedy simplification: forward rules first, then the rewrite that shrinks
    /// the term the most. Stops at a fixed point or after `budget` steps.
    pub fn simplify(
        &self,
        t: &Term,
        expected: Option<(&ValueType, &ValueType)>,
        budget: usize,
    ) -> Result<RewriteTrace, RewriteError> {
        let start = normalize(t);
        let sig = self.signature(&start, expected)?;
        let mut trace = RewriteTrace { start: start.clone(), signature: sig.clone(), steps: Vec::new() };
        let mut cur = start;
        while trace.steps.len() < budget {
            let pos = positions(&cur);
            let Some(s) = self.first_forward(&cur, &sig, &pos).or_else(|| self.best_decrease(&cur, &sig, &pos)) else {
                break;
            };
            cur = s.term.clone();
            trace.steps.push(s);
        }
        Ok(trace)
    }
}

/// Expand every macro, then drop the type annotations the expansion introduced
/// when the bare term still has the original signature. Rules are stated over
/// unannotated terms, so this is the form the rewriter works best on.
pub fn unfold(t: &Term) -> Result<Term, RewriteError> {
    let sig = Rewriter::default().signature(t, None)?;
    let core = normalize(&gates::expand(t).map_err(|e| RewriteError::Input(e.to_string()))?);
    let bare = core.erase_annotations();
    Ok(if elaborate(&bare, Some((&sig.0, &sig.1))).is_ok() { bare } else { core })
}

/// Apply one catalog rule at `path`.
pub fn apply_rule(t: &Term, rule: &str, path: &[usize], dir: Direction) -> Result<Term, RewriteError> {
    Rewriter::default().apply(t, rule, path, dir, None).map(|s| s.term)
}

/// Simplify with the built-in rules.
pub fn simplify(t: &Term, budget: usize) -> Result<(Term, RewriteTrace), RewriteError> {
    let trace = Rewriter::default().simplify(t, None, budget)?;
    Ok((trace.result().clone(), trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{equal_matrices, MatrixEq, PhaseMode};
    use crate::{denote, elaborate_pair};
    use Direction::{Backward, Forward};

    fn p(s: &str) -> Term {
        parse(s).unwrap()
    }

    #[test]
    fn normalize_right_nests() {
        let t = normalize(&p("((h ; s) ; x) ; (v ; w)"));
        assert_eq!(chain(&t).len(), 5);
        assert_eq!(t, normalize(&t));
    }

    #[test]
    fn paths_address_chain_elements() {
        let t = normalize(&p("h ; (x + w) ; s"));
        assert_eq!(subterm(&t, &[1, 1]), Some(&p("w")));
        assert_eq!(subterm(&t, &[2]), Some(&p("s")));
        assert_eq!(subterm(&t, &[3]), None);
        let pos = positions(&t);
        assert_eq!(pos[0], (vec![], false));
        assert!(pos.contains(&(vec![1, 0], false)));
        assert!(pos.contains(&(vec![2], true)));
    }

    #[test]
    fn nonlinear_patterns_need_equal_bindings() {
        let mut b = Bindings::new();
        assert!(match_pattern(&p("?a ; ?a"), &normalize(&p("h ; h")), &mut b));
        assert_eq!(b["a"], p("h"));
        assert!(!match_pattern(&p("?a ; ?a"), &normalize(&p("h ; s")), &mut Bindings::new()));
    }

    #[test]
    fn hom_sum_on_the_phase_square() {
        let out = apply_rule(&p("(id + w^2) ; (id + w^2)"), "hom-sum", &[], Forward).unwrap();
        assert_eq!(out, normalize(&p("(id ; id) + (w ; w ; w ; w)")));
    }

    #[test]
    fn e2_matches_only_v_v() {
        assert_eq!(apply_rule(&p("v ; v"), "E2", &[], Forward).unwrap(), p("x"));
        assert!(matches!(apply_rule(&p("w"), "E2", &[], Forward), Err(RewriteError::NoMatch { .. })));
        assert!(matches!(apply_rule(&p("v ; v"), "E2", &[4], Forward), Err(RewriteError::PathInvalid(_))));
        assert!(matches!(apply_rule(&p("v"), "nope", &[], Forward), Err(RewriteError::UnknownRule(_))));
    }

    #[test]
    fn window_inside_a_longer_chain() {
        let out = apply_rule(&p("h ; v ; v ; h"), "E2", &[1], Forward).unwrap();
        assert_eq!(out, normalize(&p("h ; x ; h")));
    }

    #[test]
    fn ill_typed_results_are_rejected() {
        // x only lives at 1 + 1
        let t = p("(swap+ : 1 + 2 <-> 2 + 1)");
        let r = Rewriter::default().apply(&t, "def-x", &[0], Backward, None);
        assert!(matches!(r, Err(RewriteError::IllTyped { .. })), "{r:?}");
    }

    #[test]
    fn phase_rules_stay_out_of_sums() {
        let r = apply_rule(&p("(s ; h)^3 + id"), "A6", &[0], Forward);
        assert!(matches!(r, Err(RewriteError::NoMatch { .. })));
        let s = Rewriter::default().apply(&p("(s ; h)^3 ; x"), "A6", &[0], Forward, None).unwrap();
        assert_eq!(s.phase, 1);
        assert_eq!(s.term, normalize(&p("id ; x")));
    }

    #[test]
    fn inverse_side_condition_binds_or_checks() {
        let out = apply_rule(&p("cx ; (cx : 2 * 2 <-> 2 * 2) ; h * h"), "inv-l", &[0], Forward);
        assert!(out.is_ok(), "{out:?}");
        assert_eq!(apply_rule(&p("v ; vi"), "inv-l", &[], Forward).unwrap(), p("id"));
        assert!(apply_rule(&p("v ; v"), "inv-l", &[], Forward).is_err());
        let back = apply_rule(&p("id ; x"), "inv-l", &[0], Backward);
        assert!(back.is_err(), "unbound variables cannot be invented");
    }

    #[test]
    fn phase_square_simplifies_to_z_in_three_steps() {
        let (out, trace) = simplify(&p("(id + w^2) ; (id + w^2)"), 20).unwrap();
        assert_eq!(out, p("z"));
        let names: Vec<_> = trace.steps.iter().map(|s| s.rule.as_str()).collect();
        assert_eq!(names, ["hom-sum", "idl", "def-z"]);
    }

    #[test]
    fn s_s_unfolds_and_simplifies_to_z() {
        let start = unfold(&p("s ; s")).unwrap();
        assert_eq!(start, normalize(&p("(id + w^2) ; (id + w^2)")));
        let (out, trace) = simplify(&start, 20).unwrap();
        assert_eq!(out, p("z"));
        assert_eq!(trace.steps.len(), 3);
        assert_eq!(trace.signature, (ValueType::two(), ValueType::two()));
    }

    #[test]
    fn unit_law_and_inverse_elimination() {
        assert_eq!(simplify(&p("id ; cx"), 5).unwrap().0, p("cx"));
        assert_eq!(simplify(&p("vi"), 5).unwrap().0, normalize(&p("v ; x")));
        assert_eq!(simplify(&p("h ; h ; x"), 5).unwrap().0, p("x"));
        let (_, trace) = simplify(&p("x"), 5).unwrap();
        assert!(trace.steps.is_empty());
    }

    #[test]
    fn budget_limits_the_trace() {
        let (_, trace) = simplify(&p("h ; h ; h ; h ; x"), 1).unwrap();
        assert_eq!(trace.steps.len(), 1);
    }

    fn assert_sound(trace: &RewriteTrace) {
        let sig = (&trace.signature.0, &trace.signature.1);
        let mut prev = denote(&trace.start, Some(sig)).unwrap();
        for s in &trace.steps {
            let next = denote(&s.term, Some(sig)).unwrap();
            assert_eq!(prev, next.scale_omega(s.phase as i64), "step {} at {:?}", s.rule, s.path);
            prev = next;
        }
    }

    #[test]
    fn derivations_replay_with_catalog_rules() {
        let rw = Rewriter::default();
        let vi = rw
            .replay(
                &p("vi"),
                None,
                &[
                    ("idr", &[], Backward),
                    ("gates-ii", &[1], Backward),
                    ("E2", &[1], Backward),
                    ("inv-l", &[0], Forward),
                    ("idl", &[0], Forward),
                ],
            )
            .unwrap();
        assert_eq!(vi.result(), &normalize(&p("v ; x")));
        assert_sound(&vi);

        let wi = rw
            .replay(
                &p("wi"),
                None,
                &[("idr", &[], Backward), ("E1", &[1], Backward), ("inv-l", &[0], Forward), ("idl", &[0], Forward)],
            )
            .unwrap();
        assert_eq!(wi.result(), &normalize(&p("w^7")));
        assert_sound(&wi);

        let ss = rw
            .replay(
                &p("s ; s"),
                None,
                &[
                    ("def-s", &[0], Forward),
                    ("def-s", &[1], Forward),
                    ("hom-sum", &[0], Forward),
                    ("idl", &[0, 0], Forward),
                    ("def-z", &[], Backward),
                ],
            )
            .unwrap();
        assert_eq!(ss.result(), &p("z"));
        assert_sound(&ss);
    }

    #[test]
    fn phase_is_recorded_and_sound() {
        let (_, trace) = simplify(&p("(s ; h)^3 ; x"), 10).unwrap();
        assert_eq!(trace.total_phase(), 1);
        assert_sound(&trace);
        let (a, b) = elaborate_pair(&trace.start, trace.result(), None).unwrap();
        assert_eq!(equal_matrices(&eval(&a), &eval(&b), PhaseMode::UpToOmegaPower), MatrixEq::EqualWithPhase(1));
    }

    #[test]
    fn trace_json_round_trip() {
        let (_, trace) = simplify(&p("(id + w^2) ; (id + w^2)"), 20).unwrap();
        let v = trace.to_json();
        assert_eq!(v["steps"][0]["rule"], "hom-sum");
        assert_eq!(RewriteTrace::from_json(&v).unwrap(), trace);
    }
}
