//! Named gates and constructions, defined as combinator terms.
//!
//! Every macro expands to core syntax; [`expand`] replaces all macro nodes of a
//! term. Gates that are otherwise polymorphic (like `x = swap+`) carry a type
//! annotation so they can be evaluated on their own.

use crate::lang::{invert, Arg, Prim, Term, ValueType};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum MacroError {
    #[error("unknown name `{0}`")]
    Unknown(String),
    #[error("bad arguments to `{name}`: {msg}")]
    BadArgs { name: String, msg: String },
    #[error("pattern variable `?{0}` in a term to expand")]
    PatternVariable(String),
}

fn prim(p: Prim) -> Term {
    Term::Prim(p)
}

fn two() -> ValueType {
    ValueType::two()
}

fn square(t: Term, ty: ValueType) -> Term {
    Term::ann(t, ty.clone(), ty)
}

/// `w^n` as a sequence of `w` (n >= 1), or `wi` repeated for negative n; `id` for 0.
pub fn omega(n: i32) -> Term {
    match n {
        0 => square(Term::id(), ValueType::One),
        n if n > 0 => prim(Prim::W).pow(n as usize),
        n => prim(Prim::Wi).pow(n.unsigned_abs() as usize),
    }
}

/// `s • c`: whisker a scalar `s : 1 <-> 1` onto `c`.
pub fn scalar_mul(s: Term, c: Term) -> Term {
    Term::seq_all([prim(Prim::UnitiTimesL), Term::prod(s, c), prim(Prim::UniteTimesL)])
}

/// `c • s`, scalar on the right, through the symmetry.
pub fn scalar_mul_right(c: Term, s: Term) -> Term {
    Term::seq_all([
        prim(Prim::UnitiTimesL),
        prim(Prim::SwapTimes),
        Term::prod(c, s),
        prim(Prim::SwapTimes),
        prim(Prim::UniteTimesL),
    ])
}

pub fn x() -> Term {
    square(prim(Prim::SwapPlus), two())
}

/// `P(s) = id + s` on one qubit.
pub fn phase(s: Term) -> Term {
    square(Term::sum(Term::id(), s), two())
}

pub fn z() -> Term {
    phase(omega(4))
}

pub fn s() -> Term {
    phase(omega(2))
}

pub fn sdg() -> Term {
    phase(omega(-2))
}

pub fn t() -> Term {
    phase(omega(1))
}

pub fn tdg() -> Term {
    phase(omega(-1))
}

/// `H = w • (X ; S ; V ; S ; X)`.
pub fn h() -> Term {
    scalar_mul(prim(Prim::W), Term::seq_all([x(), s(), prim(Prim::V), s(), x()]))
}

/// `K = w^-1 • H`.
pub fn k() -> Term {
    scalar_mul(prim(Prim::Wi), h())
}

/// `Mat : (1 + 1) * a <-> a + a`.
pub fn mat() -> Term {
    Term::seq(prim(Prim::Dist), Term::sum(prim(Prim::UniteTimesL), prim(Prim::UniteTimesL)))
}

pub fn mat_inv() -> Term {
    invert(&mat())
}

pub fn ctrl(m: Term) -> Term {
    Term::seq_all([mat(), Term::sum(Term::id(), m), mat_inv()])
}

pub fn nctrl(m: Term) -> Term {
    Term::seq_all([mat(), Term::sum(m, Term::id()), mat_inv()])
}

/// `(a + b) + (c + d) <-> (a + c) + (b + d)`.
pub fn midswap() -> Term {
    Term::seq_all([
        prim(Prim::AssocrPlus),
        Term::sum(Term::id(), prim(Prim::AssoclPlus)),
        Term::sum(Term::id(), Term::sum(prim(Prim::SwapPlus), Term::id())),
        Term::sum(Term::id(), prim(Prim::AssocrPlus)),
        prim(Prim::AssoclPlus),
    ])
}

/// Left distributor `a * (b + c) <-> a * b + a * c`.
pub fn dist_left() -> Term {
    Term::seq_all([
        prim(Prim::SwapTimes),
        prim(Prim::Dist),
        Term::sum(prim(Prim::SwapTimes), prim(Prim::SwapTimes)),
    ])
}

pub fn swap() -> Term {
    square(prim(Prim::SwapTimes), ValueType::qubits(2))
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Monoid {
    Sum,
    Prod,
}

impl Monoid {
    fn op(self, a: Term, b: Term) -> Term {
        match self {
            Monoid::Sum => Term::sum(a, b),
            Monoid::Prod => Term::prod(a, b),
        }
    }

    fn swap(self) -> Term {
        prim(match self {
            Monoid::Sum => Prim::SwapPlus,
            Monoid::Prod => Prim::SwapTimes,
        })
    }

    fn assocl(self) -> Term {
        prim(match self {
            Monoid::Sum => Prim::AssoclPlus,
            Monoid::Prod => Prim::AssoclTimes,
        })
    }
}

fn nest(m: Monoid, depth: usize, inner: Term) -> Term {
    (0..depth).fold(inner, |acc, _| m.op(Term::id(), acc))
}

/// Reassociate `u.(u.( ... .R))` so the first `k >= 2` components are grouped.
fn gather(m: Monoid, k: usize) -> Term {
    if k == 2 {
        m.assocl()
    } else {
        Term::seq(m.op(Term::id(), gather(m, k - 1)), m.assocl())
    }
}

/// Gate on `k` consecutive components at the front of an `r`-fold nesting.
fn front(m: Monoid, r: usize, k: usize, g: Term) -> Term {
    if r == k {
        g
    } else if k == 1 {
        m.op(g, Term::id())
    } else {
        let gth = gather(m, k);
        Term::seq_all([gth.clone(), m.op(g, Term::id()), invert(&gth)])
    }
}

/// Adjacent transpositions `(p, p+1)` that move `wires[i]` to position `start + i`,
/// where `start` is `wires[0]` for an ascending consecutive block and `n - k` otherwise.
pub fn route(n: usize, wires: &[usize]) -> (Vec<usize>, usize) {
    let k = wires.len();
    if wires.windows(2).all(|w| w[1] == w[0] + 1) {
        return (Vec::new(), wires[0]);
    }
    let mut arr: Vec<usize> = (0..n).collect();
    let mut swaps = Vec::new();
    for i in (0..k).rev() {
        let target = n - k + i;
        let mut p = arr.iter().position(|&w| w == wires[i]).expect("wire in range");
        while p < target {
            arr.swap(p, p + 1);
            swaps.push(p);
            p += 1;
        }
    }
    (swaps, n - k)
}

fn placed(m: Monoid, n: usize, wires: &[usize], g: Term) -> Term {
    let (swaps, start) = route(n, wires);
    let body = nest(m, start, front(m, n - start, wires.len(), g));
    let moves: Vec<Term> = swaps
        .iter()
        .map(|&p| nest(m, p, front(m, n - p, 2, m.swap())))
        .collect();
    if moves.is_empty() {
        return body;
    }
    let back: Vec<Term> = moves.iter().rev().map(invert).collect();
    Term::seq_all(moves.into_iter().chain([body]).chain(back))
}

/// Apply a `k`-qubit gate term to the given wires of an `n`-qubit register
/// (wire 0 is the most significant tensor factor).
pub fn place_on_wires(g: Term, wires: &[usize], n: usize) -> Term {
    square(placed(Monoid::Prod, n, wires, g), ValueType::qubits(n))
}

/// Apply a gate on `wires.len()` components of the `n`-fold sum `1 + (1 + ...)`.
pub fn place_on_components(g: Term, comps: &[usize], n: usize) -> Term {
    square(placed(Monoid::Sum, n, comps, g), ValueType::units(n))
}

/// Names accepted by [`named_gate`], with their qubit count (0 for scalars or
/// polymorphic constructions).
pub const GATES: &[(&str, usize)] = &[
    ("x", 1),
    ("z", 1),
    ("s", 1),
    ("sdg", 1),
    ("t", 1),
    ("tdg", 1),
    ("h", 1),
    ("k", 1),
    ("sx", 1),
    ("vdg", 1),
    ("sxdg", 1),
    ("cx", 2),
    ("cz", 2),
    ("ch", 2),
    ("ct", 2),
    ("csx", 2),
    ("csxdg", 2),
    ("ncx", 2),
    ("nch", 2),
    ("swap", 2),
    ("ccx", 3),
    ("i", 0),
    ("neg1", 0),
    ("negi", 0),
    ("mat", 0),
    ("matinv", 0),
    ("midswap", 0),
    ("dl", 0),
];

/// Qubit count of a named one-, two- or three-qubit gate.
pub fn gate_arity(name: &str) -> Option<usize> {
    let name = if name == "v" { "sx" } else { name };
    GATES.iter().find(|(n, _)| *n == name).map(|&(_, k)| k).filter(|&k| k > 0)
}

/// Expansion of an argument-free gate name.
pub fn named_gate(name: &str) -> Option<Term> {
    Some(match name {
        "x" => x(),
        "z" => z(),
        "s" => s(),
        "sdg" => sdg(),
        "t" => t(),
        "tdg" => tdg(),
        "h" => h(),
        "k" => k(),
        "sx" | "v" => square(prim(Prim::V), two()),
        "vdg" | "sxdg" => square(prim(Prim::Vi), two()),
        "cx" => ctrl(x()),
        "cz" => ctrl(z()),
        "ch" => ctrl(h()),
        "ct" => ctrl(t()),
        "csx" => ctrl(prim(Prim::V)),
        "csxdg" => ctrl(prim(Prim::Vi)),
        "ncx" => nctrl(x()),
        "nch" => nctrl(h()),
        "swap" => swap(),
        "ccx" => ctrl(ctrl(x())),
        "i" => omega(2),
        "neg1" => omega(4),
        "negi" => omega(6),
        "mat" => mat(),
        "matinv" => mat_inv(),
        "midswap" => midswap(),
        "dl" => dist_left(),
        _ => return None,
    })
}

fn bad(name: &str, msg: &str) -> MacroError {
    MacroError::BadArgs { name: name.to_string(), msg: msg.to_string() }
}

fn expand_call(name: &str, args: &[Arg]) -> Result<Term, MacroError> {
    let terms: Vec<&Term> = args
        .iter()
        .filter_map(|a| match a {
            Arg::Term(t) => Some(t),
            Arg::Int(_) => None,
        })
        .collect();
    let ints: Vec<usize> = args
        .iter()
        .filter_map(|a| match a {
            Arg::Int(n) => Some(*n),
            Arg::Term(_) => None,
        })
        .collect();
    let one_term = || -> Result<Term, MacroError> {
        match (terms.as_slice(), ints.len()) {
            ([t], 0) => expand(t),
            _ => Err(bad(name, "expected one term argument")),
        }
    };
    match name {
        "p" => Ok(phase(one_term()?)),
        "ctrl" => Ok(ctrl(one_term()?)),
        "nctrl" => Ok(nctrl(one_term()?)),
        "inv" => Ok(invert(&one_term()?)),
        "scale" | "rscale" => match (terms.as_slice(), ints.len()) {
            ([a, b], 0) => {
                let (a, b) = (expand(a)?, expand(b)?);
                Ok(if name == "scale" { scalar_mul(a, b) } else { scalar_mul_right(a, b) })
            }
            _ => Err(bad(name, "expected two term arguments")),
        },
        "at" => {
            let ([g], [n, wires @ ..]) = (terms.as_slice(), ints.as_slice()) else {
                return Err(bad(name, "expected at(n, wire, ..., gate)"));
            };
            check_wires(name, *n, wires)?;
            // the gate must be the last argument
            if !matches!(args.last(), Some(Arg::Term(_))) {
                return Err(bad(name, "the gate must be the last argument"));
            }
            Ok(place_on_wires(expand(g)?, wires, *n))
        }
        "xsum" | "ksum" | "isum" => {
            if !terms.is_empty() {
                return Err(bad(name, "expected only integer arguments"));
            }
            let want = if name == "isum" { 2 } else { 3 };
            if ints.len() != want {
                return Err(bad(name, &format!("expected {want} integer arguments")));
            }
            check_wires(name, ints[0], &ints[1..])?;
            let g = match name {
                "xsum" => prim(Prim::SwapPlus),
                "ksum" => k(),
                _ => omega(2),
            };
            Ok(place_on_components(g, &ints[1..], ints[0]))
        }
        _ => Err(MacroError::Unknown(name.to_string())),
    }
}

fn check_wires(name: &str, n: usize, wires: &[usize]) -> Result<(), MacroError> {
    if wires.is_empty() || wires.len() > n {
        return Err(bad(name, "need between 1 and n positions"));
    }
    for (i, w) in wires.iter().enumerate() {
        if *w >= n {
            return Err(bad(name, &format!("position {w} out of range for n = {n}")));
        }
        if wires[..i].contains(w) {
            return Err(bad(name, &format!("position {w} repeated")));
        }
    }
    Ok(())
}

/// Replace every macro node by its definition.
pub fn expand(t: &Term) -> Result<Term, MacroError> {
    Ok(match t {
        Term::Prim(_) => t.clone(),
        Term::Seq(a, b) => Term::seq(expand(a)?, expand(b)?),
        Term::Sum(a, b) => Term::sum(expand(a)?, expand(b)?),
        Term::Prod(a, b) => Term::prod(expand(a)?, expand(b)?),
        Term::Ann(c, a, b) => Term::ann(expand(c)?, a.clone(), b.clone()),
        Term::Var(v) => return Err(MacroError::PatternVariable(v.clone())),
        Term::Macro(name, args) if args.is_empty() => match named_gate(name) {
            Some(g) => g,
            None => return Err(MacroError::Unknown(name.clone())),
        },
        Term::Macro(name, args) => expand_call(name, args)?,
    })
}
