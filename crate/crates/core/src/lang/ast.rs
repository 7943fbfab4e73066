use std::fmt;

/// Finite types: `0 | 1 | t + t | t * t`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueType {
    Zero,
    One,
    Sum(Box<ValueType>, Box<ValueType>),
    Prod(Box<ValueType>, Box<ValueType>),
}

impl ValueType {
    pub fn sum(a: ValueType, b: ValueType) -> ValueType {
        ValueType::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: ValueType, b: ValueType) -> ValueType {
        ValueType::Prod(Box::new(a), Box::new(b))
    }

    /// `1 + 1`, one qubit.
    pub fn two() -> ValueType {
        ValueType::sum(ValueType::One, ValueType::One)
    }

    /// Right-nested `2 * (2 * ... )` with `n >= 1` factors.
    pub fn qubits(n: usize) -> ValueType {
        assert!(n >= 1, "need at least one qubit");
        let mut t = ValueType::two();
        for _ in 1..n {
            t = ValueType::prod(ValueType::two(), t);
        }
        t
    }

    /// Right-nested `1 + (1 + ...)` with `n >= 1` summands.
    pub fn units(n: usize) -> ValueType {
        assert!(n >= 1, "need at least one summand");
        let mut t = ValueType::One;
        for _ in 1..n {
            t = ValueType::sum(ValueType::One, t);
        }
        t
    }

    pub fn dimension(&self) -> usize {
        match self {
            ValueType::Zero => 0,
            ValueType::One => 1,
            ValueType::Sum(a, b) => a.dimension() + b.dimension(),
            ValueType::Prod(a, b) => a.dimension() * b.dimension(),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        match self {
            ValueType::Zero => f.write_str("0"),
            ValueType::One => f.write_str("1"),
            ValueType::Sum(a, b) if **a == ValueType::One && **b == ValueType::One => f.write_str("2"),
            ValueType::Sum(a, b) => {
                if prec > 0 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 1)?;
                f.write_str(" + ")?;
                b.fmt_prec(f, 0)?;
                if prec > 0 {
                    f.write_str(")")?;
                }
                Ok(())
            }
            ValueType::Prod(a, b) => {
                if prec > 1 {
                    f.write_str("(")?;
                }
                a.fmt_prec(f, 2)?;
                f.write_str(" * ")?;
                b.fmt_prec(f, 1)?;
                if prec > 1 {
                    f.write_str(")")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// Primitive isomorphisms, including the four square-root primitives.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Prim {
    Id,
    SwapPlus,
    AssocrPlus,
    AssoclPlus,
    UnitePlusL,
    UnitiPlusL,
    Absorbl,
    Factorzr,
    SwapTimes,
    AssocrTimes,
    AssoclTimes,
    UniteTimesL,
    UnitiTimesL,
    Dist,
    Factor,
    V,
    Vi,
    W,
    Wi,
}

impl Prim {
    pub const ALL: [Prim; 19] = [
        Prim::Id,
        Prim::SwapPlus,
        Prim::AssocrPlus,
        Prim::AssoclPlus,
        Prim::UnitePlusL,
        Prim::UnitiPlusL,
        Prim::Absorbl,
        Prim::Factorzr,
        Prim::SwapTimes,
        Prim::AssocrTimes,
        Prim::AssoclTimes,
        Prim::UniteTimesL,
        Prim::UnitiTimesL,
        Prim::Dist,
        Prim::Factor,
        Prim::V,
        Prim::Vi,
        Prim::W,
        Prim::Wi,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Prim::Id => "id",
            Prim::SwapPlus => "swap+",
            Prim::AssocrPlus => "assocr+",
            Prim::AssoclPlus => "assocl+",
            Prim::UnitePlusL => "unite+l",
            Prim::UnitiPlusL => "uniti+l",
            Prim::Absorbl => "absorbl",
            Prim::Factorzr => "factorzr",
            Prim::SwapTimes => "swap*",
            Prim::AssocrTimes => "assocr*",
            Prim::AssoclTimes => "assocl*",
            Prim::UniteTimesL => "unite*l",
            Prim::UnitiTimesL => "uniti*l",
            Prim::Dist => "dist",
            Prim::Factor => "factor",
            Prim::V => "v",
            Prim::Vi => "vi",
            Prim::W => "w",
            Prim::Wi => "wi",
        }
    }

    pub fn from_name(s: &str) -> Option<Prim> {
        Prim::ALL.iter().copied().find(|p| p.name() == s)
    }

    pub fn dual(self) -> Prim {
        match self {
            Prim::AssocrPlus => Prim::AssoclPlus,
            Prim::AssoclPlus => Prim::AssocrPlus,
            Prim::UnitePlusL => Prim::UnitiPlusL,
            Prim::UnitiPlusL => Prim::UnitePlusL,
            Prim::Absorbl => Prim::Factorzr,
            Prim::Factorzr => Prim::Absorbl,
            Prim::AssocrTimes => Prim::AssoclTimes,
            Prim::AssoclTimes => Prim::AssocrTimes,
            Prim::UniteTimesL => Prim::UnitiTimesL,
            Prim::UnitiTimesL => Prim::UniteTimesL,
            Prim::Dist => Prim::Factor,
            Prim::Factor => Prim::Dist,
            Prim::V => Prim::Vi,
            Prim::Vi => Prim::V,
            Prim::W => Prim::Wi,
            Prim::Wi => Prim::W,
            p @ (Prim::Id | Prim::SwapPlus | Prim::SwapTimes) => p,
        }
    }
}

/// Argument of a macro call: a term, or a small integer (wire or index).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Arg {
    Term(Term),
    Int(usize),
}

/// Combinator syntax.
///
/// `Macro` nodes are named gate constructions that must be expanded (see
/// [`crate::gates::expand`]) before type checking; `Var` only occurs in rewrite
/// patterns.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Prim(Prim),
    Seq(Box<Term>, Box<Term>),
    Sum(Box<Term>, Box<Term>),
    Prod(Box<Term>, Box<Term>),
    Ann(Box<Term>, ValueType, ValueType),
    Macro(String, Vec<Arg>),
    Var(String),
}

impl Term {
    pub fn prim(p: Prim) -> Term {
        Term::Prim(p)
    }

    pub fn id() -> Term {
        Term::Prim(Prim::Id)
    }

    pub fn seq(a: Term, b: Term) -> Term {
        Term::Seq(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Term, b: Term) -> Term {
        Term::Sum(Box::new(a), Box::new(b))
    }

    pub fn prod(a: Term, b: Term) -> Term {
        Term::Prod(Box::new(a), Box::new(b))
    }

    pub fn ann(t: Term, a: ValueType, b: ValueType) -> Term {
        Term::Ann(Box::new(t), a, b)
    }

    pub fn mac(name: &str, args: Vec<Arg>) -> Term {
        Term::Macro(name.to_string(), args)
    }

    pub fn name(name: &str) -> Term {
        Term::Macro(name.to_string(), Vec::new())
    }

    /// Right-nested sequence; panics on an empty list.
    pub fn seq_all(items: impl IntoIterator<Item = Term>) -> Term {
        let mut v: Vec<Term> = items.into_iter().collect();
        let mut acc = v.pop().expect("seq_all of empty list");
        while let Some(t) = v.pop() {
            acc = Term::seq(t, acc);
        }
        acc
    }

    /// `n`-fold sequence of `self` (n >= 1).
    pub fn pow(&self, n: usize) -> Term {
        Term::seq_all(std::iter::repeat_n(self.clone(), n))
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Prim(_) | Term::Var(_) => 1,
            Term::Seq(a, b) | Term::Sum(a, b) | Term::Prod(a, b) => 1 + a.size() + b.size(),
            Term::Ann(t, _, _) => 1 + t.size(),
            Term::Macro(_, args) => {
                1 + args
                    .iter()
                    .map(|a| match a {
                        Arg::Term(t) => t.size(),
                        Arg::Int(_) => 0,
                    })
                    .sum::<usize>()
            }
        }
    }

    /// True if no macro or pattern-variable nodes remain.
    pub fn is_core(&self) -> bool {
        match self {
            Term::Prim(_) => true,
            Term::Seq(a, b) | Term::Sum(a, b) | Term::Prod(a, b) => a.is_core() && b.is_core(),
            Term::Ann(t, _, _) => t.is_core(),
            Term::Macro(..) | Term::Var(_) => false,
        }
    }

    /// Drop all type annotations.
    pub fn erase_annotations(&self) -> Term {
        match self {
            Term::Ann(t, _, _) => t.erase_annotations(),
            Term::Seq(a, b) => Term::seq(a.erase_annotations(), b.erase_annotations()),
            Term::Sum(a, b) => Term::sum(a.erase_annotations(), b.erase_annotations()),
            Term::Prod(a, b) => Term::prod(a.erase_annotations(), b.erase_annotations()),
            Term::Macro(n, args) => Term::Macro(
                n.clone(),
                args.iter()
                    .map(|a| match a {
                        Arg::Term(t) => Arg::Term(t.erase_annotations()),
                        i => i.clone(),
                    })
                    .collect(),
            ),
            t => t.clone(),
        }
    }

    pub fn pretty(&self) -> String {
        self.to_string()
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let (mine, l, r, op) = match self {
            Term::Seq(a, b) => (0, a, b, " ; "),
            Term::Sum(a, b) => (1, a, b, " + "),
            Term::Prod(a, b) => (2, a, b, " * "),
            Term::Prim(p) => return f.write_str(p.name()),
            Term::Var(v) => return write!(f, "?{v}"),
            Term::Ann(t, a, b) => return write!(f, "({t} : {a} <-> {b})"),
            Term::Macro(n, args) => {
                f.write_str(n)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        match a {
                            Arg::Term(t) => t.fmt_prec(f, 0)?,
                            Arg::Int(n) => write!(f, "{n}")?,
                        }
                    }
                    f.write_str(")")?;
                }
                return Ok(());
            }
        };
        let paren = prec > mine;
        if paren {
            f.write_str("(")?;
        }
        l.fmt_prec(f, mine + 1)?;
        f.write_str(op)?;
        r.fmt_prec(f, mine)?;
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

impl From<Prim> for Term {
    fn from(p: Prim) -> Term {
        Term::Prim(p)
    }
}

/// Syntactic dagger. Macro nodes are wrapped in `inv(..)` (and unwrapped again),
/// so `invert(invert(c)) == c` holds for every term.
pub fn invert(c: &Term) -> Term {
    match c {
        Term::Prim(p) => Term::Prim(p.dual()),
        Term::Seq(a, b) => Term::seq(invert(b), invert(a)),
        Term::Sum(a, b) => Term::sum(invert(a), invert(b)),
        Term::Prod(a, b) => Term::prod(invert(a), invert(b)),
        Term::Ann(t, a, b) => Term::ann(invert(t), b.clone(), a.clone()),
        Term::Macro(n, args) if n == "inv" && args.len() == 1 => match &args[0] {
            Arg::Term(t) => t.clone(),
            Arg::Int(_) => Term::mac("inv", vec![Arg::Term(c.clone())]),
        },
        Term::Macro(..) | Term::Var(_) => Term::mac("inv", vec![Arg::Term(c.clone())]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        assert_eq!(ValueType::qubits(3).dimension(), 8);
        assert_eq!(ValueType::units(5).dimension(), 5);
        let t = ValueType::prod(ValueType::Zero, ValueType::two());
        assert_eq!(t.dimension(), 0);
    }

    #[test]
    fn printing() {
        assert_eq!(Term::seq(Prim::V.into(), Prim::V.into()).to_string(), "v ; v");
        assert_eq!(Term::sum(Term::id(), Prim::W.into()).to_string(), "id + w");
        let left = Term::seq(Term::seq(Term::id(), Term::id()), Term::id());
        assert_eq!(left.to_string(), "(id ; id) ; id");
        assert_eq!(ValueType::qubits(2).to_string(), "2 * 2");
        let t = ValueType::prod(ValueType::sum(ValueType::One, ValueType::Zero), ValueType::One);
        assert_eq!(t.to_string(), "(1 + 0) * 1");
    }

    #[test]
    fn duals_are_involutive() {
        for p in Prim::ALL {
            assert_eq!(p.dual().dual(), p);
        }
    }
}
