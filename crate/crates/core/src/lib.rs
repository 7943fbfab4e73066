//! A reversible combinator language for quantum computing, with exact semantics.
//!
//! Terms are built from the isomorphisms of a commutative rig (sums, products,
//! distributivity) plus two extra primitives, `v` (a square root of negation)
//! and `w` (an eighth root of unity). Every well-typed term denotes a unitary
//! matrix with entries in Z[1/2, w], computed exactly.
//!
//! ```
//! use sqrtpi::{denote, lang::parse};
//!
//! let h = parse("uniti*l ; (w * ((swap+ : 2 <-> 2) ; (id + (w ; w)) ; v ; (id + (w ; w)) ; swap+)) ; unite*l").unwrap();
//! assert_eq!(denote(&h, None).unwrap().to_string(), "(1/√2)[[1, 1], [1, -1]]");
//! ```

pub mod circuits;
pub mod cli;
pub mod exactnum;
pub mod gates;
pub mod lang;
pub mod rewrite;
pub mod semantics;
pub mod testing;

use lang::{Term, Typed, ValueType};
use semantics::{ExactMatrix, MatrixEq, PhaseMode};

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] lang::ParseError),
    #[error(transparent)]
    Type(#[from] lang::TypeError),
    #[error(transparent)]
    Macro(#[from] gates::MacroError),
    #[error(transparent)]
    Circuit(#[from] circuits::CircuitError),
    #[error("{0}")]
    Other(String),
}

/// Expand macros, then type check.
pub fn elaborate(t: &Term, expected: Option<(&ValueType, &ValueType)>) -> Result<Typed, Error> {
    Ok(lang::typecheck(&gates::expand(t)?, expected)?)
}

/// Expand, type check and evaluate.
pub fn denote(t: &Term, expected: Option<(&ValueType, &ValueType)>) -> Result<ExactMatrix, Error> {
    Ok(semantics::eval(&elaborate(t, expected)?))
}

/// Type two terms at a common signature. A side that is polymorphic on its
/// own takes the other side's signature.
pub fn elaborate_pair(a: &Term, b: &Term, expected: Option<(&ValueType, &ValueType)>) -> Result<(Typed, Typed), Error> {
    if expected.is_some() {
        return Ok((elaborate(a, expected)?, elaborate(b, expected)?));
    }
    match elaborate(a, None) {
        Ok(ta) => {
            let tb = elaborate(b, Some((&ta.src, &ta.tgt)))?;
            Ok((ta, tb))
        }
        Err(Error::Type(lang::TypeError::Unresolved { .. })) => {
            let tb = elaborate(b, None)?;
            let ta = elaborate(a, Some((&tb.src, &tb.tgt)))?;
            Ok((ta, tb))
        }
        Err(e) => Err(e),
    }
}

/// Decide semantic equality of two terms, exactly or up to a global power of w.
pub fn check_equiv(a: &Term, b: &Term, mode: PhaseMode) -> Result<MatrixEq, Error> {
    let (ta, tb) = elaborate_pair(a, b, None)?;
    Ok(semantics::equal_matrices(&semantics::eval(&ta), &semantics::eval(&tb), mode))
}
