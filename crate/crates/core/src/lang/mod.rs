//! Front end: syntax tree, parser, type inference and syntactic inversion.

mod ast;
mod parser;
mod typecheck;

pub use ast::{invert, Arg, Prim, Term, ValueType};
pub use parser::{parse, parse_signature, parse_type, parse_with_spans, ParseError, Span, SpanTree};
pub use typecheck::{grounded_signature, principal_signature, scheme, typecheck, TyPat, TypeError, TypeScheme, Typed, TypedNode};
