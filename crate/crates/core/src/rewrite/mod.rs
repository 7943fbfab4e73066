//! The equational theory as data: a catalog of named rules, exact validation of
//! each rule at concrete instances, and a rewriting engine that records traces.
//!
//! Rules are stored in a TOML catalog (see `data/rules.toml`). Sequencing is
//! matched modulo associativity by keeping every `;` chain right-nested.

mod engine;
mod rules;
mod validate;

pub use engine::{
    apply_rule, chain, check_side, inverse_of, involutive, match_pattern, normalize, positions, rewrite_at, simplify,
    substitute, subterm, unfold, Bindings, RewriteError, RewriteTrace, Rewriter, TraceStep,
};
pub use rules::{
    find_rule, load_catalog, load_rules, rule_db, CatalogError, Direction, Embedding, Instantiation, Orientation,
    RewriteRule, SideCondition, BUILTIN_CATALOG, CATALOG_VERSION,
};
pub use validate::{validate_all, validate_rule, InstanceReport, Outcome, RuleReport, MAX_DIM};
