//! The term language: AST, parser, structural normal form and the success
//! predicate.

mod ast;
mod canonical;
mod parser;

pub use ast::{free_names, good, substitute_proc, substitute_value, BoolExpr, Process, ValueExpr};
pub use canonical::{canonical, congruent, CanonicalForm};
pub use parser::{parse, parse_definitions, Definitions, SyntaxError};
