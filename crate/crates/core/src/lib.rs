//! Decides the must-preorder between message-passing processes through
//! acceptance sets, synthesizes distinguishing tests, and checks the
//! axioms the characterisation relies on.

pub mod axioms;
pub mod cli;
pub mod labels;
pub mod preorder;
pub mod random;
pub mod semantics;
pub mod syntax;
pub mod synthesis;
