//! Stable-failures semantics of finitary CSP, presented as a free-algebra
//! monad, with a computational λ-calculus on top.

pub mod failures;
pub mod freealgebra;
pub mod gen;
pub mod lambdac;
pub mod operators;
pub mod selfcheck;
pub mod synctrees;
pub mod terms;
pub mod theories;

pub use failures::{close, equal, refines, XProcess};
pub use operators::{denote, ValueEnv};
pub use terms::{parse_process, print_process, Action, ActionSet, Alphabet, ProcTerm, Value};
