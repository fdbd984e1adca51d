//! A MeTTa interpreter: atoms, an indexed atomspace with unification
//! queries, evaluation by equality-query chaining with non-deterministic
//! results, gradual dependent typing, and a small grounded standard library.
//!
//! ```
//! use metta::Metta;
//!
//! let mut metta = Metta::default();
//! let out = metta.run("(= (add Z $x) $x)\n(= (add (S $x) $y) (add $x (S $y)))\n!(add (S Z) (S Z))").unwrap();
//! assert_eq!(out[0].to_string(), "[(S (S Z))]");
//! ```

pub mod atom;
pub mod interpreter;
pub mod reader;
pub mod runner;
pub mod space;
pub mod stdlib;
pub mod types;
pub mod unify;

pub use atom::{atoms_equal, render, Atom, ExecFn, Grounded, SpaceRef, Symbol, Variable};
pub use interpreter::{
    evaluate, run_program, DirectiveOutput, EvalConfig, EvalResult, Interpreter,
};
pub use reader::{
    parse_atom, parse_program, print_program, tokenize, ParseError, ProgramItem, Span,
};
pub use runner::Metta;
pub use space::AtomSpace;
pub use stdlib::StdEnv;
pub use types::{check_atom, type_of, TypeError};
pub use unify::{apply_bindings, fresh_generation, fresh_rename, unify, Bindings};
