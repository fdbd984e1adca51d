//! Evaluation by equality-query chaining.
//!
//! To evaluate an expression the interpreter evaluates its children left to
//! right (each child sees the bindings produced by the ones before it), then
//! looks at each resulting candidate:
//!
//! * a head naming a grounded operation runs that operation;
//! * otherwise the space is queried for `(= <candidate> $r)` and every `$r`
//!   found is evaluated further;
//! * a candidate nothing applies to is a normal form and evaluates to itself.
//!
//! Lazy operations (`if`, `match`, ...) skip the child step and see their
//! arguments as written. Every alternative is kept, so evaluation yields an
//! ordered list of results, each with the bindings that produced it.

use crate::atom::{Atom, Grounded, Variable};
use crate::reader::ProgramItem;
use crate::space::AtomSpace;
use crate::stdlib::{Call, Context, Operation, Outcome, StdEnv, Step, SELF_SPACE};
use crate::types::check_atom;
use crate::unify::{fresh_generation, Bindings};

pub const EQUALITY: &str = "=";
pub const STACK_OVERFLOW: &str = "StackOverflow";

const RED_ZONE: usize = 128 * 1024;
const STACK_SEGMENT: usize = 4 * 1024 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EvalConfig {
    /// Limit on chained reduction steps; exceeding it yields
    /// `(Error <atom> StackOverflow)`.
    pub max_depth: usize,
    /// Type-check each directive before evaluating it.
    pub typecheck: bool,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            max_depth: 1000,
            typecheck: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EvalResult {
    pub atom: Atom,
    /// Bindings of the variables of the evaluated atom.
    pub bindings: Bindings,
}

/// Results of one directive.
#[derive(Clone, Debug, PartialEq)]
pub struct DirectiveOutput {
    pub directive: Atom,
    pub results: Vec<Atom>,
    /// Lines written by `println!` while evaluating.
    pub printed: Vec<String>,
}

impl DirectiveOutput {
    pub fn has_error(&self) -> bool {
        self.results.iter().any(Atom::is_error)
    }
}

impl std::fmt::Display for DirectiveOutput {
    /// `[r1, r2, ...]`
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.results.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

pub struct Interpreter<'a> {
    space: &'a mut AtomSpace,
    env: &'a StdEnv,
    config: EvalConfig,
    printed: Vec<String>,
}

type Branches = Vec<(Atom, Bindings)>;

impl<'a> Interpreter<'a> {
    pub fn new(space: &'a mut AtomSpace, env: &'a StdEnv, config: EvalConfig) -> Self {
        assert!(config.max_depth >= 1, "max_depth must be at least 1");
        Interpreter {
            space,
            env,
            config,
            printed: Vec::new(),
        }
    }

    pub fn space(&self) -> &AtomSpace {
        self.space
    }

    pub fn evaluate(&mut self, atom: &Atom) -> Vec<EvalResult> {
        let vars = atom.variables();
        self.eval(atom, Bindings::new(), 0)
            .into_iter()
            .map(|(a, b)| EvalResult {
                atom: b.apply(&a),
                bindings: b.project(&vars),
            })
            .collect()
    }

    /// Type-checks (when enabled) and evaluates one directive.
    pub fn run_directive(&mut self, atom: &Atom) -> DirectiveOutput {
        let results = match self.config.typecheck.then(|| check_atom(self.space, atom)) {
            Some(Err(err)) => vec![err.to_atom()],
            _ => self.evaluate(atom).into_iter().map(|r| r.atom).collect(),
        };
        DirectiveOutput {
            directive: atom.clone(),
            results,
            printed: std::mem::take(&mut self.printed),
        }
    }

    fn eval(&mut self, atom: &Atom, bindings: Bindings, depth: usize) -> Branches {
        stacker::maybe_grow(RED_ZONE, STACK_SEGMENT, || {
            self.eval_step(atom, bindings, depth)
        })
    }

    fn eval_step(&mut self, atom: &Atom, bindings: Bindings, depth: usize) -> Branches {
        if depth > self.config.max_depth {
            return vec![(Atom::error(atom.clone(), STACK_OVERFLOW), bindings)];
        }
        match atom {
            Atom::Variable(_) | Atom::Grounded(_) => vec![(atom.clone(), bindings)],
            Atom::Symbol(s) if s.name() == SELF_SPACE => {
                vec![(
                    Atom::Grounded(Grounded::Space(self.space.space_ref())),
                    bindings,
                )]
            }
            Atom::Symbol(_) => self.reduce_by_equality(atom.clone(), bindings, depth),
            Atom::Expression(children) => {
                if children.is_empty() || atom.is_error() {
                    return vec![(atom.clone(), bindings)];
                }
                let env = self.env;
                if let Some(op) = env.lookup(&children[0]).filter(|op| op.lazy) {
                    return match self.call(op, atom, &bindings, depth) {
                        Some(results) => results,
                        None => self.reduce_by_equality(atom.clone(), bindings, depth),
                    };
                }
                let mut out = Vec::new();
                for (candidate, b) in self.eval_children(children, bindings, depth) {
                    out.extend(self.reduce_candidate(candidate, b, depth));
                }
                out
            }
        }
    }

    /// Every combination of child results, left to right, with each child
    /// evaluated under the bindings of the ones before it.
    fn eval_children(&mut self, children: &[Atom], bindings: Bindings, depth: usize) -> Branches {
        let mut partial: Vec<(Vec<Atom>, Bindings)> =
            vec![(Vec::with_capacity(children.len()), bindings)];
        for child in children {
            let mut next = Vec::new();
            for (done, b) in partial {
                let child = b.apply(child);
                for (value, vb) in self.eval(&child, b, depth) {
                    let mut done = done.clone();
                    done.push(value);
                    next.push((done, vb));
                }
            }
            partial = next;
        }
        partial
            .into_iter()
            .map(|(children, b)| (b.apply(&Atom::Expression(children)), b))
            .collect()
    }

    fn reduce_candidate(&mut self, candidate: Atom, bindings: Bindings, depth: usize) -> Branches {
        let children = candidate.children().expect("candidate is an expression");
        if let Some(err) = children.iter().find(|c| c.is_error()) {
            return vec![(err.clone(), bindings)];
        }
        let env = self.env;
        if let Some(op) = env.lookup(&children[0]) {
            if let Some(results) = self.call(op, &candidate, &bindings, depth) {
                return results;
            }
        }
        self.reduce_by_equality(candidate, bindings, depth)
    }

    /// Runs `op` on `expr`. `None` when the operation does not apply.
    fn call(
        &mut self,
        op: &Operation,
        expr: &Atom,
        bindings: &Bindings,
        depth: usize,
    ) -> Option<Branches> {
        let args = &expr.children().expect("call is an expression")[1..];
        if args.len() != op.arity {
            return None;
        }
        let call = Call {
            expr,
            args,
            bindings,
        };
        let outcome = (op.run)(
            &mut Frame {
                interp: self,
                depth,
            },
            &call,
        );
        let Outcome::Reduced(steps) = outcome else {
            return None;
        };
        let mut out = Vec::new();
        for step in steps {
            match step {
                Step::Eval(atom, b) => out.extend(self.eval(&b.apply(&atom), b, depth + 1)),
                Step::Done(atom, b) => out.push((b.apply(&atom), b)),
            }
        }
        Some(out)
    }

    // TODO: key `=` atoms on the head of their left-hand side; every
    // reduction currently scans all equalities of the space.
    fn reduce_by_equality(&mut self, atom: Atom, bindings: Bindings, depth: usize) -> Branches {
        let result = Variable::scoped("r", fresh_generation());
        let query = Atom::expr([
            Atom::sym(EQUALITY),
            atom.clone(),
            Atom::Variable(result.clone()),
        ]);
        let matches = self.space.query_with(&query, &bindings);
        if matches.is_empty() {
            return vec![(atom, bindings)];
        }
        let mut out = Vec::new();
        for m in matches {
            let next = m.resolve(&result).expect("result variable bound");
            out.extend(self.eval(&next, m, depth + 1));
        }
        out
    }
}

struct Frame<'i, 'a> {
    interp: &'i mut Interpreter<'a>,
    depth: usize,
}

impl Context for Frame<'_, '_> {
    fn space(&self) -> &AtomSpace {
        self.interp.space
    }

    fn space_mut(&mut self) -> &mut AtomSpace {
        self.interp.space
    }

    fn evaluate(&mut self, atom: &Atom, bindings: &Bindings) -> Vec<(Atom, Bindings)> {
        self.interp.eval(atom, bindings.clone(), self.depth + 1)
    }

    fn print(&mut self, line: String) {
        self.interp.printed.push(line)
    }
}

/// Evaluates `atom` against `space` with the standard operations.
pub fn evaluate(space: &mut AtomSpace, atom: &Atom, config: &EvalConfig) -> Vec<EvalResult> {
    Interpreter::new(space, StdEnv::standard(), *config).evaluate(atom)
}

/// Stores non-directive items and evaluates directives, in source order.
pub fn run_program(
    space: &mut AtomSpace,
    items: &[ProgramItem],
    config: &EvalConfig,
) -> Vec<DirectiveOutput> {
    run_program_with(space, StdEnv::standard(), items, config)
}

pub fn run_program_with(
    space: &mut AtomSpace,
    env: &StdEnv,
    items: &[ProgramItem],
    config: &EvalConfig,
) -> Vec<DirectiveOutput> {
    let mut outputs = Vec::new();
    for item in items {
        if item.is_directive {
            outputs.push(Interpreter::new(space, env, *config).run_directive(&item.atom));
        } else {
            space.add(item.atom.clone());
        }
    }
    outputs
}
