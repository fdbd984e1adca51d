//! Grounded operations available to every program.
//!
//! Operations are looked up by the name in head position. Eager operations
//! receive evaluated arguments; lazy ones (`if`, `match`, `quote`,
//! `add-atom`, `remove-atom`, `get-type`) receive them as written and decide
//! themselves what to evaluate. An operation applied outside its domain
//! reports [`Outcome::Unreduced`] and the expression is left as it is.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock};

use crate::atom::{Atom, ExecFn, Grounded};
use crate::space::{conjuncts, AtomSpace};
use crate::types::type_of;
use crate::unify::Bindings;

/// Symbol that names the running program's space.
pub const SELF_SPACE: &str = "&self";

pub const TRUE: &str = "True";
pub const FALSE: &str = "False";

/// What an operation gives back to the interpreter.
#[derive(Clone, Debug, PartialEq)]
pub enum Step {
    /// Evaluate further.
    Eval(Atom, Bindings),
    /// Already a final result.
    Done(Atom, Bindings),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Reduced(Vec<Step>),
    Unreduced,
}

impl Outcome {
    fn eval(atom: Atom, bindings: &Bindings) -> Self {
        Outcome::Reduced(vec![Step::Eval(atom, bindings.clone())])
    }

    fn done(atom: Atom, bindings: &Bindings) -> Self {
        Outcome::Reduced(vec![Step::Done(atom, bindings.clone())])
    }
}

/// Interpreter services available to an operation.
pub trait Context {
    fn space(&self) -> &AtomSpace;
    fn space_mut(&mut self) -> &mut AtomSpace;
    /// Evaluates `atom` one level deeper than the current call.
    fn evaluate(&mut self, atom: &Atom, bindings: &Bindings) -> Vec<(Atom, Bindings)>;
    fn print(&mut self, line: String);
}

/// One application of an operation.
pub struct Call<'a> {
    /// The whole expression, head included.
    pub expr: &'a Atom,
    pub args: &'a [Atom],
    pub bindings: &'a Bindings,
}

pub type OpFn = fn(&mut dyn Context, &Call<'_>) -> Outcome;

#[derive(Clone, Debug)]
pub struct Operation {
    pub name: &'static str,
    pub lazy: bool,
    pub arity: usize,
    pub run: OpFn,
}

impl Operation {
    pub fn exec_fn(&self) -> ExecFn {
        ExecFn {
            name: Arc::from(self.name),
            lazy: self.lazy,
            arity: self.arity,
        }
    }
}

/// Registry of grounded operations.
#[derive(Clone, Debug)]
pub struct StdEnv {
    ops: HashMap<&'static str, Operation>,
}

static STANDARD: LazyLock<StdEnv> = LazyLock::new(StdEnv::new);

impl Default for StdEnv {
    fn default() -> Self {
        Self::new()
    }
}

impl StdEnv {
    pub fn new() -> Self {
        let mut env = StdEnv {
            ops: HashMap::new(),
        };
        let lazy = [
            ("if", 3, op_if as OpFn),
            ("match", 3, op_match),
            ("quote", 1, op_quote),
            ("add-atom", 2, op_add_atom),
            ("remove-atom", 2, op_remove_atom),
            ("get-type", 1, op_get_type),
        ];
        for (name, arity, run) in lazy {
            env.register(Operation {
                name,
                lazy: true,
                arity,
                run,
            });
        }
        let eager = [
            ("+", 2, op_add as OpFn),
            ("-", 2, op_sub),
            ("*", 2, op_mul),
            ("/", 2, op_div),
            ("<", 2, op_lt),
            (">", 2, op_gt),
            ("==", 2, op_eq),
            ("and", 2, op_and),
            ("or", 2, op_or),
            ("not", 1, op_not),
            ("println!", 1, op_println),
        ];
        for (name, arity, run) in eager {
            env.register(Operation {
                name,
                lazy: false,
                arity,
                run,
            });
        }
        env
    }

    /// Shared instance of the standard registry.
    pub fn standard() -> &'static StdEnv {
        &STANDARD
    }

    pub fn register(&mut self, op: Operation) {
        self.ops.insert(op.name, op);
    }

    pub fn get(&self, name: &str) -> Option<&Operation> {
        self.ops.get(name)
    }

    /// The operation named by a head atom: a registered symbol or an
    /// `ExecFn` grounded atom.
    pub fn lookup(&self, head: &Atom) -> Option<&Operation> {
        match head {
            Atom::Symbol(s) => self.ops.get(s.name()),
            Atom::Grounded(Grounded::Exec(f)) => self.ops.get(&*f.name),
            _ => None,
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.ops.keys().copied()
    }
}

fn boolean(value: bool) -> Atom {
    Atom::sym(if value { TRUE } else { FALSE })
}

fn as_bool(atom: &Atom) -> Option<bool> {
    match atom.as_symbol()? {
        TRUE => Some(true),
        FALSE => Some(false),
        _ => None,
    }
}

/// True if `arg` denotes the program's own space, evaluating it if needed.
fn targets_self(ctx: &mut dyn Context, arg: &Atom, bindings: &Bindings) -> bool {
    let own = ctx.space().space_ref();
    let is_own = |a: &Atom| match a {
        Atom::Symbol(s) => s.name() == SELF_SPACE,
        Atom::Grounded(Grounded::Space(r)) => *r == own,
        _ => false,
    };
    is_own(arg) || ctx.evaluate(arg, bindings).iter().any(|(a, _)| is_own(a))
}

fn op_if(ctx: &mut dyn Context, call: &Call<'_>) -> Outcome {
    let [cond, then, otherwise] = call.args else {
        return Outcome::Unreduced;
    };
    let steps = ctx
        .evaluate(cond, call.bindings)
        .into_iter()
        .map(|(value, b)| match as_bool(&value) {
            Some(true) => Step::Eval(b.apply(then), b),
            Some(false) => Step::Eval(b.apply(otherwise), b),
            None if value.is_error() => Step::Done(value, b),
            None => Step::Done(b.apply(call.expr), b),
        })
        .collect();
    Outcome::Reduced(steps)
}

fn op_match(ctx: &mut dyn Context, call: &Call<'_>) -> Outcome {
    let [space, pattern, template] = call.args else {
        return Outcome::Unreduced;
    };
    if !targets_self(ctx, space, call.bindings) {
        return Outcome::Unreduced;
    }
    let found = match conjuncts(pattern) {
        Some(subpatterns) => ctx.space().query_conj_with(subpatterns, call.bindings),
        None => ctx.space().query_with(pattern, call.bindings),
    };
    Outcome::Reduced(
        found
            .into_iter()
            .map(|b| Step::Eval(b.apply(template), b))
            .collect(),
    )
}

fn op_quote(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    Outcome::done(call.expr.clone(), call.bindings)
}

fn op_add_atom(ctx: &mut dyn Context, call: &Call<'_>) -> Outcome {
    let [space, atom] = call.args else {
        return Outcome::Unreduced;
    };
    if !targets_self(ctx, space, call.bindings) {
        return Outcome::Unreduced;
    }
    ctx.space_mut().add(atom.clone());
    Outcome::done(Atom::unit(), call.bindings)
}

fn op_remove_atom(ctx: &mut dyn Context, call: &Call<'_>) -> Outcome {
    let [space, atom] = call.args else {
        return Outcome::Unreduced;
    };
    if !targets_self(ctx, space, call.bindings) {
        return Outcome::Unreduced;
    }
    let removed = ctx.space_mut().remove(atom);
    Outcome::done(boolean(removed), call.bindings)
}

fn op_get_type(ctx: &mut dyn Context, call: &Call<'_>) -> Outcome {
    let types = type_of(ctx.space(), &call.args[0]);
    Outcome::Reduced(
        types
            .into_iter()
            .map(|t| Step::Done(t, call.bindings.clone()))
            .collect(),
    )
}

fn op_println(ctx: &mut dyn Context, call: &Call<'_>) -> Outcome {
    ctx.print(call.args[0].to_string());
    Outcome::done(Atom::unit(), call.bindings)
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum Number {
    Int(i64),
    Float(f64),
}

impl Number {
    fn of(atom: &Atom) -> Option<Number> {
        match atom {
            Atom::Grounded(Grounded::Int(i)) => Some(Number::Int(*i)),
            Atom::Grounded(Grounded::Float(x)) => Some(Number::Float(*x)),
            _ => None,
        }
    }

    fn as_f64(self) -> f64 {
        match self {
            Number::Int(i) => i as f64,
            Number::Float(x) => x,
        }
    }
}

fn number_args(call: &Call<'_>) -> Option<(Number, Number)> {
    match call.args {
        [a, b] => Some((Number::of(a)?, Number::of(b)?)),
        _ => None,
    }
}

fn arithmetic(
    call: &Call<'_>,
    int_op: fn(i64, i64) -> Option<i64>,
    float_op: fn(f64, f64) -> f64,
) -> Outcome {
    let Some(operands) = number_args(call) else {
        return Outcome::Unreduced;
    };
    let result = match operands {
        (Number::Int(a), Number::Int(b)) => match int_op(a, b) {
            Some(v) => Atom::int(v),
            None => {
                return Outcome::done(Atom::error(call.expr.clone(), "Overflow"), call.bindings)
            }
        },
        (a, b) => Atom::float(float_op(a.as_f64(), b.as_f64())),
    };
    Outcome::eval(result, call.bindings)
}

fn op_add(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    arithmetic(call, i64::checked_add, |a, b| a + b)
}

fn op_sub(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    arithmetic(call, i64::checked_sub, |a, b| a - b)
}

fn op_mul(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    arithmetic(call, i64::checked_mul, |a, b| a * b)
}

fn op_div(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    match number_args(call) {
        Some((_, divisor)) if divisor.as_f64() == 0.0 => {
            Outcome::done(Atom::error(call.expr.clone(), "DivByZero"), call.bindings)
        }
        _ => arithmetic(call, i64::checked_div, |a, b| a / b),
    }
}

fn comparison(
    call: &Call<'_>,
    int_cmp: fn(&i64, &i64) -> bool,
    float_cmp: fn(&f64, &f64) -> bool,
) -> Outcome {
    let Some(operands) = number_args(call) else {
        return Outcome::Unreduced;
    };
    let result = match operands {
        (Number::Int(a), Number::Int(b)) => int_cmp(&a, &b),
        (a, b) => float_cmp(&a.as_f64(), &b.as_f64()),
    };
    Outcome::eval(boolean(result), call.bindings)
}

fn op_lt(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    comparison(call, i64::lt, f64::lt)
}

fn op_gt(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    comparison(call, i64::gt, f64::gt)
}

/// Numeric equality for numbers, structural equality for other ground atoms.
fn op_eq(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    if number_args(call).is_some() {
        return comparison(call, i64::eq, f64::eq);
    }
    match call.args {
        [a, b] if a.is_ground() && b.is_ground() => Outcome::eval(boolean(a == b), call.bindings),
        _ => Outcome::Unreduced,
    }
}

fn logic(call: &Call<'_>, f: fn(bool, bool) -> bool) -> Outcome {
    match call.args {
        [a, b] => match (as_bool(a), as_bool(b)) {
            (Some(a), Some(b)) => Outcome::eval(boolean(f(a, b)), call.bindings),
            _ => Outcome::Unreduced,
        },
        _ => Outcome::Unreduced,
    }
}

fn op_and(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    logic(call, |a, b| a && b)
}

fn op_or(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    logic(call, |a, b| a || b)
}

fn op_not(_: &mut dyn Context, call: &Call<'_>) -> Outcome {
    match as_bool(&call.args[0]) {
        Some(v) => Outcome::eval(boolean(!v), call.bindings),
        None => Outcome::Unreduced,
    }
}
