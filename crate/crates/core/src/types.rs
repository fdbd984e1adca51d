//! Gradual dependent typing over `(: subject type)` declarations.
//!
//! Types are ordinary atoms and type-level computation is unification only.
//! Anything without a declaration has the dynamic type `%Undefined%`, which
//! is compatible with every type. An application `(f a1 ... an)` is typed by
//! unifying each parameter of each arrow type `(-> P1 ... Pn R)` of `f` with
//! each inferred type of the matching argument and instantiating `R`.

use std::fmt;

use thiserror::Error;

use crate::atom::{Atom, Grounded, Variable};
use crate::space::AtomSpace;
use crate::unify::{fresh_generation, unify, Bindings};

pub const UNDEFINED_TYPE: &str = "%Undefined%";
pub const TYPE_DECL: &str = ":";
pub const ARROW: &str = "->";

// Stand-in name for `%Undefined%` while it takes part in unification.
const WILDCARD: &str = "%undefined";

pub fn undefined() -> Atom {
    Atom::sym(UNDEFINED_TYPE)
}

fn is_undefined(atom: &Atom) -> bool {
    atom.as_symbol() == Some(UNDEFINED_TYPE)
}

/// `(-> P1 ... Pn R)` split into parameters and result.
fn arrow_parts(ty: &Atom) -> Option<(&[Atom], &Atom)> {
    match ty.children()? {
        [head, params @ .., result] if head.as_symbol() == Some(ARROW) => Some((params, result)),
        _ => None,
    }
}

/// Replaces each `%Undefined%` with its own fresh variable so it unifies
/// with anything.
fn open(ty: &Atom) -> Atom {
    match ty {
        a if is_undefined(a) => Atom::Variable(Variable::scoped(WILDCARD, fresh_generation())),
        Atom::Expression(children) => Atom::Expression(children.iter().map(open).collect()),
        other => other.clone(),
    }
}

/// Turns leftover wildcard variables back into `%Undefined%`.
fn close(ty: &Atom) -> Atom {
    ty.map_variables(&mut |v| {
        if v.name() == WILDCARD {
            undefined()
        } else {
            Atom::Variable(v.clone())
        }
    })
}

/// Declared types of a symbol, in declaration order. Each call hands out
/// freshly renamed copies of any type variables.
fn declared_types(space: &AtomSpace, subject: &Atom) -> Vec<Atom> {
    let ty = Variable::scoped("type", fresh_generation());
    let pattern = Atom::expr([
        Atom::sym(TYPE_DECL),
        subject.clone(),
        Atom::Variable(ty.clone()),
    ]);
    space
        .query_with(&pattern, &Bindings::new())
        .iter()
        .filter_map(|b| b.resolve(&ty))
        .collect()
}

fn builtin_type(atom: &Atom) -> Option<Atom> {
    match atom {
        Atom::Grounded(Grounded::Int(_) | Grounded::Float(_)) => Some(Atom::sym("Number")),
        Atom::Grounded(Grounded::Text(_)) => Some(Atom::sym("String")),
        Atom::Symbol(s) if matches!(s.name(), "True" | "False") => Some(Atom::sym("Bool")),
        _ => None,
    }
}

/// All possible types of `atom`. Empty when `atom` is an application that
/// admits no consistent typing.
pub fn type_of(space: &AtomSpace, atom: &Atom) -> Vec<Atom> {
    match atom {
        Atom::Symbol(_) => {
            let mut types: Vec<Atom> = builtin_type(atom).into_iter().collect();
            types.extend(declared_types(space, atom));
            if types.is_empty() {
                types.push(undefined());
            }
            types
        }
        Atom::Grounded(_) => vec![builtin_type(atom).unwrap_or_else(undefined)],
        Atom::Variable(_) => vec![undefined()],
        Atom::Expression(children) => match children.split_first() {
            None => vec![undefined()],
            Some((head, args)) => type_of_application(space, head, args),
        },
    }
}

fn type_of_application(space: &AtomSpace, head: &Atom, args: &[Atom]) -> Vec<Atom> {
    let arrows: Vec<Atom> = type_of(space, head)
        .into_iter()
        .filter(|t| arrow_parts(t).is_some())
        .collect();
    if arrows.is_empty() {
        return vec![undefined()];
    }
    let arg_types: Vec<Vec<Atom>> = args.iter().map(|a| type_of(space, a)).collect();
    let mut out = Vec::new();
    for arrow in &arrows {
        let (params, result) = arrow_parts(arrow).expect("filtered to arrows");
        if params.len() != args.len() {
            continue;
        }
        let params: Vec<Atom> = params.iter().map(open).collect();
        let mut partial = vec![Bindings::new()];
        for (param, candidates) in params.iter().zip(&arg_types) {
            partial = partial
                .iter()
                .flat_map(|b| {
                    candidates
                        .iter()
                        .filter_map(move |t| unify(param, &open(t), b))
                })
                .collect();
        }
        let result = open(result);
        out.extend(partial.iter().map(|b| close(&b.apply(&result))));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub struct TypeError {
    /// Innermost application that cannot be typed.
    pub atom: Atom,
    pub expected: Atom,
    pub actual: Atom,
}

impl fmt::Display for TypeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "type error in {}: expected {}, found {}",
            self.atom, self.expected, self.actual
        )
    }
}

impl TypeError {
    /// `(Error <atom> <expected>)`
    pub fn to_atom(&self) -> Atom {
        Atom::expr([
            Atom::sym(crate::atom::ERROR_SYMBOL),
            self.atom.clone(),
            self.expected.clone(),
        ])
    }
}

/// Passes when every application whose head has an arrow type admits at
/// least one consistent typing.
pub fn check_atom(space: &AtomSpace, atom: &Atom) -> Result<(), TypeError> {
    let Atom::Expression(children) = atom else {
        return Ok(());
    };
    for child in children {
        check_atom(space, child)?;
    }
    let Some((head, args)) = children.split_first() else {
        return Ok(());
    };
    let arrows: Vec<Atom> = type_of(space, head)
        .into_iter()
        .filter(|t| arrow_parts(t).is_some())
        .collect();
    if arrows.is_empty() || !type_of_application(space, head, args).is_empty() {
        return Ok(());
    }
    Err(diagnose(space, atom, &arrows, args))
}

/// Finds the first argument that breaks typing against the first arrow of
/// fitting arity.
fn diagnose(space: &AtomSpace, atom: &Atom, arrows: &[Atom], args: &[Atom]) -> TypeError {
    let first_type = |a: &Atom| {
        type_of(space, a)
            .into_iter()
            .next()
            .unwrap_or_else(undefined)
    };
    let fitting = arrows
        .iter()
        .find(|t| arrow_parts(t).is_some_and(|(p, _)| p.len() == args.len()));
    let Some(arrow) = fitting else {
        let mut actual = vec![Atom::sym(ARROW)];
        actual.extend(args.iter().map(first_type));
        actual.push(undefined());
        return TypeError {
            atom: atom.clone(),
            expected: arrows[0].clone(),
            actual: Atom::Expression(actual),
        };
    };
    let (params, _) = arrow_parts(arrow).expect("arrow");
    let mut bindings = Bindings::new();
    for (param, arg) in params.iter().zip(args) {
        let param = open(param);
        let types = type_of(space, arg);
        match types
            .iter()
            .find_map(|t| unify(&param, &open(t), &bindings))
        {
            Some(next) => bindings = next,
            None => {
                return TypeError {
                    atom: atom.clone(),
                    expected: close(&bindings.apply(&param)),
                    actual: types.into_iter().next().unwrap_or_else(undefined),
                }
            }
        }
    }
    // greedy choices succeeded where the full search did not; report the
    // arrow itself
    TypeError {
        atom: atom.clone(),
        expected: arrow.clone(),
        actual: undefined(),
    }
}
