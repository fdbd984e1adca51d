//! Two-sided unification with occurs-check.
//!
//! [`Bindings`] is a triangular substitution: a variable may be bound to an
//! atom that mentions other bound variables. [`Bindings::resolve`] and
//! [`apply_bindings`] chase those links to a fixpoint, which terminates
//! because binding a variable to an atom containing itself is refused.

use std::borrow::Cow;
use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::atom::{Atom, Variable, PARSE_SCOPE};

static GENERATION: AtomicU64 = AtomicU64::new(PARSE_SCOPE + 1);

/// A scope id never handed out before. Shared by every space and evaluator
/// in the process so renamed variables cannot collide.
pub fn fresh_generation() -> u64 {
    GENERATION.fetch_add(1, Ordering::Relaxed)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bindings {
    map: HashMap<Variable, Atom>,
}

impl Bindings {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// The direct (unresolved) binding of `var`.
    pub fn get(&self, var: &Variable) -> Option<&Atom> {
        self.map.get(var)
    }

    /// Fully substituted value of `var`, if bound.
    pub fn resolve(&self, var: &Variable) -> Option<Atom> {
        self.map.get(var).map(|a| self.apply(a))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Atom)> {
        self.map.iter()
    }

    /// Binds `var` if that keeps the bindings consistent with the existing
    /// ones. Returns `false` and leaves `self` unchanged otherwise.
    pub fn bind(&mut self, var: Variable, value: Atom) -> bool {
        let mut next = self.clone();
        if unify_into(&mut next, &Atom::Variable(var), &value) {
            *self = next;
            true
        } else {
            false
        }
    }

    pub fn apply(&self, atom: &Atom) -> Atom {
        if self.map.is_empty() {
            return atom.clone();
        }
        match atom {
            Atom::Variable(v) => match self.map.get(v) {
                Some(value) => self.apply(value),
                None => atom.clone(),
            },
            Atom::Expression(children) => {
                Atom::Expression(children.iter().map(|c| self.apply(c)).collect())
            }
            _ => atom.clone(),
        }
    }

    /// Restriction to `vars`, each bound variable mapped to its resolved
    /// value.
    pub fn project<'a>(&self, vars: impl IntoIterator<Item = &'a Variable>) -> Bindings {
        let map = vars
            .into_iter()
            .filter_map(|v| self.resolve(v).map(|a| (v.clone(), a)))
            .collect();
        Bindings { map }
    }

    /// Combines two sets of bindings; `None` if they contradict each other.
    pub fn merge(&self, other: &Bindings) -> Option<Bindings> {
        let (mut acc, rest) = if self.len() >= other.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (var, value) in &rest.map {
            if !unify_into(&mut acc, &Atom::Variable(var.clone()), value) {
                return None;
            }
        }
        Some(acc)
    }

    fn walk<'a>(&self, atom: &'a Atom) -> Cow<'a, Atom> {
        let mut current = Cow::Borrowed(atom);
        while let Atom::Variable(v) = current.as_ref() {
            match self.map.get(v) {
                Some(next) => current = Cow::Owned(next.clone()),
                None => break,
            }
        }
        current
    }

    fn occurs(&self, var: &Variable, atom: &Atom) -> bool {
        match atom {
            Atom::Variable(v) if v == var => true,
            Atom::Variable(v) => self.map.get(v).is_some_and(|a| self.occurs(var, a)),
            Atom::Expression(children) => children.iter().any(|c| self.occurs(var, c)),
            _ => false,
        }
    }
}

impl fmt::Display for Bindings {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut entries: Vec<_> = self.map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        f.write_str("{")?;
        for (i, (var, value)) in entries.into_iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{var} <- {value}")?;
        }
        f.write_str("}")
    }
}

fn unify_into(bindings: &mut Bindings, a: &Atom, b: &Atom) -> bool {
    let a = bindings.walk(a);
    let b = bindings.walk(b);
    match (a.as_ref(), b.as_ref()) {
        (Atom::Variable(x), Atom::Variable(y)) => {
            if x != y {
                // the larger (scope, name) points at the smaller
                let (from, to) = if x > y { (x, y) } else { (y, x) };
                bindings
                    .map
                    .insert(from.clone(), Atom::Variable(to.clone()));
            }
            true
        }
        (Atom::Variable(x), other) | (other, Atom::Variable(x)) => {
            if bindings.occurs(x, other) {
                return false;
            }
            bindings.map.insert(x.clone(), other.clone());
            true
        }
        (Atom::Expression(xs), Atom::Expression(ys)) => {
            xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| unify_into(bindings, x, y))
        }
        (x, y) => x == y,
    }
}

/// Unifies `a` with `b` starting from `seed`. On success the result extends
/// `seed` and makes both atoms equal under [`apply_bindings`].
pub fn unify(a: &Atom, b: &Atom, seed: &Bindings) -> Option<Bindings> {
    let mut bindings = seed.clone();
    unify_into(&mut bindings, a, b).then_some(bindings)
}

pub fn apply_bindings(atom: &Atom, bindings: &Bindings) -> Atom {
    bindings.apply(atom)
}

/// Moves every variable of `atom` into scope `generation`. Same-named
/// variables stay identified with each other.
pub fn fresh_rename(atom: &Atom, generation: u64) -> Atom {
    atom.map_variables(&mut |v| Atom::Variable(v.with_scope(generation)))
}
