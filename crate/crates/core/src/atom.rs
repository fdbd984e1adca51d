//! The atom data model shared by every other module.
//!
//! An [`Atom`] is one of four things: a symbol, a variable, a grounded value
//! wrapping host data, or an expression (an ordered tuple of atoms). Atoms are
//! immutable trees and cheap to clone at the leaves.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Scope id given to variables produced by the reader.
pub const PARSE_SCOPE: u64 = 0;

/// Head symbol of error expressions. Expressions headed by it are never
/// evaluated further.
pub const ERROR_SYMBOL: &str = "Error";

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Atom {
    Symbol(Symbol),
    Variable(Variable),
    Grounded(Grounded),
    Expression(Vec<Atom>),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        debug_assert!(is_symbol_name(name), "invalid symbol name {name:?}");
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

/// A variable. Two variables are the same variable only when both the name
/// and the scope id agree; the scope id is never rendered.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable {
    // field order gives the (scope, name) ordering used by unification
    scope: u64,
    name: Arc<str>,
}

impl Variable {
    pub fn new(name: &str) -> Self {
        Self::scoped(name, PARSE_SCOPE)
    }

    pub fn scoped(name: &str, scope: u64) -> Self {
        debug_assert!(is_variable_name(name), "invalid variable name {name:?}");
        Variable {
            scope,
            name: Arc::from(name),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn scope(&self) -> u64 {
        self.scope
    }

    /// Same name, different scope.
    pub fn with_scope(&self, scope: u64) -> Self {
        Variable {
            scope,
            name: Arc::clone(&self.name),
        }
    }
}

/// Host data embedded in the atom tree.
#[derive(Clone, Debug)]
pub enum Grounded {
    Int(i64),
    Float(f64),
    Text(Arc<str>),
    Space(SpaceRef),
    Exec(ExecFn),
}

// Floats compare by bit pattern so that equality stays an equivalence
// relation (NaN == NaN, 0.0 != -0.0).
impl PartialEq for Grounded {
    fn eq(&self, other: &Self) -> bool {
        use Grounded::*;
        match (self, other) {
            (Int(a), Int(b)) => a == b,
            (Float(a), Float(b)) => a.to_bits() == b.to_bits(),
            (Text(a), Text(b)) => a == b,
            (Space(a), Space(b)) => a == b,
            (Exec(a), Exec(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Grounded {}

impl Hash for Grounded {
    fn hash<H: Hasher>(&self, state: &mut H) {
        std::mem::discriminant(self).hash(state);
        match self {
            Grounded::Int(i) => i.hash(state),
            Grounded::Float(f) => f.to_bits().hash(state),
            Grounded::Text(s) => s.hash(state),
            Grounded::Space(s) => s.hash(state),
            Grounded::Exec(e) => e.hash(state),
        }
    }
}

/// Handle to an [`AtomSpace`](crate::space::AtomSpace). Only the program's
/// own space is reachable from MeTTa code, so every handle renders as `&self`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SpaceRef {
    pub id: u64,
}

/// A named host operation. Equality and hashing use the name only.
#[derive(Clone, Debug)]
pub struct ExecFn {
    pub name: Arc<str>,
    /// Lazy operations receive their arguments unevaluated.
    pub lazy: bool,
    pub arity: usize,
}

impl PartialEq for ExecFn {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for ExecFn {}

impl Hash for ExecFn {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

impl Atom {
    pub fn sym(name: &str) -> Atom {
        Atom::Symbol(Symbol::new(name))
    }

    pub fn var(name: &str) -> Atom {
        Atom::Variable(Variable::new(name))
    }

    pub fn expr<I: IntoIterator<Item = Atom>>(children: I) -> Atom {
        Atom::Expression(children.into_iter().collect())
    }

    pub fn int(value: i64) -> Atom {
        Atom::Grounded(Grounded::Int(value))
    }

    pub fn float(value: f64) -> Atom {
        Atom::Grounded(Grounded::Float(value))
    }

    pub fn text(value: &str) -> Atom {
        Atom::Grounded(Grounded::Text(Arc::from(value)))
    }

    /// The unit value `()`.
    pub fn unit() -> Atom {
        Atom::Expression(Vec::new())
    }

    /// `(Error <culprit> <reason>)`
    pub fn error(culprit: Atom, reason: &str) -> Atom {
        Atom::expr([Atom::sym(ERROR_SYMBOL), culprit, Atom::sym(reason)])
    }

    pub fn as_symbol(&self) -> Option<&str> {
        match self {
            Atom::Symbol(s) => Some(s.name()),
            _ => None,
        }
    }

    pub fn children(&self) -> Option<&[Atom]> {
        match self {
            Atom::Expression(children) => Some(children),
            _ => None,
        }
    }

    /// The first child of a non-empty expression.
    pub fn head(&self) -> Option<&Atom> {
        self.children().and_then(|c| c.first())
    }

    pub fn is_error(&self) -> bool {
        self.head().and_then(Atom::as_symbol) == Some(ERROR_SYMBOL)
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Atom::Variable(_) => false,
            Atom::Expression(children) => children.iter().all(Atom::is_ground),
            _ => true,
        }
    }

    /// Distinct variables in order of first occurrence.
    pub fn variables(&self) -> Vec<Variable> {
        let mut out = Vec::new();
        self.collect_variables(&mut out);
        out
    }

    fn collect_variables(&self, out: &mut Vec<Variable>) {
        match self {
            Atom::Variable(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Atom::Expression(children) => children.iter().for_each(|c| c.collect_variables(out)),
            _ => {}
        }
    }

    /// Rebuilds the atom with every variable passed through `f`.
    pub fn map_variables(&self, f: &mut impl FnMut(&Variable) -> Atom) -> Atom {
        match self {
            Atom::Variable(v) => f(v),
            Atom::Expression(children) => {
                Atom::Expression(children.iter().map(|c| c.map_variables(f)).collect())
            }
            other => other.clone(),
        }
    }
}

/// Structural equality; variables must agree on name and scope.
pub fn atoms_equal(a: &Atom, b: &Atom) -> bool {
    a == b
}

/// Canonical text form of an atom.
pub fn render(atom: &Atom) -> String {
    atom.to_string()
}

fn is_delimiter(c: char) -> bool {
    c.is_whitespace() || matches!(c, '(' | ')' | '"' | ';')
}

/// True if `text` is a numeric literal the reader turns into a number.
pub fn looks_numeric(text: &str) -> bool {
    let body = text.strip_prefix(['+', '-']).unwrap_or(text);
    let (int_part, frac) = match body.split_once('.') {
        Some((i, f)) => (i, Some(f)),
        None => (body, None),
    };
    let digits = |s: &str| !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit());
    digits(int_part) && frac.is_none_or(digits)
}

/// Names that read back as the same symbol.
pub fn is_symbol_name(name: &str) -> bool {
    !name.is_empty()
        && !name.contains(is_delimiter)
        && !name.starts_with(['$', '!'])
        && !looks_numeric(name)
}

pub fn is_variable_name(name: &str) -> bool {
    !name.is_empty() && !name.contains(is_delimiter)
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Symbol(s) => f.write_str(s.name()),
            Atom::Variable(v) => write!(f, "${}", v.name()),
            Atom::Grounded(g) => g.fmt(f),
            Atom::Expression(children) => {
                f.write_str("(")?;
                for (i, child) in children.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    child.fmt(f)?;
                }
                f.write_str(")")
            }
        }
    }
}

impl fmt::Display for Grounded {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Grounded::Int(i) => write!(f, "{i}"),
            Grounded::Float(x) => {
                let s = x.to_string();
                if x.is_finite() && !s.contains('.') {
                    write!(f, "{s}.0")
                } else {
                    f.write_str(&s)
                }
            }
            Grounded::Text(s) => {
                f.write_str("\"")?;
                for c in s.chars() {
                    match c {
                        '"' => f.write_str("\\\"")?,
                        '\\' => f.write_str("\\\\")?,
                        c => write!(f, "{c}")?,
                    }
                }
                f.write_str("\"")
            }
            Grounded::Space(_) => f.write_str("&self"),
            Grounded::Exec(e) => f.write_str(&e.name),
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "${}", self.name)
    }
}
