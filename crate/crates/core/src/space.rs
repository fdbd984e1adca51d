//! The atomspace: an insertion-ordered multiset of atoms answering
//! unification queries.
//!
//! Expressions with a symbol head are indexed by `(arity, head name)`.
//! Everything else (symbols, grounded atoms, variables, and expressions whose
//! head is not a symbol) sits in an overflow list that every query consults,
//! because any of those may unify with an indexed pattern.
//!
//! Stored atoms that contain variables are renamed into a fresh scope before
//! each unification attempt, so a variable in the store never collides with
//! a same-named variable in the query.

use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::atom::{Atom, SpaceRef};
use crate::reader::{parse_program, ParseError};
use crate::unify::{fresh_generation, fresh_rename, unify, Bindings};

static SPACE_IDS: AtomicU64 = AtomicU64::new(1);

/// Head symbol of the composite query `(, p1 p2 ...)`.
pub const CONJUNCTION: &str = ",";

#[derive(Clone, Debug)]
struct Entry {
    atom: Atom,
    ground: bool,
}

#[derive(Clone, Debug)]
pub struct AtomSpace {
    id: u64,
    // tombstoned on removal; slot numbers are the insertion order
    slots: Vec<Option<Entry>>,
    len: usize,
    index: HashMap<usize, HashMap<String, Vec<usize>>>,
    overflow: Vec<usize>,
    indexing: bool,
}

impl Default for AtomSpace {
    fn default() -> Self {
        Self::new()
    }
}

fn index_key(atom: &Atom) -> Option<(usize, &str)> {
    let children = atom.children()?;
    children
        .first()?
        .as_symbol()
        .map(|head| (children.len(), head))
}

/// Merges two ascending slot lists.
fn merge_slots(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

impl AtomSpace {
    pub fn new() -> Self {
        AtomSpace {
            id: SPACE_IDS.fetch_add(1, Ordering::Relaxed),
            slots: Vec::new(),
            len: 0,
            index: HashMap::new(),
            overflow: Vec::new(),
            indexing: true,
        }
    }

    /// Parses `src` and stores every form. Directives are rejected.
    pub fn load(src: &str) -> Result<AtomSpace, ParseError> {
        let mut space = AtomSpace::new();
        for item in parse_program(src)? {
            if item.is_directive {
                return Err(ParseError::UnexpectedDirective(item.span));
            }
            space.add(item.atom);
        }
        Ok(space)
    }

    /// One rendered atom per line, in insertion order.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for atom in self.iter() {
            out.push_str(&atom.to_string());
            out.push('\n');
        }
        out
    }

    pub fn space_ref(&self) -> SpaceRef {
        SpaceRef { id: self.id }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Stored atoms in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Atom> {
        self.slots.iter().flatten().map(|e| &e.atom)
    }

    /// Turning the index off makes every query a linear scan. Results are the
    /// same either way.
    pub fn set_indexing(&mut self, enabled: bool) {
        self.indexing = enabled;
    }

    pub fn indexing(&self) -> bool {
        self.indexing
    }

    pub fn add(&mut self, atom: Atom) {
        let slot = self.slots.len();
        match index_key(&atom) {
            Some((arity, head)) => self
                .index
                .entry(arity)
                .or_default()
                .entry(head.to_string())
                .or_default()
                .push(slot),
            None => self.overflow.push(slot),
        }
        let ground = atom.is_ground();
        self.slots.push(Some(Entry { atom, ground }));
        self.len += 1;
    }

    /// Removes the earliest stored occurrence equal to `atom`.
    pub fn remove(&mut self, atom: &Atom) -> bool {
        let key = index_key(atom);
        let list = match key {
            Some((arity, head)) => match self.index.get_mut(&arity).and_then(|m| m.get_mut(head)) {
                Some(bucket) => bucket,
                None => return false,
            },
            None => &mut self.overflow,
        };
        let slots = &self.slots;
        let Some(pos) = list
            .iter()
            .position(|&s| slots[s].as_ref().is_some_and(|e| &e.atom == atom))
        else {
            return false;
        };
        let slot = list.remove(pos);
        if list.is_empty() {
            if let Some((arity, head)) = key {
                let by_head = self.index.get_mut(&arity).expect("bucket exists");
                by_head.remove(head);
                if by_head.is_empty() {
                    self.index.remove(&arity);
                }
            }
        }
        self.slots[slot] = None;
        self.len -= 1;
        if self.slots.len() > 64 && self.len * 2 < self.slots.len() {
            self.compact();
        }
        true
    }

    fn compact(&mut self) {
        let atoms: Vec<Entry> = self.slots.drain(..).flatten().collect();
        self.index.clear();
        self.overflow.clear();
        self.len = 0;
        for entry in atoms {
            self.add(entry.atom);
        }
    }

    fn all_slots(&self) -> Vec<usize> {
        (0..self.slots.len())
            .filter(|&s| self.slots[s].is_some())
            .collect()
    }

    /// Slots that may unify with `pattern`, ascending.
    fn candidates(&self, pattern: &Atom) -> Vec<usize> {
        if !self.indexing {
            return self.all_slots();
        }
        match pattern {
            Atom::Variable(_) => self.all_slots(),
            Atom::Expression(children) => match children.first() {
                Some(Atom::Symbol(head)) => {
                    let bucket = self
                        .index
                        .get(&children.len())
                        .and_then(|m| m.get(head.name()));
                    match bucket {
                        Some(bucket) => merge_slots(bucket, &self.overflow),
                        None => self.overflow.clone(),
                    }
                }
                Some(Atom::Variable(_)) => self.all_slots(),
                // empty, grounded-headed, or expression-headed patterns can
                // only meet overflow atoms
                _ => self.overflow.clone(),
            },
            // symbols and grounded atoms match only themselves or a variable
            _ => self.overflow.clone(),
        }
    }

    /// Unifies `pattern` with every stored atom under `seed`. Results are the
    /// full bindings, including renamed store variables, in insertion order.
    pub fn query_with(&self, pattern: &Atom, seed: &Bindings) -> Vec<Bindings> {
        let pattern = seed.apply(pattern);
        let mut results = Vec::new();
        for slot in self.candidates(&pattern) {
            let entry = self.slots[slot].as_ref().expect("live slot");
            let found = if entry.ground {
                unify(&pattern, &entry.atom, seed)
            } else {
                unify(
                    &pattern,
                    &fresh_rename(&entry.atom, fresh_generation()),
                    seed,
                )
            };
            results.extend(found);
        }
        results
    }

    /// Conjunction of subpatterns sharing one set of bindings, solved left to
    /// right. The empty conjunction has the single solution `seed`.
    pub fn query_conj_with(&self, subpatterns: &[Atom], seed: &Bindings) -> Vec<Bindings> {
        let mut partial = vec![seed.clone()];
        for sub in subpatterns {
            partial = partial
                .iter()
                .flat_map(|b| self.query_with(sub, b))
                .collect();
            if partial.is_empty() {
                break;
            }
        }
        partial
    }

    /// Bindings for the variables of `pattern`, one per matching stored atom.
    pub fn query(&self, pattern: &Atom) -> Vec<Bindings> {
        let vars = pattern.variables();
        self.query_with(pattern, &Bindings::new())
            .iter()
            .map(|b| b.project(&vars))
            .collect()
    }

    pub fn query_conj(&self, subpatterns: &[Atom]) -> Vec<Bindings> {
        let vars = Atom::expr(subpatterns.iter().cloned()).variables();
        self.query_conj_with(subpatterns, &Bindings::new())
            .iter()
            .map(|b| b.project(&vars))
            .collect()
    }
}

/// Splits `(, p1 p2 ...)` into its subpatterns.
pub fn conjuncts(pattern: &Atom) -> Option<&[Atom]> {
    match pattern.children()? {
        [head, rest @ ..] if head.as_symbol() == Some(CONJUNCTION) => Some(rest),
        _ => None,
    }
}
