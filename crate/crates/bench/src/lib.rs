//! Workload generators shared by the benches.

use metta::{Atom, AtomSpace};

/// `n` ground facts `(rel<i mod heads> i v<i mod 7>)`.
pub fn ground_facts(n: usize, heads: usize) -> AtomSpace {
    let mut space = AtomSpace::new();
    for i in 0..n {
        let head = format!("rel{}", i % heads);
        let tag = format!("v{}", i % 7);
        space.add(Atom::expr([
            Atom::sym(&head),
            Atom::int(i as i64),
            Atom::sym(&tag),
        ]));
    }
    space
}

/// Peano numeral for `n`.
pub fn peano(n: usize) -> Atom {
    (0..n).fold(Atom::sym("Z"), |acc, _| Atom::expr([Atom::sym("S"), acc]))
}

pub const PEANO_RULES: &str = "(= (add Z $x) $x)\n(= (add (S $x) $y) (add $x (S $y)))\n";
