//! Oracles and generators shared by the integration suites. Nothing in here
//! goes through the space index or the interpreter.

#![allow(dead_code)]

use std::collections::HashMap;
use std::path::PathBuf;

use metta::{fresh_generation, fresh_rename, unify, Atom, AtomSpace, Bindings, Variable};
use proptest::prelude::*;
use proptest::test_runner::TestCaseError;

pub fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus")
}

/// `(name, source, expected output lines)` for every golden program.
pub fn golden_programs() -> Vec<(String, String, Vec<String>)> {
    let mut out = Vec::new();
    let mut paths: Vec<_> = std::fs::read_dir(corpus_dir())
        .expect("corpus directory")
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "metta"))
        .collect();
    paths.sort();
    for path in paths {
        let name = path.file_stem().unwrap().to_string_lossy().into_owned();
        let src = std::fs::read_to_string(&path).unwrap();
        let expected = std::fs::read_to_string(path.with_extension("expected")).unwrap();
        out.push((name, src, expected.lines().map(str::to_string).collect()));
    }
    out
}

/// Integer to `S`/`Z` numeral, built as text.
pub fn peano(n: usize) -> String {
    let mut s = "Z".to_string();
    for _ in 0..n {
        s = format!("(S {s})");
    }
    s
}

/// Query by linear scan over the stored atoms, in insertion order.
pub fn brute_force_query(space: &AtomSpace, pattern: &Atom) -> Vec<Bindings> {
    let vars = pattern.variables();
    space
        .iter()
        .filter_map(|stored| {
            let stored = fresh_rename(stored, fresh_generation());
            unify(pattern, &stored, &Bindings::new())
        })
        .map(|b| b.project(&vars))
        .collect()
}

/// Rendering of projected bindings in which every variable that is not one
/// of `vars` is renamed by first occurrence, so fresh scopes compare equal.
pub fn canonical(bindings: &Bindings, vars: &[Variable]) -> String {
    let mut seen: HashMap<Variable, usize> = HashMap::new();
    let mut parts = Vec::new();
    for var in vars {
        let Some(value) = bindings.resolve(var) else {
            parts.push(format!("{var}=?"));
            continue;
        };
        let value = value.map_variables(&mut |v| {
            if vars.contains(v) {
                Atom::Variable(v.clone())
            } else {
                let n = seen.len();
                let id = *seen.entry(v.clone()).or_insert(n);
                Atom::var(&format!("_{id}"))
            }
        });
        parts.push(format!("{var}={value}"));
    }
    parts.join(" ")
}

pub fn canonical_all(results: &[Bindings], pattern: &Atom) -> Vec<String> {
    let vars = pattern.variables();
    results.iter().map(|b| canonical(b, &vars)).collect()
}

fn symbol_name() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => prop::sample::select(vec!["A", "B", "C", "f", "g", "=", ":", "->", "Z", "S", "&self", "+"])
            .prop_map(str::to_string),
        1 => "[a-zA-Z_][a-zA-Z0-9_\\-]{0,6}",
    ]
}

fn variable_name() -> impl Strategy<Value = String> {
    prop_oneof![
        3 => prop::sample::select(vec!["x", "y", "z", "a", "b"]).prop_map(str::to_string),
        1 => "[a-z][a-z0-9_]{0,4}",
    ]
}

fn leaf() -> impl Strategy<Value = Atom> {
    prop_oneof![
        4 => symbol_name().prop_map(|n| Atom::sym(&n)),
        3 => variable_name().prop_map(|n| Atom::var(&n)),
        1 => (-1_000_000i64..1_000_000).prop_map(Atom::int),
        1 => (-100_000i64..100_000, 1i64..1000).prop_map(|(n, d)| Atom::float(n as f64 / d as f64)),
        1 => "[a-z \"\\\\]{0,6}".prop_map(|s| Atom::text(&s)),
    ]
}

/// Arbitrary atoms with parse-scope variables.
pub fn arb_atom() -> impl Strategy<Value = Atom> {
    leaf().prop_recursive(4, 32, 4, |inner| {
        prop::collection::vec(inner, 0..5).prop_map(Atom::Expression)
    })
}

/// Small-vocabulary atoms, so random pairs unify reasonably often.
pub fn arb_small_atom() -> impl Strategy<Value = Atom> {
    let leaf = prop_oneof![
        3 => prop::sample::select(vec!["A", "B", "C"]).prop_map(Atom::sym),
        2 => prop::sample::select(vec!["x", "y", "z"]).prop_map(Atom::var),
        1 => (0i64..3).prop_map(Atom::int),
    ];
    leaf.prop_recursive(3, 16, 3, |inner| {
        prop::collection::vec(inner, 0..4).prop_map(Atom::Expression)
    })
}

/// Atoms shaped like knowledge-base entries: mostly expressions headed by a
/// few symbols, some variable-headed, some bare leaves.
pub fn arb_fact() -> impl Strategy<Value = Atom> {
    let arg = prop_oneof![
        3 => prop::sample::select(vec!["A", "B", "C", "D"]).prop_map(Atom::sym),
        2 => prop::sample::select(vec!["x", "y"]).prop_map(Atom::var),
        1 => (0i64..3).prop_map(Atom::int),
        1 => prop::collection::vec(prop::sample::select(vec!["A", "B"]).prop_map(Atom::sym), 0..3)
            .prop_map(Atom::Expression),
    ];
    let head = prop_oneof![
        6 => prop::sample::select(vec!["p", "q", "r"]).prop_map(Atom::sym),
        1 => prop::sample::select(vec!["h", "x"]).prop_map(Atom::var),
        1 => Just(Atom::int(1)),
    ];
    prop_oneof![
        10 => (head, prop::collection::vec(arg.clone(), 0..3)).prop_map(|(h, mut args)| {
            args.insert(0, h);
            Atom::Expression(args)
        }),
        1 => arg,
        1 => Just(Atom::unit()),
    ]
}

pub fn arb_space_and_patterns() -> impl Strategy<Value = (Vec<Atom>, Vec<Atom>)> {
    (
        prop::collection::vec(arb_fact(), 0..=200),
        prop::collection::vec(arb_fact(), 1..=50),
    )
}

/// A variable together with an atom that strictly contains it.
pub fn arb_self_containing() -> impl Strategy<Value = (Atom, Atom)> {
    (variable_name(), arb_small_atom(), 0usize..4, 1usize..4).prop_map(
        |(name, filler, pos, depth)| {
            let var = Atom::var(&name);
            let mut wrapped = var.clone();
            for _ in 0..depth {
                let mut children = vec![Atom::sym("F"), filler.clone()];
                children.insert(1 + pos % 2, wrapped);
                wrapped = Atom::Expression(children);
            }
            (var, wrapped)
        },
    )
}

/// Ground terms over the arithmetic, Peano, and frog vocabularies.
pub fn arb_program_term() -> impl Strategy<Value = Atom> {
    let leaf = prop_oneof![
        prop::sample::select(vec!["Z", "Fritz", "Sam", "True", "False", "x"]).prop_map(Atom::sym),
        (-20i64..20).prop_map(Atom::int),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        let head = prop::sample::select(vec![
            "add", "S", "green", "frog", "and", "or", "not", "+", "-", "*", "/", "<", "==",
        ]);
        (head, prop::collection::vec(inner, 1..3)).prop_map(|(h, args)| {
            let mut children = vec![Atom::sym(h)];
            children.extend(args);
            Atom::Expression(children)
        })
    })
}

pub const PEANO_RULES: &str = "(= (add (S $x) $y) (add $x (S $y)))\n(= (add Z $x) $x)\n";

pub const FRITZ_RULES: &str = "(= (croaks Fritz) True)\n(= (eat_flies Fritz) True)\n\
                               (= (frog $x) (and (croaks $x) (eat_flies $x)))\n(= (green $x) (frog $x))\n";

pub fn check_unify_pair(a: &Atom, b: &Atom) -> Result<(), TestCaseError> {
    let ab = unify(a, b, &Bindings::new());
    let ba = unify(b, a, &Bindings::new());
    prop_assert_eq!(ab.is_some(), ba.is_some(), "symmetry for {} / {}", a, b);
    for bindings in ab.iter().chain(ba.iter()) {
        let (left, right) = (bindings.apply(a), bindings.apply(b));
        prop_assert_eq!(&left, &right, "soundness for {} / {}", a, b);
        prop_assert_eq!(
            bindings.apply(&left),
            left.clone(),
            "idempotence for {} / {}",
            a,
            b
        );
    }
    Ok(())
}

pub fn check_occurs(var: &Atom, term: &Atom) -> Result<(), TestCaseError> {
    prop_assert!(
        unify(var, term, &Bindings::new()).is_none(),
        "{} ~ {}",
        var,
        term
    );
    prop_assert!(
        unify(term, var, &Bindings::new()).is_none(),
        "{} ~ {}",
        term,
        var
    );
    Ok(())
}

pub fn check_round_trip(atom: &Atom) -> Result<(), TestCaseError> {
    let text = atom.to_string();
    let parsed =
        metta::parse_atom(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&parsed, atom);
    Ok(())
}

/// Every result that is ground evaluates to exactly itself.
pub fn check_normal_forms(space: &mut AtomSpace, term: &Atom) -> Result<(), TestCaseError> {
    let config = metta::EvalConfig::default();
    for result in metta::evaluate(space, term, &config) {
        if !result.atom.is_ground() {
            continue;
        }
        let again: Vec<Atom> = metta::evaluate(space, &result.atom, &config)
            .into_iter()
            .map(|r| r.atom)
            .collect();
        prop_assert_eq!(again, vec![result.atom.clone()], "from {}", term);
    }
    Ok(())
}

/// Add/remove operations checked against an occurrence-count oracle.
pub fn check_add_remove(ops: &[(bool, Atom)]) -> Result<(), TestCaseError> {
    let mut space = AtomSpace::new();
    let mut counts: HashMap<Atom, usize> = HashMap::new();
    for (is_add, atom) in ops {
        if *is_add {
            space.add(atom.clone());
            *counts.entry(atom.clone()).or_default() += 1;
        } else {
            let present = counts.get(atom).copied().unwrap_or(0) > 0;
            prop_assert_eq!(space.remove(atom), present);
            if present {
                *counts.get_mut(atom).unwrap() -= 1;
            }
        }
    }
    for (atom, count) in &counts {
        prop_assert_eq!(space.iter().filter(|a| *a == atom).count(), *count);
    }
    prop_assert_eq!(space.len(), counts.values().sum::<usize>());
    // removing every remaining occurrence empties the space
    for (atom, count) in counts {
        for _ in 0..count {
            prop_assert!(space.remove(&atom));
        }
    }
    prop_assert!(space.is_empty());
    Ok(())
}

pub fn arb_add_remove_ops() -> impl Strategy<Value = Vec<(bool, Atom)>> {
    prop::collection::vec((prop::bool::weighted(0.6), arb_fact()), 0..40)
}

pub fn check_index_matches_scan(facts: &[Atom], patterns: &[Atom]) -> Result<(), TestCaseError> {
    let mut space = AtomSpace::new();
    for f in facts {
        space.add(f.clone());
    }
    for pattern in patterns {
        let oracle = canonical_all(&brute_force_query(&space, pattern), pattern);
        space.set_indexing(true);
        let indexed = canonical_all(&space.query(pattern), pattern);
        space.set_indexing(false);
        let linear = canonical_all(&space.query(pattern), pattern);
        space.set_indexing(true);
        prop_assert_eq!(&indexed, &oracle, "indexed vs scan for {}", pattern);
        prop_assert_eq!(&linear, &oracle, "unindexed vs scan for {}", pattern);
    }
    Ok(())
}
