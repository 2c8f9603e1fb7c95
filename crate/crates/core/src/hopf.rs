//! Hopf-algebra structure on the forest algebra: coproduct, counit,
//! antipode, grading operator, Dynkin operator and ladder trees.
//!
//! The coproduct is the Connes-Kreimer one, defined recursively through
//! grafting: for a tree `t` with root-removed forest `f`,
//! `delta(t) = t (x) I + (id (x) B+) delta(f)`, extended multiplicatively
//! to forests. The antipode follows from the reduced-coproduct recursion;
//! both are memoized per canonical forest since the tree-map engine hits
//! the same forests over and over.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_traits::Zero;

use crate::forest::{b_plus, remove_root, Forest, ForestSum, TensorSum, Tree};
use crate::rational::{rat_int, Rat};

fn coproduct_cache() -> &'static Mutex<HashMap<Forest, TensorSum>> {
    static CACHE: OnceLock<Mutex<HashMap<Forest, TensorSum>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn antipode_cache() -> &'static Mutex<HashMap<Tree, ForestSum>> {
    static CACHE: OnceLock<Mutex<HashMap<Tree, ForestSum>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The ladder tree with `m` vertices as a forest; `m = 0` gives the unit.
pub fn ladder(m: usize) -> Forest {
    let mut f = Forest::empty();
    for _ in 0..m {
        f = Forest::single(b_plus(&f));
    }
    f
}

/// Coproduct of a single forest.
pub fn coproduct_forest(f: &Forest) -> TensorSum {
    if f.is_empty() {
        return TensorSum::unit();
    }
    if let Some(hit) = coproduct_cache().lock().expect("poisoned").get(f) {
        return hit.clone();
    }
    let mut result = TensorSum::unit();
    for t in f.trees() {
        result = &result * &coproduct_tree(t);
    }
    coproduct_cache()
        .lock()
        .expect("poisoned")
        .entry(f.clone())
        .or_insert(result)
        .clone()
}

fn coproduct_tree(t: &Tree) -> TensorSum {
    let mut out = TensorSum::from_term(Forest::single(t.clone()), Forest::empty(), rat_int(1));
    let inner = coproduct_forest(&remove_root(t));
    out.add_assign(&inner.map_right(|r| Forest::single(b_plus(r))));
    out
}

/// Linear extension of the coproduct.
pub fn coproduct(a: &ForestSum) -> TensorSum {
    let mut out = TensorSum::zero();
    for (f, c) in a.terms() {
        out.add_assign(&coproduct_forest(f).scale(c));
    }
    out
}

/// Counit: the coefficient of the empty forest.
pub fn counit(a: &ForestSum) -> Rat {
    a.coeff(&Forest::empty())
}

/// Antipode of a single forest, as the product of its trees' antipodes.
pub fn antipode_forest(f: &Forest) -> ForestSum {
    let mut out = ForestSum::unit();
    for t in f.trees() {
        out = &out * &antipode_tree(t);
    }
    out
}

// S(t) = -t - sum S(f') f'' over the proper part of delta(t); terminates
// because every proper left factor has smaller degree.
fn antipode_tree(t: &Tree) -> ForestSum {
    if let Some(hit) = antipode_cache().lock().expect("poisoned").get(t) {
        return hit.clone();
    }
    let as_forest = Forest::single(t.clone());
    let mut result = -&ForestSum::from_forest(as_forest.clone());
    for ((left, right), c) in coproduct_tree(t).terms() {
        if right.is_empty() || left.is_empty() {
            continue;
        }
        let term = &antipode_forest(left) * &ForestSum::from_forest(right.clone());
        result.add_assign(&term.scale(&-c.clone()));
    }
    antipode_cache()
        .lock()
        .expect("poisoned")
        .entry(t.clone())
        .or_insert(result)
        .clone()
}

/// Linear extension of the antipode.
pub fn antipode(a: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (f, c) in a.terms() {
        out.add_assign(&antipode_forest(f).scale(c));
    }
    out
}

/// Grading operator Y: scales every basis forest by its vertex count.
pub fn grading(a: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (f, c) in a.terms() {
        out.add_term(f.clone(), c * rat_int(f.degree() as i64));
    }
    out
}

/// Dynkin operator `D = m o (S (x) Y) o delta`.
pub fn dynkin(a: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (f, c) in a.terms() {
        for ((left, right), w) in coproduct_forest(f).terms() {
            let deg = rat_int(right.degree() as i64);
            if deg.is_zero() {
                continue;
            }
            let term = &antipode_forest(left) * &ForestSum::from_forest(right.clone());
            out.add_assign(&term.scale(&(c * w * deg)));
        }
    }
    out
}

/// `(delta (x) id) o delta` as a canonical triple-tensor map; used by the
/// coassociativity checks.
pub fn coproduct_left_iterated(
    f: &Forest,
) -> std::collections::BTreeMap<(Forest, Forest, Forest), Rat> {
    let mut out = std::collections::BTreeMap::new();
    for ((left, right), c) in coproduct_forest(f).terms() {
        for ((a, b), d) in coproduct_forest(left).terms() {
            add_triple(&mut out, (a.clone(), b.clone(), right.clone()), c * d);
        }
    }
    out
}

/// `(id (x) delta) o delta` as a canonical triple-tensor map.
pub fn coproduct_right_iterated(
    f: &Forest,
) -> std::collections::BTreeMap<(Forest, Forest, Forest), Rat> {
    let mut out = std::collections::BTreeMap::new();
    for ((left, right), c) in coproduct_forest(f).terms() {
        for ((a, b), d) in coproduct_forest(right).terms() {
            add_triple(&mut out, (left.clone(), a.clone(), b.clone()), c * d);
        }
    }
    out
}

fn add_triple(
    map: &mut std::collections::BTreeMap<(Forest, Forest, Forest), Rat>,
    key: (Forest, Forest, Forest),
    c: Rat,
) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            let sum = e.get().clone() + c;
            if sum.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = sum;
            }
        }
    }
}

/// `m o (S (x) id) o delta`, which must equal `counit * unit`. Exposed for
/// the axiom checks.
pub fn antipode_axiom_lhs(a: &ForestSum) -> ForestSum {
    let mut out = ForestSum::zero();
    for (f, c) in a.terms() {
        for ((left, right), w) in coproduct_forest(f).terms() {
            let term = &antipode_forest(left) * &ForestSum::from_forest(right.clone());
            out.add_assign(&term.scale(&(c * w)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::{enumerate_forests, parse_forest};
    use crate::rational::rat;

    fn fs(key: &str) -> ForestSum {
        ForestSum::from_forest(parse_forest(key).unwrap())
    }

    #[test]
    fn ladder_shapes() {
        assert!(ladder(0).is_empty());
        assert_eq!(ladder(1).key(), "()");
        assert_eq!(ladder(3).key(), "((()))");
    }

    #[test]
    fn coproduct_of_single_vertex() {
        let dot = parse_forest("()").unwrap();
        let d = coproduct_forest(&dot);
        assert_eq!(d.len(), 2);
        assert_eq!(d.coeff(&dot, &Forest::empty()), rat_int(1));
        assert_eq!(d.coeff(&Forest::empty(), &dot), rat_int(1));
    }

    #[test]
    fn coproduct_of_cherry_matches_known_expansion() {
        // delta(cherry) = cherry (x) I + dotdot (x) dot + 2 dot (x) lambda2
        //               + I (x) cherry
        let cherry = parse_forest("(()())").unwrap();
        let d = coproduct_forest(&cherry);
        assert_eq!(d.len(), 4);
        assert_eq!(d.coeff(&cherry, &Forest::empty()), rat_int(1));
        assert_eq!(
            d.coeff(&parse_forest("()()").unwrap(), &parse_forest("()").unwrap()),
            rat_int(1)
        );
        assert_eq!(
            d.coeff(&parse_forest("()").unwrap(), &parse_forest("(())").unwrap()),
            rat_int(2)
        );
        assert_eq!(d.coeff(&Forest::empty(), &cherry), rat_int(1));
    }

    #[test]
    fn coproduct_of_ladders_is_binomial_free() {
        // delta(lambda_n) = sum_j lambda_j (x) lambda_{n-j}
        for n in 0..=6 {
            let d = coproduct_forest(&ladder(n));
            assert_eq!(d.len(), n + 1);
            for j in 0..=n {
                assert_eq!(
                    d.coeff(&ladder(j), &ladder(n - j)),
                    rat_int(1),
                    "n={n} j={j}"
                );
            }
        }
    }

    #[test]
    fn counit_examples() {
        assert_eq!(counit(&ForestSum::unit()), rat_int(1));
        assert_eq!(counit(&fs("()")), rat_int(0));
        let mixed = &ForestSum::unit().scale(&rat_int(3)) - &fs("(())").scale(&rat_int(2));
        assert_eq!(counit(&mixed), rat_int(3));
    }

    #[test]
    fn antipode_small_cases() {
        // S(dot) = -dot
        assert_eq!(antipode(&fs("()")), -&fs("()"));
        // S(lambda2) = -lambda2 + dot.dot
        let s = antipode(&fs("(())"));
        let expected = &(-&fs("(())")) + &fs("()()");
        assert_eq!(s, expected);
        // S(dot^4) = dot^4
        let dot4 = fs("()()()()");
        assert_eq!(antipode(&dot4), dot4);
        // S(dot^3) = -dot^3
        let dot3 = fs("()()()");
        assert_eq!(antipode(&dot3), -&dot3);
    }

    #[test]
    fn antipode_axiom_on_small_forests() {
        for n in 0..=4 {
            for f in enumerate_forests(n) {
                let a = ForestSum::from_forest(f.clone());
                let lhs = antipode_axiom_lhs(&a);
                let rhs = ForestSum::unit().scale(&counit(&a));
                assert_eq!(lhs, rhs, "antipode axiom failed on {f}");
            }
        }
    }

    #[test]
    fn grading_scales_by_degree() {
        assert!(grading(&ForestSum::unit()).is_zero());
        assert_eq!(grading(&fs("()")), fs("()"));
        let mixed = &fs("(()())") + &fs("(())").scale(&rat_int(2));
        let expected = &fs("(()())").scale(&rat_int(3)) + &fs("(())").scale(&rat_int(4));
        assert_eq!(grading(&mixed), expected);
    }

    #[test]
    fn dynkin_small_cases() {
        // D(dot) = dot
        assert_eq!(dynkin(&fs("()")), fs("()"));
        // D(lambda2) = 2 lambda2 - dot.dot
        let d = dynkin(&fs("(())"));
        let expected = &fs("(())").scale(&rat_int(2)) - &fs("()()");
        assert_eq!(d, expected);
        // D(lambda1^2) = 0
        assert!(dynkin(&fs("()()")).is_zero());
    }

    #[test]
    fn dynkin_of_lambda3() {
        // instance of the closed form: 3(lambda3 - lambda2.lambda1 + 1/3 lambda1^3)
        let d = dynkin(&fs("((()))"));
        let mut expected = fs("((()))").scale(&rat_int(3));
        expected.add_assign(&fs("(())()").scale(&rat_int(-3)));
        expected.add_assign(&fs("()()()").scale(&rat(3, 3)));
        assert_eq!(d, expected);
    }
}
