//! Rooted tree maps: the linear action of forests on Q<x,y>, the
//! derivations with prescribed generator images, and the expansion of
//! those derivations as combinations of ladder-tree maps.
//!
//! A non-empty forest `f` acts on a word by recursing through the last
//! letter, `f(wu) = M(delta(f)(w (x) u))`, bottoming out at the letter
//! rules: the one-vertex tree sends x to xy and y to -xy, a grafted tree
//! acts by `R_y R_{x+2y} R_y^{-1}` after its root is removed, and a
//! product forest acts by composing its factors. The empty forest is the
//! identity, and on the empty word a non-empty forest gives 0.

use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_traits::One;

use crate::forest::{b_plus, remove_root, Forest, ForestSum};
use crate::hopf::{coproduct_forest, ladder};
use crate::rational::{rat_int, Rat};
use crate::word::{Letter, Word, WordSum};

static CACHE_BUDGET: AtomicUsize = AtomicUsize::new(1 << 20);

/// Caps the number of entries each memo table may hold. Entries beyond the
/// budget are recomputed instead of stored.
pub fn set_cache_budget(entries: usize) {
    CACHE_BUDGET.store(entries, Ordering::Relaxed);
}

fn letter_cache() -> &'static Mutex<HashMap<(Forest, Letter), WordSum>> {
    static CACHE: OnceLock<Mutex<HashMap<(Forest, Letter), WordSum>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn word_cache() -> &'static Mutex<HashMap<(Forest, Word), WordSum>> {
    static CACHE: OnceLock<Mutex<HashMap<(Forest, Word), WordSum>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

fn cache_insert<K: std::hash::Hash + Eq>(
    cache: &Mutex<HashMap<K, WordSum>>,
    key: K,
    value: WordSum,
) -> WordSum {
    let mut map = cache.lock().expect("poisoned");
    if map.len() < CACHE_BUDGET.load(Ordering::Relaxed) {
        map.entry(key).or_insert(value).clone()
    } else {
        value
    }
}

fn x_plus_2y() -> WordSum {
    &WordSum::x() + &WordSum::y().scale(&rat_int(2))
}

/// Action of a forest on a single letter. The empty forest acts as the
/// identity.
pub fn apply_letter(f: &Forest, u: Letter) -> WordSum {
    if f.is_empty() {
        return WordSum::from_word(Word::letter(u));
    }
    if let Some(hit) = letter_cache()
        .lock()
        .expect("poisoned")
        .get(&(f.clone(), u))
    {
        return hit.clone();
    }
    let result = match f.trees() {
        [t] => {
            if t.degree() == 1 {
                // the one-vertex tree: x -> xy, y -> -xy
                let xy = Word::x().push(Letter::Y);
                let sign = match u {
                    Letter::X => rat_int(1),
                    Letter::Y => rat_int(-1),
                };
                WordSum::from_term(xy, sign)
            } else {
                // t = B+(g): t(u) = R_y R_{x+2y} R_y^{-1} g(u)
                let inner = apply_letter(&remove_root(t), u);
                let stripped = inner.r_y_inverse().unwrap_or_else(|e| {
                    panic!("rooted tree map image lost its trailing y ({e}); this is a bug")
                });
                stripped.right_mult(&x_plus_2y()).right_mult(&WordSum::y())
            }
        }
        _ => {
            // product forest: compose the factors (order does not matter;
            // canonical order is used for determinism)
            let (head, rest) = f.split_first().expect("non-empty forest");
            let inner = apply_letter(&rest, u);
            apply_forest(&Forest::single(head), &inner)
        }
    };
    cache_insert(letter_cache(), (f.clone(), u), result)
}

/// Action of a single forest on a single word.
pub fn apply_forest_word(f: &Forest, w: &Word) -> WordSum {
    if f.is_empty() {
        return WordSum::from_word(w.clone());
    }
    if w.is_empty() {
        // f(1) = counit(f) * 1 = 0 for a non-empty forest
        return WordSum::zero();
    }
    if w.weight() == 1 {
        return apply_letter(f, w.letters()[0]);
    }
    if let Some(hit) = word_cache()
        .lock()
        .expect("poisoned")
        .get(&(f.clone(), w.clone()))
    {
        return hit.clone();
    }
    // f(w'u) = sum over delta(f) of f_(1)(w') . f_(2)(u)
    let (init, last) = w.split_last().expect("non-empty word");
    let mut result = WordSum::zero();
    for ((left, right), c) in coproduct_forest(f).terms() {
        let l = apply_forest_word(left, &init);
        if l.is_zero() {
            continue;
        }
        let r = apply_letter(right, last);
        result.add_scaled_product_assign(&l, &r, c);
    }
    cache_insert(word_cache(), (f.clone(), w.clone()), result)
}

/// Action of a single forest, extended linearly over a word sum.
pub fn apply_forest(f: &Forest, p: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for (w, c) in p.terms() {
        out.add_scaled_assign(&apply_forest_word(f, w), c);
    }
    out
}

/// Action of a forest sum: linear in both the operator and the argument.
pub fn apply(op: &ForestSum, p: &WordSum) -> WordSum {
    let mut out = WordSum::zero();
    for (f, c) in op.terms() {
        out.add_scaled_assign(&apply_forest(f, p), c);
    }
    out
}

/// Generator image `x (x+y)^{n-1} y` of the n-th derivation.
pub fn partial_generator(n: u32) -> WordSum {
    assert!(n >= 1, "derivation index must be >= 1");
    let x_plus_y = &WordSum::x() + &WordSum::y();
    let mut mid = WordSum::one();
    for _ in 1..n {
        mid = &mid * &x_plus_y;
    }
    &(&WordSum::x() * &mid) * &WordSum::y()
}

fn partial_word(gen: &WordSum, w: &Word, scale: &Rat, out: &mut WordSum) {
    // Leibniz rule over the letters of w
    for (i, &l) in w.letters().iter().enumerate() {
        let sign = match l {
            Letter::X => scale.clone(),
            Letter::Y => -scale.clone(),
        };
        let prefix = w.prefix(i);
        let suffix = w.suffix(i + 1);
        for (g, c) in gen.terms() {
            out.add_term(prefix.concat(g).concat(&suffix), c * &sign);
        }
    }
}

/// The derivation with `x -> x(x+y)^{n-1}y`, `y -> -x(x+y)^{n-1}y`,
/// extended by the Leibniz rule; zero on the empty word.
pub fn partial_n(n: u32, p: &WordSum) -> WordSum {
    let gen = partial_generator(n);
    let mut out = WordSum::zero();
    for (w, c) in p.terms() {
        partial_word(&gen, w, c, &mut out);
    }
    out
}

/// All compositions of `n` into `d` positive parts.
pub fn compositions(n: u32, d: u32) -> Vec<Vec<u32>> {
    fn rec(remaining: u32, parts_left: u32, acc: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if parts_left == 1 {
            acc.push(remaining);
            out.push(acc.clone());
            acc.pop();
            return;
        }
        for first in 1..=(remaining - parts_left + 1) {
            acc.push(first);
            rec(remaining - first, parts_left - 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if d >= 1 && n >= d {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

fn ladder_product(parts: &[u32]) -> Forest {
    let mut trees = Vec::with_capacity(parts.len());
    for &m in parts {
        trees.push(b_plus(&ladder(m as usize - 1)));
    }
    Forest::from_trees(trees)
}

/// The n-th derivation written as a combination of ladder-tree maps:
/// `n/(2^n - 1) * sum_d (-1)^{d+1}/d * sum over compositions of n into d
/// parts of the corresponding ladder-forest maps`.
pub fn partial_as_forest_sum(n: u32) -> ForestSum {
    assert!(n >= 1, "derivation index must be >= 1");
    let two_pow_minus_one = Rat::from_integer(BigInt::from(2).pow(n) - BigInt::one());
    let front = rat_int(n as i64) / two_pow_minus_one;
    let mut out = ForestSum::zero();
    for d in 1..=n {
        let sign = if d % 2 == 1 { rat_int(1) } else { rat_int(-1) };
        let scale = &front * sign / rat_int(d as i64);
        for comp in compositions(n, d) {
            out.add_term(ladder_product(&comp), scale.clone());
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::parse_forest;
    use crate::hopf::dynkin;
    use crate::rational::rat;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ws(s: &str) -> WordSum {
        WordSum::from_word(w(s))
    }

    #[test]
    fn single_vertex_on_letters() {
        let dot = parse_forest("()").unwrap();
        assert_eq!(apply_letter(&dot, Letter::X), ws("xy"));
        assert_eq!(apply_letter(&dot, Letter::Y), -&ws("xy"));
    }

    #[test]
    fn lambda2_on_x_matches_worked_example() {
        // lambda2(x) = x(x+2y)y = xxy + 2xyy
        let lam2 = parse_forest("(())").unwrap();
        let got = apply_letter(&lam2, Letter::X);
        let expected = &ws("xxy") + &ws("xyy").scale(&rat_int(2));
        assert_eq!(got, expected);
    }

    #[test]
    fn cherry_on_x_matches_hand_recursion() {
        // Independent recomputation of the defining recursion:
        //   (..)(x) = dot(dot(x)) = dot(xy) = xyy - xxy
        //   cherry(x) = R_y R_{x+2y} R_y^{-1} (xyy - xxy)
        //             = R_y R_{x+2y} (xy - xx)
        //             = (xy - xx)(x + 2y) y
        let step = &ws("xy") - &ws("xx");
        let by_hand = step.right_mult(&x_plus_2y()).right_mult(&WordSum::y());

        let cherry = parse_forest("(()())").unwrap();
        let got = apply_letter(&cherry, Letter::X);
        assert_eq!(got, by_hand);

        // frozen expansion: xyxy + 2xyyy - xxxy - 2xxyy
        let mut expected = ws("xyxy");
        expected.add_assign(&ws("xyyy").scale(&rat_int(2)));
        expected.add_assign(&-&ws("xxxy"));
        expected.add_assign(&ws("xxyy").scale(&rat_int(-2)));
        assert_eq!(got, expected);
    }

    #[test]
    fn dot_on_xy_is_the_euler_row() {
        // one step of the recursion by hand:
        // dot(xy) = M(delta(dot)(x (x) y)) = dot(x).y + x.dot(y) = xyy - xxy
        let dot = parse_forest("()").unwrap();
        let by_hand = &(&apply_letter(&dot, Letter::X) * &WordSum::y())
            + &(&WordSum::x() * &apply_letter(&dot, Letter::Y));
        let got = apply_forest_word(&dot, &w("xy"));
        assert_eq!(got, by_hand);
        assert_eq!(got, &ws("xyy") - &ws("xxy"));
    }

    #[test]
    fn lambda2_on_xy_matches_worked_example() {
        // 2xyyy - xyxy - xxxy - xxyy
        let lam2 = parse_forest("(())").unwrap();
        let got = apply_forest_word(&lam2, &w("xy"));
        let mut expected = ws("xyyy").scale(&rat_int(2));
        expected.add_assign(&-&ws("xyxy"));
        expected.add_assign(&-&ws("xxxy"));
        expected.add_assign(&-&ws("xxyy"));
        assert_eq!(got, expected);
    }

    #[test]
    fn nonempty_forest_kills_the_empty_word() {
        let lam2 = parse_forest("(())").unwrap();
        assert!(apply_forest(&lam2, &WordSum::one()).is_zero());
        assert_eq!(
            apply_forest(&Forest::empty(), &WordSum::one()),
            WordSum::one()
        );
    }

    #[test]
    fn partial_generator_images() {
        assert_eq!(partial_generator(1), ws("xy"));
        assert_eq!(partial_generator(2), &ws("xxy") + &ws("xyy"));
        let p3 = partial_generator(3);
        assert_eq!(p3.len(), 4); // x{xx,xy,yx,yy}y
        assert_eq!(p3.coeff(&w("xxyy")), rat_int(1));
    }

    #[test]
    fn partial_1_by_leibniz_matches_dot_action() {
        // d1(xy) = d1(x).y + x.d1(y) = xyy - xxy, same as dot(xy)
        let got = partial_n(1, &ws("xy"));
        assert_eq!(got, &ws("xyy") - &ws("xxy"));
        let dot = parse_forest("()").unwrap();
        assert_eq!(got, apply_forest_word(&dot, &w("xy")));
    }

    #[test]
    fn partial_expansion_small_cases() {
        // n = 1: the single vertex
        let p1 = partial_as_forest_sum(1);
        assert_eq!(p1, ForestSum::from_forest(parse_forest("()").unwrap()));

        // n = 2: 2/3 lambda2 - 1/3 dot.dot
        let p2 = partial_as_forest_sum(2);
        let mut expected = ForestSum::from_term(parse_forest("(())").unwrap(), rat(2, 3));
        expected.add_term(parse_forest("()()").unwrap(), rat(-1, 3));
        assert_eq!(p2, expected);

        // n = 3: 3/7 lambda3 - 3/7 lambda2.dot + 1/7 dot^3
        let p3 = partial_as_forest_sum(3);
        let mut expected = ForestSum::from_term(parse_forest("((()))").unwrap(), rat(3, 7));
        expected.add_term(parse_forest("(())()").unwrap(), rat(-3, 7));
        expected.add_term(parse_forest("()()()").unwrap(), rat(1, 7));
        assert_eq!(p3, expected);
    }

    #[test]
    fn partial_expansion_equals_scaled_dynkin() {
        for n in 1..=6u32 {
            let lhs = partial_as_forest_sum(n)
                .scale(&Rat::from_integer(BigInt::from(2).pow(n) - BigInt::one()));
            let rhs = dynkin(&ForestSum::from_forest(ladder(n as usize)));
            assert_eq!(lhs, rhs, "n = {n}");
        }
    }

    #[test]
    fn composition_counts() {
        assert_eq!(compositions(5, 1).len(), 1);
        assert_eq!(compositions(5, 2).len(), 4);
        assert_eq!(compositions(5, 5).len(), 1);
        assert!(compositions(3, 4).is_empty());
        let total: usize = (1..=6).map(|d| compositions(6, d).len()).sum();
        assert_eq!(total, 32); // 2^(6-1)
    }

    #[test]
    fn sign_property_on_letters() {
        for n in 1..=4 {
            for f in crate::forest::enumerate_forests(n) {
                let sum = &apply_letter(&f, Letter::X) + &apply_letter(&f, Letter::Y);
                assert!(sum.is_zero(), "f(x) + f(y) != 0 for {f}");
            }
        }
    }

    #[test]
    fn caching_is_transparent() {
        // fresh inputs computed with caching disabled match the values
        // computed once inserts are allowed again
        let f = parse_forest("((())())").unwrap();
        let word: Word = "xyxy".parse().unwrap();
        set_cache_budget(0);
        let uncached = apply_forest_word(&f, &word);
        set_cache_budget(1 << 20);
        let cached = apply_forest_word(&f, &word);
        assert_eq!(uncached, cached);
        assert_eq!(cached, apply_forest_word(&f, &word));
    }
}
