//! Unordered rooted trees and forests in canonical form, plus rational
//! linear combinations of them.
//!
//! A tree is a root with an unordered multiset of child subtrees; a forest
//! is an unordered multiset of trees. Canonical form is the sorted
//! parenthesis encoding: a tree renders as `(` + its children's keys in
//! ascending byte order + `)`, a forest as its trees' keys in ascending
//! byte order. Two structures are equal exactly when their keys agree, so
//! the key doubles as hash input, ordering and wire format.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{fmt_rat, Rat};

/// A rooted tree with at least one vertex. Children are kept sorted by
/// canonical key, and the key and vertex count are cached on the node.
#[derive(Clone, Debug)]
pub struct Tree {
    key: String,
    degree: usize,
    children: Vec<Tree>,
}

impl Tree {
    /// The one-vertex tree.
    pub fn leaf() -> Tree {
        Tree {
            key: "()".to_string(),
            degree: 1,
            children: Vec::new(),
        }
    }

    /// Builds a tree from an arbitrary child ordering; the result is
    /// canonical regardless of the order given.
    pub fn with_children(mut children: Vec<Tree>) -> Tree {
        children.sort();
        let mut key =
            String::with_capacity(2 + children.iter().map(|c| c.key.len()).sum::<usize>());
        key.push('(');
        for c in &children {
            key.push_str(&c.key);
        }
        key.push(')');
        let degree = 1 + children.iter().map(|c| c.degree).sum::<usize>();
        Tree {
            key,
            degree,
            children,
        }
    }

    /// Number of vertices.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Canonical text key, e.g. `"(()())"` for the cherry.
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn children(&self) -> &[Tree] {
        &self.children
    }
}

impl PartialEq for Tree {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Tree {}

impl PartialOrd for Tree {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Tree {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl std::hash::Hash for Tree {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.key)
    }
}

/// A multiset of rooted trees. The empty forest is the algebra unit.
#[derive(Clone, Debug)]
pub struct Forest {
    key: String,
    degree: usize,
    trees: Vec<Tree>,
}

impl Forest {
    /// The empty forest (unit of the forest algebra).
    pub fn empty() -> Forest {
        Forest {
            key: String::new(),
            degree: 0,
            trees: Vec::new(),
        }
    }

    pub fn single(tree: Tree) -> Forest {
        Forest {
            key: tree.key.clone(),
            degree: tree.degree,
            trees: vec![tree],
        }
    }

    pub fn from_trees(mut trees: Vec<Tree>) -> Forest {
        trees.sort();
        let key = trees.iter().map(|t| t.key.as_str()).collect();
        let degree = trees.iter().map(|t| t.degree).sum();
        Forest { key, degree, trees }
    }

    pub fn is_empty(&self) -> bool {
        self.trees.is_empty()
    }

    /// Total vertex count.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Canonical text key; empty string for the empty forest.
    pub fn key(&self) -> &str {
        &self.key
    }

    pub fn trees(&self) -> &[Tree] {
        &self.trees
    }

    /// Multiset union, the (commutative) forest product.
    pub fn product(&self, other: &Forest) -> Forest {
        let mut trees = Vec::with_capacity(self.trees.len() + other.trees.len());
        trees.extend_from_slice(&self.trees);
        trees.extend_from_slice(&other.trees);
        Forest::from_trees(trees)
    }

    /// Splits off the first tree (by key order); `None` for the unit.
    pub fn split_first(&self) -> Option<(Tree, Forest)> {
        let (first, rest) = self.trees.split_first()?;
        Some((first.clone(), Forest::from_trees(rest.to_vec())))
    }
}

impl PartialEq for Forest {
    fn eq(&self, other: &Self) -> bool {
        self.key == other.key
    }
}
impl Eq for Forest {}

impl PartialOrd for Forest {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Forest {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }
}

impl std::hash::Hash for Forest {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.key.hash(state);
    }
}

impl fmt::Display for Forest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("I")
        } else {
            f.write_str(&self.key)
        }
    }
}

/// Grafting operator: joins all roots of `f` to a fresh root.
pub fn b_plus(f: &Forest) -> Tree {
    Tree::with_children(f.trees.clone())
}

/// Inverse of grafting: the forest of the root's subtrees.
pub fn remove_root(t: &Tree) -> Forest {
    // children are already sorted, so the forest is canonical as-is
    Forest::from_trees(t.children.clone())
}

/// Parses a canonical (or any-order) parenthesis key back into a forest.
/// The empty string parses to the empty forest.
pub fn parse_forest(input: &str) -> Result<Forest> {
    let mut stack: Vec<Vec<Tree>> = vec![Vec::new()];
    for (pos, b) in input.bytes().enumerate() {
        match b {
            b'(' => stack.push(Vec::new()),
            b')' => {
                let children = stack.pop().expect("stack never empty");
                if stack.is_empty() {
                    return Err(Error::parse(pos, "unmatched ')'"));
                }
                let tree = Tree::with_children(children);
                stack.last_mut().expect("stack nonempty").push(tree);
            }
            _ => {
                return Err(Error::parse(
                    pos,
                    format!("expected '(' or ')', found {:?}", b as char),
                ))
            }
        }
    }
    if stack.len() != 1 {
        return Err(Error::parse(input.len(), "unclosed '('"));
    }
    Ok(Forest::from_trees(stack.pop().expect("stack nonempty")))
}

/// All trees with exactly `n` vertices, sorted by key. Degree-`n` trees are
/// the graftings of degree-`n-1` forests.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    if n == 0 {
        return Vec::new();
    }
    let mut trees: Vec<Tree> = enumerate_forests(n - 1).iter().map(b_plus).collect();
    trees.sort();
    trees
}

/// All forests with exactly `n` vertices, sorted by key.
pub fn enumerate_forests(n: usize) -> Vec<Forest> {
    // multisets are assembled in non-decreasing key order so each forest
    // appears exactly once
    fn rec(
        remaining: usize,
        pool: &[Vec<Tree>],
        min_key: &str,
        acc: &mut Vec<Tree>,
        out: &mut Vec<Forest>,
    ) {
        if remaining == 0 {
            out.push(Forest::from_trees(acc.clone()));
            return;
        }
        for d in 1..=remaining {
            for t in &pool[d] {
                if t.key() < min_key {
                    continue;
                }
                acc.push(t.clone());
                rec(remaining - d, pool, t.key(), acc, out);
                acc.pop();
            }
        }
    }
    let pool: Vec<Vec<Tree>> = (0..=n).map(enumerate_trees).collect();
    let mut out = Vec::new();
    rec(n, &pool, "", &mut Vec::new(), &mut out);
    out.sort();
    out
}

/// Finitely supported map Forest -> Q; an element of the forest algebra.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ForestSum {
    terms: BTreeMap<Forest, Rat>,
}

impl ForestSum {
    pub fn zero() -> ForestSum {
        ForestSum {
            terms: BTreeMap::new(),
        }
    }

    /// The unit: the empty forest with coefficient 1.
    pub fn unit() -> ForestSum {
        ForestSum::from_forest(Forest::empty())
    }

    pub fn from_forest(f: Forest) -> ForestSum {
        ForestSum::from_term(f, Rat::from_integer(1.into()))
    }

    pub fn from_term(f: Forest, c: Rat) -> ForestSum {
        let mut s = ForestSum::zero();
        s.add_term(f, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, f: &Forest) -> Rat {
        self.terms.get(f).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Forest, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, f: Forest, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(f) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &ForestSum) {
        for (f, c) in &other.terms {
            self.add_term(f.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rat) -> ForestSum {
        if c.is_zero() {
            return ForestSum::zero();
        }
        ForestSum {
            terms: self.terms.iter().map(|(f, v)| (f.clone(), v * c)).collect(),
        }
    }
}

impl Add for &ForestSum {
    type Output = ForestSum;
    fn add(self, rhs: &ForestSum) -> ForestSum {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &ForestSum {
    type Output = ForestSum;
    fn sub(self, rhs: &ForestSum) -> ForestSum {
        let mut out = self.clone();
        for (f, c) in &rhs.terms {
            out.add_term(f.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &ForestSum {
    type Output = ForestSum;
    fn neg(self) -> ForestSum {
        ForestSum {
            terms: self
                .terms
                .iter()
                .map(|(f, c)| (f.clone(), -c.clone()))
                .collect(),
        }
    }
}

impl Mul for &ForestSum {
    type Output = ForestSum;
    fn mul(self, rhs: &ForestSum) -> ForestSum {
        let mut out = ForestSum::zero();
        for (f, a) in &self.terms {
            for (g, b) in &rhs.terms {
                out.add_term(f.product(g), a * b);
            }
        }
        out
    }
}

impl fmt::Display for ForestSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(f, self.terms.iter().map(|(fo, c)| (fo.to_string(), c)))
    }
}

/// Finitely supported map (Forest, Forest) -> Q; an element of the tensor
/// square of the forest algebra.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct TensorSum {
    terms: BTreeMap<(Forest, Forest), Rat>,
}

impl TensorSum {
    pub fn zero() -> TensorSum {
        TensorSum {
            terms: BTreeMap::new(),
        }
    }

    /// I (x) I, the unit of the tensor algebra.
    pub fn unit() -> TensorSum {
        TensorSum::from_term(
            Forest::empty(),
            Forest::empty(),
            Rat::from_integer(1.into()),
        )
    }

    pub fn from_term(left: Forest, right: Forest, c: Rat) -> TensorSum {
        let mut s = TensorSum::zero();
        s.add_term(left, right, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, left: &Forest, right: &Forest) -> Rat {
        self.terms
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Forest, Forest), &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, left: Forest, right: Forest, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry((left, right)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let sum = e.get().clone() + c;
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &TensorSum) {
        for ((l, r), c) in &other.terms {
            self.add_term(l.clone(), r.clone(), c.clone());
        }
    }

    pub fn scale(&self, c: &Rat) -> TensorSum {
        if c.is_zero() {
            return TensorSum::zero();
        }
        TensorSum {
            terms: self.terms.iter().map(|(k, v)| (k.clone(), v * c)).collect(),
        }
    }

    /// Swaps the tensor factors. Cocommutative elements are fixed points.
    pub fn swap(&self) -> TensorSum {
        let mut out = TensorSum::zero();
        for ((l, r), c) in &self.terms {
            out.add_term(r.clone(), l.clone(), c.clone());
        }
        out
    }

    /// Applies a forest map to the right factor of every term.
    pub fn map_right(&self, f: impl Fn(&Forest) -> Forest) -> TensorSum {
        let mut out = TensorSum::zero();
        for ((l, r), c) in &self.terms {
            out.add_term(l.clone(), f(r), c.clone());
        }
        out
    }
}

impl Add for &TensorSum {
    type Output = TensorSum;
    fn add(self, rhs: &TensorSum) -> TensorSum {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &TensorSum {
    type Output = TensorSum;
    fn sub(self, rhs: &TensorSum) -> TensorSum {
        let mut out = self.clone();
        for ((l, r), c) in &rhs.terms {
            out.add_term(l.clone(), r.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &TensorSum {
    type Output = TensorSum;
    fn mul(self, rhs: &TensorSum) -> TensorSum {
        let mut out = TensorSum::zero();
        for ((al, ar), a) in &self.terms {
            for ((bl, br), b) in &rhs.terms {
                out.add_term(al.product(bl), ar.product(br), a * b);
            }
        }
        out
    }
}

impl fmt::Display for TensorSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_sum(
            f,
            self.terms
                .iter()
                .map(|((l, r), c)| (format!("{l}(x){r}"), c)),
        )
    }
}

/// Shared sum renderer: `2/3*(()) - ()()` style, unit coefficients omitted.
pub(crate) fn write_sum<'a>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (String, &'a Rat)>,
) -> fmt::Result {
    let mut first = true;
    for (basis, c) in terms {
        let neg = c < &Rat::zero();
        let mag = if neg { -c.clone() } else { c.clone() };
        if first {
            if neg {
                f.write_str("-")?;
            }
            first = false;
        } else if neg {
            f.write_str(" - ")?;
        } else {
            f.write_str(" + ")?;
        }
        if mag == Rat::from_integer(1.into()) {
            f.write_str(&basis)?;
        } else {
            write!(f, "{}*{}", fmt_rat(&mag), basis)?;
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{rat, rat_int};

    fn ladder_forest(n: usize) -> Forest {
        let mut f = Forest::empty();
        for _ in 0..n {
            f = Forest::single(b_plus(&f));
        }
        f
    }

    #[test]
    fn canonical_keys() {
        assert_eq!(Tree::leaf().key(), "()");
        let cherry = Tree::with_children(vec![Tree::leaf(), Tree::leaf()]);
        assert_eq!(cherry.key(), "(()())");
        // forest {lambda_2, leaf}: "(())" sorts before "()"
        let f = Forest::from_trees(vec![Tree::leaf(), b_plus(&Forest::single(Tree::leaf()))]);
        assert_eq!(f.key(), "(())()");
    }

    #[test]
    fn child_order_is_irrelevant() {
        let lam2 = b_plus(&Forest::single(Tree::leaf()));
        let a = Tree::with_children(vec![Tree::leaf(), lam2.clone()]);
        let b = Tree::with_children(vec![lam2, Tree::leaf()]);
        assert_eq!(a, b);
        assert_eq!(a.key(), b.key());
    }

    #[test]
    fn b_plus_and_remove_root_are_inverse() {
        for n in 0..=5 {
            for f in enumerate_forests(n) {
                let t = b_plus(&f);
                assert_eq!(t.degree(), n + 1);
                assert_eq!(remove_root(&t), f);
            }
        }
    }

    #[test]
    fn parse_round_trip() {
        for n in 0..=6 {
            for f in enumerate_forests(n) {
                assert_eq!(parse_forest(f.key()).unwrap(), f);
            }
        }
        // parses non-canonical order and normalizes
        let f = parse_forest("()(())").unwrap();
        assert_eq!(f.key(), "(())()");
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse_forest("(()") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_forest("())") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_forest("(a)") {
            Err(Error::Parse { pos, .. }) => assert_eq!(pos, 1),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_counts() {
        // 1, 1, 2, 4, 9, 20 forests of degree 0..5
        let expected = [1usize, 1, 2, 4, 9, 20];
        for (n, want) in expected.iter().enumerate() {
            assert_eq!(enumerate_forests(n).len(), *want, "degree {n}");
        }
        assert_eq!(enumerate_forests(3).len(), 4);
        let keys: Vec<_> = enumerate_forests(3)
            .iter()
            .map(|f| f.key().to_string())
            .collect();
        assert!(keys.contains(&"()()()".to_string()));
        assert!(keys.contains(&"(())()".to_string()));
        assert!(keys.contains(&"((()))".to_string()));
        assert!(keys.contains(&"(()())".to_string()));
    }

    #[test]
    fn forest_sum_product_examples() {
        let dot = ForestSum::from_forest(Forest::single(Tree::leaf()));
        let lam2 = ForestSum::from_forest(ladder_forest(2));
        let prod = &dot * &lam2;
        assert_eq!(prod.len(), 1);
        assert_eq!(prod.coeff(&parse_forest("(())()").unwrap()), rat_int(1));

        let two_dots = dot.scale(&rat_int(2));
        let three_dots = dot.scale(&rat_int(3));
        let six = &two_dots * &three_dots;
        assert_eq!(six.coeff(&parse_forest("()()").unwrap()), rat_int(6));

        let s = &dot + &lam2;
        assert_eq!(&s * &ForestSum::unit(), s);
    }

    #[test]
    fn zeros_are_dropped() {
        let dot = Forest::single(Tree::leaf());
        let mut s = ForestSum::from_term(dot.clone(), rat(1, 2));
        s.add_term(dot, rat(-1, 2));
        assert!(s.is_zero());
        assert_eq!(s.len(), 0);
    }

    #[test]
    fn display_format() {
        let mut s = ForestSum::from_term(ladder_forest(2), rat(2, 3));
        s.add_term(parse_forest("()()").unwrap(), rat(-1, 3));
        assert_eq!(s.to_string(), "2/3*(()) - 1/3*()()");
        assert_eq!(ForestSum::zero().to_string(), "0");
        assert_eq!(ForestSum::unit().to_string(), "I");
    }
}
