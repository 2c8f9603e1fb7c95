//! The noncommutative polynomial algebra Q<x,y>: words, rational
//! combinations of words, right-multiplication operators, admissibility,
//! the z-basis and duality.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::rational::{rat_int, Rat};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Letter {
    X,
    Y,
}

impl Letter {
    pub fn swapped(self) -> Letter {
        match self {
            Letter::X => Letter::Y,
            Letter::Y => Letter::X,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::X => 'x',
            Letter::Y => 'y',
        }
    }
}

/// A word in the letters {x, y}. The empty word is the algebra unit and
/// renders as "1". Ordering is by weight first, then bytewise with x < y,
/// which fixes the output order everywhere.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn from_letters(letters: Vec<Letter>) -> Word {
        Word(letters)
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    pub fn x() -> Word {
        Word::letter(Letter::X)
    }

    pub fn y() -> Word {
        Word::letter(Letter::Y)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Weight = number of letters.
    pub fn weight(&self) -> usize {
        self.0.len()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.0.clone();
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn push(&self, l: Letter) -> Word {
        let mut letters = self.0.clone();
        letters.push(l);
        Word(letters)
    }

    /// Splits off the last letter; `None` for the empty word.
    pub fn split_last(&self) -> Option<(Word, Letter)> {
        let (&last, init) = self.0.split_last()?;
        Some((Word(init.to_vec()), last))
    }

    pub fn prefix(&self, len: usize) -> Word {
        Word(self.0[..len].to_vec())
    }

    pub fn suffix(&self, from: usize) -> Word {
        Word(self.0[from..].to_vec())
    }

    pub fn ends_with_y(&self) -> bool {
        self.0.last() == Some(&Letter::Y)
    }

    /// Admissible means empty, or starting with x and ending with y.
    pub fn is_admissible(&self) -> bool {
        self.is_empty() || (self.0.first() == Some(&Letter::X) && self.ends_with_y())
    }

    /// Duality involution: reverse the word and swap x <-> y.
    pub fn dual(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.swapped()).collect())
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .len()
            .cmp(&other.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        for l in &self.0 {
            write!(f, "{}", l.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Parses "xxyy" style text; "1" (or "") is the empty word.
    fn from_str(s: &str) -> Result<Word> {
        if s == "1" || s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::with_capacity(s.len());
        for (pos, b) in s.bytes().enumerate() {
            match b {
                b'x' => letters.push(Letter::X),
                b'y' => letters.push(Letter::Y),
                _ => {
                    return Err(Error::parse(
                        pos,
                        format!("expected 'x' or 'y', found {:?}", b as char),
                    ))
                }
            }
        }
        Ok(Word(letters))
    }
}

/// All words of the given weight, in canonical (x < y bytewise) order.
pub fn all_words(weight: usize) -> Vec<Word> {
    let mut out = vec![Word::empty()];
    for _ in 0..weight {
        out = out
            .iter()
            .flat_map(|w| [w.push(Letter::X), w.push(Letter::Y)])
            .collect();
    }
    out
}

/// All admissible words of the given weight. Weight 0 gives the empty
/// word; weight 1 gives nothing.
pub fn admissible_words(weight: usize) -> Vec<Word> {
    match weight {
        0 => vec![Word::empty()],
        1 => Vec::new(),
        _ => all_words(weight - 2)
            .into_iter()
            .map(|mid| Word::x().concat(&mid).push(Letter::Y))
            .collect(),
    }
}

/// Finitely supported map Word -> Q; an element of Q<x,y>. Zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct WordSum {
    terms: BTreeMap<Word, Rat>,
}

impl WordSum {
    pub fn zero() -> WordSum {
        WordSum {
            terms: BTreeMap::new(),
        }
    }

    /// The empty word with coefficient 1.
    pub fn one() -> WordSum {
        WordSum::from_word(Word::empty())
    }

    pub fn from_word(w: Word) -> WordSum {
        WordSum::from_term(w, rat_int(1))
    }

    pub fn from_term(w: Word, c: Rat) -> WordSum {
        let mut s = WordSum::zero();
        s.add_term(w, c);
        s
    }

    pub fn x() -> WordSum {
        WordSum::from_word(Word::x())
    }

    pub fn y() -> WordSum {
        WordSum::from_word(Word::y())
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

    pub fn coeff(&self, w: &Word) -> Rat {
        self.terms.get(w).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rat)> {
        self.terms.iter()
    }

    pub fn add_term(&mut self, w: Word, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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

    pub fn add_assign(&mut self, other: &WordSum) {
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c.clone());
        }
    }

    pub fn add_scaled_assign(&mut self, other: &WordSum, scale: &Rat) {
        if scale.is_zero() {
            return;
        }
        for (w, c) in &other.terms {
            self.add_term(w.clone(), c * scale);
        }
    }

    /// Accumulates `scale * (a . b)` without building the intermediate
    /// product sum.
    pub fn add_scaled_product_assign(&mut self, a: &WordSum, b: &WordSum, scale: &Rat) {
        if scale.is_zero() {
            return;
        }
        for (wa, ca) in &a.terms {
            let ca_scaled = ca * scale;
            for (wb, cb) in &b.terms {
                self.add_term(wa.concat(wb), &ca_scaled * cb);
            }
        }
    }

    pub fn scale(&self, c: &Rat) -> WordSum {
        if c.is_zero() {
            return WordSum::zero();
        }
        WordSum {
            terms: self.terms.iter().map(|(w, v)| (w.clone(), v * c)).collect(),
        }
    }

    /// Right multiplication `R_v(self) = self * v`.
    pub fn right_mult(&self, v: &WordSum) -> WordSum {
        self * v
    }

    /// Strips the final y from every supported word; the (partial) inverse
    /// of `R_y`. Errs on any supported word not ending in y.
    pub fn r_y_inverse(&self) -> Result<WordSum> {
        let mut out = WordSum::zero();
        for (w, c) in &self.terms {
            match w.split_last() {
                Some((init, Letter::Y)) => out.add_term(init, c.clone()),
                _ => {
                    return Err(Error::domain(format!(
                        "R_y^-1 applied to a word not ending in y: {w}"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// True iff every supported word is admissible.
    pub fn is_admissible(&self) -> bool {
        self.terms.keys().all(|w| w.is_admissible())
    }

    /// The first non-admissible supported word, if any.
    pub fn first_non_admissible(&self) -> Option<&Word> {
        self.terms.keys().find(|w| !w.is_admissible())
    }
}

impl Add for &WordSum {
    type Output = WordSum;
    fn add(self, rhs: &WordSum) -> WordSum {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &WordSum {
    type Output = WordSum;
    fn sub(self, rhs: &WordSum) -> WordSum {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), -c.clone());
        }
        out
    }
}

impl Neg for &WordSum {
    type Output = WordSum;
    fn neg(self) -> WordSum {
        WordSum {
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.clone(), -c.clone()))
                .collect(),
        }
    }
}

/// Bilinear concatenation product.
impl Mul for &WordSum {
    type Output = WordSum;
    fn mul(self, rhs: &WordSum) -> WordSum {
        let mut out = WordSum::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.add_term(a.concat(b), ca * cb);
            }
        }
        out
    }
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::forest::write_sum(f, self.terms.iter().map(|(w, c)| (w.to_string(), c)))
    }
}

/// A composition (k_1, ..., k_r) of positive integers, standing for the
/// word z_{k_1} ... z_{k_r} with z_k = x^{k-1} y. Ordered lexicographically
/// on the parts.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ZIndex(Vec<u32>);

impl ZIndex {
    pub fn new(parts: Vec<u32>) -> Result<ZIndex> {
        if parts.contains(&0) {
            return Err(Error::domain("z-index parts must be positive"));
        }
        Ok(ZIndex(parts))
    }

    pub fn empty() -> ZIndex {
        ZIndex(Vec::new())
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn depth(&self) -> usize {
        self.0.len()
    }

    pub fn weight(&self) -> usize {
        self.0.iter().map(|&k| k as usize).sum()
    }

    /// Admissible means empty or leading part >= 2; exactly then the zeta
    /// series converges.
    pub fn is_admissible(&self) -> bool {
        self.0.first().is_none_or(|&k| k >= 2)
    }
}

impl fmt::Display for ZIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(")")
    }
}

impl FromStr for ZIndex {
    type Err = Error;

    fn from_str(s: &str) -> Result<ZIndex> {
        let inner = s
            .strip_prefix('(')
            .and_then(|t| t.strip_suffix(')'))
            .ok_or_else(|| Error::parse(0, "z-index must be of the form (k1,k2,...)"))?;
        if inner.trim().is_empty() {
            return Ok(ZIndex::empty());
        }
        let mut parts = Vec::new();
        for piece in inner.split(',') {
            let k: u32 = piece
                .trim()
                .parse()
                .map_err(|_| Error::parse(0, format!("invalid z-index part {piece:?}")))?;
            parts.push(k);
        }
        ZIndex::new(parts)
    }
}

/// Word -> composition. Requires the word to end in y (or be empty);
/// the leading part may be 1.
pub fn z_encode(w: &Word) -> Result<ZIndex> {
    if w.is_empty() {
        return Ok(ZIndex::empty());
    }
    if !w.ends_with_y() {
        return Err(Error::domain(format!("word does not end in y: {w}")));
    }
    let mut parts = Vec::new();
    let mut run = 0u32;
    for &l in w.letters() {
        match l {
            Letter::X => run += 1,
            Letter::Y => {
                parts.push(run + 1);
                run = 0;
            }
        }
    }
    ZIndex::new(parts)
}

/// Composition -> word; inverse of `z_encode`.
pub fn z_decode(k: &ZIndex) -> Word {
    let mut letters = Vec::with_capacity(k.weight());
    for &part in k.parts() {
        for _ in 1..part {
            letters.push(Letter::X);
        }
        letters.push(Letter::Y);
    }
    Word::from_letters(letters)
}

/// All admissible z-indices of the given weight, in lexicographic order.
/// These index the columns of the relation matrices.
pub fn admissible_zindices(weight: usize) -> Vec<ZIndex> {
    let mut out: Vec<ZIndex> = admissible_words(weight)
        .iter()
        .map(|w| z_encode(w).expect("admissible words end in y"))
        .collect();
    out.sort();
    out
}
