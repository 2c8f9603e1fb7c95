//! Certified-precision numerical evaluation of multiple zeta values and of
//! the evaluation map Z on admissible word sums.
//!
//! Direct summation of the defining nested series converges far too slowly
//! for leading index 2, so zeta values are computed by the Hoelder
//! convolution at 1/2: for an admissible word w = a_1...a_n,
//!
//! ```text
//! zeta(w) = sum_{j=0}^{n} li_half(dual(a_1..a_j)) * li_half(a_{j+1}..a_n)
//! ```
//!
//! where every factor is a multiple polylogarithm at 1/2 (leading index 1
//! allowed) and therefore gains one bit per summation term.
//!
//! The polylogarithm loop runs in fixed-point arithmetic over `BigInt`
//! mantissas; every stored value is an exact rational, and error bounds
//! (truncation plus a rounding allowance) are carried as exact rationals,
//! so the reported bound is rigorous rather than heuristic.

use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::forest::Forest;
use crate::rational::{parse_positive_decimal, Rat};
use crate::tree_map::apply_forest;
use crate::word::{z_encode, Word, WordSum};

/// Target absolute error and the working precision derived from it.
#[derive(Clone, Debug)]
pub struct PrecisionConfig {
    eps: Rat,
    prec: u64,
}

impl PrecisionConfig {
    pub fn new(eps: Rat) -> Result<PrecisionConfig> {
        if !eps.is_positive() {
            return Err(Error::domain("precision target must be positive"));
        }
        // working precision: at least 2*log2(1/eps) + 64 bits
        let prec = (2 * bits_of_inverse(&eps) + 64).max(128);
        Ok(PrecisionConfig { eps, prec })
    }

    pub fn from_text(eps: &str) -> Result<PrecisionConfig> {
        PrecisionConfig::new(parse_positive_decimal(eps)?)
    }

    pub fn eps(&self) -> &Rat {
        &self.eps
    }

    pub fn precision_bits(&self) -> u64 {
        self.prec
    }
}

impl Default for PrecisionConfig {
    /// eps = 1e-30, comfortably below the 1e-20 pass thresholds used by
    /// the kernel checks.
    fn default() -> Self {
        PrecisionConfig::new(Rat::new(BigInt::one(), BigInt::from(10).pow(30)))
            .expect("1e-30 is positive")
    }
}

/// Bits of ceil(1/eps); 0 when eps >= 1.
fn bits_of_inverse(eps: &Rat) -> u64 {
    let inv = eps.recip();
    if inv <= Rat::one() {
        return 0;
    }
    inv.ceil().to_integer().bits()
}

/// A computed value (stored exactly as a rational) together with a
/// rigorous absolute error bound on its distance to the true real number.
#[derive(Clone, Debug)]
pub struct EvalResult {
    value: Rat,
    bound: Rat,
}

impl EvalResult {
    fn exact(value: Rat) -> EvalResult {
        EvalResult {
            value,
            bound: Rat::zero(),
        }
    }

    /// The stored approximation, an exact rational.
    pub fn value(&self) -> &Rat {
        &self.value
    }

    /// Rigorous absolute error bound.
    pub fn bound(&self) -> &Rat {
        &self.bound
    }

    /// True iff |value| <= bound + slack, i.e. the result is numerically
    /// indistinguishable from zero.
    pub fn vanishes_within(&self, slack: &Rat) -> bool {
        self.value.abs() <= &self.bound + slack
    }

    /// True iff the two results are compatible: |v1 - v2| <= b1 + b2.
    pub fn agrees_with(&self, other: &EvalResult) -> bool {
        (&self.value - &other.value).abs() <= &self.bound + &other.bound
    }

    /// Decimal rendering with the given number of fractional digits.
    pub fn to_decimal(&self, digits: u32) -> String {
        fmt_rat_decimal(&self.value, digits)
    }
}

/// Fixed-point decimal rendering of a rational (round half away from 0).
pub fn fmt_rat_decimal(r: &Rat, digits: u32) -> String {
    let scale = BigInt::from(10).pow(digits);
    let num = r.numer() * &scale;
    let den = r.denom();
    let q = (num.magnitude() * 2u32 + den.magnitude()) / (den.magnitude() * 2u32);
    let q = BigInt::from(q);
    let (int_part, frac_part) = q.div_rem(&scale);
    let sign = if r.is_negative() && !q.is_zero() {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!(
            "{sign}{int_part}.{:0>width$}",
            frac_part.to_string(),
            width = digits as usize
        )
    }
}

/// Scientific-style rendering for tiny bounds, e.g. "8.13e-31".
pub fn fmt_rat_scientific(r: &Rat, sig: usize) -> String {
    if r.is_zero() {
        return "0".to_string();
    }
    let mut exp: i64 = 0;
    let mut v = r.abs();
    let one = Rat::one();
    let ten = Rat::from_integer(10.into());
    while v < one {
        v = &v * &ten;
        exp -= 1;
    }
    while v >= ten {
        v = &v / &ten;
        exp += 1;
    }
    let digits = fmt_rat_decimal(&v, sig.saturating_sub(1) as u32);
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}{digits}e{exp}")
}

// ---------------------------------------------------------------------
// fixed-point kernel
// ---------------------------------------------------------------------

fn fx_one(prec: u64) -> BigInt {
    BigInt::one() << prec
}

fn fx_mul(a: &BigInt, b: &BigInt, prec: u64) -> BigInt {
    (a * b) >> prec
}

fn fx_recip(d: &BigInt, prec: u64) -> BigInt {
    debug_assert!(d.is_positive());
    fx_one(prec).div_floor(d)
}

fn fx_half_pow(m: u64, prec: u64) -> BigInt {
    if m <= prec {
        BigInt::one() << (prec - m)
    } else {
        BigInt::zero()
    }
}

fn fx_to_rat(a: BigInt, prec: u64) -> Rat {
    Rat::new(a, BigInt::one() << prec)
}

/// Truncation tail of the polylog sum cut at M terms for depth r:
/// `2 * (1/2)^M * M^(r-1)`, valid once M >= max(4(r-1), 16).
fn li_tail_bound(cutoff: u64, depth: u32) -> Rat {
    let num = BigInt::from(2) * BigInt::from(cutoff).pow(depth.saturating_sub(1));
    Rat::new(num, BigInt::one() << cutoff)
}

/// Least cutoff M meeting the target truncation error.
fn li_cutoff(depth: u32, target: &Rat) -> u64 {
    let mut m = (4 * depth as u64).max(16);
    while &li_tail_bound(m, depth) > target {
        m += 1;
    }
    m
}

/// Working precision needed so the rounding allowance `256 * M^r` ulps
/// stays below half the truncation target.
fn rounding_precision(cutoff: u64, depth: u32, target: &Rat) -> u64 {
    let ops = BigInt::from(512) * BigInt::from(cutoff).pow(depth);
    ops.bits() + bits_of_inverse(target) + 2
}

/// (word, precision bits, cutoff) -> (value, bound)
type LiCache = HashMap<(Word, u64, u64), (Rat, Rat)>;

fn li_cache() -> &'static Mutex<LiCache> {
    static CACHE: OnceLock<Mutex<LiCache>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Core polylog loop: value of `sum_{m1 > ... > mr >= 1} (1/2)^{m1} /
/// (m1^{k1} ... mr^{kr})` for the word's exponent sequence, plus a
/// rigorous bound (truncation + rounding allowance).
fn li_half_inner(w: &Word, prec: u64, trunc_target: &Rat) -> Result<(Rat, Rat)> {
    if w.is_empty() {
        return Ok((Rat::one(), Rat::zero()));
    }
    let index = z_encode(w)
        .map_err(|_| Error::domain(format!("polylogarithm argument must end in y: {w}")))?;
    let ks: Vec<u32> = index.parts().to_vec();
    let depth = ks.len() as u32;
    let cutoff = li_cutoff(depth, trunc_target);
    let prec = prec.max(rounding_precision(cutoff, depth, trunc_target));

    let key = (w.clone(), prec, cutoff);
    if let Some(hit) = li_cache().lock().expect("poisoned").get(&key) {
        return Ok(hit.clone());
    }

    let r = ks.len();
    // inner[i] holds A_{i+2}(m-1), the partial inner sum of depth r-i-1
    let mut inner: Vec<BigInt> = vec![BigInt::zero(); r.saturating_sub(1)];
    let mut acc = BigInt::zero();
    for m in 1..=cutoff {
        let a2 = if r == 1 {
            fx_one(prec)
        } else {
            inner[0].clone()
        };
        if !a2.is_zero() || r == 1 {
            let outer = fx_mul(
                &fx_half_pow(m, prec),
                &fx_recip(&BigInt::from(m).pow(ks[0]), prec),
                prec,
            );
            acc += fx_mul(&outer, &a2, prec);
        }
        // ascending update: A_j(m) = A_j(m-1) + m^{-k_j} A_{j+1}(m-1)
        for i in 0..r.saturating_sub(1) {
            let next = if i + 1 < r - 1 {
                inner[i + 1].clone()
            } else {
                fx_one(prec)
            };
            let recip = fx_recip(&BigInt::from(m).pow(ks[i + 1]), prec);
            inner[i] += fx_mul(&recip, &next, prec);
        }
    }

    // rounding allowance: the forward error across the loop stays below
    // 256 * M^r ulps at this precision
    let rounding = Rat::new(
        BigInt::from(256) * BigInt::from(cutoff).pow(depth),
        BigInt::one() << prec,
    );
    let bound = li_tail_bound(cutoff, depth) + rounding;
    let out = (fx_to_rat(acc, prec), bound);
    li_cache()
        .lock()
        .expect("poisoned")
        .insert(key, out.clone());
    Ok(out)
}

/// Multiple polylogarithm at 1/2 for a word ending in y (leading index 1
/// allowed); the empty word gives exactly 1.
pub fn li_half(w: &Word, cfg: &PrecisionConfig) -> Result<EvalResult> {
    let target = cfg.eps() / Rat::from_integer(2.into());
    let (value, bound) = li_half_inner(w, cfg.prec, &target)?;
    Ok(EvalResult { value, bound })
}

/// Zeta value of an admissible non-empty word via the Hoelder convolution.
pub fn zeta_num(w: &Word, cfg: &PrecisionConfig) -> Result<EvalResult> {
    if w.is_empty() || !w.is_admissible() {
        return Err(Error::domain(format!(
            "zeta requires an admissible non-empty word, got {w} (the defining sum diverges otherwise)"
        )));
    }
    let n = w.weight();
    // per-factor budget; the final bound sums 2(n+1) of these plus products
    let per_factor = cfg.eps() / Rat::from_integer(BigInt::from(4 * (n as u32 + 1)));
    let mut value = Rat::zero();
    let mut bound = Rat::zero();
    for j in 0..=n {
        let left_word = w.prefix(j).dual();
        let right_word = w.suffix(j);
        let (lv, lb) = li_half_inner(&left_word, cfg.prec, &per_factor)?;
        let (rv, rb) = li_half_inner(&right_word, cfg.prec, &per_factor)?;
        debug_assert!(lv.abs() <= Rat::one() && rv.abs() <= Rat::one());
        value += &lv * &rv;
        // |lv*rv - L*R| <= |lv| rb + |R| lb <= rb + (1 + rb) lb
        bound = bound + &lb + &rb + &lb * &rb;
    }
    debug_assert!(&bound <= cfg.eps());
    Ok(EvalResult { value, bound })
}

/// Linear extension of Z over an admissible word sum; the empty word
/// contributes its coefficient.
pub fn z_eval(p: &WordSum, cfg: &PrecisionConfig) -> Result<EvalResult> {
    if let Some(bad) = p.first_non_admissible() {
        return Err(Error::domain(format!(
            "Z is only defined on admissible words; offending word: {bad}"
        )));
    }
    if p.is_zero() {
        return Ok(EvalResult::exact(Rat::zero()));
    }
    let coeff_mass: Rat = p.terms().map(|(_, c)| c.abs()).sum();
    let scaled_eps = cfg.eps() / (Rat::from_integer(2.into()) * coeff_mass.max(Rat::one()));
    let inner_cfg = PrecisionConfig::new(scaled_eps)?;
    let mut value = Rat::zero();
    let mut bound = Rat::zero();
    for (w, c) in p.terms() {
        if w.is_empty() {
            value += c;
            continue;
        }
        let r = zeta_num(w, &inner_cfg)?;
        value += c * &r.value;
        bound += c.abs() * &r.bound;
    }
    Ok(EvalResult { value, bound })
}

/// Outcome of a numeric kernel check for one (forest, word) pair.
#[derive(Clone, Debug)]
pub struct KernelReport {
    pub forest: Forest,
    pub word: Word,
    pub image_terms: usize,
    pub result: EvalResult,
    pub pass: bool,
}

/// Evaluates Z(f(w)) and checks it vanishes within the certified bound
/// plus the configured tolerance.
pub fn kernel_check(f: &Forest, w: &Word, cfg: &PrecisionConfig) -> Result<KernelReport> {
    if f.is_empty() {
        return Err(Error::domain(
            "kernel check requires a non-empty forest (the empty forest acts as the identity)",
        ));
    }
    if w.is_empty() || !w.is_admissible() {
        return Err(Error::domain(format!(
            "kernel check requires an admissible non-empty word, got {w}"
        )));
    }
    let image = apply_forest(f, &WordSum::from_word(w.clone()));
    if let Some(bad) = image.first_non_admissible() {
        return Err(Error::Internal(format!(
            "tree map image of an admissible word left the admissible subspace: \
             {f} applied to {w} produced {bad}"
        )));
    }
    let result = z_eval(&image, cfg)?;
    let pass = result.vanishes_within(cfg.eps());
    Ok(KernelReport {
        forest: f.clone(),
        word: w.clone(),
        image_terms: image.len(),
        result,
        pass,
    })
}
