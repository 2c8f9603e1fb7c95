//! Truncated formal power series in one indeterminate u, with
//! coefficients in Q<x,y> or in the forest algebra, plus the
//! generator-image automorphisms used to relate the derivation
//! exponential to the ladder series.
//!
//! Everything is truncated at a fixed order N; sums and products drop
//! terms above N. The endomorphism series considered here are the ones
//! that are the identity at u = 0, where order-by-order inversion is
//! always possible.

use std::fmt;

use crate::error::{Error, Result};
use crate::forest::ForestSum;
use crate::hopf::ladder;
use crate::rational::{rat_int, Rat};
use crate::tree_map::partial_n;
use crate::word::{Letter, Word, WordSum};

/// Truncated series with WordSum coefficients (noncommutative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolySeries {
    coeffs: Vec<WordSum>, // length order + 1
}

impl PolySeries {
    pub fn zero(order: usize) -> PolySeries {
        PolySeries {
            coeffs: vec![WordSum::zero(); order + 1],
        }
    }

    /// A constant series (the word sum at order zero).
    pub fn constant(p: &WordSum, order: usize) -> PolySeries {
        let mut s = PolySeries::zero(order);
        s.coeffs[0] = p.clone();
        s
    }

    pub fn one(order: usize) -> PolySeries {
        PolySeries::constant(&WordSum::one(), order)
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &WordSum {
        &self.coeffs[k]
    }

    pub fn set_coeff(&mut self, k: usize, v: WordSum) {
        self.coeffs[k] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &PolySeries) -> PolySeries {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        PolySeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &PolySeries) -> PolySeries {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        PolySeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> PolySeries {
        PolySeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    /// Truncated Cauchy product; coefficients multiply by concatenation.
    pub fn mul(&self, other: &PolySeries) -> PolySeries {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let order = self.order();
        let mut out = PolySeries::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j].add_assign(&prod);
            }
        }
        out
    }

    /// Multiplies by u^k (shifts coefficients up, truncating).
    pub fn shift(&self, k: usize) -> PolySeries {
        let order = self.order();
        let mut out = PolySeries::zero(order);
        for i in 0..=order.saturating_sub(k) {
            out.coeffs[i + k] = self.coeffs[i].clone();
        }
        out
    }
}

impl fmt::Display for PolySeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_series(f, self.coeffs.iter().map(|c| c.to_string()))
    }
}

fn write_series(f: &mut fmt::Formatter<'_>, coeffs: impl Iterator<Item = String>) -> fmt::Result {
    let mut first = true;
    for (k, c) in coeffs.enumerate() {
        if c == "0" {
            continue;
        }
        if !first {
            f.write_str(" + ")?;
        }
        first = false;
        match k {
            0 => write!(f, "{c}")?,
            1 => write!(f, "({c})*u")?,
            _ => write!(f, "({c})*u^{k}")?,
        }
    }
    if first {
        f.write_str("0")?;
    }
    Ok(())
}

/// An algebra endomorphism of the truncated series ring that fixes u and
/// is the identity at u = 0, recorded by the images of the two letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EndoSeries {
    img_x: PolySeries,
    img_y: PolySeries,
}

impl EndoSeries {
    /// Builds an endomorphism from generator images, rejecting images that
    /// are not the identity at order 0.
    pub fn from_images(img_x: PolySeries, img_y: PolySeries) -> Result<EndoSeries> {
        if img_x.order() != img_y.order() {
            return Err(Error::Dimension(format!(
                "image orders differ: {} vs {}",
                img_x.order(),
                img_y.order()
            )));
        }
        if img_x.coeff(0) != &WordSum::x() || img_y.coeff(0) != &WordSum::y() {
            return Err(Error::domain(
                "endomorphism series must be the identity at order 0",
            ));
        }
        Ok(EndoSeries { img_x, img_y })
    }

    pub fn identity(order: usize) -> EndoSeries {
        EndoSeries {
            img_x: PolySeries::constant(&WordSum::x(), order),
            img_y: PolySeries::constant(&WordSum::y(), order),
        }
    }

    pub fn order(&self) -> usize {
        self.img_x.order()
    }

    pub fn image_of_x(&self) -> &PolySeries {
        &self.img_x
    }

    pub fn image_of_y(&self) -> &PolySeries {
        &self.img_y
    }

    fn image_of(&self, l: Letter) -> &PolySeries {
        match l {
            Letter::X => &self.img_x,
            Letter::Y => &self.img_y,
        }
    }

    /// Substitutes the generator images into a polynomial (degree-0 series
    /// in u), multiplying out as truncated series.
    pub fn apply(&self, p: &WordSum) -> PolySeries {
        let order = self.order();
        let mut out = PolySeries::zero(order);
        for (w, c) in p.terms() {
            let mut prod = PolySeries::one(order);
            for &l in w.letters() {
                prod = prod.mul(self.image_of(l));
            }
            out = out.add(&prod.scale(c));
        }
        out
    }

    /// Applies the endomorphism to a whole series (u is fixed).
    pub fn apply_series(&self, p: &PolySeries) -> PolySeries {
        let order = self.order();
        assert_eq!(order, p.order(), "truncation orders differ");
        let mut out = PolySeries::zero(order);
        for k in 0..=order {
            if p.coeff(k).is_zero() {
                continue;
            }
            out = out.add(&self.apply(p.coeff(k)).shift(k));
        }
        out
    }

    /// Composition `self o inner`.
    pub fn compose(&self, inner: &EndoSeries) -> EndoSeries {
        EndoSeries {
            img_x: self.apply_series(&inner.img_x),
            img_y: self.apply_series(&inner.img_y),
        }
    }

    /// The unique endomorphism series F with `self o F = F o self = id`
    /// up to the truncation order, solved order by order.
    pub fn inverse(&self) -> EndoSeries {
        let order = self.order();
        let solve = |target: Letter| -> PolySeries {
            let mut coeffs: Vec<WordSum> = vec![WordSum::from_word(Word::letter(target))];
            for n in 1..=order {
                // coefficient of u^n in self(F_partial) must vanish;
                // [self(f_k)]_0 = f_k forces the new coefficient
                let mut residual = WordSum::zero();
                for (k, fk) in coeffs.iter().enumerate() {
                    let img = self.apply(fk);
                    residual.add_assign(img.coeff(n - k));
                }
                coeffs.push(-&residual);
            }
            PolySeries { coeffs }
        };
        EndoSeries {
            img_x: solve(Letter::X),
            img_y: solve(Letter::Y),
        }
    }
}

/// Word x y^k.
fn x_y_pow(k: usize) -> Word {
    let mut letters = vec![Letter::X];
    letters.extend(std::iter::repeat_n(Letter::Y, k));
    Word::from_letters(letters)
}

/// The automorphism with `x -> x (1 + y a u)^{-1}` and
/// `y -> (x + y) - x (1 + y a u)^{-1}`, truncated at the given order.
/// The scale `a` substitutes `a*u` for `u`.
pub fn delta_u(scale: &Rat, order: usize) -> EndoSeries {
    let mut img_x = PolySeries::zero(order);
    let mut img_y = PolySeries::zero(order);
    img_x.set_coeff(0, WordSum::x());
    img_y.set_coeff(0, WordSum::y());
    let mut pow = rat_int(1); // (-a)^k
    for k in 1..=order {
        pow = -(&pow * scale);
        let term = WordSum::from_term(x_y_pow(k), pow.clone());
        img_x.set_coeff(k, term.clone());
        img_y.set_coeff(k, -&term);
    }
    EndoSeries { img_x, img_y }
}

/// Applies `exp(sum_n coeffs(n) * partial_n * u^n)` to `target`, truncated
/// at the given order. The operator raises u-order, so the exponential is
/// a finite sum.
pub fn exp_derivation_series(
    coeffs: impl Fn(u32) -> Rat,
    target: &WordSum,
    order: usize,
) -> PolySeries {
    use num_traits::Zero;
    let weights: Vec<(usize, Rat)> = (1..=order)
        .map(|n| (n, coeffs(n as u32)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let apply_op = |p: &PolySeries| -> PolySeries {
        let mut out = PolySeries::zero(order);
        for (n, weight) in &weights {
            for j in 0..=order - n {
                if p.coeff(j).is_zero() {
                    continue;
                }
                let d = partial_n(*n as u32, p.coeff(j)).scale(weight);
                let mut updated = out.coeff(j + n).clone();
                updated.add_assign(&d);
                out.set_coeff(j + n, updated);
            }
        }
        out
    };
    let mut sum = PolySeries::constant(target, order);
    let mut term = PolySeries::constant(target, order);
    for k in 1..=order {
        term = apply_op(&term).scale(&(rat_int(1) / rat_int(k as i64)));
        if term.is_zero() {
            break;
        }
        sum = sum.add(&term);
    }
    sum
}

/// Truncated series with ForestSum coefficients (commutative).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HSeries {
    coeffs: Vec<ForestSum>,
}

impl HSeries {
    pub fn zero(order: usize) -> HSeries {
        HSeries {
            coeffs: vec![ForestSum::zero(); order + 1],
        }
    }

    pub fn one(order: usize) -> HSeries {
        let mut s = HSeries::zero(order);
        s.coeffs[0] = ForestSum::unit();
        s
    }

    pub fn from_coeffs(coeffs: Vec<ForestSum>) -> HSeries {
        assert!(!coeffs.is_empty());
        HSeries { coeffs }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &ForestSum {
        &self.coeffs[k]
    }

    pub fn add(&self, other: &HSeries) -> HSeries {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        HSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &HSeries) -> HSeries {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        HSeries {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn scale(&self, c: &Rat) -> HSeries {
        HSeries {
            coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect(),
        }
    }

    pub fn mul(&self, other: &HSeries) -> HSeries {
        assert_eq!(self.order(), other.order(), "truncation orders differ");
        let order = self.order();
        let mut out = HSeries::zero(order);
        for i in 0..=order {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..=order - i {
                if other.coeffs[j].is_zero() {
                    continue;
                }
                let prod = &self.coeffs[i] * &other.coeffs[j];
                out.coeffs[i + j].add_assign(&prod);
            }
        }
        out
    }

    /// `log` in the truncated commutative algebra: requires the order-0
    /// coefficient to be the unit, and expands
    /// `log(1 + B) = sum_d (-1)^{d+1} B^d / d`.
    pub fn log(&self) -> Result<HSeries> {
        let order = self.order();
        if self.coeffs[0] != ForestSum::unit() {
            return Err(Error::domain(
                "log requires the order-0 coefficient to be the unit",
            ));
        }
        let b = self.sub(&HSeries::one(order));
        let mut power = b.clone();
        let mut out = b.clone();
        for d in 2..=order {
            power = power.mul(&b);
            let sign = if d % 2 == 1 { rat_int(1) } else { rat_int(-1) };
            out = out.add(&power.scale(&(sign / rat_int(d as i64))));
        }
        Ok(out)
    }
}

impl fmt::Display for HSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_series(f, self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// The ladder generating series: coefficient of u^n is the ladder with n
/// vertices (unit at n = 0).
pub fn lambda_series(order: usize) -> HSeries {
    HSeries {
        coeffs: (0..=order)
            .map(|n| ForestSum::from_forest(ladder(n)))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::forest::parse_forest;
    use crate::rational::rat;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ws(s: &str) -> WordSum {
        WordSum::from_word(w(s))
    }

    #[test]
    fn delta_u_images_to_order_two() {
        // x -> x - xy u + xyy u^2 ; y -> y + xy u - xyy u^2
        let e = delta_u(&rat_int(1), 2);
        assert_eq!(e.image_of_x().coeff(0), &WordSum::x());
        assert_eq!(e.image_of_x().coeff(1), &-&ws("xy"));
        assert_eq!(e.image_of_x().coeff(2), &ws("xyy"));
        assert_eq!(e.image_of_y().coeff(0), &WordSum::y());
        assert_eq!(e.image_of_y().coeff(1), &ws("xy"));
        assert_eq!(e.image_of_y().coeff(2), &-&ws("xyy"));
    }

    #[test]
    fn delta_u_at_zero_scale_is_identity() {
        use num_traits::Zero;
        assert_eq!(delta_u(&Rat::zero(), 4), EndoSeries::identity(4));
    }

    #[test]
    fn apply_to_xy_at_order_one() {
        // (x - xy u)(y + xy u) = xy + (xxy - xyy) u + O(u^2)
        let e = delta_u(&rat_int(1), 1);
        let got = e.apply(&ws("xy"));
        assert_eq!(got.coeff(0), &ws("xy"));
        assert_eq!(got.coeff(1), &(&ws("xxy") - &ws("xyy")));
        // which is xy - d1(xy) u
        assert_eq!(got.coeff(1), &-&partial_n(1, &ws("xy")));
    }

    #[test]
    fn identity_endo_acts_trivially() {
        let e = EndoSeries::identity(3);
        let p = &ws("xxy") - &ws("yyx").scale(&rat(3, 2));
        let got = e.apply(&p);
        assert_eq!(got.coeff(0), &p);
        for k in 1..=3 {
            assert!(got.coeff(k).is_zero());
        }
        assert_eq!(e.apply(&WordSum::one()), PolySeries::one(3));
    }

    #[test]
    fn compose_with_identity() {
        let e = delta_u(&rat_int(-1), 4);
        let id = EndoSeries::identity(4);
        assert_eq!(e.compose(&id), e);
        assert_eq!(id.compose(&e), e);
    }

    #[test]
    fn inverse_of_simple_shear() {
        // E: x -> x, y -> y + x u has inverse x -> x, y -> y - x u
        let mut img_y = PolySeries::constant(&WordSum::y(), 3);
        img_y.set_coeff(1, WordSum::x());
        let e = EndoSeries::from_images(PolySeries::constant(&WordSum::x(), 3), img_y).unwrap();
        let inv = e.inverse();
        assert_eq!(inv.image_of_x(), &PolySeries::constant(&WordSum::x(), 3));
        assert_eq!(inv.image_of_y().coeff(0), &WordSum::y());
        assert_eq!(inv.image_of_y().coeff(1), &-&WordSum::x());
        assert!(inv.image_of_y().coeff(2).is_zero());
        assert_eq!(e.compose(&inv), EndoSeries::identity(3));
        assert_eq!(inv.compose(&e), EndoSeries::identity(3));
    }

    #[test]
    fn inverse_of_identity_is_identity() {
        assert_eq!(EndoSeries::identity(4).inverse(), EndoSeries::identity(4));
    }

    #[test]
    fn inverse_of_delta_u() {
        let e = delta_u(&rat_int(-1), 6);
        let inv = e.inverse();
        assert_eq!(e.compose(&inv), EndoSeries::identity(6));
        assert_eq!(inv.compose(&e), EndoSeries::identity(6));
    }

    #[test]
    fn from_images_rejects_non_identity_order_zero() {
        let img_x = PolySeries::constant(&ws("xy"), 2);
        let img_y = PolySeries::constant(&WordSum::y(), 2);
        assert!(EndoSeries::from_images(img_x, img_y).is_err());
    }

    #[test]
    fn exp_of_single_derivation_order_one() {
        let got = exp_derivation_series(|_| rat_int(1), &WordSum::x(), 1);
        assert_eq!(got.coeff(0), &WordSum::x());
        assert_eq!(got.coeff(1), &ws("xy"));
    }

    #[test]
    fn exp_matches_delta_u_to_order_two() {
        // u^2 coefficient of exp(sum (-1)^n d_n/n u^n)(x) is
        // (d_2(x) + d_1(d_1(x))) / 2 = xyy
        let got = exp_derivation_series(
            |n| {
                let sign = if n % 2 == 1 { rat_int(-1) } else { rat_int(1) };
                sign / rat_int(n as i64)
            },
            &WordSum::x(),
            2,
        );
        assert_eq!(got.coeff(0), &WordSum::x());
        assert_eq!(got.coeff(1), &-&ws("xy"));
        assert_eq!(got.coeff(2), &ws("xyy"));
        assert_eq!(&got, delta_u(&rat_int(1), 2).image_of_x());
    }

    #[test]
    fn exp_with_zero_coefficients_is_constant() {
        use num_traits::Zero;
        let target = &ws("xxy") + &ws("xy");
        let got = exp_derivation_series(|_| Rat::zero(), &target, 4);
        assert_eq!(got, PolySeries::constant(&target, 4));
    }

    #[test]
    fn hseries_log_of_simple_series() {
        // log(I + lambda1 u) = lambda1 u - 1/2 lambda1^2 u^2
        let mut s = HSeries::one(2);
        s.coeffs[1] = ForestSum::from_forest(parse_forest("()").unwrap());
        let l = s.log().unwrap();
        assert!(l.coeff(0).is_zero());
        assert_eq!(
            l.coeff(1),
            &ForestSum::from_forest(parse_forest("()").unwrap())
        );
        assert_eq!(
            l.coeff(2),
            &ForestSum::from_term(parse_forest("()()").unwrap(), rat(-1, 2))
        );
    }

    #[test]
    fn log_requires_unit_constant_term() {
        let s = HSeries::zero(3);
        assert!(s.log().is_err());
    }

    #[test]
    fn log_of_lambda_series_first_coefficients() {
        use crate::hopf::dynkin;
        let l = lambda_series(2).log().unwrap();
        // u^1: lambda1 = D(lambda1)/1
        assert_eq!(l.coeff(1), &ForestSum::from_forest(ladder(1)));
        // u^2: lambda2 - 1/2 lambda1^2 = D(lambda2)/2
        let expected = dynkin(&ForestSum::from_forest(ladder(2))).scale(&rat(1, 2));
        assert_eq!(l.coeff(2), &expected);
    }
}
