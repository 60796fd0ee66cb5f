//! Dense complex polynomials in ascending-power order.
//!
//! [`Poly`] is the object every inequality in this crate is stated for. It
//! keeps its coefficients trimmed so that the last entry is the (nonzero)
//! leading coefficient; the empty coefficient vector is the zero polynomial.

mod parse;
mod roots;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

pub use parse::parse_complex;
pub use roots::{cluster_roots, RootCluster, RootFinder};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Poly {
    coeffs: Vec<Complex64>,
}

impl Poly {
    /// Builds a polynomial from ascending coefficients, dropping trailing zeros.
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c * z^k`
    pub fn monomial(c: Complex64, k: usize) -> Self {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `z`.
    pub fn identity() -> Self {
        Self::monomial(Complex64::new(1.0, 0.0), 1)
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Complex64]) -> Self {
        let mut coeffs = vec![Complex64::new(1.0, 0.0)];
        for &r in roots {
            let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= c * r;
            }
            coeffs = next;
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0 (check [`Poly::is_zero`]).
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs
            .last()
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn is_monic(&self, tol: f64) -> bool {
        !self.is_zero() && (self.leading() - 1.0).norm() <= tol
    }

    /// Largest coefficient modulus.
    pub fn max_coeff_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Cauchy bound `1 + max |a_k / a_d|`: every root lies in the disc of this radius.
    pub fn root_bound(&self) -> f64 {
        let lead = self.leading().norm();
        if self.degree() == 0 || lead == 0.0 {
            return 1.0;
        }
        1.0 + self.coeffs[..self.degree()]
            .iter()
            .map(|c| c.norm() / lead)
            .fold(0.0, f64::max)
    }

    /// Compensated Horner evaluation.
    ///
    /// Every product and sum of the nested scheme is split into its rounded
    /// value and exact rounding error; the errors are accumulated by a second
    /// Horner pass and added back, so the result is as accurate as plain
    /// Horner in doubled precision.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        let zero = Complex64::new(0.0, 0.0);
        let mut acc = zero;
        let mut correction = zero;
        for &c in self.coeffs.iter().rev() {
            let (prod, prod_err) = complex_two_prod(acc, z);
            let (re, re_err) = two_sum(prod.re, c.re);
            let (im, im_err) = two_sum(prod.im, c.im);
            acc = Complex64::new(re, im);
            correction = correction * z + prod_err + Complex64::new(re_err, im_err);
        }
        acc + correction
    }

    /// Plain Horner evaluation, for inner loops that do not need the extra digits.
    pub fn eval_fast(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    /// `(p(z), p'(z))` in one Horner pass.
    pub fn eval_with_derivative(&self, z: Complex64) -> (Complex64, Complex64) {
        let zero = Complex64::new(0.0, 0.0);
        let mut value = zero;
        let mut slope = zero;
        for &c in self.coeffs.iter().rev() {
            slope = slope * z + value;
            value = value * z + c;
        }
        (value, slope)
    }

    /// `sum |a_k| |z|^k`, the natural scale for the rounding error of `eval(z)`.
    pub fn eval_scale(&self, z: Complex64) -> f64 {
        let r = z.norm();
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
    }

    /// Derivative; constants (and the zero polynomial) map to the zero sentinel.
    pub fn derivative(&self) -> Poly {
        if self.coeffs.len() <= 1 {
            return Poly::zero();
        }
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: Complex64) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// `p + lambda`, a shift of the constant term.
    pub fn shift_constant(&self, lambda: Complex64) -> Poly {
        let mut coeffs = self.coeffs.clone();
        if coeffs.is_empty() {
            coeffs.push(lambda);
        } else {
            coeffs[0] += lambda;
        }
        Poly::new(coeffs)
    }

    /// `q(z) = p(c z + b)` by Horner's scheme over polynomials.
    pub fn affine_compose(&self, c: Complex64, b: Complex64) -> Result<Poly> {
        if c == Complex64::new(0.0, 0.0) {
            return Err(Error::DegenerateAffine);
        }
        let inner = Poly::new(vec![b, c]);
        let mut acc = Poly::zero();
        for &a in self.coeffs.iter().rev() {
            acc = &(&acc * &inner) + &Poly::constant(a);
        }
        Ok(acc)
    }

    /// Chebyshev polynomial of the first kind by the three-term recurrence.
    pub fn chebyshev(d: usize) -> Poly {
        // Exact integer recurrence while the coefficients fit in i128.
        if d <= 90 {
            let mut prev: Vec<i128> = vec![1];
            let mut cur: Vec<i128> = vec![0, 1];
            if d == 0 {
                return Poly::from_real(&[1.0]);
            }
            for _ in 1..d {
                let mut next = vec![0i128; cur.len() + 1];
                for (k, &c) in cur.iter().enumerate() {
                    next[k + 1] += 2 * c;
                }
                for (k, &c) in prev.iter().enumerate() {
                    next[k] -= c;
                }
                prev = cur;
                cur = next;
            }
            let real: Vec<f64> = cur.iter().map(|&c| c as f64).collect();
            return Poly::from_real(&real);
        }
        let two_z = Poly::monomial(Complex64::new(2.0, 0.0), 1);
        let mut prev = Poly::from_real(&[1.0]);
        let mut cur = Poly::identity();
        for _ in 1..d {
            let next = &(&two_z * &cur) - &prev;
            prev = cur;
            cur = next;
        }
        cur
    }

    /// All roots with multiplicity, using the default root finder.
    pub fn roots(&self) -> Result<Vec<Complex64>> {
        RootFinder::default().roots(self)
    }

    /// Roots of `p'`.
    pub fn critical_points(&self) -> Result<Vec<Complex64>> {
        self.critical_points_with(&RootFinder::default())
    }

    pub fn critical_points_with(&self, finder: &RootFinder) -> Result<Vec<Complex64>> {
        if self.degree() < 2 || self.is_zero() {
            return Err(Error::DegreeTooLow {
                degree: self.degree(),
                required: 2,
            });
        }
        finder.roots(&self.derivative())
    }

    /// `p(c)` for every critical point `c`, with multiplicity.
    pub fn critical_values(&self) -> Result<Vec<Complex64>> {
        self.critical_values_with(&RootFinder::default())
    }

    pub fn critical_values_with(&self, finder: &RootFinder) -> Result<Vec<Complex64>> {
        Ok(self
            .critical_points_with(finder)?
            .into_iter()
            .map(|c| self.eval(c))
            .collect())
    }
}

impl Add for &Poly {
    type Output = Poly;

    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = Complex64::new(0.0, 0.0);
        Poly::new(
            (0..n)
                .map(|k| {
                    self.coeffs.get(k).copied().unwrap_or(zero)
                        + rhs.coeffs.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }
}

impl Neg for &Poly {
    type Output = Poly;

    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;

    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;

    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// Rounded complex product and a (first-order exact) error term.
fn complex_two_prod(x: Complex64, y: Complex64) -> (Complex64, Complex64) {
    let (ac, ac_err) = two_prod(x.re, y.re);
    let (bd, bd_err) = two_prod(x.im, -y.im);
    let (ad, ad_err) = two_prod(x.re, y.im);
    let (bc, bc_err) = two_prod(x.im, y.re);
    let (re, re_err) = two_sum(ac, bd);
    let (im, im_err) = two_sum(ad, bc);
    (
        Complex64::new(re, im),
        Complex64::new(ac_err + bd_err + re_err, ad_err + bc_err + im_err),
    )
}

/// Formats one coefficient as `a+bi` / `a-bi`.
pub fn format_complex(z: Complex64) -> String {
    let re = if z.re == 0.0 { 0.0 } else { z.re };
    let im = if z.im == 0.0 { 0.0 } else { z.im };
    if im.is_sign_negative() {
        format!("{re}-{}i", -im)
    } else {
        format!("{re}+{im}i")
    }
}

impl fmt::Display for Poly {
    /// Comma-separated ascending coefficients; the zero polynomial prints as `0+0i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0+0i");
        }
        let parts: Vec<String> = self.coeffs.iter().map(|&c| format_complex(c)).collect();
        f.write_str(&parts.join(","))
    }
}

impl std::str::FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let coeffs = s
            .split(',')
            .map(parse_complex)
            .collect::<Result<Vec<_>>>()
            .map_err(|e| match e {
                Error::Parse { reason, .. } => Error::Parse {
                    what: "polynomial",
                    input: s.to_string(),
                    reason,
                },
                other => other,
            })?;
        Ok(Poly::new(coeffs))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn assert_close(a: Complex64, b: Complex64, tol: f64) {
        assert!((a - b).norm() <= tol, "{a} vs {b}");
    }

    fn sorted_by_re(mut v: Vec<Complex64>) -> Vec<Complex64> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        v
    }

    #[test]
    fn eval_examples() {
        let t3 = Poly::chebyshev(3);
        assert_close(t3.eval(c(0.5, 0.0)), c(-1.0, 0.0), 1e-15);
        let p = Poly::from_real(&[-1.0, 0.0, 1.0]);
        assert_eq!(p.eval(c(2.0, 0.0)), c(3.0, 0.0));
        let q = Poly::new(vec![c(0.3, -2.0), c(1.0, 1.0), c(5.0, 0.0)]);
        assert_eq!(q.eval(c(0.0, 0.0)), c(0.3, -2.0));
    }

    #[test]
    fn eval_with_derivative_matches_derivative_poly() {
        let p = Poly::new(vec![c(1.0, 2.0), c(-3.0, 0.5), c(0.0, 1.0), c(2.0, -1.0)]);
        let z = c(0.7, -1.3);
        let (v, d) = p.eval_with_derivative(z);
        assert_close(v, p.eval(z), 1e-13);
        assert_close(d, p.derivative().eval(z), 1e-13);
    }

    #[test]
    fn derivative_examples() {
        assert_eq!(
            Poly::from_real(&[-1.0, 0.0, 1.0]).derivative(),
            Poly::from_real(&[0.0, 2.0])
        );
        assert_eq!(Poly::chebyshev(2).derivative(), Poly::from_real(&[0.0, 4.0]));
        assert!(Poly::constant(c(3.0, 1.0)).derivative().is_zero());
        assert!(Poly::zero().derivative().is_zero());
    }

    #[test]
    fn chebyshev_examples() {
        assert_eq!(Poly::chebyshev(0), Poly::from_real(&[1.0]));
        assert_eq!(Poly::chebyshev(1), Poly::identity());
        assert_eq!(Poly::chebyshev(2), Poly::from_real(&[-1.0, 0.0, 2.0]));
        assert_eq!(Poly::chebyshev(3), Poly::from_real(&[0.0, -3.0, 0.0, 4.0]));
    }

    #[test]
    fn chebyshev_leading_coefficient_is_power_of_two() {
        for d in 1..=30 {
            assert_eq!(Poly::chebyshev(d).leading(), c(2f64.powi(d as i32 - 1), 0.0));
        }
    }

    #[test]
    fn chebyshev_identity_on_cosines() {
        // cos(d theta) = T_d(cos theta), sampled on a deterministic pseudo-random theta set.
        let mut theta = 0.123_f64;
        for d in 0..=20 {
            let t = Poly::chebyshev(d);
            for _ in 0..1000 {
                theta = (theta * 7.919 + 0.618_033_988_7).rem_euclid(2.0 * PI);
                let got = t.eval(c(theta.cos(), 0.0));
                assert!((got - c((d as f64 * theta).cos(), 0.0)).norm() <= 1e-10);
            }
        }
        let t3 = Poly::chebyshev(3);
        for k in 0..100 {
            let theta = 0.0628 * k as f64;
            assert!((t3.eval(c(theta.cos(), 0.0)).re - (3.0 * theta).cos()).abs() < 1e-13);
        }
    }

    #[test]
    fn affine_compose_examples() {
        let t2 = Poly::chebyshev(2);
        let q = t2.affine_compose(c(0.5f64.sqrt(), 0.0), c(0.0, 0.0)).unwrap();
        let want = Poly::from_real(&[-1.0, 0.0, 1.0]);
        for (a, b) in q.coeffs().iter().zip(want.coeffs()) {
            assert_close(*a, *b, 1e-15);
        }
        let p = Poly::new(vec![c(1.0, 2.0), c(3.0, -1.0), c(0.5, 0.5)]);
        assert_eq!(p.affine_compose(c(1.0, 0.0), c(0.0, 0.0)).unwrap(), p);
        let lin = Poly::identity()
            .affine_compose(c(2.0, 1.0), c(-1.0, 3.0))
            .unwrap();
        assert_eq!(lin, Poly::new(vec![c(-1.0, 3.0), c(2.0, 1.0)]));
        assert_eq!(
            p.affine_compose(c(0.0, 0.0), c(1.0, 0.0)),
            Err(Error::DegenerateAffine)
        );
    }

    #[test]
    fn roots_examples() {
        let r = sorted_by_re(Poly::from_real(&[-1.0, 0.0, 1.0]).roots().unwrap());
        assert_close(r[0], c(-1.0, 0.0), 1e-14);
        assert_close(r[1], c(1.0, 0.0), 1e-14);

        let r = sorted_by_re(Poly::chebyshev(3).roots().unwrap());
        let h = 3f64.sqrt() / 2.0;
        assert_close(r[0], c(-h, 0.0), 1e-14);
        assert_close(r[1], c(0.0, 0.0), 1e-14);
        assert_close(r[2], c(h, 0.0), 1e-14);

        let r = Poly::monomial(c(1.0, 0.0), 3).roots().unwrap();
        assert_eq!(r.len(), 3);
        for z in r {
            assert!(z.norm() <= 1e-6, "{z}");
        }
    }

    #[test]
    fn roots_reject_constants() {
        assert!(Poly::constant(c(2.0, 0.0)).roots().is_err());
        assert!(Poly::zero().roots().is_err());
    }

    #[test]
    fn critical_value_examples() {
        let v = Poly::from_real(&[-1.0, 0.0, 1.0]).critical_values().unwrap();
        assert_eq!(v.len(), 1);
        assert_close(v[0], c(-1.0, 0.0), 1e-15);
        let v = Poly::from_real(&[-4.0, 0.0, 1.0]).critical_values().unwrap();
        assert_close(v[0], c(-4.0, 0.0), 1e-15);
        for d in 2..=12 {
            let values = Poly::chebyshev(d).critical_values().unwrap();
            assert_eq!(values.len(), d - 1);
            for (k, v) in sorted_by_re(Poly::chebyshev(d).critical_points().unwrap())
                .into_iter()
                .enumerate()
            {
                // Critical points are cos(j pi / d); T_d there is cos(j pi) = +-1.
                let j = d - 1 - k;
                assert_close(v, c((j as f64 * PI / d as f64).cos(), 0.0), 1e-12);
            }
            for v in values {
                assert!((v.norm() - 1.0).abs() < 1e-10, "d={d} value {v}");
            }
        }
        assert!(Poly::identity().critical_values().is_err());
    }

    #[test]
    fn from_roots_round_trip() {
        let want = [c(1.0, 1.0), c(-2.0, 0.5), c(0.0, -1.0)];
        let p = Poly::from_roots(&want);
        for r in p.roots().unwrap() {
            assert!(want.iter().any(|w| (w - r).norm() < 1e-12));
        }
    }

    #[test]
    fn text_form() {
        let p: Poly = "-1+0i,0+0i,1+0i".parse().unwrap();
        assert_eq!(p, Poly::from_real(&[-1.0, 0.0, 1.0]));
        assert_eq!(p.to_string(), "-1+0i,0+0i,1+0i");
        let q = Poly::new(vec![c(0.5, -2.0), c(-1.25, 3.0)]);
        assert_eq!(q.to_string(), "0.5-2i,-1.25+3i");
        assert_eq!(q.to_string().parse::<Poly>().unwrap(), q);
        assert!("1+0i,,2".parse::<Poly>().is_err());
    }

    fn arb_poly(max_len: usize) -> impl Strategy<Value = Poly> {
        prop::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..max_len)
            .prop_map(|v| Poly::new(v.into_iter().map(|(a, b)| c(a, b)).collect()))
    }

    proptest! {
        #[test]
        fn derivative_is_linear(p in arb_poly(8), q in arb_poly(8),
                                a in (-3.0f64..3.0, -3.0f64..3.0), b in (-3.0f64..3.0, -3.0f64..3.0)) {
            let (a, b) = (c(a.0, a.1), c(b.0, b.1));
            let lhs = (&p.scale(a) + &q.scale(b)).derivative();
            let rhs = &p.derivative().scale(a) + &q.derivative().scale(b);
            let n = lhs.coeffs().len().max(rhs.coeffs().len());
            for k in 0..n {
                let l = lhs.coeffs().get(k).copied().unwrap_or_default();
                let r = rhs.coeffs().get(k).copied().unwrap_or_default();
                prop_assert!((l - r).norm() <= 1e-12 * (1.0 + l.norm()));
            }
        }

        #[test]
        fn affine_compose_associates(p in arb_poly(7),
                                     c1 in (0.2f64..1.5, -1.0f64..1.0), b1 in (-1.0f64..1.0, -1.0f64..1.0),
                                     c2 in (0.2f64..1.5, -1.0f64..1.0), b2 in (-1.0f64..1.0, -1.0f64..1.0)) {
            let (c1, b1, c2, b2) = (c(c1.0, c1.1), c(b1.0, b1.1), c(c2.0, c2.1), c(b2.0, b2.1));
            let twice = p.affine_compose(c1, b1).unwrap().affine_compose(c2, b2).unwrap();
            let once = p.affine_compose(c1 * c2, c1 * b2 + b1).unwrap();
            prop_assert_eq!(twice.coeffs().len(), once.coeffs().len());
            let scale = 1.0 + once.max_coeff_norm();
            for (x, y) in twice.coeffs().iter().zip(once.coeffs()) {
                prop_assert!((x - y).norm() <= 1e-10 * scale);
            }
        }

        #[test]
        fn roots_have_small_residual(p in arb_poly(10)) {
            prop_assume!(p.degree() >= 1 && p.leading().norm() > 1e-3);
            let finder = RootFinder::default();
            let roots = finder.roots(&p).unwrap();
            prop_assert_eq!(roots.len(), p.degree());
            for r in roots {
                prop_assert!(p.eval(r).norm() <= finder.tol_root * p.eval_scale(r).max(p.max_coeff_norm()));
            }
        }

        #[test]
        fn text_form_round_trips(p in arb_poly(8)) {
            prop_assert_eq!(p.to_string().parse::<Poly>().unwrap(), p);
        }
    }
}
