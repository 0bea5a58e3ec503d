use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{format_rational, int, Rational};
use crate::error::{Error, Result};

/// Univariate polynomial with exact rational coefficients, constant term
/// first. The zero polynomial has no coefficients; otherwise the leading
/// coefficient is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// The variable `t` itself.
    pub fn var() -> Self {
        Self::from_coeffs(vec![int(0), int(1)])
    }

    /// `c0 + c1·t`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::from_coeffs(vec![c0, c1])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| int(c)).collect())
    }

    /// Monic polynomial with the given roots.
    pub fn from_roots(roots: &[Rational]) -> Self {
        roots.iter().fold(Self::constant(int(1)), |acc, r| {
            &acc * &Self::linear(-r.clone(), int(1))
        })
    }

    /// Lagrange interpolation through points with distinct abscissae.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut out = Poly::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            let mut basis = Self::constant(yi.clone());
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    let denom = xi - xj;
                    basis = &basis * &Self::linear(-xj / &denom, int(1) / &denom);
                }
            }
            out = &out + &basis;
        }
        out
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    /// Horner evaluation.
    pub fn eval(&self, t: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * t + c)
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    /// Antiderivative with zero constant term.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(Rational::zero());
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / int(k as i64 + 1)),
        );
        Self::from_coeffs(coeffs)
    }

    /// Exact `∫_a^b p(t) dt`.
    pub fn integrate(&self, a: &Rational, b: &Rational) -> Result<Rational> {
        if a > b {
            return Err(Error::Input(format!(
                "integration bounds out of order: {} > {}",
                format_rational(a),
                format_rational(b)
            )));
        }
        let anti = self.antiderivative();
        Ok(anti.eval(b) - anti.eval(a))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(int(1)), |acc, _| &acc * self)
    }

    /// Composition `self(inner(t))`.
    pub fn compose(&self, inner: &Poly) -> Self {
        self.coeffs.iter().rev().fold(Poly::zero(), |acc, c| {
            &(&acc * inner) + &Self::constant(c.clone())
        })
    }

    /// Euclidean division; panics if `divisor` is zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        let lead = divisor.leading().expect("division by the zero polynomial");
        let dd = divisor.coeffs.len() - 1;
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let q = &rem[k + dd] / lead;
            if !q.is_zero() {
                for (j, c) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &q * c;
                }
            }
            quot[k] = q;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) => self.scale(&(Rational::one() / l)),
            None => Poly::zero(),
        }
    }

    /// Monic gcd by the Euclidean scheme; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// True iff `gcd(p, p')` is constant, i.e. no repeated roots over the
    /// algebraic closure.
    pub fn is_squarefree(&self) -> Result<bool> {
        if self.is_zero() {
            return Err(Error::Input(
                "squarefree check of the zero polynomial".into(),
            ));
        }
        Ok(self.gcd(&self.derivative()).degree() == Some(0))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let a = c.abs();
            let show_coeff = k == 0 || !a.is_one();
            if show_coeff {
                write!(f, "{}", format_rational(&a))?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::from_coeffs((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::from_coeffs(out)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::from_coeffs(self.coeffs.iter().map(|c| -c).collect())
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use proptest::prelude::*;

    fn paper_cubic() -> Poly {
        // -2(t^3 + 3t^2 + 3t - 15)
        Poly::from_ints(&[30, -6, -6, -2])
    }

    #[test]
    fn evaluation() {
        assert_eq!(paper_cubic().eval(&int(0)), int(30));
        assert_eq!(paper_cubic().eval(&int(1)), int(16));
        assert_eq!(Poly::zero().eval(&rat(7, 3)), int(0));
    }

    #[test]
    fn definite_integrals() {
        assert_eq!(
            paper_cubic().integrate(&int(0), &int(1)).unwrap(),
            rat(49, 2)
        );
        // 2(3 - t)^3
        let second = Poly::linear(int(3), int(-1)).pow(3).scale(&int(2));
        assert_eq!(
            second.coeffs(),
            Poly::from_ints(&[54, -54, 18, -2]).coeffs()
        );
        assert_eq!(second.integrate(&int(1), &int(3)).unwrap(), int(8));
        assert_eq!(Poly::zero().integrate(&int(0), &int(1)).unwrap(), int(0));
        assert!(matches!(
            paper_cubic().integrate(&int(1), &int(0)),
            Err(Error::Input(_))
        ));
    }

    #[test]
    fn squarefree() {
        let distinct = Poly::from_roots(&[int(1), int(2), int(3), int(4)]);
        assert!(distinct.is_squarefree().unwrap());
        let double = Poly::from_roots(&[int(1), int(1)]);
        assert!(!double.is_squarefree().unwrap());
        assert!(Poly::constant(int(5)).is_squarefree().unwrap());
        assert!(Poly::zero().is_squarefree().is_err());
    }

    #[test]
    fn division_and_gcd() {
        let a = Poly::from_roots(&[int(1), int(2), rat(1, 3)]);
        let b = Poly::from_roots(&[int(2), int(5)]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(&(&q * &b) + &r, a);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(a.gcd(&b), Poly::from_roots(&[int(2)]));
        assert_eq!(Poly::zero().gcd(&Poly::zero()), Poly::zero());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = paper_cubic();
        let pts: Vec<_> = (0..4).map(|k| (int(k), p.eval(&int(k)))).collect();
        assert_eq!(Poly::interpolate(&pts), p);
    }

    #[test]
    fn display() {
        assert_eq!(paper_cubic().to_string(), "-2t^3 - 6t^2 - 6t + 30");
        assert_eq!(
            Poly::from_coeffs(vec![rat(1, 2), int(1)]).to_string(),
            "t + 1/2"
        );
        assert_eq!(Poly::zero().to_string(), "0");
    }

    #[test]
    fn monomials_integrate_exactly() {
        for n in 0..=10u32 {
            let p = Poly::var().pow(n);
            assert_eq!(p.integrate(&int(0), &int(1)).unwrap(), rat(1, n as i64 + 1));
        }
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec(-20i64..20, 0..7).prop_map(|c| Poly::from_ints(&c))
    }

    fn small_rat() -> impl Strategy<Value = Rational> {
        (-40i64..40, 1i64..9).prop_map(|(n, d)| rat(n, d))
    }

    proptest! {
        #[test]
        fn integration_is_linear(p in small_poly(), q in small_poly(), a in small_rat(), w in small_rat()) {
            let b = &a + w.abs();
            let lhs = (&p + &q).integrate(&a, &b).unwrap();
            let rhs = p.integrate(&a, &b).unwrap() + q.integrate(&a, &b).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn integration_is_interval_additive(p in small_poly(), a in small_rat(), w1 in small_rat(), w2 in small_rat()) {
            let b = &a + w1.abs();
            let c = &b + w2.abs();
            let whole = p.integrate(&a, &c).unwrap();
            let split = p.integrate(&a, &b).unwrap() + p.integrate(&b, &c).unwrap();
            prop_assert_eq!(whole, split);
        }

        #[test]
        fn product_of_distinct_linear_factors_is_squarefree(mut roots in prop::collection::btree_set(-30i64..30, 1..6)) {
            let rs: Vec<_> = std::mem::take(&mut roots).into_iter().map(int).collect();
            let p = Poly::from_roots(&rs);
            prop_assert!(p.is_squarefree().unwrap());
            let doubled = &p * &Poly::from_roots(&rs[..1]);
            prop_assert!(!doubled.is_squarefree().unwrap());
        }
    }
}
