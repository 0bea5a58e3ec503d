//! Numerical model of a blowup `X = Bl_C Y` of a Picard-rank-one Fano
//! threefold `Y` along a smooth curve `C`.
//!
//! Divisors live in the basis `{π*A, E}` (pullback of the ample generator and
//! the exceptional divisor); curves in the basis `{π*L, f}` (a line in `Y`
//! missing `C`, and a fibre of `E → C`). All intersection data is determined
//! by `(d, r, c, g)`:
//!
//! | product      | value                    |
//! |--------------|--------------------------|
//! | `(π*A)³`     | `d`                      |
//! | `(π*A)²·E`   | `0`                      |
//! | `π*A·E²`     | `-c`                     |
//! | `E³`         | `-deg N_{C/Y} = -(rc + 2g - 2)` |

use serde::Serialize;

use num_traits::{Signed, Zero};

use crate::arith::{format_rational, int, is_integral, serde_rational, Poly, Rational};
use crate::error::{Error, Result};

pub const MORI_MUKAI_2_23: &str = "mori-mukai-2.23";

/// Numerical input `(d, r, c, g)`: `d = A³`, `-K_Y = r·A`, `c = A·C`, and
/// `g` the genus of `C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlowupGeometry {
    #[serde(with = "serde_rational")]
    pub d: Rational,
    #[serde(with = "serde_rational")]
    pub r: Rational,
    #[serde(with = "serde_rational")]
    pub c: Rational,
    pub g: u32,
}

impl BlowupGeometry {
    pub fn new(d: Rational, r: Rational, c: Rational, g: u32) -> Result<Self> {
        if !d.is_positive() {
            return Err(Error::Input(format!(
                "degree d must be positive, got {}",
                format_rational(&d)
            )));
        }
        if !r.is_positive() {
            return Err(Error::Input(format!(
                "Fano index r must be positive, got {}",
                format_rational(&r)
            )));
        }
        if c.is_negative() {
            return Err(Error::Input(format!(
                "curve degree c must be nonnegative, got {}",
                format_rational(&c)
            )));
        }
        Ok(BlowupGeometry { d, r, c, g })
    }

    pub fn from_ints(d: i64, r: i64, c: i64, g: u32) -> Result<Self> {
        Self::new(int(d), int(r), int(c), g)
    }

    /// Quadric threefold blown up along an elliptic quartic curve.
    pub fn mori_mukai_2_23() -> Self {
        Self::from_ints(2, 3, 4, 1).expect("preset is valid")
    }

    pub fn from_preset(name: &str) -> Result<Self> {
        match name {
            MORI_MUKAI_2_23 | "2.23" => Ok(Self::mori_mukai_2_23()),
            other => Err(Error::Input(format!("unknown geometry preset {other:?}"))),
        }
    }

    /// `deg N_{C/Y} = -K_Y·C + 2g - 2`, which must be an integer.
    pub fn normal_bundle_degree(&self) -> Result<Rational> {
        let deg = &self.r * &self.c + int(2 * self.g as i64 - 2);
        if !is_integral(&deg) {
            return Err(Error::Input(format!(
                "inconsistent geometry: deg N = r·c + 2g - 2 = {} is not an integer",
                format_rational(&deg)
            )));
        }
        Ok(deg)
    }
}

/// `a·π*A + b·E`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorClass {
    #[serde(with = "serde_rational")]
    pub a: Rational,
    #[serde(with = "serde_rational")]
    pub b: Rational,
}

impl DivisorClass {
    pub fn new(a: Rational, b: Rational) -> Self {
        DivisorClass { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        Self::new(int(a), int(b))
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn pullback_hyperplane() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn exceptional() -> Self {
        Self::from_ints(0, 1)
    }

    /// Strict transform of a hyperplane section through `C`: `π*A - E`.
    pub fn strict_transform_hyperplane() -> Self {
        Self::from_ints(1, -1)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(&self.a + &other.a, &self.b + &other.b)
    }

    pub fn scale(&self, t: &Rational) -> Self {
        Self::new(&self.a * t, &self.b * t)
    }

    /// `self - t·other`.
    pub fn sub_scaled(&self, t: &Rational, other: &Self) -> Self {
        Self::new(&self.a - t * &other.a, &self.b - t * &other.b)
    }
}

/// `l·π*L + f·f`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CurveClass {
    #[serde(with = "serde_rational")]
    pub l: Rational,
    #[serde(with = "serde_rational")]
    pub f: Rational,
}

impl CurveClass {
    pub fn new(l: Rational, f: Rational) -> Self {
        CurveClass { l, f }
    }

    pub fn from_ints(l: i64, f: i64) -> Self {
        Self::new(int(l), int(f))
    }

    /// A line in `Y` disjoint from the centre.
    pub fn line() -> Self {
        Self::from_ints(1, 0)
    }

    /// A fibre of the exceptional divisor.
    pub fn fibre() -> Self {
        Self::from_ints(0, 1)
    }
}

/// The four triple intersection numbers of the rank-2 divisor lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TripleForm {
    #[serde(with = "serde_rational")]
    pub p3: Rational,
    #[serde(with = "serde_rational")]
    pub p2e: Rational,
    #[serde(with = "serde_rational")]
    pub pe2: Rational,
    #[serde(with = "serde_rational")]
    pub e3: Rational,
}

pub fn triple_form(geom: &BlowupGeometry) -> Result<TripleForm> {
    Ok(TripleForm {
        p3: geom.d.clone(),
        p2e: Rational::zero(),
        pe2: -geom.c.clone(),
        e3: -geom.normal_bundle_degree()?,
    })
}

impl TripleForm {
    /// Value of `(π*A)^(3-k)·E^k`.
    fn by_exceptional_count(&self, k: usize) -> &Rational {
        match k {
            0 => &self.p3,
            1 => &self.p2e,
            2 => &self.pe2,
            _ => &self.e3,
        }
    }

    /// `D1·D2·D3`, expanded trilinearly in the basis.
    pub fn triple_product(
        &self,
        d1: &DivisorClass,
        d2: &DivisorClass,
        d3: &DivisorClass,
    ) -> Rational {
        let coords = |d: &DivisorClass| [d.a.clone(), d.b.clone()];
        let (x, y, z) = (coords(d1), coords(d2), coords(d3));
        let mut total = Rational::zero();
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                for (k, zk) in z.iter().enumerate() {
                    let w = xi * yj * zk;
                    if !w.is_zero() {
                        total += w * self.by_exceptional_count(i + j + k);
                    }
                }
            }
        }
        total
    }

    pub fn cube(&self, d: &DivisorClass) -> Rational {
        self.triple_product(d, d, d)
    }

    /// `(a(t)·π*A + b(t)·E)³` as a polynomial in `t`.
    pub fn cube_along(&self, a: &Poly, b: &Poly) -> Poly {
        let three = int(3);
        let terms = [
            a.pow(3).scale(&self.p3),
            (&a.pow(2) * b).scale(&(&three * &self.p2e)),
            (a * &b.pow(2)).scale(&(&three * &self.pe2)),
            b.pow(3).scale(&self.e3),
        ];
        terms.iter().fold(Poly::zero(), |acc, p| &acc + p)
    }
}

/// Intersection pairing: `π*A·π*L = 1`, `π*A·f = 0`, `E·π*L = 0`, `E·f = -1`.
pub fn curve_pairing(d: &DivisorClass, c: &CurveClass) -> Rational {
    &d.a * &c.l - &d.b * &c.f
}

/// `-K_X = r·π*A - E`.
pub fn anticanonical(geom: &BlowupGeometry) -> DivisorClass {
    DivisorClass::new(geom.r.clone(), int(-1))
}
