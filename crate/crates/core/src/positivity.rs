//! Nefness against a finite list of curves, Zariski decomposition with
//! negative part supported on `E`, and the exact piecewise volume along a
//! path `t ↦ start - t·direction`.

use std::fmt;

use num_traits::Signed;
use serde::Serialize;

use crate::arith::{format_rational, int, PiecewisePoly, Poly, Rational};
use crate::error::{Error, Result};
use crate::geometry::{curve_pairing, triple_form, BlowupGeometry, CurveClass, DivisorClass};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DivisorPath {
    pub start: DivisorClass,
    pub direction: DivisorClass,
}

impl DivisorPath {
    pub fn new(start: DivisorClass, direction: DivisorClass) -> Self {
        DivisorPath { start, direction }
    }

    pub fn at(&self, t: &Rational) -> DivisorClass {
        self.start.sub_scaled(t, &self.direction)
    }

    /// Coefficient of `π*A` along the path, as a polynomial in `t`.
    pub fn a_poly(&self) -> Poly {
        Poly::linear(self.start.a.clone(), -self.direction.a.clone())
    }

    /// Coefficient of `E` along the path.
    pub fn b_poly(&self) -> Poly {
        Poly::linear(self.start.b.clone(), -self.direction.b.clone())
    }

    /// `path(t)·C` as a linear polynomial in `t`.
    pub fn pairing_along(&self, curve: &CurveClass) -> Poly {
        Poly::linear(
            curve_pairing(&self.start, curve),
            -curve_pairing(&self.direction, curve),
        )
    }
}

/// Curves assumed to generate the Mori cone. Reports carry this list since
/// nefness is only certified relative to it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConeSpec {
    curves: Vec<CurveClass>,
}

impl ConeSpec {
    pub fn new(curves: Vec<CurveClass>) -> Result<Self> {
        if curves.is_empty() {
            return Err(Error::Input("cone needs at least one curve class".into()));
        }
        Ok(ConeSpec { curves })
    }

    /// `{f, π*L}`.
    pub fn blowup_default() -> Self {
        ConeSpec {
            curves: vec![CurveClass::fibre(), CurveClass::line()],
        }
    }

    pub fn curves(&self) -> &[CurveClass] {
        &self.curves
    }
}

impl Serialize for ConeSpec {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.curves.serialize(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Threshold {
    Finite(Rational),
    Unbounded,
}

impl Threshold {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Threshold::Finite(t) => Some(t),
            Threshold::Unbounded => None,
        }
    }
}

impl Serialize for Threshold {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Threshold {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Threshold::Finite(t) => write!(f, "{}", format_rational(t)),
            Threshold::Unbounded => write!(f, "unbounded"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ZariskiPair {
    pub positive: DivisorClass,
    pub negative: DivisorClass,
}

pub fn is_nef(d: &DivisorClass, cone: &ConeSpec) -> bool {
    cone.curves
        .iter()
        .all(|c| !curve_pairing(d, c).is_negative())
}

/// Largest `t ≥ 0` with `path(t)` nef.
pub fn nef_threshold(path: &DivisorPath, cone: &ConeSpec) -> Result<Threshold> {
    if !is_nef(&path.start, cone) {
        return Err(Error::Input("path does not start at a nef class".into()));
    }
    let mut best: Option<Rational> = None;
    for curve in &cone.curves {
        let start = curve_pairing(&path.start, curve);
        let slope = curve_pairing(&path.direction, curve);
        // pairing is start - t·slope; only a positive slope ever reaches zero
        if slope.is_positive() {
            let t = start / slope;
            if best.as_ref().is_none_or(|b| &t < b) {
                best = Some(t);
            }
        }
    }
    Ok(best.map_or(Threshold::Unbounded, Threshold::Finite))
}

/// Zero of the `π*A` coefficient of the path: where the positive part
/// `a(t)·π*A` stops carrying volume.
pub fn pseudoeffective_threshold(path: &DivisorPath) -> Threshold {
    if path.direction.a.is_positive() {
        Threshold::Finite(&path.start.a / &path.direction.a)
    } else {
        Threshold::Unbounded
    }
}

pub fn zariski_decompose(d: &DivisorClass, cone: &ConeSpec) -> Result<ZariskiPair> {
    if d.a.is_negative() {
        return Err(Error::Regime(
            "path left the supported regime (negative part would not be supported on E)".into(),
        ));
    }
    if is_nef(d, cone) {
        return Ok(ZariskiPair {
            positive: d.clone(),
            negative: DivisorClass::zero(),
        });
    }
    let positive = DivisorClass::new(d.a.clone(), int(0));
    let negative = DivisorClass::new(int(0), d.b.clone());
    if !d.b.is_positive() || !is_nef(&positive, cone) {
        return Err(Error::Regime(format!(
            "no Zariski decomposition with negative part on E for ({}, {})",
            format_rational(&d.a),
            format_rational(&d.b)
        )));
    }
    Ok(ZariskiPair { positive, negative })
}

/// Exact piecewise volume of `path(t)` on `[0, τ]`: the cube of the path on
/// the nef segment, then the cube of the Zariski positive part up to the
/// pseudoeffective threshold `τ`.
pub fn volume_path(
    path: &DivisorPath,
    geom: &BlowupGeometry,
    cone: &ConeSpec,
) -> Result<PiecewisePoly> {
    if path.direction.is_zero() {
        return Err(Error::Input("divisor direction is zero".into()));
    }
    let form = triple_form(geom)?;
    let start_volume = form.cube(&path.start);
    if !start_volume.is_positive() {
        return Err(Error::Input(format!(
            "starting class has volume {}, expected a big class",
            format_rational(&start_volume)
        )));
    }
    let nef_end = nef_threshold(path, cone)?;
    let Threshold::Finite(tau) = pseudoeffective_threshold(path) else {
        return Err(Error::Regime(
            "the pi*A coefficient never vanishes along the path; the volume integral is unbounded"
                .into(),
        ));
    };
    let zero = int(0);
    if tau <= zero {
        return Err(Error::Regime(
            "pseudoeffective threshold is not positive".into(),
        ));
    }

    let (a, b) = (path.a_poly(), path.b_poly());
    let nef_piece = form.cube_along(&a, &b);
    let t1 = match nef_end {
        Threshold::Finite(t1) if t1 < tau => t1,
        Threshold::Finite(t1) if t1 == tau => return PiecewisePoly::single(zero, tau, nef_piece),
        _ => {
            return Err(Error::Regime(format!(
                "path stays nef past t = {} where its pi*A coefficient vanishes; the cone list is incomplete",
                format_rational(&tau)
            )))
        }
    };

    // Beyond t1 the path must decompose as a(t)·π*A + b(t)·E with b > 0;
    // both conditions are linear in t, so checking the ends and one interior
    // point covers (t1, τ].
    if b.eval(&t1).is_negative() {
        return Err(Error::Regime(
            "E coefficient is negative at the nef threshold".into(),
        ));
    }
    let mid = (&t1 + &tau) / int(2);
    for t in [&mid, &tau] {
        let pair = zariski_decompose(&path.at(t), cone)?;
        if pair.negative.is_zero() {
            return Err(Error::Regime(format!(
                "path is nef again at t = {}",
                format_rational(t)
            )));
        }
    }
    let positive_piece = form.cube_along(&a, &Poly::zero());
    PiecewisePoly::new(vec![zero, t1, tau], vec![nef_piece, positive_piece]).map_err(|e| match e {
        Error::Input(m) => {
            Error::Regime(format!("volume is discontinuous at the nef threshold: {m}"))
        }
        other => other,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    fn path_2_23() -> DivisorPath {
        DivisorPath::new(
            DivisorClass::from_ints(3, -1),
            DivisorClass::strict_transform_hyperplane(),
        )
    }

    #[test]
    fn nefness_along_the_path() {
        let cone = ConeSpec::blowup_default();
        let p = path_2_23();
        assert_eq!(p.at(&rat(1, 2)), DivisorClass::new(rat(5, 2), rat(-1, 2)));
        assert!(is_nef(&p.at(&rat(1, 2)), &cone));
        assert!(!is_nef(&p.at(&int(2)), &cone));
        assert!(is_nef(&p.at(&int(0)), &cone));
        assert_eq!(
            p.pairing_along(&CurveClass::fibre()),
            Poly::from_ints(&[1, -1])
        );
        assert_eq!(
            p.pairing_along(&CurveClass::line()),
            Poly::from_ints(&[3, -1])
        );
    }

    #[test]
    fn thresholds() {
        let cone = ConeSpec::blowup_default();
        assert_eq!(
            nef_threshold(&path_2_23(), &cone).unwrap(),
            Threshold::Finite(int(1))
        );
        let still = DivisorPath::new(DivisorClass::from_ints(3, -1), DivisorClass::zero());
        assert_eq!(nef_threshold(&still, &cone).unwrap(), Threshold::Unbounded);
        let along_a = DivisorPath::new(
            DivisorClass::from_ints(3, -1),
            DivisorClass::from_ints(1, 0),
        );
        assert_eq!(
            nef_threshold(&along_a, &cone).unwrap(),
            Threshold::Finite(int(3))
        );
        let bad = DivisorPath::new(DivisorClass::from_ints(1, 1), DivisorClass::zero());
        assert!(matches!(nef_threshold(&bad, &cone), Err(Error::Input(_))));
        assert_eq!(
            pseudoeffective_threshold(&path_2_23()),
            Threshold::Finite(int(3))
        );
        assert_eq!(pseudoeffective_threshold(&still), Threshold::Unbounded);
    }

    #[test]
    fn decompositions() {
        let cone = ConeSpec::blowup_default();
        let pair = zariski_decompose(&DivisorClass::from_ints(1, 1), &cone).unwrap();
        assert_eq!(pair.positive, DivisorClass::from_ints(1, 0));
        assert_eq!(pair.negative, DivisorClass::from_ints(0, 1));
        assert_eq!(curve_pairing(&pair.positive, &CurveClass::fibre()), int(0));

        let nef = DivisorClass::new(rat(5, 2), rat(-1, 2));
        let pair = zariski_decompose(&nef, &cone).unwrap();
        assert_eq!(pair.positive, nef);
        assert!(pair.negative.is_zero());

        let pair = zariski_decompose(&DivisorClass::from_ints(0, 2), &cone).unwrap();
        assert!(pair.positive.is_zero());
        assert_eq!(pair.negative, DivisorClass::from_ints(0, 2));

        assert!(matches!(
            zariski_decompose(&DivisorClass::from_ints(-1, 1), &cone),
            Err(Error::Regime(m)) if m.contains("supported on E")
        ));
    }

    #[test]
    fn volume_of_the_2_23_path() {
        let vol = volume_path(
            &path_2_23(),
            &BlowupGeometry::mori_mukai_2_23(),
            &ConeSpec::blowup_default(),
        )
        .unwrap();
        assert_eq!(vol.breakpoints(), &[int(0), int(1), int(3)]);
        assert_eq!(vol.pieces()[0], Poly::from_ints(&[30, -6, -6, -2]));
        assert_eq!(vol.pieces()[1], Poly::from_ints(&[54, -54, 18, -2]));
        assert_eq!(vol.eval(&int(3)), Some(int(0)));
        assert_eq!(vol.pieces()[0].eval(&int(1)), int(16));
        assert_eq!(vol.pieces()[1].eval(&int(1)), int(16));
        let d0 = vol.pieces()[0].derivative().eval(&int(1));
        let d1 = vol.pieces()[1].derivative().eval(&int(1));
        assert_eq!((d0, d1), (int(-24), int(-24)));
        for k in 0..48 {
            let (s, t) = (rat(k, 16), rat(k + 1, 16));
            assert!(vol.eval(&t).unwrap() <= vol.eval(&s).unwrap());
        }
    }

    #[test]
    fn volume_path_errors() {
        let geom = BlowupGeometry::mori_mukai_2_23();
        let cone = ConeSpec::blowup_default();
        let still = DivisorPath::new(DivisorClass::from_ints(3, -1), DivisorClass::zero());
        assert!(matches!(
            volume_path(&still, &geom, &cone),
            Err(Error::Input(_))
        ));
        // moving along E: never loses nefness, pi*A coefficient constant
        let along_e = DivisorPath::new(
            DivisorClass::from_ints(3, -1),
            DivisorClass::from_ints(0, -1),
        );
        assert!(matches!(
            volume_path(&along_e, &geom, &cone),
            Err(Error::Regime(_))
        ));
        let fibres = ConeSpec::new(vec![CurveClass::fibre()]).unwrap();
        let vol = volume_path(&path_2_23(), &geom, &fibres).unwrap();
        assert_eq!(vol.breakpoints(), &[int(0), int(1), int(3)]);
        // a cone without the fibre keeps the path nef up to τ
        let lines = ConeSpec::new(vec![CurveClass::line()]).unwrap();
        let vol = volume_path(&path_2_23(), &geom, &lines).unwrap();
        assert_eq!(vol.breakpoints(), &[int(0), int(3)]);
        assert!(ConeSpec::new(vec![]).is_err());
        // the fibre alone never bounds a pi*A-only direction
        let along_a = DivisorPath::new(
            DivisorClass::from_ints(3, -1),
            DivisorClass::from_ints(1, 0),
        );
        assert!(matches!(
            volume_path(&along_a, &geom, &fibres),
            Err(Error::Regime(_))
        ));
        let vol = volume_path(&along_a, &geom, &cone).unwrap();
        assert_eq!(vol.breakpoints(), &[int(0), int(3)]);
    }

    #[test]
    fn nef_volume_equals_cube() {
        let geom = BlowupGeometry::mori_mukai_2_23();
        let form = triple_form(&geom).unwrap();
        let vol = volume_path(&path_2_23(), &geom, &ConeSpec::blowup_default()).unwrap();
        for k in 0..=8 {
            let t = rat(k, 8);
            assert_eq!(vol.eval(&t).unwrap(), form.cube(&path_2_23().at(&t)));
        }
    }
}
