//! JSON and CSV rendering. Keys follow struct field order, so identical
//! runs produce identical bytes.

use kstab_core::arith::{format_rational, serde_rational, to_f64, PiecewisePoly, Rational};
use kstab_core::geometry::anticanonical;
use kstab_core::geometry::{BlowupGeometry, DivisorClass};
use kstab_core::positivity::{
    nef_threshold, pseudoeffective_threshold, volume_path, ConeSpec, DivisorPath, Threshold,
};
use kstab_core::stability::StabilityVerdict;
use kstab_core::{Error, Result};
use serde::Serialize;

pub fn json<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| Error::Input(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VolumeReport {
    pub geometry: BlowupGeometry,
    pub divisor: DivisorClass,
    pub nef_threshold: Threshold,
    pub pseudoeffective_threshold: Threshold,
    pub volume_pieces: PiecewisePoly,
}

impl VolumeReport {
    pub fn compute(
        geometry: &BlowupGeometry,
        direction: &DivisorClass,
        cone: &ConeSpec,
    ) -> Result<Self> {
        let path = DivisorPath::new(anticanonical(geometry), direction.clone());
        let volume_pieces = volume_path(&path, geometry, cone)?;
        Ok(VolumeReport {
            geometry: geometry.clone(),
            divisor: direction.clone(),
            nef_threshold: nef_threshold(&path, cone)?,
            pseudoeffective_threshold: pseudoeffective_threshold(&path),
            volume_pieces,
        })
    }
}

#[derive(Serialize)]
pub struct Query {
    pub b2: u32,
    pub b3: u32,
    #[serde(with = "serde_rational")]
    pub degree: Rational,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassifyReport {
    pub query: Query,
    pub table: String,
    pub table_rows: usize,
    pub matches: Vec<String>,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    pub aut_finite: Option<bool>,
    pub verdict: StabilityVerdict,
    pub conclusion: String,
    pub report: String,
}

/// Samples `t = start, start + step, …` up to and including the end point.
/// Exact columns first, `*_approx` columns are `f64`.
pub fn sample_csv(vol: &PiecewisePoly, step: &Rational) -> Result<String> {
    if step <= &Rational::from_integer(0.into()) {
        return Err(Error::Input("sample step must be positive".into()));
    }
    let mut out = String::from("t,vol,t_approx,vol_approx\n");
    let mut row = |t: &Rational| {
        let v = vol.eval(t).expect("sample inside the domain");
        out.push_str(&format!(
            "{},{},{},{}\n",
            format_rational(t),
            format_rational(&v),
            to_f64(t),
            to_f64(&v)
        ));
    };
    let mut t = vol.start().clone();
    while &t < vol.end() {
        row(&t);
        t += step;
    }
    row(vol.end());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use kstab_core::arith::{int, rat, Poly};

    #[test]
    fn samples_include_both_ends() {
        let p = PiecewisePoly::single(int(0), int(3), Poly::from_ints(&[0, 1])).unwrap();
        let csv = sample_csv(&p, &rat(1, 8)).unwrap();
        assert_eq!(csv.lines().count(), 26);
        assert_eq!(csv.lines().nth(1).unwrap(), "0,0,0,0");
        assert_eq!(csv.lines().last().unwrap(), "3,3,3,3");
        let csv = sample_csv(&p, &int(2)).unwrap();
        assert_eq!(
            csv.lines()
                .skip(1)
                .map(|l| l.split(',').next().unwrap())
                .collect::<Vec<_>>(),
            ["0", "2", "3"]
        );
        assert!(sample_csv(&p, &int(0)).is_err());
    }
}
