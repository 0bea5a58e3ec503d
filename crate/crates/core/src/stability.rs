//! `A`, `S` and `β` of a prime divisor along the path `-K_X - t·D`, and the
//! chain of implications a negative `β` supports:
//!
//! `β < 0` ⟹ divisorially unstable ⟹ K-unstable ⟹ no Kähler–Einstein metric,
//! and, with a finite automorphism group, no Kähler–Ricci soliton.
//!
//! Only these directions are implemented; nothing here ever concludes
//! existence of a canonical metric.

use std::thread;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::arith::{format_rational, serde_rational, PiecewisePoly, Rational};
use crate::error::{Error, Result};
use crate::geometry::{anticanonical, triple_form, BlowupGeometry, DivisorClass};
use crate::positivity::{
    nef_threshold, pseudoeffective_threshold, volume_path, ConeSpec, DivisorPath, Threshold,
};

pub const NOTE_VALUATIVE: &str =
    "valuative criterion: beta(E) < 0 for a prime divisor E over X implies X is K-unstable";
pub const NOTE_KE_OBSTRUCTION: &str =
    "K-stability criterion for Kahler-Einstein metrics: a K-unstable Fano manifold admits no Kahler-Einstein metric";
pub const NOTE_SOLITON: &str =
    "finite automorphism group: every holomorphic vector field vanishes, so a Kahler-Ricci soliton would be Kahler-Einstein";
pub const NOTE_NO_AUT: &str =
    "automorphism finiteness not established; soliton existence left undecided";
pub const NOTE_NO_EVIDENCE: &str = "no divisor with negative beta supplied";
pub const NOTE_CONE: &str =
    "nefness certified only against the listed curve classes, assumed to generate the Mori cone";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Tristate {
    No,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct StabilityVerdict {
    pub divisorially_unstable: bool,
    pub k_unstable: bool,
    #[serde(rename = "admitsKE")]
    pub admits_ke: Tristate,
    #[serde(rename = "admitsKRS")]
    pub admits_krs: Tristate,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BetaReport {
    pub geometry: BlowupGeometry,
    pub divisor: DivisorClass,
    #[serde(with = "serde_rational")]
    pub log_discrepancy: Rational,
    #[serde(with = "serde_rational")]
    pub anticanonical_volume: Rational,
    pub nef_threshold: Threshold,
    #[serde(with = "serde_rational")]
    pub pseudoeffective_threshold: Rational,
    pub volume_pieces: PiecewisePoly,
    #[serde(with = "serde_rational")]
    pub s_value: Rational,
    #[serde(with = "serde_rational")]
    pub beta: Rational,
    pub cone_assumption: ConeSpec,
    pub verdict: StabilityVerdict,
}

/// `S = (1/V) ∫ vol`.
pub fn s_value(vol: &PiecewisePoly, volume: &Rational) -> Result<Rational> {
    if !volume.is_positive() {
        return Err(Error::Input(format!(
            "anticanonical volume must be positive, got {}",
            format_rational(volume)
        )));
    }
    Ok(vol.integrate() / volume)
}

/// Full β computation for `path = -K_X - t·D`, with `log_discrepancy` the
/// caller-supplied `A_X(D)` (1 for a prime divisor on `X`).
pub fn beta(
    geom: &BlowupGeometry,
    path: &DivisorPath,
    log_discrepancy: &Rational,
    cone: &ConeSpec,
) -> Result<BetaReport> {
    if !log_discrepancy.is_positive() {
        return Err(Error::Input("log discrepancy must be positive".into()));
    }
    if path.start != anticanonical(geom) {
        return Err(Error::Input(
            "divisor path must start at the anticanonical class".into(),
        ));
    }
    let volume = triple_form(geom)?.cube(&path.start);
    if !volume.is_positive() {
        return Err(Error::Input(format!(
            "anticanonical volume {} is not positive",
            format_rational(&volume)
        )));
    }
    let pieces = volume_path(path, geom, cone)?;
    let nef = nef_threshold(path, cone)?;
    let tau = match pseudoeffective_threshold(path) {
        Threshold::Finite(t) => t,
        Threshold::Unbounded => unreachable!("volume_path rejects unbounded paths"),
    };
    let s = s_value(&pieces, &volume)?;
    let beta = log_discrepancy - &s;
    let verdict = chain(std::iter::once(&beta), false);
    Ok(BetaReport {
        geometry: geom.clone(),
        divisor: path.direction.clone(),
        log_discrepancy: log_discrepancy.clone(),
        anticanonical_volume: volume,
        nef_threshold: nef,
        pseudoeffective_threshold: tau,
        volume_pieces: pieces,
        s_value: s,
        beta,
        cone_assumption: cone.clone(),
        verdict,
    })
}

/// β for `-K_X - t·direction`.
pub fn beta_for_direction(
    geom: &BlowupGeometry,
    direction: &DivisorClass,
    log_discrepancy: &Rational,
    cone: &ConeSpec,
) -> Result<BetaReport> {
    let path = DivisorPath::new(anticanonical(geom), direction.clone());
    beta(geom, &path, log_discrepancy, cone)
}

pub fn verdict_chain(betas: &[BetaReport], aut_finite: bool) -> StabilityVerdict {
    chain(betas.iter().map(|r| &r.beta), aut_finite)
}

fn chain<'a>(betas: impl IntoIterator<Item = &'a Rational>, aut_finite: bool) -> StabilityVerdict {
    let unstable = betas.into_iter().any(|b| b < &Rational::zero());
    let mut notes = Vec::new();
    if !unstable {
        notes.push(NOTE_NO_EVIDENCE.to_string());
        return StabilityVerdict {
            divisorially_unstable: false,
            k_unstable: false,
            admits_ke: Tristate::Unknown,
            admits_krs: Tristate::Unknown,
            notes,
        };
    }
    notes.push(NOTE_VALUATIVE.to_string());
    notes.push(NOTE_KE_OBSTRUCTION.to_string());
    notes.push(
        if aut_finite {
            NOTE_SOLITON
        } else {
            NOTE_NO_AUT
        }
        .to_string(),
    );
    StabilityVerdict {
        divisorially_unstable: true,
        k_unstable: true,
        admits_ke: Tristate::No,
        admits_krs: if aut_finite {
            Tristate::No
        } else {
            Tristate::Unknown
        },
        notes,
    }
}

/// One run of a parameter sweep.
#[derive(Clone, Debug)]
pub struct BetaInput {
    pub geometry: BlowupGeometry,
    pub direction: DivisorClass,
    pub log_discrepancy: Rational,
    pub cone: ConeSpec,
}

/// Runs every input on its own thread; results come back in input order.
pub fn beta_sweep(inputs: &[BetaInput]) -> Vec<Result<BetaReport>> {
    thread::scope(|scope| {
        let handles: Vec<_> = inputs
            .iter()
            .map(|inp| {
                scope.spawn(move || {
                    beta_for_direction(
                        &inp.geometry,
                        &inp.direction,
                        &inp.log_discrepancy,
                        &inp.cone,
                    )
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    })
}
