use num_traits::Zero;
use serde::Serialize;

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::{
    diagonal_pair_stabilizer, ker_h_group, lie_stabilizer_dim, simdiag_check, trace_normalize,
    GroupDescription, PencilConfig, QForm,
};

/// Position of `H` relative to `Q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Subfamily {
    /// `H ∩ Q` smooth.
    #[serde(rename = "a")]
    A,
    /// `H` tangent to `Q`; `Q'` misses the vertex of the cone `H ∩ Q`.
    #[serde(rename = "b")]
    B,
}

#[derive(Clone, Debug, Serialize)]
pub struct AutReport {
    pub subfamily: Subfamily,
    pub lie_dim: usize,
    #[serde(rename = "kerH_order")]
    pub ker_h_order: usize,
    /// `"configuration"` or `"normal form"`.
    #[serde(rename = "kerH_source")]
    pub ker_h_source: String,
    #[serde(rename = "kerH_group")]
    pub ker_h_group: GroupDescription,
    pub simdiag: bool,
    pub stabilizer_order: Option<usize>,
    pub stabilizer: Option<GroupDescription>,
    pub aut_finite: bool,
    pub notes: Vec<String>,
}

/// Basis of `H = {hᵀx = 0}` as the columns of an `n × (n-1)` matrix.
fn hyperplane_basis(h: &[Rational]) -> Matrix {
    let kernel = Matrix::from_rows(vec![h.to_vec()]).kernel();
    Matrix::from_rows(kernel).transpose()
}

fn coordinate_index(h: &[Rational]) -> Option<usize> {
    let mut nonzero = h.iter().enumerate().filter(|(_, x)| !x.is_zero());
    let (k, _) = nonzero.next()?;
    nonzero.next().is_none().then_some(k)
}

fn classify_subfamily(r1: &QForm, r2: &QForm) -> Result<Subfamily> {
    if r1.is_nondegenerate() {
        return Ok(Subfamily::A);
    }
    let kernel = r1.matrix().kernel();
    if kernel.len() == 1 {
        let v = &kernel[0];
        let value: Rational = v
            .iter()
            .zip(r2.matrix().mat_vec(v))
            .map(|(a, b)| a * b)
            .sum();
        if !value.is_zero() {
            return Ok(Subfamily::B);
        }
        return Err(Error::Input(
            "Q' passes through the vertex of the cone H ∩ Q".into(),
        ));
    }
    Err(Error::Input(format!(
        "H ∩ Q has corank {} (expected 0 or 1)",
        kernel.len()
    )))
}

/// First nondegenerate member `R1 + s·R2`, `s = 0, 1, 2, …`.
fn nondegenerate_member(r1: &QForm, r2: &QForm) -> Option<(i64, QForm)> {
    (0..=r1.size() as i64).find_map(|s| {
        let p = QForm::new(r1.matrix().add(&r2.matrix().scale(&int(s)))).ok()?;
        p.is_nondegenerate().then_some((s, p))
    })
}

/// Runs every automorphism check on one configuration.
pub fn analyze_pencil(config: &PencilConfig) -> Result<AutReport> {
    let n = config.size();
    let w = hyperplane_basis(&config.fh);
    let r1 = config.fq.restrict(&w);
    let r2 = config.fqp.restrict(&w);
    let subfamily = classify_subfamily(&r1, &r2)?;
    let mut notes = Vec::new();

    let direct = coordinate_index(&config.fh).map(|k| ker_h_group(&config.fq, k));
    let (ker_h, ker_h_source) = match direct {
        Some(Ok(g)) => (g, "configuration"),
        Some(Err(Error::Input(_))) | None => {
            let normal = match subfamily {
                Subfamily::A => QForm::identity(n),
                Subfamily::B => QForm::hyperbolic(n, 0, 1),
            };
            notes.push("Ker_H computed on the normal form of the subfamily".to_string());
            (ker_h_group(&normal, 0)?, "normal form")
        }
        Some(Err(e)) => return Err(e),
    };

    let mut simdiag = false;
    let mut stabilizer = None;
    match nondegenerate_member(&r1, &r2) {
        None => notes.push("pencil restricted to H is identically degenerate".into()),
        Some((s, p1)) => {
            if s != 0 {
                notes.push(format!("pencil member used on H: R1 + {s}·R2"));
            }
            simdiag = simdiag_check(&p1, &r2)?;
            if !simdiag {
                notes.push("stabilizer skipped: pencil on H has a repeated root".into());
            } else if p1.matrix().is_diagonal() && r2.matrix().is_diagonal() {
                let ratios: Vec<Rational> = p1
                    .matrix()
                    .diagonal_entries()
                    .iter()
                    .zip(r2.matrix().diagonal_entries())
                    .map(|(p, q)| q / p)
                    .collect();
                let b = trace_normalize(&QForm::diagonal(&ratios), &QForm::identity(ratios.len()))?;
                match diagonal_pair_stabilizer(&b) {
                    Ok(g) => stabilizer = Some(g),
                    Err(Error::Input(m)) => notes.push(format!("stabilizer skipped: {m}")),
                    Err(e) => return Err(e),
                }
            } else {
                notes.push(
                    "stabilizer skipped: restricted pair is not diagonal in the chosen basis"
                        .into(),
                );
            }
        }
    }

    let lie_dim = lie_stabilizer_dim(config);
    Ok(AutReport {
        subfamily,
        lie_dim,
        ker_h_order: ker_h.order,
        ker_h_source: ker_h_source.into(),
        ker_h_group: ker_h,
        simdiag,
        stabilizer_order: stabilizer.as_ref().map(|g| g.order),
        stabilizer,
        aut_finite: lie_dim == 0,
        notes,
    })
}
