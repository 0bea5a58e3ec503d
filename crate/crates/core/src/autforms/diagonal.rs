use std::collections::BTreeSet;

use itertools::Itertools;
use num_traits::One;

use crate::arith::{int, Poly, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::{projective_normalize, GroupDescription, QForm};

/// `B - (Tr B / n)·I` for an `n × n` form; `reference` must be the identity.
pub fn trace_normalize(b: &QForm, reference: &QForm) -> Result<QForm> {
    let n = b.size();
    if reference.matrix() != &Matrix::identity(n) {
        return Err(Error::Input(
            "trace normalization expects the identity form as reference".into(),
        ));
    }
    let shift = b.matrix().trace() / int(n as i64);
    QForm::new(b.matrix().sub(&reference.matrix().scale(&shift)))
}

/// `det(x·Q1 - Q2)`, recovered exactly by interpolation at `n + 1` points.
pub fn pencil_polynomial(q1: &QForm, q2: &QForm) -> Result<Poly> {
    let n = q1.size();
    if q2.size() != n {
        return Err(Error::Input("pencil members have different sizes".into()));
    }
    let points: Vec<(Rational, Rational)> = (0..=n as i64)
        .map(|x| {
            let m = q1.matrix().scale(&int(x)).sub(q2.matrix());
            (int(x), m.determinant())
        })
        .collect();
    Ok(Poly::interpolate(&points))
}

/// True iff `det(x·Q1 - Q2)` is squarefree: the pair is simultaneously
/// diagonalizable with pairwise distinct eigenvalue ratios.
pub fn simdiag_check(q1: &QForm, q2: &QForm) -> Result<bool> {
    if !q1.is_nondegenerate() {
        return Err(Error::Input(
            "first pencil member must be nondegenerate".into(),
        ));
    }
    pencil_polynomial(q1, q2)?.is_squarefree()
}

/// Stabilizer `{P : P·Pᵀ = I, P·B·Pᵀ = B}` of a diagonal form with distinct
/// entries, modulo `±I`. Such `P` commutes with `B`, hence is diagonal with
/// entries `±1`; the signed-permutation brute force must agree.
pub fn diagonal_pair_stabilizer(b: &QForm) -> Result<GroupDescription> {
    let entries = b.matrix().diagonal_entries();
    if !b.matrix().is_diagonal() {
        return Err(Error::Input(
            "stabilizer enumeration expects a diagonal form".into(),
        ));
    }
    let distinct: BTreeSet<&Rational> = entries.iter().collect();
    if distinct.len() != entries.len() {
        return Err(Error::Input(
            "distinctness precondition violated (stabilizer may be positive-dimensional)".into(),
        ));
    }
    let n = entries.len();
    let signs = (0..n - 1)
        .map(|_| [int(1), int(-1)])
        .multi_cartesian_product();
    let elements: Vec<Matrix> = signs
        .map(|tail| {
            let mut diag = vec![Rational::one()];
            diag.extend(tail);
            Matrix::diagonal(&diag)
        })
        .collect();
    let group = GroupDescription::from_elements(elements);

    let brute = signed_permutation_stabilizer(b);
    let ours: BTreeSet<&Matrix> = group.elements.iter().collect();
    let theirs: BTreeSet<&Matrix> = brute.survivors.iter().collect();
    if ours != theirs {
        return Err(Error::Regime(
            "sign-matrix enumeration disagrees with the brute-force search".into(),
        ));
    }
    Ok(group)
}

/// Result of scanning every signed permutation matrix.
#[derive(Clone, Debug)]
pub struct BruteForce {
    pub examined: usize,
    /// Normalized survivors, modulo `±I`.
    pub survivors: Vec<Matrix>,
}

/// All signed permutation matrices `P` with `P·Pᵀ = I` and `P·B·Pᵀ = B`.
pub fn signed_permutation_stabilizer(b: &QForm) -> BruteForce {
    let n = b.size();
    let m = b.matrix();
    let id = Matrix::identity(n);
    let mut examined = 0;
    let mut survivors = BTreeSet::new();
    for perm in (0..n).permutations(n) {
        for signs in (0..n).map(|_| [int(1), int(-1)]).multi_cartesian_product() {
            examined += 1;
            let mut p = Matrix::zeros(n, n);
            for (i, (&j, s)) in perm.iter().zip(&signs).enumerate() {
                p[(i, j)] = s.clone();
            }
            let pt = p.transpose();
            if &p * &pt == id && &(&p * m) * &pt == *m {
                survivors.insert(projective_normalize(&p));
            }
        }
    }
    BruteForce {
        examined,
        survivors: survivors.into_iter().collect(),
    }
}
