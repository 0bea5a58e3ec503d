use std::collections::BTreeSet;

use num_traits::Zero;

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

use super::solver::{MPoly, System};
use super::{GroupDescription, QForm};

/// Projective transformations fixing the hyperplane `x_k = 0` pointwise and
/// preserving `V(form)`.
///
/// Elements are bordered matrices `B` (free row `k` and column `k`, scalar
/// `λ` elsewhere on the diagonal) acting on points by `x ↦ Bᵀx`, with the
/// quadric condition `B·M·Bᵀ = μ·M`. `λ = 1` after projective scaling, which
/// is harmless since `λ = 0` makes `B` singular.
pub fn ker_h_group(form: &QForm, k: usize) -> Result<GroupDescription> {
    let system = bordered_system(form, k, true)?;
    let solutions = system.solve()?;
    let n = form.size();
    let mut elements = Vec::new();
    for point in &solutions.points {
        let b = bordered_matrix(n, k, point);
        if !is_ker_h_element(form, k, &b) {
            return Err(Error::Regime(
                "solver returned a matrix outside Ker_H".into(),
            ));
        }
        elements.push(b);
    }
    if elements.is_empty() {
        return Err(Error::Regime(
            "no rational solutions, not even the identity".into(),
        ));
    }
    let mut group = GroupDescription::from_elements(elements);
    group.notes = solutions.notes;
    Ok(group)
}

/// True when `B` is invertible, fixes `x_k = 0` pointwise under `x ↦ Bᵀx`,
/// and satisfies `B·M·Bᵀ = μ·M` for some `μ ≠ 0`.
pub fn is_ker_h_element(form: &QForm, k: usize, b: &Matrix) -> bool {
    let n = form.size();
    if b.rows() != n || b.cols() != n || b.determinant().is_zero() {
        return false;
    }
    let lambda = &b[(if k == 0 { 1 } else { 0 }, if k == 0 { 1 } else { 0 })];
    let fixes = (0..n).filter(|&p| p != k).all(|p| {
        (0..n).all(|q| {
            if p == q {
                &b[(p, q)] == lambda
            } else {
                b[(p, q)].is_zero()
            }
        })
    });
    if !fixes {
        return false;
    }
    let m = form.matrix();
    let image = &(b * m) * &b.transpose();
    // μ from any nonzero entry of M
    let Some((i, j)) = (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .find(|&(i, j)| !m[(i, j)].is_zero())
    else {
        return false;
    };
    let mu = &image[(i, j)] / &m[(i, j)];
    !mu.is_zero() && image == m.scale(&mu)
}

fn check_shape(form: &QForm, k: usize) -> Result<()> {
    let n = form.size();
    if k >= n {
        return Err(Error::Input(format!(
            "hyperplane coordinate {k} out of range for {n} variables"
        )));
    }
    if !form.is_nondegenerate() {
        return Err(Error::Input("Ker_H needs a nondegenerate quadric".into()));
    }
    let m = form.matrix();
    let off_block = (0..n).filter(|&i| i != k).any(|i| {
        (0..n)
            .filter(|&j| j != k && j != i)
            .any(|j| !m[(i, j)].is_zero())
    });
    if off_block {
        return Err(Error::Input(
            "unsupported form shape: entries away from the fixed coordinate must be diagonal"
                .into(),
        ));
    }
    Ok(())
}

// Variable layout: a, then r_j (row border), c_j (column border) for j ≠ k in
// increasing order, then μ.
fn layout(n: usize, k: usize) -> (Vec<usize>, usize) {
    let others: Vec<usize> = (0..n).filter(|&j| j != k).collect();
    let mu = 1 + 2 * others.len();
    (others, mu)
}

pub(super) fn bordered_system(form: &QForm, k: usize, pointwise: bool) -> Result<System> {
    check_shape(form, k)?;
    let n = form.size();
    let (others, mu) = layout(n, k);
    let nvars = mu + 1;
    let var = |i| MPoly::var(nvars, i);
    let cst = |c: Rational| MPoly::constant(nvars, c);

    let mut names = vec!["a".to_string()];
    names.extend(others.iter().map(|j| format!("r{j}")));
    names.extend(others.iter().map(|j| format!("c{j}")));
    names.push("mu".into());

    let mut b = vec![vec![MPoly::zero(nvars); n]; n];
    b[k][k] = var(0);
    for (idx, &j) in others.iter().enumerate() {
        b[k][j] = var(1 + idx);
        b[j][k] = var(1 + others.len() + idx);
        b[j][j] = cst(int(1));
    }

    let m = form.matrix();
    let mut eqs = Vec::new();
    for p in 0..n {
        for q in p..n {
            let mut lhs = MPoly::zero(nvars);
            for s in 0..n {
                for t in 0..n {
                    if !m[(s, t)].is_zero() && !b[p][s].is_zero() && !b[q][t].is_zero() {
                        lhs = lhs.add(&b[p][s].mul(&b[q][t]).scale(&m[(s, t)]));
                    }
                }
            }
            eqs.push(lhs.sub(&var(mu).scale(&m[(p, q)])));
        }
    }
    if pointwise {
        for idx in 0..others.len() {
            eqs.push(var(1 + others.len() + idx));
        }
    }
    Ok(System {
        nvars,
        names,
        eqs,
        nonzero: BTreeSet::from([0, mu]),
    })
}

pub(super) fn bordered_matrix(n: usize, k: usize, point: &[Rational]) -> Matrix {
    let (others, _) = layout(n, k);
    let mut b = Matrix::identity(n);
    b[(k, k)] = point[0].clone();
    for (idx, &j) in others.iter().enumerate() {
        b[(k, j)] = point[1 + idx].clone();
        b[(j, k)] = point[1 + others.len() + idx].clone();
    }
    b
}
