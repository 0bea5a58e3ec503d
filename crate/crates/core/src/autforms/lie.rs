use crate::arith::Rational;
use crate::linalg::Matrix;

use super::{monomial_count, symmetric_to_monomials, PencilConfig};

/// Which preservation conditions enter the linear system.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LieConditions {
    /// `D_X(F_H) ∈ span{F_H}`.
    pub hyperplane: bool,
    /// `D_X(F_Q) ∈ span{F_Q}`.
    pub quadric: bool,
    /// `D_X(F_Q') ∈ span{F_Q, F_Q'} + F_H·(linear forms)`.
    pub pencil: bool,
}

impl LieConditions {
    pub const ALL: Self = LieConditions {
        hyperplane: true,
        quadric: true,
        pencil: true,
    };
    pub const NONE: Self = LieConditions {
        hyperplane: false,
        quadric: false,
        pencil: false,
    };
    pub const QUADRIC_ONLY: Self = LieConditions {
        hyperplane: false,
        quadric: true,
        pencil: false,
    };
}

/// Dimension of the Lie algebra of `Aut(Q, C)` inside `pgl`.
pub fn lie_stabilizer_dim(config: &PencilConfig) -> usize {
    lie_stabilizer_dim_with(config, LieConditions::ALL)
}

/// Unknowns, in order: the `n²` entries of `X` (row-major), then the
/// multipliers `α` (for `F_H`), `β` (for `F_Q`), `γ, δ` (for `F_Q, F_Q'` in
/// the pencil condition) and the `n` coefficients of the linear form `ℓ`.
/// `X` acts by `x ↦ x + εXx`, so `D_X(xᵀMx) = xᵀ(XᵀM + MX)x` and
/// `D_X(hᵀx) = (Xᵀh)ᵀx`.
pub fn lie_stabilizer_dim_with(config: &PencilConfig, conditions: LieConditions) -> usize {
    let n = config.size();
    let nx = n * n;
    let (alpha, beta, gamma, delta, ell) = (nx, nx + 1, nx + 2, nx + 3, nx + 4);
    let unknowns = nx + 4 + n;
    let mut rows: Vec<Vec<Rational>> = Vec::new();

    let unit = |p: usize, q: usize| {
        let mut e = Matrix::zeros(n, n);
        e[(p, q)] = Rational::from_integer(1.into());
        e
    };
    let derivation = |m: &Matrix, x: &Matrix| (&x.transpose() * m).add(&(m * x));

    if conditions.hyperplane {
        let h = &config.fh;
        for j in 0..n {
            let mut row = vec![Rational::default(); unknowns];
            // (Xᵀh)_j = Σ_p X_{pj} h_p
            for (p, hp) in h.iter().enumerate() {
                row[p * n + j] = hp.clone();
            }
            row[alpha] = -h[j].clone();
            rows.push(row);
        }
    }

    let quadratic_block =
        |m: &Matrix, rows: &mut Vec<Vec<Rational>>, extra: &dyn Fn(usize, &mut Vec<Rational>)| {
            let k = monomial_count(n);
            let mut block = vec![vec![Rational::default(); unknowns]; k];
            for p in 0..n {
                for q in 0..n {
                    let coeffs = symmetric_to_monomials(&derivation(m, &unit(p, q)));
                    for (r, c) in coeffs.into_iter().enumerate() {
                        block[r][p * n + q] = c;
                    }
                }
            }
            for (r, row) in block.iter_mut().enumerate() {
                extra(r, row);
            }
            rows.extend(block);
        };

    if conditions.quadric {
        let fq = symmetric_to_monomials(config.fq.matrix());
        quadratic_block(config.fq.matrix(), &mut rows, &|r, row| {
            row[beta] = -fq[r].clone()
        });
    }

    if conditions.pencil {
        let fq = symmetric_to_monomials(config.fq.matrix());
        let fqp = symmetric_to_monomials(config.fqp.matrix());
        // F_H·x_m as a symmetric matrix, one per m
        let h_times: Vec<Vec<Rational>> = (0..n)
            .map(|m| {
                let mut s = Matrix::zeros(n, n);
                for (i, hi) in config.fh.iter().enumerate() {
                    let half = hi / Rational::from_integer(2.into());
                    s[(i, m)] += &half;
                    s[(m, i)] += &half;
                }
                symmetric_to_monomials(&s)
            })
            .collect();
        quadratic_block(config.fqp.matrix(), &mut rows, &|r, row| {
            row[gamma] = -fq[r].clone();
            row[delta] = -fqp[r].clone();
            for m in 0..n {
                row[ell + m] = -h_times[m][r].clone();
            }
        });
    }

    let system = if rows.is_empty() {
        Matrix::zeros(0, unknowns)
    } else {
        Matrix::from_rows(rows)
    };
    let kernel = system.kernel();
    if kernel.is_empty() {
        return 0;
    }
    // Different multipliers may accompany the same X; count distinct X only.
    let projected = Matrix::from_rows(kernel.into_iter().map(|v| v[..nx].to_vec()).collect());
    // the scalar matrices always lie in the kernel and act trivially on P^n
    projected.rank().saturating_sub(1)
}
