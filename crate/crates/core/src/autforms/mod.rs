//! Automorphisms of a quadric containing a hyperplane-section curve
//! `C = Q ∩ H ∩ Q'`.
//!
//! Two independent routes to finiteness:
//!
//! * [`lie_stabilizer_dim`]: the Lie algebra of `Aut(Q, C) ⊂ PGL` as the
//!   kernel of one exact linear system. Dimension zero means the identity
//!   component is trivial.
//! * [`ker_h_group`] and [`diagonal_pair_stabilizer`]: the two ends of the
//!   exact sequence `1 → Ker_H → Aut(Q, C) → Aut(H, C)`, solved as explicit
//!   finite groups.

mod analysis;
mod diagonal;
mod kernel;
mod lie;
mod solver;

pub use analysis::{analyze_pencil, AutReport, Subfamily};
pub use diagonal::{
    diagonal_pair_stabilizer, pencil_polynomial, signed_permutation_stabilizer, simdiag_check,
    trace_normalize, BruteForce,
};
pub use kernel::{is_ker_h_element, ker_h_group};
pub use lie::{lie_stabilizer_dim, lie_stabilizer_dim_with, LieConditions};

use std::collections::{BTreeSet, VecDeque};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::arith::{int, Rational};
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Quadratic form `xᵀ M x` given by its symmetric matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct QForm(Matrix);

impl QForm {
    pub fn new(matrix: Matrix) -> Result<Self> {
        if !matrix.is_symmetric() || matrix.rows() == 0 {
            return Err(Error::Input(
                "quadratic form matrix must be square and symmetric".into(),
            ));
        }
        Ok(QForm(matrix))
    }

    pub fn diagonal(entries: &[Rational]) -> Self {
        QForm(Matrix::diagonal(entries))
    }

    pub fn diagonal_ints(entries: &[i64]) -> Self {
        Self::diagonal(&entries.iter().map(|&x| int(x)).collect::<Vec<_>>())
    }

    pub fn identity(size: usize) -> Self {
        QForm(Matrix::identity(size))
    }

    /// `x_i x_j + Σ_{m ∉ {i, j}} x_m²` in `size` variables.
    pub fn hyperbolic(size: usize, i: usize, j: usize) -> Self {
        let mut m = Matrix::identity(size);
        m[(i, i)] = Rational::zero();
        m[(j, j)] = Rational::zero();
        m[(i, j)] = Rational::new(1.into(), 2.into());
        m[(j, i)] = Rational::new(1.into(), 2.into());
        QForm(m)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Number of homogeneous coordinates.
    pub fn size(&self) -> usize {
        self.0.rows()
    }

    pub fn is_nondegenerate(&self) -> bool {
        !self.0.determinant().is_zero()
    }

    /// Restriction to the span of the columns of `basis`: `Wᵀ M W`.
    pub fn restrict(&self, basis: &Matrix) -> QForm {
        QForm(&(&basis.transpose() * &self.0) * basis)
    }

    /// Coefficient of `x_i x_j` for `i ≤ j`, monomials in lex order.
    pub fn monomial_coefficients(&self) -> Vec<Rational> {
        symmetric_to_monomials(&self.0)
    }
}

pub(crate) fn monomial_count(size: usize) -> usize {
    size * (size + 1) / 2
}

/// `x_i x_j` coefficients (lex order, `i ≤ j`) of the form `xᵀ S x`.
pub(crate) fn symmetric_to_monomials(s: &Matrix) -> Vec<Rational> {
    let n = s.rows();
    let mut out = Vec::with_capacity(monomial_count(n));
    for i in 0..n {
        for j in i..n {
            out.push(if i == j {
                s[(i, i)].clone()
            } else {
                &s[(i, j)] + &s[(j, i)]
            });
        }
    }
    out
}

/// The data `(F_Q, F_H, F_Q')` cutting out `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PencilConfig {
    pub fq: QForm,
    pub fh: Vec<Rational>,
    pub fqp: QForm,
}

impl PencilConfig {
    pub fn new(fq: QForm, fh: Vec<Rational>, fqp: QForm) -> Result<Self> {
        let n = fq.size();
        if n < 2 || fqp.size() != n || fh.len() != n {
            return Err(Error::Input(format!(
                "configuration sizes disagree: F_Q {}, F_H {}, F_Q' {}",
                n,
                fh.len(),
                fqp.size()
            )));
        }
        if fh.iter().all(Zero::is_zero) {
            return Err(Error::Input("hyperplane form F_H is zero".into()));
        }
        if !fq.is_nondegenerate() {
            return Err(Error::Input("quadric F_Q is degenerate".into()));
        }
        Ok(PencilConfig { fq, fh, fqp })
    }

    /// `Q = V(Σ x_i²)`, `H = V(x_0)`, `Q' = V(2x_1² + 3x_2² + 5x_3² + 7x_4²)`.
    pub fn subfamily_a_sample() -> Self {
        Self::new(
            QForm::identity(5),
            unit_vector(5, 0),
            QForm::diagonal_ints(&[0, 2, 3, 5, 7]),
        )
        .expect("sample is valid")
    }

    /// `Q = V(x_0 x_1 + x_2² + x_3² + x_4²)`, `H = V(x_0)` tangent to `Q`,
    /// `Q' = V(x_1² + 2x_2² + 3x_3² + 5x_4²)` missing the vertex of `H ∩ Q`.
    pub fn subfamily_b_sample() -> Self {
        Self::new(
            QForm::hyperbolic(5, 0, 1),
            unit_vector(5, 0),
            QForm::diagonal_ints(&[0, 1, 2, 3, 5]),
        )
        .expect("sample is valid")
    }

    pub fn from_preset(name: &str) -> Result<Self> {
        match name {
            "subfamily-a" | "case1" => Ok(Self::subfamily_a_sample()),
            "subfamily-b" | "case2" => Ok(Self::subfamily_b_sample()),
            other => Err(Error::Input(format!("unknown pencil preset {other:?}"))),
        }
    }

    pub fn size(&self) -> usize {
        self.fq.size()
    }

    /// Same configuration in coordinates `x = U y`.
    pub fn change_coordinates(&self, u: &Matrix) -> Result<Self> {
        let fh = u.transpose().mat_vec(&self.fh);
        Self::new(self.fq.restrict(u), fh, self.fqp.restrict(u))
    }
}

pub(crate) fn unit_vector(n: usize, k: usize) -> Vec<Rational> {
    (0..n)
        .map(|i| {
            if i == k {
                Rational::one()
            } else {
                Rational::zero()
            }
        })
        .collect()
}

/// Scales `m` so that its first nonzero entry is 1.
pub fn projective_normalize(m: &Matrix) -> Matrix {
    match m.entries().iter().find(|x| !x.is_zero()) {
        Some(first) => m.scale(&(Rational::one() / first)),
        None => m.clone(),
    }
}

/// A finite subgroup of `PGL`, listed by normalized representatives.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupDescription {
    pub order: usize,
    pub elements: Vec<Matrix>,
    pub generators: Vec<Matrix>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl GroupDescription {
    /// Builds the description from representatives; duplicates modulo
    /// scalars are collapsed.
    pub fn from_elements(elements: impl IntoIterator<Item = Matrix>) -> Self {
        let mut seen = BTreeSet::new();
        let mut list = Vec::new();
        for m in elements {
            let m = projective_normalize(&m);
            if seen.insert(key(&m)) {
                list.push(m);
            }
        }
        list.sort_by_key(key);
        let generators = greedy_generators(&list);
        GroupDescription {
            order: list.len(),
            elements: list,
            generators,
            notes: Vec::new(),
        }
    }

    pub fn contains(&self, m: &Matrix) -> bool {
        let k = key(&projective_normalize(m));
        self.elements.iter().any(|e| key(e) == k)
    }

    /// Identity, inverses and closure under products, all modulo scalars.
    pub fn check_group_axioms(&self) -> Result<()> {
        let Some(first) = self.elements.first() else {
            return Err(Error::Regime("empty group description".into()));
        };
        let id = Matrix::identity(first.rows());
        if !self.contains(&id) {
            return Err(Error::Regime("identity missing from group".into()));
        }
        for a in &self.elements {
            if !self
                .elements
                .iter()
                .any(|b| projective_normalize(&(a * b)) == id)
            {
                return Err(Error::Regime(
                    "an element has no inverse in the group".into(),
                ));
            }
            for b in &self.elements {
                if !self.contains(&(a * b)) {
                    return Err(Error::Regime("group is not closed under products".into()));
                }
            }
        }
        Ok(())
    }
}

fn key(m: &Matrix) -> Vec<Rational> {
    m.entries().to_vec()
}

fn closure(gens: &[Matrix], size: usize) -> BTreeSet<Vec<Rational>> {
    let id = Matrix::identity(size);
    let mut seen = BTreeSet::from([key(&id)]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = projective_normalize(&(&x * g));
            if seen.insert(key(&y)) {
                queue.push_back(y);
            }
        }
    }
    seen
}

fn greedy_generators(elements: &[Matrix]) -> Vec<Matrix> {
    let Some(first) = elements.first() else {
        return Vec::new();
    };
    let size = first.rows();
    let mut gens: Vec<Matrix> = Vec::new();
    let mut generated = closure(&gens, size);
    for e in elements {
        if !generated.contains(&key(e)) {
            gens.push(e.clone());
            generated = closure(&gens, size);
        }
    }
    gens
}
