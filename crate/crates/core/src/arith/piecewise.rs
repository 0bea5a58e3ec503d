use num_traits::Zero;
use serde::Serialize;

use super::{format_rational, Poly, Rational};
use crate::error::{Error, Result};

/// Piecewise polynomial on `[t_0, t_k]`. Piece `i` is valid on the closed
/// interval `[t_i, t_{i+1}]`, and adjacent pieces agree at the shared
/// breakpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiecewisePoly {
    breakpoints: Vec<Rational>,
    pieces: Vec<Poly>,
}

impl PiecewisePoly {
    pub fn new(breakpoints: Vec<Rational>, pieces: Vec<Poly>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::Input(
                "piecewise polynomial needs at least one breakpoint".into(),
            ));
        }
        if pieces.len() + 1 != breakpoints.len() {
            return Err(Error::Input(format!(
                "{} breakpoints cannot carry {} pieces",
                breakpoints.len(),
                pieces.len()
            )));
        }
        if let Some(w) = breakpoints.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Input(format!(
                "breakpoints not strictly increasing at {} >= {}",
                format_rational(&w[0]),
                format_rational(&w[1])
            )));
        }
        for (i, pair) in pieces.windows(2).enumerate() {
            let t = &breakpoints[i + 1];
            let (left, right) = (pair[0].eval(t), pair[1].eval(t));
            if left != right {
                return Err(Error::Input(format!(
                    "pieces disagree at t = {}: {} vs {}",
                    format_rational(t),
                    format_rational(&left),
                    format_rational(&right)
                )));
            }
        }
        Ok(PiecewisePoly {
            breakpoints,
            pieces,
        })
    }

    pub fn single(a: Rational, b: Rational, p: Poly) -> Result<Self> {
        Self::new(vec![a, b], vec![p])
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn pieces(&self) -> &[Poly] {
        &self.pieces
    }

    pub fn start(&self) -> &Rational {
        &self.breakpoints[0]
    }

    pub fn end(&self) -> &Rational {
        self.breakpoints.last().expect("nonempty by construction")
    }

    /// `(a, b, piece)` triples.
    pub fn intervals(&self) -> impl Iterator<Item = (&Rational, &Rational, &Poly)> {
        self.breakpoints
            .windows(2)
            .zip(&self.pieces)
            .map(|(w, p)| (&w[0], &w[1], p))
    }

    /// Value at `t`, or `None` outside the domain. A one-point domain with
    /// no pieces evaluates to zero at its point.
    pub fn eval(&self, t: &Rational) -> Option<Rational> {
        if t < self.start() || t > self.end() {
            return None;
        }
        match self.intervals().find(|(_, b, _)| t <= *b) {
            Some((_, _, p)) => Some(p.eval(t)),
            None => Some(Rational::zero()),
        }
    }

    /// Exact integral over the whole domain.
    pub fn integrate(&self) -> Rational {
        self.intervals()
            .map(|(a, b, p)| p.integrate(a, b).expect("breakpoints are increasing"))
            .sum()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        PiecewisePoly {
            breakpoints: self.breakpoints.clone(),
            pieces: self.pieces.iter().map(|p| p.scale(c)).collect(),
        }
    }
}

/// Wire form: breakpoints and coefficient lists (constant term first) as
/// exact strings.
impl Serialize for PiecewisePoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            breakpoints: Vec<String>,
            pieces: Vec<Vec<String>>,
        }
        Wire {
            breakpoints: self.breakpoints.iter().map(format_rational).collect(),
            pieces: self
                .pieces
                .iter()
                .map(|p| p.coeffs().iter().map(format_rational).collect())
                .collect(),
        }
        .serialize(s)
    }
}
