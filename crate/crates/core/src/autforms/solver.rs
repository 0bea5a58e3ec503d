//! Branching solver for the small polynomial systems that describe
//! stabilizers of quadrics fixing a hyperplane.
//!
//! It knows exactly three moves: solve a univariate equation over `Q`,
//! split a single-monomial equation `c·u·v⋯ = 0` into the branches
//! `u = 0`, `v = 0`, …, and eliminate a variable that appears linearly with
//! a constant coefficient. A branch that still has undetermined variables
//! once its equations are exhausted is a positive-dimensional family.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Zero};

use crate::arith::{format_rational, rational_sqrt, Poly, Rational};
use crate::error::{Error, Result};

type Exponents = Vec<u32>;

/// Sparse multivariate polynomial over `Q` in a fixed number of variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MPoly {
    nvars: usize,
    terms: BTreeMap<Exponents, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = Self::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        MPoly {
            nvars,
            terms: BTreeMap::from([(e, Rational::one())]),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, e: Exponents, c: Rational) {
        let slot = self.terms.entry(e.clone()).or_insert_with(Rational::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.is_zero() {
            return Self::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Exponents = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&vec![0; self.nvars]).cloned(),
            _ => None,
        }
    }

    pub fn vars(&self) -> BTreeSet<usize> {
        self.terms
            .keys()
            .flat_map(|e| e.iter().enumerate().filter(|(_, &k)| k > 0).map(|(i, _)| i))
            .collect()
    }

    /// Replaces variable `v` by `value`.
    pub fn substitute(&self, v: usize, value: &MPoly) -> MPoly {
        let mut out = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            let k = e[v];
            let mut rest = e.clone();
            rest[v] = 0;
            let mut term = MPoly {
                nvars: self.nvars,
                terms: BTreeMap::from([(rest, c.clone())]),
            };
            for _ in 0..k {
                term = term.mul(value);
            }
            out = out.add(&term);
        }
        out
    }

    pub fn eval(&self, values: &[Rational]) -> Rational {
        self.terms
            .iter()
            .map(|(e, c)| {
                e.iter().zip(values).fold(c.clone(), |acc, (&k, x)| {
                    acc * num_traits::pow(x.clone(), k as usize)
                })
            })
            .sum()
    }

    /// `(v, p)` when exactly one variable occurs.
    fn as_univariate(&self) -> Option<(usize, Poly)> {
        let vars = self.vars();
        if vars.len() != 1 {
            return None;
        }
        let v = *vars.iter().next()?;
        let deg = self.terms.keys().map(|e| e[v] as usize).max()?;
        let mut coeffs = vec![Rational::zero(); deg + 1];
        for (e, c) in &self.terms {
            coeffs[e[v] as usize] += c;
        }
        Some((v, Poly::from_coeffs(coeffs)))
    }

    /// Variables of a single-term equation.
    fn as_monomial(&self) -> Option<BTreeSet<usize>> {
        (self.terms.len() == 1).then(|| self.vars())
    }

    /// `(c, rest)` with `self = c·v + rest`, `c` a nonzero constant and `v`
    /// absent from `rest`.
    fn linear_in(&self, v: usize) -> Option<(Rational, MPoly)> {
        let mut coeff = None;
        let mut rest = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            match e[v] {
                0 => rest.add_term(e.clone(), c.clone()),
                1 if e.iter().sum::<u32>() == 1 => coeff = Some(c.clone()),
                _ => return None,
            }
        }
        coeff.map(|c| (c, rest))
    }
}

/// A system `eqs = 0` with some variables required to be nonzero.
#[derive(Clone, Debug)]
pub(crate) struct System {
    pub nvars: usize,
    pub names: Vec<String>,
    pub eqs: Vec<MPoly>,
    pub nonzero: BTreeSet<usize>,
}

#[derive(Debug, Default)]
pub(crate) struct Solutions {
    pub points: Vec<Vec<Rational>>,
    pub notes: Vec<String>,
}

impl System {
    pub fn solve(&self) -> Result<Solutions> {
        let mut out = Solutions::default();
        let assigned = vec![None; self.nvars];
        self.explore(self.eqs.clone(), assigned, Vec::new(), &mut out)?;
        out.points.sort();
        out.points.dedup();
        out.notes.sort();
        out.notes.dedup();
        Ok(out)
    }

    fn explore(
        &self,
        eqs: Vec<MPoly>,
        assigned: Vec<Option<Rational>>,
        eliminated: Vec<(usize, MPoly)>,
        out: &mut Solutions,
    ) -> Result<()> {
        let mut live = Vec::with_capacity(eqs.len());
        for eq in eqs {
            match eq.as_constant() {
                Some(c) if c.is_zero() => {}
                Some(_) => return Ok(()),
                None => live.push(eq),
            }
        }
        if live.is_empty() {
            return self.finish(assigned, eliminated, out);
        }

        if let Some((v, p)) = live.iter().find_map(MPoly::as_univariate) {
            for root in self.rational_roots(v, &p, out)? {
                self.branch(&live, &assigned, &eliminated, v, root, out)?;
            }
            return Ok(());
        }

        if let Some(vars) = live.iter().find_map(MPoly::as_monomial) {
            for v in vars {
                self.branch(&live, &assigned, &eliminated, v, Rational::zero(), out)?;
            }
            return Ok(());
        }

        for (idx, eq) in live.iter().enumerate() {
            for v in eq.vars() {
                if let Some((c, rest)) = eq.linear_in(v) {
                    let expr = rest.scale(&(-Rational::one() / c));
                    let next: Vec<MPoly> = live
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != idx)
                        .map(|(_, e)| e.substitute(v, &expr))
                        .collect();
                    let mut elim = eliminated.clone();
                    elim.push((v, expr));
                    return self.explore(next, assigned, elim, out);
                }
            }
        }

        Err(Error::Regime(format!(
            "equation shape outside the branching solver's support ({} equations left)",
            live.len()
        )))
    }

    fn branch(
        &self,
        eqs: &[MPoly],
        assigned: &[Option<Rational>],
        eliminated: &[(usize, MPoly)],
        v: usize,
        value: Rational,
        out: &mut Solutions,
    ) -> Result<()> {
        if value.is_zero() && self.nonzero.contains(&v) {
            return Ok(());
        }
        let c = MPoly::constant(self.nvars, value.clone());
        let next = eqs.iter().map(|e| e.substitute(v, &c)).collect();
        let mut assigned = assigned.to_vec();
        assigned[v] = Some(value);
        self.explore(next, assigned, eliminated.to_vec(), out)
    }

    fn rational_roots(&self, v: usize, p: &Poly, out: &mut Solutions) -> Result<Vec<Rational>> {
        let c = |k: usize| p.coeff(k);
        match p.degree() {
            Some(1) => Ok(vec![-c(0) / c(1)]),
            Some(2) => {
                let disc = c(1) * c(1) - Rational::from_integer(4.into()) * c(2) * c(0);
                match rational_sqrt(&disc) {
                    Some(s) => {
                        let two_a = c(2) * Rational::from_integer(2.into());
                        let mut roots = vec![(-c(1) + &s) / &two_a, (-c(1) - s) / two_a];
                        roots.dedup();
                        Ok(roots)
                    }
                    None => {
                        out.notes.push(format!(
                            "branch discarded: {} = 0 has no rational solution for {}",
                            p, self.names[v]
                        ));
                        Ok(vec![])
                    }
                }
            }
            d => Err(Error::Regime(format!(
                "univariate equation of degree {:?} in {} is outside the solver's support",
                d, self.names[v]
            ))),
        }
    }

    fn finish(
        &self,
        mut assigned: Vec<Option<Rational>>,
        eliminated: Vec<(usize, MPoly)>,
        out: &mut Solutions,
    ) -> Result<()> {
        let elim_vars: BTreeSet<usize> = eliminated.iter().map(|(v, _)| *v).collect();
        if let Some(free) =
            (0..self.nvars).find(|i| assigned[*i].is_none() && !elim_vars.contains(i))
        {
            return Err(Error::InfiniteStabilizer(format!(
                "{} is a free parameter of the solution set",
                self.names[free]
            )));
        }
        for (v, expr) in eliminated.iter().rev() {
            if let Some(free) = expr.vars().into_iter().find(|i| assigned[*i].is_none()) {
                return Err(Error::InfiniteStabilizer(format!(
                    "{} depends on the free parameter {}",
                    self.names[*v], self.names[free]
                )));
            }
            let values: Vec<Rational> = assigned
                .iter()
                .map(|x| x.clone().unwrap_or_default())
                .collect();
            assigned[*v] = Some(expr.eval(&values));
        }
        let point: Vec<Rational> = assigned.into_iter().map(Option::unwrap).collect();
        if self.nonzero.iter().any(|&i| point[i].is_zero()) {
            return Ok(());
        }
        if let Some(bad) = self.eqs.iter().find(|e| !e.eval(&point).is_zero()) {
            return Err(Error::Regime(format!(
                "solver produced a non-solution (residual {})",
                format_rational(&bad.eval(&point))
            )));
        }
        out.points.push(point);
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::int;

    fn v(n: usize, i: usize) -> MPoly {
        MPoly::var(n, i)
    }

    fn k(n: usize, c: i64) -> MPoly {
        MPoly::constant(n, int(c))
    }

    fn system(n: usize, eqs: Vec<MPoly>) -> System {
        System {
            nvars: n,
            names: (0..n).map(|i| format!("u{i}")).collect(),
            eqs,
            nonzero: BTreeSet::new(),
        }
    }

    #[test]
    fn univariate_quadratic() {
        // u0^2 = 4
        let s = system(1, vec![v(1, 0).mul(&v(1, 0)).sub(&k(1, 4))]);
        let sol = s.solve().unwrap();
        assert_eq!(sol.points, vec![vec![int(-2)], vec![int(2)]]);
    }

    #[test]
    fn irrational_branch_is_dropped_with_note() {
        let s = system(1, vec![v(1, 0).mul(&v(1, 0)).sub(&k(1, 2))]);
        let sol = s.solve().unwrap();
        assert!(sol.points.is_empty());
        assert_eq!(sol.notes.len(), 1);
    }

    #[test]
    fn products_split_into_branches() {
        // u0·u1 = 0, u0 + u1 = 1
        let s = system(
            2,
            vec![v(2, 0).mul(&v(2, 1)), v(2, 0).add(&v(2, 1)).sub(&k(2, 1))],
        );
        let sol = s.solve().unwrap();
        assert_eq!(sol.points, vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
    }

    #[test]
    fn linear_elimination_back_substitutes() {
        // u1 = -u0·u2 ; u2 = 3 ; u0^2 = 1
        let n = 3;
        let s = system(
            n,
            vec![
                v(n, 0).mul(&v(n, 2)).add(&v(n, 1)),
                v(n, 2).sub(&k(n, 3)),
                v(n, 0).mul(&v(n, 0)).sub(&k(n, 1)),
            ],
        );
        let sol = s.solve().unwrap();
        assert_eq!(
            sol.points,
            vec![vec![int(-1), int(3), int(3)], vec![int(1), int(-3), int(3)]]
        );
    }

    #[test]
    fn free_parameter_is_reported() {
        let s = system(2, vec![v(2, 0).sub(&k(2, 1))]);
        assert!(matches!(s.solve(), Err(Error::InfiniteStabilizer(_))));
    }

    #[test]
    fn nonzero_constraint_prunes() {
        let mut s = system(2, vec![v(2, 0).mul(&v(2, 1)), v(2, 1).sub(&k(2, 5))]);
        s.nonzero.insert(1);
        let sol = s.solve().unwrap();
        assert_eq!(sol.points, vec![vec![int(0), int(5)]]);
    }

    #[test]
    fn substitution_and_evaluation() {
        let n = 2;
        // (u0 + 1)^2 with u0 := u1 - 1 gives u1^2
        let p = v(n, 0).add(&k(n, 1));
        let sq = p.mul(&p).substitute(0, &v(n, 1).sub(&k(n, 1)));
        assert_eq!(sq, v(n, 1).mul(&v(n, 1)));
        assert_eq!(sq.eval(&[int(0), int(-3)]), int(9));
    }
}
