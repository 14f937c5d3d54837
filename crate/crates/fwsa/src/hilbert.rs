//! Multivariate Hilbert series of modules and rational-function fitting.
//!
//! The series of a module has one variable t_a per group element; the
//! coefficient at a multidegree f: A -> N is the dimension of the module at
//! the canonical object with f(a) points labeled a, optionally weighted by
//! the multinomial coefficient |f|!/prod_a f(a)!. Modules over the
//! label-free categories get a single variable.
//!
//! Fitting expresses a truncated series as numerator / prod (1 - c t_a)
//! with scales c drawn from a finite candidate list. Per variable, the
//! minimal linear recurrence satisfied by the top coefficient window of
//! every fiber is found by exact linear solves; candidate factors are
//! peeled off the recurrence by synthetic division, and each accepted
//! factor multiplies the series, shortening the tail the recurrence
//! explains. A fit is returned only when the reduced series is a
//! polynomial with at least the requested number of zero coefficient bands
//! at the top, and every returned fit re-expands to the input exactly.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::category::LabeledSet;
use crate::cyclo::{rational_string, Cyclo};
use crate::group::FiniteAbelianGroup;
use crate::linalg::{ExactMatrix, SparseVec};
use crate::module::Module;
use crate::{Error, Result};

/// A truncated multivariate power series with exact coefficients. Only
/// nonzero coefficients are stored; every key has one entry per variable and
/// total degree at most the truncation.
#[derive(Clone, Debug, PartialEq)]
pub struct RationalSeries {
    variables: usize,
    truncation: usize,
    weighted: bool,
    exponent: u64,
    coeffs: BTreeMap<Vec<usize>, Cyclo>,
}

fn add_term(coeffs: &mut BTreeMap<Vec<usize>, Cyclo>, key: Vec<usize>, value: Cyclo) {
    if value.is_zero() {
        return;
    }
    match coeffs.get_mut(&key) {
        Some(cur) => {
            *cur = cur.try_add(&value).expect("series coefficients share a field");
            if cur.is_zero() {
                coeffs.remove(&key);
            }
        }
        None => {
            coeffs.insert(key, value);
        }
    }
}

impl RationalSeries {
    pub fn new(variables: usize, truncation: usize, weighted: bool, exponent: u64) -> Self {
        Self {
            variables,
            truncation,
            weighted,
            exponent,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn variables(&self) -> usize {
        self.variables
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn weighted(&self) -> bool {
        self.weighted
    }

    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coefficient(&self, f: &[usize]) -> Cyclo {
        assert_eq!(f.len(), self.variables, "multidegree arity mismatch");
        self.coeffs
            .get(f)
            .cloned()
            .unwrap_or_else(|| Cyclo::zero(self.exponent))
    }

    pub fn set_coefficient(&mut self, f: Vec<usize>, value: Cyclo) {
        assert_eq!(f.len(), self.variables, "multidegree arity mismatch");
        assert!(f.iter().sum::<usize>() <= self.truncation, "beyond truncation");
        assert_eq!(value.exponent(), self.exponent, "field mismatch");
        self.coeffs.remove(&f);
        add_term(&mut self.coeffs, f, value);
    }

    /// Nonzero coefficients ordered by total degree, then lexicographically.
    pub fn ordered_entries(&self) -> Vec<(&Vec<usize>, &Cyclo)> {
        let mut out: Vec<_> = self.coeffs.iter().collect();
        out.sort_by_key(|(f, _)| (f.iter().sum::<usize>(), (*f).clone()));
        out
    }

    /// Largest total degree carrying a nonzero coefficient.
    pub fn max_total_degree(&self) -> Option<usize> {
        self.coeffs.keys().map(|f| f.iter().sum()).max()
    }

    pub fn embed(&self, e: u64) -> Result<Self> {
        if e == self.exponent {
            return Ok(self.clone());
        }
        let mut coeffs = BTreeMap::new();
        for (f, c) in &self.coeffs {
            coeffs.insert(f.clone(), c.embed(e)?);
        }
        Ok(Self {
            variables: self.variables,
            truncation: self.truncation,
            weighted: self.weighted,
            exponent: e,
            coeffs,
        })
    }

    /// The truncated product with (1 - c t_a).
    pub fn mul_factor(&self, factor: &LinearFactor) -> Result<Self> {
        if factor.variable >= self.variables {
            return Err(Error::Validation(format!(
                "factor variable {} out of range",
                factor.variable
            )));
        }
        let e = self.exponent.lcm(&factor.scale.exponent());
        let scale = factor.scale.embed(e)?;
        let mut coeffs = BTreeMap::new();
        for (f, c) in &self.coeffs {
            let c = c.embed(e)?;
            add_term(&mut coeffs, f.clone(), c.clone());
            if f.iter().sum::<usize>() < self.truncation {
                let mut g = f.clone();
                g[factor.variable] += 1;
                add_term(&mut coeffs, g, scale.try_mul(&c)?.neg());
            }
        }
        Ok(Self {
            variables: self.variables,
            truncation: self.truncation,
            weighted: self.weighted,
            exponent: e,
            coeffs,
        })
    }

    /// The truncated quotient by (1 - c t_a), the exact inverse of
    /// [`mul_factor`] on the truncation window.
    pub fn div_factor(&self, factor: &LinearFactor) -> Result<Self> {
        if factor.variable >= self.variables {
            return Err(Error::Validation(format!(
                "factor variable {} out of range",
                factor.variable
            )));
        }
        let e = self.exponent.lcm(&factor.scale.exponent());
        let scale = factor.scale.embed(e)?;
        let mut coeffs = BTreeMap::new();
        for (f, c) in &self.coeffs {
            coeffs.insert(f.clone(), c.embed(e)?);
        }
        // out(f) = in(f) + c * out(f - e_a): sweep a-levels upward so the
        // feeding entry is final before it propagates.
        for level in 0..self.truncation {
            let keys: Vec<Vec<usize>> = coeffs
                .keys()
                .filter(|f| f[factor.variable] == level && f.iter().sum::<usize>() < self.truncation)
                .cloned()
                .collect();
            for f in keys {
                let val = coeffs.get(&f).cloned().expect("key just collected");
                let mut g = f;
                g[factor.variable] += 1;
                add_term(&mut coeffs, g, scale.try_mul(&val)?);
            }
        }
        Ok(Self {
            variables: self.variables,
            truncation: self.truncation,
            weighted: self.weighted,
            exponent: e,
            coeffs,
        })
    }

    /// Substitutes t_a := t for every variable.
    pub fn specialize_univariate(&self) -> Self {
        let mut coeffs = BTreeMap::new();
        for (f, c) in &self.coeffs {
            add_term(&mut coeffs, vec![f.iter().sum()], c.clone());
        }
        Self {
            variables: 1,
            truncation: self.truncation,
            weighted: self.weighted,
            exponent: self.exponent,
            coeffs,
        }
    }

    /// Converts between the plain and multinomial-weighted conventions:
    /// weighted coefficient = plain coefficient times |f|!/prod_a f(a)!.
    pub fn with_weighting(&self, weighted: bool) -> Self {
        if weighted == self.weighted {
            return self.clone();
        }
        let mut coeffs = BTreeMap::new();
        for (f, c) in &self.coeffs {
            let w = multinomial(f);
            let scaled = if weighted {
                c.scale(&w)
            } else {
                c.scale(&w.recip())
            };
            add_term(&mut coeffs, f.clone(), scaled);
        }
        Self {
            variables: self.variables,
            truncation: self.truncation,
            weighted,
            exponent: self.exponent,
            coeffs,
        }
    }

    pub fn report(&self) -> SeriesReport {
        let mut coefficients = Vec::new();
        for (f, c) in self.ordered_entries() {
            coefficients.push((degree_key(f), c.to_string()));
        }
        SeriesReport {
            variables: self.variables,
            truncation: self.truncation,
            weighted: self.weighted,
            coefficients,
        }
    }
}

fn degree_key(f: &[usize]) -> String {
    f.iter()
        .map(|d| d.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// |f|! / prod_a f(a)!.
fn multinomial(f: &[usize]) -> BigRational {
    let numer = factorial(f.iter().sum());
    let denom = f.iter().fold(BigInt::one(), |acc, &d| acc * factorial(d));
    BigRational::new(numer, denom)
}

/// All vectors of the given length with the given coordinate sum, first
/// coordinate ascending.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Serializable view of a truncated series: multidegree string to exact
/// coefficient string, ordered by total degree.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesReport {
    pub variables: usize,
    pub truncation: usize,
    pub weighted: bool,
    pub coefficients: Vec<(String, String)>,
}

/// The dimension series of a module through the given total degree, one
/// variable per group element (a single variable over the label-free
/// categories).
pub fn truncated_series(m: &Module, truncation: usize, weighted: bool) -> RationalSeries {
    let zero_labeled = m.category().tag().zero_labeled();
    let variables = if zero_labeled {
        1
    } else {
        m.group().order()
    };
    let mut series = RationalSeries::new(variables, truncation, weighted, 1);
    for total in 0..=truncation {
        for f in compositions(total, variables) {
            let object = if zero_labeled {
                LabeledSet::zero(total)
            } else {
                let mut labels = Vec::with_capacity(total);
                for (a, &count) in f.iter().enumerate() {
                    labels.extend(std::iter::repeat(a).take(count));
                }
                LabeledSet::new(labels)
            };
            let dim = m.dim(&object);
            if dim == 0 {
                continue;
            }
            let mut value = BigRational::from_integer(BigInt::from(dim));
            if weighted {
                value *= multinomial(&f);
            }
            series.set_coefficient(f, Cyclo::from_rational(1, value));
        }
    }
    series
}

/// The linear factor 1 - scale * t_variable.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearFactor {
    pub variable: usize,
    pub scale: Cyclo,
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.variable;
        match self.scale.to_rational() {
            Some(q) if q.is_one() => write!(f, "1-t{v}"),
            Some(q) if (-q.clone()).is_one() => write!(f, "1+t{v}"),
            Some(q) if q.is_negative() => write!(f, "1+{}t{v}", rational_string(&-q)),
            Some(q) => write!(f, "1-{}t{v}", rational_string(&q)),
            None => write!(f, "1-({})t{v}", self.scale),
        }
    }
}

/// The default candidate scales: for every variable a, both signs of
/// (j/|A|) zeta with zeta ranging over the ord(a)-th roots of unity and
/// 1 <= j <= max_scale, deduplicated.
pub fn default_candidates(group: &FiniteAbelianGroup, max_scale: usize) -> Vec<LinearFactor> {
    let e = group.exponent();
    let order = group.order();
    let mut out: Vec<LinearFactor> = Vec::new();
    for a in 0..order {
        let ord = group.order_of(a);
        for m in 0..ord {
            let zeta = Cyclo::zeta_pow(e, (e / ord) * m);
            for j in 1..=max_scale {
                let base = zeta.scale(&BigRational::new(BigInt::from(j), BigInt::from(order)));
                for scale in [base.clone(), base.neg()] {
                    if !out.iter().any(|f| f.variable == a && f.scale == scale) {
                        out.push(LinearFactor { variable: a, scale });
                    }
                }
            }
        }
    }
    out
}

/// A successful factorization of a truncated series.
#[derive(Clone, Debug)]
pub struct FittedRational {
    /// The fully reduced series; a polynomial whose degree leaves the
    /// verified guard band free.
    pub numerator: RationalSeries,
    pub factors: Vec<LinearFactor>,
    /// Zero coefficient bands verified above the numerator degree.
    pub verified_guard: usize,
}

impl FittedRational {
    /// Re-expands numerator / prod factors through the truncation.
    pub fn expand(&self) -> Result<RationalSeries> {
        let mut out = self.numerator.clone();
        for f in &self.factors {
            out = out.div_factor(f)?;
        }
        Ok(out)
    }

    /// Substitutes t_a := t in the numerator and every factor.
    pub fn specialize_univariate(&self) -> Self {
        Self {
            numerator: self.numerator.specialize_univariate(),
            factors: self
                .factors
                .iter()
                .map(|f| LinearFactor {
                    variable: 0,
                    scale: f.scale.clone(),
                })
                .collect(),
            verified_guard: self.verified_guard,
        }
    }
}

/// Outcome of a fit: a verified factorization, or the residual series after
/// the accepted factors when no complete factorization was found.
#[derive(Clone, Debug)]
pub enum FitOutcome {
    Fitted(FittedRational),
    NoFit { residual: RationalSeries },
}

impl FitOutcome {
    pub fn fitted(&self) -> Option<&FittedRational> {
        match self {
            FitOutcome::Fitted(f) => Some(f),
            FitOutcome::NoFit { .. } => None,
        }
    }

    pub fn report(&self) -> FitReport {
        match self {
            FitOutcome::Fitted(fit) => FitReport {
                fitted: true,
                factors: fit.factors.iter().map(|f| f.to_string()).collect(),
                numerator: fit
                    .numerator
                    .ordered_entries()
                    .into_iter()
                    .map(|(f, c)| (degree_key(f), c.to_string()))
                    .collect(),
                verified_guard: Some(fit.verified_guard),
                residual: None,
            },
            FitOutcome::NoFit { residual } => FitReport {
                fitted: false,
                factors: Vec::new(),
                numerator: Vec::new(),
                verified_guard: None,
                residual: Some(
                    residual
                        .ordered_entries()
                        .into_iter()
                        .map(|(f, c)| (degree_key(f), c.to_string()))
                        .collect(),
                ),
            },
        }
    }
}

/// Serializable view of a fit outcome.
#[derive(Clone, Debug, Serialize)]
pub struct FitReport {
    pub fitted: bool,
    pub factors: Vec<String>,
    pub numerator: Vec<(String, String)>,
    pub verified_guard: Option<usize>,
    pub residual: Option<Vec<(String, String)>>,
}

/// Minimal monic recurrence 1 + d_1 t + ... + d_r t^r annihilating the top
/// window of every fiber along the variable, searched from r_min upward.
/// The window covers the top r + guard entries of each fiber, restricted to
/// positions where the recurrence has full history.
fn minimal_annihilator(
    s: &RationalSeries,
    variable: usize,
    guard: usize,
    r_min: usize,
    r_cap: usize,
) -> Option<(usize, Vec<Cyclo>)> {
    let e = s.exponent;
    let mut fibers: BTreeMap<Vec<usize>, Vec<Cyclo>> = BTreeMap::new();
    for (f, c) in &s.coeffs {
        let mut g = f.clone();
        let k = g[variable];
        g[variable] = 0;
        let cap = s.truncation - g.iter().sum::<usize>();
        let fiber = fibers
            .entry(g)
            .or_insert_with(|| vec![Cyclo::zero(e); cap + 1]);
        fiber[k] = c.clone();
    }
    for r in r_min..=r_cap {
        let window = r + guard;
        let mut rows: Vec<Vec<Cyclo>> = Vec::new();
        let mut rhs: Vec<Cyclo> = Vec::new();
        for fiber in fibers.values() {
            let top = fiber.len() - 1;
            let lo = r.max((top + 1).saturating_sub(window));
            for k in lo..=top {
                let row: Vec<Cyclo> = (1..=r).map(|i| fiber[k - i].clone()).collect();
                if fiber[k].is_zero() && row.iter().all(|v| v.is_zero()) {
                    continue;
                }
                rows.push(row);
                rhs.push(fiber[k].neg());
            }
        }
        if r == 0 {
            if rhs.iter().all(|v| v.is_zero()) {
                return Some((0, vec![Cyclo::one(e)]));
            }
            continue;
        }
        let mat = ExactMatrix::from_dense(&rows, e);
        let b: SparseVec = rhs
            .into_iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .collect();
        if let Some(d) = mat.solve(&b) {
            let mut poly = vec![Cyclo::one(e)];
            poly.extend(d);
            return Some((r, poly));
        }
    }
    None
}

/// Divides candidate factors out of the recurrence by synthetic division:
/// (1 - c t) divides the polynomial exactly when the final carry vanishes.
/// Each accepted factor strictly shortens the recurrence.
fn peel_factors(
    poly: &[Cyclo],
    variable: usize,
    candidates: &[LinearFactor],
    used: &mut [usize],
    max_multiplicity: usize,
) -> Vec<LinearFactor> {
    let mut q = poly.to_vec();
    let mut accepted = Vec::new();
    let mut progress = true;
    while q.len() > 1 && progress {
        progress = false;
        for (idx, cand) in candidates.iter().enumerate() {
            if cand.variable != variable || used[idx] >= max_multiplicity {
                continue;
            }
            let c = &cand.scale;
            let mut quo = vec![q[0].clone()];
            for i in 1..q.len() - 1 {
                let carry = c.try_mul(&quo[i - 1]).expect("same field");
                quo.push(q[i].try_add(&carry).expect("same field"));
            }
            let last = q.len() - 1;
            let carry = c.try_mul(&quo[last - 1]).expect("same field");
            let rem = q[last].try_add(&carry).expect("same field");
            if rem.is_zero() {
                q = quo;
                used[idx] += 1;
                accepted.push(cand.clone());
                progress = true;
                break;
            }
        }
    }
    accepted
}

/// Fits a truncated series to numerator / prod (1 - c t_a) with scales from
/// the candidate list, each used at most max_multiplicity times. Succeeds
/// when the reduced series leaves at least `guard` zero bands at the top;
/// otherwise returns the residual for diagnosis. A returned fit re-expands
/// to the input exactly through the truncation.
pub fn fit_rational(
    series: &RationalSeries,
    candidates: &[LinearFactor],
    max_multiplicity: usize,
    guard: usize,
) -> Result<FitOutcome> {
    if guard < 2 {
        return Err(Error::Validation(format!("guard {guard} below minimum 2")));
    }
    if let Some(bad) = candidates.iter().find(|f| f.variable >= series.variables) {
        return Err(Error::Validation(format!(
            "candidate variable {} out of range",
            bad.variable
        )));
    }
    let mut e = series.exponent;
    for c in candidates {
        e = e.lcm(&c.scale.exponent());
    }
    let input = series.embed(e)?;
    let cands: Vec<LinearFactor> = candidates
        .iter()
        .map(|f| {
            Ok(LinearFactor {
                variable: f.variable,
                scale: f.scale.embed(e)?,
            })
        })
        .collect::<Result<_>>()?;
    let mut used = vec![0usize; cands.len()];
    let mut current = input.clone();
    let mut factors = Vec::new();
    let window_cap = (input.truncation + 1).saturating_sub(guard) / 2;
    for variable in 0..input.variables {
        let budget =
            cands.iter().filter(|f| f.variable == variable).count() * max_multiplicity;
        let r_cap = window_cap.min(budget);
        let mut r_floor = 0usize;
        for _ in 0..(r_cap + 2) * (budget + 2) {
            let Some((r, poly)) =
                minimal_annihilator(&current, variable, guard, r_floor, r_cap)
            else {
                break;
            };
            if r == 0 {
                break;
            }
            let accepted = peel_factors(&poly, variable, &cands, &mut used, max_multiplicity);
            if accepted.is_empty() {
                // The window recurrence is not explained by the candidates;
                // look for a longer one before giving up on the variable.
                r_floor = r + 1;
                if r_floor > r_cap {
                    break;
                }
                continue;
            }
            for f in accepted {
                current = current.mul_factor(&f)?;
                factors.push(f);
            }
            r_floor = 0;
        }
    }
    let degree = current.max_total_degree();
    if degree.is_some_and(|d| d + guard > input.truncation) {
        return Ok(FitOutcome::NoFit { residual: current });
    }
    let verified_guard = match degree {
        None => input.truncation + 1,
        Some(d) => input.truncation - d,
    };
    let fit = FittedRational {
        numerator: current,
        factors,
        verified_guard,
    };
    let back = fit.expand()?;
    assert!(back == input, "re-expansion must reproduce the input");
    Ok(FitOutcome::Fitted(fit))
}
