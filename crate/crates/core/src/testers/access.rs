//! Query access to the tested function.
//!
//! Testers only see the input through [`ScalarAccess`] (or [`MatrixOracle`]),
//! and every point evaluation is counted. `query_repeated(x, k)` stands for
//! `k` consecutive evaluations at `x` and is charged `k` queries; the mean
//! estimator uses it after drawing multinomial counts, which has the same
//! distribution as drawing `k` uniform points one at a time.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;

use super::estimator::{multinomial_uniform, multinomial_weighted};
use super::report::Witness;
use crate::group::{Element, FiniteGroup};
use crate::rep::{values_equal, CMatrix, MatrixFunction, ScalarFunction};

/// A returned value together with the element whose raw value it is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub value: Complex64,
    pub point: Element,
}

pub trait ScalarAccess {
    fn group(&self) -> &Arc<FiniteGroup>;

    fn query<R: Rng + ?Sized>(&mut self, x: Element, rng: &mut R) -> Result<Observation, Witness>;

    /// `times` evaluations at `x`; `visit(value, multiplicity)` receives the
    /// returned values grouped by value.
    fn query_repeated<R: Rng + ?Sized>(
        &mut self,
        x: Element,
        times: u64,
        rng: &mut R,
        visit: impl FnMut(Complex64, u64),
    ) -> Result<(), Witness>;

    /// `trials` evaluations at points drawn uniformly from `points`, with the
    /// same grouped `visit` as [`Self::query_repeated`].
    fn query_uniform<R: Rng + ?Sized>(
        &mut self,
        points: &[Element],
        trials: u64,
        rng: &mut R,
        mut visit: impl FnMut(Complex64, u64),
    ) -> Result<(), Witness> {
        let mut counts = Vec::new();
        multinomial_uniform(rng, trials, points.len(), &mut counts);
        for &(i, count) in &counts {
            self.query_repeated(points[i], count, rng, &mut visit)?;
        }
        Ok(())
    }

    /// Point evaluations of the underlying function so far.
    fn queries(&self) -> u64;

    fn value_tolerance(&self) -> f64;
}

/// Counts point evaluations of a tabulated scalar function.
#[derive(Debug)]
pub struct QueryOracle<'f> {
    f: &'f ScalarFunction,
    count: u64,
    tolerance: f64,
    constant_classes: Vec<Option<bool>>,
    class_function: Option<bool>,
    distinct: Vec<(Complex64, u64)>,
    draws: Vec<(usize, u64)>,
}

impl<'f> QueryOracle<'f> {
    pub fn new(f: &'f ScalarFunction) -> Self {
        Self::with_tolerance(f, 0.0)
    }

    pub fn with_tolerance(f: &'f ScalarFunction, tolerance: f64) -> Self {
        QueryOracle {
            f,
            count: 0,
            tolerance,
            constant_classes: vec![None; f.group().num_classes()],
            class_function: None,
            distinct: Vec::new(),
            draws: Vec::new(),
        }
    }

    #[inline]
    pub fn eval(&mut self, x: Element) -> Complex64 {
        self.count += 1;
        self.f.at(x)
    }

    #[inline]
    pub fn eval_repeated(&mut self, x: Element, times: u64) -> Complex64 {
        self.count += times;
        self.f.at(x)
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn function(&self) -> &'f ScalarFunction {
        self.f
    }

    /// Draws `trials` uniform points from `points` without charging and reports
    /// the counts per distinct value. Points holding equal values are pooled
    /// before the multinomial draw, which leaves the distribution of
    /// the pooled counts unchanged.
    fn merged_draw<R: Rng + ?Sized>(
        &mut self,
        points: &[Element],
        trials: u64,
        rng: &mut R,
        mut visit: impl FnMut(Complex64, u64),
    ) {
        if trials == 0 {
            return;
        }
        self.distinct.clear();
        for &p in points {
            let v = self.f.at(p);
            match self.distinct.iter_mut().find(|(w, _)| *w == v) {
                Some((_, n)) => *n += 1,
                None => self.distinct.push((v, 1)),
            }
        }
        if let [(v, _)] = self.distinct.as_slice() {
            visit(*v, trials);
            return;
        }
        multinomial_weighted(rng, trials, self.distinct.iter().map(|&(_, n)| n), &mut self.draws);
        for &(i, count) in &self.draws {
            visit(self.distinct[i].0, count);
        }
    }

    /// Whether every class is constant; see [`Self::class_is_constant`].
    pub(crate) fn is_class_function(&mut self) -> bool {
        if let Some(known) = self.class_function {
            return known;
        }
        let all = (0..self.constant_classes.len()).all(|c| self.class_is_constant(c));
        self.class_function = Some(all);
        all
    }

    /// Whether `f` takes a single (bitwise equal) value on the class.
    ///
    /// This reads the table without charging queries. It is used only to skip
    /// simulating self-corrector calls whose outcome is certain: on a constant
    /// class every call returns that value, whatever conjugators are drawn.
    pub(crate) fn class_is_constant(&mut self, class: usize) -> bool {
        if let Some(known) = self.constant_classes[class] {
            return known;
        }
        let group = self.f.group();
        let members = &group.classes()[class];
        let first = self.f.values()[members[0]];
        let constant = members.iter().all(|&m| self.f.values()[m] == first);
        self.constant_classes[class] = Some(constant);
        constant
    }
}

impl ScalarAccess for QueryOracle<'_> {
    fn group(&self) -> &Arc<FiniteGroup> {
        self.f.group()
    }

    fn query<R: Rng + ?Sized>(&mut self, x: Element, _rng: &mut R) -> Result<Observation, Witness> {
        Ok(Observation {
            value: self.eval(x),
            point: x,
        })
    }

    fn query_repeated<R: Rng + ?Sized>(
        &mut self,
        x: Element,
        times: u64,
        _rng: &mut R,
        mut visit: impl FnMut(Complex64, u64),
    ) -> Result<(), Witness> {
        if times > 0 {
            let v = self.eval_repeated(x, times);
            visit(v, times);
        }
        Ok(())
    }

    fn query_uniform<R: Rng + ?Sized>(
        &mut self,
        points: &[Element],
        trials: u64,
        rng: &mut R,
        visit: impl FnMut(Complex64, u64),
    ) -> Result<(), Witness> {
        self.count += trials;
        self.merged_draw(points, trials, rng, visit);
        Ok(())
    }

    fn queries(&self) -> u64 {
        self.count
    }

    fn value_tolerance(&self) -> f64 {
        self.tolerance
    }
}

/// One self-corrector call: evaluate `f(y x y⁻¹)` for `samples` uniform `y`
/// and return the common value, or a witness if two of them differ.
pub(crate) fn corrected_call<R: Rng + ?Sized>(
    oracle: &mut QueryOracle<'_>,
    x: Element,
    samples: u64,
    rng: &mut R,
) -> Result<Observation, Witness> {
    let group = oracle.function().group();
    let tol = oracle.tolerance;
    let y0 = group.uniform_element(rng);
    let p0 = group.conjugate(x, y0);
    let v0 = oracle.eval(p0);
    let mut mismatch = None;
    for _ in 1..samples {
        let y = group.uniform_element(rng);
        let v = oracle.eval(group.conjugate(x, y));
        if mismatch.is_none() && !values_equal(v, v0, tol) {
            mismatch = Some((y, v));
        }
    }
    match mismatch {
        Some((y, v)) => Err(Witness::ConjugatesDisagree {
            x,
            first_conjugator: y0,
            second_conjugator: y,
            first_value: v0,
            second_value: v,
        }),
        None => Ok(Observation { value: v0, point: p0 }),
    }
}

/// Query access to the self-corrected class function `f′`: every query runs
/// one self-corrector call against the wrapped oracle.
#[derive(Debug)]
pub struct CorrectedAccess<'a, 'f> {
    oracle: &'a mut QueryOracle<'f>,
    samples: u64,
}

impl<'a, 'f> CorrectedAccess<'a, 'f> {
    pub fn new(oracle: &'a mut QueryOracle<'f>, samples: u64) -> Self {
        CorrectedAccess { oracle, samples }
    }

    /// Raw queries charged per corrected query.
    pub fn samples_per_query(&self) -> u64 {
        self.samples
    }
}

impl ScalarAccess for CorrectedAccess<'_, '_> {
    fn group(&self) -> &Arc<FiniteGroup> {
        self.oracle.function().group()
    }

    fn query<R: Rng + ?Sized>(&mut self, x: Element, rng: &mut R) -> Result<Observation, Witness> {
        if self.oracle.is_class_function() || self.oracle.class_is_constant(self.group().class_of(x)) {
            let value = self.oracle.eval_repeated(x, self.samples);
            return Ok(Observation { value, point: x });
        }
        corrected_call(self.oracle, x, self.samples, rng)
    }

    fn query_repeated<R: Rng + ?Sized>(
        &mut self,
        x: Element,
        times: u64,
        rng: &mut R,
        mut visit: impl FnMut(Complex64, u64),
    ) -> Result<(), Witness> {
        if times == 0 {
            return Ok(());
        }
        let class = self.group().class_of(x);
        if self.oracle.class_is_constant(class) {
            let total = times
                .checked_mul(self.samples)
                .expect("query budget was checked against overflow");
            let value = self.oracle.eval_repeated(x, total);
            visit(value, times);
            return Ok(());
        }
        for _ in 0..times {
            let obs = corrected_call(self.oracle, x, self.samples, rng)?;
            visit(obs.value, 1);
        }
        Ok(())
    }

    fn query_uniform<R: Rng + ?Sized>(
        &mut self,
        points: &[Element],
        trials: u64,
        rng: &mut R,
        mut visit: impl FnMut(Complex64, u64),
    ) -> Result<(), Witness> {
        let group = self.oracle.function().group();
        if self.oracle.is_class_function() || points.iter().all(|&p| self.oracle.class_is_constant(group.class_of(p))) {
            let total = trials
                .checked_mul(self.samples)
                .expect("query budget was checked against overflow");
            self.oracle.count += total;
            self.oracle.merged_draw(points, trials, rng, visit);
            return Ok(());
        }
        let mut counts = Vec::new();
        multinomial_uniform(rng, trials, points.len(), &mut counts);
        for &(i, count) in &counts {
            self.query_repeated(points[i], count, rng, &mut visit)?;
        }
        Ok(())
    }

    fn queries(&self) -> u64 {
        self.oracle.count()
    }

    fn value_tolerance(&self) -> f64 {
        self.oracle.tolerance
    }
}

/// Counts point evaluations of a tabulated matrix function.
#[derive(Debug)]
pub struct MatrixOracle<'f> {
    f: &'f MatrixFunction,
    count: u64,
}

impl<'f> MatrixOracle<'f> {
    pub fn new(f: &'f MatrixFunction) -> Self {
        MatrixOracle { f, count: 0 }
    }

    pub fn query(&mut self, x: Element) -> &'f CMatrix {
        self.count += 1;
        self.f.at(x)
    }

    pub fn query_repeated(&mut self, x: Element, times: u64) -> &'f CMatrix {
        self.count += times;
        self.f.at(x)
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub fn function(&self) -> &'f MatrixFunction {
        self.f
    }
}
