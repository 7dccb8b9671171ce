//! The three canonical class functions attached to `f`: per class, the most
//! frequent value, the mean, and the value the self-corrector converges to.

use num_complex::Complex64;

use crate::rep::ScalarFunction;

/// Per-class statistics of a function's values.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSummary {
    /// Most frequent value; ties go to the smallest `(re, im)`.
    pub plurality: Complex64,
    /// Fraction of the class taking the plurality value.
    pub plurality_fraction: f64,
    pub mean: Complex64,
}

impl ClassSummary {
    /// Plurality value when it holds a strict majority, the mean otherwise.
    pub fn corrected(&self) -> Complex64 {
        if self.plurality_fraction > 0.5 {
            self.plurality
        } else {
            self.mean
        }
    }
}

fn canonical(v: Complex64) -> Complex64 {
    // folds -0.0 into 0.0 so that equal values sort together
    Complex64::new(v.re + 0.0, v.im + 0.0)
}

pub(crate) fn summarize(values: impl Iterator<Item = Complex64>) -> ClassSummary {
    let mut vals: Vec<Complex64> = values.map(canonical).collect();
    let n = vals.len();
    let mean = vals.iter().sum::<Complex64>() / n as f64;
    vals.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let (mut best, mut best_count) = (vals[0], 0usize);
    let mut i = 0;
    while i < n {
        let mut j = i;
        while j < n && vals[j] == vals[i] {
            j += 1;
        }
        if j - i > best_count {
            best = vals[i];
            best_count = j - i;
        }
        i = j;
    }
    ClassSummary {
        plurality: best,
        plurality_fraction: best_count as f64 / n as f64,
        mean,
    }
}

pub(crate) fn class_summaries(f: &ScalarFunction) -> Vec<ClassSummary> {
    let g = f.group();
    g.classes()
        .iter()
        .map(|members| summarize(members.iter().map(|&m| f.values()[m])))
        .collect()
}

fn per_class(f: &ScalarFunction, pick: impl Fn(&ClassSummary) -> Complex64) -> ScalarFunction {
    let values: Vec<Complex64> = class_summaries(f).iter().map(pick).collect();
    ScalarFunction::from_class_values(f.group().clone(), &values).expect("one value per class")
}

/// `f̃`: the plurality value on each class.
pub fn plurality_class_function(f: &ScalarFunction) -> ScalarFunction {
    per_class(f, |s| s.plurality)
}

/// `f*`: the class mean, the nearest class function in `L²`.
pub fn mean_class_function(f: &ScalarFunction) -> ScalarFunction {
    per_class(f, |s| s.mean)
}

/// `f′`: the plurality value where it holds a strict majority, else the mean.
pub fn corrected_class_function(f: &ScalarFunction) -> ScalarFunction {
    per_class(f, ClassSummary::corrected)
}
