//! Correctly rounded floating-point summation.
//!
//! Curve variations are sums of `|f(x_i) - f(x_{i-1})|` terms. Summing them
//! exactly and rounding once makes the result independent of traversal
//! direction and labelling, so a list and its reversal (or an affinely
//! transported list) produce bit-identical ratios.

/// Nonoverlapping expansion of an exact sum of finite floats.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExactSum {
    partials: Vec<f64>,
}

impl ExactSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, mut x: f64) {
        debug_assert!(x.is_finite());
        let mut i = 0;
        for j in 0..self.partials.len() {
            let mut y = self.partials[j];
            if x.abs() < y.abs() {
                std::mem::swap(&mut x, &mut y);
            }
            let hi = x + y;
            let lo = y - (hi - x);
            if lo != 0.0 {
                self.partials[i] = lo;
                i += 1;
            }
            x = hi;
        }
        self.partials.truncate(i);
        self.partials.push(x);
    }

    /// Exact `k · self`, via error-free products.
    pub fn scaled(&self, k: u64) -> ExactSum {
        let k = k as f64;
        let mut out = ExactSum::new();
        for &p in &self.partials {
            let hi = p * k;
            let lo = p.mul_add(k, -hi);
            out.add(hi);
            if lo != 0.0 {
                out.add(lo);
            }
        }
        out
    }

    /// The exact sum rounded to nearest.
    pub fn value(&self) -> f64 {
        let p = &self.partials;
        let mut n = p.len();
        if n == 0 {
            return 0.0;
        }
        n -= 1;
        let mut hi = p[n];
        let mut lo = 0.0;
        while n > 0 {
            let x = hi;
            n -= 1;
            let y = p[n];
            hi = x + y;
            let yr = hi - x;
            lo = y - yr;
            if lo != 0.0 {
                break;
            }
        }
        if n > 0 && ((lo < 0.0 && p[n - 1] < 0.0) || (lo > 0.0 && p[n - 1] > 0.0)) {
            let y = lo * 2.0;
            let x = hi + y;
            let yr = x - hi;
            if y == yr {
                hi = x;
            }
        }
        hi
    }
}

impl FromIterator<f64> for ExactSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = ExactSum::new();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Correctly rounded sum.
pub fn fsum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    terms.into_iter().collect::<ExactSum>().value()
}
