//! Small numeric helpers shared across modules.

/// Kahan-Babuska-Neumaier compensated accumulator.
///
/// All reductions over atom lists use this accumulator in input order, so
/// results are deterministic and immune to catastrophic cancellation up to
/// one final rounding.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation += (self.sum - t) + x;
        } else {
            self.compensation += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

/// Compensated sum of an iterator, in iteration order.
pub(crate) fn comp_sum(iter: impl IntoIterator<Item = f64>) -> f64 {
    let mut acc = NeumaierSum::new();
    for x in iter {
        acc.add(x);
    }
    acc.value()
}

/// Ordinary least-squares slope of `ys` against `xs`.
///
/// Returns 0 for fewer than two points or a degenerate abscissa spread.
pub(crate) fn ols_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len().min(ys.len());
    if n < 2 {
        return 0.0;
    }
    let mx = comp_sum(xs[..n].iter().copied()) / n as f64;
    let my = comp_sum(ys[..n].iter().copied()) / n as f64;
    let sxx = comp_sum(xs[..n].iter().map(|&x| (x - mx) * (x - mx)));
    let sxy = comp_sum(
        xs[..n]
            .iter()
            .zip(&ys[..n])
            .map(|(&x, &y)| (x - mx) * (y - my)),
    );
    if sxx <= 0.0 || !sxx.is_finite() {
        return 0.0;
    }
    sxy / sxx
}
