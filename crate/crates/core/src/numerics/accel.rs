//! Compensated summation and Richardson extrapolation.

/// Neumaier's compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.comp += (self.sum - t) + v;
        } else {
            self.comp += (v - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        for v in iter {
            s.add(v);
        }
        s
    }
}

/// Richardson table for a sequence sampled at `h, h/2, h/4, ...` whose error
/// is a power series in `h`.
///
/// Push samples in order; each push returns the new diagonal estimate.
#[derive(Debug, Clone, Default)]
pub struct Richardson {
    prev: Vec<f64>,
    best: Option<(f64, f64)>,
    last_diff: Option<f64>,
}

impl Richardson {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, sample: f64) -> f64 {
        let mut row = Vec::with_capacity(self.prev.len() + 1);
        row.push(sample);
        for j in 1..=self.prev.len() {
            let factor = (1u64 << j) as f64 - 1.0;
            row.push(row[j - 1] + (row[j - 1] - self.prev[j - 1]) / factor);
        }
        let est = *row.last().expect("row is nonempty");
        if let Some(&old) = self.prev.last() {
            let d = (est - old).abs();
            self.last_diff = Some(d);
            if self.best.is_none_or(|(bd, _)| d < bd) {
                self.best = Some((d, est));
            }
        }
        self.prev = row;
        est
    }

    /// Difference between the two latest diagonal entries.
    pub fn last_diff(&self) -> Option<f64> {
        self.last_diff
    }

    /// Diagonal entry with the smallest successive difference seen so far,
    /// as `(value, difference)`.
    pub fn best(&self) -> Option<(f64, f64)> {
        self.best.map(|(d, v)| (v, d))
    }

    pub fn len(&self) -> usize {
        self.prev.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prev.is_empty()
    }
}

/// Outcome of driving a sequence through [`Richardson`] until it settles.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Extrapolated {
    pub value: f64,
    pub err: f64,
}

/// Push `sample(k)` for `k = 0, 1, ...` until successive diagonal estimates
/// differ by less than `tol`, the noise floor is reached, or `max_samples`
/// is used up. Returns the best estimate seen.
pub(crate) fn extrapolate<F>(mut sample: F, tol: f64, max_samples: usize) -> crate::Result<Extrapolated>
where
    F: FnMut(usize) -> crate::Result<f64>,
{
    let mut r = Richardson::new();
    for k in 0..max_samples {
        r.push(sample(k)?);
        if let (Some(d), Some((_, bd))) = (r.last_diff(), r.best()) {
            if d < tol {
                break;
            }
            if k >= 4 && d > 1e3 * bd {
                break;
            }
        }
    }
    let (value, err) = r.best().unwrap_or((f64::NAN, f64::INFINITY));
    Ok(Extrapolated { value, err })
}
