use rayon::prelude::*;

use super::cmat::CMat;
use crate::{Error, Result};

const GRID_RTOL: f64 = 1e-9;

/// Matrix-valued samples on a uniform time grid starting at 0.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledMatrixFunction {
    time_grid: Vec<f64>,
    samples: Vec<CMat>,
}

impl SampledMatrixFunction {
    pub fn new(time_grid: Vec<f64>, samples: Vec<CMat>) -> Result<Self> {
        if time_grid.is_empty() || time_grid.len() != samples.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} grid points for {} samples",
                time_grid.len(),
                samples.len()
            )));
        }
        if time_grid[0] != 0.0 {
            return Err(Error::InvalidInput("time grid must start at 0".into()));
        }
        if time_grid.len() > 1 {
            let h = time_grid[1] - time_grid[0];
            if h <= 0.0 {
                return Err(Error::InvalidInput("time grid must be increasing".into()));
            }
            for (i, &t) in time_grid.iter().enumerate() {
                if (t - i as f64 * h).abs() > GRID_RTOL * h.max(t) {
                    return Err(Error::InvalidInput("time grid must be uniform".into()));
                }
            }
        }
        let shape = samples[0].shape();
        if samples.iter().any(|s| s.shape() != shape) {
            return Err(Error::DimensionMismatch("samples differ in shape".into()));
        }
        Ok(Self { time_grid, samples })
    }

    /// Samples `f(t_i)` on `t_i = i·T/steps`, `i = 0..=steps`.
    pub fn tabulate(t_end: f64, steps: usize, f: impl Fn(f64) -> Result<CMat> + Sync + Send) -> Result<Self> {
        let grid = uniform_grid(t_end, steps);
        let samples = grid.par_iter().map(|&t| f(t)).collect::<Result<Vec<_>>>()?;
        Self::new(grid, samples)
    }

    pub fn time_grid(&self) -> &[f64] {
        &self.time_grid
    }

    pub fn samples(&self) -> &[CMat] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn shape(&self) -> (usize, usize) {
        self.samples[0].shape()
    }

    pub fn step(&self) -> f64 {
        if self.time_grid.len() > 1 {
            self.time_grid[1]
        } else {
            0.0
        }
    }

    pub fn last(&self) -> &CMat {
        self.samples.last().expect("non-empty by construction")
    }

    /// Pointwise map, keeping the grid.
    pub fn map(&self, f: impl Fn(&CMat) -> CMat + Sync + Send) -> Self {
        Self { time_grid: self.time_grid.clone(), samples: self.samples.par_iter().map(f).collect() }
    }

    pub fn scale(&self, z: super::cmat::C64) -> Self {
        self.map(|m| m.scale(z))
    }

    /// Largest entry magnitude over all samples.
    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(CMat::norm_max).fold(0.0, f64::max)
    }

    fn same_grid(&self, other: &Self) -> bool {
        self.time_grid.len() == other.time_grid.len()
            && self.time_grid.iter().zip(&other.time_grid).all(|(a, b)| (a - b).abs() <= GRID_RTOL * a.abs().max(1.0))
    }
}

pub fn uniform_grid(t_end: f64, steps: usize) -> Vec<f64> {
    (0..=steps).map(|i| t_end * i as f64 / steps as f64).collect()
}

/// `(F*G)(t_i) = ∫₀^{t_i} F(t_i − s)·G(s) ds` by the composite trapezoid rule.
pub fn convolve(f: &SampledMatrixFunction, g: &SampledMatrixFunction) -> Result<SampledMatrixFunction> {
    if !f.same_grid(g) {
        return Err(Error::GridMismatch);
    }
    let (p, q) = f.shape();
    let (q2, r) = g.shape();
    if q != q2 {
        return Err(Error::DimensionMismatch(format!("convolution of {p}x{q} with {q2}x{r} samples")));
    }
    let h = f.step();
    let samples: Vec<CMat> = (0..f.len())
        .into_par_iter()
        .map(|i| {
            let mut acc = CMat::zeros(p, r);
            if i == 0 {
                return acc;
            }
            acc.mul_acc(0.5 * h, &f.samples[i], &g.samples[0]);
            for j in 1..i {
                acc.mul_acc(h, &f.samples[i - j], &g.samples[j]);
            }
            acc.mul_acc(0.5 * h, &f.samples[0], &g.samples[i]);
            acc
        })
        .collect();
    Ok(SampledMatrixFunction { time_grid: f.time_grid.clone(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matcore::cmat::C64;

    fn scalar_fn(t_end: f64, steps: usize, f: impl Fn(f64) -> f64 + Sync) -> SampledMatrixFunction {
        SampledMatrixFunction::tabulate(t_end, steps, |t| Ok(CMat::scalar(C64::new(f(t), 0.0)))).unwrap()
    }

    #[test]
    fn zero_integrand() {
        let f = scalar_fn(1.0, 10, |t| t.sin());
        let g = scalar_fn(1.0, 10, |_| 0.0);
        assert_eq!(convolve(&f, &g).unwrap().max_abs(), 0.0);
    }

    #[test]
    fn constants_integrate_exactly() {
        let one = scalar_fn(2.0, 16, |_| 1.0);
        let c = convolve(&one, &one).unwrap();
        for (t, s) in c.time_grid().iter().zip(c.samples()) {
            assert!((s[(0, 0)].re - t).abs() < 1e-14);
        }
    }

    #[test]
    fn exponential_kernel_second_order() {
        for steps in [20, 40, 80] {
            let h = 1.0 / steps as f64;
            let f = scalar_fn(1.0, steps, |t| (-t).exp());
            let g = scalar_fn(1.0, steps, |_| 1.0);
            let c = convolve(&f, &g).unwrap();
            let err = (c.last()[(0, 0)].re - (1.0 - (-1.0f64).exp())).abs();
            assert!(err <= h * h, "steps={steps}: {err}");
        }
    }

    #[test]
    fn grid_mismatch() {
        let a = scalar_fn(1.0, 10, |_| 1.0);
        let b = scalar_fn(1.0, 12, |_| 1.0);
        assert_eq!(convolve(&a, &b), Err(Error::GridMismatch));
    }

    #[test]
    fn rejects_nonuniform_grid() {
        let s = vec![CMat::identity(1); 3];
        assert!(SampledMatrixFunction::new(vec![0.0, 0.1, 0.3], s).is_err());
    }
}
