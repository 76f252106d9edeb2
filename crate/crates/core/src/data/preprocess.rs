use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::synthetic::{stream_rng, STREAM_SPLIT};
use super::LabeledDataset;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Vector};

/// Column means and population standard deviations of a training set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Standardization {
    pub feature_mean: Vec<f64>,
    pub feature_sd: Vec<f64>,
    pub target_mean: f64,
    pub target_sd: f64,
}

impl Standardization {
    pub fn fit(ds: &LabeledDataset) -> Result<Self> {
        let a = ds.problem.a();
        let name = |j: usize| match &ds.column_names {
            Some(names) => names[j].clone(),
            None => format!("x{}", j + 1),
        };
        let mut feature_mean = Vec::with_capacity(a.cols());
        let mut feature_sd = Vec::with_capacity(a.cols());
        let mut column = vec![0.0; a.rows()];
        for j in 0..a.cols() {
            for (i, c) in column.iter_mut().enumerate() {
                *c = a.get(i, j);
            }
            let (mean, sd) = moments(&column, || name(j))?;
            feature_mean.push(mean);
            feature_sd.push(sd);
        }
        let target = ds.target_name.clone().unwrap_or_else(|| "target".into());
        let (target_mean, target_sd) = moments(ds.problem.b(), || target)?;
        Ok(Standardization {
            feature_mean,
            feature_sd,
            target_mean,
            target_sd,
        })
    }

    pub fn apply(&self, ds: &LabeledDataset) -> Result<LabeledDataset> {
        let a = ds.problem.a();
        if self.feature_mean.len() != a.cols() {
            return Err(Error::dims("standardize", self.feature_mean.len(), a.cols()));
        }
        let mut out = Matrix::zeros(a.rows(), a.cols());
        for i in 0..a.rows() {
            for (j, v) in out.row_mut(i).iter_mut().enumerate() {
                *v = (a.get(i, j) - self.feature_mean[j]) / self.feature_sd[j];
            }
        }
        let b: Vector = ds
            .problem
            .b()
            .iter()
            .map(|v| (v - self.target_mean) / self.target_sd)
            .collect();
        let mut scaled = ds.rebuild(out, b)?;
        // the planted solution is in the original units
        scaled.ground_truth = None;
        Ok(scaled)
    }
}

fn moments(values: &[f64], name: impl FnOnce() -> String) -> Result<(f64, f64)> {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let sd = var.sqrt();
    // rounding in the mean leaves a tiny spread on constant columns
    if !(sd > 1e-12 * mean.abs()) {
        return Err(Error::ZeroVariance { column: name() });
    }
    Ok((mean, sd))
}

/// Scales every feature and the target to mean 0 and standard deviation 1.
/// With `stats`, applies those (training) statistics instead of fitting new
/// ones.
pub fn standardize(
    ds: &LabeledDataset,
    stats: Option<&Standardization>,
) -> Result<(LabeledDataset, Standardization)> {
    let stats = match stats {
        Some(s) => s.clone(),
        None => Standardization::fit(ds)?,
    };
    Ok((stats.apply(ds)?, stats))
}

/// Random row partition with `floor(fraction·m)` training rows. Each side
/// keeps the original row order.
pub fn train_test_split(ds: &LabeledDataset, fraction: f64, seed: u64) -> Result<(LabeledDataset, LabeledDataset)> {
    let rows = ds.problem.m();
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(Error::InvalidArgument(format!("fraction {fraction} must be in (0, 1)")));
    }
    let n_train = (fraction * rows as f64).floor() as usize;
    if n_train == 0 || n_train == rows {
        return Err(Error::EmptySplit { rows, fraction });
    }
    let mut order: Vec<usize> = (0..rows).collect();
    order.shuffle(&mut stream_rng(seed, STREAM_SPLIT));
    let (train, test) = order.split_at_mut(n_train);
    train.sort_unstable();
    test.sort_unstable();
    Ok((ds.select_rows(train)?, ds.select_rows(test)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objective::LassoProblem;

    fn dataset(rows: &[[f64; 2]], b: &[f64]) -> LabeledDataset {
        let p = LassoProblem::new(Matrix::from_rows(rows).unwrap(), Vector::from(b), 0.01).unwrap();
        LabeledDataset::from_problem(p)
    }

    #[test]
    fn hand_z_scores() {
        let ds = dataset(&[[1.0, 5.0], [2.0, 7.0], [3.0, 9.0]], &[1.0, 2.0, 3.0]);
        let (scaled, stats) = standardize(&ds, None).unwrap();
        let z = 1.5f64.sqrt();
        for (got, want) in scaled.problem.b().iter().zip([-z, 0.0, z]) {
            assert!((got - want).abs() < 1e-12);
        }
        assert!((stats.feature_sd[0] - (2.0f64 / 3.0).sqrt()).abs() < 1e-15);
        assert_eq!(stats.feature_mean, [2.0, 7.0]);
    }

    #[test]
    fn constant_column_is_rejected() {
        let ds = dataset(&[[0.1, 5.0], [0.1, 7.0], [0.1, 9.0]], &[1.0, 2.0, 3.0]);
        assert!(matches!(standardize(&ds, None), Err(Error::ZeroVariance { column }) if column == "x1"));
        let ds = dataset(&[[1.0, 5.0], [2.0, 7.0], [3.0, 9.0]], &[4.0, 4.0, 4.0]);
        assert!(matches!(standardize(&ds, None), Err(Error::ZeroVariance { .. })));
    }

    #[test]
    fn fixed_stats_reproduce_the_fit() {
        let ds = dataset(&[[1.0, -5.0], [2.0, 7.0], [4.0, 9.0], [0.5, 1.0]], &[1.0, 2.0, 3.0, 7.0]);
        let (once, stats) = standardize(&ds, None).unwrap();
        let (again, _) = standardize(&ds, Some(&stats)).unwrap();
        assert_eq!(once.problem.a(), again.problem.a());
        assert_eq!(once.problem.b(), again.problem.b());
    }

    #[test]
    fn split_arithmetic_and_determinism() {
        let rows: Vec<[f64; 2]> = (0..10).map(|i| [i as f64, 1.0]).collect();
        let b: Vec<f64> = (0..10).map(|i| i as f64).collect();
        let ds = dataset(&rows, &b);
        let (train, test) = train_test_split(&ds, 0.8, 3).unwrap();
        assert_eq!((train.problem.m(), test.problem.m()), (8, 2));
        let (train2, _) = train_test_split(&ds, 0.8, 3).unwrap();
        assert_eq!(train.problem.b(), train2.problem.b());
        let mut all: Vec<f64> = train.problem.b().iter().chain(test.problem.b().iter()).copied().collect();
        all.sort_by(f64::total_cmp);
        assert_eq!(all, b);

        let (train, test) = train_test_split(&ds, 0.99, 3).unwrap();
        assert_eq!((train.problem.m(), test.problem.m()), (9, 1));
        assert!(matches!(train_test_split(&ds, 0.05, 3), Err(Error::EmptySplit { .. })));
        assert!(train_test_split(&ds, 1.0, 3).is_err());
    }
}
