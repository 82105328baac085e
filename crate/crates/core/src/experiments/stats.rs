/// Fewest batches accepted for a batch-means standard error.
pub const MIN_BATCHES: usize = 30;
/// Batches used by the Monte Carlo experiments.
pub const BATCHES: usize = 32;

/// Mean and standard error from per-batch `(sum, count)` pairs.
///
/// The overall mean is the pooled `Σsum/Σcount`; the standard error is the
/// spread of the batch means divided by `√B`, weighting every non-empty batch
/// equally.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BatchMeans {
    pub mean: f64,
    pub std_error: f64,
    pub batches: usize,
    pub count: usize,
}

pub fn batch_means(batches: &[(f64, usize)]) -> BatchMeans {
    let count: usize = batches.iter().map(|b| b.1).sum();
    let total: f64 = batches.iter().map(|b| b.0).sum();
    let means: Vec<f64> = batches.iter().filter(|b| b.1 > 0).map(|b| b.0 / b.1 as f64).collect();
    let k = means.len();
    let mean = if count > 0 { total / count as f64 } else { f64::NAN };
    let std_error = if k >= 2 {
        let m = means.iter().sum::<f64>() / k as f64;
        let var = means.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (k - 1) as f64;
        (var / k as f64).sqrt()
    } else {
        f64::NAN
    };
    BatchMeans { mean, std_error, batches: k, count }
}

/// Splits `total` items into `BATCHES` nearly equal chunks.
pub fn batch_sizes(total: usize) -> Vec<usize> {
    let b = BATCHES.min(total.max(1));
    (0..b).map(|i| total / b + usize::from(i < total % b)).collect()
}
