use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::hypercube::HypercubeSpec;
use crate::numerics::exact_binomial;
use crate::Error;

/// Largest dimension the simulator materialises (`2^20` vertices).
pub const MAX_SIMULATED_DIMENSION: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonteCarloSpec {
    pub replicates: u64,
    pub master_seed: u64,
    /// Worker threads; `None` uses the global rayon pool.
    pub threads: Option<usize>,
}

impl MonteCarloSpec {
    pub fn new(replicates: u64, master_seed: u64) -> crate::Result<Self> {
        if replicates == 0 {
            return Err(Error::domain("MonteCarloSpec", "replicates must be at least 1"));
        }
        Ok(MonteCarloSpec {
            replicates,
            master_seed,
            threads: None,
        })
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = Some(threads.max(1));
        self
    }
}

/// Empirical law of `W` over independent replicates.
#[derive(Debug, Clone, PartialEq)]
pub struct HypercubeSimulation {
    pub spec: HypercubeSpec,
    pub replicates: u64,
    /// `counts[w]` = number of replicates with `W = w`.
    pub counts: Vec<u64>,
    pub mean: f64,
    pub mean_std_error: f64,
    pub pmf: Vec<f64>,
    pub pmf_std_error: Vec<f64>,
    /// Plug-in entropy of the empirical pmf, nats.
    pub entropy_plugin: f64,
    /// Jackknife standard error of the plug-in entropy.
    pub entropy_std_error: f64,
    /// `C(n, k)`.
    pub lambda_closed_form: f64,
    pub notes: Vec<String>,
}

// Orients every edge once and returns the number of vertices with out-degree k.
fn simulate_replicate(n: u32, k: u32, rng: &mut ChaCha8Rng, out_degree: &mut [u8]) -> usize {
    out_degree.iter_mut().for_each(|d| *d = 0);
    let vertices = out_degree.len();
    let mut bits = 0u64;
    let mut available = 0u32;
    for dim in 0..n {
        let mask = 1usize << dim;
        for v in (0..vertices).filter(|v| v & mask == 0) {
            if available == 0 {
                bits = rng.next_u64();
                available = 64;
            }
            if bits & 1 == 1 {
                out_degree[v] += 1;
            } else {
                out_degree[v | mask] += 1;
            }
            bits >>= 1;
            available -= 1;
        }
    }
    out_degree.iter().filter(|&&d| u32::from(d) == k).count()
}

fn histogram(spec: &HypercubeSpec, mc: &MonteCarloSpec) -> Vec<u64> {
    let vertices = 1usize << spec.n;
    let (n, k, seed) = (spec.n, spec.k, mc.master_seed);
    (0..mc.replicates)
        .into_par_iter()
        .fold(
            || (vec![0u64; vertices + 1], vec![0u8; vertices]),
            |(mut hist, mut scratch), replicate| {
                // Stream per replicate: the draw sequence depends only on (seed, replicate).
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                rng.set_stream(replicate);
                hist[simulate_replicate(n, k, &mut rng, &mut scratch)] += 1;
                (hist, scratch)
            },
        )
        .map(|(hist, _)| hist)
        .reduce(
            || vec![0u64; vertices + 1],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                a
            },
        )
}

/// Simulates `W(k, n)` for `n <= 20`.
///
/// Counts are integers merged by addition, so results are identical for any
/// thread count.
pub fn hypercube_monte_carlo(
    spec: &HypercubeSpec,
    mc: &MonteCarloSpec,
) -> crate::Result<HypercubeSimulation> {
    if spec.n > MAX_SIMULATED_DIMENSION {
        return Err(Error::TooLarge {
            what: "hypercube dimension",
            value: f64::from(spec.n),
            cap: f64::from(MAX_SIMULATED_DIMENSION),
            hint: "use the closed-form coefficients for larger cubes",
        });
    }
    if mc.replicates == 0 {
        return Err(Error::domain("hypercube_monte_carlo", "replicates must be at least 1"));
    }
    let counts = match mc.threads {
        Some(threads) => rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| Error::domain("hypercube_monte_carlo", e.to_string()))?
            .install(|| histogram(spec, mc)),
        None => histogram(spec, mc),
    };

    let total = mc.replicates as f64;
    let mean = counts
        .iter()
        .enumerate()
        .map(|(w, &c)| w as f64 * c as f64)
        .sum::<f64>()
        / total;
    let variance = if mc.replicates > 1 {
        counts
            .iter()
            .enumerate()
            .map(|(w, &c)| c as f64 * (w as f64 - mean).powi(2))
            .sum::<f64>()
            / (total - 1.0)
    } else {
        f64::NAN
    };
    let pmf: Vec<f64> = counts.iter().map(|&c| c as f64 / total).collect();
    let pmf_std_error = pmf.iter().map(|&p| (p * (1.0 - p) / total).sqrt()).collect();
    let (entropy_plugin, entropy_std_error) = plugin_entropy_jackknife(&counts);
    let lambda_closed_form = exact_binomial(u64::from(spec.n), u64::from(spec.k))
        .map(|c| c as f64)
        .unwrap_or(f64::NAN);

    Ok(HypercubeSimulation {
        spec: *spec,
        replicates: mc.replicates,
        counts,
        mean,
        mean_std_error: (variance / total).sqrt(),
        pmf,
        pmf_std_error,
        entropy_plugin,
        entropy_std_error,
        lambda_closed_form,
        notes: vec![
            "simulation checks the mean C(n,k) and the k <-> n-k symmetry; at simulable sizes \
             the entropy bound's hypothesis a(lambda) <= 1/2 usually fails"
                .into(),
            "plug-in entropy bias is not quantified".into(),
        ],
    })
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

// H = ln N - S/N with S = Σ c ln c; leaving out one observation from bin j
// only changes that bin's term.
fn plugin_entropy_jackknife(counts: &[u64]) -> (f64, f64) {
    let total: u64 = counts.iter().sum();
    let n = total as f64;
    let s: f64 = counts.iter().map(|&c| xlogx(c as f64)).sum();
    let h = n.ln() - s / n;
    if total < 2 {
        return (h, f64::NAN);
    }
    let leave_one_out = |c: u64| {
        let c = c as f64;
        let s_j = s - xlogx(c) + xlogx(c - 1.0);
        (n - 1.0).ln() - s_j / (n - 1.0)
    };
    let mean_loo = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * leave_one_out(c))
        .sum::<f64>()
        / n;
    let spread: f64 = counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| c as f64 * (leave_one_out(c) - mean_loo).powi(2))
        .sum();
    (h, ((n - 1.0) / n * spread).sqrt())
}
