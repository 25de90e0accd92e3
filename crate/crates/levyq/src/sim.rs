//! Seeded path simulation of the named Levy models and Monte Carlo
//! verification of the martingale and orthogonality properties.
//!
//! Determinism contract: every path draws from its own ChaCha stream
//! derived from `(seed, path index)`, so parallel and serial runs produce
//! bit-identical paths; all statistical reductions walk paths in index
//! order. Within a path, draws are ordered by grid interval, and a sum
//! model consumes its first component's draws before its second's.
//!
//! Exact arithmetic ends at this module's boundary: polynomial
//! coefficients are converted to binary64 once per test, with the
//! `e^{1/2}` atom evaluated as `exp(0.5)`.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, Gamma, Normal, Poisson};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::harmonic;
use crate::kailath_segall;
use crate::models::{LevyModel, ModelKind};
use crate::vars;

/// Numeric value of the coefficient atom `e^{1/2}`.
pub fn eps_half() -> f64 {
    (0.5f64).exp()
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub model: LevyModel,
    pub horizon: f64,
    /// Strictly increasing observation times in `(0, horizon]`.
    pub grid: Vec<f64>,
    pub n_paths: usize,
    pub seed: u64,
    /// Gate width in standard errors (default 3).
    pub confidence: f64,
}

impl SimConfig {
    pub fn new(model: LevyModel, grid: Vec<f64>, n_paths: usize, seed: u64) -> Result<Self> {
        let horizon = grid.last().copied().unwrap_or(0.0);
        let cfg = SimConfig {
            model,
            horizon,
            grid,
            n_paths,
            seed,
            confidence: 3.0,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::SimConfig("empty time grid".to_string()));
        }
        let mut prev = 0.0;
        for &g in &self.grid {
            if !g.is_finite() || g <= prev {
                return Err(Error::SimConfig(format!(
                    "grid must be strictly increasing and positive, got {:?}",
                    self.grid
                )));
            }
            prev = g;
        }
        if prev > self.horizon {
            return Err(Error::SimConfig(format!(
                "grid exceeds horizon {}",
                self.horizon
            )));
        }
        if self.n_paths == 0 {
            return Err(Error::SimConfig("n_paths must be at least 1".to_string()));
        }
        if !(self.confidence > 0.0) {
            return Err(Error::SimConfig(format!(
                "confidence multiplier must be positive, got {}",
                self.confidence
            )));
        }
        Ok(())
    }

    fn grid_index(&self, t: f64) -> Result<usize> {
        self.grid
            .iter()
            .position(|&g| g == t)
            .ok_or_else(|| Error::SimConfig(format!("time {t} is not on the grid {:?}", self.grid)))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathSample {
    /// `X_t` at each grid time.
    pub values: Vec<f64>,
    /// `(time, size)` per jump, sorted by time; `None` when the model's
    /// jumps cannot be enumerated (infinite activity).
    pub jumps: Option<Vec<(f64, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathVariations {
    /// `per_time[i][k-1]` holds `X_t^{(k)}` at grid time `i`.
    pub per_time: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize)]
pub struct McVerdict {
    pub statistic: String,
    pub estimate: f64,
    pub std_error: f64,
    pub target: f64,
    pub pass: bool,
    pub n_paths: usize,
}

fn path_rng(seed: u64, index: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform draw in `(0, 1]`, so an interval's jump times stay inside it.
fn unit_open_closed(rng: &mut ChaCha12Rng) -> f64 {
    1.0 - rng.random::<f64>()
}

fn sample_path(model: &LevyModel, grid: &[f64], rng: &mut ChaCha12Rng) -> Result<PathSample> {
    match &model.kind {
        ModelKind::Brownian => {
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            let mut values = Vec::with_capacity(grid.len());
            let mut x = 0.0;
            let mut prev = 0.0;
            for &g in grid {
                let dt = g - prev;
                x += normal.sample(rng) * dt.sqrt();
                values.push(x);
                prev = g;
            }
            Ok(PathSample {
                values,
                jumps: Some(Vec::new()),
            })
        }
        ModelKind::CompensatedPoisson { rate } => {
            let lam = crate::rat::to_f64(rate);
            compound_poisson_path(grid, lam, lam, rng, |_| 1.0)
        }
        ModelKind::CompoundPoissonLognormal => {
            let normal = Normal::new(0.0, 1.0).expect("unit normal");
            compound_poisson_path(grid, 1.0, eps_half(), rng, move |rng| {
                let z: f64 = normal.sample(rng);
                z.exp()
            })
        }
        ModelKind::CompensatedGamma => {
            let mut values = Vec::with_capacity(grid.len());
            let mut x = 0.0;
            let mut prev = 0.0;
            for &g in grid {
                let dt = g - prev;
                let gamma = Gamma::new(dt, 1.0).map_err(|e| {
                    Error::SimConfig(format!("gamma increment shape {dt}: {e}"))
                })?;
                x += gamma.sample(rng) - dt;
                values.push(x);
                prev = g;
            }
            // Infinite activity: individual jumps are not enumerable.
            Ok(PathSample {
                values,
                jumps: None,
            })
        }
        ModelKind::Sum(a, b) => {
            let pa = sample_path(a, grid, rng)?;
            let pb = sample_path(b, grid, rng)?;
            let values = pa
                .values
                .iter()
                .zip(&pb.values)
                .map(|(x, y)| x + y)
                .collect();
            let jumps = match (pa.jumps, pb.jumps) {
                (Some(mut ja), Some(jb)) => {
                    ja.extend(jb);
                    ja.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
                    Some(ja)
                }
                _ => None,
            };
            Ok(PathSample { values, jumps })
        }
        ModelKind::Custom { .. } => Err(Error::NoSampler(model.name.clone())),
    }
}

/// Compensated compound Poisson path. `drift_rate` is `intensity *
/// E[jump size]`, so the process is centered: `lam` itself for unit
/// jumps, `e^{1/2}` for the unit-rate lognormal model.
fn compound_poisson_path(
    grid: &[f64],
    lam: f64,
    drift_rate: f64,
    rng: &mut ChaCha12Rng,
    mut jump_size: impl FnMut(&mut ChaCha12Rng) -> f64,
) -> Result<PathSample> {
    let mut values = Vec::with_capacity(grid.len());
    let mut jumps: Vec<(f64, f64)> = Vec::new();
    let mut x = 0.0;
    let mut prev = 0.0;
    for &g in grid {
        let dt = g - prev;
        let pois = Poisson::new(lam * dt)
            .map_err(|e| Error::SimConfig(format!("poisson intensity {}: {e}", lam * dt)))?;
        let count = pois.sample(rng) as usize;
        let mut interval_jumps = Vec::with_capacity(count);
        for _ in 0..count {
            let time = prev + unit_open_closed(rng) * dt;
            let size = jump_size(rng);
            x += size;
            interval_jumps.push((time, size));
        }
        interval_jumps.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        jumps.extend(interval_jumps);
        x -= drift_rate * dt;
        values.push(x);
        prev = g;
    }
    Ok(PathSample {
        values,
        jumps: Some(jumps),
    })
}

/// Draw `config.n_paths` independent paths, one RNG stream per path.
pub fn simulate(config: &SimConfig) -> Result<Vec<PathSample>> {
    config.validate()?;
    (0..config.n_paths)
        .into_par_iter()
        .map(|i| {
            let mut rng = path_rng(config.seed, i as u64);
            sample_path(&config.model, &config.grid, &mut rng)
        })
        .collect()
}

/// Power-jump variations at each grid time: `X^{(1)} = X_t`,
/// `X^{(2)} = sigma2 t + sum (dX)^2`, `X^{(k)} = sum (dX)^k` for `k >= 3`.
pub fn compute_variations(
    path: &PathSample,
    model: &LevyModel,
    grid: &[f64],
    max_n: usize,
) -> Result<PathVariations> {
    let jumps = path.jumps.as_ref().ok_or_else(|| {
        Error::VariationsUnsupported(format!(
            "{}: jumps are not enumerable, variations undefined",
            model.name
        ))
    })?;
    let max_n = max_n.max(1);
    let sigma2 = model.sigma2_f64();
    let mut power_sums = vec![0.0; max_n + 1];
    let mut jp = 0;
    let mut per_time = Vec::with_capacity(grid.len());
    for (i, &g) in grid.iter().enumerate() {
        while jp < jumps.len() && jumps[jp].0 <= g {
            let size = jumps[jp].1;
            let mut pw = size * size;
            for k in 2..=max_n {
                power_sums[k] += pw;
                pw *= size;
            }
            jp += 1;
        }
        let mut row = Vec::with_capacity(max_n);
        row.push(path.values[i]);
        if max_n >= 2 {
            row.push(sigma2 * g + power_sums[2]);
        }
        for k in 3..=max_n {
            row.push(power_sums[k]);
        }
        per_time.push(row);
    }
    Ok(PathVariations { per_time })
}

/// Iterated integrals `P_t^{(1)}..P_t^{(max_n)}` at each grid time.
pub fn compute_iterated_integrals(
    variations: &PathVariations,
    max_n: usize,
) -> Result<Vec<Vec<f64>>> {
    variations
        .per_time
        .iter()
        .map(|row| Ok(kailath_segall::ks_evaluate_all(row, max_n)?[1..].to_vec()))
        .collect()
}

fn mean_and_se(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

fn make_verdict(
    statistic: String,
    values: &[f64],
    target: f64,
    confidence: f64,
) -> Result<McVerdict> {
    if values.len() < 100 {
        return Err(Error::SimConfig(format!(
            "statistical verdicts need at least 100 paths, got {}",
            values.len()
        )));
    }
    let (estimate, std_error) = mean_and_se(values);
    if !std_error.is_finite() || std_error == 0.0 {
        return Err(Error::DegenerateStatistic(format!(
            "{statistic}: standard error {std_error} (constant or non-finite statistic)"
        )));
    }
    let pass = (estimate - target).abs() <= confidence * std_error;
    Ok(McVerdict {
        statistic,
        estimate,
        std_error,
        target,
        pass,
        n_paths: values.len(),
    })
}

/// Numeric evaluator for `Q_n(x, tau)` at a fixed time: the exact
/// expansion coefficients are converted to binary64 once, then applied by
/// Horner's rule per sample.
pub struct QEvaluator {
    coeffs: Vec<f64>,
}

impl QEvaluator {
    pub fn new(model: &LevyModel, n: usize, tau: f64) -> Result<Self> {
        let coeffs = harmonic::q_expand_in_x(model, n)?
            .iter()
            .map(|a| {
                a.eval_f64(|v| match v {
                    v if v == vars::T => Some(tau),
                    v if v == vars::E => Some(eps_half()),
                    _ => None,
                })
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok(QEvaluator { coeffs })
    }

    pub fn eval(&self, x: f64) -> f64 {
        let mut acc = 0.0;
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }
}

/// Per-path values of `Q_n(X_t, t)` and of the increment
/// `Q_n(X_t, t) - Q_n(X_s, s)`.
pub struct MartingaleSamples {
    pub at_t: Vec<f64>,
    pub increment: Vec<f64>,
}

pub fn martingale_samples(
    config: &SimConfig,
    n: usize,
    s: f64,
    t: f64,
) -> Result<MartingaleSamples> {
    if !(s < t) {
        return Err(Error::SimConfig(format!("need s < t, got s = {s}, t = {t}")));
    }
    let is = config.grid_index(s)?;
    let it = config.grid_index(t)?;
    let eval_s = QEvaluator::new(&config.model, n, s)?;
    let eval_t = QEvaluator::new(&config.model, n, t)?;
    let paths = simulate(config)?;
    let mut at_t = Vec::with_capacity(paths.len());
    let mut increment = Vec::with_capacity(paths.len());
    for path in &paths {
        let qt = eval_t.eval(path.values[it]);
        let qs = eval_s.eval(path.values[is]);
        at_t.push(qt);
        increment.push(qt - qs);
    }
    Ok(MartingaleSamples { at_t, increment })
}

/// Two verdicts: `mean Q_n(X_t, t) = 0` and `mean [Q_n(X_t, t) -
/// Q_n(X_s, s)] = 0`, both gated at `confidence` standard errors.
pub fn mc_martingale_test(
    config: &SimConfig,
    n: usize,
    s: f64,
    t: f64,
) -> Result<Vec<McVerdict>> {
    let samples = martingale_samples(config, n, s, t)?;
    let model = &config.model.name;
    Ok(vec![
        make_verdict(
            format!("martingale-mean:{model}:n={n},t={t}"),
            &samples.at_t,
            0.0,
            config.confidence,
        )?,
        make_verdict(
            format!("martingale-increment:{model}:n={n},s={s},t={t}"),
            &samples.increment,
            0.0,
            config.confidence,
        )?,
    ])
}

/// Per-path products `P_t^{(n)} P_t^{(m)}`.
pub fn orthogonality_samples(
    config: &SimConfig,
    n: usize,
    m: usize,
    t: f64,
) -> Result<Vec<f64>> {
    let it = config.grid_index(t)?;
    let max_k = n.max(m).max(1);
    let paths = simulate(config)?;
    let mut products = Vec::with_capacity(paths.len());
    for path in &paths {
        let vars_row = &compute_variations(path, &config.model, &config.grid, max_k)?
            .per_time[it];
        let p = kailath_segall::ks_evaluate_all(vars_row, max_k)?;
        products.push(p[n] * p[m]);
    }
    Ok(products)
}

/// Diagonal of the iterated-integral covariance for the unit-rate
/// compensated Poisson process, by direct expectation over the jump count:
/// conditioned on `N_t = j`, the variations are `(j - t, j, j, ...)`, so
/// `E[(P_t^{(n)})^2] = sum_j pmf(j; t) P_n(j - t, j, ..., j)^2`.
pub fn poisson_diagonal_oracle(n: usize, t: f64) -> Result<f64> {
    let mut pmf = (-t).exp();
    let mut acc = 0.0;
    let mut j = 0usize;
    loop {
        let mut row = vec![j as f64; n.max(1)];
        row[0] = j as f64 - t;
        let p = kailath_segall::ks_evaluate(&row, n)?;
        acc += pmf * p * p;
        j += 1;
        let next = pmf * t / j as f64;
        if j > 20 && next * (j as f64).powi(2 * n as i32) < acc.abs() * 1e-16 {
            break;
        }
        if j > 400 {
            break;
        }
        pmf = next;
    }
    Ok(acc)
}

fn factorial_f64(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Off-diagonal products target 0 for any enumerable model; the diagonal
/// target is `t^n/n!` for Brownian motion and the enumeration oracle's
/// value for the unit-rate Poisson model.
pub fn mc_orthogonality_test(
    config: &SimConfig,
    n: usize,
    m: usize,
    t: f64,
) -> Result<McVerdict> {
    let target = if n != m {
        0.0
    } else {
        match &config.model.kind {
            ModelKind::Brownian => t.powi(n as i32) / factorial_f64(n),
            ModelKind::CompensatedPoisson { rate }
                if crate::rat::to_f64(rate) == 1.0 =>
            {
                poisson_diagonal_oracle(n, t)?
            }
            _ => {
                return Err(Error::SimConfig(format!(
                    "diagonal target is only known for brownian and poisson:1, not {}",
                    config.model.name
                )))
            }
        }
    };
    let products = orthogonality_samples(config, n, m, t)?;
    make_verdict(
        format!("orthogonality:{}:n={n},m={m},t={t}", config.model.name),
        &products,
        target,
        config.confidence,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(spec: &str, grid: &[f64], n_paths: usize, seed: u64) -> SimConfig {
        SimConfig::new(
            LevyModel::parse(spec).unwrap(),
            grid.to_vec(),
            n_paths,
            seed,
        )
        .unwrap()
    }

    #[test]
    fn config_validation() {
        let m = LevyModel::parse("brownian").unwrap();
        assert!(SimConfig::new(m.clone(), vec![], 10, 0).is_err());
        assert!(SimConfig::new(m.clone(), vec![1.0, 0.5], 10, 0).is_err());
        assert!(SimConfig::new(m.clone(), vec![0.0, 1.0], 10, 0).is_err());
        assert!(SimConfig::new(m.clone(), vec![0.5, 1.0], 0, 0).is_err());
        assert!(SimConfig::new(m, vec![0.5, 1.0], 10, 0).is_ok());
    }

    #[test]
    fn brownian_paths_are_centered() {
        let c = cfg("brownian", &[1.0], 20_000, 7);
        let paths = simulate(&c).unwrap();
        let xs: Vec<f64> = paths.iter().map(|p| p.values[0]).collect();
        let (mean, se) = mean_and_se(&xs);
        assert!(mean.abs() <= 3.0 * se, "mean {mean}, se {se}");
        // Empty but present jump record: Brownian jumps are enumerable.
        assert_eq!(paths[0].jumps.as_deref(), Some(&[][..]));
    }

    #[test]
    fn poisson_paths_are_integer_steps() {
        let c = cfg("poisson:1", &[0.25, 0.5, 0.75, 1.0], 50, 11);
        for path in simulate(&c).unwrap() {
            let mut prev = 0.0;
            for (i, &g) in c.grid.iter().enumerate() {
                // X_t + t recovers N_t: a nondecreasing integer count.
                let n_t = path.values[i] + g;
                assert!((n_t - n_t.round()).abs() < 1e-9, "count {n_t}");
                assert!(n_t >= prev - 1e-9);
                prev = n_t;
            }
        }
    }

    #[test]
    fn gamma_second_moment_matches() {
        // E[X_1^2] = mu_2(1) = m_2 = 1.
        let c = cfg("gamma", &[1.0], 20_000, 13);
        let sq: Vec<f64> = simulate(&c)
            .unwrap()
            .iter()
            .map(|p| p.values[0] * p.values[0])
            .collect();
        let (mean, se) = mean_and_se(&sq);
        assert!((mean - 1.0).abs() <= 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn variations_brownian_and_poisson() {
        let c = cfg("brownian", &[0.5, 1.0], 10, 3);
        let paths = simulate(&c).unwrap();
        let v = compute_variations(&paths[0], &c.model, &c.grid, 4).unwrap();
        for (i, &g) in c.grid.iter().enumerate() {
            assert_eq!(v.per_time[i][0], paths[0].values[i]);
            assert_eq!(v.per_time[i][1], g); // [W, W]_t = t exactly
            assert_eq!(v.per_time[i][2], 0.0);
            assert_eq!(v.per_time[i][3], 0.0);
        }

        let c = cfg("poisson:1", &[1.0, 2.0], 40, 5);
        for path in simulate(&c).unwrap() {
            let v = compute_variations(&path, &c.model, &c.grid, 3).unwrap();
            for (i, &g) in c.grid.iter().enumerate() {
                let n_t = path.values[i] + g;
                // Unit jumps: every power-jump sum equals the count.
                assert!((v.per_time[i][1] - n_t).abs() < 1e-9);
                assert!((v.per_time[i][2] - n_t).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn variations_reject_infinite_activity() {
        let c = cfg("gamma", &[1.0], 5, 1);
        let paths = simulate(&c).unwrap();
        assert!(matches!(
            compute_variations(&paths[0], &c.model, &c.grid, 2),
            Err(Error::VariationsUnsupported(_))
        ));
    }

    #[test]
    fn single_jump_variation() {
        let path = PathSample {
            values: vec![1.5],
            jumps: Some(vec![(0.3, 2.0)]),
        };
        let m = LevyModel::parse("poisson:1").unwrap();
        let v = compute_variations(&path, &m, &[1.0], 4).unwrap();
        assert_eq!(v.per_time[0][1], 4.0);
        assert_eq!(v.per_time[0][2], 8.0);
        assert_eq!(v.per_time[0][3], 16.0);
    }

    #[test]
    fn iterated_integrals_known_values() {
        // Brownian: P^{(2)} = (X_t^2 - t)/2.
        let c = cfg("brownian", &[1.0], 20, 17);
        for path in simulate(&c).unwrap() {
            let v = compute_variations(&path, &c.model, &c.grid, 2).unwrap();
            let p = compute_iterated_integrals(&v, 2).unwrap();
            let x = path.values[0];
            assert!((p[0][1] - (x * x - 1.0) / 2.0).abs() < 1e-12);
        }
        // Poisson before the first jump: X_t = -t, X^{(k>=2)} = 0, so
        // P^{(n)} = (-t)^n/n!.
        let v = PathVariations {
            per_time: vec![vec![-0.5, 0.0, 0.0]],
        };
        let p = compute_iterated_integrals(&v, 3).unwrap();
        assert!((p[0][0] - (-0.5)).abs() < 1e-12);
        assert!((p[0][1] - 0.25 / 2.0).abs() < 1e-12);
        assert!((p[0][2] - (-0.125) / 6.0).abs() < 1e-12);
    }

    #[test]
    fn determinism_across_thread_counts() {
        let c = cfg("sum:brownian+poisson:1", &[0.5, 1.0], 500, 99);
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| simulate(&c).unwrap())
        };
        let a = run(1);
        let b = run(4);
        assert_eq!(a, b);
        let v1 = mc_martingale_test(&c, 3, 0.5, 1.0).unwrap();
        let v2 = mc_martingale_test(&c, 3, 0.5, 1.0).unwrap();
        assert_eq!(v1[0].estimate.to_bits(), v2[0].estimate.to_bits());
        assert_eq!(v1[1].std_error.to_bits(), v2[1].std_error.to_bits());
    }

    #[test]
    fn two_evaluation_orders_agree() {
        // Horner over precomputed a_j(t) vs direct exact-polynomial
        // evaluation with x, t bound.
        let c = cfg("poisson:1", &[1.0], 50, 23);
        let q = harmonic::q_closed(&c.model, 4).unwrap().poly;
        let eval = QEvaluator::new(&c.model, 4, 1.0).unwrap();
        for path in simulate(&c).unwrap() {
            let x = path.values[0];
            let direct = q
                .eval_f64(|v| match v {
                    v if v == vars::X => Some(x),
                    v if v == vars::T => Some(1.0),
                    v if v == vars::E => Some(eps_half()),
                    _ => None,
                })
                .unwrap();
            let horner = eval.eval(x);
            let denom = direct.abs().max(1.0);
            assert!(
                ((direct - horner) / denom).abs() < 1e-9,
                "{direct} vs {horner}"
            );
        }
    }

    #[test]
    fn martingale_gate_smoke() {
        let c = cfg("brownian", &[0.5, 1.0], 10_000, 41);
        let verdicts = mc_martingale_test(&c, 2, 0.5, 1.0).unwrap();
        assert_eq!(verdicts.len(), 2);
        for v in &verdicts {
            assert!(v.pass, "{}: {} vs {}", v.statistic, v.estimate, v.std_error);
            assert!(v.std_error > 0.0);
        }
    }

    #[test]
    fn martingale_increments_uncorrelated() {
        // E[Q(X_s, s) * (Q(X_t, t) - Q(X_s, s))] = 0 by the martingale
        // property; check the product mean within 3 SE.
        let c = cfg("brownian", &[0.5, 1.0], 20_000, 43);
        let samples = martingale_samples(&c, 3, 0.5, 1.0).unwrap();
        let products: Vec<f64> = samples
            .at_t
            .iter()
            .zip(&samples.increment)
            .map(|(qt, inc)| (qt - inc) * inc)
            .collect();
        let (mean, se) = mean_and_se(&products);
        assert!(mean.abs() <= 3.0 * se, "mean {mean}, se {se}");
    }

    #[test]
    fn orthogonality_smoke() {
        let c = cfg("brownian", &[1.0], 20_000, 47);
        let v = mc_orthogonality_test(&c, 1, 2, 1.0).unwrap();
        assert_eq!(v.target, 0.0);
        assert!(v.pass, "{}: {}", v.statistic, v.estimate);
        let v = mc_orthogonality_test(&c, 2, 2, 1.0).unwrap();
        assert_eq!(v.target, 0.5);
        assert!(v.pass, "{}: {} vs {}", v.statistic, v.estimate, v.target);
    }

    #[test]
    fn poisson_oracle_matches_second_moment() {
        // E[(P^{(1)})^2] = E[X_t^2] = t for the unit-rate model.
        for t in [0.5, 1.0, 2.0] {
            let d = poisson_diagonal_oracle(1, t).unwrap();
            assert!((d - t).abs() < 1e-10, "t = {t}: {d}");
        }
    }

    #[test]
    fn error_paths() {
        let c = cfg("brownian", &[0.5, 1.0], 200, 1);
        // Q_0 is constant: degenerate statistic.
        assert!(matches!(
            mc_martingale_test(&c, 0, 0.5, 1.0),
            Err(Error::DegenerateStatistic(_))
        ));
        // Times must be on the grid.
        assert!(mc_martingale_test(&c, 2, 0.25, 1.0).is_err());
        assert!(mc_martingale_test(&c, 2, 1.0, 0.5).is_err());
        // Too few paths for a verdict.
        let tiny = cfg("brownian", &[0.5, 1.0], 10, 1);
        assert!(mc_martingale_test(&tiny, 2, 0.5, 1.0).is_err());
        // No sampler for user-defined cumulant lists.
        let custom =
            LevyModel::from_config_str(r#"{"sigma2":"1","m":[]}"#).unwrap();
        let cc = SimConfig::new(custom, vec![1.0], 200, 1).unwrap();
        assert!(matches!(simulate(&cc), Err(Error::NoSampler(_))));
        // Diagonal target undefined away from brownian / poisson:1.
        let g = cfg("poisson:2", &[1.0], 200, 1);
        assert!(mc_orthogonality_test(&g, 2, 2, 1.0).is_err());
    }

    #[test]
    fn lognormal_second_moment() {
        // E[X_1^2] = e^2.
        let c = cfg("cp-lognormal", &[1.0], 40_000, 53);
        let sq: Vec<f64> = simulate(&c)
            .unwrap()
            .iter()
            .map(|p| p.values[0] * p.values[0])
            .collect();
        let (mean, se) = mean_and_se(&sq);
        let target = std::f64::consts::E.powi(2);
        assert!((mean - target).abs() <= 3.0 * se, "mean {mean}, se {se}");
    }
}
