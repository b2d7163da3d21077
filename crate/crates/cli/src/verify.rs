//! Randomized verification campaigns behind `entangle verify`. Every trial
//! derives its own seed from (base seed, suite, trial index), so campaigns
//! reproduce exactly regardless of worker count, and failures can be
//! replayed from the printed seed alone.

use entangle_core::{
    entanglement_closed_form, entanglement_report, majorizes, monotonicity_trial,
    monotonicity_trial_paired, power_sum, random_measurement_set, random_pure_state,
    random_unitary, schmidt_decompose, LocalMeasurementSet, MonotonicityTrial, PairedInstrument,
};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Equivalence,
    Invariance,
    Monotonicity,
    Majorization,
}

impl Suite {
    pub const ALL: [Suite; 4] = [
        Suite::Equivalence,
        Suite::Invariance,
        Suite::Monotonicity,
        Suite::Majorization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Equivalence => "equivalence",
            Suite::Invariance => "invariance",
            Suite::Monotonicity => "monotonicity",
            Suite::Majorization => "majorization",
        }
    }

    fn id(self) -> u64 {
        match self {
            Suite::Equivalence => 1,
            Suite::Invariance => 2,
            Suite::Monotonicity => 3,
            Suite::Majorization => 4,
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub trials: u64,
    pub max_dim: usize,
    pub seed: u64,
    pub tolerance: f64,
    pub jobs: usize,
}

#[derive(Debug)]
struct TrialRecord {
    trial: u64,
    seed: u64,
    /// Route gap (equivalence), |ΔE| (invariance), margin (monotonicity),
    /// or Schur slack E(x) − E(y) (majorization).
    stat: f64,
    failure: Option<String>,
}

#[derive(Debug)]
pub struct SuiteSummary {
    pub suite: Suite,
    pub trials: u64,
    pub failed: usize,
    pub headline: String,
    pub failures: Vec<String>,
}

/// Deterministic per-trial randomness: a splitmix64 stream keyed by base
/// seed, suite, and trial index.
struct SeedStream {
    state: u64,
}

impl SeedStream {
    fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    fn next(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform integer in lo..=hi.
    fn range(&mut self, lo: usize, hi: usize) -> usize {
        debug_assert!(hi >= lo);
        lo + (self.next() % (hi - lo + 1) as u64) as usize
    }

    /// Uniform f64 in [0, 1).
    fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }
}

fn trial_seed(base: u64, suite: Suite, trial: u64) -> u64 {
    let mut stream = SeedStream::new(
        base ^ suite.id().wrapping_mul(0x9E3779B97F4A7C15)
            ^ trial.wrapping_mul(0xD1B54A32D192ED03),
    );
    stream.next()
}

fn equivalence_trial(
    stream: &mut SeedStream,
    cfg: &VerifyConfig,
) -> entangle_core::Result<(f64, Option<String>)> {
    let dim_a = stream.range(2, cfg.max_dim);
    let dim_b = stream.range(2, cfg.max_dim);
    let psi = random_pure_state(dim_a, dim_b, stream.next());
    let report = entanglement_report(&psi)?;
    let gap = (report.e_probability_sum - report.e_closed_form).abs();
    let failure = (gap > cfg.tolerance)
        .then(|| format!("measure routes disagree by {gap:.3e} (tolerance {:.1e})", cfg.tolerance));
    Ok((gap, failure))
}

fn invariance_trial(
    stream: &mut SeedStream,
    cfg: &VerifyConfig,
) -> entangle_core::Result<(f64, Option<String>)> {
    let dim_a = stream.range(2, cfg.max_dim);
    let dim_b = stream.range(2, cfg.max_dim);
    let psi = random_pure_state(dim_a, dim_b, stream.next());
    let u_a = random_unitary(dim_a, stream.next());
    let u_b = random_unitary(dim_b, stream.next());
    let rotated = psi.apply_local_unitaries(&u_a, &u_b)?;
    let before = entanglement_closed_form(schmidt_decompose(&psi)?.lambdas())?;
    let after = entanglement_closed_form(schmidt_decompose(&rotated)?.lambdas())?;
    let delta = (before - after).abs();
    let failure = (delta > cfg.tolerance).then(|| {
        format!("local unitaries moved E by {delta:.3e} (tolerance {:.1e})", cfg.tolerance)
    });
    Ok((delta, failure))
}

fn monotonicity_campaign_trial(
    stream: &mut SeedStream,
    cfg: &VerifyConfig,
) -> entangle_core::Result<(f64, Option<String>)> {
    let dim_a = stream.range(2, cfg.max_dim);
    let dim_b = stream.range(2, cfg.max_dim);
    let psi = random_pure_state(dim_a, dim_b, stream.next());
    let trial: MonotonicityTrial = match stream.range(0, 3) {
        0 => {
            let set_a = random_measurement_set(dim_a, stream.range(2, 4), stream.next())?;
            monotonicity_trial(&psi, &set_a, &LocalMeasurementSet::trivial(dim_b))?
        }
        1 => {
            let set_b = random_measurement_set(dim_b, stream.range(2, 4), stream.next())?;
            monotonicity_trial(&psi, &LocalMeasurementSet::trivial(dim_a), &set_b)?
        }
        2 => {
            let set_a = random_measurement_set(dim_a, 2, stream.next())?;
            let set_b = random_measurement_set(dim_b, 2, stream.next())?;
            monotonicity_trial_paired(&psi, &PairedInstrument::product(&set_a, &set_b)?)?
        }
        _ => {
            let k = stream.range(2, 4);
            let set_a = random_measurement_set(dim_a, k, stream.next())?;
            let feedback = (0..k).map(|_| random_unitary(dim_b, stream.next())).collect();
            monotonicity_trial_paired(
                &psi,
                &PairedInstrument::with_unitary_feedback(&set_a, feedback)?,
            )?
        }
    };
    let failure = (trial.margin < -cfg.tolerance).then(|| {
        format!(
            "average entanglement grew: margin {:.3e} (tolerance {:.1e})",
            trial.margin, cfg.tolerance
        )
    });
    Ok((trial.margin, failure))
}

fn majorization_trial(
    stream: &mut SeedStream,
    cfg: &VerifyConfig,
) -> entangle_core::Result<(f64, Option<String>)> {
    let n = stream.range(2, cfg.max_dim);
    let mut y: Vec<f64> = (0..n).map(|_| stream.unit() + 1e-9).collect();
    let total: f64 = y.iter().sum();
    for value in &mut y {
        *value /= total;
    }
    y.sort_by(|a, b| b.partial_cmp(a).unwrap());
    // Degrade y by averaging entry pairs (doubly stochastic moves), so the
    // result x must sit below y in the majorization order and, the measure
    // being Schur concave, above it in entanglement.
    let mut x = y.clone();
    for _ in 0..stream.range(1, 3) {
        let i = stream.range(0, n - 1);
        let j = stream.range(0, n - 1);
        if i == j {
            continue;
        }
        let t = stream.unit();
        let (xi, xj) = (x[i], x[j]);
        x[i] = (1.0 - t) * xi + t * xj;
        x[j] = t * xi + (1.0 - t) * xj;
    }
    if !majorizes(&x, &y)? {
        return Ok((f64::NEG_INFINITY, Some("mixed copy escaped the majorization order".into())));
    }
    let e_x = entanglement_closed_form(&x)?;
    let e_y = entanglement_closed_form(&y)?;
    let slack = e_x - e_y;
    if slack < -cfg.tolerance {
        return Ok((
            slack,
            Some(format!(
                "Schur concavity violated: E(mixed) − E(original) = {slack:.3e}",
            )),
        ));
    }
    if power_sum(&x, 2.0) > power_sum(&y, 2.0) + cfg.tolerance {
        return Ok((slack, Some("power sum grew under mixing".into())));
    }
    Ok((slack, None))
}

fn run_trial(suite: Suite, trial: u64, cfg: &VerifyConfig) -> TrialRecord {
    let seed = trial_seed(cfg.seed, suite, trial);
    let mut stream = SeedStream::new(seed);
    let outcome = match suite {
        Suite::Equivalence => equivalence_trial(&mut stream, cfg),
        Suite::Invariance => invariance_trial(&mut stream, cfg),
        Suite::Monotonicity => monotonicity_campaign_trial(&mut stream, cfg),
        Suite::Majorization => majorization_trial(&mut stream, cfg),
    };
    match outcome {
        Ok((stat, failure)) => TrialRecord { trial, seed, stat, failure },
        Err(e) => TrialRecord {
            trial,
            seed,
            stat: f64::NAN,
            failure: Some(format!("trial errored: {e}")),
        },
    }
}

fn run_suite(suite: Suite, cfg: &VerifyConfig) -> SuiteSummary {
    let jobs = cfg.jobs.max(1).min(cfg.trials as usize);
    let mut records: Vec<TrialRecord>;
    if jobs <= 1 {
        records = (0..cfg.trials).map(|t| run_trial(suite, t, cfg)).collect();
    } else {
        let chunks: Vec<Vec<TrialRecord>> = std::thread::scope(|scope| {
            let handles: Vec<_> = (0..jobs)
                .map(|worker| {
                    scope.spawn(move || {
                        let mut out = Vec::new();
                        let mut trial = worker as u64;
                        while trial < cfg.trials {
                            out.push(run_trial(suite, trial, cfg));
                            trial += jobs as u64;
                        }
                        out
                    })
                })
                .collect();
            handles.into_iter().map(|h| h.join().expect("verify worker panicked")).collect()
        });
        records = chunks.into_iter().flatten().collect();
        records.sort_by_key(|r| r.trial);
    }

    let mut stats: Vec<f64> = records
        .iter()
        .filter(|r| r.failure.is_none())
        .map(|r| r.stat)
        .collect();
    stats.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let headline = match suite {
        Suite::Equivalence => format!(
            "worst route gap {}",
            stats.last().map_or("n/a".into(), |s| format!("{s:.3e}"))
        ),
        Suite::Invariance => format!(
            "worst |ΔE| {}",
            stats.last().map_or("n/a".into(), |s| format!("{s:.3e}"))
        ),
        Suite::Monotonicity => {
            let min = stats.first().map_or("n/a".into(), |s| format!("{s:.3e}"));
            let median = if stats.is_empty() {
                "n/a".into()
            } else {
                format!("{:.3e}", stats[stats.len() / 2])
            };
            format!("min margin {min}; median margin {median}")
        }
        Suite::Majorization => format!(
            "min Schur slack {}",
            stats.first().map_or("n/a".into(), |s| format!("{s:.3e}"))
        ),
    };
    let failures: Vec<String> = records
        .iter()
        .filter_map(|r| {
            r.failure
                .as_ref()
                .map(|msg| format!("trial {} (seed {}): {msg}", r.trial, r.seed))
        })
        .collect();
    SuiteSummary {
        suite,
        trials: cfg.trials,
        failed: failures.len(),
        headline,
        failures,
    }
}

/// Runs the selected suites (all of them when `selection` is `None`),
/// printing one summary line per suite plus details for the first failures.
/// Errors with exit code 1 if any trial failed.
pub fn run(selection: Option<Suite>, cfg: &VerifyConfig) -> Result<(), CliError> {
    let suites: Vec<Suite> = match selection {
        Some(s) => vec![s],
        None => Suite::ALL.to_vec(),
    };
    println!(
        "verify campaign: seed {}, {} trials per suite, max dim {}, tolerance {:.1e}, jobs {}",
        cfg.seed, cfg.trials, cfg.max_dim, cfg.tolerance, cfg.jobs,
    );
    let mut total_failed = 0usize;
    let mut total_trials = 0u64;
    for suite in suites {
        let summary = run_suite(suite, cfg);
        total_failed += summary.failed;
        total_trials += summary.trials;
        println!(
            "suite {:<12} {:>5}/{} passed; {}",
            summary.suite.name(),
            summary.trials - summary.failed as u64,
            summary.trials,
            summary.headline,
        );
        for line in summary.failures.iter().take(5) {
            println!("  {line}");
        }
        if summary.failures.len() > 5 {
            println!("  ... and {} more", summary.failures.len() - 5);
        }
    }
    if total_failed > 0 {
        println!("verify: FAIL ({total_failed} of {total_trials} trials failed)");
        Err(CliError::Failure(format!("{total_failed} verification trials failed")))
    } else {
        println!("verify: PASS ({total_trials} trials)");
        Ok(())
    }
}
