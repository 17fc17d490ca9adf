//! Named verification suites: seeded property sweeps over random instances.
//!
//! Each suite draws one RNG stream per trial from `(seed, trial index)`, so
//! reports are deterministic, order-independent, and reproducible
//! bit-for-bit; failing trials embed the full instance matrices. Trials run
//! on the rayon pool by default (`run_suite`) with a sequential engine
//! (`run_suite_seq`) for single-threaded timing.
//!
//! Thresholds are pinned here per property, not taken from the tolerance
//! policy: a suite is an acceptance gate, not a configurable comparison.

use crate::cstar::{self, FiniteCStarAlgebra};
use crate::gen;
use crate::geninv::{mp_inverse, verify_penrose};
use crate::matrix::ComplexMatrix;
use crate::parallel::{
    check_norm_bound, douglas_factor, is_parallel_summable, parallel_sum, range_sum_check,
    shared_isometry_pair, submodule_sum_decomposition,
};
use crate::positive::psd_sqrt;
use crate::subspace::{range_projector, subspace_meet};
use crate::svd::{operator_norm, svd};
use crate::symbolic;
use crate::tol::TolerancePolicy;
use crate::{Complex64, Error};
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::time::Instant;

/// Residual bound for the four Penrose equations, scaled by `1 + |T|`.
const PENROSE_ATOL: f64 = 1e-9;
/// Bound for algebraic operator identities, scaled by the operand norms.
const IDENTITY_ATOL: f64 = 1e-8;
/// Allowed margin violation of the scalar norm bound.
const BOUND_MARGIN: f64 = 1e-10;
/// Bound for the triangle equality of shared-isometry pairs.
const TRIANGLE_ATOL: f64 = 1e-9;
/// Bound for exact-by-construction module identities.
const MODULE_ATOL: f64 = 1e-10;
/// Spread tolerance for {1}-inverse invariance on summable pairs.
const INVARIANCE_ATOL: f64 = 1e-8;
/// Rank cutoff used when projecting ranges of *derived* operators (such as
/// a computed parallel sum): sits above pseudoinverse noise but far below
/// the retained spectra the generators guarantee.
const DERIVED_RANK_RTOL: f64 = 1e-9;

pub const SUITE_NAMES: &[&str] = &[
    "penrose",
    "remark21",
    "thm31",
    "thm32",
    "prop41",
    "prop42",
    "prop43",
    "prop44",
    "prop45",
    "prop46",
    "thm51",
    "thm52",
    "prop61",
    "module-layer",
];

/// Configuration of one suite run.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub trials: u32,
    pub max_dim: usize,
    pub tol: TolerancePolicy,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 0,
            trials: 500,
            max_dim: 16,
            tol: TolerancePolicy::default(),
        }
    }
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<(), Error> {
        if self.trials < 1 {
            return Err(Error::Parse("trials must be >= 1".into()));
        }
        if self.max_dim < 2 || self.max_dim > 64 {
            return Err(Error::Parse("max-dim must lie in 2..=64".into()));
        }
        self.tol.validate()
    }
}

/// A failing instance, dumped in full for replay.
#[derive(Debug, Clone, Serialize)]
pub struct FailureDump {
    pub trial: u64,
    pub residual: f64,
    pub note: String,
    pub matrices: Vec<NamedMatrix>,
}

#[derive(Debug, Clone, Serialize)]
pub struct NamedMatrix {
    pub name: String,
    pub matrix: ComplexMatrix,
}

/// Aggregated outcome of one property across all trials.
#[derive(Debug, Clone, Serialize)]
pub struct PropertyStats {
    pub name: String,
    pub passes: u32,
    pub failures: u32,
    pub worst_residual: f64,
    pub worst_trial: u64,
    pub failure: Option<FailureDump>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub generator_version: String,
    pub seed: u64,
    pub trials: u32,
    pub max_dim: usize,
    /// Instances resampled because their spectra sat too close to a rank
    /// decision boundary.
    pub excluded: u32,
    pub properties: Vec<PropertyStats>,
    pub failures: u32,
    /// Observations recorded without asserting, e.g. candidates touching
    /// open questions; capped to keep reports bounded.
    pub notes: Vec<String>,
    pub wall_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

// ---------------------------------------------------------------------------
// Trial plumbing

#[derive(Debug, Clone)]
struct Check {
    prop: &'static str,
    residual: f64,
    pass: bool,
    dump: Option<(String, Vec<NamedMatrix>)>,
}

#[derive(Debug, Clone, Default)]
struct TrialOutcome {
    checks: Vec<Check>,
    excluded: u32,
    /// Free-form observations recorded without asserting (open-question
    /// candidates found during sweeps).
    notes: Vec<String>,
}

impl TrialOutcome {
    /// Record a residual-comparison check.
    fn check(&mut self, prop: &'static str, residual: f64, threshold: f64) -> bool {
        let pass = residual <= threshold;
        self.checks.push(Check {
            prop,
            residual,
            pass,
            dump: None,
        });
        pass
    }

    /// Record a boolean check; `residual` is reported for diagnostics.
    fn check_bool(&mut self, prop: &'static str, ok: bool, residual: f64) -> bool {
        self.checks.push(Check {
            prop,
            residual,
            pass: ok,
            dump: None,
        });
        ok
    }

    /// Attach an instance dump to the most recent check if it failed.
    fn dump_on_failure(&mut self, note: &str, matrices: &[(&str, &ComplexMatrix)]) {
        if let Some(last) = self.checks.last_mut() {
            if !last.pass && last.dump.is_none() {
                last.dump = Some((
                    note.to_string(),
                    matrices
                        .iter()
                        .map(|(name, m)| NamedMatrix {
                            name: (*name).to_string(),
                            matrix: (*m).clone(),
                        })
                        .collect(),
                ));
            }
        }
    }

    fn error(&mut self, prop: &'static str, err: &Error) {
        self.checks.push(Check {
            prop,
            residual: f64::INFINITY,
            pass: false,
            dump: Some((format!("unexpected error: {err}"), Vec::new())),
        });
    }
}

fn aggregate(
    suite: &str,
    cfg: &SuiteConfig,
    outcomes: Vec<TrialOutcome>,
    wall_ms: f64,
) -> SuiteReport {
    let mut order: Vec<&'static str> = Vec::new();
    let mut stats: std::collections::HashMap<&'static str, PropertyStats> =
        std::collections::HashMap::new();
    let mut excluded = 0;
    let mut notes: Vec<String> = Vec::new();
    for (trial, outcome) in outcomes.into_iter().enumerate() {
        excluded += outcome.excluded;
        if notes.len() < 32 {
            notes.extend(outcome.notes);
            notes.truncate(32);
        }
        for check in outcome.checks {
            let entry = stats.entry(check.prop).or_insert_with(|| {
                order.push(check.prop);
                PropertyStats {
                    name: check.prop.to_string(),
                    passes: 0,
                    failures: 0,
                    worst_residual: f64::NEG_INFINITY,
                    worst_trial: 0,
                    failure: None,
                }
            });
            if check.pass {
                entry.passes += 1;
            } else {
                entry.failures += 1;
            }
            if check.residual > entry.worst_residual {
                entry.worst_residual = check.residual;
                entry.worst_trial = trial as u64;
            }
            if !check.pass {
                let replace = match &entry.failure {
                    None => true,
                    Some(prev) => check.residual > prev.residual,
                };
                if replace {
                    let (note, matrices) = check.dump.unwrap_or((String::new(), Vec::new()));
                    entry.failure = Some(FailureDump {
                        trial: trial as u64,
                        residual: check.residual,
                        note,
                        matrices,
                    });
                }
            }
        }
    }
    let properties: Vec<PropertyStats> = order
        .into_iter()
        .map(|k| stats.remove(k).unwrap())
        .collect();
    let failures = properties.iter().map(|p| p.failures).sum();
    SuiteReport {
        suite: suite.to_string(),
        generator_version: gen::GENERATOR_VERSION.to_string(),
        seed: cfg.seed,
        trials: cfg.trials,
        max_dim: cfg.max_dim,
        excluded,
        properties,
        failures,
        notes,
        wall_ms,
    }
}

type TrialFn = dyn Fn(&mut ChaCha12Rng, &SuiteConfig, u64) -> TrialOutcome + Sync;

fn drive(
    name: &str,
    cfg: &SuiteConfig,
    sequential: bool,
    trial: &TrialFn,
) -> Result<SuiteReport, Error> {
    cfg.validate()?;
    let start = Instant::now();
    let run_one = |i: u64| {
        let mut rng = gen::trial_rng(cfg.seed, i);
        trial(&mut rng, cfg, i)
    };
    let outcomes = if sequential {
        crate::sweep::run_trials_seq(cfg.trials as u64, run_one)
    } else {
        crate::sweep::run_trials(cfg.trials as u64, run_one)
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(aggregate(name, cfg, outcomes, wall_ms))
}

/// Run a named suite on the default engine (parallel when the feature is
/// enabled).
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    dispatch(name, cfg, false)
}

/// Run a named suite strictly sequentially (single-threaded timing).
pub fn run_suite_seq(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, Error> {
    dispatch(name, cfg, true)
}

fn dispatch(name: &str, cfg: &SuiteConfig, sequential: bool) -> Result<SuiteReport, Error> {
    let trial: &TrialFn = match name {
        "penrose" => &trial_penrose,
        "remark21" => &trial_remark21,
        "thm31" => &trial_thm31,
        "thm32" => &trial_thm32,
        "prop41" => &trial_prop41,
        "prop42" => &trial_prop42,
        "prop43" => &trial_prop43,
        "prop44" => &trial_prop44,
        "prop45" => &trial_prop45,
        "prop46" => &trial_prop46,
        "thm51" => &trial_thm51,
        "thm52" => &trial_thm52,
        "prop61" => &trial_prop61,
        "module-layer" => &trial_module_layer,
        _ => return Err(Error::UnknownSuite(name.to_string())),
    };
    drive(name, cfg, sequential, trial)
}

// ---------------------------------------------------------------------------
// Shared drawing helpers

fn scale_of(items: &[&ComplexMatrix]) -> f64 {
    1.0 + items.iter().map(|m| m.frobenius_norm()).sum::<f64>()
}

fn derived_tol(tol: &TolerancePolicy) -> TolerancePolicy {
    tol.with_rank_rtol(DERIVED_RANK_RTOL)
}

/// Range projection of a *derived* operator (a computed parallel sum),
/// with the rank cutoff absolute in the scale of the inputs: pseudoinverse
/// noise sits near `eps * scale`, far below it, while genuine directions
/// sit far above. A relative cutoff would misfire when the derived
/// operator is itself (numerically) zero.
fn derived_range(m: &ComplexMatrix, input_scale: f64) -> Result<crate::subspace::Subspace, Error> {
    let dec = svd(m)?;
    let cutoff = DERIVED_RANK_RTOL * input_scale.max(1.0);
    let r = dec.sigma.iter().filter(|&&s| s > cutoff).count();
    if r == 0 {
        return Ok(crate::subspace::Subspace::zero(m.rows()));
    }
    let ur = dec.u.columns(0, r);
    Ok(crate::subspace::Subspace {
        dim: r,
        projector: &ur * &ur.adjoint(),
    })
}

fn dim(rng: &mut ChaCha12Rng, cfg: &SuiteConfig) -> usize {
    rng.gen_range(2..=cfg.max_dim)
}

/// Split a dimension into shared/extra/extra parts for intersection tests,
/// keeping `shared + extra_a + extra_b <= n` so the generic intersection is
/// exactly the shared block, and each side non-trivial.
fn split_dims(rng: &mut ChaCha12Rng, n: usize) -> (usize, usize, usize) {
    let shared = rng.gen_range(0..=(n / 2));
    let budget = n - shared;
    let mut extra_a = rng.gen_range(0..=budget.min(n / 2));
    if shared + extra_a == 0 {
        extra_a = 1;
    }
    let mut extra_b = rng.gen_range(0..=(budget - extra_a).min(n / 2));
    if shared + extra_b == 0 {
        extra_b = 1;
    }
    (shared, extra_a, extra_b)
}

/// A psd pair with known shared range dimension and a well-conditioned sum.
fn psd_pair_for_trial(
    rng: &mut ChaCha12Rng,
    cfg: &SuiteConfig,
    out: &mut TrialOutcome,
) -> (ComplexMatrix, ComplexMatrix, usize) {
    let n = dim(rng, cfg);
    for _ in 0..16 {
        let (shared, ea, eb) = split_dims(rng, n);
        let (a, b, res) = gen::psd_pair_sharing(rng, n, shared, ea, eb);
        out.excluded += res;
        let sum = &a + &b;
        if gen::retained_ratio(&sum, &cfg.tol) >= gen::MIN_RETAINED_RATIO
            && operator_norm(&a) > 0.0
            && operator_norm(&b) > 0.0
        {
            return (a, b, shared);
        }
        out.excluded += 1;
    }
    // Deterministic safe fallback.
    (ComplexMatrix::identity(n), ComplexMatrix::identity(n), n)
}

// ---------------------------------------------------------------------------
// Suite trial bodies

fn trial_penrose(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let m = dim(rng, cfg);
    let n = dim(rng, cfg);
    let r = rng.gen_range(0..=m.min(n));
    let (t, res) = gen::matrix_rank_counted(rng, m, n, r);
    out.excluded += res;
    let tol = cfg.tol;

    match mp_inverse(&t, &tol) {
        Ok(x) => match verify_penrose(&t, &x) {
            Ok(p) => {
                let threshold = PENROSE_ATOL * (1.0 + operator_norm(&t));
                out.check("penrose residuals", p.max(), threshold);
                out.dump_on_failure(
                    &format!("penrose residuals {:?} exceed {threshold:.3e}", p),
                    &[("T", &t), ("X", &x)],
                );

                let adj = mp_inverse(&t.adjoint(), &tol).unwrap();
                let r = adj.diff_norm(&x.adjoint());
                out.check(
                    "adjoint commutes with pseudoinverse",
                    r,
                    IDENTITY_ATOL * scale_of(&[&x]),
                );
                out.dump_on_failure("(T*)^+ != (T^+)*", &[("T", &t)]);
            }
            Err(e) => out.error("penrose residuals", &e),
        },
        Err(e) => out.error("penrose residuals", &e),
    }

    // Positive branch: the root of the pseudoinverse is the pseudoinverse
    // of the root.
    let k = dim(rng, cfg);
    let kr = rng.gen_range(1..=k);
    let (s, res) = gen::psd_rank_counted(rng, k, kr);
    out.excluded += res;
    let result = (|| -> Result<f64, Error> {
        let pinv = mp_inverse(&s, &tol)?;
        let lhs = psd_sqrt(&pinv, &tol)?;
        let rhs = mp_inverse(&psd_sqrt(&s, &tol)?, &tol)?;
        Ok(lhs.diff_norm(&rhs))
    })();
    match result {
        Ok(r) => {
            out.check(
                "psd root commutes with pseudoinverse",
                r,
                IDENTITY_ATOL * (1.0 + k as f64),
            );
            out.dump_on_failure("(S^+)^(1/2) != (S^(1/2))^+", &[("S", &s)]);
        }
        Err(e) => out.error("psd root commutes with pseudoinverse", &e),
    }
    out
}

fn trial_remark21(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let m = dim(rng, cfg);
    let n = dim(rng, cfg);
    let r = rng.gen_range(0..=m.min(n));
    let (t, res) = gen::matrix_rank_counted(rng, m, n, r);
    out.excluded += res;

    let body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let pinv = mp_inverse(&t, &tol)?;
        let adj_pinv = mp_inverse(&t.adjoint(), &tol)?;
        out.check(
            "adjoint identity",
            adj_pinv.diff_norm(&pinv.adjoint()),
            IDENTITY_ATOL * scale_of(&[&pinv]),
        );
        out.dump_on_failure("(T*)^+ != (T^+)*", &[("T", &t)]);

        let gram = &t.adjoint() * &t;
        let gram_pinv = mp_inverse(&gram, &tol)?;
        let product = &pinv * &adj_pinv;
        out.check(
            "gram factorization",
            gram_pinv.diff_norm(&product),
            IDENTITY_ATOL * scale_of(&[&gram_pinv, &product]),
        );
        out.dump_on_failure("(T* T)^+ != T^+ (T*)^+", &[("T", &t)]);

        // Orthogonal decomposition: P_{R(T*)} + P_{N(T)} = I, with the null
        // projector taken independently from the trailing eigenvectors of
        // the Gram matrix.
        let rank = svd(&t)?.rank(&tol);
        let row_space = range_projector(&t.adjoint(), &tol)?;
        let null_proj = if rank == n {
            ComplexMatrix::zeros(n, n)
        } else {
            let eig = crate::eig::hermitian_eigen(&gram)?;
            let vn = eig.vectors.columns(rank, n);
            &vn * &vn.adjoint()
        };
        let idres = (&row_space.projector + &null_proj).diff_norm(&ComplexMatrix::identity(n));
        out.check(
            "orthogonal decomposition",
            idres,
            IDENTITY_ATOL * (1.0 + n as f64),
        );
        out.dump_on_failure("P_R(T*) + P_N(T) != I", &[("T", &t)]);
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("adjoint identity", &e);
    }

    // Hermitian and positive branches.
    let k = dim(rng, cfg);
    let mut h = gen::hermitian(rng, k);
    for _ in 0..16 {
        if gen::retained_ratio(&h, &tol) >= gen::MIN_RETAINED_RATIO {
            break;
        }
        out.excluded += 1;
        h = gen::hermitian(rng, k);
    }
    match mp_inverse(&h, &tol) {
        Ok(hp) => {
            let lhs = &h * &hp;
            let rhs = &hp * &h;
            out.check(
                "hermitian pinv commutes",
                lhs.diff_norm(&rhs),
                IDENTITY_ATOL * scale_of(&[&lhs]),
            );
            out.dump_on_failure("T T^+ != T^+ T for hermitian T", &[("T", &h)]);
        }
        Err(e) => out.error("hermitian pinv commutes", &e),
    }

    let kr = rng.gen_range(1..=k);
    let (s, res) = gen::psd_rank_counted(rng, k, kr);
    out.excluded += res;
    let body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let pinv = mp_inverse(&s, &tol)?;
        let min_eig = crate::eig::hermitian_eigen(&pinv)?
            .values
            .last()
            .copied()
            .unwrap_or(0.0);
        let scale = operator_norm(&pinv).max(1.0);
        out.check(
            "pseudoinverse of positive is positive",
            (-min_eig).max(0.0),
            tol.psd_atol * scale,
        );
        out.dump_on_failure("S^+ has a negative eigenvalue", &[("S", &s)]);

        let lhs = psd_sqrt(&pinv, &tol)?;
        let rhs = mp_inverse(&psd_sqrt(&s, &tol)?, &tol)?;
        out.check(
            "root of pseudoinverse",
            lhs.diff_norm(&rhs),
            IDENTITY_ATOL * scale_of(&[&lhs, &rhs]),
        );
        out.dump_on_failure("(S^+)^(1/2) != (S^(1/2))^+", &[("S", &s)]);
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("pseudoinverse of positive is positive", &e);
    }
    out
}

fn trial_thm31(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;

    // Mixed population: positive pairs, structured summable non-hermitian
    // pairs, and deliberate non-summable cancellation pairs.
    let (a, b) = match trial % 3 {
        0 => {
            let (a, b, _) = psd_pair_for_trial(rng, cfg, &mut out);
            (a, b)
        }
        1 => {
            let n = dim(rng, cfg);
            let r = rng.gen_range(1..=n);
            let (a, b, res) = gen::summable_pair(rng, n, r);
            out.excluded += res;
            (a, b)
        }
        _ => {
            let n = dim(rng, cfg);
            let kind = if trial.is_multiple_of(2) {
                gen::NonSummableKind::RowConditionFails
            } else {
                gen::NonSummableKind::ColumnConditionFails
            };
            gen::nonsummable_pair(rng, n, kind)
        }
    };

    match is_parallel_summable(&a, &b, &tol) {
        Ok(rep) => {
            let range_verdict = rep.range_row_a && rep.range_col_b;
            out.check_bool(
                "residual verdict agrees with range verdict",
                rep.summable == range_verdict,
                rep.residual_left.max(rep.residual_right),
            );
            out.dump_on_failure(
                &format!(
                    "residual verdict {} vs range verdict {range_verdict} \
                     (left {:.3e}, right {:.3e})",
                    rep.summable, rep.residual_left, rep.residual_right
                ),
                &[("A", &a), ("B", &b)],
            );

            // Each factorization condition pairs with its own range
            // inclusion, not just the conjunction.
            let left_ok = rep.residual_left <= rep.threshold;
            let right_ok = rep.residual_right <= rep.threshold;
            out.check_bool(
                "conditions pair with their range inclusions",
                left_ok == rep.range_row_a && right_ok == rep.range_col_b,
                rep.residual_left.max(rep.residual_right),
            );
            out.dump_on_failure(
                &format!(
                    "left {:.3e} vs row inclusion {}; right {:.3e} vs column inclusion {}",
                    rep.residual_left, rep.range_row_a, rep.residual_right, rep.range_col_b
                ),
                &[("A", &a), ("B", &b)],
            );

            if rep.summable {
                match parallel_sum(&a, &b, &tol) {
                    Ok(ps) => {
                        out.check(
                            "one-inverse invariance",
                            ps.invariance_spread,
                            INVARIANCE_ATOL,
                        );
                        out.dump_on_failure(
                            "A (A+B)^- B varies over {1}-inverses",
                            &[("A", &a), ("B", &b)],
                        );
                        let scale = scale_of(&[&a, &b]);
                        out.check(
                            "subtraction forms agree",
                            ps.alt_residual_a.max(ps.alt_residual_b),
                            IDENTITY_ATOL * scale,
                        );
                        out.dump_on_failure(
                            "A:B != A - A(A+B)^+A or B - B(A+B)^+B",
                            &[("A", &a), ("B", &b)],
                        );
                    }
                    Err(e) => out.error("one-inverse invariance", &e),
                }
            }
        }
        Err(e) => out.error("residual verdict agrees with range verdict", &e),
    }

    // The canned non-summable pair must show visible dependence on the
    // choice of {1}-inverse (checked once per run).
    if trial == 0 {
        let a = ComplexMatrix::diag(&[1.0, 0.0]);
        let b = ComplexMatrix::from_vec(
            2,
            2,
            vec![
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        match parallel_sum(&a, &b, &tol) {
            Err(Error::NotSummable {
                diagnostic_spread, ..
            }) => {
                out.check_bool(
                    "canned pair varies over one-inverses",
                    diagnostic_spread > 1e-3,
                    diagnostic_spread,
                );
            }
            other => {
                out.check_bool("canned pair varies over one-inverses", false, 0.0);
                out.dump_on_failure(
                    &format!("expected NotSummable, got {other:?}"),
                    &[("A", &a), ("B", &b)],
                );
            }
        }
    }
    out
}

fn trial_thm32(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let (a, b, _) = psd_pair_for_trial(rng, cfg, &mut out);
    match is_parallel_summable(&a, &b, &tol) {
        Ok(rep) => {
            out.check_bool(
                "positive pairs are summable",
                rep.summable,
                rep.residual_left.max(rep.residual_right),
            );
            out.dump_on_failure("positive pair not summable", &[("A", &a), ("B", &b)]);
        }
        Err(e) => out.error("positive pairs are summable", &e),
    }
    match parallel_sum(&a, &b, &tol) {
        Ok(ps) => {
            let herm = ps.value.hermitian_residual();
            let min_eig = crate::eig::hermitian_eigen(&ps.value)
                .map(|e| e.values.last().copied().unwrap_or(0.0))
                .unwrap_or(f64::NEG_INFINITY);
            let scale = operator_norm(&ps.value).max(1.0);
            out.check(
                "parallel sum of positives is positive",
                herm.max((-min_eig).max(0.0)),
                tol.psd_atol.max(tol.eq_atol) * scale,
            );
            out.dump_on_failure(
                "A:B not positive",
                &[("A", &a), ("B", &b), ("A:B", &ps.value)],
            );
        }
        Err(e) => out.error("parallel sum of positives is positive", &e),
    }
    out
}

fn trial_prop41(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let (a, b) = if trial.is_multiple_of(2) {
        let (a, b, _) = psd_pair_for_trial(rng, cfg, &mut out);
        (a, b)
    } else {
        let n = dim(rng, cfg);
        let r = rng.gen_range(1..=n);
        let (a, b, res) = gen::summable_pair(rng, n, r);
        out.excluded += res;
        (a, b)
    };
    let body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let ab = parallel_sum(&a, &b, &tol)?.value;
        let ba = parallel_sum(&b, &a, &tol)?.value;
        out.check(
            "commutativity",
            ab.diff_norm(&ba),
            IDENTITY_ATOL * scale_of(&[&a, &b]),
        );
        out.dump_on_failure("A:B != B:A", &[("A", &a), ("B", &b)]);
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("commutativity", &e);
    }
    out
}

fn trial_prop42(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let (a, b, shared) = psd_pair_for_trial(rng, cfg, &mut out);
    let body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let ab = parallel_sum(&a, &b, &tol)?.value;
        let dtol = derived_tol(&tol);
        let input_scale = operator_norm(&a).max(operator_norm(&b));
        let range_ab = derived_range(&ab, input_scale)?;
        let meet = subspace_meet(
            &range_projector(&a, &tol)?,
            &range_projector(&b, &tol)?,
            &dtol,
        )?;
        out.check(
            "range of parallel sum is the meet",
            range_ab.projector.diff_norm(&meet.projector),
            IDENTITY_ATOL * (1.0 + meet.dim as f64),
        );
        out.dump_on_failure(
            &format!(
                "R(A:B) dim {} vs meet dim {} (shared by construction: {shared})",
                range_ab.dim, meet.dim
            ),
            &[("A", &a), ("B", &b), ("A:B", &ab)],
        );
        out.check_bool(
            "meet dimension matches construction",
            meet.dim == shared,
            meet.dim as f64 - shared as f64,
        );
        out.dump_on_failure("meet dim mismatch", &[("A", &a), ("B", &b)]);
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("range of parallel sum is the meet", &e);
    }
    out
}

fn trial_prop43(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let n = dim(rng, cfg);
    let (shared, ea, eb) = split_dims(rng, n);
    let (p, q, _, res) = gen::projector_pair_sharing(rng, n, shared, ea, eb);
    out.excluded += res;
    let body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let value = parallel_sum(&p, &q, &tol)?.value;
        let meet = subspace_meet(
            &range_projector(&p, &tol)?,
            &range_projector(&q, &tol)?,
            &derived_tol(&tol),
        )?;
        let residual = value.diff_norm(&meet.projector.scale_re(0.5));
        out.check(
            "projections: P:Q = half the meet projection",
            residual,
            IDENTITY_ATOL * scale_of(&[&p, &q]),
        );
        out.dump_on_failure("P:Q != (1/2) P_M", &[("P", &p), ("Q", &q)]);
        out.check_bool(
            "meet dimension matches construction",
            meet.dim == shared,
            meet.dim as f64 - shared as f64,
        );
        out.dump_on_failure("meet dim mismatch", &[("P", &p), ("Q", &q)]);
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("projections: P:Q = half the meet projection", &e);
    }
    out
}

fn trial_prop44(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let n = dim(rng, cfg);
    // Draw a positive triple whose nested sums stay well conditioned.
    let mut triple = None;
    for _ in 0..16 {
        let ra = rng.gen_range(1..=n);
        let rb = rng.gen_range(1..=n);
        let rc = rng.gen_range(1..=n);
        let (a, ka) = gen::psd_rank_counted(rng, n, ra);
        let (b, kb) = gen::psd_rank_counted(rng, n, rb);
        let (c, kc) = gen::psd_rank_counted(rng, n, rc);
        out.excluded += ka + kb + kc;
        let ok = |m: &ComplexMatrix| gen::retained_ratio(m, &tol) >= gen::MIN_RETAINED_RATIO;
        if ok(&(&a + &b)) && ok(&(&b + &c)) {
            triple = Some((a, b, c));
            break;
        }
        out.excluded += 1;
    }
    let Some((a, b, c)) = triple else {
        out.check_bool("associativity on positive triples", true, 0.0);
        return out;
    };
    let body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let ab = parallel_sum(&a, &b, &tol)?.value;
        let bc = parallel_sum(&b, &c, &tol)?.value;
        if gen::retained_ratio(&(&ab + &c), &tol) < gen::MIN_RETAINED_RATIO
            || gen::retained_ratio(&(&a + &bc), &tol) < gen::MIN_RETAINED_RATIO
        {
            out.excluded += 1;
            return Ok(());
        }
        let left = parallel_sum(&ab, &c, &tol)?.value;
        let right = parallel_sum(&a, &bc, &tol)?.value;
        out.check(
            "associativity on positive triples",
            left.diff_norm(&right),
            IDENTITY_ATOL * scale_of(&[&a, &b, &c]),
        );
        out.dump_on_failure("(A:B):C != A:(B:C)", &[("A", &a), ("B", &b), ("C", &c)]);
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("associativity on positive triples", &e);
    }

    // Whether existence of one nesting implies existence of the other is
    // open; sweeps over general (non-positive) triples record asymmetry
    // candidates instead of asserting a direction.
    if trial.is_multiple_of(4) {
        let mut record = |out: &mut TrialOutcome| -> Result<(), Error> {
            let m = dim(rng, cfg);
            let r = rng.gen_range(1..=m);
            let (x, y, res) = gen::summable_pair(rng, m, r);
            out.excluded += res;
            let rz = rng.gen_range(1..=m);
            let z = gen::matrix_rank(rng, m, m, rz);
            let xy = match parallel_sum(&x, &y, &tol) {
                Ok(ps) => ps.value,
                Err(Error::NotSummable { .. }) => return Ok(()),
                Err(e) => return Err(e),
            };
            let left_exists = is_parallel_summable(&xy, &z, &tol)?.summable;
            let right_exists = match parallel_sum(&y, &z, &tol) {
                Ok(ps) => is_parallel_summable(&x, &ps.value, &tol)?.summable,
                Err(Error::NotSummable { .. }) => false,
                Err(e) => return Err(e),
            };
            if left_exists != right_exists {
                out.notes.push(format!(
                    "existence asymmetry candidate at trial {trial}: \
                     (X:Y):Z defined = {left_exists}, X:(Y:Z) defined = {right_exists} \
                     (dim {m}, seed stream reproduces the instance)"
                ));
            }
            Ok(())
        };
        if let Err(e) = record(&mut out) {
            out.error("existence asymmetry recording", &e);
        }
    }
    out
}

fn trial_prop45(rng: &mut ChaCha12Rng, _cfg: &SuiteConfig, trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();

    if trial == 0 {
        match symbolic::prop45_witness() {
            Ok(w) => {
                out.check_bool(
                    "witness: compact factor breaks invertibility of the sum",
                    !w.a_mp_invertible
                        && w.b_mp_invertible
                        && w.sum_is_identity
                        && !w.parallel_mp_invertible
                        && w.consistent,
                    0.0,
                );
            }
            Err(e) => out.error(
                "witness: compact factor breaks invertibility of the sum",
                &e,
            ),
        }
    }

    // Random same-base diagonal positive pairs: the rule-level parallel sum
    // agrees with the entrywise scalar formula, exactly.
    let res = (|| -> Result<bool, Error> {
        let c1 = rng.gen_range(1..=9i64);
        let c2 = rng.gen_range(1..=9i64);
        let shift = rng.gen_range(0..=3i64);
        let mk = |c: i64| -> Result<symbolic::ParityDiagonal, Error> {
            let term = symbolic::Term::from_affine(
                symbolic::ExactScalar::integer(c),
                num_rational::BigRational::from_integer(1.into()),
                num_rational::BigRational::from_integer(shift.into()),
                num_rational::BigRational::from_integer((-1).into()),
            )?;
            Ok(symbolic::ParityDiagonal::new(
                symbolic::SymbolicEntryRule::from_terms(vec![term.clone()]),
                symbolic::SymbolicEntryRule::from_terms(vec![term]),
            ))
        };
        let a = mk(c1)?;
        let b = mk(c2)?;
        let ps = symbolic::diag_parallel_sum(&a, &b)?;
        for j in 1..=32u64 {
            let aj = a.entry(j)?;
            let bj = b.entry(j)?;
            let expect = aj.mul(&bj).div(&aj.add(&bj)?)?;
            if ps.entry(j)? != expect {
                return Ok(false);
            }
        }
        Ok(!ps.is_mp_invertible()?)
    })();
    match res {
        Ok(ok) => {
            out.check_bool("entrywise scalar formula (exact)", ok, 0.0);
        }
        Err(e) => out.error("entrywise scalar formula (exact)", &e),
    }
    out
}

fn trial_prop46(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let n = dim(rng, cfg);
    let (shared, ea, eb) = split_dims(rng, n);
    let (p, q, _, res) = gen::projector_pair_sharing(rng, n, shared, ea, eb);
    out.excluded += res;
    match submodule_sum_decomposition(&p, &q, &tol) {
        Ok(dec) => {
            out.check(
                "complement of the meet is the join of complements",
                dec.perp_residual,
                IDENTITY_ATOL * (1.0 + n as f64),
            );
            out.dump_on_failure(
                "(M n N)^perp != M^perp + N^perp",
                &[("P_M", &p), ("P_N", &q)],
            );
            out.check_bool(
                "join and meet dimensions are consistent",
                dec.meet.dim == shared && dec.join.dim == (shared + ea + eb).min(n),
                dec.meet.dim as f64 - shared as f64,
            );
            out.dump_on_failure(
                &format!(
                    "meet dim {} (want {shared}), join dim {} (want {})",
                    dec.meet.dim,
                    dec.join.dim,
                    (shared + ea + eb).min(n)
                ),
                &[("P_M", &p), ("P_N", &q)],
            );
        }
        Err(e) => out.error("complement of the meet is the join of complements", &e),
    }
    out
}

fn trial_thm51(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let (a, b, _) = psd_pair_for_trial(rng, cfg, &mut out);
    match check_norm_bound(&a, &b, &tol) {
        Ok(rep) => {
            out.check(
                "norm bound for positive pairs",
                rep.norm_parallel - rep.scalar_bound,
                BOUND_MARGIN,
            );
            out.dump_on_failure(
                &format!(
                    "|A:B| = {:.12} exceeds |A|:|B| = {:.12}",
                    rep.norm_parallel, rep.scalar_bound
                ),
                &[("A", &a), ("B", &b)],
            );
        }
        Err(e) => out.error("norm bound for positive pairs", &e),
    }
    out
}

fn trial_thm52(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let n = dim(rng, cfg);
    let mut drawn = None;
    for _ in 0..16 {
        let ra = rng.gen_range(1..=n);
        let rb = rng.gen_range(1..=n);
        let (abs_a, ka) = gen::psd_rank_counted(rng, n, ra);
        let (abs_b, kb) = gen::psd_rank_counted(rng, n, rb);
        out.excluded += ka + kb;
        if gen::retained_ratio(&(&abs_a + &abs_b), &tol) >= gen::MIN_RETAINED_RATIO {
            drawn = Some((abs_a, abs_b));
            break;
        }
        out.excluded += 1;
    }
    let Some((abs_a, abs_b)) = drawn else {
        return out;
    };

    let mut body = |out: &mut TrialOutcome| -> Result<(), Error> {
        // Initial space: the joint range of the two positive factors.
        let join = crate::subspace::subspace_join(
            &range_projector(&abs_a, &tol)?,
            &range_projector(&abs_b, &tol)?,
            &tol,
        )?;
        let u = match join.basis() {
            Some(basis) => gen::partial_isometry_over(rng, n, &basis),
            None => return Ok(()),
        };
        let pair = shared_isometry_pair(&abs_a, &abs_b, &u, &tol)?;
        out.check(
            "triangle equality",
            pair.triangle_residual,
            TRIANGLE_ATOL * scale_of(&[&abs_a, &abs_b]),
        );
        out.dump_on_failure(
            "| |A+B| - (|A|+|B|) | too large",
            &[("absA", &abs_a), ("absB", &abs_b), ("U", &u)],
        );

        out.check(
            "pseudoinverse transfer relations",
            pair.pinv_residual_left.max(pair.pinv_residual_right),
            IDENTITY_ATOL * scale_of(&[&abs_a, &abs_b]),
        );
        out.dump_on_failure(
            "(|A|+|B|)^+ != (A+B)^+ U (or adjoint relation)",
            &[("absA", &abs_a), ("absB", &abs_b), ("U", &u)],
        );

        let rep = is_parallel_summable(&pair.a, &pair.b, &tol)?;
        out.check_bool(
            "shared-isometry pairs are summable",
            rep.summable,
            rep.residual_left.max(rep.residual_right),
        );
        out.dump_on_failure("pair not summable", &[("A", &pair.a), ("B", &pair.b)]);

        if rep.summable {
            let bound = check_norm_bound(&pair.a, &pair.b, &tol)?;
            out.check(
                "norm bound under triangle equality",
                bound.norm_parallel - bound.scalar_bound,
                BOUND_MARGIN,
            );
            out.dump_on_failure(
                &format!(
                    "|A:B| = {:.12} exceeds |A|:|B| = {:.12}",
                    bound.norm_parallel, bound.scalar_bound
                ),
                &[("A", &pair.a), ("B", &pair.b)],
            );
        }
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("triangle equality", &e);
    }
    out
}

fn trial_prop61(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, _trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let (a, b, _) = psd_pair_for_trial(rng, cfg, &mut out);
    match douglas_factor(&a, &b, &tol) {
        Ok(f) => {
            let scale = scale_of(&[&a, &b]);
            out.check("factor identity", f.factor_residual, IDENTITY_ATOL * scale);
            out.dump_on_failure("A^(1/2) != (A+B)^(1/2) C", &[("A", &a), ("B", &b)]);
            out.check(
                "factored parallel sum",
                f.parallel_residual,
                IDENTITY_ATOL * scale,
            );
            out.dump_on_failure(
                "A^(1/2) C* D B^(1/2) != A (A+B)^+ B",
                &[("A", &a), ("B", &b)],
            );
            out.check_bool("factor range condition", f.range_condition, 0.0);
            out.dump_on_failure("R(C) not inside R((A+B)^(1/2))", &[("A", &a), ("B", &b)]);
        }
        Err(e) => out.error("factor identity", &e),
    }
    match range_sum_check(&a, &b, &tol) {
        Ok(ok) => {
            out.check_bool("root range identity", ok, 0.0);
            out.dump_on_failure(
                "R(A^(1/2)) + R(B^(1/2)) != R((A+B)^(1/2))",
                &[("A", &a), ("B", &b)],
            );
        }
        Err(e) => out.error("root range identity", &e),
    }
    out
}

fn trial_module_layer(rng: &mut ChaCha12Rng, cfg: &SuiteConfig, trial: u64) -> TrialOutcome {
    let mut out = TrialOutcome::default();
    let tol = cfg.tol;
    let algebra = FiniteCStarAlgebra::new(vec![2, 1]);
    let k = 3;

    // Inner-product axioms.
    let x = gen::module_vector(rng, &algebra, k);
    let y = gen::module_vector(rng, &algebra, k);
    let z = gen::module_vector(rng, &algebra, k);
    let a = gen::algebra_element(rng, &algebra);
    let alpha = gen::complex_gaussian(rng);
    let beta = gen::complex_gaussian(rng);

    let mut body = |out: &mut TrialOutcome| -> Result<(), Error> {
        // (i) linearity in the second slot.
        let combo = crate::cstar::HilbertModuleVector::new(
            y.components
                .iter()
                .zip(&z.components)
                .map(|(yc, zc)| yc.scale(alpha).add(&zc.scale(beta)).unwrap())
                .collect(),
        )?;
        let lhs = cstar::inner_product(&x, &combo)?.flatten();
        let rhs = &cstar::inner_product(&x, &y)?.flatten().scale(alpha)
            + &cstar::inner_product(&x, &z)?.flatten().scale(beta);
        out.check(
            "inner product linearity",
            lhs.diff_norm(&rhs),
            MODULE_ATOL * scale_of(&[&lhs, &rhs]),
        );

        // (ii) A-linearity in the second slot.
        let lhs = cstar::inner_product(&x, &y.act(&a)?)?.flatten();
        let rhs = &cstar::inner_product(&x, &y)?.flatten() * &a.flatten();
        out.check(
            "inner product respects the module action",
            lhs.diff_norm(&rhs),
            MODULE_ATOL * scale_of(&[&lhs, &rhs]),
        );

        // (iii) conjugate symmetry.
        let lhs = cstar::inner_product(&y, &x)?.flatten();
        let rhs = cstar::inner_product(&x, &y)?.flatten().adjoint();
        out.check(
            "inner product conjugate symmetry",
            lhs.diff_norm(&rhs),
            MODULE_ATOL * scale_of(&[&lhs, &rhs]),
        );

        // (iv) positivity and definiteness.
        let gram = cstar::inner_product(&x, &x)?;
        out.check_bool(
            "inner product positivity",
            gram.is_positive(&tol)? && cstar::module_norm(&x) > 0.0,
            0.0,
        );

        // Cauchy-Schwarz.
        let ip_norm = cstar::inner_product(&x, &y)?.norm();
        out.check(
            "cauchy-schwarz",
            ip_norm - cstar::module_norm(&x) * cstar::module_norm(&y),
            MODULE_ATOL,
        );

        // Flatten is a unital *-morphism.
        let t = gen::module_gaussian(rng, &algebra, k);
        let s = gen::module_gaussian(rng, &algebra, k);
        let ft = cstar::flatten(&t);
        let fs = cstar::flatten(&s);
        let mul_res = cstar::flatten(&t.mul(&s)?).diff_norm(&(&ft * &fs));
        let add_res = cstar::flatten(&t.add(&s)?).diff_norm(&(&ft + &fs));
        let adj_res = cstar::flatten(&t.adjoint()).diff_norm(&ft.adjoint());
        out.check(
            "flatten is a *-morphism",
            mul_res.max(add_res).max(adj_res),
            MODULE_ATOL * scale_of(&[&ft, &fs]),
        );

        // A-linearity of the operator action.
        let tx_a = t.apply(&x.act(&a)?)?;
        let t_xa = t.apply(&x)?.act(&a)?;
        let lin_res: f64 = tx_a
            .components
            .iter()
            .zip(&t_xa.components)
            .map(|(u, v)| u.flatten().diff_norm(&v.flatten()))
            .sum();
        out.check(
            "operator action is module-linear",
            lin_res,
            MODULE_ATOL * (1.0 + cstar::module_norm(&tx_a)),
        );
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("inner product linearity", &e);
    }

    // Re-runs of the operator-level criteria in the flattened module model.
    let deflate = trial.is_multiple_of(2);
    let fa = cstar::flatten(&gen::module_psd(rng, &algebra, k, deflate));
    let fb = cstar::flatten(&gen::module_psd(rng, &algebra, k, false));
    if gen::retained_ratio(&(&fa + &fb), &tol) < gen::MIN_RETAINED_RATIO {
        out.excluded += 1;
        return out;
    }

    let mut body = |out: &mut TrialOutcome| -> Result<(), Error> {
        let rep = is_parallel_summable(&fa, &fb, &tol)?;
        out.check_bool(
            "module positive pairs are summable",
            rep.summable && rep.range_row_a && rep.range_col_b,
            rep.residual_left.max(rep.residual_right),
        );
        out.dump_on_failure("module psd pair not summable", &[("A", &fa), ("B", &fb)]);

        let ps = parallel_sum(&fa, &fb, &tol)?;
        out.check(
            "module one-inverse invariance",
            ps.invariance_spread,
            INVARIANCE_ATOL,
        );

        // The parallel sum stays in the flattened algebra.
        let reshaped = cstar::unflatten(&ps.value, &algebra, k, &tol);
        out.check_bool(
            "module parallel sum reshapes into a grid",
            reshaped.is_ok(),
            0.0,
        );

        let ba = parallel_sum(&fb, &fa, &tol)?.value;
        out.check(
            "module commutativity",
            ps.value.diff_norm(&ba),
            IDENTITY_ATOL * scale_of(&[&fa, &fb]),
        );

        let dtol = derived_tol(&tol);
        let input_scale = operator_norm(&fa).max(operator_norm(&fb));
        let range_ab = derived_range(&ps.value, input_scale)?;
        let meet = subspace_meet(
            &range_projector(&fa, &tol)?,
            &range_projector(&fb, &tol)?,
            &dtol,
        )?;
        out.check(
            "module range of parallel sum is the meet",
            range_ab.projector.diff_norm(&meet.projector),
            IDENTITY_ATOL * (1.0 + meet.dim as f64),
        );
        out.dump_on_failure("module R(A:B) != R(A) n R(B)", &[("A", &fa), ("B", &fb)]);

        let bound = check_norm_bound(&fa, &fb, &tol)?;
        out.check(
            "module norm bound",
            bound.norm_parallel - bound.scalar_bound,
            BOUND_MARGIN,
        );

        // Associativity with a third module positive.
        let fc = cstar::flatten(&gen::module_psd(rng, &algebra, k, false));
        let bc_sum = &fb + &fc;
        if gen::retained_ratio(&bc_sum, &tol) >= gen::MIN_RETAINED_RATIO {
            let bc = parallel_sum(&fb, &fc, &tol)?.value;
            if gen::retained_ratio(&(&ps.value + &fc), &tol) >= gen::MIN_RETAINED_RATIO
                && gen::retained_ratio(&(&fa + &bc), &tol) >= gen::MIN_RETAINED_RATIO
            {
                let left = parallel_sum(&ps.value, &fc, &tol)?.value;
                let right = parallel_sum(&fa, &bc, &tol)?.value;
                out.check(
                    "module associativity",
                    left.diff_norm(&right),
                    IDENTITY_ATOL * scale_of(&[&fa, &fb, &fc]),
                );
            } else {
                out.excluded += 1;
            }
        } else {
            out.excluded += 1;
        }

        // Shared-isometry construction inside the flattened algebra.
        let join = crate::subspace::subspace_join(
            &range_projector(&fa, &tol)?,
            &range_projector(&fb, &tol)?,
            &tol,
        )?;
        let w_raw = cstar::flatten(&gen::module_gaussian(rng, &algebra, k));
        if let Some(w) = crate::matrix::orthonormalize_columns(&w_raw, 1e-8) {
            if w.cols() == w_raw.cols() {
                let u = &w * &join.projector;
                let pair = shared_isometry_pair(&fa, &fb, &u, &tol)?;
                out.check(
                    "module triangle equality",
                    pair.triangle_residual,
                    TRIANGLE_ATOL * scale_of(&[&fa, &fb]),
                );
                out.check(
                    "module pseudoinverse transfer",
                    pair.pinv_residual_left.max(pair.pinv_residual_right),
                    IDENTITY_ATOL * scale_of(&[&fa, &fb]),
                );
                // U stays inside the flattened algebra.
                out.check_bool(
                    "module partial isometry is structured",
                    cstar::unflatten(&u, &algebra, k, &tol).is_ok(),
                    0.0,
                );
            }
        }

        // Complement identity for module projections (ranges of the psd
        // pair).
        let pm = range_projector(&fa, &tol)?.projector;
        let pn = range_projector(&fb, &tol)?.projector;
        let dec = submodule_sum_decomposition(&pm, &pn, &tol)?;
        out.check(
            "module complement identity",
            dec.perp_residual,
            IDENTITY_ATOL * (1.0 + (k * algebra.total_dim()) as f64),
        );
        Ok(())
    };
    if let Err(e) = body(&mut out) {
        out.error("module positive pairs are summable", &e);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_cfg(trials: u32) -> SuiteConfig {
        SuiteConfig {
            seed: 7,
            trials,
            max_dim: 8,
            tol: TolerancePolicy::default(),
        }
    }

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("nosuch", &SuiteConfig::default()),
            Err(Error::UnknownSuite(_))
        ));
    }

    #[test]
    fn config_validation() {
        let cfg = SuiteConfig {
            trials: 0,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = SuiteConfig {
            max_dim: 65,
            ..Default::default()
        };
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn every_suite_runs_clean_at_small_size() {
        for name in SUITE_NAMES {
            let report = run_suite(name, &small_cfg(24)).unwrap();
            assert!(
                report.passed(),
                "suite {name} failed: {:#?}",
                report
                    .properties
                    .iter()
                    .filter(|p| p.failures > 0)
                    .collect::<Vec<_>>()
            );
        }
    }

    #[test]
    fn reports_are_bitwise_reproducible() {
        let a = run_suite("thm51", &small_cfg(16)).unwrap();
        let b = run_suite_seq("thm51", &small_cfg(16)).unwrap();
        assert_eq!(a.failures, b.failures);
        for (pa, pb) in a.properties.iter().zip(&b.properties) {
            assert_eq!(pa.name, pb.name);
            assert_eq!(pa.worst_residual.to_bits(), pb.worst_residual.to_bits());
            assert_eq!(pa.worst_trial, pb.worst_trial);
        }
    }

    // A dumped failing instance must replay to the identical residual,
    // bit for bit, even after a round trip through the JSON report.
    #[test]
    fn failure_dumps_replay_bit_for_bit() {
        // Force failures by making the positivity allowance impossibly
        // tight; the positivity check of the parallel sum then trips on
        // ordinary rounding noise.
        let cfg = SuiteConfig {
            seed: 11,
            trials: 64,
            max_dim: 8,
            tol: TolerancePolicy::default()
                .with_psd_atol(1e-300)
                .with_eq_atol(1e-300),
        };
        let report = run_suite("thm32", &cfg).unwrap();
        let prop = report
            .properties
            .iter()
            .find(|p| p.name == "positive pairs are summable" && p.failures > 0)
            .expect("tight tolerances must produce at least one failure");
        let dump = prop.failure.as_ref().expect("failures carry a dump");

        // Replay through the serialized report.
        let json = serde_json::to_string(&report).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
        let pj = parsed["properties"]
            .as_array()
            .unwrap()
            .iter()
            .find(|p| p["name"] == "positive pairs are summable")
            .unwrap();
        let matrices = pj["failure"]["matrices"].as_array().unwrap();
        let find = |name: &str| -> ComplexMatrix {
            let m = matrices.iter().find(|m| m["name"] == name).unwrap();
            serde_json::from_value(m["matrix"].clone()).unwrap()
        };
        let a = find("A");
        let b = find("B");
        let rep = crate::parallel::is_parallel_summable(&a, &b, &cfg.tol).unwrap();
        let replayed = rep.residual_left.max(rep.residual_right);
        assert_eq!(
            replayed.to_bits(),
            dump.residual.to_bits(),
            "replayed {replayed:e} vs dumped {:e}",
            dump.residual
        );
    }

    #[test]
    fn prop44_records_existence_asymmetry_candidates_without_failing() {
        let cfg = SuiteConfig {
            seed: 5,
            trials: 64,
            max_dim: 8,
            tol: TolerancePolicy::default(),
        };
        let report = run_suite("prop44", &cfg).unwrap();
        assert!(report.passed());
        // The recording channel itself must work; candidates may or may not
        // appear for a given seed, and neither outcome is a failure.
        for note in &report.notes {
            assert!(note.contains("existence asymmetry candidate"));
        }
    }

    #[test]
    fn reports_serialize_to_json() {
        let report = run_suite("penrose", &small_cfg(4)).unwrap();
        let json = serde_json::to_string(&report).unwrap();
        assert!(json.contains("generator_version"));
        assert!(json.contains("worst_residual"));
    }
}
