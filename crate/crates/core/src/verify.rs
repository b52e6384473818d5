//! Randomized verification suites and their reports.
//!
//! A suite is a list of groups; each group draws one random instance per
//! trial and emits samples for one or more checks. Samples are reduced to
//! the worst value per `(check, n)` and sorted, so reports do not depend on
//! scheduling.

use std::fmt::Write as _;
use std::ops::RangeInclusive;

use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::complex_structure::{hodge_riemann, ComplexStructure};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, rank};
use crate::multivector::{Multivector, C64};
use crate::oracle::star_by_defining_equation;
use crate::random::{
    random_homogeneous, random_multivector, random_positive_11, random_real_homogeneous,
    random_symplectic, trial_rng,
};
use crate::symplectic::{elementary_primitive_basis, primitive_dimension, SymplecticForm, PRIMITIVITY_TOL};
use crate::timorin::{af_check, psi_convexity_scan, uniform_grid, wedge_matrix, MixedCollection, TSpace};
use crate::variation::{
    corollary32_residual, fd_convergence, lemma33_residual, sigma_identity_residual, variation_residual,
    FormFamily,
};

pub const REPORT_SCHEMA: u32 = 1;
/// Tolerance for finite-difference residuals.
pub const FD_TOL: f64 = 1e-6;
/// Steps for the second-order convergence check.
pub const FD_ORDER_STEP: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Core,
    Sl2,
    Variation,
    Timorin,
    All,
}

impl Suite {
    fn includes(self, other: Suite) -> bool {
        self == Suite::All || self == other
    }

    pub fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Sl2 => "sl2",
            Suite::Variation => "variation",
            Suite::Timorin => "timorin",
            Suite::All => "all",
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub suite: Suite,
    /// Run every group at this half-dimension instead of its default range.
    pub n: Option<usize>,
    /// Override every group's default trial count.
    pub trials: Option<usize>,
    pub seed: u64,
    /// Tolerance for algebraic residuals.
    pub tol: f64,
    /// Finite-difference step.
    pub h: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { suite: Suite::All, n: None, trials: None, seed: 0, tol: 1e-9, h: 1e-4 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Comparison {
    #[serde(rename = "<=")]
    AtMost,
    #[serde(rename = ">")]
    Above,
    #[serde(rename = ">=")]
    AtLeast,
}

impl Comparison {
    fn holds(self, value: f64, threshold: f64) -> bool {
        match self {
            Comparison::AtMost => value <= threshold,
            Comparison::Above => value > threshold,
            Comparison::AtLeast => value >= threshold,
        }
    }

    /// Whether `a` is a worse value than `b`.
    fn worse(self, a: f64, b: f64) -> bool {
        if a.is_nan() {
            return !b.is_nan();
        }
        match self {
            Comparison::AtMost => a > b,
            Comparison::Above | Comparison::AtLeast => a < b,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Comparison::AtMost => "<=",
            Comparison::Above => ">",
            Comparison::AtLeast => ">=",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The identity or property being checked.
    pub identity: String,
    pub n: usize,
    pub samples: usize,
    /// Worst observed value (largest residual or smallest eigenvalue).
    pub value: f64,
    pub comparison: Comparison,
    pub threshold: f64,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: u32,
    pub suite: Suite,
    pub n: Option<usize>,
    pub trials: Option<usize>,
    pub seed: u64,
    pub tol: f64,
    pub h: f64,
    pub records: Vec<CheckRecord>,
    pub errors: Vec<String>,
    pub pass: bool,
}

impl VerificationReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            let _ = writeln!(
                s,
                "{} {:<34} n={} samples={:<5} value={:<12.4e} {} {:.1e}  {}",
                if r.pass { "PASS" } else { "FAIL" },
                r.id,
                r.n,
                r.samples,
                r.value,
                r.comparison.symbol(),
                r.threshold,
                r.identity
            );
        }
        for e in &self.errors {
            let _ = writeln!(s, "ERROR {e}");
        }
        let _ = writeln!(
            s,
            "suite {}: {} ({} checks)",
            self.suite.name(),
            if self.pass { "pass" } else { "FAIL" },
            self.records.len()
        );
        s
    }
}

struct Check {
    id: &'static str,
    identity: &'static str,
    comparison: Comparison,
    /// `None` means the algebraic tolerance from the options.
    threshold: Option<f64>,
}

fn check(id: &'static str, identity: &'static str, comparison: Comparison, threshold: Option<f64>) -> Check {
    Check { id, identity, comparison, threshold }
}

struct Sample {
    id: &'static str,
    value: f64,
}

fn sample(id: &'static str, value: f64) -> Sample {
    Sample { id, value }
}

struct Ctx {
    h: f64,
}

type Runner = fn(&Ctx, usize, &mut ChaCha8Rng) -> Result<Vec<Sample>>;

struct Group {
    suite: Suite,
    checks: Vec<Check>,
    ns: RangeInclusive<usize>,
    trials: usize,
    /// Deterministic groups run once regardless of the trial count.
    deterministic: bool,
    run: Runner,
}

use Comparison::{AtLeast, AtMost, Above};

fn groups() -> Vec<Group> {
    vec![
        Group {
            suite: Suite::Core,
            checks: vec![
                check("core.star_involution", "*_s *_s u = u", AtMost, None),
                check("core.darboux", "Q^T W Q = standard block form", AtMost, None),
            ],
            ns: 1..=4,
            trials: 100,
            deterministic: false,
            run: run_star_involution,
        },
        Group {
            suite: Suite::Core,
            checks: vec![check(
                "core.star_defining_equation",
                "mu ^ *_s nu = w^-1(mu, nu) w^n/n! (dense solve)",
                AtMost,
                None,
            )],
            ns: 1..=3,
            trials: 10,
            deterministic: false,
            run: run_defining_equation,
        },
        Group {
            suite: Suite::Core,
            checks: vec![
                check("core.decomposition.reconstruction", "u = sum_r w_r ^ u^r", AtMost, None),
                check("core.decomposition.primitive", "w^(n-k+2r+1) ^ u^r = 0", AtMost, None),
                check("core.decomposition.bookkeeping", "component count and primitive dimensions", AtMost, Some(0.0)),
                check("core.hard_lefschetz", "w^(n-k) ^ u = v solved for u", AtMost, None),
            ],
            ns: 1..=4,
            trials: 50,
            deterministic: false,
            run: run_decomposition,
        },
        Group {
            suite: Suite::Core,
            checks: vec![check(
                "core.elementary_span",
                "rank of elementary primitive k-forms = C(2n,k) - C(2n,k-2)",
                AtMost,
                Some(0.0),
            )],
            ns: 1..=4,
            trials: 1,
            deterministic: true,
            run: run_elementary_span,
        },
        Group {
            suite: Suite::Core,
            checks: vec![check(
                "core.direct_sum",
                "*_s(u ^ v) = (-1)^(k1 k2) *_s1 u ^ *_s2 v",
                AtMost,
                None,
            )],
            ns: 2..=4,
            trials: 50,
            deterministic: false,
            run: run_direct_sum,
        },
        Group {
            suite: Suite::Sl2,
            checks: vec![
                check("sl2.lowering", "Lambda(L_r u) = (n-k-r+1) L_(r-1) u", AtMost, None),
                check("sl2.weight", "B(L_r u) = (k+2r-n) L_r u", AtMost, None),
            ],
            ns: 1..=3,
            trials: 5,
            deterministic: false,
            run: run_sl2,
        },
        Group {
            suite: Suite::Sl2,
            checks: vec![check(
                "sl2.hodge_riemann",
                "(u,u) = top(u ^ conj(Iu) ^ w_(n-k)), Iu = (-1)^(k(k+1)/2) i^(p-q) u",
                AtMost,
                None,
            )],
            ns: 1..=3,
            trials: 1,
            deterministic: true,
            run: run_hodge_riemann,
        },
        Group {
            suite: Suite::Variation,
            checks: vec![
                check("variation.theorem", "*_s (d/dt *_s) u = [Lambda, theta] u", AtMost, Some(FD_TOL)),
                check("variation.fd_order", "error ratio in [3,5] when h halves", AtMost, Some(0.0)),
                check("variation.corollary", "*_s theta *_s u = -d/dt(Lambda u)", AtMost, Some(FD_TOL)),
            ],
            ns: 1..=3,
            trials: 50,
            deterministic: false,
            run: run_variation_fd,
        },
        Group {
            suite: Suite::Variation,
            checks: vec![
                check("variation.double_commutator", "*_s theta *_s = -1/2 [Lambda, [Lambda, theta]]", AtMost, None),
                check("variation.one_form", "*_s sigma *_s = (-1)^k [Lambda, sigma]", AtMost, None),
                check("variation.l_theta_commute", "[L, theta] = 0", AtMost, None),
            ],
            ns: 1..=3,
            trials: 100,
            deterministic: false,
            run: run_variation_algebraic,
        },
        Group {
            suite: Suite::Timorin,
            checks: vec![
                check("timorin.mhl", "sigma_min/sigma_max of u -> u ^ T_(k+1)", Above, Some(1e-8)),
                check("timorin.mhr", "min eigenvalue of (-1)^(k(k+1)/2) T_(k+1) u ^ conj(Ju)", Above, Some(0.0)),
                check("timorin.mhr_asymmetry", "|G - G^*| of the mixed Gram matrix", AtMost, None),
                check("timorin.primitive_dimension", "dim ker(u -> u ^ T_k) = C(2n,k) - C(2n,k-2)", AtMost, Some(0.0)),
            ],
            ns: 1..=3,
            trials: 100,
            deterministic: false,
            run: run_timorin,
        },
        Group {
            suite: Suite::Timorin,
            checks: vec![check(
                "timorin.deformation",
                "min Gram eigenvalue along (1-t) alpha_j + t w, 17 samples",
                Above,
                Some(0.0),
            )],
            ns: 1..=3,
            trials: 10,
            deterministic: false,
            run: run_deformation,
        },
        Group {
            suite: Suite::Timorin,
            checks: vec![
                check("timorin.t_star_involution", "*_s *_s u = u on V_T", AtMost, None),
                check("timorin.t_inner_hermitian", "(u,v)_T = conj((v,u)_T)", AtMost, None),
                check("timorin.t_inner_positive", "(u,u)_T / |u|^2", Above, Some(0.0)),
            ],
            ns: 1..=3,
            trials: 20,
            deterministic: false,
            run: run_t_space,
        },
        Group {
            suite: Suite::Timorin,
            checks: vec![
                check("timorin.af", "(c(a1 a2 T)^2 - c(a1^2 T) c(a2^2 T)) / max", AtLeast, Some(-1e-9)),
                check("timorin.af_equality", "|gap| / lhs for a2 = a1", AtMost, None),
            ],
            ns: 2..=4,
            trials: 1000,
            deterministic: false,
            run: run_af,
        },
        Group {
            suite: Suite::Timorin,
            checks: vec![check(
                "timorin.psi_convexity",
                "min second difference of -log c(w_t^2/2 ^ T)",
                AtLeast,
                Some(-1e-9),
            )],
            ns: 2..=3,
            trials: 100,
            deterministic: false,
            run: run_psi,
        },
    ]
}

/// Runs a suite and assembles the report.
pub fn run_suite(opts: &VerifyOptions) -> Result<VerificationReport> {
    if let Some(n) = opts.n {
        crate::multivector::check_n(n)?;
    }
    if opts.trials == Some(0) {
        return Err(Error::Precondition("trials must be positive".into()));
    }
    if !(opts.h > 0.0 && opts.tol > 0.0) {
        return Err(Error::Precondition("tol and h must be positive".into()));
    }
    let ctx = Ctx { h: opts.h };
    let mut records = Vec::new();
    let mut errors = Vec::new();
    for (gi, group) in groups().into_iter().enumerate() {
        if !opts.suite.includes(group.suite) {
            continue;
        }
        let ns: Vec<usize> = match opts.n {
            Some(n) if group.ns.start() <= &n => vec![n],
            Some(_) => Vec::new(),
            None => group.ns.clone().collect(),
        };
        let trials = if group.deterministic { 1 } else { opts.trials.unwrap_or(group.trials) };
        for n in ns {
            let outcomes: Vec<std::result::Result<Vec<Sample>, String>> = (0..trials)
                .into_par_iter()
                .map(|trial| {
                    let stream = ((gi as u64) << 48) | ((n as u64) << 32) | trial as u64;
                    let mut rng = trial_rng(opts.seed, stream);
                    (group.run)(&ctx, n, &mut rng).map_err(|e| {
                        format!("{} (n = {n}, trial {trial}): {e}", group.checks[0].id)
                    })
                })
                .collect();
            for c in &group.checks {
                let threshold = c.threshold.unwrap_or(opts.tol);
                let mut worst: Option<f64> = None;
                let mut count = 0;
                for o in &outcomes {
                    let values: Vec<f64> = match o {
                        Ok(samples) => samples.iter().filter(|s| s.id == c.id).map(|s| s.value).collect(),
                        Err(_) => vec![f64::NAN],
                    };
                    for v in values {
                        count += 1;
                        worst = Some(match worst {
                            Some(w) if !c.comparison.worse(v, w) => w,
                            _ => v,
                        });
                    }
                }
                let value = worst.unwrap_or(f64::NAN);
                records.push(CheckRecord {
                    id: c.id.to_string(),
                    identity: c.identity.to_string(),
                    n,
                    samples: count,
                    value,
                    comparison: c.comparison,
                    threshold,
                    pass: count > 0 && c.comparison.holds(value, threshold),
                });
            }
            errors.extend(outcomes.into_iter().filter_map(|o| o.err()));
        }
    }
    records.sort_by(|a, b| a.id.cmp(&b.id).then(a.n.cmp(&b.n)));
    errors.sort();
    let pass = errors.is_empty() && !records.is_empty() && records.iter().all(|r| r.pass);
    Ok(VerificationReport {
        schema: REPORT_SCHEMA,
        suite: opts.suite,
        n: opts.n,
        trials: opts.trials,
        seed: opts.seed,
        tol: opts.tol,
        h: opts.h,
        records,
        errors,
        pass,
    })
}

fn relative(diff: &Multivector, scale: f64) -> f64 {
    if scale == 0.0 {
        diff.norm()
    } else {
        diff.norm() / scale
    }
}

fn unit(u: Multivector) -> Multivector {
    let norm = u.norm();
    u.scale(1.0 / norm)
}

fn run_star_involution(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let w = random_symplectic(rng, n);
    let u = random_multivector(rng, n);
    let back = w.star(&w.star(&u)?)?;
    Ok(vec![
        sample("core.star_involution", relative(&(&back - &u), u.norm())),
        sample("core.darboux", w.darboux().residual),
    ])
}

fn run_defining_equation(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let w = random_symplectic(rng, n);
    let mut out = Vec::new();
    for k in 0..=2 * n {
        let u = random_homogeneous(rng, n, k);
        let closed = w.star(&u)?;
        let oracle = star_by_defining_equation(&w, &u)?;
        out.push(sample("core.star_defining_equation", relative(&(&closed - &oracle), oracle.norm())));
    }
    Ok(out)
}

fn run_decomposition(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let w = random_symplectic(rng, n);
    let mut out = Vec::new();
    for k in 0..=2 * n {
        let u = random_homogeneous(rng, n, k);
        let d = w.lefschetz_decompose(&u)?;
        out.push(sample(
            "core.decomposition.reconstruction",
            relative(&(&d.reconstruct(&w) - &u), u.norm()),
        ));
        let mut worst: f64 = 0.0;
        for c in &d.components {
            worst = worst.max(w.is_primitive(&c.form, PRIMITIVITY_TOL)?.relative);
        }
        out.push(sample("core.decomposition.primitive", worst));
        // one nonzero piece for every admissible r, with u^r of grade k - 2r <= min(k, 2n - k)
        let expected = k.min(2 * n - k) / 2 + 1;
        let mut mismatch = d.components.len().abs_diff(expected);
        for c in &d.components {
            let grade_ok = c.form.homogeneous_grade()? == Some(k - 2 * c.r);
            if !grade_ok || k - 2 * c.r > k.min(2 * n - k) {
                mismatch += 1;
            }
        }
        if k <= n {
            let ns = nullspace(&wedge_matrix(&w.two_form().power(n - k + 1), k), 1e-9);
            mismatch += ns.ncols().abs_diff(primitive_dimension(n, k));
        }
        out.push(sample("core.decomposition.bookkeeping", mismatch as f64));
        if k <= n {
            let v = random_homogeneous(rng, n, 2 * n - k);
            let x = w.hard_lefschetz_invert(&v, k)?;
            let back = &w.two_form().power(n - k) ^ &x;
            out.push(sample("core.hard_lefschetz", relative(&(&back - &v), v.norm())));
        }
    }
    Ok(out)
}

fn run_elementary_span(_: &Ctx, n: usize, _: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    for k in 0..=n {
        let forms = elementary_primitive_basis(n, k)?;
        let len = crate::basis::slices(n).len(k);
        let m = DMatrix::from_fn(len, forms.len(), |r, c| forms[c].slice(k).coeffs[r].re);
        out.push(sample("core.elementary_span", rank(&m, 1e-10).abs_diff(primitive_dimension(n, k)) as f64));
    }
    Ok(out)
}

fn run_direct_sum(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let n1 = rng.random_range(1..n);
    let n2 = n - n1;
    let w1 = random_symplectic(rng, n1);
    let w2 = random_symplectic(rng, n2);
    let w = SymplecticForm::direct_sum(&w1, &w2)?;
    let k1 = rng.random_range(0..=2 * n1);
    let k2 = rng.random_range(0..=2 * n2);
    let u = random_homogeneous(rng, n1, k1);
    let v = random_homogeneous(rng, n2, k2);
    let lhs = w.star(&(&u.embed(n, 0)? ^ &v.embed(n, 2 * n1)?))?;
    let sign = if (k1 * k2) % 2 == 0 { 1.0 } else { -1.0 };
    let rhs = (&w1.star(&u)?.embed(n, 0)? ^ &w2.star(&v)?.embed(n, 2 * n1)?).scale(sign);
    Ok(vec![sample("core.direct_sum", relative(&(&lhs - &rhs), rhs.norm()))])
}

/// Elementary primitive forms of the standard form, transported to a
/// random form through its Darboux covectors.
fn run_sl2(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let w = random_symplectic(rng, n);
    let to_working = w.darboux().covectors.transpose();
    let mut out = Vec::new();
    for k in 0..=n {
        for e in elementary_primitive_basis(n, k)? {
            let u = e.map_generators_real(&to_working);
            for r in 0..=(n - k + 1) {
                let lr = &w.omega_power(r) ^ &u;
                let lr1 = if r == 0 { Multivector::zero(n) } else { &w.omega_power(r - 1) ^ &u };
                let scale = lr.norm().max(u.norm());
                let lowered = w.dual_lefschetz(&lr)?;
                let c = (n + 1) as f64 - k as f64 - r as f64;
                out.push(sample("sl2.lowering", relative(&(&lowered - &lr1.scale(c)), scale)));
                let weight = w.weight(&lr)?;
                let c = k as f64 + 2.0 * r as f64 - n as f64;
                out.push(sample("sl2.weight", relative(&(&weight - &lr.scale(c)), scale)));
            }
        }
    }
    Ok(out)
}

/// Every element of an orthonormal basis of primitive `(p,q)`-forms for the
/// standard pair.
fn run_hodge_riemann(_: &Ctx, n: usize, _: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let w = SymplecticForm::standard(n)?;
    let j = ComplexStructure::standard(n)?;
    let mc = MixedCollection::standard(n)?;
    let mut out = Vec::new();
    for k in 0..=n {
        for p in 0..=k {
            for u in mc.t_primitive_pq_basis(p, k - p)? {
                let c = hodge_riemann(&w, &j, &u)?;
                out.push(sample("sl2.hodge_riemann", c.residual / c.norm_squared));
            }
        }
    }
    Ok(out)
}

fn random_linear_family(n: usize, rng: &mut ChaCha8Rng) -> Result<FormFamily> {
    let a1 = random_positive_11(rng, n);
    let a2 = random_positive_11(rng, n);
    FormFamily::linear(&a1, &a2)
}

fn run_variation_fd(ctx: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let fam = random_linear_family(n, rng)?;
    let t = rng.random_range(0.25..0.75);
    let mut out = Vec::new();
    for k in 0..=2 * n {
        let u = unit(random_homogeneous(rng, n, k));
        out.push(sample("variation.theorem", variation_residual(&fam, t, &u, ctx.h)?));
        let conv = fd_convergence(FD_ORDER_STEP, 1.0, |h| variation_residual(&fam, t, &u, h))?;
        let off = if conv.second_order { 0.0 } else { (conv.ratio - 4.0).abs() - 1.0 };
        out.push(sample("variation.fd_order", if off.is_nan() { f64::INFINITY } else { off }));
        out.push(sample("variation.corollary", corollary32_residual(&fam, t, &u, ctx.h)?));
    }
    Ok(out)
}

fn run_variation_algebraic(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let w = random_symplectic(rng, n);
    let theta = random_real_homogeneous(rng, n, 2);
    let sigma = random_real_homogeneous(rng, n, 1);
    let mut out = Vec::new();
    for k in 0..=2 * n {
        let u = unit(random_homogeneous(rng, n, k));
        out.push(sample("variation.double_commutator", lemma33_residual(&w, &theta, &u)?));
        out.push(sample("variation.one_form", sigma_identity_residual(&w, &sigma, &u)?));
        let a = w.lefschetz(&(&theta ^ &u))?;
        let b = &theta ^ &w.lefschetz(&u)?;
        out.push(sample("variation.l_theta_commute", (&a - &b).norm()));
    }
    Ok(out)
}

fn random_collection(n: usize, rng: &mut ChaCha8Rng) -> Result<MixedCollection> {
    let alphas: Vec<DMatrix<f64>> = (0..=n).map(|_| random_positive_11(rng, n)).collect();
    MixedCollection::new(ComplexStructure::standard(n)?, &alphas)
}

fn run_timorin(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let mc = random_collection(n, rng)?;
    let mut out = Vec::new();
    for k in 0..=n {
        out.push(sample("timorin.mhl", mc.mixed_hl_rank(k)?.normalized_sigma_min));
        let found = match mc.t_primitive_basis(k) {
            Ok(b) => b.len(),
            Err(Error::RankDeficient { found, .. }) => found,
            Err(e) => return Err(e),
        };
        let expected = if k == 0 { 1 } else { primitive_dimension(n, k) };
        out.push(sample("timorin.primitive_dimension", found.abs_diff(expected) as f64));
        for r in mc.mixed_hr_all(k)? {
            out.push(sample("timorin.mhr", r.min_eigenvalue));
            out.push(sample("timorin.mhr_asymmetry", r.asymmetry));
        }
    }
    Ok(out)
}

fn run_deformation(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let mc = random_collection(n, rng)?;
    Ok(mc
        .deformation_path(17)?
        .into_iter()
        .map(|(_, ev)| sample("timorin.deformation", ev))
        .collect())
}

fn run_t_space(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let mc = random_collection(n, rng)?;
    let m = rng.random_range(0..=n);
    let omega = SymplecticForm::new(random_positive_11(rng, n))?;
    let ts = TSpace::from_collection(omega, &mc, m)?;
    let j = mc.complex_structure();
    let mut out = Vec::new();
    for k in 0..=2 * m {
        let x = random_homogeneous(rng, n, k);
        let y = random_homogeneous(rng, n, k);
        let u = unit(ts.f_t(&x)?);
        let v = unit(ts.f_t(&y)?);
        let back = ts.star(&ts.star(&u)?)?;
        out.push(sample("timorin.t_star_involution", (&back - &u).norm()));
        let uv = ts.inner(j, &u, &v)?;
        let vu = ts.inner(j, &v, &u)?;
        out.push(sample("timorin.t_inner_hermitian", (uv - vu.conj()).norm() / (uv.norm().max(1.0))));
        let uu: C64 = ts.inner(j, &u, &u)?;
        out.push(sample("timorin.t_inner_positive", uu.re));
    }
    Ok(out)
}

fn run_af(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let j = ComplexStructure::standard(n)?;
    let a1 = random_positive_11(rng, n);
    let a2 = random_positive_11(rng, n);
    let t: Vec<DMatrix<f64>> = (0..n - 2).map(|_| random_positive_11(rng, n)).collect();
    let r = af_check(&j, &a1, &a2, &t)?;
    let eq = af_check(&j, &a1, &a1, &t)?;
    Ok(vec![
        sample("timorin.af", r.gap / r.lhs.abs().max(r.rhs.abs())),
        sample("timorin.af_equality", eq.gap.abs() / eq.lhs.abs()),
    ])
}

fn run_psi(_: &Ctx, n: usize, rng: &mut ChaCha8Rng) -> Result<Vec<Sample>> {
    let j = ComplexStructure::standard(n)?;
    let a1 = random_positive_11(rng, n);
    let a2 = random_positive_11(rng, n);
    let t: Vec<DMatrix<f64>> = (0..n - 2).map(|_| random_positive_11(rng, n)).collect();
    let scan = psi_convexity_scan(&j, &a1, &a2, &t, &uniform_grid(33))?;
    Ok(vec![sample("timorin.psi_convexity", scan.min_second_difference)])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_core_run_passes_and_is_deterministic() {
        let opts = VerifyOptions { suite: Suite::Core, n: Some(2), trials: Some(3), seed: 7, ..Default::default() };
        let a = run_suite(&opts).unwrap();
        let b = run_suite(&opts).unwrap();
        assert!(a.pass, "{}", a.to_text());
        assert_eq!(a.to_json(), b.to_json());
        let ids: Vec<&str> = a.records.iter().map(|r| r.id.as_str()).collect();
        let mut sorted = ids.clone();
        sorted.sort();
        assert_eq!(ids, sorted);
    }
}
