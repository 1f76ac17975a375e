//! Batch verification: a configuration names parameter sets and check ids, every check
//! produces one [`VerificationReport`].

use std::collections::BTreeMap;
use std::time::Instant;

use num_complex::Complex64;
use num_rational::BigRational;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::{format_rational, parse_rational, sweep_identities, Scalar};
use crate::blockops::{
    build_a, check_c_equation, check_defect_identity, check_master_at_zero, contractivity_condition, contractivity_scan,
    operator_norm, weighted_shift,
};
use crate::charfun::{check_covariance, default_z_grid, master_check, theta_generic};
use crate::dilation::{check_characteristic_operator, check_dilation, check_sigma_hat, build_dilation};
use crate::error::{Error, Result};
use crate::extremal::{check_vanishing_filtration, check_extremal_model, jet_check, kernel_dimension_check};
use crate::linalg::cplx;
use crate::mobius::{check_multiplier_properties, multiplier_m0, random_map, MobiusMap};
use crate::reps::{block_indices, check_projective_law, companion_check, Side};
use crate::spaces::{check_god_identity, check_kernel_positivity, default_positivity_grid, ExactCheck};

/// Arithmetic used by the exact-capable checks.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Backend {
    Exact,
    Float,
    /// Exact iff `λ` and every `μ_k` are written as integers or fractions.
    #[default]
    Auto,
}

impl std::str::FromStr for Backend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Backend::Exact),
            "float" => Ok(Backend::Float),
            "auto" => Ok(Backend::Auto),
            _ => Err(Error::Config(format!("unknown backend {s:?} (expected exact, float or auto)"))),
        }
    }
}

/// A suite configuration; every field has a default so partial JSON files work.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub lambda: String,
    pub mu: Vec<String>,
    /// Base truncation degree `N`.
    pub truncation: usize,
    /// Hardy-factor truncation `N_H`.
    pub hardy_truncation: usize,
    pub interior: usize,
    /// Complex literals `a+bi`; empty selects the default six-point grid.
    pub grid: Vec<String>,
    pub tolerances: BTreeMap<String, f64>,
    pub backend: Backend,
    pub checks: Vec<String>,
    pub seed: u64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            lambda: "5/2".into(),
            mu: vec!["1".into(), "1".into()],
            truncation: 48,
            hardy_truncation: 16,
            interior: 16,
            grid: Vec::new(),
            tolerances: BTreeMap::new(),
            backend: Backend::Auto,
            checks: Vec::new(),
            seed: 0,
        }
    }
}

/// Registered check ids with their default tolerances, in report order.
pub const CHECKS: &[(&str, f64)] = &[
    ("identities", 0.0),
    ("god", 1e-10),
    ("defect", 1e-10),
    ("c-equation", 1e-10),
    ("contractivity", 1e-12),
    ("multiplier", 1e-12),
    ("projective-law", 1e-8),
    ("companion", 1e-6),
    ("master", 1e-6),
    ("theta-forms", 1e-8),
    ("covariance", 1e-5),
    ("dilation", 1e-10),
    ("dilation-blocks", 1e-8),
    ("characteristic-operator", 1e-8),
    ("sigma-hat", 1e-5),
    ("vanishing-filtration", 1e-10),
    ("kernel-dimension", 1e-10),
    ("jet", 1e-10),
    ("extremal-model", 1e-6),
    ("positivity", 1e-10),
];

fn default_tolerance(id: &str) -> Option<f64> {
    CHECKS.iter().find(|(c, _)| *c == id).map(|(_, t)| *t)
}

/// Parses `a`, `bi`, `a+bi`, `a-bi` (exponents allowed, `i` alone means 1).
pub fn parse_complex(s: &str) -> Result<Complex64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || Error::Parse(format!("not a complex literal: {s:?}"));
    let num = |x: &str| x.parse::<f64>().map_err(|_| bad());
    let Some(body) = t.strip_suffix('i') else {
        return Ok(cplx(num(&t)?, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len()).rev().find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("", body),
    };
    let im = match im {
        "" | "+" => 1.0,
        "-" => -1.0,
        x => num(x)?,
    };
    Ok(cplx(if re.is_empty() { 0.0 } else { num(re)? }, im))
}

fn is_fraction_literal(s: &str) -> bool {
    let t = s.trim();
    !t.is_empty() && !t.contains(['.', 'e', 'E'])
}

/// Resolved parameters shared by all checks.
#[derive(Clone, Debug)]
struct Params {
    lambda: f64,
    mu: Vec<f64>,
    lambda_q: BigRational,
    mu_q: Vec<BigRational>,
    exact: bool,
    n_trunc: usize,
    hardy: usize,
    interior: usize,
    grid: Vec<Complex64>,
    seed: u64,
}

impl Params {
    fn resolve(cfg: &SuiteConfig) -> Result<Self> {
        let config = |e: Error| Error::Config(e.to_string());
        let lambda_q = parse_rational(&cfg.lambda).map_err(config)?;
        let mu_q: Vec<BigRational> = cfg.mu.iter().map(|m| parse_rational(m)).collect::<Result<_>>().map_err(config)?;
        if mu_q.is_empty() {
            return Err(Error::Config("μ must have at least one entry".into()));
        }
        let rational = is_fraction_literal(&cfg.lambda) && cfg.mu.iter().all(|m| is_fraction_literal(m));
        let exact = match cfg.backend {
            Backend::Exact => true,
            Backend::Float => false,
            Backend::Auto => rational,
        };
        let grid = if cfg.grid.is_empty() {
            default_z_grid()
        } else {
            cfg.grid.iter().map(|g| parse_complex(g)).collect::<Result<_>>().map_err(config)?
        };
        if grid.iter().any(|z| z.norm() >= 1.0) {
            return Err(Error::Config("grid points must lie in the open disc".into()));
        }
        if cfg.interior > cfg.truncation {
            return Err(Error::Config("interior must not exceed the truncation".into()));
        }
        Ok(Params {
            lambda: lambda_q.to_f64(),
            mu: mu_q.iter().map(|m| m.to_f64()).collect(),
            lambda_q,
            mu_q,
            exact,
            n_trunc: cfg.truncation,
            hardy: cfg.hardy_truncation,
            interior: cfg.interior,
            grid,
            seed: cfg.seed,
        })
    }

    fn echo(&self) -> BTreeMap<String, String> {
        let mut m = BTreeMap::new();
        m.insert("lambda".into(), format_rational(&self.lambda_q));
        m.insert("mu".into(), self.mu_q.iter().map(format_rational).collect::<Vec<_>>().join(","));
        m.insert("truncation".into(), self.n_trunc.to_string());
        m.insert("hardy_truncation".into(), self.hardy.to_string());
        m.insert("interior".into(), self.interior.to_string());
        m.insert("backend".into(), if self.exact { "exact" } else { "float" }.into());
        m.insert("seed".into(), self.seed.to_string());
        m
    }

    fn n(&self) -> usize {
        self.mu.len()
    }
}

/// Pass, fail, or not applicable to the parameters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// A measured residual, or the marker of an exact rational pass.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Residual {
    Exact,
    Value(f64),
}

impl Serialize for Residual {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Residual::Exact => s.serialize_str("exact"),
            Residual::Value(v) => s.serialize_f64(*v),
        }
    }
}

/// One line of the report.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub check: String,
    pub params: BTreeMap<String, String>,
    pub status: Status,
    pub residual: Option<Residual>,
    pub tolerance: f64,
    pub elapsed_ms: f64,
    pub notes: Vec<String>,
}

impl VerificationReport {
    /// A configuration error in report form.
    pub fn config_error(message: &str) -> Self {
        VerificationReport {
            check: "config".into(),
            params: BTreeMap::new(),
            status: Status::Fail,
            residual: None,
            tolerance: 0.0,
            elapsed_ms: 0.0,
            notes: vec![message.to_string()],
        }
    }
}

/// What a check measured.
struct Outcome {
    residual: f64,
    /// The residual came from rational arithmetic.
    exact: bool,
    notes: Vec<String>,
}

impl Outcome {
    fn float(residual: f64) -> Self {
        Outcome { residual, exact: false, notes: Vec::new() }
    }

    fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }

    fn from_exact(c: &ExactCheck, exact: bool) -> Self {
        let residual = if c.passed { c.residual } else { c.residual.max(f64::MIN_POSITIVE) };
        let mut o = Outcome { residual, exact, notes: vec![format!("{} coefficients compared", c.checked)] };
        if let Some(f) = &c.first_failure {
            o.notes.push(format!("first failure: {f}"));
        }
        o
    }
}

fn phi(a: f64) -> MobiusMap {
    MobiusMap::involution_at(cplx(a, 0.0)).expect("|a| < 1")
}

fn test_maps() -> Vec<MobiusMap> {
    let ri = MobiusMap::rotation(cplx(0.0, 1.0));
    vec![ri, phi(0.3), ri.compose(&phi(0.2))]
}

fn both<R>(p: &Params, exact: impl FnOnce(&BigRational, &[BigRational]) -> R, float: impl FnOnce(&f64, &[f64]) -> R) -> R {
    if p.exact {
        exact(&p.lambda_q, &p.mu_q)
    } else {
        float(&p.lambda, &p.mu)
    }
}

fn run_check(id: &str, p: &Params) -> Result<Outcome> {
    let n = p.n();
    match id {
        "identities" => {
            let fail = both(p, |l, _| sweep_identities(l, 30), |l, _| sweep_identities(l, 30));
            Ok(match fail {
                None => Outcome { residual: 0.0, exact: p.exact, notes: vec!["all 0 ≤ j ≤ l ≤ 30".into()] },
                Some((which, j, l)) => Outcome::float(1.0).note(format!("identity {which} fails at j={j}, l={l}")),
            })
        }
        "god" => {
            let c = both(p, |l, m| check_god_identity(l, m, 40), |l, m| check_god_identity(l, m, 40))?;
            Ok(Outcome::from_exact(&c, p.exact).note("total degree 40"))
        }
        "defect" => {
            let c = both(p, |l, m| check_defect_identity(l, m, p.n_trunc), |l, m| check_defect_identity(l, m, p.n_trunc))?;
            Ok(Outcome::from_exact(&c, p.exact))
        }
        "c-equation" => {
            let c = both(p, |l, m| check_c_equation(l, m, p.n_trunc), |l, m| check_c_equation(l, m, p.n_trunc))?;
            Ok(Outcome::from_exact(&c, p.exact))
        }
        "contractivity" => {
            if contractivity_condition(p.lambda, &p.mu) {
                let nn = p.n_trunc.max(60);
                let norm = operator_norm(&build_a(p.lambda, &p.mu, nn)?);
                Ok(Outcome::float((norm - 1.0).max(0.0)).note(format!("‖A_N‖ = {norm:.15} at N = {nn}")))
            } else {
                let scan = contractivity_scan(p.lambda, &p.mu, 8, 512, 1e-3)?;
                let top = scan.norms.iter().map(|x| x.1).fold(0.0, f64::max);
                Ok(match scan.first_violation {
                    Some(nv) => Outcome::float(0.0).note(format!("norm exceeds 1 at N={nv} (‖A_N‖ = {top:.6}); violation expected")),
                    None => Outcome::float(1.0 + 1e-3 - top).note("expected a norm above 1+1e−3 by N = 512"),
                })
            }
        }
        "multiplier" => {
            let r = check_multiplier_properties(p.seed, 10_000, 1_000, 10);
            let failures = (r.simple_failures + r.cocycle_law_failures) as f64;
            Ok(Outcome::float(r.unimodular.max(r.square).max(r.cocycle).max(failures))
                .note(format!("{} pairs; ±1 relation failures: {failures}", r.pairs)))
        }
        "projective-law" => {
            let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
            let mut worst = 0.0f64;
            for _ in 0..100 {
                let f = random_map(&mut rng, 0.5);
                let g = random_map(&mut rng, 0.5);
                let law = check_projective_law(1.0, &f, &g, p.n_trunc, p.interior)?;
                worst = worst.max((law.multiplier - cplx(multiplier_m0(&f, &g), 0.0)).norm());
            }
            Ok(Outcome::float(worst).note("λ = 1, 100 pairs with |α| ≤ 0.5"))
        }
        "companion" => {
            let mut worst = 0.0f64;
            for f in test_maps() {
                for side in [Side::Right, Side::Left] {
                    worst = worst.max(companion_check(p.lambda, &p.mu, &f, p.n_trunc, p.interior, side)?);
                }
            }
            Ok(Outcome::float(worst))
        }
        "master" => {
            let worst =
                p.grid.iter().map(|&z| master_check(p.lambda, &p.mu, z, p.n_trunc, p.interior)).collect::<Result<Vec<_>>>()?;
            let mut o = Outcome::float(worst.into_iter().fold(0.0, f64::max));
            if p.exact {
                let c = check_master_at_zero(&p.lambda_q, &p.mu_q, p.n_trunc)?;
                if !c.passed {
                    o.residual = o.residual.max(c.residual.max(f64::MIN_POSITIVE)).max(1.0);
                }
                o = o.note(format!("rational residual at z=0: {}", if c.passed { "exactly 0".into() } else { c.residual.to_string() }));
            }
            Ok(o)
        }
        "theta-forms" => {
            let worst = p
                .grid
                .iter()
                .map(|&z| theta_generic(p.lambda, &p.mu, z, p.n_trunc, p.interior).map(|g| g.discrepancy))
                .collect::<Result<Vec<_>>>()?;
            Ok(Outcome::float(worst.into_iter().fold(0.0, f64::max)))
        }
        "covariance" => {
            let t = build_a(p.lambda, &p.mu, p.n_trunc)?.orthonormal();
            let zs: Vec<Complex64> = p.grid.iter().copied().filter(|z| z.norm() <= 0.4).collect();
            let cols = block_indices(n, p.n_trunc, p.interior);
            Ok(Outcome::float(check_covariance(&t, &phi(0.3), &zs, &cols)?).note(format!("f = φ_0.3, {} points with |z| ≤ 0.4", zs.len())))
        }
        "dilation" | "dilation-blocks" => {
            let t = weighted_shift(p.lambda, p.n_trunc).orthonormal();
            let b = build_dilation(&t, p.hardy)?;
            if id == "dilation" {
                let r = check_dilation(&b, 6, &[])?;
                Ok(Outcome::float(r.isometry.max(r.power_compression))
                    .note(format!("T = weighted shift; isometry {:.3e}, power compression (K=6) {:.3e}", r.isometry, r.power_compression)))
            } else {
                let r = check_dilation(&b, 6, &test_maps())?;
                Ok(Outcome::float(r.mobius_blocks).note("φ ∈ {rot(i), φ_0.3, rot(i)∘φ_0.2}"))
            }
        }
        "characteristic-operator" => {
            let t = weighted_shift(p.lambda, p.n_trunc).orthonormal();
            let r = check_characteristic_operator(&t, p.hardy)?;
            Ok(Outcome::float(r.coefficient_deviation.max(r.first_coefficient).max(r.fstar_gram))
                .note(format!("{} coefficients; F_* Gram residual {:.3e}", r.coefficients, r.fstar_gram)))
        }
        "sigma-hat" => {
            let (nn, nh) = (p.n_trunc.min(24), p.hardy.min(16));
            let mut o = Outcome::float(check_sigma_hat(p.lambda, &p.mu, &phi(0.3), nn, nh)?).note("f = φ_0.3");
            if (nn, nh) != (p.n_trunc, p.hardy) {
                o = o.note(format!("sizes reduced to N = {nn}, N_H = {nh}"));
            }
            Ok(o)
        }
        "vanishing-filtration" => {
            let mut worst = 0.0f64;
            let mut bad = 0usize;
            for pp in 0..=8 {
                for k in 0..=pp + 1 {
                    let c = both(p, |l, _| check_vanishing_filtration(l, k, pp), |l, _| check_vanishing_filtration(l, k, pp))?;
                    worst = worst.max(c.residual);
                    bad += usize::from(!c.passed);
                }
            }
            Ok(Outcome { residual: worst.max(bad as f64), exact: p.exact, notes: vec![format!("p ≤ 8, k ≤ p+1; failures: {bad}")] })
        }
        "kernel-dimension" => {
            let mut worst = 0.0f64;
            let mut bad = 0usize;
            for nn in 1..=3 {
                for pp in 0..=8 {
                    let k = both(p, |l, _| kernel_dimension_check(l, nn, pp), |l, _| kernel_dimension_check(l, nn, pp))?;
                    worst = worst.max(k.kernel_residual).max(k.mapping_residual).max(k.complement_residual);
                    bad += usize::from(k.dim != k.expected);
                }
            }
            Ok(Outcome { residual: worst.max(bad as f64), exact: p.exact, notes: vec![format!("n ≤ 3, p ≤ 8; dimension mismatches: {bad}")] })
        }
        "jet" => {
            let j = both(p, |l, _| jet_check(l, n, 12), |l, _| jet_check(l, n, 12))?;
            let mut residual = j.isometry.max(j.intertwining).max(j.kernel_identity.residual);
            if !j.kernel_identity.passed || !j.mu_doubleprime_is_e0 {
                residual = residual.max(1.0);
            }
            Ok(Outcome { residual, exact: p.exact, notes: vec![format!("extremal μ for n = {n}, bidegree ≤ 12")] })
        }
        "extremal-model" => {
            let zs: Vec<Complex64> = p.grid.iter().copied().filter(|z| z.norm() <= 0.5).collect();
            let c = check_extremal_model(p.lambda, n, &zs, p.n_trunc, p.interior)?;
            Ok(Outcome::float(c.alignment.residual.max(c.forms_discrepancy)).note(format!(
                "extremal μ for n = {n}; ω = {:.12}{:+.12}i; {} points",
                c.omega.re,
                c.omega.im,
                zs.len()
            )))
        }
        "positivity" => {
            let min = check_kernel_positivity(p.lambda, &p.mu, &default_positivity_grid())?;
            if p.mu.iter().all(|&m| m > 0.0) {
                Ok(Outcome::float((-min).max(0.0)).note(format!("min Gram eigenvalue {min:.3e}")))
            } else {
                Ok(Outcome::float((min + 1e-6).max(0.0)).note(format!("negative-weight probe: min Gram eigenvalue {min:.3e} (expected < −1e−6)")))
            }
        }
        _ => Err(Error::Config(format!("unknown check id {id:?}"))),
    }
}

fn report_for(id: &str, p: &Params, tolerance: f64) -> VerificationReport {
    let start = Instant::now();
    let outcome = run_check(id, p);
    let elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    let (status, residual, notes) = match outcome {
        Ok(o) => {
            let pass = if o.exact { o.residual == 0.0 } else { o.residual <= tolerance };
            let residual = if o.exact && o.residual == 0.0 { Residual::Exact } else { Residual::Value(o.residual) };
            (if pass { Status::Pass } else { Status::Fail }, Some(residual), o.notes)
        }
        Err(e @ (Error::NonGeneric(_) | Error::Precondition(_))) => (Status::Skipped, None, vec![e.to_string()]),
        Err(e) => (Status::Fail, None, vec![e.to_string()]),
    };
    VerificationReport { check: id.to_string(), params: p.echo(), status, residual, tolerance, elapsed_ms, notes }
}

fn plan(cfg: &SuiteConfig) -> Result<(Params, Vec<(&'static str, f64)>)> {
    for id in cfg.checks.iter().chain(cfg.tolerances.keys()) {
        if default_tolerance(id).is_none() {
            return Err(Error::Config(format!("unknown check id {id:?}")));
        }
    }
    let params = Params::resolve(cfg)?;
    let selected = CHECKS
        .iter()
        .filter(|(id, _)| cfg.checks.iter().any(|c| c == id))
        .map(|&(id, tol)| (id, cfg.tolerances.get(id).copied().unwrap_or(tol)))
        .collect();
    Ok((params, selected))
}

/// Runs the selected checks on a worker pool, calling `on_done` as each finishes, and returns
/// the reports in registry order.
pub fn run_suite_with(cfg: &SuiteConfig, on_done: &(dyn Fn(&VerificationReport) + Sync)) -> Result<Vec<VerificationReport>> {
    let (params, selected) = plan(cfg)?;
    Ok(selected
        .par_iter()
        .map(|&(id, tol)| {
            let r = report_for(id, &params, tol);
            on_done(&r);
            r
        })
        .collect())
}

/// Runs the selected checks and returns the reports in registry order.
pub fn run_suite(cfg: &SuiteConfig) -> Result<Vec<VerificationReport>> {
    run_suite_with(cfg, &|_| {})
}

/// Process exit code for a finished run: 0 iff every non-skipped check passed.
pub fn exit_code(reports: &[VerificationReport]) -> i32 {
    i32::from(reports.iter().any(|r| r.status == Status::Fail))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(lambda: &str, mu: &[&str], checks: &[&str]) -> SuiteConfig {
        SuiteConfig {
            lambda: lambda.into(),
            mu: mu.iter().map(|s| s.to_string()).collect(),
            checks: checks.iter().map(|s| s.to_string()).collect(),
            ..SuiteConfig::default()
        }
    }

    #[test]
    fn complex_literals() {
        let cases = [
            ("0.3", cplx(0.3, 0.0)),
            ("0.5i", cplx(0.0, 0.5)),
            ("-0.4+0.2i", cplx(-0.4, 0.2)),
            ("-0.25-0.45i", cplx(-0.25, -0.45)),
            ("i", cplx(0.0, 1.0)),
            ("-i", cplx(0.0, -1.0)),
            ("1e-3-2e-1i", cplx(1e-3, -0.2)),
        ];
        for (s, want) in cases {
            assert_eq!(parse_complex(s).unwrap(), want, "{s}");
        }
        assert!(parse_complex("0.3+x").is_err());
    }

    #[test]
    fn identities_only_is_exact_pass() {
        let reports = run_suite(&cfg("2", &["1"], &["identities"])).unwrap();
        assert_eq!(reports.len(), 1);
        assert_eq!(reports[0].status, Status::Pass);
        assert_eq!(reports[0].residual, Some(Residual::Exact));
        assert_eq!(exit_code(&reports), 0);
        let line = serde_json::to_string(&reports[0]).unwrap();
        assert!(line.contains("\"residual\":\"exact\""));
    }

    #[test]
    fn contractivity_violation_is_a_pass() {
        let reports = run_suite(&cfg("3/2", &["1", "1/10"], &["contractivity"])).unwrap();
        assert_eq!(reports[0].status, Status::Pass, "{:?}", reports[0]);
        assert!(reports[0].notes[0].starts_with("norm exceeds 1 at N="));
    }

    #[test]
    fn empty_checks_give_empty_report() {
        let reports = run_suite(&cfg("2", &["1"], &[])).unwrap();
        assert!(reports.is_empty());
        assert_eq!(exit_code(&reports), 0);
    }

    #[test]
    fn configuration_errors() {
        assert!(matches!(run_suite(&cfg("2", &["1"], &["nope"])), Err(Error::Config(_))));
        assert!(matches!(run_suite(&cfg("x", &["1"], &["god"])), Err(Error::Config(_))));
        let mut c = cfg("2", &["1"], &["god"]);
        c.grid = vec!["1.5".into()];
        assert!(matches!(run_suite(&c), Err(Error::Config(_))));
    }

    #[test]
    fn auto_backend_and_skips() {
        let reports = run_suite(&cfg("2.5", &["1", "1"], &["god"])).unwrap();
        assert_eq!(reports[0].params["backend"], "float");
        assert_eq!(reports[0].status, Status::Pass);
        // μ″ = (1, 0) is not generic, so the defect identity does not apply.
        let reports = run_suite(&cfg("2", &["1", "1/2"], &["defect", "god"])).unwrap();
        assert_eq!(reports[0].check, "god");
        assert_eq!(reports[0].residual, Some(Residual::Exact));
        assert_eq!(reports[1].status, Status::Skipped);
    }

    #[test]
    fn reports_are_ordered_and_repeatable() {
        let c = cfg("5/2", &["1", "1"], &["positivity", "identities", "c-equation", "defect"]);
        let a = run_suite(&c).unwrap();
        let b = run_suite(&c).unwrap();
        let ids: Vec<&str> = a.iter().map(|r| r.check.as_str()).collect();
        assert_eq!(ids, ["identities", "defect", "c-equation", "positivity"]);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!((x.status, x.residual, &x.notes), (y.status, y.residual, &y.notes));
        }
    }
}
