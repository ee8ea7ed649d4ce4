//! Report assembly for the subcommands.

use serde::Serialize;

use degrowth::ratmap::{
    degree_sequence, stability_report, topological_degree, MapSpec, StabilityReport, TopDegreeMode,
};
use degrowth::spectral::{
    detect_recurrence, detect_recurrence_with, eigenclass_residual, estimate_lambda1,
    fit_main_theorem, monomial_lambda1, spectral_data, spectral_identity_suite, ApproxClass,
    EigenResidual, FitReport, IdentityLedger, RhoLevel, Tower, MIN_FIT_WINDOW,
};
use degrowth::toric::{toric_degree_sequence_capped, MonomialMatrix};
use degrowth::{Error, Provenance, Result, Q};

pub const SCHEMA: &str = "v1";

#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matrix: Option<[[i64; 2]; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub map_file: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub depth: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    pub seed: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Quantity {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<f64>,
    pub provenance: Provenance,
    pub method: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct RecurrenceOut {
    pub order: usize,
    /// `d_{n+1} = c_1 d_n + … + c_k d_{n−k+1}`.
    pub coeffs: Vec<String>,
    pub predicted_next: String,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct Eigenclasses {
    pub theta_self_intersections: Vec<f64>,
    pub theta_star_approx: ApproxClass,
    pub theta_lower_approx: ApproxClass,
    pub residuals: Vec<EigenResidual>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: &'static str,
    pub config: RunConfig,
    pub map: Option<String>,
    pub lambda1: Option<Quantity>,
    pub lambda1_fitted: Option<Quantity>,
    pub lambda2: Option<Quantity>,
    pub degrees: Vec<u64>,
    pub degrees_provenance: Option<Provenance>,
    pub stability: Option<StabilityReport>,
    pub rho_seq: Option<Vec<RhoLevel>>,
    pub eigenclasses: Option<Eigenclasses>,
    pub fit: Option<FitReport>,
    pub recurrence: Option<RecurrenceOut>,
    pub identity_suite: Option<IdentityLedger>,
    pub partial: bool,
    pub diagnostics: Vec<String>,
}

impl Report {
    pub fn new(config: RunConfig) -> Report {
        Report {
            schema: SCHEMA,
            config,
            map: None,
            lambda1: None,
            lambda1_fitted: None,
            lambda2: None,
            degrees: Vec::new(),
            degrees_provenance: None,
            stability: None,
            rho_seq: None,
            eigenclasses: None,
            fit: None,
            recurrence: None,
            identity_suite: None,
            partial: false,
            diagnostics: Vec::new(),
        }
    }

    fn note(&mut self, msg: impl Into<String>) {
        self.diagnostics.push(msg.into());
    }

    /// Absorbs a capacity error: keeps the completed terms and marks the
    /// report partial. Other errors are returned.
    fn degrees_or_partial(&mut self, r: Result<Vec<u64>>) -> Result<()> {
        match r {
            Ok(d) => self.degrees = d,
            Err(Error::Capacity { what, partial }) => {
                self.note(format!("degree sequence stopped early: {what}"));
                self.degrees = partial;
                self.partial = true;
            }
            Err(e) => return Err(e),
        }
        Ok(())
    }

    fn add_recurrence(&mut self, max_order: Option<usize>) {
        let rec = match max_order {
            Some(m) => detect_recurrence_with(&self.degrees, m),
            None => detect_recurrence(&self.degrees),
        };
        self.recurrence = rec.map(|r| {
            let terms: Vec<Q> = self
                .degrees
                .iter()
                .map(|&d| Q::from_integer(d.into()))
                .collect();
            RecurrenceOut {
                order: r.order(),
                coeffs: r.coeffs.iter().map(ToString::to_string).collect(),
                predicted_next: r.predict_next(&terms).to_string(),
                provenance: Provenance::Fitted,
            }
        });
        if self.recurrence.is_none() {
            self.note("no linear recurrence of admissible order fits the degrees");
        }
    }

    fn add_lambda1_fitted(&mut self) {
        if let Ok(e) = estimate_lambda1(&self.degrees) {
            self.lambda1_fitted = Some(Quantity {
                value: e.value,
                error: Some(e.error),
                provenance: e.provenance,
                method: e.method,
            });
        }
    }

    fn add_fit(&mut self) -> Result<()> {
        let (Some(l1), Some(l2)) = (&self.lambda1, &self.lambda2) else {
            self.note("fit skipped: λ₁ or λ₂ unavailable");
            return Ok(());
        };
        if self.degrees.len() < MIN_FIT_WINDOW {
            self.note(format!(
                "fit skipped: needs at least {MIN_FIT_WINDOW} degrees"
            ));
            return Ok(());
        }
        let fit = fit_main_theorem(&self.degrees, l1.value, l2.value)?;
        if !fit.hypothesis_ok {
            let growth = fit.divergence.as_ref().map_or("", |d| d.growth.as_str());
            self.note(format!(
                "λ₁² > λ₂ fails (λ₁² = {}, λ₂ = {}); deg_n/λ₁ⁿ growth: {growth}",
                l1.value * l1.value,
                l2.value
            ));
        }
        self.fit = Some(fit);
        Ok(())
    }

    fn check_degree_bound(&mut self) {
        let l1 = self.lambda1.as_ref().or(self.lambda1_fitted.as_ref());
        if let (Some(l1), Some(l2)) = (l1, &self.lambda2) {
            let slack = 1e-6 * l2.value.max(1.0) + 2.0 * l1.value * l1.error.unwrap_or(0.0);
            if l1.value * l1.value < l2.value - slack {
                self.note(format!(
                    "λ₁² = {} < λ₂ = {}: inconsistent inputs",
                    l1.value * l1.value,
                    l2.value
                ));
            }
        }
    }

    fn add_tower(
        &mut self,
        a: &MonomialMatrix,
        depth: usize,
        cap: usize,
        full: bool,
    ) -> Result<()> {
        let tower = match Tower::build(a, depth, cap) {
            Ok(t) => t,
            Err(Error::Capacity { what, .. }) => {
                self.note(format!("tower skipped: {what}"));
                self.partial = true;
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let data = spectral_data(&tower)?;
        self.identity_suite = Some(spectral_identity_suite(&tower, &data, self.config.seed)?);
        if full {
            let residuals = (0..=depth)
                .map(|k| eigenclass_residual(&tower, &data, k))
                .collect::<Result<Vec<_>>>()?;
            self.eigenclasses = Some(Eigenclasses {
                theta_self_intersections: data.theta_self_intersections.clone(),
                theta_star_approx: data.theta_star_approx.clone(),
                theta_lower_approx: data.theta_lower_approx.clone(),
                residuals,
            });
        }
        self.rho_seq = Some(data.rho_seq);
        Ok(())
    }
}

fn monomial_quantities(a: &MonomialMatrix) -> (Quantity, Quantity) {
    let (l1, err) = monomial_lambda1(a);
    (
        Quantity {
            value: l1,
            error: Some(err),
            provenance: Provenance::Exact,
            method: "spectral radius of the exponent matrix".into(),
        },
        Quantity {
            value: a.lambda2() as f64,
            error: None,
            provenance: Provenance::Exact,
            method: "|det A|".into(),
        },
    )
}

pub fn analyze_monomial(
    config: RunConfig,
    a: &MonomialMatrix,
    n: usize,
    depth: usize,
    cap: Option<usize>,
) -> Result<Report> {
    let mut r = Report::new(config);
    r.map = Some(degrowth::ratmap::HomMap::from_monomial(a).to_string());
    let (l1, l2) = monomial_quantities(a);
    r.lambda1 = Some(l1);
    r.lambda2 = Some(l2);
    let ray_cap = cap.unwrap_or(degrowth::toric::DEFAULT_RAY_CAP);
    r.degrees_or_partial(toric_degree_sequence_capped(a, n, ray_cap))?;
    r.degrees_provenance = Some(Provenance::Exact);
    if !r.degrees.is_empty() {
        r.stability = Some(stability_report(&r.degrees)?);
    }
    r.add_lambda1_fitted();
    r.add_fit()?;
    r.add_recurrence(None);
    if depth > 0 {
        let tower_cap = cap.unwrap_or(degrowth::spectral::DEFAULT_TOWER_RAY_CAP);
        r.add_tower(a, depth, tower_cap, false)?;
    }
    Ok(r)
}

pub fn tower(
    config: RunConfig,
    a: &MonomialMatrix,
    depth: usize,
    cap: Option<usize>,
) -> Result<Report> {
    let mut r = Report::new(config);
    r.map = Some(degrowth::ratmap::HomMap::from_monomial(a).to_string());
    let (l1, l2) = monomial_quantities(a);
    r.lambda1 = Some(l1);
    r.lambda2 = Some(l2);
    let tower_cap = cap.unwrap_or(degrowth::spectral::DEFAULT_TOWER_RAY_CAP);
    r.add_tower(a, depth, tower_cap, true)?;
    Ok(r)
}

/// How the topological degree of a general map is obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TopDegChoice {
    Auto,
    Monomial,
    Fiber,
    User(u64),
}

pub fn analyze_ratmap(
    config: RunConfig,
    spec: &MapSpec,
    n: usize,
    term_cap: usize,
    topdeg: TopDegChoice,
) -> Result<Report> {
    let seed = config.seed;
    let mut r = Report::new(config);
    r.map = Some(spec.map.to_string());
    spec.map.check_dominant(seed)?;
    r.degrees_or_partial(degree_sequence(&spec.map, n, term_cap))?;
    r.degrees_provenance = Some(Provenance::Exact);
    if !r.degrees.is_empty() {
        r.stability = Some(stability_report(&r.degrees)?);
    }
    let mode = match topdeg {
        TopDegChoice::Monomial => TopDegreeMode::MonomialExact,
        TopDegChoice::Fiber => TopDegreeMode::FiberCount { seed },
        TopDegChoice::User(v) => TopDegreeMode::UserSupplied(v),
        TopDegChoice::Auto => match (&spec.monomial, spec.lambda2) {
            (Some(_), _) => TopDegreeMode::MonomialExact,
            (None, Some(v)) => TopDegreeMode::UserSupplied(v),
            (None, None) => TopDegreeMode::FiberCount { seed },
        },
    };
    match topological_degree(&spec.map, &mode) {
        Ok(t) => {
            r.lambda2 = Some(Quantity {
                value: t.value as f64,
                error: None,
                provenance: t.provenance,
                method: t.method,
            })
        }
        Err(Error::HeuristicFailure(msg)) => r.note(format!("λ₂ unavailable: {msg}")),
        Err(e) => return Err(e),
    }
    if let Some(a) = &spec.monomial {
        r.lambda1 = Some(monomial_quantities(a).0);
    }
    r.add_lambda1_fitted();
    if r.lambda1.is_none() {
        r.lambda1 = r.lambda1_fitted.clone();
    }
    r.check_degree_bound();
    r.add_fit()?;
    r.add_recurrence(None);
    Ok(r)
}

pub fn fit(
    config: RunConfig,
    degrees: Vec<u64>,
    lambda1: Option<f64>,
    lambda2: f64,
) -> Result<Report> {
    let mut r = Report::new(config);
    r.degrees = degrees;
    r.degrees_provenance = Some(Provenance::UserSupplied);
    r.add_lambda1_fitted();
    r.lambda1 = match lambda1 {
        Some(v) => Some(Quantity {
            value: v,
            error: None,
            provenance: Provenance::UserSupplied,
            method: "user-supplied".into(),
        }),
        None => r.lambda1_fitted.clone(),
    };
    r.lambda2 = Some(Quantity {
        value: lambda2,
        error: None,
        provenance: Provenance::UserSupplied,
        method: "user-supplied".into(),
    });
    if r.degrees.len() < MIN_FIT_WINDOW {
        return Err(Error::InsufficientData(format!(
            "fit needs at least {MIN_FIT_WINDOW} degrees, got {}",
            r.degrees.len()
        )));
    }
    r.check_degree_bound();
    r.add_fit()?;
    r.add_recurrence(None);
    Ok(r)
}

pub fn recurrence(config: RunConfig, degrees: Vec<u64>, max_order: usize) -> Result<Report> {
    let mut r = Report::new(config);
    r.degrees = degrees;
    r.degrees_provenance = Some(Provenance::UserSupplied);
    r.add_recurrence(Some(max_order));
    r.add_lambda1_fitted();
    Ok(r)
}
