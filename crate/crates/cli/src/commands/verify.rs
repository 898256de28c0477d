use std::collections::BTreeMap;

use chlab_core::corpus::Corpus;
use chlab_core::hankel::{identity_suite, Identity, SuiteConfig};
use chlab_core::numkit::par_map;
use chlab_core::soliton::{determinant_a_checks, form_equivalence, relationship_residual};
use chlab_core::{Real, SpectralData, SubsetFormSpec};
use serde::Serialize;
use serde_json::{json, Value};

use super::{finish, REPORT_VERSION};
use crate::error::{CliError, CliResult};
use crate::output::Staged;
use crate::Run;

const DETERMINANT_A: &str = "determinant_a";
const RELATIONSHIP: &str = "wronskian_relationship";
const FORM_EQUIVALENCE: &str = "form_equivalence";

#[derive(Serialize)]
struct Family {
    max_residual: Real,
    tolerance: Real,
    evaluations: usize,
    passed: bool,
}

#[derive(Serialize)]
struct Failure {
    instance: usize,
    family: String,
    residual: Real,
    tolerance: Real,
    input: Value,
}

struct Tolerances {
    suite: SuiteConfig,
    determinant: Real,
    form: Real,
}

impl Tolerances {
    fn uniform(th: Real) -> Self {
        Tolerances {
            suite: SuiteConfig {
                tolerance: th.clone(),
                collapse_tolerance: th.clone(),
                ..SuiteConfig::default()
            },
            determinant: th.clone(),
            form: th,
        }
    }

    fn identity(&self, id: Identity) -> &Real {
        match id {
            Identity::RankCollapse => &self.suite.collapse_tolerance,
            _ => &self.suite.tolerance,
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            suite: SuiteConfig::default(),
            determinant: Real::parse("1e-35").expect("literal"),
            form: Real::parse("1e-38").expect("literal"),
        }
    }
}

/// One corpus draw: spectral data, a subset-form spec and its `(y, t)` samples.
type Instance = (SpectralData, SubsetFormSpec, Vec<(Real, Real)>);

/// Per-instance maxima keyed by family name, each with its evaluation count.
type InstanceResult = Vec<(String, Real, usize)>;

fn check_instance(
    data: &SpectralData,
    spec: &SubsetFormSpec,
    samples: &[(Real, Real)],
    tol: &Tolerances,
) -> chlab_core::Result<InstanceResult> {
    let report = identity_suite(data, data.len(), &tol.suite)?;
    let mut out: InstanceResult = report
        .families
        .iter()
        .map(|f| (f.identity.name().to_string(), f.max_residual.clone(), f.evaluations))
        .collect();
    let (mut det, mut rel) = (Real::zero(), Real::zero());
    for (y, t) in samples {
        let r = determinant_a_checks(spec, y, t, &tol.determinant)?;
        det = det.max(r.max_residual());
        rel = rel.max(relationship_residual(spec, y, t)?);
    }
    out.push((DETERMINANT_A.into(), det, samples.len()));
    out.push((RELATIONSHIP.into(), rel, samples.len()));
    let form = form_equivalence(spec, samples, &tol.form)?;
    out.push((FORM_EQUIVALENCE.into(), form.max_deviation, samples.len()));
    Ok(out)
}

fn tolerance_of<'a>(tol: &'a Tolerances, family: &str) -> &'a Real {
    match family {
        DETERMINANT_A | RELATIONSHIP => &tol.determinant,
        FORM_EQUIVALENCE => &tol.form,
        name => tol.identity(
            Identity::ALL
                .into_iter()
                .find(|i| i.name() == name)
                .expect("family names come from Identity::name"),
        ),
    }
}

pub fn run(run: &Run) -> CliResult<()> {
    let cfg = &run.cfg;
    let block = cfg.config.verify.clone().unwrap_or_default();
    let instances = block.instances.unwrap_or(200);
    let max_n = block.max_n.unwrap_or(5);
    let n_samples = block.samples.unwrap_or(20);
    if instances == 0 {
        return Err(cfg.invalid("instances", "must be at least 1"));
    }
    if !(1..=6).contains(&max_n) {
        return Err(cfg.invalid("max_n", format!("must lie in 1..=6, got {max_n}")));
    }
    if n_samples == 0 {
        return Err(cfg.invalid("samples", "must be at least 1"));
    }
    let tol = match &block.threshold {
        Some(th) => {
            let th = cfg.real("threshold", th)?;
            if th.is_negative() {
                return Err(cfg.invalid("threshold", "must not be negative"));
            }
            Tolerances::uniform(th)
        }
        None => Tolerances::default(),
    };

    let mut corpus = Corpus::new(run.seed);
    let inputs: Vec<Instance> = (0..instances)
        .map(|_| {
            let data = corpus.spectral_data(max_n);
            let spec = corpus.subset_form_spec(max_n);
            let samples = corpus.samples(n_samples);
            (data, spec, samples)
        })
        .collect();
    let results = par_map(&inputs, |(data, spec, samples)| check_instance(data, spec, samples, &tol));

    let mut families: BTreeMap<String, Family> = BTreeMap::new();
    let mut first_failure: Option<Failure> = None;
    for (i, (result, (data, spec, samples))) in results.into_iter().zip(&inputs).enumerate() {
        for (name, residual, evaluations) in result? {
            let tolerance = tolerance_of(&tol, &name).clone();
            let failed = residual > tolerance;
            if failed && first_failure.is_none() {
                first_failure = Some(Failure {
                    instance: i,
                    family: name.clone(),
                    residual: residual.clone(),
                    tolerance: tolerance.clone(),
                    input: json!({
                        "lambda": data.lambda(),
                        "log_e": data.log_e(),
                        "subset_form": spec,
                        "samples": samples,
                    }),
                });
            }
            let f = families.entry(name).or_insert(Family {
                max_residual: Real::zero(),
                tolerance,
                evaluations: 0,
                passed: true,
            });
            f.max_residual = f.max_residual.clone().max(residual);
            f.evaluations += evaluations;
            f.passed &= !failed;
        }
    }

    for (name, f) in &families {
        println!(
            "{:<24} max {} (<= {}) {}",
            name,
            f.max_residual.to_sci(3),
            f.tolerance.to_sci(3),
            if f.passed { "ok" } else { "FAIL" }
        );
    }
    let report = json!({
        "version": REPORT_VERSION,
        "config": {
            "seed": run.seed,
            "instances": instances,
            "max_n": max_n,
            "samples": n_samples,
            "bits": chlab_core::numkit::working_bits(),
            "threshold": block.threshold,
        },
        "families": families,
        "first_failure": first_failure,
    });
    let mut staged = Staged::new();
    staged.json("verify_report.json", &report)?;
    finish(run, staged)?;
    match first_failure {
        None => Ok(()),
        Some(f) => Err(CliError::Identity(format!(
            "{} residual {} exceeds {} on instance {} (seed {}); see verify_report.json",
            f.family,
            f.residual.to_sci(3),
            f.tolerance.to_sci(3),
            f.instance,
            run.seed
        ))),
    }
}
