//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::f64::consts::PI;
use std::thread;
use std::time::{Duration, Instant};

use freeplate_core::bounds::{
    closed_form_argmin, kroger_eig_bound, kroger_sum_bound, lemma_a1_holds, minimize_ratio,
    plate_eig_bound, plate_sum_bound, BoundInput, F_ratio,
};
use freeplate_core::exact::{free_beam, rectangle_neumann};
use freeplate_core::fourier::{
    default_r_grid, j1_closed_form, master_inequality_check, FourierField,
};
use freeplate_core::ritz::{compute_modes, compute_spectrum, zero_mode_count, DEFAULT_ZERO_THRESHOLD};
use freeplate_core::{DomainSpec, Operator, Spectrum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const MEMBRANE_TOL: f64 = 1e-8;
const PLATE_TOL: f64 = 1e-6;
const LEMMA_SEED: u64 = 6_211_489;
const LEMMA_INSTANCES: usize = 10_000;

struct Verdict {
    passed: bool,
    detail: String,
}

impl Verdict {
    fn new(passed: bool, detail: impl Into<String>) -> Self {
        Self {
            passed,
            detail: detail.into(),
        }
    }

    fn error(e: impl std::fmt::Display) -> Self {
        Self::new(false, format!("error: {e}"))
    }
}

fn square() -> DomainSpec {
    DomainSpec::rectangle(1.0, 1.0).unwrap()
}

fn disk() -> DomainSpec {
    DomainSpec::disk(1.0).unwrap()
}

fn rel(got: f64, want: f64) -> f64 {
    if want == 0.0 {
        got.abs()
    } else {
        (got - want).abs() / want.abs()
    }
}

fn plate(domain: &DomainSpec, tau: f64, count: usize) -> Result<Spectrum, String> {
    compute_spectrum(domain, Operator::Plate, tau, count, PLATE_TOL).map_err(|e| e.to_string())
}

fn membrane_oracle() -> Verdict {
    let start = Instant::now();
    let spectrum = match compute_spectrum(&square(), Operator::Membrane, 0.0, 8, MEMBRANE_TOL) {
        Ok(s) => s,
        Err(e) => return Verdict::error(e),
    };
    let elapsed = start.elapsed();
    let exact = rectangle_neumann(1.0, 1.0, 8).unwrap();
    let worst = spectrum
        .values
        .iter()
        .zip(&exact.values)
        .map(|(g, w)| rel(*g, *w))
        .fold(0.0, f64::max);
    Verdict::new(
        worst <= 1e-6 && spectrum.degree_used <= 24 && elapsed < Duration::from_secs(30),
        format!(
            "max rel dev {worst:.2e} at degree {} in {:.2} s",
            spectrum.degree_used,
            elapsed.as_secs_f64()
        ),
    )
}

fn plate_oracle() -> Verdict {
    let interval = DomainSpec::interval(1.0).unwrap();
    let spectrum = match compute_spectrum(&interval, Operator::Plate, 0.0, 5, 1e-8) {
        Ok(s) => s,
        Err(e) => return Verdict::error(e),
    };
    let beam = free_beam(1.0, 5).unwrap();
    let frozen = [0.0, 0.0, 500.5639, 3803.537, 14617.63];
    let frozen_ok = beam
        .values
        .iter()
        .zip(frozen)
        .all(|(b, f)| (b - f).abs() <= 1e-6 * f.max(1.0) + 5e-3);
    let worst = spectrum.values[2..]
        .iter()
        .zip(&beam.values[2..])
        .map(|(g, w)| rel(*g, *w))
        .fold(0.0, f64::max);
    Verdict::new(
        worst <= 1e-6 && frozen_ok,
        format!("max rel dev on nonzero values {worst:.2e}"),
    )
}

fn zero_modes() -> Verdict {
    let interval = DomainSpec::interval(1.0).unwrap();
    let cases = [
        ("interval tau=0", &interval, 0.0, 2),
        ("square tau=0", &square(), 0.0, 3),
        ("interval tau=1", &interval, 1.0, 1),
        ("square tau=1", &square(), 1.0, 1),
    ];
    let mut passed = true;
    let mut parts = Vec::new();
    for (name, domain, tau, want) in cases {
        let spectrum = match plate(domain, tau, 6) {
            Ok(s) => s,
            Err(e) => return Verdict::error(e),
        };
        let got = zero_mode_count(&spectrum, DEFAULT_ZERO_THRESHOLD);
        let mut ok = got == want;
        if tau > 0.0 {
            ok &= spectrum.values[1] > 0.0;
        }
        passed &= ok;
        parts.push(format!("{name}: {got}"));
    }
    Verdict::new(passed, parts.join(", "))
}

fn kroger_on_exact_square() -> Verdict {
    let exact = rectangle_neumann(1.0, 1.0, 51).unwrap();
    let base = BoundInput::new(2, 1.0, 0.0, 0).unwrap();
    let mut min_slack = f64::INFINITY;
    let mut max_ratio: f64 = 0.0;
    for m in 1..=50 {
        let input = base.with_m(m);
        let sum = exact.partial_sum(m);
        let sum_bound = kroger_sum_bound(&input).unwrap();
        let eig_bound = kroger_eig_bound(&input);
        min_slack = min_slack
            .min(sum_bound - sum)
            .min(eig_bound - exact.values[m]);
        if m >= 5 {
            max_ratio = max_ratio.max(sum_bound / sum);
        }
    }
    Verdict::new(
        min_slack >= 0.0 && max_ratio <= 3.0,
        format!("min slack {min_slack:.4e}, max bound/sum ratio for m >= 5 {max_ratio:.4}"),
    )
}

/// Plate spectra with 16 values on the unit square and unit disk, shared
/// by the sum and eigenvalue criteria.
struct PlateSpectra {
    entries: Vec<(&'static str, f64, Spectrum)>,
}

fn plate_spectra() -> Result<PlateSpectra, String> {
    let jobs: Vec<(&'static str, DomainSpec, f64)> = [0.0, 1.0, 10.0]
        .into_iter()
        .flat_map(|tau| [("square", square(), tau), ("disk", disk(), tau)])
        .collect();
    let entries = thread::scope(|s| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|(name, domain, tau)| s.spawn(move || (*name, *tau, plate(domain, *tau, 16))))
            .collect();
        handles
            .into_iter()
            .map(|h| {
                let (name, tau, spectrum) = h.join().unwrap();
                spectrum.map(|s| (name, tau, s))
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    Ok(PlateSpectra { entries })
}

fn plate_sum_bounds(spectra: &PlateSpectra) -> Verdict {
    let mut worst = f64::INFINITY;
    let mut worst_at = String::new();
    for (name, tau, spectrum) in &spectra.entries {
        let base = BoundInput::new(2, spectrum.domain.volume(), *tau, 0).unwrap();
        for m in 1..=15 {
            let bound = plate_sum_bound(&base.with_m(m)).unwrap();
            let slack = (bound - spectrum.partial_sum(m)) / bound;
            if slack < worst {
                worst = slack;
                worst_at = format!("{name} tau={tau} m={m}");
            }
        }
    }
    Verdict::new(
        worst >= -1e-6,
        format!("min relative slack {worst:.4e} ({worst_at})"),
    )
}

fn eigenvalue_bound_checks(spectra: &PlateSpectra) -> Verdict {
    let mut argmin_dev: f64 = 0.0;
    for n in 1..=3 {
        for m in 1..=10 {
            let input = BoundInput::new(n, 1.0, 0.0, m).unwrap();
            let numeric = match minimize_ratio(&input) {
                Ok(r) => r.r,
                Err(e) => return Verdict::error(e),
            };
            argmin_dev = argmin_dev.max(rel(numeric, closed_form_argmin(&input)));
        }
    }
    let f_at = F_ratio(&BoundInput::new(2, PI, 0.0, 1).unwrap(), 6f64.sqrt()).unwrap();
    let f_dev = (f_at - 36.0).abs();

    let mut min_slack = f64::INFINITY;
    for (_, tau, spectrum) in spectra.entries.iter().filter(|(_, tau, _)| *tau <= 1.0) {
        let base = BoundInput::new(2, spectrum.domain.volume(), *tau, 0).unwrap();
        for m in 0..=10 {
            let bound = plate_eig_bound(&base.with_m(m)).unwrap();
            min_slack = min_slack.min(bound - spectrum.values[m]);
        }
    }
    Verdict::new(
        argmin_dev <= 1e-8 && f_dev <= 1e-12 && min_slack >= 0.0,
        format!(
            "argmin rel dev {argmin_dev:.2e}, |F(sqrt 6) - 36| = {f_dev:.1e}, min eig slack {min_slack:.4e}"
        ),
    )
}

fn proof_mechanics() -> Verdict {
    let count = 6;
    let sol = match compute_modes(&square(), Operator::Plate, 0.0, count, PLATE_TOL) {
        Ok(s) => s,
        Err(e) => return Verdict::error(e),
    };
    let ms = [0, 1, 3, 5];
    let grids: Vec<Vec<f64>> = ms
        .iter()
        .map(|&m| default_r_grid(2, 1.0, m, 8).unwrap())
        .collect();
    let r_max = grids.iter().flatten().copied().fold(0.0, f64::max);
    let field = match FourierField::new(&sol, count, r_max) {
        Ok(f) => f,
        Err(e) => return Verdict::error(e),
    };
    let mut max_mass: f64 = 0.0;
    let mut min_d = f64::INFINITY;
    let mut min_margin = f64::INFINITY;
    let mut j1_dev: f64 = 0.0;
    let mut all_hold = true;
    for (&m, grid) in ms.iter().zip(&grids) {
        for &r in grid {
            let masses = field.plancherel_masses(count, r).unwrap();
            max_mass = masses.iter().copied().fold(max_mass, f64::max);
            let closed = j1_closed_form(2, 1.0, 0.0, r);
            j1_dev = j1_dev.max(rel(field.j1_quadrature(r).unwrap(), closed));
        }
        let report = match master_inequality_check(&field, m, grid) {
            Ok(rep) => rep,
            Err(e) => return Verdict::error(e),
        };
        all_hold &= report.all_hold();
        for row in &report.rows {
            min_d = min_d.min(row.denominator);
            min_margin = min_margin.min(row.margin / row.lambda_next.max(1.0));
        }
    }
    Verdict::new(
        max_mass <= 1.0 + 1e-6 && min_d > 0.0 && all_hold && j1_dev <= 1e-10,
        format!(
            "max mass {max_mass:.6}, min D {min_d:.4e}, min scaled margin {min_margin:.4e}, J1 rel dev {j1_dev:.1e}"
        ),
    )
}

fn lemma_instances() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(LEMMA_SEED);
    let mut counterexamples = 0;
    let mut rejected = 0;
    for _ in 0..LEMMA_INSTANCES {
        let m = rng.gen_range(1..=12);
        let mut lambdas: Vec<f64> = (0..=m).map(|_| rng.gen_range(0.0..1e3)).collect();
        lambdas.sort_by(f64::total_cmp);
        let c = rng.gen_range(0.1..10.0);
        let cs: Vec<f64> = (0..m).map(|_| c * rng.gen_range(0.01..=1.0)).collect();
        let b = m as f64 * c * rng.gen_range(1.001..4.0);
        let weighted: f64 = cs.iter().zip(&lambdas).map(|(cj, l)| cj * l).sum();
        let weight: f64 = cs.iter().sum();
        let tight = lambdas[m] * (b - weight) + weighted;
        let a = if rng.gen_bool(0.25) {
            tight * (1.0 + 1e-12)
        } else {
            tight * (1.0 + rng.gen_range(0.0..1.0))
        };
        match lemma_a1_holds(a, b, c, &cs, &lambdas) {
            Ok(true) => {}
            Ok(false) => counterexamples += 1,
            Err(_) => rejected += 1,
        }
    }
    Verdict::new(
        counterexamples == 0 && rejected == 0,
        format!("{LEMMA_INSTANCES} instances, {counterexamples} counterexamples, {rejected} rejected"),
    )
}

fn isoperimetric() -> Verdict {
    let side = PI.sqrt();
    let sq = DomainSpec::rectangle(side, side).unwrap();
    let (s, d) = match (plate(&sq, 1.0, 2), plate(&disk(), 1.0, 2)) {
        (Ok(s), Ok(d)) => (s, d),
        (Err(e), _) | (_, Err(e)) => return Verdict::error(e),
    };
    let converged = s.converged && d.converged;
    Verdict::new(
        converged && d.values[1] >= s.values[1],
        format!("disk {:.10}, square {:.10}", d.values[1], s.values[1]),
    )
}

fn main() {
    let (independent, shared) = thread::scope(|s| {
        let jobs: Vec<(usize, thread::ScopedJoinHandle<'_, Verdict>)> = vec![
            (1, s.spawn(membrane_oracle)),
            (2, s.spawn(plate_oracle)),
            (3, s.spawn(zero_modes)),
            (4, s.spawn(kroger_on_exact_square)),
            (7, s.spawn(proof_mechanics)),
            (8, s.spawn(lemma_instances)),
            (9, s.spawn(isoperimetric)),
        ];
        let shared = s.spawn(|| match plate_spectra() {
            Ok(spectra) => (plate_sum_bounds(&spectra), eigenvalue_bound_checks(&spectra)),
            Err(e) => (Verdict::error(&e), Verdict::error(&e)),
        });
        let independent: Vec<_> = jobs
            .into_iter()
            .map(|(id, h)| (id, h.join().unwrap()))
            .collect();
        (independent, shared.join().unwrap())
    });

    let mut verdicts = independent;
    verdicts.push((5, shared.0));
    verdicts.push((6, shared.1));
    verdicts.sort_by_key(|(id, _)| *id);

    let titles = [
        "membrane oracle agreement",
        "plate oracle agreement",
        "zero-mode counts",
        "Kroger bounds on the exact square spectrum",
        "plate sum bound on computed spectra",
        "plate eigenvalue bound and minimizer",
        "Fourier proof mechanics",
        "lemma property suite",
        "isoperimetric spot check",
    ];
    let mut failed = 0;
    for (id, v) in &verdicts {
        let tag = if v.passed { "PASS" } else { "FAIL" };
        println!("criterion {id}: {tag} {}: {}", titles[id - 1], v.detail);
        failed += usize::from(!v.passed);
    }
    println!(
        "criterion 10: EXCLUDED the reciprocal-sum divergence for n >= 4 and the sharpness of the bounds as m grows are not reproducible at this scale; criteria 4 to 7 replace them"
    );
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
