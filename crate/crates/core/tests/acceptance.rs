//! Acceptance suite: one PASS/FAIL line per criterion, with detail lines
//! underneath. Exits non-zero when any criterion fails.

use std::process::{Command, ExitCode};

use chanvar::channels::{
    amplitude_damping, basis_channel, computational_measurement, depolarizing, hadamard_decoherence, phase_damping,
    random_channel,
};
use chanvar::closed_forms::{
    self, maximize_classical, qubit_channel_v_published, qubit_channel_vq, ChannelKind, ClosedFormParams, Family,
};
use chanvar::infotheory::{self, InfoSummary};
use chanvar::states::{self, from_bloch, random_density_with, random_pure_with};
use chanvar::sweep::{self, SweepSpec};
use chanvar::uncertainty::uncertainty_triple;
use chanvar::verify::{self, VerifyConfig};
use chanvar::{schema, AlphaBeta, BlochQubit, DensityMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    details: Vec<String>,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            pass: true,
            details: Vec::new(),
        }
    }

    /// Records a sub-check; a failing sub-check fails the criterion.
    fn check(&mut self, ok: bool, detail: String) {
        self.pass &= ok;
        self.details.push(format!("{} {detail}", if ok { "ok  " } else { "FAIL" }));
    }

    fn note(&mut self, detail: String) {
        self.details.push(format!("note {detail}"));
    }
}

fn random_ab<R: Rng>(rng: &mut R) -> AlphaBeta {
    let a: f64 = rng.random();
    let b = rng.random::<f64>() * (1.0 - a);
    AlphaBeta::new(a, b).unwrap()
}

fn random_bloch<R: Rng>(rng: &mut R) -> BlochQubit {
    loop {
        let v: [f64; 3] = [
            2.0 * rng.random::<f64>() - 1.0,
            2.0 * rng.random::<f64>() - 1.0,
            2.0 * rng.random::<f64>() - 1.0,
        ];
        if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
            return BlochQubit::new(v[0], v[1], v[2]).unwrap();
        }
    }
}

/// `l1^k - l2^k` for the qubit eigenvalues `(1 -+ r)/2`.
fn eig_diff(r: f64, k: f64) -> f64 {
    let pow = |x: f64| if x > 0.0 { x.powf(k) } else { 0.0 };
    pow((1.0 - r) / 2.0) - pow((1.0 + r) / 2.0)
}

fn criterion_1() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let kinds = [
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
        ChannelKind::Depolarizing,
        ChannelKind::HadamardDecoherence,
    ];
    for kind in kinds {
        let (mut worst, mut worst_published, mut worst_erratum) = (0f64, 0f64, 0f64);
        for _ in 0..1000 {
            let u: f64 = rng.random();
            let (x, phi) = match kind {
                ChannelKind::AmplitudeDamping => (u, amplitude_damping(u).unwrap()),
                ChannelKind::PhaseDamping => (u, phase_damping(u).unwrap()),
                ChannelKind::Depolarizing => (u / 3.0, depolarizing(u / 3.0).unwrap()),
                _ => (2.0 * u - 1.0, hadamard_decoherence(2.0 * u - 1.0).unwrap()),
            };
            let b = random_bloch(&mut rng);
            let ab = random_ab(&mut rng);
            let params = ClosedFormParams {
                kind,
                channel_param: x,
                bloch: Some(b),
                family_param: None,
                ab,
            };
            let closed = qubit_channel_vq(&params).unwrap();
            let generic = uncertainty_triple(&from_bloch(&b), &phi, ab).unwrap();
            worst = worst
                .max((closed.total - generic.total_v).abs())
                .max((closed.quantum - generic.quantum_q).abs());
            let published = qubit_channel_v_published(&params).unwrap();
            worst_published = worst_published.max((published - generic.total_v).abs());
            // Independent form of the published-minus-true difference.
            let [_, _, r3] = b.components();
            let r = b.radius();
            let s = ab.sum();
            let mm = eig_diff(r, s) * eig_diff(r, 1.0 - s);
            let erratum = match kind {
                ChannelKind::AmplitudeDamping if r > 0.0 => (2.0 - x) * (1.0 - r3 * r3) / (8.0 * r * r) * mm,
                ChannelKind::HadamardDecoherence if r > 0.0 => {
                    3.0 / (4.0 * r * r) * mm * (x * r * r + r3 * r3 - x * r3 * r3)
                }
                _ => 0.0,
            };
            worst_erratum = worst_erratum.max(((published - generic.total_v) - erratum).abs());
        }
        out.check(
            worst <= 1e-10,
            format!("{}: closed form vs spectral path, 1000 samples, max |diff| {worst:e}", kind.name()),
        );
        match kind {
            ChannelKind::AmplitudeDamping | ChannelKind::HadamardDecoherence => {
                out.note(format!(
                    "{}: published total-uncertainty formula deviates by up to {worst_published:e}; \
                     the spectral path is the reference",
                    kind.name()
                ));
                out.check(
                    worst_erratum <= 1e-10,
                    format!(
                        "{}: deviation equals the identified coefficient error to {worst_erratum:e}",
                        kind.name()
                    ),
                );
            }
            _ => out.check(
                worst_published <= 1e-10,
                format!("{}: published formula matches, max |diff| {worst_published:e}", kind.name()),
            ),
        }
    }
    out
}

fn criterion_2() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let phi = basis_channel(4).unwrap();
    for fam in [Family::Werner, Family::Isotropic] {
        let (mut generic_vs_basis, mut basis_vs_family) = (0f64, 0f64);
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let rho = fam.state(x).unwrap();
            for _ in 0..50 {
                let ab = random_ab(&mut rng);
                let g = uncertainty_triple(&rho, &phi, ab).unwrap();
                let b = closed_forms::basis_channel_vq(&rho, ab);
                let f = fam.vq(x, ab).unwrap();
                generic_vs_basis = generic_vs_basis
                    .max((g.total_v - b.total).abs())
                    .max((g.quantum_q - b.quantum).abs());
                basis_vs_family = basis_vs_family
                    .max((b.total - f.total).abs())
                    .max((b.quantum - f.quantum).abs());
            }
        }
        out.check(
            generic_vs_basis <= 1e-10,
            format!("{}: spectral path vs basis-channel form, max |diff| {generic_vs_basis:e}", fam.name()),
        );
        out.check(
            basis_vs_family <= 1e-10,
            format!("{}: basis-channel form vs family form, max |diff| {basis_vs_family:e}", fam.name()),
        );
    }
    out
}

/// Golden-section maximum of a unimodal function on `[lo, hi]`.
fn golden_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> (f64, f64) {
    let g = (5f64.sqrt() - 1.0) / 2.0;
    while hi - lo > 1e-10 {
        let (a, b) = (hi - g * (hi - lo), lo + g * (hi - lo));
        if f(a) < f(b) {
            lo = a;
        } else {
            hi = b;
        }
    }
    let x = (lo + hi) / 2.0;
    (x, f(x))
}

fn criterion_3() -> Outcome {
    let mut out = Outcome::new();
    let phi = basis_channel(4).unwrap();
    for (fam, target) in [(Family::Werner, 0.75), (Family::Isotropic, 0.25)] {
        let m = maximize_classical(fam, 40);
        let ab = AlphaBeta::new(m.alpha, m.beta).unwrap();
        let generic = uncertainty_triple(&fam.state(m.family_param).unwrap(), &phi, ab).unwrap();
        out.check(
            (m.value - 0.9375).abs() <= 2e-4 && (m.family_param - target).abs() <= 0.01,
            format!(
                "{}: max C = {} at parameter {} (alpha {}, beta {})",
                fam.name(),
                m.value,
                m.family_param,
                m.alpha,
                m.beta
            ),
        );
        out.check(
            (generic.classical_c - m.value).abs() <= 1e-10,
            format!("{}: spectral path at the maximizer gives C = {}", fam.name(), generic.classical_c),
        );
        let (x, le) = golden_max(|x| fam.state(x).unwrap().linear_entropy(), 0.0, 1.0);
        out.check(
            (le - 0.75).abs() <= 1e-9 && (x - target).abs() <= 0.01,
            format!("{}: max linear entropy {le} at parameter {x}", fam.name()),
        );
    }
    out
}

/// `(1 - sum_i |<psi|K_i|psi>|^2)/2` by explicit sums over the basis-channel Kraus set.
fn pure_state_brute_force(psi: &[f64]) -> f64 {
    let d = psi.len();
    let mut fe = 0.0;
    for i in 0..d {
        for j in 0..d {
            // K = |i><j| / sqrt(d)
            let e = psi[i] * psi[j] / (d as f64).sqrt();
            fe += e * e;
        }
    }
    (1.0 - fe) / 2.0
}

fn criterion_4() -> Outcome {
    let mut out = Outcome::new();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let cases = [
        (1, "werner p=0", [0.0, h, -h, 0.0]),
        (3, "isotropic F=1", [h, 0.0, 0.0, h]),
    ];
    for (fig, label, psi) in cases {
        let table = sweep::run(&SweepSpec::figure(fig).unwrap()).unwrap();
        let row = table.rows.iter().find(|r| r[0] == if fig == 1 { 0.0 } else { 1.0 }).unwrap();
        let (v, q) = (row[3], row[4]);
        out.check((v - q).abs() <= 1e-12, format!("{label}: V = {v}, Q = {q}"));
        let brute = pure_state_brute_force(&psi);
        out.check(
            (brute - 0.375).abs() <= 1e-12 && (v - brute).abs() <= 1e-12,
            format!("{label}: pure-state sum over Kraus operators gives {brute}"),
        );
    }
    out
}

fn criterion_5() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let (mut worst_pure, mut worst_tradeoff, mut worst_basis) = (0f64, f64::INFINITY, 0f64);
    for i in 0..500 {
        let d = 2 + i % 3;
        let psi = random_pure_with(&mut rng, d).projector();
        let k = rng.random_range(1..=d + 2);
        let phi = random_channel(&mut rng, d, k).unwrap();
        let ab = random_ab(&mut rng);
        let s = InfoSummary::compute(&psi, &phi, ab).unwrap();
        worst_pure = worst_pure.max(s.pure_state_residual().abs());

        let rank = rng.random_range(1..=d);
        let rho = random_density_with(&mut rng, d, rank).unwrap();
        let ab = random_ab(&mut rng);
        worst_tradeoff = worst_tradeoff.min(infotheory::fidelity_tradeoff(&rho, &phi, ab).unwrap().slack);
        let b = infotheory::fidelity_tradeoff(&rho, &basis_channel(d).unwrap(), ab).unwrap();
        worst_basis = worst_basis.max(b.slack.abs());
    }
    out.check(worst_pure <= 1e-12, format!("pure states: max |2V + Fe - 1| = {worst_pure:e}"));
    out.check(
        worst_tradeoff >= -1e-9,
        format!("fidelity trade-off: min slack {worst_tradeoff:e} over 500 random inputs"),
    );
    out.check(worst_basis <= 1e-9, format!("basis channel: max |slack| = {worst_basis:e}"));
    let w = InfoSummary::compute(
        &states::werner(0.75).unwrap(),
        &computational_measurement(4).unwrap(),
        AlphaBeta::new(0.2, 0.3).unwrap(),
    )
    .unwrap()
    .fidelity_tradeoff();
    out.check(
        (w.lhs - 1.0).abs() <= 1e-9 && (w.rhs - 1.0).abs() <= 1e-9,
        format!("werner p=3/4 under the measurement: lhs {} rhs {}", w.lhs, w.rhs),
    );
    out
}

fn criterion_6() -> Outcome {
    let mut out = Outcome::new();
    let pi = computational_measurement(4).unwrap();
    let ab = AlphaBeta::new(0.2, 0.3).unwrap();
    let names = ["entropy-exchange bound rhs", "entropy exchange", "coherent-information bound rhs", "S(rho) - 2"];
    for fam in [Family::Werner, Family::Isotropic] {
        let mut published = [0f64; 4];
        let mut corrected = [0f64; 4];
        for i in 0..=100 {
            let x = i as f64 / 100.0;
            let s = InfoSummary::compute(&fam.state(x).unwrap(), &pi, ab).unwrap();
            let (se, ic) = (s.entropy_exchange_bound(), s.coherent_information_bound());
            let generic = [se.rhs, se.lhs, ic.rhs, ic.lhs];
            let p = fam.bound_curves_published(x).unwrap();
            let c = fam.bound_curves(x).unwrap();
            let pv = [p.se_bound_rhs, p.se_bound_lhs, p.ic_bound_rhs, p.ic_bound_lhs];
            let cv = [c.se_bound_rhs, c.se_bound_lhs, c.ic_bound_rhs, c.ic_bound_lhs];
            for k in 0..4 {
                published[k] = published[k].max((pv[k] - generic[k]).abs());
                corrected[k] = corrected[k].max((cv[k] - generic[k]).abs());
            }
        }
        for k in 0..4 {
            out.check(
                published[k] <= 1e-9,
                format!("{}: published {} vs spectral path, max |diff| {:e}", fam.name(), names[k], published[k]),
            );
        }
        let worst = corrected.iter().cloned().fold(0.0, f64::max);
        out.note(format!(
            "{}: corrected closed forms of all four curves match the spectral path to {worst:e}",
            fam.name()
        ));
    }
    out
}

const CRITERION_7: &[&str] = &[
    "nonnegativity",
    "linearity",
    "concavity_v",
    "unitary_invariance",
    "ancillary_independence",
    "purification_inequality",
    "kraus_independence",
    "decomposition",
    "q_convexity",
    "c_concavity",
];

fn criterion_7() -> Outcome {
    let mut out = Outcome::new();
    let config = VerifyConfig {
        seed: 7,
        samples: 500,
        dims: vec![2, 3, 4],
        channel: None,
    };
    let names: Vec<String> = CRITERION_7.iter().map(|s| s.to_string()).collect();
    let report = verify::run_only(&config, &names).unwrap();
    for p in &report.properties {
        out.check(
            p.ok(),
            format!("{}: {}/{} samples, worst slack {:e}", p.name, p.passed, p.samples, p.worst_slack),
        );
    }
    // A trace-preserving qubit channel and two full-rank states found by a
    // wider search; random sampling rarely lands this close to the boundary.
    let text = include_str!("fixtures/q_convexity_counterexample.json");
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    let rho1 = schema::state_from_json(&v["rho1"]).unwrap();
    let rho2 = schema::state_from_json(&v["rho2"]).unwrap();
    let phi = schema::channel_from_json(&v["channel"]).unwrap();
    let (a, b, l) = (v["alpha"].as_f64().unwrap(), v["beta"].as_f64().unwrap(), v["lambda"].as_f64().unwrap());
    let ab = AlphaBeta::new(a, b).unwrap();
    let mix = DensityMatrix::mixture(&[(l, &rho1), (1.0 - l, &rho2)]).unwrap();
    let q = |r: &DensityMatrix| uncertainty_triple(r, &phi, ab).unwrap().quantum_q;
    let slack = l * q(&rho1) + (1.0 - l) * q(&rho2) - q(&mix);
    out.check(
        slack >= -1e-9,
        format!(
            "q_convexity at a fixed input (alpha {a:.4}, beta {b:.4}, weight {l:.4}, {} Kraus operators): slack {slack:e}",
            phi.kraus_ops().len()
        ),
    );
    let damped = verify::run_only(
        &VerifyConfig {
            channel: Some(amplitude_damping(0.3).unwrap()),
            ..config.clone()
        },
        &["q_convexity".to_string()],
    )
    .unwrap();
    let p = &damped.properties[0];
    out.check(
        p.ok(),
        format!(
            "q_convexity under amplitude damping p=0.3: {}/{} samples, worst slack {:e}",
            p.passed, p.samples, p.worst_slack
        ),
    );
    let hermitian = verify::run_only(&config, &["q_convexity_hermitian_kraus".to_string()]).unwrap();
    let h = &hermitian.properties[0];
    out.note(format!(
        "q_convexity with Hermitian Kraus operators: {}/{} samples, worst slack {:e}",
        h.passed, h.samples, h.worst_slack
    ));
    out
}

fn criterion_8() -> Outcome {
    let mut out = Outcome::new();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let (mut worst_paths, mut worst_fano) = (0f64, f64::INFINITY);
    for i in 0..500 {
        let d = 2 + i % 3;
        let rank = rng.random_range(1..=d);
        let rho = random_density_with(&mut rng, d, rank).unwrap();
        let k = rng.random_range(1..=d + 2);
        let phi = random_channel(&mut rng, d, k).unwrap();
        let a = infotheory::entropy_exchange(&rho, &phi).unwrap();
        let b = infotheory::entropy_exchange_purified(&rho, &phi).unwrap();
        worst_paths = worst_paths.max((a - b).abs());
        worst_fano = worst_fano.min(infotheory::quantum_fano(&rho, &phi).unwrap().slack);
    }
    out.check(worst_paths <= 1e-9, format!("exchange-matrix vs purification entropy: max |diff| {worst_paths:e}"));
    out.check(worst_fano >= -1e-9, format!("quantum Fano: min slack {worst_fano:e} over 500 samples"));
    let mut worst_sat = 0f64;
    for i in 0..=20 {
        let p = i as f64 / 60.0;
        let r = infotheory::quantum_fano(&DensityMatrix::maximally_mixed(2), &depolarizing(p).unwrap()).unwrap();
        worst_sat = worst_sat.max(r.slack.abs());
    }
    out.check(worst_sat <= 1e-9, format!("depolarizing on 1/2: max |Fano slack| {worst_sat:e}"));
    out
}

fn run_cli(args: &[&str]) -> (Option<i32>, Vec<u8>) {
    let o = Command::new(env!("CARGO_BIN_EXE_chanvar")).args(args).output().unwrap();
    (o.status.code(), o.stdout)
}

fn criterion_9() -> Outcome {
    let mut out = Outcome::new();
    let dir = tempfile::tempdir().unwrap();
    let verify_args = ["verify", "--seed", "99", "--samples", "60", "--json"];
    let (c1, v1) = run_cli(&verify_args);
    let (c2, v2) = run_cli(&verify_args);
    out.check(c1 == c2 && v1 == v2 && !v1.is_empty(), format!("verify: two runs, {} identical bytes", v1.len()));
    let mut csv = Vec::new();
    for run in 0..2 {
        let path = dir.path().join(format!("fig2-{run}.csv"));
        let (code, _) = run_cli(&["sweep", "--figure", "2", "--out", path.to_str().unwrap()]);
        assert_eq!(code, Some(0));
        csv.push(std::fs::read(&path).unwrap());
    }
    out.check(csv[0] == csv[1], format!("sweep: two runs, {} identical bytes", csv[0].len()));
    let a = verify::run(&VerifyConfig {
        seed: 3,
        samples: 40,
        ..VerifyConfig::default()
    })
    .unwrap();
    let b = verify::run(&VerifyConfig {
        seed: 3,
        samples: 40,
        ..VerifyConfig::default()
    })
    .unwrap();
    let bits = |r: &verify::VerifyReport| r.properties.iter().map(|p| p.worst_slack.to_bits()).collect::<Vec<_>>();
    out.check(bits(&a) == bits(&b), "library verify: worst slacks bit-identical".into());
    out
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("closed-form equivalence for the qubit channels", criterion_1),
        ("basis channel, Werner and isotropic chain", criterion_2),
        ("maxima of the classical uncertainty and of the mixedness", criterion_3),
        ("figure endpoints are pure states with V = Q = 3/8", criterion_4),
        ("trade-off identities", criterion_5),
        ("bound curves under the computational-basis measurement", criterion_6),
        ("property suite", criterion_7),
        ("entropy exchange paths and quantum Fano", criterion_8),
        ("determinism of verify and sweep", criterion_9),
    ];
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let o = f();
        println!("{} criterion {}: {title}", if o.pass { "PASS" } else { "FAIL" }, i + 1);
        for d in &o.details {
            println!("    {d}");
        }
        if !o.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
