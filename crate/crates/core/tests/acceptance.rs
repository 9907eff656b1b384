//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
//! failure. Tolerances are fixed here and never relaxed.

mod common;

use std::process::ExitCode;
use std::time::Instant;

use common::*;
use dynbc::coupling::{
    assemble, assemble_a_constrained, dirichlet_operator, probe_lambda, Which, ReducedSystem,
};
use dynbc::discretize::{
    build_interval_plate, build_network_wave, build_strongly_damped_interval, CaseTag, DiscreteProblem, NetworkGraph,
};
use dynbc::matcore::{eigenvalues, re, spectral_abscissa, spectral_distance, CMat, C64};
use dynbc::semigroup::{
    check_analyticity, check_boundedness, dalembert_check, evolve, wentzell_residual, AnalyticityVerdict,
    ProbeSettings,
};
use dynbc::stability::{
    coupled_boundedness, dyson_phillips, smallness_criterion, split_blocks, verify_l1_estimates, verify_zero_pattern,
    BlockSystem2x2, Bounds, StabilityVerdict,
};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

type Outcome = (bool, String);
type Criterion = (&'static str, fn() -> Outcome);

fn plate(n: usize) -> DiscreteProblem {
    build_interval_plate(n).unwrap()
}

fn damped(n: usize, beta: [f64; 4]) -> DiscreteProblem {
    build_strongly_damped_interval(re(1.0), beta.map(re), n).unwrap()
}

fn network(edges: usize, n: usize) -> DiscreteProblem {
    let (v, inc) = match edges {
        1 => (2, vec![(0, 1)]),
        _ => (4, vec![(0, 1), (0, 2), (0, 3)]),
    };
    let g = NetworkGraph::uniform(v, inc, n).unwrap();
    // M, N Hermitian negative definite with off-diagonal coupling
    let m = CMat::from_fn(v, v, |i, j| if i == j { re(-2.0) } else { C64::new(0.3, 0.1 * (j as f64 - i as f64)) });
    let nn = CMat::from_fn(v, v, |i, j| if i == j { re(-1.0) } else { re(0.2) });
    let phi = CMat::from_fn(v, edges, |_, _| re(1.0));
    build_network_wave(&g, &m, &nn, &CMat::zeros(v, v), &phi).unwrap()
}

fn weighted(p: &DiscreteProblem) -> ReducedSystem {
    assemble(p, Some(probe_lambda(p).unwrap())).unwrap().phase_space_weighted(p).unwrap()
}

fn dirichlet_identities() -> Outcome {
    let lambdas = [re(1.0), C64::new(2.0, 1.0)];
    let (mut trace, mut interior) = (0.0f64, 0.0f64);
    let mut cases = Vec::new();
    for n in [16, 32] {
        cases.push((plate(n), Which::AL));
        cases.push((damped(n, [1.0, 0.0, 0.0, -1.0]), Which::CL));
        cases.push((damped(n, [1.0, 1.0, 1.0, 1.0]), Which::AL));
    }
    for (p, which) in &cases {
        for &lam in &lambdas {
            let d = dirichlet_operator(p, *which, lam).unwrap();
            trace = trace.max(d.residual_trace);
            interior = interior.max(d.residual_interior);
        }
    }
    // informational: at n = 64 the plate stencil has |A| ~ 1.6e9, so the
    // residual sits at the rounding floor u|A||D|
    let fine = dirichlet_operator(&plate(64), Which::AL, re(1.0)).unwrap().residual_interior;
    (
        trace <= 1e-9 && interior <= 1e-8,
        format!(
            "n = 16, 32: max |LD-I| = {trace:.2e} (tol 1e-9), interior residual = {interior:.2e} (tol 1e-8); plate n=64 interior residual {fine:.2e}"
        ),
    )
}

fn similarity_equivalence() -> Outcome {
    let problems = [
        ("plate n=32", plate(32)),
        ("plate n=64", plate(64)),
        ("plate unbounded-trace n=32", plate(32).with_case(CaseTag::UnboundedTrace)),
        ("damped n=32", damped(32, [1.0, 0.0, 0.0, -1.0])),
        ("damped unbounded-trace n=32", damped(32, [1.0, 0.0, 0.0, -1.0]).with_case(CaseTag::StrongDampingUnbounded)),
        ("network E=3 n=16", network(3, 16)),
    ];
    let (mut dist, mut inv) = (0.0f64, 0.0f64);
    let mut worst = "";
    for (name, p) in &problems {
        let reference = eigenvalues(&assemble_a_constrained(p).unwrap()).unwrap();
        for lam in [re(1.0), C64::new(2.0, 1.0)] {
            let sys = assemble(p, Some(lam)).unwrap();
            let d = spectral_distance(&reference, &eigenvalues(&sys.g).unwrap());
            if d > dist {
                dist = d;
                worst = name;
            }
            inv = inv.max(sys.inverse_defect());
        }
    }
    (
        dist <= 1e-7 && inv <= 1e-9,
        format!("max spectral distance = {dist:.2e} ({worst}, tol 1e-7), max |UU^-1 - I| = {inv:.2e} (tol 1e-9)"),
    )
}

/// `Σ_{k≤k_max} S_k(T)` for the scalar system as Fourier coefficients of
/// `z ↦ e^{T(D + zN)}`, N the coupling, on 64 points of the unit circle.
fn truncated_series_oracle(t: f64, k_max: usize) -> CMat {
    let points = 64;
    let mut acc = [[re(0.0); 2]; 2];
    for j in 0..points {
        let z = C64::from_polar(1.0, 2.0 * std::f64::consts::PI * j as f64 / points as f64);
        let e = expm2([[re(-1.0), z], [z, re(-2.0)]], t);
        let weight: C64 = (0..=k_max).map(|k| z.powi(-(k as i32))).sum::<C64>() / points as f64;
        for r in 0..2 {
            for c in 0..2 {
                acc[r][c] += e[r][c] * weight;
            }
        }
    }
    m2_to_cmat(acc)
}

fn dyson_phillips_fidelity() -> Outcome {
    let sys = BlockSystem2x2::scalar(-1.0, 1.0, 1.0, -2.0);
    let exact = m2_to_cmat(expm2([[re(-1.0), re(1.0)], [re(1.0), re(-2.0)]], 5.0));
    let coarse = dyson_phillips(&sys, 5.0, 500, 12).unwrap();
    let fine = dyson_phillips(&sys, 5.0, 1000, 12).unwrap();
    let total = dynbc::matcore::operator_norm(&(&coarse.partial_sum(500) - &exact));
    let oracle = truncated_series_oracle(5.0, 12);
    let e1 = dynbc::matcore::operator_norm(&(&coarse.partial_sum(500) - &oracle));
    let e2 = dynbc::matcore::operator_norm(&(&fine.partial_sum(1000) - &oracle));
    let ratio = e1 / e2;
    let zero = verify_zero_pattern(&coarse).max_violation.max(verify_zero_pattern(&fine).max_violation);
    (
        total <= 1e-3 && ratio >= 3.5 && zero == 0.0,
        format!(
            "|sum S_k(5) - e^(5H)| = {total:.2e} (tol 1e-3), quadrature halving ratio = {ratio:.2} (min 3.5), zero-pattern violation = {zero:e}"
        ),
    )
}

fn l1_estimates() -> Outcome {
    let exact = BlockSystem2x2::scalar(-1.0, 1.0, 1.0, -2.0)
        .with_bounds(Bounds { m1: 1.0, eps1: -1.0, m2: 1.0, eps2: -2.0 })
        .unwrap();
    let exp = dyson_phillips(&exact, 20.0, 4000, 5).unwrap();
    let rep = verify_l1_estimates(&exact, &exp, &[vec![re(1.0)]], &[vec![re(1.0)]]).unwrap();
    let s1 = rep.checks.iter().find(|c| c.estimate == 3 && c.n == 0).unwrap().lhs;
    let closed_ok = (s1 - 0.5).abs() <= 0.005;
    let mut ok = rep.all_hold() && closed_ok;
    let mut worst = rep.worst_ratio();
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..50 {
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let base = BlockSystem2x2::new(
            hurwitz_diagonal(&mut rng, p, -3.0, -0.5),
            CMat::zeros(p, q),
            CMat::zeros(q, p),
            hurwitz_diagonal(&mut rng, q, -3.0, -0.5),
        )
        .unwrap()
        .with_estimated_bounds()
        .unwrap();
        let target = rng.gen_range(0.05..0.9);
        let sys = with_target_m(base, &mut rng, target);
        let b = sys.bounds.unwrap();
        let t_end = 1.01 * 1e6f64.ln() / b.eps1.max(b.eps2).abs();
        let exp = dyson_phillips(&sys, t_end, 1200, 5).unwrap();
        let xs: Vec<_> = (0..2).map(|_| random_vec(&mut rng, p)).collect();
        let ys: Vec<_> = (0..2).map(|_| random_vec(&mut rng, q)).collect();
        let rep = verify_l1_estimates(&sys, &exp, &xs, &ys).unwrap();
        ok &= rep.all_hold() && rep.m < 0.9;
        worst = worst.max(rep.worst_ratio());
    }
    (ok, format!("closed form int|S1^(12)| = {s1:.5} (= 0.5), worst lhs/rhs over scalar + 50 random systems = {worst:.4} (max 1.01)"))
}

fn smallness_soundness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(5);
    let (mut certified, mut failures, mut worst_abscissa, mut worst_ratio) = (0, 0, f64::NEG_INFINITY, 0.0f64);
    while certified < 100 {
        let (p, q) = (rng.gen_range(1..=4), rng.gen_range(1..=3));
        let base = BlockSystem2x2::new(
            hurwitz_nonnormal(&mut rng, p, -2.0, -0.3, 0.8),
            CMat::zeros(p, q),
            CMat::zeros(q, p),
            hurwitz_nonnormal(&mut rng, q, -2.0, -0.3, 0.8),
        )
        .unwrap()
        .with_estimated_bounds()
        .unwrap();
        let target = rng.gen_range(0.05..1.2);
        let sys = with_target_m(base, &mut rng, target);
        let probes: Vec<_> = (0..5).map(|_| random_vec(&mut rng, p + q)).collect();
        let cert = smallness_criterion(&sys, &probes, 3000).unwrap();
        if cert.verdict != StabilityVerdict::UniformlyExponentiallyStable {
            continue;
        }
        certified += 1;
        worst_abscissa = worst_abscissa.max(cert.spectral_abscissa);
        for c in &cert.integral_checks {
            worst_ratio = worst_ratio.max((c.integral + c.tail) / c.bound);
        }
        if !cert.consistent() || cert.integral_checks.len() != 5 {
            failures += 1;
        }
    }
    (
        failures == 0,
        format!("100 certified systems: max abscissa = {worst_abscissa:.3e} (< 0), worst integral/bound = {worst_ratio:.3} (<= 1), failures = {failures}"),
    )
}

fn j_zero_boundedness() -> Outcome {
    let mut rng = StdRng::seed_from_u64(6);
    let (mut failures, mut worst_slope, mut worst_sup) = (0, f64::NEG_INFINITY, 0.0f64);
    for i in 0..100 {
        let (p, q) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
        let (h, lb) = match i % 3 {
            0 => (hurwitz_nonnormal(&mut rng, p, -2.0, -0.3, 0.8), skew_hermitian(&mut rng, q)),
            1 => (skew_hermitian(&mut rng, p), hurwitz_nonnormal(&mut rng, q, -2.0, -0.3, 0.8)),
            _ => (hurwitz_nonnormal(&mut rng, p, -2.0, -0.3, 0.8), hurwitz_nonnormal(&mut rng, q, -2.0, -0.3, 0.8)),
        };
        let k = random_matrix(&mut rng, q, p).scale_real(2.0);
        let sys = BlockSystem2x2::new(h, CMat::zeros(p, q), k, lb).unwrap().with_estimated_bounds().unwrap();
        let r = coupled_boundedness(&sys, 1e3).unwrap();
        worst_slope = worst_slope.max(r.final_slope);
        worst_sup = worst_sup.max(r.observed_sup);
        if !(r.premise && r.bounded && r.observed_sup.is_finite() && r.final_slope <= 1e-3 && r.series_terminates) {
            failures += 1;
        }
    }
    (
        failures == 0,
        format!("100 systems: max sup = {worst_sup:.3}, max final-decade slope = {worst_slope:.2e} (tol 1e-3), failures = {failures}"),
    )
}

fn plate_wentzell(n: usize) -> f64 {
    let p = plate(n);
    let sys = assemble(&p, Some(probe_lambda(&p).unwrap())).unwrap();
    let state = sys.u.mul_vec(&plate_initial(n + 2));
    let tr = evolve(&sys.g, &state, 1.0, 4).unwrap();
    wentzell_residual(&p, &sys, &tr, 4).unwrap()
}

fn plate_scenario() -> Outcome {
    let p = plate(64);
    let a = spectral_abscissa(&assemble_a_constrained(&p).unwrap()).unwrap();
    let probe = check_analyticity(&weighted(&p).g, &ProbeSettings::default()).unwrap();
    let r: Vec<f64> = [16, 32, 64].iter().map(|&n| plate_wentzell(n)).collect();
    let order = (r[1] / r[2]).log2();
    let ok = a < 0.0 && probe.verdict == AnalyticityVerdict::ConsistentWithAnalytic && r[2] <= 1e-4 && order >= 1.5 && r[0] > r[1];
    (
        ok,
        format!(
            "abscissa = {a:.4}, probe sup = {:.3} ({}), Wentzell residual n=16/32/64 = {:.2e}/{:.2e}/{:.2e} (tol 1e-4), order = {order:.2} (min 1.5)",
            probe.sup_norms.iter().copied().fold(0.0, f64::max),
            probe.verdict.name(),
            r[0],
            r[1],
            r[2]
        ),
    )
}

fn network_scenario() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for edges in [1, 3] {
        let p = network(edges, 32);
        let sys = weighted(&p);
        let lb = split_blocks(&sys, "boundary").unwrap().lb;
        let lb_abscissa = spectral_abscissa(&lb).unwrap();
        let r = check_boundedness(&sys.g, 1e3, 1e6).unwrap();
        ok &= lb_abscissa < 0.0 && r.bounded;
        parts.push(format!(
            "E={edges}: boundary block abscissa = {lb_abscissa:.3}, sup = {:.3}, slope = {:.1e}, {}",
            r.observed_sup,
            r.final_slope,
            if r.bounded { "bounded" } else { "unbounded" }
        ));
    }
    (ok, parts.join("; "))
}

fn damped_scenario() -> Outcome {
    let p = damped(32, [1.0, 0.0, 0.0, -1.0]);
    let probe = check_analyticity(&weighted(&p).g, &ProbeSettings::default()).unwrap();
    let (c0, _) = dynbc::coupling::kernel_restriction(p.c(), p.l()).unwrap();
    let residual = dalembert_check(&c0, 0.5, 0.25).unwrap();
    (
        probe.verdict == AnalyticityVerdict::ConsistentWithAnalytic && residual <= 1e-8,
        format!(
            "probe sup = {:.3} ({}), d'Alembert residual of C0 = {residual:.2e} (tol 1e-8)",
            probe.sup_norms.iter().copied().fold(0.0, f64::max),
            probe.verdict.name()
        ),
    )
}

fn coupling_sweep() -> Outcome {
    let base = plate(16);
    let mut ms = Vec::new();
    let mut baseline_ok = false;
    for i in 0..=10 {
        let s = i as f64 / 10.0;
        let p = base.with_coupling_scale(s);
        let sys = split_blocks(&weighted(&p), "boundary").unwrap().with_estimated_bounds().unwrap();
        let cert = smallness_criterion(&sys, &[], 10).unwrap();
        if i == 0 {
            let b = sys.bounds.unwrap();
            let blocks_stable = b.eps1 < 0.0 && b.eps2 < 0.0;
            baseline_ok = !blocks_stable || cert.verdict == StabilityVerdict::UniformlyExponentiallyStable;
        }
        ms.push(cert.m);
    }
    let monotone = ms.windows(2).all(|w| w[1] >= w[0]);
    (
        monotone && baseline_ok,
        format!(
            "M(s) for s = 0..1: {} ({}), baseline {}",
            ms.iter().map(|m| format!("{m:.3e}")).collect::<Vec<_>>().join(" "),
            if monotone { "monotone" } else { "not monotone" },
            if baseline_ok { "certified" } else { "not certified" }
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("Dirichlet-operator identities", dirichlet_identities),
        ("similarity equivalence", similarity_equivalence),
        ("Dyson-Phillips fidelity", dyson_phillips_fidelity),
        ("L1 estimates", l1_estimates),
        ("smallness certificate soundness", smallness_soundness),
        ("J=0 boundedness", j_zero_boundedness),
        ("plate scenario", plate_scenario),
        ("network scenario", network_scenario),
        ("strongly damped scenario", damped_scenario),
        ("coupling-scale sweep", coupling_sweep),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = run();
        failed += usize::from(!ok);
        println!(
            "{} criterion {:>2} {name}: {detail} [{:.1}s]",
            if ok { "PASS" } else { "FAIL" },
            i + 1,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
