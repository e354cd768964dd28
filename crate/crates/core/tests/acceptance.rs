//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.

use std::f64::consts::{PI, TAU};
use std::time::Instant;

use skewdyn::config::{kmh_to_ms, ms_to_kmh};
use skewdyn::eigen::{
    coupled_orthogonality_residual, orthogonality_residual, EigenProblem, ModeSelection,
    SpringBoundary,
};
use skewdyn::integrator::{integrate, integrate_with, ModalState, StepCoefficients};
use skewdyn::presets;
use skewdyn::response::{resonance_speeds, speed_grid, Analysis};
use skewdyn::studies::{sweep_skew, sweep_span, sweep_stiffness, Parameter, SweepSpec};
use skewdyn::{find_modes, DeckProperties, Model, RunSettings, Train};

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn freq_check(
    deck: &DeckProperties,
    model: Model,
    expected: &[f64; 5],
    tol: f64,
) -> (bool, String) {
    let modes = find_modes(deck, model, 5).expect("modes");
    let errs: Vec<f64> = modes
        .iter()
        .zip(expected)
        .map(|(m, f)| rel(m.frequency_hz(), *f))
        .collect();
    let got: Vec<String> = modes
        .iter()
        .map(|m| format!("{:.3}", m.frequency_hz()))
        .collect();
    let worst = errs.iter().copied().fold(0.0, f64::max);
    (
        worst <= tol,
        format!(
            "{model:?} [{}] max rel err {:.3}%",
            got.join(", "),
            100.0 * worst
        ),
    )
}

fn example_1_frequencies() -> Outcome {
    let deck = presets::example_1().deck;
    let start = Instant::now();
    let (pa, da) = freq_check(
        &deck,
        Model::Analytical,
        &[6.259, 23.548, 53.361, 94.423, 147.716],
        5e-3,
    );
    let (ps, ds) = freq_check(
        &deck,
        Model::Simplified,
        &[6.259, 23.910, 53.312, 94.471, 147.387],
        5e-3,
    );
    let secs = start.elapsed().as_secs_f64();
    Outcome {
        pass: pa && ps && secs < 1.0,
        detail: format!("{da}; {ds}; {secs:.3} s"),
    }
}

fn example_2_frequencies() -> Outcome {
    let deck = presets::example_2().deck;
    let (pa, da) = freq_check(
        &deck,
        Model::Analytical,
        &[5.878, 23.305, 52.482, 93.276, 145.748],
        5e-3,
    );
    let (ps, ds) = freq_check(
        &deck,
        Model::Simplified,
        &[5.878, 23.344, 52.455, 93.209, 145.608],
        5e-3,
    );
    Outcome {
        pass: pa && ps,
        detail: format!("{da}; {ds}"),
    }
}

fn resonance() -> Outcome {
    let v: Vec<f64> = resonance_speeds(5.878, 18.0, 3)
        .unwrap()
        .into_iter()
        .map(ms_to_kmh)
        .collect();
    let formula = [381.0, 190.5, 127.0];
    let pass = v.iter().zip(formula).all(|(a, b)| (a - b).abs() <= 1.0);
    Outcome {
        pass,
        detail: format!("{:.2}, {:.2}, {:.2} km/h", v[0], v[1], v[2]),
    }
}

fn near(peaks: &[f64], target: f64) -> bool {
    peaks.iter().any(|v| (v - target).abs() <= 10.0 + 1e-9)
}

fn envelope_peaks() -> Outcome {
    let cfg = presets::example_2();
    let train = presets::hslm_a1();
    let start = Instant::now();
    let analysis = Analysis::new(&cfg.deck, Model::Simplified, &cfg.run).unwrap();
    let speeds = speed_grid(kmh_to_ms(100.0), kmh_to_ms(300.0), kmh_to_ms(5.0)).unwrap();
    let env = analysis.envelope(&train, &speeds, 0.0).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let pu: Vec<f64> = env
        .local_maxima(&env.max_abs_u)
        .into_iter()
        .map(ms_to_kmh)
        .collect();
    let pa: Vec<f64> = env
        .local_maxima(&env.max_abs_u_ddot)
        .into_iter()
        .map(ms_to_kmh)
        .collect();
    let pass = env.len() == 41
        && near(&pu, 190.0)
        && near(&pu, 125.0)
        && near(&pa, 190.0)
        && near(&pa, 125.0)
        && secs < 60.0;
    let list = |p: &[f64]| {
        p.iter()
            .map(|v| format!("{v:.0}"))
            .collect::<Vec<_>>()
            .join("/")
    };
    Outcome {
        pass,
        detail: format!(
            "u peaks at {} km/h, a peaks at {} km/h, {} speeds in {secs:.2} s",
            list(&pu),
            list(&pa),
            env.len()
        ),
    }
}

fn model_agreement() -> Outcome {
    let cfg = presets::example_1();
    let convoy = Train::single(170e3)
        .unwrap()
        .at_speed(kmh_to_ms(100.0), 0.0)
        .unwrap();
    let a = Analysis::new(&cfg.deck, Model::Analytical, &cfg.run)
        .unwrap()
        .run(&convoy)
        .unwrap();
    let s = Analysis::new(&cfg.deck, Model::Simplified, &cfg.run)
        .unwrap()
        .run(&convoy)
        .unwrap();
    let du = rel(a.max_abs_u(), s.max_abs_u());
    let da = rel(a.max_abs_u_ddot(), s.max_abs_u_ddot());
    Outcome {
        pass: du <= 0.05 && da <= 0.10,
        detail: format!(
            "u {:.4e} vs {:.4e} m ({:.2}%), a {:.4} vs {:.4} m/s2 ({:.2}%)",
            a.max_abs_u(),
            s.max_abs_u(),
            100.0 * du,
            a.max_abs_u_ddot(),
            s.max_abs_u_ddot(),
            100.0 * da
        ),
    }
}

fn integrator_suite() -> Outcome {
    let mut worst = [0.0f64; 5];
    // step response, damped
    let (w, xi, dt, q): (f64, f64, f64, f64) = (TAU * 5.878, 0.01, 0.001, 2.0);
    let wd = w * (1.0 - xi * xi).sqrt();
    let r = xi / (1.0 - xi * xi).sqrt();
    let out = integrate(w, xi, dt, &vec![q; 5001]).unwrap();
    for (i, s) in out.iter().enumerate().skip(1) {
        let t = i as f64 * dt;
        let exact =
            q / (w * w) * (1.0 - (-xi * w * t).exp() * ((wd * t).cos() + r * (wd * t).sin()));
        worst[0] = worst[0].max((s.w - exact).abs() / (q / (w * w)));
    }
    // ramp response, undamped: w = (a/ω²)(t − sin ωt/ω)
    let slope = 3.0;
    let ramp: Vec<f64> = (0..=5000).map(|i| slope * i as f64 * dt).collect();
    let out = integrate(w, 0.0, dt, &ramp).unwrap();
    for (i, s) in out.iter().enumerate().skip(1) {
        let t = i as f64 * dt;
        let exact = slope / (w * w) * (t - (w * t).sin() / w);
        worst[1] = worst[1].max(rel(s.w, exact));
    }
    // damped free vibration
    let c = StepCoefficients::new(w, xi, dt).unwrap();
    let out = integrate_with(
        &c,
        ModalState::with_rates(1.0, 0.0, 0.0, w, xi),
        &vec![0.0; 5001],
    );
    for (i, s) in out.iter().enumerate() {
        let t = i as f64 * dt;
        let exact = (-xi * w * t).exp() * ((wd * t).cos() + r * (wd * t).sin());
        worst[2] = worst[2].max((s.w - exact).abs());
    }
    // undamped energy over 10^4 steps
    let c = StepCoefficients::new(w, 0.0, dt).unwrap();
    let out = integrate_with(
        &c,
        ModalState::with_rates(0.01, 0.3, 0.0, w, 0.0),
        &vec![0.0; 10_001],
    );
    let energy = |s: &ModalState| s.w_dot * s.w_dot + w * w * s.w * s.w;
    let e0 = energy(&out[0]);
    worst[3] = out.iter().map(|s| rel(energy(s), e0)).fold(0.0, f64::max);
    // refinement of piecewise-linear forcing
    let coarse: Vec<f64> = (0..=2000).map(|i| ((i * 7919) % 13) as f64 - 6.0).collect();
    let mut fine = Vec::new();
    for p in coarse.windows(2) {
        fine.push(p[0]);
        fine.push(0.5 * (p[0] + p[1]));
    }
    fine.push(*coarse.last().unwrap());
    let a = integrate(w, xi, dt, &coarse).unwrap();
    let b = integrate(w, xi, dt / 2.0, &fine).unwrap();
    let scale = a.iter().map(|s| s.w.abs()).fold(0.0, f64::max);
    worst[4] = a
        .iter()
        .enumerate()
        .map(|(i, s)| (s.w - b[2 * i].w).abs() / scale)
        .fold(0.0, f64::max);
    let pass = worst[0] < 1e-10
        && worst[1] < 1e-10
        && worst[2] < 1e-10
        && worst[3] < 1e-10
        && worst[4] < 1e-12;
    Outcome {
        pass,
        detail: format!(
            "step {:.1e}, ramp {:.1e}, free {:.1e}, energy {:.1e}, refinement {:.1e}",
            worst[0], worst[1], worst[2], worst[3], worst[4]
        ),
    }
}

fn orthogonality() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, deck) in [
        ("ex1", presets::example_1().deck),
        ("ex2", presets::example_2().deck),
    ] {
        for model in [Model::Analytical, Model::Simplified] {
            let modes = find_modes(&deck, model, 5).unwrap();
            let sep = orthogonality_residual(&modes, &deck);
            let comb = coupled_orthogonality_residual(&modes, &deck);
            pass &= sep < 1e-6;
            parts.push(format!(
                "{name} {model:?} separate {sep:.1e} combined {comb:.1e}"
            ));
        }
    }
    Outcome {
        pass,
        detail: parts.join("; "),
    }
}

fn static_oracle() -> Outcome {
    let cfg = presets::example_1();
    let deck = cfg.deck.with_skew(0.0);
    let ei = deck.derive_constants().unwrap().flexural_rigidity;
    let p = 170e3;
    let target = p * deck.span_length.powi(3) / (48.0 * ei);
    let convoy = Train::single(p)
        .unwrap()
        .at_speed(kmh_to_ms(5.0), 0.0)
        .unwrap();
    let mut parts = Vec::new();
    let mut pass = true;
    for model in [Model::Analytical, Model::Simplified] {
        let h = Analysis::new(&deck, model, &cfg.run)
            .unwrap()
            .run(&convoy)
            .unwrap();
        let e = rel(h.max_abs_u(), target);
        pass &= e <= 0.015;
        parts.push(format!(
            "{model:?} {:.5e} m ({:.2}%)",
            h.max_abs_u(),
            100.0 * e
        ));
    }
    Outcome {
        pass,
        detail: format!("PL^3/48EI = {target:.5e} m; {}", parts.join("; ")),
    }
}

fn limits() -> Outcome {
    let mut worst: f64 = 0.0;
    for deck in [presets::example_1().deck, presets::example_2().deck] {
        let d = deck.with_skew(0.0);
        let c = d.derive_constants().unwrap();
        let l = d.span_length;
        let mut expected: Vec<f64> = (1..=10)
            .map(|n| (n as f64 * PI / l).powi(2) * (c.flexural_rigidity / d.mass_per_length).sqrt())
            .chain((1..=10).map(|n| {
                n as f64 * PI / l
                    * (c.torsional_rigidity / (d.mass_per_length * d.gyration_radius.powi(2)))
                        .sqrt()
            }))
            .collect();
        expected.sort_by(f64::total_cmp);
        let modes = EigenProblem::new(&d, Model::Analytical)
            .unwrap()
            .with_selection(ModeSelection::All)
            .solve(6)
            .unwrap();
        for (m, w) in modes.iter().zip(&expected) {
            worst = worst.max(rel(m.omega, *w));
        }
    }
    let deck = presets::example_1().deck;
    let ei = deck.derive_constants().unwrap().flexural_rigidity;
    let clamped = EigenProblem::new(&deck, Model::Simplified)
        .unwrap()
        .with_spring(SpringBoundary {
            k_theta: 1e8 * ei / deck.span_length,
        })
        .unwrap()
        .solve(1)
        .unwrap();
    let bl = clamped[0].beta * deck.span_length;
    let f_clamped = (4.73004 / deck.span_length).powi(2) * (ei / deck.mass_per_length).sqrt() / TAU;
    let e_clamped = rel(clamped[0].frequency_hz(), f_clamped);
    Outcome {
        pass: worst <= 1e-9 && e_clamped <= 1e-3,
        detail: format!(
            "pinned/torsion max rel err {worst:.1e}; clamped beta L = {bl:.5}, f1 err {:.3}%",
            100.0 * e_clamped
        ),
    }
}

fn trends() -> Outcome {
    let cfg = presets::example_2();
    let train = presets::hslm_a1();
    // resonance peaks at 1% damping are a few km/h wide; a 1 km/h grid resolves them
    let range = (kmh_to_ms(100.0), kmh_to_ms(300.0), kmh_to_ms(1.0));
    let coarse = (kmh_to_ms(100.0), kmh_to_ms(300.0), kmh_to_ms(5.0));
    let settings: RunSettings = cfg.run;
    let mut parts = Vec::new();

    let skew = SweepSpec::new(
        Parameter::SkewAngle,
        (0..=8).map(|i| 5.0 * i as f64).collect(),
        cfg.deck,
        train.clone(),
        range,
        settings,
    );
    let pts = sweep_skew(&skew).unwrap();
    let f1_ok = pts.windows(2).all(|w| w[1].f1_hz >= w[0].f1_hz);
    let u_ok = pts[8].max_u < pts[0].max_u;
    parts.push(format!(
        "f1 {:.3}..{:.3} Hz nondecreasing={f1_ok}; max u 0deg {:.4e} 40deg {:.4e}",
        pts[0].f1_hz, pts[8].f1_hz, pts[0].max_u, pts[8].max_u
    ));

    let ratio = SweepSpec::new(
        Parameter::StiffnessRatio,
        vec![0.5, 0.75, 1.0, 1.25, 1.5],
        cfg.deck.with_skew(10f64.to_radians()),
        train.clone(),
        range,
        settings,
    );
    let pts = sweep_stiffness(&ratio).unwrap();
    let amax = pts.iter().map(|p| p.max_a).fold(0.0, f64::max);
    let amin = pts.iter().map(|p| p.max_a).fold(f64::INFINITY, f64::min);
    let spread = (amax - amin) / amax;
    let a_ok = spread < 0.05;
    let coarse_pts = sweep_stiffness(&SweepSpec {
        speed_range: coarse,
        ..ratio
    })
    .unwrap();
    let cmax = coarse_pts.iter().map(|p| p.max_a).fold(0.0, f64::max);
    let cmin = coarse_pts
        .iter()
        .map(|p| p.max_a)
        .fold(f64::INFINITY, f64::min);
    parts.push(format!(
        "accel spread {:.2}% (5 km/h grid: {:.2}%)",
        100.0 * spread,
        100.0 * (cmax - cmin) / cmax
    ));

    let span = SweepSpec::new(
        Parameter::SpanLength,
        vec![],
        cfg.deck,
        train,
        range,
        settings,
    );
    let angles: Vec<f64> = (0..=8).map(|i| 5.0 * i as f64).collect();
    let rows = sweep_span(&span, &presets::span_fixtures(), &angles, 18.0).unwrap();
    let df_ok = rows.windows(2).all(|w| w[1].delta_f1 < w[0].delta_f1);
    let daf_ok = rows.windows(2).all(|w| w[1].daf <= w[0].daf);
    parts.push(format!(
        "delta f1 [{}]; DAF [{}]",
        rows.iter()
            .map(|r| format!("{:.3}", r.delta_f1))
            .collect::<Vec<_>>()
            .join(", "),
        rows.iter()
            .map(|r| format!("{:.3}", r.daf))
            .collect::<Vec<_>>()
            .join(", ")
    ));
    Outcome {
        pass: f1_ok && u_ok && a_ok && df_ok && daf_ok,
        detail: parts.join("; "),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("example 1 frequencies", example_1_frequencies),
        ("example 2 frequencies", example_2_frequencies),
        ("resonance speeds", resonance),
        ("envelope peaks", envelope_peaks),
        ("model agreement", model_agreement),
        ("integrator exactness", integrator_suite),
        ("orthogonality", orthogonality),
        ("static oracle", static_oracle),
        ("limit checks", limits),
        ("parametric trends", trends),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!(
            "{} criterion {} ({}): {}",
            if o.pass { "PASS" } else { "FAIL" },
            i + 1,
            name,
            o.detail
        );
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
