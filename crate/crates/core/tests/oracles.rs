use porocdh::cagniard::{arrival_body, arrival_head};
use porocdh::interface::IncidentKind;
use porocdh::material::reference_layers;
use porocdh::source::synthesize;
use porocdh::validation::{fermat_oracle, green2d_oracle};
use porocdh::{
    LayerDerived, Medium, Receiver, SourceMix, SourceWavelet, TimeGrid, Trace, WavePhase,
};

fn medium() -> Medium<f64> {
    let (top, bottom) = reference_layers::<f64>();
    Medium::new(
        LayerDerived::from_material(&top).unwrap(),
        LayerDerived::from_material(&bottom).unwrap(),
        500.0,
    )
    .unwrap()
}

#[test]
fn incident_kernel_matches_line_source_oracle() {
    let m = medium();
    for (f_u, f_w, f_p) in [(-1e10, -1e10, 0.0), (0.0, 0.0, 1.0)] {
        let mix = SourceMix::new(f_u, f_w, f_p, &m.top).unwrap();
        for (x, y) in [
            (400.0, 533.0),
            (-250.0, 900.0),
            (0.0, 100.0),
            (1200.0, 20.0),
        ] {
            let rec = Receiver::new(x, y).unwrap();
            for kind in [IncidentKind::Pf, IncidentKind::Ps] {
                let v = kind.mode().velocity(&m.top);
                let amp = m.top.p[0][kind.column()] * mix.amplitude(kind);
                let t0 = f64::hypot(x, y - 500.0) / v;
                for k in 0..100 {
                    let t = t0 * (1.25 + 3.75 * k as f64 / 99.0);
                    let got = m.incident_kernel(kind, &rec, &mix, t);
                    let want = green2d_oracle(v, amp, (x, y), 500.0, t);
                    let scale = want[0].hypot(want[1]);
                    let err = (got[0] - want[0]).hypot(got[1] - want[1]);
                    assert!(
                        err <= 1e-4 * scale,
                        "{kind:?} ({x}, {y}) t = {t}: {got:?} vs {want:?}"
                    );
                }
            }
        }
    }
}

#[test]
fn manifest_arrivals_match_fermat_oracle() {
    let m = medium();
    for (x, y) in [
        (400.0, 533.0),
        (400.0, -533.0),
        (-1500.0, 300.0),
        (1500.0, -300.0),
    ] {
        let rec = Receiver::new(x, y).unwrap();
        for phase in WavePhase::ALL
            .into_iter()
            .filter(|p| !p.is_incident() && p.applies_to(&rec))
        {
            let path = m.path(phase, &rec).unwrap();
            let a = m.arrival(phase, &rec);
            let oracle = fermat_oracle(&path);
            assert!((a.t0 - oracle).abs() <= 1e-8 * oracle, "{phase} ({x}, {y})");
            assert_eq!(a.t0, arrival_body(&path));
            if let Some(t_h) = a.t_h {
                assert!(t_h <= a.t0);
                assert_eq!(Some(t_h), arrival_head(&path));
            }
        }
    }
}

fn far_offset(base_dt: f64, samples: usize, x: f64, y: f64) -> Trace<f64> {
    let m = medium();
    let mix = SourceMix::new(-1e10, -1e10, 0.0, &m.top).unwrap();
    let rec = Receiver::new(x, y).unwrap();
    let wavelet = SourceWavelet::gauss5(15.0).unwrap();
    let grid = TimeGrid::new(0.0, 1.4, base_dt).unwrap();
    synthesize(&m, &mix, &rec, &wavelet, &grid, samples).unwrap()
}

#[test]
fn head_waves_start_at_their_arrival_time() {
    let dt = 1.0 / 600.0;
    for (x, y) in [(1500.0, 300.0), (-1500.0, -300.0)] {
        let trace = far_offset(dt, 2000, x, y);
        let mut heads = 0;
        for (phase, a) in &trace.arrivals {
            let ch = trace.channel(*phase);
            let first = ch.iter().position(|v| v[0] != 0.0 || v[1] != 0.0);
            let onset = a.onset();
            if !a.applies || onset > 1.4 {
                continue;
            }
            if a.t_h.is_some() {
                heads += 1;
            }
            let first = trace.times[first.expect("a non-empty channel")];
            assert!(
                first > onset && first <= onset + dt,
                "{phase}: first {first}, onset {onset}"
            );
            let peak = ch.iter().map(|v| v[0].hypot(v[1])).fold(0.0, f64::max);
            let k = ch
                .iter()
                .position(|v| v[0].hypot(v[1]) > 1e-6 * peak)
                .unwrap();
            // Head waves grow from zero slowly, so the threshold crossing lags the arrival a little.
            let lag = if a.t_h.is_some() { 3.0 } else { 1.0 };
            assert!(
                trace.times[k] <= onset + lag * dt,
                "{phase}: threshold at {}, onset {onset}",
                trace.times[k]
            );
        }
        assert!(
            heads >= 2,
            "expected head waves at ({x}, {y}), found {heads}"
        );
    }
}

fn max_norm_drift(coarse: &[[f64; 2]], fine: &[[f64; 2]]) -> (f64, f64) {
    let peak = coarse
        .iter()
        .map(|v| v[0].abs().max(v[1].abs()))
        .fold(0.0, f64::max);
    let err = coarse
        .iter()
        .enumerate()
        .map(|(k, v)| {
            (v[0] - fine[2 * k][0])
                .abs()
                .max((v[1] - fine[2 * k][1]).abs())
        })
        .fold(0.0, f64::max);
    (err, peak)
}

#[test]
fn far_offset_traces_are_stable_under_refinement() {
    let dt = 1.0 / 600.0;
    let coarse = far_offset(dt, 2000, 1500.0, 300.0);
    let fine = far_offset(dt / 2.0, 4000, 1500.0, 300.0);
    for (phase, ch) in &coarse.channels {
        let (err, peak) = max_norm_drift(ch, fine.channel(*phase));
        assert!(err <= 1e-2 * peak, "{phase}: {err} vs peak {peak}");
    }
    let (err, peak) = max_norm_drift(&coarse.total, &fine.total);
    assert!(err <= 1e-2 * peak, "total: {err} vs peak {peak}");
}
