use std::f32::consts::PI;

use entangler::{
    concurrence_general, concurrence_oracle, make_even_cat, make_fock, make_squeezed_vacuum,
    run_analytic, run_exact, weak_split, BeamSplitter32, CoherentParams, ConcurrenceInputs,
    Detector, ProtocolConfig, SqueezeParams, TruncationConfig,
};

fn cfg() -> TruncationConfig {
    // f32 cannot resolve a 1e-12 tail
    TruncationConfig::new(1e-7, 60).unwrap()
}

fn concurrences(c: &ProtocolConfig<f32>) -> (f32, f32) {
    let w1 = weak_split(&c.psi1, &c.bs);
    let w2 = weak_split(&c.psi2, &c.bs);
    let inputs = ConcurrenceInputs::from_weak_splits(&w1, &w2, c.gamma, c.detector).unwrap();
    let general = concurrence_general(&inputs).unwrap();
    let oracle = concurrence_oracle(run_analytic(c).require_state().unwrap()).unwrap();
    (general, oracle)
}

#[test]
fn scenarios_run_in_single_precision() {
    let bs = BeamSplitter32::from_reflectivity(0.05, 0.0).unwrap();
    let inputs = [
        (
            make_fock(1, &cfg()).unwrap(),
            make_fock(1, &cfg()).unwrap(),
            1.0,
        ),
        (
            make_fock(2, &cfg()).unwrap(),
            make_fock(1, &cfg()).unwrap(),
            2.0 * 2f32.sqrt() / 3.0,
        ),
        {
            let cat = make_even_cat(&CoherentParams::real(1.0f32).unwrap(), &cfg()).unwrap();
            (cat.clone(), cat, 1.0)
        },
        {
            let sv =
                make_squeezed_vacuum(&SqueezeParams::new(0.8f32, 0.0).unwrap(), &cfg()).unwrap();
            (sv.clone(), sv, 1.0)
        },
    ];
    for (a, b, want) in inputs {
        for d in [Detector::D1, Detector::D2] {
            let c = ProtocolConfig::new(a.clone(), b.clone(), bs, 1.5 * PI, d).unwrap();
            let (general, oracle) = concurrences(&c);
            assert!((general - want).abs() < 1e-4, "{general} vs {want}");
            assert!((oracle - want).abs() < 1e-3, "{oracle} vs {want}");
            let exact = run_exact(&c);
            assert!(exact.infidelity(&run_analytic(&c)) < 1e-5);
            let p = exact.success_probability;
            assert!(p > 0.0 && p < 0.01, "{p}");
        }
    }
}
