use std::f64::consts::PI;

use proptest::prelude::*;

use nullwave::experiment::{self, Scenario, ScenarioConfig};

fn small(scenario: Scenario) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(scenario);
    cfg.grid_n = 32;
    cfg.half_width = 4.0 * PI;
    cfg.data_width = 1.0;
    cfg.t_end = 2.0;
    cfg.report_every = 4;
    cfg
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Accepted configs keep t_end before the data meet their periodic images.
    #[test]
    fn validated_runs_stay_inside_the_horizon(
        half_width in 1.0..100.0f64,
        width in 0.1..10.0f64,
        t_end in 0.1..100.0f64,
    ) {
        let mut cfg = ScenarioConfig::new(Scenario::Linear);
        cfg.half_width = half_width;
        cfg.data_width = width;
        cfg.t_end = t_end;
        if cfg.validate().is_ok() {
            prop_assert!(t_end + 4.0 * width < half_width);
        } else {
            prop_assert!(t_end + 4.0 * width >= half_width);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn runs_are_deterministic_and_end_at_t_end(seed in any::<u64>(), noise in 0.0..0.1f64, proto in any::<bool>()) {
        let mut cfg = small(if proto { Scenario::PrototypeNull } else { Scenario::Linear });
        cfg.seed = seed;
        cfg.noise = noise;
        let a = experiment::run(&cfg).unwrap();
        let b = experiment::run(&cfg).unwrap();
        prop_assert_eq!(&a.log, &b.log);
        prop_assert!(a.summary.completed);
        let last = a.log.last().unwrap().t;
        prop_assert!((last - cfg.t_end).abs() < 1e-12);
        prop_assert!(a.log.iter().all(|r| r.t <= cfg.t_end));
    }
}
