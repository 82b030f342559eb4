//! Property tests for the engine's structural invariants.

use proptest::prelude::*;

use dcm_core::*;

fn date() -> Date {
    Date::new(2021, 7, 15).unwrap()
}

fn hour_set_strategy() -> impl Strategy<Value = Vec<u8>> {
    proptest::collection::btree_set(0u8..24, 1..=6).prop_map(|s| s.into_iter().collect())
}

proptest! {
    #[test]
    fn top_x_is_shift_invariant(
        values in proptest::collection::vec(-1e6f64..1e6, 24),
        x in 1usize..=24,
        shift in -1e5f64..1e5,
    ) {
        let base = top_x_hours(&values, x).unwrap();
        let shifted: Vec<f64> = values.iter().map(|v| v + shift).collect();
        let moved = top_x_hours(&shifted, x).unwrap();
        prop_assert_eq!(base.hours(), moved.hours());
    }

    #[test]
    fn cvr_options_obey_run_and_recovery_rules(
        hours in hour_set_strategy(),
        max_run in 1u8..=4,
        recovery in 1u8..=3,
    ) {
        let spec = CvrSpec::new(0.4, 0.01, max_run, recovery).unwrap();
        let set = TargetHourSet::new(hours.iter().copied()).unwrap();
        let matrix = build_cvr_options(&set, &spec).unwrap();
        prop_assert!(matrix.option_count() <= 1 << set.len());
        prop_assert_eq!(matrix.column(matrix.zero_option()), vec![false; set.len()]);
        for j in 0..matrix.option_count() {
            let col = matrix.column(j);
            // Direct scan of the 24-hour day.
            let mut on = [false; 24];
            for (&h, &bit) in set.hours().iter().zip(&col) {
                on[h as usize] = bit;
            }
            let mut run = 0u32;
            let mut last_run_end: Option<usize> = None;
            for h in 0..24 {
                if on[h] {
                    if run == 0 {
                        if let Some(end) = last_run_end {
                            prop_assert!(h - end >= recovery as usize, "option {} gap", j);
                        }
                    }
                    run += 1;
                    prop_assert!(run <= max_run as u32, "option {} run", j);
                } else {
                    if run > 0 {
                        last_run_end = Some(h);
                    }
                    run = 0;
                }
            }
        }
    }

    #[test]
    fn cvr_reduction_is_homogeneous(load in 0.0f64..1e6, scale in 0.0f64..100.0) {
        let spec = CvrSpec::default();
        let lhs = cvr_reduction(scale * load, true, &spec);
        let rhs = scale * cvr_reduction(load, true, &spec);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
    }

    #[test]
    fn tcl_options_conserve_deferred_energy(
        hours in hour_set_strategy(),
        temps in proptest::collection::vec(10.0f64..45.0, 24),
        kappa in 0.9f64..=1.1,
        full_off in proptest::bool::ANY,
    ) {
        let kind = if full_off { TclGroupKind::FullOff } else { TclGroupKind::Cycling10In30 };
        let limit = if full_off { Some(2) } else { None };
        let spec = TclGroupSpec::new(kind, 30_000, 5.0, 1.0, limit, 18.0, 40.0, kappa).unwrap();
        let set = TargetHourSet::new(hours.iter().copied()).unwrap();
        let temperature = HourlyProfile::single_day(date(), temps).unwrap();
        let options = build_tcl_options(&set, &temperature, &spec).unwrap();
        prop_assert_eq!(options.option_count(), options.reduction.len());
        for (j, profile) in options.reduction.iter().enumerate() {
            let shed = profile.shed_energy_mwh();
            let payback = profile.payback_energy_mwh();
            prop_assert!(
                (shed * kappa - payback).abs() <= 1e-9 * shed.max(1.0),
                "option {}: shed {} payback {}", j, shed, payback
            );
            // Payback stays off deployment hours, except the day-end closure
            // when a run touches hour 23.
            let col = options.deployment.column(j);
            for (&h, &on) in set.hours().iter().zip(&col) {
                if on && h < 23 {
                    prop_assert!(profile.payback_mw()[h as usize] == 0.0, "option {} hour {}", j, h);
                }
            }
        }
    }

    #[test]
    fn gate_is_monotone_in_probability_and_forecast(
        peak in 10.0f64..1e4,
        hist in 10.0f64..1e4,
        p in 0.0f64..=1.0,
        bump_peak in 0.0f64..1e3,
        bump_p in 0.0f64..=0.5,
    ) {
        let cfg = GateConfig::default();
        let mk = |peak: f64, p: f64| {
            let mut forecast = vec![peak / 2.0; 24];
            forecast[17] = peak;
            DayContext {
                date: date(),
                forecast_load: HourlyProfile::single_day(date(), forecast).unwrap(),
                actual_load: HourlyProfile::single_day(date(), vec![0.0; 24]).unwrap(),
                temperature: HourlyProfile::single_day(date(), vec![20.0; 24]).unwrap(),
                peak_day_probability: p.min(1.0),
                peak_hour_probabilities: vec![0.0; 24],
            }
        };
        let mut ledger = MonthLedger::start(date().month_id());
        ledger.historical_peak_mw = hist;
        if gate(&mk(peak, p), &ledger, &cfg) == GateDecision::Run {
            prop_assert_eq!(gate(&mk(peak + bump_peak, p), &ledger, &cfg), GateDecision::Run);
            prop_assert_eq!(gate(&mk(peak, (p + bump_p).min(1.0)), &ledger, &cfg), GateDecision::Run);
        }
    }

    #[test]
    fn optimizer_objective_is_monotone_in_capacity(
        base_power in 1.0f64..20.0,
        growth in 1.0f64..3.0,
        peak in 100.0f64..2000.0,
    ) {
        let mut forecast = vec![peak / 2.0; 24];
        forecast[16] = peak;
        forecast[17] = peak * 0.97;
        let ctx = DayContext {
            date: date(),
            forecast_load: HourlyProfile::single_day(date(), forecast.clone()).unwrap(),
            actual_load: HourlyProfile::single_day(date(), forecast).unwrap(),
            temperature: HourlyProfile::single_day(date(), vec![25.0; 24]).unwrap(),
            peak_day_probability: 1.0,
            peak_hour_probabilities: vec![1.0 / 24.0; 24],
        };
        let hours = TargetHourSet::new([16u8, 17]).unwrap();
        let score = |power: f64, kind: ObjectiveKind| {
            let fleet = ResourceFleet {
                bess: Some(BessSpec::new(power, 2.0 * power, 0.0, 0.95).unwrap()),
                dg: Some(DgSpec::new(power, 0.245, 0.03).unwrap()),
                ..ResourceFleet::empty()
            };
            let cfg = match kind {
                ObjectiveKind::F1ProbabilityWeighted => ObjectiveConfig::f1(),
                ObjectiveKind::F2PeakReduction => ObjectiveConfig::f2(),
            };
            optimize(&ctx, &hours, &fleet, &cfg).unwrap().objective_value
        };
        for kind in [ObjectiveKind::F1ProbabilityWeighted, ObjectiveKind::F2PeakReduction] {
            let small = score(base_power, kind);
            let large = score(base_power * growth, kind);
            prop_assert!(large >= small - 1e-9, "{:?}: {} < {}", kind, large, small);
        }
    }
}
