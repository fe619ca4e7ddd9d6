use kfp_lab::scenario::{DataSpec, Diffusion, DomainSpec, Format, Mode, Scenario, VolumeMethod};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![-1e6..1e6f64, Just(0.0), Just(-0.25), (-1e-12..1e-12f64)]
}

fn data() -> impl Strategy<Value = DataSpec> {
    prop_oneof![
        Just(DataSpec::Zero),
        finite().prop_map(DataSpec::Constant),
        (finite(), finite(), finite()).prop_map(|(c, amp, freq)| DataSpec::Wave { c, amp, freq }),
        (finite(), finite()).prop_map(|(alpha, v0)| DataSpec::Holder { alpha, v0 }),
        finite().prop_map(|variance| DataSpec::Gaussian { variance }),
    ]
}

fn domain() -> impl Strategy<Value = DomainSpec> {
    prop_oneof![
        Just(DomainSpec::Whole),
        (prop::collection::vec(finite(), 1..=2), finite()).prop_map(|(normal, offset)| DomainSpec::HalfSpace { normal, offset }),
        (1usize..=2).prop_flat_map(|d| prop::collection::vec((prop::collection::vec(finite(), d), finite()), 1..4))
            .prop_map(|faces| DomainSpec::Polytope { faces }),
        (finite(), finite(), any::<bool>()).prop_map(|(curvature, radius, convex)| DomainSpec::Chart { curvature, radius, convex }),
    ]
}

fn point() -> impl Strategy<Value = Vec<f64>> {
    prop_oneof![prop::collection::vec(finite(), 3), prop::collection::vec(finite(), 5)]
}

fn scenario() -> impl Strategy<Value = Scenario> {
    (
        ("[a-z][a-z0-9_-]{0,12}", prop::sample::select(Mode::ALL.to_vec()), domain()),
        (
            prop_oneof![
                finite().prop_map(Diffusion::Constant),
                (any::<u64>(), finite(), finite(), [finite(), finite(), finite()])
                    .prop_map(|(seed, lambda, big_lambda, cells)| Diffusion::Rough { seed, lambda, big_lambda, cells }),
            ],
            finite(),
            finite(),
        ),
        (data(), data(), data()),
        (finite(), finite(), 0usize..10_000, any::<u64>(), prop::collection::vec(point(), 0..4), point()),
        (prop::sample::select(vec![Format::Csv, Format::Json, Format::Bin]), any::<bool>()),
    )
        .prop_map(|((name, mode, domain), (diffusion, drift, source), (a, b, c), (x, dt, n, seed, centers, pa), (format, mc))| {
            let mut s = Scenario::default();
            s.name = name;
            s.mode = mode;
            s.domain = domain;
            s.coefficients.diffusion = diffusion;
            s.coefficients.drift = drift;
            s.coefficients.source = source;
            s.data.influx_left = a;
            s.data.influx_right = b;
            s.data.initial = c;
            s.grid.x_left = x;
            s.grid.dt = dt;
            s.grid.nx = n;
            s.diagnostics.seed = seed;
            s.diagnostics.centers = centers;
            s.diagnostics.point_a = pa;
            s.diagnostics.method = if mc { VolumeMethod::MonteCarlo } else { VolumeMethod::Exact };
            s.output.format = format;
            s
        })
}

proptest! {
    #[test]
    fn serialization_round_trips(s in scenario()) {
        let text = s.to_text();
        prop_assert_eq!(Scenario::parse(&text).unwrap(), s);
    }

    #[test]
    fn unknown_keys_are_rejected_with_their_line(line in 0usize..6, key in "[a-z]{3,8}_x") {
        let mut lines: Vec<String> = kfp_lab::BENCHMARK.lines().map(String::from).collect();
        // insert after the [grid] header
        let at = lines.iter().position(|l| l == "[grid]").unwrap() + 1 + line;
        lines.insert(at, format!("{key} = 1"));
        let e = Scenario::parse(&lines.join("\n")).unwrap_err();
        prop_assert_eq!(e.line, at + 1);
        prop_assert_eq!(e.column, 1);
    }
}

#[test]
fn bundled_benchmark_parses() {
    let s = Scenario::parse(kfp_lab::BENCHMARK).unwrap();
    assert_eq!(s.mode, Mode::VerifyAll);
    assert_eq!(s.grid.nx, 513);
    assert_eq!(Scenario::parse(&s.to_text()).unwrap(), s);
}
