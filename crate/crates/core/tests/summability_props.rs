use symdunkl::harmonics::{random_sphere_points, repro_kernel_axis};
use symdunkl::orthopoly::{cesaro_kernel_endpoint, jacobi_values_into};
use symdunkl::simplex::SimplexRule;
use symdunkl::summability::bounds::{estimate_sweep, kernel_bound_sweep, knd_positivity_check};
use symdunkl::summability::sweep::fit_records;
use symdunkl::summability::{cesaro_kernel_axis, lebesgue_sweep, Growth, SweepSpec};
use symdunkl::{CesaroOrder, JacobiParams, KappaParams};

#[test]
fn partial_sums_are_sums_of_projection_kernels() {
    for (kn, kd) in [(1i64, 2i64), (1, 1)] {
        let p = KappaParams::from_ratio(3, kn, kd).unwrap();
        let rule = SimplexRule::build(3, p.kappa(), 30).unwrap();
        let zero = CesaroOrder::new(0.0).unwrap();
        for x in random_sphere_points(3, 5, 9) {
            for n in [0usize, 3, 10, 25] {
                let direct = cesaro_kernel_axis(n, zero, 2, &x, &p, &rule).unwrap();
                let sum: f64 = (0..=n).map(|m| repro_kernel_axis(m, 2, &x, &p, &rule).unwrap()).sum();
                assert!(
                    (direct - sum).abs() < 1e-7 * (1.0 + sum.abs()),
                    "kappa={kn}/{kd} n={n}: {direct} vs {sum}"
                );
            }
        }
    }
}

/// k_n^δ(t, 1) for Legendre weight against a direct sum with textbook
/// constants P_k(1) = 1, ∫P_k² dt / 2 = 1/(2k+1).
#[test]
fn endpoint_kernel_matches_legendre_sum() {
    let jp = JacobiParams::new(0.0, 0.0).unwrap();
    for &(n, dl) in &[(0usize, 0.0), (2, 0.0), (7, 1.5), (30, 2.0)] {
        let delta = CesaroOrder::new(dl).unwrap();
        for &t in &[-1.0, -0.3, 0.2, 0.95, 1.0] {
            let mut p = vec![0.0; n + 1];
            jacobi_values_into(0.0, 0.0, t, &mut p);
            let binom = |m: usize| (1..=m).map(|j| (j as f64 + dl) / j as f64).product::<f64>();
            let want: f64 = (0..=n)
                .map(|k| binom(n - k) / binom(n) * (2 * k + 1) as f64 * p[k])
                .sum();
            let got = cesaro_kernel_endpoint(n, jp, delta, t).unwrap();
            assert!((got - want).abs() < 1e-12 * (1.0 + want.abs()), "n={n} t={t}");
        }
    }
}

#[test]
fn larger_cesaro_order_never_raises_the_lebesgue_constants() {
    let p = KappaParams::from_ratio(3, 1, 1).unwrap();
    let deltas = vec![1.0, 1.5, 2.0, 3.0, 4.5];
    let spec = SweepSpec::new(p, 1, deltas.clone(), 40);
    let rows = lebesgue_sweep(&spec, &mut |_| Ok(()), None).unwrap();
    let sup = |d: f64| {
        rows.iter()
            .filter(|r| r.delta == d)
            .map(|r| r.value + r.err_est)
            .fold(0.0, f64::max)
    };
    for w in deltas.windows(2) {
        let (lo, hi) = (sup(w[0]), sup(w[1]));
        assert!(hi <= lo, "sup I_n at delta={} is {hi}, at delta={} is {lo}", w[1], w[0]);
    }
}

#[test]
fn far_above_the_critical_index_the_constants_are_bounded() {
    let p = KappaParams::from_ratio(3, 1, 1).unwrap();
    let lam = p.lambda();
    let deltas = vec![lam + 1.0, lam + 2.0];
    let spec = SweepSpec::new(p, 1, deltas.clone(), 64);
    let rows = lebesgue_sweep(&spec, &mut |_| Ok(()), None).unwrap();
    for f in fit_records(&deltas, &rows).unwrap() {
        assert_eq!(f.class, Growth::Bounded, "delta={}: {f:?}", f.delta);
    }
}

#[test]
fn knd_bound_for_legendre_weight() {
    let r = knd_positivity_check(
        100,
        JacobiParams::new(0.0, 0.0).unwrap(),
        CesaroOrder::new(2.0).unwrap(),
        1000,
    )
    .unwrap();
    assert!(r.min_value >= -1e-12, "{}", r.min_value);
    assert!(r.fit.stable);
}

#[test]
fn estimate_and_kernel_bound_constants_are_stable() {
    let p = KappaParams::from_ratio(3, 1, 1).unwrap();
    let xs = random_sphere_points(3, 50, 5);
    let est = estimate_sweep(&[16, 32, 64, 128], &p, 1.5, 1.5, 1, &xs).unwrap();
    assert!(est.stable, "{est:?}");
    let ker = kernel_bound_sweep(&[16, 32, 64], CesaroOrder::new(1.6).unwrap(), 1, &p, &xs).unwrap();
    assert!(
        ker.stable && ker.ratio_series.iter().all(|r| r.ratio.is_finite()),
        "{ker:?}"
    );
}
