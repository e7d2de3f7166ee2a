use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use sneakpath_core::{
    across_array_rate, cq, optimize_q, single_array_rate, spectrum, tin_rate, tin_sp_probability,
    McEstimate, OptimizeOptions, QuadOptions, ResistiveParams, SfDistribution, TinMode,
    TinSingleVariant,
};

fn quad() -> QuadOptions {
    QuadOptions::default()
}

fn reference_dist() -> SfDistribution {
    SfDistribution::truncated_binomial(65536, 1e-4, 8).unwrap()
}

#[test]
fn quadrature_agrees_with_sampling() {
    let (q, gamma) = (0.3, 2.0);
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let ln = |y: f64, m: f64| -(y - m) * (y - m) / 2.0;
    let samples: Vec<f64> = (0..1_000_000)
        .map(|_| {
            let one = rng.random_bool(q);
            let z: f64 = rng.sample(StandardNormal);
            let y = if one { -gamma + z } else { gamma + z };
            let l0 = ln(y, gamma);
            let l1 = ln(y, -gamma);
            let own = if one { l1 } else { l0 };
            let top = l0.max(l1);
            let mix = top + ((1.0 - q) * (l0 - top).exp() + q * (l1 - top).exp()).ln();
            (own - mix) / std::f64::consts::LN_2
        })
        .collect();
    let est = McEstimate::from_samples(&samples, cq(q, gamma, &quad()).unwrap());
    assert!(est.within_three_sigma(), "{est:?}");
}

#[test]
fn property_grid() {
    let dist = reference_dist();
    for &q in &[0.05, 0.2, 0.5, 0.7, 0.95] {
        for &sigma in &[10.0, 50.0, 100.0, 200.0, 400.0] {
            let p = ResistiveParams::reference(sigma).unwrap();
            let single = single_array_rate(q, &p, dist.kmax(), &quad()).unwrap();
            let across = across_array_rate(q, &p, &dist, &quad()).unwrap();
            assert!(across >= single, "q={q} sigma={sigma}");
            if q > 0.1 && q < 0.9 {
                assert!(across > single, "q={q} sigma={sigma}");
            }

            let atoms = spectrum(q, &p, &dist, &quad()).unwrap();
            let mean: f64 = atoms.iter().map(|a| a.weight * a.location).sum();
            assert!((mean - across).abs() < 1e-9);
            let lowest = atoms
                .iter()
                .map(|a| a.location)
                .fold(f64::INFINITY, f64::min);
            assert!((lowest - single).abs() < 1e-9);

            for c in [0.5, 3.0] {
                let scaled =
                    ResistiveParams::new(1000.0 * c, 100.0 * c, 250.0 * c, sigma * c).unwrap();
                let s2 = single_array_rate(q, &scaled, dist.kmax(), &quad()).unwrap();
                let a2 = across_array_rate(q, &scaled, &dist, &quad()).unwrap();
                assert!((s2 - single).abs() < 1e-12 && (a2 - across).abs() < 1e-12);
            }

            let g = p.gamma();
            let c = cq(q, g, &quad()).unwrap();
            assert!((c - cq(1.0 - q, g, &quad()).unwrap()).abs() < 1e-9);
            assert!(cq(q, 1.1 * g, &quad()).unwrap() >= c);
        }
    }
}

#[test]
fn reference_rates_at_sigma_100() {
    let p = ResistiveParams::reference(100.0).unwrap();
    let dist = reference_dist();
    let single = single_array_rate(0.5, &p, 8, &quad()).unwrap();
    let across = across_array_rate(0.5, &p, &dist, &quad()).unwrap();
    assert!((single - 0.2448).abs() < 3e-3, "{single}");
    assert!((across - 0.5723).abs() < 3e-3, "{across}");

    let opts = OptimizeOptions::default();
    let s = optimize_q(|q| single_array_rate(q, &p, 8, &quad()), &opts).unwrap();
    let a = optimize_q(|q| across_array_rate(q, &p, &dist, &quad()), &opts).unwrap();
    assert!(
        (s.rate_star - 0.55).abs() < 0.01 && (s.q_star - 0.20).abs() < 0.02,
        "{s:?}"
    );
    assert!(
        (a.rate_star - 0.7778).abs() < 3e-3 && (a.q_star - 0.31).abs() < 0.02,
        "{a:?}"
    );
}

#[test]
fn tin_rates_at_sigma_100() {
    let p = ResistiveParams::reference(100.0).unwrap();
    let dist = reference_dist();
    let opts = OptimizeOptions::default();
    let across = optimize_q(
        |q| {
            tin_rate(
                q,
                &p,
                tin_sp_probability(q, TinMode::Across(&dist)),
                &quad(),
            )
        },
        &opts,
    )
    .unwrap();
    let single = optimize_q(
        |q| {
            let mode = TinMode::Single {
                kmax: 8,
                variant: TinSingleVariant::WorstK,
            };
            tin_rate(q, &p, tin_sp_probability(q, mode), &quad())
        },
        &opts,
    )
    .unwrap();
    assert!((across.rate_star - 0.6189).abs() < 0.01, "{across:?}");
    assert!((single.rate_star - 0.37).abs() < 0.02, "{single:?}");

    let opt_across = optimize_q(|q| across_array_rate(q, &p, &dist, &quad()), &opts).unwrap();
    let opt_single = optimize_q(|q| single_array_rate(q, &p, 8, &quad()), &opts).unwrap();
    assert!(across.rate_star <= opt_across.rate_star);
    assert!(single.rate_star <= opt_single.rate_star);
}

#[test]
fn low_noise_closes_the_gaps() {
    let p = ResistiveParams::reference(5.0).unwrap();
    let dist = reference_dist();
    let single = single_array_rate(0.5, &p, 8, &quad()).unwrap();
    let across = across_array_rate(0.5, &p, &dist, &quad()).unwrap();
    let tin = tin_rate(
        0.5,
        &p,
        tin_sp_probability(0.5, TinMode::Across(&dist)),
        &quad(),
    )
    .unwrap();
    for r in [single, across, tin] {
        assert!(r > 0.999, "{r}");
    }
}
