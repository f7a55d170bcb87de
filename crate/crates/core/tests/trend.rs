use robinlab::bounds::{local_positivity_trend, TrendClass, TrendOptions};
use robinlab::ProfileFunction;

const DELTAS: [f64; 4] = [0.1, 0.05, 0.025, 0.0125];

fn minima(alpha: f64) -> (Vec<f64>, robinlab::bounds::TrendReport) {
    let r = local_positivity_trend(&ProfileFunction::power(alpha), 2.0, 1.0, &DELTAS, &TrendOptions::default()).unwrap();
    assert!(r.error.is_none());
    (r.points.iter().map(|p| p.min_half).collect(), r)
}

#[test]
fn mild_cusp_minima_converge_to_positive_limit() {
    let (v, r) = minima(1.5);
    // tip correction ~ sqrt(delta): each halving shrinks the step by about 1/sqrt(2)
    let steps: Vec<f64> = v.windows(2).map(|w| w[0] - w[1]).collect();
    assert!(steps.iter().all(|&d| d > 0.0), "{v:?}");
    for w in steps.windows(2) {
        let ratio = w[1] / w[0];
        assert!((0.6..0.8).contains(&ratio), "{v:?}");
    }
    let limit = r.extrapolated_limit.unwrap();
    assert!(limit > 0.15, "{limit}");
}

#[test]
fn sharp_cusp_decays() {
    let (v, r) = minima(3.0);
    assert_eq!(r.class, TrendClass::Decaying, "{v:?}");
    assert!(r.extrapolated_limit.unwrap().abs() < 1e-4);
}

#[test]
fn wedge_stabilizes() {
    let (v, r) = minima(1.0);
    assert_eq!(r.class, TrendClass::Stabilizing, "{v:?}");
}
