mod common;

use proptest::prelude::*;

use terminus::numeric::{int, pow10, pow2, ratio, RatInterval};
use terminus::quadrature::{
    gregory_step, pi_reference, rate_estimate, terminate_numeric, Preset, QuadratureState, Rate,
};
use terminus::Rational;

use common::newton_sqrt_bracket;

fn bracket(x: i64) -> RatInterval {
    let (lo, hi) = newton_sqrt_bracket(&int(x), &pow2(-160));
    RatInterval::new(lo, hi).unwrap()
}

fn run(start: QuadratureState, steps: usize, p: u32) -> Vec<QuadratureState> {
    let mut history = vec![start];
    for _ in 0..steps {
        let next = gregory_step(history.last().unwrap(), p).unwrap();
        history.push(next);
    }
    history
}

fn near(enclosure: &RatInterval, oracle: &RatInterval, tol: &Rational) -> bool {
    enclosure.intersect(oracle).is_some() && enclosure.max_distance_to(&oracle.midpoint()) < *tol
}

#[test]
fn octagon_from_squares() {
    // inscribed k-gon (k/2)·sin(2π/k) and circumscribed k·tan(π/k) at k = 8
    let root2 = bracket(2);
    let inscribed = &RatInterval::point(int(2)) * &root2;
    let circumscribed = &RatInterval::point(int(8)) * &(&root2 - &RatInterval::point(int(1)));
    let s = gregory_step(&QuadratureState::new(RatInterval::point(int(2)), RatInterval::point(int(4))), 64).unwrap();
    assert!(near(&s.inscribed, &inscribed, &pow10(-12)), "{}", s.inscribed);
    assert!(near(&s.circumscribed, &circumscribed, &pow10(-12)), "{}", s.circumscribed);
    assert!(s.inscribed.lo() > &ratio(28284271, 10_000_000));
    assert!(s.circumscribed.hi() < &ratio(33137086, 10_000_000));
}

#[test]
fn dodecagon_from_hexagons() {
    let (i0, c0) = Preset::Hexagons.start(96);
    let root3 = bracket(3);
    let half = RatInterval::point(ratio(3, 2));
    assert!(i0.intersect(&(&half * &root3)).is_some());
    assert!(c0.intersect(&(&RatInterval::point(int(2)) * &root3)).is_some());
    let s = gregory_step(&QuadratureState::new(i0, c0), 96).unwrap();
    let twelve_gon = &RatInterval::point(int(12)) * &(&RatInterval::point(int(2)) - &root3);
    assert!(s.inscribed.contains(&int(3)));
    assert!(near(&s.inscribed, &RatInterval::point(int(3)), &pow10(-20)));
    assert!(near(&s.circumscribed, &twelve_gon, &pow10(-20)), "{}", s.circumscribed);
}

#[test]
fn rates_approach_one_quarter() {
    for preset in [Preset::Squares, Preset::Hexagons] {
        let (i0, c0) = preset.start(256);
        let history = run(QuadratureState::new(i0, c0), 32, 256);
        let rates = rate_estimate(&history).unwrap();
        for rate in &rates[10..=30] {
            match rate {
                Rate::Ratio { n, ratio: r } => {
                    assert!(r >= &ratio(24, 100) && r <= &ratio(26, 100), "{} n={n}: {r}", preset.name());
                }
                Rate::Degenerate { n } => panic!("degenerate at {n}"),
            }
        }
    }
}

#[test]
fn pi_enclosures_meet() {
    let (i0, c0) = Preset::Squares.start(64);
    for d in 1..=30i64 {
        let tol = pow10(-d);
        let p = terminus::quadrature::default_precision(&i0, &c0, &tol);
        let t = terminate_numeric(&i0, &c0, &tol, 500, p).unwrap();
        assert!(t.enclosure.width() < tol);
        assert!(t.enclosure.intersect(&pi_reference(d as u32)).is_some(), "d = {d}");
    }
}

#[test]
fn pi_reference_nests() {
    let mut outer = pi_reference(1);
    for d in [2u32, 5, 10, 20, 50, 100, 300] {
        let inner = pi_reference(d);
        assert!(inner.width() < pow10(-(d as i64)));
        assert!(inner.is_subset_of(&outer), "d = {d}");
        outer = inner;
    }
}

#[test]
fn pi_reference_at_full_range() {
    let pi = pi_reference(1000);
    assert!(pi.width() < pow10(-1000));
    assert!(pi.is_subset_of(&pi_reference(999)));
}

#[test]
fn termination_history_widths_decrease() {
    let t = terminate_numeric(&RatInterval::point(int(2)), &RatInterval::point(int(4)), &pow10(-20), 200, 120).unwrap();
    assert!(t.history.windows(2).all(|w| w[1].width() < w[0].width()));
    assert!(t.history.iter().enumerate().all(|(k, s)| s.n == k as u64));
    assert_eq!(t.enclosure, t.history.last().unwrap().hull());
}

fn start() -> impl Strategy<Value = (Rational, Rational)> {
    (1i64..=10_000, 1i64..=10_000, 1i64..=100).prop_filter_map("ordered", |(a, b, d)| {
        let (lo, hi) = (a.min(b), a.max(b));
        (lo < hi).then(|| (ratio(lo, d * 100), ratio(hi, d * 100)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn strict_interleaving((i0, c0) in start()) {
        let history = run(QuadratureState::new(RatInterval::point(i0), RatInterval::point(c0)), 60, 320);
        for w in history.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            prop_assert!(a.inscribed.midpoint() < b.inscribed.midpoint(), "n={}", a.n);
            prop_assert!(b.inscribed.midpoint() < b.circumscribed.midpoint(), "n={}", a.n);
            prop_assert!(b.circumscribed.midpoint() < a.circumscribed.midpoint(), "n={}", a.n);
            prop_assert!(b.inscribed.lo() >= a.inscribed.lo());
            prop_assert!(b.circumscribed.hi() <= a.circumscribed.hi());
        }
    }

    #[test]
    fn mean_identities((i0, c0) in start(), steps in 0usize..12) {
        let history = run(QuadratureState::new(RatInterval::point(i0), RatInterval::point(c0)), steps + 1, 128);
        let (s, t) = (&history[steps], &history[steps + 1]);
        // I'² = C·I
        let square = t.inscribed.powi(2).unwrap();
        prop_assert!(square.intersect(&(&s.circumscribed * &s.inscribed)).is_some());
        // 2/C' = 1/C + 1/I'
        let lhs = RatInterval::point(int(2)).checked_div(&t.circumscribed).unwrap();
        let rhs = &s.circumscribed.recip().unwrap() + &t.inscribed.recip().unwrap();
        prop_assert!(lhs.intersect(&rhs).is_some());
    }
}
