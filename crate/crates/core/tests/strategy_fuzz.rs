//! Randomised runs of every strategy on the fuzz family.

use scanwatch::corpus::{fuzz_spec, generate, FUZZ_A};
use scanwatch::simulator::{new_world, CostModel};
use scanwatch::strategies::{run_strategy, StrategyContext, STRATEGY_NAMES};
use scanwatch::Coord;

#[test]
fn every_strategy_terminates_with_full_coverage() {
    for seed in 0..12 {
        for (n, d) in FUZZ_A {
            let inst = generate(&fuzz_spec(seed, Coord::frac(n, d))).unwrap();
            let ctx = StrategyContext::measured(&inst.polygon);
            for name in STRATEGY_NAMES {
                let mut w = new_world(inst.polygon.clone(), inst.start.clone(), CostModel::default()).unwrap();
                let r = run_strategy(name, &mut w, &ctx).unwrap_or_else(|e| panic!("{name} seed {seed}: {e}"));
                assert!(r.tour.terminated_ok, "{name} seed {seed}");
                assert_eq!(r.t, &r.length + &Coord::int(r.scans as i64));
                assert!(r.searches.iter().all(|s| s.ok), "{name} seed {seed}");
            }
        }
    }
}

#[test]
fn wide_variant_on_coarse_polygons() {
    for seed in 0..10 {
        let inst = generate(&fuzz_spec(seed, Coord::int(2))).unwrap();
        let ctx = StrategyContext::measured(&inst.polygon);
        assert!(ctx.a > Coord::one());
        let mut w = new_world(inst.polygon.clone(), inst.start.clone(), CostModel::default()).unwrap();
        let r = run_strategy("scansearch", &mut w, &ctx).unwrap();
        assert!(r.tour.terminated_ok);
        assert!(r.max_searches_per_episode() <= 2);
    }
}

#[test]
fn unknown_strategy_is_rejected() {
    let inst = generate(&fuzz_spec(0, Coord::one())).unwrap();
    let mut w = new_world(inst.polygon.clone(), inst.start, CostModel::default()).unwrap();
    assert!(run_strategy("nope", &mut w, &StrategyContext::measured(&inst.polygon)).is_err());
}
