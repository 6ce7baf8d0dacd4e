//! Invariants checked over generated inputs.

mod common;

use proptest::prelude::*;
use scanwatch::bounds::{alternating_choices, static_niche, within_binary_search_bound, NicheParams, Side};
use scanwatch::corpus::{fuzz_spec, generate, Generator, InstanceSpec, StartRule};
use scanwatch::extensions::prune_nonessential;
use scanwatch::geom::Dir;
use scanwatch::simulator::{new_world, replay_cost, CostModel, MoveOutcome, World};
use scanwatch::strategies::{binary_search_steps, offline_oracle, BinarySearchPlan, run_strategy, OracleStatus, StrategyContext, STRATEGY_NAMES};
use scanwatch::Coord;

fn dyadic() -> impl Strategy<Value = Coord> {
    (-4000i64..4000, 0i32..12).prop_map(|(n, k)| Coord::int(n) * Coord::pow2(-k))
}

fn coarse_a() -> impl Strategy<Value = Coord> {
    prop_oneof![Just(Coord::one()), Just(Coord::frac(1, 2)), Just(Coord::frac(1, 4))]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn coord_field_laws(a in dyadic(), b in dyadic(), c in dyadic()) {
        prop_assert_eq!(&(&a + &b) - &b, a.clone());
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(a.half() * Coord::int(2), a.clone());
        prop_assert_eq!(a < b, a.to_f64() < b.to_f64());
        prop_assert_eq!(a.to_string().parse::<Coord>().unwrap(), a);
    }

    #[test]
    fn cost_is_scans_plus_length(seed in 0u64..400, a in coarse_a(), k in 0usize..3) {
        let inst = generate(&fuzz_spec(seed, a)).unwrap();
        let ctx = StrategyContext::measured(&inst.polygon);
        let cm = CostModel::new(Coord::frac(3, 2)).unwrap();
        let mut w = new_world(inst.polygon.clone(), inst.start.clone(), cm.clone()).unwrap();
        let r = run_strategy(STRATEGY_NAMES[k], &mut w, &ctx).unwrap();
        prop_assert_eq!(&r.t, &(&r.length + &(&cm.scan_cost * &Coord::int(r.scans as i64))));
        prop_assert_eq!(replay_cost(w.events(), &cm), r.t.clone());
        prop_assert_eq!(r.tour.path.points.first(), r.tour.path.points.last());
    }

    #[test]
    fn blocked_contacts_lie_on_the_boundary(seed in 0u64..400, dirs in prop::collection::vec(0usize..4, 1..8)) {
        let inst = generate(&fuzz_spec(seed, Coord::frac(1, 2))).unwrap();
        let poly = inst.polygon.clone();
        let mut w = new_world(poly.clone(), inst.start.clone(), CostModel::default()).unwrap();
        for d in dirs {
            let dir = [Dir::North, Dir::East, Dir::South, Dir::West][d];
            let far = dir.step(w.position(), &Coord::int(1000));
            match w.move_to(&[far]).unwrap() {
                MoveOutcome::Blocked { at, .. } => prop_assert!(!poly.edges_at(&at).is_empty()),
                MoveOutcome::Completed => prop_assert!(false, "a 1000-unit move cannot complete"),
            }
            prop_assert!(poly.contains(w.position()));
        }
    }

    #[test]
    fn finished_runs_see_every_lattice_point(seed in 0u64..400) {
        let inst = generate(&fuzz_spec(seed, Coord::one())).unwrap();
        let mut w = new_world(inst.polygon.clone(), inst.start.clone(), CostModel::default()).unwrap();
        let ctx = StrategyContext::measured(&inst.polygon);
        run_strategy("scansearch", &mut w, &ctx).unwrap();
        for q in common::lattice(&inst.polygon, 12) {
            prop_assert!(w.scans().iter().any(|s| s.region.contains(&q)), "{:?} never seen", q);
        }
    }

    #[test]
    fn essential_extensions_have_the_pairwise_structure(seed in 0u64..2000) {
        let spec = InstanceSpec {
            generator: Generator::RandomRectilinear { max_vertices: 24, seed },
            a_target: None,
            start: StartRule::RandomBoundary,
        };
        let inst = generate(&spec).unwrap();
        let bad = common::essential_structure_violations(&inst.polygon, &inst.start);
        prop_assert!(bad.is_empty(), "{:?}", bad);
    }

    #[test]
    fn binary_search_schedule_fits_the_bound(wn in 1i64..4000, ak in 0i32..6) {
        let a = Coord::pow2(-ak);
        let w = Coord::frac(wn, 64).max(a.clone());
        let plan = BinarySearchPlan::new(&w, &a);
        prop_assert_eq!(plan.steps.len(), binary_search_steps(&w, &a));
        prop_assert_eq!(within_binary_search_bound(&plan.worst_cost(), &w, &a), Some(true));
    }

    #[test]
    fn static_niches_match_their_schedule(depth in 0usize..5, bits in 0u32..32, dn in 1i64..5) {
        let choices: Vec<Side> = (0..depth).map(|j| if bits >> j & 1 == 1 { Side::Left } else { Side::Right }).collect();
        let np = NicheParams::new(Coord::one(), Coord::int(dn), depth);
        let p = static_niche(&np, &choices).unwrap();
        prop_assert_eq!(p.aspect_ratio(), np.schedule_aspect_ratio(&choices));
        prop_assert!(scanwatch::visibility::is_x_monotone(&p) && scanwatch::visibility::is_y_monotone(&p));
        prop_assert!(p.contains(&np.start()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 12, ..ProptestConfig::default() })]

    #[test]
    fn oracle_scans_stay_in_the_pruned_polygon(seed in 0u64..200) {
        let spec = InstanceSpec {
            generator: Generator::RandomRectilinear { max_vertices: 10, seed },
            a_target: Some(Coord::frac(1, 2)),
            start: StartRule::RandomBoundary,
        };
        let inst = generate(&spec).unwrap();
        let o = offline_oracle(&inst.polygon, &inst.start, &CostModel::default(), 8).unwrap();
        prop_assume!(o.status == OracleStatus::Exact);
        let pruned = prune_nonessential(&inst.polygon, &inst.start);
        for s in &o.scans {
            prop_assert!(pruned.contains(s), "scan {:?} outside the pruned polygon", s);
        }
    }
}

#[test]
fn alternating_niche_is_valid() {
    for depth in 0..6 {
        let np = NicheParams::standard(depth);
        assert!(static_niche(&np, &alternating_choices(depth)).is_ok());
    }
}
