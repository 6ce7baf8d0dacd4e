mod common;

use scanwatch::corpus::{generate, Generator, InstanceSpec, StartRule};

#[test]
fn visibility_matches_brute_force_on_random_polygons() {
    for seed in 0..8 {
        let spec = InstanceSpec {
            generator: Generator::RandomRectilinear { max_vertices: 16, seed },
            a_target: None,
            start: StartRule::RandomBoundary,
        };
        let inst = generate(&spec).unwrap();
        let (n, bad) = common::visibility_agreement(&inst, 24, seed as usize);
        assert!(n > 0);
        assert!(bad.is_empty(), "seed {seed}: {:?}", &bad[..bad.len().min(5)]);
    }
}

#[test]
fn fixtures_match_brute_force() {
    for g in [Generator::LShape, Generator::Comb { teeth: 3 }, Generator::Fig5Nvr, Generator::Fig12] {
        let inst = generate(&InstanceSpec::new(g.clone())).unwrap();
        for e in 0..inst.polygon.len() {
            let (_, bad) = common::visibility_agreement(&inst, 17, e);
            assert!(bad.is_empty(), "{g:?}: {:?}", &bad[..bad.len().min(5)]);
        }
    }
}
