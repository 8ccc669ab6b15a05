use num_traits::ToPrimitive;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sagl::family::{parse_predicate, EdgeSign, PreparedPoints, ReducedPredicate, SignMatrix};
use sagl::partition::{
    balance_bound, build_cell_assignment, build_hierarchy, centerpoint_estimate, depth_bound,
    exhaustive_split, is_strict, lift_point_set, verify_uniformity, BalanceMode, HierarchyParams,
    HyperplaneSet, LiftedPointSet, Strategy,
};
use sagl::rational::{int, ratio};
use sagl::Rational;

fn plane(n: usize, seed: u64) -> LiftedPointSet {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pts = (0..n)
        .map(|_| {
            vec![
                ratio(rng.gen_range(-30_000..30_000), 997),
                ratio(rng.gen_range(-30_000..30_000), 991),
            ]
        })
        .collect();
    LiftedPointSet::new(2, pts).unwrap()
}

#[test]
fn centerpoint_has_depth_on_planar_sets() {
    for seed in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let raw: Vec<(i128, i128)> = (0..100)
            .map(|_| {
                (
                    rng.gen_range(-30_000..30_000),
                    rng.gen_range(-30_000..30_000),
                )
            })
            .collect();
        let pts = LiftedPointSet::new(
            2,
            raw.iter()
                .map(|&(a, b)| vec![ratio(a as i64, 997), ratio(b as i64, 991)])
                .collect(),
        )
        .unwrap();
        let members: Vec<usize> = (0..100).collect();
        let c = centerpoint_estimate(&pts, &members, seed);
        // halfplane depth is invariant under the diagonal scaling back to integer coordinates
        let c = [&c[0] * int(997), &c[1] * int(991)];
        let mut min_depth = usize::MAX;
        for i in 0..100 {
            for j in i + 1..100 {
                let (a, b) = (raw[i], raw[j]);
                let normal = (b.1 - a.1, a.0 - b.0);
                let offset = &c[0] * int(normal.0 as i64) + &c[1] * int(normal.1 as i64);
                let lo = offset.floor().to_integer().to_i128().unwrap();
                let hi = offset.ceil().to_integer().to_i128().unwrap();
                let (mut above, mut below) = (0, 0);
                for p in &raw {
                    let v = normal.0 * p.0 + normal.1 * p.1;
                    above += (v >= hi) as usize;
                    below += (v <= lo) as usize;
                }
                min_depth = min_depth.min(above.min(below));
            }
        }
        assert!(min_depth >= 20, "seed {seed}: depth {min_depth}");
    }
}

#[test]
fn lifted_points_match_reduced_lift() {
    let pred = parse_predicate("q=2\n(x1-y1)^2 + (x2-y2)^2 <= 4").unwrap();
    let r = ReducedPredicate::new(&pred).unwrap();
    let raw: Vec<Vec<Rational>> = (0..10)
        .map(|i| vec![ratio(i, 3), ratio(7 - i, 5)])
        .collect();
    let lifted = lift_point_set(&raw, &r).unwrap();
    assert_eq!(lifted.len(), 10);
    assert_eq!(lifted.dim(), 4);
    for (i, p) in raw.iter().enumerate() {
        assert_eq!(lifted.point(i), r.reduced_lift(p).unwrap().as_slice());
    }
    let single = lift_point_set(&raw[..1], &r).unwrap();
    assert_eq!(single.len(), 1);
}

#[test]
fn sixty_four_planar_points_are_balanced_and_deterministic() {
    let pts = plane(64, 9);
    let members: Vec<usize> = (0..64).collect();
    let a = build_cell_assignment(&pts, &members, 3, Strategy::HalvingCuts).unwrap();
    let b = build_cell_assignment(&pts, &members, 3, Strategy::HalvingCuts).unwrap();
    assert_eq!(a, b);
    let bound = balance_bound(64, 2, BalanceMode::default());
    assert!(a.loads().iter().all(|&l| l <= bound));
    assert!(a.cell_count <= 4);
}

/// Sign-indefinite bilinear relation `x1*y1 - x2*y2 >= 0` on the planar point set; its lift is the identity.
fn random_signs(pts: &LiftedPointSet, _seed: u64) -> (SignMatrix, HyperplaneSet) {
    let pred = parse_predicate("q=2\nx1*y1 - x2*y2 >= 0").unwrap();
    let r = ReducedPredicate::new(&pred).unwrap();
    let lifted = lift_point_set(pts.points(), &r).unwrap();
    let signs = SignMatrix::compute(&PreparedPoints::new(&r, pts.points()).unwrap());
    assert!(signs.first_zero().is_none());
    (signs, HyperplaneSet::from_lifted(&r, &lifted))
}

#[test]
fn every_realized_hyperplane_has_a_uniform_cell() {
    // the sign relation is symmetric through the reduced form, so use a real predicate
    let pred = parse_predicate("q=2\nx1*y1 - x2*y2 >= 0").unwrap();
    let r = ReducedPredicate::new(&pred).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..5 {
        let raw: Vec<Vec<Rational>> = (0..150)
            .map(|_| {
                vec![
                    ratio(rng.gen_range(-9999..9999), 1000),
                    ratio(rng.gen_range(-9999..9999), 1000),
                ]
            })
            .collect();
        let lifted = lift_point_set(&raw, &r).unwrap();
        let signs = SignMatrix::compute(&PreparedPoints::new(&r, &raw).unwrap());
        if signs.first_zero().is_some() {
            continue;
        }
        let members: Vec<usize> = (0..150).collect();
        let a = build_cell_assignment(&lifted, &members, rng.gen(), Strategy::HalvingCuts).unwrap();
        let cert = verify_uniformity(&a, &signs).expect("certificate for every vertex");
        for y in 0..150 {
            for cell in cert.uniform_cells(y) {
                let vals: Vec<bool> = a
                    .members
                    .iter()
                    .zip(&a.cells)
                    .filter(|(&m, &c)| c == cell && m != y)
                    .map(|(&m, _)| signs.is_edge(m, y))
                    .collect();
                assert!(vals.iter().all(|&v| v == cert.bit(y, cell)));
            }
        }
    }
}

#[test]
fn non_uniform_hyperplanes_are_reported() {
    // synthetic signs with no geometric meaning: alternate by id
    let pts = plane(40, 2);
    let members: Vec<usize> = (0..40).collect();
    let a = build_cell_assignment(&pts, &members, 1, Strategy::HalvingCuts).unwrap();
    let signs = SignMatrix::from_fn(40, |i, j| {
        if (i + j) % 2 == 0 {
            EdgeSign::Positive
        } else {
            EdgeSign::Negative
        }
    });
    let violators = verify_uniformity(&a, &signs).unwrap_err();
    assert!(!violators.is_empty());
}

#[test]
fn hierarchy_on_random_planar_hyperplanes() {
    let pts = plane(300, 5);
    let (signs, hyps) = random_signs(&pts, 6);
    let params = HierarchyParams {
        geometric_audit: true,
        ..HierarchyParams::default()
    };
    let h = build_hierarchy(&pts, &hyps, &signs, params).unwrap();
    h.brute_force_audit(&signs).unwrap();
    assert!(h.depth() <= depth_bound(300, 2, params.balance));
    assert!(h.audit().check().is_empty());
}

#[test]
fn audit_json_round_trips() {
    let pts = plane(100, 8);
    let (signs, hyps) = random_signs(&pts, 1);
    let h = build_hierarchy(&pts, &hyps, &signs, HierarchyParams::default()).unwrap();
    let audit = h.audit();
    let text = serde_json::to_string(&audit).unwrap();
    let back: sagl::partition::HierarchyAudit = serde_json::from_str(&text).unwrap();
    assert_eq!(back, audit);
    let mut broken = back.clone();
    if let Some(node) = broken.nodes.iter_mut().find(|n| !n.terminal) {
        node.members.pop();
    }
    assert!(!broken.check().is_empty());
}

#[test]
fn hierarchy_is_deterministic() {
    let pts = plane(200, 11);
    let (signs, hyps) = random_signs(&pts, 3);
    let p = HierarchyParams {
        seed: 42,
        ..HierarchyParams::default()
    };
    let a = build_hierarchy(&pts, &hyps, &signs, p).unwrap().audit();
    let b = build_hierarchy(&pts, &hyps, &signs, p).unwrap().audit();
    assert_eq!(a, b);
}

#[test]
fn coincident_points_abort_as_degenerate() {
    let pts = LiftedPointSet::new(1, vec![vec![int(3)]; 10]).unwrap();
    let signs = SignMatrix::from_fn(10, |_, _| EdgeSign::Positive);
    let hyps = HyperplaneSet {
        normals: vec![vec![int(1)]; 10],
    };
    let err = build_hierarchy(&pts, &hyps, &signs, HierarchyParams::default()).unwrap_err();
    assert!(matches!(err, sagl::Error::Degenerate(_)), "{err}");
}

#[test]
fn impossible_strict_balance_exhausts_the_provider() {
    // four coincident pairs on a line cannot be split into strict halves at every level
    let mut vals = Vec::new();
    for v in [1, 2, 3] {
        for _ in 0..3 {
            vals.push(vec![int(v)]);
        }
    }
    let pts = LiftedPointSet::new(1, vals).unwrap();
    let signs = SignMatrix::from_fn(9, |_, _| EdgeSign::Positive);
    let hyps = HyperplaneSet {
        normals: vec![vec![int(1)]; 9],
    };
    let params = HierarchyParams {
        balance: BalanceMode::Strict,
        max_retries: 3,
        ..HierarchyParams::default()
    };
    let err = build_hierarchy(&pts, &hyps, &signs, params).unwrap_err();
    match err {
        sagl::Error::ProviderExhausted { node, attempts, .. } => {
            assert_eq!(node, 0);
            assert_eq!(attempts, 4);
        }
        other => panic!("unexpected {other}"),
    }
}

#[test]
fn exhaustive_oracle_agrees_with_provider_claims() {
    let mut claimed = 0;
    for seed in 0..60u64 {
        let n = 5 + (seed % 8) as usize;
        let pts = plane(n, 1000 + seed);
        let members: Vec<usize> = (0..n).collect();
        let oracle = exhaustive_split(&pts, &members);
        // in general position a strict split always exists
        let oracle = oracle.expect("exhaustive search finds a strict split");
        assert!(is_strict(&oracle.loads(), n));
        let provider = build_cell_assignment(&pts, &members, seed, Strategy::HalvingCuts).unwrap();
        if is_strict(&provider.loads(), n) {
            claimed += 1;
        }
    }
    assert!(claimed > 0);
}

#[test]
fn median_split_is_strict_on_a_line() {
    for n in 5..40 {
        let pts =
            LiftedPointSet::new(1, (0..n).map(|i| vec![ratio(i * 7 % 41, 3)]).collect()).unwrap();
        let members: Vec<usize> = (0..n as usize).collect();
        let a = build_cell_assignment(&pts, &members, 0, Strategy::Median).unwrap();
        let loads = a.loads();
        assert_eq!(loads, vec![n as usize / 2, n as usize - n as usize / 2]);
    }
}
