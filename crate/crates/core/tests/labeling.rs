use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sagl::family::Family;
use sagl::harness::{check_all_pairs, encode, gated_instance, Adjacency, InstanceSpec};
use sagl::labeling::{
    decode, decode_oriented, deserialize_label, serialize_label, Address, LabelHeader, LabelTree,
    VertexLabel, FORMAT_VERSION,
};
use sagl::partition::{HierarchyParams, MAX_Q};
use sagl::rational::ratio;
use sagl::Rational;

fn random_tree(rng: &mut ChaCha8Rng, q: u32, depth: u32) -> LabelTree {
    let cells = 1u32 << q;
    if depth == 0 || rng.gen_bool(0.3) {
        let c = rng.gen_range(1..=1usize << (2 * q));
        return LabelTree::Final {
            bits: (0..c).map(|_| rng.gen()).collect(),
        };
    }
    let mut leaves = Vec::new();
    for cell in 1..=cells {
        if rng.gen_bool(0.6) {
            leaves.push((cell, rng.gen()));
        }
    }
    if leaves.is_empty() {
        leaves.push((rng.gen_range(1..=cells), rng.gen()));
    }
    let children = (0..cells as usize - leaves.len())
        .map(|_| random_tree(rng, q, depth - 1))
        .collect();
    LabelTree::Split { leaves, children }
}

#[test]
fn random_labels_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for _ in 0..10_000 {
        let q = rng.gen_range(1..=3u32);
        let s = rng.gen_range(0..=4u16);
        let n = rng.gen_range(1..=5000u32);
        let header = LabelHeader {
            n,
            q: q as u16,
            s,
            version: FORMAT_VERSION,
            flags: rng.gen_range(0..4),
        };
        let address = Address {
            path: (0..rng.gen_range(0..=s))
                .map(|_| rng.gen_range(1..=1u32 << q))
                .collect(),
            slot: rng.gen_range(1..=1u32 << (2 * q)),
        };
        let tree = random_tree(&mut rng, q, s as u32);
        let label = VertexLabel::new(rng.gen_range(0..n), header, address, tree);
        let bits = serialize_label(&label);
        assert_eq!(bits.len(), LabelHeader::BITS as usize + label.len());
        let back = deserialize_label(&bits).unwrap();
        assert_eq!(back.id, label.id);
        assert_eq!(back.header, label.header);
        assert_eq!(back.address, label.address);
        assert_eq!(back.tree, label.tree);
        assert_eq!(back.body(), label.body());
    }
}

#[test]
fn unsupported_dimension_is_rejected() {
    let header = LabelHeader {
        n: 4,
        q: MAX_Q as u16 + 1,
        s: 0,
        version: FORMAT_VERSION,
        flags: 0,
    };
    let label = VertexLabel::new(
        0,
        header,
        Address {
            path: vec![],
            slot: 1,
        },
        LabelTree::Final { bits: vec![false] },
    );
    assert!(deserialize_label(&serialize_label(&label)).is_err());
}

fn encoded(spec: &InstanceSpec) -> (Family, Vec<Vec<Rational>>, sagl::harness::Encoding) {
    let (family, points, _, _) = gated_instance(spec, 16).unwrap();
    let enc = encode(&family, &points, HierarchyParams::default()).unwrap();
    (family, points, enc)
}

#[test]
fn decoding_is_symmetric_and_correct() {
    for spec in [
        InstanceSpec::new("unit-disk", 200, 3),
        InstanceSpec::new("disk", 150, 4),
        InstanceSpec::dot_product(2, 300, 5),
    ] {
        let (family, points, enc) = encoded(&spec);
        let truth = Adjacency::direct(&family, &points).unwrap();
        let check = check_all_pairs(&enc.label_sections(), &truth).unwrap();
        assert_eq!(check.mismatches, 0, "{}", spec.family);
        assert_eq!(check.asymmetric, 0, "{}", spec.family);
        let labels = &enc.sections[0].labels;
        for (i, j) in [(0, 1), (5, 17), (99, 3)] {
            assert_eq!(
                decode(&labels[i], &labels[j]).unwrap(),
                decode(&labels[j], &labels[i]).unwrap()
            );
        }
    }
}

#[test]
fn addresses_follow_the_partition() {
    let (_, _, enc) = encoded(&InstanceSpec::dot_product(2, 1024, 8));
    let sec = &enc.sections[0];
    let h = &sec.hierarchy;
    assert!(h.depth() >= 1);
    for (v, label) in sec.labels.iter().enumerate() {
        let mut node = h.root();
        for &cell in &label.address.path {
            let split = node
                .split
                .as_ref()
                .expect("path continues only through split nodes");
            assert_eq!(split.assignment.cell_of(v), Some(cell));
            node = h.node(split.children[cell as usize - 1].unwrap());
        }
        assert!(node.split.is_none());
        assert_eq!(node.members[label.address.slot as usize - 1], v);
    }
}

#[test]
fn induced_subgraphs_re_encode() {
    let (family, points, _) = encoded(&InstanceSpec::new("unit-disk", 300, 12));
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for size in [1, 2, 16, 17, 90] {
        let mut ids: Vec<usize> = (0..points.len()).collect();
        for i in 0..size {
            let j = rng.gen_range(i..ids.len());
            ids.swap(i, j);
        }
        let sub: Vec<Vec<Rational>> = ids[..size].iter().map(|&i| points[i].clone()).collect();
        let enc = encode(&family, &sub, HierarchyParams::default()).unwrap();
        let truth = Adjacency::direct(&family, &sub).unwrap();
        let check = check_all_pairs(&enc.label_sections(), &truth).unwrap();
        assert_eq!(check.pairs as usize, size * (size - 1) / 2);
        assert_eq!(check.mismatches, 0);
    }
}

#[test]
fn single_vertex_and_small_sets_use_one_terminal() {
    let family = Family::parse("q=2\n(x1-y1)^2 + (x2-y2)^2 <= 4").unwrap();
    let (_, points, _) = encoded(&InstanceSpec::new("unit-disk", 16, 2));
    let one = encode(&family, &points[..1], HierarchyParams::default()).unwrap();
    let l = &one.sections[0].labels[0];
    assert_eq!(
        l.address,
        Address {
            path: vec![],
            slot: 1
        }
    );
    assert!(decode(l, l).is_err());
    let small = encode(&family, &points, HierarchyParams::default()).unwrap();
    let sec = &small.sections[0];
    assert_eq!(sec.hierarchy.depth(), 0);
    for l in &sec.labels {
        assert!(matches!(&l.tree, LabelTree::Final { bits } if bits.len() == 16));
    }
}

#[test]
fn vertex_adjacent_to_everything_has_a_flat_tree() {
    // |x y| < 1 on the open unit interval, so every pair satisfies x y + 1 >= 0
    let family = Family::parse("q=1\nx1*y1 + 1 >= 0").unwrap();
    let points: Vec<Vec<Rational>> = (0..200).map(|i| vec![ratio(2 * i - 199, 211)]).collect();
    let enc = encode(&family, &points, HierarchyParams::default()).unwrap();
    let sec = &enc.sections[0];
    assert!(sec.hierarchy.depth() >= 1);
    for l in &sec.labels {
        match &l.tree {
            LabelTree::Split { leaves, children } => {
                assert!(children.is_empty());
                let root = sec.hierarchy.root().split.as_ref().unwrap();
                for &(cell, b) in leaves {
                    // empty cells answer 0 and are never queried
                    assert_eq!(b, root.children[cell as usize - 1].is_some());
                }
            }
            other => panic!("expected a split, got {other:?}"),
        }
    }
    for (i, j) in [(0, 199), (50, 51), (120, 3)] {
        assert!(decode_oriented(&sec.labels[i], &sec.labels[j]).unwrap());
    }
}

#[test]
fn strict_constraints_decode_through_the_complement() {
    let family = Family::parse("q=2\n(x1-y1)^2 + (x2-y2)^2 < 4").unwrap();
    let (_, points, _) = encoded(&InstanceSpec::new("unit-disk", 120, 6));
    let enc = encode(&family, &points, HierarchyParams::default()).unwrap();
    assert!(enc.sections[0].labels[0].header.complement());
    let truth = Adjacency::direct(&family, &points).unwrap();
    assert_eq!(
        check_all_pairs(&enc.label_sections(), &truth)
            .unwrap()
            .mismatches,
        0
    );
}

#[test]
fn label_files_round_trip() {
    let family = Family::parse("q=2\n(x1-y1)^2 + (x2-y2)^2 <= 4\nx1*y1 + x2*y2 >= 0").unwrap();
    let (_, points, _) = encoded(&InstanceSpec::new("unit-disk", 100, 9));
    let enc = encode(&family, &points, HierarchyParams::default()).unwrap();
    let bytes = enc.to_bytes().unwrap();
    let sections = sagl::harness::decode_file_bytes(&bytes).unwrap();
    assert_eq!(sections.len(), 2);
    let truth = Adjacency::direct(&family, &points).unwrap();
    assert_eq!(check_all_pairs(&sections, &truth).unwrap().mismatches, 0);
    assert!(sagl::harness::decode_file_bytes(&bytes[..bytes.len() - 1]).is_err());
}
