use adjlabel::graph::generate;
use adjlabel::scheme::{encode, LabelFile, SchemeKind};
use adjlabel::{FamilyTag, Graph};
use proptest::prelude::*;

fn family(kind: SchemeKind) -> FamilyTag {
    match kind {
        SchemeKind::Tree => FamilyTag::Tree,
        SchemeKind::Outerplanar | SchemeKind::OuterplanarSplit => FamilyTag::Outerplanar,
        SchemeKind::Planar => FamilyTag::Planar,
        _ => FamilyTag::General,
    }
}

fn check(kind: SchemeKind, g: &Graph, bound: usize) {
    let f = encode(kind, g, bound).unwrap();
    let f = LabelFile::parse(&f.to_text()).unwrap();
    let d = f.decoder().unwrap();
    for u in 0..g.n() {
        for v in 0..g.n() {
            let want = u != v && g.has_edge(u, v);
            assert_eq!(d.adjacent(&f.labels[u], &f.labels[v]).unwrap(), want, "{kind} ({u},{v})");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn every_scheme_decodes_adjacency(
        scheme in 0..SchemeKind::ALL.len(),
        n in 1usize..90,
        delta in 2usize..6,
        seed in any::<u64>(),
    ) {
        let kind = SchemeKind::ALL[scheme];
        let g = generate(family(kind), n, delta, seed).unwrap();
        let bound = if kind == SchemeKind::Combinadic { g.max_degree() } else { delta };
        check(kind, &g, bound);
    }
}

#[test]
fn graph_text_round_trip() {
    for fam in [FamilyTag::Tree, FamilyTag::Outerplanar, FamilyTag::Planar, FamilyTag::General] {
        let g = generate(fam, 150, 4, 9).unwrap();
        let back = Graph::parse(&g.to_text()).unwrap();
        assert_eq!(back.n(), g.n());
        assert_eq!(back.edges(), g.edges());
    }
}

#[test]
fn tiny_graphs() {
    let single = Graph::new(1, 0, []).unwrap();
    let edge = Graph::new(2, 1, [(0, 1)]).unwrap();
    for kind in SchemeKind::ALL {
        check(kind, &single, if kind == SchemeKind::Combinadic { 0 } else { 1 });
        check(kind, &edge, 1);
    }
}

#[test]
fn wrong_family_is_rejected() {
    let k5: Vec<(usize, usize)> = (0..5).flat_map(|u| (u + 1..5).map(move |v| (u, v))).collect();
    let g = Graph::new(5, 4, k5).unwrap();
    assert!(encode(SchemeKind::Planar, &g, 4).is_err());
    assert!(encode(SchemeKind::Outerplanar, &g, 4).is_err());
    assert!(encode(SchemeKind::Tree, &g, 4).is_err());
    check(SchemeKind::BoundedList, &g, 4);
}
