mod common;

use std::collections::BTreeMap;

use orbiform::fuchsian::induced_signature;
use orbiform::orb_poset::{
    enumerate_models, hyperbolic_prosystem_edges, is_valid_target_order, quotient_evidence, resolve_with_multipliers,
};
use orbiform::rational::lcm;
use orbiform::{common_refinement, refines, resolve_ramification, OrbifoldModel, RamifiedCoverData, Sector};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use common::random_perm_cover;

fn model() -> impl Strategy<Value = OrbifoldModel> {
    prop::collection::btree_map(prop::sample::select(vec!["x", "y", "z", "w"]), 2u64..=12, 0..=4)
        .prop_map(|m| OrbifoldModel::new(0, m.into_iter().map(|(k, v)| (k.to_string(), v)).collect()).unwrap())
}

fn profile() -> impl Strategy<Value = Vec<u64>> {
    prop::collection::vec(1u64..=9, 1..=5).prop_filter("some ramification", |p| p.iter().any(|&e| e > 1))
}

proptest! {
    #[test]
    fn refinement_is_a_partial_order(a in model(), b in model(), c in model()) {
        prop_assert!(refines(&a, &a).unwrap());
        if refines(&a, &b).unwrap() && refines(&b, &a).unwrap() {
            prop_assert_eq!(&a, &b);
        }
        if refines(&a, &b).unwrap() && refines(&b, &c).unwrap() {
            prop_assert!(refines(&a, &c).unwrap());
        }
    }

    #[test]
    fn common_refinement_is_least(a in model(), b in model(), c in model()) {
        let j = common_refinement(&a, &b).unwrap();
        prop_assert!(refines(&j, &a).unwrap() && refines(&j, &b).unwrap());
        prop_assert_eq!(&j, &common_refinement(&b, &a).unwrap());
        if refines(&c, &a).unwrap() && refines(&c, &b).unwrap() {
            prop_assert!(refines(&c, &j).unwrap());
        }
        // lcm pointwise
        for x in ["x", "y", "z", "w"] {
            prop_assert_eq!(j.order_at(x), lcm(a.order_at(x), b.order_at(x)));
        }
    }

    #[test]
    fn resolution_is_etale_and_minimal(p in profile(), q in profile(), k in 1u64..=4) {
        let degree = p.iter().sum::<u64>().max(q.iter().sum());
        let pad = |mut v: Vec<u64>| { let s: u64 = v.iter().sum(); v.extend(std::iter::repeat_n(1, (degree - s) as usize)); v };
        let cover = RamifiedCoverData::from_profiles(degree, [("x", pad(p.clone())), ("y", pad(q.clone()))]).unwrap();
        let res = resolve_ramification(&cover).unwrap();
        prop_assert!(res.is_etale(&cover));
        for b in cover.branches() {
            let m = res.target[&b.point];
            for (e, my) in b.profile.iter().zip(&res.sources[&b.point]) {
                prop_assert_eq!(e * my, m);
            }
            // brute-force the smallest valid order
            let least = (1..).find(|&c| b.profile.iter().all(|e| c % e == 0)).unwrap();
            prop_assert_eq!(m, least);
            prop_assert!(is_valid_target_order(&b.profile, m));
            prop_assert!(!(1..m).any(|c| is_valid_target_order(&b.profile, c)));
        }
        let scaled = resolve_with_multipliers(&cover, &BTreeMap::from([("x".to_string(), k)])).unwrap();
        prop_assert_eq!(scaled.target["x"], k * res.target["x"]);
        prop_assert!(scaled.is_etale(&cover));
        prop_assert!(refines(&scaled.target_model(0), &res.target_model(0)).unwrap());
    }
}

#[test]
fn permutation_covers_agree_with_resolution() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checked = 0;
    while checked < 60 {
        let n = 2 + checked % 6;
        let Some(cover) = random_perm_cover(&mut rng, n) else { continue };
        let rec = induced_signature(&cover.signature, &cover.table()).unwrap();
        let data =
            RamifiedCoverData::from_profiles(n as u64, cover.profiles().iter().map(|(x, p)| (x.as_str(), p.clone())))
                .unwrap();
        let res = resolve_ramification(&data).unwrap();
        assert_eq!(res.target_model(0).signature(), cover.signature);
        let mut from_resolve: Vec<u64> = res.sources.values().flatten().copied().filter(|&m| m > 1).collect();
        from_resolve.sort_unstable();
        assert_eq!(rec.induced_sig.orders(), &from_resolve[..]);
        for ((x, _), local) in cover.branches.iter().zip(&rec.ramification) {
            let mut a: Vec<u64> = local.cycle_lengths.iter().map(|l| res.target[x] / l).collect();
            let mut b = res.sources[x].clone();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b, "{x}");
        }
        checked += 1;
    }
}

#[test]
fn enumeration_counts_multisets() {
    // nondecreasing tuples of length ≤ 3 from 2..=5: 1 + 4 + 10 + 20
    let all = enumerate_models(0, 3, 5).unwrap();
    assert_eq!(all.len(), 35);
    assert_eq!(all[0].sector, Sector::Spherical);
    let hyperbolic = all.iter().filter(|m| m.sector == Sector::Hyperbolic).count();
    let brute = (2..=5u64)
        .flat_map(|p| (p..=5).flat_map(move |q| (q..=5).map(move |r| (p, q, r))))
        .filter(|&(p, q, r)| q * r + p * r + p * q < p * q * r)
        .count();
    assert_eq!(hyperbolic, brute);
    assert!(enumerate_models(2, 1, 3).unwrap().iter().all(|m| m.sector == Sector::Hyperbolic));
}

#[test]
fn hasse_edges_are_covering_relations() {
    let models: Vec<OrbifoldModel> = [2u64, 3, 4, 6, 12]
        .into_iter()
        .map(|m| OrbifoldModel::from_pairs(0, [("x", 7), ("y", 3), ("z", m)]).unwrap())
        .collect();
    let sys = hyperbolic_prosystem_edges(&models).unwrap();
    let mut edges: Vec<(u64, u64)> = sys
        .edges
        .iter()
        .map(|e| (sys.nodes[e.fine].model.order_at("z"), sys.nodes[e.coarse].model.order_at("z")))
        .collect();
    edges.sort_unstable();
    assert_eq!(edges, [(4, 2), (6, 2), (6, 3), (12, 4), (12, 6)]);
    assert!(hyperbolic_prosystem_edges(&[OrbifoldModel::from_pairs(0, [("x", 2), ("y", 3)]).unwrap()]).is_err());
}

#[test]
fn quotient_evidence_for_hurwitz_node() {
    let m = OrbifoldModel::from_pairs(0, [("x", 2), ("y", 3), ("z", 7)]).unwrap();
    assert_eq!(quotient_evidence(&m, 7).unwrap(), [1, 0, 0, 0, 0, 0, 2]);
}
