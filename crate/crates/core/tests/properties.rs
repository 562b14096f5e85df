use std::sync::Arc;

use proptest::prelude::*;

use necklace_core::corpus::{self, DagOptions};
use necklace_core::fibration::{
    f0_criterion, is_right_fibration, nerve_of_functor, presheaf_round_trip, unstraighten_map,
    unstraighten_transformation,
};
use necklace_core::io::{self, BuiltinResolver};
use necklace_core::necklace::{hom_set, join, join_right_adjoint, realize, segalify_inclusion};
use necklace_core::rewrite::Budget;
use necklace_core::segalify::{h1_necklace, h1_rewrite, nerve_round_trip, EdgeWord};
use necklace_core::sset::{nerve_of_category, product, product_projection};
use necklace_core::{Necklace, SSetMap, TruncatedSSet};

fn dag(seed: u64, trunc_level: usize) -> TruncatedSSet {
    let mut r = corpus::rng(seed);
    corpus::random_dag_complex(&mut r, &DagOptions { trunc_level, ..DagOptions::default() }).unwrap()
}

fn necklace() -> impl Strategy<Value = Necklace> {
    prop::collection::vec(1usize..=3, 0..=3).prop_map(|b| Necklace::new(b).unwrap())
}

/// Edge words of `x` obtained by walking forward from a vertex.
fn walk(x: &TruncatedSSet, start: usize, choices: &[usize]) -> EdgeWord {
    let mut at = start;
    let mut edges = Vec::new();
    for &c in choices {
        let out: Vec<usize> = (0..x.len(1)).filter(|&e| x.edge_source(e) == at).collect();
        if out.is_empty() {
            break;
        }
        let e = out[c % out.len()];
        at = x.edge_target(e);
        edges.push(e);
    }
    EdgeWord::new(x, start, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn generated_complexes_are_simplicial_sets(seed in any::<u64>()) {
        let x = dag(seed, 3);
        prop_assert!(x.validate().ok);
        prop_assert!(x.is_acyclic());
        prop_assert!(x.nondegenerate_count() <= 30);
    }

    #[test]
    fn sset_json_round_trip(seed in any::<u64>()) {
        let x = dag(seed, 2);
        let back = io::sset_from_value(&io::sset_to_value(&x)).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn category_and_presheaf_json_round_trip(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let c = corpus::random_category(&mut r, 4, 2, seed % 2 == 0);
        let back = io::category_from_value(&io::category_to_value(&c)).unwrap();
        prop_assert_eq!(&back, &c);
        let f = corpus::random_presheaf(&mut r, &c, 3);
        let g = io::presheaf_from_value(&io::presheaf_to_value(&f)).unwrap();
        prop_assert_eq!(g, f);
    }

    #[test]
    fn map_json_round_trip(seed in any::<u64>()) {
        let x = Arc::new(dag(seed, 2));
        let y = Arc::new(dag(seed.wrapping_add(1), 2));
        let xy = Arc::new(product(&x, &y).unwrap());
        let p = product_projection(&x, &y, &xy, true).unwrap();
        let r = BuiltinResolver { trunc_level: 2 };
        let back = io::map_from_value(&io::map_to_value(&p), &r).unwrap();
        prop_assert_eq!(back, p);
    }

    #[test]
    fn nerves_round_trip(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let c = corpus::random_category(&mut r, 4, 3, seed % 3 == 0);
        prop_assert!(nerve_of_category(&c, 3).unwrap().validate().ok);
        prop_assert!(nerve_round_trip(&c).is_ok());
    }

    #[test]
    fn unstraightenings_are_right_fibrations(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let c = corpus::random_category(&mut r, 4, 2, seed % 2 == 0);
        let f = corpus::random_presheaf(&mut r, &c, 3);
        let p = unstraighten_map(&f, 3).unwrap();
        prop_assert!(p.check().ok);
        prop_assert!(is_right_fibration(&p).is_right_fibration);
        prop_assert!(presheaf_round_trip(&f, 3).is_ok());
    }

    #[test]
    fn right_fibrations_compose(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let c = corpus::random_category(&mut r, 3, 2, true);
        let (slice, proj) = c.slice_over((seed as usize) % c.object_count());
        let q = nerve_of_functor(&slice, &c, &proj, 3).unwrap();
        let f = corpus::random_presheaf(&mut r, &slice, 2);
        let p = unstraighten_map(&f, 3).unwrap();
        let pq = p.then(&q).unwrap();
        prop_assert!(is_right_fibration(&q).is_right_fibration);
        prop_assert!(is_right_fibration(&pq).is_right_fibration);
    }

    #[test]
    fn f0_matches_invertibility(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let c = corpus::random_category(&mut r, 3, 2, seed % 2 == 0);
        let (f, g, eta) = corpus::random_transformation(&mut r, &c, 3);
        let (uf, ug, m) = unstraighten_transformation(&f, &g, &eta, 3).unwrap();
        let rep = f0_criterion(&uf, &ug, &m).unwrap();
        prop_assert!(rep.consistent());
        prop_assert_eq!(rep.level0_bijective, eta.is_isomorphism(&f, &g));
    }

    #[test]
    fn products_project_simplicially(seed in any::<u64>()) {
        let x = Arc::new(dag(seed, 2));
        let y = Arc::new(dag(seed ^ 0x5555, 2));
        let xy = Arc::new(product(&x, &y).unwrap());
        prop_assert!(xy.validate().ok);
        prop_assert_eq!(xy.len(0), x.len(0) * y.len(0));
        for first in [true, false] {
            prop_assert!(product_projection(&x, &y, &xy, first).unwrap().check().ok);
        }
    }

    #[test]
    fn normal_forms_are_idempotent(seed in any::<u64>(), choices in prop::collection::vec(0usize..8, 0..6)) {
        let x = dag(seed, 2);
        let h = h1_rewrite(&x, Budget::default()).unwrap();
        let w = walk(&x, (seed as usize) % x.len(0), &choices);
        let nf = h.normal_form(&w);
        prop_assert_eq!(h.normal_form(&nf), nf.clone());
        prop_assert_eq!(nf.end(&x), w.end(&x));
        // the necklace classes agree on a word and its normal form
        let hn = h1_necklace(&x, None).unwrap();
        prop_assert_eq!(hn.class_of(&w.reduced(&x)), hn.class_of(&nf.reduced(&x)));
    }

    #[test]
    fn necklace_composites_stay_in_hom(a in necklace(), b in necklace(), c in necklace()) {
        let ab = hom_set(&a, &b);
        let bc = hom_set(&b, &c);
        let ac: Vec<Vec<usize>> = hom_set(&a, &c).iter().map(|f| f.vertex_map().to_vec()).collect();
        for f in &ab {
            for g in &bc {
                let gf = g.compose(f).unwrap();
                prop_assert!(ac.contains(&gf.vertex_map().to_vec()));
            }
        }
    }

    #[test]
    fn realizations_are_valid(n in necklace()) {
        let b = realize(&n, 3).unwrap();
        prop_assert!(b.sset.validate().ok);
        prop_assert_eq!(b.sset.len(0), n.total() + 1);
        prop_assert!(segalify_inclusion(&n, 3).unwrap().check().ok);
    }

    #[test]
    fn cutting_at_joints_recovers_parts(parts in prop::collection::vec(necklace(), 1..4)) {
        let (j, joints) = join(&parts).unwrap();
        prop_assert_eq!(join_right_adjoint(&j, &joints).unwrap(), parts);
    }

    #[test]
    fn necklace_literals_round_trip(n in necklace()) {
        prop_assert_eq!(n.to_string().parse::<Necklace>().unwrap(), n);
    }

    #[test]
    fn identity_maps_are_isomorphisms(seed in any::<u64>()) {
        let x = Arc::new(dag(seed, 2));
        let id = SSetMap::identity(x);
        prop_assert!(id.check().ok && id.is_isomorphism());
        prop_assert!(is_right_fibration(&id).is_right_fibration);
    }
}
