mod common;

use common::{disk_polygon, symmetric_space};
use proptest::prelude::*;
use uembed::embed::{verify_u_embedding, FiniteEmbedding, Verdict};
use uembed::usuit::{build_u_suitable, verify_u_suitable};
use uembed::{Rat, Scalar};

fn dim_and_space() -> impl Strategy<Value = uembed::space::PolyhedralSpace> {
    prop_oneof![
        symmetric_space(2, 2..=8),
        symmetric_space(3, 3..=8),
        symmetric_space(4, 4..=8),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn built_sets_are_proper(space in dim_and_space()) {
        prop_assert!(space.dual_extremes().len() <= 16);
        let e = build_u_suitable(&space, None).unwrap();
        prop_assert!(e.checks.cond_i && e.checks.cond_ii);
        prop_assert!(verify_u_suitable(&space, &e.indices).unwrap().cond_iii);

        let mut minus: Vec<usize> = e.indices.iter().map(|&i| space.antipode(i)).collect();
        minus.sort_unstable();
        prop_assert!(verify_u_suitable(&space, &minus).unwrap().proper());

        // flipping one antipodal pair keeps (i) and (ii)
        let mut flipped = e.indices.clone();
        flipped[0] = space.antipode(flipped[0]);
        flipped.sort_unstable();
        prop_assert!(verify_u_suitable(&space, &flipped).unwrap().proper());
    }

    #[test]
    fn sign_pattern_determines_e(space in symmetric_space(3, 3..=6), k in 1i64..=9) {
        let e = build_u_suitable(&space, None).unwrap();
        let z = e.selector.clone().unwrap();
        let scaled = build_u_suitable(&space, Some(z.scale(&Rat::from_int(k)))).unwrap();
        prop_assert_eq!(&scaled.indices, &e.indices);
        // a small perturbation that keeps every sign
        let gap = space
            .dual_extremes()
            .iter()
            .map(|p| z.dot(p).abs_val())
            .min()
            .unwrap();
        let size = space.dual_extremes().iter().map(|p| p.l1()).max().unwrap();
        let eps = gap / (size * Rat::from_int(2));
        let nudged = z.add(&uembed::Vector::unit(3, 0).scale(&eps));
        prop_assert_eq!(build_u_suitable(&space, Some(nudged)).unwrap().indices, e.indices);
    }
}

#[test]
fn disk_polygons_are_u_embeddable() {
    for m in 3..=12 {
        let space = disk_polygon(m);
        assert_eq!(space.dual_extremes().len(), 2 * m);
        let e = build_u_suitable(&space, None).unwrap();
        assert!(e.checks.proper(), "m = {m}");
        assert_eq!(e.indices.len(), m);
        let u = FiniteEmbedding::build_ue(&space, &e).unwrap();
        let cert = verify_u_embedding(&u, 20, m as u64).unwrap();
        assert_eq!(cert.verdict, Verdict::CertifiedU, "m = {m}");
    }
}
