use proptest::prelude::*;
use uembed::oracle::brute_force_lp;
use uembed::ratgeom::{
    enumerate_faces, optimal_face_is_singleton, reduce_to_vertices, solve_lp, LpProblem, LpStatus,
    Sense,
};
use uembed::{Rat, Scalar, Vector};

fn r(n: i64) -> Rat {
    Rat::from_int(n)
}

fn point(dim: usize) -> impl Strategy<Value = Vector<Rat>> {
    prop::collection::vec(-4i64..=4, dim).prop_map(|c| Vector::from_ints(&c))
}

fn symmetric_cloud(dim: usize) -> impl Strategy<Value = Vec<Vector<Rat>>> {
    prop::collection::vec(point(dim), dim..=dim + 3).prop_map(|pts| {
        let mut all: Vec<_> = pts.into_iter().filter(|p| !p.is_zero()).collect();
        let negs: Vec<_> = all.iter().map(Vector::neg).collect();
        all.extend(negs);
        all
    })
}

/// Standard-form LP `min c·y, M y = b, y ≥ 0` with a bounding row
/// `Σ y + slack = bound` so the feasible set is a polytope.
fn bounded_lp() -> impl Strategy<Value = (Vec<Vec<Rat>>, Vec<Rat>, Vec<Rat>)> {
    (1usize..=2, 2usize..=5).prop_flat_map(|(rows, vars)| {
        (
            prop::collection::vec(prop::collection::vec(-3i64..=3, vars), rows),
            prop::collection::vec(0i64..=3, rows),
            prop::collection::vec(-3i64..=3, vars),
            1i64..=4,
        )
            .prop_map(move |(m, b, c, bound)| {
                let mut m: Vec<Vec<Rat>> = m
                    .into_iter()
                    .map(|row| row.into_iter().map(r).chain([r(0)]).collect())
                    .collect();
                m.push(vec![r(1); vars + 1]);
                let mut b: Vec<Rat> = b.into_iter().map(r).collect();
                b.push(r(bound));
                let c = c.into_iter().map(r).chain([r(0)]).collect();
                (m, b, c)
            })
    })
}

fn to_problem(m: &[Vec<Rat>], b: &[Rat], c: &[Rat]) -> LpProblem<Rat> {
    let mut lp = LpProblem::new(Vector::new(c.to_vec()), Sense::Minimize);
    for (row, rhs) in m.iter().zip(b) {
        lp.add_row(Vector::new(row.clone()), rhs.clone());
    }
    lp
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn reduce_is_idempotent_and_order_free(mut pts in prop::collection::vec(point(2), 1..8)) {
        let once = reduce_to_vertices(&pts).unwrap();
        prop_assert_eq!(reduce_to_vertices(&once).unwrap(), once.clone());
        pts.reverse();
        prop_assert_eq!(reduce_to_vertices(&pts).unwrap(), once);
    }

    #[test]
    fn faces_come_in_antipodal_pairs(cloud in symmetric_cloud(3)) {
        let Ok(verts) = reduce_to_vertices(&cloud) else { return Ok(()); };
        let Ok(faces) = enumerate_faces(&verts) else { return Ok(()); };
        let keys: Vec<Vec<Vector<Rat>>> = faces
            .iter()
            .map(|f| f.vertices.iter().map(|&i| verts[i].clone()).collect())
            .collect();
        for face in &keys {
            let mut minus: Vec<Vector<Rat>> = face.iter().map(Vector::neg).collect();
            minus.sort_by(|a, b| a.lex_cmp(b));
            let found = keys.iter().any(|k| {
                let mut k = k.clone();
                k.sort_by(|a, b| a.lex_cmp(b));
                k == minus
            });
            prop_assert!(found, "no antipodal face for {:?}", face);
        }
    }

    #[test]
    fn lp_value_invariant_under_row_permutation_and_scaling(
        (m, b, c) in bounded_lp(),
        scale in 1i64..=5,
    ) {
        let base = solve_lp(&to_problem(&m, &b, &c)).unwrap();
        let mut pm = m.clone();
        let mut pb = b.clone();
        pm.reverse();
        pb.reverse();
        let permuted = solve_lp(&to_problem(&pm, &pb, &c)).unwrap();
        let scaled_c: Vec<Rat> = c.iter().map(|x| x * r(scale)).collect();
        let scaled = solve_lp(&to_problem(&m, &b, &scaled_c)).unwrap();
        prop_assert_eq!(base.status, permuted.status);
        prop_assert_eq!(base.status, scaled.status);
        if base.status == LpStatus::Optimal {
            prop_assert_eq!(&base.value, &permuted.value);
            prop_assert_eq!(&base.value * r(scale), scaled.value.clone());
            let same_face = optimal_face_is_singleton(&to_problem(&m, &b, &c)).unwrap();
            let scaled_face = optimal_face_is_singleton(&to_problem(&m, &b, &scaled_c)).unwrap();
            prop_assert_eq!(same_face.singleton, scaled_face.singleton);
        }
    }

    #[test]
    fn basic_solutions_are_sparse((m, b, c) in bounded_lp()) {
        let sol = solve_lp(&to_problem(&m, &b, &c)).unwrap();
        if sol.is_optimal() {
            prop_assert!(sol.point.support_size() <= m.len());
        }
    }

    #[test]
    fn singleton_test_matches_vertex_enumeration((m, b, c) in bounded_lp()) {
        let problem = to_problem(&m, &b, &c);
        let sol = solve_lp(&problem).unwrap();
        match brute_force_lp(&m, &b, &c) {
            None => prop_assert_eq!(sol.status, LpStatus::Infeasible),
            Some((value, optimal)) => {
                prop_assert_eq!(&sol.value, &value);
                let check = optimal_face_is_singleton(&problem).unwrap();
                prop_assert_eq!(check.singleton, optimal.len() == 1);
                if let Some((a, b2)) = check.witnesses {
                    prop_assert!(a != b2);
                }
            }
        }
    }
}
