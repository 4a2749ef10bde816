mod common;

use flatframe::catalog::lookup;
use flatframe::incidence::{self, IncidenceMatrix};
use flatframe::singular::Frame;
use num_rational::Ratio;
use proptest::prelude::*;

fn square(max: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    (2..=max).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(-5i64..=5, n), n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn det_expansion_is_the_determinant(m in square(6), cut in 1usize..6) {
        let n = m.len();
        let n1 = cut.min(n - 1);
        let got = incidence::det_expansion(&m, n1, n - n1).unwrap();
        prop_assert_eq!(got, Ratio::from_integer(common::cofactor_det(&m)));
    }

    #[test]
    fn split_finds_invertible_blocks(m in square(6), cut in 1usize..6) {
        prop_assume!(common::cofactor_det(&m) != 0);
        let n = m.len();
        let n1 = cut.min(n - 1);
        let tau = incidence::split_product_frame(&m, n1).unwrap();
        let mut sorted = tau.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..n).collect::<Vec<_>>());
        let first: Vec<Vec<i64>> = tau[..n1].iter().map(|&i| m[i][..n1].to_vec()).collect();
        let second: Vec<Vec<i64>> = tau[n1..].iter().map(|&i| m[i][n1..].to_vec()).collect();
        prop_assert!(common::cofactor_det(&first) != 0);
        prop_assert!(common::cofactor_det(&second) != 0);
    }

    #[test]
    fn matrix_json_round_trips(
        rows in (1usize..6, 1usize..12).prop_flat_map(|(r, c)| prop::collection::vec(prop::collection::vec(0u8..=1, c), r)),
        demand in 1u32..4,
    ) {
        let a = IncidenceMatrix::from_dense(&rows, Some(vec![demand; rows.len()])).unwrap();
        let b = IncidenceMatrix::from_json(&a.to_json()).unwrap();
        prop_assert_eq!(b.dense(), rows);
        prop_assert_eq!(b.demands, a.demands);
    }
}

#[test]
fn det_normalization_two_by_two() {
    assert_eq!(incidence::det_expansion(&[vec![1, 2], vec![3, 4]], 1, 1).unwrap(), Ratio::from_integer(-2));
}

#[test]
fn split_example() {
    let v = vec![vec![0, 1, 0], vec![1, 0, 0], vec![0, 0, 1]];
    let tau = incidence::split_product_frame(&v, 1).unwrap();
    assert!(v[tau[0]][0] != 0);
    // Vectors are the columns of [[1,0,1],[0,1,0],[1,0,0]].
    let cols = vec![vec![1, 0, 1], vec![0, 1, 0], vec![1, 0, 0]];
    let tau = incidence::split_product_frame(&cols, 2).unwrap();
    let first: Vec<Vec<i64>> = tau[..2].iter().map(|&i| cols[i][..2].to_vec()).collect();
    assert_ne!(common::cofactor_det(&first), 0);
    assert_ne!(cols[tau[2]][2], 0);
}

#[test]
fn dependent_frames_have_no_split() {
    let v = vec![vec![1, 2], vec![2, 4]];
    assert!(incidence::split_product_frame(&v, 1).is_err());
}

#[test]
fn sl3c_frame_matrix() {
    let d = lookup("SL(3,C)").unwrap();
    let rays: Vec<Vec<i64>> = flatframe::singular::maximally_singular_rays(&d).into_iter().map(|r| r.vector).collect();
    let a = incidence::incidence_matrix(&d, &Frame::from_ints(&d, &rays).unwrap()).unwrap();
    assert_eq!(a.n_cols, 6);
    assert_eq!(a.popcounts(), vec![4, 4]);
    assert_eq!(a.nonzero_columns(), 6);
}

#[test]
fn product_frames_split_by_factor() {
    let d = lookup("SL(3,R)×G2(2)").unwrap();
    let f = flatframe::singular::maximally_singular_rays(&d);
    let frame = Frame::from_ints(&d, &f.iter().map(|r| r.vector.clone()).collect::<Vec<_>>()).unwrap();
    let split = incidence::split_descriptor_frame(&d, &frame).unwrap();
    assert_eq!(split.len(), 2);
    assert_eq!(split.iter().map(Vec::len).collect::<Vec<_>>(), vec![2, 2]);
}

#[test]
fn malformed_matrices_are_rejected() {
    assert!(IncidenceMatrix::from_dense(&[vec![1, 0], vec![1]], None).is_err());
    assert!(IncidenceMatrix::from_dense(&[vec![1, 2]], None).is_err());
    assert!(IncidenceMatrix::from_dense(&[vec![1, 1]], Some(vec![0])).is_err());
}
