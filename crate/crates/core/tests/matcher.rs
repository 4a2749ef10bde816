mod common;

use std::ops::ControlFlow;

use flatframe::catalog::{lookup, RootVector};
use flatframe::incidence::{self, ColumnBasis, EnumerationOptions, IncidenceMatrix};
use flatframe::matcher::{self, Mode, Status};
use flatframe::oracle;
use flatframe::singular::{self, Frame};
use proptest::prelude::*;

fn matrices(max_rows: usize, max_cols: usize) -> impl Strategy<Value = (Vec<Vec<u8>>, Vec<u32>)> {
    (1..=max_rows, 1..=max_cols, 0.15f64..0.85).prop_flat_map(|(r, c, p)| {
        (
            prop::collection::vec(prop::collection::vec(prop::bool::weighted(p).prop_map(u8::from), c), r),
            prop::collection::vec(1u32..=3, r),
        )
    })
}

fn max_overlap(a: &IncidenceMatrix) -> usize {
    let n = a.rows.len();
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| a.rows[i].bits.intersection(&a.rows[j].bits).count())
        .max()
        .unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn matched_results_verify((rows, demands) in matrices(8, 24)) {
        let a = IncidenceMatrix::from_dense(&rows, Some(demands)).unwrap();
        for mode in [Mode::Faithful, Mode::Repair, Mode::Augmenting] {
            let r = matcher::staged_greedy(&a, mode).unwrap();
            if r.is_matched() {
                prop_assert!(oracle::verify_match(&a, &r));
            } else {
                prop_assert!(r.failure.is_some());
            }
        }
    }

    #[test]
    fn augmenting_is_complete((rows, demands) in matrices(8, 24)) {
        let a = IncidenceMatrix::from_dense(&rows, Some(demands.clone())).unwrap();
        let r = matcher::staged_greedy(&a, Mode::Augmenting).unwrap();
        prop_assert_eq!(r.is_matched(), common::hall_feasible(&rows, &demands));
    }

    #[test]
    fn faithful_stage_accounting((rows, demands) in matrices(8, 24)) {
        let a = IncidenceMatrix::from_dense(&rows, Some(demands)).unwrap();
        let c = max_overlap(&a);
        let r = matcher::staged_greedy(&a, Mode::Faithful).unwrap();
        for pair in r.trace.windows(2) {
            for &(row, n) in &pair[1].remaining {
                let before = pair[0].remaining.iter().find(|&&(k, _)| k == row).unwrap().1;
                prop_assert!(n + c >= before);
            }
        }
        if let Some(f) = r.failure {
            let min_pop = *a.popcounts().iter().min().unwrap();
            prop_assert!((min_pop as i64 - (c * (f.stage - 1)) as i64) < f.demand as i64);
            prop_assert!(f.remaining < f.demand as usize);
        }
    }

    #[test]
    fn repair_never_loses_a_faithful_match((rows, demands) in matrices(8, 24)) {
        let a = IncidenceMatrix::from_dense(&rows, Some(demands)).unwrap();
        let faithful = matcher::staged_greedy(&a, Mode::Faithful).unwrap();
        let repair = matcher::staged_greedy(&a, Mode::Repair).unwrap();
        prop_assert!(!faithful.is_matched() || repair.is_matched());
    }
}

#[test]
fn sl3c_example() {
    let a = IncidenceMatrix::from_dense(&[vec![1, 1, 1, 1, 0, 0], vec![0, 0, 1, 1, 1, 1]], Some(vec![3, 3])).unwrap();
    let r = matcher::staged_greedy(&a, Mode::Faithful).unwrap();
    assert!(oracle::verify_match(&a, &r));
    let json = serde_json::to_value(&r).unwrap();
    for key in ["status", "assignment", "trace", "failure"] {
        assert!(json.get(key).is_some(), "{key}");
    }
}

#[test]
fn sp4_fails_in_every_mode() {
    let d = lookup("Sp(4,R)").unwrap();
    let rays: Vec<Vec<i64>> = singular::maximally_singular_rays(&d).into_iter().map(|r| r.vector).collect();
    let a = incidence::incidence_matrix(&d, &Frame::from_ints(&d, &rays).unwrap()).unwrap();
    assert_eq!(a.n_cols, 4);
    for mode in [Mode::Faithful, Mode::Repair, Mode::Augmenting] {
        assert_eq!(matcher::staged_greedy(&a, mode).unwrap().status, Status::Failed);
    }
}

#[test]
fn z_first_rays_are_distinct() {
    for id in ["SL(6,R)", "SL(7,R)"] {
        let d = lookup(id).unwrap();
        let n = d.rank;
        let lines = singular::singular_lines(&d, 100_000).unwrap();
        for p in 1..=n {
            let opts = EnumerationOptions { size: Some(p), ..Default::default() };
            incidence::for_each_singular_frame(&d, opts, |f| {
                if f.iter().all(|&i| lines[i].q_dim <= 2 * n - 2) {
                    let vs: Vec<RootVector> = f.iter().map(|&i| lines[i].root_vector()).collect();
                    let z = matcher::z_decompose(&d, &vs).unwrap();
                    let mut firsts: Vec<usize> = z.assignment.iter().map(|a| a.first()).collect();
                    firsts.sort_unstable();
                    firsts.dedup();
                    assert_eq!(firsts.len(), p, "{id} {f:?}");
                }
                ControlFlow::Continue(())
            })
            .unwrap();
        }
    }
}

#[test]
fn two_phase_on_every_sl_frame() {
    for id in ["SL(6,R)", "SL(7,R)"] {
        let d = lookup(id).unwrap();
        let e = incidence::enumerate_singular_frames(&d, EnumerationOptions::default()).unwrap();
        let basis = ColumnBasis::new(&d);
        for i in 0..e.frames.len() {
            let f = e.frame(&d, i);
            let r = matcher::sl_two_phase(&d, &f).unwrap();
            assert!(r.hypothesis_failure.is_none(), "{id}");
            assert!(r.result.is_matched(), "{id} frame {i}");
            let a = incidence::matrix_from_lines(&d, &basis, &e.lines, &e.frames[i]);
            assert!(oracle::verify_match(&a, &r.result));
        }
    }
}

#[test]
fn two_phase_minimal_frame_uses_phase_one_only() {
    let d = lookup("SL(6,R)").unwrap();
    let z = matcher::z_rays(5);
    let f = Frame::from_ints(&d, &z[..5]).unwrap();
    let r = matcher::sl_two_phase(&d, &f).unwrap();
    assert_eq!(r.groups[0].len(), 5);
    assert!(r.groups[1].is_empty() && r.groups[2].is_empty());
    assert!(r.result.is_matched() && !r.escalated);
    assert!(r.result.trace.iter().all(|s| s.exchanges.is_empty()));
}

#[test]
fn two_phase_falls_back_outside_hypotheses() {
    let d = lookup("SL(6,R)").unwrap();
    let f = Frame::from_ints(&d, &[vec![5, -1, -1, -1, -1, -1], vec![1, 2, 0, 0, -1, -2], vec![0, 1, -1, 0, 0, 0], vec![0, 0, 1, -1, 0, 0], vec![0, 0, 0, 1, -1, 0]]).unwrap();
    let r = matcher::sl_two_phase(&d, &f).unwrap();
    assert!(r.hypothesis_failure.as_deref().unwrap().contains("not maximally singular"));
    assert_eq!(r.result.mode, Mode::Augmenting);
    let small = lookup("SL(5,R)").unwrap();
    let rays: Vec<Vec<i64>> = singular::maximally_singular_rays(&small).into_iter().map(|r| r.vector).collect();
    let r = matcher::sl_two_phase(&small, &Frame::from_ints(&small, &rays).unwrap()).unwrap();
    assert!(r.hypothesis_failure.is_some());
    assert!(matcher::sl_two_phase(&lookup("Sp(6,R)").unwrap(), &Frame::from_ints(&lookup("Sp(6,R)").unwrap(), &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap()).is_err());
}

#[test]
fn z_decompose_rejects_other_vectors() {
    let d = lookup("SL(6,R)").unwrap();
    let v = RootVector::from_ints(&[1, 1, 1, -1, -1, -1]);
    assert_eq!(matcher::z_decompose(&d, &[v]), Err(matcher::MatchError::NotZExpressible(0)));
}
