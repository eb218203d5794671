use bkh_core::coloring::count_rainbow_free;
use bkh_core::constructions::{build_corner_sets, odd_coordinate_set, solution_free_ratio_set};
use bkh_core::hypergraph::build_hypergraph;
use bkh_core::oracle::{naive_colorings, naive_cross, naive_solutions, naive_through_point};
use bkh_core::solutions::{count_cross, count_solutions, count_through_point, CountOptions};
use bkh_core::{full_grid, Ambient, Budget, EquationSpec, Error, Grid, Point, PointSet};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn sym(d: usize, n: u32, k: usize, h: usize, r: usize) -> EquationSpec {
    EquationSpec::symmetric(Ambient::Box, d, n, k, h, r).unwrap()
}

#[test]
fn small_line_counts() {
    let s = sym(1, 5, 2, 2, 4);
    let a = full_grid(&s).unwrap();
    let c = count_solutions(&a, &s, &CountOptions::materialized(Budget::default())).unwrap();
    assert_eq!(c.f, 3);
    assert_eq!(c.solutions.unwrap().len(), 3);

    let s = sym(1, 4, 2, 2, 4);
    let g = count_rainbow_free(&full_grid(&s).unwrap(), &s, None, &Budget::default()).unwrap();
    assert_eq!(g.g, 232);
    assert_eq!(g.by_palette_size, vec![0, 4, 84, 144, 0]);
}

#[test]
fn random_planar_sets_agree_with_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for ambient in [Ambient::Box, Ambient::Torus] {
        let s = EquationSpec::symmetric(ambient, 2, 4, 2, 2, 4).unwrap();
        let grid = s.grid().unwrap();
        for _ in 0..6 {
            let ranks: Vec<u32> = (0..grid.size() as u32).filter(|_| rng.gen_bool(0.5)).collect();
            let a = PointSet::from_ranks(grid.clone(), ranks).unwrap();
            let fast = count_solutions(&a, &s, &CountOptions::default()).unwrap();
            assert_eq!(fast.f, naive_solutions(&a, &s).unwrap().len() as u128, "{ambient:?} {}", a.to_tuples());
            if let Some(v) = a.points().first() {
                let through = count_through_point(&a, v, &s, &Budget::default(), false).unwrap();
                assert_eq!(through.count, naive_through_point(&a, v, &s).unwrap().len() as u128);
            }
            if a.len() <= 8 {
                let g = count_rainbow_free(&a, &s, None, &Budget::default()).unwrap();
                assert_eq!(g.g, naive_colorings(&a, &s).unwrap().0);
            }
        }
    }
}

#[test]
fn budgets_fail_loudly() {
    let s = sym(1, 14, 2, 2, 4);
    let a = full_grid(&s).unwrap();
    let err = count_rainbow_free(&a, &s, None, &Budget::new(1_000_000, 10)).unwrap_err();
    assert!(matches!(err, Error::Capacity(_)));
    assert_eq!(err.exit_code(), 3);
}

#[test]
fn set_encodings_round_trip() {
    let grid = Grid::new(Ambient::Box, 2, 5).unwrap();
    let a = PointSet::from_points(grid.clone(), &[Point::new([1, 1]), Point::new([3, 4]), Point::new([5, 5])]).unwrap();
    assert_eq!(PointSet::from_rle(grid.clone(), &a.to_rle()).unwrap(), a);
    assert_eq!(PointSet::from_tuples(grid.clone(), &a.to_tuples()).unwrap(), a);
    assert!(PointSet::from_points(grid, &[Point::new([0, 1])]).is_err());
}

#[test]
fn constructions_are_solution_free() {
    for (groups, d, n) in [(vec![2, 3], 1, 12), (vec![1, 2], 2, 6)] {
        let s = EquationSpec::mixed(Ambient::Box, d, n, groups, 5).unwrap();
        let a = solution_free_ratio_set(&s).unwrap();
        assert!(!a.is_empty());
        assert!(naive_solutions(&a, &s).unwrap().is_empty());
    }
    let s = EquationSpec::mixed(Ambient::Box, 1, 12, vec![1, 2], 3).unwrap();
    let a = odd_coordinate_set(&s).unwrap();
    assert_eq!(a.len(), 6);
    assert!(naive_solutions(&a, &s).unwrap().is_empty());
}

#[test]
fn corner_windows_and_hypergraph() {
    let s = sym(1, 120, 2, 2, 4);
    let cc = build_corner_sets(&Point::new([120]), &s).unwrap();
    assert!(cc.pairwise_disjoint);
    assert_eq!(cc.a_sets[0].size(), 9);

    let s = sym(1, 5, 2, 2, 4);
    let h = build_hypergraph(&full_grid(&s).unwrap(), &s, None, &Budget::default()).unwrap();
    assert_eq!(h.edges, 72);
    let deltas = h.codegrees(&Budget::default()).unwrap();
    assert_eq!(deltas.last().unwrap(), &(4, 1));
}

#[test]
fn even_torus_mixed_and_cross_counts() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mixed = EquationSpec::mixed(Ambient::Torus, 1, 8, vec![1, 2], 3).unwrap();
    let s = EquationSpec::symmetric(Ambient::Torus, 1, 8, 2, 2, 4).unwrap();
    let grid = s.grid().unwrap();
    for _ in 0..20 {
        let ranks: Vec<u32> = (0..8).filter(|_| rng.gen_bool(0.6)).collect();
        let a = PointSet::from_ranks(grid.clone(), ranks).unwrap();
        let f = count_solutions(&a, &mixed, &CountOptions::default()).unwrap().f;
        assert_eq!(f, naive_solutions(&a, &mixed).unwrap().len() as u128);

        let (r1, r2): (Vec<u32>, Vec<u32>) = a.ranks().into_iter().partition(|r| r % 2 == 0);
        let a1 = PointSet::from_ranks(grid.clone(), r1).unwrap();
        let a2 = PointSet::from_ranks(grid.clone(), r2).unwrap();
        assert_eq!(
            count_cross(&a1, &a2, 1, &s, &Budget::default()).unwrap(),
            naive_cross(&a1, &a2, 1, &s).unwrap()
        );
    }
}
