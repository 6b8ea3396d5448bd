use gorilla_core::oracle;
use gorilla_core::task::{EnvConfig, Layout, Noise, PenaltyKind, SequenceSpec, Simulator};
use proptest::prelude::*;

fn sim() -> Simulator {
    Simulator::new(EnvConfig::default()).unwrap()
}

fn golden() -> Vec<f64> {
    include_str!("golden/layout_8_9_10.txt")
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| l.trim().parse().unwrap())
        .collect()
}

#[test]
fn static_layout_matches_golden() {
    let sim = sim();
    let r = sim.run_layout(&Layout::new(vec![8, 9, 10]).unwrap(), 0).unwrap();
    let g = golden();
    for (got, want) in r.per_button_effort.iter().chain([&r.total_effort]).zip(&g) {
        assert!((got - want).abs() <= 1e-9 * want.abs(), "{got} vs {want}");
    }
    assert!(r.completed());

    // Each button's share equals the effort of its reach from the previous
    // point, with muscles rested at the start of the episode.
    let first = sim.reach_effort(sim.rest(), 8).unwrap().unwrap();
    assert!((first - g[0]).abs() < 1e-9);
}

#[test]
fn unreachable_cell_times_out_and_truncates() {
    let sim = sim();
    let r = sim.run_layout(&Layout::new(vec![0, 16, 17]).unwrap(), 0).unwrap();
    assert!(r.has_penalty(PenaltyKind::Timeout));
    assert!(r.pressed.is_empty());
    assert_eq!(r.penalty_total(), 3.0 * sim.config().penalties.timeout_per_button);
    assert_eq!(r.total_effort, 0.0);
}

#[test]
fn out_of_range_cells_are_rejected_up_front() {
    assert!(Layout::new(vec![3, 18, 2]).is_err());
}

#[test]
fn farther_target_costs_more() {
    // Cells of the bottom row at increasing distance from the rest pose.
    let sim = sim();
    let rest = sim.rest();
    let mut row: Vec<(f64, f64)> = (12..18)
        .filter_map(|c| {
            let e = sim.run_layout(&Layout::new(vec![c]).unwrap(), 0).unwrap();
            e.completed().then(|| (sim.center(c).distance(rest), e.total_effort))
        })
        .collect();
    row.sort_by(|a, b| a.0.total_cmp(&b.0));
    assert!(row.len() >= 2);
    for w in row.windows(2) {
        assert!(w[1].1 >= w[0].1, "{row:?}");
    }
}

fn layouts() -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..18, 1..=3)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deterministic_and_reset_between_episodes(cells in layouts(), s1 in any::<u64>(), s2 in any::<u64>()) {
        let sim = sim();
        let l = Layout::new(cells).unwrap();
        let a = sim.run_layout(&l, s1).unwrap();
        let b = sim.run_layout(&l, s2).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn effort_is_additive_and_reward_algebra_holds(cells in layouts()) {
        let r = sim().run_layout(&Layout::new(cells).unwrap(), 0).unwrap();
        let sum: f64 = r.per_button_effort.iter().sum();
        prop_assert!((r.total_effort - sum).abs() < 1e-12);
        prop_assert!((r.reward - (-r.total_effort - r.penalty_total())).abs() < 1e-9);
    }

    #[test]
    fn overlaps_never_reach_the_motion_model(cells in layouts(), dup in 0usize..3) {
        let mut cells = cells;
        let c = cells[dup % cells.len()];
        cells.push(c);
        let sim = sim();
        let r = sim
            .run_episode(&Layout::new(cells.clone()).unwrap(), &SequenceSpec::in_order(cells.len()), 0, true)
            .unwrap();
        prop_assert!(r.has_penalty(PenaltyKind::Overlap));
        prop_assert_eq!(r.reward, -sim.config().penalties.overlap);
        prop_assert!(r.trace.unwrap().is_empty());
        prop_assert!(r.pressed.is_empty());
    }

    #[test]
    fn noisy_runs_repeat_per_seed(cells in layouts(), seed in any::<u64>()) {
        let noisy = sim().with_noise(Noise::uniform(0.2));
        let l = Layout::new(cells).unwrap();
        prop_assert_eq!(noisy.run_layout(&l, seed).unwrap(), noisy.run_layout(&l, seed).unwrap());
    }
}

#[test]
fn bottom_row_holds_the_three_button_optimum() {
    let sim = sim();
    let runner = gorilla_core::runner::Sequential;
    let table = oracle::enumerate_exhaustive(&sim, 3, &runner).unwrap();
    assert_eq!(table.ranking.len(), 4896);
    assert!(table.best().layout.cells().iter().all(|&c| (12..18).contains(&c)), "{:?}", table.best().layout);
}
