use gorilla_core::policy::{self, greedy_layout, overlap_probability, sample_layout, Observation, Policy};
use gorilla_core::rewards::{episode_reward_freq, usage_frequencies};
use gorilla_core::runner::Sequential;
use gorilla_core::seed;
use gorilla_core::task::{motion_reward, validate_layout, Layout, LayoutCheck, CELLS};
use gorilla_core::train::{self, advantages, Episode, Evaluation, LayoutEnv, TrainConfig};
use proptest::prelude::*;

/// Every button wants cell 9; sharing it costs the overlap penalty.
struct Crowded;

impl LayoutEnv for Crowded {
    fn buttons(&self) -> usize {
        3
    }

    fn evaluate(&self, layout: &Layout, _: Option<&[f64]>, _: Episode) -> gorilla_core::Result<Evaluation> {
        let objective = match validate_layout(layout) {
            LayoutCheck::Ok => layout.cells().iter().map(|&c| (c as f64 - 9.0).abs()).sum(),
            LayoutCheck::Overlap(_) => 150.0,
        };
        Ok(Evaluation { reward: -objective, objective })
    }
}

fn quick() -> TrainConfig {
    TrainConfig {
        episodes: 32 * 300,
        learning_rate: 0.05,
        ..TrainConfig::default()
    }
}

#[test]
fn motion_reward_cases() {
    let close = |a: f64, b: f64| (a - b).abs() <= 1e-12;
    assert!(close(motion_reward(true, 0.0, 0.0, false), 5.0));
    assert!(close(motion_reward(true, 0.0, 0.0, true), 20.0));
    assert!(close(motion_reward(false, 0.0, 0.0, false), 0.0));
    assert!(close(motion_reward(false, 1.0, 0.0, false), (-1.0f64).exp() - 1.0));
    assert!(close(motion_reward(false, 0.0, 30.0, false), -0.3));
    assert!(close(motion_reward(true, 0.5, 12.0, true), 20.0 + (-0.5f64).exp() - 1.0 - 0.12));
    // Past d ≈ 37, e^(−d) − 1 rounds to exactly −1 in f64.
    for d in [0.0, 1e-9, 0.3, 2.0, 20.0] {
        let shaping = motion_reward(false, d, 0.0, false);
        assert!(shaping <= 0.0 && shaping > -1.0);
    }
}

#[test]
fn uniform_heads_sample_every_cell_evenly() {
    let policy = Policy::uniform(3);
    let obs = Observation::initial(3, false);
    let mut rng = seed::rng(5);
    let n = 36_000;
    let mut counts = vec![[0usize; CELLS]; 3];
    for _ in 0..n {
        let (l, _) = sample_layout(&policy, &obs, &mut rng);
        for (h, &c) in l.cells().iter().enumerate() {
            counts[h][c] += 1;
        }
    }
    let p = 1.0 / CELLS as f64;
    let sd = (n as f64 * p * (1.0 - p)).sqrt();
    for head in &counts {
        for &k in head {
            assert!((k as f64 - n as f64 * p).abs() <= 3.0 * sd, "{head:?}");
        }
    }
    assert_eq!(greedy_layout(&policy, &obs).cells(), &[0, 0, 0]);
}

#[test]
fn concentrated_policy_is_greedy_on_its_mode() {
    let mut logits = vec![0.0; 3 * CELLS];
    for (h, c) in [17, 16, 15].into_iter().enumerate() {
        logits[h * CELLS + c] = 30.0;
    }
    let p = Policy::from_logits(3, logits).unwrap();
    assert_eq!(greedy_layout(&p, &Observation::initial(3, false)).cells(), &[17, 16, 15]);
}

#[test]
fn training_keeps_heads_normalized_and_drives_out_overlaps() {
    let obs = Observation::initial(3, false);
    let mut overlap = vec![overlap_probability(&Policy::uniform(3), &obs)];
    let out = train::train(&Crowded, &quick(), &Sequential, |p, stats| {
        for head in p.probabilities(&obs) {
            assert!((head.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
            assert!(head.iter().all(|&x| x > 0.0));
        }
        if (stats.batch + 1) % 30 == 0 {
            overlap.push(overlap_probability(p, &obs));
        }
    })
    .unwrap();
    // Once the policy has converged, sampling noise moves the residual
    // overlap mass by a few 1e-6; that floor is the only slack allowed.
    for w in overlap.windows(2) {
        assert!(w[1] <= w[0] + 1e-4, "{overlap:?}");
    }
    assert!(*overlap.last().unwrap() < 0.01, "{overlap:?}");
    assert!(greedy_layout(&out.policy, &out.final_obs).is_valid());
}

#[test]
fn seeded_training_repeats_bit_for_bit() {
    let cfg = TrainConfig { episodes: 32 * 40, ..quick() };
    let a = train::train(&Crowded, &cfg, &Sequential, |_, _| {}).unwrap();
    let b = train::train(&Crowded, &cfg, &Sequential, |_, _| {}).unwrap();
    assert_eq!(a.policy.params(), b.policy.params());
    assert_eq!(a.curve, b.curve);
}

fn distribution(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], n).prop_filter_map("empty", |w| {
        let s: f64 = w.iter().sum();
        (s > 1e-3).then(|| w.iter().map(|x| x / s).collect())
    })
}

proptest! {
    #[test]
    fn softmax_sums_to_one(logits in prop::collection::vec(-50.0..50.0f64, 1..40)) {
        let p = policy::softmax(&logits);
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() <= 1e-9);
        prop_assert!(p.iter().all(|&x| x > 0.0));
    }

    #[test]
    fn advantages_ignore_shift_and_scale(
        rewards in prop::collection::vec(-100.0..100.0f64, 2..64),
        shift in -1e3..1e3f64,
        scale in 0.01..100.0f64,
    ) {
        let a = advantages(&rewards);
        let moved: Vec<f64> = rewards.iter().map(|r| r + shift).collect();
        let scaled: Vec<f64> = rewards.iter().map(|r| r * scale).collect();
        for (x, y) in a.iter().zip(advantages(&moved)) {
            prop_assert!((x - y).abs() <= 1e-6 * (1.0 + x.abs()));
        }
        for (x, y) in a.iter().zip(advantages(&scaled)) {
            prop_assert!((x - y).abs() <= 1e-6 * (1.0 + x.abs()));
        }
    }

    #[test]
    fn frequency_reward_properties(
        efforts in prop::collection::vec(0.0..500.0f64, 5),
        pi in distribution(5),
        which in 0usize..5,
        bump in 1e-3..100.0f64,
    ) {
        let r = episode_reward_freq(&efforts, &pi).unwrap();
        prop_assert!(r > 0.0 && r <= 1.0);
        let mut more = efforts.clone();
        more[which] += bump;
        let r2 = episode_reward_freq(&more, &pi).unwrap();
        if pi[which] > 0.0 {
            prop_assert!(r2 < r);
        } else {
            prop_assert_eq!(r2, r);
        }
    }

    #[test]
    fn frequencies_normalize(counts in prop::collection::vec(0usize..20, 1..8)) {
        let f = usage_frequencies(&counts);
        let s: f64 = f.iter().sum();
        if counts.iter().sum::<usize>() == 0 {
            prop_assert!(f.iter().all(|&x| x == 0.0));
        } else {
            prop_assert!((s - 1.0).abs() < 1e-12);
        }
    }
}
