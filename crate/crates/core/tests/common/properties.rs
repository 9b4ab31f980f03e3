//! Randomised invariants. Each property runs `cases` generated inputs and
//! returns the shrunk counterexample on failure.

use std::f64::consts::PI;

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

use placenav::bvc::{gaussian, BvcLayer};
use placenav::navigator::{
    action_angle, decide, evaluate, fuse, heading_clearance, mixing_weights, normalize_profile, obstacle_mask,
    variation, FusionConfig, Mode, ModeState, ScaleView,
};
use placenav::orientation::{basis_headings, nearest_basis_heading, HeadDirectionLayer};
use placenav::place::{ActivitySnapshot, AdjacencyTensor, PlaceLayer, PlaceParams, PlasticityConfig, TraceState};
use placenav::valuation::{ReplayBuffer, RewardCell, TdConfig};
use placenav::world::{raycast, step_agent, wrap_signed, AgentState, EnvironmentSpec, LidarScan, Pose, Segment, Vec2};

pub const CASES: u32 = 1000;

fn check<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn params() -> PlaceParams {
    PlaceParams {
        tau_p: 3.0,
        gamma_pb: 0.3,
        gamma_pp: 0.5,
        psi: 1.5,
    }
}

fn plasticity(alpha: f64, tau_w: f64) -> PlasticityConfig {
    PlasticityConfig {
        tau_w_pb: tau_w,
        alpha_pb: alpha,
        p_pb: 0.25,
        tau_m: 4.0,
        tau_w_pp: 1.0,
        dt: 1.0,
    }
}

/// Rates with roughly a third of the cells silent.
fn sparse_rates(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(prop_oneof![1 => Just(0.0), 2 => 0.0..1.0f64], n)
}

fn square(size: f64) -> EnvironmentSpec {
    EnvironmentSpec::open(
        size,
        size,
        Pose {
            position: Vec2::new(1.0, 1.0),
            heading: 0.0,
        },
        Vec2::new(size - 1.0, size - 1.0),
        0.5,
    )
}

fn open_scan(n: usize, range: f64) -> LidarScan {
    LidarScan {
        ranges: vec![range; n],
        bearings: (0..n).map(|j| 2.0 * PI * j as f64 / n as f64).collect(),
        max_range: 2.0 * range,
    }
}

pub fn adjacency_updates_stay_antisymmetric(cases: u32) -> Result<(), String> {
    let strategy = (
        2usize..10,
        prop::collection::vec(sparse_rates(10), 1..4),
        prop::collection::vec(0.0..1.0f64, 10),
        prop::collection::vec(prop_oneof![Just(0.0), 0.0..1.0f64], 8),
        0.5..20.0f64,
    );
    check(cases, strategy, |(n, seed_rates, trace_pc, trace_hd, tau)| {
        let mut w = AdjacencyTensor::new(8, n);
        let traces = TraceState {
            pc: trace_pc[..n].to_vec(),
            hd: trace_hd,
        };
        for rates in &seed_rates {
            w.update(&rates[..n], &traces, 1.0, tau);
        }
        for k in 0..8 {
            for i in 0..n {
                prop_assert_eq!(w.get(k, i, i), 0.0);
                for j in 0..n {
                    prop_assert_eq!(w.get(k, i, j), -w.get(k, j, i));
                }
            }
        }
        Ok(())
    })
}

pub fn oja_fixed_point_is_stationary(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(0.0..1.0f64, 1..24),
        0.05..1.0f64,
        0.1..2.0f64,
        1.0..500.0f64,
    );
    check(cases, strategy, |(vb, vp, alpha, tau_w)| {
        let mut layer = PlaceLayer::new(1, vb.len(), params(), 1.0, 0);
        layer.w_pb = vb.iter().map(|b| alpha * b / vp).collect();
        layer.rates = vec![vp];
        let before = layer.w_pb.clone();
        layer.oja_update(&vb, 1.0, &plasticity(alpha, tau_w));
        for (a, b) in layer.w_pb.iter().zip(&before) {
            prop_assert!((a - b).abs() <= 1e-12 * b.abs().max(1.0), "{} vs {}", a, b);
        }
        Ok(())
    })
}

pub fn oja_weights_stay_bounded(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(prop::collection::vec(0.0..1.0f64, 6), 1..40),
        prop::collection::vec(0.1..1.0f64, 40),
        prop::collection::vec(0.0..1.0f64, 6),
        0.2..2.0f64,
        2.0..200.0f64,
    );
    check(cases, strategy, |(patterns, rates, w0, alpha, tau_w)| {
        let mut layer = PlaceLayer::new(1, 6, params(), 1.0, 0);
        layer.w_pb = w0.clone();
        let cfg = plasticity(alpha, tau_w);
        // each step mixes w towards α·v_b/v_p, so the weights never leave
        // [0, max(w₀, α / min v_p)]
        let bound = w0.iter().copied().fold(alpha / 0.1, f64::max);
        for (vb, &vp) in patterns.iter().zip(&rates) {
            layer.rates = vec![vp];
            layer.oja_update(vb, 1.0, &cfg);
            for &w in &layer.w_pb {
                prop_assert!((0.0..=bound + 1e-12).contains(&w), "w = {}, bound {}", w, bound);
            }
        }
        Ok(())
    })
}

pub fn traces_decay_geometrically_without_input(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(0.0..1.0f64, 1..20),
        prop::collection::vec(0.0..1.0f64, 8),
        1.0..50.0f64,
        1usize..30,
    );
    check(cases, strategy, |(pc, hd, tau, steps)| {
        let mut t = TraceState { pc: pc.clone(), hd };
        let silent_pc = vec![0.0; pc.len()];
        let silent_hd = vec![0.0; 8];
        let mut prev = t.clone();
        for _ in 0..steps {
            t.step(&silent_pc, &silent_hd, 1.0, tau);
            for (now, was) in t.pc.iter().chain(&t.hd).zip(prev.pc.iter().chain(&prev.hd)) {
                prop_assert!(*now >= 0.0 && *now <= *was);
                prop_assert!((now - was * (1.0 - 1.0 / tau)).abs() <= 1e-15);
            }
            prev = t.clone();
        }
        Ok(())
    })
}

pub fn place_rates_stay_in_unit_interval(cases: u32) -> Result<(), String> {
    let strategy = (
        1usize..30,
        1usize..20,
        prop::collection::vec(0.0..5.0f64, 30),
        any::<u64>(),
        (0.0..1.0f64, 0.0..2.0f64, 0.1..10.0f64),
        1usize..10,
    );
    check(cases, strategy, |(n_b, n_p, bvc, seed, (gamma_pb, gamma_pp, psi), steps)| {
        let p = PlaceParams {
            tau_p: 3.0,
            gamma_pb,
            gamma_pp,
            psi,
        };
        let mut layer = PlaceLayer::new(n_p, n_b, p, 0.5, seed);
        for _ in 0..steps {
            layer.step(&bvc[..n_b], 1.0);
            for &v in &layer.rates {
                prop_assert!((0.0..=1.0).contains(&v));
            }
        }
        Ok(())
    })
}

pub fn mixing_weights_sum_to_one(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(0.0..7.0f64, 1..6), 0.1..7.0f64, 0usize..6);
    check(cases, strategy, |(mut v, lead, at)| {
        let i = at % v.len();
        v[i] = lead;
        let alpha = mixing_weights(&v, 1e-4);
        let total: f64 = alpha.iter().sum();
        prop_assert!((1.0 - 1e-3..=1.0).contains(&total), "Σα = {}", total);
        prop_assert!(alpha.iter().all(|&a| a >= 0.0));
        Ok(())
    })
}

pub fn action_angle_ignores_positive_scaling(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(0.0..1.0f64, 8), 1e-3..1e3f64);
    check(cases, strategy, |(q, c)| {
        let scaled: Vec<f64> = q.iter().map(|x| c * x).collect();
        // near-degenerate resultants may land either side of the cut-off
        // after scaling; only the direction of a clear resultant is compared
        if let (Some(a), Some(b)) = (action_angle(&q), action_angle(&scaled)) {
            let d = (a - b).abs();
            prop_assert!(d.min(2.0 * PI - d) < 1e-9, "{} vs {}", a, b);
        }
        Ok(())
    })
}

pub fn decide_leaves_every_scale_untouched(cases: u32) -> Result<(), String> {
    let strategy = (
        2usize..8,
        prop::collection::vec((0usize..8, 0usize..8, 0usize..8, -1.0..1.0f64), 0..40),
        sparse_rates(8),
        prop::collection::vec(0.0..1.0f64, 8),
        0.1..5.0f64,
    );
    check(cases, strategy, |(n, entries, rates, w, range)| {
        let mut adj = AdjacencyTensor::new(8, n);
        for &(k, i, j, x) in &entries {
            if i % n != j % n {
                adj.set(k, i % n, j % n, x);
            }
        }
        let reward = RewardCell {
            weights: w[..n].to_vec(),
            epsilon: 1e-4,
            cap: 10.0,
        };
        let rates = rates[..n].to_vec();
        let (adj0, reward0, rates0) = (adj.clone(), reward.clone(), rates.clone());
        let views = [ScaleView {
            adjacency: &adj,
            reward: &reward,
            rates: &rates,
        }];
        let scan = open_scan(72, range);
        let cfg = FusionConfig::default();
        let first = evaluate(&views, &scan, &cfg);
        let mut mode = ModeState::new(Mode::Exploiting);
        let (_, profile) = decide(&views, &scan, &mut mode, &cfg, 10);
        prop_assert_eq!(&profile, &first);
        prop_assert_eq!(&adj, &adj0);
        prop_assert_eq!(&reward, &reward0);
        prop_assert_eq!(&rates, &rates0);
        Ok(())
    })
}

pub fn replay_credit_falls_with_replay_distance(cases: u32) -> Result<(), String> {
    let strategy = (2usize..30, 0.5..50.0f64, 0.05..1.0f64);
    check(cases, strategy, |(len, tau_r, rate)| {
        // the trajectory visits cell t at step t, one cell at a time
        let mut buf = ReplayBuffer::new(64);
        for t in 0..len {
            let mut v = vec![0.0; len];
            v[t] = rate;
            buf.record(ActivitySnapshot::from_dense(t as u64, &v));
        }
        let mut cell = RewardCell::new(len, 10.0);
        cell.reverse_replay(&buf, tau_r);
        prop_assert_eq!(cell.weights[len - 1], 1.0);
        for t in 1..len {
            prop_assert!(cell.weights[t - 1] < cell.weights[t]);
        }
        Ok(())
    })
}

pub fn activation_is_invariant_to_rate_scaling(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(0.0..1.0f64, 1..20),
        prop::collection::vec(0.0..1.0f64, 20),
        0.01..100.0f64,
    );
    check(cases, strategy, |(w, v, c)| {
        let n = w.len();
        let v = &v[..n];
        prop_assume!(v.iter().sum::<f64>() * c.min(1.0) > 1e-3);
        let cell = RewardCell {
            weights: w,
            epsilon: 1e-4,
            cap: 100.0,
        };
        let scaled: Vec<f64> = v.iter().map(|x| c * x).collect();
        let (a, b) = (cell.activation(v), cell.activation(&scaled));
        prop_assert!((a - b).abs() <= 1e-12 * a.abs() + 1e-15, "{} vs {}", a, b);
        Ok(())
    })
}

pub fn raycast_ignores_heading(cases: u32) -> Result<(), String> {
    let strategy = (0.05..9.95f64, 0.05..9.95f64, 0.0..(2.0 * PI), 0.0..(2.0 * PI));
    let env = square(10.0);
    check(cases, strategy, |(x, y, h1, h2)| {
        let p = Vec2::new(x, y);
        let a = raycast(&env, &AgentState::at(p, h1), 72, 20.0).unwrap();
        let b = raycast(&env, &AgentState::at(p, h2), 72, 20.0).unwrap();
        prop_assert_eq!(a, b);
        Ok(())
    })
}

pub fn raycast_mirrors_with_the_arena(cases: u32) -> Result<(), String> {
    let env = square(10.0);
    check(cases, (0.05..9.95f64, 0.05..9.95f64), |(x, y)| {
        // reflecting x ↦ W − x maps bearing θ to π − θ
        let n = 72;
        let a = raycast(&env, &AgentState::at(Vec2::new(x, y), 0.0), n, 20.0).unwrap();
        let b = raycast(&env, &AgentState::at(Vec2::new(10.0 - x, y), 0.0), n, 20.0).unwrap();
        for j in 0..n {
            let m = (n / 2 + n - j) % n;
            prop_assert!(
                (a.ranges[j] - b.ranges[m]).abs() <= 1e-9,
                "beam {}: {} vs {}",
                j,
                a.ranges[j],
                b.ranges[m]
            );
        }
        Ok(())
    })
}

pub fn raycast_quarter_turn_symmetry(cases: u32) -> Result<(), String> {
    check(cases, (1usize..40, 2.0..30.0f64), |(quarter, size)| {
        let n = 4 * quarter;
        let env = square(size);
        let centre = Vec2::new(size / 2.0, size / 2.0);
        let scan = raycast(&env, &AgentState::at(centre, 0.0), n, 2.0 * size).unwrap();
        for j in 0..n {
            let r = scan.ranges[(j + n / 4) % n];
            prop_assert!((scan.ranges[j] - r).abs() <= 1e-9 * size, "beam {}: {} vs {}", j, scan.ranges[j], r);
        }
        Ok(())
    })
}

fn cluttered() -> EnvironmentSpec {
    let mut env = square(10.0);
    env.obstacles = vec![
        Segment::new(3.0, 2.0, 3.0, 7.0),
        Segment::new(5.0, 5.0, 8.0, 8.0),
        Segment::new(6.0, 1.0, 9.0, 1.5),
    ];
    env
}

pub fn steps_keep_the_margin(cases: u32) -> Result<(), String> {
    let env = cluttered();
    let strategy = (
        prop::collection::vec(0.0..(2.0 * PI), 1..60),
        0.02..0.5f64,
        0.01..0.2f64,
        (0.3..9.7f64, 0.3..9.7f64),
    );
    check(cases, strategy, |(headings, step_len, margin, (x, y))| {
        let start = Vec2::new(x, y);
        prop_assume!(env.clearance(start) >= margin);
        let mut s = AgentState::at(start, 0.0);
        for &h in &headings {
            let next = step_agent(&env, &s, h, step_len, margin);
            prop_assert!(env.contains(next.position));
            prop_assert!(env.clearance(next.position) >= margin - 1e-9);
            s = next;
        }
        Ok(())
    })
}

pub fn steps_are_full_or_stop_at_the_margin(cases: u32) -> Result<(), String> {
    let env = cluttered();
    let strategy = (0.0..(2.0 * PI), 0.02..0.5f64, 0.01..0.2f64, (0.3..9.7f64, 0.3..9.7f64));
    check(cases, strategy, |(h, step_len, margin, (x, y))| {
        let start = Vec2::new(x, y);
        prop_assume!(env.clearance(start) >= margin + 1e-6);
        let next = step_agent(&env, &AgentState::at(start, 0.0), h, step_len, margin);
        let travelled = (next.position - start).norm();
        prop_assert!((next.velocity.norm() - travelled).abs() <= 1e-12);
        if (travelled - step_len).abs() > 1e-9 {
            prop_assert!(travelled < step_len);
            prop_assert!((env.clearance(next.position) - margin).abs() <= 1e-6, "stopped short at clearance {}", env.clearance(next.position));
        }
        Ok(())
    })
}

pub fn head_direction_rotates_with_velocity(cases: u32) -> Result<(), String> {
    let hd = HeadDirectionLayer::new(8, 0.0);
    check(cases, (-2.0..2.0f64, -2.0..2.0f64, 1usize..8), |(x, y, shift)| {
        let v = Vec2::new(x, y);
        let base = hd.rates(v);
        let a = shift as f64 * PI / 4.0;
        let rotated = hd.rates(Vec2::new(x * a.cos() - y * a.sin(), x * a.sin() + y * a.cos()));
        for d in 0..8 {
            prop_assert!((rotated[(d + shift) % 8] - base[d]).abs() <= 1e-12);
        }
        let speed = v.norm();
        prop_assert!(base.iter().all(|&r| (0.0..=speed + 1e-12).contains(&r)));
        Ok(())
    })
}

pub fn basis_headings_are_their_own_nearest(cases: u32) -> Result<(), String> {
    check(cases, (2usize..64, 0usize..64), |(n, d)| {
        let d = d % n;
        prop_assert_eq!(nearest_basis_heading(basis_headings(n)[d], n), d);
        Ok(())
    })
}

fn random_scan() -> impl Strategy<Value = LidarScan> {
    prop::collection::vec((0.05..8.0f64, 0.0..(2.0 * PI)), 1..40).prop_map(|beams| LidarScan {
        ranges: beams.iter().map(|b| b.0).collect(),
        bearings: beams.iter().map(|b| b.1).collect(),
        max_range: 8.0,
    })
}

pub fn bvc_rates_ignore_beam_order(cases: u32) -> Result<(), String> {
    let layer = BvcLayer::grid(4, 3, 6.0, 0.7, 0.3, 5.0);
    let strategy = random_scan().prop_flat_map(|scan| {
        let n = scan.len();
        (Just(scan), Just((0..n).collect::<Vec<usize>>()).prop_shuffle())
    });
    check(cases, strategy, |(scan, order)| {
        let shuffled = LidarScan {
            ranges: order.iter().map(|&j| scan.ranges[j]).collect(),
            bearings: order.iter().map(|&j| scan.bearings[j]).collect(),
            max_range: scan.max_range,
        };
        for (a, b) in layer.rates(&scan).iter().zip(layer.rates(&shuffled)) {
            prop_assert!((a - b).abs() <= 1e-12 * a.abs().max(1e-300), "{} vs {}", a, b);
        }
        Ok(())
    })
}

pub fn bvc_norm_scales_inversely(cases: u32) -> Result<(), String> {
    check(cases, (random_scan(), 0.1..100.0f64), |(scan, norm)| {
        let one = BvcLayer::grid(4, 3, 6.0, 0.7, 0.3, norm).rates(&scan);
        let two = BvcLayer::grid(4, 3, 6.0, 0.7, 0.3, 2.0 * norm).rates(&scan);
        for (a, b) in one.iter().zip(&two) {
            prop_assert_eq!(*b, *a / 2.0);
        }
        Ok(())
    })
}

pub fn bvc_sigma_derivative_matches_analytic(cases: u32) -> Result<(), String> {
    check(cases, (random_scan(), 0.3..4.0f64), |(scan, sigma)| {
        let rate = |s: f64| BvcLayer::grid(1, 1, 3.0, s, 0.4, 1.0).rates(&scan)[0];
        // d/dσ G(x; σ) = G(x; σ)·(x² − σ²)/σ³
        let analytic: f64 = scan
            .ranges
            .iter()
            .zip(&scan.bearings)
            .map(|(&r, &b)| {
                let x = r - 3.0;
                gaussian(x, sigma) * (x * x - sigma * sigma) / sigma.powi(3) * gaussian(wrap_signed(b), 0.4)
            })
            .sum();
        let h = 1e-5 * sigma;
        let numeric = (rate(sigma + h) - rate(sigma - h)) / (2.0 * h);
        prop_assume!(analytic.abs() > 1e-6);
        prop_assert!((numeric - analytic).abs() <= 1e-4 * analytic.abs(), "{} vs {}", numeric, analytic);
        Ok(())
    })
}

pub fn replay_peak_update_is_one(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(sparse_rates(12), 1..20), 0.5..30.0f64);
    check(cases, strategy, |(snaps, tau_r)| {
        prop_assume!(snaps.iter().any(|v| v.iter().any(|&x| x > 0.0)));
        let mut buf = ReplayBuffer::new(64);
        for (t, v) in snaps.iter().enumerate() {
            buf.record(ActivitySnapshot::from_dense(t as u64, v));
        }
        let mut cell = RewardCell::new(12, 10.0);
        cell.reverse_replay(&buf, tau_r);
        let peak = cell.weights.iter().copied().fold(0.0, f64::max);
        prop_assert_eq!(peak, 1.0);
        Ok(())
    })
}

pub fn td_error_never_grows(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec(0.0..1.0f64, 1..10),
        prop::collection::vec(0.0..2.0f64, 10),
        0.0..2.0f64,
        0.01..1.0f64,
    );
    check(cases, strategy, |(v, w, reward, eta_frac)| {
        let norm2: f64 = v.iter().map(|x| x * x).sum();
        prop_assume!(norm2 > 1e-6);
        let cfg = TdConfig {
            eta: eta_frac * 2.0 / norm2 * 0.999,
            reward,
        };
        let mut cell = RewardCell::new(v.len(), 10.0);
        cell.weights = w[..v.len()].to_vec();
        let err = |c: &RewardCell| (reward - c.weights.iter().zip(&v).map(|(a, b)| a * b).sum::<f64>()).abs();
        let mut last = err(&cell);
        for _ in 0..30 {
            cell.td_update(&v, &cfg);
            let now = err(&cell);
            prop_assert!(now <= last * (1.0 + 1e-12) + 1e-15, "{} after {}", now, last);
            last = now;
        }
        Ok(())
    })
}

pub fn fusing_identical_profiles_is_idempotent(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(0.0..1.0f64, 8), 1usize..6);
    check(cases, strategy, |(raw, k)| {
        let profile = normalize_profile(&raw, 1e-4);
        let v = variation(&profile, false);
        prop_assume!(v > 1e-3);
        let alpha = mixing_weights(&vec![v; k], 1e-4);
        let valid: Vec<usize> = (0..k).collect();
        let fused = fuse(&vec![profile.clone(); k], &alpha, &valid);
        for (q, p) in fused.iter().zip(&profile) {
            prop_assert!((q - p).abs() <= 1e-3 * p + 1e-15, "{} vs {}", q, p);
        }
        Ok(())
    })
}

pub fn masked_headings_repel_the_action(cases: u32) -> Result<(), String> {
    let strategy = (prop::collection::vec(0.0..1.0f64, 8), 0usize..8, prop::collection::vec(any::<bool>(), 8));
    check(cases, strategy, |(q, d, extra)| {
        // heading d and both cone neighbours are blocked, others at random
        let blocked: Vec<bool> = (0..8)
            .map(|h| h == d || h == (d + 1) % 8 || h == (d + 7) % 8 || extra[h])
            .collect();
        let clearance: Vec<f64> = blocked.iter().map(|&b| if b { 0.1 } else { 5.0 }).collect();
        let mut profiles = vec![q];
        obstacle_mask(&mut profiles, &clearance, 0.3);
        prop_assume!(profiles[0].iter().any(|&x| x > 0.0));
        if let Some(theta) = action_angle(&profiles[0]) {
            let off = wrap_signed(theta - basis_headings(8)[d]).abs();
            prop_assert!(off >= PI / 2.0 - 1e-9, "θ* {} within {} of masked heading {}", theta, off, d);
        }
        Ok(())
    })
}

pub fn single_scale_decisions_follow_its_profile(cases: u32) -> Result<(), String> {
    let strategy = (
        prop::collection::vec((0usize..8, 0usize..6, 0usize..6, -1.0..1.0f64), 1..40),
        sparse_rates(6),
        prop::collection::vec(0.0..1.0f64, 6),
        prop::collection::vec(0.1..3.0f64, 72),
    );
    check(cases, strategy, |(entries, rates, w, ranges)| {
        let mut adj = AdjacencyTensor::new(8, 6);
        for &(k, i, j, x) in &entries {
            if i != j {
                adj.set(k, i, j, x);
            }
        }
        let reward = RewardCell {
            weights: w,
            epsilon: 1e-4,
            cap: 10.0,
        };
        let views = [ScaleView {
            adjacency: &adj,
            reward: &reward,
            rates: &rates,
        }];
        let scan = LidarScan {
            ranges,
            bearings: (0..72).map(|j| 2.0 * PI * j as f64 / 72.0).collect(),
            max_range: 3.0,
        };
        let cfg = FusionConfig::default();
        let profile = evaluate(&views, &scan, &cfg);
        if profile.valid.is_empty() {
            return Ok(());
        }
        let mut own = vec![normalize_profile(&profile.q[0], cfg.epsilon)];
        obstacle_mask(&mut own, &heading_clearance(&scan, 8), cfg.d_safe);
        match (profile.theta, action_angle(&own[0])) {
            (Some(a), Some(b)) => {
                prop_assert!(wrap_signed(a - b).abs() < 1e-9, "{} vs {}", a, b)
            }
            (a, b) => prop_assert_eq!(a.is_some(), b.is_some()),
        }
        Ok(())
    })
}

pub const ALL: &[(&str, fn(u32) -> Result<(), String>)] = &[
    ("adjacency_updates_stay_antisymmetric", adjacency_updates_stay_antisymmetric),
    ("oja_fixed_point_is_stationary", oja_fixed_point_is_stationary),
    ("oja_weights_stay_bounded", oja_weights_stay_bounded),
    ("traces_decay_geometrically_without_input", traces_decay_geometrically_without_input),
    ("place_rates_stay_in_unit_interval", place_rates_stay_in_unit_interval),
    ("mixing_weights_sum_to_one", mixing_weights_sum_to_one),
    ("action_angle_ignores_positive_scaling", action_angle_ignores_positive_scaling),
    ("decide_leaves_every_scale_untouched", decide_leaves_every_scale_untouched),
    ("replay_credit_falls_with_replay_distance", replay_credit_falls_with_replay_distance),
    ("activation_is_invariant_to_rate_scaling", activation_is_invariant_to_rate_scaling),
    ("raycast_ignores_heading", raycast_ignores_heading),
    ("raycast_mirrors_with_the_arena", raycast_mirrors_with_the_arena),
    ("raycast_quarter_turn_symmetry", raycast_quarter_turn_symmetry),
    ("steps_keep_the_margin", steps_keep_the_margin),
    ("steps_are_full_or_stop_at_the_margin", steps_are_full_or_stop_at_the_margin),
    ("head_direction_rotates_with_velocity", head_direction_rotates_with_velocity),
    ("basis_headings_are_their_own_nearest", basis_headings_are_their_own_nearest),
    ("bvc_rates_ignore_beam_order", bvc_rates_ignore_beam_order),
    ("bvc_norm_scales_inversely", bvc_norm_scales_inversely),
    ("bvc_sigma_derivative_matches_analytic", bvc_sigma_derivative_matches_analytic),
    ("replay_peak_update_is_one", replay_peak_update_is_one),
    ("td_error_never_grows", td_error_never_grows),
    ("fusing_identical_profiles_is_idempotent", fusing_identical_profiles_is_idempotent),
    ("masked_headings_repel_the_action", masked_headings_repel_the_action),
    ("single_scale_decisions_follow_its_profile", single_scale_decisions_follow_its_profile),
];
