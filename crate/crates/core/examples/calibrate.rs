//! Map an arena and report place-field statistics per scale.
//!
//! ```text
//! cargo run --release --example calibrate -- <config.toml> <arena.env> [steps] [seed]
//! ```

use std::time::Instant;

use placenav::config::Config;
use placenav::harness::analysis::{grid_scans, sample_fields, FIELD_THRESHOLD};
use placenav::harness::run_mapping_phase;
use placenav::world::load_environment;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<String> = std::env::args().collect();
    let mut cfg = Config::load(&args[1])?;
    if let Ok(only) = std::env::var("ONLY") {
        cfg.model.scales.retain(|s| s.name == only);
    }
    let env = load_environment(&args[2])?;
    let steps = args.get(3).map_or(Ok(5000), |s| s.parse())?;
    let seed = args.get(4).map_or(Ok(1), |s| s.parse())?;
    let t0 = Instant::now();
    let mut stacks = run_mapping_phase(&cfg.model, &env, steps, seed)?;
    println!("mapping {steps} steps: {:.2?}", t0.elapsed());
    let scans = grid_scans(&env, &cfg.model, 50);
    for s in &stacks {
        let t1 = Instant::now();
        let sample = sample_fields(s, &env, &scans, 50);
        let st = sample.stats();
        let active: f64 = sample
            .rates
            .iter()
            .map(|r| r.iter().filter(|&&v| v > FIELD_THRESHOLD).count() as f64)
            .sum::<f64>()
            / sample.rates.len() as f64;
        let bvc_sum: f64 = s.bvc.rates(&scans[1275]).iter().sum();
        let bvc_max = s.bvc.rates(&scans[1275]).iter().cloned().fold(0.0, f64::max);
        let w_max = s.place.w_pb.iter().cloned().fold(0.0, f64::max);
        let osc = scans
            .iter()
            .step_by(7)
            .filter(|sc| {
                let a: f64 = s.settled_rates(sc, 60).iter().sum();
                let b: f64 = s.settled_rates(sc, 61).iter().sum();
                (a - b).abs() > 1e-3
            })
            .count() as f64
            / scans.iter().step_by(7).count() as f64;
        println!(
            "{:>8}: coverage {:.3} uniqueness {:.3} peaked {:>3}/{:<3} area {:.2} m² active/pos {:.2} \
             Σvb {:.3} max vb {:.4} max w {:.3} adj nnz {} osc {:.3} ({:.2?})",
            s.name,
            st.coverage,
            st.uniqueness,
            st.n_peaked,
            s.place.n_cells(),
            st.mean_area,
            active,
            bvc_sum,
            bvc_max,
            w_max,
            s.adjacency.nnz(),
            osc,
            t1.elapsed()
        );
        if std::env::var("DUPS").is_ok() {
            dup_report(&sample);
        }
    }
    if std::env::var("REWARD").is_ok() {
        let all = placenav::harness::StrategySpec::all_scales(&cfg.model);
        let r = placenav::harness::run_goal_seeking(&mut stacks, &env, &cfg.model, &all, 50_000, true, seed + 100, false);
        println!("learning episode: {} steps, goal {}", r.steps, r.reached_goal);
        let scans = grid_scans(&env, &cfg.model, 25);
        for s in &stacks {
            let sample = sample_fields(s, &env, &scans, 25);
            let map = sample.reward_map(s);
            let c = map.centre(map.argmax());
            println!(
                "{:>8}: argmax ({:.2},{:.2}) dist {:.2} max {:.4} support {} nonzero w {}",
                s.name,
                c.x,
                c.y,
                (c - env.goal_center).norm(),
                map.max(),
                placenav::harness::analysis::support(&map, 0.05),
                s.reward.weights.iter().filter(|&&w| w > 0.0).count()
            );
            if std::env::var("WTOP").is_ok() {
                let max_range = cfg.model.world.max_range.unwrap_or_else(|| env.diagonal());
                let fin = placenav::world::raycast(&env, &r.final_state, cfg.model.world.n_res, max_range).unwrap();
                let settled = s.settled_rates(&fin, placenav::harness::analysis::SETTLE_ITERS);
                let fmt = |v: &[f64]| -> String {
                    v.iter()
                        .enumerate()
                        .filter(|(_, &x)| x > 0.05)
                        .map(|(i, x)| format!("{i}:{x:.2}"))
                        .collect::<Vec<_>>()
                        .join(" ")
                };
                let sums: Vec<String> = (20..36)
                    .map(|it| format!("{:.2}", s.settled_rates(&fin, it).iter().sum::<f64>()))
                    .collect();
                println!("        settle sums 20..36: {}", sums.join(" "));
                println!(
                    "        final ({:.2},{:.2}) live [{}] settled [{}]",
                    r.final_state.position.x,
                    r.final_state.position.y,
                    fmt(&s.place.rates),
                    fmt(&settled)
                );
                let peaks = sample.peaks();
                let mut idx: Vec<usize> = (0..s.reward.weights.len()).collect();
                idx.sort_by(|&a, &b| s.reward.weights[b].total_cmp(&s.reward.weights[a]));
                for &i in idx.iter().take(6) {
                    let p = sample.centre(peaks[i].1);
                    println!(
                        "        pc {i:>3} w {:.3} peak {:.2} at ({:.1},{:.1}) dist {:.2}",
                        s.reward.weights[i],
                        peaks[i].0,
                        p.x,
                        p.y,
                        (p - env.goal_center).norm()
                    );
                }
            }
            if std::env::var("MAPDUMP").is_ok() {
                let max = map.max();
                for row in (0..25).rev() {
                    let line: String = (0..25)
                        .map(|col| {
                            let v = map.values[row * 25 + col] / max;
                            if v <= 0.05 { '.' } else { char::from_digit(((v * 9.99) as u32).min(9), 10).unwrap() }
                        })
                        .collect();
                    println!("      {line}");
                }
            }
        }
    }
    Ok(())
}

#[allow(dead_code)]
fn dup_report(sample: &placenav::harness::analysis::FieldSample) {
    let peaks = sample.peaks();
    let mut by_cell: std::collections::BTreeMap<usize, Vec<(usize, f64)>> = Default::default();
    for (i, &(v, c)) in peaks.iter().enumerate() {
        if v > FIELD_THRESHOLD {
            by_cell.entry(c).or_default().push((i, v));
        }
    }
    for (c, cells) in by_cell.iter().filter(|(_, v)| v.len() > 1) {
        let p = sample.centre(*c);
        let corr = if cells.len() >= 2 {
            let (a, b) = (cells[0].0, cells[1].0);
            let fa: Vec<f64> = sample.rates.iter().map(|r| r[a]).collect();
            let fb: Vec<f64> = sample.rates.iter().map(|r| r[b]).collect();
            let dot: f64 = fa.iter().zip(&fb).map(|(x, y)| x * y).sum();
            dot / (fa.iter().map(|x| x * x).sum::<f64>().sqrt() * fb.iter().map(|x| x * x).sum::<f64>().sqrt())
        } else {
            0.0
        };
        println!("    cell ({:.1},{:.1}) shared by {:?} field corr {:.3}", p.x, p.y, cells, corr);
    }
}
