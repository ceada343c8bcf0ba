use dtqw::btree::{
    first_passage_projected, initial_state_at, leftmost, level, multi_loop_projected,
    simulate_projected, simulate_tree, TreeEvolution,
};
use dtqw::interchange::NodeId;
use dtqw::series::{amplitude_sequence, LoopKernel};
use dtqw::Complex;

fn convolve(a: &[Complex<f64>], b: &[Complex<f64>]) -> Vec<Complex<f64>> {
    (0..a.len().min(b.len()))
        .map(|t| (0..=t).map(|s| a[s] * b[t - s]).sum())
        .collect()
}

#[test]
fn projected_equals_full_tree() {
    for n in 1..=6 {
        let full = simulate_tree::<f64>(n, 20).unwrap();
        let proj = simulate_projected::<f64>(n, 20).unwrap();
        for t in 0..=20 {
            assert!((full[t] - proj[t]).norm() < 1e-12, "n={n} t={t}");
        }
    }
}

#[test]
fn start_node_and_child_do_not_matter() {
    for n in 1..=4 {
        let v = leftmost(n).unwrap();
        let right_end = NodeId((1u64 << n) - 1);
        let starts = [
            (NodeId(2 * v.0), v),
            (NodeId(2 * v.0 + 1), v),
            (NodeId(2 * right_end.0 + 1), right_end),
        ];
        let mut runs = Vec::new();
        for (child, node) in starts {
            let mut evo = TreeEvolution::new(initial_state_at::<f64>(node, child).unwrap());
            let mut h = vec![evo.root_amplitude()];
            for _ in 0..12 {
                evo.step().unwrap();
                h.push(evo.root_amplitude());
            }
            runs.push(h);
        }
        for r in &runs[1..] {
            for t in 0..=12 {
                assert!((r[t] - runs[0][t]).norm() < 1e-14, "n={n} t={t}");
            }
        }
    }
}

#[test]
fn norm_and_support_every_step() {
    for n in [1usize, 3, 5] {
        let mut evo = TreeEvolution::new(dtqw::btree::initial_state::<f64>(n).unwrap());
        for t in 1..=18 {
            evo.step().unwrap();
            assert!((evo.state().norm() - 1.0).abs() < 1e-12);
            for (prev, cur, _) in evo.state().iter() {
                for v in [prev, cur] {
                    let l = level(v);
                    assert!(l + t >= n && l <= n + t, "n={n} t={t} level {l}");
                }
            }
        }
    }
}

#[test]
fn first_return_decomposition() {
    let g = multi_loop_projected::<f64>(30).unwrap();
    assert_eq!(g[0], Complex::new(1.0, 0.0));
    for n in 1..=5 {
        let h = first_passage_projected::<f64>(n, 30).unwrap();
        let want = simulate_projected::<f64>(n, 30).unwrap();
        let got = convolve(&h, &g);
        for t in 0..=30 {
            assert!((got[t] - want[t]).norm() < 1e-13, "n={n} t={t}");
        }
    }
}

#[test]
fn projected_is_fast_at_scale() {
    let start = std::time::Instant::now();
    let h = simulate_projected::<f64>(50, 1000).unwrap();
    assert_eq!(h.len(), 1001);
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

fn largest_tail_increment(kernel: LoopKernel, n: usize) -> f64 {
    let h = amplitude_sequence::<f64>(kernel, n, 2000).unwrap();
    h[1800..].iter().map(|c| c.norm_sqr()).fold(0.0, f64::max)
}

/// The printed closed form of the loop series decays like τ⁻³, so its partial
/// sums settle. The walk itself keeps a root bound state, so they do not.
#[test]
fn transience_proxy() {
    assert!(largest_tail_increment(LoopKernel::Published, 20) < 1e-12);
    assert!(largest_tail_increment(LoopKernel::Walk, 10) > 1e-6);
}
