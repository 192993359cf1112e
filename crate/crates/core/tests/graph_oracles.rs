mod common;

use common::*;
use nestnet::graph::{bisection_width, BisectionMode, Exactness, GraphMetrics};
use nestnet::routing::{all_shortest_paths, DEFAULT_PATH_CAP};
use num_rational::Ratio;

#[test]
fn enumeration_counts_connected_classes() {
    let counts: Vec<usize> = (1..=7).map(|n| connected_graphs(n).len()).collect();
    assert_eq!(counts, vec![1, 1, 2, 6, 21, 112, 853]);
}

#[test]
fn enumeration_is_isomorph_free() {
    for n in 1..=6 {
        let gs = connected_graphs(n);
        let mut forms: Vec<u64> = gs.iter().map(|e| bits_canonical(n, e)).collect();
        forms.sort_unstable();
        forms.dedup();
        assert_eq!(forms.len(), gs.len());
    }
}

#[test]
fn distances_match_bfs_oracle() {
    for n in 2..=7 {
        for e in connected_graphs(n) {
            let g = graph(n, &e);
            let adj = adjacency(&g);
            let m = GraphMetrics::compute(&g, BisectionMode::Exact, 0).unwrap();
            let (sum, pairs) = mpl(&adj);
            assert_eq!(m.mpl, Ratio::new(sum, pairs), "{e:?}");
            let diam = (0..n).flat_map(|s| bfs(&adj, s)).max().unwrap();
            assert_eq!(m.diameter as usize, diam);
            for s in 0..n {
                let d: Vec<usize> = g.bfs_distances(s).into_iter().map(|x| x as usize).collect();
                assert_eq!(d, bfs(&adj, s));
            }
        }
    }
}

#[test]
fn shortest_paths_match_dfs_oracle() {
    for n in 2..=7 {
        for e in connected_graphs(n) {
            let g = graph(n, &e);
            let adj = adjacency(&g);
            for s in 0..n {
                for t in (0..n).filter(|&t| t != s) {
                    let mut got = all_shortest_paths(&g, s, t, DEFAULT_PATH_CAP).unwrap();
                    got.sort();
                    assert_eq!(got, shortest_paths_dfs(&adj, s, t), "{e:?} {s}->{t}");
                }
            }
        }
    }
}

#[test]
fn exact_bisection_matches_enumeration() {
    for n in 2..=7 {
        for e in connected_graphs(n) {
            let g = graph(n, &e);
            let b = bisection_width(&g, BisectionMode::Exact, 0).unwrap();
            assert_eq!(b.exactness, Exactness::Exact);
            assert_eq!(b.width, brute_force_bisection(&adjacency(&g)), "{e:?}");
            assert_eq!(b.side.iter().filter(|&&s| s).count(), n / 2);
        }
    }
}

#[test]
fn heuristic_bisection_is_an_upper_bound() {
    let mut rng = SplitMix(7);
    for _ in 0..60 {
        let n = 6 + rng.below(9);
        let e = random_connected(n, rng.below(2 * n), &mut rng);
        let g = graph(n, &e);
        let h = bisection_width(&g, BisectionMode::Heuristic, rng.next()).unwrap();
        let exact = brute_force_bisection(&adjacency(&g));
        assert!(h.width >= exact);
        // reported width is the width of the reported cut
        let cut = e.iter().filter(|&&(u, v)| h.side[u] != h.side[v]).count();
        assert_eq!(cut, h.width);
        assert_eq!(h.side.iter().filter(|&&s| s).count(), n / 2);
    }
}
