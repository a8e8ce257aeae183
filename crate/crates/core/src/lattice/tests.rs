use proptest::prelude::*;

use super::*;
use crate::rng::{exponential_cdf, gumbel_cdf, StreamKey};
use crate::stats::{ks_one_sample, ks_two_sample};

fn random_edge_table(m: usize, n: usize, seed: u64) -> WeightTable {
    let mut s = crate::rng::derive_stream(seed, 0);
    let mut t = WeightTable::new(m, n).unwrap();
    t.set(1, 1, Role::Origin, s.gumbel()).unwrap();
    for i in 1..=m {
        for j in 1..=n {
            if i >= 2 {
                t.set(i, j, Role::Horizontal, s.gumbel()).unwrap();
            }
            if j >= 2 {
                t.set(i, j, Role::Vertical, s.gumbel()).unwrap();
            }
        }
    }
    t
}

fn random_vertex_table(m: usize, n: usize, seed: u64) -> WeightTable {
    let mut s = crate::rng::derive_stream(seed, 1);
    let mut t = WeightTable::new(m, n).unwrap();
    for i in 1..=m {
        for j in 1..=n {
            let role = if (i, j) == (1, 1) { Role::Origin } else { Role::Vertex };
            t.set(i, j, role, s.gumbel()).unwrap();
        }
    }
    t
}

/// `Z(m,n)` in direct space, by the plain recursion with a zero boundary.
fn direct_space_z(m: usize, n: usize, t: &WeightTable) -> f64 {
    let w = |i: usize, j: usize| {
        if (i, j) == (1, 1) {
            t.get(1, 1, Role::Origin).unwrap().exp()
        } else {
            t.get(i, j, Role::Vertex).unwrap().exp()
        }
    };
    let mut z = vec![vec![0.0f64; n + 1]; m + 1];
    for i in 1..=m {
        for j in 1..=n {
            z[i][j] = if (i, j) == (1, 1) {
                w(1, 1)
            } else {
                (z[i - 1][j] + z[i][j - 1]) * w(i, j)
            };
        }
    }
    z[m][n]
}

#[test]
fn lpp_single_site() {
    let mut t = WeightTable::new(1, 1).unwrap();
    t.set(1, 1, Role::Origin, 0.7).unwrap();
    assert_eq!(gumbel_lpp_grid(1, 1, &t.into()).unwrap().corner(), 0.7);
}

fn two_by_two() -> WeightTable {
    let mut t = WeightTable::new(2, 2).unwrap();
    t.set(1, 1, Role::Origin, 0.0).unwrap();
    t.set(2, 1, Role::Horizontal, 1.0).unwrap();
    t.set(1, 2, Role::Vertical, 2.0).unwrap();
    t.set(2, 2, Role::Horizontal, 5.0).unwrap();
    t.set(2, 2, Role::Vertical, 3.0).unwrap();
    t
}

#[test]
fn lpp_two_by_two_by_hand() {
    let field: WeightField = two_by_two().into();
    let g = gumbel_lpp_grid(2, 2, &field).unwrap();
    assert_eq!(g.get(2, 2), 7.0);
    assert_eq!(g.get(2, 1), 1.0);
    assert_eq!(g.get(1, 2), 2.0);
    let o = lpp_path_oracle(2, 2, &field).unwrap();
    assert_eq!(o, OracleValue { value: 7.0, paths: 2 });
}

#[test]
fn lpp_strip_telescopes() {
    let t = random_edge_table(1, 5, 3);
    let expect = t.get(1, 1, Role::Origin).unwrap()
        + (2..=5).map(|j| t.get(1, j, Role::Vertical).unwrap()).sum::<f64>();
    let field = t.into();
    let o = lpp_path_oracle(1, 5, &field).unwrap();
    assert_eq!(o.paths, 1);
    assert!((o.value - expect).abs() < 1e-12);
    assert!((gumbel_lpp_grid(1, 5, &field).unwrap().corner() - expect).abs() < 1e-12);
}

#[test]
fn missing_weight_is_a_shape_error() {
    let mut t = WeightTable::new(2, 2).unwrap();
    t.set(1, 1, Role::Origin, 0.0).unwrap();
    let field = t.into();
    assert!(matches!(gumbel_lpp_grid(2, 2, &field), Err(Error::Shape(_))));
    assert!(matches!(lpp_path_oracle(2, 2, &field), Err(Error::Shape(_))));
}

#[test]
fn oracle_capacity_guard() {
    let field = WeightField::Sampled(StreamKey::new(0, 0));
    // binomial(24, 12) = 2_704_156 > 10^6
    assert!(matches!(lpp_path_oracle(13, 13, &field), Err(Error::Capacity { .. })));
    assert!(matches!(polymer_path_oracle(13, 13, 1.0, &field), Err(Error::Capacity { .. })));
    // binomial(22, 11) = 705_432 is allowed
    assert_eq!(lpp_path_oracle(12, 12, &field).unwrap().paths, 705_432);
}

#[test]
fn polymer_small_cases() {
    let mut t = WeightTable::new(2, 3).unwrap();
    t.set(1, 1, Role::Origin, 0.0).unwrap();
    for (i, j) in [(2, 1), (1, 2), (2, 2), (1, 3), (2, 3)] {
        t.set(i, j, Role::Vertex, 0.0).unwrap();
    }
    let field: WeightField = t.into();
    let o = polymer_path_oracle(2, 2, 1.0, &field).unwrap();
    assert_eq!(o.paths, 2);
    assert!((o.value - 2f64.ln()).abs() < 1e-15);
    let o = polymer_path_oracle(2, 3, 1.0, &field).unwrap();
    assert!((o.value - 3f64.ln()).abs() < 1e-15);
    assert!((log_gamma_grid(2, 3, 1.0, &field).unwrap().corner() - 3f64.ln()).abs() < 1e-15);
}

#[test]
fn polymer_two_by_two_by_hand() {
    let mut t = WeightTable::new(2, 2).unwrap();
    t.set(1, 1, Role::Origin, 1f64.ln()).unwrap();
    t.set(2, 1, Role::Vertex, 2f64.ln()).unwrap();
    t.set(1, 2, Role::Vertex, 3f64.ln()).unwrap();
    t.set(2, 2, Role::Vertex, 4f64.ln()).unwrap();
    let field: WeightField = t.into();
    let g = log_gamma_grid(2, 2, 1.0, &field).unwrap();
    assert!((g.corner() - 20f64.ln()).abs() < 1e-14);
    assert!((polymer_path_oracle(2, 2, 1.0, &field).unwrap().value - 20f64.ln()).abs() < 1e-14);
    assert!((log_gamma_grid(1, 1, 1.0, &field).unwrap().corner() - 0.0).abs() < 1e-15);
}

#[test]
fn polymer_direct_space_agreement() {
    for seed in 0..20 {
        let t = random_vertex_table(3, 3, seed);
        let direct = direct_space_z(3, 3, &t).ln();
        let logz = log_gamma_grid(3, 3, 1.0, &t.into()).unwrap().corner();
        assert!(((logz - direct) / direct.abs().max(1.0)).abs() < 1e-10);
    }
}

#[test]
fn nonpositive_gamma_rejected() {
    let field = WeightField::Sampled(StreamKey::new(0, 0));
    assert!(matches!(log_gamma_grid(2, 2, 0.0, &field), Err(Error::Parameter { .. })));
    assert!(gumbel_lpp_grid(0, 2, &field).is_err());
}

#[test]
fn boundary_coupling_strips() {
    for (m, n) in [(1, 50), (50, 1), (6, 9)] {
        let p = random_vertex_table(m, n, 77);
        let lpp = WeightTable::boundary_coupled_lpp(&p).unwrap();
        let (gp, gl) = if m == 1 || n == 1 {
            (
                log_gamma_grid(m, n, 1.0, &p.clone().into()).unwrap(),
                gumbel_lpp_grid(m, n, &lpp.into()).unwrap(),
            )
        } else {
            // bulk LPP weights are irrelevant to the boundary; fill them in
            let mut full = lpp;
            let mut s = crate::rng::derive_stream(5, 5);
            for i in 2..=m {
                for j in 2..=n {
                    full.set(i, j, Role::Horizontal, s.gumbel()).unwrap();
                    full.set(i, j, Role::Vertical, s.gumbel()).unwrap();
                }
            }
            (
                log_gamma_grid(m, n, 1.0, &p.clone().into()).unwrap(),
                gumbel_lpp_grid(m, n, &full.into()).unwrap(),
            )
        };
        for i in 1..=m {
            assert!((gp.get(i, 1) - gl.get(i, 1)).abs() < 1e-12);
        }
        for j in 1..=n {
            assert!((gp.get(1, j) - gl.get(1, j)).abs() < 1e-12);
        }
    }
}

#[test]
fn multi_edge_pre_reduction() {
    let cfg = MultiEdgeConfig::new(3, DistributionSpec::Exponential).unwrap();
    let mut t = WeightTable::new(2, 1).unwrap();
    for c in 1..=3 {
        t.set_copy(1, 1, Role::Origin, c, 0.1 * c as f64).unwrap();
    }
    for (c, u) in [(1, 0.1), (2, 0.9), (3, 0.4)] {
        t.set_copy(2, 1, Role::Horizontal, c, u).unwrap();
    }
    let multi = multi_edge_lpp_grid(2, 1, &cfg, &t.into()).unwrap();
    let mut single = WeightTable::new(2, 1).unwrap();
    single.set(1, 1, Role::Origin, 0.1 * 3.0).unwrap();
    single.set(2, 1, Role::Horizontal, 0.9).unwrap();
    let g = gumbel_lpp_grid(2, 1, &single.into()).unwrap();
    assert_eq!(multi.get(2, 1), g.get(2, 1));
    assert_eq!(multi.semantics(), GridSemantics::MultiEdgeT);
    let missing = MultiEdgeConfig::new(4, DistributionSpec::Exponential).unwrap();
    let mut t = WeightTable::new(1, 1).unwrap();
    t.set(1, 1, Role::Origin, 0.0).unwrap();
    assert!(multi_edge_lpp_grid(1, 1, &missing, &t.into()).is_err());
}

#[test]
fn multi_edge_with_one_copy_is_plain_lpp() {
    let cfg = MultiEdgeConfig::new(1, DistributionSpec::Gumbel).unwrap();
    let field: WeightField = random_edge_table(4, 3, 9).into();
    let a = multi_edge_lpp_grid(4, 3, &cfg, &field).unwrap();
    let b = gumbel_lpp_grid(4, 3, &field).unwrap();
    assert_eq!(a.values(), b.values());
    assert!(MultiEdgeConfig::new(0, DistributionSpec::Gumbel).is_err());
}

#[test]
fn normalization() {
    let cfg = MultiEdgeConfig::new(2, DistributionSpec::Exponential).unwrap();
    let field = WeightField::Sampled(StreamKey::new(4, 4));
    let g = multi_edge_lpp_grid(3, 3, &cfg, &field).unwrap();
    let id = normalize_multi_edge(&g, 0.0, 1.0).unwrap();
    assert_eq!(id.values(), g.values());
    assert!(normalize_multi_edge(&g, 0.0, 0.0).is_err());
    assert!(normalize_multi_edge(&gumbel_lpp_grid(2, 2, &field).unwrap(), 0.0, 1.0).is_err());
    let x = normalize_value(10.0, 3, 10f64.ln(), 1.0);
    assert!((x - 3.092_244_3).abs() < 1e-6);
}

#[test]
fn corner_grid_and_wavefront_are_bit_identical() {
    let cfg = MultiEdgeConfig::new(3, DistributionSpec::Exponential).unwrap();
    let models = [
        Model::GumbelLpp,
        Model::LogGamma {
            gamma: GammaShape::new(2.5).unwrap(),
        },
        Model::MultiEdge(cfg),
    ];
    for model in &models {
        for (m, n) in [(1, 1), (1, 7), (7, 1), (5, 9), (9, 5), (12, 12)] {
            let field = WeightField::Sampled(StreamKey::new(99, (m * 31 + n) as u64));
            let g = model_grid(model, m, n, &field, EvalMode::Sequential).unwrap();
            let w = model_grid(model, m, n, &field, EvalMode::Wavefront).unwrap();
            assert_eq!(g.values(), w.values(), "{model:?} {m}x{n}");
            let c = model_corner(model, m, n, &field).unwrap();
            assert_eq!(c.to_bits(), g.corner().to_bits(), "{model:?} {m}x{n}");
        }
    }
}

#[test]
fn sampled_weights_are_positionally_keyed() {
    // the (2,2) value depends only on weights inside the 2x2 box
    let field = WeightField::Sampled(StreamKey::new(17, 3));
    let small = gumbel_lpp_grid(2, 2, &field).unwrap();
    let big = gumbel_lpp_grid(6, 4, &field).unwrap();
    assert_eq!(small.get(2, 2), big.get(2, 2));
    assert_eq!(small.get(2, 1), big.get(2, 1));
}

#[test]
fn lpp_origin_is_gumbel() {
    let set = sample_statistic(&Model::GumbelLpp, 1, 1, 2024, 100_000).unwrap();
    assert!(ks_one_sample(&set, gumbel_cdf).unwrap().p_value > 0.01);
    let poly = Model::LogGamma { gamma: GammaShape::ONE };
    let set = sample_statistic(&poly, 1, 1, 2025, 100_000).unwrap();
    assert!(ks_one_sample(&set, gumbel_cdf).unwrap().p_value > 0.01);
}

#[test]
fn sample_statistic_is_deterministic() {
    let a = sample_statistic(&Model::GumbelLpp, 3, 4, 1, 1).unwrap();
    let b = sample_statistic(&Model::GumbelLpp, 3, 4, 1, 1).unwrap();
    assert_eq!(a.values(), b.values());
    assert_eq!(a.provenance().count, 1);
    assert!(sample_statistic(&Model::GumbelLpp, 3, 4, 1, 0).is_err());
}

#[test]
fn one_step_identity() {
    for (z1, z2, seed) in [(1.0, 1.0, 1u64), (0.3, 2.7, 2)] {
        let (lpp, poly) = one_step_laws(z1, z2, 100_000, seed).unwrap();
        let rate = z1 + z2;
        for set in [&lpp, &poly] {
            let recip = set.map(|x| 1.0 / x).unwrap();
            let r = ks_one_sample(&recip, |x| exponential_cdf(x, rate)).unwrap();
            assert!(r.p_value > 0.01, "{z1},{z2}: {r:?}");
        }
    }
    let (lpp, _) = one_step_laws(1.0, 1e-12, 100_000, 3).unwrap();
    let recip = lpp.map(|x| 1.0 / x).unwrap();
    assert!(ks_one_sample(&recip, |x| exponential_cdf(x, 1.0)).unwrap().statistic < 0.01);
    assert!(one_step_laws(0.0, 1.0, 10, 0).is_err());
}

#[test]
fn multi_edge_origin_exponential_extreme() {
    let cfg = MultiEdgeConfig::new(1000, DistributionSpec::Exponential).unwrap();
    let set = sample_statistic_with(&Model::MultiEdge(cfg), 1, 1, 8, 100_000, |v| v - 1000f64.ln()).unwrap();
    let d = ks_one_sample(&set, gumbel_cdf).unwrap().statistic;
    assert!(d < 0.01, "D = {d}");
}

#[test]
fn theorem_one_small_grid() {
    let poly = Model::LogGamma { gamma: GammaShape::ONE };
    let t = sample_statistic(&Model::GumbelLpp, 3, 3, 10, 20_000).unwrap();
    let z = sample_statistic(&poly, 3, 3, 11, 20_000).unwrap();
    assert!(ks_two_sample(&t, &z).p_value > 0.001);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn lpp_recursion_matches_path_oracle(m in 1usize..=5, n in 1usize..=5, seed in any::<u64>()) {
        let field: WeightField = random_edge_table(m, n, seed).into();
        let g = gumbel_lpp_grid(m, n, &field).unwrap();
        let o = lpp_path_oracle(m, n, &field).unwrap();
        prop_assert!((g.corner() - o.value).abs() < 1e-12);
    }

    #[test]
    fn polymer_recursion_matches_path_oracle(m in 1usize..=5, n in 1usize..=5, seed in any::<u64>()) {
        let field: WeightField = random_vertex_table(m, n, seed).into();
        let g = log_gamma_grid(m, n, 1.0, &field).unwrap();
        let o = polymer_path_oracle(m, n, 1.0, &field).unwrap();
        prop_assert!(((g.corner() - o.value) / o.value.abs().max(1.0)).abs() < 1e-10);
    }

    #[test]
    fn grids_are_monotone_in_each_weight(
        m in 1usize..=4, n in 1usize..=4, seed in any::<u64>(),
        pick in any::<prop::sample::Index>(), bump in 0.0f64..3.0,
    ) {
        let base = random_edge_table(m, n, seed);
        let mut keys = Vec::new();
        for i in 1..=m {
            for j in 1..=n {
                for role in [Role::Origin, Role::Horizontal, Role::Vertical] {
                    if role.admits(i, j) {
                        keys.push((i, j, role));
                    }
                }
            }
        }
        let (i, j, role) = keys[pick.index(keys.len())];
        let mut bumped = base.clone();
        bumped.set(i, j, role, base.get(i, j, role).unwrap() + bump).unwrap();
        let a = gumbel_lpp_grid(m, n, &base.into()).unwrap();
        let b = gumbel_lpp_grid(m, n, &bumped.into()).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!(y >= x);
        }

        let base = random_vertex_table(m, n, seed);
        let (i, j) = (1 + pick.index(m), 1 + (pick.index(n * 7) % n));
        let role = if (i, j) == (1, 1) { Role::Origin } else { Role::Vertex };
        let mut bumped = base.clone();
        bumped.set(i, j, role, base.get(i, j, role).unwrap() + bump).unwrap();
        let a = log_gamma_grid(m, n, 1.0, &base.into()).unwrap();
        let b = log_gamma_grid(m, n, 1.0, &bumped.into()).unwrap();
        for (x, y) in a.values().iter().zip(b.values()) {
            prop_assert!(y >= x);
        }
    }

    #[test]
    fn logaddexp_is_symmetric(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        prop_assert_eq!(logaddexp(a, b).to_bits(), logaddexp(b, a).to_bits());
        prop_assert!((logaddexp(a, b) - (a.exp() + b.exp()).ln()).abs() < 1e-12 * a.abs().max(b.abs()).max(1.0));
    }
}
