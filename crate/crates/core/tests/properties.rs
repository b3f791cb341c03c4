use infoscale_core::divergences::{
    classical_qoi_bounds, hellinger_unshifted_bound, iid_scaled_divergences, relative_entropy,
    DivergenceReport,
};
use infoscale_core::exact_models::{cross_model_re_rate, ModelSpec};
use infoscale_core::exact_models::{ising1d_quantities, Ising1DParams};
use infoscale_core::exact_models::{meanfield_solve, MeanFieldBranch, MeanFieldParams};
use infoscale_core::gibbs::Interaction;
use infoscale_core::gibbs::{gibbs_relative_entropy, GibbsMeasure, LatticeVolume};
use infoscale_core::goal_oriented::goal_bound;
use infoscale_core::markov::{
    cheap_rate_bounds, lambda_pg, relative_entropy_rate, stationary_gap, xi_rate_bounds,
    TransitionMatrix,
};
use infoscale_core::{DiscreteDistribution, Observable};
use proptest::prelude::*;

fn weights(k: usize) -> impl Strategy<Value = DiscreteDistribution> {
    prop::collection::vec(0.05f64..1.0, k)
        .prop_map(|w| DiscreteDistribution::normalized(w).unwrap())
}

fn pair_with_observable(
) -> impl Strategy<Value = (DiscreteDistribution, DiscreteDistribution, Observable)> {
    (2usize..=5).prop_flat_map(|k| {
        (
            weights(k),
            weights(k),
            prop::collection::vec(-3.0f64..3.0, k).prop_map(|v| Observable::new(v).unwrap()),
        )
    })
}

fn chain(k: usize) -> impl Strategy<Value = TransitionMatrix> {
    prop::collection::vec(prop::collection::vec(0.05f64..1.0, k), k).prop_map(|rows| {
        let rows: Vec<Vec<f64>> = rows
            .into_iter()
            .map(|r| {
                let s: f64 = r.iter().sum();
                r.into_iter().map(|x| x / s).collect()
            })
            .collect();
        TransitionMatrix::new(&rows).unwrap()
    })
}

fn chain_pair() -> impl Strategy<Value = (TransitionMatrix, TransitionMatrix, Observable)> {
    (2usize..=3).prop_flat_map(|k| {
        (
            chain(k),
            chain(k),
            prop::collection::vec(-2.0f64..2.0, k).prop_map(|v| Observable::new(v).unwrap()),
        )
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn divergence_chain_is_ordered((p, q, _f) in pair_with_observable()) {
        let report = DivergenceReport::compute(&q, &p, 0.5).unwrap();
        prop_assert!(report.chain_holds(1e-12));
        prop_assert!(report.tv <= 1.0 + 1e-12);
    }

    #[test]
    fn classical_bounds_dominate_the_gap((p, q, f) in pair_with_observable(), alpha in 0.05f64..1.0) {
        let gap = (q.expectation(&f).unwrap() - p.expectation(&f).unwrap()).abs();
        let bounds = classical_qoi_bounds(&p, &q, &f, Some(alpha)).unwrap();
        for b in bounds.all() {
            prop_assert!(gap <= b + 1e-12, "gap {gap} exceeds {b}");
        }
        let unshifted = hellinger_unshifted_bound(&p, &q, &f).unwrap();
        prop_assert!(bounds.hellinger_improved <= unshifted + 1e-12);
    }

    #[test]
    fn goal_bound_sandwiches_and_is_tighter_than_ckp((p, q, f) in pair_with_observable()) {
        let gap = q.expectation(&f).unwrap() - p.expectation(&f).unwrap();
        let xi = goal_bound(&p, &q, &f).unwrap();
        prop_assert!(xi.contains(gap, 1e-9));
        let ckp = classical_qoi_bounds(&p, &q, &f, None).unwrap().ckp;
        prop_assert!(xi.xi_plus <= ckp + 1e-9);
        prop_assert!(-xi.xi_minus <= ckp + 1e-9);
    }

    #[test]
    fn product_relative_entropy_tensorizes((p, q, _f) in pair_with_observable(), n in 1usize..=3) {
        let scaled = iid_scaled_divergences(&p, &q, n, 0.5).unwrap();
        let brute = relative_entropy(&q.power(n).unwrap(), &p.power(n).unwrap()).unwrap();
        prop_assert!((scaled.kl - brute).abs() <= 1e-10);
    }

    #[test]
    fn product_goal_bound_is_per_site_invariant((p, q, f) in pair_with_observable(), n in 2usize..=3) {
        let single = goal_bound(&p, &q, &f).unwrap();
        let sum = f.sum_over_product(n).unwrap();
        let product = goal_bound(&p.power(n).unwrap(), &q.power(n).unwrap(), &sum)
            .unwrap()
            .per_site(n as f64);
        prop_assert!((single.xi_plus - product.xi_plus).abs() <= 1e-7);
        prop_assert!((single.xi_minus - product.xi_minus).abs() <= 1e-7);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn markov_lambda_is_convex_and_vanishes_at_zero((_q, p, g) in chain_pair(), c in -3.0f64..3.0, h in 0.05f64..1.0) {
        prop_assert!(lambda_pg(&p, &g, 0.0).unwrap().abs() <= 1e-12);
        let mid = lambda_pg(&p, &g, c).unwrap();
        let lo = lambda_pg(&p, &g, c - h).unwrap();
        let hi = lambda_pg(&p, &g, c + h).unwrap();
        prop_assert!(lo + hi - 2.0 * mid >= -1e-9);
        prop_assert!(mid >= -1e-12);
    }

    #[test]
    fn markov_rate_bound_sandwiches_stationary_gap((q, p, g) in chain_pair()) {
        let bound = xi_rate_bounds(&q, &p, &g).unwrap();
        let gap = stationary_gap(&q, &p, &g).unwrap();
        prop_assert!(bound.contains(gap, 1e-8));
    }

    #[test]
    fn cheap_surrogates_are_ordered_and_nested((q, p, g) in chain_pair()) {
        let r = relative_entropy_rate(&q, &p).unwrap();
        let sharp = xi_rate_bounds(&q, &p, &g).unwrap().as_goal_bound();
        let cheap = cheap_rate_bounds(&q, &p, &g).unwrap();
        prop_assert!(r <= cheap.sup_row_re + 1e-12);
        prop_assert!(cheap.sup_row_re <= cheap.sup_log_ratio + 1e-12);
        prop_assert!(cheap.with_sup_row_re.xi_plus >= sharp.xi_plus - 1e-9);
        prop_assert!(cheap.with_sup_log_ratio.xi_plus >= cheap.with_sup_row_re.xi_plus - 1e-9);
        prop_assert!(cheap.with_sup_row_re.xi_minus <= sharp.xi_minus + 1e-9);
        prop_assert!(cheap.with_sup_log_ratio.xi_minus <= cheap.with_sup_row_re.xi_minus + 1e-9);
    }

    #[test]
    fn gibbs_entropy_is_controlled_by_triple_norm(
        b1 in 0.0f64..1.0, j1 in -1.0f64..1.0, h1 in -1.0f64..1.0,
        b2 in 0.0f64..1.0, j2 in -1.0f64..1.0, h2 in -1.0f64..1.0,
        side in 2usize..=8,
    ) {
        let phi = Interaction::ising(1, b1, j1, h1).unwrap();
        let psi = Interaction::ising(1, b2, j2, h2).unwrap();
        let norm = psi.difference(&phi).unwrap().triple_norm();
        let volume = LatticeVolume::new(1, side).unwrap();
        let mp = GibbsMeasure::enumerated(&phi, volume).unwrap();
        let mq = GibbsMeasure::enumerated(&psi, volume).unwrap();
        let n = side as f64;
        let r = gibbs_relative_entropy(&mq, &mp).unwrap();
        prop_assert!(r >= -1e-12);
        prop_assert!(r / n <= 2.0 * norm + 1e-9);
        prop_assert!((mp.log_partition() - mq.log_partition()).abs() <= n * norm + 1e-9);
    }

    #[test]
    fn transfer_matrix_agrees_with_enumeration(b in 0.0f64..1.5, j in -1.5f64..1.5, h in -1.0f64..1.0, side in 1usize..=9) {
        let phi = Interaction::ising(1, b, j, h).unwrap();
        let volume = LatticeVolume::new(1, side).unwrap();
        let tm = GibbsMeasure::transfer_matrix(&phi, volume).unwrap();
        let en = GibbsMeasure::enumerated(&phi, volume).unwrap();
        let g = Observable::new(vec![-1.0, 1.0]).unwrap();
        prop_assert!((tm.log_partition() - en.log_partition()).abs() <= 1e-10);
        prop_assert!((tm.expectation_of_sum(&g).unwrap() - en.expectation_of_sum(&g).unwrap()).abs() <= 1e-9);
        prop_assert!((tm.variance_of_sum(&g).unwrap() - en.variance_of_sum(&g).unwrap()).abs() <= 1e-8);
    }

    #[test]
    fn ising1d_is_odd_under_spin_flip(beta in 0.01f64..3.0, j in -2.0f64..2.0, h in -2.0f64..2.0) {
        let a = ising1d_quantities(&Ising1DParams { beta, j, h }).unwrap();
        let b = ising1d_quantities(&Ising1DParams { beta, j, h: -h }).unwrap();
        prop_assert!((a.magnetization + b.magnetization).abs() <= 1e-12);
        prop_assert!((a.pressure - b.pressure).abs() <= 1e-12 * a.pressure.abs().max(1.0));
        prop_assert!(a.magnetization.abs() <= 1.0);
    }

    #[test]
    fn meanfield_branches_are_mirror_images(beta in 0.05f64..2.0, h in -1.0f64..1.0) {
        let upper = MeanFieldParams { beta, j: 1.0, h, d: 2, branch: MeanFieldBranch::Upper };
        let lower = MeanFieldParams { h: -h, branch: MeanFieldBranch::Lower, ..upper };
        let a = meanfield_solve(&upper).unwrap();
        let b = meanfield_solve(&lower).unwrap();
        prop_assert!((a.m + b.m).abs() <= 1e-12);
        // Self-consistency m = tanh(β(h + Jdm)) with d = 2.
        prop_assert!((a.m - (beta * (2.0 * a.m + h)).tanh()).abs() <= 1e-10);
    }

    #[test]
    fn cross_rates_vanish_on_the_diagonal(beta in 0.05f64..2.0, h in -1.0f64..1.0) {
        let mf = ModelSpec::MeanField(MeanFieldParams { beta, j: 1.0, h, d: 1, branch: MeanFieldBranch::Upper });
        let i1 = ModelSpec::Ising1D(Ising1DParams { beta, j: 1.0, h });
        prop_assert!(cross_model_re_rate(&mf, &mf).unwrap().abs() <= 1e-12);
        prop_assert!(cross_model_re_rate(&i1, &i1).unwrap().abs() <= 1e-10);
        prop_assert!(cross_model_re_rate(&i1, &mf).unwrap() >= 0.0);
    }
}
