//! Single-shot studies that produce a key-value record.

use anyhow::{bail, Result};
use infoscale_core::divergences::{
    classical_qoi_bounds, hellinger_unshifted_bound, iid_scaled_divergences, DivergenceReport,
};
use infoscale_core::gibbs::{
    finite_volume_xi, gibbs_relative_entropy, linearized_gibbs_bound, per_site_gap, triple_norm_xi,
    EntropySurrogate, GibbsMeasure, LatticeVolume,
};
use infoscale_core::goal_oriented::{goal_bound, xi_tensorized};
use infoscale_core::markov::{
    cheap_rate_bounds, enumerate_paths, hellinger_limit, renyi_rate, stationary_gap, xi_rate_bounds,
};
use infoscale_core::{GoalBound, Observable};

use crate::formats::{load_chain, load_distribution, load_interaction, load_observable};
use crate::output::Record;
use crate::sweep::{SiteObservable, Study};

/// Chain-of-inequalities slack reported by the divergence study.
const CHAIN_TOLERANCE: f64 = 1e-10;

fn push_bound(r: &mut Record, prefix: &str, b: &GoalBound) {
    r.push(format!("{prefix}xi_minus"), b.xi_minus);
    r.push(format!("{prefix}xi_plus"), b.xi_plus);
    r.push(format!("{prefix}c_star_minus"), b.c_star_minus);
    r.push(format!("{prefix}c_star_plus"), b.c_star_plus);
    r.push(
        format!("{prefix}linearized_half_width"),
        b.linearized_half_width,
    );
}

pub fn run(study: &Study) -> Result<Record> {
    let mut r = Record::default();
    match study {
        Study::Divergence {
            p,
            q,
            observable,
            alpha,
            n,
        } => {
            let (p, q) = (load_distribution(p)?, load_distribution(q)?);
            let d = DivergenceReport::compute(&q, &p, *alpha)?;
            r.push("tv", d.tv);
            r.push("hellinger", d.hellinger);
            r.push("kl", d.kl);
            r.push("renyi_alpha", d.renyi_alpha);
            r.push("renyi", d.renyi);
            r.push("renyi_half", d.renyi_half);
            r.push("renyi_two", d.renyi_two);
            r.push("chi2", d.chi2);
            r.push(
                "chain_holds",
                f64::from(u8::from(d.chain_holds(CHAIN_TOLERANCE))),
            );
            if let Some(path) = observable {
                let f = load_observable(path)?;
                let b = classical_qoi_bounds(&p, &q, &f, Some(*alpha))?;
                r.push("gap", q.expectation(&f)? - p.expectation(&f)?);
                r.push("ckp", b.ckp);
                r.push("pinsker", b.pinsker.unwrap_or(f64::NAN));
                r.push("scheffe", b.scheffe);
                r.push("chapman_robbins", b.chapman_robbins);
                r.push("le_cam", b.le_cam);
                r.push("hellinger_improved", b.hellinger_improved);
                r.push(
                    "hellinger_unshifted",
                    hellinger_unshifted_bound(&p, &q, &f)?,
                );
            }
            if let Some(n) = n {
                let s = iid_scaled_divergences(&p, &q, *n, *alpha)?;
                r.push("n", s.n as f64);
                r.push("product_kl", s.kl);
                r.push("product_renyi", s.renyi);
                r.push("product_chi2", s.chi2);
                r.push("product_hellinger", s.hellinger);
            }
        }
        Study::GoalBound {
            p,
            q,
            observable,
            n,
        } => {
            let (p, q) = (load_distribution(p)?, load_distribution(q)?);
            let f = load_observable(observable)?;
            r.push("gap", q.expectation(&f)? - p.expectation(&f)?);
            let b = match n {
                Some(n) => xi_tensorized(&p, &q, &f, *n)?,
                None => goal_bound(&p, &q, &f)?,
            };
            push_bound(&mut r, "", &b);
        }
        Study::Markov {
            p,
            q,
            observable,
            cheap,
            enumerate,
            alpha,
        } => {
            let (p, q) = (load_chain(p)?, load_chain(q)?);
            let g = load_observable(observable)?;
            let b = xi_rate_bounds(&q, &p, &g)?;
            r.push("stationary_gap", stationary_gap(&q, &p, &g)?);
            r.push("rer", b.rer);
            r.push("renyi_alpha", *alpha);
            r.push("renyi_rate", renyi_rate(&q, &p, *alpha)?);
            r.push("hellinger_limit", hellinger_limit(&q, &p)?);
            r.push("iact", b.iact);
            push_bound(&mut r, "", &b.as_goal_bound());
            if *cheap {
                let c = cheap_rate_bounds(&q, &p, &g)?;
                r.push("sup_row_re", c.sup_row_re);
                r.push("sup_log_ratio", c.sup_log_ratio);
                push_bound(&mut r, "sup_row_re_", &c.with_sup_row_re);
                push_bound(&mut r, "sup_log_ratio_", &c.with_sup_log_ratio);
            }
            if let Some(n) = enumerate {
                let e = enumerate_paths(&q, &p, &g, *n, *alpha)?;
                r.push("paths_steps", e.steps as f64);
                r.push("paths_kl_per_step", e.kl_per_step);
                r.push("paths_renyi_per_step", e.renyi_per_step);
                r.push("paths_hellinger", e.hellinger);
                r.push("paths_gap_per_step", e.gap_per_step);
                push_bound(&mut r, "paths_", &e.xi);
            }
        }
        Study::Gibbs {
            phi,
            psi,
            n,
            side,
            observable,
        } => {
            let (phi, psi) = (load_interaction(phi)?, load_interaction(psi)?);
            if phi.dimension() != psi.dimension() {
                bail!(
                    "interactions have dimensions {} and {}",
                    phi.dimension(),
                    psi.dimension()
                );
            }
            let volume = match side {
                Some(s) => LatticeVolume::new(phi.dimension(), *s)?,
                None => LatticeVolume::centered(phi.dimension(), *n)?,
            };
            let g = match observable {
                SiteObservable::Spin => Observable::new(phi.spins().to_vec())?,
                SiteObservable::File(path) => load_observable(path)?,
            };
            let mp = GibbsMeasure::new(&phi, volume)?;
            let mq = GibbsMeasure::new(&psi, volume)?;
            let sites = volume.sites() as f64;
            let re = gibbs_relative_entropy(&mq, &mp)?;
            let norm = phi.difference(&psi)?.triple_norm();
            r.push("sites", sites);
            r.push("log_z_phi", mp.log_partition());
            r.push("log_z_psi", mq.log_partition());
            r.push("relative_entropy", re);
            r.push("triple_norm_difference", norm);
            r.push("per_site_gap", per_site_gap(&mq, &mp, &g)?);
            push_bound(&mut r, "", &finite_volume_xi(&mq, &mp, &g)?);
            push_bound(&mut r, "triple_norm_", &triple_norm_xi(&mp, &psi, &g)?);
            r.push(
                "linearized_relative_entropy",
                linearized_gibbs_bound(&mp, EntropySurrogate::RelativeEntropy(re), &g)?,
            );
            r.push(
                "linearized_triple_norm",
                linearized_gibbs_bound(&mp, EntropySurrogate::TripleNorm(norm), &g)?,
            );
        }
        Study::Phase(_) => bail!("phase studies produce tables"),
    }
    Ok(r)
}
