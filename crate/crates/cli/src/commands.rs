//! The experiments behind each subcommand. Each returns the checks it asserts
//! and writes its artifacts through [`Artifacts`].

use std::f64::consts::TAU;
use std::fmt::Write;

use rand::Rng;
use serde::Serialize;
use teichmuller::action::{
    block_identity_defects, composition_matrix, hs_offdiag, operator_norm, symplectic_defect,
};
use teichmuller::beltrami::{
    harmonic_beltrami, hyperbolic_l2_squared, monomial_norm_squared, wp_pairing, HolomorphicCoeffs,
    PolarGrid,
};
use teichmuller::circle::{qs_grid, qs_ratio};
use teichmuller::io::{matrix_to_csv, siegel_to_csv};
use teichmuller::mapspec::MapSpec;
use teichmuller::siegel::{
    g_bar_condition, hyperbolic_metric, metric_at_zero, moebius_action, period_point,
    rank_one_operator, su11_orbit, Membership, SiegelPoint,
};
use teichmuller::wp::{max_pairwise_deviation, mean, pullback_table, PullbackSettings};
use teichmuller::{random, CMatrix, Complex64};

use crate::config::ExperimentConfig;
use crate::report::{Artifacts, Check};
use crate::{svg, CliError};

type Checks = Result<Vec<Check>, CliError>;

#[derive(Serialize)]
struct PeriodDiagnostics {
    map: MapSpec,
    symplectic_defect: f64,
    reality_defect: f64,
    unitarity_defect: f64,
    block_symmetry_defect: f64,
    hs_offdiag: f64,
    g_bar_condition: f64,
    period_point: Membership,
    period_point_operator_norm: f64,
}

pub fn period_map(config: &ExperimentConfig, spec: &MapSpec, out: &mut Artifacts) -> Checks {
    let tol = &config.tolerances;
    let map = spec.build()?;
    let a = composition_matrix(&map, config.n, config.m)?;
    let blocks = a.blocks();
    let z = period_point(&a)?;
    let membership = z.membership();
    let (unitarity, block_symmetry) = block_identity_defects(&a, config.core);
    let diagnostics = PeriodDiagnostics {
        map: spec.clone(),
        symplectic_defect: symplectic_defect(&a, config.core),
        reality_defect: blocks.reality_defect,
        unitarity_defect: unitarity,
        block_symmetry_defect: block_symmetry,
        hs_offdiag: hs_offdiag(&a),
        g_bar_condition: g_bar_condition(&a),
        period_point: membership,
        period_point_operator_norm: operator_norm(z.matrix()),
    };

    out.write("matrix.csv", &matrix_to_csv(a.raw()))?;
    out.write("block_g.csv", &matrix_to_csv(&blocks.g))?;
    out.write("block_h.csv", &matrix_to_csv(&blocks.h))?;
    out.write("period_point.csv", &siegel_to_csv(&z))?;
    out.write_json("diagnostics.json", &diagnostics)?;

    Ok(vec![
        Check::at_most(
            "symplectic_defect",
            diagnostics.symplectic_defect,
            tol.symplectic,
        ),
        Check::at_most("reality_defect", diagnostics.reality_defect, tol.reality),
        Check::at_most(
            "period_point_symmetry",
            membership.relative_symmetric_defect(),
            tol.symmetry,
        ),
        Check::at_most(
            "period_point_operator_norm",
            diagnostics.period_point_operator_norm,
            tol.contraction,
        ),
    ])
}

#[derive(Serialize)]
struct MeasuredConstant {
    /// Mean ratio over the modes at step `eps`.
    constant: f64,
    /// Same at step `eps/2`.
    constant_half_step: f64,
    /// `(4·c(ε/2) − c(ε))/3`.
    extrapolated: f64,
    max_pairwise_deviation: f64,
    modes: Vec<usize>,
    ratios: Vec<f64>,
}

pub fn wp_pullback(config: &ExperimentConfig, out: &mut Artifacts) -> Checks {
    let tol = &config.tolerances;
    let settings = PullbackSettings {
        order: config.n,
        samples: config.m,
        eps: config.eps,
        richardson: config.richardson,
    };
    let rows = pullback_table(&config.modes, &settings)?;
    let half = pullback_table(
        &config.modes,
        &PullbackSettings {
            eps: config.eps / 2.0,
            ..settings
        },
    )?;

    let mut csv = String::from("n,h_wp,trace,ratio\n");
    for (n, row) in &rows {
        let _ = writeln!(csv, "{n},{},{},{}", row.h_wp, row.trace, row.ratio);
    }
    let ratios: Vec<f64> = rows.iter().map(|(_, r)| r.ratio).collect();
    let half_ratios: Vec<f64> = half.iter().map(|(_, r)| r.ratio).collect();
    let (c, c_half) = (mean(&ratios), mean(&half_ratios));
    let measured = MeasuredConstant {
        constant: c,
        constant_half_step: c_half,
        extrapolated: (4.0 * c_half - c) / 3.0,
        max_pairwise_deviation: max_pairwise_deviation(&ratios),
        modes: config.modes.clone(),
        ratios: ratios.clone(),
    };
    let points: Vec<(f64, f64)> = rows.iter().map(|(n, r)| (*n as f64, r.ratio)).collect();
    let tangent_symmetry = rows
        .iter()
        .map(|(_, r)| r.symmetry_defect)
        .fold(0.0, f64::max);

    out.write("wp_pullback.csv", &csv)?;
    out.write(
        "wp_pullback.svg",
        &svg::line_plot(
            "Siegel metric over Weil–Petersson metric",
            "mode n of cos(nx)",
            "ratio",
            &points,
        ),
    )?;
    out.write_json("wp_constant.json", &measured)?;

    Ok(vec![
        Check::at_most(
            "ratio_pairwise_deviation",
            measured.max_pairwise_deviation,
            tol.ratio_spread,
        ),
        Check::at_most(
            "constant_step_stability",
            ((c_half - c) / c).abs(),
            tol.step_stability,
        ),
        Check::at_most("tangent_symmetry", tangent_symmetry, tol.tangent_symmetry),
    ])
}

pub fn qs_estimate(config: &ExperimentConfig, spec: &MapSpec, out: &mut Artifacts) -> Checks {
    let tol = &config.tolerances;
    let map = spec.build()?;
    let (xs, ts) = qs_grid(config.qs_nx, config.qs_nt, config.qs_t_max);
    let mut csv = String::from("t,m_hat\n");
    let mut m_hat: f64 = 1.0;
    for &t in &ts {
        let m = qs_ratio(&map, &xs, &[t])?;
        m_hat = m_hat.max(m);
        let _ = writeln!(csv, "{t},{m}");
    }
    out.write("qs_estimate.csv", &csv)?;
    out.write_json(
        "qs_estimate.json",
        &serde_json::json!({ "map": spec, "m_hat": m_hat }),
    )?;

    let mut checks = vec![Check::at_most("m_hat", m_hat, tol.qs_max)];
    if matches!(spec, MapSpec::Identity | MapSpec::Rotation { .. }) {
        checks.push(Check::at_most(
            "rotation_m_hat_minus_one",
            m_hat - 1.0,
            tol.isometry,
        ));
    }
    Ok(checks)
}

pub fn beltrami_norms(config: &ExperimentConfig, seed: u64, out: &mut Artifacts) -> Checks {
    let tol = &config.tolerances;
    let grid = PolarGrid::new(config.radial, config.angular)?;
    let fields: Vec<_> = (0..=config.max_degree)
        .map(|k| harmonic_beltrami(&HolomorphicCoeffs::monomial(k), &grid))
        .collect();

    let mut csv = String::from("k,quadrature,closed_form,rel_err\n");
    let mut worst_norm: f64 = 0.0;
    for (k, mu) in fields.iter().enumerate() {
        let q = hyperbolic_l2_squared(mu)?;
        let exact = monomial_norm_squared(k);
        let err = (q - exact).abs() / exact;
        worst_norm = worst_norm.max(err);
        let _ = writeln!(csv, "{k},{q},{exact},{err}");
    }

    let d = fields.len();
    let mut gram = CMatrix::zeros(d, d);
    let mut worst_orth: f64 = 0.0;
    for i in 0..d {
        for j in 0..d {
            gram[(i, j)] = wp_pairing(&fields[i], &fields[j])?;
            if i != j {
                worst_orth = worst_orth.max(gram[(i, j)].norm());
            }
        }
    }

    // conjugate symmetry on seeded random polynomial fields
    let mut rng = random::rng(seed);
    let mut random_field = || {
        let coeffs = (0..=config.max_degree)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        harmonic_beltrami(&HolomorphicCoeffs::new(coeffs), &grid)
    };
    let mut worst_conj: f64 = 0.0;
    for _ in 0..config.samples.min(16) {
        let (mu, nu) = (random_field(), random_field());
        let (a, b) = (wp_pairing(&mu, &nu)?, wp_pairing(&nu, &mu)?);
        worst_conj = worst_conj.max((a - b.conj()).norm() / a.norm().max(1.0));
    }

    out.write("beltrami_norms.csv", &csv)?;
    out.write("beltrami_pairings.csv", &matrix_to_csv(&gram))?;
    Ok(vec![
        Check::at_most("monomial_norm_rel_err", worst_norm, tol.quadrature),
        Check::at_most("monomial_orthogonality", worst_orth, tol.orthogonality),
        Check::at_most("pairing_conjugate_symmetry", worst_conj, tol.orthogonality),
    ])
}

pub fn siegel_demo(config: &ExperimentConfig, seed: u64, out: &mut Artifacts) -> Checks {
    let tol = &config.tolerances;
    let mut rng = random::rng(seed);
    let mut csv =
        String::from("a_re,a_im,b_re,b_im,z_re,z_im,siegel_re,siegel_im,disc_re,disc_im\n");
    let (mut worst_action, mut worst_invariance, mut worst_metric): (f64, f64, f64) =
        (0.0, 0.0, 0.0);
    for _ in 0..config.samples {
        let b = Complex64::from_polar(rng.gen_range(0.0..2.0), rng.gen_range(0.0..TAU));
        let a = Complex64::from_polar((1.0 + b.norm_sqr()).sqrt(), rng.gen_range(0.0..TAU));
        let z = Complex64::from_polar(
            0.99 * rng.gen_range(0.0f64..1.0).sqrt(),
            rng.gen_range(0.0..TAU),
        );
        let u = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        let v = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));

        let point = SiegelPoint::new(CMatrix::from_element(1, 1, z))?;
        let siegel = moebius_action(&rank_one_operator(a, b), &point)?.matrix()[(0, 0)];
        let disc = su11_orbit(a, b, z)?;
        worst_action = worst_action.max((siegel - disc).norm());

        let d = (b.conj() * z + a.conj()).powi(-2);
        let before = hyperbolic_metric(z, u, v)?;
        let after = hyperbolic_metric(disc, d * u, d * v)?;
        worst_invariance =
            worst_invariance.max((after - before).norm() / before.norm().max(f64::MIN_POSITIVE));

        let tr = metric_at_zero(
            &CMatrix::from_element(1, 1, u),
            &CMatrix::from_element(1, 1, v),
            0.0,
        )?;
        worst_metric =
            worst_metric.max((tr - hyperbolic_metric(Complex64::new(0.0, 0.0), u, v)?).norm());

        let _ = writeln!(
            csv,
            "{},{},{},{},{},{},{},{},{},{}",
            a.re, a.im, b.re, b.im, z.re, z.im, siegel.re, siegel.im, disc.re, disc.im
        );
    }
    out.write("siegel_demo.csv", &csv)?;
    Ok(vec![
        Check::at_most("rank_one_action", worst_action, tol.siegel),
        Check::at_most("metric_at_zero_is_hyperbolic", worst_metric, tol.siegel),
        Check::at_most(
            "hyperbolic_metric_invariance",
            worst_invariance,
            tol.metric_invariance,
        ),
    ])
}
