//! One function per scenario, each turning a validated config into a report.

use std::f64::consts::TAU;

use num_complex::Complex64;
use opuc_core::asymptotics::{
    cesaro_stolz_limit, corollary1_rate, delta_terms, periodic_residue_limits, twisted_limit_check,
    twisted_quotient_identity, unit_power,
};
use opuc_core::jacobi_bridge::{
    bv_propagation_check, interleave_opuc, sieved_alphas, sieving_residual, JacobiSpec,
};
use opuc_core::pointmass::{
    delta_n, geronimus_alpha, moment_oracle_alpha, simon_alpha, MomentBase,
};
use opuc_core::spectral::{compute_bands, delta_infinity, in_gap};
use opuc_core::{CoefficientSequence, PointMassSpec, Scaled};
use serde_json::json;

use crate::config::{ExperimentConfig, Scenario, SequenceConfig, TableFormat};
use crate::error::{CliError, CliResult};
use crate::report::{pair, Cell, Gate, LimitSummary, RunReport, Table, DELTA_COLUMNS};

const IDENTITY_TOL: f64 = 1e-10;
const ALGEBRA_TOL: f64 = 1e-12;
const BISECTION_TOL: f64 = 1e-13;

pub fn run(cfg: &ExperimentConfig) -> CliResult<RunReport> {
    let (gates, details, table) = match cfg.scenario {
        Scenario::Theorem1 => theorem1(cfg)?,
        Scenario::Theorem2 => theorem2(cfg)?,
        Scenario::Theorem3 => theorem3(cfg)?,
        Scenario::Corollary1 => corollary1(cfg)?,
        Scenario::Appendix => appendix(cfg)?,
        Scenario::OracleCheck => oracle_check(cfg)?,
        Scenario::Bands => bands(cfg)?,
    };
    let table = match cfg.format {
        TableFormat::Csv => Some(table),
        TableFormat::None => None,
    };
    Ok(RunReport::new(
        cfg.name(),
        cfg.scenario,
        gates,
        details,
        table,
    ))
}

type Outcome = (Vec<Gate>, serde_json::Value, Table);

fn config_error(cfg: &ExperimentConfig, msg: &str) -> CliError {
    CliError::Config(format!("{}: {msg}", cfg.name()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Regime {
    Gap,
    Band,
    PurePoint,
}

impl Regime {
    fn as_str(self) -> &'static str {
        match self {
            Regime::Gap => "gap",
            Regime::Band => "band",
            Regime::PurePoint => "pure_point",
        }
    }
}

fn same_angle(a: f64, b: f64) -> bool {
    let d = (a - b).rem_euclid(TAU);
    d.min(TAU - d) < 1e-12
}

/// Adds each configured point in turn; stage `m + 1` perturbs the
/// coefficients produced by stage `m`.
fn theorem1(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let n_max = cfg.n_max()?;
    if n_max < 2 {
        return Err(config_error(cfg, "theorem1 needs n_max >= 2"));
    }
    let tol = cfg.tolerance();
    let checkpoints = cfg.checkpoints_or(n_max);
    let mut base = cfg.sequence()?.build()?;
    let mut limit = base
        .limit()
        .ok_or_else(|| config_error(cfg, "theorem1 needs a sequence with a constant limit"))?;
    let mut seen: Vec<f64> = Vec::new();
    let mut gates = Vec::new();
    let mut stages = Vec::new();
    let mut table = Table::new(DELTA_COLUMNS);

    for (stage, point) in cfg.points.iter().enumerate() {
        let spec = point.spec()?;
        let theta = spec.omega();
        let regime = if seen.iter().any(|w| same_angle(*w, theta)) {
            Regime::PurePoint
        } else if limit.norm() > 0.0 && in_gap(&[limit], theta)? {
            Regime::Gap
        } else {
            Regime::Band
        };
        let expected = match regime {
            Regime::Gap => delta_infinity(limit, theta)?,
            _ => Complex64::new(0.0, 0.0),
        };
        let terms = delta_terms(&base, &spec, n_max)?;
        let mut bv = 0.0;
        let mut marks = checkpoints.iter().peekable();
        for t in &terms {
            if t.n > 0 {
                bv += (t.delta - terms[t.n - 1].delta).norm();
            }
            if marks.peek() == Some(&&t.n) {
                marks.next();
                table.push(vec![
                    stage.into(),
                    t.n.into(),
                    t.delta.re.into(),
                    t.delta.im.into(),
                    (t.delta - expected).norm().into(),
                    bv.into(),
                    t.state.logscale().into(),
                    regime.as_str().into(),
                ]);
            }
        }
        // with bounded Kₙ the quotient of increments carries no information
        let cs = if regime == Regime::Gap {
            let numer: Vec<Scaled> = terms.iter().map(|t| t.numer.scale_real(t.rho)).collect();
            let denom: Vec<Scaled> = terms.iter().map(|t| t.denom).collect();
            Some(LimitSummary::from(&cesaro_stolz_limit(
                &numer, &denom, n_max,
            )?))
        } else {
            None
        };
        let last = terms[n_max].delta;
        let err = (last - expected).norm();
        gates.push(Gate::below(
            format!("stage {stage}: |delta_n_max - limit|"),
            err,
            tol,
        ));
        stages.push(json!({
            "stage": stage,
            "omega": theta,
            "gamma": spec.gamma(),
            "regime": regime.as_str(),
            "base_limit": pair(limit),
            "expected_limit": pair(expected),
            "final_delta": pair(last),
            "final_error": err,
            "cesaro_stolz": cs,
            "bv_partial": bv,
        }));

        seen.push(theta);
        if regime == Regime::Gap {
            limit += expected;
        }
        if stage + 1 < cfg.points.len() {
            base = CoefficientSequence::table(terms.iter().map(|t| t.alpha + t.delta).collect())?;
        }
    }
    Ok((gates, json!({ "stages": stages }), table))
}

fn periodic_point(cfg: &ExperimentConfig) -> CliResult<(CoefficientSequence, PointMassSpec)> {
    Ok((cfg.sequence()?.build()?, cfg.points[0].spec()?))
}

fn theorem2(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let n_max = cfg.n_max()?;
    let tol = cfg.tolerance();
    let (seq, spec) = periodic_point(cfg)?;
    let p = seq
        .periodic_limit()
        .ok_or_else(|| config_error(cfg, "theorem2 needs an asymptotically periodic sequence"))?
        .len();
    let k_max = n_max / p;
    if k_max < 2 {
        return Err(config_error(cfg, "n_max must cover at least two periods"));
    }
    let report = periodic_residue_limits(&seq, p, &spec, k_max)?;
    let regime = if report.in_band {
        Regime::Band
    } else {
        Regime::Gap
    };
    let terms = delta_terms(&seq, &spec, n_max)?;
    let mut table = Table::new(DELTA_COLUMNS);
    let mut bv = 0.0;
    let mut marks = cfg.checkpoints_or(n_max).into_iter().peekable();
    for t in &terms {
        if t.n >= p {
            bv += (t.delta - terms[t.n - p].delta).norm();
        }
        if marks.peek() == Some(&t.n) {
            marks.next();
            let target = report.residues[t.n % p].estimate;
            table.push(vec![
                0.into(),
                t.n.into(),
                t.delta.re.into(),
                t.delta.im.into(),
                (t.delta - target).norm().into(),
                bv.into(),
                t.state.logscale().into(),
                regime.as_str().into(),
            ]);
        }
    }
    let gates = if report.in_band {
        vec![Gate::below(
            "tail max |delta_n| inside the bands",
            report.tail_max,
            tol,
        )]
    } else {
        let worst = report
            .residues
            .iter()
            .map(|r| r.err_indicator)
            .fold(0.0, f64::max);
        vec![Gate::below(
            "max residue horizon-doubling increment",
            worst,
            tol,
        )]
    };
    let residues: Vec<LimitSummary> = report.residues.iter().map(LimitSummary::from).collect();
    let details = json!({
        "period": p,
        "blocks": k_max,
        "in_band": report.in_band,
        "trace_abs": report.trace_abs,
        "tail_max": report.tail_max,
        "stride_bv": report.stride_bv,
        "residues": residues,
    });
    Ok((gates, details, table))
}

fn theorem3(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let n_max = cfg.n_max()?;
    let tol = cfg.tolerance();
    let (l, angle) = match cfg.sequence()? {
        SequenceConfig::Twisted { limit, twist_angle } => (limit.value(), *twist_angle),
        _ => return Err(config_error(cfg, "theorem3 needs a twisted sequence")),
    };
    let spec = cfg.points[0].spec()?;
    if !same_angle(spec.omega(), angle) {
        return Err(config_error(
            cfg,
            "the point mass must sit at the twist angle",
        ));
    }
    let zeta = spec.zeta();
    let seq = CoefficientSequence::twisted(l, zeta)?;
    let report = twisted_limit_check(l, zeta, &spec, n_max)?;
    let identity = (1..=n_max.min(100))
        .map(|n| {
            let (lhs, rhs) = twisted_quotient_identity(&seq, zeta, n)?;
            Ok((lhs - rhs).norm() / rhs.norm().max(f64::MIN_POSITIVE))
        })
        .collect::<CliResult<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let target = -2.0 * l;
    let terms = delta_terms(&seq, &spec, n_max)?;
    let mut table = Table::new(DELTA_COLUMNS);
    let mut bv = 0.0;
    let mut prev = Complex64::new(0.0, 0.0);
    let mut marks = cfg.checkpoints_or(n_max).into_iter().peekable();
    for t in &terms {
        let twisted = t.delta * unit_power(zeta, t.n);
        if t.n > 0 {
            bv += (twisted - prev).norm();
        }
        prev = twisted;
        if marks.peek() == Some(&t.n) {
            marks.next();
            table.push(vec![
                0.into(),
                t.n.into(),
                t.delta.re.into(),
                t.delta.im.into(),
                (twisted - target).norm().into(),
                bv.into(),
                t.state.logscale().into(),
                "twisted".into(),
            ]);
        }
    }
    let tail_err = (report.tail.estimate - target).norm();
    let gates = vec![
        Gate::below("|zeta^n delta_n + 2L| at n_max", tail_err, tol),
        Gate::below(
            "quotient identity, max relative residual",
            identity,
            IDENTITY_TOL,
        ),
    ];
    let details = json!({
        "target": pair(target),
        "cesaro_stolz": LimitSummary::from(&report.cesaro_stolz),
        "tail": LimitSummary::from(&report.tail),
        "identity_residual": identity,
    });
    Ok((gates, details, table))
}

const COROLLARY_COLUMNS: &[&str] = &["n", "delta", "ratio", "auxiliary"];

fn corollary1(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let n_max = cfg.n_max()?;
    let tol = cfg.tolerance();
    let (l, decay) = match cfg.sequence()? {
        SequenceConfig::ConstantPlusDecay { limit, decay } if limit.value().im == 0.0 => {
            (limit.value().re, decay.spec())
        }
        _ => {
            return Err(config_error(
                cfg,
                "corollary1 needs a real constant limit plus a decay",
            ))
        }
    };
    let spec = cfg.points[0].spec()?;
    let mut checkpoints = cfg.checkpoints_or(n_max);
    if checkpoints.last() != Some(&n_max) {
        checkpoints.push(n_max);
    }
    let report = corollary1_rate(l, decay, &spec, n_max, &checkpoints)?;
    let expected = cfg.expected.unwrap_or(-2.0);
    let mut table = Table::new(COROLLARY_COLUMNS);
    for cp in &report.checkpoints {
        table.push(vec![
            cp.n.into(),
            cp.delta.into(),
            cp.ratio.into(),
            cp.auxiliary.into(),
        ]);
    }
    let distances: Vec<f64> = report
        .checkpoints
        .iter()
        .map(|cp| (cp.ratio - expected).abs())
        .collect();
    let improving = distances.windows(2).all(|w| w[1] < w[0]);
    let final_err = (report.ratio.estimate.re - expected).abs();
    let gates = vec![Gate::below("|ratio - expected| at n_max", final_err, tol)];
    let details = json!({
        "limit": l,
        "expected_ratio": expected,
        "auxiliary_limit": -(1.0 + l) / (2.0 * l),
        "auxiliary_at_n_max": report.auxiliary,
        "ratio": LimitSummary::from(&report.ratio),
        "distance_decreasing": improving,
    });
    Ok((gates, details, table))
}

const APPENDIX_COLUMNS: &[&str] = &["n", "alpha", "abs_err", "bv_partial"];

fn appendix(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let n_max = cfg.n_max()?;
    let tol = cfg.tolerance();
    let jacobi = cfg.jacobi.expect("validated");
    let spec = JacobiSpec::new(jacobi.off_diagonal.rule(), jacobi.scale)?;
    let alphas = sieved_alphas(&spec, n_max)?;
    let target = -spec.limit_modulus();
    let sieving = sieving_residual(&spec, &interleave_opuc(&alphas));
    let propagation = bv_propagation_check(&spec, n_max)?;
    let in_range = alphas.iter().all(|a| *a > -1.0 && *a < 0.0);
    let mut table = Table::new(APPENDIX_COLUMNS);
    let mut bv = 0.0;
    let mut marks = cfg.checkpoints_or(n_max).into_iter().peekable();
    for (n, a) in alphas.iter().enumerate() {
        if n > 0 {
            bv += (a - alphas[n - 1]).abs();
        }
        if marks.peek() == Some(&n) {
            marks.next();
            table.push(vec![
                n.into(),
                (*a).into(),
                (a - target).abs().into(),
                bv.into(),
            ]);
        }
    }
    let limit_err = (alphas[n_max] - target).abs();
    let gates = vec![
        Gate::below("|alpha_n_max + a_y|", limit_err, tol),
        Gate::holds("all coefficients in (-1, 0)", in_range),
        Gate::below("sieving identity residual", sieving, ALGEBRA_TOL),
        Gate::below(
            "increment identity residual",
            propagation.max_residual,
            ALGEBRA_TOL,
        ),
    ];
    let details = json!({
        "limit": target,
        "gap_edge": spec.gap_edge(),
        "report": LimitSummary::from(&propagation.report),
    });
    Ok((gates, details, table))
}

const ORACLE_COLUMNS: &[&str] = &[
    "n",
    "re_geronimus",
    "im_geronimus",
    "re_simon",
    "im_simon",
    "re_delta_formula",
    "im_delta_formula",
    "re_oracle",
    "im_oracle",
    "max_discrepancy",
];

/// Largest pairwise distance among the four values of `αₙ(dν)` for `n ≤ n_max`.
pub fn oracle_discrepancy(spec: &PointMassSpec, n_max: usize) -> CliResult<(f64, Table)> {
    let free = CoefficientSequence::constant(Complex64::new(0.0, 0.0))?;
    let oracle = moment_oracle_alpha(MomentBase::Free, spec, n_max)?;
    let mut table = Table::new(ORACLE_COLUMNS);
    let mut worst: f64 = 0.0;
    for (n, o) in oracle.iter().enumerate() {
        let values = [
            geronimus_alpha(&free, spec, n + 1)?,
            simon_alpha(&free, spec, n)?,
            delta_n(&free, spec, n)?,
            *o,
        ];
        let mut local: f64 = 0.0;
        for i in 0..4 {
            for j in i + 1..4 {
                local = local.max((values[i] - values[j]).norm());
            }
        }
        worst = worst.max(local);
        let mut row: Vec<Cell> = vec![n.into()];
        for v in values {
            row.push(v.re.into());
            row.push(v.im.into());
        }
        row.push(local.into());
        table.push(row);
    }
    Ok((worst, table))
}

fn oracle_check(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    if cfg.sequence.is_some() {
        return Err(config_error(
            cfg,
            "oracle_check always uses the free base sequence",
        ));
    }
    let spec = cfg.points[0].spec()?;
    let (worst, table) = oracle_discrepancy(&spec, cfg.n_max()?)?;
    let gates = vec![Gate::below(
        "max pairwise discrepancy",
        worst,
        cfg.tolerance(),
    )];
    Ok((gates, json!({ "max_discrepancy": worst }), table))
}

const BANDS_COLUMNS: &[&str] = &["arc", "lo", "hi"];

/// Gap arcs of a periodic background as a table, edges in `(−π, π]`.
pub fn band_table(betas: &[Complex64], grid: usize, tol: f64) -> CliResult<(Vec<f64>, Table)> {
    let geometry = compute_bands(betas, grid, tol)?;
    let mut table = Table::new(BANDS_COLUMNS);
    for (i, (lo, hi)) in geometry.arcs.iter().enumerate() {
        table.push(vec![
            i.into(),
            opuc_core::spectral::canonical_angle(*lo).into(),
            opuc_core::spectral::canonical_angle(*hi).into(),
        ]);
    }
    Ok((geometry.edges(), table))
}

pub fn default_grid(period: usize) -> usize {
    (64 * period).max(1024)
}

fn bands(cfg: &ExperimentConfig) -> CliResult<Outcome> {
    let betas = cfg
        .sequence()?
        .build()?
        .periodic_limit()
        .ok_or_else(|| config_error(cfg, "bands needs a constant or periodic background"))?;
    let grid = cfg.grid.unwrap_or_else(|| default_grid(betas.len()));
    let (edges, table) = band_table(&betas, grid, BISECTION_TOL)?;
    let mut gates = Vec::new();
    if !cfg.expected_edges.is_empty() {
        let mut expected = cfg.expected_edges.clone();
        expected.sort_by(f64::total_cmp);
        gates.push(Gate::holds("edge count", expected.len() == edges.len()));
        if expected.len() == edges.len() {
            let worst = edges
                .iter()
                .zip(&expected)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max);
            gates.push(Gate::below("max edge error", worst, cfg.tolerance()));
        }
    }
    let details = json!({ "period": betas.len(), "grid": grid, "edges": edges });
    Ok((gates, details, table))
}
