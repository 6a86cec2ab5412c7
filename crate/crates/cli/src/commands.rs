//! One function per subcommand. Each returns a finished [`Table`].

use cw2_core::asymptotics::{
    asymptotic_correlation, asymptotic_moment, critical_density_moments, find_minima, global_minima,
    laplace_integral_ratio, one_group_m, special_case_mstar, Landscape,
};
use cw2_core::exact::{exact_correlation, exact_distribution, sample, Scaling};
use cw2_core::model::{regime_hessian_form, regime_matrix_form};
use cw2_core::validate::{run_suite, SuiteOptions};
use cw2_core::{classify_regime, Coupling, FiniteModel, GroupWeights, Regime, RegimeTag};

use crate::config::{CliError, CliResult, ExperimentConfig};
use crate::output::{Cell, Table};

fn require_high_temperature(coupling: &Coupling, weights: &GroupWeights) -> CliResult<Regime> {
    let regime = classify_regime(coupling, weights);
    if !regime.is_high_temperature() {
        return Err(CliError::Params(format!(
            "requires the high temperature regime; {} with margin {:.6e} for {coupling}",
            regime.tag, regime.margin
        )));
    }
    Ok(regime)
}

pub fn regime(cfg: &ExperimentConfig) -> CliResult<Table> {
    let r = classify_regime(&cfg.coupling, &cfg.weights);
    let mut t = Table::new(&[
        "regime",
        "margin",
        "slack1",
        "slack2",
        "slack3",
        "inequalities",
        "matrix_form",
        "hessian_form",
    ]);
    t.push(vec![
        r.tag.as_str().into(),
        r.margin.into(),
        r.slacks[0].into(),
        r.slacks[1].into(),
        r.slacks[2].into(),
        r.is_high_temperature().into(),
        regime_matrix_form(&cfg.coupling, &cfg.weights).into(),
        regime_hessian_form(&cfg.coupling, &cfg.weights).into(),
    ]);
    Ok(t)
}

/// Exact moments of `(S1/sqrt N1, S2/sqrt N2)` against their Gaussian
/// limits. With `sublinear`, `N1 = floor(sqrt N)` and the limit uses
/// `a1 = 0`, `a2 = 1`.
pub fn clt_convergence(cfg: &ExperimentConfig, sublinear: bool) -> CliResult<Table> {
    let target_weights = if sublinear {
        GroupWeights::new(0.0, 1.0)?
    } else {
        cfg.weights
    };
    require_high_temperature(&cfg.coupling, &target_weights)?;
    let ls = Landscape::new(&cfg.coupling, &target_weights);
    let mut t = Table::new(&["n", "n1", "n2", "moment", "exact", "target", "abs_err"]);
    for &n in &cfg.sizes {
        let model = if sublinear {
            let n1 = (n as f64).sqrt().floor() as usize;
            FiniteModel::with_total(n, n1, n - n1)?
        } else {
            cfg.model_for(n)?
        };
        let table = exact_distribution(&model, &cfg.coupling)?;
        for &(k, l) in &cfg.moments {
            let exact = table.moment(k as u32, l as u32, Scaling::SqrtSpin);
            let target = asymptotic_moment(&ls, k, l)?;
            t.push(vec![
                n.into(),
                model.n1().into(),
                model.n2().into(),
                format!("{k}:{l}").into(),
                exact.into(),
                target.into(),
                (exact - target).abs().into(),
            ]);
        }
    }
    Ok(t)
}

fn sign_label(v: f64) -> &'static str {
    if v > 0.0 {
        "+"
    } else if v < 0.0 {
        "-"
    } else {
        "0"
    }
}

/// Per-spin concentration. In high temperature the second moments are
/// compared with `c/N`, `c` fitted as the largest `N E(S1/N1)^2`; with
/// independent groups in low temperature the mass near each atom
/// `(+-m(a1 J1), +-m(a2 J2))` is compared with its equal share.
pub fn lln(cfg: &ExperimentConfig) -> CliResult<Table> {
    let high = classify_regime(&cfg.coupling, &cfg.weights).is_high_temperature();
    let independent = cfg.coupling.jbar() == 0.0;
    let mut second = Vec::new();
    let mut atom_rows = Vec::new();
    for &n in &cfg.sizes {
        let model = cfg.model_for(n)?;
        let table = exact_distribution(&model, &cfg.coupling)?;
        second.push((
            n,
            table.moment(2, 0, Scaling::PerSpin),
            table.moment(0, 2, Scaling::PerSpin),
        ));
        if !high && independent {
            let m1 = one_group_m(cfg.weights.alpha1() * cfg.coupling.j1());
            let m2 = one_group_m(cfg.weights.alpha2() * cfg.coupling.j2());
            let signs = |m: f64| if m > 0.0 { vec![m, -m] } else { vec![0.0] };
            let atoms: Vec<(f64, f64)> = signs(m1)
                .into_iter()
                .flat_map(|a| signs(m2).into_iter().map(move |b| (a, b)))
                .collect();
            let share = 1.0 / atoms.len() as f64;
            for (a, b) in atoms {
                atom_rows.push((
                    n,
                    format!("mass({},{})", sign_label(a), sign_label(b)),
                    table.mass_near(a, b, 0.1),
                    Some(share),
                ));
            }
        }
    }
    let fit = |pick: fn(&(usize, f64, f64)) -> f64| {
        second
            .iter()
            .map(|row| row.0 as f64 * pick(row))
            .fold(0.0, f64::max)
    };
    let (c1, c2) = (fit(|r| r.1), fit(|r| r.2));
    let mut t = Table::new(&["n", "statistic", "value", "reference"]);
    for &(n, e1, e2) in &second {
        let reference = |c: f64| if high { Some(c / n as f64) } else { None };
        t.push(vec![n.into(), "E(S1/N1)^2".into(), e1.into(), reference(c1).into()]);
        t.push(vec![n.into(), "E(S2/N2)^2".into(), e2.into(), reference(c2).into()]);
        for (_, label, mass, share) in atom_rows.iter().filter(|r| r.0 == n) {
            t.push(vec![n.into(), label.clone().into(), (*mass).into(), (*share).into()]);
        }
    }
    Ok(t)
}

/// Symmetric coupling `J1 = J2`, `a1 = a2`: `m*`, its per-spin atom
/// `tanh(m*/sqrt 2)`, the empirical atom (mode of `S1/N1` over `S1 > 0`)
/// and the exact mass within 0.1 of each diagonal atom. When `m* = 0`
/// the single atom is the origin and `mass_total` counts it once.
pub fn special_case(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (j, jbar) = (cfg.coupling.j1(), cfg.coupling.jbar());
    if cfg.coupling.j2() != j || cfg.weights.alpha1() != cfg.weights.alpha2() {
        return Err(CliError::Params(format!(
            "special case needs J1 = J2 and alpha1 = alpha2 (got {}, alpha = ({}, {}))",
            cfg.coupling,
            cfg.weights.alpha1(),
            cfg.weights.alpha2()
        )));
    }
    let alpha = cfg.weights.alpha1();
    let mstar = special_case_mstar(j, jbar, alpha)?;
    let atom = (mstar / std::f64::consts::SQRT_2).tanh();
    let mut t = Table::new(&[
        "n",
        "mstar",
        "atom",
        "empirical_atom",
        "mass_plus",
        "mass_minus",
        "mass_total",
    ]);
    for &n in &cfg.sizes {
        let model = cfg.model_for(n)?;
        let table = exact_distribution(&model, &cfg.coupling)?;
        let empirical = table
            .marginal1()
            .into_iter()
            .filter(|&(s1, _)| s1 >= 0)
            .fold((0i64, f64::NEG_INFINITY), |best, (s1, p)| if p > best.1 { (s1, p) } else { best })
            .0 as f64
            / model.n1() as f64;
        let plus = table.mass_near(atom, atom, 0.1);
        let minus = table.mass_near(-atom, -atom, 0.1);
        let total = if mstar > 0.0 { plus + minus } else { plus };
        t.push(vec![
            n.into(),
            mstar.into(),
            atom.into(),
            empirical.into(),
            plus.into(),
            minus.into(),
            total.into(),
        ]);
    }
    Ok(t)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum GridKind {
    /// p1 = Jbar, p2 = alpha, with J1 = J2 = --j1 and alpha1 = alpha2 = alpha
    JbarAlpha,
    /// p1 = J1, p2 = J2, with --jbar, --alpha1, --alpha2 fixed
    #[value(name = "j1-j2")]
    J1J2,
}

/// Regime and `m*` per grid cell. For `jbar-alpha`, `m*` solves the
/// symmetric fixed-point equation; for `j1-j2` it is the distance of a
/// global minimizer of the landscape from the origin. Cells where the
/// coupling is not positive definite are tagged `Invalid` with no `m*`.
pub fn phase_grid(cfg: &ExperimentConfig, kind: GridKind, p1: &[f64], p2: &[f64]) -> CliResult<Table> {
    let mut t = Table::new(&["p1", "p2", "regime", "mstar"]);
    match kind {
        GridKind::JbarAlpha => {
            let j = cfg.coupling.j1();
            if let Some(bad) = p1.iter().find(|&&jbar| !(0.0..j).contains(&jbar)) {
                return Err(CliError::Params(format!("Jbar = {bad} must lie in [0, J) with J = {j}")));
            }
            if let Some(bad) = p2.iter().find(|&&a| !(a > 0.0 && a <= 0.5)) {
                return Err(CliError::Params(format!("alpha = {bad} must lie in (0, 1/2]")));
            }
            for &jbar in p1 {
                for &alpha in p2 {
                    let c = Coupling::new(j, j, jbar)?;
                    let w = GroupWeights::symmetric(alpha)?;
                    let tag = classify_regime(&c, &w).tag;
                    let mstar = special_case_mstar(j, jbar, alpha)?;
                    t.push(vec![jbar.into(), alpha.into(), tag.as_str().into(), mstar.into()]);
                }
            }
        }
        GridKind::J1J2 => {
            for &j1 in p1 {
                for &j2 in p2 {
                    let Ok(c) = Coupling::new(j1, j2, cfg.coupling.jbar()) else {
                        t.push(vec![j1.into(), j2.into(), "Invalid".into(), Cell::Null]);
                        continue;
                    };
                    let tag = classify_regime(&c, &cfg.weights).tag;
                    let mstar = if tag == RegimeTag::HighTemperature {
                        0.0
                    } else {
                        let pts = find_minima(&Landscape::new(&c, &cfg.weights))?;
                        global_minima(&pts)
                            .first()
                            .map_or(0.0, |p| p.y1.hypot(p.y2))
                    };
                    t.push(vec![j1.into(), j2.into(), tag.as_str().into(), mstar.into()]);
                }
            }
        }
    }
    Ok(t)
}

/// Laplace-integral correlations against exact and leading-order values,
/// with `a_nu = N_nu / N` per size.
pub fn laplace_check(cfg: &ExperimentConfig) -> CliResult<Table> {
    let mut t = Table::new(&["n", "k", "l", "laplace", "exact", "asymptotic", "rel_err"]);
    for &n in &cfg.sizes {
        let model = cfg.model_for(n)?;
        let w = GroupWeights::of_model(&model);
        require_high_temperature(&cfg.coupling, &w)?;
        let ls = Landscape::new(&cfg.coupling, &w);
        for &(k, l) in &cfg.moments {
            let quad = laplace_integral_ratio(&ls, n, k, l)?;
            let exact = exact_correlation(&model, &cfg.coupling, k, l)?;
            let asym = asymptotic_correlation(&ls, k, l, n)?;
            let rel = (exact != 0.0).then(|| (quad - exact).abs() / exact.abs());
            t.push(vec![
                n.into(),
                k.into(),
                l.into(),
                quad.into(),
                exact.into(),
                asym.into(),
                rel.into(),
            ]);
        }
    }
    Ok(t)
}

/// At `Jbar = 0`, `a1 J1 = 1`: `E x^4 / E x^2` for `x = S1 / N1^(3/4)`
/// against the same ratio under the critical density. The density's
/// integrated mass is reported as computed.
pub fn critical_scaling(cfg: &ExperimentConfig) -> CliResult<Table> {
    let (a1, j1) = (cfg.weights.alpha1(), cfg.coupling.j1());
    if cfg.coupling.jbar() != 0.0 || (a1 * j1 - 1.0).abs() > 1e-9 {
        return Err(CliError::Params(format!(
            "critical scaling needs Jbar = 0 and alpha1 J1 = 1 (got Jbar = {}, alpha1 J1 = {})",
            cfg.coupling.jbar(),
            a1 * j1
        )));
    }
    let density = critical_density_moments(a1)?;
    let mut t = Table::new(&["n", "n1", "ratio_exact", "ratio_density", "rel_err", "density_mass"]);
    for &n in &cfg.sizes {
        let model = cfg.model_for(n)?;
        let effective = model.n1() as f64 / n as f64 * j1;
        if (effective - 1.0).abs() > 1e-9 {
            return Err(CliError::Params(format!(
                "N = {n}: N1 J1 / N = {effective} is not 1; choose sizes with integer alpha1 N"
            )));
        }
        let table = exact_distribution(&model, &cfg.coupling)?;
        let s = Scaling::Pow(0.75);
        let ratio = table.moment(4, 0, s) / table.moment(2, 0, s);
        t.push(vec![
            n.into(),
            model.n1().into(),
            ratio.into(),
            density.ratio().into(),
            ((ratio - density.ratio()).abs() / density.ratio()).into(),
            density.mass.into(),
        ]);
    }
    Ok(t)
}

/// Runs the invariant suite; the flag reports whether every check passed.
pub fn validate(cfg: &ExperimentConfig, flip_lbar_sign: bool) -> (Table, bool) {
    let results = run_suite(&SuiteOptions {
        seed: cfg.seed,
        flip_lbar_sign,
    });
    let mut t = Table::new(&["check", "passed", "measured", "tolerance"]);
    for r in &results {
        t.push(vec![
            r.name.clone().into(),
            r.passed.into(),
            r.measured.into(),
            r.tolerance.into(),
        ]);
    }
    (t, results.iter().all(|r| r.passed))
}

/// Draws from the exact table at the first configured size, or the table
/// itself when `table_only`.
pub fn sample_cmd(cfg: &ExperimentConfig, count: usize, table_only: bool) -> CliResult<Table> {
    let n = cfg.sizes[0];
    let model = cfg.model_for(n)?;
    let table = exact_distribution(&model, &cfg.coupling)?;
    if table_only {
        let mut t = Table::new(&["s1", "s2", "prob"]);
        for (s1, s2, p) in table.iter() {
            t.push(vec![s1.into(), s2.into(), p.into()]);
        }
        return Ok(t);
    }
    let mut t = Table::new(&["s1", "s2"]);
    for (s1, s2) in sample(&table, cfg.seed, count) {
        t.push(vec![Cell::Int(s1), Cell::Int(s2)]);
    }
    Ok(t)
}
