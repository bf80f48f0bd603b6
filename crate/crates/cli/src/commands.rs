use std::f64::consts::PI;

use anyhow::{bail, Context, Result};
use rayon::prelude::*;

use magbridge::angular_to_hz;
use magbridge::couplings::{effective_parameters, photon_magnon_coupling, spin_magnon_coupling, MagnetGeometry};
use magbridge::lindblad::{compare_full_vs_effective, simulate, Horizon, ModelKind, Trajectory};
use magbridge::model::{kittel_frequency, resonant_field, zero_point_magnetization};
use magbridge::walker::{find_roots, kittel_mode_check, scan_residual, MagnetostaticParams};

use crate::config::{nm, RunConfig};
use crate::output::{col, Cell, Table};

/// A finished command: its table plus any reasons the run is untrustworthy.
pub struct Outcome {
    pub table: Table,
    pub flags: Vec<String>,
}

impl Outcome {
    fn clean(table: Table) -> Self {
        Self { table, flags: Vec::new() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum SweepTarget {
    G,
    Lambda,
    Effective,
    Ratios,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum EvolveModel {
    Full,
    Effective,
    Direct,
    Compare,
}

pub fn couplings(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.constants()?;
    let geom = cfg.geometry()?;
    let b_star = resonant_field(&c);
    let mut t = Table::new(vec![col("quantity", "-"), col("value", "see unit"), col("unit", "-")]);
    let mut row = |name: &str, value: f64, unit: &str| t.push(vec![name.into(), value.into(), unit.into()]);
    row("radius", nm(geom.radius), "nm");
    row("gap", nm(geom.gap), "nm");
    row("b_x", geom.b_x, "T");
    row("g_over_2pi", angular_to_hz(spin_magnon_coupling(&c, &geom)?), "Hz");
    row("lambda_over_2pi", angular_to_hz(photon_magnon_coupling(&c, &geom)?), "Hz");
    row("zero_point_magnetization", zero_point_magnetization(&c, geom.radius)?, "A/m");
    row("resonant_field", b_star, "T");
    row("kittel_over_2pi_at_resonance", angular_to_hz(kittel_frequency(&c, b_star)?), "Hz");
    Ok(Outcome::clean(t))
}

fn pool(workers: Option<usize>) -> Result<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(n) = workers {
        if n == 0 {
            bail!("--workers must be >= 1");
        }
        b = b.num_threads(n);
    }
    Ok(b.build()?)
}

struct GridPoint {
    delta1_hz: Option<f64>,
    geom: MagnetGeometry,
}

fn axis_or(axis: Option<crate::config::Axis>, name: &str, base: f64) -> Result<Vec<f64>> {
    match axis {
        Some(a) => a.values(name),
        None => Ok(vec![base]),
    }
}

pub fn sweep(cfg: &RunConfig, target: SweepTarget, workers: Option<usize>) -> Result<Outcome> {
    let c = cfg.constants()?;
    let base = cfg.geometry()?;
    let sw = cfg.sweep.clone().unwrap_or_default();
    let needs_detuning = matches!(target, SweepTarget::Effective | SweepTarget::Ratios);
    let deltas: Vec<Option<f64>> = if needs_detuning {
        let s = cfg.system_section()?;
        axis_or(sw.delta1_over_2pi_hz, "delta1_over_2pi_hz", s.delta1_over_2pi_hz)?
            .into_iter()
            .map(Some)
            .collect()
    } else {
        if sw.delta1_over_2pi_hz.is_some() {
            bail!("sweep axis `delta1_over_2pi_hz` has no effect on this target");
        }
        vec![None]
    };
    let radii = axis_or(sw.radius_nm, "radius_nm", nm(base.radius))?;
    let gaps = axis_or(sw.gap_nm, "gap_nm", nm(base.gap))?;

    let mut points = Vec::with_capacity(deltas.len() * radii.len() * gaps.len());
    for &delta1_hz in &deltas {
        for &r in &radii {
            for &d in &gaps {
                let geom = MagnetGeometry { radius: r * 1e-9, gap: d * 1e-9, ..base };
                geom.validate().with_context(|| format!("grid point R = {r} nm, d = {d} nm"))?;
                points.push(GridPoint { delta1_hz, geom });
            }
        }
    }

    let mut columns = Vec::new();
    if needs_detuning {
        columns.push(col("delta1_over_2pi_hz", "Hz"));
    }
    columns.push(col("radius_nm", "nm"));
    columns.push(col("gap_nm", "nm"));
    match target {
        SweepTarget::G => columns.push(col("g_over_2pi_hz", "Hz")),
        SweepTarget::Lambda => columns.push(col("lambda_over_2pi_hz", "Hz")),
        SweepTarget::Effective => columns.extend([
            col("g_eff_over_2pi_hz", "Hz"),
            col("gamma_eff_over_2pi_hz", "Hz"),
            col("kappa_eff_over_2pi_hz", "Hz"),
            col("alpha", "1"),
            col("beta", "1"),
            col("valid", "bool"),
        ]),
        SweepTarget::Ratios => columns.extend([
            col("g_eff_over_gamma_eff", "1"),
            col("g_eff_over_kappa_eff", "1"),
            col("cooperativity", "1"),
            col("valid", "bool"),
        ]),
    }

    let eval = |pt: &GridPoint| -> Result<Vec<Cell>> {
        let mut row: Vec<Cell> = Vec::new();
        if let Some(d) = pt.delta1_hz {
            row.push(d.into());
        }
        row.push(nm(pt.geom.radius).into());
        row.push(nm(pt.geom.gap).into());
        match target {
            SweepTarget::G => row.push(angular_to_hz(spin_magnon_coupling(&c, &pt.geom)?).into()),
            SweepTarget::Lambda => row.push(angular_to_hz(photon_magnon_coupling(&c, &pt.geom)?).into()),
            SweepTarget::Effective | SweepTarget::Ratios => {
                let p = cfg.system_params_at(&c, Some(&pt.geom), pt.delta1_hz.expect("detuning axis"))?;
                let e = effective_parameters(&p)?;
                if target == SweepTarget::Effective {
                    row.extend([
                        angular_to_hz(e.g_eff).into(),
                        angular_to_hz(e.gamma_eff).into(),
                        angular_to_hz(e.kappa_eff).into(),
                        e.alpha.into(),
                        e.beta.into(),
                        e.valid.into(),
                    ]);
                } else {
                    row.extend([e.ratio_gamma().into(), e.ratio_kappa().into(), e.cooperativity.into(), e.valid.into()]);
                }
            }
        }
        Ok(row)
    };
    let rows = pool(workers)?.install(|| points.par_iter().map(eval).collect::<Result<Vec<_>>>())?;
    let mut t = Table::new(columns);
    for r in rows {
        t.push(r);
    }
    Ok(Outcome::clean(t))
}

fn describe_flags(label: &str, traj: &Trajectory) -> Vec<String> {
    traj.flags.iter().map(|f| format!("{label}: {f}")).collect()
}

pub fn evolve(cfg: &RunConfig, model: EvolveModel) -> Result<Outcome> {
    let c = cfg.constants()?;
    let p = cfg.system_params(&c)?;
    let (gt_over_pi, opts) = cfg.evolution()?;
    let horizon = Horizon::CouplingTimes(gt_over_pi * PI);
    let scale = p.g / PI;

    if model == EvolveModel::Compare {
        let cmp = compare_full_vs_effective(&c, &p, horizon, &opts)?;
        let mut t = Table::new(vec![
            col("gt_over_pi", "1"),
            col("occ_spin_full", "1"),
            col("occ_spin_eff", "1"),
            col("occ_magnon_full", "1"),
            col("occ_photon_full", "1"),
            col("occ_photon_eff", "1"),
            col("spin_deviation", "1"),
            col("photon_deviation", "1"),
            col("max_deviation", "1"),
            col("trace_err", "1"),
        ]);
        let magnon = cmp.full.occ_magnon.as_deref().unwrap_or(&[]);
        let n = cmp.full.len().min(cmp.effective.len());
        for i in 0..n {
            let sd = cmp.spin_deviation[i];
            let pd = cmp.photon_deviation[i];
            t.push(vec![
                (cmp.full.times[i] * scale).into(),
                cmp.full.occ_spin[i].into(),
                cmp.effective.occ_spin[i].into(),
                magnon.get(i).copied().into(),
                cmp.full.occ_photon[i].into(),
                cmp.effective.occ_photon[i].into(),
                sd.into(),
                pd.into(),
                sd.max(pd).into(),
                cmp.full.trace_dev[i].max(cmp.effective.trace_dev[i]).into(),
            ]);
        }
        let mut flags = describe_flags("full", &cmp.full);
        flags.extend(describe_flags("effective", &cmp.effective));
        return Ok(Outcome { table: t, flags });
    }

    let kind = match model {
        EvolveModel::Full => ModelKind::Full,
        EvolveModel::Effective => ModelKind::Effective,
        EvolveModel::Direct => ModelKind::Direct,
        EvolveModel::Compare => unreachable!(),
    };
    let traj = simulate(&c, &p, kind, horizon, &opts)?;
    let mut columns = vec![col("gt_over_pi", "1"), col("occ_spin", "1")];
    if traj.occ_magnon.is_some() {
        columns.push(col("occ_magnon", "1"));
    }
    columns.extend([col("occ_photon", "1"), col("trace_err", "1")]);
    let mut t = Table::new(columns);
    for i in 0..traj.len() {
        let mut row: Vec<Cell> = vec![(traj.times[i] * scale).into(), traj.occ_spin[i].into()];
        if let Some(m) = &traj.occ_magnon {
            row.push(m[i].into());
        }
        row.extend([traj.occ_photon[i].into(), traj.trace_dev[i].into()]);
        t.push(row);
    }
    Ok(Outcome {
        table: t,
        flags: describe_flags("run", &traj),
    })
}

pub fn walker(cfg: &RunConfig) -> Result<Outcome> {
    let c = cfg.constants()?;
    let w = cfg.walker_section();
    let params = MagnetostaticParams::with_constants(&c, w.h0())?;
    let (lo, hi, count) = match w.scan {
        Some(s) => (magbridge::hz_to_angular(s.start_over_2pi_hz), magbridge::hz_to_angular(s.stop_over_2pi_hz), s.count),
        None => (0.0, params.omega0 + params.omega_m, 200),
    };
    let mut t = Table::new(vec![
        col("kind", "-"),
        col("l", "1"),
        col("m", "1"),
        col("freq_hz", "Hz"),
        col("residual", "1"),
        col("expected_hz", "Hz"),
        col("rel_err", "1"),
        col("verdict", "-"),
    ]);
    let mut flags = Vec::new();
    for &(l, m) in &w.modes {
        let mode = |kind: &str, freq: f64, residual: Option<f64>| -> Vec<Cell> {
            vec![
                kind.into(),
                Cell::Int(l as i64),
                Cell::Int(m as i64),
                angular_to_hz(freq).into(),
                residual.into(),
                Cell::Empty,
                Cell::Empty,
                Cell::Empty,
            ]
        };
        let scan = scan_residual(l, m, &params, lo, hi, count).with_context(|| format!("mode ({l}, {m})"))?;
        for pt in scan.iter().flatten() {
            t.push(mode("scan", pt.omega, pt.residual));
        }
        for root in find_roots(l, m, &params, lo, hi, count)? {
            t.push(mode("root", root.omega, Some(root.residual)));
        }
    }
    if w.modes.contains(&(1, 1)) {
        let check = kittel_mode_check(&c, &params)?;
        let verdict = if check.pass { "PASS" } else { "FAIL" };
        if !check.pass {
            flags.push(format!("Kittel check failed: relative error {:e}", check.rel_err));
        }
        t.push(vec![
            "kittel_check".into(),
            Cell::Int(1),
            Cell::Int(1),
            angular_to_hz(check.root).into(),
            Cell::Empty,
            angular_to_hz(check.expected).into(),
            check.rel_err.into(),
            verdict.into(),
        ]);
    }
    Ok(Outcome { table: t, flags })
}
