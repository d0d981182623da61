//! Grid construction and per-point evaluation. Every grid point is an
//! independent work item evaluated in parallel; rows are assembled in
//! grid order so output bytes never depend on thread scheduling.

use crate::config::{Measure, Mode, Param, SweepSpec};
use crate::error::{CliError, Result};
use qcorr_core::cmatrix::DensityMatrix;
use qcorr_core::fano::{canonicalize_fano, pauli_decompose, FanoForm};
use qcorr_core::graphene::{analytic_modes, ground_state, thermal_state, GrapheneParams};
use qcorr_core::measures::{
    bures_entanglement, concurrence_mixed, concurrence_pure, tmin_closed, tmin_oracle, uin_closed,
    uin_oracle,
};
use qcorr_core::teleport::{
    average_fidelity_channel, average_fidelity_from_ab, channel_probabilities, fidelity_pure,
    output_closed_ab, teleport_output, InputState,
};
use rayon::prelude::*;
use std::collections::BTreeMap;

/// Threshold for flagging a closed-vs-oracle disagreement on a row.
pub const ROW_FLAG_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq)]
pub struct Flag {
    pub name: String,
    pub magnitude: f64,
}

/// One evaluated grid point.
#[derive(Clone, Debug)]
pub struct SweepRow {
    /// Parameter values in column order (axes first, then fixed).
    pub params: Vec<(Param, f64)>,
    /// One entry per requested output; `None` when the row errored.
    pub values: Vec<Option<f64>>,
    pub flags: Vec<Flag>,
    /// Reason a row failed; empty-handed rows never abort the sweep.
    pub error: Option<String>,
}

/// Parameter column order: axis parameters first (axis order), then the
/// remaining fixed parameters in canonical order.
pub fn param_columns(spec: &SweepSpec) -> Vec<Param> {
    let mut cols: Vec<Param> = spec.axes.iter().map(|a| a.param).collect();
    for &p in spec.fixed.keys() {
        if !cols.contains(&p) {
            cols.push(p);
        }
    }
    cols
}

/// Total number of grid points.
pub fn grid_len(spec: &SweepSpec) -> usize {
    spec.axes.iter().map(|a| a.count).product()
}

fn point_params(spec: &SweepSpec, index: usize) -> BTreeMap<Param, f64> {
    let mut params = spec.fixed.clone();
    match spec.axes.len() {
        1 => {
            params.insert(spec.axes[0].param, spec.axes[0].value(index));
        }
        2 => {
            let inner = spec.axes[1].count;
            params.insert(spec.axes[0].param, spec.axes[0].value(index / inner));
            params.insert(spec.axes[1].param, spec.axes[1].value(index % inner));
        }
        _ => unreachable!("validated spec has 1 or 2 axes"),
    }
    params
}

/// Runs the whole grid. Row-major ordering: the first axis is the outer
/// loop. Per-point failures are recorded in the row, not raised.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRow>> {
    if spec.mode == Mode::Verify {
        return Err(CliError::Validation(
            "verify mode does not run sweeps".into(),
        ));
    }
    let cols = param_columns(spec);
    let rows: Vec<SweepRow> = (0..grid_len(spec))
        .into_par_iter()
        .map(|index| {
            let params = point_params(spec, index);
            let ordered: Vec<(Param, f64)> = cols.iter().map(|&p| (p, params[&p])).collect();
            let (values, flags, error) = evaluate_point(spec.mode, &params, &spec.outputs);
            SweepRow {
                params: ordered,
                values,
                flags,
                error,
            }
        })
        .collect();
    Ok(rows)
}

fn evaluate_point(
    mode: Mode,
    params: &BTreeMap<Param, f64>,
    outputs: &[Measure],
) -> (Vec<Option<f64>>, Vec<Flag>, Option<String>) {
    let result = match mode {
        Mode::Ground => eval_ground(params, outputs),
        Mode::Thermal => eval_thermal(params, outputs),
        Mode::Teleport => eval_teleport(params, outputs),
        Mode::Verify => unreachable!(),
    };
    match result {
        Ok((values, flags)) => (values, flags, None),
        Err(e) => (vec![None; outputs.len()], Vec::new(), Some(e.to_string())),
    }
}

fn graphene_params(params: &BTreeMap<Param, f64>) -> qcorr_core::Result<GrapheneParams> {
    GrapheneParams::new(
        params[&Param::Eta],
        params[&Param::EtaX],
        params[&Param::EtaY],
        params[&Param::Lambda],
        *params.get(&Param::Alpha).unwrap_or(&0.0),
    )
}

/// Lazily-computed correlation quantities shared by several measures of
/// one state.
struct StateMeasures<'a> {
    rho: &'a DensityMatrix,
    canon: Option<FanoForm>,
    concurrence: Option<f64>,
    tmin_closed: Option<f64>,
    tmin_oracle: Option<f64>,
    uin_closed: Option<f64>,
    uin_oracle: Option<f64>,
}

impl<'a> StateMeasures<'a> {
    fn new(rho: &'a DensityMatrix) -> Self {
        Self {
            rho,
            canon: None,
            concurrence: None,
            tmin_closed: None,
            tmin_oracle: None,
            uin_closed: None,
            uin_oracle: None,
        }
    }

    fn concurrence(&mut self) -> qcorr_core::Result<f64> {
        if self.concurrence.is_none() {
            self.concurrence = Some(concurrence_mixed(self.rho)?);
        }
        Ok(self.concurrence.unwrap())
    }

    fn tmin_closed(&mut self) -> qcorr_core::Result<f64> {
        if self.tmin_closed.is_none() {
            if self.canon.is_none() {
                self.canon = Some(canonicalize_fano(&pauli_decompose(self.rho))?);
            }
            let (v, _) = tmin_closed(self.canon.as_ref().unwrap())?;
            self.tmin_closed = Some(v);
        }
        Ok(self.tmin_closed.unwrap())
    }

    fn tmin_oracle(&mut self) -> f64 {
        if self.tmin_oracle.is_none() {
            self.tmin_oracle = Some(tmin_oracle(self.rho));
        }
        self.tmin_oracle.unwrap()
    }

    fn uin_closed(&mut self) -> qcorr_core::Result<f64> {
        if self.uin_closed.is_none() {
            self.uin_closed = Some(uin_closed(self.rho)?);
        }
        Ok(self.uin_closed.unwrap())
    }

    fn uin_oracle(&mut self) -> qcorr_core::Result<f64> {
        if self.uin_oracle.is_none() {
            self.uin_oracle = Some(uin_oracle(self.rho)?);
        }
        Ok(self.uin_oracle.unwrap())
    }

    /// Shared evaluation for the state-correlation measures; `None` for
    /// measures that are not state-correlation measures.
    fn measure(
        &mut self,
        m: Measure,
        flags: &mut Vec<Flag>,
    ) -> qcorr_core::Result<Option<f64>> {
        let v = match m {
            Measure::Concurrence => Some(self.concurrence()?),
            Measure::BuresRaw => Some(bures_entanglement(self.concurrence()?)?.raw),
            Measure::Bures => Some(bures_entanglement(self.concurrence()?)?.normalized),
            Measure::Tmin => {
                let closed = self.tmin_closed()?;
                let oracle = self.tmin_oracle();
                let delta = (closed - oracle).abs();
                if delta > ROW_FLAG_TOL {
                    push_flag(flags, "tmin", delta);
                    Some(oracle)
                } else {
                    Some(closed)
                }
            }
            Measure::TminClosed => Some(self.tmin_closed()?),
            Measure::TminOracle => Some(self.tmin_oracle()),
            Measure::Uin => {
                let closed = self.uin_closed()?;
                let oracle = self.uin_oracle()?;
                let delta = (closed - oracle).abs();
                if delta > ROW_FLAG_TOL {
                    push_flag(flags, "uin", delta);
                    Some(oracle)
                } else {
                    Some(closed)
                }
            }
            Measure::UinClosed => Some(self.uin_closed()?),
            Measure::UinOracle => Some(self.uin_oracle()?),
            _ => None,
        };
        Ok(v)
    }
}

fn push_flag(flags: &mut Vec<Flag>, name: &str, magnitude: f64) {
    if !flags.iter().any(|f| f.name == name) {
        flags.push(Flag {
            name: name.to_string(),
            magnitude,
        });
    }
}

type RowValues = (Vec<Option<f64>>, Vec<Flag>);

fn eval_ground(
    params: &BTreeMap<Param, f64>,
    outputs: &[Measure],
) -> qcorr_core::Result<RowValues> {
    let p = graphene_params(params)?;
    let beta = *params.get(&Param::BetaPhase).unwrap_or(&0.0);
    let gs = ground_state(&p, beta)?;
    let rho = gs.state.projector();
    let mut state = StateMeasures::new(&rho);
    let mut modes = None;
    let mut values = Vec::with_capacity(outputs.len());
    let mut flags = Vec::new();
    for &m in outputs {
        let v = match m {
            Measure::Energy => gs.energy,
            Measure::ConcurrencePhi(k) | Measure::BuresPhi(k) => {
                if modes.is_none() {
                    modes = Some(analytic_modes(&p)?);
                }
                let vector = modes.as_ref().unwrap()[(k - 1) as usize].vector;
                let c = concurrence_pure(&qcorr_core::PureState::new(vector)?);
                match m {
                    Measure::ConcurrencePhi(_) => c,
                    _ => bures_entanglement(c)?.normalized,
                }
            }
            other => state
                .measure(other, &mut flags)?
                .expect("measure validated for ground mode"),
        };
        values.push(Some(v));
    }
    Ok((values, flags))
}

fn eval_thermal(
    params: &BTreeMap<Param, f64>,
    outputs: &[Measure],
) -> qcorr_core::Result<RowValues> {
    let p = graphene_params(params)?;
    let rho = thermal_state(&p, params[&Param::T])?;
    let mut state = StateMeasures::new(&rho);
    let mut values = Vec::with_capacity(outputs.len());
    let mut flags = Vec::new();
    for &m in outputs {
        let v = state
            .measure(m, &mut flags)?
            .expect("measure validated for thermal mode");
        values.push(Some(v));
    }
    Ok((values, flags))
}

fn eval_teleport(
    params: &BTreeMap<Param, f64>,
    outputs: &[Measure],
) -> qcorr_core::Result<RowValues> {
    let p = graphene_params(params)?;
    let temperature = params[&Param::T];
    let theta = *params.get(&Param::Theta).unwrap_or(&std::f64::consts::FRAC_PI_2);
    let channel = thermal_state(&p, temperature)?;
    let mut probs = None;
    let mut ab_numeric: Option<(f64, f64)> = None;
    let mut ab_closed: Option<(f64, f64)> = None;
    let mut avg = None;
    let mut values = Vec::with_capacity(outputs.len());
    let mut flags = Vec::new();
    for &m in outputs {
        let v = match m {
            Measure::Prob(k) => {
                if probs.is_none() {
                    probs = Some(channel_probabilities(&channel));
                }
                probs.unwrap()[k as usize]
            }
            Measure::ANumeric | Measure::BNumeric | Measure::AvgFidelityAb => {
                if ab_numeric.is_none() {
                    ab_numeric = Some(numeric_ab(&channel)?);
                }
                let (a, b) = ab_numeric.unwrap();
                match m {
                    Measure::ANumeric => a,
                    Measure::BNumeric => b,
                    _ => average_fidelity_from_ab(a, b),
                }
            }
            Measure::AClosed | Measure::BClosed => {
                if ab_closed.is_none() {
                    ab_closed = Some(output_closed_ab(&p, temperature)?);
                }
                let (a, b) = ab_closed.unwrap();
                if m == Measure::AClosed {
                    a
                } else {
                    b
                }
            }
            Measure::Fidelity => {
                let input = InputState::new(theta, 0.0)?;
                let out = teleport_output(&input.projector(), &channel);
                fidelity_pure(&input, &out)
            }
            Measure::AvgFidelity | Measure::BeatsClassical => {
                if avg.is_none() {
                    avg = Some(average_fidelity_channel(&channel));
                }
                if m == Measure::AvgFidelity {
                    avg.unwrap()
                } else if qcorr_core::classical_threshold_check(avg.unwrap().clamp(0.0, 1.0))? {
                    1.0
                } else {
                    0.0
                }
            }
            other => unreachable!("measure {other:?} not valid for teleport mode"),
        };
        values.push(Some(v));
    }
    if let (Some((a_n, b_n)), Some((a_c, b_c))) = (ab_numeric, ab_closed) {
        let da = (a_n - a_c).abs();
        if da > ROW_FLAG_TOL {
            push_flag(&mut flags, "a_closed", da);
        }
        let db = (b_n - b_c).abs();
        if db > ROW_FLAG_TOL {
            push_flag(&mut flags, "b_closed", db);
        }
    }
    Ok((values, flags))
}

/// (a, b) read off the numeric output of the reference θ = π/2 input.
fn numeric_ab(channel: &DensityMatrix) -> qcorr_core::Result<(f64, f64)> {
    let input = InputState::new(std::f64::consts::FRAC_PI_2, 0.0)?;
    let out = teleport_output(&input.projector(), channel);
    let m = out.matrix();
    let a = (0..4).map(|i| m[(i, i)].re).sum::<f64>() / 4.0;
    Ok((a, m[(0, 3)].re))
}
