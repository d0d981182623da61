//! Built-in sweep presets reproducing the figure data sets. Parameter
//! values marked "defaulted" are not pinned by a caption and can be
//! overridden with `--set`.

use crate::config::{Axis, Measure, Mode, Param, Spacing, SweepSpec};
use crate::error::{CliError, Result};
use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};

pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
}

pub const PRESETS: [Preset; 11] = [
    Preset {
        name: "fig2a",
        description: "ground-state Bures entanglement vs band parameter eta (lambda=1, eta_x=eta_y=1)",
    },
    Preset {
        name: "fig2b",
        description: "ground-state Bures entanglement vs scattering strength lambda (eta=1, eta_x=eta_y=1)",
    },
    Preset {
        name: "fig3a",
        description: "Bures entanglement of the phi3 eigenstate vs eta (lambda=1; eta_x=eta_y=1 defaulted)",
    },
    Preset {
        name: "fig3b",
        description: "Bures entanglement of the phi3 eigenstate vs lambda (eta=1, eta_x=5, eta_y=1)",
    },
    Preset {
        name: "fig4",
        description: "thermal Bures/TMIN/UIN vs temperature (eta=1, lambda=1, alpha=pi/3; eta_x=eta_y=1 defaulted)",
    },
    Preset {
        name: "fig5",
        description: "thermal Bures/TMIN/UIN vs temperature (eta=1, alpha=pi/3, eta_x=3, eta_y=6; lambda=1 defaulted, legend uses 0.5/1/2)",
    },
    Preset {
        name: "fig6a",
        description: "average teleportation fidelity vs temperature (eta=1, alpha=pi, lambda=1, eta_x=1, eta_y=3, theta=pi/2)",
    },
    Preset {
        name: "fig6b",
        description: "average fidelity vs temperature for lambda in [0.5, 2] (eta=1, alpha=pi, eta_x=1, eta_y=3)",
    },
    Preset {
        name: "fig7a",
        description: "average-fidelity density over (T, lambda) at eta_x=1, eta_y=1 (eta=1, alpha=pi)",
    },
    Preset {
        name: "fig7b",
        description: "average-fidelity density over (T, lambda) at eta_x=3, eta_y=1 (eta=1, alpha=pi)",
    },
    Preset {
        name: "fig7c",
        description: "average-fidelity density over (T, lambda) at eta_x=1, eta_y=3 (eta=1, alpha=pi)",
    },
];

fn fixed(entries: &[(Param, f64)]) -> BTreeMap<Param, f64> {
    entries.iter().copied().collect()
}

fn axis(param: Param, start: f64, stop: f64, count: usize) -> Axis {
    Axis {
        param,
        start,
        stop,
        count,
        spacing: Spacing::Linear,
    }
}

pub fn preset(name: &str) -> Result<SweepSpec> {
    let spec = match name {
        "fig2a" => SweepSpec {
            mode: Mode::Ground,
            fixed: fixed(&[
                (Param::Lambda, 1.0),
                (Param::EtaX, 1.0),
                (Param::EtaY, 1.0),
                (Param::Alpha, 0.0),
                (Param::BetaPhase, 0.0),
            ]),
            axes: vec![axis(Param::Eta, 0.0, 5.0, 200)],
            outputs: vec![Measure::Concurrence, Measure::Bures],
            seed: 0,
            samples: None,
        },
        "fig2b" => SweepSpec {
            mode: Mode::Ground,
            fixed: fixed(&[
                (Param::Eta, 1.0),
                (Param::EtaX, 1.0),
                (Param::EtaY, 1.0),
                (Param::Alpha, 0.0),
                (Param::BetaPhase, 0.0),
            ]),
            axes: vec![axis(Param::Lambda, 0.05, 5.0, 200)],
            outputs: vec![Measure::Concurrence, Measure::Bures],
            seed: 0,
            samples: None,
        },
        "fig3a" => SweepSpec {
            mode: Mode::Ground,
            fixed: fixed(&[
                (Param::Lambda, 1.0),
                (Param::EtaX, 1.0),
                (Param::EtaY, 1.0),
                (Param::Alpha, 0.0),
                (Param::BetaPhase, 0.0),
            ]),
            axes: vec![axis(Param::Eta, 0.0, 5.0, 200)],
            outputs: vec![Measure::ConcurrencePhi(3), Measure::BuresPhi(3)],
            seed: 0,
            samples: None,
        },
        "fig3b" => SweepSpec {
            mode: Mode::Ground,
            fixed: fixed(&[
                (Param::Eta, 1.0),
                (Param::EtaX, 5.0),
                (Param::EtaY, 1.0),
                (Param::Alpha, 0.0),
                (Param::BetaPhase, 0.0),
            ]),
            axes: vec![axis(Param::Lambda, 0.05, 5.0, 200)],
            outputs: vec![Measure::ConcurrencePhi(3), Measure::BuresPhi(3)],
            seed: 0,
            samples: None,
        },
        "fig4" => SweepSpec {
            mode: Mode::Thermal,
            fixed: fixed(&[
                (Param::Eta, 1.0),
                (Param::Lambda, 1.0),
                (Param::Alpha, PI / 3.0),
                (Param::EtaX, 1.0),
                (Param::EtaY, 1.0),
            ]),
            axes: vec![axis(Param::T, 0.01, 5.0, 200)],
            outputs: vec![Measure::Bures, Measure::Tmin, Measure::Uin],
            seed: 0,
            samples: None,
        },
        "fig5" => SweepSpec {
            mode: Mode::Thermal,
            fixed: fixed(&[
                (Param::Eta, 1.0),
                (Param::Alpha, PI / 3.0),
                (Param::EtaX, 3.0),
                (Param::EtaY, 6.0),
                (Param::Lambda, 1.0),
            ]),
            axes: vec![axis(Param::T, 0.01, 5.0, 200)],
            outputs: vec![Measure::Bures, Measure::Tmin, Measure::Uin],
            seed: 0,
            samples: None,
        },
        "fig6a" => SweepSpec {
            mode: Mode::Teleport,
            fixed: fixed(&[
                (Param::Eta, 1.0),
                (Param::Alpha, PI),
                (Param::Lambda, 1.0),
                (Param::EtaX, 1.0),
                (Param::EtaY, 3.0),
                (Param::Theta, FRAC_PI_2),
            ]),
            axes: vec![axis(Param::T, 0.05, 5.0, 200)],
            outputs: vec![
                Measure::AvgFidelity,
                Measure::AvgFidelityAb,
                Measure::ANumeric,
                Measure::BNumeric,
                Measure::BeatsClassical,
            ],
            seed: 0,
            samples: None,
        },
        "fig6b" => SweepSpec {
            mode: Mode::Teleport,
            fixed: fixed(&[
                (Param::Eta, 1.0),
                (Param::Alpha, PI),
                (Param::EtaX, 1.0),
                (Param::EtaY, 3.0),
                (Param::Theta, FRAC_PI_2),
            ]),
            axes: vec![
                axis(Param::Lambda, 0.5, 2.0, 4),
                axis(Param::T, 0.05, 5.0, 100),
            ],
            outputs: vec![
                Measure::AvgFidelity,
                Measure::AvgFidelityAb,
                Measure::BeatsClassical,
            ],
            seed: 0,
            samples: None,
        },
        "fig7a" | "fig7b" | "fig7c" => {
            let (eta_x, eta_y) = match name {
                "fig7a" => (1.0, 1.0),
                "fig7b" => (3.0, 1.0),
                _ => (1.0, 3.0),
            };
            SweepSpec {
                mode: Mode::Teleport,
                fixed: fixed(&[
                    (Param::Eta, 1.0),
                    (Param::Alpha, PI),
                    (Param::EtaX, eta_x),
                    (Param::EtaY, eta_y),
                    (Param::Theta, FRAC_PI_2),
                ]),
                axes: vec![
                    axis(Param::T, 0.05, 5.0, 60),
                    axis(Param::Lambda, 0.05, 5.0, 60),
                ],
                outputs: vec![
                    Measure::AvgFidelity,
                    Measure::AvgFidelityAb,
                    Measure::BeatsClassical,
                ],
                seed: 0,
                samples: None,
            }
        }
        other => {
            let names: Vec<&str> = PRESETS.iter().map(|p| p.name).collect();
            return Err(CliError::Validation(format!(
                "unknown preset {other:?} (available: {})",
                names.join(", ")
            )));
        }
    };
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_presets_resolve() {
        for p in &PRESETS {
            let spec = preset(p.name).unwrap();
            assert!(!spec.axes.is_empty());
            assert!(!spec.outputs.is_empty());
        }
        assert!(preset("fig1").is_err());
    }
}
