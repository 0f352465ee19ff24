use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use serde::Serialize;

use super::state::{DeviationDensityMatrix, ImperfectionModel, QuantumState};
use crate::compiler::{rf_matrix, Axis, GateAction};
use crate::error::{Error, Result};
use crate::qop::matrix::{check_qubit, qubit_bit, C64};
use crate::spin_system::SpinSystem;

/// Phase tolerance for ideal pulses.
pub const IDEAL_PHASE_TOL: f64 = 1e-6;
/// Phase tolerance once pulse imperfections are switched on.
pub const IMPERFECT_PHASE_TOL: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PhaseClass {
    Absorptive,
    Emissive,
    Mixed,
}

impl PhaseClass {
    pub fn of(amplitude: C64, tol: f64) -> Self {
        let arg = amplitude.arg();
        if arg.abs() < tol {
            PhaseClass::Absorptive
        } else if (PI - arg.abs()).abs() < tol {
            PhaseClass::Emissive
        } else {
            PhaseClass::Mixed
        }
    }
}

impl fmt::Display for PhaseClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PhaseClass::Absorptive => "absorptive",
            PhaseClass::Emissive => "emissive",
            PhaseClass::Mixed => "mixed",
        })
    }
}

/// One multiplet line of a spin's spectrum. Frequencies are relative to the species carrier.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SpectrumLine {
    pub spin: String,
    pub frequency_hz: f64,
    #[serde(serialize_with = "serialize_complex")]
    pub amplitude: C64,
    pub phase_class: PhaseClass,
}

fn serialize_complex<S: serde::Serializer>(z: &C64, s: S) -> std::result::Result<S::Ok, S::Error> {
    use serde::ser::SerializeStruct;
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Readout settings.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Readout {
    /// Split each multiplicity-m spectator into its m+1 binomial lines.
    pub methyl_expand: bool,
    pub model: ImperfectionModel,
    pub phase_tol: f64,
}

impl Default for Readout {
    fn default() -> Self {
        Readout {
            methyl_expand: false,
            model: ImperfectionModel::ideal(),
            phase_tol: IDEAL_PHASE_TOL,
        }
    }
}

/// Ideal readout of spin `k` (1-based): selective `(pi/2)_y`, then one line per spectator configuration.
pub fn readout_spectrum(
    rho: &DeviationDensityMatrix,
    k: usize,
    system: &SpinSystem,
    methyl_expand: bool,
) -> Result<Vec<SpectrumLine>> {
    readout_spectrum_with(
        rho,
        k,
        system,
        &Readout {
            methyl_expand,
            ..Readout::default()
        },
    )
}

pub fn readout_spectrum_with(
    rho: &DeviationDensityMatrix,
    k: usize,
    system: &SpinSystem,
    readout: &Readout,
) -> Result<Vec<SpectrumLine>> {
    let n = system.len();
    if rho.num_qubits() != n {
        return Err(Error::DimensionMismatch {
            left: rho.num_qubits(),
            right: n,
        });
    }
    check_qubit(k, n)?;
    let mut rho = rho.clone();
    let pulse = rf_matrix(Axis::Y, FRAC_PI_2 * readout.model.rf_scale());
    rho.apply_action(&GateAction::OneQubit {
        qubit: k,
        gate: pulse,
    });
    Ok(lines_of(&rho, k, system, readout))
}

/// Spectator `l` of spin `k`: coupling and the number of equivalent nuclei it splits into.
struct Spectator {
    bit: usize,
    j: f64,
    multiplicity: u32,
}

fn lines_of(
    rho: &DeviationDensityMatrix,
    k: usize,
    system: &SpinSystem,
    readout: &Readout,
) -> Vec<SpectrumLine> {
    let n = system.len();
    let kbit = qubit_bit(k, n);
    let spectators: Vec<Spectator> = (1..=n)
        .filter(|&l| l != k)
        .map(|l| Spectator {
            bit: qubit_bit(l, n),
            j: system.j(k, l),
            multiplicity: if readout.methyl_expand {
                system.spin(l).multiplicity
            } else {
                1
            },
        })
        .collect();
    let nu = system.spin(k).shift_hz;
    let label = &system.spin(k).label;

    // Line index j_l in 0..=m_l for each spectator, first spectator varying slowest.
    let mut lines = Vec::new();
    let mut choice = vec![0u32; spectators.len()];
    loop {
        let offset: f64 = spectators
            .iter()
            .zip(&choice)
            .map(|(s, &j)| s.j * (f64::from(s.multiplicity) / 2.0 - f64::from(j)))
            .sum();
        let mut amplitude = C64::new(0.0, 0.0);
        for m in 0..1usize << spectators.len() {
            let mut weight = 1.0;
            let mut idx = 0;
            for (i, (s, &j)) in spectators.iter().zip(&choice).enumerate() {
                let occupied = m >> (spectators.len() - 1 - i) & 1 == 1;
                weight *= binomial_weight(s.multiplicity, j, occupied);
                if occupied {
                    idx |= s.bit;
                }
            }
            if weight != 0.0 {
                amplitude += 2.0 * weight * rho.get(idx, idx | kbit);
            }
        }
        lines.push(SpectrumLine {
            spin: label.clone(),
            frequency_hz: nu + offset,
            amplitude,
            phase_class: PhaseClass::of(amplitude, readout.phase_tol),
        });

        // Odometer increment.
        let mut i = spectators.len();
        loop {
            if i == 0 {
                return lines;
            }
            i -= 1;
            if choice[i] < spectators[i].multiplicity {
                choice[i] += 1;
                break;
            }
            choice[i] = 0;
        }
    }
}

/// Share of the logical `|0>` (or `|1>` when `occupied`) amplitude carried by line `j`
/// of an m-fold equivalent spectator. Line `j` sits at `J (m/2 - j)`; lines above the
/// centre come from `|0>`, lines below from `|1>`, a centre line from both.
fn binomial_weight(m: u32, j: u32, occupied: bool) -> f64 {
    let c = binomial(m, j) / 2f64.powi(m as i32 - 1);
    match (2 * j).cmp(&m) {
        std::cmp::Ordering::Less => {
            if occupied {
                0.0
            } else {
                c
            }
        }
        std::cmp::Ordering::Greater => {
            if occupied {
                c
            } else {
                0.0
            }
        }
        std::cmp::Ordering::Equal => c / 2.0,
    }
}

fn binomial(m: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * f64::from(m - i) / f64::from(i + 1))
}
