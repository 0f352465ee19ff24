//! Spin-system description: the molecule's spins in chain (= qubit) order,
//! their shifts, polarizations and the scalar coupling matrix.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::compiler::CouplingTopology;
use crate::error::{Error, Result};
use crate::qop::matrix::check_qubit_count;

const SYMMETRY_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spin {
    pub label: String,
    pub species: String,
    /// Chemical shift relative to the species carrier.
    pub shift_hz: f64,
    /// Relative equilibrium polarization.
    pub gamma: f64,
    /// Number of magnetically equivalent nuclei acting as this qubit (3 for a methyl group).
    #[serde(default = "one")]
    pub multiplicity: u32,
}

fn one() -> u32 {
    1
}

impl Spin {
    pub fn new(label: &str, species: &str, shift_hz: f64, gamma: f64) -> Self {
        Spin {
            label: label.to_string(),
            species: species.to_string(),
            shift_hz,
            gamma,
            multiplicity: 1,
        }
    }

    pub fn with_multiplicity(mut self, multiplicity: u32) -> Self {
        self.multiplicity = multiplicity;
        self
    }
}

/// A validated spin system. Spin `k` (1-based) is qubit `k` and chain position `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "SpinSystemDoc", into = "SpinSystemDoc")]
pub struct SpinSystem {
    spins: Vec<Spin>,
    j_hz: Vec<Vec<f64>>,
    provenance: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
struct SpinSystemDoc {
    #[serde(default)]
    provenance: String,
    spins: Vec<Spin>,
    j_hz: Vec<Vec<f64>>,
}

impl TryFrom<SpinSystemDoc> for SpinSystem {
    type Error = Error;

    fn try_from(doc: SpinSystemDoc) -> Result<Self> {
        SpinSystem::new(doc.spins, doc.j_hz, doc.provenance)
    }
}

impl From<SpinSystem> for SpinSystemDoc {
    fn from(s: SpinSystem) -> Self {
        SpinSystemDoc {
            provenance: s.provenance,
            spins: s.spins,
            j_hz: s.j_hz,
        }
    }
}

impl SpinSystem {
    pub fn new(
        spins: Vec<Spin>,
        j_hz: Vec<Vec<f64>>,
        provenance: impl Into<String>,
    ) -> Result<Self> {
        let n = spins.len();
        if n == 0 {
            return Err(Error::NoSpins);
        }
        check_qubit_count(n)?;

        let mut labels = HashSet::new();
        for s in &spins {
            if !labels.insert(s.label.as_str()) {
                return Err(Error::DuplicateLabel(s.label.clone()));
            }
            if s.multiplicity < 1 {
                return Err(Error::Multiplicity {
                    label: s.label.clone(),
                    multiplicity: s.multiplicity,
                });
            }
            if !s.shift_hz.is_finite() || !s.gamma.is_finite() {
                return Err(Error::Parse(format!(
                    "spin `{}` has a non-finite field",
                    s.label
                )));
            }
        }

        if j_hz.len() != n || j_hz.iter().any(|r| r.len() != n) {
            let cols = j_hz.iter().map(Vec::len).find(|&c| c != n).unwrap_or(n);
            return Err(Error::CouplingShape {
                rows: j_hz.len(),
                cols,
                spins: n,
            });
        }
        for k in 0..n {
            if j_hz[k][k] != 0.0 {
                return Err(Error::SelfCoupling(k + 1));
            }
            for (l, row) in j_hz.iter().enumerate().skip(k + 1) {
                let (a, b) = (j_hz[k][l], row[k]);
                if !a.is_finite() || (a - b).abs() > SYMMETRY_TOLERANCE * a.abs().max(1.0) {
                    return Err(Error::AsymmetricCoupling(k + 1, l + 1));
                }
            }
            if k + 1 < n && j_hz[k][k + 1] == 0.0 {
                return Err(Error::ZeroAdjacentCoupling(k + 1, k + 2));
            }
        }

        Ok(SpinSystem {
            spins,
            j_hz,
            provenance: provenance.into(),
        })
    }

    pub fn from_json(doc: &str) -> Result<Self> {
        let doc: SpinSystemDoc =
            serde_json::from_str(doc).map_err(|e| Error::Parse(e.to_string()))?;
        SpinSystem::try_from(doc)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spin systems always serialize")
    }

    /// The shipped seven-spin crotonic acid configuration (placeholder shifts and couplings).
    pub fn crotonic_acid() -> Self {
        Self::from_json(CROTONIC_ACID_JSON).expect("shipped configuration is valid")
    }

    pub fn len(&self) -> usize {
        self.spins.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spins.is_empty()
    }

    pub fn spins(&self) -> &[Spin] {
        &self.spins
    }

    /// Spin `k`, 1-based.
    pub fn spin(&self, k: usize) -> &Spin {
        &self.spins[k - 1]
    }

    pub fn labels(&self) -> Vec<&str> {
        self.spins.iter().map(|s| s.label.as_str()).collect()
    }

    /// 1-based index of a label.
    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.spins
            .iter()
            .position(|s| s.label == label)
            .map(|i| i + 1)
            .ok_or_else(|| Error::UnknownSpin(label.to_string()))
    }

    /// Coupling between spins `k` and `l` (1-based).
    pub fn j(&self, k: usize, l: usize) -> f64 {
        self.j_hz[k - 1][l - 1]
    }

    pub fn j_matrix(&self) -> &[Vec<f64>] {
        &self.j_hz
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn gammas(&self) -> Vec<f64> {
        self.spins.iter().map(|s| s.gamma).collect()
    }
}

/// Contents of `data/crotonic-acid.json`.
pub const CROTONIC_ACID_JSON: &str = include_str!("../data/crotonic-acid.json");

pub fn load_system(doc: &str) -> Result<SpinSystem> {
    SpinSystem::from_json(doc)
}

/// Path-graph coupling topology in chain order, carrying the chain couplings.
pub fn topology_of(system: &SpinSystem) -> CouplingTopology {
    let n = system.len();
    let chain = (1..n).map(|k| system.j(k, k + 1)).collect();
    CouplingTopology::path(n)
        .with_couplings(chain)
        .expect("chain has n-1 edges")
}
