//! Boolean functions, the constant/balanced promise, and the f-dependent
//! phase operators `U_f |x> = (-1)^f(x) |x>` used by the n-qubit
//! Deutsch-Jozsa protocol.
//!
//! Besides arbitrary truth tables this module builds the nine reference
//! operators of the seven-spin crotonic acid experiment ([`Table1Id`]) and
//! the balanced family
//!
//! ```text
//! U = 1/2 (Z_{n-1} + Z_{n-1} Z_n + Z_1..Z_{n-1} - Z_1..Z_n)
//! ```
//!
//! together with its four-factor parity-phase factorization.

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qop::matrix::{check_qubit_count, qubit_value, Matrix, C64};
use crate::qop::{walsh_reconstruct, DiagonalSignOperator, ParityPhaseGate, ParityTerm, Support};

/// Truth table of `f: {0,1}^n -> {0,1}`; entry `x` is `f(x)` with qubit 1 as the MSB of `x`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BooleanFunction {
    n: usize,
    table: Vec<bool>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FunctionClass {
    Constant,
    Balanced,
    Neither,
}

impl fmt::Display for FunctionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FunctionClass::Constant => "constant",
            FunctionClass::Balanced => "balanced",
            FunctionClass::Neither => "neither",
        })
    }
}

impl BooleanFunction {
    pub fn new(n: usize, table: Vec<bool>) -> Result<Self> {
        check_qubit_count(n)?;
        if table.len() != 1 << n {
            return Err(Error::TableLength {
                len: table.len(),
                n,
            });
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn from_fn(n: usize, f: impl Fn(usize) -> bool) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(BooleanFunction {
            n,
            table: (0..1usize << n).map(f).collect(),
        })
    }

    pub fn constant(n: usize, value: bool) -> Result<Self> {
        Self::from_fn(n, |_| value)
    }

    /// Parses a hex truth table: MSB-first bits, `x = 0` first. The bit count
    /// `4 * len` must be a power of two, so `n >= 2`.
    pub fn from_hex(hex: &str) -> Result<Self> {
        let hex = hex.trim();
        let bits = hex.len() * 4;
        if hex.is_empty() || !bits.is_power_of_two() {
            return Err(Error::Hex(format!(
                "{} digits do not encode 2^n bits",
                hex.len()
            )));
        }
        let n = bits.trailing_zeros() as usize;
        check_qubit_count(n)?;
        let mut table = Vec::with_capacity(bits);
        for c in hex.chars() {
            let d = c
                .to_digit(16)
                .ok_or_else(|| Error::Hex(format!("`{c}` is not a hex digit")))?;
            table.extend((0..4).rev().map(|b| (d >> b) & 1 == 1));
        }
        Ok(BooleanFunction { n, table })
    }

    pub fn to_hex(&self) -> Result<String> {
        if self.n < 2 {
            return Err(Error::Hex("tables with n < 2 have no hex form".into()));
        }
        Ok(self
            .table
            .chunks(4)
            .map(|c| {
                let d = c.iter().fold(0u32, |acc, &b| (acc << 1) | u32::from(b));
                char::from_digit(d, 16).unwrap()
            })
            .collect())
    }

    pub fn num_inputs(&self) -> usize {
        self.n
    }

    pub fn table(&self) -> &[bool] {
        &self.table
    }

    pub fn eval(&self, x: usize) -> bool {
        self.table[x]
    }

    pub fn ones(&self) -> usize {
        self.table.iter().filter(|&&b| b).count()
    }
}

pub fn classify(f: &BooleanFunction) -> FunctionClass {
    let ones = f.ones();
    let size = f.table.len();
    if ones == 0 || ones == size {
        FunctionClass::Constant
    } else if 2 * ones == size {
        FunctionClass::Balanced
    } else {
        FunctionClass::Neither
    }
}

/// `U_f`: sign `-1` wherever `f(x) = 1`.
pub fn phase_oracle(f: &BooleanFunction) -> DiagonalSignOperator {
    DiagonalSignOperator::from_flips(f.n, |x| f.table[x]).expect("table validated on construction")
}

/// Inverse of [`phase_oracle`].
pub fn function_of(d: &DiagonalSignOperator) -> BooleanFunction {
    BooleanFunction {
        n: d.num_qubits(),
        table: d.signs().iter().map(|&s| s < 0).collect(),
    }
}

/// Parity terms of the balanced template over an ordered qubit list `q_1..q_m`:
/// `1/2 (Z_{m-1} + Z_{m-1} Z_m + Z_1..Z_{m-1} - Z_1..Z_m)`.
pub fn template_terms(order: &[usize]) -> Result<Vec<ParityTerm>> {
    let m = order.len();
    if m < 2 {
        return Err(Error::TooFewQubits { n: m, min: 2 });
    }
    let mut acc: BTreeMap<Support, f64> = BTreeMap::new();
    let mut add = |qubits: &[usize], c: f64| {
        *acc.entry(Support::new(qubits.iter().copied())).or_default() += c;
    };
    add(&order[m - 2..m - 1], 0.5);
    add(&order[m - 2..], 0.5);
    add(&order[..m - 1], 0.5);
    add(order, -0.5);
    Ok(acc
        .into_iter()
        .filter(|(_, c)| *c != 0.0)
        .map(|(s, c)| ParityTerm::new(s, c))
        .collect())
}

/// The balanced function whose phase oracle is the template on qubits `1..n`:
/// `f(x) = x_{n-1}` when `x_n = 0`, else `x_1 xor .. xor x_{n-1}`.
pub fn collins_family(n: usize) -> Result<BooleanFunction> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    BooleanFunction::from_fn(n, |x| {
        if qubit_value(x, n, n) == 0 {
            qubit_value(x, n - 1, n) == 1
        } else {
            (1..n).map(|q| qubit_value(x, q, n)).sum::<usize>() % 2 == 1
        }
    })
}

/// One factor `exp(i a P_S)` of the four-factor form, with `P_S` the NMR
/// product operator `2^{|S|-1} I_z..I_z = Z_S / 2`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProductOperatorFactor {
    pub support: Support,
    pub angle: f64,
}

impl ProductOperatorFactor {
    /// The same factor as a Pauli-normalized parity-phase gate (half the angle).
    pub fn gate(&self) -> ParityPhaseGate {
        ParityPhaseGate::new(self.support.clone(), self.angle / 2.0)
            .expect("factorization supports are nonempty")
    }
}

/// `e^{i phase} exp(-i pi/2 P_{1..n-1}) exp(i pi/2 P_{1..n}) exp(-i pi/2 P_{n-1,n}) exp(-i pi/2 P_{n-1})`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Eq3Factorization {
    pub n: usize,
    pub global_phase: f64,
    pub factors: Vec<ProductOperatorFactor>,
}

impl Eq3Factorization {
    pub fn gates(&self) -> Vec<ParityPhaseGate> {
        self.factors
            .iter()
            .map(ProductOperatorFactor::gate)
            .collect()
    }

    /// Dense product of all factors including the global phase.
    pub fn unitary(&self) -> Result<Matrix> {
        let mut diag = vec![C64::from_polar(1.0, self.global_phase); 1 << self.n];
        for g in self.gates() {
            for (d, p) in diag.iter_mut().zip(g.phases(self.n)?) {
                *d *= p;
            }
        }
        Ok(Matrix::from_diagonal(&diag))
    }
}

pub fn eq3_factorization(n: usize) -> Result<Eq3Factorization> {
    if n < 2 {
        return Err(Error::TooFewQubits { n, min: 2 });
    }
    check_qubit_count(n)?;
    let factor = |support: Support, angle: f64| ProductOperatorFactor { support, angle };
    Ok(Eq3Factorization {
        n,
        global_phase: PI,
        factors: vec![
            factor(Support::range(1, n - 1), -FRAC_PI_2),
            factor(Support::range(1, n), FRAC_PI_2),
            factor(Support::new([n - 1, n]), -FRAC_PI_2),
            factor(Support::new([n - 1]), -FRAC_PI_2),
        ],
    })
}

/// Spin labels of the crotonic acid register in canonical qubit order.
pub const CROTONIC_ORDER: [&str; 7] = ["C1", "C2", "C3", "C4", "H1", "H2", "H3"];

/// The nine reference transformations of the seven-spin experiment.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Table1Id {
    F1,
    F2,
    F3,
    F4,
    F5,
    F6,
    F7,
    F8,
    F9,
}

enum RowForm {
    Identity,
    Parity,
    Template,
}

impl Table1Id {
    pub const ALL: [Table1Id; 9] = [
        Table1Id::F1,
        Table1Id::F2,
        Table1Id::F3,
        Table1Id::F4,
        Table1Id::F5,
        Table1Id::F6,
        Table1Id::F7,
        Table1Id::F8,
        Table1Id::F9,
    ];

    pub fn expected_class(self) -> FunctionClass {
        match self {
            Table1Id::F1 => FunctionClass::Constant,
            _ => FunctionClass::Balanced,
        }
    }

    /// Spins named by the row, in the order the row lists them. For the
    /// template rows the last two entries play the roles of qubits n-1 and n.
    ///
    /// Row f7 prints `Z^(C3)` in its first term, f8 prints `Z^(H2) (x) E^(H2)`
    /// and f9 prints `Z^(C2,C2)`; those readings are not ±1 operators, and
    /// the orderings below are the ones the surrounding tensor structure implies.
    pub fn spin_order(self) -> &'static [&'static str] {
        match self {
            Table1Id::F1 => &[],
            Table1Id::F2 => &["C2", "C3"],
            Table1Id::F3 => &CROTONIC_ORDER,
            Table1Id::F4 => &["C3", "C2", "C4"],
            Table1Id::F5 => &["C2", "C1", "H3"],
            Table1Id::F6 => &["C1", "C2", "C3", "C4"],
            Table1Id::F7 => &["C1", "C2", "C3", "C4", "H1"],
            Table1Id::F8 => &["C1", "C2", "C3", "C4", "H1", "H2"],
            Table1Id::F9 => &["C4", "C3", "H2", "H1", "H3", "C1", "C2"],
        }
    }

    fn form(self) -> RowForm {
        match self {
            Table1Id::F1 => RowForm::Identity,
            Table1Id::F2 | Table1Id::F3 => RowForm::Parity,
            _ => RowForm::Template,
        }
    }

    /// Parity terms of the row for a register whose qubit `q` carries `labels[q-1]`.
    pub fn terms(self, labels: &[&str]) -> Result<Vec<ParityTerm>> {
        let qubits = self
            .spin_order()
            .iter()
            .map(|s| {
                labels
                    .iter()
                    .position(|l| l == s)
                    .map(|i| i + 1)
                    .ok_or_else(|| Error::UnknownSpin((*s).to_string()))
            })
            .collect::<Result<Vec<usize>>>()?;
        match self.form() {
            RowForm::Identity => Ok(vec![ParityTerm::new(Support::empty(), 1.0)]),
            RowForm::Parity => Ok(vec![ParityTerm::new(Support::new(qubits), 1.0)]),
            RowForm::Template => template_terms(&qubits),
        }
    }
}

impl fmt::Display for Table1Id {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", *self as usize + 1)
    }
}

impl FromStr for Table1Id {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Table1Id::ALL
            .iter()
            .copied()
            .find(|id| id.to_string() == s.trim().to_ascii_lowercase())
            .ok_or_else(|| Error::UnknownOracle(s.to_string()))
    }
}

/// Table row `id` on a register labelled by `labels`, with the class trace test applied.
pub fn table1_operator_in(id: Table1Id, labels: &[&str]) -> Result<DiagonalSignOperator> {
    let d = walsh_reconstruct(&id.terms(labels)?, labels.len())?;
    let trace = d.trace();
    let ok = match id.expected_class() {
        FunctionClass::Constant => trace.unsigned_abs() == 1 << labels.len(),
        _ => trace == 0,
    };
    if !ok {
        return Err(Error::TraceTest {
            id: id.to_string(),
            class: id.expected_class().to_string(),
            trace,
        });
    }
    Ok(d)
}

/// Table row `id` on the canonical crotonic acid register ([`CROTONIC_ORDER`]).
pub fn table1_operator(id: Table1Id) -> Result<DiagonalSignOperator> {
    table1_operator_in(id, &CROTONIC_ORDER)
}
