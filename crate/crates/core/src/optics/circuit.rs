//! Linear-optical circuits over spatial rails and polarization.
//!
//! A circuit has `rails` parallel beam paths, each carrying an H and a V
//! mode. The four-level basis enters on two input rails
//! (`|0>=(in0,H), |1>=(in0,V), |2>=(in1,H), |3>=(in1,V)`) and is read out
//! on two output rails with the same layout. Every PBS stage routes the
//! rejected polarization of each rail in its scope to a dedicated loss
//! port, so the full map stays isometric on the occupied modes.

use std::collections::BTreeSet;
use std::fmt;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::jones::{jones_hwp, jones_qwp};
use crate::error::{Error, Result};
use crate::qcore::{DensityMatrix, Operator, Operator2, Operator4, StateVector};

type C = Complex<f64>;

/// Amplitude norm below which a mode counts as empty during validation.
const OCCUPANCY_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    fn offset(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }

    pub fn other(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarization::H => "H",
            Polarization::V => "V",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Element {
    Hwp { angle_deg: f64 },
    Qwp { angle_deg: f64 },
    /// Arbitrary polarization unitary.
    Jones(Operator2<f64>),
    /// Moves the `displaced` polarization of every rail in scope by `shift` rails.
    BeamDisplacer { displaced: Polarization, shift: i32 },
    /// Transmits `keep`, sends the other polarization to a loss port.
    Pbs { keep: Polarization },
    /// Quartz-crystal dephaser: removes coherence between distinct rails in scope.
    Dephaser,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Stage {
    pub element: Element,
    /// Rails acted on; for a beam displacer the rails whose modes shift.
    pub rails: Vec<usize>,
}

impl Stage {
    pub fn new(element: Element, rails: impl Into<Vec<usize>>) -> Self {
        Self { element, rails: rails.into() }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub rails: usize,
    pub input_rails: [usize; 2],
    pub output_rails: [usize; 2],
    pub stages: Vec<Stage>,
}

impl Circuit {
    /// Circuit with no stages on two rails.
    pub fn empty() -> Self {
        Self { rails: 2, input_rails: [0, 1], output_rails: [0, 1], stages: Vec::new() }
    }

    /// Validates and lowers the circuit. Light that a displacer would push
    /// off the rail grid or onto an occupied mode is a validation error.
    pub fn compile(&self) -> Result<CompiledCircuit> {
        CompiledCircuit::new(self, true)
    }

    /// Like [`compile`](Self::compile), but mismatched light is sent to a
    /// dump port and counts as lost. Used for misaligned settings.
    pub fn compile_lossy(&self) -> Result<CompiledCircuit> {
        CompiledCircuit::new(self, false)
    }
}

/// A mode of the compiled circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    Rail(usize, Polarization),
    /// Loss port of PBS stage `stage` on rail `rail`.
    Port { stage: usize, rail: usize },
    /// Light discarded by displacer stage `stage` at rail `rail`.
    Dump { stage: usize, rail: usize },
}

#[derive(Clone, Debug)]
enum StageOp {
    Linear(DMatrix<C>),
    Dephase(Vec<usize>),
}

/// Validated circuit with every stage lowered to a mode-space operator.
#[derive(Clone, Debug)]
pub struct CompiledCircuit {
    modes: Vec<Mode>,
    ops: Vec<StageOp>,
    input_rails: [usize; 2],
    output_rails: [usize; 2],
    rails: usize,
}

fn rail_index(rail: usize, pol: Polarization) -> usize {
    2 * rail + pol.offset()
}

fn check_rails(rails: &[usize], total: usize, stage: usize) -> Result<()> {
    if rails.is_empty() {
        return Err(Error::Circuit(format!("stage {stage} has no rails")));
    }
    if let Some(r) = rails.iter().find(|&&r| r >= total) {
        return Err(Error::Circuit(format!("stage {stage} uses rail {r} of {total}")));
    }
    Ok(())
}

impl CompiledCircuit {
    fn new(c: &Circuit, strict: bool) -> Result<Self> {
        if c.rails == 0 {
            return Err(Error::Circuit("circuit has no rails".into()));
        }
        for (what, pair) in [("input", c.input_rails), ("output", c.output_rails)] {
            if pair[0] == pair[1] || pair.iter().any(|&r| r >= c.rails) {
                return Err(Error::Circuit(format!("bad {what} rails {pair:?} for {} rails", c.rails)));
            }
        }
        let mut modes: Vec<Mode> = (0..c.rails)
            .flat_map(|r| [Mode::Rail(r, Polarization::H), Mode::Rail(r, Polarization::V)])
            .collect();
        for (k, st) in c.stages.iter().enumerate() {
            match st.element {
                Element::Pbs { .. } => modes.extend(st.rails.iter().map(|&rail| Mode::Port { stage: k, rail })),
                Element::BeamDisplacer { .. } => modes.extend((0..c.rails).map(|rail| Mode::Dump { stage: k, rail })),
                _ => {}
            }
        }
        let dim = modes.len();
        let index_of = |mode: Mode| modes.iter().position(|m| *m == mode).expect("port allocated");

        // Running transfer matrix; a mode is occupied when some input
        // amplitude reaches it.
        let mut t = DMatrix::<C>::zeros(dim, 4);
        for (b, m) in [
            rail_index(c.input_rails[0], Polarization::H),
            rail_index(c.input_rails[0], Polarization::V),
            rail_index(c.input_rails[1], Polarization::H),
            rail_index(c.input_rails[1], Polarization::V),
        ]
        .into_iter()
        .enumerate()
        {
            t[(m, b)] = C::one();
        }
        let occupied = |t: &DMatrix<C>, i: usize| t.row(i).norm() > OCCUPANCY_TOL;

        let mut ops = Vec::with_capacity(c.stages.len());
        for (k, st) in c.stages.iter().enumerate() {
            check_rails(&st.rails, c.rails, k)?;
            let mut m = DMatrix::<C>::identity(dim, dim);
            match &st.element {
                Element::Hwp { .. } | Element::Qwp { .. } | Element::Jones(_) => {
                    let j = match &st.element {
                        Element::Hwp { angle_deg } => jones_hwp(*angle_deg),
                        Element::Qwp { angle_deg } => jones_qwp(*angle_deg),
                        Element::Jones(u) => *u,
                        _ => unreachable!(),
                    };
                    for &r in &st.rails {
                        let (h, v) = (rail_index(r, Polarization::H), rail_index(r, Polarization::V));
                        m[(h, h)] = j.get(0, 0);
                        m[(h, v)] = j.get(0, 1);
                        m[(v, h)] = j.get(1, 0);
                        m[(v, v)] = j.get(1, 1);
                    }
                }
                Element::BeamDisplacer { displaced, shift } => {
                    let scope: BTreeSet<usize> = st.rails.iter().copied().collect();
                    for &r in &scope {
                        let src = rail_index(r, *displaced);
                        m[(src, src)] = C::zero();
                    }
                    for &r in &scope {
                        let src = rail_index(r, *displaced);
                        let target = r as i64 + i64::from(*shift);
                        if !(0..c.rails as i64).contains(&target) {
                            if strict && occupied(&t, src) {
                                return Err(Error::Circuit(format!(
                                    "stage {k}: displacer pushes occupied mode ({r},{displaced}) off rail grid"
                                )));
                            }
                            m[(index_of(Mode::Dump { stage: k, rail: r }), src)] = C::one();
                            continue;
                        }
                        let target = target as usize;
                        let dst = rail_index(target, *displaced);
                        if !scope.contains(&target) {
                            if strict && occupied(&t, src) && occupied(&t, dst) {
                                return Err(Error::Circuit(format!(
                                    "stage {k}: displacer merges two occupied modes on rail {target}"
                                )));
                            }
                            m[(dst, dst)] = C::zero();
                            m[(index_of(Mode::Dump { stage: k, rail: target }), dst)] = C::one();
                        }
                        m[(dst, src)] = C::one();
                    }
                }
                Element::Pbs { keep } => {
                    for &r in &st.rails {
                        let rej = rail_index(r, keep.other());
                        let port = index_of(Mode::Port { stage: k, rail: r });
                        m[(rej, rej)] = C::zero();
                        m[(port, port)] = C::zero();
                        m[(port, rej)] = C::one();
                    }
                }
                Element::Dephaser => {
                    ops.push(StageOp::Dephase(st.rails.clone()));
                    continue;
                }
            }
            t = &m * t;
            ops.push(StageOp::Linear(m));
        }
        Ok(Self { modes, ops, input_rails: c.input_rails, output_rails: c.output_rails, rails: c.rails })
    }

    pub fn dim(&self) -> usize {
        self.modes.len()
    }

    pub fn modes(&self) -> &[Mode] {
        &self.modes
    }

    pub fn has_dephaser(&self) -> bool {
        self.ops.iter().any(|o| matches!(o, StageOp::Dephase(_)))
    }

    fn basis_modes(&self, rails: [usize; 2]) -> [usize; 4] {
        [
            rail_index(rails[0], Polarization::H),
            rail_index(rails[0], Polarization::V),
            rail_index(rails[1], Polarization::H),
            rail_index(rails[1], Polarization::V),
        ]
    }

    fn embed(&self) -> DMatrix<C> {
        let mut j = DMatrix::<C>::zeros(self.dim(), 4);
        for (b, m) in self.basis_modes(self.input_rails).into_iter().enumerate() {
            j[(m, b)] = C::one();
        }
        j
    }

    /// Mode-space transfer matrix applied to the input embedding (dim x 4).
    /// Only defined for circuits without dephasers.
    pub fn transfer(&self) -> Result<DMatrix<C>> {
        let mut t = self.embed();
        for op in &self.ops {
            match op {
                StageOp::Linear(m) => t = m * t,
                StageOp::Dephase(_) => {
                    return Err(Error::Circuit("dephasing circuit has no transfer matrix".into()))
                }
            }
        }
        Ok(t)
    }

    /// Kraus operator `V` from the input basis to the output-rail basis.
    pub fn kraus(&self) -> Result<Operator4<f64>> {
        let t = self.transfer()?;
        let out = self.basis_modes(self.output_rails);
        Ok(Operator::from_fn(|i, j| t[(out[i], j)]))
    }

    fn dephase(&self, rho: &mut DMatrix<C>, rails: &[usize]) {
        let rail_of = |m: &Mode| match m {
            Mode::Rail(r, _) if rails.contains(r) => Some(*r),
            _ => None,
        };
        for (i, mi) in self.modes.iter().enumerate() {
            for (j, mj) in self.modes.iter().enumerate() {
                if let (Some(a), Some(b)) = (rail_of(mi), rail_of(mj)) {
                    if a != b {
                        rho[(i, j)] = C::zero();
                    }
                }
            }
        }
    }

    /// Pushes a (not necessarily Hermitian) 4x4 input operator through the
    /// circuit; every stage acts linearly on operators.
    fn propagate(&self, input: &DMatrix<C>) -> DMatrix<C> {
        let j = self.embed();
        let mut rho = &j * input * j.adjoint();
        for op in &self.ops {
            match op {
                StageOp::Linear(m) => rho = m * rho * m.adjoint(),
                StageOp::Dephase(rails) => self.dephase(&mut rho, rails),
            }
        }
        rho
    }

    fn kept_indices(&self, kept: &KeptModes) -> Result<Vec<usize>> {
        Ok(match kept {
            KeptModes::OutputRails => self.basis_modes(self.output_rails).to_vec(),
            KeptModes::All => (0..self.dim()).collect(),
            KeptModes::Rails(list) => {
                let mut v = Vec::with_capacity(list.len());
                for &(r, p) in list {
                    if r >= self.rails {
                        return Err(Error::Circuit(format!("kept rail {r} outside circuit")));
                    }
                    v.push(rail_index(r, p));
                }
                v
            }
        })
    }

    /// POVM element of detecting the photon in the kept modes:
    /// `E_ij = Tr(Π_kept Φ(|j><i|))`, which equals `V†V` for lossless
    /// linear circuits.
    pub fn effective_measurement_operator(&self, kept: &KeptModes) -> Result<Operator4<f64>> {
        let idx = self.kept_indices(kept)?;
        let mut e = [[C::zero(); 4]; 4];
        for (i, row) in e.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                let mut unit = DMatrix::<C>::zeros(4, 4);
                unit[(j, i)] = C::one();
                let out = self.propagate(&unit);
                *entry = idx.iter().map(|&m| out[(m, m)]).sum();
            }
        }
        Ok(Operator::from_rows(e))
    }
}

/// Output modes counted as a detection.
#[derive(Clone, Debug, PartialEq)]
pub enum KeptModes {
    OutputRails,
    All,
    Rails(Vec<(usize, Polarization)>),
}

pub enum CircuitInput<'a> {
    Pure(&'a StateVector<f64>),
    Mixed(&'a DensityMatrix<f64>),
}

#[derive(Clone, Debug)]
pub enum FieldState {
    Pure(DVector<C>),
    Mixed(DMatrix<C>),
}

#[derive(Clone, Debug)]
pub struct CircuitOutput {
    pub field: FieldState,
    output_modes: [usize; 4],
}

impl CircuitOutput {
    pub fn density(&self) -> DMatrix<C> {
        match &self.field {
            FieldState::Pure(v) => v * v.adjoint(),
            FieldState::Mixed(m) => m.clone(),
        }
    }

    /// Unnormalized state on the output rails in the four-level basis.
    pub fn output_operator(&self) -> Operator4<f64> {
        let d = self.density();
        let o = self.output_modes;
        Operator::from_fn(|i, j| d[(o[i], o[j])])
    }

    pub fn total_probability(&self) -> f64 {
        self.density().trace().re
    }
}

/// Runs a state through the circuit. Pure inputs stay pure unless a
/// dephaser is present.
pub fn apply_circuit(circuit: &Circuit, input: CircuitInput<'_>) -> Result<CircuitOutput> {
    let compiled = circuit.compile()?;
    let output_modes = compiled.basis_modes(compiled.output_rails);
    let field = match input {
        CircuitInput::Pure(psi) if !compiled.has_dephaser() => {
            let t = compiled.transfer()?;
            let amps = DVector::from_iterator(4, psi.amplitudes().iter().copied());
            FieldState::Pure(t * amps)
        }
        CircuitInput::Pure(psi) => FieldState::Mixed(compiled.propagate(&psi.to_density().matrix().to_dmatrix())),
        CircuitInput::Mixed(rho) => FieldState::Mixed(compiled.propagate(&rho.matrix().to_dmatrix())),
    };
    Ok(CircuitOutput { field, output_modes })
}

pub fn effective_measurement_operator(circuit: &Circuit, kept: &KeptModes) -> Result<Operator4<f64>> {
    circuit.compile()?.effective_measurement_operator(kept)
}
