//! Reflexive directed transition graph: one memristive connection per
//! ordered symbol pair (self-loops included), with bookkeeping for the
//! connections still relaxing after a spike.

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::matrix::SquareMatrix;
use crate::memristor::{ConductanceCurve, MemristorElement, RelaxPhase};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq)]
pub struct TransitionGraph<T> {
    alphabet: Alphabet,
    curve: ConductanceCurve<T>,
    elements: Vec<MemristorElement<T>>,
    // Row-major indices of elements whose phase is not `None`.
    pending: Vec<usize>,
}

impl<T: Scalar> TransitionGraph<T> {
    /// Every connection at state 0 (weight `g_min`).
    pub fn new(alphabet: Alphabet, curve: ConductanceCurve<T>) -> Self {
        let n = alphabet.size();
        Self {
            alphabet,
            curve,
            elements: vec![MemristorElement::default(); n * n],
            pending: Vec::new(),
        }
    }

    /// Graph with the given raw states and no relaxation in progress.
    pub fn from_states(
        alphabet: Alphabet,
        curve: ConductanceCurve<T>,
        states: &SquareMatrix<T>,
    ) -> Result<Self> {
        states.ensure_dim(alphabet.size())?;
        let elements = states
            .as_slice()
            .iter()
            .map(|&s| MemristorElement::new(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            alphabet,
            curve,
            elements,
            pending: Vec::new(),
        })
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn curve(&self) -> &ConductanceCurve<T> {
        &self.curve
    }

    /// Number of symbols N.
    pub fn size(&self) -> usize {
        self.alphabet.size()
    }

    /// Number of connections, N².
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn index(&self, from: usize, to: usize) -> Result<usize> {
        let n = self.size();
        for index in [from, to] {
            if index >= n {
                return Err(Error::UnknownSymbol { index, size: n });
            }
        }
        Ok(from * n + to)
    }

    pub fn element(&self, from: usize, to: usize) -> Result<&MemristorElement<T>> {
        Ok(&self.elements[self.index(from, to)?])
    }

    pub fn elements(&self) -> &[MemristorElement<T>] {
        &self.elements
    }

    pub fn effective_weight(&self, from: usize, to: usize) -> Result<T> {
        Ok(self.element(from, to)?.effective_weight(&self.curve))
    }

    /// Conductance times relaxation factor for every connection.
    pub fn effective_weights(&self) -> SquareMatrix<T> {
        let data = self
            .elements
            .iter()
            .map(|e| e.effective_weight(&self.curve))
            .collect();
        SquareMatrix::from_vec(self.size(), data).expect("graph holds N² elements")
    }

    /// Effective weights of the transitions out of `from`, written into `out`.
    pub(crate) fn row_weights_into(&self, from: usize, out: &mut Vec<T>) {
        let n = self.size();
        out.clear();
        out.extend(
            self.elements[from * n..(from + 1) * n]
                .iter()
                .map(|e| e.effective_weight(&self.curve)),
        );
    }

    pub fn states(&self) -> SquareMatrix<T> {
        let data = self.elements.iter().map(|e| e.state()).collect();
        SquareMatrix::from_vec(self.size(), data).expect("graph holds N² elements")
    }

    fn mark_spiked(&mut self, index: usize) {
        let element = &mut self.elements[index];
        if !element.phase().is_relaxing() {
            self.pending.push(index);
        }
        *element = element.with_phase(RelaxPhase::Quarter);
    }

    /// Feeds a fired transition back into the graph: `from -> to` moves up
    /// by `inc_step`, the reverse `to -> from` moves down by `dec_step`, and
    /// both restart the quarter/half relaxation schedule. A self-transition
    /// is only incremented.
    pub fn apply_spike(&mut self, from: usize, to: usize, inc_step: T, dec_step: T) -> Result<()> {
        let forward = self.index(from, to)?;
        let reverse = self.index(to, from)?;
        let raised = self.elements[forward].increment(inc_step)?;
        if forward == reverse {
            self.elements[forward] = raised;
            self.mark_spiked(forward);
            return Ok(());
        }
        let lowered = self.elements[reverse].decrement(dec_step)?;
        self.elements[forward] = raised;
        self.elements[reverse] = lowered;
        self.mark_spiked(forward);
        self.mark_spiked(reverse);
        Ok(())
    }

    /// One step of the relaxation schedule: quarter becomes half, half ends.
    pub fn advance_relaxation(&mut self) {
        let elements = &mut self.elements;
        self.pending.retain(|&index| {
            let next = elements[index].phase().advanced();
            elements[index] = elements[index].with_phase(next);
            next.is_relaxing()
        });
    }

    pub fn clear_relaxation(&mut self) {
        for index in self.pending.drain(..) {
            self.elements[index] = self.elements[index].with_phase(RelaxPhase::None);
        }
    }

    pub fn relaxing_count(&self) -> usize {
        self.pending.len()
    }

    /// Replaces every state with `counts * state_per_count` and clears
    /// relaxation.
    pub fn seed_from_counts(
        &mut self,
        counts: &SquareMatrix<u64>,
        state_per_count: T,
    ) -> Result<()> {
        counts.ensure_dim(self.size())?;
        if !state_per_count.is_finite() || state_per_count < T::zero() {
            return Err(Error::InvalidState(state_per_count.as_f64()));
        }
        let states = counts
            .as_slice()
            .iter()
            .map(|&c| {
                let c = T::from_u64(c).ok_or(Error::InvalidState(c as f64))?;
                MemristorElement::new(c * state_per_count)
            })
            .collect::<Result<Vec<_>>>()?;
        self.elements = states;
        self.pending.clear();
        Ok(())
    }
}
