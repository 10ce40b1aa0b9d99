//! Matrix metrics: symmetry percentage, reducibility (nodes still in use
//! after pruning), per-symbol usage and L1 drift between state matrices.

use serde::{Deserialize, Serialize};

use crate::alphabet::Alphabet;
use crate::error::{Error, Result};
use crate::graph::TransitionGraph;
use crate::matrix::SquareMatrix;
use crate::scalar::Scalar;

/// `100 × (1 − Σ|A − Aᵀ| / (2·Σ A))` for a non-negative, non-zero matrix.
pub fn symmetry_pct<T: Scalar>(weights: &SquareMatrix<T>) -> Result<T> {
    let mut total = T::zero();
    let mut asym = T::zero();
    let n = weights.dim();
    for i in 0..n {
        for j in 0..n {
            let a = *weights.get(i, j);
            if !a.is_finite() || a < T::zero() {
                return Err(Error::InvalidMatrix(format!(
                    "entry ({i},{j}) = {a} is not a finite non-negative value"
                )));
            }
            total = total + a;
            asym = asym + (a - *weights.get(j, i)).abs();
        }
    }
    if total == T::zero() {
        return Err(Error::InvalidMatrix(
            "symmetry of an all-zero matrix is undefined".into(),
        ));
    }
    let hundred = T::lit(100.0);
    let pct = hundred * (T::one() - asym / (T::lit(2.0) * total));
    Ok(pct.max(T::zero()).min(hundred))
}

/// In-degree plus out-degree of each symbol, counting transitions whose
/// weight is strictly above `threshold`. A used self-loop counts twice.
pub fn usage<T: Scalar>(weights: &SquareMatrix<T>, threshold: T) -> Vec<usize> {
    let n = weights.dim();
    let mut degree = vec![0; n];
    for i in 0..n {
        for j in 0..n {
            if *weights.get(i, j) > threshold {
                degree[i] += 1;
                degree[j] += 1;
            }
        }
    }
    degree
}

/// Number of symbols with at least one incident transition above `threshold`.
pub fn reducibility<T: Scalar>(weights: &SquareMatrix<T>, threshold: T) -> usize {
    usage(weights, threshold).iter().filter(|&&d| d > 0).count()
}

/// `Σ |current − reference|` over all elements.
pub fn drift_l1<T: Scalar>(current: &SquareMatrix<T>, reference: &SquareMatrix<T>) -> Result<T> {
    reference.ensure_dim(current.dim())?;
    Ok(current
        .as_slice()
        .iter()
        .zip(reference.as_slice())
        .fold(T::zero(), |acc, (&a, &b)| acc + (a - b).abs()))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StyleReport {
    pub alphabet: String,
    pub symbols: Vec<String>,
    pub symmetry_pct: f64,
    pub reducibility: usize,
    pub nonzero_transitions: usize,
    pub per_symbol_usage: Vec<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub drift_l1: Option<f64>,
}

impl StyleReport {
    /// Report on a graph's effective weights; "used" means strictly above
    /// `threshold` (the curve's `g_min` when `None`). Drift compares raw
    /// states against `reference` when given.
    pub fn for_graph<T: Scalar>(
        graph: &TransitionGraph<T>,
        threshold: Option<T>,
        reference: Option<&TransitionGraph<T>>,
    ) -> Result<Self> {
        let weights = graph.effective_weights();
        let threshold = threshold.unwrap_or(graph.curve().g_min());
        let per_symbol_usage = usage(&weights, threshold);
        let drift = reference
            .map(|r| drift_l1(&graph.states(), &r.states()))
            .transpose()?;
        Ok(Self {
            alphabet: graph.alphabet().label().to_string(),
            symbols: graph.alphabet().symbol_names(),
            symmetry_pct: symmetry_pct(&weights)?.as_f64(),
            reducibility: per_symbol_usage.iter().filter(|&&d| d > 0).count(),
            nonzero_transitions: weights
                .as_slice()
                .iter()
                .filter(|&&w| w > threshold)
                .count(),
            per_symbol_usage,
            drift_l1: drift.map(Scalar::as_f64),
        })
    }

    pub fn alphabet_kind(&self) -> Option<Alphabet> {
        Alphabet::from_size(self.symbols.len())
    }
}

impl std::fmt::Display for StyleReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(
            f,
            "{} graph ({} symbols)",
            self.alphabet,
            self.symbols.len()
        )?;
        writeln!(f, "  symmetry        {:>10.3} %", self.symmetry_pct)?;
        writeln!(f, "  reducibility    {:>10}", self.reducibility)?;
        writeln!(f, "  used transitions{:>10}", self.nonzero_transitions)?;
        if let Some(d) = self.drift_l1 {
            writeln!(f, "  drift (L1)      {:>10.6}", d)?;
        }
        writeln!(f, "  usage (in+out degree):")?;
        for (name, d) in self.symbols.iter().zip(&self.per_symbol_usage) {
            writeln!(f, "    {name:<18} {d:>4}")?;
        }
        Ok(())
    }
}
