//! The measurement-cost metric and optimal shot allocation.
//!
//! For a partition into fragments with variances V_a on a state, the
//! minimal total shot count for accuracy eps is (1/eps^2)(sum_a sqrt(V_a))^2,
//! attained with shot fractions proportional to sqrt(V_a). The
//! eps-independent constant (sum_a sqrt(V_a))^2 is the figure of merit.

use serde::{Deserialize, Serialize};

use super::{variance, StateVector};
use crate::partition::Partition;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MeasurementBudget {
    /// Per-fragment variances on the reference state.
    pub variances: Vec<f64>,
    /// Optimal shot fractions m_a / M (sum to 1; uniform if all variances
    /// vanish).
    pub shot_fractions: Vec<f64>,
    /// (sum_a sqrt(Var_a))^2 = eps^2 M(eps).
    pub metric: f64,
}

pub fn variance_metric(p: &Partition, s: &StateVector) -> MeasurementBudget {
    assert_eq!(p.n_qubits, s.n_qubits(), "variance_metric: dimension mismatch");
    let variances: Vec<f64> = p.fragments.iter().map(|f| variance(f, s)).collect();
    budget_from_variances(variances)
}

pub fn budget_from_variances(variances: Vec<f64>) -> MeasurementBudget {
    let roots: Vec<f64> = variances.iter().map(|v| v.sqrt()).collect();
    let total: f64 = roots.iter().sum();
    let metric = total * total;
    let shot_fractions = if total > 0.0 {
        roots.iter().map(|r| r / total).collect()
    } else if variances.is_empty() {
        Vec::new()
    } else {
        vec![1.0 / variances.len() as f64; variances.len()]
    };
    MeasurementBudget {
        variances,
        shot_fractions,
        metric,
    }
}
