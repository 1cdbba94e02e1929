use super::InteractionGraph;
use crate::{Error, Result};
use nalgebra::DMatrix;

const WEIGHT_TOL: f64 = 1e-12;

/// Symmetric nonnegative coupling weights `G` summing to one, with the
/// marginal `pi_j = sum_i G_ij` and the column-stochastic `A_ij = G_ij / pi_j`.
#[derive(Debug, Clone)]
pub struct WeightMatrix {
    g: DMatrix<f64>,
    pi: Vec<f64>,
    a: DMatrix<f64>,
}

impl WeightMatrix {
    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        let n = g.nrows();
        if g.ncols() != n || n == 0 {
            return Err(Error::ShapeMismatch(format!(
                "weights must be square and nonempty, got {}x{}",
                g.nrows(),
                g.ncols()
            )));
        }
        for r in 0..n {
            for c in 0..n {
                let x = g[(r, c)];
                if !x.is_finite() || x < 0.0 {
                    return Err(Error::InvalidGraph(format!(
                        "weights[{r}][{c}] = {x} is not a nonnegative number"
                    )));
                }
                if (x - g[(c, r)]).abs() > WEIGHT_TOL {
                    return Err(Error::InvalidGraph(format!(
                        "weights[{r}][{c}] != weights[{c}][{r}]"
                    )));
                }
            }
        }
        let total = g.sum();
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidGraph(format!("weights sum to {total}, not 1")));
        }
        let pi: Vec<f64> = (0..n).map(|j| g.column(j).sum()).collect();
        let a = DMatrix::from_fn(n, n, |i, j| if pi[j] > 0.0 { g[(i, j)] / pi[j] } else { 0.0 });
        Ok(WeightMatrix { g, pi, a })
    }

    /// `G_ij = [ij in E] / (2|E|)`.
    pub fn uniform(graph: &InteractionGraph) -> Result<Self> {
        let m = graph.num_edges();
        if m == 0 {
            return Err(Error::InvalidGraph("uniform weights need at least one edge".into()));
        }
        let n = graph.n();
        let mut g = DMatrix::zeros(n, n);
        let w = 1.0 / (2.0 * m as f64);
        for &(a, b) in graph.edges() {
            g[(a, b)] = w;
            g[(b, a)] = w;
        }
        Self::new(g)
    }

    pub fn n(&self) -> usize {
        self.g.nrows()
    }

    pub fn g(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn pi(&self) -> &[f64] {
        &self.pi
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    /// `tr(A^2) = sum_ij A_ij A_ji`.
    pub fn tr_a_squared(&self) -> f64 {
        let n = self.n();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.a[(i, j)] * self.a[(j, i)];
            }
        }
        s
    }

    pub fn pi_norm_squared(&self) -> f64 {
        self.pi.iter().map(|x| x * x).sum()
    }
}
