use super::quadrature::{integrate, pole_tail, Pole, QuadratureSpec};
use crate::error::Result;

/// `t ↦ ∫₀^t g` on `(0, hi]`, tabulated on a uniform grid so that repeated
/// queries only integrate over one grid cell.
pub struct Cumulative<F> {
    g: F,
    nodes: Vec<f64>,
    values: Vec<f64>,
    spec: QuadratureSpec,
    pole: Pole,
}

impl<F> Cumulative<F>
where
    F: Fn(f64) -> Result<f64>,
{
    pub fn new(g: F, hi: f64, cells: usize, spec: &QuadratureSpec, pole: Pole) -> Result<Self> {
        let d0 = spec.pole_cutoff.min(hi);
        let cells = cells.max(1);
        let mut nodes = Vec::with_capacity(cells + 1);
        nodes.push(d0);
        for i in 1..=cells {
            nodes.push(d0 + (hi - d0) * i as f64 / cells as f64);
        }
        let cell_spec = QuadratureSpec {
            abs_tol: spec.abs_tol / cells as f64,
            ..*spec
        };
        let mut values = Vec::with_capacity(nodes.len());
        values.push(pole_tail(&mut |t| g(t), d0, pole)?);
        for w in nodes.windows(2) {
            let last = *values.last().unwrap();
            values.push(last + integrate(&g, w[0], w[1], &cell_spec)?);
        }
        Ok(Cumulative { g, nodes, values, spec: cell_spec, pole })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn node_values(&self) -> &[f64] {
        &self.values
    }

    pub fn total(&self) -> f64 {
        *self.values.last().unwrap()
    }

    pub fn at(&self, t: f64) -> Result<f64> {
        if t <= 0.0 {
            return Ok(0.0);
        }
        if t <= self.nodes[0] {
            return pole_tail(&mut |s| (self.g)(s), t, self.pole);
        }
        let k = match self.nodes.binary_search_by(|x| x.total_cmp(&t)) {
            Ok(k) => return Ok(self.values[k]),
            Err(k) => k - 1,
        };
        if k + 1 >= self.nodes.len() {
            let last = self.nodes.len() - 1;
            return Ok(self.values[last] + integrate(|s| (self.g)(s), self.nodes[last], t, &self.spec)?);
        }
        Ok(self.values[k] + integrate(|s| (self.g)(s), self.nodes[k], t, &self.spec)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_antiderivative() {
        let spec = QuadratureSpec::default();
        let c = Cumulative::new(|t: f64| Ok(t * t), 2.0, 16, &spec, Pole::Power(2.0)).unwrap();
        for &t in &[1e-7, 0.3, 1.0, 1.77, 2.0] {
            assert!((c.at(t).unwrap() - t * t * t / 3.0).abs() < 1e-10);
        }
        assert!((c.total() - 8.0 / 3.0).abs() < 1e-10);
    }
}
