//! Gauss–Legendre rules mapped to `[0, 1]` and a bisecting adaptive
//! integrator built on them.

use gauss_quad::GaussLegendre;

/// A Gauss–Legendre rule with nodes and weights on `[0, 1]`.
#[derive(Clone, Debug)]
pub struct UnitRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl UnitRule {
    pub fn gauss_legendre(points: usize) -> Self {
        let rule = GaussLegendre::new(points.max(2)).expect("at least two points");
        let (nodes, weights) = rule
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .unzip();
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `∫_a^b f` with this rule on a single panel.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let h = b - a;
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(a + h * x))
            .sum::<f64>()
            * h
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub converged: bool,
}

/// Adaptive bisection: a panel is accepted when the two-halves estimate
/// agrees with the whole-panel estimate to `rel_tol` of the running total.
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64, max_depth: u32) -> Estimate {
    let rule = UnitRule::gauss_legendre(10);
    let whole = rule.integrate(a, b, f);
    let scale = whole.abs().max(f64::MIN_POSITIVE);
    let mut converged = true;
    let value = refine(f, &rule, a, b, whole, rel_tol * scale, max_depth, &mut converged);
    Estimate { value, converged }
}

#[allow(clippy::too_many_arguments)]
fn refine<F: Fn(f64) -> f64>(
    f: &F,
    rule: &UnitRule,
    a: f64,
    b: f64,
    whole: f64,
    abs_tol: f64,
    depth: u32,
    converged: &mut bool,
) -> f64 {
    let mid = 0.5 * (a + b);
    let left = rule.integrate(a, mid, f);
    let right = rule.integrate(mid, b, f);
    let split = left + right;
    if (split - whole).abs() <= abs_tol || !split.is_finite() {
        if !split.is_finite() {
            *converged = false;
        }
        return split;
    }
    if depth == 0 {
        *converged = false;
        return split;
    }
    refine(f, rule, a, mid, left, 0.5 * abs_tol, depth - 1, converged)
        + refine(f, rule, mid, b, right, 0.5 * abs_tol, depth - 1, converged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_rule_is_exact_for_polynomials() {
        let r = UnitRule::gauss_legendre(4);
        let v = r.integrate(0.0, 2.0, |x| x.powi(7));
        assert!((v - 32.0).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_sharp_feature() {
        let e = adaptive(&|x: f64| (-(x - 0.3).powi(2) * 1e4).exp(), 0.0, 1.0, 1e-12, 40);
        assert!(e.converged);
        let exact = std::f64::consts::PI.sqrt() / 100.0;
        assert!((e.value - exact).abs() < 1e-12);
    }
}
