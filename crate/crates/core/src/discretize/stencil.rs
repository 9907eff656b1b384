/// Finite-difference weights for the `m`-th derivative at `x0` from values at
/// `nodes` (Fornberg's recursion).
pub fn fornberg(x0: f64, nodes: &[f64], m: usize) -> Vec<f64> {
    let n = nodes.len();
    assert!(n > m, "need more nodes than the derivative order");
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = nodes[0] - x0;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = nodes[i] - x0;
        for j in 0..i {
            let c3 = nodes[i] - nodes[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.into_iter().map(|row| row[m]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_second_difference() {
        let w = fornberg(0.0, &[-1.0, 0.0, 1.0], 2);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] + 2.0).abs() < 1e-14 && (w[2] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn one_sided_first_derivative() {
        let w = fornberg(0.0, &[0.0, 1.0, 2.0], 1);
        let want = [-1.5, 2.0, -0.5];
        for (a, b) in w.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_on_polynomials_of_stencil_degree() {
        // 7 nodes integrate x^6 → 4th derivative 360 x^2, at x0 = 0.3
        let nodes: Vec<f64> = (-1..6).map(|k| 0.1 * k as f64).collect();
        let w = fornberg(0.3, &nodes, 4);
        let d4: f64 = w.iter().zip(&nodes).map(|(w, x)| w * x.powi(6)).sum();
        assert!((d4 - 360.0 * 0.09).abs() < 1e-7, "{d4}");
    }
}
