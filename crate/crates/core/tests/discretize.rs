use dynbc::discretize::*;
use dynbc::matcore::{re, CMat};
use dynbc::Error;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Weights for the m-th derivative on k > m distinct nodes are exact on
    /// every polynomial of degree < k.
    #[test]
    fn stencils_differentiate_polynomials_exactly(
        offsets in proptest::collection::btree_set(-6i32..7, 3..7),
        m in 0usize..3,
        x0 in -1.0f64..1.0,
    ) {
        let nodes: Vec<f64> = offsets.iter().map(|&o| o as f64 * 0.25).collect();
        prop_assume!(nodes.len() > m);
        let w = fornberg(x0, &nodes, m);
        for deg in 0..nodes.len() {
            let got: f64 = w.iter().zip(&nodes).map(|(c, x)| c * x.powi(deg as i32)).sum();
            // m-th derivative of x^deg at x0
            let want = if deg < m {
                0.0
            } else {
                let falling: f64 = (0..m).map(|i| (deg - i) as f64).product();
                falling * x0.powi((deg - m) as i32)
            };
            prop_assert!((got - want).abs() <= 1e-8 * (1.0 + want.abs()), "deg {deg}: {got} vs {want}");
        }
    }

    #[test]
    fn plate_shapes_follow_the_grid(n in 8usize..40) {
        let p = build_interval_plate(n).unwrap();
        prop_assert_eq!(p.dim_dx(), 2);
        prop_assert_eq!(p.l().cols(), p.dim_x());
        prop_assert_eq!(p.b3().shape(), (2, 2));
        let nodes = p.meta().boundary_nodes.clone().unwrap();
        prop_assert_eq!(nodes.len(), 2);
        // L is a selection of the listed nodes
        for (r, &i) in nodes.iter().enumerate() {
            prop_assert_eq!(p.l()[(r, i)], re(1.0));
            prop_assert!((p.l().row(r).iter().map(|z| z.norm()).sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }
}

#[test]
fn grids_below_four_nodes_are_rejected() {
    assert!(matches!(build_interval_plate(3), Err(Error::InvalidSize(_))));
    // the one-sided boundary stencil needs eight interior nodes
    assert!(matches!(build_interval_plate(7), Err(Error::InvalidSize(_))));
    assert!(build_strongly_damped_interval(re(1.0), [re(1.0); 4], 2).is_err());
}

#[test]
fn network_dimensions() {
    let g = NetworkGraph::uniform(4, vec![(0, 1), (0, 2), (0, 3)], 8).unwrap();
    let v = 4;
    let m = CMat::from_fn(v, v, |i, j| if i == j { re(-2.0) } else { re(0.0) });
    let phi = CMat::from_fn(v, 3, |_, _| re(1.0));
    let p = build_network_wave(&g, &m, &m, &CMat::zeros(v, v), &phi).unwrap();
    assert_eq!(p.dim_x(), g.dofs());
    assert_eq!(p.dim_dx(), v);
}

#[test]
fn disconnected_network_is_rejected() {
    let g = NetworkGraph::uniform(4, vec![(0, 1), (2, 3)], 8);
    assert!(matches!(g, Err(Error::DisconnectedGraph)));
}

#[test]
fn coupling_scale_multiplies_b1_and_b2_only() {
    let p = build_interval_plate(8).unwrap();
    let q = p.with_coupling_scale(0.5);
    assert_eq!(q.b1(), &p.b1().scale_real(0.5));
    assert_eq!(q.b2(), &p.b2().scale_real(0.5));
    assert_eq!(q.b3(), p.b3());
    assert_eq!(q.a(), p.a());
}
