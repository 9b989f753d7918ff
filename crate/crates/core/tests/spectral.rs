use dirac_shell_core::spectral::{find_eigenvalues_with, transmission_residual, RootOptions};
use dirac_shell_core::{build_curve, discretize, Coupling, CurveSpec, QuadratureGrid};

fn circle(n: usize) -> QuadratureGrid {
    discretize(&build_curve(&CurveSpec::circle(1.0)).unwrap(), n, 3.0).unwrap()
}

fn opts(c: &Coupling) -> RootOptions {
    RootOptions { samples: 48, check_pde: false, ..RootOptions::new(c) }
}

#[test]
fn root_sets_stable_under_refinement() {
    let (coarse, fine) = (circle(128), circle(256));
    for (e, m) in [(1.0, 0.0), (0.0, 1.0), (-1.0, -1.0), (2.0, 0.5)] {
        let c = Coupling::unit_mass(e, m);
        let a = find_eigenvalues_with(&coarse, &c, &opts(&c)).unwrap().pairs;
        let b = find_eigenvalues_with(&fine, &c, &opts(&c)).unwrap().pairs;
        assert_eq!(a.len(), b.len(), "({e}, {m})");
        for (x, y) in a.iter().zip(&b) {
            assert!((x.z0 - y.z0).abs() <= 1e-8, "({e}, {m}): {} {}", x.z0, y.z0);
        }
    }
}

#[test]
fn transmission_condition_holds_at_roots() {
    let g = circle(256);
    let c = Coupling::unit_mass(1.0, 0.0);
    let r = find_eigenvalues_with(&g, &c, &opts(&c)).unwrap();
    assert!(!r.pairs.is_empty());
    for p in &r.pairs {
        let t = transmission_residual(&g, p, 1e-3, &[3, 64, 129, 200]).unwrap();
        assert!(t <= 5e-2, "{} {t}", p.z0);
    }
}
