use sdym_chain_web::{kp_evolve, kp_soliton_residual, sphere_curvature};

#[test]
fn soliton_residual_detects_corruption() {
    let clean = kp_soliton_residual(256, 1.0, 0.0).ok().unwrap();
    let bad = kp_soliton_residual(256, 1.0, 0.1).ok().unwrap();
    assert!(clean[0] < 1e-6, "{clean:?}");
    assert!(bad[0] > 0.05, "{bad:?}");
}

#[test]
fn evolve_tracks_exact_soliton() {
    let p = kp_evolve(256, 1.0, 0.5, 0.002).ok().unwrap();
    assert_eq!(p.x().len(), 256);
    assert!(p.max_error() < 1e-4, "{}", p.max_error());
}

#[test]
fn sphere_curvature_matches_radius() {
    let v = sphere_curvature(64, 2.0).ok().unwrap();
    assert!(v[0] < 1e-8);
    assert!((v[1] - 2.0).abs() < 1e-6);
}
