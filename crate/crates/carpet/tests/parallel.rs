use carpet::jobs::dynamical_classifier;
use carpet::parallel::{lock_order_check, render_dynamical, render_parameter};
use carpet_core::render::{self, Viewport};
use carpet_core::Complex;

#[test]
fn parallel_render_matches_sequential() {
    let cl = dynamical_classifier(Complex::new(1e-3, 0.0), 300, 1e-3).unwrap();
    let view = Viewport::new(Complex::new(0.5, 0.0), 5.0, 5.0, 150, 130).unwrap();
    let seq = render::render_dynamical(&cl, &view);
    for workers in [Some(1), Some(2), Some(5), None] {
        assert_eq!(render_dynamical(&cl, &view, workers).unwrap(), seq, "{workers:?}");
    }
}

#[test]
fn parallel_parameter_render_matches_sequential() {
    let view = Viewport::new(Complex::new(0.0, 0.0), 0.02, 0.02, 70, 70).unwrap();
    let seq = render::render_parameter(&view, 200, 1e-3);
    assert_eq!(render_parameter(&view, 200, 1e-3, Some(3)).unwrap(), seq);
}

#[test]
fn lock_order_is_seeded_and_clean() {
    let cl = dynamical_classifier(Complex::new(0.0, 0.0), 200, 1e-3).unwrap();
    let view = Viewport::new(Complex::new(0.5, 0.0), 5.0, 5.0, 64, 64).unwrap();
    let grid = render_dynamical(&cl, &view, Some(2)).unwrap();
    let a = lock_order_check(&cl, &view, &grid, 300, 11);
    assert_eq!(a, lock_order_check(&cl, &view, &grid, 300, 11));
    assert_eq!((a.samples, a.violations), (300, 0));
    assert_eq!(lock_order_check(&cl, &view, &grid, 100_000, 1).samples, 64 * 64);
}
