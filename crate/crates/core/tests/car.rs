use std::sync::Arc;
use std::time::Instant;

use ising_core::fock::{car_residuals, FockSpace, RapidityGrid, TruncatedFockOperator};
use ising_core::C64;

#[test]
fn car_on_thirty_two_nodes() {
    let start = Instant::now();
    let space = Arc::new(FockSpace::new(RapidityGrid::gauss_legendre(32, 4.0), 4));
    let r = car_residuals(&space);
    assert!(r.mixed < 1e-12, "{r:?}");
    assert!(r.creators < 1e-12 && r.annihilators < 1e-12, "{r:?}");
    assert_eq!(r.pairs, 1024);
    assert!(start.elapsed().as_secs_f64() < 10.0);
}

#[test]
fn smeared_car_reproduces_grid_inner_product() {
    let space = Arc::new(FockSpace::new(RapidityGrid::gauss_legendre(32, 4.0), 4));
    let g: Vec<C64> = (0..32).map(|i| C64::new((0.3 * i as f64).cos(), 0.1 * i as f64).exp() * 0.2).collect();
    let h: Vec<C64> = (0..32).map(|i| C64::new(1.0 / (1.0 + i as f64), (0.7 * i as f64).sin())).collect();
    let w = space.grid().weights();
    let ip: C64 = (0..32).map(|i| g[i].conj() * h[i] * w[i]).sum();
    let zg = TruncatedFockOperator::annihilation(&space, &g.iter().map(|v| v.conj()).collect::<Vec<_>>());
    let zh = TruncatedFockOperator::creation(&space, &h);
    let anti = zg.anticommutator(&zh).unwrap().restrict(3);
    let want = TruncatedFockOperator::identity(&space).restrict(3).scaled(ip);
    assert!(anti.sub(&want).unwrap().max_abs() < 1e-12 * ip.norm().max(1.0));
}
