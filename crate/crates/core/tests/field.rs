use cylflow::basis::{eigenvalue_l, S3_AREA};
use cylflow::field::{diff_y, laplace_s3, SpectralField, SpectralSpace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_field(n: usize, k: usize, seed: u64) -> SpectralField {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut f = SpectralField::zeros(n, k);
    for c in f.coeffs_mut() {
        *c = rng.gen_range(-1.0..1.0);
    }
    f
}

#[test]
fn synthesis_of_simple_modes() {
    let sp = SpectralSpace::new(6, 2);
    let one = SpectralField::mode(6, 2, 0, 0, 1, 1.0);
    let v = sp.synthesize(&one).unwrap();
    assert!(v.iter().all(|x| (x - 1.0).abs() < 1e-14));
    let h2 = SpectralField::mode(6, 2, 2, 0, 1, 1.0);
    let v = sp.synthesize(&h2).unwrap();
    let m = sp.grid.n_omega();
    for (idx, x) in v.iter().enumerate() {
        let y = sp.grid.y_nodes[idx / m];
        assert!((x - (y * y - 2.0)).abs() < 1e-12 * (1.0 + y * y));
    }
}

#[test]
fn analysis_recovers_modes() {
    let sp = SpectralSpace::new(8, 3);
    let m = sp.grid.n_omega();
    let vals: Vec<f64> = (0..sp.n_nodes())
        .map(|idx| {
            let y = sp.grid.y_nodes[idx / m];
            let w = sp.grid.omega_nodes[idx % m];
            (y.powi(3) - 6.0 * y) * w[1]
        })
        .collect();
    let f = sp.analyze(&vals);
    for (n, k, l, c) in f.modes() {
        let expect = if (n, k, l) == (3, 1, 2) { 1.0 } else { 0.0 };
        assert!((c - expect).abs() < 1e-10, "({n},{k},{l}) = {c}");
    }
    let vals: Vec<f64> = (0..sp.n_nodes())
        .map(|idx| sp.grid.y_nodes[idx / m].powi(4))
        .collect();
    let f = sp.analyze(&vals);
    assert!((f.get(4, 0, 1) - 1.0).abs() < 1e-10);
    assert!((f.get(2, 0, 1) - 12.0).abs() < 1e-9);
    assert!((f.get(0, 0, 1) - 12.0).abs() < 1e-9);
    let z = sp.analyze(&vec![0.0; sp.n_nodes()]);
    assert!(z.coeffs().iter().all(|c| *c == 0.0));
}

#[test]
fn round_trip_and_cache() {
    let sp = SpectralSpace::new(10, 4);
    let f = random_field(10, 4, 3);
    let v = sp.synthesize(&f).unwrap();
    let g = sp.analyze(&v);
    let err = f.sub(&g).max_abs();
    assert!(err < 1e-10, "round trip error {err}");
    let cached = sp.synthesize(&f).unwrap();
    let fresh = sp.synthesize_uncached(&f).unwrap();
    let d = cached
        .iter()
        .zip(&fresh)
        .fold(0.0f64, |a, (x, y)| a.max((x - y).abs()));
    assert!(d <= 1e-12);
}

#[test]
fn linearity() {
    let sp = SpectralSpace::new(6, 3);
    let a = random_field(6, 3, 1);
    let b = random_field(6, 3, 2);
    let va = sp.synthesize(&a).unwrap();
    let vb = sp.synthesize(&b).unwrap();
    let vc = sp.synthesize(&a.axpby(2.0, &b, -0.5)).unwrap();
    let scale = va.iter().chain(&vb).fold(0.0f64, |a, b| a.max(b.abs()));
    for i in 0..va.len() {
        let e = 2.0 * va[i] - 0.5 * vb[i];
        assert!((vc[i] - e).abs() < 1e-13 * scale);
    }
}

#[test]
fn derivative_identities() {
    let h3 = SpectralField::mode(6, 1, 3, 0, 1, 1.0);
    let d = diff_y(&h3);
    assert_eq!(d.get(2, 0, 1), 3.0);
    assert!(d
        .modes()
        .filter(|m| (m.0, m.1) != (2, 0))
        .all(|m| m.3 == 0.0));
    for l in 1..=4 {
        let w = SpectralField::mode(2, 1, 0, 1, l, 1.0);
        assert_eq!(laplace_s3(&w).get(0, 1, l), -3.0);
    }
    let sp = SpectralSpace::new(4, 2);
    let c = SpectralField::mode(4, 2, 1, 0, 1, 2.5);
    for j in 0..4 {
        assert!(sp.grad_perp(&c, j).unwrap().max_abs() < 1e-14);
    }
    // grad_perp(omega_1) . e_1 = 1 - omega_1^2 = 3/4 + ... on S^3
    let w1 = SpectralField::mode(4, 2, 0, 1, 1, 1.0);
    let g = sp.grad_perp(&w1, 0).unwrap();
    let m = sp.grid.n_omega();
    let vals = sp.synthesize(&g).unwrap();
    for (idx, v) in vals.iter().enumerate() {
        let w = sp.grid.omega_nodes[idx % m];
        assert!((v - (1.0 - w[0] * w[0])).abs() < 1e-12);
    }
}

#[test]
fn integration_by_parts_and_self_adjointness() {
    let sp = SpectralSpace::new(10, 3);
    let f = random_field(8, 3, 5);
    let g = random_field(8, 3, 6);
    let m = sp.grid.n_omega();
    let fy = sp.synthesize(&diff_y(&f)).unwrap();
    let gy = sp.synthesize(&diff_y(&g)).unwrap();
    let fv = sp.synthesize(&f).unwrap();
    let gv = sp.synthesize(&g).unwrap();
    let ygv: Vec<f64> = gv
        .iter()
        .enumerate()
        .map(|(i, v)| 0.5 * sp.grid.y_nodes[i / m] * v)
        .collect();
    let lhs = sp.grid.inner(&fy, &gv);
    let rhs = -sp.grid.inner(&fv, &gy) + sp.grid.inner(&fv, &ygv);
    assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    let lf = sp.synthesize(&laplace_s3(&f)).unwrap();
    let lg = sp.synthesize(&laplace_s3(&g)).unwrap();
    let a = sp.grid.inner(&lf, &gv);
    let b = sp.grid.inner(&fv, &lg);
    assert!((a - b).abs() < 1e-10 * (1.0 + a.abs()));
}

#[test]
fn gram_matrix_and_parity() {
    let sp = SpectralSpace::new(6, 2);
    let one = SpectralField::mode(6, 2, 0, 0, 1, 1.0);
    let ip = sp.inner_g(&one, &one).unwrap();
    let exact = 2.0 * std::f64::consts::PI.sqrt() * S3_AREA;
    assert!(((ip - exact) / exact).abs() < 1e-12);
    let a = SpectralField::mode(6, 2, 1, 1, 1, 1.0);
    let b = SpectralField::mode(6, 2, 2, 1, 1, 1.0);
    assert!(sp.inner_g(&a, &b).unwrap().abs() < 1e-12);
    let w1 = SpectralField::mode(6, 2, 0, 1, 1, 1.0);
    let w2 = SpectralField::mode(6, 2, 0, 1, 2, 1.0);
    assert!(sp.inner_g(&w1, &w2).unwrap().abs() < 1e-12);
    for n in 0..=6 {
        for k in 0..=2 {
            for l in 1..=(k + 1) * (k + 1) {
                let f = SpectralField::mode(6, 2, n, k, l, 1.0);
                let q = sp.inner_g(&f, &f).unwrap();
                let e = sp.mode_norm2(n, k, l);
                assert!(((q - e) / e).abs() < 1e-10);
            }
        }
    }
    assert_eq!(eigenvalue_l(0, 1), -0.5);
}
