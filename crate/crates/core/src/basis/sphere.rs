//! Tangential calculus on S^3 from ambient data of an extension.

/// `P_perp(omega) a = a - (omega . a) omega`.
pub fn project_perp(omega: &[f64; 4], a: &[f64; 4]) -> [f64; 4] {
    let d = dot4(omega, a);
    [
        a[0] - d * omega[0],
        a[1] - d * omega[1],
        a[2] - d * omega[2],
        a[3] - d * omega[3],
    ]
}

pub fn dot4(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

/// Matrix of `P_perp(omega)`.
pub fn perp_matrix(omega: &[f64; 4]) -> [[f64; 4]; 4] {
    let mut p = [[0.0; 4]; 4];
    for a in 0..4 {
        for b in 0..4 {
            p[a][b] = if a == b { 1.0 } else { 0.0 } - omega[a] * omega[b];
        }
    }
    p
}

/// `H[l][k] = e_l . grad_perp( grad_perp(u) . e_k )` at `omega` on the unit sphere,
/// given the ambient gradient `g` and Hessian `hs` of any extension of `u`.
pub fn tangential_hessian(omega: &[f64; 4], g: &[f64; 4], hs: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let wg = dot4(omega, g);
    let mut hw = [0.0; 4];
    for m in 0..4 {
        hw[m] = (0..4).map(|b| hs[m][b] * omega[b]).sum();
    }
    // dv[m][k] = d_m V_k for the extension V(x) = g(x) - (x . g(x)) x
    let mut dv = [[0.0; 4]; 4];
    for m in 0..4 {
        for k in 0..4 {
            dv[m][k] = hs[k][m] - (g[m] + hw[m]) * omega[k] - if m == k { wg } else { 0.0 };
        }
    }
    let mut h = [[0.0; 4]; 4];
    for k in 0..4 {
        let col = [dv[0][k], dv[1][k], dv[2][k], dv[3][k]];
        let p = project_perp(omega, &col);
        for l in 0..4 {
            h[l][k] = p[l];
        }
    }
    h
}

/// Orthonormal basis of the tangent space at `omega`.
pub fn tangent_frame(omega: &[f64; 4]) -> [[f64; 4]; 3] {
    let mut out = [[0.0; 4]; 3];
    let mut found = 0;
    let mut basis: Vec<[f64; 4]> = vec![*omega];
    // Gram–Schmidt on the coordinate axes, most orthogonal first.
    let mut axes: Vec<usize> = (0..4).collect();
    axes.sort_by(|a, b| omega[*a].abs().partial_cmp(&omega[*b].abs()).unwrap());
    for &a in &axes {
        let mut v = [0.0; 4];
        v[a] = 1.0;
        for _ in 0..2 {
            for b in &basis {
                let c = dot4(&v, b);
                for i in 0..4 {
                    v[i] -= c * b[i];
                }
            }
        }
        let n = dot4(&v, &v).sqrt();
        if n < 1e-6 {
            continue;
        }
        for x in v.iter_mut() {
            *x /= n;
        }
        basis.push(v);
        out[found] = v;
        found += 1;
        if found == 3 {
            break;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laplacian_of_linear_function() {
        let w = [0.5, 0.5, 0.5, 0.5];
        let g = [1.0, 0.0, 0.0, 0.0];
        let h = tangential_hessian(&w, &g, &[[0.0; 4]; 4]);
        let tr: f64 = (0..4).map(|i| h[i][i]).sum();
        assert!((tr + 3.0 * w[0]).abs() < 1e-15);
    }

    #[test]
    fn frame_is_orthonormal() {
        let w = [0.1f64, -0.7, 0.2, 0.0];
        let n = dot4(&w, &w).sqrt();
        let w = [w[0] / n, w[1] / n, w[2] / n, w[3] / n];
        let f = tangent_frame(&w);
        for i in 0..3 {
            assert!(dot4(&f[i], &w).abs() < 1e-14);
            for j in 0..3 {
                let e = if i == j { 1.0 } else { 0.0 };
                assert!((dot4(&f[i], &f[j]) - e).abs() < 1e-14);
            }
        }
    }
}
