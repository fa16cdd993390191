#![allow(dead_code)]

/// Erlang(n, 1) density from the raw integrand, `w^{n-1} e^{-w} / (n-1)!`.
pub fn integrand(w: f64, n: usize) -> f64 {
    let fact: f64 = (1..n).map(|k| k as f64).product();
    w.powi(n as i32 - 1) * (-w).exp() / fact
}

fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

fn adapt(
    f: &dyn Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    let diff = left + right - whole;
    if depth == 0 || diff.abs() <= 15.0 * tol {
        return left + right + diff / 15.0;
    }
    adapt(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adapt(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of `f` over `[a, b]`.
pub fn quad(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = simpson(a, b, fa, fm, fb);
    adapt(f, a, b, fa, fm, fb, whole, tol, 48)
}

/// Window-gain CDF by quadrature of the raw integrand.
pub fn chi2_cdf_quadrature(z: f64, n: usize) -> f64 {
    // split at the mode so the peak is resolved
    let mode = (n as f64 - 1.0).min(z);
    let f = |w: f64| integrand(w, n);
    quad(&f, 0.0, mode, 1e-15) + quad(&f, mode, z, 1e-15)
}

/// Bisection for `p` on the quadrature CDF.
pub fn chi2_quantile_quadrature(p: f64, n: usize) -> f64 {
    let (mut lo, mut hi) = (0.0, 10.0 * n as f64 + 50.0);
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if chi2_cdf_quadrature(mid, n) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Mean and standard error, two-pass.
pub fn mean_se(xs: &[f64]) -> (f64, f64) {
    let m = mean(xs);
    let var = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (xs.len() as f64 - 1.0);
    (m, (var / xs.len() as f64).sqrt())
}
