//! Internal quadrature helpers: Gauss–Legendre panels, log-graded panels
//! for integrable endpoint singularities, and series acceleration for
//! oscillatory half-line integrals.

// 16-point Gauss-Legendre abscissae (positive half) and weights on [-1, 1].
const GL16_X: [f64; 8] = [
    0.0950125098376374,
    0.2816035507792589,
    0.4580167776572274,
    0.6178762444026438,
    0.7554044083550030,
    0.8656312023878318,
    0.9445750230732326,
    0.9894009349916499,
];
const GL16_W: [f64; 8] = [
    0.1894506104550685,
    0.1826034150449236,
    0.1691565193950025,
    0.1495959888165767,
    0.1246289712555339,
    0.0951585116824928,
    0.0622535239386479,
    0.0271524594117541,
];

pub(crate) fn gauss16(f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let mut s = 0.0;
    for i in 0..8 {
        s += GL16_W[i] * (f(c + h * GL16_X[i]) + f(c - h * GL16_X[i]));
    }
    s * h
}

/// ∫₀^{u_hi} f(u) du for f with at worst an integrable power singularity
/// u^{-p}, p < 1, at the origin. Log-substitution u = e^s turns the
/// singular head into an exponential decay of rate `rate` ~ 1 - p; panels
/// extend down until the decay has used up ~38 e-foldings.
pub(crate) fn integrate_singular_head(f: &impl Fn(f64) -> f64, u_hi: f64, rate: f64) -> f64 {
    let rate = rate.clamp(1e-3, 1.0);
    let s_hi = u_hi.ln();
    let s_lo = s_hi - 38.0 / rate;
    let step = 0.5;
    let n = ((s_hi - s_lo) / step).ceil() as usize;
    let g = |s: f64| {
        let u = s.exp();
        f(u) * u
    };
    let mut total = 0.0;
    for k in 0..n {
        let a = s_hi - (k + 1) as f64 * step;
        let b = s_hi - k as f64 * step;
        total += gauss16(&g, a, b);
    }
    total
}

/// ∫_{start}^{∞} f(u) du for f oscillating with the given half-period
/// (sign-alternating panel integrals, envelope decaying algebraically).
/// Computes `n_panels` panel integrals, then accelerates the alternating
/// partial-sum sequence by iterated averaging (Euler transform). Returns
/// (value, residual estimate).
pub(crate) fn integrate_oscillatory_tail(
    f: &impl Fn(f64) -> f64,
    start: f64,
    half_period: f64,
    n_panels: usize,
) -> (f64, f64) {
    assert!(n_panels >= 8, "acceleration needs at least 8 panels");
    let mut partials = Vec::with_capacity(n_panels);
    let mut acc = 0.0;
    for k in 0..n_panels {
        let a = start + k as f64 * half_period;
        let b = a + half_period;
        acc += gauss16(&f, a, b);
        partials.push(acc);
    }
    // Iterated averaging over the last third of the partial sums; each
    // round damps the alternating remainder by roughly its decay ratio.
    let keep = (n_panels / 3).max(8);
    let mut v: Vec<f64> = partials[n_panels - keep..].to_vec();
    let mut last_delta = f64::INFINITY;
    while v.len() > 1 {
        for i in 0..v.len() - 1 {
            v[i] = 0.5 * (v[i] + v[i + 1]);
        }
        v.pop();
        if v.len() >= 2 {
            last_delta = (v[v.len() - 1] - v[v.len() - 2]).abs();
        }
    }
    (v[0], last_delta)
}
