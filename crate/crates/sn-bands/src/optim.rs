//! Derivative-free Nelder-Mead simplex minimizer.
//!
//! Non-finite objective values are treated as +inf, which is how the
//! likelihood code signals inadmissible trial points.

/// Options controlling one simplex run.
#[derive(Debug, Clone)]
pub struct NmOptions {
    pub max_iter: usize,
    /// Absolute tolerance on the best-to-worst objective spread.
    pub ftol: f64,
    /// Tolerance on the simplex edge length, relative to coordinate scale.
    pub xtol: f64,
}

impl Default for NmOptions {
    fn default() -> Self {
        NmOptions {
            max_iter: 4000,
            ftol: 1e-10,
            xtol: 1e-9,
        }
    }
}

#[derive(Debug, Clone)]
pub struct NmResult {
    pub x: Vec<f64>,
    pub fx: f64,
    pub iterations: usize,
    pub evals: usize,
    pub converged: bool,
}

fn sanitize(v: f64) -> f64 {
    if v.is_nan() {
        f64::INFINITY
    } else {
        v
    }
}

/// Minimize `f` starting from `x0` with per-coordinate initial steps.
pub fn nelder_mead<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    opts: &NmOptions,
) -> NmResult {
    let dim = x0.len();
    assert!(dim > 0 && steps.len() == dim);
    let (alpha, gamma, rho, sigma) = (1.0, 2.0, 0.5, 0.5);

    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| {
        *evals += 1;
        sanitize(f(x))
    };

    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(x0.to_vec());
    for i in 0..dim {
        let mut p = x0.to_vec();
        p[i] += steps[i];
        simplex.push(p);
    }
    let mut scores: Vec<f64> = simplex.iter().map(|p| eval(p, &mut evals)).collect();

    let mut iterations = 0usize;
    let mut converged = false;

    for iter in 0..opts.max_iter {
        iterations = iter + 1;

        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap());
        let best = order[0];
        let worst = order[dim];
        let second_worst = order[dim - 1];

        let spread = scores[worst] - scores[best];
        let size = (0..dim)
            .map(|d| {
                let scale = 1.0 + simplex[best][d].abs();
                order
                    .iter()
                    .map(|&i| (simplex[i][d] - simplex[best][d]).abs() / scale)
                    .fold(0.0f64, f64::max)
            })
            .fold(0.0f64, f64::max);
        if scores[best].is_finite() && (spread.abs() <= opts.ftol || size <= opts.xtol) {
            converged = true;
            break;
        }

        let mut centroid = vec![0.0; dim];
        for &i in order.iter().take(dim) {
            for d in 0..dim {
                centroid[d] += simplex[i][d];
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let reflect: Vec<f64> = (0..dim)
            .map(|d| centroid[d] + alpha * (centroid[d] - simplex[worst][d]))
            .collect();
        let f_r = eval(&reflect, &mut evals);

        if f_r < scores[best] {
            let expand: Vec<f64> = (0..dim)
                .map(|d| centroid[d] + gamma * (reflect[d] - centroid[d]))
                .collect();
            let f_e = eval(&expand, &mut evals);
            if f_e < f_r {
                simplex[worst] = expand;
                scores[worst] = f_e;
            } else {
                simplex[worst] = reflect;
                scores[worst] = f_r;
            }
            continue;
        }
        if f_r < scores[second_worst] {
            simplex[worst] = reflect;
            scores[worst] = f_r;
            continue;
        }

        // contraction: outside if the reflected point improved on the worst
        let contract: Vec<f64> = if f_r < scores[worst] {
            (0..dim)
                .map(|d| centroid[d] + rho * (reflect[d] - centroid[d]))
                .collect()
        } else {
            (0..dim)
                .map(|d| centroid[d] + rho * (simplex[worst][d] - centroid[d]))
                .collect()
        };
        let f_c = eval(&contract, &mut evals);
        if f_c < scores[worst].min(f_r) {
            simplex[worst] = contract;
            scores[worst] = f_c;
            continue;
        }

        // shrink toward the best vertex
        for &i in order.iter().skip(1) {
            for d in 0..dim {
                simplex[i][d] = simplex[best][d] + sigma * (simplex[i][d] - simplex[best][d]);
            }
            scores[i] = eval(&simplex[i], &mut evals);
        }
    }

    let best = (0..=dim)
        .min_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap())
        .unwrap();
    NmResult {
        x: simplex[best].clone(),
        fx: scores[best],
        iterations,
        evals,
        converged,
    }
}

/// Nelder-Mead with restart polish: re-runs from the incumbent with shrinking
/// initial steps, which reliably tightens the last few digits.
pub fn nelder_mead_polished<F: FnMut(&[f64]) -> f64>(
    mut f: F,
    x0: &[f64],
    steps: &[f64],
    opts: &NmOptions,
    restarts: usize,
) -> NmResult {
    let mut result = nelder_mead(&mut f, x0, steps, opts);
    let mut scale = 0.1;
    for _ in 0..restarts {
        let shrunk: Vec<f64> = steps.iter().map(|s| s * scale).collect();
        let next = nelder_mead(&mut f, &result.x, &shrunk, opts);
        let improved = next.fx < result.fx;
        let total_evals = result.evals + next.evals;
        let total_iters = result.iterations + next.iterations;
        if improved {
            result = next;
        }
        result.evals = total_evals;
        result.iterations = total_iters;
        scale *= 0.1;
    }
    result
}
