//! Quasi-Newton minimization with central finite-difference gradients.

#[derive(Debug, Clone, Copy)]
pub(crate) struct MinimizeOptions {
    pub max_iterations: usize,
    /// Converged when the objective drops by less than this over `stall_window` iterations.
    pub tolerance: f64,
    pub stall_window: usize,
    pub gradient_step: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct MinimizeOutcome {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Objective after each accepted step, starting with the initial value.
    pub trace: Vec<f64>,
}

fn gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64], h: f64) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let xi = x[i];
            probe[i] = xi + h;
            let up = f(&probe);
            probe[i] = xi - h;
            let down = f(&probe);
            probe[i] = xi;
            (up - down) / (2.0 * h)
        })
        .collect()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn identity(n: usize) -> Vec<f64> {
    let mut m = vec![0.0; n * n];
    for i in 0..n {
        m[i * n + i] = 1.0;
    }
    m
}

/// BFGS on the inverse Hessian with an Armijo backtracking line search.
/// Every accepted step strictly lowers the objective.
pub(crate) fn minimize<F: Fn(&[f64]) -> f64>(
    f: F,
    x0: Vec<f64>,
    opts: &MinimizeOptions,
) -> MinimizeOutcome {
    let n = x0.len();
    let mut x = x0;
    let mut fx = f(&x);
    let mut g = gradient(&f, &x, opts.gradient_step);
    let mut hinv = identity(n);
    let mut trace = vec![fx];
    let mut converged = false;
    let mut iterations = 0;
    let mut just_reset = false;

    while iterations < opts.max_iterations {
        if dot(&g, &g).sqrt() < 1e-12 {
            converged = true;
            break;
        }
        let mut dir: Vec<f64> = (0..n)
            .map(|i| -(0..n).map(|j| hinv[i * n + j] * g[j]).sum::<f64>())
            .collect();
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            hinv = identity(n);
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..60 {
            let trial: Vec<f64> = x.iter().zip(&dir).map(|(xi, di)| xi + t * di).collect();
            let ft = f(&trial);
            if ft < fx + 1e-4 * t * slope && ft < fx {
                accepted = Some((trial, ft));
                break;
            }
            t *= 0.5;
        }

        let Some((x_new, f_new)) = accepted else {
            if just_reset {
                // No descent along the gradient at working precision.
                converged = true;
                break;
            }
            hinv = identity(n);
            just_reset = true;
            continue;
        };
        just_reset = false;
        iterations += 1;

        let g_new = gradient(&f, &x_new, opts.gradient_step);
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if sy > 1e-12 * dot(&s, &s).sqrt() * dot(&y, &y).sqrt() && sy > 0.0 {
            let hy: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|j| hinv[i * n + j] * y[j]).sum())
                .collect();
            let yhy = dot(&y, &hy);
            let rho = 1.0 / sy;
            for i in 0..n {
                for j in 0..n {
                    hinv[i * n + j] += rho * ((1.0 + rho * yhy) * s[i] * s[j] - hy[i] * s[j] - s[i] * hy[j]);
                }
            }
        }

        x = x_new;
        fx = f_new;
        g = g_new;
        trace.push(fx);

        let w = opts.stall_window;
        if trace.len() > w && trace[trace.len() - 1 - w] - fx < opts.tolerance {
            converged = true;
            break;
        }
    }

    MinimizeOutcome {
        x,
        value: fx,
        iterations,
        converged,
        trace,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> MinimizeOptions {
        MinimizeOptions {
            max_iterations: 2000,
            tolerance: 1e-14,
            stall_window: 10,
            gradient_step: 1e-6,
        }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let out = minimize(f, vec![-1.2, 1.0], &opts());
        assert!(out.converged);
        assert!((out.x[0] - 1.0).abs() < 1e-5 && (out.x[1] - 1.0).abs() < 1e-5);
        assert!(out.trace.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn flat_objective_stops_immediately() {
        let out = minimize(|_: &[f64]| 3.0, vec![0.1, 0.2, 0.3], &opts());
        assert!(out.converged);
        assert_eq!(out.iterations, 0);
        assert_eq!(out.value, 3.0);
    }
}
