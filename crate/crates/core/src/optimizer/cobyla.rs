//! Unconstrained COBYLA: linear interpolation on a simplex of `n + 1` points
//! inside a trust region whose radius shrinks from `rho_begin` to `rho_end`.
//!
//! The control flow follows Powell's original routine with the constraint
//! machinery removed: without constraints the merit function is the objective
//! itself and the trust-region subproblem is solved exactly by a steepest
//! descent step of length `rho` along the model gradient.

use crate::error::Result;

use super::linalg::{dot, invert, norm};
use super::{check_start, Evaluator, OptimizerConfig, OptimizerResult, Termination, TracePoint};

/// Vertices must sit at least `ALPHA * rho` from the opposite face.
const ALPHA: f64 = 0.25;
/// Edges from the base vertex may be at most `BETA * rho` long.
const BETA: f64 = 2.1;
/// Geometry steps have length `GAMMA * rho`.
const GAMMA: f64 = 0.5;
/// Edge threshold when picking the vertex a trust-region step replaces.
const DELTA: f64 = 1.1;
/// Sufficient-decrease ratio for keeping `rho` unchanged.
const SUCCESS_RATIO: f64 = 0.1;

struct Simplex {
    base: Vec<f64>,
    f_base: f64,
    /// `vertex_j - base`, one row per vertex.
    disp: Vec<Vec<f64>>,
    f: Vec<f64>,
}

impl Simplex {
    fn n(&self) -> usize {
        self.base.len()
    }

    fn point(&self, step: &[f64]) -> Vec<f64> {
        self.base.iter().zip(step).map(|(b, d)| b + d).collect()
    }

    /// Moves the lowest vertex into the base position.
    fn promote_best(&mut self) {
        let Some((j, &fj)) = self.f.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)) else {
            return;
        };
        if fj >= self.f_base {
            return;
        }
        let shift = self.disp[j].clone();
        for (b, s) in self.base.iter_mut().zip(&shift) {
            *b += s;
        }
        for (k, row) in self.disp.iter_mut().enumerate() {
            if k == j {
                row.iter_mut().for_each(|x| *x = -*x);
            } else {
                row.iter_mut().zip(&shift).for_each(|(x, s)| *x -= s);
            }
        }
        std::mem::swap(&mut self.f[j], &mut self.f_base);
    }

    /// Rows `r_j` with `r_j . disp_k = delta_jk`, or `None` when degenerate.
    fn inverse_rows(&self) -> Option<Vec<Vec<f64>>> {
        let n = self.n();
        // Matrix with the displacements as columns.
        let cols: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| self.disp[j][i]).collect())
            .collect();
        invert(&cols, 1e-13)
    }
}

struct Geometry {
    simi: Vec<Vec<f64>>,
    gradient: Vec<f64>,
    /// Distance of each vertex from the face through the other vertices.
    vsig: Vec<f64>,
    /// Edge length from the base to each vertex.
    veta: Vec<f64>,
}

impl Geometry {
    fn of(s: &Simplex) -> Option<Self> {
        let n = s.n();
        let simi = s.inverse_rows()?;
        let df: Vec<f64> = s.f.iter().map(|f| f - s.f_base).collect();
        let gradient = (0..n)
            .map(|i| (0..n).map(|j| simi[j][i] * df[j]).sum())
            .collect();
        let vsig = simi.iter().map(|r| 1.0 / norm(r)).collect();
        let veta = s.disp.iter().map(|d| norm(d)).collect();
        Some(Self {
            simi,
            gradient,
            vsig,
            veta,
        })
    }

    fn acceptable(&self, rho: f64) -> bool {
        self.vsig.iter().all(|&v| v >= ALPHA * rho) && self.veta.iter().all(|&v| v <= BETA * rho)
    }
}

/// Minimises `objective` from `x0`, returning the best point ever evaluated.
pub fn cobyla_minimize<F>(
    objective: F,
    x0: &[f64],
    config: &OptimizerConfig,
) -> Result<OptimizerResult>
where
    F: FnMut(&[f64]) -> f64,
{
    check_start(x0, config)?;
    let n = x0.len();
    let mut ev = Evaluator::new(objective, config.max_evaluations);
    let mut trace: Vec<TracePoint> = Vec::new();
    let mut rho = config.rho_begin;

    let finish = |ev: Evaluator<F>, mut trace: Vec<TracePoint>, iterations: usize, termination| {
        ev.settle(&mut trace);
        OptimizerResult {
            best_params: ev.best_params,
            best_value: ev.best_value,
            evaluations_used: ev.evaluations,
            iterations,
            termination,
            trace,
        }
    };

    let f0 = ev.eval(x0)?;
    let mut simplex = Simplex {
        base: x0.to_vec(),
        f_base: f0,
        disp: Vec::with_capacity(n),
        f: Vec::with_capacity(n),
    };
    if !build_vertices(&mut simplex, &mut ev, rho)? {
        let best = ev.best_params.clone();
        ev.record(&mut trace, 0, &best, ev.best_value);
        return Ok(finish(ev, trace, 0, Termination::MaxEvaluations));
    }
    {
        let best = ev.best_params.clone();
        ev.record(&mut trace, 0, &best, ev.best_value);
    }

    let mut iterations = 0;
    let mut after_geometry = false;
    let termination = loop {
        if ev.exhausted() {
            break Termination::MaxEvaluations;
        }
        if iterations >= config.iteration_budget {
            break Termination::IterationBudget;
        }
        simplex.promote_best();
        let geo = match Geometry::of(&simplex) {
            Some(g) => g,
            None => {
                // Degenerate simplex: rebuild it around the base at the current radius.
                simplex.disp.clear();
                simplex.f.clear();
                if !build_vertices(&mut simplex, &mut ev, rho)? {
                    break Termination::MaxEvaluations;
                }
                continue;
            }
        };
        let acceptable = geo.acceptable(rho);

        if !after_geometry && !acceptable {
            let jdrop = geo
                .veta
                .iter()
                .enumerate()
                .filter(|(_, &v)| v > BETA * rho)
                .max_by(|a, b| a.1.total_cmp(b.1))
                .or_else(|| {
                    geo.vsig
                        .iter()
                        .enumerate()
                        .min_by(|a, b| a.1.total_cmp(b.1))
                })
                .map(|(j, _)| j)
                .expect("n >= 1");
            let scale = GAMMA * rho * geo.vsig[jdrop];
            let mut step: Vec<f64> = geo.simi[jdrop].iter().map(|x| scale * x).collect();
            if dot(&geo.gradient, &step) > 0.0 {
                step.iter_mut().for_each(|x| *x = -*x);
            }
            let x = simplex.point(&step);
            let f = ev.eval(&x)?;
            iterations += 1;
            ev.record(&mut trace, iterations, &x, f);
            simplex.disp[jdrop] = step;
            simplex.f[jdrop] = f;
            after_geometry = true;
            continue;
        }
        after_geometry = false;

        let gnorm = norm(&geo.gradient);
        let mut improved = false;
        if gnorm > 0.0 && gnorm.is_finite() {
            let step: Vec<f64> = geo.gradient.iter().map(|g| -rho * g / gnorm).collect();
            let predicted = rho * gnorm;
            let x = simplex.point(&step);
            let f = ev.eval(&x)?;
            iterations += 1;
            ev.record(&mut trace, iterations, &x, f);
            let actual = simplex.f_base - f;

            let weights: Vec<f64> = geo.simi.iter().map(|r| dot(r, &step).abs()).collect();
            let mut threshold = if actual > 0.0 { 0.0 } else { 1.0 };
            let mut jdrop = None;
            for (j, &w) in weights.iter().enumerate() {
                if w > threshold {
                    jdrop = Some(j);
                    threshold = w;
                }
            }
            let mut edge_max = DELTA * rho;
            for (j, (&w, &vsig)) in weights.iter().zip(&geo.vsig).enumerate() {
                let sigbar = w * vsig;
                if sigbar >= ALPHA * rho || sigbar >= vsig {
                    let edge = if actual > 0.0 {
                        norm(
                            &step
                                .iter()
                                .zip(&simplex.disp[j])
                                .map(|(a, b)| a - b)
                                .collect::<Vec<_>>(),
                        )
                    } else {
                        geo.veta[j]
                    };
                    if edge > edge_max {
                        jdrop = Some(j);
                        edge_max = edge;
                    }
                }
            }
            if let Some(j) = jdrop {
                simplex.disp[j] = step;
                simplex.f[j] = f;
                improved = actual > 0.0 && actual >= SUCCESS_RATIO * predicted;
            }
        }
        if improved {
            continue;
        }
        if !acceptable {
            continue;
        }
        if rho <= config.rho_end {
            break Termination::Converged;
        }
        rho *= 0.5;
        if rho <= 1.5 * config.rho_end {
            rho = config.rho_end;
        }
    };

    Ok(finish(ev, trace, iterations, termination))
}

/// Evaluates `base + rho e_j` for every axis. Returns `false` if the
/// evaluation budget ran out first.
fn build_vertices<F: FnMut(&[f64]) -> f64>(
    s: &mut Simplex,
    ev: &mut Evaluator<F>,
    rho: f64,
) -> Result<bool> {
    let n = s.n();
    for j in 0..n {
        if ev.exhausted() {
            return Ok(false);
        }
        let mut d = vec![0.0; n];
        d[j] = rho;
        let f = ev.eval(&s.point(&d))?;
        s.disp.push(d);
        s.f.push(f);
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn constant_objective_keeps_start() {
        let r = cobyla_minimize(|_| 3.5, &[0.3, -1.0], &cfg()).unwrap();
        assert_eq!(r.best_params, vec![0.3, -1.0]);
        assert_eq!(r.best_value, 3.5);
        assert_eq!(r.termination, Termination::Converged);
    }

    #[test]
    fn sphere() {
        let c = OptimizerConfig {
            rho_end: 1e-6,
            max_evaluations: 200,
            ..cfg()
        };
        let r = cobyla_minimize(|x| x[0] * x[0] + x[1] * x[1], &[3.0, 4.0], &c).unwrap();
        assert!(norm(&r.best_params) < 1e-4, "{:?}", r.best_params);
        assert!(r.evaluations_used <= 200);
    }

    #[test]
    fn non_finite_aborts() {
        let err = cobyla_minimize(|x| if x[0] > 0.5 { f64::NAN } else { x[0] }, &[0.0], &cfg())
            .unwrap_err();
        assert!(matches!(
            err,
            Error::NonFiniteObjective { evaluation: 2, .. }
        ));
    }

    #[test]
    fn evaluation_cap_respected() {
        let c = OptimizerConfig {
            max_evaluations: 7,
            ..cfg()
        };
        let r = cobyla_minimize(|x| x.iter().map(|v| v * v).sum(), &[1.0; 4], &c).unwrap();
        assert_eq!(r.evaluations_used, 7);
        assert_eq!(r.termination, Termination::MaxEvaluations);
    }

    #[test]
    fn iteration_budget_respected() {
        let c = OptimizerConfig {
            iteration_budget: 10,
            ..cfg()
        };
        let r =
            cobyla_minimize(|x| x.iter().map(|v| (v - 1.0).powi(2)).sum(), &[0.0; 6], &c).unwrap();
        assert_eq!(r.iterations, 10);
        assert_eq!(r.evaluations_used, 7 + 10);
        assert_eq!(r.termination, Termination::IterationBudget);
        assert_eq!(r.trace.len(), 11);
    }
}
