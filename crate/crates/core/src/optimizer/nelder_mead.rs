//! Reflect / expand / contract / shrink simplex search with coefficients
//! `(1, 2, 0.5, 0.5)`.

use crate::error::Result;

use super::linalg::norm;
use super::{check_start, Evaluator, OptimizerConfig, OptimizerResult, Termination, TracePoint};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;

fn affine(a: &[f64], b: &[f64], t: f64) -> Vec<f64> {
    // a + t (b - a)
    a.iter().zip(b).map(|(x, y)| x + t * (y - x)).collect()
}

/// Minimises `objective` from `x0`. Trace points carry the best vertex after
/// each cycle.
pub fn neldermead_minimize<F>(
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

    let mut verts: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let f0 = ev.eval(x0)?;
    verts.push((x0.to_vec(), f0));
    let mut termination = None;
    for j in 0..n {
        if ev.exhausted() {
            termination = Some(Termination::MaxEvaluations);
            break;
        }
        let mut x = x0.to_vec();
        x[j] += config.rho_begin;
        let f = ev.eval(&x)?;
        verts.push((x, f));
    }
    // Stable sort keeps earlier vertices ahead on ties.
    verts.sort_by(|a, b| a.1.total_cmp(&b.1));
    ev.record(&mut trace, 0, &verts[0].0, verts[0].1);

    let mut iterations = 0;
    let termination = match termination {
        Some(t) => t,
        None => loop {
            let best = &verts[0].0;
            let size = verts[1..]
                .iter()
                .map(|(x, _)| norm(&x.iter().zip(best).map(|(a, b)| a - b).collect::<Vec<_>>()))
                .fold(0.0, f64::max);
            if size <= config.rho_end {
                break Termination::Converged;
            }
            if ev.exhausted() {
                break Termination::MaxEvaluations;
            }
            if iterations >= config.iteration_budget {
                break Termination::IterationBudget;
            }
            let completed = step(&mut verts, &mut ev)?;
            if !completed {
                break Termination::MaxEvaluations;
            }
            iterations += 1;
            verts.sort_by(|a, b| a.1.total_cmp(&b.1));
            ev.record(&mut trace, iterations, &verts[0].0, verts[0].1);
        },
    };

    ev.settle(&mut trace);
    Ok(OptimizerResult {
        best_params: ev.best_params,
        best_value: ev.best_value,
        evaluations_used: ev.evaluations,
        iterations,
        termination,
        trace,
    })
}

/// One cycle on a sorted simplex. Returns `Ok(false)` if the evaluation
/// budget ran out mid-cycle.
fn step<F: FnMut(&[f64]) -> f64>(
    verts: &mut [(Vec<f64>, f64)],
    ev: &mut Evaluator<F>,
) -> Result<bool> {
    let n = verts.len() - 1;
    let mut centroid = vec![0.0; verts[0].0.len()];
    for (x, _) in &verts[..n] {
        for (c, v) in centroid.iter_mut().zip(x) {
            *c += v / n as f64;
        }
    }
    let worst = verts[n].clone();
    let f_best = verts[0].1;
    let f_second = verts[n - 1].1;

    macro_rules! eval_or_stop {
        ($x:expr) => {{
            if ev.exhausted() {
                return Ok(false);
            }
            ev.eval(&$x)?
        }};
    }

    let reflected = affine(&centroid, &worst.0, -REFLECT);
    let f_r = eval_or_stop!(reflected);
    if f_r < f_best {
        let expanded = affine(&centroid, &worst.0, -EXPAND);
        let f_e = eval_or_stop!(expanded);
        verts[n] = if f_e < f_r {
            (expanded, f_e)
        } else {
            (reflected, f_r)
        };
        return Ok(true);
    }
    if f_r < f_second {
        verts[n] = (reflected, f_r);
        return Ok(true);
    }
    if f_r < worst.1 {
        let outside = affine(&centroid, &reflected, CONTRACT);
        let f_c = eval_or_stop!(outside);
        if f_c <= f_r {
            verts[n] = (outside, f_c);
            return Ok(true);
        }
    } else {
        let inside = affine(&centroid, &worst.0, CONTRACT);
        let f_c = eval_or_stop!(inside);
        if f_c < worst.1 {
            verts[n] = (inside, f_c);
            return Ok(true);
        }
    }
    let best = verts[0].0.clone();
    for v in verts[1..].iter_mut() {
        let x = affine(&best, &v.0, SHRINK);
        let f = eval_or_stop!(x);
        *v = (x, f);
    }
    Ok(true)
}
