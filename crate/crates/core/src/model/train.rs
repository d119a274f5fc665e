use std::cell::RefCell;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{AngleScaler, FeatureMatrix};
use crate::encoding::{
    build_u_dagger_on, build_u_on, qubits_for_features, AngleVector, EncodingPlan,
};
use crate::error::{Error, Result};
use crate::metrics::{confusion_and_metrics, ConfusionMatrix, MetricsReport};
use crate::noise::{build_channel, ChannelKind, KrausChannel};
use crate::optimizer::{minimize, OptimizerConfig};
use crate::quantum::{CircuitPlan, GateOp, StateVector};
use crate::seeds::rng_from_seed;

use super::circuit::{assemble_circuit, readout_pure, run_scored};
use super::{
    Centroid, Mode, ModelConfig, ModelContext, ParamVector, TraceRow, TrainedModel,
    MODEL_SCHEMA_VERSION,
};

/// Context with encoding circuits built once.
struct Prepared<'a> {
    ctx: &'a ModelContext,
    plan: EncodingPlan,
    centroid_angles: Vec<AngleVector>,
    /// `U^dagger` gates per class.
    centroid_dagger: Vec<CircuitPlan>,
}

impl<'a> Prepared<'a> {
    fn new(ctx: &'a ModelContext) -> Result<Self> {
        let cfg = &ctx.config;
        cfg.validate()?;
        let d = ctx.angle_scaler.n_features();
        let needed = qubits_for_features(d)?;
        if needed > cfg.n_qubits {
            return Err(Error::InvalidInput(format!(
                "{d} features need {needed} qubits, model has {}",
                cfg.n_qubits
            )));
        }
        if ctx.centroids.len() != 2
            || ctx
                .centroids
                .iter()
                .enumerate()
                .any(|(i, c)| c.class_label as usize != i)
        {
            return Err(Error::InvalidInput(
                "model needs centroids for classes 0 and 1, in order".into(),
            ));
        }
        let plan = EncodingPlan::new(cfg.n_qubits)?;
        let centroid_angles = ctx
            .centroids
            .iter()
            .map(|c| ctx.angle_scaler.transform(&c.feature_means))
            .collect::<Result<Vec<_>>>()?;
        let centroid_dagger = centroid_angles
            .iter()
            .map(|a| build_u_dagger_on(&plan, &a.padded(cfg.n_qubits)?))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ctx,
            plan,
            centroid_angles,
            centroid_dagger,
        })
    }

    fn angles(&self, row: &[f64]) -> Result<AngleVector> {
        self.ctx.angle_scaler.transform(row)
    }

    /// `U(test)|0>`, independent of the trained angles.
    fn encode(&self, test: &AngleVector) -> Result<StateVector> {
        let u = build_u_on(&self.plan, &test.padded(self.ctx.config.n_qubits)?)?;
        let mut s = StateVector::zero(self.ctx.config.n_qubits);
        s.apply_all(u.ops())?;
        Ok(s)
    }

    fn pqc_gates(&self, params: &ParamVector) -> Result<(Vec<GateOp>, Vec<GateOp>)> {
        let n = self.ctx.config.n_qubits;
        let (a, b) = params.blocks(&self.ctx.config)?;
        let ops = |p: Option<&[f64]>| -> Result<Vec<GateOp>> {
            match p {
                Some(p) => Ok(super::build_pqc(p, n)?.ops().to_vec()),
                None => Ok(Vec::new()),
            }
        };
        Ok((ops(a)?, ops(b)?))
    }

    /// Noiseless prediction from an encoded test state.
    fn predict_encoded(
        &self,
        encoded: &StateVector,
        pqc: &(Vec<GateOp>, Vec<GateOp>),
    ) -> Result<u8> {
        let mode = self.ctx.config.mode;
        let mut after_a = encoded.clone();
        after_a.apply_all(&pqc.0)?;
        if mode == Mode::VariationalOnly {
            return Ok(threshold(readout_pure(&after_a, mode)?));
        }
        let mut scores = [0.0; 2];
        for (class, dagger) in self.centroid_dagger.iter().enumerate() {
            let mut s = after_a.clone();
            s.apply_all(dagger.ops())?;
            s.apply_all(&pqc.1)?;
            scores[class] = readout_pure(&s, mode)?;
        }
        Ok(argmax(scores))
    }

    fn predict_row(
        &self,
        row: &[f64],
        params: &ParamVector,
        noise: Option<&KrausChannel>,
    ) -> Result<u8> {
        let test = self.angles(row)?;
        if noise.is_none_or(KrausChannel::is_identity) {
            let pqc = self.pqc_gates(params)?;
            return self.predict_encoded(&self.encode(&test)?, &pqc);
        }
        let cfg = &self.ctx.config;
        if cfg.mode == Mode::VariationalOnly {
            let c = assemble_circuit(&test, &self.centroid_angles[0], params, cfg)?;
            return Ok(threshold(run_scored(&c, cfg, noise)?));
        }
        let mut scores = [0.0; 2];
        for (class, centroid) in self.centroid_angles.iter().enumerate() {
            let c = assemble_circuit(&test, centroid, params, cfg)?;
            scores[class] = run_scored(&c, cfg, noise)?;
        }
        Ok(argmax(scores))
    }
}

fn threshold(p_zero: f64) -> u8 {
    u8::from(p_zero < 0.5)
}

/// Class 1 only when its score is strictly larger.
fn argmax(scores: [f64; 2]) -> u8 {
    u8::from(scores[1] > scores[0])
}

fn check_rows(data: &FeatureMatrix, ctx: &ModelContext) -> Result<()> {
    if data.is_empty() {
        return Err(Error::InvalidInput("dataset is empty".into()));
    }
    if data.n_features() != ctx.angle_scaler.n_features() {
        return Err(Error::Dimension(format!(
            "dataset has {} features, model expects {}",
            data.n_features(),
            ctx.angle_scaler.n_features()
        )));
    }
    Ok(())
}

fn accuracy_of(predictions: &[u8], labels: &[u8]) -> f64 {
    let correct = predictions
        .iter()
        .zip(labels)
        .filter(|(p, y)| p == y)
        .count();
    correct as f64 / labels.len() as f64
}

/// `1 - accuracy` of `params` on `data`.
pub fn loss(params: &ParamVector, data: &FeatureMatrix, ctx: &ModelContext) -> Result<f64> {
    check_rows(data, ctx)?;
    let prep = Prepared::new(ctx)?;
    let preds = data
        .rows
        .par_iter()
        .map(|r| prep.predict_row(r, params, None))
        .collect::<Result<Vec<u8>>>()?;
    Ok(1.0 - accuracy_of(&preds, &data.labels))
}

pub fn predict(row: &[f64], model: &TrainedModel, noise: Option<&KrausChannel>) -> Result<u8> {
    let ctx = model.context();
    let prep = Prepared::new(&ctx)?;
    if row.len() != model.n_features() {
        return Err(Error::Dimension(format!(
            "row has {} features, model expects {}",
            row.len(),
            model.n_features()
        )));
    }
    prep.predict_row(row, &model.params, noise)
}

pub fn predict_all(
    model: &TrainedModel,
    data: &FeatureMatrix,
    noise: Option<&KrausChannel>,
) -> Result<Vec<u8>> {
    let ctx = model.context();
    check_rows(data, &ctx)?;
    let prep = Prepared::new(&ctx)?;
    data.rows
        .par_iter()
        .map(|r| prep.predict_row(r, &model.params, noise))
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub confusion: ConfusionMatrix,
    pub metrics: MetricsReport,
}

pub fn evaluate(
    model: &TrainedModel,
    data: &FeatureMatrix,
    noise: Option<&KrausChannel>,
) -> Result<Evaluation> {
    let preds = predict_all(model, data, noise)?;
    let (confusion, metrics) = confusion_and_metrics(&preds, &data.labels)?;
    Ok(Evaluation { confusion, metrics })
}

/// Fits centroids and the angle scaler on `data`, then minimizes the loss
/// from angles drawn uniformly in `[0, 2 pi)`. `config.iteration_budget`
/// replaces the optimizer's budget.
pub fn train(
    data: &FeatureMatrix,
    config: &ModelConfig,
    optimizer: &OptimizerConfig,
) -> Result<TrainedModel> {
    config.validate()?;
    if data.is_empty() {
        return Err(Error::InvalidInput("training set is empty".into()));
    }
    if !data.has_both_classes() {
        return Err(Error::InvalidInput(
            "training set must contain both classes".into(),
        ));
    }
    let centroids = (0..2u8)
        .map(|c| {
            Ok(Centroid {
                class_label: c,
                feature_means: data.class_mean(c)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let ctx = ModelContext {
        config: config.clone(),
        angle_scaler: AngleScaler::fit(&data.rows)?,
        centroids,
    };
    let prep = Prepared::new(&ctx)?;
    let encoded = data
        .rows
        .par_iter()
        .map(|r| prep.encode(&prep.angles(r)?))
        .collect::<Result<Vec<_>>>()?;

    let failure: RefCell<Option<Error>> = RefCell::new(None);
    let objective = |p: &[f64]| -> f64 {
        let run = || -> Result<f64> {
            let params = ParamVector::new(p.to_vec())?;
            let pqc = prep.pqc_gates(&params)?;
            let preds = encoded
                .par_iter()
                .map(|s| prep.predict_encoded(s, &pqc))
                .collect::<Result<Vec<u8>>>()?;
            Ok(1.0 - accuracy_of(&preds, &data.labels))
        };
        run().unwrap_or_else(|e| {
            failure.borrow_mut().get_or_insert(e);
            f64::NAN
        })
    };

    let mut opt = optimizer.clone();
    opt.iteration_budget = config.iteration_budget;

    let (params, trace) = if config.param_count() == 0 {
        let value = objective(&[]);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let row = TraceRow {
            iteration: 0,
            evaluations: 1,
            loss: value,
            accuracy: 1.0 - value,
        };
        (ParamVector::empty(), vec![row])
    } else {
        let mut rng = rng_from_seed(config.seed);
        let x0: Vec<f64> = (0..config.param_count())
            .map(|_| rng.gen_range(0.0..std::f64::consts::TAU))
            .collect();
        let result = minimize(objective, &x0, &opt);
        if let Some(e) = failure.borrow_mut().take() {
            return Err(e);
        }
        let result = result?;
        let trace = result
            .trace
            .iter()
            .map(|t| TraceRow {
                iteration: t.iteration,
                evaluations: t.evaluations,
                loss: t.best_value,
                accuracy: 1.0 - t.best_value,
            })
            .collect();
        (ParamVector::new(result.best_params)?, trace)
    };

    Ok(TrainedModel {
        schema_version: MODEL_SCHEMA_VERSION,
        config: ctx.config,
        optimizer: opt,
        params,
        centroids: ctx.centroids,
        angle_scaler: ctx.angle_scaler,
        training_trace: trace,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub channel: ChannelKind,
    pub strength: f64,
    pub accuracy: f64,
}

/// Accuracy for every `(channel, strength)` pair, evaluated in parallel and
/// returned in `kinds` x `grid` order.
pub fn sweep_noise(
    model: &TrainedModel,
    data: &FeatureMatrix,
    kinds: &[ChannelKind],
    grid: &[f64],
) -> Result<Vec<SweepRow>> {
    let points: Vec<(ChannelKind, f64)> = kinds
        .iter()
        .flat_map(|&k| grid.iter().map(move |&p| (k, p)))
        .collect();
    points
        .par_iter()
        .map(|&(kind, strength)| {
            let channel = build_channel(kind, strength)?;
            let preds = predict_all(model, data, Some(&channel))?;
            Ok(SweepRow {
                channel: kind,
                strength,
                accuracy: accuracy_of(&preds, &data.labels),
            })
        })
        .collect()
}
