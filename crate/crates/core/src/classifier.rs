//! Linear SVM (L2-regularized, L1 hinge loss) trained by dual coordinate
//! descent, plus Platt sigmoid calibration and model persistence.
//!
//! The bias is learned as the weight of an extra constant feature of value 1,
//! so the primal objective minimized is
//! `0.5 * (|w|^2 + b^2) + C * sum_i max(0, 1 - y_i (w.x_i + b))`.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::batcher::Label;
use crate::error::{Error, Result};
use crate::hexfloat;
use crate::textproc::Vocabulary;
use crate::vectorizer::{SparseVector, TfMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperparams {
    /// Hinge-loss weight.
    pub c: f64,
    /// Projected-gradient stopping tolerance.
    pub tol: f64,
    /// Maximum number of passes over the data.
    pub max_iter: usize,
    pub seed: u64,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            c: 1.0,
            tol: 1e-4,
            max_iter: 1000,
            seed: 0,
        }
    }
}

impl Hyperparams {
    fn validate(&self) -> Result<()> {
        if !(self.c > 0.0 && self.c.is_finite()) {
            return Err(Error::InvalidArgument(format!("C must be positive, got {}", self.c)));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "tol must be positive, got {}",
                self.tol
            )));
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be >= 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    Converged,
    MaxIter,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Converged => "converged",
            StopReason::MaxIter => "max_iter",
        }
    }
}

/// Raw solver output.
#[derive(Debug, Clone)]
pub struct SvmSolution {
    pub weights: Vec<f64>,
    pub bias: f64,
    /// Dual variables, one per training example, each in `[0, C]`.
    pub alpha: Vec<f64>,
    pub stop: StopReason,
    pub epochs: usize,
}

impl SvmSolution {
    /// Primal objective at the solution.
    pub fn primal_objective(&self, examples: &[(SparseVector, Label)], c: f64) -> f64 {
        primal_objective(&self.weights, self.bias, examples, c)
    }
}

pub fn primal_objective(weights: &[f64], bias: f64, examples: &[(SparseVector, Label)], c: f64) -> f64 {
    let reg = 0.5 * (weights.iter().map(|w| w * w).sum::<f64>() + bias * bias);
    let loss: f64 = examples
        .iter()
        .map(|(x, y)| (1.0 - y.sign() * (x.dot(weights) + bias)).max(0.0))
        .sum();
    reg + c * loss
}

/// Dual coordinate descent with shrinking. Example order within each pass
/// is a seeded permutation, so results are reproducible bit for bit.
pub fn train_svm(examples: &[(SparseVector, Label)], dim: usize, hp: &Hyperparams) -> Result<SvmSolution> {
    hp.validate()?;
    let mut has = [false; 2];
    for (x, y) in examples {
        match y {
            Label::Positive => has[0] = true,
            Label::Negative => has[1] = true,
            Label::Unlabeled => return Err(Error::InvalidArgument("unlabeled example in training data".into())),
        }
        if let Some(i) = x.max_index() {
            if i as usize >= dim {
                return Err(Error::IndexOutOfRange { index: i as usize, dim });
            }
        }
        if x.entries().iter().any(|(_, v)| !v.is_finite()) {
            return Err(Error::NonFinite("training feature".into()));
        }
    }
    if !(has[0] && has[1]) {
        return Err(Error::Insufficient(
            "training data must contain both positive and negative examples".into(),
        ));
    }

    let l = examples.len();
    let c = hp.c;
    let y: Vec<f64> = examples.iter().map(|(_, y)| y.sign()).collect();
    // +1 for the constant bias feature.
    let qd: Vec<f64> = examples.iter().map(|(x, _)| x.norm_sq() + 1.0).collect();
    let mut w = vec![0.0; dim];
    let mut b = 0.0;
    let mut alpha = vec![0.0; l];
    let mut index: Vec<usize> = (0..l).collect();
    let mut active = l;
    let mut rng = ChaCha8Rng::seed_from_u64(hp.seed);

    let mut pg_max_old = f64::INFINITY;
    let mut pg_min_old = f64::NEG_INFINITY;
    let mut epochs = 0;
    let mut stop = StopReason::MaxIter;

    while epochs < hp.max_iter {
        let mut pg_max = f64::NEG_INFINITY;
        let mut pg_min = f64::INFINITY;
        index[..active].shuffle(&mut rng);

        let mut s = 0;
        while s < active {
            let i = index[s];
            let (x, _) = &examples[i];
            let g = y[i] * (x.dot(&w) + b) - 1.0;
            let mut pg = 0.0;
            if alpha[i] == 0.0 {
                if g > pg_max_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g < 0.0 {
                    pg = g;
                }
            } else if alpha[i] == c {
                if g < pg_min_old {
                    active -= 1;
                    index.swap(s, active);
                    continue;
                } else if g > 0.0 {
                    pg = g;
                }
            } else {
                pg = g;
            }
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);

            if pg.abs() > 1e-12 {
                let old = alpha[i];
                alpha[i] = (old - g / qd[i]).clamp(0.0, c);
                let d = (alpha[i] - old) * y[i];
                for &(j, v) in x.entries() {
                    w[j as usize] += d * v;
                }
                b += d;
            }
            s += 1;
        }
        epochs += 1;

        if pg_max - pg_min <= hp.tol {
            if active == l {
                stop = StopReason::Converged;
                break;
            }
            // Re-check the full set before declaring convergence.
            active = l;
            pg_max_old = f64::INFINITY;
            pg_min_old = f64::NEG_INFINITY;
            continue;
        }
        pg_max_old = if pg_max <= 0.0 { f64::INFINITY } else { pg_max };
        pg_min_old = if pg_min >= 0.0 { f64::NEG_INFINITY } else { pg_min };
    }

    Ok(SvmSolution {
        weights: w,
        bias: b,
        alpha,
        stop,
        epochs,
    })
}

/// Sigmoid calibration `P(positive | s) = 1 / (1 + exp(a * s + b))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlattParams {
    pub a: f64,
    pub b: f64,
}

impl PlattParams {
    pub fn probability(&self, score: f64) -> f64 {
        sigmoid_neg(self.a * score + self.b)
    }
}

/// `1 / (1 + exp(z))`, computed without overflow.
fn sigmoid_neg(z: f64) -> f64 {
    if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlattFit {
    pub params: PlattParams,
    pub converged: bool,
    pub iterations: usize,
}

/// Platt's smoothed targets: `(N+ + 1)/(N+ + 2)` for positives and
/// `1/(N- + 2)` for negatives.
pub fn platt_targets(labels: &[Label]) -> Vec<f64> {
    let pos = labels.iter().filter(|l| **l == Label::Positive).count() as f64;
    let neg = labels.len() as f64 - pos;
    let hi = (pos + 1.0) / (pos + 2.0);
    let lo = 1.0 / (neg + 2.0);
    labels
        .iter()
        .map(|l| if *l == Label::Positive { hi } else { lo })
        .collect()
}

/// Cross-entropy of the sigmoid against per-example targets in `[0, 1]`.
pub fn sigmoid_cross_entropy(params: PlattParams, scores: &[f64], targets: &[f64]) -> f64 {
    scores
        .iter()
        .zip(targets)
        .map(|(&s, &t)| {
            let z = params.a * s + params.b;
            // -[t log p + (1-t) log(1-p)] with p = 1/(1+e^z)
            if z >= 0.0 {
                t * z + (-z).exp().ln_1p()
            } else {
                (t - 1.0) * z + z.exp().ln_1p()
            }
        })
        .sum()
}

/// Fits (A, B) by Newton's method with backtracking line search on the
/// smoothed-target negative log-likelihood.
pub fn fit_platt(scores: &[f64], labels: &[Label], max_newton_iter: usize) -> Result<PlattFit> {
    if scores.len() != labels.len() {
        return Err(Error::InvalidArgument("scores and labels differ in length".into()));
    }
    let pos = labels.iter().filter(|l| **l == Label::Positive).count();
    let neg = labels.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Insufficient("Platt calibration needs both labels".into()));
    }
    if scores.iter().any(|s| !s.is_finite()) {
        return Err(Error::NonFinite("calibration score".into()));
    }
    if scores.iter().all(|&s| s == scores[0]) {
        return Err(Error::Insufficient(
            "all calibration scores are identical; use a larger calibration set".into(),
        ));
    }

    const MIN_STEP: f64 = 1e-10;
    const SIGMA: f64 = 1e-12;
    const EPS: f64 = 1e-5;

    let t = platt_targets(labels);
    let mut p = PlattParams {
        a: 0.0,
        b: ((neg as f64 + 1.0) / (pos as f64 + 1.0)).ln(),
    };
    let mut fval = sigmoid_cross_entropy(p, scores, &t);
    let mut converged = false;
    let mut iterations = 0;

    while iterations < max_newton_iter {
        let (mut h11, mut h22, mut h21) = (SIGMA, SIGMA, 0.0);
        let (mut g1, mut g2) = (0.0, 0.0);
        for (&s, &ti) in scores.iter().zip(&t) {
            let prob = p.probability(s);
            let d2 = prob * (1.0 - prob);
            h11 += s * s * d2;
            h22 += d2;
            h21 += s * d2;
            let d1 = ti - prob;
            g1 += s * d1;
            g2 += d1;
        }
        if g1.abs() < EPS && g2.abs() < EPS {
            converged = true;
            break;
        }
        iterations += 1;

        let det = h11 * h22 - h21 * h21;
        let da = -(h22 * g1 - h21 * g2) / det;
        let db = -(-h21 * g1 + h11 * g2) / det;
        let gd = g1 * da + g2 * db;

        let mut step = 1.0;
        let mut moved = false;
        while step >= MIN_STEP {
            let cand = PlattParams {
                a: p.a + step * da,
                b: p.b + step * db,
            };
            let f = sigmoid_cross_entropy(cand, scores, &t);
            if f < fval + 1e-4 * step * gd {
                p = cand;
                fval = f;
                moved = true;
                break;
            }
            step /= 2.0;
        }
        if !moved {
            break;
        }
    }
    Ok(PlattFit {
        params: p,
        converged,
        iterations,
    })
}

/// A trained scorer bound to one vocabulary.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub vocab_fingerprint: String,
    pub hyperparams: Hyperparams,
    pub tf_mode: TfMode,
    pub stop: StopReason,
    pub epochs: usize,
    pub platt: Option<PlattParams>,
}

impl LinearModel {
    pub fn from_solution(
        sol: SvmSolution,
        vocab_fingerprint: String,
        hyperparams: Hyperparams,
        tf_mode: TfMode,
    ) -> Self {
        LinearModel {
            weights: sol.weights,
            bias: sol.bias,
            vocab_fingerprint,
            hyperparams,
            tf_mode,
            stop: sol.stop,
            epochs: sol.epochs,
            platt: None,
        }
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn check_vocabulary(&self, vocab: &Vocabulary) -> Result<()> {
        let actual = vocab.fingerprint();
        if actual != self.vocab_fingerprint || vocab.len() != self.dim() {
            return Err(Error::FingerprintMismatch {
                expected: self.vocab_fingerprint.clone(),
                actual,
            });
        }
        Ok(())
    }
}

/// `w.x + b`.
pub fn decision_score(m: &LinearModel, x: &SparseVector) -> Result<f64> {
    if let Some(i) = x.max_index() {
        if i as usize >= m.dim() {
            return Err(Error::IndexOutOfRange {
                index: i as usize,
                dim: m.dim(),
            });
        }
    }
    Ok(x.dot(&m.weights) + m.bias)
}

pub fn predict_proba(m: &LinearModel, p: &PlattParams, x: &SparseVector) -> Result<f64> {
    Ok(p.probability(decision_score(m, x)?))
}

/// Positive iff the score is strictly above `threshold`.
pub fn classify(m: &LinearModel, x: &SparseVector, threshold: f64) -> Result<Label> {
    Ok(label_for(decision_score(m, x)?, threshold))
}

pub(crate) fn label_for(score: f64, threshold: f64) -> Label {
    if score > threshold {
        Label::Positive
    } else {
        Label::Negative
    }
}

/// Votes sentence by sentence; positive only with a strict majority.
pub fn batch_majority_classify(m: &LinearModel, sentence_vectors: &[SparseVector]) -> Result<Label> {
    if sentence_vectors.is_empty() {
        return Err(Error::InvalidArgument("majority vote over an empty batch".into()));
    }
    let mut pos = 0usize;
    for x in sentence_vectors {
        if classify(m, x, 0.0)? == Label::Positive {
            pos += 1;
        }
    }
    Ok(majority(pos, sentence_vectors.len()))
}

pub(crate) fn majority(positive_votes: usize, total: usize) -> Label {
    if positive_votes > total - positive_votes {
        Label::Positive
    } else {
        Label::Negative
    }
}

const MODEL_MAGIC: &str = "#domain-sieve-model v1";

fn tf_mode_str(m: TfMode) -> String {
    match m {
        TfMode::DocMax => "doc-max".into(),
        TfMode::CorpusMax(n) => format!("corpus-max:{n}"),
    }
}

pub(crate) fn parse_tf_mode(s: &str) -> Option<TfMode> {
    match s {
        "doc-max" => Some(TfMode::DocMax),
        _ => s
            .strip_prefix("corpus-max:")
            .and_then(|n| n.parse().ok())
            .filter(|&n| n > 0)
            .map(TfMode::CorpusMax),
    }
}

pub fn save_model(m: &LinearModel, path: &Path, provenance: Option<&str>) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    let hp = &m.hyperparams;
    let mut write = || -> std::io::Result<()> {
        writeln!(w, "{MODEL_MAGIC}")?;
        if let Some(p) = provenance {
            writeln!(w, "provenance={p}")?;
        }
        writeln!(w, "vocab_fingerprint={}", m.vocab_fingerprint)?;
        writeln!(w, "dim={}", m.dim())?;
        writeln!(w, "c={}", hexfloat::format(hp.c))?;
        writeln!(w, "tol={}", hexfloat::format(hp.tol))?;
        writeln!(w, "max_iter={}", hp.max_iter)?;
        writeln!(w, "seed={}", hp.seed)?;
        writeln!(w, "tf_mode={}", tf_mode_str(m.tf_mode))?;
        writeln!(w, "stop={}", m.stop.as_str())?;
        writeln!(w, "epochs={}", m.epochs)?;
        for (i, &wi) in m.weights.iter().enumerate() {
            if wi != 0.0 {
                writeln!(w, "{i}\t{}", hexfloat::format(wi))?;
            }
        }
        writeln!(w, "bias\t{}", hexfloat::format(m.bias))?;
        if let Some(p) = m.platt {
            writeln!(w, "platt\t{}\t{}", hexfloat::format(p.a), hexfloat::format(p.b))?;
        }
        w.flush()
    };
    write().map_err(|e| Error::io(path, e))
}

pub fn load_model(path: &Path) -> Result<LinearModel> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut fingerprint = None;
    let mut dim: Option<usize> = None;
    let mut hp = Hyperparams::default();
    let mut tf_mode = TfMode::DocMax;
    let mut stop = StopReason::MaxIter;
    let mut epochs = 0;
    let mut weights: Vec<(usize, f64)> = Vec::new();
    let mut bias = None;
    let mut platt = None;

    for (i, line) in BufReader::new(file).lines().enumerate() {
        let ln = i as u64 + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let bad = |what: &str| Error::format(path, ln, what.to_string());
        if i == 0 {
            if line != MODEL_MAGIC {
                return Err(bad("missing model header"));
            }
            continue;
        }
        let hex = |s: &str| hexfloat::parse(s).ok_or_else(|| bad("bad hex-float"));
        if let Some((key, val)) = line.split_once('=') {
            match key {
                "provenance" => {}
                "vocab_fingerprint" => fingerprint = Some(val.to_string()),
                "dim" => dim = Some(val.parse().map_err(|_| bad("bad dim"))?),
                "c" => hp.c = hex(val)?,
                "tol" => hp.tol = hex(val)?,
                "max_iter" => hp.max_iter = val.parse().map_err(|_| bad("bad max_iter"))?,
                "seed" => hp.seed = val.parse().map_err(|_| bad("bad seed"))?,
                "tf_mode" => tf_mode = parse_tf_mode(val).ok_or_else(|| bad("bad tf_mode"))?,
                "stop" => {
                    stop = match val {
                        "converged" => StopReason::Converged,
                        "max_iter" => StopReason::MaxIter,
                        _ => return Err(bad("bad stop reason")),
                    }
                }
                "epochs" => epochs = val.parse().map_err(|_| bad("bad epochs"))?,
                _ => return Err(bad(&format!("unknown key {key:?}"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        match fields.as_slice() {
            ["bias", v] => bias = Some(hex(v)?),
            ["platt", a, b] => platt = Some(PlattParams { a: hex(a)?, b: hex(b)? }),
            [idx, v] => {
                let idx: usize = idx.parse().map_err(|_| bad("bad weight index"))?;
                if weights.last().is_some_and(|&(prev, _)| prev >= idx) {
                    return Err(bad("weight indices must increase"));
                }
                weights.push((idx, hex(v)?));
            }
            _ => return Err(bad("unrecognized line")),
        }
    }
    let missing = |what: &str| Error::format(path, 1, format!("missing {what}"));
    let dim = dim.ok_or_else(|| missing("dim"))?;
    let mut dense = vec![0.0; dim];
    for (i, v) in weights {
        *dense
            .get_mut(i)
            .ok_or_else(|| Error::format(path, 1, format!("weight index {i} >= dim {dim}")))? = v;
    }
    Ok(LinearModel {
        weights: dense,
        bias: bias.ok_or_else(|| missing("bias"))?,
        vocab_fingerprint: fingerprint.ok_or_else(|| missing("vocab_fingerprint"))?,
        hyperparams: hp,
        tf_mode,
        stop,
        epochs,
        platt,
    })
}

/// Loads a model and verifies it was trained against `vocab`.
pub fn load_model_for(path: &Path, vocab: &Vocabulary) -> Result<LinearModel> {
    let m = load_model(path)?;
    m.check_vocabulary(vocab)?;
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sv(pairs: &[(u32, f64)]) -> SparseVector {
        SparseVector::from_pairs(pairs.to_vec()).unwrap()
    }

    fn model(weights: Vec<f64>, bias: f64) -> LinearModel {
        LinearModel {
            weights,
            bias,
            vocab_fingerprint: "fp".into(),
            hyperparams: Hyperparams::default(),
            tf_mode: TfMode::DocMax,
            stop: StopReason::Converged,
            epochs: 1,
            platt: None,
        }
    }

    #[test]
    fn separable_pair() {
        let data = vec![(sv(&[(0, 1.0)]), Label::Positive), (sv(&[(1, 1.0)]), Label::Negative)];
        let sol = train_svm(&data, 2, &Hyperparams::default()).unwrap();
        let m = LinearModel::from_solution(sol, "fp".into(), Hyperparams::default(), TfMode::DocMax);
        let s1 = decision_score(&m, &data[0].0).unwrap();
        let s2 = decision_score(&m, &data[1].0).unwrap();
        assert!(s1 > 0.0 && s2 < 0.0);
        assert!(
            1.0 - s1 <= 1e-3 && 1.0 + s2 <= 1e-3,
            "hinge loss should vanish: {s1} {s2}"
        );
    }

    #[test]
    fn mirrored_classes_give_zero_bias() {
        let pts = [(0.9, 0.2), (0.4, 0.7), (0.1, 0.3), (0.8, 0.9)];
        let mut data = Vec::new();
        for (a, b) in pts {
            data.push((sv(&[(0, a), (1, b)]), Label::Positive));
            data.push((sv(&[(0, -a), (1, -b)]), Label::Negative));
        }
        let hp = Hyperparams {
            tol: 1e-12,
            max_iter: 100_000,
            ..Hyperparams::default()
        };
        let sol = train_svm(&data, 2, &hp).unwrap();
        assert!(sol.bias.abs() <= 1e-9, "bias {}", sol.bias);
    }

    #[test]
    fn single_class_is_an_error() {
        let data = vec![(sv(&[(0, 1.0)]), Label::Positive)];
        assert!(matches!(
            train_svm(&data, 1, &Hyperparams::default()),
            Err(Error::Insufficient(_))
        ));
    }

    #[test]
    fn out_of_range_feature_is_an_error() {
        let data = vec![(sv(&[(3, 1.0)]), Label::Positive), (sv(&[(0, 1.0)]), Label::Negative)];
        assert!(train_svm(&data, 2, &Hyperparams::default()).is_err());
    }

    #[test]
    fn nan_feature_is_rejected() {
        assert!(SparseVector::from_pairs(vec![(0, f64::NAN)]).is_err());
    }

    #[test]
    fn decision_score_examples() {
        assert_eq!(
            decision_score(&model(vec![0.0; 3], 0.5), &sv(&[(2, 0.3)])).unwrap(),
            0.5
        );
        let m = model(vec![1.0, -2.0], 0.0);
        assert_eq!(decision_score(&m, &sv(&[(0, 1.0), (1, 0.5)])).unwrap(), 0.0);
        assert_eq!(decision_score(&m, &SparseVector::empty()).unwrap(), 0.0);
        assert!(decision_score(&m, &sv(&[(2, 1.0)])).is_err());
    }

    #[test]
    fn classify_threshold_ties_negative() {
        let x = sv(&[(0, 1.0)]);
        assert_eq!(classify(&model(vec![0.1], 0.0), &x, 0.0).unwrap(), Label::Positive);
        assert_eq!(classify(&model(vec![0.0], 0.0), &x, 0.0).unwrap(), Label::Negative);
        assert_eq!(classify(&model(vec![-0.1], 0.0), &x, 0.0).unwrap(), Label::Negative);
    }

    #[test]
    fn majority_votes() {
        assert_eq!(majority(60, 100), Label::Positive);
        assert_eq!(majority(50, 100), Label::Negative);
        // w = (1, -1), b = 0: scores +0.5, -0.5, -0.25.
        let m = model(vec![1.0, -1.0], 0.0);
        let sents = [sv(&[(0, 0.5)]), sv(&[(1, 0.5)]), sv(&[(0, 0.25), (1, 0.5)])];
        assert_eq!(batch_majority_classify(&m, &sents).unwrap(), Label::Negative);
        assert!(batch_majority_classify(&m, &[]).is_err());
    }

    #[test]
    fn proba_examples() {
        let m = model(vec![1.0], 0.0);
        let p = PlattParams { a: -1.0, b: 0.0 };
        let x = sv(&[(0, 3f64.ln())]);
        assert!((predict_proba(&m, &p, &x).unwrap() - 0.75).abs() < 1e-15);
        assert_eq!(PlattParams { a: 2.0, b: -2.0 }.probability(1.0), 0.5);
        assert!(p.probability(-1.0) < p.probability(1.0));
    }

    #[test]
    fn platt_separated_scores() {
        let mut scores = Vec::new();
        let mut labels = Vec::new();
        for _ in 0..50 {
            scores.push(-1.0);
            labels.push(Label::Negative);
            scores.push(1.0);
            labels.push(Label::Positive);
        }
        let fit = fit_platt(&scores, &labels, 100).unwrap();
        assert!(fit.params.a < 0.0);
        let hard: Vec<f64> = labels
            .iter()
            .map(|l| if *l == Label::Positive { 1.0 } else { 0.0 })
            .collect();
        let half = PlattParams { a: 0.0, b: 0.0 };
        assert!(sigmoid_cross_entropy(fit.params, &scores, &hard) < sigmoid_cross_entropy(half, &scores, &hard));
    }

    #[test]
    fn platt_errors() {
        assert!(fit_platt(&[1.0, 2.0], &[Label::Positive, Label::Positive], 100).is_err());
        assert!(fit_platt(&[1.0, 1.0], &[Label::Positive, Label::Negative], 100).is_err());
    }

    #[test]
    fn model_round_trip_and_fingerprint_check() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("model.txt");
        let mut m = model(vec![0.0, 0.1, -1.0 / 3.0, 0.0], 0.123456789);
        m.tf_mode = TfMode::CorpusMax(4);
        m.platt = Some(PlattParams { a: -1.7, b: 0.01 });
        save_model(&m, &p, Some("config=x")).unwrap();
        assert_eq!(load_model(&p).unwrap(), m);

        let vocab = crate::textproc::build_vocabulary(["a b c d"], 10, &crate::textproc::StopWords::none()).unwrap();
        assert!(matches!(
            load_model_for(&p, &vocab),
            Err(Error::FingerprintMismatch { .. })
        ));
    }

    #[test]
    fn corrupted_model_line() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("model.txt");
        save_model(&model(vec![1.0], 0.0), &p, None).unwrap();
        let text = std::fs::read_to_string(&p).unwrap().replace("0\t0x1p+0", "0\tzz");
        std::fs::write(&p, text).unwrap();
        match load_model(&p) {
            Err(Error::Format { line, .. }) => assert_eq!(line, 11),
            other => panic!("expected format error, got {other:?}"),
        }
    }
}
