//! Reference solvers used as independent oracles. None of this calls into the
//! library's optimizers.

#![allow(dead_code)]

use domain_sieve::batcher::Label;
use domain_sieve::vectorizer::SparseVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Dense feature rows with the constant bias feature appended.
fn augmented(examples: &[(SparseVector, Label)], dim: usize) -> Vec<Vec<f64>> {
    examples
        .iter()
        .map(|(x, _)| {
            let mut z = vec![0.0; dim + 1];
            for &(i, v) in x.entries() {
                z[i as usize] = v;
            }
            z[dim] = 1.0;
            z
        })
        .collect()
}

/// Gaussian elimination with partial pivoting; `None` if (near) singular.
fn solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
    for col in 0..n {
        let p = (col..n).max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))?;
        if a[p][col].abs() < 1e-10 * scale {
            return None;
        }
        a.swap(col, p);
        b.swap(col, p);
        let (head, tail) = a.split_at_mut(col + 1);
        let pivot = &head[col];
        for (off, row) in tail.iter_mut().enumerate() {
            let f = row[col] / pivot[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * p;
            }
            b[col + 1 + off] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|k| a[r][k] * x[k]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Primal objective `0.5 (|w|^2 + b^2) + C sum hinge` for augmented weights.
pub fn oracle_primal(z: &[Vec<f64>], y: &[f64], wa: &[f64], c: f64) -> f64 {
    let reg = 0.5 * wa.iter().map(|v| v * v).sum::<f64>();
    let loss: f64 = z
        .iter()
        .zip(y)
        .map(|(zi, yi)| (1.0 - yi * zi.iter().zip(wa).map(|(a, b)| a * b).sum::<f64>()).max(0.0))
        .sum();
    reg + c * loss
}

/// Exact optimum of the bias-augmented L1-hinge SVM by enumerating which
/// dual variables sit at 0, at C, or strictly inside the box, solving the
/// linear system for the free ones, and keeping the KKT point.
/// Returns `(primal optimum, dual variables)`.
pub fn svm_oracle(examples: &[(SparseVector, Label)], dim: usize, c: f64) -> Option<(f64, Vec<f64>)> {
    let z = augmented(examples, dim);
    let y: Vec<f64> = examples.iter().map(|(_, l)| l.sign()).collect();
    let m = z.len();
    let q = |i: usize, j: usize| y[i] * y[j] * z[i].iter().zip(&z[j]).map(|(a, b)| a * b).sum::<f64>();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for code in 0..3usize.pow(m as u32) {
        // state per example: 0 -> alpha = 0, 1 -> alpha = C, 2 -> free
        let mut state = vec![0u8; m];
        let mut k = code;
        for s in state.iter_mut() {
            *s = (k % 3) as u8;
            k /= 3;
        }
        let free: Vec<usize> = (0..m).filter(|&i| state[i] == 2).collect();
        let at_c: Vec<usize> = (0..m).filter(|&i| state[i] == 1).collect();
        let mut alpha = vec![0.0; m];
        for &i in &at_c {
            alpha[i] = c;
        }
        if !free.is_empty() {
            let a: Vec<Vec<f64>> = free.iter().map(|&i| free.iter().map(|&j| q(i, j)).collect()).collect();
            let b: Vec<f64> = free
                .iter()
                .map(|&i| 1.0 - at_c.iter().map(|&j| q(i, j) * c).sum::<f64>())
                .collect();
            let Some(sol) = solve(a, b) else { continue };
            if sol.iter().any(|&v| v <= -1e-9 || v >= c + 1e-9) {
                continue;
            }
            for (&i, v) in free.iter().zip(sol) {
                alpha[i] = v.clamp(0.0, c);
            }
        }
        // KKT: gradient of the dual objective.
        let ok = (0..m).all(|i| {
            let g = (0..m).map(|j| q(i, j) * alpha[j]).sum::<f64>() - 1.0;
            match state[i] {
                0 => g >= -1e-7,
                1 => g <= 1e-7,
                _ => g.abs() <= 1e-7,
            }
        });
        if !ok {
            continue;
        }
        let mut wa = vec![0.0; dim + 1];
        for i in 0..m {
            for (k, v) in z[i].iter().enumerate() {
                wa[k] += alpha[i] * y[i] * v;
            }
        }
        let p = oracle_primal(&z, &y, &wa, c);
        if best.as_ref().is_none_or(|(bp, _)| p < *bp) {
            best = Some((p, alpha));
        }
    }
    best
}

/// A random instance with 2..=8 examples, 1..=3 features and both labels.
pub fn random_instance(rng: &mut ChaCha8Rng) -> (Vec<(SparseVector, Label)>, usize, f64) {
    let m = rng.random_range(2..=8);
    let dim = rng.random_range(1..=3);
    let c = [0.1, 0.5, 1.0, 2.0, 10.0][rng.random_range(0..5)];
    let mut ex = Vec::with_capacity(m);
    for i in 0..m {
        let label = if i == 0 {
            Label::Positive
        } else if i == 1 {
            Label::Negative
        } else if rng.random_bool(0.5) {
            Label::Positive
        } else {
            Label::Negative
        };
        let shift = if label == Label::Positive { 0.5 } else { -0.5 };
        let pairs: Vec<(u32, f64)> = (0..dim)
            .map(|k| (k as u32, rng.random_range(-1.5..1.5) + shift))
            .collect();
        ex.push((SparseVector::from_pairs(pairs).unwrap(), label));
    }
    (ex, dim, c)
}

/// Mean negative log-likelihood of 0/1 `targets` under
/// `P = 1 / (1 + exp(a s + b))`, computed directly.
pub fn nll(a: f64, b: f64, scores: &[f64], targets: &[f64]) -> f64 {
    scores
        .iter()
        .zip(targets)
        .map(|(&s, &t)| {
            let f = a * s + b;
            // -log P = log(1 + e^f), -log(1-P) = log(1 + e^-f)
            let lp = if f > 0.0 {
                f + (-f).exp().ln_1p()
            } else {
                f.exp().ln_1p()
            };
            let lq = lp - f;
            t * lp + (1.0 - t) * lq
        })
        .sum::<f64>()
        / scores.len() as f64
}

/// Brute-force minimizer of [`nll`]: a coarse grid, then a fine grid around
/// the coarse winner.
pub fn platt_grid_oracle(scores: &[f64], targets: &[f64]) -> (f64, f64) {
    let grid = |a0: f64, a1: f64, b0: f64, b1: f64, step: f64| {
        let mut best = (f64::INFINITY, 0.0, 0.0);
        let na = ((a1 - a0) / step).round() as usize;
        let nb = ((b1 - b0) / step).round() as usize;
        for i in 0..=na {
            let a = a0 + i as f64 * step;
            for j in 0..=nb {
                let b = b0 + j as f64 * step;
                let v = nll(a, b, scores, targets);
                if v < best.0 {
                    best = (v, a, b);
                }
            }
        }
        (best.1, best.2)
    };
    let (a, b) = grid(-6.0, 2.0, -3.0, 3.0, 0.1);
    grid(a - 0.1, a + 0.1, b - 0.1, b + 0.1, 0.005)
}

/// `n` scores uniform on [-3, 3] with labels drawn from the sigmoid
/// `1 / (1 + exp(a s + b))`.
pub fn sigmoid_sample(n: usize, a: f64, b: f64, seed: u64) -> (Vec<f64>, Vec<Label>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut scores = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    for _ in 0..n {
        let s: f64 = rng.random_range(-3.0..3.0);
        let p = 1.0 / (1.0 + (a * s + b).exp());
        scores.push(s);
        labels.push(if rng.random_bool(p) {
            Label::Positive
        } else {
            Label::Negative
        });
    }
    (scores, labels)
}

/// Platt's smoothed targets, written out independently of the library.
pub fn smoothed_targets(labels: &[Label]) -> Vec<f64> {
    let np = labels.iter().filter(|&&l| l == Label::Positive).count() as f64;
    let nn = labels.len() as f64 - np;
    labels
        .iter()
        .map(|&l| {
            if l == Label::Positive {
                (np + 1.0) / (np + 2.0)
            } else {
                1.0 / (nn + 2.0)
            }
        })
        .collect()
}

pub fn hard_targets(labels: &[Label]) -> Vec<f64> {
    labels
        .iter()
        .map(|&l| f64::from(u8::from(l == Label::Positive)))
        .collect()
}

/// NLL of the best constant probability for 0/1 targets.
pub fn constant_nll(targets: &[f64]) -> f64 {
    let p = targets.iter().sum::<f64>() / targets.len() as f64;
    let p = p.clamp(1e-12, 1.0 - 1e-12);
    targets
        .iter()
        .map(|&t| -(t * p.ln() + (1.0 - t) * (1.0 - p).ln()))
        .sum::<f64>()
        / targets.len() as f64
}
