//! Separable decompositions of two-qubit states in local Bloch coordinates.
//!
//! A candidate is a list of weights pᵢ and Bloch vector pairs (aᵢ, bᵢ). It
//! certifies separability when it reproduces the Fano data of ρ:
//! Σ pᵢaᵢ = r, Σ pᵢbᵢ = s and Σ pᵢ aᵢbᵢᵀ = τ.
//!
//! All three conditions are packed into one 4×4 moment matrix
//! M = [[1, sᵀ], [r, τ]], matched by Σ pᵢ âᵢ b̂ᵢᵀ with â = (1, a), b̂ = (1, b).

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli;
use crate::states::{fano_decompose, mixture, require_qubits, DensityMatrix};

/// Largest residual accepted as a certificate.
pub const CERT_TOL: f64 = 1e-6;
/// Tolerance on Σ pᵢ = 1 and on |aᵢ|, |bᵢ| ≤ 1.
pub const CANDIDATE_TOL: f64 = 1e-9;
pub const DEFAULT_TERMS: usize = 16;
pub const DEFAULT_MAX_ITERS: usize = 5_000;
pub const DEFAULT_RESTARTS: usize = 8;

/// Weights and local Bloch vectors of a proposed separable decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCandidate")]
pub struct LiQiaoCandidate {
    weights: Vec<f64>,
    bloch_a: Vec<[f64; 3]>,
    bloch_b: Vec<[f64; 3]>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawCandidate {
    weights: Vec<f64>,
    bloch_a: Vec<[f64; 3]>,
    bloch_b: Vec<[f64; 3]>,
}

impl TryFrom<RawCandidate> for LiQiaoCandidate {
    type Error = Error;

    fn try_from(raw: RawCandidate) -> Result<Self> {
        LiQiaoCandidate::new(raw.weights, raw.bloch_a, raw.bloch_b)
    }
}

fn norm3(v: &[f64; 3]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl LiQiaoCandidate {
    pub fn new(weights: Vec<f64>, bloch_a: Vec<[f64; 3]>, bloch_b: Vec<[f64; 3]>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidCandidate("no terms".into()));
        }
        if bloch_a.len() != weights.len() || bloch_b.len() != weights.len() {
            return Err(Error::InvalidCandidate(format!(
                "{} weights, {} bloch_a, {} bloch_b",
                weights.len(),
                bloch_a.len(),
                bloch_b.len()
            )));
        }
        let finite = weights.iter().all(|w| w.is_finite())
            && bloch_a.iter().chain(&bloch_b).flatten().all(|x| x.is_finite());
        if !finite {
            return Err(Error::InvalidCandidate("non-finite entry".into()));
        }
        if let Some((i, w)) = weights.iter().enumerate().find(|(_, w)| w.is_nan() || **w <= 0.0) {
            return Err(Error::InvalidCandidate(format!(
                "weight {i} is {w}, must be positive"
            )));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > CANDIDATE_TOL {
            return Err(Error::InvalidCandidate(format!("weights sum to {total}")));
        }
        for (name, vecs) in [("bloch_a", &bloch_a), ("bloch_b", &bloch_b)] {
            if let Some((i, v)) = vecs
                .iter()
                .enumerate()
                .find(|(_, v)| norm3(v) > 1.0 + CANDIDATE_TOL)
            {
                return Err(Error::InvalidCandidate(format!(
                    "{name}[{i}] has length {}",
                    norm3(v)
                )));
            }
        }
        Ok(Self {
            weights,
            bloch_a,
            bloch_b,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bloch_a(&self) -> &[[f64; 3]] {
        &self.bloch_a
    }

    pub fn bloch_b(&self) -> &[[f64; 3]] {
        &self.bloch_b
    }

    /// Σ pᵢ ½(I + aᵢ·σ) ⊗ ½(I + bᵢ·σ).
    pub fn compose(&self) -> Result<DensityMatrix> {
        let terms: Vec<_> = (0..self.len())
            .map(|i| {
                (
                    self.weights[i],
                    pauli::bloch_state(self.bloch_a[i]),
                    pauli::bloch_state(self.bloch_b[i]),
                )
            })
            .collect();
        mixture(&terms)
    }

    fn moments(&self) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..self.len() {
            let a = hat(&self.bloch_a[i]);
            let b = hat(&self.bloch_b[i]);
            for j in 0..4 {
                for k in 0..4 {
                    m[j][k] += self.weights[i] * a[j] * b[k];
                }
            }
        }
        m
    }
}

/// Distances between a candidate's moments and the target Fano data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Residuals {
    /// ‖Σ pᵢaᵢ − r‖
    pub dr: f64,
    /// ‖Σ pᵢbᵢ − s‖
    pub ds: f64,
    /// ‖Σ pᵢaᵢbᵢᵀ − τ‖_F
    pub dtau: f64,
}

impl Residuals {
    pub fn max(&self) -> f64 {
        self.dr.max(self.ds).max(self.dtau)
    }

    pub fn certifies(&self) -> bool {
        self.max() <= CERT_TOL
    }

    fn from_error(e: &[[f64; 4]; 4]) -> Self {
        let dr = (1..4).map(|j| e[j][0].powi(2)).sum::<f64>().sqrt();
        let ds = (1..4).map(|k| e[0][k].powi(2)).sum::<f64>().sqrt();
        let dtau = (1..4)
            .flat_map(|j| (1..4).map(move |k| (j, k)))
            .map(|(j, k)| e[j][k].powi(2))
            .sum::<f64>()
            .sqrt();
        Self { dr, ds, dtau }
    }
}

fn hat(v: &[f64; 3]) -> [f64; 4] {
    [1.0, v[0], v[1], v[2]]
}

/// M = [[1, sᵀ], [r, τ]].
fn target_moments(rho: &DensityMatrix) -> Result<[[f64; 4]; 4]> {
    let f = fano_decompose(rho)?;
    let mut m = [[0.0; 4]; 4];
    m[0][0] = 1.0;
    for j in 0..3 {
        m[j + 1][0] = f.r[j];
        m[0][j + 1] = f.s[j];
        for k in 0..3 {
            m[j + 1][k + 1] = f.tau[j][k];
        }
    }
    Ok(m)
}

fn sub(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut out = [[0.0; 4]; 4];
    for j in 0..4 {
        for k in 0..4 {
            out[j][k] = a[j][k] - b[j][k];
        }
    }
    out
}

/// Residuals of `cand` against the Fano data of `rho`.
pub fn liqiao_verify(cand: &LiQiaoCandidate, rho: &DensityMatrix) -> Result<Residuals> {
    require_qubits(rho.dims(), "decompositions are in qubit Bloch coordinates")?;
    // Re-check so hand-assembled candidates get a named violation.
    let cand = LiQiaoCandidate::new(
        cand.weights.clone(),
        cand.bloch_a.clone(),
        cand.bloch_b.clone(),
    )?;
    let target = target_moments(rho)?;
    Ok(Residuals::from_error(&sub(&cand.moments(), &target)))
}

/// Result of [`liqiao_search`].
#[derive(Debug, Clone, PartialEq)]
pub enum SearchOutcome {
    Certificate(LiQiaoCandidate, Residuals),
    /// Best residuals over all restarts. Not evidence of entanglement.
    Failure(Residuals),
}

impl SearchOutcome {
    pub fn certificate(&self) -> Option<&LiQiaoCandidate> {
        match self {
            SearchOutcome::Certificate(c, _) => Some(c),
            SearchOutcome::Failure(_) => None,
        }
    }

    pub fn residuals(&self) -> Residuals {
        match self {
            SearchOutcome::Certificate(_, r) | SearchOutcome::Failure(r) => *r,
        }
    }
}

/// Search settings. `max_iters` is the iteration budget of each restart.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchConfig {
    pub terms: usize,
    pub seed: u64,
    pub max_iters: usize,
    pub restarts: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            terms: DEFAULT_TERMS,
            seed: 0,
            max_iters: DEFAULT_MAX_ITERS,
            restarts: DEFAULT_RESTARTS,
        }
    }
}

/// Projected-gradient search for a decomposition with `terms` product terms.
pub fn liqiao_search(
    rho: &DensityMatrix,
    terms: usize,
    seed: u64,
    max_iters: usize,
) -> Result<SearchOutcome> {
    liqiao_search_with(
        rho,
        &SearchConfig {
            terms,
            seed,
            max_iters,
            ..SearchConfig::default()
        },
    )
}

/// As [`liqiao_search`] with every knob exposed.
///
/// Restarts run in order and the first certificate wins; otherwise the
/// lowest residual is reported, ties going to the earlier restart.
pub fn liqiao_search_with(rho: &DensityMatrix, config: &SearchConfig) -> Result<SearchOutcome> {
    require_qubits(rho.dims(), "decompositions are in qubit Bloch coordinates")?;
    for (name, value) in [
        ("terms", config.terms),
        ("max_iters", config.max_iters),
        ("restarts", config.restarts),
    ] {
        if value == 0 {
            return Err(Error::OutOfRange { name, value: 0.0 });
        }
    }
    let target = target_moments(rho)?;
    let mut best: Option<Residuals> = None;
    for restart in 0..config.restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(restart as u64);
        let start = Point::random(config.terms, &mut rng);
        let pg_iters = config.max_iters / 2;
        let point = descend(start, &target, pg_iters);
        let point = refine(&point, &target, config.max_iters - pg_iters);
        let res = point.residuals(&target);
        if res.certifies() {
            if let Some(cand) = point.into_candidate() {
                let res = liqiao_verify(&cand, rho)?;
                if res.certifies() {
                    return Ok(SearchOutcome::Certificate(cand, res));
                }
            }
        }
        if best.is_none_or(|b| res.max() < b.max()) {
            best = Some(res);
        }
    }
    Ok(SearchOutcome::Failure(best.expect("at least one restart")))
}

/// Optimiser state: weights on the simplex, Bloch vectors in the unit ball.
#[derive(Debug, Clone)]
struct Point {
    p: Vec<f64>,
    a: Vec<[f64; 3]>,
    b: Vec<[f64; 3]>,
}

impl Point {
    fn random(n: usize, rng: &mut impl Rng) -> Self {
        let mut ball = || -> [f64; 3] {
            loop {
                let v = [0; 3].map(|_| rng.random_range(-1.0..=1.0));
                if norm3(&v) <= 1.0 {
                    return v;
                }
            }
        };
        let a = (0..n).map(|_| ball()).collect();
        let b = (0..n).map(|_| ball()).collect();
        Self {
            p: vec![1.0 / n as f64; n],
            a,
            b,
        }
    }

    fn error(&self, target: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for i in 0..self.p.len() {
            let a = hat(&self.a[i]);
            let b = hat(&self.b[i]);
            for j in 0..4 {
                for k in 0..4 {
                    m[j][k] += self.p[i] * a[j] * b[k];
                }
            }
        }
        sub(&m, target)
    }

    fn objective(&self, target: &[[f64; 4]; 4]) -> f64 {
        self.error(target).iter().flatten().map(|x| x * x).sum()
    }

    fn residuals(&self, target: &[[f64; 4]; 4]) -> Residuals {
        Residuals::from_error(&self.error(target))
    }

    /// Gradient of the objective, with the Bloch blocks divided by max(pᵢ, floor).
    fn scaled_gradient(&self, target: &[[f64; 4]; 4]) -> Point {
        let e = self.error(target);
        let n = self.p.len();
        let floor = 0.1 / n as f64;
        let mut g = Point {
            p: vec![0.0; n],
            a: vec![[0.0; 3]; n],
            b: vec![[0.0; 3]; n],
        };
        for i in 0..n {
            let a = hat(&self.a[i]);
            let b = hat(&self.b[i]);
            let mut eb = [0.0; 4];
            let mut eta = [0.0; 4];
            for j in 0..4 {
                for k in 0..4 {
                    eb[j] += e[j][k] * b[k];
                    eta[k] += e[j][k] * a[j];
                }
            }
            g.p[i] = 2.0 * (0..4).map(|j| a[j] * eb[j]).sum::<f64>();
            let scale = 2.0 * self.p[i] / self.p[i].max(floor);
            for j in 0..3 {
                g.a[i][j] = scale * eb[j + 1];
                g.b[i][j] = scale * eta[j + 1];
            }
        }
        g
    }

    /// Projection of `self − step·dir` onto the feasible set.
    fn step(&self, dir: &Point, step: f64) -> Point {
        let mut p: Vec<f64> = self
            .p
            .iter()
            .zip(&dir.p)
            .map(|(x, g)| x - step * g)
            .collect();
        project_simplex(&mut p);
        let shift = |x: &[[f64; 3]], g: &[[f64; 3]]| -> Vec<[f64; 3]> {
            x.iter()
                .zip(g)
                .map(|(x, g)| clip_ball([0, 1, 2].map(|j| x[j] - step * g[j])))
                .collect()
        };
        Point {
            p,
            a: shift(&self.a, &dir.a),
            b: shift(&self.b, &dir.b),
        }
    }

    fn diff_dot(&self, other: &Point, g: &Point) -> (f64, f64) {
        // returns (⟨x − y, g⟩, ‖x − y‖²)
        let mut dot = 0.0;
        let mut sq = 0.0;
        for i in 0..self.p.len() {
            let d = self.p[i] - other.p[i];
            dot += d * g.p[i];
            sq += d * d;
            for j in 0..3 {
                let da = self.a[i][j] - other.a[i][j];
                let db = self.b[i][j] - other.b[i][j];
                dot += da * g.a[i][j] + db * g.b[i][j];
                sq += da * da + db * db;
            }
        }
        (dot, sq)
    }

    fn into_candidate(self) -> Option<LiQiaoCandidate> {
        let mut weights = Vec::new();
        let mut bloch_a = Vec::new();
        let mut bloch_b = Vec::new();
        for i in 0..self.p.len() {
            if self.p[i] > 0.0 {
                weights.push(self.p[i]);
                bloch_a.push(self.a[i]);
                bloch_b.push(self.b[i]);
            }
        }
        let total: f64 = weights.iter().sum();
        for w in &mut weights {
            *w /= total;
        }
        LiQiaoCandidate::new(weights, bloch_a, bloch_b).ok()
    }
}

/// Euclidean projection onto the probability simplex.
fn project_simplex(v: &mut [f64]) {
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (k, u) in sorted.iter().enumerate() {
        cumsum += u;
        let t = (cumsum - 1.0) / (k + 1) as f64;
        if u - t > 0.0 {
            theta = t;
        }
    }
    for x in v.iter_mut() {
        *x = (*x - theta).max(0.0);
    }
}

fn clip_ball(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(&v);
    if n > 1.0 {
        v.map(|x| x / n)
    } else {
        v
    }
}

/// Squared-residual level at which a restart stops early.
const STOP_OBJECTIVE: f64 = (CERT_TOL / 10.0) * (CERT_TOL / 10.0);
const ARMIJO: f64 = 1e-4;
const MIN_STEP: f64 = 1e-12;
const MAX_STEP: f64 = 1e6;
/// Refinement gives up when a window of iterations gains less than 0.1%.
const STALL_WINDOW: usize = 100;
const STALL_RATIO: f64 = 0.999;

/// Projected gradient with Barzilai–Borwein trial steps and backtracking.
fn descend(mut x: Point, target: &[[f64; 4]; 4], max_iters: usize) -> Point {
    let mut fx = x.objective(target);
    let mut g = x.scaled_gradient(target);
    let mut step = 1.0;
    for _ in 0..max_iters {
        if fx <= STOP_OBJECTIVE {
            break;
        }
        let mut t = step;
        let (y, fy) = loop {
            let y = x.step(&g, t);
            let fy = y.objective(target);
            let (dot, _) = x.diff_dot(&y, &g);
            if fy <= fx - ARMIJO * dot || t <= MIN_STEP {
                break (y, fy);
            }
            t *= 0.5;
        };
        let gy = y.scaled_gradient(target);
        // BB1 step from the displacement and the gradient change.
        let (_, ss) = y.diff_dot(&x, &gy);
        let sy = {
            let mut acc = 0.0;
            for i in 0..x.p.len() {
                acc += (y.p[i] - x.p[i]) * (gy.p[i] - g.p[i]);
                for j in 0..3 {
                    acc += (y.a[i][j] - x.a[i][j]) * (gy.a[i][j] - g.a[i][j]);
                    acc += (y.b[i][j] - x.b[i][j]) * (gy.b[i][j] - g.b[i][j]);
                }
            }
            acc
        };
        step = if sy > 0.0 {
            (ss / sy).clamp(MIN_STEP, MAX_STEP)
        } else {
            MAX_STEP.min(t * 4.0)
        };
        if ss == 0.0 {
            break;
        }
        x = y;
        fx = fy;
        g = gy;
    }
    x
}

/// Smooth coordinates for the refinement stage: pᵢ = wᵢ²/Σw², and
/// aᵢ, bᵢ are the last three components of unit 4-vectors.
#[derive(Debug, Clone)]
struct Smooth {
    w: Vec<f64>,
    va: Vec<[f64; 4]>,
    vb: Vec<[f64; 4]>,
}

fn lift(v: &[f64; 3]) -> [f64; 4] {
    let n = norm3(v).min(1.0);
    let s = if n > 0.0 { 1.0 / norm3(v).max(1.0) } else { 1.0 };
    [(1.0 - n * n).max(0.0).sqrt(), v[0] * s, v[1] * s, v[2] * s]
}

fn unit4(v: &[f64; 4]) -> [f64; 4] {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.map(|x| x / n)
}

impl Smooth {
    fn from_point(x: &Point) -> Self {
        Self {
            w: x.p.iter().map(|p| p.sqrt()).collect(),
            va: x.a.iter().map(lift).collect(),
            vb: x.b.iter().map(lift).collect(),
        }
    }

    fn to_point(&self) -> Point {
        let total: f64 = self.w.iter().map(|w| w * w).sum();
        let drop = |v: &[f64; 4]| -> [f64; 3] { clip_ball([v[1], v[2], v[3]]) };
        Point {
            p: self.w.iter().map(|w| w * w / total).collect(),
            a: self.va.iter().map(drop).collect(),
            b: self.vb.iter().map(drop).collect(),
        }
    }

    /// Jacobian of the 16 moment errors, row-major over (j, k), with
    /// columns ordered as (w, va, vb) per term.
    fn jacobian(&self, x: &Point, e: &[[f64; 4]; 4], target: &[[f64; 4]; 4]) -> DMatrix<f64> {
        let n = self.w.len();
        let total: f64 = self.w.iter().map(|w| w * w).sum();
        let mut jac = DMatrix::zeros(16, 9 * n);
        for i in 0..n {
            let ah = hat(&x.a[i]);
            let bh = hat(&x.b[i]);
            let col = 9 * i;
            for j in 0..4 {
                for k in 0..4 {
                    let model = e[j][k] + target[j][k];
                    jac[(4 * j + k, col)] = 2.0 * self.w[i] / total * (ah[j] * bh[k] - model);
                }
            }
            // d(v₁..₃/|v|)/dv for unit v is δ − v vᵀ restricted to rows 1..3.
            let da = |v: &[f64; 4], m: usize, r: usize| -> f64 {
                let delta = if r == m { 1.0 } else { 0.0 };
                delta - v[r] * v[m]
            };
            for m in 0..4 {
                for r in 1..4 {
                    let ga = x.p[i] * da(&self.va[i], m, r);
                    let gb = x.p[i] * da(&self.vb[i], m, r);
                    for k in 0..4 {
                        jac[(4 * r + k, col + 1 + m)] += ga * bh[k];
                        jac[(4 * k + r, col + 5 + m)] += gb * ah[k];
                    }
                }
            }
        }
        jac
    }

    fn shifted(&self, delta: &DVector<f64>) -> Self {
        let n = self.w.len();
        let mut w: Vec<f64> = (0..n).map(|i| self.w[i] + delta[9 * i]).collect();
        let norm = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= norm);
        let shift = |vs: &[[f64; 4]], off: usize| -> Vec<[f64; 4]> {
            vs.iter()
                .enumerate()
                .map(|(i, v)| unit4(&[0, 1, 2, 3].map(|m| v[m] + delta[9 * i + off + m])))
                .collect()
        };
        Self {
            w,
            va: shift(&self.va, 1),
            vb: shift(&self.vb, 5),
        }
    }
}

/// Levenberg–Marquardt in [`Smooth`] coordinates, using the minimum-norm
/// step Jᵀ(JJᵀ + λI)⁻¹e of the underdetermined system.
fn refine(start: &Point, target: &[[f64; 4]; 4], max_iters: usize) -> Point {
    let mut s = Smooth::from_point(start);
    let mut x = s.to_point();
    let mut fx = x.objective(target);
    let mut lambda = 1e-3;
    let mut checkpoint = fx;
    for iter in 0..max_iters {
        if fx <= STOP_OBJECTIVE {
            break;
        }
        if iter > 0 && iter % STALL_WINDOW == 0 {
            if fx > STALL_RATIO * checkpoint {
                break;
            }
            checkpoint = fx;
        }
        let e = x.error(target);
        let jac = s.jacobian(&x, &e, target);
        let ev = DVector::from_iterator(16, e.iter().flatten().copied());
        let mut gram = &jac * jac.transpose();
        for d in 0..16 {
            gram[(d, d)] += lambda;
        }
        let Some(chol) = gram.cholesky() else {
            lambda *= 10.0;
            continue;
        };
        let delta = -(jac.transpose() * chol.solve(&ev));
        let trial = s.shifted(&delta);
        let y = trial.to_point();
        let fy = y.objective(target);
        if fy < fx {
            s = trial;
            x = y;
            fx = fy;
            lambda = (lambda / 3.0).max(1e-15);
        } else {
            lambda *= 4.0;
            if lambda > 1e12 {
                break;
            }
        }
    }
    x
}
