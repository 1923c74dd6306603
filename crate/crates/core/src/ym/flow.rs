//! Deterministic gradient descent with Armijo backtracking and vacuum labelling.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Serialize, Serializer};

use super::{flat_residual, gradient, grad_norm, potential, FloatConnection, YmModel};

const STEP0: f64 = 1e-1;
const SHRINK: f64 = 0.5;
const ARMIJO_C1: f64 = 1e-4;
const SNAP: f64 = 0.1;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum VacuumLabel {
    Partition(Vec<usize>),
    Unresolved,
}

impl VacuumLabel {
    pub fn is_resolved(&self) -> bool {
        matches!(self, VacuumLabel::Partition(_))
    }

    pub fn key(&self) -> String {
        match self {
            VacuumLabel::Partition(p) => p.iter().map(usize::to_string).collect::<Vec<_>>().join("+"),
            VacuumLabel::Unresolved => "unresolved".into(),
        }
    }
}

impl Serialize for VacuumLabel {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            VacuumLabel::Partition(p) => p.serialize(s),
            VacuumLabel::Unresolved => s.serialize_str("unresolved"),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowConfig {
    #[serde(rename = "K")]
    pub k: usize,
    pub max_iter: usize,
    pub tol_grad: f64,
    pub tol_flat: f64,
    /// Half-width of the uniform distribution of the initial entries.
    pub init_scale: f64,
}

impl FlowConfig {
    pub fn new(k: usize) -> Self {
        FlowConfig { k, max_iter: 20_000, tol_grad: 1e-9, tol_flat: 1e-6, init_scale: 2.5 }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FlowReport {
    pub seed: u64,
    pub iterations: usize,
    pub final_potential: f64,
    pub grad_norm: f64,
    pub flat_residual: f64,
    pub converged: bool,
    /// Converged to a critical point that is not flat.
    pub saddle: bool,
    pub class_label: VacuumLabel,
    #[serde(skip)]
    pub endpoint: FloatConnection,
}

/// Partition from the spectrum of `sum J_k^2`, `J_k = i A_k / lambda`, snapped to `(d^2 - 1) / 4`.
pub fn classify_vacuum(model: &YmModel, c: &FloatConnection, tol_flat: f64) -> VacuumLabel {
    if flat_residual(model, c) >= tol_flat {
        return VacuumLabel::Unresolved;
    }
    let f = Complex64::new(0.0, 1.0 / model.lambda);
    let q = c.a.iter().fold(DMatrix::<Complex64>::zeros(c.k, c.k), |acc, a| {
        let j = a * f;
        acc + &j * &j
    });
    let q = (&q + q.adjoint()) * Complex64::new(0.5, 0.0);
    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for ev in q.symmetric_eigenvalues().iter() {
        let d = (4.0 * ev + 1.0).max(0.0).sqrt().round() as usize;
        if d == 0 || (ev - (d * d - 1) as f64 / 4.0).abs() > SNAP {
            return VacuumLabel::Unresolved;
        }
        *counts.entry(d).or_default() += 1;
    }
    let mut label = Vec::new();
    for (&d, &m) in counts.iter().rev() {
        if m % d != 0 {
            return VacuumLabel::Unresolved;
        }
        label.extend(std::iter::repeat_n(d, m / d));
    }
    VacuumLabel::Partition(label)
}

/// Descent from the seeded random start; non-convergence is reported, not raised.
pub fn flow(model: &YmModel, cfg: &FlowConfig, seed: u64) -> FlowReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = FloatConnection::random(&mut rng, cfg.k, model.dim, cfg.init_scale);
    c.seed = seed;
    let mut v = potential(model, &c);
    let mut g = gradient(model, &c);
    let mut gn = grad_norm(&g);
    let mut iterations = 0;
    while gn >= cfg.tol_grad && iterations < cfg.max_iter {
        let dir: Vec<_> = g.iter().map(|x| -x).collect();
        let mut t = STEP0;
        let next = loop {
            let trial = c.axpy(t, &dir);
            let vt = potential(model, &trial);
            if vt <= v - ARMIJO_C1 * t * gn * gn {
                break Some((trial, vt));
            }
            t *= SHRINK;
            if t < 1e-16 {
                break None;
            }
        };
        let Some((trial, vt)) = next else { break };
        c = trial;
        v = vt;
        g = gradient(model, &c);
        gn = grad_norm(&g);
        iterations += 1;
    }
    let residual = flat_residual(model, &c);
    let converged = gn < cfg.tol_grad;
    FlowReport {
        seed,
        iterations,
        final_potential: v,
        grad_norm: gn,
        flat_residual: residual,
        converged,
        saddle: converged && residual >= cfg.tol_flat,
        class_label: classify_vacuum(model, &c, cfg.tol_flat),
        endpoint: c,
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct YmCensus {
    pub config: FlowConfig,
    pub runs: Vec<FlowReport>,
    pub census: BTreeMap<String, usize>,
    pub distinct_classes: usize,
}

/// Runs the seeds on all available threads; the report is ordered by seed.
pub fn flow_many(model: &YmModel, cfg: &FlowConfig, seeds: &[u64]) -> YmCensus {
    let threads = std::thread::available_parallelism().map_or(1, |n| n.get()).min(seeds.len().max(1));
    let mut runs: Vec<FlowReport> = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..threads)
            .map(|t| scope.spawn(move || seeds.iter().skip(t).step_by(threads).map(|&s| flow(model, cfg, s)).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().flat_map(|h| h.join().expect("flow thread")).collect()
    });
    let order: BTreeMap<u64, usize> = seeds.iter().enumerate().map(|(i, &s)| (s, i)).collect();
    runs.sort_by_key(|r| order[&r.seed]);
    let mut census = BTreeMap::new();
    for r in &runs {
        *census.entry(r.class_label.key()).or_insert(0) += 1;
    }
    let distinct_classes = census.keys().filter(|k| *k != "unresolved").count();
    YmCensus { config: cfg.clone(), runs, census, distinct_classes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connections::flat_representative;
    use crate::linalg::Scalar;

    fn exact(model: &YmModel, p: &[usize]) -> FloatConnection {
        FloatConnection::from_exact(&flat_representative(p, &Scalar::int(model.lambda as i64))).unwrap()
    }

    #[test]
    fn labels_exact_representatives() {
        let model = YmModel::pauli().unwrap();
        for p in [vec![1], vec![2, 1], vec![3], vec![2, 2], vec![3, 1]] {
            assert_eq!(classify_vacuum(&model, &exact(&model, &p), 1e-6), VacuumLabel::Partition(p));
        }
        assert_eq!(classify_vacuum(&model, &FloatConnection::zero(4, 3), 1e-6), VacuumLabel::Partition(vec![1; 4]));
    }

    #[test]
    fn near_flat_perturbation_keeps_label() {
        let model = YmModel::pauli().unwrap();
        let c = exact(&model, &[3]);
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let noise = FloatConnection::random(&mut rng, 3, 3, 1e-9);
        let p = c.axpy(1.0, &noise.a);
        assert_eq!(classify_vacuum(&model, &p, 1e-6), VacuumLabel::Partition(vec![3]));
        let far = c.axpy(1.0, &FloatConnection::random(&mut rng, 3, 3, 0.5).a);
        assert_eq!(classify_vacuum(&model, &far, 1e-6), VacuumLabel::Unresolved);
    }

    #[test]
    fn k1_flows_to_zero() {
        let model = YmModel::pauli().unwrap();
        let r = flow(&model, &FlowConfig::new(1), 4);
        assert!(r.converged && r.endpoint.a.iter().all(|a| a.norm() < 1e-9));
        assert_eq!(r.class_label, VacuumLabel::Partition(vec![1]));
    }

    #[test]
    fn deterministic() {
        let model = YmModel::pauli().unwrap();
        let cfg = FlowConfig { max_iter: 300, ..FlowConfig::new(2) };
        let (a, b) = (flow(&model, &cfg, 7), flow(&model, &cfg, 7));
        assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
        assert_eq!(a.endpoint, b.endpoint);
    }

    #[test]
    fn label_serialization() {
        assert_eq!(serde_json::to_string(&VacuumLabel::Partition(vec![2, 1])).unwrap(), "[2,1]");
        assert_eq!(serde_json::to_string(&VacuumLabel::Unresolved).unwrap(), "\"unresolved\"");
        assert_eq!(VacuumLabel::Partition(vec![2, 1]).key(), "2+1");
    }
}
