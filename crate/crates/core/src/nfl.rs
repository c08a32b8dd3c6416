//! No-free-lunch experiments for observational learners on the bipartite family.
//!
//! Every `M_G` shares one observational law, so a dataset carries no
//! information about `G`. The harness measures this two ways: an exact mode
//! that averages a learner's (G-independent) output law against all graphs,
//! and a seeded Monte-Carlo mode.
//!
//! Randomness: `ChaCha8Rng`, one stream per (trial, purpose) seeded by
//! `splitmix64(master ^ splitmix64(trial · 2 + purpose))`, so trials are
//! order-independent and data and learner streams never share state.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_ratio, half, BitVector, ExactDist, ExactRational};
use crate::families::{bipartite_a, bipartite_b, build_bipartite_scm, enumerate_graphs, BipartiteGraph};
use crate::infer::{interventional, observational};
use crate::oracle::{compute_oracle, AnswerOracle, CanonicalBytes, ComponentKey, OracleKind};
use crate::scm::{Caps, Intervention, Scm};

pub const PRNG_ID: &str = "chacha8/splitmix64-stream-seeds";

/// Most exact-mode dataset laws are enumerated through count vectors; this
/// bounds how many.
const MAX_COUNT_VECTORS: u64 = 200_000;

pub fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of stream `purpose` (0 = data, 1 = learner) for `trial`.
pub fn trial_seed(master: u64, trial: u64, purpose: u64) -> u64 {
    splitmix64(master ^ splitmix64(trial.wrapping_mul(2).wrapping_add(purpose)))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    pub n: usize,
    pub rows: Vec<BitVector>,
    pub seed: u64,
    pub source: String,
}

/// Inverse-CDF sampler with exact integer thresholds `⌈F(x)·2^64⌉`.
struct Sampler {
    outcomes: Vec<BitVector>,
    thresholds: Vec<u128>,
}

impl Sampler {
    fn new(dist: &ExactDist) -> Self {
        let scale: BigInt = BigInt::one() << 64u32;
        let mut cum = ExactRational::zero();
        let mut outcomes = Vec::new();
        let mut thresholds = Vec::new();
        for (x, w) in dist.iter() {
            cum += w;
            let t = (&cum * BigRational::from_integer(scale.clone())).ceil().to_integer();
            outcomes.push(x.clone());
            thresholds.push(t.to_u128().expect("threshold at most 2^64"));
        }
        Sampler { outcomes, thresholds }
    }

    fn draw(&self, rng: &mut impl Rng) -> BitVector {
        let r = rng.next_u64() as u128;
        let k = self.thresholds.partition_point(|&t| t <= r);
        self.outcomes[k].clone()
    }
}

fn sample_from(dist: &ExactDist, count: usize, rng: &mut impl Rng) -> Vec<BitVector> {
    let sampler = Sampler::new(dist);
    (0..count).map(|_| sampler.draw(rng)).collect()
}

/// `count` i.i.d. rows from the observational law of `scm`. Identical law,
/// count and seed give identical rows.
pub fn sample_obs(scm: &Scm, count: usize, seed: u64, caps: &Caps) -> Result<Dataset> {
    let obs = observational(scm, caps)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(Dataset { n: scm.n(), rows: sample_from(&obs, count, &mut rng), seed, source: "observational".into() })
}

/// What a learner outputs: a graph (scored through its oracle) or a raw INT1 oracle.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Graph(BipartiteGraph),
    Oracle(AnswerOracle),
}

/// A learner sees only the dataset and the layer size `m`; the hidden graph
/// is not reachable from its inputs.
pub trait ObservationalLearner {
    fn id(&self) -> &'static str;

    fn predict(&self, data: &Dataset, m: usize, rng: &mut ChaCha8Rng) -> Result<Prediction>;

    /// Exact law of the prediction when the dataset is `n_samples` i.i.d.
    /// rows from `obs`, if the learner can describe it.
    fn output_law(&self, obs: &ExactDist, n_samples: usize, m: usize) -> Result<Vec<(ExactRational, Prediction)>>;
}

/// Guesses a uniformly random graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct UniformGuess;

/// Always predicts the empty graph.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConstantEmpty;

/// Fits per-variable marginals and predicts the product model's INT1 oracle.
#[derive(Debug, Clone, Copy, Default)]
pub struct EmpiricalIndependent;

impl ObservationalLearner for UniformGuess {
    fn id(&self) -> &'static str {
        "uniform-guess"
    }

    fn predict(&self, _data: &Dataset, m: usize, rng: &mut ChaCha8Rng) -> Result<Prediction> {
        let cells = m * m;
        let mask = if cells == 0 { 0 } else { rng.random::<u64>() >> (64 - cells) };
        Ok(Prediction::Graph(BipartiteGraph::from_mask(m, mask)))
    }

    fn output_law(&self, _obs: &ExactDist, _n: usize, m: usize) -> Result<Vec<(ExactRational, Prediction)>> {
        let count = 1u64 << (m * m);
        let w = BigRational::new(BigInt::one(), BigInt::from(count));
        Ok((0..count).map(|mask| (w.clone(), Prediction::Graph(BipartiteGraph::from_mask(m, mask)))).collect())
    }
}

impl ObservationalLearner for ConstantEmpty {
    fn id(&self) -> &'static str {
        "constant-empty"
    }

    fn predict(&self, _data: &Dataset, m: usize, _rng: &mut ChaCha8Rng) -> Result<Prediction> {
        Ok(Prediction::Graph(BipartiteGraph::empty(m)))
    }

    fn output_law(&self, _obs: &ExactDist, _n: usize, m: usize) -> Result<Vec<(ExactRational, Prediction)>> {
        Ok(vec![(ExactRational::one(), Prediction::Graph(BipartiteGraph::empty(m)))])
    }
}

impl EmpiricalIndependent {
    fn fit(&self, n: usize, rows: &[&BitVector]) -> Vec<ExactRational> {
        (0..n)
            .map(|v| {
                if rows.is_empty() {
                    half()
                } else {
                    let ones = rows.iter().filter(|r| r.get(v)).count();
                    BigRational::new(BigInt::from(ones), BigInt::from(rows.len()))
                }
            })
            .collect()
    }

    fn product_oracle(&self, marginals: &[ExactRational]) -> Result<AnswerOracle> {
        let n = marginals.len();
        let product = |fixed: Option<(usize, bool)>| -> Result<ExactDist> {
            let probs: Vec<ExactRational> = (0..n)
                .map(|v| match fixed {
                    Some((f, b)) if f == v => ExactRational::from_integer(BigInt::from(u8::from(b))),
                    _ => marginals[v].clone(),
                })
                .collect();
            let outcomes = (0..1u64 << n).map(|code| {
                let x = BitVector::from_index(code, n);
                let w = (0..n).fold(ExactRational::one(), |acc, v| {
                    acc * if x.get(v) { probs[v].clone() } else { ExactRational::one() - &probs[v] }
                });
                (x, w)
            });
            ExactDist::new(n, outcomes)
        };
        let mut components = vec![(ComponentKey::Obs, product(None)?)];
        for var in 0..n {
            for value in [false, true] {
                components.push((ComponentKey::Do { var, value }, product(Some((var, value)))?));
            }
        }
        AnswerOracle::from_components(OracleKind::Int1, n, components)
    }
}

impl ObservationalLearner for EmpiricalIndependent {
    fn id(&self) -> &'static str {
        "empirical-independent"
    }

    fn predict(&self, data: &Dataset, _m: usize, _rng: &mut ChaCha8Rng) -> Result<Prediction> {
        let rows: Vec<&BitVector> = data.rows.iter().collect();
        Ok(Prediction::Oracle(self.product_oracle(&self.fit(data.n, &rows))?))
    }

    fn output_law(&self, obs: &ExactDist, n_samples: usize, _m: usize) -> Result<Vec<(ExactRational, Prediction)>> {
        // The fit depends only on how often each support point occurs.
        count_vector_law(obs, n_samples)?
            .into_iter()
            .map(|(w, rows)| {
                let refs: Vec<&BitVector> = rows.iter().collect();
                Ok((w, Prediction::Oracle(self.product_oracle(&self.fit(obs.n_bits(), &refs))?)))
            })
            .collect()
    }
}

fn binomial_u64(n: u64, k: u64) -> u128 {
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul((n - i) as u128) / (i + 1) as u128)
}

/// Law of the multiset of `n_samples` i.i.d. draws from `dist`, as
/// (probability, representative rows) pairs, one per count vector.
pub fn count_vector_law(dist: &ExactDist, n_samples: usize) -> Result<Vec<(ExactRational, Vec<BitVector>)>> {
    let support: Vec<(&BitVector, &ExactRational)> = dist.iter().collect();
    let s = support.len() as u64;
    let vectors = binomial_u64(n_samples as u64 + s - 1, s - 1);
    if vectors > MAX_COUNT_VECTORS as u128 {
        return Err(Error::BadRange(format!("{vectors} count vectors exceed exact-mode limit")));
    }
    let mut out = Vec::new();
    let mut counts = vec![0usize; support.len()];
    fn recurse(
        k: usize,
        left: usize,
        counts: &mut Vec<usize>,
        support: &[(&BitVector, &ExactRational)],
        n_samples: usize,
        out: &mut Vec<(ExactRational, Vec<BitVector>)>,
    ) {
        if k + 1 == support.len() {
            counts[k] = left;
            // multinomial(n; counts) · Π p_k^c_k
            let mut coeff = BigInt::one();
            let mut remaining = n_samples;
            for &c in counts.iter() {
                coeff *= num_integer::binomial(BigInt::from(remaining), BigInt::from(c));
                remaining -= c;
            }
            let mut w = BigRational::from_integer(coeff);
            for (c, (_, p)) in counts.iter().zip(support) {
                w *= num_traits::pow((*p).clone(), *c);
            }
            let rows = counts.iter().zip(support).flat_map(|(&c, (x, _))| std::iter::repeat_n((*x).clone(), c)).collect();
            out.push((w, rows));
            return;
        }
        for c in 0..=left {
            counts[k] = c;
            recurse(k + 1, left - c, counts, support, n_samples, out);
        }
    }
    recurse(0, n_samples, &mut counts, &support, n_samples, &mut out);
    Ok(out)
}

pub fn builtin_learner(id: &str) -> Option<Box<dyn ObservationalLearner>> {
    match id {
        "uniform-guess" | "UNIFORM_GUESS" => Some(Box::new(UniformGuess)),
        "constant-empty" | "CONSTANT_EMPTY" => Some(Box::new(ConstantEmpty)),
        "empirical-independent" | "EMPIRICAL_INDEPENDENT" => Some(Box::new(EmpiricalIndependent)),
        _ => None,
    }
}

pub fn builtin_learners() -> Vec<Box<dyn ObservationalLearner>> {
    vec![Box::new(UniformGuess), Box::new(ConstantEmpty), Box::new(EmpiricalIndependent)]
}

/// True INT1 bytes and observational laws of every graph at layer size `m`, indexed by mask.
struct BipartiteTable {
    m: usize,
    int1: Vec<CanonicalBytes>,
    obs: Vec<ExactDist>,
    multiplicity: HashMap<CanonicalBytes, u64>,
}

impl BipartiteTable {
    fn new(m: usize, caps: &Caps) -> Result<Self> {
        let mut int1 = Vec::new();
        let mut obs = Vec::new();
        let mut multiplicity = HashMap::new();
        for g in enumerate_graphs(m, caps)? {
            let scm = build_bipartite_scm(&g);
            let bytes = compute_oracle(&scm, OracleKind::Int1, caps)?.serialize();
            *multiplicity.entry(bytes.clone()).or_insert(0) += 1;
            int1.push(bytes);
            obs.push(observational(&scm, caps)?);
        }
        Ok(BipartiteTable { m, int1, obs, multiplicity })
    }

    fn bytes_of(&self, prediction: &Prediction) -> CanonicalBytes {
        match prediction {
            Prediction::Graph(g) if g.m() == self.m => self.int1[g.mask() as usize].clone(),
            Prediction::Graph(g) => compute_oracle(&build_bipartite_scm(g), OracleKind::Int1, &Caps::default())
                .map(|o| o.serialize())
                .unwrap_or_else(|_| self.int1[0].clone()),
            Prediction::Oracle(o) => o.serialize(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Exact,
    MonteCarlo,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NflReport {
    pub m: usize,
    pub n_samples: usize,
    pub mode: Mode,
    pub trials: u64,
    pub learner_id: String,
    pub successes: Option<u64>,
    /// Exact rational in exact mode, `successes/trials` in Monte-Carlo mode.
    pub success_rate: String,
    pub success_rate_f64: f64,
    /// Binomial standard error of the Monte-Carlo rate.
    pub standard_error: Option<f64>,
    /// `2^(−m²)`, the bound for all learners.
    pub bound: String,
    /// Whether the measured rate for this learner is within the bound.
    pub within_bound: bool,
    pub seed: u64,
    pub prng: &'static str,
}

fn bound(m: usize) -> ExactRational {
    BigRational::new(BigInt::one(), BigInt::one() << (m * m))
}

/// Exact success probability: the dataset law is the same for every graph,
/// so the learner's output law is averaged against the uniform prior.
pub fn nfl_exact(m: usize, n_samples: usize, learner: &dyn ObservationalLearner, caps: &Caps) -> Result<NflReport> {
    let table = BipartiteTable::new(m, caps)?;
    let obs = &table.obs[0];
    let graphs = BigInt::from(table.int1.len());
    let mut rate = ExactRational::zero();
    for (p, prediction) in learner.output_law(obs, n_samples, m)? {
        let hits = table.multiplicity.get(&table.bytes_of(&prediction)).copied().unwrap_or(0);
        rate += p * BigRational::new(BigInt::from(hits), graphs.clone());
    }
    let b = bound(m);
    Ok(NflReport {
        m,
        n_samples,
        mode: Mode::Exact,
        trials: 0,
        learner_id: learner.id().into(),
        successes: None,
        success_rate_f64: crate::exact::to_f64(&rate),
        within_bound: rate <= b,
        success_rate: fmt_ratio(&rate),
        standard_error: None,
        bound: fmt_ratio(&b),
        seed: 0,
        prng: PRNG_ID,
    })
}

/// Seeded Monte-Carlo estimate: per trial draw G uniformly, draw the
/// dataset from `M_G`, and score the learner's prediction against `INT1(M_G)`.
pub fn nfl_monte_carlo(
    m: usize,
    n_samples: usize,
    trials: u64,
    learner: &dyn ObservationalLearner,
    seed: u64,
    caps: &Caps,
) -> Result<NflReport> {
    let table = BipartiteTable::new(m, caps)?;
    let samplers: Vec<Sampler> = table.obs.iter().map(Sampler::new).collect();
    let cells = m * m;
    let mut successes = 0u64;
    for t in 0..trials {
        let mut data_rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t, 0));
        let mask = if cells == 0 { 0 } else { data_rng.random::<u64>() >> (64 - cells) };
        let sampler = &samplers[mask as usize];
        let data = Dataset {
            n: 2 * m + 1,
            rows: (0..n_samples).map(|_| sampler.draw(&mut data_rng)).collect(),
            seed: trial_seed(seed, t, 0),
            source: "observational".into(),
        };
        let mut learner_rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t, 1));
        let prediction = learner.predict(&data, m, &mut learner_rng)?;
        if table.bytes_of(&prediction) == table.int1[mask as usize] {
            successes += 1;
        }
    }
    let rate = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
    let b = bound(m);
    let b_f = crate::exact::to_f64(&b);
    let se = if trials == 0 { 0.0 } else { (b_f * (1.0 - b_f) / trials as f64).sqrt() };
    Ok(NflReport {
        m,
        n_samples,
        mode: Mode::MonteCarlo,
        trials,
        learner_id: learner.id().into(),
        successes: Some(successes),
        success_rate: format!("{successes}/{trials}"),
        success_rate_f64: rate,
        standard_error: Some(se),
        bound: fmt_ratio(&b),
        within_bound: rate <= b_f + 3.0 * se,
        seed,
        prng: PRNG_ID,
    })
}

pub fn run_nfl(
    m: usize,
    n_samples: usize,
    trials: u64,
    learner: &dyn ObservationalLearner,
    seed: u64,
    mode: Mode,
    caps: &Caps,
) -> Result<NflReport> {
    match mode {
        Mode::Exact => nfl_exact(m, n_samples, learner, caps).map(|r| NflReport { seed, ..r }),
        Mode::MonteCarlo => nfl_monte_carlo(m, n_samples, trials, learner, seed, caps),
    }
}

/// Predicts `p_{i,j} = P(X_{b_j} = 0 | do(X_{a_i} = 0))` from observational data.
pub trait QueryPredictor {
    fn id(&self) -> String;

    fn predict(&self, data: &Dataset, m: usize, i: usize, j: usize) -> ExactRational;

    fn output_law(&self, obs: &ExactDist, n_samples: usize, m: usize, i: usize, j: usize) -> Result<Vec<(ExactRational, ExactRational)>> {
        count_vector_law(obs, n_samples)?
            .into_iter()
            .map(|(w, rows)| {
                let data = Dataset { n: obs.n_bits(), rows, seed: 0, source: "law".into() };
                Ok((w, self.predict(&data, m, i, j)))
            })
            .collect()
    }
}

/// Ignores the data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstantPredictor(pub ExactRational);

/// Empirical frequency of `X_{b_j} = 0`, i.e. treats the observational marginal as the answer.
#[derive(Debug, Clone, Copy, Default)]
pub struct ObservationalMarginal;

impl QueryPredictor for ConstantPredictor {
    fn id(&self) -> String {
        format!("constant-{}", fmt_ratio(&self.0))
    }

    fn predict(&self, _data: &Dataset, _m: usize, _i: usize, _j: usize) -> ExactRational {
        self.0.clone()
    }

    fn output_law(&self, _obs: &ExactDist, _n: usize, _m: usize, _i: usize, _j: usize) -> Result<Vec<(ExactRational, ExactRational)>> {
        Ok(vec![(ExactRational::one(), self.0.clone())])
    }
}

impl QueryPredictor for ObservationalMarginal {
    fn id(&self) -> String {
        "observational-marginal".into()
    }

    fn predict(&self, data: &Dataset, m: usize, _i: usize, j: usize) -> ExactRational {
        if data.rows.is_empty() {
            return half();
        }
        let b = bipartite_b(m, j);
        let zeros = data.rows.iter().filter(|r| !r.get(b)).count();
        BigRational::new(BigInt::from(zeros), BigInt::from(data.rows.len()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PerQueryReport {
    pub m: usize,
    pub predictor_id: String,
    pub mode: Mode,
    /// Exact expected absolute error (exact mode).
    pub expected_error: Option<String>,
    pub expected_error_f64: f64,
    pub standard_error: Option<f64>,
    pub trials: u64,
    pub seed: u64,
    pub at_least_quarter: bool,
}

/// `E|p̂ − p|` against the two-point mixture `p ∈ {1/2, 1}` with equal weight.
pub fn closed_form_error(prediction_law: &[(ExactRational, ExactRational)]) -> ExactRational {
    let one = ExactRational::one();
    prediction_law.iter().fold(ExactRational::zero(), |acc, (w, a)| {
        acc + w * half() * ((a - &one).abs() + (a - half()).abs())
    })
}

/// Exact `E|p̂_{i,j} − p_{i,j}(G)|` over uniform `G` and uniform `(i, j)`.
///
/// Within the enumeration cap every `p_{i,j}(G)` is computed from the
/// interventional distribution of `M_G`; beyond it the edge-indicator
/// dichotomy gives the closed form.
pub fn per_query_error_exact(m: usize, predictor: &dyn QueryPredictor, n_samples: usize, caps: &Caps) -> Result<PerQueryReport> {
    if m == 0 {
        return Err(Error::BadRange("m must be positive".into()));
    }
    let obs = observational(&build_bipartite_scm(&BipartiteGraph::empty(m)), caps)?;
    let mut total = ExactRational::zero();
    if m <= caps.graph_m {
        let graphs: Vec<Scm> = enumerate_graphs(m, caps)?.map(|g| build_bipartite_scm(&g)).collect();
        let weight = BigRational::new(BigInt::one(), BigInt::from(graphs.len() * m * m));
        for i in 0..m {
            let cut: Vec<ExactDist> = graphs
                .iter()
                .map(|scm| interventional(scm, &Intervention::single(bipartite_a(i), false), caps))
                .collect::<Result<_>>()?;
            for j in 0..m {
                let law = predictor.output_law(&obs, n_samples, m, i, j)?;
                for dist in &cut {
                    let p = dist.marginal_prob(bipartite_b(m, j), false);
                    for (w, a) in &law {
                        total += &weight * w * (a - &p).abs();
                    }
                }
            }
        }
    } else {
        let weight = BigRational::new(BigInt::one(), BigInt::from(m * m));
        for i in 0..m {
            for j in 0..m {
                total += &weight * closed_form_error(&predictor.output_law(&obs, n_samples, m, i, j)?);
            }
        }
    }
    Ok(PerQueryReport {
        m,
        predictor_id: predictor.id(),
        mode: Mode::Exact,
        expected_error_f64: crate::exact::to_f64(&total),
        at_least_quarter: total >= BigRational::new(BigInt::one(), BigInt::from(4)),
        expected_error: Some(fmt_ratio(&total)),
        standard_error: None,
        trials: 0,
        seed: 0,
    })
}

pub fn per_query_error_monte_carlo(
    m: usize,
    predictor: &dyn QueryPredictor,
    n_samples: usize,
    trials: u64,
    seed: u64,
    caps: &Caps,
) -> Result<PerQueryReport> {
    let cells = m * m;
    if m == 0 || cells >= 64 {
        return Err(Error::BadRange(format!("m={m} unsupported")));
    }
    let obs = observational(&build_bipartite_scm(&BipartiteGraph::empty(m)), caps)?;
    let sampler = Sampler::new(&obs);
    let (mut sum, mut sum_sq) = (0.0f64, 0.0f64);
    for t in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(trial_seed(seed, t, 0));
        let g = BipartiteGraph::from_mask(m, rng.random::<u64>() >> (64 - cells));
        let (i, j) = (rng.random_range(0..m), rng.random_range(0..m));
        let data = Dataset {
            n: 2 * m + 1,
            rows: (0..n_samples).map(|_| sampler.draw(&mut rng)).collect(),
            seed: trial_seed(seed, t, 0),
            source: "observational".into(),
        };
        let truth = interventional(&build_bipartite_scm(&g), &Intervention::single(bipartite_a(i), false), caps)?
            .marginal_prob(bipartite_b(m, j), false);
        let err = crate::exact::to_f64(&(predictor.predict(&data, m, i, j) - truth).abs());
        sum += err;
        sum_sq += err * err;
    }
    let t = trials.max(1) as f64;
    let mean = sum / t;
    let var = (sum_sq / t - mean * mean).max(0.0);
    let se = (var / t).sqrt();
    Ok(PerQueryReport {
        m,
        predictor_id: predictor.id(),
        mode: Mode::MonteCarlo,
        expected_error: None,
        expected_error_f64: mean,
        standard_error: Some(se),
        trials,
        seed,
        at_least_quarter: mean + 3.0 * se >= 0.25,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MutualInformationReport {
    pub m: usize,
    pub graphs: usize,
    /// Every graph has byte-identical observational serialization.
    pub identical_laws: bool,
}

pub fn mutual_information_check(m: usize, caps: &Caps) -> Result<MutualInformationReport> {
    let mut first: Option<CanonicalBytes> = None;
    let mut identical = true;
    let mut graphs = 0;
    for g in enumerate_graphs(m, caps)? {
        let bytes = compute_oracle(&build_bipartite_scm(&g), OracleKind::Obs, caps)?.serialize();
        graphs += 1;
        match &first {
            None => first = Some(bytes),
            Some(f) => identical &= *f == bytes,
        }
    }
    Ok(MutualInformationReport { m, graphs, identical_laws: identical })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::ratio;

    fn caps() -> Caps {
        Caps::default()
    }

    #[test]
    fn samples_live_on_two_points() {
        let scm = build_bipartite_scm(&BipartiteGraph::from_mask(2, 0b1011));
        let d = sample_obs(&scm, 200, 7, &caps()).unwrap();
        assert_eq!(d.rows.len(), 200);
        assert!(d.rows.iter().all(|r| r.bits().iter().all(|&b| b == r.get(0))));
        assert!(d.rows.iter().any(|r| r.get(0)) && d.rows.iter().any(|r| !r.get(0)));
        assert!(sample_obs(&scm, 0, 7, &caps()).unwrap().rows.is_empty());
    }

    #[test]
    fn dataset_is_independent_of_graph() {
        let a = sample_obs(&build_bipartite_scm(&BipartiteGraph::empty(2)), 50, 42, &caps()).unwrap();
        let b = sample_obs(&build_bipartite_scm(&BipartiteGraph::full(2)), 50, 42, &caps()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn sampler_thresholds_are_exact() {
        let d = ExactDist::new(1, [("0".parse().unwrap(), ratio(1, 3)), ("1".parse().unwrap(), ratio(2, 3))]).unwrap();
        let s = Sampler::new(&d);
        assert_eq!(*s.thresholds.last().unwrap(), 1u128 << 64);
        assert_eq!(s.thresholds[0], (1u128 << 64).div_ceil(3));
    }

    #[test]
    fn exact_uniform_guess_m2() {
        let r = nfl_exact(2, 10, &UniformGuess, &caps()).unwrap();
        assert_eq!(r.success_rate, "1/16");
        assert!(r.within_bound);
    }

    #[test]
    fn exact_constant_empty_m1() {
        let r = nfl_exact(1, 10, &ConstantEmpty, &caps()).unwrap();
        assert_eq!(r.success_rate, "1/2");
    }

    #[test]
    fn exact_empirical_independent_never_wins() {
        let r = nfl_exact(1, 6, &EmpiricalIndependent, &caps()).unwrap();
        assert_eq!(r.success_rate, "0/1");
    }

    #[test]
    fn count_vector_law_sums_to_one() {
        let d = ExactDist::uniform(2);
        let law = count_vector_law(&d, 5).unwrap();
        assert_eq!(law.len(), 56);
        assert_eq!(law.iter().fold(ExactRational::zero(), |s, (w, _)| s + w), ExactRational::one());
        assert!(count_vector_law(&ExactDist::uniform(6), 100).is_err());
    }

    #[test]
    fn constant_predictor_errors() {
        for (a, want) in [(ratio(3, 4), "1/4"), (ratio(1, 1), "1/4"), (ratio(0, 1), "3/4")] {
            let r = per_query_error_exact(2, &ConstantPredictor(a), 0, &caps()).unwrap();
            assert_eq!(r.expected_error.as_deref(), Some(want));
            assert!(r.at_least_quarter);
        }
    }

    #[test]
    fn enumerated_and_closed_form_agree() {
        let a = ConstantPredictor(ratio(5, 8));
        let enumerated = per_query_error_exact(2, &a, 0, &caps()).unwrap();
        let closed = per_query_error_exact(2, &a, 0, &Caps { graph_m: 1, ..caps() }).unwrap();
        assert_eq!(enumerated.expected_error, closed.expected_error);
    }

    #[test]
    fn observational_marginal_is_no_better() {
        let r = per_query_error_exact(1, &ObservationalMarginal, 8, &caps()).unwrap();
        assert!(r.at_least_quarter, "{r:?}");
    }

    #[test]
    fn monte_carlo_reproducible() {
        let a = nfl_monte_carlo(2, 5, 500, &UniformGuess, 9, &caps()).unwrap();
        let b = nfl_monte_carlo(2, 5, 500, &UniformGuess, 9, &caps()).unwrap();
        assert_eq!(a, b);
        let c = per_query_error_monte_carlo(2, &ConstantPredictor(ratio(3, 4)), 5, 400, 3, &caps()).unwrap();
        assert!((c.expected_error_f64 - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_small() {
        for m in 1..=2 {
            assert!(mutual_information_check(m, &caps()).unwrap().identical_laws);
        }
    }

    #[test]
    fn learner_output_ignores_hidden_graph() {
        // Same seed, two different hidden graphs: identical data, identical predictions.
        let predict = |g: BipartiteGraph| {
            let data = sample_obs(&build_bipartite_scm(&g), 30, 11, &caps()).unwrap();
            builtin_learners()
                .iter()
                .map(|l| {
                    let mut rng = ChaCha8Rng::seed_from_u64(5);
                    l.predict(&data, 2, &mut rng).unwrap()
                })
                .collect::<Vec<_>>()
        };
        assert_eq!(predict(BipartiteGraph::from_mask(2, 3)), predict(BipartiteGraph::from_mask(2, 12)));
    }
}
