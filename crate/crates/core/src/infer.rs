//! Exact rung-1/2/3 answers by enumerating the product of noise supports.

use itertools::Itertools;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exact::{Accumulator, BitVector, ExactDist, ExactRational};
use crate::scm::{Caps, Intervention, Scm};

/// Calls `visit(u, weight)` once per joint exogenous realization, where
/// `u[v]` is the noise symbol of variable `v`.
pub fn for_each_exogenous(
    scm: &Scm,
    caps: &Caps,
    mut visit: impl FnMut(&[u32], &ExactRational),
) -> Result<()> {
    let points = scm.exogenous_points();
    if points > caps.support as u128 {
        return Err(Error::SupportTooLarge { points, cap: caps.support });
    }
    let mut u = vec![0u32; scm.n()];
    walk(scm, 0, &ExactRational::one(), &mut u, &mut visit);
    Ok(())
}

fn walk(
    scm: &Scm,
    var: usize,
    weight: &ExactRational,
    u: &mut [u32],
    visit: &mut impl FnMut(&[u32], &ExactRational),
) {
    if var == scm.n() {
        visit(u, weight);
        return;
    }
    let noise = &scm.mechanism(var).noise;
    if noise.len() == 1 {
        u[var] = noise.support[0];
        walk(scm, var + 1, weight, u, visit);
        return;
    }
    for (&sym, p) in noise.support.iter().zip(&noise.probs) {
        u[var] = sym;
        walk(scm, var + 1, &(weight * p), u, visit);
    }
}

/// Solves the structural equations for one exogenous realization. Variables
/// in `iv` are held at their forced values; since removing edges never breaks
/// a topological order, the unmutilated order is used.
pub fn evaluate(scm: &Scm, u: &[u32], iv: &Intervention) -> BitVector {
    let mut x = BitVector::zeros(scm.n());
    let mut inputs = Vec::new();
    for &v in scm.topo_order() {
        let value = match iv.get(v) {
            Some(forced) => forced,
            None => {
                let mech = scm.mechanism(v);
                inputs.clear();
                inputs.extend(mech.parents.iter().map(|&p| x.get(p)));
                mech.gate.eval_unchecked(&inputs, u[v])
            }
        };
        x.set(v, value);
    }
    x
}

pub fn observational(scm: &Scm, caps: &Caps) -> Result<ExactDist> {
    let none = Intervention::none();
    let mut acc = Accumulator::new(scm.n());
    for_each_exogenous(scm, caps, |u, w| acc.add(evaluate(scm, u, &none), w.clone()))?;
    acc.finish()
}

pub fn interventional(scm: &Scm, iv: &Intervention, caps: &Caps) -> Result<ExactDist> {
    observational(&scm.apply_do(iv)?, caps)
}

/// Joint law of factual ‖ world under do(X_var=0) ‖ world under do(X_var=1),
/// all three driven by the same exogenous realization (3n bits, factual leftmost).
pub fn counterfactual_triple(scm: &Scm, var: usize, caps: &Caps) -> Result<ExactDist> {
    if var >= scm.n() {
        return Err(Error::BadIntervention { var, n: scm.n() });
    }
    let none = Intervention::none();
    let do0 = Intervention::single(var, false);
    let do1 = Intervention::single(var, true);
    let mut acc = Accumulator::new(3 * scm.n());
    for_each_exogenous(scm, caps, |u, w| {
        let factual = evaluate(scm, u, &none);
        let world0 = evaluate(scm, u, &do0);
        let world1 = evaluate(scm, u, &do1);
        acc.add(BitVector::concat(&[&factual, &world0, &world1]), w.clone());
    })?;
    acc.finish()
}

/// Every hard atomic intervention, ordered by |S|, then S lexicographically,
/// then `x_S` as a bitstring over ascending members of S. Includes S = ∅.
pub fn all_interventions(n: usize) -> impl Iterator<Item = Intervention> {
    (0..=n).flat_map(move |k| {
        (0..n).combinations(k).flat_map(move |vars| {
            (0..1u64 << k).map(move |x| {
                let bits = BitVector::from_index(x, k);
                Intervention::from_pairs(vars.iter().enumerate().map(|(pos, &v)| (v, bits.get(pos))))
            })
        })
    })
}

pub fn int_all(scm: &Scm, caps: &Caps) -> Result<Vec<(Intervention, ExactDist)>> {
    if scm.n() > caps.int_all_n {
        return Err(Error::NTooLarge { n: scm.n(), cap: caps.int_all_n });
    }
    all_interventions(scm.n())
        .map(|iv| {
            let dist = interventional(scm, &iv, caps)?;
            Ok((iv, dist))
        })
        .collect()
}
