//! Answer oracles (Obs, Int1, CF1, IntAll), their canonical text encoding,
//! total variation and the interventional metric `d_Int`.
//!
//! Canonical grammar:
//!
//! ```text
//! INT1 n=2
//! #obs
//! 00=1/2
//! 11=1/2
//! #do i=0 b=0
//! 00=1/1
//! ...
//! ```
//!
//! Component keys are `obs`, `do i=<i> b=<b>`, `cf i=<i>` and
//! `do S=<comma list> x=<bits>`. Entries are sorted by bitstring with `X_1`
//! leftmost; every line ends in LF.

use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::exact::{fmt_ratio, parse_ratio, BitVector, ExactDist, ExactRational};
use crate::infer::{all_interventions, counterfactual_triple, int_all, interventional, observational};
use crate::scm::{Caps, Intervention, Scm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum OracleKind {
    Obs,
    Int1,
    Cf1,
    IntAll,
}

impl OracleKind {
    pub const ALL: [OracleKind; 4] = [OracleKind::Obs, OracleKind::Int1, OracleKind::Cf1, OracleKind::IntAll];

    pub fn name(self) -> &'static str {
        match self {
            OracleKind::Obs => "OBS",
            OracleKind::Int1 => "INT1",
            OracleKind::Cf1 => "CF1",
            OracleKind::IntAll => "INT_ALL",
        }
    }

    /// Component keys in canonical order for an SCM on `n` variables.
    pub fn component_keys(self, n: usize) -> Vec<ComponentKey> {
        match self {
            OracleKind::Obs => vec![ComponentKey::Obs],
            OracleKind::Int1 => std::iter::once(ComponentKey::Obs)
                .chain((0..n).flat_map(|var| [false, true].map(|value| ComponentKey::Do { var, value })))
                .collect(),
            OracleKind::Cf1 => (0..n).map(|var| ComponentKey::Cf { var }).collect(),
            OracleKind::IntAll => all_interventions(n).map(ComponentKey::DoSet).collect(),
        }
    }
}

impl fmt::Display for OracleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for OracleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.to_ascii_uppercase().replace('-', "_");
        OracleKind::ALL
            .into_iter()
            .find(|k| k.name() == upper)
            .ok_or_else(|| Error::Parse(format!("unknown oracle kind {s:?}")))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ComponentKey {
    Obs,
    Do { var: usize, value: bool },
    Cf { var: usize },
    DoSet(Intervention),
}

impl fmt::Display for ComponentKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKey::Obs => f.write_str("obs"),
            ComponentKey::Do { var, value } => write!(f, "do i={var} b={}", u8::from(*value)),
            ComponentKey::Cf { var } => write!(f, "cf i={var}"),
            ComponentKey::DoSet(iv) => write!(f, "do {}", iv.key()),
        }
    }
}

/// Canonical serialization of an oracle. Equal bytes ⇔ equal oracles of the same kind.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalBytes(Vec<u8>);

impl CanonicalBytes {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.0).expect("canonical bytes are ASCII")
    }

    pub fn into_bytes(self) -> Vec<u8> {
        self.0
    }

    /// Hex SHA-256, used to label equality classes in reports.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        Sha256::digest(&self.0).iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AnswerOracle {
    kind: OracleKind,
    n: usize,
    components: Vec<(ComponentKey, ExactDist)>,
}

pub fn compute_oracle(scm: &Scm, kind: OracleKind, caps: &Caps) -> Result<AnswerOracle> {
    let n = scm.n();
    let components = match kind {
        OracleKind::Obs => vec![(ComponentKey::Obs, observational(scm, caps)?)],
        OracleKind::Int1 => {
            let mut out = vec![(ComponentKey::Obs, observational(scm, caps)?)];
            for var in 0..n {
                for value in [false, true] {
                    let dist = interventional(scm, &Intervention::single(var, value), caps)?;
                    out.push((ComponentKey::Do { var, value }, dist));
                }
            }
            out
        }
        OracleKind::Cf1 => (0..n)
            .map(|var| Ok((ComponentKey::Cf { var }, counterfactual_triple(scm, var, caps)?)))
            .collect::<Result<_>>()?,
        OracleKind::IntAll => int_all(scm, caps)?.into_iter().map(|(iv, d)| (ComponentKey::DoSet(iv), d)).collect(),
    };
    Ok(AnswerOracle { kind, n, components })
}

impl AnswerOracle {
    pub fn kind(&self) -> OracleKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[(ComponentKey, ExactDist)] {
        &self.components
    }

    pub fn component(&self, key: &ComponentKey) -> Option<&ExactDist> {
        self.components.iter().find(|(k, _)| k == key).map(|(_, d)| d)
    }

    /// The observational component (present in OBS, INT1 and, as `S = ∅`, INT_ALL).
    pub fn obs(&self) -> Option<&ExactDist> {
        match self.kind {
            OracleKind::IntAll => self.component(&ComponentKey::DoSet(Intervention::none())),
            _ => self.component(&ComponentKey::Obs),
        }
    }

    pub fn do_component(&self, var: usize, value: bool) -> Option<&ExactDist> {
        self.component(&ComponentKey::Do { var, value })
    }

    pub fn cf_component(&self, var: usize) -> Option<&ExactDist> {
        self.component(&ComponentKey::Cf { var })
    }

    /// Assembles an oracle from parts, checking shape: keys in canonical
    /// order and component widths matching `n`.
    pub fn from_components(kind: OracleKind, n: usize, components: Vec<(ComponentKey, ExactDist)>) -> Result<Self> {
        let expected = kind.component_keys(n);
        if expected.len() != components.len() {
            return Err(Error::Parse(format!(
                "{kind} n={n} needs {} components, found {}",
                expected.len(),
                components.len()
            )));
        }
        let width = if kind == OracleKind::Cf1 { 3 * n } else { n };
        for (want, (key, dist)) in expected.iter().zip(&components) {
            if want != key {
                return Err(Error::Parse(format!("expected component {want}, found {key}")));
            }
            if dist.n_bits() != width {
                return Err(Error::LengthMismatch { left: dist.n_bits(), right: width });
            }
        }
        Ok(AnswerOracle { kind, n, components })
    }

    pub fn serialize(&self) -> CanonicalBytes {
        let mut out = format!("{} n={}\n", self.kind, self.n);
        for (key, dist) in &self.components {
            out.push('#');
            out.push_str(&key.to_string());
            out.push('\n');
            for (x, w) in dist.iter() {
                out.push_str(&format!("{x}={}\n", fmt_ratio(w)));
            }
        }
        CanonicalBytes(out.into_bytes())
    }

    /// Parses canonical bytes. Input that is well-formed but not canonical
    /// (unsorted entries, non-reduced fractions, CRLF) is rejected.
    pub fn parse(bytes: &[u8]) -> Result<AnswerOracle> {
        let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
        let mut lines = text.split_terminator('\n');
        let header = lines.next().ok_or_else(|| Error::Parse("empty oracle".into()))?;
        let (kind, n) = header
            .split_once(" n=")
            .ok_or_else(|| Error::Parse(format!("bad header {header:?}")))?;
        let kind: OracleKind = kind.parse()?;
        let n: usize = n.parse().map_err(|_| Error::Parse(format!("bad n in {header:?}")))?;
        let width = if kind == OracleKind::Cf1 { 3 * n } else { n };

        let mut components = Vec::new();
        let mut current: Option<(ComponentKey, Vec<(BitVector, ExactRational)>)> = None;
        let finish = |(key, entries): (ComponentKey, Vec<(BitVector, ExactRational)>)| -> Result<_> {
            Ok((key, ExactDist::new(width, entries)?))
        };
        for line in lines {
            if let Some(key) = line.strip_prefix('#') {
                if let Some(done) = current.take() {
                    components.push(finish(done)?);
                }
                current = Some((parse_key(key)?, Vec::new()));
            } else {
                let (bits, w) =
                    line.split_once('=').ok_or_else(|| Error::Parse(format!("bad entry line {line:?}")))?;
                let entry = (bits.parse()?, parse_ratio(w)?);
                if !entry.1.is_positive() {
                    return Err(Error::Parse(format!("non-positive mass in {line:?}")));
                }
                current
                    .as_mut()
                    .ok_or_else(|| Error::Parse("entry before first component header".into()))?
                    .1
                    .push(entry);
            }
        }
        if let Some(done) = current.take() {
            components.push(finish(done)?);
        }
        let oracle = AnswerOracle::from_components(kind, n, components)?;
        if oracle.serialize().as_bytes() != bytes {
            return Err(Error::Parse("input is not in canonical form".into()));
        }
        Ok(oracle)
    }
}

fn parse_key(key: &str) -> Result<ComponentKey> {
    let bad = || Error::Parse(format!("bad component key {key:?}"));
    let num = |s: &str| s.parse::<usize>().map_err(|_| bad());
    if key == "obs" {
        return Ok(ComponentKey::Obs);
    }
    if let Some(rest) = key.strip_prefix("cf i=") {
        return Ok(ComponentKey::Cf { var: num(rest)? });
    }
    if let Some(rest) = key.strip_prefix("do i=") {
        let (var, value) = rest.split_once(" b=").ok_or_else(bad)?;
        let value = match value {
            "0" => false,
            "1" => true,
            _ => return Err(bad()),
        };
        return Ok(ComponentKey::Do { var: num(var)?, value });
    }
    if let Some(rest) = key.strip_prefix("do S=") {
        let (vars, bits) = rest.split_once(" x=").ok_or_else(bad)?;
        let vars: Vec<usize> =
            if vars.is_empty() { Vec::new() } else { vars.split(',').map(num).collect::<Result<_>>()? };
        let bits: BitVector = bits.parse()?;
        if bits.len() != vars.len() {
            return Err(bad());
        }
        return Ok(ComponentKey::DoSet(Intervention::from_pairs(vars.into_iter().zip(bits.bits().iter().copied()))));
    }
    Err(bad())
}

/// Exact total variation distance `½ Σ |p(x) − q(x)|`.
pub fn tv(p: &ExactDist, q: &ExactDist) -> Result<ExactRational> {
    if p.n_bits() != q.n_bits() {
        return Err(Error::LengthMismatch { left: p.n_bits(), right: q.n_bits() });
    }
    let mut sum = ExactRational::zero();
    for (x, w) in p.iter() {
        sum += (w - q.prob(x)).abs();
    }
    for (x, w) in q.iter() {
        if p.prob(x).is_zero() {
            sum += w;
        }
    }
    Ok(sum / ExactRational::from_integer(2.into()))
}

/// `d_Int`: the largest TV over the observational pair and all 2n single-variable do pairs.
pub fn d_int(a: &AnswerOracle, b: &AnswerOracle) -> Result<ExactRational> {
    for o in [a, b] {
        if o.kind != OracleKind::Int1 {
            return Err(Error::KindMismatch { expected: "INT1", found: o.kind.name() });
        }
    }
    if a.n != b.n {
        return Err(Error::LengthMismatch { left: a.n, right: b.n });
    }
    let mut best = ExactRational::zero();
    for ((_, p), (_, q)) in a.components.iter().zip(&b.components) {
        let d = tv(p, q)?;
        if d > best {
            best = d;
        }
    }
    Ok(best)
}

/// Block `b` (0 factual, 1 world0, 2 world1) of a 3n-bit counterfactual outcome.
pub fn cf_block_positions(n: usize, block: usize) -> Vec<usize> {
    (block * n..(block + 1) * n).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{half, ratio};
    use crate::families::{build_bipartite_scm, build_tree_scm, build_xor_scm, BipartiteGraph, RootedTree};

    fn caps() -> Caps {
        Caps::default()
    }

    fn dist(n: usize, entries: &[(&str, ExactRational)]) -> ExactDist {
        ExactDist::new(n, entries.iter().map(|(b, w)| (b.parse().unwrap(), w.clone()))).unwrap()
    }

    #[test]
    fn tree_chain_int1() {
        let scm = build_tree_scm(&RootedTree::chain(2));
        let o = compute_oracle(&scm, OracleKind::Int1, &caps()).unwrap();
        assert_eq!(o.obs().unwrap(), &dist(2, &[("00", half()), ("11", half())]));
        assert_eq!(o.do_component(0, false).unwrap(), &dist(2, &[("00", ratio(1, 1))]));
        assert_eq!(o.do_component(0, true).unwrap(), &dist(2, &[("11", ratio(1, 1))]));
        assert_eq!(o.do_component(1, false).unwrap(), &dist(2, &[("00", half()), ("10", half())]));
        assert_eq!(o.do_component(1, true).unwrap(), &dist(2, &[("01", half()), ("11", half())]));
        assert_eq!(
            o.serialize().as_str(),
            "INT1 n=2\n#obs\n00=1/2\n11=1/2\n#do i=0 b=0\n00=1/1\n#do i=0 b=1\n11=1/1\n\
             #do i=1 b=0\n00=1/2\n10=1/2\n#do i=1 b=1\n01=1/2\n11=1/2\n"
        );
    }

    #[test]
    fn obs_serialization_shape() {
        let scm = build_tree_scm(&RootedTree::chain(2));
        let o = compute_oracle(&scm, OracleKind::Obs, &caps()).unwrap();
        assert_eq!(o.serialize().as_str(), "OBS n=2\n#obs\n00=1/2\n11=1/2\n");
    }

    #[test]
    fn xor_int1_identical() {
        let a = compute_oracle(&build_xor_scm(&"00".parse().unwrap()), OracleKind::Int1, &caps()).unwrap();
        let b = compute_oracle(&build_xor_scm(&"11".parse().unwrap()), OracleKind::Int1, &caps()).unwrap();
        assert_eq!(a.serialize(), b.serialize());
        assert_eq!(d_int(&a, &b).unwrap(), ratio(0, 1));
    }

    #[test]
    fn bipartite_int1_differs() {
        let a = compute_oracle(&build_bipartite_scm(&BipartiteGraph::from_mask(2, 1)), OracleKind::Int1, &caps())
            .unwrap();
        let b = compute_oracle(&build_bipartite_scm(&BipartiteGraph::from_mask(2, 2)), OracleKind::Int1, &caps())
            .unwrap();
        assert_ne!(a.serialize(), b.serialize());
        assert_eq!(d_int(&a, &b).unwrap(), half());
        assert_eq!(d_int(&a, &a).unwrap(), ratio(0, 1));
    }

    #[test]
    fn parse_round_trip_all_kinds() {
        let scm = build_xor_scm(&"10".parse().unwrap());
        for kind in OracleKind::ALL {
            let o = compute_oracle(&scm, kind, &caps()).unwrap();
            let bytes = o.serialize();
            assert_eq!(AnswerOracle::parse(bytes.as_bytes()).unwrap(), o, "{kind}");
        }
    }

    #[test]
    fn parse_rejects_noncanonical() {
        let good = "OBS n=1\n#obs\n0=1/2\n1=1/2\n";
        assert!(AnswerOracle::parse(good.as_bytes()).is_ok());
        for bad in [
            "OBS n=1\n#obs\n1=1/2\n0=1/2\n",
            "OBS n=1\n#obs\n0=2/4\n1=1/2\n",
            "OBS n=1\r\n#obs\r\n0=1/2\r\n1=1/2\r\n",
            "OBS n=1\n#obs\n0=1/2\n1=1/3\n",
            "OBS n=1\n#obs\n00=1/1\n",
            "OBS n=1\n#cf i=0\n0=1/1\n",
            "OBS n=1\n#obs\n0=1/2\n1=1/2",
            "NOPE n=1\n#obs\n0=1/1\n",
        ] {
            assert!(AnswerOracle::parse(bad.as_bytes()).is_err(), "{bad:?}");
        }
    }

    #[test]
    fn serialization_injective_on_points() {
        let mk = |b: &str| AnswerOracle::from_components(OracleKind::Obs, 1, vec![(ComponentKey::Obs, dist(1, &[(b, ratio(1, 1))]))]).unwrap();
        assert_ne!(mk("0").serialize(), mk("1").serialize());
    }

    #[test]
    fn tv_cases() {
        let u = ExactDist::uniform(1);
        assert_eq!(tv(&u, &u).unwrap(), ratio(0, 1));
        let point = dist(1, &[("0", ratio(1, 1))]);
        assert_eq!(tv(&point, &u).unwrap(), half());
        assert_eq!(tv(&u, &point).unwrap(), half());
        assert!(matches!(tv(&u, &ExactDist::uniform(2)), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn d_int_kind_checks() {
        let scm = build_tree_scm(&RootedTree::chain(2));
        let obs = compute_oracle(&scm, OracleKind::Obs, &caps()).unwrap();
        let int1 = compute_oracle(&scm, OracleKind::Int1, &caps()).unwrap();
        assert!(matches!(d_int(&obs, &int1), Err(Error::KindMismatch { .. })));
        let other = compute_oracle(&build_tree_scm(&RootedTree::chain(3)), OracleKind::Int1, &caps()).unwrap();
        assert!(matches!(d_int(&int1, &other), Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn cf_blocks_marginalize_to_int1() {
        let scm = build_xor_scm(&"1".parse().unwrap());
        let cf = compute_oracle(&scm, OracleKind::Cf1, &caps()).unwrap();
        let int1 = compute_oracle(&scm, OracleKind::Int1, &caps()).unwrap();
        for var in 0..2 {
            let triple = cf.cf_component(var).unwrap();
            assert_eq!(&triple.marginal(&cf_block_positions(2, 0)).unwrap(), int1.obs().unwrap());
            assert_eq!(&triple.marginal(&cf_block_positions(2, 1)).unwrap(), int1.do_component(var, false).unwrap());
            assert_eq!(&triple.marginal(&cf_block_positions(2, 2)).unwrap(), int1.do_component(var, true).unwrap());
        }
    }
}
