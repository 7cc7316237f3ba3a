//! Two-body Pauli Hamiltonians as coupling vectors.
//!
//! A Hamiltonian `H = Σ h_α σ_i^μ σ_j^ν` is stored as a map from
//! [`CouplingKey`] `(i, j, μ, ν)` with `i < j` to the real coupling `h_α`.
//! The map is ordered lexicographically, which fixes the vector index `α`
//! of every key. Absent keys are couplings that are exactly zero.
//!
//! [`InteractionGraph`] is the multigraph view: one edge per key, so a
//! qubit pair coupled along several axis pairs contributes several edges.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{DaqcError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PauliAxis {
    X,
    Y,
    Z,
}

impl PauliAxis {
    pub const ALL: [PauliAxis; 3] = [PauliAxis::X, PauliAxis::Y, PauliAxis::Z];

    pub fn as_char(self) -> char {
        match self {
            PauliAxis::X => 'x',
            PauliAxis::Y => 'y',
            PauliAxis::Z => 'z',
        }
    }
}

impl fmt::Display for PauliAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

impl FromStr for PauliAxis {
    type Err = DaqcError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "x" | "X" => Ok(PauliAxis::X),
            "y" | "Y" => Ok(PauliAxis::Y),
            "z" | "Z" => Ok(PauliAxis::Z),
            other => Err(DaqcError::InvalidKey(format!("unknown Pauli axis '{other}'"))),
        }
    }
}

/// Label of a single two-body term `σ_i^μ σ_j^ν`, always with `i < j`.
///
/// Field order matters: the derived `Ord` is the canonical index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CouplingKey {
    pub i: usize,
    pub j: usize,
    pub mu: PauliAxis,
    pub nu: PauliAxis,
}

impl CouplingKey {
    /// Builds a key, swapping `(i, mu)` with `(j, nu)` when `i > j`.
    pub fn new(i: usize, j: usize, mu: PauliAxis, nu: PauliAxis) -> Result<Self> {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => Ok(Self { i, j, mu, nu }),
            std::cmp::Ordering::Greater => Ok(Self { i: j, j: i, mu: nu, nu: mu }),
            std::cmp::Ordering::Equal => Err(DaqcError::InvalidKey(format!(
                "two-body term needs distinct qubits, got ({i}, {j})"
            ))),
        }
    }

    /// `σ_i^z σ_j^z` with the endpoints put in canonical order.
    ///
    /// Panics if `i == j`.
    pub fn zz(i: usize, j: usize) -> Self {
        Self::new(i, j, PauliAxis::Z, PauliAxis::Z).expect("zz key needs distinct qubits")
    }

    pub fn is_zz(&self) -> bool {
        self.mu == PauliAxis::Z && self.nu == PauliAxis::Z
    }

    pub fn touches(&self, qubit: usize) -> bool {
        self.i == qubit || self.j == qubit
    }

    fn check_size(&self, n_qubits: usize) -> Result<()> {
        if self.i < self.j && self.j < n_qubits {
            Ok(())
        } else {
            Err(DaqcError::InvalidKey(format!(
                "{self} does not fit a {n_qubits}-qubit system"
            )))
        }
    }
}

impl fmt::Display for CouplingKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{})", self.i, self.j, self.mu, self.nu)
    }
}

/// Every key on `n_qubits` qubits, in canonical order (the `9K_N` universe).
pub fn full_universe(n_qubits: usize) -> Vec<CouplingKey> {
    let mut keys = Vec::with_capacity(9 * n_qubits * n_qubits.saturating_sub(1) / 2);
    for i in 0..n_qubits {
        for j in (i + 1)..n_qubits {
            for mu in PauliAxis::ALL {
                for nu in PauliAxis::ALL {
                    keys.push(CouplingKey { i, j, mu, nu });
                }
            }
        }
    }
    keys
}

/// Position of `key` in a canonically ordered universe.
pub fn canonical_index(key: &CouplingKey, universe: &[CouplingKey]) -> Result<usize> {
    universe
        .binary_search(key)
        .map_err(|_| DaqcError::KeyNotInUniverse(*key))
}

/// Order of a vector norm. `NegInf` is the minimum absolute entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormOrder {
    P(f64),
    Inf,
    NegInf,
}

impl NormOrder {
    pub const ONE: NormOrder = NormOrder::P(1.0);
    pub const TWO: NormOrder = NormOrder::P(2.0);
}

impl fmt::Display for NormOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormOrder::P(p) => write!(f, "{p}"),
            NormOrder::Inf => write!(f, "inf"),
            NormOrder::NegInf => write!(f, "-inf"),
        }
    }
}

/// p-norm of a slice of reals.
pub fn p_norm(values: &[f64], order: NormOrder) -> Result<f64> {
    let abs = values.iter().map(|v| v.abs());
    match order {
        NormOrder::Inf => Ok(abs.fold(0.0, f64::max)),
        NormOrder::NegInf => {
            if values.is_empty() {
                return Err(DaqcError::UndefinedNorm(
                    "the -inf norm of an empty vector".into(),
                ));
            }
            Ok(abs.fold(f64::INFINITY, f64::min))
        }
        NormOrder::P(p) => {
            if !(p > 0.0) || !p.is_finite() {
                return Err(DaqcError::UndefinedNorm(format!("p = {p}")));
            }
            if p == 1.0 {
                return Ok(abs.sum());
            }
            // Scale by the largest entry so large p does not overflow.
            let scale = values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
            if scale == 0.0 {
                return Ok(0.0);
            }
            let sum: f64 = abs.map(|a| (a / scale).powf(p)).sum();
            Ok(scale * sum.powf(1.0 / p))
        }
    }
}

/// What [`hadamard_divide`] does with a `0/0` entry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndeterminatePolicy {
    Error,
    Zero,
    Skip,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CouplingVector {
    n_qubits: usize,
    entries: BTreeMap<CouplingKey, f64>,
}

impl CouplingVector {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            entries: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        n_qubits: usize,
        entries: impl IntoIterator<Item = (CouplingKey, f64)>,
    ) -> Result<Self> {
        let mut v = Self::new(n_qubits);
        for (k, x) in entries {
            v.insert(k, x)?;
        }
        Ok(v)
    }

    /// Sets a coupling. Explicit zeros are kept as entries (declared support).
    pub fn insert(&mut self, key: CouplingKey, value: f64) -> Result<()> {
        key.check_size(self.n_qubits)?;
        if !value.is_finite() {
            return Err(DaqcError::NonFinite(format!("coupling {key} = {value}")));
        }
        self.entries.insert(key, value);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, key: &CouplingKey) -> f64 {
        self.entries.get(key).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&CouplingKey, &f64)> {
        self.entries.iter()
    }

    pub fn keys(&self) -> impl Iterator<Item = &CouplingKey> {
        self.entries.keys()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.values().copied().collect()
    }

    /// Graph of the nonzero couplings.
    pub fn support(&self) -> InteractionGraph {
        InteractionGraph {
            n_qubits: self.n_qubits,
            edges: self
                .entries
                .iter()
                .filter(|(_, v)| **v != 0.0)
                .map(|(k, _)| *k)
                .collect(),
        }
    }

    /// Graph of every stored key, zeros included.
    pub fn declared_support(&self) -> InteractionGraph {
        InteractionGraph {
            n_qubits: self.n_qubits,
            edges: self.entries.keys().copied().collect(),
        }
    }

    pub fn is_zz_only(&self) -> bool {
        self.entries.keys().all(CouplingKey::is_zz)
    }

    pub fn norm(&self, order: NormOrder) -> Result<f64> {
        p_norm(&self.values(), order)
    }

    /// Keeps only the entries whose key is an edge of `graph`.
    pub fn restrict(&self, graph: &InteractionGraph) -> Self {
        Self {
            n_qubits: self.n_qubits,
            entries: self
                .entries
                .iter()
                .filter(|(k, _)| graph.contains(k))
                .map(|(k, v)| (*k, *v))
                .collect(),
        }
    }

    pub fn map_values(&self, f: impl Fn(&CouplingKey, f64) -> f64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            entries: self.entries.iter().map(|(k, v)| (*k, f(k, *v))).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_values(|_, v| c * v)
    }

    /// Entrywise combination over the union of both key sets.
    pub fn zip_with(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Result<Self> {
        check_same_size(self.n_qubits, other.n_qubits)?;
        let keys: BTreeSet<CouplingKey> = self.entries.keys().chain(other.entries.keys()).copied().collect();
        Ok(Self {
            n_qubits: self.n_qubits,
            entries: keys
                .into_iter()
                .map(|k| (k, f(self.get(&k), other.get(&k))))
                .collect(),
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn hadamard_product(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }
}

fn check_same_size(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(DaqcError::DimensionMismatch { expected, found })
    }
}

/// Elementwise `a ⊘ b` over the union of both key sets.
///
/// A nonzero numerator over a zero denominator is always an error: the
/// target asks for a coupling the source does not have.
pub fn hadamard_divide(
    a: &CouplingVector,
    b: &CouplingVector,
    policy: IndeterminatePolicy,
) -> Result<CouplingVector> {
    check_same_size(a.n_qubits, b.n_qubits)?;
    let keys: BTreeSet<CouplingKey> = a.entries.keys().chain(b.entries.keys()).copied().collect();
    let mut out = CouplingVector::new(a.n_qubits);
    for key in keys {
        let (num, den) = (a.get(&key), b.get(&key));
        if den != 0.0 {
            out.entries.insert(key, num / den);
        } else if num != 0.0 {
            return Err(DaqcError::SimulabilityViolation(key));
        } else {
            match policy {
                IndeterminatePolicy::Zero => {
                    out.entries.insert(key, 0.0);
                }
                IndeterminatePolicy::Skip => {}
                IndeterminatePolicy::Error => return Err(DaqcError::IndeterminateForm(key)),
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteractionGraph {
    n_qubits: usize,
    edges: BTreeSet<CouplingKey>,
}

impl InteractionGraph {
    pub fn empty(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            edges: BTreeSet::new(),
        }
    }

    pub fn from_edges(n_qubits: usize, edges: impl IntoIterator<Item = CouplingKey>) -> Result<Self> {
        let mut g = Self::empty(n_qubits);
        for e in edges {
            e.check_size(n_qubits)?;
            g.edges.insert(e);
        }
        Ok(g)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn edges(&self) -> impl Iterator<Item = &CouplingKey> {
        self.edges.iter()
    }

    /// Edges in canonical order.
    pub fn edge_list(&self) -> Vec<CouplingKey> {
        self.edges.iter().copied().collect()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn contains(&self, key: &CouplingKey) -> bool {
        self.edges.contains(key)
    }

    pub fn is_subgraph_of(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.edges.is_subset(&other.edges)
    }

    pub fn is_zz_only(&self) -> bool {
        self.edges.iter().all(CouplingKey::is_zz)
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        check_same_size(self.n_qubits, other.n_qubits)?;
        Ok(Self {
            n_qubits: self.n_qubits,
            edges: self.edges.union(&other.edges).copied().collect(),
        })
    }

    /// Multigraph degree of one vertex: every key touching it counts once.
    pub fn vertex_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.touches(v)).count()
    }

    /// Edges with at least one endpoint in `qubits`.
    pub fn edges_touching(&self, qubits: &BTreeSet<usize>) -> usize {
        self.edges
            .iter()
            .filter(|e| qubits.contains(&e.i) || qubits.contains(&e.j))
            .count()
    }
}

/// `d` with the edges of `s` removed; the vertex set is kept.
pub fn graph_difference(d: &InteractionGraph, s: &InteractionGraph) -> Result<InteractionGraph> {
    check_same_size(d.n_qubits, s.n_qubits)?;
    Ok(InteractionGraph {
        n_qubits: d.n_qubits,
        edges: d.edges.difference(&s.edges).copied().collect(),
    })
}

/// Maximum multigraph degree over all vertices.
pub fn degree(g: &InteractionGraph) -> usize {
    let mut per_vertex = vec![0usize; g.n_qubits];
    for e in &g.edges {
        per_vertex[e.i] += 1;
        per_vertex[e.j] += 1;
    }
    per_vertex.into_iter().max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn zz_vec(n: usize, entries: &[((usize, usize), f64)]) -> CouplingVector {
        CouplingVector::from_entries(n, entries.iter().map(|&((i, j), v)| (CouplingKey::zz(i, j), v)))
            .unwrap()
    }

    fn zz_graph(n: usize, pairs: &[(usize, usize)]) -> InteractionGraph {
        InteractionGraph::from_edges(n, pairs.iter().map(|&(i, j)| CouplingKey::zz(i, j))).unwrap()
    }

    #[test]
    fn key_orientation_is_canonical() {
        let k = CouplingKey::new(2, 0, PauliAxis::X, PauliAxis::Y).unwrap();
        assert_eq!((k.i, k.j, k.mu, k.nu), (0, 2, PauliAxis::Y, PauliAxis::X));
        assert!(CouplingKey::new(1, 1, PauliAxis::Z, PauliAxis::Z).is_err());
    }

    #[test]
    fn canonical_index_examples() {
        let universe = vec![CouplingKey::zz(0, 1), CouplingKey::zz(0, 2), CouplingKey::zz(1, 2)];
        assert_eq!(canonical_index(&CouplingKey::zz(0, 2), &universe).unwrap(), 1);
        assert_eq!(canonical_index(&universe[0], &universe).unwrap(), 0);

        // Hand-enumerated: xx xy xz yx yy yz zx zy zz.
        let pairs = full_universe(2);
        assert_eq!(pairs.len(), 9);
        let zx = CouplingKey::new(0, 1, PauliAxis::Z, PauliAxis::X).unwrap();
        assert_eq!(canonical_index(&zx, &pairs).unwrap(), 6);

        let missing = CouplingKey::zz(0, 3);
        assert!(matches!(
            canonical_index(&missing, &universe),
            Err(DaqcError::KeyNotInUniverse(k)) if k == missing
        ));
    }

    #[test]
    fn p_norm_examples() {
        let v = zz_vec(3, &[((0, 1), 3.0), ((1, 2), -4.0)]);
        assert_eq!(v.norm(NormOrder::ONE).unwrap(), 7.0);
        assert_eq!(v.norm(NormOrder::Inf).unwrap(), 4.0);
        assert_eq!(v.norm(NormOrder::NegInf).unwrap(), 3.0);
        assert!((v.norm(NormOrder::TWO).unwrap() - 5.0).abs() < 1e-15);
        assert!(matches!(
            CouplingVector::new(2).norm(NormOrder::NegInf),
            Err(DaqcError::UndefinedNorm(_))
        ));
    }

    #[test]
    fn hadamard_divide_examples() {
        let a = zz_vec(2, &[((0, 1), 2.0)]);
        let b = zz_vec(2, &[((0, 1), 4.0)]);
        let q = hadamard_divide(&a, &b, IndeterminatePolicy::Error).unwrap();
        assert_eq!(q.get(&CouplingKey::zz(0, 1)), 0.5);

        let empty = CouplingVector::new(2);
        for policy in [IndeterminatePolicy::Error, IndeterminatePolicy::Zero, IndeterminatePolicy::Skip] {
            let q = hadamard_divide(&empty, &b, policy).unwrap();
            assert_eq!(q.len(), 1);
            assert_eq!(q.get(&CouplingKey::zz(0, 1)), 0.0);
        }

        let a = zz_vec(3, &[((0, 1), 1.0), ((1, 2), 0.0)]);
        let b = zz_vec(3, &[((0, 1), 2.0), ((1, 2), 0.0)]);
        let zero = hadamard_divide(&a, &b, IndeterminatePolicy::Zero).unwrap();
        assert_eq!(zero.len(), 2);
        assert_eq!(zero.get(&CouplingKey::zz(0, 1)), 0.5);
        assert_eq!(zero.get(&CouplingKey::zz(1, 2)), 0.0);
        let skip = hadamard_divide(&a, &b, IndeterminatePolicy::Skip).unwrap();
        assert_eq!(skip.len(), 1);
        assert!(matches!(
            hadamard_divide(&a, &b, IndeterminatePolicy::Error),
            Err(DaqcError::IndeterminateForm(_))
        ));
    }

    #[test]
    fn nonzero_over_zero_is_a_simulability_violation() {
        let a = zz_vec(3, &[((1, 2), 1.0)]);
        let b = zz_vec(3, &[((0, 1), 1.0)]);
        assert!(matches!(
            hadamard_divide(&a, &b, IndeterminatePolicy::Zero),
            Err(DaqcError::SimulabilityViolation(k)) if k == CouplingKey::zz(1, 2)
        ));
        assert!(matches!(
            hadamard_divide(&a, &CouplingVector::new(4), IndeterminatePolicy::Zero),
            Err(DaqcError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn graph_difference_examples() {
        let triangle = zz_graph(3, &[(0, 1), (0, 2), (1, 2)]);
        let path = zz_graph(3, &[(0, 1), (0, 2)]);
        let diff = graph_difference(&triangle, &path).unwrap();
        assert_eq!(diff.edge_list(), vec![CouplingKey::zz(1, 2)]);
        assert_eq!(diff.n_qubits(), 3);

        assert_eq!(graph_difference(&triangle, &triangle).unwrap().edge_count(), 0);

        let complete_multi = InteractionGraph::from_edges(3, full_universe(3)).unwrap();
        assert_eq!(complete_multi.edge_count(), 27);
        assert_eq!(graph_difference(&complete_multi, &triangle).unwrap().edge_count(), 24);

        assert!(matches!(
            graph_difference(&triangle, &InteractionGraph::empty(4)),
            Err(DaqcError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree(&zz_graph(4, &[(0, 1), (1, 2), (2, 3)])), 2);
        let k5: Vec<_> = (0..5).flat_map(|i| ((i + 1)..5).map(move |j| (i, j))).collect();
        assert_eq!(degree(&zz_graph(5, &k5)), 4);
        let chain_plus_second = zz_graph(
            5,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 2), (1, 3), (2, 4)],
        );
        assert_eq!(degree(&chain_plus_second), 4);
        let defect_only = graph_difference(&chain_plus_second, &zz_graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4)])).unwrap();
        assert_eq!(degree(&defect_only), 2);
        // Axis multiplicity counts separately.
        assert_eq!(degree(&InteractionGraph::from_edges(2, full_universe(2)).unwrap()), 9);
    }

    fn arb_vector() -> impl Strategy<Value = CouplingVector> {
        (2usize..6).prop_flat_map(|n| {
            let universe = full_universe(n);
            let len = universe.len();
            proptest::collection::vec((0..len, -10.0f64..10.0), 1..20).prop_map(move |picks| {
                let mut v = CouplingVector::new(n);
                for (idx, x) in picks {
                    v.insert(universe[idx], x).unwrap();
                }
                v
            })
        })
    }

    proptest! {
        #[test]
        fn canonical_index_round_trips(n in 2usize..6) {
            let universe = full_universe(n);
            for (alpha, key) in universe.iter().enumerate() {
                prop_assert_eq!(canonical_index(key, &universe).unwrap(), alpha);
            }
        }

        #[test]
        fn norm_chain_holds(v in arb_vector()) {
            let n1 = v.norm(NormOrder::ONE).unwrap();
            let n2 = v.norm(NormOrder::TWO).unwrap();
            let ninf = v.norm(NormOrder::Inf).unwrap();
            let nmin = v.norm(NormOrder::NegInf).unwrap();
            prop_assert!(n1 >= n2 * (1.0 - 1e-12));
            prop_assert!(n2 >= ninf * (1.0 - 1e-12));
            prop_assert!(ninf >= nmin);
        }

        #[test]
        fn divide_then_multiply_recovers_numerator(a in arb_vector(), b in arb_vector()) {
            prop_assume!(a.n_qubits() == b.n_qubits());
            // Restrict the numerator to b's support so the division is defined.
            let a = a.restrict(&b.support());
            let q = hadamard_divide(&a, &b, IndeterminatePolicy::Zero).unwrap();
            let back = q.hadamard_product(&b).unwrap();
            for key in b.support().edges() {
                prop_assert!((back.get(key) - a.get(key)).abs() <= 1e-12 * a.get(key).abs().max(1.0));
            }
        }

        #[test]
        fn difference_plus_subgraph_is_whole(v in arb_vector(), mask in proptest::collection::vec(any::<bool>(), 20)) {
            let d = v.declared_support();
            let s = InteractionGraph::from_edges(
                d.n_qubits(),
                d.edges().zip(mask.iter().cycle()).filter(|(_, m)| **m).map(|(e, _)| *e),
            ).unwrap();
            let rebuilt = graph_difference(&d, &s).unwrap().union(&s).unwrap();
            prop_assert_eq!(rebuilt, d);
        }
    }
}
