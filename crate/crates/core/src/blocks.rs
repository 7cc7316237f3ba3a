//! Single-qubit-gate layers and the sign matrix they induce.
//!
//! Conjugating `σ_i^μ σ_j^ν` by a layer of Pauli gates only flips its sign,
//! so each analog block `k` is described by a column of ±1 entries
//! `M[α][k]`, one per coupling.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{DaqcError, Result};
use crate::pauli::{CouplingKey, InteractionGraph, PauliAxis};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Gate {
    I,
    X,
    Y,
    Z,
}

impl Gate {
    pub const ALL: [Gate; 4] = [Gate::I, Gate::X, Gate::Y, Gate::Z];

    /// Sign picked up by `σ^axis` under conjugation by this gate.
    pub fn conjugation_sign(self, axis: PauliAxis) -> i8 {
        match (self, axis) {
            (Gate::I, _) | (Gate::X, PauliAxis::X) | (Gate::Y, PauliAxis::Y) | (Gate::Z, PauliAxis::Z) => 1,
            _ => -1,
        }
    }

    pub fn from_axis(axis: PauliAxis) -> Self {
        match axis {
            PauliAxis::X => Gate::X,
            PauliAxis::Y => Gate::Y,
            PauliAxis::Z => Gate::Z,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Gate::I => 'I',
            Gate::X => 'X',
            Gate::Y => 'Y',
            Gate::Z => 'Z',
        }
    }

    fn from_char(c: char) -> Option<Self> {
        match c {
            'I' => Some(Gate::I),
            'X' => Some(Gate::X),
            'Y' => Some(Gate::Y),
            'Z' => Some(Gate::Z),
            _ => None,
        }
    }
}

/// One gate per qubit. Also used as a Pauli string for observables.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GatePattern {
    gates: Vec<Gate>,
}

impl GatePattern {
    pub fn new(gates: Vec<Gate>) -> Self {
        Self { gates }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self {
            gates: vec![Gate::I; n_qubits],
        }
    }

    /// Pattern with `gate` on the listed qubits and identity elsewhere.
    pub fn with_gate_on(n_qubits: usize, gate: Gate, qubits: &[usize]) -> Self {
        let mut p = Self::identity(n_qubits);
        for &q in qubits {
            p.gates[q] = gate;
        }
        p
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, qubit: usize) -> Gate {
        self.gates[qubit]
    }

    pub fn is_identity(&self) -> bool {
        self.gates.iter().all(|g| *g == Gate::I)
    }

    /// Qubits acted on by a non-identity gate.
    pub fn support(&self) -> Vec<usize> {
        self.gates
            .iter()
            .enumerate()
            .filter(|(_, g)| **g != Gate::I)
            .map(|(q, _)| q)
            .collect()
    }

    /// Decodes `index` as base-`alphabet.len()` digits, qubit 0 most significant.
    fn from_index(index: u128, n_qubits: usize, alphabet: &[Gate]) -> Self {
        let base = alphabet.len() as u128;
        let mut gates = vec![Gate::I; n_qubits];
        let mut rest = index;
        for slot in gates.iter_mut().rev() {
            *slot = alphabet[(rest % base) as usize];
            rest /= base;
        }
        Self { gates }
    }
}

impl fmt::Display for GatePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for g in &self.gates {
            write!(f, "{}", g.as_char())?;
        }
        Ok(())
    }
}

impl FromStr for GatePattern {
    type Err = DaqcError;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| {
                Gate::from_char(c)
                    .ok_or_else(|| DaqcError::Validation(format!("invalid gate '{c}' in pattern '{s}'")))
            })
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }
}

/// Sign of coupling `key` inside an analog block sandwiched by `pattern`.
pub fn block_sign(pattern: &GatePattern, key: &CouplingKey) -> i8 {
    pattern.gate(key.i).conjugation_sign(key.mu) * pattern.gate(key.j).conjugation_sign(key.nu)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignMatrix {
    rows: Vec<CouplingKey>,
    patterns: Vec<GatePattern>,
    /// Row-major, `rows.len() × patterns.len()`.
    entries: Vec<i8>,
}

impl SignMatrix {
    pub fn rows(&self) -> &[CouplingKey] {
        &self.rows
    }

    pub fn patterns(&self) -> &[GatePattern] {
        &self.patterns
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.patterns.len()
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        self.entries[row * self.patterns.len() + col]
    }

    pub fn row(&self, row: usize) -> &[i8] {
        let w = self.patterns.len();
        &self.entries[row * w..(row + 1) * w]
    }

    /// `Σ_k M[row][k]·times[k]`.
    pub fn row_dot(&self, row: usize, times: &[f64]) -> f64 {
        self.row(row).iter().zip(times).map(|(s, t)| f64::from(*s) * t).sum()
    }

    /// CSV with a header of pattern strings and the row key in the first column.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("key");
        for p in &self.patterns {
            out.push(',');
            out.push_str(&p.to_string());
        }
        out.push('\n');
        for (r, key) in self.rows.iter().enumerate() {
            out.push_str(&format!("{} {} {} {}", key.i, key.j, key.mu, key.nu));
            for s in self.row(r) {
                out.push(',');
                out.push_str(&s.to_string());
            }
            out.push('\n');
        }
        out
    }
}

pub fn build_sign_matrix(patterns: &[GatePattern], rows: &[CouplingKey]) -> Result<SignMatrix> {
    if patterns.is_empty() || rows.is_empty() {
        return Err(DaqcError::Validation(
            "sign matrix needs at least one pattern and one row".into(),
        ));
    }
    let mut seen = HashSet::with_capacity(patterns.len());
    for p in patterns {
        if !seen.insert(p) {
            return Err(DaqcError::DuplicatePattern(p.to_string()));
        }
    }
    let width = rows.iter().map(|k| k.j + 1).max().unwrap_or(0);
    if let Some(short) = patterns.iter().find(|p| p.len() < width) {
        return Err(DaqcError::Validation(format!(
            "pattern {short} is shorter than the {width} qubits the rows touch"
        )));
    }
    let entries = rows
        .iter()
        .flat_map(|key| patterns.iter().map(move |p| block_sign(p, key)))
        .collect();
    Ok(SignMatrix {
        rows: rows.to_vec(),
        patterns: patterns.to_vec(),
        entries,
    })
}

/// Gate alphabet for a support: `{I, X}` flips every ZZ sign, anything
/// else needs the full Pauli set.
pub fn pattern_alphabet(support: &InteractionGraph) -> &'static [Gate] {
    if support.is_zz_only() {
        &[Gate::I, Gate::X]
    } else {
        &Gate::ALL
    }
}

/// Number of distinct patterns over the support's alphabet, saturating.
pub fn available_patterns(support: &InteractionGraph) -> u128 {
    let base = pattern_alphabet(support).len() as u128;
    let mut total: u128 = 1;
    for _ in 0..support.n_qubits() {
        total = total.saturating_mul(base);
    }
    total
}

/// Identity pattern followed by `requested - 1` distinct seeded draws.
///
/// Draws come from a single rejection-sampling stream, so the result for a
/// smaller `requested` is always a prefix of the result for a larger one.
pub fn generate_candidate_patterns(
    source_support: &InteractionGraph,
    requested: usize,
    rng_seed: u64,
) -> Result<Vec<GatePattern>> {
    if requested == 0 {
        return Err(DaqcError::Validation("at least one pattern must be requested".into()));
    }
    let n = source_support.n_qubits();
    let alphabet = pattern_alphabet(source_support);
    let available = available_patterns(source_support);
    if requested as u128 > available {
        return Err(DaqcError::PatternExhaustion {
            requested: requested as u128,
            available,
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut seen: HashSet<u128> = HashSet::with_capacity(requested);
    seen.insert(0);
    let mut out = Vec::with_capacity(requested);
    out.push(GatePattern::identity(n));
    while out.len() < requested {
        let idx = rng.gen_range(0..available);
        if seen.insert(idx) {
            out.push(GatePattern::from_index(idx, n, alphabet));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::full_universe;
    use num_complex::Complex64;

    type M2 = [[Complex64; 2]; 2];

    fn pauli(g: Gate) -> M2 {
        let (o, z, i) = (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 1.0));
        match g {
            Gate::I => [[o, z], [z, o]],
            Gate::X => [[z, o], [o, z]],
            Gate::Y => [[z, -i], [i, z]],
            Gate::Z => [[o, z], [z, -o]],
        }
    }

    fn mul(a: &M2, b: &M2) -> M2 {
        let mut c = [[Complex64::new(0.0, 0.0); 2]; 2];
        for r in 0..2 {
            for col in 0..2 {
                for k in 0..2 {
                    c[r][col] += a[r][k] * b[k][col];
                }
            }
        }
        c
    }

    fn dagger(a: &M2) -> M2 {
        [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
    }

    /// Sign s with g σ g† = s σ, from explicit 2×2 products.
    fn oracle_sign(g: Gate, axis: PauliAxis) -> i8 {
        let sigma = pauli(Gate::from_axis(axis));
        let conj = mul(&mul(&pauli(g), &sigma), &dagger(&pauli(g)));
        let plus = (0..2).all(|r| (0..2).all(|c| (conj[r][c] - sigma[r][c]).norm() < 1e-12));
        let minus = (0..2).all(|r| (0..2).all(|c| (conj[r][c] + sigma[r][c]).norm() < 1e-12));
        assert!(plus ^ minus);
        if plus {
            1
        } else {
            -1
        }
    }

    #[test]
    fn block_sign_matches_conjugation_oracle() {
        for key in full_universe(2) {
            for gi in Gate::ALL {
                for gj in Gate::ALL {
                    let p = GatePattern::new(vec![gi, gj]);
                    let expected = oracle_sign(gi, key.mu) * oracle_sign(gj, key.nu);
                    assert_eq!(block_sign(&p, &key), expected, "{p} on {key}");
                }
            }
        }
    }

    #[test]
    fn block_sign_examples() {
        let key = CouplingKey::zz(0, 1);
        assert_eq!(block_sign(&GatePattern::identity(3), &key), 1);
        assert_eq!(block_sign(&GatePattern::with_gate_on(3, Gate::X, &[0]), &key), -1);
        assert_eq!(block_sign(&GatePattern::with_gate_on(3, Gate::X, &[0, 1]), &key), 1);
    }

    #[test]
    fn three_qubit_sign_matrix() {
        let patterns: Vec<GatePattern> = ["III", "IXX", "IXI", "IIX"].iter().map(|s| s.parse().unwrap()).collect();
        let rows = vec![CouplingKey::zz(0, 1), CouplingKey::zz(0, 2), CouplingKey::zz(1, 2)];
        let m = build_sign_matrix(&patterns, &rows).unwrap();
        assert_eq!(m.row(0), &[1, -1, -1, 1]);
        assert_eq!(m.row(1), &[1, -1, 1, -1]);
        assert_eq!(m.row(2), &[1, 1, -1, -1]);
        assert_eq!(m, build_sign_matrix(&patterns, &rows).unwrap());
        assert!(m.to_csv().starts_with("key,III,IXX,IXI,IIX\n0 1 z z,1,-1,-1,1\n"));
    }

    #[test]
    fn sign_matrix_small_cases() {
        let rows = full_universe(3);
        let m = build_sign_matrix(&[GatePattern::identity(3)], &rows).unwrap();
        assert!((0..m.n_rows()).all(|r| m.entry(r, 0) == 1));

        let zx = CouplingKey::new(0, 1, PauliAxis::Z, PauliAxis::X).unwrap();
        let m = build_sign_matrix(&["ZZ".parse().unwrap()], &[zx]).unwrap();
        assert_eq!(m.entry(0, 0), -1);

        let dup: Vec<GatePattern> = vec!["IX".parse().unwrap(), "IX".parse().unwrap()];
        assert!(matches!(
            build_sign_matrix(&dup, &[CouplingKey::zz(0, 1)]),
            Err(DaqcError::DuplicatePattern(_))
        ));
    }

    #[test]
    fn ix_columns_are_outer_sign_products() {
        for n in 2..=4 {
            let support = InteractionGraph::from_edges(
                n,
                (0..n).flat_map(|i| ((i + 1)..n).map(move |j| CouplingKey::zz(i, j))),
            )
            .unwrap();
            let patterns = generate_candidate_patterns(&support, 1 << n, 11).unwrap();
            let m = build_sign_matrix(&patterns, &support.edge_list()).unwrap();
            for (k, p) in patterns.iter().enumerate() {
                let x: Vec<i8> = p.gates().iter().map(|g| if *g == Gate::X { -1 } else { 1 }).collect();
                for (r, key) in m.rows().iter().enumerate() {
                    assert_eq!(m.entry(r, k), x[key.i] * x[key.j]);
                }
            }
        }
    }

    #[test]
    fn candidate_generation_contract() {
        let triangle = InteractionGraph::from_edges(3, [CouplingKey::zz(0, 1), CouplingKey::zz(0, 2), CouplingKey::zz(1, 2)]).unwrap();
        let four = generate_candidate_patterns(&triangle, 4, 7).unwrap();
        assert_eq!(four.len(), 4);
        assert!(four[0].is_identity());
        assert_eq!(four.iter().collect::<HashSet<_>>().len(), 4);
        assert!(four.iter().all(|p| p.gates().iter().all(|g| matches!(g, Gate::I | Gate::X))));

        assert_eq!(generate_candidate_patterns(&triangle, 1, 99).unwrap(), vec![GatePattern::identity(3)]);

        let path = InteractionGraph::from_edges(3, [CouplingKey::zz(0, 1), CouplingKey::zz(1, 2)]).unwrap();
        let all = generate_candidate_patterns(&path, 8, 3).unwrap();
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 8);
        assert!(all[0].is_identity());
        assert_eq!(all[..4], generate_candidate_patterns(&path, 4, 3).unwrap()[..]);
        assert_eq!(all, generate_candidate_patterns(&path, 8, 3).unwrap());

        assert!(matches!(
            generate_candidate_patterns(&path, 9, 3),
            Err(DaqcError::PatternExhaustion { requested: 9, available: 8 })
        ));
    }

    #[test]
    fn mixed_supports_use_full_alphabet() {
        let xy = CouplingKey::new(0, 1, PauliAxis::X, PauliAxis::Y).unwrap();
        let g = InteractionGraph::from_edges(2, [xy]).unwrap();
        assert_eq!(available_patterns(&g), 16);
        let all = generate_candidate_patterns(&g, 16, 5).unwrap();
        assert_eq!(all.iter().collect::<HashSet<_>>().len(), 16);
    }

    #[test]
    fn pattern_string_round_trip() {
        let p: GatePattern = "IXYZ".parse().unwrap();
        assert_eq!(p.to_string(), "IXYZ");
        assert_eq!(p.support(), vec![1, 2, 3]);
        assert!("IXQ".parse::<GatePattern>().is_err());
    }
}
