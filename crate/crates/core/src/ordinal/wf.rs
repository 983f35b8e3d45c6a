//! Well-foundedness and order types of finite relations.
//!
//! An edge `(y, x)` means `y < x`. On a finite domain a relation is
//! well-founded exactly when it has no cycle, and a cycle is the only possible
//! infinite descent.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use super::cnf::CnfOrdinal;
use super::OrdinalError;
use crate::machine::{evaluate_index, Evaluation, ProgramIndex};

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct FiniteRelation {
    pub domain: BTreeSet<u64>,
    pub edges: BTreeSet<(u64, u64)>,
}

impl FiniteRelation {
    pub fn new(
        domain: impl IntoIterator<Item = u64>,
        edges: impl IntoIterator<Item = (u64, u64)>,
    ) -> Result<Self, OrdinalError> {
        let rel = FiniteRelation {
            domain: domain.into_iter().collect(),
            edges: edges.into_iter().collect(),
        };
        if let Some(&(y, x)) = rel
            .edges
            .iter()
            .find(|(y, x)| !rel.domain.contains(y) || !rel.domain.contains(x))
        {
            return Err(OrdinalError::Relation(format!(
                "edge ({y}, {x}) leaves the domain"
            )));
        }
        Ok(rel)
    }

    /// Relation whose domain is exactly the nodes mentioned by `edges`.
    pub fn from_edges(edges: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let edges: BTreeSet<(u64, u64)> = edges.into_iter().collect();
        let domain = edges.iter().flat_map(|&(y, x)| [y, x]).collect();
        FiniteRelation { domain, edges }
    }

    pub fn is_edge(&self, y: u64, x: u64) -> bool {
        self.edges.contains(&(y, x))
    }

    fn successors(&self) -> BTreeMap<u64, Vec<u64>> {
        let mut adj: BTreeMap<u64, Vec<u64>> =
            self.domain.iter().map(|&v| (v, Vec::new())).collect();
        for &(y, x) in &self.edges {
            adj.entry(y).or_default().push(x);
        }
        adj
    }
}

/// Text form: a `domain: a b c` header, then one `y x` pair per line.
/// Blank lines and lines starting with `#` are skipped. Without a header the
/// domain is the set of nodes mentioned.
impl FromStr for FiniteRelation {
    type Err = OrdinalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut domain: Option<Vec<u64>> = None;
        let mut edges = Vec::new();
        let num = |t: &str, line: usize| {
            t.parse::<u64>()
                .map_err(|_| OrdinalError::Relation(format!("line {line}: bad number {t:?}")))
        };
        for (i, raw) in s.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some(rest) = line.strip_prefix("domain:") {
                let nodes = rest
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| num(t, i + 1))
                    .collect::<Result<Vec<_>, _>>()?;
                domain = Some(nodes);
                continue;
            }
            let parts: Vec<&str> = line.split_whitespace().collect();
            let [y, x] = parts[..] else {
                return Err(OrdinalError::Relation(format!(
                    "line {}: expected `y x`",
                    i + 1
                )));
            };
            edges.push((num(y, i + 1)?, num(x, i + 1)?));
        }
        match domain {
            Some(d) => FiniteRelation::new(d, edges),
            None => Ok(FiniteRelation::from_edges(edges)),
        }
    }
}

impl fmt::Display for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "domain:")?;
        for v in &self.domain {
            write!(f, " {v}")?;
        }
        writeln!(f)?;
        for (y, x) in &self.edges {
            writeln!(f, "{y} {x}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum WfReport {
    /// `order_type` is `None` when the relation is not a linear order.
    WellFounded { order_type: Option<CnfOrdinal> },
    /// A closed walk `w_0, …, w_k = w_0` with every `(w_i, w_{i+1})` an edge.
    Descent { cycle: Vec<u64> },
}

impl WfReport {
    pub fn is_well_founded(&self) -> bool {
        matches!(self, WfReport::WellFounded { .. })
    }

    /// Whether a `Descent` witness really is a cycle of `rel`.
    pub fn witness_replays(&self, rel: &FiniteRelation) -> bool {
        match self {
            WfReport::WellFounded { .. } => true,
            WfReport::Descent { cycle } => {
                cycle.len() >= 2
                    && cycle.first() == cycle.last()
                    && cycle.windows(2).all(|w| rel.is_edge(w[0], w[1]))
            }
        }
    }
}

fn find_cycle(rel: &FiniteRelation) -> Option<Vec<u64>> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Open,
        Done,
    }
    let adj = rel.successors();
    let mut mark: BTreeMap<u64, Mark> = rel.domain.iter().map(|&v| (v, Mark::New)).collect();
    for &root in &rel.domain {
        if mark[&root] != Mark::New {
            continue;
        }
        // iterative DFS; `path` holds the open nodes
        let mut path: Vec<u64> = vec![root];
        let mut cursor: Vec<usize> = vec![0];
        mark.insert(root, Mark::Open);
        while let Some(&v) = path.last() {
            let i = cursor.last_mut().expect("parallel stacks");
            if let Some(&w) = adj[&v].get(*i) {
                *i += 1;
                match mark[&w] {
                    Mark::Open => {
                        let start = path.iter().position(|&u| u == w).expect("open node");
                        let mut cycle = path[start..].to_vec();
                        cycle.push(w);
                        return Some(cycle);
                    }
                    Mark::New => {
                        mark.insert(w, Mark::Open);
                        path.push(w);
                        cursor.push(0);
                    }
                    Mark::Done => {}
                }
            } else {
                mark.insert(v, Mark::Done);
                path.pop();
                cursor.pop();
            }
        }
    }
    None
}

/// Length of the linear order, if the (acyclic) relation's transitive closure
/// is total on the domain.
pub fn order_type(rel: &FiniteRelation) -> Option<u64> {
    let adj = rel.successors();
    let nodes: Vec<u64> = rel.domain.iter().copied().collect();
    let index: BTreeMap<u64, usize> = nodes.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = nodes.len();
    let mut reach = vec![vec![false; n]; n];
    for (i, &v) in nodes.iter().enumerate() {
        let mut stack = vec![v];
        while let Some(u) = stack.pop() {
            for w in &adj[&u] {
                let j = index[w];
                if !reach[i][j] {
                    reach[i][j] = true;
                    stack.push(*w);
                }
            }
        }
    }
    let total = (0..n).all(|i| (i + 1..n).all(|j| reach[i][j] || reach[j][i]));
    total.then_some(n as u64)
}

pub fn wf_check(rel: &FiniteRelation) -> WfReport {
    match find_cycle(rel) {
        Some(cycle) => WfReport::Descent { cycle },
        None => WfReport::WellFounded {
            order_type: order_type(rel).map(CnfOrdinal::nat),
        },
    }
}

/// Outcome of checking a program-defined relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProgramWfReport {
    Known(WfReport),
    /// `R_e(x, y)` did not halt within budget.
    Unknown {
        x: u64,
        y: u64,
    },
}

/// `R_e` restricted to `{0..=n_max}`: `(y, x)` is an edge when `φ_e(x, y)`
/// halts with output 1 within `budget`.
pub fn wf_check_program(e: &ProgramIndex, n_max: u64, budget: u64) -> ProgramWfReport {
    let mut edges = Vec::new();
    for x in 0..=n_max {
        for y in 0..=n_max {
            let inputs = [BigUint::from(x), BigUint::from(y)];
            match evaluate_index(e, &inputs, budget) {
                Evaluation::Halted { output, .. } => {
                    if output == BigUint::from(1u32) {
                        edges.push((y, x));
                    }
                }
                Evaluation::OutOfBudget { .. } => return ProgramWfReport::Unknown { x, y },
            }
        }
    }
    let rel = FiniteRelation::new(0..=n_max, edges).expect("edges within domain");
    ProgramWfReport::Known(wf_check(&rel))
}
