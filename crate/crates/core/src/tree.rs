//! Computable trees of finite strings and their finite cross-sections.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::diagonal::{dnr_consistent_cached, DiagonalTable, KString};

/// Largest `k^depth` enumerated exhaustively (`2^24`).
pub const LEVEL_SET_MAX: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("{k}^{depth} strings exceed the enumeration guard")]
    DepthTooLarge { k: u64, depth: u64 },
}

type Evaluator = dyn Fn(&KString) -> bool + Send + Sync;

/// A decidable, prefix-closed set of strings over `{0, …, k−1}`.
#[derive(Clone)]
pub struct TreePredicate {
    k: u64,
    tag: String,
    evaluator: Arc<Evaluator>,
}

impl fmt::Debug for TreePredicate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TreePredicate")
            .field("k", &self.k)
            .field("tag", &self.tag)
            .finish()
    }
}

impl TreePredicate {
    /// `evaluator` must be prefix-closed; [`TreePredicate::accepts`] does not
    /// re-check prefixes.
    pub fn new(
        k: u64,
        tag: impl Into<String>,
        evaluator: impl Fn(&KString) -> bool + Send + Sync + 'static,
    ) -> Self {
        TreePredicate {
            k: k.max(2),
            tag: tag.into(),
            evaluator: Arc::new(evaluator),
        }
    }

    /// The full tree.
    pub fn full(k: u64) -> Self {
        TreePredicate::new(k, "full", |_| true)
    }

    /// Turns any predicate into a prefix-closed one: a string is accepted when
    /// it and all its prefixes satisfy `test`.
    pub fn prefix_closure(
        k: u64,
        tag: impl Into<String>,
        test: impl Fn(&KString) -> bool + Send + Sync + 'static,
    ) -> Self {
        TreePredicate::new(k, tag, move |s| (0..=s.len()).all(|n| test(&s.prefix(n))))
    }

    pub fn k(&self) -> u64 {
        self.k
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    pub fn accepts(&self, s: &KString) -> bool {
        (self.evaluator)(s)
    }
}

/// Strings consistent with the diagonal at `budget`. Prefix-closed because
/// consistency only ever looks at positions already present.
pub fn dnr2_predicate(budget: u64) -> TreePredicate {
    dnr_predicate(2, budget)
}

pub fn dnr_predicate(k: u64, budget: u64) -> TreePredicate {
    let table = Arc::new(DiagonalTable::new(budget));
    TreePredicate::new(k, format!("dnr{k}@{budget}"), move |s| {
        dnr_consistent_cached(s, &table).consistent
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LevelSet {
    pub depth: u64,
    pub members: Vec<KString>,
    pub predicate: String,
}

impl LevelSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Members as an indented tree, one node per line.
    pub fn render_tree(&self) -> String {
        let mut out = String::new();
        let mut prev: Option<&KString> = None;
        for m in &self.members {
            // members are sorted, so shared prefixes are adjacent
            let shared = prev.map_or(0, |p| {
                p.values()
                    .iter()
                    .zip(m.values())
                    .take_while(|(a, b)| a == b)
                    .count()
            });
            for n in shared..m.len() {
                out.push_str(&"  ".repeat(n));
                out.push_str(&m.values()[n].to_string());
                out.push('\n');
            }
            prev = Some(m);
        }
        out
    }
}

fn check_guard(k: u64, depth: u64) -> Result<(), TreeError> {
    let fits = u32::try_from(depth)
        .ok()
        .and_then(|d| k.checked_pow(d))
        .is_some_and(|n| n <= LEVEL_SET_MAX);
    if fits {
        Ok(())
    } else {
        Err(TreeError::DepthTooLarge { k, depth })
    }
}

/// Accepted strings of length `depth`, in lexicographic order. Rejected nodes
/// are not expanded, which prefix-closure makes sound.
pub fn level_set(v: &TreePredicate, depth: u64) -> Result<LevelSet, TreeError> {
    check_guard(v.k(), depth)?;
    let mut members = Vec::new();
    let root = KString::empty(v.k());
    if v.accepts(&root) {
        let mut stack = vec![root];
        while let Some(s) = stack.pop() {
            if s.len() as u64 == depth {
                members.push(s);
                continue;
            }
            for c in (0..v.k()).rev() {
                let child = s.extended(c);
                if v.accepts(&child) {
                    stack.push(child);
                }
            }
        }
    }
    Ok(LevelSet {
        depth,
        members,
        predicate: v.tag().to_string(),
    })
}

/// Least accepted string of length `depth`, found depth-first. Works beyond
/// the enumeration guard.
pub fn leftmost_member(v: &TreePredicate, depth: u64) -> Option<KString> {
    fn go(v: &TreePredicate, s: KString, depth: u64) -> Option<KString> {
        if s.len() as u64 == depth {
            return Some(s);
        }
        (0..v.k()).find_map(|c| {
            let child = s.extended(c);
            if v.accepts(&child) {
                go(v, child, depth)
            } else {
                None
            }
        })
    }
    let root = KString::empty(v.k());
    if v.accepts(&root) {
        go(v, root, depth)
    } else {
        None
    }
}

/// Whether no extension of `s` by `lookahead` symbols is accepted.
pub fn is_dead(s: &KString, v: &TreePredicate, lookahead: u64) -> Result<bool, TreeError> {
    check_guard(v.k(), lookahead)?;
    let target = s.len() as u64 + lookahead;
    if !v.accepts(s) {
        return Ok(true);
    }
    fn alive(v: &TreePredicate, s: KString, target: u64) -> bool {
        if s.len() as u64 == target {
            return true;
        }
        (0..v.k()).any(|c| {
            let child = s.extended(c);
            v.accepts(&child) && alive(v, child, target)
        })
    }
    Ok(!alive(v, s.clone(), target))
}

/// All `k^depth` strings filtered by the predicate; the exhaustive oracle for
/// [`level_set`].
pub fn brute_force_level_set(v: &TreePredicate, depth: u64) -> Result<Vec<KString>, TreeError> {
    check_guard(v.k(), depth)?;
    let k = v.k();
    let total = k.pow(depth as u32);
    let mut out = Vec::new();
    for mut n in 0..total {
        let mut values = vec![0; depth as usize];
        for slot in values.iter_mut().rev() {
            *slot = n % k;
            n /= k;
        }
        let s = KString::new(values, k).expect("digits below k");
        if v.accepts(&s) {
            out.push(s);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ks(v: &[u64]) -> KString {
        KString::new(v.to_vec(), 2).unwrap()
    }

    #[test]
    fn full_and_half_trees() {
        assert_eq!(level_set(&TreePredicate::full(2), 3).unwrap().len(), 8);
        let half = TreePredicate::new(2, "starts-0", |s: &KString| s.get(0) != Some(1));
        let level = level_set(&half, 3).unwrap();
        assert_eq!(level.len(), 4);
        assert!(level.members.iter().all(|s| s.get(0) == Some(0)));
        assert!(level.members.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn leftmost() {
        assert_eq!(
            leftmost_member(&TreePredicate::full(2), 5),
            Some(ks(&[0; 5]))
        );
        let no_zero = TreePredicate::new(2, "no-0", |s: &KString| !s.values().contains(&0));
        assert_eq!(leftmost_member(&no_zero, 5), Some(ks(&[1; 5])));
        let none = TreePredicate::new(2, "empty", |s: &KString| s.len() < 2);
        assert_eq!(leftmost_member(&none, 3), None);
    }

    #[test]
    fn guard() {
        assert_eq!(check_guard(2, 24), Ok(()));
        assert_eq!(
            level_set(&TreePredicate::full(2), 25),
            Err(TreeError::DepthTooLarge { k: 2, depth: 25 })
        );
    }

    #[test]
    fn dead_nodes() {
        let full = TreePredicate::full(2);
        assert!(!is_dead(&ks(&[1, 0]), &full, 3).unwrap());
        let half = TreePredicate::new(2, "starts-0", |s: &KString| s.get(0) != Some(1));
        assert!(is_dead(&ks(&[1]), &half, 0).unwrap());
    }

    #[test]
    fn rendering() {
        let level = level_set(&TreePredicate::full(2), 2).unwrap();
        assert_eq!(level.render_tree(), "0\n  0\n  1\n1\n  0\n  1\n");
    }

    #[test]
    fn budget_zero_constrains_only_zero_step_halts() {
        // indices decoding to the empty program halt in zero steps
        let v = dnr2_predicate(0);
        let level = level_set(&v, 6).unwrap();
        assert_eq!(level.members, brute_force_level_set(&v, 6).unwrap());
        assert!(level.members.iter().all(|s| s.get(0) == Some(1)));
        assert!(!v.accepts(&ks(&[0])));
    }
}
