//! Independent cover minimizer: enumerates antichain covers of a cylinder
//! union top down, materializing each candidate cover, with branch-and-bound
//! pruning on exact partial costs.
//!
//! This is deliberately a different computation from the bottom-up value
//! recursion in `cylinder`: it constructs covers explicitly (cut the current
//! node, or descend into its member-bearing children) and takes the minimum
//! over complete covers. Exponential in the worst case; intended for
//! cross-checking at small generations.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::freqset::CylinderUnion;
use crate::num::powersum::PowerSum;
use crate::num::rational::SRat;
use crate::system::{ExpansionSystem, PathState};
use crate::words::Word;

struct Node<'a> {
    words: &'a [Word],
    depth: usize,
    state: PathState,
}

struct Search<'a> {
    system: &'a ExpansionSystem,
    n: usize,
    s: &'a SRat,
    best: Option<PowerSum>,
    visited: u64,
    budget: u64,
}

/// Minimum of sum |C_i|^s over all antichain covers of the union, found by
/// exhaustive enumeration with pruning.
pub fn min_cover_exhaustive(
    union: &CylinderUnion,
    s: &SRat,
    budget: u64,
) -> Result<PowerSum> {
    let words = union.member_words();
    if words.is_empty() {
        return Ok(PowerSum::zero(s.q()));
    }
    let mut search = Search {
        system: union.system(),
        n: union.generation(),
        s,
        best: None,
        visited: 0,
        budget,
    };
    let root = Node {
        words: &words,
        depth: 0,
        state: union.system().root_state(),
    };
    let mut pending = vec![root];
    search.go(&mut pending, PowerSum::zero(s.q()))?;
    Ok(search.best.expect("at least one cover exists"))
}

impl<'a> Search<'a> {
    fn go(&mut self, pending: &mut Vec<Node<'a>>, cost: PowerSum) -> Result<()> {
        self.visited += 1;
        if self.visited > self.budget {
            return Err(Error::ResourceBudget {
                explored: self.visited,
                budget: self.budget,
                context: "exhaustive cover enumeration".into(),
            });
        }
        if let Some(best) = &self.best {
            if cost.cmp_val(best) != Ordering::Less {
                return Ok(()); // cannot improve
            }
        }
        let node = match pending.pop() {
            None => {
                // complete cover; cost < best by the prune above
                self.best = Some(cost);
                return Ok(());
            }
            Some(node) => node,
        };

        // Option 1: cut at this node.
        let own = pow_of_length(&self.system.state_length(&node.state), self.s);
        let mut cut_cost = cost.clone();
        cut_cost.add_assign(&own);
        let saved_len = pending.len();
        self.go(pending, cut_cost)?;
        debug_assert_eq!(pending.len(), saved_len);

        // Option 2: split into member-bearing children.
        if node.depth < self.n {
            let mut children = Vec::new();
            let mut start = 0usize;
            while start < node.words.len() {
                let d = node.words[start].digits()[node.depth];
                let mut end = start + 1;
                while end < node.words.len() && node.words[end].digits()[node.depth] == d {
                    end += 1;
                }
                let child_state = self
                    .system
                    .push_state(&node.state, d)
                    .expect("members are admissible");
                children.push(Node {
                    words: &node.words[start..end],
                    depth: node.depth + 1,
                    state: child_state,
                });
                start = end;
            }
            let added = children.len();
            pending.extend(children);
            self.go(pending, cost)?;
            pending.truncate(pending.len() - added);
        }

        pending.push(node);
        Ok(())
    }
}

/// |C|^s for exact rational lengths; the exhaustive oracle is used on
/// rational systems only.
fn pow_of_length(len: &crate::num::exact::ExactNum, s: &SRat) -> PowerSum {
    let r = len
        .as_rational()
        .expect("exhaustive oracle needs rational cylinder lengths");
    PowerSum::pow_of_rational(&r, s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::cylinder::cylinder_net_measure;
    use crate::num::rational::rat_u64;
    use std::sync::Arc;

    #[test]
    fn matches_dp_on_three_quarter_example() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let words = vec![
            Word::parse("00", 2).unwrap(),
            Word::parse("01", 2).unwrap(),
            Word::parse("10", 2).unwrap(),
        ];
        let u = CylinderUnion::from_words(Arc::clone(&sys), 2, words).unwrap();
        let s = SRat::one();
        let brute = min_cover_exhaustive(&u, &s, 1 << 20).unwrap();
        assert_eq!(brute.as_rational().unwrap(), rat_u64(3, 4));
        let dp = cylinder_net_measure::<PowerSum>(&u, &s, true);
        assert_eq!(dp.value.cmp_val(&brute), std::cmp::Ordering::Equal);
        // the tie at [0] resolves toward the parent: witness {0, 10}
        let w = dp.witness.unwrap();
        assert_eq!(w, vec![vec![0u8], vec![1, 0]]);
    }

    #[test]
    fn single_cylinder_value() {
        let sys = Arc::new(ExpansionSystem::base(2));
        let u = CylinderUnion::from_words(
            Arc::clone(&sys),
            3,
            vec![Word::parse("010", 2).unwrap()],
        )
        .unwrap();
        let s = SRat::parse("0.9").unwrap();
        let brute = min_cover_exhaustive(&u, &s, 1 << 20).unwrap();
        let dp = cylinder_net_measure::<PowerSum>(&u, &s, false);
        assert_eq!(dp.value.cmp_val(&brute), std::cmp::Ordering::Equal);
        // |C|^s = (1/8)^0.9
        assert!((brute.to_f64() - 0.125f64.powf(0.9)).abs() < 1e-14);
    }
}
