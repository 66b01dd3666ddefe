#![allow(dead_code)]

use std::collections::BTreeSet;

use subjparse::{GenLimits, ProhibitionTable, TagId, TagLattice, TagSet};

/// (tag string, open word, close word) triples produced by plain enumeration:
/// every full tag assignment times every bracket placement, truncated and then
/// filtered by the table.
pub fn brute_force(
    lattice: &TagLattice,
    limits: &GenLimits,
    table: &ProhibitionTable,
    tagset: &TagSet,
) -> BTreeSet<(Vec<TagId>, usize, usize)> {
    let n = lattice.len();
    let endp = tagset.id("endp");
    let bracketable = if n > 1 && endp.is_some() && lattice.slots[n - 1] == vec![endp.unwrap()] {
        n - 1
    } else {
        n
    };
    let mut assignments: Vec<Vec<TagId>> = vec![Vec::new()];
    for slot in &lattice.slots {
        let mut next = Vec::new();
        for a in &assignments {
            for &t in slot {
                let mut b = a.clone();
                b.push(t);
                next.push(b);
            }
        }
        assignments = next;
    }
    let mut out = BTreeSet::new();
    for open in 0..bracketable {
        for close in open + 1..=bracketable {
            if open > limits.max_presubject || close - open > limits.max_subject {
                continue;
            }
            let keep = (close + limits.truncate_after).min(n);
            for a in &assignments {
                let mut s = vec![tagset.start_id()];
                for (i, &t) in a.iter().enumerate().take(keep) {
                    if i == open {
                        s.push(tagset.open_id());
                    }
                    if i == close {
                        s.push(tagset.close_id());
                    }
                    s.push(t);
                }
                if close == keep {
                    s.push(tagset.close_id());
                }
                let banned = s.windows(2).any(|w| table.pair_banned(w[0], w[1]))
                    || s.windows(3).any(|w| table.triple_banned(w[0], w[1], w[2]));
                if !banned {
                    out.insert((s, open, close));
                }
            }
        }
    }
    out
}

/// Lattice over the given POS tag names, one `|`-separated slot per word.
pub fn lattice(tagset: &TagSet, slots: &[&str]) -> TagLattice {
    TagLattice::from_slots(
        slots
            .iter()
            .map(|s| s.split('|').map(|t| tagset.require(t).unwrap()).collect())
            .collect(),
    )
}
