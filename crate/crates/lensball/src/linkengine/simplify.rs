//! Greedy Reidemeister I/II reduction.
//!
//! Not a general simplifier: it removes kinks and cancelling clasp pairs
//! until none remain, which is enough to keep the paper-driven diagrams
//! under the bracket cap. The Jones polynomial is invariant under these
//! rewrites (tested).

use super::pd::PdCode;

/// Repeatedly remove R1 kinks and R2 poke pairs.
pub fn simplify(d: &PdCode) -> PdCode {
    let mut cur = d.clone();
    loop {
        if let Some(next) = reduce_r1(&cur) {
            cur = next;
            continue;
        }
        if let Some(next) = reduce_r2(&cur) {
            cur = next;
            continue;
        }
        return cur;
    }
}

fn reduce_r1(d: &PdCode) -> Option<PdCode> {
    for (ci, x) in d.crossings.iter().enumerate() {
        for j in 0..4 {
            if x.arcs[j] == x.arcs[(j + 1) % 4] {
                let mut out = d.clone();
                let removed = out.crossings.remove(ci);
                out.join_arcs(removed.arcs[(j + 2) % 4], removed.arcs[(j + 3) % 4]);
                return Some(out);
            }
        }
    }
    None
}

fn reduce_r2(d: &PdCode) -> Option<PdCode> {
    let ends = d.arc_ends();
    let n = d.crossings.len();
    for x in 0..n {
        for y in x + 1..n {
            // arcs joining x and y
            let joining: Vec<usize> = d.crossings[x]
                .arcs
                .iter()
                .copied()
                .filter(|a| {
                    let e = &ends[a];
                    e.len() == 2
                        && ((e[0].crossing == x && e[1].crossing == y)
                            || (e[0].crossing == y && e[1].crossing == x))
                })
                .collect();
            for (ai, &alpha) in joining.iter().enumerate() {
                for &beta in joining.iter().skip(ai + 1) {
                    if alpha == beta {
                        continue;
                    }
                    if let Some(out) = try_r2(d, x, y, alpha, beta) {
                        return Some(out);
                    }
                }
            }
        }
    }
    None
}

/// R2 pattern at crossings x, y joined by arcs alpha, beta: the arcs must be
/// cyclically adjacent at both crossings, with one strand over at both
/// crossings and the other under at both.
fn try_r2(d: &PdCode, x: usize, y: usize, alpha: usize, beta: usize) -> Option<PdCode> {
    let slot_of = |c: usize, a: usize| -> Vec<usize> {
        (0..4).filter(|&s| d.crossings[c].arcs[s] == a).collect()
    };
    let (sxa, sxb) = (slot_of(x, alpha), slot_of(x, beta));
    let (sya, syb) = (slot_of(y, alpha), slot_of(y, beta));
    if sxa.len() != 1 || sxb.len() != 1 || sya.len() != 1 || syb.len() != 1 {
        return None;
    }
    let (sxa, sxb, sya, syb) = (sxa[0], sxb[0], sya[0], syb[0]);
    // adjacency at both crossings
    if (sxa + 1) % 4 != sxb && (sxb + 1) % 4 != sxa {
        return None;
    }
    if (sya + 1) % 4 != syb && (syb + 1) % 4 != sya {
        return None;
    }
    // alpha over at both or under at both, beta the other way
    let over = |s: usize| s % 2 == 1;
    if over(sxa) != over(sya) || over(sxb) != over(syb) || over(sxa) == over(sxb) {
        return None;
    }
    // remove both crossings; rejoin the through-strands. The continuation
    // arcs cannot be alpha or beta (those appear exactly once per crossing),
    // so only continuation-vs-continuation collisions need care.
    let mut out = d.clone();
    let cx = d.crossings[x];
    let cy = d.crossings[y];
    out.crossings.remove(y);
    out.crossings.remove(x);
    let gx_a = cx.arcs[(sxa + 2) % 4];
    let gy_a = cy.arcs[(sya + 2) % 4];
    let gx_b = cx.arcs[(sxb + 2) % 4];
    let gy_b = cy.arcs[(syb + 2) % 4];
    if gx_a == gy_a {
        out.free_loops += 1;
    } else {
        out.join_arcs(gx_a, gy_a);
    }
    let m = |a: usize| if gx_a != gy_a && a == gy_a { gx_a } else { a };
    let (p, q) = (m(gx_b), m(gy_b));
    if p == q {
        out.free_loops += 1;
    } else {
        out.join_arcs(p, q);
    }
    out.validate().ok()?;
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linkengine::bracket::jones;
    use crate::linkengine::pd::Crossing;

    #[test]
    fn r1_removal() {
        let d = PdCode::new(vec![Crossing::new([0, 0, 1, 1])], 0);
        let s = simplify(&d);
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.free_loops, 1);
    }

    #[test]
    fn r2_removal() {
        let d = PdCode::new(
            vec![Crossing::new([0, 2, 1, 3]), Crossing::new([1, 2, 0, 3])],
            0,
        );
        let s = simplify(&d);
        assert_eq!(s.crossing_count(), 0);
        assert_eq!(s.free_loops, 2);
    }

    #[test]
    fn trefoil_is_irreducible() {
        let d = PdCode::new(
            vec![
                Crossing::new([3, 0, 2, 5]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([5, 2, 1, 4]),
            ],
            0,
        );
        let s = simplify(&d);
        assert_eq!(s.crossing_count(), 3);
    }

    #[test]
    fn jones_invariant_under_simplify() {
        // trefoil with an added kink: arc 5 split into 5, 6 with a curl 7
        let d = PdCode::new(
            vec![
                Crossing::new([3, 0, 2, 5]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([6, 2, 1, 4]),
                Crossing::new([5, 7, 7, 6]),
            ],
            0,
        );
        let kinked = d.validate();
        assert!(kinked.is_ok(), "{kinked:?}");
        let s = simplify(&d);
        assert_eq!(s.crossing_count(), 3);
        assert_eq!(jones(&d).unwrap(), jones(&s).unwrap());
    }
}
