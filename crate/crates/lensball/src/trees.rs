//! The inverse Stern-Brocot tree W1, the Stern-Brocot tree W2, and the two
//! string recursions generating the expansions of `p^2/(pq-1)` (from `[4]`)
//! and `p^2/(pq+1)` (from `[2,2,2]`).
//!
//! W1 is rooted at (2,1) with children `(p,q) -> (p+q, q)` and
//! `(p,q) -> (2p-q, p)`; W2 carries the same tree with each label replaced by
//! `(p, q^{-1} mod p)`.

use crate::error::{domain, Error, Result};
use crate::hjcf::{self, HjString};
use num_bigint::BigInt;
use num_traits::One;
use std::collections::BTreeSet;
use std::fmt;

pub const MAX_DEPTH: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Variant {
    W1,
    W2,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
pub enum Dir {
    L,
    R,
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dir::L => write!(f, "L"),
            Dir::R => write!(f, "R"),
        }
    }
}

/// A tree node: a coprime pair with the L/R path that reaches it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NodeLabel {
    pub p: BigInt,
    pub q: BigInt,
    pub path: Vec<Dir>,
}

impl NodeLabel {
    pub fn root() -> Self {
        NodeLabel {
            p: BigInt::from(2),
            q: BigInt::one(),
            path: Vec::new(),
        }
    }

    pub fn depth(&self) -> usize {
        self.path.len()
    }

    pub fn pair_u64(&self) -> Option<(u64, u64)> {
        Some((u64::try_from(&self.p).ok()?, u64::try_from(&self.q).ok()?))
    }
}

/// W1 children: left `(p+q, q)`, right `(2p-q, p)`.
pub fn children_w1(label: &NodeLabel) -> (NodeLabel, NodeLabel) {
    let mut lp = label.path.clone();
    lp.push(Dir::L);
    let mut rp = label.path.clone();
    rp.push(Dir::R);
    (
        NodeLabel {
            p: &label.p + &label.q,
            q: label.q.clone(),
            path: lp,
        },
        NodeLabel {
            p: BigInt::from(2) * &label.p - &label.q,
            q: label.p.clone(),
            path: rp,
        },
    )
}

/// The W2 relabel of a W1 node: `(p, q^{-1} mod p)`.
pub fn label_w2(label: &NodeLabel) -> Result<NodeLabel> {
    Ok(NodeLabel {
        p: label.p.clone(),
        q: hjcf::mod_inverse(&label.q, &label.p)?,
        path: label.path.clone(),
    })
}

/// Breadth-first listing of all nodes with depth <= `depth`.
pub fn enumerate(variant: Variant, depth: usize) -> Result<Vec<NodeLabel>> {
    if depth > MAX_DEPTH {
        return Err(Error::DepthOverflow {
            requested: depth,
            bound: MAX_DEPTH,
        });
    }
    let mut out = Vec::new();
    let mut level = vec![NodeLabel::root()];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for node in &level {
            out.push(match variant {
                Variant::W1 => node.clone(),
                Variant::W2 => label_w2(node)?,
            });
            let (l, r) = children_w1(node);
            next.push(l);
            next.push(r);
        }
        level = next;
    }
    Ok(out)
}

/// All W1 labels with `p <= bound`, found by pruned depth-first search
/// (children strictly increase p, so pruning is sound).
pub fn labels_up_to(bound: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    let mut stack = vec![NodeLabel::root()];
    let big_bound = BigInt::from(bound);
    while let Some(node) = stack.pop() {
        if node.p > big_bound {
            continue;
        }
        out.push(node.pair_u64().expect("within bound"));
        let (l, r) = children_w1(&node);
        stack.push(l);
        stack.push(r);
    }
    out
}

/// First string recursion: `[c1..ck] -> [c1+1,..,ck,2]` and `[2,c1,..,ck+1]`.
pub fn s1_step(s: &HjString) -> (HjString, HjString) {
    let mut left = s.coeffs().to_vec();
    left[0] += 1;
    left.push(BigInt::from(2));
    let mut right = vec![BigInt::from(2)];
    right.extend(s.coeffs().iter().cloned());
    let last = right.len() - 1;
    right[last] += 1;
    (
        HjString::new(left).expect("nonempty"),
        HjString::new(right).expect("nonempty"),
    )
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Family {
    /// Strings `[a1,..,a(k-1), ak+bl, b(l-1),..,b1]`; the center coefficient
    /// is the marked sum.
    Minus,
    /// Strings `[a1,..,ak, 2, bl,..,b1]`; the center is the separator 2.
    Plus,
}

/// A Wahl string with its marked center and the split of the center into the
/// last a-coefficient and last b-coefficient. The split is stored explicitly
/// so the second recursion is a total function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct WahlString {
    coeffs: Vec<BigInt>,
    center: usize,
    a_last: BigInt,
    b_last: BigInt,
    family: Family,
}

impl WahlString {
    /// Root of the minus family: `[4] = [2+2]`.
    pub fn root_minus() -> Self {
        WahlString {
            coeffs: vec![BigInt::from(4)],
            center: 0,
            a_last: BigInt::from(2),
            b_last: BigInt::from(2),
            family: Family::Minus,
        }
    }

    /// Root of the plus family: `[2,2,2]`.
    pub fn root_plus() -> Self {
        WahlString {
            coeffs: vec![BigInt::from(2), BigInt::from(2), BigInt::from(2)],
            center: 1,
            a_last: BigInt::from(2),
            b_last: BigInt::from(2),
            family: Family::Plus,
        }
    }

    /// The marked string for a given coprime pair, with the center index and
    /// split recovered from the defining concatenation.
    pub fn for_pair(p: u64, q: u64, family: Family) -> Result<Self> {
        let pb = BigInt::from(p);
        let qb = BigInt::from(q);
        let a = hjcf::hj_expand(&pb, &qb)?;
        let b = hjcf::hj_expand(&pb, &(&pb - &qb))?;
        let a_last = a.coeffs().last().expect("nonempty").clone();
        let b_last = b.coeffs().last().expect("nonempty").clone();
        let (string, center) = match family {
            Family::Minus => (hjcf::wahl_minus(&pb, &qb)?, a.len() - 1),
            Family::Plus => (hjcf::wahl_plus(&pb, &qb)?, a.len()),
        };
        Ok(WahlString {
            coeffs: string.coeffs().to_vec(),
            center,
            a_last,
            b_last,
            family,
        })
    }

    pub fn string(&self) -> HjString {
        HjString::new(self.coeffs.clone()).expect("nonempty")
    }

    pub fn center(&self) -> usize {
        self.center
    }

    pub fn split(&self) -> (&BigInt, &BigInt) {
        (&self.a_last, &self.b_last)
    }

    pub fn family(&self) -> Family {
        self.family
    }

    fn check(&self) -> Result<()> {
        let c = self
            .coeffs
            .get(self.center)
            .ok_or_else(|| domain("center out of range"))?;
        match self.family {
            Family::Minus => {
                if *c != &self.a_last + &self.b_last {
                    return Err(domain(format!(
                        "center coefficient {c} is not split {} + {}",
                        self.a_last, self.b_last
                    )));
                }
            }
            Family::Plus => {
                if *c != BigInt::from(2) {
                    return Err(domain("plus-family center must be 2"));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for WahlString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (center {})", self.string(), self.center)
    }
}

/// Second recursion (center insertion). For the minus family
/// `[.., ak+bl, ..] -> [.., (ak+1)+2, bl, ..]` or `[.., ak, 2+(bl+1), ..]`;
/// for the plus family the separator moves per
/// `[.., ak, 2, bl, ..] -> [.., ak+1, 2, 2, bl, ..]` or `[.., ak, 2, 2, bl+1, ..]`.
pub fn s2_step(w: &WahlString) -> Result<(WahlString, WahlString)> {
    w.check()?;
    let two = BigInt::from(2);
    match w.family {
        Family::Minus => {
            let mut left = w.coeffs.clone();
            left[w.center] = &w.a_last + BigInt::from(3); // (a_k + 1) + 2
            left.insert(w.center + 1, w.b_last.clone());
            let left = WahlString {
                coeffs: left,
                center: w.center,
                a_last: &w.a_last + 1,
                b_last: two.clone(),
                family: Family::Minus,
            };

            let mut right = w.coeffs.clone();
            right[w.center] = w.a_last.clone();
            right.insert(w.center + 1, &w.b_last + BigInt::from(3)); // 2 + (b_l + 1)
            let right = WahlString {
                coeffs: right,
                center: w.center + 1,
                a_last: two,
                b_last: &w.b_last + 1,
                family: Family::Minus,
            };
            Ok((left, right))
        }
        Family::Plus => {
            let mut left = w.coeffs.clone();
            left[w.center - 1] += 1;
            left.insert(w.center + 1, two.clone());
            let left = WahlString {
                coeffs: left,
                center: w.center,
                a_last: &w.a_last + 1,
                b_last: two.clone(),
                family: Family::Plus,
            };

            let mut right = w.coeffs.clone();
            right[w.center + 1] += 1;
            right.insert(w.center + 1, two.clone());
            let right = WahlString {
                coeffs: right,
                center: w.center + 1,
                a_last: two,
                b_last: &w.b_last + 1,
                family: Family::Plus,
            };
            Ok((left, right))
        }
    }
}

/// One row of the enumeration report for `verify_lemma_wahl`.
#[derive(Clone, Debug)]
pub struct LemmaWahlReport {
    pub family: &'static str,
    pub depth: usize,
    pub count: usize,
    pub pass: bool,
    pub detail: String,
}

fn verify_family(family: Family, depth: usize) -> Result<LemmaWahlReport> {
    // S1 iteration
    let base = match family {
        Family::Minus => HjString::from_ints(&[4]),
        Family::Plus => HjString::from_ints(&[2, 2, 2]),
    };
    let mut s1: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut level = vec![base];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for s in &level {
            s1.insert(s.coeffs().to_vec());
            let (l, r) = s1_step(s);
            next.push(l);
            next.push(r);
        }
        level = next;
    }

    // S2 iteration
    let mut s2: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut level2 = vec![match family {
        Family::Minus => WahlString::root_minus(),
        Family::Plus => WahlString::root_plus(),
    }];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for w in &level2 {
            s2.insert(w.coeffs.clone());
            let (l, r) = s2_step(w)?;
            next.push(l);
            next.push(r);
        }
        level2 = next;
    }

    // Reference: concatenation strings over tree labels down to this depth.
    let mut reference: BTreeSet<Vec<BigInt>> = BTreeSet::new();
    let mut level3 = vec![NodeLabel::root()];
    for _ in 0..=depth {
        let mut next = Vec::new();
        for node in &level3 {
            let s = match family {
                Family::Minus => hjcf::wahl_minus(&node.p, &node.q)?,
                Family::Plus => hjcf::wahl_plus(&node.p, &node.q)?,
            };
            reference.insert(s.coeffs().to_vec());
            let (l, r) = children_w1(node);
            next.push(l);
            next.push(r);
        }
        level3 = next;
    }

    let expected = (1usize << (depth + 1)) - 1;
    let pass = s1 == s2 && s2 == reference && s1.len() == expected;
    let detail = if pass {
        format!("S1 = S2 = {{concatenation strings}}, {} strings", s1.len())
    } else {
        let first_diff = s1
            .iter()
            .find(|s| !s2.contains(*s) || !reference.contains(*s))
            .or_else(|| s2.iter().find(|s| !s1.contains(*s)))
            .or_else(|| reference.iter().find(|s| !s1.contains(*s)));
        format!(
            "set sizes {}/{}/{} (expected {expected}), first offender {:?}",
            s1.len(),
            s2.len(),
            reference.len(),
            first_diff
        )
    };
    Ok(LemmaWahlReport {
        family: match family {
            Family::Minus => "minus",
            Family::Plus => "plus",
        },
        depth,
        count: s1.len(),
        pass,
        detail,
    })
}

/// Checks that both recursions and the concatenation formula generate the
/// same string sets down to `depth`, for both families. Any mismatch is
/// reported with the offending string.
pub fn verify_lemma_wahl(depth: usize) -> Result<Vec<LemmaWahlReport>> {
    if depth > 12 {
        return Err(Error::DepthOverflow {
            requested: depth,
            bound: 12,
        });
    }
    Ok(vec![
        verify_family(Family::Minus, depth)?,
        verify_family(Family::Plus, depth)?,
    ])
}

/// DOT rendering of the labelled tree.
pub fn to_dot(variant: Variant, depth: usize) -> Result<String> {
    let nodes = enumerate(variant, depth)?;
    let mut out = String::from("digraph tree {\n  node [shape=box];\n");
    for n in &nodes {
        let id: String = if n.path.is_empty() {
            "root".to_string()
        } else {
            n.path.iter().map(|d| d.to_string()).collect()
        };
        out.push_str(&format!("  \"{}\" [label=\"({},{})\"];\n", id, n.p, n.q));
        if !n.path.is_empty() {
            let parent: String = if n.path.len() == 1 {
                "root".to_string()
            } else {
                n.path[..n.path.len() - 1].iter().map(|d| d.to_string()).collect()
            };
            out.push_str(&format!("  \"{}\" -> \"{}\";\n", parent, id));
        }
    }
    out.push_str("}\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_integer::Integer;

    fn pair(node: &NodeLabel) -> (u64, u64) {
        node.pair_u64().unwrap()
    }

    #[test]
    fn children_anchors() {
        let root = NodeLabel::root();
        let (l, r) = children_w1(&root);
        assert_eq!(pair(&l), (3, 1));
        assert_eq!(pair(&r), (3, 2));
        let (l2, r2) = children_w1(&r);
        assert_eq!(pair(&l2), (5, 2));
        assert_eq!(pair(&r2), (4, 3));
        let (l3, r3) = children_w1(&l);
        assert_eq!(pair(&l3), (4, 1));
        assert_eq!(pair(&r3), (5, 3));
    }

    #[test]
    fn w2_anchors() {
        let mk = |p: u64, q: u64| NodeLabel {
            p: BigInt::from(p),
            q: BigInt::from(q),
            path: vec![],
        };
        assert_eq!(pair(&label_w2(&mk(2, 1)).unwrap()), (2, 1));
        assert_eq!(pair(&label_w2(&mk(5, 3)).unwrap()), (5, 2));
        assert_eq!(pair(&label_w2(&mk(4, 3)).unwrap()), (4, 3));
    }

    #[test]
    fn enumerate_anchors() {
        let w1: Vec<_> = enumerate(Variant::W1, 1).unwrap().iter().map(pair).collect();
        assert_eq!(w1, vec![(2, 1), (3, 1), (3, 2)]);
        let w2: Vec<_> = enumerate(Variant::W2, 1).unwrap().iter().map(pair).collect();
        assert_eq!(w2, vec![(2, 1), (3, 1), (3, 2)]);
        let w0: Vec<_> = enumerate(Variant::W1, 0).unwrap().iter().map(pair).collect();
        assert_eq!(w0, vec![(2, 1)]);
        assert!(enumerate(Variant::W1, 21).is_err());
    }

    #[test]
    fn w2_is_involution_nodewise() {
        for node in enumerate(Variant::W1, 6).unwrap() {
            let relabel = label_w2(&node).unwrap();
            let back = label_w2(&relabel).unwrap();
            assert_eq!(back.q, node.q);
        }
    }

    #[test]
    fn coverage_up_to_100() {
        let mut seen = labels_up_to(100);
        seen.sort_unstable();
        let mut expected: Vec<(u64, u64)> = hjcf::coprime_pairs(100).collect();
        expected.sort_unstable();
        assert_eq!(seen, expected);
        for w in seen.windows(2) {
            assert_ne!(w[0], w[1]);
        }
    }

    #[test]
    fn s1_anchors() {
        let (l, r) = s1_step(&HjString::from_ints(&[4]));
        assert_eq!(l, HjString::from_ints(&[5, 2]));
        assert_eq!(r, HjString::from_ints(&[2, 5]));
        let (l, r) = s1_step(&HjString::from_ints(&[5, 2]));
        assert_eq!(l, HjString::from_ints(&[6, 2, 2]));
        assert_eq!(r, HjString::from_ints(&[2, 5, 3]));
        let (l, r) = s1_step(&HjString::from_ints(&[2, 2, 2]));
        assert_eq!(l, HjString::from_ints(&[3, 2, 2, 2]));
        assert_eq!(r, HjString::from_ints(&[2, 2, 2, 3]));
    }

    #[test]
    fn s2_minus_anchors() {
        let (l, r) = s2_step(&WahlString::root_minus()).unwrap();
        assert_eq!(l.string(), HjString::from_ints(&[5, 2]));
        assert_eq!(r.string(), HjString::from_ints(&[2, 5]));

        // (7,5) as a W2 label: its W1 counterpart is (7,3); the W2 relabels of
        // the W1 children (10,3) and (11,7) are (10,7) and (11,8).
        let w = WahlString::for_pair(7, 5, Family::Minus).unwrap();
        assert_eq!(w.string(), HjString::from_ints(&[2, 2, 5, 4]));
        assert_eq!(w.center(), 2);
        let (l, r) = s2_step(&w).unwrap();
        assert_eq!(l.string(), hjcf::wahl_minus_u(10, 7).unwrap());
        assert_eq!(l.string(), HjString::from_ints(&[2, 2, 6, 2, 4]));
        assert_eq!(r.string(), hjcf::wahl_minus_u(11, 8).unwrap());
        assert_eq!(r.string(), HjString::from_ints(&[2, 2, 3, 5, 4]));
    }

    #[test]
    fn s2_plus_anchors() {
        let (l, r) = s2_step(&WahlString::root_plus()).unwrap();
        assert_eq!(l.string(), HjString::from_ints(&[3, 2, 2, 2]));
        assert_eq!(r.string(), HjString::from_ints(&[2, 2, 2, 3]));
    }

    #[test]
    fn s2_children_match_w2_relabels() {
        let mut level = vec![NodeLabel::root()];
        for _ in 0..5 {
            let mut next = Vec::new();
            for node in &level {
                let w2 = label_w2(node).unwrap();
                let (p, q) = pair(&w2);
                let (cl, cr) = children_w1(node);
                let w2l = label_w2(&cl).unwrap();
                let w2r = label_w2(&cr).unwrap();

                let marked = WahlString::for_pair(p, q, Family::Minus).unwrap();
                let (sl, sr) = s2_step(&marked).unwrap();
                assert_eq!(sl.string(), hjcf::wahl_minus(&w2l.p, &w2l.q).unwrap());
                assert_eq!(sr.string(), hjcf::wahl_minus(&w2r.p, &w2r.q).unwrap());

                let marked = WahlString::for_pair(p, q, Family::Plus).unwrap();
                let (sl, sr) = s2_step(&marked).unwrap();
                assert_eq!(sl.string(), hjcf::wahl_plus(&w2l.p, &w2l.q).unwrap());
                assert_eq!(sr.string(), hjcf::wahl_plus(&w2r.p, &w2r.q).unwrap());

                next.push(cl);
                next.push(cr);
            }
            level = next;
        }
    }

    #[test]
    fn lemma_wahl_small_depths() {
        for depth in 0..=6 {
            let reports = verify_lemma_wahl(depth).unwrap();
            for r in &reports {
                assert!(r.pass, "family {} depth {depth}: {}", r.family, r.detail);
            }
        }
        let d0 = verify_lemma_wahl(0).unwrap();
        assert_eq!(d0[0].count, 1);
        let d3 = verify_lemma_wahl(3).unwrap();
        assert_eq!(d3[1].count, 15); // 8 strings at depth 3, 15 in total
        assert!(verify_lemma_wahl(13).is_err());
    }

    #[test]
    fn s1_length_and_sum_growth() {
        // at depth d: length d+1 and coefficient sum 3d+4 for the minus family
        let mut level = vec![HjString::from_ints(&[4])];
        for d in 0..8 {
            for s in &level {
                assert_eq!(s.len(), d + 1);
                assert_eq!(s.coeff_sum(), BigInt::from(3 * d as i64 + 4));
            }
            level = level
                .iter()
                .flat_map(|s| {
                    let (l, r) = s1_step(s);
                    [l, r]
                })
                .collect();
        }
    }

    #[test]
    fn eq_cf_on_tree_edges() {
        for node in enumerate(Variant::W1, 6).unwrap() {
            let (p, q) = pair(&node);
            assert!(hjcf::eq_cf_holds(p, q).unwrap());
        }
    }

    #[test]
    fn depth_labels_are_coprime() {
        for node in enumerate(Variant::W1, 8).unwrap() {
            let (p, q) = pair(&node);
            assert!(p > q && q >= 1);
            assert_eq!(p.gcd(&q), 1);
        }
    }
}
