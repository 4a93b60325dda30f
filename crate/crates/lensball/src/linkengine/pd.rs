//! Planar-diagram codes for link diagrams.
//!
//! A crossing stores its four incident arc identifiers in counterclockwise
//! order; the arcs in slots 0 and 2 form the under-strand, slots 1 and 3 the
//! over-strand. Arc identifiers are arbitrary `usize` values, each appearing
//! exactly twice over all slots. Crossing-free circle components are counted
//! separately in `free_loops`.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap};

pub type ArcId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Crossing {
    pub arcs: [ArcId; 4],
}

impl Crossing {
    pub fn new(arcs: [ArcId; 4]) -> Self {
        Crossing { arcs }
    }
}

/// An endpoint of an arc: which crossing, which slot.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct End {
    pub crossing: usize,
    pub slot: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct PdCode {
    pub crossings: Vec<Crossing>,
    pub free_loops: usize,
}

impl PdCode {
    pub fn new(crossings: Vec<Crossing>, free_loops: usize) -> Self {
        PdCode {
            crossings,
            free_loops,
        }
    }

    pub fn empty_unlink(n: usize) -> Self {
        PdCode {
            crossings: Vec::new(),
            free_loops: n,
        }
    }

    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    /// Map from arc id to its (one or two) endpoints, in slot-scan order.
    pub fn arc_ends(&self) -> BTreeMap<ArcId, Vec<End>> {
        let mut map: BTreeMap<ArcId, Vec<End>> = BTreeMap::new();
        for (ci, x) in self.crossings.iter().enumerate() {
            for (slot, &a) in x.arcs.iter().enumerate() {
                map.entry(a).or_default().push(End { crossing: ci, slot });
            }
        }
        map
    }

    pub fn arc_ids(&self) -> BTreeSet<ArcId> {
        self.arc_ends().keys().copied().collect()
    }

    pub fn max_arc_id(&self) -> ArcId {
        self.arc_ids().last().copied().map_or(0, |m| m + 1)
    }

    /// Structural validation: every arc id appears exactly twice, and each
    /// connected component of the 4-valent graph satisfies Euler's formula
    /// (so the code is realizable in the plane, not a higher-genus surface).
    pub fn validate(&self) -> Result<()> {
        for (a, ends) in self.arc_ends() {
            if ends.len() != 2 {
                return Err(Error::MalformedDiagram(format!(
                    "arc {a} appears {} times (want 2)",
                    ends.len()
                )));
            }
        }
        if !self.crossings.is_empty() {
            let v = self.crossings.len() as i64;
            let e = 2 * v;
            let f = self.face_count() as i64;
            let c = self.connected_pieces() as i64;
            if v - e + f != 2 * c {
                return Err(Error::MalformedDiagram(format!(
                    "Euler check failed: V={v} E={e} F={f} pieces={c}"
                )));
            }
        }
        Ok(())
    }

    /// Connected components of the crossing graph (ignoring free loops).
    pub fn connected_pieces(&self) -> usize {
        let n = self.crossings.len();
        if n == 0 {
            return 0;
        }
        let ends = self.arc_ends();
        let mut uf = UnionFind::new(n);
        for ends in ends.values() {
            if ends.len() == 2 {
                uf.union(ends[0].crossing, ends[1].crossing);
            }
        }
        uf.class_count()
    }

    /// Number of link components (closed strands), including free loops.
    pub fn component_count(&self) -> usize {
        self.component_map().1 + self.free_loops
    }

    /// Per-arc component index (free loops not included) plus the number of
    /// traced components.
    pub fn component_map(&self) -> (BTreeMap<ArcId, usize>, usize) {
        let ends = self.arc_ends();
        let mut comp: BTreeMap<ArcId, usize> = BTreeMap::new();
        let mut n = 0;
        for &start in ends.keys() {
            if comp.contains_key(&start) {
                continue;
            }
            // walk the strand through crossings
            let mut arc = start;
            let mut from = ends[&arc][0];
            loop {
                comp.insert(arc, n);
                // travel to the other endpoint of `arc`
                let pair = &ends[&arc];
                let to = if pair[0] == from { pair[1] } else { pair[0] };
                // pass through the crossing: slot s connects to s+2 mod 4
                let exit_slot = (to.slot + 2) % 4;
                let next = self.crossings[to.crossing].arcs[exit_slot];
                if comp.contains_key(&next) {
                    break;
                }
                from = End {
                    crossing: to.crossing,
                    slot: exit_slot,
                };
                arc = next;
            }
            n += 1;
        }
        (comp, n)
    }

    /// Faces of the diagram as cycles of directed arcs, traced by the
    /// left-turn rule (enter slot i, leave slot i+1).
    ///
    /// Each directed arc is (arc, destination end index in `arc_ends` order).
    pub fn faces(&self) -> Vec<Vec<(ArcId, usize)>> {
        let ends = self.arc_ends();
        let mut visited: BTreeSet<(ArcId, usize)> = BTreeSet::new();
        let mut faces = Vec::new();
        for (&arc, _) in ends.iter() {
            for dir in 0..2 {
                if visited.contains(&(arc, dir)) {
                    continue;
                }
                let mut face = Vec::new();
                let mut cur = (arc, dir);
                loop {
                    face.push(cur);
                    visited.insert(cur);
                    let dest: End = ends[&cur.0][cur.1];
                    let next_slot = (dest.slot + 1) % 4;
                    let next_arc = self.crossings[dest.crossing].arcs[next_slot];
                    let next_start = End {
                        crossing: dest.crossing,
                        slot: next_slot,
                    };
                    // directed copy of next_arc leaving next_start
                    let pair = &ends[&next_arc];
                    let to_idx = if pair[0] == next_start { 1 } else { 0 };
                    cur = (next_arc, to_idx);
                    if cur == (arc, dir) {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    /// For each crossing, the face index occupying each of its four corners;
    /// corner j spans slots j and j+1 and is the face of the directed arc
    /// arriving at slot j.
    pub fn corner_faces(&self) -> Vec<[usize; 4]> {
        let ends = self.arc_ends();
        let faces = self.faces();
        // directed arc -> face index
        let mut face_of: HashMap<(ArcId, usize), usize> = HashMap::new();
        for (fi, face) in faces.iter().enumerate() {
            for &da in face {
                face_of.insert(da, fi);
            }
        }
        let mut out = vec![[usize::MAX; 4]; self.crossings.len()];
        for (ci, x) in self.crossings.iter().enumerate() {
            for slot in 0..4 {
                let a = x.arcs[slot];
                let pair = &ends[&a];
                let here = End { crossing: ci, slot };
                // directed copy of `a` arriving here
                let to_idx = if pair[0] == here { 0 } else { 1 };
                // if both endpoints equal `here` is impossible; if the arc is
                // a loop at this crossing with both ends here at different
                // slots, the equality check distinguishes by slot
                let da = (a, to_idx);
                out[ci][slot] = face_of[&da];
            }
        }
        out
    }

    /// Chessboard colouring of the faces: returns a vector `colour[face]` in
    /// {0,1} with adjacent faces (across any arc) coloured oppositely, and
    /// colour 0 assigned to the face containing the distinguished corner 0 of
    /// crossing 0. Fails if the diagram admits no chessboard colouring (which
    /// cannot happen for planar codes).
    pub fn face_coloring(&self) -> Result<Vec<u8>> {
        let n_faces = self.face_count();
        let corner = self.corner_faces();
        let mut color = vec![u8::MAX; n_faces];
        // adjacency: at each crossing, corners j and j+1 share an arc side
        // and so have opposite colours
        let mut queue = Vec::new();
        for (_ci, quads) in corner.iter().enumerate() {
            for j in 0..4 {
                let f1 = quads[j];
                let f2 = quads[(j + 1) % 4];
                queue.push((f1, f2));
            }
        }
        if n_faces == 0 {
            return Ok(color);
        }
        // propagate within each connected piece, seeding uncoloured faces
        loop {
            match color.iter().position(|&c| c == u8::MAX) {
                None => break,
                Some(seed) => color[seed] = 0,
            }
            let mut changed = true;
            while changed {
                changed = false;
                for &(f1, f2) in &queue {
                    match (color[f1], color[f2]) {
                        (u8::MAX, u8::MAX) => {}
                        (c, u8::MAX) => {
                            color[f2] = 1 - c;
                            changed = true;
                        }
                        (u8::MAX, c) => {
                            color[f1] = 1 - c;
                            changed = true;
                        }
                        (c1, c2) => {
                            if c1 == c2 {
                                return Err(Error::MalformedDiagram(
                                    "no chessboard colouring".into(),
                                ));
                            }
                        }
                    }
                }
            }
        }
        Ok(color)
    }

    /// Orientation data: a direction for every arc (true = toward
    /// endpoint[1] in arc_ends order), the component of each arc, per-
    /// crossing sign, and for each crossing the components of its under- and
    /// over-strands.
    pub fn orientation(&self) -> Orientation {
        let ends = self.arc_ends();
        let (comp_map, n_comp) = self.component_map();
        // trace each component assigning directions
        let mut dir: BTreeMap<ArcId, usize> = BTreeMap::new(); // arc -> index of endpoint it flows INTO
        for &start in ends.keys() {
            if dir.contains_key(&start) {
                continue;
            }
            let mut arc = start;
            // flow toward endpoint 1 initially
            let mut into = 1usize;
            loop {
                dir.insert(arc, into);
                let dest = ends[&arc][into];
                let exit_slot = (dest.slot + 2) % 4;
                let next = self.crossings[dest.crossing].arcs[exit_slot];
                let from = End {
                    crossing: dest.crossing,
                    slot: exit_slot,
                };
                if dir.contains_key(&next) {
                    break;
                }
                let next_pair = &ends[&next];
                into = if next_pair[0] == from { 1 } else { 0 };
                arc = next;
            }
        }
        // crossing signs
        let mut signs = Vec::with_capacity(self.crossings.len());
        let mut strand_comps = Vec::with_capacity(self.crossings.len());
        for (ci, x) in self.crossings.iter().enumerate() {
            // find the under-in slot: among slots 0,2 the one whose arc flows
            // into this crossing at that slot
            let flows_in = |slot: usize| -> bool {
                let a = x.arcs[slot];
                let into = dir[&a];
                ends[&a][into]
                    == End {
                        crossing: ci,
                        slot,
                    }
            };
            let under_in = if flows_in(0) { 0 } else { 2 };
            let over_in = if flows_in(1) { 1 } else { 3 };
            let sign: i64 = if over_in == (under_in + 1) % 4 { 1 } else { -1 };
            signs.push(sign);
            strand_comps.push((comp_map[&x.arcs[0]], comp_map[&x.arcs[1]]));
        }
        Orientation {
            components: n_comp,
            comp_of_arc: comp_map,
            signs,
            strand_comps,
        }
    }

    /// Smooth crossing `x` away. `Pairing::Adjacent01` joins slots (0,1) and
    /// (2,3); `Pairing::Adjacent12` joins (1,2) and (3,0).
    pub fn smooth(&self, x: usize, pairing: Pairing) -> PdCode {
        let mut out = self.clone();
        let cr = out.crossings.remove(x);
        let (p1, p2) = match pairing {
            Pairing::Adjacent01 => ((cr.arcs[0], cr.arcs[1]), (cr.arcs[2], cr.arcs[3])),
            Pairing::Adjacent12 => ((cr.arcs[1], cr.arcs[2]), (cr.arcs[3], cr.arcs[0])),
        };
        out.join_arcs(p1.0, p1.1);
        // p2 arcs may have been renamed by the first join
        let a = out.resolve_alias(p2.0, p1);
        let b = out.resolve_alias(p2.1, p1);
        out.join_arcs(a, b);
        out
    }

    fn resolve_alias(&self, arc: ArcId, joined: (ArcId, ArcId)) -> ArcId {
        // after join_arcs(a, b) every b was renamed to a
        if arc == joined.1 {
            joined.0
        } else {
            arc
        }
    }

    /// Merge arc `b` into arc `a`; if they are the same arc a free loop is
    /// born.
    pub fn join_arcs(&mut self, a: ArcId, b: ArcId) {
        if a == b {
            self.free_loops += 1;
            return;
        }
        for x in &mut self.crossings {
            for s in &mut x.arcs {
                if *s == b {
                    *s = a;
                }
            }
        }
    }

    /// Mirror image: reflect every crossing (reverse cyclic order, keeping
    /// the under diagonal).
    pub fn mirror(&self) -> PdCode {
        PdCode {
            crossings: self
                .crossings
                .iter()
                .map(|x| Crossing::new([x.arcs[0], x.arcs[3], x.arcs[2], x.arcs[1]]))
                .collect(),
            free_loops: self.free_loops,
        }
    }

    /// Disjoint union, relabelling the right diagram's arcs.
    pub fn disjoint_union(&self, other: &PdCode) -> PdCode {
        let offset = self.max_arc_id();
        let mut crossings = self.crossings.clone();
        crossings.extend(other.crossings.iter().map(|x| {
            Crossing::new([
                x.arcs[0] + offset,
                x.arcs[1] + offset,
                x.arcs[2] + offset,
                x.arcs[3] + offset,
            ])
        }));
        PdCode {
            crossings,
            free_loops: self.free_loops + other.free_loops,
        }
    }

    /// Canonical encoding up to crossing order, arc relabelling, and
    /// per-crossing rotation by two slots. Mirrors are NOT identified.
    pub fn canonical_key(&self) -> Vec<u32> {
        if self.crossings.is_empty() {
            return vec![u32::MAX, self.free_loops as u32];
        }
        let ends = self.arc_ends();
        // split into connected pieces, canonicalize each, sort
        let piece_of = {
            let mut uf = UnionFind::new(self.crossings.len());
            for e in ends.values() {
                uf.union(e[0].crossing, e[1].crossing);
            }
            (0..self.crossings.len())
                .map(|i| uf.find(i))
                .collect::<Vec<_>>()
        };
        let mut roots: Vec<usize> = piece_of.clone();
        roots.sort_unstable();
        roots.dedup();
        let mut encodings: Vec<Vec<u32>> = roots
            .iter()
            .map(|&root| {
                let members: Vec<usize> = (0..self.crossings.len())
                    .filter(|&i| piece_of[i] == root)
                    .collect();
                self.canonical_piece(&members, &ends)
            })
            .collect();
        encodings.sort();
        let mut out = Vec::new();
        for e in encodings {
            out.push(u32::MAX - 1); // piece separator
            out.extend(e);
        }
        out.push(u32::MAX);
        out.push(self.free_loops as u32);
        out
    }

    fn canonical_piece(&self, members: &[usize], ends: &BTreeMap<ArcId, Vec<End>>) -> Vec<u32> {
        let mut best: Option<Vec<u32>> = None;
        for &start in members {
            for start_rot in [0usize, 2] {
                let enc = self.encode_from(start, start_rot, members, ends);
                if best.as_ref().map_or(true, |b| enc < *b) {
                    best = Some(enc);
                }
            }
        }
        best.unwrap()
    }

    fn encode_from(
        &self,
        start: usize,
        start_rot: usize,
        members: &[usize],
        ends: &BTreeMap<ArcId, Vec<End>>,
    ) -> Vec<u32> {
        // BFS; each crossing gets a rotation in {0,1} fixed at discovery time
        let mut rot: HashMap<usize, usize> = HashMap::new();
        let mut order: Vec<usize> = Vec::new();
        let mut arc_label: HashMap<ArcId, u32> = HashMap::new();
        let mut next_label = 0u32;
        rot.insert(start, start_rot);
        order.push(start);
        let mut qi = 0;
        let mut enc = Vec::with_capacity(members.len() * 4);
        while qi < order.len() {
            let ci = order[qi];
            qi += 1;
            let r = rot[&ci];
            for k in 0..4 {
                let slot = (r + k) % 4;
                let a = self.crossings[ci].arcs[slot];
                let label = *arc_label.entry(a).or_insert_with(|| {
                    let l = next_label;
                    next_label += 1;
                    l
                });
                enc.push(label);
                // discover the crossing at the arc's other end
                let here = End { crossing: ci, slot };
                let pair = &ends[&a];
                let other = if pair[0] == here { pair[1] } else { pair[0] };
                if !rot.contains_key(&other.crossing) {
                    // rotation by two slots preserves the under diagonal, so
                    // normalize the arrival slot only down to its parity
                    rot.insert(other.crossing, other.slot - (other.slot % 2));
                    order.push(other.crossing);
                }
            }
        }
        debug_assert_eq!(order.len(), members.len());
        enc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    Adjacent01,
    Adjacent12,
}

#[derive(Clone, Debug)]
pub struct Orientation {
    pub components: usize,
    pub comp_of_arc: BTreeMap<ArcId, usize>,
    /// sign per crossing for the traced orientation
    pub signs: Vec<i64>,
    /// (component of under-strand, component of over-strand) per crossing
    pub strand_comps: Vec<(usize, usize)>,
}

impl Orientation {
    /// Writhe when the components in `reversed` are reversed.
    pub fn writhe_with_reversals(&self, reversed: &BTreeSet<usize>) -> i64 {
        self.signs
            .iter()
            .zip(&self.strand_comps)
            .map(|(&s, &(cu, co))| {
                let flip = reversed.contains(&cu) != reversed.contains(&co);
                if flip {
                    -s
                } else {
                    s
                }
            })
            .sum()
    }

    pub fn writhe(&self) -> i64 {
        self.signs.iter().sum()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }
    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
    fn class_count(&self) -> usize {
        (0..self.parent.len())
            .filter(|&i| self.find(i) == i)
            .count()
    }
}

// ---------------------------------------------------------------------------
// JSON interchange
// ---------------------------------------------------------------------------

/// Wire format: crossings as 4-tuples of edge numbers (counterclockwise,
/// under-strand in slots 0 and 2), signs per crossing for the traced
/// orientation, and the count of crossing-free unknot components.
#[derive(Serialize, Deserialize)]
pub struct PdJson {
    pub crossings: Vec<[usize; 4]>,
    pub signs: Vec<i64>,
    #[serde(default)]
    pub free_loops: usize,
}

impl PdCode {
    /// Export with arcs renumbered 1.. along each traced component.
    pub fn to_json(&self) -> PdJson {
        let ends = self.arc_ends();
        let mut renum: BTreeMap<ArcId, usize> = BTreeMap::new();
        let mut next = 1usize;
        // renumber along strands so edge numbers follow orientation
        for (&start, _) in ends.iter() {
            if renum.contains_key(&start) {
                continue;
            }
            let mut arc = start;
            let mut into = 1usize;
            loop {
                renum.insert(arc, next);
                next += 1;
                let dest = ends[&arc][into];
                let exit = (dest.slot + 2) % 4;
                let next_arc = self.crossings[dest.crossing].arcs[exit];
                let from = End {
                    crossing: dest.crossing,
                    slot: exit,
                };
                if renum.contains_key(&next_arc) {
                    break;
                }
                into = if ends[&next_arc][0] == from { 1 } else { 0 };
                arc = next_arc;
            }
        }
        let crossings = self
            .crossings
            .iter()
            .map(|x| {
                [
                    renum[&x.arcs[0]],
                    renum[&x.arcs[1]],
                    renum[&x.arcs[2]],
                    renum[&x.arcs[3]],
                ]
            })
            .collect();
        PdJson {
            crossings,
            signs: self.orientation().signs,
            free_loops: self.free_loops,
        }
    }

    pub fn from_json(j: &PdJson) -> Result<PdCode> {
        let pd = PdCode {
            crossings: j.crossings.iter().map(|&a| Crossing::new(a)).collect(),
            free_loops: j.free_loops,
        };
        pd.validate()?;
        Ok(pd)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A trefoil PD built by hand (medial of the 3-fold theta graph).
    pub fn trefoil_hand() -> PdCode {
        PdCode::new(
            vec![
                Crossing::new([3, 0, 2, 5]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([5, 2, 1, 4]),
            ],
            0,
        )
    }

    #[test]
    fn trefoil_structure() {
        let d = trefoil_hand();
        d.validate().unwrap();
        assert_eq!(d.component_count(), 1);
        assert_eq!(d.face_count(), 5);
        assert_eq!(d.connected_pieces(), 1);
        let colors = d.face_coloring().unwrap();
        assert_eq!(colors.len(), 5);
    }

    #[test]
    fn unlink_structure() {
        let d = PdCode::empty_unlink(3);
        d.validate().unwrap();
        assert_eq!(d.component_count(), 3);
    }

    #[test]
    fn orientation_signs_flip_under_reversal() {
        let d = trefoil_hand();
        let o = d.orientation();
        assert_eq!(o.components, 1);
        // knots: reversal leaves writhe unchanged
        assert_eq!(o.writhe().abs(), 3);
        let mut rev = BTreeSet::new();
        rev.insert(0);
        assert_eq!(o.writhe_with_reversals(&rev), o.writhe());
    }

    #[test]
    fn smoothing_reduces() {
        let d = trefoil_hand();
        let s = d.smooth(0, Pairing::Adjacent01);
        s.validate().unwrap();
        assert_eq!(s.crossing_count(), 2);
    }

    #[test]
    fn canonical_key_invariance() {
        let d = trefoil_hand();
        // relabel arcs (x -> x+10), permute crossings
        let relabeled = PdCode::new(
            vec![
                Crossing::new([14, 11, 10, 13]),
                Crossing::new([13, 10, 12, 15]),
                Crossing::new([15, 12, 11, 14]),
            ],
            0,
        );
        assert_eq!(d.canonical_key(), relabeled.canonical_key());
        // rotating a crossing by two slots changes nothing
        let rotated = PdCode::new(
            vec![
                Crossing::new([2, 5, 3, 0]),
                Crossing::new([4, 1, 0, 3]),
                Crossing::new([5, 2, 1, 4]),
            ],
            0,
        );
        assert_eq!(d.canonical_key(), rotated.canonical_key());
        // the mirror is a different code
        assert_ne!(d.canonical_key(), d.mirror().canonical_key());
    }

    #[test]
    fn json_round_trip() {
        let d = trefoil_hand();
        let j = d.to_json();
        let back = PdCode::from_json(&j).unwrap();
        assert_eq!(back.canonical_key(), d.canonical_key());
    }
}
