//! Coset spaces of a groupoid by a subgroupoid. The raw carrier of the right
//! coset space consists of the pairs `(a, g)` with `a = tgt(g)` an object of
//! the subgroupoid; classes are orbits of the left multiplication
//! `h ⇀ (a,g) = (tgt h, h·g)` and carry an induced right action
//! `[(a,g)]·g2 = [(a, g·g2)]` with structure map `src(g)`. Left coset spaces
//! mirror this with raw pairs `(g, u)`, `u = src(g)`, classes under
//! `(g,u) ↼ h = (g·h, src h)` and induced left action `g2·[(g,u)] =
//! [(g2·g, u)]` with structure map `tgt(g)`.

use thiserror::Error;

use crate::action::{
    orbits, restrict_action, stabilizer, ElementId, GroupoidAction, Side,
};
use crate::groupoid::{subgroupoid_check, ArrowId, ObjectId, Subgroupoid};
use crate::util::UnionFind;

#[derive(Debug, Error)]
pub enum CosetError {
    #[error("invalid subgroupoid: {0}")]
    InvalidSubgroupoid(String),
    #[error("raw pair not in the coset carrier: {0}")]
    NotInCarrier(String),
}

/// One coset class: its canonical raw pair (minimal arrow index, then object
/// index) and the raw positions of all its members.
#[derive(Debug, Clone)]
pub struct CosetClass {
    pub side: Side,
    pub rep_arrow: ArrowId,
    pub rep_object: ObjectId,
    pub members: Vec<usize>,
}

/// A fully materialized coset space with its induced groupoid-set structure.
#[derive(Debug, Clone)]
pub struct CosetSpace {
    sub: Subgroupoid,
    side: Side,
    /// Raw carrier in arrow-index order; the paired object is `tgt` (right)
    /// or `src` (left) of the arrow.
    raw: Vec<ArrowId>,
    raw_pos: Vec<Option<usize>>,
    class_of_raw: Vec<usize>,
    classes: Vec<CosetClass>,
    action: GroupoidAction,
}

impl CosetSpace {
    pub fn side(&self) -> Side {
        self.side
    }

    pub fn sub(&self) -> &Subgroupoid {
        &self.sub
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes(&self) -> &[CosetClass] {
        &self.classes
    }

    pub fn raw(&self) -> &[ArrowId] {
        &self.raw
    }

    /// Class index of a raw arrow, if it belongs to the carrier.
    pub fn class_of(&self, g: ArrowId) -> Option<usize> {
        self.raw_pos[g.0].map(|p| self.class_of_raw[p])
    }

    /// The induced groupoid-set on the classes (right or left per `side`).
    pub fn action(&self) -> &GroupoidAction {
        &self.action
    }
}

/// Builds the coset space of `sub.parent()` by `sub` on the given side.
/// Classes are computed by union-find over the subgroupoid action on raw
/// pairs; the induced action is verified well-defined across every member.
pub fn coset_space(sub: &Subgroupoid, side: Side) -> Result<CosetSpace, CosetError> {
    let check = subgroupoid_check(sub);
    if !check.passed() {
        return Err(CosetError::InvalidSubgroupoid(check.violations[0].clone()));
    }
    let g = sub.parent().clone();
    let base = |arr: ArrowId| match side {
        Side::Right => g.tgt(arr),
        Side::Left => g.src(arr),
    };
    let raw: Vec<ArrowId> = g.arrows().filter(|&arr| sub.contains_object(base(arr))).collect();
    let mut raw_pos = vec![None; g.n_arrows()];
    for (i, &arr) in raw.iter().enumerate() {
        raw_pos[arr.0] = Some(i);
    }
    let selected: Vec<ArrowId> = sub.arrows().collect();
    let mut uf = UnionFind::new(raw.len());
    for (i, &arr) in raw.iter().enumerate() {
        for &h in &selected {
            let moved = match side {
                // h ⇀ (a,g) = (tgt h, h·g) for src(h) = a = tgt(g).
                Side::Right => {
                    if g.src(h) != g.tgt(arr) {
                        continue;
                    }
                    g.comp2(h, arr)
                }
                // (g,u) ↼ h = (g·h, src h) for tgt(h) = u = src(g).
                Side::Left => {
                    if g.tgt(h) != g.src(arr) {
                        continue;
                    }
                    g.comp2(arr, h)
                }
            };
            uf.union(i, raw_pos[moved.0].expect("orbit stays in the carrier"));
        }
    }
    let partition = uf.into_partition();
    let class_of_raw: Vec<usize> = (0..raw.len()).map(|i| partition.block_of(i)).collect();
    let classes: Vec<CosetClass> = partition
        .blocks()
        .iter()
        .map(|members| {
            let rep = raw[members[0]];
            CosetClass {
                side,
                rep_arrow: rep,
                rep_object: base(rep),
                members: members.clone(),
            }
        })
        .collect();

    // Induced action on classes; well-definedness is checked over every
    // member, not just the canonical representative.
    let structure: Vec<ObjectId> = classes
        .iter()
        .map(|c| match side {
            Side::Right => g.src(c.rep_arrow),
            Side::Left => g.tgt(c.rep_arrow),
        })
        .collect();
    for (ci, c) in classes.iter().enumerate() {
        for &m in &c.members {
            let other = raw[m];
            let s = match side {
                Side::Right => g.src(other),
                Side::Left => g.tgt(other),
            };
            assert_eq!(s, structure[ci], "structure map is not constant on a class");
        }
    }
    let act_entry = |g2: ArrowId, from_raw: ArrowId| -> usize {
        let moved = match side {
            Side::Right => g.comp2(from_raw, g2),
            Side::Left => g.comp2(g2, from_raw),
        };
        class_of_raw[raw_pos[moved.0].expect("translate stays in the carrier")]
    };
    let mut labels = Vec::with_capacity(classes.len());
    for c in &classes {
        let (a, b) = match side {
            Side::Right => (g.object_label(c.rep_object).to_string(), g.arrow_label(c.rep_arrow).to_string()),
            Side::Left => (g.arrow_label(c.rep_arrow).to_string(), g.object_label(c.rep_object).to_string()),
        };
        labels.push(format!("[({a},{b})]"));
    }
    let mut table: Vec<Vec<Option<usize>>> = vec![vec![None; g.n_arrows()]; classes.len()];
    for (ci, c) in classes.iter().enumerate() {
        for g2 in g.arrows() {
            let admissible = match side {
                Side::Right => g.tgt(g2) == structure[ci],
                Side::Left => g.src(g2) == structure[ci],
            };
            if !admissible {
                continue;
            }
            let first = act_entry(g2, raw[c.members[0]]);
            for &m in &c.members {
                assert_eq!(
                    act_entry(g2, raw[m]),
                    first,
                    "induced coset action is not well defined"
                );
            }
            table[ci][g2.0] = Some(first);
        }
    }
    let action = GroupoidAction::from_fn(side, g.clone(), labels, structure, |c, arr| {
        ElementId(table[c.0][arr.0].expect("admissible entries were filled"))
    });
    Ok(CosetSpace { sub: sub.clone(), side, raw, raw_pos, class_of_raw, classes, action })
}

/// Decides whether two raw pairs lie in the same coset, via the quotient
/// criterion: right side `g1·g2⁻¹` must be a subgroupoid arrow, left side
/// `g2⁻¹·g1`. The answer is cross-checked against the class-index lookup.
pub fn coset_eq(space: &CosetSpace, p1: ArrowId, p2: ArrowId) -> Result<bool, CosetError> {
    let g = space.sub.parent();
    for p in [p1, p2] {
        if p.0 >= g.n_arrows() || space.raw_pos[p.0].is_none() {
            return Err(CosetError::NotInCarrier(format!("arrow #{}", p.0)));
        }
    }
    let witness = match space.side {
        Side::Right => g.comp(p1, g.inv(p2)),
        Side::Left => g.comp(g.inv(p2), p1),
    };
    let same = witness.map(|h| space.sub.contains_arrow(h)).unwrap_or(false);
    assert_eq!(
        same,
        space.class_of(p1) == space.class_of(p2),
        "coset criterion disagrees with the class index"
    );
    Ok(same)
}

/// The orbit–stabilizer isomorphism at `x`: the coset space of the acting
/// groupoid by the stabilizer of `x`, mapped onto the orbit of `x` by
/// translating `x`. Returns the map from the coset-space action to the
/// action restricted to the orbit; it is equivariant and bijective.
pub fn orbit_stabilizer_iso(a: &GroupoidAction, x: ElementId) -> EquivariantIso {
    let stab = stabilizer(a, x).expect("x is a carrier element");
    let space = coset_space(&stab.subgroup, a.side()).expect("stabilizer is a subgroupoid");
    let (partition, _) = orbits(a);
    let orbit_elements: Vec<ElementId> = partition
        .block(partition.block_of(x.0))
        .iter()
        .map(|&i| ElementId(i))
        .collect();
    let restricted = restrict_action(a, &orbit_elements).expect("orbits are invariant");
    // Right side maps a class [(a,g)] to x·g; the left side maps [(g,u)] to
    // g·x. Both read off the same action table.
    let map: Vec<ElementId> = space
        .classes()
        .iter()
        .map(|c| {
            let moved = a.act2(x, c.rep_arrow);
            ElementId(orbit_elements.iter().position(|&e| e == moved).expect("lands in the orbit"))
        })
        .collect();
    let iso = crate::action::EquivariantMap { dom: space.action().clone(), cod: restricted, map };
    EquivariantIso { space, iso }
}

/// An orbit–stabilizer isomorphism: the coset space together with the
/// equivariant bijection onto the orbit.
#[derive(Debug, Clone)]
pub struct EquivariantIso {
    pub space: CosetSpace,
    pub iso: crate::action::EquivariantMap,
}

/// Decomposes a groupoid-set into its orbits: one orbit–stabilizer
/// isomorphism per orbit representative. The summand carriers partition the
/// original carrier.
pub fn orbit_decomposition(a: &GroupoidAction) -> Vec<EquivariantIso> {
    let (_, reps) = orbits(a);
    reps.iter().map(|&x| orbit_stabilizer_iso(a, x)).collect()
}

pub use crate::action::EquivariantMap;
