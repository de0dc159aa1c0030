//! One-sided groupoid-sets: a carrier with a structure map into the objects
//! and a partial action by arrows, together with equivariant maps,
//! translation groupoids, orbits and stabilizers.
//!
//! Right actions: `x·g` is defined when `structure(x) = tgt(g)` and lands in
//! the fibre of `src(g)`. Left actions mirror this: `h·x` is defined when
//! `src(h) = structure(x)` and lands in the fibre of `tgt(h)`.

use std::sync::Arc;

use thiserror::Error;

use crate::groupoid::{
    pair_label, ArrowId, FiniteGroupoid, GroupoidMorphism, ObjectId, Subgroupoid,
};
use crate::util::Partition;
use crate::validate::ValidationReport;

/// Index of a carrier element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementId(pub usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Error)]
pub enum ActionError {
    #[error("invalid action: {0}")]
    InvalidAction(String),
    #[error("unknown element #{0}")]
    UnknownElement(usize),
    #[error("underlying map is not bijective")]
    NotBijective,
    #[error("subset is not invariant: ({element},{arrow}) escapes")]
    NotInvariantSubset { element: String, arrow: String },
}

/// A (left or right) groupoid-set stored as tables. The action table is
/// partial: defined exactly on admissible pairs of a *valid* action; use
/// [`validate_action`] to check.
#[derive(Debug, Clone, PartialEq)]
pub struct GroupoidAction {
    side: Side,
    groupoid: Arc<FiniteGroupoid>,
    carrier_labels: Vec<String>,
    structure: Vec<ObjectId>,
    /// Row-major `x.0 * n_arrows + g.0`; for left actions the entry is `g·x`.
    act: Vec<Option<ElementId>>,
}

impl GroupoidAction {
    pub fn from_tables(
        side: Side,
        groupoid: Arc<FiniteGroupoid>,
        carrier_labels: Vec<String>,
        structure: Vec<ObjectId>,
        act: Vec<Option<ElementId>>,
    ) -> Result<GroupoidAction, ActionError> {
        let nx = carrier_labels.len();
        let n1 = groupoid.n_arrows();
        if structure.len() != nx || act.len() != nx * n1 {
            return Err(ActionError::InvalidAction("tables sized inconsistently".into()));
        }
        if structure.iter().any(|o| o.0 >= groupoid.n_objects())
            || act.iter().flatten().any(|e| e.0 >= nx)
        {
            return Err(ActionError::InvalidAction("table entry out of range".into()));
        }
        Ok(GroupoidAction { side, groupoid, carrier_labels, structure, act })
    }

    /// Builds the table from a closure defined on admissible pairs.
    pub fn from_fn(
        side: Side,
        groupoid: Arc<FiniteGroupoid>,
        carrier_labels: Vec<String>,
        structure: Vec<ObjectId>,
        f: impl Fn(ElementId, ArrowId) -> ElementId,
    ) -> GroupoidAction {
        let n1 = groupoid.n_arrows();
        let nx = carrier_labels.len();
        let mut act = vec![None; nx * n1];
        for x in 0..nx {
            for g in groupoid.arrows() {
                let adm = match side {
                    Side::Right => structure[x] == groupoid.tgt(g),
                    Side::Left => structure[x] == groupoid.src(g),
                };
                if adm {
                    act[x * n1 + g.0] = Some(f(ElementId(x), g));
                }
            }
        }
        GroupoidAction { side, groupoid, carrier_labels, structure, act }
    }

    /// The regular right action of a groupoid on its own arrows by
    /// multiplication, with structure map `src`.
    pub fn right_regular(g: &Arc<FiniteGroupoid>) -> GroupoidAction {
        GroupoidAction::from_fn(
            Side::Right,
            g.clone(),
            g.arrows().map(|a| g.arrow_label(a).to_string()).collect(),
            g.arrows().map(|a| g.src(a)).collect(),
            |x, a| ElementId(g.comp2(ArrowId(x.0), a).0),
        )
    }

    /// The regular left action on arrows, with structure map `tgt`.
    pub fn left_regular(g: &Arc<FiniteGroupoid>) -> GroupoidAction {
        GroupoidAction::from_fn(
            Side::Left,
            g.clone(),
            g.arrows().map(|a| g.arrow_label(a).to_string()).collect(),
            g.arrows().map(|a| g.tgt(a)).collect(),
            |x, a| ElementId(g.comp2(a, ArrowId(x.0)).0),
        )
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn len(&self) -> usize {
        self.carrier_labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.carrier_labels.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = ElementId> {
        (0..self.len()).map(ElementId)
    }

    pub fn label(&self, x: ElementId) -> &str {
        &self.carrier_labels[x.0]
    }

    pub fn element_by_label(&self, label: &str) -> Option<ElementId> {
        self.carrier_labels.iter().position(|l| l == label).map(ElementId)
    }

    pub fn structure(&self, x: ElementId) -> ObjectId {
        self.structure[x.0]
    }

    pub fn admissible(&self, x: ElementId, g: ArrowId) -> bool {
        match self.side {
            Side::Right => self.structure[x.0] == self.groupoid.tgt(g),
            Side::Left => self.structure[x.0] == self.groupoid.src(g),
        }
    }

    /// Table entry for `(x, g)`: `x·g` for right actions, `g·x` for left.
    pub fn act(&self, x: ElementId, g: ArrowId) -> Option<ElementId> {
        self.act[x.0 * self.groupoid.n_arrows() + g.0]
    }

    /// Acts on an admissible pair; panics if the table has no entry.
    pub fn act2(&self, x: ElementId, g: ArrowId) -> ElementId {
        self.act(x, g).unwrap_or_else(|| {
            panic!(
                "action undefined on ({}, {})",
                self.label(x),
                self.groupoid.arrow_label(g)
            )
        })
    }
}

/// Exhaustive check of the groupoid-set axioms. Notes whether the structure
/// map is surjective (it need not be).
pub fn validate_action(a: &GroupoidAction) -> ValidationReport {
    let mut report = ValidationReport::new();
    let g = a.groupoid();
    for x in a.elements() {
        for arrow in g.arrows() {
            match a.act(x, arrow) {
                Some(y) => {
                    if !a.admissible(x, arrow) {
                        report.violation(format!(
                            "action defined on inadmissible pair ({}, {})",
                            a.label(x),
                            g.arrow_label(arrow)
                        ));
                        continue;
                    }
                    // Axiom (1): the result lives in the fibre of the far
                    // endpoint of the arrow.
                    let want = match a.side() {
                        Side::Right => g.src(arrow),
                        Side::Left => g.tgt(arrow),
                    };
                    if a.structure(y) != want {
                        report.violation(format!(
                            "structure(({}).({})) = {} but expected {}",
                            a.label(x),
                            g.arrow_label(arrow),
                            g.object_label(a.structure(y)),
                            g.object_label(want)
                        ));
                    }
                }
                None => {
                    if a.admissible(x, arrow) {
                        report.violation(format!(
                            "action undefined on admissible pair ({}, {})",
                            a.label(x),
                            g.arrow_label(arrow)
                        ));
                    }
                }
            }
        }
    }
    // Axiom (2): identities act trivially.
    for x in a.elements() {
        let i = g.ident(a.structure(x));
        if a.act(x, i) != Some(x) {
            report.violation(format!("identity moved {}", a.label(x)));
        }
    }
    // Axiom (3): acting along a composable chain agrees with acting by the
    // composite.
    for x in a.elements() {
        for p in g.arrows() {
            if !a.admissible(x, p) {
                continue;
            }
            let xp = match a.act(x, p) {
                Some(v) => v,
                None => continue,
            };
            for q in g.arrows() {
                let (chain_ok, composite) = match a.side() {
                    // (xg)h = x(gh) with t(h) = s(g).
                    Side::Right => (g.src(p) == g.tgt(q), g.comp(p, q)),
                    // g(hx) = (gh)x with s(g) = t(h); p plays h here.
                    Side::Left => (g.tgt(p) == g.src(q), g.comp(q, p)),
                };
                if !chain_ok {
                    continue;
                }
                let c = composite.expect("endpoints matched");
                if a.act(xp, q) != a.act(x, c) {
                    report.violation(format!(
                        "chain mismatch at ({}, {}, {})",
                        a.label(x),
                        g.arrow_label(p),
                        g.arrow_label(q)
                    ));
                }
            }
        }
    }
    let mut hit = vec![false; g.n_objects()];
    for x in a.elements() {
        hit[a.structure(x).0] = true;
    }
    let missed: Vec<&str> = g
        .objects()
        .filter(|o| !hit[o.0])
        .map(|o| g.object_label(o))
        .collect();
    if missed.is_empty() {
        report.note("structure map surjective");
    } else {
        report.note(format!("structure map not surjective; misses {{{}}}", missed.join(",")));
    }
    report
}

/// The translation groupoid of a groupoid-set, and the canonical morphism to
/// the acting groupoid (structure map on objects, arrow projection on
/// arrows).
///
/// Right case `X ⋊ G`: objects are the carrier, arrows are admissible pairs
/// `(x,g)` with source `x·g` and target `x`. Left case `G ⋉ Z` mirrors it:
/// arrows `(h,z)` with source `h·z` and target `z`.
pub fn translation_groupoid(a: &GroupoidAction) -> (FiniteGroupoid, GroupoidMorphism) {
    let g = a.groupoid();
    let mut arrows: Vec<(usize, usize)> = Vec::new(); // (element, arrow)
    for x in a.elements() {
        for arr in g.arrows() {
            if a.admissible(x, arr) {
                arrows.push((x.0, arr.0));
            }
        }
    }
    let n1 = arrows.len();
    let index_of = |p: (usize, usize)| arrows.iter().position(|&q| q == p).unwrap();
    let far = |x: usize, arr: usize| a.act2(ElementId(x), ArrowId(arr)).0;
    let mut comp = vec![None; n1 * n1];
    for (i, &(x, p)) in arrows.iter().enumerate() {
        for (j, &(y, q)) in arrows.iter().enumerate() {
            match a.side() {
                // (x,g)(y,h) = (x, gh) when y = xg.
                Side::Right => {
                    if y == far(x, p) {
                        let c = g.comp2(ArrowId(p), ArrowId(q));
                        comp[i * n1 + j] = Some(ArrowId(index_of((x, c.0))));
                    }
                }
                // (h,z)(h2,z2) = (h2·h, z) when z2 = hz.
                Side::Left => {
                    if far(x, p) == y {
                        let c = g.comp2(ArrowId(q), ArrowId(p));
                        comp[i * n1 + j] = Some(ArrowId(index_of((x, c.0))));
                    }
                }
            }
        }
    }
    let (src, tgt): (Vec<ObjectId>, Vec<ObjectId>) = arrows
        .iter()
        .map(|&(x, p)| (ObjectId(far(x, p)), ObjectId(x)))
        .unzip();
    let ident = a
        .elements()
        .map(|x| ArrowId(index_of((x.0, g.ident(a.structure(x)).0))))
        .collect();
    let inv = arrows
        .iter()
        .map(|&(x, p)| ArrowId(index_of((far(x, p), g.inv(ArrowId(p)).0))))
        .collect();
    let labels = arrows
        .iter()
        .map(|&(x, p)| match a.side() {
            Side::Right => pair_label(a.label(ElementId(x)), g.arrow_label(ArrowId(p))),
            Side::Left => pair_label(g.arrow_label(ArrowId(p)), a.label(ElementId(x))),
        })
        .collect();
    let trans = FiniteGroupoid::from_tables(
        a.elements().map(|x| a.label(x).to_string()).collect(),
        labels,
        src,
        tgt,
        ident,
        inv,
        comp,
    )
    .expect("translation groupoid tables are consistent");
    let morphism = GroupoidMorphism {
        dom: Arc::new(trans.clone()),
        cod: g.clone(),
        obj_map: a.elements().map(|x| a.structure(x)).collect(),
        arr_map: arrows.iter().map(|&(_, p)| ArrowId(p)).collect(),
    };
    (trans, morphism)
}

/// Orbit partition of the carrier; the representative of each orbit is its
/// minimal element index.
pub fn orbits(a: &GroupoidAction) -> (Partition, Vec<ElementId>) {
    let n = a.len();
    let mut block = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if block[start] != usize::MAX {
            continue;
        }
        block[start] = next;
        let mut queue = vec![start];
        while let Some(x) = queue.pop() {
            for g in a.groupoid().arrows() {
                if let Some(y) = a.act(ElementId(x), g) {
                    if block[y.0] == usize::MAX {
                        block[y.0] = next;
                        queue.push(y.0);
                    }
                }
            }
        }
        next += 1;
    }
    let partition = Partition::from_block_ids(&block);
    let reps = partition.representatives().iter().map(|&r| ElementId(r)).collect();
    (partition, reps)
}

/// Stabilizer of a carrier element: the subgroup of the isotropy group at
/// `structure(x)` consisting of the loops fixing `x`.
#[derive(Debug, Clone)]
pub struct StabilizerGroup {
    pub base: ElementId,
    pub subgroup: Subgroupoid,
}

pub fn stabilizer(a: &GroupoidAction, x: ElementId) -> Result<StabilizerGroup, ActionError> {
    if x.0 >= a.len() {
        return Err(ActionError::UnknownElement(x.0));
    }
    let g = a.groupoid();
    let base_obj = a.structure(x);
    let mut arrows = vec![false; g.n_arrows()];
    for arr in g.arrows() {
        if g.src(arr) == base_obj && g.tgt(arr) == base_obj && a.act(x, arr) == Some(x) {
            arrows[arr.0] = true;
        }
    }
    let mut objects = vec![false; g.n_objects()];
    objects[base_obj.0] = true;
    let subgroup = Subgroupoid::new(g.clone(), objects, arrows);

    // Cross-check against the image under the canonical morphism of the
    // translation-groupoid isotropy at x: those arrows are exactly the
    // admissible ones fixing x, with no loop condition imposed up front.
    let mut image = vec![false; g.n_arrows()];
    for arr in g.arrows() {
        if a.act(x, arr) == Some(x) {
            image[arr.0] = true;
        }
    }
    assert_eq!(
        image,
        subgroup.arrow_mask().to_vec(),
        "stabilizer disagrees with the translation-groupoid isotropy image"
    );
    Ok(StabilizerGroup { base: x, subgroup })
}

/// A morphism of groupoid-sets: commutes with the structure maps and the
/// actions. `dom` and `cod` must be actions of the same groupoid on the same
/// side.
#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub dom: GroupoidAction,
    pub cod: GroupoidAction,
    pub map: Vec<ElementId>,
}

impl EquivariantMap {
    pub fn identity(a: &GroupoidAction) -> EquivariantMap {
        EquivariantMap {
            dom: a.clone(),
            cod: a.clone(),
            map: a.elements().collect(),
        }
    }

    pub fn apply(&self, x: ElementId) -> ElementId {
        self.map[x.0]
    }

    pub fn is_bijective(&self) -> bool {
        if self.dom.len() != self.cod.len() {
            return false;
        }
        let mut seen = vec![false; self.cod.len()];
        for m in &self.map {
            if seen[m.0] {
                return false;
            }
            seen[m.0] = true;
        }
        true
    }
}

pub fn check_equivariant(f: &EquivariantMap) -> ValidationReport {
    let mut report = ValidationReport::new();
    if f.dom.side() != f.cod.side() {
        report.violation("domain and codomain have different sides");
        return report;
    }
    if f.dom.groupoid().as_ref() != f.cod.groupoid().as_ref() {
        report.violation("domain and codomain are over different groupoids");
        return report;
    }
    if f.map.len() != f.dom.len() || f.map.iter().any(|m| m.0 >= f.cod.len()) {
        report.violation("map table sized inconsistently");
        return report;
    }
    for x in f.dom.elements() {
        if f.cod.structure(f.apply(x)) != f.dom.structure(x) {
            report.violation(format!("structure not preserved at {}", f.dom.label(x)));
        }
    }
    for x in f.dom.elements() {
        for g in f.dom.groupoid().arrows() {
            if let Some(y) = f.dom.act(x, g) {
                if f.cod.act(f.apply(x), g) != Some(f.apply(y)) {
                    report.violation(format!(
                        "does not commute with the action at ({}, {})",
                        f.dom.label(x),
                        f.dom.groupoid().arrow_label(g)
                    ));
                }
            }
        }
    }
    report
}

/// Inverse of a bijective equivariant map; the inverse is again equivariant.
pub fn invert_equivariant(f: &EquivariantMap) -> Result<EquivariantMap, ActionError> {
    if !f.is_bijective() {
        return Err(ActionError::NotBijective);
    }
    let mut inv = vec![ElementId(0); f.map.len()];
    for x in f.dom.elements() {
        inv[f.apply(x).0] = x;
    }
    Ok(EquivariantMap { dom: f.cod.clone(), cod: f.dom.clone(), map: inv })
}

/// Restriction of an action to an invariant subset (given as element
/// indices; order is kept). Fails if some admissible arrow moves a subset
/// element outside.
pub fn restrict_action(a: &GroupoidAction, subset: &[ElementId]) -> Result<GroupoidAction, ActionError> {
    let mut back = vec![None; a.len()];
    for (i, &x) in subset.iter().enumerate() {
        if x.0 >= a.len() {
            return Err(ActionError::UnknownElement(x.0));
        }
        back[x.0] = Some(ElementId(i));
    }
    let g = a.groupoid();
    for &x in subset {
        for arr in g.arrows() {
            if let Some(y) = a.act(x, arr) {
                if back[y.0].is_none() {
                    return Err(ActionError::NotInvariantSubset {
                        element: a.label(x).to_string(),
                        arrow: g.arrow_label(arr).to_string(),
                    });
                }
            }
        }
    }
    Ok(GroupoidAction::from_fn(
        a.side(),
        g.clone(),
        subset.iter().map(|&x| a.label(x).to_string()).collect(),
        subset.iter().map(|&x| a.structure(x)).collect(),
        |i, arr| back[a.act2(subset[i.0], arr).0].expect("subset is invariant"),
    ))
}

/// Right action of Z/2 on {1,2,3} swapping 1 and 2; a small shared fixture.
#[cfg(test)]
pub(crate) fn z2_swap_action() -> GroupoidAction {
    let c2 = Arc::new(crate::groupoid::cyclic_group(2).unwrap());
    GroupoidAction::from_fn(
        Side::Right,
        c2,
        vec!["1".into(), "2".into(), "3".into()],
        vec![ObjectId(0); 3],
        |x, g| {
            if g.0 == 0 {
                x
            } else {
                ElementId([1, 0, 2][x.0])
            }
        },
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groupoid::{connected_components, cyclic_group, eqrel, pairs, validate_groupoid};

    #[test]
    fn right_regular_action_is_valid() {
        let g = Arc::new(pairs(&["a", "b"]));
        let a = GroupoidAction::right_regular(&g);
        let report = validate_action(&a);
        assert!(report.passed(), "{report}");
        assert!(report.notes.iter().any(|n| n.contains("surjective")));
    }

    #[test]
    fn left_regular_action_is_valid() {
        let g = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]));
        let a = GroupoidAction::left_regular(&g);
        assert!(validate_action(&a).passed());
    }

    #[test]
    fn action_sending_result_to_wrong_fibre_fails() {
        let g = Arc::new(pairs(&["a", "b"]));
        let mut a = GroupoidAction::right_regular(&g);
        // Redirect one non-identity entry to an element in the wrong fibre.
        let x = ElementId(0); // arrow (a,a), structure a
        let ab = g.arrow_by_label("(a,b)").unwrap(); // hmm: t=(a) so admissible from fibre a
        let idx = x.0 * g.n_arrows() + ab.0;
        let wrong = a.elements().find(|&y| a.structure(y) != g.src(ab)).unwrap();
        a.act[idx] = Some(wrong);
        let report = validate_action(&a);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.contains("structure")));
    }

    #[test]
    fn translation_groupoid_of_z2_swap() {
        let a = z2_swap_action();
        let (t, sigma) = translation_groupoid(&a);
        assert_eq!(t.n_objects(), 3);
        assert_eq!(t.n_arrows(), 6);
        assert!(validate_groupoid(&t).passed());
        assert!(crate::groupoid::check_morphism(&sigma).passed());
        assert_eq!(connected_components(&t).blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn translation_groupoid_of_right_regular_pairs() {
        let g = Arc::new(pairs(&["a", "b"]));
        let a = GroupoidAction::right_regular(&g);
        let (t, _) = translation_groupoid(&a);
        assert_eq!(t.n_objects(), 4);
        assert_eq!(t.n_arrows(), 8);
        assert!(validate_groupoid(&t).passed());
    }

    #[test]
    fn trivial_translation_groupoid() {
        let g = Arc::new(crate::groupoid::trivial(&["u"]));
        let a = GroupoidAction::from_fn(Side::Right, g, vec!["x".into()], vec![ObjectId(0)], |x, _| x);
        let (t, _) = translation_groupoid(&a);
        assert_eq!((t.n_objects(), t.n_arrows()), (1, 1));
    }

    #[test]
    fn orbits_of_identity_only_groupoid_are_singletons() {
        let g = Arc::new(crate::groupoid::trivial(&["u", "v"]));
        let a = GroupoidAction::from_fn(
            Side::Right,
            g,
            vec!["x".into(), "y".into(), "z".into()],
            vec![ObjectId(0), ObjectId(0), ObjectId(1)],
            |x, _| x,
        );
        let (p, reps) = orbits(&a);
        assert_eq!(p.len(), 3);
        assert_eq!(reps, vec![ElementId(0), ElementId(1), ElementId(2)]);
    }

    #[test]
    fn orbits_and_stabilizers_of_z2_swap() {
        let a = z2_swap_action();
        let (p, reps) = orbits(&a);
        assert_eq!(p.blocks(), &[vec![0, 1], vec![2]]);
        assert_eq!(reps, vec![ElementId(0), ElementId(2)]);
        // Stabilizer of 3 is the whole of Z/2; stabilizer of 1 is trivial.
        let s3 = stabilizer(&a, ElementId(2)).unwrap();
        assert_eq!(s3.subgroup.n_selected_arrows(), 2);
        let s1 = stabilizer(&a, ElementId(0)).unwrap();
        assert_eq!(s1.subgroup.n_selected_arrows(), 1);
    }

    #[test]
    fn empty_carrier_is_legal() {
        let g = Arc::new(pairs(&["a"]));
        let a = GroupoidAction::from_fn(Side::Right, g, vec![], vec![], |x, _| x);
        assert!(validate_action(&a).passed());
        let (p, _) = orbits(&a);
        assert!(p.is_empty());
    }

    #[test]
    fn identity_map_is_equivariant_and_self_inverse() {
        let a = z2_swap_action();
        let f = EquivariantMap::identity(&a);
        assert!(check_equivariant(&f).passed());
        let inv = invert_equivariant(&f).unwrap();
        assert!(check_equivariant(&inv).passed());
        assert_eq!(inv.map, f.map);
    }

    #[test]
    fn swap_of_two_free_orbits_is_equivariant() {
        // C2 acting freely on {1,2} u {3,4}; swapping the orbits elementwise
        // (1<->3, 2<->4) is equivariant and so is its inverse.
        let c2 = Arc::new(cyclic_group(2).unwrap());
        let a = GroupoidAction::from_fn(
            Side::Right,
            c2,
            vec!["1".into(), "2".into(), "3".into(), "4".into()],
            vec![ObjectId(0); 4],
            |x, g| {
                if g.0 == 0 {
                    x
                } else {
                    ElementId([1, 0, 3, 2][x.0])
                }
            },
        );
        assert!(validate_action(&a).passed());
        let f = EquivariantMap {
            dom: a.clone(),
            cod: a.clone(),
            map: vec![ElementId(2), ElementId(3), ElementId(0), ElementId(1)],
        };
        assert!(check_equivariant(&f).passed());
        let finv = invert_equivariant(&f).unwrap();
        assert!(check_equivariant(&finv).passed());
        let ffinv = invert_equivariant(&finv).unwrap();
        assert_eq!(ffinv.map, f.map);
    }

    #[test]
    fn restriction_to_an_orbit_succeeds_and_to_a_non_invariant_subset_fails() {
        let a = z2_swap_action();
        let (p, _) = orbits(&a);
        let block: Vec<ElementId> = p.block(0).iter().map(|&i| ElementId(i)).collect();
        let r = restrict_action(&a, &block).unwrap();
        assert!(validate_action(&r).passed());
        assert_eq!(r.len(), 2);

        let err = restrict_action(&a, &[ElementId(0)]);
        match err {
            Err(ActionError::NotInvariantSubset { element, arrow }) => {
                assert_eq!(element, "1");
                assert_eq!(arrow, "c1");
            }
            other => panic!("expected NotInvariantSubset, got {other:?}"),
        }
    }

    #[test]
    fn finite_non_surjective_structure_map_fixture() {
        // Equivalence relation with classes {a,c},{b} on S = {a,b,c},
        // restricted to S' = {a}: the induced right action on
        // S' x_t R has structure image {a,c}, missing exactly b.
        let s = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "c"], &["b"]]));
        // Carrier: pairs (s', r) with s' = tgt(r); here s' = a.
        let carrier: Vec<ArrowId> = s.arrows().filter(|&r| s.tgt(r) == ObjectId(0)).collect();
        let a = GroupoidAction::from_fn(
            Side::Right,
            s.clone(),
            carrier.iter().map(|&r| format!("(a,{})", s.arrow_label(r))).collect(),
            carrier.iter().map(|&r| s.src(r)).collect(),
            |x, g| {
                let r = carrier[x.0];
                let rg = s.comp2(r, g);
                ElementId(carrier.iter().position(|&c| c == rg).unwrap())
            },
        );
        let report = validate_action(&a);
        assert!(report.passed(), "{report}");
        assert!(report
            .notes
            .iter()
            .any(|n| n == "structure map not surjective; misses {b}"));
    }
}
