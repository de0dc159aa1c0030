//! Groupoid-bisets: one carrier with a left action of one groupoid and a
//! right action of another, commuting and preserving each other's structure
//! maps. Includes the two-sided translation groupoid, double orbits, the
//! correspondence with left sets over a product groupoid, quotient actions,
//! the double-coset biset of a pair of subgroupoids, and the bisets induced
//! by a groupoid morphism.

use std::collections::HashMap;
use std::sync::Arc;

use thiserror::Error;

use crate::action::{validate_action, ElementId, GroupoidAction, Side};
use crate::groupoid::{
    opposite, pair_label, ArrowId, FiniteGroupoid, GroupoidMorphism, ObjectId, ProductGroupoid,
    Subgroupoid,
};
use crate::util::Partition;
use crate::validate::ValidationReport;

#[derive(Debug, Error)]
pub enum BisetError {
    #[error("invalid biset: {0}")]
    InvalidBiset(String),
    #[error("action groupoid is not the expected product: {0}")]
    NotProductGroupoid(String),
    #[error("invalid subgroupoid: {0}")]
    InvalidSubgroupoid(String),
    #[error("invalid morphism: {0}")]
    InvalidMorphism(String),
}

/// An (H,G)-biset: carrier with structure maps `theta` into H-objects and
/// `sigma` into G-objects, a left H-action and a right G-action.
#[derive(Debug, Clone, PartialEq)]
pub struct Biset {
    left_groupoid: Arc<FiniteGroupoid>,
    right_groupoid: Arc<FiniteGroupoid>,
    carrier_labels: Vec<String>,
    theta: Vec<ObjectId>,
    sigma: Vec<ObjectId>,
    /// `x.0 * |H1| + h.0` is `h·x`, defined when `src(h) = theta(x)`.
    left_act: Vec<Option<ElementId>>,
    /// `x.0 * |G1| + g.0` is `x·g`, defined when `sigma(x) = tgt(g)`.
    right_act: Vec<Option<ElementId>>,
}

impl Biset {
    /// Builds the tables from closures defined on admissible pairs.
    pub fn from_fn(
        left_groupoid: Arc<FiniteGroupoid>,
        right_groupoid: Arc<FiniteGroupoid>,
        carrier_labels: Vec<String>,
        theta: Vec<ObjectId>,
        sigma: Vec<ObjectId>,
        left: impl Fn(ArrowId, ElementId) -> ElementId,
        right: impl Fn(ElementId, ArrowId) -> ElementId,
    ) -> Biset {
        let nx = carrier_labels.len();
        let nh = left_groupoid.n_arrows();
        let ng = right_groupoid.n_arrows();
        let mut left_act = vec![None; nx * nh];
        let mut right_act = vec![None; nx * ng];
        for x in 0..nx {
            for h in left_groupoid.arrows() {
                if left_groupoid.src(h) == theta[x] {
                    left_act[x * nh + h.0] = Some(left(h, ElementId(x)));
                }
            }
            for g in right_groupoid.arrows() {
                if right_groupoid.tgt(g) == sigma[x] {
                    right_act[x * ng + g.0] = Some(right(ElementId(x), g));
                }
            }
        }
        Biset {
            left_groupoid,
            right_groupoid,
            carrier_labels,
            theta,
            sigma,
            left_act,
            right_act,
        }
    }

    /// The regular biset of a groupoid: the arrows acted on by multiplication
    /// on both sides, with `theta = tgt` and `sigma = src`.
    pub fn regular(g: &Arc<FiniteGroupoid>) -> Biset {
        Biset::from_fn(
            g.clone(),
            g.clone(),
            g.arrows().map(|a| g.arrow_label(a).to_string()).collect(),
            g.arrows().map(|a| g.tgt(a)).collect(),
            g.arrows().map(|a| g.src(a)).collect(),
            |h, x| ElementId(g.comp2(h, ArrowId(x.0)).0),
            |x, a| ElementId(g.comp2(ArrowId(x.0), a).0),
        )
    }

    pub fn left_groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.left_groupoid
    }

    pub fn right_groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.right_groupoid
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

    pub fn theta(&self, x: ElementId) -> ObjectId {
        self.theta[x.0]
    }

    pub fn sigma(&self, x: ElementId) -> ObjectId {
        self.sigma[x.0]
    }

    pub fn left_admissible(&self, h: ArrowId, x: ElementId) -> bool {
        self.left_groupoid.src(h) == self.theta[x.0]
    }

    pub fn right_admissible(&self, x: ElementId, g: ArrowId) -> bool {
        self.right_groupoid.tgt(g) == self.sigma[x.0]
    }

    pub fn left_act(&self, h: ArrowId, x: ElementId) -> Option<ElementId> {
        self.left_act[x.0 * self.left_groupoid.n_arrows() + h.0]
    }

    pub fn right_act(&self, x: ElementId, g: ArrowId) -> Option<ElementId> {
        self.right_act[x.0 * self.right_groupoid.n_arrows() + g.0]
    }

    pub fn left_act2(&self, h: ArrowId, x: ElementId) -> ElementId {
        self.left_act(h, x).unwrap_or_else(|| {
            panic!(
                "left action undefined on ({}, {})",
                self.left_groupoid.arrow_label(h),
                self.label(x)
            )
        })
    }

    pub fn right_act2(&self, x: ElementId, g: ArrowId) -> ElementId {
        self.right_act(x, g).unwrap_or_else(|| {
            panic!(
                "right action undefined on ({}, {})",
                self.label(x),
                self.right_groupoid.arrow_label(g)
            )
        })
    }

    /// The left H-action forgotten to a one-sided groupoid-set.
    pub fn left_action_view(&self) -> GroupoidAction {
        GroupoidAction::from_fn(
            Side::Left,
            self.left_groupoid.clone(),
            self.carrier_labels.clone(),
            self.theta.clone(),
            |x, h| self.left_act2(h, x),
        )
    }

    /// The right G-action forgotten to a one-sided groupoid-set.
    pub fn right_action_view(&self) -> GroupoidAction {
        GroupoidAction::from_fn(
            Side::Right,
            self.right_groupoid.clone(),
            self.carrier_labels.clone(),
            self.sigma.clone(),
            |x, g| self.right_act2(x, g),
        )
    }

    /// Same underlying tables with both actions transposed: an (H,G)-biset
    /// becomes a (G^op, H^op)-biset.
    pub fn swapped(&self) -> Biset {
        let gop = Arc::new(opposite(&self.right_groupoid));
        let hop = Arc::new(opposite(&self.left_groupoid));
        Biset::from_fn(
            gop,
            hop,
            self.carrier_labels.clone(),
            self.sigma.clone(),
            self.theta.clone(),
            |g, x| self.right_act2(x, g),
            |x, h| self.left_act2(h, x),
        )
    }
}

/// Both action axioms on each side plus the two biset compatibility
/// conditions: structure maps are preserved by the other side's action, and
/// the actions commute.
pub fn validate_biset(b: &Biset) -> ValidationReport {
    let mut report = ValidationReport::new();
    let left = validate_action(&b.left_action_view());
    for v in left.violations {
        report.violation(format!("left: {v}"));
    }
    let right = validate_action(&b.right_action_view());
    for v in right.violations {
        report.violation(format!("right: {v}"));
    }
    for n in right.notes {
        report.note(format!("right {n}"));
    }
    let (h_g, g_g) = (b.left_groupoid(), b.right_groupoid());
    for x in b.elements() {
        for g in g_g.arrows() {
            if let Some(xg) = b.right_act(x, g) {
                if b.theta(xg) != b.theta(x) {
                    report.violation(format!(
                        "theta(({})·({})) != theta({})",
                        b.label(x),
                        g_g.arrow_label(g),
                        b.label(x)
                    ));
                }
            }
        }
        for h in h_g.arrows() {
            if let Some(hx) = b.left_act(h, x) {
                if b.sigma(hx) != b.sigma(x) {
                    report.violation(format!(
                        "sigma(({})·({})) != sigma({})",
                        h_g.arrow_label(h),
                        b.label(x),
                        b.label(x)
                    ));
                }
            }
        }
    }
    for x in b.elements() {
        for h in h_g.arrows() {
            if !b.left_admissible(h, x) {
                continue;
            }
            for g in g_g.arrows() {
                if !b.right_admissible(x, g) {
                    continue;
                }
                let hx = b.left_act2(h, x);
                let xg = b.right_act2(x, g);
                if b.right_act(hx, g) != b.left_act(h, xg) {
                    report.violation(format!(
                        "actions do not commute at ({}, {}, {})",
                        h_g.arrow_label(h),
                        b.label(x),
                        g_g.arrow_label(g)
                    ));
                }
            }
        }
    }
    report
}

/// Checks that `map` is a morphism of bisets from `dom` to `cod`: both
/// structure maps and both actions must be preserved.
pub fn check_biset_map(dom: &Biset, cod: &Biset, map: &[ElementId]) -> ValidationReport {
    let mut report = ValidationReport::new();
    if dom.left_groupoid().as_ref() != cod.left_groupoid().as_ref()
        || dom.right_groupoid().as_ref() != cod.right_groupoid().as_ref()
    {
        report.violation("domain and codomain are over different groupoid pairs");
        return report;
    }
    if map.len() != dom.len() || map.iter().any(|m| m.0 >= cod.len()) {
        report.violation("map table sized inconsistently");
        return report;
    }
    for x in dom.elements() {
        if cod.theta(map[x.0]) != dom.theta(x) || cod.sigma(map[x.0]) != dom.sigma(x) {
            report.violation(format!("structure maps not preserved at {}", dom.label(x)));
        }
    }
    for x in dom.elements() {
        for h in dom.left_groupoid().arrows() {
            if let Some(hx) = dom.left_act(h, x) {
                if cod.left_act(h, map[x.0]) != Some(map[hx.0]) {
                    report.violation(format!(
                        "left action not preserved at ({}, {})",
                        dom.left_groupoid().arrow_label(h),
                        dom.label(x)
                    ));
                }
            }
        }
        for g in dom.right_groupoid().arrows() {
            if let Some(xg) = dom.right_act(x, g) {
                if cod.right_act(map[x.0], g) != Some(map[xg.0]) {
                    report.violation(format!(
                        "right action not preserved at ({}, {})",
                        dom.label(x),
                        dom.right_groupoid().arrow_label(g)
                    ));
                }
            }
        }
    }
    report
}

/// The biset as a left set over `H x G^op`: structure map pairs the two
/// structure maps, and `(h,g)` acts by `h(xg)`.
pub fn to_left_product_set(b: &Biset) -> (GroupoidAction, ProductGroupoid) {
    let gop = Arc::new(opposite(b.right_groupoid()));
    let prod = ProductGroupoid::new(b.left_groupoid().clone(), gop);
    let action = GroupoidAction::from_fn(
        Side::Left,
        prod.groupoid().clone(),
        b.elements().map(|x| b.label(x).to_string()).collect(),
        b.elements().map(|x| prod.pair_object(b.theta(x), b.sigma(x))).collect(),
        |x, p| {
            let (h, g) = prod.unpair_arrow(p);
            // g comes from G^op, so its op-source is tgt_G(g) = sigma(x).
            let xg = b.right_act2(ElementId(x.0), g);
            b.left_act2(h, xg)
        },
    );
    (action, prod)
}

/// Inverse of [`to_left_product_set`]: recovers the biset from a left set
/// over `H x G^op` by acting with `(h, ι)` and `(ι, g)`. The action's
/// groupoid must be table-identical to the canonical product.
pub fn from_left_product_set(
    a: &GroupoidAction,
    h: &Arc<FiniteGroupoid>,
    g: &Arc<FiniteGroupoid>,
) -> Result<Biset, BisetError> {
    if a.side() != Side::Left {
        return Err(BisetError::NotProductGroupoid("expected a left action".into()));
    }
    let gop = Arc::new(opposite(g));
    let prod = ProductGroupoid::new(h.clone(), gop);
    if a.groupoid().as_ref() != prod.groupoid().as_ref() {
        return Err(BisetError::NotProductGroupoid(
            "action groupoid differs from the canonical H x G^op tables".into(),
        ));
    }
    let theta: Vec<ObjectId> = a.elements().map(|x| prod.unpair_object(a.structure(x)).0).collect();
    let sigma: Vec<ObjectId> = a.elements().map(|x| prod.unpair_object(a.structure(x)).1).collect();
    let th = theta.clone();
    let sg = sigma.clone();
    Ok(Biset::from_fn(
        h.clone(),
        g.clone(),
        a.elements().map(|x| a.label(x).to_string()).collect(),
        theta,
        sigma,
        |arr, x| a.act2(x, prod.pair_arrow(arr, g.ident(sg[x.0]))),
        |x, arr| a.act2(x, prod.pair_arrow(h.ident(th[x.0]), arr)),
    ))
}

/// The two-sided translation groupoid: objects are the carrier, arrows are
/// the admissible triples `(h,x,g)` from `x` to `h·x·g⁻¹`, with
/// `(h,x,g)(h2,x2,g2) = (h·h2, x2, g·g2)`.
pub fn two_sided_translation(b: &Biset) -> FiniteGroupoid {
    let (hg, gg) = (b.left_groupoid(), b.right_groupoid());
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new();
    for x in b.elements() {
        for h in hg.arrows() {
            if !b.left_admissible(h, x) {
                continue;
            }
            for g in gg.arrows() {
                if gg.src(g) == b.sigma(x) {
                    arrows.push((h.0, x.0, g.0));
                }
            }
        }
    }
    let n1 = arrows.len();
    let index: HashMap<(usize, usize, usize), usize> =
        arrows.iter().enumerate().map(|(i, &t)| (t, i)).collect();
    let far = |h: usize, x: usize, g: usize| {
        let hx = b.left_act2(ArrowId(h), ElementId(x));
        b.right_act2(hx, gg.inv(ArrowId(g))).0
    };
    let mut comp = vec![None; n1 * n1];
    for (i, &(h, x, g)) in arrows.iter().enumerate() {
        for (j, &(h2, x2, g2)) in arrows.iter().enumerate() {
            if x == far(h2, x2, g2) {
                let hh2 = hg.comp2(ArrowId(h), ArrowId(h2));
                let gg2 = gg.comp2(ArrowId(g), ArrowId(g2));
                comp[i * n1 + j] = Some(ArrowId(index[&(hh2.0, x2, gg2.0)]));
            }
        }
    }
    FiniteGroupoid::from_tables(
        b.elements().map(|x| b.label(x).to_string()).collect(),
        arrows
            .iter()
            .map(|&(h, x, g)| {
                format!(
                    "({},{},{})",
                    hg.arrow_label(ArrowId(h)),
                    b.label(ElementId(x)),
                    gg.arrow_label(ArrowId(g))
                )
            })
            .collect(),
        arrows.iter().map(|&(_, x, _)| ObjectId(x)).collect(),
        arrows.iter().map(|&(h, x, g)| ObjectId(far(h, x, g))).collect(),
        b.elements()
            .map(|x| ArrowId(index[&(hg.ident(b.theta(x)).0, x.0, gg.ident(b.sigma(x)).0)]))
            .collect(),
        arrows
            .iter()
            .map(|&(h, x, g)| {
                ArrowId(index[&(hg.inv(ArrowId(h)).0, far(h, x, g), gg.inv(ArrowId(g)).0)])
            })
            .collect(),
        comp,
    )
    .expect("two-sided translation tables are consistent")
}

/// Orbits of the two-sided action: the finest partition joining `x ~ h·x`
/// and `x ~ x·g`, with minimal-index representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubleOrbitPartition {
    pub partition: Partition,
    pub reps: Vec<ElementId>,
}

pub fn double_orbits(b: &Biset) -> DoubleOrbitPartition {
    let mut uf = crate::util::UnionFind::new(b.len());
    for x in b.elements() {
        for h in b.left_groupoid().arrows() {
            if let Some(hx) = b.left_act(h, x) {
                uf.union(x.0, hx.0);
            }
        }
        for g in b.right_groupoid().arrows() {
            if let Some(xg) = b.right_act(x, g) {
                uf.union(x.0, xg.0);
            }
        }
    }
    let partition = uf.into_partition();
    let reps = partition.representatives().iter().map(|&r| ElementId(r)).collect();
    DoubleOrbitPartition { partition, reps }
}

/// The quotient groupoid-sets of a biset: the right G-set on the left-orbit
/// space H\X and the left H-set on the right-orbit space X/G.
/// Well-definedness of the induced structure and actions is re-verified
/// across every representative.
pub fn quotient_actions(b: &Biset) -> (GroupoidAction, GroupoidAction) {
    let (left_orbits, _) = crate::action::orbits(&b.left_action_view());
    let (right_orbits, _) = crate::action::orbits(&b.right_action_view());

    // H\X as a right G-set.
    for block in left_orbits.blocks() {
        let s0 = b.sigma(ElementId(block[0]));
        assert!(
            block.iter().all(|&x| b.sigma(ElementId(x)) == s0),
            "sigma is not constant on a left orbit"
        );
        for g in b.right_groupoid().arrows() {
            if b.right_groupoid().tgt(g) != s0 {
                continue;
            }
            let first = left_orbits.block_of(b.right_act2(ElementId(block[0]), g).0);
            for &x in block {
                assert_eq!(
                    left_orbits.block_of(b.right_act2(ElementId(x), g).0),
                    first,
                    "quotient right action is not well defined"
                );
            }
        }
    }
    let lo = left_orbits.clone();
    let hx = GroupoidAction::from_fn(
        Side::Right,
        b.right_groupoid().clone(),
        left_orbits
            .blocks()
            .iter()
            .map(|blk| format!("[{}]", b.label(ElementId(blk[0]))))
            .collect(),
        left_orbits
            .blocks()
            .iter()
            .map(|blk| b.sigma(ElementId(blk[0])))
            .collect(),
        move |blk, g| {
            let x = lo.block(blk.0)[0];
            ElementId(lo.block_of(b.right_act2(ElementId(x), g).0))
        },
    );

    // X/G as a left H-set.
    for block in right_orbits.blocks() {
        let t0 = b.theta(ElementId(block[0]));
        assert!(
            block.iter().all(|&x| b.theta(ElementId(x)) == t0),
            "theta is not constant on a right orbit"
        );
        for h in b.left_groupoid().arrows() {
            if b.left_groupoid().src(h) != t0 {
                continue;
            }
            let first = right_orbits.block_of(b.left_act2(h, ElementId(block[0])).0);
            for &x in block {
                assert_eq!(
                    right_orbits.block_of(b.left_act2(h, ElementId(x)).0),
                    first,
                    "quotient left action is not well defined"
                );
            }
        }
    }
    let ro = right_orbits.clone();
    let xg = GroupoidAction::from_fn(
        Side::Left,
        b.left_groupoid().clone(),
        right_orbits
            .blocks()
            .iter()
            .map(|blk| format!("[{}]", b.label(ElementId(blk[0]))))
            .collect(),
        right_orbits
            .blocks()
            .iter()
            .map(|blk| b.theta(ElementId(blk[0])))
            .collect(),
        move |blk, h| {
            let x = ro.block(blk.0)[0];
            ElementId(ro.block_of(b.left_act2(h, ElementId(x)).0))
        },
    );
    (hx, xg)
}

/// The (A,B)-biset of a pair of subgroupoids of the same groupoid: carrier
/// `{(a,h,b) : a = tgt(h) in A0, src(h) = b in B0}` with `r·(a,h,b) =
/// (tgt r, r·h, b)` and `(a,h,b)·q = (a, h·q, src q)`.
pub fn double_coset_biset(
    h: &Arc<FiniteGroupoid>,
    a: &Subgroupoid,
    b: &Subgroupoid,
) -> Result<Biset, BisetError> {
    for (name, s) in [("A", a), ("B", b)] {
        if s.parent().as_ref() != h.as_ref() {
            return Err(BisetError::InvalidSubgroupoid(format!("{name} has a different parent")));
        }
        let rep = crate::groupoid::subgroupoid_check(s);
        if !rep.passed() {
            return Err(BisetError::InvalidSubgroupoid(format!("{name}: {}", rep.violations[0])));
        }
    }
    let (a_g, a_incl) = a.materialize();
    let (b_g, b_incl) = b.materialize();
    let carrier: Vec<ArrowId> = h
        .arrows()
        .filter(|&arr| a.contains_object(h.tgt(arr)) && b.contains_object(h.src(arr)))
        .collect();
    let pos: HashMap<usize, usize> = carrier.iter().enumerate().map(|(i, &c)| (c.0, i)).collect();
    let a_obj_back: HashMap<usize, usize> =
        a_incl.obj_map.iter().enumerate().map(|(i, o)| (o.0, i)).collect();
    let b_obj_back: HashMap<usize, usize> =
        b_incl.obj_map.iter().enumerate().map(|(i, o)| (o.0, i)).collect();
    let labels = carrier
        .iter()
        .map(|&arr| {
            format!(
                "({},{},{})",
                h.object_label(h.tgt(arr)),
                h.arrow_label(arr),
                h.object_label(h.src(arr))
            )
        })
        .collect();
    let theta = carrier.iter().map(|&arr| ObjectId(a_obj_back[&h.tgt(arr).0])).collect();
    let sigma = carrier.iter().map(|&arr| ObjectId(b_obj_back[&h.src(arr).0])).collect();
    Ok(Biset::from_fn(
        a_g,
        b_g,
        labels,
        theta,
        sigma,
        |r, x| {
            let rh = h.comp2(a_incl.on_arrow(r), carrier[x.0]);
            ElementId(pos[&rh.0])
        },
        |x, q| {
            let hq = h.comp2(carrier[x.0], b_incl.on_arrow(q));
            ElementId(pos[&hq.0])
        },
    ))
}

/// The two bisets induced by a morphism `phi: H -> G`: the (H,G)-biset on
/// `H0 x_t G1` and the (G,H)-biset on `G1 x_s H0`.
pub fn morphism_induced_bisets(phi: &GroupoidMorphism) -> Result<(Biset, Biset), BisetError> {
    let rep = crate::groupoid::check_morphism(phi);
    if !rep.passed() {
        return Err(BisetError::InvalidMorphism(rep.violations[0].clone()));
    }
    let (h, g) = (&phi.dom, &phi.cod);

    // Carrier {(u, g1) : phi0(u) = tgt(g1)}; theta = u, sigma = src(g1);
    // h ⇀ (u,g1) = (tgt h, phi(h)·g1), (u,g1) ↼ g2 = (u, g1·g2).
    let carrier1: Vec<(ObjectId, ArrowId)> = h
        .objects()
        .flat_map(|u| {
            g.arrows()
                .filter(move |&a| g.tgt(a) == phi.on_object(u))
                .map(move |a| (u, a))
        })
        .collect();
    let pos1: HashMap<(usize, usize), usize> = carrier1
        .iter()
        .enumerate()
        .map(|(i, &(u, a))| ((u.0, a.0), i))
        .collect();
    let c1 = carrier1.clone();
    let c1b = carrier1.clone();
    let p1 = pos1.clone();
    let phi1 = phi.clone();
    let first = Biset::from_fn(
        h.clone(),
        g.clone(),
        carrier1
            .iter()
            .map(|&(u, a)| pair_label(h.object_label(u), g.arrow_label(a)))
            .collect(),
        carrier1.iter().map(|&(u, _)| u).collect(),
        carrier1.iter().map(|&(_, a)| g.src(a)).collect(),
        move |arr, x| {
            let (_, a) = c1[x.0];
            let moved = phi1.cod.comp2(phi1.on_arrow(arr), a);
            ElementId(p1[&(phi1.dom.tgt(arr).0, moved.0)])
        },
        move |x, arr| {
            let (u, a) = c1b[x.0];
            ElementId(pos1[&(u.0, g.comp2(a, arr).0)])
        },
    );

    // Carrier {(g1, u) : src(g1) = phi0(u)}; theta = tgt(g1), sigma = u;
    // g2 ⇀ (g1,u) = (g2·g1, u), (g1,u) ↼ h = (g1·phi(h), src h).
    let carrier2: Vec<(ArrowId, ObjectId)> = g
        .arrows()
        .flat_map(|a| {
            h.objects()
                .filter(move |&u| phi.on_object(u) == g.src(a))
                .map(move |u| (a, u))
        })
        .collect();
    let pos2: HashMap<(usize, usize), usize> = carrier2
        .iter()
        .enumerate()
        .map(|(i, &(a, u))| ((a.0, u.0), i))
        .collect();
    let c2 = carrier2.clone();
    let c2b = carrier2.clone();
    let p2 = pos2.clone();
    let phi2 = phi.clone();
    let second = Biset::from_fn(
        g.clone(),
        h.clone(),
        carrier2
            .iter()
            .map(|&(a, u)| pair_label(g.arrow_label(a), h.object_label(u)))
            .collect(),
        carrier2.iter().map(|&(a, _)| g.tgt(a)).collect(),
        carrier2.iter().map(|&(_, u)| u).collect(),
        move |arr, x| {
            let (a, u) = c2[x.0];
            ElementId(p2[&(g.comp2(arr, a).0, u.0)])
        },
        move |x, arr| {
            let (a, _) = c2b[x.0];
            let moved = phi2.cod.comp2(a, phi2.on_arrow(arr));
            ElementId(pos2[&(moved.0, phi2.dom.src(arr).0)])
        },
    );
    Ok((first, second))
}

/// Disjoint union of bisets over the same pair of groupoids; carriers are
/// concatenated in order with `s{i}:` prefixes on labels.
pub fn biset_disjoint_union(parts: &[Biset]) -> Result<Biset, BisetError> {
    let (h, g) = match parts.first() {
        Some(b) => (b.left_groupoid().clone(), b.right_groupoid().clone()),
        None => {
            return Err(BisetError::InvalidBiset("disjoint union of zero bisets".into()));
        }
    };
    let mut labels = Vec::new();
    let mut theta = Vec::new();
    let mut sigma = Vec::new();
    let mut offsets = Vec::with_capacity(parts.len());
    for (i, p) in parts.iter().enumerate() {
        if p.left_groupoid().as_ref() != h.as_ref() || p.right_groupoid().as_ref() != g.as_ref() {
            return Err(BisetError::InvalidBiset("summands over different groupoids".into()));
        }
        offsets.push(labels.len());
        for x in p.elements() {
            labels.push(format!("s{i}:{}", p.label(x)));
            theta.push(p.theta(x));
            sigma.push(p.sigma(x));
        }
    }
    let part_of = {
        let mut v = Vec::with_capacity(labels.len());
        for (i, p) in parts.iter().enumerate() {
            v.extend(std::iter::repeat(i).take(p.len()));
        }
        v
    };
    let po = part_of.clone();
    let off = offsets.clone();
    Ok(Biset::from_fn(
        h,
        g,
        labels,
        theta,
        sigma,
        move |arr, x| {
            let i = po[x.0];
            let local = ElementId(x.0 - off[i]);
            ElementId(off[i] + parts[i].left_act2(arr, local).0)
        },
        move |x, arr| {
            let i = part_of[x.0];
            let local = ElementId(x.0 - offsets[i]);
            ElementId(offsets[i] + parts[i].right_act2(local, arr).0)
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::action::orbits;
    use crate::groupoid::{
        connected_components, cyclic_group, eqrel, pairs, trivial, validate_groupoid,
    };

    pub(crate) fn eqrel_into_pairs() -> GroupoidMorphism {
        let e = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]));
        let p = Arc::new(pairs(&["a", "b", "c"]));
        let obj_map = e.objects().map(|x| p.object_by_label(e.object_label(x)).unwrap()).collect();
        let arr_map = e.arrows().map(|a| p.arrow_by_label(e.arrow_label(a)).unwrap()).collect();
        GroupoidMorphism { dom: e, cod: p, obj_map, arr_map }
    }

    #[test]
    fn regular_biset_is_valid() {
        let g = Arc::new(pairs(&["a", "b"]));
        let b = Biset::regular(&g);
        let rep = validate_biset(&b);
        assert!(rep.passed(), "{rep}");
    }

    #[test]
    fn broken_theta_compatibility_is_reported() {
        let g = Arc::new(pairs(&["a", "b"]));
        let mut b = Biset::regular(&g);
        let from = ElementId(0);
        let arrow = g
            .arrows()
            .find(|&arr| b.right_admissible(from, arr) && !g.is_identity(arr))
            .unwrap();
        let to = b.elements().find(|&y| b.theta(y) != b.theta(from)).unwrap();
        b.right_act[from.0 * g.n_arrows() + arrow.0] = Some(to);
        let rep = validate_biset(&b);
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.contains("theta")));
    }

    #[test]
    fn morphism_induced_bisets_for_eqrel_into_pairs() {
        let phi = eqrel_into_pairs();
        let (b1, b2) = morphism_induced_bisets(&phi).unwrap();
        assert!(validate_biset(&b1).passed());
        assert!(validate_biset(&b2).passed());
        // pairs{a,b,c} has 9 arrows and phi0 is a bijection on objects, so
        // both fibred carriers have 9 elements.
        assert_eq!(b1.len(), 9);
        assert_eq!(b2.len(), 9);
        // Left action on the first carrier: h ⇀ (u,g1) = (tgt h, h·g1);
        // rebuild the expected element label from an independent composition.
        let (h, p) = (&phi.dom, &phi.cod);
        for u in h.objects() {
            for g1 in p.arrows().filter(|&a| p.tgt(a) == phi.on_object(u)) {
                let x = b1
                    .element_by_label(&pair_label(h.object_label(u), p.arrow_label(g1)))
                    .unwrap();
                for arr in h.arrows().filter(|&a| h.src(a) == u) {
                    let y = b1.left_act2(arr, x);
                    let expect = pair_label(
                        h.object_label(h.tgt(arr)),
                        p.arrow_label(p.comp2(phi.on_arrow(arr), g1)),
                    );
                    assert_eq!(b1.label(y), expect);
                }
            }
        }
    }

    #[test]
    fn identity_morphism_induces_the_regular_carrier() {
        let g = Arc::new(pairs(&["a", "b"]));
        let phi = GroupoidMorphism::identity(g.clone());
        let (b1, b2) = morphism_induced_bisets(&phi).unwrap();
        assert_eq!(b1.len(), 4);
        assert_eq!(b2.len(), 4);
    }

    #[test]
    fn inclusion_of_the_identity_wide_subgroupoid_relabels_the_arrows() {
        // The inclusion of the identity-only wide subgroupoid induces a
        // biset whose carrier is the parent arrow set, one element per
        // arrow.
        let g = Arc::new(pairs(&["a", "b", "c"]));
        let (_, incl) = Subgroupoid::identity_wide(g.clone()).materialize();
        let (b1, b2) = morphism_induced_bisets(&incl).unwrap();
        assert_eq!(b1.len(), g.n_arrows());
        assert_eq!(b2.len(), g.n_arrows());
        assert!(validate_biset(&b1).passed());
    }

    #[test]
    fn product_set_round_trip_is_table_identity() {
        let g = Arc::new(pairs(&["a", "b"]));
        let b = Biset::regular(&g);
        let (a, _) = to_left_product_set(&b);
        assert!(validate_action(&a).passed());
        assert_eq!(a.len(), 4);
        let back = from_left_product_set(&a, b.left_groupoid(), b.right_groupoid()).unwrap();
        assert_eq!(back, b);
    }

    #[test]
    fn from_left_product_set_rejects_non_products() {
        let g = Arc::new(pairs(&["a", "b"]));
        let a = GroupoidAction::left_regular(&g);
        let r = from_left_product_set(&a, &g, &g);
        assert!(matches!(r, Err(BisetError::NotProductGroupoid(_))));
    }

    #[test]
    fn double_orbits_match_orbits_of_the_left_product_set() {
        let g = Arc::new(pairs(&["a", "b"]));
        for b in [Biset::regular(&g), morphism_induced_bisets(&eqrel_into_pairs()).unwrap().0] {
            let d = double_orbits(&b);
            let (a, _) = to_left_product_set(&b);
            let (p, _) = orbits(&a);
            assert_eq!(d.partition, p);
        }
    }

    #[test]
    fn two_sided_translation_of_regular_pairs() {
        let g = Arc::new(pairs(&["a", "b"]));
        let b = Biset::regular(&g);
        let t = two_sided_translation(&b);
        assert_eq!(t.n_objects(), 4);
        assert_eq!(t.n_arrows(), 16);
        assert!(validate_groupoid(&t).passed());
        assert_eq!(connected_components(&t), double_orbits(&b).partition);
    }

    #[test]
    fn two_sided_translation_singleton() {
        let t1 = Arc::new(trivial(&["u"]));
        let b = Biset::from_fn(
            t1.clone(),
            t1.clone(),
            vec!["x".into()],
            vec![ObjectId(0)],
            vec![ObjectId(0)],
            |_, x| x,
            |x, _| x,
        );
        let t = two_sided_translation(&b);
        assert_eq!((t.n_objects(), t.n_arrows()), (1, 1));
    }

    #[test]
    fn double_orbits_of_identity_only_groupoids_are_singletons() {
        let t = Arc::new(trivial(&["u", "v"]));
        let b = Biset::from_fn(
            t.clone(),
            t.clone(),
            vec!["x".into(), "y".into()],
            vec![ObjectId(0), ObjectId(1)],
            vec![ObjectId(0), ObjectId(1)],
            |_, x| x,
            |x, _| x,
        );
        assert_eq!(double_orbits(&b).partition.len(), 2);
    }

    #[test]
    fn regular_biset_of_connected_groupoid_has_one_double_orbit() {
        let g = Arc::new(pairs(&["a", "b", "c"]));
        let b = Biset::regular(&g);
        assert_eq!(double_orbits(&b).partition.len(), 1);
    }

    #[test]
    fn quotient_actions_of_regular_pairs() {
        let g = Arc::new(pairs(&["a", "b"]));
        let b = Biset::regular(&g);
        let (hx, xg) = quotient_actions(&b);
        assert!(validate_action(&hx).passed());
        assert!(validate_action(&xg).passed());
        // Left orbits of the regular biset collapse arrows with the same
        // source, giving one class per object.
        assert_eq!(hx.len(), 2);
        assert_eq!(xg.len(), 2);
    }

    #[test]
    fn double_coset_biset_of_full_subgroupoids() {
        let g = Arc::new(pairs(&["a", "b"]));
        let full = Subgroupoid::full(g.clone());
        let b = double_coset_biset(&g, &full, &full).unwrap();
        assert_eq!(b.len(), 4);
        assert!(validate_biset(&b).passed());
        // Neutral law tablewise.
        for x in b.elements() {
            let ib = b.right_groupoid().ident(b.sigma(x));
            assert_eq!(b.right_act(x, ib), Some(x));
        }
    }

    #[test]
    fn double_coset_biset_with_restricted_left_objects() {
        let g = Arc::new(pairs(&["a", "b"]));
        let mut objs = vec![false; 2];
        objs[g.object_by_label("a").unwrap().0] = true;
        let mut arrs = vec![false; g.n_arrows()];
        arrs[g.arrow_by_label("(a,a)").unwrap().0] = true;
        let a_sub = Subgroupoid::new(g.clone(), objs, arrs);
        let full = Subgroupoid::full(g.clone());
        let b = double_coset_biset(&g, &a_sub, &full).unwrap();
        // Carrier: arrows with target a.
        assert_eq!(b.len(), 2);
        assert!(validate_biset(&b).passed());
    }

    #[test]
    fn double_coset_rejects_non_closed_subgroupoid() {
        let g = Arc::new(pairs(&["a", "b"]));
        let mut arrs = vec![false; g.n_arrows()];
        arrs[g.arrow_by_label("(a,b)").unwrap().0] = true;
        for x in g.objects() {
            arrs[g.ident(x).0] = true;
        }
        let bad = Subgroupoid::new(g.clone(), vec![true, true], arrs);
        let full = Subgroupoid::full(g.clone());
        assert!(matches!(
            double_coset_biset(&g, &bad, &full),
            Err(BisetError::InvalidSubgroupoid(_))
        ));
    }

    #[test]
    fn disjoint_union_validates_and_concatenates() {
        let g = Arc::new(cyclic_group(2).unwrap());
        let b = Biset::regular(&g);
        let u = biset_disjoint_union(&[b.clone(), b.clone()]).unwrap();
        assert_eq!(u.len(), 4);
        assert!(validate_biset(&u).passed());
    }

    #[test]
    fn swapped_biset_is_valid() {
        let g = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]));
        let b = Biset::regular(&g);
        let s = b.swapped();
        assert!(validate_biset(&s).passed());
        assert_eq!(s.len(), b.len());
    }
}
