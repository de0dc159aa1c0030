//! Mackey formula for groupoid-bisets: star products of subgroupoids through
//! a one-object middle, conjugated isotropy groups, left-quotient bisets of
//! a product by a subgroupoid, the instance biset indexing the right-hand
//! side, both sides of the formula, the explicit orbit maps in each
//! direction, and a certification that the assembled class-level
//! correspondence is an equivariant bijection. A separate backtracking
//! isomorphism search provides independent evidence.

use std::sync::Arc;

use thiserror::Error;

use crate::action::ElementId;
use crate::biset::{
    biset_disjoint_union, check_biset_map, double_orbits, to_left_product_set, validate_biset,
    Biset, DoubleOrbitPartition,
};
use crate::coset::{coset_space, CosetSpace};
use crate::groupoid::{
    isotropy_group, opposite, subgroupoid_check, ArrowId, FiniteGroupoid, ObjectId,
    ProductGroupoid, Subgroupoid,
};
use crate::tensor::{tensor_product, TensorProductBiset};

#[derive(Debug, Error)]
pub enum MackeyError {
    #[error("star product middle groupoid must have exactly one object")]
    MiddleNotOneObject,
    #[error("conjugation endpoints do not match: {0}")]
    EndpointMismatch(String),
    #[error("subgroupoid is not wide: {0}")]
    NotWide(String),
    #[error("unknown element #{0}")]
    UnknownElement(usize),
    #[error("groupoid mismatch: {0}")]
    GroupoidMismatch(String),
    #[error("invalid subgroupoid: {0}")]
    InvalidSubgroupoid(String),
}

/// Left-quotient biset of a product groupoid by a subgroupoid: the carrier
/// is the left coset space, `theta`/`sigma` are the targets of the two
/// components, the left factor acts by left multiplication and the right
/// factor acts through the inverse. Retains the coset space for raw-pair
/// lookups.
#[derive(Debug, Clone)]
pub struct QuotientBiset {
    pub biset: Biset,
    pub space: CosetSpace,
    prod: ProductGroupoid,
    op_right: bool,
}

impl QuotientBiset {
    /// Class index of the coset containing the raw pair `(h_arrow, g_arrow)`.
    pub fn class_of_pair(&self, h_arrow: ArrowId, g_arrow: ArrowId) -> Option<usize> {
        self.space.class_of(self.prod.pair_arrow(h_arrow, g_arrow))
    }

    pub fn prod(&self) -> &ProductGroupoid {
        &self.prod
    }

    pub fn op_right(&self) -> bool {
        self.op_right
    }
}

fn left_quotient_impl(
    prod: &ProductGroupoid,
    sub: &Subgroupoid,
    outer_left: &Arc<FiniteGroupoid>,
    outer_right: &Arc<FiniteGroupoid>,
    op_right: bool,
) -> Result<QuotientBiset, MackeyError> {
    if sub.parent().as_ref() != prod.groupoid().as_ref() {
        return Err(MackeyError::GroupoidMismatch(
            "subgroupoid parent differs from the given product".into(),
        ));
    }
    let space = coset_space(sub, crate::action::Side::Left)
        .map_err(|e| MackeyError::InvalidSubgroupoid(e.to_string()))?;
    let classes = space.classes();
    let theta: Vec<ObjectId> = classes
        .iter()
        .map(|c| prod.left().tgt(prod.unpair_arrow(c.rep_arrow).0))
        .collect();
    let sigma: Vec<ObjectId> = classes
        .iter()
        .map(|c| prod.right().tgt(prod.unpair_arrow(c.rep_arrow).1))
        .collect();
    let labels: Vec<String> = (0..classes.len())
        .map(|i| space.action().label(ElementId(i)).to_string())
        .collect();
    let action = space.action().clone();
    let (p1, p2) = (prod.clone(), prod.clone());
    let (or1, or2) = (outer_right.clone(), outer_right.clone());
    let ol = outer_left.clone();
    let (th, sg) = (theta.clone(), sigma.clone());
    let act1 = action.clone();
    let biset = Biset::from_fn(
        outer_left.clone(),
        outer_right.clone(),
        labels,
        theta,
        sigma,
        move |h1, c| {
            // h1·[(h,g)] = [(h1·h, g)] via the pair (h1, identity at sigma).
            let i = or1.ident(sg[c.0]);
            act1.act2(c, p1.pair_arrow(h1, i))
        },
        move |c, g1| {
            // [(h,g)]·g1 = [(h, g1⁻¹·g)] in the plain product; with an
            // opposite right factor the op-composition absorbs the inverse.
            let i = ol.ident(th[c.0]);
            let garr = if op_right { g1 } else { or2.inv(g1) };
            action.act2(c, p2.pair_arrow(i, garr))
        },
    );
    Ok(QuotientBiset { biset, space, prod: prod.clone(), op_right })
}

/// The (H,G)-biset of left cosets of `H x G` by a subgroupoid, with
/// `h1·[(h,g,u,v)] = [(h1h,g,u,v)]` and `[(h,g,u,v)]·g1 = [(h,g1⁻¹g,u,v)]`.
pub fn left_quotient_biset(prod: &ProductGroupoid, sub: &Subgroupoid) -> Result<QuotientBiset, MackeyError> {
    left_quotient_impl(prod, sub, prod.left(), prod.right(), false)
}

/// Left cosets of `H x G^op` by a subgroupoid, carrying its (H,G)-biset
/// structure: the right G-action multiplies into the second component
/// without an inverse. `outer_right` is the original (un-opposed) G.
pub fn left_quotient_biset_op(
    prod_op: &ProductGroupoid,
    sub: &Subgroupoid,
    outer_right: &Arc<FiniteGroupoid>,
) -> Result<QuotientBiset, MackeyError> {
    if prod_op.right().as_ref() != &opposite(outer_right) {
        return Err(MackeyError::GroupoidMismatch(
            "product right factor is not the opposite of the given groupoid".into(),
        ));
    }
    left_quotient_impl(prod_op, sub, prod_op.left(), outer_right, true)
}

/// Relational composition of two subgroupoids through a shared one-object
/// middle groupoid: arrows `(k,g)` such that `(k,h)` and `(h,g)` are
/// selected for some middle arrow `h`. The result is a subgroupoid of the
/// product of the outer factors; it may be empty.
pub fn star_product(
    kh: &ProductGroupoid,
    m: &Subgroupoid,
    hg: &ProductGroupoid,
    l: &Subgroupoid,
    kg: &ProductGroupoid,
) -> Result<Subgroupoid, MackeyError> {
    if kh.right().as_ref() != hg.left().as_ref() {
        return Err(MackeyError::GroupoidMismatch("middle factors differ".into()));
    }
    if kh.right().n_objects() != 1 {
        return Err(MackeyError::MiddleNotOneObject);
    }
    if kh.left().as_ref() != kg.left().as_ref() || hg.right().as_ref() != kg.right().as_ref() {
        return Err(MackeyError::GroupoidMismatch("outer factors differ".into()));
    }
    if m.parent().as_ref() != kh.groupoid().as_ref() || l.parent().as_ref() != hg.groupoid().as_ref() {
        return Err(MackeyError::GroupoidMismatch("subgroupoid parents differ".into()));
    }
    let middle = kh.right();
    let mut objects = vec![false; kg.groupoid().n_objects()];
    for v in kg.left().objects() {
        for a in kg.right().objects() {
            let u = ObjectId(0);
            if m.contains_object(kh.pair_object(v, u)) && l.contains_object(hg.pair_object(u, a)) {
                objects[kg.pair_object(v, a).0] = true;
            }
        }
    }
    let mut arrows = vec![false; kg.groupoid().n_arrows()];
    for k in kg.left().arrows() {
        for g in kg.right().arrows() {
            let found = middle.arrows().any(|h| {
                m.contains_arrow(kh.pair_arrow(k, h)) && l.contains_arrow(hg.pair_arrow(h, g))
            });
            if found {
                arrows[kg.pair_arrow(k, g).0] = true;
            }
        }
    }
    let result = Subgroupoid::new(kg.groupoid().clone(), objects, arrows);
    let check = subgroupoid_check(&result);
    assert!(check.passed(), "star product is not closed: {check}");
    Ok(result)
}

/// Conjugate of the isotropy group of `l` at `(src h, a)` by the arrow
/// `(h, ι_a)`: a one-object subgroupoid of the same product at `(tgt h, a)`,
/// of the same cardinality.
pub fn conjugated_isotropy(
    hg: &ProductGroupoid,
    l: &Subgroupoid,
    h: ArrowId,
    a: ObjectId,
) -> Result<Subgroupoid, MackeyError> {
    if l.parent().as_ref() != hg.groupoid().as_ref() {
        return Err(MackeyError::GroupoidMismatch("subgroupoid parent differs".into()));
    }
    let base = hg.pair_object(hg.left().src(h), a);
    if !l.contains_object(base) {
        return Err(MackeyError::EndpointMismatch(format!(
            "({},{}) is not an object of the subgroupoid",
            hg.left().object_label(hg.left().src(h)),
            hg.right().object_label(a)
        )));
    }
    let iso = l.isotropy_at(base);
    let p = hg.groupoid();
    let conjugator = hg.pair_arrow(h, hg.right().ident(a));
    let mut arrows = vec![false; p.n_arrows()];
    let mut count = 0usize;
    for z in iso.arrows() {
        let moved = p.comp2(p.comp2(conjugator, z), p.inv(conjugator));
        arrows[moved.0] = true;
        count += 1;
    }
    let mut objects = vec![false; p.n_objects()];
    objects[hg.pair_object(hg.left().tgt(h), a).0] = true;
    let result = Subgroupoid::new(p.clone(), objects, arrows);
    assert_eq!(result.n_selected_arrows(), count, "conjugation must be injective");
    let check = subgroupoid_check(&result);
    assert!(check.passed(), "conjugate is not a subgroupoid: {check}");
    Ok(result)
}

/// Stabilizer subgroupoids of a biset element: `l_x` collects the pairs with
/// `h·x = x·g` (a subgroupoid of `H x G`), `k_x` those with `h·x·g = x` (a
/// subgroupoid of `H x G^op`). Both live at the single object
/// `(theta x, sigma x)` and have the same cardinality.
#[derive(Debug, Clone)]
pub struct StabilizerPair {
    pub l_x: Subgroupoid,
    pub k_x: Subgroupoid,
    pub prod: ProductGroupoid,
    pub prod_op: ProductGroupoid,
}

pub fn stabilizer_subgroupoids(b: &Biset, x: ElementId) -> Result<StabilizerPair, MackeyError> {
    if x.0 >= b.len() {
        return Err(MackeyError::UnknownElement(x.0));
    }
    let (hq, gq) = (b.left_groupoid().clone(), b.right_groupoid().clone());
    let prod = ProductGroupoid::new(hq.clone(), gq.clone());
    let prod_op = ProductGroupoid::new(hq.clone(), Arc::new(opposite(&gq)));
    let (tx, sx) = (b.theta(x), b.sigma(x));
    let mut l_arrows = vec![false; prod.groupoid().n_arrows()];
    let mut k_arrows = vec![false; prod.groupoid().n_arrows()];
    for h in hq.hom(tx, tx) {
        for g in gq.hom(sx, sx) {
            let hx = b.left_act2(h, x);
            let xg = b.right_act2(x, g);
            if hx == xg {
                l_arrows[prod.pair_arrow(h, g).0] = true;
            }
            if b.right_act2(hx, g) == x {
                k_arrows[prod.pair_arrow(h, g).0] = true;
            }
        }
    }
    let mut objects = vec![false; prod.groupoid().n_objects()];
    objects[prod.pair_object(tx, sx).0] = true;
    let l_x = Subgroupoid::new(prod.groupoid().clone(), objects.clone(), l_arrows);
    let k_x = Subgroupoid::new(prod_op.groupoid().clone(), objects, k_arrows);
    assert!(subgroupoid_check(&l_x).passed(), "l_x is not closed");
    assert!(subgroupoid_check(&k_x).passed(), "k_x is not closed");
    assert_eq!(
        l_x.n_selected_arrows(),
        k_x.n_selected_arrows(),
        "inversion pairs the two stabilizers"
    );
    Ok(StabilizerPair { l_x, k_x, prod, prod_op })
}

/// Certifies the isomorphism between the two left-quotient bisets attached
/// to a biset element: `[(h,g,·,·)]k_x ↦ [(h,g⁻¹,·,·)]l_x` must be a
/// bijective morphism of (H,G)-bisets.
pub fn phi_x_check(b: &Biset, x: ElementId) -> Result<bool, MackeyError> {
    let pair = stabilizer_subgroupoids(b, x)?;
    let gq = b.right_groupoid();
    let from = left_quotient_biset_op(&pair.prod_op, &pair.k_x, gq)?;
    let to = left_quotient_biset(&pair.prod, &pair.l_x)?;
    if from.biset.len() != to.biset.len() {
        return Ok(false);
    }
    let mut map = Vec::with_capacity(from.biset.len());
    for c in from.space.classes() {
        let (h, g) = pair.prod_op.unpair_arrow(c.rep_arrow);
        match to.class_of_pair(h, gq.inv(g)) {
            Some(t) => map.push(ElementId(t)),
            None => return Ok(false),
        }
    }
    let mut seen = vec![false; to.biset.len()];
    for m in &map {
        if seen[m.0] {
            return Ok(false);
        }
        seen[m.0] = true;
    }
    Ok(check_biset_map(&from.biset, &to.biset, &map).passed())
}

/// One verification instance: three groupoids and wide subgroupoids of the
/// two adjacent products.
#[derive(Debug, Clone)]
pub struct MackeyInstance {
    pub k: Arc<FiniteGroupoid>,
    pub h: Arc<FiniteGroupoid>,
    pub g: Arc<FiniteGroupoid>,
    pub kh: ProductGroupoid,
    pub hg: ProductGroupoid,
    pub kg: ProductGroupoid,
    pub m: Subgroupoid,
    pub l: Subgroupoid,
}

impl MackeyInstance {
    /// Builds an instance, rebinding the given subgroupoid masks onto
    /// freshly constructed products. The subgroupoid parents must be
    /// table-identical to `K x H` and `H x G`, pass the closure check, and
    /// be wide.
    pub fn new(
        k: Arc<FiniteGroupoid>,
        h: Arc<FiniteGroupoid>,
        g: Arc<FiniteGroupoid>,
        m: &Subgroupoid,
        l: &Subgroupoid,
    ) -> Result<MackeyInstance, MackeyError> {
        let kh = ProductGroupoid::new(k.clone(), h.clone());
        let hg = ProductGroupoid::new(h.clone(), g.clone());
        let kg = ProductGroupoid::new(k.clone(), g.clone());
        if m.parent().as_ref() != kh.groupoid().as_ref() {
            return Err(MackeyError::GroupoidMismatch("M must live in K x H".into()));
        }
        if l.parent().as_ref() != hg.groupoid().as_ref() {
            return Err(MackeyError::GroupoidMismatch("L must live in H x G".into()));
        }
        let m = Subgroupoid::new(
            kh.groupoid().clone(),
            m.object_mask().to_vec(),
            m.arrow_mask().to_vec(),
        );
        let l = Subgroupoid::new(
            hg.groupoid().clone(),
            l.object_mask().to_vec(),
            l.arrow_mask().to_vec(),
        );
        for (name, s) in [("M", &m), ("L", &l)] {
            let check = subgroupoid_check(s);
            if !check.passed() {
                return Err(MackeyError::InvalidSubgroupoid(format!(
                    "{name}: {}",
                    check.violations[0]
                )));
            }
            if !s.is_wide() {
                return Err(MackeyError::NotWide(name.into()));
            }
        }
        Ok(MackeyInstance { k, h, g, kh, hg, kg, m, l })
    }

    /// Builds an instance from seed arrows given as pairs of factor arrows;
    /// the subgroupoids are the wide closures of the seeds.
    pub fn from_seed_arrows(
        k: Arc<FiniteGroupoid>,
        h: Arc<FiniteGroupoid>,
        g: Arc<FiniteGroupoid>,
        m_seeds: &[(ArrowId, ArrowId)],
        l_seeds: &[(ArrowId, ArrowId)],
    ) -> Result<MackeyInstance, MackeyError> {
        let kh = ProductGroupoid::new(k.clone(), h.clone());
        let hg = ProductGroupoid::new(h.clone(), g.clone());
        let m_arrows: Vec<ArrowId> = m_seeds.iter().map(|&(a, b)| kh.pair_arrow(a, b)).collect();
        let l_arrows: Vec<ArrowId> = l_seeds.iter().map(|&(a, b)| hg.pair_arrow(a, b)).collect();
        let m = Subgroupoid::closure(kh.groupoid().clone(), &m_arrows, true);
        let l = Subgroupoid::closure(hg.groupoid().clone(), &l_arrows, true);
        MackeyInstance::new(k, h, g, &m, &l)
    }

    /// The same instance with every object and arrow ordering reversed in
    /// all three groupoids; verdicts must not change.
    pub fn reversed(&self) -> MackeyInstance {
        let k = Arc::new(self.k.reversed());
        let h = Arc::new(self.h.reversed());
        let g = Arc::new(self.g.reversed());
        let kh = ProductGroupoid::new(k.clone(), h.clone());
        let hg = ProductGroupoid::new(h.clone(), g.clone());
        let remap = |old_prod: &ProductGroupoid,
                     new_prod: &ProductGroupoid,
                     sub: &Subgroupoid|
         -> Subgroupoid {
            let (n_lo, n_la) = (old_prod.left().n_objects(), old_prod.left().n_arrows());
            let (n_ro, n_ra) = (old_prod.right().n_objects(), old_prod.right().n_arrows());
            let mut objects = vec![false; new_prod.groupoid().n_objects()];
            for o in new_prod.groupoid().objects() {
                let (x, u) = new_prod.unpair_object(o);
                let old = old_prod.pair_object(ObjectId(n_lo - 1 - x.0), ObjectId(n_ro - 1 - u.0));
                objects[o.0] = sub.contains_object(old);
            }
            let mut arrows = vec![false; new_prod.groupoid().n_arrows()];
            for a in new_prod.groupoid().arrows() {
                let (p, q) = new_prod.unpair_arrow(a);
                let old = old_prod.pair_arrow(ArrowId(n_la - 1 - p.0), ArrowId(n_ra - 1 - q.0));
                arrows[a.0] = sub.contains_arrow(old);
            }
            Subgroupoid::new(new_prod.groupoid().clone(), objects, arrows)
        };
        let m = remap(&self.kh, &kh, &self.m);
        let l = remap(&self.hg, &hg, &self.l);
        MackeyInstance::new(k, h, g, &m, &l).expect("reversal preserves instance invariants")
    }
}

/// The indexing biset of the right-hand side: tuples `(w,u,h,v,a)` with
/// `u = tgt h`, `v = src h`, acted on by the materialized subgroupoids M
/// and L. With wide M and L the carrier is the full cube `K0 x H1 x G0`.
#[derive(Debug, Clone)]
pub struct MackeyXBiset {
    pub biset: Biset,
    /// Tuple `(w, h, a)` per carrier index; `u`/`v` are the endpoints of `h`.
    pub tuples: Vec<(ObjectId, ArrowId, ObjectId)>,
}

impl MackeyXBiset {
    pub fn index_of(&self, w: ObjectId, h: ArrowId, a: ObjectId, inst: &MackeyInstance) -> usize {
        (w.0 * inst.h.n_arrows() + h.0) * inst.g.n_objects() + a.0
    }
}

pub fn mackey_x_biset(inst: &MackeyInstance) -> Result<MackeyXBiset, MackeyError> {
    let (m_g, m_incl) = inst.m.materialize();
    let (l_g, l_incl) = inst.l.materialize();
    // Wide subgroupoids materialize with object indices unchanged.
    assert_eq!(m_g.n_objects(), inst.kh.groupoid().n_objects());
    assert_eq!(l_g.n_objects(), inst.hg.groupoid().n_objects());
    let mut tuples = Vec::new();
    for w in inst.k.objects() {
        for h in inst.h.arrows() {
            for a in inst.g.objects() {
                tuples.push((w, h, a));
            }
        }
    }
    let labels: Vec<String> = tuples
        .iter()
        .map(|&(w, h, a)| {
            format!(
                "({},{},{},{},{})",
                inst.k.object_label(w),
                inst.h.object_label(inst.h.tgt(h)),
                inst.h.arrow_label(h),
                inst.h.object_label(inst.h.src(h)),
                inst.g.object_label(a)
            )
        })
        .collect();
    let theta: Vec<ObjectId> = tuples
        .iter()
        .map(|&(w, h, _)| inst.kh.pair_object(w, inst.h.tgt(h)))
        .collect();
    let sigma: Vec<ObjectId> = tuples
        .iter()
        .map(|&(_, h, a)| inst.hg.pair_object(inst.h.src(h), a))
        .collect();
    let n_h1 = inst.h.n_arrows();
    let n_g0 = inst.g.n_objects();
    let index = move |w: ObjectId, h: ArrowId, a: ObjectId| (w.0 * n_h1 + h.0) * n_g0 + a.0;
    let tuples2 = tuples.clone();
    let tuples3 = tuples.clone();
    let (kh2, hg2) = (inst.kh.clone(), inst.hg.clone());
    let h_arc = inst.h.clone();
    let h_arc2 = inst.h.clone();
    let biset = Biset::from_fn(
        m_g,
        l_g,
        labels,
        theta,
        sigma,
        move |arr, x| {
            // (k,h')·(w,u,h,v,a) = (tgt k, tgt h', h'·h, v, a).
            let (k_arr, hp) = kh2.unpair_arrow(m_incl.on_arrow(arr));
            let (_, h, a) = tuples2[x.0];
            ElementId(index(kh2.left().tgt(k_arr), h_arc.comp2(hp, h), a))
        },
        move |x, arr| {
            // (w,u,h,v,a)·(h'',g) = (w, u, h·h'', src h'', src g).
            let (hpp, g_arr) = hg2.unpair_arrow(l_incl.on_arrow(arr));
            let (w, h, _) = tuples3[x.0];
            ElementId(index(w, h_arc2.comp2(h, hpp), hg2.right().src(g_arr)))
        },
    );
    Ok(MackeyXBiset { biset, tuples })
}

/// One right-hand summand: the orbit representative, the star-product
/// denominator embedded into `K x G`, and its left-quotient biset.
#[derive(Debug, Clone)]
pub struct Summand {
    pub rep: (ObjectId, ArrowId, ObjectId),
    pub denominator: Subgroupoid,
    pub quotient: QuotientBiset,
}

/// Both sides of the formula on one instance.
#[derive(Debug, Clone)]
pub struct MackeySides {
    pub v: QuotientBiset,
    pub u: QuotientBiset,
    pub lhs: TensorProductBiset,
    pub x: MackeyXBiset,
    pub x_orbits: DoubleOrbitPartition,
    pub summands: Vec<Summand>,
    pub rhs: Biset,
}

/// The star-product denominator for one representative `(w, h, a)`:
/// `M^{(w,u)} ∗ (h,ι_a)·L^{(v,a)}·(h,ι_a)⁻¹` computed through materialized
/// isotropy groups (so the one-object middle hypothesis is literal) and
/// embedded back into `K x G`.
fn denominator_for_rep(
    inst: &MackeyInstance,
    w: ObjectId,
    h: ArrowId,
    a: ObjectId,
) -> Result<Subgroupoid, MackeyError> {
    let u = inst.h.tgt(h);
    let (kw_g, kw_incl) = isotropy_group(&inst.k, w)
        .map_err(|e| MackeyError::InvalidSubgroupoid(e.to_string()))?
        .materialize();
    let (hu_g, hu_incl) = isotropy_group(&inst.h, u)
        .map_err(|e| MackeyError::InvalidSubgroupoid(e.to_string()))?
        .materialize();
    let (ga_g, ga_incl) = isotropy_group(&inst.g, a)
        .map_err(|e| MackeyError::InvalidSubgroupoid(e.to_string()))?
        .materialize();
    let prod_kw_hu = ProductGroupoid::new(kw_g.clone(), hu_g.clone());
    let prod_hu_ga = ProductGroupoid::new(hu_g.clone(), ga_g.clone());
    let prod_kw_ga = ProductGroupoid::new(kw_g, ga_g);

    // M^{(w,u)} over the small product.
    let mut m_arrows = vec![false; prod_kw_hu.groupoid().n_arrows()];
    for (i, &ka) in kw_incl.arr_map.iter().enumerate() {
        for (j, &ha) in hu_incl.arr_map.iter().enumerate() {
            if inst.m.contains_arrow(inst.kh.pair_arrow(ka, ha)) {
                m_arrows[prod_kw_hu.pair_arrow(ArrowId(i), ArrowId(j)).0] = true;
            }
        }
    }
    let m_small = Subgroupoid::new(prod_kw_hu.groupoid().clone(), vec![true], m_arrows);

    // Conjugated isotropy of L over the small product.
    let conj = conjugated_isotropy(&inst.hg, &inst.l, h, a)?;
    let mut c_arrows = vec![false; prod_hu_ga.groupoid().n_arrows()];
    for (j, &ha) in hu_incl.arr_map.iter().enumerate() {
        for (t, &ga) in ga_incl.arr_map.iter().enumerate() {
            if conj.contains_arrow(inst.hg.pair_arrow(ha, ga)) {
                c_arrows[prod_hu_ga.pair_arrow(ArrowId(j), ArrowId(t)).0] = true;
            }
        }
    }
    let c_small = Subgroupoid::new(prod_hu_ga.groupoid().clone(), vec![true], c_arrows);

    let star = star_product(&prod_kw_hu, &m_small, &prod_hu_ga, &c_small, &prod_kw_ga)?;

    // Embed back into K x G at the object (w,a).
    let mut objects = vec![false; inst.kg.groupoid().n_objects()];
    objects[inst.kg.pair_object(w, a).0] = true;
    let mut arrows = vec![false; inst.kg.groupoid().n_arrows()];
    for s in star.arrows() {
        let (i, t) = prod_kw_ga.unpair_arrow(s);
        arrows[inst.kg.pair_arrow(kw_incl.arr_map[i.0], ga_incl.arr_map[t.0]).0] = true;
    }
    let embedded = Subgroupoid::new(inst.kg.groupoid().clone(), objects, arrows);
    assert!(subgroupoid_check(&embedded).passed(), "embedded denominator not closed");
    Ok(embedded)
}

/// Builds both sides of the formula: `lhs = V ⊗_H U` with `V`, `U` the
/// left-quotient bisets of M and L, and `rhs` the tagged disjoint union of
/// left-quotient bisets of the star-product denominators, one per
/// double-orbit representative of the indexing biset.
pub fn mackey_sides(inst: &MackeyInstance) -> Result<MackeySides, MackeyError> {
    let v = left_quotient_biset(&inst.kh, &inst.m)?;
    let u = left_quotient_biset(&inst.hg, &inst.l)?;
    let lhs = tensor_product(&v.biset, &u.biset)
        .map_err(|e| MackeyError::GroupoidMismatch(e.to_string()))?;
    let x = mackey_x_biset(inst)?;
    let x_orbits = double_orbits(&x.biset);
    let mut summands = Vec::with_capacity(x_orbits.reps.len());
    for &rep in &x_orbits.reps {
        let (w, h, a) = x.tuples[rep.0];
        let denominator = denominator_for_rep(inst, w, h, a)?;
        let quotient = left_quotient_biset(&inst.kg, &denominator)?;
        summands.push(Summand { rep: (w, h, a), denominator, quotient });
    }
    let rhs = if summands.is_empty() {
        Biset::from_fn(
            inst.k.clone(),
            inst.g.clone(),
            Vec::new(),
            Vec::new(),
            Vec::new(),
            |_, x| x,
            |x, _| x,
        )
    } else {
        biset_disjoint_union(&summands.iter().map(|s| s.quotient.biset.clone()).collect::<Vec<_>>())
            .map_err(|e| MackeyError::GroupoidMismatch(e.to_string()))?
    };
    Ok(MackeySides { v, u, lhs, x, x_orbits, summands, rhs })
}

/// Verdict and evidence for one instance.
#[derive(Debug, Clone)]
pub struct MackeyReport {
    pub verdict: bool,
    pub lhs_size: usize,
    pub rhs_size: usize,
    pub summand_sizes: Vec<usize>,
    pub summand_reps: Vec<String>,
    /// Double orbit of the indexing biset for each double orbit of the lhs.
    pub phi_orbits: Vec<usize>,
    /// Inverse direction.
    pub psi_orbits: Vec<usize>,
    /// Per lhs class: (summand index, class index within the summand).
    pub class_map: Vec<(usize, usize)>,
    /// Independent isomorphism search result.
    pub iso_oracle: bool,
    /// First failure, if any (smallest offending class).
    pub counterexample: Option<String>,
}

/// Certifies the correspondence on prebuilt sides. A false verdict is an
/// outcome, not an error; the report carries the first counterexample.
pub fn certify_sides(inst: &MackeyInstance, sides: &MackeySides) -> MackeyReport {
    let mut report = MackeyReport {
        verdict: false,
        lhs_size: sides.lhs.len(),
        rhs_size: sides.rhs.len(),
        summand_sizes: sides.summands.iter().map(|s| s.quotient.biset.len()).collect(),
        summand_reps: sides
            .summands
            .iter()
            .map(|s| {
                let (w, h, a) = s.rep;
                format!(
                    "({},{},{})",
                    inst.k.object_label(w),
                    inst.h.arrow_label(h),
                    inst.g.object_label(a)
                )
            })
            .collect(),
        phi_orbits: Vec::new(),
        psi_orbits: Vec::new(),
        class_map: Vec::new(),
        iso_oracle: false,
        counterexample: None,
    };
    let fail = |report: &mut MackeyReport, msg: String| {
        report.verdict = false;
        if report.counterexample.is_none() {
            report.counterexample = Some(msg);
        }
    };

    // Structural validation of everything built.
    for (name, b) in [
        ("V", &sides.v.biset),
        ("U", &sides.u.biset),
        ("lhs", &sides.lhs.result),
        ("X", &sides.x.biset),
        ("rhs", &sides.rhs),
    ] {
        let rep = validate_biset(b);
        if !rep.passed() {
            fail(&mut report, format!("{name} fails validation: {}", rep.violations[0]));
            return report;
        }
    }
    for (i, s) in sides.summands.iter().enumerate() {
        let rep = validate_biset(&s.quotient.biset);
        if !rep.passed() {
            fail(&mut report, format!("summand {i} fails validation: {}", rep.violations[0]));
            return report;
        }
    }

    // Cardinality identity, independent of any witness.
    let total: usize = report.summand_sizes.iter().sum();
    if total != sides.lhs.len() || sides.rhs.len() != total {
        fail(
            &mut report,
            format!("cardinality mismatch: |lhs| = {} vs Σ|summands| = {total}", sides.lhs.len()),
        );
        return report;
    }

    let lhs = &sides.lhs.result;
    let dor_lhs = double_orbits(lhs);

    // Orbit-level map in the forward direction: read off the class
    // representatives and check constancy on every double orbit.
    let x_orbit_of_class = |ci: usize| -> Option<usize> {
        let (vc, uc) = sides.lhs.classes[ci].rep;
        let v_rep = sides.v.space.classes()[vc.0].rep_arrow;
        let u_rep = sides.u.space.classes()[uc.0].rep_arrow;
        let (k_arr, h_arr) = inst.kh.unpair_arrow(v_rep);
        let (hp_arr, g_arr) = inst.hg.unpair_arrow(u_rep);
        let hh = inst.h.comp(inst.h.inv(h_arr), hp_arr)?;
        let w = inst.k.src(k_arr);
        let a = inst.g.src(g_arr);
        let xi = sides.x.index_of(w, hh, a, inst);
        Some(sides.x_orbits.partition.block_of(xi))
    };
    let mut phi_class = Vec::with_capacity(lhs.len());
    for ci in 0..lhs.len() {
        match x_orbit_of_class(ci) {
            Some(o) => phi_class.push(o),
            None => {
                fail(&mut report, format!("class {ci}: representatives do not compose"));
                return report;
            }
        }
    }
    let mut phi_orbits = vec![usize::MAX; dor_lhs.partition.len()];
    for ci in 0..lhs.len() {
        let o = dor_lhs.partition.block_of(ci);
        if phi_orbits[o] == usize::MAX {
            phi_orbits[o] = phi_class[ci];
        } else if phi_orbits[o] != phi_class[ci] {
            fail(
                &mut report,
                format!("forward orbit map not constant on double orbit {o} (class {ci})"),
            );
            return report;
        }
    }

    // Reverse direction: each representative tuple maps to the tensor class
    // of ([(ι_w, ι_u)], [(h, ι_a)]).
    let mut psi_orbits = Vec::with_capacity(sides.x_orbits.reps.len());
    for &rep in &sides.x_orbits.reps {
        let (w, h, a) = sides.x.tuples[rep.0];
        let u = inst.h.tgt(h);
        let vc = sides
            .v
            .space
            .class_of(inst.kh.pair_arrow(inst.k.ident(w), inst.h.ident(u)));
        let uc = sides.u.space.class_of(inst.hg.pair_arrow(h, inst.g.ident(a)));
        let tc = match (vc, uc) {
            (Some(vc), Some(uc)) => sides.lhs.class_of(ElementId(vc), ElementId(uc)),
            _ => None,
        };
        match tc {
            Some(tc) => psi_orbits.push(dor_lhs.partition.block_of(tc)),
            None => {
                fail(&mut report, format!("no tensor class for representative #{}", rep.0));
                return report;
            }
        }
    }

    // Mutual inverse at the orbit level.
    if phi_orbits.len() != psi_orbits.len() {
        fail(
            &mut report,
            format!(
                "orbit counts differ: lhs has {}, indexing biset has {}",
                phi_orbits.len(),
                psi_orbits.len()
            ),
        );
        return report;
    }
    for (i, &p) in phi_orbits.iter().enumerate() {
        if psi_orbits.get(p).copied() != Some(i) {
            fail(&mut report, format!("orbit maps are not mutually inverse at lhs orbit {i}"));
            return report;
        }
    }
    for (i, &p) in psi_orbits.iter().enumerate() {
        if phi_orbits.get(p).copied() != Some(i) {
            fail(&mut report, format!("orbit maps are not mutually inverse at rhs orbit {i}"));
            return report;
        }
    }

    // Class-level correspondence, one lhs double orbit at a time; the base
    // point is the reverse image of the orbit representative and the
    // denominator must equal its stabilizer subgroupoid.
    let by_source_k = inst.k.arrows_by_source();
    let by_target_g = inst.g.arrows_by_target();
    let mut class_map = vec![(usize::MAX, usize::MAX); lhs.len()];
    for (xi, &rep) in sides.x_orbits.reps.iter().enumerate() {
        let (w, h, a) = sides.x.tuples[rep.0];
        let u = inst.h.tgt(h);
        let vc = sides
            .v
            .space
            .class_of(inst.kh.pair_arrow(inst.k.ident(w), inst.h.ident(u)))
            .expect("canonical pair is in the coset carrier");
        let uc = sides
            .u
            .space
            .class_of(inst.hg.pair_arrow(h, inst.g.ident(a)))
            .expect("canonical pair is in the coset carrier");
        let y_star = sides
            .lhs
            .class_of(ElementId(vc), ElementId(uc))
            .expect("base point exists");
        let y_star = ElementId(y_star);

        // Stabilizer of the base point must equal the star-product
        // denominator arrow-for-arrow.
        let base_theta = lhs.theta(y_star);
        let base_sigma = lhs.sigma(y_star);
        if base_theta != w || base_sigma != a {
            fail(&mut report, format!("base point of orbit {xi} sits at the wrong object"));
            return report;
        }
        let mut stab = vec![false; inst.kg.groupoid().n_arrows()];
        for k_arr in inst.k.hom(w, w) {
            for g_arr in inst.g.hom(a, a) {
                if lhs.left_act2(k_arr, y_star) == lhs.right_act2(y_star, g_arr) {
                    stab[inst.kg.pair_arrow(k_arr, g_arr).0] = true;
                }
            }
        }
        let denom = &sides.summands[xi].denominator;
        if stab != denom.arrow_mask() {
            fail(
                &mut report,
                format!("denominator of orbit {xi} differs from the base-point stabilizer"),
            );
            return report;
        }

        // Breadth-first transporters: every class z in the double orbit is
        // k·y*·g⁻¹ for the recorded pair (k, g).
        let mut transporter: Vec<Option<(ArrowId, ArrowId)>> = vec![None; lhs.len()];
        transporter[y_star.0] = Some((inst.k.ident(w), inst.g.ident(a)));
        let mut queue = std::collections::VecDeque::from([y_star]);
        while let Some(z) = queue.pop_front() {
            let (kt, gt) = transporter[z.0].expect("visited");
            for &k1 in &by_source_k[lhs.theta(z).0] {
                let z2 = lhs.left_act2(k1, z);
                if transporter[z2.0].is_none() {
                    transporter[z2.0] = Some((inst.k.comp2(k1, kt), gt));
                    queue.push_back(z2);
                }
            }
            for &g1 in &by_target_g[lhs.sigma(z).0] {
                let z2 = lhs.right_act2(z, g1);
                if transporter[z2.0].is_none() {
                    transporter[z2.0] = Some((kt, inst.g.comp2(inst.g.inv(g1), gt)));
                    queue.push_back(z2);
                }
            }
        }
        let quotient = &sides.summands[xi].quotient;
        for z in lhs.elements() {
            if dor_lhs.partition.block_of(z.0) != psi_orbits[xi] {
                continue;
            }
            let (kt, gt) = match transporter[z.0] {
                Some(t) => t,
                None => {
                    fail(&mut report, format!("class {} unreachable from its base point", z.0));
                    return report;
                }
            };
            match quotient.class_of_pair(kt, gt) {
                Some(c) => class_map[z.0] = (xi, c),
                None => {
                    fail(&mut report, format!("transporter of class {} misses the summand", z.0));
                    return report;
                }
            }
        }
    }

    // The assembled map must be a bijection.
    let mut seen = vec![false; sides.rhs.len()];
    let offsets: Vec<usize> = {
        let mut v = Vec::with_capacity(sides.summands.len());
        let mut acc = 0;
        for s in &sides.summands {
            v.push(acc);
            acc += s.quotient.biset.len();
        }
        v
    };
    for z in lhs.elements() {
        let (si, c) = class_map[z.0];
        if si == usize::MAX {
            fail(&mut report, format!("class {} was never mapped", z.0));
            return report;
        }
        let combined = offsets[si] + c;
        if seen[combined] {
            fail(&mut report, format!("class {} collides in the right-hand side", z.0));
            return report;
        }
        seen[combined] = true;
    }

    // Equivariance of the assembled map, table against table.
    for z in lhs.elements() {
        let (si, c) = class_map[z.0];
        let combined = ElementId(offsets[si] + c);
        for &k1 in &by_source_k[lhs.theta(z).0] {
            let z2 = lhs.left_act2(k1, z);
            let (si2, c2) = class_map[z2.0];
            if sides.rhs.left_act2(k1, combined) != ElementId(offsets[si2] + c2) {
                fail(
                    &mut report,
                    format!("map is not left equivariant at class {} arrow {}", z.0, k1.0),
                );
                return report;
            }
        }
        for &g1 in &by_target_g[lhs.sigma(z).0] {
            let z2 = lhs.right_act2(z, g1);
            let (si2, c2) = class_map[z2.0];
            if sides.rhs.right_act2(combined, g1) != ElementId(offsets[si2] + c2) {
                fail(
                    &mut report,
                    format!("map is not right equivariant at class {} arrow {}", z.0, g1.0),
                );
                return report;
            }
        }
    }

    // Independent evidence: the backtracking isomorphism search must agree.
    let iso = biset_isomorphic(lhs, &sides.rhs).expect("sides share their groupoid pair");
    report.iso_oracle = iso.isomorphic;
    if !iso.isomorphic {
        fail(&mut report, "independent isomorphism search failed".to_string());
        return report;
    }

    report.phi_orbits = phi_orbits;
    report.psi_orbits = psi_orbits;
    report.class_map = class_map;
    report.verdict = true;
    report
}

/// Builds both sides and certifies the explicit isomorphism.
pub fn verify_mackey(inst: &MackeyInstance) -> Result<MackeyReport, MackeyError> {
    let sides = mackey_sides(inst)?;
    Ok(certify_sides(inst, &sides))
}

/// The two orbit-level maps of the proof, as materialized lookup tables.
pub fn mackey_maps(inst: &MackeyInstance) -> Result<(Vec<usize>, Vec<usize>), MackeyError> {
    let report = verify_mackey(inst)?;
    Ok((report.phi_orbits, report.psi_orbits))
}

/// Result of the isomorphism search: a witness maps the first carrier onto
/// the second when the bisets are isomorphic.
#[derive(Debug, Clone)]
pub struct BisetIso {
    pub isomorphic: bool,
    pub witness: Option<Vec<ElementId>>,
}

/// Decides whether two bisets over the same pair of groupoids are
/// isomorphic: converts both to left product-sets, decomposes into orbits,
/// and matches orbits by searching for a conjugator carrying one stabilizer
/// onto the other. Returns an explicit equivariant bijection when found.
pub fn biset_isomorphic(a: &Biset, b: &Biset) -> Result<BisetIso, MackeyError> {
    if a.left_groupoid().as_ref() != b.left_groupoid().as_ref()
        || a.right_groupoid().as_ref() != b.right_groupoid().as_ref()
    {
        return Err(MackeyError::GroupoidMismatch(
            "bisets live over different groupoid pairs".into(),
        ));
    }
    if a.len() != b.len() {
        return Ok(BisetIso { isomorphic: false, witness: None });
    }
    let (pa, prod) = to_left_product_set(a);
    let (pb, _) = to_left_product_set(b);
    let p = prod.groupoid();
    let by_source = p.arrows_by_source();

    struct OrbitData {
        base: ElementId,
        members: Vec<usize>,
        /// Transporter per member: an arrow q with member = q·base.
        transporters: Vec<ArrowId>,
        stab: Vec<bool>,
        stab_size: usize,
    }
    let analyze = |set: &crate::action::GroupoidAction| -> Vec<OrbitData> {
        let (partition, reps) = crate::action::orbits(set);
        reps.iter()
            .map(|&base| {
                let block = partition.block(partition.block_of(base.0));
                let mut transporter: Vec<Option<ArrowId>> = vec![None; set.len()];
                transporter[base.0] = Some(p.ident(set.structure(base)));
                let mut queue = std::collections::VecDeque::from([base]);
                while let Some(z) = queue.pop_front() {
                    let qt = transporter[z.0].expect("visited");
                    for &arr in &by_source[set.structure(z).0] {
                        let z2 = set.act2(z, arr);
                        if transporter[z2.0].is_none() {
                            transporter[z2.0] = Some(p.comp2(arr, qt));
                            queue.push_back(z2);
                        }
                    }
                }
                let mut stab = vec![false; p.n_arrows()];
                let alpha = set.structure(base);
                let mut stab_size = 0;
                for arr in p.hom(alpha, alpha) {
                    if set.act2(base, arr) == base {
                        stab[arr.0] = true;
                        stab_size += 1;
                    }
                }
                OrbitData {
                    base,
                    members: block.to_vec(),
                    transporters: block
                        .iter()
                        .map(|&m| transporter[m].expect("orbit member reached"))
                        .collect(),
                    stab,
                    stab_size,
                }
            })
            .collect()
    };
    let orbits_a = analyze(&pa);
    let orbits_b = analyze(&pb);
    if orbits_a.len() != orbits_b.len() {
        return Ok(BisetIso { isomorphic: false, witness: None });
    }

    // Greedy matching is complete here: orbit isomorphism is an equivalence
    // relation, so the compatibility graph is a union of complete bipartite
    // blocks.
    let mut used = vec![false; orbits_b.len()];
    let mut witness: Vec<ElementId> = vec![ElementId(usize::MAX); a.len()];
    for oa in &orbits_a {
        let alpha_a = pa.structure(oa.base);
        let mut matched = false;
        for (bi, ob) in orbits_b.iter().enumerate() {
            if used[bi] || oa.members.len() != ob.members.len() || oa.stab_size != ob.stab_size {
                continue;
            }
            let alpha_b = pb.structure(ob.base);
            // Conjugator search: an arrow from the a-base object to the
            // b-base object carrying the stabilizer over.
            let conjugator = p.hom(alpha_a, alpha_b).into_iter().find(|&c| {
                oa.stab.iter().enumerate().all(|(s, &in_stab)| {
                    if !in_stab {
                        return true;
                    }
                    let moved = p.comp2(p.comp2(c, ArrowId(s)), p.inv(c));
                    ob.stab[moved.0]
                })
            });
            if let Some(c) = conjugator {
                // z = q·base_a maps to (q·c⁻¹)·base_b.
                for (pos, &m) in oa.members.iter().enumerate() {
                    let q = oa.transporters[pos];
                    let arrow = p.comp2(q, p.inv(c));
                    witness[m] = pb.act2(ob.base, arrow);
                }
                used[bi] = true;
                matched = true;
                break;
            }
        }
        if !matched {
            return Ok(BisetIso { isomorphic: false, witness: None });
        }
    }
    let witness: Vec<ElementId> = witness.into_iter().collect();
    assert!(witness.iter().all(|w| w.0 != usize::MAX));
    let check = check_biset_map(a, b, &witness);
    assert!(check.passed(), "constructed witness is not a biset morphism: {check}");
    let mut seen = vec![false; b.len()];
    for w in &witness {
        assert!(!seen[w.0], "constructed witness is not injective");
        seen[w.0] = true;
    }
    Ok(BisetIso { isomorphic: true, witness: Some(witness) })
}
