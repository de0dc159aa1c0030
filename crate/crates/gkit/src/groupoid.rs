//! Finite groupoids as explicit tables: objects, arrows, source/target,
//! identities, composition and inverses, together with builders for the
//! standard constructions (trivial, pairs, equivalence relation, fibre,
//! one-object group, action groupoid, induced groupoid, product, opposite),
//! morphisms, subgroupoids, isotropy groups and connected components.
//!
//! Composition is written like function composition: `comp(g, g2)` is the
//! arrow `g·g2` defined exactly when `src(g) = tgt(g2)`, with
//! `src(g·g2) = src(g2)` and `tgt(g·g2) = tgt(g)`.

use std::sync::Arc;

use thiserror::Error;

use crate::util::Partition;
#[cfg(test)]
use crate::util::UnionFind;
use crate::validate::ValidationReport;

/// Index of an object within one groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ObjectId(pub usize);

/// Index of an arrow within one groupoid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArrowId(pub usize);

#[derive(Debug, Error)]
pub enum BuildError {
    #[error("malformed parameters: {0}")]
    MalformedParams(String),
    #[error("unknown object {0:?}")]
    UnknownObject(String),
}

/// A finite groupoid stored as total/partial lookup tables.
///
/// Invariants (enforced by the builders and checkable with
/// [`validate_groupoid`]): identities are self-loops, composition is defined
/// exactly on pairs with matching endpoints, associativity and unit laws
/// hold, and every arrow has a two-sided inverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroupoid {
    object_labels: Vec<String>,
    arrow_labels: Vec<String>,
    src: Vec<ObjectId>,
    tgt: Vec<ObjectId>,
    ident: Vec<ArrowId>,
    inv: Vec<ArrowId>,
    /// Dense row-major table: entry `g.0 * n_arrows + g2.0` is `g·g2`.
    comp: Vec<Option<ArrowId>>,
}

impl FiniteGroupoid {
    /// Assembles a groupoid from raw tables. Sizes must be mutually
    /// consistent; the groupoid axioms themselves are *not* checked here
    /// (use [`validate_groupoid`]), so that deliberately broken tables can
    /// be constructed and reported on.
    pub fn from_tables(
        object_labels: Vec<String>,
        arrow_labels: Vec<String>,
        src: Vec<ObjectId>,
        tgt: Vec<ObjectId>,
        ident: Vec<ArrowId>,
        inv: Vec<ArrowId>,
        comp: Vec<Option<ArrowId>>,
    ) -> Result<FiniteGroupoid, BuildError> {
        let n0 = object_labels.len();
        let n1 = arrow_labels.len();
        let sized = src.len() == n1
            && tgt.len() == n1
            && inv.len() == n1
            && ident.len() == n0
            && comp.len() == n1 * n1;
        if !sized {
            return Err(BuildError::MalformedParams(
                "table sizes are inconsistent".into(),
            ));
        }
        let in_range = src.iter().chain(&tgt).all(|o| o.0 < n0)
            && ident.iter().chain(&inv).all(|a| a.0 < n1)
            && comp.iter().flatten().all(|a| a.0 < n1);
        if !in_range {
            return Err(BuildError::MalformedParams("table entry out of range".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for l in object_labels.iter().chain(&arrow_labels) {
            if !seen.insert(l) {
                return Err(BuildError::MalformedParams(format!("duplicate label {l:?}")));
            }
        }
        Ok(FiniteGroupoid {
            object_labels,
            arrow_labels,
            src,
            tgt,
            ident,
            inv,
            comp,
        })
    }

    pub fn n_objects(&self) -> usize {
        self.object_labels.len()
    }

    pub fn n_arrows(&self) -> usize {
        self.arrow_labels.len()
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> {
        (0..self.n_objects()).map(ObjectId)
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> {
        (0..self.n_arrows()).map(ArrowId)
    }

    pub fn src(&self, g: ArrowId) -> ObjectId {
        self.src[g.0]
    }

    pub fn tgt(&self, g: ArrowId) -> ObjectId {
        self.tgt[g.0]
    }

    pub fn ident(&self, x: ObjectId) -> ArrowId {
        self.ident[x.0]
    }

    pub fn inv(&self, g: ArrowId) -> ArrowId {
        self.inv[g.0]
    }

    /// `g·g2`, defined when `src(g) = tgt(g2)`.
    pub fn comp(&self, g: ArrowId, g2: ArrowId) -> Option<ArrowId> {
        self.comp[g.0 * self.n_arrows() + g2.0]
    }

    /// `g·g2` for endpoints already known to match. Panics otherwise.
    pub fn comp2(&self, g: ArrowId, g2: ArrowId) -> ArrowId {
        self.comp(g, g2).unwrap_or_else(|| {
            panic!(
                "composition undefined: {} . {}",
                self.arrow_label(g),
                self.arrow_label(g2)
            )
        })
    }

    pub fn is_identity(&self, g: ArrowId) -> bool {
        self.ident[self.src(g).0] == g && self.src(g) == self.tgt(g)
    }

    pub fn object_label(&self, x: ObjectId) -> &str {
        &self.object_labels[x.0]
    }

    pub fn arrow_label(&self, g: ArrowId) -> &str {
        &self.arrow_labels[g.0]
    }

    pub fn object_by_label(&self, label: &str) -> Option<ObjectId> {
        self.object_labels.iter().position(|l| l == label).map(ObjectId)
    }

    pub fn arrow_by_label(&self, label: &str) -> Option<ArrowId> {
        self.arrow_labels.iter().position(|l| l == label).map(ArrowId)
    }

    pub fn arrows_from(&self, x: ObjectId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(move |&g| self.src(g) == x)
    }

    pub fn arrows_into(&self, x: ObjectId) -> impl Iterator<Item = ArrowId> + '_ {
        self.arrows().filter(move |&g| self.tgt(g) == x)
    }

    /// Arrows in `hom(x, y)`: source `x`, target `y`.
    pub fn hom(&self, x: ObjectId, y: ObjectId) -> Vec<ArrowId> {
        self.arrows()
            .filter(|&g| self.src(g) == x && self.tgt(g) == y)
            .collect()
    }

    /// Arrows bucketed by source object, in index order.
    pub fn arrows_by_source(&self) -> Vec<Vec<ArrowId>> {
        let mut buckets = vec![Vec::new(); self.n_objects()];
        for a in self.arrows() {
            buckets[self.src(a).0].push(a);
        }
        buckets
    }

    /// Arrows bucketed by target object, in index order.
    pub fn arrows_by_target(&self) -> Vec<Vec<ArrowId>> {
        let mut buckets = vec![Vec::new(); self.n_objects()];
        for a in self.arrows() {
            buckets[self.tgt(a).0].push(a);
        }
        buckets
    }

    /// Same groupoid with objects and arrows renumbered: new index `i` holds
    /// what was at `obj_perm[i]` / `arr_perm[i]`.
    pub fn permuted(&self, obj_perm: &[usize], arr_perm: &[usize]) -> FiniteGroupoid {
        assert_eq!(obj_perm.len(), self.n_objects());
        assert_eq!(arr_perm.len(), self.n_arrows());
        let mut obj_new = vec![0; self.n_objects()];
        for (new, &old) in obj_perm.iter().enumerate() {
            obj_new[old] = new;
        }
        let mut arr_new = vec![0; self.n_arrows()];
        for (new, &old) in arr_perm.iter().enumerate() {
            arr_new[old] = new;
        }
        let n1 = self.n_arrows();
        let mut comp = vec![None; n1 * n1];
        for g in 0..n1 {
            for g2 in 0..n1 {
                if let Some(c) = self.comp[arr_perm[g] * n1 + arr_perm[g2]] {
                    comp[g * n1 + g2] = Some(ArrowId(arr_new[c.0]));
                }
            }
        }
        FiniteGroupoid {
            object_labels: obj_perm.iter().map(|&o| self.object_labels[o].clone()).collect(),
            arrow_labels: arr_perm.iter().map(|&a| self.arrow_labels[a].clone()).collect(),
            src: arr_perm.iter().map(|&a| ObjectId(obj_new[self.src[a].0])).collect(),
            tgt: arr_perm.iter().map(|&a| ObjectId(obj_new[self.tgt[a].0])).collect(),
            ident: obj_perm.iter().map(|&o| ArrowId(arr_new[self.ident[o].0])).collect(),
            inv: arr_perm.iter().map(|&a| ArrowId(arr_new[self.inv[a].0])).collect(),
            comp,
        }
    }

    /// Renumbers everything in reverse index order; used to confirm that
    /// verdicts do not depend on element ordering.
    pub fn reversed(&self) -> FiniteGroupoid {
        let op: Vec<usize> = (0..self.n_objects()).rev().collect();
        let ap: Vec<usize> = (0..self.n_arrows()).rev().collect();
        self.permuted(&op, &ap)
    }
}

/// Canonical label for an ordered pair; all pair-building constructions
/// (pairs groupoid, products, translation arrows) use this format.
pub fn pair_label(a: &str, b: &str) -> String {
    format!("({a},{b})")
}

fn triple_label(a: &str, b: &str, c: &str) -> String {
    format!("({a},{b},{c})")
}

/// Parameter block for [`build_groupoid`]. Each variant is one of the
/// standard constructions.
#[derive(Debug, Clone)]
pub enum Builder {
    /// Discrete groupoid: only identities.
    Trivial { elements: Vec<String> },
    /// Complete relation: one arrow `(x,y)` for every ordered pair.
    Pairs { elements: Vec<String> },
    /// Kernel pair of a map: arrows are pairs with equal image.
    Fibre { elements: Vec<String>, image: Vec<String> },
    /// Equivalence relation presented by its classes.
    EqRel { elements: Vec<String>, classes: Vec<Vec<String>> },
    /// One object, arrows forming a group under the given Cayley table
    /// (`cayley[i][j]` = index of element `i·j`; element 0 must be neutral).
    OneObjectGroup { element_names: Vec<String>, cayley: Vec<Vec<usize>> },
    /// Action groupoid of a right group-set: `group` must have one object;
    /// `act[x][g]` is the index of `x·g`.
    ActionGroupoid { group: Arc<FiniteGroupoid>, carrier: Vec<String>, act: Vec<Vec<usize>> },
    /// Induced (pull-back) groupoid along `structure: carrier -> base
    /// objects`: arrows are triples `(x, g, y)` with matching endpoints.
    Induced { base: Arc<FiniteGroupoid>, carrier: Vec<String>, structure: Vec<ObjectId> },
    Product(Arc<FiniteGroupoid>, Arc<FiniteGroupoid>),
    Opposite(Arc<FiniteGroupoid>),
}

/// Runs one of the standard constructions. Labels are derived
/// deterministically from the input order.
pub fn build_groupoid(builder: &Builder) -> Result<FiniteGroupoid, BuildError> {
    match builder {
        Builder::Trivial { elements } => {
            let classes = elements.iter().map(|e| vec![e.clone()]).collect::<Vec<_>>();
            eqrel_groupoid(elements, &classes)
        }
        Builder::Pairs { elements } => {
            let classes = vec![elements.clone()];
            eqrel_groupoid(elements, &classes)
        }
        Builder::Fibre { elements, image } => {
            if image.len() != elements.len() {
                return Err(BuildError::MalformedParams(
                    "fibre map must assign an image to every element".into(),
                ));
            }
            let mut buckets: Vec<(String, Vec<String>)> = Vec::new();
            for (e, y) in elements.iter().zip(image) {
                match buckets.iter_mut().find(|(img, _)| img == y) {
                    Some((_, cell)) => cell.push(e.clone()),
                    None => buckets.push((y.clone(), vec![e.clone()])),
                }
            }
            let classes: Vec<Vec<String>> = buckets.into_iter().map(|(_, c)| c).collect();
            eqrel_groupoid(elements, &classes)
        }
        Builder::EqRel { elements, classes } => {
            let mut seen = std::collections::HashSet::new();
            for cell in classes {
                for e in cell {
                    if !elements.contains(e) {
                        return Err(BuildError::UnknownObject(e.clone()));
                    }
                    if !seen.insert(e.clone()) {
                        return Err(BuildError::MalformedParams(format!(
                            "partition cells overlap at {e:?}"
                        )));
                    }
                }
            }
            if seen.len() != elements.len() {
                return Err(BuildError::MalformedParams(
                    "partition does not cover the carrier".into(),
                ));
            }
            eqrel_groupoid(elements, classes)
        }
        Builder::OneObjectGroup { element_names, cayley } => one_object_group(element_names, cayley),
        Builder::ActionGroupoid { group, carrier, act } => action_groupoid(group, carrier, act),
        Builder::Induced { base, carrier, structure } => induced_groupoid(base, carrier, structure),
        Builder::Product(a, b) => Ok(product_tables(a, b)),
        Builder::Opposite(g) => Ok(opposite(g)),
    }
}

fn eqrel_groupoid(elements: &[String], classes: &[Vec<String>]) -> Result<FiniteGroupoid, BuildError> {
    let n0 = elements.len();
    let obj_of = |label: &str| -> Result<usize, BuildError> {
        elements
            .iter()
            .position(|e| e == label)
            .ok_or_else(|| BuildError::UnknownObject(label.to_string()))
    };
    // Class id per element; None only if the partition is incomplete, which
    // the callers above have already rejected.
    let mut class_of = vec![usize::MAX; n0];
    for (ci, cell) in classes.iter().enumerate() {
        for e in cell {
            class_of[obj_of(e)?] = ci;
        }
    }
    if class_of.iter().any(|&c| c == usize::MAX) {
        return Err(BuildError::MalformedParams(
            "partition does not cover the carrier".into(),
        ));
    }
    // Arrows: related ordered pairs (x,y) with src = y, tgt = x, enumerated
    // in row-major (x, y) order.
    let mut arrows: Vec<(usize, usize)> = Vec::new();
    for x in 0..n0 {
        for y in 0..n0 {
            if class_of[x] == class_of[y] {
                arrows.push((x, y));
            }
        }
    }
    let n1 = arrows.len();
    let arrow_index = |x: usize, y: usize| arrows.iter().position(|&p| p == (x, y)).unwrap();
    let mut comp = vec![None; n1 * n1];
    for (i, &(x, y)) in arrows.iter().enumerate() {
        for (j, &(x2, y2)) in arrows.iter().enumerate() {
            if y == x2 {
                comp[i * n1 + j] = Some(ArrowId(arrow_index(x, y2)));
            }
        }
    }
    FiniteGroupoid::from_tables(
        elements.to_vec(),
        arrows.iter().map(|&(x, y)| pair_label(&elements[x], &elements[y])).collect(),
        arrows.iter().map(|&(_, y)| ObjectId(y)).collect(),
        arrows.iter().map(|&(x, _)| ObjectId(x)).collect(),
        (0..n0).map(|x| ArrowId(arrow_index(x, x))).collect(),
        arrows.iter().map(|&(x, y)| ArrowId(arrow_index(y, x))).collect(),
        comp,
    )
}

fn one_object_group(names: &[String], cayley: &[Vec<usize>]) -> Result<FiniteGroupoid, BuildError> {
    let n = names.len();
    if n == 0 {
        return Err(BuildError::MalformedParams("empty group".into()));
    }
    if cayley.len() != n || cayley.iter().any(|row| row.len() != n) {
        return Err(BuildError::MalformedParams("Cayley table must be n x n".into()));
    }
    if cayley.iter().flatten().any(|&e| e >= n) {
        return Err(BuildError::MalformedParams("Cayley entry out of range".into()));
    }
    // Group axioms: 0 neutral, associativity, inverses.
    for i in 0..n {
        if cayley[0][i] != i || cayley[i][0] != i {
            return Err(BuildError::MalformedParams(
                "Cayley table not a group: element 0 is not neutral".into(),
            ));
        }
    }
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                if cayley[cayley[a][b]][c] != cayley[a][cayley[b][c]] {
                    return Err(BuildError::MalformedParams(format!(
                        "Cayley table not a group: associativity fails at ({a},{b},{c})"
                    )));
                }
            }
        }
    }
    let mut inv = vec![None; n];
    for a in 0..n {
        for b in 0..n {
            if cayley[a][b] == 0 && cayley[b][a] == 0 {
                inv[a] = Some(ArrowId(b));
            }
        }
    }
    let inv: Vec<ArrowId> = inv
        .into_iter()
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| BuildError::MalformedParams("Cayley table not a group: missing inverse".into()))?;
    let mut comp = vec![None; n * n];
    for a in 0..n {
        for b in 0..n {
            comp[a * n + b] = Some(ArrowId(cayley[a][b]));
        }
    }
    FiniteGroupoid::from_tables(
        vec!["*".into()],
        names.to_vec(),
        vec![ObjectId(0); n],
        vec![ObjectId(0); n],
        vec![ArrowId(0)],
        inv,
        comp,
    )
}

/// Cyclic group of order `n` as a one-object groupoid with arrows `c0..c{n-1}`.
pub fn cyclic_group(n: usize) -> Result<FiniteGroupoid, BuildError> {
    if n == 0 {
        return Err(BuildError::MalformedParams("cyclic group order must be >= 1".into()));
    }
    let names: Vec<String> = (0..n).map(|i| format!("c{i}")).collect();
    let cayley: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
    one_object_group(&names, &cayley)
}

fn action_groupoid(
    group: &FiniteGroupoid,
    carrier: &[String],
    act: &[Vec<usize>],
) -> Result<FiniteGroupoid, BuildError> {
    if group.n_objects() != 1 {
        return Err(BuildError::MalformedParams(
            "action groupoid needs a one-object group".into(),
        ));
    }
    let nx = carrier.len();
    let ng = group.n_arrows();
    if act.len() != nx || act.iter().any(|r| r.len() != ng) || act.iter().flatten().any(|&x| x >= nx) {
        return Err(BuildError::MalformedParams("action table must be |X| x |G|".into()));
    }
    // Right group-set axioms: neutral element fixes, (xg)h = x(gh).
    let e = group.ident(ObjectId(0)).0;
    for x in 0..nx {
        if act[x][e] != x {
            return Err(BuildError::MalformedParams(format!(
                "action map not an action: {} . identity moved",
                carrier[x]
            )));
        }
        for g in 0..ng {
            for h in 0..ng {
                let gh = group.comp2(ArrowId(g), ArrowId(h)).0;
                if act[act[x][g]][h] != act[x][gh] {
                    return Err(BuildError::MalformedParams(format!(
                        "action map not an action: ({}.{}).{} mismatch",
                        carrier[x],
                        group.arrow_label(ArrowId(g)),
                        group.arrow_label(ArrowId(h)),
                    )));
                }
            }
        }
    }
    // Objects X, arrows X x G with s = action, t = first projection.
    let n1 = nx * ng;
    let idx = |x: usize, g: usize| x * ng + g;
    let mut comp = vec![None; n1 * n1];
    for x in 0..nx {
        for g in 0..ng {
            for x2 in 0..nx {
                for g2 in 0..ng {
                    // (x,g)(x2,g2) = (x, gg2) when xg = x2.
                    if act[x][g] == x2 {
                        let prod = group.comp2(ArrowId(g), ArrowId(g2));
                        comp[idx(x, g) * n1 + idx(x2, g2)] = Some(ArrowId(idx(x, prod.0)));
                    }
                }
            }
        }
    }
    let mut inv = Vec::with_capacity(n1);
    for x in 0..nx {
        for g in 0..ng {
            inv.push(ArrowId(idx(act[x][g], group.inv(ArrowId(g)).0)));
        }
    }
    let mut labels = Vec::with_capacity(n1);
    let mut src = Vec::with_capacity(n1);
    let mut tgt = Vec::with_capacity(n1);
    for x in 0..nx {
        for g in 0..ng {
            labels.push(pair_label(&carrier[x], group.arrow_label(ArrowId(g))));
            src.push(ObjectId(act[x][g]));
            tgt.push(ObjectId(x));
        }
    }
    FiniteGroupoid::from_tables(
        carrier.to_vec(),
        labels,
        src,
        tgt,
        (0..nx).map(|x| ArrowId(idx(x, e))).collect(),
        inv,
        comp,
    )
}

fn induced_groupoid(
    base: &FiniteGroupoid,
    carrier: &[String],
    structure: &[ObjectId],
) -> Result<FiniteGroupoid, BuildError> {
    if structure.len() != carrier.len() {
        return Err(BuildError::MalformedParams(
            "structure map must assign a base object to every element".into(),
        ));
    }
    if structure.iter().any(|o| o.0 >= base.n_objects()) {
        return Err(BuildError::MalformedParams("structure map out of range".into()));
    }
    // Arrows: (x, g, y) with structure(x) = tgt(g), structure(y) = src(g);
    // s = y, t = x. Enumerated by (x, g, y).
    let mut arrows: Vec<(usize, usize, usize)> = Vec::new();
    for x in 0..carrier.len() {
        for g in base.arrows() {
            if base.tgt(g) != structure[x] {
                continue;
            }
            for y in 0..carrier.len() {
                if base.src(g) == structure[y] {
                    arrows.push((x, g.0, y));
                }
            }
        }
    }
    let n1 = arrows.len();
    let index_of = |t: (usize, usize, usize)| arrows.iter().position(|&a| a == t).unwrap();
    let mut comp = vec![None; n1 * n1];
    for (i, &(x, g, y)) in arrows.iter().enumerate() {
        for (j, &(x2, g2, y2)) in arrows.iter().enumerate() {
            if y == x2 {
                let gg2 = base.comp2(ArrowId(g), ArrowId(g2));
                comp[i * n1 + j] = Some(ArrowId(index_of((x, gg2.0, y2))));
            }
        }
    }
    FiniteGroupoid::from_tables(
        carrier.to_vec(),
        arrows
            .iter()
            .map(|&(x, g, y)| triple_label(&carrier[x], base.arrow_label(ArrowId(g)), &carrier[y]))
            .collect(),
        arrows.iter().map(|&(_, _, y)| ObjectId(y)).collect(),
        arrows.iter().map(|&(x, _, _)| ObjectId(x)).collect(),
        (0..carrier.len())
            .map(|x| ArrowId(index_of((x, base.ident(structure[x]).0, x))))
            .collect(),
        arrows
            .iter()
            .map(|&(x, g, y)| ArrowId(index_of((y, base.inv(ArrowId(g)).0, x))))
            .collect(),
        comp,
    )
}

fn product_tables(a: &FiniteGroupoid, b: &FiniteGroupoid) -> FiniteGroupoid {
    let (a0, a1, b0, b1) = (a.n_objects(), a.n_arrows(), b.n_objects(), b.n_arrows());
    let obj = |x: usize, u: usize| x * b0 + u;
    let arr = |g: usize, h: usize| g * b1 + h;
    let n1 = a1 * b1;
    let mut comp = vec![None; n1 * n1];
    for g in 0..a1 {
        for h in 0..b1 {
            for g2 in 0..a1 {
                for h2 in 0..b1 {
                    if let (Some(cg), Some(ch)) =
                        (a.comp(ArrowId(g), ArrowId(g2)), b.comp(ArrowId(h), ArrowId(h2)))
                    {
                        comp[arr(g, h) * n1 + arr(g2, h2)] = Some(ArrowId(arr(cg.0, ch.0)));
                    }
                }
            }
        }
    }
    let mut object_labels = Vec::with_capacity(a0 * b0);
    for x in 0..a0 {
        for u in 0..b0 {
            object_labels.push(pair_label(a.object_label(ObjectId(x)), b.object_label(ObjectId(u))));
        }
    }
    let mut arrow_labels = Vec::with_capacity(n1);
    let mut src = Vec::with_capacity(n1);
    let mut tgt = Vec::with_capacity(n1);
    let mut inv = Vec::with_capacity(n1);
    for g in 0..a1 {
        for h in 0..b1 {
            arrow_labels.push(pair_label(a.arrow_label(ArrowId(g)), b.arrow_label(ArrowId(h))));
            src.push(ObjectId(obj(a.src(ArrowId(g)).0, b.src(ArrowId(h)).0)));
            tgt.push(ObjectId(obj(a.tgt(ArrowId(g)).0, b.tgt(ArrowId(h)).0)));
            inv.push(ArrowId(arr(a.inv(ArrowId(g)).0, b.inv(ArrowId(h)).0)));
        }
    }
    let mut ident = Vec::with_capacity(a0 * b0);
    for x in 0..a0 {
        for u in 0..b0 {
            ident.push(ArrowId(arr(a.ident(ObjectId(x)).0, b.ident(ObjectId(u)).0)));
        }
    }
    FiniteGroupoid::from_tables(object_labels, arrow_labels, src, tgt, ident, inv, comp)
        .expect("product tables are consistent by construction")
}

/// Opposite groupoid: same labels, source and target swapped, composition
/// operands reversed.
pub fn opposite(g: &FiniteGroupoid) -> FiniteGroupoid {
    let n1 = g.n_arrows();
    let mut comp = vec![None; n1 * n1];
    for a in 0..n1 {
        for b in 0..n1 {
            comp[a * n1 + b] = g.comp(ArrowId(b), ArrowId(a));
        }
    }
    FiniteGroupoid {
        object_labels: g.object_labels.clone(),
        arrow_labels: g.arrow_labels.clone(),
        src: g.tgt.clone(),
        tgt: g.src.clone(),
        ident: g.ident.clone(),
        inv: g.inv.clone(),
        comp,
    }
}

/// A product groupoid together with its factors and the index arithmetic
/// pairing factor objects/arrows with product objects/arrows.
#[derive(Debug, Clone)]
pub struct ProductGroupoid {
    groupoid: Arc<FiniteGroupoid>,
    left: Arc<FiniteGroupoid>,
    right: Arc<FiniteGroupoid>,
}

impl ProductGroupoid {
    pub fn new(left: Arc<FiniteGroupoid>, right: Arc<FiniteGroupoid>) -> ProductGroupoid {
        let groupoid = Arc::new(product_tables(&left, &right));
        ProductGroupoid { groupoid, left, right }
    }

    pub fn groupoid(&self) -> &Arc<FiniteGroupoid> {
        &self.groupoid
    }

    pub fn left(&self) -> &Arc<FiniteGroupoid> {
        &self.left
    }

    pub fn right(&self) -> &Arc<FiniteGroupoid> {
        &self.right
    }

    pub fn pair_object(&self, x: ObjectId, u: ObjectId) -> ObjectId {
        ObjectId(x.0 * self.right.n_objects() + u.0)
    }

    pub fn unpair_object(&self, o: ObjectId) -> (ObjectId, ObjectId) {
        let n = self.right.n_objects();
        (ObjectId(o.0 / n), ObjectId(o.0 % n))
    }

    pub fn pair_arrow(&self, g: ArrowId, h: ArrowId) -> ArrowId {
        ArrowId(g.0 * self.right.n_arrows() + h.0)
    }

    pub fn unpair_arrow(&self, a: ArrowId) -> (ArrowId, ArrowId) {
        let n = self.right.n_arrows();
        (ArrowId(a.0 / n), ArrowId(a.0 % n))
    }
}

/// Exhaustive check of the groupoid axioms. Violations name the offending
/// objects/arrows; an empty report means the tables form a groupoid.
pub fn validate_groupoid(g: &FiniteGroupoid) -> ValidationReport {
    let mut report = ValidationReport::new();
    let al = |a: ArrowId| g.arrow_label(a).to_string();
    let ol = |o: ObjectId| g.object_label(o).to_string();

    // Identities: self-loops, injective.
    for x in g.objects() {
        let i = g.ident(x);
        if g.src(i) != x || g.tgt(i) != x {
            report.violation(format!("ident({}) = {} is not a loop at {}", ol(x), al(i), ol(x)));
        }
    }
    for x in g.objects() {
        for y in g.objects() {
            if x != y && g.ident(x) == g.ident(y) {
                report.violation(format!("ident not injective: {} and {}", ol(x), ol(y)));
            }
        }
    }

    // Composition domain and endpoint rules.
    for a in g.arrows() {
        for b in g.arrows() {
            match g.comp(a, b) {
                Some(c) => {
                    if g.src(a) != g.tgt(b) {
                        report.violation(format!(
                            "comp({},{}) defined but src/tgt do not match",
                            al(a),
                            al(b)
                        ));
                    } else {
                        if g.src(c) != g.src(b) || g.tgt(c) != g.tgt(a) {
                            report.violation(format!(
                                "comp({},{}) = {} has wrong endpoints",
                                al(a),
                                al(b),
                                al(c)
                            ));
                        }
                    }
                }
                None => {
                    if g.src(a) == g.tgt(b) {
                        report.violation(format!(
                            "comp({},{}) undefined on a composable pair",
                            al(a),
                            al(b)
                        ));
                    }
                }
            }
        }
    }

    // Unit laws.
    for a in g.arrows() {
        let lt = g.comp(g.ident(g.tgt(a)), a);
        let rt = g.comp(a, g.ident(g.src(a)));
        if lt != Some(a) {
            report.violation(format!("ident·{} != {}", al(a), al(a)));
        }
        if rt != Some(a) {
            report.violation(format!("{}·ident != {}", al(a), al(a)));
        }
    }

    // Inverses: g·g⁻¹ = ident(tgt g), g⁻¹·g = ident(src g), src(g⁻¹) = tgt(g).
    for a in g.arrows() {
        let i = g.inv(a);
        if g.src(i) != g.tgt(a) || g.tgt(i) != g.src(a) {
            report.violation(format!("inv({}) = {} has wrong endpoints", al(a), al(i)));
        }
        if g.comp(a, i) != Some(g.ident(g.tgt(a))) {
            report.violation(format!("{}·{} != ident: g·g⁻¹ ≠ ι", al(a), al(i)));
        }
        if g.comp(i, a) != Some(g.ident(g.src(a))) {
            report.violation(format!("{}·{} != ident: g⁻¹·g ≠ ι", al(i), al(a)));
        }
    }

    // Associativity over every composable triple.
    for a in g.arrows() {
        for b in g.arrows() {
            if g.src(a) != g.tgt(b) {
                continue;
            }
            let ab = match g.comp(a, b) {
                Some(c) => c,
                None => continue,
            };
            for c in g.arrows() {
                if g.src(b) != g.tgt(c) {
                    continue;
                }
                let bc = match g.comp(b, c) {
                    Some(x) => x,
                    None => continue,
                };
                if g.comp(ab, c) != g.comp(a, bc) {
                    report.violation(format!(
                        "associativity fails on ({},{},{})",
                        al(a),
                        al(b),
                        al(c)
                    ));
                }
            }
        }
    }
    report
}

/// Connected components of a groupoid: `x ~ y` iff some arrow joins them.
pub fn connected_components(g: &FiniteGroupoid) -> Partition {
    let n = g.n_objects();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for a in g.arrows() {
        let (s, t) = (g.src(a).0, g.tgt(a).0);
        if s != t {
            adj[s].push(t);
            adj[t].push(s);
        }
    }
    let mut block = vec![usize::MAX; n];
    let mut next = 0;
    for start in 0..n {
        if block[start] != usize::MAX {
            continue;
        }
        let mut queue = vec![start];
        block[start] = next;
        while let Some(x) = queue.pop() {
            for &y in &adj[x] {
                if block[y] == usize::MAX {
                    block[y] = next;
                    queue.push(y);
                }
            }
        }
        next += 1;
    }
    Partition::from_block_ids(&block)
}

/// A functor between finite groupoids, given by its object and arrow tables.
#[derive(Debug, Clone)]
pub struct GroupoidMorphism {
    pub dom: Arc<FiniteGroupoid>,
    pub cod: Arc<FiniteGroupoid>,
    pub obj_map: Vec<ObjectId>,
    pub arr_map: Vec<ArrowId>,
}

impl GroupoidMorphism {
    pub fn identity(g: Arc<FiniteGroupoid>) -> GroupoidMorphism {
        GroupoidMorphism {
            obj_map: g.objects().collect(),
            arr_map: g.arrows().collect(),
            cod: g.clone(),
            dom: g,
        }
    }

    pub fn on_object(&self, x: ObjectId) -> ObjectId {
        self.obj_map[x.0]
    }

    pub fn on_arrow(&self, a: ArrowId) -> ArrowId {
        self.arr_map[a.0]
    }
}

/// Functoriality check. Also reports, for each object of the domain, whether
/// the induced map between isotropy groups is injective and/or surjective.
pub fn check_morphism(m: &GroupoidMorphism) -> ValidationReport {
    let mut report = ValidationReport::new();
    let (d, c) = (&m.dom, &m.cod);
    if m.obj_map.len() != d.n_objects() || m.arr_map.len() != d.n_arrows() {
        report.violation("tables sized inconsistently with the domain");
        return report;
    }
    if m.obj_map.iter().any(|o| o.0 >= c.n_objects()) || m.arr_map.iter().any(|a| a.0 >= c.n_arrows()) {
        report.violation("table entry out of range for the codomain");
        return report;
    }
    for a in d.arrows() {
        let fa = m.on_arrow(a);
        if c.src(fa) != m.on_object(d.src(a)) || c.tgt(fa) != m.on_object(d.tgt(a)) {
            report.violation(format!(
                "src/tgt not preserved on arrow {}",
                d.arrow_label(a)
            ));
        }
    }
    for x in d.objects() {
        if m.on_arrow(d.ident(x)) != c.ident(m.on_object(x)) {
            report.violation(format!("identity not preserved at {}", d.object_label(x)));
        }
    }
    for a in d.arrows() {
        for b in d.arrows() {
            if let Some(ab) = d.comp(a, b) {
                let want = c.comp(m.on_arrow(a), m.on_arrow(b));
                if want != Some(m.on_arrow(ab)) {
                    report.violation(format!(
                        "composition not preserved on ({},{})",
                        d.arrow_label(a),
                        d.arrow_label(b)
                    ));
                }
            }
        }
    }
    if report.passed() {
        for y in d.objects() {
            let dom_loops: Vec<ArrowId> = d.hom(y, y);
            let cod_obj = m.on_object(y);
            let cod_loops: Vec<ArrowId> = c.hom(cod_obj, cod_obj);
            let images: Vec<ArrowId> = dom_loops.iter().map(|&a| m.on_arrow(a)).collect();
            let injective = {
                let mut seen = std::collections::HashSet::new();
                images.iter().all(|a| seen.insert(a.0))
            };
            let surjective = cod_loops.iter().all(|l| images.contains(l));
            report.note(format!(
                "isotropy map at {}: injective={injective} surjective={surjective}",
                d.object_label(y)
            ));
        }
    }
    report
}

/// Subgroupoid of a parent, stored as object/arrow membership masks. `wide`
/// records whether every parent object is included.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroupoid {
    parent: Arc<FiniteGroupoid>,
    objects: Vec<bool>,
    arrows: Vec<bool>,
    wide: bool,
}

impl Subgroupoid {
    pub fn new(parent: Arc<FiniteGroupoid>, objects: Vec<bool>, arrows: Vec<bool>) -> Subgroupoid {
        assert_eq!(objects.len(), parent.n_objects());
        assert_eq!(arrows.len(), parent.n_arrows());
        let wide = objects.iter().all(|&b| b);
        Subgroupoid { parent, objects, arrows, wide }
    }

    /// The whole parent as a subgroupoid of itself.
    pub fn full(parent: Arc<FiniteGroupoid>) -> Subgroupoid {
        let objects = vec![true; parent.n_objects()];
        let arrows = vec![true; parent.n_arrows()];
        Subgroupoid::new(parent, objects, arrows)
    }

    /// All objects, identity arrows only.
    pub fn identity_wide(parent: Arc<FiniteGroupoid>) -> Subgroupoid {
        let mut arrows = vec![false; parent.n_arrows()];
        for x in parent.objects() {
            arrows[parent.ident(x).0] = true;
        }
        let objects = vec![true; parent.n_objects()];
        Subgroupoid::new(parent, objects, arrows)
    }

    /// Smallest subgroupoid containing the given arrows (and, when `wide`,
    /// every object with its identity): closes under endpoints, identities,
    /// inverses and composition. Worklist-driven, so the cost scales with
    /// the closure rather than the parent.
    pub fn closure(parent: Arc<FiniteGroupoid>, seed_arrows: &[ArrowId], wide: bool) -> Subgroupoid {
        let mut objects = vec![wide; parent.n_objects()];
        let mut arrows = vec![false; parent.n_arrows()];
        let mut selected: Vec<ArrowId> = Vec::new();
        let mut queue: Vec<ArrowId> = Vec::new();
        let push = |a: ArrowId,
                        arrows: &mut Vec<bool>,
                        queue: &mut Vec<ArrowId>,
                        selected: &mut Vec<ArrowId>| {
            if !arrows[a.0] {
                arrows[a.0] = true;
                queue.push(a);
                selected.push(a);
            }
        };
        for &a in seed_arrows {
            push(a, &mut arrows, &mut queue, &mut selected);
        }
        if wide {
            for x in parent.objects() {
                push(parent.ident(x), &mut arrows, &mut queue, &mut selected);
            }
        }
        while let Some(a) = queue.pop() {
            for o in [parent.src(a), parent.tgt(a)] {
                if !objects[o.0] {
                    objects[o.0] = true;
                    push(parent.ident(o), &mut arrows, &mut queue, &mut selected);
                }
            }
            push(parent.inv(a), &mut arrows, &mut queue, &mut selected);
            // Compose with everything selected so far, in both orders.
            let snapshot: Vec<ArrowId> = selected.clone();
            for &b in &snapshot {
                if let Some(c) = parent.comp(a, b) {
                    push(c, &mut arrows, &mut queue, &mut selected);
                }
                if let Some(c) = parent.comp(b, a) {
                    push(c, &mut arrows, &mut queue, &mut selected);
                }
            }
        }
        Subgroupoid::new(parent, objects, arrows)
    }

    pub fn parent(&self) -> &Arc<FiniteGroupoid> {
        &self.parent
    }

    pub fn is_wide(&self) -> bool {
        self.wide
    }

    pub fn contains_object(&self, x: ObjectId) -> bool {
        self.objects[x.0]
    }

    pub fn contains_arrow(&self, a: ArrowId) -> bool {
        self.arrows[a.0]
    }

    pub fn object_mask(&self) -> &[bool] {
        &self.objects
    }

    pub fn arrow_mask(&self) -> &[bool] {
        &self.arrows
    }

    pub fn objects(&self) -> impl Iterator<Item = ObjectId> + '_ {
        self.parent.objects().filter(|o| self.objects[o.0])
    }

    pub fn arrows(&self) -> impl Iterator<Item = ArrowId> + '_ {
        self.parent.arrows().filter(|a| self.arrows[a.0])
    }

    pub fn n_selected_objects(&self) -> usize {
        self.objects.iter().filter(|&&b| b).count()
    }

    pub fn n_selected_arrows(&self) -> usize {
        self.arrows.iter().filter(|&&b| b).count()
    }

    /// Restriction to the loops at one member object (still a subgroupoid of
    /// the same parent, with a single object).
    pub fn isotropy_at(&self, x: ObjectId) -> Subgroupoid {
        let mut objects = vec![false; self.parent.n_objects()];
        objects[x.0] = true;
        let mut arrows = vec![false; self.parent.n_arrows()];
        for a in self.parent.arrows() {
            if self.arrows[a.0] && self.parent.src(a) == x && self.parent.tgt(a) == x {
                arrows[a.0] = true;
            }
        }
        Subgroupoid::new(self.parent.clone(), objects, arrows)
    }

    /// Materializes the subgroupoid as a standalone groupoid with densely
    /// renumbered objects/arrows, plus the inclusion morphism back into the
    /// parent.
    pub fn materialize(&self) -> (Arc<FiniteGroupoid>, GroupoidMorphism) {
        let objs: Vec<ObjectId> = self.objects().collect();
        let arrs: Vec<ArrowId> = self.arrows().collect();
        let obj_back: Vec<usize> = {
            let mut v = vec![usize::MAX; self.parent.n_objects()];
            for (i, o) in objs.iter().enumerate() {
                v[o.0] = i;
            }
            v
        };
        let arr_back: Vec<usize> = {
            let mut v = vec![usize::MAX; self.parent.n_arrows()];
            for (i, a) in arrs.iter().enumerate() {
                v[a.0] = i;
            }
            v
        };
        let n1 = arrs.len();
        let mut comp = vec![None; n1 * n1];
        for (i, &a) in arrs.iter().enumerate() {
            for (j, &b) in arrs.iter().enumerate() {
                if let Some(c) = self.parent.comp(a, b) {
                    if self.arrows[c.0] {
                        comp[i * n1 + j] = Some(ArrowId(arr_back[c.0]));
                    }
                }
            }
        }
        let g = FiniteGroupoid::from_tables(
            objs.iter().map(|&o| self.parent.object_label(o).to_string()).collect(),
            arrs.iter().map(|&a| self.parent.arrow_label(a).to_string()).collect(),
            arrs.iter().map(|&a| ObjectId(obj_back[self.parent.src(a).0])).collect(),
            arrs.iter().map(|&a| ObjectId(obj_back[self.parent.tgt(a).0])).collect(),
            objs.iter().map(|&o| ArrowId(arr_back[self.parent.ident(o).0])).collect(),
            arrs.iter().map(|&a| ArrowId(arr_back[self.parent.inv(a).0])).collect(),
            comp,
        )
        .expect("materialized subgroupoid tables are consistent");
        let g = Arc::new(g);
        let incl = GroupoidMorphism {
            dom: g.clone(),
            cod: self.parent.clone(),
            obj_map: objs,
            arr_map: arrs,
        };
        (g, incl)
    }
}

/// Closure check for a subgroupoid mask: identities of selected objects,
/// inverses, compositions, and endpoints must stay inside. Notes whether the
/// subgroupoid is wide.
pub fn subgroupoid_check(s: &Subgroupoid) -> ValidationReport {
    let mut report = ValidationReport::new();
    let p = s.parent();
    for a in p.arrows() {
        if !s.contains_arrow(a) {
            continue;
        }
        if !s.contains_object(p.src(a)) || !s.contains_object(p.tgt(a)) {
            report.violation(format!(
                "endpoints of {} not in the object subset",
                p.arrow_label(a)
            ));
        }
        if !s.contains_arrow(p.inv(a)) {
            report.violation(format!("not inverse-closed at {}", p.arrow_label(a)));
        }
    }
    for x in p.objects() {
        if s.contains_object(x) && !s.contains_arrow(p.ident(x)) {
            report.violation(format!("missing identity at {}", p.object_label(x)));
        }
    }
    let selected: Vec<ArrowId> = s.arrows().collect();
    for &a in &selected {
        for &b in &selected {
            if let Some(c) = p.comp(a, b) {
                if !s.contains_arrow(c) {
                    report.violation(format!(
                        "not composition-closed: {}·{} = {} escapes",
                        p.arrow_label(a),
                        p.arrow_label(b),
                        p.arrow_label(c)
                    ));
                }
            }
        }
    }
    report.note(format!("wide={}", s.is_wide()));
    report
}

/// The one-object subgroupoid of all loops at `x`.
pub fn isotropy_group(g: &Arc<FiniteGroupoid>, x: ObjectId) -> Result<Subgroupoid, BuildError> {
    if x.0 >= g.n_objects() {
        return Err(BuildError::UnknownObject(format!("#{}", x.0)));
    }
    Ok(Subgroupoid::full(g.clone()).isotropy_at(x))
}

/// Convenience builders used throughout tests and examples.
pub fn trivial(labels: &[&str]) -> FiniteGroupoid {
    build_groupoid(&Builder::Trivial { elements: labels.iter().map(|s| s.to_string()).collect() })
        .expect("trivial groupoid")
}

pub fn pairs(labels: &[&str]) -> FiniteGroupoid {
    build_groupoid(&Builder::Pairs { elements: labels.iter().map(|s| s.to_string()).collect() })
        .expect("pairs groupoid")
}

pub fn eqrel(labels: &[&str], classes: &[&[&str]]) -> FiniteGroupoid {
    build_groupoid(&Builder::EqRel {
        elements: labels.iter().map(|s| s.to_string()).collect(),
        classes: classes
            .iter()
            .map(|c| c.iter().map(|s| s.to_string()).collect())
            .collect(),
    })
    .expect("eqrel groupoid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairs_groupoid_on_two_elements_is_valid() {
        let g = pairs(&["a", "b"]);
        assert_eq!(g.n_objects(), 2);
        assert_eq!(g.n_arrows(), 4);
        assert!(validate_groupoid(&g).passed());
    }

    #[test]
    fn pairs_on_three_has_nine_arrows() {
        let g = pairs(&["a", "b", "c"]);
        assert_eq!(g.n_arrows(), 9);
        assert!(validate_groupoid(&g).passed());
    }

    #[test]
    fn broken_inverse_is_reported() {
        let g = pairs(&["a", "b"]);
        let mut bad = g.clone();
        // Point the inverse of the non-loop arrow (a,b) at itself.
        let ab = g.arrow_by_label("(a,b)").unwrap();
        bad.inv[ab.0] = ab;
        let report = validate_groupoid(&bad);
        assert!(!report.passed());
        assert!(report.violations.iter().any(|v| v.contains("g·g⁻¹ ≠ ι") || v.contains("endpoints")));
    }

    #[test]
    fn cyclic_group_of_order_three_passes() {
        let g = cyclic_group(3).unwrap();
        assert_eq!(g.n_objects(), 1);
        assert_eq!(g.n_arrows(), 3);
        assert!(validate_groupoid(&g).passed());
        // Direct enumeration of the Cayley table of Z/3.
        for i in 0..3usize {
            for j in 0..3usize {
                let c = g.comp2(ArrowId(i), ArrowId(j));
                assert_eq!(c.0, (i + j) % 3);
            }
        }
    }

    #[test]
    fn bad_cayley_is_rejected() {
        let names: Vec<String> = vec!["e".into(), "x".into()];
        // x·x = x breaks inverses.
        let cayley = vec![vec![0, 1], vec![1, 1]];
        let err = build_groupoid(&Builder::OneObjectGroup { element_names: names, cayley });
        assert!(matches!(err, Err(BuildError::MalformedParams(_))));
    }

    #[test]
    fn eqrel_on_three_with_two_classes() {
        let g = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        assert_eq!(g.n_objects(), 3);
        // Relation pairs by enumeration: (a,a),(a,b),(b,a),(b,b),(c,c).
        assert_eq!(g.n_arrows(), 5);
        assert!(validate_groupoid(&g).passed());
    }

    #[test]
    fn overlapping_partition_rejected() {
        let r = build_groupoid(&Builder::EqRel {
            elements: vec!["a".into(), "b".into()],
            classes: vec![vec!["a".into(), "b".into()], vec!["b".into()]],
        });
        assert!(matches!(r, Err(BuildError::MalformedParams(_))));
    }

    #[test]
    fn product_of_pairs_and_trivial() {
        let a = Arc::new(pairs(&["a", "b"]));
        let b = Arc::new(trivial(&["u"]));
        let p = build_groupoid(&Builder::Product(a, b)).unwrap();
        assert_eq!(p.n_objects(), 2);
        assert_eq!(p.n_arrows(), 4);
        assert!(validate_groupoid(&p).passed());
    }

    #[test]
    fn action_groupoid_of_z2_swapping() {
        // Z/2 on {1,2,3} swapping 1 and 2.
        let c2 = Arc::new(cyclic_group(2).unwrap());
        let act = vec![vec![0, 1], vec![1, 0], vec![2, 2]];
        let g = build_groupoid(&Builder::ActionGroupoid {
            group: c2,
            carrier: vec!["1".into(), "2".into(), "3".into()],
            act,
        })
        .unwrap();
        assert_eq!(g.n_objects(), 3);
        assert_eq!(g.n_arrows(), 6);
        assert!(validate_groupoid(&g).passed());
        let comps = connected_components(&g);
        assert_eq!(comps.blocks(), &[vec![0, 1], vec![2]]);
        // Isotropy: trivial at 1, all of Z/2 at 3.
        let ga = Arc::new(g);
        assert_eq!(isotropy_group(&ga, ObjectId(0)).unwrap().n_selected_arrows(), 1);
        assert_eq!(isotropy_group(&ga, ObjectId(2)).unwrap().n_selected_arrows(), 2);
    }

    #[test]
    fn action_builder_rejects_non_action() {
        let c2 = Arc::new(cyclic_group(2).unwrap());
        // Non-action: acting twice by the swap is not the identity.
        let act = vec![vec![0, 1], vec![1, 1]];
        let r = build_groupoid(&Builder::ActionGroupoid {
            group: c2,
            carrier: vec!["1".into(), "2".into()],
            act,
        });
        assert!(matches!(r, Err(BuildError::MalformedParams(_))));
    }

    #[test]
    fn induced_groupoid_over_a_group() {
        // Induced groupoid of C2 along X = {p,q} -> {*}: arrows X x C2 x X.
        let c2 = Arc::new(cyclic_group(2).unwrap());
        let g = build_groupoid(&Builder::Induced {
            base: c2,
            carrier: vec!["p".into(), "q".into()],
            structure: vec![ObjectId(0), ObjectId(0)],
        })
        .unwrap();
        assert_eq!(g.n_objects(), 2);
        assert_eq!(g.n_arrows(), 8);
        assert!(validate_groupoid(&g).passed());
    }

    #[test]
    fn fibre_groupoid_equals_eqrel_of_preimages() {
        let f = build_groupoid(&Builder::Fibre {
            elements: vec!["a".into(), "b".into(), "c".into()],
            image: vec!["0".into(), "0".into(), "1".into()],
        })
        .unwrap();
        let e = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        assert_eq!(f, e);
    }

    #[test]
    fn opposite_is_an_involution() {
        for g in [pairs(&["a", "b", "c"]), cyclic_group(4).unwrap()] {
            let opop = opposite(&opposite(&g));
            assert_eq!(opop, g);
            assert!(validate_groupoid(&opposite(&g)).passed());
        }
    }

    #[test]
    fn isotropy_of_pairs_is_trivial() {
        let g = Arc::new(pairs(&["a", "b", "c"]));
        for x in g.objects() {
            let iso = isotropy_group(&g, x).unwrap();
            assert_eq!(iso.n_selected_arrows(), 1);
            assert!(subgroupoid_check(&iso).passed());
        }
    }

    #[test]
    fn components_trivial_and_pairs_and_eqrel() {
        assert_eq!(connected_components(&trivial(&["a", "b"])).len(), 2);
        assert_eq!(connected_components(&pairs(&["a", "b", "c"])).len(), 1);
        let e = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        assert_eq!(connected_components(&e).blocks(), &[vec![0, 1], vec![2]]);
    }

    #[test]
    fn components_agree_with_union_find_oracle() {
        let gs = [
            eqrel(&["a", "b", "c", "d"], &[&["a", "c"], &["b"], &["d"]]),
            pairs(&["x", "y"]),
            trivial(&["p", "q", "r"]),
        ];
        for g in gs {
            let mut uf = UnionFind::new(g.n_objects());
            for a in g.arrows() {
                uf.union(g.src(a).0, g.tgt(a).0);
            }
            assert_eq!(connected_components(&g), uf.into_partition());
        }
    }

    #[test]
    fn identity_morphism_passes() {
        let g = Arc::new(pairs(&["a", "b"]));
        let m = GroupoidMorphism::identity(g);
        assert!(check_morphism(&m).passed());
    }

    #[test]
    fn eqrel_into_pairs_inclusion_is_a_morphism() {
        let e = Arc::new(eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]));
        let p = Arc::new(pairs(&["a", "b", "c"]));
        let obj_map = e.objects().map(|x| p.object_by_label(e.object_label(x)).unwrap()).collect();
        let arr_map = e.arrows().map(|a| p.arrow_by_label(e.arrow_label(a)).unwrap()).collect();
        let m = GroupoidMorphism { dom: e, cod: p, obj_map, arr_map };
        assert!(check_morphism(&m).passed());
    }

    #[test]
    fn collapsing_map_that_breaks_composition_fails() {
        // pairs{a,b} -> C2 sending every arrow to the identity is not a
        // functor on objects collapsed the other way; build a genuinely bad
        // arrow table: send (a,b) to the non-identity loop and everything
        // else to the identity.
        let p = Arc::new(pairs(&["a", "b"]));
        let c2 = Arc::new(cyclic_group(2).unwrap());
        let mut arr_map = vec![ArrowId(0); p.n_arrows()];
        arr_map[p.arrow_by_label("(a,b)").unwrap().0] = ArrowId(1);
        let m = GroupoidMorphism {
            dom: p.clone(),
            cod: c2,
            obj_map: vec![ObjectId(0); 2],
            arr_map,
        };
        let r = check_morphism(&m);
        assert!(!r.passed());
        assert!(r.violations.iter().any(|v| v.contains("composition")));
    }

    #[test]
    fn subgroupoid_closure_and_check() {
        let p = Arc::new(pairs(&["a", "b"]));
        // Identity-only wide subgroupoid passes and is wide.
        let idw = Subgroupoid::identity_wide(p.clone());
        let rep = subgroupoid_check(&idw);
        assert!(rep.passed());
        assert!(idw.is_wide());

        // Arrows {(a,b)} without (b,a) fail inverse closure.
        let mut arrows = vec![false; p.n_arrows()];
        arrows[p.arrow_by_label("(a,b)").unwrap().0] = true;
        for x in p.objects() {
            arrows[p.ident(x).0] = true;
        }
        let bad = Subgroupoid::new(p.clone(), vec![true, true], arrows);
        let rep = subgroupoid_check(&bad);
        assert!(!rep.passed());
        assert!(rep.violations.iter().any(|v| v.contains("inverse")));

        // Closure of the same seed passes.
        let closed = Subgroupoid::closure(p.clone(), &[p.arrow_by_label("(a,b)").unwrap()], true);
        assert!(subgroupoid_check(&closed).passed());
        assert_eq!(closed.n_selected_arrows(), 4);
    }

    #[test]
    fn diagonal_of_c2_times_c2_is_closed() {
        let c2 = Arc::new(cyclic_group(2).unwrap());
        let prod = ProductGroupoid::new(c2.clone(), c2.clone());
        let mut arrows = vec![false; prod.groupoid().n_arrows()];
        for k in 0..2 {
            arrows[prod.pair_arrow(ArrowId(k), ArrowId(k)).0] = true;
        }
        let diag = Subgroupoid::new(prod.groupoid().clone(), vec![true], arrows);
        assert!(subgroupoid_check(&diag).passed());
    }

    #[test]
    fn materialized_subgroupoid_is_a_groupoid_with_an_inclusion() {
        let p = Arc::new(pairs(&["a", "b", "c"]));
        let e = Subgroupoid::closure(p.clone(), &[p.arrow_by_label("(a,b)").unwrap()], true);
        let (g, incl) = e.materialize();
        assert!(validate_groupoid(&g).passed());
        assert!(check_morphism(&incl).passed());
        assert_eq!(g.n_arrows(), e.n_selected_arrows());
    }

    #[test]
    fn permuted_preserves_validity_and_reversal_is_involutive() {
        let g = eqrel(&["a", "b", "c"], &[&["a", "b"], &["c"]]);
        let r = g.reversed();
        assert!(validate_groupoid(&r).passed());
        assert_eq!(r.reversed(), g);
    }

    #[test]
    fn empty_groupoid_is_legal() {
        let g = trivial(&[]);
        assert_eq!(g.n_objects(), 0);
        assert_eq!(g.n_arrows(), 0);
        assert!(validate_groupoid(&g).passed());
        assert!(connected_components(&g).is_empty());
    }
}
