//! Extremal graphs of families of group-ring elements.
//!
//! For a family Ξ and a slack μ, the graph Γ_μ(Ξ) has a vertex for each
//! member whose geometric support reaches within μ of the family's maximal
//! absolute value, and one edge per μ-extremal point shared by two supports.
//! Components of Γ_μ localize μ-relations, and the color partition (members
//! up to trivial-unit multiples) controls how long embedded paths can get.

use crate::error::{Error, Result};
use crate::ring::{ColorKey, RingElement, RingVector};
use crate::scalar::{Domain, Scalar};
use crate::space::{eps_center, exact_radius, measure, Point, Rat, Size, SpaceOracle};
use crate::words::Word;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt::Write as _;

/// One member of a family: a nonzero group-ring vector together with the
/// bookkeeping needed to translate reductions back into coefficients of the
/// original relation. `element = Σ coeff · g · ξ_origin` over `contributions`.
#[derive(Clone, Debug)]
pub struct FamilyMember {
    pub element: RingVector,
    pub contributions: Vec<(usize, Word, Scalar)>,
    pub color: usize,
    pub key: ColorKey,
}

/// An indexed family with its color partition. No two members are scalar
/// multiples of each other: violations are merged at construction (summing
/// coefficients) and recorded in `merge_log`.
#[derive(Clone, Debug)]
pub struct Family {
    domain: Domain,
    pub members: Vec<FamilyMember>,
    pub color_count: usize,
    pub merge_log: Vec<String>,
}

impl Family {
    pub fn domain(&self) -> Domain {
        self.domain
    }

    pub fn build(domain: Domain, raw: Vec<(RingVector, Vec<(usize, Word, Scalar)>)>) -> Result<Family> {
        let mut members: Vec<(RingVector, Vec<(usize, Word, Scalar)>, ColorKey)> = Vec::new();
        let mut merge_log = Vec::new();
        'outer: for (element, contribs) in raw {
            if element.is_zero() {
                continue;
            }
            let key = element.color_key()?;
            for (prev, prev_contribs, prev_key) in members.iter_mut() {
                if let Some((lambda, g)) = key.unit_from(prev_key, &domain)? {
                    if g.is_empty() {
                        // scalar multiple of an existing member: merge
                        merge_log.push(format!(
                            "merged scalar multiple {} into {} (factor {lambda})",
                            element, prev
                        ));
                        let merged = prev.add(&element)?;
                        prev_contribs.extend(contribs);
                        if merged.is_zero() {
                            merge_log.push(format!("merged member {} cancelled to zero", prev));
                        }
                        *prev = merged;
                        continue 'outer;
                    }
                }
            }
            members.push((element, contribs, key));
        }
        // merged members may have cancelled to zero; drop them
        let members: Vec<_> = members.into_iter().filter(|(e, _, _)| !e.is_zero()).collect();
        // recompute keys for merged elements and assign color ids
        let mut reps: Vec<ColorKey> = Vec::new();
        let mut out = Vec::new();
        for (element, contributions, _) in members {
            let key = element.color_key()?;
            let color = match reps.iter().position(|r| r.representative == key.representative) {
                Some(c) => c,
                None => {
                    reps.push(key.clone());
                    reps.len() - 1
                }
            };
            out.push(FamilyMember { element, contributions, color, key });
        }
        Ok(Family { domain, members: out, color_count: reps.len(), merge_log })
    }

    /// Family from plain elements, one member per nonzero input.
    pub fn from_vectors(domain: Domain, elements: Vec<RingVector>) -> Result<Family> {
        let raw = elements
            .into_iter()
            .enumerate()
            .map(|(i, e)| {
                let one = domain.one();
                (e, vec![(i, Word::identity(), one)])
            })
            .collect();
        Family::build(domain, raw)
    }

    /// Sum of all members (the relation witness).
    pub fn total(&self) -> Result<RingVector> {
        self.sum(0..self.members.len())
    }

    pub fn sum(&self, indices: impl IntoIterator<Item = usize>) -> Result<RingVector> {
        let mut it = indices.into_iter();
        let first = match it.next() {
            Some(i) => self.members[i].element.clone(),
            None => return Err(Error::Empty("sum over no members".into())),
        };
        it.try_fold(first, |acc, i| acc.add(&self.members[i].element))
    }
}

/// Expansion of a dependence `Σ α_i ξ_i`: one family member per pair
/// `(i, g)` with `α_i^g ≠ 0`, carrying the element `α_i^g · g ξ_i`.
pub fn expand_relation(xs: &[RingVector], alphas: &[RingElement]) -> Result<Family> {
    if xs.len() != alphas.len() {
        return Err(Error::Precondition("coefficient and element counts differ".into()));
    }
    if alphas.iter().all(|a| a.is_zero()) {
        return Err(Error::Precondition("all coefficients are zero".into()));
    }
    let domain = xs
        .first()
        .map(|x| x.domain())
        .ok_or_else(|| Error::Empty("empty family".into()))?;
    let mut raw = Vec::new();
    for (i, (xi, alpha)) in xs.iter().zip(alphas).enumerate() {
        for (g, c) in alpha.terms() {
            let element = xi.translate(g).scale(c);
            raw.push((element, vec![(i, g.clone(), c.clone())]));
        }
    }
    Family::build(domain, raw)
}

/// Exact geometry of one color class, computed on the canonical
/// representative and translated to members, so centers are equivariant by
/// construction.
#[derive(Clone, Debug)]
pub struct ColorGeometry {
    pub center: Point,
    pub radius: Rat,
    /// Covering slack of the chosen center over the exact radius.
    pub eps: Rat,
}

/// The μ-extremal graph of a family, with the color geometry the reduction
/// and the audits both need.
pub struct ExtremalGraph {
    pub mu: Rat,
    /// Maximal absolute value over the family (−∞ for an empty family).
    pub d: Size,
    pub member_abs: Vec<Size>,
    pub vertices: Vec<usize>,
    pub edges: Vec<(usize, usize, Point)>,
    /// Components of the vertex set, each sorted, ordered by least vertex.
    pub components: Vec<Vec<usize>>,
    pub color_geometry: Vec<ColorGeometry>,
}

impl ExtremalGraph {
    pub fn is_vertex(&self, v: usize) -> bool {
        self.vertices.binary_search(&v).is_ok()
    }

    pub fn component_of(&self, v: usize) -> Option<usize> {
        self.components.iter().position(|c| c.binary_search(&v).is_ok())
    }

    pub fn adjacency(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut adj: BTreeMap<usize, Vec<usize>> = self.vertices.iter().map(|&v| (v, Vec::new())).collect();
        for (v, w, _) in &self.edges {
            adj.get_mut(v).unwrap().push(*w);
            adj.get_mut(w).unwrap().push(*v);
        }
        for nbrs in adj.values_mut() {
            nbrs.sort_unstable();
            nbrs.dedup();
        }
        adj
    }

    /// Length (edge count) of the longest embedded path, by exhaustive search.
    pub fn longest_embedded_path(&self) -> usize {
        let adj = self.adjacency();
        fn dfs(adj: &BTreeMap<usize, Vec<usize>>, cur: usize, visited: &mut Vec<usize>) -> usize {
            let mut best = visited.len() - 1;
            for &n in &adj[&cur] {
                if !visited.contains(&n) {
                    visited.push(n);
                    best = best.max(dfs(adj, n, visited));
                    visited.pop();
                }
            }
            best
        }
        let mut best = 0;
        for &v in &self.vertices {
            let mut visited = vec![v];
            best = best.max(dfs(&adj, v, &mut visited));
        }
        best
    }

    /// Graph-metric diameter of one component (hops over the deduplicated
    /// adjacency).
    pub fn component_diameter(&self, comp: &[usize]) -> usize {
        let adj = self.adjacency();
        let mut best = 0;
        for &src in comp {
            let mut dist: BTreeMap<usize, usize> = BTreeMap::from([(src, 0)]);
            let mut queue = std::collections::VecDeque::from([src]);
            while let Some(u) = queue.pop_front() {
                for &n in &adj[&u] {
                    if !dist.contains_key(&n) {
                        dist.insert(n, dist[&u] + 1);
                        queue.push_back(n);
                    }
                }
            }
            best = best.max(dist.values().copied().max().unwrap_or(0));
        }
        best
    }

    /// Edge-list text with vertex annotation comments, mirroring the oracle
    /// edge-list format.
    pub fn to_edge_list(&self, family: &Family) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "vertices {} mu {}", self.vertices.len(), self.mu);
        for &v in &self.vertices {
            let g = &self.color_geometry[family.members[v].color];
            let _ = writeln!(out, "# {} {} {} {}", v, family.members[v].color, g.radius, self.member_abs[v]);
        }
        for (v, w, p) in &self.edges {
            let _ = writeln!(out, "{v} {w} {p}");
        }
        out
    }
}

/// Build Γ_μ of the family against the oracle.
pub fn build_gamma(family: &Family, mu: Rat, oracle: &SpaceOracle) -> Result<ExtremalGraph> {
    let all: Vec<usize> = (0..family.members.len()).collect();
    build_gamma_subset(family, &all, mu, oracle)
}

/// Γ_μ of the sub-family given by `subset` (member indices keep their family
/// numbering). The extremal level `d` is taken over the subset only.
pub fn build_gamma_subset(
    family: &Family,
    subset: &[usize],
    mu: Rat,
    oracle: &SpaceOracle,
) -> Result<ExtremalGraph> {
    let mut member_abs = vec![Size::NegInf; family.members.len()];
    let mut supports: Vec<Vec<Point>> = vec![Vec::new(); family.members.len()];
    for &v in subset {
        let meas = measure(&family.members[v].element, oracle)?;
        member_abs[v] = meas.abs;
        supports[v] = meas.support;
    }
    let d = subset.iter().map(|&v| member_abs[v]).max().unwrap_or(Size::NegInf);

    let mut vertices = Vec::new();
    let mut extremal: Vec<Vec<Point>> = vec![Vec::new(); family.members.len()];
    if let Size::Fin(dv) = d {
        let threshold = dv - mu;
        for &v in subset {
            for p in &supports[v] {
                if oracle.abs(p)? >= threshold {
                    extremal[v].push(p.clone());
                }
            }
            if !extremal[v].is_empty() {
                vertices.push(v);
            }
        }
        vertices.sort_unstable();
    }

    let mut edges = Vec::new();
    for (a, &v) in vertices.iter().enumerate() {
        for &w in &vertices[a + 1..] {
            for p in &extremal[v] {
                if extremal[w].contains(p) {
                    edges.push((v, w, p.clone()));
                }
            }
        }
    }

    // components by union-find over the vertex list
    let mut parent: BTreeMap<usize, usize> = vertices.iter().map(|&v| (v, v)).collect();
    fn find(parent: &mut BTreeMap<usize, usize>, v: usize) -> usize {
        let p = parent[&v];
        if p == v {
            v
        } else {
            let r = find(parent, p);
            parent.insert(v, r);
            r
        }
    }
    for i in 0..edges.len() {
        let (v, w) = (edges[i].0, edges[i].1);
        let (rv, rw) = (find(&mut parent, v), find(&mut parent, w));
        if rv != rw {
            let lo = rv.min(rw);
            parent.insert(rv.max(rw), lo);
        }
    }
    let mut comp_map: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &v in &vertices {
        comp_map.entry(find(&mut parent, v)).or_default().push(v);
    }
    let components: Vec<Vec<usize>> = comp_map.into_values().collect();

    // per-color geometry on canonical representatives (colors in the subset)
    let mut color_geometry = vec![
        ColorGeometry { center: oracle.origin(), radius: Rat::zero(), eps: Rat::zero() };
        family.color_count
    ];
    let mut seen = vec![false; family.color_count];
    for m in subset.iter().map(|&v| &family.members[v]) {
        if seen[m.color] {
            continue;
        }
        seen[m.color] = true;
        let rep_support: Vec<Point> =
            m.key.representative.union_support().into_iter().map(Point::Vertex).collect();
        for p in &rep_support {
            oracle.require_certified(p)?;
        }
        let (center, _) = eps_center(oracle, &rep_support)?;
        let (radius, _) = exact_radius(oracle, &rep_support)?;
        let mut cover = Rat::zero();
        for p in &rep_support {
            cover = cover.max(oracle.dist(&center, p)?);
        }
        color_geometry[m.color] = ColorGeometry { center, radius, eps: cover - radius };
    }

    Ok(ExtremalGraph { mu, d, member_abs, vertices, edges, components, color_geometry })
}

/// Equivariant center of a member: the canonical representative's center
/// translated by the member's translator.
pub fn member_center(family: &Family, graph: &ExtremalGraph, v: usize) -> Point {
    let m = &family.members[v];
    graph.color_geometry[m.color].center.translate(&m.key.translator)
}

/// Does the family satisfy `|Σ ξ_v| < max |ξ_v| − μ`? Exact, with the −∞
/// convention for the zero sum.
pub fn is_mu_relation(family: &Family, mu: Rat, oracle: &SpaceOracle) -> Result<bool> {
    if family.members.is_empty() {
        return Ok(false);
    }
    let total = measure(&family.total()?, oracle)?.abs;
    let max = family
        .members
        .iter()
        .map(|m| measure(&m.element, oracle).map(|x| x.abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .max()
        .unwrap_or(Size::NegInf);
    let rhs = match max {
        Size::NegInf => Size::NegInf,
        Size::Fin(r) => Size::Fin(r - mu),
    };
    Ok(total < rhs)
}

/// Per-component μ-relation verdicts for components meeting Γ_0.
pub struct ComponentRelations {
    pub verdicts: Vec<(Vec<usize>, bool)>,
    pub all_hold: bool,
}

/// Every component of Γ_μ containing a vertex of Γ_0 must define its own
/// μ-relation whenever the whole family does. A false verdict is an internal
/// consistency failure (the statement is unconditional), surfaced to callers
/// rather than silently passed.
pub fn component_relations(
    family: &Family,
    graph: &ExtremalGraph,
    mu: Rat,
    oracle: &SpaceOracle,
) -> Result<ComponentRelations> {
    if !is_mu_relation(family, mu, oracle)? {
        return Err(Error::Precondition("the family does not define a mu-relation".into()));
    }
    let d = graph.d;
    let mut verdicts = Vec::new();
    let mut all_hold = true;
    for comp in &graph.components {
        let touches_gamma0 = comp.iter().any(|&v| graph.member_abs[v] == d);
        if !touches_gamma0 {
            continue;
        }
        let sub_total = family.sum(comp.iter().copied())?;
        let lhs = measure(&sub_total, oracle)?.abs;
        let rhs = match d {
            Size::NegInf => Size::NegInf,
            Size::Fin(r) => Size::Fin(r - mu),
        };
        let holds = lhs < rhs;
        all_hold &= holds;
        verdicts.push((comp.clone(), holds));
    }
    Ok(ComponentRelations { verdicts, all_hold })
}
