//! Seeded randomized audit of the geometric facts the reduction rests on.
//!
//! Each registered invariant is checked on fresh random instances every
//! trial: point-set inequalities against exhaustive scans, group-ring
//! filtration laws, extremal-graph structure under its displacement
//! hypotheses, and the contract of the reduction step on synthetic exact
//! relations (built so the dependence certificate holds by construction).
//! Failures carry a shrunk counterexample; instances whose hypotheses fail
//! are tallied as skipped, never as silent passes.

use crate::error::{Error, Result};
use crate::extremal::{build_gamma, component_relations, is_mu_relation, member_center, Family};
use crate::reduce::{reduce_step, zero_coordinate, ReductionConstants};
use crate::ring::{RingElement, RingVector};
use crate::scalar::{Domain, Scalar};
use crate::space::{
    eps_center, exact_radius, four_point_delta, gromov_product, half, measure, rat, Point, Rat,
    Size, SpaceOracle,
};
use crate::words::{Letter, Word};
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Default)]
pub struct Tally {
    pub checks: u64,
    pub failures: u64,
    pub skipped: u64,
    pub examples: Vec<String>,
}

#[derive(Debug)]
pub struct AuditReport {
    pub trials: u64,
    pub seed: u64,
    pub tallies: BTreeMap<String, Tally>,
    pub notes: Vec<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.tallies.values().all(|t| t.failures == 0)
    }

    pub fn failure_count(&self) -> u64 {
        self.tallies.values().map(|t| t.failures).sum()
    }
}

pub struct AuditOptions {
    pub trials: u64,
    pub seed: u64,
    pub domain: Domain,
    pub unsafe_mode: bool,
}

struct Auditor<'a> {
    oracle: &'a SpaceOracle,
    domain: Domain,
    unsafe_mode: bool,
    /// word-length budget keeping supports inside the certified region
    point_len: usize,
    tallies: BTreeMap<String, Tally>,
}

impl<'a> Auditor<'a> {
    fn check(&mut self, name: &str, ok: bool, example: impl FnOnce() -> String) {
        let t = self.tallies.entry(name.to_string()).or_default();
        t.checks += 1;
        if !ok {
            t.failures += 1;
            if t.examples.len() < 5 {
                t.examples.push(example());
            }
        }
    }

    fn skip(&mut self, name: &str) {
        let t = self.tallies.entry(name.to_string()).or_default();
        t.skipped += 1;
    }

    fn rand_word(&self, rng: &mut ChaCha8Rng, max_len: usize) -> Word {
        let rank = self.oracle.alphabet().rank;
        let len = rng.gen_range(0..=max_len);
        let mut letters: Vec<Letter> = Vec::with_capacity(len);
        for _ in 0..len {
            loop {
                let l = Letter { index: rng.gen_range(0..rank), inverse: rng.gen_bool(0.5) };
                let cancels = letters
                    .last()
                    .map(|t| t.index == l.index && t.inverse != l.inverse)
                    .unwrap_or(false);
                if !cancels {
                    letters.push(l);
                    break;
                }
            }
        }
        Word::reduce(letters)
    }

    fn rand_vertex(&self, rng: &mut ChaCha8Rng) -> Point {
        Point::Vertex(self.rand_word(rng, self.point_len))
    }

    fn rand_point_set(&self, rng: &mut ChaCha8Rng, max_size: usize) -> Vec<Point> {
        let k = rng.gen_range(1..=max_size);
        let mut set: Vec<Point> = Vec::new();
        for _ in 0..k {
            let p = self.rand_vertex(rng);
            if !set.contains(&p) {
                set.push(p);
            }
        }
        set.sort();
        set
    }

    fn rand_scalar(&self, rng: &mut ChaCha8Rng) -> Scalar {
        match self.domain {
            Domain::Fp(p) => Scalar::Fp(rng.gen_range(1..p as u64)),
            _ => self.domain.from_integer([-3, -2, -1, 1, 2, 3][rng.gen_range(0..6)]),
        }
    }

    fn rand_element(&self, rng: &mut ChaCha8Rng, max_terms: usize, max_len: usize) -> RingElement {
        let k = rng.gen_range(1..=max_terms);
        let mut e = RingElement::zero(self.domain);
        for _ in 0..k {
            let w = self.rand_word(rng, max_len);
            let c = self.rand_scalar(rng);
            e = e.add(&RingElement::term(self.domain, c, w)).unwrap();
        }
        e
    }

    fn rand_nonzero_element(&self, rng: &mut ChaCha8Rng, max_terms: usize, max_len: usize) -> RingElement {
        loop {
            let e = self.rand_element(rng, max_terms, max_len);
            if !e.is_zero() {
                return e;
            }
        }
    }

    /// An exact relation `Σ α_i ξ_i = 0` with the last element defined by the
    /// others, so the dependence certificate holds by construction. `None`
    /// when the sample degenerates or leaves the certified region.
    fn rand_exact_relation(
        &self,
        rng: &mut ChaCha8Rng,
        xi_len: usize,
        alpha_len: usize,
    ) -> Option<(Vec<RingVector>, Vec<RingElement>)> {
        let n = rng.gen_range(2..=3usize);
        let mut xs: Vec<RingVector> = Vec::new();
        let mut alphas: Vec<RingElement> = Vec::new();
        for _ in 0..(n - 1) {
            xs.push(RingVector::from_element(self.rand_nonzero_element(rng, 3, xi_len)));
            alphas.push(self.rand_nonzero_element(rng, 2, alpha_len));
        }
        let lambda = self.rand_scalar(rng);
        let g = self.rand_word(rng, alpha_len);
        let mut total = RingVector::zero(self.domain, 1);
        for (x, a) in xs.iter().zip(&alphas) {
            total = total.add(&x.left_mul(a).ok()?).ok()?;
        }
        let unit_inv = RingElement::term(self.domain, self.domain.inv(&lambda).ok()?, g.inverse());
        let xn = total.left_mul(&unit_inv).ok()?.neg();
        if xn.is_zero() {
            return None;
        }
        xs.push(xn);
        alphas.push(RingElement::term(self.domain, lambda, g));
        for x in &xs {
            measure(x, self.oracle).ok()?;
        }
        for (x, a) in xs.iter().zip(&alphas) {
            measure(&x.left_mul(a).ok()?, self.oracle).ok()?;
            // each expanded member and its color representative must be
            // certified, not only the full product
            for (g, _) in a.terms() {
                measure(&x.translate(g), self.oracle).ok()?;
            }
            measure(&x.color_key().ok()?.representative, self.oracle).ok()?;
        }
        Some((xs, alphas))
    }

    /// Drop points one at a time while the failure persists.
    fn shrink_set(set: &[Point], bad: impl Fn(&[Point]) -> bool) -> Vec<Point> {
        let mut cur = set.to_vec();
        loop {
            let mut shrunk = false;
            for i in 0..cur.len() {
                let mut cand = cur.clone();
                cand.remove(i);
                if !cand.is_empty() && bad(&cand) {
                    cur = cand;
                    shrunk = true;
                    break;
                }
            }
            if !shrunk {
                return cur;
            }
        }
    }
}

fn fmt_points(set: &[Point]) -> String {
    let items: Vec<String> = set.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", items.join(", "))
}

fn ceil_log2(x: usize) -> i64 {
    let mut t = 0i64;
    while (1usize << t) < x {
        t += 1;
    }
    t
}

/// Grid points of the oracle within `radius` of a vertex, for exhaustive
/// ball scans: enumerated by translation on the tree, filtered from the
/// certified grid on a graph oracle.
fn points_within(oracle: &SpaceOracle, center: &Point, radius: Rat) -> Result<Vec<Point>> {
    match oracle {
        SpaceOracle::Tree(t) => {
            let c = center
                .vertex_word()
                .ok_or_else(|| Error::Precondition("vertex center expected".into()))?;
            let reach = radius.ceil().to_integer().max(0) as usize;
            let mut pts = Vec::new();
            for w in crate::words::ball(&t.alphabet, reach) {
                let v = c.mul(&w);
                pts.push(Point::Vertex(v.clone()));
                for l in t.alphabet.letters() {
                    pts.push(Point::mid(v.clone(), v.mul(&Word::from_letter(l))));
                }
            }
            pts.sort();
            pts.dedup();
            pts.retain(|p| oracle.dist(center, p).map(|d| d <= radius).unwrap_or(false));
            Ok(pts)
        }
        SpaceOracle::Ball(_) => {
            let mut pts = oracle.certified_grid()?;
            pts.retain(|p| oracle.dist(center, p).map(|d| d <= radius).unwrap_or(false));
            Ok(pts)
        }
    }
}

pub fn audit_lemmas(oracle: &SpaceOracle, opts: &AuditOptions) -> Result<AuditReport> {
    if opts.trials < 1 {
        return Err(Error::Precondition("at least one trial is required".into()));
    }
    let point_len = match oracle {
        SpaceOracle::Tree(_) => 4,
        SpaceOracle::Ball(b) => b.certified_radius().clamp(1, 3),
    };
    let mut auditor = Auditor {
        oracle,
        domain: opts.domain,
        unsafe_mode: opts.unsafe_mode || !oracle.is_tree(),
        point_len,
        tallies: BTreeMap::new(),
    };
    for trial in 0..opts.trials {
        let mut seed_bytes = [0u8; 32];
        seed_bytes[..8].copy_from_slice(&opts.seed.to_le_bytes());
        seed_bytes[8..16].copy_from_slice(&trial.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(seed_bytes);
        run_trial(&mut auditor, &mut rng)?;
    }
    let notes = vec![
        "ball scans run on the half-integer grid; graph-oracle inequalities use the oracle's four-point delta"
            .to_string(),
    ];
    Ok(AuditReport { trials: opts.trials, seed: opts.seed, tallies: auditor.tallies, notes })
}

fn run_trial(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let tag = |name: &'static str| move |e: Error| Error::Internal(format!("[{name}] {e}"));
    metric_checks(a, rng).map_err(tag("metric"))?;
    center_lemmas(a, rng).map_err(tag("center"))?;
    ball_intersection(a, rng).map_err(tag("balls"))?;
    product_chain(a, rng).map_err(tag("chain"))?;
    four_point_checks(a, rng).map_err(tag("fourpt"))?;
    ring_laws(a, rng).map_err(tag("ring"))?;
    extremal_structure(a, rng).map_err(tag("extremal"))?;
    reduction_contract(a, rng).map_err(tag("reduction"))?;
    Ok(())
}

fn metric_checks(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let o = a.oracle;
    let (p, q, r) = (a.rand_vertex(rng), a.rand_vertex(rng), a.rand_vertex(rng));
    let dpq = o.dist(&p, &q)?;
    let ok = dpq == o.dist(&q, &p)?
        && dpq >= rat(0)
        && (dpq == rat(0)) == (p == q)
        && o.dist(&p, &r)? <= dpq + o.dist(&q, &r)?;
    a.check("metric-axioms", ok, || format!("p={p} q={q} r={r}"));

    let g = a.rand_word(rng, 2);
    match (o.act(&g, &p), o.act(&g, &q)) {
        (Ok(gp), Ok(gq)) => {
            let ok = o.dist(&gp, &gq)? == dpq;
            a.check("isometric-action", ok, || format!("g={g} p={p} q={q}"));
        }
        _ => a.skip("isometric-action"),
    }
    Ok(())
}

fn center_lemmas(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let o = a.oracle;
    let delta = o.delta();
    let set = a.rand_point_set(rng, 6);
    let (c, rb) = eps_center(o, &set)?;

    // Gromov products against the center dominate the size average
    let max_abs = {
        let mut m = rat(0);
        for p in &set {
            m = m.max(o.abs(p)?);
        }
        m
    };
    let mut ft_ok = true;
    let mut ft_witness = String::new();
    for p in &set {
        let prod = gromov_product(o, p, &c, &o.origin())?;
        if !(o.abs(&c)? >= prod && prod >= (max_abs + o.abs(p)?) / 2 - rb) {
            ft_ok = false;
            ft_witness = format!("p={p} set={}", fmt_points(&set));
            break;
        }
    }
    a.check("center-gromov-product-bound", ft_ok, || ft_witness.clone());

    // exact radius sits between half the diameter and half the diameter + δ
    let (r_true, exact_centers) = exact_radius(o, &set)?;
    let mut diam = rat(0);
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            diam = diam.max(o.dist(&set[i], &set[j])?);
        }
    }
    {
        let bad = |s: &[Point]| {
            let (r, _) = exact_radius(o, s).unwrap();
            let mut dd = rat(0);
            for i in 0..s.len() {
                for j in (i + 1)..s.len() {
                    dd = dd.max(o.dist(&s[i], &s[j]).unwrap());
                }
            }
            !(dd / 2 <= r && r <= dd / 2 + delta)
        };
        let ok = !bad(&set);
        a.check("radius-vs-diameter", ok, || fmt_points(&Auditor::shrink_set(&set, bad)));
    }

    // every exact center sits near every diameter midpoint, and the
    // midpoint-based center sits within its own slack
    let eps_c = {
        let mut cover = rat(0);
        for p in &set {
            cover = cover.max(o.dist(&c, p)?);
        }
        cover - r_true
    };
    let mut cm_ok = true;
    let mut cm_witness = String::new();
    for i in 0..set.len() {
        for j in (i + 1)..set.len() {
            if o.dist(&set[i], &set[j])? == diam {
                let grid = o.geodesic_grid(&set[i], &set[j])?;
                let m = grid[diam.to_integer() as usize].clone();
                for ec in &exact_centers {
                    if o.dist(ec, &m)? > delta * 2 {
                        cm_ok = false;
                        cm_witness = format!("center={ec} midpoint={m} set={}", fmt_points(&set));
                    }
                }
                if o.dist(&c, &m)? > eps_c + delta * 2 {
                    cm_ok = false;
                    cm_witness = format!("eps-center={c} midpoint={m} set={}", fmt_points(&set));
                }
            }
        }
    }
    a.check("center-vs-midpoint", cm_ok, || cm_witness.clone());

    // distance from the origin to a center
    let ok_lo = max_abs - rb <= o.abs(&c)?;
    let ok_hi = o.abs(&c)? <= max_abs - r_true + delta * 4 + eps_c;
    a.check("center-distance-to-origin", ok_lo && ok_hi, || {
        format!("set={} c={c} r={r_true} eps={eps_c}", fmt_points(&set))
    });

    // free action on finite subsets (exact statement on the tree)
    if o.is_tree() {
        let g = loop {
            let g = a.rand_word(rng, 3);
            if !g.is_empty() {
                break g;
            }
        };
        let moved: std::collections::BTreeSet<Point> = set.iter().map(|p| p.translate(&g)).collect();
        let orig: std::collections::BTreeSet<Point> = set.iter().cloned().collect();
        a.check("free-action-on-finite-sets", moved != orig, || {
            format!("g={g} set={}", fmt_points(&set))
        });
    } else {
        a.skip("free-action-on-finite-sets");
    }
    Ok(())
}

fn ball_intersection(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let o = a.oracle;
    let delta = o.delta();
    let c1 = a.rand_vertex(rng);
    let c2 = a.rand_vertex(rng);
    let r1 = half(rng.gen_range(0..=6));
    let r2 = half(rng.gen_range(0..=6));
    let mut inter = Vec::new();
    for p in points_within(o, &c1, r1)? {
        if o.dist(&c2, &p)? <= r2 {
            inter.push(p);
        }
    }
    if inter.is_empty() {
        a.skip("ball-intersection-diameter");
        return Ok(());
    }
    let mut diam = rat(0);
    for i in 0..inter.len() {
        for j in (i + 1)..inter.len() {
            diam = diam.max(o.dist(&inter[i], &inter[j])?);
        }
    }
    let bound = r1 + r2 - o.dist(&c1, &c2)? + delta * 2;
    a.check("ball-intersection-diameter", diam <= bound, || {
        format!("c1={c1} r1={r1} c2={c2} r2={r2} diam={diam} bound={bound}")
    });
    Ok(())
}

fn product_chain(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let o = a.oracle;
    let k = rng.gen_range(1..=3usize);
    let len = (1usize << k) + 1;
    let chain: Vec<Point> = (0..len).map(|_| a.rand_vertex(rng)).collect();
    let origin = o.origin();
    let mut min_link: Option<Rat> = None;
    for w in chain.windows(2) {
        let prod = gromov_product(o, &w[0], &w[1], &origin)?;
        min_link = Some(min_link.map_or(prod, |m: Rat| m.min(prod)));
    }
    let ends = gromov_product(o, &chain[0], &chain[len - 1], &origin)?;
    let bound = min_link.unwrap() - rat(k as i64) * o.delta();
    a.check("product-chain-inequality", ends >= bound, || {
        format!("chain={} ends={ends} bound={bound}", fmt_points(&chain))
    });
    Ok(())
}

fn four_point_checks(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let o = a.oracle;
    let set = a.rand_point_set(rng, 6);
    let (d_all, _) = four_point_delta(o, &set)?;
    if o.is_tree() {
        a.check("four-point-tree-zero", d_all == rat(0), || fmt_points(&set));
    } else {
        a.check("four-point-within-oracle-delta", d_all <= o.delta(), || {
            format!("set={} delta={} oracle={}", fmt_points(&set), d_all, o.delta())
        });
    }
    if set.len() > 1 {
        let sub: Vec<Point> = set.iter().take(set.len() - 1).cloned().collect();
        let (d_sub, _) = four_point_delta(o, &sub)?;
        a.check("four-point-monotone", d_sub <= d_all, || {
            format!("sub={} d_sub={d_sub} d_all={d_all}", fmt_points(&sub))
        });
    }
    let _ = rng;
    Ok(())
}

fn ring_laws(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    let o = a.oracle;
    let len = a.point_len / 2 + 1;
    let x = a.rand_nonzero_element(rng, 3, len);
    let y = a.rand_nonzero_element(rng, 3, len);
    let size = |e: &RingElement| -> Result<Size> {
        Ok(measure(&RingVector::from_element(e.clone()), o)?.abs)
    };

    let diff = x.sub(&y)?;
    let ok = size(&diff)? <= size(&x)?.max(size(&y)?);
    a.check("filtration-difference", ok, || format!("x={x} y={y}"));

    match x.mul(&y) {
        Ok(prod) => match measure(&RingVector::from_element(prod.clone()), o) {
            Ok(mp) => {
                let (Size::Fin(sx), Size::Fin(sy)) = (size(&x)?, size(&y)?) else {
                    unreachable!("nonzero elements have finite size")
                };
                let ok = match mp.abs {
                    Size::NegInf => true,
                    Size::Fin(sp) => sp <= sx + sy,
                };
                a.check("filtration-product", ok, || format!("x={x} y={y} xy={prod}"));
                if a.domain.is_field() {
                    a.check("no-zero-divisors", !prod.is_zero(), || format!("x={x} y={y}"));
                }
            }
            Err(_) => a.skip("filtration-product"),
        },
        Err(_) => a.skip("filtration-product"),
    }

    // size is additive on the positive monoid (tree metric)
    if o.is_tree() {
        let positive = |e: &RingElement| e.support().all(|w| w.is_positive());
        let xp = a.rand_nonzero_element(rng, 2, 2);
        let yp = a.rand_nonzero_element(rng, 2, 2);
        if positive(&xp) && positive(&yp) {
            let prod = xp.mul(&yp)?;
            if prod.is_zero() {
                a.skip("positive-monoid-additivity");
            } else {
                let (Size::Fin(sx), Size::Fin(sy), Size::Fin(sp)) =
                    (size(&xp)?, size(&yp)?, size(&prod)?)
                else {
                    unreachable!()
                };
                a.check("positive-monoid-additivity", sp == sx + sy, || format!("x={xp} y={yp}"));
            }
        } else {
            a.skip("positive-monoid-additivity");
        }
    }

    // diameter is invariant under left translation
    let g = a.rand_word(rng, 2);
    let xv = RingVector::from_element(x.clone());
    let moved = xv.translate(&g);
    match (measure(&xv, o), measure(&moved, o)) {
        (Ok(m1), Ok(m2)) => {
            a.check("translation-invariant-diameter", m1.diam == m2.diam, || format!("g={g} x={x}"));
        }
        _ => a.skip("translation-invariant-diameter"),
    }

    // color keys agree exactly for trivial-unit multiples, with a witness
    if a.domain.is_field() {
        let lambda = a.rand_scalar(rng);
        let mult = xv.translate(&g).scale(&lambda);
        let key_x = xv.color_key()?;
        let key_m = mult.color_key()?;
        let same = key_x.representative == key_m.representative;
        let witness_ok = match key_m.unit_from(&key_x, &a.domain)? {
            Some((l, w)) => xv.translate(&w).scale(&l) == mult,
            None => false,
        };
        a.check("color-key-witness", same && witness_ok, || format!("x={x} g={g} lambda={lambda}"));
    }
    Ok(())
}

fn extremal_structure(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    if !a.domain.is_field() {
        return Ok(());
    }
    let o = a.oracle;
    let delta = o.delta();
    let len = a.point_len / 2 + 1;
    // a family with deliberate same-color members through translated copies
    let mut elems: Vec<RingVector> = Vec::new();
    for _ in 0..rng.gen_range(1..=2usize) {
        elems.push(RingVector::from_element(a.rand_nonzero_element(rng, 3, len)));
    }
    for _ in 0..rng.gen_range(1..=2usize) {
        let base = elems[rng.gen_range(0..elems.len())].clone();
        let g = a.rand_word(rng, len);
        let lambda = a.rand_scalar(rng);
        elems.push(base.translate(&g).scale(&lambda));
    }
    let family = match Family::from_vectors(a.domain, elems) {
        Ok(f) if !f.members.is_empty() => f,
        _ => return Ok(()),
    };
    if family
        .members
        .iter()
        .any(|m| measure(&m.element, o).is_err() || measure(&m.key.representative, o).is_err())
    {
        a.skip("adjacent-center-distance");
        return Ok(());
    }
    let mu = if delta.is_zero() { rat(rng.gen_range(0..=1)) } else { delta * rat(rng.gen_range(0..=2)) };
    let graph = build_gamma(&family, mu, o)?;
    let n_colors = family.color_count;
    let eps_max = graph.color_geometry.iter().map(|g| g.eps).fold(rat(0), Rat::max);
    let radius_of = |v: usize| graph.color_geometry[family.members[v].color].radius;

    // centers of adjacent vertices
    let mut adjacent_ok = true;
    let mut adjacent_witness = String::new();
    for (v, w, _) in &graph.edges {
        let (cv, cw) = (member_center(&family, &graph, *v), member_center(&family, &graph, *w));
        let dist = o.dist(&cv, &cw)?;
        let gap = (radius_of(*v) - radius_of(*w)).abs();
        let bound = gap + mu * 2 + delta * 10 + eps_max * 4;
        if dist > bound {
            adjacent_ok = false;
            adjacent_witness = format!("v={v} w={w} dist={dist} bound={bound}");
        }
    }
    a.check("adjacent-center-distance", adjacent_ok, || adjacent_witness.clone());

    // centers along shortest paths in the graph
    let adj = graph.adjacency();
    let mut path_ok = true;
    let mut path_witness = String::new();
    for comp in &graph.components {
        for (ai, &v) in comp.iter().enumerate() {
            for &w in comp.iter().skip(ai + 1) {
                let mut prev: BTreeMap<usize, usize> = BTreeMap::from([(v, v)]);
                let mut queue = std::collections::VecDeque::from([v]);
                while let Some(u) = queue.pop_front() {
                    if u == w {
                        break;
                    }
                    for &nx in &adj[&u] {
                        prev.entry(nx).or_insert_with(|| {
                            queue.push_back(nx);
                            u
                        });
                    }
                }
                let mut path = vec![w];
                while *path.last().unwrap() != v {
                    path.push(prev[path.last().unwrap()]);
                }
                let m = path.len() - 1;
                let r_max_path = path.iter().map(|&u| radius_of(u)).fold(rat(0), Rat::max);
                let bound = (r_max_path - radius_of(v))
                    + (r_max_path - radius_of(w))
                    + mu * 2
                    + (rat(8) + rat(2 * ceil_log2(2 * m))) * delta
                    + eps_max * 4;
                let (cv, cw) = (member_center(&family, &graph, v), member_center(&family, &graph, w));
                if o.dist(&cv, &cw)? > bound {
                    path_ok = false;
                    path_witness = format!("v={v} w={w} m={m} bound={bound}");
                }
            }
        }
    }
    a.check("path-center-distance", path_ok, || path_witness.clone());

    // embedded paths and component diameters under the separation hypothesis
    let separation = mu * 2 + (rat(10) + rat(2 * n_colors as i64)) * delta + eps_max * 4;
    let mut same_color_separated = true;
    for (ai, &v) in graph.vertices.iter().enumerate() {
        for &w in graph.vertices.iter().skip(ai + 1) {
            if family.members[v].color == family.members[w].color {
                let (cv, cw) = (member_center(&family, &graph, v), member_center(&family, &graph, w));
                if o.dist(&cv, &cw)? <= separation {
                    same_color_separated = false;
                }
            }
        }
    }
    if same_color_separated {
        let bound = (1usize << n_colors) - 2;
        a.check("embedded-path-bound", graph.longest_embedded_path() <= bound, || {
            format!("path={} bound={bound}", graph.longest_embedded_path())
        });
        let comp_ok = graph.components.iter().all(|c| graph.component_diameter(c) <= bound);
        a.check("component-diameter-bound", comp_ok, || format!("bound={bound}"));
    } else {
        a.skip("embedded-path-bound");
        a.skip("component-diameter-bound");
    }

    // at most one vertex per color per component under the stronger separation
    let r1 = (0..n_colors).map(|c| graph.color_geometry[c].radius).fold(rat(0), Rat::max);
    let mut uniq_ok = true;
    let mut uniq_applicable = false;
    for color in 0..n_colors {
        let members: Vec<usize> = graph
            .vertices
            .iter()
            .copied()
            .filter(|&v| family.members[v].color == color)
            .collect();
        if members.len() < 2 {
            continue;
        }
        let threshold = (r1 - graph.color_geometry[color].radius) * 2 + separation;
        let mut separated = true;
        for (ai, &v) in members.iter().enumerate() {
            for &w in members.iter().skip(ai + 1) {
                let (cv, cw) = (member_center(&family, &graph, v), member_center(&family, &graph, w));
                if o.dist(&cv, &cw)? <= threshold {
                    separated = false;
                }
            }
        }
        if separated {
            uniq_applicable = true;
            for comp in &graph.components {
                if comp.iter().filter(|&&v| family.members[v].color == color).count() > 1 {
                    uniq_ok = false;
                }
            }
        }
    }
    if uniq_applicable {
        a.check("color-uniqueness-in-components", uniq_ok, || {
            "same-color vertices shared a component".into()
        });
    } else {
        a.skip("color-uniqueness-in-components");
    }

    // monotonicity of the graph in mu
    let bigger = build_gamma(&family, mu + rat(1), o)?;
    let mono = graph.vertices.iter().all(|v| bigger.is_vertex(*v))
        && graph.edges.iter().all(|e| bigger.edges.contains(e));
    a.check("gamma-monotone-in-mu", mono, || format!("mu={mu}"));
    Ok(())
}

fn reduction_contract(a: &mut Auditor, rng: &mut ChaCha8Rng) -> Result<()> {
    if !a.domain.is_field() {
        return Ok(());
    }
    let o = a.oracle;
    let len = a.point_len / 2 + 1;
    let Some((xs, alphas)) = a.rand_exact_relation(rng, len, len.min(2)) else {
        a.skip("reduction-step-contract");
        return Ok(());
    };

    // the expanded family defines a relation of every strength, and its
    // extremal components each define their own
    let family = crate::extremal::expand_relation(&xs, &alphas)?;
    let family_certified = family
        .members
        .iter()
        .all(|m| measure(&m.element, o).is_ok() && measure(&m.key.representative, o).is_ok());
    if !family_certified {
        a.skip("exact-relations-are-mu-relations");
        a.skip("component-relations");
        a.skip("reduction-step-contract");
        return Ok(());
    }
    if !family.members.is_empty() {
        let rel = is_mu_relation(&family, rat(0), o)?;
        a.check("exact-relations-are-mu-relations", rel, || format!("{} members", family.members.len()));
        let graph = build_gamma(&family, o.delta(), o)?;
        match component_relations(&family, &graph, o.delta(), o) {
            Ok(out) => {
                a.check("component-relations", out.all_hold, || "a component lost its relation".into())
            }
            Err(_) => a.skip("component-relations"),
        }
    }

    let constants = match ReductionConstants::for_tuple(o, &xs) {
        Ok(c) => c,
        Err(_) => {
            a.skip("reduction-step-contract");
            return Ok(());
        }
    };
    match reduce_step(&xs, &alphas, o, &constants, a.unsafe_mode) {
        Ok(step) => {
            let dec_ok = match (step.diam_after, step.diam_before) {
                (Size::NegInf, _) => true,
                (Size::Fin(after), Size::Fin(before)) => after < before - o.delta(),
                _ => false,
            };
            let mut sum = RingVector::zero(a.domain, xs[0].width());
            for (b, x) in step.beta.iter().zip(&xs) {
                sum = sum.add(&x.left_mul(b)?)?;
            }
            a.check("reduction-step-contract", dec_ok && sum == step.result, || {
                format!("before={} after={}", step.diam_before, step.diam_after)
            });
            if o.is_tree() {
                a.check("reduction-internal-inequalities", step.diagnostics.is_empty(), || {
                    step.diagnostics.join("; ")
                });
            } else if !step.diagnostics.is_empty() {
                a.skip("reduction-internal-diagnostics");
            }

            match zero_coordinate(&xs, &alphas, o, a.unsafe_mode) {
                Ok((log, out)) => {
                    let replayed = log.applied_to(&xs)?;
                    let back = log.inverse(&a.domain)?.applied_to(&out)?;
                    a.check(
                        "reduction-log-replay",
                        replayed == out && back == xs && out.iter().any(|x| x.is_zero()),
                        || format!("{} ops", log.ops.len()),
                    );
                }
                Err(Error::HypothesisNotMet(_)) if !o.is_tree() => a.skip("reduction-log-replay"),
                Err(Error::UncertifiedSupport(_)) => a.skip("reduction-log-replay"),
                Err(e) => return Err(e),
            }
        }
        Err(Error::HypothesisNotMet(_)) if !o.is_tree() => a.skip("reduction-step-contract"),
        Err(Error::UncertifiedSupport(_)) => a.skip("reduction-step-contract"),
        Err(Error::Precondition(_)) => a.skip("reduction-step-contract"),
        Err(e) => return Err(e),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::Alphabet;

    #[test]
    fn tree_audit_is_clean() {
        let t = SpaceOracle::tree(Alphabet::new(2).unwrap());
        let opts = AuditOptions { trials: 60, seed: 42, domain: Domain::Rational, unsafe_mode: false };
        let report = audit_lemmas(&t, &opts).unwrap();
        assert!(report.ok(), "failures: {:?}", report.tallies);
        assert!(report.tallies["metric-axioms"].checks >= 60);
    }

    #[test]
    fn tree_audit_over_f2() {
        let t = SpaceOracle::tree(Alphabet::new(2).unwrap());
        let opts = AuditOptions { trials: 40, seed: 7, domain: Domain::fp(2).unwrap(), unsafe_mode: false };
        let report = audit_lemmas(&t, &opts).unwrap();
        assert!(report.ok(), "failures: {:?}", report.tallies);
    }

    #[test]
    fn zero_trials_rejected() {
        let t = SpaceOracle::tree(Alphabet::new(2).unwrap());
        let opts = AuditOptions { trials: 0, seed: 1, domain: Domain::Rational, unsafe_mode: false };
        assert!(audit_lemmas(&t, &opts).is_err());
    }

    #[test]
    fn determinism_same_seed_same_tallies() {
        let t = SpaceOracle::tree(Alphabet::new(2).unwrap());
        let opts = AuditOptions { trials: 25, seed: 9, domain: Domain::Rational, unsafe_mode: false };
        let r1 = audit_lemmas(&t, &opts).unwrap();
        let r2 = audit_lemmas(&t, &opts).unwrap();
        assert_eq!(format!("{:?}", r1.tallies), format!("{:?}", r2.tallies));
    }
}

